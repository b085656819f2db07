//! Cell-level geometry of partitions and skew shapes.
//!
//! Rows grow downward and columns grow rightward, so the north-east corner
//! of a shape is its top-right and the diagonal of a cell is `col - row`.
//! Shapes are identified up to translation: two [`SkewShape`]s are equal
//! exactly when their canonical cell sets agree, whatever `λ/μ` produced them.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A weakly decreasing sequence of positive integers.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Partition(Vec<u32>);

impl Partition {
    /// Builds a partition, dropping trailing zeros.
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.windows(2).any(|w| w[0] < w[1]) || parts.contains(&0) {
            return Err(Error::NotPartition(parts));
        }
        Ok(Partition(parts))
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Number of nonzero rows.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Part `i` (0-based), zero beyond the last row.
    pub fn part(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    /// Componentwise containment `other ≤ self` in Young's lattice.
    pub fn contains(&self, other: &Partition) -> bool {
        other.len() <= self.len() && other.0.iter().zip(&self.0).all(|(a, b)| a <= b)
    }

    pub fn conjugate(&self) -> Partition {
        let cols = self.part(0);
        Partition(
            (0..cols)
                .map(|j| self.0.iter().filter(|&&p| p > j).count() as u32)
                .collect(),
        )
    }

    /// All partitions of `n`, largest first in lexicographic order.
    pub fn all_of_size(n: u32) -> Vec<Partition> {
        fn go(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if rest == 0 {
                out.push(Partition(cur.clone()));
                return;
            }
            for p in (1..=rest.min(max)).rev() {
                cur.push(p);
                go(rest - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        go(n, n, &mut Vec::new(), &mut out);
        out
    }

    /// Partitions fitting in a `rows × cols` box.
    pub fn all_in_box(rows: usize, cols: u32) -> Vec<Partition> {
        fn go(rows: usize, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            out.push(Partition(cur.clone()));
            if cur.len() == rows {
                return;
            }
            for p in 1..=max {
                cur.push(p);
                go(rows, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        go(rows, cols, &mut Vec::new(), &mut out);
        out
    }

    /// The rectangle this partition becomes when its lower right corner is
    /// filled, if it is a rectangle minus that corner. A single box is read
    /// as the `1 × 2` rectangle minus a corner.
    pub fn filled_corner(&self) -> Option<Partition> {
        let (&last, body) = self.0.split_last()?;
        let width = match body.first() {
            Some(&w) => w,
            None => last + 1,
        };
        if body.iter().any(|&p| p != width) {
            return None;
        }
        if last + 1 == width {
            Some(Partition(vec![width; self.len()]))
        } else if width == 1 && last == 1 {
            // a single column (1^k) is the (k+1) × 1 rectangle minus its bottom box
            Some(Partition(vec![1; self.len() + 1]))
        } else {
            None
        }
    }

    pub fn is_rectangle_minus_corner(&self) -> bool {
        self.filled_corner().is_some()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "0" || s == "∅" {
            return Ok(Partition::empty());
        }
        let parts = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad part {p:?} in {s:?}")))
            })
            .collect::<Result<Vec<u32>>>()?;
        Partition::new(parts)
    }
}

/// A lattice cell; doubles as a translation vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Cell {
    pub row: i32,
    pub col: i32,
}

impl Cell {
    pub const fn new(row: i32, col: i32) -> Self {
        Cell { row, col }
    }

    pub fn diagonal(self) -> i32 {
        self.col - self.row
    }

    fn neighbours(self) -> [Cell; 4] {
        [
            Cell::new(self.row - 1, self.col),
            Cell::new(self.row + 1, self.col),
            Cell::new(self.row, self.col - 1),
            Cell::new(self.row, self.col + 1),
        ]
    }
}

impl Add for Cell {
    type Output = Cell;
    fn add(self, o: Cell) -> Cell {
        Cell::new(self.row + o.row, self.col + o.col)
    }
}

impl Sub for Cell {
    type Output = Cell;
    fn sub(self, o: Cell) -> Cell {
        Cell::new(self.row - o.row, self.col - o.col)
    }
}

impl Neg for Cell {
    type Output = Cell;
    fn neg(self) -> Cell {
        Cell::new(-self.row, -self.col)
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}

/// A finite set of cells.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CellSet(BTreeSet<Cell>);

impl CellSet {
    pub fn new() -> Self {
        CellSet(BTreeSet::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, c: &Cell) -> bool {
        self.0.contains(c)
    }

    pub fn insert(&mut self, c: Cell) -> bool {
        self.0.insert(c)
    }

    pub fn iter(&self) -> impl Iterator<Item = Cell> + '_ {
        self.0.iter().copied()
    }

    /// Smallest cell in (row, col) order.
    pub fn first(&self) -> Option<Cell> {
        self.0.first().copied()
    }

    /// The (min row, min col) corner of the bounding box.
    pub fn origin(&self) -> Option<Cell> {
        let r = self.0.iter().map(|c| c.row).min()?;
        let c = self.0.iter().map(|c| c.col).min()?;
        Some(Cell::new(r, c))
    }

    pub fn translated(&self, by: Cell) -> CellSet {
        self.iter().map(|c| c + by).collect()
    }

    /// Translate so that the minimum row and minimum column are both zero.
    pub fn canonical(&self) -> CellSet {
        match self.origin() {
            Some(o) => self.translated(-o),
            None => CellSet::new(),
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.origin().is_none_or(|o| o == Cell::new(0, 0))
    }

    pub fn union(&self, other: &CellSet) -> CellSet {
        CellSet(self.0.union(&other.0).copied().collect())
    }

    pub fn difference(&self, other: &CellSet) -> CellSet {
        CellSet(self.0.difference(&other.0).copied().collect())
    }

    pub fn intersection(&self, other: &CellSet) -> CellSet {
        CellSet(self.0.intersection(&other.0).copied().collect())
    }

    pub fn is_subset(&self, other: &CellSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn is_disjoint(&self, other: &CellSet) -> bool {
        self.0.is_disjoint(&other.0)
    }

    /// If `other` is a translate of `self`, the vector taking `self` onto it.
    pub fn translation_to(&self, other: &CellSet) -> Option<Cell> {
        if self.len() != other.len() {
            return None;
        }
        let t = other.first()? - self.first()?;
        (self.translated(t) == *other).then_some(t)
    }

    /// Edge-connected components, in order of their smallest cell.
    pub fn components(&self) -> Vec<CellSet> {
        let mut seen: HashSet<Cell> = HashSet::new();
        let mut out = Vec::new();
        for start in self.iter() {
            if !seen.insert(start) {
                continue;
            }
            let mut comp = CellSet::new();
            let mut queue = VecDeque::from([start]);
            while let Some(c) = queue.pop_front() {
                comp.insert(c);
                for n in c.neighbours() {
                    if self.contains(&n) && seen.insert(n) {
                        queue.push_back(n);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    /// True for the empty set and for edge-connected sets.
    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    pub fn diagonals(&self) -> BTreeSet<i32> {
        self.iter().map(Cell::diagonal).collect()
    }

    pub fn min_diagonal(&self) -> Option<i32> {
        self.iter().map(Cell::diagonal).min()
    }

    pub fn max_diagonal(&self) -> Option<i32> {
        self.iter().map(Cell::diagonal).max()
    }

    /// Does some 2×2 block lie inside the set?
    pub fn has_square(&self) -> bool {
        self.iter().any(|c| {
            self.contains(&Cell::new(c.row, c.col + 1))
                && self.contains(&Cell::new(c.row + 1, c.col))
                && self.contains(&Cell::new(c.row + 1, c.col + 1))
        })
    }

    /// Rightmost cell of the top row.
    pub fn northeast(&self) -> Option<Cell> {
        let top = self.iter().map(|c| c.row).min()?;
        self.iter().filter(|c| c.row == top).max_by_key(|c| c.col)
    }

    /// Bottom cell of the leftmost column.
    pub fn southwest(&self) -> Option<Cell> {
        let left = self.iter().map(|c| c.col).min()?;
        self.iter().filter(|c| c.col == left).max_by_key(|c| c.row)
    }

    /// Rim cells of one side, ordered from the south-west end to the
    /// north-east end (increasing diagonal).
    ///
    /// The north-west rim holds the cells whose north-west diagonal neighbour
    /// is absent; the south-east rim those whose south-east neighbour is absent.
    pub fn rim(&self, side: Rim) -> Vec<Cell> {
        let step = match side {
            Rim::NorthWest => Cell::new(-1, -1),
            Rim::SouthEast => Cell::new(1, 1),
        };
        let mut rim: Vec<Cell> = self
            .iter()
            .filter(|&c| !self.contains(&(c + step)))
            .collect();
        rim.sort_by_key(|c| (c.diagonal(), c.row));
        rim
    }

    /// Nonempty rows as `(row, first col, last col)`, or `None` if some
    /// row has a gap.
    fn row_intervals(&self) -> Option<BTreeMap<i32, (i32, i32)>> {
        let mut rows: BTreeMap<i32, Vec<i32>> = BTreeMap::new();
        for c in self.iter() {
            rows.entry(c.row).or_default().push(c.col);
        }
        let mut out = BTreeMap::new();
        for (r, cols) in rows {
            let (lo, hi) = (cols[0], *cols.last().unwrap());
            if (hi - lo + 1) as usize != cols.len() {
                return None;
            }
            out.insert(r, (lo, hi));
        }
        Some(out)
    }
}

impl FromIterator<Cell> for CellSet {
    fn from_iter<I: IntoIterator<Item = Cell>>(iter: I) -> Self {
        CellSet(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a CellSet {
    type Item = &'a Cell;
    type IntoIter = std::collections::btree_set::Iter<'a, Cell>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Display for CellSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.iter().map(|c| c.to_string()).collect();
        write!(f, "{{{}}}", cells.join(","))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rim {
    NorthWest,
    SouthEast,
}

/// A skew shape `λ/μ` together with its canonical cell set.
///
/// Equality, ordering and hashing only look at the canonical cells.
#[derive(Clone, Debug)]
pub struct SkewShape {
    outer: Partition,
    inner: Partition,
    cells: CellSet,
}

impl PartialEq for SkewShape {
    fn eq(&self, other: &Self) -> bool {
        self.cells == other.cells
    }
}

impl Eq for SkewShape {}

impl Hash for SkewShape {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.cells.hash(state);
    }
}

impl PartialOrd for SkewShape {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SkewShape {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.size()
            .cmp(&other.size())
            .then_with(|| self.cells.cmp(&other.cells))
    }
}

impl SkewShape {
    pub fn new(outer: Partition, inner: Partition) -> Result<Self> {
        if !outer.contains(&inner) {
            return Err(Error::NotContained {
                outer: outer.to_string(),
                inner: inner.to_string(),
            });
        }
        let cells = (0..outer.len())
            .flat_map(|i| {
                (inner.part(i)..outer.part(i)).map(move |j| Cell::new(i as i32, j as i32))
            })
            .collect::<CellSet>()
            .canonical();
        Ok(SkewShape {
            outer,
            inner,
            cells,
        })
    }

    pub fn from_partition(p: Partition) -> Self {
        SkewShape::new(p, Partition::empty()).expect("∅ ≤ λ")
    }

    pub fn empty() -> Self {
        SkewShape::from_partition(Partition::empty())
    }

    /// Recovers the minimal `λ/μ` realising a cell set (any translate).
    ///
    /// Each row must be a contiguous interval, left and right ends weakly
    /// decrease going down, and across a run of empty rows the upper row
    /// must lie strictly to the right of the lower one.
    pub fn from_cells(cells: &CellSet) -> Result<Self> {
        let cells = cells.canonical();
        if cells.is_empty() {
            return Ok(SkewShape::empty());
        }
        let rows = cells
            .row_intervals()
            .ok_or_else(|| Error::NotSkew(format!("{cells}: a row is not contiguous")))?;
        let last_row = *rows.keys().next_back().unwrap();
        let mut prev: Option<(i32, (i32, i32))> = None;
        for (&r, &(l, h)) in &rows {
            if let Some((pr, (pl, ph))) = prev {
                if l > pl || h > ph {
                    return Err(Error::NotSkew(format!(
                        "{cells}: row {r} sticks out to the right of row {pr}"
                    )));
                }
                if r > pr + 1 && h >= pl {
                    return Err(Error::NotSkew(format!(
                        "{cells}: rows {pr} and {r} overlap across an empty row"
                    )));
                }
            }
            prev = Some((r, (l, h)));
        }
        let mut outer = Vec::with_capacity(last_row as usize + 1);
        let mut inner = Vec::with_capacity(last_row as usize + 1);
        for r in 0..=last_row {
            match rows.get(&r) {
                Some(&(l, h)) => {
                    outer.push((h + 1) as u32);
                    inner.push(l as u32);
                }
                None => {
                    let (_, &(_, h)) = rows.range(r..).next().unwrap();
                    outer.push((h + 1) as u32);
                    inner.push((h + 1) as u32);
                }
            }
        }
        let outer = Partition::new(outer)?;
        let inner = Partition::new(inner)?;
        Ok(SkewShape {
            outer,
            inner,
            cells,
        })
    }

    pub fn outer(&self) -> &Partition {
        &self.outer
    }

    pub fn inner(&self) -> &Partition {
        &self.inner
    }

    /// Canonical cells (min row and min col are zero).
    pub fn cells(&self) -> &CellSet {
        &self.cells
    }

    pub fn size(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// The same cells, re-expressed through the minimal `λ/μ`.
    pub fn minimal(&self) -> SkewShape {
        SkewShape::from_cells(&self.cells).expect("canonical cells of a skew shape")
    }

    pub fn is_partition(&self) -> bool {
        self.minimal().inner.is_empty()
    }

    pub fn rotate180(&self) -> SkewShape {
        let rotated: CellSet = self.cells.iter().map(|c| -c).collect();
        SkewShape::from_cells(&rotated).expect("rotation of a skew shape is skew")
    }

    pub fn components(&self) -> Vec<SkewShape> {
        self.cells
            .components()
            .iter()
            .map(|c| SkewShape::from_cells(c).expect("component of a skew shape is skew"))
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        self.cells.is_connected()
    }

    pub fn is_ribbon(&self) -> bool {
        !self.cells.has_square()
    }

    pub fn is_connected_ribbon(&self) -> bool {
        !self.is_empty() && self.is_connected() && self.is_ribbon()
    }

    /// Row lengths, top row first, of a connected ribbon.
    pub fn ribbon_composition(&self) -> Result<RibbonComposition> {
        if !self.is_connected_ribbon() {
            return Err(Error::NotConnectedRibbon(self.to_string()));
        }
        let rows = self.cells.row_intervals().expect("skew rows are intervals");
        Ok(RibbonComposition(
            rows.values().map(|&(l, h)| (h - l + 1) as u32).collect(),
        ))
    }

    /// Rim of a connected shape, south-west end first.
    pub fn rim(&self, side: Rim) -> Result<Vec<Cell>> {
        if !self.is_connected() {
            return Err(Error::Disconnected(self.to_string()));
        }
        Ok(self.cells.rim(side))
    }

    pub fn northeast(&self) -> Option<Cell> {
        self.cells.northeast()
    }

    pub fn southwest(&self) -> Option<Cell> {
        self.cells.southwest()
    }

    /// Placements of `w` inside `self` that contain the north-east-most cell.
    pub fn placements_in_top(&self, w: &SkewShape) -> Vec<CellSet> {
        self.placements_through(w, self.northeast())
    }

    /// Placements of `w` inside `self` that contain the south-west-most cell.
    pub fn placements_in_bottom(&self, w: &SkewShape) -> Vec<CellSet> {
        self.placements_through(w, self.southwest())
    }

    fn placements_through(&self, w: &SkewShape, anchor: Option<Cell>) -> Vec<CellSet> {
        let Some(anchor) = anchor else {
            return Vec::new();
        };
        if w.is_empty() || !w.is_connected() {
            return Vec::new();
        }
        w.cells
            .iter()
            .map(|p| w.cells.translated(anchor - p))
            .filter(|placed| placed.is_subset(&self.cells))
            .collect()
    }
}

impl fmt::Display for SkewShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inner.is_empty() {
            write!(f, "{}", self.outer)
        } else {
            write!(f, "{}/{}", self.outer, self.inner)
        }
    }
}

impl FromStr for SkewShape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.split_once('/') {
            Some((o, i)) => SkewShape::new(o.parse()?, i.parse()?),
            None => Ok(SkewShape::from_partition(s.parse()?)),
        }
    }
}

impl Serialize for SkewShape {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.minimal().to_string())
    }
}

/// Row lengths of a connected ribbon, top row first.
///
/// Consecutive rows share exactly one column: the last cell of a lower row
/// sits directly beneath the first cell of the row above it.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RibbonComposition(Vec<u32>);

impl FromStr for RibbonComposition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let rows = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad part {p:?} in {s:?}")))
            })
            .collect::<Result<Vec<u32>>>()?;
        RibbonComposition::new(rows)
    }
}

impl RibbonComposition {
    pub fn new(rows: Vec<u32>) -> Result<Self> {
        if rows.is_empty() || rows.contains(&0) {
            return Err(Error::Parse(format!("not a composition: {rows:?}")));
        }
        Ok(RibbonComposition(rows))
    }

    pub fn rows(&self) -> &[u32] {
        &self.0
    }

    pub fn row_count(&self) -> usize {
        self.0.len()
    }

    pub fn column_count(&self) -> u32 {
        self.size() - self.0.len() as u32 + 1
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn reversed(&self) -> RibbonComposition {
        RibbonComposition(self.0.iter().rev().copied().collect())
    }

    pub fn cells(&self) -> CellSet {
        let mut cells = CellSet::new();
        let mut start = 0i32;
        for (r, &len) in self.0.iter().enumerate().rev() {
            for j in 0..len as i32 {
                cells.insert(Cell::new(r as i32, start + j));
            }
            start += len as i32 - 1;
        }
        cells
    }

    pub fn to_shape(&self) -> SkewShape {
        SkewShape::from_cells(&self.cells()).expect("ribbon cells form a skew shape")
    }
}

impl fmt::Display for RibbonComposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Every connected skew shape with exactly `n` cells, sorted.
pub fn connected_skew_shapes(n: usize) -> Vec<SkewShape> {
    // rows top to bottom as column intervals; the next row lies weakly left
    // and shares at least one column with the row above
    fn go(rows: &mut Vec<(i32, i32)>, left: usize, out: &mut Vec<SkewShape>) {
        if left == 0 {
            let cells: CellSet = rows
                .iter()
                .enumerate()
                .flat_map(|(r, &(l, h))| (l..=h).map(move |c| Cell::new(r as i32, c)))
                .collect();
            out.push(SkewShape::from_cells(&cells).expect("generated rows form a skew shape"));
            return;
        }
        let (pl, ph) = *rows.last().unwrap();
        for h in pl..=ph {
            for len in 1..=left as i32 {
                let l = h - len + 1;
                if l > pl {
                    continue;
                }
                rows.push((l, h));
                go(rows, left - len as usize, out);
                rows.pop();
            }
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    for first in 1..=n {
        let mut rows = vec![(0, first as i32 - 1)];
        go(&mut rows, n - first, &mut out);
    }
    out.sort();
    out.dedup();
    out
}

/// Every skew shape `λ/μ` with `λ` inside a `rows × cols` box and at most
/// `max_size` cells, deduplicated by canonical cells.
pub fn skew_shapes_in_box(rows: usize, cols: u32, max_size: usize) -> Vec<SkewShape> {
    let parts = Partition::all_in_box(rows, cols);
    let mut seen = BTreeSet::new();
    for outer in &parts {
        for inner in &parts {
            if outer.contains(inner) && (outer.size() - inner.size()) as usize <= max_size {
                seen.insert(SkewShape::new(outer.clone(), inner.clone()).unwrap());
            }
        }
    }
    seen.into_iter().collect()
}
