//! Shapes of the form `W -> O -> W` and `W ^ O ^ W`, and the composition
//! `α ∘_W γ` built from them.
//!
//! A structure on `γ` fixes two translated copies of a connected shape `W`:
//! the upper copy contains the north-east box of `γ`, the lower copy its
//! south-west box. `shift` is the translation taking the lower copy onto
//! the upper one.
//!
//! In a composition the copy of `γ` for box `(i, j)` of `α` is translated by
//! `j·east − i·north`, where `east` and `north` are the offsets of the
//! neighbouring copies. For `->` shapes horizontal neighbours amalgamate
//! and vertical ones use the shifted overlay; `^` shapes swap the two.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hopf::{removable_ribbons, Side};
use crate::shapes::{connected_skew_shapes, Cell, CellSet, RibbonComposition, Rim, SkewShape};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    /// `W -> O -> W`
    Right,
    /// `W ^ O ^ W`
    Up,
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Orientation::Right => "W -> O -> W",
            Orientation::Up => "W ^ O ^ W",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WowStructure {
    gamma: SkewShape,
    orientation: Orientation,
    upper: CellSet,
    lower: CellSet,
    o: CellSet,
    w: SkewShape,
    shift: Cell,
}

fn cell_list(c: &CellSet) -> Vec<[i32; 2]> {
    c.iter().map(|c| [c.row, c.col]).collect()
}

fn is_shape(cells: &CellSet) -> bool {
    !cells.is_empty() && cells.is_connected() && SkewShape::from_cells(cells).is_ok()
}

/// A strictly larger shape on the diagonals of `upper` whose copies at
/// `upper` and `upper - shift` still lie in the top and bottom of the shape
/// with connected complements, if there is one.
fn enlargement(cells: &CellSet, upper: &CellSet, shift: Cell) -> Option<SkewShape> {
    let diagonals = upper.diagonals();
    let extra: Vec<Cell> = cells
        .iter()
        .filter(|c| {
            !upper.contains(c) && diagonals.contains(&c.diagonal()) && cells.contains(&(*c - shift))
        })
        .collect();
    assert!(extra.len() < 24, "too many enlargement candidates");
    for mask in 1u32..(1 << extra.len()) {
        let mut up = upper.clone();
        for (k, c) in extra.iter().enumerate() {
            if mask & (1 << k) != 0 {
                up.insert(*c);
            }
        }
        let low = up.translated(-shift);
        if is_shape(&up) && is_shape(&cells.difference(&up)) && is_shape(&cells.difference(&low)) {
            return SkewShape::from_cells(&up).ok();
        }
    }
    None
}

impl WowStructure {
    /// Validates every defining property, including maximality of `W`.
    pub fn new(
        gamma: &SkewShape,
        orientation: Orientation,
        upper: CellSet,
        lower: CellSet,
    ) -> Result<Self> {
        let s = Self::unchecked(gamma, orientation, upper, lower)?;
        if let Some(bigger) = enlargement(gamma.cells(), &s.upper, s.shift) {
            return Err(Error::InvalidStructure(format!(
                "W is not maximal: {bigger} also fits"
            )));
        }
        Ok(s)
    }

    /// All properties except maximality.
    fn unchecked(
        gamma: &SkewShape,
        orientation: Orientation,
        upper: CellSet,
        lower: CellSet,
    ) -> Result<Self> {
        let bad = |why: &str| Err(Error::InvalidStructure(why.to_string()));
        let cells = gamma.cells();
        if !gamma.is_connected() || gamma.is_empty() {
            return bad("gamma must be a nonempty connected shape");
        }
        let Some(shift) = lower.translation_to(&upper) else {
            return bad("the two copies of W are not translates");
        };
        if !upper.is_subset(cells) || !lower.is_subset(cells) {
            return bad("W copies must lie inside gamma");
        }
        let w = match SkewShape::from_cells(&upper) {
            Ok(w) if w.is_connected() && !w.is_empty() => w,
            _ => return bad("W must be a nonempty connected shape"),
        };
        if !upper.contains(&cells.northeast().unwrap()) {
            return bad("upper W does not contain the north-east box");
        }
        if !lower.contains(&cells.southwest().unwrap()) {
            return bad("lower W does not contain the south-west box");
        }
        if !is_shape(&cells.difference(&upper)) || !is_shape(&cells.difference(&lower)) {
            return bad("removing a copy of W must leave a connected shape");
        }
        let o = cells.difference(&upper).difference(&lower);
        if !is_shape(&o) {
            return bad("O must be a nonempty connected shape");
        }
        if upper.min_diagonal().unwrap() - lower.max_diagonal().unwrap() < 2 {
            return bad("no diagonal strictly between the copies of W");
        }
        let (sw, ne) = (o.southwest().unwrap(), o.northeast().unwrap());
        let (west_or_south, east_or_north) = match orientation {
            Orientation::Right => (Cell::new(0, -1), Cell::new(0, 1)),
            Orientation::Up => (Cell::new(1, 0), Cell::new(-1, 0)),
        };
        if !lower.contains(&(sw + west_or_south)) || !upper.contains(&(ne + east_or_north)) {
            return bad("O is not attached to the copies of W as the orientation requires");
        }
        Ok(WowStructure {
            gamma: gamma.clone(),
            orientation,
            upper,
            lower,
            o,
            w,
            shift,
        })
    }

    pub fn gamma(&self) -> &SkewShape {
        &self.gamma
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn upper(&self) -> &CellSet {
        &self.upper
    }

    pub fn lower(&self) -> &CellSet {
        &self.lower
    }

    pub fn o_cells(&self) -> &CellSet {
        &self.o
    }

    pub fn w(&self) -> &SkewShape {
        &self.w
    }

    /// Translation taking the lower copy of `W` onto the upper one.
    pub fn shift(&self) -> Cell {
        self.shift
    }

    /// Offset of the copy of `γ` belonging to the box east of a given box.
    pub fn east_step(&self) -> Cell {
        match self.orientation {
            Orientation::Right => self.shift,
            Orientation::Up => self.shift + Cell::new(1, 1),
        }
    }

    /// Offset of the copy of `γ` belonging to the box north of a given box.
    pub fn north_step(&self) -> Cell {
        match self.orientation {
            Orientation::Right => self.shift + Cell::new(-1, -1),
            Orientation::Up => self.shift,
        }
    }

    /// The same structure on `γ` rotated by 180 degrees: the copies of `W`
    /// trade places and the orientation is kept.
    pub fn rotated(&self) -> Result<WowStructure> {
        let flipped: CellSet = self.gamma.cells().iter().map(|c| -c).collect();
        let back = -flipped.origin().unwrap();
        let map = |s: &CellSet| -> CellSet { s.iter().map(|c| -c + back).collect() };
        WowStructure::new(
            &self.gamma.rotate180(),
            self.orientation,
            map(&self.lower),
            map(&self.upper),
        )
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "orientation": self.orientation,
            "gamma": self.gamma.to_string(),
            "w": self.w.to_string(),
            "o": SkewShape::from_cells(&self.o).map(|s| s.to_string()).unwrap_or_default(),
            "upperW": cell_list(&self.upper),
            "lowerW": cell_list(&self.lower),
            "oCells": cell_list(&self.o),
        })
    }
}

impl fmt::Display for WowStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let top = self.upper.origin().unwrap();
        let bottom = self.lower.origin().unwrap();
        write!(
            f,
            "{}: gamma={}; W={}@top{}/bottom{}",
            self.orientation, self.gamma, self.w, top, bottom
        )
    }
}

/// Connected subsets of `cells` that contain `root` and leave at least
/// `spare` cells uncovered.
fn connected_subsets_with(cells: &CellSet, root: Cell, spare: usize) -> Vec<CellSet> {
    let limit = cells.len().saturating_sub(spare);
    let mut seen: HashSet<BTreeSet<Cell>> = HashSet::new();
    let mut out = Vec::new();
    let start: BTreeSet<Cell> = [root].into();
    let mut queue = VecDeque::from([start.clone()]);
    seen.insert(start);
    while let Some(set) = queue.pop_front() {
        let current: CellSet = set.iter().copied().collect();
        if set.len() < limit {
            for c in &set {
                for d in [(0, 1), (0, -1), (1, 0), (-1, 0)] {
                    let n = *c + Cell::new(d.0, d.1);
                    if cells.contains(&n) && !set.contains(&n) {
                        let mut bigger = set.clone();
                        bigger.insert(n);
                        if seen.insert(bigger.clone()) {
                            queue.push_back(bigger);
                        }
                    }
                }
            }
        }
        out.push(current);
    }
    out
}

fn order_key(s: &WowStructure) -> (std::cmp::Reverse<usize>, Orientation, Vec<Cell>, Vec<Cell>) {
    (
        std::cmp::Reverse(s.upper.len()),
        s.orientation,
        s.upper.iter().collect(),
        s.lower.iter().collect(),
    )
}

/// Every valid structure on `gamma`, largest `W` first.
pub fn detect_wow(gamma: &SkewShape) -> Vec<WowStructure> {
    if !gamma.is_connected() || gamma.size() < 3 {
        return Vec::new();
    }
    let cells = gamma.cells();
    let ne = cells.northeast().unwrap();
    let sw = cells.southwest().unwrap();
    let mut out = Vec::new();
    for upper in connected_subsets_with(cells, ne, 2) {
        for u in upper.iter() {
            let lower = upper.translated(sw - u);
            if !lower.is_subset(cells) || !lower.is_disjoint(&upper) {
                continue;
            }
            for orientation in [Orientation::Right, Orientation::Up] {
                if let Ok(s) = WowStructure::new(gamma, orientation, upper.clone(), lower.clone()) {
                    out.push(s);
                }
            }
        }
    }
    out.sort_by_key(order_key);
    out.dedup();
    out
}

/// Every structure on every connected skew shape with at most `max_size`
/// boxes, ordered by size, then shape, then the order of [`detect_wow`].
pub fn catalog(max_size: usize) -> Vec<WowStructure> {
    let gammas: Vec<SkewShape> = (1..=max_size).flat_map(connected_skew_shapes).collect();
    gammas.par_iter().flat_map_iter(detect_wow).collect()
}

/// `a1 ⨿_W a2`: `a2` translated so that its placement of `W` lands on the
/// placement in `a1`, then overlaid.
pub fn amalgamate(
    a1: &SkewShape,
    a2: &SkewShape,
    w: &SkewShape,
    top: &CellSet,
    bottom: &CellSet,
) -> Result<SkewShape> {
    let bad = |why: &str| Err(Error::InvalidStructure(why.to_string()));
    if top.canonical() != *w.cells() || bottom.canonical() != *w.cells() {
        return bad("placements are not copies of W");
    }
    if !top.is_subset(a1.cells()) || !top.contains(&a1.cells().northeast().unwrap()) {
        return bad("W does not lie in the top of the first shape");
    }
    if !bottom.is_subset(a2.cells()) || !bottom.contains(&a2.cells().southwest().unwrap()) {
        return bad("W does not lie in the bottom of the second shape");
    }
    let t = bottom.translation_to(top).unwrap();
    SkewShape::from_cells(&a1.cells().union(&a2.cells().translated(t)))
}

/// `γ ⨿_W γ` for the structure's own placements.
pub fn self_amalgam(s: &WowStructure) -> Result<SkewShape> {
    amalgamate(&s.gamma, &s.gamma, &s.w, &s.upper, &s.lower)
}

/// `γ ·_W γ`: the second copy's lower `W` one step north-west (`->`) or
/// south-east (`^`) of the first copy's upper `W`.
pub fn dot_w(s: &WowStructure) -> Result<SkewShape> {
    let step = match s.orientation {
        Orientation::Right => Cell::new(-1, -1),
        Orientation::Up => Cell::new(1, 1),
    };
    let second = s.gamma.cells().translated(s.shift + step);
    SkewShape::from_cells(&s.gamma.cells().union(&second))
}

/// `α ∘_W γ` together with the position of each copy of `γ`.
#[derive(Clone, Debug)]
pub struct Composition {
    pub shape: SkewShape,
    /// Box of `α` to the translation of `γ`'s cells, in the canonical
    /// coordinates of `shape`.
    pub offsets: BTreeMap<Cell, Cell>,
    gamma: CellSet,
}

impl Composition {
    pub fn copy(&self, cell: Cell) -> Option<CellSet> {
        self.offsets.get(&cell).map(|&t| self.gamma.translated(t))
    }
}

/// Places one copy of `γ` per box of `alpha` by walking grid adjacencies
/// and checks that every adjacency agrees with the placement.
pub fn compose(alpha: &SkewShape, s: &WowStructure) -> Result<Composition> {
    let boxes = alpha.cells();
    let (east, north) = (s.east_step(), s.north_step());
    let mut placed: BTreeMap<Cell, Cell> = BTreeMap::new();
    for comp in boxes.components() {
        let start = comp.first().unwrap();
        placed.insert(start, Cell::new(0, 0));
        let mut queue = VecDeque::from([start]);
        while let Some(b) = queue.pop_front() {
            let here = placed[&b];
            let moves = [
                (Cell::new(0, 1), east),
                (Cell::new(0, -1), -east),
                (Cell::new(-1, 0), north),
                (Cell::new(1, 0), -north),
            ];
            for (step, offset) in moves {
                let nb = b + step;
                if !boxes.contains(&nb) {
                    continue;
                }
                let predicted = here + offset;
                match placed.get(&nb) {
                    Some(&t) if t != predicted => {
                        return Err(Error::InconsistentPlacement(nb.to_string()));
                    }
                    Some(_) => {}
                    None => {
                        placed.insert(nb, predicted);
                        queue.push_back(nb);
                    }
                }
            }
        }
    }
    let gamma = s.gamma.cells().clone();
    let union = placed
        .values()
        .fold(CellSet::new(), |acc, t| acc.union(&gamma.translated(*t)));
    let Some(origin) = union.origin() else {
        return Ok(Composition {
            shape: SkewShape::empty(),
            offsets: placed,
            gamma,
        });
    };
    let shape = SkewShape::from_cells(&union)?;
    let offsets = placed.into_iter().map(|(b, t)| (b, t - origin)).collect();
    Ok(Composition {
        shape,
        offsets,
        gamma,
    })
}

/// A key ribbon: its composition, its cells in `γ ⨿_W γ`, and the same
/// cells moved into the copy of `γ` they come from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KeyRibbon {
    pub ribbon: RibbonComposition,
    pub amalgam_cells: CellSet,
    pub footprint: CellSet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KeyRibbons {
    pub top: KeyRibbon,
    pub bottom: KeyRibbon,
}

impl KeyRibbons {
    pub fn size(&self) -> usize {
        self.top.ribbon.size() as usize
    }
}

/// The top and bottom key ribbons, read off the north-west and south-east
/// rims of `γ ⨿_W γ` ordered south-west to north-east.
pub fn key_ribbons(s: &WowStructure) -> Result<KeyRibbons> {
    let bad = |why: String| Error::InvalidStructure(why);
    let first = s.gamma.cells().clone();
    let second = first.translated(s.shift);
    if first.intersection(&second) != s.upper {
        return Err(bad(
            "the copies of gamma in the amalgam overlap beyond W".into()
        ));
    }
    let amalgam = first.union(&second);
    let o1 = s.o.clone();
    let o2 = o1.translated(s.shift);

    // (cells of the segment, whether they sit in the second copy)
    let segment = |rim: Rim, from_after_first: bool| -> Result<(CellSet, bool)> {
        let order = amalgam.rim(rim);
        let in1: Vec<usize> = (0..order.len())
            .filter(|&k| o1.contains(&order[k]))
            .collect();
        let in2: Vec<usize> = (0..order.len())
            .filter(|&k| o2.contains(&order[k]))
            .collect();
        if in1.is_empty() || in2.is_empty() {
            return Err(bad(
                "a copy of O does not meet the rim of the amalgam".into()
            ));
        }
        let (lo, hi, in_second) = if from_after_first {
            (*in1.last().unwrap() + 1, *in2.last().unwrap(), true)
        } else {
            (
                in1[0],
                in2[0]
                    .checked_sub(1)
                    .ok_or_else(|| bad("empty key ribbon".into()))?,
                false,
            )
        };
        if lo > hi {
            return Err(bad("empty key ribbon".into()));
        }
        Ok((order[lo..=hi].iter().copied().collect(), in_second))
    };

    let build = |(cells, in_second): (CellSet, bool)| -> Result<KeyRibbon> {
        let ribbon = SkewShape::from_cells(&cells)?.ribbon_composition()?;
        let footprint = if in_second {
            cells.translated(-s.shift)
        } else {
            cells.clone()
        };
        if !footprint.is_subset(&first) {
            return Err(bad("key ribbon leaves its copy of gamma".into()));
        }
        Ok(KeyRibbon {
            ribbon,
            amalgam_cells: cells,
            footprint,
        })
    };

    let (top, bottom) = match s.orientation {
        Orientation::Right => (
            build(segment(Rim::NorthWest, true)?)?,
            build(segment(Rim::SouthEast, false)?)?,
        ),
        Orientation::Up => (
            build(segment(Rim::NorthWest, false)?)?,
            build(segment(Rim::SouthEast, true)?)?,
        ),
    };
    Ok(KeyRibbons { top, bottom })
}

/// A removable ribbon of key size lying beyond a key ribbon.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LooseEnd {
    pub side: Side,
    pub ribbon: RibbonComposition,
    pub cells: CellSet,
}

/// Searches for loose end ribbons; `None` means the structure has none.
pub fn loose_end_ribbon(s: &WowStructure) -> Result<Option<LooseEnd>> {
    let keys = key_ribbons(s)?;
    let n = keys.size();
    let top_min = keys.top.footprint.min_diagonal().unwrap();
    let top_max = keys.top.footprint.max_diagonal().unwrap();
    let bottom_min = keys.bottom.footprint.min_diagonal().unwrap();
    let bottom_max = keys.bottom.footprint.max_diagonal().unwrap();
    let loose_left = |c: &CellSet| match s.orientation {
        Orientation::Right => c.min_diagonal().unwrap() < top_min,
        Orientation::Up => c.max_diagonal().unwrap() > top_max,
    };
    let loose_right = |c: &CellSet| match s.orientation {
        Orientation::Right => c.max_diagonal().unwrap() > bottom_max,
        Orientation::Up => c.min_diagonal().unwrap() < bottom_min,
    };
    for (side, test) in [
        (Side::Left, &loose_left as &dyn Fn(&CellSet) -> bool),
        (Side::Right, &loose_right),
    ] {
        for (ribbon, cells) in removable_ribbons(&s.gamma, n, side) {
            if test(&cells) {
                return Ok(Some(LooseEnd {
                    side,
                    ribbon,
                    cells,
                }));
            }
        }
    }
    Ok(None)
}

pub fn has_loose_end_ribbons(s: &WowStructure) -> Result<bool> {
    Ok(loose_end_ribbon(s)?.is_some())
}
