//! The shape Hopf algebra: the free commutative algebra on connected skew
//! shapes with the interval coproduct of Young's lattice.
//!
//! A disconnected shape is identified with the multiset of its connected
//! components ([`ShapeClass`]). The coproduct of `λ/μ` sums `η/μ ⊗ λ/η`
//! over every partition `μ ⊆ η ⊆ λ`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::schur::{multiply, schur_expand, SymFunc};
use crate::shapes::{
    connected_skew_shapes, Cell, CellSet, Partition, RibbonComposition, Rim, SkewShape,
};

/// A monomial in the connected shapes: a sorted multiset of connected,
/// nonempty, canonical shapes. The empty multiset is the unit.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ShapeClass(Vec<SkewShape>);

impl ShapeClass {
    pub fn unit() -> Self {
        ShapeClass(Vec::new())
    }

    pub fn of(shape: &SkewShape) -> Self {
        let mut parts = shape.components();
        parts.sort();
        ShapeClass(parts)
    }

    pub fn of_cells(cells: &CellSet) -> Self {
        let mut parts: Vec<SkewShape> = cells
            .components()
            .iter()
            .map(|c| SkewShape::from_cells(c).expect("component of a skew shape is skew"))
            .collect();
        parts.sort();
        ShapeClass(parts)
    }

    pub fn components(&self) -> &[SkewShape] {
        &self.0
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn size(&self) -> usize {
        self.0.iter().map(SkewShape::size).sum()
    }

    pub fn mul(&self, other: &ShapeClass) -> ShapeClass {
        let mut parts = self.0.clone();
        parts.extend(other.0.iter().cloned());
        parts.sort();
        ShapeClass(parts)
    }

    /// The composition of a class that is a single connected ribbon.
    pub fn as_connected_ribbon(&self) -> Option<RibbonComposition> {
        match self.0.as_slice() {
            [only] => only.ribbon_composition().ok(),
            _ => None,
        }
    }

    /// Image in the symmetric functions.
    pub fn expand(&self) -> SymFunc {
        self.0
            .iter()
            .map(schur_expand)
            .fold(SymFunc::one(), |acc, f| multiply(&acc, &f))
    }
}

impl fmt::Display for ShapeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|s| format!("[{s}]")).collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl Serialize for ShapeClass {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for c in &self.0 {
            seq.serialize_element(&c.to_string())?;
        }
        seq.end()
    }
}

/// Integer combination of tensors `left ⊗ right` of shape classes.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CoproductSum {
    terms: BTreeMap<(ShapeClass, ShapeClass), i64>,
}

impl CoproductSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, left: ShapeClass, right: ShapeClass, mult: i64) {
        let entry = self.terms.entry((left, right)).or_insert(0);
        *entry += mult;
        if *entry == 0 {
            self.terms.retain(|_, v| *v != 0);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ShapeClass, &ShapeClass, i64)> {
        self.terms.iter().map(|((l, r), m)| (l, r, *m))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, left: &ShapeClass, right: &ShapeClass) -> i64 {
        self.terms
            .get(&(left.clone(), right.clone()))
            .copied()
            .unwrap_or(0)
    }

    /// The sum with the tensor factors exchanged.
    pub fn swapped(&self) -> CoproductSum {
        let mut out = CoproductSum::new();
        for ((l, r), m) in &self.terms {
            out.add(r.clone(), l.clone(), *m);
        }
        out
    }

    /// Invariance under exchanging the factors, in the shape algebra itself.
    pub fn is_symmetric(&self) -> bool {
        *self == self.swapped()
    }

    /// Factorwise product `(a ⊗ b)(c ⊗ d) = ac ⊗ bd`.
    pub fn product(&self, other: &CoproductSum) -> CoproductSum {
        let mut out = CoproductSum::new();
        for ((a, b), m) in &self.terms {
            for ((c, d), n) in &other.terms {
                out.add(a.mul(c), b.mul(d), m * n);
            }
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serialisable")
    }
}

impl Serialize for CoproductSum {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for ((l, r), m) in &self.terms {
            seq.serialize_element(&serde_json::json!({
                "left": l,
                "right": r,
                "mult": m,
            }))?;
        }
        seq.end()
    }
}

impl fmt::Display for CoproductSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, ((l, r), m)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(if *m < 0 { " - " } else { " + " })?;
            } else if *m < 0 {
                write!(f, "-")?;
            }
            if m.abs() != 1 {
                write!(f, "{}*", m.abs())?;
            }
            write!(f, "{l} ⊗ {r}")?;
        }
        Ok(())
    }
}

/// Calls `visit(η)` for every partition between `inner` and `outer`
/// (given as equal-length part vectors) whose left size is `target`, or
/// for all of them when `target` is `None`.
fn for_each_eta(
    outer: &[u32],
    inner: &[u32],
    target: Option<usize>,
    visit: &mut dyn FnMut(&[u32]),
) {
    #[allow(clippy::too_many_arguments)]
    fn go(
        i: usize,
        outer: &[u32],
        inner: &[u32],
        cap: u32,
        used: usize,
        target: Option<usize>,
        eta: &mut Vec<u32>,
        visit: &mut dyn FnMut(&[u32]),
    ) {
        if i == outer.len() {
            if target.is_none_or(|t| t == used) {
                visit(eta);
            }
            return;
        }
        let hi = outer[i].min(cap);
        for e in inner[i]..=hi {
            let used = used + (e - inner[i]) as usize;
            if let Some(t) = target {
                if used > t {
                    break;
                }
                let room: usize = (i + 1..outer.len())
                    .map(|j| outer[j].min(e).saturating_sub(inner[j]) as usize)
                    .sum();
                if used + room < t {
                    continue;
                }
            }
            eta.push(e);
            go(i + 1, outer, inner, e, used, target, eta, visit);
            eta.pop();
        }
    }
    go(
        0,
        outer,
        inner,
        u32::MAX,
        0,
        target,
        &mut Vec::with_capacity(outer.len()),
        visit,
    );
}

/// Cells `(i, j)` with `lo_i <= j < hi_i`, in the coordinates of the
/// shape's minimal representative (which are its canonical coordinates).
fn band(hi: &[u32], lo: &[u32]) -> CellSet {
    let mut cells = CellSet::new();
    for (i, (&h, &l)) in hi.iter().zip(lo).enumerate() {
        for j in l..h {
            cells.insert(Cell::new(i as i32, j as i32));
        }
    }
    cells
}

fn padded_bounds(shape: &SkewShape) -> (Vec<u32>, Vec<u32>) {
    let m = shape.minimal();
    let rows = m.outer().len();
    let outer: Vec<u32> = (0..rows).map(|i| m.outer().part(i)).collect();
    let inner: Vec<u32> = (0..rows).map(|i| m.inner().part(i)).collect();
    (outer, inner)
}

/// Every split `η/μ ⊗ λ/η` of `shape` as a pair of cell sets in the
/// shape's canonical coordinates.
fn splits(shape: &SkewShape, left_size: Option<usize>, visit: &mut dyn FnMut(CellSet, CellSet)) {
    if let Some(k) = left_size {
        if 2 * k > shape.size() {
            // the splits of the rotated shape, rotated back with the factors
            // exchanged; the search is cheaper from the small side
            let flipped: CellSet = shape.cells().iter().map(|c| -c).collect();
            let back = flipped.origin().unwrap();
            let rotated =
                SkewShape::from_cells(&flipped).expect("rotation of a skew shape is skew");
            let unrotate = |c: CellSet| -> CellSet { c.iter().map(|x| -(x + back)).collect() };
            return splits(&rotated, Some(shape.size() - k), &mut |l, r| {
                visit(unrotate(r), unrotate(l))
            });
        }
    }
    let (outer, inner) = padded_bounds(shape);
    debug_assert_eq!(band(&outer, &inner), *shape.cells());
    for_each_eta(&outer, &inner, left_size, &mut |eta| {
        visit(band(eta, &inner), band(&outer, eta));
    });
}

/// `Δ(λ/μ) = Σ_{μ ⊆ η ⊆ λ} η/μ ⊗ λ/η`.
pub fn coproduct(shape: &SkewShape) -> CoproductSum {
    let mut out = CoproductSum::new();
    splits(shape, None, &mut |l, r| {
        out.add(ShapeClass::of_cells(&l), ShapeClass::of_cells(&r), 1);
    });
    out
}

/// The part of the coproduct whose left factor has `left_size` boxes.
pub fn coproduct_graded(shape: &SkewShape, left_size: usize) -> CoproductSum {
    let mut out = CoproductSum::new();
    splits(shape, Some(left_size), &mut |l, r| {
        out.add(ShapeClass::of_cells(&l), ShapeClass::of_cells(&r), 1);
    });
    out
}

/// The coproduct extended multiplicatively to a product of connected shapes.
pub fn coproduct_class(class: &ShapeClass) -> CoproductSum {
    let mut unit = CoproductSum::new();
    unit.add(ShapeClass::unit(), ShapeClass::unit(), 1);
    class
        .components()
        .iter()
        .fold(unit, |acc, c| acc.product(&coproduct(c)))
}

pub fn counit(class: &ShapeClass) -> i64 {
    i64::from(class.is_unit())
}

/// Right factors of the terms `m ⊗ A` of `Δ(shape)`, with multiplicity.
pub fn take_out_left(shape: &SkewShape, m: &ShapeClass) -> BTreeMap<ShapeClass, i64> {
    let mut out = BTreeMap::new();
    if m.size() > shape.size() {
        return out;
    }
    for (l, r, k) in coproduct_graded(shape, m.size()).terms() {
        if l == m {
            out.insert(r.clone(), k);
        }
    }
    out
}

/// Left factors of the terms `A ⊗ m` of `Δ(shape)`, with multiplicity.
pub fn take_out_right(shape: &SkewShape, m: &ShapeClass) -> BTreeMap<ShapeClass, i64> {
    let mut out = BTreeMap::new();
    if m.size() > shape.size() {
        return out;
    }
    for (l, r, k) in coproduct_graded(shape, shape.size() - m.size()).terms() {
        if r == m {
            out.insert(l.clone(), k);
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

/// Connected ribbons of size `n` that come out of `shape` on the given
/// side, one entry per position, with their cells in the shape's canonical
/// coordinates.
///
/// A ribbon taken out on the left is a set closed under moving north or
/// west inside the shape, so it has no cell whose north-west neighbour is
/// in the shape (that would force a 2×2 block). It therefore runs along the
/// north-west rim of one component, one cell per diagonal, and only rim
/// windows need testing. The right side mirrors this on the south-east rim.
pub fn removable_ribbons(
    shape: &SkewShape,
    n: usize,
    side: Side,
) -> Vec<(RibbonComposition, CellSet)> {
    let cells = shape.cells();
    let (rim, toward) = match side {
        Side::Left => (Rim::NorthWest, [Cell::new(-1, 0), Cell::new(0, -1)]),
        Side::Right => (Rim::SouthEast, [Cell::new(1, 0), Cell::new(0, 1)]),
    };
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    for comp in cells.components() {
        let order = comp.rim(rim);
        for window in order.windows(n) {
            let piece: CellSet = window.iter().copied().collect();
            let closed = window.iter().all(|&c| {
                toward
                    .iter()
                    .all(|&d| !cells.contains(&(c + d)) || piece.contains(&(c + d)))
            });
            if !closed || !piece.is_connected() {
                continue;
            }
            if let Ok(r) = SkewShape::from_cells(&piece).and_then(|p| p.ribbon_composition()) {
                out.push((r, piece));
            }
        }
    }
    out
}

/// Every product of connected shapes with `n` boxes in total.
pub fn shape_classes_of_size(n: usize) -> Vec<ShapeClass> {
    let pieces: Vec<SkewShape> = (1..=n).flat_map(connected_skew_shapes).collect();
    fn go(
        from: usize,
        rest: usize,
        pieces: &[SkewShape],
        cur: &mut Vec<SkewShape>,
        out: &mut Vec<ShapeClass>,
    ) {
        if rest == 0 {
            out.push(ShapeClass(cur.clone()));
            return;
        }
        for i in from..pieces.len() {
            if pieces[i].size() <= rest {
                cur.push(pieces[i].clone());
                go(i, rest - pieces[i].size(), pieces, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(0, n, &pieces, &mut Vec::new(), &mut out);
    for c in out.iter_mut() {
        c.0.sort();
    }
    out.sort();
    out
}

type Triple = BTreeMap<(ShapeClass, ShapeClass, ShapeClass), i64>;

/// `(Δ ⊗ id)Δ = (id ⊗ Δ)Δ` on `shape`.
pub fn check_coassociativity(shape: &SkewShape) -> bool {
    let delta = coproduct(shape);
    let mut left: Triple = BTreeMap::new();
    let mut right: Triple = BTreeMap::new();
    for (a, b, m) in delta.terms() {
        for (a1, a2, k) in coproduct_class(a).terms() {
            *left.entry((a1.clone(), a2.clone(), b.clone())).or_default() += m * k;
        }
        for (b1, b2, k) in coproduct_class(b).terms() {
            *right
                .entry((a.clone(), b1.clone(), b2.clone()))
                .or_default() += m * k;
        }
    }
    left.retain(|_, v| *v != 0);
    right.retain(|_, v| *v != 0);
    left == right
}

/// Both counit laws: collapsing either factor of `Δ(shape)` gives back
/// the class of `shape`.
pub fn check_counit(shape: &SkewShape) -> bool {
    let delta = coproduct(shape);
    let mut from_left: BTreeMap<ShapeClass, i64> = BTreeMap::new();
    let mut from_right: BTreeMap<ShapeClass, i64> = BTreeMap::new();
    for (a, b, m) in delta.terms() {
        *from_left.entry(b.clone()).or_default() += counit(a) * m;
        *from_right.entry(a.clone()).or_default() += counit(b) * m;
    }
    from_left.retain(|_, v| *v != 0);
    from_right.retain(|_, v| *v != 0);
    let expected = BTreeMap::from([(ShapeClass::of(shape), 1)]);
    from_left == expected && from_right == expected
}

/// An element of `Sym ⊗ Sym` in the basis `s_p ⊗ s_q`.
pub type SymTensor = BTreeMap<(Partition, Partition), BigInt>;

/// Image of a coproduct sum under the map to symmetric functions.
pub fn image(sum: &CoproductSum) -> SymTensor {
    let mut out = SymTensor::new();
    for (a, b, m) in sum.terms() {
        let (fa, fb) = (a.expand(), b.expand());
        for (p, cp) in fa.terms() {
            for (q, cq) in fb.terms() {
                *out.entry((p.clone(), q.clone())).or_default() += cp * cq * m;
            }
        }
    }
    out.retain(|_, v| v.sign() != num_bigint::Sign::NoSign);
    out
}

fn swap(t: &SymTensor) -> SymTensor {
    t.iter()
        .map(|((p, q), c)| ((q.clone(), p.clone()), c.clone()))
        .collect()
}

/// The image of `Δ(shape)` in `Sym ⊗ Sym` is invariant under exchanging
/// the factors.
pub fn image_cocommutativity(shape: &SkewShape) -> bool {
    let t = image(&coproduct(shape));
    t == swap(&t)
}

/// Cocommutativity of the image restricted to bidegrees `(k, N-k)` and
/// `(N-k, k)`.
pub fn image_cocommutativity_graded(shape: &SkewShape, k: usize) -> bool {
    let n = shape.size();
    if k > n {
        return true;
    }
    let a = image(&coproduct_graded(shape, k));
    let b = image(&coproduct_graded(shape, n - k));
    a == swap(&b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn shape(s: &str) -> SkewShape {
        s.parse().unwrap()
    }

    fn class(shapes: &[&str]) -> ShapeClass {
        let mut parts: Vec<SkewShape> = shapes.iter().map(|s| shape(s)).collect();
        parts.sort();
        ShapeClass(parts)
    }

    #[test]
    fn coproduct_of_box_and_row() {
        let d = coproduct(&shape("1"));
        assert_eq!(d.len(), 2);
        assert_eq!(d.coefficient(&ShapeClass::unit(), &class(&["1"])), 1);
        assert_eq!(d.coefficient(&class(&["1"]), &ShapeClass::unit()), 1);

        let d = coproduct(&shape("2"));
        assert_eq!(d.len(), 3);
        assert_eq!(d.coefficient(&class(&["1"]), &class(&["1"])), 1);
    }

    #[test]
    fn coproduct_of_hook() {
        let d = coproduct(&shape("2,1"));
        assert_eq!(d.len(), 5);
        assert_eq!(d.coefficient(&ShapeClass::unit(), &class(&["2,1"])), 1);
        assert_eq!(d.coefficient(&class(&["1"]), &class(&["1", "1"])), 1);
        assert_eq!(d.coefficient(&class(&["2"]), &class(&["1"])), 1);
        assert_eq!(d.coefficient(&class(&["1,1"]), &class(&["1"])), 1);
        assert_eq!(d.coefficient(&class(&["2,1"]), &ShapeClass::unit()), 1);
        assert!(!d.is_symmetric());
    }

    #[test]
    fn disconnected_coproduct_is_product() {
        let s = shape("3,1/1");
        let direct = coproduct(&s);
        assert_eq!(direct, coproduct_class(&ShapeClass::of(&s)));
    }

    #[test]
    fn counit_values() {
        assert_eq!(counit(&ShapeClass::unit()), 1);
        assert_eq!(counit(&class(&["1"])), 0);
        assert_eq!(counit(&class(&["2,1", "1"])), 0);
    }

    #[test]
    fn taking_out() {
        let out = take_out_left(&shape("2,1"), &class(&["1"]));
        assert_eq!(out, BTreeMap::from([(class(&["1", "1"]), 1)]));
        assert!(take_out_left(&shape("2"), &class(&["1,1"])).is_empty());
        let out = take_out_left(&shape("3,2"), &class(&["3,2"]));
        assert_eq!(out, BTreeMap::from([(ShapeClass::unit(), 1)]));
        let out = take_out_right(&shape("2,1"), &class(&["1"]));
        assert_eq!(
            out,
            BTreeMap::from([(class(&["2"]), 1), (class(&["1,1"]), 1)])
        );
    }

    #[test]
    fn removable_ribbon_examples() {
        let r = removable_ribbons(&shape("2,2"), 1, Side::Left);
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].1, [Cell::new(0, 0)].into_iter().collect());
        let r = removable_ribbons(&shape("2,2"), 2, Side::Left);
        let comps: Vec<String> = r.iter().map(|(c, _)| c.to_string()).collect();
        assert_eq!(comps.len(), 2);
        assert!(comps.contains(&"(2)".to_string()) && comps.contains(&"(1,1)".to_string()));
        assert!(removable_ribbons(&shape("8,7,2/3,1"), 6, Side::Left).len() >= 2);
    }

    #[test]
    fn axioms_on_examples() {
        for s in ["1", "2,1", "3,2/1", "3,3/1"] {
            let s = shape(s);
            assert!(check_coassociativity(&s));
            assert!(check_counit(&s));
            assert!(image_cocommutativity(&s));
        }
        let s = shape("3,3/1");
        for k in 0..=5 {
            assert!(image_cocommutativity_graded(&s, k));
        }
    }

    #[test]
    fn graded_pieces_partition_the_coproduct() {
        for sh in ["4,3,1/2", "3,3,2/1,1", "5,2/1"] {
            let sh = shape(sh);
            let full = coproduct(&sh);
            let mut glued = CoproductSum::new();
            for k in 0..=sh.size() {
                for (l, r, m) in coproduct_graded(&sh, k).terms() {
                    assert_eq!(l.size(), k);
                    glued.add(l.clone(), r.clone(), m);
                }
            }
            assert_eq!(glued, full);
        }
    }

    /// Every split with the right size whose piece on `side` is a
    /// connected ribbon.
    fn removable_by_splits(sh: &SkewShape, n: usize, side: Side) -> BTreeSet<CellSet> {
        let k = match side {
            Side::Left => n,
            Side::Right => sh.size() - n,
        };
        let mut out = BTreeSet::new();
        splits(sh, Some(k), &mut |l, r| {
            let piece = if side == Side::Left { l } else { r };
            if SkewShape::from_cells(&piece).is_ok_and(|p| p.is_connected_ribbon()) {
                out.insert(piece);
            }
        });
        out
    }

    #[test]
    fn rim_windows_find_every_removable_ribbon() {
        for sh in [
            "6,4,3,2/3,1,1",
            "4,4,2,2/2,1",
            "8,7,2/3,1",
            "5,5,5/2",
            "3,2,1",
            "4,2/3",
        ] {
            let sh = shape(sh);
            for n in 1..=sh.size() {
                for side in [Side::Left, Side::Right] {
                    let fast: BTreeSet<CellSet> = removable_ribbons(&sh, n, side)
                        .into_iter()
                        .map(|(_, c)| c)
                        .collect();
                    assert_eq!(fast, removable_by_splits(&sh, n, side), "{sh} {n} {side:?}");
                }
            }
        }
    }

    #[test]
    fn class_enumeration() {
        // products of connected shapes: 1, 2, 4, 9 connected pieces by size
        assert_eq!(shape_classes_of_size(1).len(), 1);
        assert_eq!(shape_classes_of_size(2).len(), 3);
        assert_eq!(shape_classes_of_size(3).len(), 4 + 2 + 1);
        let c = shape_classes_of_size(4);
        assert!(c.windows(2).all(|w| w[0] < w[1]));
        assert!(c.iter().all(|x| x.size() == 4));
    }

    #[test]
    fn json_terms() {
        let j = coproduct(&shape("1")).to_json();
        assert_eq!(j.as_array().unwrap().len(), 2);
        assert_eq!(j[0]["mult"], 1);
    }
}
