//! Skew Schur functions expanded exactly in the Schur basis.
//!
//! A connected skew shape is expanded by counting Littlewood–Richardson
//! tableaux: fillings that are weakly increasing along rows, strictly
//! increasing down columns, and whose reverse reading word (rows top to
//! bottom, each read right to left) is a lattice word. The count with
//! content `ν` is the coefficient of `s_ν`. The counting runs as a transfer
//! over rows whose state is the content so far plus the part of the last
//! row that the next row sits under, so identical states merge.
//!
//! Disconnected shapes are expanded as products of their components, and a
//! product `s_μ s_ν` is itself the expansion of the disconnected diagram with
//! `ν` placed strictly north-east of `μ`.
//!
//! [`monomial_expansion`] enumerates fillings directly and is kept free of
//! any call into the tableau machinery so it can serve as an oracle.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::{OnceLock, RwLock};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::shapes::{Cell, Partition, RibbonComposition, SkewShape};

/// A homogeneous symmetric function written in the Schur basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymFunc {
    degree: u32,
    coeffs: BTreeMap<Partition, BigInt>,
}

impl SymFunc {
    pub fn zero(degree: u32) -> Self {
        SymFunc {
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        SymFunc::schur(Partition::empty())
    }

    /// The single Schur function `s_λ`.
    pub fn schur(p: Partition) -> Self {
        let degree = p.size();
        SymFunc {
            degree,
            coeffs: BTreeMap::from([(p, BigInt::one())]),
        }
    }

    /// Builds a function from `(partition, coefficient)` pairs; zero
    /// coefficients are dropped. All partitions must have size `degree`.
    pub fn from_terms<I>(degree: u32, terms: I) -> Self
    where
        I: IntoIterator<Item = (Partition, BigInt)>,
    {
        let mut f = SymFunc::zero(degree);
        for (p, c) in terms {
            f.add_term(p, c);
        }
        f
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coefficient(&self, p: &Partition) -> BigInt {
        self.coeffs.get(p).cloned().unwrap_or_default()
    }

    /// Terms in ascending lexicographic order of partition.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Partition, &BigInt)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add_term(&mut self, p: Partition, c: BigInt) {
        assert_eq!(p.size(), self.degree, "term {p} has the wrong degree");
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(p).or_default();
        *entry += c;
        if entry.is_zero() {
            self.coeffs.retain(|_, v| !v.is_zero());
        }
    }

    fn add_scaled(&mut self, other: &SymFunc, by: &BigInt) {
        if other.is_zero() || by.is_zero() {
            return;
        }
        if self.is_zero() {
            self.degree = other.degree;
        }
        assert_eq!(
            self.degree, other.degree,
            "adding functions of different degree"
        );
        for (p, c) in &other.coeffs {
            let entry = self.coeffs.entry(p.clone()).or_default();
            *entry += c * by;
        }
        self.coeffs.retain(|_, v| !v.is_zero());
    }

    pub fn scale(&self, by: &BigInt) -> SymFunc {
        let mut out = SymFunc::zero(self.degree);
        out.add_scaled(self, by);
        out
    }

    /// Nonzero coefficients all nonnegative.
    pub fn is_schur_positive(&self) -> bool {
        self.coeffs.values().all(|c| !c.is_negative())
    }

    /// Evaluates in `k` variables by expanding each `s_ν` through the
    /// filling oracle.
    pub fn to_monomials(&self, k: usize) -> MonomialPoly {
        let mut out = MonomialPoly::zero(k);
        for (p, c) in &self.coeffs {
            let m = monomial_expansion(&SkewShape::from_partition(p.clone()), k);
            out.add_scaled(&m, c);
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serialisable")
    }
}

impl Add<&SymFunc> for &SymFunc {
    type Output = SymFunc;
    fn add(self, rhs: &SymFunc) -> SymFunc {
        let mut out = self.clone();
        out.add_scaled(rhs, &BigInt::one());
        out
    }
}

impl Sub<&SymFunc> for &SymFunc {
    type Output = SymFunc;
    fn sub(self, rhs: &SymFunc) -> SymFunc {
        let mut out = self.clone();
        out.add_scaled(rhs, &-BigInt::one());
        out
    }
}

impl Neg for &SymFunc {
    type Output = SymFunc;
    fn neg(self) -> SymFunc {
        self.scale(&-BigInt::one())
    }
}

impl fmt::Display for SymFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (p, c)) in self.coeffs.iter().rev().enumerate() {
            let parts: Vec<String> = p.parts().iter().map(u32::to_string).collect();
            let basis = format!("s[{}]", parts.join(","));
            let mag = c.abs();
            let term = if mag.is_one() {
                basis
            } else {
                format!("{mag}*{basis}")
            };
            match (i, c.is_negative()) {
                (0, false) => write!(f, "{term}")?,
                (0, true) => write!(f, "-{term}")?,
                (_, false) => write!(f, " + {term}")?,
                (_, true) => write!(f, " - {term}")?,
            }
        }
        Ok(())
    }
}

pub(crate) fn bigint_json(c: &BigInt) -> serde_json::Value {
    match c.to_i64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::from(c.to_string()),
    }
}

impl Serialize for SymFunc {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.coeffs.len()))?;
        for (p, c) in self.coeffs.iter().rev() {
            seq.serialize_element(&serde_json::json!({
                "partition": p.parts(),
                "coefficient": bigint_json(c),
            }))?;
        }
        seq.end()
    }
}

/// A polynomial in `vars` commuting variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialPoly {
    vars: usize,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl MonomialPoly {
    pub fn zero(vars: usize) -> Self {
        MonomialPoly {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn coefficient(&self, exponents: &[u32]) -> BigInt {
        self.terms.get(exponents).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigInt)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_scaled(&mut self, other: &MonomialPoly, by: &BigInt) {
        assert_eq!(self.vars, other.vars);
        for (e, c) in &other.terms {
            *self.terms.entry(e.clone()).or_default() += c * by;
        }
        self.terms.retain(|_, v| !v.is_zero());
    }
}

/// Sum over all fillings of `shape` with entries in `1..=k` (weak along
/// rows, strict down columns) of `x^(content)`.
pub fn monomial_expansion(shape: &SkewShape, k: usize) -> MonomialPoly {
    let cells: Vec<Cell> = shape.cells().iter().collect();
    let index: HashMap<Cell, usize> = cells.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    // cells are in row-major order so both neighbours come earlier
    let left: Vec<Option<usize>> = cells
        .iter()
        .map(|c| index.get(&Cell::new(c.row, c.col - 1)).copied())
        .collect();
    let above: Vec<Option<usize>> = cells
        .iter()
        .map(|c| index.get(&Cell::new(c.row - 1, c.col)).copied())
        .collect();

    fn go(
        i: usize,
        k: usize,
        left: &[Option<usize>],
        above: &[Option<usize>],
        fill: &mut Vec<usize>,
        exps: &mut Vec<u32>,
        out: &mut BTreeMap<Vec<u32>, BigInt>,
    ) {
        if i == left.len() {
            *out.entry(exps.clone()).or_default() += 1;
            return;
        }
        let lo = left[i]
            .map_or(1, |j| fill[j])
            .max(above[i].map_or(1, |j| fill[j] + 1));
        for v in lo..=k {
            fill.push(v);
            exps[v - 1] += 1;
            go(i + 1, k, left, above, fill, exps, out);
            exps[v - 1] -= 1;
            fill.pop();
        }
    }

    let mut terms = BTreeMap::new();
    go(
        0,
        k,
        &left,
        &above,
        &mut Vec::with_capacity(cells.len()),
        &mut vec![0; k],
        &mut terms,
    );
    MonomialPoly { vars: k, terms }
}

type Cache<K> = OnceLock<RwLock<HashMap<K, SymFunc>>>;

static CONNECTED_CACHE: Cache<SkewShape> = OnceLock::new();
static PRODUCT_CACHE: Cache<(Partition, Partition)> = OnceLock::new();
static SHAPE_CACHE: Cache<SkewShape> = OnceLock::new();

fn cached<K, F>(cache: &'static Cache<K>, key: K, compute: F) -> SymFunc
where
    K: std::hash::Hash + Eq,
    F: FnOnce(&K) -> SymFunc,
{
    let lock = cache.get_or_init(Default::default);
    if let Some(v) = lock.read().unwrap().get(&key) {
        return v.clone();
    }
    let v = compute(&key);
    // write-once: a racing writer computed the same value
    lock.write()
        .unwrap()
        .entry(key)
        .or_insert_with(|| v.clone());
    v
}

/// `s_{λ/μ}` in the Schur basis.
pub fn schur_expand(shape: &SkewShape) -> SymFunc {
    let components = shape.components();
    match components.len() {
        0 => SymFunc::one(),
        1 => cached(&CONNECTED_CACHE, components[0].clone(), lr_expand),
        _ => cached(&SHAPE_CACHE, shape.clone(), |_| {
            components
                .iter()
                .map(|c| cached(&CONNECTED_CACHE, c.clone(), lr_expand))
                .fold(SymFunc::one(), |acc, f| multiply(&acc, &f))
        }),
    }
}

/// `s_a ~ s_b`: the two skew Schur functions coincide.
pub fn schur_equal(a: &SkewShape, b: &SkewShape) -> bool {
    a.size() == b.size() && schur_expand(a) == schur_expand(b)
}

pub fn multiply(f: &SymFunc, g: &SymFunc) -> SymFunc {
    let mut out = SymFunc::zero(f.degree + g.degree);
    for (a, ca) in &f.coeffs {
        for (b, cb) in &g.coeffs {
            let prod = schur_product(a, b);
            out.add_scaled(&prod, &(ca * cb));
        }
    }
    out
}

/// `s_a · s_b`.
pub fn schur_product(a: &Partition, b: &Partition) -> SymFunc {
    if a.is_empty() {
        return SymFunc::schur(b.clone());
    }
    if b.is_empty() {
        return SymFunc::schur(a.clone());
    }
    // the larger factor goes on top, where its filling is forced
    let key = if (a.size(), a) >= (b.size(), b) {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    };
    cached(&PRODUCT_CACHE, key, |(top, bottom)| {
        let shift = bottom.part(0);
        let rows = top.len();
        let mut outer: Vec<u32> = top.parts().iter().map(|p| p + shift).collect();
        outer.extend_from_slice(bottom.parts());
        let inner = vec![shift; rows];
        let diagram = SkewShape::new(
            Partition::new(outer).unwrap(),
            Partition::new(inner).unwrap(),
        )
        .expect("direct sum is a skew shape");
        lr_expand(&diagram)
    })
}

/// Littlewood–Richardson coefficient `c^λ_{μν}`.
pub fn lr_coefficient(lambda: &Partition, mu: &Partition, nu: &Partition) -> BigInt {
    if !lambda.contains(mu) || lambda.size() != mu.size() + nu.size() {
        return BigInt::zero();
    }
    let shape = SkewShape::new(lambda.clone(), mu.clone()).unwrap();
    lr_expand(&shape).coefficient(nu)
}

/// Counts Littlewood–Richardson tableaux of any skew diagram by content.
fn lr_expand(shape: &SkewShape) -> SymFunc {
    let shape = shape.minimal();
    let outer = shape.outer();
    let inner = shape.inner();
    let rows: Vec<(usize, usize)> = (0..outer.len())
        .map(|i| (inner.part(i) as usize, outer.part(i) as usize))
        .collect();

    // state: (content counts, entries of the previous row in the columns the
    // current row sits under)
    let mut states: HashMap<(Vec<u8>, Vec<u8>), BigUint> = HashMap::new();
    states.insert((Vec::new(), Vec::new()), BigUint::one());

    for (i, &(lo, hi)) in rows.iter().enumerate() {
        // positions p >= offset of this row have a cell above them
        let offset = if i == 0 {
            hi
        } else {
            rows[i - 1].0.max(lo) - lo
        };
        let next_keep = match rows.get(i + 1) {
            Some(&(_, next_hi)) if next_hi > lo => next_hi - lo,
            _ => 0,
        };
        let len = hi - lo;
        let mut next: HashMap<(Vec<u8>, Vec<u8>), BigUint> = HashMap::new();
        for ((content, above), count) in states {
            let mut counts = content.clone();
            let mut fill = vec![0u8; len];
            fill_row(
                len,
                offset,
                &above,
                &mut fill,
                &mut counts,
                &mut |counts, fill| {
                    let mut c = counts.to_vec();
                    while c.last() == Some(&0) {
                        c.pop();
                    }
                    let key = (c, fill[..next_keep].to_vec());
                    *next.entry(key).or_default() += &count;
                },
            );
        }
        states = next;
    }

    let degree = shape.size() as u32;
    let mut out = SymFunc::zero(degree);
    for ((content, _), count) in states {
        let p = Partition::new(content.iter().map(|&c| c as u32).collect())
            .expect("lattice words have partition content");
        out.add_term(p, BigInt::from(count));
    }
    out
}

/// Enumerates the admissible fillings of one row, right to left.
fn fill_row(
    len: usize,
    offset: usize,
    above: &[u8],
    fill: &mut [u8],
    counts: &mut Vec<u8>,
    emit: &mut dyn FnMut(&[u8], &[u8]),
) {
    fn go(
        p: usize,
        cap: u8,
        offset: usize,
        above: &[u8],
        fill: &mut [u8],
        counts: &mut Vec<u8>,
        emit: &mut dyn FnMut(&[u8], &[u8]),
    ) {
        if p == 0 {
            emit(counts, fill);
            return;
        }
        let pos = p - 1;
        let lo = if pos >= offset {
            above[pos - offset] + 1
        } else {
            1
        };
        let cap = cap.min(counts.len() as u8 + 1);
        for v in lo..=cap {
            let idx = v as usize - 1;
            let have = counts.get(idx).copied().unwrap_or(0);
            if idx > 0 && have + 1 > counts[idx - 1] {
                continue;
            }
            if idx == counts.len() {
                counts.push(0);
            }
            counts[idx] += 1;
            fill[pos] = v;
            go(pos, v, offset, above, fill, counts, emit);
            counts[idx] -= 1;
            if counts[idx] == 0 && idx + 1 == counts.len() {
                counts.pop();
            }
        }
    }
    go(len, u8::MAX, offset, above, fill, counts, emit);
}

/// The two ribbons of the product rule for `r_a · r_b`: `b` glued onto the
/// right end of `a` (their end rows merge), and `b` stacked directly above
/// the top right box of `a`. Their Schur functions sum to the product.
pub fn ribbon_product(
    a: &RibbonComposition,
    b: &RibbonComposition,
) -> (RibbonComposition, RibbonComposition) {
    let (a_rows, b_rows) = (a.rows(), b.rows());
    let mut merged = b_rows.to_vec();
    *merged.last_mut().unwrap() += a_rows[0];
    merged.extend_from_slice(&a_rows[1..]);
    let mut stacked = b_rows.to_vec();
    stacked.extend_from_slice(a_rows);
    (
        RibbonComposition::new(merged).unwrap(),
        RibbonComposition::new(stacked).unwrap(),
    )
}

/// All `2^(n-1)` compositions of `n`, lexicographically.
pub fn connected_ribbons_of_size(n: u32) -> Vec<RibbonComposition> {
    fn go(rest: u32, cur: &mut Vec<u32>, out: &mut Vec<RibbonComposition>) {
        if rest == 0 {
            out.push(RibbonComposition::new(cur.clone()).unwrap());
            return;
        }
        for p in 1..=rest {
            cur.push(p);
            go(rest - p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        go(n, &mut Vec::new(), &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(s: &str) -> SkewShape {
        s.parse().unwrap()
    }

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn sf(terms: &[(&str, i64)]) -> SymFunc {
        let degree = p(terms[0].0).size();
        SymFunc::from_terms(degree, terms.iter().map(|&(q, c)| (p(q), BigInt::from(c))))
    }

    fn comp(v: &[u32]) -> RibbonComposition {
        RibbonComposition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn monomial_examples() {
        let m = monomial_expansion(&shape("1"), 2);
        assert_eq!(m.len(), 2);
        assert_eq!(m.coefficient(&[1, 0]), BigInt::one());
        let m = monomial_expansion(&shape("1,1"), 2);
        assert_eq!(m.len(), 1);
        assert_eq!(m.coefficient(&[1, 1]), BigInt::one());
        let m = monomial_expansion(&shape("2"), 2);
        assert_eq!(m.len(), 3);
        assert_eq!(m.coefficient(&[1, 1]), BigInt::one());
    }

    #[test]
    fn expansion_examples() {
        assert_eq!(schur_expand(&shape("2,1/1")), sf(&[("2", 1), ("1,1", 1)]));
        assert_eq!(schur_expand(&shape("2,2/1")), sf(&[("2,1", 1)]));
        assert_eq!(schur_expand(&shape("3,1")), sf(&[("3,1", 1)]));
        assert_eq!(schur_expand(&shape("0")), SymFunc::one());
    }

    #[test]
    fn expansions_agree_with_oracle() {
        for s in [
            "2,1/1",
            "2,2/1",
            "3,2,1/1",
            "3,3/1",
            "4,2,1/2,1",
            "3,1,1/1,1",
        ] {
            let sh = shape(s);
            let k = sh.size();
            assert_eq!(
                schur_expand(&sh).to_monomials(k),
                monomial_expansion(&sh, k),
                "{s}"
            );
        }
    }

    #[test]
    fn product_examples() {
        let s1 = sf(&[("1", 1)]);
        assert_eq!(multiply(&s1, &s1), sf(&[("2", 1), ("1,1", 1)]));
        assert_eq!(multiply(&SymFunc::one(), &s1), s1);
        let s2 = sf(&[("2", 1)]);
        assert_eq!(multiply(&s2, &s2), sf(&[("4", 1), ("3,1", 1), ("2,2", 1)]));
        // s_21 · s_21 has c^{321}_{21,21} = 2
        let s21 = sf(&[("2,1", 1)]);
        assert_eq!(
            multiply(&s21, &s21).coefficient(&p("3,2,1")),
            BigInt::from(2)
        );
    }

    #[test]
    fn lr_coefficient_values() {
        assert_eq!(
            lr_coefficient(&p("3,2,1"), &p("2,1"), &p("2,1")),
            BigInt::from(2)
        );
        assert_eq!(lr_coefficient(&p("2,1"), &p("0"), &p("2,1")), BigInt::one());
        assert_eq!(
            lr_coefficient(&p("2,1"), &p("1,1,1"), &p("0")),
            BigInt::zero()
        );
    }

    #[test]
    fn equality_examples() {
        let g = shape("4,4,2,2/2,1");
        assert!(schur_equal(&g, &g.rotate180()));
        assert!(!schur_equal(&shape("2,2"), &shape("2,1,1")));
    }

    #[test]
    fn ribbon_product_examples() {
        for (a, b) in [
            (vec![1], vec![1]),
            (vec![2], vec![1]),
            (vec![1, 1], vec![1, 1]),
        ] {
            let (a, b) = (comp(&a), comp(&b));
            let (x, y) = ribbon_product(&a, &b);
            assert_eq!(x.size(), a.size() + b.size());
            let lhs = multiply(&schur_expand(&a.to_shape()), &schur_expand(&b.to_shape()));
            let rhs = &schur_expand(&x.to_shape()) + &schur_expand(&y.to_shape());
            assert_eq!(lhs, rhs);
        }
        let (x, y) = ribbon_product(&comp(&[1]), &comp(&[1]));
        assert_eq!((x, y), (comp(&[2]), comp(&[1, 1])));
    }

    #[test]
    fn ribbon_enumeration() {
        assert_eq!(connected_ribbons_of_size(1), vec![comp(&[1])]);
        assert_eq!(
            connected_ribbons_of_size(2),
            vec![comp(&[1, 1]), comp(&[2])]
        );
        assert_eq!(connected_ribbons_of_size(3).len(), 4);
        assert_eq!(connected_ribbons_of_size(6).len(), 32);
    }

    #[test]
    fn rendering() {
        let f = &sf(&[("2,1", 1)]) + &sf(&[("1,1,1", 2)]);
        assert_eq!(f.to_string(), "s[2,1] + 2*s[1,1,1]");
        let g = &sf(&[("1,1", 1)]) - &sf(&[("2", 3)]);
        assert_eq!(g.to_string(), "-3*s[2] + s[1,1]");
        assert_eq!(SymFunc::zero(3).to_string(), "0");
        let json = f.to_json();
        assert_eq!(json[0]["partition"], serde_json::json!([2, 1]));
        assert_eq!(json[1]["coefficient"], serde_json::json!(2));
    }
}
