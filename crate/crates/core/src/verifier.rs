//! Machine checks of the equality `β ∘ γ ~ β* ∘ γ` for a rectangle minus
//! its corner `β`, and of the lemmas behind its proof.
//!
//! Coefficients in a ribbon basis are rational, so everything here runs on
//! exact rationals. Ranks use fraction-free elimination over the integers.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::hopf::{coproduct_graded, image, CoproductSum, ShapeClass};
use crate::schur::{connected_ribbons_of_size, schur_expand, SymFunc};
use crate::shapes::{Partition, RibbonComposition, SkewShape};
use crate::wow::{compose, key_ribbons, loose_end_ribbon, LooseEnd, WowStructure};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BasisLabel {
    Ribbon(RibbonComposition),
    /// `plus - minus`
    Difference {
        plus: RibbonComposition,
        minus: RibbonComposition,
    },
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisLabel::Ribbon(r) => write!(f, "{r}"),
            BasisLabel::Difference { plus, minus } => write!(f, "{plus}-{minus}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct BasisElement {
    pub label: BasisLabel,
    pub expansion: SymFunc,
    /// `+1` for an even number of rows, `-1` for odd, `0` for a difference.
    pub parity: i32,
}

/// A basis of the degree-`n` symmetric functions built from connected
/// ribbon Schur functions.
#[derive(Clone, Debug)]
pub struct RibbonBasis {
    degree: u32,
    elements: Vec<BasisElement>,
    partitions: Vec<Partition>,
    inverse: Vec<Vec<BigRational>>,
}

fn parity_of(r: &RibbonComposition) -> i32 {
    if r.row_count().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn dense(f: &SymFunc, partitions: &[Partition]) -> Vec<BigInt> {
    partitions.iter().map(|p| f.coefficient(p)).collect()
}

/// Rank by Bareiss fraction-free elimination.
fn rank(rows: &[Vec<BigInt>]) -> usize {
    let mut m = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    let mut prev = BigInt::one();
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..m.len() {
            for j in c + 1..cols {
                let num = &m[r][c] * &m[i][j] - &m[i][c] * &m[r][j];
                debug_assert!((&num % &prev).is_zero());
                m[i][j] = num / &prev;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

fn invert(m: &[Vec<BigInt>]) -> Option<Vec<Vec<BigRational>>> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<BigRational> =
                row.iter().cloned().map(BigRational::from_integer).collect();
            r.extend((0..n).map(|j| {
                if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !a[i][c].is_zero())?;
        a.swap(c, p);
        let pivot = a[c][c].clone();
        for x in a[c].iter_mut() {
            *x /= &pivot;
        }
        let pivot_row = a[c].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != c && !row[c].is_zero() {
                let factor = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= &factor * y;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

impl RibbonBasis {
    fn from_elements(degree: u32, elements: Vec<BasisElement>) -> Self {
        let partitions = Partition::all_of_size(degree);
        let matrix: Vec<Vec<BigInt>> = elements
            .iter()
            .map(|e| dense(&e.expansion, &partitions))
            .collect();
        let inverse = invert(&matrix).expect("basis elements are independent");
        RibbonBasis {
            degree,
            elements,
            partitions,
            inverse,
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn elements(&self) -> &[BasisElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn parity_vector(&self) -> Vec<i32> {
        self.elements.iter().map(|e| e.parity).collect()
    }

    /// Position of a plain ribbon element.
    pub fn index_of(&self, r: &RibbonComposition) -> Option<usize> {
        self.elements
            .iter()
            .position(|e| e.label == BasisLabel::Ribbon(r.clone()))
    }

    /// The basis with element `b` replaced by `b - a`.
    pub fn with_difference(&self, a: usize, b: usize) -> RibbonBasis {
        let (BasisLabel::Ribbon(plus), BasisLabel::Ribbon(minus)) =
            (&self.elements[b].label, &self.elements[a].label)
        else {
            panic!("differences are formed from plain ribbons");
        };
        let mut elements = self.elements.clone();
        elements[b] = BasisElement {
            label: BasisLabel::Difference {
                plus: plus.clone(),
                minus: minus.clone(),
            },
            expansion: &self.elements[b].expansion - &self.elements[a].expansion,
            parity: 0,
        };
        RibbonBasis::from_elements(self.degree, elements)
    }

    /// Coordinates of `f` in this basis.
    pub fn coordinates(&self, f: &SymFunc) -> Result<CoefficientVector> {
        if !f.is_zero() && f.degree() != self.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                got: f.degree(),
            });
        }
        let target = dense(f, &self.partitions);
        let n = self.elements.len();
        let entries = (0..n)
            .map(|k| {
                target
                    .iter()
                    .zip(&self.inverse)
                    .filter(|(t, _)| !t.is_zero())
                    .map(|(t, row)| &row[k] * BigRational::from_integer(t.clone()))
                    .fold(BigRational::zero(), |acc, x| acc + x)
            })
            .collect();
        Ok(CoefficientVector(entries))
    }

    /// Expands a coordinate vector back into the Schur basis.
    pub fn evaluate(&self, v: &CoefficientVector) -> RatSym {
        let mut out = RatSym::new();
        for (e, c) in self.elements.iter().zip(&v.0) {
            out.add_scaled_int(&e.expansion, c);
        }
        out
    }
}

/// A row vector of rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientVector(pub Vec<BigRational>);

impl CoefficientVector {
    pub fn dot(&self, v: &[i32]) -> BigRational {
        self.0
            .iter()
            .zip(v)
            .map(|(x, &s)| x * BigRational::from_integer(BigInt::from(s)))
            .fold(BigRational::zero(), |acc, x| acc + x)
    }
}

/// A symmetric function with rational Schur coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RatSym(BTreeMap<Partition, BigRational>);

impl RatSym {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_int(f: &SymFunc) -> Self {
        let mut out = RatSym::new();
        out.add_scaled_int(f, &BigRational::one());
        out
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add_scaled_int(&mut self, f: &SymFunc, by: &BigRational) {
        if by.is_zero() {
            return;
        }
        for (p, c) in f.terms() {
            *self.0.entry(p.clone()).or_insert_with(BigRational::zero) +=
                by * BigRational::from_integer(c.clone());
        }
        self.0.retain(|_, v| !v.is_zero());
    }

    pub fn add_scaled(&mut self, f: &RatSym, by: &BigRational) {
        if by.is_zero() {
            return;
        }
        for (p, c) in &f.0 {
            *self.0.entry(p.clone()).or_insert_with(BigRational::zero) += by * c;
        }
        self.0.retain(|_, v| !v.is_zero());
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.0
                .iter()
                .rev()
                .map(|(p, c)| json!({"partition": p.parts(), "coefficient": c.to_string()}))
                .collect(),
        )
    }
}

impl fmt::Display for RatSym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        for (i, (p, c)) in self.0.iter().rev().enumerate() {
            let parts: Vec<String> = p.parts().iter().map(u32::to_string).collect();
            let sep = match (i, c.is_negative()) {
                (0, false) => "",
                (0, true) => "-",
                (_, false) => " + ",
                (_, true) => " - ",
            };
            let mag = c.abs();
            if mag.is_one() {
                write!(f, "{sep}s[{}]", parts.join(","))?;
            } else {
                write!(f, "{sep}{mag}*s[{}]", parts.join(","))?;
            }
        }
        Ok(())
    }
}

/// Required ribbons first, then every composition of `n` in lexicographic
/// order whose Schur function is independent of those already chosen.
pub fn ribbon_basis(n: u32, required: &[RibbonComposition]) -> Result<RibbonBasis> {
    let partitions = Partition::all_of_size(n);
    let mut chosen: Vec<BasisElement> = Vec::new();
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    for r in required {
        if r.size() != n {
            return Err(Error::DegreeMismatch {
                expected: n,
                got: r.size(),
            });
        }
        let f = schur_expand(&r.to_shape());
        rows.push(dense(&f, &partitions));
        if rank(&rows) < rows.len() {
            return Err(Error::DependentRequired);
        }
        chosen.push(BasisElement {
            label: BasisLabel::Ribbon(r.clone()),
            expansion: f,
            parity: parity_of(r),
        });
    }
    for r in connected_ribbons_of_size(n) {
        if rows.len() == partitions.len() {
            break;
        }
        let f = schur_expand(&r.to_shape());
        rows.push(dense(&f, &partitions));
        if rank(&rows) < rows.len() {
            rows.pop();
            continue;
        }
        chosen.push(BasisElement {
            parity: parity_of(&r),
            label: BasisLabel::Ribbon(r),
            expansion: f,
        });
    }
    Ok(RibbonBasis::from_elements(n, chosen))
}

pub fn coefficient_vector(shape: &SkewShape, basis: &RibbonBasis) -> Result<CoefficientVector> {
    if shape.size() as u32 != basis.degree {
        return Err(Error::DegreeMismatch {
            expected: basis.degree,
            got: shape.size() as u32,
        });
    }
    basis.coordinates(&schur_expand(shape))
}

/// `v · λ̄ = 0` for a shape that is not a connected ribbon.
pub fn check_signed_sum(shape: &SkewShape, basis: &RibbonBasis) -> Result<bool> {
    if shape.is_connected_ribbon() {
        return Err(Error::IsConnectedRibbon(shape.to_string()));
    }
    let v = coefficient_vector(shape, basis)?;
    Ok(v.dot(&basis.parity_vector()).is_zero())
}

/// [`check_signed_sum`] for a product of connected shapes.
pub fn check_signed_sum_class(class: &ShapeClass, basis: &RibbonBasis) -> Result<bool> {
    if let Some(r) = class.as_connected_ribbon() {
        return Err(Error::IsConnectedRibbon(r.to_string()));
    }
    let v = basis.coordinates(&class.expand())?;
    Ok(v.dot(&basis.parity_vector()).is_zero())
}

/// Whether `f = c·g` for some nonzero rational `c`.
fn proportional(f: &SymFunc, g: &SymFunc) -> bool {
    if f.is_zero() || g.is_zero() || f.len() != g.len() {
        return false;
    }
    let (p, a) = f.terms().next().unwrap();
    let b = g.coefficient(p);
    if b.is_zero() {
        return false;
    }
    f.terms().all(|(q, x)| x * &b == &g.coefficient(q) * a)
}

/// Among connected ribbons of size `n` with equal row counts, proportional
/// Schur functions are equal.
pub fn check_scalar_multiple_lemma(n: u32) -> bool {
    let ribbons: Vec<(RibbonComposition, SymFunc)> = connected_ribbons_of_size(n)
        .into_iter()
        .map(|r| {
            let f = schur_expand(&r.to_shape());
            (r, f)
        })
        .collect();
    ribbons.iter().enumerate().all(|(i, (r, f))| {
        ribbons[i + 1..]
            .iter()
            .all(|(t, g)| r.row_count() != t.row_count() || !proportional(f, g) || f == g)
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Claim {
    /// `β ∘ γ ~ β* ∘ γ`
    Theorem,
    /// `β ∘ γ ~ β ∘ γ*`
    Corollary,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub claim: Claim,
    pub beta: Partition,
    pub structure: WowStructure,
    pub beta_shape: bool,
    pub loose_end: Option<LooseEnd>,
    pub lhs_shape: SkewShape,
    pub rhs_shape: SkewShape,
    pub lhs: SymFunc,
    pub rhs: SymFunc,
    pub equal: bool,
    pub trace: Option<ProofTrace>,
}

impl Report {
    pub fn hypotheses_hold(&self) -> bool {
        self.beta_shape && self.loose_end.is_none()
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "schema": 1,
            "instance": {
                "claim": match self.claim {
                    Claim::Theorem => "theorem",
                    Claim::Corollary => "corollary",
                },
                "beta": self.beta.to_string(),
                "structure": self.structure.to_json(),
                "lhsShape": self.lhs_shape.to_string(),
                "rhsShape": self.rhs_shape.to_string(),
            },
            "hypotheses": {
                "betaShape": self.beta_shape,
                "looseEnds": self.loose_end.is_some(),
                "wowValid": true,
                "looseEndWitness": self.loose_end.as_ref().map(|l| json!({
                    "side": format!("{:?}", l.side).to_lowercase(),
                    "ribbon": l.ribbon.to_string(),
                    "cells": l.cells.iter().map(|c| [c.row, c.col]).collect::<Vec<_>>(),
                })),
            },
            "withinTheorem": self.hypotheses_hold(),
            "lhs": self.lhs.to_json(),
            "rhs": self.rhs.to_json(),
            "equal": self.equal,
        });
        if let Some(t) = &self.trace {
            v["trace"] = t.to_json();
        }
        v
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let claim = match self.claim {
            Claim::Theorem => "beta o gamma ~ beta* o gamma",
            Claim::Corollary => "beta o gamma ~ beta o gamma*",
        };
        writeln!(f, "claim: {claim}")?;
        writeln!(f, "beta: {}", self.beta)?;
        writeln!(f, "structure: {}", self.structure)?;
        writeln!(
            f,
            "beta is a rectangle minus its corner: {}",
            self.beta_shape
        )?;
        match &self.loose_end {
            None => writeln!(f, "loose end ribbons: none")?,
            Some(l) => writeln!(
                f,
                "loose end ribbons: {} on the {:?}, cells {}",
                l.ribbon, l.side, l.cells
            )?,
        }
        if !self.hypotheses_hold() {
            writeln!(f, "outside theorem")?;
        }
        writeln!(f, "lhs shape: {}", self.lhs_shape)?;
        writeln!(f, "rhs shape: {}", self.rhs_shape)?;
        writeln!(f, "lhs: {}", self.lhs)?;
        writeln!(f, "rhs: {}", self.rhs)?;
        if let Some(t) = &self.trace {
            write!(f, "{t}")?;
        }
        write!(
            f,
            "verdict: {}",
            if self.equal { "equal" } else { "unequal" }
        )
    }
}

fn check_hypotheses(
    beta: &Partition,
    s: &WowStructure,
    strict: bool,
) -> Result<(bool, Option<LooseEnd>)> {
    let beta_shape = beta.is_rectangle_minus_corner();
    if strict && !beta_shape {
        return Err(Error::BadBeta(beta.to_string()));
    }
    let loose = loose_end_ribbon(s)?;
    if strict {
        if let Some(l) = &loose {
            return Err(Error::HypothesesFail(format!(
                "loose end ribbon {} at {}",
                l.ribbon, l.cells
            )));
        }
    }
    Ok((beta_shape, loose))
}

/// Compares `β ∘ γ` with `β* ∘ γ`. In strict mode an inadmissible `β` or
/// a loose end ribbon is an error; otherwise the verdict is still computed.
pub fn verify_main_theorem(beta: &Partition, s: &WowStructure, strict: bool) -> Result<Report> {
    let (beta_shape, loose_end) = check_hypotheses(beta, s, strict)?;
    let b = SkewShape::from_partition(beta.clone());
    let lhs_shape = compose(&b, s)?.shape;
    let rhs_shape = compose(&b.rotate180(), s)?.shape;
    let lhs = schur_expand(&lhs_shape);
    let rhs = schur_expand(&rhs_shape);
    Ok(Report {
        claim: Claim::Theorem,
        beta: beta.clone(),
        structure: s.clone(),
        beta_shape,
        loose_end,
        equal: lhs == rhs,
        lhs_shape,
        rhs_shape,
        lhs,
        rhs,
        trace: None,
    })
}

/// Compares `β ∘ γ` with `β ∘ γ*`.
pub fn verify_corollary(beta: &Partition, s: &WowStructure, strict: bool) -> Result<Report> {
    let (beta_shape, loose_end) = check_hypotheses(beta, s, strict)?;
    let b = SkewShape::from_partition(beta.clone());
    let lhs_shape = compose(&b, s)?.shape;
    let rhs_shape = compose(&b, &s.rotated()?)?.shape;
    let lhs = schur_expand(&lhs_shape);
    let rhs = schur_expand(&rhs_shape);
    Ok(Report {
        claim: Claim::Corollary,
        beta: beta.clone(),
        structure: s.clone(),
        beta_shape,
        loose_end,
        equal: lhs == rhs,
        lhs_shape,
        rhs_shape,
        lhs,
        rhs,
        trace: None,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisPath {
    /// The key ribbons have equal Schur functions: one key column.
    SameKey,
    /// Independent key ribbons: the bottom key is replaced by the difference.
    Difference,
}

/// The column-sum bookkeeping of the cocommutativity argument on `s ∘ γ`.
#[derive(Clone, Debug)]
pub struct ProofTrace {
    pub filled: Partition,
    pub composite: SkewShape,
    pub key_size: usize,
    pub top_key: RibbonComposition,
    pub bottom_key: RibbonComposition,
    pub path: BasisPath,
    pub basis: RibbonBasis,
    /// Column of the top key ribbon.
    pub key_column: usize,
    /// Column of the difference element, on that path.
    pub difference_column: Option<usize>,
    pub parity: Vec<i32>,
    /// Number of non-ribbon shapes taken out on the right and on the left.
    pub rows_right: usize,
    pub rows_left: usize,
    pub column_sums_left: Vec<RatSym>,
    pub column_sums_right: Vec<RatSym>,
    /// Terms `ribbon ⊗ A`.
    pub direct_right: Vec<(RibbonComposition, ShapeClass, i64)>,
    /// Terms `A ⊗ ribbon`.
    pub direct_left: Vec<(ShapeClass, RibbonComposition, i64)>,
    pub direct_terms_as_expected: bool,
    pub unequal_columns: Vec<usize>,
    pub non_key_columns_equal: bool,
    pub signed_sum_rows: bool,
    pub key_column_balance: bool,
    pub decomposition_consistent: bool,
    pub image_cocommutative: bool,
    pub agrees_with_cocommutativity: bool,
    pub derived_equal: bool,
}

impl ProofTrace {
    pub fn all_checks_hold(&self) -> bool {
        self.direct_terms_as_expected
            && self.non_key_columns_equal
            && self.signed_sum_rows
            && self.key_column_balance
            && self.decomposition_consistent
            && self.agrees_with_cocommutativity
    }

    pub fn to_json(&self) -> Value {
        let labels: Vec<String> = self
            .basis
            .elements()
            .iter()
            .map(|e| e.label.to_string())
            .collect();
        json!({
            "filled": self.filled.to_string(),
            "composite": self.composite.to_string(),
            "keySize": self.key_size,
            "topKey": self.top_key.to_string(),
            "bottomKey": self.bottom_key.to_string(),
            "path": match self.path {
                BasisPath::SameKey => "same-key",
                BasisPath::Difference => "difference",
            },
            "basis": labels,
            "keyColumn": self.key_column,
            "differenceColumn": self.difference_column,
            "parity": self.parity,
            "rowsRight": self.rows_right,
            "rowsLeft": self.rows_left,
            "columnSumsLeft": self.column_sums_left.iter().map(RatSym::to_json).collect::<Vec<_>>(),
            "columnSumsRight": self.column_sums_right.iter().map(RatSym::to_json).collect::<Vec<_>>(),
            "directRight": self.direct_right.iter().map(|(r, a, m)| json!({"ribbon": r.to_string(), "other": a, "mult": m})).collect::<Vec<_>>(),
            "directLeft": self.direct_left.iter().map(|(a, r, m)| json!({"other": a, "ribbon": r.to_string(), "mult": m})).collect::<Vec<_>>(),
            "checks": {
                "directTermsAsExpected": self.direct_terms_as_expected,
                "nonKeyColumnsEqual": self.non_key_columns_equal,
                "unequalColumns": self.unequal_columns,
                "signedSumRows": self.signed_sum_rows,
                "keyColumnBalance": self.key_column_balance,
                "decompositionConsistent": self.decomposition_consistent,
                "imageCocommutative": self.image_cocommutative,
                "agreesWithCocommutativity": self.agrees_with_cocommutativity,
            },
            "derivedEqual": self.derived_equal,
        })
    }
}

impl fmt::Display for ProofTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "trace: s = {}, |s o gamma| = {}",
            self.filled,
            self.composite.size()
        )?;
        writeln!(
            f,
            "  key ribbons: top {} bottom {} (size {})",
            self.top_key, self.bottom_key, self.key_size
        )?;
        let labels: Vec<String> = self
            .basis
            .elements()
            .iter()
            .map(|e| e.label.to_string())
            .collect();
        writeln!(
            f,
            "  basis: [{}], parity {:?}",
            labels.join(", "),
            self.parity
        )?;
        writeln!(
            f,
            "  rows: {} right, {} left",
            self.rows_right, self.rows_left
        )?;
        writeln!(
            f,
            "  direct terms as expected: {}",
            self.direct_terms_as_expected
        )?;
        writeln!(
            f,
            "  non-key columns equal: {} {:?}",
            self.non_key_columns_equal, self.unequal_columns
        )?;
        writeln!(f, "  signed sum on every row: {}", self.signed_sum_rows)?;
        writeln!(f, "  key column balance: {}", self.key_column_balance)?;
        writeln!(
            f,
            "  decomposition consistent: {}",
            self.decomposition_consistent
        )?;
        writeln!(f, "  image cocommutative: {}", self.image_cocommutative)?;
        writeln!(
            f,
            "  agrees with cocommutativity: {}",
            self.agrees_with_cocommutativity
        )?;
        writeln!(f, "  derived equality: {}", self.derived_equal)
    }
}

/// Per-column sums `Σ_λ λ̄[k] · A` over terms pairing a non-ribbon class
/// `λ` with `A`, plus the terms whose `λ` is a connected ribbon.
struct Columns {
    sums: Vec<RatSym>,
    rows: usize,
    signed_sum_rows: bool,
    direct: Vec<(RibbonComposition, ShapeClass, i64)>,
}

fn columns<'a, I>(terms: I, basis: &RibbonBasis) -> Result<Columns>
where
    I: Iterator<Item = (&'a ShapeClass, &'a ShapeClass, i64)>,
{
    let parity = basis.parity_vector();
    let mut sums = vec![RatSym::new(); basis.len()];
    let mut direct = Vec::new();
    let mut seen: BTreeMap<ShapeClass, ()> = BTreeMap::new();
    let mut signed_sum_rows = true;
    for (taken, other, m) in terms {
        if let Some(r) = taken.as_connected_ribbon() {
            direct.push((r, other.clone(), m));
            continue;
        }
        seen.insert(taken.clone(), ());
        let coords = basis.coordinates(&taken.expand())?;
        if !coords.dot(&parity).is_zero() {
            signed_sum_rows = false;
        }
        let a = other.expand();
        let m = BigRational::from_integer(BigInt::from(m));
        for (k, c) in coords.0.iter().enumerate() {
            sums[k].add_scaled_int(&a, &(c * &m));
        }
    }
    Ok(Columns {
        sums,
        rows: seen.len(),
        signed_sum_rows,
        direct,
    })
}

/// Columns of a `Sym ⊗ Sym` element after writing the factor `side` picks
/// in the basis.
fn tensor_columns(
    t: &BTreeMap<(Partition, Partition), BigInt>,
    basis: &RibbonBasis,
    first: bool,
) -> Result<Vec<RatSym>> {
    let mut sums = vec![RatSym::new(); basis.len()];
    let mut cache: BTreeMap<Partition, CoefficientVector> = BTreeMap::new();
    for ((p, q), c) in t {
        let (b, a) = if first { (p, q) } else { (q, p) };
        let coords = match cache.get(b) {
            Some(v) => v.clone(),
            None => {
                let v = basis.coordinates(&SymFunc::schur(b.clone()))?;
                cache.insert(b.clone(), v.clone());
                v
            }
        };
        let f = SymFunc::schur(a.clone());
        let c = BigRational::from_integer(c.clone());
        for (k, x) in coords.0.iter().enumerate() {
            sums[k].add_scaled_int(&f, &(x * &c));
        }
    }
    Ok(sums)
}

/// Runs the cocommutativity argument on `s ∘ γ` for `s` the rectangle
/// completing `β`. In strict mode failing hypotheses are an error; otherwise
/// the trace is computed anyway and its failing checks localise the problem.
pub fn proof_trace(beta: &Partition, s: &WowStructure, strict: bool) -> Result<ProofTrace> {
    check_hypotheses(beta, s, strict)?;
    let filled = beta
        .filled_corner()
        .ok_or_else(|| Error::BadBeta(beta.to_string()))?;
    let b = SkewShape::from_partition(beta.clone());
    let before = ShapeClass::of(&compose(&b, s)?.shape);
    let after = ShapeClass::of(&compose(&b.rotate180(), s)?.shape);
    let composite = compose(&SkewShape::from_partition(filled.clone()), s)?.shape;
    let keys = key_ribbons(s)?;
    let n = keys.size();
    let total = composite.size();
    let (a1, a2) = (keys.top.ribbon.clone(), keys.bottom.ribbon.clone());
    let f1 = schur_expand(&a1.to_shape());
    let f2 = schur_expand(&a2.to_shape());

    let (path, basis, key_column, difference_column) =
        match ribbon_basis(n as u32, &[a1.clone(), a2.clone()]) {
            Ok(base) => {
                let modified = base.with_difference(0, 1);
                (BasisPath::Difference, modified, 0, Some(1))
            }
            Err(Error::DependentRequired) if f1 == f2 => (
                BasisPath::SameKey,
                ribbon_basis(n as u32, std::slice::from_ref(&a1))?,
                0,
                None,
            ),
            Err(Error::DependentRequired) => {
                return Err(Error::HypothesesFail(format!(
                    "key ribbons {a1} and {a2} are proportional but not equal"
                )));
            }
            Err(e) => return Err(e),
        };

    let right_taken: CoproductSum = coproduct_graded(&composite, n);
    let left_taken: CoproductSum = if 2 * n == total {
        right_taken.clone()
    } else {
        coproduct_graded(&composite, total - n)
    };
    // terms b ⊗ A: b is taken out on the left, A is what remains
    let right = columns(right_taken.terms(), &basis)?;
    let left = columns(left_taken.terms().map(|(a, b, m)| (b, a, m)), &basis)?;

    let direct_right = right.direct.clone();
    let direct_left: Vec<(ShapeClass, RibbonComposition, i64)> = left
        .direct
        .iter()
        .map(|(r, a, m)| (a.clone(), r.clone(), *m))
        .collect();
    let direct_terms_as_expected = direct_right == vec![(a1.clone(), after.clone(), 1)]
        && direct_left == vec![(before.clone(), a2.clone(), 1)];

    let is_key = |k: usize| k == key_column || Some(k) == difference_column;
    let unequal_columns: Vec<usize> = (0..basis.len())
        .filter(|&k| !is_key(k) && right.sums[k] != left.sums[k])
        .collect();
    let non_key_columns_equal = unequal_columns.is_empty();

    // the key column as the signed sum of the others
    let parity = basis.parity_vector();
    let predicted = |sums: &[RatSym]| -> RatSym {
        let mut out = RatSym::new();
        let lead = BigRational::from_integer(BigInt::from(parity[key_column]));
        for (k, col) in sums.iter().enumerate() {
            if k != key_column && parity[k] != 0 {
                let c = -(&lead * BigRational::from_integer(BigInt::from(parity[k])));
                out.add_scaled(col, &c);
            }
        }
        out
    };
    let key_column_balance = predicted(&right.sums) == right.sums[key_column]
        && predicted(&left.sums) == left.sums[key_column]
        && right.sums[key_column] == left.sums[key_column];

    // all contributions to each column, direct terms included
    let with_direct =
        |sums: &[RatSym], direct: &[(RibbonComposition, ShapeClass, i64)]| -> Result<Vec<RatSym>> {
            let mut out = sums.to_vec();
            for (r, other, m) in direct {
                let coords = basis.coordinates(&schur_expand(&r.to_shape()))?;
                let a = other.expand();
                let m = BigRational::from_integer(BigInt::from(*m));
                for (k, c) in coords.0.iter().enumerate() {
                    out[k].add_scaled_int(&a, &(c * &m));
                }
            }
            Ok(out)
        };
    let full_right = with_direct(&right.sums, &right.direct)?;
    let full_left = with_direct(&left.sums, &left.direct)?;
    let image_right = image(&right_taken);
    let image_left = image(&left_taken);
    let decomposition_consistent = full_right == tensor_columns(&image_right, &basis, true)?
        && full_left == tensor_columns(&image_left, &basis, false)?;
    let swapped: BTreeMap<(Partition, Partition), BigInt> = image_left
        .iter()
        .map(|((p, q), c)| ((q.clone(), p.clone()), c.clone()))
        .collect();
    let image_cocommutative = image_right == swapped;
    let columns_balance = full_right == full_left;
    let agrees_with_cocommutativity = columns_balance == image_cocommutative;

    // every column balances by cocommutativity and the key column of R
    // balances that of L, so the direct terms α1 ⊗ (β*∘γ) and (β∘γ) ⊗ α2
    // carry equal key coordinates
    let derived_equal = direct_terms_as_expected
        && key_column_balance
        && full_right[key_column] == full_left[key_column];

    Ok(ProofTrace {
        filled,
        composite,
        key_size: n,
        top_key: a1,
        bottom_key: a2,
        path,
        key_column,
        difference_column,
        parity,
        rows_right: right.rows,
        rows_left: left.rows,
        signed_sum_rows: right.signed_sum_rows && left.signed_sum_rows,
        column_sums_left: left.sums,
        column_sums_right: right.sums,
        direct_right,
        direct_left,
        direct_terms_as_expected,
        unequal_columns,
        non_key_columns_equal,
        key_column_balance,
        decomposition_consistent,
        image_cocommutative,
        agrees_with_cocommutativity,
        derived_equal,
        basis,
    })
}

/// [`verify_main_theorem`] with its proof trace attached.
pub fn verify_with_trace(beta: &Partition, s: &WowStructure, strict: bool) -> Result<Report> {
    let mut report = verify_main_theorem(beta, s, strict)?;
    report.trace = Some(proof_trace(beta, s, strict)?);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopf::image_cocommutativity_graded;
    use crate::wow::detect_wow;

    fn shape(s: &str) -> SkewShape {
        s.parse().unwrap()
    }

    fn part(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn rib(s: &str) -> RibbonComposition {
        s.parse().unwrap()
    }

    fn worked() -> WowStructure {
        detect_wow(&shape("4,4,2,2/2,1")).remove(0)
    }

    fn counterexample() -> WowStructure {
        detect_wow(&shape("8,7,2/3,1")).remove(0)
    }

    #[test]
    fn small_bases() {
        let b = ribbon_basis(3, &[]).unwrap();
        assert_eq!(b.len(), 3);
        let rows: Vec<usize> = b
            .elements()
            .iter()
            .map(|e| match &e.label {
                BasisLabel::Ribbon(r) => r.row_count(),
                _ => unreachable!(),
            })
            .collect();
        assert_eq!(rows.iter().filter(|&&r| r == 2).count(), 1);

        let b = ribbon_basis(1, &[]).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b.elements()[0].label, BasisLabel::Ribbon(rib("1")));

        let b = ribbon_basis(4, &[rib("2,2")]).unwrap();
        assert_eq!(b.len(), 5);
        assert_eq!(b.elements()[0].label, BasisLabel::Ribbon(rib("2,2")));
        assert_eq!(b.parity_vector()[0], 1);
    }

    #[test]
    fn dependent_seeds_are_reported() {
        let r = ribbon_basis(3, &[rib("2,1"), rib("1,2")]);
        assert!(matches!(r, Err(Error::DependentRequired)));
        let r = ribbon_basis(3, &[rib("2,2")]);
        assert!(matches!(r, Err(Error::DegreeMismatch { .. })));
    }

    #[test]
    fn coordinates_round_trip() {
        let b = ribbon_basis(4, &[]).unwrap();
        for e in b.elements() {
            let v = b.coordinates(&e.expansion).unwrap();
            assert_eq!(v.0.iter().filter(|x| !x.is_zero()).count(), 1);
        }
        for s in ["2,2", "3,2/1", "2,2,2/1,1", "4,2/2"] {
            let sh = shape(s);
            let v = coefficient_vector(&sh, &b).unwrap();
            assert_eq!(b.evaluate(&v), RatSym::from_int(&schur_expand(&sh)));
        }
        assert!(matches!(
            coefficient_vector(&shape("2,1"), &b),
            Err(Error::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn signed_sums_vanish() {
        let b4 = ribbon_basis(4, &[]).unwrap();
        assert!(check_signed_sum(&shape("2,2"), &b4).unwrap());
        assert!(check_signed_sum(&shape("4,2/2"), &b4).unwrap());
        let b2 = ribbon_basis(2, &[]).unwrap();
        assert!(check_signed_sum(&shape("2,1/1"), &b2).unwrap());
        let b5 = ribbon_basis(5, &[]).unwrap();
        assert!(check_signed_sum(&shape("3,2"), &b5).unwrap());
        assert!(matches!(
            check_signed_sum(&shape("2,2/1"), &b4),
            Err(Error::DegreeMismatch { .. }) | Err(Error::IsConnectedRibbon(_))
        ));
        assert!(matches!(
            check_signed_sum(&shape("3,2/1"), &b4),
            Err(Error::IsConnectedRibbon(_))
        ));
    }

    #[test]
    fn connected_ribbons_do_not_vanish() {
        // the signed sum of a basis ribbon is its own parity
        let b = ribbon_basis(4, &[]).unwrap();
        for e in b.elements() {
            let v = b.coordinates(&e.expansion).unwrap();
            assert_eq!(
                v.dot(&b.parity_vector()),
                BigRational::from_integer(e.parity.into())
            );
        }
    }

    #[test]
    fn scalar_lemma_small() {
        for n in [1, 3, 4] {
            assert!(check_scalar_multiple_lemma(n));
        }
    }

    #[test]
    fn worked_instance_is_equal() {
        let r = verify_main_theorem(&part("2,1"), &worked(), true).unwrap();
        assert!(r.hypotheses_hold());
        assert!(r.equal);
        assert_eq!(r.lhs_shape.size(), 23);
        assert_ne!(r.lhs_shape, r.rhs_shape);
        let j = r.to_json();
        assert_eq!(j["schema"], 1);
        assert_eq!(j["equal"], true);
        assert!(r.to_string().ends_with("verdict: equal"));
    }

    #[test]
    fn counterexample_is_unequal() {
        let s = counterexample();
        let strict = verify_main_theorem(&part("2,1"), &s, true);
        assert!(matches!(strict, Err(Error::HypothesesFail(_))));
        let r = verify_main_theorem(&part("2,1"), &s, false).unwrap();
        assert!(!r.hypotheses_hold());
        assert_eq!(r.loose_end.as_ref().unwrap().cells.len(), 6);
        assert!(!r.equal);
        let c = verify_corollary(&part("2,1"), &s, false).unwrap();
        assert!(!c.equal);
    }

    #[test]
    fn single_box_beta() {
        for g in ["4,4,2,2/2,1", "3,3/1", "5,3,3/2,2"] {
            for s in detect_wow(&shape(g)) {
                if has_loose(&s) {
                    continue;
                }
                assert!(verify_main_theorem(&part("1"), &s, true).unwrap().equal);
                assert!(verify_corollary(&part("1"), &s, true).unwrap().equal);
            }
        }
    }

    fn has_loose(s: &WowStructure) -> bool {
        crate::wow::has_loose_end_ribbons(s).unwrap()
    }

    #[test]
    fn beta_must_be_a_cornered_rectangle() {
        let r = verify_main_theorem(&part("2,2"), &worked(), true);
        assert!(matches!(r, Err(Error::BadBeta(_))));
        let r = verify_main_theorem(&part("3,1"), &worked(), false).unwrap();
        assert!(!r.beta_shape);
        assert!(!r.hypotheses_hold());
    }

    #[test]
    fn corollary_on_worked_example() {
        let r = verify_corollary(&part("2,1"), &worked(), true).unwrap();
        assert!(r.equal);
        assert_eq!(r.claim, Claim::Corollary);
    }

    #[test]
    fn trace_on_worked_example() {
        let s = worked();
        let t = proof_trace(&part("2,1"), &s, true).unwrap();
        assert!(t.all_checks_hold(), "{t}");
        assert_eq!(t.filled, part("2,2"));
        assert_eq!(t.key_size, 5);
        assert!(t.derived_equal);
        assert_eq!(
            t.image_cocommutative,
            image_cocommutativity_graded(&t.composite, t.key_size)
        );
        let r = verify_with_trace(&part("2,1"), &s, true).unwrap();
        assert_eq!(r.trace.as_ref().unwrap().derived_equal, r.equal);
    }

    #[test]
    fn trace_localises_a_loose_end() {
        let s = counterexample();
        assert!(matches!(
            proof_trace(&part("2,1"), &s, true),
            Err(Error::HypothesesFail(_))
        ));
        let t = proof_trace(&part("2,1"), &s, false).unwrap();
        assert!(!t.derived_equal);
        assert!(!t.all_checks_hold());
    }
}
