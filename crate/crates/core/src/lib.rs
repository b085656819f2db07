//! Skew shapes, their Schur functions, the shape Hopf algebra, and the
//! W-composition of skew shapes, with machine checks of the resulting
//! Schur function equalities.
//!
//! ```
//! use schurhopf::{detect_wow, verify_main_theorem, Partition, SkewShape};
//!
//! let gamma: SkewShape = "4,4,2,2/2,1".parse().unwrap();
//! let structure = &detect_wow(&gamma)[0];
//! let beta: Partition = "2,1".parse().unwrap();
//! let report = verify_main_theorem(&beta, structure, true).unwrap();
//! assert!(report.equal);
//! ```

pub mod error;
pub mod hopf;
pub mod schur;
pub mod shapes;
pub mod verifier;
pub mod wow;

pub use error::{Error, Result};
pub use hopf::{coproduct, CoproductSum, ShapeClass, Side};
pub use schur::{monomial_expansion, multiply, schur_equal, schur_expand, MonomialPoly, SymFunc};
pub use shapes::{Cell, CellSet, Partition, RibbonComposition, Rim, SkewShape};
pub use verifier::{
    proof_trace, ribbon_basis, verify_corollary, verify_main_theorem, ProofTrace, Report,
    RibbonBasis,
};
pub use wow::{compose, detect_wow, key_ribbons, Orientation, WowStructure};
