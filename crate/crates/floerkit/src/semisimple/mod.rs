//! Finite-dimensional algebras over Novikov fields: idempotent splitting by
//! a distinct-eigenvalue element, discriminants, transfer of the splitting
//! to characteristic `p`, and Clifford algebras of a Hessian.

pub mod algebra;
pub mod clifford;
pub mod split;
pub mod transfer;

pub use algebra::{from_critical_set, parse_algebra, parse_number_field, parse_series, AlgebraOverNovikov, Element};
pub use clifford::clifford_from_hessian;
pub use split::{
    certify_semisimple, discriminant, discriminant_valuation, exclusion_primes, resultant, verify_split,
    DiscriminantReport, IdempotentSplit,
};
pub use transfer::{direct_char_p_split, extend_algebra, mod_p_transfer, reduce_algebra, TransferReport};

use crate::coeff::CoeffError;
use crate::novikov::{LinalgError, NovikovError};

#[derive(Debug, thiserror::Error)]
pub enum SemisimpleError {
    #[error("malformed algebra: {0}")]
    Shape(String),
    #[error("unit axiom fails on basis element {index}")]
    UnitAxiom { index: usize },
    #[error("product is not associative on basis triple ({i}, {j}, {k})")]
    NotAssociative { i: usize, j: usize, k: usize },
    #[error("algebra is not commutative")]
    NotCommutative,
    #[error("the element has a repeated eigenvalue")]
    RepeatedEigenvalue,
    #[error("the element has eigenvalue zero")]
    ZeroEigenvalue,
    #[error("eigenvalues need a field of degree above {budget}")]
    FieldBudgetExceeded { budget: usize },
    #[error("discriminant vanishes to the stored precision")]
    DiscriminantZeroToPrecision,
    #[error("prime {p} is too small: {reason}")]
    PrimeTooSmall { p: u64, reason: String },
    #[error("Newton iteration diverged{}", p.map(|p| format!(" at p = {p}")).unwrap_or_default())]
    IterationDiverged { p: Option<u64> },
    #[error("symmetric form is degenerate")]
    DegenerateForm,
    #[error("stored precision is insufficient for the certificate")]
    PrecisionInsufficient,
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Novikov(#[from] NovikovError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
}
