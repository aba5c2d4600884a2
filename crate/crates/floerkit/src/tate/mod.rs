//! The `Z/p` layer: the Borel model of `S^infinity`, cyclic tensor powers
//! with Koszul signs, the Tate complex and its torsion exponents.

pub mod borel;
pub mod complex;
pub mod tensor;

pub use borel::{field_rank, BorelMorseComplex};
pub use complex::{
    quasi_frobenius_check, smith_demo, tate_differential, tate_torsion_exponents, QuasiFrobeniusReport, SmithDemo,
    TateComplex, TateTorsion, WindowCertificate,
};
pub use tensor::{tensor_power_with_zeta, TensorPower};

use crate::coeff::Rat;
use crate::novikov::LinalgError;

#[derive(Debug, thiserror::Error)]
pub enum TateError {
    #[error("window half-width {window} leaks: boundary levels change the torsion")]
    WindowTooSmall { window: usize },
    #[error("complex must be over the prime field F_{p}")]
    FieldMismatch { p: u64 },
    #[error("the Tate construction needs an odd prime")]
    EvenPrime,
    #[error("base differential has entries of negative valuation after normalization")]
    NotOverValuationRing,
    #[error("Tate differential does not square to zero")]
    NotAComplex,
    #[error("exponent {exponent} does not pair across the two theta sectors")]
    UnpairedExponent { exponent: Rat },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}
