//! Coefficient fields: exact rationals, Gaussian rationals, cyclotomic number
//! fields, finite fields and rational function fields, with reductions from
//! characteristic zero to characteristic `p`.

pub mod field;
pub mod finite_field;
pub mod gaussian;
pub mod number_field;
pub mod poly;
pub mod rat;
pub mod ratfunc;
pub mod roots;

pub use field::{CoeffError, Field};
pub use finite_field::{is_prime, FiniteField};
pub use gaussian::{reduce_mod_p, FiniteFieldElem, GaussianRat};
pub use number_field::{NfReduction, NumberField, QField};
pub use rat::Rat;
pub use ratfunc::{RatFn, RationalFunctions};
pub use roots::{catalog_fields, RootFinding, SplittingCatalog};

/// Builds `F_p[x]/(f)` for monic `f` (lowest degree first).
pub fn extend_field(p: u64, f: &[u64]) -> Result<FiniteField, CoeffError> {
    FiniteField::extension(p, f)
}
