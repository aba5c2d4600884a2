//! The coefficient-field abstraction shared by every Novikov computation.

use std::fmt;
use std::hash::Hash;

use super::rat::Rat;

/// Errors raised by coefficient arithmetic and reductions.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CoeffError {
    #[error("prime {p} divides a denominator")]
    DenominatorDivisibleByP { p: u64 },
    #[error("polynomial {poly} is reducible over F_{p}")]
    ReduciblePolynomial { p: u64, poly: String },
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("prime {p} ramifies in {field}")]
    RamifiedPrime { p: u64, field: String },
    #[error("coefficient fields do not match")]
    FieldMismatch,
    #[error("no field of degree at most {budget} contains the required roots")]
    FieldBudgetExceeded { budget: usize },
    #[error("element is not invertible")]
    NotInvertible,
    #[error("malformed field element: {0}")]
    Parse(String),
}

/// A runtime handle to a commutative field.
///
/// Handles are cheap to clone and compare; elements are plain values whose
/// meaning depends on the handle that produced them.
pub trait Field: Clone + fmt::Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + fmt::Debug + PartialEq + Eq + Hash + Send + Sync + 'static;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn from_int(&self, n: i64) -> Self::Elem;
    /// Image of a rational number; `None` when the denominator vanishes in
    /// the field.
    fn from_rat(&self, r: &Rat) -> Option<Self::Elem>;
    /// 0 for characteristic-zero fields.
    fn characteristic(&self) -> u64;
    /// Short human-readable name such as `Q`, `Q(zeta_3)` or `F_25`.
    fn describe(&self) -> String;
    fn format_elem(&self, a: &Self::Elem) -> String;
    fn elem_to_json(&self, a: &Self::Elem) -> serde_json::Value;
    fn elem_from_json(&self, v: &serde_json::Value) -> Result<Self::Elem, CoeffError>;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Integer power allowing negative exponents for nonzero elements.
    fn powi(&self, a: &Self::Elem, e: i64) -> Option<Self::Elem> {
        if e >= 0 {
            Some(self.pow(a, e as u64))
        } else {
            self.inv(a).map(|ai| self.pow(&ai, e.unsigned_abs()))
        }
    }
}
