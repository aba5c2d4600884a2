//! Verification of `delta`-quasiequivalences between filtered complexes.

use crate::coeff::{Field, Rat};
use crate::novikov::linalg::{self, Matrix};

use super::FilteredComplex;

/// The first failed condition of a quasiequivalence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuasiViolation {
    /// A matrix has the wrong shape.
    Shape(&'static str),
    /// `d Phi != Phi d` (or the same for `Psi`).
    NotChainMap(&'static str),
    /// A map raises the level by more than allowed.
    ShiftExceeded { map: &'static str, from: usize, to: usize, shift: Rat, allowed: Rat },
    /// `Psi Phi - 1 != d K + K d` (or the same on the other side).
    NotHomotopy(&'static str),
}

impl std::fmt::Display for QuasiViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            QuasiViolation::Shape(m) => write!(f, "{m} has the wrong shape"),
            QuasiViolation::NotChainMap(m) => write!(f, "{m} is not a chain map"),
            QuasiViolation::ShiftExceeded { map, from, to, shift, allowed } => {
                write!(f, "{map} sends generator {from} to {to} with shift {shift} > {allowed}")
            }
            QuasiViolation::NotHomotopy(m) => write!(f, "{m} is not a homotopy"),
        }
    }
}

fn shape<F: Field>(m: &Matrix<F>, rows: usize, cols: usize) -> bool {
    m.len() == rows && m.iter().all(|r| r.len() == cols)
}

fn is_zero<F: Field>(m: &Matrix<F>) -> bool {
    m.iter().all(|r| r.iter().all(|x| x.has_no_terms()))
}

/// Largest `l(target) - v(entry) - l(source)` over the nonzero entries.
fn check_shift<F: Field>(
    name: &'static str,
    m: &Matrix<F>,
    src: &FilteredComplex<F>,
    dst: &FilteredComplex<F>,
    allowed: &Rat,
) -> Result<(), QuasiViolation> {
    for (to, row) in m.iter().enumerate() {
        for (from, x) in row.iter().enumerate() {
            if let Some((v, _)) = x.leading() {
                let shift = &(&dst.generators()[to].action - v) - &src.generators()[from].action;
                if &shift > allowed {
                    return Err(QuasiViolation::ShiftExceeded { map: name, from, to, shift, allowed: allowed.clone() });
                }
            }
        }
    }
    Ok(())
}

/// Checks that `Phi: C1 -> C2` and `Psi: C2 -> C1` are chain maps raising
/// level by at most `delta`, and that `K1`, `K2` are homotopies
/// `Psi Phi - 1 = d K1 + K1 d`, `Phi Psi - 1 = d K2 + K2 d` raising level by
/// at most `2 delta`.
pub fn check_quasiequivalence<F: Field>(
    c1: &FilteredComplex<F>,
    c2: &FilteredComplex<F>,
    phi: &Matrix<F>,
    psi: &Matrix<F>,
    k1: &Matrix<F>,
    k2: &Matrix<F>,
    delta: &Rat,
) -> Result<(), QuasiViolation> {
    let k = c1.field();
    let (n1, n2) = (c1.len(), c2.len());
    for (name, m, r, c) in [("Phi", phi, n2, n1), ("Psi", psi, n1, n2), ("K1", k1, n1, n1), ("K2", k2, n2, n2)] {
        if !shape(m, r, c) {
            return Err(QuasiViolation::Shape(name));
        }
    }
    let (d1, d2) = (c1.differential(), c2.differential());
    if !is_zero(&linalg::mat_sub(&linalg::mat_mul(k, d2, phi), &linalg::mat_mul(k, phi, d1))) {
        return Err(QuasiViolation::NotChainMap("Phi"));
    }
    if !is_zero(&linalg::mat_sub(&linalg::mat_mul(k, d1, psi), &linalg::mat_mul(k, psi, d2))) {
        return Err(QuasiViolation::NotChainMap("Psi"));
    }
    let two = delta + delta;
    check_shift("Phi", phi, c1, c2, delta)?;
    check_shift("Psi", psi, c2, c1, delta)?;
    check_shift("K1", k1, c1, c1, &two)?;
    check_shift("K2", k2, c2, c2, &two)?;
    let homotopy = |a: &Matrix<F>, b: &Matrix<F>, d: &Matrix<F>, h: &Matrix<F>, n: usize| {
        let lhs = linalg::mat_sub(&linalg::mat_mul(k, a, b), &linalg::identity(k, n));
        let rhs = linalg::mat_add(&linalg::mat_mul(k, d, h), &linalg::mat_mul(k, h, d));
        is_zero(&linalg::mat_sub(&lhs, &rhs))
    };
    if !homotopy(psi, phi, d1, k1, n1) {
        return Err(QuasiViolation::NotHomotopy("K1"));
    }
    if !homotopy(phi, psi, d2, k2, n2) {
        return Err(QuasiViolation::NotHomotopy("K2"));
    }
    Ok(())
}

/// The identity quadruple `(1, 1, 0, 0)` between two complexes with the
/// same differential; it is a `delta`-quasiequivalence exactly when the
/// actions differ by at most `delta`.
pub fn identity_quadruple<F: Field>(c: &FilteredComplex<F>) -> (Matrix<F>, Matrix<F>, Matrix<F>, Matrix<F>) {
    let k = c.field();
    let n = c.len();
    (linalg::identity(k, n), linalg::identity(k, n), linalg::zeros(k, n, n), linalg::zeros(k, n, n))
}
