//! The `Z/p` Tate complex of a base complex over `Lambda_0` in
//! characteristic `p`, its torsion exponents, windowed truncations in the
//! equivariant parameter, and the quasi-Frobenius comparison.
//!
//! On `V = C^{(x) p}` doubled by a bit `theta`, the differential is the
//! block matrix
//!
//! ```text
//!   x       -> d x + theta (1 - zeta) x
//!   theta x -> -theta d x + u N x,      N = 1 + zeta + ... + zeta^{p-1}
//! ```
//!
//! Exact computations use the coefficient field `F_p(u)`, in which `u` is
//! invertible.  The window `[-M, M]` keeps the powers `u^k` as separate
//! levels over `F_p`; levels at or above a bound form a subcomplex, so the
//! window is the quotient of the levels `>= -M` by the levels `> M`.

use serde_json::{json, Value};

use crate::coeff::{Field, FiniteField, Rat, RationalFunctions};
use crate::filtered::FilteredComplex;
use crate::novikov::linalg::{identity, invariant_valuations, is_exact_zero_matrix, mat_mul, mat_sub, zeros};
use crate::novikov::{Matrix, NovikovSeries};

use super::tensor::{tensor_power_with_zeta, TensorPower};
use super::TateError;

pub type UField = RationalFunctions<FiniteField>;

#[derive(Clone, Debug)]
pub struct TateComplex {
    pub p: u64,
    /// Base differential in the level-zero basis (entries in `Lambda_0`).
    pub base: Matrix<FiniteField>,
    pub base_degrees: Vec<u8>,
    pub tensor: TensorPower<FiniteField>,
    /// Half-width `M` of the window of `u`-powers.
    pub window: usize,
    pub field: UField,
    /// `2 |V| x 2 |V|` differential over `F_p(u)`: indices `< |V|` are the
    /// plain words, the rest carry `theta`.
    pub matrix: Matrix<UField>,
}

/// Torsion exponents with their split into the two `theta` sectors.
#[derive(Clone, Debug, PartialEq)]
pub struct TateTorsion {
    /// Positive invariant valuations of the full differential, ascending.
    pub exponents: Vec<Rat>,
    /// Multiset of each exponent with half its multiplicity, ascending.
    pub per_sector: Vec<Rat>,
    /// Free rank over `Lambda_{F_p(u)}` of the full complex.
    pub free_rank: usize,
}

impl TateTorsion {
    pub fn total(&self) -> Rat {
        self.per_sector.iter().fold(Rat::zero(), |a, b| &a + b)
    }
}

fn base_from_complex(c: &FilteredComplex<FiniteField>) -> Result<(Matrix<FiniteField>, Vec<u8>), TateError> {
    let n = c.normalized_matrix();
    for row in &n {
        for x in row {
            if let Some(v) = x.val_lower_bound() {
                if v.is_negative() {
                    return Err(TateError::NotOverValuationRing);
                }
            }
        }
    }
    Ok((n, c.generators().iter().map(|g| g.degree).collect()))
}

fn lift<F: Field>(uf: &RationalFunctions<F>, s: &NovikovSeries<F>) -> NovikovSeries<RationalFunctions<F>> {
    s.map_coeffs(uf, |c| Ok(uf.constant(c.clone()))).expect("constant embedding")
}

/// Builds the Tate complex of `c` for the prime `p = char(c)` with window
/// half-width `m >= 2`.
pub fn tate_differential(c: &FilteredComplex<FiniteField>, p: u64, m: usize) -> Result<TateComplex, TateError> {
    let k = c.field().clone();
    if k.p() != p || k.degree() != 1 {
        return Err(TateError::FieldMismatch { p });
    }
    if p == 2 {
        return Err(TateError::EvenPrime);
    }
    if m < 2 {
        return Err(TateError::WindowTooSmall { window: m });
    }
    let (base, degrees) = base_from_complex(c)?;
    let tensor = tensor_power_with_zeta(&k, &base, &degrees, p as usize);
    let v = tensor.len();
    let uf = RationalFunctions::new(k.clone());
    let u = uf.u();
    let id = identity(&k, v);
    let one_minus_zeta = mat_sub(&id, &tensor.zeta);
    let norm = tensor.norm();
    let mut mat = zeros(&uf, 2 * v, 2 * v);
    for r in 0..v {
        for col in 0..v {
            mat[r][col] = lift(&uf, &tensor.differential[r][col]);
            mat[v + r][col] = lift(&uf, &one_minus_zeta[r][col]);
            mat[v + r][v + col] = -&lift(&uf, &tensor.differential[r][col]);
            mat[r][v + col] = lift(&uf, &norm[r][col]).scale(&u);
        }
    }
    // D^2 = 0, D zeta = zeta D and zeta^p = 1 give d_Tate^2 = 0 blockwise,
    // and the window is a quotient complex of it
    let d2 = mat_mul(&k, &tensor.differential, &tensor.differential);
    if !is_exact_zero_matrix(&d2) || !tensor.zeta_commutes_with_d() || !tensor.zeta_order_divides_p() {
        return Err(TateError::NotAComplex);
    }
    let tc = TateComplex { p, base, base_degrees: degrees, tensor, window: m, field: uf, matrix: mat };
    Ok(tc)
}

fn torsion_from_valuations(vals: Vec<Rat>, dim: usize) -> Result<TateTorsion, TateError> {
    let rank = vals.len();
    let mut exponents: Vec<Rat> = vals.into_iter().filter(|v| v.is_positive()).collect();
    exponents.sort();
    let mut per_sector = Vec::new();
    let mut i = 0;
    while i < exponents.len() {
        let j = exponents[i..].iter().take_while(|x| **x == exponents[i]).count();
        if j % 2 == 1 {
            return Err(TateError::UnpairedExponent { exponent: exponents[i].clone() });
        }
        per_sector.extend(std::iter::repeat(exponents[i].clone()).take(j / 2));
        i += j;
    }
    Ok(TateTorsion { exponents, per_sector, free_rank: dim - 2 * rank })
}

impl TateComplex {
    pub fn tensor_len(&self) -> usize {
        self.tensor.len()
    }

    /// Torsion of the complex over `Lambda_{F_p(u)}`, without windowing.
    pub fn exact_torsion(&self) -> Result<TateTorsion, TateError> {
        let vals = invariant_valuations(&self.field, &self.matrix)?;
        torsion_from_valuations(vals, self.matrix.len())
    }

    /// The window `[-m, m]` of `u`-levels as a complex over `F_p`: index
    /// `(level, bit, word)` maps to `level * 2|V| + bit * |V| + word`.
    pub fn window_matrix(&self, m: usize) -> Matrix<FiniteField> {
        let k = self.tensor.field();
        let v = self.tensor.len();
        let levels = 2 * m + 1;
        let block = 2 * v;
        let id = identity(&k, v);
        let one_minus_zeta = mat_sub(&id, &self.tensor.zeta);
        let norm = self.tensor.norm();
        let d = &self.tensor.differential;
        let mut w = zeros(&k, levels * block, levels * block);
        for l in 0..levels {
            let o = l * block;
            for r in 0..v {
                for c in 0..v {
                    w[o + r][o + c] = d[r][c].clone();
                    w[o + v + r][o + c] = one_minus_zeta[r][c].clone();
                    w[o + v + r][o + v + c] = -&d[r][c];
                    if l + 1 < levels {
                        w[o + block + r][o + v + c] = norm[r][c].clone();
                    }
                }
            }
        }
        w
    }

    /// Positive invariant valuations of the window complex, ascending.
    pub fn window_exponents(&self, m: usize) -> Result<Vec<Rat>, TateError> {
        let k = self.tensor.field();
        let mut vals: Vec<Rat> =
            invariant_valuations(&k, &self.window_matrix(m))?.into_iter().filter(|v| v.is_positive()).collect();
        vals.sort();
        Ok(vals)
    }

    /// Certifies the window: the torsion added by two extra levels is the
    /// same for the windows `m - 2 -> m - 1` and `m - 1 -> m`, and equals
    /// twice the exact torsion (one copy per level).  Otherwise boundary
    /// levels still influence the result and the window is too small.
    pub fn certify_window(&self, exact: &TateTorsion) -> Result<WindowCertificate, TateError> {
        let m = self.window;
        let sum = |v: &[Rat]| v.iter().fold(Rat::zero(), |a, b| &a + b);
        let totals: Vec<Rat> =
            [m - 2, m - 1, m].iter().map(|&w| self.window_exponents(w).map(|e| sum(&e))).collect::<Result<_, _>>()?;
        let inc_lo = &totals[1] - &totals[0];
        let inc_hi = &totals[2] - &totals[1];
        let expected = &Rat::from_int(2) * &sum(&exact.exponents);
        let cert = WindowCertificate { window: m, totals, increment: inc_hi.clone() };
        if inc_lo != inc_hi || inc_hi != expected {
            return Err(TateError::WindowTooSmall { window: m });
        }
        Ok(cert)
    }
}

/// Totals of window torsion for half-widths `M - 2, M - 1, M`.
#[derive(Clone, Debug, PartialEq)]
pub struct WindowCertificate {
    pub window: usize,
    pub totals: Vec<Rat>,
    pub increment: Rat,
}

/// Torsion exponents of the Tate homology per `theta` sector, certified
/// against the window.
pub fn tate_torsion_exponents(tc: &TateComplex) -> Result<(TateTorsion, WindowCertificate), TateError> {
    let exact = tc.exact_torsion()?;
    let cert = tc.certify_window(&exact)?;
    Ok((exact, cert))
}

/// Comparison of the Tate homology with the base homology.
#[derive(Clone, Debug)]
pub struct QuasiFrobeniusReport {
    pub p: u64,
    pub base_exponents: Vec<Rat>,
    pub base_free_rank: usize,
    pub tate: TateTorsion,
    pub window: WindowCertificate,
    pub ranks_match: bool,
    pub exponents_match: bool,
}

impl QuasiFrobeniusReport {
    pub fn ok(&self) -> bool {
        self.ranks_match && self.exponents_match
    }

    pub fn base_torsion(&self) -> Rat {
        self.base_exponents.iter().fold(Rat::zero(), |a, b| &a + b)
    }

    pub fn to_json(&self) -> Value {
        let tate_total = self.tate.total();
        let base_total = self.base_torsion();
        let ratio = if base_total.is_zero() { Value::Null } else { Value::String((&tate_total / &base_total).to_string()) };
        let strs = |v: &[Rat]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        json!({
            "p": self.p,
            "window": self.window.window,
            "window_totals": strs(&self.window.totals),
            "tate_torsion": tate_total.to_string(),
            "base_torsion": base_total.to_string(),
            "ratio": ratio,
            "tate_exponents": strs(&self.tate.per_sector),
            "base_exponents": strs(&self.base_exponents),
            "tate_free_rank_per_sector": self.tate.free_rank / 2,
            "base_free_rank": self.base_free_rank,
            "quasi_frobenius": if self.ok() { "ok" } else { "mismatch" },
        })
    }
}

/// Builds the Tate complex and compares: the free rank per `theta` sector
/// with the base homology rank, and the exponents with `p` times the base
/// exponents.
pub fn quasi_frobenius_check(
    c: &FilteredComplex<FiniteField>,
    p: u64,
    m: usize,
) -> Result<QuasiFrobeniusReport, TateError> {
    let tc = tate_differential(c, p, m)?;
    let (tate, window) = tate_torsion_exponents(&tc)?;
    let k = c.field();
    let vals = invariant_valuations(k, &tc.base)?;
    let base_free_rank = tc.base.len() - 2 * vals.len();
    let mut base_exponents: Vec<Rat> = vals.into_iter().filter(|v| v.is_positive()).collect();
    base_exponents.sort();
    let scaled: Vec<Rat> = base_exponents.iter().map(|g| g * &Rat::from_int(p as i64)).collect();
    let ranks_match = tate.free_rank % 2 == 0 && tate.free_rank / 2 == base_free_rank;
    let exponents_match = tate.per_sector == scaled;
    Ok(QuasiFrobeniusReport { p, base_exponents, base_free_rank, tate, window, ranks_match, exponents_match })
}

/// Outcome of [`smith_demo`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SmithDemo {
    /// Smallest `k` with `p^k tau > bars * C_0`.
    Contradiction { k: u32, growth: Rat, bound: Rat },
    /// `tau = 0`: the growth never exceeds the bound.
    Vacuous,
    /// No `k <= k_max` suffices.
    NotReached { k_max: u32 },
}

/// Iterating `p^k tau` against a depth bound `bars * C_0`.
pub fn smith_demo(base_tau: &Rat, c0: &Rat, bars: u64, p: u64, k_max: u32) -> SmithDemo {
    if !base_tau.is_positive() {
        return SmithDemo::Vacuous;
    }
    let bound = c0 * &Rat::from_int(bars as i64);
    let mut growth = base_tau.clone();
    let pr = Rat::from_int(p as i64);
    for k in 0..=k_max {
        if growth > bound {
            return SmithDemo::Contradiction { k, growth, bound };
        }
        growth = &growth * &pr;
    }
    SmithDemo::NotReached { k_max }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filtered::{Generator, Mode};

    fn bar_complex(p: u64, g: Rat) -> FilteredComplex<FiniteField> {
        let k = FiniteField::prime(p).unwrap();
        let gens = vec![Generator::new("x", 1, g.clone()), Generator::new("y", 0, Rat::zero())];
        let mut d = zeros(&k, 2, 2);
        d[1][0] = NovikovSeries::one(&k);
        FilteredComplex::new(&k, gens, d, Mode::Verbose).unwrap()
    }

    #[test]
    fn half_bar_triples() {
        let c = bar_complex(3, Rat::new(1, 2));
        let r = quasi_frobenius_check(&c, 3, 4).unwrap();
        assert_eq!(r.tate.per_sector, vec![Rat::new(3, 2)]);
        assert_eq!(r.tate.total(), Rat::new(3, 2));
        assert!(r.ok());
    }

    #[test]
    fn zero_differential_has_no_torsion() {
        let k = FiniteField::prime(3).unwrap();
        let gens = vec![Generator::new("x", 0, Rat::zero()), Generator::new("y", 1, Rat::zero())];
        let c = FilteredComplex::new(&k, gens, zeros(&k, 2, 2), Mode::Verbose).unwrap();
        let r = quasi_frobenius_check(&c, 3, 3).unwrap();
        assert!(r.tate.per_sector.is_empty());
        assert_eq!(r.base_free_rank, 2);
        assert!(r.ok());
    }

    #[test]
    fn one_generator_gives_free_rank_match() {
        let k = FiniteField::prime(3).unwrap();
        let c = FilteredComplex::new(&k, vec![Generator::new("x", 0, Rat::zero())], zeros(&k, 1, 1), Mode::Verbose).unwrap();
        let tc = tate_differential(&c, 3, 2).unwrap();
        assert!(is_exact_zero_matrix(&tc.matrix));
        let r = quasi_frobenius_check(&c, 3, 2).unwrap();
        assert_eq!(r.tate.free_rank, 2);
        assert!(r.ok());
    }

    #[test]
    fn full_and_window_differentials_square_to_zero() {
        let c = bar_complex(3, Rat::new(1, 3));
        let tc = tate_differential(&c, 3, 2).unwrap();
        assert!(is_exact_zero_matrix(&mat_mul(&tc.field, &tc.matrix, &tc.matrix)));
        let w = tc.window_matrix(2);
        assert!(is_exact_zero_matrix(&mat_mul(&FiniteField::prime(3).unwrap(), &w, &w)));
    }

    #[test]
    fn smith_demo_examples() {
        assert_eq!(
            smith_demo(&Rat::one(), &Rat::from_int(100), 10, 5, 20),
            SmithDemo::Contradiction { k: 5, growth: Rat::from_int(3125), bound: Rat::from_int(1000) }
        );
        assert_eq!(smith_demo(&Rat::zero(), &Rat::from_int(100), 10, 5, 20), SmithDemo::Vacuous);
    }
}
