//! Idempotent splitting by a certifying element with distinct nonzero
//! eigenvalues, and the discriminant of its characteristic polynomial.

use serde_json::{json, Value};

use crate::coeff::{Field, NumberField, Rat, SplittingCatalog};
use crate::novikov::linalg::{charpoly, det};
use crate::novikov::{derivative, polynomial_roots, NovikovSeries, PuiseuxError};

use super::algebra::{AlgebraOverNovikov, Element};
use super::SemisimpleError;

/// Doublings of the working margin before a certificate is declared failed.
pub const MAX_MARGIN_DOUBLINGS: usize = 5;

/// Orthogonal idempotents diagonalizing the certifying element.
#[derive(Clone, Debug)]
pub struct IdempotentSplit<F: Field> {
    /// Field containing the eigenvalues; the algebra is extended to it.
    pub field: F,
    pub eigenvalues: Vec<NovikovSeries<F>>,
    pub idempotents: Vec<Element<F>>,
    /// `l(e_l)` for each idempotent.
    pub valuations: Vec<Rat>,
    /// Every identity below holds coordinatewise to this absolute precision:
    /// `e_l e_k = delta_lk e_l`, `sum e_l = 1`, `a e_l = lambda_l e_l`.
    pub precision: Rat,
    /// Working precision that produced the certificate.
    pub working_precision: Rat,
}

impl<F: Field> IdempotentSplit<F> {
    pub fn to_json(&self) -> Value {
        let elem = |e: &Element<F>| Value::Array(e.iter().map(|c| Value::String(c.format())).collect());
        json!({
            "field": self.field.describe(),
            "precision": self.precision.to_string(),
            "eigenvalues": self.eigenvalues.iter().map(|l| l.format()).collect::<Vec<_>>(),
            "idempotents": self.idempotents.iter().map(elem).collect::<Vec<_>>(),
            "valuations": self.valuations.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
        })
    }
}

pub(crate) fn elem_certified<F: Field>(x: &[NovikovSeries<F>], z: &Rat) -> bool {
    x.iter().all(|c| c.certified_val_at_least(z))
}

fn elem_sub<F: Field>(a: &[NovikovSeries<F>], b: &[NovikovSeries<F>]) -> Element<F> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn elem_scale<F: Field>(a: &[NovikovSeries<F>], s: &NovikovSeries<F>) -> Element<F> {
    a.iter().map(|x| x * s).collect()
}

/// Checks the idempotent identities of a split to absolute precision `z`.
pub fn verify_split<F: Field>(
    alg: &AlgebraOverNovikov<F>,
    a: &[NovikovSeries<F>],
    eigenvalues: &[NovikovSeries<F>],
    idempotents: &[Element<F>],
    z: &Rat,
) -> bool {
    let mut sum = alg.zero_element();
    for (l, el) in idempotents.iter().enumerate() {
        for (m, em) in idempotents.iter().enumerate().skip(l) {
            let prod = alg.mul(el, em);
            let target = if l == m { el.clone() } else { alg.zero_element() };
            if !elem_certified(&elem_sub(&prod, &target), z) {
                return false;
            }
        }
        let ae = alg.mul(a, el);
        if !elem_certified(&elem_sub(&ae, &elem_scale(el, &eigenvalues[l])), z) {
            return false;
        }
        sum = sum.iter().zip(el).map(|(x, y)| x + y).collect();
    }
    elem_certified(&elem_sub(&sum, alg.unit()), z)
}

/// `e_l = prod_{k != l} (a - lambda_k) / prod_{k != l} (lambda_l - lambda_k)`.
pub(crate) fn lagrange_idempotents<F: Field>(
    alg: &AlgebraOverNovikov<F>,
    a: &[NovikovSeries<F>],
    eigenvalues: &[NovikovSeries<F>],
    w: &Rat,
) -> Result<Vec<Element<F>>, SemisimpleError> {
    let unit = alg.unit();
    let mut out = Vec::with_capacity(eigenvalues.len());
    for (l, ll) in eigenvalues.iter().enumerate() {
        let mut num = unit.clone();
        let mut den = NovikovSeries::one(alg.field());
        for (k, lk) in eigenvalues.iter().enumerate() {
            if k == l {
                continue;
            }
            let factor = elem_sub(a, &elem_scale(unit, lk));
            num = alg.mul(&num, &factor);
            den = &den * &(ll - lk);
        }
        if den.has_no_terms() {
            return Err(SemisimpleError::PrecisionInsufficient);
        }
        let dv = den.leading().unwrap().0.clone();
        let inv = den.invert(&(w + &dv.abs()))?;
        out.push(elem_scale(&num, &inv));
    }
    Ok(out)
}

fn map_puiseux(e: PuiseuxError) -> SemisimpleError {
    match e {
        PuiseuxError::ZeroRoot => SemisimpleError::ZeroEigenvalue,
        PuiseuxError::Constant => SemisimpleError::Shape("algebra of dimension zero".into()),
        PuiseuxError::RepeatedRoot { .. } => SemisimpleError::RepeatedEigenvalue,
        PuiseuxError::FieldBudgetExceeded { budget } => SemisimpleError::FieldBudgetExceeded { budget },
        PuiseuxError::PrecisionInsufficient => SemisimpleError::PrecisionInsufficient,
        PuiseuxError::NewtonStalled => SemisimpleError::IterationDiverged { p: None },
        PuiseuxError::Novikov(e) => SemisimpleError::Novikov(e),
        PuiseuxError::Coeff(e) => SemisimpleError::Coeff(e),
    }
}

/// Largest valuation of an eigenvalue difference; used to size margins.
pub(crate) fn max_gap_valuation<F: Field>(eigenvalues: &[NovikovSeries<F>]) -> Rat {
    let mut g = Rat::zero();
    for (i, a) in eigenvalues.iter().enumerate() {
        for b in &eigenvalues[..i] {
            if let Some((v, _)) = (a - b).leading() {
                g = Rat::max(&g, v);
            }
        }
    }
    g
}

/// Splits a commutative algebra into idempotent summands using an element
/// whose multiplication operator has distinct nonzero eigenvalues.
/// Eigenvalues are found in the first catalog extension of degree at most
/// `budget` that splits the characteristic polynomial.
pub fn certify_semisimple<F: SplittingCatalog>(
    alg: &AlgebraOverNovikov<F>,
    a: &[NovikovSeries<F>],
    z: &Rat,
    budget: usize,
) -> Result<IdempotentSplit<F>, SemisimpleError> {
    if !alg.is_commutative() {
        return Err(SemisimpleError::NotCommutative);
    }
    if a.len() != alg.dim() {
        return Err(SemisimpleError::Shape("element has the wrong length".into()));
    }
    let k = alg.field();
    let f = charpoly(k, &alg.mult_operator(a));
    if f[0].is_exact_zero() {
        return Err(SemisimpleError::ZeroEigenvalue);
    }
    let disc = discriminant(k, &f);
    if disc.has_no_terms() {
        return Err(if disc.is_exact() {
            SemisimpleError::RepeatedEigenvalue
        } else {
            SemisimpleError::DiscriminantZeroToPrecision
        });
    }
    let mut margin = &(&disc.leading().unwrap().0.abs() * &Rat::new(1, 2)) + &Rat::one();
    for _ in 0..=MAX_MARGIN_DOUBLINGS {
        let w = z + &margin;
        let roots = polynomial_roots(&f, &w, budget).map_err(map_puiseux)?;
        let ext = roots.field;
        let alg_e = alg.map_coeffs(&ext, |s| Ok(s.map_coeffs(&ext, |c| Ok(k.embed_into(&ext, c)))?))?;
        let a_e: Element<F> =
            a.iter().map(|s| s.map_coeffs(&ext, |c| Ok(k.embed_into(&ext, c)))).collect::<Result<_, _>>()?;
        let idem = lagrange_idempotents(&alg_e, &a_e, &roots.roots, &w)?;
        if verify_split(&alg_e, &a_e, &roots.roots, &idem, z) {
            let valuations =
                idem.iter().map(|e| alg_e.valuation(e).ok_or(SemisimpleError::PrecisionInsufficient)).collect::<Result<_, _>>()?;
            return Ok(IdempotentSplit {
                field: ext,
                eigenvalues: roots.roots,
                idempotents: idem,
                valuations,
                precision: z.clone(),
                working_precision: w,
            });
        }
        margin = &margin + &margin;
    }
    Err(SemisimpleError::PrecisionInsufficient)
}

/// Resultant of two polynomials (lowest degree first) by the Sylvester
/// determinant.
pub fn resultant<F: Field>(k: &F, f: &[NovikovSeries<F>], g: &[NovikovSeries<F>]) -> NovikovSeries<F> {
    let (m, n) = (f.len() - 1, g.len() - 1);
    let size = m + n;
    if size == 0 {
        return NovikovSeries::one(k);
    }
    let mut s = vec![vec![NovikovSeries::zero(k); size]; size];
    for r in 0..n {
        for (i, c) in f.iter().rev().enumerate() {
            s[r][r + i] = c.clone();
        }
    }
    for r in 0..m {
        for (i, c) in g.iter().rev().enumerate() {
            s[n + r][r + i] = c.clone();
        }
    }
    det(k, &s)
}

/// Discriminant of a monic polynomial: `(-1)^{m(m-1)/2} Res(f, f')`.
pub fn discriminant<F: Field>(k: &F, f: &[NovikovSeries<F>]) -> NovikovSeries<F> {
    let m = f.len() - 1;
    if m <= 1 {
        return NovikovSeries::one(k);
    }
    let r = resultant(k, f, &derivative(k, f));
    if (m * (m - 1) / 2) % 2 == 1 {
        -&r
    } else {
        r
    }
}

/// Valuation and leading coefficient of the discriminant of the
/// characteristic polynomial of `a`.
#[derive(Clone, Debug)]
pub struct DiscriminantReport<F: Field> {
    pub discriminant: NovikovSeries<F>,
    pub valuation: Rat,
    pub leading: F::Elem,
}

pub fn discriminant_valuation<F: Field>(
    alg: &AlgebraOverNovikov<F>,
    a: &[NovikovSeries<F>],
) -> Result<DiscriminantReport<F>, SemisimpleError> {
    let k = alg.field();
    let f = charpoly(k, &alg.mult_operator(a));
    let d = discriminant(k, &f);
    let (v, c) = d.leading().cloned().ok_or(SemisimpleError::DiscriminantZeroToPrecision)?;
    Ok(DiscriminantReport { discriminant: d, valuation: v, leading: c })
}

/// Trial division bound for exclusion primes; a larger cofactor is listed
/// as is.
const TRIAL_DIVISION_BOUND: u64 = 1 << 20;

fn push_prime_factors(mut n: num_bigint::BigInt, out: &mut Vec<num_bigint::BigInt>) {
    use num_traits::{One, Signed, Zero};
    n = n.abs();
    if n.is_zero() {
        return;
    }
    let mut d = 2u64;
    while d <= TRIAL_DIVISION_BOUND && &num_bigint::BigInt::from(d * d) <= &n {
        let bd = num_bigint::BigInt::from(d);
        while (&n % &bd).is_zero() {
            out.push(bd.clone());
            n /= &bd;
        }
        d += 1;
    }
    if n > num_bigint::BigInt::one() {
        out.push(n);
    }
}

/// Primes at which reduction of the algebra, the element or the
/// discriminant's leading coefficient can fail: prime factors of all
/// coefficient denominators, of the norm of the discriminant's leading
/// coefficient, and of the conductor.
pub fn exclusion_primes(
    alg: &AlgebraOverNovikov<NumberField>,
    a: &[NovikovSeries<NumberField>],
) -> Result<Vec<num_bigint::BigInt>, SemisimpleError> {
    let k = alg.field();
    let report = discriminant_valuation(alg, a)?;
    let mut out = Vec::new();
    let norm = k.norm(&report.leading);
    push_prime_factors(norm.numer().clone(), &mut out);
    push_prime_factors(norm.denom().clone(), &mut out);
    push_prime_factors(num_bigint::BigInt::from(k.conductor()), &mut out);
    let mut coeffs: Vec<&NovikovSeries<NumberField>> = a.iter().chain(alg.unit().iter()).collect();
    for row in alg.structure_constants() {
        for e in row {
            coeffs.extend(e.iter());
        }
    }
    for s in coeffs {
        for (_, c) in s.terms() {
            for q in c {
                push_prime_factors(q.denom().clone(), &mut out);
            }
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::QField;

    fn nf_series(k: &NumberField, s: &str) -> NovikovSeries<NumberField> {
        NovikovSeries::parse(&QField, s).unwrap().map_coeffs(k, |c| Ok(k.from_rational(c))).unwrap()
    }

    #[test]
    fn diagonal_two_splits_into_coordinates() {
        let q = NumberField::rationals();
        let alg = AlgebraOverNovikov::diagonal(&q, 2);
        let a = vec![nf_series(&q, "1"), nf_series(&q, "2")];
        let s = certify_semisimple(&alg, &a, &Rat::from_int(4), 8).unwrap();
        assert_eq!(s.idempotents, vec![alg.basis_vector(0), alg.basis_vector(1)]);
        assert!(s.valuations.iter().all(|v| v.is_zero()));
    }

    #[test]
    fn square_root_of_t_split() {
        // x * x = T: e = (1 +- T^{-1/2} x) / 2 with l(e) = 1/2
        let q = NumberField::rationals();
        let mut alg = AlgebraOverNovikov::quantum_cpn(&q, 1);
        alg = alg.map_coeffs(&q, |s| Ok(s.clone())).unwrap();
        let a = vec![nf_series(&q, "0"), nf_series(&q, "1")];
        let s = certify_semisimple(&alg, &a, &Rat::from_int(4), 8).unwrap();
        assert_eq!(s.valuations, vec![Rat::new(1, 2), Rat::new(1, 2)]);
        for e in &s.idempotents {
            assert_eq!(e[0], nf_series(&q, "1/2"));
            assert_eq!(e[1].leading().unwrap().0, Rat::new(-1, 2));
        }
    }

    #[test]
    fn cp2_needs_zeta3_and_has_valuation_two_thirds() {
        let q = NumberField::rationals();
        let alg = AlgebraOverNovikov::quantum_cpn(&q, 2);
        let a = AlgebraOverNovikov::quantum_cpn_c1(&q, 2);
        let s = certify_semisimple(&alg, &a, &Rat::from_int(8), 8).unwrap();
        assert_eq!(s.field.conductor(), 3);
        assert!(s.valuations.iter().all(|v| *v == Rat::new(2, 3)));
    }

    #[test]
    fn repeated_and_zero_eigenvalues_are_rejected() {
        let q = NumberField::rationals();
        let alg = AlgebraOverNovikov::diagonal(&q, 2);
        let rep = vec![nf_series(&q, "3"), nf_series(&q, "3")];
        assert!(matches!(certify_semisimple(&alg, &rep, &Rat::one(), 8), Err(SemisimpleError::RepeatedEigenvalue)));
        let zero = vec![nf_series(&q, "0"), nf_series(&q, "3")];
        assert!(matches!(certify_semisimple(&alg, &zero, &Rat::one(), 8), Err(SemisimpleError::ZeroEigenvalue)));
        assert!(matches!(discriminant_valuation(&alg, &rep), Err(SemisimpleError::DiscriminantZeroToPrecision)));
    }

    #[test]
    fn discriminant_examples() {
        let q = NumberField::rationals();
        let alg = AlgebraOverNovikov::diagonal(&q, 2);
        let a = vec![nf_series(&q, "1"), nf_series(&q, "2")];
        let d = discriminant_valuation(&alg, &a).unwrap();
        assert_eq!(d.valuation, Rat::zero());
        assert_eq!(d.discriminant, nf_series(&q, "1"));
        let cp1 = AlgebraOverNovikov::quantum_cpn(&q, 1);
        let c1 = AlgebraOverNovikov::quantum_cpn_c1(&q, 1);
        let d = discriminant_valuation(&cp1, &c1).unwrap();
        assert_eq!(d.discriminant, nf_series(&q, "16T"));
        assert_eq!(d.valuation, Rat::one());
        let primes = exclusion_primes(&cp1, &c1).unwrap();
        assert_eq!(primes, vec![num_bigint::BigInt::from(2)]);
    }
}
