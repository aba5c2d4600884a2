//! Bulk-deformed potentials `W_b = sum_j c_j T^{-lambda_j} y^{v_j}`, fiber
//! potentials, disk weights and the Kodaira–Spencer evaluation.

use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};

use crate::coeff::{GaussianRat, NumberField, Rat};
use crate::novikov::linalg;
use crate::novikov::NovikovSeries;
use crate::polytope::Polytope;

use super::laurent::NovikovLaurentPoly;
use super::PotentialError;

/// Bulk coefficients `c_j`, one nonzero Gaussian integer per facet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BulkDeformation {
    c: Vec<GaussianRat>,
}

impl BulkDeformation {
    pub fn new(c: Vec<GaussianRat>) -> Result<Self, PotentialError> {
        for (index, x) in c.iter().enumerate() {
            if x.is_zero() {
                return Err(PotentialError::ZeroBulkCoefficient { index });
            }
            if !x.is_gaussian_integer() {
                return Err(PotentialError::NotGaussianInteger { index });
            }
        }
        Ok(BulkDeformation { c })
    }

    /// The undeformed potential: every `c_j = 1`.
    pub fn trivial(n: usize) -> Self {
        BulkDeformation { c: vec![GaussianRat::one(); n] }
    }

    pub fn coefficients(&self) -> &[GaussianRat] {
        &self.c
    }

    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c.is_empty()
    }

    /// `Q` when every coefficient is real, otherwise `Q(i)`.
    pub fn base_field(&self) -> NumberField {
        if self.c.iter().all(GaussianRat::is_real) {
            NumberField::rationals()
        } else {
            NumberField::gaussian()
        }
    }

    /// `c^I = prod c_j^{alpha_j}`.
    pub fn power(&self, alpha: &[u32]) -> GaussianRat {
        let mut acc = GaussianRat::one();
        for (c, &a) in self.c.iter().zip(alpha) {
            for _ in 0..a {
                acc = &acc * c;
            }
        }
        acc
    }

    pub fn to_json(&self) -> Value {
        json!(self.c.iter().map(|x| x.to_string()).collect::<Vec<_>>())
    }
}

impl fmt::Display for BulkDeformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.c.iter().map(|x| x.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for BulkDeformation {
    type Err = PotentialError;

    /// Comma-separated Gaussian integers such as `1,2-i,i`.
    fn from_str(s: &str) -> Result<Self, PotentialError> {
        let c = s
            .split(',')
            .map(|t| t.trim().parse::<GaussianRat>().map_err(|e| PotentialError::Parse(e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        BulkDeformation::new(c)
    }
}

fn check_bulk(p: &Polytope, b: &BulkDeformation) -> Result<(), PotentialError> {
    if b.len() != p.facet_count() {
        return Err(PotentialError::BulkLengthMismatch { expected: p.facet_count(), got: b.len() });
    }
    Ok(())
}

fn coeff_series(k: &NumberField, c: &GaussianRat, exp: Rat) -> NovikovSeries<NumberField> {
    NovikovSeries::monomial(k, k.embed_gaussian(c).expect("field contains the bulk coefficients"), exp)
}

/// `W_b = sum_j c_j T^{-lambda_j} y^{v_j}` over [`BulkDeformation::base_field`].
pub fn build_ghv(p: &Polytope, b: &BulkDeformation) -> Result<NovikovLaurentPoly<NumberField>, PotentialError> {
    check_bulk(p, b)?;
    if !p.delzant_check().smooth {
        return Err(PotentialError::NotDelzant);
    }
    let k = b.base_field();
    let mut w = NovikovLaurentPoly::new(&k, p.dim());
    for (f, c) in p.facets().iter().zip(b.coefficients()) {
        w.add_term(f.v.clone(), coeff_series(&k, c, -&f.lambda));
    }
    Ok(w)
}

/// `W_b(T^{u_1} y_1, ..., T^{u_n} y_n) = sum_j c_j T^{l_j(u)} y^{v_j}`.
pub fn build_fiber_potential(
    p: &Polytope,
    b: &BulkDeformation,
    u: &[Rat],
) -> Result<NovikovLaurentPoly<NumberField>, PotentialError> {
    check_bulk(p, b)?;
    if u.len() != p.dim() || !p.is_interior(u) {
        return Err(PotentialError::NotInterior);
    }
    let k = b.base_field();
    let mut w = NovikovLaurentPoly::new(&k, p.dim());
    for ((f, c), l) in p.facets().iter().zip(b.coefficients()).zip(p.support_values(u)) {
        w.add_term(f.v.clone(), coeff_series(&k, c, l));
    }
    Ok(w)
}

/// The weight `c^I T^{E(beta^I)} y^{d beta^I}` of the disk class with
/// multiplicities `alpha`, and its Maslov index `2 |I|`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiskWeight {
    pub exponent: Vec<i64>,
    pub coefficient: NovikovSeries<NumberField>,
    pub energy: Rat,
    pub maslov: u64,
}

impl DiskWeight {
    pub fn as_poly(&self) -> NovikovLaurentPoly<NumberField> {
        let mut w = NovikovLaurentPoly::new(self.coefficient.field(), self.exponent.len());
        w.add_term(self.exponent.clone(), self.coefficient.clone());
        w
    }
}

/// Disk weight at the fiber over `u`; energies are `sum alpha_j l_j(u)`.
pub fn disk_weight(
    p: &Polytope,
    b: &BulkDeformation,
    u: &[Rat],
    alpha: &[u32],
) -> Result<DiskWeight, PotentialError> {
    check_bulk(p, b)?;
    if alpha.len() != p.facet_count() {
        return Err(PotentialError::BulkLengthMismatch { expected: p.facet_count(), got: alpha.len() });
    }
    if u.len() != p.dim() || !p.is_interior(u) {
        return Err(PotentialError::NotInterior);
    }
    let l = p.support_values(u);
    let energy: Rat = alpha.iter().zip(&l).map(|(&a, x)| x * &Rat::from_int(a as i64)).sum();
    let mut exponent = vec![0i64; p.dim()];
    for (f, &a) in p.facets().iter().zip(alpha) {
        for (e, v) in exponent.iter_mut().zip(&f.v) {
            *e += a as i64 * v;
        }
    }
    let k = b.base_field();
    let coefficient = coeff_series(&k, &b.power(alpha), energy.clone());
    let maslov = 2 * alpha.iter().map(|&a| a as u64).sum::<u64>();
    Ok(DiskWeight { exponent, coefficient, energy, maslov })
}

/// `prod_j W_{b,j}^{alpha_j}` as a single monomial over `field`.
pub fn ks_monomial(
    p: &Polytope,
    b: &BulkDeformation,
    alpha: &[u32],
    field: &NumberField,
) -> Result<NovikovLaurentPoly<NumberField>, PotentialError> {
    check_bulk(p, b)?;
    let mut exponent = vec![0i64; p.dim()];
    let mut e = Rat::zero();
    for (f, &a) in p.facets().iter().zip(alpha) {
        for (x, v) in exponent.iter_mut().zip(&f.v) {
            *x += a as i64 * v;
        }
        e = &e - &(&f.lambda * &Rat::from_int(a as i64));
    }
    let mut w = NovikovLaurentPoly::new(field, p.dim());
    w.add_term(exponent, coeff_series(field, &b.power(alpha), e));
    Ok(w)
}

/// `ks_b(z^I)` at every point: the component at `eta` is
/// `prod_j W_{b,j}(eta)^{alpha_j}`, to absolute precision `z`.
pub fn ks_evaluate(
    p: &Polytope,
    b: &BulkDeformation,
    alpha: &[u32],
    points: &[Vec<NovikovSeries<NumberField>>],
    field: &NumberField,
    z: &Rat,
) -> Result<Vec<NovikovSeries<NumberField>>, PotentialError> {
    let mono = ks_monomial(p, b, alpha, field)?;
    points.iter().map(|eta| Ok(mono.evaluate(eta, z)?)).collect()
}

/// All multi-indices `I` in `N^len` with `|I| <= max_degree`, graded then
/// lexicographic.
pub fn multi_indices(len: usize, max_degree: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for d in 0..=max_degree {
        let mut cur = vec![0u32; len];
        fn rec(pos: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if pos + 1 == cur.len() {
                cur[pos] = left;
                out.push(cur.clone());
                return;
            }
            for a in (0..=left).rev() {
                cur[pos] = a;
                rec(pos + 1, left - a, cur, out);
            }
            cur[pos] = 0;
        }
        if len == 0 {
            if d == 0 {
                out.push(Vec::new());
            }
            continue;
        }
        rec(0, d, &mut cur, &mut out);
    }
    out
}

/// Rank over the Novikov field of the matrix `[ks(z^{I_a})(eta_b)]`.
pub fn ks_surjectivity_check(
    p: &Polytope,
    b: &BulkDeformation,
    monomials: &[Vec<u32>],
    points: &[Vec<NovikovSeries<NumberField>>],
    field: &NumberField,
    z: &Rat,
) -> Result<usize, PotentialError> {
    let mut m = Vec::with_capacity(monomials.len());
    for alpha in monomials {
        m.push(ks_evaluate(p, b, alpha, points, field, z)?);
    }
    Ok(linalg::rank(field, &m)?)
}
