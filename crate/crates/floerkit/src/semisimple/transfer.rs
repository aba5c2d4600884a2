//! Transfer of an idempotent splitting from characteristic zero to
//! characteristic `p`: truncate the eigenvalues at `Z`, reduce, refine by
//! Newton iteration on the reduced characteristic polynomial, rebuild the
//! idempotents and compare valuations.

use serde_json::{json, Value};

use crate::coeff::{is_prime, Field, FiniteField, NfReduction, NumberField, Rat, SplittingCatalog};
use crate::novikov::linalg::charpoly;
use crate::novikov::{derivative, newton_root, NovikovSeries};

use super::algebra::{AlgebraOverNovikov, Element};
use super::split::{
    certify_semisimple, discriminant_valuation, lagrange_idempotents, max_gap_valuation, verify_split,
    IdempotentSplit, MAX_MARGIN_DOUBLINGS,
};
use super::SemisimpleError;

/// Outcome of [`mod_p_transfer`].
#[derive(Clone, Debug)]
pub struct TransferReport {
    pub p: u64,
    /// The characteristic-zero splitting the transfer started from.
    pub source: IdempotentSplit<NumberField>,
    /// The splitting over `F_{p^k}`.
    pub split: IdempotentSplit<FiniteField>,
    /// `l_0(e_l)` in the order of `split.idempotents`.
    pub source_valuations: Vec<Rat>,
    /// Smallest `C >= 0` with `v(e_{l,p} - reduce(e_l^Z)) >= Z - C` for all `l`.
    pub defect: Rat,
    /// `l_p(e_{l,p}) = l_0(e_l)` for every `l`.
    pub valuations_match: bool,
}

impl TransferReport {
    pub fn to_json(&self) -> Value {
        json!({
            "p": self.p,
            "field": self.split.field.describe(),
            "precision": self.split.precision.to_string(),
            "eigenvalues": self.split.eigenvalues.iter().map(|l| l.format()).collect::<Vec<_>>(),
            "valuations_p": self.split.valuations.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            "valuations_0": self.source_valuations.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            "defect": self.defect.to_string(),
            "valuations_match": self.valuations_match,
        })
    }
}

fn too_small(p: u64, reason: &str) -> SemisimpleError {
    SemisimpleError::PrimeTooSmall { p, reason: reason.to_string() }
}

fn obstructed(red: &NfReduction, s: &NovikovSeries<NumberField>) -> bool {
    s.terms().iter().any(|(_, c)| red.obstructs(c))
}

fn reduce_series(
    red: &NfReduction,
    s: &NovikovSeries<NumberField>,
) -> Result<NovikovSeries<FiniteField>, SemisimpleError> {
    s.reduce_mod_p(red).map_err(|_| too_small(red.p, "a coefficient has a denominator divisible by p"))
}

fn reduce_element(red: &NfReduction, x: &[NovikovSeries<NumberField>]) -> Result<Element<FiniteField>, SemisimpleError> {
    x.iter().map(|s| reduce_series(red, s)).collect()
}

/// Reduces an algebra over a number field along `red`.
pub fn reduce_algebra(
    alg: &AlgebraOverNovikov<NumberField>,
    red: &NfReduction,
) -> Result<AlgebraOverNovikov<FiniteField>, SemisimpleError> {
    let reduced = alg.map_coeffs(&red.target, |s| reduce_series(red, s))?;
    // revalidate: reduction is a ring map, so failures indicate a bug upstream
    AlgebraOverNovikov::new(
        red.target.clone(),
        reduced.labels().to_vec(),
        reduced.structure_constants().to_vec(),
        reduced.unit().clone(),
    )
}

/// Extends an algebra and an element to a larger number field.
pub fn extend_algebra(
    alg: &AlgebraOverNovikov<NumberField>,
    a: &[NovikovSeries<NumberField>],
    ext: &NumberField,
) -> Result<(AlgebraOverNovikov<NumberField>, Element<NumberField>), SemisimpleError> {
    let k = alg.field().clone();
    let embed = |s: &NovikovSeries<NumberField>| -> Result<NovikovSeries<NumberField>, SemisimpleError> {
        Ok(s.map_coeffs(ext, |c| Ok(k.embed_into(ext, c)))?)
    };
    let alg_e = alg.map_coeffs(ext, embed)?;
    let a_e = a.iter().map(embed).collect::<Result<_, _>>()?;
    Ok((alg_e, a_e))
}

/// Transfers the splitting of `alg` by `a` to characteristic `p`.
///
/// The characteristic-zero splitting is certified first.  The prime is
/// rejected when it ramifies in the eigenvalue field, divides a denominator
/// of the algebra, the element, the `Z`-truncated eigenvalues or
/// idempotents, or kills the leading coefficient of the discriminant.
/// The working precision starts at `Z + 4 (g + 1)`, `g` the largest
/// valuation of an eigenvalue difference, and the margin doubles until
/// the identities certify to precision `Z`.
pub fn mod_p_transfer(
    alg: &AlgebraOverNovikov<NumberField>,
    a: &[NovikovSeries<NumberField>],
    p: u64,
    z: &Rat,
    budget: usize,
) -> Result<TransferReport, SemisimpleError> {
    if !is_prime(p) {
        return Err(too_small(p, "not a prime"));
    }
    let source = certify_semisimple(alg, a, z, budget)?;
    let ext = source.field.clone();
    let red = ext.reduction(p).map_err(|e| too_small(p, &e.to_string()))?;
    let (alg_l, a_l) = extend_algebra(alg, a, &ext)?;
    let coeffs_obstructed = a_l.iter().chain(alg_l.unit().iter()).any(|s| obstructed(&red, s))
        || alg_l.structure_constants().iter().flatten().flatten().any(|s| obstructed(&red, s));
    if coeffs_obstructed {
        return Err(too_small(p, "p divides a denominator of the algebra or the element"));
    }
    let disc = discriminant_valuation(&alg_l, &a_l)?;
    let disc_p = red.reduce(&disc.leading).map_err(|_| too_small(p, "p divides the discriminant denominator"))?;
    if red.target.is_zero(&disc_p) {
        return Err(too_small(p, "p divides the leading coefficient of the discriminant"));
    }
    let lam_z: Vec<NovikovSeries<NumberField>> = source.eigenvalues.iter().map(|l| l.truncate(z)).collect();
    let eps_z: Vec<Element<NumberField>> =
        source.idempotents.iter().map(|e| e.iter().map(|c| c.truncate(z)).collect()).collect();
    if lam_z.iter().any(|s| obstructed(&red, s)) || eps_z.iter().flatten().any(|s| obstructed(&red, s)) {
        return Err(too_small(p, "p divides a denominator of the truncated splitting"));
    }
    let kp = red.target.clone();
    let alg_p = reduce_algebra(&alg_l, &red)?;
    let a_p = reduce_element(&red, &a_l)?;
    let f_p = charpoly(&kp, &alg_p.mult_operator(&a_p));
    let df_p = derivative(&kp, &f_p);
    let start: Vec<NovikovSeries<FiniteField>> = lam_z.iter().map(|s| reduce_series(&red, s)).collect::<Result<_, _>>()?;
    let eps_p: Vec<Element<FiniteField>> = eps_z.iter().map(|e| reduce_element(&red, e)).collect::<Result<_, _>>()?;

    let mut margin = &Rat::from_int(4) * &(&max_gap_valuation(&source.eigenvalues) + &Rat::one());
    for _ in 0..=MAX_MARGIN_DOUBLINGS {
        let w = z + &margin;
        let lam_p = start
            .iter()
            .map(|s| newton_root(&kp, &f_p, &df_p, s.clone(), &w))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| SemisimpleError::IterationDiverged { p: Some(p) })?;
        let idem = lagrange_idempotents(&alg_p, &a_p, &lam_p, &w)?;
        if verify_split(&alg_p, &a_p, &lam_p, &idem, z) {
            let valuations: Vec<Rat> = idem
                .iter()
                .map(|e| alg_p.valuation(e).ok_or(SemisimpleError::PrecisionInsufficient))
                .collect::<Result<_, _>>()?;
            let mut defect = Rat::zero();
            for (e, eps) in idem.iter().zip(&eps_p) {
                for (x, y) in e.iter().zip(eps) {
                    let d = x - y;
                    let gap = match d.leading() {
                        Some((v, _)) => v.clone(),
                        None => d.val_lower_bound().unwrap_or_else(|| z.clone()),
                    };
                    defect = Rat::max(&defect, &(z - &gap));
                }
            }
            let valuations_match = valuations == source.valuations;
            return Ok(TransferReport {
                p,
                source_valuations: source.valuations.clone(),
                source,
                split: IdempotentSplit {
                    field: kp,
                    eigenvalues: lam_p,
                    idempotents: idem,
                    valuations,
                    precision: z.clone(),
                    working_precision: w,
                },
                defect,
                valuations_match,
            });
        }
        margin = &margin + &margin;
    }
    Err(SemisimpleError::IterationDiverged { p: Some(p) })
}

/// Splits the reduction of `alg` directly in characteristic `p`, for
/// comparison with [`mod_p_transfer`].
pub fn direct_char_p_split(
    alg: &AlgebraOverNovikov<NumberField>,
    a: &[NovikovSeries<NumberField>],
    p: u64,
    z: &Rat,
    budget: usize,
) -> Result<IdempotentSplit<FiniteField>, SemisimpleError> {
    let red = alg.field().reduction(p).map_err(|e| too_small(p, &e.to_string()))?;
    let alg_p = reduce_algebra(alg, &red)?;
    let a_p = reduce_element(&red, a)?;
    certify_semisimple(&alg_p, &a_p, z, budget)
}
