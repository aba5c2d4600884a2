//! Seeded search for a convenient bulk deformation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coeff::{GaussianRat, Rat};
use crate::polytope::Polytope;

use super::critical::{certify_convenient, ConvenientCertificate};
use super::ghv::{build_ghv, BulkDeformation};
use super::PotentialError;

/// Parameters of [`search_convenient_bulk`].
#[derive(Clone, Debug)]
pub struct SearchOptions {
    /// Bound on `|Re c_j|` and `|Im c_j|`.
    pub norm_bound: i64,
    /// Number of candidates examined, the trivial bulk included.
    pub trials: usize,
    pub seed: u64,
    pub precision: Rat,
    pub field_budget: usize,
}

/// A bulk that passed every certificate, with the data that proves it.
#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub bulk: BulkDeformation,
    /// 1-based index of the accepted candidate.
    pub trial: usize,
    pub certificate: ConvenientCertificate,
}

fn random_bulk(rng: &mut ChaCha8Rng, len: usize, bound: i64) -> BulkDeformation {
    let c = (0..len)
        .map(|_| loop {
            let re = rng.gen_range(-bound..=bound);
            let im = rng.gen_range(-bound..=bound);
            if re != 0 || im != 0 {
                break GaussianRat::from_ints(re, im);
            }
        })
        .collect();
    BulkDeformation::new(c).expect("nonzero Gaussian integers")
}

/// Examines the trivial bulk and then seeded random Gaussian bulks; the
/// first candidate that is Morse, has distinct critical values, has no
/// solver issues and saturates the Kouchnirenko bound is returned.
/// Candidates whose initial roots leave the field budget are skipped.
pub fn search_convenient_bulk(p: &Polytope, opts: &SearchOptions) -> Result<SearchOutcome, PotentialError> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let n = p.facet_count();
    for trial in 1..=opts.trials {
        let bulk = if trial == 1 { BulkDeformation::trivial(n) } else { random_bulk(&mut rng, n, opts.norm_bound) };
        let w = build_ghv(p, &bulk)?;
        let cert = match certify_convenient(&w, &opts.precision, opts.field_budget) {
            Ok(c) => c,
            Err(PotentialError::FieldBudgetExceeded { .. }) | Err(PotentialError::PrecisionInsufficient) => continue,
            Err(e) => return Err(e),
        };
        if cert.morse && cert.distinct_values && cert.critical_set.saturated() {
            return Ok(SearchOutcome { bulk, trial, certificate: cert });
        }
    }
    Err(PotentialError::SearchExhausted { trials: opts.trials })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::presets;
    use crate::potential::critical::{classify_inside, DEFAULT_FIELD_BUDGET};

    fn opts() -> SearchOptions {
        SearchOptions { norm_bound: 3, trials: 10, seed: 7, precision: Rat::from_int(4), field_budget: DEFAULT_FIELD_BUDGET }
    }

    #[test]
    fn presets_find_convenient_bulks() {
        for name in ["cp1", "cp2", "cp3", "f2", "f4", "cp1xcp1"] {
            let p = presets::by_name(name).unwrap();
            let out = search_convenient_bulk(&p, &opts()).unwrap();
            let mut pts = out.certificate.critical_set.points.clone();
            let cl = classify_inside(&mut pts, &p).unwrap();
            assert_eq!(cl.inside.len(), p.vertex_count(), "{name}");
            println!("{name}: trial {} bulk {} field Q(zeta_{})", out.trial, out.bulk, out.certificate.critical_set.field.conductor());
        }
    }

    #[test]
    fn search_is_deterministic() {
        let p = presets::cp1_x_cp1();
        let a = search_convenient_bulk(&p, &opts()).unwrap();
        let b = search_convenient_bulk(&p, &opts()).unwrap();
        assert_eq!(a.bulk, b.bulk);
        assert_eq!(a.trial, b.trial);
    }
}
