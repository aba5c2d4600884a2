//! Seeded random strict complexes.
//!
//! A random normal form `d p = q` on disjoint pairs is conjugated by a
//! unitriangular change of basis that respects action order and degree,
//! so the result is strict, action-monotone and has known bars.

use rand::Rng;

use crate::coeff::{Field, Rat};
use crate::novikov::linalg::{self, Matrix};
use crate::novikov::NovikovSeries;

use super::{FilteredComplex, Generator, Mode};

/// Shape of the random complexes.
#[derive(Clone, Debug)]
pub struct RandomComplexSpec {
    pub max_generators: usize,
    /// Actions are `a / den` with `den <= max_denominator`.
    pub max_denominator: i64,
    /// Bound on `|a / den|`.
    pub action_bound: i64,
    /// Bound on the integer entries of the change of basis.
    pub entry_bound: i64,
}

impl Default for RandomComplexSpec {
    fn default() -> Self {
        RandomComplexSpec { max_generators: 8, max_denominator: 4, action_bound: 4, entry_bound: 2 }
    }
}

pub fn random_action<R: Rng>(rng: &mut R, spec: &RandomComplexSpec) -> Rat {
    let den = rng.gen_range(1..=spec.max_denominator);
    let num = rng.gen_range(-spec.action_bound * den..=spec.action_bound * den);
    Rat::new(num, den)
}

/// A strict action-monotone complex with constant (valuation-zero)
/// differential entries.
pub fn random_strict_complex<F: Field, R: Rng>(k: &F, rng: &mut R, spec: &RandomComplexSpec) -> FilteredComplex<F> {
    let n = rng.gen_range(1..=spec.max_generators);
    let mut gens: Vec<Generator> =
        (0..n).map(|i| Generator::new(format!("g{i}"), rng.gen_range(0..2), random_action(rng, spec))).collect();
    gens.sort_by(|a, b| a.action.cmp(&b.action));
    for (i, g) in gens.iter_mut().enumerate() {
        g.label = format!("g{i}");
    }
    // normal form: pair p with an unused q of lower action and degree deg(p) - 1
    let mut used = vec![false; n];
    let mut d0: Matrix<F> = linalg::zeros(k, n, n);
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        order.swap(i, rng.gen_range(0..=i));
    }
    for &p in &order {
        if used[p] || !rng.gen_bool(0.6) {
            continue;
        }
        let cands: Vec<usize> = (0..n)
            .filter(|&q| !used[q] && q != p && gens[q].action < gens[p].action && (gens[q].degree + 1) % 2 == gens[p].degree)
            .collect();
        if cands.is_empty() {
            continue;
        }
        let q = cands[rng.gen_range(0..cands.len())];
        used[p] = true;
        used[q] = true;
        d0[q][p] = NovikovSeries::constant(k, k.from_int(rng.gen_range(1..=spec.entry_bound.max(1))));
    }
    // A unitriangular in the sorted order, mixing only equal degrees
    let mut a = linalg::identity(k, n);
    for i in 0..n {
        for j in (i + 1)..n {
            if gens[i].degree == gens[j].degree && rng.gen_bool(0.5) {
                let x = rng.gen_range(-spec.entry_bound..=spec.entry_bound);
                if x != 0 {
                    a[i][j] = NovikovSeries::from_int(k, x);
                }
            }
        }
    }
    let a_inv = unitriangular_inverse(k, &a);
    let d = linalg::mat_mul(k, &linalg::mat_mul(k, &a, &d0), &a_inv);
    FilteredComplex::new(k, gens, d, Mode::Strict).expect("conjugated normal form is a strict complex")
}

/// Inverse of an upper unitriangular matrix with exact entries.
fn unitriangular_inverse<F: Field>(k: &F, a: &Matrix<F>) -> Matrix<F> {
    let n = a.len();
    let mut inv = linalg::identity(k, n);
    for j in 0..n {
        for i in (0..j).rev() {
            let mut acc = NovikovSeries::zero(k);
            for m in (i + 1)..=j {
                if !a[i][m].is_exact_zero() && !inv[m][j].is_exact_zero() {
                    acc = &acc + &(&a[i][m] * &inv[m][j]);
                }
            }
            inv[i][j] = -&acc;
        }
    }
    inv
}

/// Replaces each generator `p` by `T^{s_p} p`: actions drop by `s_p` and
/// `d_qp` picks up `T^{s_p - s_q}`.  The barcode is unchanged.
pub fn rescale_generators<F: Field>(c: &FilteredComplex<F>, shifts: &[Rat]) -> FilteredComplex<F> {
    let n = c.len();
    let gens = c
        .generators()
        .iter()
        .zip(shifts)
        .map(|(g, s)| Generator { action: &g.action - s, ..g.clone() })
        .collect();
    let d = (0..n)
        .map(|q| {
            (0..n)
                .map(|p| {
                    let x = &c.differential()[q][p];
                    if x.is_exact_zero() {
                        x.clone()
                    } else {
                        x.shift(&(&shifts[p] - &shifts[q]))
                    }
                })
                .collect()
        })
        .collect();
    FilteredComplex::new_unchecked(c.field(), gens, d, c.mode())
}
