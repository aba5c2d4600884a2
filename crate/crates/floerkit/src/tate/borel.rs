//! The cellular Morse model of `S^infinity` with its free `Z/p` action.
//!
//! Generators `Z_k^m` for `0 <= k <= 2 l_max + 1` and `m` in `Z/p`; the
//! cochain differential is `Z_{2l}^m -> Z_{2l+1}^m - Z_{2l+1}^{m+1}` and
//! `Z_{2l+1}^m -> sum_j Z_{2l+2}^j`.  Cohomology of the orbit space is the
//! cohomology of the coinvariant complex with one generator `Z_k` per
//! degree.

use serde_json::{json, Value};

use crate::coeff::Field;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BorelMorseComplex {
    p: u64,
    l_max: usize,
}

/// Rank of a dense matrix over a field by Gaussian elimination.
pub fn field_rank<F: Field>(k: &F, mut m: Vec<Vec<F::Elem>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| !k.is_zero(&m[r][c])) else { continue };
        m.swap(piv, rank);
        let inv = k.inv(&m[rank][c]).expect("nonzero pivot");
        for r in 0..rows {
            if r != rank && !k.is_zero(&m[r][c]) {
                let f = k.mul(&m[r][c], &inv);
                for j in c..cols {
                    let t = k.mul(&f, &m[rank][j]);
                    m[r][j] = k.sub(&m[r][j], &t);
                }
            }
        }
        rank += 1;
    }
    rank
}

impl BorelMorseComplex {
    /// Requires an odd prime `p` and `l_max >= 1`.
    pub fn new(p: u64, l_max: usize) -> Option<Self> {
        (p % 2 == 1 && crate::coeff::is_prime(p) && l_max >= 1).then_some(BorelMorseComplex { p, l_max })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn l_max(&self) -> usize {
        self.l_max
    }

    /// Number of cell degrees, `2 l_max + 2`.
    pub fn degrees(&self) -> usize {
        2 * self.l_max + 2
    }

    pub fn index(&self, k: usize, m: u64) -> usize {
        k * self.p as usize + (m % self.p) as usize
    }

    pub fn len(&self) -> usize {
        self.degrees() * self.p as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Integer entries `(from, to, coefficient)` of the differential.
    pub fn entries(&self) -> Vec<(usize, usize, i64)> {
        let mut out = Vec::new();
        for k in 0..self.degrees() - 1 {
            for m in 0..self.p {
                let from = self.index(k, m);
                if k % 2 == 0 {
                    out.push((from, self.index(k + 1, m), 1));
                    out.push((from, self.index(k + 1, m + 1), -1));
                } else {
                    for j in 0..self.p {
                        out.push((from, self.index(k + 1, j), 1));
                    }
                }
            }
        }
        out
    }

    /// The differential as an integer matrix, `d[to][from]`.
    pub fn integer_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.len();
        let mut d = vec![vec![0i64; n]; n];
        for (from, to, c) in self.entries() {
            d[to][from] += c;
        }
        d
    }

    /// `d^2 = 0` over the integers.
    pub fn d_squared_is_zero(&self) -> bool {
        let d = self.integer_matrix();
        let n = d.len();
        (0..n).all(|i| (0..n).all(|j| (0..n).map(|k| d[i][k] * d[k][j]).sum::<i64>() == 0))
    }

    /// The differential commutes with the generator `Z_k^m -> Z_k^{m+1}`.
    pub fn is_equivariant(&self) -> bool {
        let d = self.integer_matrix();
        let shift = |i: usize| {
            let p = self.p as usize;
            (i / p) * p + (i % p + 1) % p
        };
        let n = d.len();
        (0..n).all(|i| (0..n).all(|j| d[i][j] == d[shift(i)][shift(j)]))
    }

    /// Integer differential of the coinvariant complex, `c[k]` being the
    /// coefficient of `Z_{k+1}` in `d Z_k`.
    pub fn coinvariant_coefficients(&self) -> Vec<i64> {
        let p = self.p as usize;
        let mut c = vec![0i64; self.degrees() - 1];
        for (from, _, x) in self.entries() {
            if from % p == 0 {
                c[from / p] += x;
            }
        }
        c
    }

    /// Ranks of the orbit-space cohomology in degrees `0..=2 l_max` over `k`.
    pub fn homology_ranks<F: Field>(&self, k: &F) -> Vec<usize> {
        let c = self.coinvariant_coefficients();
        let rank_d = |i: usize| usize::from(!k.is_zero(&k.from_int(c[i])));
        (0..=2 * self.l_max)
            .map(|deg| {
                let out = rank_d(deg);
                let inc = if deg == 0 { 0 } else { rank_d(deg - 1) };
                1 - out - inc
            })
            .collect()
    }

    /// Ranks of the cohomology of the total space (no quotient) over `k`,
    /// in degrees `0..=2 l_max`.
    pub fn total_space_ranks<F: Field>(&self, k: &F) -> Vec<usize> {
        let p = self.p as usize;
        let d = self.integer_matrix();
        let block = |deg: usize| -> usize {
            let m: Vec<Vec<F::Elem>> =
                (0..p).map(|r| (0..p).map(|c| k.from_int(d[(deg + 1) * p + r][deg * p + c])).collect()).collect();
            field_rank(k, m)
        };
        (0..=2 * self.l_max)
            .map(|deg| {
                let out = block(deg);
                let inc = if deg == 0 { 0 } else { block(deg - 1) };
                p - out - inc
            })
            .collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "p": self.p,
            "l_max": self.l_max,
            "generators": self.len(),
            "d_squared_zero": self.d_squared_is_zero(),
            "equivariant": self.is_equivariant(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{FiniteField, QField};

    #[test]
    fn ranks_mod_p_are_one_in_every_degree() {
        let b = BorelMorseComplex::new(3, 2).unwrap();
        assert!(b.d_squared_is_zero());
        assert!(b.is_equivariant());
        assert_eq!(b.homology_ranks(&FiniteField::prime(3).unwrap()), vec![1; 5]);
    }

    #[test]
    fn rational_ranks_concentrate_in_degree_zero() {
        let b = BorelMorseComplex::new(5, 2).unwrap();
        assert_eq!(b.homology_ranks(&QField), vec![1, 0, 0, 0, 0]);
    }

    #[test]
    fn total_space_is_acyclic_above_degree_zero() {
        let b = BorelMorseComplex::new(3, 2).unwrap();
        assert_eq!(b.total_space_ranks(&FiniteField::prime(3).unwrap()), vec![1, 0, 0, 0, 0]);
    }

    #[test]
    fn rejects_even_primes() {
        assert!(BorelMorseComplex::new(2, 2).is_none());
        assert!(BorelMorseComplex::new(3, 0).is_none());
    }
}
