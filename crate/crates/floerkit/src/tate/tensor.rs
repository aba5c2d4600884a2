//! The `p`-fold tensor power of a `Z/2`-graded complex with the Koszul
//! differential and the signed cyclic rotation `zeta`.

use crate::coeff::Field;
use crate::novikov::linalg::{identity, mat_mul, zeros};
use crate::novikov::{Matrix, NovikovSeries};

/// Basis words `w = (w_0, ..., w_{p-1})` indexed in base `n`, `w_0` most
/// significant.
#[derive(Clone, Debug)]
pub struct TensorPower<F: Field> {
    pub p: usize,
    pub base_degrees: Vec<u8>,
    pub words: Vec<Vec<usize>>,
    /// Total degree mod 2 of each word.
    pub degrees: Vec<u8>,
    pub differential: Matrix<F>,
    pub zeta: Matrix<F>,
}

fn word_index(w: &[usize], n: usize) -> usize {
    w.iter().fold(0, |acc, &x| acc * n + x)
}

fn sign<F: Field>(k: &F, odd: bool) -> F::Elem {
    if odd {
        k.neg(&k.one())
    } else {
        k.one()
    }
}

/// Builds `C^{(x) p}` from a differential `d` (`d[q][x]` is the coefficient
/// of `q` in `d x`) and generator degrees mod 2.
pub fn tensor_power_with_zeta<F: Field>(k: &F, d: &Matrix<F>, degrees: &[u8], p: usize) -> TensorPower<F> {
    let n = degrees.len();
    let size = n.pow(p as u32);
    let words: Vec<Vec<usize>> = (0..size)
        .map(|mut idx| {
            let mut w = vec![0; p];
            for slot in w.iter_mut().rev() {
                *slot = idx % n;
                idx /= n;
            }
            w
        })
        .collect();
    let wdeg: Vec<u8> = words.iter().map(|w| w.iter().map(|&x| degrees[x]).sum::<u8>() % 2).collect();
    let mut dt = zeros(k, size, size);
    let mut zeta = zeros(k, size, size);
    for (col, w) in words.iter().enumerate() {
        let mut prefix = 0u8;
        for i in 0..p {
            let s = sign(k, prefix % 2 == 1);
            for (q, row) in d.iter().enumerate() {
                let c = &row[w[i]];
                if c.is_exact_zero() {
                    continue;
                }
                let mut w2 = w.clone();
                w2[i] = q;
                let r = word_index(&w2, n);
                dt[r][col] = &dt[r][col] + &c.scale(&s);
            }
            prefix += degrees[w[i]];
        }
        let last = degrees[w[p - 1]];
        let rest: u8 = w[..p - 1].iter().map(|&x| degrees[x]).sum();
        let mut rot = vec![w[p - 1]];
        rot.extend_from_slice(&w[..p - 1]);
        zeta[word_index(&rot, n)][col] = NovikovSeries::constant(k, sign(k, (last * rest) % 2 == 1));
    }
    TensorPower { p, base_degrees: degrees.to_vec(), words, degrees: wdeg, differential: dt, zeta }
}

impl<F: Field> TensorPower<F> {
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn field(&self) -> F {
        self.zeta[0][0].field().clone()
    }

    /// `zeta^p = id`.
    pub fn zeta_order_divides_p(&self) -> bool {
        let k = self.field();
        let mut acc = identity(&k, self.len());
        for _ in 0..self.p {
            acc = mat_mul(&k, &acc, &self.zeta);
        }
        acc == identity(&k, self.len())
    }

    /// `d zeta = zeta d`.
    pub fn zeta_commutes_with_d(&self) -> bool {
        let k = self.field();
        mat_mul(&k, &self.differential, &self.zeta) == mat_mul(&k, &self.zeta, &self.differential)
    }

    /// `id + zeta + ... + zeta^{p-1}`.
    pub fn norm(&self) -> Matrix<F> {
        let k = self.field();
        let mut acc = identity(&k, self.len());
        let mut pw = identity(&k, self.len());
        for _ in 1..self.p {
            pw = mat_mul(&k, &pw, &self.zeta);
            acc = crate::novikov::linalg::mat_add(&acc, &pw);
        }
        acc
    }

    /// Coefficient of `zeta` applied to a basis word, with the rotated word.
    pub fn zeta_on_word(&self, col: usize) -> (usize, NovikovSeries<F>) {
        let (row, c) = self.zeta.iter().enumerate().find(|(_, r)| !r[col].is_exact_zero()).expect("permutation");
        (row, c[col].clone())
    }
}
