//! Root finding in coefficient fields.
//!
//! Finite fields use equal-degree splitting.  Cyclotomic number fields use
//! a multi-modular method: pick a prime `l = 1 mod m` so that every
//! embedding of `Q(zeta_m)` into `Z_l` is visible modulo `l`, Hensel-lift
//! the roots of every embedded polynomial, and recombine one root per
//! embedding through the inverse Vandermonde matrix of the embedded
//! `zeta`.  Candidates are verified exactly, so no false root is returned.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::field::Field;
use super::finite_field::{bigint_mod, is_prime, FiniteField};
use super::number_field::NumberField;
use super::poly;
use super::rat::Rat;

/// Fields in which the roots of a univariate polynomial can be listed.
pub trait RootFinding: Field {
    /// Distinct roots lying in the field itself, in a canonical order.
    fn roots(&self, f: &[Self::Elem]) -> Vec<Self::Elem>;
}

impl RootFinding for FiniteField {
    fn roots(&self, f: &[Vec<u64>]) -> Vec<Vec<u64>> {
        FiniteField::roots(self, f)
    }
}

impl RootFinding for NumberField {
    fn roots(&self, f: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
        number_field_roots(self, f)
    }
}

/// Conductors of the cyclotomic fields tried, in order, when roots must be
/// adjoined.
pub const CATALOG_CONDUCTORS: [u64; 12] = [1, 4, 3, 8, 12, 5, 7, 9, 15, 16, 20, 24];

/// Catalog fields containing `base` whose degree is at most `budget`.
pub fn catalog_fields(base: &NumberField, budget: usize) -> Vec<NumberField> {
    CATALOG_CONDUCTORS
        .iter()
        .map(|&m| NumberField::cyclotomic(m))
        .filter(|k| k.degree() <= budget && k.contains_field(base))
        .collect()
}

/// Fields with a canonical list of finite extensions in which roots can be
/// adjoined.
pub trait SplittingCatalog: RootFinding {
    /// Extensions containing `self` of absolute degree at most `budget`,
    /// starting with `self` when it fits.
    fn extensions(&self, budget: usize) -> Vec<Self>;

    /// Image of `x` under the fixed embedding of `self` into `ext`.
    fn embed_into(&self, ext: &Self, x: &Self::Elem) -> Self::Elem;
}

impl SplittingCatalog for NumberField {
    fn extensions(&self, budget: usize) -> Vec<NumberField> {
        let mut out = Vec::new();
        if self.degree() <= budget {
            out.push(self.clone());
        }
        for k in catalog_fields(self, budget) {
            if !out.contains(&k) {
                out.push(k);
            }
        }
        out
    }

    fn embed_into(&self, ext: &NumberField, x: &Vec<Rat>) -> Vec<Rat> {
        ext.embed_from(self, x).expect("extension contains the field")
    }
}

impl SplittingCatalog for FiniteField {
    fn extensions(&self, budget: usize) -> Vec<FiniteField> {
        let d = self.degree();
        let mut out = Vec::new();
        let mut k = d;
        while k <= budget {
            if k == d {
                out.push(self.clone());
            } else if let Ok(e) = FiniteField::smallest_extension(self.p(), k) {
                out.push(e);
            }
            k += d;
        }
        out
    }

    fn embed_into(&self, ext: &FiniteField, x: &Vec<u64>) -> Vec<u64> {
        if ext == self {
            return x.clone();
        }
        if self.degree() == 1 {
            return ext.from_u64(x[0]);
        }
        // the generator goes to the smallest root of our modulus in `ext`
        let m: Vec<Vec<u64>> = self.modulus().iter().map(|&c| ext.from_u64(c)).collect();
        let r = ext.roots(&m).into_iter().next().expect("extension contains the field");
        let mut acc = ext.zero();
        let mut pw = ext.one();
        for &c in x {
            acc = ext.add(&acc, &ext.mul(&ext.from_u64(c), &pw));
            pw = ext.mul(&pw, &r);
        }
        acc
    }
}

/// Largest modulus exponent (in bits) tried when lifting.
const MAX_LIFT_BITS: u64 = 1024;

fn number_field_roots(k: &NumberField, f: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let f = poly::trimmed(k, f.to_vec());
    let n = match poly::degree(k, &f) {
        None | Some(0) => return Vec::new(),
        Some(n) => n,
    };
    let g = poly::squarefree_part(k, &f);
    let n_sf = poly::degree(k, &g).unwrap();
    if n_sf == 1 {
        return vec![k.neg(&g[0])];
    }
    let _ = n;
    let m = k.conductor();
    let d = k.degree();

    // Integer power-basis coefficients of D*g.
    let den = Rat::common_denominator(g.iter().flat_map(|c| c.iter()));
    let gi: Vec<Vec<BigInt>> = g
        .iter()
        .map(|c| {
            c.iter()
                .map(|r| (r * &Rat::from_bigint(den.clone())).numer().clone())
                .collect()
        })
        .collect();
    let phi: Vec<BigInt> = k.modulus().iter().map(|r| r.numer().clone()).collect();

    // Candidate primes l = 1 mod m.
    let mut l = if m == 1 { 3 } else { m + 1 };
    let mut tries = 0;
    loop {
        tries += 1;
        if tries > 400 {
            return Vec::new();
        }
        while !(is_prime(l) && (l - 1) % m == 0 && l > 2) {
            l += if m == 1 { 1 } else { m };
        }
        if let Some(res) = try_prime(k, &g, &gi, &phi, &den, l, d) {
            return res;
        }
        l += if m == 1 { 1 } else { m };
    }
}

/// Attempts the multi-modular method with prime `l`.  `None` means `l` is
/// unsuitable (bad reduction); `Some(list)` is the definitive answer.
fn try_prime(
    k: &NumberField,
    g: &[Vec<Rat>],
    gi: &[Vec<BigInt>],
    phi: &[BigInt],
    den: &BigInt,
    l: u64,
    d: usize,
) -> Option<Vec<Vec<Rat>>> {
    if bigint_mod(den, l) == 0 {
        return None;
    }
    let fl = FiniteField::prime(l).ok()?;
    let phil: Vec<Vec<u64>> = phi.iter().map(|c| fl.from_bigint(c)).collect();
    let zroots: Vec<u64> = fl.roots(&phil).into_iter().map(|e| e[0]).collect();
    if zroots.len() != d {
        return None;
    }
    let n = g.len() - 1;
    // Roots of each embedded polynomial modulo l.
    let mut emb_roots: Vec<Vec<u64>> = Vec::with_capacity(d);
    for &z in &zroots {
        let coeffs: Vec<Vec<u64>> = gi
            .iter()
            .map(|c| vec![eval_int_poly_mod(c, z, l)])
            .collect();
        if fl.is_zero(&coeffs[n]) {
            return None;
        }
        // squarefree modulo l
        let der = poly::derivative(&fl, &coeffs);
        let gg = poly::gcd(&fl, &coeffs, &der);
        if poly::degree(&fl, &gg).unwrap_or(0) > 0 {
            return None;
        }
        let r: Vec<u64> = fl.roots(&coeffs).into_iter().map(|e| e[0]).collect();
        if r.is_empty() {
            return Some(Vec::new());
        }
        emb_roots.push(r);
    }
    let max_roots = emb_roots.iter().map(|r| r.len()).min().unwrap();

    let lb = BigInt::from(l);
    let mut bits = 64u64;
    let mut found: Vec<Vec<Rat>> = Vec::new();
    while bits <= MAX_LIFT_BITS {
        let mut e = 1u32;
        let mut modulus = lb.clone();
        while modulus.bits() < bits {
            modulus *= &lb;
            e += 1;
        }
        let _ = e;
        // lift zeta images
        let zl: Vec<BigInt> = zroots
            .iter()
            .map(|&z| hensel_lift(phi, BigInt::from(z), &lb, &modulus))
            .collect();
        // lift embedded roots
        let mut lifted: Vec<Vec<BigInt>> = Vec::with_capacity(d);
        for (t, roots) in emb_roots.iter().enumerate() {
            let coeffs: Vec<BigInt> = gi.iter().map(|c| eval_big_poly_mod(c, &zl[t], &modulus)).collect();
            lifted.push(
                roots
                    .iter()
                    .map(|&r| hensel_lift(&coeffs, BigInt::from(r), &lb, &modulus))
                    .collect(),
            );
        }
        let vinv = vandermonde_inverse(&zl, &modulus);
        let half = &modulus >> 1usize;
        let small = BigInt::one() << ((modulus.bits() / 2) as usize);
        found.clear();
        let mut idx = vec![0usize; d];
        'combos: loop {
            // candidate D*beta images
            let rho: Vec<BigInt> = (0..d).map(|t| (&lifted[t][idx[t]] * den).mod_floor(&modulus)).collect();
            let mut coords = Vec::with_capacity(d);
            let mut ok = true;
            for row in &vinv {
                let mut acc = BigInt::zero();
                for (a, b) in row.iter().zip(&rho) {
                    acc += a * b;
                }
                let mut c = acc.mod_floor(&modulus);
                if c > half {
                    c -= &modulus;
                }
                if c.abs() > small {
                    ok = false;
                    break;
                }
                coords.push(c);
            }
            if ok {
                let beta: Vec<Rat> = coords
                    .into_iter()
                    .map(|c| Rat::from_big(c, den.clone()))
                    .collect();
                if k.is_zero(&poly::eval(k, g, &beta)) && !found.contains(&beta) {
                    found.push(beta);
                    if found.len() == max_roots {
                        break 'combos;
                    }
                }
            }
            // advance odometer
            let mut pos = 0;
            loop {
                if pos == d {
                    break 'combos;
                }
                idx[pos] += 1;
                if idx[pos] < lifted[pos].len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
        }
        if found.len() == max_roots {
            break;
        }
        bits *= 2;
    }
    found.sort();
    Some(found)
}

fn eval_int_poly_mod(c: &[BigInt], z: u64, l: u64) -> u64 {
    let mut acc = 0u128;
    for x in c.iter().rev() {
        acc = (acc * z as u128 + bigint_mod(x, l) as u128) % l as u128;
    }
    acc as u64
}

fn eval_big_poly_mod(c: &[BigInt], z: &BigInt, m: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for x in c.iter().rev() {
        acc = (acc * z + x).mod_floor(m);
    }
    acc
}

/// Newton lifting of a simple root modulo `l` to a root modulo `m = l^e`.
fn hensel_lift(f: &[BigInt], r0: BigInt, l: &BigInt, m: &BigInt) -> BigInt {
    let df: Vec<BigInt> = f
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect();
    let mut r = r0;
    let mut cur = l.clone();
    while &cur < m {
        cur = (&cur * &cur).min(m.clone());
        let fv = eval_big_poly_mod(f, &r, &cur);
        let dv = eval_big_poly_mod(&df, &r, &cur);
        let inv = mod_inverse(&dv, &cur).expect("simple root");
        r = (&r - fv * inv).mod_floor(&cur);
    }
    r.mod_floor(m)
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// Inverse of `V[t][j] = z_t^j` modulo `m`.
fn vandermonde_inverse(z: &[BigInt], m: &BigInt) -> Vec<Vec<BigInt>> {
    let d = z.len();
    let mut a: Vec<Vec<BigInt>> = (0..d)
        .map(|t| {
            let mut row = Vec::with_capacity(2 * d);
            let mut p = BigInt::one();
            for _ in 0..d {
                row.push(p.clone());
                p = (&p * &z[t]).mod_floor(m);
            }
            for j in 0..d {
                row.push(if j == t { BigInt::one() } else { BigInt::zero() });
            }
            row
        })
        .collect();
    for c in 0..d {
        let piv = (c..d)
            .find(|&r| mod_inverse(&a[r][c], m).is_some())
            .expect("Vandermonde matrix invertible modulo l");
        a.swap(c, piv);
        let inv = mod_inverse(&a[c][c], m).unwrap();
        for j in 0..2 * d {
            a[c][j] = (&a[c][j] * &inv).mod_floor(m);
        }
        for r in 0..d {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                for j in 0..2 * d {
                    let t = &f * &a[c][j];
                    a[r][j] = (&a[r][j] - t).mod_floor(m);
                }
            }
        }
    }
    a.into_iter().map(|row| row[d..].to_vec()).collect()
}
