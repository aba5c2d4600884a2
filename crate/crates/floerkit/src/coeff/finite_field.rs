//! Finite fields `F_p[x]/(g)` with `g` monic irreducible.

use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::field::{CoeffError, Field};
use super::poly;
use super::rat::Rat;

/// Largest prime accepted; keeps products of residues inside `u64`.
pub const MAX_PRIME: u64 = (1 << 31) - 1;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Handle to `F_{p^k}` presented as `F_p[x]/(modulus)`.
#[derive(Clone)]
pub struct FiniteField(Arc<Inner>);

struct Inner {
    p: u64,
    /// Monic modulus, lowest degree first, length `k + 1`.
    modulus: Vec<u64>,
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.describe())
    }
}

fn modp(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = modp(r, a, p);
        }
        a = modp(a, a, p);
        e >>= 1;
    }
    r
}

/// Inverse of a nonzero residue modulo the prime `p`.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Residue of a big integer modulo `p`.
pub fn bigint_mod(n: &BigInt, p: u64) -> u64 {
    let m = n.mod_floor(&BigInt::from(p));
    m.to_u64().expect("residue fits in u64")
}

impl FiniteField {
    /// The prime field `F_p`.
    pub fn prime(p: u64) -> Result<Self, CoeffError> {
        if !is_prime(p) || p > MAX_PRIME {
            return Err(CoeffError::NotPrime(p));
        }
        Ok(FiniteField(Arc::new(Inner { p, modulus: vec![0, 1] })))
    }

    /// `F_p[x]/(f)` for a monic `f` given lowest degree first.  Fails with
    /// `ReduciblePolynomial` unless `f` is irreducible over `F_p`.
    pub fn extension(p: u64, f: &[u64]) -> Result<Self, CoeffError> {
        let base = Self::prime(p)?;
        let mut m: Vec<u64> = f.iter().map(|c| c % p).collect();
        while m.last() == Some(&0) {
            m.pop();
        }
        if m.len() < 2 || *m.last().unwrap() != 1 {
            return Err(CoeffError::Parse("modulus must be monic of degree at least 1".into()));
        }
        if !is_irreducible(&base, &m) {
            return Err(CoeffError::ReduciblePolynomial { p, poly: format_poly_u64(&m) });
        }
        if m.len() == 2 {
            return Ok(base);
        }
        Ok(FiniteField(Arc::new(Inner { p, modulus: m })))
    }

    /// `F_{p^k}` presented by the lexicographically smallest monic
    /// irreducible polynomial of degree `k` (coefficients compared from the
    /// highest non-leading one down to the constant term).
    pub fn smallest_extension(p: u64, k: usize) -> Result<Self, CoeffError> {
        let base = Self::prime(p)?;
        if k <= 1 {
            return Ok(base);
        }
        let total = (p as u128).pow(k as u32);
        for idx in 0..total {
            // base-p digits of idx fill x^0 upwards, so increasing idx
            // compares the x^{k-1} coefficient first.
            let mut coeffs = vec![0u64; k + 1];
            coeffs[k] = 1;
            let mut t = idx;
            for pos in 0..k {
                coeffs[pos] = (t % p as u128) as u64;
                t /= p as u128;
            }
            if coeffs[0] == 0 {
                continue;
            }
            if is_irreducible(&base, &coeffs) {
                return Ok(FiniteField(Arc::new(Inner { p, modulus: coeffs })));
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }

    /// Extension degree over `F_p`.
    pub fn degree(&self) -> usize {
        self.0.modulus.len() - 1
    }

    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    /// Number of elements `p^k`.
    pub fn order(&self) -> BigUint {
        num_traits::pow(BigUint::from(self.0.p), self.degree())
    }

    /// The class of `x`.
    pub fn generator(&self) -> Vec<u64> {
        let k = self.degree();
        let mut e = vec![0; k];
        if k == 1 {
            // x = -m0 in F_p[x]/(x + m0)
            e[0] = (self.0.p - self.0.modulus[0] % self.0.p) % self.0.p;
        } else {
            e[1] = 1;
        }
        e
    }

    pub fn from_u64(&self, n: u64) -> Vec<u64> {
        let mut e = vec![0; self.degree()];
        e[0] = n % self.0.p;
        e
    }

    pub fn from_coeffs(&self, c: &[u64]) -> Vec<u64> {
        let mut acc = vec![0; 2 * self.degree()];
        for (i, x) in c.iter().enumerate() {
            if i >= acc.len() {
                acc.resize(i + 1, 0);
            }
            acc[i] = x % self.0.p;
        }
        self.reduce_raw(acc)
    }

    /// Element with index `t` in the enumeration by base-`p` digits.
    pub fn elem_from_index(&self, mut t: u128) -> Vec<u64> {
        let p = self.0.p as u128;
        let mut e = vec![0; self.degree()];
        for c in e.iter_mut() {
            *c = (t % p) as u64;
            t /= p;
        }
        e
    }

    /// Sort key realising the lexicographic order used to pick canonical
    /// roots: highest coefficient first.
    pub fn elem_key(&self, a: &[u64]) -> Vec<u64> {
        a.iter().rev().copied().collect()
    }

    fn reduce_raw(&self, mut a: Vec<u64>) -> Vec<u64> {
        let p = self.0.p;
        let m = &self.0.modulus;
        let k = m.len() - 1;
        let mut i = a.len();
        while i > k {
            i -= 1;
            let c = a[i] % p;
            if c != 0 {
                let shift = i - k;
                for j in 0..k {
                    let sub = modp(c, m[j], p);
                    a[shift + j] = (a[shift + j] + p - sub) % p;
                }
            }
            a[i] = 0;
        }
        a.truncate(k);
        a.resize(k, 0);
        a
    }

    /// Distinct roots of a polynomial (coefficients in this field, lowest
    /// degree first), sorted by [`FiniteField::elem_key`].
    pub fn roots(&self, f: &[Vec<u64>]) -> Vec<Vec<u64>> {
        let f = poly::trimmed(self, f.to_vec());
        if poly::degree(self, &f).unwrap_or(0) == 0 {
            return Vec::new();
        }
        let f = poly::monic(self, &f);
        let xq = poly::x_pow_mod(self, &self.order(), &f);
        let xq_minus_x = poly::sub(self, &xq, &[self.zero(), self.one()]);
        let g = poly::gcd(self, &f, &xq_minus_x);
        let mut out = Vec::new();
        self.split_linear(&g, &mut out);
        out.sort_by_key(|e| self.elem_key(e));
        out.dedup();
        out
    }

    fn split_linear(&self, g: &[Vec<u64>], out: &mut Vec<Vec<u64>>) {
        let dg = match poly::degree(self, g) {
            None | Some(0) => return,
            Some(d) => d,
        };
        if dg == 1 {
            let g = poly::monic(self, g);
            out.push(self.neg(&g[0]));
            return;
        }
        let q = self.order();
        let odd = self.0.p != 2;
        let mut t: u128 = 1;
        loop {
            let a = self.elem_from_index(t);
            t += 1;
            let h = if odd {
                let e = (&q - BigUint::one()) / BigUint::from(2u32);
                let base = vec![a.clone(), self.one()];
                let pw = poly::powmod(self, &base, &e, g);
                poly::sub(self, &pw, &[self.one()])
            } else {
                // trace map of a*x
                let mut acc: Vec<Vec<u64>> = Vec::new();
                let mut term = poly::rem(self, &[self.zero(), a.clone()], g);
                for _ in 0..self.degree() {
                    acc = poly::add(self, &acc, &term);
                    term = poly::rem(self, &poly::mul(self, &term, &term), g);
                }
                acc
            };
            let d = poly::gcd(self, g, &h);
            let dd = poly::degree(self, &d).unwrap_or(0);
            if dd > 0 && dd < dg {
                let rest = poly::divrem(self, g, &d).0;
                self.split_linear(&d, out);
                self.split_linear(&rest, out);
                return;
            }
            if t > 10_000 + (q.to_u128().unwrap_or(u128::MAX).min(1 << 20)) {
                panic!("equal-degree splitting failed to converge");
            }
        }
    }

    /// All elements, for exhaustive checks over small fields.
    pub fn elements(&self) -> Vec<Vec<u64>> {
        let q = self.order().to_u128().expect("small field");
        (0..q).map(|t| self.elem_from_index(t)).collect()
    }
}

/// Rabin's irreducibility test over the prime field `base`.
fn is_irreducible(base: &FiniteField, f: &[u64]) -> bool {
    let p = base.p();
    let k = f.len() - 1;
    if k == 1 {
        return true;
    }
    let fp: Vec<Vec<u64>> = f.iter().map(|&c| vec![c % p]).collect();
    let x = vec![vec![0u64], vec![1u64]];
    let pb = BigUint::from(p);
    // x^{p^i} mod f for i = 1..k
    let mut powers = Vec::with_capacity(k + 1);
    let mut cur = poly::rem(base, &x, &fp);
    powers.push(cur.clone());
    for _ in 0..k {
        cur = poly::powmod(base, &cur, &pb, &fp);
        powers.push(cur.clone());
    }
    // powers[i] = x^{p^i}
    if poly::sub(base, &powers[k], &poly::rem(base, &x, &fp)).len() != 0 {
        return false;
    }
    for r in prime_factors(k as u64) {
        let i = k / r as usize;
        let h = poly::sub(base, &powers[i], &x);
        let g = poly::gcd(base, &fp, &h);
        if poly::degree(base, &g).unwrap_or(0) != 0 {
            return false;
        }
    }
    true
}

pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn format_poly_u64(m: &[u64]) -> String {
    let mut parts = Vec::new();
    for (i, &c) in m.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let mono = match i {
            0 => format!("{c}"),
            1 if c == 1 => "x".to_string(),
            1 => format!("{c}x"),
            _ if c == 1 => format!("x^{i}"),
            _ => format!("{c}x^{i}"),
        };
        parts.push(mono);
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join("+")
    }
}

impl Field for FiniteField {
    type Elem = Vec<u64>;

    fn zero(&self) -> Vec<u64> {
        vec![0; self.degree()]
    }

    fn one(&self) -> Vec<u64> {
        self.from_u64(1)
    }

    fn is_zero(&self, a: &Vec<u64>) -> bool {
        a.iter().all(|&c| c == 0)
    }

    fn add(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        let p = self.0.p;
        a.iter().zip(b).map(|(x, y)| (x + y) % p).collect()
    }

    fn sub(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        let p = self.0.p;
        a.iter().zip(b).map(|(x, y)| (x + p - y) % p).collect()
    }

    fn neg(&self, a: &Vec<u64>) -> Vec<u64> {
        let p = self.0.p;
        a.iter().map(|x| (p - x) % p).collect()
    }

    fn mul(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        let p = self.0.p;
        let k = self.degree();
        if k == 1 {
            return vec![modp(a[0], b[0], p)];
        }
        let mut acc = vec![0u64; 2 * k - 1];
        for i in 0..k {
            if a[i] == 0 {
                continue;
            }
            for j in 0..k {
                acc[i + j] = (acc[i + j] + modp(a[i], b[j], p)) % p;
            }
        }
        self.reduce_raw(acc)
    }

    fn inv(&self, a: &Vec<u64>) -> Option<Vec<u64>> {
        if self.is_zero(a) {
            return None;
        }
        let p = self.0.p;
        if self.degree() == 1 {
            return Some(vec![inv_mod(a[0], p)]);
        }
        let base = FiniteField::prime(p).expect("prime");
        let ap: Vec<Vec<u64>> = a.iter().map(|&c| vec![c]).collect();
        let mp: Vec<Vec<u64>> = self.0.modulus.iter().map(|&c| vec![c]).collect();
        let (g, s, _) = poly::xgcd(&base, &ap, &mp);
        debug_assert_eq!(g.len(), 1);
        let mut out = vec![0u64; self.degree()];
        for (i, c) in s.iter().enumerate() {
            out[i] = c[0];
        }
        Some(out)
    }

    fn from_int(&self, n: i64) -> Vec<u64> {
        let p = self.0.p as i128;
        let r = ((n as i128 % p) + p) % p;
        self.from_u64(r as u64)
    }

    fn from_rat(&self, r: &Rat) -> Option<Vec<u64>> {
        let p = self.0.p;
        let d = bigint_mod(r.denom(), p);
        if d == 0 {
            return None;
        }
        let n = bigint_mod(r.numer(), p);
        Some(self.from_u64(modp(n, inv_mod(d, p), p)))
    }

    fn characteristic(&self) -> u64 {
        self.0.p
    }

    fn describe(&self) -> String {
        if self.degree() == 1 {
            format!("F_{}", self.0.p)
        } else {
            format!("F_{}[x]/({})", self.0.p, format_poly_u64(&self.0.modulus))
        }
    }

    fn format_elem(&self, a: &Vec<u64>) -> String {
        if self.degree() == 1 {
            a[0].to_string()
        } else {
            format_poly_u64(a)
        }
    }

    fn elem_to_json(&self, a: &Vec<u64>) -> serde_json::Value {
        if self.degree() == 1 {
            serde_json::json!(a[0])
        } else {
            serde_json::json!(a)
        }
    }

    fn elem_from_json(&self, v: &serde_json::Value) -> Result<Vec<u64>, CoeffError> {
        let bad = || CoeffError::Parse(v.to_string());
        match v {
            serde_json::Value::Number(n) => {
                let x = n.as_i64().ok_or_else(bad)?;
                Ok(self.from_int(x))
            }
            serde_json::Value::String(s) => {
                let r: Rat = s.parse().map_err(|_| bad())?;
                self.from_rat(&r).ok_or(CoeffError::DenominatorDivisibleByP { p: self.0.p })
            }
            serde_json::Value::Array(items) => {
                let mut c = Vec::new();
                for it in items {
                    let x = it.as_i64().ok_or_else(bad)?;
                    let p = self.0.p as i64;
                    c.push(x.rem_euclid(p) as u64);
                }
                Ok(self.from_coeffs(&c))
            }
            _ => Err(bad()),
        }
    }
}

impl FiniteField {
    /// Image of a big integer.
    pub fn from_bigint(&self, n: &BigInt) -> Vec<u64> {
        self.from_u64(bigint_mod(n, self.0.p))
    }

    /// True when `n` is zero modulo `p`.
    pub fn divides(&self, n: &BigInt) -> bool {
        (n % BigInt::from(self.0.p)).is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f9_and_f25_construct() {
        let f9 = FiniteField::extension(3, &[1, 0, 1]).unwrap();
        assert_eq!(f9.order(), BigUint::from(9u32));
        let f25 = FiniteField::extension(5, &[2, 0, 1]).unwrap();
        assert_eq!(f25.order(), BigUint::from(25u32));
        assert!(matches!(
            FiniteField::extension(5, &[1, 0, 1]),
            Err(CoeffError::ReduciblePolynomial { .. })
        ));
    }

    #[test]
    fn inverses_in_extension() {
        let f = FiniteField::smallest_extension(7, 3).unwrap();
        for e in f.elements().into_iter().skip(1).take(200) {
            let i = f.inv(&e).unwrap();
            assert_eq!(f.mul(&e, &i), f.one());
        }
    }

    #[test]
    fn roots_of_x2_plus_1_mod_5() {
        let f = FiniteField::prime(5).unwrap();
        let r = f.roots(&[f.one(), f.zero(), f.one()]);
        assert_eq!(r, vec![vec![2], vec![3]]);
    }
}
