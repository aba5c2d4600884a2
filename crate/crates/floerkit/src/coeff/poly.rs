//! Dense univariate polynomials over a [`Field`], stored lowest degree first.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::field::Field;

/// Removes trailing zero coefficients.
pub fn trim<F: Field>(k: &F, p: &mut Vec<F::Elem>) {
    while p.last().map_or(false, |c| k.is_zero(c)) {
        p.pop();
    }
}

pub fn trimmed<F: Field>(k: &F, mut p: Vec<F::Elem>) -> Vec<F::Elem> {
    trim(k, &mut p);
    p
}

/// Degree, or `None` for the zero polynomial.
pub fn degree<F: Field>(k: &F, p: &[F::Elem]) -> Option<usize> {
    (0..p.len()).rev().find(|&i| !k.is_zero(&p[i]))
}

pub fn add<F: Field>(k: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let n = a.len().max(b.len());
    let z = k.zero();
    let out = (0..n)
        .map(|i| k.add(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
        .collect();
    trimmed(k, out)
}

pub fn sub<F: Field>(k: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let n = a.len().max(b.len());
    let z = k.zero();
    let out = (0..n)
        .map(|i| k.sub(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
        .collect();
    trimmed(k, out)
}

pub fn neg<F: Field>(k: &F, a: &[F::Elem]) -> Vec<F::Elem> {
    a.iter().map(|c| k.neg(c)).collect()
}

pub fn scale<F: Field>(k: &F, a: &[F::Elem], c: &F::Elem) -> Vec<F::Elem> {
    trimmed(k, a.iter().map(|x| k.mul(x, c)).collect())
}

pub fn mul<F: Field>(k: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![k.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if k.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if k.is_zero(y) {
                continue;
            }
            out[i + j] = k.add(&out[i + j], &k.mul(x, y));
        }
    }
    trimmed(k, out)
}

/// Euclidean division `a = q*b + r`; panics if `b` is zero.
pub fn divrem<F: Field>(k: &F, a: &[F::Elem], b: &[F::Elem]) -> (Vec<F::Elem>, Vec<F::Elem>) {
    let db = degree(k, b).expect("division by the zero polynomial");
    let lead_inv = k.inv(&b[db]).expect("nonzero leading coefficient");
    let mut r = trimmed(k, a.to_vec());
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![k.zero(); r.len() - db];
    while let Some(dr) = degree(k, &r) {
        if dr < db {
            break;
        }
        let c = k.mul(&r[dr], &lead_inv);
        let shift = dr - db;
        for (i, bc) in b.iter().enumerate().take(db + 1) {
            r[i + shift] = k.sub(&r[i + shift], &k.mul(&c, bc));
        }
        q[shift] = c;
        trim(k, &mut r);
    }
    (trimmed(k, q), r)
}

pub fn rem<F: Field>(k: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    divrem(k, a, b).1
}

/// Scales to a monic polynomial (zero stays zero).
pub fn monic<F: Field>(k: &F, a: &[F::Elem]) -> Vec<F::Elem> {
    match degree(k, a) {
        None => Vec::new(),
        Some(d) => {
            let inv = k.inv(&a[d]).expect("nonzero leading coefficient");
            scale(k, &a[..=d], &inv)
        }
    }
}

/// Monic greatest common divisor.
pub fn gcd<F: Field>(k: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let mut x = trimmed(k, a.to_vec());
    let mut y = trimmed(k, b.to_vec());
    while !y.is_empty() {
        let r = rem(k, &x, &y);
        x = y;
        y = r;
    }
    monic(k, &x)
}

/// Extended Euclid: returns `(g, s, t)` with `s*a + t*b = g`, `g` monic.
pub fn xgcd<F: Field>(
    k: &F,
    a: &[F::Elem],
    b: &[F::Elem],
) -> (Vec<F::Elem>, Vec<F::Elem>, Vec<F::Elem>) {
    let mut r0 = trimmed(k, a.to_vec());
    let mut r1 = trimmed(k, b.to_vec());
    let mut s0 = vec![k.one()];
    let mut s1: Vec<F::Elem> = Vec::new();
    let mut t0: Vec<F::Elem> = Vec::new();
    let mut t1 = vec![k.one()];
    while !r1.is_empty() {
        let (q, r) = divrem(k, &r0, &r1);
        let s2 = sub(k, &s0, &mul(k, &q, &s1));
        let t2 = sub(k, &t0, &mul(k, &q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    match degree(k, &r0) {
        None => (Vec::new(), s0, t0),
        Some(d) => {
            let inv = k.inv(&r0[d]).expect("nonzero");
            (scale(k, &r0, &inv), scale(k, &s0, &inv), scale(k, &t0, &inv))
        }
    }
}

pub fn derivative<F: Field>(k: &F, a: &[F::Elem]) -> Vec<F::Elem> {
    if a.len() <= 1 {
        return Vec::new();
    }
    let out = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| k.mul(c, &k.from_int(i as i64)))
        .collect();
    trimmed(k, out)
}

pub fn eval<F: Field>(k: &F, a: &[F::Elem], x: &F::Elem) -> F::Elem {
    let mut acc = k.zero();
    for c in a.iter().rev() {
        acc = k.add(&k.mul(&acc, x), c);
    }
    acc
}

/// `base^e mod m`.
pub fn powmod<F: Field>(k: &F, base: &[F::Elem], e: &BigUint, m: &[F::Elem]) -> Vec<F::Elem> {
    let mut result = vec![k.one()];
    result = rem(k, &result, m);
    let mut b = rem(k, base, m);
    let bits = e.bits();
    for i in (0..bits).rev() {
        result = rem(k, &mul(k, &result, &result), m);
        if e.bit(i) {
            result = rem(k, &mul(k, &result, &b), m);
        }
    }
    b.clear();
    result
}

/// `x^e mod m` for a machine-sized exponent.
pub fn x_pow_mod<F: Field>(k: &F, e: &BigUint, m: &[F::Elem]) -> Vec<F::Elem> {
    let x = vec![k.zero(), k.one()];
    if e.is_zero() {
        return rem(k, &[k.one()], m);
    }
    if e.is_one() {
        return rem(k, &x, m);
    }
    powmod(k, &x, e, m)
}

/// Square-free part `a / gcd(a, a')`, monic.  Valid in characteristic zero
/// and whenever the derivative does not vanish identically.
pub fn squarefree_part<F: Field>(k: &F, a: &[F::Elem]) -> Vec<F::Elem> {
    let d = derivative(k, a);
    if d.is_empty() {
        return monic(k, a);
    }
    let g = gcd(k, a, &d);
    monic(k, &divrem(k, a, &g).0)
}
