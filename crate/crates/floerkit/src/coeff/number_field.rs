//! Cyclotomic number fields `Q(zeta_m)` presented as `Q[z]/(Phi_m)`.
//!
//! `m = 1` gives the rationals.  These fields are the characteristic-zero
//! stand-ins for the algebraic closure of `Q`: every root of unity a
//! computation needs lives in some `Q(zeta_m)`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::field::{CoeffError, Field};
use super::finite_field::{bigint_mod, FiniteField};
use super::gaussian::GaussianRat;
use super::poly;
use super::rat::Rat;

#[derive(Clone)]
pub struct NumberField(Arc<Inner>);

struct Inner {
    conductor: u64,
    /// Monic minimal polynomial of `z`, lowest degree first.
    modulus: Vec<Rat>,
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.conductor == other.0.conductor
    }
}

impl fmt::Debug for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.describe())
    }
}

/// Integer coefficients of the `m`-th cyclotomic polynomial.
pub fn cyclotomic_poly(m: u64) -> Vec<BigInt> {
    // x^m - 1 divided by Phi_d for all proper divisors d.
    let mut num = vec![BigInt::zero(); m as usize + 1];
    num[0] = BigInt::from(-1);
    num[m as usize] = BigInt::one();
    for d in 1..m {
        if m % d == 0 {
            let phi = cyclotomic_poly(d);
            num = int_poly_exact_div(&num, &phi);
        }
    }
    num
}

fn int_poly_exact_div(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    // b is monic
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let dq = r.len() - 1 - db;
    let mut q = vec![BigInt::zero(); dq + 1];
    for i in (0..=dq).rev() {
        let c = r[i + db].clone();
        q[i] = c.clone();
        for (j, bj) in b.iter().enumerate() {
            r[i + j] -= &c * bj;
        }
    }
    debug_assert!(r.iter().all(|x| x.is_zero()));
    q
}

pub fn euler_phi(m: u64) -> u64 {
    let mut n = m;
    let mut result = m;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            while n % d == 0 {
                n /= d;
            }
            result -= result / d;
        }
        d += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Smallest `k >= 1` with `p^k = 1 mod m`.
pub fn multiplicative_order(p: u64, m: u64) -> u64 {
    if m == 1 {
        return 1;
    }
    let mut x = p % m;
    let mut k = 1;
    while x != 1 {
        x = (x * p) % m;
        k += 1;
        assert!(k <= m, "p must be coprime to m");
    }
    k
}

impl NumberField {
    pub fn rationals() -> Self {
        Self::cyclotomic(1)
    }

    /// `Q(zeta_m)`.  Conductors `m = 2 mod 4` are normalised to `m/2`.
    pub fn cyclotomic(m: u64) -> Self {
        assert!(m >= 1);
        let m = if m % 4 == 2 { m / 2 } else { m };
        let phi = cyclotomic_poly(m);
        let modulus = phi.into_iter().map(Rat::from_bigint).collect();
        NumberField(Arc::new(Inner { conductor: m, modulus }))
    }

    /// The Gaussian rationals `Q(i)`.
    pub fn gaussian() -> Self {
        Self::cyclotomic(4)
    }

    pub fn conductor(&self) -> u64 {
        self.0.conductor
    }

    pub fn degree(&self) -> usize {
        self.0.modulus.len() - 1
    }

    pub fn modulus(&self) -> &[Rat] {
        &self.0.modulus
    }

    /// The generator `z = zeta_m`.
    pub fn zeta(&self) -> Vec<Rat> {
        if self.degree() == 1 {
            // z = -modulus[0]
            return vec![-&self.0.modulus[0]];
        }
        let mut e = vec![Rat::zero(); self.degree()];
        e[1] = Rat::one();
        e
    }

    pub fn from_rational(&self, r: &Rat) -> Vec<Rat> {
        let mut e = vec![Rat::zero(); self.degree()];
        e[0] = r.clone();
        e
    }

    /// Element from power-basis coordinates (any length; reduced).
    pub fn from_coeffs(&self, c: &[Rat]) -> Vec<Rat> {
        self.reduce_poly(c.to_vec())
    }

    fn reduce_poly(&self, mut a: Vec<Rat>) -> Vec<Rat> {
        let d = self.degree();
        let m = &self.0.modulus;
        let mut i = a.len();
        while i > d {
            i -= 1;
            if !a[i].is_zero() {
                let c = a[i].clone();
                let shift = i - d;
                for j in 0..d {
                    if !m[j].is_zero() {
                        a[shift + j] = &a[shift + j] - &(&c * &m[j]);
                    }
                }
            }
        }
        a.truncate(d);
        a.resize(d, Rat::zero());
        a
    }

    pub fn contains_i(&self) -> bool {
        self.0.conductor % 4 == 0
    }

    /// The square root of -1 given by `zeta_m^{m/4}`, when `4 | m`.
    pub fn sqrt_minus_one(&self) -> Option<Vec<Rat>> {
        if !self.contains_i() {
            return None;
        }
        Some(self.pow(&self.zeta(), self.0.conductor / 4))
    }

    /// Embeds a Gaussian rational, sending `i` to [`Self::sqrt_minus_one`].
    pub fn embed_gaussian(&self, g: &GaussianRat) -> Option<Vec<Rat>> {
        let re = self.from_rational(&g.re);
        if g.im.is_zero() {
            return Some(re);
        }
        let i = self.sqrt_minus_one()?;
        Some(self.add(&re, &self.mul(&self.from_rational(&g.im), &i)))
    }

    /// True when `other` is a subfield, i.e. its conductor divides ours.
    pub fn contains_field(&self, other: &NumberField) -> bool {
        self.0.conductor % other.0.conductor == 0
    }

    /// Image of `x` from a subfield `src`, sending `zeta_src` to
    /// `zeta^{m / m_src}`; `None` when `src` is not a subfield.
    pub fn embed_from(&self, src: &NumberField, x: &[Rat]) -> Option<Vec<Rat>> {
        if !self.contains_field(src) {
            return None;
        }
        if src.0.conductor == self.0.conductor {
            return Some(x.to_vec());
        }
        if src.degree() == 1 {
            return Some(self.from_rational(&x[0]));
        }
        let step = self.0.conductor / src.0.conductor;
        let zs = self.pow(&self.zeta(), step);
        let mut acc = self.zero();
        let mut zp = self.one();
        for c in x {
            if !c.is_zero() {
                acc = self.add(&acc, &self.mul(&self.from_rational(c), &zp));
            }
            zp = self.mul(&zp, &zs);
        }
        Some(acc)
    }

    /// The rational value of an element lying in `Q`.
    pub fn as_rational(&self, a: &[Rat]) -> Option<Rat> {
        if a.iter().skip(1).all(|c| c.is_zero()) {
            Some(a[0].clone())
        } else {
            None
        }
    }

    /// Field norm to `Q`, as the determinant of multiplication.
    pub fn norm(&self, a: &Vec<Rat>) -> Rat {
        let d = self.degree();
        let mut m: Vec<Vec<Rat>> = Vec::with_capacity(d);
        let mut basis = self.one();
        let z = self.zeta();
        for _ in 0..d {
            m.push(self.mul(a, &basis));
            basis = self.mul(&basis, &z);
        }
        rational_det(m)
    }

    /// Reduction to characteristic `p`, sending `z` to the smallest root of
    /// `Phi_m` in `F_{p^k}`, `k` the order of `p` modulo `m`.
    pub fn reduction(&self, p: u64) -> Result<NfReduction, CoeffError> {
        let m = self.0.conductor;
        if m % p == 0 && m > 1 {
            return Err(CoeffError::RamifiedPrime { p, field: self.describe() });
        }
        let k = multiplicative_order(p % m.max(1), m) as usize;
        let target = FiniteField::smallest_extension(p, k)?;
        let phi: Vec<Vec<u64>> = self
            .0
            .modulus
            .iter()
            .map(|c| target.from_bigint(c.numer()))
            .collect();
        let roots = target.roots(&phi);
        let zeta_image = roots
            .into_iter()
            .next()
            .expect("Phi_m splits in F_{p^k}");
        Ok(NfReduction { p, source: self.clone(), target, zeta_image })
    }
}

/// Determinant over `Q` by exact elimination.
pub fn rational_det(mut m: Vec<Vec<Rat>>) -> Rat {
    let n = m.len();
    let mut det = Rat::one();
    for c in 0..n {
        let piv = match (c..n).find(|&r| !m[r][c].is_zero()) {
            Some(r) => r,
            None => return Rat::zero(),
        };
        if piv != c {
            m.swap(piv, c);
            det = -det;
        }
        let pv = m[c][c].clone();
        det = &det * &pv;
        let inv = pv.recip().unwrap();
        for r in (c + 1)..n {
            if m[r][c].is_zero() {
                continue;
            }
            let f = &m[r][c] * &inv;
            for j in c..n {
                let t = &f * &m[c][j];
                m[r][j] = &m[r][j] - &t;
            }
        }
    }
    det
}

/// A fixed ring map from a number field to a finite field.
#[derive(Clone, Debug)]
pub struct NfReduction {
    pub p: u64,
    pub source: NumberField,
    pub target: FiniteField,
    pub zeta_image: Vec<u64>,
}

impl NfReduction {
    pub fn reduce(&self, a: &[Rat]) -> Result<Vec<u64>, CoeffError> {
        let t = &self.target;
        let mut acc = t.zero();
        let mut zpow = t.one();
        for c in a {
            if !c.is_zero() {
                let cc = t
                    .from_rat(c)
                    .ok_or(CoeffError::DenominatorDivisibleByP { p: self.p })?;
                acc = t.add(&acc, &t.mul(&cc, &zpow));
            }
            zpow = t.mul(&zpow, &self.zeta_image);
        }
        Ok(acc)
    }

    /// Primes dividing a denominator of the element block reduction.
    pub fn obstructs(&self, a: &[Rat]) -> bool {
        a.iter().any(|c| bigint_mod(c.denom(), self.p) == 0)
    }
}

impl Field for NumberField {
    type Elem = Vec<Rat>;

    fn zero(&self) -> Vec<Rat> {
        vec![Rat::zero(); self.degree()]
    }

    fn one(&self) -> Vec<Rat> {
        self.from_rational(&Rat::one())
    }

    fn is_zero(&self, a: &Vec<Rat>) -> bool {
        a.iter().all(|c| c.is_zero())
    }

    fn add(&self, a: &Vec<Rat>, b: &Vec<Rat>) -> Vec<Rat> {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    fn sub(&self, a: &Vec<Rat>, b: &Vec<Rat>) -> Vec<Rat> {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }

    fn neg(&self, a: &Vec<Rat>) -> Vec<Rat> {
        a.iter().map(|x| -x).collect()
    }

    fn mul(&self, a: &Vec<Rat>, b: &Vec<Rat>) -> Vec<Rat> {
        let d = self.degree();
        if d == 1 {
            return vec![&a[0] * &b[0]];
        }
        let mut acc = vec![Rat::zero(); 2 * d - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                acc[i + j] = &acc[i + j] + &(x * y);
            }
        }
        self.reduce_poly(acc)
    }

    fn inv(&self, a: &Vec<Rat>) -> Option<Vec<Rat>> {
        if self.is_zero(a) {
            return None;
        }
        if self.degree() == 1 {
            return a[0].recip().map(|r| vec![r]);
        }
        let q = super::number_field::QField;
        let (g, s, _) = poly::xgcd(&q, &poly::trimmed(&q, a.clone()), &self.0.modulus);
        debug_assert!(g.len() == 1);
        Some(self.from_coeffs(&s))
    }

    fn from_int(&self, n: i64) -> Vec<Rat> {
        self.from_rational(&Rat::from_int(n))
    }

    fn from_rat(&self, r: &Rat) -> Option<Vec<Rat>> {
        Some(self.from_rational(r))
    }

    fn characteristic(&self) -> u64 {
        0
    }

    fn describe(&self) -> String {
        match self.0.conductor {
            1 => "Q".to_string(),
            4 => "Q(i)".to_string(),
            m => format!("Q(zeta_{m})"),
        }
    }

    fn format_elem(&self, a: &Vec<Rat>) -> String {
        let sym = if self.0.conductor == 4 { "i" } else { "z" };
        let mut parts = Vec::new();
        for (i, c) in a.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mono = match i {
                0 => c.to_string(),
                1 => format!("{c}*{sym}"),
                _ => format!("{c}*{sym}^{i}"),
            };
            parts.push(mono);
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }

    fn elem_to_json(&self, a: &Vec<Rat>) -> serde_json::Value {
        if self.degree() == 1 {
            serde_json::Value::String(a[0].to_string())
        } else {
            serde_json::Value::Array(a.iter().map(|c| serde_json::Value::String(c.to_string())).collect())
        }
    }

    fn elem_from_json(&self, v: &serde_json::Value) -> Result<Vec<Rat>, CoeffError> {
        let bad = || CoeffError::Parse(v.to_string());
        let one = |x: &serde_json::Value| -> Result<Rat, CoeffError> {
            match x {
                serde_json::Value::String(s) => s.parse().map_err(|_| bad()),
                serde_json::Value::Number(n) => n.as_i64().map(Rat::from_int).ok_or_else(bad),
                _ => Err(bad()),
            }
        };
        match v {
            serde_json::Value::Array(items) => {
                let c: Result<Vec<Rat>, _> = items.iter().map(one).collect();
                Ok(self.from_coeffs(&c?))
            }
            serde_json::Value::String(s) if s.contains('i') => {
                let g: GaussianRat = s.parse().map_err(|_| bad())?;
                self.embed_gaussian(&g).ok_or_else(bad)
            }
            other => Ok(self.from_rational(&one(other)?)),
        }
    }
}

/// Bare `Q` as a [`Field`] with scalar elements, used for polynomial
/// arithmetic on moduli.
#[derive(Clone, Debug, PartialEq)]
pub struct QField;

impl Field for QField {
    type Elem = Rat;

    fn zero(&self) -> Rat {
        Rat::zero()
    }
    fn one(&self) -> Rat {
        Rat::one()
    }
    fn is_zero(&self, a: &Rat) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &Rat, b: &Rat) -> Rat {
        a + b
    }
    fn sub(&self, a: &Rat, b: &Rat) -> Rat {
        a - b
    }
    fn neg(&self, a: &Rat) -> Rat {
        -a
    }
    fn mul(&self, a: &Rat, b: &Rat) -> Rat {
        a * b
    }
    fn inv(&self, a: &Rat) -> Option<Rat> {
        a.recip()
    }
    fn from_int(&self, n: i64) -> Rat {
        Rat::from_int(n)
    }
    fn from_rat(&self, r: &Rat) -> Option<Rat> {
        Some(r.clone())
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn describe(&self) -> String {
        "Q".into()
    }
    fn format_elem(&self, a: &Rat) -> String {
        a.to_string()
    }
    fn elem_to_json(&self, a: &Rat) -> serde_json::Value {
        serde_json::Value::String(a.to_string())
    }
    fn elem_from_json(&self, v: &serde_json::Value) -> Result<Rat, CoeffError> {
        match v {
            serde_json::Value::String(s) => s.parse().map_err(|_| CoeffError::Parse(s.clone())),
            serde_json::Value::Number(n) => n
                .as_i64()
                .map(Rat::from_int)
                .ok_or_else(|| CoeffError::Parse(n.to_string())),
            _ => Err(CoeffError::Parse(v.to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polynomials() {
        let p12: Vec<i64> = cyclotomic_poly(12).iter().map(|c| c.try_into().unwrap()).collect();
        assert_eq!(p12, vec![1, 0, -1, 0, 1]);
        assert_eq!(NumberField::cyclotomic(8).degree(), 4);
        assert_eq!(NumberField::cyclotomic(6), NumberField::cyclotomic(3));
    }

    #[test]
    fn zeta_has_order_m() {
        for m in [3u64, 4, 5, 8, 12] {
            let k = NumberField::cyclotomic(m);
            let z = k.zeta();
            assert_eq!(k.pow(&z, m), k.one());
            assert_ne!(k.pow(&z, m / 2 + m % 2 - 1).len(), 0);
            let zi = k.inv(&z).unwrap();
            assert_eq!(k.mul(&z, &zi), k.one());
        }
    }

    #[test]
    fn sqrt_minus_one_squares_to_minus_one() {
        let k = NumberField::cyclotomic(12);
        let i = k.sqrt_minus_one().unwrap();
        assert_eq!(k.mul(&i, &i), k.from_int(-1));
    }

    #[test]
    fn norm_of_one_plus_i() {
        let k = NumberField::gaussian();
        let a = k.from_coeffs(&[Rat::one(), Rat::one()]);
        assert_eq!(k.norm(&a), Rat::from_int(2));
    }
}
