//! Rational function fields `K(u)` over a base field `K`.
//!
//! Used as the coefficient field of the Tate complex, where the equivariant
//! parameter `u` is inverted.

use std::fmt;

use super::field::{CoeffError, Field};
use super::poly;
use super::rat::Rat;

#[derive(Clone, PartialEq)]
pub struct RationalFunctions<F: Field> {
    base: F,
}

impl<F: Field> fmt::Debug for RationalFunctions<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.describe())
    }
}

/// `num / den` with `den` monic and coprime to `num`; zero is `0/1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFn<E> {
    pub num: Vec<E>,
    pub den: Vec<E>,
}

impl<F: Field> RationalFunctions<F> {
    pub fn new(base: F) -> Self {
        RationalFunctions { base }
    }

    pub fn base(&self) -> &F {
        &self.base
    }

    /// The variable `u`.
    pub fn u(&self) -> RatFn<F::Elem> {
        RatFn { num: vec![self.base.zero(), self.base.one()], den: vec![self.base.one()] }
    }

    /// `u^k` for any integer `k`.
    pub fn u_pow(&self, k: i64) -> RatFn<F::Elem> {
        let mono = |n: usize| {
            let mut v = vec![self.base.zero(); n + 1];
            v[n] = self.base.one();
            v
        };
        if k >= 0 {
            RatFn { num: mono(k as usize), den: vec![self.base.one()] }
        } else {
            RatFn { num: vec![self.base.one()], den: mono((-k) as usize) }
        }
    }

    pub fn constant(&self, c: F::Elem) -> RatFn<F::Elem> {
        self.make(vec![c], vec![self.base.one()])
    }

    fn make(&self, num: Vec<F::Elem>, den: Vec<F::Elem>) -> RatFn<F::Elem> {
        let k = &self.base;
        let num = poly::trimmed(k, num);
        if num.is_empty() {
            return RatFn { num, den: vec![k.one()] };
        }
        let den = poly::trimmed(k, den);
        let g = poly::gcd(k, &num, &den);
        let (mut n, mut d) = if g.len() > 1 {
            (poly::divrem(k, &num, &g).0, poly::divrem(k, &den, &g).0)
        } else {
            (num, den)
        };
        let lead = d.last().expect("nonzero denominator").clone();
        if !k.is_one(&lead) {
            let inv = k.inv(&lead).unwrap();
            n = poly::scale(k, &n, &inv);
            d = poly::scale(k, &d, &inv);
        }
        RatFn { num: n, den: d }
    }

    /// Lowest and highest power of `u` in numerator and denominator,
    /// combined as a span of Laurent degrees when the denominator is a
    /// monomial; `None` otherwise.
    pub fn laurent_span(&self, a: &RatFn<F::Elem>) -> Option<(i64, i64)> {
        let k = &self.base;
        let dd = a.den.len() as i64 - 1;
        if a.den[..a.den.len() - 1].iter().any(|c| !k.is_zero(c)) {
            return None;
        }
        if a.num.is_empty() {
            return Some((0, 0));
        }
        let lo = a.num.iter().position(|c| !k.is_zero(c)).unwrap() as i64;
        let hi = a.num.len() as i64 - 1;
        Some((lo - dd, hi - dd))
    }
}

fn is_one_poly<F: Field>(k: &F, p: &[F::Elem]) -> bool {
    p.len() == 1 && k.is_one(&p[0])
}

impl<F: Field> Field for RationalFunctions<F> {
    type Elem = RatFn<F::Elem>;

    fn zero(&self) -> Self::Elem {
        RatFn { num: Vec::new(), den: vec![self.base.one()] }
    }

    fn one(&self) -> Self::Elem {
        RatFn { num: vec![self.base.one()], den: vec![self.base.one()] }
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.num.is_empty()
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let k = &self.base;
        if a.den == b.den {
            let num = poly::add(k, &a.num, &b.num);
            if is_one_poly(k, &a.den) {
                return RatFn { num, den: a.den.clone() };
            }
            return self.make(num, a.den.clone());
        }
        let num = poly::add(k, &poly::mul(k, &a.num, &b.den), &poly::mul(k, &b.num, &a.den));
        self.make(num, poly::mul(k, &a.den, &b.den))
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        RatFn { num: poly::neg(&self.base, &a.num), den: a.den.clone() }
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let k = &self.base;
        if a.num.is_empty() || b.num.is_empty() {
            return self.zero();
        }
        let num = poly::mul(k, &a.num, &b.num);
        if is_one_poly(k, &a.den) && is_one_poly(k, &b.den) {
            return RatFn { num, den: a.den.clone() };
        }
        self.make(num, poly::mul(k, &a.den, &b.den))
    }

    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem> {
        if a.num.is_empty() {
            return None;
        }
        Some(self.make(a.den.clone(), a.num.clone()))
    }

    fn from_int(&self, n: i64) -> Self::Elem {
        self.constant(self.base.from_int(n))
    }

    fn from_rat(&self, r: &Rat) -> Option<Self::Elem> {
        self.base.from_rat(r).map(|c| self.constant(c))
    }

    fn characteristic(&self) -> u64 {
        self.base.characteristic()
    }

    fn describe(&self) -> String {
        format!("{}(u)", self.base.describe())
    }

    fn format_elem(&self, a: &Self::Elem) -> String {
        let fmt_poly = |p: &[F::Elem]| -> String {
            let mut parts = Vec::new();
            for (i, c) in p.iter().enumerate() {
                if self.base.is_zero(c) {
                    continue;
                }
                let cs = self.base.format_elem(c);
                parts.push(match i {
                    0 => cs,
                    1 => format!("({cs})u"),
                    _ => format!("({cs})u^{i}"),
                });
            }
            if parts.is_empty() {
                "0".into()
            } else {
                parts.join(" + ")
            }
        };
        if is_one_poly(&self.base, &a.den) {
            fmt_poly(&a.num)
        } else {
            format!("({}) / ({})", fmt_poly(&a.num), fmt_poly(&a.den))
        }
    }

    fn elem_to_json(&self, a: &Self::Elem) -> serde_json::Value {
        serde_json::json!({
            "num": a.num.iter().map(|c| self.base.elem_to_json(c)).collect::<Vec<_>>(),
            "den": a.den.iter().map(|c| self.base.elem_to_json(c)).collect::<Vec<_>>(),
        })
    }

    fn elem_from_json(&self, v: &serde_json::Value) -> Result<Self::Elem, CoeffError> {
        let list = |key: &str| -> Result<Vec<F::Elem>, CoeffError> {
            v.get(key)
                .and_then(|x| x.as_array())
                .ok_or_else(|| CoeffError::Parse(v.to_string()))?
                .iter()
                .map(|c| self.base.elem_from_json(c))
                .collect()
        };
        let num = list("num")?;
        let den = list("den")?;
        if poly::trimmed(&self.base, den.clone()).is_empty() {
            return Err(CoeffError::Parse("zero denominator".into()));
        }
        Ok(self.make(num, den))
    }
}
