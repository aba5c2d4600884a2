//! Gaussian rationals `Q(i)` as plain values, used for bulk coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use super::field::{CoeffError, Field};
use super::finite_field::FiniteField;
use super::number_field::NumberField;
use super::rat::Rat;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussianRat {
    pub re: Rat,
    pub im: Rat,
}

impl GaussianRat {
    pub fn new(re: Rat, im: Rat) -> Self {
        GaussianRat { re, im }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        GaussianRat { re: Rat::from_int(re), im: Rat::from_int(im) }
    }

    pub fn zero() -> Self {
        Self::from_ints(0, 0)
    }

    pub fn one() -> Self {
        Self::from_ints(1, 0)
    }

    pub fn i() -> Self {
        Self::from_ints(0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// `re^2 + im^2`.
    pub fn norm(&self) -> Rat {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn conj(&self) -> Self {
        GaussianRat { re: self.re.clone(), im: -&self.im }
    }

    pub fn inv(&self) -> Option<Self> {
        let n = self.norm().recip()?;
        Some(GaussianRat { re: &self.re * &n, im: -(&self.im * &n) })
    }

    pub fn is_gaussian_integer(&self) -> bool {
        self.re.is_integer() && self.im.is_integer()
    }
}

impl Add for &GaussianRat {
    type Output = GaussianRat;
    fn add(self, o: &GaussianRat) -> GaussianRat {
        GaussianRat { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl Sub for &GaussianRat {
    type Output = GaussianRat;
    fn sub(self, o: &GaussianRat) -> GaussianRat {
        GaussianRat { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl Mul for &GaussianRat {
    type Output = GaussianRat;
    fn mul(self, o: &GaussianRat) -> GaussianRat {
        GaussianRat {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

impl Neg for &GaussianRat {
    type Output = GaussianRat;
    fn neg(self) -> GaussianRat {
        GaussianRat { re: -&self.re, im: -&self.im }
    }
}

impl fmt::Display for GaussianRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        let im = if self.im.is_one() {
            "i".to_string()
        } else if (-&self.im).is_one() {
            "-i".to_string()
        } else {
            format!("{}i", self.im)
        };
        if self.re.is_zero() {
            write!(f, "{im}")
        } else if im.starts_with('-') {
            write!(f, "{}{}", self.re, im)
        } else {
            write!(f, "{}+{}", self.re, im)
        }
    }
}

impl fmt::Debug for GaussianRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for GaussianRat {
    type Err = CoeffError;

    /// Accepts `a`, `bi`, `a+bi`, `a-bi`, `i`, `-i` with rational `a`, `b`.
    fn from_str(s: &str) -> Result<Self, CoeffError> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || CoeffError::Parse(s.to_string());
        if t.is_empty() {
            return Err(bad());
        }
        if !t.ends_with('i') {
            let re: Rat = t.parse().map_err(|_| bad())?;
            return Ok(GaussianRat { re, im: Rat::zero() });
        }
        let body = &t[..t.len() - 1];
        // split at the last sign that is not at position 0 and not after '/'
        let split = body
            .char_indices()
            .filter(|&(i, c)| i > 0 && (c == '+' || c == '-'))
            .map(|(i, _)| i)
            .last();
        let (re_str, im_str) = match split {
            Some(i) => (&body[..i], &body[i..]),
            None => ("0", body),
        };
        let im = match im_str {
            "" | "+" => Rat::one(),
            "-" => Rat::from_int(-1),
            x => x.trim_start_matches('+').parse().map_err(|_| bad())?,
        };
        let re: Rat = re_str.parse().map_err(|_| bad())?;
        Ok(GaussianRat { re, im })
    }
}

/// An element of a finite field together with its field handle.
#[derive(Clone, PartialEq)]
pub struct FiniteFieldElem {
    pub field: FiniteField,
    pub coeffs: Vec<u64>,
}

impl fmt::Debug for FiniteFieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {}", self.field.format_elem(&self.coeffs), self.field.describe())
    }
}

/// Reduces a Gaussian rational modulo `p` into `F_p` (when `p = 1 mod 4`)
/// or `F_p[x]/(x^2+1)` (when `p = 3 mod 4`), sending `i` to the
/// lexicographically smallest square root of -1.
pub fn reduce_mod_p(x: &GaussianRat, p: u64) -> Result<FiniteFieldElem, CoeffError> {
    let k = NumberField::gaussian();
    let red = k.reduction(p)?;
    let e = k.embed_gaussian(x).expect("Q(i) contains i");
    let coeffs = red.reduce(&e)?;
    Ok(FiniteFieldElem { field: red.target, coeffs })
}
