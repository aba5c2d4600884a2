//! Truncated Novikov series `sum a_i T^{g_i}` with rational exponents.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde_json::{json, Value};

use crate::coeff::{CoeffError, Field, FiniteField, NfReduction, NumberField, Rat};

/// Errors raised by Novikov arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NovikovError {
    #[error("valuation is only known to be at least {0}")]
    IndeterminateValuation(Rat),
    #[error("series live over different coefficient fields")]
    FieldMismatch,
    #[error("series is not invertible")]
    NotInvertible,
    #[error(transparent)]
    Coeff(#[from] CoeffError),
    #[error("malformed series: {0}")]
    Parse(String),
}

/// A Novikov series with finitely many stored terms and an optional
/// precision horizon.  With precision `P` the value is known modulo
/// `O(T^P)`; with no precision the series is an exact element.
#[derive(Clone, PartialEq, Eq)]
pub struct NovikovSeries<F: Field> {
    field: F,
    terms: Vec<(Rat, F::Elem)>,
    precision: Option<Rat>,
}

fn prec_min(a: &Option<Rat>, b: &Option<Rat>) -> Option<Rat> {
    match (a, b) {
        (None, x) | (x, None) => x.clone(),
        (Some(x), Some(y)) => Some(Rat::min(x, y)),
    }
}

impl<F: Field> NovikovSeries<F> {
    /// Builds a series from arbitrary terms: sorts, merges equal exponents,
    /// drops zero coefficients and anything at or beyond the precision.
    pub fn new(field: F, terms: impl IntoIterator<Item = (Rat, F::Elem)>, precision: Option<Rat>) -> Self {
        let mut map: BTreeMap<Rat, F::Elem> = BTreeMap::new();
        for (e, c) in terms {
            if let Some(p) = &precision {
                if &e >= p {
                    continue;
                }
            }
            match map.get_mut(&e) {
                Some(old) => *old = field.add(old, &c),
                None => {
                    map.insert(e, c);
                }
            }
        }
        let terms = map.into_iter().filter(|(_, c)| !field.is_zero(c)).collect();
        NovikovSeries { field, terms, precision }
    }

    fn from_sorted(field: F, terms: Vec<(Rat, F::Elem)>, precision: Option<Rat>) -> Self {
        NovikovSeries { field, terms, precision }
    }

    pub fn zero(field: &F) -> Self {
        Self::from_sorted(field.clone(), Vec::new(), None)
    }

    pub fn one(field: &F) -> Self {
        Self::constant(field, field.one())
    }

    /// `O(T^p)`: nothing known below `p` except that it vanishes.
    pub fn big_o(field: &F, p: Rat) -> Self {
        Self::from_sorted(field.clone(), Vec::new(), Some(p))
    }

    pub fn constant(field: &F, c: F::Elem) -> Self {
        Self::monomial(field, c, Rat::zero())
    }

    pub fn from_int(field: &F, n: i64) -> Self {
        Self::constant(field, field.from_int(n))
    }

    /// `c T^e`.
    pub fn monomial(field: &F, c: F::Elem, e: Rat) -> Self {
        if field.is_zero(&c) {
            return Self::zero(field);
        }
        Self::from_sorted(field.clone(), vec![(e, c)], None)
    }

    /// `T^e`.
    pub fn t_pow(field: &F, e: Rat) -> Self {
        Self::monomial(field, field.one(), e)
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn terms(&self) -> &[(Rat, F::Elem)] {
        &self.terms
    }

    pub fn precision(&self) -> Option<&Rat> {
        self.precision.as_ref()
    }

    pub fn is_exact(&self) -> bool {
        self.precision.is_none()
    }

    /// No stored terms (exact zero or zero to the stored precision).
    pub fn has_no_terms(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.terms.is_empty() && self.precision.is_none()
    }

    /// Valuation; `Ok(None)` is `+infinity` (the exact zero series).
    pub fn valuation(&self) -> Result<Option<Rat>, NovikovError> {
        match (self.terms.first(), &self.precision) {
            (Some((e, _)), _) => Ok(Some(e.clone())),
            (None, None) => Ok(None),
            (None, Some(p)) => Err(NovikovError::IndeterminateValuation(p.clone())),
        }
    }

    /// Lower bound for the valuation: the leading exponent, or the
    /// precision when nothing is stored; `None` is `+infinity`.
    pub fn val_lower_bound(&self) -> Option<Rat> {
        match self.terms.first() {
            Some((e, _)) => Some(e.clone()),
            None => self.precision.clone(),
        }
    }

    /// True when the valuation is certified to be at least `z`.
    pub fn certified_val_at_least(&self, z: &Rat) -> bool {
        match self.terms.first() {
            Some((e, _)) => e >= z,
            None => match &self.precision {
                None => true,
                Some(p) => p >= z,
            },
        }
    }

    pub fn leading(&self) -> Option<&(Rat, F::Elem)> {
        self.terms.first()
    }

    pub fn leading_coeff(&self) -> Option<&F::Elem> {
        self.terms.first().map(|(_, c)| c)
    }

    /// Coefficient of `T^e` (zero when absent).
    pub fn coeff(&self, e: &Rat) -> F::Elem {
        match self.terms.binary_search_by(|(x, _)| x.cmp(e)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => self.field.zero(),
        }
    }

    /// Largest stored exponent.
    pub fn max_exponent(&self) -> Option<&Rat> {
        self.terms.last().map(|(e, _)| e)
    }

    fn check_field(&self, other: &Self) -> Result<(), NovikovError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(NovikovError::FieldMismatch)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, NovikovError> {
        self.check_field(other)?;
        let precision = prec_min(&self.precision, &other.precision);
        let k = &self.field;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let below = |e: &Rat| precision.as_ref().map_or(true, |p| e < p);
        while i < self.terms.len() || j < other.terms.len() {
            let ord = match (self.terms.get(i), other.terms.get(j)) {
                (Some(a), Some(b)) => a.0.cmp(&b.0),
                (Some(_), None) => Ordering::Less,
                _ => Ordering::Greater,
            };
            let (e, c) = match ord {
                Ordering::Less => {
                    i += 1;
                    self.terms[i - 1].clone()
                }
                Ordering::Greater => {
                    j += 1;
                    other.terms[j - 1].clone()
                }
                Ordering::Equal => {
                    i += 1;
                    j += 1;
                    let c = k.add(&self.terms[i - 1].1, &other.terms[j - 1].1);
                    (self.terms[i - 1].0.clone(), c)
                }
            };
            if !below(&e) {
                break;
            }
            if !k.is_zero(&c) {
                out.push((e, c));
            }
        }
        Ok(Self::from_sorted(k.clone(), out, precision))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, NovikovError> {
        self.checked_add(&other.neg_series())
    }

    pub fn neg_series(&self) -> Self {
        let k = &self.field;
        Self::from_sorted(
            k.clone(),
            self.terms.iter().map(|(e, c)| (e.clone(), k.neg(c))).collect(),
            self.precision.clone(),
        )
    }

    /// Product with precision `min(v(s)+prec(t), v(t)+prec(s))`.
    pub fn checked_mul(&self, other: &Self) -> Result<Self, NovikovError> {
        self.check_field(other)?;
        if self.is_exact_zero() || other.is_exact_zero() {
            return Ok(Self::zero(&self.field));
        }
        let va = self.val_lower_bound().unwrap();
        let vb = other.val_lower_bound().unwrap();
        let pa = self.precision.as_ref().map(|p| p + &vb);
        let pb = other.precision.as_ref().map(|p| p + &va);
        let precision = prec_min(&pa, &pb);
        let k = &self.field;
        let mut map: BTreeMap<Rat, F::Elem> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea + eb;
                if let Some(p) = &precision {
                    if &e >= p {
                        break;
                    }
                }
                let c = k.mul(ca, cb);
                match map.get_mut(&e) {
                    Some(old) => *old = k.add(old, &c),
                    None => {
                        map.insert(e, c);
                    }
                }
            }
        }
        let terms = map.into_iter().filter(|(_, c)| !k.is_zero(c)).collect();
        Ok(Self::from_sorted(k.clone(), terms, precision))
    }

    /// Multiplication by a field element.
    pub fn scale(&self, c: &F::Elem) -> Self {
        let k = &self.field;
        if k.is_zero(c) {
            return Self::zero(k);
        }
        Self::from_sorted(
            k.clone(),
            self.terms.iter().map(|(e, a)| (e.clone(), k.mul(a, c))).collect(),
            self.precision.clone(),
        )
    }

    /// Multiplication by `T^g`.
    pub fn shift(&self, g: &Rat) -> Self {
        Self::from_sorted(
            self.field.clone(),
            self.terms.iter().map(|(e, c)| (e + g, c.clone())).collect(),
            self.precision.as_ref().map(|p| p + g),
        )
    }

    /// Forgets everything at or beyond `p` (and keeps a smaller existing
    /// precision).
    pub fn with_precision(&self, p: &Rat) -> Self {
        let precision = prec_min(&self.precision, &Some(p.clone()));
        let pr = precision.as_ref().unwrap();
        let terms = self.terms.iter().take_while(|(e, _)| e < pr).cloned().collect();
        Self::from_sorted(self.field.clone(), terms, precision)
    }

    /// The exact element formed by the terms with exponent at most `z`.
    pub fn truncate(&self, z: &Rat) -> Self {
        let terms = self.terms.iter().take_while(|(e, _)| e <= z).cloned().collect();
        Self::from_sorted(self.field.clone(), terms, None)
    }

    /// Drops the precision horizon, treating the stored terms as exact.
    pub fn exact_part(&self) -> Self {
        Self::from_sorted(self.field.clone(), self.terms.clone(), None)
    }

    /// Every exponent `g` (and the precision) divided by `p`.
    pub fn rescale_p(&self, p: u64) -> Self {
        let d = Rat::from_int(p as i64);
        Self::from_sorted(
            self.field.clone(),
            self.terms.iter().map(|(e, c)| (e / &d, c.clone())).collect(),
            self.precision.as_ref().map(|x| x / &d),
        )
    }

    /// Every exponent multiplied by a positive rational `r`.
    pub fn rescale_exponents(&self, r: &Rat) -> Self {
        assert!(r.is_positive());
        Self::from_sorted(
            self.field.clone(),
            self.terms.iter().map(|(e, c)| (e * r, c.clone())).collect(),
            self.precision.as_ref().map(|x| x * r),
        )
    }

    /// Inverse with absolute precision `max(target, target - 2v)` where `v`
    /// is the valuation, so that `s * invert(s) = 1 + O(T^{target - v})`.
    /// An input known only to precision `P` limits the result to `P - 2v`.
    /// Monomials invert exactly.
    pub fn invert(&self, target: &Rat) -> Result<Self, NovikovError> {
        let k = &self.field;
        let (v, c) = self.terms.first().cloned().ok_or(NovikovError::NotInvertible)?;
        let cinv = k.inv(&c).ok_or(NovikovError::NotInvertible)?;
        if self.terms.len() == 1 && self.precision.is_none() {
            return Ok(Self::monomial(k, cinv, -v));
        }
        let two_v = &v + &v;
        let mut abs = Rat::max(target, &(target - &two_v));
        if let Some(p) = &self.precision {
            abs = Rat::min(&abs, &(p - &two_v));
        }
        // relative precision of the normalized inverse
        let rel = &abs + &v;
        // r = s / (c T^v) - 1, all exponents positive
        let r = Self::from_sorted(
            k.clone(),
            self.terms[1..]
                .iter()
                .map(|(e, a)| (e - &v, k.mul(a, &cinv)))
                .collect(),
            self.precision.as_ref().map(|p| p - &v),
        );
        let mut acc = Self::one(k).with_precision(&rel);
        if rel.is_positive() && !r.has_no_terms() {
            let minus_r = r.neg_series().with_precision(&rel);
            let mut pw = Self::one(k);
            loop {
                pw = pw.checked_mul(&minus_r)?.with_precision(&rel);
                if pw.has_no_terms() {
                    break;
                }
                acc = acc.checked_add(&pw)?;
            }
        }
        Ok(acc.scale(&cinv).shift(&-v))
    }

    /// Non-negative integer power.
    pub fn pow(&self, e: u64) -> Self {
        let mut acc = Self::one(&self.field);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Integer power; negative exponents invert with absolute target
    /// precision `target`.
    pub fn powi(&self, e: i64, target: &Rat) -> Result<Self, NovikovError> {
        if e >= 0 {
            Ok(self.pow(e as u64))
        } else {
            let inv = self.invert(target)?;
            Ok(inv.pow(e.unsigned_abs()))
        }
    }

    /// Applies a coefficient map into another field.
    pub fn map_coeffs<G: Field>(
        &self,
        target: &G,
        mut f: impl FnMut(&F::Elem) -> Result<G::Elem, CoeffError>,
    ) -> Result<NovikovSeries<G>, CoeffError> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (e, c) in &self.terms {
            terms.push((e.clone(), f(c)?));
        }
        Ok(NovikovSeries::new(target.clone(), terms, self.precision.clone()))
    }

    /// Exponents rendered as a compact string, e.g. `2T^(1/2) - T^3 + O(T^5)`.
    pub fn format(&self) -> String {
        let mut parts: Vec<String> = Vec::new();
        for (e, c) in &self.terms {
            let cs = self.field.format_elem(c);
            let cs = if cs.contains(['+', ' ']) || cs.chars().skip(1).any(|ch| ch == '-') {
                format!("({cs})")
            } else {
                cs
            };
            let t = if e.is_zero() {
                String::new()
            } else if e.is_one() {
                "T".to_string()
            } else if e.is_integer() && !e.is_negative() {
                format!("T^{e}")
            } else {
                format!("T^({e})")
            };
            parts.push(match (cs.as_str(), t.is_empty()) {
                (_, true) => cs.clone(),
                ("1", false) => t,
                ("-1", false) => format!("-{t}"),
                _ => format!("{cs}{t}"),
            });
        }
        if let Some(p) = &self.precision {
            parts.push(format!("O(T^({p}))"));
        }
        if parts.is_empty() {
            return "0".into();
        }
        let mut s = parts[0].clone();
        for p in &parts[1..] {
            if let Some(rest) = p.strip_prefix('-') {
                s.push_str(" - ");
                s.push_str(rest);
            } else {
                s.push_str(" + ");
                s.push_str(p);
            }
        }
        s
    }

    /// `{"terms": [{"exp": "a/b", "coeff": ...}], "precision": "p" | null}`.
    pub fn to_json(&self) -> Value {
        json!({
            "terms": self.terms.iter().map(|(e, c)| json!({
                "exp": e.to_string(),
                "coeff": self.field.elem_to_json(c),
            })).collect::<Vec<_>>(),
            "precision": self.precision.as_ref().map(|p| p.to_string()),
        })
    }

    pub fn from_json(field: &F, v: &Value) -> Result<Self, NovikovError> {
        let bad = || NovikovError::Parse(v.to_string());
        let terms = v.get("terms").and_then(Value::as_array).ok_or_else(bad)?;
        let mut out = Vec::with_capacity(terms.len());
        for t in terms {
            let e = parse_rat_value(t.get("exp").ok_or_else(bad)?).ok_or_else(bad)?;
            let c = field.elem_from_json(t.get("coeff").ok_or_else(bad)?)?;
            out.push((e, c));
        }
        let precision = match v.get("precision") {
            None | Some(Value::Null) => None,
            Some(p) => Some(parse_rat_value(p).ok_or_else(bad)?),
        };
        Ok(Self::new(field.clone(), out, precision))
    }
}

impl<F: Field> NovikovSeries<F> {
    /// Parses text such as `2T^(1/2) - (1/3)T + 5 + O(T^4)`.  Coefficients
    /// are rationals mapped into `field`.
    pub fn parse(field: &F, text: &str) -> Result<Self, NovikovError> {
        let bad = || NovikovError::Parse(text.to_string());
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(bad());
        }
        // split into signed summands at top-level '+' / '-'
        let mut summands: Vec<(bool, String)> = Vec::new();
        let mut depth = 0i32;
        let mut cur = String::new();
        let mut neg = false;
        for (i, ch) in s.chars().enumerate() {
            match ch {
                '(' => depth += 1,
                ')' => depth -= 1,
                _ => {}
            }
            let after_caret = cur.ends_with('^');
            if (ch == '+' || ch == '-') && depth == 0 && !after_caret {
                if i > 0 {
                    if cur.is_empty() {
                        return Err(bad());
                    }
                    summands.push((neg, std::mem::take(&mut cur)));
                }
                neg = ch == '-';
                continue;
            }
            cur.push(ch);
        }
        if cur.is_empty() {
            return Err(bad());
        }
        summands.push((neg, cur));
        let strip = |x: &str| -> String { x.trim_start_matches('(').trim_end_matches(')').to_string() };
        let mut terms = Vec::new();
        let mut precision = None;
        for (neg, body) in summands {
            if let Some(inner) = body.strip_prefix("O(").and_then(|b| b.strip_suffix(')')) {
                let e = inner.strip_prefix("T^").map(strip).unwrap_or_else(|| if inner == "T" { "1".into() } else { String::new() });
                precision = Some(e.parse::<Rat>().map_err(|_| bad())?);
                continue;
            }
            let (cpart, epart) = match body.find('T') {
                Some(pos) => {
                    let rest = &body[pos + 1..];
                    let e = if rest.is_empty() {
                        Rat::one()
                    } else {
                        let r = rest.strip_prefix('^').ok_or_else(bad)?;
                        strip(r).parse::<Rat>().map_err(|_| bad())?
                    };
                    (body[..pos].trim_end_matches('*').to_string(), e)
                }
                None => (body.clone(), Rat::zero()),
            };
            let c = if cpart.is_empty() { Rat::one() } else { strip(&cpart).parse::<Rat>().map_err(|_| bad())? };
            let c = if neg { -c } else { c };
            let ce = field.from_rat(&c).ok_or_else(bad)?;
            terms.push((epart, ce));
        }
        Ok(Self::new(field.clone(), terms, precision))
    }
}

/// Reads a rational from a JSON string `"a/b"` or an integer.
pub fn parse_rat_value(v: &Value) -> Option<Rat> {
    match v {
        Value::String(s) => s.parse().ok(),
        Value::Number(n) => n.as_i64().map(Rat::from_int),
        _ => None,
    }
}

impl NovikovSeries<NumberField> {
    /// Coefficientwise reduction into characteristic `p` along `red`.
    pub fn reduce_mod_p(&self, red: &NfReduction) -> Result<NovikovSeries<FiniteField>, CoeffError> {
        self.map_coeffs(&red.target, |c| red.reduce(c))
    }
}

/// Reduces a series over a cyclotomic field modulo `p`, using the fixed
/// reduction of its coefficient field.
pub fn reduce_series_mod_p(
    s: &NovikovSeries<NumberField>,
    p: u64,
) -> Result<NovikovSeries<FiniteField>, CoeffError> {
    let red = s.field().reduction(p)?;
    s.reduce_mod_p(&red)
}

impl<F: Field> fmt::Debug for NovikovSeries<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format())
    }
}

impl<F: Field> fmt::Display for NovikovSeries<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format())
    }
}

impl<F: Field> Add for &NovikovSeries<F> {
    type Output = NovikovSeries<F>;
    /// Panics on mismatched coefficient fields; see `checked_add`.
    fn add(self, o: &NovikovSeries<F>) -> NovikovSeries<F> {
        self.checked_add(o).expect("series over the same field")
    }
}

impl<F: Field> Sub for &NovikovSeries<F> {
    type Output = NovikovSeries<F>;
    fn sub(self, o: &NovikovSeries<F>) -> NovikovSeries<F> {
        self.checked_sub(o).expect("series over the same field")
    }
}

impl<F: Field> Mul for &NovikovSeries<F> {
    type Output = NovikovSeries<F>;
    fn mul(self, o: &NovikovSeries<F>) -> NovikovSeries<F> {
        self.checked_mul(o).expect("series over the same field")
    }
}

impl<F: Field> Neg for &NovikovSeries<F> {
    type Output = NovikovSeries<F>;
    fn neg(self) -> NovikovSeries<F> {
        self.neg_series()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::QField;

    type S = NovikovSeries<QField>;

    fn r(a: i64, b: i64) -> Rat {
        Rat::new(a, b)
    }

    fn s(terms: &[(i64, i64, i64)]) -> S {
        S::new(QField, terms.iter().map(|&(n, d, c)| (r(n, d), Rat::from_int(c))), None)
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(S::zero(&QField).valuation().unwrap(), None);
        assert_eq!(s(&[(1, 2, 2), (3, 1, -1)]).valuation().unwrap(), Some(r(1, 2)));
        assert!(matches!(
            S::big_o(&QField, r(2, 1)).valuation(),
            Err(NovikovError::IndeterminateValuation(_))
        ));
    }

    #[test]
    fn ring_examples() {
        let a = s(&[(1, 1, 1), (2, 1, 1)]);
        let b = s(&[(1, 1, -1)]);
        assert_eq!(&a + &b, s(&[(2, 1, 1)]));
        let c = s(&[(0, 1, 1), (1, 1, 1)]);
        let d = s(&[(0, 1, 1), (1, 1, -1)]);
        assert_eq!(&c * &d, s(&[(0, 1, 1), (2, 1, -1)]));
    }

    #[test]
    fn invert_examples() {
        let one = S::one(&QField);
        assert_eq!(one.invert(&r(5, 1)).unwrap(), one);
        let t = s(&[(1, 2, 1)]);
        assert_eq!(t.invert(&r(3, 1)).unwrap(), s(&[(-1, 2, 1)]));
        let u = s(&[(0, 1, 1), (1, 1, -1)]);
        let inv = u.invert(&r(3, 1)).unwrap();
        assert_eq!(inv, S::new(QField, [(r(0, 1), Rat::one()), (r(1, 1), Rat::one()), (r(2, 1), Rat::one())], Some(r(3, 1))));
    }

    #[test]
    fn truncate_and_rescale() {
        let x = s(&[(0, 1, 1), (1, 1, 1), (5, 1, 1)]);
        assert_eq!(x.truncate(&r(2, 1)), s(&[(0, 1, 1), (1, 1, 1)]));
        assert_eq!(x.truncate(&r(7, 1)), x);
        assert_eq!(s(&[(1, 1, 1)]).rescale_p(3), s(&[(1, 3, 1)]));
    }

    #[test]
    fn reduce_example() {
        let k = NumberField::rationals();
        let x = NovikovSeries::new(k.clone(), [(r(0, 1), k.one()), (r(1, 1), k.from_rational(&r(1, 2)))], None);
        let red = reduce_series_mod_p(&x, 7).unwrap();
        assert_eq!(red.terms()[1].1, vec![4]);
        assert!(reduce_series_mod_p(&x, 2).is_err());
    }

    #[test]
    fn json_round_trip() {
        let x = S::new(QField, [(r(1, 2), r(3, 4)), (r(2, 1), r(-1, 1))], Some(r(7, 2)));
        assert_eq!(S::from_json(&QField, &x.to_json()).unwrap(), x);
        assert_eq!(x.to_string(), "3/4T^(1/2) - T^2 + O(T^(7/2))");
    }
}
