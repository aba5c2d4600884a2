//! Laurent polynomials in `y_1, ..., y_n` with Novikov-series coefficients.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::coeff::{CoeffError, Field, Rat};
use crate::novikov::{NovikovError, NovikovSeries};

/// `sum_a C_a y^a` with finitely many nonzero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NovikovLaurentPoly<F: Field> {
    field: F,
    nvars: usize,
    terms: BTreeMap<Vec<i64>, NovikovSeries<F>>,
}

impl<F: Field> NovikovLaurentPoly<F> {
    pub fn new(field: &F, nvars: usize) -> Self {
        NovikovLaurentPoly { field: field.clone(), nvars, terms: BTreeMap::new() }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Adds `c y^a`, merging with an existing monomial and dropping exact
    /// zeros.
    pub fn add_term(&mut self, a: Vec<i64>, c: NovikovSeries<F>) {
        assert_eq!(a.len(), self.nvars);
        let merged = match self.terms.remove(&a) {
            Some(old) => &old + &c,
            None => c,
        };
        if !merged.is_exact_zero() {
            self.terms.insert(a, merged);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &NovikovSeries<F>)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, a: &[i64]) -> Option<&NovikovSeries<F>> {
        self.terms.get(a)
    }

    /// `y_i dW/dy_i`: every coefficient multiplied by the `i`-th exponent.
    pub fn log_derivative(&self, i: usize) -> Self {
        let mut out = Self::new(&self.field, self.nvars);
        for (a, c) in &self.terms {
            if a[i] != 0 {
                out.add_term(a.clone(), c.scale(&self.field.from_int(a[i])));
            }
        }
        out
    }

    pub fn log_derivatives(&self) -> Vec<Self> {
        (0..self.nvars).map(|i| self.log_derivative(i)).collect()
    }

    /// Coefficientwise map into another field.
    pub fn map_field<G: Field>(
        &self,
        target: &G,
        mut f: impl FnMut(&F::Elem) -> Result<G::Elem, CoeffError>,
    ) -> Result<NovikovLaurentPoly<G>, CoeffError> {
        let mut out = NovikovLaurentPoly::new(target, self.nvars);
        for (a, c) in &self.terms {
            out.add_term(a.clone(), c.map_coeffs(target, &mut f)?);
        }
        Ok(out)
    }

    /// Values `C_a eta^a` of every monomial, each to absolute precision at
    /// least `z` when `eta` is exact.  Negative powers are expanded from the
    /// normalized form `eta_l = c_l T^{w_l} (1 + delta_l)`.
    pub fn monomial_values(
        &self,
        eta: &[NovikovSeries<F>],
        z: &Rat,
    ) -> Result<Vec<(Vec<i64>, NovikovSeries<F>)>, NovikovError> {
        let k = &self.field;
        let mut lead = Vec::with_capacity(self.nvars);
        let mut unit = Vec::with_capacity(self.nvars);
        for e in eta {
            let (w, c) = e.leading().cloned().ok_or(NovikovError::NotInvertible)?;
            let ci = k.inv(&c).ok_or(NovikovError::NotInvertible)?;
            lead.push((w.clone(), c));
            unit.push(e.shift(&-&w).scale(&ci));
        }
        let term_val = |a: &[i64], c: &NovikovSeries<F>| -> Option<Rat> {
            let v = c.val_lower_bound()?;
            Some(a.iter().zip(&lead).fold(v, |acc, (&ai, (w, _))| &acc + &(w * &Rat::from_int(ai))))
        };
        let vmin = self
            .terms
            .iter()
            .filter_map(|(a, c)| term_val(a, c))
            .min()
            .unwrap_or_else(|| z.clone());
        let rel = Rat::max(&(z - &vmin), &Rat::one());
        // exact monomial factors stay exact; everything else is cut at `rel`
        let cap = |s: NovikovSeries<F>| -> NovikovSeries<F> {
            if s.is_exact() && s.terms().len() <= 1 {
                s
            } else {
                s.with_precision(&rel)
            }
        };
        let mut pos_pows: Vec<Vec<NovikovSeries<F>>> = Vec::with_capacity(self.nvars);
        let mut neg_pows: Vec<Vec<NovikovSeries<F>>> = Vec::with_capacity(self.nvars);
        for u in &unit {
            let u = cap(u.clone());
            let ui = cap(u.invert(&rel)?);
            pos_pows.push(vec![NovikovSeries::one(k), u]);
            neg_pows.push(vec![NovikovSeries::one(k), ui]);
        }
        let mut out = Vec::with_capacity(self.terms.len());
        for (a, c) in &self.terms {
            let mut val = NovikovSeries::one(k);
            let mut coeff = k.one();
            let mut shift = Rat::zero();
            for (l, &al) in a.iter().enumerate() {
                if al == 0 {
                    continue;
                }
                let table = if al > 0 { &mut pos_pows[l] } else { &mut neg_pows[l] };
                let e = al.unsigned_abs() as usize;
                while table.len() <= e {
                    let next = cap(&table[table.len() - 1] * &table[1]);
                    table.push(next);
                }
                val = cap(&val * &table[e]);
                coeff = k.mul(&coeff, &k.powi(&lead[l].1, al).expect("nonzero leading coefficient"));
                shift = &shift + &(&lead[l].0 * &Rat::from_int(al));
            }
            let mono = val.scale(&coeff).shift(&shift);
            out.push((a.clone(), c * &mono));
        }
        Ok(out)
    }

    /// `W(eta)` to absolute precision at least `z` for exact `eta`.
    pub fn evaluate(&self, eta: &[NovikovSeries<F>], z: &Rat) -> Result<NovikovSeries<F>, NovikovError> {
        let vals = self.monomial_values(eta, z)?;
        let sum = vals.iter().fold(NovikovSeries::zero(&self.field), |acc, (_, v)| &acc + v);
        Ok(if sum.is_exact() { sum } else { sum.with_precision(z) })
    }

    /// Human-readable form such as `y1 + T^(1/2)y2^-1`.
    pub fn format(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (a, c) in &self.terms {
            let mono: Vec<String> = a
                .iter()
                .enumerate()
                .filter(|(_, &e)| e != 0)
                .map(|(i, &e)| {
                    let name = if self.nvars == 1 { "y".to_string() } else { format!("y{}", i + 1) };
                    if e == 1 {
                        name
                    } else {
                        format!("{name}^{e}")
                    }
                })
                .collect();
            let cs = c.format();
            let cs = if c.terms().len() > 1 || !c.is_exact() { format!("({cs})") } else { cs };
            parts.push(match (mono.is_empty(), cs.as_str()) {
                (true, _) => cs.clone(),
                (false, "1") => mono.join("*"),
                (false, _) => format!("{cs}*{}", mono.join("*")),
            });
        }
        parts.join(" + ")
    }

    pub fn to_json(&self) -> Value {
        json!(self
            .terms
            .iter()
            .map(|(a, c)| json!({"exponent": a, "coeff": c.to_json()}))
            .collect::<Vec<_>>())
    }
}
