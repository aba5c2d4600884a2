//! Filtered Floer–Novikov complexes: validation, barcodes, boundary depth,
//! total bar length, spectral invariants, persistence ranks, bottleneck
//! distance and quasiequivalences.
//!
//! A complex has finitely many generators `p` with actions `l(p)` and
//! `Z/2` degrees; column `p` of the differential lists `d p = sum_q d_qp q`.
//! The filtration level of a chain `sum a_q q` is `max_q (l(q) - v(a_q))`.

pub mod barcode;
pub mod bottleneck;
pub mod quasi;
pub mod random;

use std::collections::HashMap;

use serde_json::{json, Value};
use thiserror::Error;

use crate::coeff::{CoeffError, Field, FiniteField, QField, Rat};
use crate::novikov::linalg::{self, Matrix};
use crate::novikov::{parse_rat_value, LinalgError, NovikovError, NovikovSeries};

pub use barcode::{Barcode, BarInterval, SpectralValue};
pub use bottleneck::{bottleneck_distance, Bottleneck};
pub use quasi::{check_quasiequivalence, QuasiViolation};

#[derive(Debug, Error)]
pub enum FilteredError {
    #[error("invalid complex: {0}")]
    Invalid(Violation),
    #[error("chain is not closed")]
    NotClosed,
    #[error("differential does not preserve the span of generators below an action level")]
    NotActionMonotone,
    #[error("chain length {got} does not match {expected} generators")]
    ChainLength { expected: usize, got: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Novikov(#[from] NovikovError),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
}

/// The first condition a complex violates, with witnesses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// The differential is not `n x n`.
    Shape { rows: usize, cols: usize, generators: usize },
    /// `(d^2)_{row,col}` is nonzero.
    SquareNonzero { row: String, col: String },
    /// A term of `d from` reaches level `level` above what the mode allows.
    ActionIncrease { from: String, to: String, level: Rat },
    /// `d_{to,from}` is nonzero but `deg(to) != deg(from) - 1`.
    Degree { from: String, to: String },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::Shape { rows, cols, generators } => {
                write!(f, "differential is {rows}x{cols} for {generators} generators")
            }
            Violation::SquareNonzero { row, col } => write!(f, "d^2 has a nonzero entry at ({row}, {col})"),
            Violation::ActionIncrease { from, to, level } => {
                write!(f, "term {to} of d{from} sits at level {level}, not below the action of {from}")
            }
            Violation::Degree { from, to } => write!(f, "d{from} has a component along {to} of the wrong degree"),
        }
    }
}

/// Strict complexes require every term of `d p` strictly below `l(p)`;
/// verbose ones allow equality and hence zero-length bars.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Strict,
    Verbose,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Strict => "strict",
            Mode::Verbose => "verbose",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub label: String,
    /// Degree modulo 2.
    pub degree: u8,
    pub action: Rat,
}

impl Generator {
    pub fn new(label: impl Into<String>, degree: i64, action: Rat) -> Self {
        Generator { label: label.into(), degree: degree.rem_euclid(2) as u8, action }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FilteredComplex<F: Field> {
    field: F,
    gens: Vec<Generator>,
    d: Matrix<F>,
    mode: Mode,
}

impl<F: Field> FilteredComplex<F> {
    /// Builds and validates a complex.
    pub fn new(field: &F, gens: Vec<Generator>, d: Matrix<F>, mode: Mode) -> Result<Self, FilteredError> {
        let c = Self::new_unchecked(field, gens, d, mode);
        c.validate().map_err(FilteredError::Invalid)?;
        Ok(c)
    }

    /// Builds a complex without validation; see [`FilteredComplex::validate`].
    pub fn new_unchecked(field: &F, gens: Vec<Generator>, d: Matrix<F>, mode: Mode) -> Self {
        FilteredComplex { field: field.clone(), gens, d, mode }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn differential(&self) -> &Matrix<F> {
        &self.d
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn actions(&self) -> Vec<Rat> {
        self.gens.iter().map(|g| g.action.clone()).collect()
    }

    /// Checks shape, `d^2 = 0` to the stored precision, the grading shift
    /// and the action condition of the mode.
    pub fn validate(&self) -> Result<(), Violation> {
        let n = self.gens.len();
        let cols = self.d.first().map_or(0, Vec::len);
        if self.d.len() != n || self.d.iter().any(|r| r.len() != n) {
            return Err(Violation::Shape { rows: self.d.len(), cols, generators: n });
        }
        for p in 0..n {
            for q in 0..n {
                let x = &self.d[q][p];
                if x.has_no_terms() {
                    continue;
                }
                let (from, to) = (&self.gens[p], &self.gens[q]);
                if (to.degree + 1) % 2 != from.degree {
                    return Err(Violation::Degree { from: from.label.clone(), to: to.label.clone() });
                }
                let level = &to.action - &x.leading().unwrap().0;
                let ok = match self.mode {
                    Mode::Strict => level < from.action,
                    Mode::Verbose => level <= from.action,
                };
                if !ok {
                    return Err(Violation::ActionIncrease { from: from.label.clone(), to: to.label.clone(), level });
                }
            }
        }
        let sq = linalg::mat_mul(&self.field, &self.d, &self.d);
        for (q, row) in sq.iter().enumerate() {
            for (p, x) in row.iter().enumerate() {
                if !x.has_no_terms() {
                    return Err(Violation::SquareNonzero {
                        row: self.gens[q].label.clone(),
                        col: self.gens[p].label.clone(),
                    });
                }
            }
        }
        Ok(())
    }

    /// The differential in the basis `T^{l(p)} p` of level-zero generators:
    /// `N_qp = d_qp T^{l(p) - l(q)}`.
    pub fn normalized_matrix(&self) -> Matrix<F> {
        let n = self.gens.len();
        (0..n)
            .map(|q| {
                (0..n)
                    .map(|p| {
                        let x = &self.d[q][p];
                        if x.is_exact_zero() {
                            x.clone()
                        } else {
                            x.shift(&(&self.gens[p].action - &self.gens[q].action))
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// Filtration level `max_q (l(q) - v(a_q))`; `None` for the zero chain.
    pub fn level(&self, chain: &[NovikovSeries<F>]) -> Result<Option<Rat>, FilteredError> {
        self.check_chain(chain)?;
        let mut best: Option<Rat> = None;
        for (g, a) in self.gens.iter().zip(chain) {
            if let Some(v) = a.valuation()? {
                let l = &g.action - &v;
                best = Some(match best {
                    None => l,
                    Some(b) => Rat::max(&b, &l),
                });
            }
        }
        Ok(best)
    }

    /// `d chain`.
    pub fn apply(&self, chain: &[NovikovSeries<F>]) -> Result<Vec<NovikovSeries<F>>, FilteredError> {
        self.check_chain(chain)?;
        Ok(linalg::mat_vec(&self.field, &self.d, chain))
    }

    fn check_chain(&self, chain: &[NovikovSeries<F>]) -> Result<(), FilteredError> {
        if chain.len() != self.gens.len() {
            return Err(FilteredError::ChainLength { expected: self.gens.len(), got: chain.len() });
        }
        Ok(())
    }

    /// Same differential with new actions; used for perturbations.
    pub fn with_actions(&self, actions: &[Rat], mode: Mode) -> Result<Self, FilteredError> {
        let gens = self
            .gens
            .iter()
            .zip(actions)
            .map(|(g, a)| Generator { action: a.clone(), ..g.clone() })
            .collect();
        Self::new(&self.field, gens, self.d.clone(), mode)
    }

    /// Actions negated and the differential transposed.
    pub fn opposite(&self) -> Self {
        let n = self.gens.len();
        let gens = self
            .gens
            .iter()
            .map(|g| Generator { label: g.label.clone(), degree: (g.degree + 1) % 2, action: -&g.action })
            .collect();
        let d = linalg::transpose(&self.field, &self.d, n, n);
        Self::new_unchecked(&self.field, gens, d, self.mode)
    }

    pub fn to_json(&self) -> Value {
        let n = self.gens.len();
        let mut entries = Vec::new();
        for p in 0..n {
            for q in 0..n {
                if !self.d[q][p].is_exact_zero() {
                    entries.push(json!({
                        "from": self.gens[p].label,
                        "to": self.gens[q].label,
                        "series": self.d[q][p].format(),
                    }));
                }
            }
        }
        json!({
            "field": self.field.describe(),
            "mode": self.mode.as_str(),
            "generators": self.gens.iter().map(|g| json!({
                "label": g.label, "degree": g.degree, "action": g.action.to_string(),
            })).collect::<Vec<_>>(),
            "differential": entries,
        })
    }
}

/// A parsed complex over one of the supported coefficient fields.
#[derive(Clone, Debug)]
pub enum AnyComplex {
    Rational(FilteredComplex<QField>),
    Prime(FilteredComplex<FiniteField>),
}

/// Reads the JSON complex format:
///
/// ```json
/// {"field": "Q" | "F_5", "mode": "strict" | "verbose",
///  "generators": [{"label": "x", "degree": 1, "action": "1/2"}],
///  "differential": [{"from": "x", "to": "y", "series": "T^(1/2)"}]}
/// ```
pub fn parse_complex(text: &str) -> Result<AnyComplex, FilteredError> {
    let v: Value = serde_json::from_str(text).map_err(|e| FilteredError::Parse(e.to_string()))?;
    let field = v.get("field").and_then(Value::as_str).unwrap_or("Q");
    if field == "Q" {
        return Ok(AnyComplex::Rational(parse_complex_over(&QField, &v)?));
    }
    let p = field
        .strip_prefix("F_")
        .or_else(|| field.strip_prefix("GF(").and_then(|s| s.strip_suffix(')')))
        .and_then(|s| s.parse::<u64>().ok())
        .ok_or_else(|| FilteredError::Parse(format!("unknown field {field}")))?;
    let k = FiniteField::prime(p)?;
    Ok(AnyComplex::Prime(parse_complex_over(&k, &v)?))
}

fn parse_complex_over<F: Field>(k: &F, v: &Value) -> Result<FilteredComplex<F>, FilteredError> {
    let bad = |m: &str| FilteredError::Parse(m.to_string());
    let mode = match v.get("mode").and_then(Value::as_str).unwrap_or("strict") {
        "strict" => Mode::Strict,
        "verbose" => Mode::Verbose,
        other => return Err(bad(&format!("unknown mode {other}"))),
    };
    let gens_v = v.get("generators").and_then(Value::as_array).ok_or_else(|| bad("missing generators"))?;
    let mut gens = Vec::with_capacity(gens_v.len());
    let mut index = HashMap::new();
    for g in gens_v {
        let label = g.get("label").and_then(Value::as_str).ok_or_else(|| bad("generator without label"))?;
        let degree = g.get("degree").and_then(Value::as_i64).ok_or_else(|| bad("generator without degree"))?;
        let action = g.get("action").and_then(parse_rat_value).ok_or_else(|| bad("generator without action"))?;
        if index.insert(label.to_string(), gens.len()).is_some() {
            return Err(bad(&format!("duplicate label {label}")));
        }
        gens.push(Generator::new(label, degree, action));
    }
    let n = gens.len();
    let mut d = linalg::zeros(k, n, n);
    if let Some(entries) = v.get("differential") {
        let entries = entries.as_array().ok_or_else(|| bad("differential must be a list"))?;
        for e in entries {
            let look = |key: &str| -> Result<usize, FilteredError> {
                let l = e.get(key).and_then(Value::as_str).ok_or_else(|| bad(&format!("entry without {key}")))?;
                index.get(l).copied().ok_or_else(|| bad(&format!("unknown generator {l}")))
            };
            let (p, q) = (look("from")?, look("to")?);
            let s = match e.get("series") {
                Some(Value::String(s)) => NovikovSeries::parse(k, s)?,
                Some(obj @ Value::Object(_)) => NovikovSeries::from_json(k, obj)?,
                _ => return Err(bad("entry without series")),
            };
            d[q][p] = &d[q][p] + &s;
        }
    }
    FilteredComplex::new(k, gens, d, mode)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> NovikovSeries<QField> {
        NovikovSeries::parse(&QField, s).unwrap()
    }

    #[test]
    fn series_text_round_trip() {
        for s in ["2T^(1/2) - T^3 + O(T^(5))", "T", "-T^(-1/2) + 5", "(1/3)T^2"] {
            let x = q(s);
            assert_eq!(q(&x.format()), x, "{s}");
        }
    }

    #[test]
    fn validation_modes() {
        let gens = vec![Generator::new("x", 1, Rat::one()), Generator::new("y", 0, Rat::zero())];
        let mut d = linalg::zeros(&QField, 2, 2);
        d[1][0] = q("T");
        assert!(FilteredComplex::new(&QField, gens.clone(), d.clone(), Mode::Strict).is_ok());
        d[1][0] = q("T^-2");
        let c = FilteredComplex::new_unchecked(&QField, gens.clone(), d.clone(), Mode::Verbose);
        assert!(matches!(c.validate(), Err(Violation::ActionIncrease { .. })));
        // level l(y) - v(1) = 0 < 1
        d[1][0] = q("1");
        assert!(FilteredComplex::new(&QField, gens.clone(), d.clone(), Mode::Strict).is_ok());
        let g2 = vec![Generator::new("x", 1, Rat::zero()), Generator::new("y", 0, Rat::zero())];
        assert!(FilteredComplex::new(&QField, g2.clone(), d.clone(), Mode::Strict).is_err());
        assert!(FilteredComplex::new(&QField, g2, d, Mode::Verbose).is_ok());
    }

    #[test]
    fn square_violation() {
        let gens = vec![
            Generator::new("x", 0, Rat::from_int(2)),
            Generator::new("y", 1, Rat::one()),
            Generator::new("z", 0, Rat::zero()),
        ];
        let mut d = linalg::zeros(&QField, 3, 3);
        d[1][0] = q("1");
        d[2][1] = q("1");
        let c = FilteredComplex::new_unchecked(&QField, gens, d, Mode::Strict);
        assert!(matches!(c.validate(), Err(Violation::SquareNonzero { .. })));
    }

    #[test]
    fn parses_complex_file() {
        let text = r#"{"field": "F_3", "generators": [
            {"label": "x", "degree": 1, "action": "1/2"},
            {"label": "y", "degree": 0, "action": 0}],
            "differential": [{"from": "x", "to": "y", "series": "T^(1/2)"}]}"#;
        match parse_complex(text).unwrap() {
            AnyComplex::Prime(c) => {
                assert_eq!(c.len(), 2);
                assert_eq!(c.field().characteristic(), 3);
            }
            AnyComplex::Rational(_) => panic!("expected F_3"),
        }
        assert!(parse_complex("{").is_err());
    }
}
