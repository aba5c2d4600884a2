//! Finite-dimensional unital algebras over a Novikov field, presented by
//! structure constants in a fixed basis.

use serde_json::{json, Value};

use crate::coeff::{Field, NumberField, Rat};
use crate::novikov::{Matrix, NovikovSeries};
use crate::potential::CriticalSet;

use super::SemisimpleError;

/// An element as its coordinate vector in the fixed basis.
pub type Element<F> = Vec<NovikovSeries<F>>;

/// `table[i][j]` holds the coordinates of `x_i * x_j`.
#[derive(Clone, Debug)]
pub struct AlgebraOverNovikov<F: Field> {
    field: F,
    labels: Vec<String>,
    table: Vec<Vec<Element<F>>>,
    unit: Element<F>,
    commutative: bool,
}

fn agrees<F: Field>(a: &[NovikovSeries<F>], b: &[NovikovSeries<F>]) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).has_no_terms())
}

impl<F: Field> AlgebraOverNovikov<F> {
    /// Validates shapes, the unit axioms and associativity on all basis
    /// triples, each to the stored precision.
    pub fn new(
        field: F,
        labels: Vec<String>,
        table: Vec<Vec<Element<F>>>,
        unit: Element<F>,
    ) -> Result<Self, SemisimpleError> {
        let m = labels.len();
        if m == 0 {
            return Err(SemisimpleError::Shape("algebra has no basis".into()));
        }
        let shape_ok = table.len() == m
            && unit.len() == m
            && table.iter().all(|row| row.len() == m && row.iter().all(|c| c.len() == m));
        if !shape_ok {
            return Err(SemisimpleError::Shape(format!("structure constants must be {m} x {m} x {m}")));
        }
        let commutative = (0..m).all(|i| (0..i).all(|j| agrees(&table[i][j], &table[j][i])));
        let alg = AlgebraOverNovikov { field, labels, table, unit, commutative };
        for j in 0..m {
            let xj = alg.basis_vector(j);
            if !agrees(&alg.mul(&alg.unit, &xj), &xj) || !agrees(&alg.mul(&xj, &alg.unit), &xj) {
                return Err(SemisimpleError::UnitAxiom { index: j });
            }
        }
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    let left = alg.mul(&alg.table[i][j], &alg.basis_vector(k));
                    let right = alg.mul(&alg.basis_vector(i), &alg.table[j][k]);
                    if !agrees(&left, &right) {
                        return Err(SemisimpleError::NotAssociative { i, j, k });
                    }
                }
            }
        }
        Ok(alg)
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn unit(&self) -> &Element<F> {
        &self.unit
    }

    pub fn structure_constants(&self) -> &[Vec<Element<F>>] {
        &self.table
    }

    pub fn is_commutative(&self) -> bool {
        self.commutative
    }

    pub fn zero_element(&self) -> Element<F> {
        vec![NovikovSeries::zero(&self.field); self.dim()]
    }

    pub fn basis_vector(&self, i: usize) -> Element<F> {
        let mut v = self.zero_element();
        v[i] = NovikovSeries::one(&self.field);
        v
    }

    pub fn mul(&self, a: &[NovikovSeries<F>], b: &[NovikovSeries<F>]) -> Element<F> {
        let mut out = self.zero_element();
        for (i, ai) in a.iter().enumerate() {
            if ai.is_exact_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if bj.is_exact_zero() {
                    continue;
                }
                let c = ai * bj;
                for (o, t) in out.iter_mut().zip(&self.table[i][j]) {
                    if !t.is_exact_zero() {
                        *o = &*o + &(&c * t);
                    }
                }
            }
        }
        out
    }

    /// Matrix of `x -> a * x`: column `j` holds the coordinates of `a * x_j`.
    pub fn mult_operator(&self, a: &[NovikovSeries<F>]) -> Matrix<F> {
        let m = self.dim();
        let mut mat = vec![vec![NovikovSeries::zero(&self.field); m]; m];
        for j in 0..m {
            let col = self.mul(a, &self.basis_vector(j));
            for (k, c) in col.into_iter().enumerate() {
                mat[k][j] = c;
            }
        }
        mat
    }

    /// `l(x) = max_i -v(x_i)` over coordinates with a known leading term;
    /// `None` when no coordinate has one.
    pub fn valuation(&self, x: &[NovikovSeries<F>]) -> Option<Rat> {
        x.iter().filter_map(|c| c.leading().map(|(v, _)| -v)).max()
    }

    /// The same algebra with coefficients pushed through a field map.
    pub fn map_coeffs<G: Field>(
        &self,
        target: &G,
        f: impl Fn(&NovikovSeries<F>) -> Result<NovikovSeries<G>, SemisimpleError>,
    ) -> Result<AlgebraOverNovikov<G>, SemisimpleError> {
        let map_elem = |e: &Element<F>| e.iter().map(&f).collect::<Result<Vec<_>, _>>();
        let table = self
            .table
            .iter()
            .map(|row| row.iter().map(map_elem).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        let unit = map_elem(&self.unit)?;
        Ok(AlgebraOverNovikov {
            field: target.clone(),
            labels: self.labels.clone(),
            table,
            unit,
            commutative: self.commutative,
        })
    }

    /// The split algebra `Lambda^m` with orthogonal idempotent basis.
    pub fn diagonal(field: &F, m: usize) -> Self {
        let labels = (1..=m).map(|i| format!("e{i}")).collect();
        let zero = vec![NovikovSeries::zero(field); m];
        let table = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| {
                        let mut v = zero.clone();
                        if i == j {
                            v[i] = NovikovSeries::one(field);
                        }
                        v
                    })
                    .collect()
            })
            .collect();
        let unit = vec![NovikovSeries::one(field); m];
        AlgebraOverNovikov { field: field.clone(), labels, table, unit, commutative: true }
    }

    /// `Lambda[x]/(x^{n+1} - T)` in the basis `1, x, ..., x^n`.
    pub fn quantum_cpn(field: &F, n: usize) -> Self {
        let m = n + 1;
        let labels = (0..m)
            .map(|i| match i {
                0 => "1".to_string(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            })
            .collect();
        let table = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| {
                        let mut v = vec![NovikovSeries::zero(field); m];
                        let s = i + j;
                        if s < m {
                            v[s] = NovikovSeries::one(field);
                        } else {
                            v[s - m] = NovikovSeries::t_pow(field, Rat::one());
                        }
                        v
                    })
                    .collect()
            })
            .collect();
        let mut unit = vec![NovikovSeries::zero(field); m];
        unit[0] = NovikovSeries::one(field);
        AlgebraOverNovikov { field: field.clone(), labels, table, unit, commutative: true }
    }

    /// The first Chern class element `(n + 1) x` of [`Self::quantum_cpn`].
    pub fn quantum_cpn_c1(field: &F, n: usize) -> Element<F> {
        let mut a = vec![NovikovSeries::zero(field); n + 1];
        let c = NovikovSeries::from_int(field, n as i64 + 1);
        if n == 0 {
            a[0] = &c * &NovikovSeries::t_pow(field, Rat::one());
        } else {
            a[1] = c;
        }
        a
    }

    pub fn element_to_json(&self, x: &[NovikovSeries<F>]) -> Value {
        Value::Array(x.iter().map(|c| Value::String(c.format())).collect())
    }

    pub fn to_json(&self) -> Value {
        let mut products = Vec::new();
        for (i, row) in self.table.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if v.iter().any(|c| !c.is_exact_zero()) {
                    products.push(json!({ "left": i, "right": j, "result": self.element_to_json(v) }));
                }
            }
        }
        json!({
            "field": self.field.describe(),
            "labels": self.labels,
            "unit": self.element_to_json(&self.unit),
            "products": products,
        })
    }
}

/// The diagonal model on a critical set: one idempotent per critical point
/// and the element whose coordinates are the critical values.
pub fn from_critical_set(cs: &CriticalSet) -> (AlgebraOverNovikov<NumberField>, Element<NumberField>) {
    let mut alg = AlgebraOverNovikov::diagonal(&cs.field, cs.points.len());
    alg.labels = (1..=cs.points.len()).map(|i| format!("p{i}")).collect();
    let a = cs.points.iter().map(|p| p.critical_value.clone()).collect();
    (alg, a)
}

/// Reads a series over a number field: a string such as `"2T^(1/2) + 1"`, a
/// number, or the JSON record form.
pub fn parse_series(k: &NumberField, v: &Value) -> Result<NovikovSeries<NumberField>, SemisimpleError> {
    let bad = |m: &str| SemisimpleError::Parse(m.to_string());
    match v {
        Value::String(s) => {
            let q = crate::coeff::QField;
            let r = NovikovSeries::parse(&q, s).map_err(|e| bad(&e.to_string()))?;
            Ok(r.map_coeffs(k, |c| Ok(k.from_rational(c)))?)
        }
        Value::Number(_) => parse_series(k, &Value::String(v.to_string())),
        Value::Object(_) => NovikovSeries::from_json(k, v).map_err(|e| bad(&e.to_string())),
        _ => Err(bad("series must be a string, number or object")),
    }
}

fn parse_element(k: &NumberField, v: &Value, m: usize) -> Result<Element<NumberField>, SemisimpleError> {
    let arr = v.as_array().ok_or_else(|| SemisimpleError::Parse("element must be an array".into()))?;
    if arr.len() != m {
        return Err(SemisimpleError::Parse(format!("element must have {m} coordinates")));
    }
    arr.iter().map(|c| parse_series(k, c)).collect()
}

/// Parses the field name `Q`, `Q(i)` or `Q(zeta_m)`.
pub fn parse_number_field(name: &str) -> Result<NumberField, SemisimpleError> {
    let s: String = name.chars().filter(|c| !c.is_whitespace()).collect();
    match s.as_str() {
        "Q" => return Ok(NumberField::rationals()),
        "Q(i)" => return Ok(NumberField::gaussian()),
        _ => {}
    }
    s.strip_prefix("Q(zeta_")
        .and_then(|r| r.strip_suffix(')'))
        .and_then(|m| m.parse::<u64>().ok())
        .filter(|&m| m >= 1)
        .map(NumberField::cyclotomic)
        .ok_or_else(|| SemisimpleError::Parse(format!("unknown field {name}")))
}

/// Reads an algebra document:
/// `{"field": "Q", "labels": [...], "unit": [...], "products": [{"left", "right", "result"}], "element": [...]}`.
/// Unlisted products are zero.  Coefficients are series strings such as `"2T^(1/2) + 1"`.
pub fn parse_algebra(
    text: &str,
) -> Result<(AlgebraOverNovikov<NumberField>, Option<Element<NumberField>>), SemisimpleError> {
    let bad = |m: String| SemisimpleError::Parse(m);
    let doc: Value = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
    let k = parse_number_field(doc.get("field").and_then(Value::as_str).unwrap_or("Q"))?;
    let labels: Vec<String> = doc
        .get("labels")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing labels".into()))?
        .iter()
        .map(|l| l.as_str().map(str::to_string).ok_or_else(|| bad("labels must be strings".into())))
        .collect::<Result<_, _>>()?;
    let m = labels.len();
    let unit = parse_element(&k, doc.get("unit").ok_or_else(|| bad("missing unit".into()))?, m)?;
    let mut table = vec![vec![vec![NovikovSeries::zero(&k); m]; m]; m];
    for p in doc.get("products").and_then(Value::as_array).ok_or_else(|| bad("missing products".into()))? {
        let idx = |key: &str| {
            p.get(key)
                .and_then(Value::as_u64)
                .map(|x| x as usize)
                .filter(|&x| x < m)
                .ok_or_else(|| bad(format!("product needs a valid '{key}' index")))
        };
        let (i, j) = (idx("left")?, idx("right")?);
        table[i][j] = parse_element(&k, p.get("result").ok_or_else(|| bad("product needs 'result'".into()))?, m)?;
    }
    let alg = AlgebraOverNovikov::new(k.clone(), labels, table, unit)?;
    let element = doc.get("element").map(|e| parse_element(&k, e, m)).transpose()?;
    Ok((alg, element))
}
