//! Moment polytopes `{u : <u, v_j> >= lambda_j}`: parsing, validation,
//! support functions, vertices, the Delzant condition and the Kouchnirenko
//! bound `n! Vol(conv{v_j})`.

pub mod hull;
pub mod lp;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::coeff::number_field::rational_det;
use crate::coeff::Rat;

use lp::LpOutcome;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolytopeError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("polytope is unbounded in direction {0:?}")]
    Unbounded(Vec<i64>),
    #[error("polytope is empty")]
    Empty,
    #[error("polytope is not full-dimensional")]
    NotFullDimensional,
    #[error("facet {index} has a normal of length {got}, expected {dim}")]
    DimensionMismatch { index: usize, got: usize, dim: usize },
}

/// One inequality `<u, v> >= lambda`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Facet {
    pub v: Vec<i64>,
    pub lambda: Rat,
}

/// A validated bounded, full-dimensional polytope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polytope {
    name: Option<String>,
    dim: usize,
    facets: Vec<Facet>,
    interior_point: Vec<Rat>,
}

#[derive(Deserialize)]
struct PolytopeDoc {
    dim: usize,
    facets: Vec<Facet>,
    #[serde(default)]
    name: Option<String>,
}

/// A vertex together with the indices of the facets active there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub point: Vec<Rat>,
    pub active: Vec<usize>,
}

/// Result of the Delzant check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DelzantReport {
    pub smooth: bool,
    /// Vertices whose active normals do not form a lattice basis.
    pub violations: Vec<Vertex>,
}

fn dot_int(u: &[Rat], v: &[i64]) -> Rat {
    u.iter().zip(v).map(|(a, &b)| a * &Rat::from_int(b)).sum()
}

/// Parses a polytope document `{"dim", "facets": [{"v", "lambda"}], "name"}`.
pub fn parse_polytope(text: &str) -> Result<Polytope, PolytopeError> {
    let doc: PolytopeDoc = serde_json::from_str(text).map_err(|e| PolytopeError::Parse(e.to_string()))?;
    let mut p = Polytope::new(doc.dim, doc.facets)?;
    p.name = doc.name;
    Ok(p)
}

impl Polytope {
    /// Validates boundedness (2n linear programs) and full-dimensionality.
    pub fn new(dim: usize, facets: Vec<Facet>) -> Result<Self, PolytopeError> {
        if dim == 0 {
            return Err(PolytopeError::Parse("dimension must be positive".into()));
        }
        for (index, f) in facets.iter().enumerate() {
            if f.v.len() != dim {
                return Err(PolytopeError::DimensionMismatch { index, got: f.v.len(), dim });
            }
        }
        // A u <= b form: -<u, v_j> <= -lambda_j
        let a: Vec<Vec<Rat>> = facets.iter().map(|f| f.v.iter().map(|&x| Rat::from_int(-x)).collect()).collect();
        let b: Vec<Rat> = facets.iter().map(|f| -&f.lambda).collect();
        for i in 0..dim {
            for s in [1i64, -1] {
                let mut c = vec![Rat::zero(); dim];
                c[i] = Rat::from_int(s);
                match lp::maximize(&c, &a, &b) {
                    LpOutcome::Infeasible => return Err(PolytopeError::Empty),
                    LpOutcome::Unbounded => {
                        let mut dir = vec![0; dim];
                        dir[i] = s;
                        return Err(PolytopeError::Unbounded(dir));
                    }
                    LpOutcome::Optimal { .. } => {}
                }
            }
        }
        // maximize t subject to <u, v_j> - t >= lambda_j, t <= 1
        let mut a2: Vec<Vec<Rat>> = a
            .iter()
            .map(|row| {
                let mut r = row.clone();
                r.push(Rat::one());
                r
            })
            .collect();
        let mut b2 = b.clone();
        let mut cap = vec![Rat::zero(); dim + 1];
        cap[dim] = Rat::one();
        a2.push(cap.clone());
        b2.push(Rat::one());
        let interior_point = match lp::maximize(&cap, &a2, &b2) {
            LpOutcome::Optimal { value, point } if value.is_positive() => point[..dim].to_vec(),
            _ => return Err(PolytopeError::NotFullDimensional),
        };
        Ok(Polytope { name: None, dim, facets, interior_point })
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.name = Some(name.to_string());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn facet_count(&self) -> usize {
        self.facets.len()
    }

    /// Some point of the interior, found by the full-dimensionality LP.
    pub fn interior_point(&self) -> &[Rat] {
        &self.interior_point
    }

    /// `l_j(u) = <u, v_j> - lambda_j` for every facet.
    pub fn support_values(&self, u: &[Rat]) -> Vec<Rat> {
        self.facets.iter().map(|f| &dot_int(u, &f.v) - &f.lambda).collect()
    }

    pub fn is_interior(&self, u: &[Rat]) -> bool {
        self.support_values(u).iter().all(Rat::is_positive)
    }

    /// Vertices from all `n`-subsets of facets whose normals are independent.
    pub fn vertices(&self) -> Vec<Vertex> {
        let n = self.dim;
        let mut out: Vec<Vertex> = Vec::new();
        for sub in hull::subsets(self.facets.len(), n) {
            let m: Vec<Vec<Rat>> = sub
                .iter()
                .map(|&j| self.facets[j].v.iter().map(|&x| Rat::from_int(x)).collect())
                .collect();
            let rhs: Vec<Rat> = sub.iter().map(|&j| self.facets[j].lambda.clone()).collect();
            let Some(u) = solve_square(m, rhs) else { continue };
            let l = self.support_values(&u);
            if l.iter().any(Rat::is_negative) {
                continue;
            }
            if out.iter().any(|v| v.point == u) {
                continue;
            }
            let active = l.iter().enumerate().filter(|(_, x)| x.is_zero()).map(|(j, _)| j).collect();
            out.push(Vertex { point: u, active });
        }
        out.sort_by(|a, b| a.point.cmp(&b.point));
        out
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices().len()
    }

    /// True iff every vertex is simple with active normals of determinant
    /// `+-1`.
    pub fn delzant_check(&self) -> DelzantReport {
        let mut violations = Vec::new();
        for v in self.vertices() {
            let ok = v.active.len() == self.dim && {
                let m: Vec<Vec<Rat>> = v
                    .active
                    .iter()
                    .map(|&j| self.facets[j].v.iter().map(|&x| Rat::from_int(x)).collect())
                    .collect();
                rational_det(m).abs().is_one()
            };
            if !ok {
                violations.push(v);
            }
        }
        DelzantReport { smooth: violations.is_empty(), violations }
    }

    /// `n! Vol(conv{v_j})`, the bound on the number of nondegenerate
    /// critical points of a Laurent polynomial with these exponents.
    pub fn kouchnirenko_bound(&self) -> u64 {
        let pts: Vec<Vec<Rat>> = self
            .facets
            .iter()
            .map(|f| f.v.iter().map(|&x| Rat::from_int(x)).collect())
            .collect();
        hull::normalized_volume(&pts).to_i64().expect("integral normalized volume") as u64
    }

    /// The polytope translated by `t`: `lambda_j -> lambda_j + <t, v_j>`.
    pub fn translate(&self, t: &[Rat]) -> Polytope {
        let facets = self
            .facets
            .iter()
            .map(|f| Facet { v: f.v.clone(), lambda: &f.lambda + &dot_int(t, &f.v) })
            .collect();
        let interior_point = self.interior_point.iter().zip(t).map(|(a, b)| a + b).collect();
        Polytope { name: self.name.clone(), dim: self.dim, facets, interior_point }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "dim": self.dim,
            "facets": self.facets.iter().map(|f| json!({"v": f.v, "lambda": f.lambda.to_string()})).collect::<Vec<_>>(),
        })
    }
}

/// Unique solution of a square rational system, if any.
pub fn solve_square(mut m: Vec<Vec<Rat>>, mut b: Vec<Rat>) -> Option<Vec<Rat>> {
    let n = m.len();
    for c in 0..n {
        let p = (c..n).find(|&r| !m[r][c].is_zero())?;
        m.swap(c, p);
        b.swap(c, p);
        let inv = m[c][c].recip().unwrap();
        for j in c..n {
            m[c][j] = &m[c][j] * &inv;
        }
        b[c] = &b[c] * &inv;
        for r in 0..n {
            if r != c && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                for j in c..n {
                    let t = &f * &m[c][j];
                    m[r][j] = &m[r][j] - &t;
                }
                let t = &f * &b[c];
                b[r] = &b[r] - &t;
            }
        }
    }
    Some(b)
}

/// Preset polytopes shipped with the command-line tool.
pub mod presets {
    use super::*;

    fn facet(v: &[i64], lambda: Rat) -> Facet {
        Facet { v: v.to_vec(), lambda }
    }

    /// The standard simplex of `CP^n`: `u_i >= 0`, `sum u_i <= 1`.
    pub fn cpn(n: usize) -> Polytope {
        let mut facets: Vec<Facet> = (0..n)
            .map(|i| {
                let mut v = vec![0; n];
                v[i] = 1;
                facet(&v, Rat::zero())
            })
            .collect();
        facets.push(facet(&vec![-1; n], Rat::from_int(-1)));
        Polytope::new(n, facets).expect("simplex is valid").with_name(&format!("cp{n}"))
    }

    /// The Hirzebruch surface `F_n` with parameter `alpha` in `(0, 1)`:
    /// normals `(1,0), (0,1), (0,-1), (-1,-n)` and
    /// `lambda = (0, 0, -(1 - alpha), -n)`.
    pub fn hirzebruch(n: i64, alpha: Rat) -> Polytope {
        let facets = vec![
            facet(&[1, 0], Rat::zero()),
            facet(&[0, 1], Rat::zero()),
            facet(&[0, -1], -(&Rat::one() - &alpha)),
            facet(&[-1, -n], Rat::from_int(-n)),
        ];
        Polytope::new(2, facets).expect("Hirzebruch polytope is valid").with_name(&format!("f{n}"))
    }

    /// `CP^1 x CP^1` as the unit square.
    pub fn cp1_x_cp1() -> Polytope {
        let facets = vec![
            facet(&[1, 0], Rat::zero()),
            facet(&[0, 1], Rat::zero()),
            facet(&[-1, 0], Rat::from_int(-1)),
            facet(&[0, -1], Rat::from_int(-1)),
        ];
        Polytope::new(2, facets).expect("square is valid").with_name("cp1xcp1")
    }

    /// Names of the shipped presets.
    pub const NAMES: [&str; 4] = ["cp1", "cp2", "f2", "f4"];

    pub fn by_name(name: &str) -> Option<Polytope> {
        match name {
            "cp1" => Some(cpn(1)),
            "cp2" => Some(cpn(2)),
            "cp3" => Some(cpn(3)),
            "f2" => Some(hirzebruch(2, Rat::new(1, 2))),
            "f4" => Some(hirzebruch(4, Rat::new(1, 2))),
            "cp1xcp1" => Some(cp1_x_cp1()),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(a: i64, b: i64) -> Rat {
        Rat::new(a, b)
    }

    #[test]
    fn parse_cp1_segment() {
        let p = parse_polytope(r#"{"dim":1,"facets":[{"v":[1],"lambda":"0"},{"v":[-1],"lambda":"-1"}]}"#).unwrap();
        let vs: Vec<Vec<Rat>> = p.vertices().into_iter().map(|v| v.point).collect();
        assert_eq!(vs, vec![vec![r(0, 1)], vec![r(1, 1)]]);
        assert_eq!(p.support_values(&[r(1, 2)]), vec![r(1, 2), r(1, 2)]);
    }

    #[test]
    fn unbounded_and_empty_are_rejected() {
        let e = parse_polytope(r#"{"dim":1,"facets":[{"v":[1],"lambda":"0"}]}"#);
        assert!(matches!(e, Err(PolytopeError::Unbounded(_))));
        let e = parse_polytope(r#"{"dim":1,"facets":[{"v":[1],"lambda":"1"},{"v":[-1],"lambda":"0"}]}"#);
        assert!(matches!(e, Err(PolytopeError::Empty)));
        let e = parse_polytope(r#"{"dim":1,"facets":[{"v":[1],"lambda":"0"},{"v":[-1],"lambda":"0"}]}"#);
        assert!(matches!(e, Err(PolytopeError::NotFullDimensional)));
        assert!(matches!(parse_polytope("{"), Err(PolytopeError::Parse(_))));
    }

    #[test]
    fn preset_counts() {
        assert_eq!(presets::cpn(1).kouchnirenko_bound(), 2);
        assert_eq!(presets::cpn(2).kouchnirenko_bound(), 3);
        assert_eq!(presets::cpn(3).kouchnirenko_bound(), 4);
        let f2 = presets::hirzebruch(2, r(1, 2));
        assert_eq!(f2.kouchnirenko_bound(), 4);
        assert_eq!(f2.vertex_count(), 4);
        assert!(f2.delzant_check().smooth);
        assert_eq!(f2.support_values(&[r(1, 2), r(1, 4)]), vec![r(1, 2), r(1, 4), r(1, 4), r(1, 1)]);
        assert_eq!(presets::hirzebruch(4, r(1, 2)).kouchnirenko_bound(), 6);
    }

    #[test]
    fn weighted_projective_plane_is_not_delzant() {
        let p = Polytope::new(
            2,
            vec![
                Facet { v: vec![1, 0], lambda: r(0, 1) },
                Facet { v: vec![0, 1], lambda: r(0, 1) },
                Facet { v: vec![-1, -2], lambda: r(-1, 1) },
            ],
        )
        .unwrap();
        let rep = p.delzant_check();
        assert!(!rep.smooth);
        assert!(!rep.violations.is_empty());
    }
}
