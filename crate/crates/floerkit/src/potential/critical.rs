//! Critical points of Laurent potentials as truncated Puiseux series.
//!
//! 1. Candidate valuation vectors `w` come from tropical balancing: for
//!    every log-derivative `F_i = y_i dW/dy_i` the minimum of
//!    `v(C_a) + <a, w>` over its monomials must be attained twice.
//! 2. The initial system over the residue field is solved exactly.  For
//!    binomial systems `z^A = s` the integer diagonalization `P A Q = D`
//!    reduces it to `x_k^{d_k} = (s^P)_k` and `z = x^Q`; one variable
//!    allows arbitrary initial polynomials.  Cyclotomic fields from the
//!    catalog are tried in order until every initial root is rational.
//! 3. Newton's method in logarithmic coordinates `y <- y (1 + e)`,
//!    `J e = -F`, lifts each root until `v(F_i(eta)) >= Z` is certified
//!    by precision-tracked evaluation.

use std::collections::BTreeSet;

use serde_json::{json, Value};

use crate::coeff::{catalog_fields, Field, NumberField, Rat, RootFinding};
use crate::novikov::linalg::{self, Matrix};
use crate::novikov::NovikovSeries;
use crate::polytope::hull;
use crate::polytope::{solve_square, Polytope};

use super::laurent::NovikovLaurentPoly;
use super::lattice::{diagonalize, int_det};
use super::PotentialError;

/// Default degree budget for adjoined roots.
pub const DEFAULT_FIELD_BUDGET: usize = 8;

/// A lifted critical point.
#[derive(Clone, Debug, PartialEq)]
pub struct CriticalPoint {
    /// Coordinates `eta_i` as exact Puiseux polynomials.
    pub eta: Vec<NovikovSeries<NumberField>>,
    /// Certified residual bound: `v(y_i dW/dy_i (eta)) >= precision`.
    pub precision: Rat,
    pub val_vector: Vec<Rat>,
    /// Inside/outside flag, set by [`classify_inside`].
    pub inside: Option<bool>,
    pub critical_value: NovikovSeries<NumberField>,
    /// Valuation of the log-Hessian determinant; `None` when degenerate
    /// or unresolved (see `hessian_status`).
    pub hessian_val: Option<Rat>,
    pub hessian_status: HessianStatus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HessianStatus {
    Nondegenerate,
    Degenerate,
    PrecisionInsufficient,
}

impl HessianStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            HessianStatus::Nondegenerate => "nondegenerate",
            HessianStatus::Degenerate => "degenerate",
            HessianStatus::PrecisionInsufficient => "precision_insufficient",
        }
    }
}

/// A problem met while solving; partial data is still reported.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveIssue {
    pub kind: IssueKind,
    pub val_vector: Vec<Rat>,
    pub detail: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IssueKind {
    JacobianDegenerateAtLeadingOrder,
    NonBinomialInitialSystem,
    NonIsolatedValuation,
    NewtonStalled,
}

impl IssueKind {
    pub fn as_str(self) -> &'static str {
        match self {
            IssueKind::JacobianDegenerateAtLeadingOrder => "jacobian_degenerate_at_leading_order",
            IssueKind::NonBinomialInitialSystem => "non_binomial_initial_system",
            IssueKind::NonIsolatedValuation => "non_isolated_valuation",
            IssueKind::NewtonStalled => "newton_stalled",
        }
    }
}

/// All critical points found, with the field they live in.
#[derive(Clone, Debug)]
pub struct CriticalSet {
    pub field: NumberField,
    /// The potential with coefficients moved into `field`.
    pub potential: NovikovLaurentPoly<NumberField>,
    pub points: Vec<CriticalPoint>,
    pub issues: Vec<SolveIssue>,
    pub precision: Rat,
    /// `n! Vol` of the Newton polytope of the potential.
    pub kouchnirenko_bound: u64,
    /// Least common denominator of every exponent of every coordinate.
    pub exponent_denominator: u64,
}

impl CriticalSet {
    /// True when nothing went wrong and the count meets the Kouchnirenko
    /// bound.
    pub fn saturated(&self) -> bool {
        self.issues.is_empty() && self.points.len() as u64 == self.kouchnirenko_bound
    }

    pub fn etas(&self) -> Vec<Vec<NovikovSeries<NumberField>>> {
        self.points.iter().map(|p| p.eta.clone()).collect()
    }
}

struct Term {
    a: Vec<i64>,
    v: Rat,
}

fn dot(a: &[i64], w: &[Rat]) -> Rat {
    a.iter().zip(w).map(|(&x, y)| y * &Rat::from_int(x)).sum()
}

/// Candidate valuation vectors from tropical balancing of every `F_i`.
fn tropical_candidates(terms: &[Term], n: usize) -> Vec<Vec<Rat>> {
    let supports: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..terms.len()).filter(|&j| terms[j].a[i] != 0).collect())
        .collect();
    let mut eqs: BTreeSet<(Vec<Rat>, Rat)> = BTreeSet::new();
    for sup in &supports {
        for (x, &j) in sup.iter().enumerate() {
            for &k in &sup[x + 1..] {
                let row: Vec<Rat> = terms[j].a.iter().zip(&terms[k].a).map(|(p, q)| Rat::from_int(p - q)).collect();
                let rhs = &terms[k].v - &terms[j].v;
                let neg: (Vec<Rat>, Rat) = (row.iter().map(|r| -r).collect(), -&rhs);
                if !eqs.contains(&neg) {
                    eqs.insert((row, rhs));
                }
            }
        }
    }
    let eqs: Vec<(Vec<Rat>, Rat)> = eqs.into_iter().collect();
    let mut found: BTreeSet<Vec<Rat>> = BTreeSet::new();
    for sub in hull::subsets(eqs.len(), n) {
        let m: Vec<Vec<Rat>> = sub.iter().map(|&e| eqs[e].0.clone()).collect();
        let b: Vec<Rat> = sub.iter().map(|&e| eqs[e].1.clone()).collect();
        if let Some(w) = solve_square(m, b) {
            found.insert(w);
        }
    }
    found
        .into_iter()
        .filter(|w| {
            supports.iter().all(|sup| {
                let vals: Vec<Rat> = sup.iter().map(|&j| &terms[j].v + &dot(&terms[j].a, w)).collect();
                let min = vals.iter().min().cloned();
                match min {
                    None => true,
                    Some(m) => vals.iter().filter(|x| **x == m).count() >= 2,
                }
            })
        })
        .collect()
}

/// Initial roots at one valuation vector.
enum InitialRoots {
    Roots(Vec<Vec<Vec<Rat>>>),
    /// The field does not contain all initial roots.
    NotSplit,
    Issue(IssueKind, String),
}

fn initial_roots(
    k: &NumberField,
    w_poly: &NovikovLaurentPoly<NumberField>,
    w: &[Rat],
) -> InitialRoots {
    let n = w_poly.nvars();
    let terms: Vec<(Vec<i64>, Rat, Vec<Rat>)> = w_poly
        .terms()
        .map(|(a, c)| {
            let (v, lc) = c.leading().cloned().expect("nonzero coefficient");
            (a.clone(), v, lc)
        })
        .collect();
    let tval = |t: &(Vec<i64>, Rat, Vec<Rat>)| &t.1 + &dot(&t.0, w);
    let mins: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            let sup: Vec<usize> = (0..terms.len()).filter(|&j| terms[j].0[i] != 0).collect();
            let m = sup.iter().map(|&j| tval(&terms[j])).min().unwrap();
            sup.into_iter().filter(|&j| tval(&terms[j]) == m).collect()
        })
        .collect();
    if n == 1 {
        let s = &mins[0];
        let lo = s.iter().map(|&j| terms[j].0[0]).min().unwrap();
        let hi = s.iter().map(|&j| terms[j].0[0]).max().unwrap();
        let mut poly = vec![k.zero(); (hi - lo) as usize + 1];
        for &j in s {
            let (a, _, c) = &terms[j];
            poly[(a[0] - lo) as usize] = k.mul(&k.from_int(a[0]), c);
        }
        let sf = crate::coeff::poly::squarefree_part(k, &poly);
        let expected = crate::coeff::poly::degree(k, &sf).unwrap_or(0);
        let roots = k.roots(&poly);
        if roots.len() < expected {
            return InitialRoots::NotSplit;
        }
        return InitialRoots::Roots(roots.into_iter().map(|r| vec![r]).collect());
    }
    if mins.iter().any(|s| s.len() != 2) {
        return InitialRoots::Issue(
            IssueKind::NonBinomialInitialSystem,
            "an initial equation has more than two leading monomials".into(),
        );
    }
    // z^{a_j - a_k} = -(a_{k,i} c_k) / (a_{j,i} c_j)
    let mut amat = Vec::with_capacity(n);
    let mut s = Vec::with_capacity(n);
    for (i, pair) in mins.iter().enumerate() {
        let (j, l) = (pair[0], pair[1]);
        amat.push(terms[j].0.iter().zip(&terms[l].0).map(|(x, y)| x - y).collect::<Vec<i64>>());
        let num = k.mul(&k.from_int(terms[l].0[i]), &terms[l].2);
        let den = k.mul(&k.from_int(terms[j].0[i]), &terms[j].2);
        s.push(k.neg(&k.div(&num, &den).unwrap()));
    }
    if int_det(&amat) == 0 {
        return InitialRoots::Issue(IssueKind::NonIsolatedValuation, "singular exponent matrix".into());
    }
    let dg = diagonalize(&amat);
    // y_k = prod_i s_i^{P_ki}; x_k^{d_k} = y_k
    let mut xs: Vec<Vec<Vec<Rat>>> = Vec::with_capacity(n);
    for kk in 0..n {
        let mut y = k.one();
        for (i, si) in s.iter().enumerate() {
            y = k.mul(&y, &k.powi(si, dg.p[kk][i]).unwrap());
        }
        let d = dg.d[kk] as usize;
        let mut poly = vec![k.zero(); d + 1];
        poly[0] = k.neg(&y);
        poly[d] = k.one();
        let r = k.roots(&poly);
        if r.len() < d {
            return InitialRoots::NotSplit;
        }
        xs.push(r);
    }
    // z_l = prod_k x_k^{Q_lk}
    let mut out = Vec::new();
    let mut idx = vec![0usize; n];
    loop {
        let z: Vec<Vec<Rat>> = (0..n)
            .map(|l| {
                (0..n).fold(k.one(), |acc, kk| k.mul(&acc, &k.powi(&xs[kk][idx[kk]], dg.q[l][kk]).unwrap()))
            })
            .collect();
        out.push(z);
        let mut pos = 0;
        loop {
            if pos == n {
                out.sort();
                out.dedup();
                return InitialRoots::Roots(out);
            }
            idx[pos] += 1;
            if idx[pos] < xs[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Log-derivatives and log-Hessian entries assembled from monomial values.
fn residuals_and_jacobian(
    k: &NumberField,
    vals: &[(Vec<i64>, NovikovSeries<NumberField>)],
    n: usize,
) -> (Vec<NovikovSeries<NumberField>>, Matrix<NumberField>) {
    let mut f = vec![NovikovSeries::zero(k); n];
    let mut j = linalg::zeros(k, n, n);
    for (a, v) in vals {
        for i in 0..n {
            if a[i] == 0 {
                continue;
            }
            let vi = v.scale(&k.from_int(a[i]));
            f[i] = &f[i] + &vi;
            for l in 0..n {
                if a[l] != 0 {
                    j[i][l] = &j[i][l] + &vi.scale(&k.from_int(a[l]));
                }
            }
        }
    }
    (f, j)
}

/// The log-Hessian `(y_i d/dy_i)(y_l d/dy_l) W` at `eta` to precision `z`.
pub fn log_hessian(
    w: &NovikovLaurentPoly<NumberField>,
    eta: &[NovikovSeries<NumberField>],
    z: &Rat,
) -> Result<Matrix<NumberField>, PotentialError> {
    let vals = w.monomial_values(eta, z)?;
    Ok(residuals_and_jacobian(w.field(), &vals, w.nvars()).1)
}

/// The log-Hessian and the valuation of its determinant.
#[derive(Clone, Debug)]
pub struct HessianCertificate {
    pub matrix: Matrix<NumberField>,
    pub det: NovikovSeries<NumberField>,
    pub det_valuation: Rat,
}

/// Nondegeneracy certificate at `eta`: fails with `Degenerate` when the
/// determinant is exactly zero and `PrecisionInsufficient` when its
/// leading term is not resolved at precision `z`.
pub fn hessian_certificate(
    w: &NovikovLaurentPoly<NumberField>,
    eta: &[NovikovSeries<NumberField>],
    z: &Rat,
) -> Result<HessianCertificate, PotentialError> {
    let matrix = log_hessian(w, eta, z)?;
    let det = linalg::det(w.field(), &matrix);
    match det.leading() {
        Some((v, _)) => {
            let det_valuation = v.clone();
            Ok(HessianCertificate { matrix, det, det_valuation })
        }
        None if det.is_exact() => Err(PotentialError::Degenerate),
        None => Err(PotentialError::PrecisionInsufficient),
    }
}

/// True when every log-derivative at `eta` has certified valuation `>= z`.
pub fn residual_certified(
    w: &NovikovLaurentPoly<NumberField>,
    eta: &[NovikovSeries<NumberField>],
    z: &Rat,
) -> Result<bool, PotentialError> {
    let vals = w.monomial_values(eta, z)?;
    let (f, _) = residuals_and_jacobian(w.field(), &vals, w.nvars());
    Ok(f.iter().all(|x| x.certified_val_at_least(z)))
}

enum Lifted {
    Point(Vec<NovikovSeries<NumberField>>),
    Issue(IssueKind, String),
}

fn lift(
    w_poly: &NovikovLaurentPoly<NumberField>,
    w: &[Rat],
    z0: &[Vec<Rat>],
    z: &Rat,
) -> Result<Lifted, PotentialError> {
    let k = w_poly.field();
    let n = w_poly.nvars();
    let mut eta: Vec<NovikovSeries<NumberField>> = z0
        .iter()
        .zip(w)
        .map(|(c, wi)| NovikovSeries::monomial(k, c.clone(), wi.clone()))
        .collect();
    // leading valuations of the log-derivatives
    let mu: Vec<Rat> = (0..n)
        .map(|i| {
            w_poly
                .terms()
                .filter(|(a, _)| a[i] != 0)
                .map(|(a, c)| &c.leading().unwrap().0 + &dot(a, w))
                .min()
                .unwrap()
        })
        .collect();
    let t0 = mu.iter().min().unwrap().clone();
    let mut margin = Rat::one();
    let mut best = None::<Rat>;
    let mut stalls = 0;
    for iter in 0..80 {
        let zw = z + &margin;
        let vals = w_poly.monomial_values(&eta, &zw)?;
        let (f, jac) = residuals_and_jacobian(k, &vals, n);
        if f.iter().all(|x| x.certified_val_at_least(z)) {
            return Ok(Lifted::Point(eta));
        }
        if iter == 0 {
            // leading-order Jacobian: coefficient of T^{mu_i} in row i
            let j0: Matrix<NumberField> = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|l| NovikovSeries::constant(k, jac[i][l].coeff(&mu[i])))
                        .collect()
                })
                .collect();
            if linalg::det(k, &j0).has_no_terms() {
                return Ok(Lifted::Issue(
                    IssueKind::JacobianDegenerateAtLeadingOrder,
                    "log-Jacobian is singular at leading order".into(),
                ));
            }
        }
        let low = f.iter().filter_map(|x| x.val_lower_bound()).min().unwrap_or_else(|| zw.clone());
        match &best {
            Some(b) if &low <= b => {
                stalls += 1;
                margin = &margin + &margin;
                if stalls > 6 {
                    return Ok(Lifted::Issue(IssueKind::NewtonStalled, format!("residual stuck at valuation {low}")));
                }
            }
            _ => {
                best = Some(low);
                stalls = 0;
            }
        }
        let neg_f: Vec<NovikovSeries<NumberField>> = f.iter().map(|x| -x).collect();
        let target = &(&zw + &t0.abs()) + &(&t0.abs() + &Rat::one());
        let eps = match linalg::solve(k, &jac, &neg_f, &target) {
            Ok(e) => e,
            Err(e) => return Ok(Lifted::Issue(IssueKind::NewtonStalled, e.to_string())),
        };
        let rel = &zw - &t0;
        eta = eta
            .iter()
            .zip(&eps)
            .zip(w)
            .map(|((y, e), wi)| {
                let one_plus = &NovikovSeries::one(k) + e;
                let cut = wi + &rel;
                (y * &one_plus).with_precision(&cut).exact_part()
            })
            .collect();
    }
    Ok(Lifted::Issue(IssueKind::NewtonStalled, "iteration limit reached".into()))
}

fn lcm(a: u64, b: u64) -> u64 {
    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

/// Complete list of critical points of `w` to residual precision `z`,
/// adjoining roots from the cyclotomic catalog up to degree `budget`.
pub fn critical_points(
    w: &NovikovLaurentPoly<NumberField>,
    z: &Rat,
    budget: usize,
) -> Result<CriticalSet, PotentialError> {
    let n = w.nvars();
    let base = w.field().clone();
    let terms: Vec<Term> = w
        .terms()
        .map(|(a, c)| Term { a: a.clone(), v: c.val_lower_bound().expect("nonzero coefficient") })
        .collect();
    let exps: Vec<Vec<Rat>> = terms.iter().map(|t| t.a.iter().map(|&x| Rat::from_int(x)).collect()).collect();
    let kouchnirenko_bound = hull::normalized_volume(&exps).to_i64().unwrap_or(0) as u64;
    let candidates = tropical_candidates(&terms, n);

    for field in catalog_fields(&base, budget) {
        let wf = w.map_field(&field, |c| Ok(field.embed_from(&base, c).expect("subfield")))?;
        let mut roots: Vec<(Vec<Rat>, Vec<Vec<Rat>>)> = Vec::new();
        let mut issues: Vec<SolveIssue> = Vec::new();
        let mut split = true;
        for cand in &candidates {
            match initial_roots(&field, &wf, cand) {
                InitialRoots::Roots(r) => {
                    for z0 in r {
                        roots.push((cand.clone(), z0));
                    }
                }
                InitialRoots::NotSplit => {
                    split = false;
                    break;
                }
                InitialRoots::Issue(kind, detail) => {
                    issues.push(SolveIssue { kind, val_vector: cand.clone(), detail });
                }
            }
        }
        if !split {
            continue;
        }
        let mut points = Vec::new();
        let mut den = 1u64;
        for (cand, z0) in roots {
            match lift(&wf, &cand, &z0, z)? {
                Lifted::Point(eta) => {
                    for e in &eta {
                        for (x, _) in e.terms() {
                            den = lcm(den, x.denom().try_into().unwrap_or(1));
                        }
                    }
                    let critical_value = wf.evaluate(&eta, z)?;
                    let (hessian_val, hessian_status) = match hessian_certificate(&wf, &eta, z) {
                        Ok(c) => (Some(c.det_valuation), HessianStatus::Nondegenerate),
                        Err(PotentialError::Degenerate) => (None, HessianStatus::Degenerate),
                        Err(PotentialError::PrecisionInsufficient) => (None, HessianStatus::PrecisionInsufficient),
                        Err(e) => return Err(e),
                    };
                    points.push(CriticalPoint {
                        eta,
                        precision: z.clone(),
                        val_vector: cand.clone(),
                        inside: None,
                        critical_value,
                        hessian_val,
                        hessian_status,
                    });
                }
                Lifted::Issue(kind, detail) => {
                    // an exact critical point can still sit on a degenerate root
                    let eta: Vec<NovikovSeries<NumberField>> = z0
                        .iter()
                        .zip(&cand)
                        .map(|(c, wi)| NovikovSeries::monomial(&field, c.clone(), wi.clone()))
                        .collect();
                    if kind == IssueKind::JacobianDegenerateAtLeadingOrder && residual_certified(&wf, &eta, z)? {
                        let critical_value = wf.evaluate(&eta, z)?;
                        let (hessian_val, hessian_status) = match hessian_certificate(&wf, &eta, z) {
                            Ok(c) => (Some(c.det_valuation), HessianStatus::Nondegenerate),
                            Err(PotentialError::Degenerate) => (None, HessianStatus::Degenerate),
                            Err(_) => (None, HessianStatus::PrecisionInsufficient),
                        };
                        points.push(CriticalPoint {
                            eta,
                            precision: z.clone(),
                            val_vector: cand.clone(),
                            inside: None,
                            critical_value,
                            hessian_val,
                            hessian_status,
                        });
                    }
                    issues.push(SolveIssue { kind, val_vector: cand.clone(), detail });
                }
            }
        }
        points.sort_by(|a, b| {
            a.val_vector.cmp(&b.val_vector).then_with(|| {
                let la: Vec<&Vec<Rat>> = a.eta.iter().map(|e| &e.leading().unwrap().1).collect();
                let lb: Vec<&Vec<Rat>> = b.eta.iter().map(|e| &e.leading().unwrap().1).collect();
                la.cmp(&lb)
            })
        });
        return Ok(CriticalSet {
            field,
            potential: wf,
            points,
            issues,
            precision: z.clone(),
            kouchnirenko_bound,
            exponent_denominator: den,
        });
    }
    Err(PotentialError::FieldBudgetExceeded { budget })
}

/// Morse and distinct-value certificates.
#[derive(Clone, Debug)]
pub struct ConvenientCertificate {
    pub morse: bool,
    pub distinct_values: bool,
    /// Precision at which the certificate was decided.
    pub precision: Rat,
    pub critical_set: CriticalSet,
}

/// Maximum number of precision doublings in [`certify_convenient`].
pub const MAX_ESCALATIONS: u32 = 3;

/// Decides whether `w` is Morse with pairwise distinct critical values,
/// doubling the precision while some comparison is unresolved.
pub fn certify_convenient(
    w: &NovikovLaurentPoly<NumberField>,
    z: &Rat,
    budget: usize,
) -> Result<ConvenientCertificate, PotentialError> {
    let mut z = z.clone();
    for _ in 0..=MAX_ESCALATIONS {
        let set = critical_points(w, &z, budget)?;
        let unresolved_hessian = set.points.iter().any(|p| p.hessian_status == HessianStatus::PrecisionInsufficient);
        let morse = set.issues.is_empty() && set.points.iter().all(|p| p.hessian_status == HessianStatus::Nondegenerate);
        let mut distinct = true;
        let mut unresolved = false;
        for (i, a) in set.points.iter().enumerate() {
            for b in &set.points[i + 1..] {
                let d = &a.critical_value - &b.critical_value;
                if d.has_no_terms() {
                    if d.is_exact() {
                        distinct = false;
                    } else {
                        unresolved = true;
                    }
                }
            }
        }
        if (!unresolved || !distinct) && (!unresolved_hessian || !morse) {
            return Ok(ConvenientCertificate { morse, distinct_values: distinct, precision: z, critical_set: set });
        }
        z = &z + &z;
    }
    Err(PotentialError::PrecisionInsufficient)
}

/// Inside/outside partition of critical points of `build_ghv(P, b)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub inside: Vec<usize>,
    pub outside: Vec<usize>,
}

/// Classifies by strict positivity of `l_j(val_vector)`; a vanishing
/// support value is reported as `BoundaryCase`.
pub fn classify_inside(points: &mut [CriticalPoint], p: &Polytope) -> Result<Classification, PotentialError> {
    classify_inside_with_offset(points, p, &vec![Rat::zero(); p.dim()])
}

/// As [`classify_inside`] for a fiber potential at `u`: the valuation
/// vector is shifted by `u` first.
pub fn classify_inside_with_offset(
    points: &mut [CriticalPoint],
    p: &Polytope,
    u: &[Rat],
) -> Result<Classification, PotentialError> {
    let mut inside = Vec::new();
    let mut outside = Vec::new();
    for (idx, pt) in points.iter_mut().enumerate() {
        let shifted: Vec<Rat> = pt.val_vector.iter().zip(u).map(|(a, b)| a + b).collect();
        let l = p.support_values(&shifted);
        if let Some(facet) = l.iter().position(Rat::is_zero) {
            return Err(PotentialError::BoundaryCase { point: idx, facet });
        }
        let is_in = l.iter().all(Rat::is_positive);
        pt.inside = Some(is_in);
        if is_in {
            inside.push(idx);
        } else {
            outside.push(idx);
        }
    }
    Ok(Classification { inside, outside })
}

impl CriticalPoint {
    pub fn to_json(&self) -> Value {
        json!({
            "eta": self.eta.iter().map(|e| e.to_json()).collect::<Vec<_>>(),
            "eta_text": self.eta.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
            "valuations": self.val_vector.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            "inside": self.inside,
            "value": self.critical_value.to_json(),
            "value_text": self.critical_value.to_string(),
            "hessian_val": self.hessian_val.as_ref().map(|v| v.to_string()),
            "hessian_status": self.hessian_status.as_str(),
            "precision": self.precision.to_string(),
        })
    }
}

impl SolveIssue {
    pub fn to_json(&self) -> Value {
        json!({
            "kind": self.kind.as_str(),
            "valuations": self.val_vector.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            "detail": self.detail,
        })
    }
}
