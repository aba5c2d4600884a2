//! Roots of univariate polynomials with Novikov coefficients.
//!
//! The lower Newton polygon of `{(k, v(f_k))}` gives the root valuations
//! (minus the edge slopes); each edge contributes an initial polynomial over
//! the coefficient field whose roots are the leading coefficients.  Simple
//! initial roots are lifted by Newton's method with precision tracking;
//! a repeated initial root is handled by shifting to it and solving again
//! for the roots of higher valuation.

use thiserror::Error;

use crate::coeff::{poly, CoeffError, Field, Rat, RootFinding, SplittingCatalog};

use super::series::{NovikovError, NovikovSeries};

#[derive(Debug, Error)]
pub enum PuiseuxError {
    #[error("polynomial has the root 0")]
    ZeroRoot,
    #[error("polynomial is constant")]
    Constant,
    #[error("repeated root at valuation {valuation}")]
    RepeatedRoot { valuation: Rat },
    #[error("roots need a field of degree above {budget}")]
    FieldBudgetExceeded { budget: usize },
    #[error("a coefficient is not resolved at its stored precision")]
    PrecisionInsufficient,
    #[error("Newton iteration did not converge")]
    NewtonStalled,
    #[error(transparent)]
    Novikov(#[from] NovikovError),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
}

/// All roots of a polynomial, in the field where they were found.
#[derive(Clone, Debug)]
pub struct PuiseuxRoots<F: Field> {
    pub field: F,
    /// Each root is exact or known to absolute precision `z`.
    pub roots: Vec<NovikovSeries<F>>,
}

/// Lower convex hull of points sorted by abscissa.
fn lower_hull(pts: &[(usize, Rat)]) -> Vec<(usize, Rat)> {
    let mut hull: Vec<(usize, Rat)> = Vec::new();
    for p in pts {
        while hull.len() >= 2 {
            let (a, b) = (&hull[hull.len() - 2], &hull[hull.len() - 1]);
            // drop b when it lies on or above segment a -> p
            let lhs = &(&b.1 - &a.1) * &Rat::from_int((p.0 - a.0) as i64);
            let rhs = &(&p.1 - &a.1) * &Rat::from_int((b.0 - a.0) as i64);
            if lhs >= rhs {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p.clone());
    }
    hull
}

fn horner<F: Field>(k: &F, f: &[NovikovSeries<F>], x: &NovikovSeries<F>) -> NovikovSeries<F> {
    let mut acc = NovikovSeries::zero(k);
    for c in f.iter().rev() {
        acc = &(&acc * x) + c;
    }
    acc
}

/// Formal derivative, lowest degree first.
pub fn derivative<F: Field>(k: &F, f: &[NovikovSeries<F>]) -> Vec<NovikovSeries<F>> {
    f.iter().enumerate().skip(1).map(|(i, c)| c.scale(&k.from_int(i as i64))).collect()
}

/// Maximum nesting of cluster refinements in [`polynomial_roots`].
const MAX_CLUSTER_DEPTH: usize = 32;

/// Value of the line through `a` with slope `slope` at abscissa `i`.
fn line_at(a: &(usize, Rat), slope: &Rat, i: usize) -> Rat {
    &a.1 + &(slope * &Rat::from_int(i as i64 - a.0 as i64))
}

/// `f(s + y)` as a polynomial in `y`, by repeated synthetic division.
fn taylor_shift<F: Field>(f: &[NovikovSeries<F>], s: &NovikovSeries<F>) -> Vec<NovikovSeries<F>> {
    let mut h = f.to_vec();
    let n = h.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            h[j] = &h[j] + &(s * &h[j + 1]);
        }
    }
    h
}

/// Distinct roots of `g` in `k` with multiplicities, or `None` when `g`
/// does not split.
fn split_initial<F: RootFinding>(k: &F, g: &[F::Elem]) -> Option<Vec<(F::Elem, usize)>> {
    let mut out = Vec::new();
    let mut total = 0;
    for c in k.roots(g) {
        let lin = vec![k.neg(&c), k.one()];
        let mut q = g.to_vec();
        let mut m = 0;
        loop {
            let (quot, rem) = poly::divrem(k, &q, &lin);
            if rem.iter().any(|r| !k.is_zero(r)) {
                break;
            }
            q = quot;
            m += 1;
        }
        total += m;
        out.push((c, m));
    }
    (total + 1 == g.len()).then_some(out)
}

/// Roots of `f` with valuation strictly above `floor` (all roots when
/// `floor` is `None`), counted with multiplicity, to absolute precision
/// `z`.  Roots whose initial terms coincide are separated by shifting to
/// the common initial term and recursing.  `None` when some initial
/// polynomial does not split over `k`.
fn roots_in<F: RootFinding>(
    k: &F,
    f: &[NovikovSeries<F>],
    z: &Rat,
    floor: Option<&Rat>,
    depth: usize,
) -> Result<Option<Vec<NovikovSeries<F>>>, PuiseuxError> {
    let zeros = f.iter().take_while(|c| c.is_exact_zero()).count();
    let mut out = vec![NovikovSeries::zero(k); zeros];
    let f = &f[zeros..];
    if f.is_empty() || f[0].has_no_terms() {
        return Err(PuiseuxError::PrecisionInsufficient);
    }
    let pts: Vec<(usize, Rat)> =
        f.iter().enumerate().filter_map(|(i, c)| c.leading().map(|(v, _)| (i, v.clone()))).collect();
    let hull = lower_hull(&pts);
    // edges (left vertex, right vertex, root valuation) with valuation above the floor
    let mut edges: Vec<(usize, usize, Rat)> = Vec::new();
    for w in hull.windows(2) {
        let val = -&(&(&w[1].1 - &w[0].1) * &Rat::new(1, (w[1].0 - w[0].0) as i64));
        if floor.map_or(true, |fl| &val > fl) {
            edges.push((w[0].0, w[1].0, val));
        } else {
            break;
        }
    }
    let end = edges.last().map_or(0, |e| e.1);
    let end_pt = hull.iter().find(|p| p.0 == end).expect("edge endpoint is a vertex").clone();
    // unresolved coefficients must lie strictly above the relevant polygon
    for (i, c) in f.iter().enumerate() {
        if !c.has_no_terms() || c.is_exact() {
            continue;
        }
        let b = c.val_lower_bound().expect("inexact series has a horizon");
        let bound = if i <= end {
            match hull.windows(2).find(|w| w[0].0 <= i && i <= w[1].0) {
                Some(w) => line_at(&w[0], &(&(&w[1].1 - &w[0].1) * &Rat::new(1, (w[1].0 - w[0].0) as i64)), i),
                None => continue,
            }
        } else {
            match floor {
                Some(fl) => line_at(&end_pt, &-fl, i),
                None => continue,
            }
        };
        if b <= bound {
            return Err(PuiseuxError::PrecisionInsufficient);
        }
    }
    let df = derivative(k, f);
    for (a, b, val) in edges {
        let base = &pts.iter().find(|p| p.0 == a).expect("vertex").1 + &(&val * &Rat::from_int(a as i64));
        let mut g = vec![k.zero(); b - a + 1];
        for (i, v) in &pts {
            if *i >= a && *i <= b && &(v + &(&val * &Rat::from_int(*i as i64))) == &base {
                g[i - a] = f[*i].leading().expect("resolved").1.clone();
            }
        }
        let Some(initial) = split_initial(k, &g) else { return Ok(None) };
        for (c, m) in initial {
            let start = NovikovSeries::monomial(k, c, val.clone());
            if m == 1 {
                out.push(newton_root(k, f, &df, start, z)?);
                continue;
            }
            if depth >= MAX_CLUSTER_DEPTH {
                return Err(PuiseuxError::RepeatedRoot { valuation: val });
            }
            let h = taylor_shift(f, &start);
            let Some(sub) = roots_in(k, &h, z, Some(&val), depth + 1)? else { return Ok(None) };
            if sub.len() != m {
                return Err(PuiseuxError::PrecisionInsufficient);
            }
            out.extend(sub.iter().map(|y| &start + y));
        }
    }
    Ok(Some(out))
}

/// Roots of `sum f_k x^k` (lowest degree first) to absolute precision `z`,
/// adjoining initial roots from `extensions(budget)`.  Exactly repeated
/// roots are reported as [`PuiseuxError::RepeatedRoot`].
pub fn polynomial_roots<F: SplittingCatalog>(
    f: &[NovikovSeries<F>],
    z: &Rat,
    budget: usize,
) -> Result<PuiseuxRoots<F>, PuiseuxError> {
    let k = f.first().ok_or(PuiseuxError::Constant)?.field().clone();
    let deg = f.iter().rposition(|c| !c.has_no_terms()).ok_or(PuiseuxError::Constant)?;
    if deg == 0 {
        return Err(PuiseuxError::Constant);
    }
    if f[0].is_exact_zero() {
        return Err(PuiseuxError::ZeroRoot);
    }
    if f[deg + 1..].iter().any(|c| !c.is_exact()) {
        return Err(PuiseuxError::PrecisionInsufficient);
    }
    let f = &f[..=deg];
    for ext in k.extensions(budget) {
        let fe: Vec<NovikovSeries<F>> =
            f.iter().map(|c| c.map_coeffs(&ext, |x| Ok(k.embed_into(&ext, x)))).collect::<Result<_, _>>()?;
        let Some(mut roots) = roots_in(&ext, &fe, z, None, 0)? else { continue };
        if roots.len() != deg {
            return Err(PuiseuxError::PrecisionInsufficient);
        }
        for (i, a) in roots.iter().enumerate() {
            for b in &roots[..i] {
                if a.is_exact() && b.is_exact() && a == b {
                    let valuation = a.leading().map_or_else(Rat::zero, |l| l.0.clone());
                    return Err(PuiseuxError::RepeatedRoot { valuation });
                }
            }
        }
        roots.sort_by(|a, b| {
            let va = a.leading().map(|x| x.0.clone());
            let vb = b.leading().map(|x| x.0.clone());
            va.cmp(&vb).then_with(|| a.format().cmp(&b.format()))
        });
        return Ok(PuiseuxRoots { field: ext, roots });
    }
    Err(PuiseuxError::FieldBudgetExceeded { budget })
}

/// Newton iteration for a simple root of `f` starting at `start`; returns
/// the root exactly or to absolute precision `z`.
pub fn newton_root<F: Field>(
    k: &F,
    f: &[NovikovSeries<F>],
    df: &[NovikovSeries<F>],
    start: NovikovSeries<F>,
    z: &Rat,
) -> Result<NovikovSeries<F>, PuiseuxError> {
    let mut x = start;
    let mut best: Option<Rat> = None;
    let mut stalls = 0;
    for _ in 0..64 {
        let fx = horner(k, f, &x);
        if fx.is_exact_zero() {
            return Ok(x);
        }
        let dfx = horner(k, df, &x);
        let vd = dfx.leading().ok_or(PuiseuxError::NewtonStalled)?.0.clone();
        // |x - root| = |f(x)| / |f'(x)|
        if fx.certified_val_at_least(&(z + &vd)) {
            return Ok(x.with_precision(z));
        }
        if fx.has_no_terms() {
            // f is known only to its stored horizon; the root is pinned to
            // horizon - v(f'), which must still resolve the leading term
            let reach = &fx.val_lower_bound().expect("inexact") - &vd;
            let lead = x.leading().map_or_else(Rat::zero, |l| l.0.clone());
            if reach <= lead {
                return Err(PuiseuxError::PrecisionInsufficient);
            }
            return Ok(x.with_precision(&reach));
        }
        let vf = fx.val_lower_bound().unwrap_or_else(|| z + &vd);
        if best.as_ref().map_or(false, |b| &vf <= b) {
            stalls += 1;
            if stalls > 4 {
                return Err(PuiseuxError::NewtonStalled);
            }
        } else {
            best = Some(vf);
            stalls = 0;
        }
        let target = &(z + &Rat::one()) + &vd.abs();
        let step = &fx * &dfx.invert(&target)?;
        x = (&x - &step).with_precision(&(z + &Rat::one())).exact_part();
    }
    Err(PuiseuxError::NewtonStalled)
}
