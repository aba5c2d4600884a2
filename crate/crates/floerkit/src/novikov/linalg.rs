//! Dense linear algebra over a Novikov field.
//!
//! Determinants and characteristic polynomials use the division-free
//! Berkowitz recursion, so precision horizons propagate through ring
//! operations only.  Ranks and invariant valuations use elimination with
//! a minimal-valuation pivot; the row update
//! `row_j <- T^{-v(a)} (a row_j - b row_i)` only rescales rows by units of
//! the valuation ring, which leaves every invariant valuation unchanged.

use crate::coeff::{Field, Rat};

use super::series::{NovikovError, NovikovSeries};

pub type Matrix<F> = Vec<Vec<NovikovSeries<F>>>;

/// Errors from linear algebra over truncated series.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("the pivot cannot be resolved at the stored precision")]
    PrecisionInsufficient,
    #[error("matrix is singular")]
    Singular,
    #[error(transparent)]
    Novikov(#[from] NovikovError),
}

pub fn zeros<F: Field>(k: &F, rows: usize, cols: usize) -> Matrix<F> {
    vec![vec![NovikovSeries::zero(k); cols]; rows]
}

pub fn identity<F: Field>(k: &F, n: usize) -> Matrix<F> {
    let mut m = zeros(k, n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = NovikovSeries::one(k);
    }
    m
}

pub fn mat_mul<F: Field>(k: &F, a: &Matrix<F>, b: &Matrix<F>) -> Matrix<F> {
    let n = a.len();
    let inner = b.len();
    let m = if inner == 0 { 0 } else { b[0].len() };
    let mut out = zeros(k, n, m);
    for i in 0..n {
        for l in 0..inner {
            if a[i][l].is_exact_zero() {
                continue;
            }
            for j in 0..m {
                if b[l][j].is_exact_zero() {
                    continue;
                }
                out[i][j] = &out[i][j] + &(&a[i][l] * &b[l][j]);
            }
        }
    }
    out
}

pub fn mat_add<F: Field>(a: &Matrix<F>, b: &Matrix<F>) -> Matrix<F> {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x + y).collect())
        .collect()
}

pub fn mat_sub<F: Field>(a: &Matrix<F>, b: &Matrix<F>) -> Matrix<F> {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x - y).collect())
        .collect()
}

pub fn mat_vec<F: Field>(k: &F, a: &Matrix<F>, v: &[NovikovSeries<F>]) -> Vec<NovikovSeries<F>> {
    a.iter()
        .map(|row| {
            row.iter().zip(v).fold(NovikovSeries::zero(k), |acc, (x, y)| {
                if x.is_exact_zero() || y.is_exact_zero() {
                    acc
                } else {
                    &acc + &(x * y)
                }
            })
        })
        .collect()
}

pub fn transpose<F: Field>(k: &F, a: &Matrix<F>, rows: usize, cols: usize) -> Matrix<F> {
    let mut out = zeros(k, cols, rows);
    for (i, row) in a.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            out[j][i] = x.clone();
        }
    }
    out
}

pub fn is_exact_zero_matrix<F: Field>(a: &Matrix<F>) -> bool {
    a.iter().all(|r| r.iter().all(|x| x.is_exact_zero()))
}

/// Coefficients of `det(x I - A)`, lowest degree first (length `n + 1`).
pub fn charpoly<F: Field>(k: &F, a: &Matrix<F>) -> Vec<NovikovSeries<F>> {
    let n = a.len();
    // Berkowitz: c holds det(x I - A_r) for the leading principal r x r block,
    // highest degree first.
    let mut c: Vec<NovikovSeries<F>> = vec![NovikovSeries::one(k)];
    for r in 0..n {
        // A_{r+1} = [[A_r, S], [R, a_rr]] with R = row r (cols < r), S = col r (rows < r)
        let arr = &a[r][r];
        let rrow: Vec<NovikovSeries<F>> = (0..r).map(|j| a[r][j].clone()).collect();
        let scol: Vec<NovikovSeries<F>> = (0..r).map(|i| a[i][r].clone()).collect();
        // Toeplitz column: 1, -a_rr, -R S, -R A S, -R A^2 S, ...
        let mut col = vec![NovikovSeries::one(k), -arr];
        let mut v = scol;
        let ar: Matrix<F> = (0..r).map(|i| (0..r).map(|j| a[i][j].clone()).collect()).collect();
        for _ in 0..r {
            let dot = rrow
                .iter()
                .zip(&v)
                .fold(NovikovSeries::zero(k), |acc, (x, y)| &acc + &(x * y));
            col.push(-&dot);
            v = mat_vec(k, &ar, &v);
        }
        // new c = Toeplitz(col) * c, length r + 2
        let mut nc = vec![NovikovSeries::zero(k); r + 2];
        for (i, item) in nc.iter_mut().enumerate() {
            for (j, cj) in c.iter().enumerate() {
                if i >= j && i - j < col.len() {
                    *item = &*item + &(&col[i - j] * cj);
                }
            }
        }
        c = nc;
    }
    c.reverse();
    c
}

pub fn det<F: Field>(k: &F, a: &Matrix<F>) -> NovikovSeries<F> {
    let n = a.len();
    let c = charpoly(k, a);
    if n % 2 == 0 {
        c[0].clone()
    } else {
        -&c[0]
    }
}

/// Chooses the entry of minimal valuation among `candidates`, preferring
/// monomials.  Fails when a truncated entry might undercut the choice.
fn choose_pivot<F: Field>(
    m: &Matrix<F>,
    candidates: impl Iterator<Item = (usize, usize)>,
) -> Result<Option<(usize, usize)>, LinalgError> {
    let mut best: Option<(usize, usize, Rat, bool)> = None;
    let mut lowest_unknown: Option<Rat> = None;
    for (i, j) in candidates {
        let x = &m[i][j];
        match x.leading() {
            Some((v, _)) => {
                let mono = x.terms().len() == 1 && x.is_exact();
                let better = match &best {
                    None => true,
                    Some((_, _, bv, bm)) => v < bv || (v == bv && mono && !bm),
                };
                if better {
                    best = Some((i, j, v.clone(), mono));
                }
            }
            None => {
                if let Some(p) = x.precision() {
                    lowest_unknown = Some(match lowest_unknown {
                        None => p.clone(),
                        Some(q) => Rat::min(&q, p),
                    });
                }
            }
        }
    }
    match (best, lowest_unknown) {
        (None, None) => Ok(None),
        (None, Some(_)) => Err(LinalgError::PrecisionInsufficient),
        (Some((i, j, v, _)), u) => {
            if let Some(u) = u {
                if u <= v {
                    return Err(LinalgError::PrecisionInsufficient);
                }
            }
            Ok(Some((i, j)))
        }
    }
}

/// Replaces `row` by `T^{-v(a)} (a row - b piv_row)`, which clears the
/// pivot column; monomial pivots use exact division instead.
fn eliminate_row<F: Field>(
    k: &F,
    row: &mut [NovikovSeries<F>],
    piv_row: &[NovikovSeries<F>],
    col: usize,
) {
    let a = &piv_row[col];
    let b = row[col].clone();
    if b.is_exact_zero() {
        return;
    }
    let (va, ca) = a.leading().cloned().expect("nonzero pivot");
    if a.terms().len() == 1 && a.is_exact() {
        // row <- row - (b / a) piv_row
        let f = b.scale(&k.inv(&ca).unwrap()).shift(&-&va);
        for (x, y) in row.iter_mut().zip(piv_row) {
            if !y.is_exact_zero() {
                *x = &*x - &(&f * y);
            }
        }
    } else {
        let a_n = a.shift(&-&va);
        let b_n = b.shift(&-&va);
        for (x, y) in row.iter_mut().zip(piv_row) {
            let ax = if x.is_exact_zero() { x.clone() } else { &a_n * x };
            let by = if y.is_exact_zero() { y.clone() } else { &b_n * y };
            *x = &ax - &by;
        }
    }
    row[col] = NovikovSeries::zero(k);
}

/// Valuations of the invariant factors (Smith form over the valuation
/// ring), in the order found; their count is the rank.
pub fn invariant_valuations<F: Field>(k: &F, a: &Matrix<F>) -> Result<Vec<Rat>, LinalgError> {
    let mut m: Matrix<F> = a.clone();
    let mut rows: Vec<usize> = (0..m.len()).collect();
    let ncols = if m.is_empty() { 0 } else { m[0].len() };
    let mut cols: Vec<usize> = (0..ncols).collect();
    let mut out = Vec::new();
    loop {
        let cands: Vec<(usize, usize)> = rows
            .iter()
            .flat_map(|&i| cols.iter().map(move |&j| (i, j)))
            .collect();
        let (pi, pj) = match choose_pivot(&m, cands.into_iter())? {
            None => break,
            Some(x) => x,
        };
        out.push(m[pi][pj].leading().unwrap().0.clone());
        let piv_row = m[pi].clone();
        for &i in &rows {
            if i != pi {
                eliminate_row(k, &mut m[i], &piv_row, pj);
            }
        }
        rows.retain(|&i| i != pi);
        cols.retain(|&j| j != pj);
    }
    out.sort();
    Ok(out)
}

/// Row reduction over the valuation ring with the transform recorded.
#[derive(Clone, Debug)]
pub struct RowReduction<F: Field> {
    /// `U` with entries in the valuation ring and unit determinant.
    pub transform: Matrix<F>,
    /// `U A`; its non-pivot rows vanish identically and the pivot rows are
    /// in echelon form.
    pub reduced: Matrix<F>,
    /// `(row, column, valuation)` of each pivot in elimination order.
    pub pivots: Vec<(usize, usize, Rat)>,
}

impl<F: Field> RowReduction<F> {
    /// Rows of `U A` that are zero: their `U`-coordinates measure the
    /// distance to the image of `A`.
    pub fn zero_rows(&self) -> Vec<usize> {
        (0..self.reduced.len()).filter(|i| !self.pivots.iter().any(|p| p.0 == *i)).collect()
    }
}

/// Minimal-valuation pivoting as in [`invariant_valuations`], tracking the
/// row operations: returns `U` with `U A` in reduced form.
pub fn reduce_with_transform<F: Field>(k: &F, a: &Matrix<F>) -> Result<RowReduction<F>, LinalgError> {
    let nrows = a.len();
    let ncols = if a.is_empty() { 0 } else { a[0].len() };
    let id = identity(k, nrows);
    let mut m: Matrix<F> = a
        .iter()
        .zip(&id)
        .map(|(r, u)| r.iter().chain(u.iter()).cloned().collect())
        .collect();
    let mut rows: Vec<usize> = (0..nrows).collect();
    let mut cols: Vec<usize> = (0..ncols).collect();
    let mut pivots = Vec::new();
    loop {
        let cands: Vec<(usize, usize)> = rows
            .iter()
            .flat_map(|&i| cols.iter().map(move |&j| (i, j)))
            .collect();
        let (pi, pj) = match choose_pivot(&m, cands.into_iter())? {
            None => break,
            Some(x) => x,
        };
        pivots.push((pi, pj, m[pi][pj].leading().unwrap().0.clone()));
        let piv_row = m[pi].clone();
        for &i in &rows {
            if i != pi {
                eliminate_row(k, &mut m[i], &piv_row, pj);
            }
        }
        rows.retain(|&i| i != pi);
        cols.retain(|&j| j != pj);
    }
    let reduced = m.iter().map(|r| r[..ncols].to_vec()).collect();
    let transform = m.into_iter().map(|r| r[ncols..].to_vec()).collect();
    Ok(RowReduction { transform, reduced, pivots })
}

pub fn rank<F: Field>(k: &F, a: &Matrix<F>) -> Result<usize, LinalgError> {
    Ok(invariant_valuations(k, a)?.len())
}

/// Solves the square system `A x = b` by minimal-valuation pivoting,
/// inverting pivots to absolute precision `target`.
pub fn solve<F: Field>(
    k: &F,
    a: &Matrix<F>,
    b: &[NovikovSeries<F>],
    target: &Rat,
) -> Result<Vec<NovikovSeries<F>>, LinalgError> {
    let n = a.len();
    let mut m: Matrix<F> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let mut piv_cols = Vec::with_capacity(n);
    let mut used = vec![false; n];
    for _ in 0..n {
        let cands: Vec<(usize, usize)> = (0..n)
            .filter(|&i| !used[i])
            .flat_map(|i| (0..n).filter(|j| !piv_cols.iter().any(|&(_, c)| c == *j)).map(move |j| (i, j)))
            .collect();
        let (pi, pj) = choose_pivot(&m, cands.into_iter())?.ok_or(LinalgError::Singular)?;
        let inv = m[pi][pj].invert(target)?;
        let row: Vec<NovikovSeries<F>> = m[pi].iter().map(|x| if x.is_exact_zero() { x.clone() } else { x * &inv }).collect();
        m[pi] = row.clone();
        for i in 0..n {
            if i != pi && !m[i][pj].is_exact_zero() {
                let f = m[i][pj].clone();
                for j in 0..=n {
                    if !row[j].is_exact_zero() {
                        m[i][j] = &m[i][j] - &(&f * &row[j]);
                    }
                }
                m[i][pj] = NovikovSeries::zero(k);
            }
        }
        used[pi] = true;
        piv_cols.push((pi, pj));
    }
    let mut x = vec![NovikovSeries::zero(k); n];
    for (pi, pj) in piv_cols {
        x[pj] = m[pi][n].clone();
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::QField;

    type S = NovikovSeries<QField>;

    fn mono(c: i64, e: Rat) -> S {
        S::monomial(&QField, Rat::from_int(c), e)
    }

    #[test]
    fn charpoly_of_diagonal() {
        let k = QField;
        let mut a = zeros(&k, 2, 2);
        a[0][0] = mono(1, Rat::zero());
        a[1][1] = mono(2, Rat::zero());
        let c = charpoly(&k, &a);
        // x^2 - 3x + 2
        assert_eq!(c[0], mono(2, Rat::zero()));
        assert_eq!(c[1], mono(-3, Rat::zero()));
        assert_eq!(c[2], mono(1, Rat::zero()));
    }

    #[test]
    fn det_of_cp1_hessian_like() {
        let k = QField;
        let h = Rat::new(1, 2);
        let a = vec![vec![mono(0, Rat::zero()), mono(1, h.clone())], vec![mono(1, h.clone()), mono(0, Rat::zero())]];
        assert_eq!(det(&k, &a), mono(-1, Rat::one()));
    }

    #[test]
    fn invariant_valuations_of_triangular() {
        let k = QField;
        let a = vec![
            vec![mono(1, Rat::from_int(2)), mono(1, Rat::from_int(1))],
            vec![S::zero(&k), mono(1, Rat::from_int(3))],
        ];
        // Smith form over the valuation ring: T^1 and T^4
        assert_eq!(invariant_valuations(&k, &a).unwrap(), vec![Rat::from_int(1), Rat::from_int(4)]);
    }

    #[test]
    fn solve_small_system() {
        let k = QField;
        let one = S::one(&k);
        let t = mono(1, Rat::one());
        let a = vec![vec![one.clone(), t.clone()], vec![t.clone(), one.clone()]];
        let b = vec![one.clone(), S::zero(&k)];
        let x = solve(&k, &a, &b, &Rat::from_int(6)).unwrap();
        let r = mat_vec(&k, &a, &x);
        assert!((&r[0] - &one).certified_val_at_least(&Rat::from_int(6)));
        assert!(r[1].certified_val_at_least(&Rat::from_int(6)));
    }
}
