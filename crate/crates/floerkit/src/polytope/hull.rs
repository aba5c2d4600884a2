//! Exact lattice volumes of convex hulls by pulling triangulation.
//!
//! The hull of a point set is split into simplices by coning every facet
//! that avoids a fixed vertex `p0` over `p0`, recursing into the facets.
//! The normalized volume `n! Vol` is the sum of `|det|` over the top
//! simplices.

use std::collections::BTreeSet;

use crate::coeff::number_field::rational_det;
use crate::coeff::Rat;

/// Rank of a rational matrix given as rows.
pub fn rational_rank(rows: &[Vec<Rat>]) -> usize {
    let mut m: Vec<Vec<Rat>> = rows.to_vec();
    if m.is_empty() {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(rank, p);
        let inv = m[rank][c].recip().unwrap();
        for r in 0..m.len() {
            if r != rank && !m[r][c].is_zero() {
                let f = &m[r][c] * &inv;
                for j in c..cols {
                    let t = &f * &m[rank][j];
                    m[r][j] = &m[r][j] - &t;
                }
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

fn differences(points: &[Vec<Rat>], idx: &[usize]) -> Vec<Vec<Rat>> {
    let p0 = &points[idx[0]];
    idx[1..]
        .iter()
        .map(|&i| points[i].iter().zip(p0).map(|(a, b)| a - b).collect())
        .collect()
}

/// Affine dimension of the points selected by `idx`.
pub fn affine_dim(points: &[Vec<Rat>], idx: &[usize]) -> usize {
    if idx.len() <= 1 {
        return 0;
    }
    rational_rank(&differences(points, idx))
}

/// Coordinates on which the projection of the affine hull is injective.
fn projection_coords(points: &[Vec<Rat>], idx: &[usize], d: usize) -> Vec<usize> {
    let diffs = differences(points, idx);
    let n = points[idx[0]].len();
    let mut chosen: Vec<usize> = Vec::new();
    for c in 0..n {
        let mut trial = chosen.clone();
        trial.push(c);
        let sub: Vec<Vec<Rat>> = diffs.iter().map(|r| trial.iter().map(|&j| r[j].clone()).collect()).collect();
        if rational_rank(&sub) == trial.len() {
            chosen = trial;
            if chosen.len() == d {
                break;
            }
        }
    }
    chosen
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// All `k`-element subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    combinations(n, k)
}

/// Top-dimensional simplices of a triangulation of `conv(points[idx])`,
/// as index lists of length `d + 1` where `d` is the affine dimension.
pub fn triangulate(points: &[Vec<Rat>], idx: &[usize]) -> Vec<Vec<usize>> {
    // distinct points only
    let mut seen = BTreeSet::new();
    let idx: Vec<usize> = idx.iter().copied().filter(|&i| seen.insert(points[i].clone())).collect();
    let d = affine_dim(points, &idx);
    if d == 0 {
        return vec![vec![idx[0]]];
    }
    let coords = projection_coords(points, &idx, d);
    let proj: Vec<Vec<Rat>> = idx
        .iter()
        .map(|&i| coords.iter().map(|&c| points[i][c].clone()).collect())
        .collect();
    // p0: lexicographically smallest projected point, a vertex of the hull
    let p0 = (0..idx.len()).min_by(|&a, &b| proj[a].cmp(&proj[b])).unwrap();
    let mut facets: BTreeSet<Vec<usize>> = BTreeSet::new();
    for sub in combinations(idx.len(), d) {
        let base = &proj[sub[0]];
        let diffs: Vec<Vec<Rat>> = sub[1..]
            .iter()
            .map(|&i| proj[i].iter().zip(base).map(|(a, b)| a - b).collect())
            .collect();
        // normal by cofactor expansion
        let normal: Vec<Rat> = (0..d)
            .map(|k| {
                let minor: Vec<Vec<Rat>> = diffs
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, x)| x.clone()).collect())
                    .collect();
                let det = if minor.is_empty() { Rat::one() } else { rational_det(minor) };
                if k % 2 == 0 {
                    det
                } else {
                    -det
                }
            })
            .collect();
        if normal.iter().all(|x| x.is_zero()) {
            continue;
        }
        let level = |p: &Vec<Rat>| -> Rat { p.iter().zip(&normal).map(|(a, b)| a * b).sum() };
        let c = level(base);
        let (mut above, mut below) = (false, false);
        let mut on = Vec::new();
        for (t, p) in proj.iter().enumerate() {
            let l = level(p);
            if l > c {
                above = true;
            } else if l < c {
                below = true;
            } else {
                on.push(t);
            }
        }
        if above && below {
            continue;
        }
        if !on.contains(&p0) {
            facets.insert(on);
        }
    }
    let mut out = Vec::new();
    for f in facets {
        let fidx: Vec<usize> = f.iter().map(|&t| idx[t]).collect();
        for mut s in triangulate(points, &fidx) {
            s.push(idx[p0]);
            out.push(s);
        }
    }
    out
}

/// `n! Vol(conv(points))` for points in `Q^n`; zero when the hull is not
/// full-dimensional.
pub fn normalized_volume(points: &[Vec<Rat>]) -> Rat {
    if points.is_empty() {
        return Rat::zero();
    }
    let n = points[0].len();
    let idx: Vec<usize> = (0..points.len()).collect();
    if affine_dim(points, &idx) < n {
        return Rat::zero();
    }
    triangulate(points, &idx)
        .into_iter()
        .map(|s| rational_det(differences(points, &s)).abs())
        .sum()
}
