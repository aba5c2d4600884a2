//! Reduced bottleneck distance between barcodes of finite bar lengths.
//!
//! At scale `delta` a bar of length `L` may be deleted when `L <= 2 delta`,
//! and bars of lengths `a`, `b` may be matched when `|a - b| <= 2 delta`.
//! Feasibility is a perfect matching problem; the optimum is the least
//! feasible candidate among `0`, `|a - b| / 2` and `L / 2`.

use serde_json::{json, Value};

use crate::coeff::Rat;

use super::barcode::Barcode;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bottleneck {
    Finite(Rat),
    Infinite,
}

impl Bottleneck {
    pub fn to_json(&self) -> Value {
        match self {
            Bottleneck::Finite(r) => json!(r.to_string()),
            Bottleneck::Infinite => json!("inf"),
        }
    }
}

impl std::fmt::Display for Bottleneck {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Bottleneck::Finite(r) => write!(f, "{r}"),
            Bottleneck::Infinite => f.write_str("inf"),
        }
    }
}

/// Kuhn's augmenting-path matching; `adj[u]` lists right vertices.
fn perfect_matching(adj: &[Vec<usize>], right: usize) -> bool {
    fn augment(u: usize, adj: &[Vec<usize>], seen: &mut [bool], mate: &mut [Option<usize>]) -> bool {
        for &v in &adj[u] {
            if seen[v] {
                continue;
            }
            seen[v] = true;
            if mate[v].map_or(true, |w| augment(w, adj, seen, mate)) {
                mate[v] = Some(u);
                return true;
            }
        }
        false
    }
    if adj.len() != right {
        return false;
    }
    let mut mate = vec![None; right];
    (0..adj.len()).all(|u| augment(u, adj, &mut vec![false; right], &mut mate))
}

/// Whether the finite bars `a` and `b` can be matched at scale `delta`.
pub fn feasible(a: &[Rat], b: &[Rat], delta: &Rat) -> bool {
    let two_d = delta + delta;
    let (m, n) = (a.len(), b.len());
    // left: a_0..a_m, then deletion slots for b; right: b_0..b_n, then deletion slots for a
    let mut adj = vec![Vec::new(); m + n];
    for i in 0..m {
        for j in 0..n {
            if (&a[i] - &b[j]).abs() <= two_d {
                adj[i].push(j);
            }
        }
        if a[i] <= two_d {
            adj[i].push(n + i);
        }
    }
    for j in 0..n {
        if b[j] <= two_d {
            adj[m + j].push(j);
        }
        for i in 0..m {
            adj[m + j].push(n + i);
        }
    }
    perfect_matching(&adj, m + n)
}

/// `+inf` when the infinite-bar counts differ, otherwise the least `delta`
/// admitting a deletion-and-matching of the finite bars.
pub fn bottleneck_distance(b1: &Barcode, b2: &Barcode) -> Bottleneck {
    if b1.infinite != b2.infinite {
        return Bottleneck::Infinite;
    }
    let (a, b) = (&b1.finite, &b2.finite);
    let half = Rat::new(1, 2);
    let mut cands: Vec<Rat> = vec![Rat::zero()];
    cands.extend(a.iter().chain(b).map(|x| x * &half));
    for x in a {
        for y in b {
            cands.push(&(x - y).abs() * &half);
        }
    }
    cands.sort();
    cands.dedup();
    // feasibility is monotone in delta
    let (mut lo, mut hi) = (0usize, cands.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if feasible(a, b, &cands[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Bottleneck::Finite(cands[lo].clone())
}
