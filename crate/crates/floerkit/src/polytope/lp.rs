//! Exact two-phase simplex method over `Q` with Bland's rule.

use crate::coeff::Rat;

/// Outcome of `maximize c.x subject to A x <= b` with free variables `x`.
#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal { value: Rat, point: Vec<Rat> },
}

struct Tableau {
    rows: Vec<Vec<Rat>>,
    rhs: Vec<Rat>,
    basis: Vec<usize>,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip().expect("nonzero pivot");
        for x in self.rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        self.rhs[r] = &self.rhs[r] * &inv;
        let prow = self.rows[r].clone();
        let prhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let f = self.rows[i][c].clone();
            for (x, p) in self.rows[i].iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *x = &*x - &(&f * p);
                }
            }
            self.rhs[i] = &self.rhs[i] - &(&f * &prhs);
        }
        self.basis[r] = c;
    }

    /// Maximizes `obj . z` over the columns `allowed`; returns false when
    /// unbounded.
    fn run(&mut self, obj: &[Rat], allowed: usize) -> bool {
        loop {
            let mut enter = None;
            for j in 0..allowed {
                if self.basis.contains(&j) {
                    continue;
                }
                let mut r = obj[j].clone();
                for (i, &b) in self.basis.iter().enumerate() {
                    if !self.rows[i][j].is_zero() {
                        r = &r - &(&obj[b] * &self.rows[i][j]);
                    }
                }
                if r.is_positive() {
                    enter = Some(j);
                    break;
                }
            }
            let Some(c) = enter else { return true };
            let mut leave: Option<(usize, Rat)> = None;
            for i in 0..self.rows.len() {
                if self.rows[i][c].is_positive() {
                    let ratio = &self.rhs[i] / &self.rows[i][c];
                    let better = match &leave {
                        None => true,
                        Some((li, lr)) => ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]),
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            match leave {
                None => return false,
                Some((r, _)) => self.pivot(r, c),
            }
        }
    }
}

/// Maximizes `c . x` subject to `a x <= b` with `x` unrestricted in sign.
pub fn maximize(c: &[Rat], a: &[Vec<Rat>], b: &[Rat]) -> LpOutcome {
    let n = c.len();
    let m = a.len();
    // columns: x+ (n), x- (n), slack (m), artificial (one per negative row)
    let neg_rows: Vec<usize> = (0..m).filter(|&i| b[i].is_negative()).collect();
    let art_start = 2 * n + m;
    let total = art_start + neg_rows.len();
    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    for i in 0..m {
        let sign = if b[i].is_negative() { Rat::from_int(-1) } else { Rat::one() };
        let mut row = vec![Rat::zero(); total];
        for j in 0..n {
            row[j] = &a[i][j] * &sign;
            row[n + j] = -&row[j];
        }
        row[2 * n + i] = sign.clone();
        if let Some(k) = neg_rows.iter().position(|&r| r == i) {
            row[art_start + k] = Rat::one();
            basis.push(art_start + k);
        } else {
            basis.push(2 * n + i);
        }
        rows.push(row);
        rhs.push(&b[i] * &sign);
    }
    let mut t = Tableau { rows, rhs, basis };
    if !neg_rows.is_empty() {
        let mut obj = vec![Rat::zero(); total];
        for x in obj.iter_mut().skip(art_start) {
            *x = Rat::from_int(-1);
        }
        t.run(&obj, total);
        let infeas: Rat = t
            .basis
            .iter()
            .zip(&t.rhs)
            .filter(|(&bcol, _)| bcol >= art_start)
            .map(|(_, v)| v.clone())
            .sum();
        if infeas.is_positive() {
            return LpOutcome::Infeasible;
        }
        // drive remaining (zero-level) artificials out of the basis
        let mut i = 0;
        while i < t.rows.len() {
            if t.basis[i] >= art_start {
                match (0..art_start).find(|&j| !t.rows[i][j].is_zero()) {
                    Some(j) => {
                        t.pivot(i, j);
                        i += 1;
                    }
                    None => {
                        t.rows.remove(i);
                        t.rhs.remove(i);
                        t.basis.remove(i);
                    }
                }
            } else {
                i += 1;
            }
        }
    }
    let mut obj = vec![Rat::zero(); total];
    for j in 0..n {
        obj[j] = c[j].clone();
        obj[n + j] = -&c[j];
    }
    if !t.run(&obj, art_start) {
        return LpOutcome::Unbounded;
    }
    let mut z = vec![Rat::zero(); total];
    for (i, &bcol) in t.basis.iter().enumerate() {
        z[bcol] = t.rhs[i].clone();
    }
    let point: Vec<Rat> = (0..n).map(|j| &z[j] - &z[n + j]).collect();
    let value = c.iter().zip(&point).map(|(ci, xi)| ci * xi).sum();
    LpOutcome::Optimal { value, point }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rat {
        Rat::from_int(n)
    }

    #[test]
    fn box_maximum() {
        // x <= 2, -x <= 1, y <= 3, -y <= -1 (y >= 1); maximize x + y
        let a = vec![vec![q(1), q(0)], vec![q(-1), q(0)], vec![q(0), q(1)], vec![q(0), q(-1)]];
        let b = vec![q(2), q(1), q(3), q(-1)];
        match maximize(&[q(1), q(1)], &a, &b) {
            LpOutcome::Optimal { value, point } => {
                assert_eq!(value, q(5));
                assert_eq!(point, vec![q(2), q(3)]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unbounded_and_infeasible() {
        let a = vec![vec![q(-1)]];
        assert_eq!(maximize(&[q(1)], &a, &[q(0)]), LpOutcome::Unbounded);
        let a = vec![vec![q(1)], vec![q(-1)]];
        assert_eq!(maximize(&[q(1)], &a, &[q(0), q(-1)]), LpOutcome::Infeasible);
    }
}
