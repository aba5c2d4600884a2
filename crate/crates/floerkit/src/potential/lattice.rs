//! Integer diagonalization `P A Q = D` of small square integer matrices by
//! unimodular row and column operations.

/// Result of diagonalizing `A`: `p * a * q = diag(d)` with `p`, `q`
/// unimodular.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagonalization {
    pub p: Vec<Vec<i64>>,
    pub q: Vec<Vec<i64>>,
    pub d: Vec<i64>,
}

fn ident(n: usize) -> Vec<Vec<i64>> {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

/// Diagonalizes a square integer matrix.  Diagonal entries are made
/// non-negative; a zero entry means `A` is singular.
pub fn diagonalize(a: &[Vec<i64>]) -> Diagonalization {
    let n = a.len();
    let mut m: Vec<Vec<i64>> = a.to_vec();
    let mut p = ident(n);
    let mut q = ident(n);
    for t in 0..n {
        loop {
            // smallest nonzero entry in the lower-right block
            let mut best: Option<(usize, usize)> = None;
            for i in t..n {
                for j in t..n {
                    if m[i][j] != 0 && best.map_or(true, |(bi, bj)| m[i][j].abs() < m[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else { break };
            m.swap(t, bi);
            p.swap(t, bi);
            for row in m.iter_mut() {
                row.swap(t, bj);
            }
            for row in q.iter_mut() {
                row.swap(t, bj);
            }
            let piv = m[t][t];
            let mut clean = true;
            for i in (t + 1)..n {
                let f = m[i][t] / piv;
                if f != 0 {
                    for j in 0..n {
                        m[i][j] -= f * m[t][j];
                        p[i][j] -= f * p[t][j];
                    }
                }
                if m[i][t] != 0 {
                    clean = false;
                }
            }
            for j in (t + 1)..n {
                let f = m[t][j] / piv;
                if f != 0 {
                    for i in 0..n {
                        m[i][j] -= f * m[i][t];
                        q[i][j] -= f * q[i][t];
                    }
                }
                if m[t][j] != 0 {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if m[t][t] < 0 {
            for j in 0..n {
                m[t][j] = -m[t][j];
                p[t][j] = -p[t][j];
            }
        }
    }
    let d = (0..n).map(|i| m[i][i]).collect();
    Diagonalization { p, q, d }
}

/// Integer determinant by fraction-free (Bareiss) elimination.
pub fn int_det(a: &[Vec<i64>]) -> i64 {
    let n = a.len();
    let mut m: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            match ((k + 1)..n).find(|&r| m[r][k] != 0) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    if n == 0 {
        return 1;
    }
    (sign * m[n - 1][n - 1]) as i64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
        let n = a.len();
        (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
    }

    #[test]
    fn diagonalizes_examples() {
        for a in [
            vec![vec![2, 4], vec![0, 2]],
            vec![vec![2, 4], vec![1, 3]],
            vec![vec![3, 1, 0], vec![1, 2, 5], vec![0, 4, 7]],
            vec![vec![6]],
        ] {
            let r = diagonalize(&a);
            let dm = mul(&mul(&r.p, &a), &r.q);
            for i in 0..a.len() {
                for j in 0..a.len() {
                    assert_eq!(dm[i][j], if i == j { r.d[i] } else { 0 });
                }
            }
            assert_eq!(int_det(&r.p).abs(), 1);
            assert_eq!(int_det(&r.q).abs(), 1);
            assert_eq!(r.d.iter().product::<i64>(), int_det(&a).abs());
        }
    }
}
