//! Clifford algebras of a nondegenerate symmetric form over a Novikov field.

use crate::coeff::Field;
use crate::novikov::linalg::det;
use crate::novikov::NovikovSeries;

use super::algebra::{AlgebraOverNovikov, Element};
use super::SemisimpleError;

fn label(mask: usize, n: usize) -> String {
    if mask == 0 {
        return "1".to_string();
    }
    (0..n).filter(|i| mask >> i & 1 == 1).map(|i| format!("x{}", i + 1)).collect()
}

/// `x_S * x_j` as a combination of ordered monomials, using
/// `x_j^2 = H_jj / 2` and `x_i x_j = -x_j x_i + H_ij`.
fn mul_monomial_generator<F: Field>(
    h: &[Vec<NovikovSeries<F>>],
    half: &NovikovSeries<F>,
    mask: usize,
    j: usize,
) -> Vec<(usize, NovikovSeries<F>)> {
    let k = h[0][0].field();
    if mask == 0 {
        return vec![(1 << j, NovikovSeries::one(k))];
    }
    let last = usize::BITS as usize - 1 - mask.leading_zeros() as usize;
    let rest = mask & !(1 << last);
    if last < j {
        return vec![(mask | 1 << j, NovikovSeries::one(k))];
    }
    if last == j {
        return vec![(rest, &h[j][j] * half)];
    }
    // x_rest x_last x_j = -(x_rest x_j) x_last + H_{last j} x_rest
    let mut out: Vec<(usize, NovikovSeries<F>)> = Vec::new();
    for (m, c) in mul_monomial_generator(h, half, rest, j) {
        for (m2, c2) in mul_monomial_generator(h, half, m, last) {
            out.push((m2, -&(&c * &c2)));
        }
    }
    if !h[last][j].is_exact_zero() {
        out.push((rest, h[last][j].clone()));
    }
    out
}

/// The `2^n`-dimensional algebra on ordered monomials `x_S` with
/// `x_i x_j + x_j x_i = H_ij`.  The form must be symmetric with a
/// determinant whose leading term is known.
pub fn clifford_from_hessian<F: Field>(
    field: &F,
    h: &[Vec<NovikovSeries<F>>],
) -> Result<AlgebraOverNovikov<F>, SemisimpleError> {
    let n = h.len();
    if n == 0 || h.iter().any(|r| r.len() != n) {
        return Err(SemisimpleError::Shape("form must be square and nonempty".into()));
    }
    if field.characteristic() == 2 {
        return Err(SemisimpleError::Shape("characteristic 2 is not supported".into()));
    }
    for i in 0..n {
        for j in 0..i {
            if !(&h[i][j] - &h[j][i]).has_no_terms() {
                return Err(SemisimpleError::Shape("form is not symmetric".into()));
            }
        }
    }
    if det(field, &h.to_vec()).has_no_terms() {
        return Err(SemisimpleError::DegenerateForm);
    }
    let half = NovikovSeries::constant(field, field.inv(&field.from_int(2)).expect("odd characteristic"));
    let dim = 1usize << n;
    let zero: Element<F> = vec![NovikovSeries::zero(field); dim];
    let mut table = vec![vec![zero.clone(); dim]; dim];
    for s in 0..dim {
        for t in 0..dim {
            let mut acc = vec![(s, NovikovSeries::one(field))];
            for j in (0..n).filter(|j| t >> j & 1 == 1) {
                let mut next = Vec::new();
                for (m, c) in acc {
                    for (m2, c2) in mul_monomial_generator(h, &half, m, j) {
                        next.push((m2, &c * &c2));
                    }
                }
                acc = next;
            }
            let entry = &mut table[s][t];
            for (m, c) in acc {
                entry[m] = &entry[m] + &c;
            }
        }
    }
    let mut unit = zero;
    unit[0] = NovikovSeries::one(field);
    let labels = (0..dim).map(|m| label(m, n)).collect();
    AlgebraOverNovikov::new(field.clone(), labels, table, unit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{QField, Rat};

    fn s(t: &str) -> NovikovSeries<QField> {
        NovikovSeries::parse(&QField, t).unwrap()
    }

    #[test]
    fn one_variable_squares_to_half_the_form() {
        let alg = clifford_from_hessian(&QField, &[vec![s("2T^(1/2)")]]).unwrap();
        assert_eq!(alg.labels(), &["1".to_string(), "x1".to_string()]);
        assert_eq!(alg.structure_constants()[1][1], vec![NovikovSeries::t_pow(&QField, Rat::new(1, 2)), s("0")]);
    }

    #[test]
    fn identity_form_anticommutes() {
        let h = vec![vec![s("1"), s("0")], vec![s("0"), s("1")]];
        let alg = clifford_from_hessian(&QField, &h).unwrap();
        assert!(!alg.is_commutative());
        let x1x2 = alg.mul(&alg.basis_vector(1), &alg.basis_vector(2));
        let x2x1 = alg.mul(&alg.basis_vector(2), &alg.basis_vector(1));
        assert_eq!(x1x2, x2x1.iter().map(|c| -c).collect::<Vec<_>>());
        assert_eq!(x1x2, alg.basis_vector(3));
    }

    #[test]
    fn degenerate_form_is_rejected() {
        let h = vec![vec![s("1"), s("1")], vec![s("1"), s("1")]];
        assert!(matches!(clifford_from_hessian(&QField, &h), Err(SemisimpleError::DegenerateForm)));
    }

    #[test]
    fn three_variable_form_is_associative() {
        let h = vec![
            vec![s("2"), s("T"), s("0")],
            vec![s("T"), s("-1"), s("1/2")],
            vec![s("0"), s("1/2"), s("T^-1")],
        ];
        // associativity on every basis triple is checked by the constructor
        let alg = clifford_from_hessian(&QField, &h).unwrap();
        assert_eq!(alg.dim(), 8);
    }
}
