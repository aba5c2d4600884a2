use floerkit::coeff::{Field, FiniteField, QField, Rat};
use floerkit::filtered::random::{random_strict_complex, RandomComplexSpec};
use floerkit::filtered::{FilteredComplex, Generator, Mode};
use floerkit::novikov::linalg::zeros;
use floerkit::novikov::{Matrix, NovikovSeries};
use floerkit::tate::{
    quasi_frobenius_check, smith_demo, tate_differential, tate_torsion_exponents, tensor_power_with_zeta,
    BorelMorseComplex, SmithDemo,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Fp = FiniteField;

fn fp(p: u64) -> Fp {
    FiniteField::prime(p).unwrap()
}

fn r(a: i64, b: i64) -> Rat {
    Rat::new(a, b)
}

fn matmul<F: Field>(a: &Matrix<F>, b: &Matrix<F>) -> Matrix<F> {
    let k = a[0][0].field().clone();
    let mut out = zeros(&k, a.len(), b[0].len());
    for i in 0..a.len() {
        for t in 0..b.len() {
            if a[i][t].is_exact_zero() {
                continue;
            }
            for j in 0..b[0].len() {
                if !b[t][j].is_exact_zero() {
                    out[i][j] = &out[i][j] + &(&a[i][t] * &b[t][j]);
                }
            }
        }
    }
    out
}

fn is_zero_matrix<F: Field>(m: &Matrix<F>) -> bool {
    m.iter().all(|row| row.iter().all(NovikovSeries::is_exact_zero))
}

fn int_rank(m: Vec<Vec<i64>>) -> usize {
    let m: Vec<Vec<Rat>> = m.into_iter().map(|row| row.into_iter().map(Rat::from_int).collect()).collect();
    let mut m = m;
    let (rows, cols) = (m.len(), m.first().map_or(0, Vec::len));
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(rank, p);
        for i in 0..rows {
            if i != rank && !m[i][c].is_zero() {
                let f = &m[i][c] / &m[rank][c];
                for j in 0..cols {
                    let t = &m[rank][j] * &f;
                    m[i][j] = &m[i][j] - &t;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Invariant valuations by repeatedly pivoting on an entry of least
/// valuation and clearing its row and column.
fn greedy_invariant_valuations<F: Field>(mut m: Matrix<F>) -> Vec<Rat> {
    let n = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut live_r = vec![true; n];
    let mut live_c = vec![true; cols];
    let mut out = Vec::new();
    loop {
        let mut best: Option<(Rat, usize, usize)> = None;
        for i in (0..n).filter(|&i| live_r[i]) {
            for j in (0..cols).filter(|&j| live_c[j]) {
                if let Some((v, _)) = m[i][j].leading() {
                    if best.as_ref().map_or(true, |b| v < &b.0) {
                        best = Some((v.clone(), i, j));
                    }
                }
            }
        }
        let Some((v, pi, pj)) = best else { break };
        out.push(v);
        let inv = m[pi][pj].invert(&Rat::from_int(64)).unwrap().exact_part();
        for i in (0..n).filter(|&i| live_r[i] && i != pi) {
            if m[i][pj].is_exact_zero() {
                continue;
            }
            let f = &m[i][pj] * &inv;
            for j in (0..cols).filter(|&j| live_c[j]) {
                if !m[pi][j].is_exact_zero() {
                    m[i][j] = (&m[i][j] - &(&f * &m[pi][j])).truncate(&Rat::from_int(32));
                }
            }
        }
        live_r[pi] = false;
        live_c[pj] = false;
    }
    out.sort();
    out
}

fn base_complex(p: u64, gens: Vec<Generator>, entries: &[(usize, usize, Rat)]) -> FilteredComplex<Fp> {
    let k = fp(p);
    let mut d = zeros(&k, gens.len(), gens.len());
    for (to, from, e) in entries {
        d[*to][*from] = NovikovSeries::t_pow(&k, e.clone());
    }
    FilteredComplex::new(&k, gens, d, Mode::Verbose).unwrap()
}

fn bar(p: u64, g: Rat) -> FilteredComplex<Fp> {
    base_complex(
        p,
        vec![Generator::new("x", 1, Rat::zero()), Generator::new("y", 0, Rat::zero())],
        &[(1, 0, g)],
    )
}

// ---------------------------------------------------------------------------

#[test]
fn borel_ranks_over_finite_fields() {
    let b = BorelMorseComplex::new(3, 2).unwrap();
    assert_eq!(b.homology_ranks(&fp(3)), vec![1; 5]);
    for p in [3, 5] {
        let b = BorelMorseComplex::new(p, 3).unwrap();
        assert_eq!(b.homology_ranks(&fp(p)), vec![1; 7]);
    }
}

#[test]
fn borel_differential_squares_to_zero_and_is_equivariant() {
    for (p, l) in [(3u64, 2usize), (5, 3), (7, 1)] {
        let b = BorelMorseComplex::new(p, l).unwrap();
        let d = b.integer_matrix();
        let n = d.len();
        for i in 0..n {
            for j in 0..n {
                assert_eq!((0..n).map(|t| d[i][t] * d[t][j]).sum::<i64>(), 0);
            }
        }
        assert!(b.d_squared_is_zero());
        // shifting every index m -> m + 1 within its degree block fixes d
        let pu = p as usize;
        let shift = |i: usize| i / pu * pu + (i % pu + 1) % pu;
        assert!((0..n).all(|i| (0..n).all(|j| d[i][j] == d[shift(i)][shift(j)])));
        assert!(b.is_equivariant());
    }
}

#[test]
fn borel_ranks_over_rationals() {
    let b = BorelMorseComplex::new(3, 2).unwrap();
    assert_eq!(b.homology_ranks(&QField), vec![1, 0, 0, 0, 0]);
    // oracle: the orbit complex has d = 0 on even degrees and d = p on odd
    // degrees, so over Q only degree 0 survives
    let d = b.integer_matrix();
    let p = 3usize;
    let orbit = |deg: usize| -> i64 { (0..p).map(|r| d[(deg + 1) * p + r][deg * p]).sum() };
    assert_eq!((0..5).map(orbit).collect::<Vec<_>>(), vec![0, 3, 0, 3, 0]);
    // total space: one class in degree 0 from direct elimination
    let block = |deg: usize| int_rank((0..p).map(|r| (0..p).map(|c| d[(deg + 1) * p + r][deg * p + c]).collect()).collect());
    let direct: Vec<usize> =
        (0..=4).map(|deg| p - block(deg) - if deg == 0 { 0 } else { block(deg - 1) }).collect();
    assert_eq!(direct, vec![1, 0, 0, 0, 0]);
    assert_eq!(b.total_space_ranks(&QField), direct);
}

#[test]
fn zeta_on_one_even_generator_is_identity() {
    let k = fp(3);
    let t = tensor_power_with_zeta(&k, &zeros(&k, 1, 1), &[0], 3);
    assert_eq!(t.len(), 1);
    assert_eq!(t.zeta_on_word(0), (0, NovikovSeries::one(&k)));
}

#[test]
fn zeta_koszul_signs() {
    let k = fp(3);
    // generator 0 even, generator 1 odd
    let t = tensor_power_with_zeta(&k, &zeros(&k, 2, 2), &[0, 1], 3);
    let col = |w: &[usize]| t.words.iter().position(|x| x == w).unwrap();
    let one = NovikovSeries::one(&k);
    let (_, s1) = t.zeta_on_word(col(&[1, 1, 0]));
    assert_eq!(s1, one);
    let (_, s2) = t.zeta_on_word(col(&[1, 0, 1]));
    assert_eq!(s2, -&one);
    // every column is sent to a cyclic rotation of its word
    for (c, w) in t.words.iter().enumerate() {
        let (row, _) = t.zeta_on_word(c);
        let target = &t.words[row];
        assert!((0..3).any(|s| (0..3).all(|i| target[i] == w[(i + s) % 3])));
    }
}

/// Koszul differential of the tensor power from its defining sum.
fn koszul_oracle(k: &Fp, d: &Matrix<Fp>, degrees: &[u8], words: &[Vec<usize>]) -> Matrix<Fp> {
    let mut out = zeros(k, words.len(), words.len());
    for (c, w) in words.iter().enumerate() {
        for i in 0..w.len() {
            let before: u8 = w[..i].iter().map(|&x| degrees[x]).sum();
            for q in 0..d.len() {
                if d[q][w[i]].is_exact_zero() {
                    continue;
                }
                let mut w2 = w.clone();
                w2[i] = q;
                let row = words.iter().position(|x| *x == w2).unwrap();
                let term = if before % 2 == 1 { -&d[q][w[i]] } else { d[q][w[i]].clone() };
                out[row][c] = &out[row][c] + &term;
            }
        }
    }
    out
}

#[test]
fn tate_of_one_even_generator() {
    let c = base_complex(3, vec![Generator::new("x", 0, Rat::zero())], &[]);
    let tc = tate_differential(&c, 3, 4).unwrap();
    assert!(is_zero_matrix(&tc.window_matrix(2)));
    let (torsion, _) = tate_torsion_exponents(&tc).unwrap();
    assert!(torsion.per_sector.is_empty());
    assert_eq!(torsion.free_rank, 2);
    let q = quasi_frobenius_check(&c, 3, 4).unwrap();
    assert!(q.ranks_match && q.ok());
}

#[test]
fn tate_torsion_of_a_single_bar() {
    for g in [r(1, 2), r(1, 1), r(2, 3)] {
        let c = bar(3, g.clone());
        let tc = tate_differential(&c, 3, 4).unwrap();
        let (torsion, cert) = tate_torsion_exponents(&tc).unwrap();
        assert_eq!(torsion.total(), &Rat::from_int(3) * &g);
        assert_eq!(torsion.per_sector, vec![&Rat::from_int(3) * &g]);
        // oracle: greedy elimination of the window at M = 3
        let window = greedy_invariant_valuations(tc.window_matrix(3));
        let positive: Rat = window.iter().filter(|v| v.is_positive()).fold(Rat::zero(), |a, b| &a + b);
        assert_eq!(positive, cert.totals[1]);
        let q = quasi_frobenius_check(&c, 3, 4).unwrap();
        assert!(q.ok());
        assert_eq!(q.base_exponents, vec![g.clone()]);
    }
}

#[test]
fn tate_torsion_of_two_bars() {
    let (g1, g2) = (r(1, 2), r(3, 4));
    let c = base_complex(
        3,
        vec![
            Generator::new("a", 1, Rat::zero()),
            Generator::new("b", 0, Rat::zero()),
            Generator::new("c", 1, Rat::one()),
            Generator::new("d", 0, Rat::one()),
        ],
        &[(1, 0, g1.clone()), (3, 2, g2.clone())],
    );
    let tc = tate_differential(&c, 3, 4).unwrap();
    let (torsion, _) = tate_torsion_exponents(&tc).unwrap();
    assert_eq!(torsion.total(), &Rat::from_int(3) * &(&g1 + &g2));
}

#[test]
fn zero_base_differential_has_no_tate_torsion() {
    let c = base_complex(
        5,
        vec![Generator::new("x", 0, Rat::zero()), Generator::new("y", 1, r(1, 2))],
        &[],
    );
    let tc = tate_differential(&c, 5, 3).unwrap();
    assert!(tc.exact_torsion().unwrap().per_sector.is_empty());
}

#[test]
fn smith_demo_examples() {
    match smith_demo(&Rat::one(), &Rat::from_int(100), 10, 5, 20) {
        SmithDemo::Contradiction { k, growth, bound } => {
            assert_eq!(k, 5);
            assert_eq!(growth, Rat::from_int(3125));
            assert_eq!(bound, Rat::from_int(1000));
        }
        other => panic!("unexpected {other:?}"),
    }
    assert_eq!(smith_demo(&Rat::zero(), &Rat::from_int(100), 10, 5, 20), SmithDemo::Vacuous);
    assert_eq!(smith_demo(&Rat::one(), &Rat::from_int(100), 10, 3, 2), SmithDemo::NotReached { k_max: 2 });
    // oracle: the least k with p^k > 1000, and it does not grow with p
    let mut last = u32::MAX;
    for p in [2u64, 3, 5, 7, 11, 13] {
        let want = (0u32..).find(|&k| p.pow(k) > 1000).unwrap();
        let SmithDemo::Contradiction { k, .. } = smith_demo(&Rat::one(), &Rat::from_int(100), 10, p, 40) else {
            panic!("no contradiction at p = {p}")
        };
        assert_eq!(k, want);
        assert!(k <= last);
        last = k;
    }
}

fn random_base(p: u64, seed: u64, max_generators: usize) -> FilteredComplex<Fp> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spec = RandomComplexSpec { max_generators, ..RandomComplexSpec::default() };
    random_strict_complex(&fp(p), &mut rng, &spec)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn tensor_power_identities(seed in any::<u64>()) {
        let c = random_base(3, seed, 3);
        let k = fp(3);
        let d = c.normalized_matrix();
        let degrees: Vec<u8> = c.generators().iter().map(|g| g.degree).collect();
        let t = tensor_power_with_zeta(&k, &d, &degrees, 3);
        prop_assert_eq!(&t.differential, &koszul_oracle(&k, &d, &degrees, &t.words));
        prop_assert!(is_zero_matrix(&matmul(&t.differential, &t.differential)));
        let z3 = matmul(&t.zeta, &matmul(&t.zeta, &t.zeta));
        let id = floerkit::novikov::linalg::identity(&k, t.len());
        prop_assert_eq!(z3, id);
        prop_assert_eq!(matmul(&t.differential, &t.zeta), matmul(&t.zeta, &t.differential));
    }

    #[test]
    fn tate_window_squares_to_zero(seed in any::<u64>()) {
        let c = random_base(3, seed, 2);
        let tc = tate_differential(&c, 3, 3).unwrap();
        let w = tc.window_matrix(2);
        prop_assert!(is_zero_matrix(&matmul(&w, &w)));
        let m = &tc.matrix;
        prop_assert!(is_zero_matrix(&matmul(m, m)));
    }

    #[test]
    fn tate_torsion_is_p_times_base(seed in any::<u64>(), pi in 0usize..2) {
        let p = [3u64, 5][pi];
        let c = random_base(p, seed, 3);
        let tc = tate_differential(&c, p, 3).unwrap();
        let exact = tc.exact_torsion().unwrap();
        let base: Rat = c.barcode().unwrap().finite.iter().fold(Rat::zero(), |a, b| &a + b);
        prop_assert_eq!(exact.total(), &Rat::from_int(p as i64) * &base);
        let mut scaled: Vec<Rat> = c.barcode().unwrap().finite.iter().map(|g| g * &Rat::from_int(p as i64)).collect();
        scaled.sort();
        prop_assert_eq!(exact.per_sector, scaled);
    }
}
