use floerkit::coeff::{Field, GaussianRat, NumberField, Rat};
use floerkit::novikov::{linalg, NovikovSeries};
use floerkit::polytope::{presets, Polytope};
use floerkit::potential::{
    build_fiber_potential, build_ghv, certify_convenient, classify_inside, critical_points, disk_weight,
    hessian_certificate, ks_evaluate, ks_surjectivity_check, residual_certified, search_convenient_bulk,
    BulkDeformation, CriticalSet, NovikovLaurentPoly, PotentialError, SearchOptions, DEFAULT_FIELD_BUDGET,
};
use proptest::prelude::*;

type S = NovikovSeries<NumberField>;

fn r(a: i64, b: i64) -> Rat {
    Rat::new(a, b)
}

fn z(n: i64) -> Rat {
    Rat::from_int(n)
}

fn qq() -> NumberField {
    NumberField::rationals()
}

fn mono(k: &NumberField, c: i64, e: Rat) -> S {
    NovikovSeries::monomial(k, k.from_int(c), e)
}

/// Evaluates a Laurent polynomial by substituting exact series term by
/// term, with inverses taken by `invert` to absolute precision `prec`.
fn substitute(w: &NovikovLaurentPoly<NumberField>, eta: &[S], prec: &Rat) -> S {
    let k = w.field();
    let mut acc = NovikovSeries::zero(k);
    for (a, c) in w.terms() {
        let mut t = c.clone();
        for (x, &ai) in eta.iter().zip(a) {
            let f = if ai >= 0 { x.pow(ai as u64) } else { x.invert(prec).unwrap().pow(ai.unsigned_abs()) };
            t = &t * &f;
        }
        acc = &acc + &t;
    }
    acc
}

fn solve(p: &Polytope, b: &BulkDeformation, prec: i64) -> CriticalSet {
    critical_points(&build_ghv(p, b).unwrap(), &z(prec), DEFAULT_FIELD_BUDGET).unwrap()
}

#[test]
fn ghv_examples() {
    let k = qq();
    let w = build_ghv(&presets::cpn(1), &BulkDeformation::trivial(2)).unwrap();
    assert_eq!(w.term_count(), 2);
    assert_eq!(w.coefficient(&[1]), Some(&S::one(&k)));
    assert_eq!(w.coefficient(&[-1]), Some(&S::t_pow(&k, z(1))));

    let w = build_ghv(&presets::cpn(2), &BulkDeformation::trivial(3)).unwrap();
    assert_eq!(w.coefficient(&[1, 0]), Some(&S::one(&k)));
    assert_eq!(w.coefficient(&[0, 1]), Some(&S::one(&k)));
    assert_eq!(w.coefficient(&[-1, -1]), Some(&S::t_pow(&k, z(1))));

    for n in [2i64, 4] {
        let alpha = r(1, 2);
        let w = build_ghv(&presets::hirzebruch(n, alpha.clone()), &BulkDeformation::trivial(4)).unwrap();
        assert_eq!(w.term_count(), 4);
        assert_eq!(w.coefficient(&[1, 0]), Some(&S::one(&k)));
        assert_eq!(w.coefficient(&[0, 1]), Some(&S::one(&k)));
        assert_eq!(w.coefficient(&[0, -1]), Some(&S::t_pow(&k, &Rat::one() - &alpha)));
        assert_eq!(w.coefficient(&[-1, -n]), Some(&S::t_pow(&k, z(n))));
    }
}

#[test]
fn ghv_rejects_bad_input() {
    let w = parse_weighted();
    assert!(matches!(build_ghv(&w, &BulkDeformation::trivial(3)), Err(PotentialError::NotDelzant)));
    assert!(matches!(
        build_ghv(&presets::cpn(1), &BulkDeformation::trivial(3)),
        Err(PotentialError::BulkLengthMismatch { expected: 2, got: 3 })
    ));
    assert!(matches!("1,0".parse::<BulkDeformation>(), Err(PotentialError::ZeroBulkCoefficient { index: 1 })));
}

fn parse_weighted() -> Polytope {
    floerkit::polytope::parse_polytope(
        r#"{"dim": 2, "facets": [{"v": [1, 0], "lambda": "0"}, {"v": [0, 1], "lambda": "0"}, {"v": [-1, -2], "lambda": "-1"}]}"#,
    )
    .unwrap()
}

#[test]
fn fiber_potential_examples() {
    let k = qq();
    let p = presets::cpn(1);
    let b = BulkDeformation::trivial(2);
    let wf = build_fiber_potential(&p, &b, &[r(1, 2)]).unwrap();
    // oracle: substitute y -> T^{1/2} y into y + T y^{-1}
    assert_eq!(wf.coefficient(&[1]), Some(&S::t_pow(&k, r(1, 2))));
    assert_eq!(wf.coefficient(&[-1]), Some(&S::t_pow(&k, r(1, 2))));

    let f2 = presets::hirzebruch(2, r(1, 2));
    let u = [r(1, 2), r(1, 4)];
    let wf = build_fiber_potential(&f2, &BulkDeformation::trivial(4), &u).unwrap();
    let vals: Vec<Rat> = f2.facets().iter().map(|f| wf.coefficient(&f.v).unwrap().valuation().unwrap().unwrap()).collect();
    assert_eq!(vals, f2.support_values(&u));

    // translating so that 0 is interior: the fiber at 0 is the potential itself
    let shifted = f2.translate(&[r(-1, 2), r(-1, 4)]);
    let b4 = BulkDeformation::trivial(4);
    let w0 = build_fiber_potential(&shifted, &b4, &[z(0), z(0)]).unwrap();
    assert_eq!(w0, build_ghv(&shifted, &b4).unwrap());

    assert!(matches!(build_fiber_potential(&p, &b, &[z(2)]), Err(PotentialError::NotInterior)));
}

#[test]
fn log_derivative_examples() {
    let k = qq();
    let w = build_ghv(&presets::cpn(1), &BulkDeformation::trivial(2)).unwrap();
    let d = w.log_derivative(0);
    assert_eq!(d.coefficient(&[1]), Some(&S::one(&k)));
    assert_eq!(d.coefficient(&[-1]), Some(&mono(&k, -1, z(1))));

    let mut c = NovikovLaurentPoly::new(&k, 1);
    c.add_term(vec![0], S::from_int(&k, 5));
    assert_eq!(c.log_derivative(0).term_count(), 0);

    let mut m = NovikovLaurentPoly::new(&k, 2);
    m.add_term(vec![1, 1], S::one(&k));
    let ds = m.log_derivatives();
    assert_eq!(ds, vec![m.clone(), m]);
}

#[test]
fn cp1_critical_points_by_substitution() {
    let set = solve(&presets::cpn(1), &BulkDeformation::trivial(2), 5);
    let k = &set.field;
    let mut leading: Vec<i64> = Vec::new();
    for pt in &set.points {
        let y = &pt.eta[0];
        // exact oracle: y dW/dy = y - T/y vanishes identically at y = +-T^{1/2}
        let resid = substitute(&set.potential.log_derivative(0), &pt.eta, &z(5));
        assert!(resid.has_no_terms());
        let (e, c) = y.leading().unwrap().clone();
        assert_eq!(e, r(1, 2));
        let sign = if k.is_one(&c) { 1 } else { -1 };
        assert_eq!(c, k.from_int(sign));
        leading.push(sign);
        assert_eq!(pt.critical_value, mono(k, 2 * sign, r(1, 2)));
    }
    leading.sort();
    assert_eq!(leading, vec![-1, 1]);
}

#[test]
fn cpn_critical_points_by_substitution() {
    for n in 1..=3usize {
        let set = solve(&presets::cpn(n), &BulkDeformation::trivial(n + 1), 4);
        let k = &set.field;
        assert_eq!(set.points.len(), n + 1);
        let e = r(1, n as i64 + 1);
        let mut zetas = Vec::new();
        for pt in &set.points {
            let (v, zeta) = pt.eta[0].leading().unwrap().clone();
            assert_eq!(v, e);
            assert!(k.is_one(&k.pow(&zeta, n as u64 + 1)));
            assert!(pt.eta.iter().all(|x| *x == NovikovSeries::monomial(k, zeta.clone(), e.clone())));
            let value = substitute(&set.potential, &pt.eta, &z(4));
            assert_eq!(value, NovikovSeries::monomial(k, k.mul(&k.from_int(n as i64 + 1), &zeta), e.clone()));
            assert_eq!(pt.critical_value, value);
            zetas.push(zeta);
        }
        zetas.dedup();
        assert_eq!(zetas.len(), n + 1);
    }
}

#[test]
fn hirzebruch_critical_points() {
    let alpha = r(1, 2);
    for n in [2i64, 4] {
        let p = presets::hirzebruch(n, alpha.clone());
        let mut set = solve(&p, &BulkDeformation::trivial(4), 4);
        assert_eq!(set.points.len() as i64, n + 2);
        let cl = classify_inside(&mut set.points, &p).unwrap();
        assert_eq!(cl.inside.len(), 4);
        assert_eq!(cl.outside.len() as i64, n - 2);
        let k = &set.field;
        let half = &(&Rat::one() - &alpha) / &z(2);
        for &i in &cl.inside {
            let (v, c) = set.points[i].eta[1].leading().unwrap().clone();
            assert_eq!(v, half);
            assert!(k.is_one(&c) || k.is_one(&k.neg(&c)));
        }
        if n == 2 {
            continue;
        }
        let nh = r(n, 2);
        let outer = &(&nh - &(&Rat::one() - &alpha)) / &(&nh - &Rat::one());
        for &i in &cl.outside {
            assert_eq!(set.points[i].val_vector[1], outer);
            assert!(outer > &Rat::one() - &alpha);
        }
    }
}

#[test]
fn hessian_examples() {
    let set = solve(&presets::cpn(1), &BulkDeformation::trivial(2), 5);
    for pt in &set.points {
        let h = hessian_certificate(&set.potential, &pt.eta, &z(5)).unwrap();
        // (y d/dy)^2 W = y + T/y, which at a critical point equals W itself
        let second = substitute(&build_ghv(&presets::cpn(1), &BulkDeformation::trivial(2)).unwrap(), &pt.eta, &z(5));
        assert_eq!(h.matrix[0][0], second);
        assert_eq!(h.det_valuation, r(1, 2));
        assert_eq!(pt.critical_value.valuation().unwrap(), Some(r(1, 2)));
    }

    let set = solve(&presets::cpn(2), &BulkDeformation::trivial(3), 4);
    for pt in &set.points {
        let h = hessian_certificate(&set.potential, &pt.eta, &z(4)).unwrap();
        assert_eq!(h.matrix.len(), 2);
        // oracle: 2x2 determinant by hand
        let d = &(&h.matrix[0][0] * &h.matrix[1][1]) - &(&h.matrix[0][1] * &h.matrix[1][0]);
        assert!(!d.has_no_terms());
        assert_eq!(d.valuation().unwrap(), Some(h.det_valuation.clone()));
    }

    // W = y^2/2 - 3y/2 - 1/(2y) has a double critical point at y = 1
    let k = qq();
    let mut w = NovikovLaurentPoly::new(&k, 1);
    w.add_term(vec![2], S::constant(&k, k.from_rat(&r(1, 2)).unwrap()));
    w.add_term(vec![1], S::constant(&k, k.from_rat(&r(-3, 2)).unwrap()));
    w.add_term(vec![-1], S::constant(&k, k.from_rat(&r(-1, 2)).unwrap()));
    let one = vec![S::one(&k)];
    assert!(substitute(&w.log_derivative(0), &one, &z(5)).is_exact_zero());
    assert!(substitute(&w.log_derivative(0).log_derivative(0), &one, &z(5)).is_exact_zero());
    assert!(matches!(hessian_certificate(&w, &one, &z(5)), Err(PotentialError::Degenerate)));
}

#[test]
fn convenient_examples() {
    for n in 1..=3usize {
        let w = build_ghv(&presets::cpn(n), &BulkDeformation::trivial(n + 1)).unwrap();
        let c = certify_convenient(&w, &z(4), DEFAULT_FIELD_BUDGET).unwrap();
        assert!(c.morse && c.distinct_values, "CP^{n}");
    }
    // the square: values 2(+-1 +-1)T^{1/2} collide at 0
    let w = build_ghv(&presets::cp1_x_cp1(), &BulkDeformation::trivial(4)).unwrap();
    let c = certify_convenient(&w, &z(4), DEFAULT_FIELD_BUDGET).unwrap();
    assert!(c.morse);
    assert!(!c.distinct_values);
    let zeros = c.critical_set.points.iter().filter(|p| p.critical_value.is_exact_zero()).count();
    assert_eq!(zeros, 2);
}

/// On F_2 the log-derivative system gives `W(eta) = 2 c_2 y_2` with
/// `c_2 y_2^2 = c_3 T^{1/2} + 2 c_1 y_1 y_2`, and `c_1 (y_1 y_2)^2 = c_4 T^2`.
/// The four values `2 c_2 y_2` are therefore pairwise distinct for every
/// nonzero bulk: two of them agree only if `c_1 c_4 = 0`.
#[test]
fn f2_values_never_collide() {
    let p = presets::hirzebruch(2, r(1, 2));
    for c in [[1, 1, 1, 1], [1, 2, 1, 2], [2, 1, 1, 2], [1, -1, 1, -1], [3, 1, -2, 1], [1, 1, -1, 1]] {
        let b = BulkDeformation::new(c.iter().map(|&x| GaussianRat::from_ints(x, 0)).collect()).unwrap();
        let w = build_ghv(&p, &b).unwrap();
        let cert = certify_convenient(&w, &z(4), DEFAULT_FIELD_BUDGET).unwrap();
        assert!(cert.morse, "{c:?}");
        assert!(cert.distinct_values, "{c:?}");
        let set = &cert.critical_set;
        let k = &set.field;
        assert_eq!(set.points.len(), 4);
        for pt in &set.points {
            let twice_c2_y2 = pt.eta[1].scale(&k.from_int(2 * c[1]));
            let diff = &pt.critical_value - &twice_c2_y2;
            assert!(diff.certified_val_at_least(&set.precision), "{c:?}");
        }
    }
}

#[test]
fn classify_examples() {
    let p = presets::cpn(1);
    let mut set = solve(&p, &BulkDeformation::trivial(2), 4);
    assert!(set.points.iter().all(|q| q.val_vector == vec![r(1, 2)]));
    let cl = classify_inside(&mut set.points, &p).unwrap();
    assert_eq!(cl.inside.len(), 2);
    assert!(set.points.iter().all(|q| q.inside == Some(true)));

    for n in 1..=3usize {
        let p = presets::cpn(n);
        let mut set = solve(&p, &BulkDeformation::trivial(n + 1), 4);
        let cl = classify_inside(&mut set.points, &p).unwrap();
        assert_eq!(cl.inside.len(), n + 1);
        assert_eq!(cl.inside.len(), p.vertex_count());
    }

    // a polytope with a facet through the valuation vector (1/2) of CP^1 points
    let half = floerkit::polytope::parse_polytope(
        r#"{"dim": 1, "facets": [{"v": [1], "lambda": "1/2"}, {"v": [-1], "lambda": "-1"}]}"#,
    )
    .unwrap();
    let mut set = solve(&p, &BulkDeformation::trivial(2), 4);
    assert!(matches!(classify_inside(&mut set.points, &half), Err(PotentialError::BoundaryCase { .. })));
}

fn opts(trials: usize) -> SearchOptions {
    SearchOptions { norm_bound: 3, trials, seed: 0, precision: z(4), field_budget: DEFAULT_FIELD_BUDGET }
}

#[test]
fn search_examples() {
    let out = search_convenient_bulk(&presets::cpn(1), &opts(1)).unwrap();
    assert_eq!(out.bulk, BulkDeformation::trivial(2));
    assert_eq!(out.trial, 1);

    let out = search_convenient_bulk(&presets::cpn(2), &opts(10)).unwrap();
    assert!(out.trial <= 10);
    assert!(out.bulk.coefficients().iter().all(|c| c.re.abs() <= z(3) && c.im.abs() <= z(3)));
    // independent re-certification of the returned bulk
    let w = build_ghv(&presets::cpn(2), &out.bulk).unwrap();
    let c = certify_convenient(&w, &z(4), DEFAULT_FIELD_BUDGET).unwrap();
    assert!(c.morse && c.distinct_values);

    let f2 = presets::hirzebruch(2, r(1, 2));
    let out = search_convenient_bulk(&f2, &opts(10)).unwrap();
    let mut pts = out.certificate.critical_set.points.clone();
    assert_eq!(classify_inside(&mut pts, &f2).unwrap().inside.len(), 4);

    let sq = presets::cp1_x_cp1();
    assert!(matches!(search_convenient_bulk(&sq, &opts(1)), Err(PotentialError::SearchExhausted { trials: 1 })));
}

#[test]
fn disk_weight_examples() {
    let p = presets::hirzebruch(2, r(1, 2));
    let b: BulkDeformation = "1,2,i,1-i".parse().unwrap();
    let u = [r(1, 3), r(1, 5)];
    let fiber = build_fiber_potential(&p, &b, &u).unwrap();
    let mut basic = Vec::new();
    for j in 0..4 {
        let mut alpha = vec![0u32; 4];
        alpha[j] = 1;
        let d = disk_weight(&p, &b, &u, &alpha).unwrap();
        assert_eq!(d.maslov, 2);
        assert_eq!(d.exponent, p.facets()[j].v);
        assert_eq!(Some(&d.coefficient), fiber.coefficient(&d.exponent));
        basic.push(d);
    }
    let d0 = disk_weight(&p, &b, &u, &[0, 0, 0, 0]).unwrap();
    assert_eq!(d0.maslov, 0);
    assert_eq!(d0.exponent, vec![0, 0]);
    assert_eq!(d0.coefficient, S::one(d0.coefficient.field()));

    let d11 = disk_weight(&p, &b, &u, &[1, 1, 0, 0]).unwrap();
    assert_eq!(d11.maslov, 4);
    assert_eq!(d11.coefficient, &basic[0].coefficient * &basic[1].coefficient);
    let sum: Vec<i64> = basic[0].exponent.iter().zip(&basic[1].exponent).map(|(a, b)| a + b).collect();
    assert_eq!(d11.exponent, sum);
    assert_eq!(d11.energy, &basic[0].energy + &basic[1].energy);
}

#[test]
fn ks_examples() {
    let p = presets::cpn(1);
    let b = BulkDeformation::trivial(2);
    let set = solve(&p, &b, 4);
    let k = &set.field;
    let etas = set.etas();
    let unit = ks_evaluate(&p, &b, &[0, 0], &etas, k, &z(4)).unwrap();
    assert!(unit.iter().all(|x| *x == S::one(k)));
    let first = ks_evaluate(&p, &b, &[1, 0], &etas, k, &z(4)).unwrap();
    for (x, eta) in first.iter().zip(&etas) {
        assert_eq!(x, &eta[0]);
    }
    assert_eq!(ks_surjectivity_check(&p, &b, &[vec![0, 0], vec![1, 0]], &etas, k, &z(4)).unwrap(), 2);
    assert_eq!(ks_surjectivity_check(&p, &b, &[vec![0, 0]], &etas, k, &z(4)).unwrap(), 1);
}

/// Leibniz expansion of a 4x4 determinant.
fn det4(m: &[Vec<S>]) -> S {
    let k = m[0][0].field().clone();
    let mut acc = S::zero(&k);
    let perms = permutations(4);
    for (perm, sign) in perms {
        let mut t = S::from_int(&k, sign);
        for (i, &j) in perm.iter().enumerate() {
            t = &t * &m[i][j];
        }
        acc = &acc + &t;
    }
    acc
}

fn permutations(n: usize) -> Vec<(Vec<usize>, i64)> {
    if n == 1 {
        return vec![(vec![0], 1)];
    }
    let mut out = Vec::new();
    for (p, s) in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            let swaps = (n - 1 - pos) as i64;
            out.push((q, if swaps % 2 == 0 { s } else { -s }));
        }
    }
    out
}

#[test]
fn ks_rank_on_f2() {
    let p = presets::hirzebruch(2, r(1, 2));
    let b = BulkDeformation::trivial(4);
    let mut set = solve(&p, &b, 4);
    let cl = classify_inside(&mut set.points, &p).unwrap();
    let etas: Vec<Vec<S>> = cl.inside.iter().map(|&i| set.points[i].eta.clone()).collect();
    let k = &set.field;
    let monomials = vec![vec![0, 0, 0, 0], vec![1, 0, 0, 0], vec![0, 1, 0, 0], vec![1, 1, 0, 0]];
    assert_eq!(ks_surjectivity_check(&p, &b, &monomials, &etas, k, &z(4)).unwrap(), 4);
    let m: Vec<Vec<S>> =
        monomials.iter().map(|a| ks_evaluate(&p, &b, a, &etas, k, &z(4)).unwrap()).collect();
    let d = det4(&m);
    assert!(!d.has_no_terms());
    assert_eq!(linalg::rank(k, &m).unwrap(), 4);
}

#[test]
fn ks_sum_is_critical_value() {
    for (p, b) in [
        (presets::cpn(2), "2,1,4".parse::<BulkDeformation>().unwrap()),
        (presets::hirzebruch(2, r(1, 2)), BulkDeformation::trivial(4)),
    ] {
        let mut set = solve(&p, &b, 4);
        let cl = classify_inside(&mut set.points, &p).unwrap();
        let k = set.field.clone();
        for &i in &cl.inside {
            let eta = vec![set.points[i].eta.clone()];
            let mut sum = S::zero(&k);
            for j in 0..p.facet_count() {
                let mut alpha = vec![0u32; p.facet_count()];
                alpha[j] = 1;
                sum = &sum + &ks_evaluate(&p, &b, &alpha, &eta, &k, &z(4)).unwrap()[0];
            }
            let diff = &sum - &set.points[i].critical_value;
            assert!(diff.certified_val_at_least(&z(4)));
        }
    }
}

fn family() -> impl Strategy<Value = (Polytope, BulkDeformation)> {
    prop_oneof![
        Just((presets::cpn(1), BulkDeformation::trivial(2))),
        Just((presets::cpn(2), BulkDeformation::trivial(3))),
        Just((presets::cpn(2), "2,1,4".parse().unwrap())),
        Just((presets::hirzebruch(2, r(1, 2)), BulkDeformation::trivial(4))),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn residuals_counts_and_translation((p, b) in family(), a in -4i64..=4, c in -4i64..=4, d in 1i64..=3) {
        let zz = z(4);
        let mut set = solve(&p, &b, 4);
        for pt in &set.points {
            prop_assert!(residual_certified(&set.potential, &pt.eta, &zz).unwrap());
            prop_assert!(pt.precision >= zz);
        }
        prop_assert!(set.points.len() as u64 <= p.kouchnirenko_bound());
        let cl = classify_inside(&mut set.points, &p).unwrap();
        let morse = set.points.iter().all(|q| q.hessian_val.is_some());
        if morse {
            prop_assert_eq!(cl.inside.len(), p.vertex_count());
        }

        let t: Vec<Rat> = [r(a, d), r(c, d)][..p.dim()].to_vec();
        let q = p.translate(&t);
        let mut moved = solve(&q, &b, 4);
        let cl2 = classify_inside(&mut moved.points, &q).unwrap();
        prop_assert_eq!(moved.points.len(), set.points.len());
        prop_assert_eq!(cl2.inside.len(), cl.inside.len());
        prop_assert_eq!(moved.field.conductor(), set.field.conductor());
        for pt in &set.points {
            let shifted: Vec<S> = pt.eta.iter().zip(&t).map(|(x, ti)| x.shift(ti)).collect();
            let vv: Vec<Rat> = pt.val_vector.iter().zip(&t).map(|(x, ti)| x + ti).collect();
            let twin = moved.points.iter().find(|m| m.eta == shifted);
            prop_assert!(twin.is_some());
            let twin = twin.unwrap();
            prop_assert_eq!(&twin.val_vector, &vv);
            prop_assert_eq!(twin.inside, pt.inside);
            prop_assert_eq!(twin.hessian_val.is_some(), pt.hessian_val.is_some());
            prop_assert_eq!(&twin.critical_value, &pt.critical_value);
        }
    }
}
