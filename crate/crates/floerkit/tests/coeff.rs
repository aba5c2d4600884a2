use floerkit::coeff::{extend_field, reduce_mod_p, CoeffError, Field, FiniteField, GaussianRat, NumberField, QField, Rat};
use proptest::prelude::*;

/// Brute-force inverse of `a` modulo the prime `p`.
fn inverse_by_search(a: u64, p: u64) -> u64 {
    (1..p).find(|x| (a * x) % p == 1).expect("nonzero residue")
}

/// True when the quadratic `x^2 + b x + c` has a root in `F_p`.
fn quadratic_has_root(p: u64, b: u64, c: u64) -> bool {
    (0..p).any(|x| (x * x + b * x + c) % p == 0)
}

#[test]
fn reduce_unit_is_unit() {
    let r = reduce_mod_p(&GaussianRat::one(), 5).unwrap();
    assert_eq!(r.coeffs, r.field.one());
}

#[test]
fn reduce_half_mod_seven() {
    let r = reduce_mod_p(&GaussianRat::new(Rat::new(1, 2), Rat::zero()), 7).unwrap();
    let want = inverse_by_search(2, 7);
    assert_eq!(want, 4);
    assert_eq!(r.coeffs, r.field.from_u64(want));
}

#[test]
fn reduce_i_mod_five_is_a_square_root_of_minus_one() {
    let r = reduce_mod_p(&GaussianRat::i(), 5).unwrap();
    assert_eq!(r.field.degree(), 1);
    let roots: Vec<u64> = (0..5u64).filter(|x| (x * x + 1) % 5 == 0).collect();
    assert_eq!(roots, vec![2, 3]);
    assert!(roots.iter().any(|&x| r.coeffs == r.field.from_u64(x)));
    // the fixed choice is the smallest root
    assert_eq!(r.coeffs, r.field.from_u64(2));
}

#[test]
fn reduce_i_mod_three_adjoins_a_root() {
    let r = reduce_mod_p(&GaussianRat::i(), 3).unwrap();
    assert_eq!(r.field.degree(), 2);
    let k = &r.field;
    assert_eq!(k.add(&k.mul(&r.coeffs, &r.coeffs), &k.one()), k.zero());
}

#[test]
fn reduce_rejects_divisible_denominator() {
    let e = reduce_mod_p(&GaussianRat::new(Rat::new(1, 7), Rat::zero()), 7).unwrap_err();
    assert_eq!(e, CoeffError::DenominatorDivisibleByP { p: 7 });
}

#[test]
fn extend_three_by_x2_plus_1() {
    assert!(!quadratic_has_root(3, 0, 1));
    let k = extend_field(3, &[1, 0, 1]).unwrap();
    assert_eq!(k.degree(), 2);
    assert_eq!(k.order(), 9u32.into());
}

#[test]
fn extend_five_by_x2_plus_2() {
    assert!(!quadratic_has_root(5, 0, 2));
    let k = extend_field(5, &[2, 0, 1]).unwrap();
    assert_eq!(k.order(), 25u32.into());
    // every nonzero element is invertible
    for a in k.elements() {
        if !k.is_zero(&a) {
            let inv = k.inv(&a).unwrap();
            assert_eq!(k.mul(&a, &inv), k.one());
        }
    }
}

#[test]
fn extend_five_by_x2_plus_1_is_reducible() {
    assert!(quadratic_has_root(5, 0, 1));
    assert!(matches!(extend_field(5, &[1, 0, 1]), Err(CoeffError::ReduciblePolynomial { p: 5, .. })));
}

fn check_field_axioms<F: Field>(k: &F, a: &F::Elem, b: &F::Elem, c: &F::Elem) {
    assert_eq!(k.mul(&k.mul(a, b), c), k.mul(a, &k.mul(b, c)));
    assert_eq!(k.add(&k.add(a, b), c), k.add(a, &k.add(b, c)));
    assert_eq!(k.mul(a, &k.add(b, c)), k.add(&k.mul(a, b), &k.mul(a, c)));
    assert_eq!(k.mul(a, b), k.mul(b, a));
    assert_eq!(k.add(a, &k.neg(a)), k.zero());
    if !k.is_zero(a) {
        assert_eq!(k.mul(a, &k.inv(a).unwrap()), k.one());
    } else {
        assert!(k.inv(a).is_none());
    }
}

fn small_rat() -> impl Strategy<Value = Rat> {
    (-20i64..=20, 1i64..=9).prop_map(|(n, d)| Rat::new(n, d))
}

fn gaussian() -> impl Strategy<Value = GaussianRat> {
    (small_rat(), small_rat()).prop_map(|(a, b)| GaussianRat::new(a, b))
}

proptest! {
    #[test]
    fn rational_field_axioms(a in small_rat(), b in small_rat(), c in small_rat()) {
        check_field_axioms(&QField, &a, &b, &c);
    }

    #[test]
    fn gaussian_field_axioms(a in gaussian(), b in gaussian(), c in gaussian()) {
        let k = NumberField::gaussian();
        let e = |x: &GaussianRat| k.embed_gaussian(x).unwrap();
        check_field_axioms(&k, &e(&a), &e(&b), &e(&c));
        // the struct arithmetic agrees with the field handle
        prop_assert_eq!(e(&(&a * &b)), k.mul(&e(&a), &e(&b)));
        prop_assert_eq!(a.norm().is_zero(), a.is_zero());
        if let Some(ai) = a.inv() {
            prop_assert_eq!(&a * &ai, GaussianRat::one());
        }
    }

    #[test]
    fn finite_field_axioms(
        pi in 0usize..4,
        deg in 1usize..=3,
        x in any::<u64>(),
        y in any::<u64>(),
        z in any::<u64>(),
    ) {
        let p = [2u64, 3, 5, 7][pi];
        let k = FiniteField::smallest_extension(p, deg).unwrap();
        let n = (p as u128).pow(deg as u32);
        let pick = |t: u64| k.elem_from_index(t as u128 % n);
        check_field_axioms(&k, &pick(x), &pick(y), &pick(z));
    }

    #[test]
    fn reduction_is_multiplicative(a in gaussian(), b in gaussian(), pi in 0usize..5) {
        let p = [3u64, 5, 11, 13, 17][pi];
        let lhs = reduce_mod_p(&(&a * &b), p);
        if let (Ok(ra), Ok(rb), Ok(rab)) = (reduce_mod_p(&a, p), reduce_mod_p(&b, p), lhs) {
            let k = &ra.field;
            prop_assert_eq!(rab.coeffs, k.mul(&ra.coeffs, &rb.coeffs));
            let rs = reduce_mod_p(&(&a + &b), p).unwrap();
            prop_assert_eq!(rs.coeffs, k.add(&ra.coeffs, &rb.coeffs));
        }
    }
}
