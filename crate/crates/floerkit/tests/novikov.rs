use std::collections::BTreeMap;

use floerkit::coeff::{CoeffError, Field, FiniteField, NumberField, QField, Rat};
use floerkit::novikov::{reduce_series_mod_p, NovikovError, NovikovSeries};
use proptest::prelude::*;

type S = NovikovSeries<QField>;

fn q(text: &str) -> S {
    NovikovSeries::parse(&QField, text).unwrap()
}

fn nf(text: &str) -> NovikovSeries<NumberField> {
    NovikovSeries::parse(&NumberField::rationals(), text).unwrap()
}

/// Brute-force convolution on plain maps from exponent to coefficient.
fn convolve(a: &S, b: &S) -> BTreeMap<Rat, Rat> {
    let mut out: BTreeMap<Rat, Rat> = BTreeMap::new();
    for (ea, ca) in a.terms() {
        for (eb, cb) in b.terms() {
            let slot = out.entry(ea + eb).or_insert_with(Rat::zero);
            *slot = &*slot + &(ca * cb);
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn as_map(s: &S) -> BTreeMap<Rat, Rat> {
    s.terms().iter().cloned().collect()
}

#[test]
fn valuation_of_exact_zero_is_infinite() {
    assert_eq!(S::zero(&QField).valuation().unwrap(), None);
}

#[test]
fn valuation_is_smallest_exponent() {
    assert_eq!(q("2T^(1/2) - T^3").valuation().unwrap(), Some(Rat::new(1, 2)));
}

#[test]
fn valuation_of_pure_error_term_is_indeterminate() {
    let s = S::big_o(&QField, Rat::from_int(3));
    assert_eq!(s.valuation(), Err(NovikovError::IndeterminateValuation(Rat::from_int(3))));
}

#[test]
fn addition_cancels_terms() {
    assert_eq!(&q("T + T^2") + &q("-T"), q("T^2"));
}

#[test]
fn product_of_conjugates() {
    assert_eq!(&q("1 + T") * &q("1 - T"), q("1 - T^2"));
}

#[test]
fn precision_of_sum_and_product() {
    let s = q("1 + T + O(T^3)");
    let t = q("T^(1/2) + O(T^2)");
    assert_eq!((&s + &t).precision(), Some(&Rat::from_int(2)));
    // min(v(s) + 2, v(t) + 3) = min(2, 7/2)
    assert_eq!((&s * &t).precision(), Some(&Rat::from_int(2)));
}

#[test]
fn mixing_fields_is_rejected() {
    let a = NovikovSeries::one(&FiniteField::prime(3).unwrap());
    let b = NovikovSeries::one(&FiniteField::prime(5).unwrap());
    assert_eq!(a.checked_add(&b), Err(NovikovError::FieldMismatch));
    assert_eq!(a.checked_mul(&b), Err(NovikovError::FieldMismatch));
}

#[test]
fn invert_one() {
    assert_eq!(S::one(&QField).invert(&Rat::from_int(5)).unwrap(), S::one(&QField));
}

#[test]
fn invert_monomial() {
    let inv = q("T^(1/2)").invert(&Rat::from_int(3)).unwrap();
    assert_eq!(inv, S::t_pow(&QField, Rat::new(-1, 2)));
}

#[test]
fn invert_geometric_series() {
    let s = q("1 - T");
    let inv = s.invert(&Rat::from_int(3)).unwrap();
    assert_eq!(inv, q("1 + T + T^2 + O(T^3)"));
    // oracle: the exact product with the stored terms is 1 - T^3
    let prod = convolve(&s, &inv.exact_part());
    assert_eq!(prod, as_map(&q("1 - T^3")));
}

#[test]
fn invert_zero_fails() {
    assert_eq!(S::zero(&QField).invert(&Rat::one()), Err(NovikovError::NotInvertible));
}

#[test]
fn truncate_drops_high_terms() {
    assert_eq!(q("1 + T + T^5").truncate(&Rat::from_int(2)), q("1 + T"));
    let s = q("3 - T^(2/3) + 7T^4");
    assert_eq!(s.truncate(&Rat::from_int(4)), s);
    assert_eq!(s.truncate(&Rat::from_int(9)), s);
}

#[test]
fn reduce_series_with_half() {
    let r = reduce_series_mod_p(&nf("1 + (1/2)T"), 7).unwrap();
    let k = r.field().clone();
    assert_eq!(k.p(), 7);
    let want = NovikovSeries::new(k.clone(), [(Rat::zero(), k.one()), (Rat::one(), k.from_u64(4))], None);
    assert_eq!(r, want);
}

#[test]
fn reduce_zero_series() {
    let r = reduce_series_mod_p(&NovikovSeries::zero(&NumberField::rationals()), 5).unwrap();
    assert!(r.is_exact_zero());
}

#[test]
fn reduce_rejects_p_in_denominator() {
    assert_eq!(
        reduce_series_mod_p(&nf("1 + (1/7)T"), 7),
        Err(CoeffError::DenominatorDivisibleByP { p: 7 })
    );
}

#[test]
fn rescale_examples() {
    assert_eq!(q("T").rescale_p(3), S::t_pow(&QField, Rat::new(1, 3)));
    assert_eq!(S::one(&QField).rescale_p(5), S::one(&QField));
}

fn exponent() -> impl Strategy<Value = Rat> {
    (-6i64..=24, 1i64..=4).prop_map(|(n, d)| Rat::new(n, d))
}

fn coefficient() -> impl Strategy<Value = Rat> {
    (-9i64..=9, 1i64..=5).prop_map(|(n, d)| Rat::new(n, d))
}

fn series(max_terms: usize) -> impl Strategy<Value = S> {
    prop::collection::vec((exponent(), coefficient()), 0..=max_terms)
        .prop_map(|terms| NovikovSeries::new(QField, terms, None))
}

fn nonzero_series(max_terms: usize) -> impl Strategy<Value = S> {
    series(max_terms).prop_filter("nonzero", |s| !s.is_exact_zero())
}

/// Series over `Q` whose coefficients have denominators prime to 7.
fn reducible_series() -> impl Strategy<Value = NovikovSeries<NumberField>> {
    prop::collection::vec((exponent(), -9i64..=9, prop::sample::select(vec![1i64, 2, 3, 4, 5, 6, 8])), 0..=5)
        .prop_map(|terms| {
            let k = NumberField::rationals();
            let terms: Vec<_> = terms.into_iter().map(|(e, n, d)| (e, k.from_rational(&Rat::new(n, d)))).collect();
            NovikovSeries::new(k, terms, None)
        })
}

proptest! {
    #[test]
    fn product_matches_convolution(a in series(5), b in series(5)) {
        prop_assert_eq!(as_map(&(&a * &b)), convolve(&a, &b));
        prop_assert!((&a * &b).is_exact());
    }

    #[test]
    fn valuation_is_additive(a in nonzero_series(5), b in nonzero_series(5)) {
        let va = a.valuation().unwrap().unwrap();
        let vb = b.valuation().unwrap().unwrap();
        prop_assert_eq!((&a * &b).valuation().unwrap(), Some(&va + &vb));
    }

    #[test]
    fn ultrametric_inequality(a in nonzero_series(4), b in nonzero_series(4)) {
        let va = a.valuation().unwrap().unwrap();
        let vb = b.valuation().unwrap().unwrap();
        let sum = &a + &b;
        if let Some(vs) = sum.valuation().unwrap() {
            prop_assert!(vs >= Rat::min(&va, &vb));
            if va != vb {
                prop_assert_eq!(vs, Rat::min(&va, &vb));
            }
        } else {
            prop_assert_eq!(va, vb);
        }
    }

    #[test]
    fn truncation_error_has_valuation_at_least_z(a in series(6), z in exponent()) {
        let diff = &a - &a.truncate(&z);
        prop_assert!(diff.terms().iter().all(|(e, _)| e > &z));
        prop_assert!(diff.certified_val_at_least(&z));
    }

    #[test]
    fn inverse_is_correct_to_target(a in nonzero_series(4), target in 1i64..=6) {
        let target = Rat::from_int(target);
        let v = a.valuation().unwrap().unwrap();
        let inv = a.invert(&target).unwrap();
        let err = &(&a * &inv) - &S::one(&QField);
        prop_assert!(err.certified_val_at_least(&(&target - &v)));
    }

    #[test]
    fn rescale_divides_valuation(a in nonzero_series(5), p in prop::sample::select(vec![2u64, 3, 5, 7])) {
        let v = a.valuation().unwrap().unwrap();
        prop_assert_eq!(a.rescale_p(p).valuation().unwrap(), Some(&v / &Rat::from_int(p as i64)));
    }

    #[test]
    fn reduction_is_a_ring_map(a in reducible_series(), b in reducible_series()) {
        let r = |s: &NovikovSeries<NumberField>| reduce_series_mod_p(s, 7).unwrap();
        prop_assert_eq!(r(&(&a + &b)), &r(&a) + &r(&b));
        prop_assert_eq!(r(&(&a * &b)), &r(&a) * &r(&b));
    }

    #[test]
    fn truncate_reduce_rescale_commute(a in reducible_series(), z in exponent(), p in prop::sample::select(vec![3u64, 5])) {
        let r = |s: &NovikovSeries<NumberField>| reduce_series_mod_p(s, 7).unwrap();
        prop_assert_eq!(r(&a.truncate(&z)), r(&a).truncate(&z));
        prop_assert_eq!(r(&a.rescale_p(p)), r(&a).rescale_p(p));
        let zp = &z / &Rat::from_int(p as i64);
        prop_assert_eq!(a.truncate(&z).rescale_p(p), a.rescale_p(p).truncate(&zp));
    }
}
