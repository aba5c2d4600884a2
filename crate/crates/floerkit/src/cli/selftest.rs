//! Built-in example suite run by `floerkit selftest`.

use serde_json::{json, Value};

use crate::coeff::{Field, FiniteField, NumberField, QField, Rat};
use crate::filtered::{parse_complex, AnyComplex};
use crate::novikov::linalg::zeros;
use crate::novikov::NovikovSeries;
use crate::polytope::presets;
use crate::potential::{build_ghv, certify_convenient, classify_inside, BulkDeformation, DEFAULT_FIELD_BUDGET};
use crate::semisimple::{certify_semisimple, clifford_from_hessian, exclusion_primes, mod_p_transfer, AlgebraOverNovikov};
use crate::tate::{quasi_frobenius_check, BorelMorseComplex};

use super::header;

type Check = fn() -> Result<(), String>;

fn ensure(cond: bool, msg: &str) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.to_string())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn cp1_critical_points() -> Result<(), String> {
    let p = presets::cpn(1);
    let w = build_ghv(&p, &BulkDeformation::trivial(2)).map_err(err)?;
    let cert = certify_convenient(&w, &Rat::from_int(5), DEFAULT_FIELD_BUDGET).map_err(err)?;
    ensure(cert.morse && cert.distinct_values, "CP1 is not convenient")?;
    let mut pts = cert.critical_set.points.clone();
    let cl = classify_inside(&mut pts, &p).map_err(err)?;
    ensure(pts.len() == 2 && cl.inside.len() == 2, "CP1 must have two inside points")?;
    let k = &cert.critical_set.field;
    let two_root = NovikovSeries::monomial(k, k.from_int(2), Rat::new(1, 2));
    let signs: Vec<bool> = pts
        .iter()
        .map(|q| (&q.critical_value - &two_root).has_no_terms())
        .collect();
    let matched = pts
        .iter()
        .zip(&signs)
        .all(|(q, &plus)| plus || (&q.critical_value + &two_root).has_no_terms());
    ensure(matched && signs[0] != signs[1], "CP1 critical values must be +-2T^(1/2)")
}

fn cpn_counts() -> Result<(), String> {
    for n in 1..=3usize {
        let p = presets::cpn(n);
        let w = build_ghv(&p, &BulkDeformation::trivial(n + 1)).map_err(err)?;
        let cert = certify_convenient(&w, &Rat::from_int(3), DEFAULT_FIELD_BUDGET).map_err(err)?;
        ensure(cert.critical_set.points.len() == n + 1, "CP^n must have n+1 critical points")?;
        let v = Rat::new(1, n as i64 + 1);
        ensure(
            cert.critical_set.points.iter().all(|q| q.val_vector.iter().all(|x| *x == v)),
            "CP^n coordinates must have valuation 1/(n+1)",
        )?;
    }
    Ok(())
}

fn f4_inside_outside() -> Result<(), String> {
    let p = presets::hirzebruch(4, Rat::new(1, 2));
    let w = build_ghv(&p, &BulkDeformation::trivial(4)).map_err(err)?;
    let set = crate::potential::critical_points(&w, &Rat::from_int(4), DEFAULT_FIELD_BUDGET).map_err(err)?;
    let mut pts = set.points.clone();
    let cl = classify_inside(&mut pts, &p).map_err(err)?;
    ensure(cl.inside.len() == 4 && cl.outside.len() == 2, "F4 must have 4 inside and 2 outside points")?;
    ensure(cl.inside.iter().all(|&i| pts[i].val_vector[1] == Rat::new(1, 4)), "inside points need v(y2) = 1/4")?;
    ensure(cl.outside.iter().all(|&i| pts[i].val_vector[1] == Rat::new(3, 2)), "outside points need v(y2) = 3/2")
}

fn preset_counts() -> Result<(), String> {
    for (name, vertices, bound) in [("cp1", 2, 2), ("cp2", 3, 3), ("f2", 4, 4), ("f4", 4, 6)] {
        let p = presets::by_name(name).ok_or("missing preset")?;
        ensure(p.vertex_count() == vertices, "vertex count")?;
        ensure(p.kouchnirenko_bound() == bound, "Kouchnirenko bound")?;
    }
    Ok(())
}

fn single_bar_barcode() -> Result<(), String> {
    let text = r#"{"field": "Q", "generators": [
        {"label": "x", "degree": 1, "action": "0"}, {"label": "y", "degree": 0, "action": "0"}],
        "differential": [{"from": "x", "to": "y", "series": "T^(1/2)"}]}"#;
    let AnyComplex::Rational(c) = parse_complex(text).map_err(err)? else {
        return Err("expected a rational complex".into());
    };
    let b = c.barcode().map_err(err)?;
    ensure(b.finite == vec![Rat::new(1, 2)] && b.infinite == 0, "one bar of length 1/2")?;
    ensure(b.endpoint_count() == c.len(), "endpoint identity")
}

fn borel_ranks() -> Result<(), String> {
    for p in [3u64, 5] {
        let b = BorelMorseComplex::new(p, 3).ok_or("odd prime rejected")?;
        ensure(b.d_squared_is_zero() && b.is_equivariant(), "Borel model is not an equivariant complex")?;
        let k = FiniteField::prime(p).map_err(err)?;
        ensure(b.homology_ranks(&k) == vec![1; 7], "rank 1 in every degree mod p")?;
        ensure(b.homology_ranks(&QField)[1..].iter().all(|&r| r == 0), "rationally acyclic above degree 0")?;
    }
    Ok(())
}

fn tate_half_bar() -> Result<(), String> {
    let k = FiniteField::prime(3).map_err(err)?;
    let gens = vec![
        crate::filtered::Generator::new("x", 1, Rat::zero()),
        crate::filtered::Generator::new("y", 0, Rat::zero()),
    ];
    let mut d = zeros(&k, 2, 2);
    d[1][0] = NovikovSeries::t_pow(&k, Rat::new(1, 2));
    let c = crate::filtered::FilteredComplex::new(&k, gens, d, crate::filtered::Mode::Verbose).map_err(err)?;
    let r = quasi_frobenius_check(&c, 3, 4).map_err(err)?;
    ensure(r.tate.total() == Rat::new(3, 2), "Tate torsion must be 3/2")?;
    ensure(r.ok(), "quasi-Frobenius comparison failed")
}

fn cp1_transfer() -> Result<(), String> {
    let k = NumberField::rationals();
    let alg = AlgebraOverNovikov::quantum_cpn(&k, 1);
    let a = AlgebraOverNovikov::quantum_cpn_c1(&k, 1);
    let z = Rat::from_int(8);
    let src = certify_semisimple(&alg, &a, &z, DEFAULT_FIELD_BUDGET).map_err(err)?;
    ensure(src.valuations.iter().all(|v| *v == Rat::new(1, 2)), "CP1 idempotent valuation 1/2")?;
    for p in [5u64, 7, 11, 13] {
        let r = mod_p_transfer(&alg, &a, p, &z, DEFAULT_FIELD_BUDGET).map_err(err)?;
        ensure(r.valuations_match, "valuations must not depend on p")?;
    }
    ensure(mod_p_transfer(&alg, &a, 2, &z, DEFAULT_FIELD_BUDGET).is_err(), "p = 2 must be rejected")?;
    let primes = exclusion_primes(&alg, &a).map_err(err)?;
    ensure(primes.iter().map(|p| p.to_string()).collect::<Vec<_>>() == ["2"], "CP1 excludes only 2")
}

fn clifford_identity_form() -> Result<(), String> {
    let k = QField;
    let mut h = zeros(&k, 2, 2);
    h[0][0] = NovikovSeries::one(&k);
    h[1][1] = NovikovSeries::one(&k);
    let alg = clifford_from_hessian(&k, &h).map_err(err)?;
    let x1 = alg.basis_vector(1);
    let x2 = alg.basis_vector(2);
    let sum: Vec<_> = alg.mul(&x1, &x2).iter().zip(alg.mul(&x2, &x1)).map(|(a, b)| a + &b).collect();
    ensure(sum.iter().all(NovikovSeries::is_exact_zero), "x1 x2 + x2 x1 must vanish")
}

/// The suite as `(name, check)` pairs.
pub fn checks() -> Vec<(&'static str, Check)> {
    vec![
        ("cp1_critical_points", cp1_critical_points as Check),
        ("cpn_counts", cpn_counts),
        ("f4_inside_outside", f4_inside_outside),
        ("preset_counts", preset_counts),
        ("single_bar_barcode", single_bar_barcode),
        ("borel_ranks", borel_ranks),
        ("tate_half_bar", tate_half_bar),
        ("cp1_transfer", cp1_transfer),
        ("clifford_identity_form", clifford_identity_form),
    ]
}

/// Runs the suite; the flag is true when every check passed.
pub fn selftest() -> (Value, bool) {
    let mut results = Vec::new();
    let mut all = true;
    for (name, f) in checks() {
        let r = f();
        all &= r.is_ok();
        results.push(match r {
            Ok(()) => json!({"name": name, "ok": true}),
            Err(e) => json!({"name": name, "ok": false, "message": e}),
        });
    }
    let mut m = header("selftest");
    m.insert("checks".into(), Value::Array(results));
    m.insert("ok".into(), json!(all));
    (Value::Object(m), all)
}
