use hpw::curve::geometric_grid;
use hpw::error::Error;
use hpw::weights::{
    classify_big_space, classify_small_space, limit_at_zero, neglog_curve, AffineWitness, LimitTrend, LimitValue,
};
use hpw::{ClassificationVerdict, Weight};
use proptest::prelude::*;

fn weight(src: &str) -> Weight {
    Weight::parse(src).unwrap()
}

fn verdicts(src: &str) -> (&'static str, &'static str) {
    let w = weight(src);
    (classify_big_space(&w).name(), classify_small_space(&w).unwrap().name())
}

#[test]
fn example_weights() {
    assert_eq!(verdicts("1"), ("nontrivial", "trivial"));
    assert_eq!(verdicts("t"), ("nontrivial", "nontrivial"));
    assert_eq!(verdicts("t + exp(t)"), ("nontrivial", "trivial"));
    assert_eq!(verdicts("exp(t^2)"), ("trivial", "trivial"));
}

#[test]
fn weight_construction() {
    assert!(Weight::parse("t").is_ok());
    assert!(Weight::parse("1").is_ok());
    assert!(matches!(Weight::parse("t - 1"), Err(Error::NonPositiveWeight { .. })));
    assert!(Weight::parse("z").is_err());
}

#[test]
fn neglog_values() {
    let at = |src: &str, t: f64| {
        let c = neglog_curve(&weight(src));
        let v = c.points().find(|p| p.0 == t).unwrap().1;
        v
    };
    assert_eq!(at("1", 2.0), 0.0);
    assert!((at("exp(t^2)", 2.0) + 4.0).abs() < 1e-12);
    assert_eq!(at("t", 1.0), 0.0);
    assert!((-weight("t").log_p(std::f64::consts::E).unwrap() + 1.0).abs() < 1e-15);
}

#[test]
fn exact_witnesses_hold() {
    let dense = geometric_grid(2f64.powi(-40), 2f64.powi(40), 20_001);
    let check = |src: &str, a: f64, b: f64| {
        let w = weight(src);
        let pts: Vec<(f64, f64)> = dense.iter().map(|&t| (t, -w.log_p(t).unwrap())).collect();
        assert!(AffineWitness { a, b }.holds_on(pts), "{} ({}, {})", src, a, b);
    };
    check("1", 0.0, 0.0);
    check("t", -1.0, 1.0);
    check("t + exp(t)", -1.0, -(2f64.ln()));
}

#[test]
fn t_minus_log_t_has_minimum_one() {
    let w = weight("t");
    let m = w
        .probe_grid()
        .iter()
        .map(|&t| t - w.log_p(t).unwrap())
        .fold(f64::INFINITY, f64::min);
    // The probe grid has t = 1 exactly.
    assert!((m - 1.0).abs() < 1e-12, "{}", m);
}

#[test]
fn witnesses_hold_on_refined_grid() {
    for src in ["1", "t", "t + exp(t)", "t^3 + exp(2*t)", "exp(-1/t)*t"] {
        let w = weight(src);
        let v = classify_big_space(&w);
        let a = v.witness().unwrap_or_else(|| panic!("{}: {:?}", src, v.name()));
        let refined = geometric_grid(2f64.powi(-40), 2f64.powi(40), 481 * 3 - 2);
        let pts: Vec<(f64, f64)> = refined.iter().map(|&t| (t, -w.log_p(t).unwrap())).collect();
        assert!(a.holds_on(pts.iter().copied()), "{}: {:?}", src, a);
        for delta in [1e-6, 1.0, 100.0] {
            assert!(AffineWitness { a: a.a, b: a.b - delta }.holds_on(pts.iter().copied()));
        }
    }
}

#[test]
fn limits_at_zero() {
    let l = limit_at_zero(&weight("t")).unwrap();
    assert_eq!(l.trend, LimitTrend::ConvergedToZero);
    let l = limit_at_zero(&weight("1")).unwrap();
    assert_eq!((l.trend, l.value), (LimitTrend::ConvergedNonzero, LimitValue::Finite(1.0)));
    let l = limit_at_zero(&weight("t + exp(t)")).unwrap();
    assert_eq!(l.trend, LimitTrend::ConvergedNonzero);
    match l.value {
        LimitValue::Finite(v) => assert!((v - 1.0).abs() < 1e-9),
        other => panic!("{:?}", other),
    }
    let l = limit_at_zero(&weight("1/t")).unwrap();
    assert_eq!((l.trend, l.value), (LimitTrend::Diverging, LimitValue::PosInfinity));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn small_space_never_beats_big_space(k in -2i32..4, c in -3.0f64..3.0, m in 1i32..4) {
        let src = format!("t^{} * exp({}*t^{})", k, c, m);
        let w = Weight::parse(&src).unwrap();
        let big = classify_big_space(&w);
        let small = classify_small_space(&w).unwrap();
        if big.is_trivial() {
            prop_assert!(!small.is_nontrivial(), "{}", src);
        }
        if let ClassificationVerdict::Nontrivial { witness } = big {
            let pts: Vec<(f64, f64)> = w.probe_grid().iter().map(|&t| (t, -w.log_p(t).unwrap())).collect();
            prop_assert!(witness.holds_on(pts), "{}", src);
        }
    }
}
