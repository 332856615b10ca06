use hpw::curve::geometric_grid;
use hpw::error::Error;
use hpw::linemax::{
    affine_minorant_of_curve, check_log_convexity, line_max, line_max_with, mf_curve, LineMaxOptions, LineStatus,
};
use hpw::{Complex64, Expr, SampledCurve};

const FIXTURES: &[&str] = &[
    "exp(2*i*z)",
    "1/(z+i)",
    "exp(2*i*z)/(z+i)",
    "4/(1-i*z)^2",
    "1/(z-3+2*i) + 0.5/(z+5+i)",
];

fn f(src: &str) -> Expr {
    Expr::parse(src, "z").unwrap()
}

fn brute_force(e: &Expr, y: f64) -> f64 {
    let n = 1_000_000;
    (0..=n)
        .map(|k| {
            let x = -100.0 + 200.0 * k as f64 / n as f64;
            e.eval_complex(Complex64::new(x, y)).unwrap().norm()
        })
        .fold(0.0, f64::max)
}

#[test]
fn line_max_matches_dense_scan() {
    for src in FIXTURES {
        let e = f(src);
        for y in [0.5, 1.0, 2.0] {
            let oracle = brute_force(&e, y);
            let m = line_max(&e, y).unwrap();
            assert!(
                (m.value - oracle).abs() <= 1e-6 * oracle,
                "{} y={}: {} vs oracle {}",
                src,
                y,
                m.value,
                oracle
            );
            assert!(m.value >= oracle * (1.0 - 1e-12));
        }
    }
}

#[test]
fn line_max_examples() {
    let m = line_max(&f("1/(z+i)"), 1.0).unwrap();
    assert!((m.value - 0.5).abs() < 1e-12);
    assert!(m.argmax_x.unwrap().abs() < 1e-8);
    assert_eq!(m.status, LineStatus::Converged);

    let m = line_max(&f("exp(2*i*z)"), 0.5).unwrap();
    assert!((m.value - (-1f64).exp()).abs() < 1e-12);
    assert_eq!(m.status, LineStatus::NonDecaying);

    let m = line_max(&f("0"), 1.0).unwrap();
    assert_eq!(m.value, 0.0);
}

#[test]
fn mf_curve_closed_forms() {
    let c = mf_curve(&f("exp(2*i*z)/(z+i)"), &[1.0, 2.0, 4.0]).unwrap();
    let want = [-2.0 - 2f64.ln(), -4.0 - 3f64.ln(), -8.0 - 5f64.ln()];
    for (v, w) in c.values().iter().zip(want) {
        assert!((v - w).abs() < 1e-12, "{} vs {}", v, w);
    }
    let c = mf_curve(&f("exp(2*i*z)"), &[1.0, 2.0]).unwrap();
    assert!((c.values()[0] + 2.0).abs() < 1e-12 && (c.values()[1] + 4.0).abs() < 1e-12);
    assert!(matches!(mf_curve(&f("0"), &[1.0, 2.0]), Err(Error::ZeroLine { .. })));
}

#[test]
fn closed_form_line_maxima() {
    let grid = geometric_grid(1.0 / 16.0, 16.0, 64);
    let closed: [(&str, fn(f64) -> f64); 4] = [
        ("exp(2*i*z)", |t| (-2.0 * t).exp()),
        ("1/(z+i)", |t| 1.0 / (1.0 + t)),
        ("exp(2*i*z)/(z+i)", |t| (-2.0 * t).exp() / (1.0 + t)),
        ("4/(1-i*z)^2", |t| 4.0 / (1.0 + t).powi(2)),
    ];
    for (src, mf) in closed {
        let c = mf_curve(&f(src), &grid).unwrap();
        for (t, v) in c.points() {
            let want = mf(t);
            assert!((v.exp() - want).abs() <= 1e-6 * want, "{} t={}", src, t);
        }
    }
}

#[test]
fn log_line_maxima_are_convex() {
    let grid = geometric_grid(1.0 / 16.0, 16.0, 64);
    for src in FIXTURES {
        let c = mf_curve(&f(src), &grid).unwrap();
        let r = check_log_convexity(&c, 1e-6);
        assert!(r.pass, "{}: {:?}", src, r);
    }
}

#[test]
fn convexity_examples() {
    let spike = SampledCurve::new(vec![1.0, 2.0, 3.0], vec![0.0, 1.0, 0.0], "spike").unwrap();
    let r = check_log_convexity(&spike, 1e-6);
    assert!(!r.pass && r.worst_defect == 1.0 && r.at == Some(2.0));
    let c = mf_curve(&f("exp(2*i*z)"), &geometric_grid(0.25, 64.0, 20)).unwrap();
    assert_eq!(check_log_convexity(&c, 1e-6).worst_defect, 0.0);
}

#[test]
fn minorant_examples() {
    let grid = geometric_grid(0.25, 64.0, 32);
    let c = mf_curve(&f("exp(2*i*z)"), &grid).unwrap();
    let w = affine_minorant_of_curve(&c).unwrap();
    assert!(w.a <= -2.0 && w.a > -2.05, "{:?}", w);
    assert!(w.holds_on(c.points()));

    let flat = SampledCurve::new(grid.clone(), vec![0.0; grid.len()], "flat").unwrap();
    let w = affine_minorant_of_curve(&flat).unwrap();
    assert!((w.a + 0.01).abs() < 1e-12 && w.holds_on(flat.points()));

    let c = mf_curve(&f("exp(2*i*z)/(z+i)"), &grid).unwrap();
    let w = affine_minorant_of_curve(&c).unwrap();
    assert!(w.a <= -2.0 && w.holds_on(c.points()));
}

#[test]
fn refinement_does_not_lower_the_maximum() {
    for src in FIXTURES {
        let e = f(src);
        for y in [0.5, 1.0, 2.0] {
            let coarse = line_max_with(&e, y, &LineMaxOptions { points: 257, ..Default::default() }).unwrap();
            let fine = line_max_with(&e, y, &LineMaxOptions { points: 513, ..Default::default() }).unwrap();
            assert!(fine.value >= coarse.value - 1e-9, "{} y={}", src, y);
        }
    }
}
