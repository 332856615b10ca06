use hpw::expr::{EvalError, Node, ParseErrorKind};
use hpw::{Complex64, Expr};
use proptest::prelude::*;

const FIXTURES: &[&str] = &[
    "exp(2*i*z)",
    "exp(2*i*z)/(z+i)",
    "1/(z+i)",
    "4/(1-i*z)^2",
    "z^5 - 3*z^2 + 2",
    "exp(-i*z^2) * (z + 2*i)^-3",
    "exp(exp(i*z)) / (z*z + 4)",
    "-(z - pi)^4 / (e + z)",
];

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn parse_and_evaluate_examples() {
    let e = Expr::parse("exp(2*i*z)", "z").unwrap();
    assert!((e.eval_complex(c(0.0, 1.0)).unwrap() - (-2f64).exp()).norm() < 1e-16);
    let e = Expr::parse("z", "z").unwrap();
    assert_eq!(e.eval_complex(c(3.0, 4.0)).unwrap(), c(3.0, 4.0));
    assert!(matches!(e.root(), Node::Var));
    let a = -1.0;
    let e = Expr::parse(&format!("exp(i*({}+1)*z)/(z+i)", a), "z").unwrap();
    assert!(matches!(e.root(), Node::Div(..)));
    assert!(matches!(
        Expr::parse("1/(z+i)", "z").unwrap().eval_complex(c(0.0, -1.0)),
        Err(EvalError::Pole { .. })
    ));
    let real = |s: &str, t: f64| Expr::parse(s, "t").unwrap().eval_real(t).unwrap();
    assert!((real("t + exp(t)", 1.0) - (1.0 + std::f64::consts::E)).abs() < 1e-15);
    assert_eq!(real("1", 0.5), 1.0);
    assert!((real("exp(t^2)", 2.0) - 4f64.exp()).abs() < 1e-12);
}

#[test]
fn parse_errors() {
    let kind = |s: &str| Expr::parse(s, "z").unwrap_err().kind;
    assert!(matches!(kind("2z"), ParseErrorKind::Syntax(_)));
    assert!(matches!(kind("sin(z)"), ParseErrorKind::UnknownIdentifier(_)));
    assert!(matches!(kind("t + 1"), ParseErrorKind::WrongVariable { .. }));
    assert!(matches!(kind("z^65"), ParseErrorKind::PowerOutOfRange(65)));
    assert_eq!(Expr::parse("z + * 2", "z").unwrap_err().position, 4);
}

#[test]
fn derivative_examples() {
    let d = |s: &str, w: Complex64| Expr::parse(s, "w").unwrap().differentiate().eval_complex(w).unwrap();
    let w = c(0.3, 0.1);
    assert_eq!(d("w", w), c(1.0, 0.0));
    assert!((d("w^2", w) - 2.0 * w).norm() < 1e-15);
    let want = c(0.0, 2.0) * (c(0.0, 2.0) * w).exp();
    assert!((d("exp(2*i*w)", w) - want).norm() < 1e-6 * want.norm());
}

fn check_derivative(src: &str, z: Complex64) -> Result<(), TestCaseError> {
    let e = Expr::parse(src, "z").unwrap();
    let d = e.differentiate();
    let exact = d.eval_complex(z).unwrap();
    let h = 1e-6;
    for step in [c(h, 0.0), c(0.0, h)] {
        let fd = (e.eval_complex(z + step).unwrap() - e.eval_complex(z - step).unwrap()) / (2.0 * step);
        prop_assert!(
            (exact - fd).norm() <= 1e-5 * (1.0 + exact.norm()),
            "{} at {}: symbolic {} vs difference {}",
            src,
            z,
            exact,
            fd
        );
    }
    Ok(())
}

fn disk_point() -> impl Strategy<Value = Complex64> {
    (0.0f64..2.0, 0.0f64..std::f64::consts::PI)
        .prop_map(|(r, th)| Complex64::from_polar(r, th))
        .prop_filter("Im z > 0.1", |z| z.im > 0.1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn derivatives_match_central_differences(z in disk_point()) {
        for src in FIXTURES {
            check_derivative(src, z)?;
        }
    }
}

fn leaf() -> impl Strategy<Value = Node> {
    prop_oneof![
        Just(Node::Var),
        (-3.0f64..3.0, -3.0f64..3.0).prop_map(|(re, im)| Node::Const(Complex64::new(re, im))),
        (-5i32..5).prop_map(|k| Node::Const(Complex64::new(k as f64, 0.0))),
    ]
}

fn tree() -> impl Strategy<Value = Node> {
    leaf().prop_recursive(5, 40, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|a| Node::Neg(Box::new(a))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Node::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Node::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Node::Mul(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Node::Div(Box::new(a), Box::new(b))),
            (inner.clone(), -3i32..5).prop_map(|(a, n)| Node::Pow(Box::new(a), n)),
            inner.prop_map(|a| Node::Exp(Box::new(a))),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn printing_round_trips(root in tree(), zs in proptest::collection::vec(disk_point(), 100)) {
        let e = Expr::from_node("z", root);
        let text = e.to_string();
        let back = Expr::parse(&text, "z").map_err(|err| TestCaseError::fail(format!("{}: {}", text, err)))?;
        for z in zs {
            let (Ok(u), Ok(v)) = (e.eval_complex(z), back.eval_complex(z)) else {
                continue;
            };
            prop_assert!((u - v).norm() <= 1e-12 * u.norm().max(1e-300), "{} at {}: {} vs {}", text, z, u, v);
        }
    }

    #[test]
    fn evaluation_is_deterministic(root in tree(), z in disk_point()) {
        let e = Expr::from_node("z", root);
        let a = e.eval_complex(z).map(|v| (v.re.to_bits(), v.im.to_bits())).ok();
        let b = e.eval_complex(z).map(|v| (v.re.to_bits(), v.im.to_bits())).ok();
        prop_assert_eq!(a, b);
    }
}
