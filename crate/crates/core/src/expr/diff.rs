use super::{add, cnst, div, exp, mul, neg, powi, sub, Node};

pub(super) fn derivative(node: &Node) -> Node {
    match node {
        Node::Const(_) => cnst(0.0, 0.0),
        Node::Var => cnst(1.0, 0.0),
        Node::Neg(a) => neg(derivative(a)),
        Node::Add(a, b) => add(derivative(a), derivative(b)),
        Node::Sub(a, b) => sub(derivative(a), derivative(b)),
        Node::Mul(a, b) => add(
            mul(derivative(a), (**b).clone()),
            mul((**a).clone(), derivative(b)),
        ),
        Node::Div(a, b) => {
            // (a'b - ab') / b^2
            let top = sub(
                mul(derivative(a), (**b).clone()),
                mul((**a).clone(), derivative(b)),
            );
            div(top, powi((**b).clone(), 2))
        }
        Node::Pow(a, n) => mul(
            mul(cnst(*n as f64, 0.0), powi((**a).clone(), n - 1)),
            derivative(a),
        ),
        Node::Exp(a) => mul(exp((**a).clone()), derivative(a)),
    }
}

#[cfg(test)]
mod tests {
    use num_complex::Complex64;

    use crate::expr::{Expr, Node};

    fn fd(e: &Expr, z: Complex64, h: Complex64) -> Complex64 {
        (e.eval_complex(z + h).unwrap() - e.eval_complex(z - h).unwrap()) / (2.0 * h)
    }

    #[test]
    fn identity_derivative() {
        let d = Expr::parse("w", "w").unwrap().differentiate();
        assert_eq!(*d.root(), Node::Const(Complex64::new(1.0, 0.0)));
    }

    #[test]
    fn square() {
        let d = Expr::parse("w^2", "w").unwrap().differentiate();
        for w in [Complex64::new(0.3, 0.1), Complex64::new(-2.0, 1.5)] {
            assert!((d.eval_complex(w).unwrap() - 2.0 * w).norm() < 1e-14);
        }
    }

    #[test]
    fn exp_chain_rule_matches_finite_differences() {
        let e = Expr::parse("exp(2*i*w)", "w").unwrap();
        let d = e.differentiate();
        let w = Complex64::new(0.3, 0.1);
        let want = Complex64::new(0.0, 2.0) * (Complex64::new(0.0, 2.0) * w).exp();
        let got = d.eval_complex(w).unwrap();
        assert!((got - want).norm() < 1e-14);
        let h = 1e-6;
        let num = fd(&e, w, Complex64::new(h, 0.0));
        assert!((num - got).norm() <= 1e-6 * got.norm());
    }

    #[test]
    fn constants_vanish() {
        let d = Expr::parse("3 + pi*e", "w").unwrap().differentiate();
        assert!(d.is_zero_constant());
    }

    #[test]
    fn power_at_lower_limit_stays_in_range() {
        let e = Expr::parse("z^-64", "z").unwrap();
        let d = e.differentiate();
        let z = Complex64::new(1.1, 0.2);
        let want = -64.0 * z.powi(-65);
        assert!((d.eval_complex(z).unwrap() - want).norm() < 1e-12 * want.norm());
    }
}
