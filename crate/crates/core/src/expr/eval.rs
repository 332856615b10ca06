use num_complex::Complex64;
use thiserror::Error;

use super::Node;
use crate::scaled::Scaled;

/// Denominators smaller than this in modulus are treated as poles.
pub const POLE_EPS: f64 = 1e-300;
/// Intermediate moduli above this are reported as overflow.
pub const OVERFLOW_LIMIT: f64 = 1e300;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("pole: denominator modulus {modulus:e} at {re}+{im}i")]
    Pole { re: f64, im: f64, modulus: f64 },
    #[error("overflow: intermediate modulus exceeds 1e300 at {re}+{im}i")]
    Overflow { re: f64, im: f64 },
    #[error("expression is not real-valued at t={t} (imaginary part {imag:e})")]
    NotReal { t: f64, imag: f64 },
}

fn checked(v: Complex64, at: Complex64) -> Result<Complex64, EvalError> {
    if !v.re.is_finite() || !v.im.is_finite() || v.norm() > OVERFLOW_LIMIT {
        return Err(EvalError::Overflow { re: at.re, im: at.im });
    }
    Ok(v)
}

pub(super) fn eval_complex(node: &Node, z: Complex64) -> Result<Complex64, EvalError> {
    let v = match node {
        Node::Const(c) => *c,
        Node::Var => z,
        Node::Neg(a) => -eval_complex(a, z)?,
        Node::Add(a, b) => eval_complex(a, z)? + eval_complex(b, z)?,
        Node::Sub(a, b) => eval_complex(a, z)? - eval_complex(b, z)?,
        Node::Mul(a, b) => eval_complex(a, z)? * eval_complex(b, z)?,
        Node::Div(a, b) => {
            let num = eval_complex(a, z)?;
            let den = eval_complex(b, z)?;
            let modulus = den.norm();
            if modulus < POLE_EPS {
                return Err(EvalError::Pole {
                    re: z.re,
                    im: z.im,
                    modulus,
                });
            }
            num / den
        }
        Node::Pow(a, n) => {
            let base = eval_complex(a, z)?;
            if *n < 0 && base.norm() < POLE_EPS {
                return Err(EvalError::Pole {
                    re: z.re,
                    im: z.im,
                    modulus: base.norm(),
                });
            }
            base.powi(*n)
        }
        Node::Exp(a) => eval_complex(a, z)?.exp(),
    };
    checked(v, z)
}

pub(super) fn eval_real(node: &Node, t: f64) -> Result<f64, EvalError> {
    let v = eval_complex(node, Complex64::new(t, 0.0))?;
    if v.im != 0.0 {
        return Err(EvalError::NotReal { t, imag: v.im });
    }
    Ok(v.re)
}

/// Extended-range evaluation. Only an exactly vanishing denominator is a pole
/// here, since tiny moduli are legitimate values in this representation.
pub(super) fn eval_scaled(node: &Node, z: Complex64) -> Result<Scaled, EvalError> {
    let v = match node {
        Node::Const(c) => Scaled::from_complex(*c),
        Node::Var => Scaled::from_complex(z),
        Node::Neg(a) => eval_scaled(a, z)?.neg(),
        Node::Add(a, b) => eval_scaled(a, z)?.add(eval_scaled(b, z)?),
        Node::Sub(a, b) => eval_scaled(a, z)?.sub(eval_scaled(b, z)?),
        Node::Mul(a, b) => eval_scaled(a, z)?.mul(eval_scaled(b, z)?),
        Node::Div(a, b) => {
            let num = eval_scaled(a, z)?;
            let den = eval_scaled(b, z)?;
            if den.is_zero() {
                return Err(EvalError::Pole {
                    re: z.re,
                    im: z.im,
                    modulus: 0.0,
                });
            }
            num.div(den)
        }
        Node::Pow(a, n) => {
            let base = eval_scaled(a, z)?;
            if *n < 0 && base.is_zero() {
                return Err(EvalError::Pole {
                    re: z.re,
                    im: z.im,
                    modulus: 0.0,
                });
            }
            base.powi(*n)
        }
        Node::Exp(a) => eval_scaled(a, z)?.exp(),
    };
    if !v.is_finite() {
        return Err(EvalError::Overflow { re: z.re, im: z.im });
    }
    Ok(v)
}
