//! Golden-section maximisation on a bracket.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GoldenMax {
    pub x: f64,
    pub value: f64,
    pub evaluations: usize,
}

/// Maximise `f` on `[a, b]`, stopping when the bracket is narrower than
/// `tol(x)` at the current best point. Endpoints are not evaluated.
///
/// `f` may return `-inf`; a NaN is treated as `-inf`.
pub fn golden_max<F, E>(mut f: F, mut a: f64, mut b: f64, tol: impl Fn(f64) -> f64) -> Result<GoldenMax, E>
where
    F: FnMut(f64) -> Result<f64, E>,
{
    let mut eval = |x: f64| -> Result<f64, E> {
        let v = f(x)?;
        Ok(if v.is_nan() { f64::NEG_INFINITY } else { v })
    };
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = eval(c)?;
    let mut fd = eval(d)?;
    let mut n = 2;
    let mut best = if fc >= fd { (c, fc) } else { (d, fd) };
    for _ in 0..200 {
        if (b - a).abs() <= tol(best.0) {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = eval(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = eval(d)?;
        }
        n += 1;
        if fc > best.1 {
            best = (c, fc);
        }
        if fd > best.1 {
            best = (d, fd);
        }
    }
    Ok(GoldenMax {
        x: best.0,
        value: best.1,
        evaluations: n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::convert::Infallible;

    #[test]
    fn finds_parabola_peak() {
        let r = golden_max::<_, Infallible>(|x| Ok(-(x - 0.3f64).powi(2)), -1.0, 2.0, |_| 1e-12).unwrap();
        assert!((r.x - 0.3).abs() < 1e-6);
        assert!(r.value > -1e-12);
    }

    #[test]
    fn relative_tolerance_far_from_origin() {
        let x0 = 1.0e6 + 0.25;
        let r = golden_max::<_, Infallible>(|x| Ok(-(x - x0).abs()), 1.0e6, 1.0e6 + 1.0, |x| 1e-10 * (1.0 + x.abs()))
            .unwrap();
        assert!((r.x - x0).abs() < 1e-3);
    }

    #[test]
    fn propagates_errors() {
        let r = golden_max(|_| Err::<f64, _>("boom"), 0.0, 1.0, |_| 1e-9);
        assert_eq!(r.unwrap_err(), "boom");
    }
}
