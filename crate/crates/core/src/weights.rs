//! Weight functions `p : (0, ∞) → (0, ∞)` and the triviality decisions for
//! the big space `Λ(p)` and the small space `λ(p)`.
//!
//! A space is nontrivial exactly when `-ln p` has an affine minorant
//! `a t + b` (for `λ(p)` additionally `p(t) → 0` as `t → 0+`). Both
//! conditions quantify over all `t > 0`, so the decisions here are made on
//! a geometric probe grid plus trend tests at both ends, and say
//! `Inconclusive` when the samples cannot decide.

use num_complex::Complex64;
use serde::Serialize;

use crate::curve::{dyadic_grid, SampledCurve};
use crate::error::{Error, Result};
use crate::expr::{EvalError, Expr};
use crate::optimize::golden_max;

/// `p(t) → 0` is declared when the last probes near zero fall below this.
pub const TOL_ZERO: f64 = 1e-9;

/// Slack allowed when checking `a t + b <= -ln p(t)`.
pub const WITNESS_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProbeGrid {
    pub lo_exp: i32,
    pub hi_exp: i32,
    pub per_octave: usize,
}

impl Default for ProbeGrid {
    fn default() -> Self {
        ProbeGrid {
            lo_exp: -40,
            hi_exp: 40,
            per_octave: 6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoxInfimum {
    pub c: f64,
    pub min_log_p: f64,
}

#[derive(Debug, Clone)]
pub struct Weight {
    expr: Expr,
    grid: Vec<f64>,
    log_values: Vec<f64>,
    box_infima: Vec<BoxInfimum>,
}

/// `ln p(t)` evaluated in extended range, rejecting non-real or
/// nonpositive values.
pub fn log_weight(expr: &Expr, t: f64) -> Result<f64> {
    let v = expr.eval_scaled(Complex64::new(t, 0.0))?;
    let m = v.mantissa();
    if m.im != 0.0 {
        return Err(EvalError::NotReal { t, imag: m.im }.into());
    }
    if !(m.re > 0.0) {
        return Err(Error::NonPositiveWeight {
            t,
            detail: format!("value {}", v.to_complex().re),
        });
    }
    Ok(v.ln_abs())
}

impl Weight {
    /// Validate `expr` as a weight on the default probe grid
    /// (481 points, `2^-40 ..= 2^40`, ratio `2^(1/6)`).
    pub fn new(expr: Expr) -> Result<Self> {
        Self::with_grid(expr, ProbeGrid::default())
    }

    pub fn parse(source: &str) -> Result<Self> {
        Self::new(Expr::parse(source, "t")?)
    }

    pub fn with_grid(expr: Expr, probe: ProbeGrid) -> Result<Self> {
        if probe.hi_exp <= probe.lo_exp || probe.per_octave == 0 {
            return Err(Error::Invalid("probe grid must span at least one octave".into()));
        }
        let grid = dyadic_grid(probe.lo_exp, probe.hi_exp, probe.per_octave);
        let log_values = grid
            .iter()
            .map(|&t| log_weight(&expr, t))
            .collect::<Result<Vec<_>>>()?;

        // Sampled condition (1): inf of p over [1/c, c] for c = 2, 4, ...
        let max_k = (-probe.lo_exp).min(probe.hi_exp).max(1);
        let box_infima = (1..=max_k)
            .map(|k| {
                let c = 2f64.powi(k);
                let min_log_p = grid
                    .iter()
                    .zip(&log_values)
                    .filter(|(t, _)| **t >= 1.0 / c && **t <= c)
                    .map(|(_, v)| *v)
                    .fold(f64::INFINITY, f64::min);
                BoxInfimum { c, min_log_p }
            })
            .collect::<Vec<_>>();
        if let Some(bad) = box_infima.iter().find(|b| !b.min_log_p.is_finite()) {
            return Err(Error::NonPositiveWeight {
                t: bad.c,
                detail: "zero infimum on [1/c, c]".into(),
            });
        }
        Ok(Weight {
            expr,
            grid,
            log_values,
            box_infima,
        })
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn probe_grid(&self) -> &[f64] {
        &self.grid
    }

    /// Cached `ln p` on the probe grid.
    pub fn log_values(&self) -> &[f64] {
        &self.log_values
    }

    /// Cached `p` on the probe grid; may be `0` or `inf` where f64 cannot
    /// represent the value.
    pub fn values(&self) -> Vec<f64> {
        self.log_values.iter().map(|v| v.exp()).collect()
    }

    pub fn box_infima(&self) -> &[BoxInfimum] {
        &self.box_infima
    }

    pub fn log_p(&self, t: f64) -> Result<f64> {
        log_weight(&self.expr, t)
    }

    pub fn p(&self, t: f64) -> Result<f64> {
        Ok(self.log_p(t)?.exp())
    }
}

/// `-ln p` on the probe grid.
pub fn neglog_curve(w: &Weight) -> SampledCurve {
    let values = w.log_values.iter().map(|v| -v).collect();
    SampledCurve::new(w.grid.clone(), values, "-ln p").expect("probe grid and finite logs")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AffineWitness {
    pub a: f64,
    pub b: f64,
}

impl AffineWitness {
    /// Largest `a t + b - v(t)` over the samples (positive means violated).
    pub fn worst_violation(&self, samples: impl IntoIterator<Item = (f64, f64)>) -> (f64, f64) {
        samples
            .into_iter()
            .map(|(t, v)| (t, self.a * t + self.b - v))
            .fold((f64::NAN, f64::NEG_INFINITY), |acc, s| if s.1 > acc.1 { s } else { acc })
    }

    pub fn holds_on(&self, samples: impl IntoIterator<Item = (f64, f64)>) -> bool {
        self.worst_violation(samples).1 <= WITNESS_SLACK
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum ClassificationVerdict {
    Nontrivial {
        witness: AffineWitness,
    },
    Trivial {
        evidence: String,
        samples: Vec<(f64, f64)>,
    },
    Inconclusive {
        diagnostics: String,
        samples: Vec<(f64, f64)>,
    },
}

impl ClassificationVerdict {
    pub fn is_nontrivial(&self) -> bool {
        matches!(self, ClassificationVerdict::Nontrivial { .. })
    }

    pub fn is_trivial(&self) -> bool {
        matches!(self, ClassificationVerdict::Trivial { .. })
    }

    pub fn witness(&self) -> Option<AffineWitness> {
        match self {
            ClassificationVerdict::Nontrivial { witness } => Some(*witness),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ClassificationVerdict::Nontrivial { .. } => "nontrivial",
            ClassificationVerdict::Trivial { .. } => "trivial",
            ClassificationVerdict::Inconclusive { .. } => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MinorantOptions {
    /// Octaves at the top of the grid inspected for `v(t)/t → -∞`.
    pub tail_octaves: f64,
    /// Required total drop of `v(t)/t` over the tail window.
    pub tail_drop: f64,
    /// Octaves at the bottom of the grid inspected for `v → -∞` near 0.
    pub head_octaves: f64,
    /// Required margin of `v(t_min)` below `min_{t >= 1} v`.
    pub head_drop: f64,
    /// Relative back-off applied to the tail slope.
    pub slope_backoff: f64,
    /// Density multiplier of the verification grid.
    pub refine: usize,
    /// Largest violation on the refined grid still attributed to sub-grid
    /// curvature (relative to `1 + |b|`); the intercept is lowered by it.
    pub max_intercept_adjust: f64,
}

impl Default for MinorantOptions {
    fn default() -> Self {
        MinorantOptions {
            tail_octaves: 10.0,
            tail_drop: 10.0,
            head_octaves: 10.0,
            head_drop: 50.0,
            slope_backoff: 0.01,
            refine: 3,
            max_intercept_adjust: 1e-2,
        }
    }
}

fn tail_verdict(v: &SampledCurve, opts: &MinorantOptions) -> Option<ClassificationVerdict> {
    let t_max = *v.grid().last()?;
    let cut = t_max / opts.tail_octaves.exp2();
    let tail: Vec<(f64, f64)> = v.points().filter(|(t, _)| *t >= cut).map(|(t, x)| (t, x / t)).collect();
    if tail.len() < 2 {
        return None;
    }
    let monotone = tail.windows(2).all(|w| w[1].1 <= w[0].1);
    let drop = tail[0].1 - tail[tail.len() - 1].1;
    if monotone && drop > opts.tail_drop {
        let step = (tail.len() / 5).max(1);
        let samples = tail.iter().step_by(step).copied().collect();
        return Some(ClassificationVerdict::Trivial {
            evidence: format!(
                "-ln p(t)/t decreases by {:.6e} over the last {} octaves (to {:.6e} at t={:e}); no finite slope stays below it",
                drop,
                opts.tail_octaves,
                tail[tail.len() - 1].1,
                t_max
            ),
            samples,
        });
    }
    None
}

fn head_verdict(v: &SampledCurve, opts: &MinorantOptions) -> Option<ClassificationVerdict> {
    let t_min = *v.grid().first()?;
    let cut = t_min * opts.head_octaves.exp2();
    let head: Vec<(f64, f64)> = v.points().filter(|(t, _)| *t <= cut).collect();
    let floor = v.points().filter(|(t, _)| *t >= 1.0).map(|(_, x)| x).fold(f64::INFINITY, f64::min);
    if head.len() < 2 || !floor.is_finite() {
        return None;
    }
    // Walking toward 0 the values keep falling.
    let monotone = head.windows(2).all(|w| w[0].1 <= w[1].1);
    let still_falling = head[0].1 < head[1].1;
    if monotone && still_falling && head[0].1 < floor - opts.head_drop {
        let step = (head.len() / 5).max(1);
        return Some(ClassificationVerdict::Trivial {
            evidence: format!(
                "-ln p falls to {:.6e} at t={:e}, {:.6e} below its minimum on [1, ∞), and is still falling; no intercept works",
                head[0].1,
                t_min,
                floor - head[0].1
            ),
            samples: head.iter().step_by(step).copied().collect(),
        });
    }
    None
}

fn candidate(v: &SampledCurve, opts: &MinorantOptions) -> AffineWitness {
    let n = v.len();
    let s_inf = v.points().skip(n / 2).map(|(t, x)| x / t).fold(f64::INFINITY, f64::min);
    let a = s_inf - opts.slope_backoff * (1.0 + s_inf.abs());
    let b = v.points().map(|(t, x)| x - a * t).fold(f64::INFINITY, f64::min);
    AffineWitness { a, b }
}

fn violating(witness: &AffineWitness, samples: &[(f64, f64)]) -> Vec<(f64, f64)> {
    samples
        .iter()
        .filter(|(t, x)| witness.a * t + witness.b > x + WITNESS_SLACK)
        .take(16)
        .copied()
        .collect()
}

/// Decide whether `v = -ln p` admits an affine minorant, verifying the
/// candidate only on the curve's own samples.
pub fn find_affine_minorant(v: &SampledCurve, opts: &MinorantOptions) -> ClassificationVerdict {
    find_affine_minorant_with(v, opts, None::<fn(f64) -> Result<f64>>)
}

/// As [`find_affine_minorant`], verifying on a grid `opts.refine` times
/// denser using `eval` to compute `v` between the samples.
pub fn find_affine_minorant_refined<F>(v: &SampledCurve, opts: &MinorantOptions, eval: F) -> ClassificationVerdict
where
    F: Fn(f64) -> Result<f64>,
{
    find_affine_minorant_with(v, opts, Some(eval))
}

fn find_affine_minorant_with<F>(v: &SampledCurve, opts: &MinorantOptions, eval: Option<F>) -> ClassificationVerdict
where
    F: Fn(f64) -> Result<f64>,
{
    if v.len() < 3 {
        return ClassificationVerdict::Inconclusive {
            diagnostics: "need at least three samples".into(),
            samples: v.points().collect(),
        };
    }
    if let Some(t) = tail_verdict(v, opts) {
        return t;
    }
    if let Some(h) = head_verdict(v, opts) {
        return h;
    }
    let mut witness = candidate(v, opts);
    if !(witness.a.is_finite() && witness.b.is_finite()) {
        return ClassificationVerdict::Inconclusive {
            diagnostics: format!("candidate witness not finite: a={}, b={}", witness.a, witness.b),
            samples: Vec::new(),
        };
    }

    let mut samples: Vec<(f64, f64)> = v.points().collect();
    if let Some(eval) = &eval {
        let k = opts.refine.max(1);
        let mut extra = Vec::with_capacity(v.len() * (k - 1));
        for w in v.grid().windows(2) {
            let ratio = w[1] / w[0];
            for j in 1..k {
                let t = w[0] * ratio.powf(j as f64 / k as f64);
                match eval(t) {
                    Ok(x) if x.is_finite() => extra.push((t, x)),
                    Ok(x) => {
                        return ClassificationVerdict::Inconclusive {
                            diagnostics: format!("-ln p not finite at t={:e} ({})", t, x),
                            samples: vec![(t, x)],
                        }
                    }
                    Err(e) => {
                        return ClassificationVerdict::Inconclusive {
                            diagnostics: format!("evaluation failed at t={:e}: {}", t, e),
                            samples: Vec::new(),
                        }
                    }
                }
            }
        }
        samples.extend(extra);
        samples.sort_by(|x, y| x.0.total_cmp(&y.0));
    }

    let (at, worst) = witness.worst_violation(samples.iter().copied());
    if worst > WITNESS_SLACK {
        if worst <= opts.max_intercept_adjust * (1.0 + witness.b.abs()) {
            witness.b -= worst;
        } else {
            return ClassificationVerdict::Inconclusive {
                diagnostics: format!(
                    "candidate a={:.6e}, b={:.6e} violated by {:.6e} at t={:e} on the refined grid",
                    witness.a, witness.b, worst, at
                ),
                samples: violating(&witness, &samples),
            };
        }
    }
    if let Some(eval) = &eval {
        witness.b = polish_intercept(&witness, &samples, eval);
    }
    debug_assert!(witness.holds_on(samples.iter().copied()));
    ClassificationVerdict::Nontrivial { witness }
}

/// Lower `b` to the continuous minimum of `v(t) - a t` near the lowest
/// samples, so the line also stays below `v` between grid points.
fn polish_intercept<F>(witness: &AffineWitness, samples: &[(f64, f64)], eval: &F) -> f64
where
    F: Fn(f64) -> Result<f64>,
{
    let a = witness.a;
    let residual: Vec<f64> = samples.iter().map(|(t, x)| x - a * t).collect();
    let mut order: Vec<usize> = (0..samples.len()).collect();
    order.sort_by(|&i, &j| residual[i].total_cmp(&residual[j]));
    let mut b = witness.b;
    for &i in order.iter().take(3) {
        let lo = samples[i.saturating_sub(1)].0.ln();
        let hi = samples[(i + 1).min(samples.len() - 1)].0.ln();
        if hi <= lo {
            continue;
        }
        let g = golden_max(
            |s: f64| {
                let t = s.exp();
                eval(t).map(|x| -(x - a * t))
            },
            lo,
            hi,
            |_| 1e-12,
        );
        if let Ok(g) = g {
            if g.value.is_finite() {
                b = b.min(-g.value - 1e-12 * (1.0 + b.abs()));
            }
        }
    }
    b
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LimitTrend {
    ConvergedToZero,
    ConvergedNonzero,
    Diverging,
    Oscillating,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitValue {
    Finite(f64),
    PosInfinity,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitEstimate {
    pub value: LimitValue,
    pub trend: LimitTrend,
    /// `(t, ln p(t))` at `t = 2^-k`, `k = 20..=40`.
    pub samples: Vec<(f64, f64)>,
}

/// Behaviour of `p(t)` as `t → 0+`, from `t = 2^-20` down to `2^-40`.
pub fn limit_at_zero(w: &Weight) -> Result<LimitEstimate> {
    let samples = (20..=40)
        .map(|k| {
            let t = 2f64.powi(-k);
            Ok((t, w.log_p(t)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let last = &samples[samples.len() - 8..];
    let logs: Vec<f64> = last.iter().map(|s| s.1).collect();
    let final_log = *logs.last().unwrap();

    let falling = logs.windows(2).all(|w| w[1] < w[0]);
    if falling && logs.iter().all(|&l| l < TOL_ZERO.ln()) {
        return Ok(LimitEstimate {
            value: LimitValue::Finite(final_log.exp()),
            trend: LimitTrend::ConvergedToZero,
            samples,
        });
    }
    let hi = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = logs.iter().copied().fold(f64::INFINITY, f64::min);
    // max/min - 1 <= 1e-6
    if (hi - lo) <= 1e-6_f64.ln_1p() && lo > TOL_ZERO.ln() {
        return Ok(LimitEstimate {
            value: LimitValue::Finite(final_log.exp()),
            trend: LimitTrend::ConvergedNonzero,
            samples,
        });
    }
    let rising = logs.windows(2).all(|w| w[1] >= w[0]);
    if rising {
        return Ok(LimitEstimate {
            value: LimitValue::PosInfinity,
            trend: LimitTrend::Diverging,
            samples,
        });
    }
    Ok(LimitEstimate {
        value: LimitValue::Finite(final_log.exp()),
        trend: LimitTrend::Oscillating,
        samples,
    })
}

/// Is `Λ(p) ≠ {0}`?
pub fn classify_big_space(w: &Weight) -> ClassificationVerdict {
    classify_big_space_with(w, &MinorantOptions::default())
}

pub fn classify_big_space_with(w: &Weight, opts: &MinorantOptions) -> ClassificationVerdict {
    let v = neglog_curve(w);
    find_affine_minorant_refined(&v, opts, |t| Ok(-w.log_p(t)?))
}

/// Is `λ(p) ≠ {0}`?
pub fn classify_small_space(w: &Weight) -> Result<ClassificationVerdict> {
    let big = classify_big_space(w);
    let limit = limit_at_zero(w)?;
    Ok(combine_small(big, &limit))
}

pub fn classify_small_space_with(w: &Weight, opts: &MinorantOptions) -> Result<ClassificationVerdict> {
    let big = classify_big_space_with(w, opts);
    let limit = limit_at_zero(w)?;
    Ok(combine_small(big, &limit))
}

fn combine_small(big: ClassificationVerdict, limit: &LimitEstimate) -> ClassificationVerdict {
    let p_samples: Vec<(f64, f64)> = limit.samples.iter().map(|(t, l)| (*t, l.exp())).collect();
    match (big, limit.trend) {
        (ClassificationVerdict::Trivial { evidence, samples }, _) => ClassificationVerdict::Trivial {
            evidence: format!("the big space is already trivial: {}", evidence),
            samples,
        },
        (_, LimitTrend::ConvergedNonzero) => ClassificationVerdict::Trivial {
            evidence: format!(
                "p(t) does not tend to 0 as t→0+ (converges to {:.9e})",
                p_samples.last().map(|s| s.1).unwrap_or(f64::NAN)
            ),
            samples: p_samples,
        },
        (_, LimitTrend::Diverging) => ClassificationVerdict::Trivial {
            evidence: "p(t) grows as t→0+".into(),
            samples: p_samples,
        },
        (ClassificationVerdict::Nontrivial { witness }, LimitTrend::ConvergedToZero) => {
            ClassificationVerdict::Nontrivial { witness }
        }
        (ClassificationVerdict::Inconclusive { diagnostics, samples }, _) => ClassificationVerdict::Inconclusive {
            diagnostics: format!("big-space decision inconclusive: {}", diagnostics),
            samples,
        },
        (ClassificationVerdict::Nontrivial { .. }, LimitTrend::Oscillating) => ClassificationVerdict::Inconclusive {
            diagnostics: "p(t) neither settles nor tends to 0 near t=0".into(),
            samples: p_samples,
        },
    }
}

/// Both verdicts plus the limit estimate, as reported by the CLI.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightClassification {
    pub big_space: ClassificationVerdict,
    pub small_space: ClassificationVerdict,
    pub limit_at_zero: LimitEstimate,
}

pub fn classify_weight(w: &Weight, opts: &MinorantOptions) -> Result<WeightClassification> {
    let big = classify_big_space_with(w, opts);
    let limit = limit_at_zero(w)?;
    let small = combine_small(big.clone(), &limit);
    Ok(WeightClassification {
        big_space: big,
        small_space: small,
        limit_at_zero: limit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn weight(src: &str) -> Weight {
        Weight::parse(src).unwrap()
    }

    #[test]
    fn make_weight_examples() {
        let w = weight("t");
        assert_eq!(w.probe_grid().len(), 481);
        assert!(w.box_infima().iter().all(|b| b.min_log_p.is_finite()));
        assert_eq!(w.box_infima().len(), 40);
        weight("1");
        match Weight::parse("t - 1") {
            Err(Error::NonPositiveWeight { t, .. }) => assert!(t <= 0.5),
            other => panic!("expected nonpositive weight, got {:?}", other),
        }
        assert!((Expr::parse("t - 1", "t").unwrap().eval_real(0.5).unwrap()) < 0.0);
    }

    #[test]
    fn huge_and_tiny_weights_are_representable() {
        let w = weight("exp(t^2)");
        assert_eq!(*w.log_values().last().unwrap(), 2f64.powi(80));
        let w = weight("exp(-1/t)*t");
        assert!(w.log_values()[0] < -1e12);
    }

    #[test]
    fn neglog_examples() {
        let v = neglog_curve(&weight("1"));
        assert!(v.values().iter().all(|x| *x == 0.0));
        let w = weight("exp(t^2)");
        let v = neglog_curve(&w);
        let i = v.grid().iter().position(|t| *t == 2.0).unwrap();
        assert_eq!(v.values()[i], -4.0);
        let w = weight("t");
        let v = neglog_curve(&w);
        let i = v.grid().iter().position(|t| *t == 1.0).unwrap();
        assert_eq!(v.values()[i], 0.0);
        assert!((-w.log_p(std::f64::consts::E).unwrap() + 1.0).abs() < 1e-15);
    }

    #[test]
    fn gaussian_weight_is_trivial() {
        let v = neglog_curve(&weight("exp(t^2)"));
        assert!(find_affine_minorant(&v, &MinorantOptions::default()).is_trivial());
    }

    #[test]
    fn constant_weight_witness() {
        let v = neglog_curve(&weight("1"));
        let w = find_affine_minorant(&v, &MinorantOptions::default()).witness().unwrap();
        assert!((w.a + 0.01).abs() < 1e-12);
        assert!(w.b.abs() < 1e-9);
        assert!(AffineWitness { a: 0.0, b: 0.0 }.holds_on(v.points()));
    }

    #[test]
    fn identity_weight_witness() {
        let w = weight("t");
        let v = neglog_curve(&w);
        let verdict = classify_big_space(&w);
        let wit = verdict.witness().expect("nontrivial");
        assert!(wit.holds_on(v.points()));
        assert!(AffineWitness { a: -1.0, b: 1.0 }.holds_on(v.points()));
        // Grid minimum of t - ln t is 1, at t = 1.
        let min = v.points().map(|(t, x)| x + t).fold(f64::INFINITY, f64::min);
        assert!((min - 1.0).abs() < 1e-6);
    }

    #[test]
    fn steep_head_is_trivial() {
        let v = neglog_curve(&weight("exp(1/t)"));
        let verdict = find_affine_minorant(&v, &MinorantOptions::default());
        assert!(verdict.is_trivial(), "{:?}", verdict);
    }

    #[test]
    fn limit_examples() {
        let l = limit_at_zero(&weight("t")).unwrap();
        assert_eq!(l.trend, LimitTrend::ConvergedToZero);
        match l.value {
            LimitValue::Finite(v) => assert!(v < TOL_ZERO),
            _ => panic!(),
        }
        let l = limit_at_zero(&weight("1")).unwrap();
        assert_eq!(l.trend, LimitTrend::ConvergedNonzero);
        assert_eq!(l.value, LimitValue::Finite(1.0));
        let l = limit_at_zero(&weight("t + exp(t)")).unwrap();
        assert_eq!(l.trend, LimitTrend::ConvergedNonzero);
        match l.value {
            LimitValue::Finite(v) => assert!((v - 1.0).abs() < 1e-9),
            _ => panic!(),
        }
        let l = limit_at_zero(&weight("1/t")).unwrap();
        assert_eq!(l.trend, LimitTrend::Diverging);
        assert_eq!(l.value, LimitValue::PosInfinity);
        let l = limit_at_zero(&weight("exp(-1/t)*t")).unwrap();
        assert_eq!(l.trend, LimitTrend::ConvergedToZero);
    }

    #[test]
    fn big_space_examples() {
        let w = weight("t + exp(t)");
        assert!(classify_big_space(&w).is_nontrivial());
        let v = neglog_curve(&w);
        assert!(AffineWitness { a: -1.0, b: -(2f64.ln()) }.holds_on(v.points()));
        assert!(classify_big_space(&weight("exp(t^2)")).is_trivial());
        assert!(classify_big_space(&weight("1")).is_nontrivial());
    }

    #[test]
    fn small_space_examples() {
        let w = weight("t");
        let small = classify_small_space(&w).unwrap();
        assert!(small.is_nontrivial());
        assert_eq!(small.witness(), classify_big_space(&w).witness());
        assert!(classify_small_space(&weight("1")).unwrap().is_trivial());
        assert!(classify_small_space(&weight("t + exp(t)")).unwrap().is_trivial());
        assert!(classify_small_space(&weight("exp(t^2)")).unwrap().is_trivial());
    }

    #[test]
    fn witness_lowering_keeps_validity() {
        let v = neglog_curve(&weight("t"));
        let wit = AffineWitness { a: -1.0, b: 1.0 };
        for d in [1e-6, 0.5, 10.0] {
            assert!(AffineWitness { a: wit.a, b: wit.b - d }.holds_on(v.points()));
        }
    }
}
