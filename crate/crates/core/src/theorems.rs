//! Witness functions for nontrivial spaces, and the asymptotic check that
//! `ln Mf(t) - a t → -∞` for members of the small space, where
//! `a = liminf ln Mf(t) / t`.

use serde::Serialize;

use crate::curve::{dyadic_grid, geometric_grid, SampledCurve};
use crate::error::{Error, Result};
use crate::expr::{cnst, exp, mul, add, Expr, Node};
use crate::halfnorm::{
    default_schedule, horizontal_decay_threshold, is_in_small_space_with, Membership, MembershipReport,
    TailOptions,
};
use crate::linemax::{affine_minorant_of_curve, check_log_convexity, mf_curve_with, LineMaxOptions};
use crate::weights::{AffineWitness, Weight};

/// `e^{-iaz + b}`, with `|f(x + iy)| = e^{ay + b}`: a member of `Λ(p)` of
/// norm at most 1 whenever `-ln p(t) >= a t + b`.
pub fn witness_big(a: f64, b: f64) -> Expr {
    Expr::from_node("z", exp(add(mul(cnst(0.0, -a), Node::Var), cnst(b, 0.0))))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum WitnessForm {
    /// `e^{-i(a-1)z} / (z+i)`
    #[default]
    Corrected,
    /// `e^{i(a+1)z} / (z+i)`, kept for comparison runs.
    Literal,
}

/// A nonzero member of `λ(p)` built from the slope `a` of a verified
/// affine witness.
///
/// With `p(t) <= e^{-at-b}` this gives `p(t)|f| <= e^{-b} e^{-t} / |z+i|`,
/// which vanishes outside large boxes once `p(t) → 0` at `0+`.
pub fn witness_small(a: f64) -> Expr {
    witness_small_form(a, WitnessForm::Corrected)
}

pub fn witness_small_form(a: f64, form: WitnessForm) -> Expr {
    let k = match form {
        WitnessForm::Corrected => -(a - 1.0),
        WitnessForm::Literal => a + 1.0,
    };
    let num = exp(mul(cnst(0.0, k), Node::Var));
    let den = add(Node::Var, cnst(0.0, 1.0));
    Expr::from_node("z", crate::expr::div(num, den))
}

/// `F(z) = e^{iaz} f(z)`, so that `ln MF(t) = ln Mf(t) - a t`.
pub fn build_f(f: &Expr, a: f64) -> Expr {
    if a == 0.0 {
        return f.clone();
    }
    let factor = exp(mul(cnst(0.0, a), Node::Var));
    Expr::from_node(f.variable(), mul(factor, f.root().clone()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SlopeEstimate {
    Finite(f64),
    PosInfinity,
}

impl SlopeEstimate {
    pub fn finite(&self) -> Option<f64> {
        match self {
            SlopeEstimate::Finite(a) => Some(*a),
            SlopeEstimate::PosInfinity => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SlopeOptions {
    /// Tail samples inspected.
    pub window: usize,
    pub slope_cap: f64,
}

impl Default for SlopeOptions {
    fn default() -> Self {
        SlopeOptions {
            window: 12,
            slope_cap: 1e6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SlopeReport {
    pub a_hat: SlopeEstimate,
    /// `min v(t)/t` over the window; converges like `ln t / t`.
    pub running_min: f64,
    /// Slope of the last chord; a lower bound of the limit for convex curves.
    pub last_chord: f64,
}

/// Estimate `liminf v(t)/t` for a convex `v` sampled up to `t_max`.
///
/// For convex `v` the ratio `v(t)/t` and the chord slopes share their
/// limit, and the chord slopes approach it like `C/t`, while `v(t)/t`
/// approaches it only like `ln t / t`. The estimate therefore extrapolates
/// the last three chord slopes to `1/t = 0` (quadratic in `1/t`), never
/// going below the last chord slope.
pub fn estimate_liminf_slope(c: &SampledCurve) -> SlopeReport {
    estimate_liminf_slope_with(c, &SlopeOptions::default())
}

pub fn estimate_liminf_slope_with(c: &SampledCurve, opts: &SlopeOptions) -> SlopeReport {
    let n = c.len();
    let k = opts.window.min(n).max(2);
    let (g, v) = (&c.grid()[n - k..], &c.values()[n - k..]);
    let ratios: Vec<f64> = g.iter().zip(v).map(|(t, x)| x / t).collect();
    let running_min = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let chords: Vec<(f64, f64)> = g
        .windows(2)
        .zip(v.windows(2))
        .map(|(t, x)| (2.0 / (t[0] + t[1]), (x[1] - x[0]) / (t[1] - t[0])))
        .collect();
    let last_chord = chords.last().map(|c| c.1).unwrap_or(running_min);

    let last_ratio = *ratios.last().unwrap();
    if last_ratio > opts.slope_cap && ratios.windows(2).all(|r| r[1] >= r[0]) {
        return SlopeReport {
            a_hat: SlopeEstimate::PosInfinity,
            running_min,
            last_chord,
        };
    }

    let extrapolated = if chords.len() >= 3 {
        let m = chords.len();
        lagrange_at_zero(&chords[m - 3..])
    } else {
        last_chord
    };
    let a_hat = if extrapolated.is_finite() {
        extrapolated.max(last_chord)
    } else {
        last_chord
    };
    SlopeReport {
        a_hat: SlopeEstimate::Finite(a_hat),
        running_min,
        last_chord,
    }
}

/// Value at `u = 0` of the polynomial through the given `(u, s)` points.
fn lagrange_at_zero(pts: &[(f64, f64)]) -> f64 {
    let mut acc = 0.0;
    for (i, &(ui, si)) in pts.iter().enumerate() {
        let mut w = 1.0;
        for (j, &(uj, _)) in pts.iter().enumerate() {
            if i != j {
                w *= (0.0 - uj) / (ui - uj);
            }
        }
        acc += w * si;
    }
    acc
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Theorem3Options {
    pub t_min_exp: i32,
    pub t_max_exp: i32,
    pub per_octave: usize,
    /// Samples at the end of the grid that must be non-increasing.
    pub monotone_tail: usize,
    pub monotone_slack: f64,
    pub d_floor: f64,
    /// `D` must fall at least this fast per unit of `ln t` over the last
    /// decade to count as unbounded.
    pub log_trend: f64,
    pub slope: SlopeOptions,
    pub line: LineMaxOptions,
    pub tail: TailOptions,
}

impl Default for Theorem3Options {
    fn default() -> Self {
        Theorem3Options {
            t_min_exp: -2,
            t_max_exp: 10,
            per_octave: 8,
            monotone_tail: 16,
            monotone_slack: 1e-9,
            d_floor: -20.0,
            log_trend: 0.1,
            slope: SlopeOptions::default(),
            line: LineMaxOptions::default(),
            tail: TailOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Theorem3Report {
    pub a_hat: f64,
    pub slope: SlopeReport,
    pub ln_mf: SampledCurve,
    /// `ln Mf(t) - a_hat t`
    pub d_curve: SampledCurve,
    pub tail_monotone: bool,
    pub diverges_to_minus_inf: bool,
    pub hypothesis_met: bool,
    pub minorant: Option<AffineWitness>,
    /// Least-squares slope of `D` against `ln t` over the last decade.
    pub log_trend_slope: f64,
    pub membership: Membership,
}

fn require_membership(f: &Expr, w: &Weight, tail: &TailOptions) -> Result<MembershipReport> {
    let m = is_in_small_space_with(f, w, &default_schedule(), tail)?;
    if m.in_small_space != Membership::Yes {
        return Err(Error::HypothesisNotMet(format!(
            "f is not in the small space ({:?}: {})",
            m.in_small_space, m.diagnostics
        )));
    }
    Ok(m)
}

fn log_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0.ln()).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0.ln() - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0.ln() - mx).powi(2)).sum();
    sxy / sxx
}

pub fn theorem3_check(f: &Expr, w: &Weight) -> Result<Theorem3Report> {
    theorem3_check_with(f, w, &Theorem3Options::default())
}

pub fn theorem3_check_with(f: &Expr, w: &Weight, opts: &Theorem3Options) -> Result<Theorem3Report> {
    if opts.t_max_exp <= opts.t_min_exp {
        return Err(Error::Invalid("t_max must exceed t_min".into()));
    }
    let membership = require_membership(f, w, &opts.tail)?;
    let grid = dyadic_grid(opts.t_min_exp, opts.t_max_exp, opts.per_octave);
    let ln_mf = mf_curve_with(f, &grid, &opts.line)?;
    let slope = estimate_liminf_slope_with(&ln_mf, &opts.slope);
    let a_hat = slope.a_hat.finite().ok_or_else(|| {
        Error::HypothesisNotMet("ln Mf(t)/t grows without bound (liminf is +inf)".into())
    })?;

    let d_values: Vec<f64> = ln_mf.points().map(|(t, v)| v - a_hat * t).collect();
    let d_curve = SampledCurve::new(grid.clone(), d_values, "ln Mf - a_hat t")?;

    let n = d_curve.len();
    let tail = &d_curve.values()[n.saturating_sub(opts.monotone_tail)..];
    let tail_monotone = tail.windows(2).all(|p| p[1] <= p[0] + opts.monotone_slack);
    let t_max = grid[n - 1];
    let decade: Vec<(f64, f64)> = d_curve.points().filter(|(t, _)| *t >= t_max / 10.0).collect();
    let log_trend_slope = log_slope(&decade);
    let d_last = d_curve.values()[n - 1];
    let diverges_to_minus_inf = tail_monotone && (d_last < opts.d_floor || log_trend_slope <= -opts.log_trend);

    let minorant = affine_minorant_of_curve(&ln_mf).ok();
    let hypothesis_met = a_hat.is_finite() && minorant.map(|m| a_hat >= m.a - 1e-6).unwrap_or(false);

    Ok(Theorem3Report {
        a_hat,
        slope,
        ln_mf,
        d_curve,
        tail_monotone,
        diverges_to_minus_inf,
        hypothesis_met,
        minorant,
        log_trend_slope,
        membership: membership.in_small_space,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyCheck {
    pub id: u8,
    pub name: &'static str,
    pub pass: bool,
    /// Worst-case defect, or the relevant measured quantity.
    pub evidence: f64,
    pub grid: Vec<f64>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FPropertyReport {
    pub a_hat: f64,
    /// `sup_{Im z >= 1} |F(z)|`
    pub a_sup: f64,
    pub f_expr: String,
    pub checks: Vec<PropertyCheck>,
    pub all_pass: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FPropertyOptions {
    pub points: usize,
    pub identity_tol: f64,
    pub convexity_tol: f64,
    pub slope_tol: f64,
    pub monotone_slack: f64,
    pub decay_band: (f64, f64),
    pub decay_threshold: f64,
}

impl Default for FPropertyOptions {
    fn default() -> Self {
        FPropertyOptions {
            points: 16,
            identity_tol: 1e-9,
            convexity_tol: 1e-6,
            slope_tol: 0.05,
            monotone_slack: 1e-9,
            decay_band: (1.0, 4.0),
            decay_threshold: 1e-3,
        }
    }
}

pub fn verify_f_properties(f: &Expr, w: &Weight) -> Result<FPropertyReport> {
    verify_f_properties_with(f, w, &Theorem3Options::default(), &FPropertyOptions::default())
}

pub fn verify_f_properties_with(
    f: &Expr,
    w: &Weight,
    t3: &Theorem3Options,
    opts: &FPropertyOptions,
) -> Result<FPropertyReport> {
    let report = theorem3_check_with(f, w, t3)?;
    if !report.hypothesis_met {
        return Err(Error::HypothesisNotMet(
            "liminf slope is below the affine minorant of ln Mf".into(),
        ));
    }
    let a = report.a_hat;
    let big_f = build_f(f, a);
    let t_max = 2f64.powi(t3.t_max_exp);
    let grid = geometric_grid(0.5, t_max, opts.points.max(4));
    let ln_mf = mf_curve_with(f, &grid, &t3.line)?;
    let ln_big = mf_curve_with(&big_f, &grid, &t3.line)?;
    let v = ln_big.values();
    let n = v.len();
    let mut checks = Vec::with_capacity(6);

    let identity = ln_big
        .points()
        .zip(ln_mf.values())
        .map(|((t, lf), lm)| (lf - (lm - a * t)).abs())
        .fold(0.0, f64::max);
    checks.push(PropertyCheck {
        id: 1,
        name: "ln MF(t) = ln Mf(t) - a t",
        pass: identity <= opts.identity_tol,
        evidence: identity,
        grid: grid.clone(),
        detail: format!("max deviation {:.3e}", identity),
    });

    let conv = check_log_convexity(&ln_big, opts.convexity_tol);
    checks.push(PropertyCheck {
        id: 2,
        name: "ln MF convex",
        pass: conv.pass,
        evidence: conv.worst_defect,
        grid: grid.clone(),
        detail: format!("worst chord defect {:.3e} at t={:?}", conv.worst_defect, conv.at),
    });

    let tail_ratio = ln_big
        .points()
        .skip(n.saturating_sub(4))
        .map(|(t, x)| (x / t).abs())
        .fold(f64::INFINITY, f64::min);
    checks.push(PropertyCheck {
        id: 3,
        name: "liminf ln MF(t)/t = 0",
        pass: tail_ratio <= opts.slope_tol,
        evidence: tail_ratio,
        grid: grid[n.saturating_sub(4)..].to_vec(),
        detail: format!("min |ln MF(t)/t| on the tail = {:.3e}", tail_ratio),
    });

    let rise = v.windows(2).map(|p| p[1] - p[0]).fold(f64::NEG_INFINITY, f64::max);
    checks.push(PropertyCheck {
        id: 4,
        name: "ln MF non-increasing",
        pass: rise <= opts.monotone_slack,
        evidence: rise,
        grid: grid.clone(),
        detail: format!("largest step up {:.3e}", rise),
    });

    let head = v[0];
    let top = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let a_line = crate::linemax::line_max_with(&big_f, 1.0, &t3.line)?;
    let a_sup = ln_big
        .points()
        .filter(|(t, _)| *t >= 1.0)
        .map(|(_, x)| x)
        .fold(a_line.log_value, f64::max)
        .exp();
    let bounded = top.is_finite() && top <= head + opts.monotone_slack && a_sup.is_finite() && a_sup > 0.0;
    checks.push(PropertyCheck {
        id: 5,
        name: "ln MF bounded above on [1/2, inf)",
        pass: bounded,
        evidence: top - head,
        grid: grid.clone(),
        detail: format!("max ln MF {:.6e}, ln MF(1/2) {:.6e}, A = {:.6e}", top, head, a_sup),
    });

    let (y_lo, y_hi) = opts.decay_band;
    let decay = horizontal_decay_threshold(&big_f, y_lo, y_hi, opts.decay_threshold);
    let (pass, evidence, detail) = match decay {
        Ok(d) => (true, d.x, format!("|F| <= {:e} for |x| >= {:.6e}", opts.decay_threshold, d.x)),
        Err(Error::DecayNotFound { best, .. }) => (false, f64::INFINITY, format!("no decay; tail sup stays {:.3e}", best)),
        Err(e) => return Err(e),
    };
    checks.push(PropertyCheck {
        id: 6,
        name: "F(x+iy) → 0 uniformly as |x| → inf on bands",
        pass,
        evidence,
        grid: vec![y_lo, y_hi],
        detail,
    });

    let all_pass = checks.iter().all(|c| c.pass);
    Ok(FPropertyReport {
        a_hat: a,
        a_sup,
        f_expr: big_f.to_string(),
        checks,
        all_pass,
    })
}
