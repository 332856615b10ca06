//! Line maxima `Mf(y) = sup_x |f(x + iy)|` and the curve `t ↦ ln Mf(t)`.
//!
//! Along a horizontal line the search is an adaptive symmetric scan: the
//! half-width doubles from `x_start` until both edge samples have dropped to
//! `decay_factor` times the running peak, the modulus is visibly constant,
//! or `x_cap` is reached. The best few local maxima of the merged samples
//! are then polished by golden-section search. Everything is done on
//! `ln |f|` in extended range, so `Mf(1024)` of `e^{2iz}` (about
//! `e^{-2048}`) is still a finite logarithm.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::curve::SampledCurve;
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::optimize::golden_max;
use crate::weights::AffineWitness;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LineMaxOptions {
    /// Samples per scan (odd, so `x = 0` is always sampled).
    pub points: usize,
    pub x_start: f64,
    pub x_cap: f64,
    pub decay_factor: f64,
    /// Number of local maxima polished by golden-section search.
    pub refine_top: usize,
    /// Doublings after which a flat modulus is declared non-decaying.
    pub nondecay_after: usize,
    pub nondecay_ratio: f64,
    /// Relative abscissa tolerance of the polish step.
    pub x_tol: f64,
}

impl Default for LineMaxOptions {
    fn default() -> Self {
        LineMaxOptions {
            points: 1025,
            x_start: 8.0,
            x_cap: 2f64.powi(30),
            decay_factor: 1e-6,
            refine_top: 5,
            nondecay_after: 10,
            nondecay_ratio: 0.99,
            x_tol: 1e-10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LineStatus {
    Converged,
    NonDecaying,
    TruncatedAtCap,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LineMaxResult {
    pub y: f64,
    /// `Mf(y)`; may underflow to 0 where `log_value` is still finite.
    pub value: f64,
    /// `ln Mf(y)`; `-inf` only when `f` vanishes on every sample.
    pub log_value: f64,
    pub argmax_x: Option<f64>,
    pub status: LineStatus,
    /// Final half-width of the scan.
    pub half_width: f64,
    pub evaluations: usize,
}

/// `Mf(y)` with the default options.
pub fn line_max(f: &Expr, y: f64) -> Result<LineMaxResult> {
    line_max_with(f, y, &LineMaxOptions::default())
}

pub fn line_max_with(f: &Expr, y: f64, opts: &LineMaxOptions) -> Result<LineMaxResult> {
    if !(y > 0.0 && y.is_finite()) {
        return Err(Error::Invalid(format!("line height must be positive, got {}", y)));
    }
    if opts.points < 3 || !(opts.x_start > 0.0) || !(opts.decay_factor > 0.0) {
        return Err(Error::Invalid("line-max options out of range".into()));
    }
    let eval = |x: f64| -> Result<f64> { Ok(f.ln_abs(Complex64::new(x, y))?) };
    let ln_decay = opts.decay_factor.ln();
    let ln_flat = opts.nondecay_ratio.ln();
    let intervals = (opts.points - 1 + (opts.points - 1) % 2) as f64;

    let mut samples: Vec<(f64, f64)> = Vec::with_capacity(opts.points * 8);
    let mut peak = f64::NEG_INFINITY;
    let mut half = opts.x_start;
    let mut previous_half = 0.0;
    let mut doublings = 0;
    let status = loop {
        let step = 2.0 * half / intervals;
        let mut left = f64::NEG_INFINITY;
        let mut right = f64::NEG_INFINITY;
        for j in 0..=(intervals as usize) {
            let x = -half + step * j as f64;
            // Points inside the previous window were already sampled there.
            if x.abs() <= previous_half && j != 0 && j != intervals as usize {
                continue;
            }
            let v = eval(x)?;
            if j == 0 {
                left = v;
            } else if j == intervals as usize {
                right = v;
            }
            peak = peak.max(v);
            samples.push((x, v));
        }
        let edge = left.max(right);
        if edge <= peak + ln_decay {
            break LineStatus::Converged;
        }
        if doublings >= opts.nondecay_after && left.min(right) >= peak + ln_flat {
            break LineStatus::NonDecaying;
        }
        if 2.0 * half > opts.x_cap {
            break LineStatus::TruncatedAtCap;
        }
        previous_half = half;
        half *= 2.0;
        doublings += 1;
    };

    samples.sort_by(|a, b| a.0.total_cmp(&b.0));
    samples.dedup_by(|a, b| a.0 == b.0);
    let mut evaluations = samples.len();

    let (mut best_x, mut best) = samples
        .iter()
        .copied()
        .fold((f64::NAN, f64::NEG_INFINITY), |acc, s| if s.1 > acc.1 { s } else { acc });
    if best == f64::NEG_INFINITY {
        return Ok(LineMaxResult {
            y,
            value: 0.0,
            log_value: f64::NEG_INFINITY,
            argmax_x: None,
            status,
            half_width: half,
            evaluations,
        });
    }

    let n = samples.len();
    let mut candidates: Vec<usize> = (0..n)
        .filter(|&i| {
            let v = samples[i].1;
            (i == 0 || v >= samples[i - 1].1) && (i + 1 == n || v >= samples[i + 1].1)
        })
        .collect();
    candidates.sort_by(|&a, &b| samples[b].1.total_cmp(&samples[a].1));
    candidates.truncate(opts.refine_top);
    for i in candidates {
        let lo = samples[i.saturating_sub(1)].0;
        let hi = samples[(i + 1).min(n - 1)].0;
        if hi <= lo {
            continue;
        }
        let g = golden_max(eval, lo, hi, |x| opts.x_tol * (1.0 + x.abs()))?;
        evaluations += g.evaluations;
        if g.value > best {
            best = g.value;
            best_x = g.x;
        }
    }

    Ok(LineMaxResult {
        y,
        value: best.exp(),
        log_value: best,
        argmax_x: Some(best_x),
        status,
        half_width: half,
        evaluations,
    })
}

/// `ln Mf` on `grid`; fails with [`Error::ZeroLine`] if `f` vanishes on a line.
pub fn mf_curve(f: &Expr, grid: &[f64]) -> Result<SampledCurve> {
    mf_curve_with(f, grid, &LineMaxOptions::default())
}

pub fn mf_curve_with(f: &Expr, grid: &[f64], opts: &LineMaxOptions) -> Result<SampledCurve> {
    let lines = mf_lines(f, grid, opts)?;
    curve_from_lines(&lines, "ln Mf")
}

/// Line maxima for every grid point, computed in parallel, in grid order.
pub fn mf_lines(f: &Expr, grid: &[f64], opts: &LineMaxOptions) -> Result<Vec<LineMaxResult>> {
    if grid.iter().any(|y| !(*y > 0.0)) {
        return Err(Error::Invalid("grid points must be positive".into()));
    }
    grid.par_iter().map(|&y| line_max_with(f, y, opts)).collect()
}

pub fn curve_from_lines(lines: &[LineMaxResult], label: &str) -> Result<SampledCurve> {
    if let Some(l) = lines.iter().find(|l| l.log_value == f64::NEG_INFINITY) {
        return Err(Error::ZeroLine { y: l.y });
    }
    SampledCurve::new(
        lines.iter().map(|l| l.y).collect(),
        lines.iter().map(|l| l.log_value).collect(),
        label,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvexityReport {
    /// Largest amount by which a sample sits above the chord of its
    /// neighbours.
    pub worst_defect: f64,
    pub at: Option<f64>,
    pub tol: f64,
    pub pass: bool,
}

/// Check the sampled curve against its chords on consecutive triples.
pub fn check_log_convexity(c: &SampledCurve, tol: f64) -> ConvexityReport {
    let g = c.grid();
    let v = c.values();
    let mut worst = f64::NEG_INFINITY;
    let mut at = None;
    for i in 1..c.len().saturating_sub(1) {
        let (t1, t2, t3) = (g[i - 1], g[i], g[i + 1]);
        let chord = v[i - 1] + (v[i + 1] - v[i - 1]) * (t2 - t1) / (t3 - t1);
        let defect = v[i] - chord;
        if defect > worst {
            worst = defect;
            at = Some(t2);
        }
    }
    let worst = worst.max(0.0);
    ConvexityReport {
        worst_defect: worst,
        at,
        tol,
        pass: worst <= tol,
    }
}

pub const DEFAULT_CONVEXITY_TOL: f64 = 1e-6;

/// An affine minorant of a convex curve: slope of the last chord backed off
/// by 1%, intercept the sampled minimum.
pub fn affine_minorant_of_curve(c: &SampledCurve) -> Result<AffineWitness> {
    if c.len() < 2 {
        return Err(Error::Invalid("need at least two samples".into()));
    }
    let report = check_log_convexity(c, DEFAULT_CONVEXITY_TOL);
    if !report.pass {
        return Err(Error::NotConvex {
            defect: report.worst_defect,
            at: report.at.unwrap_or(f64::NAN),
        });
    }
    let n = c.len();
    let (g, v) = (c.grid(), c.values());
    let slope = (v[n - 1] - v[n - 2]) / (g[n - 1] - g[n - 2]);
    let a = slope - 0.01 * (1.0 + slope.abs());
    let b = c.points().map(|(t, x)| x - a * t).fold(f64::INFINITY, f64::min);
    let witness = AffineWitness { a, b };
    let (t, worst) = witness.worst_violation(c.points());
    if worst > crate::weights::WITNESS_SLACK {
        return Err(Error::NotConvex { defect: worst, at: t });
    }
    Ok(witness)
}
