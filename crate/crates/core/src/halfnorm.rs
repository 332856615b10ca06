//! Weighted norm `‖f‖ = sup p(Im z)|f(z)|` and the small-space tail test.
//!
//! Suprema over unbounded ranges of `y` are taken on geometric grids with
//! explicit status flags instead of silent truncation: for `p(t) = t` and
//! `f = 1/(z+i)` the norm is approached only as `y → ∞`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::curve::{dyadic_grid, geometric_grid, linear_grid};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::linemax::{line_max_with, LineMaxOptions};
use crate::optimize::golden_max;
use crate::weights::Weight;

/// `λ(p)` membership is accepted once the tail sup drops below this.
pub const EPS_MEMBER: f64 = 1e-6;
/// A tail stabilising above this rejects membership.
pub const NON_MEMBER_FLOOR: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormOptions {
    pub y_lo_exp: i32,
    pub y_hi_exp: i32,
    pub per_octave: usize,
    /// Absolute tolerance in `ln y` of the refinement step.
    pub log_y_tol: f64,
    /// Edge samples inspected for a monotone approach to the boundary.
    pub edge_trend: usize,
    pub line: LineMaxOptions,
}

impl Default for NormOptions {
    fn default() -> Self {
        NormOptions {
            y_lo_exp: -20,
            y_hi_exp: 20,
            per_octave: 6,
            log_y_tol: 1e-9,
            edge_trend: 5,
            line: LineMaxOptions::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormStatus {
    AttainedInterior,
    ApproachedAtBoundary,
    Truncated,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Point {
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormEstimate {
    pub value: f64,
    pub log_value: f64,
    pub argmax: Option<Point>,
    pub y_min: f64,
    pub y_max: f64,
    pub y_points: usize,
    pub status: NormStatus,
}

/// `ln p(y) + ln Mf(y)` together with the maximising abscissa.
fn weighted_line(f: &Expr, w: &Weight, y: f64, line: &LineMaxOptions) -> Result<(f64, Option<f64>)> {
    let m = line_max_with(f, y, line)?;
    if m.log_value == f64::NEG_INFINITY {
        return Ok((f64::NEG_INFINITY, None));
    }
    Ok((w.log_p(y)? + m.log_value, m.argmax_x))
}

fn profile(f: &Expr, w: &Weight, ys: &[f64], line: &LineMaxOptions) -> Result<Vec<(f64, f64, Option<f64>)>> {
    ys.par_iter()
        .map(|&y| weighted_line(f, w, y, line).map(|(v, x)| (y, v, x)))
        .collect()
}

fn refine_in_log_y(
    f: &Expr,
    w: &Weight,
    lo: f64,
    hi: f64,
    tol: f64,
    line: &LineMaxOptions,
) -> Result<(f64, f64, Option<f64>)> {
    let g = golden_max(|s: f64| Ok::<_, Error>(weighted_line(f, w, s.exp(), line)?.0), lo.ln(), hi.ln(), |_| tol)?;
    let y = g.x.exp();
    let (v, x) = weighted_line(f, w, y, line)?;
    Ok((y, v, x))
}

/// `‖f‖` for weight `w` with the default options.
pub fn weighted_norm(f: &Expr, w: &Weight) -> Result<NormEstimate> {
    weighted_norm_with(f, w, &NormOptions::default())
}

pub fn weighted_norm_with(f: &Expr, w: &Weight, opts: &NormOptions) -> Result<NormEstimate> {
    let ys = dyadic_grid(opts.y_lo_exp, opts.y_hi_exp, opts.per_octave);
    let prof = profile(f, w, &ys, &opts.line)?;
    let n = prof.len();
    let (j, best) = prof
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, p)| if p.1 > acc.1 { (i, p.1) } else { acc });

    let mut est = NormEstimate {
        value: 0.0,
        log_value: f64::NEG_INFINITY,
        argmax: None,
        y_min: ys[0],
        y_max: ys[n - 1],
        y_points: n,
        status: NormStatus::AttainedInterior,
    };
    if best == f64::NEG_INFINITY {
        return Ok(est);
    }

    // A flat profile attains its maximum inside the grid too.
    let tie = best - 1e-12 * (1.0 + best.abs());
    let j = if j == 0 || j + 1 == n {
        (1..n.saturating_sub(1)).find(|&i| prof[i].1 >= tie).unwrap_or(j)
    } else {
        j
    };
    let (mut y, mut v, mut x) = prof[j];
    if j > 0 && j + 1 < n {
        let r = refine_in_log_y(f, w, prof[j - 1].0, prof[j + 1].0, opts.log_y_tol, &opts.line)?;
        if r.1 > v {
            (y, v, x) = r;
        }
    } else {
        let k = opts.edge_trend.min(n);
        let toward_edge: Vec<f64> = if j == 0 {
            prof[..k].iter().rev().map(|p| p.1).collect()
        } else {
            prof[n - k..].iter().map(|p| p.1).collect()
        };
        est.status = if toward_edge.windows(2).all(|w| w[1] > w[0]) {
            NormStatus::ApproachedAtBoundary
        } else {
            NormStatus::Truncated
        };
    }
    est.value = v.exp();
    est.log_value = v;
    est.argmax = x.map(|re| Point { re, im: y });
    Ok(est)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KBox {
    c: f64,
}

impl KBox {
    pub fn new(c: f64) -> Result<Self> {
        if !(c >= 1.0 && c.is_finite()) {
            return Err(Error::Invalid(format!("box parameter c must be >= 1, got {}", c)));
        }
        Ok(KBox { c })
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn contains(&self, z: Complex64) -> bool {
        z.im >= 1.0 / self.c && z.im <= self.c && z.re.abs() <= self.c
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailOptions {
    /// Strips are sampled for `y` in `[2^strip_lo_exp, 2^strip_hi_exp]`.
    pub strip_lo_exp: i32,
    pub strip_hi_exp: i32,
    pub strip_per_octave: usize,
    pub side_x_per_octave: usize,
    pub side_y_linear: usize,
    pub side_y_geometric: usize,
    pub log_y_tol: f64,
    pub line: LineMaxOptions,
}

impl Default for TailOptions {
    fn default() -> Self {
        TailOptions {
            strip_lo_exp: -32,
            strip_hi_exp: 32,
            strip_per_octave: 6,
            side_x_per_octave: 8,
            side_y_linear: 64,
            side_y_geometric: 64,
            log_y_tol: 1e-7,
            line: LineMaxOptions::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailSup {
    pub c: f64,
    /// `0 < y < 1/c`
    pub lower: f64,
    /// `y > c`
    pub upper: f64,
    /// `1/c <= y <= c`, `|x| > c`
    pub side: f64,
    pub sup: f64,
}

/// `y ↦ ln p(y) + ln Mf(y)` on the strip grid, with every local peak
/// already refined, so strip suprema for any box are lookups.
struct StripProfile {
    samples: Vec<(f64, f64)>,
    peaks: Vec<(f64, f64)>,
}

impl StripProfile {
    fn build(f: &Expr, w: &Weight, opts: &TailOptions) -> Result<Self> {
        let ys = dyadic_grid(opts.strip_lo_exp, opts.strip_hi_exp, opts.strip_per_octave);
        let samples: Vec<(f64, f64)> = profile(f, w, &ys, &opts.line)?.into_iter().map(|p| (p.0, p.1)).collect();
        let n = samples.len();
        let interior_peaks: Vec<usize> = (1..n.saturating_sub(1))
            .filter(|&i| {
                let v = samples[i].1;
                v > f64::NEG_INFINITY && v >= samples[i - 1].1 && v >= samples[i + 1].1
            })
            .collect();
        let peaks = interior_peaks
            .par_iter()
            .map(|&i| {
                let r = refine_in_log_y(f, w, samples[i - 1].0, samples[i + 1].0, opts.log_y_tol, &opts.line)?;
                Ok(if r.1 > samples[i].1 { (r.0, r.1) } else { samples[i] })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(StripProfile { samples, peaks })
    }

    /// Sup over the open range `(lo, hi)` including its finite endpoint
    /// limits, given precomputed endpoint values.
    fn sup(&self, lo: f64, hi: f64, endpoints: &[f64]) -> f64 {
        self.samples
            .iter()
            .chain(&self.peaks)
            .filter(|(y, _)| *y > lo && *y < hi)
            .map(|s| s.1)
            .chain(endpoints.iter().copied())
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

fn side_band(f: &Expr, w: &Weight, c: f64, opts: &TailOptions) -> Result<f64> {
    let x_cap = opts.line.x_cap;
    let xs: Vec<f64> = if c >= x_cap {
        vec![c]
    } else {
        let octaves = (x_cap / c).log2().ceil().max(1.0) as usize;
        geometric_grid(c, x_cap, octaves * opts.side_x_per_octave + 1)
    };
    let mut ys: Vec<f64> = if c == 1.0 {
        vec![1.0]
    } else {
        let mut v = linear_grid(1.0 / c, c, opts.side_y_linear);
        v.extend(geometric_grid(1.0 / c, c, opts.side_y_geometric));
        v
    };
    ys.sort_by(f64::total_cmp);
    ys.dedup();

    let cell = |x: f64, y: f64, lp: f64| -> Result<f64> { Ok(lp + f.ln_abs(Complex64::new(x, y))?) };

    // (value, y index, x index, sign)
    let rows = ys
        .par_iter()
        .enumerate()
        .map(|(j, &y)| {
            let lp = w.log_p(y)?;
            let mut best = (f64::NEG_INFINITY, j, 0usize, 1.0f64);
            for (i, &x) in xs.iter().enumerate() {
                for sign in [1.0, -1.0] {
                    let v = cell(sign * x, y, lp)?;
                    if v > best.0 {
                        best = (v, j, i, sign);
                    }
                }
            }
            Ok(best)
        })
        .collect::<Result<Vec<_>>>()?;
    let (mut best, j, i, sign) = rows
        .into_iter()
        .fold((f64::NEG_INFINITY, 0, 0, 1.0), |acc, r| if r.0 > acc.0 { r } else { acc });
    if best == f64::NEG_INFINITY {
        return Ok(best);
    }

    // One coordinate pass: y at fixed x, then |x| at the refined y.
    let x0 = xs[i];
    let mut y_best = ys[j];
    if ys.len() > 1 {
        let lo = ys[j.saturating_sub(1)];
        let hi = ys[(j + 1).min(ys.len() - 1)];
        let g = golden_max(
            |y: f64| cell(sign * x0, y, w.log_p(y)?),
            lo,
            hi,
            |y| 1e-9 * (1.0 + y),
        )?;
        if g.value > best {
            best = g.value;
            y_best = g.x;
        }
    }
    if xs.len() > 1 {
        let lp = w.log_p(y_best)?;
        let lo = xs[i.saturating_sub(1)];
        let hi = xs[(i + 1).min(xs.len() - 1)];
        let g = golden_max(|x: f64| cell(sign * x, y_best, lp), lo, hi, |x| 1e-9 * (1.0 + x))?;
        best = best.max(g.value);
    }
    Ok(best)
}

fn tail_with_profile(f: &Expr, w: &Weight, c: f64, prof: &StripProfile, opts: &TailOptions) -> Result<TailSup> {
    let (lower_edge, _) = weighted_line(f, w, 1.0 / c, &opts.line)?;
    let (upper_edge, _) = weighted_line(f, w, c, &opts.line)?;
    let lower = prof.sup(0.0, 1.0 / c, &[lower_edge]);
    let upper = prof.sup(c, f64::INFINITY, &[upper_edge]);
    let side = side_band(f, w, c, opts)?;
    let (lower, upper, side) = (lower.exp(), upper.exp(), side.exp());
    Ok(TailSup {
        c,
        lower,
        upper,
        side,
        sup: lower.max(upper).max(side),
    })
}

/// `sup p(Im z)|f(z)|` over the half plane minus `K_c`.
pub fn tail_sup_outside_box(f: &Expr, w: &Weight, kbox: KBox) -> Result<TailSup> {
    tail_sup_outside_box_with(f, w, kbox, &TailOptions::default())
}

pub fn tail_sup_outside_box_with(f: &Expr, w: &Weight, kbox: KBox, opts: &TailOptions) -> Result<TailSup> {
    let prof = StripProfile::build(f, w, opts)?;
    tail_with_profile(f, w, kbox.c(), &prof, opts)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Membership {
    Yes,
    No,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailRow {
    pub c: f64,
    /// Sup outside `K_c`: the largest sampled value over this box and every
    /// larger one, which is still a lower bound of the true sup.
    pub sup: f64,
    pub regions: TailSup,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MembershipReport {
    pub in_small_space: Membership,
    pub table: Vec<TailRow>,
    pub eps_member: f64,
    pub diagnostics: String,
}

impl MembershipReport {
    pub fn last_sup(&self) -> f64 {
        self.table.last().map(|r| r.sup).unwrap_or(f64::NAN)
    }

    pub fn sup_at(&self, c: f64) -> Option<f64> {
        self.table.iter().find(|r| r.c == c).map(|r| r.sup)
    }
}

/// `c = 2, 4, ..., 2^24`.
pub fn default_schedule() -> Vec<f64> {
    (1..=24).map(|k| 2f64.powi(k)).collect()
}

pub fn is_in_small_space(f: &Expr, w: &Weight, schedule: &[f64]) -> Result<MembershipReport> {
    is_in_small_space_with(f, w, schedule, &TailOptions::default())
}

pub fn is_in_small_space_with(f: &Expr, w: &Weight, schedule: &[f64], opts: &TailOptions) -> Result<MembershipReport> {
    if schedule.len() < 2 || schedule.windows(2).any(|p| p[1] <= p[0]) {
        return Err(Error::Invalid("schedule must be strictly increasing with >= 2 entries".into()));
    }
    for &c in schedule {
        KBox::new(c)?;
    }
    let prof = StripProfile::build(f, w, opts)?;
    let raw = schedule
        .iter()
        .map(|&c| tail_with_profile(f, w, c, &prof, opts))
        .collect::<Result<Vec<_>>>()?;

    // S(c) >= S(c') for c < c', and each sampled value is a lower bound.
    let mut table: Vec<TailRow> = Vec::with_capacity(raw.len());
    let mut running = 0.0f64;
    for r in raw.iter().rev() {
        running = running.max(r.sup);
        table.push(TailRow {
            c: r.c,
            sup: running,
            regions: *r,
        });
    }
    table.reverse();

    let sups: Vec<f64> = table.iter().map(|r| r.sup).collect();
    let last = *sups.last().unwrap();
    let (verdict, diagnostics) = if last == 0.0 {
        (Membership::Yes, "weighted modulus vanishes on every sample".to_string())
    } else {
        let k = sups.len();
        let ratios: Vec<f64> = sups[k.saturating_sub(4)..].windows(2).map(|p| p[1] / p[0]).collect();
        let geometric = ratios.len() >= 3 && ratios.iter().all(|r| *r <= 0.9);
        let change = ((sups[k - 1] - sups[k - 2]) / sups[k - 2]).abs();
        if last < EPS_MEMBER && geometric {
            (
                Membership::Yes,
                format!(
                    "tail falls to {:.3e} < {:.0e} at c={:e} with ratios {:?}; membership holds up to eps={:.0e}",
                    last,
                    EPS_MEMBER,
                    table[k - 1].c,
                    ratios,
                    EPS_MEMBER
                ),
            )
        } else if last > NON_MEMBER_FLOOR && change < 1e-4 {
            (
                Membership::No,
                format!("tail stabilises at {:.9e} (relative change {:.1e})", last, change),
            )
        } else {
            (
                Membership::Inconclusive,
                format!("tail {:.3e} at c={:e}, last ratios {:?}", last, table[k - 1].c, ratios),
            )
        }
    };
    Ok(MembershipReport {
        in_small_space: verdict,
        table,
        eps_member: EPS_MEMBER,
        diagnostics,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayThreshold {
    pub x: f64,
    /// Sampled `sup |f|` over `|x| >= x`, `y` in the band.
    pub sup: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayOptions {
    pub x_start: f64,
    pub x_cap: f64,
    pub y_points: usize,
    pub x_per_octave: usize,
    pub bisections: usize,
}

impl Default for DecayOptions {
    fn default() -> Self {
        DecayOptions {
            x_start: 1.0,
            x_cap: 2f64.powi(30),
            y_points: 64,
            x_per_octave: 8,
            bisections: 24,
        }
    }
}

fn horizontal_tail(f: &Expr, ys: &[f64], x: f64, opts: &DecayOptions) -> Result<f64> {
    let xs = if x >= opts.x_cap {
        vec![x]
    } else {
        let octaves = (opts.x_cap / x).log2().ceil().max(1.0) as usize;
        geometric_grid(x, opts.x_cap, octaves * opts.x_per_octave + 1)
    };
    let rows = ys
        .par_iter()
        .map(|&y| {
            let mut best = f64::NEG_INFINITY;
            for &x in &xs {
                for s in [1.0, -1.0] {
                    best = best.max(f.ln_abs(Complex64::new(s * x, y))?);
                }
            }
            Ok(best)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(rows.into_iter().fold(f64::NEG_INFINITY, f64::max))
}

/// Smallest `X` (doubling from `x_start`, then bisection) beyond which
/// `|f(x + iy)| <= threshold` for all sampled `|x| >= X`, `y` in `[y_lo, y_hi]`.
pub fn horizontal_decay_threshold(f: &Expr, y_lo: f64, y_hi: f64, threshold: f64) -> Result<DecayThreshold> {
    horizontal_decay_threshold_with(f, y_lo, y_hi, threshold, &DecayOptions::default())
}

pub fn horizontal_decay_threshold_with(
    f: &Expr,
    y_lo: f64,
    y_hi: f64,
    threshold: f64,
    opts: &DecayOptions,
) -> Result<DecayThreshold> {
    if !(y_lo > 0.0 && y_hi > y_lo && threshold > 0.0) {
        return Err(Error::Invalid("need 0 < y_lo < y_hi and threshold > 0".into()));
    }
    let ys = linear_grid(y_lo, y_hi, opts.y_points.max(2));
    let ln_thr = threshold.ln();
    let mut hi = opts.x_start;
    let mut hi_val = horizontal_tail(f, &ys, hi, opts)?;
    if hi_val <= ln_thr {
        return Ok(DecayThreshold {
            x: hi,
            sup: hi_val.exp(),
        });
    }
    let mut best = hi_val;
    let mut lo;
    loop {
        lo = hi;
        hi *= 2.0;
        if hi > opts.x_cap {
            return Err(Error::DecayNotFound {
                x_cap: opts.x_cap,
                best: best.exp(),
            });
        }
        hi_val = horizontal_tail(f, &ys, hi, opts)?;
        best = best.min(hi_val);
        if hi_val <= ln_thr {
            break;
        }
    }
    for _ in 0..opts.bisections {
        let mid = (lo * hi).sqrt();
        let v = horizontal_tail(f, &ys, mid, opts)?;
        if v <= ln_thr {
            hi = mid;
            hi_val = v;
        } else {
            lo = mid;
        }
    }
    Ok(DecayThreshold {
        x: hi,
        sup: hi_val.exp(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(src: &str) -> Expr {
        Expr::parse(src, "z").unwrap()
    }

    fn weight(src: &str) -> Weight {
        Weight::parse(src).unwrap()
    }

    #[test]
    fn kbox_validation() {
        assert!(KBox::new(0.5).is_err());
        let b = KBox::new(2.0).unwrap();
        assert!(b.contains(Complex64::new(2.0, 0.5)));
        assert!(!b.contains(Complex64::new(2.1, 1.0)));
        assert!(!b.contains(Complex64::new(0.0, 0.4)));
    }

    #[test]
    fn zero_function_everywhere() {
        let w = weight("t");
        let z = f("0");
        assert_eq!(weighted_norm(&z, &w).unwrap().value, 0.0);
        let opts = TailOptions {
            strip_lo_exp: -4,
            strip_hi_exp: 4,
            ..TailOptions::default()
        };
        assert_eq!(tail_sup_outside_box_with(&z, &w, KBox::new(3.0).unwrap(), &opts).unwrap().sup, 0.0);
        let r = is_in_small_space_with(&z, &w, &[2.0, 4.0, 8.0], &opts).unwrap();
        assert_eq!(r.in_small_space, Membership::Yes);
    }

    #[test]
    fn decay_threshold_examples() {
        let d = horizontal_decay_threshold(&f("1/(z+i)"), 1.0, 2.0, 0.01).unwrap();
        assert!((d.x - (10000f64 - 4.0).sqrt()).abs() < 1e-3, "{:?}", d);
        let d = horizontal_decay_threshold(&f("exp(2*i*z)"), 1.0, 2.0, 1.0).unwrap();
        assert_eq!(d.x, 1.0);
        assert!(matches!(
            horizontal_decay_threshold(&f("exp(2*i*z)"), 1.0, 2.0, 1e-9),
            Err(Error::DecayNotFound { .. })
        ));
    }
}
