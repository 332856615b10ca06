//! Disk Bloch spaces through the Cayley map `w = (1+iz)/(1-iz)`.
//!
//! For `g_f(z) = 4 f'(w(z)) / (1-iz)^2` one has
//! `Im z |g_f(z)| = (1-|w|^2) |f'(w)|`, so `f` is Bloch exactly when `g_f`
//! lies in `Λ(t)`, and little Bloch exactly when it lies in `λ(t)`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{add, cnst, div, mul, powi, sub, EvalError, Expr, Node};
use crate::halfnorm::{default_schedule, is_in_small_space, weighted_norm, Membership, NormEstimate, Point};
use crate::optimize::golden_max;
use crate::weights::Weight;
use crate::Complex64;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Closest approach to the unit circle checked for poles.
pub const POLE_MARGIN: f64 = 1e-6;

pub fn cayley_to_disk(z: Complex64) -> Complex64 {
    (1.0 + I * z) / (1.0 - I * z)
}

pub fn cayley_to_halfplane(w: Complex64) -> Result<Complex64> {
    if w == Complex64::new(-1.0, 0.0) {
        return Err(Error::CayleyPole);
    }
    Ok(I * (1.0 - w) / (1.0 + w))
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiskFunction {
    expr: Option<Expr>,
    derivative: Expr,
}

impl DiskFunction {
    pub fn new(expr: Expr) -> Result<Self> {
        let derivative = expr.differentiate();
        let df = DiskFunction {
            expr: Some(expr),
            derivative,
        };
        df.check_poles()?;
        Ok(df)
    }

    pub fn parse(src: &str) -> Result<Self> {
        Self::new(Expr::parse(src, "w")?)
    }

    /// A disk function known only through `f'`, for derivatives whose
    /// antiderivative is outside the expression grammar.
    pub fn from_derivative(derivative: Expr) -> Result<Self> {
        let df = DiskFunction { expr: None, derivative };
        df.check_poles()?;
        Ok(df)
    }

    pub fn expr(&self) -> Option<&Expr> {
        self.expr.as_ref()
    }

    pub fn derivative(&self) -> &Expr {
        &self.derivative
    }

    fn check_poles(&self) -> Result<()> {
        let mut dens = Vec::new();
        if let Some(e) = &self.expr {
            denominators(e.root(), &mut dens);
        }
        denominators(self.derivative.root(), &mut dens);
        for d in dens {
            let d = Expr::from_node("w", d);
            if let Some(w) = zero_in_disk(&d, 1.0 - POLE_MARGIN) {
                return Err(Error::Eval(EvalError::Pole {
                    re: w.re,
                    im: w.im,
                    modulus: w.norm(),
                }));
            }
        }
        Ok(())
    }

    /// `ln((1-r^2)|f'(w)|)` at `w = (1 - e^s) e^{iθ}`.
    fn log_weighted(&self, s: f64, theta: f64) -> Result<f64> {
        let gap = s.exp();
        let w = Complex64::from_polar(1.0 - gap, theta);
        let d = self.derivative.ln_abs(w)?;
        Ok(s + (2.0 - gap).ln() + d)
    }
}

fn denominators(n: &Node, out: &mut Vec<Node>) {
    match n {
        Node::Const(_) | Node::Var => {}
        Node::Neg(a) | Node::Exp(a) => denominators(a, out),
        Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) => {
            denominators(a, out);
            denominators(b, out);
        }
        Node::Div(a, b) => {
            denominators(a, out);
            denominators(b, out);
            out.push((**b).clone());
        }
        Node::Pow(a, k) => {
            denominators(a, out);
            if *k < 0 {
                out.push((**a).clone());
            }
        }
    }
}

/// A zero of `d` with `|w| <= radius`, found by Newton's method started from
/// the polar samples where `|d|` is smallest.
fn zero_in_disk(d: &Expr, radius: f64) -> Option<Complex64> {
    let dd = d.differentiate();
    let mut starts: Vec<(f64, Complex64)> = Vec::new();
    for k in 0..=32 {
        let r = radius * k as f64 / 32.0;
        for j in 0..64 {
            let w = Complex64::from_polar(r, 2.0 * PI * j as f64 / 64.0);
            match d.eval_complex(w) {
                Ok(v) => starts.push((v.norm(), w)),
                Err(_) => return Some(w),
            }
        }
    }
    starts.sort_by(|a, b| a.0.total_cmp(&b.0));
    for &(_, w0) in starts.iter().take(8) {
        let mut w = w0;
        for _ in 0..100 {
            let (Ok(v), Ok(dv)) = (d.eval_complex(w), dd.eval_complex(w)) else {
                break;
            };
            if v.norm() == 0.0 {
                break;
            }
            if dv.norm() == 0.0 {
                break;
            }
            let step = v / dv;
            w -= step;
            if !w.is_finite() || w.norm() > 4.0 {
                break;
            }
            if step.norm() < 1e-14 * (1.0 + w.norm()) {
                break;
            }
        }
        if w.is_finite() && w.norm() <= radius {
            let v = d.eval_complex(w).map(|v| v.norm()).unwrap_or(0.0);
            let scale = starts.last().map(|s| s.0).unwrap_or(1.0).max(1.0);
            if v <= 1e-10 * scale {
                return Some(w);
            }
        }
    }
    None
}

/// `4 f'((1+iz)/(1-iz)) / (1-iz)^2` as an expression in `z`.
pub fn g_transform(df: &DiskFunction) -> Expr {
    let one_minus_iz = sub(cnst(1.0, 0.0), mul(cnst(0.0, 1.0), Node::Var));
    let one_plus_iz = add(cnst(1.0, 0.0), mul(cnst(0.0, 1.0), Node::Var));
    let w = Expr::from_node("z", div(one_plus_iz, one_minus_iz.clone()));
    let fp = df.derivative.substitute(&w);
    let g = div(mul(cnst(4.0, 0.0), fp.into_root()), powi(one_minus_iz, 2));
    Expr::from_node("z", g)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PolarGrid {
    pub radii: usize,
    pub angles: usize,
    /// Smallest `1 - r` sampled.
    pub min_gap: f64,
}

impl Default for PolarGrid {
    fn default() -> Self {
        PolarGrid {
            radii: 128,
            angles: 256,
            min_gap: POLE_MARGIN,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeminormEstimate {
    pub value: f64,
    pub argmax: Option<Point>,
}

/// `sup (1-|w|^2)|f'(w)|` over the disk.
pub fn bloch_seminorm(df: &DiskFunction) -> Result<SeminormEstimate> {
    bloch_seminorm_with(df, &PolarGrid::default())
}

pub fn bloch_seminorm_with(df: &DiskFunction, grid: &PolarGrid) -> Result<SeminormEstimate> {
    if grid.radii < 3 || grid.angles < 3 || !(grid.min_gap > 0.0 && grid.min_gap < 1.0) {
        return Err(Error::Invalid("polar grid needs >= 3 radii and angles, 0 < min_gap < 1".into()));
    }
    let s_lo = grid.min_gap.ln();
    let ds = -s_lo / (grid.radii - 1) as f64;
    let dt = 2.0 * PI / grid.angles as f64;
    let s_of = |i: usize| -(i as f64) * ds;
    let table: Vec<Vec<f64>> = (0..grid.radii)
        .into_par_iter()
        .map(|i| (0..grid.angles).map(|j| df.log_weighted(s_of(i), j as f64 * dt)).collect())
        .collect::<Result<_>>()?;

    let mut cells: Vec<(f64, usize, usize)> = table
        .iter()
        .enumerate()
        .flat_map(|(i, row)| row.iter().enumerate().map(move |(j, v)| (*v, i, j)))
        .filter(|c| c.0 > f64::NEG_INFINITY)
        .collect();
    if cells.is_empty() {
        return Ok(SeminormEstimate {
            value: 0.0,
            argmax: None,
        });
    }
    cells.sort_by(|a, b| b.0.total_cmp(&a.0));

    let mut best = (f64::NEG_INFINITY, 0.0, 0.0);
    for &(v, i, j) in cells.iter().take(3) {
        let (s0, t0) = (s_of(i), j as f64 * dt);
        if v > best.0 {
            best = (v, s0, t0);
        }
        let (s_min, s_max) = ((s0 - ds).max(s_lo), (s0 + ds).min(0.0));
        let (mut s, mut t, mut val) = (s0, t0, v);
        for _ in 0..4 {
            let gt = golden_max(|th| df.log_weighted(s, th), t - dt, t + dt, |_| 1e-11)?;
            if gt.value > val {
                t = gt.x;
                val = gt.value;
            }
            let gs = golden_max(|ss| df.log_weighted(ss, t), s_min, s_max, |_| 1e-11)?;
            if gs.value > val {
                s = gs.x;
                val = gs.value;
            }
        }
        // r = 0 is an edge of the radial bracket that golden search never evaluates.
        let centre = df.log_weighted(0.0, 0.0)?;
        if centre > val {
            s = 0.0;
            val = centre;
        }
        if val > best.0 {
            best = (val, s, t);
        }
    }
    let w = Complex64::from_polar(1.0 - best.1.exp(), best.2);
    Ok(SeminormEstimate {
        value: best.0.exp(),
        argmax: Some(Point { re: w.re, im: w.im }),
    })
}

pub const NORM_GAP_TOL: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormComparison {
    pub bloch: SeminormEstimate,
    pub half_plane: NormEstimate,
    pub g_expr: String,
    /// `|a - b| / max(a, b)`, zero when both vanish.
    pub gap: f64,
    pub pass: bool,
}

/// Disk seminorm against `sup Im z |g_f(z)|`.
pub fn compare_norms(df: &DiskFunction) -> Result<NormComparison> {
    let bloch = bloch_seminorm(df)?;
    let g = g_transform(df);
    let half_plane = weighted_norm(&g, &Weight::parse("t")?)?;
    let (a, b) = (bloch.value, half_plane.value);
    let gap = if a == 0.0 && b == 0.0 {
        0.0
    } else {
        (a - b).abs() / a.max(b)
    };
    Ok(NormComparison {
        bloch,
        half_plane,
        g_expr: g.to_string(),
        gap,
        pass: gap <= NORM_GAP_TOL,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RingSample {
    /// `1 - r`
    pub gap: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LittleBlochReport {
    pub rings: Vec<RingSample>,
    pub disk_verdict: Membership,
    pub half_plane_verdict: Membership,
    pub half_plane_diagnostics: String,
    pub agree: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RingOptions {
    pub max_k: i32,
    pub angles: usize,
    pub vanish: f64,
    pub persist: f64,
}

impl Default for RingOptions {
    fn default() -> Self {
        RingOptions {
            max_k: 30,
            angles: 256,
            vanish: 1e-6,
            persist: 1e-3,
        }
    }
}

/// Max over angles of `(1-|w|^2)|f'(w)|` on rings `1 - r = 2^{-k}`.
pub fn ring_maxima(df: &DiskFunction, opts: &RingOptions) -> Result<Vec<RingSample>> {
    let dt = 2.0 * PI / opts.angles as f64;
    (1..=opts.max_k)
        .into_par_iter()
        .map(|k| {
            let gap = 2f64.powi(-k);
            let s = gap.ln();
            let mut m = f64::NEG_INFINITY;
            for j in 0..opts.angles {
                m = m.max(df.log_weighted(s, j as f64 * dt)?);
            }
            Ok(RingSample { gap, max: m.exp() })
        })
        .collect()
}

pub fn little_bloch_check(df: &DiskFunction) -> Result<LittleBlochReport> {
    little_bloch_check_with(df, &RingOptions::default())
}

pub fn little_bloch_check_with(df: &DiskFunction, opts: &RingOptions) -> Result<LittleBlochReport> {
    let rings = ring_maxima(df, opts)?;
    let last = rings.last().map(|r| r.max).unwrap_or(0.0);
    let disk_verdict = if last < opts.vanish {
        Membership::Yes
    } else if last > opts.persist {
        Membership::No
    } else {
        Membership::Inconclusive
    };
    let g = g_transform(df);
    let m = is_in_small_space(&g, &Weight::parse("t")?, &default_schedule())?;
    Ok(LittleBlochReport {
        agree: disk_verdict == m.in_small_space,
        rings,
        disk_verdict,
        half_plane_verdict: m.in_small_space,
        half_plane_diagnostics: m.diagnostics,
    })
}
