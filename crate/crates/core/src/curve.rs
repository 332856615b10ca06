use serde::Serialize;

use crate::error::{Error, Result};

/// Real samples on a strictly increasing positive grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampledCurve {
    grid: Vec<f64>,
    values: Vec<f64>,
    label: String,
}

impl SampledCurve {
    pub fn new(grid: Vec<f64>, values: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(Error::Invalid(format!(
                "grid has {} points but {} values",
                grid.len(),
                values.len()
            )));
        }
        if grid.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
            return Err(Error::Invalid("grid points must be finite and positive".into()));
        }
        if grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Invalid("grid must be strictly increasing".into()));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Invalid(format!(
                "value at t={} is not finite ({})",
                grid[i], values[i]
            )));
        }
        Ok(SampledCurve {
            grid,
            values,
            label: label.into(),
        })
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.grid.iter().copied().zip(self.values.iter().copied())
    }

    /// Write as CSV with a `t,value` header.
    pub fn write_csv<W: std::io::Write>(&self, out: W) -> std::io::Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record(["t", "value"])?;
        for (t, v) in self.points() {
            w.write_record([t.to_string(), v.to_string()])?;
        }
        w.flush()
    }
}

/// `n` points geometrically spaced from `lo` to `hi` inclusive.
pub fn geometric_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2 && lo > 0.0 && hi > lo);
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| {
            if i == 0 {
                lo
            } else if i == n - 1 {
                hi
            } else {
                (a + (b - a) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}

/// Powers of two `2^(k/per_octave)` for `k` covering `[2^lo_exp, 2^hi_exp]`;
/// exact at every integer octave.
pub fn dyadic_grid(lo_exp: i32, hi_exp: i32, per_octave: usize) -> Vec<f64> {
    let steps = (hi_exp - lo_exp) as usize * per_octave;
    (0..=steps)
        .map(|k| {
            let e = lo_exp as f64 + k as f64 / per_octave as f64;
            if k % per_octave == 0 {
                2f64.powi(e as i32)
            } else {
                e.exp2()
            }
        })
        .collect()
}

/// `n` points linearly spaced from `lo` to `hi` inclusive.
pub fn linear_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2);
    (0..n)
        .map(|i| {
            if i == n - 1 {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (n - 1) as f64
            }
        })
        .collect()
}
