use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform time grid `t_k = k * dt`, `k = 0..len`, starting at zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    t_max: f64,
    dt: f64,
    len: usize,
}

impl TimeGrid {
    /// Builds the grid covering `[0, t_max]`. `t_max / dt` is rounded to the
    /// nearest integer, so `t_max` is reproduced to within rounding of `dt`.
    pub fn new(t_max: f64, dt: f64) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::InvalidGrid(format!("dt must be positive, got {dt}")));
        }
        if !(t_max.is_finite() && t_max > 0.0) {
            return Err(Error::InvalidGrid(format!("t_max must be positive, got {t_max}")));
        }
        let steps = (t_max / dt).round();
        if steps < 1.0 {
            return Err(Error::InvalidGrid(format!(
                "t_max = {t_max} shorter than one step dt = {dt}"
            )));
        }
        if steps > 1e8 {
            return Err(Error::InvalidGrid(format!("{steps} steps is too many")));
        }
        let len = steps as usize + 1;
        Ok(Self {
            t_max: dt * steps,
            dt,
            len,
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn time(&self, k: usize) -> f64 {
        k as f64 * self.dt
    }

    pub fn times(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.len).map(move |k| self.time(k))
    }

    /// Locates `t` as `(k, frac)` with `t = t_k + frac * dt`, `frac` in `[0, 1]`,
    /// clamped to the grid.
    pub fn locate(&self, t: f64) -> (usize, f64) {
        let x = (t / self.dt).clamp(0.0, (self.len - 1) as f64);
        let k = (x.floor() as usize).min(self.len - 2);
        (k, x - k as f64)
    }

    pub fn check_index(&self, k: usize) -> Result<()> {
        if k < self.len {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: k,
                len: self.len,
            })
        }
    }
}

/// Linear interpolation of uniformly sampled data at time `t`.
pub(crate) fn lerp_at<T>(grid: &TimeGrid, samples: &[T], t: f64) -> T
where
    T: Copy + std::ops::Mul<f64, Output = T> + std::ops::Add<Output = T>,
{
    let (k, frac) = grid.locate(t);
    samples[k] * (1.0 - frac) + samples[k + 1] * frac
}

/// Cumulative trapezoid integral of uniformly sampled `values`.
pub fn cumulative_trapezoid(values: &[f64], dt: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(values.len());
    let mut acc = 0.0;
    out.push(0.0);
    for w in values.windows(2) {
        acc += 0.5 * dt * (w[0] + w[1]);
        out.push(acc);
    }
    out.truncate(values.len());
    out
}

/// Centred first difference, second-order one-sided at both ends.
pub fn finite_derivative<T>(samples: &[T], dt: f64) -> Vec<T>
where
    T: Copy
        + std::ops::Sub<Output = T>
        + std::ops::Add<Output = T>
        + std::ops::Mul<f64, Output = T>,
{
    let n = samples.len();
    assert!(n >= 2, "finite_derivative needs at least 2 samples");
    if n == 2 {
        let d = (samples[1] - samples[0]) * (1.0 / dt);
        return vec![d, d];
    }
    let inv = 1.0 / (2.0 * dt);
    let mut out = Vec::with_capacity(n);
    out.push((samples[1] * 4.0 - samples[0] * 3.0 - samples[2]) * inv);
    for k in 1..n - 1 {
        out.push((samples[k + 1] - samples[k - 1]) * inv);
    }
    out.push((samples[n - 1] * 3.0 - samples[n - 2] * 4.0 + samples[n - 3]) * inv);
    out
}
