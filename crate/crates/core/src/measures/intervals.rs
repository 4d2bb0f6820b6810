use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::TimeGrid;

/// Sorted, disjoint `(start, end)` pairs inside `[0, t_max]`.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct IntervalSet {
    intervals: Vec<(f64, f64)>,
}

impl IntervalSet {
    pub fn new(intervals: Vec<(f64, f64)>, t_max: f64) -> Result<Self> {
        let mut prev_end = 0.0;
        for (k, &(s, e)) in intervals.iter().enumerate() {
            let ok = s.is_finite()
                && e.is_finite()
                && s < e
                && s >= 0.0
                && e <= t_max
                && (k == 0 || s >= prev_end);
            if !ok {
                return Err(Error::InvalidGrid(format!(
                    "interval ({s}, {e}) is not sorted, disjoint and inside [0, {t_max}]"
                )));
            }
            prev_end = e;
        }
        Ok(Self { intervals })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn as_slice(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(f64, f64)> {
        self.intervals.iter()
    }

    pub fn total_length(&self) -> f64 {
        self.intervals.iter().map(|(s, e)| e - s).sum()
    }

    /// Largest endpoint discrepancy between matched intervals, `None` when
    /// the sets hold different numbers of intervals.
    pub fn distance(&self, other: &Self) -> Option<f64> {
        if self.len() != other.len() {
            return None;
        }
        Some(
            self.intervals
                .iter()
                .zip(&other.intervals)
                .map(|(a, b)| (a.0 - b.0).abs().max((a.1 - b.1).abs()))
                .fold(0.0, f64::max),
        )
    }

    /// Whether every endpoint lies within `tol` of its counterpart.
    pub fn matches(&self, other: &Self, tol: f64) -> bool {
        self.distance(other).is_some_and(|d| d <= tol)
    }
}

/// Maximal intervals on which `rate < 0`.
pub fn negative_intervals(rate: &[f64], grid: &TimeGrid) -> Result<IntervalSet> {
    negative_intervals_flagged(rate, &vec![false; rate.len()], grid)
}

/// As [`negative_intervals`], with some samples flagged as singular.
///
/// A run of flagged (or non-finite) samples carries the sign of its finite
/// neighbours; where those disagree the crossing is placed by linear
/// interpolation of `1 / rate`, which is exact for a simple pole. Crossings
/// between adjacent finite samples use linear interpolation of the rate.
/// Intervals shorter than one step are discarded.
pub fn negative_intervals_flagged(
    rate: &[f64],
    flags: &[bool],
    grid: &TimeGrid,
) -> Result<IntervalSet> {
    assert_eq!(rate.len(), grid.len(), "rate samples do not match the grid");
    assert_eq!(flags.len(), grid.len(), "flags do not match the grid");
    let known: Vec<usize> = (0..rate.len())
        .filter(|&k| !flags[k] && rate[k].is_finite())
        .collect();
    if known.is_empty() {
        return Err(Error::Undeterminable);
    }
    let dt = grid.dt();
    let negative = |k: usize| rate[k] < 0.0;

    let mut out = Vec::new();
    let mut open = if negative(known[0]) { Some(0.0) } else { None };
    for w in known.windows(2) {
        let (i, j) = (w[0], w[1]);
        if negative(i) == negative(j) {
            continue;
        }
        let (ti, tj) = (grid.time(i), grid.time(j));
        let (vi, vj) = (rate[i], rate[j]);
        let t = if j == i + 1 {
            ti + dt * vi / (vi - vj)
        } else {
            let (ri, rj) = (1.0 / vi, 1.0 / vj);
            let t = ti + (tj - ti) * ri / (ri - rj);
            if t.is_finite() {
                t
            } else {
                0.5 * (ti + tj)
            }
        };
        let t = t.clamp(ti, tj);
        match open.take() {
            Some(s) => out.push((s, t)),
            None => open = Some(t),
        }
    }
    if let Some(s) = open {
        out.push((s, grid.t_max()));
    }
    out.retain(|(s, e)| e - s >= dt);
    IntervalSet::new(out, grid.t_max())
}

/// Trapezoid integral over `[s, e]` of uniformly sampled `values`, using
/// only unflagged samples inside the interval. The end pieces are
/// extrapolated linearly from the two nearest interior samples, so a rate
/// that jumps at a flagged endpoint is integrated from its one-sided limit.
pub(crate) fn integrate_inside(
    grid: &TimeGrid,
    values: &[f64],
    flags: &[bool],
    s: f64,
    e: f64,
) -> f64 {
    let dt = grid.dt();
    let first = (s / dt).ceil() as usize;
    let last = ((e / dt).floor() as usize).min(grid.len() - 1);
    let inside: Vec<usize> = (first..=last.max(first))
        .filter(|&k| k <= last && !flags[k] && values[k].is_finite())
        .collect();
    let line = |i: usize, j: usize, t: f64| {
        let (ti, tj) = (grid.time(i), grid.time(j));
        values[i] + (values[j] - values[i]) * (t - ti) / (tj - ti)
    };
    match inside.as_slice() {
        [] => 0.0,
        [k] => {
            let at = |t: f64| crate::grid::lerp_at(grid, values, t);
            let tk = grid.time(*k);
            0.5 * (at(s) + values[*k]) * (tk - s) + 0.5 * (values[*k] + at(e)) * (e - tk)
        }
        _ => {
            let n = inside.len();
            let (a, b, y, z) = (&inside[0], &inside[1], &inside[n - 2], &inside[n - 1]);
            let head = 0.5 * (line(*a, *b, s) + values[*a]) * (grid.time(*a) - s);
            let tail = 0.5 * (values[*z] + line(*y, *z, e)) * (e - grid.time(*z));
            let body: f64 = inside
                .windows(2)
                .map(|w| 0.5 * (values[w[0]] + values[w[1]]) * (grid.time(w[1]) - grid.time(w[0])))
                .sum();
            head + body + tail
        }
    }
}
