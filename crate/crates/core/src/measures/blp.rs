use serde::{Deserialize, Serialize};

use super::intervals::{integrate_inside, negative_intervals, negative_intervals_flagged};
use super::MeasureValue;
use crate::error::{Error, Result};
use crate::grid::finite_derivative;
use crate::quantum::PairParams;
use crate::trace::{DecoherenceTrace, ModelKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlpMode {
    /// Differentiate the exactly known trace distance.
    #[default]
    Direct,
    /// Integrate the printed rate form `-gamma F` over `gamma < 0`.
    Formula,
}

/// `D = sqrt(P^2 a^2 + |K|^2 |b|^2)` from population and coherence factors.
fn distance(population: f64, coherence: f64, pair: &PairParams) -> f64 {
    (population * population * pair.a * pair.a + coherence * coherence * pair.b.norm_sqr()).sqrt()
}

/// Trace distance `D(t)` between the evolved pair on every grid point.
pub fn trace_distance_curve<T: DecoherenceTrace + ?Sized>(trace: &T, pair: &PairParams) -> Vec<f64> {
    (0..trace.grid().len())
        .map(|k| {
            distance(
                trace.population_factor(k),
                trace.coherence_factor(k).norm(),
                pair,
            )
        })
        .collect()
}

fn distance_at<T: DecoherenceTrace + ?Sized>(trace: &T, pair: &PairParams, t: f64) -> f64 {
    distance(
        trace.population_factor_at(t),
        trace.coherence_factor_at(t).norm(),
        pair,
    )
}

/// `F` of the rate form, `sigma = -rate * F`. For Jaynes-Cummings this is
/// `(a^2 e^{-3 Gamma/2} + |b|^2 e^{-Gamma/2}) / sqrt(a^2 e^{-Gamma} + |b|^2)`
/// as printed; for dephasing `2 |b|^2 e^{2 Gamma_p} / D`.
fn rate_weight<T: DecoherenceTrace + ?Sized>(trace: &T, pair: &PairParams, k: usize) -> f64 {
    let (a2, b2) = (pair.a * pair.a, pair.b.norm_sqr());
    let c = trace.coherence_factor(k).norm();
    let (num, den) = match trace.kind() {
        ModelKind::JaynesCummings => (a2 * c * c * c + b2 * c, (a2 * c * c + b2).sqrt()),
        ModelKind::Dephasing => (2.0 * b2 * c * c, (a2 + b2 * c * c).sqrt()),
    };
    if den > 0.0 {
        num / den
    } else {
        0.0
    }
}

/// BLP measure `N` for one initial pair.
pub fn blp_measure<T: DecoherenceTrace + ?Sized>(
    trace: &T,
    pair: &PairParams,
    mode: BlpMode,
) -> Result<MeasureValue> {
    if pair.is_degenerate() {
        return Err(Error::DegeneratePair);
    }
    let grid = trace.grid();
    match mode {
        BlpMode::Direct => {
            let d = trace_distance_curve(trace, pair);
            let slope: Vec<f64> = finite_derivative(&d, grid.dt()).iter().map(|v| -v).collect();
            let intervals = negative_intervals(&slope, grid)?;
            let value = intervals
                .iter()
                .map(|&(s, e)| distance_at(trace, pair, e) - distance_at(trace, pair, s))
                .sum::<f64>()
                .max(0.0);
            Ok(MeasureValue {
                value,
                divergent: false,
                intervals,
            })
        }
        BlpMode::Formula => {
            let flags = trace.divergent();
            let intervals = negative_intervals_flagged(trace.rate(), flags, grid)?;
            let integrand: Vec<f64> = (0..grid.len())
                .map(|k| -trace.rate()[k] * rate_weight(trace, pair, k))
                .collect();
            let value = intervals
                .iter()
                .map(|&(s, e)| integrate_inside(grid, &integrand, flags, s, e))
                .sum();
            Ok(MeasureValue {
                value,
                divergent: false,
                intervals,
            })
        }
    }
}
