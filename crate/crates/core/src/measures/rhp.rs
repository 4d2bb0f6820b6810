use super::choi::{choi_curve, choi_threshold, ChoiReference};
use super::intervals::{integrate_inside, negative_intervals, negative_intervals_flagged};
use super::MeasureValue;
use crate::error::Result;
use crate::grid::finite_derivative;
use crate::quantum::concurrence_x;
use crate::trace::{DecoherenceTrace, ModelKind};

/// `I^(E) = 2 int_{dC/dt > 0} dC/dt`, evaluated as `2 sum [C(end) - C(start)]`.
pub fn rhp_entanglement_measure<T: DecoherenceTrace + ?Sized>(trace: &T) -> Result<MeasureValue> {
    let grid = trace.grid();
    let c: Vec<f64> = (0..grid.len())
        .map(|k| trace.joint_state(k).map(|s| concurrence_x(&s)))
        .collect::<Result<_>>()?;
    let slope: Vec<f64> = finite_derivative(&c, grid.dt()).iter().map(|v| -v).collect();
    let intervals = negative_intervals(&slope, grid)?;
    let value = 2.0
        * intervals
            .iter()
            .map(|&(s, e)| trace.concurrence_at(e) - trace.concurrence_at(s))
            .sum::<f64>();
    Ok(MeasureValue {
        value: value.max(0.0),
        divergent: false,
        intervals,
    })
}

/// The rate form of `I^(E)`: `-int_{gamma<0} gamma |G|` or
/// `-4 int_{gamma_p<0} gamma_p exp(Gamma_p)`, by the trapezoid rule.
pub fn entanglement_rate_integral<T: DecoherenceTrace + ?Sized>(trace: &T) -> Result<f64> {
    let grid = trace.grid();
    let flags = trace.divergent();
    let intervals = negative_intervals_flagged(trace.rate(), flags, grid)?;
    let weight = match trace.kind() {
        ModelKind::JaynesCummings => 1.0,
        ModelKind::Dephasing => 4.0,
    };
    let integrand: Vec<f64> = (0..grid.len())
        .map(|k| -weight * trace.rate()[k] * trace.coherence_factor(k).norm())
        .collect();
    Ok(intervals
        .iter()
        .map(|&(s, e)| integrate_inside(grid, &integrand, flags, s, e))
        .sum())
}

/// `I = int g(t) dt` with intervals from the Choi witness `g > 0`.
///
/// On each interval `int g = Lambda(start) - Lambda(end)` for the model's
/// exponent `Lambda`. An endpoint within one step of a divergent sample takes
/// the model's cap for `Lambda`, and the result is flagged as a lower bound.
pub fn rhp_divisibility_measure<T: DecoherenceTrace + ?Sized>(
    trace: &T,
    eps_schedule: &[f64],
) -> Result<MeasureValue> {
    let grid = trace.grid();
    let curve = choi_curve(trace, eps_schedule, ChoiReference::Standard)?;
    let flags: Vec<bool> = curve.iter().map(Option::is_none).collect();
    let signal: Vec<f64> = curve
        .iter()
        .enumerate()
        .map(|(k, g)| match g {
            Some(g) if *g > choi_threshold(&trace.generator(k)) => -g,
            _ => 0.0,
        })
        .collect();
    let intervals = negative_intervals_flagged(&signal, &flags, grid)?;
    let dt = grid.dt();
    let near_flag = |t: f64| {
        let lo = ((t - dt) / dt).floor().max(0.0) as usize;
        let hi = (((t + dt) / dt).ceil() as usize).min(grid.len() - 1);
        (lo..=hi).any(|k| trace.divergent()[k] && (grid.time(k) - t).abs() <= dt * (1.0 + 1e-9))
    };
    let mut divergent = false;
    let mut value = 0.0;
    for &(s, e) in intervals.iter() {
        let mut exponent = |t: f64| match trace.divergence_cap() {
            Some(cap) if near_flag(t) => {
                divergent = true;
                cap
            }
            _ => trace.divisibility_exponent_at(t),
        };
        let start = exponent(s);
        let end = exponent(e);
        value += start - end;
        let (ks, ke) = ((s / dt).ceil() as usize, (e / dt).floor() as usize);
        if (ks..=ke.min(grid.len() - 1)).any(|k| trace.divergent()[k]) {
            divergent = true;
        }
    }
    Ok(MeasureValue {
        value: value.max(0.0),
        divergent,
        intervals,
    })
}
