use serde::Serialize;

use super::blp::{blp_measure, BlpMode};
use super::choi::{ChoiReference, DEFAULT_EPS_SCHEDULE};
use super::intervals::negative_intervals_flagged;
use super::rhp::{rhp_divisibility_measure, rhp_entanglement_measure};
use super::sweep::{pair_sweep, SweepSummary};
use super::{IntervalSet, MeasureValue};
use crate::error::Result;
use crate::quantum::PairParams;
use crate::trace::{DecoherenceTrace, ModelKind};

/// A measure counts as positive above this value (or when divergent).
pub const POSITIVITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Equivalence {
    pub verdict: bool,
    pub sets_match: bool,
    pub positivity_agrees: bool,
    /// Largest endpoint discrepancy among the three pairings; `None` when
    /// the sets hold different numbers of intervals.
    pub distance: Option<f64>,
    pub tolerance: f64,
}

/// Compares the interval sets and positivity of `N`, `I^(E)` and `I`.
/// Sets match when every endpoint agrees within `2 dt`.
pub fn equivalence_report(values: [&MeasureValue; 3], dt: f64) -> Equivalence {
    let tolerance = 2.0 * dt;
    let mut distance = Some(0.0f64);
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        distance = match (distance, values[i].intervals.distance(&values[j].intervals)) {
            (Some(a), Some(b)) => Some(a.max(b)),
            _ => None,
        };
    }
    let sets_match = distance.is_some_and(|d| d <= tolerance);
    let positive: Vec<bool> = values.iter().map(|v| v.is_positive(POSITIVITY_TOL)).collect();
    let positivity_agrees = positive.iter().all(|p| *p == positive[0]);
    Equivalence {
        verdict: sets_match && positivity_agrees,
        sets_match,
        positivity_agrees,
        distance,
        tolerance,
    }
}

/// `N` for `a = 0, |b| = 1` in both modes against `I^(E)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HalfRelation {
    pub blp_direct: f64,
    pub blp_formula: f64,
    pub entanglement: f64,
    /// `N_direct - I^(E) / 2`.
    pub residual: f64,
    /// `N_formula - N_direct`.
    pub formula_discrepancy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StateConventions {
    pub choi_reference: &'static str,
    pub ancilla_state: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasureReport {
    pub model: ModelKind,
    pub t_max: f64,
    pub dt: f64,
    pub pair: PairParams,
    pub blp: MeasureValue,
    pub blp_formula: MeasureValue,
    pub entanglement: MeasureValue,
    pub divisibility: MeasureValue,
    /// Intervals on which the decay rate itself is negative.
    pub rate_intervals: IntervalSet,
    /// Grid times at which the rate is flagged divergent.
    pub divergent_times: Vec<f64>,
    pub equivalence: Equivalence,
    pub half_relation: HalfRelation,
    pub conventions: StateConventions,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSummary>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisOptions {
    /// Pair used for `N`; the canonical `a = 0, b = 1` when absent.
    pub pair: Option<PairParams>,
    /// `(n_pairs, seed)` for a pair sweep.
    pub sweep: Option<(usize, u64)>,
    pub eps_schedule: Vec<f64>,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            pair: None,
            sweep: None,
            eps_schedule: DEFAULT_EPS_SCHEDULE.to_vec(),
        }
    }
}

/// Computes all three measures, the equivalence verdict and the
/// half-relation check on one trace.
pub fn analyze<T: DecoherenceTrace + ?Sized>(
    trace: &T,
    options: &AnalysisOptions,
) -> Result<MeasureReport> {
    let grid = trace.grid();
    let pair = options.pair.unwrap_or_else(PairParams::canonical);
    let blp = blp_measure(trace, &pair, BlpMode::Direct)?;
    let blp_formula = blp_measure(trace, &pair, BlpMode::Formula)?;
    let entanglement = rhp_entanglement_measure(trace)?;
    let divisibility = rhp_divisibility_measure(trace, &options.eps_schedule)?;
    let rate_intervals = negative_intervals_flagged(trace.rate(), trace.divergent(), grid)?;
    let equivalence = equivalence_report([&blp, &entanglement, &divisibility], grid.dt());

    let canonical = PairParams::canonical();
    let (canon_direct, canon_formula) = if pair == canonical {
        (blp.value, blp_formula.value)
    } else {
        (
            blp_measure(trace, &canonical, BlpMode::Direct)?.value,
            blp_measure(trace, &canonical, BlpMode::Formula)?.value,
        )
    };
    let half_relation = HalfRelation {
        blp_direct: canon_direct,
        blp_formula: canon_formula,
        entanglement: entanglement.value,
        residual: canon_direct - 0.5 * entanglement.value,
        formula_discrepancy: canon_formula - canon_direct,
    };

    let sweep = options
        .sweep
        .map(|(n, seed)| pair_sweep(trace, n, seed))
        .transpose()?;
    let divergent_times = (0..grid.len())
        .filter(|&k| trace.divergent()[k])
        .map(|k| grid.time(k))
        .collect();
    Ok(MeasureReport {
        model: trace.kind(),
        t_max: grid.t_max(),
        dt: grid.dt(),
        pair,
        blp,
        blp_formula,
        entanglement,
        divisibility,
        rate_intervals,
        divergent_times,
        equivalence,
        half_relation,
        conventions: StateConventions {
            choi_reference: ChoiReference::Standard.label(),
            ancilla_state: ChoiReference::Ancilla.label(),
        },
        sweep,
    })
}
