//! Non-Markovianity measures, their interval sets, and the equivalence verdict.

mod blp;
mod choi;
mod intervals;
mod report;
mod rhp;
mod sweep;

use serde::Serialize;

pub use blp::{blp_measure, trace_distance_curve, BlpMode};
pub use choi::{
    choi_curve, choi_g, choi_g_at, choi_threshold, ChoiReference, CHOI_THRESHOLD, DEFAULT_EPS_SCHEDULE,
};
pub use intervals::{negative_intervals, negative_intervals_flagged, IntervalSet};
pub use report::{
    analyze, equivalence_report, AnalysisOptions, Equivalence, HalfRelation, MeasureReport,
    POSITIVITY_TOL,
};
pub use rhp::{entanglement_rate_integral, rhp_divisibility_measure, rhp_entanglement_measure};
pub use sweep::{pair_sweep, SweepSummary};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasureValue {
    pub value: f64,
    /// The value is a lower bound: a divergent rate sits on an interval edge.
    pub divergent: bool,
    pub intervals: IntervalSet,
}

impl MeasureValue {
    pub fn is_positive(&self, tol: f64) -> bool {
        self.divergent || self.value > tol
    }
}
