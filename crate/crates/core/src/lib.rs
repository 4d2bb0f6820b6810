//! Non-Markovianity of a qubit in damped Jaynes-Cummings and pure-dephasing
//! environments: trace-distance (BLP), entanglement and divisibility (RHP)
//! measures and their non-Markovian intervals.
//!
//! Units: `hbar = k_B = 1`; times and rates share one inverse-time unit fixed
//! by the spectral width (`lambda`) or cutoff (`omega_c`).

pub mod dephasing;
pub mod error;
pub mod generator;
pub mod grid;
pub mod jc;
pub mod measures;
pub mod quadrature;
pub mod quantum;
pub mod spectral;
pub mod trace;

pub use dephasing::{
    dephasing_joint_state, dephasing_propagate_master, dephasing_trace, dephasing_trace_with,
    DephasingTrace,
};
pub use error::{Error, Result};
pub use generator::Generator;
pub use grid::TimeGrid;
pub use jc::{
    derive_rates, jc_joint_state, jc_propagate_master, solve_g, GTrace, Trajectory, Truncation,
    TruncationReason, DEFAULT_G_FLOOR,
};
pub use measures::{
    analyze, blp_measure, choi_g, equivalence_report, negative_intervals, pair_sweep,
    rhp_divisibility_measure, rhp_entanglement_measure, AnalysisOptions, BlpMode, ChoiReference,
    IntervalSet, MeasureReport, MeasureValue, SweepSummary,
};
pub use quantum::{
    bloch_to_density, concurrence_x, pair_to_ab, trace_distance, BlochVector, DensityMatrix2,
    PairParams, XState4,
};
pub use spectral::{kernel_eval, spectral_eval, CorrelationKernel, SpectralDensityModel, SpectralShape};
pub use trace::{DecoherenceTrace, ModelKind};
