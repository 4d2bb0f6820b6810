//! Common view of a sampled open-system evolution, shared by both models.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::generator::Generator;
use crate::grid::TimeGrid;
use crate::quantum::XState4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModelKind {
    #[serde(rename = "jc")]
    JaynesCummings,
    #[serde(rename = "dephasing")]
    Dephasing,
}

impl ModelKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::JaynesCummings => "jc",
            Self::Dephasing => "dephasing",
        }
    }
}

/// Element evolution of a qubit channel with `rho_11(t) = P(t) rho_11(0)` (plus
/// a ground-state feed) and `rho_10(t) = K(t) rho_10(0)`.
///
/// `P` is the population factor and `K` the coherence factor: `(|G|^2, G)`
/// for the damped Jaynes-Cummings model and `(1, exp(Gamma_p))` for pure
/// dephasing.
pub trait DecoherenceTrace: Sync {
    fn kind(&self) -> ModelKind;

    fn grid(&self) -> &TimeGrid;

    /// Decay rate whose sign marks non-Markovian intervals: `gamma` or `gamma_p`.
    fn rate(&self) -> &[f64];

    /// Grid indices at which the rate is singular.
    fn divergent(&self) -> &[bool];

    fn coherence_factor(&self, k: usize) -> Complex64;

    /// Coherence factor at an arbitrary time, by cubic Hermite interpolation.
    fn coherence_factor_at(&self, t: f64) -> Complex64;

    fn population_factor(&self, k: usize) -> f64;

    fn population_factor_at(&self, t: f64) -> f64;

    /// Exponent `Lambda(t)` with `dLambda/dt = g(t)` wherever the rate is
    /// negative: `Gamma` for Jaynes-Cummings, `-Gamma_p` for dephasing.
    fn divisibility_exponent_at(&self, t: f64) -> f64;

    /// Finite stand-in for the exponent at a divergent point, if the model
    /// has any.
    fn divergence_cap(&self) -> Option<f64>;

    /// System+ancilla state grown from the maximally entangled
    /// `(|10> + |01>) / sqrt 2`.
    fn joint_state(&self, k: usize) -> Result<XState4>;

    /// Concurrence of [`Self::joint_state`] at an arbitrary time.
    fn concurrence_at(&self, t: f64) -> f64 {
        self.coherence_factor_at(t).norm()
    }

    /// Generator of the time-local master equation at grid index `k`.
    fn generator(&self, k: usize) -> Generator;
}

/// Cubic Hermite interpolation of uniformly sampled values with known
/// derivatives.
pub(crate) fn hermite_at<T>(grid: &TimeGrid, values: &[T], slopes: &[T], t: f64) -> T
where
    T: Copy + std::ops::Mul<f64, Output = T> + std::ops::Add<Output = T>,
{
    let (k, s) = grid.locate(t);
    let dt = grid.dt();
    let s2 = s * s;
    let s3 = s2 * s;
    let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    let h10 = s3 - 2.0 * s2 + s;
    let h01 = -2.0 * s3 + 3.0 * s2;
    let h11 = s3 - s2;
    values[k] * h00 + slopes[k] * (h10 * dt) + values[k + 1] * h01 + slopes[k + 1] * (h11 * dt)
}
