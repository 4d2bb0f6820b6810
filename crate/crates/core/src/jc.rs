//! Damped Jaynes-Cummings dynamics: the decoherence function `G(t)`, its
//! rates, the qubit+ancilla state, and the time-local master equation.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::generator::{rk4_step, Generator};
use crate::grid::{finite_derivative, TimeGrid};
use crate::quantum::{DensityMatrix2, XState4};
use crate::spectral::CorrelationKernel;
use crate::trace::{hermite_at, DecoherenceTrace, ModelKind};

/// `|G|` below which a grid point is treated as a zero of `G`.
pub const DEFAULT_G_FLOOR: f64 = 1e-8;

/// Magnitude stored for a rate that is non-finite at a zero of `G`.
pub const RATE_CAP: f64 = 1e12;

/// Largest `rate * dt` a master-equation step may take before the rates are
/// considered unresolved and propagation stops.
pub const STEP_RESOLUTION_LIMIT: f64 = 0.05;

#[derive(Debug, Clone, Serialize)]
pub struct GTrace {
    grid: TimeGrid,
    g_floor: f64,
    g: Vec<Complex64>,
    g_dot: Vec<Complex64>,
    gamma: Vec<f64>,
    big_gamma: Vec<f64>,
    shift: Vec<f64>,
    divergent: Vec<bool>,
}

impl GTrace {
    /// Derives every rate function from samples of `G` on `grid`.
    pub fn from_samples(grid: TimeGrid, g: Vec<Complex64>, g_floor: f64) -> Result<Self> {
        if g.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "{} samples for a grid of {} points",
                g.len(),
                grid.len()
            )));
        }
        if !(g_floor > 0.0 && g_floor < 1.0) {
            return Err(Error::Configuration(format!(
                "g_floor must lie in (0, 1), got {g_floor}"
            )));
        }
        let g_dot = finite_derivative(&g, grid.dt());
        let divergent = zero_flags(&g, g_floor);
        let n = g.len();
        let mut gamma = Vec::with_capacity(n);
        let mut shift = Vec::with_capacity(n);
        let mut big_gamma = Vec::with_capacity(n);
        for k in 0..n {
            let ratio = g_dot[k] / g[k];
            gamma.push(cap_rate(-2.0 * ratio.re));
            shift.push(cap_rate(-2.0 * ratio.im));
            big_gamma.push(-2.0 * g[k].norm().max(g_floor).ln());
        }
        // G(0) = 1 exactly, so Gamma(0) = 0.
        big_gamma[0] = 0.0;
        Ok(Self {
            grid,
            g_floor,
            g,
            g_dot,
            gamma,
            big_gamma,
            shift,
            divergent,
        })
    }

    pub fn g(&self) -> &[Complex64] {
        &self.g
    }

    pub fn g_dot(&self) -> &[Complex64] {
        &self.g_dot
    }

    /// `gamma(t) = -2 Re(G'/G)`.
    pub fn gamma(&self) -> &[f64] {
        &self.gamma
    }

    /// `Gamma(t) = int_0^t gamma = -2 ln |G(t)|`, capped at `-2 ln g_floor`.
    pub fn big_gamma(&self) -> &[f64] {
        &self.big_gamma
    }

    /// `S(t) = -2 Im(G'/G)`.
    pub fn shift(&self) -> &[f64] {
        &self.shift
    }

    pub fn g_floor(&self) -> f64 {
        self.g_floor
    }

    pub fn g_at(&self, t: f64) -> Complex64 {
        hermite_at(&self.grid, &self.g, &self.g_dot, t)
    }

    pub fn has_divergence(&self) -> bool {
        self.divergent.iter().any(|d| *d)
    }
}

fn cap_rate(x: f64) -> f64 {
    if x.is_nan() {
        RATE_CAP
    } else {
        x.clamp(-RATE_CAP, RATE_CAP)
    }
}

/// Flags `k` when `|G_k| < floor` or when the straight segment joining `G_k`
/// to a neighbour passes within `floor` of the origin; the latter catches
/// zeros of `G` that fall between grid points.
fn zero_flags(g: &[Complex64], floor: f64) -> Vec<bool> {
    let mut flags: Vec<bool> = g.iter().map(|z| !(z.norm() >= floor)).collect();
    for k in 0..g.len().saturating_sub(1) {
        let (a, b) = (g[k], g[k + 1]);
        let d = b - a;
        let len2 = d.norm_sqr();
        let s = if len2 > 0.0 {
            (-(a.conj() * d).re / len2).clamp(0.0, 1.0)
        } else {
            0.0
        };
        if (a + d * s).norm() < floor {
            flags[k] = true;
            flags[k + 1] = true;
        }
    }
    flags
}

/// Solves `G'(t) = -int_0^t f(t - t1) G(t1) dt1`, `G(0) = 1`.
///
/// The memory integral uses product-trapezoidal weights on the grid and the
/// outer equation one Euler-predictor / trapezoid-corrector sweep per step;
/// the global error is second order in `dt`. Cost is `O(N^2)`.
pub fn solve_g(kernel: &CorrelationKernel, grid: &TimeGrid) -> Result<GTrace> {
    let g = solve_g_samples(kernel, grid)?;
    GTrace::from_samples(*grid, g, DEFAULT_G_FLOOR)
}

pub fn solve_g_samples(kernel: &CorrelationKernel, grid: &TimeGrid) -> Result<Vec<Complex64>> {
    let n = grid.len();
    let dt = grid.dt();
    let f: Vec<Complex64> = (0..n)
        .map(|k| {
            let tau = grid.time(k);
            let v = kernel.eval(tau);
            if v.re.is_finite() && v.im.is_finite() {
                Ok(v)
            } else {
                Err(Error::Propagation { tau })
            }
        })
        .collect::<Result<_>>()?;

    let mut g = vec![Complex64::new(0.0, 0.0); n];
    g[0] = Complex64::new(1.0, 0.0);
    // force[k] = -int_0^{t_k} f(t_k - s) G(s) ds
    let mut force = vec![Complex64::new(0.0, 0.0); n];
    for m in 1..n {
        // Trapezoid weights for every node but the new endpoint.
        let mut history = f[m] * g[0] * 0.5;
        for j in 1..m {
            history += f[m - j] * g[j];
        }
        history *= dt;
        let predicted = g[m - 1] + force[m - 1] * dt;
        let force_pred = -(history + f[0] * predicted * (0.5 * dt));
        g[m] = g[m - 1] + (force[m - 1] + force_pred) * (0.5 * dt);
        force[m] = -(history + f[0] * g[m] * (0.5 * dt));
        if !(g[m].re.is_finite() && g[m].im.is_finite()) {
            return Err(Error::Propagation { tau: grid.time(m) });
        }
    }
    Ok(g)
}

/// Recomputes `gamma`, `Gamma`, `S` and the divergence flags for another floor.
pub fn derive_rates(trace: &GTrace, g_floor: f64) -> Result<GTrace> {
    GTrace::from_samples(trace.grid, trace.g.clone(), g_floor)
}

/// System+ancilla state `c1 = G/sqrt 2`, `c2 = 1/sqrt 2`.
pub fn jc_joint_state(trace: &GTrace, k: usize) -> Result<XState4> {
    trace.grid.check_index(k)?;
    let g = trace.g[k];
    let p = g.norm_sqr();
    Ok(XState4 {
        p00: 0.5 * (1.0 - p),
        p10: 0.5 * p,
        p01: 0.5,
        p11: 0.0,
        kappa: g * 0.5,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum TruncationReason {
    /// A step endpoint is flagged as a zero of `G`.
    DivergentRate,
    /// `rate * dt` exceeded [`STEP_RESOLUTION_LIMIT`], as happens on the
    /// approach to a zero of `G`.
    UnresolvedRate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Truncation {
    /// First grid index that was not reached.
    pub index: usize,
    pub time: f64,
    pub reason: TruncationReason,
}

/// States on the grid from `t = 0`, possibly stopped short.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub states: Vec<DensityMatrix2>,
    pub truncated: Option<Truncation>,
}

/// RK4 integration of the time-local master equation with rates taken from
/// `trace` (linear interpolation at half steps).
pub fn jc_propagate_master(trace: &GTrace, rho0: &DensityMatrix2) -> Trajectory {
    propagate(trace, rho0, true)
}

pub(crate) fn propagate<T: DecoherenceTrace + ?Sized>(
    trace: &T,
    rho0: &DensityMatrix2,
    halt_on_divergence: bool,
) -> Trajectory {
    let grid = trace.grid();
    let dt = grid.dt();
    let flags = trace.divergent();
    let mut states = Vec::with_capacity(grid.len());
    states.push(*rho0);
    let mut rho = *rho0.matrix();
    for k in 0..grid.len() - 1 {
        let start = trace.generator(k);
        let end = trace.generator(k + 1);
        if halt_on_divergence {
            let reason = if flags[k] || flags[k + 1] {
                Some(TruncationReason::DivergentRate)
            } else if start.rate_scale().max(end.rate_scale()) * dt > STEP_RESOLUTION_LIMIT {
                Some(TruncationReason::UnresolvedRate)
            } else {
                None
            };
            if let Some(reason) = reason {
                return Trajectory {
                    states,
                    truncated: Some(Truncation {
                        index: k + 1,
                        time: grid.time(k + 1),
                        reason,
                    }),
                };
            }
        }
        let mid = start.blend(&end, 0.5);
        rho = rk4_step(&rho, &start, &mid, &end, dt);
        let p = rho[0][0].re;
        let q = rho[1][1].re;
        // Keep the stored state exactly Hermitian; the trace is carried as is.
        let coherence = 0.5 * (rho[0][1] + rho[1][0].conj());
        rho = [
            [Complex64::new(p, 0.0), coherence],
            [coherence.conj(), Complex64::new(q, 0.0)],
        ];
        states.push(DensityMatrix2::from_matrix_unchecked(rho));
    }
    Trajectory {
        states,
        truncated: None,
    }
}

impl DecoherenceTrace for GTrace {
    fn kind(&self) -> ModelKind {
        ModelKind::JaynesCummings
    }

    fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    fn rate(&self) -> &[f64] {
        &self.gamma
    }

    fn divergent(&self) -> &[bool] {
        &self.divergent
    }

    fn coherence_factor(&self, k: usize) -> Complex64 {
        self.g[k]
    }

    fn coherence_factor_at(&self, t: f64) -> Complex64 {
        self.g_at(t)
    }

    fn population_factor(&self, k: usize) -> f64 {
        self.g[k].norm_sqr()
    }

    fn population_factor_at(&self, t: f64) -> f64 {
        self.g_at(t).norm_sqr()
    }

    fn divisibility_exponent_at(&self, t: f64) -> f64 {
        -2.0 * self.g_at(t).norm().max(self.g_floor).ln()
    }

    fn divergence_cap(&self) -> Option<f64> {
        Some(-2.0 * self.g_floor.ln())
    }

    fn joint_state(&self, k: usize) -> Result<XState4> {
        jc_joint_state(self, k)
    }

    fn generator(&self, k: usize) -> Generator {
        Generator::JaynesCummings {
            gamma: self.gamma[k],
            shift: self.shift[k],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::concurrence_x;

    fn grid(t_max: f64, dt: f64) -> TimeGrid {
        TimeGrid::new(t_max, dt).unwrap()
    }

    #[test]
    fn zero_kernel_keeps_g_at_one() {
        let tr = solve_g(&CorrelationKernel::zero(), &grid(2.0, 0.01)).unwrap();
        assert!(tr.g().iter().all(|z| *z == Complex64::new(1.0, 0.0)));
        assert!(tr.gamma().iter().all(|v| *v == 0.0));
        assert!(!tr.has_divergence());
    }

    #[test]
    fn non_finite_kernel_is_reported() {
        let k = CorrelationKernel::from_fn(|t| {
            if t > 0.5 {
                Complex64::new(f64::NAN, 0.0)
            } else {
                Complex64::new(1.0, 0.0)
            }
        });
        match solve_g(&k, &grid(1.0, 0.1)) {
            Err(Error::Propagation { tau }) => assert!((tau - 0.6).abs() < 1e-12),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn exponential_rates() {
        let gr = grid(5.0, 1e-3);
        let g: Vec<Complex64> = gr.times().map(|t| Complex64::new((-0.5 * t).exp(), 0.0)).collect();
        let tr = GTrace::from_samples(gr, g, DEFAULT_G_FLOOR).unwrap();
        for k in 0..gr.len() {
            assert!((tr.gamma()[k] - 1.0).abs() < 2e-6, "gamma[{k}]");
            assert!((tr.big_gamma()[k] - gr.time(k)).abs() < 2e-6);
            assert!(tr.shift()[k].abs() < 2e-6);
        }
    }

    #[test]
    fn zero_crossing_between_samples_is_flagged() {
        let gr = grid(2.0, 0.01);
        let g: Vec<Complex64> = gr.times().map(|t| Complex64::new(1.0 - t / 1.005, 0.0)).collect();
        let tr = GTrace::from_samples(gr, g, 1e-12).unwrap();
        let flagged: Vec<usize> = (0..gr.len()).filter(|k| tr.divergent()[*k]).collect();
        assert_eq!(flagged, vec![100, 101]);
    }

    #[test]
    fn joint_state_examples() {
        let gr = grid(1.0, 0.5);
        let g = vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new((-0.5f64).exp(), 0.0),
        ];
        let tr = GTrace::from_samples(gr, g, DEFAULT_G_FLOOR).unwrap();
        let s0 = jc_joint_state(&tr, 0).unwrap();
        assert!((concurrence_x(&s0) - 1.0).abs() < 1e-15);
        assert!((s0.p10 - 0.5).abs() < 1e-15 && s0.p00.abs() < 1e-15);
        let s1 = jc_joint_state(&tr, 1).unwrap();
        assert_eq!(concurrence_x(&s1), 0.0);
        assert_eq!(s1.p00, 0.5);
        let s2 = jc_joint_state(&tr, 2).unwrap();
        assert!((concurrence_x(&s2) - 0.606_530_659_712_633_4).abs() < 1e-12);
        assert!(matches!(
            jc_joint_state(&tr, 3),
            Err(Error::IndexOutOfRange { index: 3, len: 3 })
        ));
    }

    #[test]
    fn ground_state_stationary_and_excited_decays() {
        let gr = grid(3.0, 1e-3);
        let g: Vec<Complex64> = gr.times().map(|t| Complex64::new((-0.5 * t).exp(), 0.0)).collect();
        let tr = GTrace::from_samples(gr, g, DEFAULT_G_FLOOR).unwrap();
        let ground = jc_propagate_master(&tr, &DensityMatrix2::ground());
        assert!(ground.truncated.is_none());
        assert!(ground
            .states
            .iter()
            .all(|s| s.excited_population() == 0.0 && s.coherence().norm() == 0.0));
        let excited = jc_propagate_master(&tr, &DensityMatrix2::excited());
        for (k, s) in excited.states.iter().enumerate() {
            assert!((s.excited_population() - (-gr.time(k)).exp()).abs() < 1e-6);
            assert!((s.trace() - 1.0).abs() < 1e-12);
        }
    }
}
