//! Pure dephasing: the exponent `Gamma_p(t)` and rate `gamma_p(t)` by
//! frequency quadrature over the spectral density, plus the element
//! evolution, ancilla state and master-equation propagation.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::generator::Generator;
use crate::grid::TimeGrid;
use crate::jc::{propagate, Trajectory};
use crate::quadrature::{integrate_on, Tolerance};
use crate::quantum::{DensityMatrix2, XState4};
use crate::spectral::{ohmic_density, table_interp, SpectralDensityModel, SpectralShape};
use crate::trace::{hermite_at, DecoherenceTrace, ModelKind};

/// Lower edge of the numerically integrated band, in units of the model's
/// frequency scale. Below it the integrand is replaced by its power law.
pub const OMEGA_MIN_FRACTION: f64 = 1e-6;

/// Absolute bound on the discarded high-frequency tail.
pub const TAIL_BOUND: f64 = 1e-12;

#[derive(Debug, Clone, Serialize)]
pub struct DephasingTrace {
    grid: TimeGrid,
    big_gamma_p: Vec<f64>,
    gamma_p: Vec<f64>,
    #[serde(skip)]
    divergent: Vec<bool>,
}

impl DephasingTrace {
    /// Builds a trace from precomputed samples. `Gamma_p(0)` must be zero.
    pub fn from_samples(grid: TimeGrid, big_gamma_p: Vec<f64>, gamma_p: Vec<f64>) -> Result<Self> {
        if big_gamma_p.len() != grid.len() || gamma_p.len() != grid.len() {
            return Err(Error::InvalidGrid("sample count does not match the grid".into()));
        }
        if big_gamma_p[0] != 0.0 {
            return Err(Error::InvalidState("Gamma_p(0) must be 0".into()));
        }
        if big_gamma_p.iter().chain(&gamma_p).any(|v| !v.is_finite()) {
            return Err(Error::InvalidState("non-finite dephasing sample".into()));
        }
        let divergent = vec![false; grid.len()];
        Ok(Self {
            grid,
            big_gamma_p,
            gamma_p,
            divergent,
        })
    }

    /// `Gamma_p(t) <= 0`.
    pub fn big_gamma_p(&self) -> &[f64] {
        &self.big_gamma_p
    }

    /// `gamma_p(t) = -dGamma_p/dt / 2`.
    pub fn gamma_p(&self) -> &[f64] {
        &self.gamma_p
    }

    pub fn big_gamma_p_at(&self, t: f64) -> f64 {
        let slopes: Vec<f64> = self.gamma_p.iter().map(|g| -2.0 * g).collect();
        hermite_at(&self.grid, &self.big_gamma_p, &slopes, t)
    }
}

/// Frequency integrand data shared by every time point.
struct Bath {
    density: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    temperature: f64,
    /// Below this the integrand is a pure power law `omega^power`.
    omega_lo: f64,
    omega_max: f64,
    power: f64,
    /// Fixed breakpoints: kinks of a tabulated density.
    nodes: Vec<f64>,
    scale: f64,
}

/// `coth(omega / 2T)`, equal to 1 at zero temperature.
fn thermal_factor(omega: f64, temperature: f64) -> f64 {
    if temperature == 0.0 {
        return 1.0;
    }
    let x = omega / (2.0 * temperature);
    if x < 1e-6 {
        1.0 / x + x / 3.0
    } else if x > 20.0 {
        1.0
    } else {
        1.0 / x.tanh()
    }
}

impl Bath {
    fn new(model: &SpectralDensityModel) -> Result<Self> {
        model.validate()?;
        let temperature = model.temperature;
        let (density, scale, omega_max, low_power, nodes): (
            Box<dyn Fn(f64) -> f64 + Send + Sync>,
            f64,
            f64,
            Option<f64>,
            Vec<f64>,
        ) = match &model.shape {
            SpectralShape::Ohmic { eta, omega_c, s } => {
                let (eta, wc, s) = (*eta, *omega_c, *s);
                let amplitude = eta * wc.powf(1.0 - s);
                let coth_at = |w: f64| thermal_factor(w, temperature);
                let mut k = 1.0;
                let omega_max = loop {
                    let w = k * wc;
                    let decay = 2.0 * wc * coth_at(w) * (-w / wc).exp();
                    let gamma_tail = decay * 2.0 * amplitude * w.powf(s - 2.0);
                    let rate_tail = decay * amplitude * w.powf(s - 1.0);
                    if w >= 2.0 * (s - 1.0).max(0.0) * wc
                        && gamma_tail < TAIL_BOUND
                        && rate_tail < TAIL_BOUND
                    {
                        break w;
                    }
                    k += 1.0;
                };
                (
                    Box::new(move |w| ohmic_density(eta, wc, s, w)),
                    wc,
                    omega_max,
                    Some(s),
                    Vec::new(),
                )
            }
            SpectralShape::Tabulated {
                omega,
                j,
                omega_max,
                ..
            } => {
                let end = omega[omega.len() - 1];
                let peak = j.iter().cloned().fold(0.0, f64::max);
                let cut = match omega_max {
                    Some(w) => w.min(end),
                    None if j[j.len() - 1] <= 1e-12 * peak => end,
                    None => {
                        return Err(Error::Configuration(
                            "tabulated spectrum does not decay at its last point; set omega_max"
                                .into(),
                        ))
                    }
                };
                // Near zero a linear table behaves as omega^0 (J(0) > 0) or
                // omega^1 (J(0) = 0); a table starting above zero contributes
                // nothing there.
                let low = if omega[0] > 0.0 {
                    None
                } else if j[0] > 0.0 {
                    Some(0.0)
                } else {
                    Some(1.0)
                };
                let (w, jv) = (omega.clone(), j.clone());
                (
                    Box::new(move |x| table_interp(&w, &jv, x)),
                    end - omega[0],
                    cut,
                    low,
                    omega.clone(),
                )
            }
            SpectralShape::Lorentzian { .. } => {
                return Err(Error::Configuration(
                    "dephasing needs an ohmic or tabulated spectral density".into(),
                ))
            }
        };
        let mut omega_lo = OMEGA_MIN_FRACTION * scale;
        if temperature > 0.0 {
            // Ensure coth is in its 2T/omega regime below omega_lo.
            omega_lo = omega_lo.min(2e-3 * temperature);
        }
        let power = match low_power {
            Some(p) => p - if temperature > 0.0 { 1.0 } else { 0.0 },
            None => f64::INFINITY,
        };
        if power <= -1.0 {
            return Err(Error::Configuration(
                "dephasing exponent diverges: J(omega) does not vanish at omega = 0 at finite temperature"
                    .into(),
            ));
        }
        Ok(Self {
            density,
            temperature,
            omega_lo,
            omega_max,
            power,
            nodes,
            scale,
        })
    }

    fn weight(&self, w: f64) -> f64 {
        (self.density)(w) * thermal_factor(w, self.temperature)
    }

    fn breaks(&self, t: f64) -> Vec<f64> {
        let width = self.scale.min(std::f64::consts::PI / t);
        let mut out = vec![self.omega_lo];
        let mut w = self.omega_lo * 10.0;
        while w < width.min(self.omega_max) {
            out.push(w);
            w *= 10.0;
        }
        let start = *out.last().unwrap();
        let n = ((self.omega_max - start) / width).ceil().max(1.0) as usize;
        for i in 1..=n {
            out.push(if i == n {
                self.omega_max
            } else {
                start + (self.omega_max - start) * i as f64 / n as f64
            });
        }
        out.extend(
            self.nodes
                .iter()
                .filter(|x| **x > self.omega_lo && **x < self.omega_max),
        );
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }

    /// `int_0^{omega_lo} h` for `h ~ omega^power`, from `h(omega_lo)`.
    fn low_piece(&self, h_lo: f64) -> f64 {
        if self.power.is_finite() {
            h_lo * self.omega_lo / (self.power + 1.0)
        } else {
            0.0
        }
    }

    /// `(Gamma_p(t), gamma_p(t))`.
    fn evaluate(&self, t: f64, tol: Tolerance) -> (f64, f64, bool) {
        if t == 0.0 {
            return (0.0, 0.0, true);
        }
        let breaks = self.breaks(t);
        let tol = Tolerance {
            max_panels: tol.max_panels.max(4 * breaks.len()),
            ..tol
        };
        let exponent = |w: f64| {
            let s = (0.5 * w * t).sin();
            self.weight(w) * 2.0 * s * s / (w * w)
        };
        let rate = |w: f64| 0.5 * self.weight(w) * (w * t).sin() / w;
        let big = integrate_on(exponent, &breaks, tol);
        let small = integrate_on(rate, &breaks, tol);
        let lo = self.omega_lo;
        let big_value = big.value + self.low_piece(exponent(lo));
        let small_value = small.value + self.low_piece(rate(lo));
        (-big_value, small_value, big.converged && small.converged)
    }
}

/// `Gamma_p(t_k) = -int J coth(w/2T) (1 - cos w t) / w^2 dw` and
/// `gamma_p(t_k) = (1/2) int J coth(w/2T) sin(w t) / w dw` on every grid point.
pub fn dephasing_trace(model: &SpectralDensityModel, grid: &TimeGrid) -> Result<DephasingTrace> {
    dephasing_trace_with(model, grid, Tolerance::default())
}

/// As [`dephasing_trace`] with an explicit panel tolerance.
pub fn dephasing_trace_with(
    model: &SpectralDensityModel,
    grid: &TimeGrid,
    tol: Tolerance,
) -> Result<DephasingTrace> {
    let bath = Bath::new(model)?;
    let samples: Vec<(f64, f64, bool)> = (0..grid.len())
        .into_par_iter()
        .map(|k| bath.evaluate(grid.time(k), tol))
        .collect();
    if let Some(k) = samples.iter().position(|s| !s.2) {
        return Err(Error::Configuration(format!(
            "frequency quadrature did not converge at t = {}",
            grid.time(k)
        )));
    }
    let (big, small) = samples.into_iter().map(|(a, b, _)| (a, b)).unzip();
    DephasingTrace::from_samples(*grid, big, small)
}

/// `c1 = c2 = 1/sqrt 2` with coherence damped by `exp(Gamma_p)`.
pub fn dephasing_joint_state(trace: &DephasingTrace, k: usize) -> Result<XState4> {
    trace.grid.check_index(k)?;
    Ok(XState4 {
        p00: 0.0,
        p10: 0.5,
        p01: 0.5,
        p11: 0.0,
        kappa: Complex64::new(0.5 * trace.big_gamma_p[k].exp(), 0.0),
    })
}

/// RK4 integration of `drho/dt = gamma_p (sz rho sz - rho)`.
pub fn dephasing_propagate_master(trace: &DephasingTrace, rho0: &DensityMatrix2) -> Trajectory {
    propagate(trace, rho0, false)
}

impl DecoherenceTrace for DephasingTrace {
    fn kind(&self) -> ModelKind {
        ModelKind::Dephasing
    }

    fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    fn rate(&self) -> &[f64] {
        &self.gamma_p
    }

    fn divergent(&self) -> &[bool] {
        &self.divergent
    }

    fn coherence_factor(&self, k: usize) -> Complex64 {
        Complex64::new(self.big_gamma_p[k].exp(), 0.0)
    }

    fn coherence_factor_at(&self, t: f64) -> Complex64 {
        Complex64::new(self.big_gamma_p_at(t).exp(), 0.0)
    }

    fn population_factor(&self, _k: usize) -> f64 {
        1.0
    }

    fn population_factor_at(&self, _t: f64) -> f64 {
        1.0
    }

    fn divisibility_exponent_at(&self, t: f64) -> f64 {
        -self.big_gamma_p_at(t)
    }

    fn divergence_cap(&self) -> Option<f64> {
        None
    }

    fn joint_state(&self, k: usize) -> Result<XState4> {
        dephasing_joint_state(self, k)
    }

    fn generator(&self, k: usize) -> Generator {
        Generator::Dephasing {
            gamma_p: self.gamma_p[k],
        }
    }
}
