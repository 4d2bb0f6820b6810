//! Bath spectral densities and the two-point reservoir correlation kernel.
//!
//! Units: `k_B = 1`, and every rate, frequency and temperature shares one
//! inverse-time unit (set by `lambda` for Lorentzian baths and `omega_c` for
//! the Ohmic family).

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{self, Tolerance};

/// Phase span `|tau| * (omega_max - omega_min)` above which the tabulated
/// Fourier integral switches to exact per-segment (Filon) integration.
pub const FILON_SWITCH: f64 = 10.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SpectralShape {
    /// `J(w) = (gamma0 / 2 pi) lambda^2 / ((w - w0 + detuning)^2 + lambda^2)`,
    /// peaked at `w0 - detuning`.
    Lorentzian {
        gamma0: f64,
        lambda: f64,
        #[serde(default)]
        detuning: f64,
        #[serde(default)]
        omega0: f64,
    },
    /// `J(w) = eta w^s omega_c^(1 - s) exp(-w / omega_c)`.
    Ohmic { eta: f64, omega_c: f64, s: f64 },
    /// Piecewise-linear `J` on a strictly increasing grid, zero outside it.
    Tabulated {
        omega: Vec<f64>,
        j: Vec<f64>,
        #[serde(default)]
        omega0: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        omega_max: Option<f64>,
    },
}

impl SpectralShape {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Lorentzian { .. } => "lorentzian",
            Self::Ohmic { .. } => "ohmic",
            Self::Tabulated { .. } => "tabulated",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralDensityModel {
    pub shape: SpectralShape,
    /// Reservoir temperature. Ignored by the Jaynes-Cummings kernel, which
    /// assumes a vacuum reservoir.
    #[serde(default)]
    pub temperature: f64,
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidModel(format!("{name} must be positive, got {v}")))
    }
}

impl SpectralDensityModel {
    pub fn new(shape: SpectralShape, temperature: f64) -> Result<Self> {
        let m = Self { shape, temperature };
        m.validate()?;
        Ok(m)
    }

    pub fn lorentzian(gamma0: f64, lambda: f64, detuning: f64) -> Result<Self> {
        Self::new(
            SpectralShape::Lorentzian {
                gamma0,
                lambda,
                detuning,
                omega0: 0.0,
            },
            0.0,
        )
    }

    pub fn ohmic(eta: f64, omega_c: f64, s: f64, temperature: f64) -> Result<Self> {
        Self::new(SpectralShape::Ohmic { eta, omega_c, s }, temperature)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.temperature.is_finite() && self.temperature >= 0.0) {
            return Err(Error::InvalidModel(format!(
                "temperature must be >= 0, got {}",
                self.temperature
            )));
        }
        match &self.shape {
            SpectralShape::Lorentzian {
                gamma0,
                lambda,
                detuning,
                omega0,
            } => {
                positive("gamma0", *gamma0)?;
                positive("lambda", *lambda)?;
                if !detuning.is_finite() || !omega0.is_finite() {
                    return Err(Error::InvalidModel("detuning and omega0 must be finite".into()));
                }
            }
            SpectralShape::Ohmic { eta, omega_c, s } => {
                positive("eta", *eta)?;
                positive("omega_c", *omega_c)?;
                if !(s.is_finite() && *s >= 0.0) {
                    return Err(Error::InvalidModel(format!("s must be >= 0, got {s}")));
                }
            }
            SpectralShape::Tabulated {
                omega,
                j,
                omega0,
                omega_max,
            } => {
                if omega.len() < 2 || omega.len() != j.len() {
                    return Err(Error::InvalidModel(
                        "tabulated spectrum needs >= 2 points and matching lengths".into(),
                    ));
                }
                if omega.windows(2).any(|w| !(w[1] > w[0])) || omega.iter().any(|w| !w.is_finite()) {
                    return Err(Error::InvalidModel(
                        "tabulated frequencies must be finite and strictly increasing".into(),
                    ));
                }
                if omega[0] < 0.0 {
                    return Err(Error::InvalidModel("tabulated frequencies must be >= 0".into()));
                }
                if j.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
                    return Err(Error::InvalidModel("tabulated J values must be >= 0".into()));
                }
                if !omega0.is_finite() {
                    return Err(Error::InvalidModel("omega0 must be finite".into()));
                }
                if let Some(w) = omega_max {
                    positive("omega_max", *w)?;
                }
            }
        }
        Ok(())
    }

    /// Natural frequency unit of the model (`lambda`, `omega_c`, or the table span).
    pub fn frequency_scale(&self) -> f64 {
        match &self.shape {
            SpectralShape::Lorentzian { lambda, .. } => *lambda,
            SpectralShape::Ohmic { omega_c, .. } => *omega_c,
            SpectralShape::Tabulated { omega, .. } => omega[omega.len() - 1] - omega[0],
        }
    }
}

/// `J(omega)` for `omega >= 0`.
pub fn spectral_eval(model: &SpectralDensityModel, omega: f64) -> Result<f64> {
    if !(omega >= 0.0) {
        return Err(Error::Domain(omega));
    }
    Ok(match &model.shape {
        SpectralShape::Lorentzian {
            gamma0,
            lambda,
            detuning,
            omega0,
        } => {
            let x = omega - omega0 + detuning;
            gamma0 / (2.0 * PI) * lambda * lambda / (x * x + lambda * lambda)
        }
        SpectralShape::Ohmic { eta, omega_c, s } => ohmic_density(*eta, *omega_c, *s, omega),
        SpectralShape::Tabulated { omega: w, j, .. } => table_interp(w, j, omega),
    })
}

pub(crate) fn ohmic_density(eta: f64, omega_c: f64, s: f64, omega: f64) -> f64 {
    if omega == 0.0 {
        return if s == 0.0 { eta * omega_c } else { 0.0 };
    }
    eta * omega_c * (omega / omega_c).powf(s) * (-omega / omega_c).exp()
}

pub(crate) fn table_interp(w: &[f64], j: &[f64], omega: f64) -> f64 {
    if omega < w[0] || omega > w[w.len() - 1] {
        return 0.0;
    }
    let idx = w.partition_point(|x| *x <= omega);
    if idx == 0 {
        return j[0];
    }
    if idx >= w.len() {
        return j[w.len() - 1];
    }
    let (w0, w1) = (w[idx - 1], w[idx]);
    let frac = (omega - w0) / (w1 - w0);
    j[idx - 1] * (1.0 - frac) + j[idx] * frac
}

#[derive(Clone)]
enum KernelRule {
    Lorentzian {
        amplitude: f64,
        width: f64,
        detuning: f64,
    },
    Tabulated {
        omega: Vec<f64>,
        j: Vec<f64>,
        omega0: f64,
    },
    Custom(Arc<dyn Fn(f64) -> Complex64 + Send + Sync>),
}

/// Reservoir correlation function `f(tau) = int J(w) exp(i (w0 - w) tau) dw`.
#[derive(Clone)]
pub struct CorrelationKernel {
    rule: KernelRule,
}

impl fmt::Debug for CorrelationKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match &self.rule {
            KernelRule::Lorentzian { .. } => "lorentzian",
            KernelRule::Tabulated { .. } => "tabulated",
            KernelRule::Custom(_) => "custom",
        };
        f.debug_struct("CorrelationKernel").field("rule", &name).finish()
    }
}

impl CorrelationKernel {
    pub fn from_model(model: &SpectralDensityModel) -> Result<Self> {
        model.validate()?;
        let rule = match &model.shape {
            SpectralShape::Lorentzian {
                gamma0,
                lambda,
                detuning,
                ..
            } => KernelRule::Lorentzian {
                amplitude: 0.5 * gamma0 * lambda,
                width: *lambda,
                detuning: *detuning,
            },
            SpectralShape::Tabulated { omega, j, omega0, .. } => KernelRule::Tabulated {
                omega: omega.clone(),
                j: j.clone(),
                omega0: *omega0,
            },
            SpectralShape::Ohmic { .. } => return Err(Error::UnsupportedKernel("ohmic")),
        };
        Ok(Self { rule })
    }

    pub fn zero() -> Self {
        Self::from_fn(|_| Complex64::new(0.0, 0.0))
    }

    pub fn from_fn<F>(f: F) -> Self
    where
        F: Fn(f64) -> Complex64 + Send + Sync + 'static,
    {
        Self {
            rule: KernelRule::Custom(Arc::new(f)),
        }
    }

    pub fn is_closed_form(&self) -> bool {
        !matches!(self.rule, KernelRule::Tabulated { .. })
    }

    pub fn eval(&self, tau: f64) -> Complex64 {
        match &self.rule {
            KernelRule::Lorentzian {
                amplitude,
                width,
                detuning,
            } => Complex64::from_polar(amplitude * (-width * tau.abs()).exp(), detuning * tau),
            KernelRule::Tabulated { omega, j, omega0 } => {
                Complex64::from_polar(1.0, omega0 * tau) * table_fourier(omega, j, tau)
            }
            KernelRule::Custom(f) => f(tau),
        }
    }
}

pub fn kernel_eval(model: &SpectralDensityModel, tau: f64) -> Result<Complex64> {
    Ok(CorrelationKernel::from_model(model)?.eval(tau))
}

/// `int J(w) exp(-i w tau) dw` over the table support.
fn table_fourier(w: &[f64], j: &[f64], tau: f64) -> Complex64 {
    let span = w[w.len() - 1] - w[0];
    if tau.abs() * span > FILON_SWITCH {
        w.windows(2)
            .zip(j.windows(2))
            .map(|(ws, js)| filon_segment(ws[0], ws[1], js[0], js[1], tau))
            .sum()
    } else {
        let tol = Tolerance {
            rel: 1e-13,
            abs: 1e-15,
            max_panels: 4096,
        };
        let re = quadrature::integrate_on(|x| table_interp(w, j, x) * (x * tau).cos(), w, tol);
        let im = quadrature::integrate_on(|x| -table_interp(w, j, x) * (x * tau).sin(), w, tol);
        Complex64::new(re.value, im.value)
    }
}

/// Exact `int_{w0}^{w1} (j0 + slope (w - w0)) exp(-i w tau) dw`.
fn filon_segment(w0: f64, w1: f64, j0: f64, j1: f64, tau: f64) -> Complex64 {
    let h = w1 - w0;
    let slope = (j1 - j0) / h;
    let k = Complex64::new(0.0, tau);
    let kh = k * h;
    let (i0, i1) = if kh.norm() < 0.5 {
        // Power series avoids cancellation for short segments.
        let mut i0 = Complex64::new(0.0, 0.0);
        let mut i1 = Complex64::new(0.0, 0.0);
        let mut term = Complex64::new(1.0, 0.0); // (-kh)^n / n!
        for n in 0..30 {
            i0 += term * h / (n as f64 + 1.0);
            i1 += term * h * h / (n as f64 + 2.0);
            term *= -kh / (n as f64 + 1.0);
        }
        (i0, i1)
    } else {
        let e = (-kh).exp();
        let i0 = (1.0 - e) / k;
        let i1 = (1.0 - e) / (k * k) - e * h / k;
        (i0, i1)
    };
    (-k * w0).exp() * (i0 * j0 + i1 * slope)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn ohmic_eval() {
        let m = SpectralDensityModel::ohmic(1.0, 1.0, 1.0, 0.0).unwrap();
        assert!((spectral_eval(&m, 1.0).unwrap() - (-1.0f64).exp()).abs() < 1e-15);
        for s in [0.5, 1.0, 3.0] {
            let m = SpectralDensityModel::ohmic(0.7, 2.0, s, 0.1).unwrap();
            assert_eq!(spectral_eval(&m, 0.0).unwrap(), 0.0);
        }
        assert!(matches!(spectral_eval(&m, -1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn tabulated_eval() {
        let m = SpectralDensityModel::new(
            SpectralShape::Tabulated {
                omega: vec![0.0, 2.0],
                j: vec![0.0, 4.0],
                omega0: 0.0,
                omega_max: None,
            },
            0.0,
        )
        .unwrap();
        assert_eq!(spectral_eval(&m, 1.0).unwrap(), 2.0);
        assert_eq!(spectral_eval(&m, 3.0).unwrap(), 0.0);
    }

    #[test]
    fn invalid_models_rejected() {
        assert!(SpectralDensityModel::lorentzian(-1.0, 1.0, 0.0).is_err());
        assert!(SpectralDensityModel::ohmic(1.0, 0.0, 1.0, 0.0).is_err());
        assert!(SpectralDensityModel::ohmic(1.0, 1.0, 1.0, -0.1).is_err());
        let bad = SpectralShape::Tabulated {
            omega: vec![0.0, 1.0, 1.0],
            j: vec![0.0, 1.0, 0.0],
            omega0: 0.0,
            omega_max: None,
        };
        assert!(SpectralDensityModel::new(bad, 0.0).is_err());
        let neg = SpectralShape::Tabulated {
            omega: vec![0.0, 1.0],
            j: vec![0.0, -1.0],
            omega0: 0.0,
            omega_max: None,
        };
        assert!(SpectralDensityModel::new(neg, 0.0).is_err());
    }

    #[test]
    fn lorentzian_kernel_values() {
        let m = SpectralDensityModel::lorentzian(1.0, 1.0, 0.0).unwrap();
        let f0 = kernel_eval(&m, 0.0).unwrap();
        assert!((f0.re - 0.5).abs() < 1e-15 && f0.im == 0.0);
        let f2 = kernel_eval(&m, 2.0).unwrap();
        assert!((f2.re - 0.5 * (-2.0f64).exp()).abs() < 1e-15);
        assert!((f2.re - 0.067668).abs() < 1e-6);
    }

    /// `int J(w) exp(-i w tau) dw` over the whole real line for the
    /// Lorentzian, truncated at `|w + detuning| = W` with a tail `O(1/(W^2 tau))`.
    fn lorentzian_fourier(gamma0: f64, lambda: f64, detuning: f64, tau: f64) -> Complex64 {
        let j = |w: f64| {
            let x = w + detuning;
            gamma0 / (2.0 * PI) * lambda * lambda / (x * x + lambda * lambda)
        };
        let width = 2e4 * lambda;
        let breaks = quadrature::uniform_breaks(-detuning - width, -detuning + width, PI / tau);
        let tol = Tolerance {
            rel: 1e-13,
            abs: 1e-15,
            max_panels: 400_000,
        };
        let re = quadrature::integrate_on(|w| j(w) * (w * tau).cos(), &breaks, tol);
        let im = quadrature::integrate_on(|w| -j(w) * (w * tau).sin(), &breaks, tol);
        Complex64::new(re.value, im.value)
    }

    #[test]
    fn lorentzian_kernel_matches_fourier_quadrature() {
        for (gamma0, lambda, detuning) in [(1.0, 1.0, 0.0), (10.0, 1.0, 0.0), (2.0, 0.5, 0.7)] {
            let m = SpectralDensityModel::lorentzian(gamma0, lambda, detuning).unwrap();
            // tau = 0: the full-line integral of J is gamma0 lambda / 2.
            let f0 = kernel_eval(&m, 0.0).unwrap();
            assert!((f0.re - 0.5 * gamma0 * lambda).abs() < 1e-14 && f0.im.abs() < 1e-10);
            for tau in [0.5, 1.0, 2.0, 3.5] {
                let numeric = lorentzian_fourier(gamma0, lambda, detuning, tau);
                let closed = kernel_eval(&m, tau).unwrap();
                assert!(close(numeric, closed, 1e-8), "tau = {tau}: {numeric} vs {closed}");
            }
        }
    }

    #[test]
    fn lorentzian_kernel_properties() {
        for detuning in [0.0, 0.8, -1.5] {
            let m = SpectralDensityModel::lorentzian(3.0, 1.2, detuning).unwrap();
            for tau in [0.1, 0.7, 4.0] {
                let a = kernel_eval(&m, -tau).unwrap();
                let b = kernel_eval(&m, tau).unwrap().conj();
                assert!(close(a, b, 1e-14));
            }
            // int_0^inf f = (gamma0 / 2) lambda / (lambda - i detuning)
            let kernel = CorrelationKernel::from_model(&m).unwrap();
            let tol = Tolerance { rel: 1e-13, ..Tolerance::default() };
            let re = quadrature::integrate(|t| kernel.eval(t).re, 0.0, 60.0, tol).value;
            let im = quadrature::integrate(|t| kernel.eval(t).im, 0.0, 60.0, tol).value;
            let expected = Complex64::new(1.5 * 1.2, 0.0) / Complex64::new(1.2, -detuning);
            assert!(close(Complex64::new(re, im), expected, 1e-8));
            if detuning == 0.0 {
                assert!((re - 1.5).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn ohmic_kernel_unsupported() {
        let m = SpectralDensityModel::ohmic(1.0, 1.0, 1.0, 0.0).unwrap();
        assert!(matches!(
            kernel_eval(&m, 1.0),
            Err(Error::UnsupportedKernel("ohmic"))
        ));
    }

    #[test]
    fn tabulated_box_kernel_both_branches() {
        // J = 1 on [0, 2]: int exp(-i w tau) dw = (1 - exp(-2 i tau)) / (i tau)
        let w0 = 0.3;
        let m = SpectralDensityModel::new(
            SpectralShape::Tabulated {
                omega: vec![0.0, 0.5, 1.3, 2.0],
                j: vec![1.0; 4],
                omega0: w0,
                omega_max: None,
            },
            0.0,
        )
        .unwrap();
        for tau in [0.0, 0.7, 3.0, 4.9, 5.1, 20.0, -13.0] {
            let got = kernel_eval(&m, tau).unwrap();
            let exact = if tau == 0.0 {
                Complex64::new(2.0, 0.0)
            } else {
                let k = Complex64::new(0.0, tau);
                Complex64::from_polar(1.0, w0 * tau) * (1.0 - (-k * 2.0).exp()) / k
            };
            assert!(close(got, exact, 1e-12), "tau {tau}: {got} vs {exact}");
        }
    }

    #[test]
    fn tabulated_triangle_kernel_matches_quadrature_oracle() {
        let omega: Vec<f64> = (0..=40).map(|i| i as f64 * 0.1).collect();
        let j: Vec<f64> = omega.iter().map(|w| w * (4.0 - w)).collect();
        let m = SpectralDensityModel::new(
            SpectralShape::Tabulated {
                omega: omega.clone(),
                j: j.clone(),
                omega0: 1.0,
                omega_max: None,
            },
            0.0,
        )
        .unwrap();
        for tau in [0.5, 2.4, 2.6, 9.0] {
            // brute-force midpoint rule on the interpolant
            let n = 400_000;
            let h = 4.0 / n as f64;
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..n {
                let x = (i as f64 + 0.5) * h;
                acc += Complex64::from_polar(table_interp(&omega, &j, x) * h, (1.0 - x) * tau);
            }
            let got = kernel_eval(&m, tau).unwrap();
            assert!(close(got, acc, 1e-7), "tau {tau}: {got} vs {acc}");
        }
    }
}
