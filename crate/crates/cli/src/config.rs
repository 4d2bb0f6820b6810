//! Run configuration: JSON schema, command-line overrides and validation.

use std::path::{Path, PathBuf};

use nmq_core::measures::DEFAULT_EPS_SCHEDULE;
use nmq_core::{ModelKind, PairParams, SpectralDensityModel, SpectralShape, TimeGrid, DEFAULT_G_FLOOR};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::Failure;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub t_max: f64,
    pub dt: f64,
}

/// Initial pair by its population difference `a` and coherence difference `b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairSpec {
    pub a: f64,
    #[serde(default)]
    pub b_re: f64,
    #[serde(default)]
    pub b_im: f64,
}

impl PairSpec {
    pub fn params(&self) -> PairParams {
        PairParams::new(self.a, Complex64::new(self.b_re, self.b_im))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepPairs {
    pub n_pairs: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub param: String,
    pub values: Vec<f64>,
}

/// Names accepted in `axes[].param`.
pub const AXIS_PARAMS: [&str; 9] = [
    "gamma0",
    "lambda",
    "detuning",
    "omega0",
    "eta",
    "omega_c",
    "s",
    "temperature",
    "g_floor",
];

fn default_g_floor() -> f64 {
    DEFAULT_G_FLOOR
}

fn default_eps() -> Vec<f64> {
    DEFAULT_EPS_SCHEDULE.to_vec()
}

fn default_output() -> PathBuf {
    PathBuf::from("nmq-out")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelKind,
    pub spectral: SpectralShape,
    #[serde(default)]
    pub temperature: f64,
    pub grid: GridSpec,
    #[serde(default = "default_g_floor")]
    pub g_floor: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair: Option<PairSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep_pairs: Option<SweepPairs>,
    #[serde(default = "default_eps")]
    pub eps_schedule: Vec<f64>,
    #[serde(default = "default_output")]
    pub output_dir: PathBuf,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub axes: Vec<Axis>,
}

/// Command-line overrides applied on top of the file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub model: Option<ModelKind>,
    pub t_max: Option<f64>,
    pub dt: Option<f64>,
    pub seed: Option<u64>,
    pub output_dir: Option<PathBuf>,
}

fn config_error(msg: impl Into<String>) -> Failure {
    Failure::Config(msg.into())
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, Failure> {
        serde_json::from_str(text).map_err(|e| config_error(format!("invalid config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| config_error(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn apply(&mut self, o: &Overrides) -> Result<(), Failure> {
        if let Some(m) = o.model {
            self.model = m;
        }
        if let Some(t) = o.t_max {
            self.grid.t_max = t;
        }
        if let Some(dt) = o.dt {
            self.grid.dt = dt;
        }
        if let Some(seed) = o.seed {
            match self.sweep_pairs.as_mut() {
                Some(s) => s.seed = seed,
                None => return Err(config_error("--seed needs a sweep_pairs section")),
            }
        }
        if let Some(dir) = &o.output_dir {
            self.output_dir = dir.clone();
        }
        Ok(())
    }

    pub fn time_grid(&self) -> Result<TimeGrid, Failure> {
        TimeGrid::new(self.grid.t_max, self.grid.dt).map_err(|e| config_error(e.to_string()))
    }

    pub fn spectral_model(&self) -> Result<SpectralDensityModel, Failure> {
        SpectralDensityModel::new(self.spectral.clone(), self.temperature)
            .map_err(|e| config_error(e.to_string()))
    }

    /// Checks everything that can be checked without running the model.
    pub fn validate(&self) -> Result<(), Failure> {
        self.time_grid()?;
        self.spectral_model()?;
        match (self.model, &self.spectral) {
            (ModelKind::JaynesCummings, SpectralShape::Ohmic { .. }) => {
                return Err(config_error(
                    "model jc needs a lorentzian or tabulated spectral density",
                ))
            }
            (ModelKind::Dephasing, SpectralShape::Lorentzian { .. }) => {
                return Err(config_error(
                    "model dephasing needs an ohmic or tabulated spectral density",
                ))
            }
            _ => {}
        }
        if !(self.g_floor > 0.0 && self.g_floor < 1.0) {
            return Err(config_error(format!("g_floor must lie in (0, 1), got {}", self.g_floor)));
        }
        match (&self.pair, &self.sweep_pairs) {
            (Some(_), Some(_)) | (None, None) => {
                return Err(config_error("give exactly one of pair or sweep_pairs"))
            }
            (Some(p), None) => {
                let b = Complex64::new(p.b_re, p.b_im).norm();
                if !(p.a.abs() <= 1.0 && b <= 1.0) {
                    return Err(config_error("pair needs |a| <= 1 and |b| <= 1"));
                }
                if p.params().is_degenerate() {
                    return Err(config_error("pair has a = 0 and b = 0"));
                }
            }
            (None, Some(s)) => {
                if s.n_pairs < 2 {
                    return Err(config_error("sweep_pairs.n_pairs must be at least 2"));
                }
            }
        }
        if self.eps_schedule.is_empty()
            || self.eps_schedule.iter().any(|e| !(e.is_finite() && *e > 0.0))
            || self.eps_schedule.windows(2).any(|w| !(w[1] < w[0]))
        {
            return Err(config_error("eps_schedule must be strictly decreasing and positive"));
        }
        if self.output_dir.exists() && !self.output_dir.is_dir() {
            return Err(config_error(format!(
                "output_dir {} is not a directory",
                self.output_dir.display()
            )));
        }
        for axis in &self.axes {
            if axis.values.is_empty() || axis.values.iter().any(|v| !v.is_finite()) {
                return Err(config_error(format!("axis {} needs finite values", axis.param)));
            }
            // Every point must be applicable to this spectral variant.
            let mut probe = self.clone();
            probe.set_param(&axis.param, axis.values[0])?;
        }
        Ok(())
    }

    /// Validation for `nmq sweep`: one or two axes.
    pub fn validate_sweep(&self) -> Result<(), Failure> {
        self.validate()?;
        if !(1..=2).contains(&self.axes.len()) {
            return Err(config_error("sweep needs one or two axes"));
        }
        Ok(())
    }

    /// Sets a named model parameter, for sweep axes.
    pub fn set_param(&mut self, name: &str, value: f64) -> Result<(), Failure> {
        let slot: &mut f64 = match (name, &mut self.spectral) {
            ("temperature", _) => &mut self.temperature,
            ("g_floor", _) => &mut self.g_floor,
            ("gamma0", SpectralShape::Lorentzian { gamma0, .. }) => gamma0,
            ("lambda", SpectralShape::Lorentzian { lambda, .. }) => lambda,
            ("detuning", SpectralShape::Lorentzian { detuning, .. }) => detuning,
            ("omega0", SpectralShape::Lorentzian { omega0, .. }) => omega0,
            ("omega0", SpectralShape::Tabulated { omega0, .. }) => omega0,
            ("eta", SpectralShape::Ohmic { eta, .. }) => eta,
            ("omega_c", SpectralShape::Ohmic { omega_c, .. }) => omega_c,
            ("s", SpectralShape::Ohmic { s, .. }) => s,
            (other, shape) => {
                return Err(config_error(if AXIS_PARAMS.contains(&other) {
                    format!("parameter {other} does not apply to a {} spectrum", shape.name())
                } else {
                    format!("unknown sweep parameter {other}")
                }))
            }
        };
        *slot = value;
        Ok(())
    }

    /// Unit convention echoed in reports.
    pub fn units(&self) -> Units {
        let (frequency, scale) = match &self.spectral {
            SpectralShape::Lorentzian { lambda, .. } => ("lambda", *lambda),
            SpectralShape::Ohmic { omega_c, .. } => ("omega_c", *omega_c),
            SpectralShape::Tabulated { .. } => ("tabulated omega", 1.0),
        };
        Units {
            convention: "hbar = k_B = 1; rates, frequencies and temperature share one unit, times its inverse",
            frequency_unit: frequency,
            frequency_scale: scale,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Units {
    pub convention: &'static str,
    /// Parameter that sets the natural frequency unit.
    pub frequency_unit: &'static str,
    /// Its configured value; results are in units of `1/scale` for time
    /// when this is 1.
    pub frequency_scale: f64,
}
