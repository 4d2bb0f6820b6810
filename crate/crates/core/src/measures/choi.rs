//! Complete-positivity witness `g(t) = lim (||[1 + eps (L_t x 1)] Phi|| - 1) / eps`.

use nalgebra::Matrix4;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generator::Generator;
use crate::trace::DecoherenceTrace;

pub const DEFAULT_EPS_SCHEDULE: [f64; 3] = [1e-3, 1e-4, 1e-5];

/// Below `CHOI_THRESHOLD * max(1, rate scale)` a computed `g` is treated as
/// zero. Rounding in the eigenvalues leaves about `5e-11` per unit rate.
pub const CHOI_THRESHOLD: f64 = 1e-9;

/// Positivity threshold for `g` computed from `gen`.
pub fn choi_threshold(gen: &Generator) -> f64 {
    CHOI_THRESHOLD * gen.rate_scale().max(1.0)
}

/// Maximally entangled state the generator acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChoiReference {
    /// `(|11> + |00>) / sqrt 2`
    #[default]
    Standard,
    /// `(|10> + |01>) / sqrt 2`
    Ancilla,
}

impl ChoiReference {
    pub fn label(&self) -> &'static str {
        match self {
            Self::Standard => "(|11>+|00>)/sqrt2",
            Self::Ancilla => "(|10>+|01>)/sqrt2",
        }
    }

    fn projector(&self) -> Matrix4<Complex64> {
        // Index 2 * system + ancilla, with 0 = |1> and 1 = |0>.
        let (p, q) = match self {
            Self::Standard => (0, 3),
            Self::Ancilla => (1, 2),
        };
        let mut m = Matrix4::zeros();
        for i in [p, q] {
            for j in [p, q] {
                m[(i, j)] = Complex64::new(0.5, 0.0);
            }
        }
        m
    }
}

/// `(L x 1)(X)` for a 4x4 operator `X`, blockwise over the ancilla indices.
fn apply_on_system(gen: &Generator, x: &Matrix4<Complex64>) -> Matrix4<Complex64> {
    let mut out = Matrix4::zeros();
    for k in 0..2 {
        for l in 0..2 {
            let block = [
                [x[(k, l)], x[(k, 2 + l)]],
                [x[(2 + k, l)], x[(2 + k, 2 + l)]],
            ];
            let mapped = gen.apply(&block);
            for i in 0..2 {
                for j in 0..2 {
                    out[(2 * i + k, 2 * j + l)] = mapped[i][j];
                }
            }
        }
    }
    out
}

/// `(||Phi + eps (L x 1) Phi||_1 - 1) / eps`. The excess is assembled from
/// `tr - 1` and the negative eigenvalues to avoid cancelling against the
/// unit eigenvalue.
fn excess(phi: &Matrix4<Complex64>, image: &Matrix4<Complex64>, eps: f64) -> f64 {
    let x = phi + image * Complex64::new(eps, 0.0);
    let x = (x + x.adjoint()) * Complex64::new(0.5, 0.0);
    let tr: f64 = (0..4).map(|i| x[(i, i)].re).sum();
    let eig = x.symmetric_eigenvalues();
    let negative: f64 = eig.iter().filter(|v| **v < 0.0).map(|v| -v).sum();
    ((tr - 1.0) + 2.0 * negative) / eps
}

fn check_schedule(schedule: &[f64]) -> Result<()> {
    if schedule.is_empty()
        || schedule.iter().any(|e| !(e.is_finite() && *e > 0.0))
        || schedule.windows(2).any(|w| !(w[1] < w[0]))
    {
        return Err(Error::Configuration(
            "eps schedule must be a non-empty, strictly decreasing list of positive numbers".into(),
        ));
    }
    Ok(())
}

/// Richardson-extrapolated `g` from the last two entries of `schedule`.
///
/// Each `eps` is divided by the generator's rate scale so that
/// `eps * |L|` stays in the schedule's intended range for fast rates.
pub fn choi_g(gen: &Generator, schedule: &[f64], reference: ChoiReference) -> Result<f64> {
    check_schedule(schedule)?;
    if !gen.is_finite() {
        return Err(Error::DivergentPoint { t: f64::NAN });
    }
    let scale = gen.rate_scale().max(1.0);
    let phi = reference.projector();
    let image = apply_on_system(gen, &phi);
    let values: Vec<(f64, f64)> = schedule
        .iter()
        .map(|e| {
            let eps = e / scale;
            (eps, excess(&phi, &image, eps))
        })
        .collect();
    let g = match values.as_slice() {
        [.., (e1, v1), (e2, v2)] => (e1 * v2 - e2 * v1) / (e1 - e2),
        [(_, v)] => *v,
        [] => unreachable!(),
    };
    Ok(g.max(0.0))
}

/// `g` at grid index `k`; flagged points are reported, not evaluated.
pub fn choi_g_at<T: DecoherenceTrace + ?Sized>(
    trace: &T,
    k: usize,
    schedule: &[f64],
    reference: ChoiReference,
) -> Result<f64> {
    trace.grid().check_index(k)?;
    let t = trace.grid().time(k);
    if trace.divergent()[k] {
        return Err(Error::DivergentPoint { t });
    }
    choi_g(&trace.generator(k), schedule, reference).map_err(|e| match e {
        Error::DivergentPoint { .. } => Error::DivergentPoint { t },
        other => other,
    })
}

/// `g` on every grid point, `None` where the rate is divergent.
pub fn choi_curve<T: DecoherenceTrace + ?Sized>(
    trace: &T,
    schedule: &[f64],
    reference: ChoiReference,
) -> Result<Vec<Option<f64>>> {
    use rayon::prelude::*;
    check_schedule(schedule)?;
    (0..trace.grid().len())
        .into_par_iter()
        .map(|k| match choi_g_at(trace, k, schedule, reference) {
            Ok(g) => Ok(Some(g)),
            Err(Error::DivergentPoint { .. }) => Ok(None),
            Err(e) => Err(e),
        })
        .collect()
}
