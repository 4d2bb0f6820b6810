//! Time-local generators `L_t` of the two master equations, acting on
//! (not necessarily Hermitian) 2x2 operators in the `{|1>, |0>}` basis.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::quantum::Matrix2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Generator {
    /// `-(i/2) S [s+ s-, rho] + gamma (s- rho s+ - {s+ s-, rho} / 2)`
    JaynesCummings { gamma: f64, shift: f64 },
    /// `gamma_p (sz rho sz - rho)`
    Dephasing { gamma_p: f64 },
}

impl Generator {
    pub fn apply(&self, rho: &Matrix2) -> Matrix2 {
        let zero = Complex64::new(0.0, 0.0);
        match *self {
            Self::JaynesCummings { gamma, shift } => {
                let decay = Complex64::new(-0.5 * gamma, -0.5 * shift);
                [
                    [rho[0][0] * -gamma, rho[0][1] * decay],
                    [rho[1][0] * decay.conj(), rho[0][0] * gamma],
                ]
            }
            Self::Dephasing { gamma_p } => [
                [zero, rho[0][1] * (-2.0 * gamma_p)],
                [rho[1][0] * (-2.0 * gamma_p), zero],
            ],
        }
    }

    /// Largest rate magnitude; sets the natural inverse time of the generator.
    pub fn rate_scale(&self) -> f64 {
        match *self {
            Self::JaynesCummings { gamma, shift } => gamma.abs().max(shift.abs()),
            Self::Dephasing { gamma_p } => 2.0 * gamma_p.abs(),
        }
    }

    pub fn is_finite(&self) -> bool {
        match *self {
            Self::JaynesCummings { gamma, shift } => gamma.is_finite() && shift.is_finite(),
            Self::Dephasing { gamma_p } => gamma_p.is_finite(),
        }
    }

    /// Linear blend `(1 - w) self + w other` of two generators of the same kind.
    pub(crate) fn blend(&self, other: &Self, w: f64) -> Self {
        match (*self, *other) {
            (
                Self::JaynesCummings { gamma: g0, shift: s0 },
                Self::JaynesCummings { gamma: g1, shift: s1 },
            ) => Self::JaynesCummings {
                gamma: g0 + w * (g1 - g0),
                shift: s0 + w * (s1 - s0),
            },
            (Self::Dephasing { gamma_p: g0 }, Self::Dephasing { gamma_p: g1 }) => Self::Dephasing {
                gamma_p: g0 + w * (g1 - g0),
            },
            _ => panic!("cannot blend generators of different models"),
        }
    }
}

pub(crate) fn mat_add_scaled(a: &Matrix2, b: &Matrix2, s: f64) -> Matrix2 {
    [
        [a[0][0] + b[0][0] * s, a[0][1] + b[0][1] * s],
        [a[1][0] + b[1][0] * s, a[1][1] + b[1][1] * s],
    ]
}

/// One classical fourth-order step of `drho/dt = L(rho)` over `dt`.
pub(crate) fn rk4_step(
    rho: &Matrix2,
    start: &Generator,
    mid: &Generator,
    end: &Generator,
    dt: f64,
) -> Matrix2 {
    let k1 = start.apply(rho);
    let k2 = mid.apply(&mat_add_scaled(rho, &k1, 0.5 * dt));
    let k3 = mid.apply(&mat_add_scaled(rho, &k2, 0.5 * dt));
    let k4 = end.apply(&mat_add_scaled(rho, &k3, dt));
    let mut out = *rho;
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] += (k1[i][j] + k2[i][j] * 2.0 + k3[i][j] * 2.0 + k4[i][j]) * (dt / 6.0);
        }
    }
    out
}
