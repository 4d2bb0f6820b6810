//! Finite-dimensional state algebra for a qubit and a qubit+ancilla pair.
//!
//! Basis convention: single qubit `{|1>, |0>}` with the excited state first,
//! so `entry(0, 0)` is `rho_11` and `entry(0, 1)` is `rho_10 = <1|rho|0>`.
//! Two-qubit states use `{|11>, |10>, |01>, |00>}` with the system first.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on trace, hermiticity and positivity checks.
pub const STATE_TOL: f64 = 1e-12;

pub type Matrix2 = [[Complex64; 2]; 2];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityMatrix2 {
    m: Matrix2,
}

impl DensityMatrix2 {
    /// Validates hermiticity, unit trace and positivity to within `tol`.
    pub fn with_tolerance(m: Matrix2, tol: f64) -> Result<Self> {
        let herm = (m[0][1] - m[1][0].conj()).norm();
        let diag_im = m[0][0].im.abs().max(m[1][1].im.abs());
        if herm > tol || diag_im > tol {
            return Err(Error::InvalidState(format!(
                "not Hermitian (off-diagonal mismatch {herm:.3e}, diagonal imag {diag_im:.3e})"
            )));
        }
        let tr = m[0][0].re + m[1][1].re;
        if (tr - 1.0).abs() > tol {
            return Err(Error::InvalidState(format!("trace {tr} != 1")));
        }
        let det = m[0][0].re * m[1][1].re - m[0][1].norm_sqr();
        if det < -tol || m[0][0].re < -tol || m[1][1].re < -tol {
            return Err(Error::InvalidState(format!(
                "not positive semidefinite (det {det:.3e})"
            )));
        }
        Ok(Self { m })
    }

    pub fn new(m: Matrix2) -> Result<Self> {
        Self::with_tolerance(m, STATE_TOL)
    }

    /// State with excited population `p_excited` and coherence `rho_10`.
    pub fn from_parts(p_excited: f64, rho_10: Complex64) -> Result<Self> {
        Self::new([
            [Complex64::new(p_excited, 0.0), rho_10],
            [rho_10.conj(), Complex64::new(1.0 - p_excited, 0.0)],
        ])
    }

    /// Skips validation. Used for propagated states, whose invariants are
    /// checked separately at a looser tolerance.
    pub(crate) fn from_parts_unchecked(p_excited: f64, rho_10: Complex64) -> Self {
        Self {
            m: [
                [Complex64::new(p_excited, 0.0), rho_10],
                [rho_10.conj(), Complex64::new(1.0 - p_excited, 0.0)],
            ],
        }
    }

    pub(crate) fn from_matrix_unchecked(m: Matrix2) -> Self {
        Self { m }
    }

    pub fn excited() -> Self {
        Self::from_parts_unchecked(1.0, ZERO)
    }

    pub fn ground() -> Self {
        Self::from_parts_unchecked(0.0, ZERO)
    }

    pub fn matrix(&self) -> &Matrix2 {
        &self.m
    }

    /// `rho_11`, the excited-state population.
    pub fn excited_population(&self) -> f64 {
        self.m[0][0].re
    }

    pub fn ground_population(&self) -> f64 {
        self.m[1][1].re
    }

    /// `rho_10 = <1|rho|0>`.
    pub fn coherence(&self) -> Complex64 {
        self.m[0][1]
    }

    pub fn trace(&self) -> f64 {
        self.m[0][0].re + self.m[1][1].re
    }

    pub fn determinant(&self) -> f64 {
        self.m[0][0].re * self.m[1][1].re - self.m[0][1].norm_sqr()
    }

    /// `U rho U^dagger`.
    pub fn conjugated(&self, u: &Matrix2) -> Result<Self> {
        let mut out = [[ZERO; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                let mut acc = ZERO;
                for k in 0..2 {
                    for l in 0..2 {
                        acc += u[i][k] * self.m[k][l] * u[j][l].conj();
                    }
                }
                *cell = acc;
            }
        }
        Self::with_tolerance(out, 1e-10)
    }

    pub fn to_bloch(&self) -> BlochVector {
        let c = self.coherence();
        BlochVector {
            x: 2.0 * c.re,
            y: -2.0 * c.im,
            z: self.m[0][0].re - self.m[1][1].re,
        }
    }
}

/// Two-qubit X state restricted to the one-excitation coherence
/// `kappa = <10|rho|01>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XState4 {
    pub p00: f64,
    pub p10: f64,
    pub p01: f64,
    pub p11: f64,
    pub kappa: Complex64,
}

impl XState4 {
    pub fn new(p00: f64, p10: f64, p01: f64, p11: f64, kappa: Complex64) -> Result<Self> {
        let s = Self {
            p00,
            p10,
            p01,
            p11,
            kappa,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        let pops = [self.p00, self.p10, self.p01, self.p11];
        let sum: f64 = pops.iter().sum();
        if (sum - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidState(format!("populations sum to {sum}")));
        }
        if pops.iter().any(|p| *p < -STATE_TOL || !p.is_finite()) {
            return Err(Error::InvalidState(format!("negative population in {pops:?}")));
        }
        if self.kappa.norm_sqr() > self.p10 * self.p01 + STATE_TOL {
            return Err(Error::InvalidState(format!(
                "|kappa|^2 = {} exceeds p10 * p01 = {}",
                self.kappa.norm_sqr(),
                self.p10 * self.p01
            )));
        }
        Ok(())
    }

    /// State generated by `c1 |10> + c2 |01> + (vacuum remainder) |00>`.
    pub fn from_amplitudes(c1: Complex64, c2: Complex64) -> Result<Self> {
        let p10 = c1.norm_sqr();
        let p01 = c2.norm_sqr();
        Self::new(1.0 - p10 - p01, p10, p01, 0.0, c1 * c2.conj())
    }

    /// Dense 4x4 matrix in the `{|11>, |10>, |01>, |00>}` basis.
    pub fn to_matrix(&self) -> [[Complex64; 4]; 4] {
        let mut m = [[ZERO; 4]; 4];
        m[0][0] = self.p11.into();
        m[1][1] = self.p10.into();
        m[2][2] = self.p01.into();
        m[3][3] = self.p00.into();
        m[1][2] = self.kappa;
        m[2][1] = self.kappa.conj();
        m
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }
}

/// Population difference `a` and coherence difference `b` of an initial pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairParams {
    pub a: f64,
    pub b: Complex64,
}

impl PairParams {
    pub fn new(a: f64, b: Complex64) -> Self {
        Self { a, b }
    }

    /// `a = 0, b = 1`: the `|+>, |->` pair.
    pub fn canonical() -> Self {
        Self::new(0.0, Complex64::new(1.0, 0.0))
    }

    pub fn is_degenerate(&self) -> bool {
        self.a == 0.0 && self.b == ZERO
    }
}

/// Trace distance `||rho1 - rho2||_1 / 2`, by the closed-form eigenvalues of
/// the 2x2 Hermitian difference.
pub fn trace_distance(rho1: &DensityMatrix2, rho2: &DensityMatrix2) -> Result<f64> {
    for rho in [rho1, rho2] {
        let m = rho.matrix();
        let herm = (m[0][1] - m[1][0].conj()).norm();
        if herm > STATE_TOL || m[0][0].im.abs() > STATE_TOL || m[1][1].im.abs() > STATE_TOL {
            return Err(Error::InvalidState(format!(
                "non-Hermitian argument (mismatch {herm:.3e})"
            )));
        }
    }
    let p = rho1.m[0][0].re - rho2.m[0][0].re;
    let q = rho1.m[1][1].re - rho2.m[1][1].re;
    let beta = rho1.m[0][1] - rho2.m[0][1];
    Ok(hermitian2_half_trace_norm(p, q, beta))
}

/// Half trace norm of `[[p, beta], [beta*, q]]`.
pub(crate) fn hermitian2_half_trace_norm(p: f64, q: f64, beta: Complex64) -> f64 {
    let mean = 0.5 * (p + q);
    let radius = (0.25 * (p - q) * (p - q) + beta.norm_sqr()).sqrt();
    0.5 * ((mean + radius).abs() + (mean - radius).abs())
}

/// Concurrence of an X state: `max(0, 2 (|kappa| - sqrt(p00 p11)))`.
pub fn concurrence_x(rho: &XState4) -> f64 {
    let outer = (rho.p00.max(0.0) * rho.p11.max(0.0)).sqrt();
    (2.0 * (rho.kappa.norm() - outer)).max(0.0)
}

pub fn bloch_to_density(r: &BlochVector) -> Result<DensityMatrix2> {
    let n = r.norm();
    if !n.is_finite() || n > 1.0 + STATE_TOL {
        return Err(Error::InvalidBloch(n));
    }
    Ok(DensityMatrix2::from_parts_unchecked(
        0.5 * (1.0 + r.z),
        Complex64::new(0.5 * r.x, -0.5 * r.y),
    ))
}

pub fn pair_to_ab(rho1: &DensityMatrix2, rho2: &DensityMatrix2) -> PairParams {
    PairParams {
        a: rho1.excited_population() - rho2.excited_population(),
        b: rho1.coherence() - rho2.coherence(),
    }
}
