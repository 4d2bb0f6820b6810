//! Fixtures shared by the benchmarks.

use nmq_core::{dephasing_trace, solve_g, CorrelationKernel, GTrace, SpectralDensityModel, TimeGrid};

/// Strong-coupling Lorentzian (`gamma0 = 10 lambda`) on `[0, t_max]`.
pub fn strong_jc(t_max: f64, dt: f64) -> GTrace {
    let model = SpectralDensityModel::lorentzian(10.0, 1.0, 0.0).unwrap();
    let kernel = CorrelationKernel::from_model(&model).unwrap();
    solve_g(&kernel, &TimeGrid::new(t_max, dt).unwrap()).unwrap()
}

/// Super-Ohmic (`s = 3`) zero-temperature dephasing on `[0, t_max]`.
pub fn super_ohmic(t_max: f64, dt: f64) -> nmq_core::DephasingTrace {
    let model = SpectralDensityModel::ohmic(1.0, 1.0, 3.0, 0.0).unwrap();
    dephasing_trace(&model, &TimeGrid::new(t_max, dt).unwrap()).unwrap()
}
