//! Independent reference values used by the integration tests.
#![allow(dead_code)]

use num_complex::Complex64;

/// Closed-form `G(t)` for a Lorentzian kernel `(g0 l / 2) e^{-l|t|} e^{i D t}`:
/// `G = e^{-a t/2} [cosh(d t/2) + (a/d) sinh(d t/2)]`, `a = l - iD`,
/// `d = sqrt(a^2 - 2 g0 l)`.
pub fn g_closed(gamma0: f64, lambda: f64, detuning: f64, t: f64) -> Complex64 {
    let a = Complex64::new(lambda, -detuning);
    let d = (a * a - 2.0 * gamma0 * lambda).sqrt();
    let h = d * (0.5 * t);
    let ratio = if d.norm() < 1e-12 {
        // d -> 0 limit: sinh(d t/2) / d -> t/2
        a * (0.5 * t)
    } else {
        a / d * h.sinh()
    };
    (-a * (0.5 * t)).exp() * (h.cosh() + ratio)
}

/// `G` from RK4 on the equivalent ODE pair `G' = -H`,
/// `H' = f(0) G - (l - iD) H` (exact for an exponential kernel), sampled
/// every `stride` steps of size `h`.
pub fn g_rk4(gamma0: f64, lambda: f64, detuning: f64, h: f64, steps: usize, stride: usize) -> Vec<Complex64> {
    let f0 = 0.5 * gamma0 * lambda;
    let decay = Complex64::new(lambda, -detuning);
    let rhs = |g: Complex64, q: Complex64| (-q, g * f0 - decay * q);
    let (mut g, mut q) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
    let mut out = vec![g];
    for n in 1..=steps {
        let (k1g, k1q) = rhs(g, q);
        let (k2g, k2q) = rhs(g + k1g * (0.5 * h), q + k1q * (0.5 * h));
        let (k3g, k3q) = rhs(g + k2g * (0.5 * h), q + k2q * (0.5 * h));
        let (k4g, k4q) = rhs(g + k3g * h, q + k3q * h);
        g += (k1g + k2g * 2.0 + k3g * 2.0 + k4g) * (h / 6.0);
        q += (k1q + k2q * 2.0 + k3q * 2.0 + k4q) * (h / 6.0);
        if n % stride == 0 {
            out.push(g);
        }
    }
    out
}

/// Bisection root of `f` on `[a, b]` (sign change required).
pub fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let fa = f(a);
    assert!(fa * f(b) < 0.0, "no sign change");
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if (f(m) > 0.0) == (fa > 0.0) {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// First zero of the resonant strong-coupling `G` (real-valued there).
pub fn first_zero(gamma0: f64, lambda: f64) -> f64 {
    // Scan for the first sign change, then bisect.
    let g = |t: f64| g_closed(gamma0, lambda, 0.0, t).re;
    let h = 1e-3 / lambda;
    let mut t = h;
    while g(t) > 0.0 {
        t += h;
    }
    bisect(g, t - h, t)
}

/// Zero-temperature Ohmic closed forms `Gamma_p(x)` with `x = wc t`, `eta = 1`.
pub fn big_gamma_p_closed(s: u32, x: f64) -> f64 {
    let x2 = x * x;
    match s {
        1 => -0.5 * (1.0 + x2).ln(),
        2 => -x2 / (1.0 + x2),
        3 => -(1.0 - (1.0 - x2) / ((1.0 + x2) * (1.0 + x2))),
        4 => {
            let z = Complex64::new(1.0, -x);
            -2.0 * (1.0 - (1.0 / (z * z * z)).re)
        }
        _ => panic!("no closed form for s = {s}"),
    }
}

/// `gamma_p = -(1/2) dGamma_p/dt` for the closed forms, `omega_c = 1`.
pub fn gamma_p_closed(s: u32, x: f64) -> f64 {
    let x2 = x * x;
    match s {
        1 => 0.5 * x / (1.0 + x2),
        2 => x / ((1.0 + x2) * (1.0 + x2)),
        3 => -x * (x2 - 3.0) / (1.0 + x2).powi(3),
        4 => {
            // d/dx Re(1/(1 - ix)^3) = Re(3i / (1 - ix)^4)
            let z = Complex64::new(1.0, -x);
            let dz = (Complex64::new(0.0, 3.0) / (z * z * z * z)).re;
            -dz
        }
        _ => panic!("no closed form for s = {s}"),
    }
}

/// Composite Simpson brute force of `-int_0^W w^{s-2} e^{-w} (1 - cos w t) dw`
/// (Ohmic, `eta = omega_c = 1`, `T = 0`) on a very fine uniform mesh.
pub fn big_gamma_p_brute(s: f64, t: f64) -> f64 {
    let upper = 60.0;
    let n = 2_000_000usize;
    let h = upper / n as f64;
    let f = |w: f64| {
        if w == 0.0 {
            if s == 0.0 { 0.5 * t * t } else { 0.0 }
        } else {
            let half = (0.5 * w * t).sin();
            w.powf(s - 2.0) * (-w).exp() * 2.0 * half * half
        }
    };
    let mut acc = f(0.0) + f(upper);
    for i in 1..n {
        let w = i as f64 * h;
        acc += if i % 2 == 1 { 4.0 } else { 2.0 } * f(w);
    }
    -acc * h / 3.0
}
