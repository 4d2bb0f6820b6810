mod common;

use common::{big_gamma_p_closed, first_zero, g_closed, gamma_p_closed};
use nmq_core::grid::finite_derivative;
use nmq_core::measures::{
    blp_measure, choi_curve, choi_g, choi_threshold, entanglement_rate_integral, pair_sweep,
    rhp_divisibility_measure, rhp_entanglement_measure, trace_distance_curve, BlpMode,
    ChoiReference, DEFAULT_EPS_SCHEDULE,
};
use nmq_core::{
    analyze, dephasing_trace, derive_rates, solve_g, AnalysisOptions, CorrelationKernel,
    DecoherenceTrace, DephasingTrace, Error, GTrace, Generator, PairParams, SpectralDensityModel,
    TimeGrid,
};
use num_complex::Complex64;

fn jc(gamma0: f64, t_max: f64) -> GTrace {
    let model = SpectralDensityModel::lorentzian(gamma0, 1.0, 0.0).unwrap();
    let kernel = CorrelationKernel::from_model(&model).unwrap();
    solve_g(&kernel, &TimeGrid::new(t_max, 1e-3).unwrap()).unwrap()
}

fn ohmic(s: f64, t_max: f64) -> DephasingTrace {
    let model = SpectralDensityModel::ohmic(1.0, 1.0, s, 0.0).unwrap();
    dephasing_trace(&model, &TimeGrid::new(t_max, 1e-3).unwrap()).unwrap()
}

#[test]
fn markovian_configurations_have_no_measure() {
    let weak = jc(0.1, 20.0);
    let s1 = ohmic(1.0, 10.0);
    let traces: [&dyn DecoherenceTrace; 2] = [&weak, &s1];
    for trace in traces {
        let r = analyze(trace, &AnalysisOptions::default()).unwrap();
        for m in [&r.blp, &r.blp_formula, &r.entanglement, &r.divisibility] {
            assert!(m.value.abs() <= 1e-9 && !m.divergent && m.intervals.is_empty());
        }
        assert!(r.equivalence.verdict);
        assert_eq!(r.equivalence.distance, Some(0.0));
    }
}

#[test]
fn strong_coupling_jc_equivalence() {
    let trace = jc(10.0, 10.0);
    let dt = 1e-3;
    let r = analyze(&trace, &AnalysisOptions::default()).unwrap();
    assert!(r.equivalence.verdict, "{:?}", r.equivalence);
    assert!(!r.blp.intervals.is_empty());
    let t0 = first_zero(10.0, 1.0);
    for m in [&r.blp, &r.entanglement, &r.divisibility] {
        assert!((m.intervals.as_slice()[0].0 - t0).abs() <= 2.0 * dt);
    }
    assert!(r.blp.value > 0.0 && r.blp.value.is_finite() && !r.blp.divergent);
    assert!(r.entanglement.value > 0.0 && !r.entanglement.divergent);
    assert!(r.divisibility.divergent);
    // The rate-sign intervals agree as well.
    assert!(r.rate_intervals.matches(&r.blp.intervals, 2.0 * dt));
}

#[test]
fn divisibility_lower_bound_grows_as_floor_drops() {
    let trace = jc(10.0, 10.0);
    let mut last = 0.0;
    for floor in [1e-4, 1e-6, 1e-8] {
        let t = derive_rates(&trace, floor).unwrap();
        let m = rhp_divisibility_measure(&t, &DEFAULT_EPS_SCHEDULE).unwrap();
        assert!(m.divergent);
        assert!(m.value > last, "floor {floor}: {} <= {last}", m.value);
        last = m.value;
    }
}

#[test]
fn entanglement_telescopes_against_closed_form_jc() {
    let trace = jc(10.0, 10.0);
    let m = rhp_entanglement_measure(&trace).unwrap();
    let oracle: f64 = m
        .intervals
        .iter()
        .map(|&(s, e)| 2.0 * (g_closed(10.0, 1.0, 0.0, e).norm() - g_closed(10.0, 1.0, 0.0, s).norm()))
        .sum();
    // Endpoint values carry the solver error of G (about 1e-6 each).
    assert!((m.value - oracle).abs() < 2e-5, "{} vs {oracle}", m.value);
    let own: f64 = m.intervals.iter().map(|&(s, e)| 2.0 * (trace.concurrence_at(e) - trace.concurrence_at(s))).sum();
    assert!((m.value - own).abs() < 1e-12);
    let rate_form = entanglement_rate_integral(&trace).unwrap();
    assert!((rate_form - m.value).abs() < 1e-5 * m.value, "{rate_form} vs {}", m.value);
}

#[test]
fn super_ohmic_telescoping() {
    let trace = ohmic(3.0, 10.0);
    let r = analyze(&trace, &AnalysisOptions::default()).unwrap();
    assert!(r.equivalence.verdict, "{:?}", r.equivalence);
    assert_eq!(r.entanglement.intervals.len(), 1);
    let e_oracle: f64 = r
        .entanglement
        .intervals
        .iter()
        .map(|&(s, e)| 2.0 * (big_gamma_p_closed(3, e).exp() - big_gamma_p_closed(3, s).exp()))
        .sum();
    assert!((r.entanglement.value - e_oracle).abs() < 1e-8);
    let i_oracle: f64 = r
        .divisibility
        .intervals
        .iter()
        .map(|&(s, e)| big_gamma_p_closed(3, e) - big_gamma_p_closed(3, s))
        .sum();
    assert!((r.divisibility.value - i_oracle).abs() < 1e-8);
    assert!(!r.divisibility.divergent);
    let rate_form = entanglement_rate_integral(&trace).unwrap();
    assert!((rate_form - r.entanglement.value).abs() < 1e-6);
}

#[test]
fn half_relation_in_both_models() {
    let strong = jc(10.0, 10.0);
    let s3 = ohmic(3.0, 10.0);
    let traces: [&dyn DecoherenceTrace; 2] = [&strong, &s3];
    for trace in traces {
        let n = blp_measure(trace, &PairParams::canonical(), BlpMode::Direct).unwrap();
        let e = rhp_entanglement_measure(trace).unwrap();
        assert!((n.value - 0.5 * e.value).abs() < 1e-8);
    }
    // The printed rate form drops a factor 1/2 on the |b|^2 term for
    // Jaynes-Cummings only.
    let f = blp_measure(&strong, &PairParams::canonical(), BlpMode::Formula).unwrap();
    let e = rhp_entanglement_measure(&strong).unwrap();
    assert!((f.value / e.value - 1.0).abs() < 1e-5);
    let f = blp_measure(&s3, &PairParams::canonical(), BlpMode::Formula).unwrap();
    let e = rhp_entanglement_measure(&s3).unwrap();
    assert!((f.value / (0.5 * e.value) - 1.0).abs() < 1e-5);
}

#[test]
fn blp_modes_share_intervals() {
    let strong = jc(10.0, 10.0);
    let s3 = ohmic(3.0, 10.0);
    let traces: [&dyn DecoherenceTrace; 2] = [&strong, &s3];
    for trace in traces {
        for pair in [
            PairParams::canonical(),
            PairParams::new(0.6, Complex64::new(0.3, -0.2)),
            PairParams::new(-0.2, Complex64::new(0.0, 0.1)),
        ] {
            let d = blp_measure(trace, &pair, BlpMode::Direct).unwrap();
            let f = blp_measure(trace, &pair, BlpMode::Formula).unwrap();
            assert!(d.intervals.matches(&f.intervals, 2e-3));
        }
    }
    assert_eq!(
        blp_measure(&strong, &PairParams::new(0.0, Complex64::new(0.0, 0.0)), BlpMode::Direct),
        Err(Error::DegeneratePair)
    );
}

#[test]
fn choi_matches_closed_rates() {
    let strong = jc(10.0, 10.0);
    let s3 = ohmic(3.0, 10.0);
    let traces: [&dyn DecoherenceTrace; 2] = [&strong, &s3];
    for trace in traces {
        let factor = match trace.generator(0) {
            Generator::JaynesCummings { .. } => 1.0,
            Generator::Dephasing { .. } => 2.0,
        };
        let good: Vec<usize> = (0..trace.grid().len()).filter(|&k| !trace.divergent()[k]).collect();
        let stride = good.len() / 100;
        let mut negatives = 0;
        for &k in good.iter().step_by(stride).take(100) {
            let g = choi_g(&trace.generator(k), &DEFAULT_EPS_SCHEDULE, ChoiReference::Standard).unwrap();
            let expected = (-factor * trace.rate()[k]).max(0.0);
            if expected > 0.0 {
                negatives += 1;
                assert!((g - expected).abs() <= 1e-6 * expected, "k = {k}: {g} vs {expected}");
            } else {
                assert!(g <= 1e-9, "k = {k}: {g}");
            }
        }
        assert!(negatives > 10);
    }
}

#[test]
fn choi_reference_state_is_irrelevant_along_traces() {
    let trace = jc(10.0, 4.0);
    let a = choi_curve(&trace, &DEFAULT_EPS_SCHEDULE, ChoiReference::Standard).unwrap();
    let b = choi_curve(&trace, &DEFAULT_EPS_SCHEDULE, ChoiReference::Ancilla).unwrap();
    for (x, y) in a.iter().zip(&b) {
        match (x, y) {
            (Some(x), Some(y)) => assert!((x - y).abs() <= 1e-9 * x.max(1.0)),
            (None, None) => {}
            _ => panic!("divergence flags differ"),
        }
    }
}

#[test]
fn sample_level_sign_equivalence() {
    let strong = jc(10.0, 10.0);
    let s3 = ohmic(3.0, 10.0);
    let traces: [&dyn DecoherenceTrace; 2] = [&strong, &s3];
    let pair = PairParams::new(0.4, Complex64::new(0.5, 0.3));
    for trace in traces {
        let grid = *trace.grid();
        let n = grid.len();
        let dd = finite_derivative(&trace_distance_curve(trace, &pair), grid.dt());
        let c: Vec<f64> = (0..n).map(|k| trace.coherence_factor(k).norm()).collect();
        let dc = finite_derivative(&c, grid.dt());
        let g = choi_curve(trace, &DEFAULT_EPS_SCHEDULE, ChoiReference::Standard).unwrap();
        let rate = trace.rate();
        // Skip samples next to a sign change or a flag: there the
        // finite-difference slope straddles the crossing.
        let settled = |k: usize| {
            let lo = k.saturating_sub(2);
            let hi = (k + 2).min(n - 1);
            (lo..=hi).all(|j| !trace.divergent()[j] && (rate[j] < 0.0) == (rate[k] < 0.0))
                && rate[k].abs() > 1e-6
        };
        let mut checked = 0;
        for k in 1..n - 1 {
            if !settled(k) {
                continue;
            }
            let neg = rate[k] < 0.0;
            assert_eq!(dd[k] > 0.0, neg, "dD/dt at k = {k}");
            assert_eq!(dc[k] > 0.0, neg, "dC/dt at k = {k}");
            assert_eq!(g[k].unwrap() > choi_threshold(&trace.generator(k)), neg, "g at k = {k}");
            checked += 1;
        }
        assert!(checked > n / 2);
    }
}

#[test]
fn sweep_on_markovian_trace() {
    let weak = jc(0.1, 5.0);
    let s = pair_sweep(&weak, 20, 7).unwrap();
    assert!(s.invariant && s.canonical_attains_max);
    assert_eq!(s.max_value, 0.0);
    assert!(s.canonical_intervals.is_empty());
    assert_eq!(pair_sweep(&weak, 1, 7), Err(Error::SweepTooSmall(1)));
}

#[test]
fn sweep_is_deterministic_and_invariant() {
    let strong = jc(10.0, 6.0);
    let a = pair_sweep(&strong, 50, 42).unwrap();
    let b = pair_sweep(&strong, 50, 42).unwrap();
    assert_eq!(a, b);
    assert!(a.invariant, "{:?}", a.max_interval_distance);
    assert!(a.canonical_attains_max, "{} vs {}", a.canonical_value, a.refined_value);
}

#[test]
fn dephasing_rates_match_closed_form_signs() {
    let s3 = ohmic(3.0, 10.0);
    for k in (0..s3.grid().len()).step_by(97) {
        let t = s3.grid().time(k);
        assert!((s3.gamma_p()[k] - gamma_p_closed(3, t)).abs() < 1e-8);
    }
}
