//! Parameter sweeps over one or two config axes.

use std::path::PathBuf;

use nmq_core::{analyze, MeasureReport};
use rayon::prelude::*;

use crate::config::RunConfig;
use crate::output::{fmt_num, Csv};
use crate::run::{analysis_options, build_trace, write_files};
use crate::Failure;

pub struct SweepPoint {
    pub values: Vec<f64>,
    pub report: MeasureReport,
}

pub struct SweepOutput {
    pub points: Vec<SweepPoint>,
    pub sweep_csv: String,
}

/// Grid points in lexicographic axis order (first axis slowest).
pub fn axis_points(cfg: &RunConfig) -> Vec<Vec<f64>> {
    cfg.axes.iter().fold(vec![Vec::new()], |acc, axis| {
        acc.into_iter()
            .flat_map(|prefix| {
                axis.values.iter().map(move |&v| {
                    let mut p = prefix.clone();
                    p.push(v);
                    p
                })
            })
            .collect()
    })
}

fn evaluate(cfg: &RunConfig, values: &[f64]) -> Result<MeasureReport, Failure> {
    let mut point = cfg.clone();
    for (axis, &v) in cfg.axes.iter().zip(values) {
        point.set_param(&axis.param, v)?;
    }
    point.validate()?;
    let trace = build_trace(&point)?;
    Ok(analyze(trace.as_dyn(), &analysis_options(&point))?)
}

/// Evaluates every axis point on at most `jobs` threads (all cores when
/// `None`); results keep axis order regardless of scheduling.
pub fn sweep(cfg: &RunConfig, jobs: Option<usize>) -> Result<SweepOutput, Failure> {
    cfg.validate_sweep()?;
    let grid = axis_points(cfg);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| Failure::Config(format!("cannot start worker pool: {e}")))?;
    let reports: Vec<MeasureReport> = pool.install(|| {
        grid.par_iter().map(|values| evaluate(cfg, values)).collect::<Result<_, _>>()
    })?;

    let mut header: Vec<&str> = cfg.axes.iter().map(|a| a.param.as_str()).collect();
    header.extend(["N", "I_E", "I", "I_divergent", "verdict"]);
    let mut csv = Csv::new(&header);
    for (values, r) in grid.iter().zip(&reports) {
        let mut cells: Vec<String> = values.iter().map(|&v| fmt_num(v)).collect();
        cells.push(fmt_num(r.blp.value));
        cells.push(fmt_num(r.entanglement.value));
        cells.push(fmt_num(r.divisibility.value));
        cells.push(r.divisibility.divergent.to_string());
        cells.push(r.equivalence.verdict.to_string());
        csv.row(cells);
    }
    let points = grid
        .into_iter()
        .zip(reports)
        .map(|(values, report)| SweepPoint { values, report })
        .collect();
    Ok(SweepOutput { points, sweep_csv: csv.finish() })
}

pub fn write_sweep(cfg: &RunConfig, out: &SweepOutput) -> Result<Vec<PathBuf>, Failure> {
    write_files(&cfg.output_dir, &[("sweep.csv", &out.sweep_csv)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Axis;

    #[test]
    fn lexicographic_order() {
        let mut cfg = RunConfig::from_json(
            r#"{"model": "dephasing",
                "spectral": {"kind": "ohmic", "eta": 0.1, "omega_c": 1.0, "s": 1.0},
                "grid": {"t_max": 1.0, "dt": 0.1},
                "pair": {"a": 0.0, "b_re": 1.0}}"#,
        )
        .unwrap();
        cfg.axes = vec![
            Axis { param: "s".into(), values: vec![1.0, 2.0] },
            Axis { param: "eta".into(), values: vec![0.1, 0.2, 0.3] },
        ];
        let p = axis_points(&cfg);
        assert_eq!(p.len(), 6);
        assert_eq!(p[0], vec![1.0, 0.1]);
        assert_eq!(p[2], vec![1.0, 0.3]);
        assert_eq!(p[3], vec![2.0, 0.1]);
    }
}
