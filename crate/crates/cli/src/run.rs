//! Single run: trace, measures, curves and report.

use std::fs;
use std::path::{Path, PathBuf};

use nmq_core::measures::{choi_curve, trace_distance_curve};
use nmq_core::spectral::CorrelationKernel;
use nmq_core::{
    analyze, concurrence_x, dephasing_trace, jc::solve_g_samples, AnalysisOptions, ChoiReference,
    DecoherenceTrace, DephasingTrace, GTrace, MeasureReport, ModelKind, PairParams,
};
use serde::Serialize;

use crate::config::{RunConfig, Units};
use crate::output::{fmt_num, fmt_opt, to_json, Csv};
use crate::{Failure, FORMAT_VERSION};

pub enum Trace {
    Jc(GTrace),
    Dephasing(DephasingTrace),
}

impl Trace {
    pub fn as_dyn(&self) -> &dyn DecoherenceTrace {
        match self {
            Self::Jc(t) => t,
            Self::Dephasing(t) => t,
        }
    }
}

/// Builds the decoherence trace for a validated config.
pub fn build_trace(cfg: &RunConfig) -> Result<Trace, Failure> {
    let grid = cfg.time_grid()?;
    let model = cfg.spectral_model()?;
    Ok(match cfg.model {
        ModelKind::JaynesCummings => {
            let kernel = CorrelationKernel::from_model(&model)?;
            let g = solve_g_samples(&kernel, &grid)?;
            Trace::Jc(GTrace::from_samples(grid, g, cfg.g_floor)?)
        }
        ModelKind::Dephasing => Trace::Dephasing(dephasing_trace(&model, &grid)?),
    })
}

pub fn analysis_options(cfg: &RunConfig) -> AnalysisOptions {
    AnalysisOptions {
        pair: cfg.pair.map(|p| p.params()),
        sweep: cfg.sweep_pairs.map(|s| (s.n_pairs, s.seed)),
        eps_schedule: cfg.eps_schedule.clone(),
    }
}

#[derive(Serialize)]
struct ReportFile<'a> {
    format_version: u32,
    config: &'a RunConfig,
    units: Units,
    report: &'a MeasureReport,
}

pub struct RunOutput {
    pub report: MeasureReport,
    pub trace_csv: String,
    pub curves_csv: String,
    pub report_json: String,
}

fn trace_csv(trace: &Trace) -> String {
    match trace {
        Trace::Jc(t) => {
            let mut csv = Csv::new(&["t", "re_g", "im_g", "gamma", "big_gamma", "s"]);
            let flags = t.divergent();
            for (k, time) in t.grid().times().enumerate() {
                let rate = |x: f64| if flags[k] { fmt_opt(None) } else { fmt_opt(Some(x)) };
                csv.row([
                    fmt_num(time),
                    fmt_num(t.g()[k].re),
                    fmt_num(t.g()[k].im),
                    rate(t.gamma()[k]),
                    fmt_num(t.big_gamma()[k]),
                    rate(t.shift()[k]),
                ]);
            }
            csv.finish()
        }
        Trace::Dephasing(t) => {
            let mut csv = Csv::new(&["t", "gamma_p", "big_gamma_p"]);
            for (k, time) in t.grid().times().enumerate() {
                csv.row([fmt_num(time), fmt_num(t.gamma_p()[k]), fmt_num(t.big_gamma_p()[k])]);
            }
            csv.finish()
        }
    }
}

fn curves_csv(trace: &dyn DecoherenceTrace, pair: &PairParams, eps: &[f64]) -> Result<String, Failure> {
    let d = trace_distance_curve(trace, pair);
    let g = choi_curve(trace, eps, ChoiReference::Standard)?;
    let mut csv = Csv::new(&["t", "trace_distance", "concurrence", "g_choi"]);
    for (k, time) in trace.grid().times().enumerate() {
        let c = concurrence_x(&trace.joint_state(k)?);
        csv.row([fmt_num(time), fmt_num(d[k]), fmt_num(c), fmt_opt(g[k])]);
    }
    Ok(csv.finish())
}

/// Computes everything for one config; nothing touches the file system.
pub fn run(cfg: &RunConfig) -> Result<RunOutput, Failure> {
    cfg.validate()?;
    let trace = build_trace(cfg)?;
    let report = analyze(trace.as_dyn(), &analysis_options(cfg))?;
    let trace_csv = trace_csv(&trace);
    let curves_csv = curves_csv(trace.as_dyn(), &report.pair, &cfg.eps_schedule)?;
    let report_json = to_json(&ReportFile {
        format_version: FORMAT_VERSION,
        config: cfg,
        units: cfg.units(),
        report: &report,
    });
    Ok(RunOutput { report, trace_csv, curves_csv, report_json })
}

pub(crate) fn write_files(dir: &Path, files: &[(&str, &str)]) -> Result<Vec<PathBuf>, Failure> {
    let io = |e: std::io::Error| Failure::Config(format!("cannot write to {}: {e}", dir.display()));
    fs::create_dir_all(dir).map_err(io)?;
    files
        .iter()
        .map(|(name, text)| {
            let path = dir.join(name);
            fs::write(&path, text).map_err(io)?;
            Ok(path)
        })
        .collect()
}

pub fn write_run(cfg: &RunConfig, out: &RunOutput) -> Result<Vec<PathBuf>, Failure> {
    write_files(
        &cfg.output_dir,
        &[
            ("trace.csv", &out.trace_csv),
            ("curves.csv", &out.curves_csv),
            ("report.json", &out.report_json),
        ],
    )
}
