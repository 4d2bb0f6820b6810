use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nmq_cli::{run, sweep, write_run, write_sweep, Failure, Overrides, RunConfig};
use nmq_core::ModelKind;

const UNITS: &str = "Units: hbar = k_B = 1. Rates, frequencies and temperature share one \
unit and times use its inverse; set lambda = 1 (jc) or omega_c = 1 (dephasing) to read every \
result in units of the bath width or cutoff. The convention is echoed in report.json.";

#[derive(Parser)]
#[command(name = "nmq", version, about = "Non-Markovianity measures for a qubit in a bath", after_help = UNITS)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute one trace, its measures and curves; writes trace.csv, curves.csv, report.json.
    Run(Common),
    /// Evaluate the measures over the config's axes; writes sweep.csv.
    Sweep(Common),
    /// Parse and validate the config only.
    Validate(Common),
}

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    Jc,
    Dephasing,
}

#[derive(Args)]
struct Common {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    #[arg(long, value_enum)]
    model: Option<Model>,
    /// Final time, in inverse rate units.
    #[arg(long)]
    t_max: Option<f64>,
    #[arg(long)]
    dt: Option<f64>,
    /// Seed for sweep_pairs.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    output_dir: Option<PathBuf>,
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    jobs: Option<u32>,
}

impl Common {
    fn load(&self) -> Result<RunConfig, Failure> {
        let mut cfg = RunConfig::load(&self.config)?;
        cfg.apply(&Overrides {
            model: self.model.map(|m| match m {
                Model::Jc => ModelKind::JaynesCummings,
                Model::Dephasing => ModelKind::Dephasing,
            }),
            t_max: self.t_max,
            dt: self.dt,
            seed: self.seed,
            output_dir: self.output_dir.clone(),
        })?;
        Ok(cfg)
    }
}

fn execute(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Run(c) => {
            let cfg = c.load()?;
            let out = match c.jobs {
                Some(j) => rayon::ThreadPoolBuilder::new()
                    .num_threads(j as usize)
                    .build()
                    .map_err(|e| Failure::Config(e.to_string()))?
                    .install(|| run(&cfg)),
                None => run(&cfg),
            }?;
            for p in write_run(&cfg, &out)? {
                println!("wrote {}", p.display());
            }
            let r = &out.report;
            println!(
                "N = {}  I_E = {}  I = {}{}  verdict = {}",
                r.blp.value,
                r.entanglement.value,
                r.divisibility.value,
                if r.divisibility.divergent { " (lower bound, divergent)" } else { "" },
                r.equivalence.verdict
            );
        }
        Command::Sweep(c) => {
            let cfg = c.load()?;
            let out = sweep(&cfg, c.jobs.map(|j| j as usize))?;
            for p in write_sweep(&cfg, &out)? {
                println!("wrote {} ({} points)", p.display(), out.points.len());
            }
        }
        Command::Validate(c) => {
            let cfg = c.load()?;
            if cfg.axes.is_empty() {
                cfg.validate()?;
            } else {
                cfg.validate_sweep()?;
            }
            println!("{}: ok", c.config.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("nmq: {f}");
            ExitCode::from(f.exit_code() as u8)
        }
    }
}
