use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use folner_lab::{run, ExperimentConfig, ExperimentKind, LabError, ReportFormat};

/// Run one experiment and emit its report.
///
/// Exit status is 0 whenever the experiment completes, whatever its
/// verdicts; errors (bad config, budget, I/O) exit with 1.
#[derive(Parser, Debug)]
#[command(name = "folner", version)]
struct Cli {
    /// example1, example2, zinfty_counterexample, weyl_vdc,
    /// bernoulli_disjointness, recurrence, joint_ergodicity_demo,
    /// spectral_classify
    experiment: String,
    /// Config file (`key = value` lines).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// table_text or structured_text.
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Largest admissible |F_N|.
    #[arg(long)]
    budget: Option<u64>,
    /// Override a config key, `key=value`; repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Record wall-clock time in the report (breaks byte reproducibility).
    #[arg(long)]
    timing: bool,
}

fn main() -> ExitCode {
    match real_main(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("folner: {e}");
            ExitCode::FAILURE
        }
    }
}

fn real_main(cli: Cli) -> Result<(), LabError> {
    let kind: ExperimentKind = cli.experiment.parse()?;
    let mut config = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| LabError::Io { path: path.clone(), source })?;
            let c = ExperimentConfig::parse(&text)?;
            if c.kind() != kind {
                return Err(LabError::Config(format!("{} is a {} config, not {kind}", path.display(), c.kind())));
            }
            c
        }
        None => ExperimentConfig::new(kind),
    };
    for kv in &cli.set {
        let (k, v) = kv.split_once('=').ok_or_else(|| LabError::Config(format!("--set expects key=value, got {kv:?}")))?;
        config.set(k.trim(), v)?;
    }
    if let Some(f) = &cli.format {
        config.set("format", f)?;
    }
    if let Some(s) = cli.seed {
        config.set("seed", &s.to_string())?;
    }
    if let Some(b) = cli.budget {
        config.set("budget", &b.to_string())?;
    }
    if let Some(o) = &cli.out {
        config.set("out", &o.display().to_string())?;
    }
    let format: ReportFormat = config.format()?;

    let start = Instant::now();
    let mut report = run(&config)?;
    if cli.timing {
        report.wall_clock_seconds = Some(start.elapsed().as_secs_f64());
    }
    match config.out() {
        Some(path) => report.write(format, &PathBuf::from(path)),
        None => {
            print!("{}", report.render(format)?);
            Ok(())
        }
    }
}
