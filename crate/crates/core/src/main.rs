use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use dispersive_jcm::app::{self, AppError, Mode, RunConfig};

/// Closed-form and master-equation dynamics of a dispersive atom in a driven,
/// damped cavity. Time is measured in units of 1/omega (omega = 1 unless set
/// in the config file).
#[derive(Debug, Parser)]
#[command(version)]
struct Cli {
    /// Flat key = value configuration file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// trace | figures | critical | verify
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    k_over_omega: Option<f64>,
    #[arg(long)]
    f_over_k: Option<f64>,
    /// End of the time grid in units of pi/omega.
    #[arg(long)]
    t_max_pi: Option<f64>,
    #[arg(long)]
    points: Option<usize>,
    /// Also integrate the master equation.
    #[arg(long)]
    oracle: bool,
    /// Output file (directory in figures mode).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn config(cli: Cli) -> Result<RunConfig, AppError> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::from_file(p)?,
        None => RunConfig::default(),
    };
    if let Some(m) = cli.mode {
        cfg.mode = m.parse()?;
    }
    if let Some(v) = cli.k_over_omega {
        cfg.k_over_omega = v;
    }
    if let Some(v) = cli.f_over_k {
        cfg.f_over_k = v;
    }
    if let Some(v) = cli.t_max_pi {
        cfg.t_max_pi = v;
    }
    if let Some(v) = cli.points {
        cfg.points = v;
    }
    if cli.oracle {
        cfg.oracle = true;
    }
    if cli.out.is_some() {
        cfg.out = cli.out;
    }
    Ok(cfg)
}

fn run(cfg: &RunConfig) -> Result<bool, AppError> {
    match cfg.mode {
        Mode::Trace => {
            let p = app::run_trace(cfg)?;
            println!("{}", p.display());
        }
        Mode::Figures => {
            for p in app::run_figures(cfg)? {
                println!("{}", p.display());
            }
        }
        Mode::Critical => {
            let p = app::run_critical(cfg)?;
            println!("{}", p.display());
        }
        Mode::Verify => {
            let (report, path) = app::run_verify(cfg)?;
            print!("{}", report.render());
            println!("report: {}", path.display());
            return Ok(report.passed());
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = config(cli).and_then(|cfg| run(&cfg));
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
