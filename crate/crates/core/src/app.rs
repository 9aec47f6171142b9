//! Run configuration, CSV emission and the verify report behind the binary.
//!
//! CSV files are fully determined by the configuration: fixed column order,
//! every number as `{:.16e}` (17 significant digits) with `-0` written as
//! `0`, `\n` line endings, header first. Files are written to a sibling
//! `.partial` path and renamed, so a failed run leaves nothing behind.
//!
//! The time axis is `omega t / pi`.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::analytic::DEFAULT_GRID_DIVISIONS;
use crate::oracle::{self, IntegratorConfig, Oracle, OracleError, OracleRecord};
use crate::verify::{self, Report, VerifyOptions};
use crate::{AtomicAmplitudes, Model64, ModelError, ModelParams, TimeGrid, C64};

#[derive(Debug, Error)]
pub enum AppError {
    #[error("configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> AppError + '_ {
    move |source| AppError::Io { path: path.to_path_buf(), source }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Trace,
    Figures,
    Critical,
    Verify,
}

impl FromStr for Mode {
    type Err = AppError;

    fn from_str(s: &str) -> Result<Self, AppError> {
        match s {
            "trace" => Ok(Mode::Trace),
            "figures" => Ok(Mode::Figures),
            "critical" => Ok(Mode::Critical),
            "verify" => Ok(Mode::Verify),
            _ => Err(AppError::Config(format!("unknown mode `{s}` (trace, figures, critical, verify)"))),
        }
    }
}

/// `fig1_*` curves: `|F|/k = 1` and these `k/omega`.
pub const FIG1_K_OVER_OMEGA: [f64; 3] = [0.2, 1.0, 5.0];
/// `fig2_*` curves: `k/omega = 0.2` and these `|F|/k`.
pub const FIG2_F_OVER_K: [f64; 2] = [0.5, 2.0];

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub omega: f64,
    pub k_over_omega: f64,
    pub f_over_k: f64,
    /// Argument of the complex drive `F`.
    pub drive_phase: f64,
    /// Optional `(G, delta)` for the dispersive-validity warning.
    pub coupling: Option<f64>,
    pub detuning: Option<f64>,
    /// Grid end in units of `pi / omega`.
    pub t_max_pi: f64,
    pub points: usize,
    pub oracle: bool,
    pub out: Option<PathBuf>,
    pub integrator: IntegratorConfig,
    /// Root-bracketing steps per `pi / omega` in critical mode.
    pub grid_divisions: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            mode: Mode::Trace,
            omega: 1.0,
            k_over_omega: 0.2,
            f_over_k: 1.0,
            drive_phase: 0.0,
            coupling: None,
            detuning: None,
            t_max_pi: 4.0,
            points: 2001,
            oracle: false,
            out: None,
            integrator: IntegratorConfig::default(),
            grid_divisions: DEFAULT_GRID_DIVISIONS,
        }
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T, AppError> {
    value.parse().map_err(|_| AppError::Config(format!("bad value `{value}` for `{key}`")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool, AppError> {
    match value {
        "true" | "1" | "yes" | "on" => Ok(true),
        "false" | "0" | "no" | "off" => Ok(false),
        _ => Err(AppError::Config(format!("bad value `{value}` for `{key}`"))),
    }
}

impl RunConfig {
    pub fn figures_default() -> Self {
        RunConfig { mode: Mode::Figures, ..Default::default() }
    }

    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), AppError> {
        match key {
            "mode" => self.mode = value.parse()?,
            "omega" => self.omega = parse(key, value)?,
            "k_over_omega" => self.k_over_omega = parse(key, value)?,
            "f_over_k" => self.f_over_k = parse(key, value)?,
            "drive_phase" => self.drive_phase = parse(key, value)?,
            "coupling" => self.coupling = Some(parse(key, value)?),
            "detuning" => self.detuning = Some(parse(key, value)?),
            "t_max_pi" => self.t_max_pi = parse(key, value)?,
            "points" => self.points = parse(key, value)?,
            "oracle" => self.oracle = parse_bool(key, value)?,
            "out" => self.out = Some(PathBuf::from(value)),
            "rel_tol" => self.integrator.rel_tol = parse(key, value)?,
            "abs_tol" => self.integrator.abs_tol = parse(key, value)?,
            "max_step" => self.integrator.max_step = parse(key, value)?,
            "initial_step" => self.integrator.initial_step = parse(key, value)?,
            "grid_divisions" => self.grid_divisions = parse(key, value)?,
            _ => return Err(AppError::Config(format!("unknown key `{key}`"))),
        }
        Ok(())
    }

    /// Flat `key = value` lines; `#` starts a comment.
    pub fn apply_str(&mut self, text: &str) -> Result<(), AppError> {
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| AppError::Config(format!("line {}: expected key = value", n + 1)))?;
            self.set(k.trim(), v.trim())?;
        }
        Ok(())
    }

    pub fn from_file(path: &Path) -> Result<Self, AppError> {
        let text = std::fs::read_to_string(path).map_err(io_err(path))?;
        let mut cfg = RunConfig::default();
        cfg.apply_str(&text)?;
        Ok(cfg)
    }

    pub fn output_path(&self) -> PathBuf {
        self.out.clone().unwrap_or_else(|| {
            PathBuf::from(match self.mode {
                Mode::Trace => "trace.csv",
                Mode::Figures => "figures",
                Mode::Critical => "critical.csv",
                Mode::Verify => "verify_report.txt",
            })
        })
    }

    /// The model for the configured ratios.
    pub fn model(&self) -> Result<Model64, AppError> {
        self.model_for(self.k_over_omega, self.f_over_k)
    }

    fn model_for(&self, k_over_omega: f64, f_over_k: f64) -> Result<Model64, AppError> {
        let kappa = k_over_omega * self.omega;
        let drive = C64::from_polar(f_over_k * kappa, self.drive_phase);
        let mut params = ModelParams::new(self.omega, kappa, drive);
        match (self.coupling, self.detuning) {
            (Some(g), Some(d)) => params = params.with_validity(g, d),
            (None, None) => {}
            _ => return Err(AppError::Config("coupling and detuning must be given together".into())),
        }
        Ok(params.validate()?)
    }

    fn grid(&self) -> Result<TimeGrid<f64>, AppError> {
        if !(self.omega > 0.0) {
            return Err(AppError::Config("the time axis omega t / pi needs omega > 0".into()));
        }
        Ok(TimeGrid::new(self.t_max_pi * std::f64::consts::PI / self.omega, self.points)?)
    }
}

/// `{:.16e}`, with negative zero folded into zero.
pub fn format_number(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

fn push_row(buf: &mut String, cells: &[f64]) {
    for (i, c) in cells.iter().enumerate() {
        if i > 0 {
            buf.push(',');
        }
        buf.push_str(&format_number(*c));
    }
    buf.push('\n');
}

/// Writes through a `.partial` sibling and renames into place.
fn write_atomically(path: &Path, contents: &str) -> Result<(), AppError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(io_err(dir))?;
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".partial");
    let tmp = PathBuf::from(tmp);
    let result = std::fs::write(&tmp, contents)
        .map_err(io_err(&tmp))
        .and_then(|_| std::fs::rename(&tmp, path).map_err(io_err(path)));
    if result.is_err() {
        let _ = std::fs::remove_file(&tmp);
    }
    result
}

pub const TRACE_COLUMNS: [&str; 13] = [
    "omega_t_over_pi",
    "zeta_global",
    "zeta_atom",
    "zeta_field",
    "corr_c",
    "concurrence",
    "re_phi",
    "dist_sq",
    "lambda_plus",
    "lambda_minus",
    "Lambda_plus",
    "Lambda_minus",
    "nbar_analytic",
];

pub const ORACLE_COLUMNS: [&str; 6] = [
    "oracle_zeta_global",
    "oracle_zeta_atom",
    "oracle_zeta_field",
    "oracle_corr_c",
    "oracle_concurrence",
    "oracle_re_phi",
];

/// The trace CSV for one model, as text.
pub fn render_trace(model: &Model64, grid: &TimeGrid<f64>, oracle_cfg: Option<&IntegratorConfig>) -> Result<String, AppError> {
    let times: Vec<f64> = grid.points().collect();
    let oracle_rows: Option<Vec<OracleRecord>> = match oracle_cfg {
        Some(cfg) => {
            let orc = Oracle::new(model, *cfg)?;
            let rho0 = oracle::initial_state(model, &AtomicAmplitudes::symmetric(), orc.levels());
            let (states, _) = orc.trajectory(&rho0, &times)?;
            let recs = states
                .iter()
                .map(|s| {
                    let pair = model.coherent_pair(s.time());
                    oracle::measure(s, pair.beta_e_prime, pair.beta_g_prime)
                })
                .collect::<Result<Vec<_>, _>>()?;
            Some(recs)
        }
        None => None,
    };
    let mut buf = String::new();
    let mut header: Vec<&str> = TRACE_COLUMNS.to_vec();
    if oracle_rows.is_some() {
        header.extend(ORACLE_COLUMNS);
    }
    let _ = writeln!(buf, "{}", header.join(","));
    let w = model.omega();
    for (i, &t) in times.iter().enumerate() {
        let r = model.state_record(t);
        let pair = model.coherent_pair(t);
        let nbar = 0.5 * (pair.beta_e_prime.norm_sqr() + pair.beta_g_prime.norm_sqr());
        let mut row = vec![
            w * t / std::f64::consts::PI,
            r.zeta,
            r.zeta_atom,
            r.zeta_field,
            r.corr,
            r.concurrence,
            r.re_phi,
            r.dist_sq,
            r.lambda_plus,
            r.lambda_minus,
            r.field_lambda_plus,
            r.field_lambda_minus,
            nbar,
        ];
        if let Some(o) = &oracle_rows {
            let o = &o[i];
            row.extend([o.zeta, o.zeta_atom, o.zeta_field, o.corr, o.concurrence, o.re_phi]);
        }
        push_row(&mut buf, &row);
    }
    Ok(buf)
}

pub fn run_trace(cfg: &RunConfig) -> Result<PathBuf, AppError> {
    let model = cfg.model()?;
    let text = render_trace(&model, &cfg.grid()?, cfg.oracle.then_some(&cfg.integrator))?;
    let path = cfg.output_path();
    write_atomically(&path, &text)?;
    Ok(path)
}

/// `(file name, k/omega, |F|/k)` of every figure curve.
pub fn figure_files() -> Vec<(String, f64, f64)> {
    let mut v: Vec<_> = FIG1_K_OVER_OMEGA.iter().map(|&k| (format!("fig1_k{k}.csv"), k, 1.0)).collect();
    v.extend(FIG2_F_OVER_K.iter().map(|&f| (format!("fig2_f{f}.csv"), 0.2, f)));
    v
}

/// One trace CSV per figure curve in the output directory. The `fig1_*`
/// files also hold the correlation and concurrence curves (`corr_c`,
/// `concurrence`) at `|F|/k = 1`.
pub fn run_figures(cfg: &RunConfig) -> Result<Vec<PathBuf>, AppError> {
    let dir = cfg.output_path();
    std::fs::create_dir_all(&dir).map_err(io_err(&dir))?;
    let grid = cfg.grid()?;
    let results: Vec<Result<PathBuf, AppError>> = figure_files()
        .par_iter()
        .map(|(name, k, f)| {
            let model = cfg.model_for(*k, *f)?;
            let text = render_trace(&model, &grid, cfg.oracle.then_some(&cfg.integrator))?;
            let path = dir.join(name);
            write_atomically(&path, &text)?;
            Ok(path)
        })
        .collect();
    if results.iter().any(Result::is_err) {
        for p in results.iter().flatten() {
            let _ = std::fs::remove_file(p);
        }
        return Err(results.into_iter().find_map(Result::err).expect("an error"));
    }
    Ok(results.into_iter().flatten().collect())
}

pub const CRITICAL_COLUMNS: [&str; 8] = [
    "t_c",
    "omega_tc_over_pi",
    "kind",
    "classification",
    "n_index",
    "zeta_field_at_tc",
    "concurrence_at_tc",
    "t_trans",
];

pub fn render_critical(model: &Model64, t_max: f64, divisions: usize) -> Result<String, AppError> {
    let scan = model.critical_instants_with(t_max, divisions)?;
    let mut buf = String::new();
    let _ = writeln!(buf, "{}", CRITICAL_COLUMNS.join(","));
    let w = model.omega();
    for c in &scan.instants {
        let r = model.state_record(c.t_c);
        let _ = writeln!(
            buf,
            "{},{},{},{},{},{},{},{}",
            format_number(c.t_c),
            format_number(w * c.t_c / std::f64::consts::PI),
            c.kind.as_str(),
            c.classification.as_str(),
            c.n_index,
            format_number(r.zeta_field),
            format_number(r.concurrence),
            format_number(scan.t_trans),
        );
    }
    Ok(buf)
}

pub fn run_critical(cfg: &RunConfig) -> Result<PathBuf, AppError> {
    let model = cfg.model()?;
    let t_max = cfg.t_max_pi * std::f64::consts::PI / model.omega();
    let text = render_critical(&model, t_max, cfg.grid_divisions)?;
    let path = cfg.output_path();
    write_atomically(&path, &text)?;
    Ok(path)
}

/// Runs the acceptance suite, writes the report and returns it. The sweep
/// sets and the 200-point grid are fixed by the suite; only the oracle flag
/// and integrator tolerances come from the configuration.
pub fn run_verify(cfg: &RunConfig) -> Result<(Report, PathBuf), AppError> {
    cfg.integrator.validate()?;
    let opts = VerifyOptions { oracle: cfg.oracle, integrator: cfg.integrator, ..Default::default() };
    let report = verify::run(&opts);
    let path = cfg.output_path();
    write_atomically(&path, &report.render())?;
    Ok((report, path))
}
