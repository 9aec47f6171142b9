//! The acceptance suite: every check is evaluated and collected, never
//! short-circuited, and rendered one line per check as
//! `PASS|FAIL|SKIP name measured≤tolerance`.

use std::fmt;

use rayon::prelude::*;

use crate::analytic::{Classification, CriticalKind, StateRecord};
use crate::lie::{self, SuperOpRep};
use crate::oracle::{self, IntegratorConfig, Oracle, OracleRecord};
use crate::{AtomicAmplitudes, Model64, ModelParams, TimeGrid, C64};

/// Replacement for [`Model::phase`](crate::Model::phase) used to inject
/// faults.
pub type PhaseFn = fn(&Model64, f64) -> C64;

/// `(k/omega, |F|/k)` of the five figure curves.
pub const FIGURE_SETS: [(f64, f64); 5] = [(0.2, 1.0), (1.0, 1.0), (5.0, 1.0), (0.2, 0.5), (0.2, 2.0)];

pub const SWEEP_POINTS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
    Skip,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Pass => "PASS",
            Outcome::Fail => "FAIL",
            Outcome::Skip => "SKIP",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub criterion: u8,
    pub name: String,
    pub measured: f64,
    pub tolerance: f64,
    pub outcome: Outcome,
    pub detail: Option<String>,
}

impl Check {
    /// Passes when `measured <= tolerance`; NaN fails.
    pub fn at_most(criterion: u8, name: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        let outcome = if measured <= tolerance { Outcome::Pass } else { Outcome::Fail };
        Check { criterion, name: name.into(), measured, tolerance, outcome, detail: None }
    }

    pub fn skipped(criterion: u8, name: impl Into<String>, tolerance: f64, why: &str) -> Self {
        Check {
            criterion,
            name: name.into(),
            measured: f64::NAN,
            tolerance,
            outcome: Outcome::Skip,
            detail: Some(why.to_string()),
        }
    }

    pub fn failed(criterion: u8, name: impl Into<String>, tolerance: f64, why: String) -> Self {
        Check {
            criterion,
            name: name.into(),
            measured: f64::NAN,
            tolerance,
            outcome: Outcome::Fail,
            detail: Some(why),
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.outcome != Outcome::Fail
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} c{} {} ", self.outcome.as_str(), self.criterion, self.name)?;
        if self.measured.is_nan() {
            write!(f, "-")?;
        } else {
            write!(f, "{:.3e}", self.measured)?;
        }
        write!(f, "≤{:.0e}", self.tolerance)?;
        if let Some(d) = &self.detail {
            write!(f, "  ({d})")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    /// No check failed (skips count as passes).
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn criterion(&self, n: u8) -> impl Iterator<Item = &Check> + '_ {
        self.checks.iter().filter(move |c| c.criterion == n)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> + '_ {
        self.checks.iter().filter(|c| c.outcome == Outcome::Fail)
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            s.push_str(&c.to_string());
            s.push('\n');
        }
        let failed = self.failures().count();
        let skipped = self.checks.iter().filter(|c| c.outcome == Outcome::Skip).count();
        s.push_str(&format!(
            "{} checks, {} failed, {} skipped\n",
            self.checks.len(),
            failed,
            skipped
        ));
        s
    }
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub oracle: bool,
    pub points: usize,
    pub sets: Vec<(f64, f64)>,
    pub integrator: IntegratorConfig,
    pub phase: Option<PhaseFn>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            oracle: true,
            points: SWEEP_POINTS,
            sets: FIGURE_SETS.to_vec(),
            integrator: IntegratorConfig::default(),
            phase: None,
        }
    }
}

impl VerifyOptions {
    fn phase(&self, m: &Model64, t: f64) -> C64 {
        match self.phase {
            Some(f) => f(m, t),
            None => m.phase(t),
        }
    }

    fn record(&self, m: &Model64, t: f64) -> StateRecord<f64> {
        m.state_record_with_phase(t, self.phase(m, t))
    }
}

fn set_model(set: (f64, f64)) -> Model64 {
    ModelParams::from_ratios(1.0, set.0, set.1).validate().expect("figure parameters are valid")
}

fn label(set: (f64, f64)) -> String {
    format!("[k/w={} F/k={}]", set.0, set.1)
}

/// Largest value of `f` over `0..n` and the index where it occurs; NaN wins.
fn worst(n: usize, mut f: impl FnMut(usize) -> f64) -> (f64, usize) {
    let mut best = (0.0, 0);
    for i in 0..n {
        let v = f(i);
        if v.is_nan() {
            return (v, i);
        }
        if v > best.0 {
            best = (v, i);
        }
    }
    best
}

const ORACLE_OFF: &str = "oracle disabled";

/// Analytic records and oracle measurements on the criterion-1 grid for one
/// parameter set.
#[derive(Debug, Clone)]
pub struct SetSweep {
    pub set: (f64, f64),
    pub times: Vec<f64>,
    pub analytic: Vec<StateRecord<f64>>,
    /// `None` when the oracle is disabled.
    pub oracle: Option<Result<Vec<OracleRecord>, String>>,
}

fn sweep_one(opts: &VerifyOptions, set: (f64, f64)) -> SetSweep {
    let m = set_model(set);
    let grid = TimeGrid::new(4.0 * std::f64::consts::PI, opts.points).expect("sweep grid");
    let times: Vec<f64> = grid.points().collect();
    let analytic = times.iter().map(|&t| opts.record(&m, t)).collect();
    let oracle = opts.oracle.then(|| oracle_records(&m, &times, &opts.integrator));
    SetSweep { set, times, analytic, oracle }
}

fn oracle_records(m: &Model64, times: &[f64], cfg: &IntegratorConfig) -> Result<Vec<OracleRecord>, String> {
    let run = || -> Result<Vec<OracleRecord>, oracle::OracleError> {
        let orc = Oracle::new(m, *cfg)?;
        let rho0 = oracle::initial_state(m, &AtomicAmplitudes::symmetric(), orc.levels());
        let (states, _) = orc.trajectory(&rho0, times)?;
        states
            .iter()
            .map(|s| {
                let pair = m.coherent_pair(s.time());
                oracle::measure(s, pair.beta_e_prime, pair.beta_g_prime)
            })
            .collect()
    };
    run().map_err(|e| e.to_string())
}

/// Runs the oracle over every configured set, concurrently.
pub fn sweep(opts: &VerifyOptions) -> Vec<SetSweep> {
    opts.sets.par_iter().map(|&s| sweep_one(opts, s)).collect()
}

/// Analytic against oracle for `zeta`, `zeta_a`, `zeta_f`, `c`, `C`.
pub fn criterion1(sweeps: &[SetSweep]) -> Vec<Check> {
    const TOL: f64 = 1e-4;
    type Pick = fn(&StateRecord<f64>, &OracleRecord) -> (f64, f64);
    let observables: [(&str, Pick); 5] = [
        ("zeta", |a, o| (a.zeta, o.zeta)),
        ("zeta_atom", |a, o| (a.zeta_atom, o.zeta_atom)),
        ("zeta_field", |a, o| (a.zeta_field, o.zeta_field)),
        ("corr_c", |a, o| (a.corr, o.corr)),
        ("concurrence", |a, o| (a.concurrence, o.concurrence)),
    ];
    let mut out = Vec::new();
    for s in sweeps {
        for (name, pick) in observables {
            let full = format!("analytic-oracle {name} {}", label(s.set));
            out.push(match &s.oracle {
                None => Check::skipped(1, full, TOL, ORACLE_OFF),
                Some(Err(e)) => Check::failed(1, full, TOL, e.clone()),
                Some(Ok(recs)) => {
                    let (d, i) = worst(recs.len(), |i| {
                        let (a, o) = pick(&s.analytic[i], &recs[i]);
                        (a - o).abs()
                    });
                    Check::at_most(1, full, d, TOL).with_detail(format!("worst at wt/pi={:.4}", s.times[i] / std::f64::consts::PI))
                }
            });
        }
    }
    out
}

/// `t = 30/k + 30 tau_lt`.
pub fn asymptotic_time(m: &Model64) -> f64 {
    let tau = m.characteristic_times().expect("driven, coupled model").long_time;
    30.0 / m.kappa() + 30.0 * tau
}

/// Approach to the classically correlated stationary state.
pub fn criterion2(opts: &VerifyOptions) -> Vec<Check> {
    opts.sets.par_iter().map(|&set| criterion2_set(opts, set)).flatten().collect()
}

fn criterion2_set(opts: &VerifyOptions, set: (f64, f64)) -> Vec<Check> {
    let m = set_model(set);
    let t = asymptotic_time(&m);
    let tag = label(set);
    let rec = opts.record(&m, t);
    let pair = m.coherent_pair(t);
    let nbar_analytic = 0.5 * (pair.beta_e_prime.norm_sqr() + pair.beta_g_prime.norm_sqr());
    let mut out = vec![
        Check::at_most(2, format!("zeta(T)->1/2 {tag}"), (rec.zeta - 0.5).abs(), 1e-6)
            .with_detail(format!("T={t:.1}")),
        Check::at_most(2, format!("analytic nbar(T) {tag}"), (nbar_analytic - m.nbar_infinity()).abs(), 1e-4),
    ];
    let names = [format!("oracle trace distance to stationary {tag}"), format!("oracle nbar(T) {tag}")];
    let tols = [1e-3, 1e-4];
    if !opts.oracle {
        for (n, tol) in names.into_iter().zip(tols) {
            out.push(Check::skipped(2, n, tol, ORACLE_OFF));
        }
        return out;
    }
    let run = || -> Result<(f64, f64), oracle::OracleError> {
        let amps = AtomicAmplitudes::symmetric();
        let orc = Oracle::new(&m, opts.integrator)?;
        let rho0 = oracle::initial_state(&m, &amps, orc.levels());
        let (rho, _) = orc.evolve(&rho0, t)?;
        let stat = oracle::expand_stationary(&m.stationary_state(&amps), orc.levels(), t);
        let dist = oracle::trace_distance(rho.data(), stat.data());
        let nbar = oracle::observables(&rho).nbar;
        Ok((dist, (nbar - m.nbar_infinity()).abs()))
    };
    match run() {
        Ok((dist, dn)) => {
            out.push(Check::at_most(2, names[0].clone(), dist, tols[0]));
            out.push(Check::at_most(2, names[1].clone(), dn, tols[1]));
        }
        Err(e) => {
            for (n, tol) in names.into_iter().zip(tols) {
                out.push(Check::failed(2, n, tol, e.to_string()));
            }
        }
    }
    out
}

/// `2 c(t/2) - c(t)`: removes the `O(t)` correction of `c(t) = c0 + c1 t`.
fn richardson(f: impl Fn(f64) -> f64, t: f64) -> f64 {
    2.0 * f(t / 2.0) - f(t)
}

/// Short-time cubic and quadratic laws, long-time slope, `tau_lt` identity.
pub fn criterion3(opts: &VerifyOptions) -> Vec<Check> {
    let mut out = Vec::new();
    for &set in &opts.sets {
        let m = set_model(set);
        let tag = label(set);
        let times = m.characteristic_times().expect("driven, coupled model");
        let re_phi = |t: f64| opts.phase(&m, t).re;
        let (k, w, a) = (m.kappa(), m.omega(), m.drive_sq());

        let t0 = times.short_time / 100.0;
        let cubic = richardson(|t| 2.0 * re_phi(t) / (t * t * t), t0);
        let claimed = -2.0 / times.short_time.powi(3);
        out.push(
            Check::at_most(3, format!("short-time law 2RePhi=-2(t/tau_st)^3 {tag}"), (cubic / claimed - 1.0).abs(), 1e-2)
                .with_detail(format!("measured 2RePhi/t^3 -> {cubic:.6e}, law {claimed:.6e}")),
        );
        let exact = -8.0 / 3.0 * a * w * w / k;
        out.push(Check::at_most(
            3,
            format!("short-time coefficient 2RePhi/t^3=-(8/3)|F|^2w^2/k {tag}"),
            (cubic / exact - 1.0).abs(),
            1e-2,
        ));

        let ta = times.atom_short_time;
        let atomic = richardson(
            |t| (2.0 * re_phi(t) - m.distance_sq_closed_form(t)) / (t * t),
            ta / 100.0,
        );
        out.push(Check::at_most(
            3,
            format!("atomic short-time law 2RePhi-D^2=-(t/tau_a)^2 {tag}"),
            (atomic * ta * ta + 1.0).abs(),
            1e-2,
        ));

        let t30 = 30.0 / k;
        let h = 1e-2 / k;
        let slope = (re_phi(t30 + h) - re_phi(t30 - h)) / (2.0 * h);
        let rate = m.re_phi_longtime_rate();
        out.push(Check::at_most(3, format!("long-time slope of RePhi at kt=30 {tag}"), (slope / rate - 1.0).abs(), 1e-3));

        let (be, bg) = m.asymptotic_pair();
        let d_inf = (be - bg).norm_sqr();
        out.push(Check::at_most(
            3,
            format!("tau_lt k D^2(inf)=1 {tag}"),
            (times.long_time * k * d_inf - 1.0).abs(),
            1e-12,
        ));
    }
    out
}

/// Five-point second derivative of `|b_e' - b_g'|^2`.
fn distance_curvature(m: &Model64, t: f64) -> f64 {
    let h = 1e-3;
    let d = |u: f64| m.coherent_pair(u).dist_sq;
    (-d(t + 2.0 * h) + 16.0 * d(t + h) - 30.0 * d(t) + 16.0 * d(t - h) - d(t - 2.0 * h)) / (12.0 * h * h)
}

/// Disentanglement instants of the subcritical sets.
pub fn criterion4(opts: &VerifyOptions) -> Vec<Check> {
    let subcritical: Vec<_> = opts.sets.iter().copied().filter(|s| s.0 < 1.0).collect();
    subcritical.par_iter().map(|&set| criterion4_set(opts, set)).flatten().collect()
}

fn criterion4_set(opts: &VerifyOptions, set: (f64, f64)) -> Vec<Check> {
    let m = set_model(set);
    let tag = label(set);
    let t_max = 4.0 * std::f64::consts::PI / m.omega();
    let scan = match m.critical_instants(t_max) {
        Ok(s) => s,
        Err(e) => return vec![Check::failed(4, format!("critical scan {tag}"), 0.0, e.to_string())],
    };
    let roots: Vec<f64> = scan.of_kind(CriticalKind::Disentangle).map(|c| c.t_c).collect();
    let mut out = vec![Check::at_most(4, format!("disentangle roots found {tag}"), if roots.is_empty() { 1.0 } else { 0.0 }, 0.0)
        .with_detail(format!("{} roots", roots.len()))];

    let (zf, _) = worst(roots.len(), |i| {
        let t = roots[i];
        let phi = opts.phase(&m, t);
        m.state_record_with_phase(t, phi).zeta_field
    });
    out.push(Check::at_most(4, format!("zeta_field at roots {tag}"), zf, 1e-14));

    let mismatches: Vec<String> = scan
        .instants
        .iter()
        .filter(|c| {
            let measured = if distance_curvature(&m, c.t_c) < 0.0 {
                Classification::LocalMax
            } else {
                Classification::LocalMin
            };
            measured != c.classification
        })
        .map(|c| format!("{} at t={:.6}", c.kind.as_str(), c.t_c))
        .collect();
    let mut check = Check::at_most(4, format!("classification vs curvature of D^2 {tag}"), mismatches.len() as f64, 0.0)
        .with_detail(format!("{} instants", scan.instants.len()));
    if !mismatches.is_empty() {
        check = check.with_detail(format!("mismatch: {}", mismatches.join(", ")));
    }
    out.push(check);

    let name = format!("oracle concurrence at roots {tag}");
    if !opts.oracle {
        out.push(Check::skipped(4, name, 1e-4, ORACLE_OFF));
    } else if roots.is_empty() {
        out.push(Check::at_most(4, name, 0.0, 1e-4).with_detail("no roots"));
    } else {
        match oracle_records(&m, &roots, &opts.integrator) {
            Ok(recs) => {
                let (c, _) = worst(recs.len(), |i| recs[i].concurrence);
                out.push(Check::at_most(4, name, c, 1e-4));
            }
            Err(e) => out.push(Check::failed(4, name, 1e-4, e)),
        }
    }
    out
}

/// Closed-form concurrence against Wootters on the oracle state and on the
/// densely expanded analytic state.
pub fn criterion5(opts: &VerifyOptions, sweeps: &[SetSweep]) -> Vec<Check> {
    let mut out = Vec::new();
    for s in sweeps {
        let tag = label(s.set);
        let name = format!("Wootters(oracle) vs closed form {tag}");
        out.push(match &s.oracle {
            None => Check::skipped(5, name, 1e-4, ORACLE_OFF),
            Some(Err(e)) => Check::failed(5, name, 1e-4, e.clone()),
            Some(Ok(recs)) => {
                let (d, _) = worst(recs.len(), |i| (recs[i].concurrence - s.analytic[i].concurrence).abs());
                Check::at_most(5, name, d, 1e-4)
            }
        });
    }
    let exact: Vec<Check> = opts
        .sets
        .par_iter()
        .map(|&set| {
            let m = set_model(set);
            let levels = oracle::fock_truncation(&m) + 1;
            let amps = AtomicAmplitudes::symmetric();
            let grid = TimeGrid::new(4.0 * std::f64::consts::PI, opts.points).expect("sweep grid");
            let mut err = None;
            let (d, _) = worst(grid.len(), |i| {
                let t = grid.point(i);
                let rho = oracle::expand_elements(&m.matrix_elements(&amps, t), levels, t);
                let pair = m.coherent_pair(t);
                let emb = oracle::embed_two_qubit(&rho, pair.beta_e_prime, pair.beta_g_prime);
                match oracle::wootters_concurrence(&emb.rho) {
                    Ok(c) => (c - opts.record(&m, t).concurrence).abs(),
                    Err(e) => {
                        err.get_or_insert(e.to_string());
                        f64::NAN
                    }
                }
            });
            let name = format!("Wootters(exact dense state) vs closed form {}", label(set));
            match err {
                Some(e) => Check::failed(5, name, 1e-10, e),
                None => Check::at_most(5, name, d, 1e-10),
            }
        })
        .collect();
    out.extend(exact);
    out
}

/// Ordering-function ODEs, superoperator algebra, disentangling identities.
pub fn criterion6() -> Vec<Check> {
    let mut out = Vec::new();
    for set in [(1.0, 1.0), (0.2, 1.0)] {
        let m = set_model(set);
        let tag = label(set);
        // the ordering functions grow like e^{kt}; residuals are absolute
        let window = 5.0f64.min(1.0 / m.kappa());
        let steps = (window / 5e-3).round() as usize;
        let coarse = TimeGrid::new(window, steps + 1).expect("grid");
        let fine = TimeGrid::new(window, 2 * steps + 1).expect("grid");
        type Residual = fn(&Model64, &TimeGrid<f64>) -> lie::OdeResidualReport;
        let systems: [(&str, Residual); 2] =
            [("diagonal", lie::residual_diagonal), ("off-diagonal", lie::residual_offdiagonal)];
        for (name, f) in systems {
            let a = f(&m, &coarse);
            let b = f(&m, &fine);
            out.push(Check::at_most(6, format!("{name} ODE residual h=5e-3 {tag}"), a.max_residual, 1e-4));
            out.push(Check::at_most(6, format!("{name} ODE initial values {tag}"), a.initial_value, 0.0));
            let ratio = a.max_residual / b.max_residual;
            out.push(
                Check::at_most(6, format!("{name} ODE |halving ratio - 4| {tag}"), (ratio - 4.0).abs(), 0.5)
                    .with_detail(format!("ratio {ratio:.4}")),
            );
        }
    }

    let rep = SuperOpRep::new(30);
    match lie::check_commutator_table(&rep, lie::DEFAULT_MARGIN) {
        Ok(table) => {
            let (worst_name, _) = table
                .relations
                .iter()
                .map(|r| (r.name, r.deviation))
                .fold(("", 0.0), |acc, r| if r.1 > acc.1 { r } else { acc });
            out.push(
                Check::at_most(6, "commutator table dim 30 margin 5", table.max_deviation, 1e-12).with_detail(format!(
                    "{} relations, largest at {}; [J,P]-P deviates by {:.3e}",
                    table.relations.len(),
                    if worst_name.is_empty() { "-" } else { worst_name },
                    table.j_p_as_p
                )),
            );
        }
        Err(e) => out.push(Check::failed(6, "commutator table dim 30 margin 5", 1e-12, e.to_string())),
    }
    let bh_rep = SuperOpRep::new(14);
    match lie::check_baker_hausdorff(&bh_rep, 1.0, 1.0, 0.3, lie::DEFAULT_MARGIN) {
        Ok(d) => out.push(Check::at_most(6, "Baker-Hausdorff similarity dim 14", d, 1e-10)),
        Err(e) => out.push(Check::failed(6, "Baker-Hausdorff similarity dim 14", 1e-10, e.to_string())),
    }

    let rep = SuperOpRep::new(40);
    let m = ModelParams::new(1.0, 1.0, C64::new(1.0, 0.0)).validate().expect("valid");
    type Identity = fn(&Model64, f64, &SuperOpRep, usize) -> Result<lie::DisentangleReport, lie::LieError>;
    let identities: [(&str, Identity); 2] = [
        ("diagonal disentangling dim 40", lie::check_diagonal_disentangling),
        ("off-diagonal disentangling dim 40", lie::check_offdiagonal_disentangling),
    ];
    let checks: Vec<Check> = identities
        .par_iter()
        .map(|(name, f)| match f(&m, 1.0, &rep, lie::DEFAULT_MARGIN) {
            Ok(r) => Check::at_most(6, *name, r.deviation, 1e-6).with_detail(format!("edge weight {:.1e}", r.edge_weight)),
            Err(e) => Check::failed(6, *name, 1e-6, e.to_string()),
        })
        .collect();
    out.extend(checks);
    out
}

/// No-source limit, decoupled atom, drive-phase invariance.
pub fn criterion7(opts: &VerifyOptions) -> Vec<Check> {
    let mut out = Vec::new();
    let times: Vec<f64> = (0..=200).map(|j| j as f64 * 0.1).collect();

    let mut dev: f64 = 0.0;
    for &(w, k) in &[(1.0, 0.2), (1.0, 1.0), (2.5, 5.0)] {
        let m = ModelParams::new(w, k, C64::new(0.0, 0.0)).validate().expect("valid");
        for &t in &times {
            let parts = m.phase_parts(t);
            let pair = m.coherent_pair(t);
            let phi = opts.phase(&m, t);
            let terms = [
                (phi - C64::new(0.0, -w * t)).norm(),
                parts.z.norm(),
                parts.theta.abs(),
                parts.gamma.abs(),
                pair.beta_e.norm(),
                pair.beta_g.norm(),
                pair.dist_sq,
            ];
            dev = terms.iter().fold(dev, |a, &b| if b.is_nan() { f64::NAN } else { a.max(b) });
        }
    }
    out.push(Check::at_most(7, "F=0 gives Phi=-iwt and no drive terms", dev, 0.0));

    let mut dev: f64 = 0.0;
    for &(k, f) in &[(0.2, 0.3), (1.0, 1.0), (5.0, 2.0)] {
        let m = ModelParams::new(0.0, k, C64::new(f, 0.0)).validate().expect("valid");
        for &t in &times {
            let r = opts.record(&m, t);
            for v in [r.zeta, r.zeta_atom, r.zeta_field, r.corr, r.concurrence] {
                dev = if v.is_nan() { f64::NAN } else { dev.max(v.abs()) };
            }
        }
    }
    out.push(Check::at_most(7, "w=0 gives zero entropies and concurrence", dev, 0.0));

    let mut dev: f64 = 0.0;
    for &set in &opts.sets {
        let base = set_model(set);
        for &theta in &[0.7, -2.1, 3.0] {
            let rotated = base.with_drive(base.drive() * C64::from_polar(1.0, theta));
            for &t in times.iter().step_by(5) {
                let a = opts.record(&base, t);
                let b = opts.record(&rotated, t);
                let pa = base.coherent_pair(t);
                let pb = rotated.coherent_pair(t);
                let nbar = |p: &crate::CoherentPair<f64>| 0.5 * (p.beta_e_prime.norm_sqr() + p.beta_g_prime.norm_sqr());
                let pairs = [
                    (a.zeta, b.zeta),
                    (a.zeta_atom, b.zeta_atom),
                    (a.zeta_field, b.zeta_field),
                    (a.corr, b.corr),
                    (a.concurrence, b.concurrence),
                    (a.lambda_plus, b.lambda_plus),
                    (a.lambda_minus, b.lambda_minus),
                    (a.field_lambda_plus, b.field_lambda_plus),
                    (a.field_lambda_minus, b.field_lambda_minus),
                    (a.re_phi, b.re_phi),
                    (a.dist_sq, b.dist_sq),
                    (nbar(&pa), nbar(&pb)),
                ];
                for (x, y) in pairs {
                    let d = (x - y).abs();
                    dev = if d.is_nan() { f64::NAN } else { dev.max(d) };
                }
            }
        }
    }
    out.push(Check::at_most(7, "drive-phase invariance of real observables", dev, 1e-12));
    out
}

/// Two runs of the figures configuration into fresh directories.
pub fn criterion8() -> Vec<Check> {
    use crate::app::{run_figures, RunConfig};
    let name = "figures CSVs byte-identical across runs";
    let base = std::env::temp_dir().join(format!(
        "dispersive-jcm-determinism-{}-{}",
        std::process::id(),
        std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map(|d| d.as_nanos()).unwrap_or(0)
    ));
    let run = |sub: &str| -> Result<Vec<(String, Vec<u8>)>, String> {
        let mut cfg = RunConfig::figures_default();
        cfg.out = Some(base.join(sub));
        let files = run_figures(&cfg).map_err(|e| e.to_string())?;
        files
            .iter()
            .map(|p| {
                let bytes = std::fs::read(p).map_err(|e| e.to_string())?;
                let name = p.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
                Ok((name, bytes))
            })
            .collect()
    };
    let result = run("a").and_then(|a| run("b").map(|b| (a, b)));
    let _ = std::fs::remove_dir_all(&base);
    match result {
        Ok((a, b)) => {
            let differing = if a.len() != b.len() {
                a.len().max(b.len())
            } else {
                a.iter().zip(&b).filter(|(x, y)| x != y).count()
            };
            vec![Check::at_most(8, name, differing as f64, 0.0).with_detail(format!("{} files", a.len()))]
        }
        Err(e) => vec![Check::failed(8, name, 0.0, e)],
    }
}

/// The whole suite.
pub fn run(opts: &VerifyOptions) -> Report {
    let sweeps = sweep(opts);
    let mut checks = criterion1(&sweeps);
    checks.extend(criterion2(opts));
    checks.extend(criterion3(opts));
    checks.extend(criterion4(opts));
    checks.extend(criterion5(opts, &sweeps));
    checks.extend(criterion6());
    checks.extend(criterion7(opts));
    checks.extend(criterion8());
    Report { checks }
}
