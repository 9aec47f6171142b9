//! Brute-force reference: the atom–field master equation integrated on a
//! truncated Fock space, with every observable computed from the dense
//! density matrix.

pub mod fock;
mod generator;
mod integrator;
pub mod measures;

pub use generator::Generator;
pub use integrator::{DormandPrince, IntegratorConfig, StepStats};
pub use measures::{
    embed_two_qubit, observables, partial_trace_atom, partial_trace_field, total_correlation,
    trace_distance, wootters_concurrence, Embedding, Observables,
};

use nalgebra::DMatrix;
use thiserror::Error;

use crate::analytic::{Dyad, MatrixElements, StationaryState};
use crate::model::{AtomicAmplitudes, ModelError};
use crate::{Model64, C64};

use fock::coherent_vector;

/// Edge population above which a trajectory is abandoned.
pub const EDGE_LIMIT: f64 = 1e-8;
/// Largest trace drift that is silently renormalized.
pub const TRACE_DRIFT_LIMIT: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("Fock truncation too small: edge population {population:e} at t = {time}")]
    Truncation { time: f64, population: f64 },
    #[error("step size underflow ({step:e}) at t = {time}")]
    StepUnderflow { time: f64, step: f64 },
    #[error("step budget exhausted at t = {time}")]
    TooManySteps { time: f64 },
    #[error("trace drifted by {0:e}")]
    TraceDrift(f64),
    #[error("state has a negative eigenvalue {0:e}")]
    NotPositive(f64),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("invalid integrator configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// `N = ceil(a^2 + 8a + 20)` with `a = 2|F|/k`; the space keeps Fock states
/// `0..=N`.
pub fn fock_truncation(model: &Model64) -> usize {
    let a = 2.0 * model.drive().norm() / model.kappa();
    (a * a + 8.0 * a + 20.0).ceil() as usize
}

/// Joint density matrix on (2 atomic levels) (x) (Fock states `0..levels`).
#[derive(Debug, Clone, PartialEq)]
pub struct FockDensityMatrix {
    levels: usize,
    data: DMatrix<C64>,
    time: f64,
}

impl FockDensityMatrix {
    /// Wraps `data`, checking shape, Hermiticity (1e-10) and trace (1e-8).
    pub fn new(data: DMatrix<C64>, levels: usize, time: f64) -> Result<Self, OracleError> {
        if data.nrows() != 2 * levels || data.ncols() != 2 * levels {
            return Err(OracleError::InvalidState(format!(
                "expected {0}x{0}, got {1}x{2}",
                2 * levels,
                data.nrows(),
                data.ncols()
            )));
        }
        let asym = (&data - data.adjoint()).camax();
        if asym > 1e-10 {
            return Err(OracleError::InvalidState(format!("not Hermitian ({asym:e})")));
        }
        let tr = data.trace();
        if (tr - C64::from(1.0)).norm() > 1e-8 {
            return Err(OracleError::InvalidState(format!("trace {tr}")));
        }
        Ok(FockDensityMatrix { levels, data, time })
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn dim(&self) -> usize {
        2 * self.levels
    }

    pub fn data(&self) -> &DMatrix<C64> {
        &self.data
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    /// Population of the highest Fock state.
    pub fn edge_population(&self) -> f64 {
        edge_population(self.data.as_slice(), self.levels)
    }

    /// Smallest eigenvalue.
    pub fn min_eigenvalue(&self) -> f64 {
        self.data.symmetric_eigenvalues().min()
    }

    /// Full invariant check including positivity and truncation adequacy.
    pub fn check_invariants(&self) -> Result<(), OracleError> {
        let min = self.min_eigenvalue();
        if min < -1e-8 {
            return Err(OracleError::NotPositive(min));
        }
        let edge = self.edge_population();
        if edge > 1e-10 {
            return Err(OracleError::Truncation { time: self.time, population: edge });
        }
        Ok(())
    }
}

fn edge_population(rho: &[C64], levels: usize) -> f64 {
    let d = 2 * levels;
    let top = levels - 1;
    rho[top + top * d].re + rho[(levels + top) * (d + 1)].re
}

/// `(c_e|e> + c_g|g>) (x) |alpha0>`.
pub fn product_state(amps: &AtomicAmplitudes<f64>, alpha0: C64, levels: usize) -> FockDensityMatrix {
    let field = coherent_vector(alpha0, levels);
    let mut psi = nalgebra::DVector::zeros(2 * levels);
    psi.rows_mut(0, levels).copy_from(&(&field * amps.c_e()));
    psi.rows_mut(levels, levels).copy_from(&(&field * amps.c_g()));
    let data = &psi * psi.adjoint();
    let tr = data.trace();
    FockDensityMatrix { levels, data: data / tr, time: 0.0 }
}

/// The initial condition with the field in its stationary state `-iF/k`.
pub fn initial_state(model: &Model64, amps: &AtomicAmplitudes<f64>, levels: usize) -> FockDensityMatrix {
    product_state(amps, model.stationary_amplitude(), levels)
}

fn dyad(d: &Dyad<f64>, levels: usize) -> DMatrix<C64> {
    let k = coherent_vector(d.ket, levels);
    let b = coherent_vector(d.bra, levels);
    &k * b.adjoint() * d.weight
}

/// Dense matrix of a coherent-state decomposition.
pub fn expand_elements(me: &MatrixElements<f64>, levels: usize, time: f64) -> FockDensityMatrix {
    let mut data = DMatrix::zeros(2 * levels, 2 * levels);
    let eg = dyad(&me.eg, levels);
    data.view_mut((0, 0), (levels, levels)).copy_from(&dyad(&me.ee, levels));
    data.view_mut((levels, levels), (levels, levels)).copy_from(&dyad(&me.gg, levels));
    data.view_mut((levels, 0), (levels, levels)).copy_from(&eg.adjoint());
    data.view_mut((0, levels), (levels, levels)).copy_from(&eg);
    FockDensityMatrix { levels, data, time }
}

/// Dense matrix of the asymptotic, classically correlated state.
pub fn expand_stationary(s: &StationaryState<f64>, levels: usize, time: f64) -> FockDensityMatrix {
    let zero = C64::new(0.0, 0.0);
    let me = MatrixElements {
        ee: Dyad { weight: C64::from(s.weight_e), ket: s.amp_e, bra: s.amp_e },
        gg: Dyad { weight: C64::from(s.weight_g), ket: s.amp_g, bra: s.amp_g },
        eg: Dyad { weight: zero, ket: s.amp_e, bra: s.amp_g },
    };
    expand_elements(&me, levels, time)
}

/// Bookkeeping of one integration.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct EvolveReport {
    pub steps: StepStats,
    pub max_edge_population: f64,
    /// Largest `|tr rho - 1|` removed by renormalization.
    pub max_trace_drift: f64,
}

/// Master-equation integrator bound to one model and truncation.
pub struct Oracle {
    generator: Generator,
    config: IntegratorConfig,
}

impl Oracle {
    pub fn new(model: &Model64, config: IntegratorConfig) -> Result<Self, OracleError> {
        Self::with_truncation(model, fock_truncation(model), config)
    }

    pub fn with_truncation(model: &Model64, n_max: usize, config: IntegratorConfig) -> Result<Self, OracleError> {
        config.validate()?;
        Ok(Oracle { generator: Generator::new(model, n_max), config })
    }

    pub fn levels(&self) -> usize {
        self.generator.levels()
    }

    pub fn generator(&self) -> &Generator {
        &self.generator
    }

    pub fn config(&self) -> &IntegratorConfig {
        &self.config
    }

    /// `rho(t_end)` starting from `rho0`.
    pub fn evolve(&self, rho0: &FockDensityMatrix, t_end: f64) -> Result<(FockDensityMatrix, EvolveReport), OracleError> {
        let mut out = self.trajectory(rho0, &[t_end])?;
        let (state, report) = (out.0.pop().expect("one sample"), out.1);
        Ok((state, report))
    }

    /// States at each of the non-decreasing `times` (all `>= rho0.time()`).
    pub fn trajectory(
        &self,
        rho0: &FockDensityMatrix,
        times: &[f64],
    ) -> Result<(Vec<FockDensityMatrix>, EvolveReport), OracleError> {
        if rho0.levels() != self.levels() {
            return Err(OracleError::InvalidState(format!(
                "state has {} Fock levels, generator {}",
                rho0.levels(),
                self.levels()
            )));
        }
        let levels = self.levels();
        let d = self.generator.dim();
        let mut y: Vec<C64> = rho0.data.as_slice().to_vec();
        let mut t = rho0.time;
        let mut h = self.config.initial_step;
        let mut dp = DormandPrince::new(d * d);
        let mut report = EvolveReport::default();
        let mut states = Vec::with_capacity(times.len());
        for &target in times {
            if target < t {
                return Err(OracleError::InvalidState(format!("sample time {target} precedes {t}")));
            }
            let mut max_edge = report.max_edge_population;
            let stats = dp.integrate(
                |_, x, dx| self.generator.apply_into(x, dx),
                t,
                &mut y,
                target,
                &self.config,
                &mut h,
                |ts, x| {
                    let edge = edge_population(x, levels);
                    max_edge = max_edge.max(edge);
                    if edge > EDGE_LIMIT {
                        Err(OracleError::Truncation { time: ts, population: edge })
                    } else {
                        Ok(())
                    }
                },
            )?;
            report.steps += stats;
            report.max_edge_population = max_edge;
            t = target;
            let mut m = DMatrix::from_column_slice(d, d, &y);
            m = (&m + m.adjoint()) * C64::from(0.5);
            let tr = m.trace();
            let drift = (tr - C64::from(1.0)).norm();
            if drift > TRACE_DRIFT_LIMIT {
                return Err(OracleError::TraceDrift(drift));
            }
            if drift > report.max_trace_drift {
                report.max_trace_drift = drift;
            }
            if drift > 0.0 {
                log::debug!("renormalized trace drift {drift:e} at t = {t}");
            }
            m /= tr;
            y.copy_from_slice(m.as_slice());
            states.push(FockDensityMatrix { levels, data: m, time: t });
        }
        Ok((states, report))
    }
}

/// The observables compared against the closed forms, measured on a dense
/// state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleRecord {
    pub t: f64,
    pub zeta: f64,
    pub zeta_atom: f64,
    pub zeta_field: f64,
    pub corr: f64,
    pub concurrence: f64,
    /// `ln(2 ||<e|rho|g>||_1)`.
    pub re_phi: f64,
    pub nbar: f64,
    pub leakage: f64,
    pub degenerate: bool,
}

/// Measures `rho`; the field amplitudes fix the two-qubit embedding.
pub fn measure(rho: &FockDensityMatrix, beta_e: C64, beta_g: C64) -> Result<OracleRecord, OracleError> {
    let obs = observables(rho);
    let ra = partial_trace_field(rho);
    let rf = partial_trace_atom(rho);
    let emb = embed_two_qubit(rho, beta_e, beta_g);
    Ok(OracleRecord {
        t: rho.time(),
        zeta: obs.linear_entropy,
        zeta_atom: 1.0 - measures::purity(&ra),
        zeta_field: 1.0 - measures::purity(&rf),
        corr: total_correlation(rho),
        concurrence: wootters_concurrence(&emb.rho)?,
        re_phi: (2.0 * obs.coherence_magnitude).ln(),
        nbar: obs.nbar,
        leakage: emb.leakage,
        degenerate: emb.degenerate,
    })
}

#[cfg(test)]
mod tests;
