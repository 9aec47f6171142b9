//! Dormand–Prince 5(4) with adaptive step control for complex state vectors.

use crate::C64;

use super::OracleError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
    pub initial_step: f64,
    pub min_step: f64,
    pub max_steps: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            rel_tol: 1e-9,
            abs_tol: 1e-11,
            max_step: f64::INFINITY,
            initial_step: 1e-3,
            min_step: 1e-14,
            max_steps: 50_000_000,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<(), OracleError> {
        let ok = self.rel_tol > 0.0
            && self.abs_tol > 0.0
            && self.max_step > 0.0
            && self.initial_step > 0.0
            && self.min_step > 0.0
            && self.max_steps > 0;
        if ok {
            Ok(())
        } else {
            Err(OracleError::Config(format!("{self:?}")))
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
    pub rhs_evals: usize,
}

impl std::ops::AddAssign for StepStats {
    fn add_assign(&mut self, o: Self) {
        self.accepted += o.accepted;
        self.rejected += o.rejected;
        self.rhs_evals += o.rhs_evals;
    }
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
/// Fifth-order minus embedded fourth-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Reusable stage storage.
pub struct DormandPrince {
    k: [Vec<C64>; 7],
    tmp: Vec<C64>,
}

impl DormandPrince {
    pub fn new(dim: usize) -> Self {
        let z = || vec![C64::new(0.0, 0.0); dim];
        DormandPrince { k: [z(), z(), z(), z(), z(), z(), z()], tmp: z() }
    }

    /// Advances `y` from `t0` to exactly `t1`. `h` carries the step size in
    /// and out so consecutive segments continue smoothly. `on_accept` sees
    /// every accepted step and may abort the run.
    #[allow(clippy::too_many_arguments)]
    pub fn integrate<F, S>(
        &mut self,
        mut rhs: F,
        t0: f64,
        y: &mut [C64],
        t1: f64,
        cfg: &IntegratorConfig,
        h: &mut f64,
        mut on_accept: S,
    ) -> Result<StepStats, OracleError>
    where
        F: FnMut(f64, &[C64], &mut [C64]),
        S: FnMut(f64, &[C64]) -> Result<(), OracleError>,
    {
        let mut stats = StepStats::default();
        if t1 <= t0 {
            return Ok(stats);
        }
        let mut t = t0;
        if !(*h > 0.0) || !h.is_finite() {
            *h = cfg.initial_step;
        }
        rhs(t, y, &mut self.k[0]);
        stats.rhs_evals += 1;
        let mut last_rejected = false;
        while t < t1 {
            if stats.accepted + stats.rejected >= cfg.max_steps {
                return Err(OracleError::TooManySteps { time: t });
            }
            let mut step = h.min(cfg.max_step);
            let hits_end = t + step >= t1;
            if hits_end {
                step = t1 - t;
            }
            for s in 1..7 {
                for i in 0..y.len() {
                    let mut acc = C64::new(0.0, 0.0);
                    for (j, a) in A[s].iter().enumerate().take(s) {
                        if *a != 0.0 {
                            acc += self.k[j][i] * *a;
                        }
                    }
                    self.tmp[i] = y[i] + acc * step;
                }
                rhs(t + C[s] * step, &self.tmp, &mut self.k[s]);
                stats.rhs_evals += 1;
            }
            // tmp now holds the fifth-order solution (stage 7 argument).
            let mut err: f64 = 0.0;
            for i in 0..y.len() {
                let mut e = C64::new(0.0, 0.0);
                for (j, w) in E.iter().enumerate() {
                    if *w != 0.0 {
                        e += self.k[j][i] * *w;
                    }
                }
                let scale = cfg.abs_tol + cfg.rel_tol * y[i].norm().max(self.tmp[i].norm());
                err = err.max((e * step).norm() / scale);
            }
            if err <= 1.0 {
                t = if hits_end { t1 } else { t + step };
                y.copy_from_slice(&self.tmp);
                self.k.swap(0, 6);
                stats.accepted += 1;
                on_accept(t, y)?;
                let grow = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
                let grown = if last_rejected { step.min(step * grow) } else { step * grow };
                // A step shortened only to land on t1 should not shrink the next segment.
                *h = if hits_end { h.max(grown) } else { grown };
                last_rejected = false;
            } else {
                stats.rejected += 1;
                *h = step * (0.9 * err.powf(-0.2)).clamp(0.2, 1.0);
                last_rejected = true;
                if *h < cfg.min_step {
                    return Err(OracleError::StepUnderflow { time: t, step: *h });
                }
            }
        }
        Ok(stats)
    }
}
