//! Instants at which the field-state distance `D^2` is stationary.
//!
//! `dD^2/dt` is proportional to `B(t) B'(t)` with
//! `B'(t) = -(k^2 + omega^2) e^{-kt} cos(omega t)`, so the critical instants
//! are the zeros of `B` (the field returns to a pure state and the atom
//! disentangles) and the points `omega t = (2n + 1) pi / 2`.

use crate::model::{Model, ModelError};
use crate::scalar::{lit, Real};

/// Bracketing steps per `pi / omega`.
pub const DEFAULT_GRID_DIVISIONS: usize = 64;

const MAX_BISECTIONS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CriticalKind {
    /// `D^2(t_c) = 0`.
    Disentangle,
    /// `cos(omega t_c) = 0`.
    Extremum,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Classification {
    LocalMax,
    LocalMin,
}

impl CriticalKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CriticalKind::Disentangle => "disentangle",
            CriticalKind::Extremum => "extremum",
        }
    }
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::LocalMax => "local_max",
            Classification::LocalMin => "local_min",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalInstant<T> {
    pub t_c: T,
    pub kind: CriticalKind,
    pub classification: Classification,
    /// `n` in `omega t_c = (2n + 1) pi / 2`; for zeros of `D^2`, the ordinal
    /// of the root.
    pub n_index: usize,
}

/// Every critical instant in `(0, t_max]`, sorted by time.
#[derive(Debug, Clone, PartialEq)]
pub struct CriticalScan<T> {
    pub instants: Vec<CriticalInstant<T>>,
    /// `(1/k) ln(omega/k)`; non-positive unless `k < omega`.
    pub t_trans: T,
}

impl<T: Real> CriticalScan<T> {
    pub fn of_kind(&self, kind: CriticalKind) -> impl Iterator<Item = &CriticalInstant<T>> + '_ {
        self.instants.iter().filter(move |c| c.kind == kind)
    }
}

impl<T: Real> Model<T> {
    /// `(1/k) ln(omega/k)`: for `k < omega`, odd-`n` extrema before this time
    /// are maxima of `D^2` and minima after it.
    pub fn transition_time(&self) -> T {
        (self.omega() / self.kappa()).ln() / self.kappa()
    }

    pub fn critical_instants(&self, t_max: T) -> Result<CriticalScan<T>, ModelError> {
        self.critical_instants_with(t_max, DEFAULT_GRID_DIVISIONS)
    }

    /// As [`critical_instants`](Self::critical_instants) with the bracketing
    /// grid spacing set to `pi / (divisions * omega)`.
    pub fn critical_instants_with(
        &self,
        t_max: T,
        divisions: usize,
    ) -> Result<CriticalScan<T>, ModelError> {
        if self.omega() <= T::zero() {
            return Err(ModelError::Degenerate("critical instants need omega > 0"));
        }
        if !(t_max > T::zero()) || !t_max.is_finite() {
            return Err(ModelError::InvalidGrid(format!("t_max must be positive and finite (got {t_max})")));
        }
        if divisions == 0 {
            return Err(ModelError::InvalidGrid("grid divisions must be positive".into()));
        }
        let mut instants = self.disentangle_roots(t_max, divisions);
        let t_trans = self.transition_time();
        let w = self.omega();
        let subcritical = self.kappa() < w;
        let mut n = 0usize;
        loop {
            let t_c = lit::<T>(2.0 * n as f64 + 1.0) * T::FRAC_PI_2() / w;
            if t_c > t_max {
                break;
            }
            let classification = if n % 2 == 0 || (subcritical && t_c < t_trans) {
                Classification::LocalMax
            } else {
                Classification::LocalMin
            };
            instants.push(CriticalInstant { t_c, kind: CriticalKind::Extremum, classification, n_index: n });
            n += 1;
        }
        instants.sort_by(|a, b| a.t_c.partial_cmp(&b.t_c).expect("finite critical instants"));
        Ok(CriticalScan { instants, t_trans })
    }

    fn disentangle_roots(&self, t_max: T, divisions: usize) -> Vec<CriticalInstant<T>> {
        let step = T::PI() / (lit::<T>(divisions as f64) * self.omega());
        let steps = (t_max / step).ceil().to_usize().unwrap_or(0);
        let rel_tol = lit::<T>(1e-12).max(lit::<T>(4.0) * T::epsilon());
        let mut roots = Vec::new();
        // B(0) = 0 is the trivial root; B'(0) < 0 so the scan starts just after it.
        let mut lo = step.min(t_max);
        let mut b_lo = self.distance_bracket(lo);
        for j in 2..=steps.max(1) {
            let hi = (step * lit(j as f64)).min(t_max);
            let b_hi = self.distance_bracket(hi);
            if b_hi == T::zero() || (b_lo < T::zero()) != (b_hi < T::zero()) {
                let t_c = if b_hi == T::zero() { hi } else { self.bisect(lo, hi, b_lo, rel_tol) };
                roots.push(CriticalInstant {
                    t_c,
                    kind: CriticalKind::Disentangle,
                    classification: Classification::LocalMin,
                    n_index: roots.len(),
                });
            }
            lo = hi;
            b_lo = b_hi;
            if hi >= t_max {
                break;
            }
        }
        roots
    }

    fn bisect(&self, mut lo: T, mut hi: T, b_lo: T, rel_tol: T) -> T {
        let lo_negative = b_lo < T::zero();
        for _ in 0..MAX_BISECTIONS {
            if hi - lo <= rel_tol * hi {
                break;
            }
            let mid = (lo + hi) / lit(2.0);
            let b = self.distance_bracket(mid);
            if b == T::zero() {
                return mid;
            }
            if (b < T::zero()) == lo_negative {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        (lo + hi) / lit(2.0)
    }
}
