//! Physical parameters, initial atomic states and time grids.
//!
//! Every other module consumes a [`Model`], which can only be obtained through
//! [`ModelParams::validate`]. Units are arbitrary but must be consistent: the
//! dispersive coupling `omega` and the drive `drive` are angular frequencies,
//! `kappa` is a rate.

use num_complex::Complex;
use thiserror::Error;

use crate::scalar::{imag_unit, lit, Real};

/// Ratio between `|delta|/G` and `|F|/k` below which the dispersive regime is
/// considered questionable.
pub const DISPERSIVE_MARGIN: f64 = 10.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("kappa must be positive (got {0})")]
    NonPositiveKappa(f64),
    #[error("omega must be non-negative (got {0})")]
    NegativeOmega(f64),
    #[error("{0} must be finite")]
    NonFinite(&'static str),
    #[error("dispersive validity pair needs G > 0 and delta != 0 (got G={coupling}, delta={detuning})")]
    InvalidValidity { coupling: f64, detuning: f64 },
    #[error("atomic amplitudes are not normalized: |c_e|^2 + |c_g|^2 = {0}")]
    NotNormalized(f64),
    #[error("invalid time grid: {0}")]
    InvalidGrid(String),
    #[error("{0}")]
    Degenerate(&'static str),
}

/// Atom–field coupling `G` and detuning `delta`, used only for the
/// dispersive-regime check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersiveValidity<T> {
    pub coupling: T,
    pub detuning: T,
}

/// Raw, unchecked parameter set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams<T> {
    /// Effective dispersive coupling `G^2/delta`.
    pub omega: T,
    /// Cavity damping rate.
    pub kappa: T,
    /// Coherent source coupling.
    pub drive: Complex<T>,
    pub validity: Option<DispersiveValidity<T>>,
}

/// Emitted by [`ModelParams::validate`] when `|delta|/G < 10 |F|/k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersiveWarning<T> {
    pub detuning_over_coupling: T,
    pub drive_over_kappa: T,
}

/// Validated parameters. All closed-form and oracle computations hang off
/// this type.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Model<T> {
    params: ModelParams<T>,
    warning: Option<DispersiveWarning<T>>,
}

impl<T: Real> ModelParams<T> {
    pub fn new(omega: T, kappa: T, drive: Complex<T>) -> Self {
        Self { omega, kappa, drive, validity: None }
    }

    /// Builds the parameter set from the dimensionless ratios `k/omega` and
    /// `|F|/k`, with a real positive drive.
    pub fn from_ratios(omega: T, kappa_over_omega: T, drive_over_kappa: T) -> Self {
        let kappa = kappa_over_omega * omega;
        Self::new(omega, kappa, Complex::new(drive_over_kappa * kappa, T::zero()))
    }

    pub fn with_validity(mut self, coupling: T, detuning: T) -> Self {
        self.validity = Some(DispersiveValidity { coupling, detuning });
        self
    }

    /// Checks the invariants and returns the validated model.
    ///
    /// A questionable dispersive regime is reported as a warning (logged and
    /// kept on the returned model), never as an error.
    pub fn validate(self) -> Result<Model<T>, ModelError> {
        let f = |x: T| x.to_f64().unwrap_or(f64::NAN);
        if !self.omega.is_finite() {
            return Err(ModelError::NonFinite("omega"));
        }
        if !self.kappa.is_finite() {
            return Err(ModelError::NonFinite("kappa"));
        }
        if !(self.drive.re.is_finite() && self.drive.im.is_finite()) {
            return Err(ModelError::NonFinite("drive"));
        }
        if self.kappa <= T::zero() {
            return Err(ModelError::NonPositiveKappa(f(self.kappa)));
        }
        if self.omega < T::zero() {
            return Err(ModelError::NegativeOmega(f(self.omega)));
        }
        let mut warning = None;
        if let Some(v) = self.validity {
            let ok = v.coupling.is_finite()
                && v.detuning.is_finite()
                && v.coupling > T::zero()
                && v.detuning != T::zero();
            if !ok {
                return Err(ModelError::InvalidValidity {
                    coupling: f(v.coupling),
                    detuning: f(v.detuning),
                });
            }
            let detuning_over_coupling = v.detuning.abs() / v.coupling;
            let drive_over_kappa = self.drive.norm() / self.kappa;
            if detuning_over_coupling < lit::<T>(DISPERSIVE_MARGIN) * drive_over_kappa {
                log::warn!(
                    "dispersive approximation questionable: |delta|/G = {} < {} * |F|/k = {}",
                    detuning_over_coupling,
                    DISPERSIVE_MARGIN,
                    drive_over_kappa
                );
                warning = Some(DispersiveWarning { detuning_over_coupling, drive_over_kappa });
            }
        }
        Ok(Model { params: self, warning })
    }
}

impl<T: Real> Model<T> {
    pub fn params(&self) -> &ModelParams<T> {
        &self.params
    }

    pub fn warning(&self) -> Option<&DispersiveWarning<T>> {
        self.warning.as_ref()
    }

    #[inline]
    pub fn omega(&self) -> T {
        self.params.omega
    }

    #[inline]
    pub fn kappa(&self) -> T {
        self.params.kappa
    }

    #[inline]
    pub fn drive(&self) -> Complex<T> {
        self.params.drive
    }

    /// `|F|^2`.
    #[inline]
    pub fn drive_sq(&self) -> T {
        self.params.drive.norm_sqr()
    }

    /// Stationary coherent amplitude `-iF/k` of the driven, damped mode.
    pub fn stationary_amplitude(&self) -> Complex<T> {
        -imag_unit::<T>() * self.params.drive / self.params.kappa
    }

    /// Same model with a different drive; the validity warning is kept as is.
    pub fn with_drive(&self, drive: Complex<T>) -> Self {
        Self { params: ModelParams { drive, ..self.params }, warning: self.warning }
    }
}

/// Atomic superposition `c_e|e> + c_g|g>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomicAmplitudes<T> {
    c_e: Complex<T>,
    c_g: Complex<T>,
}

impl<T: Real> AtomicAmplitudes<T> {
    pub fn new(c_e: Complex<T>, c_g: Complex<T>) -> Result<Self, ModelError> {
        let norm = c_e.norm_sqr() + c_g.norm_sqr();
        let tol = lit::<T>(1e-12).max(lit::<T>(16.0) * T::epsilon());
        if !norm.is_finite() || (norm - T::one()).abs() > tol {
            return Err(ModelError::NotNormalized(norm.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(Self { c_e, c_g })
    }

    /// `(|e> + |g>)/sqrt(2)`.
    pub fn symmetric() -> Self {
        let h = T::FRAC_1_SQRT_2();
        Self { c_e: Complex::new(h, T::zero()), c_g: Complex::new(h, T::zero()) }
    }

    /// `sin(phi)|e> + e^{i chi} cos(phi)|g>`.
    pub fn from_angles(phi: T, chi: T) -> Self {
        Self {
            c_e: Complex::new(phi.sin(), T::zero()),
            c_g: Complex::from_polar(phi.cos(), chi),
        }
    }

    pub fn excited() -> Self {
        Self { c_e: Complex::new(T::one(), T::zero()), c_g: Complex::new(T::zero(), T::zero()) }
    }

    pub fn ground() -> Self {
        Self { c_e: Complex::new(T::zero(), T::zero()), c_g: Complex::new(T::one(), T::zero()) }
    }

    pub fn c_e(&self) -> Complex<T> {
        self.c_e
    }

    pub fn c_g(&self) -> Complex<T> {
        self.c_g
    }
}

/// Uniform grid `0 = t_0 < t_1 < ... < t_{n-1} = t_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid<T> {
    t_max: T,
    n_points: usize,
}

impl<T: Real> TimeGrid<T> {
    pub fn new(t_max: T, n_points: usize) -> Result<Self, ModelError> {
        if n_points < 2 {
            return Err(ModelError::InvalidGrid(format!("need at least 2 points, got {n_points}")));
        }
        if !(t_max.is_finite() && t_max > T::zero()) {
            return Err(ModelError::InvalidGrid("t_max must be finite and positive".into()));
        }
        Ok(Self { t_max, n_points })
    }

    pub fn t_max(&self) -> T {
        self.t_max
    }

    pub fn len(&self) -> usize {
        self.n_points
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> T {
        self.t_max / T::from_usize(self.n_points - 1).unwrap()
    }

    /// The `i`-th grid point. The last point is exactly `t_max`.
    pub fn point(&self, i: usize) -> T {
        if i + 1 == self.n_points {
            self.t_max
        } else {
            T::from_usize(i).unwrap() * self.spacing()
        }
    }

    pub fn points(&self) -> impl Iterator<Item = T> + '_ {
        (0..self.n_points).map(move |i| self.point(i))
    }
}
