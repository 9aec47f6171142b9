//! Closed-form evolution of the atom–field state.
//!
//! For an initial state `(c_e|e> + c_g|g>) (x) |-iF/k>` the joint state stays
//! inside the span of two coherent states:
//!
//! ```text
//! rho(t) = |c_e|^2 |e,b_e'><e,b_e'| + |c_g|^2 |g,b_g'><g,b_g'|
//!        + (c_e c_g* e^{Phi} |e,b_e'><g,b_g'| + h.c.)
//! ```
//!
//! Everything below is a function of the two amplitudes `b_e'(t)`, `b_g'(t)`
//! ([`CoherentPair`]) and of the phase `Phi(t)` ([`PhaseParts`]). The
//! entropies, eigenvalues, correlation and concurrence assume the symmetric
//! atomic superposition `c_e = c_g = 1/sqrt(2)`.

mod critical;
pub(crate) mod phase;

pub use critical::{
    Classification, CriticalInstant, CriticalKind, CriticalScan, DEFAULT_GRID_DIVISIONS,
};
pub use phase::PhaseParts;

use num_complex::Complex;

use crate::model::{AtomicAmplitudes, Model, ModelError};
use crate::scalar::{cplx, exp_m1, imag_unit, lit, Real};

/// Field amplitudes conditioned on the atomic level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentPair<T> {
    pub beta_e: Complex<T>,
    pub beta_g: Complex<T>,
    pub beta_e_prime: Complex<T>,
    pub beta_g_prime: Complex<T>,
    /// `|beta_e' - beta_g'|^2`.
    pub dist_sq: T,
}

/// All scalar observables of the symmetric initial state at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateRecord<T> {
    pub t: T,
    /// Linear entropy of the joint state.
    pub zeta: T,
    pub zeta_atom: T,
    pub zeta_field: T,
    /// Hilbert–Schmidt total correlation `tr(rho - rho_a (x) rho_f)^2`.
    pub corr: T,
    pub concurrence: T,
    pub lambda_plus: T,
    pub lambda_minus: T,
    pub field_lambda_plus: T,
    pub field_lambda_minus: T,
    /// `Im(b_e' b_g'*)`.
    pub chi: T,
    pub re_phi: T,
    pub im_phi: T,
    pub dist_sq: T,
}

/// One weighted dyad `weight |ket><bra|` of coherent states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dyad<T> {
    pub weight: Complex<T>,
    pub ket: Complex<T>,
    pub bra: Complex<T>,
}

/// Field operators `<i|rho|j>` for the atomic levels, in coherent-state form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatrixElements<T> {
    pub ee: Dyad<T>,
    pub gg: Dyad<T>,
    /// `rho_ge` is the adjoint of this dyad.
    pub eg: Dyad<T>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharacteristicTimes<T> {
    /// Long-time decoherence time of the joint state.
    pub long_time: T,
    /// Short-time decoherence time of the joint state.
    pub short_time: T,
    /// Short-time decoherence time of the atom.
    pub atom_short_time: T,
}

/// Asymptotic, classically correlated state: `weight_e |amp_e><amp_e| (x) |e><e| + ...`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationaryState<T> {
    pub weight_e: T,
    pub amp_e: Complex<T>,
    pub weight_g: T,
    pub amp_g: Complex<T>,
}

impl<T: Real> Model<T> {
    /// `b_e(t)`, `b_g(t)`, the primed amplitudes and their squared distance.
    pub fn coherent_pair(&self, t: T) -> CoherentPair<T> {
        let i = imag_unit::<T>();
        let (k, w, f) = (self.kappa(), self.omega(), self.drive());
        let down = cplx(k, w) * t;
        let up = cplx(k, -w) * t;
        let beta_e = f / cplx(w, -k) * exp_m1(-down);
        let beta_g = -f / cplx(w, k) * exp_m1(-up);
        let beta_e_prime = beta_e - i * f / k * (-down).exp();
        let beta_g_prime = beta_g - i * f / k * (-up).exp();
        let dist_sq = (beta_e_prime - beta_g_prime).norm_sqr();
        CoherentPair { beta_e, beta_g, beta_e_prime, beta_g_prime, dist_sq }
    }

    /// The primed amplitudes for `t -> infinity`: `-F/(omega - ik)` and `F/(omega + ik)`.
    pub fn asymptotic_pair(&self) -> (Complex<T>, Complex<T>) {
        let (k, w, f) = (self.kappa(), self.omega(), self.drive());
        (-f / cplx(w, -k), f / cplx(w, k))
    }

    /// `k(e^{-kt} cos wt - 1) - w e^{-kt} sin wt`; vanishes at the
    /// disentanglement instants.
    pub fn distance_bracket(&self, t: T) -> T {
        let (k, w) = (self.kappa(), self.omega());
        let (sn, cs) = (w * t).sin_cos();
        let half = (w * t / lit(2.0)).sin();
        // e^{-kt} cos wt - 1 = expm1(-kt) cos wt - 2 sin^2(wt/2)
        let shifted = (-k * t).exp_m1() * cs - lit::<T>(2.0) * half * half;
        k * shifted - w * (-k * t).exp() * sn
    }

    /// `D^2 = 4|F|^2 w^2 B(t)^2 / (k^2 (k^2 + w^2)^2)` with `B` the
    /// [`distance_bracket`](Self::distance_bracket).
    pub fn distance_sq_closed_form(&self, t: T) -> T {
        let (k, w) = (self.kappa(), self.omega());
        let b = self.distance_bracket(t);
        let d = k * k + w * w;
        lit::<T>(4.0) * self.drive_sq() * w * w * b * b / (k * k * d * d)
    }

    /// Coherent-state form of `rho_ee`, `rho_gg`, `rho_eg` for an arbitrary
    /// atomic superposition and the stationary initial field.
    pub fn matrix_elements(&self, amps: &AtomicAmplitudes<T>, t: T) -> MatrixElements<T> {
        let pair = self.coherent_pair(t);
        let (ce, cg) = (amps.c_e(), amps.c_g());
        let zero = Complex::new(T::zero(), T::zero());
        let weight_eg = if ce == zero || cg == zero {
            zero
        } else {
            ce * cg.conj() * self.phase(t).exp()
        };
        MatrixElements {
            ee: Dyad {
                weight: Complex::from(ce.norm_sqr()),
                ket: pair.beta_e_prime,
                bra: pair.beta_e_prime,
            },
            gg: Dyad {
                weight: Complex::from(cg.norm_sqr()),
                ket: pair.beta_g_prime,
                bra: pair.beta_g_prime,
            },
            eg: Dyad { weight: weight_eg, ket: pair.beta_e_prime, bra: pair.beta_g_prime },
        }
    }

    /// `(lambda_+, lambda_-, Im Phi)` of the joint state.
    pub fn global_eigen(&self, t: T) -> (T, T, T) {
        let phi = self.phase(t);
        let (plus, minus) = split_half(phi.re);
        (plus, minus, phi.im)
    }

    /// `1 - tr rho^2 = (1 - e^{2 Re Phi})/2`.
    pub fn zeta_global(&self, t: T) -> T {
        half_defect(lit::<T>(2.0) * self.phase(t).re)
    }

    /// `(1 - e^{2 Re Phi - D^2})/2`.
    pub fn zeta_atom(&self, t: T) -> T {
        half_defect(lit::<T>(2.0) * self.phase(t).re - self.distance_sq_closed_form(t))
    }

    /// `(1 - e^{-D^2})/2`.
    pub fn zeta_field(&self, t: T) -> T {
        half_defect(-self.distance_sq_closed_form(t))
    }

    /// `(Lambda_+, Lambda_-, chi)` of the field state.
    pub fn field_eigen(&self, t: T) -> (T, T, T) {
        let d2 = self.distance_sq_closed_form(t);
        let (plus, minus) = split_half(-d2 / lit(2.0));
        let pair = self.coherent_pair(t);
        (plus, minus, (pair.beta_e_prime * pair.beta_g_prime.conj()).im)
    }

    /// `(lambda_g', lambda_e')` of the atomic state.
    pub fn atom_eigen(&self, t: T) -> (T, T) {
        let arg = self.phase(t).re - self.distance_sq_closed_form(t) / lit(2.0);
        split_half(arg)
    }

    pub fn total_correlation(&self, t: T) -> T {
        let zeta = self.zeta_global(t);
        let zf = self.zeta_field(t);
        total_correlation_from(zeta, zf)
    }

    /// `2 |lambda_+ - lambda_-| sqrt(Lambda_+ Lambda_-) = e^{Re Phi} sqrt(1 - e^{-D^2})`.
    pub fn concurrence(&self, t: T) -> T {
        concurrence_from(self.phase(t).re, self.distance_sq_closed_form(t))
    }

    /// Every scalar observable at `t`, sharing one evaluation of `Phi` and `D^2`.
    pub fn state_record(&self, t: T) -> StateRecord<T> {
        self.state_record_with_phase(t, self.phase(t))
    }

    /// As [`state_record`](Self::state_record) but with a caller-supplied
    /// phase. Used to inject faults into verification runs.
    pub fn state_record_with_phase(&self, t: T, phi: Complex<T>) -> StateRecord<T> {
        let d2 = self.distance_sq_closed_form(t);
        let pair = self.coherent_pair(t);
        let two = lit::<T>(2.0);
        let zeta = half_defect(two * phi.re);
        let zeta_field = half_defect(-d2);
        let (lambda_plus, lambda_minus) = split_half(phi.re);
        let (field_lambda_plus, field_lambda_minus) = split_half(-d2 / two);
        StateRecord {
            t,
            zeta,
            zeta_atom: half_defect(two * phi.re - d2),
            zeta_field,
            corr: total_correlation_from(zeta, zeta_field),
            concurrence: concurrence_from(phi.re, d2),
            lambda_plus,
            lambda_minus,
            field_lambda_plus,
            field_lambda_minus,
            chi: (pair.beta_e_prime * pair.beta_g_prime.conj()).im,
            re_phi: phi.re,
            im_phi: phi.im,
            dist_sq: d2,
        }
    }

    /// Long-time, short-time and atomic short-time decoherence scales.
    pub fn characteristic_times(&self) -> Result<CharacteristicTimes<T>, ModelError> {
        if self.omega() == T::zero() {
            return Err(ModelError::Degenerate("characteristic times diverge for omega = 0"));
        }
        if self.drive_sq() == T::zero() {
            return Err(ModelError::Degenerate("characteristic times diverge for F = 0"));
        }
        let (k, w, a) = (self.kappa(), self.omega(), self.drive_sq());
        let d = k * k + w * w;
        let long_time = d * d / (lit::<T>(4.0) * w * w * k * a);
        let ratio = w / k;
        let inv_cube = a * k * (T::one() + lit::<T>(4.0 / 3.0) * ratio * ratio);
        let short_time = inv_cube.powf(-T::one() / lit(3.0));
        let atom_short_time = k / (lit::<T>(2.0) * a.sqrt() * w);
        Ok(CharacteristicTimes { long_time, short_time, atom_short_time })
    }

    /// Asymptotic state for an arbitrary atomic superposition.
    pub fn stationary_state(&self, amps: &AtomicAmplitudes<T>) -> StationaryState<T> {
        let (k, w, f) = (self.kappa(), self.omega(), self.drive());
        StationaryState {
            weight_e: amps.c_e().norm_sqr(),
            amp_e: f / cplx(-w, k),
            weight_g: amps.c_g().norm_sqr(),
            amp_g: f / cplx(w, k),
        }
    }

    /// Asymptotic mean photon number `|F|^2 / (k^2 + omega^2)`.
    pub fn nbar_infinity(&self) -> T {
        let (k, w) = (self.kappa(), self.omega());
        self.drive_sq() / (k * k + w * w)
    }

    /// Coherent amplitude at `t` of the driven, damped mode alone, started in
    /// `|alpha0>`.
    pub fn driven_mode_state(&self, t: T, alpha0: Complex<T>) -> Complex<T> {
        let decay = (-self.kappa() * t).exp();
        let fill = -(-self.kappa() * t).exp_m1();
        alpha0 * decay + self.stationary_amplitude() * fill
    }
}

/// `(1 - e^{x})/2` without cancellation for small `x`.
#[inline]
fn half_defect<T: Real>(x: T) -> T {
    -x.exp_m1() / lit(2.0)
}

/// `((1 + e^{x})/2, (1 - e^{x})/2)`.
#[inline]
fn split_half<T: Real>(x: T) -> (T, T) {
    let minus = half_defect(x);
    (T::one() - minus, minus)
}

#[inline]
fn total_correlation_from<T: Real>(zeta: T, zeta_field: T) -> T {
    let two = lit::<T>(2.0);
    zeta_field / two * (T::one() + (T::one() - two * zeta) * (T::one() + two * zeta_field))
}

#[inline]
fn concurrence_from<T: Real>(re_phi: T, dist_sq: T) -> T {
    re_phi.exp() * (-(-dist_sq).exp_m1()).max(T::zero()).sqrt()
}

#[cfg(test)]
mod tests;
