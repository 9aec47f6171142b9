//! Dispersive atom–cavity dynamics with a coherent drive and zero-temperature
//! cavity loss.
//!
//! The crate evaluates the closed-form evolution of a two-level atom coupled
//! dispersively to a damped, driven field mode ([`analytic`]) and checks every
//! formula against a brute-force integration of the master equation on a
//! truncated Fock space ([`oracle`]). The [`lie`] module verifies the
//! superoperator disentangling identities behind the closed forms, and
//! [`verify`] bundles the end-to-end acceptance checks used by the CLI.
//!
//! The closed-form layer is generic over the scalar type; the oracle and the
//! superoperator checks run in `f64` only.

pub mod analytic;
pub mod app;
pub mod lie;
pub mod model;
pub mod oracle;
pub mod scalar;
pub mod verify;

pub use num_complex::Complex;

pub use analytic::{CoherentPair, CriticalInstant, PhaseParts, StateRecord};
pub use model::{AtomicAmplitudes, Model, ModelError, ModelParams, TimeGrid};
pub use scalar::Real;

/// Complex double.
pub type C64 = Complex<f64>;

/// Double-precision parameter set.
pub type ModelParams64 = ModelParams<f64>;
/// Single-precision parameter set.
pub type ModelParams32 = ModelParams<f32>;
/// Validated double-precision model; the type every `f64` consumer uses.
pub type Model64 = Model<f64>;
/// Validated single-precision model.
pub type Model32 = Model<f32>;
/// Time grid in double precision.
pub type TimeGrid64 = TimeGrid<f64>;
