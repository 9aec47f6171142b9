//! Residuals of the ordering-function ODEs, with derivatives taken by
//! central differences of the closed-form solutions.

use crate::analytic::phase::{p_fn, q_fn, z_fn};
use crate::model::TimeGrid;
use crate::{Model64, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OdeSystem {
    /// `lambda, x_-, y_-` of the diagonal elements.
    Diagonal,
    /// `s, q, p, z` of the coherence.
    OffDiagonal,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OdeResidualReport {
    pub system: OdeSystem,
    pub grid: TimeGrid<f64>,
    /// Largest residual over the interior grid points and all equations.
    pub max_residual: f64,
    /// Largest modulus of the unknown functions at `t = 0`.
    pub initial_value: f64,
}

fn central<F: Fn(f64) -> C64>(f: &F, t: f64, h: f64) -> C64 {
    (f(t + h) - f(t - h)) / (2.0 * h)
}

/// `lambda' = 1`, `x' + (k + i omega) x = -iF`, `y' + (k - i omega) y = iF*`
/// with `lambda = t`, `x = b_e(t)`, `y = b_e(t)*`.
pub fn residual_diagonal(model: &Model64, grid: &TimeGrid<f64>) -> OdeResidualReport {
    let (k, w, f) = (model.kappa(), model.omega(), model.drive());
    let i = C64::i();
    let lambda = |t: f64| C64::from(t);
    let x = |t: f64| model.coherent_pair(t).beta_e;
    let y = |t: f64| model.coherent_pair(t).beta_e.conj();
    let h = grid.spacing();
    let mut worst: f64 = 0.0;
    for j in 1..grid.len() - 1 {
        let t = grid.point(j);
        let r = [
            central(&lambda, t, h) - 1.0,
            central(&x, t, h) + C64::new(k, w) * x(t) + i * f,
            central(&y, t, h) + C64::new(k, -w) * y(t) - i * f.conj(),
        ];
        worst = r.iter().map(|v| v.norm()).fold(worst, f64::max);
    }
    let initial_value = [lambda(0.0), x(0.0), y(0.0)].iter().map(|v| v.norm()).fold(0.0, f64::max);
    OdeResidualReport { system: OdeSystem::Diagonal, grid: *grid, max_residual: worst, initial_value }
}

/// `s' = 1`, `q' - (kq - i omega p) = 0`, `p' + q(2k + i omega) + kp = -i`,
/// `z' + 4 q' p |F|^2 + 2|F|^2 [i omega p^2 - q^2 (2k + i omega) - 2kpq] = 0`.
pub fn residual_offdiagonal(model: &Model64, grid: &TimeGrid<f64>) -> OdeResidualReport {
    let (k, w) = (model.kappa(), model.omega());
    let a = model.drive_sq();
    let i = C64::i();
    let s = |t: f64| C64::from(t);
    let p = |t: f64| p_fn(model, t);
    let q = |t: f64| q_fn(model, t);
    let z = |t: f64| z_fn(model, t);
    let h = grid.spacing();
    let two_k_iw = C64::new(2.0 * k, w);
    let mut worst: f64 = 0.0;
    for j in 1..grid.len() - 1 {
        let t = grid.point(j);
        let (pv, qv) = (p(t), q(t));
        let dq = central(&q, t, h);
        let r = [
            central(&s, t, h) - 1.0,
            dq - (qv * k - i * w * pv),
            central(&p, t, h) + qv * two_k_iw + pv * k + i,
            central(&z, t, h)
                + dq * pv * (4.0 * a)
                + (i * w * pv * pv - qv * qv * two_k_iw - pv * qv * (2.0 * k)) * (2.0 * a),
        ];
        worst = r.iter().map(|v| v.norm()).fold(worst, f64::max);
    }
    let initial_value = [s(0.0), q(0.0), p(0.0), z(0.0)].iter().map(|v| v.norm()).fold(0.0, f64::max);
    OdeResidualReport { system: OdeSystem::OffDiagonal, grid: *grid, max_residual: worst, initial_value }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ModelParams;

    fn model(w: f64, k: f64, f: f64) -> Model64 {
        ModelParams::new(w, k, C64::new(f, 0.0)).validate().unwrap()
    }

    #[test]
    fn diagonal_residual_is_second_order() {
        let m = model(1.0, 1.0, 1.0);
        let coarse = residual_diagonal(&m, &TimeGrid::new(5.0, 1000).unwrap());
        assert!(coarse.max_residual <= 1e-4);
        assert_eq!(coarse.initial_value, 0.0);
        let fine = residual_diagonal(&m, &TimeGrid::new(5.0, 1999).unwrap());
        let ratio = coarse.max_residual / fine.max_residual;
        assert!((3.5..=4.5).contains(&ratio), "{ratio}");
    }

    #[test]
    fn offdiagonal_residual_is_second_order() {
        let m = model(1.0, 0.2, 0.2);
        let coarse = residual_offdiagonal(&m, &TimeGrid::new(5.0, 1000).unwrap());
        assert!(coarse.max_residual <= 1e-4);
        assert_eq!(coarse.initial_value, 0.0);
        let fine = residual_offdiagonal(&m, &TimeGrid::new(5.0, 1999).unwrap());
        let ratio = coarse.max_residual / fine.max_residual;
        assert!((3.5..=4.5).contains(&ratio), "{ratio}");
    }

    #[test]
    fn undriven_diagonal_system_is_trivial() {
        let m = model(1.0, 1.0, 0.0);
        let r = residual_diagonal(&m, &TimeGrid::new(5.0, 1000).unwrap());
        assert!(r.max_residual <= 1e-10);
    }

    #[test]
    fn offdiagonal_equations_vanish_at_origin() {
        let m = model(1.0, 0.2, 0.2);
        let (p, q) = (p_fn(&m, 0.0), q_fn(&m, 0.0));
        let r = q - (q * 0.2 - C64::i() * p);
        assert_eq!(r.norm(), 0.0);
    }
}
