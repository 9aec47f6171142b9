//! Disentangled forms of the drive-on exponentials, checked against direct
//! exponentiation of the vectorized generators.

use nalgebra::{DMatrix, DVector};
use nalgebra_sparse::CsrMatrix;

use crate::analytic::phase::{p_fn, q_fn, z_fn};
use crate::oracle::fock::{annihilation, coherent_vector};
use crate::{Model64, C64};

use super::{LieError, SuperOpRep};

const TAYLOR_TERMS: usize = 80;

/// `exp(t A) v` by a Taylor series on substeps with `||t A||_1 / s <= 1`.
pub fn expm_action(a: &CsrMatrix<C64>, t: f64, v: &DVector<C64>) -> DVector<C64> {
    let mut col_sums = vec![0.0; a.ncols()];
    for (_, c, x) in a.triplet_iter() {
        col_sums[c] += x.norm();
    }
    let norm = col_sums.iter().cloned().fold(0.0, f64::max) * t.abs();
    let steps = norm.ceil().max(1.0) as usize;
    let h = t / steps as f64;
    let mut out = v.clone();
    for _ in 0..steps {
        let mut term = out.clone();
        let mut sum = out.clone();
        for j in 1..=TAYLOR_TERMS {
            term = (a * &term) * C64::from(h / j as f64);
            sum += &term;
            if term.norm() <= 1e-18 * sum.norm() {
                break;
            }
        }
        out = sum;
    }
    out
}

/// `D(beta) = exp(beta a^dag - beta* a)` on `dim` states, computed on a
/// doubled space and cropped so that truncation does not distort the kept block.
pub fn displacement(beta: C64, dim: usize) -> DMatrix<C64> {
    let big = 2 * dim + 20;
    let a = annihilation(big);
    let gen = a.adjoint() * beta - &a * beta.conj();
    gen.exp().view((0, 0), (dim, dim)).into_owned()
}

/// `exp(c a)` or `exp(c a^dag)`; both are exact on the truncated space.
fn ladder_exp(c: C64, dim: usize, raising: bool) -> DMatrix<C64> {
    let a = annihilation(dim);
    let g = if raising { a.adjoint() * c } else { a * c };
    g.exp()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DisentangleReport {
    /// Trace norm of the difference between the two sides.
    pub deviation: f64,
    /// Frobenius weight of the directly exponentiated result on the edge band.
    pub edge_weight: f64,
}

fn unvec(v: &DVector<C64>, dim: usize) -> DMatrix<C64> {
    DMatrix::from_column_slice(dim, dim, v.as_slice())
}

fn vec_of(m: &DMatrix<C64>) -> DVector<C64> {
    DVector::from_column_slice(m.as_slice())
}

fn edge_weight(m: &DMatrix<C64>, margin: usize) -> f64 {
    let dim = m.nrows();
    let edge = dim.saturating_sub(margin);
    let mut acc = 0.0;
    for j in 0..dim {
        for i in 0..dim {
            if i >= edge || j >= edge {
                acc += m[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

fn trace_norm(m: &DMatrix<C64>) -> f64 {
    m.singular_values().sum()
}

fn stationary_projector(model: &Model64, dim: usize, weight: f64) -> DMatrix<C64> {
    let c = coherent_vector(model.stationary_amplitude(), dim);
    &c * c.adjoint() * C64::from(weight)
}

fn guard(rep: &SuperOpRep, margin: usize, direct: &DMatrix<C64>) -> Result<f64, LieError> {
    if rep.dim() < margin + 4 {
        return Err(LieError::TooSmall { dim: rep.dim(), margin });
    }
    let w = edge_weight(direct, margin);
    if w > 1e-8 {
        return Err(LieError::Truncation(w));
    }
    Ok(w)
}

/// `exp((L_+ + L_S) t) rho0` against `D(b_e) [exp(L_+ t) rho0] D^dag(b_e)`
/// with `rho0 = |-iF/k><-iF/k|`.
pub fn check_diagonal_disentangling(
    model: &Model64,
    t: f64,
    rep: &SuperOpRep,
    margin: usize,
) -> Result<DisentangleReport, LieError> {
    let dim = rep.dim();
    let rho0 = vec_of(&stationary_projector(model, dim, 1.0));
    let lp = rep.l_plus(model.omega(), model.kappa());
    let full = &lp + &rep.l_source(model.drive());
    let direct = unvec(&expm_action(&full, t, &rho0), dim);
    let edge = guard(rep, margin, &direct)?;
    let inner = unvec(&expm_action(&lp, t, &rho0), dim);
    let d = displacement(model.coherent_pair(t).beta_e, dim);
    let factored = &d * inner * d.adjoint();
    Ok(DisentangleReport { deviation: trace_norm(&(direct - factored)), edge_weight: edge })
}

/// `exp((L_eg + L_S) t) rho0` against
/// `e^{z + |F|^2(p^2 - q^2 + 2pq + |p+q|^2)} D(b_e) e^{2F*(Re p - i Im q) a}
///  [exp(L_eg t) rho0] e^{-2F(Re p - i Im q) a^dag} D^dag(b_g)`
/// with `rho0 = |-iF/k><-iF/k| / 2`.
pub fn check_offdiagonal_disentangling(
    model: &Model64,
    t: f64,
    rep: &SuperOpRep,
    margin: usize,
) -> Result<DisentangleReport, LieError> {
    let dim = rep.dim();
    let rho0 = vec_of(&stationary_projector(model, dim, 0.5));
    let leg = rep.l_eg(model.omega(), model.kappa());
    let full = &leg + &rep.l_source(model.drive());
    let direct = unvec(&expm_action(&full, t, &rho0), dim);
    let edge = guard(rep, margin, &direct)?;
    let inner = unvec(&expm_action(&leg, t, &rho0), dim);
    let (z, p, q) = (z_fn(model, t), p_fn(model, t), q_fn(model, t));
    let f = model.drive();
    let a2 = model.drive_sq();
    let prefactor = (z + (p * p - q * q + p * q * 2.0 + C64::from((p + q).norm_sqr())) * a2).exp();
    let g = C64::new(p.re, -q.im);
    let pair = model.coherent_pair(t);
    let left = displacement(pair.beta_e, dim) * ladder_exp(f.conj() * g * 2.0, dim, false);
    let right = ladder_exp(-f * g * 2.0, dim, true) * displacement(pair.beta_g, dim).adjoint();
    let factored = left * inner * right * prefactor;
    Ok(DisentangleReport { deviation: trace_norm(&(direct - factored)), edge_weight: edge })
}
