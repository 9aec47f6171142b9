//! Truncated Fock-space vectors and operators.

use nalgebra::{DMatrix, DVector};

use crate::C64;

/// `|alpha>` on `levels` Fock states, not renormalized after truncation.
pub fn coherent_vector(alpha: C64, levels: usize) -> DVector<C64> {
    let mut v = DVector::zeros(levels);
    if levels == 0 {
        return v;
    }
    v[0] = C64::from((-alpha.norm_sqr() / 2.0).exp());
    for n in 1..levels {
        v[n] = v[n - 1] * alpha / (n as f64).sqrt();
    }
    v
}

/// `D(alpha)|1> = (a^dag - alpha*)|alpha>`, orthogonal to `|alpha>`.
pub fn displaced_one(alpha: C64, levels: usize) -> DVector<C64> {
    let c = coherent_vector(alpha, levels);
    let mut v = c.map(|x| -alpha.conj() * x);
    for n in 1..levels {
        v[n] += (n as f64).sqrt() * c[n - 1];
    }
    v
}

/// Annihilation operator `a` on `levels` states.
pub fn annihilation(levels: usize) -> DMatrix<C64> {
    let mut a = DMatrix::zeros(levels, levels);
    for n in 1..levels {
        a[(n - 1, n)] = C64::from((n as f64).sqrt());
    }
    a
}

/// `sum_n n rho_nn`.
pub fn mean_number(rho_field: &DMatrix<C64>) -> f64 {
    (0..rho_field.nrows()).map(|n| n as f64 * rho_field[(n, n)].re).sum()
}

/// `tr(a rho)`.
pub fn mean_amplitude(rho_field: &DMatrix<C64>) -> C64 {
    (1..rho_field.nrows()).map(|n| (n as f64).sqrt() * rho_field[(n, n - 1)]).sum()
}

/// `<psi| rho |psi>`.
pub fn expectation(rho: &DMatrix<C64>, psi: &DVector<C64>) -> C64 {
    (psi.adjoint() * rho * psi)[(0, 0)]
}
