//! Reduced states, entropies and entanglement of dense density matrices.

use nalgebra::{DMatrix, DVector, Matrix2, Matrix4};

use crate::C64;

use super::fock::{coherent_vector, displaced_one, mean_number};
use super::{FockDensityMatrix, OracleError};

/// Inner products closer to 1 than this are treated as a single direction.
pub const DEGENERATE_OVERLAP: f64 = 1e-14;

/// Scalar observables of a joint state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observables {
    pub purity: f64,
    pub linear_entropy: f64,
    pub nbar: f64,
    /// Trace norm of the `<e| rho |g>` block.
    pub coherence_magnitude: f64,
}

/// Projection onto atom (x) span{|b_e'>, |b_g'>}.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    pub rho: Matrix4<C64>,
    /// `1 - tr` of the projected state before renormalization.
    pub leakage: f64,
    /// The two amplitudes coincided; the second field direction is
    /// `D(b_e')|1>`.
    pub degenerate: bool,
}

/// `tr_f rho`.
pub fn partial_trace_field(rho: &FockDensityMatrix) -> Matrix2<C64> {
    let l = rho.levels();
    let d = rho.data();
    Matrix2::from_fn(|a, b| (0..l).map(|n| d[(a * l + n, b * l + n)]).sum())
}

/// `tr_a rho`.
pub fn partial_trace_atom(rho: &FockDensityMatrix) -> DMatrix<C64> {
    let l = rho.levels();
    let d = rho.data();
    DMatrix::from_fn(l, l, |m, n| d[(m, n)] + d[(l + m, l + n)])
}

/// `tr(rho^2)` of a Hermitian matrix as the squared Frobenius norm.
pub fn purity<R: nalgebra::Dim, S: nalgebra::storage::Storage<C64, R, R>>(
    m: &nalgebra::Matrix<C64, R, R, S>,
) -> f64 {
    m.iter().map(|x| x.norm_sqr()).sum()
}

pub fn observables(rho: &FockDensityMatrix) -> Observables {
    let p = purity(rho.data());
    let l = rho.levels();
    let coherence = rho.data().view((0, l), (l, l)).singular_values().sum();
    Observables {
        purity: p,
        linear_entropy: 1.0 - p,
        nbar: mean_number(&partial_trace_atom(rho)),
        coherence_magnitude: coherence,
    }
}

/// `tr(rho - rho_a (x) rho_f)^2`.
pub fn total_correlation(rho: &FockDensityMatrix) -> f64 {
    let ra = partial_trace_field(rho);
    let rf = partial_trace_atom(rho);
    let l = rho.levels();
    let d = rho.data();
    let mut acc = 0.0;
    for (a, b) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
        for n in 0..l {
            for m in 0..l {
                acc += (d[(a * l + m, b * l + n)] - ra[(a, b)] * rf[(m, n)]).norm_sqr();
            }
        }
    }
    acc
}

/// Sum of absolute eigenvalues of a Hermitian matrix.
pub fn hermitian_trace_norm(m: &DMatrix<C64>) -> f64 {
    let h = (m + m.adjoint()) * C64::from(0.5);
    h.symmetric_eigenvalues().iter().map(|x| x.abs()).sum()
}

/// `||rho - sigma||_1 / 2`.
pub fn trace_distance(rho: &DMatrix<C64>, sigma: &DMatrix<C64>) -> f64 {
    0.5 * hermitian_trace_norm(&(rho - sigma))
}

/// Orthonormal field pair from the two coherent amplitudes.
fn field_basis(beta_e: C64, beta_g: C64, levels: usize) -> (DVector<C64>, DVector<C64>, bool) {
    let ce = coherent_vector(beta_e, levels);
    let u1 = ce.normalize();
    let cg = coherent_vector(beta_g, levels).normalize();
    let overlap = u1.dotc(&cg);
    if overlap.norm() > 1.0 - DEGENERATE_OVERLAP {
        let u2 = displaced_one(beta_e, levels).normalize();
        let u2 = (&u2 - &u1 * u1.dotc(&u2)).normalize();
        return (u1, u2, true);
    }
    let u2 = (&cg - &u1 * overlap).normalize();
    (u1, u2, false)
}

pub fn embed_two_qubit(rho: &FockDensityMatrix, beta_e: C64, beta_g: C64) -> Embedding {
    let l = rho.levels();
    let (u1, u2, degenerate) = field_basis(beta_e, beta_g, l);
    let mut v = DMatrix::<C64>::zeros(2 * l, 4);
    for a in 0..2 {
        for n in 0..l {
            v[(a * l + n, 2 * a)] = u1[n];
            v[(a * l + n, 2 * a + 1)] = u2[n];
        }
    }
    let p = v.adjoint() * rho.data() * &v;
    let tr = p.trace().re;
    let mut m4 = Matrix4::from_fn(|i, j| p[(i, j)] / tr);
    m4 = (m4 + m4.adjoint()) * C64::from(0.5);
    Embedding { rho: m4, leakage: 1.0 - tr, degenerate }
}

fn spin_flip() -> Matrix4<C64> {
    let y = Matrix2::new(C64::new(0.0, 0.0), C64::new(0.0, -1.0), C64::new(0.0, 1.0), C64::new(0.0, 0.0));
    y.kronecker(&y)
}

/// Wootters concurrence `max(0, x1 - x2 - x3 - x4)`.
///
/// The `x_i` (square roots of the spectrum of `rho rho~`) are obtained as the
/// singular values of `V^T (sy (x) sy) V` with `rho = V V^dag`, which avoids
/// taking square roots of round-off sized eigenvalues for low-rank input.
pub fn wootters_concurrence(rho: &Matrix4<C64>) -> Result<f64, OracleError> {
    let herm = (rho - rho.adjoint()).camax();
    if herm > 1e-10 || (rho.trace().re - 1.0).abs() > 1e-10 {
        return Err(OracleError::InvalidState(format!(
            "two-qubit input not Hermitian/normalized (asym {herm:e}, trace {})",
            rho.trace().re
        )));
    }
    let eig = rho.symmetric_eigen();
    let min = eig.eigenvalues.min();
    if min < -1e-10 {
        return Err(OracleError::NotPositive(min));
    }
    let roots = eig.eigenvalues.map(|x| C64::from(x.max(0.0).sqrt()));
    let v = eig.eigenvectors * Matrix4::from_diagonal(&roots);
    let tau = v.transpose() * spin_flip() * v;
    let mut x: Vec<f64> = tau.singular_values().iter().copied().collect();
    x.sort_by(|a, b| b.partial_cmp(a).expect("finite singular values"));
    Ok((x[0] - x[1] - x[2] - x[3]).max(0.0))
}
