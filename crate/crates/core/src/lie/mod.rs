//! Superoperator algebra behind the closed-form solution.
//!
//! Operators `X` on `dim` Fock states are vectorized column-wise, so that
//! `vec(A X B) = (B^T (x) A) vec(X)`. With this convention
//!
//! ```text
//! a^l = I (x) a,   a^l+ = I (x) a^dag,   a^r = a^T (x) I,   a^r+ = (a^dag)^T (x) I
//! ```
//!
//! act as `a X`, `a^dag X`, `X a`, `X a^dag`. Truncation breaks the
//! canonical relations on the highest Fock states, so every comparison is
//! restricted to the interior: row and column Fock indices below
//! `dim - margin`.

mod disentangle;
mod ode;

pub use disentangle::{
    check_diagonal_disentangling, check_offdiagonal_disentangling, displacement, expm_action,
    DisentangleReport,
};
pub use ode::{residual_diagonal, residual_offdiagonal, OdeResidualReport, OdeSystem};

use nalgebra_sparse::{CooMatrix, CsrMatrix};
use thiserror::Error;

use crate::model::ModelError;
use crate::C64;

/// Default number of edge Fock states excluded from comparisons.
pub const DEFAULT_MARGIN: usize = 5;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LieError {
    #[error("representation of dimension {dim} is too small for margin {margin}")]
    TooSmall { dim: usize, margin: usize },
    #[error("truncation insufficient: edge weight {0:e}")]
    Truncation(f64),
    #[error(transparent)]
    Model(#[from] ModelError),
}

type Sparse = CsrMatrix<C64>;

/// Sparse superoperators on `dim` Fock states.
#[derive(Debug, Clone)]
pub struct SuperOpRep {
    dim: usize,
    pub a_l: Sparse,
    pub a_l_dag: Sparse,
    pub a_r: Sparse,
    pub a_r_dag: Sparse,
    /// `a^l+ a^l`.
    pub m: Sparse,
    /// `a^r a^r+`.
    pub p: Sparse,
    /// `a^l a^r+`.
    pub j: Sparse,
    pub x_plus: Sparse,
    pub x_minus: Sparse,
    pub y_plus: Sparse,
    pub y_minus: Sparse,
    pub identity: Sparse,
}

fn triplets(rows: usize, cols: usize, entries: impl IntoIterator<Item = (usize, usize, C64)>) -> Sparse {
    let mut coo = CooMatrix::new(rows, cols);
    for (i, j, v) in entries {
        coo.push(i, j, v);
    }
    CsrMatrix::from(&coo)
}

/// Annihilation operator on `dim` states as `(row, col, value)`.
fn annihilation_entries(dim: usize) -> Vec<(usize, usize, C64)> {
    (1..dim).map(|n| (n - 1, n, C64::from((n as f64).sqrt()))).collect()
}

fn kron(a: &[(usize, usize, C64)], b: &[(usize, usize, C64)], nb: usize, n: usize) -> Sparse {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for &(ia, ja, va) in a {
        for &(ib, jb, vb) in b {
            out.push((ia * nb + ib, ja * nb + jb, va * vb));
        }
    }
    triplets(n, n, out)
}

fn scaled(m: &Sparse, c: C64) -> Sparse {
    m * c
}

impl SuperOpRep {
    pub fn new(dim: usize) -> Self {
        let n = dim * dim;
        let a = annihilation_entries(dim);
        let a_dag: Vec<_> = a.iter().map(|&(i, j, v)| (j, i, v)).collect();
        let ident: Vec<_> = (0..dim).map(|i| (i, i, C64::from(1.0))).collect();
        // (a)^T has the entries of a^dag for real a, and vice versa.
        let a_l = kron(&ident, &a, dim, n);
        let a_l_dag = kron(&ident, &a_dag, dim, n);
        let a_r = kron(&a_dag, &ident, dim, n);
        let a_r_dag = kron(&a, &ident, dim, n);
        let m = &a_l_dag * &a_l;
        let p = &a_r * &a_r_dag;
        let j = &a_l * &a_r_dag;
        SuperOpRep {
            dim,
            x_plus: &a_l_dag + &a_r_dag,
            x_minus: &a_l_dag - &a_r_dag,
            y_plus: &a_r + &a_l,
            y_minus: &a_r - &a_l,
            identity: triplets(n, n, (0..n).map(|i| (i, i, C64::from(1.0)))),
            a_l,
            a_l_dag,
            a_r,
            a_r_dag,
            m,
            p,
            j,
        }
    }

    /// Fock truncation of the underlying operators.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Whether vectorized index `v` has row and column Fock index below
    /// `dim - margin`.
    pub fn is_interior(&self, v: usize, margin: usize) -> bool {
        let edge = self.dim.saturating_sub(margin);
        v % self.dim < edge && v / self.dim < edge
    }

    /// `-i omega (M - P) + k (2J - M - P)`: evolution of `rho_ee` without drive.
    pub fn l_plus(&self, omega: f64, kappa: f64) -> Sparse {
        let mp = &self.m - &self.p;
        let damp = &(&scaled(&self.j, C64::from(2.0)) - &self.m) - &self.p;
        &scaled(&mp, C64::new(0.0, -omega)) + &scaled(&damp, C64::from(kappa))
    }

    /// `-i omega (M + P + 1) + k (2J - M - P)`: evolution of `rho_eg` without drive.
    pub fn l_eg(&self, omega: f64, kappa: f64) -> Sparse {
        let mp1 = &(&self.m + &self.p) + &self.identity;
        let damp = &(&scaled(&self.j, C64::from(2.0)) - &self.m) - &self.p;
        &scaled(&mp1, C64::new(0.0, -omega)) + &scaled(&damp, C64::from(kappa))
    }

    /// `-i (F X_- - F* Y_-)`: the drive.
    pub fn l_source(&self, drive: C64) -> Sparse {
        let i = C64::i();
        &scaled(&self.x_minus, -i * drive) + &scaled(&self.y_minus, i * drive.conj())
    }

    /// Largest entry of `a - b` over interior rows and columns.
    pub fn interior_deviation(&self, a: &Sparse, b: &Sparse, margin: usize) -> f64 {
        let d = a - b;
        d.triplet_iter()
            .filter(|(r, c, _)| self.is_interior(*r, margin) && self.is_interior(*c, margin))
            .map(|(_, _, v)| v.norm())
            .fold(0.0, f64::max)
    }
}

pub fn commutator(a: &Sparse, b: &Sparse) -> Sparse {
    &(a * b) - &(b * a)
}

/// One checked commutation relation.
#[derive(Debug, Clone, PartialEq)]
pub struct Relation {
    pub name: &'static str,
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CommutatorTable {
    pub relations: Vec<Relation>,
    pub max_deviation: f64,
    /// Deviation of `[J, P] - P`; the relation that holds is `[J, P] = J`.
    pub j_p_as_p: f64,
}

/// Evaluates the canonical relations and the full bilinear/linear table on
/// the interior subspace.
pub fn check_commutator_table(rep: &SuperOpRep, margin: usize) -> Result<CommutatorTable, LieError> {
    if rep.dim() < margin + 4 {
        return Err(LieError::TooSmall { dim: rep.dim(), margin });
    }
    let half = C64::from(0.5);
    let id = &rep.identity;
    let (xp, xm, yp, ym) = (&rep.x_plus, &rep.x_minus, &rep.y_plus, &rep.y_minus);
    let x_diff = scaled(&(xp - xm), half);
    let x_sum = scaled(&(xp + xm), half);
    let y_diff = scaled(&(yp - ym), half);
    let y_sum = scaled(&(yp + ym), half);
    let y_rev = scaled(&(ym - yp), half);
    let x_rev = scaled(&(xm - xp), half);
    let neg = |m: &Sparse| scaled(m, C64::from(-1.0));
    let checks: Vec<(&'static str, Sparse, Sparse)> = vec![
        ("[a^l, a^l+] = 1", commutator(&rep.a_l, &rep.a_l_dag), id.clone()),
        ("[a^r, a^r+] = -1", commutator(&rep.a_r, &rep.a_r_dag), neg(id)),
        ("[J, M] = J", commutator(&rep.j, &rep.m), rep.j.clone()),
        ("[J, P] = J", commutator(&rep.j, &rep.p), rep.j.clone()),
        ("[J, X+] = (X+ - X-)/2", commutator(&rep.j, xp), x_diff.clone()),
        ("[J, X-] = (X+ - X-)/2", commutator(&rep.j, xm), x_diff),
        ("[J, Y+] = (Y+ - Y-)/2", commutator(&rep.j, yp), y_diff.clone()),
        ("[J, Y-] = (Y+ - Y-)/2", commutator(&rep.j, ym), y_diff),
        ("[M, X+] = (X+ + X-)/2", commutator(&rep.m, xp), x_sum.clone()),
        ("[M, X-] = (X+ + X-)/2", commutator(&rep.m, xm), x_sum),
        ("[M, Y+] = (Y- - Y+)/2", commutator(&rep.m, yp), y_rev.clone()),
        ("[M, Y-] = -(Y- - Y+)/2", commutator(&rep.m, ym), neg(&y_rev)),
        ("[P, X+] = (X- - X+)/2", commutator(&rep.p, xp), x_rev.clone()),
        ("[P, X-] = -(X- - X+)/2", commutator(&rep.p, xm), neg(&x_rev)),
        ("[P, Y+] = (Y+ + Y-)/2", commutator(&rep.p, yp), y_sum.clone()),
        ("[P, Y-] = (Y+ + Y-)/2", commutator(&rep.p, ym), y_sum),
        ("[X+, Y-] = 2", commutator(xp, ym), scaled(id, C64::from(2.0))),
        ("[X-, Y+] = -2", commutator(xm, yp), scaled(id, C64::from(-2.0))),
    ];
    let relations: Vec<Relation> = checks
        .iter()
        .map(|(name, lhs, rhs)| Relation { name, deviation: rep.interior_deviation(lhs, rhs, margin) })
        .collect();
    let max_deviation = relations.iter().map(|r| r.deviation).fold(0.0, f64::max);
    let j_p_as_p = rep.interior_deviation(&commutator(&rep.j, &rep.p), &rep.p, margin);
    Ok(CommutatorTable { relations, max_deviation, j_p_as_p })
}

/// `e^{xA} B e^{-xA} = e^{beta x} B` for `[A, B] = beta B`, checked on
/// the pairs `(L_+, X_-)` with `beta = -(k + i omega)` and `(L_+, Y_-)` with
/// `beta = -(k - i omega)`. Both sides are applied to every interior basis
/// vector; the largest interior entry of the difference is returned.
pub fn check_baker_hausdorff(rep: &SuperOpRep, omega: f64, kappa: f64, x: f64, margin: usize) -> Result<f64, LieError> {
    if rep.dim() < margin + 4 {
        return Err(LieError::TooSmall { dim: rep.dim(), margin });
    }
    let lp = rep.l_plus(omega, kappa);
    let n = rep.dim() * rep.dim();
    let mut worst: f64 = 0.0;
    for (b, beta) in [(&rep.x_minus, C64::new(-kappa, -omega)), (&rep.y_minus, C64::new(-kappa, omega))] {
        let factor = (beta * x).exp();
        for col in (0..n).filter(|&v| rep.is_interior(v, margin)) {
            let mut e = nalgebra::DVector::<C64>::zeros(n);
            e[col] = C64::from(1.0);
            let lhs = expm_action(&lp, x, &(b * &expm_action(&lp, -x, &e)));
            let rhs = (b * &e) * factor;
            for row in (0..n).filter(|&v| rep.is_interior(v, margin)) {
                worst = worst.max((lhs[row] - rhs[row]).norm());
            }
        }
    }
    Ok(worst)
}
