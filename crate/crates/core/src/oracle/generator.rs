//! Right-hand side of the atom–field master equation on the truncated space.
//!
//! Basis index `atom * levels + n` with atom 0 = `|e>`, 1 = `|g>`. Matrices
//! are stored column-major, matching `nalgebra`.

use nalgebra::DMatrix;

use crate::{Model64, C64};

/// `-i[H, rho] + k(2 a rho a^dag - a^dag a rho - rho a^dag a)` with
/// `H = omega[(a^dag a + 1)|e><e| - a^dag a |g><g|] + F a^dag + F* a`.
#[derive(Debug, Clone)]
pub struct Generator {
    levels: usize,
    kappa: f64,
    drive: C64,
    energy: Vec<f64>,
    sqrt: Vec<f64>,
}

impl Generator {
    /// Fock states `0..=n_max`.
    pub fn new(model: &Model64, n_max: usize) -> Self {
        let levels = n_max + 1;
        let w = model.omega();
        let energy = (0..2 * levels)
            .map(|i| {
                let n = (i % levels) as f64;
                if i < levels { w * (n + 1.0) } else { -w * n }
            })
            .collect();
        Generator {
            levels,
            kappa: model.kappa(),
            drive: model.drive(),
            energy,
            sqrt: (0..=levels).map(|n| (n as f64).sqrt()).collect(),
        }
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn dim(&self) -> usize {
        2 * self.levels
    }

    /// `out = L(rho)` on column-major `dim x dim` storage.
    pub fn apply_into(&self, rho: &[C64], out: &mut [C64]) {
        let d = self.dim();
        let l = self.levels;
        debug_assert_eq!(rho.len(), d * d);
        let k = self.kappa;
        let f = self.drive;
        let mi_f = C64::new(f.im, -f.re); // -iF
        let mi_fc = C64::new(-f.im, -f.re); // -iF*
        let sq = &self.sqrt;
        for j in 0..d {
            let n = j % l;
            let col = j * d;
            let up = n + 1 < l;
            for i in 0..d {
                let m = i % l;
                let idx = i + col;
                let r = rho[idx];
                let mut acc = r * C64::new(-k * (m + n) as f64, self.energy[j] - self.energy[i]);
                if m > 0 {
                    acc += mi_f * (sq[m] * rho[idx - 1]);
                }
                if m + 1 < l {
                    acc += mi_fc * (sq[m + 1] * rho[idx + 1]);
                    if up {
                        acc += rho[idx + 1 + d] * (2.0 * k * sq[m + 1] * sq[n + 1]);
                    }
                }
                if up {
                    acc -= mi_f * (sq[n + 1] * rho[idx + d]);
                }
                if n > 0 {
                    acc -= mi_fc * (sq[n] * rho[idx - d]);
                }
                out[idx] = acc;
            }
        }
    }

    pub fn apply(&self, rho: &DMatrix<C64>) -> DMatrix<C64> {
        let mut out = DMatrix::zeros(rho.nrows(), rho.ncols());
        self.apply_into(rho.as_slice(), out.as_mut_slice());
        out
    }
}
