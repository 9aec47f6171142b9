//! The complex phase `Phi(t)` that multiplies the atomic coherence.
//!
//! The ordering functions `z`, `p`, `q` contain `cosh((k + i omega) t)` and
//! grow like `e^{kt}`; the verbatim assembly cancels terms of size
//! `e^{2kt}` and loses all precision once `kt` exceeds ~15. [`PhaseParts`]
//! therefore keeps the verbatim pieces for inspection but assembles `phi`
//! from the reduced form of `z + |F|^2(p^2 - q^2 + 2pq + |p + q|^2)`, in
//! which only decaying exponentials appear, and from `p e^{-kt}`,
//! `q e^{-kt}` in the residual drive block.

use num_complex::Complex;

use crate::model::Model;
use crate::scalar::{cplx, exp_m1, imag_unit, lit, Real};

/// Ordering functions and the assembled phase at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseParts<T> {
    pub t: T,
    pub z: Complex<T>,
    pub p: Complex<T>,
    pub q: Complex<T>,
    pub theta: T,
    pub gamma: T,
    pub phi: Complex<T>,
}

/// `(k + i omega)`.
#[inline]
fn rate<T: Real>(m: &Model<T>) -> Complex<T> {
    cplx(m.kappa(), m.omega())
}

/// `z(t)` as printed; overflows for very large `kt`.
pub(crate) fn z_fn<T: Real>(m: &Model<T>, t: T) -> Complex<T> {
    let i = imag_unit::<T>();
    let s = rate(m);
    let s2 = s * s;
    let w = m.omega();
    let st = s * t;
    let em1 = exp_m1(-st);
    let e2m1 = exp_m1(-st * lit::<T>(2.0));
    let ch = st.cosh() - T::one();
    let bracket = Complex::from(t) + (em1 * lit::<T>(4.0) - e2m1) / (s * lit::<T>(2.0))
        + i * w / s2 * ch * ch;
    -i * lit::<T>(2.0) * w * m.drive_sq() / s2 * bracket
}

/// `p(t)` as printed.
pub(crate) fn p_fn<T: Real>(m: &Model<T>, t: T) -> Complex<T> {
    let i = imag_unit::<T>();
    let s = rate(m);
    let st = s * t;
    i * m.kappa() / (s * s) * (st.cosh() - T::one()) - i * st.sinh() / s
}

/// `q(t)` as printed.
pub(crate) fn q_fn<T: Real>(m: &Model<T>, t: T) -> Complex<T> {
    let s = rate(m);
    let st = s * t;
    -(st.cosh() - T::one()) * m.omega() / (s * s)
}

/// `p(t) e^{-kt}` and `q(t) e^{-kt}` without forming `cosh((k+iw)t)`.
fn scaled_pq<T: Real>(m: &Model<T>, t: T) -> (Complex<T>, Complex<T>) {
    let i = imag_unit::<T>();
    let s = rate(m);
    let k = m.kappa();
    let w = m.omega();
    let half = lit::<T>(0.5);
    let fwd = Complex::from_polar(T::one(), w * t);
    let back = Complex::from_polar((-(lit::<T>(2.0) * k) * t).exp(), -w * t);
    let ch = (fwd + back) * half - Complex::from((-k * t).exp());
    let sh = (fwd - back) * half;
    let p = i * k / (s * s) * ch - i * sh / s;
    let q = -ch * w / (s * s);
    (p, q)
}

/// `Theta(F/k, t)`.
pub(crate) fn theta_fn<T: Real>(m: &Model<T>, t: T) -> T {
    let (k, w) = (m.kappa(), m.omega());
    let two = lit::<T>(2.0);
    let decay = (-two * k * t).exp();
    let (s2, c2) = (two * w * t).sin_cos();
    m.drive_sq() / (k * (k * k + w * w)) * (decay * (k * s2 + w * c2) - w)
}

/// `Gamma(F/k, t)`.
pub(crate) fn gamma_fn<T: Real>(m: &Model<T>, t: T) -> T {
    let (k, w) = (m.kappa(), m.omega());
    let two = lit::<T>(2.0);
    let a = m.drive_sq();
    let decay = (-two * k * t).exp();
    let (s2, c2) = (two * w * t).sin_cos();
    // 1 - e^{-2kt}
    let one_minus = -(-two * k * t).exp_m1();
    -a / (k * k) * one_minus - a / (k * (k * k + w * w)) * (decay * (k * c2 - w * s2) - k)
}

/// `z + |F|^2 (p^2 - q^2 + 2pq + |p+q|^2)` in its reduced form.
fn reduced_block<T: Real>(m: &Model<T>, t: T) -> Complex<T> {
    let i = imag_unit::<T>();
    let s = rate(m);
    let s2 = s * s;
    let (k, w) = (m.kappa(), m.omega());
    let a = m.drive_sq();
    let st = s * t;
    let em1 = exp_m1(-st);
    let e2m1 = exp_m1(-st * lit::<T>(2.0));
    let linear = -i * lit::<T>(2.0) * w * a / s2
        * (Complex::from(t) + (em1 * lit::<T>(4.0) - e2m1) / (s * lit::<T>(2.0)));
    let square = -em1 * em1 * a / s2;
    // e^{-2kt} - 2 e^{-kt} cos(wt) + 1 = |1 - e^{-(k+iw)t}|^2
    let modulus = Complex::from(a / (k * k + w * w) * em1.norm_sqr());
    linear + square + modulus
}

/// The residual drive block multiplying `|F|^2/k`, from `p e^{-kt}`, `q e^{-kt}`.
fn residual_block<T: Real>(m: &Model<T>, t: T, p_scaled: Complex<T>, q_scaled: Complex<T>) -> Complex<T> {
    let i = imag_unit::<T>();
    let w = m.omega();
    let two = lit::<T>(2.0);
    let (sn, cs) = (w * t).sin_cos();
    let pq = p_scaled + q_scaled;
    let body = i * two * (pq * cs).re - i * two * (pq * sn).im
        - Complex::from_polar(lit::<T>(4.0), -w * t) * cplx(q_scaled.im, p_scaled.re);
    body * (m.drive_sq() / m.kappa())
}

impl<T: Real> PhaseParts<T> {
    /// Recomputes `phi` from the stored `z`, `p`, `q`, `theta`, `gamma` with
    /// the assembly rule exactly as printed. Only meaningful while `kt` is
    /// small enough for the verbatim functions to be accurate (`kt <~ 10`).
    pub fn verbatim_phi(&self, m: &Model<T>) -> Complex<T> {
        let i = imag_unit::<T>();
        let (k, w, t) = (m.kappa(), m.omega(), self.t);
        let a = m.drive_sq();
        let two = lit::<T>(2.0);
        let (p, q) = (self.p, self.q);
        let pq = p + q;
        let quadratic = p * p - q * q + p * q * two + Complex::from(pq.norm_sqr());
        let decay = (-k * t).exp();
        let (sn, cs) = (w * t).sin_cos();
        let tail = i * two * (pq * (decay * cs)).re - i * two * (pq * (decay * sn)).im
            - (-rate(m) * t).exp() * lit::<T>(4.0) * cplx(q.im, p.re);
        -i * w * t + self.z + quadratic * a + i * self.theta + Complex::from(self.gamma)
            + tail * (a / k)
    }
}

impl<T: Real> Model<T> {
    /// Ordering functions `z, p, q`, the drive corrections `Theta`, `Gamma`
    /// and the assembled phase `Phi` at time `t >= 0`.
    pub fn phase_parts(&self, t: T) -> PhaseParts<T> {
        let z = z_fn(self, t);
        let p = p_fn(self, t);
        let q = q_fn(self, t);
        let theta = theta_fn(self, t);
        let gamma = gamma_fn(self, t);
        PhaseParts { t, z, p, q, theta, gamma, phi: self.phase(t) }
    }

    /// `Phi(omega, k, F; t)`, evaluated in a form that is accurate for all
    /// `t >= 0`. With `omega = 0` the atom decouples and `Phi` is exactly 0.
    pub fn phase(&self, t: T) -> Complex<T> {
        if self.omega() == T::zero() {
            return Complex::new(T::zero(), T::zero());
        }
        let i = imag_unit::<T>();
        let (ps, qs) = scaled_pq(self, t);
        -i * self.omega() * t
            + reduced_block(self, t)
            + i * theta_fn(self, t)
            + Complex::from(gamma_fn(self, t))
            + residual_block(self, t, ps, qs)
    }

    /// Asymptotic slope of `Re Phi`: `-4 omega^2 k |F|^2 / (k^2 + omega^2)^2`.
    pub fn re_phi_longtime_rate(&self) -> T {
        let (k, w) = (self.kappa(), self.omega());
        let d = k * k + w * w;
        -lit::<T>(4.0) * w * w * k * self.drive_sq() / (d * d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ModelParams;
    use proptest::prelude::*;

    fn model(w: f64, k: f64, f: Complex<f64>) -> Model<f64> {
        ModelParams::new(w, k, f).validate().unwrap()
    }

    /// Independent route to `Phi`: write `rho_eg = g(t) |alpha)(beta|` with
    /// unnormalized coherent kets, so that the master equation reduces to
    /// `alpha' = -(k + iw) alpha - iF`, `beta' = -(k - iw) beta - iF` and
    /// `g'/g = 2k alpha beta* - iF* alpha + iF beta* - iw`. Then
    /// `Phi = ln(2 g) + (|alpha|^2 + |beta|^2)/2` with `2 g(0) = e^{-|F/k|^2}`.
    /// The scalar is integrated with composite Gauss–Legendre quadrature.
    fn phase_by_quadrature(m: &Model<f64>, t: f64) -> Complex<f64> {
        let i = Complex::i();
        let (k, w, f) = (m.kappa(), m.omega(), m.drive());
        let s = Complex::new(k, w);
        let sc = Complex::new(k, -w);
        let a0 = -i * f / k;
        let alpha = |u: f64| -> Complex<f64> { -i * f / s + (a0 + i * f / s) * (-s * u).exp() };
        let beta = |u: f64| -> Complex<f64> { -i * f / sc + (a0 + i * f / sc) * (-sc * u).exp() };
        let integrand = |u: f64| {
            let a = alpha(u);
            let b = beta(u);
            2.0 * k * a * b.conj() - i * f.conj() * a + i * f * b.conj() - i * w
        };
        let nodes = [
            (-0.906_179_845_938_664, 0.236_926_885_056_189_1),
            (-0.538_469_310_105_683, 0.478_628_670_499_366_5),
            (0.0, 0.568_888_888_888_888_9),
            (0.538_469_310_105_683, 0.478_628_670_499_366_5),
            (0.906_179_845_938_664, 0.236_926_885_056_189_1),
        ];
        let panels = 400;
        let h = t / panels as f64;
        let mut acc = Complex::new(0.0, 0.0);
        for j in 0..panels {
            let mid = (j as f64 + 0.5) * h;
            for &(x, wgt) in &nodes {
                acc += integrand(mid + 0.5 * h * x) * (0.5 * h * wgt);
            }
        }
        let (a, b) = (alpha(t), beta(t));
        acc + 0.5 * (a.norm_sqr() + b.norm_sqr()) - a0.norm_sqr()
    }

    #[test]
    fn phase_vanishes_at_origin() {
        let m = model(1.0, 1.0, Complex::new(1.0, 0.0));
        let pp = m.phase_parts(0.0);
        assert_eq!(pp.z.norm(), 0.0);
        assert_eq!(pp.p.norm(), 0.0);
        assert_eq!(pp.q.norm(), 0.0);
        assert_eq!(pp.theta.abs(), 0.0);
        assert!(pp.gamma.abs() < 1e-16);
        assert!(pp.phi.norm() < 1e-16);
    }

    #[test]
    fn matches_quadrature_route() {
        for &(w, k, f) in &[(1.0, 1.0, 1.0), (1.0, 0.2, 0.2), (1.0, 5.0, 5.0), (1.0, 0.2, 0.4), (2.0, 0.7, -0.3)] {
            let m = model(w, k, Complex::new(f, 0.3 * f));
            for &t in &[0.05, 0.5, 1.0, std::f64::consts::PI, 6.0, 20.0] {
                let a = m.phase(t);
                let b = phase_by_quadrature(&m, t);
                assert!((a - b).norm() < 1e-9 * (1.0 + b.norm()), "w={w} k={k} t={t}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn verbatim_assembly_agrees_while_accurate() {
        for &(w, k, f) in &[(1.0, 1.0, 1.0), (1.0, 0.2, 0.2), (1.0, 5.0, 5.0), (3.0, 1.5, 0.8)] {
            let m = model(w, k, Complex::new(f, 0.0));
            for &t in &[0.01, 0.3, 1.0, 2.0] {
                if k * t > 8.0 {
                    continue;
                }
                let pp = m.phase_parts(t);
                let v = pp.verbatim_phi(&m);
                assert!((v - pp.phi).norm() < 1e-8 * (1.0 + pp.phi.norm()), "t={t}: {v} vs {}", pp.phi);
            }
        }
    }

    #[test]
    fn verbatim_assembly_breaks_down_at_large_kt() {
        // The reason phi is not assembled from the printed z, p, q.
        let m = model(1.0, 5.0, Complex::new(5.0, 0.0));
        let pp = m.phase_parts(6.0);
        let v = pp.verbatim_phi(&m);
        assert!((v - pp.phi).norm() > 1.0);
        assert!((pp.phi - phase_by_quadrature(&m, 6.0)).norm() < 1e-9 * pp.phi.norm());
    }

    #[test]
    fn no_drive_reduces_to_free_rotation() {
        let m = model(1.3, 0.4, Complex::new(0.0, 0.0));
        for &t in &[0.0, 0.7, 3.0, 50.0] {
            let pp = m.phase_parts(t);
            assert_eq!(pp.phi, Complex::new(0.0, -1.3 * t));
            assert_eq!(pp.theta, 0.0);
            assert_eq!(pp.gamma, 0.0);
            assert_eq!(pp.z.norm(), 0.0);
        }
    }

    #[test]
    fn decoupled_atom_has_zero_phase() {
        let m = model(0.0, 0.8, Complex::new(1.2, -0.4));
        for &t in &[0.0, 0.5, 4.0] {
            assert_eq!(m.phase(t), Complex::new(0.0, 0.0));
        }
    }

    #[test]
    fn long_time_rate_examples() {
        assert_eq!(model(1.0, 1.0, Complex::new(1.0, 0.0)).re_phi_longtime_rate(), -1.0);
        assert_eq!(model(1.0, 1.0, Complex::new(0.0, 0.0)).re_phi_longtime_rate(), 0.0);
    }

    #[test]
    fn long_time_slope_matches_rate() {
        for &(w, k, f) in &[(1.0, 1.0, 1.0), (1.0, 0.2, 0.2), (1.0, 5.0, 5.0)] {
            let m = model(w, k, Complex::new(f, 0.0));
            let t = 30.0 / k;
            let h = 1e-3 / k;
            let slope = (m.phase(t + h).re - m.phase(t - h).re) / (2.0 * h);
            let rate = m.re_phi_longtime_rate();
            assert!(((slope - rate) / rate).abs() < 1e-3, "{slope} vs {rate}");
        }
    }

    #[test]
    fn single_precision_phase_tracks_double() {
        let m32 = ModelParams::<f32>::new(1.0, 0.2, Complex::new(0.2, 0.0)).validate().unwrap();
        let m64 = model(1.0, 0.2, Complex::new(0.2, 0.0));
        for &t in &[0.5f32, 2.0, 10.0] {
            let a = m32.phase(t);
            let b = m64.phase(t as f64);
            assert!((a.re as f64 - b.re).abs() < 1e-4 && (a.im as f64 - b.im).abs() < 1e-4);
        }
    }

    proptest! {
        #[test]
        fn drive_phase_leaves_re_phi_invariant(w in 0.1..3.0f64, k in 0.05..5.0f64, f in 0.0..2.0f64, th in 0.0..std::f64::consts::TAU, t in 0.0..20.0f64) {
            let m = model(w, k, Complex::new(f, 0.0));
            let r = m.with_drive(Complex::from_polar(f, th));
            prop_assert!((m.phase(t).re - r.phase(t).re).abs() <= 1e-12 * (1.0 + m.phase(t).re.abs()));
        }

        #[test]
        fn re_phi_is_non_positive(w in 0.0..3.0f64, k in 0.05..5.0f64, f in 0.0..3.0f64, t in 0.0..40.0f64) {
            let m = model(w, k, Complex::new(f, 0.0));
            prop_assert!(m.phase(t).re <= 1e-12);
        }
    }
}
