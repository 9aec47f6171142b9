use super::*;
use crate::model::ModelParams;
use proptest::prelude::*;
use std::f64::consts::PI;

fn model(w: f64, k: f64, f: Complex<f64>) -> Model<f64> {
    ModelParams::new(w, k, f).validate().unwrap()
}

fn real(w: f64, k: f64, f: f64) -> Model<f64> {
    model(w, k, Complex::new(f, 0.0))
}

fn close(a: Complex<f64>, b: Complex<f64>, tol: f64) -> bool {
    (a - b).norm() <= tol
}

#[test]
fn pair_at_origin() {
    let p = real(1.0, 1.0, 1.0).coherent_pair(0.0);
    assert_eq!(p.beta_e.norm(), 0.0);
    assert_eq!(p.beta_g.norm(), 0.0);
    assert!(close(p.beta_e_prime, Complex::new(0.0, -1.0), 1e-16));
    assert!(close(p.beta_g_prime, Complex::new(0.0, -1.0), 1e-16));
    assert_eq!(p.dist_sq, 0.0);
}

#[test]
fn pair_at_infinity() {
    let m = real(1.0, 1.0, 1.0);
    let p = m.coherent_pair(60.0);
    assert!(close(p.beta_e_prime, Complex::new(-0.5, -0.5), 1e-15));
    assert!(close(p.beta_g_prime, Complex::new(0.5, -0.5), 1e-15));
    assert!((p.dist_sq - 1.0).abs() < 1e-15);
    let (e, g) = m.asymptotic_pair();
    assert!(close(e, p.beta_e_prime, 1e-15) && close(g, p.beta_g_prime, 1e-15));
    assert!((m.distance_sq_closed_form(60.0) - 1.0).abs() < 1e-15);
}

#[test]
fn distance_two_ways_at_half_period() {
    let m = real(1.0, 0.2, 0.2);
    let t = PI;
    assert!((m.distance_sq_closed_form(t) - m.coherent_pair(t).dist_sq).abs() < 1e-12);
    assert_eq!(m.distance_sq_closed_form(0.0), 0.0);
}

#[test]
fn symmetric_matrix_elements_at_origin() {
    let m = real(1.0, 1.0, 1.0);
    let me = m.matrix_elements(&AtomicAmplitudes::symmetric(), 0.0);
    for d in [me.ee, me.gg, me.eg] {
        assert!(close(d.weight, Complex::new(0.5, 0.0), 1e-15));
        assert!(close(d.ket, Complex::new(0.0, -1.0), 1e-16));
        assert!(close(d.bra, Complex::new(0.0, -1.0), 1e-16));
    }
}

#[test]
fn excited_atom_has_no_ground_or_coherence_weight() {
    let m = real(1.0, 0.2, 0.2);
    for &t in &[0.0, 1.0, 7.0] {
        let me = m.matrix_elements(&AtomicAmplitudes::excited(), t);
        assert_eq!(me.gg.weight.norm(), 0.0);
        assert_eq!(me.eg.weight.norm(), 0.0);
        assert_eq!(me.ee.weight, Complex::new(1.0, 0.0));
    }
}

#[test]
fn global_eigen_limits() {
    let m = real(1.0, 1.0, 1.0);
    assert_eq!(m.global_eigen(0.0), (1.0, 0.0, 0.0));
    let (p, q, _) = m.global_eigen(200.0);
    assert!((p - 0.5).abs() < 1e-15 && (q - 0.5).abs() < 1e-15);
    assert!((m.zeta_global(200.0) - 0.5).abs() < 1e-15);
    assert_eq!(m.zeta_global(0.0), 0.0);
}

#[test]
fn field_entropy_at_infinity() {
    let m = real(1.0, 1.0, 1.0);
    let expect = 0.5 * (1.0 - (-1.0f64).exp());
    assert!((m.zeta_field(80.0) - expect).abs() < 1e-15);
    assert!((expect - 0.31606).abs() < 1e-5);
    let (lp, lm, _) = m.field_eigen(0.0);
    assert_eq!((lp, lm), (1.0, 0.0));
}

#[test]
fn correlation_limits() {
    let m = real(1.0, 0.2, 0.2);
    assert_eq!(m.total_correlation(0.0), 0.0);
    assert_eq!(m.concurrence(0.0), 0.0);
    let t = 4000.0;
    assert!((m.total_correlation(t) - m.zeta_field(t) / 2.0).abs() < 1e-15);
}

/// Total correlation from a dense 4x4 representation of the state in the
/// orthonormal basis `{|e>, |g>} (x) {|u1>, |u2>}` of the two coherent states.
#[test]
fn total_correlation_matches_dense_hilbert_schmidt() {
    use nalgebra::{DMatrix, Matrix2};
    for &(w, k, f, t) in &[(1.0, 0.2, 0.2, 2.0), (1.0, 1.0, 1.0, 1.3), (1.0, 5.0, 5.0, 0.8), (2.0, 0.3, 1.1, 9.0)] {
        let m = real(w, k, f);
        let pair = m.coherent_pair(t);
        let (a, b) = (pair.beta_e_prime, pair.beta_g_prime);
        let overlap = (-(a.norm_sqr() + b.norm_sqr()) / 2.0 + a.conj() * b).exp(); // <a|b>
        // |a> = u1, |b> = overlap u1 + s u2
        let s = (1.0 - overlap.norm_sqr()).sqrt();
        let ka = [Complex::new(1.0, 0.0), Complex::new(0.0, 0.0)];
        let kb = [overlap, Complex::new(s, 0.0)];
        let phi = m.phase(t);
        let mut psi = DMatrix::<Complex<f64>>::zeros(4, 4);
        let blocks = [(0, 0, Complex::new(0.5, 0.0), ka, ka), (1, 1, Complex::new(0.5, 0.0), kb, kb), (0, 1, 0.5 * phi.exp(), ka, kb)];
        for &(i, j, wgt, x, y) in &blocks {
            for p in 0..2 {
                for q in 0..2 {
                    let v = wgt * x[p] * y[q].conj();
                    psi[(2 * i + p, 2 * j + q)] += v;
                    if i != j {
                        psi[(2 * j + q, 2 * i + p)] += v.conj();
                    }
                }
            }
        }
        let mut ra = Matrix2::<Complex<f64>>::zeros();
        let mut rf = Matrix2::<Complex<f64>>::zeros();
        for i in 0..2 {
            for j in 0..2 {
                for p in 0..2 {
                    ra[(i, j)] += psi[(2 * i + p, 2 * j + p)];
                    rf[(i, j)] += psi[(2 * p + i, 2 * p + j)];
                }
            }
        }
        let prod = ra.kronecker(&rf);
        let diff = &psi - DMatrix::from_iterator(4, 4, prod.iter().cloned());
        let hs = (&diff * &diff).trace().re;
        assert!((hs - m.total_correlation(t)).abs() < 1e-12, "{hs} vs {}", m.total_correlation(t));
        let purity = (&psi * &psi).trace().re;
        assert!((1.0 - purity - m.zeta_global(t)).abs() < 1e-12);
    }
}

#[test]
fn characteristic_times_examples() {
    let m = real(1.0, 1.0, 1.0);
    let ct = m.characteristic_times().unwrap();
    assert!((ct.long_time - 1.0).abs() < 1e-15);
    assert!((ct.atom_short_time - 0.5).abs() < 1e-15);
    assert!((ct.short_time - (7.0f64 / 3.0).powf(-1.0 / 3.0)).abs() < 1e-15);
    assert!(real(0.0, 1.0, 1.0).characteristic_times().is_err());
    assert!(real(1.0, 1.0, 0.0).characteristic_times().is_err());
}

/// Leading small-t behavior of `Re Phi`, by Richardson extrapolation of
/// `Re Phi(t) / t^3`.
fn cubic_coefficient(m: &Model<f64>, t: f64) -> f64 {
    let c = |u: f64| m.phase(u).re / (u * u * u);
    2.0 * c(t / 2.0) - c(t)
}

#[test]
fn short_time_cubic_coefficient() {
    // Re Phi = -(4/3) |F|^2 omega^2 t^3 / k + O(t^4), independently of any
    // (omega/k)-free term.
    for &(w, k, f) in &[(1.0, 1.0, 1.0), (1.0, 0.2, 0.2), (1.0, 5.0, 5.0), (2.0, 0.7, 0.3)] {
        let m = real(w, k, f);
        let t = m.characteristic_times().unwrap().short_time / 100.0;
        let got = cubic_coefficient(&m, t);
        let expect = -4.0 / 3.0 * f * f * w * w / k;
        assert!(((got - expect) / expect).abs() < 1e-3, "{got} vs {expect}");
    }
}

#[test]
fn atomic_short_time_law() {
    // 2 Re Phi - D^2 = -(t/tau_a)^2 (1 + O(t))
    for &(w, k, f) in &[(1.0, 1.0, 1.0), (1.0, 0.2, 0.2), (1.0, 5.0, 5.0)] {
        let m = real(w, k, f);
        let tau = m.characteristic_times().unwrap().atom_short_time;
        let g = |u: f64| (2.0 * m.phase(u).re - m.distance_sq_closed_form(u)) / (u * u);
        let t = tau / 100.0;
        let lead = 2.0 * g(t / 2.0) - g(t);
        assert!((lead * tau * tau + 1.0).abs() < 1e-3, "{}", lead * tau * tau);
    }
}

#[test]
fn stationary_examples() {
    let m = real(1.0, 1.0, 1.0);
    let s = m.stationary_state(&AtomicAmplitudes::symmetric());
    assert!((s.weight_e - 0.5).abs() < 1e-15 && (s.weight_g - 0.5).abs() < 1e-15);
    let i = Complex::i();
    assert!(close(s.amp_e, 1.0 / (i - 1.0), 1e-15));
    assert!(close(s.amp_g, 1.0 / (i + 1.0), 1e-15));
    assert_eq!(m.stationary_state(&AtomicAmplitudes::excited()).weight_g, 0.0);
    assert!((m.nbar_infinity() - 0.5).abs() < 1e-15);
    assert_eq!(real(1.0, 1.0, 0.0).nbar_infinity(), 0.0);
    assert!((s.amp_e.norm_sqr() - m.nbar_infinity()).abs() < 1e-15);
    assert!((s.amp_g.norm_sqr() - m.nbar_infinity()).abs() < 1e-15);
}

#[test]
fn driven_mode_fixed_point() {
    let m = model(1.0, 0.5, Complex::new(1.0, 1.0));
    let fixed = m.stationary_amplitude();
    assert!(close(fixed, Complex::new(2.0, -2.0), 1e-15));
    for &t in &[0.0, 0.3, 5.0, 100.0] {
        assert!(close(m.driven_mode_state(t, fixed), fixed, 1e-14));
    }
    let a0 = Complex::new(0.3, -1.7);
    assert_eq!(m.driven_mode_state(0.0, a0), a0);
}

#[test]
fn state_record_matches_individual_calls() {
    let m = real(1.0, 0.2, 0.2);
    let t = 3.7;
    let r = m.state_record(t);
    assert_eq!(r.zeta, m.zeta_global(t));
    assert_eq!(r.zeta_atom, m.zeta_atom(t));
    assert_eq!(r.zeta_field, m.zeta_field(t));
    assert_eq!(r.corr, m.total_correlation(t));
    assert_eq!(r.concurrence, m.concurrence(t));
    let (lp, lm, im) = m.global_eigen(t);
    assert_eq!((r.lambda_plus, r.lambda_minus, r.im_phi), (lp, lm, im));
    let (fp, fm, chi) = m.field_eigen(t);
    assert_eq!((r.field_lambda_plus, r.field_lambda_minus, r.chi), (fp, fm, chi));
}

#[test]
fn decoupled_atom_stays_unentangled() {
    let m = model(0.0, 0.7, Complex::new(0.9, 0.4));
    for j in 0..50 {
        let r = m.state_record(j as f64 * 0.4);
        assert_eq!((r.zeta, r.zeta_atom, r.zeta_field, r.concurrence), (0.0, 0.0, 0.0, 0.0));
    }
}

#[test]
fn no_drive_kills_drive_terms() {
    let m = real(1.0, 0.3, 0.0);
    for &t in &[0.0, 1.0, 10.0] {
        let p = m.coherent_pair(t);
        assert_eq!((p.beta_e.norm(), p.beta_g.norm(), p.dist_sq), (0.0, 0.0, 0.0));
        assert_eq!(m.phase(t), Complex::new(0.0, -t));
    }
}

#[test]
fn single_precision_observables() {
    let m = ModelParams::<f32>::new(1.0, 0.2, Complex::new(0.2, 0.0)).validate().unwrap();
    let d = real(1.0, 0.2, 0.2);
    for &t in &[0.5f32, 3.0, 11.0] {
        let a = m.state_record(t);
        let b = d.state_record(t as f64);
        assert!((a.zeta as f64 - b.zeta).abs() < 1e-5);
        assert!((a.concurrence as f64 - b.concurrence).abs() < 1e-5);
    }
}

fn params() -> impl Strategy<Value = (f64, f64, f64, f64, f64)> {
    (0.05..3.0f64, 0.05..5.0f64, 0.0..3.0f64, 0.0..std::f64::consts::TAU, 0.0..30.0f64)
}

proptest! {
    #[test]
    fn bounds_and_ordering((w, k, f, th, t) in params()) {
        let r = model(w, k, Complex::from_polar(f, th)).state_record(t);
        for z in [r.zeta, r.zeta_atom, r.zeta_field] {
            prop_assert!((0.0..=0.5).contains(&z));
        }
        prop_assert!((0.0..=1.0).contains(&r.concurrence));
        prop_assert!(r.corr >= 0.0);
        prop_assert!(r.zeta_atom >= r.zeta - 1e-15);
    }

    #[test]
    fn eigenvalue_identities((w, k, f, th, t) in params()) {
        let m = model(w, k, Complex::from_polar(f, th));
        let r = m.state_record(t);
        prop_assert!((r.lambda_plus + r.lambda_minus - 1.0).abs() <= 1e-15);
        prop_assert!((r.field_lambda_plus + r.field_lambda_minus - 1.0).abs() <= 1e-15);
        prop_assert!((1.0 - r.lambda_plus.powi(2) - r.lambda_minus.powi(2) - r.zeta).abs() <= 1e-12);
        prop_assert!((1.0 - r.field_lambda_plus.powi(2) - r.field_lambda_minus.powi(2) - r.zeta_field).abs() <= 1e-12);
        prop_assert!((r.field_lambda_plus * r.field_lambda_minus - 0.25 * (1.0 - (-r.dist_sq).exp())).abs() <= 1e-12);
        let (ag, ae) = m.atom_eigen(t);
        prop_assert!((1.0 - ag * ag - ae * ae - r.zeta_atom).abs() <= 1e-12);
        let factored = (r.lambda_plus - r.lambda_minus).abs() * 2.0 * (r.field_lambda_plus * r.field_lambda_minus).sqrt();
        prop_assert!((factored - r.concurrence).abs() <= 1e-12);
    }

    #[test]
    fn distance_two_ways((w, k, f, th, t) in params()) {
        let m = model(w, k, Complex::from_polar(f, th));
        let p = m.coherent_pair(t);
        prop_assert!((m.distance_sq_closed_form(t) - p.dist_sq).abs() <= 1e-12 * (1.0 + p.dist_sq));
        prop_assert!((p.beta_e_prime.norm() - p.beta_g_prime.norm()).abs() <= 1e-12 * (1.0 + p.beta_e_prime.norm()));
    }

    #[test]
    fn drive_phase_covariance((w, k, f, th, t) in params()) {
        let a = model(w, k, Complex::new(f, 0.0)).state_record(t);
        let b = model(w, k, Complex::from_polar(f, th)).state_record(t);
        for (x, y) in [(a.dist_sq, b.dist_sq), (a.re_phi, b.re_phi), (a.zeta, b.zeta), (a.zeta_atom, b.zeta_atom), (a.zeta_field, b.zeta_field), (a.concurrence, b.concurrence), (a.corr, b.corr)] {
            prop_assert!((x - y).abs() <= 1e-12 * (1.0 + x.abs()));
        }
    }

    #[test]
    fn long_time_identity(w in 0.05..3.0f64, k in 0.05..5.0f64, f in 0.01..3.0f64) {
        let m = real(w, k, f);
        let (e, g) = m.asymptotic_pair();
        let d_inf = (e - g).norm_sqr();
        let tau = m.characteristic_times().unwrap().long_time;
        prop_assert!((tau * k * d_inf - 1.0).abs() <= 1e-12);
    }
}
