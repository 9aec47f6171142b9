use super::*;
use crate::model::ModelParams;
use std::f64::consts::PI;

fn model(w: f64, k: f64, f: f64) -> Model64 {
    ModelParams::new(w, k, C64::new(f, 0.0)).validate().unwrap()
}

fn oracle(m: &Model64) -> Oracle {
    Oracle::new(m, IntegratorConfig::default()).unwrap()
}

#[test]
fn truncation_examples() {
    assert_eq!(fock_truncation(&model(1.0, 1.0, 1.0)), 40);
    assert_eq!(fock_truncation(&model(1.0, 1.0, 0.0)), 20);
    assert_eq!(fock_truncation(&model(1.0, 0.2, 0.4)), 68);
    let v = fock::coherent_vector(C64::new(4.0, 0.0), 400);
    let tail: f64 = v.iter().skip(69).map(|x| x.norm_sqr()).sum();
    assert!(tail < 1e-12, "{tail}");
}

#[test]
fn stationary_state_is_a_fixed_point() {
    let m = model(1.0, 0.7, 0.9);
    let n = fock_truncation(&m);
    let g = Generator::new(&m, n);
    let s = expand_stationary(&m.stationary_state(&AtomicAmplitudes::excited()), n + 1, 0.0);
    assert!(g.apply(s.data()).camax() <= 1e-10);
}

#[test]
fn zero_length_evolution_returns_input() {
    let m = model(1.0, 1.0, 1.0);
    let o = oracle(&m);
    let rho0 = initial_state(&m, &AtomicAmplitudes::symmetric(), o.levels());
    let (rho, rep) = o.evolve(&rho0, 0.0).unwrap();
    assert_eq!(rep.steps.accepted, 0);
    assert!((rho.data() - rho0.data()).camax() < 1e-15);
}

#[test]
fn definite_atom_keeps_field_coherent() {
    let m = model(1.0, 1.0, 1.0);
    let o = oracle(&m);
    let t = 2.0;
    let pair = m.coherent_pair(t);
    for (amps, beta) in [(AtomicAmplitudes::excited(), pair.beta_e_prime), (AtomicAmplitudes::ground(), pair.beta_g_prime)] {
        let (rho, _) = o.evolve(&initial_state(&m, &amps, o.levels()), t).unwrap();
        let field = partial_trace_atom(&rho);
        let fid = fock::expectation(&field, &fock::coherent_vector(beta, o.levels())).re;
        assert!(fid >= 1.0 - 1e-6, "{fid}");
    }
}

#[test]
fn partial_traces_of_products() {
    let m = model(1.0, 1.0, 1.0);
    let levels = 25;
    let rho = product_state(&AtomicAmplitudes::excited(), C64::new(0.3, 0.2), levels);
    let ra = partial_trace_field(&rho);
    assert!((ra[(0, 0)] - C64::from(1.0)).norm() < 1e-14 && ra[(1, 1)].norm() == 0.0);
    let v = fock::coherent_vector(C64::new(0.3, 0.2), levels);
    let sigma = &v * v.adjoint() / C64::from(v.norm_squared());
    assert!((partial_trace_atom(&rho) - sigma).camax() < 1e-15);
    let rho0 = initial_state(&m, &AtomicAmplitudes::symmetric(), 41);
    let ra = partial_trace_field(&rho0);
    for x in ra.iter() {
        assert!((x - C64::from(0.5)).norm() < 1e-12);
    }
}

#[test]
fn pure_states_have_no_linear_entropy() {
    let m = model(1.0, 0.2, 0.2);
    let rho = initial_state(&m, &AtomicAmplitudes::from_angles(0.3, 1.1), 30);
    assert!(observables(&rho).linear_entropy <= 1e-10);
}

#[test]
fn embedding_of_exact_state() {
    let m = model(1.0, 0.2, 0.2);
    let levels = fock_truncation(&m) + 1;
    for &t in &[PI / 2.0, 3.0, 9.0] {
        let pair = m.coherent_pair(t);
        let exact = expand_elements(&m.matrix_elements(&AtomicAmplitudes::symmetric(), t), levels, t);
        let e = embed_two_qubit(&exact, pair.beta_e_prime, pair.beta_g_prime);
        assert!(e.leakage.abs() <= 1e-10);
        assert!(!e.degenerate);
        let c = wootters_concurrence(&e.rho).unwrap();
        assert!((c - m.concurrence(t)).abs() <= 1e-10, "{c} vs {}", m.concurrence(t));
    }
    let pair = m.coherent_pair(0.0);
    let e = embed_two_qubit(&initial_state(&m, &AtomicAmplitudes::symmetric(), levels), pair.beta_e_prime, pair.beta_g_prime);
    assert!(e.degenerate);
    assert!(wootters_concurrence(&e.rho).unwrap() < 1e-12);
}

#[test]
fn driven_mode_without_atom_coupling() {
    let m = model(0.0, 0.6, 0.5);
    let o = oracle(&m);
    let alpha0 = C64::new(0.7, 0.4);
    let rho0 = product_state(&AtomicAmplitudes::excited(), alpha0, o.levels());
    let times = [0.5, 1.5, 4.0];
    let (states, _) = o.trajectory(&rho0, &times).unwrap();
    for (rho, &t) in states.iter().zip(&times) {
        let field = partial_trace_atom(rho);
        let expect = m.driven_mode_state(t, alpha0);
        assert!((fock::mean_amplitude(&field) - expect).norm() < 1e-6);
        let fid = fock::expectation(&field, &fock::coherent_vector(expect, o.levels())).re;
        assert!(fid > 1.0 - 1e-6);
    }
}

#[test]
fn matches_closed_form_at_quarter_period() {
    let m = model(1.0, 0.2, 0.2);
    let o = oracle(&m);
    let t = PI / 2.0;
    let (rho, rep) = o.evolve(&initial_state(&m, &AtomicAmplitudes::symmetric(), o.levels()), t).unwrap();
    rho.check_invariants().unwrap();
    assert!(rep.max_trace_drift <= TRACE_DRIFT_LIMIT);
    let exact = expand_elements(&m.matrix_elements(&AtomicAmplitudes::symmetric(), t), o.levels(), t);
    assert!(trace_distance(rho.data(), exact.data()) <= 1e-4);
    let pair = m.coherent_pair(t);
    let rec = measure(&rho, pair.beta_e_prime, pair.beta_g_prime).unwrap();
    let r = m.state_record(t);
    assert!((rec.concurrence - r.concurrence).abs() <= 1e-4);
    assert!((rec.re_phi.exp() - r.re_phi.exp()).abs() <= 1e-4);
    assert!((rec.zeta_atom - r.zeta_atom).abs() <= 1e-4);
    assert!(rec.leakage <= 1e-6);
}

#[test]
fn tolerance_and_truncation_convergence() {
    let m = model(1.0, 1.0, 1.0);
    let t = 3.0;
    let amps = AtomicAmplitudes::symmetric();
    let pair = m.coherent_pair(t);
    let run = |n: usize, rtol: f64| {
        let cfg = IntegratorConfig { rel_tol: rtol, ..Default::default() };
        let o = Oracle::with_truncation(&m, n, cfg).unwrap();
        let (rho, _) = o.evolve(&initial_state(&m, &amps, n + 1), t).unwrap();
        measure(&rho, pair.beta_e_prime, pair.beta_g_prime).unwrap()
    };
    let n = fock_truncation(&m);
    let base = run(n, 1e-9);
    let tight = run(n, 5e-10);
    let wide = run(n + 10, 1e-9);
    for (a, b) in [(base.zeta, tight.zeta), (base.zeta_atom, tight.zeta_atom), (base.concurrence, tight.concurrence)] {
        assert!((a - b).abs() < 1e-4);
    }
    for (a, b) in [(base.zeta, wide.zeta), (base.zeta_field, wide.zeta_field), (base.corr, wide.corr)] {
        assert!((a - b).abs() < 1e-8, "{a} vs {b}");
    }
}

#[test]
fn long_run_reaches_classically_correlated_state() {
    let m = model(1.0, 1.0, 1.0);
    let o = oracle(&m);
    let t = 20.0;
    let (rho, _) = o.evolve(&initial_state(&m, &AtomicAmplitudes::symmetric(), o.levels()), t).unwrap();
    let stat = expand_stationary(&m.stationary_state(&AtomicAmplitudes::symmetric()), o.levels(), t);
    assert!(trace_distance(rho.data(), stat.data()) <= 1e-3);
    assert!((observables(&rho).nbar - m.nbar_infinity()).abs() <= 1e-4);
}

#[test]
fn rejects_insufficient_truncation() {
    let m = model(1.0, 0.2, 0.6);
    let o = Oracle::with_truncation(&m, 4, IntegratorConfig::default()).unwrap();
    let rho0 = initial_state(&m, &AtomicAmplitudes::symmetric(), 5);
    assert!(matches!(o.evolve(&rho0, 1.0), Err(OracleError::Truncation { .. })));
}

#[test]
fn rejects_malformed_states() {
    let bad = DMatrix::<C64>::identity(4, 4);
    assert!(FockDensityMatrix::new(bad, 2, 0.0).is_err());
    let ok = DMatrix::<C64>::identity(4, 4) * C64::from(0.25);
    assert!(FockDensityMatrix::new(ok, 2, 0.0).is_ok());
}
