use super::hpoly::{method_matrix_poly, rotation_taylor, stage_matrix_poly};
use super::*;
use crate::coefficients::catalog_lookup;
use crate::engine::{base_step, composition_step, MethodSpec, State};
use approx::assert_relative_eq;
use nalgebra::DMatrix;
use num_complex::Complex64;

#[test]
fn oscillator_basics() {
    let sys = harmonic_oscillator();
    let (q, p) = sys.exact_endpoint(&[1.0], &[0.0], std::f64::consts::FRAC_PI_2);
    assert!(q[0].abs() < 1e-15 && (p[0] + 1.0).abs() < 1e-15);
    assert_eq!(sys.energy(&[2.5], &[0.0]), 3.125);

    // drift additivity: two half drifts equal one full drift
    let tau = Complex64::new(0.3, 0.2);
    let mut x1 = State::from_real(&[0.7], &[-0.4]);
    sys.drift(&mut x1, tau).unwrap();
    sys.drift(&mut x1, tau * 0.5).unwrap();
    let mut x2 = State::from_real(&[0.7], &[-0.4]);
    sys.drift(&mut x2, tau * 1.5).unwrap();
    assert!(x1.distance(&x2) <= 1e-16);
}

#[test]
fn kepler_initial_energy_is_minus_half() {
    for e in [0.0, 0.3, 0.6, 0.9] {
        let sys = kepler(e).unwrap();
        let (q, p) = sys.initial_state();
        assert_relative_eq!(sys.energy(&q, &p), -0.5, max_relative = 1e-14);
    }
    assert!(kepler(1.0).is_err());
    assert!(kepler(-0.1).is_err());
}

#[test]
fn kepler_real_kick_matches_classical_force() {
    let sys = kepler(0.6).unwrap();
    let q = [0.8, -0.55];
    let p = [0.1, 0.2];
    let tau = 0.037;
    let mut state = State::from_real(&q, &p);
    sys.kick(&mut state, Complex64::new(tau, 0.0)).unwrap();
    let r3 = (q[0] * q[0] + q[1] * q[1]).powf(1.5);
    for i in 0..2 {
        let expected = p[i] - tau * q[i] / r3;
        assert_relative_eq!(state.p[i].re, expected, max_relative = 1e-15);
        assert_eq!(state.p[i].im, 0.0);
    }
}

#[test]
fn kepler_branch_cut_guard_fires() {
    let sys = kepler(0.6).unwrap();
    let mut state = State::from_real(&[0.0, 0.0], &[0.0, 0.0]);
    state.q[0] = Complex64::new(0.0, 1.0); // q·q = -1, on the cut
    assert!(!sys.domain_ok(&state));
    assert!(sys.kick(&mut state, Complex64::new(0.1, 0.0)).is_err());
}

#[test]
fn kepler_circular_orbit_closes() {
    let sys = kepler(0.0).unwrap();
    let (q0, p0) = sys.initial_state();
    let spec = MethodSpec::per_step(catalog_lookup("SC5").unwrap().clone());
    let h = 2.0 * std::f64::consts::PI / 1000.0;
    let mut state = State::from_real(&q0, &p0);
    for _ in 0..1000 {
        composition_step(&sys, &spec, h, &mut state).unwrap();
    }
    let end = State::from_real(&q0, &p0);
    assert!(state.distance(&end) <= 1e-10, "gap {}", state.distance(&end));
}

#[test]
fn pendulum_initial_energies() {
    let sys = pendulum();
    let (q, p) = sys.initial_state(0.5);
    assert_eq!(sys.energy(&q, &p), 0.125);
    let (q, p) = sys.initial_state(5.0);
    assert_eq!(sys.energy(&q, &p), 12.5);

    // complexified kick stays finite well off the real axis
    let mut state = State::from_real(&[1.0], &[0.0]);
    state.q[0] = Complex64::new(1.0, 10.0);
    sys.kick(&mut state, Complex64::new(0.1, 0.05)).unwrap();
    assert!(state.is_finite());
}

#[test]
fn oracle_zero_step_is_identity() {
    let sys = linear_split_oracle(42, 4).unwrap();
    let mut state = State::from_real(&[1.0, -2.0, 0.5, 0.3], &[0.0; 4]);
    let before = state.clone();
    sys.drift(&mut state, Complex64::new(0.0, 0.0)).unwrap();
    sys.kick(&mut state, Complex64::new(0.0, 0.0)).unwrap();
    assert!(state.distance(&before) <= 1e-15);
    assert!(linear_split_oracle(1, 7).is_err());
    assert!(linear_split_oracle(1, 1).is_err());
}

#[test]
fn oracle_commuting_mode_makes_base_step_exact() {
    let sys = linear_split_oracle_commuting(7, 3).unwrap();
    let q0 = [0.4, -1.1, 0.9];
    for tau in [0.3, 1.7, -0.8] {
        let mut state = State::from_real(&q0, &[0.0; 3]);
        base_step(&sys, &mut state, Complex64::new(tau, 0.0)).unwrap();
        let (qe, _) = sys.exact_endpoint(&q0, tau);
        let exact = State::from_real(&qe, &[0.0; 3]);
        assert!(
            state.distance(&exact) <= 1e-13,
            "tau={tau}: gap {}",
            state.distance(&exact)
        );
    }
}

#[test]
fn oracle_flow_group_property() {
    let sys = linear_split_oracle(11, 5).unwrap();
    let (t, s) = (0.7, 1.9);
    let prod = sys.exact_flow_matrix(t) * sys.exact_flow_matrix(s);
    let joint = sys.exact_flow_matrix(t + s);
    let gap = (&prod - &joint).norm() / joint.norm();
    assert!(gap <= 1e-13, "gap {gap}");
}

#[test]
fn matrix_exp_reproduces_rotation() {
    // exp(t J) with J = [[0, 1], [-1, 0]] is the rotation matrix
    let t = 0.83;
    let m = DMatrix::from_row_slice(2, 2, &[0.0, t, -t, 0.0])
        .map(|x| Complex64::new(x, 0.0));
    let e = super::oracle::matrix_exp(&m);
    assert_relative_eq!(e[(0, 0)].re, t.cos(), max_relative = 1e-14);
    assert_relative_eq!(e[(0, 1)].re, t.sin(), max_relative = 1e-14);
    assert_relative_eq!(e[(1, 0)].re, -t.sin(), max_relative = 1e-14);
    assert!(e[(0, 0)].im.abs() < 1e-15);
}

#[test]
fn single_stage_polynomial_entries() {
    let m = stage_matrix_poly(Complex64::new(1.0, 0.0), 6);
    // (1,1) entry: 1 - h^2/2
    assert_eq!(m.a.coeff(0), Complex64::new(1.0, 0.0));
    assert_eq!(m.a.coeff(2), Complex64::new(-0.5, 0.0));
    assert_eq!(m.a.coeff(1), Complex64::new(0.0, 0.0));
    // (1,2) entry: h - h^3/4
    assert_eq!(m.b.coeff(1), Complex64::new(1.0, 0.0));
    assert_eq!(m.b.coeff(3), Complex64::new(-0.25, 0.0));
    // (2,1) entry: -h
    assert_eq!(m.c.coeff(1), Complex64::new(-1.0, 0.0));

    // determinant is identically 1: each factor has unit determinant
    let det = m.det();
    assert!((det.coeff(0) - 1.0).norm() <= 1e-16);
    for d in 1..=6 {
        assert!(det.coeff(d).norm() <= 1e-16, "degree {d}");
    }
}

#[test]
fn projected_sc2_matches_rotation_through_degree_4() {
    let set = catalog_lookup("SC2").unwrap();
    let (_, projected) = ho_step_polynomial(set, 8);
    let defect = projected.sub(&rotation_taylor(8));
    for d in 0..=4 {
        assert!(defect.coeff_max_norm(d) <= 1e-15, "degree {d}");
    }
    assert!(defect.coeff_max_norm(5) > 1e-6);
}

#[test]
fn polynomial_matches_engine_action_on_basis_vectors() {
    let sys = harmonic_oscillator();
    for name in ["SC2", "SC5"] {
        let set = catalog_lookup(name).unwrap();
        let degree = 3 * set.stages();
        let (complex_poly, _) = ho_step_polynomial(set, degree);
        let spec = MethodSpec::unprojected(set.clone());
        for h in [0.25, 1.0, 2.0] {
            let m = complex_poly.eval(h);
            for (q0, p0, col) in [(1.0, 0.0, 0), (0.0, 1.0, 1)] {
                let mut state = State::from_real(&[q0], &[p0]);
                composition_step(&sys, &spec, h, &mut state).unwrap();
                let (mq, mp) = (m[0][col], m[1][col]);
                assert!(
                    (state.q[0] - mq).norm() <= 1e-13 && (state.p[0] - mp).norm() <= 1e-13,
                    "{name} h={h} col={col}"
                );
            }
        }
    }
}

#[test]
fn truncated_product_drops_high_degrees_only() {
    // (1 + h)^2 truncated at 1 keeps 1 + 2h
    let mut p = TruncPoly::zero(1);
    p.coeffs[0] = Complex64::new(1.0, 0.0);
    p.coeffs[1] = Complex64::new(1.0, 0.0);
    let sq = p.mul(&p);
    assert_eq!(sq.coeff(0), Complex64::new(1.0, 0.0));
    assert_eq!(sq.coeff(1), Complex64::new(2.0, 0.0));

    // degree-0 part of a stage matrix is the identity
    let m = method_matrix_poly(&catalog_lookup("SC3").unwrap().coeffs, 9);
    assert_eq!(m.a.coeff(0), Complex64::new(1.0, 0.0));
    assert_eq!(m.b.coeff(0), Complex64::new(0.0, 0.0));
    assert_eq!(m.d.coeff(0), Complex64::new(1.0, 0.0));
}
