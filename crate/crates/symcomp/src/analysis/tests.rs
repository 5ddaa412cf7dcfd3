use super::degree::{symmetry_defect_poly, symplecticity_defect_poly};
use super::*;
use crate::analysis::stability::{projected_step_matrix, spectral_radius, RADIUS_SLACK};
use crate::coefficients::{basic_scheme, catalog_lookup};
use crate::engine::MethodSpec;
use crate::problems::hpoly::{method_matrix_poly, HPolynomialMatrix};
use crate::problems::{harmonic_oscillator, kepler, linear_split_oracle, pendulum};

fn per_step(name: &str) -> MethodSpec {
    MethodSpec::per_step(catalog_lookup(name).unwrap().clone())
}

#[test]
fn degree_probes_spot_checks() {
    let probe = |name: &str| {
        let spec = per_step(name);
        (
            pseudo_symmetry_degree(&spec, 20).outcome,
            pseudo_symplecticity_degree(&spec, 20).outcome,
        )
    };
    let (sym, det) = probe("SC2");
    assert!(matches!(sym, ProbeOutcome::FirstDegree { degree: 8, .. }), "{sym:?}");
    assert!(matches!(det, ProbeOutcome::FirstDegree { degree: 8, .. }), "{det:?}");
    let (sym, det) = probe("PC3");
    assert!(matches!(sym, ProbeOutcome::FirstDegree { degree: 10, .. }), "{sym:?}");
    assert!(matches!(det, ProbeOutcome::FirstDegree { degree: 10, .. }), "{det:?}");
    let (sym, det) = probe("SC5");
    assert!(matches!(sym, ProbeOutcome::FirstDegree { degree: 12, .. }), "{sym:?}");
    assert!(matches!(det, ProbeOutcome::FirstDegree { degree: 12, .. }), "{det:?}");

    // real palindromic compositions are exactly symmetric and symplectic
    let (sym, det) = probe("PR3");
    assert!(matches!(sym, ProbeOutcome::AtLeast { degree: 20 }), "{sym:?}");
    assert!(matches!(det, ProbeOutcome::AtLeast { degree: 20 }), "{det:?}");
    let pr3_det = symplecticity_defect_poly(&per_step("PR3"), 20);
    let max = (0..=20).map(|d| pr3_det.coeff(d).norm()).fold(0.0, f64::max);
    assert!(max <= 1e-13, "PR3 det defect {max:.3e}");
}

#[test]
fn projection_never_lowers_the_symmetry_degree() {
    // compare per-step projection against projecting only at readout of
    // the complex round trip
    for name in ["SC2", "SC3"] {
        let set = catalog_lookup(name).unwrap();
        let cap = 6 * set.stages();
        let spec = per_step(name);
        let projected = pseudo_symmetry_degree(&spec, cap)
            .first_degree()
            .expect("defect expected below cap");

        let pc = method_matrix_poly(&set.coeffs, cap);
        let readout = pc
            .alternated()
            .mul(&pc)
            .re()
            .sub(&HPolynomialMatrix::identity(cap));
        let p_norms: Vec<f64> = (0..=cap).map(|d| pc.coeff_max_norm(d)).collect();
        let mut readout_degree = cap as u32;
        for d in 0..=cap {
            let scale = (0..=d)
                .map(|i| p_norms[i] * p_norms[d - i])
                .fold(0.0, f64::max);
            if readout.coeff_max_norm(d) > 1e-9 * scale {
                readout_degree = d as u32;
                break;
            }
        }
        assert!(
            projected >= readout_degree,
            "{name}: projected {projected} < readout {readout_degree}"
        );
    }
}

#[test]
fn polynomial_defect_matches_engine_matrix_defect() {
    // evaluate the symmetry-defect polynomial at h = 0.5 and compare with
    // the numerically composed real matrices
    for name in ["SC2", "SC3"] {
        let set = catalog_lookup(name).unwrap();
        let spec = per_step(name);
        let cap = 6 * set.stages();
        let poly = symmetry_defect_poly(&spec, cap);
        let h = 0.5;
        let fwd = projected_step_matrix(set, h);
        let bwd = projected_step_matrix(set, -h);
        for (i, row) in [[0usize, 1], [2, 3]].iter().enumerate() {
            let _ = row;
            for j in 0..2 {
                let num = bwd[i][0] * fwd[0][j] + bwd[i][1] * fwd[1][j]
                    - if i == j { 1.0 } else { 0.0 };
                let pol = poly.eval(h)[i][j].re;
                assert!(
                    (num - pol).abs() <= 1e-12,
                    "{name} ({i},{j}): {num:.3e} vs {pol:.3e}"
                );
            }
        }
    }
}

#[test]
fn stability_limits_of_basic_scheme_and_sc2() {
    let basic = stability_limit(&basic_scheme());
    let h_t = basic.h_t().unwrap();
    assert!((h_t - 2.0).abs() <= 1e-6, "basic h_t {h_t}");

    let rep = stability_limit(catalog_lookup("SC2").unwrap());
    match rep.outcome {
        StabilityOutcome::Limit { h_t, h_t_per_stage } => {
            assert!((h_t_per_stage - 1.7320).abs() <= 5e-4, "{h_t_per_stage}");
            // bracketing: stable just below, unstable just above
            let set = catalog_lookup("SC2").unwrap();
            let lo = spectral_radius(&projected_step_matrix(set, h_t - 1e-6));
            let hi = spectral_radius(&projected_step_matrix(set, h_t + 1e-6));
            assert!(lo <= 1.0 + RADIUS_SLACK, "rho below: {lo}");
            assert!(hi > 1.0 + RADIUS_SLACK, "rho above: {hi}");
        }
        other => panic!("unexpected outcome {other:?}"),
    }
}

#[test]
fn nonlinear_symmetry_slopes() {
    // pendulum, SC2: pseudo-symmetry order 7, slope 8
    let sys = pendulum();
    let grid: Vec<f64> = (0..8).map(|k| 0.3 * (1.2f64 / 0.3).powf(k as f64 / 7.0)).collect();
    let rep = nonlinear_symmetry_probe(&sys, &per_step("SC2"), &grid, &[0.0], &[0.5]).unwrap();
    let slope = rep.slope().expect("signal expected");
    assert!((slope - 8.0).abs() <= 0.4, "slope {slope}");

    // a real palindromic method has roundoff-level defects only
    let rep = nonlinear_symmetry_probe(&sys, &per_step("PR3"), &grid, &[0.0], &[0.5]).unwrap();
    assert!(
        matches!(rep.outcome, ProbeOutcome::InsufficientSignal { .. }),
        "{:?}",
        rep.outcome
    );
}

#[test]
fn kepler_pc3_nonlinear_symmetry_slope() {
    let sys = kepler(0.6).unwrap();
    let (q0, p0) = sys.initial_state();
    let grid: Vec<f64> = (0..8).map(|k| 0.02 * (0.1f64 / 0.02).powf(k as f64 / 7.0)).collect();
    let rep = nonlinear_symmetry_probe(&sys, &per_step("PC3"), &grid, &q0, &p0).unwrap();
    let slope = rep.slope().expect("signal expected");
    assert!((slope - 10.0).abs() <= 0.5, "slope {slope}");
}

#[test]
fn oscillator_convergence_order_and_grid_robustness() {
    let sys = harmonic_oscillator();
    let t_final = 10.0;
    let (qe, pe) = sys.exact_endpoint(&[2.5], &[0.0], t_final);
    let grid = divisor_grid(t_final, 20, 200, 8);
    let rep = convergence_order(
        &sys,
        &per_step("SC2"),
        &grid,
        t_final,
        &[2.5],
        &[0.0],
        &Reference::Exact(qe.clone(), pe.clone()),
    )
    .unwrap();
    let slope = rep.slope().expect("signal expected");
    assert!((slope - 4.0).abs() <= 0.25, "slope {slope}");

    // shifting the grid by one geometric step moves the slope by < 0.1
    let shifted = divisor_grid(t_final, 28, 280, 8);
    let rep2 = convergence_order(
        &sys,
        &per_step("SC2"),
        &shifted,
        t_final,
        &[2.5],
        &[0.0],
        &Reference::Exact(qe, pe),
    )
    .unwrap();
    let slope2 = rep2.slope().unwrap();
    assert!((slope - slope2).abs() < 0.1, "{slope} vs {slope2}");
}

#[test]
fn oracle_one_step_orders() {
    let sys = linear_split_oracle(3, 4).unwrap();
    let q0 = [0.3, -0.7, 0.5, 0.9];
    let p0 = [0.0; 4];
    let grid: Vec<f64> = (0..8).map(|k| 0.01 * (0.1f64 / 0.01).powf(k as f64 / 7.0)).collect();
    for (name, order) in [("SC2", 3.0), ("SC3", 4.0)] {
        let spec = MethodSpec::unprojected(catalog_lookup(name).unwrap().clone());
        let rep = one_step_order(&sys, &spec, &grid, &q0, &p0, &|h| sys.exact_endpoint(&q0, h))
            .unwrap();
        let slope = rep.slope().expect("signal expected");
        assert!(
            (slope - (order + 1.0)).abs() <= 0.25,
            "{name}: slope {slope}, expected {}",
            order + 1.0
        );
    }
}

#[test]
fn commuting_oracle_base_step_has_no_order_barrier() {
    // with diagonal (commuting) factors the one-step error is roundoff
    let sys = crate::problems::linear_split_oracle_commuting(5, 3).unwrap();
    let q0 = [0.4, -0.2, 0.8];
    let grid = [0.05, 0.1, 0.2, 0.4];
    let spec = MethodSpec::unprojected(basic_scheme());
    let rep = one_step_order(&sys, &spec, &grid, &q0, &[0.0; 3], &|h| {
        sys.exact_endpoint(&q0, h)
    })
    .unwrap();
    assert!(
        matches!(rep.outcome, ProbeOutcome::InsufficientSignal { .. }),
        "{:?}",
        rep.outcome
    );
}

#[test]
fn oscillator_drift_statistics() {
    let sys = harmonic_oscillator();
    let stats = energy_drift(&sys, &per_step("SC3"), 0.25, 1e4, &[2.5], &[0.0], 1).unwrap();
    assert!(stats.last_decile_max <= 2.0 * stats.first_decile_max, "{stats:?}");
    assert!(stats.envelope_max < 1e-4, "{stats:?}");

    // ten-step run is trivially bounded
    let short = energy_drift(&sys, &per_step("SC3"), 0.25, 2.5, &[2.5], &[0.0], 1).unwrap();
    assert_eq!(short.samples, 11);
    assert!(short.envelope_max < 1e-4);
}

#[test]
fn work_precision_rows_and_determinism() {
    let sys = harmonic_oscillator();
    let specs = [per_step("SC2")];
    let table = work_precision(
        &sys,
        &specs,
        &[0.1],
        10.0,
        &[2.5],
        &[0.0],
        u64::MAX,
        Metric::MaxRelEnergy,
        None,
    )
    .unwrap();
    assert_eq!(table.rows.len(), 1);
    assert_eq!(table.rows[0].steps, 100);
    assert_eq!(table.rows[0].cost, 200);

    let again = work_precision(
        &sys,
        &specs,
        &[0.1],
        10.0,
        &[2.5],
        &[0.0],
        u64::MAX,
        Metric::MaxRelEnergy,
        None,
    )
    .unwrap();
    assert_eq!(table.to_csv(), again.to_csv());
}

#[test]
fn pendulum_period_sampling_cadence() {
    // h = 2π/m, 100 periods, sampling at t = k·2π
    let sys = pendulum();
    let m = 16u64;
    let h = 2.0 * std::f64::consts::PI / m as f64;
    let t_final = h * (100 * m) as f64;
    let ref_spec = per_step("SC11");
    let table = work_precision(
        &sys,
        &[per_step("SC5")],
        &[h],
        t_final,
        &[0.0],
        &[5.0],
        100,
        Metric::AvgStateError,
        Some(&ref_spec),
    )
    .unwrap();
    assert_eq!(table.rows.len(), 1);
    assert!(table.rows[0].value.is_finite());
    assert!(table.rows[0].value > 0.0);
}

#[test]
fn divisor_grid_divides_exactly() {
    let grid = divisor_grid(650.0, 100, 1000, 9);
    assert!(grid.len() >= 8);
    for h in grid {
        let n = crate::engine::step_count(h, 650.0).unwrap();
        assert!(n >= 100 && n <= 1000);
    }
}
