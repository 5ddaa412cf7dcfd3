//! Temporary diagnostic (removed before release).

use symcomp::coefficients::catalog_lookup;
use symcomp::engine::{integrate_each, step_count, MethodSpec};
use symcomp::problems::kepler;

fn main() {
    let sys = kepler(0.6).unwrap();
    let (q0, p0) = sys.initial_state();
    let spec = MethodSpec::per_step(catalog_lookup("SC5").unwrap().clone());

    // energy-error scaling in h over one fixed interval
    for h in [2.0 / 7.0, 1.0 / 7.0, 2.0 / 35.0] {
        let n = step_count(h, 100.0).unwrap();
        let mut max_err = 0.0f64;
        integrate_each(&sys, &spec, h, n, &q0, &p0, 1, |_, _, _, _, e| {
            max_err = max_err.max(e);
        })
        .unwrap();
        println!("h={h:.5}  t=100    max_rel_energy_err={max_err:.4e}");
    }

    // long run: every-step max vs sparse-sample max
    let h = 2.0 / 7.0;
    let n = step_count(h, 1e4).unwrap();
    let mut max_every = 0.0f64;
    let mut max_sparse = 0.0f64;
    integrate_each(&sys, &spec, h, n, &q0, &p0, 1, |step, _, _, _, e| {
        max_every = max_every.max(e);
        if step % 1000 == 0 {
            max_sparse = max_sparse.max(e);
        }
    })
    .unwrap();
    println!("t=1e4 every-step max={max_every:.4e}  sparse(1000) max={max_sparse:.4e}");

    // where do the peaks happen? print per-orbit max for 3 orbits
    let n2 = step_count(h, 19.0).unwrap();
    integrate_each(&sys, &spec, h, n2, &q0, &p0, 1, |step, t, q, _, e| {
        let r = (q[0] * q[0] + q[1] * q[1]).sqrt();
        if e > 2e-4 {
            println!("  step {step:4} t={t:7.3} r={r:.3} err={e:.3e}");
        }
    })
    .unwrap();
}
