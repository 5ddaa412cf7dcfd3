//! Temporary diagnostic (removed before release).

use symcomp::coefficients::catalog_lookup;
use symcomp::engine::{integrate, MethodSpec, Projection};
use symcomp::problems::kepler;

fn main() {
    let sys = kepler(0.6).unwrap();
    for (name, proj) in [("SC5", Projection::None), ("SC2", Projection::None)] {
        for h in [0.1, 0.2, 0.25, 0.3, 0.5, 1.0] {
            for (q0, p0, label) in [
                ([1.0, 0.0], [0.0, 0.0], "radial"),
                ([0.4, 0.0], [0.0, 2.0], "perihelion"),
                ([0.2, 0.0], [0.0, 0.5], "plunge"),
            ] {
                let spec = MethodSpec::new(catalog_lookup(name).unwrap().clone(), proj);
                let n = (10.0f64 / h).round();
                match integrate(&sys, &spec, h, n * h, &q0, &p0, 1) {
                    Ok(t) => {
                        if let Some(f) = &t.failure {
                            println!(
                                "{name} h={h} {label}: guard at step {} of {n} ({} records)",
                                f.step,
                                t.records.len()
                            );
                        } else {
                            let fin = t.records.last().unwrap();
                            let ok = fin.q.iter().all(|x| x.is_finite());
                            println!("{name} h={h} {label}: ran to end, finite={ok}");
                        }
                    }
                    Err(e) => println!("{name} h={h} {label}: error {e}"),
                }
            }
        }
    }
}
