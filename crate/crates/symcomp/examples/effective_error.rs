//! Scaled error coefficients, elbow and effective-error curve for every
//! bundled method: the data behind a nominal-efficiency plot.
//!
//! Run with `cargo run --example effective_error`.

use symcomp::coefficients::{catalog, effective_error_terms};

fn main() {
    println!("# effective-error model per bundled method");
    println!("method,stages,projected_order,e_lo,e_hi,elbow");
    for set in catalog() {
        let m = effective_error_terms(set).expect("bundled orders are even");
        println!(
            "{},{},{},{:.5e},{:.5e},{:.5e}",
            set.name,
            set.stages(),
            m.projected_order,
            m.e_lo,
            m.e_hi,
            m.elbow
        );
    }

    println!();
    println!("# effective error E(h) on a geometric grid (one column per method)");
    let models: Vec<_> = catalog()
        .iter()
        .map(|set| (set.name.clone(), effective_error_terms(set).unwrap()))
        .collect();
    print!("h");
    for (name, _) in &models {
        print!(",{name}");
    }
    println!();
    let n = 25;
    for i in 0..n {
        // h from 0.05 to 2.0, geometric
        let h = 0.05 * (2.0f64 / 0.05).powf(i as f64 / (n - 1) as f64);
        print!("{h:.6e}");
        for (_, m) in &models {
            print!(",{:.6e}", m.evaluate(h));
        }
        println!();
    }
}
