//! Temporary diagnostic (removed before release).

use symcomp::coefficients::catalog;
use symcomp::problems::hpoly::{ho_step_polynomial, HPolynomialMatrix};

fn defect_profile(label: &str, q: &HPolynomialMatrix, sub_identity: bool) {
    let cap = q.degree_cap();
    print!("{label:22}");
    for d in 0..=cap.min(20) {
        let mut m = q.coeff_max_norm(d);
        if sub_identity && d == 0 {
            // defect relative to identity
            m = [
                (q.a.coeff(0) - 1.0).norm(),
                q.b.coeff(0).norm(),
                q.c.coeff(0).norm(),
                (q.d.coeff(0) - 1.0).norm(),
            ]
            .into_iter()
            .fold(0.0, f64::max);
        }
        if m == 0.0 {
            print!("      .");
        } else {
            print!(" {:6.0e}", m);
        }
    }
    println!();
}

fn main() {
    println!("degrees:                 0      1      2      3      4      5      6      7      8      9     10     11     12     13     14     15     16     17     18     19     20");
    for set in catalog() {
        let cap = 20usize;
        let (_, projected) = ho_step_polynomial(set, cap);
        // symmetry defect: P(-h) P(h) - I
        let q = projected.alternated().mul(&projected);
        defect_profile(&format!("{} sym", set.name), &q, true);
        // symplecticity defect: det P - 1
        let det = projected.det();
        print!("{:22}", format!("{} det", set.name));
        for d in 0..=cap {
            let mut m = det.coeff(d).norm();
            if d == 0 {
                m = (det.coeff(0) - 1.0).norm();
            }
            if m == 0.0 {
                print!("      .");
            } else {
                print!(" {:6.0e}", m);
            }
        }
        println!();
    }
}
