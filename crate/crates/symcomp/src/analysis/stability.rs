//! Effective linear stability limit on the harmonic oscillator.
//!
//! Scans the spectral radius of the real-projected one-step matrix
//! `Re(M(h))` upward from zero and refines the first crossing of
//! `1 + 1e-9` by bisection. Marginal unit-modulus cases are numerically
//! fragile, so the crossing threshold carries the explicit slack.

use crate::coefficients::CoefficientSet;
use crate::csvfmt;
use num_complex::Complex64;

/// Scan step for the coarse sweep.
pub const SCAN_RESOLUTION: f64 = 1e-3;
/// Width to which the crossing is bisected.
pub const BISECTION_TOL: f64 = 1e-8;
/// Spectral-radius slack marking instability.
pub const RADIUS_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StabilityOutcome {
    /// First step size where iterates stop being bounded.
    Limit { h_t: f64, h_t_per_stage: f64 },
    /// No instability found while scanning up to `h_max = 10 * stages`.
    NoInstabilityBelow { h_max: f64 },
}

#[derive(Debug, Clone)]
pub struct StabilityReport {
    pub method: String,
    pub stages: usize,
    pub outcome: StabilityOutcome,
    pub scan_resolution: f64,
    pub bisection_tol: f64,
}

impl StabilityReport {
    pub fn h_t(&self) -> Option<f64> {
        match self.outcome {
            StabilityOutcome::Limit { h_t, .. } => Some(h_t),
            StabilityOutcome::NoInstabilityBelow { .. } => None,
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!(
            "# probe=stability method={} stages={} resolution={} bisection={}\n",
            self.method,
            self.stages,
            csvfmt::float(self.scan_resolution),
            csvfmt::float(self.bisection_tol),
        );
        out.push_str("h_t,h_t_per_stage\n");
        match self.outcome {
            StabilityOutcome::Limit { h_t, h_t_per_stage } => {
                out.push_str(&csvfmt::row(&[csvfmt::float(h_t), csvfmt::float(h_t_per_stage)]));
                out.push('\n');
            }
            StabilityOutcome::NoInstabilityBelow { h_max } => {
                out.push_str(&format!("unbounded-scan,{}\n", csvfmt::float(h_max)));
            }
        }
        out
    }
}

/// Real-projected one-step matrix of the composition on the harmonic
/// oscillator at a numeric step size.
pub fn projected_step_matrix(set: &CoefficientSet, h: f64) -> [[f64; 2]; 2] {
    let mut m = [
        [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
        [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
    ];
    for alpha in &set.coeffs {
        let tau = alpha * h;
        let diag = 1.0 - tau * tau * 0.5;
        let s = [[diag, tau - tau * tau * tau * 0.25], [-tau, diag]];
        m = [
            [
                s[0][0] * m[0][0] + s[0][1] * m[1][0],
                s[0][0] * m[0][1] + s[0][1] * m[1][1],
            ],
            [
                s[1][0] * m[0][0] + s[1][1] * m[1][0],
                s[1][0] * m[0][1] + s[1][1] * m[1][1],
            ],
        ];
    }
    [[m[0][0].re, m[0][1].re], [m[1][0].re, m[1][1].re]]
}

/// Spectral radius of a real 2×2 matrix.
pub fn spectral_radius(m: &[[f64; 2]; 2]) -> f64 {
    let trace = m[0][0] + m[1][1];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let disc = trace * trace - 4.0 * det;
    if disc >= 0.0 {
        let root = disc.sqrt();
        (0.5 * (trace + root)).abs().max((0.5 * (trace - root)).abs())
    } else {
        // complex pair: |λ|² = det
        det.max(0.0).sqrt()
    }
}

/// Scans for the effective stability limit of the per-step projected map.
pub fn stability_limit(set: &CoefficientSet) -> StabilityReport {
    let stages = set.stages();
    let h_max = 10.0 * stages as f64;
    let unstable = |h: f64| spectral_radius(&projected_step_matrix(set, h)) > 1.0 + RADIUS_SLACK;

    let mut crossing = None;
    let mut k = 1u64;
    loop {
        let h = k as f64 * SCAN_RESOLUTION;
        if h > h_max {
            break;
        }
        if unstable(h) {
            crossing = Some(h);
            break;
        }
        k += 1;
    }
    let outcome = match crossing {
        None => StabilityOutcome::NoInstabilityBelow { h_max },
        Some(hi0) => {
            let mut lo = hi0 - SCAN_RESOLUTION;
            let mut hi = hi0;
            while hi - lo > BISECTION_TOL {
                let mid = 0.5 * (lo + hi);
                if unstable(mid) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            let h_t = 0.5 * (lo + hi);
            StabilityOutcome::Limit {
                h_t,
                h_t_per_stage: h_t / stages as f64,
            }
        }
    };
    StabilityReport {
        method: set.name.clone(),
        stages,
        outcome,
        scan_resolution: SCAN_RESOLUTION,
        bisection_tol: BISECTION_TOL,
    }
}
