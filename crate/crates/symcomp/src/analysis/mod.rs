//! Measurement probes: convergence order, pseudo-symmetry and
//! pseudo-symplecticity degrees, linear stability limits, energy-drift
//! statistics and work-precision tables.
//!
//! Numerical probes share a noise filter (defects below 1e-12 or within
//! 100 machine epsilons of the state scale are discarded) and a log-log
//! least-squares slope fit that only reports when at least three points
//! survive.

use crate::csvfmt;

mod degree;
mod dynamics;
mod stability;

pub use degree::{pseudo_symmetry_degree, pseudo_symplecticity_degree};
pub use dynamics::{
    convergence_order, energy_drift, nonlinear_symmetry_probe, one_step_order, work_precision,
    DriftStats, Metric, Reference, WorkPrecisionRow, WorkPrecisionTable,
};
pub use stability::{stability_limit, StabilityOutcome, StabilityReport};

/// What a [`ProbeReport`] measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbeKind {
    PseudoSymmetry,
    PseudoSymplecticity,
    NonlinearSymmetry,
    ConvergenceOrder,
    OneStepOrder,
}

impl ProbeKind {
    pub fn label(self) -> &'static str {
        match self {
            ProbeKind::PseudoSymmetry => "pseudo-symmetry",
            ProbeKind::PseudoSymplecticity => "pseudo-symplecticity",
            ProbeKind::NonlinearSymmetry => "nonlinear-symmetry",
            ProbeKind::ConvergenceOrder => "convergence-order",
            ProbeKind::OneStepOrder => "one-step-order",
        }
    }
}

/// Probe verdict: a fitted slope, a first significant polynomial degree,
/// a clean sheet up to the truncation cap, or not enough signal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProbeOutcome {
    Slope { slope: f64, fit_residual: f64 },
    FirstDegree { degree: u32, coefficient: f64 },
    AtLeast { degree: u32 },
    InsufficientSignal { usable: usize },
}

/// Outcome of one analysis probe, with the grid and raw defect magnitudes
/// it was computed from.
#[derive(Debug, Clone)]
pub struct ProbeReport {
    pub kind: ProbeKind,
    pub method: String,
    /// Step sizes, or polynomial degrees, depending on the probe.
    pub grid: Vec<f64>,
    /// Defect magnitude per grid point.
    pub defects: Vec<f64>,
    pub outcome: ProbeOutcome,
    /// Points removed by the noise filter.
    pub discarded: usize,
}

impl ProbeReport {
    /// Fitted slope, when the probe produced one.
    pub fn slope(&self) -> Option<f64> {
        match self.outcome {
            ProbeOutcome::Slope { slope, .. } => Some(slope),
            _ => None,
        }
    }

    /// First significant degree, when the probe produced one.
    pub fn first_degree(&self) -> Option<u32> {
        match self.outcome {
            ProbeOutcome::FirstDegree { degree, .. } => Some(degree),
            _ => None,
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!(
            "# probe={} method={} points={} discarded={} outcome={}\n",
            self.kind.label(),
            self.method,
            self.grid.len(),
            self.discarded,
            match self.outcome {
                ProbeOutcome::Slope {
                    slope,
                    fit_residual,
                } => format!("slope:{}:residual:{}", csvfmt::float(slope), csvfmt::float(fit_residual)),
                ProbeOutcome::FirstDegree {
                    degree,
                    coefficient,
                } => format!("first-degree:{degree}:coefficient:{}", csvfmt::float(coefficient)),
                ProbeOutcome::AtLeast { degree } => format!("at-least:{degree}"),
                ProbeOutcome::InsufficientSignal { usable } =>
                    format!("insufficient-signal:{usable}"),
            }
        );
        out.push_str("grid,defect\n");
        for (g, d) in self.grid.iter().zip(&self.defects) {
            out.push_str(&csvfmt::row(&[csvfmt::float(*g), csvfmt::float(*d)]));
            out.push('\n');
        }
        out
    }
}

/// Noise floor for a defect measured against states of the given scale.
pub(crate) fn noise_floor(state_scale: f64) -> f64 {
    (100.0 * f64::EPSILON * state_scale).max(1e-12)
}

/// Least-squares slope of `ln defect` vs `ln h` over the points above the
/// floor; reports insufficient signal with fewer than three survivors.
pub(crate) fn fit_slope(
    kind: ProbeKind,
    method: &str,
    grid: &[f64],
    defects: &[f64],
    floor: f64,
) -> ProbeReport {
    let usable: Vec<(f64, f64)> = grid
        .iter()
        .zip(defects)
        .filter(|(_, &d)| d > floor && d.is_finite())
        .map(|(&h, &d)| (h.ln(), d.ln()))
        .collect();
    let discarded = grid.len() - usable.len();
    let outcome = if usable.len() < 3 {
        ProbeOutcome::InsufficientSignal {
            usable: usable.len(),
        }
    } else {
        let n = usable.len() as f64;
        let mx = usable.iter().map(|(x, _)| x).sum::<f64>() / n;
        let my = usable.iter().map(|(_, y)| y).sum::<f64>() / n;
        let sxx: f64 = usable.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
        let sxy: f64 = usable.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
        let slope = sxy / sxx;
        let b = my - slope * mx;
        let ss_res: f64 = usable
            .iter()
            .map(|(x, y)| {
                let r = y - (slope * x + b);
                r * r
            })
            .sum();
        ProbeOutcome::Slope {
            slope,
            fit_residual: (ss_res / n).sqrt(),
        }
    };
    ProbeReport {
        kind,
        method: method.to_string(),
        grid: grid.to_vec(),
        defects: defects.to_vec(),
        outcome,
        discarded,
    }
}

/// Geometric grid of step sizes `h = t_final / n` with integer step counts,
/// so every point divides the interval exactly.
pub fn divisor_grid(t_final: f64, n_min: u64, n_max: u64, points: usize) -> Vec<f64> {
    assert!(n_min >= 1 && n_max > n_min && points >= 2);
    let ratio = (n_max as f64 / n_min as f64).powf(1.0 / (points - 1) as f64);
    let mut ns: Vec<u64> = (0..points)
        .map(|k| (n_min as f64 * ratio.powi(k as i32)).round() as u64)
        .collect();
    ns.dedup();
    ns.into_iter().map(|n| t_final / n as f64).collect()
}

#[cfg(test)]
mod tests;
