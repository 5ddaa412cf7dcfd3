//! Trajectory-based probes: nonlinear symmetry defects, convergence
//! orders, energy-drift statistics and work-precision tables.

use super::{fit_slope, noise_floor, ProbeKind, ProbeReport};
use crate::csvfmt;
use crate::engine::{
    composition_step, integrate_each, propagate, step_count, EngineError, MethodSpec, SplitSystem,
    State,
};

/// Reference solution for error measurements.
pub enum Reference<'a> {
    /// Exact endpoint `(q, p)` at the final time.
    Exact(Vec<f64>, Vec<f64>),
    /// Integrate the same system with `spec` at `h / factor`.
    SelfRefined { spec: &'a MethodSpec, factor: u64 },
}

fn state_scale(q0: &[f64], p0: &[f64]) -> f64 {
    State::from_real(q0, p0)
        .distance(&State::from_real(&vec![0.0; q0.len()], &vec![0.0; p0.len()]))
        .max(1.0)
}

/// Slope of `log ||ψ_{-h}(ψ_h(x0)) - x0||` vs `log h`: a method of
/// pseudo-symmetry order `q` shows slope `q + 1`. Defects at roundoff
/// level are discarded; an exactly symmetric method reports insufficient
/// signal.
pub fn nonlinear_symmetry_probe(
    sys: &dyn SplitSystem,
    spec: &MethodSpec,
    h_grid: &[f64],
    q0: &[f64],
    p0: &[f64],
) -> Result<ProbeReport, EngineError> {
    let x0 = State::from_real(q0, p0);
    let mut defects = Vec::with_capacity(h_grid.len());
    for &h in h_grid {
        let mut state = x0.clone();
        composition_step(sys, spec, h, &mut state).map_err(|source| EngineError::Domain {
            step: 1,
            state: state.clone(),
            source,
        })?;
        composition_step(sys, spec, -h, &mut state).map_err(|source| EngineError::Domain {
            step: 2,
            state: state.clone(),
            source,
        })?;
        defects.push(state.distance(&x0));
    }
    Ok(fit_slope(
        ProbeKind::NonlinearSymmetry,
        &spec.set.name,
        h_grid,
        &defects,
        noise_floor(state_scale(q0, p0)),
    ))
}

/// Slope of the one-step error against an exact endpoint map
/// `h -> (q, p)`: a composition of order `r` shows slope `r + 1`. The
/// error is measured on the full complex state, so unprojected methods
/// expose the order of the complex composition itself.
pub fn one_step_order(
    sys: &dyn SplitSystem,
    spec: &MethodSpec,
    h_grid: &[f64],
    q0: &[f64],
    p0: &[f64],
    exact: &dyn Fn(f64) -> (Vec<f64>, Vec<f64>),
) -> Result<ProbeReport, EngineError> {
    let x0 = State::from_real(q0, p0);
    let mut defects = Vec::with_capacity(h_grid.len());
    for &h in h_grid {
        let mut state = x0.clone();
        composition_step(sys, spec, h, &mut state).map_err(|source| EngineError::Domain {
            step: 1,
            state: state.clone(),
            source,
        })?;
        let (qe, pe) = exact(h);
        defects.push(state.distance(&State::from_real(&qe, &pe)));
    }
    Ok(fit_slope(
        ProbeKind::OneStepOrder,
        &spec.set.name,
        h_grid,
        &defects,
        noise_floor(state_scale(q0, p0)),
    ))
}

/// Slope of the global endpoint error over `t_final` vs `h`. Every grid
/// point must divide the interval; the reference is either exact or a
/// self-refined run at `h / factor`.
pub fn convergence_order(
    sys: &dyn SplitSystem,
    spec: &MethodSpec,
    h_grid: &[f64],
    t_final: f64,
    q0: &[f64],
    p0: &[f64],
    reference: &Reference,
) -> Result<ProbeReport, EngineError> {
    let x0 = State::from_real(q0, p0);
    let mut defects = Vec::with_capacity(h_grid.len());
    for &h in h_grid {
        let n = step_count(h, t_final)?;
        let end = propagate(sys, spec, h, n, &x0)?;
        let (qr, pr) = match reference {
            Reference::Exact(q, p) => (q.clone(), p.clone()),
            Reference::SelfRefined { spec: ref_spec, factor } => {
                let fine = propagate(sys, ref_spec, h / *factor as f64, n * factor, &x0)?;
                fine.real_parts()
            }
        };
        defects.push(end.distance(&State::from_real(&qr, &pr)));
    }
    Ok(fit_slope(
        ProbeKind::ConvergenceOrder,
        &spec.set.name,
        h_grid,
        &defects,
        noise_floor(state_scale(q0, p0)),
    ))
}

/// Energy-drift statistics of one long run: maxima of the relative energy
/// error over the first and last deciles of the time span, plus a linear
/// trend fitted to the error envelope (maxima over 100 equal buckets).
#[derive(Debug, Clone, Copy)]
pub struct DriftStats {
    pub first_decile_max: f64,
    pub last_decile_max: f64,
    /// Envelope trend per unit time.
    pub trend_slope: f64,
    /// RMS residual of the envelope fit.
    pub trend_residual: f64,
    pub envelope_max: f64,
    pub samples: u64,
}

impl DriftStats {
    /// No secular growth: the trend accumulated over the whole run stays
    /// below the fit scatter (up to the given slack factor).
    pub fn trend_consistent_with_zero(&self, t_final: f64, slack: f64) -> bool {
        (self.trend_slope * t_final).abs() <= slack * self.trend_residual.max(1e-300)
    }

    pub fn to_csv(&self, method: &str, problem: &str, h: f64, t_final: f64) -> String {
        let mut out = format!(
            "# probe=energy-drift method={method} problem={problem} h={} t_final={}\n",
            csvfmt::float(h),
            csvfmt::float(t_final)
        );
        out.push_str(
            "first_decile_max,last_decile_max,trend_slope,trend_residual,envelope_max,samples\n",
        );
        out.push_str(&csvfmt::row(&[
            csvfmt::float(self.first_decile_max),
            csvfmt::float(self.last_decile_max),
            csvfmt::float(self.trend_slope),
            csvfmt::float(self.trend_residual),
            csvfmt::float(self.envelope_max),
            self.samples.to_string(),
        ]));
        out.push('\n');
        out
    }
}

const ENVELOPE_BUCKETS: usize = 100;

/// Streams one long integration and accumulates [`DriftStats`].
pub fn energy_drift(
    sys: &dyn SplitSystem,
    spec: &MethodSpec,
    h: f64,
    t_final: f64,
    q0: &[f64],
    p0: &[f64],
    sample_every: u64,
) -> Result<DriftStats, EngineError> {
    let n = step_count(h, t_final)?;
    let mut first = 0.0f64;
    let mut last = 0.0f64;
    let mut buckets = [0.0f64; ENVELOPE_BUCKETS];
    let mut samples = 0u64;
    let failure = integrate_each(sys, spec, h, n, q0, p0, sample_every, |_, t, _, _, e| {
        samples += 1;
        if t <= 0.1 * t_final {
            first = first.max(e);
        }
        if t >= 0.9 * t_final {
            last = last.max(e);
        }
        let idx = if t_final > 0.0 {
            (((t / t_final) * ENVELOPE_BUCKETS as f64) as usize).min(ENVELOPE_BUCKETS - 1)
        } else {
            0
        };
        buckets[idx] = buckets[idx].max(e);
    })?;
    if let Some(f) = failure {
        return Err(EngineError::Domain {
            step: f.step,
            state: f.state,
            source: f.violation,
        });
    }

    // linear fit of bucket maxima vs bucket midpoint time
    let pts: Vec<(f64, f64)> = buckets
        .iter()
        .enumerate()
        .map(|(i, &m)| ((i as f64 + 0.5) / ENVELOPE_BUCKETS as f64 * t_final, m))
        .collect();
    let nb = pts.len() as f64;
    let mx = pts.iter().map(|(x, _)| x).sum::<f64>() / nb;
    let my = pts.iter().map(|(_, y)| y).sum::<f64>() / nb;
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    let slope = if sxx > 0.0 {
        pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum::<f64>() / sxx
    } else {
        0.0
    };
    let intercept = my - slope * mx;
    let ss: f64 = pts
        .iter()
        .map(|(x, y)| {
            let r = y - (slope * x + intercept);
            r * r
        })
        .sum();
    Ok(DriftStats {
        first_decile_max: first,
        last_decile_max: last,
        trend_slope: slope,
        trend_residual: (ss / nb).sqrt(),
        envelope_max: buckets.iter().copied().fold(0.0, f64::max),
        samples,
    })
}

/// Cost/accuracy metric of a work-precision run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    /// Max relative energy error over all samples.
    MaxRelEnergy,
    /// Mean relative energy error over samples after the start.
    AvgRelEnergy,
    /// Mean state error against a refined reference, over samples after
    /// the start.
    AvgStateError,
}

impl Metric {
    pub fn label(self) -> &'static str {
        match self {
            Metric::MaxRelEnergy => "max_rel_energy",
            Metric::AvgRelEnergy => "avg_rel_energy",
            Metric::AvgStateError => "avg_state_error",
        }
    }

    pub fn parse(s: &str) -> Option<Metric> {
        match s {
            "max_rel_energy" => Some(Metric::MaxRelEnergy),
            "avg_rel_energy" => Some(Metric::AvgRelEnergy),
            "avg_state_error" => Some(Metric::AvgStateError),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct WorkPrecisionRow {
    pub method: String,
    pub h: f64,
    pub steps: u64,
    /// Base-scheme evaluations: stages × steps.
    pub cost: u64,
    pub value: f64,
}

#[derive(Debug, Clone)]
pub struct WorkPrecisionTable {
    pub problem: String,
    pub metric: Metric,
    pub t_final: f64,
    pub rows: Vec<WorkPrecisionRow>,
}

impl WorkPrecisionTable {
    pub fn to_csv(&self) -> String {
        let mut out = format!(
            "# probe=work-precision problem={} metric={} t_final={}\n",
            self.problem,
            self.metric.label(),
            csvfmt::float(self.t_final)
        );
        out.push_str("method,h,steps,cost,value\n");
        for r in &self.rows {
            out.push_str(&csvfmt::row(&[
                r.method.clone(),
                csvfmt::float(r.h),
                r.steps.to_string(),
                r.cost.to_string(),
                csvfmt::float(r.value),
            ]));
            out.push('\n');
        }
        out
    }
}

/// Factor for the self-refined reference used by the state-error metric.
pub const REFERENCE_REFINEMENT: u64 = 50;

fn surface_failure(
    failure: Option<crate::engine::IntegrationFailure>,
) -> Result<(), EngineError> {
    match failure {
        None => Ok(()),
        Some(f) => Err(EngineError::Domain {
            step: f.step,
            state: f.state,
            source: f.violation,
        }),
    }
}

/// One work-precision row per `(method, h)` pair: cost in base-scheme
/// evaluations against the chosen metric. `samples_per_run` fixes the
/// sampling cadence (`sample_every = n / samples_per_run`, at least 1);
/// averaged metrics skip the initial sample. The state-error metric needs
/// a reference method, integrated at `h /` [`REFERENCE_REFINEMENT`].
#[allow(clippy::too_many_arguments)]
pub fn work_precision(
    sys: &dyn SplitSystem,
    specs: &[MethodSpec],
    h_grid: &[f64],
    t_final: f64,
    q0: &[f64],
    p0: &[f64],
    samples_per_run: u64,
    metric: Metric,
    reference: Option<&MethodSpec>,
) -> Result<WorkPrecisionTable, EngineError> {
    let mut rows = Vec::new();
    for spec in specs {
        for &h in h_grid {
            let n = step_count(h, t_final)?;
            let se = (n / samples_per_run.max(1)).max(1);
            let value = match metric {
                Metric::MaxRelEnergy => {
                    let mut max = 0.0f64;
                    let fail =
                        integrate_each(sys, spec, h, n, q0, p0, se, |_, _, _, _, e| {
                            max = max.max(e);
                        })?;
                    surface_failure(fail)?;
                    max
                }
                Metric::AvgRelEnergy => {
                    let mut sum = 0.0f64;
                    let mut count = 0u64;
                    let fail = integrate_each(sys, spec, h, n, q0, p0, se, |step, _, _, _, e| {
                        if step > 0 {
                            sum += e;
                            count += 1;
                        }
                    })?;
                    surface_failure(fail)?;
                    if count > 0 {
                        sum / count as f64
                    } else {
                        0.0
                    }
                }
                Metric::AvgStateError => {
                    let ref_spec = reference.expect("state-error metric needs a reference method");
                    let mut main: Vec<State> = Vec::new();
                    let fail = integrate_each(sys, spec, h, n, q0, p0, se, |_, _, q, p, _| {
                        main.push(State::from_real(q, p));
                    })?;
                    surface_failure(fail)?;
                    let mut sum = 0.0f64;
                    let mut count = 0u64;
                    let mut k = 0usize;
                    let factor = REFERENCE_REFINEMENT;
                    let fail = integrate_each(
                        sys,
                        ref_spec,
                        h / factor as f64,
                        n * factor,
                        q0,
                        p0,
                        se * factor,
                        |_, _, q, p, _| {
                            if k > 0 {
                                sum += main[k].distance(&State::from_real(q, p));
                                count += 1;
                            }
                            k += 1;
                        },
                    )?;
                    surface_failure(fail)?;
                    debug_assert_eq!(k, main.len());
                    if count > 0 {
                        sum / count as f64
                    } else {
                        0.0
                    }
                }
            };
            rows.push(WorkPrecisionRow {
                method: spec.set.name.clone(),
                h,
                steps: n,
                cost: n * spec.stages() as u64,
                value,
            });
        }
    }
    Ok(WorkPrecisionTable {
        problem: sys.name().to_string(),
        metric,
        t_final,
        rows,
    })
}
