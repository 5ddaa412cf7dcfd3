//! Deterministic multistart Newton search for symmetric-conjugate
//! solutions of the order conditions.
//!
//! A sequence with `α_{s+1-j} = conj(α_j)` is parameterized by `s` reals:
//! two per free conjugate pair plus one for the real middle stage of an
//! odd-length composition. The structurally nonvanishing residuals are
//! real (odd-power conditions) or imaginary (the even-power one), so the
//! search runs entirely over real vectors.

use crate::coefficients::{
    classify_symmetry, eval_order_conditions, CoefficientSet, Symmetry, SymmetryPattern,
};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Residual norm below which a root is accepted.
pub const ACCEPT_RESIDUAL: f64 = 1e-13;
/// Componentwise distance below which two roots are considered equal.
pub const DEDUP_DISTANCE: f64 = 1e-8;
/// Central finite-difference step for the Jacobian.
const FD_STEP: f64 = 1e-7;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("no closed-form order conditions beyond order 5 (requested {0})")]
    UnsupportedOrder(u32),
    #[error("stage count must be at least 1")]
    NoStages,
    #[error("Newton iteration did not converge within {0} iterations")]
    NonConvergence(u32),
    #[error("residual {0:.3e} is outside the Newton basin (need < 1e-3)")]
    OutsideBasin(f64),
    #[error("polish requires a symmetric-conjugate coefficient set")]
    NotSymmetricConjugate,
}

/// A search instance: fully determined by its fields, including the seed.
#[derive(Debug, Clone)]
pub struct SearchProblem {
    pub stages: usize,
    /// Order of the complex composition to impose (at most 5).
    pub target_order: u32,
    pub seed: u64,
    /// Half-width of the initial-guess box for pair components; middle
    /// stages start in `[0, guess_box]`.
    pub guess_box: f64,
    pub max_starts: u32,
}

impl SearchProblem {
    pub fn new(stages: usize, target_order: u32) -> SearchProblem {
        SearchProblem {
            stages,
            target_order,
            seed: 0,
            guess_box: 1.0,
            max_starts: 200,
        }
    }

    /// Real degrees of freedom: every conjugate pair contributes two, a
    /// middle stage one.
    pub fn free_parameters(&self) -> usize {
        self.stages
    }
}

/// A converged root, ranked by coefficient one-norm and leading error.
#[derive(Debug, Clone)]
pub struct RankedSolution {
    pub set: CoefficientSet,
    pub one_norm: f64,
    /// `e_{r+1}` of the effective-error model, `r` the projected order.
    pub leading_error: f64,
    /// Max-norm of the order-condition residual vector.
    pub residual: f64,
}

/// Expands `s` reals into the symmetric-conjugate sequence.
pub fn decode_parameters(params: &[f64]) -> Vec<Complex64> {
    let s = params.len();
    let half = s / 2;
    let mut coeffs = Vec::with_capacity(s);
    for j in 0..half {
        coeffs.push(Complex64::new(params[2 * j], params[2 * j + 1]));
    }
    if s % 2 == 1 {
        coeffs.push(Complex64::new(params[s - 1], 0.0));
    }
    for j in (0..half).rev() {
        coeffs.push(coeffs[j].conj());
    }
    coeffs
}

/// Inverse of [`decode_parameters`]; imaginary parts of the middle stage
/// are dropped.
pub fn encode_parameters(coeffs: &[Complex64]) -> Vec<f64> {
    let s = coeffs.len();
    let half = s / 2;
    let mut params = Vec::with_capacity(s);
    for alpha in coeffs.iter().take(half) {
        params.push(alpha.re);
        params.push(alpha.im);
    }
    if s % 2 == 1 {
        params.push(coeffs[half].re);
    }
    params
}

/// Structurally nonvanishing real residuals of a symmetric-conjugate
/// sequence: `Re w1 - 1`, then `Re w31` from order 3, `Im w41` from
/// order 4, and `Re w51`, `Re w52` at order 5.
pub fn residual_vector(params: &[f64], target_order: u32) -> Result<Vec<f64>, SolverError> {
    if target_order > 5 {
        return Err(SolverError::UnsupportedOrder(target_order));
    }
    if params.is_empty() {
        return Err(SolverError::NoStages);
    }
    let coeffs = decode_parameters(params);
    let w = eval_order_conditions(&coeffs).expect("nonempty finite sequence");
    let mut r = vec![w.w1.re - 1.0];
    if target_order >= 3 {
        r.push(w.w31.re);
    }
    if target_order >= 4 {
        r.push(w.w41.im);
    }
    if target_order >= 5 {
        r.push(w.w51.re);
        r.push(w.w52.re);
    }
    Ok(r)
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x.abs()).fold(0.0, f64::max)
}

/// Newton iteration with a central finite-difference Jacobian and a
/// least-squares step; returns the final parameters and residual norm.
fn newton(
    start: &[f64],
    target_order: u32,
    max_iter: u32,
) -> Result<Option<(Vec<f64>, f64)>, SolverError> {
    let mut x = start.to_vec();
    let n = x.len();
    for _ in 0..max_iter {
        let r = residual_vector(&x, target_order)?;
        let rnorm = inf_norm(&r);
        if !rnorm.is_finite() || rnorm > 1e6 {
            return Ok(None);
        }
        if rnorm < 1e-14 {
            return Ok(Some((x, rnorm)));
        }
        let m = r.len();
        let mut jac = DMatrix::zeros(m, n);
        for k in 0..n {
            let mut plus = x.clone();
            plus[k] += FD_STEP;
            let mut minus = x.clone();
            minus[k] -= FD_STEP;
            let rp = residual_vector(&plus, target_order)?;
            let rm = residual_vector(&minus, target_order)?;
            for i in 0..m {
                jac[(i, k)] = (rp[i] - rm[i]) / (2.0 * FD_STEP);
            }
        }
        let rhs = DVector::from_column_slice(&r);
        let svd = jac.svd(true, true);
        let step = match svd.solve(&rhs, 1e-12) {
            Ok(s) => s,
            Err(_) => return Ok(None),
        };
        for k in 0..n {
            x[k] -= step[k];
        }
        if step.amax() < 1e-15 {
            let r = residual_vector(&x, target_order)?;
            let rnorm = inf_norm(&r);
            return Ok((rnorm < ACCEPT_RESIDUAL).then_some((x, rnorm)));
        }
    }
    let r = residual_vector(&x, target_order)?;
    let rnorm = inf_norm(&r);
    Ok((rnorm < ACCEPT_RESIDUAL).then_some((x, rnorm)))
}

/// Flips a sequence to its canonical conjugate orientation: the one
/// matching a bundled catalog entry when there is one, otherwise the
/// first stage with nonzero imaginary part gets a positive sign.
fn orient(coeffs: Vec<Complex64>) -> Vec<Complex64> {
    let close = |a: &[Complex64], b: &[Complex64]| {
        a.iter()
            .zip(b)
            .all(|(x, y)| (x.re - y.re).abs() <= 1e-6 && (x.im - y.im).abs() <= 1e-6)
    };
    let conj: Vec<Complex64> = coeffs.iter().map(Complex64::conj).collect();
    for entry in crate::coefficients::catalog() {
        if entry.stages() != coeffs.len() || entry.symmetry != Symmetry::SymmetricConjugate {
            continue;
        }
        if close(&coeffs, &entry.coeffs) {
            return coeffs;
        }
        if close(&conj, &entry.coeffs) {
            return conj;
        }
    }
    match coeffs.iter().find(|a| a.im.abs() > 1e-12) {
        Some(a) if a.im < 0.0 => conj,
        _ => coeffs,
    }
}

fn metadata_for(target_order: u32, stages: usize) -> (u32, u32, Option<u32>) {
    let composition_order = target_order.max(2);
    let projected_order = if composition_order % 2 == 1 {
        composition_order + 1
    } else {
        composition_order
    };
    let pseudo = match composition_order {
        r if r % 2 == 1 && r >= 3 => Some(2 * (r + 1) - 1),
        r if r % 2 == 0 && r >= 4 => Some(2 * r + 3),
        _ => None,
    };
    let _ = stages;
    (composition_order, projected_order, pseudo)
}

fn leading_error(coeffs: &[Complex64], projected_order: u32) -> f64 {
    let s = coeffs.len() as f64;
    let j = projected_order as i32 + 1;
    let sum: Complex64 = coeffs.iter().map(|a| a.powi(j)).sum();
    s.powi(j - 1) * sum.norm()
}

/// Runs Newton from `max_starts` seeded random guesses, keeps converged
/// roots with all-positive real parts, deduplicates conjugate pairs and
/// near-identical roots, and ranks by one-norm then leading error.
/// Identical problems (including the seed) give identical output.
pub fn multistart_search(problem: &SearchProblem) -> Result<Vec<RankedSolution>, SolverError> {
    if problem.stages == 0 {
        return Err(SolverError::NoStages);
    }
    if problem.target_order > 5 {
        return Err(SolverError::UnsupportedOrder(problem.target_order));
    }
    let s = problem.stages;
    let mut rng = ChaCha8Rng::seed_from_u64(problem.seed);
    let mut roots: Vec<(Vec<f64>, Vec<Complex64>, f64)> = Vec::new();

    for _ in 0..problem.max_starts {
        let mut start = Vec::with_capacity(s);
        let b = problem.guess_box;
        for _ in 0..(s / 2) {
            start.push(rng.random_range(-b..b));
            start.push(rng.random_range(-b..b));
        }
        if s % 2 == 1 {
            start.push(rng.random_range(0.0..b));
        }

        let Some((params, residual)) = newton(&start, problem.target_order, 100)? else {
            continue;
        };
        let coeffs = orient(decode_parameters(&params));
        if !coeffs.iter().all(|a| a.re > 0.0) {
            continue;
        }
        let canonical = encode_parameters(&coeffs);
        let duplicate = roots.iter().any(|(known, _, _)| {
            known
                .iter()
                .zip(&canonical)
                .all(|(a, b)| (a - b).abs() < DEDUP_DISTANCE)
        });
        if !duplicate {
            roots.push((canonical, coeffs, residual));
        }
    }

    let (composition_order, projected_order, pseudo) =
        metadata_for(problem.target_order, problem.stages);
    let mut solutions: Vec<RankedSolution> = roots
        .into_iter()
        .map(|(_, coeffs, residual)| {
            let one_norm = coeffs.iter().map(|a| a.norm()).sum();
            let err = leading_error(&coeffs, projected_order);
            let set = CoefficientSet {
                name: String::new(),
                composition_order,
                projected_order,
                pseudo_symmetry_order: pseudo,
                symmetry: Symmetry::SymmetricConjugate,
                coeffs,
                provenance: format!(
                    "multistart search: stages={} order={} seed={} starts={}",
                    problem.stages, problem.target_order, problem.seed, problem.max_starts
                ),
            };
            RankedSolution {
                set,
                one_norm,
                leading_error: err,
                residual,
            }
        })
        .collect();
    solutions.sort_by(|a, b| {
        a.one_norm
            .total_cmp(&b.one_norm)
            .then(a.leading_error.total_cmp(&b.leading_error))
    });
    for (rank, sol) in solutions.iter_mut().enumerate() {
        sol.set.name = format!(
            "sc{}-o{}-r{:02}",
            problem.stages, problem.target_order, rank
        );
    }
    Ok(solutions)
}

/// Re-converges a symmetric-conjugate set to its nearby root: Newton from
/// the encoded parameters, the symmetry constraint re-imposed exactly at
/// every iterate. The input must already sit inside the Newton basin
/// (residual below 1e-3).
pub fn polish(set: &CoefficientSet) -> Result<CoefficientSet, SolverError> {
    let pattern = classify_symmetry(&set.coeffs, 1e-6);
    if !matches!(
        pattern,
        SymmetryPattern::SymmetricConjugate | SymmetryPattern::Both
    ) {
        return Err(SolverError::NotSymmetricConjugate);
    }
    let target_order = set.composition_order.min(5);
    let params = encode_parameters(&set.coeffs);
    let initial = inf_norm(&residual_vector(&params, target_order)?);
    if initial >= 1e-3 {
        return Err(SolverError::OutsideBasin(initial));
    }
    match newton(&params, target_order, 50)? {
        Some((polished, _)) => Ok(CoefficientSet {
            coeffs: decode_parameters(&polished),
            ..set.clone()
        }),
        None => Err(SolverError::NonConvergence(50)),
    }
}
