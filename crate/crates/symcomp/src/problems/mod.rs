//! Benchmark systems with analytic complexification.
//!
//! Each system implements [`SplitSystem`] with *exact* drift and kick
//! sub-flows; drift only ever touches `q`, kick only `p`. The Kepler kick
//! is continued to complex states through the principal branch of
//! `(q·q)^{-3/2}`, with a guard on the branch cut.

use crate::engine::{DomainViolation, SplitSystem, State};
use num_complex::Complex64;
use thiserror::Error;

pub mod hpoly;
pub mod oracle;

pub use hpoly::{ho_step_polynomial, HPolynomialMatrix, TruncPoly};
pub use oracle::{linear_split_oracle, linear_split_oracle_commuting, LinearSplitOracle};

#[derive(Debug, Error)]
pub enum ProblemError {
    #[error("eccentricity must lie in [0, 1), got {0}")]
    Eccentricity(f64),
    #[error("oracle dimension must lie in 2..=6, got {0}")]
    OracleDimension(usize),
}

/// One-dimensional harmonic oscillator, `H = (p² + q²) / 2`.
#[derive(Debug, Clone, Copy)]
pub struct HarmonicOscillator;

/// Constructs the harmonic oscillator benchmark.
pub fn harmonic_oscillator() -> HarmonicOscillator {
    HarmonicOscillator
}

impl HarmonicOscillator {
    /// Exact flow: rotation of the phase plane by angle `t`.
    pub fn exact_endpoint(&self, q0: &[f64], p0: &[f64], t: f64) -> (Vec<f64>, Vec<f64>) {
        let (c, s) = (t.cos(), t.sin());
        (
            vec![c * q0[0] + s * p0[0]],
            vec![-s * q0[0] + c * p0[0]],
        )
    }
}

impl SplitSystem for HarmonicOscillator {
    fn dim(&self) -> usize {
        1
    }

    fn name(&self) -> &str {
        "harmonic-oscillator"
    }

    fn drift(&self, state: &mut State, tau: Complex64) -> Result<(), DomainViolation> {
        let dq = tau * state.p[0];
        state.q[0] += dq;
        Ok(())
    }

    fn kick(&self, state: &mut State, tau: Complex64) -> Result<(), DomainViolation> {
        let dp = tau * state.q[0];
        state.p[0] -= dp;
        Ok(())
    }

    fn energy(&self, q: &[f64], p: &[f64]) -> f64 {
        0.5 * (p[0] * p[0] + q[0] * q[0])
    }
}

/// Planar Kepler problem, `H = p·p/2 - 1/r` with unit gravitational
/// parameter.
#[derive(Debug, Clone, Copy)]
pub struct Kepler {
    eccentricity: f64,
}

/// Half-width of the guard strip around the branch cut of the principal
/// `z^{-3/2}`.
const BRANCH_CUT_GUARD: f64 = 1e-12;

/// Constructs the Kepler benchmark for an orbit of the given eccentricity.
pub fn kepler(eccentricity: f64) -> Result<Kepler, ProblemError> {
    if !(0.0..1.0).contains(&eccentricity) {
        return Err(ProblemError::Eccentricity(eccentricity));
    }
    Ok(Kepler { eccentricity })
}

impl Kepler {
    pub fn eccentricity(&self) -> f64 {
        self.eccentricity
    }

    /// Perihelion start: `q = (1-e, 0)`, `p = (0, sqrt((1+e)/(1-e)))`;
    /// the initial energy is `-1/2` for every eccentricity.
    pub fn initial_state(&self) -> (Vec<f64>, Vec<f64>) {
        let e = self.eccentricity;
        (
            vec![1.0 - e, 0.0],
            vec![0.0, ((1.0 + e) / (1.0 - e)).sqrt()],
        )
    }

    fn q_dot_q(state: &State) -> Complex64 {
        state.q[0] * state.q[0] + state.q[1] * state.q[1]
    }
}

impl SplitSystem for Kepler {
    fn dim(&self) -> usize {
        2
    }

    fn name(&self) -> &str {
        "kepler"
    }

    fn drift(&self, state: &mut State, tau: Complex64) -> Result<(), DomainViolation> {
        let dq0 = tau * state.p[0];
        let dq1 = tau * state.p[1];
        state.q[0] += dq0;
        state.q[1] += dq1;
        Ok(())
    }

    fn kick(&self, state: &mut State, tau: Complex64) -> Result<(), DomainViolation> {
        if !self.domain_ok(state) {
            let z = Self::q_dot_q(state);
            return Err(DomainViolation {
                system: self.name().into(),
                detail: format!("q·q = {z} lies on the branch cut of z^(-3/2)"),
            });
        }
        let w = Self::q_dot_q(state).powf(-1.5);
        let dp0 = tau * state.q[0] * w;
        let dp1 = tau * state.q[1] * w;
        state.p[0] -= dp0;
        state.p[1] -= dp1;
        Ok(())
    }

    fn energy(&self, q: &[f64], p: &[f64]) -> f64 {
        let r2 = q[0] * q[0] + q[1] * q[1];
        0.5 * (p[0] * p[0] + p[1] * p[1]) - 1.0 / r2.sqrt()
    }

    fn domain_ok(&self, state: &State) -> bool {
        let z = Self::q_dot_q(state);
        !(z.re <= 0.0 && z.im.abs() < BRANCH_CUT_GUARD)
    }
}

/// Planar pendulum, `H = p²/2 + (1 - cos q)`; the potential is entire, so
/// no domain guard is needed.
#[derive(Debug, Clone, Copy)]
pub struct Pendulum;

/// Constructs the pendulum benchmark.
pub fn pendulum() -> Pendulum {
    Pendulum
}

impl Pendulum {
    /// Rest position with momentum `alpha`: oscillation for small `alpha`,
    /// full turns for `alpha > 2`.
    pub fn initial_state(&self, alpha: f64) -> (Vec<f64>, Vec<f64>) {
        (vec![0.0], vec![alpha])
    }
}

impl SplitSystem for Pendulum {
    fn dim(&self) -> usize {
        1
    }

    fn name(&self) -> &str {
        "pendulum"
    }

    fn drift(&self, state: &mut State, tau: Complex64) -> Result<(), DomainViolation> {
        let dq = tau * state.p[0];
        state.q[0] += dq;
        Ok(())
    }

    fn kick(&self, state: &mut State, tau: Complex64) -> Result<(), DomainViolation> {
        let dp = tau * state.q[0].sin();
        state.p[0] -= dp;
        Ok(())
    }

    fn energy(&self, q: &[f64], p: &[f64]) -> f64 {
        0.5 * p[0] * p[0] + (1.0 - q[0].cos())
    }
}

#[cfg(test)]
mod tests;
