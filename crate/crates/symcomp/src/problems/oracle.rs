//! Random linear-split oracle `x' = (A + B) x` with exactly computable
//! sub-flows `exp(τA)`, `exp(τB)` and exact flow `exp(t(A+B))`.
//!
//! Serves as an independent order-verification problem for compositions
//! whose order exceeds the closed-form conditions: the one-step error
//! against the exact exponential isolates the composition order without
//! any reference integrator. The state vector lives in `q`; `p` is carried
//! along untouched.

use super::ProblemError;
use crate::engine::{DomainViolation, SplitSystem, State};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Seeded random linear split with unit-spectral-norm factors.
#[derive(Debug, Clone)]
pub struct LinearSplitOracle {
    a: DMatrix<f64>,
    b: DMatrix<f64>,
    dim: usize,
}

/// Dense draw: generic non-commuting `A`, `B`.
pub fn linear_split_oracle(seed: u64, dim: usize) -> Result<LinearSplitOracle, ProblemError> {
    LinearSplitOracle::new(seed, dim, false)
}

/// Diagonal draw: `A` and `B` commute, so the base step is exact for all
/// step sizes.
pub fn linear_split_oracle_commuting(
    seed: u64,
    dim: usize,
) -> Result<LinearSplitOracle, ProblemError> {
    LinearSplitOracle::new(seed, dim, true)
}

impl LinearSplitOracle {
    fn new(seed: u64, dim: usize, diagonal: bool) -> Result<LinearSplitOracle, ProblemError> {
        if !(2..=6).contains(&dim) {
            return Err(ProblemError::OracleDimension(dim));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let draw = |rng: &mut ChaCha8Rng| -> DMatrix<f64> {
            let mut m = DMatrix::zeros(dim, dim);
            if diagonal {
                for i in 0..dim {
                    m[(i, i)] = rng.random_range(-1.0..1.0);
                }
            } else {
                for i in 0..dim {
                    for j in 0..dim {
                        m[(i, j)] = rng.random_range(-1.0..1.0);
                    }
                }
            }
            // scale to unit spectral norm
            let norm = m.clone().svd(false, false).singular_values[0];
            m / norm
        };
        let a = draw(&mut rng);
        let b = draw(&mut rng);
        Ok(LinearSplitOracle { a, b, dim })
    }

    fn apply_exp(&self, m: &DMatrix<f64>, tau: Complex64, q: &mut [Complex64]) {
        let scaled = DMatrix::from_fn(self.dim, self.dim, |i, j| tau * m[(i, j)]);
        let e = matrix_exp(&scaled);
        let x: Vec<Complex64> = q.to_vec();
        for i in 0..self.dim {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..self.dim {
                acc += e[(i, j)] * x[j];
            }
            q[i] = acc;
        }
    }

    /// Exact flow matrix `exp(t (A + B))`.
    pub fn exact_flow_matrix(&self, t: f64) -> DMatrix<f64> {
        let sum = DMatrix::from_fn(self.dim, self.dim, |i, j| {
            Complex64::new(t * (self.a[(i, j)] + self.b[(i, j)]), 0.0)
        });
        matrix_exp(&sum).map(|z| z.re)
    }

    /// Exact endpoint of the flow from a real start.
    pub fn exact_endpoint(&self, q0: &[f64], t: f64) -> (Vec<f64>, Vec<f64>) {
        let e = self.exact_flow_matrix(t);
        let mut q = vec![0.0; self.dim];
        for i in 0..self.dim {
            for j in 0..self.dim {
                q[i] += e[(i, j)] * q0[j];
            }
        }
        (q, vec![0.0; self.dim])
    }
}

impl SplitSystem for LinearSplitOracle {
    fn dim(&self) -> usize {
        self.dim
    }

    fn name(&self) -> &str {
        "linear-split-oracle"
    }

    fn drift(&self, state: &mut State, tau: Complex64) -> Result<(), DomainViolation> {
        self.apply_exp(&self.a, tau, &mut state.q);
        Ok(())
    }

    fn kick(&self, state: &mut State, tau: Complex64) -> Result<(), DomainViolation> {
        self.apply_exp(&self.b, tau, &mut state.q);
        Ok(())
    }

    /// Bookkeeping functional only; the oracle conserves no energy.
    fn energy(&self, q: &[f64], _p: &[f64]) -> f64 {
        0.5 * q.iter().map(|x| x * x).sum::<f64>()
    }
}

/// Matrix exponential by scaling-and-squaring with the degree-13 diagonal
/// Padé approximant; relative accuracy near machine precision for the
/// unit-norm-scaled arguments used here.
pub fn matrix_exp(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    const THETA_13: f64 = 5.371920351148152;
    #[rustfmt::skip]
    const B: [f64; 14] = [
        64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
        1187353796428800.0, 129060195264000.0, 10559470521600.0,
        670442572800.0, 33522128640.0, 1323241920.0, 40840800.0,
        960960.0, 16380.0, 182.0, 1.0,
    ];

    let n = m.nrows();
    let one_norm = (0..n)
        .map(|j| (0..n).map(|i| m[(i, j)].norm()).sum::<f64>())
        .fold(0.0f64, f64::max);
    let squarings = if one_norm > THETA_13 {
        (one_norm / THETA_13).log2().ceil() as u32
    } else {
        0
    };
    let a = m.map(|z| z * 0.5f64.powi(squarings as i32));

    let b = |k: usize| Complex64::new(B[k], 0.0);
    let id = DMatrix::<Complex64>::identity(n, n);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a2 * &a4;
    let u = &a
        * (&a6 * (&a6 * b(13) + &a4 * b(11) + &a2 * b(9))
            + &a6 * b(7)
            + &a4 * b(5)
            + &a2 * b(3)
            + &id * b(1));
    let v = &a6 * (&a6 * b(12) + &a4 * b(10) + &a2 * b(8))
        + &a6 * b(6)
        + &a4 * b(4)
        + &a2 * b(2)
        + &id * b(0);

    let num = &v + &u;
    let den = &v - &u;
    let mut exp = den
        .lu()
        .solve(&num)
        .expect("Padé denominator is nonsingular for scaled arguments");
    for _ in 0..squarings {
        exp = &exp * &exp;
    }
    exp
}
