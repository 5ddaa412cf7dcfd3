//! Composition integrators with complex time-step coefficients.
//!
//! This crate builds high-order one-step integrators for separable systems
//! by composing a time-symmetric second-order base scheme (drift-kick-drift
//! leapfrog) with complex step fractions, and ships the tooling needed to
//! check what such methods actually deliver:
//!
//! - [`coefficients`]: coefficient sequences, order conditions, a catalog of
//!   bundled methods, the two-term effective-error model, and a text file
//!   format for importing further sets;
//! - [`solver`]: a deterministic multistart Newton search that rediscovers
//!   the symmetric-conjugate solutions of the order conditions;
//! - [`engine`]: complex-stepped composition of exact sub-flows with a
//!   configurable real-axis projection policy;
//! - [`problems`]: harmonic oscillator, Kepler and pendulum benchmarks, a
//!   random linear-split oracle, and truncated-polynomial step matrices;
//! - [`analysis`]: convergence, pseudo-symmetry, pseudo-symplecticity,
//!   linear stability and energy-drift probes, plus work-precision tables;
//! - [`cli`]: the `symcomp` command-line front end.
//!
//! The `examples/` directory of the repository holds one runnable example
//! per capability; start with `cargo run --example catalog`.

pub mod analysis;
pub mod coefficients;
pub mod csvfmt;
pub mod engine;
pub mod problems;
pub mod solver;

pub use coefficients::{
    catalog, catalog_lookup, classify_symmetry, construct_triple_jump, eval_order_conditions,
    CoefficientSet, ErrorModel, OrderConditionResidues, Symmetry, SymmetryPattern,
};
pub use engine::{
    base_step, composition_step, integrate, MethodSpec, Projection, SplitSystem, State,
};
pub use problems::{harmonic_oscillator, kepler, linear_split_oracle, pendulum};
