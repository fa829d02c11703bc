//! Root finding by three-point least squares.
//!
//! Around the current iterate the function is sampled at x-δ, x and x+δ and
//! fitted with `y = a (x - b)^N`; the fitted `b` is the next iterate. With
//! N = 1 this is a Newton step with a central-difference slope and a smoothed
//! function value. Estimating N from the same samples each step handles
//! multiple roots and several shapes where Newton and secant fail.
//!
//! ```
//! use lsq3::{expr::parse, solve, SolverConfig, Status};
//!
//! let f = parse("x^3 + 4*x^2 - 10").unwrap();
//! let out = solve(&f, 0.5, &SolverConfig::variable());
//! assert_eq!(out.status, Status::Converged);
//! assert!((out.root - 1.365230013414097).abs() < 1e-12);
//! ```

// NaN must fail range checks, and table roots keep their published digits.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision, clippy::redundant_guards)]

pub mod baselines;
pub mod bench;
pub mod classify;
pub mod expr;
pub mod outcome;
pub mod solver;

pub use baselines::{solve_baseline, BaselineConfig, Method};
pub use expr::{parse, DomainError, EvalResult, Expr, ParseError};
pub use outcome::{IterationRecord, Probe, SolveOutcome, Status};
pub use solver::{
    adjust_delta, estimate_power, lsq3_step, select_delta, solve, NegativePower, PowerBounds,
    PowerMode, SolverConfig,
};
