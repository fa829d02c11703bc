//! Problem suite, benchmark runner, convergence diagnostics and reports.

mod fncurve;
mod rates;
mod report;
mod runner;
mod suite;

pub use fncurve::{argmin, f_n, f_n_curve, grid, CurveError};
pub use rates::{convergence_rates, error_floor, final_rate, RateError};
pub use report::{emit_report, format_sig, Format};
pub use runner::{run_benchmark, run_one, BenchConfig, BenchMethod, BenchReport, Deviation, RunRow, Summary};
pub use suite::{builtin_suite, Expected, ExpectedRow, Problem, Start, Table};
