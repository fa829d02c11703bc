//! Fixtures shared by the criterion benches.

use lsq3::bench::{builtin_suite, Problem};

/// Every (problem, start) pair of the built-in suite, flattened.
pub fn suite_starts() -> Vec<(Problem, f64)> {
    builtin_suite()
        .into_iter()
        .flat_map(|p| {
            let starts: Vec<f64> = p.starts.iter().map(|s| s.x0).collect();
            starts.into_iter().map(move |x0| (p.clone(), x0))
        })
        .collect()
}
