use crate::baselines::{solve_baseline, BaselineConfig, Method};
use crate::outcome::{SolveOutcome, Status};
use crate::solver::{solve, PowerMode, SolverConfig};

use super::rates::final_rate;
use super::suite::{Expected, Problem, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BenchMethod {
    Newton,
    Secant,
    Lsq3Fixed,
    Lsq3Variable,
}

impl BenchMethod {
    pub const ALL: [BenchMethod; 4] = [
        BenchMethod::Newton,
        BenchMethod::Secant,
        BenchMethod::Lsq3Fixed,
        BenchMethod::Lsq3Variable,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BenchMethod::Newton => "newton",
            BenchMethod::Secant => "secant",
            BenchMethod::Lsq3Fixed => "lsq3-fixed",
            BenchMethod::Lsq3Variable => "lsq3-variable",
        }
    }

    fn expected(self, row: &super::suite::ExpectedRow) -> Expected {
        match self {
            BenchMethod::Newton => row.newton,
            BenchMethod::Secant => row.secant,
            BenchMethod::Lsq3Fixed => row.lsq3_fixed,
            BenchMethod::Lsq3Variable => row.lsq3_variable,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    /// Shared lsq3 settings; the mode is overridden per method.
    pub lsq3: SolverConfig,
    pub fixed_n: f64,
    pub baseline: BaselineConfig,
    /// Allowed |iterations - expected| for a row to count as matching.
    pub count_band: u32,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            lsq3: SolverConfig::default(),
            fixed_n: 1.0,
            baseline: BaselineConfig::default(),
            count_band: 3,
        }
    }
}

/// Absolute distance within which a converged root must match a reference.
pub const ROOT_TOLERANCE: f64 = 1e-9;

/// How a run compares with the published entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Deviation {
    /// Converged as expected; iterations minus the published count.
    Count(i64),
    /// Failed with the published failure label.
    LabelMatch,
    /// Converged, but not to any reference root.
    WrongRoot,
    /// Converged where failure was published, or the reverse, or a
    /// different failure label.
    StatusMismatch,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRow {
    pub problem: &'static str,
    pub table: Table,
    pub start: f64,
    pub method: BenchMethod,
    pub expected: Expected,
    pub outcome: SolveOutcome,
    /// Reference root nearest the returned root.
    pub reference_root: Option<f64>,
    pub final_rate: Option<f64>,
    pub deviation: Deviation,
}

impl RunRow {
    pub fn within(&self, band: u32) -> bool {
        match self.deviation {
            Deviation::Count(d) => d.unsigned_abs() <= band as u64,
            Deviation::LabelMatch => true,
            Deviation::WrongRoot | Deviation::StatusMismatch => false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Summary {
    pub runs: usize,
    pub converged: usize,
    pub within_band: usize,
    pub wrong_root: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub rows: Vec<RunRow>,
    pub count_band: u32,
    pub summary: Summary,
}

fn label_matches(expected: Expected, status: Status) -> bool {
    match expected {
        Expected::Iterations(_) => false,
        Expected::Oscillates => status == Status::Oscillating,
        Expected::Diverges => status == Status::Diverged,
        Expected::Fails => matches!(
            status,
            Status::DomainError | Status::SymmetricStall | Status::MaxIterations
        ),
    }
}

pub fn run_one(problem: &Problem, x0: f64, method: BenchMethod, config: &BenchConfig) -> SolveOutcome {
    let f = &problem.expr;
    match method {
        BenchMethod::Newton => solve_baseline(Method::Newton, f, x0, None, &config.baseline),
        BenchMethod::Secant => solve_baseline(Method::Secant, f, x0, None, &config.baseline),
        BenchMethod::Lsq3Fixed => {
            let c = SolverConfig {
                mode: PowerMode::Fixed(config.fixed_n),
                ..config.lsq3.clone()
            };
            solve(f, x0, &c)
        }
        BenchMethod::Lsq3Variable => {
            let c = SolverConfig {
                mode: PowerMode::Variable,
                ..config.lsq3.clone()
            };
            solve(f, x0, &c)
        }
    }
}

/// Runs every (problem, start, method) in suite order, then start order, then
/// the order of `methods` sorted as newton, secant, lsq3-fixed, lsq3-variable.
pub fn run_benchmark(suite: &[Problem], methods: &[BenchMethod], config: &BenchConfig) -> BenchReport {
    let mut methods = methods.to_vec();
    methods.sort();
    methods.dedup();
    let mut rows = Vec::new();
    for problem in suite {
        for start in &problem.starts {
            for &method in &methods {
                let outcome = run_one(problem, start.x0, method, config);
                let expected = method.expected(&start.expected);
                rows.push(assess(problem, start.x0, method, expected, outcome));
            }
        }
    }
    let summary = Summary {
        runs: rows.len(),
        converged: rows.iter().filter(|r| r.outcome.status.is_converged()).count(),
        within_band: rows.iter().filter(|r| r.within(config.count_band)).count(),
        wrong_root: rows.iter().filter(|r| r.deviation == Deviation::WrongRoot).count(),
    };
    BenchReport {
        rows,
        count_band: config.count_band,
        summary,
    }
}

fn assess(problem: &Problem, start: f64, method: BenchMethod, expected: Expected, outcome: SolveOutcome) -> RunRow {
    let converged = outcome.status.is_converged();
    let reference_root = problem.nearest_root(outcome.root);
    let on_root = reference_root.is_some_and(|r| (outcome.root - r).abs() <= ROOT_TOLERANCE);
    let deviation = match (converged, expected) {
        (true, _) if !on_root => Deviation::WrongRoot,
        (true, Expected::Iterations(n)) => Deviation::Count(outcome.iterations as i64 - n as i64),
        (false, e) if label_matches(e, outcome.status) => Deviation::LabelMatch,
        _ => Deviation::StatusMismatch,
    };
    // Rates are measured against the run's own root: the published roots
    // carry 15 digits, which is coarser than the iterates near the end.
    let final_rate = if converged && on_root {
        final_rate(&outcome.iterates(), outcome.root)
    } else {
        None
    };
    RunRow {
        problem: problem.id,
        table: problem.table,
        start,
        method,
        expected,
        outcome,
        reference_root,
        final_rate,
        deviation,
    }
}
