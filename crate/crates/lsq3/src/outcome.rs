//! Result types shared by every solver.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Converged,
    Oscillating,
    Diverged,
    DomainError,
    SymmetricStall,
    MaxIterations,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Converged => "Converged",
            Status::Oscillating => "Oscillating",
            Status::Diverged => "Diverged",
            Status::DomainError => "DomainError",
            Status::SymmetricStall => "SymmetricStall",
            Status::MaxIterations => "MaxIterations",
        }
    }

    pub fn is_converged(self) -> bool {
        self == Status::Converged
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The three-point probe the least-squares step was computed from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Probe {
    pub delta: f64,
    pub n_used: f64,
    pub y_minus: f64,
    pub y_plus: f64,
}

/// One step: the iterate `x` with `y = f(x)`, and the next iterate it produced.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationRecord {
    pub k: usize,
    pub x: f64,
    pub y: f64,
    pub x_next: f64,
    /// Present for lsq3 steps only.
    pub probe: Option<Probe>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOutcome {
    pub status: Status,
    /// Converged: the final iterate. Otherwise the traced iterate with the
    /// smallest |f|.
    pub root: f64,
    /// f(root), when it could be evaluated.
    pub residual: Option<f64>,
    pub iterations: usize,
    pub x0: f64,
    /// Second starting point, secant only.
    pub x1: Option<f64>,
    pub note: Option<&'static str>,
    pub trace: Vec<IterationRecord>,
}

impl SolveOutcome {
    /// Every iterate in order: the start(s), each traced x, then the last
    /// computed next iterate if it is finite.
    pub fn iterates(&self) -> Vec<f64> {
        let mut xs = Vec::with_capacity(self.trace.len() + 2);
        if self.x1.is_some() {
            xs.push(self.x0);
        }
        xs.extend(self.trace.iter().map(|r| r.x));
        match self.trace.last() {
            Some(last) if last.x_next.is_finite() => xs.push(last.x_next),
            None => xs.push(self.x1.unwrap_or(self.x0)),
            _ => {}
        }
        xs
    }
}
