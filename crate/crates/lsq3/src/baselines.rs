//! Newton and secant, with the same stopping rule and failure labels as lsq3.

use crate::classify::{detect_cycle, is_rounding_cycle, stopped, Best};
use crate::expr::Expr;
use crate::outcome::{IterationRecord, SolveOutcome, Status};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Newton,
    Secant,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BaselineConfig {
    pub tolerance: f64,
    pub max_iter: usize,
    pub divergence_bound: f64,
    pub derivative_floor: f64,
    /// Secant's second start is `x0 + secant_offset` unless given.
    pub secant_offset: f64,
    pub cycle_tol: f64,
}

impl Default for BaselineConfig {
    fn default() -> Self {
        BaselineConfig {
            tolerance: 1e-15,
            max_iter: 500,
            divergence_bound: 1e12,
            derivative_floor: 1e-300,
            secant_offset: 0.1,
            cycle_tol: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum BaselineStepError {
    #[error("derivative is zero")]
    ZeroDerivative,
    #[error("secant is horizontal")]
    FlatSecant,
}

pub fn newton_step(x: f64, y: f64, dy: f64, derivative_floor: f64) -> Result<f64, BaselineStepError> {
    if !(dy.abs() >= derivative_floor) {
        return Err(BaselineStepError::ZeroDerivative);
    }
    Ok(x - y / dy)
}

pub fn secant_step(x0: f64, y0: f64, x1: f64, y1: f64) -> Result<f64, BaselineStepError> {
    if y1 == y0 {
        return Err(BaselineStepError::FlatSecant);
    }
    Ok(x1 - y1 * (x1 - x0) / (y1 - y0))
}

struct Run<'a> {
    f: &'a Expr,
    config: &'a BaselineConfig,
    out: SolveOutcome,
    best: Best,
    xs: Vec<f64>,
}

enum Next {
    Continue(f64),
    Done,
}

impl<'a> Run<'a> {
    fn fail(&mut self, status: Status, note: Option<&'static str>) {
        self.out.status = status;
        self.out.root = self.best.x;
        self.out.residual = Some(self.best.y);
        self.out.note = note;
    }

    /// Records the step x -> x_next and classifies it.
    fn advance(&mut self, k: usize, x: f64, y: f64, x_next: f64) -> Next {
        self.out.iterations = k;
        self.out.trace.push(IterationRecord {
            k,
            x,
            y,
            x_next,
            probe: None,
        });
        if !x_next.is_finite() || x_next.abs() > self.config.divergence_bound {
            self.fail(Status::Diverged, Some("iterate escaped the divergence bound"));
            return Next::Done;
        }
        let y_next = match self.f.eval(x_next) {
            Ok(v) => v,
            Err(_) => {
                self.fail(Status::DomainError, Some("iterate left the domain of f"));
                return Next::Done;
            }
        };
        self.best.offer(x_next, y_next);
        if stopped(x, x_next, y_next, self.config.tolerance) {
            self.out.status = Status::Converged;
            self.out.root = x_next;
            self.out.residual = Some(y_next);
            return Next::Done;
        }
        self.xs.push(x_next);
        if let Some(spread) = detect_cycle(&self.xs, self.config.cycle_tol) {
            if y_next.abs() < self.config.tolerance && is_rounding_cycle(spread, x_next) {
                self.out.status = Status::Converged;
                self.out.root = x_next;
                self.out.residual = Some(y_next);
                self.out.note = Some("settled into rounding-level jitter");
            } else {
                self.fail(Status::Oscillating, None);
            }
            return Next::Done;
        }
        Next::Continue(y_next)
    }
}

fn start(f: &Expr, x0: f64) -> Option<f64> {
    if !x0.is_finite() {
        return None;
    }
    f.eval(x0).ok()
}

fn start_failure(x0: f64, x1: Option<f64>) -> SolveOutcome {
    SolveOutcome {
        status: Status::DomainError,
        root: x0,
        residual: None,
        iterations: 0,
        x0,
        x1,
        note: Some("f undefined at the start"),
        trace: Vec::new(),
    }
}

/// Runs Newton or secant. Secant uses `x1` if given, else `x0 + secant_offset`.
pub fn solve_baseline(
    method: Method,
    f: &Expr,
    x0: f64,
    x1: Option<f64>,
    config: &BaselineConfig,
) -> SolveOutcome {
    match method {
        Method::Newton => newton(f, x0, config),
        Method::Secant => secant(f, x0, x1.unwrap_or(x0 + config.secant_offset), config),
    }
}

fn newton(f: &Expr, x0: f64, config: &BaselineConfig) -> SolveOutcome {
    let Some(mut y) = start(f, x0) else {
        return start_failure(x0, None);
    };
    let df = f.differentiate();
    let mut run = Run {
        f,
        config,
        out: SolveOutcome {
            status: Status::MaxIterations,
            root: x0,
            residual: Some(y),
            iterations: 0,
            x0,
            x1: None,
            note: None,
            trace: Vec::new(),
        },
        best: Best::new(x0, y),
        xs: vec![x0],
    };
    let mut x = x0;
    for k in 1..=config.max_iter {
        let Ok(dy) = df.eval(x) else {
            run.fail(Status::DomainError, Some("derivative undefined"));
            return run.out;
        };
        let x_next = match newton_step(x, y, dy, config.derivative_floor) {
            Ok(v) => v,
            // y != 0 here, or the previous step would have stopped. A flat
            // tangent sends the next iterate to infinity.
            Err(_) => {
                run.fail(Status::Diverged, Some("zero derivative"));
                return run.out;
            }
        };
        match run.advance(k, x, y, x_next) {
            Next::Continue(y_next) => {
                x = x_next;
                y = y_next;
            }
            Next::Done => return run.out,
        }
    }
    run.fail(Status::MaxIterations, None);
    run.out
}

fn secant(f: &Expr, x0: f64, x1: f64, config: &BaselineConfig) -> SolveOutcome {
    let (Some(y0), Some(y1)) = (start(f, x0), start(f, x1)) else {
        return start_failure(x0, Some(x1));
    };
    let mut best = Best::new(x0, y0);
    best.offer(x1, y1);
    let mut run = Run {
        f,
        config,
        out: SolveOutcome {
            status: Status::MaxIterations,
            root: best.x,
            residual: Some(best.y),
            iterations: 0,
            x0,
            x1: Some(x1),
            note: None,
            trace: Vec::new(),
        },
        best,
        xs: vec![x0, x1],
    };
    let (mut xa, mut ya, mut xb, mut yb) = (x0, y0, x1, y1);
    for k in 1..=config.max_iter {
        let x_next = match secant_step(xa, ya, xb, yb) {
            Ok(v) => v,
            Err(_) => {
                run.fail(Status::Diverged, Some("horizontal secant"));
                return run.out;
            }
        };
        match run.advance(k, xb, yb, x_next) {
            Next::Continue(y_next) => {
                (xa, ya) = (xb, yb);
                (xb, yb) = (x_next, y_next);
            }
            Next::Done => return run.out,
        }
    }
    run.fail(Status::MaxIterations, None);
    run.out
}
