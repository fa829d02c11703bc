//! The three-point least-squares iteration.
//!
//! Each step samples f at x-δ, x, x+δ, fits y = a(x-b)^N through the three
//! points by least squares and jumps to b:
//!
//! ```text
//! x' = x - N * [((N+1) y- + (4N-2) y0 + (N+1) y+) / (6N)] / [(y+ - y-) / (2δ)]
//! ```
//!
//! N is either fixed or re-estimated every step from central differences,
//! and δ shrinks with the square of the last step.

use crate::classify::{detect_cycle, is_rounding_cycle, stopped, Best};
use crate::expr::Expr;
use crate::outcome::{IterationRecord, Probe, SolveOutcome, Status};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PowerMode {
    Fixed(f64),
    Variable,
}

/// What to do with an estimated N below the clamp interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NegativePower {
    /// Clamp to the lower bound like any other out-of-range value.
    Clamp,
    /// Map to the upper bound. Large negative estimates come from
    /// exponential-like shapes where the best power fit is steep, and a
    /// negative N would step away from the root.
    Reflect,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerBounds {
    pub lo: f64,
    pub hi: f64,
    /// Estimates smaller than this in magnitude fall back to N = 1.
    pub min_abs: f64,
    pub below: NegativePower,
}

impl Default for PowerBounds {
    fn default() -> Self {
        PowerBounds {
            lo: -3.0,
            hi: 3.0,
            min_abs: 1e-3,
            below: NegativePower::Reflect,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub mode: PowerMode,
    pub delta0: f64,
    /// Descending multipliers tried in order when picking the next δ.
    pub beta_series: Vec<f64>,
    pub power: PowerBounds,
    pub tolerance: f64,
    pub max_iter: usize,
    /// δ never drops below `delta_floor * |x|`. None picks a default per
    /// mode: variable N needs the second difference resolved as well as the
    /// slope, so it keeps a wider probe.
    pub delta_floor: Option<f64>,
    pub divergence_bound: f64,
    /// Relative tolerance for recognising a revisited iterate.
    pub cycle_tol: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            mode: PowerMode::Fixed(1.0),
            delta0: 0.1,
            beta_series: (0..16).map(|i| 10f64.powi(-i)).collect(),
            power: PowerBounds::default(),
            tolerance: 1e-15,
            max_iter: 500,
            delta_floor: None,
            divergence_bound: 1e12,
            cycle_tol: 1e-6,
        }
    }
}

const FIXED_FLOOR: f64 = 1e-15;
const VARIABLE_FLOOR: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("delta0 must lie in (0, 1), got {0}")]
    Delta0(f64),
    #[error("tolerance must be positive, got {0}")]
    Tolerance(f64),
    #[error("max_iter must be at least 1")]
    MaxIter,
    #[error("N clamp [{0}, {1}] must contain 1")]
    Clamp(f64, f64),
    #[error("beta series must be non-empty, positive and descending")]
    Betas,
    #[error("delta floor must be positive, got {0}")]
    Floor(f64),
    #[error("fixed N must be finite and non-zero, got {0}")]
    FixedPower(f64),
}

impl SolverConfig {
    pub fn variable() -> Self {
        SolverConfig {
            mode: PowerMode::Variable,
            ..Self::default()
        }
    }

    pub fn fixed(n: f64) -> Self {
        SolverConfig {
            mode: PowerMode::Fixed(n),
            ..Self::default()
        }
    }

    pub fn floor(&self) -> f64 {
        self.delta_floor.unwrap_or(match self.mode {
            PowerMode::Fixed(_) => FIXED_FLOOR,
            PowerMode::Variable => VARIABLE_FLOOR,
        })
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.delta0 > 0.0 && self.delta0 < 1.0) {
            return Err(ConfigError::Delta0(self.delta0));
        }
        if !(self.tolerance > 0.0) {
            return Err(ConfigError::Tolerance(self.tolerance));
        }
        if self.max_iter == 0 {
            return Err(ConfigError::MaxIter);
        }
        let PowerBounds { lo, hi, .. } = self.power;
        if !(lo <= 1.0 && 1.0 <= hi) {
            return Err(ConfigError::Clamp(lo, hi));
        }
        let b = &self.beta_series;
        if b.is_empty() || b.iter().any(|&v| !(v > 0.0)) || b.windows(2).any(|w| w[1] >= w[0]) {
            return Err(ConfigError::Betas);
        }
        if let Some(fl) = self.delta_floor.filter(|fl| !(*fl > 0.0)) {
            return Err(ConfigError::Floor(fl));
        }
        if let PowerMode::Fixed(n) = self.mode {
            if !n.is_finite() || n == 0.0 {
                return Err(ConfigError::FixedPower(n));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum StepError {
    #[error("y(x+δ) equals y(x-δ); δ must be readjusted")]
    FlatProbe,
    #[error("N = 0 is singular")]
    ZeroPower,
}

/// One least-squares step.
pub fn lsq3_step(
    x: f64,
    y_minus: f64,
    y0: f64,
    y_plus: f64,
    delta: f64,
    n: f64,
) -> Result<f64, StepError> {
    if y_plus == y_minus {
        return Err(StepError::FlatProbe);
    }
    if n == 0.0 {
        return Err(StepError::ZeroPower);
    }
    let mean = ((n + 1.0) * y_minus + (4.0 * n - 2.0) * y0 + (n + 1.0) * y_plus) / (6.0 * n);
    let slope = (y_plus - y_minus) / (2.0 * delta);
    Ok(x - n * mean / slope)
}

/// The unclamped power estimate `s^2 / (s^2 - y0 s2)` from the central first
/// and second differences. `None` when the denominator vanishes or the value
/// is not finite.
pub fn raw_power(y_minus: f64, y0: f64, y_plus: f64, delta: f64) -> Option<f64> {
    let s = (y_plus - y_minus) / (2.0 * delta);
    let s2 = (y_minus - 2.0 * y0 + y_plus) / (delta * delta);
    let den = s * s - y0 * s2;
    if !(den.abs() >= 1e-300) {
        return None;
    }
    Some(s * s / den).filter(|n| n.is_finite())
}

/// Power estimate, bounded. Falls back to 1 whenever the raw estimate is
/// unusable or too close to the singular N = 0.
pub fn estimate_power(y_minus: f64, y0: f64, y_plus: f64, delta: f64, bounds: &PowerBounds) -> f64 {
    let Some(mut n) = raw_power(y_minus, y0, y_plus, delta) else {
        return 1.0;
    };
    if n < bounds.lo && bounds.below == NegativePower::Reflect {
        n = bounds.hi;
    }
    n = n.clamp(bounds.lo, bounds.hi);
    if n.abs() < bounds.min_abs {
        return 1.0;
    }
    n
}

/// Next δ: `β (x_k - x_prev)^2` for the first β in the series giving a value
/// below 1 and no larger than the previous δ. The result is never below
/// `floor`; when no β qualifies the smallest one is used.
pub fn select_delta(x_k: f64, x_prev: f64, delta_prev: f64, beta_series: &[f64], floor: f64) -> f64 {
    let step2 = (x_k - x_prev) * (x_k - x_prev);
    let chosen = beta_series
        .iter()
        .map(|b| b * step2)
        .find(|&d| d < 1.0 && d <= delta_prev)
        .unwrap_or_else(|| beta_series.last().copied().unwrap_or(1.0) * step2);
    chosen.max(floor)
}

/// The spacing actually realised by `x + δ` in floating point. Sampling at a
/// δ that is not representable relative to x skews the slope estimate.
pub fn snap_delta(x: f64, delta: f64) -> f64 {
    let d = (x + delta) - x;
    if d > 0.0 {
        d
    } else {
        // δ under half an ulp of x: use one ulp
        f64::from_bits(x.abs().to_bits() + 1) - x.abs()
    }
}

/// Probe spacing with the two side evaluations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub delta: f64,
    pub y_minus: f64,
    pub y_plus: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum ProbeError {
    #[error("f is undefined at x±δ even after shrinking δ")]
    Domain,
    #[error("y(x+δ) = y(x-δ) persists after widening δ")]
    SymmetricStall,
}

/// Halvings tried when x±δ leaves the domain of f.
pub const DOMAIN_RETRIES: usize = 4;
/// Widenings (×1.5) tried when y(x+δ) = y(x-δ).
pub const STALL_RETRIES: usize = 8;

fn probe(f: &Expr, x: f64, delta: f64) -> Option<(f64, f64)> {
    Some((f.eval(x - delta).ok()?, f.eval(x + delta).ok()?))
}

/// Evaluates f at x±δ, shrinking δ on domain errors and widening it while the
/// two values coincide.
pub fn adjust_delta(f: &Expr, x: f64, delta: f64) -> Result<Bracket, ProbeError> {
    let mut delta = snap_delta(x, delta);
    let mut ys = probe(f, x, delta);
    for _ in 0..DOMAIN_RETRIES {
        if ys.is_some() {
            break;
        }
        delta = snap_delta(x, delta / 2.0);
        ys = probe(f, x, delta);
    }
    let (mut y_minus, mut y_plus) = ys.ok_or(ProbeError::Domain)?;
    let mut tries = 0;
    while y_minus == y_plus {
        if tries == STALL_RETRIES {
            return Err(ProbeError::SymmetricStall);
        }
        delta = snap_delta(x, delta * 1.5);
        (y_minus, y_plus) = probe(f, x, delta).ok_or(ProbeError::Domain)?;
        tries += 1;
    }
    Ok(Bracket {
        delta,
        y_minus,
        y_plus,
    })
}

// Below this the second difference is rounding noise and says nothing
// about the power. The x term covers the rounding of x ± δ itself.
fn second_difference_is_noise(x: f64, y_minus: f64, y0: f64, y_plus: f64, delta: f64) -> bool {
    let sd = y_minus - 2.0 * y0 + y_plus;
    let slope = (y_plus - y_minus) / (2.0 * delta);
    let noise = y_minus.abs() + 2.0 * y0.abs() + y_plus.abs() + 4.0 * x.abs() * slope.abs();
    sd.abs() <= 64.0 * f64::EPSILON * noise
}

/// Widens a probe whose second difference is lost in rounding, by decades,
/// without reaching past the last step. None if curvature stays unresolved.
fn widen_for_curvature(f: &Expr, x: f64, y: f64, delta: f64, reach: f64) -> Option<Bracket> {
    let mut d = delta;
    for _ in 0..CURVATURE_RETRIES {
        d *= 10.0;
        if d > reach || d >= 1.0 {
            return None;
        }
        let b = adjust_delta(f, x, d).ok()?;
        if !second_difference_is_noise(x, b.y_minus, y, b.y_plus, b.delta) {
            return Some(b);
        }
        d = b.delta;
    }
    None
}

const CURVATURE_RETRIES: usize = 8;

/// A cycle no wider than this many probe spacings, with |y| below the
/// tolerance, is the iteration resolving the root as finely as its probe can.
const PROBE_CYCLE_WIDTHS: f64 = 4.0;

/// Runs the iteration from `x0`. Never panics on bad functions: every
/// failure becomes a status.
pub fn solve(f: &Expr, x0: f64, config: &SolverConfig) -> SolveOutcome {
    let mut out = SolveOutcome {
        status: Status::MaxIterations,
        root: x0,
        residual: None,
        iterations: 0,
        x0,
        x1: None,
        note: None,
        trace: Vec::new(),
    };
    let Ok(mut y) = f.eval(x0).map_err(|_| ()).and_then(|y| if x0.is_finite() { Ok(y) } else { Err(()) }) else {
        out.status = Status::DomainError;
        out.note = Some("f undefined at the start");
        return out;
    };
    out.residual = Some(y);
    let mut best = Best::new(x0, y);
    let mut x = x0;
    let mut x_prev: Option<f64> = None;
    let mut delta = config.delta0;
    let mut n_prev = 1.0;
    let mut xs = vec![x0];

    let finish = |out: &mut SolveOutcome, status: Status, best: Best, note: Option<&'static str>| {
        out.status = status;
        out.root = best.x;
        out.residual = Some(best.y);
        out.note = note;
    };

    for k in 1..=config.max_iter {
        out.iterations = k;
        let mut floored = false;
        if let Some(xp) = x_prev {
            let floor = (config.floor() * x.abs()).max(f64::MIN_POSITIVE);
            delta = select_delta(x, xp, delta, &config.beta_series, floor);
            floored = delta <= floor;
        }
        let mut bracket = match adjust_delta(f, x, delta) {
            Ok(b) => b,
            Err(e) => {
                out.iterations = k - 1;
                let (status, note) = match e {
                    ProbeError::Domain => (Status::DomainError, "probe left the domain of f"),
                    ProbeError::SymmetricStall => (Status::SymmetricStall, "y(x+δ) = y(x-δ) persists"),
                };
                finish(&mut out, status, best, Some(note));
                return out;
            }
        };
        let n = match config.mode {
            PowerMode::Fixed(n) => n,
            PowerMode::Variable => {
                // At the floor, or when even a wider probe cannot see any
                // curvature, the last estimate is the best one available.
                if k > 1 && floored {
                    n_prev
                } else if second_difference_is_noise(x, bracket.y_minus, y, bracket.y_plus, bracket.delta) {
                    let reach = x_prev.map_or(f64::INFINITY, |xp| (x - xp).abs());
                    match widen_for_curvature(f, x, y, bracket.delta, reach) {
                        Some(b) => {
                            bracket = b;
                            estimate_power(b.y_minus, y, b.y_plus, b.delta, &config.power)
                        }
                        None => n_prev,
                    }
                } else {
                    estimate_power(bracket.y_minus, y, bracket.y_plus, bracket.delta, &config.power)
                }
            }
        };
        delta = bracket.delta;
        let Bracket { y_minus, y_plus, .. } = bracket;
        n_prev = n;

        // flat probe and N = 0 are both excluded above
        let x_next = lsq3_step(x, y_minus, y, y_plus, delta, n).unwrap_or(f64::NAN);
        out.trace.push(IterationRecord {
            k,
            x,
            y,
            x_next,
            probe: Some(Probe {
                delta,
                n_used: n,
                y_minus,
                y_plus,
            }),
        });

        if !x_next.is_finite() || x_next.abs() > config.divergence_bound {
            finish(&mut out, Status::Diverged, best, Some("iterate escaped the divergence bound"));
            return out;
        }
        let y_next = match f.eval(x_next) {
            Ok(v) => v,
            Err(_) => {
                finish(&mut out, Status::DomainError, best, Some("iterate left the domain of f"));
                return out;
            }
        };
        best.offer(x_next, y_next);
        if stopped(x, x_next, y_next, config.tolerance) {
            out.status = Status::Converged;
            out.root = x_next;
            out.residual = Some(y_next);
            return out;
        }
        x_prev = Some(x);
        x = x_next;
        y = y_next;
        xs.push(x);
        if let Some(spread) = detect_cycle(&xs, config.cycle_tol) {
            if y.abs() < config.tolerance && (is_rounding_cycle(spread, x) || spread <= PROBE_CYCLE_WIDTHS * delta) {
                out.status = Status::Converged;
                out.root = x;
                out.residual = Some(y);
                out.note = Some(if is_rounding_cycle(spread, x) {
                    "settled into rounding-level jitter"
                } else {
                    "settled within the probe spacing"
                });
            } else {
                finish(&mut out, Status::Oscillating, best, None);
            }
            return out;
        }
    }
    finish(&mut out, Status::MaxIterations, best, None);
    out
}
