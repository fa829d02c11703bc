//! Failure taxonomy shared by lsq3 and the baselines, so that Table 2 style
//! labels mean the same thing for every method.

/// Cycles are only looked for once this many steps have been taken.
pub const CYCLE_MIN_INDEX: usize = 8;
/// Longest cycle period checked.
pub const CYCLE_MAX_PERIOD: usize = 4;
/// A revisit only counts as a cycle if the iterates in between actually moved
/// by this much (relative); otherwise it is just slow convergence.
const CYCLE_MIN_SPREAD: f64 = 1e-3;

fn spread(window: &[f64]) -> f64 {
    let lo = window.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = window.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    hi - lo
}

/// Does the newest iterate close a cycle of period <= 4? Returns the spread
/// of the cycle's iterates.
///
/// `xs` holds every iterate so far, the newest last. A cycle is a revisit of
/// an iterate 2..=4 steps back within `tol` relative while the iterates in
/// between spread out, or an exact repeat of a consecutive pair.
pub fn detect_cycle(xs: &[f64], tol: f64) -> Option<f64> {
    let j = match xs.len().checked_sub(1) {
        Some(j) if j >= CYCLE_MIN_INDEX => j,
        _ => return None,
    };
    let x = xs[j];
    let scale = x.abs().max(1.0);
    for p in 2..=CYCLE_MAX_PERIOD {
        if (x - xs[j - p]).abs() <= tol * scale {
            let s = spread(&xs[j - p..=j]);
            if s > CYCLE_MIN_SPREAD * scale {
                return Some(s);
            }
        }
    }
    // exact repetition of a consecutive pair of distinct iterates
    if xs[j] == xs[j - 1] {
        return None;
    }
    (2..=CYCLE_MAX_PERIOD)
        .find(|&p| xs[j] == xs[j - p] && xs[j - 1] == xs[j - p - 1])
        .map(|p| spread(&xs[j - p..=j]))
}

/// A cycle this tight is rounding jitter around a root the iteration has
/// already found, not an oscillation.
pub fn is_rounding_cycle(spread: f64, x: f64) -> bool {
    spread <= ROUNDING_CYCLE_ULPS * f64::EPSILON * x.abs().max(f64::MIN_POSITIVE)
}

/// Largest cycle, in ulps of x, treated as rounding jitter.
pub const ROUNDING_CYCLE_ULPS: f64 = 16.0;

/// Steps this many ulps long are rounding noise. One is enough: anything
/// wider still has room to settle.
pub const ROUNDING_STEP_ULPS: f64 = 1.0;

/// The stopping test `|x_k - x_{k-1}| + |y_k| < tol`.
///
/// Two extensions: an exact zero of f stops (the iteration cannot move from
/// there), and so does a step within rounding of x when |y| < tol. Above
/// |x| = 4 a single ulp already exceeds 1e-15, so without the second rule
/// a run sitting on the root can never stop.
pub fn stopped(x_prev: f64, x: f64, y: f64, tol: f64) -> bool {
    let dx = (x - x_prev).abs();
    y == 0.0
        || dx + y.abs() < tol
        || (y.abs() < tol && dx <= ROUNDING_STEP_ULPS * f64::EPSILON * x.abs())
}

/// Tracks the iterate with the smallest |f| for failure reporting.
#[derive(Debug, Clone, Copy)]
pub struct Best {
    pub x: f64,
    pub y: f64,
}

impl Best {
    pub fn new(x: f64, y: f64) -> Self {
        Best { x, y }
    }

    pub fn offer(&mut self, x: f64, y: f64) {
        if y.abs() < self.y.abs() {
            *self = Best { x, y };
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_cycle_detected() {
        let xs: Vec<f64> = (0..10).map(|i| if i % 2 == 0 { 3.0 } else { 5.0 }).collect();
        assert!(detect_cycle(&xs, 1e-9).is_some());
    }

    #[test]
    fn too_early_to_call() {
        let xs: Vec<f64> = (0..8).map(|i| if i % 2 == 0 { 3.0 } else { 5.0 }).collect();
        assert!(detect_cycle(&xs, 1e-9).is_none());
    }

    #[test]
    fn converging_sequence_is_not_a_cycle() {
        let xs: Vec<f64> = (0..20).map(|i| 1.0 + 0.5f64.powi(i)).collect();
        assert!(detect_cycle(&xs, 1e-6).is_none());
        // even when it has settled to within tolerance
        let xs: Vec<f64> = (0..20).map(|i| 1.0 + 1e-12 * 0.5f64.powi(i)).collect();
        assert!(detect_cycle(&xs, 1e-6).is_none());
    }

    #[test]
    fn three_cycle_detected() {
        let base = [0.1, 2.0, -1.0];
        let xs: Vec<f64> = (0..12).map(|i| base[i % 3]).collect();
        assert!(detect_cycle(&xs, 1e-9).is_some());
    }

    #[test]
    fn rounding_jitter() {
        let x = -2.0f64;
        let up = |k| f64::from_bits(x.to_bits() + k);
        let down = |k| f64::from_bits(x.to_bits() - k);
        let mut xs: Vec<f64> = (0..8).map(|i| x + 0.25f64.powi(i)).collect();
        xs.extend([up(3), down(2), up(3), down(2)]);
        let s = detect_cycle(&xs, 1e-6).unwrap();
        assert!(is_rounding_cycle(s, x));
        assert!(!is_rounding_cycle(1e-3, x));
    }

    #[test]
    fn stopping_rule() {
        assert!(stopped(1.0, 1.0, 1e-16, 1e-15));
        assert!(!stopped(1.0, 1.0 + 1e-15, 1e-16, 1e-15));
        assert!(stopped(5.0, 2.0, 0.0, 1e-15));
        // one ulp at 8 is 1.8e-15
        let x = 8.0f64;
        let x1 = f64::from_bits(x.to_bits() + 1);
        assert!(stopped(x, x1, 1e-40, 1e-15));
        assert!(!stopped(x, x1, 1e-14, 1e-15));
        let x2 = f64::from_bits(x.to_bits() + 2);
        assert!(!stopped(x, x2, 1e-40, 1e-15));
    }
}
