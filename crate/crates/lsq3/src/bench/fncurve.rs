//! The error-term curve `f(n) = E^(n/4) + E^(1/n) - E`, whose minimum over n
//! sits at n = 2 for small E.

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum CurveError {
    #[error("E must lie in (0, 1), got {0}")]
    E(f64),
    #[error("n must be positive, got {0}")]
    N(f64),
    #[error("grid step must be positive and the range non-empty")]
    Grid,
}

pub fn f_n(e: f64, n: f64) -> f64 {
    e.powf(n / 4.0) + e.powf(1.0 / n) - e
}

pub fn f_n_curve(e: f64, n_grid: &[f64]) -> Result<Vec<(f64, f64)>, CurveError> {
    if !(e > 0.0 && e < 1.0) {
        return Err(CurveError::E(e));
    }
    if let Some(&n) = n_grid.iter().find(|&&n| !(n > 0.0)) {
        return Err(CurveError::N(n));
    }
    Ok(n_grid.iter().map(|&n| (n, f_n(e, n))).collect())
}

/// `from, from + step, ...` up to `to` inclusive. Points are computed as
/// `from + i * step` so rounding does not accumulate.
pub fn grid(from: f64, to: f64, step: f64) -> Result<Vec<f64>, CurveError> {
    if !(step > 0.0) || !(to >= from) || !from.is_finite() || !to.is_finite() {
        return Err(CurveError::Grid);
    }
    let count = ((to - from) / step + 1e-9).floor() as usize;
    Ok((0..=count).map(|i| from + i as f64 * step).collect())
}

/// Grid point with the smallest f(n).
pub fn argmin(curve: &[(f64, f64)]) -> Option<(f64, f64)> {
    curve.iter().copied().min_by(|a, b| a.1.total_cmp(&b.1))
}
