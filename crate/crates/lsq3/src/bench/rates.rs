//! Empirical convergence order `C_k = ln|x_{k+1} - r| / ln|x_k - r|`.

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum RateError {
    #[error("need at least 3 iterates, got {0}")]
    InsufficientTrace(usize),
}

/// Errors at or below this are indistinguishable from zero: a few ulps of r.
pub fn error_floor(r: f64) -> f64 {
    8.0 * f64::EPSILON * r.abs().max(1.0)
}

/// Rates for each adjacent pair of iterates.
///
/// Pairs with an error of 1 or more are pre-asymptotic and skipped (the
/// logarithm changes sign there). The sequence stops at the first error that
/// has reached the rounding floor of `r`.
pub fn convergence_rates(iterates: &[f64], r: f64) -> Result<Vec<f64>, RateError> {
    if iterates.len() < 3 {
        return Err(RateError::InsufficientTrace(iterates.len()));
    }
    let floor = error_floor(r);
    let mut rates = Vec::new();
    for w in iterates.windows(2) {
        let (e0, e1) = ((w[0] - r).abs(), (w[1] - r).abs());
        if e0 <= floor || e1 <= floor {
            break;
        }
        if e0 >= 1.0 || e1 >= 1.0 {
            continue;
        }
        rates.push(e1.ln() / e0.ln());
    }
    Ok(rates)
}

/// The last rate, if any pair was usable.
pub fn final_rate(iterates: &[f64], r: f64) -> Option<f64> {
    convergence_rates(iterates, r).ok()?.last().copied()
}
