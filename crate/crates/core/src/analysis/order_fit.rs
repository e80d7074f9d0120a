//! Least-squares slopes on log-log data.

use crate::error::{LatticeError, Result};

/// Residuals at or below this count as exact.
pub const EXACT_TOL: f64 = 1e-12;
/// Minimum `r²` for a fit to be conclusive.
pub const CONCLUSIVE_R2: f64 = 0.99;

#[derive(Clone, Debug, PartialEq)]
pub struct OrderFit {
    pub eps_values: Vec<f64>,
    pub residuals: Vec<f64>,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

impl OrderFit {
    pub fn conclusive(&self) -> bool {
        self.r_squared >= CONCLUSIVE_R2
    }

    /// Nearest integer order, if the slope is within `tol` of it.
    pub fn order(&self, tol: f64) -> Option<i64> {
        let k = self.slope.round();
        ((self.slope - k).abs() <= tol).then_some(k as i64)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum OrderOutcome {
    Exact { eps_values: Vec<f64>, residuals: Vec<f64> },
    Fit(OrderFit),
}

/// Fits `log y = slope·log x + intercept`.
pub fn fit_loglog(xs: &[f64], ys: &[f64]) -> Result<OrderFit> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(LatticeError::InvalidArgument("log-log fit needs at least two paired points".into()));
    }
    if xs.iter().chain(ys).any(|&v| !(v > 0.0) || !v.is_finite()) {
        return Err(LatticeError::InvalidArgument("log-log fit needs positive finite data".into()));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ly.iter().map(|y| (y - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(LatticeError::InvalidArgument("log-log fit needs distinct x values".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok(OrderFit { eps_values: xs.to_vec(), residuals: ys.to_vec(), slope, intercept, r_squared })
}

/// Evaluates `residual_fn` on `eps_values` and fits the order, or reports
/// the relation as exact when every residual is at most [`EXACT_TOL`].
pub fn order_fit(residual_fn: impl Fn(f64) -> Result<f64>, eps_values: &[f64]) -> Result<OrderOutcome> {
    if eps_values.len() < 4 {
        return Err(LatticeError::InvalidArgument("order fit needs at least 4 eps values".into()));
    }
    let (lo, hi) = eps_values.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &e| (a.min(e), b.max(e)));
    if !(lo > 0.0) || hi / lo < 1e3 * (1.0 - 1e-9) {
        return Err(LatticeError::InvalidArgument("eps values must be positive and span 3 decades".into()));
    }
    let residuals = eps_values.iter().map(|&e| residual_fn(e)).collect::<Result<Vec<_>>>()?;
    if residuals.iter().all(|&r| r <= EXACT_TOL) {
        return Ok(OrderOutcome::Exact { eps_values: eps_values.to_vec(), residuals });
    }
    if residuals.iter().any(|&r| r <= 0.0) {
        return Err(LatticeError::InvalidArgument("some residuals vanish while others do not".into()));
    }
    Ok(OrderOutcome::Fit(fit_loglog(eps_values, &residuals)?))
}
