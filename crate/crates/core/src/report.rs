//! Machine-readable outcome of a check.

use std::fmt;

use serde_json::{json, Map, Value};

use crate::analysis::{OrderFit, OrderOutcome};

#[derive(Clone, Debug, PartialEq)]
pub enum Status {
    Exact,
    Order(i64),
    Pass,
    Fail,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Exact => f.write_str("exact"),
            Status::Order(k) => write!(f, "order_{k}"),
            Status::Pass => f.write_str("pass"),
            Status::Fail => f.write_str("fail"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub check: String,
    pub status: Status,
    pub slope: Option<f64>,
    pub r2: Option<f64>,
    pub details: Map<String, Value>,
}

impl Report {
    pub fn new(check: impl Into<String>, status: Status) -> Self {
        Self { check: check.into(), status, slope: None, r2: None, details: Map::new() }
    }

    pub fn pass_if(check: impl Into<String>, ok: bool) -> Self {
        Self::new(check, if ok { Status::Pass } else { Status::Fail })
    }

    /// `exact`, `order_k` when the fit is conclusive and within `tol` of an
    /// integer, otherwise `fail`.
    pub fn from_order(check: impl Into<String>, outcome: &OrderOutcome, tol: f64) -> Self {
        match outcome {
            OrderOutcome::Exact { eps_values, residuals } => {
                let mut r = Self::new(check, Status::Exact);
                r.detail("eps", json!(eps_values));
                r.detail("residuals", json!(residuals));
                r
            }
            OrderOutcome::Fit(fit) => Self::from_fit(check, fit, tol),
        }
    }

    fn from_fit(check: impl Into<String>, fit: &OrderFit, tol: f64) -> Self {
        let status = match fit.order(tol) {
            Some(k) if fit.conclusive() => Status::Order(k),
            _ => Status::Fail,
        };
        let mut r = Self::new(check, status);
        r.slope = Some(fit.slope);
        r.r2 = Some(fit.r_squared);
        r.detail("eps", json!(fit.eps_values));
        r.detail("residuals", json!(fit.residuals));
        r.detail("intercept", json!(fit.intercept));
        r
    }

    pub fn detail(&mut self, key: &str, value: Value) -> &mut Self {
        self.details.insert(key.to_string(), value);
        self
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }

    pub fn to_json(&self) -> Value {
        json!({
            "check": self.check,
            "status": self.status.to_string(),
            "slope": self.slope,
            "r2": self.r2,
            "details": self.details,
        })
    }
}
