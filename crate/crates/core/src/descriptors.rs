//! JSON descriptors for models and transforms.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{LatticeError, Result};
use crate::lorentz::{EncodingKind, NonHomogParams};
use crate::models::{InnerCoin, Model};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDescriptor {
    pub model: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<f64>,
    pub eps: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<usize>,
    /// `[[[re, im], [re, im]], [[re, im], [re, im]]]`; defaults to the mass coin.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coin: Option<Value>,
}

fn config_err(field: &str, msg: impl std::fmt::Display) -> LatticeError {
    LatticeError::InvalidArgument(format!("`{field}`: {msg}"))
}

impl ModelDescriptor {
    pub fn from_model(model: &Model) -> Self {
        let mut d = ModelDescriptor { model: model.name().into(), eps: model.eps(), ..Default::default() };
        match model {
            Model::Dirac { m, .. } | Model::FdDirac { m, .. } => d.m = Some(*m),
            Model::ClockQw { p, q, coin, .. } => {
                d.p = Some(*p);
                d.q = Some(*q);
                d.coin = Some(coin.to_json());
            }
            Model::ClockQca { coin, .. } => d.coin = Some(coin.to_json()),
        }
        d
    }

    pub fn to_model(&self) -> Result<Model> {
        if !(self.eps > 0.0 && self.eps.is_finite()) {
            return Err(config_err("eps", format!("must be positive, got {}", self.eps)));
        }
        let m = self.m.unwrap_or(0.0);
        if !m.is_finite() {
            return Err(config_err("m", "must be finite"));
        }
        let coin = || -> Result<InnerCoin> {
            let c = match &self.coin {
                Some(v) => InnerCoin::from_json(v).map_err(|e| config_err("coin", e))?,
                None => InnerCoin::from_mass(m, self.eps),
            };
            c.ensure_unitary().map_err(|e| config_err("coin", e))?;
            Ok(c)
        };
        let model = match self.model.as_str() {
            "dirac" => Model::Dirac { m, eps: self.eps },
            "fd_dirac" => Model::FdDirac { m, eps: self.eps },
            "clock_qw" => {
                let p = self.p.ok_or_else(|| config_err("p", "required for clock_qw"))?;
                let q = self.q.ok_or_else(|| config_err("q", "required for clock_qw"))?;
                if p == 0 || q == 0 {
                    return Err(config_err("p/q", "must be positive"));
                }
                Model::ClockQw { p, q, coin: coin()?, eps: self.eps }
            }
            "clock_qca" => Model::ClockQca { coin: coin()?, eps: self.eps },
            other => return Err(config_err("model", LatticeError::UnknownModel(other.into()))),
        };
        Ok(model)
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        serde_json::from_value(v.clone()).map_err(|e| config_err("model descriptor", e))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransformDescriptor {
    pub alpha: usize,
    pub beta: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub encoding: Option<String>,
    /// Present for non-homogeneous transforms; `alpha`/`beta` are then ignored.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nonhomog: Option<NonHomogParams>,
}

impl TransformDescriptor {
    pub fn homogeneous(alpha: usize, beta: usize, model: &Model) -> Self {
        Self { alpha, beta, encoding: Some(EncodingKind::for_model(model).as_str().into()), nonhomog: None }
    }

    /// Checks positivity and that the named encoding is the one the model
    /// uses.
    pub fn validate(&self, model: &Model) -> Result<()> {
        if self.alpha == 0 || self.beta == 0 {
            return Err(config_err("alpha/beta", "must be positive"));
        }
        if let Some(name) = &self.encoding {
            let kind = EncodingKind::parse(name).map_err(|e| config_err("encoding", e))?;
            let expected = EncodingKind::for_model(model);
            if kind != expected {
                return Err(config_err(
                    "encoding",
                    format!("model `{}` uses `{}`, not `{name}`", model.name(), expected.as_str()),
                ));
            }
        }
        Ok(())
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        serde_json::from_value(v.clone()).map_err(|e| config_err("transform descriptor", e))
    }
}
