//! Discrete Lorentz transforms: encodings, parameter maps, covariance
//! residuals and field rewrites.

pub mod covariance;
pub mod encoding;
pub mod network;
pub mod nonhomog;
pub mod transform;

use crate::error::{LatticeError, Result};
use crate::models::Model;

pub use covariance::{covariance_defect, covariance_residual};
pub use encoding::{make_encoding, Encoding, EncodingKind, EncodingPair};
pub use nonhomog::{nonhomog_transform, observer_rescaling, observer_rescaling_at, NonHomogParams, StepProfile};
pub use transform::{gluing_mismatch, lorentz_transform_field, solution_residual, unzoom_field};

/// Parameter map `f_{α,β}` of a model under a transform.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MassMap {
    /// `m ↦ m/√(αβ)`.
    DiracScaling,
    /// `(p, q) ↦ (αp, βq)`.
    ClockRescale,
    Identity,
}

impl MassMap {
    pub fn for_model(model: &Model) -> Self {
        match model {
            Model::Dirac { .. } | Model::FdDirac { .. } => MassMap::DiracScaling,
            Model::ClockQw { .. } => MassMap::ClockRescale,
            Model::ClockQca { .. } => MassMap::Identity,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            MassMap::DiracScaling => "m/sqrt(alpha*beta)",
            MassMap::ClockRescale => "(p,q)->(alpha*p,beta*q)",
            MassMap::Identity => "identity",
        }
    }

    /// True when the mapped parameters vary with `(α, β)`.
    pub fn depends_on_frame(self) -> bool {
        self != MassMap::Identity
    }

    pub fn apply(self, model: &Model, alpha: usize, beta: usize) -> Result<Model> {
        let scale = ((alpha * beta) as f64).sqrt();
        match (self, model) {
            (MassMap::DiracScaling, Model::Dirac { m, eps }) => Ok(Model::Dirac { m: m / scale, eps: *eps }),
            (MassMap::DiracScaling, Model::FdDirac { m, eps }) => Ok(Model::FdDirac { m: m / scale, eps: *eps }),
            (MassMap::ClockRescale, Model::ClockQw { p, q, coin, eps }) => {
                Ok(Model::ClockQw { p: alpha * p, q: beta * q, coin: *coin, eps: *eps })
            }
            (MassMap::Identity, m) => Ok(m.clone()),
            (map, m) => Err(LatticeError::InvalidArgument(format!(
                "parameter map `{}` does not apply to model `{}`",
                map.as_str(),
                m.name()
            ))),
        }
    }

    /// Inverse map, used when zooming back out.
    pub fn invert(self, model: &Model, alpha: usize, beta: usize) -> Result<Model> {
        let scale = ((alpha * beta) as f64).sqrt();
        let not_divisible = || {
            LatticeError::InvalidArgument(format!(
                "clock lengths of `{}` are not multiples of ({alpha}, {beta})",
                model.name()
            ))
        };
        match (self, model) {
            (MassMap::DiracScaling, Model::Dirac { m, eps }) => Ok(Model::Dirac { m: m * scale, eps: *eps }),
            (MassMap::DiracScaling, Model::FdDirac { m, eps }) => Ok(Model::FdDirac { m: m * scale, eps: *eps }),
            (MassMap::ClockRescale, Model::ClockQw { p, q, coin, eps }) => {
                if p % alpha != 0 || q % beta != 0 {
                    return Err(not_divisible());
                }
                Ok(Model::ClockQw { p: p / alpha, q: q / beta, coin: *coin, eps: *eps })
            }
            (MassMap::Identity, m) => Ok(m.clone()),
            _ => self.apply(model, alpha, beta),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LorentzParams {
    pub alpha: usize,
    pub beta: usize,
    pub mass_map: Option<MassMap>,
}

impl LorentzParams {
    pub fn new(alpha: usize, beta: usize, mass_map: Option<MassMap>) -> Result<Self> {
        if alpha == 0 || beta == 0 {
            return Err(LatticeError::InvalidArgument(format!(
                "alpha and beta must be positive, got ({alpha}, {beta})"
            )));
        }
        Ok(Self { alpha, beta, mass_map })
    }

    /// Parameters with the model's own map.
    pub fn for_model(model: &Model, alpha: usize, beta: usize) -> Result<Self> {
        Self::new(alpha, beta, Some(MassMap::for_model(model)))
    }

    /// `u = (α − β)/(α + β)`.
    pub fn velocity(&self) -> f64 {
        let (a, b) = (self.alpha as f64, self.beta as f64);
        (a - b) / (a + b)
    }

    pub fn mass_map(&self) -> Result<MassMap> {
        self.mass_map.ok_or(LatticeError::MissingMassMap)
    }

    pub fn mapped_model(&self, model: &Model) -> Result<Model> {
        self.mass_map()?.apply(model, self.alpha, self.beta)
    }
}
