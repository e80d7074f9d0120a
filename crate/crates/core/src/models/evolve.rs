use num_complex::Complex64 as C64;
use rayon::prelude::*;

use super::{CoinOperator, Gate, Model};
use crate::error::{LatticeError, Result};
use crate::lattice::{LightCoord, SpacetimeField, Window};

/// Wire values on the layer `t = t0`. Entry `k` sits at `r = r_start + k`,
/// `l = t0 - r_start - k`.
#[derive(Clone, Debug, PartialEq)]
pub struct InitialLayer {
    pub t0: i64,
    pub r_start: i64,
    pub plus: Vec<Vec<C64>>,
    pub minus: Vec<Vec<C64>>,
}

impl InitialLayer {
    pub fn len(&self) -> usize {
        self.plus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.plus.is_empty()
    }

    pub fn coord(&self, k: usize) -> LightCoord {
        LightCoord::new(self.r_start + k as i64, self.t0 - self.r_start - k as i64)
    }

    /// Smallest window holding the forward light cone after `steps` layers.
    pub fn cone_window(&self, steps: usize) -> Result<Window> {
        let k = self.len() as i64;
        Window::new(self.r_start, self.t0 - self.r_start - k + 1, self.len() + steps, self.len() + steps)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.plus.iter().chain(&self.minus).map(|v| crate::linalg::norm_sqr(v)).sum()
    }
}

/// Evolves on the light-cone window of the initial data.
pub fn qw_evolve(initial: &InitialLayer, coin: &CoinOperator, steps: usize) -> Result<SpacetimeField> {
    if initial.is_empty() {
        return Err(LatticeError::InvalidArgument("initial layer is empty".into()));
    }
    qw_evolve_in(initial, coin, steps, initial.cone_window(steps)?)
}

/// Evolves inside a caller-chosen window.
pub fn qw_evolve_in(
    initial: &InitialLayer,
    coin: &CoinOperator,
    steps: usize,
    window: Window,
) -> Result<SpacetimeField> {
    if initial.plus.len() != initial.minus.len() {
        return Err(LatticeError::DimensionMismatch(
            "initial layer has unequal numbers of plus and minus wires".into(),
        ));
    }
    let mut field = SpacetimeField::with_dims(window, coin.plus_dim, coin.minus_dim, 1.0);
    for k in 0..initial.len() {
        let c = initial.coord(k);
        field.set_plus(c, &initial.plus[k])?;
        field.set_minus(c, &initial.minus[k])?;
    }
    for s in 0..steps as i64 {
        let layer = window.layer(initial.t0 + s);
        let outputs: Vec<(LightCoord, Vec<C64>, Vec<C64>)> = layer
            .par_iter()
            .map(|&c| {
                let (p, m) = coin.apply(&field.plus(c), &field.minus(c));
                (c, p, m)
            })
            .collect();
        for (c, p, m) in outputs {
            field.set_plus(LightCoord::new(c.r + 1, c.l), &p)?;
            field.set_minus(LightCoord::new(c.r, c.l + 1), &m)?;
        }
    }
    field.layers = Some((initial.t0, initial.t0 + steps as i64));
    Ok(field)
}

/// Evolves a walk model and records its metadata in the field.
pub fn evolve_model(model: &Model, initial: &InitialLayer, steps: usize) -> Result<SpacetimeField> {
    let coin = match model.gate()? {
        Gate::Walk(c) => c,
        Gate::Scatter(_) => {
            return Err(LatticeError::InvalidArgument(
                "clock_qca is a many-body model; use the QCA state simulator".into(),
            ))
        }
    };
    let mut field = qw_evolve(initial, &coin, steps)?;
    field.eps = model.eps();
    field.model = model.name().to_string();
    field.params = model.params_json();
    Ok(field)
}
