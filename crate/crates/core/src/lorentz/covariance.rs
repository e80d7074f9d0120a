use super::{EncodingPair, LorentzParams};
use crate::error::{LatticeError, Result};
use crate::linalg::ComplexMatrix;
use crate::models::{Gate, Model};
use crate::patch::{build_patch, unit};

pub(crate) fn gate_matrix(gate: &Gate) -> &ComplexMatrix {
    match gate {
        Gate::Walk(c) => &c.matrix,
        Gate::Scatter(u) => &u.lightlike,
    }
}

/// `Ē·C_m − C̄_{m'}·Ē` as a matrix, built column by column.
pub fn covariance_defect(model: &Model, params: &LorentzParams, pair: &EncodingPair) -> Result<ComplexMatrix> {
    let mapped = params.mapped_model(model)?;
    let gate = model.gate()?;
    let c = gate_matrix(&gate);
    let patch = build_patch(&mapped.gate()?, params.alpha, params.beta)?;
    if c.cols() != pair.dim_in() || patch.input_dim() != pair.dim_out() {
        return Err(LatticeError::DimensionMismatch(format!(
            "encoding maps {} into {}, but the gate acts on {} and the patch on {}",
            pair.dim_in(),
            pair.dim_out(),
            c.cols(),
            patch.input_dim()
        )));
    }
    let mut cols = Vec::with_capacity(c.cols());
    for k in 0..c.cols() {
        let lhs = pair.apply(&c.column(k));
        let rhs = patch.apply(&pair.apply(&unit(c.cols(), k)))?;
        cols.push(lhs.iter().zip(&rhs).map(|(a, b)| a - b).collect());
    }
    Ok(ComplexMatrix::from_columns(&cols))
}

/// `‖Ē·C_m − C̄_{m'}·Ē‖_max`.
pub fn covariance_residual(model: &Model, params: &LorentzParams, pair: &EncodingPair) -> Result<f64> {
    Ok(covariance_defect(model, params, pair)?.max_abs())
}
