//! The four dynamical systems and their local gates.

pub mod clock;
pub mod dirac;
pub mod evolve;
pub mod qca;

use num_complex::Complex64 as C64;
use serde_json::{json, Map, Value};

use crate::error::{LatticeError, Result};
use crate::linalg::{ComplexMatrix, TOL};

pub use clock::{clock_walk_operator, ClockWalkSpec, Counter, Shift};
pub use dirac::{dirac_coin, fd_dirac_coin};
pub use evolve::{qw_evolve, qw_evolve_in, InitialLayer};
pub use qca::{clock_qca_scattering, qca_step, Parity, QCAState, QcaBasis, ScatteringOperator};

/// Entries of a 2×2 coin `[[a, b], [c, d]]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InnerCoin {
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub d: C64,
}

impl InnerCoin {
    /// `a = d = cos(mε)`, `b = c = -i sin(mε)`.
    pub fn from_mass(m: f64, eps: f64) -> Self {
        let (s, c) = (m * eps).sin_cos();
        Self { a: C64::new(c, 0.0), b: C64::new(0.0, -s), c: C64::new(0.0, -s), d: C64::new(c, 0.0) }
    }

    pub fn identity() -> Self {
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        Self { a: one, b: zero, c: zero, d: one }
    }

    pub fn from_matrix(m: &ComplexMatrix) -> Result<Self> {
        if m.rows() != 2 || m.cols() != 2 {
            return Err(LatticeError::DimensionMismatch(format!(
                "inner coin must be 2x2, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        Ok(Self { a: m.get(0, 0), b: m.get(0, 1), c: m.get(1, 0), d: m.get(1, 1) })
    }

    pub fn matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_rows(&[vec![self.a, self.b], vec![self.c, self.d]])
    }

    pub fn det(&self) -> C64 {
        self.a * self.d - self.b * self.c
    }

    pub fn ensure_unitary(&self) -> Result<()> {
        let defect = self.matrix().unitarity_defect();
        if defect > TOL {
            return Err(LatticeError::NonUnitary { what: "inner coin".into(), defect });
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let z = |v: C64| json!([v.re, v.im]);
        json!([[z(self.a), z(self.b)], [z(self.c), z(self.d)]])
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let rows: [[[f64; 2]; 2]; 2] = serde_json::from_value(v.clone())?;
        let z = |p: [f64; 2]| C64::new(p[0], p[1]);
        Ok(Self { a: z(rows[0][0]), b: z(rows[0][1]), c: z(rows[1][0]), d: z(rows[1][1]) })
    }
}

/// A walk gate acting on `ψ₊ ⊕ ψ₋`; the first `plus_dim` outputs leave
/// along the right-moving wire.
#[derive(Clone, Debug, PartialEq)]
pub struct CoinOperator {
    pub matrix: ComplexMatrix,
    pub plus_dim: usize,
    pub minus_dim: usize,
    /// False for the finite-difference matrix with `mε ≠ 0`.
    pub unitary: bool,
}

impl CoinOperator {
    pub fn new(matrix: ComplexMatrix, plus_dim: usize, minus_dim: usize) -> Result<Self> {
        let n = plus_dim + minus_dim;
        if matrix.rows() != n || matrix.cols() != n {
            return Err(LatticeError::DimensionMismatch(format!(
                "coin is {}x{}, wires need {n}x{n}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let unitary = matrix.unitarity_defect() <= TOL;
        Ok(Self { matrix, plus_dim, minus_dim, unitary })
    }

    pub fn dim(&self) -> usize {
        self.plus_dim + self.minus_dim
    }

    /// Returns the outgoing `(ψ₊, ψ₋)` for incoming `(ψ₊, ψ₋)`.
    pub fn apply(&self, plus: &[C64], minus: &[C64]) -> (Vec<C64>, Vec<C64>) {
        let mut v = Vec::with_capacity(self.dim());
        v.extend_from_slice(plus);
        v.extend_from_slice(minus);
        let mut out = self.matrix.mul_vec(&v);
        let minus_out = out.split_off(self.plus_dim);
        (out, minus_out)
    }
}

/// Either kind of local gate, in lightlike form.
#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    Walk(CoinOperator),
    Scatter(ScatteringOperator),
}

impl Gate {
    pub fn is_unitary(&self) -> bool {
        match self {
            Gate::Walk(c) => c.unitary,
            Gate::Scatter(_) => true,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Model {
    Dirac { m: f64, eps: f64 },
    FdDirac { m: f64, eps: f64 },
    ClockQw { p: usize, q: usize, coin: InnerCoin, eps: f64 },
    ClockQca { coin: InnerCoin, eps: f64 },
}

impl Model {
    pub fn name(&self) -> &'static str {
        match self {
            Model::Dirac { .. } => "dirac",
            Model::FdDirac { .. } => "fd_dirac",
            Model::ClockQw { .. } => "clock_qw",
            Model::ClockQca { .. } => "clock_qca",
        }
    }

    pub fn eps(&self) -> f64 {
        match *self {
            Model::Dirac { eps, .. }
            | Model::FdDirac { eps, .. }
            | Model::ClockQw { eps, .. }
            | Model::ClockQca { eps, .. } => eps,
        }
    }

    pub fn gate(&self) -> Result<Gate> {
        Ok(match self {
            Model::Dirac { m, eps } => Gate::Walk(dirac_coin(*m, *eps)),
            Model::FdDirac { m, eps } => Gate::Walk(fd_dirac_coin(*m, *eps)),
            Model::ClockQw { p, q, coin, .. } => {
                let spec = ClockWalkSpec::new(*p, *q, *coin)?;
                Gate::Walk(clock_walk_operator(&spec)?.1)
            }
            Model::ClockQca { coin, .. } => Gate::Scatter(clock_qca_scattering(*coin)?),
        })
    }

    /// Wire dimensions `(d₊, d₋)`.
    pub fn wire_dims(&self) -> (usize, usize) {
        match *self {
            Model::Dirac { .. } | Model::FdDirac { .. } => (1, 1),
            Model::ClockQw { p, q, .. } => (p, q),
            Model::ClockQca { .. } => (3, 3),
        }
    }

    /// Parameters recorded in field metadata.
    pub fn params_json(&self) -> Map<String, Value> {
        let mut p = Map::new();
        match self {
            Model::Dirac { m, .. } | Model::FdDirac { m, .. } => {
                p.insert("m".into(), json!(m));
            }
            Model::ClockQw { p: pp, q, coin, .. } => {
                p.insert("p".into(), json!(pp));
                p.insert("q".into(), json!(q));
                p.insert("coin".into(), coin.to_json());
            }
            Model::ClockQca { coin, .. } => {
                p.insert("coin".into(), coin.to_json());
            }
        }
        p
    }

    /// Reconstructs a model from field metadata.
    pub fn from_field_meta(model: &str, eps: f64, params: &Map<String, Value>) -> Result<Self> {
        let num = |k: &str| {
            params
                .get(k)
                .and_then(Value::as_f64)
                .ok_or_else(|| LatticeError::InvalidArgument(format!("field params lack `{k}`")))
        };
        let coin = || match params.get("coin") {
            Some(v) => InnerCoin::from_json(v),
            None => Err(LatticeError::InvalidArgument("field params lack `coin`".into())),
        };
        Ok(match model {
            "dirac" => Model::Dirac { m: num("m")?, eps },
            "fd_dirac" => Model::FdDirac { m: num("m")?, eps },
            "clock_qw" => Model::ClockQw { p: num("p")? as usize, q: num("q")? as usize, coin: coin()?, eps },
            "clock_qca" => Model::ClockQca { coin: coin()?, eps },
            other => return Err(LatticeError::UnknownModel(other.to_string())),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_inner_coin_is_unitary_with_unit_det() {
        let c = InnerCoin::from_mass(1.3, 0.2);
        c.ensure_unitary().unwrap();
        assert!((c.det() - C64::new(1.0, 0.0)).norm() < TOL);
    }

    #[test]
    fn model_meta_round_trip() {
        let models = [
            Model::Dirac { m: 0.5, eps: 0.1 },
            Model::FdDirac { m: 0.5, eps: 0.1 },
            Model::ClockQw { p: 2, q: 3, coin: InnerCoin::from_mass(1.0, 0.1), eps: 0.1 },
            Model::ClockQca { coin: InnerCoin::from_mass(1.0, 0.1), eps: 0.1 },
        ];
        for m in models {
            let back = Model::from_field_meta(m.name(), m.eps(), &m.params_json()).unwrap();
            assert_eq!(back, m);
        }
        assert!(matches!(Model::from_field_meta("weyl", 0.1, &Map::new()), Err(LatticeError::UnknownModel(_))));
    }
}
