//! Lightlike α×β rectangles of gates.
//!
//! Inputs are listed as `ψ̄₊ ⊕ ψ̄₋` (or `⊗` for tensor wires). `ψ̄₊` holds the
//! right-moving wires entering along the left edge, `ψ₊(r, l+j)` for
//! `j < β`, and `ψ̄₋` the left-moving wires entering along the bottom edge,
//! `ψ₋(r+i, l)` for `i < α`. Both run bottom to top. Outputs use the same
//! layout: plus wire `j` leaves at `(r+α, l+j)`, minus wire `i` at `(r+i, l+β)`.

use num_complex::Complex64 as C64;

use crate::error::{LatticeError, Result};
use crate::linalg::ComplexMatrix;
use crate::models::qca::apply_two_site;
use crate::models::Gate;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Combination {
    DirectSum,
    Tensor,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PatchOperator {
    pub alpha: usize,
    pub beta: usize,
    pub combination: Combination,
    /// Gate in lightlike form, acting on `ψ₊ ⊕ ψ₋` or `ψ₊ ⊗ ψ₋`.
    pub gate: ComplexMatrix,
    pub plus_dim: usize,
    pub minus_dim: usize,
}

/// Incoming wire values at one interior point.
#[derive(Clone, Debug, PartialEq)]
pub struct CellInputs {
    pub plus: Vec<C64>,
    pub minus: Vec<C64>,
}

pub fn build_patch(gate: &Gate, alpha: usize, beta: usize) -> Result<PatchOperator> {
    if alpha == 0 || beta == 0 {
        return Err(LatticeError::InvalidArgument(format!("patch sides must be positive, got {alpha}x{beta}")));
    }
    let (matrix, plus_dim, minus_dim, combination) = match gate {
        Gate::Walk(c) => (c.matrix.clone(), c.plus_dim, c.minus_dim, Combination::DirectSum),
        Gate::Scatter(u) => (u.lightlike.clone(), 3, 3, Combination::Tensor),
    };
    let expect = match combination {
        Combination::DirectSum => plus_dim + minus_dim,
        Combination::Tensor => plus_dim * minus_dim,
    };
    if matrix.rows() != expect || matrix.cols() != expect {
        return Err(LatticeError::DimensionMismatch(format!(
            "gate is {}x{}, wires need {expect}x{expect}",
            matrix.rows(),
            matrix.cols()
        )));
    }
    Ok(PatchOperator { alpha, beta, combination, gate: matrix, plus_dim, minus_dim })
}

impl PatchOperator {
    pub fn input_dim(&self) -> usize {
        match self.combination {
            Combination::DirectSum => self.beta * self.plus_dim + self.alpha * self.minus_dim,
            Combination::Tensor => self.plus_dim.pow((self.alpha + self.beta) as u32),
        }
    }

    fn check_len(&self, input: &[C64]) -> Result<()> {
        if input.len() != self.input_dim() {
            return Err(LatticeError::DimensionMismatch(format!(
                "patch input has {} components, expected {}",
                input.len(),
                self.input_dim()
            )));
        }
        Ok(())
    }

    fn check_cell(&self, i: usize, j: usize) -> Result<()> {
        if i >= self.alpha || j >= self.beta {
            return Err(LatticeError::PatchIndex { i, j, alpha: self.alpha, beta: self.beta });
        }
        Ok(())
    }

    fn split(&self, input: &[C64]) -> (Vec<Vec<C64>>, Vec<Vec<C64>>) {
        let (dp, dm) = (self.plus_dim, self.minus_dim);
        let plus = (0..self.beta).map(|j| input[j * dp..(j + 1) * dp].to_vec()).collect();
        let off = self.beta * dp;
        let minus = (0..self.alpha).map(|i| input[off + i * dm..off + (i + 1) * dm].to_vec()).collect();
        (plus, minus)
    }

    fn gate_apply(&self, plus: &[C64], minus: &[C64]) -> (Vec<C64>, Vec<C64>) {
        let mut v = plus.to_vec();
        v.extend_from_slice(minus);
        let mut out = self.gate.mul_vec(&v);
        let m = out.split_off(self.plus_dim);
        (out, m)
    }

    /// Runs cells in causal order, calling `visit(i, j, plus, minus)` with the
    /// incoming wires of each cell before its gate acts.
    fn run(
        &self,
        mut plus: Vec<Vec<C64>>,
        mut minus: Vec<Vec<C64>>,
        mut visit: impl FnMut(usize, usize, &[C64], &[C64]) -> bool,
    ) -> (Vec<Vec<C64>>, Vec<Vec<C64>>) {
        for i in 0..self.alpha {
            for j in 0..self.beta {
                if !visit(i, j, &plus[j], &minus[i]) {
                    return (plus, minus);
                }
                let (p, m) = self.gate_apply(&plus[j], &minus[i]);
                plus[j] = p;
                minus[i] = m;
            }
        }
        (plus, minus)
    }

    /// Outgoing wires for the given incoming wires.
    pub fn apply(&self, input: &[C64]) -> Result<Vec<C64>> {
        self.check_len(input)?;
        match self.combination {
            Combination::DirectSum => {
                let (plus, minus) = self.split(input);
                let (plus, minus) = self.run(plus, minus, |_, _, _, _| true);
                Ok(plus.into_iter().chain(minus).flatten().collect())
            }
            Combination::Tensor => {
                let n = self.alpha + self.beta;
                let mut state = input.to_vec();
                for i in 0..self.alpha {
                    for j in 0..self.beta {
                        state = apply_two_site(&state, n, self.plus_dim, j, self.beta + i, &self.gate);
                    }
                }
                Ok(state)
            }
        }
    }

    /// `(C̄₊, C̄₋)` applied to separate wire lists.
    pub fn apply_wires(&self, plus: &[Vec<C64>], minus: &[Vec<C64>]) -> Result<(Vec<Vec<C64>>, Vec<Vec<C64>>)> {
        self.direct_only()?;
        self.check_wires(plus, minus)?;
        Ok(self.run(plus.to_vec(), minus.to_vec(), |_, _, _, _| true))
    }

    fn direct_only(&self) -> Result<()> {
        if self.combination == Combination::Tensor {
            return Err(LatticeError::InvalidArgument(
                "interior values are not defined for entangled tensor wires".into(),
            ));
        }
        Ok(())
    }

    fn check_wires(&self, plus: &[Vec<C64>], minus: &[Vec<C64>]) -> Result<()> {
        if plus.len() != self.beta
            || minus.len() != self.alpha
            || plus.iter().any(|w| w.len() != self.plus_dim)
            || minus.iter().any(|w| w.len() != self.minus_dim)
        {
            return Err(LatticeError::DimensionMismatch(format!(
                "patch {}x{} needs {} plus wires of dim {} and {} minus wires of dim {}",
                self.alpha, self.beta, self.beta, self.plus_dim, self.alpha, self.minus_dim
            )));
        }
        Ok(())
    }

    /// Incoming wires at every interior point, indexed `[i][j]`, followed by
    /// the outgoing boundary wires.
    pub fn fill(
        &self,
        plus: &[Vec<C64>],
        minus: &[Vec<C64>],
    ) -> Result<(Vec<Vec<CellInputs>>, (Vec<Vec<C64>>, Vec<Vec<C64>>))> {
        self.direct_only()?;
        self.check_wires(plus, minus)?;
        let mut cells: Vec<Vec<CellInputs>> = vec![Vec::with_capacity(self.beta); self.alpha];
        let out = self.run(plus.to_vec(), minus.to_vec(), |i, _, p, m| {
            cells[i].push(CellInputs { plus: p.to_vec(), minus: m.to_vec() });
            true
        });
        Ok((cells, out))
    }

    /// `ψ₊ ⊕ ψ₋` entering cell `(i, j)`.
    pub fn interior(&self, i: usize, j: usize, input: &[C64]) -> Result<Vec<C64>> {
        self.direct_only()?;
        self.check_cell(i, j)?;
        self.check_len(input)?;
        let (plus, minus) = self.split(input);
        let mut found = Vec::new();
        self.run(plus, minus, |ci, cj, p, m| {
            if (ci, cj) == (i, j) {
                found = p.iter().chain(m).copied().collect();
                false
            } else {
                true
            }
        });
        Ok(found)
    }

    /// Matrix of the interior map `C̄(i, j)`.
    pub fn interior_matrix(&self, i: usize, j: usize) -> Result<ComplexMatrix> {
        let cols: Result<Vec<_>> =
            (0..self.input_dim()).map(|k| self.interior(i, j, &unit(self.input_dim(), k))).collect();
        Ok(ComplexMatrix::from_columns(&cols?))
    }

    /// Matrix of the boundary map, built column by column.
    pub fn boundary(&self) -> ComplexMatrix {
        let n = self.input_dim();
        let cols: Vec<_> = (0..n).map(|k| self.apply(&unit(n, k)).expect("sized input")).collect();
        ComplexMatrix::from_columns(&cols)
    }
}

pub(crate) fn unit(n: usize, k: usize) -> Vec<C64> {
    let mut v = vec![C64::new(0.0, 0.0); n];
    v[k] = C64::new(1.0, 0.0);
    v
}
