//! Three-level clock automaton and a dense brickwork simulator.

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use super::InnerCoin;
use crate::error::{LatticeError, Result};
use crate::linalg::{norm_sqr, ComplexMatrix};

/// Wire basis, in matrix index order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QcaBasis {
    Q = 0,
    Zero = 1,
    One = 2,
}

pub const QCA_DIM: usize = 3;

/// Two-wire scattering unitary.
///
/// `matrix` acts on `left ⊗ right` in space. `lightlike` is the same gate with
/// its output read as `ψ₊ ⊗ ψ₋`: the incoming right-mover sits on the left, and
/// leaves on the right.
#[derive(Clone, Debug, PartialEq)]
pub struct ScatteringOperator {
    pub matrix: ComplexMatrix,
    pub lightlike: ComplexMatrix,
    pub inner_coin: InnerCoin,
}

fn pair(a: QcaBasis, b: QcaBasis) -> usize {
    a as usize * QCA_DIM + b as usize
}

pub fn swap_matrix(d: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(
        d * d,
        d * d,
        |i, j| {
            if i == (j % d) * d + j / d {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        },
    )
}

pub fn clock_qca_scattering(inner_coin: InnerCoin) -> Result<ScatteringOperator> {
    use QcaBasis::*;
    inner_coin.ensure_unitary()?;
    let one = C64::new(1.0, 0.0);
    let mut u = ComplexMatrix::zeros(9, 9);
    // matrix[out][in]
    let mut rule = |from: usize, to: usize, amp: C64| {
        let cur = u.get(to, from);
        u.set(to, from, cur + amp);
    };
    rule(pair(Q, Q), pair(Q, Q), one);
    rule(pair(Q, Zero), pair(Zero, Q), one);
    rule(pair(Zero, Q), pair(Q, Zero), one);
    rule(pair(Zero, Zero), pair(Zero, Zero), one);
    rule(pair(One, One), pair(One, One), one);
    rule(pair(One, Q), pair(Q, One), one);
    rule(pair(Q, One), pair(One, Q), one);
    let InnerCoin { a, b, c, d } = inner_coin;
    rule(pair(One, Zero), pair(Zero, One), a);
    rule(pair(One, Zero), pair(One, Zero), b);
    rule(pair(Zero, One), pair(Zero, One), c);
    rule(pair(Zero, One), pair(One, Zero), d);
    let lightlike = swap_matrix(QCA_DIM).matmul(&u);
    Ok(ScatteringOperator { matrix: u, lightlike, inner_coin })
}

/// Applies a two-site gate on sites `(s1, s2)` of a state with `n` sites of
/// dimension `d`; site 0 is the most significant digit.
pub fn apply_two_site(state: &[C64], n: usize, d: usize, s1: usize, s2: usize, gate: &ComplexMatrix) -> Vec<C64> {
    debug_assert_eq!(state.len(), d.pow(n as u32));
    let st1 = d.pow((n - 1 - s1) as u32);
    let st2 = d.pow((n - 1 - s2) as u32);
    let g = gate.as_array();
    let mut out = vec![C64::new(0.0, 0.0); state.len()];
    out.par_iter_mut().enumerate().for_each(|(idx, o)| {
        let a = (idx / st1) % d;
        let b = (idx / st2) % d;
        let base = idx - a * st1 - b * st2;
        let row = a * d + b;
        let mut acc = C64::new(0.0, 0.0);
        for a2 in 0..d {
            for b2 in 0..d {
                let amp = g[(row, a2 * d + b2)];
                if amp != C64::new(0.0, 0.0) {
                    acc += amp * state[base + a2 * st1 + b2 * st2];
                }
            }
        }
        *o = acc;
    });
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// Many-body state on `N` periodic wires.
#[derive(Clone, Debug, PartialEq)]
pub struct QCAState {
    n_wires: usize,
    pub amplitudes: Vec<C64>,
    pub phase_parity: Parity,
}

pub const MAX_QCA_WIRES: usize = 12;

impl QCAState {
    pub fn new(n_wires: usize, amplitudes: Vec<C64>) -> Result<Self> {
        if n_wires == 0 || n_wires % 2 == 1 {
            return Err(LatticeError::OddWireCount(n_wires));
        }
        if n_wires > MAX_QCA_WIRES {
            return Err(LatticeError::InvalidArgument(format!(
                "at most {MAX_QCA_WIRES} wires supported, got {n_wires}"
            )));
        }
        if amplitudes.len() != QCA_DIM.pow(n_wires as u32) {
            return Err(LatticeError::DimensionMismatch(format!(
                "{} amplitudes for {n_wires} wires",
                amplitudes.len()
            )));
        }
        Ok(Self { n_wires, amplitudes, phase_parity: Parity::Even })
    }

    pub fn product(config: &[QcaBasis]) -> Result<Self> {
        let n = config.len();
        let mut amps = vec![C64::new(0.0, 0.0); QCA_DIM.pow(n as u32)];
        amps[Self::index_of(config)] = C64::new(1.0, 0.0);
        Self::new(n, amps)
    }

    pub fn index_of(config: &[QcaBasis]) -> usize {
        config.iter().fold(0, |acc, &b| acc * QCA_DIM + b as usize)
    }

    pub fn n_wires(&self) -> usize {
        self.n_wires
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.amplitudes)
    }

    /// Probability that wire `w` holds basis state `b`.
    pub fn occupation(&self, w: usize, b: QcaBasis) -> f64 {
        let stride = QCA_DIM.pow((self.n_wires - 1 - w) as u32);
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(i, _)| (i / stride) % QCA_DIM == b as usize)
            .map(|(_, z)| z.norm_sqr())
            .sum()
    }

    /// Applies the gate to every pair of the pending sublayer.
    pub fn half_step(&mut self, u: &ScatteringOperator) {
        let start = match self.phase_parity {
            Parity::Even => 0,
            Parity::Odd => 1,
        };
        let n = self.n_wires;
        for k in (start..n).step_by(2) {
            self.amplitudes = apply_two_site(&self.amplitudes, n, QCA_DIM, k, (k + 1) % n, &u.matrix);
        }
        self.phase_parity = match self.phase_parity {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        };
    }
}

/// Even sublayer then odd sublayer.
pub fn qca_step(state: &QCAState, u: &ScatteringOperator) -> Result<QCAState> {
    if state.n_wires % 2 == 1 {
        return Err(LatticeError::OddWireCount(state.n_wires));
    }
    let mut next = state.clone();
    next.half_step(u);
    next.half_step(u);
    Ok(next)
}
