//! The clock walk: a counter lets the walker glide for `p` (or `q`) steps
//! between coin applications.
//!
//! Coin-space index `k < p` is the right-moving counter `k/p`; index `p + k`
//! is the left-moving counter `k/q`.

use num_complex::Complex64 as C64;

use super::{CoinOperator, InnerCoin};
use crate::error::{LatticeError, Result};
use crate::linalg::ComplexMatrix;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClockWalkSpec {
    pub p: usize,
    pub q: usize,
    pub inner_coin: InnerCoin,
}

impl ClockWalkSpec {
    pub fn new(p: usize, q: usize, inner_coin: InnerCoin) -> Result<Self> {
        if p == 0 || q == 0 {
            return Err(LatticeError::InvalidArgument(format!("clock lengths must be positive, got p={p}, q={q}")));
        }
        Ok(Self { p, q, inner_coin })
    }

    pub fn dim(&self) -> usize {
        self.p + self.q
    }

    pub fn counter(&self, index: usize) -> Counter {
        if index < self.p {
            Counter { num: index, den: self.p, side: Shift::Right }
        } else {
            Counter { num: index - self.p, den: self.q, side: Shift::Left }
        }
    }

    pub fn index(&self, c: Counter) -> Option<usize> {
        let (den, base) = match c.side {
            Shift::Right => (self.p, 0),
            Shift::Left => (self.q, self.p),
        };
        // compare as rationals so that relabelled counters resolve
        if c.den == 0 || (c.num * den) % c.den != 0 {
            return None;
        }
        let k = c.num * den / c.den;
        (k < den).then_some(base + k)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shift {
    Right,
    Left,
}

impl Shift {
    pub fn dx(self) -> i64 {
        match self {
            Shift::Right => 1,
            Shift::Left => -1,
        }
    }
}

/// Counter value `num/den` on one chirality.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Counter {
    pub num: usize,
    pub den: usize,
    pub side: Shift,
}

/// Shift table (one entry per coin-space index) and the coin `C_{p,q}`.
pub fn clock_walk_operator(spec: &ClockWalkSpec) -> Result<(Vec<Shift>, CoinOperator)> {
    spec.inner_coin.ensure_unitary()?;
    let (p, q) = (spec.p, spec.q);
    let n = p + q;
    let InnerCoin { a, b, c, d } = spec.inner_coin;
    let mut m = ComplexMatrix::zeros(n, n);
    let one = C64::new(1.0, 0.0);
    for k in 0..p - 1 {
        m.set(k, k + 1, one);
    }
    m.set(p - 1, 0, a);
    m.set(p - 1, p, b);
    for k in 0..q - 1 {
        m.set(p + k, p + k + 1, one);
    }
    m.set(n - 1, 0, c);
    m.set(n - 1, p, d);
    let shifts = (0..n).map(|k| spec.counter(k).side).collect();
    Ok((shifts, CoinOperator::new(m, p, q)?))
}

/// One walk step on a position/counter basis state, case by case.
pub fn apply_basis(spec: &ClockWalkSpec, x: i64, h: Counter) -> Vec<(C64, i64, Counter)> {
    let top_plus = Counter { num: spec.p - 1, den: spec.p, side: Shift::Right };
    let top_minus = Counter { num: spec.q - 1, den: spec.q, side: Shift::Left };
    if h.num > 0 {
        let next = Counter { num: h.num - 1, ..h };
        return vec![(C64::new(1.0, 0.0), x + h.side.dx(), next)];
    }
    let InnerCoin { a, b, c, d } = spec.inner_coin;
    let (to_plus, to_minus) = match h.side {
        Shift::Right => (a, c),
        Shift::Left => (b, d),
    };
    vec![(to_plus, x + 1, top_plus), (to_minus, x - 1, top_minus)]
}
