//! Sparse evaluation of two-wire gate networks on basis configurations.
//!
//! Dense state vectors over a stretched lattice grow as `d^(wires)`; the
//! clock automaton maps basis states to at most two basis states, so a map
//! from configurations to amplitudes stays small.

use std::collections::BTreeMap;

use num_complex::Complex64 as C64;

use crate::linalg::ComplexMatrix;

pub type Config = Vec<u8>;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SparseState {
    pub amps: BTreeMap<Config, C64>,
}

impl SparseState {
    pub fn basis(config: Config) -> Self {
        let mut amps = BTreeMap::new();
        amps.insert(config, C64::new(1.0, 0.0));
        Self { amps }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.values().map(|z| z.norm_sqr()).sum()
    }

    /// Applies a `d²×d²` gate to sites `(s1, s2)`, `s1` the more significant.
    pub fn apply(&mut self, d: usize, s1: usize, s2: usize, gate: &ComplexMatrix) {
        let mut next: BTreeMap<Config, C64> = BTreeMap::new();
        for (cfg, amp) in &self.amps {
            let col = cfg[s1] as usize * d + cfg[s2] as usize;
            for row in 0..d * d {
                let g = gate.get(row, col);
                if g == C64::new(0.0, 0.0) {
                    continue;
                }
                let mut out = cfg.clone();
                out[s1] = (row / d) as u8;
                out[s2] = (row % d) as u8;
                *next.entry(out).or_insert(C64::new(0.0, 0.0)) += g * amp;
            }
        }
        next.retain(|_, z| z.norm() > 1e-300);
        self.amps = next;
    }

    /// Largest amplitude difference over the union of supports.
    pub fn max_abs_diff(&self, other: &SparseState) -> f64 {
        let zero = C64::new(0.0, 0.0);
        let keys = self.amps.keys().chain(other.amps.keys());
        keys.map(|k| {
            let a = self.amps.get(k).copied().unwrap_or(zero);
            let b = other.amps.get(k).copied().unwrap_or(zero);
            (a - b).norm()
        })
        .fold(0.0, f64::max)
    }

    /// Replaces every configuration by an image configuration.
    pub fn map_configs(&self, f: impl Fn(&Config) -> Config) -> SparseState {
        let mut amps = BTreeMap::new();
        for (cfg, amp) in &self.amps {
            *amps.entry(f(cfg)).or_insert(C64::new(0.0, 0.0)) += amp;
        }
        SparseState { amps }
    }
}

/// Runs `cells` (pairs of plus-site, minus-site) in order.
pub fn run_cells(state: &mut SparseState, d: usize, gate: &ComplexMatrix, cells: &[(usize, usize)]) {
    for &(p, m) in cells {
        state.apply(d, p, m, gate);
    }
}
