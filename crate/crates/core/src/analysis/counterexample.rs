//! The two left-moving outputs of a 2×1 Dirac patch fed by a flat-encoded
//! left-mover. First-order covariance needs them equal; they differ at ε².

use num_complex::Complex64 as C64;

use crate::error::Result;
use crate::lorentz::Encoding;
use crate::models::{dirac_coin, Gate};
use crate::patch::build_patch;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Counterexample {
    pub m: f64,
    pub eps: f64,
    pub lhs: C64,
    pub rhs: C64,
    pub gap: f64,
    pub gap_over_eps: f64,
    pub gap_over_eps2: f64,
}

pub fn second_order_counterexample(m: f64, eps: f64) -> Result<Counterexample> {
    let (alpha, beta) = (2, 1);
    let mp = m / ((alpha * beta) as f64).sqrt();
    let patch = build_patch(&Gate::Walk(dirac_coin(mp, eps)), alpha, beta)?;
    let e_alpha = Encoding::dirac_flat(alpha, 1)?;
    let minus = e_alpha.wires(&e_alpha.apply(&[C64::new(1.0, 0.0)]));
    let plus = vec![vec![C64::new(0.0, 0.0)]; beta];
    let (_, minus_out) = patch.apply_wires(&plus, &minus)?;
    let (lhs, rhs) = (minus_out[0][0], minus_out[1][0]);
    let gap = (lhs - rhs).norm();
    Ok(Counterexample { m, eps, lhs, rhs, gap, gap_over_eps: gap / eps, gap_over_eps2: gap / (eps * eps) })
}
