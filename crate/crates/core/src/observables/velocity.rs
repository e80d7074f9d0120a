//! Local and mean velocity of a walker.

use num_complex::Complex64 as C64;

use crate::error::{LatticeError, Result};
use crate::lattice::{LightCoord, SpacetimeField};
use crate::linalg::norm_sqr;

fn velocity_of(plus: &[C64], minus: &[C64]) -> Option<f64> {
    let (p, m) = (norm_sqr(plus), norm_sqr(minus));
    let total = p + m;
    (total > 0.0).then(|| (p - m) / total)
}

/// `(|ψ₊|² − |ψ₋|²) / ‖ψ‖²` at one point.
pub fn local_velocity(f: &SpacetimeField, c: LightCoord) -> Result<f64> {
    velocity_of(&f.plus(c), &f.minus(c)).ok_or(LatticeError::ZeroDensity { coord: c })
}

/// Boosts a two-component state of velocity `v` by `diag(1/√β, 1/√α)` and
/// returns `(measured, (v + u)/(1 + vu))`.
pub fn velocity_addition_check(v: f64, alpha: usize, beta: usize) -> (f64, f64) {
    let (a, b) = (alpha as f64, beta as f64);
    let plus = C64::new(((1.0 + v) / 2.0).max(0.0).sqrt() / b.sqrt(), 0.0);
    let minus = C64::new(((1.0 - v) / 2.0).max(0.0).sqrt() / a.sqrt(), 0.0);
    let measured = velocity_of(&[plus], &[minus]).unwrap_or(0.0);
    let u = (a - b) / (a + b);
    (measured, (v + u) / (1.0 + v * u))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeanVelocity {
    /// `Σ |ψ₊|² − |ψ₋|²` over the layer.
    pub sigma3: f64,
    /// `Σ p(c) v(c)` with `p` the layer-normalized density.
    pub weighted: f64,
}

/// Mean velocity on the layer `t`, in both the `⟨σ₃⟩` form and the
/// density-weighted form. The first is not renormalized.
pub fn mean_velocity(f: &SpacetimeField, t: i64) -> Result<MeanVelocity> {
    let layer = f.window().layer(t);
    let total = f.layer_norm(t);
    if layer.is_empty() || total == 0.0 {
        return Err(LatticeError::EmptyLayer(t));
    }
    let mut sigma3 = 0.0;
    let mut weighted = 0.0;
    for c in layer {
        let (p, m) = (norm_sqr(&f.plus(c)), norm_sqr(&f.minus(c)));
        sigma3 += p - m;
        if let Some(v) = velocity_of(&f.plus(c), &f.minus(c)) {
            weighted += (p + m) / total * v;
        }
    }
    Ok(MeanVelocity { sigma3, weighted })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Window;

    fn point_field(p: f64, m: f64) -> SpacetimeField {
        let mut f = SpacetimeField::new(Window::new(0, 0, 1, 1).unwrap(), 1, 0.1);
        f.set_plus(LightCoord::new(0, 0), &[C64::new(p, 0.0)]).unwrap();
        f.set_minus(LightCoord::new(0, 0), &[C64::new(0.0, m)]).unwrap();
        f
    }

    #[test]
    fn local_values() {
        let o = LightCoord::new(0, 0);
        assert_eq!(local_velocity(&point_field(1.0, 0.0), o).unwrap(), 1.0);
        assert_eq!(local_velocity(&point_field(0.3, 0.3), o).unwrap(), 0.0);
        let v = local_velocity(&point_field(3f64.sqrt() / 2.0, 0.5), o).unwrap();
        assert!((v - 0.5).abs() < 1e-15);
        assert!(matches!(local_velocity(&point_field(0.0, 0.0), o), Err(LatticeError::ZeroDensity { .. })));
    }

    #[test]
    fn addition_examples() {
        let (m, p) = velocity_addition_check(0.0, 3, 1);
        assert!((m - 0.5).abs() < 1e-15 && (p - 0.5).abs() < 1e-15);
        let (m, p) = velocity_addition_check(1.0, 2, 3);
        assert_eq!((m, p), (1.0, 1.0));
        let (m, p) = velocity_addition_check(0.2, 2, 3);
        assert!(m.abs() < 1e-15 && p.abs() < 1e-15, "{m} {p}");
    }

    #[test]
    fn mean_forms_agree() {
        let f = point_field(0.6, 0.8);
        let mv = mean_velocity(&f, 0).unwrap();
        assert!((mv.sigma3 - mv.weighted).abs() < 1e-15);
        assert!(matches!(mean_velocity(&f, 5), Err(LatticeError::EmptyLayer(5))));
    }
}
