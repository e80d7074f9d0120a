//! Second-order stencils satisfied by every component of a clock-walk
//! solution, and the small-ε behaviour of the coin entries.
//!
//! On solutions, with `(a, b, c, d)` the inner coin,
//! `ψ(R, L) − a ψ(R−p, L) − d ψ(R, L−q) + det(C) ψ(R−p, L−q) = 0`
//! holds componentwise for the incoming wires at every point.

use num_complex::Complex64 as C64;

use crate::error::{LatticeError, Result};
use crate::lattice::{LightCoord, SpacetimeField};
use crate::models::{ClockWalkSpec, InnerCoin};

fn layers_of(f: &SpacetimeField) -> (i64, i64) {
    f.layers.unwrap_or_else(|| f.window().t_range())
}

fn check_dims(f: &SpacetimeField, spec: &ClockWalkSpec) -> Result<()> {
    if f.plus_dim() != spec.p || f.minus_dim() != spec.q {
        return Err(LatticeError::DimensionMismatch(format!(
            "field wires are ({}, {}), clock walk needs ({}, {})",
            f.plus_dim(),
            f.minus_dim(),
            spec.p,
            spec.q
        )));
    }
    let (t0, t1) = layers_of(f);
    let needed = spec.p + spec.q + 1;
    let available = (t1 - t0 + 1).max(0) as usize;
    if available < needed {
        return Err(LatticeError::InsufficientLayers { needed, available });
    }
    Ok(())
}

fn max_stencil(f: &SpacetimeField, terms: &[(C64, LightCoord)], anchors: impl Iterator<Item = LightCoord>) -> f64 {
    let w = f.window();
    let (t0, t1) = layers_of(f);
    let mut worst = 0.0f64;
    for base in anchors {
        let pts: Vec<LightCoord> = terms.iter().map(|(_, o)| LightCoord::new(base.r + o.r, base.l + o.l)).collect();
        if !pts.iter().all(|&c| w.contains(c) && (t0..=t1).contains(&c.t())) {
            continue;
        }
        let vals: Vec<Vec<C64>> = pts.iter().map(|&c| f.point(c)).collect();
        for k in 0..vals[0].len() {
            let s: C64 = terms.iter().zip(&vals).map(|((coef, _), v)| coef * v[k]).sum();
            worst = worst.max(s.norm());
        }
    }
    worst
}

/// Max over interior points and components of the lightlike stencil.
pub fn kg_decoupling_residual(f: &SpacetimeField, spec: &ClockWalkSpec) -> Result<f64> {
    check_dims(f, spec)?;
    let (p, q) = (spec.p as i64, spec.q as i64);
    let InnerCoin { a, d, .. } = spec.inner_coin;
    let det = spec.inner_coin.det();
    let one = C64::new(1.0, 0.0);
    // offsets relative to the bottom corner (R−p, L−q)
    let terms = [
        (one, LightCoord::new(p, q)),
        (-a, LightCoord::new(0, q)),
        (-d, LightCoord::new(p, 0)),
        (det, LightCoord::new(0, 0)),
    ];
    Ok(max_stencil(f, &terms, f.window().coords()))
}

/// The stencil read off in `(t, x)` form with `T` the unit time shift and
/// `τ` the unit space shift:
/// `[T^{q+p} − a τ^{−q} T^p − d τ^p T^q + det τ^{p−q}] ψ = 0`.
/// It agrees with [`kg_decoupling_residual`] only when `p = q`.
pub fn kg_literal_residual(f: &SpacetimeField, spec: &ClockWalkSpec) -> Result<f64> {
    check_dims(f, spec)?;
    let (p, q) = (spec.p as i64, spec.q as i64);
    let InnerCoin { a, d, .. } = spec.inner_coin;
    let det = spec.inner_coin.det();
    let one = C64::new(1.0, 0.0);
    // (dt, dx) offsets from the base point
    let tx = [(one, (p + q, 0)), (-a, (p, -q)), (-d, (q, p)), (det, (0, p - q))];
    let mut terms = Vec::with_capacity(4);
    for (coef, (dt, dx)) in tx {
        let o = LightCoord::from_tx(dt, dx).ok_or_else(|| {
            LatticeError::InvalidArgument(format!("stencil offset (t={dt}, x={dx}) is off the lattice"))
        })?;
        terms.push((coef, o));
    }
    Ok(max_stencil(f, &terms, f.window().coords()))
}

/// `(a(ε) − 1)/ε²` at `ε → 0`, by Richardson extrapolation from three
/// step sizes halving from `h0`.
fn second_coefficient(entry: impl Fn(f64) -> C64, h0: f64) -> C64 {
    let g = |e: f64| (entry(e) - 1.0) / (e * e);
    let (g1, g2, g3) = (g(h0), g(h0 / 2.0), g(h0 / 4.0));
    // error terms in ε² and ε⁴
    let r1 = (4.0 * g2 - g1) / 3.0;
    let r2 = (4.0 * g3 - g2) / 3.0;
    (16.0 * r2 - r1) / 15.0
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KgMassCheck {
    pub predicted_mass: f64,
    /// Extrapolated `ε²` coefficients of `a` and `d`.
    pub coeff_a: C64,
    pub coeff_d: C64,
    /// The value both should take, `−m²/2`.
    pub expected: f64,
}

/// Checks the `ε²` coefficients of a coin family against `−m²/2` to
/// `1e−10` relative and returns `m/√(pq)`.
pub fn kg_mass_check_family(p: usize, q: usize, m: f64, coin: impl Fn(f64) -> InnerCoin) -> Result<KgMassCheck> {
    if p == 0 || q == 0 {
        return Err(LatticeError::InvalidArgument("clock lengths must be positive".into()));
    }
    if !(m > 0.0) {
        return Err(LatticeError::InvalidArgument(format!("mass check needs m > 0, got {m}")));
    }
    let h0 = 0.04 / m;
    for e in [h0, h0 / 2.0, h0 / 4.0] {
        let det = coin(e).det();
        if (det - 1.0).norm() > 1e-12 {
            return Err(LatticeError::DeterminantNotOne(det));
        }
    }
    let coeff_a = second_coefficient(|e| coin(e).a, h0);
    let coeff_d = second_coefficient(|e| coin(e).d, h0);
    let expected = -m * m / 2.0;
    for (name, c) in [("a", coeff_a), ("d", coeff_d)] {
        let rel = (c - expected).norm() / expected.abs();
        if rel > 1e-10 {
            return Err(LatticeError::InvalidArgument(format!(
                "eps^2 coefficient of {name} is {c}, expected {expected} (relative error {rel:e})"
            )));
        }
    }
    Ok(KgMassCheck { predicted_mass: m / ((p * q) as f64).sqrt(), coeff_a, coeff_d, expected })
}

/// [`kg_mass_check_family`] for the default coin `a = d = cos(mε)`, after
/// checking that the spec's own coin has unit determinant.
pub fn kg_mass_check(spec: &ClockWalkSpec, m: f64) -> Result<KgMassCheck> {
    let det = spec.inner_coin.det();
    if (det - 1.0).norm() > 1e-12 {
        return Err(LatticeError::DeterminantNotOne(det));
    }
    kg_mass_check_family(spec.p, spec.q, m, |e| InnerCoin::from_mass(m, e))
}

/// `|a(ε) − 1 − s·ε²m²/2|` for `a = cos(mε)` at each ε.
pub fn coefficient_residuals(m: f64, eps_values: &[f64], sign: f64) -> Vec<f64> {
    eps_values
        .iter()
        .map(|&e| {
            let a = InnerCoin::from_mass(m, e).a.re;
            (a - 1.0 - sign * e * e * m * m / 2.0).abs()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::evolve::{evolve_model, InitialLayer};
    use crate::models::Model;

    fn solution(p: usize, q: usize, steps: usize) -> (SpacetimeField, ClockWalkSpec) {
        let coin = InnerCoin::from_mass(1.0, 0.2);
        let model = Model::ClockQw { p, q, coin, eps: 0.2 };
        let n = 6;
        let plus = (0..n)
            .map(|k| (0..p).map(|i| C64::new(((k * 7 + i * 3) % 5) as f64 - 2.0, (k + i) as f64 * 0.1)).collect())
            .collect();
        let minus =
            (0..n).map(|k| (0..q).map(|i| C64::new(((k * 3 + i) % 4) as f64 * 0.5, -(i as f64))).collect()).collect();
        let init = InitialLayer { t0: 0, r_start: 0, plus, minus };
        (evolve_model(&model, &init, steps).unwrap(), ClockWalkSpec::new(p, q, coin).unwrap())
    }

    #[test]
    fn dirac_case() {
        let (f, spec) = solution(1, 1, 30);
        assert!(kg_decoupling_residual(&f, &spec).unwrap() < 1e-10);
        assert!(kg_literal_residual(&f, &spec).unwrap() < 1e-10);
    }

    #[test]
    fn asymmetric_clock() {
        let (f, spec) = solution(2, 1, 40);
        assert!(kg_decoupling_residual(&f, &spec).unwrap() < 1e-10);
        // p + q odd puts the literal stencil off the lattice
        assert!(kg_literal_residual(&f, &spec).is_err());
        let (f, spec) = solution(3, 1, 40);
        assert!(kg_decoupling_residual(&f, &spec).unwrap() < 1e-10);
        assert!(kg_literal_residual(&f, &spec).unwrap() > 1e-3);
    }

    #[test]
    fn too_few_layers() {
        let (f, spec) = solution(2, 2, 3);
        assert!(matches!(
            kg_decoupling_residual(&f, &spec),
            Err(LatticeError::InsufficientLayers { needed: 5, available: 4 })
        ));
    }

    #[test]
    fn mass_examples() {
        let spec = ClockWalkSpec::new(1, 1, InnerCoin::from_mass(1.0, 0.1)).unwrap();
        assert!((kg_mass_check(&spec, 1.0).unwrap().predicted_mass - 1.0).abs() < 1e-15);
        let spec = ClockWalkSpec::new(4, 1, InnerCoin::from_mass(2.0, 0.1)).unwrap();
        assert!((kg_mass_check(&spec, 2.0).unwrap().predicted_mass - 1.0).abs() < 1e-15);
    }

    #[test]
    fn determinant_rejected() {
        let i = C64::new(0.0, 1.0);
        let coin = InnerCoin { a: i, b: C64::new(0.0, 0.0), c: C64::new(0.0, 0.0), d: C64::new(1.0, 0.0) };
        let spec = ClockWalkSpec::new(1, 1, coin).unwrap();
        assert!(matches!(kg_mass_check(&spec, 1.0), Err(LatticeError::DeterminantNotOne(_))));
    }
}
