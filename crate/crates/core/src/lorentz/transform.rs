//! Rewriting fields point by patch.

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use super::{EncodingPair, LorentzParams};
use crate::error::{LatticeError, Result};
use crate::lattice::{LightCoord, SpacetimeField, Window};
use crate::linalg::max_abs_diff;
use crate::models::{Gate, Model};
use crate::patch::{build_patch, CellInputs, Combination};

/// Deviation allowed when checking that wires lie in an encoding's image.
pub const SUBSPACE_TOL: f64 = 1e-10;

fn check_field_model(f: &SpacetimeField, model: &Model) -> Result<()> {
    let (dp, dm) = model.wire_dims();
    if matches!(model, Model::ClockQca { .. }) {
        return Err(LatticeError::InvalidArgument(
            "clock_qca wires are entangled; field transforms apply to walks only".into(),
        ));
    }
    if f.plus_dim() != dp || f.minus_dim() != dm {
        return Err(LatticeError::DimensionMismatch(format!(
            "field wires are ({}, {}), model `{}` needs ({dp}, {dm})",
            f.plus_dim(),
            f.minus_dim(),
            model.name()
        )));
    }
    Ok(())
}

/// Source point of a transformed point.
pub fn source_of(c: LightCoord, alpha: usize, beta: usize) -> LightCoord {
    LightCoord::new(c.r.div_euclid(alpha as i64), c.l.div_euclid(beta as i64))
}

/// `L_{α,β}`: every point becomes an α×β patch fed by its encoded wires.
pub fn lorentz_transform_field(f: &SpacetimeField, model: &Model, params: &LorentzParams) -> Result<SpacetimeField> {
    check_field_model(f, model)?;
    let mapped = params.mapped_model(model)?;
    let pair = EncodingPair::for_model(model, params.alpha, params.beta)?;
    let patch = build_patch(&mapped.gate()?, params.alpha, params.beta)?;
    let (a, b) = (params.alpha, params.beta);
    let w = f.window();
    let out_window = Window::new(w.r_min * a as i64, w.l_min * b as i64, w.n_r * a, w.n_l * b)?;
    let (dp, dm) = mapped.wire_dims();
    let mut out = SpacetimeField::with_dims(out_window, dp, dm, f.eps);
    out.model = mapped.name().to_string();
    out.params = mapped.params_json();
    if a == 1 && b == 1 {
        // layers of the stretched field are not whole layers of the source
        out.layers = f.layers;
    }

    let coords: Vec<LightCoord> = w.coords().collect();
    let filled: Vec<(LightCoord, Vec<Vec<CellInputs>>)> = coords
        .par_iter()
        .map(|&c| {
            let plus = pair.plus.wires(&pair.plus.apply(&f.plus(c)));
            let minus = pair.minus.wires(&pair.minus.apply(&f.minus(c)));
            patch.fill(&plus, &minus).map(|(cells, _)| (c, cells))
        })
        .collect::<Result<_>>()?;
    for (c, cells) in filled {
        for (i, row) in cells.iter().enumerate() {
            for (j, cell) in row.iter().enumerate() {
                let p = LightCoord::new(c.r * a as i64 + i as i64, c.l * b as i64 + j as i64);
                out.set_plus(p, &cell.plus)?;
                out.set_minus(p, &cell.minus)?;
            }
        }
    }
    Ok(out)
}

/// Largest difference between the outgoing wires of each patch and the
/// incoming wires stored at the neighbouring patches. Only patches whose
/// source time lies in `[t0, t1 - 1]` are compared, when a range is given.
pub fn gluing_mismatch(
    transformed: &SpacetimeField,
    mapped: &Model,
    alpha: usize,
    beta: usize,
    source_layers: Option<(i64, i64)>,
) -> Result<f64> {
    let patch = build_patch(&mapped.gate()?, alpha, beta)?;
    if patch.combination != Combination::DirectSum {
        return Err(LatticeError::InvalidArgument("field gluing applies to walks only".into()));
    }
    let w = transformed.window();
    let (a, b) = (alpha as i64, beta as i64);
    let sources = source_window(&w, alpha, beta)?;
    let mut worst = 0.0f64;
    for s in sources.coords() {
        if let Some((t0, t1)) = source_layers {
            if s.t() < t0 || s.t() >= t1 {
                continue;
            }
        }
        let corner = LightCoord::new(s.r * a, s.l * b);
        let plus: Vec<Vec<C64>> = (0..b).map(|j| transformed.plus(LightCoord::new(corner.r, corner.l + j))).collect();
        let minus: Vec<Vec<C64>> = (0..a).map(|i| transformed.minus(LightCoord::new(corner.r + i, corner.l))).collect();
        let (p_out, m_out) = patch.apply_wires(&plus, &minus)?;
        for (j, v) in p_out.iter().enumerate() {
            let next = LightCoord::new(corner.r + a, corner.l + j as i64);
            if w.contains(next) {
                worst = worst.max(max_abs_diff(v, &transformed.plus(next)));
            }
        }
        for (i, v) in m_out.iter().enumerate() {
            let next = LightCoord::new(corner.r + i as i64, corner.l + b);
            if w.contains(next) {
                worst = worst.max(max_abs_diff(v, &transformed.minus(next)));
            }
        }
    }
    Ok(worst)
}

fn source_window(w: &Window, alpha: usize, beta: usize) -> Result<Window> {
    let (a, b) = (alpha as i64, beta as i64);
    if w.r_min.rem_euclid(a) != 0 || w.l_min.rem_euclid(b) != 0 || w.n_r % alpha != 0 || w.n_l % beta != 0 {
        return Err(LatticeError::InvalidArgument(format!(
            "window ({}, {}, {}, {}) is not tiled by {alpha}x{beta} patches",
            w.r_min, w.l_min, w.n_r, w.n_l
        )));
    }
    Window::new(w.r_min / a, w.l_min / b, w.n_r / alpha, w.n_l / beta)
}

/// Re-applies the gate at every selected point and compares with the stored
/// outgoing wires (when those lie in the window).
pub fn solution_residual(f: &SpacetimeField, model: &Model, select: impl Fn(LightCoord) -> bool + Sync) -> Result<f64> {
    let coin = match model.gate()? {
        Gate::Walk(c) => c,
        Gate::Scatter(_) => return Err(LatticeError::InvalidArgument("walk models only".into())),
    };
    if coin.plus_dim != f.plus_dim() || coin.minus_dim != f.minus_dim() {
        return Err(LatticeError::DimensionMismatch("field and model wire dimensions differ".into()));
    }
    let w = f.window();
    let coords: Vec<LightCoord> = w.coords().filter(|&c| select(c)).collect();
    Ok(coords
        .par_iter()
        .map(|&c| {
            let (p, m) = coin.apply(&f.plus(c), &f.minus(c));
            let up = LightCoord::new(c.r + 1, c.l);
            let left = LightCoord::new(c.r, c.l + 1);
            let mut e = 0.0f64;
            if w.contains(up) {
                e = e.max(max_abs_diff(&p, &f.plus(up)));
            }
            if w.contains(left) {
                e = e.max(max_abs_diff(&m, &f.minus(left)));
            }
            e
        })
        .reduce(|| 0.0, f64::max))
}

/// `L_{α,β}⁻¹` on its image: reads each patch corner, checks the wires lie in
/// the encoding subspace, and decodes them. Interiors are discarded.
pub fn unzoom_field(transformed: &SpacetimeField, mapped: &Model, params: &LorentzParams) -> Result<SpacetimeField> {
    let (alpha, beta) = (params.alpha, params.beta);
    let original = params.mass_map()?.invert(mapped, alpha, beta)?;
    check_field_model(transformed, mapped)?;
    let pair = EncodingPair::for_model(&original, alpha, beta)?;
    let sources = source_window(&transformed.window(), alpha, beta)?;
    let (dp, dm) = original.wire_dims();
    let mut out = SpacetimeField::with_dims(sources, dp, dm, transformed.eps);
    out.model = original.name().to_string();
    out.params = original.params_json();
    let (a, b) = (alpha as i64, beta as i64);
    for s in sources.coords() {
        let corner = LightCoord::new(s.r * a, s.l * b);
        let plus: Vec<C64> = (0..b).flat_map(|j| transformed.plus(LightCoord::new(corner.r, corner.l + j))).collect();
        let minus: Vec<C64> = (0..a).flat_map(|i| transformed.minus(LightCoord::new(corner.r + i, corner.l))).collect();
        let deviation = pair.plus.subspace_deviation(&plus).max(pair.minus.subspace_deviation(&minus));
        if deviation > SUBSPACE_TOL {
            return Err(LatticeError::SubspaceViolation { coord: corner, deviation });
        }
        out.set_plus(s, &pair.plus.adjoint_apply(&plus))?;
        out.set_minus(s, &pair.minus.adjoint_apply(&minus))?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::evolve::{evolve_model, InitialLayer};
    use crate::models::InnerCoin;

    fn delta_right(model: &Model, steps: usize) -> SpacetimeField {
        let (dp, dm) = model.wire_dims();
        let mut plus = vec![C64::new(0.0, 0.0); dp];
        plus[0] = C64::new(1.0, 0.0);
        let init = InitialLayer { t0: 0, r_start: 0, plus: vec![plus], minus: vec![vec![C64::new(0.0, 0.0); dm]] };
        evolve_model(model, &init, steps).unwrap()
    }

    #[test]
    fn unit_transform_is_identity() {
        let m = Model::Dirac { m: 1.0, eps: 0.1 };
        let f = delta_right(&m, 4);
        let g = lorentz_transform_field(&f, &m, &LorentzParams::for_model(&m, 1, 1).unwrap()).unwrap();
        assert_eq!(g.plus_data(), f.plus_data());
        assert_eq!(g.minus_data(), f.minus_data());
    }

    #[test]
    fn massless_spread_over_two_wires() {
        let m = Model::Dirac { m: 0.0, eps: 0.1 };
        let f = delta_right(&m, 0);
        let g = lorentz_transform_field(&f, &m, &LorentzParams::for_model(&m, 1, 2).unwrap()).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((g.plus(LightCoord::new(0, 0))[0].re - h).abs() < 1e-15);
        assert!((g.plus(LightCoord::new(0, 1))[0].re - h).abs() < 1e-15);
    }

    #[test]
    fn clock_transform_is_a_solution() {
        let m = Model::ClockQw { p: 2, q: 1, coin: InnerCoin::from_mass(1.0, 0.3), eps: 0.3 };
        let f = delta_right(&m, 12);
        let params = LorentzParams::for_model(&m, 2, 3).unwrap();
        let g = lorentz_transform_field(&f, &m, &params).unwrap();
        let mapped = params.mapped_model(&m).unwrap();
        let res = solution_residual(&g, &mapped, |c| {
            let t = source_of(c, 2, 3).t();
            (0..12).contains(&t)
        })
        .unwrap();
        assert!(res < 1e-12, "residual {res}");
        assert!(gluing_mismatch(&g, &mapped, 2, 3, Some((0, 12))).unwrap() < 1e-12);
    }

    #[test]
    fn corrupted_wire_is_rejected() {
        let m = Model::Dirac { m: 1.0, eps: 0.1 };
        let f = delta_right(&m, 3);
        let params = LorentzParams::for_model(&m, 2, 1).unwrap();
        let mut g = lorentz_transform_field(&f, &m, &params).unwrap();
        let mapped = params.mapped_model(&m).unwrap();
        g.set_minus(LightCoord::new(3, 1), &[C64::new(0.5, 0.0)]).unwrap();
        let err = unzoom_field(&g, &mapped, &params).unwrap_err();
        assert!(matches!(err, LatticeError::SubspaceViolation { coord, .. } if coord == LightCoord::new(2, 1)));
    }
}
