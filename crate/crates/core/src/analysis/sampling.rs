//! Coarse sampling of a clock-walk field: one value per `p×q` patch.

use num_complex::Complex64 as C64;
use serde_json::json;

use crate::error::{LatticeError, Result};
use crate::lattice::{LightCoord, SpacetimeField, Window};
use crate::linalg::norm_sqr;
use crate::models::ClockWalkSpec;

/// Reads the reset-counter component of each wire at the patch corner
/// `(pR, qL)` and weights it by `1/√q` (right) and `1/√p` (left). Partial
/// patches at the window edge are dropped with a warning.
pub fn sampled_continuum_field(f: &SpacetimeField, spec: &ClockWalkSpec) -> Result<SpacetimeField> {
    if f.plus_dim() != spec.p || f.minus_dim() != spec.q {
        return Err(LatticeError::DimensionMismatch(format!(
            "field wires are ({}, {}), clock walk needs ({}, {})",
            f.plus_dim(),
            f.minus_dim(),
            spec.p,
            spec.q
        )));
    }
    let w = f.window();
    let (p, q) = (spec.p as i64, spec.q as i64);
    let r_lo = w.r_min.div_euclid(p) + i64::from(w.r_min.rem_euclid(p) != 0);
    let l_lo = w.l_min.div_euclid(q) + i64::from(w.l_min.rem_euclid(q) != 0);
    let r_hi = (w.r_max() + 1).div_euclid(p);
    let l_hi = (w.l_max() + 1).div_euclid(q);
    if r_hi <= r_lo || l_hi <= l_lo {
        return Err(LatticeError::InvalidArgument(format!("window holds no complete {}x{} patch", spec.p, spec.q)));
    }
    if r_lo * p != w.r_min || l_lo * q != w.l_min || r_hi * p != w.r_max() + 1 || l_hi * q != w.l_max() + 1 {
        log::warn!("sampling drops partial {}x{} patches at the window edge", spec.p, spec.q);
    }
    let out_w = Window::new(r_lo, l_lo, (r_hi - r_lo) as usize, (l_hi - l_lo) as usize)?;
    let mut out = SpacetimeField::new(out_w, 1, f.eps);
    out.model = "sampled_clock_qw".into();
    out.params.insert("p".into(), json!(spec.p));
    out.params.insert("q".into(), json!(spec.q));
    let (wp, wm) = (1.0 / (q as f64).sqrt(), 1.0 / (p as f64).sqrt());
    for c in out_w.coords() {
        let corner = LightCoord::new(c.r * p, c.l * q);
        out.set_plus(c, &[f.plus(corner)[0] * wp])?;
        out.set_minus(c, &[f.minus(corner)[0] * wm])?;
    }
    Ok(out)
}

/// Layer norm of a sampled field with each right wire counted `q` times
/// and each left wire `p` times, the multiplicities it stands for.
pub fn sampled_layer_norm(f: &SpacetimeField, t: i64, p: usize, q: usize) -> f64 {
    f.window().layer(t).into_iter().map(|c| q as f64 * norm_sqr(&f.plus(c)) + p as f64 * norm_sqr(&f.minus(c))).sum()
}

/// Reweights a sampled field back to plain Dirac wires (`√q`, `√p`).
pub fn unweight_sampled(f: &SpacetimeField, p: usize, q: usize) -> Result<SpacetimeField> {
    let mut out = SpacetimeField::new(f.window(), 1, f.eps);
    out.copy_meta(f);
    let (wp, wm) = ((q as f64).sqrt(), (p as f64).sqrt());
    for c in f.window().coords() {
        out.set_plus(c, &[f.plus(c)[0] * C64::new(wp, 0.0)])?;
        out.set_minus(c, &[f.minus(c)[0] * C64::new(wm, 0.0)])?;
    }
    Ok(out)
}
