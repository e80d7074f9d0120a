//! Lightlike grid, wire storage and index arithmetic.
//!
//! A point is addressed by integer lightlike indices `(r, l)` in units of the
//! lattice spacing. Each point stores the two wires entering it: `ψ₊(r, l)`
//! coming from `(r-1, l)` and `ψ₋(r, l)` coming from `(r, l-1)`.

use std::io::Write;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::error::{LatticeError, Result};
use crate::linalg::norm_sqr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LightCoord {
    pub r: i64,
    pub l: i64,
}

impl LightCoord {
    pub const fn new(r: i64, l: i64) -> Self {
        Self { r, l }
    }

    pub fn t(self) -> i64 {
        self.r + self.l
    }

    pub fn x(self) -> i64 {
        self.r - self.l
    }

    /// Inverse of [`coord_convert`]. `t` and `x` must have equal parity.
    pub fn from_tx(t: i64, x: i64) -> Option<Self> {
        if (t - x).rem_euclid(2) != 0 {
            return None;
        }
        Some(Self::new((t + x) / 2, (t - x) / 2))
    }
}

/// `(t, x) = (r + l, r - l)`.
pub fn coord_convert(c: LightCoord) -> (i64, i64) {
    (c.t(), c.x())
}

/// Largest multiple of `step` not exceeding `x`.
pub fn floor_multiple(x: i64, step: i64) -> i64 {
    assert!(step >= 1, "step must be positive");
    x.div_euclid(step) * step
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Plus,
    Minus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub r_min: i64,
    pub l_min: i64,
    pub n_r: usize,
    pub n_l: usize,
}

impl Window {
    pub fn new(r_min: i64, l_min: i64, n_r: usize, n_l: usize) -> Result<Self> {
        if n_r == 0 || n_l == 0 {
            return Err(LatticeError::InvalidArgument("window extents must be positive".into()));
        }
        Ok(Self { r_min, l_min, n_r, n_l })
    }

    pub fn r_max(&self) -> i64 {
        self.r_min + self.n_r as i64 - 1
    }

    pub fn l_max(&self) -> i64 {
        self.l_min + self.n_l as i64 - 1
    }

    pub fn contains(&self, c: LightCoord) -> bool {
        c.r >= self.r_min && c.r <= self.r_max() && c.l >= self.l_min && c.l <= self.l_max()
    }

    pub fn len(&self) -> usize {
        self.n_r * self.n_l
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn offset(&self, c: LightCoord) -> Option<usize> {
        self.contains(c).then(|| (c.r - self.r_min) as usize * self.n_l + (c.l - self.l_min) as usize)
    }

    /// All points, row-major over `(r, l)`.
    pub fn coords(&self) -> impl Iterator<Item = LightCoord> + '_ {
        (0..self.n_r as i64)
            .flat_map(move |dr| (0..self.n_l as i64).map(move |dl| LightCoord::new(self.r_min + dr, self.l_min + dl)))
    }

    /// Points of the window with `r + l = t`, by increasing `r`.
    pub fn layer(&self, t: i64) -> Vec<LightCoord> {
        let lo = self.r_min.max(t - self.l_max());
        let hi = self.r_max().min(t - self.l_min);
        (lo..=hi).map(|r| LightCoord::new(r, t - r)).collect()
    }

    pub fn t_range(&self) -> (i64, i64) {
        (self.r_min + self.l_min, self.r_max() + self.l_max())
    }

    pub fn x_range(&self) -> (i64, i64) {
        (self.r_min - self.l_max(), self.r_max() - self.l_min)
    }
}

/// Discrete wavefunction on a lightlike window.
#[derive(Clone, Debug, PartialEq)]
pub struct SpacetimeField {
    pub eps: f64,
    pub model: String,
    pub params: Map<String, Value>,
    /// Closed range of time layers holding evolved data, when known.
    pub layers: Option<(i64, i64)>,
    window: Window,
    plus_dim: usize,
    minus_dim: usize,
    plus: Vec<C64>,
    minus: Vec<C64>,
}

impl SpacetimeField {
    pub fn new(window: Window, wire_dim: usize, eps: f64) -> Self {
        Self::with_dims(window, wire_dim, wire_dim, eps)
    }

    /// Field whose right- and left-moving wires carry different dimensions.
    pub fn with_dims(window: Window, plus_dim: usize, minus_dim: usize, eps: f64) -> Self {
        assert!(plus_dim > 0 && minus_dim > 0, "wire dimension must be positive");
        Self {
            eps,
            model: String::new(),
            params: Map::new(),
            layers: None,
            window,
            plus_dim,
            minus_dim,
            plus: vec![C64::new(0.0, 0.0); window.len() * plus_dim],
            minus: vec![C64::new(0.0, 0.0); window.len() * minus_dim],
        }
    }

    pub fn window(&self) -> Window {
        self.window
    }

    /// Dimension of the `ψ₊` wires.
    pub fn wire_dim(&self) -> usize {
        self.plus_dim
    }

    pub fn plus_dim(&self) -> usize {
        self.plus_dim
    }

    pub fn minus_dim(&self) -> usize {
        self.minus_dim
    }

    pub fn dim(&self, side: Side) -> usize {
        match side {
            Side::Plus => self.plus_dim,
            Side::Minus => self.minus_dim,
        }
    }

    pub fn contains(&self, c: LightCoord) -> bool {
        self.window.contains(c)
    }

    fn slot(&self, c: LightCoord, side: Side) -> Option<std::ops::Range<usize>> {
        let d = self.dim(side);
        self.window.offset(c).map(|o| o * d..(o + 1) * d)
    }

    /// Stored vector, or zeros outside the window.
    pub fn get(&self, c: LightCoord, side: Side) -> Vec<C64> {
        match self.slot(c, side) {
            Some(range) => match side {
                Side::Plus => self.plus[range].to_vec(),
                Side::Minus => self.minus[range].to_vec(),
            },
            None => vec![C64::new(0.0, 0.0); self.dim(side)],
        }
    }

    pub fn plus(&self, c: LightCoord) -> Vec<C64> {
        self.get(c, Side::Plus)
    }

    pub fn minus(&self, c: LightCoord) -> Vec<C64> {
        self.get(c, Side::Minus)
    }

    /// `ψ₊ ⊕ ψ₋` at a point.
    pub fn point(&self, c: LightCoord) -> Vec<C64> {
        let mut v = self.plus(c);
        v.extend(self.minus(c));
        v
    }

    /// Writes a wire value. A nonzero write outside the window is an error;
    /// zero writes there are dropped.
    pub fn set(&mut self, c: LightCoord, side: Side, value: &[C64]) -> Result<()> {
        let d = self.dim(side);
        if value.len() != d {
            return Err(LatticeError::DimensionMismatch(format!(
                "wire value has {} components, field wires carry {d}",
                value.len()
            )));
        }
        match self.slot(c, side) {
            Some(range) => {
                let store = match side {
                    Side::Plus => &mut self.plus,
                    Side::Minus => &mut self.minus,
                };
                store[range].copy_from_slice(value);
                Ok(())
            }
            None => {
                let amplitude = norm_sqr(value).sqrt();
                if amplitude > 0.0 {
                    Err(LatticeError::WindowOverflow { coord: c, amplitude })
                } else {
                    Ok(())
                }
            }
        }
    }

    pub fn set_plus(&mut self, c: LightCoord, value: &[C64]) -> Result<()> {
        self.set(c, Side::Plus, value)
    }

    pub fn set_minus(&mut self, c: LightCoord, value: &[C64]) -> Result<()> {
        self.set(c, Side::Minus, value)
    }

    pub fn density(&self, c: LightCoord) -> f64 {
        norm_sqr(&self.plus(c)) + norm_sqr(&self.minus(c))
    }

    /// `Σ_r ‖ψ(r, t - r)‖²` over the window.
    pub fn layer_norm(&self, t: i64) -> f64 {
        self.window.layer(t).into_iter().map(|c| self.density(c)).sum()
    }

    pub fn plus_data(&self) -> &[C64] {
        &self.plus
    }

    pub fn minus_data(&self) -> &[C64] {
        &self.minus
    }

    /// Copies metadata (eps, model, params) from another field.
    pub fn copy_meta(&mut self, other: &SpacetimeField) {
        self.eps = other.eps;
        self.model = other.model.clone();
        self.params = other.params.clone();
    }

    pub fn to_json(&self) -> Value {
        let wires = |data: &[C64], d: usize| -> Value {
            Value::Array(
                data.chunks(d).map(|w| Value::Array(w.iter().map(|z| json!([z.re, z.im])).collect())).collect(),
            )
        };
        let mut meta = Map::new();
        meta.insert("eps".into(), json!(self.eps));
        meta.insert("wire_dim".into(), json!(self.plus_dim));
        if self.minus_dim != self.plus_dim {
            meta.insert("minus_dim".into(), json!(self.minus_dim));
        }
        meta.insert("model".into(), json!(self.model));
        meta.insert("params".into(), Value::Object(self.params.clone()));
        if let Some((t0, t1)) = self.layers {
            meta.insert("layers".into(), json!([t0, t1]));
        }
        json!({
            "meta": meta,
            "window": self.window,
            "plus": wires(&self.plus, self.plus_dim),
            "minus": wires(&self.minus, self.minus_dim),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |what: &str| LatticeError::InvalidArgument(format!("field JSON: {what}"));
        let meta = v.get("meta").ok_or_else(|| bad("missing `meta`"))?;
        let window: Window = serde_json::from_value(v.get("window").cloned().ok_or_else(|| bad("missing `window`"))?)?;
        let window = Window::new(window.r_min, window.l_min, window.n_r, window.n_l)?;
        let eps = meta.get("eps").and_then(Value::as_f64).ok_or_else(|| bad("missing `meta.eps`"))?;
        let plus_dim =
            meta.get("wire_dim").and_then(Value::as_u64).ok_or_else(|| bad("missing `meta.wire_dim`"))? as usize;
        let minus_dim = meta.get("minus_dim").and_then(Value::as_u64).map_or(plus_dim, |d| d as usize);
        if plus_dim == 0 || minus_dim == 0 {
            return Err(bad("wire dimension must be positive"));
        }
        let mut field = Self::with_dims(window, plus_dim, minus_dim, eps);
        field.model = meta.get("model").and_then(Value::as_str).unwrap_or_default().to_string();
        if let Some(Value::Object(p)) = meta.get("params") {
            field.params = p.clone();
        }
        if let Some(Value::Array(l)) = meta.get("layers") {
            if let [Some(t0), Some(t1)] = [l.first().and_then(Value::as_i64), l.get(1).and_then(Value::as_i64)] {
                field.layers = Some((t0, t1));
            }
        }
        let read = |key: &str, d: usize| -> Result<Vec<C64>> {
            let rows = v.get(key).and_then(Value::as_array).ok_or_else(|| bad(&format!("missing `{key}`")))?;
            if rows.len() != window.len() {
                return Err(bad(&format!("`{key}` has {} points, window has {}", rows.len(), window.len())));
            }
            let mut out = Vec::with_capacity(rows.len() * d);
            for row in rows {
                let comps = row.as_array().ok_or_else(|| bad("wire value is not an array"))?;
                if comps.len() != d {
                    return Err(LatticeError::DimensionMismatch(format!(
                        "`{key}` wire has {} components, expected {d}",
                        comps.len()
                    )));
                }
                for z in comps {
                    let pair: [f64; 2] = serde_json::from_value(z.clone())?;
                    out.push(C64::new(pair[0], pair[1]));
                }
            }
            Ok(out)
        };
        field.plus = read("plus", plus_dim)?;
        field.minus = read("minus", minus_dim)?;
        Ok(field)
    }

    /// One row per point: `t,x,|psi_plus|^2,|psi_minus|^2,density`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "t,x,plus_sq,minus_sq,density")?;
        let mut coords: Vec<_> = self.window.coords().collect();
        coords.sort_by_key(|c| (c.t(), c.x()));
        for c in coords {
            let p = norm_sqr(&self.plus(c));
            let m = norm_sqr(&self.minus(c));
            writeln!(out, "{},{},{:.17e},{:.17e},{:.17e}", c.t(), c.x(), p, m, p + m)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floor_multiple_examples() {
        assert_eq!(floor_multiple(7, 3), 6);
        assert_eq!(floor_multiple(-1, 2), -2);
        assert_eq!(floor_multiple(6, 3), 6);
        for x in -50..50 {
            for s in 1..7 {
                let f = floor_multiple(x, s);
                assert!(f <= x && x < f + s && f % s == 0);
            }
        }
    }

    #[test]
    fn coord_round_trip_exhaustive() {
        assert_eq!(coord_convert(LightCoord::new(0, 0)), (0, 0));
        assert_eq!(coord_convert(LightCoord::new(1, 0)), (1, 1));
        assert_eq!(coord_convert(LightCoord::new(2, 3)), (5, -1));
        for r in -100..=100 {
            for l in -100..=100 {
                let c = LightCoord::new(r, l);
                let (t, x) = coord_convert(c);
                assert_eq!(LightCoord::from_tx(t, x), Some(c));
            }
        }
        assert_eq!(LightCoord::from_tx(1, 0), None);
    }

    #[test]
    fn storage_round_trip_and_zero_outside() {
        let w = Window::new(-2, 3, 4, 5).unwrap();
        let mut f = SpacetimeField::new(w, 2, 0.1);
        let v = [C64::new(0.25, -1.0), C64::new(3.0, 0.5)];
        let corner = LightCoord::new(1, 7);
        f.set_plus(corner, &v).unwrap();
        assert_eq!(f.plus(corner), v.to_vec());
        assert_eq!(f.plus(corner), v.to_vec());
        assert_eq!(f.minus(corner), vec![C64::new(0.0, 0.0); 2]);
        assert_eq!(f.plus(LightCoord::new(2, 7)), vec![C64::new(0.0, 0.0); 2]);
        assert_eq!(f.plus(LightCoord::new(-2, 3)), vec![C64::new(0.0, 0.0); 2]);
    }

    #[test]
    fn nonzero_write_outside_is_reported() {
        let w = Window::new(0, 0, 2, 2).unwrap();
        let mut f = SpacetimeField::new(w, 1, 0.1);
        let err = f.set_minus(LightCoord::new(0, 2), &[C64::new(1.0, 0.0)]).unwrap_err();
        assert!(matches!(err, LatticeError::WindowOverflow { coord, .. } if coord == LightCoord::new(0, 2)));
        f.set_minus(LightCoord::new(0, 2), &[C64::new(0.0, 0.0)]).unwrap();
    }

    #[test]
    fn json_round_trip_with_unequal_dims() {
        let w = Window::new(0, -1, 2, 3).unwrap();
        let mut f = SpacetimeField::with_dims(w, 2, 1, 0.05);
        f.model = "clock_qw".into();
        f.layers = Some((-1, 2));
        f.set_plus(LightCoord::new(1, 0), &[C64::new(1.0, 2.0), C64::new(-0.5, 0.0)]).unwrap();
        f.set_minus(LightCoord::new(0, 1), &[C64::new(0.0, 1.0)]).unwrap();
        let back = SpacetimeField::from_json(&f.to_json()).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn layer_enumeration() {
        let w = Window::new(0, 0, 3, 3).unwrap();
        assert_eq!(w.layer(0), vec![LightCoord::new(0, 0)]);
        assert_eq!(w.layer(2).len(), 3);
        assert_eq!(w.layer(4), vec![LightCoord::new(2, 2)]);
        assert!(w.layer(5).is_empty());
    }
}
