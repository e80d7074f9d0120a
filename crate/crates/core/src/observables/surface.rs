//! Zig-zag Cauchy surfaces and the conserved current through them.
//!
//! A surface is a sequence of steps between faces of the lattice. Face
//! `F(a, b)` is the unit square with lower corner `(a, b)`. An `R` step goes
//! from `F(a, b)` to `F(a, b-1)` and crosses `ψ₊(a+1, b)`; an `L` step goes
//! to `F(a+1, b)` and crosses `ψ₋(a+1, b+1)`. The face before step 0 is
//! `origin - (1, 1)`.

use std::fmt;

use serde_json::{json, Value};

use crate::error::{LatticeError, Result};
use crate::lattice::{LightCoord, Side, SpacetimeField};
use crate::linalg::norm_sqr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Step {
    R,
    L,
}

impl Step {
    fn delta(self) -> (i64, i64) {
        match self {
            Step::R => (0, -1),
            Step::L => (1, 0),
        }
    }

    fn parity(n: i64) -> Self {
        if n.rem_euclid(2) == 0 {
            Step::L
        } else {
            Step::R
        }
    }

    fn from_char(c: char) -> Result<Self> {
        match c {
            'R' => Ok(Step::R),
            'L' => Ok(Step::L),
            other => Err(LatticeError::InvalidArgument(format!("surface label `{other}` is not R or L"))),
        }
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Step::R => "R",
            Step::L => "L",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CauchySurface {
    pub origin: LightCoord,
    pub window_start: i64,
    pub labels: Vec<Step>,
    /// Periodic pattern for `n < window_start`, anchored so that its last
    /// entry sits at `window_start - 1`. `None` means `L` on even `n`, `R`
    /// on odd `n`.
    pub tail_left: Option<Vec<Step>>,
    /// Periodic pattern for `n ≥ window_end`, starting at `window_end`.
    pub tail_right: Option<Vec<Step>>,
}

fn labels_string(v: &[Step]) -> String {
    v.iter().map(Step::to_string).collect()
}

fn parse_labels(s: &str) -> Result<Vec<Step>> {
    s.chars().map(Step::from_char).collect()
}

impl CauchySurface {
    /// The alternating surface through `origin`, with an explicit window
    /// `[window_start, window_start + len)`.
    pub fn alternating(origin: LightCoord, window_start: i64, len: usize) -> Self {
        Self {
            origin,
            window_start,
            labels: (0..len as i64).map(|k| Step::parity(window_start + k)).collect(),
            tail_left: None,
            tail_right: None,
        }
    }

    pub fn window_end(&self) -> i64 {
        self.window_start + self.labels.len() as i64
    }

    pub fn validate(&self) -> Result<()> {
        for tail in [&self.tail_left, &self.tail_right].into_iter().flatten() {
            if !(tail.contains(&Step::R) && tail.contains(&Step::L)) {
                return Err(LatticeError::InvalidArgument("surface tail pattern must contain both R and L".into()));
            }
        }
        Ok(())
    }

    pub fn label(&self, n: i64) -> Step {
        if n < self.window_start {
            match &self.tail_left {
                Some(p) => p[(n - self.window_start).rem_euclid(p.len() as i64) as usize],
                None => Step::parity(n),
            }
        } else if n >= self.window_end() {
            match &self.tail_right {
                Some(p) => p[(n - self.window_end()).rem_euclid(p.len() as i64) as usize],
                None => Step::parity(n),
            }
        } else {
            self.labels[(n - self.window_start) as usize]
        }
    }

    /// Longest run of equal labels in the explicit window padded by one tail
    /// period on each side.
    pub fn max_run(&self) -> usize {
        let pad = |t: &Option<Vec<Step>>| t.as_ref().map_or(2, Vec::len) as i64;
        let lo = self.window_start - pad(&self.tail_left);
        let hi = self.window_end() + pad(&self.tail_right);
        let mut best = 0;
        let mut run = 0;
        let mut prev = None;
        for n in lo..hi {
            let s = self.label(n);
            run = if Some(s) == prev { run + 1 } else { 1 };
            prev = Some(s);
            best = best.max(run);
        }
        best
    }

    /// Widens the explicit window to cover `[lo, hi)`, keeping every label.
    pub fn materialize(&mut self, lo: i64, hi: i64) {
        if lo < self.window_start {
            let k = self.window_start - lo;
            let mut front: Vec<Step> = (lo..self.window_start).map(|n| self.label(n)).collect();
            if let Some(p) = &self.tail_left {
                let len = p.len() as i64;
                let rot: Vec<Step> = (0..len).map(|i| p[(i - k).rem_euclid(len) as usize]).collect();
                self.tail_left = Some(rot);
            }
            front.extend(self.labels.drain(..));
            self.labels = front;
            self.window_start = lo;
        }
        if hi > self.window_end() {
            let end = self.window_end();
            let k = hi - end;
            let back: Vec<Step> = (end..hi).map(|n| self.label(n)).collect();
            if let Some(p) = &self.tail_right {
                let len = p.len() as i64;
                let rot: Vec<Step> = (0..len).map(|i| p[(i + k).rem_euclid(len) as usize]).collect();
                self.tail_right = Some(rot);
            }
            self.labels.extend(back);
        }
    }

    /// Face entered before step `n`.
    pub fn face_before(&self, n: i64) -> (i64, i64) {
        let (mut a, mut b) = (self.origin.r - 1, self.origin.l - 1);
        if n >= 0 {
            for k in 0..n {
                let (da, db) = self.label(k).delta();
                a += da;
                b += db;
            }
        } else {
            for k in n..0 {
                let (da, db) = self.label(k).delta();
                a -= da;
                b -= db;
            }
        }
        (a, b)
    }

    /// Wires crossed by steps `lo..hi`, in order.
    pub fn crossings(&self, lo: i64, hi: i64) -> Vec<(i64, Side, LightCoord)> {
        let (mut a, mut b) = self.face_before(lo);
        let mut out = Vec::with_capacity((hi - lo).max(0) as usize);
        for n in lo..hi {
            let s = self.label(n);
            let hit = match s {
                Step::R => (Side::Plus, LightCoord::new(a + 1, b)),
                Step::L => (Side::Minus, LightCoord::new(a + 1, b + 1)),
            };
            out.push((n, hit.0, hit.1));
            let (da, db) = s.delta();
            a += da;
            b += db;
        }
        out
    }

    /// Checks that steps `lo..hi` cross each right-moving and each
    /// left-moving line of their span exactly once.
    pub fn crosses_lines_once(&self, lo: i64, hi: i64) -> bool {
        let mut ls = Vec::new();
        let mut rs = Vec::new();
        for (_, side, c) in self.crossings(lo, hi) {
            match side {
                Side::Plus => ls.push(c.l),
                Side::Minus => rs.push(c.r),
            }
        }
        let contiguous = |v: &[i64], dir: i64| v.windows(2).all(|w| w[1] - w[0] == dir);
        contiguous(&ls, -1) && contiguous(&rs, 1)
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "origin": [self.origin.r, self.origin.l],
            "window_start": self.window_start,
            "labels": labels_string(&self.labels),
        });
        if let Some(t) = &self.tail_left {
            v["tail_left"] = json!(labels_string(t));
        }
        if let Some(t) = &self.tail_right {
            v["tail_right"] = json!(labels_string(t));
        }
        v
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |w: &str| LatticeError::InvalidArgument(format!("surface JSON: {w}"));
        let origin: [i64; 2] =
            serde_json::from_value(v.get("origin").cloned().ok_or_else(|| bad("missing `origin`"))?)?;
        let window_start =
            v.get("window_start").and_then(Value::as_i64).ok_or_else(|| bad("missing `window_start`"))?;
        let labels = parse_labels(v.get("labels").and_then(Value::as_str).ok_or_else(|| bad("missing `labels`"))?)?;
        let tail =
            |k: &str| -> Result<Option<Vec<Step>>> { v.get(k).and_then(Value::as_str).map(parse_labels).transpose() };
        let s = Self {
            origin: LightCoord::new(origin[0], origin[1]),
            window_start,
            labels,
            tail_left: tail("tail_left")?,
            tail_right: tail("tail_right")?,
        };
        s.validate()?;
        Ok(s)
    }
}

/// Exchanges the pair of steps `(n, n+1)`. When the pair straddles the
/// origin (`n = -1`) the origin moves with it.
pub fn swap_move(s: &CauchySurface, n: i64) -> Result<CauchySurface> {
    let (x, y) = (s.label(n), s.label(n + 1));
    if x == y {
        return Err(LatticeError::InvalidSwap { n });
    }
    let mut out = s.clone();
    out.materialize(n.min(out.window_start), (n + 2).max(out.window_end()));
    let i = (n - out.window_start) as usize;
    out.labels.swap(i, i + 1);
    if n == -1 {
        let shift = if x == Step::R { 1 } else { -1 };
        out.origin = LightCoord::new(out.origin.r + shift, out.origin.l + shift);
    }
    Ok(out)
}

fn expand(steps: &[Step], alpha: usize, beta: usize) -> Vec<Step> {
    steps
        .iter()
        .flat_map(|&s| {
            let k = if s == Step::L { alpha } else { beta };
            std::iter::repeat(s).take(k)
        })
        .collect()
}

/// Replaces each `L` by `L^α` and each `R` by `R^β`, outward from step 0,
/// and scales the origin to `(αr₀, βl₀)`.
pub fn transform_surface(s: &CauchySurface, alpha: usize, beta: usize) -> CauchySurface {
    let mut m = s.clone();
    m.materialize(m.window_start.min(0), m.window_end().max(0));
    let left_tail = m.tail_left.clone().unwrap_or_else(|| {
        // period-2 pattern anchored at window_start
        (0..2).map(|k| Step::parity(m.window_start + k)).collect()
    });
    let right_tail = m.tail_right.clone().unwrap_or_else(|| (0..2).map(|k| Step::parity(m.window_end() + k)).collect());
    let split = (-m.window_start) as usize;
    let neg = expand(&m.labels[..split], alpha, beta);
    let pos = expand(&m.labels[split..], alpha, beta);
    let window_start = -(neg.len() as i64);
    let mut labels = neg;
    labels.extend(pos);
    CauchySurface {
        origin: LightCoord::new(alpha as i64 * s.origin.r, beta as i64 * s.origin.l),
        window_start,
        labels,
        tail_left: Some(expand(&left_tail, alpha, beta)),
        tail_right: Some(expand(&right_tail, alpha, beta)),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Contribution {
    pub n: i64,
    pub side: Side,
    pub coord: LightCoord,
    pub current: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceNorm {
    pub value: f64,
    pub contributions: Vec<Contribution>,
}

/// `Σ_n j(n)` over every wire the surface crosses within the field's
/// x-extent.
pub fn surface_norm(f: &SpacetimeField, s: &CauchySurface) -> Result<SurfaceNorm> {
    s.validate()?;
    let w = f.window();
    let (xmin, xmax) = w.x_range();
    let x0 = s.origin.r - s.origin.l;
    // step n crosses a point with x in {x0 + n, x0 + n + 1}
    let (lo, hi) = (xmin - x0 - 1, xmax - x0 + 1);
    let mut contributions = Vec::new();
    let mut value = 0.0;
    for (n, side, c) in s.crossings(lo, hi) {
        if let (Some((t0, t1)), true) = (f.layers, w.contains(c)) {
            if c.t() < t0 || c.t() > t1 {
                return Err(LatticeError::InvalidArgument(format!(
                    "surface step {n} crosses (r={}, l={}) outside the evolved layers [{t0}, {t1}]",
                    c.r, c.l
                )));
            }
        }
        let current = norm_sqr(&f.get(c, side));
        if current == 0.0 {
            continue;
        }
        if n < s.window_start || n >= s.window_end() {
            return Err(LatticeError::SupportEscapesSurface { n });
        }
        value += current;
        contributions.push(Contribution { n, side, coord: c, current });
    }
    Ok(SurfaceNorm { value, contributions })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Window;
    use num_complex::Complex64 as C64;

    #[test]
    fn alternating_surface_crosses_layer_zero() {
        let s = CauchySurface::alternating(LightCoord::new(0, 0), -4, 12);
        let cr = s.crossings(-1, 3);
        assert_eq!(cr[0], (-1, Side::Plus, LightCoord::new(0, 0)));
        assert_eq!(cr[1], (0, Side::Minus, LightCoord::new(0, 0)));
        assert_eq!(cr[2], (1, Side::Plus, LightCoord::new(1, -1)));
        assert_eq!(cr[3], (2, Side::Minus, LightCoord::new(1, -1)));
        assert!(s.crosses_lines_once(-20, 20));
    }

    #[test]
    fn delta_state_norm() {
        let w = Window::new(-3, -3, 7, 7).unwrap();
        let mut f = SpacetimeField::new(w, 1, 0.1);
        f.set_plus(LightCoord::new(1, -1), &[C64::new(0.6, 0.8)]).unwrap();
        let s = CauchySurface::alternating(LightCoord::new(0, 0), -4, 12);
        let n = surface_norm(&f, &s).unwrap();
        assert!((n.value - 1.0).abs() < 1e-15);
        assert_eq!(n.contributions.len(), 1);
    }

    #[test]
    fn support_outside_explicit_window() {
        let w = Window::new(-3, -3, 7, 7).unwrap();
        let mut f = SpacetimeField::new(w, 1, 0.1);
        f.set_plus(LightCoord::new(3, -3), &[C64::new(1.0, 0.0)]).unwrap();
        let s = CauchySurface::alternating(LightCoord::new(0, 0), -2, 4);
        assert!(matches!(surface_norm(&f, &s), Err(LatticeError::SupportEscapesSurface { n: 5 })));
    }

    #[test]
    fn swap_is_an_involution_and_keeps_runs_short() {
        let s = CauchySurface::alternating(LightCoord::new(0, 0), -6, 12);
        for n in -8..8 {
            let t = swap_move(&s, n).unwrap();
            assert!(t.max_run() <= 2);
            let mut back = swap_move(&t, n).unwrap();
            let mut orig = s.clone();
            orig.materialize(back.window_start, back.window_end());
            back.materialize(orig.window_start, orig.window_end());
            assert_eq!(back, orig);
        }
    }

    #[test]
    fn swap_at_origin_moves_origin() {
        let s = CauchySurface::alternating(LightCoord::new(0, 0), -4, 8);
        // steps (-1, 0) are (R, L)
        let t = swap_move(&s, -1).unwrap();
        assert_eq!(t.origin, LightCoord::new(1, 1));
        assert_eq!(t.face_before(5), s.face_before(5));
        assert_eq!(t.face_before(-3), s.face_before(-3));
    }

    #[test]
    fn invalid_pair() {
        let mut s = CauchySurface::alternating(LightCoord::new(0, 0), 0, 4);
        s.labels = vec![Step::L, Step::L, Step::R, Step::L];
        assert!(matches!(swap_move(&s, 0), Err(LatticeError::InvalidSwap { n: 0 })));
    }

    #[test]
    fn alternating_two_one_expansion() {
        let s = CauchySurface::alternating(LightCoord::new(0, 0), -4, 8);
        let t = transform_surface(&s, 2, 1);
        let labels: String = (0..9).map(|n| t.label(n).to_string()).collect();
        assert_eq!(labels, "LLRLLRLLR");
        let back: String = (-6..0).map(|n| t.label(n).to_string()).collect();
        assert_eq!(back, "LLRLLR");
        assert_eq!(t.max_run(), 2);
    }

    #[test]
    fn json_round_trip() {
        let mut s = CauchySurface::alternating(LightCoord::new(2, -1), -3, 6);
        s.tail_right = Some(vec![Step::R, Step::R, Step::L]);
        assert_eq!(CauchySurface::from_json(&s.to_json()).unwrap(), s);
    }
}
