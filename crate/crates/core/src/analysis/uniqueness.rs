//! Search over single-vector encodings `ψ ↦ ψ v` for the Dirac walk.
//!
//! The first-order part of the covariance relation only constrains the
//! spreading vectors `v₊ ∈ C^β`, `v₋ ∈ C^α`:
//! `‖m v₊ − m'(Σv₋) 1_β‖² + ‖m v₋ − m'(Σv₊) 1_α‖²` with `m' = m/√(αβ)`.
//! The flat pair `(1_β/√β, 1_α/√α)`, up to a common phase, is a zero.

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{LatticeError, Result};
use crate::linalg::{norm_sqr, ComplexMatrix};
use crate::models::{dirac_coin, Gate};
use crate::patch::build_patch;

const COARSE_SAMPLES: usize = 4000;
const REFINE_STARTS: usize = 8;
const REFINE_ITERS: usize = 20_000;
const GRAD_TOL: f64 = 1e-12;
/// Candidates closer than this to the flat family are excluded from the floor.
pub const FLOOR_DISTANCE: f64 = 0.1;

#[derive(Clone, Debug, PartialEq)]
pub struct EncodingCandidate {
    pub v_plus: Vec<C64>,
    pub v_minus: Vec<C64>,
    pub first_order_residual: f64,
}

#[derive(Clone, Debug)]
pub struct UniquenessReport {
    pub alpha: usize,
    pub beta: usize,
    pub best: EncodingCandidate,
    /// Distance of `best` to the flat family.
    pub best_distance: f64,
    pub flat_residual: f64,
    /// Smallest residual among tested candidates at distance ≥ [`FLOOR_DISTANCE`].
    pub floor: f64,
    /// Smallest residual ratio `residual / flat_residual` over the same set
    /// (infinite when the flat residual is exactly zero).
    pub floor_ratio: f64,
    pub candidates_tested: usize,
    pub converged: bool,
    /// Full `‖Ē C_m − C̄_{m'} Ē‖_max` at the requested ε, flat and best.
    pub covariance_flat: f64,
    pub covariance_best: f64,
}

struct Problem {
    alpha: usize,
    beta: usize,
    m: f64,
    mp: f64,
}

impl Problem {
    fn split<'a>(&self, v: &'a [C64]) -> (&'a [C64], &'a [C64]) {
        v.split_at(self.beta)
    }

    /// `A v` for the stacked vector `(v₊, v₋)`.
    fn apply(&self, v: &[C64]) -> Vec<C64> {
        let (vp, vm) = self.split(v);
        let sp: C64 = vp.iter().sum();
        let sm: C64 = vm.iter().sum();
        let mut out = Vec::with_capacity(v.len());
        out.extend(vp.iter().map(|x| self.m * x - self.mp * sm));
        out.extend(vm.iter().map(|x| self.m * x - self.mp * sp));
        out
    }

    /// `A† w`; `A` is real symmetric in this basis.
    fn apply_adjoint(&self, w: &[C64]) -> Vec<C64> {
        self.apply(w)
    }

    fn residual(&self, v: &[C64]) -> f64 {
        norm_sqr(&self.apply(v))
    }

    fn flat(&self) -> Vec<C64> {
        let mut v = vec![C64::new(1.0 / (self.beta as f64).sqrt(), 0.0); self.beta];
        v.extend(vec![C64::new(1.0 / (self.alpha as f64).sqrt(), 0.0); self.alpha]);
        v
    }

    /// `min_λ ‖v − e^{iλ} f‖` with both halves of unit norm.
    fn distance_to_flat(&self, v: &[C64]) -> f64 {
        let f = self.flat();
        let overlap: C64 = f.iter().zip(v).map(|(a, b)| a.conj() * b).sum();
        (4.0 - 2.0 * overlap.norm()).max(0.0).sqrt()
    }

    fn normalize(&self, v: &mut [C64]) {
        let (a, b) = v.split_at_mut(self.beta);
        for half in [a, b] {
            let n = norm_sqr(half).sqrt();
            half.iter_mut().for_each(|x| *x /= n);
        }
    }

    /// Projected gradient descent on the product of the two unit spheres.
    fn refine(&self, mut v: Vec<C64>) -> (Vec<C64>, bool) {
        // ‖A‖ ≤ m + m'√(αβ) = 2m
        let step = 0.5 / (4.0 * self.m * self.m);
        for _ in 0..REFINE_ITERS {
            let g = self.apply_adjoint(&self.apply(&v));
            let mut tangent = g.clone();
            let (t1, t2) = tangent.split_at_mut(self.beta);
            let (v1, v2) = v.split_at(self.beta);
            for (gh, vh) in [(t1, v1), (t2, v2)] {
                // only the norm direction is constrained; phases stay free
                let radial: f64 = vh.iter().zip(gh.iter()).map(|(a, b)| (a.conj() * b).re).sum();
                gh.iter_mut().zip(vh).for_each(|(t, x)| *t -= radial * x);
            }
            if norm_sqr(&tangent).sqrt() < GRAD_TOL {
                return (v, true);
            }
            v.iter_mut().zip(&tangent).for_each(|(x, t)| *x -= step * t);
            self.normalize(&mut v);
        }
        let g = self.apply_adjoint(&self.apply(&v));
        (v, norm_sqr(&g).sqrt() < 1e-8)
    }

    fn candidate(&self, v: &[C64]) -> EncodingCandidate {
        let (vp, vm) = self.split(v);
        EncodingCandidate { v_plus: vp.to_vec(), v_minus: vm.to_vec(), first_order_residual: self.residual(v) }
    }
}

/// `Ē C_m − C̄_{m'} Ē` for the encoding `ψ₊ ↦ ψ₊ v₊`, `ψ₋ ↦ ψ₋ v₋`.
pub fn vector_encoding_covariance(v_plus: &[C64], v_minus: &[C64], m: f64, eps: f64) -> Result<f64> {
    let (beta, alpha) = (v_plus.len(), v_minus.len());
    let enc = ComplexMatrix::from_fn(beta + alpha, 2, |i, j| match (i < beta, j) {
        (true, 0) => v_plus[i],
        (false, 1) => v_minus[i - beta],
        _ => C64::new(0.0, 0.0),
    });
    let mp = m / ((alpha * beta) as f64).sqrt();
    let patch = build_patch(&Gate::Walk(dirac_coin(mp, eps)), alpha, beta)?;
    let lhs = enc.matmul(&dirac_coin(m, eps).matrix);
    let rhs = patch.boundary().matmul(&enc);
    Ok(lhs.max_abs_diff(&rhs))
}

fn random_unit(rng: &mut ChaCha8Rng, n: usize) -> Vec<C64> {
    loop {
        let v: Vec<C64> = (0..n).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let s = norm_sqr(&v);
        if s > 1e-6 {
            let k = s.sqrt();
            return v.into_iter().map(|x| x / k).collect();
        }
    }
}

/// Random coarse sampling of the two spheres followed by local refinement
/// from the best samples. Returns the best minimizer found together with
/// the residual floor away from the flat family.
pub fn encoding_uniqueness_search(alpha: usize, beta: usize, m: f64, eps: f64, seed: u64) -> Result<UniquenessReport> {
    if alpha == 0 || beta == 0 {
        return Err(LatticeError::InvalidArgument("alpha and beta must be positive".into()));
    }
    if !(m > 0.0) {
        return Err(LatticeError::InvalidArgument(format!("uniqueness search needs m > 0, got {m}")));
    }
    let pb = Problem { alpha, beta, m, mp: m / ((alpha * beta) as f64).sqrt() };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let flat = pb.flat();
    let flat_residual = pb.residual(&flat);

    let mut samples: Vec<(f64, Vec<C64>)> = (0..COARSE_SAMPLES)
        .map(|_| {
            let mut v = random_unit(&mut rng, beta);
            v.extend(random_unit(&mut rng, alpha));
            (pb.residual(&v), v)
        })
        .collect();
    // perturbations of the flat vector at the floor distance
    for _ in 0..COARSE_SAMPLES / 4 {
        let mut v = flat.clone();
        let kick = random_unit(&mut rng, alpha + beta);
        v.iter_mut().zip(&kick).for_each(|(x, k)| *x += 0.15 * k);
        pb.normalize(&mut v);
        samples.push((pb.residual(&v), v));
    }

    let mut floor = f64::INFINITY;
    for (r, v) in &samples {
        if pb.distance_to_flat(v) >= FLOOR_DISTANCE {
            floor = floor.min(*r);
        }
    }

    samples.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut best: Option<(f64, Vec<C64>, bool)> = None;
    for (_, start) in samples.iter().take(REFINE_STARTS) {
        let (v, conv) = pb.refine(start.clone());
        let r = pb.residual(&v);
        if best.as_ref().map_or(true, |(br, _, _)| r < *br) {
            best = Some((r, v, conv));
        }
    }
    let (_, best_v, converged) = best.expect("at least one refinement start");
    if !converged {
        log::warn!("uniqueness search for ({alpha}, {beta}) did not reach the gradient tolerance");
    }
    let best_c = pb.candidate(&best_v);
    let floor_ratio = if flat_residual == 0.0 { f64::INFINITY } else { floor / flat_residual };
    Ok(UniquenessReport {
        alpha,
        beta,
        best_distance: pb.distance_to_flat(&best_v),
        covariance_best: vector_encoding_covariance(&best_c.v_plus, &best_c.v_minus, m, eps)?,
        covariance_flat: vector_encoding_covariance(&flat[..beta], &flat[beta..], m, eps)?,
        best: best_c,
        flat_residual,
        floor,
        floor_ratio,
        candidates_tested: samples.len(),
        converged,
    })
}

/// First-order residual of an explicit candidate.
pub fn first_order_residual(v_plus: &[C64], v_minus: &[C64], m: f64) -> f64 {
    let (beta, alpha) = (v_plus.len(), v_minus.len());
    let pb = Problem { alpha, beta, m, mp: m / ((alpha * beta) as f64).sqrt() };
    let mut v = v_plus.to_vec();
    v.extend_from_slice(v_minus);
    pb.residual(&v)
}

/// Distance of `(v₊, v₋)` to the flat family.
pub fn distance_to_flat(v_plus: &[C64], v_minus: &[C64]) -> f64 {
    let pb = Problem { alpha: v_minus.len(), beta: v_plus.len(), m: 1.0, mp: 1.0 };
    let mut v = v_plus.to_vec();
    v.extend_from_slice(v_minus);
    pb.distance_to_flat(&v)
}
