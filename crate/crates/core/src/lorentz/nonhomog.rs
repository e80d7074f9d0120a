//! Position-dependent transforms: one `α_r` per right-moving line and one
//! `β_l` per left-moving line.

use std::collections::BTreeSet;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::network::{run_cells, Config, SparseState};
use super::{covariance_residual, EncodingPair, LorentzParams, MassMap};
use crate::error::{LatticeError, Result};
use crate::lattice::{LightCoord, Window};
use crate::models::qca::QcaBasis;
use crate::models::{Gate, Model};

/// Run-length encoded integer sequence over line indices: `initial` holds
/// below the first step, and each `(start, value)` holds from `start` on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepProfile {
    pub initial: usize,
    #[serde(default)]
    pub steps: Vec<(i64, usize)>,
}

impl StepProfile {
    pub fn constant(v: usize) -> Self {
        Self { initial: v, steps: Vec::new() }
    }

    pub fn new(initial: usize, mut steps: Vec<(i64, usize)>) -> Result<Self> {
        steps.sort_by_key(|s| s.0);
        if initial == 0 || steps.iter().any(|s| s.1 == 0) {
            return Err(LatticeError::InvalidArgument("profile values must be positive".into()));
        }
        if steps.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(LatticeError::InvalidArgument("profile has two steps at one line".into()));
        }
        Ok(Self { initial, steps })
    }

    pub fn value_at(&self, x: i64) -> usize {
        self.steps.iter().take_while(|s| s.0 <= x).last().map_or(self.initial, |s| s.1)
    }

    /// Position of line `x` in the stretched lattice; line 0 stays at 0.
    pub fn offset(&self, x: i64) -> i64 {
        if x >= 0 {
            (0..x).map(|k| self.value_at(k) as i64).sum()
        } else {
            -(x..0).map(|k| self.value_at(k) as i64).sum::<i64>()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonHomogParams {
    /// `α_r`, indexed by right-moving line `r`.
    pub alpha: StepProfile,
    /// `β_l`, indexed by left-moving line `l`.
    pub beta: StepProfile,
}

impl NonHomogParams {
    pub fn homogeneous(alpha: usize, beta: usize) -> Self {
        Self { alpha: StepProfile::constant(alpha), beta: StepProfile::constant(beta) }
    }
}

/// Observer trajectory anchored so that the end of its first segment sits at
/// `(0, 0)`.
pub fn observer_rescaling(traj: &[(usize, usize)]) -> Result<NonHomogParams> {
    observer_rescaling_at(traj, LightCoord::new(0, 0))
}

/// Segment `k` moves `a_k` right and `b_k` left. With `M_k = lcm(a_k, b_k)`,
/// the lines it crosses get `α = M_k/a_k` and `β = M_k/b_k`. The first
/// segment's values extend backwards forever, the last one's forwards.
pub fn observer_rescaling_at(traj: &[(usize, usize)], anchor: LightCoord) -> Result<NonHomogParams> {
    let (&(a1, b1), rest) = traj.split_first().ok_or(LatticeError::EmptyTrajectory)?;
    if traj.iter().any(|&(a, b)| a == 0 || b == 0) {
        return Err(LatticeError::InvalidArgument("trajectory steps must be positive".into()));
    }
    let m1 = a1.lcm(&b1);
    let (mut r, mut l) = (anchor.r, anchor.l);
    let (mut ra, mut lb) = (Vec::new(), Vec::new());
    for &(a, b) in rest {
        let m = a.lcm(&b);
        ra.push((r, m / a));
        lb.push((l, m / b));
        r += a as i64;
        l += b as i64;
    }
    Ok(NonHomogParams { alpha: StepProfile::new(m1 / a1, ra)?, beta: StepProfile::new(m1 / b1, lb)? })
}

/// Replays the trajectory on the stretched lattice: for each segment, the
/// number of stretched right and left steps.
pub fn rescaled_step_counts(
    traj: &[(usize, usize)],
    nh: &NonHomogParams,
    anchor: LightCoord,
) -> Result<Vec<(usize, usize)>> {
    let (&(a1, b1), _) = traj.split_first().ok_or(LatticeError::EmptyTrajectory)?;
    let (mut r, mut l) = (anchor.r - a1 as i64, anchor.l - b1 as i64);
    let mut out = Vec::with_capacity(traj.len());
    for &(a, b) in traj {
        let right: usize = (r..r + a as i64).map(|x| nh.alpha.value_at(x)).sum();
        let left: usize = (l..l + b as i64).map(|x| nh.beta.value_at(x)).sum();
        out.push((right, left));
        r += a as i64;
        l += b as i64;
    }
    Ok(out)
}

/// Homogeneous gate network over a window of points.
#[derive(Clone, Debug, PartialEq)]
pub struct GateNetwork {
    pub window: Window,
    pub model: Model,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StretchedCell {
    pub source: LightCoord,
    pub origin: LightCoord,
    pub alpha: usize,
    pub beta: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StretchedNetwork {
    pub source: GateNetwork,
    pub params: NonHomogParams,
    pub cells: Vec<StretchedCell>,
    /// Largest `‖Ē U − Ū Ē‖` over the patch shapes present. Neighbouring
    /// patches along a line share one encoding, so this bounds the mismatch
    /// between patch outputs and next-patch inputs.
    pub gluing: f64,
}

pub fn nonhomog_transform(network: &GateNetwork, nh: &NonHomogParams) -> Result<StretchedNetwork> {
    let map = MassMap::for_model(&network.model);
    if map.depends_on_frame() {
        return Err(LatticeError::FrameDependentParameters { model: network.model.name().to_string() });
    }
    let w = network.window;
    let mut cells = Vec::with_capacity(w.len());
    let mut shapes = BTreeSet::new();
    for c in w.coords() {
        let (a, b) = (nh.alpha.value_at(c.r), nh.beta.value_at(c.l));
        shapes.insert((a, b));
        cells.push(StretchedCell {
            source: c,
            origin: LightCoord::new(nh.alpha.offset(c.r), nh.beta.offset(c.l)),
            alpha: a,
            beta: b,
        });
    }
    let mut gluing = 0.0f64;
    for (a, b) in shapes {
        let params = LorentzParams::new(a, b, Some(map))?;
        let pair = EncodingPair::for_model(&network.model, a, b)?;
        gluing = gluing.max(covariance_residual(&network.model, &params, &pair)?);
    }
    Ok(StretchedNetwork { source: network.clone(), params: nh.clone(), cells, gluing })
}

impl StretchedNetwork {
    fn gate(&self) -> Result<crate::linalg::ComplexMatrix> {
        match self.source.model.gate()? {
            Gate::Scatter(u) => Ok(u.lightlike),
            Gate::Walk(_) => Err(LatticeError::InvalidArgument("sparse evaluation needs a scattering gate".into())),
        }
    }

    /// Evolves a basis configuration of incoming wires (one per left-moving
    /// line along the left edge, then one per right-moving line along the
    /// bottom edge) through the original network and through the stretched
    /// one, and returns the largest amplitude difference after encoding the
    /// original output.
    pub fn replay_mismatch(&self, plus_in: &[QcaBasis], minus_in: &[QcaBasis]) -> Result<f64> {
        let w = self.source.window;
        if plus_in.len() != w.n_l || minus_in.len() != w.n_r {
            return Err(LatticeError::DimensionMismatch(format!("need {} plus and {} minus inputs", w.n_l, w.n_r)));
        }
        let gate = self.gate()?;
        let l_lines: Vec<i64> = (0..w.n_l as i64).map(|k| w.l_min + k).collect();
        let r_lines: Vec<i64> = (0..w.n_r as i64).map(|k| w.r_min + k).collect();

        // original network
        let mut cfg: Config = plus_in.iter().chain(minus_in).map(|b| *b as u8).collect();
        let mut orig = SparseState::basis(cfg.clone());
        let cells: Vec<(usize, usize)> =
            w.coords().map(|c| ((c.l - w.l_min) as usize, w.n_l + (c.r - w.r_min) as usize)).collect();
        run_cells(&mut orig, 3, &gate, &cells);

        // stretched network: line x owns sub-wires [start(x), start(x) + width)
        let widths_l: Vec<usize> = l_lines.iter().map(|&l| self.params.beta.value_at(l)).collect();
        let widths_r: Vec<usize> = r_lines.iter().map(|&r| self.params.alpha.value_at(r)).collect();
        let starts = |widths: &[usize]| -> Vec<usize> {
            widths
                .iter()
                .scan(0, |acc, &x| {
                    let s = *acc;
                    *acc += x;
                    Some(s)
                })
                .collect()
        };
        let (sl, sr) = (starts(&widths_l), starts(&widths_r));
        let n_plus: usize = widths_l.iter().sum();
        let n_minus: usize = widths_r.iter().sum();
        let encode = |cfg: &Config| -> Config {
            let mut out = vec![QcaBasis::Q as u8; n_plus + n_minus];
            for k in 0..w.n_l {
                out[sl[k]] = cfg[k];
            }
            for k in 0..w.n_r {
                out[n_plus + sr[k]] = cfg[w.n_l + k];
            }
            out
        };
        cfg = encode(&cfg);
        let mut stretched = SparseState::basis(cfg);
        let mut s_cells = Vec::new();
        for c in &self.cells {
            let (kl, kr) = ((c.source.l - w.l_min) as usize, (c.source.r - w.r_min) as usize);
            for i in 0..c.alpha {
                for j in 0..c.beta {
                    s_cells.push((sl[kl] + j, n_plus + sr[kr] + i));
                }
            }
        }
        run_cells(&mut stretched, 3, &gate, &s_cells);
        Ok(orig.map_configs(encode).max_abs_diff(&stretched))
    }
}

/// Checks that `L_{β,α} ∘ L_{α,β}` acts on a network as the pure dilation
/// `L_{αβ,αβ}` with encoding `F = E_{αβ}`: both transforms are replayed on a
/// basis input, the dilation is replayed directly, and the composed
/// encodings are compared with `E_{αβ}`.
pub fn double_transform_mismatch(
    network: &GateNetwork,
    alpha: usize,
    beta: usize,
    plus_in: &[QcaBasis],
    minus_in: &[QcaBasis],
) -> Result<f64> {
    use super::Encoding;
    let first = nonhomog_transform(network, &NonHomogParams::homogeneous(alpha, beta))?;
    let mut worst = first.replay_mismatch(plus_in, minus_in)?.max(first.gluing);

    let w = network.window;
    let zoomed = GateNetwork {
        window: Window::new(w.r_min * alpha as i64, w.l_min * beta as i64, w.n_r * alpha, w.n_l * beta)?,
        model: network.model.clone(),
    };
    let pad = |input: &[QcaBasis], k: usize| -> Vec<QcaBasis> {
        input.iter().flat_map(|&b| std::iter::once(b).chain(std::iter::repeat(QcaBasis::Q).take(k - 1))).collect()
    };
    let second = nonhomog_transform(&zoomed, &NonHomogParams::homogeneous(beta, alpha))?;
    worst = worst.max(second.replay_mismatch(&pad(plus_in, beta), &pad(minus_in, alpha))?).max(second.gluing);

    let dilation = nonhomog_transform(network, &NonHomogParams::homogeneous(alpha * beta, alpha * beta))?;
    worst = worst.max(dilation.replay_mismatch(plus_in, minus_in)?).max(dilation.gluing);

    let f = Encoding::qca_vacuum_pad(alpha * beta)?;
    for (outer, inner) in [(beta, alpha), (alpha, beta)] {
        let e_outer = Encoding::qca_vacuum_pad(outer)?;
        let e_inner = Encoding::qca_vacuum_pad(inner)?;
        let composed = e_outer.lift(&e_inner).matmul(e_outer.matrix());
        worst = worst.max(composed.max_abs_diff(f.matrix()));
    }
    Ok(worst)
}
