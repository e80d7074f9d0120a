//! Isometries spreading one wire over several.

use num_complex::Complex64 as C64;

use crate::error::{LatticeError, Result};
use crate::linalg::{norm_sqr, ComplexMatrix};
use crate::models::qca::{QcaBasis, QCA_DIM};
use crate::models::Model;
use crate::patch::Combination;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EncodingKind {
    DiracFlat,
    ClockEmbed,
    QcaVacuumPad,
}

impl EncodingKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "dirac_flat" => Ok(Self::DiracFlat),
            "clock_embed" => Ok(Self::ClockEmbed),
            "qca_vacuum_pad" => Ok(Self::QcaVacuumPad),
            other => Err(LatticeError::UnknownEncoding(other.to_string())),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::DiracFlat => "dirac_flat",
            Self::ClockEmbed => "clock_embed",
            Self::QcaVacuumPad => "qca_vacuum_pad",
        }
    }

    pub fn combination(self) -> Combination {
        match self {
            Self::QcaVacuumPad => Combination::Tensor,
            _ => Combination::DirectSum,
        }
    }

    /// Encoding used by default for a model.
    pub fn for_model(model: &Model) -> Self {
        match model {
            Model::Dirac { .. } | Model::FdDirac { .. } => Self::DiracFlat,
            Model::ClockQw { .. } => Self::ClockEmbed,
            Model::ClockQca { .. } => Self::QcaVacuumPad,
        }
    }
}

/// `E_α : C^d → (C^{s·d})^{⊕α}` or `(C^d)^{⊗α}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Encoding {
    pub kind: EncodingKind,
    /// Number of output wires.
    pub alpha: usize,
    pub dim_in: usize,
    /// Counter relabelling factor of `clock_embed`; 1 otherwise.
    pub counter_scale: usize,
    matrix: ComplexMatrix,
}

/// Builds an encoding by kind name. `clock_embed` built this way keeps the
/// counter labels; use [`Encoding::clock_embed`] to relabel.
pub fn make_encoding(kind: &str, alpha: usize, d: usize) -> Result<Encoding> {
    match EncodingKind::parse(kind)? {
        EncodingKind::DiracFlat => Encoding::dirac_flat(alpha, d),
        EncodingKind::ClockEmbed => Encoding::clock_embed(alpha, d, 1),
        EncodingKind::QcaVacuumPad => {
            if d != QCA_DIM {
                return Err(LatticeError::DimensionMismatch(format!(
                    "vacuum padding needs wire dimension {QCA_DIM}, got {d}"
                )));
            }
            Encoding::qca_vacuum_pad(alpha)
        }
    }
}

fn check_alpha(alpha: usize, d: usize) -> Result<()> {
    if alpha == 0 || d == 0 {
        return Err(LatticeError::InvalidArgument(format!(
            "encoding needs alpha >= 1 and d >= 1, got alpha={alpha}, d={d}"
        )));
    }
    Ok(())
}

impl Encoding {
    /// `ψ ↦ (ψ/√α, …, ψ/√α)`.
    pub fn dirac_flat(alpha: usize, d: usize) -> Result<Self> {
        check_alpha(alpha, d)?;
        let w = C64::new(1.0 / (alpha as f64).sqrt(), 0.0);
        let matrix = ComplexMatrix::from_fn(alpha * d, d, |i, j| if i % d == j { w } else { C64::new(0.0, 0.0) });
        Ok(Self { kind: EncodingKind::DiracFlat, alpha, dim_in: d, counter_scale: 1, matrix })
    }

    /// Counter `i/n` goes to counter `(s·i)/(s·n)` on the bottom wire; the
    /// other `alpha - 1` wires are empty.
    pub fn clock_embed(alpha: usize, d: usize, counter_scale: usize) -> Result<Self> {
        check_alpha(alpha, d)?;
        if counter_scale == 0 {
            return Err(LatticeError::InvalidArgument("counter scale must be positive".into()));
        }
        let matrix = ComplexMatrix::from_fn(alpha * d * counter_scale, d, |i, j| {
            if i == counter_scale * j {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        Ok(Self { kind: EncodingKind::ClockEmbed, alpha, dim_in: d, counter_scale, matrix })
    }

    /// `|a⟩ ↦ |a⟩ ⊗ |q⟩^{⊗(α-1)}`, bottom wire first.
    pub fn qca_vacuum_pad(alpha: usize) -> Result<Self> {
        check_alpha(alpha, QCA_DIM)?;
        let n = QCA_DIM.pow(alpha as u32);
        let stride = QCA_DIM.pow(alpha as u32 - 1);
        // |q⟩ has index 0, so the padding wires contribute nothing to the index
        debug_assert_eq!(QcaBasis::Q as usize, 0);
        let matrix =
            ComplexMatrix::from_fn(
                n,
                QCA_DIM,
                |i, j| {
                    if i == j * stride {
                        C64::new(1.0, 0.0)
                    } else {
                        C64::new(0.0, 0.0)
                    }
                },
            );
        Ok(Self { kind: EncodingKind::QcaVacuumPad, alpha, dim_in: QCA_DIM, counter_scale: 1, matrix })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim_out(&self) -> usize {
        self.matrix.rows()
    }

    /// Dimension of each output wire.
    pub fn wire_dim_out(&self) -> usize {
        match self.kind {
            EncodingKind::QcaVacuumPad => QCA_DIM,
            _ => self.dim_in * self.counter_scale,
        }
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        self.matrix.mul_vec(v)
    }

    pub fn adjoint_apply(&self, w: &[C64]) -> Vec<C64> {
        self.matrix.dagger().mul_vec(w)
    }

    /// `‖(I − E E†) w‖`, the distance of `w` from the image of the encoding.
    pub fn subspace_deviation(&self, w: &[C64]) -> f64 {
        let back = self.apply(&self.adjoint_apply(w));
        let diff: Vec<C64> = w.iter().zip(&back).map(|(a, b)| a - b).collect();
        norm_sqr(&diff).sqrt()
    }

    /// Splits an encoded vector of a direct-sum kind into wires.
    pub fn wires(&self, w: &[C64]) -> Vec<Vec<C64>> {
        w.chunks(self.wire_dim_out()).map(<[C64]>::to_vec).collect()
    }

    /// `⊕_α E'` (direct-sum kinds) or `⊗_α E'` (tensor kind).
    pub fn lift(&self, inner: &Encoding) -> ComplexMatrix {
        match self.kind.combination() {
            Combination::DirectSum => inner.matrix.direct_power(self.alpha),
            Combination::Tensor => inner.matrix.tensor_power(self.alpha),
        }
    }
}

/// `Ē = E_β ⊕ E_α` or `E_β ⊗ E_α`; `plus` encodes `ψ₊` over β wires.
#[derive(Clone, Debug, PartialEq)]
pub struct EncodingPair {
    pub plus: Encoding,
    pub minus: Encoding,
}

impl EncodingPair {
    pub fn new(plus: Encoding, minus: Encoding) -> Result<Self> {
        if plus.kind.combination() != minus.kind.combination() {
            return Err(LatticeError::InvalidArgument("both encodings of a pair must combine the same way".into()));
        }
        Ok(Self { plus, minus })
    }

    /// Default pair of a model for the transform `(α, β)`.
    pub fn for_model(model: &Model, alpha: usize, beta: usize) -> Result<Self> {
        let (dp, dm) = model.wire_dims();
        match EncodingKind::for_model(model) {
            EncodingKind::DiracFlat => Self::new(Encoding::dirac_flat(beta, dp)?, Encoding::dirac_flat(alpha, dm)?),
            EncodingKind::ClockEmbed => {
                Self::new(Encoding::clock_embed(beta, dp, alpha)?, Encoding::clock_embed(alpha, dm, beta)?)
            }
            EncodingKind::QcaVacuumPad => Self::new(Encoding::qca_vacuum_pad(beta)?, Encoding::qca_vacuum_pad(alpha)?),
        }
    }

    pub fn combination(&self) -> Combination {
        self.plus.kind.combination()
    }

    pub fn dim_in(&self) -> usize {
        match self.combination() {
            Combination::DirectSum => self.plus.dim_in + self.minus.dim_in,
            Combination::Tensor => self.plus.dim_in * self.minus.dim_in,
        }
    }

    pub fn dim_out(&self) -> usize {
        match self.combination() {
            Combination::DirectSum => self.plus.dim_out() + self.minus.dim_out(),
            Combination::Tensor => self.plus.dim_out() * self.minus.dim_out(),
        }
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        match self.combination() {
            Combination::DirectSum => {
                let (p, m) = v.split_at(self.plus.dim_in);
                let mut out = self.plus.apply(p);
                out.extend(self.minus.apply(m));
                out
            }
            Combination::Tensor => {
                let (ep, em) = (self.plus.matrix(), self.minus.matrix());
                let dm_in = self.minus.dim_in;
                let dm_out = self.minus.dim_out();
                let mut out = vec![C64::new(0.0, 0.0); self.dim_out()];
                for (k, &amp) in v.iter().enumerate() {
                    if amp == C64::new(0.0, 0.0) {
                        continue;
                    }
                    let (a, b) = (k / dm_in, k % dm_in);
                    for x in 0..ep.rows() {
                        let ex = ep.get(x, a);
                        if ex == C64::new(0.0, 0.0) {
                            continue;
                        }
                        for y in 0..dm_out {
                            out[x * dm_out + y] += amp * ex * em.get(y, b);
                        }
                    }
                }
                out
            }
        }
    }

    pub fn matrix(&self) -> ComplexMatrix {
        match self.combination() {
            Combination::DirectSum => self.plus.matrix().direct_sum(self.minus.matrix()),
            Combination::Tensor => self.plus.matrix().kron(self.minus.matrix()),
        }
    }
}
