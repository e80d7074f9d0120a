//! Quantum walks and quantum cellular automata on a (1+1)-dimensional
//! lightlike lattice, with discrete Lorentz transforms implemented as patch
//! rewrites and numerical checks of covariance.

pub mod analysis;
pub mod descriptors;
pub mod error;
pub mod lattice;
pub mod linalg;
pub mod lorentz;
pub mod models;
pub mod observables;
pub mod patch;
pub mod report;

pub use error::{LatticeError, Result};
pub use lattice::{coord_convert, floor_multiple, LightCoord, Side, SpacetimeField, Window};
pub use linalg::ComplexMatrix;
pub use lorentz::{
    covariance_residual, lorentz_transform_field, make_encoding, nonhomog_transform, observer_rescaling, unzoom_field,
    Encoding, EncodingPair, LorentzParams, MassMap, NonHomogParams,
};
pub use models::{
    clock_qca_scattering, clock_walk_operator, dirac_coin, fd_dirac_coin, qca_step, qw_evolve, ClockWalkSpec,
    CoinOperator, Gate, InnerCoin, Model, QCAState, ScatteringOperator,
};
pub use observables::{local_velocity, mean_velocity, surface_norm, swap_move, transform_surface, CauchySurface};
pub use patch::{build_patch, PatchOperator};
