pub mod surface;
pub mod velocity;

pub use surface::{surface_norm, swap_move, transform_surface, CauchySurface, Contribution, Step, SurfaceNorm};
pub use velocity::{local_velocity, mean_velocity, velocity_addition_check, MeanVelocity};
