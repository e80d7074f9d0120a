pub mod counterexample;
pub mod klein_gordon;
pub mod order_fit;
pub mod sampling;
pub mod uniqueness;

pub use counterexample::{second_order_counterexample, Counterexample};
pub use klein_gordon::{
    coefficient_residuals, kg_decoupling_residual, kg_literal_residual, kg_mass_check, kg_mass_check_family,
    KgMassCheck,
};
pub use order_fit::{fit_loglog, order_fit, OrderFit, OrderOutcome};
pub use sampling::{sampled_continuum_field, sampled_layer_norm};
pub use uniqueness::{encoding_uniqueness_search, EncodingCandidate, UniquenessReport};
