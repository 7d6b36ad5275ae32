//! Inverse systems: forms in the dual variables under differentiation.
//!
//! The ring `R = k[x_1..x_r]` acts on `S = k[y_1..y_r]` by partial
//! differentiation. Over the rationals this gives the same dimensions as the
//! contraction action, so every Hilbert function below is a rank of a
//! matrix of derivatives.

pub mod construct;
pub mod form;
pub mod module;
pub mod pencil;

pub use construct::{
    augmented_level_hvector, expected_generic_hvector, generic_power_sum, generic_power_sum_with,
    lifted_points_form, sharp_pencil_witness, verify_level_witness, verify_level_witness_below,
    PowerSumBlock, TwoFormRecipe,
    DEFAULT_RETRIES,
};
pub use form::{Exponent, Form};
pub use module::{
    annihilator_component, hvector_of_module, socle_vector, three_part_decomposition,
    DerivativeSpace, InverseModule, ModuleAnalysis, ThreePartDecomposition,
};
pub use pencil::{pencil_derivative_rank, PencilRank, CERTIFICATE_CAP};
