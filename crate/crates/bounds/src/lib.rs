//! Quantitative machinery on top of the collapsed chain: the distance-decay
//! function F used to dominate escape probabilities, its closed-form
//! envelopes, sparseness functionals for target sets, the exact single-class
//! escape probability, a tour-decomposition lower bound, and the scale
//! constants (time horizons, admissible set sizes) used by the theorem
//! window checks.

mod dirichlet;
mod envelopes;
mod ftable;
mod one_dim;
mod params;
mod path;
mod scales;
mod sparseness;

pub use dirichlet::{dirichlet_upper_bound, DirichletBound, DirichletBranch};
pub use envelopes::{
    a3_envelopes, cor2_profile_checks, decreasing_envelope_rho, piecewise_threshold_c, Envelope,
};
pub use ftable::FTable;
pub use one_dim::{q_ratio, rho_1d_exact};
pub use params::BoundParams;
pub use path::path_lower_bound;
pub use scales::{
    d0, expected_return_time_ln, mean_time_envelope_ln, rho_of_m, stirling_return_time_ln,
    theta_envelope, theta_hat_ln, theta_tilde, u_lower_inv_ln, u_upper_inv_ln,
};
pub use sparseness::{is_sparse, sparseness_u, sparseness_u_lumped, sparseness_u_lumped_ln};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum BoundsError {
    #[error("invalid parameter: {0}")]
    BadParams(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}
