//! Exact potential theory on finite reversible chains behind a uniform
//! state-indexed interface: hitting and escape probabilities, harmonic
//! measure, mean and conditional hitting times, killed Laplace transforms
//! with their renewal decompositions, capacities, and batch verification of
//! the quantitative windows the rest of the workspace predicts.

mod laplace;
mod linsys;
mod phi;
mod potential;
mod view;
mod windows;

pub use laplace::{
    laplace_decomposition_residual, laplace_g, laplace_g_first_step, laplace_jet_fields,
    laplace_jet_first_step, laplace_tiny, Jet2, TINY_U_LIMIT,
};
pub use linsys::{solve_potential, Method, Rhs, SolveReport, DEFAULT_TOLERANCE};
pub use phi::{phi_exact, phi_profile, script_u, script_v, u_functional, v_functional};
pub use potential::{
    capacity, capacity_ln, conditional_mean_time, dirichlet_form, escape_prob, harmonic_measure,
    hit_field, hit_prob, mean_hitting_time, mean_return_time, mean_time_field,
    mean_time_identity_residual, HitSpec,
};
pub use view::{ChainView, GridChain, HypercubeChain, MAX_GRID_STATES, MAX_HYPERCUBE_SITES};
pub use windows::{
    theorem_window_checks, WindowInstance, WindowReport, ESCAPE_GAP_CEILING,
    FIRST_ORDER_CEILING, STIRLING_CEILING, TRANSFORM_CEILING,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("invalid instance: {0}")]
    BadInstance(String),
    #[error("parameter outside the solvable domain: {0}")]
    OutOfDomain(String),
    #[error("solver stalled at relative residual {residual:e}")]
    NonConvergence { residual: f64 },
}
