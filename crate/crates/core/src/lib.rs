//! Semiclassical dynamics of a charged particle in a magnetic monopole density.
//!
//! A state is described by means and second-order moments of position and
//! kinematical momentum. The crate provides the coupled equations of motion,
//! the stationary (adiabatic) moment configuration with saturated uncertainty
//! relations, the resulting effective potential, and reference solutions for
//! the constant-field and classical limits.
//!
//! Everything is generic over the float type; the `…64` aliases fix `f64`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod effpot;
pub mod error;
pub mod linalg;
pub mod model;
pub mod oracle;
pub mod scalar;
pub mod state;
pub mod stationary;

pub use dynamics::{
    evolve, mean_rhs, moment_rhs, rhs, step_rk4, uncertainty_measures, Aborted, IntegratorConfig, Method, Monitor,
    Trajectory, Uncertainty,
};
pub use effpot::{
    completed_square_report, effective_force, kink_jump, minimum, veff, veff_report, veff_scan, CompletedSquare, Kink,
    Minimum, VeffReport,
};
pub use error::{Error, Result};
pub use linalg::{matrix_exponential, Matrix};
pub use model::{field_eval, jacobiator, levi_civita, momentum_commutator_coefficient, Axis, FieldModel, Params};
pub use oracle::{build_linear_system, classical_trajectory, LinearSystem};
pub use scalar::Real;
pub use state::{energy, MomentIndex, MomentState, Var, N_MEANS, N_MOMENTS, STATE_DIM};
pub use stationary::{
    adiabatic_constraints, residual, saturate, saturate_with, AdiabaticConstraints, SaturationMode, TransverseSpread,
};

pub type Params64 = Params<f64>;
pub type FieldModel64 = FieldModel<f64>;
pub type MomentState64 = MomentState<f64>;
pub type Trajectory64 = Trajectory<f64>;
pub type IntegratorConfig64 = IntegratorConfig<f64>;
pub type VeffReport64 = VeffReport<f64>;
pub type Matrix64 = Matrix<f64>;
