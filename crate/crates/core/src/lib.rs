//! Simulation and analysis of the chaotic three-species generalized
//! Lotka-Volterra food chain
//!
//! ```text
//! x1' = x1 (1 - x2 + r x1 - p x3 x1)
//! x2' = x2 (-1 + x1)
//! x3' = x3 (-q + p x1²)
//! ```
//!
//! and its Holling type II/III variants: fixed-step RK4 trajectories,
//! equilibria and their stability, Lyapunov spectra, linear feedback
//! stabilization, and active/adaptive drive-response synchronization.
//!
//! ```
//! use glv_dynamics::{integrate, Glv, IntegrationConfig, SystemParams, REFERENCE_INITIAL_STATE};
//!
//! let glv = Glv::linear(SystemParams::CHAOTIC).unwrap();
//! let traj = integrate(&glv, &REFERENCE_INITIAL_STATE, &IntegrationConfig::new(0.005, 10.0)).unwrap();
//! assert_eq!(traj.len(), 2001);
//! ```

pub mod analysis;
pub mod cli;
pub mod control;
pub mod error;
pub mod integrator;
pub mod models;
pub mod sync;

pub use error::{Error, Result};
pub use integrator::{integrate, integrate_with, IntegrationConfig, Linearized, Rk4, Trajectory, VectorField};
pub use models::{
    jacobian, linear_field, linear_jacobian, vector_field, Glv, Matrix3, ModelKind, State3, SystemParams,
    REFERENCE_INITIAL_STATE,
};
