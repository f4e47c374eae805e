//! Dengue transmission with Wolbachia-infected mosquito releases: model,
//! integrators, costs and release-policy optimization.

pub mod cost;
pub mod error;
pub mod experiments;
pub mod integrator;
pub mod model;
pub mod optimize;
pub mod output;
pub mod pareto;
pub mod release;
pub mod scenario;

pub use error::{Error, Result};
