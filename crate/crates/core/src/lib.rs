//! Generalized functions of Colombeau type on a bounded interval and the
//! semilinear heat equation `u_t − Δu + u³ = 0` with generalized data.

pub mod cli;
pub mod config;
pub mod domains;
pub mod error;
pub mod grid;
pub mod ibvp;
pub mod mollifier;
pub mod nets;
pub mod quadrature;
pub mod report;
pub mod solver;
pub mod suite;
pub mod topology;
pub mod tridiag;

pub use error::{Error, Result};
