//! Numerical stochastic calculus via regularization.
//!
//! The crate builds up in layers:
//!
//! - [`grid`], [`paths`]: seeded Brownian and truncated cylindrical Wiener
//!   paths on uniform grids.
//! - [`regularization`]: the epsilon-forward/backward/symmetric integrals
//!   and epsilon-covariation of a path pair, with limit estimation along a
//!   decreasing epsilon ladder.
//! - [`cylindrical`]: the classical series integral against cylindrical
//!   noise and its regularized forward counterpart, which drops the
//!   adaptedness requirement.
//! - [`kernel`]: the Dirichlet heat kernel on `[0, 1]` in truncated
//!   spectral form.
//! - [`spde`]: mild solutions of the stochastic heat equation with
//!   multiplicative noise and (possibly anticipating) random initial data,
//!   solved by parameterized substitution.
//!
//! Everything is a pure function of its inputs; identical seeds give
//! bit-identical output.

pub mod cylindrical;
pub mod error;
pub mod export;
pub mod grid;
pub mod kernel;
pub mod paths;
pub mod registry;
pub mod regularization;
pub mod report;
pub mod rng;
pub mod spde;

pub use error::{Error, Result};
