//! Random Dirac operators driven by hyperbolic paths and the beta-ensemble
//! point processes they realize.

pub mod dirac;
pub mod ensembles;
pub mod error;
pub mod geometry;
pub mod io;
pub mod ode;
pub mod stats;
pub mod szego;
pub mod validate;

pub use error::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
