//! Exact computations for generalized Dold manifolds `P(m, nu)`.

pub mod chains;
pub mod closedform;
pub mod cohomring;
pub mod error;
pub mod flagcomb;
pub mod homalg;
pub mod intpoly;
pub mod ktheory;
pub mod sweep;

pub use error::{Error, Result};
