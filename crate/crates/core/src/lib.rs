//! Confidence-density inference for self-dual distributions.
//!
//! Swapping the variable and the location parameter of a Laplace, Normal or Cauchy
//! density gives back the same formula. Read as a function of the parameter, it is a
//! density over the parameter, so intervals for the location can be built exactly
//! from a single observation. A Poisson count maps the same way onto a Gamma density
//! over the rate.
//!
//! - [`dists`]: pdf/cdf/quantile/inverse-transform sampling for the registry families.
//! - [`duality`]: confidence densities, interval probabilities and solvers, the unit
//!   identity, and the finite-difference check of the density.
//! - [`quad`]: deterministic Gauss-Kronrod adaptive quadrature for cross-checks.
//! - [`montecarlo`]: seeded, order-independent coverage experiments.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]
extern crate alloc;

pub mod dists;
pub mod duality;
pub mod error;
pub mod montecarlo;
pub mod quad;
mod roots;

pub use error::{Error, Result};
