//! Compact approximate Taylor (CAT) fluxes and the order-adaptive ACAT
//! schemes for 1D and 2D hyperbolic conservation laws.
//!
//! The crate is organised bottom-up:
//!
//! - [`diffops`]: exact-rational finite-difference and interpolation weights.
//! - [`models`]: flux models (advection, Burgers, Euler) and reference solutions.
//! - [`catcore`]: CAT2p interface fluxes and the LAT global variant.
//! - [`smooth`]: flux limiter and high-order smoothness indicators.
//! - [`acat1d`] / [`acat2d`]: time-marching drivers with adaptive flux selection.
//! - [`harness`]: presets, configuration, error norms, convergence studies, output.
//!
//! Interface fluxes inside a step are computed with rayon when the `parallel`
//! feature is enabled; [`Execution::Serial`] is always available and produces
//! bitwise-identical results.

pub mod acat1d;
pub mod acat2d;
pub mod catcore;
pub mod diffops;
mod error;
mod exec;
pub mod harness;
pub mod models;
pub mod smooth;

pub use error::{Error, Result};
pub use exec::Execution;

/// Largest stencil half-width the coefficient tables are built for by default.
pub const DEFAULT_MAX_P: usize = 4;

/// Hard cap on the stencil half-width (fixed-size per-interface buffers).
pub const MAX_P: usize = 8;
