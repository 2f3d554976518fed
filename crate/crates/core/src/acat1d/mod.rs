//! One-dimensional time marching: grid with ghost cells, robust and adaptive
//! interface fluxes, CFL control and the conservative update.

mod flux;
mod grid;
mod scheme;
mod solver;

pub use flux::{acat_flux, flcat2_flux, low_order_flux, FluxPath};
pub use grid::{Boundary, Grid1D};
pub use scheme::{LowOrderKind, SchemeKind, SchemeSpec};
pub use solver::{run, run_with, Diagnostics, InterfaceRecord, RunOptions, StepRecord, Stepper};

pub(crate) use flux::{assemble_flux, FluxScratch};
pub(crate) use solver::MAX_COMPONENTS;
