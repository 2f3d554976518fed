//! Two-dimensional extension: per-axis smoothness selection, CAT fluxes on
//! square stencils and the conservative dimensionally unsplit update.

mod flux;
mod grid;
mod solver;

pub use flux::{cat2_flux_2d_closed_form, cat_flux_2d_x, cat_flux_2d_y, BlockScratch};
pub use grid::Grid2D;
pub use solver::{run_2d, run_2d_with, Stepper2D};
