//! Problem presets, run configuration, reference solutions, error norms,
//! convergence studies, timing tables and CSV / gnuplot output.

mod config;
mod norms;
mod output;
mod preset;
mod problem;

pub use config::{preset, RunConfig};
pub use norms::{
    convergence_study, error_entry, error_norms, normalize_timings, timing_table, ErrorEntry, ErrorNorms, ErrorReport,
    OrderEntry, TimingRow,
};
pub use output::{
    fmt_f64, gnuplot_script, write_diagnostics, write_diagonal, write_field_2d, write_gnuplot_dat, write_outputs,
    write_psi_1d, write_psi_2d, write_solution_1d, OutputOptions,
};
pub use preset::{corner_step, square_wave, Preset};
pub use problem::{
    initial_grid_1d, initial_grid_2d, reference_values, run_config, sample_linear, RunOutcome, Solution,
    BLAST_REFERENCE_FACTOR, BURGERS_REFERENCE_CELLS,
};
