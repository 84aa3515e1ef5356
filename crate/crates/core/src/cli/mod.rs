//! Reproduction harness: run configurations, experimental designs, and CSV
//! emission for cut-off tables, error curves and optimal errors versus `n`.

mod config;
mod design;
mod run;

pub use config::{
    CovariatePolicy, ModelKind, RunConfig, DEFAULT_GRID_SIZE, DEFAULT_SAMPLES, DEFAULT_SEED,
    QUICK_SAMPLES, TABLE_N,
};
pub use design::{build_design, read_design_file, STREAM_DESIGN};
pub use run::{
    config_hash, curve_csv, execute, metadata_path, optimal_errors_csv, parse_table_csv, run_curve,
    run_cutoff, run_optimal_errors, run_table, table_csv, Command, Overrides, TableRow,
    CURVE_HEADER, OPTIMAL_HEADER, TABLE_HEADER,
};
