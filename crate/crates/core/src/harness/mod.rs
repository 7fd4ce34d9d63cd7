//! Experiment orchestration: configuration, seeded sweeps, persistence and
//! the small-instance oracle check.

mod config;
mod oracle;
mod output;
mod seed;
mod sweep;

pub use config::{parse_methods, ExperimentConfig, Method, SweepSpec, SweepVariable};
pub use oracle::{oracle_check, OracleInstance, OracleReport};
pub use output::{read_results, sidecar_path, write_results, CSV_HEADER};
pub use seed::child_seed;
pub use sweep::{
    mean_ci, run_point, run_single, run_sweep, run_trial, sweep_elements, sweep_snr, sweep_subcarriers,
    Execution, MethodOutcome, SweepResult, SweepRow, TrialOutcome,
};
