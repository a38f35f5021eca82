//! Experiment orchestration and file I/O.

pub mod compare;
pub mod config;
pub mod experiment;
pub mod records;
pub mod summary;

pub use compare::{compare_on_samples, compare_targets, dominance_table, interpolate_ba_rate};
pub use config::{load_config, parse_config, ExperimentConfig};
pub use experiment::{run_experiment, run_trial};
pub use records::{read_distortion_csv, read_rd_points, read_records, read_source_csv, write_rd_points, write_records, RdPoint, TargetMethod, TrialRecord};
pub use summary::{summarize, SummaryRow};
