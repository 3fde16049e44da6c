//! Seeded, replica-parallel experiments with CSV/JSON outputs and manifests.

pub mod config;
mod experiments;
pub mod output;
mod run;
pub mod stats;

pub use config::{ExperimentConfig, OUTPUT_DIR_ENV};
pub use experiments::{default_config, registered, ExperimentInfo, EXPERIMENTS};
pub use output::{Aggregate, ExperimentOutput, PointAggregate, Row};
pub use run::{
    execute, run_experiment, verify_manifest, ReplicaStream, RunManifest, Runner, VerifyReport, AGGREGATE_FILE,
    MANIFEST_FILE, RESULTS_FILE,
};
