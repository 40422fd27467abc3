//! Reproducible Monte-Carlo BER engine, the named claim-experiments,
//! configuration, CSV emission, and run manifests.

pub mod ber;
pub mod config;
pub mod experiments;
pub mod manifest;

pub use ber::{records_to_csv, BerRecord, FrameResult, MonteCarlo, wilson_interval};
pub use config::{parse_config, ExperimentConfig};
pub use experiments::{run_experiment, ExperimentOutcome, RunOptions, DEFAULT_SEED};
pub use manifest::RunManifest;
