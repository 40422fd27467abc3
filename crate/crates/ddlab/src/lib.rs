//! ddlab: a delay-Doppler channel simulation laboratory.
//!
//! The crate simulates doubly selective (delay-Doppler) channels and the
//! signal-processing chains built on top of them: a vector OFDM modem with
//! per-subcarrier vector equalization (plain OFDM and single-carrier FDE are
//! exact special cases), space-time block codes with diversity analysis and
//! three decoder families, time-frequency coding schemes for OFDM, and a
//! reproducible Monte-Carlo bit-error-rate harness with a CLI front end.
//!
//! Everything is deterministic: all randomness flows through counter-based
//! [`numerics::RngStream`] values keyed by `(master_seed, stream_id, counter)`,
//! so simulation output is byte-identical across runs and worker counts.

pub mod channel;
pub mod error;
pub mod harness;
pub mod numerics;
pub mod stcode;
pub mod tfcoding;
pub mod vofdm;

pub use error::{Error, Result};
