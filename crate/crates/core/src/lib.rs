//! Deterministic simulator for log retention economics.
//!
//! The crate models a log-producing deployment as a per-day volume profile,
//! applies retention windows to it, prices the retained bytes, and scores a
//! seeded query workload against each window. Everything is computed from
//! [`DailyVolumeProfile`]; per-entry generation exists for realism and for
//! exercising the ingest path.
//!
//! With the default `parallel` feature, data-parallel loops (per-day
//! generation, query sampling and scoring) run on rayon. Results are
//! identical in both execution modes because every random draw comes from a
//! counter-addressed ChaCha8 stream (see [`rng`]).

pub mod config;
pub mod costmodel;
pub mod error;
pub mod exec;
pub mod ingest;
pub mod metrics;
pub mod querysim;
pub mod report;
pub mod retention;
pub mod rng;
pub mod workload;

pub use config::{DistributionChoice, IngestSource, ProfileSource, RunConfig};
pub use costmodel::{CostReport, PricingModel};
pub use error::{Error, Result};
pub use exec::Execution;
pub use ingest::{IngestFormat, IngestOptions, IngestReport};
pub use metrics::{ScenarioReport, ScenarioRow};
pub use querysim::{AccessDistribution, AgeBucket, Query, QueryWorkload};
pub use report::OutputFormat;
pub use retention::{RetainedSnapshot, RetentionPolicy};
pub use workload::{DailyVolumeProfile, DayVolume, LogEntry, Severity, WorkloadSpec};

/// Seconds in one simulated day.
pub const SECONDS_PER_DAY: u64 = 86_400;
