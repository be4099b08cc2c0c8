//! Run configuration and the end-to-end scenario pipeline.
//!
//! A config file is JSON; every field is optional and falls back to the
//! defaults below. A fully-resolved config is echoed into JSON reports so a
//! report can be fed back in to reproduce itself.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::costmodel::PricingModel;
use crate::ingest::{self, IngestFormat, IngestOptions, IngestReport};
use crate::metrics::{self, ScenarioInputs, ScenarioReport};
use crate::querysim::{AccessDistribution, AgeBucket};
use crate::report::OutputFormat;
use crate::retention::RetentionPolicy;
use crate::workload::{self, DailyVolumeProfile, WorkloadSpec};
use crate::{Error, Result};

pub const DEFAULT_WINDOWS: [u32; 4] = [7, 14, 30, 90];
pub const DEFAULT_SEED: u64 = 42;

/// Where the daily volume profile comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileSource {
    Synthetic(WorkloadSpec),
    Ingest(IngestSource),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IngestSource {
    pub format: IngestFormat,
    pub path: PathBuf,
    /// RFC 3339 instant (or date) of day 0.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epoch: Option<String>,
    #[serde(default)]
    pub strict: bool,
}

impl IngestSource {
    pub fn options(&self) -> Result<IngestOptions> {
        let epoch =
            match &self.epoch {
                Some(s) => Some(ingest::parse_timestamp(s).ok_or_else(|| {
                    Error::config("epoch", format!("unparseable timestamp `{s}`"))
                })?),
                None => None,
            };
        Ok(IngestOptions {
            epoch,
            strict: self.strict,
        })
    }
}

/// A preset name, a bare bucket list, or a named bucket list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DistributionChoice {
    Preset(String),
    Buckets(Vec<AgeBucket>),
    Named {
        name: String,
        buckets: Vec<AgeBucket>,
    },
}

impl DistributionChoice {
    pub fn resolve(&self) -> Result<AccessDistribution> {
        match self {
            DistributionChoice::Preset(name) => AccessDistribution::preset(name),
            DistributionChoice::Buckets(b) => AccessDistribution::new("custom", b.clone()),
            DistributionChoice::Named { name, buckets } => {
                AccessDistribution::new(name.clone(), buckets.clone())
            }
        }
    }
}

impl Default for DistributionChoice {
    fn default() -> Self {
        DistributionChoice::Preset("table2".into())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub workload: ProfileSource,
    pub windows: Vec<u32>,
    pub baseline_window: u32,
    pub distribution: DistributionChoice,
    pub query_count: usize,
    pub query_span_days: f64,
    pub pricing: PricingModel,
    /// Seed of the query workload.
    pub seed: u64,
    pub output_format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            workload: ProfileSource::Synthetic(WorkloadSpec::default()),
            windows: DEFAULT_WINDOWS.to_vec(),
            baseline_window: 90,
            distribution: DistributionChoice::default(),
            query_count: 10_000,
            query_span_days: 0.0,
            pricing: PricingModel::default(),
            seed: DEFAULT_SEED,
            output_format: OutputFormat::Table,
        }
    }
}

impl RunConfig {
    /// The reference reproduction: 90 days of constant volume, the `table2`
    /// access distribution, 10,000 point queries, windows 90/30/14/7.
    pub fn reproduction() -> Self {
        Self {
            workload: ProfileSource::Synthetic(WorkloadSpec::constant(90, 300_000, 150)),
            windows: vec![90, 30, 14, 7],
            ..Self::default()
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::config("config", e.to_string()))
    }

    pub fn policies(&self) -> Result<Vec<RetentionPolicy>> {
        self.windows
            .iter()
            .map(|&w| {
                RetentionPolicy::new(w)
                    .map_err(|_| Error::config("windows", format!("window {w} must be at least 1")))
            })
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.windows.is_empty() {
            return Err(Error::config("windows", "at least one window required"));
        }
        self.policies()?;
        let mut seen = self.windows.clone();
        seen.sort_unstable();
        if seen.windows(2).any(|p| p[0] == p[1]) {
            return Err(Error::config("windows", "windows must be distinct"));
        }
        if !self.windows.contains(&self.baseline_window) {
            return Err(Error::config(
                "baseline_window",
                format!(
                    "{} is not one of the windows {:?}",
                    self.baseline_window, self.windows
                ),
            ));
        }
        if self.query_count == 0 {
            return Err(Error::config("query_count", "must be at least 1"));
        }
        if !(self.query_span_days.is_finite() && self.query_span_days >= 0.0) {
            return Err(Error::config(
                "query_span_days",
                "must be a non-negative number",
            ));
        }
        self.pricing.validate()?;
        self.distribution.resolve()?;
        match &self.workload {
            ProfileSource::Synthetic(spec) => spec.validate()?,
            ProfileSource::Ingest(src) => {
                src.options()?;
            }
        }
        Ok(())
    }

    /// Generates or loads the daily volume profile.
    pub fn load_profile(&self) -> Result<(DailyVolumeProfile, Option<IngestReport>)> {
        match &self.workload {
            ProfileSource::Synthetic(spec) => Ok((workload::sample_daily_volumes(spec)?, None)),
            ProfileSource::Ingest(src) => {
                let (p, r) = ingest::ingest_path(&src.path, src.format, &src.options()?)?;
                Ok((p, Some(r)))
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub report: ScenarioReport,
    pub ingest: Option<IngestReport>,
}

/// Builds the profile and evaluates every configured window.
pub fn run_scenario(config: &RunConfig) -> Result<RunOutput> {
    config.validate()?;
    let (profile, ingest) = config.load_profile()?;
    let distribution = config.distribution.resolve()?;
    let windows = config.policies()?;
    let report = metrics::scenario_matrix(&ScenarioInputs {
        profile: &profile,
        windows: &windows,
        distribution: &distribution,
        query_count: config.query_count,
        query_span_days: config.query_span_days,
        seed: config.seed,
        pricing: config.pricing,
        baseline: RetentionPolicy::new(config.baseline_window)?,
    })?;
    Ok(RunOutput { report, ingest })
}
