//! Storage pricing.
//!
//! Bytes are billed in decimal gigabytes (10^9 bytes) at a monthly rate
//! that is converted to a per-day rate with a fixed month length.

use serde::{Deserialize, Serialize};

use crate::retention::{PrefixSums, RetentionPolicy};
use crate::workload::DailyVolumeProfile;
use crate::{Error, Result};

pub const BYTES_PER_GB: f64 = 1e9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PricingModel {
    pub usd_per_gb_month: f64,
    pub days_per_month: f64,
}

impl Default for PricingModel {
    fn default() -> Self {
        Self {
            usd_per_gb_month: 0.25,
            days_per_month: 30.0,
        }
    }
}

impl PricingModel {
    pub fn new(usd_per_gb_month: f64, days_per_month: f64) -> Result<Self> {
        let p = Self {
            usd_per_gb_month,
            days_per_month,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (field, v) in [
            ("usd_per_gb_month", self.usd_per_gb_month),
            ("days_per_month", self.days_per_month),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::config(
                    field,
                    format!("must be a positive number, got {v}"),
                ));
            }
        }
        Ok(())
    }

    /// USD per GB-day.
    pub fn daily_rate(&self) -> f64 {
        self.usd_per_gb_month / self.days_per_month
    }
}

/// Storage cost of one retention window over a profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostReport {
    pub window_days: u32,
    /// Retained GB on the final day of the profile.
    pub steady_state_gb: f64,
    pub monthly_run_rate_usd: f64,
    /// Daily storage charges summed over the whole horizon, warm-up included.
    pub accumulated_usd: f64,
    /// Retained bytes relative to a baseline window; set by [`CostReport::with_relative_cost`].
    pub relative_cost: Option<f64>,
    // exact numerator for ratio computations
    #[serde(skip)]
    steady_state_bytes: u64,
}

impl CostReport {
    pub fn steady_state_bytes(&self) -> u64 {
        self.steady_state_bytes
    }

    /// Fills `relative_cost` from a baseline report over the same profile.
    pub fn with_relative_cost(mut self, baseline: &CostReport) -> Result<Self> {
        self.relative_cost = Some(relative_cost(&self, baseline)?);
        Ok(self)
    }
}

/// Steady-state bytes of `target` over those of `baseline`.
pub fn relative_cost(target: &CostReport, baseline: &CostReport) -> Result<f64> {
    if baseline.steady_state_bytes == 0 {
        return Err(Error::UndefinedRatio(format!(
            "baseline window {}d stores zero bytes",
            baseline.window_days
        )));
    }
    if target.steady_state_bytes == baseline.steady_state_bytes {
        return Ok(1.0);
    }
    Ok(target.steady_state_bytes as f64 / baseline.steady_state_bytes as f64)
}

pub fn storage_cost(
    profile: &DailyVolumeProfile,
    policy: RetentionPolicy,
    pricing: &PricingModel,
) -> Result<CostReport> {
    storage_cost_from(&PrefixSums::new(profile), policy, pricing)
}

pub(crate) fn storage_cost_from(
    sums: &PrefixSums,
    policy: RetentionPolicy,
    pricing: &PricingModel,
) -> Result<CostReport> {
    pricing.validate()?;
    if sums.days() == 0 {
        return Err(Error::EmptyInput("storage cost of an empty profile".into()));
    }
    let last = (sums.days() - 1) as u32;
    let mut byte_days: u128 = 0;
    for day in 0..=last {
        byte_days += u128::from(sums.snapshot(policy, day)?.retained_bytes);
    }
    let steady_state_bytes = sums.snapshot(policy, last)?.retained_bytes;
    let steady_state_gb = steady_state_bytes as f64 / BYTES_PER_GB;
    Ok(CostReport {
        window_days: policy.window_days(),
        steady_state_gb,
        monthly_run_rate_usd: steady_state_gb * pricing.usd_per_gb_month,
        accumulated_usd: byte_days as f64 / BYTES_PER_GB * pricing.daily_rate(),
        relative_cost: None,
        steady_state_bytes,
    })
}
