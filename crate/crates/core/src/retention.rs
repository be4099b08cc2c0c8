//! Retention windows applied to a volume profile.
//!
//! Retention is day-granular: on `as_of_day` a window of `R` days keeps the
//! days in `(as_of_day - R, as_of_day]`.

use serde::{Deserialize, Serialize};

use crate::workload::DailyVolumeProfile;
use crate::{Error, Result};

/// Retention window in whole days.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct RetentionPolicy(u32);

impl RetentionPolicy {
    pub fn new(window_days: u32) -> Result<Self> {
        if window_days == 0 {
            return Err(Error::config(
                "window_days",
                "retention window must be at least 1 day",
            ));
        }
        Ok(Self(window_days))
    }

    pub fn window_days(self) -> u32 {
        self.0
    }
}

impl TryFrom<u32> for RetentionPolicy {
    type Error = Error;

    fn try_from(v: u32) -> Result<Self> {
        Self::new(v)
    }
}

impl From<RetentionPolicy> for u32 {
    fn from(p: RetentionPolicy) -> u32 {
        p.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RetainedSnapshot {
    pub as_of_day: u32,
    pub window_days: u32,
    pub retained_entries: u64,
    pub retained_bytes: u64,
}

/// Inclusive prefix sums over a profile, for O(1) window queries.
#[derive(Debug, Clone)]
pub struct PrefixSums {
    // entry i holds sums over days [0, i)
    entries: Vec<u64>,
    bytes: Vec<u64>,
}

impl PrefixSums {
    pub fn new(profile: &DailyVolumeProfile) -> Self {
        let mut entries = Vec::with_capacity(profile.len() + 1);
        let mut bytes = Vec::with_capacity(profile.len() + 1);
        entries.push(0);
        bytes.push(0);
        for d in profile.days() {
            entries.push(entries.last().unwrap() + d.entry_count);
            bytes.push(bytes.last().unwrap() + d.total_bytes);
        }
        Self { entries, bytes }
    }

    pub fn days(&self) -> usize {
        self.entries.len() - 1
    }

    pub fn snapshot(&self, policy: RetentionPolicy, as_of_day: u32) -> Result<RetainedSnapshot> {
        let len = self.days();
        if as_of_day as usize >= len {
            return Err(Error::Range {
                what: "as_of_day",
                index: as_of_day.into(),
                len: len as u64,
            });
        }
        let end = as_of_day as usize + 1;
        let start = end.saturating_sub(policy.window_days() as usize);
        Ok(RetainedSnapshot {
            as_of_day,
            window_days: policy.window_days(),
            retained_entries: self.entries[end] - self.entries[start],
            retained_bytes: self.bytes[end] - self.bytes[start],
        })
    }
}

pub fn retained_volume(
    profile: &DailyVolumeProfile,
    policy: RetentionPolicy,
    as_of_day: u32,
) -> Result<RetainedSnapshot> {
    PrefixSums::new(profile).snapshot(policy, as_of_day)
}

/// Retained bytes under `policy` as a fraction of those under `baseline`.
pub fn relative_retained(
    profile: &DailyVolumeProfile,
    policy: RetentionPolicy,
    baseline: RetentionPolicy,
    as_of_day: u32,
) -> Result<f64> {
    let sums = PrefixSums::new(profile);
    let target = sums.snapshot(policy, as_of_day)?;
    let base = sums.snapshot(baseline, as_of_day)?;
    if base.retained_bytes == 0 {
        return Err(Error::UndefinedRatio(format!(
            "baseline window {}d retains zero bytes at day {as_of_day}",
            baseline.window_days()
        )));
    }
    if target.retained_bytes == base.retained_bytes {
        return Ok(1.0);
    }
    Ok(target.retained_bytes as f64 / base.retained_bytes as f64)
}
