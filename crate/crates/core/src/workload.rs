//! Synthetic log workloads.
//!
//! Daily volumes are drawn uniformly from `[daily_min_entries,
//! daily_max_entries]`, independently per day, each day from its own RNG
//! stream keyed by `(seed, day_index)`. Per-entry streams are generated on
//! demand for a single day.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::exec::{self, Execution};
use crate::rng::{self, Purpose};
use crate::{Error, Result, SECONDS_PER_DAY};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Severity {
    Debug,
    Info,
    Warn,
    Error,
}

impl Severity {
    pub const ALL: [Severity; 4] = [
        Severity::Debug,
        Severity::Info,
        Severity::Warn,
        Severity::Error,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Severity::Debug => "DEBUG",
            Severity::Info => "INFO",
            Severity::Warn => "WARN",
            Severity::Error => "ERROR",
        }
    }
}

/// Probability of each severity level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeverityWeights {
    pub debug: f64,
    pub info: f64,
    pub warn: f64,
    pub error: f64,
}

impl Default for SeverityWeights {
    fn default() -> Self {
        Self {
            debug: 0.10,
            info: 0.70,
            warn: 0.15,
            error: 0.05,
        }
    }
}

impl SeverityWeights {
    fn as_array(&self) -> [f64; 4] {
        [self.debug, self.info, self.warn, self.error]
    }

    fn pick(&self, u: f64) -> Severity {
        let mut acc = 0.0;
        let weights = self.as_array();
        for (sev, w) in Severity::ALL.into_iter().zip(weights) {
            acc += w;
            if u < acc {
                return sev;
            }
        }
        // u landed in the rounding slack above the cumulative sum
        Severity::ALL
            .into_iter()
            .zip(weights)
            .rev()
            .find(|(_, w)| *w > 0.0)
            .map(|(s, _)| s)
            .unwrap_or(Severity::Info)
    }
}

/// Parameters of a synthetic workload.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WorkloadSpec {
    pub horizon_days: u32,
    pub daily_min_entries: u64,
    pub daily_max_entries: u64,
    /// Mean serialized size of one entry. Only absolute costs depend on it.
    pub mean_entry_bytes: u64,
    /// Per-day (and per-entry) size multiplier is uniform in `[1-j, 1+j]`.
    pub entry_size_jitter_fraction: f64,
    pub severity_weights: SeverityWeights,
    pub service_count: u32,
    pub seed: u64,
}

impl Default for WorkloadSpec {
    fn default() -> Self {
        Self {
            horizon_days: 90,
            daily_min_entries: 100_000,
            daily_max_entries: 500_000,
            mean_entry_bytes: 150,
            entry_size_jitter_fraction: 0.2,
            severity_weights: SeverityWeights::default(),
            service_count: 8,
            seed: 42,
        }
    }
}

impl WorkloadSpec {
    /// A workload producing exactly `entries_per_day` entries of exactly
    /// `entry_bytes` bytes every day.
    pub fn constant(horizon_days: u32, entries_per_day: u64, entry_bytes: u64) -> Self {
        Self {
            horizon_days,
            daily_min_entries: entries_per_day,
            daily_max_entries: entries_per_day,
            mean_entry_bytes: entry_bytes,
            entry_size_jitter_fraction: 0.0,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.horizon_days == 0 {
            return Err(Error::config("horizon_days", "must be at least 1"));
        }
        if self.daily_min_entries == 0 {
            return Err(Error::config("daily_min_entries", "must be positive"));
        }
        if self.daily_min_entries > self.daily_max_entries {
            return Err(Error::config(
                "daily_max_entries",
                format!(
                    "must be >= daily_min_entries ({} > {})",
                    self.daily_min_entries, self.daily_max_entries
                ),
            ));
        }
        if self.mean_entry_bytes == 0 {
            return Err(Error::config("mean_entry_bytes", "must be positive"));
        }
        let j = self.entry_size_jitter_fraction;
        if !(0.0..1.0).contains(&j) {
            return Err(Error::config(
                "entry_size_jitter_fraction",
                format!("must be in [0, 1), got {j}"),
            ));
        }
        let w = self.severity_weights.as_array();
        if w.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(Error::config(
                "severity_weights",
                "weights must be finite and non-negative",
            ));
        }
        let sum: f64 = w.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::config(
                "severity_weights",
                format!("must sum to 1, got {sum}"),
            ));
        }
        if self.service_count == 0 {
            return Err(Error::config("service_count", "must be positive"));
        }
        Ok(())
    }

    fn size_factor(&self, u: f64) -> f64 {
        let j = self.entry_size_jitter_fraction;
        1.0 - j + 2.0 * j * u
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DayVolume {
    pub day_index: u32,
    pub entry_count: u64,
    pub total_bytes: u64,
}

/// Per-day entry counts and byte totals, contiguous from day 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<DayVolume>", into = "Vec<DayVolume>")]
pub struct DailyVolumeProfile {
    days: Vec<DayVolume>,
}

impl DailyVolumeProfile {
    pub fn new(days: Vec<DayVolume>) -> Result<Self> {
        for (i, d) in days.iter().enumerate() {
            if d.day_index as usize != i {
                return Err(Error::Format(format!(
                    "day_index {} at position {i}; days must be contiguous from 0",
                    d.day_index
                )));
            }
            if (d.entry_count == 0) != (d.total_bytes == 0) {
                return Err(Error::Format(format!(
                    "day {}: entry_count {} with total_bytes {}; both or neither must be zero",
                    d.day_index, d.entry_count, d.total_bytes
                )));
            }
        }
        Ok(Self { days })
    }

    /// Builds a profile from `(entries, bytes)` pairs, indexing days from 0.
    pub fn from_pairs<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u64, u64)>,
    {
        let days = pairs
            .into_iter()
            .enumerate()
            .map(|(i, (entry_count, total_bytes))| DayVolume {
                day_index: i as u32,
                entry_count,
                total_bytes,
            })
            .collect();
        Self::new(days)
    }

    pub fn days(&self) -> &[DayVolume] {
        &self.days
    }

    pub fn len(&self) -> usize {
        self.days.len()
    }

    pub fn is_empty(&self) -> bool {
        self.days.is_empty()
    }

    /// Sum of entries and bytes over all days.
    pub fn total_volume(&self) -> (u64, u64) {
        self.days
            .iter()
            .fold((0, 0), |(e, b), d| (e + d.entry_count, b + d.total_bytes))
    }

    /// Multiplies every day's byte total by `k`, keeping entry counts.
    pub fn scale_bytes(&self, k: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::config("scale", "byte scale factor must be positive"));
        }
        Ok(Self {
            days: self
                .days
                .iter()
                .map(|d| DayVolume {
                    total_bytes: d.total_bytes * k,
                    ..*d
                })
                .collect(),
        })
    }
}

impl TryFrom<Vec<DayVolume>> for DailyVolumeProfile {
    type Error = Error;

    fn try_from(days: Vec<DayVolume>) -> Result<Self> {
        Self::new(days)
    }
}

impl From<DailyVolumeProfile> for Vec<DayVolume> {
    fn from(p: DailyVolumeProfile) -> Self {
        p.days
    }
}

/// Draws one day's volume from its dedicated stream.
///
/// Each day is independent of every other, so days can be generated in any
/// order (or concurrently) and assembled afterwards.
pub fn sample_day(spec: &WorkloadSpec, day_index: u32) -> Result<DayVolume> {
    spec.validate()?;
    if day_index >= spec.horizon_days {
        return Err(Error::Range {
            what: "day_index",
            index: day_index.into(),
            len: spec.horizon_days.into(),
        });
    }
    Ok(sample_day_unchecked(spec, day_index))
}

fn sample_day_unchecked(spec: &WorkloadSpec, day_index: u32) -> DayVolume {
    let mut rng = rng::stream(spec.seed, Purpose::DailyVolume, day_index.into(), 0);
    let entry_count = rng.random_range(spec.daily_min_entries..=spec.daily_max_entries);
    // always drawn so the stream layout does not depend on the jitter setting
    let u: f64 = rng.random();
    let raw = (entry_count as f64 * spec.mean_entry_bytes as f64 * spec.size_factor(u)).round();
    let total_bytes = if entry_count == 0 {
        0
    } else {
        (raw as u64).max(1)
    };
    DayVolume {
        day_index,
        entry_count,
        total_bytes,
    }
}

pub fn sample_daily_volumes(spec: &WorkloadSpec) -> Result<DailyVolumeProfile> {
    sample_daily_volumes_with(spec, Execution::default())
}

pub fn sample_daily_volumes_with(
    spec: &WorkloadSpec,
    exec: Execution,
) -> Result<DailyVolumeProfile> {
    spec.validate()?;
    let days = exec::map_indices(exec, spec.horizon_days as usize, |d| {
        sample_day_unchecked(spec, d as u32)
    });
    DailyVolumeProfile::new(days)
}

/// One synthetic log record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogEntry {
    /// Seconds since the simulation epoch (day 0, second 0).
    pub timestamp: u64,
    pub severity: Severity,
    pub service_id: u32,
    pub metadata_token: String,
    pub size_bytes: u64,
}

/// Derives the 16-hex-digit metadata token for an entry ordinal.
pub fn metadata_token(seed: u64, day_index: u32, ordinal: u64) -> String {
    let h = rng::mix64(rng::mix64(seed ^ rng::mix64(u64::from(day_index))) ^ ordinal);
    format!("{h:016x}")
}

pub fn generate_entries(
    spec: &WorkloadSpec,
    day_index: u32,
    target_count: usize,
) -> Result<Vec<LogEntry>> {
    generate_entries_with(spec, day_index, target_count, Execution::default())
}

/// Materializes `target_count` entries for one day, sorted by timestamp.
pub fn generate_entries_with(
    spec: &WorkloadSpec,
    day_index: u32,
    target_count: usize,
    exec: Execution,
) -> Result<Vec<LogEntry>> {
    spec.validate()?;
    if day_index >= spec.horizon_days {
        return Err(Error::Range {
            what: "day_index",
            index: day_index.into(),
            len: spec.horizon_days.into(),
        });
    }
    let day_start = u64::from(day_index) * SECONDS_PER_DAY;
    let mut raw = exec::map_chunks(exec, target_count, |chunk, range| {
        let mut rng = rng::stream(spec.seed, Purpose::Entries, day_index.into(), chunk as u64);
        range
            .map(|_| {
                let offset = rng.random_range(0..SECONDS_PER_DAY);
                let severity = spec.severity_weights.pick(rng.random());
                let service_id = rng.random_range(0..spec.service_count);
                let size = (spec.mean_entry_bytes as f64 * spec.size_factor(rng.random())).round();
                (
                    day_start + offset,
                    severity,
                    service_id,
                    (size as u64).max(1),
                )
            })
            .collect()
    });
    // stable, so ties keep generation order
    exec::sort_by_key(exec, &mut raw, |e| e.0);
    Ok(raw
        .into_iter()
        .enumerate()
        .map(
            |(i, (timestamp, severity, service_id, size_bytes))| LogEntry {
                timestamp,
                severity,
                service_id,
                metadata_token: metadata_token(spec.seed, day_index, i as u64),
                size_bytes,
            },
        )
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degenerate_range_gives_constant_days() {
        let spec = WorkloadSpec::constant(90, 100_000, 150);
        let p = sample_daily_volumes(&spec).unwrap();
        assert_eq!(p.len(), 90);
        for d in p.days() {
            assert_eq!(d.entry_count, 100_000);
            assert_eq!(d.total_bytes, 15_000_000);
        }
        assert_eq!(p.total_volume(), (9_000_000, 1_350_000_000));
    }

    #[test]
    fn default_horizon_is_ninety_days() {
        let p = sample_daily_volumes(&WorkloadSpec::default()).unwrap();
        assert_eq!(p.len(), 90);
        let (entries, _) = p.total_volume();
        assert!((9_000_000..=45_000_000).contains(&entries), "{entries}");
    }

    #[test]
    fn daily_mean_matches_uniform_expectation_across_seeds() {
        // Uniform{100k..=500k}: mean 300k, sd = 400_001 / sqrt(12)
        let sd_day = 400_001.0 / 12f64.sqrt();
        let seeds = 0..40u64;
        let n_seeds = seeds.clone().count() as f64;
        let means: Vec<f64> = seeds
            .map(|seed| {
                let p = sample_daily_volumes(&WorkloadSpec {
                    seed,
                    ..Default::default()
                })
                .unwrap();
                p.total_volume().0 as f64 / p.len() as f64
            })
            .collect();
        let grand = means.iter().sum::<f64>() / n_seeds;
        let sd_grand = sd_day / (90.0 * n_seeds).sqrt();
        assert!((grand - 300_000.0).abs() <= 4.0 * sd_grand, "{grand}");
        // [280k, 320k] is about +-1.64 sd of a 90-day mean, so ~90% of seeds land inside
        let inside = means
            .iter()
            .filter(|m| (280_000.0..=320_000.0).contains(*m))
            .count();
        assert!(inside as f64 / n_seeds >= 0.75, "{inside}/{n_seeds}");
    }

    #[test]
    fn counts_respect_bounds_and_bytes_track_jitter() {
        let spec = WorkloadSpec {
            seed: 3,
            horizon_days: 500,
            ..Default::default()
        };
        let p = sample_daily_volumes(&spec).unwrap();
        for d in p.days() {
            assert!((spec.daily_min_entries..=spec.daily_max_entries).contains(&d.entry_count));
            let base = d.entry_count as f64 * spec.mean_entry_bytes as f64;
            let j = spec.entry_size_jitter_fraction;
            let lo = base * (1.0 - j) - d.entry_count as f64;
            let hi = base * (1.0 + j) + d.entry_count as f64;
            assert!((lo..=hi).contains(&(d.total_bytes as f64)));
        }
    }

    #[test]
    fn days_generated_out_of_order_match() {
        let spec = WorkloadSpec {
            seed: 99,
            ..Default::default()
        };
        let whole = sample_daily_volumes(&spec).unwrap();
        let mut order: Vec<u32> = (0..spec.horizon_days).collect();
        order.reverse();
        order.swap(3, 40);
        let mut days: Vec<DayVolume> = order
            .iter()
            .map(|&d| sample_day(&spec, d).unwrap())
            .collect();
        days.sort_by_key(|d| d.day_index);
        assert_eq!(DailyVolumeProfile::new(days).unwrap(), whole);
        let other = sample_daily_volumes(&WorkloadSpec { seed: 100, ..spec }).unwrap();
        assert_ne!(other, whole);
    }

    #[test]
    fn zero_day_profile_totals_zero() {
        let p = DailyVolumeProfile::from_pairs(vec![(0, 0); 5]).unwrap();
        assert_eq!(p.total_volume(), (0, 0));
    }

    #[test]
    fn profile_rejects_gaps_and_bytes_without_entries() {
        let gap = vec![
            DayVolume {
                day_index: 0,
                entry_count: 1,
                total_bytes: 1,
            },
            DayVolume {
                day_index: 2,
                entry_count: 1,
                total_bytes: 1,
            },
        ];
        assert!(DailyVolumeProfile::new(gap).is_err());
        assert!(DailyVolumeProfile::from_pairs([(0, 10)]).is_err());
        assert!(DailyVolumeProfile::from_pairs([(10, 0)]).is_err());
    }

    #[test]
    fn invalid_specs_are_rejected() {
        let bad = [
            WorkloadSpec {
                horizon_days: 0,
                ..Default::default()
            },
            WorkloadSpec {
                daily_min_entries: 10,
                daily_max_entries: 9,
                ..Default::default()
            },
            WorkloadSpec {
                entry_size_jitter_fraction: 1.0,
                ..Default::default()
            },
            WorkloadSpec {
                service_count: 0,
                ..Default::default()
            },
            WorkloadSpec {
                severity_weights: SeverityWeights {
                    debug: 0.5,
                    info: 0.5,
                    warn: 0.5,
                    error: 0.0,
                },
                ..Default::default()
            },
        ];
        for spec in bad {
            let err = sample_daily_volumes(&spec).unwrap_err();
            assert!(err.is_config(), "{err}");
        }
    }

    #[test]
    fn zero_target_gives_empty_stream() {
        let e = generate_entries(&WorkloadSpec::default(), 0, 0).unwrap();
        assert!(e.is_empty());
    }

    #[test]
    fn all_info_weights_give_only_info() {
        let spec = WorkloadSpec {
            severity_weights: SeverityWeights {
                debug: 0.0,
                info: 1.0,
                warn: 0.0,
                error: 0.0,
            },
            ..Default::default()
        };
        let e = generate_entries(&spec, 0, 1000).unwrap();
        assert_eq!(e.len(), 1000);
        assert!(e.iter().all(|x| x.severity == Severity::Info));
    }

    #[test]
    fn day_out_of_range_is_range_error() {
        let err = generate_entries(&WorkloadSpec::default(), 90, 1).unwrap_err();
        assert!(matches!(
            err,
            Error::Range {
                index: 90,
                len: 90,
                ..
            }
        ));
        assert!(matches!(
            sample_day(&WorkloadSpec::default(), 90),
            Err(Error::Range { .. })
        ));
    }

    #[test]
    fn entries_sorted_within_their_day() {
        let spec = WorkloadSpec::default();
        let e = generate_entries(&spec, 5, 20_000).unwrap();
        assert!(e.windows(2).all(|w| w[0].timestamp <= w[1].timestamp));
        let lo = 5 * SECONDS_PER_DAY;
        assert!(e
            .iter()
            .all(|x| (lo..lo + SECONDS_PER_DAY).contains(&x.timestamp)));
        assert!(e
            .iter()
            .all(|x| x.size_bytes >= 1 && x.service_id < spec.service_count));
        assert!(e.iter().all(|x| x.metadata_token.len() == 16));
    }

    #[test]
    fn entry_generation_is_deterministic() {
        let spec = WorkloadSpec {
            seed: 7,
            ..Default::default()
        };
        let a = generate_entries(&spec, 3, 100_000).unwrap();
        let b = generate_entries(&spec, 3, 100_000).unwrap();
        assert_eq!(
            serde_json::to_vec(&a).unwrap(),
            serde_json::to_vec(&b).unwrap()
        );
        let s = generate_entries_with(&spec, 3, 100_000, Execution::Sequential).unwrap();
        assert_eq!(a, s);
    }

    #[test]
    fn severity_pick_never_returns_zero_weight_level() {
        let w = SeverityWeights {
            debug: 0.0,
            info: 0.0,
            warn: 1.0,
            error: 0.0,
        };
        assert_eq!(w.pick(0.0), Severity::Warn);
        assert_eq!(w.pick(0.999_999_999_999), Severity::Warn);
    }
}
