//! Operational query workloads and the useful-log ratio.
//!
//! A query needs every log entry back to its oldest required age
//! (`age_days + span_days`); it is satisfied when that age is within the
//! retention window. Ages are drawn from an [`AccessDistribution`]: pick a
//! bucket by probability, then an age uniform in its half-open interval
//! `(age_lo, age_hi]`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::exec::{self, Execution};
use crate::retention::RetentionPolicy;
use crate::rng::{self, Purpose};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgeBucket {
    pub age_lo: f64,
    pub age_hi: f64,
    pub probability: f64,
}

impl AgeBucket {
    pub const fn new(age_lo: f64, age_hi: f64, probability: f64) -> Self {
        Self {
            age_lo,
            age_hi,
            probability,
        }
    }

    /// Fraction of this bucket's ages `a` with `a + span <= window`.
    fn satisfied_fraction(&self, window: f64, span: f64) -> f64 {
        let limit = window - span;
        if limit >= self.age_hi {
            1.0
        } else if limit <= self.age_lo {
            0.0
        } else {
            (limit - self.age_lo) / (self.age_hi - self.age_lo)
        }
    }
}

/// Probability distribution over the age of the logs a query targets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawDistribution")]
pub struct AccessDistribution {
    name: String,
    buckets: Vec<AgeBucket>,
    // running sums of bucket probabilities; last is forced to 1
    #[serde(skip)]
    cumulative: Vec<f64>,
}

#[derive(Deserialize)]
struct RawDistribution {
    name: String,
    buckets: Vec<AgeBucket>,
}

impl TryFrom<RawDistribution> for AccessDistribution {
    type Error = Error;

    fn try_from(raw: RawDistribution) -> Result<Self> {
        Self::new(raw.name, raw.buckets)
    }
}

pub const PRESET_NAMES: [&str; 2] = ["sre-default", "table2"];

impl AccessDistribution {
    pub fn new(name: impl Into<String>, buckets: Vec<AgeBucket>) -> Result<Self> {
        let name = name.into();
        if buckets.is_empty() {
            return Err(Error::config(
                "distribution",
                "at least one bucket required",
            ));
        }
        let mut prev_hi = 0.0;
        for (i, b) in buckets.iter().enumerate() {
            let finite = b.age_lo.is_finite() && b.age_hi.is_finite() && b.probability.is_finite();
            if !finite || b.age_lo < 0.0 || b.age_hi <= b.age_lo {
                return Err(Error::config(
                    "distribution",
                    format!(
                        "bucket {i}: need 0 <= age_lo < age_hi, got ({}, {}]",
                        b.age_lo, b.age_hi
                    ),
                ));
            }
            if !(0.0..=1.0).contains(&b.probability) {
                return Err(Error::config(
                    "distribution",
                    format!("bucket {i}: probability {} outside [0, 1]", b.probability),
                ));
            }
            if i > 0 && b.age_lo < prev_hi {
                return Err(Error::config(
                    "distribution",
                    format!("bucket {i} overlaps or precedes bucket {}", i - 1),
                ));
            }
            prev_hi = b.age_hi;
        }
        let sum: f64 = buckets.iter().map(|b| b.probability).sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::config(
                "distribution",
                format!("probabilities sum to {sum}, expected 1"),
            ));
        }
        let mut acc = 0.0;
        let mut cumulative: Vec<f64> = buckets
            .iter()
            .map(|b| {
                acc += b.probability;
                acc
            })
            .collect();
        *cumulative.last_mut().unwrap() = 1.0;
        Ok(Self {
            name,
            buckets,
            cumulative,
        })
    }

    /// Looks up a built-in distribution.
    ///
    /// * `sre-default`: 80% of queries within 7 days, 15% in (7, 30], 5% in
    ///   (30, 90] (the open-ended tail is capped at a 90-day history).
    /// * `table2`: masses chosen so point-query ULR at 7/14/30/90 days is
    ///   exactly 0.95/0.97/0.98/1.00.
    pub fn preset(name: &str) -> Result<Self> {
        let buckets = match name {
            "sre-default" => vec![
                AgeBucket::new(0.0, 7.0, 0.80),
                AgeBucket::new(7.0, 30.0, 0.15),
                AgeBucket::new(30.0, 90.0, 0.05),
            ],
            "table2" => vec![
                AgeBucket::new(0.0, 7.0, 0.95),
                AgeBucket::new(7.0, 14.0, 0.02),
                AgeBucket::new(14.0, 30.0, 0.01),
                AgeBucket::new(30.0, 90.0, 0.02),
            ],
            other => return Err(Error::UnknownPreset(other.to_string())),
        };
        Self::new(name, buckets)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn buckets(&self) -> &[AgeBucket] {
        &self.buckets
    }

    pub fn max_age(&self) -> f64 {
        self.buckets.last().map_or(0.0, |b| b.age_hi)
    }

    /// The same distribution with every bucket moved `by` days older.
    pub fn shifted(&self, by: f64) -> Result<Self> {
        let buckets = self
            .buckets
            .iter()
            .map(|b| AgeBucket::new(b.age_lo + by, b.age_hi + by, b.probability))
            .collect();
        Self::new(format!("{}+{by}", self.name), buckets)
    }

    fn bucket_for(&self, u: f64) -> &AgeBucket {
        let i = self.cumulative.partition_point(|&c| c <= u);
        // zero-probability buckets can share a cumulative value with their
        // predecessor; partition_point already skips past them
        &self.buckets[i.min(self.buckets.len() - 1)]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Query {
    pub age_days: f64,
    pub span_days: f64,
}

impl Query {
    pub fn oldest_required_age(&self) -> f64 {
        self.age_days + self.span_days
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryWorkload {
    pub queries: Vec<Query>,
    pub seed: u64,
    pub distribution_name: String,
}

impl QueryWorkload {
    pub fn len(&self) -> usize {
        self.queries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.queries.is_empty()
    }

    pub fn satisfied_count(&self, policy: RetentionPolicy) -> usize {
        self.satisfied_count_with(policy, Execution::default())
    }

    pub fn satisfied_count_with(&self, policy: RetentionPolicy, exec: Execution) -> usize {
        exec::count_where(exec, &self.queries, |q| is_satisfied(q, policy))
    }
}

pub fn sample_queries(
    dist: &AccessDistribution,
    count: usize,
    seed: u64,
    span_days: f64,
) -> QueryWorkload {
    sample_queries_with(dist, count, seed, span_days, Execution::default())
}

pub fn sample_queries_with(
    dist: &AccessDistribution,
    count: usize,
    seed: u64,
    span_days: f64,
    exec: Execution,
) -> QueryWorkload {
    let queries = exec::map_chunks(exec, count, |chunk, range| {
        let mut rng = rng::stream(seed, Purpose::Queries, 0, chunk as u64);
        range
            .map(|_| {
                let bucket = dist.bucket_for(rng.random());
                let u: f64 = rng.random();
                // u in [0, 1) maps onto (lo, hi]
                let age_days = bucket.age_hi - u * (bucket.age_hi - bucket.age_lo);
                Query {
                    age_days,
                    span_days,
                }
            })
            .collect()
    });
    QueryWorkload {
        queries,
        seed,
        distribution_name: dist.name.clone(),
    }
}

pub fn is_satisfied(q: &Query, policy: RetentionPolicy) -> bool {
    q.oldest_required_age() <= f64::from(policy.window_days())
}

/// Fraction of the workload's queries satisfied under `policy`.
pub fn ulr(workload: &QueryWorkload, policy: RetentionPolicy) -> Result<f64> {
    if workload.is_empty() {
        return Err(Error::UndefinedRatio(
            "ULR of an empty query workload".into(),
        ));
    }
    Ok(workload.satisfied_count(policy) as f64 / workload.len() as f64)
}

/// Expected ULR in closed form, assuming ages uniform within each bucket.
pub fn analytic_ulr(dist: &AccessDistribution, policy: RetentionPolicy, span_days: f64) -> f64 {
    analytic_ulr_at(dist, f64::from(policy.window_days()), span_days)
}

/// [`analytic_ulr`] for a real-valued window.
pub fn analytic_ulr_at(dist: &AccessDistribution, window_days: f64, span_days: f64) -> f64 {
    let p: f64 = dist
        .buckets
        .iter()
        .map(|b| b.probability * b.satisfied_fraction(window_days, span_days))
        .sum();
    p.clamp(0.0, 1.0)
}
