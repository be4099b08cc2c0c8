//! Cost per useful log and the cross-window scenario matrix.
//!
//! "Useful logs" are counted as satisfied queries. Every window is scored
//! against the same sampled workload, so the ULR columns differ only by
//! retention and the normalized CPUL is exactly
//! `relative_cost / (ulr / ulr_baseline)`.

use serde::{Deserialize, Serialize};

use crate::costmodel::{self, CostReport, PricingModel};
use crate::exec::{self, Execution};
use crate::querysim::{self, AccessDistribution, QueryWorkload};
use crate::retention::{PrefixSums, RetentionPolicy};
use crate::workload::DailyVolumeProfile;
use crate::{Error, Result};

/// Monthly storage cost per satisfied query, in USD.
pub fn cpul(cost: &CostReport, satisfied_queries: u64) -> Result<f64> {
    if satisfied_queries == 0 {
        return Err(Error::UndefinedRatio(format!(
            "no queries satisfied under window {}d",
            cost.window_days
        )));
    }
    Ok(cost.monthly_run_rate_usd / satisfied_queries as f64)
}

/// CPUL of `target` relative to `baseline`, each given with its ULR.
pub fn normalized_cpul(target: (&CostReport, f64), baseline: (&CostReport, f64)) -> Result<f64> {
    let (target_cost, target_ulr) = target;
    let (baseline_cost, baseline_ulr) = baseline;
    if baseline_ulr.is_nan() || baseline_ulr <= 0.0 {
        return Err(Error::UndefinedRatio(format!(
            "baseline window {}d has ULR {baseline_ulr}",
            baseline_cost.window_days
        )));
    }
    if target_ulr.is_nan() || target_ulr <= 0.0 {
        return Err(Error::UndefinedRatio(format!(
            "no queries satisfied under window {}d",
            target_cost.window_days
        )));
    }
    let rel_cost = costmodel::relative_cost(target_cost, baseline_cost)?;
    Ok(rel_cost / (target_ulr / baseline_ulr))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScenarioRow {
    pub window_days: u32,
    pub relative_cost: f64,
    pub ulr: f64,
    pub cpul_normalized: f64,
    pub monthly_run_rate_usd: f64,
    pub satisfied_queries: u64,
    pub total_queries: u64,
}

impl ScenarioRow {
    /// Fraction of baseline storage cost saved.
    pub fn cost_reduction(&self) -> f64 {
        1.0 - self.relative_cost
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioReport {
    /// Sorted by descending window.
    pub rows: Vec<ScenarioRow>,
    pub baseline_window_days: u32,
    pub distribution_name: String,
    pub seed: u64,
    pub pricing: PricingModel,
}

impl ScenarioReport {
    pub fn row(&self, window_days: u32) -> Option<&ScenarioRow> {
        self.rows.iter().find(|r| r.window_days == window_days)
    }
}

/// Inputs to [`scenario_matrix`].
#[derive(Debug, Clone)]
pub struct ScenarioInputs<'a> {
    pub profile: &'a DailyVolumeProfile,
    pub windows: &'a [RetentionPolicy],
    pub distribution: &'a AccessDistribution,
    pub query_count: usize,
    pub query_span_days: f64,
    pub seed: u64,
    pub pricing: PricingModel,
    pub baseline: RetentionPolicy,
}

pub fn scenario_matrix(inputs: &ScenarioInputs<'_>) -> Result<ScenarioReport> {
    scenario_matrix_with(inputs, Execution::default())
}

pub fn scenario_matrix_with(
    inputs: &ScenarioInputs<'_>,
    exec: Execution,
) -> Result<ScenarioReport> {
    let ScenarioInputs {
        profile,
        windows,
        distribution,
        query_count,
        query_span_days,
        seed,
        pricing,
        baseline,
    } = *inputs;
    pricing.validate()?;
    if windows.is_empty() {
        return Err(Error::config("windows", "at least one window required"));
    }
    let mut sorted: Vec<RetentionPolicy> = windows.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    if let Some(dup) = sorted.windows(2).find(|p| p[0] == p[1]) {
        return Err(Error::config(
            "windows",
            format!("window {} listed twice", dup[0].window_days()),
        ));
    }
    if !sorted.contains(&baseline) {
        return Err(Error::config(
            "baseline_window",
            format!(
                "baseline {} is not among the windows",
                baseline.window_days()
            ),
        ));
    }
    if query_count == 0 {
        return Err(Error::config("query_count", "must be at least 1"));
    }
    if !(query_span_days.is_finite() && query_span_days >= 0.0) {
        return Err(Error::config(
            "query_span_days",
            "must be a non-negative number",
        ));
    }
    if profile.is_empty() {
        return Err(Error::EmptyInput("scenario over an empty profile".into()));
    }
    if distribution.max_age() > profile.len() as f64 {
        return Err(Error::config(
            "distribution",
            format!(
                "`{}` reaches {} days back but the profile covers only {} days",
                distribution.name(),
                distribution.max_age(),
                profile.len()
            ),
        ));
    }

    // one workload shared by every window
    let workload =
        querysim::sample_queries_with(distribution, query_count, seed, query_span_days, exec);
    let sums = PrefixSums::new(profile);
    let tag = |policy: RetentionPolicy| {
        move |e: Error| Error::Window {
            window_days: policy.window_days(),
            source: Box::new(e),
        }
    };

    let per_window = exec::map_indices(exec, sorted.len(), |i| {
        let policy = sorted[i];
        let cost = costmodel::storage_cost_from(&sums, policy, &pricing).map_err(tag(policy))?;
        let satisfied = workload.satisfied_count_with(policy, exec) as u64;
        Ok((policy, cost, satisfied))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    let total = workload.len() as u64;
    let (_, base_cost, base_satisfied) = *per_window
        .iter()
        .find(|(p, _, _)| *p == baseline)
        .expect("baseline checked above");
    let base_ulr = base_satisfied as f64 / total as f64;

    let rows = per_window
        .iter()
        .map(|&(policy, cost, satisfied)| {
            let ulr = satisfied as f64 / total as f64;
            let relative_cost = costmodel::relative_cost(&cost, &base_cost).map_err(tag(policy))?;
            let cpul_normalized =
                normalized_cpul((&cost, ulr), (&base_cost, base_ulr)).map_err(tag(policy))?;
            Ok(ScenarioRow {
                window_days: policy.window_days(),
                relative_cost,
                ulr,
                cpul_normalized,
                monthly_run_rate_usd: cost.monthly_run_rate_usd,
                satisfied_queries: satisfied,
                total_queries: total,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(ScenarioReport {
        rows,
        baseline_window_days: baseline.window_days(),
        distribution_name: distribution.name().to_string(),
        seed,
        pricing,
    })
}

/// Scores an existing workload against one window; used by callers that
/// want per-window numbers without the full matrix.
pub fn score(workload: &QueryWorkload, cost: &CostReport) -> Result<(f64, f64)> {
    let policy = RetentionPolicy::new(cost.window_days)?;
    let satisfied = workload.satisfied_count(policy) as u64;
    let ulr = querysim::ulr(workload, policy)?;
    Ok((ulr, cpul(cost, satisfied)?))
}
