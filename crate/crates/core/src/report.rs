//! Rendering scenario reports as an aligned table, CSV, or JSON.
//!
//! Machine formats carry full precision: floats are printed as the shortest
//! decimal that round-trips. The table rounds percentages to whole percent
//! and normalized CPUL to two decimals.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::metrics::{ScenarioReport, ScenarioRow};
use crate::{Error, Result};

pub const CSV_HEADER: &str =
    "window_days,relative_cost,ulr,cpul_normalized,monthly_run_rate_usd,satisfied_queries,total_queries";

pub const GENERATED_BY: &str = concat!("logret-core ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Table,
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "table" => Ok(Self::Table),
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(Error::config(
                "format",
                format!("unknown output format `{other}` (expected table, csv or json)"),
            )),
        }
    }
}

#[derive(Serialize)]
struct JsonReport<'a> {
    generated_by_version: &'static str,
    config_echo: &'a RunConfig,
    baseline_window_days: u32,
    distribution_name: &'a str,
    seed: u64,
    rows: &'a [ScenarioRow],
}

pub fn emit_report(report: &ScenarioReport, config: &RunConfig, format: OutputFormat) -> String {
    match format {
        OutputFormat::Table => render_table(report),
        OutputFormat::Csv => render_csv(report),
        OutputFormat::Json => render_json(report, config),
    }
}

fn percent(x: f64) -> String {
    format!("{}%", (x * 100.0).round())
}

fn render_table(report: &ScenarioReport) -> String {
    let header = [
        "Retention",
        "Relative Cost",
        "Cost Reduction",
        "ULR",
        "CPUL (norm)",
        "USD/month",
        "Satisfied",
    ];
    let cells: Vec<[String; 7]> = report
        .rows
        .iter()
        .map(|r| {
            let reduction = if r.window_days == report.baseline_window_days {
                "-".to_string()
            } else {
                percent(r.cost_reduction())
            };
            [
                format!("{} days", r.window_days),
                percent(r.relative_cost),
                reduction,
                percent(r.ulr),
                format!("{:.2}", r.cpul_normalized),
                format!("{:.4}", r.monthly_run_rate_usd),
                format!("{}/{}", r.satisfied_queries, r.total_queries),
            ]
        })
        .collect();
    let mut widths = header.map(str::len);
    for row in &cells {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.len());
        }
    }

    let mut out = String::new();
    let _ = writeln!(
        out,
        "baseline {} days | distribution {} | seed {} | ${}/GB-month, {}-day month",
        report.baseline_window_days,
        report.distribution_name,
        report.seed,
        report.pricing.usd_per_gb_month,
        report.pricing.days_per_month
    );
    let line = |out: &mut String, row: &[&str]| {
        let mut s = String::new();
        for (i, (c, w)) in row.iter().zip(&widths).enumerate() {
            if i == 0 {
                let _ = write!(s, "{c:<w$}");
            } else {
                let _ = write!(s, "  {c:>w$}");
            }
        }
        out.push_str(s.trim_end());
        out.push('\n');
    };
    line(&mut out, &header);
    let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
    line(
        &mut out,
        &rule.iter().map(String::as_str).collect::<Vec<_>>(),
    );
    for row in &cells {
        line(
            &mut out,
            &row.iter().map(String::as_str).collect::<Vec<_>>(),
        );
    }
    out
}

fn render_csv(report: &ScenarioReport) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in &report.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.window_days,
            r.relative_cost,
            r.ulr,
            r.cpul_normalized,
            r.monthly_run_rate_usd,
            r.satisfied_queries,
            r.total_queries
        );
    }
    out
}

fn render_json(report: &ScenarioReport, config: &RunConfig) -> String {
    let doc = JsonReport {
        generated_by_version: GENERATED_BY,
        config_echo: config,
        baseline_window_days: report.baseline_window_days,
        distribution_name: &report.distribution_name,
        seed: report.seed,
        rows: &report.rows,
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("report values are serializable");
    s.push('\n');
    s
}
