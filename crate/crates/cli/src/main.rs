//! `logret`: batch front end for the retention simulator.
//!
//! Exit codes: 0 success, 1 runtime failure, 2 usage or configuration error.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use logret_core::config::{run_scenario, DistributionChoice, ProfileSource, RunConfig};
use logret_core::ingest::{self, IngestFormat, IngestOptions};
use logret_core::querysim::{analytic_ulr, AccessDistribution, PRESET_NAMES};
use logret_core::report::emit_report;
use logret_core::workload::{generate_entries, sample_daily_volumes};
use logret_core::{Error, RetentionPolicy};

#[derive(Parser)]
#[command(
    name = "logret",
    version,
    about = "Log retention cost and usefulness simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate retention windows: storage cost, useful-log ratio, normalized CPUL.
    Run(RunArgs),
    /// Write a synthetic daily profile (and optionally one day of entries).
    Gen(GenArgs),
    /// Parse real log metadata or daily volumes and summarize them.
    Ingest(IngestArgs),
    /// List the built-in access distributions.
    Presets,
}

#[derive(Args)]
struct RunArgs {
    /// JSON run configuration. Flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Seed for the query workload and the synthetic volumes.
    #[arg(long, env = "LOGRET_SEED")]
    seed: Option<u64>,
    /// Comma-separated retention windows in days.
    #[arg(long, value_delimiter = ',')]
    windows: Option<Vec<u32>>,
    #[arg(long)]
    baseline: Option<u32>,
    /// Preset name or @path to a JSON bucket list.
    #[arg(long)]
    dist: Option<String>,
    #[arg(long)]
    queries: Option<usize>,
    /// Extra lookback per query, in days.
    #[arg(long)]
    span: Option<f64>,
    #[arg(long)]
    price_per_gb_month: Option<f64>,
    #[arg(long)]
    days_per_month: Option<f64>,
    #[arg(long)]
    format: Option<String>,
    /// Start from the reference reproduction setup (constant volume, table2, 90/30/14/7).
    #[arg(long)]
    paper: bool,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out_profile: PathBuf,
    #[arg(long, requires = "day")]
    out_entries: Option<PathBuf>,
    #[arg(long, requires = "out_entries")]
    day: Option<u32>,
}

#[derive(Args)]
struct IngestArgs {
    /// jsonl or daily-csv
    #[arg(long)]
    format: String,
    #[arg(long = "in")]
    input: PathBuf,
    /// Start of day 0 (RFC 3339 or YYYY-MM-DD). Default: UTC midnight of the earliest entry.
    #[arg(long)]
    epoch: Option<String>,
    #[arg(long)]
    strict: bool,
    #[arg(long)]
    out_profile: Option<PathBuf>,
}

/// Errors the user can fix by changing arguments or config (exit 2).
#[derive(Debug)]
struct UsageError(anyhow::Error);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:#}", self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(e: impl Into<anyhow::Error>) -> anyhow::Error {
    anyhow::Error::new(UsageError(e.into()))
}

/// Routes core errors to the right exit code.
fn classify(e: Error) -> anyhow::Error {
    if e.is_config() {
        usage(e)
    } else {
        e.into()
    }
}

fn read_config(path: &Path) -> anyhow::Result<RunConfig> {
    read_config_raw(path).map(|(c, _)| c)
}

/// Parsed config plus the raw JSON, so callers can tell which keys were set.
fn read_config_raw(path: &Path) -> anyhow::Result<(RunConfig, serde_json::Value)> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))
        .map_err(usage)?;
    let mut config =
        RunConfig::from_json(&text).map_err(|e| usage(anyhow!("{}: {e}", path.display())))?;
    let raw: serde_json::Value = serde_json::from_str(&text).map_err(usage)?;
    // ingest paths in a config file are relative to the file
    if let ProfileSource::Ingest(src) = &mut config.workload {
        if src.path.is_relative() {
            if let Some(dir) = path.parent() {
                src.path = dir.join(&src.path);
            }
        }
    }
    Ok((config, raw))
}

fn parse_dist(arg: &str) -> anyhow::Result<DistributionChoice> {
    match arg.strip_prefix('@') {
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading distribution {path}"))
                .map_err(usage)?;
            let choice: DistributionChoice = serde_json::from_str(&text)
                .map_err(|e| usage(anyhow!("distribution file {path}: {e}")))?;
            // echo the buckets themselves so the report stays self-contained
            let dist = choice.resolve().map_err(classify)?;
            Ok(DistributionChoice::Named {
                name: dist.name().to_string(),
                buckets: dist.buckets().to_vec(),
            })
        }
        None => Ok(DistributionChoice::Preset(arg.to_string())),
    }
}

fn resolve_run_config(args: &RunArgs) -> anyhow::Result<RunConfig> {
    // precedence: flags > config file > (--paper | built-in) defaults
    let mut config = if args.paper {
        RunConfig::reproduction()
    } else {
        RunConfig::default()
    };
    if let Some(path) = &args.config {
        let (file, raw) = read_config_raw(path)?;
        overlay(&mut config, &file, &raw);
    }
    if let Some(seed) = args.seed {
        config.seed = seed;
        if let ProfileSource::Synthetic(spec) = &mut config.workload {
            spec.seed = seed;
        }
    }
    if let Some(w) = &args.windows {
        config.windows = w.clone();
    }
    if let Some(b) = args.baseline {
        config.baseline_window = b;
    }
    if let Some(d) = &args.dist {
        config.distribution = parse_dist(d)?;
    }
    if let Some(q) = args.queries {
        config.query_count = q;
    }
    if let Some(s) = args.span {
        config.query_span_days = s;
    }
    if let Some(p) = args.price_per_gb_month {
        config.pricing.usd_per_gb_month = p;
    }
    if let Some(d) = args.days_per_month {
        config.pricing.days_per_month = d;
    }
    if let Some(f) = &args.format {
        config.output_format = f.parse().map_err(classify)?;
    }
    config.validate().map_err(classify)?;
    Ok(config)
}

/// Copies the top-level keys present in `raw` from `file` into `base`.
fn overlay(base: &mut RunConfig, file: &RunConfig, raw: &serde_json::Value) {
    let has = |k: &str| raw.get(k).is_some();
    if has("workload") {
        base.workload = file.workload.clone();
    }
    if has("windows") {
        base.windows = file.windows.clone();
    }
    if has("baseline_window") {
        base.baseline_window = file.baseline_window;
    }
    if has("distribution") {
        base.distribution = file.distribution.clone();
    }
    if has("query_count") {
        base.query_count = file.query_count;
    }
    if has("query_span_days") {
        base.query_span_days = file.query_span_days;
    }
    if has("pricing") {
        base.pricing = file.pricing;
    }
    if has("seed") {
        base.seed = file.seed;
    }
    if has("output_format") {
        base.output_format = file.output_format;
    }
}

fn cmd_run(args: RunArgs) -> anyhow::Result<()> {
    let config = resolve_run_config(&args)?;
    let out = run_scenario(&config).map_err(classify)?;
    if let Some(r) = &out.ingest {
        if r.records_rejected > 0 {
            eprintln!(
                "warning: {} of {} records rejected in {}",
                r.records_rejected,
                r.records_read + r.records_rejected,
                r.source_path
            );
        }
    }
    let rendered = emit_report(&out.report, &config, config.output_format);
    io::stdout().lock().write_all(rendered.as_bytes())?;
    Ok(())
}

fn create(path: &Path) -> anyhow::Result<BufWriter<File>> {
    let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(f))
}

fn cmd_gen(args: GenArgs) -> anyhow::Result<()> {
    let config = read_config(&args.config)?;
    let ProfileSource::Synthetic(spec) = &config.workload else {
        return Err(usage(anyhow!(
            "`gen` needs a synthetic workload in the config"
        )));
    };
    let profile = sample_daily_volumes(spec).map_err(classify)?;
    ingest::write_daily_csv(&profile, create(&args.out_profile)?)?;
    let (entries, bytes) = profile.total_volume();
    println!(
        "wrote {} days ({entries} entries, {bytes} bytes) to {}",
        profile.len(),
        args.out_profile.display()
    );
    if let (Some(path), Some(day)) = (args.out_entries, args.day) {
        let Some(d) = profile.days().get(day as usize) else {
            return Err(usage(anyhow!("--day {day} outside 0..{}", profile.len())));
        };
        let list = generate_entries(spec, day, d.entry_count as usize).map_err(classify)?;
        ingest::write_entries_jsonl(&list, create(&path)?)?;
        println!(
            "wrote {} entries for day {day} to {}",
            list.len(),
            path.display()
        );
    }
    Ok(())
}

fn cmd_ingest(args: IngestArgs) -> anyhow::Result<()> {
    let format: IngestFormat = args.format.parse().map_err(classify)?;
    let epoch = match &args.epoch {
        Some(s) => Some(
            ingest::parse_timestamp(s)
                .ok_or_else(|| usage(anyhow!("--epoch: unparseable timestamp `{s}`")))?,
        ),
        None => None,
    };
    let opts = IngestOptions {
        epoch,
        strict: args.strict,
    };
    let (profile, report) = ingest::ingest_path(&args.input, format, &opts).map_err(classify)?;
    let (entries, bytes) = profile.total_volume();
    println!("source:    {}", report.source_path);
    println!("accepted:  {}", report.records_read);
    println!("rejected:  {}", report.records_rejected);
    println!("days:      {}", profile.len());
    println!("entries:   {entries}");
    println!("bytes:     {bytes}");
    for r in &report.rejection_samples {
        println!("  line {}: {}", r.line, r.reason);
    }
    if let Some(path) = args.out_profile {
        ingest::write_daily_csv(&profile, create(&path)?)?;
        println!("profile written to {}", path.display());
    }
    Ok(())
}

fn cmd_presets() -> anyhow::Result<()> {
    let windows = [7u32, 14, 30, 90];
    for name in PRESET_NAMES {
        let d = AccessDistribution::preset(name)?;
        println!("{name}");
        for b in d.buckets() {
            println!(
                "  ({:>4}, {:>4}] days  p = {}",
                b.age_lo, b.age_hi, b.probability
            );
        }
        let ulrs: Vec<String> = windows
            .iter()
            .map(|&w| {
                let u = analytic_ulr(&d, RetentionPolicy::new(w).expect("nonzero"), 0.0);
                format!("{w}d={u:.4}")
            })
            .collect();
        println!("  expected ULR: {}", ulrs.join(" "));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Gen(a) => cmd_gen(a),
        Command::Ingest(a) => cmd_ingest(a),
        Command::Presets => cmd_presets(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.is::<UsageError>() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
