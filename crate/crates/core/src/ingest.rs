//! Loading real deployment data into a [`DailyVolumeProfile`].
//!
//! Two input shapes are accepted:
//!
//! * newline-delimited JSON, one record per log entry:
//!   `{"ts": <RFC 3339 string | epoch seconds>, "size_bytes": <int>, "severity": <str>?, "service": <str>?}`
//! * a daily aggregate CSV with the header `day,entries,bytes`, where `day`
//!   is a 0-based index or an ISO date.
//!
//! Parsing is lenient by default: malformed records are counted, up to
//! [`MAX_REJECTION_SAMPLES`] of them are kept with their line numbers, and
//! the rest of the input is still used. Strict mode fails on the first one.

use std::borrow::Cow;
use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;
use std::str::FromStr;

use chrono::{DateTime, NaiveDate, NaiveDateTime};
use serde::{Deserialize, Serialize};

use crate::workload::{DailyVolumeProfile, DayVolume, LogEntry};
use crate::{Error, Result, SECONDS_PER_DAY};

pub const MAX_REJECTION_SAMPLES: usize = 10;

pub const DAILY_CSV_HEADER: [&str; 3] = ["day", "entries", "bytes"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IngestFormat {
    Jsonl,
    DailyCsv,
}

impl FromStr for IngestFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "jsonl" => Ok(Self::Jsonl),
            "daily-csv" => Ok(Self::DailyCsv),
            other => Err(Error::config(
                "format",
                format!("unknown ingest format `{other}` (expected jsonl or daily-csv)"),
            )),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IngestOptions {
    /// Unix seconds of day 0. Defaults to UTC midnight of the earliest entry.
    pub epoch: Option<i64>,
    pub strict: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rejection {
    pub line: u64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestReport {
    pub source_path: String,
    pub records_read: u64,
    pub records_rejected: u64,
    /// First and last day (relative to the epoch) that held any record.
    pub first_day: Option<u32>,
    pub last_day: Option<u32>,
    pub rejection_samples: Vec<Rejection>,
}

impl IngestReport {
    fn new() -> Self {
        Self {
            source_path: "<stream>".into(),
            records_read: 0,
            records_rejected: 0,
            first_day: None,
            last_day: None,
            rejection_samples: Vec::new(),
        }
    }

    fn reject(&mut self, strict: bool, line: u64, reason: String) -> Result<()> {
        if strict {
            return Err(Error::Parse { line, reason });
        }
        self.records_rejected += 1;
        if self.rejection_samples.len() < MAX_REJECTION_SAMPLES {
            self.rejection_samples.push(Rejection { line, reason });
        }
        Ok(())
    }
}

/// Parses an RFC 3339 timestamp, a naive `YYYY-MM-DDTHH:MM:SS[.f]` (taken
/// as UTC) or a bare date, returning Unix seconds.
pub fn parse_timestamp(s: &str) -> Option<i64> {
    if let Ok(t) = DateTime::parse_from_rfc3339(s) {
        return Some(t.timestamp());
    }
    for fmt in ["%Y-%m-%dT%H:%M:%S%.f", "%Y-%m-%d %H:%M:%S%.f"] {
        if let Ok(t) = NaiveDateTime::parse_from_str(s, fmt) {
            return Some(t.and_utc().timestamp());
        }
    }
    NaiveDate::parse_from_str(s, "%Y-%m-%d")
        .ok()
        .map(|d| d.and_time(chrono::NaiveTime::MIN).and_utc().timestamp())
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawTs<'a> {
    Seconds(i64),
    Text(#[serde(borrow)] Cow<'a, str>),
}

#[derive(Deserialize)]
struct RawEntry<'a> {
    #[serde(borrow)]
    ts: RawTs<'a>,
    size_bytes: u64,
    #[serde(default, borrow)]
    #[allow(dead_code)]
    severity: Option<Cow<'a, str>>,
    #[serde(default, borrow)]
    #[allow(dead_code)]
    service: Option<Cow<'a, str>>,
}

fn parse_entry(line: &[u8]) -> std::result::Result<(i64, u64), String> {
    if line.first() != Some(&b'{') {
        return Err("record is not a JSON object".into());
    }
    let raw: RawEntry<'_> =
        serde_json::from_slice(line).map_err(|e| format!("invalid record: {e}"))?;
    let ts = match raw.ts {
        RawTs::Seconds(s) => s,
        RawTs::Text(t) => {
            parse_timestamp(&t).ok_or_else(|| format!("unparseable timestamp `{t}`"))?
        }
    };
    if raw.size_bytes == 0 {
        return Err("size_bytes must be positive".into());
    }
    Ok((ts, raw.size_bytes))
}

/// Buckets newline-delimited JSON log records into days.
pub fn parse_entry_lines<R: BufRead>(
    mut source: R,
    opts: &IngestOptions,
) -> Result<(DailyVolumeProfile, IngestReport)> {
    let mut report = IngestReport::new();
    let mut accepted: Vec<(u64, i64, u64)> = Vec::new();
    let mut buf = Vec::with_capacity(256);
    let mut line_no = 0u64;
    loop {
        buf.clear();
        if source.read_until(b'\n', &mut buf)? == 0 {
            break;
        }
        line_no += 1;
        let line = buf.trim_ascii();
        if line.is_empty() {
            continue;
        }
        match parse_entry(line) {
            Ok((ts, size)) => accepted.push((line_no, ts, size)),
            Err(reason) => report.reject(opts.strict, line_no, reason)?,
        }
    }

    let epoch = match opts.epoch {
        Some(e) => e,
        None => match accepted.iter().map(|a| a.1).min() {
            Some(min) => min.div_euclid(SECONDS_PER_DAY as i64) * SECONDS_PER_DAY as i64,
            None => 0,
        },
    };

    let mut days: Vec<(u64, u64)> = Vec::new();
    for (line, ts, size) in accepted {
        if ts < epoch {
            report.reject(
                opts.strict,
                line,
                format!("timestamp {ts} precedes epoch {epoch}"),
            )?;
            continue;
        }
        let day = ((ts - epoch) as u64 / SECONDS_PER_DAY) as usize;
        if day >= u32::MAX as usize {
            report.reject(
                opts.strict,
                line,
                format!("timestamp {ts} too far past epoch"),
            )?;
            continue;
        }
        if day >= days.len() {
            days.resize(day + 1, (0, 0));
        }
        days[day].0 += 1;
        days[day].1 += size;
        report.records_read += 1;
    }
    report.first_day = days.iter().position(|d| d.0 > 0).map(|d| d as u32);
    report.last_day = days.len().checked_sub(1).map(|d| d as u32);
    Ok((DailyVolumeProfile::from_pairs(days)?, report))
}

enum DayKey {
    Index(u32),
    Date(NaiveDate),
}

fn parse_csv_row(rec: &csv::StringRecord) -> std::result::Result<(DayKey, u64, u64), String> {
    if rec.len() != 3 {
        return Err(format!("expected 3 fields, found {}", rec.len()));
    }
    let day_field = rec[0].trim();
    let day = if let Ok(i) = day_field.parse::<u32>() {
        DayKey::Index(i)
    } else if let Ok(d) = NaiveDate::parse_from_str(day_field, "%Y-%m-%d") {
        DayKey::Date(d)
    } else {
        return Err(format!(
            "day `{day_field}` is neither an index nor a YYYY-MM-DD date"
        ));
    };
    let num = |name: &str, s: &str| -> std::result::Result<u64, String> {
        let v: i128 = s
            .trim()
            .parse()
            .map_err(|_| format!("{name} `{s}` is not an integer"))?;
        if v < 0 {
            return Err(format!("{name} is negative ({v})"));
        }
        u64::try_from(v).map_err(|_| format!("{name} `{s}` overflows"))
    };
    let entries = num("entries", &rec[1])?;
    let bytes = num("bytes", &rec[2])?;
    if (entries == 0) != (bytes == 0) {
        return Err(format!(
            "entries {entries} with bytes {bytes}; both or neither must be zero"
        ));
    }
    Ok((day, entries, bytes))
}

/// Reads a `day,entries,bytes` CSV into a profile, zero-filling missing days.
pub fn parse_daily_csv<R: Read>(
    source: R,
    opts: &IngestOptions,
) -> Result<(DailyVolumeProfile, IngestReport)> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(source);
    let header = rdr.headers().map_err(csv_error)?.clone();
    let names: Vec<&str> = header.iter().map(str::trim).collect();
    if names != DAILY_CSV_HEADER {
        return Err(Error::Format(format!(
            "expected header `{}`, found `{}`",
            DAILY_CSV_HEADER.join(","),
            names.join(",")
        )));
    }

    let mut report = IngestReport::new();
    let mut indexed: BTreeMap<u32, (u64, u64)> = BTreeMap::new();
    let mut dated: BTreeMap<NaiveDate, (u64, u64)> = BTreeMap::new();
    let mut rec = csv::StringRecord::new();
    loop {
        match rdr.read_record(&mut rec) {
            Ok(false) => break,
            Ok(true) => {}
            Err(e) => {
                let line = e.position().map_or(0, |p| p.line());
                report.reject(opts.strict, line, e.to_string())?;
                continue;
            }
        }
        let line = rec.position().map_or(0, |p| p.line());
        if rec.iter().all(|f| f.trim().is_empty()) {
            continue;
        }
        let (day, entries, bytes) = match parse_csv_row(&rec) {
            Ok(v) => v,
            Err(reason) => {
                report.reject(opts.strict, line, reason)?;
                continue;
            }
        };
        let duplicate = match day {
            DayKey::Index(i) => indexed.insert(i, (entries, bytes)).is_some(),
            DayKey::Date(d) => dated.insert(d, (entries, bytes)).is_some(),
        };
        if duplicate {
            return Err(Error::Format(format!(
                "line {line}: duplicate day `{}`",
                &rec[0]
            )));
        }
        if !indexed.is_empty() && !dated.is_empty() {
            return Err(Error::Format(format!(
                "line {line}: day column mixes integer indices and dates"
            )));
        }
        report.records_read += 1;
    }

    if let Some(&first) = dated.keys().next() {
        for (date, v) in dated {
            let offset = (date - first).num_days();
            let idx = u32::try_from(offset)
                .map_err(|_| Error::Format(format!("date {date} too far from {first}")))?;
            indexed.insert(idx, v);
        }
    }
    let len = indexed.keys().next_back().map_or(0, |&d| d as usize + 1);
    let mut days = vec![(0, 0); len];
    for (&d, &v) in &indexed {
        days[d as usize] = v;
    }
    report.first_day = indexed.iter().find(|(_, v)| v.0 > 0).map(|(&d, _)| d);
    report.last_day = len.checked_sub(1).map(|d| d as u32);
    Ok((DailyVolumeProfile::from_pairs(days)?, report))
}

fn csv_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Format(format!("{other:?}")),
    }
}

/// Opens `path` and parses it in the given format.
pub fn ingest_path(
    path: &Path,
    format: IngestFormat,
    opts: &IngestOptions,
) -> Result<(DailyVolumeProfile, IngestReport)> {
    let file = File::open(path)?;
    let (profile, mut report) = match format {
        IngestFormat::Jsonl => parse_entry_lines(BufReader::new(file), opts)?,
        IngestFormat::DailyCsv => parse_daily_csv(BufReader::new(file), opts)?,
    };
    report.source_path = path.display().to_string();
    Ok((profile, report))
}

/// Sums two profiles day by day; the result spans the longer of the two.
pub fn merge(a: &DailyVolumeProfile, b: &DailyVolumeProfile) -> DailyVolumeProfile {
    let len = a.len().max(b.len());
    let get = |p: &DailyVolumeProfile, i: usize| {
        p.days()
            .get(i)
            .map_or((0, 0), |d| (d.entry_count, d.total_bytes))
    };
    DailyVolumeProfile::from_pairs((0..len).map(|i| {
        let (x, y) = (get(a, i), get(b, i));
        (x.0 + y.0, x.1 + y.1)
    }))
    .expect("sum of valid profiles is valid")
}

pub fn write_daily_csv<W: Write>(profile: &DailyVolumeProfile, out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(DAILY_CSV_HEADER).map_err(csv_error)?;
    for DayVolume {
        day_index,
        entry_count,
        total_bytes,
    } in profile.days()
    {
        w.write_record([
            day_index.to_string(),
            entry_count.to_string(),
            total_bytes.to_string(),
        ])
        .map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct EntryRecord<'a> {
    ts: u64,
    size_bytes: u64,
    severity: &'a str,
    service: String,
    token: &'a str,
}

/// Writes entries in the JSONL shape accepted by [`parse_entry_lines`],
/// with simulation seconds as epoch seconds.
pub fn write_entries_jsonl<W: Write>(entries: &[LogEntry], mut out: W) -> Result<()> {
    for e in entries {
        let rec = EntryRecord {
            ts: e.timestamp,
            size_bytes: e.size_bytes,
            severity: e.severity.as_str(),
            service: format!("svc-{}", e.service_id),
            token: &e.metadata_token,
        };
        serde_json::to_writer(&mut out, &rec)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}
