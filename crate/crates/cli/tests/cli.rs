use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn logret(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_logret"))
        .args(args)
        .env_remove("LOGRET_SEED")
        .output()
        .expect("spawn logret")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn reproduction_flag_prints_four_sorted_rows() {
    let o = logret(&["run", "--paper"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let rows: Vec<&str> = out.lines().skip(3).collect();
    assert_eq!(rows.len(), 4);
    assert!(rows[0].starts_with("90 days") && rows[3].starts_with("7 days"));
    assert!(
        rows[2].contains("16%") && rows[2].contains("84%"),
        "{}",
        rows[2]
    );
}

#[test]
fn baseline_only_csv() {
    let o = logret(&["run", "--paper", "--windows", "90", "--format", "csv"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(
        lines[0],
        "window_days,relative_cost,ulr,cpul_normalized,monthly_run_rate_usd,satisfied_queries,total_queries"
    );
    assert_eq!(lines.len(), 2);
    assert!(lines[1].starts_with("90,1,1,1,"));
}

#[test]
fn json_echoes_resolved_config() {
    let o = logret(&[
        "run",
        "--format",
        "json",
        "--queries",
        "500",
        "--span",
        "1.5",
    ]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let echo = &v["config_echo"];
    assert_eq!(echo["query_count"], 500);
    assert_eq!(echo["query_span_days"], 1.5);
    assert_eq!(echo["windows"], serde_json::json!([7, 14, 30, 90]));
    assert_eq!(echo["workload"]["synthetic"]["mean_entry_bytes"], 150);
    assert_eq!(v["rows"].as_array().unwrap().len(), 4);
    assert!(v["generated_by_version"]
        .as_str()
        .unwrap()
        .starts_with("logret-core"));
}

#[test]
fn echoed_config_reproduces_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let first = logret(&[
        "run",
        "--format",
        "json",
        "--seed",
        "9",
        "--dist",
        "sre-default",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&first.stdout).unwrap();
    let cfg = dir.path().join("echo.json");
    fs::write(&cfg, v["config_echo"].to_string()).unwrap();
    let again = logret(&["run", "--config", p(&cfg)]);
    assert_eq!(first.stdout, again.stdout);
}

#[test]
fn flags_override_file_and_env_seed_applies() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    fs::write(
        &cfg,
        r#"{"seed": 1, "output_format": "csv", "query_count": 300}"#,
    )
    .unwrap();
    let from_file = logret(&["run", "--config", p(&cfg)]);
    let flagged = logret(&["run", "--config", p(&cfg), "--format", "json"]);
    assert!(stdout(&from_file).starts_with("window_days,"));
    let v: serde_json::Value = serde_json::from_slice(&flagged.stdout).unwrap();
    assert_eq!(v["config_echo"]["query_count"], 300);
    assert_eq!(v["seed"], 1);

    let env = Command::new(env!("CARGO_BIN_EXE_logret"))
        .args(["run", "--config", p(&cfg), "--format", "json"])
        .env("LOGRET_SEED", "77")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&env.stdout).unwrap();
    assert_eq!(v["seed"], 77);
    let both = Command::new(env!("CARGO_BIN_EXE_logret"))
        .args(["run", "--format", "json", "--seed", "5"])
        .env("LOGRET_SEED", "77")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&both.stdout).unwrap();
    assert_eq!(v["seed"], 5);
}

#[test]
fn distribution_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().join("d.json");
    fs::write(&d, r#"[{"age_lo": 0, "age_hi": 10, "probability": 0.5}, {"age_lo": 10, "age_hi": 20, "probability": 0.5}]"#).unwrap();
    let arg = format!("@{}", p(&d));
    let o = logret(&[
        "run",
        "--dist",
        &arg,
        "--windows",
        "10,90",
        "--baseline",
        "90",
        "--format",
        "json",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let ulr10 = v["rows"][1]["ulr"].as_f64().unwrap();
    assert!((ulr10 - 0.5).abs() < 0.02, "{ulr10}");
    assert_eq!(
        v["config_echo"]["distribution"]["buckets"]
            .as_array()
            .unwrap()
            .len(),
        2
    );
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    for (args, needle) in [
        (vec!["run", "--windows", "7,14"], "baseline_window"),
        (vec!["run", "--queries", "0"], "query_count"),
        (vec!["run", "--dist", "weekly"], "weekly"),
        (vec!["run", "--format", "xml"], "format"),
        (vec!["run", "--price-per-gb-month", "0"], "usd_per_gb_month"),
        (vec!["run", "--config", "/nonexistent/cfg.json"], "cfg.json"),
        (vec!["frobnicate"], ""),
    ] {
        let o = logret(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(
            String::from_utf8_lossy(&o.stderr).contains(needle),
            "{args:?}"
        );
    }
    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"windowz": [1]}"#).unwrap();
    assert_eq!(logret(&["run", "--config", p(&bad)]).status.code(), Some(2));
}

#[test]
fn runtime_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    // every query is older than the 7-day window: undefined CPUL
    let d = dir.path().join("old.json");
    fs::write(&d, r#"[{"age_lo": 30, "age_hi": 60, "probability": 1}]"#).unwrap();
    let arg = format!("@{}", p(&d));
    let o = logret(&["run", "--dist", &arg, "--windows", "7,90"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("window 7d"));

    let missing = logret(&["ingest", "--format", "jsonl", "--in", "/nonexistent.jsonl"]);
    assert_eq!(missing.status.code(), Some(1));
}

#[test]
fn gen_then_ingest_then_run() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("gen.json");
    fs::write(&cfg, r#"{"workload": {"synthetic": {"seed": 3, "daily_min_entries": 1000, "daily_max_entries": 5000}}}"#).unwrap();
    let profile = dir.path().join("profile.csv");
    let entries = dir.path().join("day4.jsonl");
    let o = logret(&[
        "gen",
        "--config",
        p(&cfg),
        "--out-profile",
        p(&profile),
        "--out-entries",
        p(&entries),
        "--day",
        "4",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(&profile).unwrap();
    assert_eq!(csv.lines().count(), 91);
    let day4: u64 = csv
        .lines()
        .nth(5)
        .unwrap()
        .split(',')
        .nth(1)
        .unwrap()
        .parse()
        .unwrap();
    assert_eq!(
        fs::read_to_string(&entries).unwrap().lines().count() as u64,
        day4
    );

    let reprofile = dir.path().join("again.csv");
    let o = logret(&[
        "ingest",
        "--format",
        "daily-csv",
        "--in",
        p(&profile),
        "--out-profile",
        p(&reprofile),
    ]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("accepted:  90"));
    assert_eq!(fs::read_to_string(&reprofile).unwrap(), csv);

    let o = logret(&[
        "ingest",
        "--format",
        "jsonl",
        "--in",
        p(&entries),
        "--epoch",
        "1970-01-01T00:00:00Z",
    ]);
    assert!(o.status.success());
    assert!(stdout(&o).contains(&format!("entries:   {day4}")));

    // an ingest source in a config file resolves relative to the file
    let run_cfg = dir.path().join("run.json");
    fs::write(
        &run_cfg,
        r#"{"workload": {"ingest": {"format": "daily-csv", "path": "profile.csv"}}, "format": 1}"#,
    )
    .unwrap();
    assert_eq!(
        logret(&["run", "--config", p(&run_cfg)]).status.code(),
        Some(2)
    );
    fs::write(&run_cfg, r#"{"workload": {"ingest": {"format": "daily-csv", "path": "profile.csv"}}, "output_format": "csv"}"#).unwrap();
    let o = logret(&["run", "--config", p(&run_cfg)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o).lines().count(), 5);
}

#[test]
fn strict_ingest_stops_at_bad_line() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("e.jsonl");
    fs::write(
        &f,
        "{\"ts\": 1, \"size_bytes\": 3}\nnope\n{\"ts\": 2, \"size_bytes\": 3}\n",
    )
    .unwrap();
    let lenient = logret(&["ingest", "--format", "jsonl", "--in", p(&f)]);
    assert!(lenient.status.success());
    let out = stdout(&lenient);
    assert!(out.contains("rejected:  1") && out.contains("line 2"));
    let strict = logret(&["ingest", "--format", "jsonl", "--in", p(&f), "--strict"]);
    assert_eq!(strict.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&strict.stderr).contains("line 2"));
}

#[test]
fn presets_lists_both() {
    let o = logret(&["presets"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("sre-default") && out.contains("table2"));
    assert!(out.contains("7d=0.9500"));
}
