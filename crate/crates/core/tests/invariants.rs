use logret_core::ingest::{self, IngestOptions};
use logret_core::querysim::{analytic_ulr, sample_queries, ulr, AccessDistribution, PRESET_NAMES};
use logret_core::workload::{generate_entries, sample_daily_volumes};
use logret_core::{RetentionPolicy, WorkloadSpec};
use proptest::prelude::*;

#[test]
fn sampled_ulr_tracks_analytic_for_presets() {
    let n = 10_000;
    for name in PRESET_NAMES {
        let dist = AccessDistribution::preset(name).unwrap();
        for seed in 0..12 {
            let wl = sample_queries(&dist, n, seed, 0.0);
            for window in [1, 7, 10, 14, 21, 30, 45, 60, 90] {
                let policy = RetentionPolicy::new(window).unwrap();
                let p = analytic_ulr(&dist, policy, 0.0);
                let tol = 3.0 * (p * (1.0 - p) / n as f64).sqrt();
                let got = ulr(&wl, policy).unwrap();
                assert!(
                    (got - p).abs() <= tol + 1e-12,
                    "{name} seed {seed} window {window}: {got} vs {p} ± {tol}"
                );
            }
        }
    }
}

#[test]
fn materialized_days_add_up_to_the_profile() {
    let spec = WorkloadSpec {
        horizon_days: 6,
        daily_min_entries: 1_000,
        daily_max_entries: 20_000,
        seed: 8,
        ..Default::default()
    };
    let profile = sample_daily_volumes(&spec).unwrap();
    let mut materialized = 0u64;
    let mut jsonl = Vec::new();
    for d in profile.days() {
        let entries = generate_entries(&spec, d.day_index, d.entry_count as usize).unwrap();
        materialized += entries.len() as u64;
        ingest::write_entries_jsonl(&entries, &mut jsonl).unwrap();
    }
    assert_eq!(materialized, profile.total_volume().0);

    // re-ingesting the entries recovers the per-day counts
    let opts = IngestOptions {
        epoch: Some(0),
        strict: true,
    };
    let (back, report) = ingest::parse_entry_lines(jsonl.as_slice(), &opts).unwrap();
    assert_eq!(report.records_read, materialized);
    let counts: Vec<u64> = back.days().iter().map(|d| d.entry_count).collect();
    let expected: Vec<u64> = profile.days().iter().map(|d| d.entry_count).collect();
    assert_eq!(counts, expected);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn profile_csv_round_trip(seed in any::<u64>(), horizon in 1u32..200, jitter in 0.0f64..0.9) {
        let spec = WorkloadSpec { seed, horizon_days: horizon, entry_size_jitter_fraction: jitter, ..Default::default() };
        let p = sample_daily_volumes(&spec).unwrap();
        let mut buf = Vec::new();
        ingest::write_daily_csv(&p, &mut buf).unwrap();
        let (back, report) = ingest::parse_daily_csv(buf.as_slice(), &IngestOptions::default()).unwrap();
        prop_assert_eq!(back, p);
        prop_assert_eq!(report.records_read, u64::from(horizon));
    }

    #[test]
    fn different_seeds_give_different_profiles(seed in any::<u64>()) {
        let a = sample_daily_volumes(&WorkloadSpec { seed, ..Default::default() }).unwrap();
        let b = sample_daily_volumes(&WorkloadSpec { seed: seed.wrapping_add(1), ..Default::default() }).unwrap();
        prop_assert_ne!(a, b);
    }
}
