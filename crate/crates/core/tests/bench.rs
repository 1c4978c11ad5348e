mod common;

use greedy_tsp::bench::{
    parse_csv, render_table, run_bench, BenchConfig, BenchRecord, Layout, Stats,
};
use greedy_tsp::{arc_greedy, Heuristic, Mode, TrackerKind};
use proptest::prelude::*;

use common::load;

#[test]
fn berlin52_six_records_with_equal_costs() {
    let inst = load("berlin52.tsp");
    let config = BenchConfig {
        iterations: 10,
        warmup: 1,
        ..BenchConfig::default()
    };
    let records = run_bench(&inst, &config).unwrap();
    assert_eq!(records.len(), 6);
    for mode in Mode::ALL {
        let untimed = arc_greedy(&inst, mode, TrackerKind::El).unwrap().cost;
        for r in records.iter().filter(|r| r.mode == mode) {
            assert_eq!(r.tour_cost, untimed);
            assert!(r.min_ms <= r.median_ms && r.median_ms <= r.max_ms);
            assert_eq!(r.iterations, 10);
        }
    }
    let again = parse_csv(&render_table(&records, Layout::Csv)).unwrap();
    assert_eq!(again, records);
}

#[test]
fn tracker_only_timing_keeps_costs() {
    let inst = load("gr17.tsp");
    let config = BenchConfig {
        iterations: 3,
        warmup: 0,
        time_tracker_only: true,
        ..BenchConfig::default()
    };
    let records = run_bench(&inst, &config).unwrap();
    assert_eq!(records.len(), 6);
    assert!(records
        .iter()
        .filter(|r| r.mode == Mode::NonDirectional)
        .all(|r| r.tour_cost == records[3].tour_cost));
}

#[test]
fn zero_iterations_rejected() {
    let config = BenchConfig {
        iterations: 0,
        ..BenchConfig::default()
    };
    assert!(run_bench(&load("gr17.tsp"), &config).is_err());
}

fn millis() -> impl Strategy<Value = f64> {
    (0u32..10_000_000).prop_map(|k| k as f64 / 1000.0)
}

fn record() -> impl Strategy<Value = BenchRecord> {
    (
        "[a-z][a-z0-9]{0,8}",
        3usize..2000,
        prop::sample::select(Mode::ALL.to_vec()),
        prop::sample::select(TrackerKind::ALL.to_vec()),
        1usize..500,
        prop::collection::vec(millis(), 5),
        0i64..10_000_000,
    )
        .prop_map(
            |(instance, n, mode, tracker, iterations, mut t, tour_cost)| {
                t[..4].sort_by(f64::total_cmp);
                BenchRecord {
                    instance,
                    n,
                    mode,
                    tracker,
                    heuristic: Heuristic::ArcGreedy,
                    iterations,
                    min_ms: t[0],
                    median_ms: t[1],
                    mean_ms: t[2],
                    max_ms: t[3],
                    stddev_ms: t[4],
                    tour_cost,
                }
            },
        )
}

proptest! {
    #[test]
    fn stats_ignore_sample_order(mut samples in prop::collection::vec(0.0f64..1e4, 1..60), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let before = Stats::from_samples(&samples).unwrap();
        samples.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let after = Stats::from_samples(&samples).unwrap();
        prop_assert_eq!(before, after);
        prop_assert!(before.min <= before.median && before.median <= before.max);
    }

    #[test]
    fn csv_round_trips(records in prop::collection::vec(record(), 1..10)) {
        let text = render_table(&records, Layout::Csv);
        prop_assert_eq!(parse_csv(&text).unwrap(), records);
    }
}
