//! Timing harness for arc-greedy construction.
//!
//! Each `(mode, tracker)` pair gets `warmup` untimed runs followed by
//! `iterations` timed ones on a monotonic clock. By default the timed region
//! covers building and sorting the arc stream as well as the tracker loop;
//! with `time_tracker_only` the stream is sorted once up front and only the
//! legality/commit loop is timed.

use std::hint::black_box;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::edges::{build_sorted_edges, Mode};
use crate::error::{Error, Result};
use crate::heuristics::{arc_greedy_with, greedy_cycle};
use crate::tour::{cycle_order, Heuristic};
use crate::trackers::{TrackerKind, TrackerOptions};
use crate::tsplib::Instance;

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub modes: Vec<Mode>,
    pub trackers: Vec<TrackerKind>,
    pub iterations: usize,
    pub warmup: usize,
    pub time_tracker_only: bool,
    pub tracker_options: TrackerOptions,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            modes: Mode::ALL.to_vec(),
            trackers: TrackerKind::ALL.to_vec(),
            iterations: 100,
            warmup: 5,
            time_tracker_only: false,
            tracker_options: TrackerOptions::default(),
        }
    }
}

/// Summary of one `(instance, mode, tracker)` cell. Times are milliseconds
/// rounded to three decimals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub instance: String,
    pub n: usize,
    pub mode: Mode,
    pub tracker: TrackerKind,
    pub heuristic: Heuristic,
    pub iterations: usize,
    pub mean_ms: f64,
    pub median_ms: f64,
    pub min_ms: f64,
    pub max_ms: f64,
    pub stddev_ms: f64,
    pub tour_cost: i64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stats {
    pub mean: f64,
    pub median: f64,
    pub min: f64,
    pub max: f64,
    /// Sample standard deviation; zero for a single sample.
    pub stddev: f64,
}

impl Stats {
    /// Statistics of `samples`. Samples are sorted first, so the result does
    /// not depend on their order.
    pub fn from_samples(samples: &[f64]) -> Option<Stats> {
        if samples.is_empty() {
            return None;
        }
        let mut s = samples.to_vec();
        s.sort_by(f64::total_cmp);
        let len = s.len();
        let mean = s.iter().sum::<f64>() / len as f64;
        let median = if len % 2 == 1 {
            s[len / 2]
        } else {
            (s[len / 2 - 1] + s[len / 2]) / 2.0
        };
        let stddev = if len > 1 {
            (s.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (len - 1) as f64).sqrt()
        } else {
            0.0
        };
        Some(Stats {
            mean,
            median,
            min: s[0],
            max: s[len - 1],
            stddev,
        })
    }
}

fn round3(x: f64) -> f64 {
    (x * 1000.0).round() / 1000.0
}

/// Times arc-greedy on `inst` for every requested `(mode, tracker)` pair.
/// Modes the instance does not support are skipped with a warning.
pub fn run_bench(inst: &Instance, config: &BenchConfig) -> Result<Vec<BenchRecord>> {
    if config.iterations == 0 {
        return Err(Error::Argument("iterations must be at least 1".into()));
    }
    let n = inst.n();
    let mut records = Vec::new();
    for &mode in &config.modes {
        if let Err(e) = mode.check(inst) {
            log::warn!("skipping: {e}");
            continue;
        }
        let presorted = build_sorted_edges(inst, mode)?;
        for &kind in &config.trackers {
            let reference = arc_greedy_with(inst, mode, kind, config.tracker_options, |_| {})?.cost;

            let run = || -> Result<Vec<(usize, usize)>> {
                if config.time_tracker_only {
                    greedy_cycle(n, mode, kind, config.tracker_options, &presorted, |_| {})
                } else {
                    let edges = build_sorted_edges(inst, mode)?;
                    greedy_cycle(n, mode, kind, config.tracker_options, &edges, |_| {})
                }
            };

            for _ in 0..config.warmup {
                black_box(run()?);
            }
            let mut samples = Vec::with_capacity(config.iterations);
            let mut last = Vec::new();
            for _ in 0..config.iterations {
                let start = Instant::now();
                let arcs = black_box(run()?);
                samples.push(start.elapsed().as_nanos() as f64 / 1e6);
                last = arcs;
            }

            let cost = inst.tour_cost(&cycle_order(n, mode, &last)?)?;
            if cost != reference {
                return Err(Error::State(format!(
                    "timed {kind} run on {} produced cost {cost}, untimed run {reference}",
                    inst.name()
                )));
            }
            let stats = Stats::from_samples(&samples).expect("at least one iteration");
            records.push(BenchRecord {
                instance: inst.name().to_string(),
                n,
                mode,
                tracker: kind,
                heuristic: Heuristic::ArcGreedy,
                iterations: config.iterations,
                mean_ms: round3(stats.mean),
                median_ms: round3(stats.median),
                min_ms: round3(stats.min),
                max_ms: round3(stats.max),
                stddev_ms: round3(stats.stddev),
                tour_cost: cost,
            });
        }
    }
    Ok(records)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layout {
    /// Markdown tables: rows per instance, mean times per (mode, tracker).
    Table,
    Csv,
}

pub const CSV_HEADER: &str =
    "instance,n,mode,tracker,heuristic,iterations,mean_ms,median_ms,min_ms,max_ms,stddev_ms,tour_cost";

pub fn render_table(records: &[BenchRecord], layout: Layout) -> String {
    match layout {
        Layout::Csv => render_csv(records),
        Layout::Table => render_markdown(records),
    }
}

fn render_csv(records: &[BenchRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        let mut w = csv::WriterBuilder::new()
            .has_headers(false)
            .from_writer(Vec::new());
        w.write_record([
            r.instance.clone(),
            r.n.to_string(),
            r.mode.to_string(),
            r.tracker.to_string(),
            r.heuristic.to_string(),
            r.iterations.to_string(),
            format!("{:.3}", r.mean_ms),
            format!("{:.3}", r.median_ms),
            format!("{:.3}", r.min_ms),
            format!("{:.3}", r.max_ms),
            format!("{:.3}", r.stddev_ms),
            r.tour_cost.to_string(),
        ])
        .expect("writing to memory");
        out.push_str(&String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8"));
    }
    out
}

/// Parses the output of the CSV layout.
pub fn parse_csv(text: &str) -> Result<Vec<BenchRecord>> {
    csv::Reader::from_reader(text.as_bytes())
        .deserialize()
        .enumerate()
        .map(|(i, r)| r.map_err(|e| Error::parse(i + 2, e.to_string())))
        .collect()
}

fn mode_title(mode: Mode) -> &'static str {
    match mode {
        Mode::Directional => "Directional",
        Mode::NonDirectional => "Non-Directional",
    }
}

fn instances_in_order(records: &[BenchRecord]) -> Vec<(&str, usize)> {
    let mut seen: Vec<(&str, usize)> = Vec::new();
    for r in records {
        if !seen.iter().any(|(name, _)| *name == r.instance) {
            seen.push((&r.instance, r.n));
        }
    }
    seen
}

// Instances with non-directional records form a two-block table; instances
// measured only directionally get a table with the directional block alone.
fn render_markdown(records: &[BenchRecord]) -> String {
    let instances = instances_in_order(records);
    let has_mode =
        |name: &str, mode: Mode| records.iter().any(|r| r.instance == name && r.mode == mode);
    let (both, dir_only): (Vec<_>, Vec<_>) = instances
        .into_iter()
        .partition(|(name, _)| has_mode(name, Mode::NonDirectional));

    let mut tables = Vec::new();
    for group in [both, dir_only] {
        if group.is_empty() {
            continue;
        }
        let columns: Vec<(Mode, TrackerKind)> = Mode::ALL
            .into_iter()
            .flat_map(|m| TrackerKind::ALL.into_iter().map(move |k| (m, k)))
            .filter(|&(m, k)| {
                records.iter().any(|r| {
                    r.mode == m && r.tracker == k && group.iter().any(|(g, _)| *g == r.instance)
                })
            })
            .collect();

        let mut out = String::from("| Instance | n |");
        for (m, k) in &columns {
            out.push_str(&format!(" {} {k} |", mode_title(*m)));
        }
        out.push_str("\n|---|---:|");
        out.push_str(&"---:|".repeat(columns.len()));
        out.push('\n');
        for (name, n) in &group {
            out.push_str(&format!("| {name} | {n} |"));
            for (m, k) in &columns {
                let cell = records
                    .iter()
                    .find(|r| r.instance == *name && r.mode == *m && r.tracker == *k)
                    .map_or_else(|| "-".to_string(), |r| format!("{:.3}", r.mean_ms));
                out.push_str(&format!(" {cell} |"));
            }
            out.push('\n');
        }
        tables.push(out);
    }
    tables.join("\n")
}

/// One line per `(instance, mode)` listing trackers from fastest to slowest
/// mean time, e.g. `berlin52 directional: GT < MF < EL`.
pub fn speed_ordering(records: &[BenchRecord]) -> Vec<String> {
    let mut lines = Vec::new();
    for (name, _) in instances_in_order(records) {
        for mode in Mode::ALL {
            let mut cell: Vec<&BenchRecord> = records
                .iter()
                .filter(|r| r.instance == name && r.mode == mode)
                .collect();
            if cell.is_empty() {
                continue;
            }
            cell.sort_by(|a, b| a.mean_ms.total_cmp(&b.mean_ms));
            let order: Vec<String> = cell.iter().map(|r| r.tracker.to_string()).collect();
            lines.push(format!("{name} {mode}: {}", order.join(" < ")));
        }
    }
    lines
}
