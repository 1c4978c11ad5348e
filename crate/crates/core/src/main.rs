use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use greedy_tsp::bench::{self, BenchConfig, Layout};
use greedy_tsp::heuristics::{arc_greedy_with, ordered_greedy_with, OrderSpec};
use greedy_tsp::oracle;
use greedy_tsp::trackers::TrackerOptions;
use greedy_tsp::{
    double_ended_nn, nearest_neighbor, read_instance, Error, Instance, Mode, TrackerKind,
};

#[derive(Parser)]
#[command(name = "greedy-tsp", version, about = "Greedy TSP tour construction")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build one tour and print it.
    Solve {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = HeuristicArg::ArcGreedy)]
        heuristic: HeuristicArg,
        #[arg(long, value_enum, default_value_t = TrackerArg::Gt)]
        tracker: TrackerArg,
        /// Defaults to nondir for symmetric instances, dir otherwise.
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        /// Node order for og: identity, distance-sum, random:<seed> or file:<path>.
        #[arg(long)]
        order: Option<String>,
        /// Start node for nn and denn, 1-based.
        #[arg(long, default_value_t = 1)]
        start: usize,
        #[arg(long)]
        no_row_col_delete: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Write per-arc verdicts of an arc-greedy run as JSON lines.
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Time arc-greedy under each tracker and mode.
    Bench {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long, default_value_t = 100)]
        iterations: usize,
        #[arg(long, default_value_t = 5)]
        warmup: usize,
        #[arg(long, value_enum, default_value_t = TableFormat::Table)]
        format: TableFormat,
        /// Sort the arc stream outside the timed region.
        #[arg(long)]
        time_tracker_only: bool,
        #[arg(long)]
        no_row_col_delete: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check that all trackers build the same tour.
    Verify {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Restrict to one mode; by default every mode the instance allows.
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        #[arg(long)]
        no_row_col_delete: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Compare every heuristic with brute force on random instances.
    Oracle {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        seeds: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum HeuristicArg {
    ArcGreedy,
    Nn,
    Denn,
    Og,
}

#[derive(Clone, Copy, ValueEnum)]
enum TrackerArg {
    Mf,
    El,
    Gt,
}

impl From<TrackerArg> for TrackerKind {
    fn from(t: TrackerArg) -> Self {
        match t {
            TrackerArg::Mf => TrackerKind::Mf,
            TrackerArg::El => TrackerKind::El,
            TrackerArg::Gt => TrackerKind::Gt,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Dir,
    Nondir,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Dir => Mode::Directional,
            ModeArg::Nondir => Mode::NonDirectional,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Csv,
    Table,
}

enum Failure {
    /// Bad input or arguments.
    Usage(String),
    /// The run completed but found a problem.
    Check(String),
    Other(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Mode { .. } | Error::Argument(_) | Error::Parse { .. } => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Other(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Other(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn load(path: &Path) -> Result<Instance, Failure> {
    read_instance(path).map_err(|e| match e {
        Error::Io(io) => Failure::Usage(format!("{}: {io}", path.display())),
        other => Failure::Usage(format!("{}: {other}", path.display())),
    })
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(path) => {
            fs::write(path, text).map_err(|e| Failure::Other(format!("{}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Solve {
            file,
            heuristic,
            tracker,
            mode,
            order,
            start,
            no_row_col_delete,
            format,
            trace,
            out,
        } => {
            let inst = load(&file)?;
            let mode = mode.map_or_else(|| Mode::default_for(&inst), Mode::from);
            mode.check(&inst)?;
            let options = TrackerOptions {
                row_col_delete: !no_row_col_delete,
            };
            if start == 0 || start > inst.n() {
                return Err(Failure::Usage(format!(
                    "--start must be in 1..={}",
                    inst.n()
                )));
            }
            let tour = match heuristic {
                HeuristicArg::ArcGreedy => {
                    let mut lines = Vec::new();
                    let tour = arc_greedy_with(&inst, mode, tracker.into(), options, |e| {
                        if trace.is_some() {
                            lines.push(e.to_json_line());
                        }
                    })?;
                    if let Some(path) = &trace {
                        let mut f = fs::File::create(path)
                            .map_err(|e| Failure::Other(format!("{}: {e}", path.display())))?;
                        for line in lines {
                            writeln!(f, "{line}")
                                .map_err(|e| Failure::Other(format!("{}: {e}", path.display())))?;
                        }
                    }
                    tour
                }
                HeuristicArg::Nn => nearest_neighbor(&inst, start - 1)?,
                HeuristicArg::Denn => double_ended_nn(&inst, start - 1)?,
                HeuristicArg::Og => {
                    let spec: OrderSpec = order
                        .as_deref()
                        .ok_or_else(|| Failure::Usage("og requires --order".into()))?
                        .parse()?;
                    let order = spec.resolve(&inst)?;
                    ordered_greedy_with(&inst, mode, &order, tracker.into(), options)?
                }
            };
            let text = match format {
                Format::Text => tour.to_text(inst.name()),
                Format::Json => format!(
                    "{}\n",
                    serde_json::to_string_pretty(&tour.to_json(inst.name()))
                        .expect("tours always serialize")
                ),
            };
            emit(&text, out.as_deref())
        }

        Command::Bench {
            files,
            iterations,
            warmup,
            format,
            time_tracker_only,
            no_row_col_delete,
            out,
        } => {
            if iterations == 0 {
                return Err(Failure::Usage("--iterations must be at least 1".into()));
            }
            let config = BenchConfig {
                iterations,
                warmup,
                time_tracker_only,
                tracker_options: TrackerOptions {
                    row_col_delete: !no_row_col_delete,
                },
                ..BenchConfig::default()
            };
            let mut records = Vec::new();
            for file in &files {
                let inst = load(file)?;
                records.extend(bench::run_bench(&inst, &config)?);
            }
            if records.is_empty() {
                return Err(Failure::Usage("no benchmark records produced".into()));
            }
            let text = match format {
                TableFormat::Csv => bench::render_table(&records, Layout::Csv),
                TableFormat::Table => {
                    let mut t = bench::render_table(&records, Layout::Table);
                    t.push('\n');
                    for line in bench::speed_ordering(&records) {
                        t.push_str(&line);
                        t.push('\n');
                    }
                    t
                }
            };
            emit(&text, out.as_deref())
        }

        Command::Verify {
            files,
            mode,
            no_row_col_delete,
            format,
        } => {
            let options = TrackerOptions {
                row_col_delete: !no_row_col_delete,
            };
            let mut diverged = 0;
            for file in &files {
                let inst = load(file)?;
                let modes: Vec<Mode> = match mode {
                    Some(m) => {
                        let m = Mode::from(m);
                        m.check(&inst)?;
                        vec![m]
                    }
                    None => Mode::ALL
                        .into_iter()
                        .filter(|m| m.check(&inst).is_ok())
                        .collect(),
                };
                for m in modes {
                    let report = oracle::verify_equivalence_with(&inst, m, options)?;
                    if !report.tours_identical {
                        diverged += 1;
                    }
                    match format {
                        Format::Text => println!("{}", report.to_text()),
                        Format::Json => println!("{}", report.to_json()),
                    }
                }
            }
            if diverged > 0 {
                return Err(Failure::Check(format!("{diverged} run(s) diverged")));
            }
            Ok(())
        }

        Command::Oracle { n, seeds } => {
            let summary = oracle::random_sweep(n, seeds)?;
            println!("instances: {}", summary.instances);
            println!("tours_checked: {}", summary.tours_checked);
            println!("og_infeasible: {}", summary.infeasible);
            println!("violations: {}", summary.violations.len());
            for v in &summary.violations {
                println!("  {v}");
            }
            if summary.violations.is_empty() {
                Ok(())
            } else {
                Err(Failure::Check("oracle found violations".into()))
            }
        }
    }
}
