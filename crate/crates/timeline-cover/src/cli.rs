//! Command-line front end.
//!
//! Exit status contract: 0 for a found cover, a valid verification or
//! generated output; 1 for UNSAT answers and invalid covers; 2 for usage
//! and parse errors.

use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

use crate::compression::solve_min_timeline_cover;
use crate::io::{
    self, parse_cover, parse_paircut, parse_temporal_graph, serialize_cover,
    serialize_temporal_graph, PaircutProblem,
};
use crate::oracle::{brute_force_min_cover, zero_span_decider};
use crate::paircut::{solve_cdpc, solve_vdpc};
use crate::temporal::{CoverCheck, TemporalGraph};

/// Environment variable holding the default worker count for `solve`.
pub const JOBS_ENV: &str = "TIMELINE_COVER_JOBS";

#[derive(Parser)]
#[command(
    name = "timeline-cover",
    about = "Exact minimum-span timeline covers of temporal graphs",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// Iterative compression with pair-cut reductions.
    Fpt,
    /// Exhaustive interval search.
    Brute,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a cover of span at most k exists and print one.
    Solve {
        /// Span budget.
        #[arg(long)]
        k: u64,
        #[arg(long, value_enum, default_value_t = Mode::Fpt)]
        mode: Mode,
        /// Worker threads for the compression stage; defaults to
        /// TIMELINE_COVER_JOBS or all cores.
        #[arg(long)]
        jobs: Option<usize>,
        file: PathBuf,
    },
    /// Re-check a cover document against an instance, independently of any
    /// solver.
    Verify { file: PathBuf, cover: PathBuf },
    /// Decide whether a span-0 cover exists and print one.
    ZeroSpan { file: PathBuf },
    /// Print a random instance.
    Gen {
        /// Base vertex count.
        #[arg(long)]
        n: usize,
        /// Time horizon.
        #[arg(long = "T")]
        horizon: u32,
        /// Per-edge keep probability.
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Solve a pair-cut instance file (vdpc or cdpc format).
    Paircut { file: PathBuf },
}

/// Runs the CLI on explicit arguments and returns the exit status.
pub fn run<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = err.print();
            return code;
        }
    };
    match cli.command {
        Command::Solve { k, mode, jobs, file } => solve_command(k, mode, jobs, &file),
        Command::Verify { file, cover } => verify_command(&file, &cover),
        Command::ZeroSpan { file } => zero_span_command(&file),
        Command::Gen { n, horizon, p, seed } => gen_command(n, horizon, p, seed),
        Command::Paircut { file } => paircut_command(&file),
    }
}

fn load_graph(path: &Path) -> Result<TemporalGraph, i32> {
    let text = std::fs::read_to_string(path).map_err(|err| {
        eprintln!("error: cannot read {}: {err}", path.display());
        2
    })?;
    parse_temporal_graph(&text).map_err(|err| {
        eprintln!("error: {}: {err}", path.display());
        2
    })
}

fn jobs_from_env() -> Option<usize> {
    std::env::var(JOBS_ENV).ok()?.parse().ok()
}

/// Runs `f` under a thread pool of the requested size; with no request the
/// current (global) pool is used.
fn with_jobs<R: Send>(jobs: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    match jobs.or_else(jobs_from_env) {
        Some(threads) if threads > 0 => rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("thread pool")
            .install(f),
        _ => f(),
    }
}

fn solve_command(k: u64, mode: Mode, jobs: Option<usize>, file: &Path) -> i32 {
    let graph = match load_graph(file) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let cover = match mode {
        Mode::Fpt => with_jobs(jobs, || solve_min_timeline_cover(&graph, k)),
        Mode::Brute => brute_force_min_cover(&graph, Some(k)).map(|(cover, _)| cover),
    };
    match cover {
        Some(cover) => {
            print!("{}", serialize_cover(&graph, cover.assignment()));
            0
        }
        None => {
            println!("UNSAT k={k}");
            1
        }
    }
}

fn verify_command(file: &Path, cover_path: &Path) -> i32 {
    let graph = match load_graph(file) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let text = match std::fs::read_to_string(cover_path) {
        Ok(text) => text,
        Err(err) => {
            eprintln!("error: cannot read {}: {err}", cover_path.display());
            return 2;
        }
    };
    let assignment = match parse_cover(&graph, &text) {
        Ok(assignment) => assignment,
        // a well-formed document whose declared span is wrong is an invalid
        // cover, not a usage error
        Err(err @ io::ParseError::SpanMismatch { .. }) => {
            println!("invalid: {err}");
            return 1;
        }
        Err(err) => {
            eprintln!("error: {}: {err}", cover_path.display());
            return 2;
        }
    };
    match crate::temporal::check_cover(&graph, &assignment) {
        Ok(CoverCheck::Covers) => {
            println!("valid span={}", assignment.total_span());
            0
        }
        Ok(violation) => {
            println!("invalid: {}", violation.describe(&graph));
            1
        }
        Err(err) => {
            println!("invalid: {err}");
            1
        }
    }
}

fn zero_span_command(file: &Path) -> i32 {
    let graph = match load_graph(file) {
        Ok(g) => g,
        Err(code) => return code,
    };
    match zero_span_decider(&graph) {
        Some(cover) => {
            print!("{}", serialize_cover(&graph, cover.assignment()));
            0
        }
        None => {
            println!("UNSAT zero-span");
            1
        }
    }
}

fn gen_command(n: usize, horizon: u32, p: f64, seed: u64) -> i32 {
    if !(0.0..=1.0).contains(&p) {
        eprintln!("error: --p must lie in [0, 1]");
        return 2;
    }
    if n == 0 {
        eprintln!("error: --n must be at least 1");
        return 2;
    }
    match io::generate_instance(n, horizon, p, seed) {
        Ok(graph) => {
            print!("{}", serialize_temporal_graph(&graph));
            0
        }
        Err(err) => {
            eprintln!("error: {err}");
            2
        }
    }
}

fn paircut_command(file: &Path) -> i32 {
    let text = match std::fs::read_to_string(file) {
        Ok(text) => text,
        Err(err) => {
            eprintln!("error: cannot read {}: {err}", file.display());
            return 2;
        }
    };
    let parsed = match parse_paircut(&text) {
        Ok(parsed) => parsed,
        Err(err) => {
            eprintln!("error: {}: {err}", file.display());
            return 2;
        }
    };
    match parsed.problem {
        PaircutProblem::Vertex(inst) => match solve_vdpc(&inst) {
            Some(removed) => {
                println!("cut {}", removed.len());
                for v in removed {
                    println!("del {}", parsed.names[v as usize]);
                }
                0
            }
            None => {
                println!("UNSAT k={}", inst.budget);
                1
            }
        },
        PaircutProblem::Arc(inst) => match solve_cdpc(&inst) {
            Some(arcs) => {
                println!("cut {}", arcs.len());
                for a in arcs {
                    let (from, to) = inst.graph.arc(a);
                    println!(
                        "del {} {}",
                        parsed.names[from as usize], parsed.names[to as usize]
                    );
                }
                0
            }
            None => {
                println!("UNSAT k={}", inst.budget);
                1
            }
        },
    }
}
