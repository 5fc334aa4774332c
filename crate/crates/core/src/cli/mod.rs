//! Command-line front end. Every command rebuilds the index from a CSV dataset and prints one
//! JSON object per line on stdout.
//!
//! Exit codes: 0 on success, 1 on input or usage errors, 2 when the self-check finds an
//! invariant violation.

pub mod bench;
pub mod dataset;
pub mod render;
pub mod selfcheck;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::geometry::{Point, Rect, RectId};
use crate::unified::UnifiedSegmentTree;
use dataset::Dataset;
use selfcheck::{run_selfcheck, SelfCheckConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_VIOLATION: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "usegtree", version, about = "Unified 2D segment tree: stabbing and rectangle intersection queries")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Structural report: node count, per-unit table, ancestor and piece maxima
    Stats {
        #[arg(long)]
        input: PathBuf,
    },
    /// Rectangles containing a point
    #[command(allow_negative_numbers = true)]
    Stab {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        x: i64,
        #[arg(long)]
        y: i64,
    },
    /// Rectangles overlapping a query rectangle
    #[command(allow_negative_numbers = true)]
    Rectq {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        minx: i64,
        #[arg(long)]
        miny: i64,
        #[arg(long)]
        maxx: i64,
        #[arg(long)]
        maxy: i64,
        /// Widen unregistered query endpoints outward to registered ones
        #[arg(long)]
        snap: bool,
    },
    /// Randomized comparison against brute force plus structural invariants
    Selfcheck {
        #[arg(long, default_value_t = 200)]
        instances: usize,
        #[arg(long = "max-n", default_value_t = 64)]
        max_n: usize,
        #[arg(long, default_value_t = 12)]
        grid: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// SVG diamond of per-unit node counts
    Render {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Build and query timings
    Bench {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 1000)]
        queries: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug)]
enum CliError {
    Input(String),
    Violation(String),
}

impl CliError {
    fn input(e: impl std::fmt::Display) -> Self {
        CliError::Input(e.to_string())
    }
}

#[derive(Serialize)]
struct QueryResult<Q> {
    query: Q,
    ids: Vec<RectId>,
    count: usize,
    micros: f64,
}

impl<Q> QueryResult<Q> {
    fn new(query: Q, ids: Vec<RectId>, started: Instant) -> Self {
        let micros = started.elapsed().as_secs_f64() * 1e6;
        QueryResult { query, count: ids.len(), ids, micros }
    }
}

#[derive(Serialize)]
struct PointEcho {
    x: i64,
    y: i64,
}

#[derive(Serialize)]
struct Bounds {
    minx: i64,
    miny: i64,
    maxx: i64,
    maxy: i64,
}

impl From<&Rect<i64>> for Bounds {
    fn from(r: &Rect<i64>) -> Self {
        Bounds { minx: r.min_x, miny: r.min_y, maxx: r.max_x, maxy: r.max_y }
    }
}

#[derive(Serialize)]
struct RectEcho {
    #[serde(flatten)]
    bounds: Bounds,
    snap: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    effective: Option<Option<Bounds>>,
}

fn load_tree(path: &Path) -> Result<(Dataset, UnifiedSegmentTree<i64>), CliError> {
    let data = Dataset::load(path).map_err(CliError::input)?;
    let tree = UnifiedSegmentTree::build(&data.rects).map_err(CliError::input)?;
    Ok((data, tree))
}

fn emit<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), CliError> {
    let line = serde_json::to_string(value).map_err(CliError::input)?;
    writeln!(out, "{line}").map_err(CliError::input)
}

fn execute(command: Command, out: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Stats { input } => {
            let (_, tree) = load_tree(&input)?;
            emit(out, &tree.stats())
        }
        Command::Stab { input, x, y } => {
            let (_, tree) = load_tree(&input)?;
            let started = Instant::now();
            let ids = tree.stab(Point::new(x, y));
            emit(out, &QueryResult::new(PointEcho { x, y }, ids, started))
        }
        Command::Rectq { input, minx, miny, maxx, maxy, snap } => {
            let (_, tree) = load_tree(&input)?;
            let q = Rect::new(0, minx, miny, maxx, maxy).map_err(|_| {
                CliError::Input(format!("degenerate query rectangle ({minx}, {miny})-({maxx}, {maxy})"))
            })?;
            let bounds = Bounds::from(&q);
            let started = Instant::now();
            if snap {
                let (effective, ids) = tree.intersect_query_snapped(&q).map_err(CliError::input)?;
                let echo = RectEcho { bounds, snap, effective: Some(effective.as_ref().map(Bounds::from)) };
                emit(out, &QueryResult::new(echo, ids, started))
            } else {
                let ids = tree.intersect_query(&q).map_err(|e| CliError::Input(format!("{e} (use --snap to widen the query)")))?;
                emit(out, &QueryResult::new(RectEcho { bounds, snap, effective: None }, ids, started))
            }
        }
        Command::Selfcheck { instances, max_n, grid, seed, inject_fault } => {
            if grid < 2 {
                return Err(CliError::Input(format!("--grid must be at least 2, got {grid}")));
            }
            let cfg = SelfCheckConfig { instances, max_n, grid, seed, inject_fault };
            match run_selfcheck(&cfg) {
                Ok(summary) => emit(out, &summary),
                Err(violation) => {
                    emit(out, &violation)?;
                    Err(CliError::Violation(format!(
                        "instance {} failed check `{}`: {}",
                        violation.instance, violation.check, violation.detail
                    )))
                }
            }
        }
        Command::Render { input, out: svg_path } => {
            let (_, tree) = load_tree(&input)?;
            let stats = tree.stats();
            let title = input.file_name().map_or_else(|| input.display().to_string(), |n| n.to_string_lossy().into_owned());
            fs::write(&svg_path, render::render_svg(&stats, &title))
                .map_err(|e| CliError::Input(format!("{}: {e}", svg_path.display())))?;
            #[derive(Serialize)]
            struct Rendered {
                out: String,
                units: usize,
                nodes: usize,
            }
            emit(out, &Rendered { out: svg_path.display().to_string(), units: stats.units.len(), nodes: stats.nodes })
        }
        Command::Bench { input, queries, seed } => {
            if queries == 0 {
                return Err(CliError::Input("--queries must be positive".into()));
            }
            let data = Dataset::load(&input).map_err(CliError::input)?;
            let report = bench::run_bench(&data.rects, queries, seed).map_err(CliError::input)?;
            emit(out, &report)
        }
    }
}

/// Runs the tool on `args` (including the program name) and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    match execute(cli.command, out) {
        Ok(()) => EXIT_OK,
        Err(CliError::Input(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INPUT
        }
        Err(CliError::Violation(msg)) => {
            let _ = writeln!(err, "invariant violation: {msg}");
            EXIT_VIOLATION
        }
    }
}
