//! Command-line front end. [`run`] parses arguments, dispatches, and maps
//! every outcome to an exit code.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::analysis::{analyze, AnalysisError};
use crate::approx::{
    colour_with_matching, matching_based_colouring, parse_colouring, serialize_colouring, validate,
    ApproxError,
};
use crate::exact::{optimal_colouring, DEFAULT_BUDGET};
use crate::graph::{parse_graph, Graph};
use crate::instances::{random_triangle_free_with_pm, random_with_perfect_matching};
use crate::matching::{is_maximum, parse_matching};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_STRUCTURAL: i32 = 2;
pub const EXIT_FAILED: i32 = 3;
pub const EXIT_INCOMPLETE: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "qcolour", version, about = "Maximum edge q-colouring toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Machine output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Where to write the primary output instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Summary line for `approx`, JSON everywhere else.
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TriangleFree {
    Auto,
    On,
    Off,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// Random graphs built around a perfect matching.
    Pm,
    /// Random bipartite graphs built around a perfect matching.
    Tf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the matching-based colouring. Writes GRAPH with a `.colouring`
    /// extension unless --out is given.
    Approx {
        graph: PathBuf,
        /// Use this maximum matching instead of computing one.
        #[arg(long)]
        matching: Option<PathBuf>,
    },
    /// Search for an optimal colouring.
    Exact {
        graph: PathBuf,
        #[arg(long, default_value_t = 2)]
        q: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Check a colouring against the q-colouring condition.
    Verify {
        graph: PathBuf,
        colouring: PathBuf,
        #[arg(long, default_value_t = 2)]
        q: usize,
    },
    /// Build the structural certificate for a 2-colouring and check every bound.
    Analyze {
        graph: PathBuf,
        matching: PathBuf,
        colouring: PathBuf,
        #[arg(long, value_enum, default_value_t = TriangleFree::Auto)]
        triangle_free: TriangleFree,
    },
    /// Generate instances and compare the optimum with |M| + h.
    Sweep {
        #[arg(long, value_enum, default_value_t = Family::Pm)]
        family: Family,
        /// Instances per size.
        #[arg(long, default_value_t = 50)]
        count: usize,
        #[arg(long, value_delimiter = ',', default_value = "4,6,8")]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 0.4)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 5_000_000)]
        budget: u64,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Input { path: PathBuf, message: String },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Structural(String),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Input { .. } | CliError::Usage(_) => EXIT_USAGE,
            CliError::Structural(_) => EXIT_STRUCTURAL,
            CliError::Failed(_) => EXIT_FAILED,
        }
    }
}

impl From<AnalysisError> for CliError {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::LemmaViolation { .. } => CliError::Failed(e.to_string()),
            _ => CliError::Structural(e.to_string()),
        }
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit code. Errors go to standard error.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn input_error(path: &Path, e: impl ToString) -> CliError {
    CliError::Input {
        path: path.to_path_buf(),
        message: e.to_string(),
    }
}

fn load_graph(path: &Path) -> Result<Graph, CliError> {
    parse_graph(&read(path)?).map_err(|e| input_error(path, e))
}

fn emit<T: Serialize>(cli: &Cli, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("reports serialise");
    text.push('\n');
    match &cli.out {
        Some(p) => write(p, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn ratio_string(r: Ratio<i64>) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

#[derive(Serialize)]
struct ApproxSummary<'a> {
    matching_size: usize,
    h: usize,
    colours: usize,
    colouring: &'a Path,
}

pub fn execute(cli: &Cli) -> Result<i32, CliError> {
    match &cli.command {
        Command::Approx { graph, matching } => {
            let g = load_graph(graph)?;
            let a = match matching {
                None => {
                    matching_based_colouring(&g).map_err(|e| CliError::Structural(e.to_string()))?
                }
                Some(path) => {
                    let m = parse_matching(&g, &read(path)?).map_err(|e| input_error(path, e))?;
                    if g.m() == 0 {
                        return Err(CliError::Structural(ApproxError::EmptyGraph.to_string()));
                    }
                    if !is_maximum(&g, &m) {
                        return Err(CliError::Structural(format!(
                            "{}: matching is not maximum",
                            path.display()
                        )));
                    }
                    colour_with_matching(&g, m)
                }
            };
            let dest = cli
                .out
                .clone()
                .unwrap_or_else(|| graph.with_extension("colouring"));
            write(&dest, &serialize_colouring(&g, &a.colouring))?;
            match cli.format {
                Format::Text => println!(
                    "|M|={} h={} colours={}",
                    a.matching.size(),
                    a.h,
                    a.colours()
                ),
                Format::Json => {
                    let s = ApproxSummary {
                        matching_size: a.matching.size(),
                        h: a.h,
                        colours: a.colours(),
                        colouring: &dest,
                    };
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&s).expect("summary serialises")
                    );
                }
            }
            Ok(EXIT_OK)
        }
        Command::Exact { graph, q, budget } => {
            let g = load_graph(graph)?;
            let r =
                optimal_colouring(&g, *q, *budget).map_err(|e| CliError::Usage(e.to_string()))?;
            emit(cli, &r)?;
            Ok(if r.complete { EXIT_OK } else { EXIT_INCOMPLETE })
        }
        Command::Verify {
            graph,
            colouring,
            q,
        } => {
            let g = load_graph(graph)?;
            let col =
                parse_colouring(&g, &read(colouring)?).map_err(|e| input_error(colouring, e))?;
            let r = validate(&g, &col, *q).map_err(|e| CliError::Usage(e.to_string()))?;
            emit(cli, &r)?;
            Ok(if r.valid { EXIT_OK } else { EXIT_FAILED })
        }
        Command::Analyze {
            graph,
            matching,
            colouring,
            triangle_free,
        } => {
            let g = load_graph(graph)?;
            let m = parse_matching(&g, &read(matching)?).map_err(|e| input_error(matching, e))?;
            let col =
                parse_colouring(&g, &read(colouring)?).map_err(|e| input_error(colouring, e))?;
            let tf = match triangle_free {
                TriangleFree::Auto => None,
                TriangleFree::On => Some(true),
                TriangleFree::Off => Some(false),
            };
            let r = analyze(&g, &m, &col, tf)?;
            emit(cli, &r)?;
            Ok(if r.all_pass { EXIT_OK } else { EXIT_FAILED })
        }
        Command::Sweep {
            family,
            count,
            sizes,
            p,
            seed,
            budget,
        } => {
            let report = sweep(*family, *count, sizes, *p, *seed, *budget)?;
            emit(cli, &report)?;
            Ok(if report.within_bound && report.analysis_failures == 0 {
                EXIT_OK
            } else {
                EXIT_FAILED
            })
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepRow {
    pub n: usize,
    pub seed: u64,
    pub m: usize,
    pub matching_size: usize,
    pub h: usize,
    pub alg: usize,
    pub opt: usize,
    pub complete: bool,
    /// `opt / (|M| + h)`, absent for skipped rows.
    pub ratio: Option<String>,
    pub all_pass: Option<bool>,
    pub failures: Vec<String>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub family: String,
    pub sizes: Vec<usize>,
    pub count: usize,
    pub p: String,
    pub seed: u64,
    pub budget: u64,
    pub instances: usize,
    pub evaluated: usize,
    pub skipped: usize,
    pub max_ratio: Option<String>,
    pub bound: String,
    pub within_bound: bool,
    pub analysis_failures: usize,
    pub rows: Vec<SweepRow>,
}

/// Instance `i` of size `n` uses seed `seed + i`. Rows come out in
/// (size, index) order whatever the thread count.
pub fn sweep(
    family: Family,
    count: usize,
    sizes: &[usize],
    p: f64,
    seed: u64,
    budget: u64,
) -> Result<SweepReport, CliError> {
    let bound = match family {
        Family::Pm => Ratio::new(5, 3),
        Family::Tf => Ratio::new(8, 5),
    };
    if let Some(&n) = sizes.iter().find(|&&n| n % 2 == 1) {
        return Err(CliError::Usage(format!("size {n} is odd")));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(CliError::Usage(format!(
            "probability {p} is outside [0, 1]"
        )));
    }
    let jobs: Vec<(usize, u64)> = sizes
        .iter()
        .flat_map(|&n| (0..count as u64).map(move |i| (n, seed.wrapping_add(i))))
        .collect();
    let rows: Vec<(SweepRow, Option<Ratio<i64>>)> = jobs
        .par_iter()
        .map(|&(n, s)| sweep_one(family, n, p, s, budget))
        .collect();

    let max = rows.iter().filter_map(|(_, r)| *r).max();
    let evaluated = rows.iter().filter(|(_, r)| r.is_some()).count();
    let analysis_failures = rows
        .iter()
        .filter(|(row, _)| row.all_pass == Some(false))
        .count();
    Ok(SweepReport {
        family: format!("{family:?}").to_lowercase(),
        sizes: sizes.to_vec(),
        count,
        p: p.to_string(),
        seed,
        budget,
        instances: rows.len(),
        evaluated,
        skipped: rows.len() - evaluated,
        max_ratio: max.map(ratio_string),
        bound: ratio_string(bound),
        within_bound: max.is_none_or(|r| r <= bound),
        analysis_failures,
        rows: rows.into_iter().map(|(row, _)| row).collect(),
    })
}

fn sweep_one(
    family: Family,
    n: usize,
    p: f64,
    seed: u64,
    budget: u64,
) -> (SweepRow, Option<Ratio<i64>>) {
    let inst = match family {
        Family::Pm => random_with_perfect_matching(n, p, seed),
        Family::Tf => random_triangle_free_with_pm(n, p, seed),
    }
    .expect("sizes and probability checked by the caller");
    let g = &inst.graph;
    let mut row = SweepRow {
        n,
        seed,
        m: g.m(),
        matching_size: 0,
        h: 0,
        alg: 0,
        opt: 0,
        complete: false,
        ratio: None,
        all_pass: None,
        failures: Vec::new(),
        error: None,
    };
    let a = match matching_based_colouring(g) {
        Ok(a) => a,
        Err(e) => {
            row.error = Some(e.to_string());
            return (row, None);
        }
    };
    row.matching_size = a.matching.size();
    row.h = a.h;
    row.alg = a.colours();
    let exact = optimal_colouring(g, 2, budget).expect("q = 2 is always accepted");
    row.opt = exact.opt;
    row.complete = exact.complete;
    if !exact.complete {
        row.error = Some("search budget exhausted".to_string());
        return (row, None);
    }
    let ratio = Ratio::new(exact.opt as i64, row.alg as i64);
    row.ratio = Some(ratio_string(ratio));
    match analyze(g, &a.matching, &exact.witness, None) {
        Ok(r) => {
            row.all_pass = Some(r.all_pass);
            row.failures = r.failures().into_iter().map(String::from).collect();
        }
        Err(e) => {
            row.all_pass = Some(false);
            row.error = Some(e.to_string());
        }
    }
    (row, Some(ratio))
}
