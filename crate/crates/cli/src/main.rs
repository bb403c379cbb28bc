mod cache;
mod grid;
mod verify;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde_json::{json, Value};
use ssgraph_core::graph::to_dot;
use ssgraph_core::spectral::spectrum_csv;
use ssgraph_core::{
    adjacency_spectrum, cheeger, covering_map_for, ihara_zeta, is_ramanujan, laplacian_spectrum,
    reciprocity_check, verify_covering, EnhancedError, FormatError, Graph, GraphError, SpectralError,
    SupersingularError, ZetaError,
};
use thiserror::Error;

use crate::cache::{build_file, cache_path, load_or_build, write_atomic};
use crate::grid::{parse_grid, Grid, Job};
use crate::verify::verify_job;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Params(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("cache file {0:?} is invalid: {1}")]
    Cache(PathBuf, String),
    #[error(transparent)]
    Enhanced(#[from] EnhancedError),
    #[error(transparent)]
    Supersingular(#[from] SupersingularError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Zeta(#[from] ZetaError),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn enhanced_is_params(e: &EnhancedError) -> bool {
    match e {
        EnhancedError::BadPrime(_)
        | EnhancedError::BadDegree { .. }
        | EnhancedError::NotSquarefree(_)
        | EnhancedError::NotCoprime { .. } => true,
        EnhancedError::Supersingular(s) => supersingular_is_params(s),
        _ => false,
    }
}

fn supersingular_is_params(e: &SupersingularError) -> bool {
    matches!(e, SupersingularError::BadPrime(_) | SupersingularError::TooLarge { .. })
}

fn graph_is_params(e: &GraphError) -> bool {
    match e {
        GraphError::NotDivisor { .. } => true,
        GraphError::Enhanced(e) => enhanced_is_params(e),
        _ => false,
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        let params = match self {
            CliError::Params(_) => true,
            CliError::Verification(_) => return 3,
            CliError::Enhanced(e) => enhanced_is_params(e),
            CliError::Supersingular(e) => supersingular_is_params(e),
            CliError::Graph(e) => graph_is_params(e),
            CliError::Spectral(SpectralError::BadChain(_) | SpectralError::CheegerUndefined) => true,
            CliError::Spectral(SpectralError::Enhanced(e)) => enhanced_is_params(e),
            CliError::Spectral(SpectralError::Graph(e)) => graph_is_params(e),
            CliError::Zeta(ZetaError::BadParameters(_)) => true,
            CliError::Zeta(ZetaError::Enhanced(e)) => enhanced_is_params(e),
            CliError::Zeta(ZetaError::Graph(e)) => graph_is_params(e),
            _ => false,
        };
        if params {
            2
        } else {
            4
        }
    }
}

#[derive(Parser)]
#[command(name = "ssgraph", version, about = "Supersingular isogeny graphs of level N")]
struct Cli {
    /// Directory for cached graph files.
    #[arg(long, global = true, default_value = ".ssgraph-cache")]
    cache_dir: PathBuf,
    /// Seed for the torsion-point search; results do not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Tolerance for floating-point comparisons.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Write the graph in DOT format.
    #[arg(long, global = true)]
    dot: Option<PathBuf>,
    /// Write the adjacency spectrum as CSV.
    #[arg(long, global = true)]
    csv: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build G_p^(l)(N) and write it to the cache.
    Build { p: u64, l: u64, n: u64 },
    /// Adjacency and Laplacian spectra with the Ramanujan check.
    Spectrum { p: u64, l: u64, n: u64 },
    /// Ihara zeta function.
    Zeta { p: u64, l: u64, n: u64 },
    /// Cheeger constant, exact for small graphs.
    Cheeger { p: u64, l: u64, n: u64 },
    /// Forgetful covering G(N) → G(M).
    Covering { p: u64, l: u64, n: u64, m: u64 },
    /// Reciprocity between levels p and q.
    Reciprocity { p: u64, q: u64, l: u64 },
    /// Property suite on one graph or a grid.
    Verify {
        p: Option<u64>,
        l: Option<u64>,
        n: Option<u64>,
        #[arg(long)]
        grid: Option<String>,
    },
}

fn print(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("JSON values serialize"));
}

fn graph_of(cli: &Cli, p: u64, l: u64, n: u64) -> Result<Graph, CliError> {
    let f = load_or_build(&cli.cache_dir, p, l, n, cli.seed)?;
    let g = f.graph()?;
    if let Some(path) = &cli.dot {
        write_atomic(path, &to_dot(&g, &format!("G_p{p}_l{l}_N{n}")))?;
    }
    Ok(g)
}

fn run(cli: &Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Build { p, l, n } => {
            let f = build_file(p, l, n, cli.seed)?;
            let path = cache_path(&cli.cache_dir, p, l, n);
            write_atomic(&path, &f.to_json())?;
            if let Some(dot) = &cli.dot {
                write_atomic(dot, &to_dot(&f.graph()?, &format!("G_p{p}_l{l}_N{n}")))?;
            }
            print(&json!({
                "path": path,
                "vertices": f.vertices.len(),
                "adjacency": f.adjacency,
            }));
        }
        Command::Spectrum { p, l, n } => {
            let g = graph_of(cli, p, l, n)?;
            let s = adjacency_spectrum(&g, 1e-12)?;
            if let Some(path) = &cli.csv {
                write_atomic(path, &spectrum_csv(&s, l))?;
            }
            let r = is_ramanujan(&s, l + 1, cli.tol);
            print(&json!({
                "p": p, "l": l, "N": n,
                "eigenvalues": s.eigenvalues,
                "laplacian": laplacian_spectrum(&s, l + 1).eigenvalues,
                "bound": 2.0 * (l as f64).sqrt(),
                "ramanujan": r.ramanujan,
                "max_nontrivial": r.max_nontrivial,
                "margin": r.margin,
            }));
        }
        Command::Zeta { p, l, n } => {
            let z = ihara_zeta(&graph_of(cli, p, l, n)?);
            print(&serde_json::to_value(z.export()).expect("zeta export serializes"));
        }
        Command::Cheeger { p, l, n } => {
            let r = cheeger(&graph_of(cli, p, l, n)?, cli.tol)?;
            print(&json!({
                "p": p, "l": l, "N": n,
                "method": format!("{:?}", r.method),
                "exact": r.exact_value.map(|(a, b)| format!("{a}/{b}")),
                "witness": r.witness_set,
                "lambda1": r.lambda1,
                "lower_bound": r.lower_bound,
                "upper_bound": r.upper_bound,
            }));
        }
        Command::Covering { p, l, n, m } => {
            let (up, low, map) = covering_map_for(p, l, n, m, cli.seed)?;
            let r = verify_covering(&map, &Graph::from_enhanced(&up)?, &Graph::from_enhanced(&low)?);
            print(&json!({
                "p": p, "l": l, "N": n, "M": m,
                "degree": r.degree,
                "upper_vertices": up.table.len(),
                "lower_vertices": low.table.len(),
                "commutation_failures": r.commutation_failures,
                "bad_vertex_fibres": r.bad_vertex_fibres,
                "bad_edge_fibres": r.bad_edge_fibres,
                "passed": r.passed(),
            }));
            if !r.passed() {
                return Err(CliError::Verification(format!("covering {n} -> {m}")));
            }
        }
        Command::Reciprocity { p, q, l } => {
            let c = reciprocity_check(p, q, l, cli.seed)?;
            print(&json!({
                "p": p, "q": q, "l": l,
                "sizes": [c.sizes.0, c.sizes.1],
                "chi_differences": [c.chi_differences.0, c.chi_differences.1],
                "chi_expected": c.chi_expected,
                "identity": c.identity,
                "half_loops": c.half_loops,
                "half_loops_balanced": c.half_loops_balanced(),
                "passed": c.passed(),
            }));
            if !c.passed() {
                return Err(CliError::Verification(format!("reciprocity ({p}, {q}, {l})")));
            }
        }
        Command::Verify { p, l, n, ref grid } => {
            let grid = match (grid, p, l) {
                (Some(s), None, None) => parse_grid(s).map_err(CliError::Params)?,
                (None, Some(p), Some(l)) => Grid {
                    ps: vec![p],
                    ls: vec![l],
                    ns: vec![n.unwrap_or(1)],
                },
                _ => return Err(CliError::Params("verify takes either p l [N] or --grid".into())),
            };
            verify_grid(cli, &grid)?;
        }
    }
    Ok(())
}

fn verify_grid(cli: &Cli, grid: &Grid) -> Result<(), CliError> {
    let (jobs, skips) = grid.jobs();
    let dir: &Path = &cli.cache_dir;
    let outcomes = jobs
        .par_iter()
        .map(|j| verify_job(j, cli.seed, cli.tol, dir))
        .collect::<Result<Vec<_>, _>>()?;
    let failures: usize = outcomes.iter().map(|o| o.failures).sum();
    let failed_jobs: Vec<&Job> = jobs.iter().zip(&outcomes).filter(|(_, o)| o.failures > 0).map(|(j, _)| j).collect();
    print(&json!({
        "jobs": outcomes.iter().map(|o| o.report.clone()).collect::<Vec<_>>(),
        "skipped": skips.iter().map(|s| json!({
            "p": s.job.p, "l": s.job.l, "N": s.job.n, "reason": s.reason,
        })).collect::<Vec<_>>(),
        "failures": failures,
    }));
    if failures > 0 {
        let names: Vec<String> = failed_jobs.iter().map(|j| format!("({}, {}, {})", j.p, j.l, j.n)).collect();
        return Err(CliError::Verification(names.join(", ")));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(w) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(w).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(4);
        }
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
