//! `hardylab` command-line front end.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 on
//! malformed input or an unknown probe.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgAction, Parser, Subcommand};
use serde_json::{json, Value};

use hardylab::modn::{is_n_unimodular, is_n_unimodular_exact, UNIMODULAR_TOL};
use hardylab::{
    check_orthonormal_family, check_rows_orthonormal, decompose_mod_n, matrix_of, merge_reports, run_probe,
    CircleGrid, Error, FunctionLiteral, NormDescriptor, NormFunctional, ProbeConfig, ProbeReport, RotationNorm,
    UnimodularTuple, Window,
};

#[derive(Parser)]
#[command(name = "hardylab", version, about = "Rotationally symmetric norms and shift-invariant subspaces on the circle")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a norm of a function literal.
    Norm {
        #[arg(long)]
        f: String,
        #[arg(long)]
        alpha: String,
        /// Grid for literals that do not name one.
        #[arg(long, default_value_t = 1024)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Split a function literal into its mod-n components.
    Decompose {
        #[arg(long)]
        f: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1024)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check that a tuple of function literals is n-unimodular with orthonormal rows.
    Unimodular {
        /// One literal per function; repeat for a tuple.
        #[arg(long, required = true)]
        f: Vec<String>,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1024)]
        grid: usize,
        #[arg(long, default_value_t = UNIMODULAR_TOL)]
        tol: f64,
        /// Shifts `z^{kn}`, `|k| <= k_max`, in the orthonormal family check.
        #[arg(long, default_value_t = 4)]
        k_max: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a randomized probe suite and print its JSON report.
    Probe {
        /// One of axioms, cesaro, lemma23, lemma24, lemma36, thm33, thm41.
        name: String,
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        grid: Option<usize>,
        /// `lo:hi`.
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
        /// `name=value`; repeatable.
        #[arg(long)]
        tol: Vec<String>,
        #[arg(long, default_value_t = true, action = ArgAction::Set)]
        validate_metric: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Combine probe reports into one summary.
    Merge {
        paths: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) => Failure::Usage(e.to_string()),
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

/// Printed output and whether every check passed.
struct Outcome {
    text: String,
    pass: bool,
}

fn usage<T>(msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure::Usage(msg.into()))
}

fn grid(size: usize) -> Result<CircleGrid, Failure> {
    CircleGrid::new(size).map_err(|e| Failure::Usage(e.to_string()))
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("values serialize")
}

fn cmd_norm(f: &str, alpha: &str, size: usize) -> Result<Outcome, Failure> {
    let lit = FunctionLiteral::parse(f)?;
    let desc = NormDescriptor::parse(alpha)?;
    let norm = NormFunctional::from_descriptor(&desc).map_err(|e| Failure::Usage(e.to_string()))?;
    let func = lit.to_function(grid(size)?).map_err(|e| Failure::Usage(e.to_string()))?;
    let value = norm.eval(&func)?;
    let report = json!({ "alpha": desc, "grid": func.grid().size(), "value": value });
    Ok(Outcome { text: format!("{value:?}\n{}", pretty(&report)), pass: true })
}

fn cmd_decompose(f: &str, n: usize, size: usize) -> Result<Outcome, Failure> {
    let lit = FunctionLiteral::parse(f)?;
    let (components, error) = match lit.to_laurent() {
        Some(p) => {
            let d = decompose_mod_n(&p, n)?;
            let error = d.reconstruct()?.distance(&p);
            (d.components.iter().map(|c| FunctionLiteral::from_laurent(c, None)).collect::<Vec<_>>(), error)
        }
        None => {
            let func = lit.to_function(grid(size)?).map_err(|e| Failure::Usage(e.to_string()))?;
            let d = decompose_mod_n(&func, n)?;
            let error = d.reconstruct()?.max_distance(&func)?;
            (d.components.iter().map(FunctionLiteral::from_function).collect(), error)
        }
    };
    let report = json!({ "n": n, "components": components, "reconstruction_error": error });
    Ok(Outcome { text: pretty(&report), pass: true })
}

fn cmd_unimodular(fs: &[String], n: usize, size: usize, tol: f64, k_max: usize) -> Result<Outcome, Failure> {
    let lits = fs.iter().map(|f| FunctionLiteral::parse(f)).collect::<Result<Vec<_>, _>>()?;
    let default = grid(size)?;
    let exact: Option<Vec<_>> = lits.iter().map(|l| l.to_laurent()).collect();
    let tuple = match exact {
        Some(polys) => UnimodularTuple::from_laurent(n, polys, lits[0].grid(default)?)?,
        None => UnimodularTuple::from_functions(
            n,
            lits.iter().map(|l| l.to_function(default)).collect::<Result<_, _>>()?,
        )?,
    };
    let mut functions = Vec::new();
    for (j, f) in tuple.functions().iter().enumerate() {
        let cert = match tuple.exact() {
            Some(p) => is_n_unimodular_exact(&p[j], n, tol)?,
            None => is_n_unimodular(f, n, tol)?,
        };
        functions.push(cert);
    }
    let rows = check_rows_orthonormal(&matrix_of(&tuple)?, tol);
    let family = check_orthonormal_family(&tuple, k_max)?;
    let pass = functions.iter().all(|c| c.pass) && rows.pass && family.pass;
    let report = json!({ "n": n, "r": tuple.r(), "functions": functions, "rows": rows, "family": family, "pass": pass });
    Ok(Outcome { text: pretty(&report), pass })
}

fn parse_window(text: &str) -> Result<Window, Failure> {
    let parse = |s: &str| s.trim().parse::<i64>().map_err(|_| Failure::Usage(format!("bad window {text:?}, expected lo:hi")));
    match text.split_once(':') {
        Some((lo, hi)) => Window::new(parse(lo)?, parse(hi)?).map_err(|e| Failure::Usage(e.to_string())),
        None => usage(format!("bad window {text:?}, expected lo:hi")),
    }
}

#[allow(clippy::too_many_arguments)]
fn probe_config(
    name: &str,
    alpha: Option<String>,
    n: Option<usize>,
    trials: Option<usize>,
    seed: Option<u64>,
    grid_size: Option<usize>,
    window: Option<String>,
    tols: &[String],
    validate_metric: bool,
) -> Result<ProbeConfig, Failure> {
    let mut config = ProbeConfig::new(name);
    if let Some(a) = alpha {
        config.alpha = Some(NormDescriptor::parse(&a)?);
    }
    config.n = n;
    config.trials = trials.unwrap_or(config.trials);
    config.seed = seed.unwrap_or(config.seed);
    if let Some(g) = grid_size {
        config.grid_size = grid(g)?.size();
    }
    if let Some(w) = window {
        config.window = parse_window(&w)?;
    }
    for t in tols {
        let Some((key, value)) = t.split_once('=') else {
            return usage(format!("bad tolerance {t:?}, expected name=value"));
        };
        if !config.tolerances.contains_key(key) {
            let known: Vec<&String> = config.tolerances.keys().collect();
            return usage(format!("probe {name} has no tolerance {key:?}; known: {known:?}"));
        }
        let v: f64 = value.parse().map_err(|_| Failure::Usage(format!("bad tolerance value {value:?}")))?;
        config.tolerances.insert(key.to_string(), v);
    }
    config.validate_metric = validate_metric;
    Ok(config)
}

fn cmd_probe(name: &str, config: &ProbeConfig) -> Result<Outcome, Failure> {
    let report = run_probe(name, config)?;
    Ok(Outcome { text: report.to_json(), pass: report.pass })
}

fn cmd_merge(paths: &[PathBuf]) -> Result<Outcome, Failure> {
    let mut reports: Vec<ProbeReport> = Vec::new();
    for p in paths {
        let text = fs::read_to_string(p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?;
        let report = serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?;
        reports.push(report);
    }
    let merged = merge_reports(&reports);
    let pass = merged["pass"].as_bool().unwrap_or(false);
    Ok(Outcome { text: pretty(&merged), pass })
}

fn run(cli: Cli) -> (Result<Outcome, Failure>, Option<PathBuf>) {
    match cli.command {
        Command::Norm { f, alpha, grid, out } => (cmd_norm(&f, &alpha, grid), out),
        Command::Decompose { f, n, grid, out } => (cmd_decompose(&f, n, grid), out),
        Command::Unimodular { f, n, grid, tol, k_max, out } => (cmd_unimodular(&f, n, grid, tol, k_max), out),
        Command::Probe { name, alpha, n, trials, seed, grid, window, tol, validate_metric, out } => {
            let result = probe_config(&name, alpha, n, trials, seed, grid, window, &tol, validate_metric)
                .and_then(|config| cmd_probe(&name, &config));
            (result, out)
        }
        Command::Merge { paths, out } => (cmd_merge(&paths), out),
    }
}

fn main() -> ExitCode {
    let (result, out) = run(Cli::parse());
    match result {
        Ok(outcome) => {
            // a closed pipe downstream is not an error of ours
            let _ = writeln!(std::io::stdout().lock(), "{}", outcome.text);
            if let Some(path) = out {
                if let Err(e) = fs::write(&path, format!("{}\n", outcome.text)) {
                    eprintln!("error: {}: {e}", path.display());
                    return ExitCode::from(1);
                }
            }
            ExitCode::from(if outcome.pass { 0 } else { 1 })
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
