//! `qmc-anova`: node-set generation, discrepancies, worst-case errors,
//! bounds and convergence studies from the command line.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qmc_anova::bounds::{sandwich_2d, upper_bound_cor1};
use qmc_anova::io::{format_pointset, read_pointset, read_weights};
use qmc_anova::pointsets::{
    balanced_sigma, hammersley_2d, is_projection_regular, midpoint_1d, parse_sigma, random_pointset,
};
use qmc_anova::study::{run_study, to_csv, Family};
use qmc_anova::verify::{self, Suite};
use qmc_anova::{anchored_wce, lp_discrepancy, wce, weighted_lp_discrepancy, Error, PStar, PointSet, Weights};

/// Environment variable holding the number of worker threads.
const WORKERS_ENV: &str = "QMC_ANOVA_WORKERS";

const EXIT_USAGE: u8 = 1;
const EXIT_COMPUTATION: u8 = 2;
const EXIT_VERIFICATION: u8 = 3;

#[derive(Parser)]
#[command(name = "qmc-anova", version, about = "Worst-case errors and L_p discrepancies of QMC node sets")]
#[command(after_help = "Set QMC_ANOVA_WORKERS to limit the number of worker threads.")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Midpoint,
    Hammersley,
    HammersleyShifted,
    Random,
}

#[derive(clap::Args)]
struct Common {
    /// Dual exponent p* (a number >= 1 or `inf`)
    #[arg(long, default_value = "2")]
    pstar: PStar,
    /// Absolute tolerance for quadrature-based values
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Weights file (`mask gamma` lines); defaults to weight 1 on the full set only
    #[arg(long)]
    weights: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Write a node set in the point-set file format
    Gen {
        kind: Kind,
        /// Number of points (midpoint, random)
        #[arg(long)]
        n: Option<usize>,
        /// Hammersley level, 2^m points
        #[arg(long)]
        m: Option<usize>,
        /// Digital shift as a bit string such as 011 (hammersley kinds)
        #[arg(long)]
        sigma: Option<String>,
        /// Dimension (random)
        #[arg(long)]
        d: Option<usize>,
        /// Seed (random)
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; standard output when omitted
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Worst-case error with per-subset breakdown
    Wce {
        points: PathBuf,
        #[command(flatten)]
        common: Common,
        /// Also write the per-subset terms as CSV
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// L_p* discrepancy (weighted when --weights is given)
    Discrepancy {
        points: PathBuf,
        #[command(flatten)]
        common: Common,
        /// Discrepancy of the reflected set, i.e. the anchored-space error
        #[arg(long)]
        anchored: bool,
    },
    /// Worst-case error next to its upper bounds and the 2D lower proxy
    Bounds {
        points: PathBuf,
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Errors over a family of node sets as CSV
    Study {
        #[arg(long)]
        family: Family,
        /// First n (midpoint) or m (hammersley families)
        #[arg(long)]
        from: usize,
        /// Last n or m, inclusive
        #[arg(long)]
        to: usize,
        #[command(flatten)]
        common: Common,
        /// Output file; standard output when omitted
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Run self-check batteries
    Verify {
        #[arg(default_value = "all")]
        suite: Suite,
    },
}

enum Failure {
    Usage(String),
    Computation(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::QuadratureBudget { .. } | Error::TooManyCells { .. } => Failure::Computation(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type CmdResult = Result<String, Failure>;

fn load_weights(path: Option<&Path>, dim: usize) -> Result<Weights, Error> {
    match path {
        Some(p) => read_weights(p, dim),
        None => Weights::full_only(dim),
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
}

fn need<T>(v: Option<T>, flag: &str, kind: &str) -> Result<T, Failure> {
    v.ok_or_else(|| Failure::Usage(format!("`gen {kind}` needs --{flag}")))
}

fn gen(kind: Kind, n: Option<usize>, m: Option<usize>, sigma: Option<&str>, d: Option<usize>, seed: u64) -> Result<PointSet, Failure> {
    let shift = |default: Vec<bool>| -> Result<Vec<bool>, Error> { sigma.map_or(Ok(default), parse_sigma) };
    Ok(match kind {
        Kind::Midpoint => midpoint_1d(need(n, "n", "midpoint")?)?,
        Kind::Hammersley => {
            let m = need(m, "m", "hammersley")?;
            hammersley_2d(m, &shift(vec![false; m])?)?
        }
        Kind::HammersleyShifted => {
            let m = need(m, "m", "hammersley-shifted")?;
            hammersley_2d(m, &shift(balanced_sigma(m))?)?
        }
        Kind::Random => random_pointset(need(d, "d", "random")?, need(n, "n", "random")?, seed)?,
    })
}

fn cmd_wce(points: &Path, c: &Common, csv: Option<&Path>) -> CmdResult {
    let p = read_pointset(points)?;
    let w = load_weights(c.weights.as_deref(), p.dim())?;
    let r = wce(&p, &w, c.pstar, c.tol)?;
    let mut out = format!("total {}\nmethod {}\ntolerance {}\n", r.total, r.method, r.tolerance);
    let mut rows = String::from("mask,term,method,tolerance\n");
    for t in &r.per_subset {
        let _ = writeln!(out, "subset {} {} {} {}", t.subset, t.term, t.method, t.tolerance);
        let _ = writeln!(rows, "{},{},{},{}", t.subset.mask(), t.term, t.method, t.tolerance);
    }
    if let Some(path) = csv {
        write_file(path, &rows)?;
    }
    Ok(out)
}

fn cmd_discrepancy(points: &Path, c: &Common, anchored: bool) -> CmdResult {
    let p = read_pointset(points)?;
    let v = match (&c.weights, anchored) {
        (None, false) => lp_discrepancy(&p, c.pstar, c.tol)?,
        (path, false) => weighted_lp_discrepancy(&p, &load_weights(path.as_deref(), p.dim())?, c.pstar, c.tol)?,
        (path, true) => anchored_wce(&p, &load_weights(path.as_deref(), p.dim())?, c.pstar, c.tol)?,
    };
    Ok(format!("value {}\ntolerance {}\n", v.value, v.tol))
}

fn cmd_bounds(points: &Path, c: &Common, csv: Option<&Path>) -> CmdResult {
    let p = read_pointset(points)?;
    let w = load_weights(c.weights.as_deref(), p.dim())?;
    let e = wce(&p, &w, c.pstar, c.tol)?;
    let ub = upper_bound_cor1(&p, &w, c.pstar, c.tol)?;
    let two_d = p.dim() == 2 && !c.pstar.is_infinite() && is_projection_regular(&p)?;
    let sandwich = if two_d { Some(sandwich_2d(&p, &w, c.pstar, c.tol)?) } else { None };
    let mut out = format!("wce {} (tolerance {})\nupper_modified_weights {} (tolerance {})\n", e.total, e.tolerance, ub.value, ub.tol);
    let (mut up2, mut low) = (String::new(), String::new());
    if let Some(s) = &sandwich {
        let _ = writeln!(out, "upper_2d {} (tolerance {})", s.upper.value, s.upper.tol);
        let _ = writeln!(out, "lower_proxy_2d {} (tolerance {})", s.lower_proxy.value, s.lower_proxy.tol);
        up2 = s.upper.value.to_string();
        low = s.lower_proxy.value.to_string();
    }
    if let Some(path) = csv {
        let rows = format!("wce,upper_modified_weights,upper_2d,lower_proxy_2d\n{},{},{up2},{low}\n", e.total, ub.value);
        write_file(path, &rows)?;
    }
    Ok(out)
}

fn cmd_study(family: Family, from: usize, to: usize, c: &Common, csv: Option<&Path>) -> CmdResult {
    if from > to {
        return Err(Failure::Usage(format!("empty range {from}..={to}")));
    }
    let w = load_weights(c.weights.as_deref(), family.dim())?;
    let text = to_csv(&run_study(family, from..=to, &w, c.pstar, c.tol)?);
    match csv {
        Some(path) => {
            write_file(path, &text)?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

fn cmd_verify(suite: Suite) -> CmdResult {
    let checks = verify::run(suite);
    let mut out = String::new();
    let mut failed = Vec::new();
    for c in &checks {
        let _ = writeln!(out, "{:<28} {}  {}", c.name, if c.passed { "pass" } else { "FAIL" }, c.detail);
        if !c.passed {
            failed.push(c.name);
        }
    }
    if failed.is_empty() {
        Ok(out)
    } else {
        Err(Failure::Verification(format!("{out}failed: {}", failed.join(", "))))
    }
}

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Gen { kind, n, m, sigma, d, seed, out } => {
            let text = format_pointset(&gen(kind, n, m, sigma.as_deref(), d, seed)?);
            match out {
                Some(path) => {
                    write_file(&path, &text)?;
                    Ok(String::new())
                }
                None => Ok(text),
            }
        }
        Command::Wce { points, common, csv } => cmd_wce(&points, &common, csv.as_deref()),
        Command::Discrepancy { points, common, anchored } => cmd_discrepancy(&points, &common, anchored),
        Command::Bounds { points, common, csv } => cmd_bounds(&points, &common, csv.as_deref()),
        Command::Study { family, from, to, common, csv } => cmd_study(family, from, to, &common, csv.as_deref()),
        Command::Verify { suite } => cmd_verify(suite),
    }
}

fn configure_workers() -> Result<(), Failure> {
    let Ok(v) = std::env::var(WORKERS_ENV) else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::Usage(format!("{WORKERS_ENV} must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Usage(e.to_string()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    let result = configure_workers().and_then(|()| run(cli));
    match result {
        Ok(text) => {
            let _ = std::io::stdout().write_all(text.as_bytes());
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Computation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_COMPUTATION)
        }
        Err(Failure::Verification(msg)) => {
            println!("{msg}");
            ExitCode::from(EXIT_VERIFICATION)
        }
    }
}
