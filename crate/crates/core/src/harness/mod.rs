//! Command-line front end: one JSON document on stdout per run, optional
//! CSV and SVG side files, and the batch property suites.

mod suite;
mod svg;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::extremal::{self, DnkLookup, DnkRow, Exactness, SearchBudget};
use crate::geometry::{self, convex_hull, diameter};
use crate::operator::{self, MonomialOperator, NonexpansiveConfig};
use crate::poly::{complex_vec, Polynomial};
use crate::roots::{find_roots, RootConfig};

pub use suite::{run_suite, SuiteCheck, SuiteFailure, SuiteName, SuiteSummary};
pub use svg::render_svg;

/// Name used in repro commands.
pub const BIN_NAME: &str = "polydiam";

#[derive(Debug, Clone, Parser)]
#[command(name = "polydiam", version, about = "Zero-set diameters of complex polynomials")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Tolerance for the command's main check (command-specific default).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Also write the JSON document to this file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Write an SVG plot (diam, hull, gauss-lucas).
    #[arg(long, global = true)]
    pub svg: Option<PathBuf>,
    #[command(flatten)]
    pub roots: RootArgs,
}

#[derive(Debug, Clone, Args)]
pub struct RootArgs {
    #[arg(long, global = true, default_value_t = 200)]
    pub max_iter: usize,
    #[arg(long, global = true, default_value_t = 1e-12)]
    pub residual_tol: f64,
    #[arg(long, global = true, default_value_t = 1e-6)]
    pub cluster_radius: f64,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Zeros with multiplicities.
    Roots(PolyArg),
    /// Diameter of the zero set.
    Diam(PolyArg),
    /// Convex hull of the zero set.
    Hull(PolyArg),
    /// Checks that the critical points lie in the hull of the zeros.
    GaussLucas(PolyArg),
    /// `diam Z(P^(k)) / diam Z(P)`.
    Ratio {
        #[command(flatten)]
        poly: PolyArg,
        #[arg(long)]
        k: usize,
    },
    /// Matches an operator against the canonical forms.
    Classify {
        #[command(flatten)]
        op: OpArg,
        /// Search starts for d_{n,k} values without a closed form.
        #[arg(long, default_value_t = 40)]
        dnk_starts: usize,
    },
    /// Randomised search for a diameter-increasing input.
    Refute {
        #[command(flatten)]
        op: OpArg,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
    /// Counts distinct zeros of the images of `(z + alpha)^s`.
    Probe {
        #[command(flatten)]
        op: OpArg,
        #[arg(long, default_value_t = 20)]
        grid: usize,
    },
    /// Lower bound for d_{n,k} by multi-start search.
    Dnk {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 200)]
        starts: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Every valid (n, k) up to `--n-max`.
    DnkTable {
        #[arg(long, default_value_t = 6)]
        n_max: usize,
        #[arg(long, default_value_t = 50)]
        starts: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Solutions of the two-term shifted-power identity.
    Claim {
        #[arg(long)]
        l: usize,
        /// `re,im`
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        beta: Complex64,
    },
    /// Nonsingularity of the shifted-power coefficient matrix.
    Basis {
        #[arg(long)]
        l: usize,
        /// JSON array of `[re, im]` pairs, inline or a file path.
        #[arg(long)]
        lambdas: String,
    },
    /// Runs a named property suite.
    Suite {
        #[arg(value_enum)]
        name: SuiteName,
    },
}

#[derive(Debug, Clone, Args)]
pub struct PolyArg {
    /// Polynomial JSON, inline or a file path.
    #[arg(long)]
    pub poly: String,
}

#[derive(Debug, Clone, Args)]
pub struct OpArg {
    /// Operator JSON, inline or a file path.
    #[arg(long)]
    pub op: String,
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| t.parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err(format!("expected `re,im`, got {s:?}")),
    }
}

impl RunConfig {
    pub fn root_config(&self) -> RootConfig {
        RootConfig {
            max_iter: self.roots.max_iter,
            residual_tol: self.roots.residual_tol,
            cluster_radius: self.roots.cluster_radius,
            seed: self.seed,
            ..RootConfig::default()
        }
    }
}

#[derive(Debug)]
pub enum HarnessError {
    Parse(String),
    Io(String),
    Domain(String),
}

impl HarnessError {
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Domain(_) => 1,
            HarnessError::Parse(_) | HarnessError::Io(_) => 2,
        }
    }

    fn to_json(&self) -> Value {
        let (kind, message) = match self {
            HarnessError::Parse(m) => ("parse", m),
            HarnessError::Io(m) => ("io", m),
            HarnessError::Domain(m) => ("domain", m),
        };
        json!({ "error": kind, "message": message })
    }
}

fn domain(e: impl std::fmt::Display) -> HarnessError {
    HarnessError::Domain(e.to_string())
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> HarnessError {
    HarnessError::Io(format!("{}: {e}", path.display()))
}

/// Inline JSON if it looks like JSON, otherwise a path to read.
fn load_json<T: serde::de::DeserializeOwned>(arg: &str) -> Result<T, HarnessError> {
    let trimmed = arg.trim_start();
    let text = if trimmed.starts_with('{') || trimmed.starts_with('[') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| io_err(Path::new(arg), e))?
    };
    serde_json::from_str(&text).map_err(|e| HarnessError::Parse(e.to_string()))
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable output")
}

/// Output of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct Dispatched {
    pub json: String,
    pub exit_code: i32,
}

/// Runs one command. Side files are written here; the JSON document is
/// returned for the caller to print.
pub fn dispatch(cfg: &RunConfig) -> Dispatched {
    match execute(cfg) {
        Ok(value) => Dispatched {
            json: serde_json::to_string_pretty(&value).expect("serializable output"),
            exit_code: 0,
        },
        Err(e) => Dispatched {
            json: serde_json::to_string_pretty(&e.to_json()).expect("serializable output"),
            exit_code: e.exit_code(),
        },
    }
}

fn execute(cfg: &RunConfig) -> Result<Value, HarnessError> {
    let rc = cfg.root_config();
    let value = match &cfg.command {
        Command::Roots(a) => {
            let p: Polynomial = load_json(&a.poly)?;
            to_value(&find_roots(&p, &rc).map_err(domain)?)
        }
        Command::Diam(a) => {
            let p: Polynomial = load_json(&a.poly)?;
            let zeros = find_roots(&p, &rc).map_err(domain)?;
            maybe_svg(cfg, &p, &rc)?;
            json!({ "diameter": diameter(&zeros), "zeros": zeros })
        }
        Command::Hull(a) => {
            let p: Polynomial = load_json(&a.poly)?;
            let zeros = find_roots(&p, &rc).map_err(domain)?;
            maybe_svg(cfg, &p, &rc)?;
            json!({ "hull": convex_hull(&zeros.centers()), "zeros": zeros })
        }
        Command::GaussLucas(a) => {
            let p: Polynomial = load_json(&a.poly)?;
            let report = geometry::gauss_lucas_check(&p, cfg.tol.unwrap_or(geometry::HULL_TOL), &rc).map_err(domain)?;
            maybe_svg(cfg, &p, &rc)?;
            to_value(&report)
        }
        Command::Ratio { poly, k } => {
            let p: Polynomial = load_json(&poly.poly)?;
            json!({ "k": k, "ratio": extremal::ratio(&p, *k, &rc).map_err(domain)? })
        }
        Command::Classify { op, dnk_starts } => {
            let op: MonomialOperator = load_json(&op.op)?;
            let lookup = DnkLookup::new(
                SearchBudget {
                    starts: *dnk_starts,
                    ..SearchBudget::default()
                },
                cfg.seed,
            );
            to_value(&operator::classify(
                &op,
                cfg.tol.unwrap_or(operator::DEFAULT_CLASSIFY_TOL),
                &lookup,
            ))
        }
        Command::Refute { op, trials } => {
            let op: MonomialOperator = load_json(&op.op)?;
            let defaults = NonexpansiveConfig::default();
            let config = NonexpansiveConfig {
                trials: *trials,
                seed: cfg.seed,
                tol: cfg.tol.unwrap_or(defaults.tol),
                roots: rc,
                ..defaults
            };
            to_value(&operator::test_nonexpansive(&op, &config))
        }
        Command::Probe { op, grid } => {
            let op: MonomialOperator = load_json(&op.op)?;
            to_value(&operator::single_zero_probe(&op, &operator::default_alpha_grid(*grid), &rc))
        }
        Command::Dnk { n, k, starts, csv } => {
            let budget = SearchBudget {
                starts: *starts,
                ..SearchBudget::default()
            };
            let estimate = extremal::estimate_dnk(*n, *k, &budget, cfg.seed).map_err(domain)?;
            let exact_value = extremal::known_dnk(*n, *k);
            let row = DnkRow {
                estimate,
                exactness: if exact_value.is_some() { Exactness::Exact } else { Exactness::Estimate },
                exact_value,
            };
            if let Some(path) = csv {
                write_dnk_csv(path, std::slice::from_ref(&row))?;
            }
            to_value(&row)
        }
        Command::DnkTable { n_max, starts, csv } => {
            let budget = SearchBudget {
                starts: *starts,
                ..SearchBudget::default()
            };
            let rows = extremal::dnk_table(*n_max, &budget, cfg.seed).map_err(domain)?;
            if let Some(path) = csv {
                write_dnk_csv(path, &rows)?;
            }
            json!({ "rows": rows })
        }
        Command::Claim { l, beta } => {
            let solutions = operator::claim_solutions(*l, *beta).map_err(domain)?;
            json!({ "l": l, "beta": [beta.re, beta.im], "solutions": solutions })
        }
        Command::Basis { l, lambdas } => {
            #[derive(serde::Deserialize)]
            struct Shifts(#[serde(with = "complex_vec")] Vec<Complex64>);
            let Shifts(lambdas) = load_json(lambdas)?;
            to_value(&operator::shifted_power_basis_matrix(&lambdas, *l).map_err(domain)?)
        }
        Command::Suite { name } => to_value(&run_suite(*name, cfg.seed)),
    };
    if let Some(path) = &cfg.out {
        let text = serde_json::to_string_pretty(&value).expect("serializable output");
        std::fs::write(path, text + "\n").map_err(|e| io_err(path, e))?;
    }
    Ok(value)
}

fn maybe_svg(cfg: &RunConfig, p: &Polynomial, rc: &RootConfig) -> Result<(), HarnessError> {
    let Some(path) = &cfg.svg else { return Ok(()) };
    let zeros = find_roots(p, rc).map_err(domain)?;
    let dp = p.derivative(1);
    let critical = if dp.is_constant() {
        Vec::new()
    } else {
        find_roots(&dp, rc).map_err(domain)?.centers()
    };
    let doc = render_svg(&zeros.centers(), &critical);
    std::fs::write(path, doc).map_err(|e| io_err(path, e))
}

fn fmt_root(z: Complex64) -> String {
    // -0.0 prints as "-0"
    let clean = |x: f64| if x == 0.0 { 0.0 } else { x };
    format!("{}{:+}i", clean(z.re), clean(z.im))
}

/// Columns: n, k, best_ratio, exactness_flag, degree_used, witness_roots,
/// starts, seed.
pub fn write_dnk_csv(path: &Path, rows: &[DnkRow]) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_path(path).map_err(|e| io_err(path, e))?;
    let header = ["n", "k", "best_ratio", "exactness_flag", "degree_used", "witness_roots", "starts", "seed"];
    w.write_record(header).map_err(|e| io_err(path, e))?;
    for row in rows {
        let e = &row.estimate;
        let flag = match row.exactness {
            Exactness::Exact => "EXACT",
            Exactness::Estimate => "ESTIMATE",
        };
        let witness: Vec<String> = e.witness_roots.iter().map(|&z| fmt_root(z)).collect();
        w.write_record([
            e.n.to_string(),
            e.k.to_string(),
            e.best_ratio.to_string(),
            flag.to_string(),
            e.degree_used.to_string(),
            witness.join(";"),
            e.starts.to_string(),
            e.seed.to_string(),
        ])
        .map_err(|e| io_err(path, e))?;
    }
    w.flush().map_err(|e| io_err(path, e))
}

/// Parses `args` (program name first), runs, prints the JSON document to
/// stdout and prose to stderr. Returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(cfg) => cfg,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let out = dispatch(&cfg);
    println!("{}", out.json);
    if out.exit_code != 0 {
        eprintln!("polydiam: failed with exit code {}", out.exit_code);
    }
    out.exit_code
}
