//! Command-line front end. JSON goes to stdout, diagnostics to stderr.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::apolarity::{apolar_operator_with_tol, DEFAULT_APOLAR_TOL};
use crate::bounds::fujiwara_bound;
use crate::error::Error;
use crate::poly::{Complex, Disc, Poly};
use crate::roots::RootFinder;
use crate::sweep::{sweep, to_csv, KRange, KUpper, SweepConfig, SweepOutcome};
use crate::verifier::{certify, certify_roots, certify_with_perturbation, generalized_certify};
use crate::SCHEMA_VERSION;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_FRAME_VIOLATION: i32 = 4;
pub const EXIT_DUPLICATE_NODES: i32 = 5;

const EXIT_HELP: &str = "\
Exit codes:
  0  success / certificate holds / pair is apolar
  1  check failed (theorem check, apolarity, or sweep failures; reproducer printed)
  2  input error (parse errors, invalid degrees or parameters, unwritable output)
  3  numerical failure (root finder did not converge, apolarity gate, ill-conditioning)
  4  frame violation (a selected zero lies outside the frame disc)
  5  duplicate selected zeros (rerun with --perturb EPS)

Log verbosity: KAKEYA_LOG=warn|info|debug";

#[derive(Debug, Parser)]
#[command(name = "kakeya", version, about = "Locate a zero of p^(k-1) from k zeros of p in a disc", after_help = EXIT_HELP)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fujiwara-type root bound of a polynomial.
    Bound(PolyArgs),
    /// Build and check a localization certificate.
    Certificate(CertificateArgs),
    /// Seeded Monte-Carlo sweep over (n, k) cells.
    Sweep(SweepArgs),
    /// Evaluate the apolar pairing A(a, b) at index degree(a).
    Apolar(ApolarArgs),
}

#[derive(Debug, Args)]
pub struct PolyArgs {
    /// Coefficients as JSON [[re, im], ...], ascending powers.
    #[arg(long, conflicts_with = "roots", required_unless_present = "roots")]
    pub coeffs: Option<String>,
    /// Roots as JSON [[re, im], ...]; the polynomial is their monic product.
    #[arg(long)]
    pub roots: Option<String>,
}

#[derive(Debug, Args)]
pub struct CertificateArgs {
    #[command(flatten)]
    pub poly: PolyArgs,
    /// Indices into --roots selecting the k zeros, JSON [i, j, ...].
    #[arg(
        long,
        conflicts_with = "node_points",
        required_unless_present = "node_points"
    )]
    pub nodes: Option<String>,
    /// The k zeros given as points, JSON [[re, im], ...].
    #[arg(long)]
    pub node_points: Option<String>,
    /// Frame center, JSON [re, im].
    #[arg(long, default_value = "[0,0]")]
    pub center: String,
    /// Frame radius.
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
    /// Expected number of selected zeros (checked against the selection).
    #[arg(long)]
    pub k: Option<usize>,
    /// Derivative order for the generalized construction (1 <= i <= k-1).
    #[arg(long)]
    pub i: Option<usize>,
    /// Separate coincident selected zeros by multiples of EPS (<= 1e-6).
    #[arg(long, value_name = "EPS")]
    pub perturb: Option<f64>,
    /// Seed for the root finder's starting configuration.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Inclusive degree range, e.g. 2..8 or 5.
    #[arg(long)]
    pub n: String,
    /// Inclusive k range; the upper end may be the literal `n`, e.g. 2..n.
    #[arg(long, default_value = "2..n")]
    pub k: String,
    /// Samples per (n, k) cell.
    #[arg(long)]
    pub samples: usize,
    #[arg(long)]
    pub seed: u64,
    /// CSV output path.
    #[arg(long)]
    pub out: PathBuf,
    /// Worker threads (results do not depend on this).
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ApolarArgs {
    #[arg(long, conflicts_with = "a_roots", required_unless_present = "a_roots")]
    pub a_coeffs: Option<String>,
    #[arg(long)]
    pub a_roots: Option<String>,
    #[arg(long, conflicts_with = "b_roots", required_unless_present = "b_roots")]
    pub b_coeffs: Option<String>,
    #[arg(long)]
    pub b_roots: Option<String>,
    #[arg(long, default_value_t = DEFAULT_APOLAR_TOL)]
    pub tol: f64,
}

/// A polynomial given either by coefficients or by roots.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolySpec {
    Coeffs(#[serde(with = "crate::poly::pair::vec")] Vec<Complex>),
    Roots(#[serde(with = "crate::poly::pair::vec")] Vec<Complex>),
}

impl PolySpec {
    pub fn from_flags(coeffs: Option<&str>, roots: Option<&str>) -> Result<Self, CliError> {
        match (coeffs, roots) {
            (Some(c), None) => Ok(PolySpec::Coeffs(parse_points(c, "coefficients")?)),
            (None, Some(r)) => Ok(PolySpec::Roots(parse_points(r, "roots")?)),
            _ => Err(CliError::input("give exactly one of coefficients or roots")),
        }
    }

    pub fn poly(&self) -> Result<Poly, CliError> {
        match self {
            PolySpec::Coeffs(c) if c.is_empty() => Err(CliError::input("empty coefficient list")),
            PolySpec::Roots(r) if r.is_empty() => Err(CliError::input("empty root list")),
            PolySpec::Coeffs(c) => Ok(Poly::new(c.clone())?),
            PolySpec::Roots(r) => Ok(Poly::from_roots(r)?),
        }
    }
}

/// JSON envelope carrying the schema version.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Document<T> {
    pub schema: String,
    #[serde(flatten)]
    pub body: T,
}

impl<T> Document<T> {
    pub fn new(body: T) -> Self {
        Self {
            schema: SCHEMA_VERSION.into(),
            body,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub seed: u64,
    pub samples_per_cell: usize,
    pub total_samples: usize,
    pub total_failures: usize,
    pub csv: PathBuf,
    #[serde(flatten)]
    pub outcome: SweepOutcome,
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn input(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::NotConverged { .. }
            | Error::ApolarityGate { .. }
            | Error::IllConditioned { .. }
            | Error::WitnessMismatch { .. }
            | Error::BoundViolation { .. } => EXIT_NUMERICAL,
            Error::FrameViolation { .. } => EXIT_FRAME_VIOLATION,
            Error::DegenerateNodes { .. } | Error::DegenerateConfiguration { .. } => {
                EXIT_DUPLICATE_NODES
            }
            _ => EXIT_INPUT,
        };
        let mut message = e.to_string();
        if code == EXIT_DUPLICATE_NODES {
            message.push_str(" (use --perturb EPS to separate coincident zeros)");
        }
        Self { code, message }
    }
}

fn parse_points(text: &str, what: &str) -> Result<Vec<Complex>, CliError> {
    let pairs: Vec<[f64; 2]> = serde_json::from_str(text)
        .map_err(|e| CliError::input(format!("cannot parse {what} as [[re, im], ...]: {e}")))?;
    Ok(pairs
        .into_iter()
        .map(|[re, im]| Complex::new(re, im))
        .collect())
}

fn parse_point(text: &str, what: &str) -> Result<Complex, CliError> {
    let [re, im]: [f64; 2] = serde_json::from_str(text)
        .map_err(|e| CliError::input(format!("cannot parse {what} as [re, im]: {e}")))?;
    Ok(Complex::new(re, im))
}

/// Parses `a..b` (inclusive) or a single integer.
pub fn parse_range(text: &str) -> Result<(usize, Option<usize>), CliError> {
    let bad = || CliError::input(format!("cannot parse range {text:?}; expected a..b or a"));
    let num = |s: &str| s.trim().parse::<usize>().map_err(|_| bad());
    match text.split_once("..") {
        None => {
            let v = num(text)?;
            Ok((v, Some(v)))
        }
        Some((lo, hi)) if hi.trim() == "n" => Ok((num(lo)?, None)),
        Some((lo, hi)) => {
            let hi = hi.strip_prefix('=').unwrap_or(hi);
            let (lo, hi) = (num(lo)?, num(hi)?);
            if lo > hi {
                return Err(bad());
            }
            Ok((lo, Some(hi)))
        }
    }
}

fn to_json<T: Serialize>(body: T) -> Result<String, CliError> {
    serde_json::to_string_pretty(&Document::new(body))
        .map_err(|e| CliError::input(format!("serialization failed: {e}")))
}

/// Matches each point to a distinct nearest root.
fn match_points(
    points: &[Complex],
    roots: &[Complex],
    rel_tol: f64,
) -> Result<Vec<usize>, CliError> {
    let mut used = vec![false; roots.len()];
    points
        .iter()
        .map(|pt| {
            let best = roots
                .iter()
                .enumerate()
                .filter(|(i, _)| !used[*i])
                .map(|(i, r)| (i, (r - pt).norm()))
                .min_by(|a, b| a.1.total_cmp(&b.1));
            match best {
                Some((i, d)) if d <= rel_tol * pt.norm().max(1.0) => {
                    used[i] = true;
                    Ok(i)
                }
                _ => Err(CliError::input(format!(
                    "point {pt} is not a zero of the polynomial"
                ))),
            }
        })
        .collect()
}

fn cmd_bound(args: &PolyArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let spec = PolySpec::from_flags(args.coeffs.as_deref(), args.roots.as_deref())?;
    let report = fujiwara_bound(&spec.poly()?)?;
    writeln!(out, "{}", to_json(report)?).ok();
    Ok(EXIT_OK)
}

fn cmd_apolar(args: &ApolarArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let a = PolySpec::from_flags(args.a_coeffs.as_deref(), args.a_roots.as_deref())?.poly()?;
    let b = PolySpec::from_flags(args.b_coeffs.as_deref(), args.b_roots.as_deref())?.poly()?;
    let (n, m) = (a.degree().unwrap_or(0), b.degree().unwrap_or(0));
    if m > n {
        return Err(CliError::input(format!(
            "degree(b) = {m} exceeds degree(a) = {n}"
        )));
    }
    let report = apolar_operator_with_tol(&a, &b, n, args.tol)?;
    writeln!(out, "{}", to_json(report)?).ok();
    Ok(if report.apolar {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    })
}

fn cmd_certificate(
    args: &CertificateArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, CliError> {
    let spec = PolySpec::from_flags(args.poly.coeffs.as_deref(), args.poly.roots.as_deref())?;
    let p = spec.poly()?;
    let frame = Disc::new(parse_point(&args.center, "center")?, args.radius)?;
    if !(frame.radius > 0.0) {
        return Err(CliError::input("frame radius must be positive"));
    }
    let finder = RootFinder::with_seed(args.seed);

    // Root multiset, when one is available or needed.
    let roots: Option<Vec<Complex>> = match &spec {
        PolySpec::Roots(r) => Some(r.clone()),
        PolySpec::Coeffs(_) if args.perturb.is_some() => {
            let found = finder.find_roots(&p)?;
            if !found.converged {
                return Err(Error::NotConverged {
                    iterations: found.iterations,
                    max_residual: found.max_residual,
                }
                .into());
            }
            Some(found.roots)
        }
        PolySpec::Coeffs(_) => None,
    };

    let (points, indices) = match (&args.nodes, &args.node_points, &roots) {
        (Some(text), _, Some(roots)) => {
            let indices: Vec<usize> = serde_json::from_str(text)
                .map_err(|e| CliError::input(format!("cannot parse node indices: {e}")))?;
            if let Some(&bad) = indices.iter().find(|&&i| i >= roots.len()) {
                return Err(CliError::input(format!("node index {bad} out of range")));
            }
            (
                indices.iter().map(|&i| roots[i]).collect::<Vec<_>>(),
                Some(indices),
            )
        }
        (Some(_), _, None) => {
            return Err(CliError::input(
                "--nodes indices require --roots; use --node-points",
            ))
        }
        (None, Some(text), roots) => {
            let points = parse_points(text, "node points")?;
            let tol = if matches!(spec, PolySpec::Roots(_)) {
                1e-12
            } else {
                1e-6
            };
            let indices = roots
                .as_ref()
                .map(|r| match_points(&points, r, tol))
                .transpose()?;
            (points, indices)
        }
        (None, None, _) => return Err(CliError::input("give --nodes or --node-points")),
    };
    if points.is_empty() {
        return Err(CliError::input("at least one node is required"));
    }
    if let Some(k) = args.k {
        if k != points.len() {
            return Err(CliError::input(format!(
                "--k {k} does not match the {} selected zeros",
                points.len()
            )));
        }
    }

    if let Some(i) = args.i {
        if args.perturb.is_some() {
            return Err(CliError::input("--perturb is not available with --i"));
        }
        let report = generalized_certify(&p, &points, &frame, i, &finder)?;
        writeln!(out, "{}", to_json(&report)?).ok();
        if !report.holds {
            writeln!(
                err,
                "generalized check failed: zero of p^({i}) outside the root bound of t"
            )
            .ok();
            return Ok(EXIT_CHECK_FAILED);
        }
        return Ok(EXIT_OK);
    }

    let certificate = match (args.perturb, roots, indices) {
        (Some(eps), Some(roots), Some(indices)) => {
            certify_with_perturbation(&roots, &indices, &frame, eps, &finder)?
        }
        (None, Some(roots), Some(indices)) if matches!(spec, PolySpec::Roots(_)) => {
            certify_roots(&roots, &indices, &frame, &finder)?
        }
        _ => certify(&p, &points, &frame, &finder)?,
    };
    writeln!(out, "{}", to_json(&certificate)?).ok();
    if !certificate.theorem_holds {
        writeln!(
            err,
            "theorem check failed; reproducer: {}",
            serde_json::to_string(&certificate).unwrap_or_default()
        )
        .ok();
        return Ok(EXIT_CHECK_FAILED);
    }
    Ok(EXIT_OK)
}

fn cmd_sweep(args: &SweepArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let (n_lo, n_hi) = parse_range(&args.n)?;
    let n_hi = n_hi.ok_or_else(|| CliError::input("the n range needs a numeric upper end"))?;
    let (k_lo, k_hi) = parse_range(&args.k)?;
    let config = SweepConfig {
        n_range: n_lo..=n_hi,
        k_range: KRange {
            lo: k_lo,
            hi: k_hi.map_or(KUpper::N, KUpper::Fixed),
        },
        samples_per_cell: args.samples,
        seed: args.seed,
        workers: args.workers,
    };
    let outcome = sweep(&config)?;
    std::fs::write(&args.out, to_csv(&outcome.records))
        .map_err(|e| CliError::input(format!("cannot write {}: {e}", args.out.display())))?;
    for repro in &outcome.reproducers {
        writeln!(
            err,
            "failure reproducer: {}",
            serde_json::to_string(repro).unwrap_or_default()
        )
        .ok();
    }
    let summary = SweepSummary {
        seed: args.seed,
        samples_per_cell: args.samples,
        total_samples: outcome.total_samples(),
        total_failures: outcome.total_failures(),
        csv: args.out.clone(),
        outcome,
    };
    let failed = summary.total_failures > 0;
    writeln!(out, "{}", to_json(summary)?).ok();
    Ok(if failed { EXIT_CHECK_FAILED } else { EXIT_OK })
}

/// Runs a parsed command and returns the process exit code.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match &cli.command {
        Command::Bound(args) => cmd_bound(args, out),
        Command::Certificate(args) => cmd_certificate(args, out, err),
        Command::Sweep(args) => cmd_sweep(args, out, err),
        Command::Apolar(args) => cmd_apolar(args, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            writeln!(err, "error: {}", e.message).ok();
            e.code
        }
    }
}
