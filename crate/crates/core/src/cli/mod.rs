//! The `powerindep` command-line tool.
//!
//! Exit codes: 0 success, independent, or inequality holds; 1 dependent or
//! violated (still a valid computation); 2 usage or parse error; 3 a
//! mathematical precondition failed.

mod parse;
mod report;

pub use parse::{max_variable, parse_poly, print_poly, ParseError, ParseErrorKind};
pub use report::RunReport;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::independence::{
    self, bad_exponents, find_dependent_pair, linear_dependency, pairs, powers_dependency,
    theorem_bound, IndependenceError, IndependenceVerdict, PowerFamily, Probe, SamplerConfig,
};
use crate::mason::{mason_check, MasonError};
use crate::poly::{format_rational, MultiPoly, Rational, UniPoly};
use crate::projection::{self, check_reduction_soundness, Reduction, ReductionTrace};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DEPENDENT: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "powerindep",
    version,
    about = "Linear independence of powers of polynomials"
)]
struct Cli {
    /// Print the run report as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Number of variables (inferred from the inputs when omitted).
    #[arg(long, global = true)]
    dim: Option<usize>,
    /// Seed for randomized subcommands.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct PolyArgs {
    /// Polynomial expressions.
    #[arg(allow_hyphen_values = true)]
    polys: Vec<String>,
    /// File with one expression per line; `#` starts a comment.
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Pairwise and full linear independence of the inputs.
    Check(PolyArgs),
    /// Independence of the r-th powers.
    Powers {
        #[arg(long)]
        r: u32,
        #[command(flatten)]
        input: PolyArgs,
    },
    /// The exponent bound max(k*C(k-1,2), 2).
    Bound {
        #[arg(long)]
        k: u64,
    },
    /// Exponents 1..=rmax at which the powers are dependent.
    BadExponents {
        #[arg(long)]
        rmax: u32,
        #[command(flatten)]
        input: PolyArgs,
    },
    /// Generalized Mason inequality for a zero-sum univariate family.
    Mason(PolyArgs),
    /// Project a dependence among r-th powers to one variable.
    Reduce {
        #[arg(long)]
        r: u32,
        #[arg(long, default_value_t = projection::DEFAULT_BUDGET)]
        budget: usize,
        #[command(flatten)]
        input: PolyArgs,
    },
    /// Check the bound on random families.
    Verify {
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        maxdeg: u32,
        /// Exponents probed above the bound.
        #[arg(long, default_value_t = 3)]
        window: u32,
    },
}

/// Failure that ends a run without a report.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Help(String),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Precondition(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Help(_) => EXIT_OK,
            CliError::Usage(_) | CliError::Parse(_) => EXIT_USAGE,
            CliError::Precondition(_) => EXIT_PRECONDITION,
        }
    }
}

impl From<IndependenceError> for CliError {
    fn from(e: IndependenceError) -> Self {
        match e {
            IndependenceError::EmptyFamily
            | IndependenceError::TooFewPolynomials(_)
            | IndependenceError::ZeroExponent
            | IndependenceError::InvalidFamilySize(_)
            | IndependenceError::BoundOverflow(_)
            | IndependenceError::EmptyExponentRange
            | IndependenceError::InvalidConfig(_) => CliError::Usage(e.to_string()),
            _ => CliError::Precondition(e.to_string()),
        }
    }
}

/// Result of a completed run.
#[derive(Debug, Clone, PartialEq)]
pub struct Invocation {
    pub exit_code: i32,
    pub report: RunReport,
    /// Human-readable summary.
    pub text: String,
}

struct Outcome {
    exit_code: i32,
    inputs: Vec<String>,
    result: Value,
    text: String,
    seed: Option<u64>,
}

/// Parses `args` (including the program name) and runs the subcommand.
pub fn invoke<I, T>(args: I) -> Result<Invocation, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| match e.kind() {
        clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
            CliError::Help(e.to_string())
        }
        _ => CliError::Usage(e.to_string()),
    })?;
    let start = Instant::now();
    let (name, outcome) = dispatch(&cli)?;
    Ok(Invocation {
        exit_code: outcome.exit_code,
        report: RunReport {
            command: name.to_owned(),
            inputs: outcome.inputs,
            result: outcome.result,
            seed: outcome.seed,
            elapsed_ms: start.elapsed().as_millis() as u64,
        },
        text: outcome.text,
    })
}

/// Runs the tool, writing the report (or summary) to `out` and diagnostics
/// to `err`. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let json = args.iter().any(|a| a == "--json");
    match invoke(args) {
        Ok(inv) => {
            let body = if json { inv.report.to_json() } else { inv.text };
            let _ = writeln!(out, "{body}");
            inv.exit_code
        }
        Err(CliError::Help(text)) => {
            let _ = write!(out, "{text}");
            EXIT_OK
        }
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.to_string().trim_end());
            e.exit_code()
        }
    }
}

fn dispatch(cli: &Cli) -> Result<(&'static str, Outcome), CliError> {
    Ok(match &cli.command {
        Command::Check(input) => ("check", check(&load(cli, input)?)?),
        Command::Powers { r, input } => ("powers", powers(load(cli, input)?, *r)?),
        Command::Bound { k } => ("bound", bound(*k)?),
        Command::BadExponents { rmax, input } => ("bad-exponents", bad(&load(cli, input)?, *rmax)?),
        Command::Mason(input) => ("mason", mason(&load(cli, input)?)?),
        Command::Reduce { r, budget, input } => {
            let seed = cli.seed.unwrap_or(0);
            ("reduce", reduce(load(cli, input)?, *r, seed, *budget)?)
        }
        Command::Verify {
            trials,
            k,
            d,
            maxdeg,
            window,
        } => {
            let config = SamplerConfig {
                k_min: *k,
                k_max: *k,
                d_min: *d,
                d_max: *d,
                max_degree: *maxdeg,
                probe: Probe::AboveBound { window: *window },
                ..SamplerConfig::default()
            };
            ("verify", verify(&config, *trials, cli.seed.unwrap_or(0))?)
        }
    })
}

/// Reads `#`-commented, one-per-line expressions.
pub fn read_expressions(text: &str) -> Vec<String> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(str::to_owned)
        .collect()
}

fn load(cli: &Cli, input: &PolyArgs) -> Result<Vec<MultiPoly>, CliError> {
    let mut texts = input.polys.clone();
    if let Some(path) = &input.file {
        let body = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        texts.extend(read_expressions(&body));
    }
    if texts.is_empty() {
        return Err(CliError::Usage("no polynomials given".into()));
    }
    let dim = cli.dim.unwrap_or_else(|| {
        texts
            .iter()
            .map(|t| max_variable(t))
            .max()
            .unwrap_or(0)
            .max(1)
    });
    texts
        .iter()
        .map(|t| parse_poly(t, dim).map_err(|e| CliError::Parse(format!("{t:?}: {e}"))))
        .collect()
}

fn rationals(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

fn echo(polys: &[MultiPoly]) -> Vec<String> {
    polys.iter().map(print_poly).collect()
}

fn outcome(exit_code: i32, inputs: Vec<String>, result: Value, text: String) -> Outcome {
    Outcome {
        exit_code,
        inputs,
        result,
        text,
        seed: None,
    }
}

fn check(polys: &[MultiPoly]) -> Result<Outcome, CliError> {
    let pair = find_dependent_pair(polys)?;
    let verdict = linear_dependency(polys)?;
    let cert = verdict.certificate().map(|c| rationals(c.coefficients()));
    let mut text = match pair {
        None => "pairwise independent".to_owned(),
        Some((i, j)) => format!("polynomials {i} and {j} are proportional"),
    };
    text.push('\n');
    text.push_str(&match &cert {
        None => "linearly independent".to_owned(),
        Some(c) => format!("linearly dependent: certificate ({})", c.join(", ")),
    });
    let code = if pair.is_some() || verdict.is_dependent() {
        EXIT_DEPENDENT
    } else {
        EXIT_OK
    };
    let result = json!({
        "pairwise_independent": pair.is_none(),
        "dependent_pair": pair.map(|(i, j)| vec![i, j]),
        "dependent": verdict.is_dependent(),
        "certificate": cert,
    });
    Ok(outcome(code, echo(polys), result, text))
}

fn powers(polys: Vec<MultiPoly>, r: u32) -> Result<Outcome, CliError> {
    let inputs = echo(&polys);
    let family = PowerFamily::new(polys, r)?;
    let verdict = powers_dependency(&family);
    let cert = verdict.certificate().map(|c| rationals(c.coefficients()));
    let (code, text) = match &cert {
        None => (EXIT_OK, format!("independent at r = {r}")),
        Some(c) => (
            EXIT_DEPENDENT,
            format!("dependent at r = {r}: certificate ({})", c.join(", ")),
        ),
    };
    let result = json!({ "r": r, "dependent": cert.is_some(), "certificate": cert });
    Ok(outcome(code, inputs, result, text))
}

fn bound(k: u64) -> Result<Outcome, CliError> {
    let b = theorem_bound(k)?;
    Ok(outcome(
        EXIT_OK,
        Vec::new(),
        json!({ "k": k, "bound": b }),
        b.to_string(),
    ))
}

fn bad(polys: &[MultiPoly], rmax: u32) -> Result<Outcome, CliError> {
    let found = bad_exponents(polys, rmax)?;
    let cap = pairs(polys.len() as u64 - 1).unwrap_or(u64::MAX);
    let text = if found.is_empty() {
        format!("no dependent powers for r in 1..={rmax}")
    } else {
        let list: Vec<String> = found.iter().map(u32::to_string).collect();
        format!("dependent powers at r = {}", list.join(", "))
    };
    let code = if found.is_empty() {
        EXIT_OK
    } else {
        EXIT_DEPENDENT
    };
    let result = json!({ "rmax": rmax, "bad_exponents": found, "cap": cap });
    Ok(outcome(code, echo(polys), result, text))
}

fn mason(polys: &[MultiPoly]) -> Result<Outcome, CliError> {
    let uni = polys
        .iter()
        .map(|p| p.compress_to_univariate(0))
        .collect::<Result<Vec<UniPoly>, _>>()
        .map_err(|_| CliError::Usage("mason takes univariate polynomials in x1".into()))?;
    let v = mason_check(&uni).map_err(|e| match e {
        MasonError::TooFewPolynomials(_) => CliError::Usage(e.to_string()),
        _ => CliError::Precondition(e.to_string()),
    })?;
    let text = format!(
        "max degree {} {} C(k-1,2)*(n0-1) = {} (n0 = {})",
        v.max_degree,
        if v.holds { "<=" } else { ">" },
        v.rhs,
        v.radical_count
    );
    let result = json!({
        "max_degree": v.max_degree,
        "radical_count": v.radical_count,
        "rhs": v.rhs,
        "holds": v.holds,
    });
    let code = if v.holds { EXIT_OK } else { EXIT_DEPENDENT };
    Ok(outcome(code, echo(polys), result, text))
}

fn var_name(i: usize) -> String {
    format!("x{}", i + 1)
}

fn trace_json(trace: &ReductionTrace, dim: usize) -> Value {
    let point: serde_json::Map<String, Value> = trace
        .point
        .values
        .iter()
        .map(|(&v, q)| (var_name(v), Value::String(format_rational(q))))
        .collect();
    let projected: Vec<String> = trace
        .projected
        .iter()
        .map(|u| {
            MultiPoly::from_univariate(u, dim, trace.chosen_variable)
                .expect("kept variable is in range")
                .to_string()
        })
        .collect();
    json!({
        "chosen_variable": var_name(trace.chosen_variable),
        "support_sets": trace.support_sets,
        "relabeled_family": trace.relabeled_family,
        "point": point,
        "projected": projected,
        "certificate": rationals(&trace.certificate),
        "gamma_prime": format_rational(&trace.gamma_prime),
        "exponent": trace.exponent,
        "attempts": trace.attempts,
    })
}

fn reduce(polys: Vec<MultiPoly>, r: u32, seed: u64, budget: usize) -> Result<Outcome, CliError> {
    let inputs = echo(&polys);
    let dim = polys.first().map_or(1, MultiPoly::dim);
    let family = PowerFamily::new(polys, r)?;
    let IndependenceVerdict::Dependent(cert) = powers_dependency(&family) else {
        return Err(CliError::Precondition(format!(
            "the powers are independent at r = {r}"
        )));
    };
    let reduction = projection::reduce_with_budget(&family, &cert, seed, budget)
        .map_err(|e| CliError::Precondition(e.to_string()))?;
    let (result, text) = match &reduction {
        Reduction::Reduced(trace) => {
            let sound = check_reduction_soundness(&family, trace);
            let t = trace_json(trace, dim);
            let text = format!(
                "kept {} at {}; projected: {}; gamma' = {}; verified: {}",
                t["chosen_variable"].as_str().unwrap_or_default(),
                serde_json::to_string(&t["point"]).unwrap_or_default(),
                t["projected"]
                    .as_array()
                    .map(|a| a
                        .iter()
                        .filter_map(Value::as_str)
                        .collect::<Vec<_>>()
                        .join(", "))
                    .unwrap_or_default(),
                format_rational(&trace.gamma_prime),
                sound
            );
            (
                json!({ "outcome": "reduced", "sound": sound, "trace": t }),
                text,
            )
        }
        Reduction::AlreadyContradictory { support_sets } => (
            json!({ "outcome": "already_contradictory", "support_sets": support_sets }),
            "no variable is shared by two polynomials".to_owned(),
        ),
    };
    Ok(Outcome {
        exit_code: EXIT_OK,
        inputs,
        result,
        text,
        seed: Some(seed),
    })
}

fn verify(config: &SamplerConfig, trials: usize, seed: u64) -> Result<Outcome, CliError> {
    let report = independence::verify_theorem(config, trials, seed)?;
    let text = format!(
        "{} of {} trials passed ({} exponent checks)",
        report.passes, report.trials, report.checks
    );
    let code = if report.passed {
        EXIT_OK
    } else {
        EXIT_DEPENDENT
    };
    Ok(Outcome {
        exit_code: code,
        inputs: Vec::new(),
        result: serde_json::to_value(&report).expect("report serializes"),
        text,
        seed: Some(seed),
    })
}
