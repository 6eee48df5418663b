//! Command-line front end: reads a system description, runs one of the
//! decision or verification commands and renders a [`Report`].
//!
//! Exit status: 0 whenever the computation finished (a `false` verdict is
//! data), 2 for parse and validation failures, 3 for violated
//! preconditions such as a prime that is too small, 1 for internal errors.

pub mod input;
pub mod report;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use gkz_core::scalar::{format_rational, parse_rational};
use gkz_core::series::{
    apply_operators_series, phi_series, verify_g3_closed_form, FormalSolutionSpec,
};
use gkz_core::{modp, AConfiguration, ApexReport, GkzError, GkzSystem, ParameterVector, Rat};
use num_bigint::BigInt;
use num_traits::Signed;
use thiserror::Error;

pub use input::SystemDescription;
pub use report::{CommandEcho, Format, Payload, Report, SystemSummary};

use report::{ConjugateEntry, FacetEntry, ModpSolution, ModpTerm, SeriesTerm};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error(transparent)]
    Core(#[from] GkzError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Core(e) => match e {
                GkzError::InvalidInput(_)
                | GkzError::SpanDeficient { .. }
                | GkzError::NoGradingForm
                | GkzError::DegenerateCone => 2,
                GkzError::Invariant(_) => 1,
                _ => 3,
            },
        }
    }

    fn kind(&self) -> String {
        match self {
            CliError::Parse(_) => "Parse".into(),
            // the variant name, without its fields
            CliError::Core(e) => {
                let dbg = format!("{e:?}");
                dbg.split(|c: char| !c.is_alphanumeric())
                    .next()
                    .unwrap_or_default()
                    .to_string()
            }
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "gkz",
    version,
    about = "Exact algebraicity decisions for GKZ hypergeometric systems"
)]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Human, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Full verdict: irreducibility and the signature of every conjugate.
    Check {
        #[arg(long)]
        input: PathBuf,
        /// Restrict the sweep to these multipliers (comma separated).
        #[arg(long, value_delimiter = ',')]
        k: Vec<String>,
    },
    /// Apex points of k * alpha (default k = 1).
    Apex {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_delimiter = ',')]
        k: Vec<String>,
    },
    /// Normalized volume of the configuration.
    Volume {
        #[arg(long)]
        input: PathBuf,
    },
    /// Irreducibility, with the faces met by alpha + Z^r.
    Irreducible {
        #[arg(long)]
        input: PathBuf,
    },
    /// Polynomial solutions modulo a prime.
    Modp {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        p: u64,
    },
    /// Truncated formal solution and its operator residuals.
    Series {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 6)]
        order: u32,
    },
    /// Closed form of G3(a, 1 - a) as a truncated series identity.
    VerifyG3 {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, default_value_t = 6)]
        order: u32,
    },
}

/// What the process should print and return.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let code = e.exit_code();
            return if e.use_stderr() {
                Outcome {
                    stdout: String::new(),
                    stderr: text,
                    code,
                }
            } else {
                Outcome {
                    stdout: text,
                    stderr: String::new(),
                    code,
                }
            };
        }
    };
    let format = cli.format;
    let (echo, result) = dispatch(&cli.command);
    let report = match result {
        Ok(mut report) => {
            report.command = echo;
            report
        }
        Err(e) => error_report(echo, &e),
    };
    let stdout = report.render(format);
    let stderr = match (&report.payload, format) {
        (Payload::Error { message, .. }, Format::Human) => format!("error: {message}\n"),
        _ => String::new(),
    };
    let stdout = if stderr.is_empty() {
        stdout
    } else {
        String::new()
    };
    Outcome {
        stdout,
        stderr,
        code: report.exit_status,
    }
}

fn error_report(command: CommandEcho, e: &CliError) -> Report {
    Report {
        command,
        system: None,
        payload: Payload::Error {
            error: e.kind(),
            message: e.to_string(),
        },
        exit_status: e.exit_code(),
    }
}

fn dispatch(command: &Command) -> (CommandEcho, Result<Report, CliError>) {
    let echo = |name: &str, input: &PathBuf| CommandEcho {
        name: name.into(),
        input: Some(input.display().to_string()),
        ..CommandEcho::default()
    };
    match command {
        Command::Check { input, k } => {
            let mut e = echo("check", input);
            e.k = (!k.is_empty()).then(|| k.clone());
            let r = load(input).and_then(|d| {
                let ks = parse_multipliers(k)?;
                cmd_check(&d, ks.as_deref())
            });
            (e, r)
        }
        Command::Apex { input, k } => {
            let mut e = echo("apex", input);
            e.k = (!k.is_empty()).then(|| k.clone());
            let r = load(input).and_then(|d| {
                let ks = parse_multipliers(k)?;
                cmd_apex(&d, ks.as_deref())
            });
            (e, r)
        }
        Command::Volume { input } => (
            echo("volume", input),
            load(input).and_then(|d| cmd_volume(&d)),
        ),
        Command::Irreducible { input } => (
            echo("irreducible", input),
            load(input).and_then(|d| cmd_irreducible(&d)),
        ),
        Command::Modp { input, p } => {
            let mut e = echo("modp", input);
            e.p = Some(*p);
            (e, load(input).and_then(|d| cmd_modp(&d, *p)))
        }
        Command::Series { input, order } => {
            let mut e = echo("series", input);
            e.order = Some(*order);
            (e, load(input).and_then(|d| cmd_series(&d, *order)))
        }
        Command::VerifyG3 { a, order } => {
            let e = CommandEcho {
                name: "verify-g3".into(),
                a: Some(a.clone()),
                order: Some(*order),
                ..CommandEcho::default()
            };
            let r = parse_rational(a)
                .ok_or_else(|| CliError::Parse(format!("--a: malformed rational {a:?}")))
                .and_then(|a| cmd_verify_g3(&a, *order));
            (e, r)
        }
    }
}

fn load(path: &PathBuf) -> Result<SystemDescription, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    SystemDescription::parse(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn parse_multipliers(ks: &[String]) -> Result<Option<Vec<BigInt>>, CliError> {
    if ks.is_empty() {
        return Ok(None);
    }
    ks.iter()
        .map(|s| match s.trim().parse::<BigInt>() {
            Ok(k) if k.is_positive() => Ok(k),
            _ => Err(CliError::Parse(format!(
                "--k: expected a positive integer, got {s:?}"
            ))),
        })
        .collect::<Result<Vec<_>, _>>()
        .map(Some)
}

fn strings<T: ToString>(xs: &[T]) -> Vec<String> {
    xs.iter().map(ToString::to_string).collect()
}

fn rationals(xs: &[Rat]) -> Vec<String> {
    xs.iter().map(format_rational).collect()
}

fn summary(desc: &SystemDescription, sys: &GkzSystem, alpha: &ParameterVector) -> SystemSummary {
    let cfg = sys.config();
    let relations = cfg.relations();
    SystemSummary {
        name: desc.name.clone(),
        r: cfg.rank(),
        n: cfg.len(),
        generators: cfg.generators().iter().map(|g| strings(g)).collect(),
        labels: (0..cfg.len()).map(|i| desc.label(i)).collect(),
        alpha: rationals(alpha.values()),
        grading: rationals(cfg.grading()),
        relations: (0..relations.nrows())
            .map(|i| strings(relations.row(i)))
            .collect(),
        facets: sys
            .facets()
            .facets()
            .iter()
            .map(|f| FacetEntry {
                normal: strings(&f.normal),
                generators: f.generators.iter().map(|g| g + 1).collect(),
            })
            .collect(),
        volume: sys.volume().to_string(),
        saturated: sys.is_saturated(),
    }
}

fn open(desc: &SystemDescription) -> Result<(GkzSystem, ParameterVector), CliError> {
    let (cfg, alpha) = desc.build()?;
    Ok((GkzSystem::new(cfg)?, alpha))
}

fn report(
    desc: &SystemDescription,
    sys: &GkzSystem,
    alpha: &ParameterVector,
    payload: Payload,
) -> Report {
    Report {
        command: CommandEcho::default(),
        system: Some(summary(desc, sys, alpha)),
        payload,
        exit_status: 0,
    }
}

fn conjugate_entry(k: &BigInt, rep: &ApexReport, with_points: bool) -> ConjugateEntry {
    ConjugateEntry {
        k: k.to_string(),
        alpha: rationals(rep.alpha.values()),
        signature: rep.signature,
        maximal: rep.maximal,
        apex_points: with_points.then(|| rep.apex_points.iter().map(|p| rationals(p)).collect()),
    }
}

/// Irreducibility, then the signature of `k * alpha` for every `k` coprime
/// to the common denominator (or only for `ks`).
pub fn cmd_check(desc: &SystemDescription, ks: Option<&[BigInt]>) -> Result<Report, CliError> {
    let (sys, alpha) = open(desc)?;
    let verdict = sys.decide_algebraic_for(&alpha, ks);
    let per_k = verdict
        .per_k
        .iter()
        .map(|(k, rep)| conjugate_entry(k, rep, false))
        .collect();
    let payload = Payload::Check {
        irreducible: verdict.irreducible,
        algebraic: verdict.algebraic,
        sweep: if ks.is_some() { "restricted" } else { "full" }.into(),
        denominator: alpha.denominator().to_string(),
        per_k,
    };
    Ok(report(desc, &sys, &alpha, payload))
}

/// Apex points of `k * alpha` for each `k` in `ks` (default `[1]`).
pub fn cmd_apex(desc: &SystemDescription, ks: Option<&[BigInt]>) -> Result<Report, CliError> {
    let (sys, alpha) = open(desc)?;
    let one = [BigInt::from(1)];
    let per_k = ks
        .unwrap_or(&one)
        .iter()
        .map(|k| conjugate_entry(k, &sys.apex_points(&alpha.scale(k)), true))
        .collect();
    Ok(report(desc, &sys, &alpha, Payload::Apex { per_k }))
}

pub fn cmd_volume(desc: &SystemDescription) -> Result<Report, CliError> {
    let (sys, alpha) = open(desc)?;
    let volume = sys.volume().to_string();
    Ok(report(desc, &sys, &alpha, Payload::Volume { volume }))
}

pub fn cmd_irreducible(desc: &SystemDescription) -> Result<Report, CliError> {
    let (sys, alpha) = open(desc)?;
    let faces = sys.facets().faces();
    let meeting_faces: Vec<Vec<usize>> = gkz_core::cone::meeting_faces(sys.facets(), &alpha)
        .into_iter()
        .map(|i| faces[i].generators.iter().map(|g| g + 1).collect())
        .collect();
    let payload = Payload::Irreducible {
        irreducible: meeting_faces.is_empty(),
        meeting_faces,
    };
    Ok(report(desc, &sys, &alpha, payload))
}

pub fn cmd_modp(desc: &SystemDescription, p: u64) -> Result<Report, CliError> {
    let (sys, alpha) = open(desc)?;
    let cfg: &AConfiguration = sys.config();
    let rank = modp::modp_rank(cfg, &alpha, p)?;
    let solutions = rank
        .betas
        .iter()
        .zip(&rank.solutions)
        .map(|(beta, f)| ModpSolution {
            beta: strings(beta),
            terms: f
                .coefficients()
                .map(|(e, c)| ModpTerm {
                    exponent: e.clone(),
                    coefficient: c,
                })
                .collect(),
            residual_zero: modp::apply_operators_modp(cfg, &rank.lift, f).is_zero(),
        })
        .collect();
    let payload = Payload::Modp {
        p,
        rho: rank.rho.to_string(),
        lift: strings(&rank.lift),
        rank: rank.rank,
        signature: rank.signature,
        solutions,
    };
    Ok(report(desc, &sys, &alpha, payload))
}

pub fn cmd_series(desc: &SystemDescription, order: u32) -> Result<Report, CliError> {
    let (sys, alpha) = open(desc)?;
    let spec = FormalSolutionSpec::from_alpha(sys.config().clone(), alpha.clone(), order)?;
    let phi = phi_series(&spec)?;
    let residual = apply_operators_series(&spec, &phi);
    let terms = phi
        .series
        .poly()
        .terms()
        .iter()
        .map(|(u, c)| {
            let ui: Vec<i64> = u.iter().map(|&x| i64::from(x)).collect();
            SeriesTerm {
                u: u.clone(),
                exponent: rationals(&phi.exponent(&ui)),
                coefficient: format_rational(c),
            }
        })
        .collect();
    let payload = Payload::Series {
        order,
        verified_order: residual.verified_order,
        gamma: rationals(&spec.gamma),
        chart: phi.chart.indices.iter().map(|i| i + 1).collect(),
        directions: phi.chart.directions.iter().map(|d| strings(d)).collect(),
        prefactor: rationals(&phi.prefactor),
        terms,
        checked: residual.checked,
        annihilated: residual.is_zero(),
    };
    Ok(report(desc, &sys, &alpha, payload))
}

pub fn cmd_verify_g3(a: &Rat, order: u32) -> Result<Report, CliError> {
    let holds = verify_g3_closed_form(a, order)?;
    Ok(Report {
        command: CommandEcho::default(),
        system: None,
        payload: Payload::VerifyG3 {
            a: format_rational(a),
            order,
            holds,
        },
        exit_status: 0,
    })
}
