//! Command-line front end.
//!
//! Exit codes: 0 all checks pass, 1 a check failed, 2 invalid input,
//! 3 unsupported branch, 4 a cap was exceeded.

mod report;

pub use report::{
    max_trunc_from_env, render, run_report, Check, CheckResult, ContextEcho, Format, Int, Report,
    ReportConfig, SeriesRow, DEFAULT_MAX_TRUNC, MAX_TRUNC_ENV,
};

use std::ffi::OsString;
use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde::Serialize;

use crate::cohom::{cohomology, h0, CohomologyTable};
use crate::conditions::{
    check_a1, check_a2, check_a3, classify_branch, default_very_ample, Branch,
};
use crate::error::{Error, Result};
use crate::picard::{
    canonical_class, euler_char, intersect, moduli_dimension, DivisorClass, Surface,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_UNSUPPORTED: i32 = 3;
pub const EXIT_CAP: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "ratsurf",
    version,
    about = "Exact Picard-lattice, cohomology and theta-pushforward computations on rational surfaces",
    args_conflicts_with_subcommands = true
)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,
    #[command(flatten)]
    report: ReportArgs,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Intersection numbers, genus and dim |L|.
    Genus(InfoArgs),
    /// h^0, h^1, h^2 and chi of O(D).
    Cohom(InfoArgs),
    /// The conditions A1, A2, A3 with witnesses.
    Conditions(ConditionArgs),
    /// Coefficients of Z^r(t).
    Zseries(SeriesArgs),
    /// Series plus the requested checks (the default without a subcommand).
    Report(ReportArgs),
}

#[derive(Debug, Args)]
struct ClassArgs {
    /// p2, f<e> or bl<e>.
    #[arg(long)]
    surface: Option<String>,
    /// Divisor class, e.g. 3H, 2G+5F, 2F-E.
    #[arg(long)]
    class: Option<String>,
}

#[derive(Debug, Args)]
struct InfoArgs {
    #[command(flatten)]
    class: ClassArgs,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Args)]
struct ConditionArgs {
    #[command(flatten)]
    class: ClassArgs,
    /// Very ample class for A1.
    #[arg(long = "very-ample")]
    very_ample: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Args)]
struct SeriesArgs {
    #[command(flatten)]
    class: ClassArgs,
    #[arg(long, default_value_t = 1)]
    r: u32,
    #[arg(long, default_value_t = 10)]
    trunc: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Args)]
struct ReportArgs {
    #[command(flatten)]
    class: ClassArgs,
    #[arg(long, default_value_t = 1)]
    r: u32,
    #[arg(long, default_value_t = 10)]
    trunc: usize,
    /// Comma-separated list of checks.
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [Check::Zseries, Check::Invariants])]
    checks: Vec<Check>,
    /// Very ample class for A1.
    #[arg(long = "very-ample")]
    very_ample: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }
}

/// Exit code for a library error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::UnsupportedBranch { .. } => EXIT_UNSUPPORTED,
        Error::EnumerationCap(_) => EXIT_CAP,
        _ => EXIT_INVALID,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: EXIT_INVALID,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome::ok(text)
            };
        }
    };
    let result = match cli.command {
        None => report_cmd(cli.report, false),
        Some(Command::Report(a)) => report_cmd(a, false),
        Some(Command::Zseries(a)) => report_cmd(
            ReportArgs {
                class: a.class,
                r: a.r,
                trunc: a.trunc,
                checks: Vec::new(),
                very_ample: None,
                format: a.format,
            },
            true,
        ),
        Some(Command::Genus(a)) => genus_cmd(a),
        Some(Command::Cohom(a)) => cohom_cmd(a),
        Some(Command::Conditions(a)) => conditions_cmd(a),
    };
    result.unwrap_or_else(|e| Outcome {
        code: exit_code(&e),
        stdout: String::new(),
        stderr: format!("error: {e}\n"),
    })
}

fn parse_target(a: &ClassArgs) -> Result<(Surface, DivisorClass<BigInt>)> {
    let surface = a
        .surface
        .as_deref()
        .ok_or_else(|| Error::InvalidArgument("--surface is required".into()))?;
    let class = a
        .class
        .as_deref()
        .ok_or_else(|| Error::InvalidArgument("--class is required".into()))?;
    let surface: Surface = surface.parse()?;
    let class = surface.parse_class(class)?;
    Ok((surface, class))
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    let mut s =
        serde_json::to_string_pretty(v).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn report_cmd(a: ReportArgs, series_only: bool) -> Result<Outcome> {
    let (surface, class) = parse_target(&a.class)?;
    let very_ample = a
        .very_ample
        .as_deref()
        .map(|h| surface.parse_class(h))
        .transpose()?;
    let cfg = ReportConfig {
        surface,
        class,
        r: a.r,
        trunc: a.trunc,
        checks: a.checks,
        format: a.format,
        very_ample,
        max_trunc: max_trunc_from_env()?,
    };
    let mut rep = run_report(&cfg)?;
    if series_only {
        rep.notes.clear();
    }
    let stdout = render(&rep, cfg.format)?;
    Ok(match rep.first_failure() {
        None => Outcome::ok(stdout),
        Some(f) => Outcome {
            code: EXIT_CHECK_FAILED,
            stdout,
            stderr: format!(
                "check {} failed: {}\n",
                f.name,
                f.witness.as_deref().unwrap_or("no witness")
            ),
        },
    })
}

#[derive(Debug, Serialize)]
struct GenusSummary {
    surface: String,
    class: String,
    self_intersection: Int,
    canonical_degree: Int,
    genus: Int,
    chi: Int,
    /// `None` when the class is not effective.
    dim: Option<Int>,
    moduli_dimension: Int,
    branch: Option<Branch>,
}

fn genus_cmd(a: InfoArgs) -> Result<Outcome> {
    let (s, l) = parse_target(&a.class)?;
    let k = canonical_class(&s);
    let dim = h0(&s, &l)? - BigInt::from(1);
    let effective = dim >= BigInt::from(0);
    let summary = GenusSummary {
        surface: s.to_string(),
        class: s.format_class(&l),
        self_intersection: Int(intersect(&s, &l, &l)?),
        canonical_degree: Int(intersect(&s, &l, &k)?),
        genus: Int(report::genus_of(&s, &l)?),
        chi: Int(euler_char(&s, &l)?),
        dim: effective.then(|| Int(dim.clone())),
        moduli_dimension: Int(moduli_dimension(&s, &l)?),
        branch: if effective {
            Some(classify_branch(&s, &l)?)
        } else {
            None
        },
    };
    let stdout = match a.format {
        Format::Json => to_json(&summary)?,
        Format::Text | Format::Csv => {
            let mut out = String::new();
            let _ = writeln!(out, "surface            {}", summary.surface);
            let _ = writeln!(out, "class              L = {}", summary.class);
            let _ = writeln!(out, "K                  {}", s.format_class(&k));
            let _ = writeln!(out, "L.L                {}", summary.self_intersection);
            let _ = writeln!(out, "L.K                {}", summary.canonical_degree);
            let _ = writeln!(out, "genus              {}", summary.genus);
            let _ = writeln!(out, "chi(L)             {}", summary.chi);
            let _ = writeln!(out, "dim |L|            {}", report::signed_or_dash(&dim));
            let _ = writeln!(out, "L.L + 1            {}", summary.moduli_dimension);
            if let Some(b) = summary.branch {
                let _ = writeln!(out, "branch             {b}");
            }
            out
        }
    };
    Ok(Outcome::ok(stdout))
}

#[derive(Debug, Serialize)]
struct CohomSummary {
    surface: String,
    class: String,
    h0: Int,
    h1: Option<Int>,
    h2: Option<Int>,
    chi: Int,
}

fn cohom_cmd(a: InfoArgs) -> Result<Outcome> {
    let (s, d) = parse_target(&a.class)?;
    let summary = match cohomology(&s, &d) {
        Ok(CohomologyTable { h0, h1, h2, chi }) => CohomSummary {
            surface: s.to_string(),
            class: s.format_class(&d),
            h0: Int(h0),
            h1: Some(Int(h1)),
            h2: Some(Int(h2)),
            chi: Int(chi),
        },
        Err(Error::UnsupportedSurface(_)) => CohomSummary {
            surface: s.to_string(),
            class: s.format_class(&d),
            h0: Int(h0(&s, &d)?),
            h1: None,
            h2: None,
            chi: Int(euler_char(&s, &d)?),
        },
        Err(e) => return Err(e),
    };
    let stdout = match a.format {
        Format::Json => to_json(&summary)?,
        Format::Csv => {
            let dash = |v: &Option<Int>| v.as_ref().map_or(String::new(), Int::to_string);
            format!(
                "surface,class,h0,h1,h2,chi\n{},{},{},{},{},{}\n",
                summary.surface,
                summary.class,
                summary.h0,
                dash(&summary.h1),
                dash(&summary.h2),
                summary.chi
            )
        }
        Format::Text => {
            let dash = |v: &Option<Int>| v.as_ref().map_or("-".to_string(), Int::to_string);
            format!(
                "{} on {}: h0 = {}, h1 = {}, h2 = {}, chi = {}\n",
                summary.class,
                summary.surface,
                summary.h0,
                dash(&summary.h1),
                dash(&summary.h2),
                summary.chi
            )
        }
    };
    Ok(Outcome::ok(stdout))
}

#[derive(Debug, Serialize)]
struct ConditionSummary {
    name: String,
    pass: bool,
    proxy: bool,
    witness: Option<String>,
    details: Vec<String>,
}

fn conditions_cmd(a: ConditionArgs) -> Result<Outcome> {
    let (s, l) = parse_target(&a.class)?;
    let h = match a.very_ample.as_deref() {
        Some(h) => s.parse_class(h),
        None => default_very_ample(&s),
    };
    let results = [
        ("A1", h.and_then(|h| check_a1(&s, &l, &h))),
        ("A2", check_a2(&s, &l)),
        ("A3", check_a3(&s, &l)),
    ];
    let mut rows = Vec::new();
    for (name, res) in results {
        rows.push(match res {
            Ok(r) => ConditionSummary {
                name: name.into(),
                pass: r.passed,
                proxy: r.proxy,
                witness: r.witness.map(|w| w.format(&s)),
                details: r.details,
            },
            Err(e @ Error::EnumerationCap(_)) => return Err(e),
            Err(e) => ConditionSummary {
                name: name.into(),
                pass: false,
                proxy: false,
                witness: Some(e.to_string()),
                details: Vec::new(),
            },
        });
    }
    let stdout = match a.format {
        Format::Json => to_json(&rows)?,
        Format::Text | Format::Csv => {
            let mut out = String::new();
            for r in &rows {
                let tag = if r.proxy { " (proxy)" } else { "" };
                let _ = writeln!(
                    out,
                    "{} {}{tag}",
                    if r.pass { "PASS" } else { "FAIL" },
                    r.name
                );
                if let Some(w) = &r.witness {
                    let _ = writeln!(out, "       witness: {w}");
                }
                for d in &r.details {
                    let _ = writeln!(out, "       {d}");
                }
            }
            out
        }
    };
    Ok(match rows.iter().find(|r| !r.pass) {
        None => Outcome::ok(stdout),
        Some(f) => Outcome {
            code: EXIT_CHECK_FAILED,
            stdout,
            stderr: format!(
                "condition {} failed: {}\n",
                f.name,
                f.witness.as_deref().unwrap_or("no witness")
            ),
        },
    })
}
