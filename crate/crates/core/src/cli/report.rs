//! Verification reports: configuration, evaluation and rendering.

use std::fmt::Write as _;
use std::str::FromStr;

use clap::ValueEnum;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cohom::cohomology;
use crate::conditions::{
    check_a1, check_a2, check_a3, default_very_ample, Branch, ConditionReport,
};
use crate::error::{Error, Result};
use crate::picard::{
    arithmetic_genus, canonical_class, euler_pairing, intersect, moduli_dimension, DivisorClass,
    SheafClass, Surface, SurfaceKind,
};
use crate::theta::{
    euler_char_lambda, higher_cohomology_vanishes, numerator, pushforward_decomposition, rank,
    recursion_check_g2, sequence_additivity_g1, verify_gtsec_cohomology, z_from_decomposition,
    z_series, ThetaContext,
};

/// Default cap on the series truncation; `RATSURF_MAX_TRUNC` overrides it.
pub const DEFAULT_MAX_TRUNC: usize = 200;

pub const MAX_TRUNC_ENV: &str = "RATSURF_MAX_TRUNC";

/// Arbitrary-precision integer that serializes as a JSON number.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Int(pub BigInt);

impl From<BigInt> for Int {
    fn from(v: BigInt) -> Self {
        Int(v)
    }
}

impl std::fmt::Display for Int {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

impl Serialize for Int {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let n =
            serde_json::Number::from_str(&self.0.to_string()).map_err(serde::ser::Error::custom)?;
        n.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Int {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let n = serde_json::Number::deserialize(deserializer)?;
        n.to_string()
            .parse::<BigInt>()
            .map(Int)
            .map_err(serde::de::Error::custom)
    }
}

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, ValueEnum, Serialize, Deserialize,
)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    Conditions,
    Zseries,
    Invariants,
    Gtsec,
    Dualizing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportConfig {
    pub surface: Surface,
    pub class: DivisorClass<BigInt>,
    pub r: u32,
    pub trunc: usize,
    pub checks: Vec<Check>,
    pub format: Format,
    /// Very ample class for (A1); the surface default when absent.
    pub very_ample: Option<DivisorClass<BigInt>>,
    pub max_trunc: usize,
}

impl ReportConfig {
    /// Parses the surface and class strings; everything else takes its default.
    pub fn new(surface: &str, class: &str) -> Result<Self> {
        let surface: Surface = surface.parse()?;
        let class = surface.parse_class(class)?;
        Ok(ReportConfig {
            surface,
            class,
            r: 1,
            trunc: 10,
            checks: Vec::new(),
            format: Format::Text,
            very_ample: None,
            max_trunc: DEFAULT_MAX_TRUNC,
        })
    }

    pub fn validate(&self) -> Result<()> {
        self.surface.check(&self.class)?;
        if self.r == 0 {
            return Err(Error::InvalidArgument("r must be positive".into()));
        }
        if self.trunc > self.max_trunc {
            return Err(Error::EnumerationCap(format!(
                "truncation {} exceeds the cap {} (set {MAX_TRUNC_ENV} to raise it)",
                self.trunc, self.max_trunc
            )));
        }
        Ok(())
    }
}

/// Reads the truncation cap from the environment.
pub fn max_trunc_from_env() -> Result<usize> {
    match std::env::var(MAX_TRUNC_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| {
            Error::Parse(format!(
                "{MAX_TRUNC_ENV}={v:?} is not a nonnegative integer"
            ))
        }),
        Err(_) => Ok(DEFAULT_MAX_TRUNC),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContextEcho {
    pub surface: String,
    pub class: String,
    pub r: u32,
    pub trunc: usize,
    pub self_intersection: Int,
    pub canonical_class: String,
    pub genus: Int,
    pub dim: Int,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesRow {
    pub n: u64,
    pub h0: Int,
    pub chi: Int,
    pub source: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub witness: Option<String>,
    pub details: Vec<String>,
    pub source: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub context: ContextEcho,
    pub branch: Branch,
    pub numerator: String,
    pub denominator: String,
    pub decomposition: String,
    pub series: Vec<SeriesRow>,
    pub checks: Vec<CheckResult>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn first_failure(&self) -> Option<&CheckResult> {
        self.checks.iter().find(|c| !c.pass)
    }
}

fn series_source(branch: Branch, r: u32) -> &'static str {
    match branch {
        Branch::GenusNonPositive => "M = |L| with Theta trivial",
        _ if r == 1 => "pi_* Theta = O",
        Branch::GenusOne => "genus-one splitting of pi_* Theta^r",
        Branch::GenusTwo => "genus-two splitting of pi_* Theta^r",
        Branch::PositiveGenusGeneral | Branch::Unsupported => "none",
    }
}

fn int(v: BigInt) -> Int {
    Int(v)
}

fn condition_check(
    s: &Surface,
    name: &str,
    result: Result<ConditionReport<BigInt>>,
) -> Result<CheckResult> {
    match result {
        Ok(rep) => Ok(CheckResult {
            name: format!("conditions.{name}"),
            pass: rep.passed,
            witness: rep.witness.map(|w| w.format(s)),
            details: rep.details,
            source: if rep.proxy {
                format!("numeric proxy for ({name})")
            } else {
                format!("({name})")
            },
        }),
        Err(e @ Error::EnumerationCap(_)) => Err(e),
        Err(e) => Ok(CheckResult {
            name: format!("conditions.{name}"),
            pass: false,
            witness: Some(e.to_string()),
            details: Vec::new(),
            source: format!("({name})"),
        }),
    }
}

/// Evaluates every requested check. Unsupported branches and caps surface as errors.
pub fn run_report(cfg: &ReportConfig) -> Result<Report> {
    cfg.validate()?;
    let s = &cfg.surface;
    let ctx = ThetaContext::new(s.clone(), cfg.class.clone())?;
    let gb = pushforward_decomposition(&ctx, cfg.r)?;
    let num = numerator::<BigInt>(ctx.branch, cfg.r)?;
    let closed = z_series(&ctx, cfg.r, cfg.trunc)?;
    let source = series_source(ctx.branch, cfg.r);
    let k = canonical_class::<BigInt>(s);

    let mut series = Vec::with_capacity(cfg.trunc + 1);
    for (n, h0) in closed.coeffs().iter().enumerate() {
        let chi = euler_char_lambda(&ctx, cfg.r, n as i64)?;
        series.push(SeriesRow {
            n: n as u64,
            h0: int(h0.clone()),
            chi: int(chi),
            source: source.to_string(),
        });
    }

    let mut notes = Vec::new();
    let mut checks = Vec::new();
    let mut requested = cfg.checks.clone();
    requested.sort();
    requested.dedup();

    for check in requested {
        match check {
            Check::Zseries => {
                let split = z_from_decomposition(&gb, &ctx.dim, cfg.trunc)?;
                let mismatch = (0..=cfg.trunc).find(|&n| split.coeffs()[n] != closed.coeffs()[n]);
                checks.push(CheckResult {
                    name: "zseries.closed_form_vs_splitting".into(),
                    pass: mismatch.is_none(),
                    witness: mismatch.map(|n| {
                        format!(
                            "n = {n}: closed form {} vs splitting {}",
                            closed.coeffs()[n],
                            split.coeffs()[n]
                        )
                    }),
                    details: vec![format!("{} coefficients compared", cfg.trunc + 1)],
                    source: format!("h0(M, Theta^r(n)) = h0(|L|, pi_* Theta^r (n)); {source}"),
                });
            }
            Check::Invariants => {
                invariant_checks(&ctx, cfg, &gb, &series, &mut checks, &mut notes)?
            }
            Check::Conditions => {
                let h = match &cfg.very_ample {
                    Some(h) => Ok(h.clone()),
                    None => default_very_ample(s),
                };
                let a1 = h.and_then(|h| check_a1(s, &cfg.class, &h));
                checks.push(condition_check(s, "A1", a1)?);
                checks.push(condition_check(s, "A2", check_a2(s, &cfg.class))?);
                checks.push(condition_check(s, "A3", check_a3(s, &cfg.class))?);
            }
            Check::Gtsec => checks.push(gtsec_check(&ctx, cfg.r)?),
            Check::Dualizing => {
                let twist = intersect(s, &cfg.class, &k)?;
                let self_int = intersect(s, &cfg.class, &cfg.class)?;
                let adjunction = BigInt::from(2) * ctx.genus.clone() - BigInt::from(2) - self_int;
                checks.push(CheckResult {
                    name: "dualizing.twist".into(),
                    pass: twist == adjunction,
                    witness: (twist != adjunction)
                        .then(|| format!("L.K = {twist} but 2g - 2 - L.L = {adjunction}")),
                    details: vec![
                        format!("relative dualizing sheaf = pi^* O(1)^({twist})"),
                        "its restriction to every fiber of pi is trivial".into(),
                    ],
                    source: "dualizing sheaf of the support map".into(),
                });
            }
        }
    }

    Ok(Report {
        context: ContextEcho {
            surface: s.to_string(),
            class: s.format_class(&cfg.class),
            r: cfg.r,
            trunc: cfg.trunc,
            self_intersection: int(intersect(s, &cfg.class, &cfg.class)?),
            canonical_class: s.format_class(&k),
            genus: int(ctx.genus.clone()),
            dim: int(ctx.dim.clone()),
        },
        branch: ctx.branch,
        numerator: num.to_string(),
        denominator: format!("(1 - t)^{}", ctx.dim.clone() + BigInt::one()),
        decomposition: gb.to_string(),
        series,
        checks,
        notes,
    })
}

fn invariant_checks(
    ctx: &ThetaContext<BigInt>,
    cfg: &ReportConfig,
    gb: &crate::theta::GradedBundle,
    series: &[SeriesRow],
    checks: &mut Vec<CheckResult>,
    notes: &mut Vec<String>,
) -> Result<()> {
    let s = &cfg.surface;
    let r = cfg.r;

    let (expected, why) = match ctx.branch {
        Branch::GenusOne | Branch::GenusTwo => {
            let g = ctx.genus.to_u32().unwrap_or(0);
            (u64::from(r).pow(g), format!("{r}^{g}"))
        }
        _ => (1, "1".to_string()),
    };
    let got = rank(gb);
    checks.push(CheckResult {
        name: "invariants.rank".into(),
        pass: got == expected,
        witness: (got != expected).then(|| format!("rank {got} != {why}")),
        details: vec![format!("rank {got} = {why}")],
        source: "pi_* Theta^r has rank r^g".into(),
    });

    let bad = series
        .iter()
        .find(|row| row.h0 != row.chi || !higher_cohomology_vanishes(gb, &ctx.dim, row.n as i64));
    checks.push(CheckResult {
        name: "invariants.no_higher_cohomology".into(),
        pass: bad.is_none(),
        witness: bad.map(|row| format!("n = {}: h0 = {}, chi = {}", row.n, row.h0, row.chi)),
        details: vec![format!("chi = h0 for n = 0..={}", cfg.trunc)],
        source: "R^i pi_* Theta^r = 0 and pi_* Theta^r(n) has no higher cohomology".into(),
    });

    let u = SheafClass::supported_on(cfg.class.clone());
    let mut pairing_fail = None;
    for n in 0..=cfg.trunc {
        let c = SheafClass::trivial_minus_points(s, BigInt::from(r), BigInt::from(n));
        let p = euler_pairing(s, &u, &c)?;
        if !p.is_zero() {
            pairing_fail = Some(format!("chi(u (x) c^{r}_{n}) = {p}"));
            break;
        }
    }
    checks.push(CheckResult {
        name: "invariants.orthogonality".into(),
        pass: pairing_fail.is_none(),
        witness: pairing_fail,
        details: vec![format!(
            "u = (0, L, 0) is orthogonal to c^{r}_n for n = 0..={}",
            cfg.trunc
        )],
        source: "u orthogonal to c^r_n".into(),
    });

    // L.L + 1 = l + g_L needs h1(L) = h2(L) = 0.
    match cohomology(s, &cfg.class) {
        Ok(table) if table.h1.is_zero() && table.h2.is_zero() => {
            let lhs = moduli_dimension(s, &cfg.class)?;
            let rhs = ctx.dim.clone() + ctx.genus.clone();
            checks.push(CheckResult {
                name: "invariants.moduli_dimension".into(),
                pass: lhs == rhs,
                witness: (lhs != rhs).then(|| format!("L.L + 1 = {lhs} but l + g = {rhs}")),
                details: vec![format!("L.L + 1 = {lhs} = l + g_L")],
                source: "dimension of the stable locus".into(),
            });
        }
        Ok(table) => notes.push(format!(
            "moduli dimension identity skipped: h1(L) = {}, h2(L) = {}",
            table.h1, table.h2
        )),
        Err(_) => notes.push(format!("moduli dimension identity skipped: no h1 on {s}")),
    }

    let recursion = match ctx.branch {
        Branch::GenusTwo if r >= 3 => Some((
            recursion_check_g2(r - 1)?,
            format!(
                "pi_* Theta^{r} = pi_* Theta^{} + O(-{r})^{} + O(-{})^{}",
                r - 1,
                r + 1,
                r + 1,
                r - 2
            ),
        )),
        Branch::GenusOne if r >= 2 => Some((
            sequence_additivity_g1(r - 1)?,
            format!("pi_* Theta^{r} = pi_* Theta^{} + O(-{r})", r - 1),
        )),
        _ => None,
    };
    if let Some((pass, detail)) = recursion {
        checks.push(CheckResult {
            name: "invariants.recursion".into(),
            pass,
            witness: (!pass).then(|| detail.clone()),
            details: vec![detail],
            source: "pushforward of the theta divisor sequence".into(),
        });
    }
    Ok(())
}

fn gtsec_check(ctx: &ThetaContext<BigInt>, r: u32) -> Result<CheckResult> {
    let e = match ctx.surface.kind() {
        SurfaceKind::Hirzebruch(e) if e <= 1 => e,
        _ => {
            return Ok(CheckResult {
                name: "gtsec.cohomology".into(),
                pass: false,
                witness: Some(format!("needs F_0 or F_1, got {}", ctx.surface)),
                details: Vec::new(),
                source: "cohomology of r(L+K) for L = 2G + (e+3)F".into(),
            })
        }
    };
    let mut details = Vec::new();
    let mut witness = None;
    for rr in 2..=r.max(2) {
        let c = verify_gtsec_cohomology::<BigInt>(e, rr)?;
        details.push(format!(
            "r = {rr}: h0(r(L+K)) = {}, h1(r(L+K)-L) = {}",
            c.h0_pos, c.h1_neg
        ));
        if !c.ok && witness.is_none() {
            witness = Some(format!("r = {rr}"));
        }
    }
    Ok(CheckResult {
        name: "gtsec.cohomology".into(),
        pass: witness.is_none(),
        witness,
        details,
        source: "cohomology of r(L+K) for L = 2G + (e+3)F".into(),
    })
}

/// Renders a report. Output depends only on the report.
pub fn render(report: &Report, format: Format) -> Result<String> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report)
                .map_err(|e| Error::InvalidArgument(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| Error::InvalidArgument(e.to_string());
            w.write_record(["n", "h0", "chi"]).map_err(io)?;
            for row in &report.series {
                w.write_record([row.n.to_string(), row.h0.to_string(), row.chi.to_string()])
                    .map_err(io)?;
            }
            let bytes = w
                .into_inner()
                .map_err(|e| Error::InvalidArgument(e.to_string()))?;
            Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
        }
        Format::Text => Ok(render_text(report)),
    }
}

fn render_text(report: &Report) -> String {
    let c = &report.context;
    let mut out = String::new();
    let _ = writeln!(out, "surface  {}", c.surface);
    let _ = writeln!(out, "class    L = {}", c.class);
    let _ = writeln!(
        out,
        "         L.L = {}, K = {}, g_L = {}, dim |L| = {}",
        c.self_intersection, c.canonical_class, c.genus, c.dim
    );
    let _ = writeln!(out, "branch   {}", report.branch);
    let _ = writeln!(out, "r        {}", c.r);
    let _ = writeln!(out);
    let _ = writeln!(out, "pi_* Theta^{} = {}", c.r, report.decomposition);
    let _ = writeln!(
        out,
        "Z^{}(t) = ({}) / {}",
        c.r, report.numerator, report.denominator
    );
    if !report.series.is_empty() {
        let _ = writeln!(out);
        let w = report
            .series
            .iter()
            .map(|r| r.h0.to_string().len().max(r.chi.to_string().len()))
            .max()
            .unwrap_or(0)
            .max(3);
        let _ = writeln!(out, "{:>4}  {:>w$}  {:>w$}  source", "n", "h0", "chi");
        for row in &report.series {
            let _ = writeln!(
                out,
                "{:>4}  {:>w$}  {:>w$}  {}",
                row.n,
                row.h0.to_string(),
                row.chi.to_string(),
                row.source
            );
        }
    }
    if !report.checks.is_empty() {
        let _ = writeln!(out);
        for check in &report.checks {
            let _ = writeln!(
                out,
                "{} {}",
                if check.pass { "PASS" } else { "FAIL" },
                check.name
            );
            if let Some(w) = &check.witness {
                let _ = writeln!(out, "       witness: {w}");
            }
            for d in &check.details {
                let _ = writeln!(out, "       {d}");
            }
            let _ = writeln!(out, "       [{}]", check.source);
        }
    }
    if !report.notes.is_empty() {
        let _ = writeln!(out);
        for n in &report.notes {
            let _ = writeln!(out, "note: {n}");
        }
    }
    out
}

/// `-1` for non-effective classes in summaries.
pub(crate) fn signed_or_dash(v: &BigInt) -> String {
    if v.is_negative() {
        "-".into()
    } else {
        v.to_string()
    }
}

pub(crate) fn genus_of(s: &Surface, l: &DivisorClass<BigInt>) -> Result<BigInt> {
    arithmetic_genus(s, l)
}
