//! Command-line driver. [`run`] parses an argument vector, executes one
//! command and returns its output and exit code without touching the
//! process, so tests can drive it directly.

use std::fmt::Write as _;
use std::ops::RangeInclusive;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::json;

use pretzel_core::closedform::{check_identity, two_head, Identity};
use pretzel_core::exec::Strategy;
use pretzel_core::laurent::{canonicalize_on, Q_STEP};
use pretzel_core::stability::{approx_eq_series, HeadPipeline};
use pretzel_core::statesum::{colored_jones, state_sum, SumOptions};
use pretzel_core::tloracle::{bracket_eval, DEFAULT_BUDGET};
use pretzel_core::{Error, PretzelSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;
pub const EXIT_UNSTABLE: i32 = 4;
pub const EXIT_RESOURCE: i32 = 5;

/// One representative per class of the 2-head theorem.
pub const ALL_CLASSES: [[u32; 3]; 11] = [
    [3, 3, 3],
    [4, 3, 3],
    [3, 3, 2],
    [3, 2, 2],
    [2, 2, 2],
    [3, 3, 1],
    [3, 2, 1],
    [2, 2, 1],
    [3, 1, 1],
    [2, 1, 1],
    [1, 1, 1],
];

#[derive(Parser, Debug)]
#[command(name = "pretzel", version, about = "Colored Jones heads of negative 3-pretzel knots")]
pub struct Cli {
    /// Worker threads for the state sum.
    #[arg(long, global = true, env = "PRETZEL_JOBS", value_parser = clap::value_parser!(u32).range(1..))]
    pub jobs: Option<u32>,

    /// Run the state sum without data parallelism.
    #[arg(long, global = true)]
    pub sequential: bool,

    #[arg(long, global = true, value_enum, default_value_t = Format::Pretty)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Colored Jones polynomial in canonical form.
    Compute(ComputeArgs),
    /// Rows and stabilized head of a given order.
    Heads(HeadsArgs),
    /// Check the 2-head formula or the truncated identities.
    Verify(VerifyArgs),
    /// Compare the state sum with the cabled-bracket evaluation.
    Oracle(OracleArgs),
}

#[derive(Args, Debug)]
pub struct ComputeArgs {
    #[arg(long)]
    pub pretzel: PretzelSpec,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub color: u32,
    /// Report J instead of J' = J·(-1)^N{1}/{N+1}.
    #[arg(long)]
    pub unnormalized: bool,
    /// Pad or cut the canonical series to this many coefficients.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub depth: Option<u64>,
}

#[derive(Args, Debug)]
pub struct HeadsArgs {
    #[arg(long)]
    pub pretzel: PretzelSpec,
    #[arg(long, default_value_t = 0)]
    pub order: usize,
    #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u64).range(1..))]
    pub depth: u64,
    /// Color range `a..b`, inclusive.
    #[arg(long)]
    pub colors: Option<ColorRange>,
    /// Print rows before left-justification instead.
    #[arg(long)]
    pub residual: bool,
    /// Columns per row; defaults to the extraction width.
    #[arg(long)]
    pub width: Option<usize>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Compare extracted 2-heads with the closed formula.
    #[arg(long, group = "suite")]
    pub two_head: bool,
    /// Run the truncated factorial and summand identities.
    #[arg(long, visible_alias = "lemmas", group = "suite")]
    pub identities: bool,
    #[arg(long)]
    pub pretzel: Vec<PretzelSpec>,
    #[arg(long)]
    pub all_classes: bool,
    #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..))]
    pub depth: u64,
    #[arg(long)]
    pub colors: Option<ColorRange>,
    /// Restrict the identity suite to these names.
    #[arg(long)]
    pub identity: Vec<Identity>,
    #[arg(long, default_value_t = 10)]
    pub max_n: u32,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    #[arg(long)]
    pub pretzel: PretzelSpec,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub color: u32,
    /// Cap on cup diagrams in the sweep; required above color 3.
    #[arg(long)]
    pub budget: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColorRange(pub RangeInclusive<u32>);

impl FromStr for ColorRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (a, b) = s
            .split_once("..")
            .ok_or_else(|| format!("expected a..b, got {s:?}"))?;
        let b = b.strip_prefix('=').unwrap_or(b);
        let a: u32 = a.trim().parse().map_err(|e| format!("{e}"))?;
        let b: u32 = b.trim().parse().map_err(|e| format!("{e}"))?;
        if a < 1 || b < a {
            return Err(format!("empty or invalid color range {s:?}"));
        }
        Ok(Self(a..=b))
    }
}

/// Result of one invocation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn fail(code: i32, stdout: String, stderr: String) -> Self {
        Self { code, stdout, stderr }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NotStabilized { .. } => EXIT_UNSTABLE,
        Error::ResourceLimit { .. } => EXIT_RESOURCE,
        Error::InvalidSpec(_) | Error::InvalidArgument(_) | Error::IndexOutOfRange(_) => EXIT_USAGE,
        _ => EXIT_INTERNAL,
    }
}

fn from_error(e: Error) -> Outcome {
    Outcome::fail(exit_code(&e), String::new(), format!("error: {e}\n"))
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome::ok(text)
            } else {
                Outcome::fail(code, String::new(), text)
            };
        }
    };
    let strategy = if cli.sequential {
        Strategy::Sequential
    } else {
        Strategy::Parallel
    };
    let body = || match &cli.command {
        Command::Compute(a) => compute(a, cli.format, strategy),
        Command::Heads(a) => heads(a, cli.format, strategy),
        Command::Verify(a) => verify(a, cli.format, strategy),
        Command::Oracle(a) => oracle(a, cli.format),
    };
    match cli.jobs {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n as usize).build() {
            Ok(pool) => pool.install(body),
            Err(e) => Outcome::fail(EXIT_INTERNAL, String::new(), format!("error: {e}\n")),
        },
        None => body(),
    }
}

fn cells(v: &[BigInt]) -> Vec<String> {
    v.iter().map(|c| c.to_string()).collect()
}

fn padded(v: &[BigInt], depth: Option<u64>) -> Vec<BigInt> {
    match depth {
        None => v.to_vec(),
        Some(d) => (0..d as usize)
            .map(|i| v.get(i).cloned().unwrap_or_default())
            .collect(),
    }
}

fn compute(a: &ComputeArgs, format: Format, strategy: Strategy) -> Outcome {
    let opts = SumOptions {
        normalized: !a.unnormalized,
        strategy,
    };
    let p = match state_sum(a.color, &a.pretzel, opts) {
        Ok(p) => p,
        Err(e) => return from_error(e),
    };
    let c = match canonicalize_on(&p, Q_STEP) {
        Ok(c) => c,
        Err(e) => return from_error(e),
    };
    let coeffs = padded(&c.coefficients, a.depth);
    let name = if a.unnormalized { "J" } else { "J'" };
    let out = match format {
        Format::Json => {
            let v = json!({
                "spec": a.pretzel.to_string(),
                "color": a.color,
                "normalized": !a.unnormalized,
                "coefficients": cells(&coeffs),
                "shift": c.shift,
                "sign": c.sign,
                "step": c.step,
                "polynomial": p,
            });
            format!("{v}\n")
        }
        Format::Csv => format!("N={},{}\n", a.color, cells(&coeffs).join(",")),
        Format::Pretty => format!(
            "{name}_{}({}): {}\n  shift {} sign {} step {}\n",
            a.color,
            a.pretzel,
            cells(&coeffs).join(" "),
            c.shift,
            c.sign,
            c.step
        ),
    };
    Outcome::ok(out)
}

fn heads(a: &HeadsArgs, format: Format, strategy: Strategy) -> Outcome {
    if a.order > 2 {
        return from_error(Error::InvalidArgument(format!("order {} exceeds 2", a.order)));
    }
    let depth = a.depth as usize;
    let colors = a
        .colors
        .clone()
        .map(|c| c.0)
        .unwrap_or(2..=depth as u32 + 3);
    let mut p = HeadPipeline::new(a.pretzel).with_strategy(strategy);
    let report = match p.extract(a.order, colors.clone(), depth) {
        Ok(r) => r,
        Err(e) => return from_error(e),
    };
    let width = a.width.unwrap_or(depth.max(*colors.end() as usize + 2));
    let mut rows = Vec::new();
    for c in colors.clone() {
        let r = if a.residual {
            p.residual(a.order, c, width)
        } else {
            p.row(a.order, c, width).map(|r| r.0)
        };
        match r {
            Ok(r) => rows.push(r),
            Err(e) => return from_error(e),
        }
    }
    // residual rows sit under the head that was subtracted from them
    let (label, header) = if a.residual && a.order > 0 {
        match p.head(a.order - 1, width) {
            Ok(h) => (a.order - 1, h),
            Err(e) => return from_error(e),
        }
    } else {
        (a.order, report.coefficients.clone())
    };
    let out = match format {
        Format::Json => {
            let mut v = report.to_json();
            v["rows"] = json!(rows.iter().map(|r| cells(r)).collect::<Vec<_>>());
            v["residual"] = json!(a.residual);
            format!("{v}\n")
        }
        Format::Csv => {
            let mut r = report.clone();
            r.order = label;
            r.coefficients = header;
            r.rows = rows;
            r.to_csv(width)
        }
        Format::Pretty => {
            let mut s = String::new();
            let _ = writeln!(s, "H{label} ({}): {}", a.pretzel, cells(&header).join(" "));
            for (i, c) in colors.clone().enumerate() {
                let _ = writeln!(
                    s,
                    "  N={c:<3} shift {:<3} total {:<3} | {}",
                    report.shifts[i],
                    report.total_shifts[i],
                    cells(&rows[i]).join(" ")
                );
            }
            let _ = writeln!(s, "  agreements {:?}", report.agreements);
            s
        }
    };
    Outcome::ok(out)
}

/// Verdict for one class of the 2-head theorem.
#[derive(Clone, Debug)]
pub struct TwoHeadCheck {
    pub spec: PretzelSpec,
    pub extracted: Vec<BigInt>,
    pub predicted: Vec<BigInt>,
    pub agreements: Vec<usize>,
    pub holds: bool,
}

/// Extracts the 2-head over `colors` and compares it with the formula.
pub fn check_two_head(
    spec: PretzelSpec,
    depth: usize,
    colors: RangeInclusive<u32>,
    strategy: Strategy,
) -> Result<TwoHeadCheck, Error> {
    let report = HeadPipeline::new(spec)
        .with_strategy(strategy)
        .extract(2, colors, depth)?;
    let predicted = two_head(&spec, depth).into_coeffs();
    let holds = approx_eq_series(&report.coefficients, &predicted, depth);
    Ok(TwoHeadCheck {
        spec,
        extracted: report.coefficients,
        predicted,
        agreements: report.agreements,
        holds,
    })
}

fn verify(a: &VerifyArgs, format: Format, strategy: Strategy) -> Outcome {
    if a.two_head {
        verify_two_head(a, format, strategy)
    } else if a.identities {
        verify_identities(a, format)
    } else {
        Outcome::fail(
            EXIT_USAGE,
            String::new(),
            "error: choose --two-head or --identities\n".into(),
        )
    }
}

fn verify_two_head(a: &VerifyArgs, format: Format, strategy: Strategy) -> Outcome {
    let mut specs = a.pretzel.clone();
    if a.all_classes {
        for [x, y, z] in ALL_CLASSES {
            specs.push(PretzelSpec::new(x, y, z).expect("valid class"));
        }
    }
    if specs.is_empty() {
        return Outcome::fail(
            EXIT_USAGE,
            String::new(),
            "error: give --pretzel or --all-classes\n".into(),
        );
    }
    let depth = a.depth as usize;
    let colors = a.colors.clone().map(|c| c.0).unwrap_or(3..=depth as u32 + 3);
    let mut out = String::new();
    let mut records = Vec::new();
    let mut code = EXIT_OK;
    for spec in specs {
        match check_two_head(spec, depth, colors.clone(), strategy) {
            Ok(c) => {
                if !c.holds {
                    code = code.max(EXIT_MISMATCH);
                }
                let verdict = if c.holds { "PASS" } else { "FAIL" };
                match format {
                    Format::Json => records.push(json!({
                        "spec": spec.to_string(),
                        "pass": c.holds,
                        "extracted": cells(&c.extracted),
                        "predicted": cells(&c.predicted),
                        "agreements": c.agreements,
                    })),
                    Format::Csv => {
                        let _ = writeln!(out, "{spec},{verdict},{}", cells(&c.extracted).join(" "));
                    }
                    Format::Pretty => {
                        let _ = writeln!(out, "{verdict} two-head ({spec}) depth {depth}: {}", cells(&c.extracted).join(" "));
                        if !c.holds {
                            let _ = writeln!(out, "  predicted: {}", cells(&c.predicted).join(" "));
                        }
                    }
                }
            }
            Err(e) => {
                code = code.max(exit_code(&e));
                match format {
                    Format::Json => records.push(json!({"spec": spec.to_string(), "pass": false, "error": e.to_string()})),
                    _ => {
                        let _ = writeln!(out, "FAIL two-head ({spec}): {e}");
                    }
                }
            }
        }
    }
    if format == Format::Json {
        out = format!("{}\n", json!(records));
    }
    Outcome::fail(code, out, String::new())
}

/// First `N` each identity is checked from by default.
pub fn identity_start(id: Identity) -> u32 {
    match id {
        Identity::JonesTop | Identity::NormalizedTop => 2,
        Identity::SummandDropOne
        | Identity::SummandDropOneFinite
        | Identity::SummandDropTwo
        | Identity::SummandDropThree
        | Identity::SummandDropPair => 5,
        _ => 1,
    }
}

fn verify_identities(a: &VerifyArgs, format: Format) -> Outcome {
    let ids: Vec<Identity> = if a.identity.is_empty() {
        Identity::ALL.to_vec()
    } else {
        a.identity.clone()
    };
    let mut out = String::new();
    let mut records = Vec::new();
    let mut code = EXIT_OK;
    for id in ids {
        let range = identity_start(id)..=a.max_n;
        let mut failures = Vec::new();
        for n in range.clone() {
            match check_identity(id, n) {
                Ok(c) if c.holds => {}
                Ok(_) => failures.push(n),
                Err(e) => return from_error(e),
            }
        }
        if !failures.is_empty() {
            code = EXIT_MISMATCH;
        }
        let verdict = if failures.is_empty() { "PASS" } else { "FAIL" };
        match format {
            Format::Json => records.push(json!({
                "identity": id.name(),
                "from": range.start(),
                "to": range.end(),
                "pass": failures.is_empty(),
                "failures": failures,
            })),
            Format::Csv => {
                let _ = writeln!(out, "{id},{},{},{verdict}", range.start(), range.end());
            }
            Format::Pretty => {
                let _ = write!(out, "{verdict} {id} N={}..{}", range.start(), range.end());
                if failures.is_empty() {
                    out.push('\n');
                } else {
                    let _ = writeln!(out, " fails at {failures:?}");
                }
            }
        }
    }
    if format == Format::Json {
        out = format!("{}\n", json!(records));
    }
    Outcome::fail(code, out, String::new())
}

fn oracle(a: &OracleArgs, format: Format) -> Outcome {
    if a.color > 3 && a.budget.is_none() {
        return Outcome::fail(
            EXIT_USAGE,
            String::new(),
            "error: colors above 3 need an explicit --budget\n".into(),
        );
    }
    let budget = a.budget.unwrap_or(DEFAULT_BUDGET);
    let tl = match bracket_eval(&a.pretzel, a.color, budget) {
        Ok(p) => p,
        Err(e) => return from_error(e),
    };
    let ss = match colored_jones(a.color, &a.pretzel) {
        Ok(p) => p,
        Err(e) => return from_error(e),
    };
    let (ct, cs) = match (canonicalize_on(&tl, Q_STEP), canonicalize_on(&ss, Q_STEP)) {
        (Ok(x), Ok(y)) => (x, y),
        (Err(e), _) | (_, Err(e)) => return from_error(e),
    };
    let matched = ct.coefficients == cs.coefficients;
    let out = match format {
        Format::Json => format!(
            "{}\n",
            json!({
                "spec": a.pretzel.to_string(),
                "color": a.color,
                "match": matched,
                "oracle": cells(&ct.coefficients),
                "state_sum": cells(&cs.coefficients),
            })
        ),
        Format::Csv => format!(
            "{},{},{}\n",
            a.pretzel,
            a.color,
            if matched { "MATCH" } else { "MISMATCH" }
        ),
        Format::Pretty if matched => format!(
            "MATCH ({}) color {}: {}\n",
            a.pretzel,
            a.color,
            cells(&cs.coefficients).join(" ")
        ),
        Format::Pretty => format!(
            "MISMATCH ({}) color {}\n  oracle:    {}\n  state sum: {}\n",
            a.pretzel,
            a.color,
            cells(&ct.coefficients).join(" "),
            cells(&cs.coefficients).join(" ")
        ),
    };
    Outcome::fail(if matched { EXIT_OK } else { EXIT_MISMATCH }, out, String::new())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn color_ranges() {
        assert_eq!("2..9".parse::<ColorRange>().unwrap(), ColorRange(2..=9));
        assert_eq!("3..=5".parse::<ColorRange>().unwrap(), ColorRange(3..=5));
        assert!("5..2".parse::<ColorRange>().is_err());
        assert!("7".parse::<ColorRange>().is_err());
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run(["pretzel", "compute", "--color", "2"]).code, EXIT_USAGE);
        assert_eq!(run(["pretzel", "compute", "--pretzel", "0,1,1", "--color", "2"]).code, EXIT_USAGE);
        assert_eq!(run(["pretzel", "verify"]).code, EXIT_USAGE);
        assert_eq!(run(["pretzel", "heads", "--pretzel", "3,3,3", "--order", "3"]).code, EXIT_USAGE);
    }

    #[test]
    fn help_exits_zero() {
        let o = run(["pretzel", "--help"]);
        assert_eq!(o.code, EXIT_OK);
        assert!(o.stdout.contains("compute"));
    }

    #[test]
    fn trivial_color() {
        let o = run(["pretzel", "compute", "--pretzel", "1,1,1", "--color", "1", "--format", "csv"]);
        assert_eq!(o.stdout, "N=1,1\n");
    }

    #[test]
    fn oracle_needs_budget_above_three() {
        let o = run(["pretzel", "oracle", "--pretzel", "1,1,1", "--color", "4"]);
        assert_eq!(o.code, EXIT_USAGE);
        let o = run(["pretzel", "oracle", "--pretzel", "1,1,1", "--color", "4", "--budget", "10"]);
        assert_eq!(o.code, EXIT_RESOURCE);
    }
}
