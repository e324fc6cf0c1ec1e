//! Command-line front end.
//!
//! Every subcommand emits one or more result records as JSON lines (or CSV).
//! Exit status is 0 on success, 1 when a check fails and 2 on a usage error.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{value_parser, Args, CommandFactory, Parser, Subcommand, ValueEnum};

use crate::arith::{
    character_mod, CoefficientFunction, PrimeTable, PrimeValueTable, DEFAULT_SIEVE_LIMIT,
};
use crate::beurling::{
    beur_mangoldt_identity_residual, prime_sum_divergence_probe, zeta_system_eval, BeurlingSystem,
    QuadraticFieldSpec,
};
use crate::dirichlet::{
    eval_dirichlet_truncated, exp_identity_residual, first_coefficient_limit_probe,
    l_function_with, log_coefficients, square_pair_coefficients, zeta_euler_maclaurin, zeta_real,
    ComplexPoint, PairSign, EM_DEFAULT_CORRECTIONS, EM_DEFAULT_TERMS, EM_MAX_CORRECTIONS,
};
use crate::error::{Error, Result};
use crate::monotone::{
    absolutely_monotone_probe, completely_monotone_probe, radius_equality_check, MonotoneReport,
    PowerSeries, RadiusEstimate,
};
use crate::report::{to_csv, to_json_lines, Record};
use crate::verify::{radius_corpus, verify_all, DEFAULT_MAX_N, MAX_MAX_N, MIN_MAX_N};
use crate::zerofree::{
    liouville_converse_check, min_re_w_plus_w2, per_prime_bound_check, prime_sum_bound_check,
    toy_factorization_check, Region, DISK_MINIMUM,
};
use crate::zerofree::{pingpong_derive, pingpong_disjoint_resolve, PingPongState, Resolution};

pub const CONFIG_ENV: &str = "DIRICHLET_FORGE_CONFIG";
pub const MAX_SIEVE_LIMIT: u64 = 100_000_000;
pub const MAX_THREADS: usize = 256;

/// Global options that take a value, needed to find the subcommand before parsing.
const GLOBAL_VALUE_FLAGS: &[&str] = &[
    "--config",
    "--format",
    "--output",
    "--threads",
    "--sieve-limit",
];

#[derive(Debug, Parser)]
#[command(
    name = "dirichlet-forge",
    version,
    about = "Dirichlet series and multiplicative number theory toolkit"
)]
struct Cli {
    /// File of `key = value` defaults; falls back to $DIRICHLET_FORGE_CONFIG.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write results here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,

    #[arg(long, global = true, default_value_t = 1, value_parser = parse_threads)]
    threads: usize,

    #[arg(long, global = true, default_value_t = DEFAULT_SIEVE_LIMIT,
          value_parser = value_parser!(u64).range(2..=MAX_SIEVE_LIMIT))]
    sieve_limit: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Riemann zeta by Euler–Maclaurin summation.
    Zeta(ZetaArgs),
    /// Dirichlet L-function of a character.
    Lfunction(LfunctionArgs),
    /// Truncated Dirichlet series of a completely multiplicative function.
    Dirichlet(SeriesArgs),
    /// Series against the exponential of its logarithmic series.
    ExpIdentity(ExpIdentityArgs),
    /// Finite-difference monotonicity probe.
    Monotone(MonotoneArgs),
    /// Radius of convergence of f and exp f.
    Radius(RadiusArgs),
    /// Generalized prime systems.
    Beurling(BeurlingArgs),
    /// Positivity inequalities and factorization checks.
    Zerofree(ZerofreeArgs),
    /// Closure of the midpoint rule on two sets.
    Pingpong(PingpongArgs),
    /// Run every invariant suite.
    VerifyAll(VerifyArgs),
}

#[derive(Debug, Args)]
struct PointArgs {
    #[arg(long, default_value_t = 2.0, value_parser = parse_finite, allow_negative_numbers = true)]
    sigma: f64,
    #[arg(long, default_value_t = 0.0, value_parser = parse_finite, allow_negative_numbers = true)]
    t: f64,
}

#[derive(Debug, Args)]
struct ZetaArgs {
    #[command(flatten)]
    point: PointArgs,
    /// Terms summed directly before the Euler–Maclaurin correction.
    #[arg(long, default_value_t = EM_DEFAULT_TERMS, value_parser = value_parser!(u64).range(1..=10_000_000))]
    terms: u64,
    #[arg(long, default_value_t = EM_DEFAULT_CORRECTIONS, value_parser = parse_corrections)]
    corrections: usize,
}

#[derive(Debug, Args)]
struct LfunctionArgs {
    /// Character as `q:index`; index 0 is principal.
    #[arg(long, default_value = "4:1", value_name = "Q:INDEX")]
    character: String,
    #[command(flatten)]
    point: PointArgs,
    #[arg(long, default_value_t = EM_DEFAULT_TERMS, value_parser = value_parser!(u64).range(1..=10_000_000))]
    terms: u64,
    #[arg(long, default_value_t = EM_DEFAULT_CORRECTIONS, value_parser = parse_corrections)]
    corrections: usize,
}

#[derive(Debug, Args)]
struct SourceArgs {
    /// unit | liouville | character:q:index | twist:t0 | custom:path
    #[arg(long, default_value = "unit")]
    coeff: String,
    /// classical | quadratic:d | custom:path
    #[arg(long, default_value = "classical")]
    system: String,
}

#[derive(Debug, Args)]
struct SeriesArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[command(flatten)]
    point: PointArgs,
    #[arg(long, default_value_t = 10_000, value_parser = value_parser!(u64).range(1..))]
    terms: u64,
}

#[derive(Debug, Args)]
struct ExpIdentityArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long, default_value_t = 3.0, value_parser = parse_finite, allow_negative_numbers = true)]
    sigma: f64,
    #[arg(long, default_value_t = 100_000, value_parser = value_parser!(u64).range(1..))]
    terms: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ProbeFunction {
    /// log zeta(x)
    LogZeta,
    /// exp(-x)
    ExpNeg,
    /// x
    Identity,
    /// exp(x)
    Exp,
    /// sin(x)
    Sin,
    /// Truncated sum of c(n) beta(n)^-x from --coeff and --system.
    LogSeries,
    /// Truncated sum of 2(1 + Re a(n)) Lambda(n) beta(n)^-x / log beta(n).
    SquarePair,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ProbeMode {
    Complete,
    Absolute,
}

#[derive(Debug, Args)]
struct MonotoneArgs {
    #[arg(long, value_enum, default_value_t = ProbeFunction::LogZeta)]
    function: ProbeFunction,
    #[arg(long, value_enum, default_value_t = ProbeMode::Complete)]
    mode: ProbeMode,
    #[arg(long, default_value_t = 1.5, value_parser = parse_finite, allow_negative_numbers = true)]
    from: f64,
    #[arg(long, default_value_t = 5.0, value_parser = parse_finite, allow_negative_numbers = true)]
    to: f64,
    #[arg(long, default_value_t = 0.1, value_parser = parse_positive)]
    step: f64,
    #[arg(long, default_value_t = 6, value_parser = value_parser!(u64).range(0..=30))]
    kmax: u64,
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long, default_value_t = 10_000, value_parser = value_parser!(u64).range(1..))]
    terms: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CorpusSeries {
    Log,
    Dilog,
    LogHalf,
    Z,
    ZPlusHalfSquare,
}

#[derive(Debug, Args)]
struct RadiusArgs {
    /// CSV of `index,coefficient` rows; overrides --series.
    #[arg(long, value_name = "PATH")]
    input: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = CorpusSeries::Log)]
    series: CorpusSeries,
    #[arg(long, default_value_t = 100, value_parser = value_parser!(u64).range(31..=200))]
    order: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BeurlingCheck {
    /// Z(s) = sum beta(n)^-s.
    Zeta,
    /// Sum of Lambda over divisors against log beta(n), for n <= terms.
    Mangoldt,
    /// sum_p beta(p)^-sigma along --sigmas.
    Divergence,
    /// |F(sigma) - 1| beta0^sigma along --sigmas.
    Limit,
}

#[derive(Debug, Args)]
struct BeurlingArgs {
    #[arg(long, value_enum, default_value_t = BeurlingCheck::Zeta)]
    check: BeurlingCheck,
    #[command(flatten)]
    source: SourceArgs,
    #[command(flatten)]
    point: PointArgs,
    #[arg(long, value_delimiter = ',', value_parser = parse_finite, allow_negative_numbers = true,
          default_value = "1.5,1.2,1.05")]
    sigmas: Vec<f64>,
    #[arg(long, default_value_t = 1_000_000, value_parser = value_parser!(u64).range(1..))]
    terms: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ZerofreeCheck {
    /// Minimum of Re w + Re w^2.
    Inequality,
    /// The 7/8 chain for one prime value.
    PerPrime,
    /// The summed chain over a prime system.
    PrimeSum,
    /// zeta(s)^2 zeta(s + i t0) zeta(s - i t0) against its exponential form.
    Toy,
    /// zeta(s)^2 L(lambda, s)^2 and its exponential form against zeta(2s)^2.
    Liouville,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RegionArg {
    Disk,
    Segment,
    Circle,
}

#[derive(Debug, Args)]
struct ZerofreeArgs {
    #[arg(long, value_enum, default_value_t = ZerofreeCheck::Inequality)]
    check: ZerofreeCheck,
    #[arg(long, value_enum, default_value_t = RegionArg::Disk)]
    region: RegionArg,
    #[arg(long, default_value_t = 2001, value_parser = value_parser!(u64).range(2..=20_001))]
    grid: u64,
    #[arg(long, default_value_t = 14.0, value_parser = parse_finite, allow_negative_numbers = true)]
    t0: f64,
    #[arg(long, default_value_t = 1.5, value_parser = parse_finite, allow_negative_numbers = true)]
    sigma: f64,
    #[arg(long, default_value_t = 1_000_000, value_parser = value_parser!(u64).range(1..))]
    terms: u64,
    /// Prime value a_p as `re,im`.
    #[arg(
        long,
        default_value = "-0.25,0.9682458365518543",
        allow_hyphen_values = true
    )]
    value: String,
    #[arg(long, default_value_t = 2, value_parser = value_parser!(u64).range(2..))]
    prime: u64,
    #[command(flatten)]
    source: SourceArgs,
}

#[derive(Debug, Args)]
struct PingpongArgs {
    /// Seed facts `A:k` or `B:k`, meaning `k g` is in A or B.
    #[arg(long = "seed", value_name = "SET:K", allow_hyphen_values = true)]
    seeds: Vec<String>,
    /// Also require A and B to be disjoint.
    #[arg(long)]
    disjoint: bool,
    #[arg(long, default_value_t = 8, value_parser = value_parser!(i64).range(1..=1000))]
    half_width: i64,
    #[arg(long, default_value_t = 1.0, value_parser = parse_finite, allow_negative_numbers = true)]
    generator: f64,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = DEFAULT_MAX_N, value_parser = value_parser!(u64).range(MIN_MAX_N..=MAX_MAX_N))]
    max_n: u64,
}

fn parse_finite(s: &str) -> std::result::Result<f64, String> {
    let x: f64 = s
        .trim()
        .parse()
        .map_err(|_| format!("`{s}` is not a number"))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}

fn parse_positive(s: &str) -> std::result::Result<f64, String> {
    let x = parse_finite(s)?;
    if x > 0.0 {
        Ok(x)
    } else {
        Err(format!("`{s}` must be positive"))
    }
}

fn parse_threads(s: &str) -> std::result::Result<usize, String> {
    match s.trim().parse::<usize>() {
        Ok(n) if (1..=MAX_THREADS).contains(&n) => Ok(n),
        _ => Err(format!("threads must be an integer in 1..={MAX_THREADS}")),
    }
}

fn parse_corrections(s: &str) -> std::result::Result<usize, String> {
    match s.trim().parse::<usize>() {
        Ok(n) if (1..=EM_MAX_CORRECTIONS).contains(&n) => Ok(n),
        _ => Err(format!(
            "corrections must be an integer in 1..={EM_MAX_CORRECTIONS}"
        )),
    }
}

/// What a subcommand produced.
struct Outcome {
    records: Vec<Record>,
    passed: bool,
}

impl Outcome {
    fn ok(record: Record) -> Self {
        Outcome {
            records: vec![record],
            passed: true,
        }
    }

    fn check(record: Record, passed: bool) -> Self {
        Outcome {
            records: vec![record.field("passed", passed)],
            passed,
        }
    }
}

/// Entry point used by the binary.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let env_config = std::env::var_os(CONFIG_ENV).map(PathBuf::from);
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with_io(
        args,
        env_config.as_deref(),
        &mut stdout.lock(),
        &mut stderr.lock(),
    )
}

/// [`run`] with explicit streams and default config file.
pub fn run_with_io<I, T>(
    args: I,
    env_config: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let argv = match apply_config(argv, env_config) {
        Ok(a) => a,
        Err(message) => {
            let _ = writeln!(err, "error: {message}\n\n{}", Cli::command().render_usage());
            return 2;
        }
    };
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let mut text = e.render().to_string();
            if !text.contains("Usage:") {
                text = format!("{}\n{}\n", text.trim_end(), usage_for(&argv));
            }
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    2
                }
            };
        }
    };
    let outcome = match execute(&cli) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 2;
        }
    };
    let text = match cli.format {
        Format::Json => to_json_lines(&outcome.records),
        Format::Csv => to_csv(&outcome.records),
    };
    let written = match &cli.output {
        Some(path) => std::fs::write(path, &text),
        None => out.write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        let _ = writeln!(err, "error: cannot write output: {e}");
        return 2;
    }
    if outcome.passed {
        0
    } else {
        1
    }
}

/// Usage line of the first subcommand named in `argv`, else of the program.
fn usage_for(argv: &[OsString]) -> String {
    let mut cmd = Cli::command();
    cmd.build();
    let name = argv
        .iter()
        .skip(1)
        .filter_map(|a| a.to_str())
        .find(|a| cmd.find_subcommand(a).is_some())
        .map(str::to_string);
    let usage = match name.and_then(|n| cmd.find_subcommand_mut(&n).map(|c| c.render_usage())) {
        Some(u) => u,
        None => cmd.render_usage(),
    };
    usage.to_string()
}

/// Reads `key = value` lines; blank lines and `#` comments are skipped.
pub fn load_config(path: &Path) -> Result<Vec<(String, String)>> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> Result<Vec<(String, String)>> {
    let mut entries: Vec<(String, String)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let parse_err = |message: &str| Error::Parse {
            line: i + 1,
            message: message.to_string(),
        };
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| parse_err("expected `key = value`"))?;
        let key = key.trim().replace('_', "-");
        let value = value.trim();
        if key.is_empty() || key.contains(char::is_whitespace) {
            return Err(parse_err("malformed key"));
        }
        if value.is_empty() {
            return Err(parse_err("missing value"));
        }
        if entries.iter().any(|(k, _)| *k == key) {
            return Err(parse_err("duplicate key"));
        }
        entries.push((key, value.to_string()));
    }
    Ok(entries)
}

/// Long flag names accepted by a subcommand together with the global ones,
/// each flagged with whether it takes a value.
fn known_flags(subcommand: Option<&str>) -> Vec<(String, bool)> {
    let root = Cli::command();
    let mut flags: Vec<(String, bool)> = Vec::new();
    let mut collect = |cmd: &clap::Command| {
        for arg in cmd.get_arguments() {
            if let Some(long) = arg.get_long() {
                if long != "config" && long != "help" && long != "version" {
                    flags.push((long.to_string(), arg.get_action().takes_values()));
                }
            }
        }
    };
    collect(&root);
    for sub in root.get_subcommands() {
        if subcommand.is_none_or(|name| sub.get_name() == name) {
            collect(sub);
        }
    }
    flags
}

/// Inserts config-file defaults right after the subcommand name for every key
/// the command line does not set itself.
fn apply_config(
    argv: Vec<OsString>,
    env_config: Option<&Path>,
) -> std::result::Result<Vec<OsString>, String> {
    let strings: Vec<String> = argv
        .iter()
        .map(|a| a.to_string_lossy().into_owned())
        .collect();
    let mut explicit: Option<PathBuf> = None;
    let mut sub_index = None;
    let mut i = 1;
    while i < strings.len() {
        let token = &strings[i];
        if let Some(path) = token.strip_prefix("--config=") {
            explicit = Some(PathBuf::from(path));
        } else if token == "--config" {
            explicit = strings.get(i + 1).map(PathBuf::from);
            i += 1;
        } else if GLOBAL_VALUE_FLAGS.contains(&token.as_str()) {
            i += 1;
        } else if !token.starts_with('-') && sub_index.is_none() {
            sub_index = Some(i);
        }
        i += 1;
    }
    let path = match explicit.as_deref().or(env_config) {
        Some(p) => p.to_path_buf(),
        None => return Ok(argv),
    };
    let entries = load_config(&path).map_err(|e| format!("config {}: {e}", path.display()))?;
    let every_flag: BTreeSet<String> = known_flags(None)
        .into_iter()
        .map(|(name, _)| name)
        .collect();
    for (key, _) in &entries {
        if !every_flag.contains(key) {
            return Err(format!("config {}: unknown key `{key}`", path.display()));
        }
    }
    let Some(sub_index) = sub_index else {
        return Ok(argv);
    };
    let subcommand = strings[sub_index].as_str();
    let flags = known_flags(Some(subcommand));
    let mut injected: Vec<OsString> = Vec::new();
    for (key, value) in entries {
        let Some(&(_, takes_value)) = flags.iter().find(|(name, _)| *name == key) else {
            continue;
        };
        let long = format!("--{key}");
        let given = strings
            .iter()
            .any(|s| *s == long || s.starts_with(&format!("{long}=")));
        if given {
            continue;
        }
        if takes_value {
            injected.push(format!("{long}={value}").into());
        } else {
            match value.as_str() {
                "true" => injected.push(long.into()),
                "false" => {}
                other => {
                    return Err(format!(
                        "config key `{key}` expects true or false, got `{other}`"
                    ))
                }
            }
        }
    }
    let mut merged = argv;
    let tail = merged.split_off(sub_index + 1);
    merged.extend(injected);
    merged.extend(tail);
    Ok(merged)
}

fn prime_table(cli: &Cli, needed: u64) -> Result<Arc<PrimeTable>> {
    if needed > cli.sieve_limit {
        return Err(Error::OutOfRange {
            value: needed,
            limit: cli.sieve_limit,
        });
    }
    Ok(Arc::new(PrimeTable::new(cli.sieve_limit)?))
}

fn parse_character(text: &str) -> Result<(u64, usize)> {
    let bad = || Error::InvalidArgument(format!("character must be `q:index`, got `{text}`"));
    let (q, i) = text.split_once(':').ok_or_else(bad)?;
    Ok((
        q.trim().parse().map_err(|_| bad())?,
        i.trim().parse().map_err(|_| bad())?,
    ))
}

fn parse_coefficient(text: &str) -> Result<CoefficientFunction> {
    let (kind, rest) = text.split_once(':').unwrap_or((text, ""));
    match kind {
        "unit" if rest.is_empty() => Ok(CoefficientFunction::Unit),
        "liouville" if rest.is_empty() => Ok(CoefficientFunction::Liouville),
        "character" => {
            let (q, i) = parse_character(rest)?;
            CoefficientFunction::character(q, i)
        }
        "twist" => parse_finite(rest)
            .map(CoefficientFunction::VerticalTwist)
            .map_err(Error::InvalidArgument),
        "custom" if !rest.is_empty() => Ok(CoefficientFunction::custom(PrimeValueTable::load(rest)?)),
        _ => Err(Error::InvalidArgument(format!(
            "coefficient must be unit, liouville, character:q:index, twist:t0 or custom:path, got `{text}`"
        ))),
    }
}

fn parse_system(text: &str, table: Arc<PrimeTable>) -> Result<BeurlingSystem> {
    let (kind, rest) = text.split_once(':').unwrap_or((text, ""));
    match kind {
        "classical" if rest.is_empty() => Ok(BeurlingSystem::classical(table)),
        "quadratic" => {
            let d: i64 = rest
                .trim()
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad discriminant in `{text}`")))?;
            let spec = QuadraticFieldSpec::new(d, 2 * table.limit())?;
            BeurlingSystem::quadratic_field(spec, table)
        }
        "custom" if !rest.is_empty() => BeurlingSystem::load_custom(rest, table),
        _ => Err(Error::InvalidArgument(format!(
            "system must be classical, quadratic:d or custom:path, got `{text}`"
        ))),
    }
}

fn source(
    cli: &Cli,
    args: &SourceArgs,
    terms: u64,
) -> Result<(CoefficientFunction, BeurlingSystem)> {
    let table = prime_table(cli, terms)?;
    let a = parse_coefficient(&args.coeff)?;
    let system = parse_system(&args.system, table)?;
    if terms > system.coverage() {
        return Err(Error::OutOfRange {
            value: terms,
            limit: system.coverage(),
        });
    }
    Ok((a, system))
}

fn execute(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Zeta(args) => {
            let s = ComplexPoint::new(args.point.sigma, args.point.t)?;
            let v = zeta_euler_maclaurin(s, args.terms, args.corrections)?;
            Ok(Outcome::ok(
                Record::new("zeta")
                    .param("sigma", s.sigma)
                    .param("t", s.t)
                    .param("terms", args.terms)
                    .param("corrections", args.corrections)
                    .series(&v),
            ))
        }
        Command::Lfunction(args) => {
            let (q, index) = parse_character(&args.character)?;
            let chi = character_mod(q, index)?;
            let s = ComplexPoint::new(args.point.sigma, args.point.t)?;
            let v = l_function_with(&chi, s, args.terms, args.corrections)?;
            Ok(Outcome::ok(
                Record::new("lfunction")
                    .param("character", args.character.as_str())
                    .param("sigma", s.sigma)
                    .param("t", s.t)
                    .param("terms", args.terms)
                    .param("corrections", args.corrections)
                    .field("principal", chi.is_principal())
                    .field("real_character", chi.is_real())
                    .series(&v),
            ))
        }
        Command::Dirichlet(args) => {
            let (a, system) = source(cli, &args.source, args.terms)?;
            let s = ComplexPoint::new(args.point.sigma, args.point.t)?;
            let v = eval_dirichlet_truncated(&a, &system, s, args.terms)?;
            Ok(Outcome::ok(
                Record::new("dirichlet")
                    .param("coeff", args.source.coeff.as_str())
                    .param("system", args.source.system.as_str())
                    .param("sigma", s.sigma)
                    .param("t", s.t)
                    .param("terms", args.terms)
                    .series(&v),
            ))
        }
        Command::ExpIdentity(args) => {
            let (a, system) = source(cli, &args.source, args.terms)?;
            let residual = exp_identity_residual(&a, &system, args.sigma, args.terms)?;
            let direct =
                eval_dirichlet_truncated(&a, &system, ComplexPoint::real(args.sigma), args.terms)?;
            let log_side = log_coefficients(&a, &system, args.terms)?
                .eval(ComplexPoint::real(args.sigma).to_complex());
            let exponential = log_side.exp();
            Ok(Outcome::ok(
                Record::new("exp-identity")
                    .param("coeff", args.source.coeff.as_str())
                    .param("system", args.source.system.as_str())
                    .param("sigma", args.sigma)
                    .param("terms", args.terms)
                    .field("direct_re", direct.value.re)
                    .field("direct_im", direct.value.im)
                    .field("exp_re", exponential.re)
                    .field("exp_im", exponential.im)
                    .field("residual", residual)
                    .field("error_bound", direct.error_bound)
                    .field("rigorous", direct.rigorous),
            ))
        }
        Command::Monotone(args) => monotone(cli, args),
        Command::Radius(args) => {
            let (label, series) = match &args.input {
                Some(path) => (path.display().to_string(), PowerSeries::load_csv(path)?),
                None => {
                    let key = value_name(&args.series);
                    let series = radius_corpus(args.order as usize)?
                        .into_iter()
                        .find(|(name, _)| *name == key)
                        .map(|(_, s)| s)
                        .ok_or_else(|| Error::InvalidArgument(format!("unknown series `{key}`")))?;
                    (key, series)
                }
            };
            let report = radius_equality_check(&series)?;
            let radius = |r: RadiusEstimate| r.value().unwrap_or(f64::NAN);
            Ok(Outcome::check(
                Record::new("radius")
                    .param("series", label)
                    .param("order", series.order())
                    .field("radius_f", radius(report.radius_f))
                    .field("radius_exp_f", radius(report.radius_exp_f))
                    .field(
                        "beyond_window_f",
                        report.radius_f == RadiusEstimate::BeyondWindow,
                    )
                    .field(
                        "beyond_window_exp_f",
                        report.radius_exp_f == RadiusEstimate::BeyondWindow,
                    ),
                report.pass,
            ))
        }
        Command::Beurling(args) => beurling(cli, args),
        Command::Zerofree(args) => zerofree(cli, args),
        Command::Pingpong(args) => pingpong(args),
        Command::VerifyAll(args) => {
            let report = verify_all(args.max_n, cli.threads)?;
            Ok(Outcome {
                passed: report.passed(),
                records: report.records(),
            })
        }
    }
}

fn value_name<T: ValueEnum>(v: &T) -> String {
    v.to_possible_value()
        .map(|p| p.get_name().to_string())
        .unwrap_or_default()
}

fn monotone(cli: &Cli, args: &MonotoneArgs) -> Result<Outcome> {
    if !(args.to > args.from) {
        return Err(Error::InvalidArgument("--to must exceed --from".into()));
    }
    let k = args.kmax as usize;
    let probe = |f: &dyn Fn(f64) -> Result<f64>| -> Result<MonotoneReport> {
        match args.mode {
            ProbeMode::Complete => completely_monotone_probe(f, args.from, args.to, args.step, k),
            ProbeMode::Absolute => absolutely_monotone_probe(f, args.from, args.to, args.step, k),
        }
    };
    let report = match args.function {
        ProbeFunction::LogZeta => probe(&|x| Ok(zeta_real(x)?.ln()))?,
        ProbeFunction::ExpNeg => probe(&|x| Ok((-x).exp()))?,
        ProbeFunction::Identity => probe(&|x| Ok(x))?,
        ProbeFunction::Exp => probe(&|x| Ok(x.exp()))?,
        ProbeFunction::Sin => probe(&|x| Ok(x.sin()))?,
        ProbeFunction::LogSeries | ProbeFunction::SquarePair => {
            let (a, system) = source(cli, &args.source, args.terms)?;
            let stream = if args.function == ProbeFunction::LogSeries {
                log_coefficients(&a, &system, args.terms)?
            } else {
                square_pair_coefficients(&a, &system, PairSign::Plus, args.terms)?
            };
            if !stream.is_real() {
                return Err(Error::Domain("the probe needs real coefficients".into()));
            }
            if args.from <= stream.summation_bound() {
                return Err(Error::Window {
                    point: args.from,
                    bound: stream.summation_bound(),
                });
            }
            probe(&|x| Ok(stream.eval_real(x)))?
        }
    };
    let mut record = Record::new("monotone")
        .param("function", value_name(&args.function))
        .param("mode", value_name(&args.mode))
        .param("from", args.from)
        .param("to", args.to)
        .param("step", args.step)
        .param("kmax", args.kmax)
        .field("order_checked", report.order_checked)
        .field("grid_points", report.grid.len())
        .field("worst_violation", report.worst_violation)
        .field("tolerance", report.tolerance)
        .field("worst_order", report.worst_order)
        .field("worst_point", report.worst_point);
    if matches!(
        args.function,
        ProbeFunction::LogSeries | ProbeFunction::SquarePair
    ) {
        record = record
            .param("coeff", args.source.coeff.as_str())
            .param("system", args.source.system.as_str())
            .param("terms", args.terms);
    }
    record = match report.first_failing_order {
        Some(k) => record.field("first_failing_order", k),
        None => record.field("first_failing_order", serde_json::Value::Null),
    };
    Ok(Outcome::check(record, report.passed))
}

fn beurling(cli: &Cli, args: &BeurlingArgs) -> Result<Outcome> {
    let table = prime_table(cli, args.terms)?;
    let system = parse_system(&args.source.system, table)?;
    let describe = |r: Record| {
        r.param("system", args.source.system.as_str())
            .param("terms", args.terms)
            .field("degree", system.degree())
            .field("abscissa", system.abscissa())
            .field("beta_min", system.beta_min())
    };
    let terms = args.terms;
    if terms > system.coverage() {
        return Err(Error::OutOfRange {
            value: terms,
            limit: system.coverage(),
        });
    }
    match args.check {
        BeurlingCheck::Zeta => {
            let s = ComplexPoint::new(args.point.sigma, args.point.t)?;
            let v = zeta_system_eval(&system, s, terms)?;
            Ok(Outcome::ok(
                describe(Record::new("beurling-zeta"))
                    .param("sigma", s.sigma)
                    .param("t", s.t)
                    .series(&v),
            ))
        }
        BeurlingCheck::Mangoldt => {
            let mut worst: f64 = 0.0;
            for n in 1..=terms {
                worst = worst.max(beur_mangoldt_identity_residual(&system, n)?);
            }
            Ok(Outcome::check(
                describe(Record::new("beurling-mangoldt"))
                    .field("max_residual", worst)
                    .field("tolerance", 1e-10),
                worst <= 1e-10,
            ))
        }
        BeurlingCheck::Divergence => {
            let probe = prime_sum_divergence_probe(&system, &args.sigmas, terms)?;
            Ok(Outcome::check(
                describe(Record::new("beurling-divergence"))
                    .param("sigmas", args.sigmas.clone())
                    .field("values", probe.values),
                probe.strictly_increasing,
            ))
        }
        BeurlingCheck::Limit => {
            let a = parse_coefficient(&args.source.coeff)?;
            let probe = first_coefficient_limit_probe(&a, &system, &args.sigmas, terms)?;
            Ok(Outcome::check(
                describe(Record::new("beurling-limit"))
                    .param("coeff", args.source.coeff.as_str())
                    .param("sigmas", args.sigmas.clone())
                    .field(
                        "ratios",
                        probe.points.iter().map(|p| p.1).collect::<Vec<f64>>(),
                    )
                    .field("max_ratio", probe.max_ratio),
                probe.nonincreasing,
            ))
        }
    }
}

fn parse_complex(text: &str) -> Result<num_complex::Complex64> {
    let bad = || Error::InvalidArgument(format!("value must be `re,im`, got `{text}`"));
    let (re, im) = text.split_once(',').ok_or_else(bad)?;
    let re = parse_finite(re).map_err(|_| bad())?;
    let im = parse_finite(im).map_err(|_| bad())?;
    Ok(num_complex::Complex64::new(re, im))
}

fn zerofree(cli: &Cli, args: &ZerofreeArgs) -> Result<Outcome> {
    match args.check {
        ZerofreeCheck::Inequality => {
            let region = match args.region {
                RegionArg::Disk => Region::Disk,
                RegionArg::Segment => Region::RealSegment,
                RegionArg::Circle => Region::UnitCircle,
            };
            let m = min_re_w_plus_w2(args.grid as usize, region)?;
            let bound_holds = m.value >= DISK_MINIMUM - 1e-9;
            let record = Record::new("zerofree-inequality")
                .param("grid", args.grid)
                .param("region", value_name(&args.region))
                .field("minimum", m.value)
                .field(
                    "argmin_re",
                    m.argmin.iter().map(|w| w.re).collect::<Vec<f64>>(),
                )
                .field(
                    "argmin_im",
                    m.argmin.iter().map(|w| w.im).collect::<Vec<f64>>(),
                );
            Ok(Outcome::check(record, bound_holds))
        }
        ZerofreeCheck::PerPrime => {
            let a = parse_complex(&args.value)?;
            let r = per_prime_bound_check(a, args.prime, args.sigma)?;
            Ok(Outcome::check(
                Record::new("zerofree-per-prime")
                    .param("value", args.value.as_str())
                    .param("prime", args.prime)
                    .param("sigma", args.sigma)
                    .field("lhs", r.lhs)
                    .field("mid", r.mid)
                    .field("rhs", r.rhs),
                r.pass,
            ))
        }
        ZerofreeCheck::PrimeSum => {
            let (a, system) = source(cli, &args.source, args.terms)?;
            let r = prime_sum_bound_check(&a, &system, args.sigma, args.terms)?;
            Ok(Outcome::check(
                Record::new("zerofree-prime-sum")
                    .param("coeff", args.source.coeff.as_str())
                    .param("system", args.source.system.as_str())
                    .param("sigma", args.sigma)
                    .param("terms", args.terms)
                    .field("series", r.series)
                    .field("bound", r.bound),
                r.pass,
            ))
        }
        ZerofreeCheck::Toy => {
            let table = prime_table(cli, args.terms)?;
            let r = toy_factorization_check(&table, args.t0, args.sigma, args.terms)?;
            Ok(Outcome::ok(
                Record::new("zerofree-toy")
                    .param("t0", args.t0)
                    .param("sigma", args.sigma)
                    .param("terms", args.terms)
                    .field("product", r.product)
                    .field("exponential", r.exponential)
                    .field("relative_residual", r.relative_residual),
            ))
        }
        ZerofreeCheck::Liouville => {
            let table = prime_table(cli, args.terms)?;
            let r = liouville_converse_check(&table, args.sigma, args.terms)?;
            Ok(Outcome::ok(
                Record::new("zerofree-liouville")
                    .param("sigma", args.sigma)
                    .param("terms", args.terms)
                    .field("target", r.target)
                    .field("product", r.product)
                    .field("exponential", r.exponential)
                    .field("relative_residual", r.relative_residual),
            ))
        }
    }
}

fn pingpong(args: &PingpongArgs) -> Result<Outcome> {
    let mut state = PingPongState::new(args.generator, args.half_width)?;
    for seed in &args.seeds {
        let bad = || Error::InvalidArgument(format!("seed must be `A:k` or `B:k`, got `{seed}`"));
        let (set, k) = seed.split_once(':').ok_or_else(bad)?;
        let k: i64 = k.trim().parse().map_err(|_| bad())?;
        match set.trim() {
            "A" | "a" => state.assert_a(k, true)?,
            "B" | "b" => state.assert_b(k, true)?,
            _ => return Err(bad()),
        }
    }
    let base = Record::new("pingpong")
        .param("generator", args.generator)
        .param("half_width", args.half_width)
        .param("disjoint", args.disjoint)
        .param("seeds", args.seeds.join(" "));
    if args.disjoint {
        let record = match pingpong_disjoint_resolve(&state)? {
            Resolution::Contradiction { point } => base
                .field("resolution", "contradiction")
                .field("point", point),
            Resolution::Consistent { a, b, forced } => base
                .field("resolution", "consistent")
                .field("a", a)
                .field("b", b)
                .field("forced", forced),
        };
        return Ok(Outcome::ok(record));
    }
    let closed = pingpong_derive(&state);
    let both: Vec<i64> = closed
        .memberships()
        .into_iter()
        .filter(|(_, m)| *m == crate::zerofree::Membership::InBoth)
        .map(|(k, _)| k)
        .collect();
    Ok(Outcome::ok(
        base.field("a", closed.members(true))
            .field("b", closed.members(false))
            .field("in_both", both)
            .field("contradiction", closed.has_contradiction())
            .field("applications", closed.applications),
    ))
}
