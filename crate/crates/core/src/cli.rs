//! Command-line front end for the `ecbound` binary.
//!
//! Exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success (for `analyze`/`verify`: every asserted chain entry holds) |
//! | 1 | a chain entry failed |
//! | 2 | bad arguments or unparsable curve/registry |
//! | 3 | singular curve |
//! | 4 | no rational 2-torsion point |
//! | 5 | `B` too small |
//! | 6 | effort budget exceeded (factorization, enumeration, heights) |
//! | 7 | I/O failure |
//! | 8 | any other error |

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::bounds::{
    f_max, f_samples, theorem_bound, BoundOptions, BoundReport, ConstantsRegistry, EntryKind,
    PetscheMode,
};
use crate::count::enumerate_on_model;
use crate::curve::InputCurve;
use crate::error::{Error, Result};
use crate::points::{canonical_height, naive_height};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHAIN_FAILED: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_SINGULAR: i32 = 3;
pub const EXIT_NO_TWO_TORSION: i32 = 4;
pub const EXIT_B_TOO_SMALL: i32 = 5;
pub const EXIT_EFFORT: i32 = 6;
pub const EXIT_IO: i32 = 7;
pub const EXIT_OTHER: i32 = 8;

/// Process exit code for an error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Parse(_) | Error::Registry(_) => EXIT_PARSE,
        Error::SingularCurve => EXIT_SINGULAR,
        Error::NoTwoTorsion => EXIT_NO_TWO_TORSION,
        Error::BTooSmall(_) => EXIT_B_TOO_SMALL,
        Error::EffortExceeded(_)
        | Error::FactorizationIncomplete { .. }
        | Error::EnumerationIncomplete(_) => EXIT_EFFORT,
        Error::Io(_) => EXIT_IO,
        _ => EXIT_OTHER,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Full,
    Simplified,
    RationalImproved,
    LangConjecture,
}

impl From<Mode> for PetscheMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Full => PetscheMode::Full,
            Mode::Simplified => PetscheMode::Simplified,
            Mode::RationalImproved => PetscheMode::RationalImproved,
            Mode::LangConjecture => PetscheMode::LangConjecture,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "ecbound",
    version,
    about = "Rational points of bounded height on elliptic curves with a rational 2-torsion point"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Registry file (`key = value  # provenance`); overrides the environment.
    #[arg(long, global = true)]
    pub registry: Option<PathBuf>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Canonical height tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct CurveArgs {
    /// `A,B` (short integral model) or `a,b,c` (rationals, y² = x³ + ax² + bx + c).
    #[arg(long, allow_hyphen_values = true)]
    pub curve: String,
    /// Height bound.
    #[arg(long = "B")]
    pub b: f64,
}

#[derive(Debug, Clone, Args)]
pub struct BoundArgs {
    #[command(flatten)]
    pub curve: CurveArgs,
    /// Also enumerate N(B) and compare.
    #[arg(long)]
    pub empirical: bool,
    #[arg(long, value_enum, default_value = "full")]
    pub mode: Mode,
    /// Largest rank bound handled by the small-rank branch.
    #[arg(long = "threshold-rank")]
    pub threshold_rank: Option<u64>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Evaluate the bound chain for one curve.
    Analyze(BoundArgs),
    /// List every point of height at most B.
    Enumerate(CurveArgs),
    /// Sample log f(x) for plotting.
    BoundCurve {
        #[arg(long = "A")]
        a: f64,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Evaluate the chain with the empirical count and print a verdict per entry.
    Verify(BoundArgs),
    /// Print the constants registry.
    Constants,
}

/// Resolved configuration for one invocation.
#[derive(Debug, Clone)]
pub struct CliConfig {
    pub command: Command,
    pub registry: ConstantsRegistry,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl CliConfig {
    pub fn from_cli(cli: Cli) -> Result<Self> {
        let mut registry = match &cli.common.registry {
            Some(p) => ConstantsRegistry::load(p)?,
            None => ConstantsRegistry::from_env()?,
        };
        if let Some(tol) = cli.common.tol {
            if !(tol > 0.0) {
                return Err(Error::Parse(format!("--tol must be positive, got {tol}")));
            }
            registry.set("tol", tol)?;
        }
        if let Command::Analyze(args) | Command::Verify(args) = &cli.command {
            if let Some(t) = args.threshold_rank {
                registry.set("c9", t as f64)?;
            }
        }
        let format = cli.common.format.unwrap_or(match cli.command {
            Command::BoundCurve { .. } => Format::Csv,
            Command::Constants | Command::Verify(_) => Format::Text,
            _ => Format::Json,
        });
        Ok(Self {
            command: cli.command,
            registry,
            out: cli.common.out,
            format,
        })
    }
}

/// `"A,B"` or `"a,b,c"`, validated nonsingular.
pub fn parse_curve(spec: &str) -> Result<InputCurve> {
    spec.parse()
}

/// Fixed 15-significant-digit rendering.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.14e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

/// Rounds every float in a JSON tree to 15 significant digits.
pub fn round_json(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(r) = n.as_f64().and_then(|x| fmt_f64(x).parse::<f64>().ok()) {
                if let Some(num) = serde_json::Number::from_f64(r) {
                    *n = num;
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_json),
        Value::Object(map) => map.values_mut().for_each(round_json),
        _ => {}
    }
}

fn json_string(mut v: Value) -> Result<String> {
    round_json(&mut v);
    Ok(serde_json::to_string_pretty(&v)? + "\n")
}

fn bound_report(args: &BoundArgs, reg: &ConstantsRegistry, empirical: bool) -> Result<BoundReport> {
    let curve = parse_curve(&args.curve.curve)?;
    let opts = BoundOptions {
        mode: args.mode.into(),
        empirical,
    };
    theorem_bound(&curve, args.curve.b, reg, &opts)
}

fn render_report(r: &BoundReport, format: Format) -> Result<String> {
    Ok(match format {
        Format::Json => json_string(serde_json::to_value(r)?)?,
        Format::Csv => {
            let mut s = String::from("name,lhs,rhs,holds,kind\n");
            for c in &r.chain {
                let kind = match c.kind {
                    EntryKind::Asserted => "asserted",
                    EntryKind::Informational => "informational",
                };
                let _ = writeln!(
                    s,
                    "\"{}\",{},{},{},{kind}",
                    c.name,
                    fmt_f64(c.lhs),
                    fmt_f64(c.rhs),
                    c.holds
                );
            }
            s
        }
        Format::Text => {
            let opt = |x: Option<f64>| x.map_or("none".to_string(), fmt_f64);
            let mut s = String::new();
            let _ = writeln!(s, "curve: {}", r.curve);
            let _ = writeln!(s, "short model: {}", r.short_model);
            let _ = writeln!(s, "quasi-minimal model: {}", r.quasi_minimal_model);
            let _ = writeln!(s, "B: {}", fmt_f64(r.bound));
            let _ = writeln!(s, "log B (canonical): {}", fmt_f64(r.log_bound_canonical));
            let _ = writeln!(s, "discriminant: {}", r.discriminant);
            let _ = writeln!(s, "omega: {}", r.omega);
            let _ = writeln!(s, "rank bound: {}", r.rank_bound);
            let _ = writeln!(s, "torsion order: {}", r.torsion_order);
            let _ = writeln!(s, "sigma upper: {}", fmt_f64(r.szpiro.sigma_upper));
            let _ = writeln!(s, "mode: {}", r.mode);
            let _ = writeln!(s, "height floor: {}", opt(r.petsche_floor));
            let _ = writeln!(
                s,
                "branch: {}",
                serde_json::to_value(r.branch)?.as_str().unwrap_or("?")
            );
            let _ = writeln!(s, "log theoretical count: {}", opt(r.log_theoretical_count));
            let _ = writeln!(s, "exponent C: {}", opt(r.exponent_c));
            if let Some(n) = r.empirical_count {
                let _ = writeln!(s, "empirical N(B): {n}");
                let _ = writeln!(s, "measured lambda: {}", opt(r.measured_lambda));
            }
            for c in &r.chain {
                let tag = match (c.holds, c.kind) {
                    (true, _) => "ok  ",
                    (false, EntryKind::Informational) => "info",
                    (false, EntryKind::Asserted) => "FAIL",
                };
                let _ = writeln!(
                    s,
                    "[{tag}] {}: {} <= {}",
                    c.name,
                    fmt_f64(c.lhs),
                    fmt_f64(c.rhs)
                );
            }
            for n in &r.notes {
                let _ = writeln!(s, "note: {n}");
            }
            s
        }
    })
}

fn enumerate(args: &CurveArgs, reg: &ConstantsRegistry, format: Format) -> Result<String> {
    let curve = parse_curve(&args.curve)?;
    let map = curve.to_short_model()?;
    let cfg = reg.height_config();
    let mut rows = Vec::new();
    for (src, tgt) in enumerate_on_model(&map, args.b)? {
        let hhat = canonical_height(&tgt, map.target(), reg.tol(), &cfg)?;
        rows.push((src, hhat.value));
    }
    Ok(match format {
        Format::Json => {
            let points: Vec<Value> = rows
                .iter()
                .map(|(p, hh)| {
                    json!({
                        "x": p.x().map(ToString::to_string),
                        "y": p.y().map(ToString::to_string),
                        "h": naive_height(p),
                        "hhat": hh,
                    })
                })
                .collect();
            json_string(json!({
                "curve": curve.to_string(),
                "bound": args.b,
                "count": rows.len(),
                "points": points,
            }))?
        }
        Format::Csv | Format::Text => {
            let sep = if format == Format::Csv { "," } else { " " };
            let mut s = if format == Format::Csv {
                String::from("x,y,h,hhat\n")
            } else {
                format!("# {} points with H(P) <= {}\n", rows.len(), fmt_f64(args.b))
            };
            for (p, hh) in &rows {
                let (x, y) = match (p.x(), p.y()) {
                    (Some(x), Some(y)) => (x.to_string(), y.to_string()),
                    _ => ("inf".to_string(), "inf".to_string()),
                };
                let _ = writeln!(
                    s,
                    "{x}{sep}{y}{sep}{}{sep}{}",
                    fmt_f64(naive_height(p)),
                    fmt_f64(*hh)
                );
            }
            s
        }
    })
}

/// `x,logf` rows over the maximization domain, with the caps as trailing
/// `#` comment lines.
pub fn emit_plot_data(
    a: f64,
    samples: usize,
    reg: &ConstantsRegistry,
    format: Format,
) -> Result<String> {
    let rows = f_samples(a, samples, reg)?;
    let m = f_max(a, reg)?;
    Ok(match format {
        Format::Json => json_string(json!({
            "samples": rows.iter().map(|(x, y)| json!([x, y])).collect::<Vec<_>>(),
            "f_max": m,
        }))?,
        Format::Csv | Format::Text => {
            let mut s = String::from("x,logf\n");
            for (x, y) in &rows {
                let _ = writeln!(s, "{},{}", fmt_f64(*x), fmt_f64(*y));
            }
            let _ = writeln!(s, "# x_star={}", fmt_f64(m.x_star));
            let _ = writeln!(s, "# x_cap={}", fmt_f64(m.x_cap));
            let _ = writeln!(s, "# arg_max={}", fmt_f64(m.arg_max));
            let _ = writeln!(s, "# log_f_star={}", fmt_f64(m.log_f_star));
            let _ = writeln!(s, "# log_f_cap={}", fmt_f64(m.log_f_cap));
            let _ = writeln!(s, "# cap_ok={}", m.cap_ok);
            s
        }
    })
}

fn constants(reg: &ConstantsRegistry, format: Format) -> Result<String> {
    Ok(match format {
        Format::Json => {
            let derived: serde_json::Map<String, Value> = reg
                .derived()
                .into_iter()
                .map(|(k, v, f)| (k.to_string(), json!({ "value": v, "formula": f })))
                .collect();
            json_string(json!({
                "constants": serde_json::to_value(reg)?["entries"],
                "derived": derived,
            }))?
        }
        Format::Csv => {
            let mut s = String::from("key,value,provenance\n");
            for (k, c) in reg.entries() {
                let _ = writeln!(s, "{k},{},{}", c.value, c.provenance);
            }
            s
        }
        Format::Text => {
            let mut s = reg.to_file_string();
            for (k, v, f) in reg.derived() {
                let _ = writeln!(s, "# derived {k} = {}  ({f})", fmt_f64(v));
            }
            s
        }
    })
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => write_file(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_file(p: &Path, text: &str) -> Result<()> {
    std::fs::write(p, text)?;
    Ok(())
}

/// Runs one resolved invocation and returns the exit code.
pub fn execute(cfg: &CliConfig) -> Result<i32> {
    let reg = &cfg.registry;
    match &cfg.command {
        Command::Analyze(args) => {
            let r = bound_report(args, reg, args.empirical)?;
            emit(&cfg.out, &render_report(&r, cfg.format)?)?;
            Ok(if r.all_hold() {
                EXIT_OK
            } else {
                EXIT_CHAIN_FAILED
            })
        }
        Command::Verify(args) => {
            let r = bound_report(args, reg, true)?;
            let mut text = render_report(&r, cfg.format)?;
            if cfg.format == Format::Text {
                let verdict = if r.all_hold() { "PASS" } else { "FAIL" };
                let _ = writeln!(text, "verdict: {verdict}");
            }
            emit(&cfg.out, &text)?;
            Ok(if r.all_hold() {
                EXIT_OK
            } else {
                EXIT_CHAIN_FAILED
            })
        }
        Command::Enumerate(args) => {
            emit(&cfg.out, &enumerate(args, reg, cfg.format)?)?;
            Ok(EXIT_OK)
        }
        Command::BoundCurve { a, samples } => {
            emit(&cfg.out, &emit_plot_data(*a, *samples, reg, cfg.format)?)?;
            Ok(EXIT_OK)
        }
        Command::Constants => {
            emit(&cfg.out, &constants(reg, cfg.format)?)?;
            Ok(EXIT_OK)
        }
    }
}

/// Entry point for the binary: parses `args`, runs, reports errors on
/// stderr, and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    EXIT_OK
                }
                _ => EXIT_PARSE,
            };
        }
    };
    match CliConfig::from_cli(cli).and_then(|cfg| execute(&cfg)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
