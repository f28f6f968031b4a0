//! The `binmat` command line driver. Every subcommand wraps one library
//! operation and writes a JSON document
//! `{"schema": "binmat/1", "command", "config", "result"}` (or CSV for the
//! tabular commands, with the config on a leading `#` line). Output depends
//! only on the arguments; wall time goes to stderr.
//!
//! Exit codes: 0 on success, 1 on bad input, 2 when a budget or cap refuses
//! the computation.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::fourier::{
    best_factor_search, enumerate_structured, function_entropy, structured_count, DEFAULT_FACTOR_BUDGET,
    DEFAULT_STRUCTURED_BUDGET,
};
use crate::gf2::{packing_bound_holds, rooted_subspace_packing, Subspace};
use crate::matroid::{
    bose_burton, co_critical_number, count_instances, critical_number, density, density_in_function, find_instance,
    DensityMode, Matroid, Pattern, RealFunction,
};
use crate::property::{
    census, core_membership, core_refutation, count_free_extensions, entropy_sandwich, log2, property_critical_number,
    ramsey_dimension, typical_structure_fraction, verify_ramsey, CensusRow, LocalProperty,
};
use crate::{Error, Result};

pub const SCHEMA: &str = "binmat/1";

#[derive(Parser, Debug)]
#[command(name = "binmat", version, about = "Experiments on simple binary matroids over GF(2)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact counts |P^n| for P = Forb(patterns)
    Census(CensusArgs),
    /// Census rows with entropy ratios and the lower bound from the critical number
    EntropyTable(CensusArgs),
    /// Critical number of a locally characterized property
    Chi(PropertyArgs),
    /// Critical and co-critical number of a matroid
    Critical(MatroidArgs),
    /// Find and count instances of a pattern in a matroid
    Instance(InstanceArgs),
    /// Exact or sampled instance density
    Density(InstanceArgs),
    /// Least dimension forcing a monochromatic d-dimensional subspace
    Ramsey(RamseyArgs),
    /// Rooted subspace packing for coordinate subspaces U ⊆ W
    Pack(PackArgs),
    /// Core^k membership of a matroid
    Core(CoreArgs),
    /// Count N'-free extensions of a matroid against the counting bound
    ExtCount(ExtCountArgs),
    /// Fraction of P^n with critical number at most k
    O2Check(O2CheckArgs),
    /// Best polynomial factor residuals for a random function
    DecompProbe(DecompArgs),
    /// Enumerate f-structured matroids
    Structured(StructuredArgs),
    /// Entropy sandwich for matroids with critical number at most k
    Sandwich(SandwichArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Serialize)]
struct Output {
    /// Write the result here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

/// An inclusive dimension range, `a` or `a..b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct DimRange {
    lo: usize,
    hi: usize,
}

impl FromStr for DimRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parse = |v: &str| {
            v.trim()
                .parse::<usize>()
                .map_err(|e| format!("bad dimension {v:?}: {e}"))
        };
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => (parse(a)?, parse(b.trim_start_matches('='))?),
            None => {
                let v = parse(s)?;
                (v, v)
            }
        };
        if lo > hi {
            return Err(format!("empty range {s}"));
        }
        Ok(DimRange { lo, hi })
    }
}

impl Serialize for DimRange {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.lo == self.hi {
            s.serialize_u64(self.lo as u64)
        } else {
            s.serialize_str(&format!("{}..{}", self.lo, self.hi))
        }
    }
}

#[derive(Args, Debug, Serialize)]
struct PropertyArgs {
    /// Forbidden pattern: a file, or O2, I1, BB:k:d, ones:d, zeros:d (repeatable)
    #[arg(long, required = true)]
    forbid: Vec<String>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug, Serialize)]
struct CensusArgs {
    #[arg(long)]
    forbid: Vec<String>,
    /// Dimension or inclusive range a..b
    #[arg(long)]
    n: DimRange,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug, Serialize)]
struct MatroidArgs {
    /// Matroid file (text or JSON) or builtin name
    #[arg(long)]
    input: String,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug, Serialize)]
struct InstanceArgs {
    /// Pattern file or builtin name
    #[arg(long)]
    pattern: String,
    /// Target matroid file or builtin name
    #[arg(long)]
    input: String,
    /// Monte-Carlo samples (density only; exact when absent)
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug, Serialize)]
struct RamseyArgs {
    #[arg(long)]
    d: usize,
    /// Largest dimension searched
    #[arg(long)]
    n: usize,
    /// Search node cap per dimension
    #[arg(long)]
    budget: Option<u64>,
    /// Random colorings re-checked by the verifier
    #[arg(long, default_value_t = 10_000)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug, Serialize)]
struct PackArgs {
    /// Ambient dimension
    #[arg(long)]
    n: usize,
    #[arg(long)]
    u_dim: usize,
    #[arg(long)]
    w_dim: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug, Serialize)]
struct CoreArgs {
    #[arg(long)]
    input: String,
    #[arg(long, required = true)]
    forbid: Vec<String>,
    #[arg(long)]
    k: usize,
    /// Sampled refutation with this many extensions instead of the exact test
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug, Serialize)]
struct ExtCountArgs {
    /// The matroid M being extended
    #[arg(long)]
    input: String,
    /// Ambient dimension of the extensions
    #[arg(long)]
    n: usize,
    /// The matroid N' that extensions must avoid
    #[arg(long)]
    pattern: String,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug, Serialize)]
struct O2CheckArgs {
    #[arg(long, required = true)]
    forbid: Vec<String>,
    #[arg(long)]
    n: DimRange,
    #[arg(long)]
    k: usize,
    /// 0: critical number at most k; 1: co-critical number at most k
    #[arg(long, default_value_t = 0)]
    side: u8,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug, Serialize)]
struct DecompArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    d: usize,
    /// Largest factor complexity
    #[arg(long)]
    complexity: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_FACTOR_BUDGET)]
    budget: u64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug, Serialize)]
struct StructuredArgs {
    /// JSON file {"dim": n, "values": [...]} with one value per point
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = DEFAULT_STRUCTURED_BUDGET)]
    budget: u64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug, Serialize)]
struct SandwichArgs {
    #[arg(long)]
    n: DimRange,
    #[arg(long)]
    k: usize,
    #[command(flatten)]
    output: Output,
}

fn parse_dim(s: &str, what: &str) -> Result<usize> {
    s.parse()
        .map_err(|_| Error::Parse(format!("bad dimension {s:?} in {what}")))
}

/// A builtin pattern name or a file holding a pattern in text or JSON form.
pub fn parse_pattern_arg(arg: &str) -> Result<Pattern> {
    if Path::new(arg).is_file() {
        let text = fs::read_to_string(arg).map_err(|e| Error::Parse(format!("{arg}: {e}")))?;
        return if text.trim_start().starts_with('{') {
            serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{arg}: {e}")))
        } else {
            text.parse()
        };
    }
    let parts: Vec<&str> = arg.split(':').collect();
    match parts[..] {
        ["BB", k, d] => bose_burton(parse_dim(k, arg)?, parse_dim(d, arg)?),
        ["ones", d] => Ok(Matroid::ones(parse_dim(d, arg)?)?.to_pattern()),
        ["zeros", d] => Ok(Matroid::zeros(parse_dim(d, arg)?)?.to_pattern()),
        [name] => {
            let split = |prefix: &str| name.strip_prefix(prefix).filter(|r| !r.is_empty());
            if let Some(d) = split("ones") {
                Ok(Matroid::ones(parse_dim(d, arg)?)?.to_pattern())
            } else if let Some(d) = split("zeros") {
                Ok(Matroid::zeros(parse_dim(d, arg)?)?.to_pattern())
            } else if let Some(d) = split("O") {
                Ok(Matroid::zeros(parse_dim(d, arg)?)?.to_pattern())
            } else if let Some(d) = split("I") {
                Ok(Matroid::ones(parse_dim(d, arg)?)?.to_pattern())
            } else {
                Err(Error::Parse(format!("unknown pattern {arg:?} (not a file or builtin)")))
            }
        }
        _ => Err(Error::Parse(format!("unknown pattern {arg:?}"))),
    }
}

pub fn parse_matroid_arg(arg: &str) -> Result<Matroid> {
    parse_pattern_arg(arg)?
        .to_matroid()
        .ok_or_else(|| Error::Parse(format!("{arg} has stars, expected a matroid")))
}

fn property(forbid: &[String]) -> Result<LocalProperty> {
    let pats = forbid
        .iter()
        .map(|s| parse_pattern_arg(s))
        .collect::<Result<Vec<_>>>()?;
    let name = if forbid.is_empty() {
        "all".to_string()
    } else {
        forbid.join("+")
    };
    Ok(LocalProperty::new(name, pats))
}

/// A finished command: the JSON result, plus rows when the result is a table.
struct Report {
    result: Value,
    table: Option<(Vec<&'static str>, Vec<Vec<String>>)>,
}

impl Report {
    fn value(result: impl Serialize) -> Result<Report> {
        Ok(Report {
            result: to_value(result)?,
            table: None,
        })
    }
}

fn to_value(v: impl Serialize) -> Result<Value> {
    serde_json::to_value(v).map_err(|e| Error::invalid(format!("serialization failed: {e}")))
}

fn opt_f64(v: Option<f64>) -> String {
    v.map_or_else(String::new, |x| x.to_string())
}

fn census_cmd(a: &CensusArgs) -> Result<Report> {
    let p = property(&a.forbid)?;
    let rows: Vec<CensusRow> = (a.lo()..=a.hi()).map(|n| census(&p, n)).collect::<Result<_>>()?;
    let table = rows
        .iter()
        .map(|r| vec![r.n.to_string(), r.count.to_string(), opt_f64(r.entropy)])
        .collect();
    Ok(Report {
        result: json!({ "property": p.name, "rows": to_value(&rows)? }),
        table: Some((vec!["n", "count", "entropy"], table)),
    })
}

impl CensusArgs {
    fn lo(&self) -> usize {
        self.n.lo
    }

    fn hi(&self) -> usize {
        self.n.hi
    }
}

#[derive(Serialize)]
struct EntropyRow {
    n: usize,
    #[serde(serialize_with = "crate::property::decimal")]
    count: BigUint,
    entropy: Option<f64>,
    ratio: Option<f64>,
    limit: Option<f64>,
    /// `|P^n| >= 2^(2^n - 2^(n - χ))`, implied by `M(χ, i) ⊆ P`.
    lower_bound_ok: Option<bool>,
}

fn entropy_table_cmd(a: &CensusArgs) -> Result<Report> {
    let p = property(&a.forbid)?;
    let chi = match property_critical_number(&p) {
        Ok(r) => Some(r.value),
        Err(Error::TrivialProperty(_)) => None,
        Err(e) => return Err(e),
    };
    let mut rows = Vec::new();
    for n in a.lo()..=a.hi() {
        let row = census(&p, n)?;
        let lower_bound_ok = chi.map(|c| {
            let c = c.min(n);
            row.count >= crate::gf2::pow2(((1u64 << n) - (1u64 << (n - c))) as usize)
        });
        rows.push(EntropyRow {
            n,
            ratio: row.entropy.map(|h| h / (1u64 << n) as f64),
            limit: chi.map(|c| 1.0 - 0.5f64.powi(c as i32)),
            entropy: row.entropy,
            count: row.count,
            lower_bound_ok,
        });
    }
    let table = rows
        .iter()
        .map(|r| {
            vec![
                r.n.to_string(),
                r.count.to_string(),
                opt_f64(r.entropy),
                opt_f64(r.ratio),
                opt_f64(r.limit),
                r.lower_bound_ok.map_or_else(String::new, |b| b.to_string()),
            ]
        })
        .collect();
    let violations = rows.iter().filter(|r| r.lower_bound_ok == Some(false)).count();
    Ok(Report {
        result: json!({
            "property": p.name,
            "critical_number": chi,
            "violations": violations,
            "rows": to_value(&rows)?,
        }),
        table: Some((vec!["n", "count", "entropy", "ratio", "limit", "lower_bound_ok"], table)),
    })
}

fn chi_cmd(a: &PropertyArgs) -> Result<Report> {
    let p = property(&a.forbid)?;
    Report::value(json!({ "property": p.name, "report": to_value(property_critical_number(&p)?)? }))
}

fn critical_cmd(a: &MatroidArgs) -> Result<Report> {
    let m = parse_matroid_arg(&a.input)?;
    Report::value(json!({
        "dim": m.dim(),
        "critical_number": critical_number(&m),
        "co_critical_number": co_critical_number(&m),
    }))
}

fn instance_cmd(a: &InstanceArgs) -> Result<Report> {
    let n = parse_pattern_arg(&a.pattern)?;
    let m = parse_matroid_arg(&a.input)?;
    let phi = find_instance(&n, &m);
    let images = phi.map(|p| p.images().iter().map(|v| format!("{v:#x}")).collect::<Vec<_>>());
    Report::value(json!({
        "found": images.is_some(),
        "images": images,
        "count": count_instances(&n, &m).to_string(),
    }))
}

fn density_cmd(a: &InstanceArgs) -> Result<Report> {
    let n = parse_pattern_arg(&a.pattern)?;
    let m = parse_matroid_arg(&a.input)?;
    match a.samples {
        None => {
            let t = density(&n, &m)?;
            Report::value(json!({
                "mode": "exact",
                "density": t.to_string(),
                "approx": t.to_f64(),
            }))
        }
        Some(samples) => {
            let f = RealFunction::indicator(&m);
            let t = density_in_function(&n, &f, DensityMode::MonteCarlo { samples, seed: a.seed })?;
            Report::value(json!({ "mode": "monte_carlo", "samples": samples, "seed": a.seed, "density": t }))
        }
    }
}

fn ramsey_cmd(a: &RamseyArgs) -> Result<Report> {
    let outcome = ramsey_dimension(a.d, a.n, a.budget)?;
    let verification = verify_ramsey(&outcome, a.samples, a.seed)?;
    Report::value(json!({
        "dimension": outcome.dimension,
        "accepted": verification.accepted(),
        "verification": to_value(&verification)?,
        "outcome": to_value(&outcome)?,
    }))
}

fn pack_cmd(a: &PackArgs) -> Result<Report> {
    if a.u_dim > a.w_dim || a.w_dim > a.n {
        return Err(Error::NotNested(format!(
            "need u-dim <= w-dim <= n, got {} {} {}",
            a.u_dim, a.w_dim, a.n
        )));
    }
    let u = Subspace::coordinate(a.n, a.u_dim)?;
    let w = Subspace::coordinate(a.n, a.w_dim)?;
    let family = rooted_subspace_packing(&u, &w, a.n)?;
    let d = a.n - a.w_dim + a.u_dim;
    let mut conditions_ok = family
        .iter()
        .all(|s| s.dim() == d && s.intersection(&w).ok() == Some(u.clone()));
    for (i, x) in family.iter().enumerate() {
        for y in &family[i + 1..] {
            conditions_ok &= x.intersection(y)? == u;
        }
    }
    Report::value(json!({
        "d": d,
        "m": family.len(),
        "bound_exponent": a.n as i64 - 2 * d as i64,
        "bound_holds": packing_bound_holds(family.len(), a.n, d),
        "conditions_hold": conditions_ok,
        "family": to_value(&family)?,
    }))
}

fn core_cmd(a: &CoreArgs) -> Result<Report> {
    let m = parse_matroid_arg(&a.input)?;
    let p = property(&a.forbid)?;
    match a.samples {
        None => Report::value(json!({ "mode": "exact", "in_core": core_membership(&m, &p, a.k)? })),
        Some(samples) => Report::value(json!({
            "mode": "sampled",
            "samples": samples,
            "seed": a.seed,
            "verdict": to_value(core_refutation(&m, &p, a.k, samples, a.seed)?)?,
        })),
    }
}

fn ext_count_cmd(a: &ExtCountArgs) -> Result<Report> {
    let m = parse_matroid_arg(&a.input)?;
    let np = parse_matroid_arg(&a.pattern)?;
    Report::value(count_free_extensions(&m, a.n, &np)?)
}

fn o2_check_cmd(a: &O2CheckArgs) -> Result<Report> {
    let p = property(&a.forbid)?;
    let mut rows = Vec::new();
    let mut table = Vec::new();
    for n in a.n.lo..=a.n.hi {
        let f = typical_structure_fraction(&p, n, a.k, a.side)?;
        let approx = f.to_f64().unwrap_or(f64::NAN);
        table.push(vec![
            n.to_string(),
            f.numer().to_string(),
            f.denom().to_string(),
            approx.to_string(),
        ]);
        rows.push(json!({ "n": n, "fraction": f.to_string(), "approx": approx }));
    }
    Ok(Report {
        result: json!({ "property": p.name, "k": a.k, "side": a.side, "rows": rows }),
        table: Some((vec!["n", "numerator", "denominator", "approx"], table)),
    })
}

fn decomp_cmd(a: &DecompArgs) -> Result<Report> {
    if a.n > 8 {
        return Err(Error::budget("decomposition probe", format!("n = {}", a.n), 8));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let g: Vec<f64> = (0..1usize << a.n).map(|_| rng.gen::<f64>()).collect();
    let mut rows = Vec::new();
    let mut table = Vec::new();
    for c in 0..=a.complexity {
        let best = best_factor_search(&g, a.d, c, a.budget)?;
        table.push(vec![
            c.to_string(),
            best.factor.partition.parts().to_string(),
            best.factors_searched.to_string(),
            best.residual.to_string(),
        ]);
        rows.push(json!({
            "complexity": c,
            "residual": best.residual,
            "parts": best.factor.partition.parts(),
            "factors_searched": best.factors_searched,
            "polynomials": to_value(&best.factor.polys)?,
        }));
    }
    Ok(Report {
        result: json!({ "rows": rows }),
        table: Some((vec!["complexity", "parts", "factors_searched", "residual"], table)),
    })
}

fn structured_cmd(a: &StructuredArgs) -> Result<Report> {
    let text = fs::read_to_string(&a.input).map_err(|e| Error::Parse(format!("{}: {e}", a.input.display())))?;
    let raw: RawFunction =
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", a.input.display())))?;
    let f = RealFunction::new(raw.dim, raw.values)?;
    let all = enumerate_structured(&f, a.budget)?;
    let product = structured_count(&f);
    let h = function_entropy(&f);
    Report::value(json!({
        "count": all.len().to_string(),
        "binomial_product": product.to_string(),
        "entropy": h,
        "entropy_bound_holds": log2(&product).is_none_or(|l| l <= h + 1e-9),
        "levels": to_value(crate::fourier::levels(&f))?,
        "matroids": all.iter().map(Matroid::table_string).collect::<Vec<_>>(),
    }))
}

#[derive(serde::Deserialize)]
struct RawFunction {
    dim: usize,
    values: Vec<f64>,
}

fn sandwich_cmd(a: &SandwichArgs) -> Result<Report> {
    let rows = (a.n.lo..=a.n.hi)
        .map(|n| entropy_sandwich(n, a.k))
        .collect::<Result<Vec<_>>>()?;
    let table = rows
        .iter()
        .map(|r| {
            vec![
                r.n.to_string(),
                r.count.to_string(),
                r.lower_exponent.to_string(),
                r.upper_exponent.to_string(),
                r.lower_holds.to_string(),
                r.upper_holds.to_string(),
            ]
        })
        .collect();
    Ok(Report {
        result: json!({ "k": a.k, "rows": to_value(&rows)? }),
        table: Some((
            vec![
                "n",
                "count",
                "lower_exponent",
                "upper_exponent",
                "lower_holds",
                "upper_holds",
            ],
            table,
        )),
    })
}

fn dispatch(cmd: &Command) -> Result<(&'static str, Value, &Output, Report)> {
    macro_rules! go {
        ($name:literal, $args:expr, $f:expr) => {{
            let args = $args;
            let report = $f(args)?;
            Ok(($name, to_value(args)?, &args.output, report))
        }};
    }
    match cmd {
        Command::Census(a) => go!("census", a, census_cmd),
        Command::EntropyTable(a) => go!("entropy-table", a, entropy_table_cmd),
        Command::Chi(a) => go!("chi", a, chi_cmd),
        Command::Critical(a) => go!("critical", a, critical_cmd),
        Command::Instance(a) => go!("instance", a, instance_cmd),
        Command::Density(a) => go!("density", a, density_cmd),
        Command::Ramsey(a) => go!("ramsey", a, ramsey_cmd),
        Command::Pack(a) => go!("pack", a, pack_cmd),
        Command::Core(a) => go!("core", a, core_cmd),
        Command::ExtCount(a) => go!("ext-count", a, ext_count_cmd),
        Command::O2Check(a) => go!("o2-check", a, o2_check_cmd),
        Command::DecompProbe(a) => go!("decomp-probe", a, decomp_cmd),
        Command::Structured(a) => go!("structured", a, structured_cmd),
        Command::Sandwich(a) => go!("sandwich", a, sandwich_cmd),
    }
}

fn render(command: &str, mut config: Value, output: &Output, report: Report) -> Result<Vec<u8>> {
    // the output location is not part of the experiment
    if let Some(obj) = config.as_object_mut() {
        obj.remove("output");
        obj.insert("format".into(), to_value(output.format)?);
    }
    match output.format {
        Format::Json => {
            let doc = json!({
                "schema": SCHEMA,
                "command": command,
                "config": config,
                "result": report.result,
            });
            let mut s = serde_json::to_string_pretty(&doc).expect("JSON values always serialize");
            s.push('\n');
            Ok(s.into_bytes())
        }
        Format::Csv => {
            let (header, rows) = report
                .table
                .ok_or_else(|| Error::invalid(format!("{command} has no CSV form, use --format json")))?;
            let mut buf = format!("# {SCHEMA} {command} {config}\n").into_bytes();
            {
                let mut w = csv::Writer::from_writer(&mut buf);
                let fail = |e: csv::Error| Error::invalid(format!("CSV output failed: {e}"));
                w.write_record(&header).map_err(fail)?;
                for r in rows {
                    w.write_record(&r).map_err(fail)?;
                }
                w.flush()
                    .map_err(|e| Error::invalid(format!("CSV output failed: {e}")))?;
            }
            Ok(buf)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    if e.is_budget() {
        2
    } else {
        1
    }
}

/// Run the driver on `args` (including the program name). Results go to
/// `out` (or the `--out` file), diagnostics and timing to `err`.
pub fn run(args: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let start = Instant::now();
    let (command, config, output, report) = match dispatch(&cli.command) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return exit_code(&e);
        }
    };
    let bytes = match render(command, config, output, report) {
        Ok(b) => b,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return exit_code(&e);
        }
    };
    let written = match &output.out {
        Some(path) => fs::write(path, &bytes).map_err(|e| format!("{}: {e}", path.display())),
        None => out.write_all(&bytes).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        let _ = writeln!(err, "error: cannot write output: {e}");
        return 1;
    }
    let _ = writeln!(err, "{command}: {:.3}s", start.elapsed().as_secs_f64());
    0
}
