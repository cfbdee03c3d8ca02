//! The `prank` command line.
//!
//! Exit codes: 0 success or verified, 1 usage or input error, 2 unverified or
//! failed, 3 budget exceeded. Axes and indices are 1-based on the command line
//! and in every file.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::engine::{check_certificate, decompose, Certificate, DecomposeConfig, DEFAULT_DEGREE_CEILING, DEFAULT_MAX_CANDIDATES};
use crate::error::{Error, Result};
use crate::field::FieldCtx;
use crate::oracles::{check_inequalities, AuditConfig, AuditRecord, DEFAULT_PR_BUDGET};
use crate::random::seeded_tensor;
use crate::tensor::{Array, Tensor};
use crate::variety::{analytic_rank, estimate_dim, DEFAULT_BUDGET};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_FAILED: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

pub const TOOL_NAME: &str = "prank";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser, Debug)]
#[command(name = "prank", version, about = "Certified partition-rank decompositions over finite fields")]
pub struct Cli {
    /// Work budget for kernel enumeration (fibres plus listed points).
    #[arg(long, global = true, env = "PRANK_BUDGET", default_value_t = DEFAULT_BUDGET)]
    pub budget: u128,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a seeded random tensor.
    Gen(GenArgs),
    /// Exact analytic rank from the kernel count of one slicing.
    Ar(ArArgs),
    /// Build and verify a partition-rank certificate.
    Decompose(DecomposeArgs),
    /// Check a certificate against a tensor.
    Verify(VerifyArgs),
    /// Generate, decompose and audit a batch of tensors.
    Corpus(CorpusArgs),
}

#[derive(Args, Debug)]
pub struct GenArgs {
    /// Field as `p` or `p^e`.
    #[arg(long)]
    pub field: String,
    /// Dimensions as `n1xn2x...`.
    #[arg(long)]
    pub dims: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Probability that an entry is drawn at all (drawn entries are uniform).
    #[arg(long, default_value_t = 1.0)]
    pub density: f64,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ArArgs {
    pub tensor: PathBuf,
    /// Slicing axis (1-based); the last axis by default.
    #[arg(long)]
    pub axis: Option<usize>,
    /// Also estimate the kernel dimension over extensions up to this degree.
    #[arg(long)]
    pub max_ext: Option<u32>,
}

#[derive(Args, Debug)]
pub struct DecomposeArgs {
    pub tensor: PathBuf,
    #[arg(long)]
    pub axis: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_MAX_CANDIDATES)]
    pub max_candidates: usize,
    #[arg(long, default_value_t = DEFAULT_DEGREE_CEILING)]
    pub degree_ceiling: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Certificate output; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    pub tensor: PathBuf,
    pub certificate: PathBuf,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Csv,
    Json,
}

#[derive(Args, Debug)]
pub struct CorpusArgs {
    #[arg(long)]
    pub field: String,
    #[arg(long)]
    pub dims: String,
    #[arg(long, default_value_t = 10)]
    pub count: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1.0)]
    pub density: f64,
    /// Sweep every tensor of the given shape instead of `count` random ones.
    #[arg(long)]
    pub all: bool,
    #[arg(long)]
    pub axis: Option<usize>,
    /// Largest extension degree for the dimension estimate.
    #[arg(long, default_value_t = 3)]
    pub max_ext: u32,
    #[arg(long, default_value_t = DEFAULT_PR_BUDGET)]
    pub pr_budget: u128,
    #[arg(long, default_value_t = 8)]
    pub r_max: usize,
    /// Report file; standard output when omitted.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Report format; taken from the report extension when omitted, else CSV.
    #[arg(long, value_enum)]
    pub format: Option<ReportFormat>,
}

pub fn parse_field(s: &str) -> Result<FieldCtx> {
    let (p, e) = match s.split_once('^') {
        Some((p, e)) => (p.trim(), e.trim()),
        None => (s.trim(), "1"),
    };
    let p = p.parse::<u64>().map_err(|_| Error::Invalid(format!("bad field {s:?}")))?;
    let e = e.parse::<u32>().map_err(|_| Error::Invalid(format!("bad field {s:?}")))?;
    FieldCtx::new(p, e)
}

pub fn parse_dims(s: &str) -> Result<Vec<usize>> {
    let dims = s
        .split(['x', 'X', ','])
        .map(|d| d.trim().parse::<usize>().map_err(|_| Error::Invalid(format!("bad dims {s:?}"))))
        .collect::<Result<Vec<_>>>()?;
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::Invalid(format!("dims must be positive, got {s:?}")));
    }
    Ok(dims)
}

fn axis_arg(axis: Option<usize>, k: usize) -> Result<Option<usize>> {
    match axis {
        None => Ok(None),
        Some(a) if a >= 1 && a <= k => Ok(Some(a - 1)),
        Some(a) => Err(Error::Invalid(format!("axis {a} outside 1..={k}"))),
    }
}

fn config_hash(config: &Value) -> String {
    hex::encode(Sha256::digest(config.to_string().as_bytes()))
}

fn provenance(config: &Value) -> Value {
    json!({"tool": TOOL_NAME, "version": TOOL_VERSION, "config_sha256": config_hash(config)})
}

fn read_json(path: &Path) -> Result<Value> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
        }
    }
    Ok(())
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn run_gen(a: &GenArgs) -> Result<i32> {
    let ctx = parse_field(&a.field)?;
    let dims = parse_dims(&a.dims)?;
    let t = seeded_tensor(&ctx, &dims, a.density, a.seed)?;
    let config = json!({"command": "gen", "field": [ctx.p(), ctx.e()], "dims": dims, "seed": a.seed, "density": a.density});
    let mut v = t.to_json();
    v["provenance"] = provenance(&config);
    emit(a.out.as_deref(), &pretty(&v))?;
    Ok(EXIT_OK)
}

fn run_ar(a: &ArArgs, budget: u128) -> Result<i32> {
    let t = Tensor::from_json(&read_json(&a.tensor)?)?;
    let axis = axis_arg(a.axis, t.order())?.unwrap_or(t.order() - 1);
    let ar = analytic_rank(&t, axis, budget)?;
    let mut v = json!({"axis": axis + 1, "N": ar.n, "q": ar.q, "count": ar.count.to_string(), "ar": ar.value()});
    if let Some(e) = a.max_ext {
        v["kernel"] = estimate_dim(&t, axis, e, budget, DEFAULT_MAX_CANDIDATES)?.to_json(t.ctx());
    }
    emit(None, &pretty(&v))?;
    Ok(EXIT_OK)
}

fn run_decompose(a: &DecomposeArgs, budget: u128) -> Result<i32> {
    let t = Tensor::from_json(&read_json(&a.tensor)?)?;
    let cfg = DecomposeConfig {
        axis: axis_arg(a.axis, t.order())?,
        max_candidates: a.max_candidates,
        degree_ceiling: a.degree_ceiling,
        budget,
        seed: a.seed,
        ..DecomposeConfig::default()
    };
    let cert = decompose(&t, &cfg)?;
    let config = json!({
        "command": "decompose", "axis": cfg.axis.map(|x| x + 1), "max_candidates": cfg.max_candidates,
        "degree_ceiling": cfg.degree_ceiling, "budget": budget.to_string(), "seed": cfg.seed,
    });
    let mut v = cert.to_json();
    v["provenance"] = provenance(&config);
    emit(a.out.as_deref(), &pretty(&v))?;
    if cert.verified {
        Ok(EXIT_OK)
    } else {
        eprintln!("{}", Error::AllCandidatesFailed(cert.diagnostics.failures.iter().map(|(i, r)| format!("candidate {}: {r}", i + 1)).collect()));
        Ok(EXIT_FAILED)
    }
}

fn run_verify(a: &VerifyArgs) -> Result<i32> {
    let t = Tensor::from_json(&read_json(&a.tensor)?)?;
    let cert = Certificate::from_json(&read_json(&a.certificate)?)?;
    if cert.ctx != *t.ctx() {
        eprintln!("certificate is over {:?}, tensor over {:?}", cert.ctx, t.ctx());
        return Ok(EXIT_FAILED);
    }
    let ok = match check_certificate(&t, &cert) {
        Ok(ok) => ok,
        Err(Error::DimsMismatch { .. }) => false,
        Err(e) => return Err(e),
    };
    println!(
        "{}",
        json!({"ok": ok, "terms": cert.num_terms(), "bound": cert.bound})
    );
    Ok(if ok { EXIT_OK } else { EXIT_FAILED })
}

/// All `q^len` tensors of the given shape, in index order of their entry vectors.
fn all_tensors(ctx: &FieldCtx, dims: &[usize]) -> Result<Vec<Tensor>> {
    let len: usize = dims.iter().product();
    let elems = ctx.elements()?;
    let total = (elems.len() as u128).checked_pow(len as u32).unwrap_or(u128::MAX);
    if total > 1 << 20 {
        return Err(Error::BudgetExceeded { needed: total, budget: 1 << 20 });
    }
    crate::tensor::indices(&vec![elems.len(); len])
        .map(|digits| Ok(Tensor::from_array(ctx, Array::new(dims.to_vec(), digits.iter().map(|&d| elems[d]).collect())?)))
        .collect()
}

pub const CSV_HEADER: [&str; 12] = [
    "tensor_id", "q", "dims", "ar_count", "ar_value", "pr", "gr_est", "cert_terms", "ar_bound", "gr_bound", "tool_version", "config_sha256",
];

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn csv_row(id: usize, r: &AuditRecord, hash: &str) -> Vec<String> {
    vec![
        id.to_string(),
        r.q.to_string(),
        r.dims.iter().map(usize::to_string).collect::<Vec<_>>().join("x"),
        opt(r.ar.map(|a| a.count)),
        opt(r.ar.map(|a| format!("{:.6}", a.value()))),
        opt(r.pr),
        opt(r.gr_est),
        opt(r.cert_terms),
        opt(r.holds_ar_bound),
        opt(r.holds_gr_bound),
        TOOL_VERSION.to_string(),
        hash.to_string(),
    ]
}

fn run_corpus(a: &CorpusArgs, budget: u128) -> Result<i32> {
    let ctx = parse_field(&a.field)?;
    let dims = parse_dims(&a.dims)?;
    let tensors: Vec<Tensor> = if a.all {
        all_tensors(&ctx, &dims)?
    } else {
        (0..a.count)
            .map(|i| seeded_tensor(&ctx, &dims, a.density, a.seed.wrapping_add(i as u64)))
            .collect::<Result<_>>()?
    };
    let cfg = AuditConfig {
        axis: axis_arg(a.axis, dims.len())?,
        max_ext: a.max_ext,
        budget,
        pr_budget: a.pr_budget,
        r_max: a.r_max,
        certify: true,
        decompose: DecomposeConfig {
            budget,
            seed: a.seed,
            ..DecomposeConfig::default()
        },
    };
    let config = json!({
        "command": "corpus", "field": [ctx.p(), ctx.e()], "dims": dims, "count": a.count, "seed": a.seed,
        "density": a.density, "all": a.all, "axis": a.axis, "max_ext": a.max_ext, "pr_budget": a.pr_budget.to_string(),
        "r_max": a.r_max, "budget": budget.to_string(),
    });
    let hash = config_hash(&config);
    let records: Vec<AuditRecord> = tensors.par_iter().map(|t| check_inequalities(t, &cfg)).collect::<Result<_>>()?;
    let format = a.format.unwrap_or(match a.report.as_ref().and_then(|p| p.extension()).and_then(|e| e.to_str()) {
        Some("json") => ReportFormat::Json,
        _ => ReportFormat::Csv,
    });
    let text = match format {
        ReportFormat::Json => pretty(&json!({
            "provenance": provenance(&config),
            "rows": records.iter().enumerate().map(|(i, r)| {
                let mut v = r.to_json();
                v["tensor_id"] = json!(i + 1);
                v
            }).collect::<Vec<_>>(),
        })),
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(CSV_HEADER)?;
            for (i, r) in records.iter().enumerate() {
                w.write_record(csv_row(i + 1, r, &hash))?;
            }
            String::from_utf8(w.into_inner().map_err(|e| Error::Invalid(e.to_string()))?).expect("utf-8 csv")
        }
    };
    emit(a.report.as_deref(), &text)?;
    let failed = records.iter().any(|r| r.holds_ar_le_pr == Some(false));
    Ok(if failed { EXIT_FAILED } else { EXIT_OK })
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::BudgetExceeded { .. } => EXIT_BUDGET,
        Error::AllCandidatesFailed(_) | Error::NoPoint => EXIT_FAILED,
        _ => EXIT_USAGE,
    }
}

/// Parses `args` (program name first) and runs the command, returning the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let result = match &cli.command {
        Command::Gen(a) => run_gen(a),
        Command::Ar(a) => run_ar(a, cli.budget),
        Command::Decompose(a) => run_decompose(a, cli.budget),
        Command::Verify(a) => run_verify(a),
        Command::Corpus(a) => run_corpus(a, cli.budget),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
