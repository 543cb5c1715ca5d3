//! `sigtensor`: exact signature tensors from the command line.
//!
//! Every command prints a JSON report `{command, inputs, result, certificates}`.
//! Exit codes: 0 success, 1 a requested check failed, 2 usage error,
//! 3 unreadable or malformed input, 4 a mathematical precondition failed.

use std::path::{Path as FsPath, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use sigtensor::exact::scalar::{parse_scalar, to_f64};
use sigtensor::harness::verify;
use sigtensor::io::{read_json, read_time_series_csv, to_json_pretty};
use sigtensor::lie::{exp_log_signature, log_signature, pure_volume_check};
use sigtensor::path::{pwl_signature, time_series_to_path};
use sigtensor::rank::{
    certify_rank, classify_222_complex_rank, decompose_path, hyperdet_222, rank_bound_formula, Decomposition,
};
use sigtensor::symmetry::{
    hyperplane_recovery, is_concise, mode_subspaces, partial_symmetry_constraint, sig222_from_params,
    sig222_hyperdet_closed_form, symmetric_conciseness, symmetry_report, PartialBlock, Sig222Params,
};
use sigtensor::words::shuffle;
use sigtensor::{Error, LogSignature, Path, Tensor, TruncatedSignature, Word};

/// Default output directory when `--out` is not given.
const OUT_DIR_VAR: &str = "SIGTENSOR_OUT_DIR";
const MAX_DIM: usize = 6;
const MAX_LEVEL: usize = 8;
/// Entry count above which a cost warning is printed.
const COST_WARNING: u128 = 100_000;

#[derive(Parser)]
#[command(
    name = "sigtensor",
    version,
    about = "Exact signature tensors of piecewise linear paths"
)]
struct Cli {
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Add a lossy decimal copy of the result.
    #[arg(long, global = true)]
    float: bool,
    /// Lift the limits d ≤ 6 and K ≤ 8.
    #[arg(long, global = true)]
    allow_large: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Truncated signature of a path (JSON) or a time series (CSV).
    Signature(SignatureArgs),
    /// Shuffle product of two words.
    Shuffle {
        #[arg(long)]
        w1: String,
        #[arg(long)]
        w2: String,
    },
    /// Signature from a log-signature.
    Exp {
        #[arg(long)]
        logsig: PathBuf,
        /// Defaults to the log-signature's own truncation level.
        #[arg(long)]
        level: Option<usize>,
    },
    /// Log-signature of a signature.
    Log {
        #[arg(long)]
        sig: PathBuf,
    },
    /// Explicit decomposition of one signature level, with a rank certificate.
    Decompose {
        #[arg(long)]
        path: PathBuf,
        #[arg(long, default_value_t = 4)]
        level: usize,
    },
    /// The general upper bound for k-th level signatures of m segments.
    RankBound {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: usize,
    },
    /// Rank certificate for a tensor and a decomposition of it.
    Certify {
        #[arg(long)]
        tensor: PathBuf,
        #[arg(long)]
        witness: PathBuf,
    },
    /// Hyperdeterminant and complex rank of a 2×2×2 tensor.
    Classify222 {
        #[arg(long)]
        tensor: PathBuf,
    },
    /// Symmetric, skew and partial symmetry of a tensor.
    Symmetry {
        #[arg(long)]
        tensor: PathBuf,
    },
    /// The 2×2×2 signature tensor with coordinates x,y,a,b,c.
    Sig222 {
        #[arg(long, allow_hyphen_values = true)]
        params: String,
    },
    /// Mode subspaces and conciseness of each signature level.
    Concise {
        #[arg(long)]
        sig: PathBuf,
        #[arg(long)]
        level: Option<usize>,
    },
    /// Whether a signature looks like that of a pure n-volume path from level k0 on.
    PureVolume {
        #[arg(long)]
        sig: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k0: usize,
    },
    /// Run the seeded property battery.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        size: usize,
    },
}

#[derive(Args)]
struct SignatureArgs {
    #[arg(long, conflicts_with = "csv", required_unless_present = "csv")]
    path: Option<PathBuf>,
    /// One sample per row; increments are differences of consecutive rows.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// The CSV file starts with a header row.
    #[arg(long, requires = "csv")]
    header: bool,
    #[arg(long, default_value_t = 4)]
    level: usize,
}

/// What a command produced: the payload, optional certificates and whether
/// its checks passed.
struct Outcome {
    inputs: Value,
    result: Value,
    certificates: Option<Value>,
    passed: bool,
}

impl Outcome {
    fn new(inputs: Value, result: Value) -> Self {
        Self {
            inputs,
            result,
            certificates: None,
            passed: true,
        }
    }
}

fn display(p: &FsPath) -> String {
    p.display().to_string()
}

/// Enforce the size limits and warn about large levels.
fn guard(dim: usize, level: usize, allow_large: bool) -> Result<()> {
    if !allow_large && (dim > MAX_DIM || level > MAX_LEVEL) {
        return Err(Error::Precondition(format!(
            "d = {dim}, K = {level} exceeds the limits d ≤ {MAX_DIM}, K ≤ {MAX_LEVEL}; pass --allow-large to proceed"
        ))
        .into());
    }
    let entries = (dim as u128).checked_pow(level as u32).unwrap_or(u128::MAX);
    if entries > COST_WARNING {
        eprintln!("warning: level {level} in dimension {dim} has {entries} entries; expect a long run");
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<Outcome> {
    let large = cli.allow_large;
    Ok(match &cli.command {
        Command::Signature(args) => {
            let (path, source) = match (&args.path, &args.csv) {
                (Some(p), _) => (read_json::<Path>(p)?, json!({ "path": display(p) })),
                (None, Some(c)) => {
                    let samples = read_time_series_csv(c, args.header)?;
                    (
                        time_series_to_path(&samples)?,
                        json!({ "csv": display(c), "header": args.header }),
                    )
                }
                (None, None) => unreachable!("clap requires --path or --csv"),
            };
            guard(path.dim(), args.level, large)?;
            let mut inputs = source;
            inputs["level"] = json!(args.level);
            Outcome::new(inputs, json!(pwl_signature(&path, args.level)))
        }
        Command::Shuffle { w1, w2 } => {
            let (v, w): (Word, Word) = (w1.parse()?, w2.parse()?);
            Outcome::new(json!({ "w1": w1, "w2": w2 }), json!(shuffle(&v, &w)))
        }
        Command::Exp { logsig, level } => {
            let l: LogSignature = read_json(logsig)?;
            let k = level.unwrap_or(l.max_level());
            if k > l.max_level() {
                return Err(Error::LevelExceeded {
                    needed: k,
                    available: l.max_level(),
                }
                .into());
            }
            guard(l.dim(), k, large)?;
            let sig = exp_log_signature(&l).truncate(k)?;
            Outcome::new(json!({ "logsig": display(logsig), "level": k }), json!(sig))
        }
        Command::Log { sig } => {
            let s: TruncatedSignature = read_json(sig)?;
            guard(s.dim(), s.max_level(), large)?;
            Outcome::new(json!({ "sig": display(sig) }), json!(log_signature(&s)?))
        }
        Command::Decompose { path, level } => {
            let p: Path = read_json(path)?;
            guard(p.dim(), *level, large)?;
            let dec = decompose_path(&p, *level)?;
            let target = pwl_signature(&p, *level).level(*level).clone();
            let cert = certify_rank(&target, &dec)?;
            let mut out = Outcome::new(json!({ "path": display(path), "level": level }), json!(dec));
            out.certificates = Some(json!({ "rank": cert }));
            out
        }
        Command::RankBound { k, m } => Outcome::new(
            json!({ "k": k, "m": m }),
            json!({ "bound": rank_bound_formula(*k, *m) }),
        ),
        Command::Certify { tensor, witness } => {
            let t: Tensor = read_json(tensor)?;
            let w: Decomposition = read_json(witness)?;
            guard(t.dim(), t.order(), large)?;
            let cert = certify_rank(&t, &w)?;
            let mut out = Outcome::new(
                json!({ "tensor": display(tensor), "witness": display(witness) }),
                json!({ "lower": cert.lower, "upper": cert.upper, "status": cert.status }),
            );
            out.certificates = Some(json!({ "rank": cert }));
            out
        }
        Command::Classify222 { tensor } => {
            let t: Tensor = read_json(tensor)?;
            let det = hyperdet_222(&t)?;
            let ranks = (0..3)
                .map(|mode| t.flatten(&[mode]).map(|f| f.rank()))
                .collect::<sigtensor::Result<Vec<_>>>()?;
            Outcome::new(
                json!({ "tensor": display(tensor) }),
                json!({
                    "hyperdeterminant": det.to_string(),
                    "flattening_ranks": ranks,
                    "complex_rank": classify_222_complex_rank(&t)?,
                }),
            )
        }
        Command::Symmetry { tensor } => {
            let t: Tensor = read_json(tensor)?;
            guard(t.dim(), t.order(), large)?;
            let report = symmetry_report(&t)?;
            let mut out = Outcome::new(json!({ "tensor": display(tensor) }), json!(report));
            out.certificates = Some(json!({ "symmetry": report }));
            out
        }
        Command::Sig222 { params } => {
            let p: Sig222Params = params.parse()?;
            let t = sig222_from_params(&p);
            let report = symmetry_report(&t)?;
            let det = hyperdet_222(&t)?;
            let closed = sig222_hyperdet_closed_form(&p);
            let constraints = json!({
                "first_k_minus1": partial_symmetry_constraint(&p, PartialBlock::FirstKMinus1),
                "last_k_minus1": partial_symmetry_constraint(&p, PartialBlock::LastKMinus1),
            });
            let consistent = [PartialBlock::FirstKMinus1, PartialBlock::LastKMinus1]
                .iter()
                .all(|&b| partial_symmetry_constraint(&p, b) == report.partial.contains(&b));
            let mut out = Outcome::new(
                json!({ "params": json!(p) }),
                json!({
                    "tensor": t,
                    "report": report,
                    "constraints": constraints,
                    "hyperdeterminant": det.to_string(),
                    "hyperdeterminant_closed_form": closed.to_string(),
                    "complex_rank": classify_222_complex_rank(&t)?,
                }),
            );
            out.certificates = Some(json!({ "symmetry": report }));
            out.passed = det == closed && consistent;
            out
        }
        Command::Concise { sig, level } => {
            let s: TruncatedSignature = read_json(sig)?;
            let k = level.unwrap_or(s.max_level());
            let s = s.truncate(k)?;
            guard(s.dim(), k, large)?;
            let mut levels = Vec::new();
            for i in 1..=k {
                let t = s.level(i);
                levels.push(json!({
                    "level": i,
                    "mode_subspaces": mode_subspaces(t),
                    "symmetric_conciseness": symmetric_conciseness(t)?,
                    "concise": is_concise(t),
                }));
            }
            let recovered = if k >= 2 { hyperplane_recovery(&s)? } else { None };
            let mut out = Outcome::new(
                json!({ "sig": display(sig), "level": k }),
                json!({ "levels": levels, "confining_subspace": recovered }),
            );
            out.certificates = recovered.map(|w| json!({ "subspace": w }));
            out
        }
        Command::PureVolume { sig, n, k0 } => {
            let s: TruncatedSignature = read_json(sig)?;
            guard(s.dim(), s.max_level(), large)?;
            Outcome::new(
                json!({ "sig": display(sig), "n": n, "k0": k0 }),
                json!({ "pure_volume": pure_volume_check(&s, *n, *k0)? }),
            )
        }
        Command::Verify { seed, size } => {
            let report = verify(*seed, *size);
            let mut out = Outcome::new(json!({ "seed": seed, "size": size }), json!(report));
            out.passed = report.passed;
            out
        }
    })
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Signature(_) => "signature",
        Command::Shuffle { .. } => "shuffle",
        Command::Exp { .. } => "exp",
        Command::Log { .. } => "log",
        Command::Decompose { .. } => "decompose",
        Command::RankBound { .. } => "rank-bound",
        Command::Certify { .. } => "certify",
        Command::Classify222 { .. } => "classify222",
        Command::Symmetry { .. } => "symmetry",
        Command::Sig222 { .. } => "sig222",
        Command::Concise { .. } => "concise",
        Command::PureVolume { .. } => "pure-volume",
        Command::Verify { .. } => "verify",
    }
}

/// Replace every rational string by its nearest `f64`.
fn lossy(v: &Value) -> Value {
    match v {
        Value::String(s) => match parse_scalar(s) {
            Ok(x) => json!(to_f64(&x)),
            Err(_) => v.clone(),
        },
        Value::Array(xs) => Value::Array(xs.iter().map(lossy).collect()),
        Value::Object(m) => Value::Object(m.iter().map(|(k, x)| (k.clone(), lossy(x))).collect()),
        _ => v.clone(),
    }
}

fn emit(cli: &Cli, name: &str, out: &Outcome) -> Result<()> {
    let mut report = json!({
        "command": name,
        "inputs": out.inputs,
        "result": out.result,
        "certificates": out.certificates,
    });
    if cli.float {
        report["lossy_float"] = lossy(&out.result);
    }
    let mut text = to_json_pretty(&report);
    text.push('\n');
    let target = cli
        .out
        .clone()
        .or_else(|| std::env::var_os(OUT_DIR_VAR).map(|dir| PathBuf::from(dir).join(format!("{name}.json"))));
    match target {
        Some(path) => std::fs::write(&path, text)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))
            .with_context(|| "writing the report"),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::Parse(_) | Error::Io(_)) => 3,
        _ => 4,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = command_name(&cli.command);
    let result = run(&cli).and_then(|out| emit(&cli, name, &out).map(|()| out.passed));
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
