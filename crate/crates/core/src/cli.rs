//! Command-line front end. `run` does the work; the binary only prints.

use std::fs;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use thiserror::Error;

use crate::embeddings::{embeds, embeds_lorentz, Status};
use crate::gm::{gm_check, gm_lip_norm_periodic, gm_trunc_besov_norm_periodic};
use crate::norms::{lz_seq_norm, trunc_lorentz_seq_norm, trunc_norm_for, NormValue};
use crate::params::{
    canonicalize_descriptor, dual_descriptor, lift_descriptor, parse_descriptor, Exponent, Family, Num,
    SpaceDescriptor,
};
use crate::sequences::{ScalarSequence, WaveletSequence};
use crate::verify::{
    bbm_limit_check, confirm_embedding, falsify_embedding, interp_equiv_check, size_ladder, verdict_for, RatioTrace,
    Target, TraceVerdict, DEFAULT_SEED,
};

pub const SEED_ENV: &str = "TRUNC_SPACES_SEED";

const HEURISTIC: &str = "heuristic verdict: Bounded/Diverging thresholds (×2 / ×4 in the ratio) are engineering \
                         choices, not quantified constants";

#[derive(Parser, Debug)]
#[command(name = "trunc-spaces", version, about = "Truncated Besov / Triebel-Lizorkin sequence spaces")]
pub struct Cli {
    /// Print machine-readable JSON
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Norm of a sequence file in a space
    Norm {
        #[arg(long)]
        space: String,
        /// wavelet sequence JSON (scalar sequence JSON for Lorentz families)
        #[arg(long)]
        seq: String,
    },
    /// Embedding verdict with its condition and citation
    Embed {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, value_name = "holds")]
        expect: Option<Expect>,
    },
    /// Dual space descriptor
    Dual {
        #[arg(long)]
        space: String,
    },
    /// Shift smoothness by −sigma
    Lift {
        #[arg(long)]
        space: String,
        #[arg(long, allow_hyphen_values = true)]
        sigma: String,
    },
    /// Canonical truncated form of a classical space
    Canon {
        #[arg(long)]
        space: String,
    },
    /// Norm ratios on the verdict's witness family
    Falsify {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, default_value_t = 4096)]
        max_size: u64,
        #[arg(long, value_name = "holds")]
        expect: Option<Expect>,
    },
    /// Sup of norm ratios over random sequences
    Confirm {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, default_value_t = 32)]
        trials: usize,
        #[arg(long, default_value_t = 4096)]
        max_size: u64,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_name = "holds")]
        expect: Option<Expect>,
    },
    /// Normalized T* norms along b → 0⁻
    Bbm {
        #[arg(long)]
        seq: String,
        #[command(flatten)]
        params: SeqParams,
        /// comma-separated negative b values, increasing (default −2^{−k}, k = 1..10)
        #[arg(long, allow_hyphen_values = true)]
        schedule: Option<String>,
    },
    /// Limiting interpolation norm over the truncated Besov norm on random sequences
    InterpCheck {
        #[command(flatten)]
        params: SeqParams,
        #[arg(long, allow_hyphen_values = true)]
        s0: String,
        #[arg(long)]
        xi: String,
        #[arg(long, default_value_t = 1024)]
        max_size: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// General monotone sequences
    #[command(subcommand)]
    Gm(GmCommand),
    /// Verdict plus the matching harness trace
    Report {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, default_value_t = 32)]
        trials: usize,
        #[arg(long, default_value_t = 4096)]
        max_size: u64,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Subcommand, Debug)]
pub enum GmCommand {
    /// GM block-variation constant up to a horizon
    Check {
        /// scalar sequence JSON; otherwise n^{−α}(ln(n+1))^{−β}
        #[arg(long)]
        seq: Option<String>,
        #[arg(long, default_value = "1")]
        alpha: String,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        beta: String,
        #[arg(long, default_value_t = 1 << 16)]
        horizon: u64,
    },
    /// Periodic GM formula from samples a_{2^ν} (JSON array)
    Norm {
        #[arg(long)]
        space: String,
        #[arg(long)]
        samples: String,
    },
}

#[derive(Args, Debug)]
pub struct Pair {
    #[arg(long)]
    pub from: String,
    /// descriptor, `L1loc` or `C`
    #[arg(long)]
    pub to: String,
}

#[derive(Args, Debug)]
pub struct SeqParams {
    #[arg(long, allow_hyphen_values = true)]
    pub s: String,
    #[arg(long)]
    pub p: String,
    #[arg(long)]
    pub q: String,
    #[arg(long)]
    pub r: String,
}

#[derive(clap::ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Expect {
    Holds,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {msg}")]
    Io { path: String, msg: String },
}

impl CliError {
    /// Usage and input errors both exit with 2.
    pub fn exit_code(&self) -> i32 {
        2
    }
}

/// Rendered output and exit code.
#[derive(Debug)]
pub struct Output {
    pub text: String,
    pub code: i32,
}

fn usage<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Usage(e.to_string())
}

fn desc(text: &str) -> Result<SpaceDescriptor, CliError> {
    parse_descriptor(text).map_err(usage)
}

fn target(text: &str) -> Result<Target, CliError> {
    match text.trim() {
        "L1loc" | "L1_loc" => Ok(Target::L1loc),
        "C" => Ok(Target::C),
        t => Ok(Target::Space(desc(t)?)),
    }
}

fn real(text: &str, name: &str) -> Result<f64, CliError> {
    Num::parse(text).map(|n| n.to_f64()).map_err(|e| usage(format!("--{name}: {e}")))
}

fn exponent(text: &str, name: &str) -> Result<Exponent, CliError> {
    Exponent::parse(text).map_err(|e| usage(format!("--{name}: {e}")))
}

fn read(path: &str) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io { path: path.into(), msg: e.to_string() })
}

fn seed(flag: Option<u64>) -> Result<u64, CliError> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| usage(format!("{SEED_ENV} must be an unsigned integer"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn target_label(t: &Target) -> String {
    match t {
        Target::Space(d) => d.to_string(),
        Target::L1loc => "L1loc".into(),
        Target::C => "C".into(),
    }
}

fn norm_json(v: NormValue) -> Value {
    json!({ "value": v.value, "exact": v.exact })
}

fn trace_json(t: &RatioTrace) -> Value {
    let mut v = serde_json::to_value(t).expect("serializable");
    v["note"] = json!(HEURISTIC);
    v
}

fn trace_text(t: &RatioTrace) -> String {
    let rows: Vec<String> = t
        .sizes
        .iter()
        .zip(&t.log2_ratios)
        .map(|(s, l)| format!("  size {s:>6}  log2 ratio {l:>10.4}"))
        .collect();
    format!("{}\nverdict: {:?} ({HEURISTIC})", rows.join("\n"), t.verdict)
}

fn expect_code(expect: Option<Expect>, failed: bool) -> i32 {
    if expect == Some(Expect::Holds) && failed {
        1
    } else {
        0
    }
}

pub fn run(cli: &Cli) -> Result<Output, CliError> {
    let json = cli.json;
    let out = |value: Value, text: String, code: i32| Output {
        text: if json { serde_json::to_string_pretty(&value).expect("serializable") } else { text },
        code,
    };
    match &cli.command {
        Command::Norm { space, seq } => {
            let d = desc(space)?;
            let raw = read(seq)?;
            let io = |e: crate::sequences::SeqError| CliError::Io { path: seq.clone(), msg: e.to_string() };
            let v = if d.family.is_lorentz() {
                let a = ScalarSequence::from_json(&raw).map_err(io)?;
                let u = d.u.clone().expect("validated");
                match d.family {
                    Family::TLorentz => trunc_lorentz_seq_norm(&a, &u, &d.q, d.r(), d.b.to_f64()),
                    _ => lz_seq_norm(&a, &u, &d.q, d.b.to_f64()),
                }
                .map_err(usage)?
            } else {
                let x = WaveletSequence::from_json(&raw).map_err(io)?;
                if x.dim() != d.d {
                    return Err(usage(format!("sequence dimension {} differs from d={}", x.dim(), d.d)));
                }
                let c = canonicalize_descriptor(&d).map_err(usage)?;
                if c.inner_truncated {
                    return Err(usage("F with b ≠ 0 has no sequence norm here"));
                }
                trunc_norm_for(&x, &c.desc).map_err(usage)?
            };
            Ok(out(norm_json(v), format!("{}", v.value), 0))
        }
        Command::Embed { pair, expect } => {
            let src = desc(&pair.from)?;
            let t = target(&pair.to)?;
            let v = match &t {
                Target::Space(dst) if src.family.is_lorentz() => embeds_lorentz(&src, dst).map_err(usage)?,
                Target::Space(dst) => embeds(&src, dst).map_err(usage)?,
                _ => verdict_for(&src, &t).map_err(usage)?,
            };
            let value = serde_json::to_value(&v).expect("serializable");
            let text = format!(
                "{:?}  [{}]  {}{}",
                v.status,
                v.condition,
                v.citation,
                v.witness.as_ref().map(|w| format!("  witness {w}")).unwrap_or_default()
            );
            Ok(out(value, text, expect_code(*expect, v.status == Status::Fails)))
        }
        Command::Dual { space } => {
            let d = dual_descriptor(&desc(space)?).map_err(usage)?;
            Ok(out(json!({ "dual": d.to_string() }), d.to_string(), 0))
        }
        Command::Lift { space, sigma } => {
            let s = Num::parse(sigma).map_err(|e| usage(format!("--sigma: {e}")))?;
            let d = lift_descriptor(&desc(space)?, &s).map_err(usage)?;
            Ok(out(json!({ "lifted": d.to_string() }), d.to_string(), 0))
        }
        Command::Canon { space } => {
            let c = canonicalize_descriptor(&desc(space)?).map_err(usage)?;
            let text = if c.inner_truncated {
                format!("{} (inner-truncated: no sequence form)", c.desc)
            } else {
                c.desc.to_string()
            };
            Ok(out(json!({ "canonical": c.desc.to_string(), "inner_truncated": c.inner_truncated }), text, 0))
        }
        Command::Falsify { pair, max_size, expect } => {
            let src = desc(&pair.from)?;
            let t = target(&pair.to)?;
            let tr = falsify_embedding(&src, &t, &size_ladder(*max_size)).map_err(usage)?;
            let value = json!({ "from": src.to_string(), "to": target_label(&t), "trace": trace_json(&tr) });
            Ok(out(value, trace_text(&tr), expect_code(*expect, tr.verdict == TraceVerdict::Diverging)))
        }
        Command::Confirm { pair, trials, max_size, seed: s, expect } => {
            let src = desc(&pair.from)?;
            let t = target(&pair.to)?;
            let sd = seed(*s)?;
            let tr = confirm_embedding(&src, &t, *trials, *max_size, sd).map_err(usage)?;
            let value =
                json!({ "from": src.to_string(), "to": target_label(&t), "seed": sd, "trace": trace_json(&tr) });
            Ok(out(value, trace_text(&tr), expect_code(*expect, tr.verdict == TraceVerdict::Diverging)))
        }
        Command::Bbm { seq, params, schedule } => {
            let x = WaveletSequence::from_json(&read(seq)?)
                .map_err(|e| CliError::Io { path: seq.clone(), msg: e.to_string() })?;
            let sched: Vec<f64> = match schedule {
                Some(list) => list.split(',').map(|b| real(b.trim(), "schedule")).collect::<Result<_, _>>()?,
                None => (1..=10).map(|k| -(-(k as f64)).exp2()).collect(),
            };
            let pts = bbm_limit_check(
                &x,
                real(&params.s, "s")?,
                &exponent(&params.p, "p")?,
                &exponent(&params.q, "q")?,
                &exponent(&params.r, "r")?,
                &sched,
            )
            .map_err(usage)?;
            let text: Vec<String> =
                pts.iter().map(|p| format!("b={:<14} value={:<22} deviation={:e}", p.b, p.value, p.deviation)).collect();
            Ok(out(json!({ "points": pts }), text.join("\n"), 0))
        }
        Command::InterpCheck { params, s0, xi, max_size, trials, seed: s } => {
            let sd = seed(*s)?;
            let tr = interp_equiv_check(
                real(&params.s, "s")?,
                real(s0, "s0")?,
                &exponent(&params.p, "p")?,
                &exponent(&params.q, "q")?,
                &exponent(&params.r, "r")?,
                real(xi, "xi")?,
                &size_ladder(*max_size),
                *trials,
                sd,
            )
            .map_err(usage)?;
            Ok(out(json!({ "seed": sd, "trace": trace_json(&tr) }), trace_text(&tr), 0))
        }
        Command::Gm(GmCommand::Check { seq, alpha, beta, horizon }) => {
            let a = match seq {
                Some(path) => ScalarSequence::from_json(&read(path)?)
                    .map_err(|e| CliError::Io { path: path.clone(), msg: e.to_string() })?,
                None => ScalarSequence::power(real(alpha, "alpha")?, real(beta, "beta")?, 2 * *horizon),
            };
            let rep = gm_check(&a, *horizon);
            let text = format!(
                "GM within horizon {}: {} (constant {})",
                rep.horizon, rep.is_gm, rep.constant
            );
            Ok(out(serde_json::to_value(&rep).expect("serializable"), text, 0))
        }
        Command::Gm(GmCommand::Norm { space, samples }) => {
            let d = desc(space)?;
            let raw = read(samples)?;
            let a: Vec<f64> =
                serde_json::from_str(&raw).map_err(|e| CliError::Io { path: samples.clone(), msg: e.to_string() })?;
            let (s, b) = (d.s.to_f64(), d.b.to_f64());
            let v = match d.family {
                Family::TB => gm_trunc_besov_norm_periodic(&a, s, &d.p, &d.q, d.r(), b),
                Family::Lip => gm_lip_norm_periodic(&a, s, &d.p, &d.q, b),
                f => return Err(usage(format!("gm norm takes TB or Lip, got {}", f.tag()))),
            }
            .map_err(usage)?;
            Ok(out(norm_json(v), format!("{}", v.value), 0))
        }
        Command::Report { pair, trials, max_size, seed: s } => {
            let src = desc(&pair.from)?;
            let t = target(&pair.to)?;
            let v = verdict_for(&src, &t).map_err(usage)?;
            let sd = seed(*s)?;
            let tr = match v.status {
                Status::Holds => Some(confirm_embedding(&src, &t, *trials, *max_size, sd)),
                Status::Fails => Some(falsify_embedding(&src, &t, &size_ladder(*max_size))),
                Status::UnknownPerPaper => None,
            };
            let (trace, agrees) = match &tr {
                Some(Ok(x)) => {
                    let want = if v.status == Status::Holds { TraceVerdict::Bounded } else { TraceVerdict::Diverging };
                    (trace_json(x), Some(x.verdict == want))
                }
                Some(Err(e)) => (json!({ "error": e.to_string() }), None),
                None => (Value::Null, None),
            };
            let value = json!({
                "from": src.to_string(),
                "to": target_label(&t),
                "verdict": v,
                "seed": sd,
                "trace": trace,
                "harness_agrees": agrees,
            });
            let text = format!(
                "{} -> {}\n{:?}  [{}]  {}\n{}",
                src,
                target_label(&t),
                v.status,
                v.condition,
                v.citation,
                match &tr {
                    Some(Ok(x)) => trace_text(x),
                    Some(Err(e)) => format!("harness: {e}"),
                    None => "no harness run for UnknownPerPaper".into(),
                }
            );
            Ok(out(value, text, 0))
        }
    }
}
