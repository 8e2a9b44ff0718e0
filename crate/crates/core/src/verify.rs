//! Experimental harness: confirmation and falsification of embeddings by
//! norm ratios, BBM limits, the interpolation identity and the triviality
//! of the untruncated functional.
//!
//! Bounded / Diverging are threshold heuristics, not proofs.

use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::embeddings::{embeds, embeds_c, embeds_l1loc, sigma_p, EmbedError, EmbeddingVerdict, Status};
use crate::interpolation::{limiting_interp_norm, InterpError, Theta, WeightedLqPair};
use crate::norms::{
    bbm_normalized_norm, besov_seq_norm, log2_lq, trunc_besov_seq_norm, trunc_norm_for, triviality_partial_sums,
    NormError,
};
use crate::params::{canonicalize_descriptor, Exponent, Family, Num, SpaceDescriptor};
use crate::sequences::{all_m_mask, block_of, BlockIndex, ExtremalKind, Layout, WaveletSequence};

/// Default seed; `TRUNC_SPACES_SEED` overrides it in the CLI.
pub const DEFAULT_SEED: u64 = 0x7_2025;

/// log₂ growth at or above which a trace counts as diverging (factor 4).
pub const DIVERGING_LOG2: f64 = 2.0;
/// log₂ growth at or below which a trace counts as bounded (factor 2).
pub const BOUNDED_LOG2: f64 = 1.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TraceVerdict {
    Bounded,
    Diverging,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioTrace {
    pub sizes: Vec<u64>,
    /// dst / src per size (may overflow to ∞; see `log2_ratios`)
    pub ratios: Vec<f64>,
    pub log2_ratios: Vec<f64>,
    /// per-size infimum, when the trace records both sides
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lower_ratios: Option<Vec<f64>>,
    pub verdict: TraceVerdict,
}

impl RatioTrace {
    fn from_log2(sizes: Vec<u64>, log2_ratios: Vec<f64>, verdict: TraceVerdict) -> Self {
        RatioTrace {
            sizes,
            ratios: log2_ratios.iter().map(|l| l.exp2()).collect(),
            log2_ratios,
            lower_ratios: None,
            verdict,
        }
    }
}

fn classify(growth: f64) -> TraceVerdict {
    if growth >= DIVERGING_LOG2 {
        TraceVerdict::Diverging
    } else if growth <= BOUNDED_LOG2 {
        TraceVerdict::Bounded
    } else {
        TraceVerdict::Inconclusive
    }
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum VerifyError {
    #[error("expected verdict {expected:?}, got {got:?} ({condition})")]
    Precondition { expected: Status, got: Status, condition: String },
    #[error("the verdict carries no runnable witness")]
    MissingWitness,
    #[error("no sequence-level proxy for this target: {0}")]
    NoProxy(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error(transparent)]
    Embed(#[from] EmbedError),
    #[error(transparent)]
    Norm(#[from] NormError),
    #[error(transparent)]
    Interp(#[from] InterpError),
}

/// Embedding target: a sequence space or one of the function classes.
#[derive(Clone, Debug, PartialEq)]
pub enum Target {
    Space(SpaceDescriptor),
    L1loc,
    C,
}

fn canonical(x: &SpaceDescriptor) -> Result<SpaceDescriptor, VerifyError> {
    canonicalize_descriptor(x).map(|c| c.desc).map_err(|e| VerifyError::Input(e.to_string()))
}

/// The verdict for src ↪ target.
pub fn verdict_for(src: &SpaceDescriptor, dst: &Target) -> Result<EmbeddingVerdict, VerifyError> {
    Ok(match dst {
        Target::Space(d) => embeds(src, d)?,
        Target::L1loc => embeds_l1loc(src)?,
        Target::C => embeds_c(src)?,
    })
}

/// The sequence space standing in for the target. For L¹_loc this is
/// TB(σ_p, p, t, t, 0) with t = 1, p or 2 (p ≤ 1, 1 < p ≤ 2, p > 2);
/// for C it is TB(0, ∞, 1, 1, 0) = Σ_j sup_m |λ_{j,m}|.
pub fn proxy_space(src: &SpaceDescriptor, dst: &Target) -> Result<SpaceDescriptor, VerifyError> {
    let src = canonical(src)?;
    match dst {
        Target::Space(d) => canonical(d),
        Target::L1loc => {
            if src.family != Family::TB {
                return Err(VerifyError::NoProxy("L¹_loc for TF sources".into()));
            }
            let one = Exponent::int(1);
            let two = Exponent::int(2);
            let t = if src.p.le(&one) {
                one
            } else if src.p.le(&two) {
                src.p.clone()
            } else {
                two
            };
            Ok(SpaceDescriptor::tb(sigma_p(&src.p, src.d), src.p.clone(), t.clone(), t, Num::zero(), src.d))
        }
        Target::C => {
            let one = Exponent::int(1);
            Ok(SpaceDescriptor::tb(Num::zero(), Exponent::Infinity, one.clone(), one, Num::zero(), src.d))
        }
    }
}

fn require(v: &EmbeddingVerdict, expected: Status) -> Result<(), VerifyError> {
    if v.status == expected {
        Ok(())
    } else {
        Err(VerifyError::Precondition { expected, got: v.status, condition: v.condition.clone() })
    }
}

/// Doubling ladder ending at `max_size`, starting at 16 when there is room.
pub fn size_ladder(max_size: u64) -> Vec<u64> {
    let max_size = max_size.max(1);
    let mut start = 16u64.min((max_size / 4).max(1));
    start = start.next_power_of_two();
    let mut out = Vec::new();
    let mut s = start;
    while s <= max_size {
        out.push(s);
        s *= 2;
    }
    out
}

/// Random sparse sequence: levels uniform in [0, level_cap], values
/// log-uniform in [2^{−20}, 2^{20}], positions uniform in [0, min(2^j, box))^d.
pub fn random_sequence(rng: &mut ChaCha8Rng, d: u32, level_cap: u32, box_side: u64, entries: usize) -> WaveletSequence {
    // fixed consumption per entry, so one stream gives matched draws at every size
    let pick = |rng: &mut ChaCha8Rng, n: u64| ((rng.gen::<f64>() * n as f64) as u64).min(n - 1);
    let mut seq = WaveletSequence::new(d);
    while seq.is_empty() {
        for _ in 0..entries {
            let j = pick(rng, level_cap as u64 + 1) as u32;
            let genders = all_m_mask(d) as u64;
            let gg = pick(rng, genders) as u32 + 1;
            let g = if j == 0 { all_m_mask(d) } else { gg };
            let side = if j >= 62 { box_side } else { (1u64 << j).min(box_side.max(1)) };
            let m: Vec<i64> = (0..d).map(|_| pick(rng, side) as i64).collect();
            let v = (rng.gen::<f64>() * 40.0 - 20.0).exp2();
            seq.insert(j, g, m, v).expect("valid random entry");
        }
    }
    seq
}

/// Sup over random sequences of ‖λ‖_dst / ‖λ‖_src along a doubling ladder;
/// the sup at a size covers every sequence drawn at that size or below.
pub fn confirm_embedding(
    src: &SpaceDescriptor,
    dst: &Target,
    trials: usize,
    max_size: u64,
    seed: u64,
) -> Result<RatioTrace, VerifyError> {
    if trials == 0 {
        return Err(VerifyError::Input("trials must be positive".into()));
    }
    require(&verdict_for(src, dst)?, Status::Holds)?;
    let a = canonical(src)?;
    let b = proxy_space(src, dst)?;
    let sizes = size_ladder(max_size);
    let mut logs: Vec<f64> = Vec::with_capacity(sizes.len());
    for &size in &sizes {
        let cap = 63 - size.leading_zeros();
        let mut sup = f64::NEG_INFINITY;
        for t in 0..trials {
            // common random numbers: trial t draws the same stream at every size
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(t as u64);
            let n = rng.gen_range(1..=8);
            let seq = random_sequence(&mut rng, a.d, cap, size, n);
            let lo = trunc_norm_for(&seq, &a)?.value;
            let hi = trunc_norm_for(&seq, &b)?.value;
            if lo > 0.0 {
                sup = sup.max(hi.log2() - lo.log2());
            }
        }
        // sequences admissible at a smaller size are admissible here too
        let prev = logs.last().copied().unwrap_or(f64::NEG_INFINITY);
        logs.push(sup.max(prev));
    }
    let last = logs.len() - 1;
    let quarter = last.saturating_sub(2);
    let verdict = classify(logs[last] - logs[quarter]);
    Ok(RatioTrace::from_log2(sizes, logs, verdict))
}

/// Runs the verdict's witness at each size and records ‖w‖_dst / ‖w‖_src.
pub fn falsify_embedding(src: &SpaceDescriptor, dst: &Target, sizes: &[u64]) -> Result<RatioTrace, VerifyError> {
    let v = verdict_for(src, dst)?;
    require(&v, Status::Fails)?;
    let kind = v.witness_kind.ok_or(VerifyError::MissingWitness)?;
    let a = canonical(src)?;
    let b = proxy_space(src, dst)?;
    falsify_with(&kind, &a, &b, sizes)
}

/// The witness trace for an explicit generator.
pub fn falsify_with(
    kind: &ExtremalKind,
    src: &SpaceDescriptor,
    dst: &SpaceDescriptor,
    sizes: &[u64],
) -> Result<RatioTrace, VerifyError> {
    if sizes.len() < 2 || sizes.windows(2).any(|w| w[0] >= w[1]) || sizes[0] == 0 {
        return Err(VerifyError::Input("sizes must be positive and strictly increasing (≥ 2 of them)".into()));
    }
    let lo = witness_log2_norms(kind, src, sizes)?;
    let hi = witness_log2_norms(kind, dst, sizes)?;
    let logs: Vec<f64> = hi.iter().zip(&lo).map(|(h, l)| h - l).collect();
    let verdict = classify(logs[logs.len() - 1] - logs[0]);
    Ok(RatioTrace::from_log2(sizes.to_vec(), logs, verdict))
}

// ---------------------------------------------------------------------------
// Witness evaluation.
//
// For every block-structured witness the level term 2^{j(s−d/p)}‖λ^j‖_p of a
// space with the witness's δ is a profile value w_j, and the TB block is the
// ℓ_q norm of w over the block. Levels reach 2^{K+1}, far beyond f64 range,
// so blocks past `DIRECT_K` are summed in closed form from the block index.

const DIRECT_K: u32 = 12;

fn gauss_legendre() -> &'static [(f64, f64)] {
    static NODES: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    NODES.get_or_init(|| {
        let n = 24usize;
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let k = k as f64;
                    let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
        }
        out
    })
}

/// w(n) = n^{−σ}(1+log₂ n)^{−τ} with n = 1 + j, plus exact small-level values.
#[derive(Clone, Debug)]
enum Profile {
    Smooth { sigma: f64, tau: f64, spread: Option<Spread> },
    /// one entry per block at j = 2^k (k ≥ 1) and j = 1 (k = 0, block 1)
    Lacunary { eps: f64, eta: f64 },
}

#[derive(Clone, Copy, Debug)]
struct Spread {
    beta: f64,
    eps: f64,
    p: f64,
    d: u32,
}

impl Profile {
    /// log₂ w(n) at n = 2^k·y for the smooth part.
    fn log_w_ky(&self, k: f64, y: f64) -> f64 {
        match *self {
            Profile::Smooth { sigma, tau, .. } => {
                let l = k + y.log2();
                let mut v = -sigma * l;
                if tau != 0.0 {
                    v -= tau * (1.0 + l).log2();
                }
                v
            }
            Profile::Lacunary { .. } => f64::NEG_INFINITY,
        }
    }

    /// Exact log₂ w_j for small levels (−∞ where the witness is zero).
    fn log_w(&self, j: u64) -> f64 {
        match *self {
            Profile::Smooth { spread: Some(sp), .. } => {
                let jf = j as f64;
                let x = jf * sp.d as f64 - sp.beta * (1.0 + jf).log2();
                let log_count = if x > 52.0 { x } else { x.exp2().ceil().max(1.0).log2() };
                (log_count - jf * sp.d as f64) / sp.p + sp.eps * (1.0 + jf).log2()
            }
            Profile::Smooth { .. } => self.log_w_ky(0.0, 1.0 + j as f64),
            Profile::Lacunary { eps, eta } => {
                if j == 1 {
                    0.0
                } else if j.is_power_of_two() {
                    let k = j.trailing_zeros() as f64;
                    -k * eps - eta * (1.0 + k).log2()
                } else {
                    f64::NEG_INFINITY
                }
            }
        }
    }
}

fn inner_exp(e: &Exponent) -> f64 {
    e.to_f64()
}

/// log₂ Σ_{n=2^k}^{2^{k+1}−1} w(n)^e for a smooth profile, k > DIRECT_K:
/// 2^k times a left Riemann sum on [1, 2] with two Euler–Maclaurin terms.
fn smooth_block_power_sum(prof: &Profile, k: u32, e: f64) -> f64 {
    let kf = k as f64;
    let g = |y: f64| prof.log_w_ky(kf, y) * e;
    let g_ref = g(1.0);
    let f = |y: f64| (g(y) - g_ref).exp2();
    let mut integral = 0.0;
    for (x, wt) in gauss_legendre() {
        integral += 0.5 * wt * f(1.5 + 0.5 * x);
    }
    let m = (-kf).exp2();
    let h = 1e-4;
    let d1 = (f(1.0 + h) - f(1.0)) / h;
    let d2 = (f(2.0) - f(2.0 - h)) / h;
    let r = integral + 0.5 * m * (f(1.0) - f(2.0)) + m * m / 12.0 * (d2 - d1);
    g_ref + kf + r.log2()
}

/// log₂ of the ℓ_q norm of w over block k (a TB block or a TF block in cover layout).
fn block_lq(prof: &Profile, k: u32, q: f64) -> f64 {
    let b = BlockIndex { k };
    if k <= DIRECT_K {
        let logs: Vec<f64> = (b.first()..=b.last()).map(|j| prof.log_w(j)).filter(|l| l.is_finite()).collect();
        return log2_lq(&logs, q);
    }
    match *prof {
        Profile::Lacunary { .. } => lacunary_big(prof, k),
        Profile::Smooth { .. } => {
            if q.is_infinite() {
                let kf = k as f64;
                prof.log_w_ky(kf, 1.0).max(prof.log_w_ky(kf, 2.0 - (-kf).exp2()))
            } else {
                smooth_block_power_sum(prof, k, q) / q
            }
        }
    }
}

fn lacunary_big(prof: &Profile, k: u32) -> f64 {
    match *prof {
        Profile::Lacunary { eps, eta } => {
            let kf = k as f64;
            -kf * eps - eta * (1.0 + kf).log2()
        }
        _ => f64::NEG_INFINITY,
    }
}

/// log₂ of the TF block in nested layout: ‖(Σ_{j∈block} (2^{js}|λ_j| χ_{Q_j})^q)^{1/q}‖_p
/// with Q_j = [0, 2^{−j})^d, expressed through w.
fn block_nested_f(prof: &Profile, k: u32, p: f64, q: f64, d: u32) -> f64 {
    let dd = d as f64;
    let keep = 1.0 - (-dd).exp2();
    let b = BlockIndex { k };
    if k <= DIRECT_K {
        let logs: Vec<f64> = (b.first()..=b.last()).map(|j| prof.log_w(j)).collect();
        let w_ref = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if w_ref == f64::NEG_INFINITY {
            return w_ref;
        }
        let n = logs.len();
        let mut acc = 0.0f64;
        let mut c = 0.0f64;
        for (i, l) in logs.iter().enumerate() {
            let rel = (l - w_ref).exp2();
            let mu = if i + 1 == n { 1.0 } else { keep };
            if q.is_infinite() {
                c = (c * (-dd / p).exp2()).max(rel);
                acc += mu * c.powf(p);
            } else {
                c = c * (-dd * q / p).exp2() + rel.powf(q);
                acc += mu * c.powf(p / q);
            }
        }
        return w_ref + acc.log2() / p;
    }
    if let Profile::Lacunary { .. } = prof {
        // a single entry in the block: the nested F value equals w
        return lacunary_big(prof, k);
    }
    let kf = k as f64;
    let first = prof.log_w_ky(kf, 1.0);
    let last = prof.log_w_ky(kf, 2.0 - (-kf).exp2());
    let sum = smooth_block_power_sum(prof, k, p);
    let (scale, transient) = if q.is_infinite() {
        (0.0, 0.0)
    } else {
        let a = dd * q / p;
        let base = 1.0 - (-a).exp2();
        let mut t = 0.0;
        let mut i = 0u32;
        loop {
            let term = 1.0 - (1.0 - (-a * (i as f64 + 1.0)).exp2()).powf(p / q);
            t += term;
            i += 1;
            if term < 1e-18 || i > 10_000 {
                break;
            }
        }
        (-(p / q) * base.log2(), t)
    };
    let x = 1.0 - (p * first - sum).exp2() * transient + ((-dd).exp2() / keep) * (p * last - sum).exp2();
    (keep.log2() + scale + sum + x.log2()) / p
}

/// Per-block log₂ terms (block index, log₂ block value) of a witness in a space.
fn witness_blocks(kind: &ExtremalKind, sp: &SpaceDescriptor, size: u64) -> Result<Vec<(u32, f64)>, VerifyError> {
    let p = sp.p.to_f64();
    let q = inner_exp(&sp.q);
    let tf = match sp.family {
        Family::TB => false,
        Family::TF => true,
        other => return Err(VerifyError::Input(format!("witness evaluation needs TB or TF, got {}", other.tag()))),
    };
    let delta = sp.s.to_f64() - sp.d as f64 / p;
    let same_delta = |wd: f64| -> Result<(), VerifyError> {
        if (wd - delta).abs() <= 1e-9 {
            Ok(())
        } else {
            Err(VerifyError::Input(format!("witness built for δ = {wd}, space has δ = {delta}")))
        }
    };
    let layout_ok = |layout: Layout, wp: f64| -> Result<bool, VerifyError> {
        match layout {
            Layout::Nested => Ok(true),
            Layout::Cover if wp == p => Ok(false),
            Layout::Cover => Err(VerifyError::Input("cover witnesses are evaluated at their own p".into())),
        }
    };
    let smooth = |prof: Profile, k_lo: u32, k_hi: u32, nested: bool| -> Vec<(u32, f64)> {
        (k_lo..=k_hi)
            .map(|k| {
                let v = if tf && nested { block_nested_f(&prof, k, p, q, sp.d) } else { block_lq(&prof, k, q) };
                (k, v)
            })
            .collect()
    };
    let k_of = |s: u64| -> Result<u32, VerifyError> {
        u32::try_from(s).map_err(|_| VerifyError::Input("size too large".into()))
    };
    Ok(match *kind {
        ExtremalKind::Spike { .. } => {
            let j0 = size;
            vec![(block_of(j0).k, j0 as f64 * delta)]
        }
        ExtremalKind::SpatialSpread { eps } => {
            let logs: Vec<f64> = (1..=size).map(|l| -eps * (l as f64).log2()).collect();
            vec![(0, log2_lq(&logs, p))]
        }
        ExtremalKind::LacunaryDiagonal { delta: wd, eps, eta } => {
            same_delta(wd)?;
            let prof = Profile::Lacunary { eps, eta };
            if size == 1 {
                vec![(1, 0.0)]
            } else {
                smooth(prof, 1, k_of(size - 1)?, true)
            }
        }
        ExtremalKind::BlockConstant { delta: wd, layout, p: wp } => {
            same_delta(wd)?;
            let nested = layout_ok(layout, wp)?;
            let prof = Profile::Smooth { sigma: 0.0, tau: 0.0, spread: None };
            let k = k_of(size)?;
            smooth(prof, k, k, nested)
        }
        ExtremalKind::PowerDiagonal { delta: wd, eps, layout, p: wp } => {
            same_delta(wd)?;
            let nested = layout_ok(layout, wp)?;
            let prof = Profile::Smooth { sigma: eps, tau: 0.0, spread: None };
            smooth(prof, 0, k_of(size)?, nested)
        }
        ExtremalKind::LogRefined { delta: wd, bq, beta, layout, p: wp } => {
            same_delta(wd)?;
            let nested = layout_ok(layout, wp)?;
            let prof = Profile::Smooth { sigma: bq, tau: beta, spread: None };
            smooth(prof, 0, k_of(size)?, nested)
        }
        ExtremalKind::SpreadLevel { beta, eps } => {
            if tf || !sp.s.is_zero() {
                return Err(VerifyError::Input("SpreadLevel is evaluated in TB spaces with s = 0".into()));
            }
            let spread = Spread { beta, eps, p, d: sp.d };
            let prof = Profile::Smooth { sigma: beta / p - eps, tau: 0.0, spread: Some(spread) };
            smooth(prof, 0, k_of(size)?, false)
        }
    })
}

/// log₂ of the witness norm in `sp` at each size.
///
/// Size semantics: Spike j0 = size; LacunaryDiagonal and SpatialSpread have
/// `size` entries; BlockConstant fills block `size`; PowerDiagonal,
/// LogRefined and SpreadLevel fill blocks 0..=size.
pub fn witness_log2_norms(kind: &ExtremalKind, sp: &SpaceDescriptor, sizes: &[u64]) -> Result<Vec<f64>, VerifyError> {
    let r = sp.r().to_f64();
    let b = sp.b.to_f64();
    let prefix = matches!(
        kind,
        ExtremalKind::LacunaryDiagonal { .. }
            | ExtremalKind::PowerDiagonal { .. }
            | ExtremalKind::LogRefined { .. }
            | ExtremalKind::SpreadLevel { .. }
    );
    let combine = |blocks: &[(u32, f64)]| {
        let terms: Vec<f64> = blocks.iter().map(|(k, v)| *k as f64 * b + v).collect();
        log2_lq(&terms, r)
    };
    if prefix {
        let top = *sizes.iter().max().unwrap_or(&1);
        let blocks = witness_blocks(kind, sp, top)?;
        Ok(sizes
            .iter()
            .map(|&s| {
                let upto: Vec<(u32, f64)> = match kind {
                    ExtremalKind::LacunaryDiagonal { .. } => {
                        blocks.iter().copied().filter(|(k, _)| (*k as u64) < s.max(2)).collect()
                    }
                    _ => blocks.iter().copied().filter(|(k, _)| (*k as u64) <= s).collect(),
                };
                combine(&upto)
            })
            .collect())
    } else {
        sizes.iter().map(|&s| Ok(combine(&witness_blocks(kind, sp, s)?))).collect()
    }
}

/// Truncation length for `gen_extremal` matching an evaluator size.
pub fn materialize_length(kind: &ExtremalKind, size: u64) -> u32 {
    match kind {
        ExtremalKind::SpreadLevel { .. } => BlockIndex { k: size as u32 }.last() as u32,
        _ => size as u32,
    }
}

// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BbmPoint {
    pub b: f64,
    pub value: f64,
    pub deviation: f64,
}

/// Normalized T* norms along a schedule b → 0⁻ against the classical norm.
pub fn bbm_limit_check(
    seq: &WaveletSequence,
    s: f64,
    p: &Exponent,
    q: &Exponent,
    r: &Exponent,
    schedule: &[f64],
) -> Result<Vec<BbmPoint>, VerifyError> {
    if seq.is_empty() {
        return Err(VerifyError::Input("the sequence must be nonzero".into()));
    }
    if r.is_infinite() {
        return Err(NormError::InfiniteR.into());
    }
    if schedule.iter().any(|b| !(*b < 0.0)) {
        return Err(VerifyError::Input("schedule entries must be negative".into()));
    }
    if schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(VerifyError::Input("schedule must increase towards 0".into()));
    }
    let classical = besov_seq_norm(seq, s, p, q, 0.0).value;
    schedule
        .iter()
        .map(|&b| {
            let v = bbm_normalized_norm(seq, s, p, q, r, b)?.value;
            Ok(BbmPoint { b, value: v, deviation: (v - classical).abs() })
        })
        .collect()
}

/// x_ν = Σ_G ‖λ^{ν,G}‖_p, indexed from ν = 0.
pub fn level_profile(seq: &WaveletSequence, p: f64) -> Vec<f64> {
    let top = seq.max_level().unwrap_or(0) as usize;
    let mut x = vec![0.0; top + 1];
    for (j, norms) in seq.level_gender_norms(p) {
        x[j as usize] = norms.iter().sum();
    }
    x
}

/// Limiting interpolation norm of x_λ (θ = 0, s0 > s, ξ > 0) over the
/// truncated Besov norm.
pub fn interp_ratio(
    seq: &WaveletSequence,
    s: f64,
    s0: f64,
    p: &Exponent,
    q: &Exponent,
    r: &Exponent,
    xi: f64,
) -> Result<f64, VerifyError> {
    let pf = p.to_f64();
    let dp = seq.dim() as f64 / pf;
    if !(s0 > s && xi > 0.0) {
        return Err(VerifyError::Input("need s0 > s and ξ > 0".into()));
    }
    let (theta, pair) = (Theta::Zero, WeightedLqPair::new(s - dp, s0 - dp, q.clone())?);
    let x = level_profile(seq, pf);
    let b = xi - r.reciprocal().to_f64();
    let top = x.len() as u64;
    let lim = limiting_interp_norm(&x, theta, b, r, &pair, Some(4 * top + 64))?;
    let tb = trunc_besov_seq_norm(seq, s, p, q, r, xi).value;
    Ok(lim.norm.value / tb)
}

/// Sup and inf of the interpolation ratio over random sequences with
/// support levels in [0, size) for each size.
#[allow(clippy::too_many_arguments)]
pub fn interp_equiv_check(
    s: f64,
    s0: f64,
    p: &Exponent,
    q: &Exponent,
    r: &Exponent,
    xi: f64,
    sizes: &[u64],
    trials: usize,
    seed: u64,
) -> Result<RatioTrace, VerifyError> {
    if trials == 0 || sizes.is_empty() {
        return Err(VerifyError::Input("need at least one size and one trial".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sup = Vec::new();
    let mut inf = Vec::new();
    for &size in sizes {
        let cap = (size.max(1) - 1) as u32;
        let (mut hi, mut lo) = (f64::NEG_INFINITY, f64::INFINITY);
        for _ in 0..trials {
            let n = rng.gen_range(1..=16);
            let seq = random_sequence(&mut rng, 1, cap, 1 << 20, n);
            let l = interp_ratio(&seq, s, s0, p, q, r, xi)?.log2();
            hi = hi.max(l);
            lo = lo.min(l);
        }
        sup.push(hi);
        inf.push(lo);
    }
    let spread = |v: &[f64]| {
        v.iter().copied().fold(f64::NEG_INFINITY, f64::max) - v.iter().copied().fold(f64::INFINITY, f64::min)
    };
    let verdict = if spread(&sup) < 1.0 && spread(&inf) < 1.0 {
        TraceVerdict::Bounded
    } else {
        TraceVerdict::Inconclusive
    };
    let mut t = RatioTrace::from_log2(sizes.to_vec(), sup, verdict);
    t.lower_ratios = Some(inf.iter().map(|l| l.exp2()).collect());
    Ok(t)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrivialityTrace {
    /// S_J for J = 0..=J_max
    pub sums: Vec<f64>,
    /// first J with 2^J ≥ the top support level
    pub start: u32,
    /// (J, S_{2J}/S_J) for start ≤ J ≤ J_max/2, J ≥ 1
    pub growth: Vec<(u32, f64)>,
    pub verdict: TraceVerdict,
}

/// Partial sums of the untruncated functional; linear growth past the support.
pub fn triviality_check(
    seq: &WaveletSequence,
    s: f64,
    p: &Exponent,
    q: &Exponent,
    r: &Exponent,
    j_max: u32,
) -> Result<TrivialityTrace, VerifyError> {
    if seq.is_empty() {
        return Err(VerifyError::Input("the sequence must be nonzero".into()));
    }
    let sums = triviality_partial_sums(seq, s, p, q, r, j_max);
    let top = seq.max_level().unwrap_or(0) as u64;
    let mut start = 0u32;
    while (1u64 << start) < top {
        start += 1;
    }
    let growth: Vec<(u32, f64)> =
        (start.max(1)..=j_max / 2).map(|j| (j, sums[2 * j as usize] / sums[j as usize])).collect();
    let verdict = if !growth.is_empty() && growth.iter().all(|(_, g)| *g >= 1.5) {
        TraceVerdict::Diverging
    } else {
        TraceVerdict::Inconclusive
    };
    Ok(TrivialityTrace { sums, start, growth, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::trunc_norm_for;
    use crate::params::parse_descriptor;
    use crate::sequences::gen_extremal;

    fn dsl(x: &str) -> SpaceDescriptor {
        parse_descriptor(x).unwrap()
    }

    /// The closed-form evaluator against materialized norms.
    fn cross_check(kind: ExtremalKind, sp: &str, size: u64) {
        let sp = dsl(sp);
        let analytic = witness_log2_norms(&kind, &sp, &[size]).unwrap()[0];
        let seq = match kind {
            ExtremalKind::Spike { .. } => gen_extremal(&ExtremalKind::Spike { j0: size as u32 }, sp.d, 0),
            _ => gen_extremal(&kind, sp.d, materialize_length(&kind, size)),
        }
        .unwrap();
        let direct = trunc_norm_for(&seq, &sp).unwrap().value.log2();
        assert!((analytic - direct).abs() < 1e-9, "{kind:?}: {analytic} vs {direct}");
    }

    #[test]
    fn evaluator_matches_materialized() {
        let nested = Layout::Nested;
        cross_check(ExtremalKind::Spike { j0: 0 }, "TB(s=1,p=2,q=1,r=1,b=1/2)", 9);
        cross_check(ExtremalKind::SpatialSpread { eps: 0.7 }, "TB(s=0,p=1,q=1,r=1,b=1)", 40);
        let lac = ExtremalKind::LacunaryDiagonal { delta: -0.5, eps: 0.25, eta: 0.5 };
        cross_check(lac.clone(), "TB(s=0,p=2,q=1/2,r=2,b=1)", 5);
        cross_check(lac, "TF(s=0,p=2,q=3,r=1,b=1)", 5);
        let bc = ExtremalKind::BlockConstant { delta: 0.5, layout: nested, p: 2.0 };
        cross_check(bc.clone(), "TF(s=1,p=2,q=1,r=1,b=1)", 6);
        cross_check(bc, "TB(s=1,p=2,q=4,r=1,b=-1)", 6);
        let pd = ExtremalKind::PowerDiagonal { delta: 0.0, eps: 0.6, layout: nested, p: 1.0 };
        cross_check(pd.clone(), "TF(s=1,p=1,q=2,r=1/2,b=-1/2)", 5);
        cross_check(pd, "TB(s=0,p=inf,q=1,r=1,b=0)", 5);
        let lr = ExtremalKind::LogRefined { delta: 0.0, bq: 1.0, beta: 0.75, layout: Layout::Cover, p: 2.0 };
        cross_check(lr.clone(), "TF(s=1/2,p=2,q=inf,r=2,b=1)", 3);
        cross_check(lr, "TB(s=1/2,p=2,q=2,r=1,b=-1)", 3);
        let sl = ExtremalKind::SpreadLevel { beta: 1.2, eps: 0.3 };
        cross_check(sl, "TB(s=0,p=3/2,q=3/2,r=3/2,b=0)", 3);
    }

    /// The large-block formulas against direct summation at k just above the cutoff.
    #[test]
    fn big_block_formulas() {
        for prof in [
            Profile::Smooth { sigma: 0.7, tau: 0.0, spread: None },
            Profile::Smooth { sigma: 1.0, tau: 0.8, spread: None },
            Profile::Smooth { sigma: -0.3, tau: 0.4, spread: None },
        ] {
            for (p, q) in [(2.0, 1.0), (1.0, 3.0), (0.5, f64::INFINITY), (3.0, 0.5)] {
                let k = DIRECT_K + 2;
                let b = BlockIndex { k };
                let logs: Vec<f64> = (b.first()..=b.last()).map(|j| prof.log_w(j)).collect();
                let direct_lq = log2_lq(&logs, q);
                assert!((block_lq(&prof, k, q) - direct_lq).abs() < 1e-9);
                // nested F by the recursion used for small blocks
                let dd = 1.0f64;
                let keep = 0.5;
                let w_ref = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let (mut c, mut acc) = (0.0f64, 0.0f64);
                for (i, l) in logs.iter().enumerate() {
                    let rel = (l - w_ref).exp2();
                    let mu = if i + 1 == logs.len() { 1.0 } else { keep };
                    if q.is_infinite() {
                        c = (c * (-dd / p).exp2()).max(rel);
                        acc += mu * c.powf(p);
                    } else {
                        c = c * (-dd * q / p).exp2() + rel.powf(q);
                        acc += mu * c.powf(p / q);
                    }
                }
                let direct_f = w_ref + acc.log2() / p;
                let approx = block_nested_f(&prof, k, p, q, 1);
                assert!((approx - direct_f).abs() < 1e-3, "{prof:?} p={p} q={q}: {approx} vs {direct_f}");
            }
        }
    }

    #[test]
    fn spatial_spread_diverges() {
        let src = dsl("TB(s=0,p=2,q=1,r=1,b=1)");
        let dst = dsl("TB(s=0,p=1,q=1,r=1,b=1)");
        let t = falsify_embedding(&src, &Target::Space(dst), &size_ladder(4096)).unwrap();
        assert_eq!(t.verdict, TraceVerdict::Diverging);
    }

    #[test]
    fn lacunary_diverges() {
        let src = dsl("TB(s=1,p=2,q=1,r=1,b=1/4)");
        let dst = dsl("TB(s=1,p=2,q=2,r=1,b=1/2)");
        let t = falsify_embedding(&src, &Target::Space(dst), &size_ladder(4096)).unwrap();
        assert_eq!(t.verdict, TraceVerdict::Diverging);
    }

    #[test]
    fn confirm_reflexive_and_preconditions() {
        let a = dsl("TB(s=1,p=2,q=1,r=1,b=1)");
        let t = confirm_embedding(&a, &Target::Space(a.clone()), 4, 256, 1).unwrap();
        assert!(t.log2_ratios.iter().all(|l| l.abs() < 1e-12));
        assert_eq!(t.verdict, TraceVerdict::Bounded);
        assert!(confirm_embedding(&a, &Target::Space(a.clone()), 0, 256, 1).is_err());
        let b = dsl("TB(s=0,p=2,q=5,r=7,b=-3)");
        let t = confirm_embedding(&a, &Target::Space(b.clone()), 8, 1024, 2).unwrap();
        assert_eq!(t.verdict, TraceVerdict::Bounded);
        assert!(matches!(
            falsify_embedding(&a, &Target::Space(b), &[16, 32]),
            Err(VerifyError::Precondition { .. })
        ));
    }

    #[test]
    fn bbm_spike_exact() {
        let mut seq = WaveletSequence::new(1);
        seq.push(0, vec![0], 1.0).unwrap();
        let e = |x: i64| Exponent::int(x);
        let pts = bbm_limit_check(&seq, 0.5, &e(2), &e(1), &e(3), &[-0.5, -0.1, -0.01]).unwrap();
        assert!(pts.iter().all(|p| p.deviation < 1e-12));
        assert!(bbm_limit_check(&WaveletSequence::new(1), 0.5, &e(2), &e(1), &e(3), &[-0.1]).is_err());
    }

    #[test]
    fn triviality_spike() {
        let mut seq = WaveletSequence::new(1);
        seq.push(5, vec![0], 1.0).unwrap();
        let e = |x: i64| Exponent::int(x);
        let t = triviality_check(&seq, 0.0, &e(2), &e(2), &e(1), 16).unwrap();
        assert_eq!(t.start, 3);
        assert_eq!(t.sums[2], 0.0);
        assert!(t.sums[3] > 0.0);
        assert_eq!(t.verdict, TraceVerdict::Diverging);
    }
}
