//! Sequence-space (quasi-)norms.
//!
//! Everything is accumulated in the log₂ domain: block weights such as
//! 2^{kbr} and level weights 2^{j(s−d/p)} leave the double range quickly.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::params::Exponent;
use crate::sequences::{block_of, rearranged_values, BlockIndex, ScalarSequence, WaveletSequence};

/// A non-negative extended real plus an exactness flag. `exact` is set when
/// the value is a plain finite sum or supremum (every exponent equal to 1 or ∞).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormValue {
    pub value: f64,
    pub exact: bool,
}

impl NormValue {
    pub fn zero() -> Self {
        NormValue { value: 0.0, exact: true }
    }

    fn from_log2(l: f64, exact: bool) -> Self {
        NormValue { value: if l == f64::NEG_INFINITY { 0.0 } else { l.exp2() }, exact }
    }
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum NormError {
    #[error("F-type norms require p < ∞")]
    InfiniteP,
    #[error("this norm requires r < ∞")]
    InfiniteR,
    #[error("Lorentz norms require u < ∞")]
    InfiniteU,
}

pub(crate) fn ex(e: &Exponent) -> f64 {
    e.to_f64()
}

fn is_plain(xs: &[f64]) -> bool {
    xs.iter().all(|x| *x == 1.0 || x.is_infinite())
}

/// Compensated summation.
#[derive(Clone, Copy, Debug, Default)]
pub struct Kahan {
    sum: f64,
    c: f64,
}

impl Kahan {
    pub fn add(&mut self, x: f64) {
        let y = x - self.c;
        let t = self.sum + y;
        self.c = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum
    }
}

/// log₂ of (Σ 2^{q t_i})^{1/q}; the maximum when q = ∞. Empty input gives −∞.
pub fn log2_lq(terms: &[f64], q: f64) -> f64 {
    let m = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY || q.is_infinite() || m == f64::INFINITY {
        return m;
    }
    let mut acc = Kahan::default();
    for t in terms {
        acc.add((q * (t - m)).exp2());
    }
    m + acc.value().log2() / q
}

/// log₂ of Σ 2^{t_i}.
pub fn log2_sum(terms: &[f64]) -> f64 {
    log2_lq(terms, 1.0)
}

/// ℓ_p (quasi-)norm of a finite list.
pub fn lp_norm(vals: &[f64], p: f64) -> f64 {
    let logs: Vec<f64> = vals.iter().filter(|v| **v != 0.0).map(|v| v.abs().log2()).collect();
    let l = log2_lq(&logs, p);
    if l == f64::NEG_INFINITY {
        0.0
    } else {
        l.exp2()
    }
}

/// `(j, G) ↦ log₂ ‖λ^{j,G}‖_p`.
fn level_gender_log_norms(seq: &WaveletSequence, p: f64) -> Vec<(u32, f64)> {
    let mut acc: HashMap<(u32, u32), Vec<f64>> = HashMap::new();
    for (k, v) in seq.entries() {
        acc.entry((k.j, k.g)).or_default().push(v.abs().log2());
    }
    let mut out: Vec<(u32, f64)> = acc.into_iter().map(|((j, _), logs)| (j, log2_lq(&logs, p))).collect();
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out
}

/// log₂ of 2^{j(s−d/p)} ‖λ^{j,G}‖_p for every (j, G).
fn weighted_level_terms(seq: &WaveletSequence, s: f64, p: f64) -> Vec<(u32, f64)> {
    let dp = seq.dim() as f64 / p;
    level_gender_log_norms(seq, p)
        .into_iter()
        .map(|(j, l)| (j, l + j as f64 * (s - dp)))
        .collect()
}

/// ‖λ‖ of b^{s,ξ}_{p,q}: level weight 2^{j(s−d/p)}(1+j)^ξ.
pub fn besov_seq_norm(seq: &WaveletSequence, s: f64, p: &Exponent, q: &Exponent, xi: f64) -> NormValue {
    let (p, q) = (ex(p), ex(q));
    let terms: Vec<f64> = weighted_level_terms(seq, s, p)
        .into_iter()
        .map(|(j, t)| t + xi * (1.0 + j as f64).log2())
        .collect();
    NormValue::from_log2(log2_lq(&terms, q), is_plain(&[p, q]))
}

/// Per-block log₂ inner norms `(k, log₂ (Σ_{j∈block k} …)^{1/q})`.
fn block_inner_terms(seq: &WaveletSequence, s: f64, p: f64, q: f64) -> Vec<(u32, f64)> {
    let mut blocks: HashMap<u32, Vec<f64>> = HashMap::new();
    for (j, t) in weighted_level_terms(seq, s, p) {
        blocks.entry(block_of(j as u64).k).or_default().push(t);
    }
    let mut out: Vec<(u32, f64)> = blocks.into_iter().map(|(k, ts)| (k, log2_lq(&ts, q))).collect();
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out
}

/// ‖λ‖ of T^b_r b^s_{p,q}.
pub fn trunc_besov_seq_norm(
    seq: &WaveletSequence,
    s: f64,
    p: &Exponent,
    q: &Exponent,
    r: &Exponent,
    b: f64,
) -> NormValue {
    let (p, q, r) = (ex(p), ex(q), ex(r));
    let outer: Vec<f64> = block_inner_terms(seq, s, p, q)
        .into_iter()
        .map(|(k, t)| t + k as f64 * b)
        .collect();
    NormValue::from_log2(log2_lq(&outer, r), is_plain(&[p, q, r]))
}

/// ‖λ‖ of T*_r b^s_{p,q}: tails j ≥ k weighted by (1+k)^{−1}.
pub fn star_besov_seq_norm(
    seq: &WaveletSequence,
    s: f64,
    p: &Exponent,
    q: &Exponent,
    r: &Exponent,
) -> Result<NormValue, NormError> {
    let (p, q, r) = (ex(p), ex(q), ex(r));
    if r.is_infinite() {
        return Err(NormError::InfiniteR);
    }
    let terms = weighted_level_terms(seq, s, p);
    let top = match seq.max_level() {
        Some(t) => t,
        None => return Ok(NormValue::zero()),
    };
    let outer: Vec<f64> = (0..=top)
        .map(|k| {
            let tail: Vec<f64> = terms.iter().filter(|(j, _)| *j >= k).map(|(_, t)| *t).collect();
            log2_lq(&tail, q) - (1.0 + k as f64).log2() / r
        })
        .collect();
    Ok(NormValue::from_log2(log2_lq(&outer, r), false))
}

/// Exact integral of a piecewise-constant dyadic integrand.
///
/// Each cube Q_{j,m} carries log₂ c_{j,m}; the integrand at x combines the
/// values of all cubes containing x (sum, or max when `use_max`). Returns
/// log₂ ∫ g^e over ℝ^d.
pub fn dyadic_integral_log2(d: u32, cubes: &[(u32, Vec<i64>, f64)], e: f64, use_max: bool) -> f64 {
    if cubes.is_empty() {
        return f64::NEG_INFINITY;
    }
    let lmax = cubes.iter().map(|c| c.2).fold(f64::NEG_INFINITY, f64::max);
    let mut own: HashMap<(u32, Vec<i64>), f64> = HashMap::new();
    for (j, m, l) in cubes {
        let v = (l - lmax).exp2();
        let slot = own.entry((*j, m.clone())).or_insert(0.0);
        *slot = if use_max { slot.max(v) } else { *slot + v };
    }
    let mut children: HashMap<(u32, Vec<i64>), Vec<Vec<i64>>> = HashMap::new();
    let mut roots: Vec<Vec<i64>> = Vec::new();
    let mut seen: std::collections::HashSet<(u32, Vec<i64>)> = std::collections::HashSet::new();
    for (j, m) in own.keys() {
        let mut cj = *j;
        let mut cm = m.clone();
        while seen.insert((cj, cm.clone())) {
            if cj == 0 {
                roots.push(cm.clone());
                break;
            }
            let pm: Vec<i64> = cm.iter().map(|x| x >> 1).collect();
            children.entry((cj - 1, pm.clone())).or_default().push(cm.clone());
            cj -= 1;
            cm = pm;
        }
    }
    let full = 1u64 << d;
    let mut total = Kahan::default();
    // explicit stack: (level, position, accumulated value)
    let mut stack: Vec<(u32, Vec<i64>, f64)> = roots
        .into_iter()
        .map(|m| {
            let a = own.get(&(0, m.clone())).copied().unwrap_or(0.0);
            (0, m, a)
        })
        .collect();
    while let Some((j, m, acc)) = stack.pop() {
        let kids = children.get(&(j, m.clone()));
        let nkids = kids.map_or(0, |k| k.len()) as u64;
        let ge = if acc > 0.0 { acc.powf(e) } else { 0.0 };
        if nkids == 0 {
            total.add(ge * (-(j as f64) * d as f64).exp2());
            continue;
        }
        let free = (full - nkids) as f64;
        total.add(free * ge * (-((j + 1) as f64) * d as f64).exp2());
        for km in kids.unwrap() {
            let c = own.get(&(j + 1, km.clone())).copied().unwrap_or(0.0);
            let a = if use_max { acc.max(c) } else { acc + c };
            stack.push((j + 1, km.clone(), a));
        }
    }
    let t = total.value();
    if t <= 0.0 {
        return f64::NEG_INFINITY;
    }
    // undo the scaling: ∫ (M g̃)^e = M^e ∫ g̃^e
    e * lmax + t.log2()
}

/// log₂ ‖λ‖_{f^s_{p,q}} restricted to the given entries.
fn f_log2(seq: &WaveletSequence, s: f64, p: f64, q: f64) -> f64 {
    let d = seq.dim();
    let (e, use_max) = if q.is_infinite() { (p, true) } else { (p / q, false) };
    let qq = if q.is_infinite() { 1.0 } else { q };
    let cubes: Vec<(u32, Vec<i64>, f64)> = seq
        .entries()
        .map(|(k, v)| (k.j, k.m.clone(), qq * (k.j as f64 * s + v.abs().log2())))
        .collect();
    let integral = dyadic_integral_log2(d, &cubes, e, use_max);
    integral / p
}

/// ‖λ‖ of f^s_{p,q} via exact dyadic integration.
pub fn f_seq_norm(seq: &WaveletSequence, s: f64, p: &Exponent, q: &Exponent) -> Result<NormValue, NormError> {
    let (p, q) = (ex(p), ex(q));
    if p.is_infinite() {
        return Err(NormError::InfiniteP);
    }
    Ok(NormValue::from_log2(f_log2(seq, s, p, q), is_plain(&[p, q])))
}

/// `(k, log₂ ‖block_k‖_{f})` for every non-empty block.
fn f_block_terms(seq: &WaveletSequence, s: f64, p: f64, q: f64) -> Vec<(u32, f64)> {
    let top = match seq.max_level() {
        Some(t) => t,
        None => return Vec::new(),
    };
    let mut out = Vec::new();
    let mut k = 0u32;
    loop {
        let b = BlockIndex { k };
        if b.first() > top as u64 {
            break;
        }
        let part = seq.restrict_levels(b.first() as u32, b.last().min(u32::MAX as u64) as u32);
        if !part.is_empty() {
            out.push((k, f_log2(&part, s, p, q)));
        }
        k += 1;
    }
    out
}

/// ‖λ‖ of T^b_r f^s_{p,q}.
pub fn trunc_f_seq_norm(
    seq: &WaveletSequence,
    s: f64,
    p: &Exponent,
    q: &Exponent,
    r: &Exponent,
    b: f64,
) -> Result<NormValue, NormError> {
    let (p, q, r) = (ex(p), ex(q), ex(r));
    if p.is_infinite() {
        return Err(NormError::InfiniteP);
    }
    let outer: Vec<f64> = f_block_terms(seq, s, p, q)
        .into_iter()
        .map(|(k, t)| t + k as f64 * b)
        .collect();
    Ok(NormValue::from_log2(log2_lq(&outer, r), is_plain(&[p, q, r])))
}

/// ‖λ‖ of T*_r f^s_{p,q}: tails j ≥ 2^k − 1 with unit weights.
pub fn star_f_seq_norm(
    seq: &WaveletSequence,
    s: f64,
    p: &Exponent,
    q: &Exponent,
    r: &Exponent,
) -> Result<NormValue, NormError> {
    let (p, q, r) = (ex(p), ex(q), ex(r));
    if p.is_infinite() {
        return Err(NormError::InfiniteP);
    }
    if r.is_infinite() {
        return Err(NormError::InfiniteR);
    }
    let top = match seq.max_level() {
        Some(t) => t as u64,
        None => return Ok(NormValue::zero()),
    };
    let mut outer = Vec::new();
    let mut k = 0u32;
    while (BlockIndex { k }).first() <= top {
        let tail = seq.restrict_levels((BlockIndex { k }).first() as u32, u32::MAX);
        outer.push(f_log2(&tail, s, p, q));
        k += 1;
    }
    Ok(NormValue::from_log2(log2_lq(&outer, r), is_plain(&[p, q, r])))
}

/// The truncated-space norm of a descriptor's family on a sequence
/// (TB → T^b_r b, TF → T^b_r f).
pub fn trunc_norm_for(
    seq: &WaveletSequence,
    desc: &crate::params::SpaceDescriptor,
) -> Result<NormValue, NormError> {
    use crate::params::Family;
    let s = desc.s.to_f64();
    let b = desc.b.to_f64();
    match desc.family {
        Family::TF => trunc_f_seq_norm(seq, s, &desc.p, &desc.q, desc.r(), b),
        Family::TstarB => star_besov_seq_norm(seq, s, &desc.p, &desc.q, desc.r()),
        Family::TstarF => star_f_seq_norm(seq, s, &desc.p, &desc.q, desc.r()),
        Family::B => Ok(besov_seq_norm(seq, s, &desc.p, &desc.q, b)),
        Family::F if b == 0.0 => f_seq_norm(seq, s, &desc.p, &desc.q),
        _ => {
            let r = desc.r.clone().unwrap_or_else(|| desc.q.clone());
            Ok(trunc_besov_seq_norm(seq, s, &desc.p, &desc.q, &r, b))
        }
    }
}

fn lorentz_terms(a: &ScalarSequence, u: f64, b: f64) -> Vec<(u64, f64)> {
    let star = rearranged_values(a);
    let mut out = Vec::new();
    let mut n = 0u64;
    while n < 64 && (1usize << n) <= star.len() {
        let v = star[(1usize << n) - 1];
        out.push((n, n as f64 / u + b * (1.0 + n as f64).log2() + v.log2()));
        n += 1;
    }
    out
}

/// ‖a‖ of ℓ_{u,q}(log ℓ)_b in dyadic-sample form.
pub fn lz_seq_norm(a: &ScalarSequence, u: &Exponent, q: &Exponent, b: f64) -> Result<NormValue, NormError> {
    let (u, q) = (ex(u), ex(q));
    if u.is_infinite() {
        return Err(NormError::InfiniteU);
    }
    let terms: Vec<f64> = lorentz_terms(a, u, b).into_iter().map(|(_, t)| t).collect();
    Ok(NormValue::from_log2(log2_lq(&terms, q), false))
}

/// ‖a‖ of ℓ_{u,q} in dyadic-sample form.
pub fn lorentz_seq_norm(a: &ScalarSequence, u: &Exponent, q: &Exponent) -> Result<NormValue, NormError> {
    lz_seq_norm(a, u, q, 0.0)
}

/// Full-index form (Σ_n (n^{1/u} a*_n)^q n^{−1})^{1/q}; equivalent to the
/// dyadic form up to constants depending on u, q.
pub fn lorentz_seq_norm_full(a: &ScalarSequence, u: &Exponent, q: &Exponent) -> Result<NormValue, NormError> {
    let (u, q) = (ex(u), ex(q));
    if u.is_infinite() {
        return Err(NormError::InfiniteU);
    }
    let star = rearranged_values(a);
    let terms: Vec<f64> = star
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let n = (i + 1) as f64;
            let w = if q.is_infinite() { 0.0 } else { -n.log2() / q };
            n.log2() / u + v.log2() + w
        })
        .collect();
    Ok(NormValue::from_log2(log2_lq(&terms, q), false))
}

/// ‖a‖ of T^b_r ℓ_{u,q}: blocks of the dyadic index n.
pub fn trunc_lorentz_seq_norm(
    a: &ScalarSequence,
    u: &Exponent,
    q: &Exponent,
    r: &Exponent,
    b: f64,
) -> Result<NormValue, NormError> {
    let (uf, qf, rf) = (ex(u), ex(q), ex(r));
    if uf.is_infinite() {
        return Err(NormError::InfiniteU);
    }
    Ok(NormValue::from_log2(trunc_lorentz_log2(&lorentz_terms(a, uf, 0.0), qf, rf, b), false))
}

/// Truncated combination of `(n, log₂ term_n)` pairs.
pub(crate) fn trunc_lorentz_log2(terms: &[(u64, f64)], q: f64, r: f64, b: f64) -> f64 {
    let mut blocks: Vec<(u32, Vec<f64>)> = Vec::new();
    for (n, t) in terms {
        let k = block_of(*n).k;
        match blocks.last_mut() {
            Some((kk, v)) if *kk == k => v.push(*t),
            _ => blocks.push((k, vec![*t])),
        }
    }
    let outer: Vec<f64> = blocks.into_iter().map(|(k, v)| log2_lq(&v, q) + k as f64 * b).collect();
    log2_lq(&outer, r)
}

/// Partial sums S_J = Σ_{j≤J} (Σ_{ν≤2^j} 2^{ν(s−d/p)q} Σ_G ‖λ^{ν,G}‖_p^q)^{r/q}, J = 0..=j_max.
pub fn triviality_partial_sums(
    seq: &WaveletSequence,
    s: f64,
    p: &Exponent,
    q: &Exponent,
    r: &Exponent,
    j_max: u32,
) -> Vec<f64> {
    let (p, q, r) = (ex(p), ex(q), ex(r));
    let terms = weighted_level_terms(seq, s, p);
    let mut out = Vec::with_capacity(j_max as usize + 1);
    let mut acc = Kahan::default();
    for j in 0..=j_max {
        let lim = if j >= 63 { u64::MAX } else { 1u64 << j };
        let inner: Vec<f64> = terms.iter().filter(|(nu, _)| (*nu as u64) <= lim).map(|(_, t)| *t).collect();
        let l = log2_lq(&inner, q);
        if l > f64::NEG_INFINITY {
            let rr = if r.is_infinite() { 1.0 } else { r };
            acc.add((rr * l).exp2());
        }
        out.push(acc.value());
    }
    out
}

/// Normalized T* norm used for the b → 0⁻ limit:
/// (1 − 2^{br})^{1/r} (Σ_j 2^{jbr}(Σ_{ν≤2^j} …)^{r/q})^{1/r}, summed in closed form past the support.
pub fn bbm_normalized_norm(
    seq: &WaveletSequence,
    s: f64,
    p: &Exponent,
    q: &Exponent,
    r: &Exponent,
    b: f64,
) -> Result<NormValue, NormError> {
    let (p, q, r) = (ex(p), ex(q), ex(r));
    if r.is_infinite() {
        return Err(NormError::InfiniteR);
    }
    let terms = weighted_level_terms(seq, s, p);
    let top = match seq.max_level() {
        Some(t) => t as u64,
        None => return Ok(NormValue::zero()),
    };
    // first j with 2^j ≥ top: from there on the inner sum is the full norm
    let mut jstar = 0u32;
    while (1u64 << jstar) < top {
        jstar += 1;
    }
    let full = log2_lq(&terms.iter().map(|t| t.1).collect::<Vec<_>>(), q);
    let br = b * r;
    let one_minus = -(br * std::f64::consts::LN_2).exp_m1(); // 1 − 2^{br}
    let mut acc = Kahan::default();
    for j in 0..jstar {
        let lim = 1u64 << j;
        let inner: Vec<f64> = terms.iter().filter(|(nu, _)| (*nu as u64) <= lim).map(|(_, t)| *t).collect();
        let l = log2_lq(&inner, q);
        if l > f64::NEG_INFINITY {
            acc.add(one_minus * (j as f64 * br + r * (l - full)).exp2());
        }
    }
    // geometric tail Σ_{j≥j*} 2^{jbr} times (1 − 2^{br})
    acc.add((jstar as f64 * br).exp2());
    Ok(NormValue::from_log2(full + acc.value().log2() / r, false))
}
