//! General monotone sequences: the GM predicate and formula-level norms of
//! GM Fourier series and radial profiles.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::norms::{ex, log2_lq, trunc_lorentz_log2, NormError, NormValue};
use crate::params::Exponent;
use crate::sequences::{block_of, rearranged_values, ScalarSequence};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GMReport {
    /// GM within the tested horizon
    pub is_gm: bool,
    /// sup over n ≤ N of Σ_{k=n}^{2n−1}|Δa_k| / a_n (∞ on a violation)
    pub constant: f64,
    pub violating_n: Option<u64>,
    pub horizon: u64,
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum GmError {
    #[error("requires {0}")]
    Range(&'static str),
    #[error("profile samples do not cover ν ∈ [{lo}, {hi}]")]
    Samples { lo: i64, hi: i64 },
    #[error(transparent)]
    Norm(#[from] NormError),
}

/// Checks Σ_{k=n}^{2n−1}|a_k − a_{k+1}| ≤ C a_n for n = 1..=N.
pub fn gm_check(a: &ScalarSequence, horizon: u64) -> GMReport {
    let n_max = horizon.max(1);
    let top = 2 * n_max;
    let vals: Vec<f64> = (0..=top).map(|n| if n == 0 { 0.0 } else { a.get(n) }).collect();
    // tail[k] = Σ_{i ≥ k, i < 2N} |Δa_i|, accumulated from the small end
    let mut tail = vec![0.0f64; top as usize + 1];
    for k in (1..top as usize).rev() {
        tail[k] = tail[k + 1] + (vals[k] - vals[k + 1]).abs();
    }
    let mut constant = 0.0f64;
    for n in 1..=n_max as usize {
        let var = (tail[n] - tail[2 * n]).max(0.0);
        if vals[n] == 0.0 {
            if var > 0.0 {
                return GMReport { is_gm: false, constant: f64::INFINITY, violating_n: Some(n as u64), horizon: n_max };
            }
            continue;
        }
        constant = constant.max(var / vals[n]);
    }
    GMReport { is_gm: true, constant, violating_n: None, horizon: n_max }
}

fn check_p(p: &Exponent) -> Result<f64, GmError> {
    let pf = ex(p);
    if pf.is_finite() && pf > 1.0 {
        Ok(pf)
    } else {
        Err(GmError::Range("1 < p < ∞"))
    }
}

fn value(l: f64) -> NormValue {
    NormValue { value: if l == f64::NEG_INFINITY { 0.0 } else { l.exp2() }, exact: false }
}

/// Inner ℓ_{inner} sums over blocks ν ∈ [2^k − 1, 2^{k+1} − 2], each raised
/// to the block weight 2^{k·w}, then combined in ℓ_outer.
fn block_formula(logs: &[(u64, f64)], inner: f64, outer: f64, w: f64) -> f64 {
    let mut blocks: Vec<(u32, Vec<f64>)> = Vec::new();
    for (nu, t) in logs {
        let k = block_of(*nu).k;
        match blocks.last_mut() {
            Some((kk, v)) if *kk == k => v.push(*t),
            _ => blocks.push((k, vec![*t])),
        }
    }
    let terms: Vec<f64> = blocks.into_iter().map(|(k, v)| k as f64 * w + log2_lq(&v, inner)).collect();
    log2_lq(&terms, outer)
}

/// (Σ_k 2^{kbr}(Σ_{ν∈block(k)} 2^{ν(s+1−1/p)q} a_{2^ν}^q)^{r/q})^{1/r};
/// `samples[ν] = a_{2^ν}`.
pub fn gm_trunc_besov_norm_periodic(
    samples: &[f64],
    s: f64,
    p: &Exponent,
    q: &Exponent,
    r: &Exponent,
    b: f64,
) -> Result<NormValue, GmError> {
    let pf = check_p(p)?;
    if b == 0.0 {
        return Err(GmError::Range("b ≠ 0"));
    }
    let e = s + 1.0 - 1.0 / pf;
    let logs: Vec<(u64, f64)> = samples
        .iter()
        .enumerate()
        .filter(|(_, a)| **a != 0.0)
        .map(|(nu, a)| (nu as u64, nu as f64 * e + a.abs().log2()))
        .collect();
    Ok(value(block_formula(&logs, ex(q), ex(r), b)))
}

/// (Σ_j 2^{j(b+1/q)q}(Σ_{ν∈block(j)} 2^{ν(s+1−1/p)q} a_{2^ν}^p)^{q/p})^{1/q}, as displayed.
pub fn gm_lip_norm_periodic(samples: &[f64], s: f64, p: &Exponent, q: &Exponent, b: f64) -> Result<NormValue, GmError> {
    let pf = check_p(p)?;
    let qf = ex(q);
    if s <= 0.0 {
        return Err(GmError::Range("s > 0"));
    }
    if b >= -1.0 / qf {
        return Err(GmError::Range("b < −1/q"));
    }
    let e = s + 1.0 - 1.0 / pf;
    let qq = if qf.is_infinite() { 1.0 } else { qf };
    // each inner term is 2^{ν e q} a^p; take log₂ of its p-th root
    let logs: Vec<(u64, f64)> = samples
        .iter()
        .enumerate()
        .filter(|(_, a)| **a != 0.0)
        .map(|(nu, a)| (nu as u64, (nu as f64 * e * qq) / pf + a.abs().log2()))
        .collect();
    Ok(value(block_formula(&logs, pf, qf, b + 1.0 / qf)))
}

/// Samples F₀(2^ν) for ν = nu_min, nu_min + 1, … .
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadialProfile {
    pub nu_min: i64,
    pub values: Vec<f64>,
}

impl RadialProfile {
    pub fn nu_max(&self) -> i64 {
        self.nu_min + self.values.len() as i64 - 1
    }

    pub fn get(&self, nu: i64) -> Option<f64> {
        if nu < self.nu_min || nu > self.nu_max() {
            None
        } else {
            Some(self.values[(nu - self.nu_min) as usize])
        }
    }
}

/// (Σ_{j=0}^{N} 2^{−j(p−1)d}F₀(2^{−j})^p)^{1/p}
///   + (Σ_j 2^{jbr}(Σ_{ν=2^j}^{2^{j+1}−1} 2^{ν(s+d−d/p)q}F₀(2^ν)^q)^{r/q})^{1/r}, ν ≤ N.
#[allow(clippy::too_many_arguments)]
pub fn gm_radial_trunc_norm(
    f0: &RadialProfile,
    s: f64,
    p: &Exponent,
    q: &Exponent,
    r: &Exponent,
    b: f64,
    d: u32,
    n: u64,
) -> Result<NormValue, GmError> {
    let pf = ex(p);
    let df = d as f64;
    if !(pf.is_finite() && pf > 2.0 * df / (df + 1.0)) {
        return Err(GmError::Range("2d/(d+1) < p < ∞"));
    }
    if b == 0.0 {
        return Err(GmError::Range("b ≠ 0"));
    }
    let n = n as i64;
    if f0.nu_min > -n || f0.nu_max() < n {
        return Err(GmError::Samples { lo: -n, hi: n });
    }
    let low: Vec<f64> = (0..=n)
        .filter_map(|j| {
            let v = f0.get(-j).unwrap();
            (v != 0.0).then(|| -(j as f64) * (pf - 1.0) * df / pf + v.abs().log2())
        })
        .collect();
    let e = s + df - df / pf;
    // the high blocks start at ν = 2^j, i.e. block index of ν − 1
    let logs: Vec<(u64, f64)> = (1..=n)
        .filter_map(|nu| {
            let v = f0.get(nu).unwrap();
            (v != 0.0).then(|| (nu as u64 - 1, nu as f64 * e + v.abs().log2()))
        })
        .collect();
    let high = block_formula(&logs, ex(q), ex(r), b);
    let lo_v = value(log2_lq(&low, pf)).value;
    let hi_v = value(high).value;
    Ok(NormValue { value: lo_v + hi_v, exact: false })
}

/// Both sides of the GM Lorentz equivalence at horizon N.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LorentzEquiv {
    /// the truncated Lorentz norm (rearranged samples a*_{2^n})
    pub rearranged: f64,
    /// the same formula on raw samples a_{2^n}
    pub direct: f64,
    /// false when the input fails the GM check, so the equivalence does not apply
    pub applicable: bool,
}

pub fn gm_lorentz_equiv(
    a: &ScalarSequence,
    u: &Exponent,
    q: &Exponent,
    r: &Exponent,
    b: f64,
    horizon: u64,
) -> Result<LorentzEquiv, GmError> {
    let uf = ex(u);
    if uf.is_infinite() {
        return Err(NormError::InfiniteU.into());
    }
    let (qf, rf) = (ex(q), ex(r));
    let n = horizon.max(1);
    let cut = ScalarSequence::from_values(&a.dense(n));
    let star = rearranged_values(&cut);
    let mut re = Vec::new();
    let mut di = Vec::new();
    let mut k = 0u64;
    while k < 63 && (1u64 << k) <= n {
        let i = 1u64 << k;
        if let Some(v) = star.get(i as usize - 1) {
            re.push((k, k as f64 / uf + v.log2()));
        }
        let raw = cut.get(i);
        if raw != 0.0 {
            di.push((k, k as f64 / uf + raw.abs().log2()));
        }
        k += 1;
    }
    Ok(LorentzEquiv {
        rearranged: value(trunc_lorentz_log2(&re, qf, rf, b)).value,
        direct: value(trunc_lorentz_log2(&di, qf, rf, b)).value,
        applicable: gm_check(a, n).is_gm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(x: i64) -> Exponent {
        Exponent::int(x)
    }

    #[test]
    fn gm_examples() {
        let harm = ScalarSequence::power(1.0, 0.0, 1 << 12);
        let rep = gm_check(&harm, 1 << 10);
        assert!(rep.is_gm && (rep.constant - 0.5).abs() < 1e-12);
        let pow2: Vec<f64> = (1..=64).map(|n: u32| if n.is_power_of_two() { 1.0 } else { 0.0 }).collect();
        let rep = gm_check(&ScalarSequence::from_values(&pow2), 16);
        assert!(!rep.is_gm);
        assert_eq!(rep.violating_n, Some(3));
    }

    #[test]
    fn besov_periodic_examples() {
        let (s, p) = (0.5, 2.0);
        let n = 40;
        let samples: Vec<f64> = (0..=n).map(|nu| (-(nu as f64) * (s + 1.0 - 1.0 / p)).exp2()).collect();
        let v = gm_trunc_besov_norm_periodic(&samples, s, &e(2), &e(1), &e(1), -2.0).unwrap();
        // complete blocks k ≤ 4 plus a partial block 5 (ν = 31..40)
        let oracle: f64 = (0..5).map(|k| (-(k as f64)).exp2()).sum::<f64>() + 10.0 * (-10.0f64).exp2();
        assert!((v.value - oracle).abs() < 1e-12);
        let v = gm_trunc_besov_norm_periodic(&[3.0], s, &e(2), &e(2), &e(2), 1.0).unwrap();
        assert!((v.value - 3.0).abs() < 1e-12);
        assert!(gm_trunc_besov_norm_periodic(&[1.0], s, &e(1), &e(2), &e(2), 1.0).is_err());
    }

    #[test]
    fn lip_examples() {
        let v = gm_lip_norm_periodic(&[2.5], 1.0, &e(2), &e(2), -1.0).unwrap();
        assert!((v.value - 2.5).abs() < 1e-12);
        assert_eq!(gm_lip_norm_periodic(&[0.0; 4], 1.0, &e(2), &e(2), -1.0).unwrap().value, 0.0);
        assert!(gm_lip_norm_periodic(&[1.0], 1.0, &e(2), &e(2), -0.5).is_err());
    }

    #[test]
    fn radial_examples() {
        let n = 60i64;
        let mut vals = vec![1.0; n as usize + 1];
        vals.extend(std::iter::repeat(0.0).take(n as usize));
        let prof = RadialProfile { nu_min: -n, values: vals };
        let v = gm_radial_trunc_norm(&prof, 0.0, &e(2), &e(1), &e(1), -1.0, 1, n as u64).unwrap();
        assert!((v.value - 2f64.sqrt()).abs() < 1e-9);
        let zero = RadialProfile { nu_min: -3, values: vec![0.0; 7] };
        assert_eq!(gm_radial_trunc_norm(&zero, 0.0, &e(2), &e(1), &e(1), 1.0, 1, 3).unwrap().value, 0.0);
        assert!(gm_radial_trunc_norm(&zero, 0.0, &e(2), &e(1), &e(1), 1.0, 1, 4).is_err());
    }

    #[test]
    fn lorentz_equiv_monotone() {
        let a = ScalarSequence::power(1.0, 0.0, 1 << 10);
        let r = gm_lorentz_equiv(&a, &e(1), &e(1), &e(1), 0.0, 8).unwrap();
        assert!(r.applicable && (r.rearranged - r.direct).abs() < 1e-12);
    }
}
