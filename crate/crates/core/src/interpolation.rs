//! Discrete K-functionals, limiting interpolation norms and Hardy sums.
//!
//! Sequences here are plain slices indexed by ν = 0, 1, … .

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::norms::{log2_lq, Kahan, NormValue};
use crate::params::{Exponent, Violation};
use crate::sequences::{rearranged_values, ScalarSequence};

/// The couple (ℓ^{s0}_q, ℓ^{s1}_q) of weighted ℓ_q spaces, weights 2^{νs}.
/// The K-functional takes min(2^{ν s0}, t 2^{ν s1}).
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedLqPair {
    pub s0: f64,
    pub s1: f64,
    pub q: Exponent,
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum InterpError {
    #[error("invalid couple: {0}")]
    Pair(Violation),
    #[error("inadmissible parameters: {0}")]
    Inadmissible(Violation),
}

impl WeightedLqPair {
    pub fn new(s0: f64, s1: f64, q: Exponent) -> Result<Self, InterpError> {
        if s0 == s1 || !s0.is_finite() || !s1.is_finite() {
            return Err(InterpError::Pair(Violation {
                constraint: "weighted couple requires s0 ≠ s1".into(),
                citation: "Eq. (Kfunct)".into(),
            }));
        }
        Ok(WeightedLqPair { s0, s1, q })
    }
}

/// Endpoint of the limiting method: θ = 0 or θ = 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Theta {
    Zero,
    One,
}

/// A truncated sum plus whether its tail was judged negligible.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InterpValue {
    pub norm: NormValue,
    pub j_max: u64,
    pub converged: bool,
}

fn log2_k(x: &[f64], log2_t: f64, pair: &WeightedLqPair) -> f64 {
    let terms: Vec<f64> = x
        .iter()
        .enumerate()
        .filter(|(_, w)| **w != 0.0)
        .map(|(nu, w)| {
            let nu = nu as f64;
            (nu * pair.s0).min(log2_t + nu * pair.s1) + w.abs().log2()
        })
        .collect();
    log2_lq(&terms, pair.q.to_f64())
}

/// K(t, x) = (Σ_ν [min(2^{ν s0}, t 2^{ν s1}) w_ν]^q)^{1/q}.
pub fn k_functional(x: &[f64], t: f64, pair: &WeightedLqPair) -> NormValue {
    assert!(t > 0.0, "t must be positive");
    let l = log2_k(x, t.log2(), pair);
    let q = pair.q.to_f64();
    NormValue {
        value: if l == f64::NEG_INFINITY { 0.0 } else { l.exp2() },
        exact: q == 1.0 || q.is_infinite(),
    }
}

fn check_admissible(theta: Theta, b: f64, r: &Exponent) -> Result<(), InterpError> {
    let inv_r = r.reciprocal().to_f64();
    let (ok, constraint) = match theta {
        Theta::Zero => (b >= -inv_r, "θ = 0 requires b ≥ −1/r"),
        Theta::One => (b < -inv_r, "θ = 1 requires b < −1/r"),
    };
    if ok {
        Ok(())
    } else {
        Err(InterpError::Inadmissible(Violation {
            constraint: constraint.into(),
            citation: "Sec. 4.1".into(),
        }))
    }
}

/// Combine log₂ terms j = 0..=j_max in ℓ_r and judge the tail.
fn finish(terms: Vec<f64>, r: &Exponent) -> InterpValue {
    let rf = r.to_f64();
    let j_max = terms.len() as u64 - 1;
    let total = log2_lq(&terms, rf);
    let last = log2_lq(&terms[terms.len().saturating_sub(4)..], rf);
    let converged = if total == f64::NEG_INFINITY {
        true
    } else if rf.is_infinite() {
        // the supremum is attained before the last four terms
        last < total || terms.len() <= 4
    } else {
        rf * (last - total) <= 1e-10f64.log2()
    };
    InterpValue {
        norm: NormValue { value: if total == f64::NEG_INFINITY { 0.0 } else { total.exp2() }, exact: false },
        j_max,
        converged,
    }
}

/// (Σ_{j ≤ J} [t_j^{−θ} (1+j)^b K(t_j, x)]^r)^{1/r} with t_j = 2^{−j(s1−s0)}.
/// `j_max` defaults to (last support index + 8).
pub fn limiting_interp_norm(
    x: &[f64],
    theta: Theta,
    b: f64,
    r: &Exponent,
    pair: &WeightedLqPair,
    j_max: Option<u64>,
) -> Result<InterpValue, InterpError> {
    check_admissible(theta, b, r)?;
    let top = x.iter().rposition(|w| *w != 0.0).unwrap_or(0) as u64;
    let jm = j_max.unwrap_or(top + 8);
    let step = pair.s1 - pair.s0;
    let th = match theta {
        Theta::Zero => 0.0,
        Theta::One => 1.0,
    };
    let terms: Vec<f64> = (0..=jm)
        .map(|j| {
            let lt = -(j as f64) * step;
            -th * lt + b * (1.0 + j as f64).log2() + log2_k(x, lt, pair)
        })
        .collect();
    Ok(finish(terms, r))
}

/// Holmstedt form of K(t, λ; ℓ_{u1,q1}, ℓ_{u0,q0}) for u0 < u1, sampled on
/// dyadic indices: split at 2^n ≤ t^{−α}, 1/α = 1/u0 − 1/u1.
pub fn lorentz_k_holmstedt(a: &ScalarSequence, t: f64, u0: f64, q0: f64, u1: f64, q1: f64) -> f64 {
    let alpha = 1.0 / (1.0 / u0 - 1.0 / u1);
    let l = lorentz_k_log2(&rearranged_values(a), -t.log2() * alpha, u0, q0, u1, q1);
    if l == f64::NEG_INFINITY {
        0.0
    } else {
        l.exp2()
    }
}

fn lorentz_k_log2(star: &[f64], split: f64, u0: f64, q0: f64, u1: f64, q1: f64) -> f64 {
    // split = log₂ t^{−α}; log₂ t = −split/α
    let alpha = 1.0 / (1.0 / u0 - 1.0 / u1);
    let log2_t = -split / alpha;
    let mut low = Vec::new();
    let mut high = Vec::new();
    let mut n = 0usize;
    while n < 64 && (1usize << n) <= star.len() {
        let v = star[(1usize << n) - 1].log2();
        if (n as f64) <= split {
            low.push(n as f64 / u0 + v);
        } else {
            high.push(n as f64 / u1 + v);
        }
        n += 1;
    }
    log2_lq(&[log2_t + log2_lq(&low, q0), log2_lq(&high, q1)], 1.0)
}

/// Limiting interpolation norm of (ℓ_{u1,q1}, ℓ_{u0,q0})_{(θ, b), r} built on
/// the Holmstedt proxy, at t_j = 2^{−j/α} (so the split sits at n = j).
#[allow(clippy::too_many_arguments)]
pub fn lorentz_limiting_interp_norm(
    a: &ScalarSequence,
    theta: Theta,
    b: f64,
    r: &Exponent,
    u0: f64,
    q0: f64,
    u1: f64,
    q1: f64,
    j_max: Option<u64>,
) -> Result<InterpValue, InterpError> {
    check_admissible(theta, b, r)?;
    assert!(u0 < u1, "the couple must be ordered: u0 < u1");
    let star = rearranged_values(a);
    let top = (usize::BITS - star.len().leading_zeros()) as u64;
    let jm = j_max.unwrap_or(top + 8);
    let alpha = 1.0 / (1.0 / u0 - 1.0 / u1);
    let th = match theta {
        Theta::Zero => 0.0,
        Theta::One => 1.0,
    };
    let terms: Vec<f64> = (0..=jm)
        .map(|j| {
            let j = j as f64;
            th * j / alpha + b * (1.0 + j).log2() + lorentz_k_log2(&star, j, u0, q0, u1, q1)
        })
        .collect();
    Ok(finish(terms, r))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum HardySide {
    /// cumulative sums Σ_{k≤j} ξ_k, weight 2^{−jλ}
    H1,
    /// tail sums Σ_{k≥j} ξ_k, weight 2^{jλ}
    H2,
}

/// (LHS, RHS) of the chosen Hardy inequality as q-th power sums
/// (suprema for q = ∞). H1 sums past the support until the tail is negligible.
pub fn hardy_ratio(xi: &[f64], lambda: f64, q: &Exponent, b: f64, side: HardySide) -> (NormValue, NormValue) {
    let (l, r) = hardy_log2_sums(xi, lambda, q, b, side);
    let value = |l: f64| NormValue { value: if l == f64::NEG_INFINITY { 0.0 } else { l.exp2() }, exact: false };
    (value(l), value(r))
}

/// log₂ of both sides of [`hardy_ratio`]; stays finite where the sums overflow f64.
pub fn hardy_log2_sums(xi: &[f64], lambda: f64, q: &Exponent, b: f64, side: HardySide) -> (f64, f64) {
    assert!(lambda > 0.0, "λ must be positive");
    let qf = q.to_f64();
    let sup = qf.is_infinite();
    let qq = if sup { 1.0 } else { qf };
    let sign = match side {
        HardySide::H1 => -1.0,
        HardySide::H2 => 1.0,
    };
    let weight = |j: usize| qq * (sign * j as f64 * lambda + b * (1.0 + j as f64).log2());
    let n = xi.iter().rposition(|v| *v != 0.0).map_or(0, |i| i + 1);
    let mut lhs = Vec::new();
    let mut rhs = Vec::new();
    match side {
        HardySide::H1 => {
            let mut acc = Kahan::default();
            let mut j = 0usize;
            loop {
                if j < n {
                    acc.add(xi[j]);
                    if xi[j] != 0.0 {
                        rhs.push(weight(j) + qq * xi[j].log2());
                    }
                }
                if acc.value() > 0.0 {
                    lhs.push(weight(j) + qq * acc.value().log2());
                }
                j += 1;
                if j >= n {
                    let cur = log2_lq(&lhs, if sup { f64::INFINITY } else { 1.0 });
                    let next = weight(j) + qq * acc.value().log2();
                    // past the support the terms decay geometrically (λ > 0)
                    if acc.value() == 0.0 || next < cur - 60.0 || j > n + 1_000_000 {
                        break;
                    }
                }
            }
        }
        HardySide::H2 => {
            let mut tails = vec![0.0; n];
            let mut acc = Kahan::default();
            for j in (0..n).rev() {
                acc.add(xi[j]);
                tails[j] = acc.value();
            }
            for j in 0..n {
                if tails[j] > 0.0 {
                    lhs.push(weight(j) + qq * tails[j].log2());
                }
                if xi[j] != 0.0 {
                    rhs.push(weight(j) + qq * xi[j].log2());
                }
            }
        }
    }
    let combine = |v: &[f64]| log2_lq(v, if sup { f64::INFINITY } else { 1.0 });
    (combine(&lhs), combine(&rhs))
}

/// λ_0 = 1, λ_j = 2^{−2^{j−1}} for 1 ≤ j ≤ J.
pub fn lambda_grid(j: u32) -> Vec<f64> {
    assert!(j >= 1, "J must be positive");
    let mut out = vec![1.0];
    for i in 1..=j {
        out.push((-(2f64.powi(i as i32 - 1))).exp2());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair01(q: i64) -> WeightedLqPair {
        WeightedLqPair::new(0.0, 1.0, Exponent::int(q)).unwrap()
    }

    #[test]
    fn k_examples() {
        assert_eq!(k_functional(&[1.0], 1.0, &pair01(1)).value, 1.0);
        assert_eq!(k_functional(&[0.0, 0.0, 1.0], 0.25, &pair01(1)).value, 1.0);
        assert_eq!(k_functional(&[0.0; 5], 3.0, &pair01(2)).value, 0.0);
    }

    #[test]
    fn limiting_spike_examples() {
        let r1 = Exponent::int(1);
        let v = limiting_interp_norm(&[1.0], Theta::Zero, 0.0, &r1, &pair01(1), Some(200)).unwrap();
        assert!((v.norm.value - 2.0).abs() < 1e-12 && v.converged);
        let v = limiting_interp_norm(&[1.0], Theta::One, -2.0, &r1, &pair01(1), Some(200_000)).unwrap();
        assert!((v.norm.value - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-5);
        assert!(limiting_interp_norm(&[1.0], Theta::One, 0.0, &r1, &pair01(1), None).is_err());
        assert!(limiting_interp_norm(&[1.0], Theta::Zero, -2.0, &r1, &pair01(1), None).is_err());
        assert!(WeightedLqPair::new(1.0, 1.0, r1).is_err());
    }

    #[test]
    fn hardy_examples() {
        let one = Exponent::int(1);
        let (l, r) = hardy_ratio(&[1.0], 1.0, &one, 0.0, HardySide::H1);
        assert!((l.value - 2.0).abs() < 1e-12 && r.value == 1.0);
        let (l, r) = hardy_ratio(&[1.0], 1.0, &one, 0.0, HardySide::H2);
        assert!(l.value == 1.0 && r.value == 1.0);
        let (l, r) = hardy_ratio(&[0.0, 0.0], 1.0, &one, 0.0, HardySide::H1);
        assert!(l.value == 0.0 && r.value == 0.0);
    }

    #[test]
    fn lambda_grid_examples() {
        assert_eq!(lambda_grid(1), vec![1.0, 0.5]);
        assert_eq!(lambda_grid(3), vec![1.0, 0.5, 0.25, 0.0625]);
        let g = lambda_grid(6);
        for j in 1..6 {
            assert_eq!(g[j + 1], g[j] * g[j]);
        }
    }
}
