//! Sparse wavelet-coefficient sequences, scalar sequences, dyadic blocks and
//! the extremal generators used as counterexamples.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::params::Violation;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct WaveletKey {
    pub j: u32,
    pub g: u32,
    pub m: Vec<i64>,
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum SeqError {
    #[error("invalid sequence: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("malformed sequence JSON: {0}")]
    Json(String),
    #[error("unknown extremal kind {0:?}")]
    UnknownKind(String),
    #[error("missing generator parameter {0:?}")]
    MissingParam(String),
    #[error("generator would materialize {0} entries (limit {1})")]
    TooLarge(u128, u128),
}

fn seq_violation(constraint: &str) -> Violation {
    Violation { constraint: constraint.into(), citation: "Sec. 7.1".into() }
}

/// Finitely supported map (j, G, m) → value. Zero values are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct WaveletSequence {
    d: u32,
    entries: BTreeMap<WaveletKey, f64>,
}

impl WaveletSequence {
    pub fn new(d: u32) -> Self {
        assert!(d >= 1, "dimension must be positive");
        WaveletSequence { d, entries: BTreeMap::new() }
    }

    pub fn dim(&self) -> u32 {
        self.d
    }

    fn check_key(&self, j: u32, g: u32, m: &[i64]) -> Vec<Violation> {
        let mut out = Vec::new();
        if m.len() != self.d as usize {
            out.push(seq_violation("position m must have d components"));
        }
        if self.d < 32 && g >= (1u32 << self.d) {
            out.push(seq_violation("gender mask must fit in d bits"));
        }
        if j >= 1 && g == 0 {
            out.push(seq_violation("gender mask must be non-zero for j ≥ 1"));
        }
        out
    }

    /// Adds `v` to the entry at (j, g, m); an entry that becomes zero is removed.
    pub fn insert(&mut self, j: u32, g: u32, m: Vec<i64>, v: f64) -> Result<(), SeqError> {
        let bad = self.check_key(j, g, &m);
        if !bad.is_empty() {
            return Err(SeqError::Invalid(bad));
        }
        if !v.is_finite() {
            return Err(SeqError::Invalid(vec![seq_violation("values must be finite")]));
        }
        let key = WaveletKey { j, g, m };
        let nv = self.entries.get(&key).copied().unwrap_or(0.0) + v;
        if nv == 0.0 {
            self.entries.remove(&key);
        } else {
            self.entries.insert(key, nv);
        }
        Ok(())
    }

    /// Insert with the default all-M gender mask.
    pub fn push(&mut self, j: u32, m: Vec<i64>, v: f64) -> Result<(), SeqError> {
        let g = all_m_mask(self.d);
        self.insert(j, g, m, v)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&WaveletKey, f64)> {
        self.entries.iter().map(|(k, v)| (k, *v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn max_level(&self) -> Option<u32> {
        self.entries.keys().map(|k| k.j).max()
    }

    pub fn scale(&self, c: f64) -> WaveletSequence {
        if c == 0.0 {
            return WaveletSequence::new(self.d);
        }
        WaveletSequence {
            d: self.d,
            entries: self.entries.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    pub fn add(&self, other: &WaveletSequence) -> WaveletSequence {
        assert_eq!(self.d, other.d, "dimension mismatch");
        let mut out = self.clone();
        for (k, v) in other.entries() {
            out.insert(k.j, k.g, k.m.clone(), v).expect("keys already validated");
        }
        out
    }

    /// Entries restricted to levels in `lo..=hi`.
    pub fn restrict_levels(&self, lo: u32, hi: u32) -> WaveletSequence {
        WaveletSequence {
            d: self.d,
            entries: self
                .entries
                .iter()
                .filter(|(k, _)| k.j >= lo && k.j <= hi)
                .map(|(k, v)| (k.clone(), *v))
                .collect(),
        }
    }

    /// Per level and gender: ℓ_p norm over positions, as `(j, values)`.
    pub fn level_gender_norms(&self, p: f64) -> BTreeMap<u32, Vec<f64>> {
        let mut acc: BTreeMap<(u32, u32), Vec<f64>> = BTreeMap::new();
        for (k, v) in self.entries() {
            acc.entry((k.j, k.g)).or_default().push(v.abs());
        }
        let mut out: BTreeMap<u32, Vec<f64>> = BTreeMap::new();
        for ((j, _), vals) in acc {
            out.entry(j).or_default().push(crate::norms::lp_norm(&vals, p));
        }
        out
    }

    pub fn from_json(text: &str) -> Result<WaveletSequence, SeqError> {
        let raw: SequenceJson = serde_json::from_str(text).map_err(|e| SeqError::Json(e.to_string()))?;
        if raw.dim == 0 {
            return Err(SeqError::Invalid(vec![seq_violation("dim must be positive")]));
        }
        let mut seq = WaveletSequence::new(raw.dim);
        let mut seen = std::collections::BTreeSet::new();
        let mut bad = Vec::new();
        for e in raw.entries {
            let key = WaveletKey { j: e.j, g: e.g, m: e.m.clone() };
            if !seen.insert(key) {
                bad.push(seq_violation("duplicate key"));
                continue;
            }
            if let Err(SeqError::Invalid(v)) = seq.insert(e.j, e.g, e.m, e.v) {
                bad.extend(v);
            }
        }
        if bad.is_empty() {
            Ok(seq)
        } else {
            Err(SeqError::Invalid(bad))
        }
    }

    pub fn to_json(&self) -> String {
        let raw = SequenceJson {
            dim: self.d,
            entries: self
                .entries
                .iter()
                .map(|(k, v)| EntryJson { j: k.j, g: k.g, m: k.m.clone(), v: *v })
                .collect(),
        };
        serde_json::to_string(&raw).expect("serializable")
    }
}

#[derive(Serialize, Deserialize)]
struct SequenceJson {
    dim: u32,
    entries: Vec<EntryJson>,
}

#[derive(Serialize, Deserialize)]
struct EntryJson {
    j: u32,
    #[serde(rename = "G")]
    g: u32,
    m: Vec<i64>,
    v: f64,
}

/// Gender mask with every component equal to M.
pub fn all_m_mask(d: u32) -> u32 {
    if d >= 32 {
        u32::MAX
    } else {
        (1u32 << d) - 1
    }
}

/// Multiply every entry by 2^{jσ}.
pub fn lift_sequence(seq: &WaveletSequence, sigma: f64) -> WaveletSequence {
    if sigma == 0.0 {
        return seq.clone();
    }
    WaveletSequence {
        d: seq.d,
        entries: seq
            .entries
            .iter()
            .map(|(k, v)| (k.clone(), v * (k.j as f64 * sigma).exp2()))
            .collect(),
    }
}

/// Dyadic block index k with block(k) = [2^k − 1, 2^{k+1} − 2].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BlockIndex {
    pub k: u32,
}

impl BlockIndex {
    pub fn first(self) -> u64 {
        (1u64 << self.k) - 1
    }

    pub fn last(self) -> u64 {
        (1u64 << (self.k + 1)) - 2
    }

    pub fn len(self) -> u64 {
        1u64 << self.k
    }

    pub fn contains(self, j: u64) -> bool {
        j >= self.first() && j <= self.last()
    }
}

pub fn block_of(j: u64) -> BlockIndex {
    BlockIndex { k: 63 - (j + 1).leading_zeros() }
}

/// Non-negative sequence indexed from 1: either explicit values or a rule
/// evaluated up to a horizon.
#[derive(Clone, Debug, PartialEq)]
pub enum ScalarSequence {
    Finite(BTreeMap<u64, f64>),
    Rule { rule: ScalarRule, horizon: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum ScalarRule {
    /// n^{−α} (ln(n+1))^{−β}
    Power { alpha: f64, beta: f64 },
}

impl ScalarRule {
    pub fn eval(&self, n: u64) -> f64 {
        match *self {
            ScalarRule::Power { alpha, beta } => {
                let n = n as f64;
                let mut v = n.powf(-alpha);
                if beta != 0.0 {
                    v *= (n + 1.0).ln().powf(-beta);
                }
                v
            }
        }
    }
}

impl ScalarSequence {
    pub fn from_values(values: &[f64]) -> ScalarSequence {
        ScalarSequence::Finite(
            values
                .iter()
                .enumerate()
                .filter(|(_, v)| **v != 0.0)
                .map(|(i, v)| (i as u64 + 1, *v))
                .collect(),
        )
    }

    pub fn power(alpha: f64, beta: f64, horizon: u64) -> ScalarSequence {
        ScalarSequence::Rule { rule: ScalarRule::Power { alpha, beta }, horizon: horizon.max(1) }
    }

    pub fn get(&self, n: u64) -> f64 {
        match self {
            ScalarSequence::Finite(map) => map.get(&n).copied().unwrap_or(0.0),
            ScalarSequence::Rule { rule, horizon } => {
                if n == 0 || n > *horizon {
                    0.0
                } else {
                    rule.eval(n)
                }
            }
        }
    }

    /// Largest index that may carry a non-zero value.
    pub fn extent(&self) -> u64 {
        match self {
            ScalarSequence::Finite(map) => map.keys().next_back().copied().unwrap_or(0),
            ScalarSequence::Rule { horizon, .. } => *horizon,
        }
    }

    /// Values at 1..=n as a dense vector (index 0 ↔ n = 1).
    pub fn dense(&self, n: u64) -> Vec<f64> {
        (1..=n).map(|i| self.get(i)).collect()
    }

    pub fn nonzero_values(&self) -> Vec<f64> {
        match self {
            ScalarSequence::Finite(map) => map.values().copied().filter(|v| *v != 0.0).collect(),
            ScalarSequence::Rule { .. } => {
                self.dense(self.extent()).into_iter().filter(|v| *v != 0.0).collect()
            }
        }
    }

    pub fn validate(&self) -> Result<(), SeqError> {
        let bad = match self {
            ScalarSequence::Finite(map) => {
                map.iter().any(|(n, v)| *n == 0 || !(v.is_finite() && *v >= 0.0))
            }
            ScalarSequence::Rule { horizon, .. } => *horizon == 0,
        };
        if bad {
            Err(SeqError::Invalid(vec![Violation {
                constraint: "scalar sequences are indexed from 1 with finite values ≥ 0".into(),
                citation: "Sec. 17.6".into(),
            }]))
        } else {
            Ok(())
        }
    }

    pub fn from_json(text: &str) -> Result<ScalarSequence, SeqError> {
        let v: serde_json::Value = serde_json::from_str(text).map_err(|e| SeqError::Json(e.to_string()))?;
        let seq = if let Some(values) = v.get("values") {
            let obj = values
                .as_object()
                .ok_or_else(|| SeqError::Json("\"values\" must be an object".into()))?;
            let mut map = BTreeMap::new();
            for (k, val) in obj {
                let n: u64 = k.parse().map_err(|_| SeqError::Json(format!("bad index {k:?}")))?;
                let x = val.as_f64().ok_or_else(|| SeqError::Json(format!("bad value at {k}")))?;
                if x != 0.0 {
                    map.insert(n, x);
                }
            }
            ScalarSequence::Finite(map)
        } else if let Some(rule) = v.get("rule").and_then(|r| r.as_str()) {
            if rule != "power" {
                return Err(SeqError::Json(format!("unknown rule {rule:?}")));
            }
            let num = |key: &str, default: Option<f64>| -> Result<f64, SeqError> {
                match v.get(key).and_then(|x| x.as_f64()) {
                    Some(x) => Ok(x),
                    None => default.ok_or_else(|| SeqError::Json(format!("missing {key:?}"))),
                }
            };
            let alpha = num("alpha", None)?;
            let beta = num("beta", Some(0.0))?;
            let n = num("N", None)?;
            if n < 1.0 || n.fract() != 0.0 {
                return Err(SeqError::Json("\"N\" must be a positive integer".into()));
            }
            ScalarSequence::power(alpha, beta, n as u64)
        } else {
            return Err(SeqError::Json("expected \"values\" or \"rule\"".into()));
        };
        seq.validate()?;
        Ok(seq)
    }
}

/// Non-increasing rearrangement, indexed from 1 (zeros dropped).
pub fn rearrange(a: &ScalarSequence) -> ScalarSequence {
    ScalarSequence::from_values(&rearranged_values(a))
}

/// The non-zero values sorted non-increasingly.
pub fn rearranged_values(a: &ScalarSequence) -> Vec<f64> {
    let mut v: Vec<f64> = a.nonzero_values().into_iter().map(f64::abs).collect();
    v.sort_by(|x, y| y.partial_cmp(x).expect("finite values"));
    v
}

/// Placement of a block-structured generator inside the unit cube.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Layout {
    /// one coefficient per level at m = 0 (cubes nested at the origin)
    Nested,
    /// every position of [0,1)^d at each level, value scaled by 2^{−jd/p}
    Cover,
}

/// Extremal generators. Values are `2^{−j·delta}·w(j)` where `delta = s − d/p`
/// of the space the witness is built for.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum ExtremalKind {
    Spike { j0: u32 },
    /// j = 2^k, k = 0..L−1, value 2^{−2^k δ} 2^{−kε} (1+k)^{−η}
    LacunaryDiagonal { delta: f64, eps: f64, eta: f64 },
    /// block(N) with N = L, value 2^{−jδ}
    BlockConstant { delta: f64, layout: Layout, p: f64 },
    /// levels 0..=2^{L+1}−2, value 2^{−jδ}(1+j)^{−ε}
    PowerDiagonal { delta: f64, eps: f64, layout: Layout, p: f64 },
    /// levels 0..=2^{L+1}−2, value 2^{−jδ}(1+j)^{−(b+1/q)}(1+log₂(1+j))^{−β}
    LogRefined { delta: f64, bq: f64, beta: f64, layout: Layout, p: f64 },
    /// j = 0, m = (l,0,…), value l^{−ε}, l = 1..=L
    SpatialSpread { eps: f64 },
    /// levels 0..=L, ⌈2^{jd}(1+j)^{−β}⌉ positions with value (1+j)^{ε}
    SpreadLevel { beta: f64, eps: f64 },
}

impl ExtremalKind {
    pub fn id(&self) -> &'static str {
        match self {
            ExtremalKind::Spike { .. } => "Spike",
            ExtremalKind::LacunaryDiagonal { .. } => "LacunaryDiagonal",
            ExtremalKind::BlockConstant { .. } => "BlockConstant",
            ExtremalKind::PowerDiagonal { .. } => "PowerDiagonal",
            ExtremalKind::LogRefined { .. } => "LogRefined",
            ExtremalKind::SpatialSpread { .. } => "SpatialSpread",
            ExtremalKind::SpreadLevel { .. } => "SpreadLevel",
        }
    }

    /// Builds a kind from its id and named parameters. `s`, `p`, `d` are
    /// folded into `delta = s − d/p`; `p` defaults to ∞ (nested layout).
    pub fn from_id(id: &str, params: &BTreeMap<String, f64>) -> Result<ExtremalKind, SeqError> {
        let get = |k: &str| params.get(k).copied().ok_or_else(|| SeqError::MissingParam(k.into()));
        let opt = |k: &str, dflt: f64| params.get(k).copied().unwrap_or(dflt);
        let delta = || -> Result<f64, SeqError> {
            if let Some(dl) = params.get("delta") {
                return Ok(*dl);
            }
            let s = get("s")?;
            let p = opt("p", f64::INFINITY);
            let d = opt("d", 1.0);
            Ok(s - d / p)
        };
        let layout = if opt("cover", 0.0) != 0.0 { Layout::Cover } else { Layout::Nested };
        let p = opt("p", f64::INFINITY);
        Ok(match id {
            "Spike" => ExtremalKind::Spike { j0: opt("j0", 0.0) as u32 },
            "LacunaryDiagonal" => ExtremalKind::LacunaryDiagonal {
                delta: delta()?,
                eps: get("eps")?,
                eta: opt("eta", 0.0),
            },
            "BlockConstant" => ExtremalKind::BlockConstant { delta: delta()?, layout, p },
            "PowerDiagonal" => ExtremalKind::PowerDiagonal { delta: delta()?, eps: get("eps")?, layout, p },
            "LogRefined" => ExtremalKind::LogRefined {
                delta: delta()?,
                bq: get("b")? + 1.0 / opt("q", f64::INFINITY),
                beta: get("beta")?,
                layout,
                p,
            },
            "SpatialSpread" => ExtremalKind::SpatialSpread { eps: get("eps")? },
            "SpreadLevel" => ExtremalKind::SpreadLevel { beta: get("beta")?, eps: get("eps")? },
            other => return Err(SeqError::UnknownKind(other.into())),
        })
    }
}

/// Cap on materialized entries.
pub const MATERIALIZE_LIMIT: u128 = 1 << 22;

fn count_check(n: u128) -> Result<(), SeqError> {
    if n > MATERIALIZE_LIMIT {
        Err(SeqError::TooLarge(n, MATERIALIZE_LIMIT))
    } else {
        Ok(())
    }
}

/// Positions of the first `n` lattice points of [0, 2^j)^d in row-major order.
fn lattice_points(j: u32, d: u32, n: u64) -> Vec<Vec<i64>> {
    let side = 1i64 << j;
    (0..n as i64)
        .map(|mut i| {
            let mut m = vec![0i64; d as usize];
            for c in m.iter_mut() {
                *c = i % side;
                i /= side;
            }
            m
        })
        .collect()
}

fn push_layout(
    out: &mut WaveletSequence,
    j: u32,
    v: f64,
    layout: Layout,
    p: f64,
) -> Result<(), SeqError> {
    let d = out.dim();
    match layout {
        Layout::Nested => out.push(j, vec![0; d as usize], v),
        Layout::Cover => {
            let n = 1u64 << (j * d);
            let scale = (-(j as f64) * d as f64 / p).exp2();
            for m in lattice_points(j, d, n) {
                out.push(j, m, v * scale)?;
            }
            Ok(())
        }
    }
}

fn layout_count(levels: std::ops::RangeInclusive<u64>, d: u32, layout: Layout) -> u128 {
    match layout {
        Layout::Nested => (levels.end() - levels.start() + 1) as u128,
        Layout::Cover => levels.map(|j| 1u128 << (j as u32 * d).min(120)).sum(),
    }
}

/// Materializes the generator at truncation length `l`.
pub fn gen_extremal(kind: &ExtremalKind, d: u32, l: u32) -> Result<WaveletSequence, SeqError> {
    let mut out = WaveletSequence::new(d);
    let origin = vec![0i64; d as usize];
    match *kind {
        ExtremalKind::Spike { j0 } => out.push(j0, origin, 1.0)?,
        ExtremalKind::LacunaryDiagonal { delta, eps, eta } => {
            if l > 31 {
                return Err(SeqError::TooLarge(1u128 << l, MATERIALIZE_LIMIT));
            }
            for k in 0..l {
                let j = 1u32 << k;
                let v = (-(j as f64) * delta - k as f64 * eps).exp2() * (1.0 + k as f64).powf(-eta);
                out.push(j, origin.clone(), v)?;
            }
        }
        ExtremalKind::BlockConstant { delta, layout, p } => {
            let b = BlockIndex { k: l };
            count_check(layout_count(b.first()..=b.last(), d, layout))?;
            for j in b.first()..=b.last() {
                push_layout(&mut out, j as u32, (-(j as f64) * delta).exp2(), layout, p)?;
            }
        }
        ExtremalKind::PowerDiagonal { delta, eps, layout, p } => {
            let top = BlockIndex { k: l }.last();
            count_check(layout_count(0..=top, d, layout))?;
            for j in 0..=top {
                let v = (-(j as f64) * delta).exp2() * (1.0 + j as f64).powf(-eps);
                push_layout(&mut out, j as u32, v, layout, p)?;
            }
        }
        ExtremalKind::LogRefined { delta, bq, beta, layout, p } => {
            let top = BlockIndex { k: l }.last();
            count_check(layout_count(0..=top, d, layout))?;
            for j in 0..=top {
                let jf = j as f64;
                let v = (-jf * delta).exp2() * (1.0 + jf).powf(-bq) * (1.0 + (1.0 + jf).log2()).powf(-beta);
                push_layout(&mut out, j as u32, v, layout, p)?;
            }
        }
        ExtremalKind::SpatialSpread { eps } => {
            for li in 1..=l as i64 {
                let mut m = origin.clone();
                m[0] = li;
                out.push(0, m, (li as f64).powf(-eps))?;
            }
        }
        ExtremalKind::SpreadLevel { beta, eps } => {
            let counts: Vec<u64> = (0..=l).map(|j| spread_count(j as u64, d, beta)).collect();
            count_check(counts.iter().map(|c| *c as u128).sum())?;
            for (j, n) in counts.into_iter().enumerate() {
                let v = (1.0 + j as f64).powf(eps);
                for m in lattice_points(j as u32, d, n) {
                    out.push(j as u32, m, v)?;
                }
            }
        }
    }
    Ok(out)
}

/// ⌈2^{jd}(1+j)^{−β}⌉, at least 1. Saturates for huge levels.
pub fn spread_count(j: u64, d: u32, beta: f64) -> u64 {
    let x = (j as f64 * d as f64 - beta * (1.0 + j as f64).log2()).exp2();
    if x >= u64::MAX as f64 {
        u64::MAX
    } else {
        (x.ceil() as u64).max(1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blocks() {
        assert_eq!(block_of(0).k, 0);
        assert_eq!(block_of(1).k, 1);
        assert_eq!(block_of(2).k, 1);
        assert_eq!(block_of(3).k, 2);
        assert_eq!(block_of(6).k, 2);
        assert_eq!(block_of(7).k, 3);
    }

    #[test]
    fn gender_rule() {
        let mut s = WaveletSequence::new(1);
        assert!(s.insert(0, 0, vec![0], 1.0).is_ok());
        assert!(s.insert(1, 0, vec![0], 1.0).is_err());
        assert!(s.insert(1, 1, vec![0, 0], 1.0).is_err());
    }

    #[test]
    fn json_roundtrip() {
        let mut s = WaveletSequence::new(2);
        s.insert(3, 2, vec![-1, 4], 0.25).unwrap();
        s.insert(0, 0, vec![0, 0], -2.0).unwrap();
        let back = WaveletSequence::from_json(&s.to_json()).unwrap();
        assert_eq!(back, s);
        let dup = r#"{"dim":1,"entries":[{"j":0,"G":0,"m":[0],"v":1},{"j":0,"G":0,"m":[0],"v":2}]}"#;
        assert!(WaveletSequence::from_json(dup).is_err());
    }

    #[test]
    fn rearrangement_examples() {
        let a = ScalarSequence::from_values(&[3.0, 1.0, 2.0]);
        assert_eq!(rearranged_values(&a), vec![3.0, 2.0, 1.0]);
        let ones = ScalarSequence::from_values(&[1.0, 1.0, 1.0]);
        assert_eq!(rearranged_values(&ones), vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn lacunary_example() {
        let k = ExtremalKind::LacunaryDiagonal { delta: 0.0, eps: 1.0, eta: 0.0 };
        let s = gen_extremal(&k, 1, 2).unwrap();
        let vals: Vec<(u32, f64)> = s.entries().map(|(k, v)| (k.j, v)).collect();
        assert_eq!(vals, vec![(1, 1.0), (2, 0.5)]);
    }

    #[test]
    fn scalar_json() {
        let s = ScalarSequence::from_json(r#"{"values":{"1":2.0,"3":1.5}}"#).unwrap();
        assert_eq!(s.get(3), 1.5);
        let r = ScalarSequence::from_json(r#"{"rule":"power","alpha":1,"beta":0,"N":8}"#).unwrap();
        assert_eq!(r.get(4), 0.25);
        assert_eq!(r.get(9), 0.0);
    }
}
