//! Decision procedures for embeddings between truncated spaces and into
//! L¹_loc, C, L_p (GM) and Lorentz-type sequence spaces.
//!
//! Clause arithmetic is done on exact rationals whenever the descriptors
//! carry them, so boundary clauses are decided exactly.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::params::{
    canonicalize_descriptor, conjugate_exponent, midpoint, positive_part, validate_descriptor, Exponent, Family,
    Num, SpaceDescriptor, Violation,
};
use crate::sequences::{ExtremalKind, Layout};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Holds,
    Fails,
    UnknownPerPaper,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingVerdict {
    pub status: Status,
    pub condition: String,
    pub witness: Option<String>,
    pub citation: String,
    /// Concrete parameters of the witness generator (not part of the JSON verdict).
    #[serde(skip)]
    pub witness_kind: Option<ExtremalKind>,
}

impl EmbeddingVerdict {
    fn holds(condition: impl Into<String>, citation: &str) -> Self {
        EmbeddingVerdict {
            status: Status::Holds,
            condition: condition.into(),
            witness: None,
            citation: citation.into(),
            witness_kind: None,
        }
    }

    fn fails(condition: impl Into<String>, citation: &str, kind: ExtremalKind) -> Self {
        EmbeddingVerdict {
            status: Status::Fails,
            condition: condition.into(),
            witness: Some(kind.id().into()),
            citation: citation.into(),
            witness_kind: Some(kind),
        }
    }

    fn fails_named(condition: impl Into<String>, citation: &str, witness: &str) -> Self {
        EmbeddingVerdict {
            status: Status::Fails,
            condition: condition.into(),
            witness: Some(witness.into()),
            citation: citation.into(),
            witness_kind: None,
        }
    }

    fn unknown(condition: impl Into<String>, citation: &str) -> Self {
        EmbeddingVerdict {
            status: Status::UnknownPerPaper,
            condition: condition.into(),
            witness: None,
            citation: citation.into(),
            witness_kind: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("verdict serializes")
    }
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum EmbedError {
    #[error("unsupported pair: {0}")]
    UnsupportedPair(String),
    #[error("invalid descriptor: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
}

fn unsupported<T>(msg: impl Into<String>) -> Result<T, EmbedError> {
    Err(EmbedError::UnsupportedPair(msg.into()))
}

fn inv(e: &Exponent) -> Num {
    e.reciprocal()
}

fn dim(d: u32) -> Num {
    Num::int(d as i64)
}

/// s − d/p
fn delta(x: &SpaceDescriptor) -> Num {
    x.s.sub(&dim(x.d).mul(&inv(&x.p)))
}

fn f(x: &Num) -> f64 {
    x.to_f64()
}

fn spike() -> ExtremalKind {
    ExtremalKind::Spike { j0: 0 }
}

fn lacunary(delta: &Num, eps: &Num, eta: f64) -> ExtremalKind {
    ExtremalKind::LacunaryDiagonal { delta: f(delta), eps: f(eps), eta }
}

fn mid_f(a: f64, b: f64) -> f64 {
    0.5 * (a + b)
}

/// The r-clause witness: equal b, r0 > r1.
fn lacunary_r(delta: &Num, b: &Num, r0: &Exponent, r1: &Exponent) -> ExtremalKind {
    lacunary(delta, b, mid_f(f(&inv(r0)), f(&inv(r1))))
}

fn prepare(x: &SpaceDescriptor) -> Result<SpaceDescriptor, EmbedError> {
    validate_descriptor(x).map_err(EmbedError::Invalid)?;
    let c = canonicalize_descriptor(x).map_err(|e| EmbedError::UnsupportedPair(e.to_string()))?;
    match c.desc.family {
        Family::TB | Family::TF => {}
        other => return unsupported(format!("no characterization covers family {}", other.tag())),
    }
    if c.desc.b.is_zero() {
        return unsupported("the characterizations require b ≠ 0");
    }
    Ok(c.desc)
}

/// Decides src ↪ dst for truncated Besov / Triebel–Lizorkin descriptors.
pub fn embeds(src: &SpaceDescriptor, dst: &SpaceDescriptor) -> Result<EmbeddingVerdict, EmbedError> {
    let a = prepare(src)?;
    let b = prepare(dst)?;
    if a.d != b.d {
        return unsupported("dimensions differ");
    }
    let pc = a.p.cmp_exp(&b.p);
    Ok(match (a.family, b.family) {
        (Family::TB, Family::TB) => thm10_1(&a, &b),
        (Family::TF, Family::TB) => match pc {
            Ordering::Equal => thm12_1(&a, &b),
            Ordering::Less => thm14_1(&a, &b),
            Ordering::Greater => return unsupported("TF → TB with p0 > p1 is not characterized"),
        },
        (Family::TB, Family::TF) => match pc {
            Ordering::Equal => thm12_2(&a, &b),
            Ordering::Less => thm14_2(&a, &b),
            Ordering::Greater => return unsupported("TB → TF with p0 > p1 is not characterized"),
        },
        (Family::TF, Family::TF) => match pc {
            Ordering::Greater => return unsupported("TF → TF with p0 > p1 is not characterized"),
            _ => thm13_1(&a, &b),
        },
        _ => unreachable!("prepare admits TB and TF only"),
    })
}

/// Outcome of comparing b-type quantities: strict win, tie settled by r, or loss.
fn tiebreak(
    lhs: &Num,
    rhs: &Num,
    r0: &Exponent,
    r1: &Exponent,
    strict: &str,
    tie: &str,
    cite: &str,
    lose: ExtremalKind,
    lose_r: ExtremalKind,
) -> EmbeddingVerdict {
    match lhs.cmp_num(rhs) {
        Ordering::Greater => EmbeddingVerdict::holds(strict, cite),
        Ordering::Less => EmbeddingVerdict::fails(strict, cite, lose),
        Ordering::Equal => {
            if r0.le(r1) {
                EmbeddingVerdict::holds(tie, cite)
            } else {
                EmbeddingVerdict::fails(tie, cite, lose_r)
            }
        }
    }
}

fn thm10_1(a: &SpaceDescriptor, b: &SpaceDescriptor) -> EmbeddingVerdict {
    const C: &str = "Thm 10.1";
    let (r0, r1) = (a.r(), b.r());
    if a.p.gt(&b.p) {
        let eps = mid_f(f(&inv(&a.p)), f(&inv(&b.p)));
        return EmbeddingVerdict::fails("Thm10.1:p0≤p1", C, ExtremalKind::SpatialSpread { eps });
    }
    let (d0, d1) = (delta(a), delta(b));
    match d0.cmp_num(&d1) {
        Ordering::Greater => return EmbeddingVerdict::holds("Thm10.1(i)", C),
        Ordering::Less => return EmbeddingVerdict::fails("Thm10.1(i)", C, spike()),
        Ordering::Equal => {}
    }
    if a.q.le(&b.q) {
        tiebreak(
            &a.b,
            &b.b,
            r0,
            r1,
            "Thm10.1(ii)",
            "Thm10.1(iii)",
            C,
            lacunary(&d0, &midpoint(&a.b, &b.b), 0.0),
            lacunary_r(&d0, &a.b, r0, r1),
        )
    } else {
        let big0 = a.b.add(&inv(&a.q));
        let big1 = b.b.add(&inv(&b.q));
        tiebreak(
            &big0,
            &big1,
            r0,
            r1,
            "Thm10.1(iv)",
            "Thm10.1(v)",
            C,
            ExtremalKind::PowerDiagonal {
                delta: f(&d0),
                eps: f(&midpoint(&big0, &big1)),
                layout: Layout::Nested,
                p: a.p.to_f64(),
            },
            log_refined(&d0, &big1, r0, r1, Layout::Nested, &a.p),
        )
    }
}

fn log_refined(d0: &Num, bq: &Num, r0: &Exponent, r1: &Exponent, layout: Layout, p: &Exponent) -> ExtremalKind {
    ExtremalKind::LogRefined {
        delta: f(d0),
        bq: f(bq),
        beta: mid_f(f(&inv(r0)), f(&inv(r1))),
        layout,
        p: p.to_f64(),
    }
}

fn block_constant(d0: &Num, layout: Layout, p: &Exponent) -> ExtremalKind {
    ExtremalKind::BlockConstant { delta: f(d0), layout, p: p.to_f64() }
}

/// Shared shape of the same-p / Franke–Jawerth tables: a δ comparison,
/// then an "ordered" branch comparing b and a crossed branch comparing
/// b + 1/(·) with a block-constant witness.
#[allow(clippy::too_many_arguments)]
fn mixed_table(
    a: &SpaceDescriptor,
    b: &SpaceDescriptor,
    thm: &str,
    cite: &str,
    ordered: bool,
    lhs: Num,
    rhs: Num,
    layout: Layout,
    bq: Num,
) -> EmbeddingVerdict {
    let (r0, r1) = (a.r(), b.r());
    let (d0, d1) = (delta(a), delta(b));
    let c = |k: &str| format!("{thm}({k})");
    match d0.cmp_num(&d1) {
        Ordering::Greater => return EmbeddingVerdict::holds(c("i"), cite),
        Ordering::Less => return EmbeddingVerdict::fails(c("i"), cite, spike()),
        Ordering::Equal => {}
    }
    if ordered {
        tiebreak(
            &a.b,
            &b.b,
            r0,
            r1,
            &c("ii"),
            &c("iii"),
            cite,
            lacunary(&d0, &midpoint(&a.b, &b.b), 0.0),
            lacunary_r(&d0, &a.b, r0, r1),
        )
    } else {
        tiebreak(
            &lhs,
            &rhs,
            r0,
            r1,
            &c("iv"),
            &c("v"),
            cite,
            block_constant(&d0, layout, &a.p),
            log_refined(&d0, &bq, r0, r1, layout, &a.p),
        )
    }
}

/// TF(p, q0) → TB(p, q1)
fn thm12_1(a: &SpaceDescriptor, b: &SpaceDescriptor) -> EmbeddingVerdict {
    let big_m = a.p.clone().max(a.q.clone());
    let layout = if big_m == a.p { Layout::Nested } else { Layout::Cover };
    let lhs = a.b.add(&inv(&big_m));
    let rhs = b.b.add(&inv(&b.q));
    mixed_table(a, b, "Thm12.1", "Thm 12.1", b.q.ge(&big_m), lhs, rhs.clone(), layout, rhs)
}

/// TB(p, q0) → TF(p, q1)
fn thm12_2(a: &SpaceDescriptor, b: &SpaceDescriptor) -> EmbeddingVerdict {
    let m = a.p.clone().min(b.q.clone());
    let layout = if m == a.p { Layout::Nested } else { Layout::Cover };
    let lhs = a.b.add(&inv(&a.q));
    let rhs = b.b.add(&inv(&m));
    mixed_table(a, b, "Thm12.2", "Thm 12.2", a.q.le(&m), lhs.clone(), rhs, layout, lhs)
}

/// TF(p0) → TB(p1), p0 < p1
fn thm14_1(a: &SpaceDescriptor, b: &SpaceDescriptor) -> EmbeddingVerdict {
    let lhs = a.b.add(&inv(&a.p));
    let rhs = b.b.add(&inv(&b.q));
    mixed_table(a, b, "Thm14.1", "Thm 14.1", a.p.le(&b.q), lhs, rhs.clone(), Layout::Nested, rhs)
}

/// TB(p0) → TF(p1), p0 < p1
fn thm14_2(a: &SpaceDescriptor, b: &SpaceDescriptor) -> EmbeddingVerdict {
    let lhs = a.b.add(&inv(&a.q));
    let rhs = b.b.add(&inv(&b.p));
    mixed_table(a, b, "Thm14.2", "Thm 14.2", a.q.le(&b.p), lhs.clone(), rhs, Layout::Nested, lhs)
}

/// TF(p0) → TF(p1), p0 ≤ p1 < ∞
fn thm13_1(a: &SpaceDescriptor, b: &SpaceDescriptor) -> EmbeddingVerdict {
    const C: &str = "Thm 13.1";
    let (r0, r1) = (a.r(), b.r());
    let (d0, d1) = (delta(a), delta(b));
    match d0.cmp_num(&d1) {
        Ordering::Greater => return EmbeddingVerdict::holds("Thm13.1(i)", C),
        Ordering::Less => return EmbeddingVerdict::fails("Thm13.1(i)", C, spike()),
        Ordering::Equal => {}
    }
    let lac = lacunary(&d0, &midpoint(&a.b, &b.b), 0.0);
    let lac_r = lacunary_r(&d0, &a.b, r0, r1);
    if a.p.lt(&b.p) {
        return tiebreak(&a.b, &b.b, r0, r1, "Thm13.1(ii)", "Thm13.1(iii)", C, lac, lac_r);
    }
    if a.q.le(&b.q) {
        return tiebreak(&a.b, &b.b, r0, r1, "Thm13.1(iv)", "Thm13.1(v)", C, lac, lac_r);
    }
    let big0 = a.b.add(&inv(&a.q));
    let big1 = b.b.add(&inv(&b.q));
    tiebreak(
        &big0,
        &big1,
        r0,
        r1,
        "Thm13.1(vi)",
        "Thm13.1(vii)",
        C,
        block_constant(&d0, Layout::Cover, &a.p),
        log_refined(&d0, &big1, r0, r1, Layout::Cover, &a.p),
    )
}

fn prepare_single(x: &SpaceDescriptor) -> Result<SpaceDescriptor, EmbedError> {
    validate_descriptor(x).map_err(EmbedError::Invalid)?;
    let c = canonicalize_descriptor(x).map_err(|e| EmbedError::UnsupportedPair(e.to_string()))?;
    match c.desc.family {
        Family::TB | Family::TF => Ok(c.desc),
        other => unsupported(format!("no characterization covers family {}", other.tag())),
    }
}

/// σ_p = d(1/p − 1)_+
pub fn sigma_p(p: &Exponent, d: u32) -> Num {
    dim(d).mul(&positive_part(&inv(p).sub(&Num::one())))
}

/// Threshold test with the strict/non-strict split used by the L¹_loc and C tables.
fn threshold(b: &Num, t: &Num, strict: bool) -> bool {
    if strict {
        b.gt(t)
    } else {
        b.ge(t)
    }
}

/// Decides T ↪ L¹_loc.
pub fn embeds_l1loc(desc: &SpaceDescriptor) -> Result<EmbeddingVerdict, EmbedError> {
    let x = prepare_single(desc)?;
    if x.b.is_zero() {
        return unsupported("the L¹_loc characterization requires b ≠ 0");
    }
    Ok(match x.family {
        Family::TB => l1loc_tb(&x),
        _ => l1loc_tf(&x),
    })
}

fn l1loc_tb(x: &SpaceDescriptor) -> EmbeddingVerdict {
    const C: &str = "Thm 15.3";
    let c = |k: &str| format!("Thm15.3({k})");
    let sigma = sigma_p(&x.p, x.d);
    match x.s.cmp_num(&sigma) {
        Ordering::Greater => return EmbeddingVerdict::holds(c("i"), C),
        Ordering::Less => return EmbeddingVerdict::fails(c("i"), C, spike()),
        Ordering::Equal => {}
    }
    let dl = delta(x);
    let (b, q, r, p) = (&x.b, &x.q, x.r(), &x.p);
    let one = Exponent::int(1);
    let two = Exponent::int(2);
    let zero = Num::zero();
    let lac = || lacunary(&dl, &midpoint(b, &zero), 0.0);
    let bq = b.add(&inv(q));
    if p.le(&one) {
        if q.le(&one) {
            return if b.gt(&zero) { EmbeddingVerdict::holds(c("ii"), C) } else { EmbeddingVerdict::fails(c("ii"), C, lac()) };
        }
        let thr = Num::one().sub(&inv(q));
        let strict = r.gt(&one);
        let k = if strict { "iv" } else { "iii" };
        if threshold(b, &thr, strict) {
            return EmbeddingVerdict::holds(c(k), C);
        }
        if b.lt(&thr) {
            let lo = inv(q).max(bq);
            let eps = midpoint(&lo, &Num::one());
            return EmbeddingVerdict::fails(
                c(k),
                C,
                ExtremalKind::PowerDiagonal { delta: f(&dl), eps: f(&eps), layout: Layout::Nested, p: p.to_f64() },
            );
        }
        return EmbeddingVerdict::fails(c(k), C, log_refined(&dl, &Num::one(), r, &one, Layout::Nested, p));
    }
    if p.le(&two) {
        if q.le(p) {
            return if b.gt(&zero) { EmbeddingVerdict::holds(c("v"), C) } else { EmbeddingVerdict::fails(c("v"), C, lac()) };
        }
        let thr = inv(p).sub(&inv(q));
        let strict = r.gt(p);
        let k = if strict { "vii" } else { "vi" };
        if threshold(b, &thr, strict) {
            return EmbeddingVerdict::holds(c(k), C);
        }
        if b.lt(&thr) {
            return EmbeddingVerdict::fails(c(k), C, spread_level_witness(x));
        }
        return EmbeddingVerdict::fails(c(k), C, log_refined(&dl, &inv(p), r, p, Layout::Nested, p));
    }
    if q.le(&two) {
        return if b.gt(&zero) { EmbeddingVerdict::holds(c("viii"), C) } else { EmbeddingVerdict::fails(c("viii"), C, lac()) };
    }
    let half = Num::ratio(1, 2);
    let thr = half.sub(&inv(q));
    let strict = r.gt(&two);
    let k = if strict { "x" } else { "ix" };
    if threshold(b, &thr, strict) {
        return EmbeddingVerdict::holds(c(k), C);
    }
    if b.lt(&thr) {
        let eps = midpoint(&bq, &half);
        return EmbeddingVerdict::fails(
            c(k),
            C,
            ExtremalKind::PowerDiagonal { delta: f(&dl), eps: f(&eps), layout: Layout::Nested, p: p.to_f64() },
        );
    }
    EmbeddingVerdict::fails(c(k), C, log_refined(&dl, &half, r, &two, Layout::Nested, p))
}

/// 1 < p ≤ 2, p < q, b < 1/p − 1/q: levels filled on ≈ 2^{jd}(1+j)^{−β} cubes.
/// The level term 2^{−jd/p}‖λ^j‖_p equals (1+j)^{−ε'} with
/// ε' = (max{b+1/q, 1/q} + 1 − β/p')/2 and 1 < β < p'·min{1−b−1/q, 1−1/q}.
fn spread_level_witness(x: &SpaceDescriptor) -> ExtremalKind {
    let p = x.p.to_f64();
    let q = x.q.to_f64();
    let b = x.b.to_f64();
    let pc = conjugate_exponent(&x.p).to_f64();
    let top = pc * (1.0 - b - 1.0 / q).min(1.0 - 1.0 / q);
    let beta = mid_f(1.0, top);
    let eps_level = mid_f((b + 1.0 / q).max(1.0 / q), 1.0 - beta / pc);
    ExtremalKind::SpreadLevel { beta, eps: beta / p - eps_level }
}

fn l1loc_tf(x: &SpaceDescriptor) -> EmbeddingVerdict {
    const C: &str = "ThmFL1loc";
    let c = |k: &str| format!("ThmFL1loc({k})");
    let sigma = sigma_p(&x.p, x.d);
    match x.s.cmp_num(&sigma) {
        Ordering::Greater => return EmbeddingVerdict::holds(c("i"), C),
        Ordering::Less => return EmbeddingVerdict::fails(c("i"), C, spike()),
        Ordering::Equal => {}
    }
    let dl = delta(x);
    let (b, q, r, p) = (&x.b, &x.q, x.r(), &x.p);
    let one = Exponent::int(1);
    let two = Exponent::int(2);
    let zero = Num::zero();
    let lac = || lacunary(&dl, &midpoint(b, &zero), 0.0);
    if p.lt(&one) {
        let k = if r.le(&one) { "ii" } else { "iii" };
        return if b.gt(&zero) { EmbeddingVerdict::holds(c(k), C) } else { EmbeddingVerdict::fails(c(k), C, lac()) };
    }
    let mn = two.clone().min(p.clone());
    let r_small = r.le(&mn);
    if q.le(&two) {
        let k = if r_small { "iv" } else { "v" };
        return if b.gt(&zero) { EmbeddingVerdict::holds(c(k), C) } else { EmbeddingVerdict::fails(c(k), C, lac()) };
    }
    let half = Num::ratio(1, 2);
    let thr = half.sub(&inv(q));
    let k = if r_small { "vi" } else { "vii" };
    if threshold(b, &thr, !r_small) {
        return EmbeddingVerdict::holds(c(k), C);
    }
    if b.lt(&thr) {
        let eps = midpoint(&b.add(&inv(q)), &half);
        return EmbeddingVerdict::fails(
            c(k),
            C,
            ExtremalKind::PowerDiagonal { delta: f(&dl), eps: f(&eps), layout: Layout::Cover, p: p.to_f64() },
        );
    }
    // b = 1/2 − 1/q with r > min{2, p}: necessity is proved only for r > 2
    if r.gt(&two) {
        EmbeddingVerdict::fails(c(k), C, log_refined(&dl, &half, r, &two, Layout::Cover, p))
    } else {
        EmbeddingVerdict::unknown(c(k), C)
    }
}

/// Decides T ↪ C. With b = 0 only the sufficient clauses are available.
pub fn embeds_c(desc: &SpaceDescriptor) -> Result<EmbeddingVerdict, EmbedError> {
    let x = prepare_single(desc)?;
    let tf = x.family == Family::TF;
    let (thm, cite) = if tf { ("Thm16.5", "Thm 16.5") } else { ("Thm16.2", "Thm 16.2") };
    let c = |k: &str| format!("{thm}({k})");
    let dp = dim(x.d).mul(&inv(&x.p));
    let dl = delta(&x);
    let suff_only = x.b.is_zero();
    let fail = |k: &str, kind: ExtremalKind| {
        if suff_only {
            EmbeddingVerdict::unknown(c(k), cite)
        } else {
            EmbeddingVerdict::fails(c(k), cite, kind)
        }
    };
    match x.s.cmp_num(&dp) {
        Ordering::Greater => return Ok(EmbeddingVerdict::holds(c("i"), cite)),
        Ordering::Less => return Ok(fail("i", spike())),
        Ordering::Equal => {}
    }
    let (b, r) = (&x.b, x.r());
    let one = Exponent::int(1);
    let zero = Num::zero();
    let r_small = r.le(&one);
    // the exponent whose size splits the table: q for B, p for F
    let e = if tf { &x.p } else { &x.q };
    let k = match (tf, e.le(&one), r_small) {
        (false, true, true) => "ii",
        (false, false, true) => "iii",
        (false, true, false) => "iv",
        (false, false, false) => "v",
        (true, true, false) => "ii",
        (true, true, true) => "iii",
        (true, false, false) => "iv",
        (true, false, true) => "v",
    };
    if e.le(&one) {
        if threshold(b, &zero, !r_small) {
            return Ok(EmbeddingVerdict::holds(c(k), cite));
        }
        return Ok(fail(k, lacunary(&dl, &midpoint(b, &zero), 0.0)));
    }
    let thr = conjugate_exponent(e).reciprocal();
    if threshold(b, &thr, !r_small) {
        return Ok(EmbeddingVerdict::holds(c(k), cite));
    }
    if b.lt(&thr) {
        let eps = midpoint(&b.add(&inv(e)), &Num::one());
        return Ok(fail(
            k,
            ExtremalKind::PowerDiagonal { delta: f(&dl), eps: f(&eps), layout: Layout::Nested, p: x.p.to_f64() },
        ));
    }
    Ok(fail(k, log_refined(&dl, &Num::one(), r, &one, Layout::Nested, &x.p)))
}

/// Decides T^b_r B^s_{p,q} ∩ ĜM^d ↪ L_p.
pub fn gm_embeds_lp(
    s: &Num,
    p: &Exponent,
    q: &Exponent,
    r: &Exponent,
    b: &Num,
    d: u32,
) -> Result<EmbeddingVerdict, EmbedError> {
    const C: &str = "ThmBLpGM";
    let c = |k: &str| format!("ThmBLpGM({k})");
    let lower = Num::ratio(2 * d as i64, d as i64 + 1);
    if d == 0 || p.is_infinite() || !p.gt_num(&lower) {
        return unsupported("requires 2d/(d+1) < p < ∞");
    }
    if q.is_infinite() || !q.is_positive() {
        return unsupported("requires 0 < q < ∞");
    }
    if b.is_zero() {
        return unsupported("requires b ≠ 0");
    }
    let zero = Num::zero();
    match s.cmp_num(&zero) {
        Ordering::Greater => return Ok(EmbeddingVerdict::holds(c("i"), C)),
        Ordering::Less => return Ok(EmbeddingVerdict::fails_named(c("i"), C, "GMPowerProfile")),
        Ordering::Equal => {}
    }
    if p.lt(q) {
        let thr = inv(p).sub(&inv(q));
        if b.gt(&thr) {
            return Ok(EmbeddingVerdict::holds(c("ii"), C));
        }
        if b.eq_num(&thr) {
            return Ok(if r.le(p) {
                EmbeddingVerdict::holds(c("iii"), C)
            } else {
                EmbeddingVerdict::fails_named(c("iii"), C, "GMLogProfile")
            });
        }
        return Ok(EmbeddingVerdict::fails_named(c("ii"), C, "GMLogProfile"));
    }
    Ok(if b.gt(&zero) {
        EmbeddingVerdict::holds(c("iv"), C)
    } else {
        EmbeddingVerdict::fails_named(c("iv"), C, "GMLogProfile")
    })
}

/// Sufficient embeddings between T^b_r ℓ_{u,q} and ℓ_{u,q}(log ℓ)_b with the same u.
pub fn embeds_lorentz(src: &SpaceDescriptor, dst: &SpaceDescriptor) -> Result<EmbeddingVerdict, EmbedError> {
    const C: &str = "Prop 17.19";
    for x in [src, dst] {
        validate_descriptor(x).map_err(EmbedError::Invalid)?;
        if !matches!(x.family, Family::TLorentz | Family::LorentzZygmund) {
            return unsupported(format!("{} is not a Lorentz-type family", x.family.tag()));
        }
    }
    if src.u != dst.u {
        return unsupported("Lorentz embeddings are compared at equal u only");
    }
    if src.d != dst.d {
        return unsupported("dimensions differ");
    }
    if same_space(src, dst) {
        return Ok(EmbeddingVerdict::holds("reflexive", C));
    }
    let (t, lz, t_is_src) = match (src.family, dst.family) {
        (Family::LorentzZygmund, Family::TLorentz) => (dst, src, false),
        (Family::TLorentz, Family::LorentzZygmund) => (src, dst, true),
        _ => return Ok(EmbeddingVerdict::unknown("Prop17.19", C)),
    };
    let (q, r) = (&t.q, t.r());
    let lo = q.clone().min(r.clone());
    let hi = q.clone().max(r.clone());
    let shifted = |e: &Exponent| t.b.sub(&inv(r)).add(&inv(e));
    let fits = |qq: &Exponent, bb: &Num| lz.q == *qq && lz.b.eq_num(bb);
    let hit = if t_is_src {
        if fits(r, &shifted(&hi)) {
            Some("Prop17.19(ii)")
        } else if fits(&hi, &t.b) {
            Some("Prop17.19(iv)")
        } else {
            None
        }
    } else if fits(r, &shifted(&lo)) {
        Some("Prop17.19(i)")
    } else if fits(&lo, &t.b) {
        Some("Prop17.19(iii)")
    } else {
        None
    };
    Ok(match hit {
        Some(k) => EmbeddingVerdict::holds(k, C),
        None => EmbeddingVerdict::unknown("Prop17.19", C),
    })
}

fn same_space(a: &SpaceDescriptor, b: &SpaceDescriptor) -> bool {
    a.family == b.family && a.u == b.u && a.q == b.q && a.r == b.r && a.b.eq_num(&b.b) && a.d == b.d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::parse_descriptor;

    fn v(a: &str, b: &str) -> EmbeddingVerdict {
        embeds(&parse_descriptor(a).unwrap(), &parse_descriptor(b).unwrap()).unwrap()
    }

    fn one(a: &str, g: fn(&SpaceDescriptor) -> Result<EmbeddingVerdict, EmbedError>) -> EmbeddingVerdict {
        g(&parse_descriptor(a).unwrap()).unwrap()
    }

    #[test]
    fn tb_examples() {
        let x = v("TB(s=1,p=1,q=1,r=1,b=1)", "TB(s=0,p=2,q=5,r=7,b=-3)");
        assert_eq!((x.status, x.condition.as_str()), (Status::Holds, "Thm10.1(i)"));
        let x = v("TB(s=1,p=2,q=1,r=3,b=0.5)", "TB(s=1,p=2,q=2,r=1,b=0.2)");
        assert_eq!((x.status, x.condition.as_str()), (Status::Holds, "Thm10.1(ii)"));
        let x = v("TB(s=1,p=2,q=1,r=1,b=1)", "TB(s=1,p=1,q=1,r=1,b=1)");
        assert_eq!(x.status, Status::Fails);
        assert_eq!(x.witness.as_deref(), Some("SpatialSpread"));
        let e = embeds(
            &parse_descriptor("TF(s=1,p=2,q=3,r=1,b=0.9)").unwrap(),
            &parse_descriptor("TB(s=1,p=2,q=1,r=2,b=0)").unwrap(),
        );
        assert!(matches!(e, Err(EmbedError::UnsupportedPair(_))));
    }

    #[test]
    fn l1loc_examples() {
        let x = one("TB(s=1,p=2,q=7,r=9,b=-5,d=3)", embeds_l1loc);
        assert_eq!((x.status, x.condition.as_str()), (Status::Holds, "Thm15.3(i)"));
        let x = one("TB(s=0,p=2,q=3,r=1,b=1/6)", embeds_l1loc);
        assert_eq!((x.status, x.condition.as_str()), (Status::Holds, "Thm15.3(vi)"));
        let x = one("TB(s=0,p=2,q=3,r=3,b=1/6)", embeds_l1loc);
        assert_eq!((x.status, x.condition.as_str()), (Status::Fails, "Thm15.3(vii)"));
    }

    #[test]
    fn tf_l1loc_gap() {
        let x = one("TF(s=0,p=3/2,q=4,r=2,b=1/4)", embeds_l1loc);
        assert_eq!(x.status, Status::UnknownPerPaper);
        let x = one("TF(s=0,p=3/2,q=4,r=3,b=1/4)", embeds_l1loc);
        assert_eq!(x.status, Status::Fails);
        let x = one("TF(s=0,p=3/2,q=4,r=3/2,b=1/4)", embeds_l1loc);
        assert_eq!((x.status, x.condition.as_str()), (Status::Holds, "ThmFL1loc(vi)"));
    }

    #[test]
    fn c_examples() {
        let x = one("TB(s=2,p=1,q=9,r=9,b=-1)", embeds_c);
        assert_eq!((x.status, x.condition.as_str()), (Status::Holds, "Thm16.2(i)"));
        let x = one("TB(s=1,p=1,q=2,r=2,b=0.6)", embeds_c);
        assert_eq!((x.status, x.condition.as_str()), (Status::Holds, "Thm16.2(v)"));
        let x = one("TB(s=0.5,p=1,q=2,r=2,b=1)", embeds_c);
        assert_eq!((x.status, x.witness.as_deref()), (Status::Fails, Some("Spike")));
    }

    #[test]
    fn gm_examples() {
        let n = |x: &str| Num::parse(x).unwrap();
        let e = |x: &str| Exponent::parse(x).unwrap();
        let x = gm_embeds_lp(&n("1"), &e("2"), &e("1"), &e("1"), &n("-5"), 1).unwrap();
        assert_eq!((x.status, x.condition.as_str()), (Status::Holds, "ThmBLpGM(i)"));
        let x = gm_embeds_lp(&n("0"), &e("2"), &e("3"), &e("2"), &n("1/6"), 1).unwrap();
        assert_eq!((x.status, x.condition.as_str()), (Status::Holds, "ThmBLpGM(iii)"));
        let x = gm_embeds_lp(&n("-1"), &e("2"), &e("3"), &e("2"), &n("1/6"), 1).unwrap();
        assert_eq!(x.status, Status::Fails);
    }

    #[test]
    fn lorentz_examples() {
        let t = parse_descriptor("TLor(u=2,q=1,r=1,b=1)").unwrap();
        let lz = parse_descriptor("LZ(u=2,q=1,b=1)").unwrap();
        assert_eq!(embeds_lorentz(&lz, &t).unwrap().status, Status::Holds);
        assert_eq!(embeds_lorentz(&t, &t).unwrap().condition, "reflexive");
        let t3 = parse_descriptor("TLor(u=3,q=1,r=1,b=1)").unwrap();
        assert!(matches!(embeds_lorentz(&t, &t3), Err(EmbedError::UnsupportedPair(_))));
    }
}
