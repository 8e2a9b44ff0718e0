//! Parameter algebra: extended exponents, space descriptors and the
//! descriptor-level operations (validity, duality, lifting, canonical form).

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Absolute tolerance used whenever a comparison involves a float.
pub const MIXED_TOL: f64 = 1e-12;

/// A real parameter: exact rational when the input was rational, float otherwise.
#[derive(Clone, Debug)]
pub enum Num {
    Exact(BigRational),
    Float(f64),
}

impl Num {
    pub fn int(n: i64) -> Self {
        Num::Exact(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator");
        Num::Exact(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn zero() -> Self {
        Num::int(0)
    }

    pub fn one() -> Self {
        Num::int(1)
    }

    /// Float-backed value. Finite floats only.
    pub fn float(x: f64) -> Self {
        assert!(x.is_finite(), "non-finite parameter");
        Num::Float(x)
    }

    /// Converts an f64 exactly (every finite double is a dyadic rational).
    pub fn exact_from_f64(x: f64) -> Option<Self> {
        BigRational::from_float(x).map(Num::Exact)
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Num::Exact(_))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Num::Exact(r) => rational_to_f64(r),
            Num::Float(x) => *x,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Num::Exact(r) => Some(r),
            Num::Float(_) => None,
        }
    }

    fn lift2(
        &self,
        other: &Num,
        exact: impl Fn(&BigRational, &BigRational) -> BigRational,
        float: impl Fn(f64, f64) -> f64,
    ) -> Num {
        match (self, other) {
            (Num::Exact(a), Num::Exact(b)) => Num::Exact(exact(a, b)),
            _ => Num::Float(float(self.to_f64(), other.to_f64())),
        }
    }

    pub fn add(&self, o: &Num) -> Num {
        self.lift2(o, |a, b| a + b, |a, b| a + b)
    }

    pub fn sub(&self, o: &Num) -> Num {
        self.lift2(o, |a, b| a - b, |a, b| a - b)
    }

    pub fn mul(&self, o: &Num) -> Num {
        self.lift2(o, |a, b| a * b, |a, b| a * b)
    }

    /// Division; `None` on a zero divisor.
    pub fn div(&self, o: &Num) -> Option<Num> {
        if o.is_zero() {
            return None;
        }
        Some(self.lift2(o, |a, b| a / b, |a, b| a / b))
    }

    pub fn neg(&self) -> Num {
        match self {
            Num::Exact(r) => Num::Exact(-r),
            Num::Float(x) => Num::Float(-x),
        }
    }

    pub fn recip(&self) -> Option<Num> {
        Num::one().div(self)
    }

    pub fn half(&self) -> Num {
        self.mul(&Num::ratio(1, 2))
    }

    pub fn is_zero(&self) -> bool {
        self.cmp_num(&Num::zero()) == Ordering::Equal
    }

    pub fn signum(&self) -> Ordering {
        self.cmp_num(&Num::zero())
    }

    /// Exact comparison for two rationals, otherwise equality within `MIXED_TOL`.
    pub fn cmp_num(&self, o: &Num) -> Ordering {
        match (self, o) {
            (Num::Exact(a), Num::Exact(b)) => a.cmp(b),
            _ => {
                let (a, b) = (self.to_f64(), o.to_f64());
                if (a - b).abs() <= MIXED_TOL {
                    Ordering::Equal
                } else if a < b {
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            }
        }
    }

    pub fn lt(&self, o: &Num) -> bool {
        self.cmp_num(o) == Ordering::Less
    }
    pub fn le(&self, o: &Num) -> bool {
        self.cmp_num(o) != Ordering::Greater
    }
    pub fn gt(&self, o: &Num) -> bool {
        self.cmp_num(o) == Ordering::Greater
    }
    pub fn ge(&self, o: &Num) -> bool {
        self.cmp_num(o) != Ordering::Less
    }
    pub fn eq_num(&self, o: &Num) -> bool {
        self.cmp_num(o) == Ordering::Equal
    }

    pub fn max(self, o: Num) -> Num {
        if self.ge(&o) {
            self
        } else {
            o
        }
    }

    pub fn min(self, o: Num) -> Num {
        if self.le(&o) {
            self
        } else {
            o
        }
    }

    /// Parses `a/b`, a decimal (converted exactly) or an integer.
    pub fn parse(text: &str) -> Result<Num, String> {
        let t = text.trim();
        if t.is_empty() {
            return Err("empty number".into());
        }
        if let Some((n, d)) = t.split_once('/') {
            let n: BigInt = parse_decimal(n)?
                .to_integer_checked()
                .ok_or_else(|| format!("fraction numerator must be an integer: {n}"))?;
            let d: BigInt = parse_decimal(d)?
                .to_integer_checked()
                .ok_or_else(|| format!("fraction denominator must be an integer: {d}"))?;
            if d.is_zero() {
                return Err("zero denominator".into());
            }
            return Ok(Num::Exact(BigRational::new(n, d)));
        }
        parse_decimal(t).map(Num::Exact)
    }
}

trait ToIntegerChecked {
    fn to_integer_checked(&self) -> Option<BigInt>;
}

impl ToIntegerChecked for BigRational {
    fn to_integer_checked(&self) -> Option<BigInt> {
        if self.is_integer() {
            Some(self.to_integer())
        } else {
            None
        }
    }
}

/// Base-10 literal to an exact rational. Accepts an optional exponent part.
fn parse_decimal(text: &str) -> Result<BigRational, String> {
    let t = text.trim();
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => {
            let e: i32 = t[i + 1..]
                .parse()
                .map_err(|_| format!("bad exponent in {t:?}"))?;
            (&t[..i], e)
        }
        None => (t, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(format!("not a number: {t:?}"));
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(format!("not a number: {t:?}"));
    }
    let digits = format!("{int_part}{frac_part}");
    let n: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().map_err(|_| format!("not a number: {t:?}"))?
    };
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut r = BigRational::from_integer(n);
    if scale >= 0 {
        r *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        r /= BigRational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Ok(if neg { -r } else { r })
}

fn rational_to_f64(r: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    // huge numerator/denominator: scale down by bit length first
    let shift = r.denom().bits().max(r.numer().bits()) as i64 - 60;
    let n = (r.numer() >> shift.max(0) as usize).to_f64().unwrap_or(0.0);
    let d = (r.denom() >> shift.max(0) as usize).to_f64().unwrap_or(1.0);
    n / d
}

impl fmt::Display for Num {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Num::Exact(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Num::Float(x) => write!(f, "{x:?}"),
        }
    }
}

impl PartialEq for Num {
    fn eq(&self, other: &Self) -> bool {
        self.eq_num(other)
    }
}

impl From<i64> for Num {
    fn from(v: i64) -> Self {
        Num::int(v)
    }
}

/// Integrability / summability exponent in (0, ∞].
#[derive(Clone, Debug, PartialEq)]
pub enum Exponent {
    Finite(Num),
    Infinity,
}

impl Exponent {
    pub fn int(n: i64) -> Self {
        Exponent::Finite(Num::int(n))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Exponent::Finite(Num::ratio(n, d))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Exponent::Infinity)
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Exponent::Infinity => true,
            Exponent::Finite(v) => v.gt(&Num::zero()),
        }
    }

    /// 1/p with 1/∞ = 0 exactly.
    pub fn reciprocal(&self) -> Num {
        match self {
            Exponent::Infinity => Num::zero(),
            Exponent::Finite(v) => v.recip().expect("exponent must be positive"),
        }
    }

    /// Inverse of [`Exponent::reciprocal`]: 0 maps to ∞.
    pub fn from_reciprocal(inv: &Num) -> Exponent {
        if inv.is_zero() {
            Exponent::Infinity
        } else {
            Exponent::Finite(inv.recip().unwrap())
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Exponent::Infinity => f64::INFINITY,
            Exponent::Finite(v) => v.to_f64(),
        }
    }

    pub fn cmp_exp(&self, o: &Exponent) -> Ordering {
        // larger exponent = smaller reciprocal
        o.reciprocal().cmp_num(&self.reciprocal())
    }

    pub fn lt(&self, o: &Exponent) -> bool {
        self.cmp_exp(o) == Ordering::Less
    }
    pub fn le(&self, o: &Exponent) -> bool {
        self.cmp_exp(o) != Ordering::Greater
    }
    pub fn gt(&self, o: &Exponent) -> bool {
        self.cmp_exp(o) == Ordering::Greater
    }
    pub fn ge(&self, o: &Exponent) -> bool {
        self.cmp_exp(o) != Ordering::Less
    }

    pub fn lt_num(&self, v: &Num) -> bool {
        match self {
            Exponent::Infinity => false,
            Exponent::Finite(x) => x.lt(v),
        }
    }
    pub fn le_num(&self, v: &Num) -> bool {
        match self {
            Exponent::Infinity => false,
            Exponent::Finite(x) => x.le(v),
        }
    }
    pub fn gt_num(&self, v: &Num) -> bool {
        !self.le_num(v)
    }
    pub fn ge_num(&self, v: &Num) -> bool {
        !self.lt_num(v)
    }

    pub fn min(self, o: Exponent) -> Exponent {
        if self.le(&o) {
            self
        } else {
            o
        }
    }

    pub fn max(self, o: Exponent) -> Exponent {
        if self.ge(&o) {
            self
        } else {
            o
        }
    }

    pub fn parse(text: &str) -> Result<Exponent, String> {
        let t = text.trim();
        if t.eq_ignore_ascii_case("inf") || t == "∞" {
            return Ok(Exponent::Infinity);
        }
        let v = Num::parse(t)?;
        if !v.gt(&Num::zero()) {
            return Err(format!("exponent must be positive, got {t}"));
        }
        Ok(Exponent::Finite(v))
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Infinity => write!(f, "inf"),
            Exponent::Finite(v) => write!(f, "{v}"),
        }
    }
}

/// p' with 1/p + 1/p' = 1 for p ≥ 1 and p' = ∞ for p ≤ 1.
pub fn conjugate_exponent(p: &Exponent) -> Exponent {
    match p {
        Exponent::Infinity => Exponent::int(1),
        Exponent::Finite(v) => {
            if v.le(&Num::one()) {
                Exponent::Infinity
            } else {
                let pv = v.div(&v.sub(&Num::one())).unwrap();
                Exponent::Finite(pv)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    TB,
    TF,
    TstarB,
    TstarF,
    B,
    F,
    BdiffZero,
    Lip,
    TLorentz,
    LorentzZygmund,
}

impl Family {
    /// Tag used by the descriptor DSL.
    pub fn tag(self) -> &'static str {
        match self {
            Family::TB => "TB",
            Family::TF => "TF",
            Family::TstarB => "TSB",
            Family::TstarF => "TSF",
            Family::B => "B",
            Family::F => "F",
            Family::BdiffZero => "B0",
            Family::Lip => "Lip",
            Family::TLorentz => "TLor",
            Family::LorentzZygmund => "LZ",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Family> {
        Some(match tag {
            "TB" => Family::TB,
            "TF" => Family::TF,
            "TSB" => Family::TstarB,
            "TSF" => Family::TstarF,
            "B" => Family::B,
            "F" => Family::F,
            "B0" => Family::BdiffZero,
            "Lip" => Family::Lip,
            "TLor" => Family::TLorentz,
            "LZ" => Family::LorentzZygmund,
            _ => return None,
        })
    }

    pub fn has_r(self) -> bool {
        matches!(
            self,
            Family::TB | Family::TF | Family::TstarB | Family::TstarF | Family::TLorentz
        )
    }

    pub fn is_lorentz(self) -> bool {
        matches!(self, Family::TLorentz | Family::LorentzZygmund)
    }

    pub fn is_f_type(self) -> bool {
        matches!(self, Family::TF | Family::TstarF | Family::F)
    }

    /// Keys the DSL expects for this family, in print order.
    pub fn keys(self) -> &'static [&'static str] {
        match self {
            Family::TB | Family::TF => &["s", "p", "q", "r", "b", "d"],
            Family::TstarB | Family::TstarF => &["s", "p", "q", "r", "d"],
            Family::B | Family::F | Family::Lip => &["s", "b", "p", "q", "d"],
            Family::BdiffZero => &["b", "p", "q", "d"],
            Family::TLorentz => &["u", "q", "r", "b", "d"],
            Family::LorentzZygmund => &["u", "q", "b", "d"],
        }
    }
}

/// A space family together with its parameters.
///
/// Unused slots hold neutral values: `s = 0` for B0 and the Lorentz
/// families, `p = u` for the Lorentz families, `b = 0` for the star families.
#[derive(Clone, Debug, PartialEq)]
pub struct SpaceDescriptor {
    pub family: Family,
    pub s: Num,
    pub p: Exponent,
    pub q: Exponent,
    pub r: Option<Exponent>,
    pub b: Num,
    pub d: u32,
    pub u: Option<Exponent>,
}

impl SpaceDescriptor {
    pub fn tb(s: Num, p: Exponent, q: Exponent, r: Exponent, b: Num, d: u32) -> Self {
        SpaceDescriptor { family: Family::TB, s, p, q, r: Some(r), b, d, u: None }
    }

    pub fn tf(s: Num, p: Exponent, q: Exponent, r: Exponent, b: Num, d: u32) -> Self {
        SpaceDescriptor { family: Family::TF, s, p, q, r: Some(r), b, d, u: None }
    }

    pub fn tstar_b(s: Num, p: Exponent, q: Exponent, r: Exponent, d: u32) -> Self {
        SpaceDescriptor { family: Family::TstarB, s, p, q, r: Some(r), b: Num::zero(), d, u: None }
    }

    pub fn tstar_f(s: Num, p: Exponent, q: Exponent, r: Exponent, d: u32) -> Self {
        SpaceDescriptor { family: Family::TstarF, s, p, q, r: Some(r), b: Num::zero(), d, u: None }
    }

    pub fn besov(s: Num, b: Num, p: Exponent, q: Exponent, d: u32) -> Self {
        SpaceDescriptor { family: Family::B, s, p, q, r: None, b, d, u: None }
    }

    pub fn tl(s: Num, b: Num, p: Exponent, q: Exponent, d: u32) -> Self {
        SpaceDescriptor { family: Family::F, s, p, q, r: None, b, d, u: None }
    }

    pub fn bdiff_zero(b: Num, p: Exponent, q: Exponent, d: u32) -> Self {
        SpaceDescriptor { family: Family::BdiffZero, s: Num::zero(), p, q, r: None, b, d, u: None }
    }

    pub fn lip(s: Num, b: Num, p: Exponent, q: Exponent, d: u32) -> Self {
        SpaceDescriptor { family: Family::Lip, s, p, q, r: None, b, d, u: None }
    }

    pub fn t_lorentz(u: Exponent, q: Exponent, r: Exponent, b: Num, d: u32) -> Self {
        SpaceDescriptor {
            family: Family::TLorentz,
            s: Num::zero(),
            p: u.clone(),
            q,
            r: Some(r),
            b,
            d,
            u: Some(u),
        }
    }

    pub fn lorentz_zygmund(u: Exponent, q: Exponent, b: Num, d: u32) -> Self {
        SpaceDescriptor {
            family: Family::LorentzZygmund,
            s: Num::zero(),
            p: u.clone(),
            q,
            r: None,
            b,
            d,
            u: Some(u),
        }
    }

    /// The outer exponent; panics for families without one.
    pub fn r(&self) -> &Exponent {
        self.r.as_ref().expect("descriptor has no r parameter")
    }

    /// s − d/p as an exact quantity when possible.
    pub fn sobolev_index(&self) -> Num {
        self.s.sub(&Num::int(self.d as i64).mul(&self.p.reciprocal()))
    }

    pub fn with_s(&self, s: Num) -> Self {
        SpaceDescriptor { s, ..self.clone() }
    }

    pub fn with_b(&self, b: Num) -> Self {
        SpaceDescriptor { b, ..self.clone() }
    }
}

impl fmt::Display for SpaceDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for key in self.family.keys() {
            let v = match *key {
                "s" => self.s.to_string(),
                "p" => self.p.to_string(),
                "q" => self.q.to_string(),
                "r" => self.r.as_ref().map(|r| r.to_string()).unwrap_or_default(),
                "b" => self.b.to_string(),
                "d" => self.d.to_string(),
                "u" => self.u.as_ref().map(|u| u.to_string()).unwrap_or_default(),
                _ => unreachable!(),
            };
            parts.push(format!("{key}={v}"));
        }
        write!(f, "{}({})", self.family.tag(), parts.join(","))
    }
}

/// One violated descriptor constraint.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub constraint: String,
    pub citation: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}]", self.constraint, self.citation)
    }
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum ParamError {
    #[error("invalid descriptor: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("outside the supported parameter range: {0}")]
    OutOfPaperRange(String),
    #[error("unsupported family for this operation: {0}")]
    Unsupported(String),
}

fn violation(constraint: &str, citation: &str) -> Violation {
    Violation { constraint: constraint.to_string(), citation: citation.to_string() }
}

/// Checks every descriptor invariant; returns all violations found.
pub fn validate_descriptor(desc: &SpaceDescriptor) -> Result<(), Vec<Violation>> {
    let mut out = Vec::new();
    let fam = desc.family;
    if desc.d == 0 {
        out.push(violation("dimension d must be a positive integer", "Def. 3.1"));
    }
    if !desc.p.is_positive() {
        out.push(violation("p must be positive", "Def. 3.1"));
    }
    if !desc.q.is_positive() {
        out.push(violation("q must be positive", "Def. 3.1"));
    }
    match (&desc.r, fam.has_r()) {
        (None, true) => out.push(violation("family requires r", "Def. 3.1")),
        (Some(_), false) => out.push(violation("family takes no r parameter", "Prop 3.3")),
        (Some(r), true) if !r.is_positive() => {
            out.push(violation("r must be positive", "Def. 3.1"))
        }
        _ => {}
    }
    if fam.is_f_type() && desc.p.is_infinite() {
        out.push(violation("F-family requires p<∞", "Def. 3.1(ii)"));
    }
    match fam {
        Family::BdiffZero => {
            if !desc.b.gt(&desc.q.reciprocal().neg()) {
                out.push(violation("B0 requires b > −1/q", "Prop 3.3(iii)"));
            }
        }
        Family::Lip => {
            if !desc.s.gt(&Num::zero()) {
                out.push(violation("Lip requires s > 0", "Prop 3.3(iv)"));
            }
            if !desc.b.lt(&desc.q.reciprocal().neg()) {
                out.push(violation("Lip requires b < −1/q", "Prop 3.3(iv)"));
            }
        }
        Family::TLorentz | Family::LorentzZygmund => match &desc.u {
            None => out.push(violation("Lorentz family requires u", "Def. 17.18")),
            Some(u) if u.is_infinite() => {
                out.push(violation("Lorentz family requires u<∞", "Def. 17.18"))
            }
            Some(u) if !u.is_positive() => out.push(violation("u must be positive", "Def. 17.18")),
            _ => {}
        },
        _ => {
            if desc.u.is_some() {
                out.push(violation("u applies to Lorentz families only", "Def. 17.18"));
            }
        }
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

fn require_valid(desc: &SpaceDescriptor) -> Result<(), ParamError> {
    validate_descriptor(desc).map_err(ParamError::Invalid)
}

fn exp_in(e: &Exponent, lo: i64, lo_closed: bool, hi_inf_allowed: bool) -> bool {
    let lo = Num::int(lo);
    let above = if lo_closed { e.ge_num(&lo) } else { e.gt_num(&lo) };
    above && (hi_inf_allowed || !e.is_infinite())
}

/// Dual space descriptor per the duality theorems for TB, TF, B0 and Lip.
pub fn dual_descriptor(desc: &SpaceDescriptor) -> Result<SpaceDescriptor, ParamError> {
    require_valid(desc)?;
    let d = desc.d;
    match desc.family {
        Family::TB | Family::TF => {
            let r = desc.r();
            let pq_ok = if desc.family == Family::TB {
                exp_in(&desc.p, 1, true, false) && exp_in(&desc.q, 1, true, false)
            } else {
                exp_in(&desc.p, 1, false, false) && exp_in(&desc.q, 1, false, false)
            };
            let range = if desc.family == Family::TB {
                "Thm 9.1 requires p, q ∈ [1,∞), r ∈ (0,∞), b ≠ 0"
            } else {
                "Thm 9.1 requires p, q ∈ (1,∞), r ∈ (0,∞), b ≠ 0"
            };
            if !pq_ok || r.is_infinite() || desc.b.is_zero() {
                return Err(ParamError::OutOfPaperRange(range.into()));
            }
            Ok(SpaceDescriptor {
                family: desc.family,
                s: desc.s.neg(),
                p: conjugate_exponent(&desc.p),
                q: conjugate_exponent(&desc.q),
                r: Some(conjugate_exponent(r)),
                b: desc.b.neg(),
                d,
                u: None,
            })
        }
        Family::BdiffZero | Family::Lip => {
            let cite = if desc.family == Family::BdiffZero { "Thm 9.6" } else { "Thm 9.8" };
            if !exp_in(&desc.p, 1, false, false) || desc.q.is_infinite() {
                return Err(ParamError::OutOfPaperRange(format!(
                    "{cite} requires p ∈ (1,∞), q ∈ (0,∞)"
                )));
            }
            let s = if desc.family == Family::Lip { desc.s.neg() } else { Num::zero() };
            Ok(SpaceDescriptor::tf(
                s,
                conjugate_exponent(&desc.p),
                Exponent::int(2),
                conjugate_exponent(&desc.q),
                desc.b.neg().sub(&desc.q.reciprocal()),
                d,
            ))
        }
        other => Err(ParamError::Unsupported(format!(
            "no duality statement for family {}",
            other.tag()
        ))),
    }
}

/// Result of canonicalization; `inner_truncated` marks F(s,b,p,q) with b ≠ 0,
/// whose truncated sequence form is not available.
#[derive(Clone, Debug, PartialEq)]
pub struct Canonical {
    pub desc: SpaceDescriptor,
    pub inner_truncated: bool,
}

/// Rewrites classical families into truncated form. Idempotent.
pub fn canonicalize_descriptor(desc: &SpaceDescriptor) -> Result<Canonical, ParamError> {
    require_valid(desc)?;
    let d = desc.d;
    if matches!(desc.family, Family::BdiffZero | Family::Lip) && desc.p.is_infinite() {
        return Err(ParamError::OutOfPaperRange(format!(
            "{} with p=∞ has no TF form (TF requires p<∞)",
            desc.family.tag()
        )));
    }
    let out = match desc.family {
        Family::B => Canonical {
            desc: SpaceDescriptor::tb(
                desc.s.clone(),
                desc.p.clone(),
                desc.q.clone(),
                desc.q.clone(),
                desc.b.clone(),
                d,
            ),
            inner_truncated: false,
        },
        Family::BdiffZero => Canonical {
            desc: SpaceDescriptor::tf(
                Num::zero(),
                desc.p.clone(),
                Exponent::int(2),
                desc.q.clone(),
                desc.b.add(&desc.q.reciprocal()),
                d,
            ),
            inner_truncated: false,
        },
        Family::Lip => Canonical {
            desc: SpaceDescriptor::tf(
                desc.s.clone(),
                desc.p.clone(),
                Exponent::int(2),
                desc.q.clone(),
                desc.b.add(&desc.q.reciprocal()),
                d,
            ),
            inner_truncated: false,
        },
        Family::F => Canonical { desc: desc.clone(), inner_truncated: !desc.b.is_zero() },
        _ => Canonical { desc: desc.clone(), inner_truncated: false },
    };
    Ok(out)
}

/// Shifts smoothness by −σ; classical families are canonicalized first
/// (B stays B, F stays F).
pub fn lift_descriptor(desc: &SpaceDescriptor, sigma: &Num) -> Result<SpaceDescriptor, ParamError> {
    require_valid(desc)?;
    let base = match desc.family {
        Family::TB | Family::TF | Family::B | Family::F => desc.clone(),
        Family::BdiffZero | Family::Lip => canonicalize_descriptor(desc)?.desc,
        other => {
            return Err(ParamError::Unsupported(format!(
                "lifting is defined for TB, TF, B, F (got {})",
                other.tag()
            )))
        }
    };
    if sigma.is_zero() {
        return Ok(base);
    }
    Ok(base.with_s(base.s.sub(sigma)))
}

/// Parses a descriptor in the `FAM(key=value,…)` grammar and validates it.
pub fn parse_descriptor(text: &str) -> Result<SpaceDescriptor, DescriptorParseError> {
    let t = text.trim();
    let open = t.find('(').ok_or(DescriptorParseError::Syntax {
        pos: t.len(),
        msg: "expected '('".into(),
    })?;
    if !t.ends_with(')') {
        return Err(DescriptorParseError::Syntax { pos: t.len(), msg: "expected ')'".into() });
    }
    let tag = t[..open].trim();
    let family = Family::from_tag(tag).ok_or_else(|| DescriptorParseError::Syntax {
        pos: 0,
        msg: format!("unknown family {tag:?}"),
    })?;
    let body = &t[open + 1..t.len() - 1];
    let mut s = None;
    let mut p = None;
    let mut q = None;
    let mut r = None;
    let mut b = None;
    let mut d = None;
    let mut u = None;
    let mut offset = open + 1;
    for item in body.split(',') {
        let pos = offset;
        offset += item.len() + 1;
        if item.trim().is_empty() {
            continue;
        }
        let (k, v) = item.split_once('=').ok_or_else(|| DescriptorParseError::Syntax {
            pos,
            msg: format!("expected key=value, got {:?}", item.trim()),
        })?;
        let k = k.trim();
        let v = v.trim();
        let bad = |msg: String| DescriptorParseError::Syntax { pos, msg };
        if !family.keys().contains(&k) {
            return Err(bad(format!("key {k:?} not allowed for {}", family.tag())));
        }
        let dup = |slot: bool| if slot { Err(bad(format!("duplicate key {k:?}"))) } else { Ok(()) };
        match k {
            "s" => {
                dup(s.is_some())?;
                s = Some(Num::parse(v).map_err(bad)?)
            }
            "b" => {
                dup(b.is_some())?;
                b = Some(Num::parse(v).map_err(bad)?)
            }
            "p" => {
                dup(p.is_some())?;
                p = Some(Exponent::parse(v).map_err(bad)?)
            }
            "q" => {
                dup(q.is_some())?;
                q = Some(Exponent::parse(v).map_err(bad)?)
            }
            "r" => {
                dup(r.is_some())?;
                r = Some(Exponent::parse(v).map_err(bad)?)
            }
            "u" => {
                dup(u.is_some())?;
                u = Some(Exponent::parse(v).map_err(bad)?)
            }
            "d" => {
                dup(d.is_some())?;
                let n: u32 = v.parse().map_err(|_| bad(format!("d must be a positive integer, got {v:?}")))?;
                d = Some(n)
            }
            _ => unreachable!(),
        }
    }
    let d = d.unwrap_or(1);
    let missing = |key: &str| DescriptorParseError::Syntax {
        pos: t.len(),
        msg: format!("missing key {key:?} for {}", family.tag()),
    };
    let desc = match family {
        Family::TB | Family::TF | Family::TstarB | Family::TstarF => {
            let s = s.ok_or_else(|| missing("s"))?;
            let p = p.ok_or_else(|| missing("p"))?;
            let q = q.ok_or_else(|| missing("q"))?;
            let r = r.ok_or_else(|| missing("r"))?;
            match family {
                Family::TB => SpaceDescriptor::tb(s, p, q, r, b.ok_or_else(|| missing("b"))?, d),
                Family::TF => SpaceDescriptor::tf(s, p, q, r, b.ok_or_else(|| missing("b"))?, d),
                Family::TstarB => SpaceDescriptor::tstar_b(s, p, q, r, d),
                _ => SpaceDescriptor::tstar_f(s, p, q, r, d),
            }
        }
        Family::B | Family::F | Family::Lip => {
            let s = s.ok_or_else(|| missing("s"))?;
            let b = b.ok_or_else(|| missing("b"))?;
            let p = p.ok_or_else(|| missing("p"))?;
            let q = q.ok_or_else(|| missing("q"))?;
            match family {
                Family::B => SpaceDescriptor::besov(s, b, p, q, d),
                Family::F => SpaceDescriptor::tl(s, b, p, q, d),
                _ => SpaceDescriptor::lip(s, b, p, q, d),
            }
        }
        Family::BdiffZero => SpaceDescriptor::bdiff_zero(
            b.ok_or_else(|| missing("b"))?,
            p.ok_or_else(|| missing("p"))?,
            q.ok_or_else(|| missing("q"))?,
            d,
        ),
        Family::TLorentz => SpaceDescriptor::t_lorentz(
            u.ok_or_else(|| missing("u"))?,
            q.ok_or_else(|| missing("q"))?,
            r.ok_or_else(|| missing("r"))?,
            b.ok_or_else(|| missing("b"))?,
            d,
        ),
        Family::LorentzZygmund => SpaceDescriptor::lorentz_zygmund(
            u.ok_or_else(|| missing("u"))?,
            q.ok_or_else(|| missing("q"))?,
            b.ok_or_else(|| missing("b"))?,
            d,
        ),
    };
    validate_descriptor(&desc).map_err(DescriptorParseError::Invalid)?;
    Ok(desc)
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum DescriptorParseError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("invalid descriptor: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
}

/// Exact midpoint of two parameters.
pub fn midpoint(a: &Num, b: &Num) -> Num {
    a.add(b).half()
}

/// Positive part of a parameter.
pub fn positive_part(x: &Num) -> Num {
    if x.gt(&Num::zero()) {
        x.clone()
    } else {
        Num::zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conjugates() {
        assert_eq!(conjugate_exponent(&Exponent::int(2)), Exponent::int(2));
        assert_eq!(conjugate_exponent(&Exponent::int(1)), Exponent::Infinity);
        assert_eq!(conjugate_exponent(&Exponent::int(4)), Exponent::ratio(4, 3));
        assert_eq!(conjugate_exponent(&Exponent::Infinity), Exponent::int(1));
        assert_eq!(conjugate_exponent(&Exponent::ratio(1, 2)), Exponent::Infinity);
    }

    #[test]
    fn decimal_parsing_is_exact() {
        assert_eq!(Num::parse("0.1").unwrap(), Num::ratio(1, 10));
        assert_eq!(Num::parse("-2.5").unwrap(), Num::ratio(-5, 2));
        assert_eq!(Num::parse("3/6").unwrap(), Num::ratio(1, 2));
        assert_eq!(Num::parse("1e-2").unwrap(), Num::ratio(1, 100));
        assert!(Num::parse("1/0").is_err());
        assert!(Num::parse("abc").is_err());
        assert!(Exponent::parse("0").is_err());
        assert_eq!(Exponent::parse("inf").unwrap(), Exponent::Infinity);
    }

    #[test]
    fn mixed_comparison_uses_tolerance() {
        let a = Num::ratio(1, 3);
        let b = Num::float(1.0 / 3.0);
        assert!(a.eq_num(&b));
        assert!(Num::float(0.5).lt(&Num::ratio(2, 3)));
    }

    #[test]
    fn validation_examples() {
        let tf = SpaceDescriptor::tf(
            Num::zero(),
            Exponent::Infinity,
            Exponent::int(2),
            Exponent::int(1),
            Num::one(),
            1,
        );
        let err = validate_descriptor(&tf).unwrap_err();
        assert_eq!(err[0].constraint, "F-family requires p<∞");
        let lip_ok = SpaceDescriptor::lip(Num::one(), Num::int(-1), Exponent::int(2), Exponent::int(2), 1);
        assert!(validate_descriptor(&lip_ok).is_ok());
        let lip_bad = lip_ok.with_b(Num::zero());
        let err = validate_descriptor(&lip_bad).unwrap_err();
        assert_eq!(err[0].constraint, "Lip requires b < −1/q");
    }

    #[test]
    fn display_roundtrip() {
        let d = parse_descriptor("TB(s=1,p=2,q=1,r=2,b=1/2,d=1)").unwrap();
        assert_eq!(d.b, Num::ratio(1, 2));
        assert_eq!(parse_descriptor(&d.to_string()).unwrap(), d);
        let b0 = parse_descriptor("B0(b=0,p=2,q=1,d=2)").unwrap();
        assert_eq!(b0.family, Family::BdiffZero);
        assert_eq!(b0.d, 2);
    }
}
