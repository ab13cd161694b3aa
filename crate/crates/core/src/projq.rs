//! Exact arithmetic over Q and quadratic fields Q(sqrt d), points of the
//! projective line, Moebius maps, cross-ratios and the j-invariant of four
//! points.
//!
//! Projective formulas are written with 2x2 determinants of homogeneous
//! coordinates, so the point at infinity `(1 : 0)` never needs a special case.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::arith;

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProjqError {
    #[error("points {0} and {1} coincide")]
    DuplicatePoint(String, String),
    #[error("cross-ratio parameter {0} is degenerate (0 or 1)")]
    DegenerateLambda(String),
    #[error("cannot mix Q(sqrt {0}) with Q(sqrt {1})")]
    FieldMismatch(i64, i64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("matrix {0} has zero determinant")]
    SingularMatrix(String),
    #[error("{0} is not a valid quadratic discriminant (square-free, not 0 or 1)")]
    BadDiscriminant(i64),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

fn perr(pos: usize, msg: impl Into<String>) -> ProjqError {
    ProjqError::Parse { pos, msg: msg.into() }
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn rat_int(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

fn fmt_rat(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `n` or `n/d` (optional leading sign, nonzero denominator).
pub fn parse_rational(s: &str) -> Result<Rational, ProjqError> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s, None),
    };
    let n = BigInt::from_str(n).map_err(|_| perr(0, format!("bad integer `{n}`")))?;
    let d = match d {
        Some(d) => BigInt::from_str(d).map_err(|_| perr(0, format!("bad integer `{d}`")))?,
        None => BigInt::one(),
    };
    if d.is_zero() {
        return Err(perr(0, "zero denominator"));
    }
    Ok(Rational::new(n, d))
}

// ---------------------------------------------------------------------------

/// `a + b*sqrt(d)` with `d` square-free, `d != 0, 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadElem {
    a: Rational,
    b: Rational,
    d: i64,
}

impl QuadElem {
    pub fn new(a: Rational, b: Rational, d: i64) -> Result<Self, ProjqError> {
        if d == 0 || d == 1 || !num_prime::nt_funcs::is_square_free(&d.unsigned_abs()) {
            return Err(ProjqError::BadDiscriminant(d));
        }
        Ok(QuadElem { a, b, d })
    }
    pub fn a(&self) -> &Rational {
        &self.a
    }
    pub fn b(&self) -> &Rational {
        &self.b
    }
    pub fn d(&self) -> i64 {
        self.d
    }
    pub fn conj(&self) -> QuadElem {
        QuadElem { a: self.a.clone(), b: -self.b.clone(), d: self.d }
    }
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - rat_int(self.d) * &self.b * &self.b
    }
    pub fn trace(&self) -> Rational {
        &self.a * rat_int(2)
    }
    fn check(&self, o: &QuadElem) -> Result<(), ProjqError> {
        if self.d != o.d {
            Err(ProjqError::FieldMismatch(self.d, o.d))
        } else {
            Ok(())
        }
    }
    pub fn add(&self, o: &QuadElem) -> Result<QuadElem, ProjqError> {
        self.check(o)?;
        Ok(QuadElem { a: &self.a + &o.a, b: &self.b + &o.b, d: self.d })
    }
    pub fn sub(&self, o: &QuadElem) -> Result<QuadElem, ProjqError> {
        self.check(o)?;
        Ok(QuadElem { a: &self.a - &o.a, b: &self.b - &o.b, d: self.d })
    }
    pub fn mul(&self, o: &QuadElem) -> Result<QuadElem, ProjqError> {
        self.check(o)?;
        let d = rat_int(self.d);
        Ok(QuadElem {
            a: &self.a * &o.a + d * &self.b * &o.b,
            b: &self.a * &o.b + &self.b * &o.a,
            d: self.d,
        })
    }
    pub fn inv(&self) -> Result<QuadElem, ProjqError> {
        let n = self.norm();
        if n.is_zero() {
            return Err(ProjqError::DivisionByZero);
        }
        Ok(QuadElem { a: &self.a / &n, b: -&self.b / &n, d: self.d })
    }
    pub fn to_complex(&self) -> (f64, f64) {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        let r = (self.d.unsigned_abs() as f64).sqrt();
        if self.d > 0 {
            (a + b * r, 0.0)
        } else {
            (a, b * r)
        }
    }
}

// ---------------------------------------------------------------------------

/// An element of Q or of one quadratic field Q(sqrt d).
///
/// Elements with vanishing irrational part are always stored as `Rat`, so
/// equality is structural. Rationals combine with any quadratic field;
/// two different quadratic fields never combine.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Num {
    Rat(Rational),
    Quad(QuadElem),
}

impl Num {
    pub fn zero() -> Num {
        Num::Rat(Rational::zero())
    }
    pub fn one() -> Num {
        Num::Rat(Rational::one())
    }
    pub fn int(n: impl Into<BigInt>) -> Num {
        Num::Rat(rat_int(n))
    }
    pub fn frac(n: i64, d: i64) -> Num {
        Num::Rat(rat(n, d))
    }
    /// `a + b sqrt(d)`, collapsing to a rational when `b = 0`.
    pub fn quad(a: Rational, b: Rational, d: i64) -> Result<Num, ProjqError> {
        if b.is_zero() {
            return Ok(Num::Rat(a));
        }
        Ok(Num::Quad(QuadElem::new(a, b, d)?))
    }
    fn norm_form(q: QuadElem) -> Num {
        if q.b.is_zero() {
            Num::Rat(q.a)
        } else {
            Num::Quad(q)
        }
    }
    /// Exact square root of a rational, in Q or the matching quadratic field.
    pub fn sqrt_rational(q: &Rational) -> Result<Num, ProjqError> {
        if q.is_zero() {
            return Ok(Num::zero());
        }
        let prod = q.numer() * q.denom();
        let (k, d) = arith::squarefree_decompose(&prod);
        let coef = Rational::new(k, q.denom().clone());
        if d.is_one() {
            return Ok(Num::Rat(coef));
        }
        let d = d.to_i64().ok_or(ProjqError::BadDiscriminant(i64::MAX))?;
        Num::quad(Rational::zero(), coef, d)
    }
    pub fn is_zero(&self) -> bool {
        matches!(self, Num::Rat(r) if r.is_zero())
    }
    pub fn is_one(&self) -> bool {
        matches!(self, Num::Rat(r) if r.is_one())
    }
    /// The discriminant of the field this element lives in (`None` for Q).
    pub fn field(&self) -> Option<i64> {
        match self {
            Num::Rat(_) => None,
            Num::Quad(q) => Some(q.d),
        }
    }
    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Num::Rat(r) => Some(r),
            Num::Quad(_) => None,
        }
    }
    /// Rational and irrational parts `(a, b)` of `a + b sqrt(d)`.
    pub fn parts(&self) -> (Rational, Rational) {
        match self {
            Num::Rat(r) => (r.clone(), Rational::zero()),
            Num::Quad(q) => (q.a.clone(), q.b.clone()),
        }
    }
    pub fn conj(&self) -> Num {
        match self {
            Num::Rat(_) => self.clone(),
            Num::Quad(q) => Num::Quad(q.conj()),
        }
    }
    pub fn norm(&self) -> Rational {
        match self {
            Num::Rat(r) => r * r,
            Num::Quad(q) => q.norm(),
        }
    }
    pub fn trace(&self) -> Rational {
        match self {
            Num::Rat(r) => r * rat_int(2),
            Num::Quad(q) => q.trace(),
        }
    }
    pub fn to_complex(&self) -> (f64, f64) {
        match self {
            Num::Rat(r) => (r.to_f64().unwrap_or(f64::NAN), 0.0),
            Num::Quad(q) => q.to_complex(),
        }
    }
    fn lift(&self, d: i64) -> QuadElem {
        match self {
            Num::Rat(r) => QuadElem { a: r.clone(), b: Rational::zero(), d },
            Num::Quad(q) => q.clone(),
        }
    }
    fn combine(
        &self,
        o: &Num,
        fr: impl Fn(&Rational, &Rational) -> Rational,
        fq: impl Fn(&QuadElem, &QuadElem) -> Result<QuadElem, ProjqError>,
    ) -> Result<Num, ProjqError> {
        match (self, o) {
            (Num::Rat(a), Num::Rat(b)) => Ok(Num::Rat(fr(a, b))),
            (Num::Quad(q), x) | (x, Num::Quad(q)) => {
                let d = q.d;
                let _ = x;
                let (l, r) = (self.lift(d), o.lift(d));
                Ok(Num::norm_form(fq(&l, &r)?))
            }
        }
    }
    pub fn try_add(&self, o: &Num) -> Result<Num, ProjqError> {
        self.combine(o, |a, b| a + b, |a, b| a.add(b))
    }
    pub fn try_sub(&self, o: &Num) -> Result<Num, ProjqError> {
        self.combine(o, |a, b| a - b, |a, b| a.sub(b))
    }
    pub fn try_mul(&self, o: &Num) -> Result<Num, ProjqError> {
        self.combine(o, |a, b| a * b, |a, b| a.mul(b))
    }
    pub fn try_inv(&self) -> Result<Num, ProjqError> {
        match self {
            Num::Rat(r) if r.is_zero() => Err(ProjqError::DivisionByZero),
            Num::Rat(r) => Ok(Num::Rat(r.recip())),
            Num::Quad(q) => Ok(Num::norm_form(q.inv()?)),
        }
    }
    pub fn try_div(&self, o: &Num) -> Result<Num, ProjqError> {
        self.try_mul(&o.try_inv()?)
    }
    pub fn pow(&self, e: u32) -> Num {
        let mut r = Num::one();
        for _ in 0..e {
            r = &r * self;
        }
        r
    }
    /// Whether `self` and `o` live in a common field.
    pub fn compatible(&self, o: &Num) -> bool {
        match (self.field(), o.field()) {
            (Some(a), Some(b)) => a == b,
            _ => true,
        }
    }
    fn sort_key(&self) -> (i64, Rational, Rational) {
        let (a, b) = self.parts();
        (self.field().unwrap_or(0), a, b)
    }
}

impl PartialOrd for Num {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A total order used only for deterministic output (field, then parts).
impl Ord for Num {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl From<Rational> for Num {
    fn from(r: Rational) -> Num {
        Num::Rat(r)
    }
}

impl From<i64> for Num {
    fn from(n: i64) -> Num {
        Num::int(n)
    }
}

macro_rules! num_binop {
    ($tr:ident, $m:ident, $f:ident) => {
        impl std::ops::$tr<&Num> for &Num {
            type Output = Num;
            /// Panics when the operands live in different quadratic fields.
            fn $m(self, o: &Num) -> Num {
                self.$f(o).expect("quadratic field mismatch")
            }
        }
        impl std::ops::$tr<Num> for Num {
            type Output = Num;
            fn $m(self, o: Num) -> Num {
                (&self).$f(&o).expect("quadratic field mismatch")
            }
        }
    };
}
num_binop!(Add, add, try_add);
num_binop!(Sub, sub, try_sub);
num_binop!(Mul, mul, try_mul);
num_binop!(Div, div, try_div);

impl std::ops::Neg for &Num {
    type Output = Num;
    fn neg(self) -> Num {
        match self {
            Num::Rat(r) => Num::Rat(-r),
            Num::Quad(q) => Num::Quad(QuadElem { a: -&q.a, b: -&q.b, d: q.d }),
        }
    }
}

impl std::ops::Neg for Num {
    type Output = Num;
    fn neg(self) -> Num {
        -&self
    }
}

impl fmt::Display for Num {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Num::Rat(r) => write!(f, "{}", fmt_rat(r)),
            Num::Quad(q) => {
                let sign = if q.b.is_negative() { '-' } else { '+' };
                write!(f, "({}{}{}*sqrt({}))", fmt_rat(&q.a), sign, fmt_rat(&q.b.abs()), q.d)
            }
        }
    }
}

impl FromStr for Num {
    type Err = ProjqError;
    /// Accepts `n`, `n/d` and `(a+b*sqrt(d))` / `(a-b*sqrt(d))`.
    fn from_str(s: &str) -> Result<Num, ProjqError> {
        let t = s.trim();
        if !t.starts_with('(') {
            return parse_rational(t).map(Num::Rat).map_err(|_| perr(0, format!("bad number `{t}`")));
        }
        let inner = t
            .strip_prefix('(')
            .and_then(|x| x.strip_suffix(')'))
            .ok_or_else(|| perr(0, format!("unbalanced parentheses in `{t}`")))?;
        let k = inner
            .find("*sqrt(")
            .ok_or_else(|| perr(1, format!("expected `*sqrt(` in `{t}`")))?;
        let d_part = inner[k + 6..]
            .strip_suffix(')')
            .ok_or_else(|| perr(k + 7, "expected `)` after discriminant"))?;
        let d: i64 = d_part
            .trim()
            .parse()
            .map_err(|_| perr(k + 7, format!("bad discriminant `{d_part}`")))?;
        let head = &inner[..k];
        // The coefficient of sqrt(d) starts at the last sign that is not leading.
        let split = head
            .char_indices()
            .filter(|&(i, c)| i > 0 && (c == '+' || c == '-'))
            .map(|(i, _)| i)
            .last()
            .ok_or_else(|| perr(1, format!("expected `a+b*sqrt(d)` in `{t}`")))?;
        let a = parse_rational(&head[..split]).map_err(|_| perr(1, format!("bad rational part in `{t}`")))?;
        let b_txt = &head[split..];
        let b = parse_rational(b_txt.strip_prefix('+').unwrap_or(b_txt))
            .map_err(|_| perr(split + 1, format!("bad coefficient in `{t}`")))?;
        Ok(Num::Quad(QuadElem::new(a, b, d)?))
    }
}

// ---------------------------------------------------------------------------

/// A point `(u : v)` of P^1, stored as `(x : 1)` or `(1 : 0)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProjPoint {
    u: Num,
    v: Num,
}

impl ProjPoint {
    pub fn new(u: Num, v: Num) -> Result<ProjPoint, ProjqError> {
        if !u.compatible(&v) {
            return Err(ProjqError::FieldMismatch(u.field().unwrap_or(1), v.field().unwrap_or(1)));
        }
        if v.is_zero() {
            if u.is_zero() {
                return Err(ProjqError::DivisionByZero);
            }
            return Ok(ProjPoint::infinity());
        }
        Ok(ProjPoint { u: u.try_div(&v)?, v: Num::one() })
    }
    pub fn infinity() -> ProjPoint {
        ProjPoint { u: Num::one(), v: Num::zero() }
    }
    pub fn finite(x: Num) -> ProjPoint {
        ProjPoint { u: x, v: Num::one() }
    }
    pub fn int(n: i64) -> ProjPoint {
        ProjPoint::finite(Num::int(n))
    }
    pub fn frac(n: i64, d: i64) -> ProjPoint {
        ProjPoint::finite(Num::frac(n, d))
    }
    pub fn is_infinity(&self) -> bool {
        self.v.is_zero()
    }
    pub fn u(&self) -> &Num {
        &self.u
    }
    pub fn v(&self) -> &Num {
        &self.v
    }
    /// The affine value, `None` at infinity.
    pub fn value(&self) -> Option<&Num> {
        if self.is_infinity() {
            None
        } else {
            Some(&self.u)
        }
    }
    pub fn field(&self) -> Option<i64> {
        self.u.field()
    }
    pub fn is_rational(&self) -> bool {
        self.field().is_none()
    }
    pub fn conj(&self) -> ProjPoint {
        ProjPoint { u: self.u.conj(), v: self.v.clone() }
    }
}

/// `u1*v2 - u2*v1`.
fn det(p: &ProjPoint, q: &ProjPoint) -> Result<Num, ProjqError> {
    p.u.try_mul(&q.v)?.try_sub(&q.u.try_mul(&p.v)?)
}

impl PartialOrd for ProjPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Infinity first, then finite points by the `Num` order.
impl Ord for ProjPoint {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.is_infinity(), other.is_infinity()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            (false, false) => self.u.cmp(&other.u),
        }
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinity() {
            write!(f, "oo")
        } else {
            write!(f, "{}", self.u)
        }
    }
}

impl FromStr for ProjPoint {
    type Err = ProjqError;
    fn from_str(s: &str) -> Result<ProjPoint, ProjqError> {
        let t = s.trim();
        if t == "oo" {
            Ok(ProjPoint::infinity())
        } else {
            Ok(ProjPoint::finite(t.parse()?))
        }
    }
}

// ---------------------------------------------------------------------------

/// Integer 2x2 matrix acting by `t -> (m11 t + m12) / (m21 t + m22)`, stored
/// primitive with first nonzero entry positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Moebius {
    m: [BigInt; 4],
}

impl Moebius {
    pub fn new(m11: BigInt, m12: BigInt, m21: BigInt, m22: BigInt) -> Result<Moebius, ProjqError> {
        let m = [m11, m12, m21, m22];
        if (&m[0] * &m[3] - &m[1] * &m[2]).is_zero() {
            return Err(ProjqError::SingularMatrix(format!("[[{},{}],[{},{}]]", m[0], m[1], m[2], m[3])));
        }
        let g = m.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        let sign = m.iter().find(|x| !x.is_zero()).map(|x| x.signum()).unwrap();
        let g = g * sign;
        Ok(Moebius { m: m.map(|x| x / &g) })
    }
    pub fn from_i64(m: [i64; 4]) -> Result<Moebius, ProjqError> {
        Moebius::new(m[0].into(), m[1].into(), m[2].into(), m[3].into())
    }
    pub fn identity() -> Moebius {
        Moebius::from_i64([1, 0, 0, 1]).unwrap()
    }
    pub fn entries(&self) -> &[BigInt; 4] {
        &self.m
    }
    pub fn det(&self) -> BigInt {
        &self.m[0] * &self.m[3] - &self.m[1] * &self.m[2]
    }
    pub fn is_identity(&self) -> bool {
        *self == Moebius::identity()
    }
    pub fn apply(&self, t: &ProjPoint) -> ProjPoint {
        let [a, b, c, d] = self.m.clone().map(Num::int);
        let u = &(&a * &t.u) + &(&b * &t.v);
        let v = &(&c * &t.u) + &(&d * &t.v);
        ProjPoint::new(u, v).expect("nonzero determinant keeps the point well defined")
    }
    /// `self ∘ n`: `apply(compose(M, N), t) = apply(M, apply(N, t))`.
    pub fn compose(&self, n: &Moebius) -> Moebius {
        let (a, b) = (&self.m, &n.m);
        Moebius::new(
            &a[0] * &b[0] + &a[1] * &b[2],
            &a[0] * &b[1] + &a[1] * &b[3],
            &a[2] * &b[0] + &a[3] * &b[2],
            &a[2] * &b[1] + &a[3] * &b[3],
        )
        .expect("product of invertible matrices")
    }
    pub fn invert(&self) -> Moebius {
        let m = &self.m;
        Moebius::new(m[3].clone(), -&m[1], -&m[2], m[0].clone()).expect("adjugate of invertible matrix")
    }
    /// Scales a matrix with entries in a number field to a primitive integer
    /// matrix, if it is rational up to a common factor.
    pub fn from_num_entries(e: &[Num; 4]) -> Option<Moebius> {
        let pivot = e.iter().find(|x| !x.is_zero())?;
        let mut r = Vec::with_capacity(4);
        for x in e {
            r.push(x.try_div(pivot).ok()?.as_rational()?.clone());
        }
        let l = r.iter().fold(BigInt::one(), |l, q| l.lcm(q.denom()));
        let ints: Vec<BigInt> = r.iter().map(|q| (q * rat_int(l.clone())).to_integer()).collect();
        Moebius::new(ints[0].clone(), ints[1].clone(), ints[2].clone(), ints[3].clone()).ok()
    }
    /// The map sending `src[i]` to `dst[i]` for i = 0, 1, 2, if it is
    /// defined over Q. Points must be pairwise distinct on each side.
    pub fn through(src: [&ProjPoint; 3], dst: [&ProjPoint; 3]) -> Option<Moebius> {
        let n1 = to_zero_one_inf(src)?;
        let n2 = to_zero_one_inf(dst)?;
        let inv2 = [n2[3].clone(), -&n2[1], -&n2[2], n2[0].clone()];
        let prod = mat_mul(&inv2, &n1)?;
        Moebius::from_num_entries(&prod)
    }
    /// Human-readable `Mt` expression, e.g. `(t-1)/(t-1089)` or `-t+25/16`.
    pub fn formula(&self) -> String {
        let [a, b, c, d] = &self.m;
        if c.is_zero() {
            let (al, be) = (Rational::new(a.clone(), d.clone()), Rational::new(b.clone(), d.clone()));
            return affine(&al, &be);
        }
        let flip = |x: &BigInt| if c.is_negative() { rat_int(-x) } else { rat_int(x.clone()) };
        let num = affine(&flip(a), &flip(b));
        let den = affine(&flip(c), &flip(d));
        let wrap = |s: String| if s[1..].contains(['+', '-']) { format!("({s})") } else { s };
        format!("{}/{}", wrap(num), wrap(den))
    }
}

/// Renders `p t + q` compactly.
fn affine(p: &Rational, q: &Rational) -> String {
    let mut s = String::new();
    if !p.is_zero() {
        s += &if p.is_one() {
            "t".to_string()
        } else if *p == -Rational::one() {
            "-t".to_string()
        } else if p.is_integer() {
            format!("{}t", p.numer())
        } else if p.numer().abs().is_one() {
            format!("{}t/{}", if p.is_negative() { "-" } else { "" }, p.denom())
        } else {
            format!("{}t/{}", p.numer(), p.denom())
        };
    }
    if !q.is_zero() {
        if !s.is_empty() && q.is_positive() {
            s.push('+');
        }
        s += &fmt_rat(q);
    }
    s
}

type NumMat = [Num; 4];

fn mat_mul(a: &NumMat, b: &NumMat) -> Option<NumMat> {
    let f = |i: usize, j: usize, k: usize, l: usize| -> Option<Num> {
        a[i].try_mul(&b[j]).ok()?.try_add(&a[k].try_mul(&b[l]).ok()?).ok()
    };
    Some([f(0, 0, 1, 2)?, f(0, 1, 1, 3)?, f(2, 0, 3, 2)?, f(2, 1, 3, 3)?])
}

/// Matrix sending `p[0] -> 0`, `p[1] -> 1`, `p[2] -> oo`.
fn to_zero_one_inf(p: [&ProjPoint; 3]) -> Option<NumMat> {
    let [a, b, c] = p;
    let d1 = det(b, c).ok()?;
    let d2 = det(b, a).ok()?;
    if d1.is_zero() || d2.is_zero() || det(a, c).ok()?.is_zero() {
        return None;
    }
    let m = [
        a.v.try_mul(&d1).ok()?,
        (-&a.u).try_mul(&d1).ok()?,
        c.v.try_mul(&d2).ok()?,
        (-&c.u).try_mul(&d2).ok()?,
    ];
    Some(m)
}

impl fmt::Display for Moebius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = &self.m;
        write!(f, "[[{a},{b}],[{c},{d}]]")
    }
}

impl FromStr for Moebius {
    type Err = ProjqError;
    /// Parses `[[a,b],[c,d]]` with integer entries.
    fn from_str(s: &str) -> Result<Moebius, ProjqError> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let body = compact
            .strip_prefix("[[")
            .and_then(|x| x.strip_suffix("]]"))
            .ok_or_else(|| perr(0, format!("expected `[[a,b],[c,d]]`, found `{s}`")))?;
        let (r1, r2) = body
            .split_once("],[")
            .ok_or_else(|| perr(2, format!("expected two rows in `{s}`")))?;
        let mut e = Vec::new();
        for (row, off) in [(r1, 2), (r2, 2 + r1.len() + 3)] {
            let parts: Vec<&str> = row.split(',').collect();
            if parts.len() != 2 {
                return Err(perr(off, format!("row `{row}` needs two entries")));
            }
            for p in parts {
                e.push(BigInt::from_str(p).map_err(|_| perr(off, format!("bad matrix entry `{p}`")))?);
            }
        }
        let [a, b, c, d]: [BigInt; 4] = e.try_into().unwrap();
        Moebius::new(a, b, c, d)
    }
}

// ---------------------------------------------------------------------------

/// `C(a,b,c,d) = (a-c)(b-d) / ((a-d)(b-c))`, via homogeneous determinants.
pub fn cross_ratio(a: &ProjPoint, b: &ProjPoint, c: &ProjPoint, d: &ProjPoint) -> Result<Num, ProjqError> {
    let pts = [a, b, c, d];
    for i in 0..4 {
        for j in i + 1..4 {
            if pts[i] == pts[j] {
                return Err(ProjqError::DuplicatePoint(pts[i].to_string(), pts[j].to_string()));
            }
        }
    }
    let num = det(a, c)?.try_mul(&det(b, d)?)?;
    let den = det(a, d)?.try_mul(&det(b, c)?)?;
    num.try_div(&den)
}

/// `j(λ) = (λ² − λ + 1)³ / ((λ − 1)² λ²)`.
pub fn j_of_lambda(l: &Num) -> Result<Num, ProjqError> {
    if l.is_zero() || l.is_one() {
        return Err(ProjqError::DegenerateLambda(l.to_string()));
    }
    let one = Num::one();
    let q = &(&(l * l) - l) + &one;
    let lm1 = l - &one;
    q.pow(3).try_div(&(&(&lm1 * &lm1) * &(l * l)))
}

pub fn j_of_points(a: &ProjPoint, b: &ProjPoint, c: &ProjPoint, d: &ProjPoint) -> Result<Num, ProjqError> {
    j_of_lambda(&cross_ratio(a, b, c, d)?)
}
