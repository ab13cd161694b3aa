//! Fibre products `W = Y ×_{P¹} Y'`: singular-locus bookkeeping, the
//! fibre defect δ, Hodge number h¹², the local intersection matrices,
//! the predicted L-series shape and the modularity gate.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::arith;
use crate::catalog::{self, BeauvilleLabel, CatalogError, Family, FibrationSpec, SingularFibre};
use crate::projq::{Moebius, Num, ProjPoint, Rational};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DefectError {
    #[error("{0}: singular fibre components sum to {1}, not 12")]
    NotRational(String, u32),
    #[error("fibre defect is {0}, the factorization needs δ = 0")]
    DefectNonzero(i64),
    #[error("modularity gate needs a trace at p = {0} that is unavailable: {1}")]
    TraceUnavailable(u64, String),
    #[error("cannot parse product '{0}': {1}")]
    Parse(String, String),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
}

pub type Result<T> = std::result::Result<T, DefectError>;

/// A fibre product of two catalogued fibrations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProductSpec {
    pub left: FibrationSpec,
    pub right: FibrationSpec,
    pub isogenous: bool,
    pub known_bad_primes: BTreeSet<u64>,
}

impl ProductSpec {
    pub fn new(left: FibrationSpec, right: FibrationSpec) -> ProductSpec {
        ProductSpec { left, right, isogenous: false, known_bad_primes: BTreeSet::new() }
    }

    /// Like [`ProductSpec::new`], with the isogeny flag set for known isogenous pairs.
    pub fn annotated(left: FibrationSpec, right: FibrationSpec) -> ProductSpec {
        let mut s = ProductSpec::new(left, right);
        s.isogenous = s.known_isogenous();
        s
    }

    /// Relative twist `N` with `right = left^{N t}` when both share a family.
    pub fn relative_twist(&self) -> Option<Moebius> {
        (self.left.family == self.right.family).then(|| self.left.twist.invert().compose(&self.right.twist))
    }

    /// Self-pairings and the Γ0(8)∩Γ1(4) pair with `Mt = (t−1)/(t+1)`.
    pub fn known_isogenous(&self) -> bool {
        let Some(n) = self.relative_twist() else { return false };
        if n.is_identity() {
            return true;
        }
        if self.left.family == Family::Beauville(BeauvilleLabel::Gamma0_8_1_4) {
            let m = Moebius::from_i64([1, -1, 1, 1]).unwrap();
            return n == m || n == m.invert();
        }
        false
    }
}

impl fmt::Display for ProductSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} x {}", self.left, self.right)?;
        if self.isogenous {
            write!(f, " iso")?;
        }
        if !self.known_bad_primes.is_empty() {
            let v: Vec<String> = self.known_bad_primes.iter().map(|p| p.to_string()).collect();
            write!(f, " bad={}", v.join(","))?;
        }
        Ok(())
    }
}

impl FromStr for ProductSpec {
    type Err = DefectError;
    /// `LEFT x RIGHT [iso] [bad=p,q,...]`.
    fn from_str(s: &str) -> Result<ProductSpec> {
        let err = |m: &str| DefectError::Parse(s.to_string(), m.to_string());
        let (l, rest) = s.split_once(" x ").ok_or_else(|| err("expected 'LEFT x RIGHT'"))?;
        let mut words = rest.split_whitespace();
        let r = words.next().ok_or_else(|| err("missing right factor"))?;
        let mut spec = ProductSpec::new(l.trim().parse()?, r.parse()?);
        for w in words {
            if w == "iso" {
                spec.isogenous = true;
            } else if let Some(list) = w.strip_prefix("bad=") {
                for q in list.split(',').filter(|q| !q.is_empty()) {
                    let p: u64 = q.parse().map_err(|_| err(&format!("bad prime '{q}'")))?;
                    spec.known_bad_primes.insert(p);
                }
            } else {
                return Err(err(&format!("unexpected token '{w}'")));
            }
        }
        Ok(spec)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

/// A fibre over `S̃`: `I_γ × I_0` with the singular factor on `side`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TildeFibre {
    pub t: ProjPoint,
    pub gamma: u32,
    pub side: Side,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefectReport {
    pub product: ProductSpec,
    /// Singular locations of each side with their `I_m` types.
    pub s: Vec<(ProjPoint, u32)>,
    pub s_prime: Vec<(ProjPoint, u32)>,
    /// Common locations with `(m, m')`.
    pub s_dprime: Vec<(ProjPoint, u32, u32)>,
    pub s_tilde: Vec<ProjPoint>,
    pub d: u8,
    pub pic_rank: i64,
    pub delta: i64,
    pub h12: i64,
    pub dim_u: i64,
    pub tilde_fibres: Vec<TildeFibre>,
    pub warnings: Vec<String>,
}

fn types(l: &[SingularFibre]) -> Vec<(ProjPoint, u32)> {
    l.iter().map(|f| (f.location.clone(), f.m)).collect()
}

/// `δ = d − 5 + #S + #S' − #S''`.
pub fn delta_formula(d: i64, s: usize, s1: usize, s2: usize) -> i64 {
    d - 5 + s as i64 + s1 as i64 - s2 as i64
}

pub fn analyze(spec: &ProductSpec) -> Result<DefectReport> {
    let left = catalog::singular_locus(&spec.left)?;
    let right = catalog::singular_locus(&spec.right)?;
    for (side, l) in [(&spec.left, &left), (&spec.right, &right)] {
        let total: u32 = l.iter().map(|f| f.m).sum();
        if total != 12 {
            return Err(DefectError::NotRational(side.to_string(), total));
        }
    }
    let mut warnings = Vec::new();
    if !spec.isogenous && spec.known_isogenous() {
        warnings.push("AnnotationRequired: this pair is known to be isogenous; add 'iso'".to_string());
    } else if !spec.isogenous && generic_j_agree(&spec.left, &spec.right) {
        warnings.push("generic j-invariants coincide; isogeny not annotated".to_string());
    }
    let s = types(&left);
    let s_prime = types(&right);
    let rm: BTreeMap<&ProjPoint, u32> = s_prime.iter().map(|(p, m)| (p, *m)).collect();
    let lm: BTreeMap<&ProjPoint, u32> = s.iter().map(|(p, m)| (p, *m)).collect();
    let s_dprime: Vec<(ProjPoint, u32, u32)> =
        s.iter().filter_map(|(p, m)| rm.get(p).map(|n| (p.clone(), *m, *n))).collect();
    let mut tilde_fibres: Vec<TildeFibre> = s
        .iter()
        .filter(|(p, _)| !rm.contains_key(p))
        .map(|(p, m)| TildeFibre { t: p.clone(), gamma: *m, side: Side::Left })
        .chain(
            s_prime
                .iter()
                .filter(|(p, _)| !lm.contains_key(p))
                .map(|(p, m)| TildeFibre { t: p.clone(), gamma: *m, side: Side::Right }),
        )
        .collect();
    tilde_fibres.sort_by(|a, b| a.t.cmp(&b.t));
    let s_tilde = tilde_fibres.iter().map(|f| f.t.clone()).collect();
    let d: u8 = spec.isogenous.into();
    let sum_b: i64 = s.iter().map(|(_, m)| *m as i64).sum::<i64>() + s_prime.iter().map(|(_, m)| *m as i64).sum::<i64>();
    let pic_rank = d as i64 + 18 - sum_b + s.len() as i64 + s_prime.len() as i64;
    let tilde_sum: i64 = tilde_fibres.iter().map(|f| f.gamma as i64 - 1).sum();
    let h12 = 1 + pic_rank - s_dprime.len() as i64 + tilde_sum;
    let delta = delta_formula(d as i64, s.len(), s_prime.len(), s_dprime.len());
    // The exact sequence for U gives δ = h12 − Σ_{S̃}(γ − 1) as well.
    debug_assert_eq!(delta, h12 - tilde_sum);
    Ok(DefectReport {
        product: spec.clone(),
        s,
        s_prime,
        s_dprime,
        s_tilde,
        d,
        pic_rank,
        delta,
        h12,
        dim_u: 2 * delta + 2,
        tilde_fibres,
        warnings,
    })
}

fn generic_j_agree(a: &FibrationSpec, b: &FibrationSpec) -> bool {
    (2..7).all(|t| {
        let t = ProjPoint::int(t);
        match (catalog::j_signature(a, &t), catalog::j_signature(b, &t)) {
            (Some(x), Some(y)) => x == y,
            _ => false,
        }
    })
}

impl DefectReport {
    /// δ recomputed from h¹² and the S̃ contributions.
    pub fn delta_from_hodge(&self) -> i64 {
        self.h12 - self.tilde_fibres.iter().map(|f| f.gamma as i64 - 1).sum::<i64>()
    }

    /// Schoen's formula evaluated from the raw fibre data.
    pub fn schoen_h12(&self) -> i64 {
        let b = |l: &[(ProjPoint, u32)], t: &ProjPoint| l.iter().find(|(p, _)| p == t).map_or(1, |(_, m)| *m as i64);
        let tilde: i64 = self.s_tilde.iter().map(|t| b(&self.s, t) * b(&self.s_prime, t) - 1).sum();
        1 + self.pic_rank - self.s_dprime.len() as i64 + tilde
    }

    /// `Σ_{S''} m·n`, the number of nodes of `W` over Q.
    pub fn node_total(&self) -> i64 {
        self.s_dprime.iter().map(|(_, m, n)| (*m as i64) * (*n as i64)).sum()
    }

    pub fn pattern(&self) -> (usize, usize, usize) {
        (self.s.len(), self.s_prime.len(), self.s_dprime.len())
    }

    pub fn render_text(&self) -> String {
        let pts = |v: &[ProjPoint]| v.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", ");
        let typed = |v: &[(ProjPoint, u32)]| v.iter().map(|(p, m)| format!("{p}:I{m}")).collect::<Vec<_>>().join(", ");
        let mut out = String::new();
        out += &format!("product   {}\n", self.product);
        out += &format!("S         {{{}}}\n", typed(&self.s));
        out += &format!("S'        {{{}}}\n", typed(&self.s_prime));
        let dp: Vec<String> = self.s_dprime.iter().map(|(p, m, n)| format!("{p}:I{m}xI{n}")).collect();
        out += &format!("S''       {{{}}}\n", dp.join(", "));
        out += &format!("S~        {{{}}}\n", pts(&self.s_tilde));
        out += &format!("d         {}\n", self.d);
        out += &format!("pic_rank  {}\n", self.pic_rank);
        out += &format!("delta     {}\n", self.delta);
        out += &format!("h12       {}\n", self.h12);
        out += &format!("dim_U     {}\n", self.dim_u);
        for f in &self.tilde_fibres {
            out += &format!("tilde     t={} gamma={} singular={}\n", f.t, f.gamma, f.side);
        }
        for w in &self.warnings {
            out += &format!("warning   {w}\n");
        }
        out
    }

    /// One tab-separated `key=value` line.
    pub fn to_record(&self) -> String {
        let typed = |v: &[(ProjPoint, u32)]| v.iter().map(|(p, m)| format!("{p}:{m}")).collect::<Vec<_>>().join(",");
        let dp: Vec<String> = self.s_dprime.iter().map(|(p, m, n)| format!("{p}:{m}:{n}")).collect();
        let tl: Vec<String> = self.tilde_fibres.iter().map(|f| format!("{}:{}:{}", f.t, f.gamma, f.side)).collect();
        let st: Vec<String> = self.s_tilde.iter().map(|p| p.to_string()).collect();
        let mut fields = vec![
            format!("product={}", self.product),
            format!("S={}", typed(&self.s)),
            format!("S'={}", typed(&self.s_prime)),
            format!("S''={}", dp.join(",")),
            format!("S~={}", st.join(",")),
            format!("d={}", self.d),
            format!("pic_rank={}", self.pic_rank),
            format!("delta={}", self.delta),
            format!("h12={}", self.h12),
            format!("dim_U={}", self.dim_u),
            format!("tilde={}", tl.join(",")),
        ];
        fields.extend(self.warnings.iter().map(|w| format!("warning={w}")));
        fields.join("\t")
    }

    pub fn from_record(line: &str) -> Result<DefectReport> {
        let err = |m: String| DefectError::Parse(line.to_string(), m);
        let mut kv: BTreeMap<&str, &str> = BTreeMap::new();
        let mut warnings = Vec::new();
        for field in line.split('\t') {
            let (k, v) = field.split_once('=').ok_or_else(|| err(format!("field '{field}' lacks '='")))?;
            if k == "warning" {
                warnings.push(v.to_string());
            } else {
                kv.insert(k, v);
            }
        }
        let get = |k: &str| kv.get(k).copied().ok_or_else(|| err(format!("missing field {k}")));
        let int = |k: &str| -> Result<i64> { get(k)?.parse().map_err(|_| err(format!("field {k} is not an integer"))) };
        let split = |v: &str| -> Vec<String> {
            if v.is_empty() {
                Vec::new()
            } else {
                v.split(',').map(str::to_string).collect()
            }
        };
        let point = |s: &str| s.parse::<ProjPoint>().map_err(|e| err(e.to_string()));
        let num = |s: &str| s.parse::<u32>().map_err(|_| err(format!("bad type '{s}'")));
        let typed = |v: &str| -> Result<Vec<(ProjPoint, u32)>> {
            split(v)
                .iter()
                .map(|x| {
                    let (p, m) = x.rsplit_once(':').ok_or_else(|| err(format!("bad entry '{x}'")))?;
                    Ok((point(p)?, num(m)?))
                })
                .collect()
        };
        let s_dprime = split(get("S''")?)
            .iter()
            .map(|x| {
                let parts: Vec<&str> = x.rsplitn(3, ':').collect();
                if parts.len() != 3 {
                    return Err(err(format!("bad entry '{x}'")));
                }
                Ok((point(parts[2])?, num(parts[1])?, num(parts[0])?))
            })
            .collect::<Result<Vec<_>>>()?;
        let tilde_fibres = split(get("tilde")?)
            .iter()
            .map(|x| {
                let parts: Vec<&str> = x.rsplitn(3, ':').collect();
                if parts.len() != 3 {
                    return Err(err(format!("bad entry '{x}'")));
                }
                let side = match parts[0] {
                    "left" => Side::Left,
                    "right" => Side::Right,
                    o => return Err(err(format!("bad side '{o}'"))),
                };
                Ok(TildeFibre { t: point(parts[2])?, gamma: num(parts[1])?, side })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(DefectReport {
            product: get("product")?.parse()?,
            s: typed(get("S")?)?,
            s_prime: typed(get("S'")?)?,
            s_dprime,
            s_tilde: split(get("S~")?).iter().map(|p| point(p)).collect::<Result<_>>()?,
            d: int("d")? as u8,
            pic_rank: int("pic_rank")?,
            delta: int("delta")?,
            h12: int("h12")?,
            dim_u: int("dim_U")?,
            tilde_fibres,
            warnings,
        })
    }
}

/// The skew intersection matrix of the classes `A¹, B¹, …, A^{γ−1}, B^{γ−1}`
/// attached to an `I_γ × I_0` fibre.
pub fn intersection_matrix(gamma: u32) -> Vec<Vec<i64>> {
    assert!(gamma >= 2, "intersection matrix needs γ ≥ 2");
    let k = (gamma - 1) as usize;
    let mut m = vec![vec![0i64; 2 * k]; 2 * k];
    for i in 0..k {
        m[2 * i][2 * i + 1] = -2;
        m[2 * i + 1][2 * i] = 2;
        if i + 1 < k {
            let j = i + 1;
            m[2 * i][2 * j + 1] = 1;
            m[2 * i + 1][2 * j] = -1;
            m[2 * j + 1][2 * i] = -1;
            m[2 * j][2 * i + 1] = 1;
        }
    }
    m
}

/// Rank over Q by exact elimination.
pub fn rank(m: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<Rational>> =
        m.iter().map(|r| r.iter().map(|&x| Rational::from_integer(BigInt::from(x))).collect()).collect();
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, piv);
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = &a[i][c] / &a[r][c];
                for j in c..cols {
                    let delta = &f * &a[r][j];
                    a[i][j] -= delta;
                }
            }
        }
        r += 1;
    }
    r
}

/// `L(W, s) = L(f₄, s) · Π_{t∈S̃} L(g_{E_t}, s − 1)^{γ(t) − 1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LSeriesShape {
    /// Weight-2 factors: base point, side carrying the smooth fibre `E_t`, multiplicity.
    pub weight2: Vec<(ProjPoint, Side, u32)>,
}

impl LSeriesShape {
    pub fn total_weight2(&self) -> u32 {
        self.weight2.iter().map(|(_, _, k)| k).sum()
    }
}

impl fmt::Display for LSeriesShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L(f4,s)")?;
        for (t, side, k) in &self.weight2 {
            write!(f, " * L(g[E_{t} on {side}],s-1)")?;
            if *k > 1 {
                write!(f, "^{k}")?;
            }
        }
        Ok(())
    }
}

pub fn lseries_shape(report: &DefectReport) -> Result<LSeriesShape> {
    if report.delta != 0 {
        return Err(DefectError::DefectNonzero(report.delta));
    }
    let weight2 = report
        .tilde_fibres
        .iter()
        .filter(|f| f.gamma >= 2)
        .map(|f| {
            let smooth = match f.side {
                Side::Left => Side::Right,
                Side::Right => Side::Left,
            };
            (f.t.clone(), smooth, f.gamma - 1)
        })
        .collect();
    Ok(LSeriesShape { weight2 })
}

/// Heuristic bad primes, each tagged with the reasons it was flagged.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BadPrimes {
    pub primes: BTreeMap<u64, Vec<String>>,
}

impl BadPrimes {
    pub fn contains(&self, p: u64) -> bool {
        self.primes.contains_key(&p)
    }
    pub fn add(&mut self, p: u64, why: impl Into<String>) {
        let why = why.into();
        let v = self.primes.entry(p).or_default();
        if !v.contains(&why) {
            v.push(why);
        }
    }
    pub fn provenance(&self, p: u64) -> Option<String> {
        self.primes.get(&p).map(|v| v.join("; "))
    }
    pub fn set(&self) -> BTreeSet<u64> {
        self.primes.keys().copied().collect()
    }
}

/// Monic minimal polynomial `[c0, c1]` of `t² + c1 t + c0` or `[c0]` of `t + c0`.
fn min_poly(x: &Num) -> Vec<Rational> {
    match x.field() {
        None => vec![-x.as_rational().unwrap().clone()],
        Some(_) => vec![x.norm(), -x.trace()],
    }
}

fn eval_monic(c: &[Rational], x: &Num) -> Num {
    let mut acc = Num::one();
    for a in c.iter().rev() {
        acc = &(&acc * x) + &Num::Rat(a.clone());
    }
    acc
}

fn rational_prime_tags(q: &Rational, bad: &mut BadPrimes, why: &str) {
    if q.is_zero() {
        return;
    }
    for p in arith::rational_primes(q) {
        bad.add(p, why);
    }
}

/// Heuristic bad primes of a product: parameters, twist determinants,
/// collisions of singular locations, splitting discriminants, annotations.
pub fn heuristic_bad_primes(spec: &ProductSpec) -> Result<BadPrimes> {
    let mut bad = BadPrimes::default();
    for p in &spec.known_bad_primes {
        bad.add(*p, "annotation");
    }
    let left = catalog::singular_locus(&spec.left)?;
    let right = catalog::singular_locus(&spec.right)?;
    for (side, f) in [("left", &spec.left), ("right", &spec.right)] {
        for p in f.family.parameter_primes() {
            bad.add(p, format!("{side} parameter"));
        }
        for p in arith::prime_factors(&f.twist.det()) {
            bad.add(p.to_u64().unwrap_or(u64::MAX), format!("{side} twist determinant"));
        }
    }
    let mut pts: Vec<ProjPoint> = left.iter().chain(&right).map(|f| f.location.clone()).collect();
    pts.sort();
    pts.dedup();
    for (i, a) in pts.iter().enumerate() {
        if let Some(x) = a.value() {
            let mp = min_poly(x);
            for c in &mp {
                for p in arith::prime_factors(c.denom()) {
                    bad.add(p.to_u64().unwrap_or(u64::MAX), format!("{a} meets oo"));
                }
            }
            if x.field().is_some() {
                let disc = x.trace() * x.trace() - Rational::from_integer(4.into()) * x.norm();
                rational_prime_tags(&disc, &mut bad, &format!("{a} meets its conjugate"));
            }
        }
        for b in &pts[i + 1..] {
            let (Some(x), Some(y)) = (a.value(), b.value()) else { continue };
            let (mx, my) = (min_poly(x), min_poly(y));
            if mx == my {
                continue;
            }
            let r = eval_monic(&my, x).norm();
            rational_prime_tags(&r, &mut bad, &format!("{a} meets {b}"));
        }
    }
    for (side, l) in [("left", &left), ("right", &right)] {
        for f in l {
            if let Some(d) = &f.split_disc {
                for p in arith::prime_factors(d) {
                    bad.add(p.to_u64().unwrap_or(u64::MAX), format!("{side} split discriminant at {}", f.location));
                }
            }
        }
    }
    bad.primes.remove(&u64::MAX);
    Ok(bad)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CondStatus {
    Pass,
    Fail(String),
    Unavailable(String),
}

impl CondStatus {
    pub fn passed(&self) -> bool {
        matches!(self, CondStatus::Pass)
    }
}

impl fmt::Display for CondStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CondStatus::Pass => write!(f, "pass"),
            CondStatus::Fail(m) => write!(f, "fail ({m})"),
            CondStatus::Unavailable(m) => write!(f, "unavailable ({m})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GateVerdict {
    /// Conditions (1) to (5) in order.
    pub conditions: Vec<CondStatus>,
    pub modular: bool,
}

impl fmt::Display for GateVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.conditions.iter().enumerate() {
            writeln!(f, "condition ({}) {c}", i + 1)?;
        }
        write!(f, "verdict {}", if self.modular { "modular by the criterion" } else { "not established" })
    }
}

/// Checks the hypotheses of the modularity criterion. `trace(p)` returns
/// `a_p(U)` for a good prime `p`.
pub fn modularity_gate(
    report: &DefectReport,
    bad: &BadPrimes,
    trace: &dyn Fn(u64) -> std::result::Result<i64, String>,
) -> Result<GateVerdict> {
    let c1 = if report.delta == 0 { CondStatus::Pass } else { CondStatus::Fail(format!("δ = {}", report.delta)) };
    let c2 = components_condition(report);
    let c3 = match [3, 7].iter().find(|&&p| bad.contains(p)) {
        None => CondStatus::Pass,
        Some(p) => CondStatus::Fail(format!("{p} is bad: {}", bad.provenance(*p).unwrap())),
    };
    let mut missing: Option<(u64, String)> = None;
    let c4 = if bad.contains(5) {
        CondStatus::Fail("5 is bad".into())
    } else {
        let mut st = CondStatus::Fail("no good p ≡ ±2 mod 5 below 100 with 5 ∤ t_p".into());
        for p in arith::primes_up_to(100).into_iter().filter(|p| p % 5 == 2 || p % 5 == 3) {
            if bad.contains(p) {
                continue;
            }
            match trace(p) {
                Ok(t) if t % 5 != 0 => {
                    st = CondStatus::Pass;
                    break;
                }
                Ok(_) => {}
                Err(e) => {
                    missing.get_or_insert((p, e.clone()));
                    st = CondStatus::Unavailable(format!("t_{p}: {e}"));
                    break;
                }
            }
        }
        st
    };
    let c5 = if bad.contains(3) {
        CondStatus::Fail("3 is bad".into())
    } else {
        match trace(3) {
            Ok(t) if t % 3 != 0 => CondStatus::Pass,
            Ok(t) => CondStatus::Fail(format!("t_3 = {t} is divisible by 3")),
            Err(e) => {
                missing.get_or_insert((3, e.clone()));
                CondStatus::Unavailable(format!("t_3: {e}"))
            }
        }
    };
    let base = c1.passed() && c2.passed();
    let any = c3.passed() || c4.passed() || c5.passed();
    if base && !any {
        if let Some((p, e)) = missing {
            return Err(DefectError::TraceUnavailable(p, e));
        }
    }
    Ok(GateVerdict { conditions: vec![c1, c2, c3, c4, c5], modular: base && any })
}

fn components_condition(report: &DefectReport) -> CondStatus {
    let spec = &report.product;
    for f in report.tilde_fibres.iter().filter(|f| f.gamma >= 2) {
        let side = match f.side {
            Side::Left => &spec.left,
            Side::Right => &spec.right,
        };
        let locus = match catalog::singular_locus(side) {
            Ok(l) => l,
            Err(e) => return CondStatus::Fail(e.to_string()),
        };
        let fibre = locus.iter().find(|x| x.location == f.t);
        match fibre.and_then(|x| x.comps_rational) {
            Some(true) => {}
            Some(false) => return CondStatus::Fail(format!("components over {} are not defined over Q", f.t)),
            None => return CondStatus::Unavailable(format!("fibre over {} is not at a rational point", f.t)),
        }
    }
    CondStatus::Pass
}
