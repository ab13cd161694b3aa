//! Rational elliptic fibrations: the pencils `E_(α:β:γ)` and the six
//! Beauville surfaces, their singular fibres, twists of the base and
//! fibre equations over F_p.
//!
//! A pencil is a pair of plane cubics `(F, G)`; the member over `(u : v)`
//! is `v·F − u·G`, so `t = ∞` is the cubic `G = 0`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::arith;
use crate::poly::QPoly;
use crate::projq::{parse_rational, rat, rat_int, Moebius, Num, ProjPoint, ProjqError, Rational};
use crate::ternary::{det, TPoly, QUAD_MONOS};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CatalogError {
    #[error("degenerate family: {0}")]
    DegenerateFamily(String),
    #[error("fibre over {0} is not semistable (additive reduction)")]
    NotSemistable(ProjPoint),
    #[error("p = {p} is bad: {reason}")]
    BadPrime { p: u64, reason: String },
    #[error("fibre location {0} is not rational")]
    IrrationalLocation(ProjPoint),
    #[error("unsupported singular locus: {0}")]
    UnsupportedLocus(String),
    #[error("cannot parse fibration '{0}'")]
    Parse(String),
    #[error(transparent)]
    Projq(#[from] ProjqError),
}

pub type Result<T> = std::result::Result<T, CatalogError>;

/// The six Beauville surfaces, named by their modular groups.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BeauvilleLabel {
    Gamma3,
    Gamma1_4_2,
    Gamma1_5,
    Gamma1_6,
    Gamma0_8_1_4,
    Gamma0_9_1_3,
}

impl BeauvilleLabel {
    pub const ALL: [BeauvilleLabel; 6] = [
        BeauvilleLabel::Gamma3,
        BeauvilleLabel::Gamma1_4_2,
        BeauvilleLabel::Gamma1_5,
        BeauvilleLabel::Gamma1_6,
        BeauvilleLabel::Gamma0_8_1_4,
        BeauvilleLabel::Gamma0_9_1_3,
    ];

    pub fn label(self) -> &'static str {
        match self {
            BeauvilleLabel::Gamma3 => "gamma3",
            BeauvilleLabel::Gamma1_4_2 => "gamma1_4_2",
            BeauvilleLabel::Gamma1_5 => "gamma1_5",
            BeauvilleLabel::Gamma1_6 => "gamma1_6",
            BeauvilleLabel::Gamma0_8_1_4 => "gamma0_8_1_4",
            BeauvilleLabel::Gamma0_9_1_3 => "gamma0_9_1_3",
        }
    }

    pub fn group(self) -> &'static str {
        match self {
            BeauvilleLabel::Gamma3 => "Γ(3)",
            BeauvilleLabel::Gamma1_4_2 => "Γ1(4)∩Γ(2)",
            BeauvilleLabel::Gamma1_5 => "Γ1(5)",
            BeauvilleLabel::Gamma1_6 => "Γ1(6)",
            BeauvilleLabel::Gamma0_8_1_4 => "Γ0(8)∩Γ1(4)",
            BeauvilleLabel::Gamma0_9_1_3 => "Γ0(9)∩Γ1(3)",
        }
    }

    pub fn from_label(s: &str) -> Option<BeauvilleLabel> {
        BeauvilleLabel::ALL.into_iter().find(|b| b.label() == s)
    }

    /// Singular fibres as tabulated: locations and component counts.
    fn locus(self) -> Vec<(ProjPoint, u32)> {
        let omega = |sign: i64| ProjPoint::finite(Num::quad(rat(-1, 2), rat(sign, 2), -3).unwrap());
        let g5 = |sign: i64| ProjPoint::finite(Num::quad(rat(-11, 2), rat(5 * sign, 2), 5).unwrap());
        let inf = ProjPoint::infinity;
        let n = ProjPoint::int;
        match self {
            BeauvilleLabel::Gamma3 => vec![(inf(), 3), (n(1), 3), (omega(1), 3), (omega(-1), 3)],
            BeauvilleLabel::Gamma1_4_2 => vec![(inf(), 4), (n(0), 4), (n(1), 2), (n(-1), 2)],
            BeauvilleLabel::Gamma1_5 => vec![(inf(), 5), (n(0), 5), (g5(1), 1), (g5(-1), 1)],
            BeauvilleLabel::Gamma1_6 => vec![(inf(), 6), (n(0), 2), (n(1), 3), (n(9), 1)],
            BeauvilleLabel::Gamma0_8_1_4 => vec![(inf(), 8), (n(0), 2), (n(1), 1), (n(-1), 1)],
            BeauvilleLabel::Gamma0_9_1_3 => vec![(inf(), 9), (n(1), 1), (omega(1), 1), (omega(-1), 1)],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Abg(Rational, Rational, Rational),
    Beauville(BeauvilleLabel),
}

impl Family {
    /// The defining pencil `(F, G)`.
    pub fn pencil(&self) -> Pencil {
        let x = || TPoly::var(0);
        let y = || TPoly::var(1);
        let z = || TPoly::var(2);
        let c = |n: i64| TPoly::constant(rat_int(n));
        let cube = |p: TPoly| p.mul(&p).mul(&p);
        let xyz = || x().mul(&y()).mul(&z());
        let abg = |a: &Rational, b: &Rational, g: &Rational| {
            let s = x().add(&y()).add(&z());
            let q = x()
                .mul(&y())
                .scale(a)
                .add(&y().mul(&z()).scale(b))
                .add(&z().mul(&x()).scale(g));
            Pencil { f: s.mul(&q), g: xyz() }
        };
        match self {
            Family::Abg(a, b, g) => abg(a, b, g),
            Family::Beauville(l) => match l {
                BeauvilleLabel::Gamma3 => Pencil {
                    f: cube(x()).add(&cube(y())).add(&cube(z())),
                    g: xyz().mul(&c(3)),
                },
                BeauvilleLabel::Gamma1_4_2 => Pencil {
                    f: x().mul(&x().mul(&x()).add(&z().mul(&z())).add(&z().mul(&y()).mul(&c(2)))),
                    g: z().mul(&x().mul(&x()).sub(&y().mul(&y()))),
                },
                BeauvilleLabel::Gamma1_5 => Pencil {
                    f: x().mul(&x().sub(&z())).mul(&y().sub(&z())),
                    g: z().mul(&y()).mul(&x().sub(&y())),
                },
                BeauvilleLabel::Gamma1_6 => abg(&rat(1, 1), &rat(1, 1), &rat(1, 1)),
                BeauvilleLabel::Gamma0_8_1_4 => Pencil {
                    f: x().add(&y()).mul(&x().mul(&y()).add(&z().mul(&z()))),
                    g: xyz().mul(&c(4)),
                },
                BeauvilleLabel::Gamma0_9_1_3 => Pencil {
                    f: x().mul(&x()).mul(&y()).add(&y().mul(&y()).mul(&z())).add(&z().mul(&z()).mul(&x())),
                    g: xyz().mul(&c(3)),
                },
            },
        }
    }

    /// Primes appearing in the parameters or equation constants.
    pub fn parameter_primes(&self) -> Vec<u64> {
        let mut out = match self {
            Family::Abg(a, b, g) => [a, b, g].iter().flat_map(|q| arith::rational_primes(q)).collect(),
            Family::Beauville(BeauvilleLabel::Gamma3 | BeauvilleLabel::Gamma0_9_1_3) => vec![3],
            Family::Beauville(BeauvilleLabel::Gamma0_8_1_4) => vec![2],
            Family::Beauville(_) => vec![],
        };
        out.sort_unstable();
        out.dedup();
        out
    }

    fn validate(&self) -> Result<()> {
        if let Family::Abg(a, b, g) = self {
            if a.is_zero() || b.is_zero() || g.is_zero() {
                return Err(CatalogError::DegenerateFamily(format!("{self}: parameters must be nonzero")));
            }
            if b == g {
                let r = b / a;
                if r == rat(1, 4) {
                    return Err(CatalogError::DegenerateFamily(format!(
                        "{self}: 2α = 1 makes (1-2α)^2 collide with 0"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Untwisted singular data from the catalogue, or `None` for families
    /// that need the generic discriminant computation.
    fn catalogued(&self) -> Option<Vec<(ProjPoint, u32)>> {
        match self {
            Family::Beauville(l) => Some(l.locus()),
            Family::Abg(a, b, g) if b == g => {
                let r = b / a;
                let base = if r.is_one() {
                    BeauvilleLabel::Gamma1_6.locus()
                } else {
                    let s = Num::sqrt_rational(&r).ok()?;
                    let one4 = Num::Rat(Rational::one() + rat_int(4) * &r);
                    let four_s = &Num::int(4) * &s;
                    vec![
                        (ProjPoint::infinity(), 6),
                        (ProjPoint::int(0), 2),
                        (ProjPoint::int(1), 2),
                        (ProjPoint::finite(&one4 + &four_s), 1),
                        (ProjPoint::finite(&one4 - &four_s), 1),
                    ]
                };
                // E_(c, ca, ca) is E_(1, a, a) over t/c.
                let scale = Num::Rat(a.clone());
                Some(
                    base.into_iter()
                        .map(|(pt, m)| match pt.value() {
                            Some(x) => (ProjPoint::finite(x * &scale), m),
                            None => (pt, m),
                        })
                        .collect(),
                )
            }
            Family::Abg(..) => None,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Abg(a, b, g) => write!(f, "abg({a},{b},{g})"),
            Family::Beauville(l) => write!(f, "beauville({})", l.label()),
        }
    }
}

/// Two plane cubics spanning a pencil.
#[derive(Clone, Debug, PartialEq)]
pub struct Pencil {
    pub f: TPoly,
    pub g: TPoly,
}

impl Pencil {
    /// The member `v·F − u·G`.
    pub fn member(&self, u: &Rational, v: &Rational) -> TPoly {
        self.f.scale(v).sub(&self.g.scale(u))
    }
}

/// A catalogued fibration with a Möbius twist of the base: the fibre of
/// `E^{Mt}` over `t` is the fibre of `E` over `M t`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FibrationSpec {
    pub family: Family,
    pub twist: Moebius,
}

impl FibrationSpec {
    pub fn new(family: Family, twist: Moebius) -> Result<FibrationSpec> {
        family.validate()?;
        Ok(FibrationSpec { family, twist })
    }
    pub fn abg(a: Rational, b: Rational, g: Rational) -> Result<FibrationSpec> {
        FibrationSpec::new(Family::Abg(a, b, g), Moebius::identity())
    }
    pub fn beauville(l: BeauvilleLabel) -> FibrationSpec {
        FibrationSpec { family: Family::Beauville(l), twist: Moebius::identity() }
    }
    /// `(E^{Mt})^{Nt} = E^{(M·N)t}`.
    pub fn twisted(&self, n: &Moebius) -> FibrationSpec {
        FibrationSpec { family: self.family.clone(), twist: self.twist.compose(n) }
    }
    pub fn untwisted(&self) -> FibrationSpec {
        FibrationSpec { family: self.family.clone(), twist: Moebius::identity() }
    }
    /// Short name used in tables: `gamma1_6`, `abg(1,9/4,9/4)`, with twist.
    pub fn family_label(&self) -> String {
        match &self.family {
            Family::Beauville(l) => l.label().to_string(),
            f => f.to_string(),
        }
    }
}

impl fmt::Display for FibrationSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.family)?;
        if !self.twist.is_identity() {
            write!(f, "@{}", self.twist)?;
        }
        Ok(())
    }
}

impl FromStr for FibrationSpec {
    type Err = CatalogError;
    fn from_str(s: &str) -> Result<FibrationSpec> {
        let s = s.trim();
        let bad = || CatalogError::Parse(s.to_string());
        let (head, twist) = match s.split_once('@') {
            Some((h, t)) => (h.trim(), t.trim().parse::<Moebius>()?),
            None => (s, Moebius::identity()),
        };
        let (name, args) = head.split_once('(').ok_or_else(bad)?;
        let args = args.strip_suffix(')').ok_or_else(bad)?;
        let family = match name.trim() {
            "abg" => {
                let v: Vec<Rational> =
                    args.split(',').map(|a| parse_rational(a.trim())).collect::<std::result::Result<_, _>>()?;
                if v.len() != 3 {
                    return Err(bad());
                }
                Family::Abg(v[0].clone(), v[1].clone(), v[2].clone())
            }
            "beauville" => Family::Beauville(BeauvilleLabel::from_label(args.trim()).ok_or_else(bad)?),
            _ => return Err(bad()),
        };
        FibrationSpec::new(family, twist)
    }
}

/// A singular fibre of type `I_m`. Splitting data is present only for
/// rational locations; irrational ones are handled per prime.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SingularFibre {
    pub location: ProjPoint,
    pub m: u32,
    pub split_disc: Option<BigInt>,
    pub comps_rational: Option<bool>,
    pub comp_disc: Option<BigInt>,
}

/// Invariants of the pencil as polynomials in `t`: the discriminant
/// (degree ≤ 12) and the coefficients of `Hess(H) = α·f + β·H`, which
/// are proportional to `c4²` (degree ≤ 8) and `c6` (degree ≤ 6).
#[derive(Debug)]
struct Invariants {
    disc: QPoly,
    alpha: QPoly,
    beta: QPoly,
}

fn disc_of(f: &TPoly, h: &TPoly) -> Rational {
    let rows: Vec<Vec<Rational>> = (0..3)
        .map(|i| f.deriv(i))
        .chain((0..3).map(|i| h.deriv(i)))
        .map(|q| q.quad_coeffs().to_vec())
        .collect();
    debug_assert_eq!(rows[0].len(), QUAD_MONOS.len());
    det(rows)
}

/// Solves `Hess(h) = α f + β h` for a smooth cubic `f` with Hessian `h`.
fn hessian_identity(f: &TPoly, h: &TPoly) -> Option<(Rational, Rational)> {
    let hh = h.hessian();
    let (fv, hv, kv) = (f.cubic_coeffs(), h.cubic_coeffs(), hh.cubic_coeffs());
    for i in 0..10 {
        for j in i + 1..10 {
            let d = &fv[i] * &hv[j] - &fv[j] * &hv[i];
            if d.is_zero() {
                continue;
            }
            let a = (&kv[i] * &hv[j] - &kv[j] * &hv[i]) / &d;
            let b = (&fv[i] * &kv[j] - &fv[j] * &kv[i]) / &d;
            let ok = (0..10).all(|k| &a * &fv[k] + &b * &hv[k] == kv[k]);
            return ok.then_some((a, b));
        }
    }
    None
}

fn compute_invariants(pencil: &Pencil) -> Result<Invariants> {
    let mut dpts = Vec::new();
    let mut apts = Vec::new();
    let mut bpts = Vec::new();
    let mut t = 0i64;
    while dpts.len() < 13 || apts.len() < 10 {
        if t > 400 {
            return Err(CatalogError::DegenerateFamily("no smooth members found".into()));
        }
        let tq = rat_int(t);
        let f = pencil.member(&tq, &Rational::one());
        let h = f.hessian();
        let d = disc_of(&f, &h);
        if dpts.len() < 13 {
            dpts.push((tq.clone(), d.clone()));
        }
        if apts.len() < 10 && !d.is_zero() {
            if let Some((a, b)) = hessian_identity(&f, &h) {
                apts.push((tq.clone(), a));
                bpts.push((tq, b));
            }
        }
        t += 1;
    }
    let disc = QPoly::interpolate(&dpts);
    let alpha = QPoly::interpolate(&apts);
    let beta = QPoly::interpolate(&bpts);
    if disc.is_zero() {
        return Err(CatalogError::DegenerateFamily("every member is singular".into()));
    }
    if alpha.degree().unwrap_or(0) > 8 || beta.degree().unwrap_or(0) > 6 {
        return Err(CatalogError::DegenerateFamily("invariant degrees out of range".into()));
    }
    Ok(Invariants { disc, alpha, beta })
}

fn invariants(family: &Family) -> Result<Arc<Invariants>> {
    static CACHE: OnceLock<Mutex<HashMap<Family, Arc<Invariants>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.lock().unwrap().get(family) {
        return Ok(v.clone());
    }
    let inv = Arc::new(compute_invariants(&family.pencil())?);
    cache.lock().unwrap().insert(family.clone(), inv.clone());
    Ok(inv)
}

/// `K` with `K·β = −c6` up to squares, fixed by `y²z = x³ + z³` where `−c6 = 864`.
fn c6_scale() -> &'static Rational {
    static K: OnceLock<Rational> = OnceLock::new();
    K.get_or_init(|| {
        let y = TPoly::var(1);
        let x = TPoly::var(0);
        let z = TPoly::var(2);
        let w = y.mul(&y).mul(&z).sub(&x.mul(&x).mul(&x)).sub(&z.mul(&z).mul(&z));
        let (_, b) = hessian_identity(&w, &w.hessian()).expect("Weierstrass cubic is smooth");
        rat_int(864) / b
    })
}

/// `c4² ` scale: `K_α·α = c4²`, fixed by `y²z = x³ − xz²` where `c4 = 48`.
fn c4_scale() -> &'static Rational {
    static K: OnceLock<Rational> = OnceLock::new();
    K.get_or_init(|| {
        let (x, y, z) = (TPoly::var(0), TPoly::var(1), TPoly::var(2));
        let w = y.mul(&y).mul(&z).sub(&x.mul(&x).mul(&x)).add(&x.mul(&z).mul(&z));
        let (a, _) = hessian_identity(&w, &w.hessian()).expect("Weierstrass cubic is smooth");
        rat_int(48 * 48) / a
    })
}

/// `c4⁶ / c6⁴` of the fibre over `t`, a function of its j-invariant.
/// `None` at singular fibres, irrational points, or where `c6 = 0`.
pub fn j_signature(spec: &FibrationSpec, t: &ProjPoint) -> Option<Rational> {
    let inv = invariants(&spec.family).ok()?;
    let s = spec.twist.apply(t);
    if !s.is_rational() || hom_value(&inv.disc, 12, &s).ok()?.is_zero() {
        return None;
    }
    let a = hom_value(&inv.alpha, 8, &s).ok()?.as_rational()?.clone() * c4_scale();
    let b = hom_value(&inv.beta, 6, &s).ok()?.as_rational()?.clone() * c6_scale();
    if b.is_zero() {
        return None;
    }
    Some(&a * &a * &a / (&b * &b * &b * &b))
}

fn hom_value(p: &QPoly, n: usize, t: &ProjPoint) -> Result<Num> {
    Ok(p.eval_hom(n, t.u(), t.v())?)
}

/// Roots of the pencil discriminant with multiplicities, ∞ included.
pub fn discriminant_profile(spec: &FibrationSpec) -> Result<Vec<(ProjPoint, u32)>> {
    spec.family.validate()?;
    let inv = invariants(&spec.family)?;
    let mut out = Vec::new();
    let deg = inv.disc.degree().unwrap_or(0);
    if deg < 12 {
        out.push((ProjPoint::infinity(), (12 - deg) as u32));
    }
    for (factor, mult) in inv.disc.squarefree_decomposition() {
        let mut rest = factor.clone();
        for r in factor.rational_roots() {
            out.push((ProjPoint::finite(Num::Rat(r.clone())), mult as u32));
            rest = rest.div_rem(&QPoly::linear_root(&r)).0;
        }
        match rest.degree() {
            Some(0) | None => {}
            Some(2) => {
                for r in rest.quadratic_roots()? {
                    out.push((ProjPoint::finite(r), mult as u32));
                }
            }
            Some(d) => {
                return Err(CatalogError::UnsupportedLocus(format!(
                    "{}: irreducible factor of degree {d} in the discriminant",
                    spec.family
                )))
            }
        }
    }
    for (pt, _) in &out {
        if hom_value(&inv.alpha, 8, pt)?.is_zero() {
            return Err(CatalogError::NotSemistable(spec.twist.invert().apply(pt)));
        }
    }
    let inv_m = spec.twist.invert();
    let mut out: Vec<(ProjPoint, u32)> = out.into_iter().map(|(pt, m)| (inv_m.apply(&pt), m)).collect();
    out.sort();
    Ok(out)
}

fn split_class(inv: &Invariants, untwisted: &ProjPoint) -> Result<Option<BigInt>> {
    if !untwisted.is_rational() {
        return Ok(None);
    }
    let b = hom_value(&inv.beta, 6, untwisted)?;
    let b = b.as_rational().expect("rational point").clone();
    if b.is_zero() {
        return Err(CatalogError::NotSemistable(untwisted.clone()));
    }
    Ok(Some(arith::square_class(&(c6_scale() * b))))
}

/// Singular fibres of `spec`, sorted by location.
pub fn singular_locus(spec: &FibrationSpec) -> Result<Vec<SingularFibre>> {
    spec.family.validate()?;
    let base = match spec.family.catalogued() {
        Some(l) => l,
        None => discriminant_profile(&spec.untwisted())?,
    };
    for (i, (a, _)) in base.iter().enumerate() {
        if base[..i].iter().any(|(b, _)| a == b) {
            return Err(CatalogError::DegenerateFamily(format!("{}: singular locations collide at {a}", spec.family)));
        }
    }
    let inv = invariants(&spec.family)?;
    let inv_m = spec.twist.invert();
    let mut out = Vec::with_capacity(base.len());
    for (pt, m) in base {
        let split_disc = split_class(&inv, &pt)?;
        let comp_disc = split_disc.as_ref().map(|d| if m <= 2 { BigInt::one() } else { d.clone() });
        out.push(SingularFibre {
            location: inv_m.apply(&pt),
            m,
            comps_rational: comp_disc.as_ref().map(|d| d.is_one()),
            split_disc,
            comp_disc,
        });
    }
    out.sort_by(|a, b| a.location.cmp(&b.location));
    Ok(out)
}

/// `(split_disc, comp_disc)` of a fibre at a rational location.
pub fn splitting_data(spec: &FibrationSpec, fibre: &SingularFibre) -> Result<(BigInt, BigInt)> {
    if !fibre.location.is_rational() {
        return Err(CatalogError::IrrationalLocation(fibre.location.clone()));
    }
    let inv = invariants(&spec.family)?;
    let sd = split_class(&inv, &spec.twist.apply(&fibre.location))?.expect("rational location");
    let cd = if fibre.m <= 2 { BigInt::one() } else { sd.clone() };
    Ok((sd, cd))
}

/// A point of P¹(F_p).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FpPoint {
    Fin(u64),
    Inf,
}

impl FpPoint {
    pub fn from_uv(u: u64, v: u64, p: u64) -> FpPoint {
        let (u, v) = (u % p, v % p);
        match arith::inv_mod(v, p) {
            Some(iv) => FpPoint::Fin(arith::mul_mod(u, iv, p)),
            None => FpPoint::Inf,
        }
    }
    pub fn uv(self) -> (u64, u64) {
        match self {
            FpPoint::Fin(x) => (x, 1),
            FpPoint::Inf => (1, 0),
        }
    }
    /// Position in `0..=p`, with ∞ last.
    pub fn index(self, p: u64) -> usize {
        match self {
            FpPoint::Fin(x) => x as usize,
            FpPoint::Inf => p as usize,
        }
    }
    pub fn all(p: u64) -> impl Iterator<Item = FpPoint> {
        (0..p).map(FpPoint::Fin).chain(std::iter::once(FpPoint::Inf))
    }
    /// Reduction of a rational point.
    pub fn reduce(t: &ProjPoint, p: u64) -> Option<FpPoint> {
        if t.is_infinity() {
            return Some(FpPoint::Inf);
        }
        let x = t.value()?.as_rational()?;
        Some(match arith::rat_mod(x, p) {
            Some(r) => FpPoint::Fin(r),
            None => FpPoint::Inf,
        })
    }
}

impl fmt::Display for FpPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FpPoint::Fin(x) => write!(f, "{x}"),
            FpPoint::Inf => write!(f, "oo"),
        }
    }
}

/// The pencil of a spec reduced mod p, twist included.
#[derive(Clone, Debug)]
pub struct PencilFp {
    pub p: u64,
    pub f: [u64; 10],
    pub g: [u64; 10],
    pub twist: [u64; 4],
}

impl PencilFp {
    /// Untwisted base point `M t`.
    pub fn base_point(&self, t: FpPoint) -> FpPoint {
        let (u, v) = t.uv();
        let [a, b, c, d] = self.twist;
        let p = self.p;
        let nu = (arith::mul_mod(a, u, p) + arith::mul_mod(b, v, p)) % p;
        let nv = (arith::mul_mod(c, u, p) + arith::mul_mod(d, v, p)) % p;
        FpPoint::from_uv(nu, nv, p)
    }
    /// Cubic of the untwisted member over `s`.
    pub fn untwisted_cubic(&self, s: FpPoint) -> [u64; 10] {
        let (u, v) = s.uv();
        let p = self.p;
        std::array::from_fn(|i| (arith::mul_mod(v, self.f[i], p) + p - arith::mul_mod(u, self.g[i], p)) % p)
    }
    pub fn cubic(&self, t: FpPoint) -> [u64; 10] {
        self.untwisted_cubic(self.base_point(t))
    }
}

/// Reduces the pencil of `spec` mod p.
pub fn reduce_pencil(spec: &FibrationSpec, p: u64) -> Result<PencilFp> {
    if let Family::Abg(a, b, g) = &spec.family {
        for q in [a, b, g] {
            if arith::mod_u64(q.denom(), p) == 0 || arith::mod_u64(q.numer(), p) == 0 {
                return Err(CatalogError::BadPrime { p, reason: format!("p divides the parameter {q}") });
            }
        }
    }
    if arith::mod_u64(&spec.twist.det(), p) == 0 {
        return Err(CatalogError::BadPrime { p, reason: format!("p divides det {}", spec.twist) });
    }
    let pencil = spec.family.pencil();
    let red = |c: [Rational; 10]| -> Result<[u64; 10]> {
        let mut out = [0u64; 10];
        for (o, q) in out.iter_mut().zip(c.iter()) {
            *o = arith::rat_mod(q, p)
                .ok_or_else(|| CatalogError::BadPrime { p, reason: format!("p divides a denominator of {q}") })?;
        }
        Ok(out)
    };
    let twist = spec.twist.entries().clone().map(|e| arith::mod_u64(&e, p));
    Ok(PencilFp { p, f: red(pencil.f.cubic_coeffs())?, g: red(pencil.g.cubic_coeffs())?, twist })
}

/// Coefficients (in `ternary::CUBIC_MONOS` order) of the fibre over `t` mod p.
pub fn fibre_cubic(spec: &FibrationSpec, t: &ProjPoint, p: u64) -> Result<[u64; 10]> {
    let tp = FpPoint::reduce(t, p).ok_or_else(|| CatalogError::IrrationalLocation(t.clone()))?;
    Ok(reduce_pencil(spec, p)?.cubic(tp))
}

/// Named fibrations: the six Beauville surfaces plus any overrides.
pub fn builtin_catalogue() -> Vec<(String, FibrationSpec)> {
    BeauvilleLabel::ALL.iter().map(|l| (l.label().to_string(), FibrationSpec::beauville(*l))).collect()
}

/// Parses `name = spec` lines; `#` starts a comment.
pub fn parse_catalogue(text: &str) -> Result<Vec<(String, FibrationSpec)>> {
    let mut out = Vec::new();
    for line in text.lines() {
        let line = line.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let (name, spec) = line.split_once('=').ok_or_else(|| CatalogError::Parse(line.to_string()))?;
        out.push((name.trim().to_string(), spec.parse()?));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn locs(spec: &FibrationSpec) -> Vec<(String, u32)> {
        singular_locus(spec).unwrap().into_iter().map(|f| (f.location.to_string(), f.m)).collect()
    }

    #[test]
    fn gamma1_6_locus() {
        let s: FibrationSpec = "abg(1,1,1)".parse().unwrap();
        assert_eq!(locs(&s), vec![("oo".into(), 6), ("0".into(), 2), ("1".into(), 3), ("9".into(), 1)]);
        let inf = &singular_locus(&s).unwrap()[0];
        assert_eq!(inf.comp_disc, Some(BigInt::one()));
    }

    #[test]
    fn twisted_locus() {
        let s: FibrationSpec = "abg(1,1,1)@[[9,0],[0,1]]".parse().unwrap();
        assert_eq!(locs(&s), vec![("oo".into(), 6), ("0".into(), 2), ("1/9".into(), 3), ("1".into(), 1)]);
    }

    #[test]
    fn profile_matches_catalogue() {
        for l in BeauvilleLabel::ALL {
            let s = FibrationSpec::beauville(l);
            let cat: Vec<_> = singular_locus(&s).unwrap().into_iter().map(|f| (f.location, f.m)).collect();
            assert_eq!(discriminant_profile(&s).unwrap(), cat, "{}", l.label());
        }
        let s: FibrationSpec = "abg(1,289,289)".parse().unwrap();
        let cat: Vec<_> = singular_locus(&s).unwrap().into_iter().map(|f| (f.location, f.m)).collect();
        assert_eq!(discriminant_profile(&s).unwrap(), cat);
    }

    #[test]
    fn fibre_cubics() {
        let s = FibrationSpec::beauville(BeauvilleLabel::Gamma3);
        // x^3 + y^3 + z^3 + xyz mod 2
        assert_eq!(fibre_cubic(&s, &ProjPoint::int(1), 2).unwrap(), [1, 0, 0, 0, 1, 0, 1, 0, 0, 1]);
        let a: FibrationSpec = "abg(1,1,1)".parse().unwrap();
        assert_eq!(fibre_cubic(&a, &ProjPoint::infinity(), 7).unwrap(), [0, 0, 0, 0, 6, 0, 0, 0, 0, 0]);
        let tw = a.twisted(&Moebius::from_i64([9, 0, 0, 1]).unwrap());
        assert_eq!(fibre_cubic(&tw, &ProjPoint::int(2), 7).unwrap(), fibre_cubic(&a, &ProjPoint::int(4), 7).unwrap());
    }

    #[test]
    fn degenerate_boundary() {
        assert!(matches!("abg(1,1/4,1/4)".parse::<FibrationSpec>(), Err(CatalogError::DegenerateFamily(_))));
    }
}
