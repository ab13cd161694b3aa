//! Point counts over F_p and the Frobenius trace on the two-dimensional
//! piece `U ⊂ H³` of a rigid-type fibre product.
//!
//! Smooth fibres are counted on the plane cubic. Singular fibres use the
//! `I_m` cycle model `1 − a_t + p·fix_t`, with the split sign taken from the
//! splitting discriminant or, at p = 2 and irrational locations, read off
//! the reduced cubic.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use thiserror::Error;

use crate::arith::{self, mul_mod};
use crate::catalog::{self, reduce_pencil, CatalogError, FibrationSpec, FpPoint, PencilFp, SingularFibre};
use crate::defect::{self, DefectError, ProductSpec};
use crate::projq::ProjPoint;
use crate::ternary::CUBIC_MONOS;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FrobError {
    #[error("p = {p} is bad: {reason}")]
    BadPrime { p: u64, reason: String },
    #[error("p = {p}: singular locations {a} and {b} collide")]
    LocationCollision { p: u64, a: String, b: String },
    #[error("p = {p}: model failure: {reason}")]
    ModelFailure { p: u64, reason: String },
    #[error("{0} is a singular fibre location")]
    SingularFibre(String),
    #[error(transparent)]
    Defect(#[from] DefectError),
    #[error("cache: {0}")]
    Cache(String),
}

impl From<CatalogError> for FrobError {
    fn from(e: CatalogError) -> Self {
        match e {
            CatalogError::BadPrime { p, reason } => FrobError::BadPrime { p, reason },
            e => FrobError::Defect(DefectError::Catalog(e)),
        }
    }
}

impl FrobError {
    /// Bad primes and collisions mean "skip this prime"; everything else is a failure.
    pub fn is_bad_prime(&self) -> bool {
        matches!(self, FrobError::BadPrime { .. } | FrobError::LocationCollision { .. })
    }
}

pub type Result<T> = std::result::Result<T, FrobError>;

/// Value of a cubic (coefficients in `CUBIC_MONOS` order) at a point of F_p³.
pub fn eval_cubic(c: &[u64; 10], pt: [u64; 3], p: u64) -> u64 {
    let pw = |x: u64| [1, x, mul_mod(x, x, p), mul_mod(mul_mod(x, x, p), x, p)];
    let (px, py, pz) = (pw(pt[0]), pw(pt[1]), pw(pt[2]));
    let mut acc = 0u64;
    for (e, &a) in CUBIC_MONOS.iter().zip(c) {
        if a == 0 {
            continue;
        }
        let m = mul_mod(mul_mod(px[e[0] as usize], py[e[1] as usize], p), pz[e[2] as usize], p);
        acc = (acc + mul_mod(a, m, p)) % p;
    }
    acc
}

/// Gradient of a cubic at a point of F_p³.
pub fn grad_cubic(c: &[u64; 10], pt: [u64; 3], p: u64) -> [u64; 3] {
    let pw = |x: u64| [1, x, mul_mod(x, x, p)];
    let pws = [pw(pt[0]), pw(pt[1]), pw(pt[2])];
    let mut g = [0u64; 3];
    for (e, &a) in CUBIC_MONOS.iter().zip(c) {
        if a == 0 {
            continue;
        }
        for (i, gi) in g.iter_mut().enumerate() {
            if e[i] == 0 {
                continue;
            }
            let mut m = mul_mod(a, e[i] as u64 % p, p);
            for (j, pj) in pws.iter().enumerate() {
                let k = if i == j { e[j] - 1 } else { e[j] } as usize;
                m = mul_mod(m, pj[k], p);
            }
            *gi = (*gi + m) % p;
        }
    }
    g
}

/// Canonical representatives of P²(F_p): `(x, y, 1)`, `(x, 1, 0)`, `(1, 0, 0)`.
pub fn plane_points(p: u64) -> impl Iterator<Item = [u64; 3]> {
    (0..p)
        .flat_map(move |x| (0..p).map(move |y| [x, y, 1]))
        .chain((0..p).map(|x| [x, 1, 0]))
        .chain(std::iter::once([1, 0, 0]))
}

/// Number of F_p-points of a plane cubic, by enumeration of P²(F_p).
pub fn count_cubic(c: &[u64; 10], p: u64) -> u64 {
    plane_points(p).filter(|&pt| eval_cubic(c, pt, p) == 0).count() as u64
}

/// Coefficients `[s³, s²r, sr², r³]` of the cubic restricted to the line
/// through `q1`, `q2`, parametrized as `s·q1 + r·q2`.
fn restrict_to_line(c: &[u64; 10], q1: [u64; 3], q2: [u64; 3], p: u64) -> [u64; 4] {
    let mut out = [0u64; 4];
    for (e, &a) in CUBIC_MONOS.iter().zip(c) {
        if a == 0 {
            continue;
        }
        // Product of linear forms (q1_i s + q2_i r) with multiplicities e_i.
        let mut poly = vec![a];
        for i in 0..3 {
            for _ in 0..e[i] {
                let mut next = vec![0u64; poly.len() + 1];
                for (k, &b) in poly.iter().enumerate() {
                    next[k] = (next[k] + mul_mod(b, q1[i], p)) % p;
                    next[k + 1] = (next[k + 1] + mul_mod(b, q2[i], p)) % p;
                }
                poly = next;
            }
        }
        for (k, b) in poly.into_iter().enumerate() {
            out[k] = (out[k] + b) % p;
        }
    }
    out
}

/// Two spanning points of the line `l·(x, y, z) = 0`.
fn line_basis(l: [u64; 3], p: u64) -> ([u64; 3], [u64; 3]) {
    let neg = |x: u64| (p - x % p) % p;
    if l[2] != 0 {
        ([l[2], 0, neg(l[0])], [0, l[2], neg(l[1])])
    } else if l[1] != 0 {
        ([l[1], neg(l[0]), 0], [0, 0, 1])
    } else {
        ([0, 1, 0], [0, 0, 1])
    }
}

fn line_points(l: [u64; 3], p: u64) -> Vec<[u64; 3]> {
    let (q1, q2) = line_basis(l, p);
    let mut pts = vec![q1];
    for s in 0..p {
        pts.push(std::array::from_fn(|i| (mul_mod(s, q1[i], p) + q2[i]) % p));
    }
    pts
}

/// Sign of a multiplicative fibre read off its reduced plane cubic:
/// `+1` split, `−1` non-split.
pub fn geometric_split_sign(c: &[u64; 10], p: u64) -> Result<i32> {
    let sing = |pt: [u64; 3]| eval_cubic(c, pt, p) == 0 && grad_cubic(c, pt, p) == [0, 0, 0];
    let mut n = None;
    for l in plane_points(p) {
        let (q1, q2) = line_basis(l, p);
        if restrict_to_line(c, q1, q2, p) == [0; 4] {
            n = Some(line_points(l, p).into_iter().filter(|&q| !sing(q)).count() as u64);
            break;
        }
    }
    let n = match n {
        Some(n) => n,
        None => plane_points(p).filter(|&q| eval_cubic(c, q, p) == 0 && !sing(q)).count() as u64,
    };
    if n + 1 == p {
        Ok(1)
    } else if n == p + 1 {
        Ok(-1)
    } else {
        Err(FrobError::ModelFailure { p, reason: format!("degenerate fibre has {n} smooth points on a component") })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FibreKind {
    Smooth,
    Multiplicative,
}

/// Local data of the smooth model over a point of P¹(F_p).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalTrace {
    pub t: FpPoint,
    pub a_t: i64,
    pub kind: FibreKind,
    pub fibre_count: i64,
    /// Frobenius-stable nodes of the `I_m` cycle, signed by `a_t` in products.
    pub rational_nodes: i64,
    /// Frobenius-fixed components (1 for smooth fibres).
    pub fix: i64,
    pub m: u32,
}

/// Fibre counts of an untwisted pencil over every point of P¹(F_p), from
/// one pass over P²(F_p).
struct PencilCounts {
    counts: Vec<u64>,
    singular: Vec<bool>,
    base: u64,
}

fn pencil_counts(pf: &PencilFp) -> Result<PencilCounts> {
    let p = pf.p;
    let n = p as usize + 1;
    let mut counts = vec![0u64; n];
    let mut singular = vec![false; n];
    let mut base = 0u64;
    for pt in plane_points(p) {
        let fv = eval_cubic(&pf.f, pt, p);
        let gv = eval_cubic(&pf.g, pt, p);
        let gf = grad_cubic(&pf.f, pt, p);
        let gg = grad_cubic(&pf.g, pt, p);
        if fv == 0 && gv == 0 {
            base += 1;
            // Member v·F − u·G is singular here iff v·∇F = u·∇G.
            let t = if gg != [0, 0, 0] {
                let i = gg.iter().position(|&x| x != 0).unwrap();
                let lam = mul_mod(gf[i], arith::inv_mod(gg[i], p).unwrap(), p);
                (0..3).all(|k| gf[k] == mul_mod(lam, gg[k], p)).then_some(FpPoint::Fin(lam))
            } else if gf != [0, 0, 0] {
                Some(FpPoint::Inf)
            } else {
                return Err(FrobError::BadPrime { p, reason: "a base point is singular on every member".into() });
            };
            if let Some(t) = t {
                singular[t.index(p)] = true;
            }
            continue;
        }
        let t = FpPoint::from_uv(fv, gv, p);
        counts[t.index(p)] += 1;
        let sing = (0..3).all(|k| mul_mod(gv, gf[k], p) == mul_mod(fv, gg[k], p));
        if sing {
            singular[t.index(p)] = true;
        }
    }
    Ok(PencilCounts { counts, singular, base })
}

/// Reduction of a catalogued location into P¹(F_p); `None` if it is not
/// F_p-rational. Conjugate locations have the same fibre type, so the two
/// roots of the minimal polynomial are assigned by the sign of the
/// irrational part.
fn reduce_location(loc: &ProjPoint, p: u64) -> Result<Option<FpPoint>> {
    let Some(x) = loc.value() else { return Ok(Some(FpPoint::Inf)) };
    if x.field().is_none() {
        return Ok(FpPoint::reduce(loc, p));
    }
    let (Some(tr), Some(nm)) = (arith::rat_mod(&x.trace(), p), arith::rat_mod(&x.norm(), p)) else {
        return Err(FrobError::BadPrime { p, reason: format!("{loc} meets oo mod p") });
    };
    let roots: Vec<u64> =
        (0..p).filter(|&r| (mul_mod(r, r, p) + p - mul_mod(tr, r, p) + nm) % p == 0).collect();
    match roots.len() {
        0 => Ok(None),
        1 => Err(FrobError::LocationCollision { p, a: loc.to_string(), b: loc.conj().to_string() }),
        _ => {
            let positive = x.parts().1 > num_traits::Zero::zero();
            Ok(Some(FpPoint::Fin(if positive { roots[0] } else { roots[1] })))
        }
    }
}

/// Per-prime data of one fibration: local traces over all of P¹(F_p).
#[derive(Clone, Debug)]
pub struct SideFp {
    pub p: u64,
    pub fibres: Vec<LocalTrace>,
}

impl SideFp {
    pub fn at(&self, t: FpPoint) -> &LocalTrace {
        &self.fibres[t.index(self.p)]
    }
}

fn hasse_ok(a: i64, p: u64) -> bool {
    (a * a) as u64 <= 4 * p
}

/// Local traces of `spec` at every point of P¹(F_p).
pub fn side_data(spec: &FibrationSpec, p: u64) -> Result<SideFp> {
    let locus = catalog::singular_locus(spec)?;
    side_data_with(spec, &locus, p)
}

fn side_data_with(spec: &FibrationSpec, locus: &[SingularFibre], p: u64) -> Result<SideFp> {
    let pf = reduce_pencil(spec, p)?;
    let counts = pencil_counts(&pf)?;
    let mut sing: BTreeMap<FpPoint, &SingularFibre> = BTreeMap::new();
    for f in locus {
        if let Some(t) = reduce_location(&f.location, p)? {
            if let Some(other) = sing.insert(t, f) {
                return Err(FrobError::LocationCollision { p, a: other.location.to_string(), b: f.location.to_string() });
            }
        }
    }
    let pi = p as i64;
    let mut fibres = Vec::with_capacity(p as usize + 1);
    for t in FpPoint::all(p) {
        let s = pf.base_point(t);
        let lt = match sing.get(&t) {
            Some(f) => {
                let sign = match (&f.split_disc, p) {
                    (Some(d), p) if p > 2 => match arith::legendre(d, p) {
                        0 => return Err(FrobError::BadPrime { p, reason: format!("p divides the split discriminant at {}", f.location) }),
                        s => s,
                    },
                    _ => geometric_split_sign(&pf.cubic(t), p)?,
                };
                let m = f.m as i64;
                let (fix, nodes) = match (sign, m % 2) {
                    (1, _) => (m, m),
                    (_, 1) => (1, 1),
                    _ => (2, 0),
                };
                LocalTrace {
                    t,
                    a_t: sign as i64,
                    kind: FibreKind::Multiplicative,
                    fibre_count: 1 - sign as i64 + pi * fix,
                    rational_nodes: nodes,
                    fix,
                    m: f.m,
                }
            }
            None => {
                if counts.singular[s.index(p)] {
                    return Err(FrobError::BadPrime { p, reason: format!("extra singular fibre over t = {t}") });
                }
                let n = (counts.counts[s.index(p)] + counts.base) as i64;
                let a = pi + 1 - n;
                if !hasse_ok(a, p) {
                    return Err(FrobError::ModelFailure { p, reason: format!("Hasse bound fails over t = {t}: a = {a}") });
                }
                LocalTrace { t, a_t: a, kind: FibreKind::Smooth, fibre_count: n, rational_nodes: 0, fix: 1, m: 0 }
            }
        };
        fibres.push(lt);
    }
    Ok(SideFp { p, fibres })
}

/// Local trace of `spec` over one point of P¹(F_p).
pub fn local_trace(spec: &FibrationSpec, t: FpPoint, p: u64) -> Result<LocalTrace> {
    Ok(side_data(spec, p)?.at(t).clone())
}

/// `a_p` of the smooth fibre over a rational point.
pub fn ap_elliptic(spec: &FibrationSpec, t: &ProjPoint, p: u64) -> Result<i64> {
    if catalog::singular_locus(spec)?.iter().any(|f| &f.location == t) {
        return Err(FrobError::SingularFibre(t.to_string()));
    }
    let tp = FpPoint::reduce(t, p).ok_or_else(|| FrobError::SingularFibre(t.to_string()))?;
    let lt = side_data(spec, p)?.at(tp).clone();
    if lt.kind != FibreKind::Smooth {
        return Err(FrobError::BadPrime { p, reason: format!("{t} reduces to a singular location") });
    }
    Ok(lt.a_t)
}

/// `(#W(F_p), signed rational node count)`.
pub fn count_product(spec: &ProductSpec, p: u64) -> Result<(i64, i64)> {
    let (l, r) = (side_data(&spec.left, p)?, side_data(&spec.right, p)?);
    Ok(product_counts(&l, &r))
}

fn product_counts(l: &SideFp, r: &SideFp) -> (i64, i64) {
    let mut w = 0i64;
    let mut nodes = 0i64;
    for (a, b) in l.fibres.iter().zip(&r.fibres) {
        w += a.fibre_count * b.fibre_count;
        if a.kind == FibreKind::Multiplicative && b.kind == FibreKind::Multiplicative {
            nodes += a.rational_nodes * b.rational_nodes * a.a_t * b.a_t;
        }
    }
    (w, nodes)
}

/// `(euler(Ŵ), h¹¹)` of the small resolution.
pub fn hodge_model(spec: &ProductSpec) -> Result<(i64, i64)> {
    let r = defect::analyze(spec)?;
    let n = r.node_total();
    Ok((2 * n, r.h12 + n))
}

/// One line of a trace ledger.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceRecord {
    pub p: u64,
    pub w_count: i64,
    pub node_count: i64,
    pub what_count: i64,
    /// Trace of Frobenius on the divisor classes, divided by p.
    pub t2: i64,
    pub h11: i64,
    pub h12: i64,
    pub correction: i64,
    pub apu: i64,
}

impl TraceRecord {
    /// `p W nodes What T2 h11 correction apU`, tab-separated.
    pub fn to_tsv(&self) -> String {
        format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            self.p, self.w_count, self.node_count, self.what_count, self.t2, self.h11, self.correction, self.apu
        )
    }
    pub fn from_tsv(line: &str, h12: i64) -> std::result::Result<TraceRecord, String> {
        let v: Vec<i64> = line
            .split('\t')
            .map(|x| x.trim().parse::<i64>().map_err(|_| format!("bad ledger field '{x}'")))
            .collect::<std::result::Result<_, _>>()?;
        if v.len() != 8 {
            return Err(format!("ledger line needs 8 fields, got {}", v.len()));
        }
        Ok(TraceRecord {
            p: v[0] as u64,
            w_count: v[1],
            node_count: v[2],
            what_count: v[3],
            t2: v[4],
            h11: v[5],
            h12,
            correction: v[6],
            apu: v[7],
        })
    }
}

fn weil_ok(a: i64, p: u64) -> bool {
    let (a, p) = (a as i128, p as i128);
    a * a <= 4 * p * p * p
}

/// Extracts `a_p(U)` for a product with δ = 0 at a good prime.
pub fn extract_apu(spec: &ProductSpec, p: u64) -> Result<TraceRecord> {
    let report = defect::analyze(spec)?;
    if report.delta != 0 {
        return Err(DefectError::DefectNonzero(report.delta).into());
    }
    let bad = defect::heuristic_bad_primes(spec)?;
    if let Some(why) = bad.provenance(p) {
        return Err(FrobError::BadPrime { p, reason: why });
    }
    let l = side_data(&spec.left, p)?;
    let r = side_data(&spec.right, p)?;
    let (w, nodes) = product_counts(&l, &r);
    let pi = p as i64;
    let what = w + pi * nodes;
    let mut t2 = 1 + report.s.len() as i64 + report.s_prime.len() as i64 - 6;
    let mut correction = 0i64;
    let mut pairs = Vec::new();
    for (a, b) in l.fibres.iter().zip(&r.fibres) {
        let (sa, sb) = (a.kind == FibreKind::Multiplicative, b.kind == FibreKind::Multiplicative);
        if sa || sb {
            t2 += a.fix * b.fix - 1;
        }
        match (sa, sb) {
            (true, false) => correction += (a.fix - 1) * b.a_t,
            (false, true) => correction += (b.fix - 1) * a.a_t,
            (false, false) => pairs.push((a.a_t, b.a_t)),
            _ => {}
        }
    }
    let base = 1 + pi * pi * pi - what - pi * correction;
    let with = |eps: i64| base + (pi + pi * pi) * (t2 + eps);
    let eps = if report.d == 1 {
        isogeny_sign(&pairs, p, |e| weil_ok(with(e), p))?
    } else {
        0
    };
    let apu = with(eps);
    t2 += eps;
    let rec = TraceRecord {
        p,
        w_count: w,
        node_count: nodes,
        what_count: what,
        t2,
        h11: report.h12 + report.node_total(),
        h12: report.h12,
        correction,
        apu,
    };
    if !weil_ok(apu, p) {
        return Err(FrobError::ModelFailure { p, reason: format!("Weil bound fails: {}", rec.to_tsv()) });
    }
    Ok(rec)
}

/// Sign of the isogeny class on the transcendental part of `H²` of the
/// generic fibre product: `+1` when `a_t = a'_t`, `−1` when `a_t = −a'_t`.
fn isogeny_sign(pairs: &[(i64, i64)], p: u64, weil: impl Fn(i64) -> bool) -> Result<i64> {
    let mut seen = None;
    for &(a, b) in pairs {
        let e = if a == b && a != 0 {
            1
        } else if a == -b && a != 0 {
            -1
        } else if a == b {
            continue;
        } else {
            return Err(FrobError::ModelFailure { p, reason: format!("isogenous fibres disagree: a = {a}, a' = {b}") });
        };
        if seen.is_some_and(|s| s != e) {
            return Err(FrobError::ModelFailure { p, reason: "isogeny sign is not constant".into() });
        }
        seen = Some(e);
    }
    match seen {
        Some(e) => Ok(e),
        None => match (weil(1), weil(-1)) {
            (true, false) => Ok(1),
            (false, true) => Ok(-1),
            _ => Err(FrobError::ModelFailure { p, reason: "isogeny sign undetermined".into() }),
        },
    }
}

/// A trace ledger for one product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ledger {
    pub product: String,
    pub h12: i64,
    pub records: Vec<TraceRecord>,
    /// Primes skipped as bad, with the reason.
    pub skipped: Vec<(u64, String)>,
}

impl Ledger {
    pub fn render(&self) -> String {
        let mut out = format!("# product={}\th12={}\n# p\tW\tnodes\tWhat\tT2\th11\tcorrection\tapU\n", self.product, self.h12);
        for r in &self.records {
            out += &r.to_tsv();
            out.push('\n');
        }
        for (p, why) in &self.skipped {
            out += &format!("# skipped\t{p}\t{why}\n");
        }
        out
    }

    pub fn parse(text: &str) -> std::result::Result<Ledger, String> {
        let mut product = None;
        let mut h12 = 0;
        let mut records = Vec::new();
        let mut skipped = Vec::new();
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            if let Some(rest) = line.strip_prefix("# product=") {
                let (prod, h) = rest.split_once("\th12=").ok_or("header lacks h12")?;
                product = Some(prod.to_string());
                h12 = h.trim().parse().map_err(|_| "bad h12")?;
            } else if let Some(rest) = line.strip_prefix("# skipped\t") {
                let (p, why) = rest.split_once('\t').ok_or("bad skipped line")?;
                skipped.push((p.parse().map_err(|_| "bad skipped prime")?, why.to_string()));
            } else if line.starts_with('#') {
                continue;
            } else {
                records.push(TraceRecord::from_tsv(line, h12)?);
            }
        }
        Ok(Ledger { product: product.ok_or("missing '# product=' header")?, h12, records, skipped })
    }

    /// `p ↦ apU`.
    pub fn traces(&self) -> BTreeMap<u64, i64> {
        self.records.iter().map(|r| (r.p, r.apu)).collect()
    }
}

impl fmt::Display for Ledger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Builds the ledger of `spec` over primes `≤ bound`; bad primes are skipped
/// and listed, model failures abort.
pub fn ledger(spec: &ProductSpec, primes: &[u64]) -> Result<Ledger> {
    let report = defect::analyze(spec)?;
    let mut records = Vec::new();
    let mut skipped = Vec::new();
    for &p in primes {
        match extract_apu(spec, p) {
            Ok(r) => records.push(r),
            Err(e) if e.is_bad_prime() => skipped.push((p, e.to_string())),
            Err(e) => return Err(e),
        }
    }
    Ok(Ledger { product: spec.to_string(), h12: report.h12, records, skipped })
}

/// Plain-text cache of trace records keyed by `(product text, p)`.
#[derive(Clone, Debug, Default)]
pub struct TraceCache {
    entries: BTreeMap<(String, u64), TraceRecord>,
}

impl TraceCache {
    pub fn load(path: &Path) -> Result<TraceCache> {
        let mut c = TraceCache::default();
        if !path.exists() {
            return Ok(c);
        }
        let text = std::fs::read_to_string(path).map_err(|e| FrobError::Cache(e.to_string()))?;
        for line in text.lines().filter(|l| !l.is_empty()) {
            let mut it = line.splitn(3, '\t');
            let (Some(prod), Some(h12), Some(rest)) = (it.next(), it.next(), it.next()) else {
                return Err(FrobError::Cache(format!("bad cache line '{line}'")));
            };
            let h12 = h12.parse().map_err(|_| FrobError::Cache(format!("bad h12 in '{line}'")))?;
            let rec = TraceRecord::from_tsv(rest, h12).map_err(FrobError::Cache)?;
            c.entries.insert((prod.to_string(), rec.p), rec);
        }
        Ok(c)
    }
    pub fn save(&self, path: &Path) -> Result<()> {
        let mut out = String::new();
        for ((prod, _), r) in &self.entries {
            out += &format!("{prod}\t{}\t{}\n", r.h12, r.to_tsv());
        }
        std::fs::write(path, out).map_err(|e| FrobError::Cache(e.to_string()))
    }
    pub fn get(&self, spec: &ProductSpec, p: u64) -> Option<&TraceRecord> {
        self.entries.get(&(spec.to_string(), p))
    }
    pub fn insert(&mut self, spec: &ProductSpec, r: TraceRecord) {
        self.entries.insert((spec.to_string(), r.p), r);
    }
    pub fn len(&self) -> usize {
        self.entries.len()
    }
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}
