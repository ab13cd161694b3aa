//! Möbius-twisted pairings with a prescribed overlap of singular loci.
//!
//! Every twist is pinned by three exact point correspondences; the
//! remaining incidences become polynomial conditions (Case A), j-invariant
//! equations (Case B), or plain set checks (Case C and the isogenous case).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::catalog::{self, BeauvilleLabel, CatalogError, Family, FibrationSpec};
use crate::defect::{self, DefectError, DefectReport, ProductSpec};
use crate::poly::QPoly;
use crate::projq::{j_of_points, rat, rat_int, Moebius, Num, ProjPoint, Rational};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SearchError {
    #[error("loci live in different quadratic fields: {0}")]
    IrrationalLocusUnsupported(String),
    #[error(transparent)]
    Defect(#[from] DefectError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error("cannot parse candidate record: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, SearchError>;

/// Twists `M` with `#(left ∩ M⁻¹ right) = overlap`, optionally required to
/// map `preserve` onto itself.
#[derive(Clone, Debug, Default)]
pub struct AlignmentProblem {
    pub left: Vec<ProjPoint>,
    pub right: Vec<ProjPoint>,
    pub overlap: usize,
    pub preserve: Vec<ProjPoint>,
}

impl AlignmentProblem {
    pub fn new(left: Vec<ProjPoint>, right: Vec<ProjPoint>, overlap: usize) -> AlignmentProblem {
        AlignmentProblem { left, right, overlap, preserve: Vec::new() }
    }
}

fn ordered_triples(v: &[ProjPoint]) -> Vec<[&ProjPoint; 3]> {
    let mut out = Vec::new();
    for (i, a) in v.iter().enumerate() {
        for (j, b) in v.iter().enumerate() {
            for (k, c) in v.iter().enumerate() {
                if i != j && j != k && i != k {
                    out.push([a, b, c]);
                }
            }
        }
    }
    out
}

fn image(m: &Moebius, pts: &[ProjPoint]) -> BTreeSet<ProjPoint> {
    pts.iter().map(|p| m.apply(p)).collect()
}

/// All rational `M` sending three points of `left` to three points of
/// `right` that meet the overlap and preservation demands, deduplicated by
/// canonical form and sorted.
pub fn align_sets(prob: &AlignmentProblem) -> Vec<Moebius> {
    let left: BTreeSet<ProjPoint> = prob.left.iter().cloned().collect();
    let keep: BTreeSet<ProjPoint> = prob.preserve.iter().cloned().collect();
    let mut seen = BTreeSet::new();
    let rt = ordered_triples(&prob.right);
    for l in ordered_triples(&prob.left) {
        for r in &rt {
            let Some(m) = Moebius::through(l, *r) else { continue };
            if seen.contains(&m) {
                continue;
            }
            let twisted = image(&m.invert(), &prob.right);
            if twisted.intersection(&left).count() != prob.overlap {
                continue;
            }
            if !keep.is_empty() && image(&m, &prob.preserve) != keep {
                continue;
            }
            seen.insert(m);
        }
    }
    seen.into_iter().collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SearchCase {
    A,
    B,
    C,
    Iso,
}

impl fmt::Display for SearchCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SearchCase::A => "A",
            SearchCase::B => "B",
            SearchCase::C => "C",
            SearchCase::Iso => "iso",
        })
    }
}

impl FromStr for SearchCase {
    type Err = SearchError;
    fn from_str(s: &str) -> Result<SearchCase> {
        match s {
            "A" | "a" => Ok(SearchCase::A),
            "B" | "b" => Ok(SearchCase::B),
            "C" | "c" => Ok(SearchCase::C),
            "iso" | "ISO" => Ok(SearchCase::Iso),
            o => Err(SearchError::Parse(format!("unknown case '{o}'"))),
        }
    }
}

/// One emitted pairing together with its defect report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    pub case: SearchCase,
    pub product: ProductSpec,
    pub report: DefectReport,
    pub notes: Vec<String>,
}

impl Candidate {
    fn new(case: SearchCase, product: ProductSpec, notes: Vec<String>) -> Result<Candidate> {
        let report = defect::analyze(&product)?;
        Ok(Candidate { case, product, report, notes })
    }

    /// Twist of the right factor relative to the left one.
    pub fn twist(&self) -> Moebius {
        self.product.left.twist.invert().compose(&self.product.right.twist)
    }

    /// `(α², γ²)` when both factors are `ABG(1, a, a)` families.
    pub fn abg_params(&self) -> Option<(Rational, Rational)> {
        Some((abg_ratio(&self.product.left.family)?, abg_ratio(&self.product.right.family)?))
    }

    /// `case=..`, the report record, then one `note=..` field per note.
    pub fn to_record(&self) -> String {
        let mut s = format!("case={}\t{}", self.case, self.report.to_record());
        for n in &self.notes {
            s += &format!("\tnote={}", n.replace('\t', " "));
        }
        s
    }

    pub fn from_record(line: &str) -> Result<Candidate> {
        let mut case = None;
        let mut notes = Vec::new();
        let mut rest = Vec::new();
        for field in line.split('\t') {
            if let Some(c) = field.strip_prefix("case=") {
                case = Some(c.parse()?);
            } else if let Some(n) = field.strip_prefix("note=") {
                notes.push(n.to_string());
            } else {
                rest.push(field);
            }
        }
        let case = case.ok_or_else(|| SearchError::Parse("missing case field".into()))?;
        let report = DefectReport::from_record(&rest.join("\t"))?;
        Ok(Candidate { case, product: report.product.clone(), report, notes })
    }
}

impl fmt::Display for Candidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\tdelta={}\th12={}", self.product, self.report.delta, self.report.h12)?;
        for n in &self.notes {
            write!(f, "\t{n}")?;
        }
        Ok(())
    }
}

/// `a` for a family `ABG(1, a, a)` or any rescaling of it.
pub fn abg_ratio(f: &Family) -> Option<Rational> {
    match f {
        Family::Abg(a, b, g) if b == g && !a.is_zero() => Some(b / a),
        _ => None,
    }
}

fn abg_spec(a: &Rational) -> Result<FibrationSpec> {
    Ok(FibrationSpec::abg(Rational::one(), a.clone(), a.clone())?)
}

fn locus_points(spec: &FibrationSpec) -> Result<Vec<ProjPoint>> {
    Ok(catalog::singular_locus(spec)?.into_iter().map(|f| f.location).collect())
}

// ---------------------------------------------------------------------------
// Case A: #S = #S' = #S'' = 5.

/// Point of P¹ over Q[g] in homogeneous form.
type PolyPoint = (QPoly, QPoly);

fn poly_locus() -> [PolyPoint; 5] {
    let c = |n: i64| QPoly::from_ints(&[n]);
    let plus = QPoly::from_ints(&[1, 2]).pow(2);
    let minus = QPoly::from_ints(&[1, -2]).pow(2);
    [(c(1), QPoly::zero()), (c(0), c(1)), (c(1), c(1)), (plus, c(1)), (minus, c(1))]
}

/// Matrix sending `p1 -> 0`, `p2 -> 1`, `p3 -> ∞`.
fn poly_to_zero_one_inf(p1: &PolyPoint, p2: &PolyPoint, p3: &PolyPoint) -> [QPoly; 4] {
    let d23 = p2.0.mul(&p3.1).sub(&p3.0.mul(&p2.1));
    let d21 = p2.0.mul(&p1.1).sub(&p1.0.mul(&p2.1));
    [
        p1.1.mul(&d23),
        p1.0.mul(&d23).scale(&-Rational::one()),
        p3.1.mul(&d21),
        p3.0.mul(&d21).scale(&-Rational::one()),
    ]
}

fn poly_apply(n: &[QPoly; 4], p: &PolyPoint) -> PolyPoint {
    (n[0].mul(&p.0).add(&n[1].mul(&p.1)), n[2].mul(&p.0).add(&n[3].mul(&p.1)))
}

/// Roots of `P` of the form `√G` with `G` rational and not a square:
/// `P(g) = E(g²) + g·O(g²)` vanishes at `±√G` iff `E(G) = O(G) = 0`.
fn sqrt_roots(p: &QPoly) -> Vec<Rational> {
    let pick = |parity: usize| {
        QPoly::new(p.coeffs().iter().enumerate().filter(|(i, _)| i % 2 == parity).map(|(_, c)| c.clone()).collect())
    };
    let (e, o) = (pick(0), pick(1));
    let g = if e.is_zero() { o.monic() } else { e.gcd(&o) };
    g.rational_roots().into_iter().filter(|r| !r.is_zero() && !is_rational_square(r)).collect()
}

fn is_rational_square(q: &Rational) -> bool {
    use num_traits::Signed;
    if q.is_negative() {
        return false;
    }
    let sq = |n: &num_bigint::BigInt| {
        let r = n.sqrt();
        &r * &r == *n
    };
    sq(q.numer()) && sq(q.denom())
}

fn degenerate_square(a2: &Rational) -> bool {
    a2.is_zero() || *a2 == rat(1, 4) || a2.is_one()
}

/// Orients a pair so that the lexicographically smaller `(params, twist)`
/// comes first; `L × R^{M}` and `R × L^{M⁻¹}` are the same variety.
fn swap_key(a: &Rational, b: &Rational, m: &Moebius) -> (Rational, Rational, Moebius) {
    let k1 = (a.clone(), b.clone(), m.clone());
    let k2 = (b.clone(), a.clone(), m.invert());
    k1.min(k2)
}

/// Note for diagonal twists of two ABG families: `ABG(1,a,a)^{ct}` is the
/// untwisted `ABG(1/c, a/c, a/c)`, so the product is a fibre product of
/// two untwisted ABG families.
fn diagonal_note(a: &Rational, b: &Rational, m: &Moebius) -> Option<String> {
    let e = m.entries();
    if !(e[1].is_zero() && e[2].is_zero()) {
        return None;
    }
    let c = Rational::new(e[0].clone(), e[3].clone());
    let mut params = vec![Rational::one(), a.clone(), a.clone(), c.recip(), b / &c, b / &c];
    let l = params.iter().fold(num_bigint::BigInt::one(), |l, q| num_integer::Integer::lcm(&l, q.denom()));
    for q in params.iter_mut() {
        *q *= rat_int(l.clone());
    }
    let s = |v: &[Rational]| v.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(",");
    Some(format!("diagonal twist: same as abg({}) x abg({}), an untwisted ABG product", s(&params[..3]), s(&params[3..])))
}

/// Raw Case-A solution before deduplication.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseASolution {
    pub choice: [usize; 3],
    pub alpha2: Rational,
    pub gamma2: Rational,
    pub twist: Moebius,
}

/// Result of the 60 correspondence choices.
#[derive(Clone, Debug, Default)]
pub struct CaseAOutcome {
    pub choices: usize,
    /// Choices whose condition vanishes identically (the isogenous pairing).
    pub identically_zero: Vec<[usize; 3]>,
    pub raw: Vec<CaseASolution>,
    pub candidates: Vec<Candidate>,
}

/// Case A: `M⁻¹` maps the five points of `S_γ` onto `S_α`. Three of them go
/// to `0, 1, ∞`; the last two must be `(1 ± 2α)²`, which forces
/// `α = (A − B)/8` and one polynomial condition on `γ`.
pub fn case_a_search() -> Result<CaseAOutcome> {
    let pts = poly_locus();
    let mut out = CaseAOutcome::default();
    let mut rows: BTreeMap<(Rational, Rational, Moebius), CaseASolution> = BTreeMap::new();
    for i in 0..5 {
        for j in 0..5 {
            for k in 0..5 {
                if i == j || j == k || i == k {
                    continue;
                }
                out.choices += 1;
                let rest: Vec<usize> = (0..5).filter(|x| ![i, j, k].contains(x)).collect();
                let n = poly_to_zero_one_inf(&pts[i], &pts[j], &pts[k]);
                let (a0, a1) = poly_apply(&n, &pts[rest[0]]);
                let (b0, b1) = poly_apply(&n, &pts[rest[1]]);
                if a1.is_zero() || b1.is_zero() {
                    continue;
                }
                let al_n = a0.mul(&b1).sub(&b0.mul(&a1));
                let al_d = a1.mul(&b1).scale(&rat(8, 1));
                let two_n = al_n.scale(&rat(2, 1));
                let eq = a0.mul(&al_d.pow(2)).sub(&a1.mul(&al_d.add(&two_n).pow(2)));
                if eq.is_zero() {
                    out.identically_zero.push([i, j, k]);
                    continue;
                }
                let mut gammas: Vec<Num> = eq.rational_roots().into_iter().map(Num::Rat).collect();
                for g2 in sqrt_roots(&eq) {
                    if let Ok(s) = Num::sqrt_rational(&g2) {
                        gammas.push(s);
                    }
                }
                for g in gammas {
                    if let Some(sol) = case_a_solution([i, j, k], &n, &al_n, &al_d, &g)? {
                        let key = swap_key(&sol.alpha2, &sol.gamma2, &sol.twist);
                        out.raw.push(sol.clone());
                        rows.entry(key).or_insert(sol);
                    }
                }
            }
        }
    }
    for ((a2, g2, m), _) in rows {
        let product = ProductSpec::new(abg_spec(&a2)?, abg_spec(&g2)?.twisted(&m));
        let notes: Vec<String> = diagonal_note(&a2, &g2, &m).into_iter().collect();
        let c = Candidate::new(SearchCase::A, product, notes)?;
        if c.report.delta == 0 {
            out.candidates.push(c);
        }
    }
    Ok(out)
}

fn case_a_solution(
    choice: [usize; 3],
    n: &[QPoly; 4],
    al_n: &QPoly,
    al_d: &QPoly,
    g: &Num,
) -> Result<Option<CaseASolution>> {
    let ev = |p: &QPoly| p.eval_num(g).ok();
    let (Some(an), Some(ad)) = (ev(al_n), ev(al_d)) else { return Ok(None) };
    if ad.is_zero() {
        return Ok(None);
    }
    let Ok(alpha) = an.try_div(&ad) else { return Ok(None) };
    let (Some(a2), Some(g2)) = (alpha.pow(2).as_rational().cloned(), g.pow(2).as_rational().cloned()) else {
        return Ok(None);
    };
    if degenerate_square(&a2) || degenerate_square(&g2) {
        return Ok(None);
    }
    let entries: Vec<Num> = n.iter().filter_map(ev).collect();
    let Ok(entries) = <[Num; 4]>::try_from(entries) else { return Ok(None) };
    let Some(nm) = Moebius::from_num_entries(&entries) else { return Ok(None) };
    let twist = nm.invert();
    let (left, right) = (abg_spec(&a2)?, abg_spec(&g2)?.twisted(&twist));
    if ProductSpec::new(left.clone(), right.clone()).known_isogenous() {
        return Ok(None);
    }
    // M⁻¹ S_γ = S_α exactly.
    let l: BTreeSet<ProjPoint> = locus_points(&left)?.into_iter().collect();
    let r: BTreeSet<ProjPoint> = locus_points(&right)?.into_iter().collect();
    if l != r {
        return Ok(None);
    }
    Ok(Some(CaseASolution { choice, alpha2: a2, gamma2: g2, twist }))
}

// ---------------------------------------------------------------------------
// Case B: #S = 5, #S' = #S'' = 4, second family ABG(1,1,1).

/// One of the three j-equations, `j(λ(α)) = j(∞, 0, 1, 9)`.
#[derive(Clone, Debug)]
pub struct JEquation {
    pub name: &'static str,
    /// The point of `{∞, 0, 1}` left out of `M{∞,0,1,9}`.
    pub omitted: ProjPoint,
    pub poly: QPoly,
    /// All rational roots that are genuine solutions, both signs.
    pub roots: Vec<Rational>,
    /// Positive representatives kept for the search.
    pub accepted: Vec<Rational>,
    pub rejected: Vec<(Rational, String)>,
}

impl JEquation {
    pub fn has_rational_solutions(&self) -> bool {
        !self.roots.is_empty()
    }
}

#[derive(Clone, Debug, Default)]
pub struct CaseBOutcome {
    pub equations: Vec<JEquation>,
    pub candidates: Vec<Candidate>,
}

/// Cross ratio λ as a ratio of polynomials in α for each omitted point.
fn case_b_lambda(omitted: usize) -> (QPoly, QPoly) {
    let one = QPoly::one();
    let rp = QPoly::from_ints(&[1, 2]).pow(2);
    let rm = QPoly::from_ints(&[1, -2]).pow(2);
    match omitted {
        // C(0, 1, r+, r-)
        0 => (rp.mul(&one.sub(&rm)), rm.mul(&one.sub(&rp))),
        // C(∞, 1, r+, r-)
        1 => (one.sub(&rm), one.sub(&rp)),
        // C(∞, 0, r+, r-)
        _ => (rm, rp),
    }
}

/// Case B: `{∞,0,1} ⊄ M⁻¹{∞,0,1,9} ⊂ S_α`. The four points must share the
/// j-invariant of `{∞,0,1,9}`; rational α come from three equations, and
/// every rational twist realizing the inclusion is emitted.
pub fn case_b_search() -> Result<CaseBOutcome> {
    let target = j_of_points(&ProjPoint::infinity(), &ProjPoint::int(0), &ProjPoint::int(1), &ProjPoint::int(9))
        .map_err(CatalogError::from)?;
    let target = target.as_rational().expect("rational points have rational j").clone();
    let (jn, jd) = (rat_int(target.numer().clone()), rat_int(target.denom().clone()));
    let mut out = CaseBOutcome::default();
    let names = ["first", "second", "third"];
    let omitted = [ProjPoint::infinity(), ProjPoint::int(0), ProjPoint::int(1)];
    let mut alphas: BTreeMap<Rational, &'static str> = BTreeMap::new();
    for e in 0..3 {
        let (n, d) = case_b_lambda(e);
        let q = n.mul(&n).sub(&n.mul(&d)).add(&d.mul(&d));
        let lhs = q.pow(3).scale(&jd);
        let rhs = n.sub(&d).pow(2).mul(&n.pow(2)).mul(&d.pow(2)).scale(&jn);
        let poly = lhs.sub(&rhs);
        let mut eq =
            JEquation { name: names[e], omitted: omitted[e].clone(), poly: poly.clone(), roots: vec![], accepted: vec![], rejected: vec![] };
        for r in poly.rational_roots() {
            let (nv, dv) = (n.eval(&r), d.eval(&r));
            if nv.is_zero() || dv.is_zero() || nv == dv {
                continue;
            }
            eq.roots.push(r.clone());
            if r <= Rational::zero() {
                continue;
            }
            if r.is_one() {
                eq.rejected.push((r, "degenerate: ABG(1,1,1) has only four singular fibres".into()));
            } else if r == rat(1, 2) {
                eq.rejected.push((r, "degenerate: (1-2a)^2 = 0".into()));
            } else {
                eq.accepted.push(r.clone());
                alphas.entry(r).or_insert(names[e]);
            }
        }
        out.equations.push(eq);
    }
    let right = FibrationSpec::beauville(BeauvilleLabel::Gamma1_6);
    let s_right = locus_points(&right)?;
    let base: BTreeSet<ProjPoint> = [ProjPoint::infinity(), ProjPoint::int(0), ProjPoint::int(1)].into();
    for (alpha, eqn) in alphas {
        let a2 = &alpha * &alpha;
        let left = abg_spec(&a2)?;
        let prob = AlignmentProblem::new(locus_points(&left)?, s_right.clone(), 4);
        for m in align_sets(&prob) {
            let twisted = image(&m.invert(), &s_right);
            if base.is_subset(&twisted) {
                continue;
            }
            let product = ProductSpec::new(left.clone(), right.twisted(&m));
            let notes = vec![format!("alpha={alpha}"), format!("equation={eqn}"), format!("Mt={}", m.formula())];
            let c = Candidate::new(SearchCase::B, product, notes)?;
            if c.report.delta == 0 {
                out.candidates.push(c);
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Case C: #S = #S' = 4, #S'' = 3.

/// A generator word `m_i T^j (RT)^k m_l⁻¹`, indices as displayed (1-based i, l).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WordKey {
    pub i: u8,
    pub l: u8,
    pub j: u8,
    pub k: u8,
}

impl fmt::Display for WordKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m{} T^{} (RT)^{} m{}^-1", self.i, self.j, self.k, self.l)
    }
}

/// All 60 generator words for `{0, 1, 9, ∞}`, before any filtering.
pub fn gamma1_6_words() -> Vec<(WordKey, Moebius)> {
    let mk = |e: [i64; 4]| Moebius::from_i64(e).expect("invertible generator");
    let t = mk([-1, 1, 0, 1]);
    let r = mk([0, 1, 1, 0]);
    let ms = [mk([9, 0, 1, 8]), mk([9, 0, 0, 1]), mk([8, 1, 0, 1]), Moebius::identity()];
    let rt = r.compose(&t);
    let mut out = Vec::new();
    for i in 0..4 {
        for l in i..4 {
            for j in 0..2u8 {
                for k in 0..3u8 {
                    let mut w = ms[i].clone();
                    if j == 1 {
                        w = w.compose(&t);
                    }
                    for _ in 0..k {
                        w = w.compose(&rt);
                    }
                    w = w.compose(&ms[l].invert());
                    out.push((WordKey { i: i as u8 + 1, l: l as u8 + 1, j, k }, w));
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, Default)]
pub struct CaseCOutcome {
    /// Generator words discarded because `#(S ∪ M⁻¹S) ≠ 5`.
    pub excluded: Vec<(WordKey, Moebius)>,
    pub candidates: Vec<Candidate>,
    /// Classes under `M ~ M⁻¹` (same variety).
    pub classes: Vec<Vec<Moebius>>,
    /// Classes whose maps preserve `{0, 1, ∞}`.
    pub rigid_classes: Vec<Vec<Moebius>>,
}

impl CaseCOutcome {
    pub fn twists(&self) -> Vec<Moebius> {
        self.candidates.iter().map(Candidate::twist).collect()
    }
    /// Twists mapping `set` onto itself.
    pub fn preserving(&self, set: &[ProjPoint]) -> Vec<Moebius> {
        let s: BTreeSet<ProjPoint> = set.iter().cloned().collect();
        self.twists().into_iter().filter(|m| image(m, set) == s).collect()
    }
}

fn inverse_classes(ms: &[Moebius]) -> Vec<Vec<Moebius>> {
    let set: BTreeSet<&Moebius> = ms.iter().collect();
    let mut done = BTreeSet::new();
    let mut out = Vec::new();
    for m in ms {
        if done.contains(m) {
            continue;
        }
        let inv = m.invert();
        let mut class = vec![m.clone()];
        done.insert(m.clone());
        if inv != *m && set.contains(&inv) {
            done.insert(inv.clone());
            class.push(inv);
        }
        out.push(class);
    }
    out
}

fn finish_case_c(candidates: Vec<Candidate>, excluded: Vec<(WordKey, Moebius)>) -> CaseCOutcome {
    let ms: Vec<Moebius> = candidates.iter().map(Candidate::twist).collect();
    let classes = inverse_classes(&ms);
    let base = [ProjPoint::infinity(), ProjPoint::int(0), ProjPoint::int(1)];
    let bs: BTreeSet<ProjPoint> = base.iter().cloned().collect();
    let rigid_classes = classes.iter().filter(|c| image(&c[0], &base) == bs).cloned().collect();
    CaseCOutcome { excluded, candidates, classes, rigid_classes }
}

fn check_fields(a: &[ProjPoint], b: &[ProjPoint]) -> Result<()> {
    let fields: BTreeSet<i64> = a.iter().chain(b).filter_map(ProjPoint::field).collect();
    if fields.len() > 1 {
        return Err(SearchError::IrrationalLocusUnsupported(format!("{fields:?}")));
    }
    Ok(())
}

/// Case C for `left × right^{M}`. The Γ₁(6) self-pairing uses the explicit
/// generator words; other pairs run [`align_sets`] with overlap 3.
pub fn case_c_search(left: &FibrationSpec, right: &FibrationSpec) -> Result<CaseCOutcome> {
    let (sl, sr) = (locus_points(left)?, locus_points(right)?);
    check_fields(&sl, &sr)?;
    let g16 = Family::Beauville(BeauvilleLabel::Gamma1_6);
    let self_g16 = left.family == g16 && right.family == g16 && left.twist.is_identity() && right.twist.is_identity();
    let mut candidates = Vec::new();
    let mut excluded = Vec::new();
    if self_g16 {
        let s: BTreeSet<ProjPoint> = sl.iter().cloned().collect();
        let mut seen = BTreeSet::new();
        for (key, w) in gamma1_6_words() {
            let union: BTreeSet<ProjPoint> = s.union(&image(&w.invert(), &sr)).cloned().collect();
            if union.len() != 5 {
                excluded.push((key, w));
                continue;
            }
            if !seen.insert(w.clone()) {
                continue;
            }
            let product = ProductSpec::new(left.clone(), right.twisted(&w));
            let c = Candidate::new(SearchCase::C, product, vec![format!("word={key}"), format!("Mt={}", w.formula())])?;
            if c.report.delta == 0 {
                candidates.push(c);
            }
        }
    } else {
        let same = left.family == right.family;
        let mut kept: BTreeSet<Moebius> = BTreeSet::new();
        for m in align_sets(&AlignmentProblem::new(sl, sr, 3)) {
            if same && kept.contains(&m.invert()) {
                continue;
            }
            let product = ProductSpec::new(left.clone(), right.twisted(&m));
            let c = Candidate::new(SearchCase::C, product, vec![format!("Mt={}", m.formula())])?;
            if c.report.delta == 0 {
                kept.insert(m);
                candidates.push(c);
            }
        }
    }
    Ok(finish_case_c(candidates, excluded))
}

// ---------------------------------------------------------------------------
// Isogenous pairs.

/// For an isogenous pair `δ = 0` reduces to `#S = 4`.
pub fn isogenous_case_check(spec: &ProductSpec) -> Result<bool> {
    if !spec.isogenous {
        return Ok(false);
    }
    Ok(catalog::singular_locus(&spec.left)?.len() == 4)
}

/// Isogenous products known to the catalogue: every Beauville self-product
/// and the Γ₀(8)∩Γ₁(4) pair with `Mt = (t−1)/(t+1)`.
pub fn isogenous_search() -> Result<Vec<Candidate>> {
    let mut out = Vec::new();
    let mut specs: Vec<ProductSpec> = BeauvilleLabel::ALL
        .iter()
        .map(|&l| {
            let f = FibrationSpec::beauville(l);
            let mut p = ProductSpec::new(f.clone(), f);
            p.isogenous = true;
            p
        })
        .collect();
    let g = FibrationSpec::beauville(BeauvilleLabel::Gamma0_8_1_4);
    let mut p = ProductSpec::new(g.clone(), g.twisted(&Moebius::from_i64([1, -1, 1, 1]).expect("invertible")));
    p.isogenous = true;
    specs.push(p);
    for spec in specs {
        if isogenous_case_check(&spec)? {
            let c = Candidate::new(SearchCase::Iso, spec, vec!["rigid".into()])?;
            if c.report.delta == 0 {
                out.push(c);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[&str]) -> Vec<ProjPoint> {
        v.iter().map(|s| s.parse().unwrap()).collect()
    }

    #[test]
    fn zero_one_nine_permutations() {
        let s = pts(&["oo", "0", "1", "9"]);
        let mut prob = AlignmentProblem::new(s.clone(), s, 3);
        prob.preserve = pts(&["0", "1", "9"]);
        let got: BTreeSet<Moebius> = align_sets(&prob).into_iter().collect();
        let want: BTreeSet<Moebius> = [[81, -81, 17, -81], [81, -81, 73, -9], [9, -81, 73, -81], [9, 0, 10, -9], [-1, 9, 7, 1]]
            .iter()
            .map(|e| Moebius::from_i64(*e).unwrap())
            .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn identity_alignment() {
        let s = pts(&["oo", "0", "1", "9"]);
        let got = align_sets(&AlignmentProblem::new(s.clone(), s, 4));
        assert!(got.contains(&Moebius::identity()));
    }

    #[test]
    fn alpha_17_embedding() {
        let prob = AlignmentProblem::new(pts(&["oo", "0", "1", "1225", "1089"]), pts(&["oo", "0", "1", "9"]), 4);
        let m = Moebius::from_i64([1, -1, 1, -1089]).unwrap();
        assert!(align_sets(&prob).contains(&m));
    }

    #[test]
    fn word_count() {
        let w = gamma1_6_words();
        assert_eq!(w.len(), 60);
        assert_eq!(w.iter().map(|x| &x.1).collect::<BTreeSet<_>>().len(), 54);
    }
}
