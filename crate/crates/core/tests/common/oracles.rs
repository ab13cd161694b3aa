//! Independent reference computations used by the integration and
//! acceptance tests. Nothing here calls the routine it is checking.
#![allow(dead_code)]

use std::collections::BTreeSet;

use cymod_core::catalog::singular_locus;
use cymod_core::{BeauvilleLabel, DefectReport, FibrationSpec, ProjPoint, ProductSpec};

/// Exponents of the coefficient vector of a plane cubic, written out again
/// rather than taken from the library.
const MONOS: [[u32; 3]; 10] =
    [[3, 0, 0], [2, 1, 0], [2, 0, 1], [1, 2, 0], [1, 1, 1], [1, 0, 2], [0, 3, 0], [0, 2, 1], [0, 1, 2], [0, 0, 3]];

fn pw(x: u64, e: u32, p: u64) -> u128 {
    (0..e).fold(1u128, |acc, _| acc * x as u128 % p as u128)
}

pub fn cubic_at(c: &[u64; 10], x: u64, y: u64, z: u64, p: u64) -> u64 {
    let mut s = 0u128;
    for (e, &a) in MONOS.iter().zip(c) {
        s += a as u128 * pw(x, e[0], p) % p as u128 * pw(y, e[1], p) % p as u128 * pw(z, e[2], p);
        s %= p as u128;
    }
    s as u64
}

/// Projective points counted chart by chart: the affine plane `z = 1`, the
/// finite points `(x : 1 : 0)` of the line at infinity, and `(1 : 0 : 0)`.
pub fn affine_chart_count(c: &[u64; 10], p: u64) -> u64 {
    let mut n = 0;
    for x in 0..p {
        for y in 0..p {
            if cubic_at(c, x, y, 1, p) == 0 {
                n += 1;
            }
        }
        if cubic_at(c, x, 1, 0, p) == 0 {
            n += 1;
        }
    }
    if cubic_at(c, 1, 0, 0, p) == 0 {
        n += 1;
    }
    n
}

/// Partial derivatives by formal differentiation of each monomial.
pub fn gradient(c: &[u64; 10], pt: [u64; 3], p: u64) -> [u64; 3] {
    let mut g = [0u128; 3];
    for (e, &a) in MONOS.iter().zip(c) {
        for i in 0..3 {
            if e[i] == 0 {
                continue;
            }
            let mut d = e.to_owned();
            d[i] -= 1;
            let term = a as u128 * e[i] as u128 % p as u128 * pw(pt[0], d[0], p) % p as u128 * pw(pt[1], d[1], p)
                % p as u128
                * pw(pt[2], d[2], p);
            g[i] = (g[i] + term) % p as u128;
        }
    }
    [g[0] as u64, g[1] as u64, g[2] as u64]
}

/// True when the cubic has no singular point over F_p.
pub fn nonsingular_over_fp(c: &[u64; 10], p: u64) -> bool {
    let pts = (0..p)
        .flat_map(|x| (0..p).map(move |y| [x, y, 1]))
        .chain((0..p).map(|x| [x, 1, 0]))
        .chain(std::iter::once([1, 0, 0]));
    for pt in pts {
        if cubic_at(c, pt[0], pt[1], pt[2], p) == 0 && gradient(c, pt, p) == [0, 0, 0] {
            return false;
        }
    }
    true
}

/// The six Beauville surfaces and the Γ₁(6) pencil in ABG form.
pub fn catalogued_families() -> Vec<FibrationSpec> {
    let mut v: Vec<FibrationSpec> = BeauvilleLabel::ALL.iter().map(|&l| FibrationSpec::beauville(l)).collect();
    v.push("abg(1,1,1)".parse().unwrap());
    v
}

/// `ABG(1, a, a)` members that occur in the tables.
pub fn abg_members() -> Vec<FibrationSpec> {
    ["-1/8", "1/2", "1/9", "4", "9/4", "1/64", "289", "25/16", "49/81", "1/16", "-3", "9", "121/125"]
        .iter()
        .map(|a| format!("abg(1,{a},{a})").parse().unwrap())
        .collect()
}

/// `δ = d − 5 + #S + #S′ − #S″` with the loci recomputed from the fibres.
pub fn delta_oracle(spec: &ProductSpec, d: i64) -> i64 {
    let s: BTreeSet<ProjPoint> = singular_locus(&spec.left).unwrap().into_iter().map(|f| f.location).collect();
    let s1: BTreeSet<ProjPoint> = singular_locus(&spec.right).unwrap().into_iter().map(|f| f.location).collect();
    d - 5 + s.len() as i64 + s1.len() as i64 - s.intersection(&s1).count() as i64
}

/// Schoen's formula from the two singular loci: `1 + ρ − #S″ + Σ_{S̃}(m − 1)`.
pub fn schoen_oracle(spec: &ProductSpec, pic_rank: i64) -> i64 {
    let l = singular_locus(&spec.left).unwrap();
    let r = singular_locus(&spec.right).unwrap();
    let common = l.iter().filter(|f| r.iter().any(|g| g.location == f.location)).count() as i64;
    let only = |a: &[cymod_core::SingularFibre], b: &[cymod_core::SingularFibre]| -> i64 {
        a.iter().filter(|f| !b.iter().any(|g| g.location == f.location)).map(|f| f.m as i64 - 1).sum()
    };
    1 + pic_rank - common + only(&l, &r) + only(&r, &l)
}

pub fn report_consistent(r: &DefectReport) -> bool {
    r.dim_u == 2 * r.delta + 2 && schoen_oracle(&r.product, r.pic_rank) == r.h12
}

fn rat_mod(q: &cymod_core::Rational, p: u64) -> Option<u64> {
    use num_bigint::BigInt;
    let m = |x: &BigInt| {
        let r = x % BigInt::from(p);
        u64::try_from(if r < BigInt::from(0) { r + BigInt::from(p) } else { r }).unwrap()
    };
    let (n, d) = (m(q.numer()), m(q.denom()));
    let inv = (1..p).find(|&x| (x as u128 * d as u128) % p as u128 == 1)?;
    Some((n as u128 * inv as u128 % p as u128) as u64)
}

/// Every point of P¹(F_p) that a location in `Q` or `Q(√d)` reduces to,
/// with square roots found by search.
pub fn reductions(t: &ProjPoint, p: u64) -> Vec<cymod_core::catalog::FpPoint> {
    use cymod_core::catalog::FpPoint;
    let Some(x) = t.value() else { return vec![FpPoint::Inf] };
    let (a, b) = x.parts();
    let (Some(a), Some(b)) = (rat_mod(&a, p), rat_mod(&b, p)) else { return vec![FpPoint::Inf] };
    let Some(d) = x.field() else { return vec![FpPoint::Fin(a)] };
    let d = rat_mod(&cymod_core::projq::rat(d, 1), p).unwrap();
    (0..p)
        .filter(|&s| (s as u128 * s as u128) % p as u128 == d as u128)
        .map(|s| FpPoint::Fin(((a as u128 + b as u128 * s as u128) % p as u128) as u64))
        .collect()
}
