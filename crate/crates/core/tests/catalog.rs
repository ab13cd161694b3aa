mod common;

use std::collections::BTreeMap;

use common::oracles::{abg_members, catalogued_families, nonsingular_over_fp, reductions};
use cymod_core::catalog::{discriminant_profile, fibre_cubic, parse_catalogue, reduce_pencil, singular_locus, FpPoint};
use cymod_core::{BeauvilleLabel, FibrationSpec, Moebius, ProjPoint};
use proptest::prelude::*;

fn locus(spec: &FibrationSpec) -> BTreeMap<String, u32> {
    singular_locus(spec).unwrap().into_iter().map(|f| (f.location.to_string(), f.m)).collect()
}

fn expect(pairs: &[(&str, u32)]) -> BTreeMap<String, u32> {
    pairs.iter().map(|(t, m)| (t.parse::<ProjPoint>().unwrap().to_string(), *m)).collect()
}

#[test]
fn beauville_loci_match_the_table() {
    use BeauvilleLabel::*;
    let rows: [(BeauvilleLabel, &[(&str, u32)]); 6] = [
        (Gamma3, &[("oo", 3), ("1", 3), ("(-1/2+1/2*sqrt(-3))", 3), ("(-1/2-1/2*sqrt(-3))", 3)]),
        (Gamma1_4_2, &[("oo", 4), ("0", 4), ("1", 2), ("-1", 2)]),
        (Gamma1_5, &[("oo", 5), ("0", 5), ("(-11/2+5/2*sqrt(5))", 1), ("(-11/2-5/2*sqrt(5))", 1)]),
        (Gamma1_6, &[("oo", 6), ("0", 2), ("1", 3), ("9", 1)]),
        (Gamma0_8_1_4, &[("oo", 8), ("0", 2), ("1", 1), ("-1", 1)]),
        (Gamma0_9_1_3, &[("oo", 9), ("1", 1), ("(-1/2+1/2*sqrt(-3))", 1), ("(-1/2-1/2*sqrt(-3))", 1)]),
    ];
    for (l, want) in rows {
        assert_eq!(locus(&FibrationSpec::beauville(l)), expect(want), "{}", l.label());
    }
}

#[test]
fn abg_loci() {
    assert_eq!(locus(&"abg(1,1,1)".parse().unwrap()), expect(&[("oo", 6), ("0", 2), ("1", 3), ("9", 1)]));
    // α = 2: the last two points are (1 ± 4)².
    assert_eq!(locus(&"abg(1,4,4)".parse().unwrap()), expect(&[("oo", 6), ("0", 2), ("1", 2), ("25", 1), ("9", 1)]));
}

#[test]
fn component_counts_sum_to_twelve() {
    for f in catalogued_families().into_iter().chain(abg_members()) {
        let total: u32 = singular_locus(&f).unwrap().iter().map(|x| x.m).sum();
        assert_eq!(total, 12, "{f}");
    }
}

#[test]
fn discriminant_profile_agrees_with_catalogue() {
    for f in catalogued_families().into_iter().chain(abg_members()) {
        let mut a = discriminant_profile(&f).unwrap();
        let mut b: Vec<(ProjPoint, u32)> = singular_locus(&f).unwrap().into_iter().map(|x| (x.location, x.m)).collect();
        a.sort();
        b.sort();
        assert_eq!(a, b, "{f}");
    }
}

#[test]
fn smooth_fibres_reduce_to_nonsingular_cubics() {
    for f in catalogued_families() {
        for p in [7u64, 11, 13] {
            let Ok(pencil) = reduce_pencil(&f, p) else { continue };
            let bad: Vec<FpPoint> =
                singular_locus(&f).unwrap().iter().flat_map(|x| reductions(&x.location, p)).collect();
            for t in FpPoint::all(p).filter(|t| !bad.contains(t)).take(5) {
                assert!(nonsingular_over_fp(&pencil.cubic(t), p), "{f} at t = {t}, p = {p}");
            }
        }
    }
}

#[test]
fn catalogue_file_parses() {
    let cat = parse_catalogue("# extra\nx9 = abg(1,9,9)\nlabel = beauville(gamma1_5)@[[0,1],[1,0]]\n").unwrap();
    assert_eq!(cat.len(), 2);
    assert_eq!(cat[1].1.twist, Moebius::from_i64([0, 1, 1, 0]).unwrap());
    assert!(parse_catalogue("nonsense").is_err());
}

fn moebius() -> impl Strategy<Value = Moebius> {
    [-9i64..9, -9i64..9, -9i64..9, -9i64..9]
        .prop_filter("invertible", |e| e[0] * e[3] - e[1] * e[2] != 0)
        .prop_map(|e| Moebius::from_i64(e).unwrap())
}

fn family() -> impl Strategy<Value = FibrationSpec> {
    prop::sample::select(catalogued_families().into_iter().chain(abg_members()).collect::<Vec<_>>())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn twisted_locus_is_the_preimage(f in family(), m in moebius()) {
        let inv = m.invert();
        let mut want: Vec<(ProjPoint, u32)> =
            singular_locus(&f).unwrap().into_iter().map(|x| (inv.apply(&x.location), x.m)).collect();
        let mut got: Vec<(ProjPoint, u32)> =
            singular_locus(&f.twisted(&m)).unwrap().into_iter().map(|x| (x.location, x.m)).collect();
        want.sort();
        got.sort();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn double_twist_is_the_composite(f in family(), m in moebius(), n in moebius(), t in -20i64..20) {
        let twice = f.twisted(&m).twisted(&n);
        let once = f.twisted(&m.compose(&n));
        prop_assert_eq!(locus(&twice), locus(&once));
        let t = ProjPoint::int(t);
        for p in [11u64, 13] {
            if let (Ok(a), Ok(b)) = (fibre_cubic(&twice, &t, p), fibre_cubic(&once, &t, p)) {
                prop_assert_eq!(a, b);
            }
        }
    }
}
