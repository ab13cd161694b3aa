mod common;

use std::collections::BTreeSet;

use common::oracles::{abg_members, affine_chart_count, catalogued_families};
use cymod_core::arith::primes_up_to;
use cymod_core::catalog::{reduce_pencil, singular_locus, FpPoint};
use cymod_core::frobenius::{count_cubic, extract_apu, ledger, side_data, FibreKind, Ledger, TraceCache};
use cymod_core::ProductSpec;
use num_bigint::BigInt;
use num_traits::Signed;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn euler_criterion(d: &BigInt, p: u64) -> i64 {
    let r = (d % BigInt::from(p) + BigInt::from(p)) % BigInt::from(p);
    if r == BigInt::from(0) {
        return 0;
    }
    let e = r.modpow(&BigInt::from((p - 1) / 2), &BigInt::from(p));
    if e == BigInt::from(1) {
        1
    } else {
        -1
    }
}

#[test]
fn count_cubic_matches_affine_charts() {
    let fams: Vec<_> = catalogued_families().into_iter().chain(abg_members()).collect();
    let primes = primes_up_to(60).into_iter().filter(|&p| p >= 5).collect::<Vec<_>>();
    let mut rng = StdRng::seed_from_u64(7);
    let mut checked = 0;
    while checked < 60 {
        let f = &fams[rng.gen_range(0..fams.len())];
        let p = primes[rng.gen_range(0..primes.len())];
        let Ok(side) = side_data(f, p) else { continue };
        let t = FpPoint::Fin(rng.gen_range(0..p));
        if side.at(t).kind != FibreKind::Smooth {
            continue;
        }
        let c = reduce_pencil(f, p).unwrap().cubic(t);
        let n = count_cubic(&c, p);
        assert_eq!(n, affine_chart_count(&c, p), "{f} t = {t} p = {p}");
        assert_eq!(side.at(t).a_t, p as i64 + 1 - n as i64);
        checked += 1;
    }
}

#[test]
fn smooth_local_traces_satisfy_hasse() {
    for f in catalogued_families() {
        for p in primes_up_to(60) {
            let Ok(side) = side_data(&f, p) else { continue };
            for lt in &side.fibres {
                if lt.kind == FibreKind::Smooth {
                    assert!(lt.a_t * lt.a_t <= 4 * p as i64, "{f} p = {p} t = {}", lt.t);
                    assert_eq!(lt.fibre_count, p as i64 + 1 - lt.a_t);
                } else {
                    assert!(lt.a_t == 1 || lt.a_t == -1);
                }
            }
        }
    }
}

#[test]
fn split_signs_follow_the_quadratic_character() {
    let mut nonsquare_seen = 0;
    for f in catalogued_families() {
        for fibre in singular_locus(&f).unwrap() {
            let Some(d) = fibre.split_disc.clone() else { continue };
            let mut signs = BTreeSet::new();
            for p in primes_up_to(100).into_iter().skip(1) {
                let Ok(side) = side_data(&f, p) else { continue };
                let tp = FpPoint::reduce(&fibre.location, p).unwrap();
                let lt = side.at(tp);
                if lt.kind != FibreKind::Multiplicative {
                    continue;
                }
                assert_eq!(lt.a_t, euler_criterion(&d, p), "{f} at {} p = {p}", fibre.location);
                signs.insert(lt.a_t);
            }
            let square = !d.is_negative() && d.sqrt() * d.sqrt() == d;
            if !square {
                nonsquare_seen += 1;
                assert_eq!(signs.len(), 2, "{f} at {}", fibre.location);
            }
        }
    }
    assert!(nonsquare_seen > 0);
}

fn table_products() -> Vec<ProductSpec> {
    [
        "abg(1,-1/8,-1/8) x abg(1,-1/8,-1/8)@[[-1,1],[0,1]]",
        "abg(1,9/4,9/4) x abg(1,9/4,9/4)@[[0,16],[1,0]]",
        "abg(1,25/16,25/16) x beauville(gamma1_6)@[[0,45],[4,-4]]",
        "beauville(gamma1_6) x beauville(gamma1_6)@[[-1,9],[0,1]]",
        "beauville(gamma0_8_1_4) x beauville(gamma0_8_1_4)@[[1,-1],[1,1]] iso",
    ]
    .iter()
    .map(|s| s.parse().unwrap())
    .collect()
}

#[test]
fn ledger_records_are_consistent() {
    for spec in table_products() {
        let l = ledger(&spec, &primes_up_to(60)).unwrap();
        assert!(l.records.len() + l.skipped.len() == primes_up_to(60).len());
        for r in &l.records {
            let p = r.p as i64;
            assert_eq!(r.what_count, r.w_count + p * r.node_count);
            assert!((r.apu as i128).pow(2) <= 4 * (p as i128).pow(3), "{spec} p = {p}");
            assert_eq!(r.apu, 1 + p.pow(3) + (p + p * p) * r.t2 - r.what_count - p * r.correction);
            // T2 is the trace on divisor classes: at most h11, equal when all are rational.
            assert!(r.t2.abs() <= r.h11);
            if r.h12 == 0 {
                assert_eq!(r.correction, 0);
                if r.t2 == r.h11 {
                    assert_eq!(r.apu, 1 + p.pow(3) + (p + p * p) * r.h11 - r.what_count);
                }
            }
        }
        assert_eq!(Ledger::parse(&l.render()).unwrap(), l);
    }
}

#[test]
fn quoted_level_32_values() {
    let spec = &table_products()[0];
    let l = ledger(spec, &[3, 5, 7, 11]).unwrap();
    assert_eq!(l.traces().into_iter().collect::<Vec<_>>(), vec![(5, -10), (7, -16), (11, 40)]);
    assert_eq!(l.skipped.iter().map(|s| s.0).collect::<Vec<_>>(), vec![3]);
}

#[test]
fn extraction_is_deterministic_and_order_free() {
    let spec = &table_products()[3];
    let fwd = ledger(spec, &[11, 13, 17, 19]).unwrap();
    let back = ledger(spec, &[19, 17, 13, 11]).unwrap();
    let mut rev = back.records.clone();
    rev.reverse();
    assert_eq!(fwd.records, rev);
    assert_eq!(extract_apu(spec, 13).unwrap(), extract_apu(spec, 13).unwrap());
}

#[test]
fn nonzero_defect_is_refused() {
    let spec: ProductSpec = "beauville(gamma1_6) x beauville(gamma3)".parse().unwrap();
    let e = extract_apu(&spec, 11).unwrap_err();
    assert!(!e.is_bad_prime());
}

#[test]
fn cache_round_trip() {
    let dir = std::env::temp_dir().join(format!("cymod-core-cache-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("c.tsv");
    let spec = &table_products()[4];
    let mut c = TraceCache::default();
    for p in [5, 7, 11] {
        c.insert(spec, extract_apu(spec, p).unwrap());
    }
    c.save(&path).unwrap();
    let back = TraceCache::load(&path).unwrap();
    assert_eq!(back.len(), 3);
    assert_eq!(back.get(spec, 7), Some(&extract_apu(spec, 7).unwrap()));
    std::fs::remove_dir_all(&dir).unwrap();
}
