use cymod_core::projq::{cross_ratio, j_of_lambda, j_of_points, rat, Moebius, Num, ProjPoint, QuadElem};
use num_bigint::BigInt;
use proptest::prelude::*;

fn point() -> impl Strategy<Value = ProjPoint> {
    prop_oneof![
        1 => Just(ProjPoint::infinity()),
        12 => (-60i64..60, 1i64..25).prop_map(|(n, d)| ProjPoint::frac(n, d)),
    ]
}

fn four_distinct() -> impl Strategy<Value = [ProjPoint; 4]> {
    [point(), point(), point(), point()].prop_filter("distinct", |p| {
        (0..4).all(|i| (i + 1..4).all(|j| p[i] != p[j]))
    })
}

fn moebius() -> impl Strategy<Value = Moebius> {
    [-12i64..12, -12i64..12, -12i64..12, -12i64..12]
        .prop_filter("invertible", |e| e[0] * e[3] - e[1] * e[2] != 0)
        .prop_map(|e| Moebius::from_i64(e).unwrap())
}

fn lambda() -> impl Strategy<Value = Num> {
    (-80i64..80, 1i64..40).prop_filter("admissible", |(n, d)| *n != 0 && n != d).prop_map(|(n, d)| Num::frac(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn cross_ratio_is_moebius_invariant(p in four_distinct(), m in moebius()) {
        let before = cross_ratio(&p[0], &p[1], &p[2], &p[3]).unwrap();
        let q: Vec<ProjPoint> = p.iter().map(|x| m.apply(x)).collect();
        prop_assert_eq!(cross_ratio(&q[0], &q[1], &q[2], &q[3]).unwrap(), before);
    }

    #[test]
    fn j_has_the_six_lambda_symmetries(l in lambda()) {
        let one = Num::one();
        let j = j_of_lambda(&l).unwrap();
        let inv = one.try_div(&l).unwrap();
        let images = [
            inv.clone(),
            &one - &l,
            l.try_div(&(&l - &one)).unwrap(),
            &one - &inv,
            one.try_div(&(&one - &l)).unwrap(),
        ];
        for x in images {
            prop_assert_eq!(j_of_lambda(&x).unwrap(), j.clone());
        }
    }

    #[test]
    fn j_of_points_is_symmetric_in_the_four_points(p in four_distinct(), perm in Just(vec![0usize, 1, 2, 3]).prop_shuffle()) {
        let j = j_of_points(&p[0], &p[1], &p[2], &p[3]).unwrap();
        let q: Vec<&ProjPoint> = perm.iter().map(|&i| &p[i]).collect();
        prop_assert_eq!(j_of_points(q[0], q[1], q[2], q[3]).unwrap(), j);
    }

    #[test]
    fn scaling_entries_keeps_the_map(m in moebius(), k in prop_oneof![-7i64..-1, 2i64..7], t in point()) {
        let e = m.entries();
        let scaled = Moebius::new(&e[0] * k, &e[1] * k, &e[2] * k, &e[3] * k).unwrap();
        prop_assert_eq!(&scaled, &m);
        prop_assert_eq!(scaled.apply(&t), m.apply(&t));
    }

    #[test]
    fn inverse_undoes_apply(m in moebius(), t in point()) {
        prop_assert_eq!(m.invert().apply(&m.apply(&t)), t.clone());
        prop_assert!(m.compose(&m.invert()).is_identity());
    }

    #[test]
    fn quad_arithmetic_matches_floats(a in -30i64..30, b in -30i64..30, c in -30i64..30, e in -30i64..30,
                                      d in prop::sample::select(vec![-3i64, -2, -1, 2, 3, 5, 7])) {
        let x = QuadElem::new(rat(a, 3), rat(b, 2), d).unwrap();
        let y = QuadElem::new(rat(c, 5), rat(e, 1), d).unwrap();
        let f = |q: &QuadElem| q.to_complex();
        let (xr, xi) = f(&x);
        let (yr, yi) = f(&y);
        let (pr, pi) = f(&x.mul(&y).unwrap());
        prop_assert!((pr - (xr * yr - xi * yi)).abs() < 1e-9 && (pi - (xr * yi + xi * yr)).abs() < 1e-9);
        let (sr, si) = f(&x.add(&y).unwrap());
        prop_assert!((sr - (xr + yr)).abs() < 1e-9 && (si - (xi + yi)).abs() < 1e-9);
        if a != 0 || b != 0 {
            let (ir, ii) = f(&x.inv().unwrap());
            let n = xr * xr + xi * xi;
            prop_assert!((ir - xr / n).abs() < 1e-9 && (ii + xi / n).abs() < 1e-9);
        }
    }
}

#[test]
fn cross_ratio_of_standard_points() {
    let p = |s: &str| s.parse::<ProjPoint>().unwrap();
    // With a = ∞ the definition reduces to (b − d)/(b − c) = (0 − 9)/(0 − 1).
    assert_eq!(cross_ratio(&p("oo"), &p("0"), &p("1"), &p("9")).unwrap(), Num::int(9));
    assert_eq!(cross_ratio(&p("2"), &p("3"), &p("5"), &p("7")).unwrap(), Num::frac(6, 5));
    assert!(cross_ratio(&p("0"), &p("0"), &p("1"), &p("9")).is_err());
    assert_eq!(Moebius::new(BigInt::from(2), BigInt::from(0), BigInt::from(0), BigInt::from(2)).unwrap(), Moebius::identity());
}
