use proptest::prelude::*;

use mmtr_core::exact::rational::rat;
use mmtr_core::exact::{BigRational, LaurentMulti, PowerSeries, SPoly, Scalar};
use mmtr_core::virasoro::CorrelatorTable;

fn small_rat() -> impl Strategy<Value = BigRational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

fn spoly(max_len: usize) -> impl Strategy<Value = SPoly> {
    prop::collection::vec(small_rat(), 1..=max_len).prop_map(|cs| SPoly::from_dense(&cs))
}

fn scalar() -> impl Strategy<Value = Scalar> {
    (spoly(3), spoly(3))
        .prop_filter("nonzero denominator", |(_, d)| !d.is_zero())
        .prop_map(|(n, d)| Scalar::from_parts(n, d).unwrap())
}

fn laurent2() -> impl Strategy<Value = LaurentMulti> {
    prop::collection::vec(((-2i32..=2, -2i32..=2), -5i64..=5), 0..5).prop_map(|ts| {
        LaurentMulti::from_terms(
            2,
            ts.into_iter()
                .map(|((a, b), c)| (vec![a, b], Scalar::from_int(c))),
        )
    })
}

fn series(len: usize) -> impl Strategy<Value = PowerSeries> {
    prop::collection::vec(small_rat(), len).prop_map(|cs| PowerSeries::from_rationals(&cs))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scalar_ring_axioms(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn scalar_canonical_form_is_stable(n in spoly(4), d in spoly(3), k in spoly(2)) {
        prop_assume!(!d.is_zero() && !k.is_zero());
        let a = Scalar::from_parts(n.clone(), d.clone()).unwrap();
        let again = Scalar::from_parts(a.numer().clone(), a.denom().clone()).unwrap();
        prop_assert_eq!(&again, &a);
        let scaled = Scalar::from_parts(n.mul(&k), d.mul(&k)).unwrap();
        prop_assert_eq!(&scaled, &a);
        prop_assert_eq!(a.denom().leading_coeff().cloned(), Some(rat(1, 1)));
    }

    #[test]
    fn laurent_exact_quotient_round_trip(a in laurent2(), b in laurent2()) {
        prop_assume!(!b.is_zero());
        let p = &a * &b;
        prop_assert_eq!(p.exact_quotient(&b).unwrap(), a);
    }

    #[test]
    fn laurent_ring_axioms(a in laurent2(), b in laurent2(), c in laurent2()) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        let d = &(&a * &b).derivative(0) - &(&(&a.derivative(0) * &b) + &(&a * &b.derivative(0)));
        prop_assert!(d.is_zero());
    }

    #[test]
    fn series_cauchy_product(f in series(6), g in series(6)) {
        let h = f.mul(&g);
        for k in 0..6 {
            let mut want = Scalar::zero();
            for i in 0..=k {
                want = &want + &(&f.coeff(i) * &g.coeff(k - i));
            }
            prop_assert_eq!(h.coeff(k), want);
        }
        prop_assert_eq!(h, g.mul(&f));
    }

    #[test]
    fn series_log_exp_inverse(f in series(6)) {
        let mut f = f;
        f.coeffs[0] = Scalar::zero();
        let e = f.exp().unwrap();
        prop_assert_eq!(e.log().unwrap(), f);
    }
}

fn key() -> impl Strategy<Value = (usize, Vec<u32>)> {
    (0usize..=2, prop::collection::vec(1u32..=3, 1..=3))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn pivot_independence((g, a) in key()) {
        let t = CorrelatorTable::new();
        let want = t.correlator(g, &a).unwrap();
        for idx in 0..a.len() {
            prop_assert_eq!(t.evaluate_with_pivot(g, &a, idx).unwrap(), want.clone());
        }
    }

    #[test]
    fn correlators_are_homogeneous((g, a) in key()) {
        let t = CorrelatorTable::new();
        let v = t.correlator(g, &a).unwrap();
        if !v.is_zero() {
            let deg = a.iter().sum::<u32>() as i32 + 2 - 2 * g as i32 - a.len() as i32;
            let (e, _) = v.as_monomial().expect("single power of t");
            prop_assert_eq!(e, deg);
        }
    }

    #[test]
    fn correlators_are_symmetric((g, a) in key()) {
        let t = CorrelatorTable::new();
        let mut r = a.clone();
        r.reverse();
        prop_assert_eq!(t.correlator(g, &a).unwrap(), t.correlator(g, &r).unwrap());
    }
}
