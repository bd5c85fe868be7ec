use proptest::prelude::*;
use rldc_core::bounds::{
    bound_imperfect, bound_ldc_amplify, bound_perfect, bound_tq, radius_range_perfect, BoundParams, Enclosure,
};
use rldc_core::rational::{rat, Rational};
use rldc_core::Error;

fn params(q: usize, delta: Rational, s: Rational, r: Rational) -> BoundParams {
    BoundParams::new(q, 2, delta, s, r)
}

#[test]
fn imperfect_with_zero_deficit_is_perfect() {
    for (s, r) in [(rat(1, 100), rat(1, 100)), (rat(0, 1), rat(1, 50)), (rat(1, 20), rat(0, 1))] {
        let p = params(3, rat(3, 10), s, r);
        let a = bound_perfect(&p).unwrap();
        let b = bound_imperfect(&p.clone().with_eps(rat(0, 1))).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn soundness_at_the_threshold_is_rejected() {
    assert!(matches!(
        radius_range_perfect(2, 2, &rat(1, 2), &rat(1, 4)),
        Err(Error::SoundnessTooLarge { .. })
    ));
}

#[test]
fn tq_reference_row() {
    let p = params(3, rat(3, 10), rat(1, 100), rat(1, 100)).with_t(2);
    let b = bound_tq(&p).unwrap();
    assert!(b.admissible);
    let hi = rldc_core::rational::to_f64(b.rho_t.unwrap().hi());
    assert!((hi - 0.426034).abs() < 1e-6);
}

#[test]
fn sqrt_enclosures_contain_the_root() {
    for (num, den) in [(2i64, 1i64), (1, 3), (49, 100), (7, 11)] {
        let x = rat(num, den);
        let e = Enclosure::sqrt(&x).unwrap();
        assert!(e.lo() * e.lo() <= x && x <= e.hi() * e.hi());
        assert!(e.width() <= rat(1, 1 << 62));
    }
}

fn small() -> impl Strategy<Value = Rational> {
    (0i64..=20).prop_map(|k| rat(k, 1000))
}

proptest! {
    #[test]
    fn derived_bounds_are_monotone(
        q in 1usize..=4,
        d in 1i64..=10,
        s in small(), ds in small(),
        r in small(), dr in small(),
        e in small(), de in small(),
    ) {
        let delta = rat(d, 10);
        let p = params(q, delta.clone(), s.clone(), r.clone()).with_eps(e.clone());
        let base = bound_imperfect(&p);
        prop_assume!(base.is_ok());
        let base = base.unwrap().bound;
        let more = |s2: Rational, r2: Rational, e2: Rational, d2: Rational| {
            bound_imperfect(&params(q, d2, s2, r2).with_eps(e2)).map(|b| b.bound)
        };
        if let Ok(b) = more(&s + &ds, r.clone(), e.clone(), delta.clone()) { prop_assert!(b >= base); }
        prop_assert!(more(s.clone(), &r + &dr, e.clone(), delta.clone()).unwrap() >= base);
        prop_assert!(more(s.clone(), r.clone(), &e + &de, delta.clone()).unwrap() >= base);
        if d < 10 {
            prop_assert!(more(s.clone(), r.clone(), e.clone(), rat(d + 1, 10)).unwrap() <= base);
        }
    }

    #[test]
    fn tq_rho_is_monotone_where_admissible(
        q in 1usize..=3,
        d in 1i64..=10,
        s in small(), ds in small(),
        r in small(), dr in small(),
        t in 1usize..=4,
    ) {
        let delta = rat(d, 10);
        let at = |s: Rational, r: Rational, delta: Rational| bound_tq(&params(q, delta, s, r).with_t(t)).unwrap();
        let base = at(s.clone(), r.clone(), delta.clone());
        prop_assume!(base.admissible);
        let lo = base.rho_t.unwrap().lo().clone();
        for other in [
            at(&s + &ds, r.clone(), delta.clone()),
            at(s.clone(), &r + &dr, delta.clone()),
        ] {
            if other.admissible {
                prop_assert!(other.rho_t.unwrap().hi() >= &lo);
            }
        }
    }

    #[test]
    fn ldc_amplification_is_monotone_in_s(a in 0i64..=50, b in 0i64..=50, t in 1usize..=5) {
        let (lo, hi) = (a.min(b), a.max(b));
        let x = bound_ldc_amplify(&rat(lo, 100), t).unwrap();
        let y = bound_ldc_amplify(&rat(hi, 100), t).unwrap();
        prop_assert!(x.lo() <= y.hi());
    }
}
