mod common;

use proptest::prelude::*;
use rldc_core::bounds::bound_ldc_amplify;
use rldc_core::codes::enumerate_ball;
use rldc_core::decoder::{LocalDecoder, Target};
use rldc_core::fixtures::load_fixture;
use rldc_core::rational::{self, rat};
use rldc_core::transform::{
    amplify_ldc_majority, amplify_rldc_repeat, derive_ldc_decoder, heavy_light_split, query_probability,
    tq_decoder, TiePolicy, DEFAULT_ENTRY_BUDGET,
};
use rldc_core::verify::{measure_completeness, Mode};
use rldc_core::Error;

use common::{all_fixtures, canonical_fixtures, deltas, exact};

#[test]
fn split_matches_query_probabilities() {
    for f in all_fixtures() {
        for delta in deltas(&f) {
            for t in f.decoder.targets() {
                let split = heavy_light_split(&f.decoder, t, &delta).unwrap();
                for j in 1..=f.code.n() {
                    let p = query_probability(&f.decoder, t, j).unwrap();
                    assert_eq!(p, split.probabilities[j - 1]);
                    assert_eq!(split.is_heavy(j), p > split.threshold());
                }
            }
        }
    }
}

#[test]
fn documented_heavy_sets() {
    let f = load_fixture("pinned8").unwrap();
    let split = heavy_light_split(&f.decoder, Target::Message(1), &rat(1, 2)).unwrap();
    assert_eq!(split.heavy, vec![1]);
    assert_eq!(split.light, (2..=8).collect::<Vec<_>>());
    let rep3 = load_fixture("rep3").unwrap();
    let split = heavy_light_split(&rep3.decoder, Target::Message(1), &rat(1, 3)).unwrap();
    assert!(split.heavy.is_empty());
    assert!(matches!(
        heavy_light_split(&rep3.decoder, Target::Message(1), &rat(0, 1)),
        Err(Error::DeltaOutOfRange(_))
    ));
}

#[test]
fn derived_decoders_never_read_heavy_coordinates() {
    for f in canonical_fixtures() {
        for delta in deltas(&f) {
            let derived = derive_ldc_decoder(&f.code, &f.decoder, &delta).unwrap();
            for t in derived.targets() {
                let split = heavy_light_split(&f.decoder, t, &delta).unwrap();
                for c in f.code.codewords() {
                    for (y, _) in enumerate_ball(c, 1, f.code.sigma()).unwrap() {
                        let (law, touched) = derived.evaluate_traced(t, &y).unwrap();
                        assert_eq!(law.total(), rational::one());
                        assert!(touched.iter().all(|j| !split.is_heavy(*j)), "{} read {touched:?}", f.name);
                    }
                }
            }
        }
    }
}

#[test]
fn derived_rep3_example() {
    let f = load_fixture("rep3").unwrap();
    let d = derive_ldc_decoder(&f.code, &f.decoder, &rat(1, 3)).unwrap();
    assert_eq!(measure_completeness(&f.code, &d).unwrap(), rational::one());
    assert_eq!(exact(&f.code, &d, Mode::Ldc, 0), rat(0, 1));
    assert_eq!(exact(&f.code, &d, Mode::Ldc, 1), rat(1, 3));
}

#[test]
fn derive_rejects_non_canonical_input() {
    let f = load_fixture("rep3-imperfect").unwrap();
    assert!(matches!(derive_ldc_decoder(&f.code, &f.decoder, &rat(1, 3)), Err(Error::NotCanonical(_))));
    let rep3 = load_fixture("rep3").unwrap();
    assert!(matches!(
        tq_decoder(&rep3.code, &rep3.decoder, &rat(1, 3), 0, TiePolicy::Uniform),
        Err(Error::BadT(0))
    ));
}

#[test]
fn tq_rep3_errors_fall_with_t() {
    let f = load_fixture("rep3").unwrap();
    let mut prev = rational::one();
    for (t, want) in [(1, rat(1, 3)), (2, rat(2, 9))] {
        let d = tq_decoder(&f.code, &f.decoder, &rat(1, 3), t, TiePolicy::Uniform).unwrap();
        assert_eq!(d.queries(), 2 * t);
        let e = exact(&f.code, &d, Mode::Ldc, 1);
        assert_eq!(e, want);
        assert!(e <= prev);
        prev = e;
    }
}

#[test]
fn lex_ties_favour_the_smaller_symbol() {
    let f = load_fixture("rep3").unwrap();
    let d = tq_decoder(&f.code, &f.decoder, &rat(1, 3), 2, TiePolicy::Lex).unwrap();
    let y = f.code.parse_word("100").unwrap();
    let law = d.output_distribution(Target::Message(1), &y).unwrap();
    assert_eq!(law.total(), rational::one());
    let uniform = tq_decoder(&f.code, &f.decoder, &rat(1, 3), 2, TiePolicy::Uniform).unwrap();
    let u = uniform.output_distribution(Target::Message(1), &y).unwrap();
    let zero = rldc_core::decoder::Output::Sym(rldc_core::codes::Symbol(0));
    assert!(law.get(zero) >= u.get(zero));
}

#[test]
fn repeat_amplification_keeps_perfect_completeness() {
    for f in all_fixtures() {
        let c1 = measure_completeness(&f.code, &f.decoder).unwrap();
        for t in 1..=3 {
            let amp = amplify_rldc_repeat(&f.code, &f.decoder, t, DEFAULT_ENTRY_BUDGET).unwrap();
            assert_eq!(amp.q(), t * f.decoder.q());
            let ct = measure_completeness(&f.code, &amp).unwrap();
            if c1 == rational::one() {
                assert_eq!(ct, rational::one(), "{}", f.name);
            }
            assert!(ct <= c1, "{}", f.name);
        }
    }
}

#[test]
fn majority_amplification_of_had4() {
    let f = load_fixture("had4").unwrap();
    let s1 = exact(&f.code, &f.decoder, Mode::Ldc, 1);
    assert_eq!(s1, rat(1, 2));
    for t in 1..=3 {
        let amp = amplify_ldc_majority(&f.code, &f.decoder, t, TiePolicy::Uniform, DEFAULT_ENTRY_BUDGET).unwrap();
        let st = exact(&f.code, &amp, Mode::Ldc, 1);
        let bound = bound_ldc_amplify(&s1, t).unwrap();
        assert!(&st <= bound.hi(), "t={t}: {st}");
        assert_eq!(measure_completeness(&f.code, &amp).unwrap(), rational::one());
    }
    let rep3 = load_fixture("rep3").unwrap();
    assert!(matches!(
        amplify_ldc_majority(&rep3.code, &rep3.decoder, 3, TiePolicy::Uniform, DEFAULT_ENTRY_BUDGET),
        Err(Error::HasBotOutputs { .. })
    ));
    assert!(matches!(
        amplify_rldc_repeat(&rep3.code, &rep3.decoder, 3, 4),
        Err(Error::EntryExplosion { .. })
    ));
}

proptest! {
    #[test]
    fn heavy_set_is_small(num in 1i64..=40, den in 1i64..=40, which in 0usize..6) {
        prop_assume!(num <= den);
        let f = &all_fixtures()[which];
        let delta = rat(num, den);
        for t in f.decoder.targets() {
            let split = heavy_light_split(&f.decoder, t, &delta).unwrap();
            let h = rat(split.heavy.len() as i64, 1);
            let dn = &delta * rat(f.code.n() as i64, 1);
            prop_assert!(h <= dn);
            prop_assert_eq!(split.heavy.len() + split.light.len(), f.code.n());
        }
    }

    #[test]
    fn tq_laws_have_unit_mass(t in 1usize..=4, which in 0usize..5, word in any::<u32>(), lex in any::<bool>()) {
        let f = &canonical_fixtures()[which];
        let tie = if lex { TiePolicy::Lex } else { TiePolicy::Uniform };
        let d = tq_decoder(&f.code, &f.decoder, &f.bound_delta, t, tie).unwrap();
        let n = f.code.n();
        let y = rldc_core::codes::Word::new(
            f.code.alphabet(),
            rldc_core::codes::view_from_rank(word as usize % (1 << n), n, 2),
        )
        .unwrap();
        for target in d.targets() {
            prop_assert_eq!(d.output_distribution(target, &y).unwrap().total(), rational::one());
        }
    }
}
