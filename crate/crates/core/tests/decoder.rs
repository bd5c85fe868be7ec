mod common;

use std::collections::BTreeMap;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rldc_core::codes::{enumerate_ball, Alphabet, Code, Symbol, Word};
use rldc_core::decoder::{canonicalize, is_canonical, Decoder, LocalDecoder, Output, RuleEntry, TargetFamily};
use rldc_core::fixtures::load_fixture;
use rldc_core::rational::{self, rat, Rational};
use rldc_core::verify::measure_completeness;

use common::{all_fixtures, relaxed_soundness};

/// Standard deviations allowed between a sampled frequency and its exact mass.
const MC_SIGMAS: f64 = 5.0;
const MC_SAMPLES: u32 = 10_000;

#[test]
fn output_masses_sum_to_one_near_codewords() {
    for f in all_fixtures() {
        for c in f.code.codewords() {
            for (y, _) in enumerate_ball(c, 2.min(f.code.n()), f.code.sigma()).unwrap() {
                for t in f.decoder.targets() {
                    assert_eq!(f.decoder.output_distribution(t, &y).unwrap().total(), rational::one(), "{}", f.name);
                }
            }
        }
    }
}

#[test]
fn canonicalize_is_idempotent_on_fixtures() {
    for f in all_fixtures() {
        let (once, diags) = canonicalize(&f.code, &f.decoder).unwrap();
        assert!(diags.is_empty(), "{}", f.name);
        assert!(is_canonical(&f.code, &once).unwrap());
        let (twice, _) = canonicalize(&f.code, &once).unwrap();
        assert_eq!(once, twice, "{}", f.name);
    }
}

#[test]
fn canonicalization_keeps_completeness_and_never_hurts_soundness() {
    for f in all_fixtures() {
        if measure_completeness(&f.code, &f.decoder).unwrap() != rational::one() {
            continue;
        }
        let (canon, _) = canonicalize(&f.code, &f.decoder).unwrap();
        assert_eq!(measure_completeness(&f.code, &canon).unwrap(), rational::one(), "{}", f.name);
        for r in 0..=f.code.n().min(3) {
            assert!(
                relaxed_soundness(&f.code, &canon, r) <= relaxed_soundness(&f.code, &f.decoder, r),
                "{} radius {r}",
                f.name
            );
        }
    }
}

#[test]
fn sampled_frequencies_converge_to_exact_masses() {
    let f = load_fixture("pinned8").unwrap();
    let y = f.code.parse_word("11000000").unwrap();
    let t = f.decoder.targets()[0];
    let law = f.decoder.output_distribution(t, &y).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut counts: BTreeMap<Output, u32> = BTreeMap::new();
    for _ in 0..MC_SAMPLES {
        *counts.entry(f.decoder.sample(t, &y, &mut rng).unwrap()).or_default() += 1;
    }
    for (out, p) in law.entries() {
        let p = rational::to_f64(p);
        let freq = f64::from(*counts.get(&out).unwrap_or(&0)) / f64::from(MC_SAMPLES);
        let sd = (p * (1.0 - p) / f64::from(MC_SAMPLES)).sqrt();
        assert!((freq - p).abs() <= MC_SIGMAS * sd + 1e-12, "{out:?}: {freq} vs {p}");
    }
}

fn rep4() -> Code {
    let a = Alphabet::binary();
    let words = ["0000", "1111"].iter().map(|w| Word::parse(&a, w, 4).unwrap()).collect();
    Code::from_codewords(a, 1, 4, words).unwrap()
}

/// (weights, queries as pairs of distinct coordinates, table cells in 0..=2 where 2 is ⊥)
fn decoder_strategy() -> impl Strategy<Value = Vec<(u32, (usize, usize), Vec<u8>)>> {
    let entry = (1u32..5, (1usize..=4, 1usize..=4), proptest::collection::vec(0u8..3, 4));
    proptest::collection::vec(entry, 1..4)
}

fn build(raw: &[(u32, (usize, usize), Vec<u8>)], code: &Code) -> Option<Decoder> {
    let total: u32 = raw.iter().map(|e| e.0).sum();
    let mut entries = Vec::new();
    for (w, (a, b), cells) in raw {
        if a == b {
            return None;
        }
        let table = cells
            .iter()
            .map(|&c| if c == 2 { Output::Bot } else { Output::Sym(Symbol(c)) })
            .collect();
        entries.push(RuleEntry {
            weight: rat(*w as i64, total as i64),
            query: vec![*a.min(b), *a.max(b)],
            table,
        });
    }
    Decoder::new(code, 2, TargetFamily::Message, BTreeMap::from([(1, entries)])).ok()
}

proptest! {
    #[test]
    fn random_decoders_have_unit_mass(raw in decoder_strategy(), y in 0usize..16) {
        let code = rep4();
        let Some(dec) = build(&raw, &code) else { return Ok(()) };
        let word = Word::new(code.alphabet(), rldc_core::codes::view_from_rank(y, 4, 2)).unwrap();
        let d = dec.output_distribution(dec.targets()[0], &word).unwrap();
        prop_assert_eq!(d.total(), rational::one());
        prop_assert!(d.entries().all(|(_, p)| p >= &Rational::from_integer(0.into())));
    }

    #[test]
    fn canonicalize_is_idempotent_on_random_tables(raw in decoder_strategy()) {
        let code = rep4();
        let Some(dec) = build(&raw, &code) else { return Ok(()) };
        let (once, diags) = canonicalize(&code, &dec).unwrap();
        prop_assert!(diags.is_empty());
        let (twice, _) = canonicalize(&code, &once).unwrap();
        prop_assert_eq!(once.rules(), twice.rules());
        if measure_completeness(&code, &dec).unwrap() != rational::one() {
            return Ok(());
        }
        for r in 0..=2 {
            prop_assert!(relaxed_soundness(&code, &once, r) <= relaxed_soundness(&code, &dec, r));
        }
    }
}
