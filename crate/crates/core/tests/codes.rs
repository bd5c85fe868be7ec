mod common;

use proptest::prelude::*;
use rldc_core::codes::{
    ball_size, code_distance, enumerate_ball, hamming_distance, view_from_rank, view_rank, Alphabet, Code, Symbol,
    Word,
};

use common::all_fixtures;

fn binomial(n: u128, k: u128) -> u128 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn word(a: &Alphabet, v: &[u8]) -> Word {
    Word::new(a, v.iter().map(|&s| Symbol(s)).collect()).unwrap()
}

fn alphabet(sigma: usize) -> Alphabet {
    Alphabet::new("0123".chars().take(sigma).collect()).unwrap()
}

#[test]
fn ball_sizes_match_the_counting_formula() {
    for f in all_fixtures() {
        let (n, sigma) = (f.code.n(), f.code.sigma());
        if n > 12 {
            continue;
        }
        for r in 0..=2 {
            let formula: u128 = (0..=r as u128)
                .map(|j| binomial(n as u128, j) * (sigma as u128 - 1).pow(j as u32))
                .sum();
            assert_eq!(ball_size(n, sigma, r), formula);
            for c in f.code.codewords() {
                assert_eq!(enumerate_ball(c, r, sigma).unwrap().count() as u128, formula, "{}", f.name);
            }
        }
    }
}

#[test]
fn fixture_distances_match_pairwise_minimum() {
    for f in all_fixtures() {
        let cw = f.code.codewords();
        let mut best = usize::MAX;
        for (i, x) in cw.iter().enumerate() {
            for y in &cw[i + 1..] {
                best = best.min(x.symbols().iter().zip(y.symbols()).filter(|(a, b)| a != b).count());
            }
        }
        assert_eq!(code_distance(&f.code).unwrap(), best, "{}", f.name);
    }
}

#[test]
fn hamming_is_a_metric_on_all_short_binary_words() {
    let a = Alphabet::binary();
    for n in 1..=4usize {
        let words: Vec<Word> = (0..1usize << n).map(|r| Word::new(&a, view_from_rank(r, n, 2)).unwrap()).collect();
        for x in &words {
            for y in &words {
                let dxy = hamming_distance(x, y).unwrap();
                assert_eq!(dxy, hamming_distance(y, x).unwrap());
                assert_eq!(dxy == 0, x == y);
                for z in &words {
                    assert!(hamming_distance(x, z).unwrap() <= dxy + hamming_distance(y, z).unwrap());
                }
            }
        }
    }
}

fn words_strategy() -> impl Strategy<Value = (usize, Vec<Vec<u8>>)> {
    (2usize..=4, 1usize..=6).prop_flat_map(|(sigma, n)| {
        let w = proptest::collection::vec(0..sigma as u8, n);
        (Just(sigma), proptest::collection::vec(w, 3))
    })
}

proptest! {
    #[test]
    fn metric_axioms((sigma, ws) in words_strategy()) {
        let a = alphabet(sigma);
        let (x, y, z) = (word(&a, &ws[0]), word(&a, &ws[1]), word(&a, &ws[2]));
        let d = |p: &Word, q: &Word| hamming_distance(p, q).unwrap();
        prop_assert_eq!(d(&x, &y), d(&y, &x));
        prop_assert_eq!(d(&x, &x), 0);
        prop_assert_eq!(d(&x, &y) == 0, x == y);
        prop_assert!(d(&x, &z) <= d(&x, &y) + d(&y, &z));
    }

    #[test]
    fn ball_members_are_distinct_and_within_radius((sigma, ws) in words_strategy(), r in 0usize..=3) {
        let a = alphabet(sigma);
        let c = word(&a, &ws[0]);
        let r = r.min(c.len());
        let mut seen = std::collections::BTreeSet::new();
        for (y, err) in enumerate_ball(&c, r, sigma).unwrap() {
            let d = hamming_distance(&c, &y).unwrap();
            prop_assert!(d <= r);
            prop_assert_eq!(err.coords().to_vec(), c.diff(&y));
            prop_assert!(seen.insert(y.symbols().to_vec()));
        }
        prop_assert_eq!(seen.len() as u128, ball_size(c.len(), sigma, r));
    }

    #[test]
    fn random_code_distance_matches_pairwise((sigma, ws) in words_strategy()) {
        let a = alphabet(sigma);
        let mut uniq: Vec<Vec<u8>> = ws.clone();
        uniq.sort();
        uniq.dedup();
        prop_assume!(uniq.len() >= sigma);
        let n = uniq[0].len();
        let cw: Vec<Word> = uniq.iter().take(sigma).map(|v| word(&a, v)).collect();
        let code = Code::from_codewords(a.clone(), 1, n, cw.clone()).unwrap();
        let mut best = usize::MAX;
        for i in 0..cw.len() {
            for j in i + 1..cw.len() {
                best = best.min(hamming_distance(&cw[i], &cw[j]).unwrap());
            }
        }
        prop_assert_eq!(code_distance(&code).unwrap(), best);
    }

    #[test]
    fn view_rank_round_trips(sigma in 2usize..=5, len in 0usize..=5, seed in any::<u64>()) {
        let total = sigma.pow(len as u32);
        let rank = (seed as usize) % total;
        let view = view_from_rank(rank, len, sigma);
        prop_assert_eq!(view.len(), len);
        prop_assert_eq!(view_rank(view, sigma), rank);
    }
}
