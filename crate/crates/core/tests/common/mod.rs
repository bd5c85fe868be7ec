#![allow(dead_code)]

use rldc_core::bounds::{bound_imperfect, BoundParams};
use rldc_core::codes::{Code, Word};
use rldc_core::decoder::{canonicalize, Decoder, LocalDecoder, Target};
use rldc_core::fixtures::{load_fixture, FixtureSet, FIXTURE_NAMES};
use rldc_core::rational::{self, rat, Rational};
use rldc_core::transform::{derive_ldc_decoder, derive_ldc_decoder_unchecked};
use rldc_core::verify::{measure, radius_of, Mode, SweepConfig};

pub fn all_fixtures() -> Vec<FixtureSet> {
    FIXTURE_NAMES.iter().map(|n| load_fixture(n).unwrap()).collect()
}

/// Fixtures with canonical decoders; had4 is canonicalized first.
pub fn canonical_fixtures() -> Vec<FixtureSet> {
    ["rep3", "had4", "pinned8", "nonlin6", "paper-example"]
        .iter()
        .map(|n| {
            let mut f = load_fixture(n).unwrap();
            let (dec, diags) = canonicalize(&f.code, &f.decoder).unwrap();
            assert!(diags.is_empty(), "{n}: ambiguous views");
            f.decoder = dec;
            f
        })
        .collect()
}

/// Every δ a fixture documents, deduplicated.
pub fn deltas(f: &FixtureSet) -> Vec<Rational> {
    let mut d: Vec<Rational> = f.expected.heavy.iter().map(|h| h.delta.clone()).collect();
    d.push(f.bound_delta.clone());
    d.push(rat(1, 2));
    d.sort();
    d.dedup();
    d
}

pub fn exact(code: &Code, dec: &dyn LocalDecoder, mode: Mode, radius: usize) -> Rational {
    measure(code, dec, mode, radius, &SweepConfig::exact()).unwrap().soundness
}

pub fn relaxed_mode(dec: &Decoder) -> Mode {
    match dec.targets()[0] {
        Target::Message(_) => Mode::Rldc,
        Target::Codeword(_) => Mode::Rlcc,
    }
}

pub fn relaxed_soundness(code: &Code, dec: &Decoder, radius: usize) -> Rational {
    exact(code, dec, relaxed_mode(dec), radius)
}

#[derive(Debug)]
pub struct BoundRow {
    pub radius: usize,
    pub measured: Rational,
    pub bound: Rational,
    pub admissible: bool,
}

impl BoundRow {
    pub fn holds(&self) -> bool {
        self.measured <= self.bound
    }
}

/// Derives the LDC decoder at `delta` and compares its exact error against
/// `ε + s|Σ|^q(1-1/|Σ|) + rq/δ` at every integer radius, where `s` is the
/// relaxed soundness at `floor(δn)` and `ε = 1 - c*`.
pub fn derived_bound_rows(code: &Code, dec: &Decoder, delta: &Rational) -> Vec<BoundRow> {
    let n = code.n();
    let s = relaxed_soundness(code, dec, radius_of(delta, n));
    let c = rldc_core::verify::measure_completeness(code, dec).unwrap();
    let eps = rational::one() - c;
    let derived = if eps == rational::zero() {
        derive_ldc_decoder(code, dec, delta).unwrap()
    } else {
        derive_ldc_decoder_unchecked(code, dec, delta).unwrap()
    };
    (0..=n)
        .map(|radius| {
            let r = rat(radius as i64, n as i64);
            let p = BoundParams::new(dec.q(), code.sigma(), delta.clone(), s.clone(), r).with_eps(eps.clone());
            let b = bound_imperfect(&p).unwrap();
            BoundRow {
                radius,
                measured: exact(code, &derived, Mode::Ldc, radius),
                bound: b.bound,
                admissible: b.admissible,
            }
        })
        .collect()
}

/// All subsets of `[n]` of size at most `k`, as sorted coordinate lists.
pub fn subsets_up_to(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    let mut frontier = vec![vec![]];
    for _ in 0..k {
        let mut next = Vec::new();
        for s in &frontier {
            let start = s.last().map_or(1, |&l: &usize| l + 1);
            for j in start..=n {
                let mut t: Vec<usize> = s.clone();
                t.push(j);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

pub fn codewords(code: &Code) -> Vec<Word> {
    code.codewords().to_vec()
}
