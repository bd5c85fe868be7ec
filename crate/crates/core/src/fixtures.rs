//! Built-in codes and decoders with their documented parameters.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::codes::{Alphabet, Code, Symbol, Word};
use crate::decoder::{
    canonical_defects, canonicalize, consistent_values, Decoder, LocalDecoder, Output, RuleEntry, Target, TargetFamily,
};
use crate::error::{Error, Result};
use crate::rational::{rat, Rational};
use crate::transform::heavy_light_split;
use crate::verify::{measure, measure_completeness, nonsmoothable_entries, Mode, SweepConfig};

pub const FIXTURE_NAMES: [&str; 6] = ["rep3", "had4", "pinned8", "nonlin6", "paper-example", "rep3-imperfect"];

/// Seed of the search that produces `nonlin6`.
pub const NONLIN6_SEED: u64 = 6;
const NONLIN6_ATTEMPTS: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeavyExpectation {
    pub target: Target,
    pub delta: Rational,
    pub heavy: Vec<usize>,
}

/// A (target, message rank, entry index) whose query set is nonsmoothable.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Designated {
    pub target: Target,
    pub message: usize,
    pub entry: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expected {
    pub completeness: Rational,
    /// Relaxed soundness of the fixture decoder at integer radii.
    pub soundness: Vec<(usize, Rational)>,
    pub heavy: Vec<HeavyExpectation>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FixtureSet {
    pub name: &'static str,
    pub description: &'static str,
    pub code: Code,
    pub decoder: Decoder,
    pub expected: Expected,
    /// δ at which the derived decoder is built and checked.
    pub bound_delta: Rational,
    pub designated: Option<Designated>,
}

fn binary_code(k: usize, n: usize, words: &[&str]) -> Result<Code> {
    let a = Alphabet::binary();
    let words = words
        .iter()
        .map(|w| Word::parse(&a, w, n))
        .collect::<Result<Vec<_>>>()?;
    Code::from_codewords(a, k, n, words)
}

fn agree(v: &[Symbol]) -> Output {
    if v.iter().all(|s| *s == v[0]) {
        Output::Sym(v[0])
    } else {
        Output::Bot
    }
}

fn uniform_entries(queries: &[Vec<usize>], sigma: usize, f: impl Fn(&[Symbol]) -> Output + Copy) -> Result<Vec<RuleEntry>> {
    let w = rat(1, queries.len() as i64);
    queries
        .iter()
        .map(|q| RuleEntry::from_fn(w.clone(), q.clone(), sigma, f))
        .collect()
}

/// Uniform over `queries` per target, with canonical tables; fails on ambiguous views.
fn canonical_decoder(code: &Code, q: usize, targets: &[usize], queries: &[Vec<usize>]) -> Result<Decoder> {
    let mut rules = BTreeMap::new();
    for &t in targets {
        rules.insert(t, uniform_entries(queries, code.sigma(), |_| Output::Bot)?);
    }
    let draft = Decoder::new(code, q, TargetFamily::Message, rules)?;
    let (dec, diags) = canonicalize(code, &draft)?;
    if !diags.is_empty() {
        return Err(Error::FixtureOracleFailure {
            name: "canonical".into(),
            reason: diags[0].render(code.alphabet()),
        });
    }
    Ok(dec)
}

fn heavy(t: usize, delta: Rational, heavy: Vec<usize>) -> HeavyExpectation {
    HeavyExpectation {
        target: Target::Message(t),
        delta,
        heavy,
    }
}

fn rep3_parts() -> Result<(Code, Decoder)> {
    let code = binary_code(1, 3, &["000", "111"])?;
    let entries = uniform_entries(&[vec![1, 2], vec![1, 3], vec![2, 3]], 2, agree)?;
    let dec = Decoder::new(&code, 2, TargetFamily::Message, BTreeMap::from([(1, entries)]))?;
    Ok((code, dec))
}

fn rep3() -> Result<FixtureSet> {
    let (code, decoder) = rep3_parts()?;
    Ok(FixtureSet {
        name: "rep3",
        description: "repetition code of length 3, decoder reads a uniform pair and outputs the common value or bot",
        code,
        decoder,
        expected: Expected {
            completeness: rat(1, 1),
            soundness: vec![(0, rat(0, 1)), (1, rat(0, 1)), (2, rat(1, 3))],
            heavy: vec![heavy(1, rat(1, 3), vec![])],
        },
        bound_delta: rat(1, 3),
        designated: None,
    })
}

fn rep3_imperfect() -> Result<FixtureSet> {
    let (code, dec) = rep3_parts()?;
    let decoder = dec.with_output(&code, Target::Message(1), 0, &[Symbol(0), Symbol(0)], Output::Bot)?;
    Ok(FixtureSet {
        name: "rep3-imperfect",
        description: "rep3 with the pair {1,2} answering bot on view 00",
        code,
        decoder,
        expected: Expected {
            completeness: rat(2, 3),
            soundness: vec![(0, rat(0, 1)), (1, rat(0, 1)), (2, rat(1, 3))],
            heavy: vec![heavy(1, rat(1, 3), vec![])],
        },
        bound_delta: rat(1, 3),
        designated: None,
    })
}

fn had4() -> Result<FixtureSet> {
    let code = binary_code(2, 4, &["0000", "0101", "0011", "0110"])?;
    let xor = |v: &[Symbol]| Output::Sym(Symbol(v[0].0 ^ v[1].0));
    let rules = BTreeMap::from([
        (1, uniform_entries(&[vec![1, 3], vec![2, 4]], 2, xor)?),
        (2, uniform_entries(&[vec![1, 2], vec![3, 4]], 2, xor)?),
    ]);
    let decoder = Decoder::new(&code, 2, TargetFamily::Message, rules)?;
    Ok(FixtureSet {
        name: "had4",
        description: "Hadamard code for k=2, two-query XOR decoder (not canonical)",
        code,
        decoder,
        expected: Expected {
            completeness: rat(1, 1),
            soundness: vec![(0, rat(0, 1)), (1, rat(1, 2))],
            heavy: vec![heavy(1, rat(1, 2), vec![]), heavy(2, rat(1, 2), vec![])],
        },
        bound_delta: rat(1, 8),
        designated: None,
    })
}

fn pinned8() -> Result<FixtureSet> {
    let code = binary_code(1, 8, &["00000000", "11111111"])?;
    let queries: Vec<Vec<usize>> = (2..=8).map(|j| vec![1, j]).collect();
    let entries = uniform_entries(&queries, 2, agree)?;
    let decoder = Decoder::new(&code, 2, TargetFamily::Message, BTreeMap::from([(1, entries)]))?;
    Ok(FixtureSet {
        name: "pinned8",
        description: "repetition code of length 8, decoder always reads coordinate 1 plus a uniform partner",
        code,
        decoder,
        expected: Expected {
            completeness: rat(1, 1),
            soundness: vec![(0, rat(0, 1)), (1, rat(0, 1)), (2, rat(1, 7))],
            heavy: vec![heavy(1, rat(1, 2), vec![1]), heavy(1, rat(5, 16), vec![1])],
        },
        bound_delta: rat(5, 16),
        designated: None,
    })
}

fn worked_example() -> Result<FixtureSet> {
    // coordinates 1-3 are chosen so the canonical table on {1,2,3} is the
    // worked three-query rule; 4..7 carry b1, b2, b1, b3
    let head = ["001", "100", "101", "100", "000", "010", "000", "010"];
    let words: Vec<String> = (0..8)
        .map(|m| {
            let b = |i: usize| (m >> (2 - i)) & 1;
            format!("{}{}{}{}{}", head[m], b(0), b(1), b(0), b(2))
        })
        .collect();
    let refs: Vec<&str> = words.iter().map(String::as_str).collect();
    let code = binary_code(3, 7, &refs)?;
    let decoder = canonical_decoder(&code, 3, &[1], &[vec![1, 2, 3], vec![1, 4, 5], vec![1, 6, 7]])?;
    Ok(FixtureSet {
        name: "paper-example",
        description: "k=3, n=7 code whose decoder for b1 contains the worked three-query rule with heavy coordinate 1",
        code,
        decoder,
        expected: Expected {
            completeness: rat(1, 1),
            soundness: vec![(0, rat(0, 1)), (1, rat(1, 3)), (2, rat(2, 3))],
            heavy: vec![heavy(1, rat(1, 2), vec![1])],
        },
        bound_delta: rat(1, 14),
        designated: Some(Designated {
            target: Target::Message(1),
            message: 0b100,
            entry: 0,
        }),
    })
}

/// Entries `{1, j}` whose canonical table is unambiguous for `target`, uniform weights.
fn pinned_entries(code: &Code, target: Target) -> Result<Vec<RuleEntry>> {
    let mut entries = Vec::new();
    for j in 2..=code.n() {
        let sets = consistent_values(code, target, &[1, j])?;
        if sets.iter().all(|s| s.len() <= 1) {
            let table = sets
                .iter()
                .map(|s| s.iter().next().map_or(Output::Bot, |&v| Output::Sym(v)))
                .collect();
            entries.push(RuleEntry {
                weight: rat(0, 1),
                query: vec![1, j],
                table,
            });
        }
    }
    let w = rat(1, entries.len().max(1) as i64);
    entries.iter_mut().for_each(|e| e.weight = w.clone());
    Ok(entries)
}

/// Validity oracle for generated codes: injective with distance at least 2,
/// not an affine subspace, a perfectly complete canonical decoder, and a
/// nonsmoothable entry at δ = 1/2.
fn nonlin6_candidate(words: &[String]) -> Result<Option<(Code, Decoder, Designated)>> {
    let refs: Vec<&str> = words.iter().map(String::as_str).collect();
    let code = match binary_code(2, 6, &refs) {
        Ok(c) => c,
        Err(Error::NotInjective(..)) => return Ok(None),
        Err(e) => return Err(e),
    };
    if code.distance().unwrap_or(0) < 2 {
        return Ok(None);
    }
    let affine = (0..6).all(|j| code.codewords().iter().map(|c| c.symbols()[j].0).fold(0, |a, b| a ^ b) == 0);
    if affine {
        return Ok(None);
    }
    let mut rules = BTreeMap::new();
    for t in 1..=2 {
        let entries = pinned_entries(&code, Target::Message(t))?;
        if entries.len() >= 2 {
            rules.insert(t, entries);
        }
    }
    if rules.is_empty() {
        return Ok(None);
    }
    let decoder = Decoder::new(&code, 2, TargetFamily::Message, rules)?;
    if canonical_defects(&code, &decoder)? != 0 || measure_completeness(&code, &decoder)? != rat(1, 1) {
        return Ok(None);
    }
    for target in decoder.targets() {
        let split = heavy_light_split(&decoder, target, &rat(1, 2))?;
        for m in 0..code.len() {
            if let Some(&entry) = nonsmoothable_entries(&decoder, code.codeword(m), &split, 2)?.first() {
                let designated = Designated {
                    target,
                    message: m,
                    entry,
                };
                return Ok(Some((code, decoder, designated)));
            }
        }
    }
    Ok(None)
}

fn nonlin6() -> Result<FixtureSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(NONLIN6_SEED);
    for _ in 0..NONLIN6_ATTEMPTS {
        let words: Vec<String> = (0..4).map(|_| format!("{:06b}", rng.gen_range(0..64u32))).collect();
        if let Some((code, decoder, designated)) = nonlin6_candidate(&words)? {
            return Ok(FixtureSet {
                name: "nonlin6",
                description: "seeded random nonlinear binary code, k=2, n=6, canonical decoders reading coordinate 1 plus a partner",
                code,
                decoder,
                expected: nonlin6_expected(),
                bound_delta: rat(1, 7),
                designated: Some(designated),
            });
        }
    }
    Err(Error::FixtureOracleFailure {
        name: "nonlin6".into(),
        reason: format!("no valid code in {NONLIN6_ATTEMPTS} attempts"),
    })
}

/// Measured on the code found from `NONLIN6_SEED`; only target 2 admits two unambiguous pairs.
fn nonlin6_expected() -> Expected {
    Expected {
        completeness: rat(1, 1),
        soundness: vec![(0, rat(0, 1)), (1, rat(1, 2)), (2, rat(1, 1))],
        heavy: vec![heavy(2, rat(1, 2), vec![1]), heavy(2, rat(1, 7), vec![])],
    }
}

pub fn load_fixture(name: &str) -> Result<FixtureSet> {
    match name {
        "rep3" => rep3(),
        "had4" => had4(),
        "pinned8" => pinned8(),
        "nonlin6" => nonlin6(),
        "paper-example" => worked_example(),
        "rep3-imperfect" => rep3_imperfect(),
        _ => Err(Error::UnknownFixture(name.to_string())),
    }
}

/// Re-measures every documented parameter; returns one line per mismatch.
pub fn verify_fixture(f: &FixtureSet) -> Result<Vec<String>> {
    let mut bad = Vec::new();
    let c = measure_completeness(&f.code, &f.decoder)?;
    if c != f.expected.completeness {
        bad.push(format!("{}: completeness {} != documented {}", f.name, c, f.expected.completeness));
    }
    for (radius, s) in &f.expected.soundness {
        let got = measure(&f.code, &f.decoder, Mode::Rldc, *radius, &SweepConfig::exact())?.soundness;
        if &got != s {
            bad.push(format!("{}: soundness at radius {radius} is {got}, documented {s}", f.name));
        }
    }
    for h in &f.expected.heavy {
        let split = heavy_light_split(&f.decoder, h.target, &h.delta)?;
        if split.heavy != h.heavy {
            bad.push(format!(
                "{}: heavy set for {} at delta {} is {:?}, documented {:?}",
                f.name, h.target, h.delta, split.heavy, h.heavy
            ));
        }
    }
    Ok(bad)
}
