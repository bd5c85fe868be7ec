//! Nonadaptive local decoders: per target, a rational distribution over query
//! sets, each with a total truth table into `Sigma ∪ {⊥}`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::codes::{check_coords, view_count, view_from_rank, view_rank, Alphabet, Code, Symbol, Word};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TargetFamily {
    /// Decode message symbols `b_i`, `i ∈ [k]`.
    Message,
    /// Correct codeword symbols `c_u`, `u ∈ [n]`.
    Codeword,
}

impl TargetFamily {
    pub fn name(self) -> &'static str {
        match self {
            TargetFamily::Message => "message",
            TargetFamily::Codeword => "codeword",
        }
    }

    pub fn parse(text: &str) -> Option<Self> {
        match text {
            "message" => Some(TargetFamily::Message),
            "codeword" => Some(TargetFamily::Codeword),
            _ => None,
        }
    }

    /// Number of targets of this family for `code`.
    pub fn range(self, code: &Code) -> usize {
        match self {
            TargetFamily::Message => code.k(),
            TargetFamily::Codeword => code.n(),
        }
    }
}

/// A 1-based decoding target.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Target {
    Message(usize),
    Codeword(usize),
}

impl Target {
    pub fn of(family: TargetFamily, index: usize) -> Self {
        match family {
            TargetFamily::Message => Target::Message(index),
            TargetFamily::Codeword => Target::Codeword(index),
        }
    }

    pub fn index(self) -> usize {
        match self {
            Target::Message(i) | Target::Codeword(i) => i,
        }
    }

    pub fn family(self) -> TargetFamily {
        match self {
            Target::Message(_) => TargetFamily::Message,
            Target::Codeword(_) => TargetFamily::Codeword,
        }
    }

    /// The correct answer for this target when the message has rank `message`.
    pub fn value(self, code: &Code, message: usize) -> Symbol {
        match self {
            Target::Message(i) => code.message(message).at(i),
            Target::Codeword(u) => code.codeword(message).at(u),
        }
    }

    pub fn check(self, code: &Code) -> Result<()> {
        let max = self.family().range(code);
        if self.index() == 0 || self.index() > max {
            return Err(Error::TargetOutOfRange {
                target: self.index(),
                max,
            });
        }
        Ok(())
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Message(i) => write!(f, "message[{i}]"),
            Target::Codeword(u) => write!(f, "codeword[{u}]"),
        }
    }
}

/// A decoder answer: an alphabet symbol or the abort symbol ⊥.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Output {
    Sym(Symbol),
    Bot,
}

impl Output {
    pub fn render(self, alphabet: &Alphabet) -> String {
        match self {
            Output::Sym(s) => alphabet.char_of(s).to_string(),
            Output::Bot => "bot".to_string(),
        }
    }

    pub fn parse(text: &str, alphabet: &Alphabet) -> Option<Self> {
        if text == "bot" {
            return Some(Output::Bot);
        }
        let mut it = text.chars();
        match (it.next(), it.next()) {
            (Some(c), None) => alphabet.symbol_of(c).map(Output::Sym),
            _ => None,
        }
    }

    fn slot(self, sigma: usize) -> usize {
        match self {
            Output::Sym(s) => s.index(),
            Output::Bot => sigma,
        }
    }
}

/// One query set `Q` with its weight and truth table `f_Q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleEntry {
    pub weight: Rational,
    pub query: Vec<usize>,
    /// Indexed by the big-endian rank of `y|_Q`.
    pub table: Vec<Output>,
}

impl RuleEntry {
    pub fn output(&self, view: &[Symbol], sigma: usize) -> Output {
        self.table[view_rank(view.iter().copied(), sigma)]
    }

    pub fn eval(&self, word: &Word, sigma: usize) -> Output {
        self.table[view_rank(self.query.iter().map(|&c| word.at(c)), sigma)]
    }

    /// Builds a table from a rule on local views.
    pub fn from_fn(weight: Rational, query: Vec<usize>, sigma: usize, f: impl Fn(&[Symbol]) -> Output) -> Result<Self> {
        let size = view_count(sigma, query.len())?;
        let table = (0..size)
            .map(|r| f(&view_from_rank(r, query.len(), sigma)))
            .collect();
        Ok(Self { weight, query, table })
    }
}

/// Exact output law of a decoder on one word. Slot `sigma` holds ⊥.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutputDistribution {
    mass: Vec<Rational>,
}

impl OutputDistribution {
    pub fn zero(sigma: usize) -> Self {
        Self {
            mass: vec![Rational::zero(); sigma + 1],
        }
    }

    pub fn sigma(&self) -> usize {
        self.mass.len() - 1
    }

    pub fn add(&mut self, out: Output, w: &Rational) {
        let slot = out.slot(self.sigma());
        self.mass[slot] += w;
    }

    pub fn add_symbol(&mut self, s: Symbol, w: &Rational) {
        self.mass[s.index()] += w;
    }

    pub fn get(&self, out: Output) -> &Rational {
        &self.mass[out.slot(self.sigma())]
    }

    pub fn bot(&self) -> &Rational {
        &self.mass[self.sigma()]
    }

    pub fn total(&self) -> Rational {
        self.mass.iter().sum()
    }

    /// Mass on outputs other than `truth`; ⊥ counts as failure unless `relaxed`.
    pub fn failure(&self, truth: Symbol, relaxed: bool) -> Rational {
        let sigma = self.sigma();
        self.mass
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != truth.index() && !(relaxed && i == sigma))
            .map(|(_, m)| m)
            .sum()
    }

    pub fn entries(&self) -> impl Iterator<Item = (Output, &Rational)> {
        let sigma = self.sigma();
        self.mass.iter().enumerate().map(move |(i, m)| {
            let o = if i == sigma { Output::Bot } else { Output::Sym(Symbol(i as u8)) };
            (o, m)
        })
    }

    pub fn render(&self, alphabet: &Alphabet) -> String {
        self.entries()
            .filter(|(_, m)| !m.is_zero())
            .map(|(o, m)| format!("{}: {}", o.render(alphabet), rational::display(m)))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

/// Behaviour shared by relaxed decoders and derived LDC decoders.
pub trait LocalDecoder: Sync {
    fn family(&self) -> TargetFamily;
    fn sigma(&self) -> usize;
    fn n(&self) -> usize;
    /// Maximum number of coordinates read per invocation.
    fn queries(&self) -> usize;
    fn targets(&self) -> Vec<Target>;
    fn output_distribution(&self, target: Target, word: &Word) -> Result<OutputDistribution>;
    fn sample(&self, target: Target, word: &Word, rng: &mut ChaCha8Rng) -> Result<Output>;

    fn failure(&self, target: Target, word: &Word, truth: Symbol, relaxed: bool) -> Result<Rational> {
        Ok(self.output_distribution(target, word)?.failure(truth, relaxed))
    }
}

/// Weights of one target rescaled to a common integer denominator.
#[derive(Clone, Debug)]
pub(crate) struct Scaled {
    pub denom: u64,
    pub numers: Vec<u64>,
}

impl Scaled {
    pub(crate) fn new(weights: &[&Rational]) -> Option<Self> {
        let mut lcm = BigInt::one();
        for w in weights {
            lcm = lcm.lcm(w.denom());
        }
        let denom = lcm.to_u64()?;
        let numers = weights
            .iter()
            .map(|w| (w.numer() * (&lcm / w.denom())).to_u64())
            .collect::<Option<Vec<_>>>()?;
        Some(Self { denom, numers })
    }

    /// Index of the entry hit by a uniform draw from `[0, denom)`.
    pub(crate) fn pick(&self, draw: u64) -> usize {
        let mut acc = 0u64;
        for (i, &w) in self.numers.iter().enumerate() {
            acc += w;
            if draw < acc {
                return i;
            }
        }
        self.numers.len() - 1
    }

    pub(crate) fn ratio(&self, numer: u128) -> Rational {
        Rational::new(BigInt::from(numer), BigInt::from(self.denom))
    }
}

pub(crate) fn check_weights(target: usize, weights: &[&Rational]) -> Result<()> {
    for w in weights {
        if !w.is_positive() {
            return Err(Error::NonPositiveWeight(rational::display(w)));
        }
    }
    let sum: Rational = weights.iter().copied().sum();
    if !sum.is_one() {
        return Err(Error::WeightsNotNormalized {
            target,
            sum: rational::display(&sum),
        });
    }
    Ok(())
}

/// Draws an entry index by weight using the documented ChaCha8 stream:
/// one `gen_range(0..D)` over the common denominator `D`, falling back to a
/// single `f64` draw if `D` does not fit in 64 bits.
pub(crate) fn draw_entry(scaled: Option<&Scaled>, weights: &[&Rational], rng: &mut ChaCha8Rng) -> usize {
    match scaled {
        Some(s) => s.pick(rng.gen_range(0..s.denom)),
        None => {
            let u: f64 = rng.gen();
            let mut acc = 0.0;
            for (i, w) in weights.iter().enumerate() {
                acc += rational::to_f64(w);
                if u < acc {
                    return i;
                }
            }
            weights.len() - 1
        }
    }
}

/// A nonadaptive decoder bound to a code's shape.
#[derive(Clone, Debug)]
pub struct Decoder {
    q: usize,
    family: TargetFamily,
    n: usize,
    sigma: usize,
    rules: BTreeMap<usize, Vec<RuleEntry>>,
    scaled: BTreeMap<usize, Option<Scaled>>,
}

impl PartialEq for Decoder {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q
            && self.family == other.family
            && self.n == other.n
            && self.sigma == other.sigma
            && self.rules == other.rules
    }
}

impl Decoder {
    /// Validates and builds a decoder for `code`.
    pub fn new(code: &Code, q: usize, family: TargetFamily, rules: BTreeMap<usize, Vec<RuleEntry>>) -> Result<Self> {
        if rules.is_empty() {
            return Err(Error::NoRules);
        }
        let sigma = code.sigma();
        let mut scaled = BTreeMap::new();
        for (&t, entries) in &rules {
            Target::of(family, t).check(code)?;
            if entries.is_empty() {
                return Err(Error::WeightsNotNormalized {
                    target: t,
                    sum: "0".into(),
                });
            }
            for e in entries {
                if e.query.is_empty() {
                    return Err(Error::BadQuery(e.query.clone()));
                }
                check_coords(&e.query, code.n())?;
                if e.query.len() > q {
                    return Err(Error::QueryTooLong {
                        query: e.query.clone(),
                        q,
                    });
                }
                let size = view_count(sigma, e.query.len())?;
                if e.table.len() != size {
                    let view = view_from_rank(e.table.len().min(size - 1), e.query.len(), sigma);
                    return Err(Error::PartialTable {
                        target: t,
                        query: e.query.clone(),
                        view: code.alphabet().render(&view),
                    });
                }
                if e.table.iter().any(|o| matches!(o, Output::Sym(s) if s.index() >= sigma)) {
                    return Err(Error::BadSymbol {
                        symbol: "?".into(),
                        context: format!("table for target {t}"),
                    });
                }
            }
            let weights: Vec<&Rational> = entries.iter().map(|e| &e.weight).collect();
            check_weights(t, &weights)?;
            scaled.insert(t, Scaled::new(&weights));
        }
        Ok(Self {
            q,
            family,
            n: code.n(),
            sigma,
            rules,
            scaled,
        })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn rules(&self) -> &BTreeMap<usize, Vec<RuleEntry>> {
        &self.rules
    }

    pub fn entries(&self, target: Target) -> Result<&[RuleEntry]> {
        self.check_target(target)?;
        Ok(&self.rules[&target.index()])
    }

    fn check_target(&self, target: Target) -> Result<()> {
        if target.family() != self.family {
            return Err(Error::TargetKindMismatch(format!(
                "{target} asked of a {} decoder",
                self.family.name()
            )));
        }
        if !self.rules.contains_key(&target.index()) {
            return Err(Error::TargetOutOfRange {
                target: target.index(),
                max: self.rules.keys().last().copied().unwrap_or(0),
            });
        }
        Ok(())
    }

    fn check_word(&self, word: &Word) -> Result<()> {
        if word.len() != self.n {
            return Err(Error::length("input word", self.n, word.len()));
        }
        Ok(())
    }

    /// True if some table entry is ⊥.
    pub fn emits_bot(&self) -> bool {
        self.rules
            .values()
            .flatten()
            .any(|e| e.table.contains(&Output::Bot))
    }

    /// Copy with one table cell replaced.
    pub fn with_output(&self, code: &Code, target: Target, entry: usize, view: &[Symbol], out: Output) -> Result<Self> {
        self.check_target(target)?;
        let mut rules = self.rules.clone();
        let e = rules
            .get_mut(&target.index())
            .and_then(|v| v.get_mut(entry))
            .ok_or(Error::TargetOutOfRange {
                target: entry,
                max: self.rules[&target.index()].len(),
            })?;
        if view.len() != e.query.len() {
            return Err(Error::ViewLengthMismatch {
                expected: e.query.len(),
                actual: view.len(),
            });
        }
        let r = view_rank(view.iter().copied(), self.sigma);
        e.table[r] = out;
        Decoder::new(code, self.q, self.family, rules)
    }
}

impl LocalDecoder for Decoder {
    fn family(&self) -> TargetFamily {
        self.family
    }

    fn sigma(&self) -> usize {
        self.sigma
    }

    fn n(&self) -> usize {
        self.n
    }

    fn queries(&self) -> usize {
        self.q
    }

    fn targets(&self) -> Vec<Target> {
        self.rules.keys().map(|&t| Target::of(self.family, t)).collect()
    }

    fn output_distribution(&self, target: Target, word: &Word) -> Result<OutputDistribution> {
        self.check_target(target)?;
        self.check_word(word)?;
        let entries = &self.rules[&target.index()];
        let mut dist = OutputDistribution::zero(self.sigma);
        match &self.scaled[&target.index()] {
            Some(s) => {
                let mut counts = vec![0u128; self.sigma + 1];
                for (e, &w) in entries.iter().zip(&s.numers) {
                    counts[e.eval(word, self.sigma).slot(self.sigma)] += w as u128;
                }
                for (slot, c) in counts.into_iter().enumerate() {
                    dist.mass[slot] = s.ratio(c);
                }
            }
            None => {
                for e in entries {
                    dist.add(e.eval(word, self.sigma), &e.weight);
                }
            }
        }
        Ok(dist)
    }

    fn sample(&self, target: Target, word: &Word, rng: &mut ChaCha8Rng) -> Result<Output> {
        self.check_target(target)?;
        self.check_word(word)?;
        let entries = &self.rules[&target.index()];
        let weights: Vec<&Rational> = entries.iter().map(|e| &e.weight).collect();
        let i = draw_entry(self.scaled[&target.index()].as_ref(), &weights, rng);
        Ok(entries[i].eval(word, self.sigma))
    }

    fn failure(&self, target: Target, word: &Word, truth: Symbol, relaxed: bool) -> Result<Rational> {
        self.check_target(target)?;
        self.check_word(word)?;
        let entries = &self.rules[&target.index()];
        match &self.scaled[&target.index()] {
            Some(s) => {
                let mut bad = 0u128;
                for (e, &w) in entries.iter().zip(&s.numers) {
                    let failed = match e.eval(word, self.sigma) {
                        Output::Sym(x) => x != truth,
                        Output::Bot => !relaxed,
                    };
                    if failed {
                        bad += w as u128;
                    }
                }
                Ok(s.ratio(bad))
            }
            None => Ok(self.output_distribution(target, word)?.failure(truth, relaxed)),
        }
    }
}

/// Exact output distribution of `decoder` on `word` for `target`.
pub fn output_distribution(decoder: &impl LocalDecoder, target: Target, word: &Word) -> Result<OutputDistribution> {
    decoder.output_distribution(target, word)
}

/// One seeded draw of the decoder. Identical seeds give identical outputs.
pub fn sample_decode(decoder: &impl LocalDecoder, target: Target, word: &Word, seed: u64) -> Result<Output> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    decoder.sample(target, word, &mut rng)
}

/// Raised when a view is consistent with codewords that disagree on the target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AmbiguousView {
    pub target: Target,
    pub query: Vec<usize>,
    pub view: Vec<Symbol>,
    /// Conflicting target values, in alphabet order; the first one is used.
    pub values: Vec<Symbol>,
}

impl AmbiguousView {
    pub fn render(&self, alphabet: &Alphabet) -> String {
        format!(
            "AmbiguousView({}, Q={:?}, view={}, values={})",
            self.target,
            self.query,
            alphabet.render(&self.view),
            alphabet.render(&self.values)
        )
    }
}

/// For each view of `query`, the set of target values over agreeing codewords.
pub(crate) fn consistent_values(code: &Code, target: Target, query: &[usize]) -> Result<Vec<BTreeSet<Symbol>>> {
    let sigma = code.sigma();
    let mut sets = vec![BTreeSet::new(); view_count(sigma, query.len())?];
    for (m, cw) in code.codewords().iter().enumerate() {
        let r = view_rank(query.iter().map(|&c| cw.at(c)), sigma);
        sets[r].insert(target.value(code, m));
    }
    Ok(sets)
}

/// Rewrites every table into canonical form: ⊥ on views no codeword explains,
/// otherwise the (unique, or smallest when ambiguous) consistent target value.
pub fn canonicalize(code: &Code, decoder: &Decoder) -> Result<(Decoder, Vec<AmbiguousView>)> {
    if code.n() != decoder.n || code.sigma() != decoder.sigma {
        return Err(Error::length("decoder block length", code.n(), decoder.n));
    }
    let sigma = code.sigma();
    let mut diagnostics = Vec::new();
    let mut rules = BTreeMap::new();
    for (&t, entries) in &decoder.rules {
        let target = Target::of(decoder.family, t);
        let mut out = Vec::with_capacity(entries.len());
        for e in entries {
            let sets = consistent_values(code, target, &e.query)?;
            let table = sets
                .iter()
                .enumerate()
                .map(|(r, set)| match set.len() {
                    0 => Output::Bot,
                    1 => Output::Sym(*set.iter().next().unwrap()),
                    _ => {
                        diagnostics.push(AmbiguousView {
                            target,
                            query: e.query.clone(),
                            view: view_from_rank(r, e.query.len(), sigma),
                            values: set.iter().copied().collect(),
                        });
                        Output::Sym(*set.iter().next().unwrap())
                    }
                })
                .collect();
            out.push(RuleEntry {
                weight: e.weight.clone(),
                query: e.query.clone(),
                table,
            });
        }
        rules.insert(t, out);
    }
    Ok((Decoder::new(code, decoder.q, decoder.family, rules)?, diagnostics))
}

/// Number of table cells that canonicalization would change, plus ambiguity count.
pub fn canonical_defects(code: &Code, decoder: &Decoder) -> Result<usize> {
    let (canon, diags) = canonicalize(code, decoder)?;
    let changed: usize = decoder
        .rules
        .values()
        .flatten()
        .zip(canon.rules.values().flatten())
        .map(|(a, b)| a.table.iter().zip(&b.table).filter(|(x, y)| x != y).count())
        .sum();
    Ok(changed + diags.len())
}

pub fn is_canonical(code: &Code, decoder: &Decoder) -> Result<bool> {
    Ok(canonical_defects(code, decoder)? == 0)
}
