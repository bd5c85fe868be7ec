//! The derived LDC decoder and its t-fold majority variant.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::codes::{view_count, Code, Symbol, Word};
use crate::decoder::{
    canonical_defects, check_weights, draw_entry, Decoder, LocalDecoder, Output, OutputDistribution, Scaled, Target,
    TargetFamily,
};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

use super::pattern::{derive_rule, positions, DerivedRule, PatternClass};
use super::split::heavy_light_split;

/// How majority ties and the all-discarded case are resolved.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum TiePolicy {
    /// Uniform over the tied symbols, or over the whole alphabet when no vote survives.
    #[default]
    Uniform,
    /// Smallest tied symbol, or the first alphabet symbol when no vote survives.
    Lex,
}

impl TiePolicy {
    pub fn name(self) -> &'static str {
        match self {
            TiePolicy::Uniform => "uniform",
            TiePolicy::Lex => "lex",
        }
    }

    pub fn parse(text: &str) -> Option<Self> {
        match text {
            "uniform" => Some(TiePolicy::Uniform),
            "lex" => Some(TiePolicy::Lex),
            _ => None,
        }
    }

    /// Winners of a vote count; every symbol wins when no vote was cast.
    pub(crate) fn winners(counts: &[usize]) -> Vec<usize> {
        let best = counts.iter().copied().max().unwrap_or(0);
        (0..counts.len()).filter(|&s| counts[s] == best).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivedEntry {
    pub weight: Rational,
    pub rule: DerivedRule,
}

/// A decoder that reads only light coordinates and never outputs ⊥.
#[derive(Clone, Debug)]
pub struct DerivedDecoder {
    family: TargetFamily,
    n: usize,
    sigma: usize,
    t: usize,
    tie: TiePolicy,
    q_effective: usize,
    rules: BTreeMap<usize, Vec<DerivedEntry>>,
    scaled: BTreeMap<usize, Option<Scaled>>,
}

impl PartialEq for DerivedDecoder {
    fn eq(&self, other: &Self) -> bool {
        self.family == other.family
            && self.n == other.n
            && self.sigma == other.sigma
            && self.t == other.t
            && self.tie == other.tie
            && self.rules == other.rules
    }
}

impl DerivedDecoder {
    pub fn new(
        code: &Code,
        family: TargetFamily,
        t: usize,
        tie: TiePolicy,
        rules: BTreeMap<usize, Vec<DerivedEntry>>,
    ) -> Result<Self> {
        if t == 0 {
            return Err(Error::BadT(t));
        }
        if rules.is_empty() {
            return Err(Error::NoRules);
        }
        let sigma = code.sigma();
        let mut scaled = BTreeMap::new();
        let mut q_effective = 0;
        for (&target, entries) in &rules {
            Target::of(family, target).check(code)?;
            for e in entries {
                crate::codes::check_coords(&e.rule.query, code.n())?;
                if e.rule.query.is_empty() {
                    return Err(Error::BadQuery(e.rule.query.clone()));
                }
                positions(&e.rule.query, &e.rule.light)?;
                let size = view_count(sigma, e.rule.light.len())?;
                if e.rule.pattern_map.len() != size {
                    return Err(Error::PartialTable {
                        target,
                        query: e.rule.query.clone(),
                        view: format!("light view #{}", e.rule.pattern_map.len().min(size)),
                    });
                }
                if e
                    .rule
                    .pattern_map
                    .iter()
                    .any(|p| matches!(p, PatternClass::Good(s) if s.index() >= sigma))
                {
                    return Err(Error::BadSymbol {
                        symbol: "?".into(),
                        context: format!("pattern map for target {target}"),
                    });
                }
                q_effective = q_effective.max(e.rule.light.len());
            }
            let weights: Vec<&Rational> = entries.iter().map(|e| &e.weight).collect();
            if weights.is_empty() {
                return Err(Error::WeightsNotNormalized {
                    target,
                    sum: "0".into(),
                });
            }
            check_weights(target, &weights)?;
            scaled.insert(target, Scaled::new(&weights));
        }
        Ok(Self {
            family,
            n: code.n(),
            sigma,
            t,
            tie,
            q_effective,
            rules,
            scaled,
        })
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn tie(&self) -> TiePolicy {
        self.tie
    }

    /// Largest number of light coordinates read by one sample.
    pub fn q_effective(&self) -> usize {
        self.q_effective
    }

    pub fn rules(&self) -> &BTreeMap<usize, Vec<DerivedEntry>> {
        &self.rules
    }

    pub fn entries(&self, target: Target) -> Result<&[DerivedEntry]> {
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

    /// Copy with a different repetition count and tie policy.
    pub fn with_repetitions(&self, t: usize, tie: TiePolicy) -> Result<Self> {
        if t == 0 {
            return Err(Error::BadT(t));
        }
        Ok(Self {
            t,
            tie,
            ..self.clone()
        })
    }

    fn class(&self, e: &DerivedEntry, read: &mut dyn FnMut(usize) -> Symbol) -> PatternClass {
        let view: Vec<Symbol> = e.rule.light.iter().map(|&j| read(j)).collect();
        e.rule.class_of(&view, self.sigma)
    }

    /// One-sample law: slot `s < σ` is a vote for `s`, slot `σ` a discarded sample.
    fn sample_law(&self, target: Target, read: &mut dyn FnMut(usize) -> Symbol) -> Vec<Rational> {
        let entries = &self.rules[&target.index()];
        let sigma = self.sigma;
        match &self.scaled[&target.index()] {
            Some(s) => {
                let mut counts = vec![0u128; sigma + 1];
                for (e, &w) in entries.iter().zip(&s.numers) {
                    let slot = match self.class(e, read) {
                        PatternClass::Good(x) => x.index(),
                        PatternClass::Bad(_) => sigma,
                    };
                    counts[slot] += w as u128;
                }
                counts.into_iter().map(|c| s.ratio(c)).collect()
            }
            None => {
                let mut law = vec![Rational::zero(); sigma + 1];
                for e in entries {
                    let slot = match self.class(e, read) {
                        PatternClass::Good(x) => x.index(),
                        PatternClass::Bad(_) => sigma,
                    };
                    law[slot] += &e.weight;
                }
                law
            }
        }
    }

    fn evaluate(&self, target: Target, read: &mut dyn FnMut(usize) -> Symbol) -> OutputDistribution {
        let law = self.sample_law(target, read);
        let mass = aggregate(&law, self.t, self.tie);
        let mut dist = OutputDistribution::zero(self.sigma);
        for (s, m) in mass.iter().enumerate() {
            dist.add_symbol(Symbol(s as u8), m);
        }
        dist
    }

    /// Output distribution together with every coordinate the evaluation read.
    pub fn evaluate_traced(&self, target: Target, word: &Word) -> Result<(OutputDistribution, BTreeSet<usize>)> {
        self.check_target(target)?;
        self.check_word(word)?;
        let mut reads = BTreeSet::new();
        let dist = self.evaluate(target, &mut |j| {
            reads.insert(j);
            word.at(j)
        });
        Ok((dist, reads))
    }
}

/// `t`-fold majority over i.i.d. samples with law `law` (last slot discards).
fn aggregate(law: &[Rational], t: usize, tie: TiePolicy) -> Vec<Rational> {
    let sigma = law.len() - 1;
    let mut out = vec![Rational::zero(); sigma];
    let mut fact = vec![BigInt::one()];
    for i in 1..=t {
        let next = &fact[i - 1] * BigInt::from(i);
        fact.push(next);
    }
    let mut counts = vec![0usize; sigma + 1];
    compositions(&mut counts, 0, t, &mut |c| {
        let mut p = Rational::from_integer(fact[t].clone());
        for (slot, &k) in c.iter().enumerate() {
            if k > 0 {
                if law[slot].is_zero() {
                    return;
                }
                p *= rational::pow(&law[slot], k) / Rational::from_integer(fact[k].clone());
            }
        }
        let winners = TiePolicy::winners(&c[..sigma]);
        match tie {
            TiePolicy::Uniform => {
                let share = p / rational::int(winners.len() as i64);
                for w in winners {
                    out[w] += &share;
                }
            }
            TiePolicy::Lex => out[winners[0]] += p,
        }
    });
    out
}

fn compositions(counts: &mut Vec<usize>, slot: usize, left: usize, f: &mut dyn FnMut(&[usize])) {
    if slot == counts.len() - 1 {
        counts[slot] = left;
        f(counts);
        return;
    }
    for k in 0..=left {
        counts[slot] = k;
        compositions(counts, slot + 1, left - k, f);
    }
}

impl LocalDecoder for DerivedDecoder {
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
        self.t * self.q_effective
    }

    fn targets(&self) -> Vec<Target> {
        self.rules.keys().map(|&t| Target::of(self.family, t)).collect()
    }

    fn output_distribution(&self, target: Target, word: &Word) -> Result<OutputDistribution> {
        self.check_target(target)?;
        self.check_word(word)?;
        Ok(self.evaluate(target, &mut |j| word.at(j)))
    }

    fn sample(&self, target: Target, word: &Word, rng: &mut ChaCha8Rng) -> Result<Output> {
        self.check_target(target)?;
        self.check_word(word)?;
        let entries = &self.rules[&target.index()];
        let weights: Vec<&Rational> = entries.iter().map(|e| &e.weight).collect();
        let mut counts = vec![0usize; self.sigma];
        for _ in 0..self.t {
            let e = &entries[draw_entry(self.scaled[&target.index()].as_ref(), &weights, rng)];
            if let PatternClass::Good(s) = self.class(e, &mut |j| word.at(j)) {
                counts[s.index()] += 1;
            }
        }
        let winners = TiePolicy::winners(&counts);
        let pick = match self.tie {
            TiePolicy::Uniform if winners.len() > 1 => winners[rng.gen_range(0..winners.len())],
            _ => winners[0],
        };
        Ok(Output::Sym(Symbol(pick as u8)))
    }
}

fn derive(code: &Code, decoder: &Decoder, delta: &Rational, t: usize, tie: TiePolicy) -> Result<DerivedDecoder> {
    let sigma = code.sigma();
    let mut rules = BTreeMap::new();
    for target in decoder.targets() {
        let split = heavy_light_split(decoder, target, delta)?;
        let entries = decoder
            .entries(target)?
            .iter()
            .map(|e| {
                Ok(DerivedEntry {
                    weight: e.weight.clone(),
                    rule: derive_rule(e, &split.light_part(&e.query), sigma)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        rules.insert(target.index(), entries);
    }
    DerivedDecoder::new(code, decoder.family(), t, tie, rules)
}

fn require_canonical(code: &Code, decoder: &Decoder) -> Result<()> {
    match canonical_defects(code, decoder)? {
        0 => Ok(()),
        d => Err(Error::NotCanonical(d)),
    }
}

/// Keeps the query distribution, replaces each table by its light-pattern
/// rule, and guesses uniformly on bad patterns.
pub fn derive_ldc_decoder(code: &Code, decoder: &Decoder, delta: &Rational) -> Result<DerivedDecoder> {
    require_canonical(code, decoder)?;
    derive(code, decoder, delta, 1, TiePolicy::Uniform)
}

/// The same construction without the canonicality check, for decoders whose
/// completeness falls short of 1.
pub fn derive_ldc_decoder_unchecked(code: &Code, decoder: &Decoder, delta: &Rational) -> Result<DerivedDecoder> {
    derive(code, decoder, delta, 1, TiePolicy::Uniform)
}

/// Draws `t` query sets, drops bad light patterns, and takes a majority of the rest.
pub fn tq_decoder(code: &Code, decoder: &Decoder, delta: &Rational, t: usize, tie: TiePolicy) -> Result<DerivedDecoder> {
    if t == 0 {
        return Err(Error::BadT(t));
    }
    require_canonical(code, decoder)?;
    derive(code, decoder, delta, t, tie)
}
