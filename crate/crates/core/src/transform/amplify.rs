//! Product decoders over t-tuples of rule entries.

use std::collections::BTreeMap;

use num_integer::Integer;

use crate::codes::{view_count, view_from_rank, Code, Symbol};
use crate::decoder::{Decoder, LocalDecoder, Output, RuleEntry};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

use super::derived::TiePolicy;

/// Default cap on product entries per target.
pub const DEFAULT_ENTRY_BUDGET: u128 = 1 << 20;

struct Tuple {
    weight: Rational,
    query: Vec<usize>,
    /// For each member, the positions of its query inside `query`.
    members: Vec<(usize, Vec<usize>)>,
}

fn tuples(entries: &[RuleEntry], t: usize, budget: u128) -> Result<Vec<Tuple>> {
    let count = (entries.len() as u128).checked_pow(t as u32).unwrap_or(u128::MAX);
    if count > budget {
        return Err(Error::EntryExplosion { entries: count, budget });
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut idx = vec![0usize; t];
    loop {
        let mut query: Vec<usize> = idx.iter().flat_map(|&i| entries[i].query.iter().copied()).collect();
        query.sort_unstable();
        query.dedup();
        let members = idx
            .iter()
            .map(|&i| {
                let pos = entries[i]
                    .query
                    .iter()
                    .map(|c| query.binary_search(c).expect("member coordinate in union"))
                    .collect();
                (i, pos)
            })
            .collect();
        let weight = idx.iter().map(|&i| &entries[i].weight).product();
        out.push(Tuple { weight, query, members });
        let mut k = t;
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < entries.len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

fn member_outputs<'a>(
    entries: &'a [RuleEntry],
    tuple: &'a Tuple,
    view: &'a [Symbol],
    sigma: usize,
) -> impl Iterator<Item = Output> + 'a {
    tuple.members.iter().map(move |(i, pos)| {
        let sub: Vec<Symbol> = pos.iter().map(|&p| view[p]).collect();
        entries[*i].output(&sub, sigma)
    })
}

fn check_t(t: usize) -> Result<()> {
    if t == 0 {
        Err(Error::BadT(t))
    } else {
        Ok(())
    }
}

/// Runs the decoder `t` times and keeps a symbol only if every run agrees on it.
pub fn amplify_rldc_repeat(code: &Code, decoder: &Decoder, t: usize, budget: u128) -> Result<Decoder> {
    check_t(t)?;
    let sigma = code.sigma();
    let mut rules = BTreeMap::new();
    for (&target, entries) in decoder.rules() {
        let mut product = Vec::new();
        for tuple in tuples(entries, t, budget)? {
            let size = view_count(sigma, tuple.query.len())?;
            let table = (0..size)
                .map(|r| {
                    let view = view_from_rank(r, tuple.query.len(), sigma);
                    let mut outs = member_outputs(entries, &tuple, &view, sigma);
                    let first = outs.next().expect("t >= 1");
                    match first {
                        Output::Sym(_) if outs.all(|o| o == first) => first,
                        _ => Output::Bot,
                    }
                })
                .collect();
            product.push(RuleEntry {
                weight: tuple.weight,
                query: tuple.query,
                table,
            });
        }
        rules.insert(target, product);
    }
    Decoder::new(code, t * decoder.q(), decoder.family(), rules)
}

/// Majority of `t` independent runs of a decoder that never outputs ⊥.
///
/// With the uniform policy a tuple whose views tie is split into `L` equal
/// copies, `L` the lcm of the tie sizes, so the tie is broken exactly.
pub fn amplify_ldc_majority(code: &Code, decoder: &Decoder, t: usize, tie: TiePolicy, budget: u128) -> Result<Decoder> {
    check_t(t)?;
    for (&target, entries) in decoder.rules() {
        if entries.iter().any(|e| e.table.contains(&Output::Bot)) {
            return Err(Error::HasBotOutputs { target });
        }
    }
    let sigma = code.sigma();
    let mut rules = BTreeMap::new();
    for (&target, entries) in decoder.rules() {
        let mut product = Vec::new();
        for tuple in tuples(entries, t, budget)? {
            let size = view_count(sigma, tuple.query.len())?;
            let winners: Vec<Vec<usize>> = (0..size)
                .map(|r| {
                    let view = view_from_rank(r, tuple.query.len(), sigma);
                    let mut counts = vec![0usize; sigma];
                    for o in member_outputs(entries, &tuple, &view, sigma) {
                        if let Output::Sym(s) = o {
                            counts[s.index()] += 1;
                        }
                    }
                    TiePolicy::winners(&counts)
                })
                .collect();
            let copies = match tie {
                TiePolicy::Lex => 1,
                TiePolicy::Uniform => winners.iter().fold(1usize, |l, w| l.lcm(&w.len())),
            };
            let weight = &tuple.weight / rational::int(copies as i64);
            for r in 0..copies {
                let table = winners.iter().map(|w| Output::Sym(Symbol(w[r % w.len()] as u8))).collect();
                product.push(RuleEntry {
                    weight: weight.clone(),
                    query: tuple.query.clone(),
                    table,
                });
            }
            if product.len() as u128 > budget {
                return Err(Error::EntryExplosion {
                    entries: product.len() as u128,
                    budget,
                });
            }
        }
        rules.insert(target, product);
    }
    Decoder::new(code, t * decoder.queries(), decoder.family(), rules)
}
