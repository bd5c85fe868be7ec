//! Exact quantities behind the analysis of the derived decoder.

use num_traits::Zero;

use crate::codes::{restrict, view_count, view_from_rank, Code, CorruptionSet, Symbol, Word};
use crate::decoder::{canonical_defects, consistent_values, Decoder, Output, RuleEntry, Target};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::transform::{classify_light_pattern, heavy_light_split, is_smoothable_global, HeavyLightSplit};

fn codeword_rank(code: &Code, c: &Word) -> Result<usize> {
    code.decode_exact(c)
        .ok_or_else(|| Error::NotACodeword(c.render(code.alphabet())))
}

/// Indices of the entries whose light view at `c` is a bad pattern.
pub fn nonsmoothable_entries(decoder: &Decoder, c: &Word, split: &HeavyLightSplit, sigma: usize) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for (i, e) in decoder.entries(split.target)?.iter().enumerate() {
        let light = split.light_part(&e.query);
        let a = restrict(c, &light)?;
        if classify_light_pattern(e, &light, &a, sigma)?.is_bad() {
            out.push(i);
        }
    }
    Ok(out)
}

/// Weight of the query sets that are nonsmoothable at codeword `c`.
pub fn ns_mass(code: &Code, decoder: &Decoder, target: Target, c: &Word, delta: &Rational) -> Result<Rational> {
    match canonical_defects(code, decoder)? {
        0 => {}
        d => return Err(Error::NotCanonical(d)),
    }
    codeword_rank(code, c)?;
    let split = heavy_light_split(decoder, target, delta)?;
    let entries = decoder.entries(target)?;
    Ok(nonsmoothable_entries(decoder, c, &split, code.sigma())?
        .into_iter()
        .map(|i| &entries[i].weight)
        .sum())
}

/// Probability that a uniform reassignment of `Q ∩ H`, with the light part
/// of `Q` held at `c`, makes the entry output a wrong symbol.
///
/// The entry must be canonical for `code` and `Q` must be nonsmoothable at
/// `c`; under those conditions the result is at least `|Σ|^-|Q∩H|`.
pub fn fooling_probability(
    code: &Code,
    entry: &RuleEntry,
    target: Target,
    c: &Word,
    split: &HeavyLightSplit,
) -> Result<Rational> {
    let m = codeword_rank(code, c)?;
    let light = split.light_part(&entry.query);
    if is_smoothable_global(code, target, c, &entry.query, &light)? {
        return Err(Error::NotNonsmoothable(entry.query.clone()));
    }
    let sigma = code.sigma();
    let defects = consistent_values(code, target, &entry.query)?
        .iter()
        .zip(&entry.table)
        .filter(|(set, out)| match set.len() {
            0 => **out != Output::Bot,
            1 => **out != Output::Sym(*set.iter().next().unwrap()),
            _ => true,
        })
        .count();
    if defects > 0 {
        return Err(Error::NotCanonical(defects));
    }
    let truth = target.value(code, m);
    let heavy = split.heavy_part(&entry.query);
    let total = view_count(sigma, heavy.len())?;
    let mut fooled = 0usize;
    let mut view: Vec<Symbol> = entry.query.iter().map(|&j| c.at(j)).collect();
    let heavy_pos: Vec<usize> = heavy
        .iter()
        .map(|h| entry.query.iter().position(|q| q == h).expect("heavy part of query"))
        .collect();
    for r in 0..total {
        for (&p, s) in heavy_pos.iter().zip(view_from_rank(r, heavy.len(), sigma)) {
            view[p] = s;
        }
        if matches!(entry.output(&view, sigma), Output::Sym(x) if x != truth) {
            fooled += 1;
        }
    }
    let p = rational::rat(fooled as i64, total as i64);
    assert!(p >= rational::rat(1, total as i64), "fooling probability below |Σ|^-|Q∩H|");
    Ok(p)
}

/// `Pr_Q[(Q ∩ L) ∩ err ≠ ∅]`, checked against `|err| q / (δn)`.
pub fn light_corruption_prob(decoder: &Decoder, err: &CorruptionSet, split: &HeavyLightSplit) -> Result<Rational> {
    let mut p = Rational::zero();
    for e in decoder.entries(split.target)? {
        if split.light_part(&e.query).iter().any(|j| err.coords().contains(j)) {
            p += &e.weight;
        }
    }
    let limit = rational::int(err.len() as i64) * split.threshold();
    assert!(p <= limit, "light corruption probability exceeds |err| q/(δn)");
    Ok(p)
}
