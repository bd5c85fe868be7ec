//! Good/bad light patterns and codeword-dependent smoothability.

use crate::codes::{view_count, view_from_rank, view_rank, Code, Symbol, Word};
use crate::decoder::{Output, RuleEntry, Target};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BadReason {
    /// Two completions give different non-⊥ symbols.
    Conflict,
    /// Every completion gives ⊥.
    AllBot,
    /// Loaded from a file that only records "uniform".
    Unlabeled,
}

impl BadReason {
    pub fn name(self) -> &'static str {
        match self {
            BadReason::Conflict => "conflict",
            BadReason::AllBot => "all-bot",
            BadReason::Unlabeled => "unlabeled",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PatternClass {
    Good(Symbol),
    Bad(BadReason),
}

impl PatternClass {
    pub fn is_good(self) -> bool {
        matches!(self, PatternClass::Good(_))
    }

    pub fn is_bad(self) -> bool {
        !self.is_good()
    }
}

/// Positions of `light` inside `query`, or `NotSubset`.
pub(crate) fn positions(query: &[usize], light: &[usize]) -> Result<Vec<usize>> {
    light
        .iter()
        .map(|c| query.iter().position(|q| q == c))
        .collect::<Option<Vec<_>>>()
        .filter(|p| p.windows(2).all(|w| w[0] < w[1]))
        .ok_or_else(|| Error::NotSubset {
            sub: light.to_vec(),
            query: query.to_vec(),
        })
}

#[derive(Clone, Copy)]
enum Seen {
    Nothing,
    One(Symbol),
    Conflict,
}

impl Seen {
    fn push(self, out: Output) -> Self {
        match (self, out) {
            (s, Output::Bot) => s,
            (Seen::Nothing, Output::Sym(x)) => Seen::One(x),
            (Seen::One(y), Output::Sym(x)) if x == y => Seen::One(y),
            _ => Seen::Conflict,
        }
    }

    fn class(self) -> PatternClass {
        match self {
            Seen::Nothing => PatternClass::Bad(BadReason::AllBot),
            Seen::One(s) => PatternClass::Good(s),
            Seen::Conflict => PatternClass::Bad(BadReason::Conflict),
        }
    }
}

/// Classifies light pattern `a` of `entry` by scanning all completions on
/// the remaining query coordinates.
pub fn classify_light_pattern(entry: &RuleEntry, light: &[usize], a: &[Symbol], sigma: usize) -> Result<PatternClass> {
    if a.len() != light.len() {
        return Err(Error::ViewLengthMismatch {
            expected: light.len(),
            actual: a.len(),
        });
    }
    let pos = positions(&entry.query, light)?;
    let free: Vec<usize> = (0..entry.query.len()).filter(|i| !pos.contains(i)).collect();
    let mut view = vec![Symbol(0); entry.query.len()];
    for (&p, &s) in pos.iter().zip(a) {
        view[p] = s;
    }
    let mut seen = Seen::Nothing;
    for r in 0..view_count(sigma, free.len())? {
        for (&p, s) in free.iter().zip(view_from_rank(r, free.len(), sigma)) {
            view[p] = s;
        }
        seen = seen.push(entry.output(&view, sigma));
    }
    Ok(seen.class())
}

/// `g_Q`: the totalized rule reading only the light coordinates of `Q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivedRule {
    pub query: Vec<usize>,
    pub light: Vec<usize>,
    /// Indexed by the rank of the light view.
    pub pattern_map: Vec<PatternClass>,
}

impl DerivedRule {
    pub fn class_of(&self, light_view: &[Symbol], sigma: usize) -> PatternClass {
        self.pattern_map[view_rank(light_view.iter().copied(), sigma)]
    }
}

/// Builds the pattern map for every light view in one pass over the table.
pub fn derive_rule(entry: &RuleEntry, light: &[usize], sigma: usize) -> Result<DerivedRule> {
    let pos = positions(&entry.query, light)?;
    let mut seen = vec![Seen::Nothing; view_count(sigma, light.len())?];
    for (r, &out) in entry.table.iter().enumerate() {
        let view = view_from_rank(r, entry.query.len(), sigma);
        let a = view_rank(pos.iter().map(|&p| view[p]), sigma);
        seen[a] = seen[a].push(out);
    }
    Ok(DerivedRule {
        query: entry.query.clone(),
        light: light.to_vec(),
        pattern_map: seen.into_iter().map(Seen::class).collect(),
    })
}

/// Whether `c|_{Q∩L}` pins down the target value among all codewords.
pub fn is_smoothable_global(code: &Code, target: Target, c: &Word, query: &[usize], light: &[usize]) -> Result<bool> {
    let m = code
        .decode_exact(c)
        .ok_or_else(|| Error::NotACodeword(c.render(code.alphabet())))?;
    target.check(code)?;
    let truth = target.value(code, m);
    let ql: Vec<usize> = query.iter().copied().filter(|j| light.contains(j)).collect();
    Ok(code.codewords().iter().enumerate().all(|(other, cw)| {
        ql.iter().any(|&j| cw.at(j) != c.at(j)) || target.value(code, other) == truth
    }))
}
