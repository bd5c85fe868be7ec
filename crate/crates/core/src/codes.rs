//! Alphabets, explicit codebooks, Hamming geometry and corruption balls.
//!
//! Coordinates are 1-based throughout. Messages and local views are ranked
//! big-endian in alphabet order, so rank order equals lexicographic order of
//! their rendered strings.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest block length handled by exact enumeration.
pub const MAX_BLOCK_LENGTH: usize = 24;
/// Largest codebook handled by exact enumeration.
pub const MAX_CODEBOOK: usize = 1 << 16;

/// Index of a symbol within its alphabet.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(pub u8);

impl Symbol {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<char>,
}

impl Alphabet {
    pub fn new(symbols: Vec<char>) -> Result<Self> {
        if symbols.len() < 2 || symbols.len() > u8::MAX as usize {
            return Err(Error::BadAlphabet(format!("{} symbols", symbols.len())));
        }
        for (i, c) in symbols.iter().enumerate() {
            if symbols[..i].contains(c) {
                return Err(Error::BadAlphabet(format!("duplicate symbol {c:?}")));
            }
        }
        Ok(Self { symbols })
    }

    pub fn binary() -> Self {
        Self {
            symbols: vec!['0', '1'],
        }
    }

    pub fn size(&self) -> usize {
        self.symbols.len()
    }

    pub fn chars(&self) -> &[char] {
        &self.symbols
    }

    pub fn char_of(&self, s: Symbol) -> char {
        self.symbols[s.index()]
    }

    pub fn symbol_of(&self, c: char) -> Option<Symbol> {
        self.symbols.iter().position(|&x| x == c).map(|i| Symbol(i as u8))
    }

    pub fn all(&self) -> impl Iterator<Item = Symbol> + '_ {
        (0..self.symbols.len()).map(|i| Symbol(i as u8))
    }

    /// Parses a string of symbols; `context` names the field for error messages.
    pub fn parse(&self, text: &str, context: &str) -> Result<Vec<Symbol>> {
        text.chars()
            .map(|c| {
                self.symbol_of(c).ok_or_else(|| Error::BadSymbol {
                    symbol: c.to_string(),
                    context: context.to_string(),
                })
            })
            .collect()
    }

    pub fn render(&self, symbols: &[Symbol]) -> String {
        symbols.iter().map(|&s| self.char_of(s)).collect()
    }
}

/// A word over an alphabet. Symbols are stored as alphabet indices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn new(alphabet: &Alphabet, symbols: Vec<Symbol>) -> Result<Self> {
        if let Some(s) = symbols.iter().find(|s| s.index() >= alphabet.size()) {
            return Err(Error::BadSymbol {
                symbol: format!("#{}", s.0),
                context: "word".into(),
            });
        }
        Ok(Self(symbols))
    }

    pub fn parse(alphabet: &Alphabet, text: &str, len: usize) -> Result<Self> {
        let symbols = alphabet.parse(text, "word")?;
        if symbols.len() != len {
            return Err(Error::length(format!("word {text:?}"), len, symbols.len()));
        }
        Ok(Self(symbols))
    }

    pub(crate) fn from_raw(symbols: Vec<Symbol>) -> Self {
        Self(symbols)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    /// Symbol at a 1-based coordinate.
    pub fn at(&self, coord: usize) -> Symbol {
        self.0[coord - 1]
    }

    pub fn render(&self, alphabet: &Alphabet) -> String {
        alphabet.render(&self.0)
    }

    /// Coordinates (1-based) where `self` and `other` differ.
    pub fn diff(&self, other: &Word) -> Vec<usize> {
        self.0
            .iter()
            .zip(&other.0)
            .enumerate()
            .filter(|(_, (a, b))| a != b)
            .map(|(i, _)| i + 1)
            .collect()
    }
}

/// Set of corrupted coordinates together with the radius it was drawn under.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorruptionSet {
    coords: Vec<usize>,
    radius: usize,
}

impl CorruptionSet {
    pub fn new(coords: Vec<usize>, radius: usize, n: usize) -> Result<Self> {
        if coords.len() > radius {
            return Err(Error::length("corruption set vs radius", radius, coords.len()));
        }
        check_coords(&coords, n)?;
        Ok(Self { coords, radius })
    }

    pub fn coords(&self) -> &[usize] {
        &self.coords
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }
}

/// Checks that `coords` is strictly increasing and inside `[1, n]`.
pub fn check_coords(coords: &[usize], n: usize) -> Result<()> {
    for (i, &c) in coords.iter().enumerate() {
        if c == 0 || c > n {
            return Err(Error::CoordOutOfRange { coord: c, n });
        }
        if i > 0 && coords[i - 1] >= c {
            return Err(Error::BadQuery(coords.to_vec()));
        }
    }
    Ok(())
}

/// Big-endian rank of a view.
pub fn view_rank(view: impl IntoIterator<Item = Symbol>, sigma: usize) -> usize {
    view.into_iter().fold(0, |acc, s| acc * sigma + s.index())
}

/// Inverse of [`view_rank`].
pub fn view_from_rank(mut rank: usize, len: usize, sigma: usize) -> Vec<Symbol> {
    let mut out = vec![Symbol(0); len];
    for slot in out.iter_mut().rev() {
        *slot = Symbol((rank % sigma) as u8);
        rank /= sigma;
    }
    out
}

/// `sigma^len`, failing on overflow of the exact-enumeration limits.
pub fn view_count(sigma: usize, len: usize) -> Result<usize> {
    let mut acc: usize = 1;
    for _ in 0..len {
        acc = acc
            .checked_mul(sigma)
            .filter(|&v| v <= 1 << 24)
            .ok_or_else(|| Error::CodeTooLarge(format!("{sigma}^{len} views")))?;
    }
    Ok(acc)
}

/// `x|_S` with `S` given as 1-based strictly increasing coordinates.
pub fn restrict(word: &Word, coords: &[usize]) -> Result<Vec<Symbol>> {
    check_coords(coords, word.len())?;
    Ok(coords.iter().map(|&c| word.at(c)).collect())
}

pub fn hamming_distance(x: &Word, y: &Word) -> Result<usize> {
    if x.len() != y.len() {
        return Err(Error::length("hamming distance", x.len(), y.len()));
    }
    Ok(x.0.iter().zip(&y.0).filter(|(a, b)| a != b).count())
}

/// On-disk description of a code.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeFile {
    pub sigma: Vec<String>,
    pub k: usize,
    pub n: usize,
    pub codebook: BTreeMap<String, String>,
}

/// An explicit code `C : Sigma^k -> Sigma^n` with its cached minimum distance.
#[derive(Clone, Debug)]
pub struct Code {
    alphabet: Alphabet,
    k: usize,
    n: usize,
    messages: Vec<Word>,
    codewords: Vec<Word>,
    lookup: HashMap<Word, usize>,
    distance: Option<usize>,
}

impl PartialEq for Code {
    fn eq(&self, other: &Self) -> bool {
        self.alphabet == other.alphabet
            && self.k == other.k
            && self.n == other.n
            && self.codewords == other.codewords
    }
}

impl Code {
    /// Builds a code from codewords listed in message-rank order.
    pub fn from_codewords(alphabet: Alphabet, k: usize, n: usize, codewords: Vec<Word>) -> Result<Self> {
        if n == 0 || n > MAX_BLOCK_LENGTH {
            return Err(Error::CodeTooLarge(format!("block length {n}")));
        }
        let sigma = alphabet.size();
        let count = sigma
            .checked_pow(k as u32)
            .filter(|&c| c <= MAX_CODEBOOK)
            .ok_or_else(|| Error::CodeTooLarge(format!("{sigma}^{k} messages")))?;
        if codewords.len() != count {
            let missing = view_from_rank(codewords.len().min(count - 1), k, sigma);
            return Err(Error::MissingMessage(alphabet.render(&missing)));
        }
        let messages: Vec<Word> = (0..count)
            .map(|r| Word(view_from_rank(r, k, sigma)))
            .collect();
        let mut lookup = HashMap::with_capacity(count);
        for (m, cw) in codewords.iter().enumerate() {
            if cw.len() != n {
                return Err(Error::length(
                    format!("codeword for {}", messages[m].render(&alphabet)),
                    n,
                    cw.len(),
                ));
            }
            if cw.0.iter().any(|s| s.index() >= sigma) {
                return Err(Error::BadSymbol {
                    symbol: "?".into(),
                    context: format!("codeword for {}", messages[m].render(&alphabet)),
                });
            }
            if let Some(prev) = lookup.insert(cw.clone(), m) {
                return Err(Error::NotInjective(
                    messages[prev].render(&alphabet),
                    messages[m].render(&alphabet),
                ));
            }
        }
        let distance = pairwise_min(&codewords);
        Ok(Self {
            alphabet,
            k,
            n,
            messages,
            codewords,
            lookup,
            distance,
        })
    }

    /// Validates a parsed code file.
    pub fn from_file(file: &CodeFile) -> Result<Self> {
        let mut chars = Vec::with_capacity(file.sigma.len());
        for s in &file.sigma {
            let mut it = s.chars();
            match (it.next(), it.next()) {
                (Some(c), None) => chars.push(c),
                _ => return Err(Error::BadAlphabet(format!("token {s:?} is not a single character"))),
            }
        }
        let alphabet = Alphabet::new(chars)?;
        let sigma = alphabet.size();
        if file.n == 0 || file.n > MAX_BLOCK_LENGTH {
            return Err(Error::CodeTooLarge(format!("block length {}", file.n)));
        }
        let count = sigma
            .checked_pow(file.k as u32)
            .filter(|&c| c <= MAX_CODEBOOK)
            .ok_or_else(|| Error::CodeTooLarge(format!("{sigma}^{} messages", file.k)))?;
        let mut slots: Vec<Option<Word>> = vec![None; count];
        for (msg, cw) in &file.codebook {
            let m = alphabet.parse(msg, &format!("codebook key {msg:?}"))?;
            if m.len() != file.k {
                return Err(Error::length(format!("message {msg:?}"), file.k, m.len()));
            }
            let c = alphabet.parse(cw, &format!("codeword for {msg:?}"))?;
            if c.len() != file.n {
                return Err(Error::length(format!("codeword for {msg:?}"), file.n, c.len()));
            }
            slots[view_rank(m, sigma)] = Some(Word(c));
        }
        let mut codewords = Vec::with_capacity(count);
        for (r, slot) in slots.into_iter().enumerate() {
            match slot {
                Some(w) => codewords.push(w),
                None => {
                    return Err(Error::MissingMessage(
                        alphabet.render(&view_from_rank(r, file.k, sigma)),
                    ))
                }
            }
        }
        Self::from_codewords(alphabet, file.k, file.n, codewords)
    }

    pub fn to_file(&self) -> CodeFile {
        CodeFile {
            sigma: self.alphabet.chars().iter().map(|c| c.to_string()).collect(),
            k: self.k,
            n: self.n,
            codebook: self
                .messages
                .iter()
                .zip(&self.codewords)
                .map(|(m, c)| (m.render(&self.alphabet), c.render(&self.alphabet)))
                .collect(),
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn sigma(&self) -> usize {
        self.alphabet.size()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.codewords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codewords.is_empty()
    }

    pub fn messages(&self) -> &[Word] {
        &self.messages
    }

    pub fn codewords(&self) -> &[Word] {
        &self.codewords
    }

    pub fn message(&self, rank: usize) -> &Word {
        &self.messages[rank]
    }

    pub fn codeword(&self, rank: usize) -> &Word {
        &self.codewords[rank]
    }

    /// Message rank of a codeword, if it is one.
    pub fn decode_exact(&self, word: &Word) -> Option<usize> {
        self.lookup.get(word).copied()
    }

    /// Cached minimum distance; `None` for single-codeword codes.
    pub fn distance(&self) -> Option<usize> {
        self.distance
    }

    pub fn parse_word(&self, text: &str) -> Result<Word> {
        Word::parse(&self.alphabet, text, self.n)
    }

    pub fn parse_message(&self, text: &str) -> Result<usize> {
        let m = Word::parse(&self.alphabet, text, self.k)?;
        Ok(view_rank(m.0.iter().copied(), self.sigma()))
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "code(sigma={}, k={}, n={}", self.sigma(), self.k, self.n)?;
        match self.distance {
            Some(d) => write!(f, ", d={d})"),
            None => write!(f, ")"),
        }
    }
}

fn pairwise_min(codewords: &[Word]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, a) in codewords.iter().enumerate() {
        for b in &codewords[i + 1..] {
            let d = a.0.iter().zip(&b.0).filter(|(x, y)| x != y).count();
            best = Some(best.map_or(d, |m| m.min(d)));
        }
    }
    best
}

/// Recomputes the minimum pairwise distance from scratch.
pub fn code_distance(code: &Code) -> Result<usize> {
    pairwise_min(code.codewords()).ok_or(Error::EmptyPairSet)
}

/// `sum_{j<=r} C(n,j) (sigma-1)^j`.
pub fn ball_size(n: usize, sigma: usize, radius: usize) -> u128 {
    let mut total: u128 = 0;
    let mut binom: u128 = 1;
    let mut power: u128 = 1;
    for j in 0..=radius.min(n) {
        if j > 0 {
            binom = binom * (n - j + 1) as u128 / j as u128;
            power *= (sigma - 1) as u128;
        }
        total += binom * power;
    }
    total
}

/// Every word within Hamming distance `radius` of `center`, once each,
/// ordered by distance, then coordinate set, then replacement symbols.
pub fn enumerate_ball(center: &Word, radius: usize, sigma: usize) -> Result<Ball> {
    if radius > center.len() {
        return Err(Error::RadiusTooLarge {
            radius,
            n: center.len(),
        });
    }
    Ok(Ball {
        center: center.clone(),
        sigma,
        radius,
        dist: 0,
        coords: Vec::new(),
        offsets: Vec::new(),
        started: false,
        done: false,
    })
}

/// Iterator returned by [`enumerate_ball`].
#[derive(Clone, Debug)]
pub struct Ball {
    center: Word,
    sigma: usize,
    radius: usize,
    dist: usize,
    // 0-based positions of the current coordinate set
    coords: Vec<usize>,
    // per coordinate, which of the sigma-1 replacement symbols is in use
    offsets: Vec<usize>,
    started: bool,
    done: bool,
}

impl Ball {
    fn emit(&self) -> (Word, CorruptionSet) {
        let mut w = self.center.0.clone();
        for (&c, &o) in self.coords.iter().zip(&self.offsets) {
            let orig = w[c].index();
            // o-th symbol of the alphabet skipping the original
            let s = if o < orig { o } else { o + 1 };
            w[c] = Symbol(s as u8);
        }
        let set = CorruptionSet {
            coords: self.coords.iter().map(|c| c + 1).collect(),
            radius: self.radius,
        };
        (Word(w), set)
    }

    fn advance_offsets(&mut self) -> bool {
        for o in self.offsets.iter_mut().rev() {
            *o += 1;
            if *o < self.sigma - 1 {
                return true;
            }
            *o = 0;
        }
        false
    }

    fn advance_coords(&mut self) -> bool {
        let n = self.center.len();
        let j = self.coords.len();
        for i in (0..j).rev() {
            if self.coords[i] < n - (j - i) {
                self.coords[i] += 1;
                for t in i + 1..j {
                    self.coords[t] = self.coords[t - 1] + 1;
                }
                return true;
            }
        }
        false
    }

    fn start_distance(&mut self, d: usize) {
        self.dist = d;
        self.coords = (0..d).collect();
        self.offsets = vec![0; d];
    }
}

impl Iterator for Ball {
    type Item = (Word, CorruptionSet);

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            self.start_distance(0);
            return Some(self.emit());
        }
        if self.dist > 0 && self.advance_offsets() {
            return Some(self.emit());
        }
        if self.dist > 0 && self.advance_coords() {
            self.offsets.iter_mut().for_each(|o| *o = 0);
            return Some(self.emit());
        }
        if self.dist < self.radius && self.sigma > 1 {
            self.start_distance(self.dist + 1);
            return Some(self.emit());
        }
        self.done = true;
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bin(text: &str) -> Word {
        Word::parse(&Alphabet::binary(), text, text.len()).unwrap()
    }

    fn file(pairs: &[(&str, &str)], k: usize, n: usize) -> CodeFile {
        CodeFile {
            sigma: vec!["0".into(), "1".into()],
            k,
            n,
            codebook: pairs.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect(),
        }
    }

    #[test]
    fn rep3_and_had4_distances() {
        let rep3 = Code::from_file(&file(&[("0", "000"), ("1", "111")], 1, 3)).unwrap();
        assert_eq!((rep3.k(), rep3.n(), rep3.distance()), (1, 3, Some(3)));
        assert_eq!(code_distance(&rep3).unwrap(), 3);
        let had4 = Code::from_file(&file(
            &[("00", "0000"), ("01", "0101"), ("10", "0011"), ("11", "0110")],
            2,
            4,
        ))
        .unwrap();
        assert_eq!((had4.k(), had4.n(), had4.distance()), (2, 4, Some(2)));
        assert_eq!(code_distance(&had4).unwrap(), 2);
    }

    #[test]
    fn codebook_errors() {
        let missing = file(&[("00", "0000"), ("01", "0101"), ("10", "0011")], 2, 4);
        assert!(matches!(Code::from_file(&missing), Err(Error::MissingMessage(m)) if m == "11"));
        let bad = file(&[("0", "002"), ("1", "111")], 1, 3);
        assert!(matches!(Code::from_file(&bad), Err(Error::BadSymbol { .. })));
        let short = file(&[("0", "00"), ("1", "111")], 1, 3);
        assert!(matches!(Code::from_file(&short), Err(Error::LengthMismatch { .. })));
        let clash = file(&[("0", "111"), ("1", "111")], 1, 3);
        assert!(matches!(Code::from_file(&clash), Err(Error::NotInjective(..))));
    }

    #[test]
    fn single_codeword_has_no_distance() {
        let c = Code::from_file(&file(&[("", "01")], 0, 2)).unwrap();
        assert_eq!(c.distance(), None);
        assert!(matches!(code_distance(&c), Err(Error::EmptyPairSet)));
    }

    #[test]
    fn unknown_fields_rejected() {
        let text = r#"{"sigma":["0","1"],"k":1,"n":1,"codebook":{"0":"0","1":"1"},"extra":1}"#;
        assert!(serde_json::from_str::<CodeFile>(text).is_err());
    }

    #[test]
    fn hamming_examples() {
        assert_eq!(hamming_distance(&bin("000"), &bin("000")).unwrap(), 0);
        assert_eq!(hamming_distance(&bin("0000"), &bin("0101")).unwrap(), 2);
        assert_eq!(hamming_distance(&bin("000"), &bin("111")).unwrap(), 3);
        assert!(hamming_distance(&bin("00"), &bin("000")).is_err());
    }

    #[test]
    fn ball_examples() {
        let words: Vec<String> = enumerate_ball(&bin("000"), 0, 2)
            .unwrap()
            .map(|(w, _)| w.render(&Alphabet::binary()))
            .collect();
        assert_eq!(words, ["000"]);
        let words: Vec<String> = enumerate_ball(&bin("000"), 1, 2)
            .unwrap()
            .map(|(w, _)| w.render(&Alphabet::binary()))
            .collect();
        assert_eq!(words, ["000", "100", "010", "001"]);
        assert_eq!(enumerate_ball(&bin("0000"), 2, 2).unwrap().count(), 11);
        assert!(matches!(
            enumerate_ball(&bin("000"), 4, 2),
            Err(Error::RadiusTooLarge { .. })
        ));
    }

    #[test]
    fn ball_reports_corruption_sets() {
        for (w, set) in enumerate_ball(&bin("0110"), 2, 2).unwrap() {
            assert_eq!(w.diff(&bin("0110")), set.coords());
            assert_eq!(set.radius(), 2);
        }
    }

    #[test]
    fn ternary_ball_order() {
        let a = Alphabet::new(vec!['a', 'b', 'c']).unwrap();
        let center = Word::parse(&a, "ab", 2).unwrap();
        let words: Vec<String> = enumerate_ball(&center, 2, 3)
            .unwrap()
            .map(|(w, _)| w.render(&a))
            .collect();
        assert_eq!(words, ["ab", "bb", "cb", "aa", "ac", "ba", "bc", "ca", "cc"]);
    }

    #[test]
    fn restrict_examples() {
        let a = Alphabet::binary();
        assert_eq!(a.render(&restrict(&bin("0110"), &[1, 3]).unwrap()), "01");
        assert_eq!(a.render(&restrict(&bin("0110"), &[1, 2, 3, 4]).unwrap()), "0110");
        assert_eq!(a.render(&restrict(&bin("111"), &[2]).unwrap()), "1");
        assert!(restrict(&bin("111"), &[2, 1]).is_err());
        assert!(restrict(&bin("111"), &[4]).is_err());
    }

    #[test]
    fn view_rank_round_trip() {
        for r in 0..27 {
            assert_eq!(view_rank(view_from_rank(r, 3, 3), 3), r);
        }
    }
}
