//! JSON formats for codes, decoders and derived decoders, plus atomic writes.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::codes::{view_count, view_from_rank, view_rank, Code, CodeFile, Symbol, Word};
use crate::decoder::{Decoder, LocalDecoder, Output, OutputDistribution, RuleEntry, Target, TargetFamily};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::transform::{BadReason, DerivedDecoder, DerivedEntry, DerivedRule, PatternClass, TiePolicy};

/// Either kind of decoder file.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyDecoder {
    Relaxed(Decoder),
    Derived(DerivedDecoder),
}

impl AnyDecoder {
    fn inner(&self) -> &dyn LocalDecoder {
        match self {
            AnyDecoder::Relaxed(d) => d,
            AnyDecoder::Derived(d) => d,
        }
    }
}

impl LocalDecoder for AnyDecoder {
    fn family(&self) -> TargetFamily {
        self.inner().family()
    }

    fn sigma(&self) -> usize {
        self.inner().sigma()
    }

    fn n(&self) -> usize {
        self.inner().n()
    }

    fn queries(&self) -> usize {
        self.inner().queries()
    }

    fn targets(&self) -> Vec<Target> {
        self.inner().targets()
    }

    fn output_distribution(&self, target: Target, word: &Word) -> Result<OutputDistribution> {
        self.inner().output_distribution(target, word)
    }

    fn sample(&self, target: Target, word: &Word, rng: &mut ChaCha8Rng) -> Result<crate::decoder::Output> {
        self.inner().sample(target, word, rng)
    }

    fn failure(&self, target: Target, word: &Word, truth: Symbol, relaxed: bool) -> Result<Rational> {
        self.inner().failure(target, word, truth, relaxed)
    }
}

/// Pretty JSON with sorted keys and a trailing LF.
pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_json(path: &Path) -> Result<Value> {
    serde_json::from_str(&read_text(path)?).map_err(|e| Error::Malformed {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

/// Writes through a temporary file in the same directory, then renames it into place.
pub fn write_atomic(path: &Path, text: &str) -> Result<()> {
    let io = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().ok_or_else(|| {
        io(std::io::Error::new(std::io::ErrorKind::InvalidInput, "path has no file name"))
    })?;
    let tmp = dir.join(format!(".{}.tmp-{}", name.to_string_lossy(), std::process::id()));
    fs::write(&tmp, text).map_err(io)?;
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        io(e)
    })
}

pub fn code_to_json(code: &Code) -> Value {
    serde_json::to_value(code.to_file()).expect("code files always serialize")
}

pub fn code_from_json(v: &Value, path: &str) -> Result<Code> {
    let file: CodeFile = serde_json::from_value(v.clone()).map_err(|e| Error::Malformed {
        path: path.to_string(),
        message: e.to_string(),
    })?;
    Code::from_file(&file)
}

pub fn load_code(path: &Path) -> Result<Code> {
    code_from_json(&read_json(path)?, &path.display().to_string())
}

fn malformed(path: &str, message: impl Into<String>) -> Error {
    Error::Malformed {
        path: path.to_string(),
        message: message.into(),
    }
}

fn only_fields(v: &Value, allowed: &[&str], path: &str, at: &str) -> Result<()> {
    let obj = v
        .as_object()
        .ok_or_else(|| malformed(path, format!("{at}: expected an object")))?;
    for k in obj.keys() {
        if !allowed.contains(&k.as_str()) {
            return Err(malformed(path, format!("{at}: unknown field `{k}`")));
        }
    }
    Ok(())
}

fn field<'a>(v: &'a Value, name: &str, path: &str, at: &str) -> Result<&'a Value> {
    v.get(name)
        .ok_or_else(|| malformed(path, format!("{at}: missing field `{name}`")))
}

fn uint_field(v: &Value, name: &str, path: &str, at: &str) -> Result<usize> {
    field(v, name, path, at)?
        .as_u64()
        .map(|u| u as usize)
        .ok_or_else(|| malformed(path, format!("{at}.{name}: expected a nonnegative integer")))
}

fn coords_field(v: &Value, name: &str, path: &str, at: &str) -> Result<Vec<usize>> {
    field(v, name, path, at)?
        .as_array()
        .and_then(|a| a.iter().map(|x| x.as_u64().map(|u| u as usize)).collect())
        .ok_or_else(|| malformed(path, format!("{at}.{name}: expected a list of coordinates")))
}

fn weight_field(v: &Value, path: &str, at: &str) -> Result<Rational> {
    rational::from_json(field(v, "weight", path, at)?)
        .ok_or_else(|| malformed(path, format!("{at}.weight: expected [num, den]")))
}

fn family_field(v: &Value, path: &str) -> Result<TargetFamily> {
    field(v, "target_kind", path, "decoder")?
        .as_str()
        .and_then(TargetFamily::parse)
        .ok_or_else(|| malformed(path, "decoder.target_kind: expected \"message\" or \"codeword\""))
}

/// Reads a `view string -> value` object into a total table over `len` coordinates.
#[allow(clippy::too_many_arguments)]
fn view_map<T>(
    code: &Code,
    v: &Value,
    len: usize,
    path: &str,
    at: &str,
    target: usize,
    query: &[usize],
    parse: impl Fn(&str) -> Option<T>,
) -> Result<Vec<T>> {
    let obj = v
        .as_object()
        .ok_or_else(|| malformed(path, format!("{at}: expected an object")))?;
    let sigma = code.sigma();
    let size = view_count(sigma, len)?;
    let mut cells: Vec<Option<T>> = (0..size).map(|_| None).collect();
    for (key, val) in obj {
        let view = code
            .alphabet()
            .parse(key, &format!("{path}: {at}"))
            .ok()
            .filter(|s| s.len() == len)
            .ok_or_else(|| malformed(path, format!("{at}: bad view {key:?}")))?;
        let out = val
            .as_str()
            .and_then(&parse)
            .ok_or_else(|| malformed(path, format!("{at}.{key}: bad value {val}")))?;
        cells[view_rank(view, sigma)] = Some(out);
    }
    cells
        .into_iter()
        .enumerate()
        .map(|(r, c)| {
            c.ok_or_else(|| Error::PartialTable {
                target,
                query: query.to_vec(),
                view: code.alphabet().render(&view_from_rank(r, len, sigma)),
            })
        })
        .collect()
}

fn view_object<T>(code: &Code, cells: &[T], len: usize, render: impl Fn(&T) -> String) -> Value {
    let sigma = code.sigma();
    let mut m = Map::new();
    for (r, c) in cells.iter().enumerate() {
        m.insert(code.alphabet().render(&view_from_rank(r, len, sigma)), json!(render(c)));
    }
    Value::Object(m)
}

pub fn decoder_to_json(code: &Code, dec: &Decoder) -> Value {
    let mut rules = Map::new();
    for (t, entries) in dec.rules() {
        let list: Vec<Value> = entries
            .iter()
            .map(|e| {
                json!({
                    "weight": rational::to_json(&e.weight),
                    "query": e.query,
                    "table": view_object(code, &e.table, e.query.len(), |o| o.render(code.alphabet())),
                })
            })
            .collect();
        rules.insert(t.to_string(), Value::Array(list));
    }
    json!({ "q": dec.q(), "target_kind": dec.family().name(), "rules": rules })
}

fn rules_object<'a>(v: &'a Value, path: &str) -> Result<Vec<(usize, &'a Vec<Value>)>> {
    let obj = field(v, "rules", path, "decoder")?
        .as_object()
        .ok_or_else(|| malformed(path, "decoder.rules: expected an object"))?;
    obj.iter()
        .map(|(k, list)| {
            let t: usize = k
                .parse()
                .map_err(|_| malformed(path, format!("decoder.rules: target key {k:?} is not an integer")))?;
            let list = list
                .as_array()
                .ok_or_else(|| malformed(path, format!("decoder.rules.{k}: expected a list")))?;
            Ok((t, list))
        })
        .collect()
}

pub fn decoder_from_json(code: &Code, v: &Value, path: &str) -> Result<Decoder> {
    only_fields(v, &["q", "target_kind", "rules"], path, "decoder")?;
    let q = uint_field(v, "q", path, "decoder")?;
    let family = family_field(v, path)?;
    let mut rules = BTreeMap::new();
    for (t, list) in rules_object(v, path)? {
        let mut entries = Vec::new();
        for (i, e) in list.iter().enumerate() {
            let at = format!("rules.{t}[{i}]");
            only_fields(e, &["weight", "query", "table"], path, &at)?;
            let query = coords_field(e, "query", path, &at)?;
            crate::codes::check_coords(&query, code.n())?;
            let table = view_map(
                code,
                field(e, "table", path, &at)?,
                query.len(),
                path,
                &format!("{at}.table"),
                t,
                &query,
                |s| Output::parse(s, code.alphabet()),
            )?;
            entries.push(RuleEntry {
                weight: weight_field(e, path, &at)?,
                query,
                table,
            });
        }
        rules.insert(t, entries);
    }
    Decoder::new(code, q, family, rules)
}

pub fn derived_to_json(code: &Code, dec: &DerivedDecoder) -> Value {
    let mut rules = Map::new();
    for (t, entries) in dec.rules() {
        let list: Vec<Value> = entries
            .iter()
            .map(|e| {
                let map = view_object(code, &e.rule.pattern_map, e.rule.light.len(), |p| match p {
                    PatternClass::Good(s) => code.alphabet().char_of(*s).to_string(),
                    PatternClass::Bad(_) => "uniform".to_string(),
                });
                json!({
                    "weight": rational::to_json(&e.weight),
                    "query": e.rule.query,
                    "light": e.rule.light,
                    "pattern_map": map,
                })
            })
            .collect();
        rules.insert(t.to_string(), Value::Array(list));
    }
    json!({
        "q": dec.q_effective(),
        "target_kind": dec.family().name(),
        "t": dec.t(),
        "tie": dec.tie().name(),
        "rules": rules,
    })
}

pub fn derived_from_json(code: &Code, v: &Value, path: &str) -> Result<DerivedDecoder> {
    only_fields(v, &["q", "target_kind", "t", "tie", "rules"], path, "decoder")?;
    let q = uint_field(v, "q", path, "decoder")?;
    let family = family_field(v, path)?;
    let t = uint_field(v, "t", path, "decoder")?;
    let tie = field(v, "tie", path, "decoder")?
        .as_str()
        .and_then(TiePolicy::parse)
        .ok_or_else(|| malformed(path, "decoder.tie: expected \"uniform\" or \"lex\""))?;
    let mut rules = BTreeMap::new();
    for (target, list) in rules_object(v, path)? {
        let mut entries = Vec::new();
        for (i, e) in list.iter().enumerate() {
            let at = format!("rules.{target}[{i}]");
            only_fields(e, &["weight", "query", "light", "pattern_map"], path, &at)?;
            let query = coords_field(e, "query", path, &at)?;
            let light = coords_field(e, "light", path, &at)?;
            if light.len() > q {
                return Err(Error::QueryTooLong { query: light, q });
            }
            let pattern_map = view_map(
                code,
                field(e, "pattern_map", path, &at)?,
                light.len(),
                path,
                &format!("{at}.pattern_map"),
                target,
                &query,
                |s| match s {
                    "uniform" => Some(PatternClass::Bad(BadReason::Unlabeled)),
                    _ => match Output::parse(s, code.alphabet())? {
                        Output::Sym(x) => Some(PatternClass::Good(x)),
                        Output::Bot => None,
                    },
                },
            )?;
            entries.push(DerivedEntry {
                weight: weight_field(e, path, &at)?,
                rule: DerivedRule {
                    query,
                    light,
                    pattern_map,
                },
            });
        }
        rules.insert(target, entries);
    }
    DerivedDecoder::new(code, family, t, tie, rules)
}

pub fn any_to_json(code: &Code, dec: &AnyDecoder) -> Value {
    match dec {
        AnyDecoder::Relaxed(d) => decoder_to_json(code, d),
        AnyDecoder::Derived(d) => derived_to_json(code, d),
    }
}

/// A file with a `t` field is a derived decoder; anything else a relaxed one.
pub fn any_from_json(code: &Code, v: &Value, path: &str) -> Result<AnyDecoder> {
    if v.get("t").is_some() {
        derived_from_json(code, v, path).map(AnyDecoder::Derived)
    } else {
        decoder_from_json(code, v, path).map(AnyDecoder::Relaxed)
    }
}

pub fn load_decoder(code: &Code, path: &Path) -> Result<AnyDecoder> {
    any_from_json(code, &read_json(path)?, &path.display().to_string())
}
