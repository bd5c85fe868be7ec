use serde_json::{json, Map, Value};

use crate::decoder::{Target, TargetFamily};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Which definition the sweep measures.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Ldc,
    Rldc,
    Lcc,
    Rlcc,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Ldc => "ldc",
            Mode::Rldc => "rldc",
            Mode::Lcc => "lcc",
            Mode::Rlcc => "rlcc",
        }
    }

    pub fn parse(text: &str) -> Option<Self> {
        match text {
            "ldc" => Some(Mode::Ldc),
            "rldc" => Some(Mode::Rldc),
            "lcc" => Some(Mode::Lcc),
            "rlcc" => Some(Mode::Rlcc),
            _ => None,
        }
    }

    /// ⊥ is an allowed output on corrupted words.
    pub fn relaxed(self) -> bool {
        matches!(self, Mode::Rldc | Mode::Rlcc)
    }

    pub fn family(self) -> TargetFamily {
        match self {
            Mode::Ldc | Mode::Rldc => TargetFamily::Message,
            Mode::Lcc | Mode::Rlcc => TargetFamily::Codeword,
        }
    }
}

/// How the worst case over the ball is searched.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Adversary {
    /// Full enumeration with exact output distributions.
    Exact,
    /// Greedy single-coordinate ascent with seeded random restarts.
    Heuristic { restarts: usize, seed: u64 },
    /// Full enumeration with failure frequencies estimated from seeded samples.
    MonteCarlo { samples: u64, seed: u64 },
}

impl Adversary {
    /// What the reported soundness certifies.
    pub fn certificate(self) -> &'static str {
        match self {
            Adversary::Exact => "exact",
            Adversary::Heuristic { .. } => "lower bound only",
            Adversary::MonteCarlo { .. } => "estimate",
        }
    }

    fn to_json(self) -> Value {
        match self {
            Adversary::Exact => json!({ "kind": "exact" }),
            Adversary::Heuristic { restarts, seed } => {
                json!({ "kind": "heuristic", "restarts": restarts, "seed": seed })
            }
            Adversary::MonteCarlo { samples, seed } => {
                json!({ "kind": "monte-carlo", "samples": samples, "seed": seed })
            }
        }
    }

    fn from_json(v: &Value) -> Option<Self> {
        let u = |k: &str| v.get(k).and_then(Value::as_u64);
        match v.get("kind")?.as_str()? {
            "exact" => Some(Adversary::Exact),
            "heuristic" => Some(Adversary::Heuristic {
                restarts: u("restarts")? as usize,
                seed: u("seed")?,
            }),
            "monte-carlo" => Some(Adversary::MonteCarlo {
                samples: u("samples")?,
                seed: u("seed")?,
            }),
            _ => None,
        }
    }
}

/// A rational radius fraction and the integer radius `floor(fraction · n)` it became.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadiusConversion {
    pub fraction: Rational,
    pub n: usize,
    pub radius: usize,
}

impl RadiusConversion {
    pub fn new(fraction: &Rational, n: usize) -> Self {
        let radius = rational::floor(&(fraction * rational::int(n as i64)));
        Self {
            fraction: fraction.clone(),
            n,
            radius: usize::try_from(radius).unwrap_or(0),
        }
    }
}

/// The input attaining the reported soundness, rendered over the code's alphabet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub message: String,
    pub target: Target,
    pub word: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub mode: Mode,
    pub n: usize,
    pub radius: usize,
    pub radius_conversion: Option<RadiusConversion>,
    pub adversary: Adversary,
    pub completeness: Rational,
    pub soundness: Rational,
    pub witness: Option<Witness>,
    pub targets: Vec<usize>,
    /// Word-target evaluations spent on the soundness search.
    pub evaluations: u64,
    /// Wall-clock time; left out unless asked for so reports stay byte-stable.
    pub elapsed_ms: Option<u64>,
}

fn target_json(t: Target) -> Value {
    json!({ "kind": t.family().name(), "index": t.index() })
}

fn target_from_json(v: &Value) -> Option<Target> {
    let family = TargetFamily::parse(v.get("kind")?.as_str()?)?;
    Some(Target::of(family, v.get("index")?.as_u64()? as usize))
}

impl VerificationReport {
    pub fn certificate(&self) -> &'static str {
        self.adversary.certificate()
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("mode".into(), json!(self.mode.name()));
        m.insert("n".into(), json!(self.n));
        m.insert("radius".into(), json!(self.radius));
        if let Some(c) = &self.radius_conversion {
            m.insert(
                "radius_conversion".into(),
                json!({ "fraction": rational::to_json(&c.fraction), "n": c.n, "radius": c.radius, "rule": "floor" }),
            );
        }
        m.insert("adversary".into(), self.adversary.to_json());
        m.insert("certificate".into(), json!(self.certificate()));
        m.insert("completeness".into(), rational::to_json(&self.completeness));
        m.insert("soundness".into(), rational::to_json(&self.soundness));
        if let Some(w) = &self.witness {
            m.insert(
                "witness".into(),
                json!({ "message": w.message, "target": target_json(w.target), "word": w.word }),
            );
        }
        m.insert("targets".into(), json!(self.targets));
        m.insert("evaluations".into(), json!(self.evaluations));
        if let Some(ms) = self.elapsed_ms {
            m.insert("elapsed_ms".into(), json!(ms));
        }
        Value::Object(m)
    }

    pub fn from_json(v: &Value, path: &str) -> Result<Self> {
        let bad = |field: &str| Error::Malformed {
            path: path.to_string(),
            message: format!("missing or invalid field `{field}`"),
        };
        let rat = |field: &str| v.get(field).and_then(rational::from_json).ok_or_else(|| bad(field));
        let uint = |field: &str| v.get(field).and_then(Value::as_u64).ok_or_else(|| bad(field));
        let radius_conversion = match v.get("radius_conversion") {
            None => None,
            Some(c) => Some(RadiusConversion {
                fraction: c
                    .get("fraction")
                    .and_then(rational::from_json)
                    .ok_or_else(|| bad("radius_conversion.fraction"))?,
                n: c.get("n").and_then(Value::as_u64).ok_or_else(|| bad("radius_conversion.n"))? as usize,
                radius: c
                    .get("radius")
                    .and_then(Value::as_u64)
                    .ok_or_else(|| bad("radius_conversion.radius"))? as usize,
            }),
        };
        let witness = match v.get("witness") {
            None => None,
            Some(w) => Some(Witness {
                message: w
                    .get("message")
                    .and_then(Value::as_str)
                    .ok_or_else(|| bad("witness.message"))?
                    .to_string(),
                target: w
                    .get("target")
                    .and_then(target_from_json)
                    .ok_or_else(|| bad("witness.target"))?,
                word: w
                    .get("word")
                    .and_then(Value::as_str)
                    .ok_or_else(|| bad("witness.word"))?
                    .to_string(),
            }),
        };
        Ok(Self {
            mode: v
                .get("mode")
                .and_then(Value::as_str)
                .and_then(Mode::parse)
                .ok_or_else(|| bad("mode"))?,
            n: uint("n")? as usize,
            radius: uint("radius")? as usize,
            radius_conversion,
            adversary: v
                .get("adversary")
                .and_then(Adversary::from_json)
                .ok_or_else(|| bad("adversary"))?,
            completeness: rat("completeness")?,
            soundness: rat("soundness")?,
            witness,
            targets: v
                .get("targets")
                .and_then(Value::as_array)
                .and_then(|a| a.iter().map(|x| x.as_u64().map(|u| u as usize)).collect())
                .ok_or_else(|| bad("targets"))?,
            evaluations: uint("evaluations")?,
            elapsed_ms: v.get("elapsed_ms").and_then(Value::as_u64),
        })
    }

    /// Human-readable summary.
    pub fn summary(&self) -> String {
        let mut s = format!(
            "mode {} radius {} ({})\ncompleteness {}\nsoundness {}\n",
            self.mode.name(),
            self.radius,
            self.certificate(),
            rational::display(&self.completeness),
            rational::display(&self.soundness)
        );
        if let Some(w) = &self.witness {
            s += &format!("witness message {} target {} word {}\n", w.message, w.target, w.word);
        }
        s
    }
}

/// One line of a radius sweep.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepRow {
    pub radius: usize,
    pub completeness: Rational,
    pub soundness: Rational,
    pub bound: Option<Rational>,
}

impl SweepRow {
    pub fn pass(&self) -> Option<bool> {
        self.bound.as_ref().map(|b| &self.soundness <= b)
    }
}

/// CSV with columns `radius,c*,s*_num,s*_den,bound,pass`; empty cells where no bound applies.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("radius,c*,s*_num,s*_den,bound,pass\n");
    for r in rows {
        out += &format!(
            "{},{},{},{},{},{}\n",
            r.radius,
            rational::display(&r.completeness),
            r.soundness.numer(),
            r.soundness.denom(),
            r.bound.as_ref().map(rational::display).unwrap_or_default(),
            r.pass().map(|p| p.to_string()).unwrap_or_default()
        );
    }
    out
}
