use std::path::Path;
use std::time::Instant;

use rldc_core::bounds::{bound_imperfect, bound_ldc_amplify, bound_perfect, bound_tq, BoundParams, Enclosure};
use rldc_core::codes::{restrict, Code};
use rldc_core::decoder::{canonical_defects, canonicalize as canon, Decoder, LocalDecoder, Target};
use rldc_core::files::{any_to_json, decoder_to_json, load_code, load_decoder, to_pretty, write_atomic, AnyDecoder};
use rldc_core::fixtures::{load_fixture, verify_fixture, FIXTURE_NAMES};
use rldc_core::rational::{self, Rational};
use rldc_core::transform::{
    amplify_ldc_majority, amplify_rldc_repeat, derive_ldc_decoder, derive_ldc_decoder_unchecked, derive_rule,
    heavy_light_split, tq_decoder, PatternClass, TiePolicy, DEFAULT_ENTRY_BUDGET,
};
use rldc_core::verify::{
    measure, measure_completeness, radius_of, sweep_csv, Adversary, Mode, SweepConfig, SweepRow,
};
use serde_json::{json, Map, Value};

use crate::{
    AmplifyArgs, BoundsArgs, CanonicalizeArgs, ClassifyArgs, DeriveArgs, Failure, FixturesArgs, Method, ModeArg,
    Source, Theorem, TieArg, TqArgs, VerifyArgs,
};

type Run = Result<(), Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn is_fixture(name: &str) -> bool {
    FIXTURE_NAMES.contains(&name) && !Path::new(name).exists()
}

fn load_any(code: &Code, spec: &str) -> Result<AnyDecoder, Failure> {
    if is_fixture(spec) {
        Ok(AnyDecoder::Relaxed(load_fixture(spec)?.decoder))
    } else {
        Ok(load_decoder(code, Path::new(spec))?)
    }
}

impl Source {
    fn load(&self) -> Result<(Code, AnyDecoder), Failure> {
        if let Some(name) = &self.fixture {
            let f = load_fixture(name)?;
            return Ok((f.code, AnyDecoder::Relaxed(f.decoder)));
        }
        let spec = self.code.as_deref().ok_or_else(|| usage("--code or --fixture is required"))?;
        let code = if is_fixture(spec) {
            load_fixture(spec)?.code
        } else {
            load_code(Path::new(spec))?
        };
        let dec = self.decoder.as_deref().ok_or_else(|| usage("--decoder is required with --code"))?;
        let dec = load_any(&code, dec)?;
        Ok((code, dec))
    }

    fn load_relaxed(&self) -> Result<(Code, Decoder), Failure> {
        match self.load()? {
            (code, AnyDecoder::Relaxed(d)) => Ok((code, d)),
            (_, AnyDecoder::Derived(_)) => Err(usage("this command needs a relaxed decoder, not a derived one")),
        }
    }
}

/// Writes to `out` atomically, or prints to stdout when no path is given.
fn emit(out: Option<&Path>, text: &str) -> Run {
    match out {
        Some(p) => Ok(write_atomic(p, text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn mode_of(m: ModeArg) -> Mode {
    match m {
        ModeArg::Ldc => Mode::Ldc,
        ModeArg::Rldc => Mode::Rldc,
        ModeArg::Lcc => Mode::Lcc,
        ModeArg::Rlcc => Mode::Rlcc,
    }
}

fn tie_of(t: TieArg) -> TiePolicy {
    match t {
        TieArg::Uniform => TiePolicy::Uniform,
        TieArg::Lex => TiePolicy::Lex,
    }
}

fn sweep_config(a: &VerifyArgs) -> Result<SweepConfig, Failure> {
    let adversary = match (a.heuristic, a.monte_carlo) {
        (Some(restarts), _) => Adversary::Heuristic {
            restarts,
            seed: a.seed.ok_or_else(|| usage("--heuristic needs --seed"))?,
        },
        (_, Some(samples)) => Adversary::MonteCarlo {
            samples,
            seed: a.seed.ok_or_else(|| usage("--monte-carlo needs --seed"))?,
        },
        _ => {
            if a.seed.is_some() {
                return Err(usage("--seed only applies to --heuristic or --monte-carlo"));
            }
            Adversary::Exact
        }
    };
    let mut cfg = SweepConfig::from_env().with_adversary(adversary);
    if let Some(b) = a.budget {
        cfg.budget = b;
    }
    Ok(cfg)
}

/// Per-radius error bound for a decoder derived from `relaxed` at `delta`.
fn derived_bound(code: &Code, relaxed: &Decoder, delta: &Rational) -> Result<impl Fn(usize) -> Rational, Failure> {
    let mode = match relaxed.family() {
        rldc_core::decoder::TargetFamily::Message => Mode::Rldc,
        rldc_core::decoder::TargetFamily::Codeword => Mode::Rlcc,
    };
    let n = code.n();
    let s = measure(code, relaxed, mode, radius_of(delta, n), &SweepConfig::from_env())?.soundness;
    let eps = rational::one() - measure_completeness(code, relaxed)?;
    let (q, sigma, delta) = (relaxed.q(), code.sigma(), delta.clone());
    let values = (0..=n)
        .map(|radius| {
            let r = rational::rat(radius as i64, n as i64);
            let p = BoundParams::new(q, sigma, delta.clone(), s.clone(), r).with_eps(eps.clone());
            Ok(bound_imperfect(&p)?.bound)
        })
        .collect::<Result<Vec<_>, rldc_core::Error>>()?;
    Ok(move |radius: usize| values[radius].clone())
}

pub fn verify(a: VerifyArgs) -> Run {
    let (code, dec) = a.source.load()?;
    let cfg = sweep_config(&a)?;
    let mode = mode_of(a.mode);
    let radius = match (&a.radius, &a.radius_fraction) {
        (Some(r), _) => *r,
        (_, Some(f)) => radius_of(f, code.n()),
        _ => return Err(usage("--radius or --radius-fraction is required")),
    };
    if radius > code.n() {
        return Err(usage(format!("radius {radius} exceeds block length {}", code.n())));
    }
    let bound = match &a.bound_from {
        Some(spec) => {
            let relaxed = match load_any(&code, spec)? {
                AnyDecoder::Relaxed(d) => d,
                AnyDecoder::Derived(_) => return Err(usage("--bound-from needs a relaxed decoder")),
            };
            let delta = a.delta.as_ref().ok_or_else(|| usage("--bound-from needs --delta"))?;
            Some(derived_bound(&code, &relaxed, delta)?)
        }
        None => None,
    };
    let limit = |r: usize| -> Option<Rational> {
        match (&bound, &a.claim) {
            (Some(b), Some(c)) => Some(b(r).min(c.clone())),
            (Some(b), None) => Some(b(r)),
            (None, c) => c.clone(),
        }
    };

    let start = Instant::now();
    let radii: Vec<usize> = if a.sweep { (0..=radius).collect() } else { vec![radius] };
    let mut rows = Vec::new();
    let mut report = None;
    for &r in &radii {
        let rep = match (&a.radius_fraction, r == radius) {
            (Some(f), true) => rldc_core::verify::measure_at_fraction(&code, &dec, mode, f, &cfg)?,
            _ => measure(&code, &dec, mode, r, &cfg)?,
        };
        rows.push(SweepRow {
            radius: r,
            completeness: rep.completeness.clone(),
            soundness: rep.soundness.clone(),
            bound: limit(r),
        });
        report = Some(rep);
    }
    let mut report = report.expect("at least one radius");
    if a.timing {
        report.elapsed_ms = Some(start.elapsed().as_millis() as u64);
    }
    print!("{}", report.summary());
    if let Some(out) = &a.out {
        write_atomic(out, &to_pretty(&report.to_json()))?;
    }
    if a.sweep || a.csv.is_some() {
        emit(a.csv.as_deref(), &sweep_csv(&rows))?;
    }
    let failed: Vec<String> = rows
        .iter()
        .filter(|r| r.pass() == Some(false))
        .map(|r| {
            format!(
                "radius {}: measured {} exceeds {}",
                r.radius,
                rational::display(&r.soundness),
                rational::display(r.bound.as_ref().unwrap())
            )
        })
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Failed(failed.join("; ")))
    }
}

pub fn derive(a: DeriveArgs) -> Run {
    let (code, dec) = a.source.load_relaxed()?;
    let derived = if a.unchecked {
        derive_ldc_decoder_unchecked(&code, &dec, &a.delta)?
    } else {
        derive_ldc_decoder(&code, &dec, &a.delta)?
    };
    for t in dec.targets() {
        let split = heavy_light_split(&dec, t, &a.delta)?;
        eprintln!("{t}: heavy {:?}, threshold {}", split.heavy, rational::display(&split.threshold()));
    }
    emit(a.out.as_deref(), &to_pretty(&any_to_json(&code, &AnyDecoder::Derived(derived))))
}

pub fn tq(a: TqArgs) -> Run {
    let (code, dec) = a.source.load_relaxed()?;
    let d = tq_decoder(&code, &dec, &a.delta, a.t, tie_of(a.tie))?;
    emit(a.out.as_deref(), &to_pretty(&any_to_json(&code, &AnyDecoder::Derived(d))))
}

pub fn amplify(a: AmplifyArgs) -> Run {
    let (code, dec) = a.source.load_relaxed()?;
    let budget = a.budget.unwrap_or(DEFAULT_ENTRY_BUDGET);
    let amp = match a.method {
        Method::Repeat => amplify_rldc_repeat(&code, &dec, a.t, budget)?,
        Method::Majority => amplify_ldc_majority(&code, &dec, a.t, tie_of(a.tie), budget)?,
    };
    emit(a.out.as_deref(), &to_pretty(&decoder_to_json(&code, &amp)))
}

pub fn canonicalize(a: CanonicalizeArgs) -> Run {
    let (code, dec) = a.source.load_relaxed()?;
    let changed = canonical_defects(&code, &dec)?;
    let (c, diags) = canon(&code, &dec)?;
    for d in &diags {
        eprintln!("{}", d.render(code.alphabet()));
    }
    eprintln!("{changed} table cells rewritten, {} ambiguous views", diags.len());
    emit(a.out.as_deref(), &to_pretty(&decoder_to_json(&code, &c)))
}

fn class_name(c: PatternClass, code: &Code) -> String {
    match c {
        PatternClass::Good(s) => format!("good:{}", code.alphabet().char_of(s)),
        PatternClass::Bad(reason) => format!("bad:{}", reason.name()),
    }
}

pub fn classify(a: ClassifyArgs) -> Run {
    let (code, dec) = a.source.load_relaxed()?;
    let target = Target::of(dec.family(), a.target);
    target.check(&code)?;
    let c = match (&a.message, &a.word) {
        (Some(m), _) => code.codeword(code.parse_message(m)?).clone(),
        (_, Some(w)) => {
            let w = code.parse_word(w)?;
            if code.decode_exact(&w).is_none() {
                return Err(rldc_core::Error::NotACodeword(w.render(code.alphabet())).into());
            }
            w
        }
        _ => return Err(usage("--message or --word is required")),
    };
    let split = heavy_light_split(&dec, target, &a.delta)?;
    let sigma = code.sigma();
    let mut entries = Vec::new();
    for (i, e) in dec.entries(target)?.iter().enumerate() {
        let light = split.light_part(&e.query);
        let rule = derive_rule(e, &light, sigma)?;
        let view = restrict(&c, &light)?;
        let mut map = Map::new();
        for (rank, class) in rule.pattern_map.iter().enumerate() {
            let v = rldc_core::codes::view_from_rank(rank, light.len(), sigma);
            map.insert(code.alphabet().render(&v), json!(class_name(*class, &code)));
        }
        entries.push(json!({
            "index": i,
            "query": e.query,
            "light": light,
            "light_view": code.alphabet().render(&view),
            "class": class_name(rule.class_of(&view, sigma), &code),
            "pattern_map": Value::Object(map),
        }));
    }
    let doc = json!({
        "target": a.target,
        "codeword": c.render(code.alphabet()),
        "delta": rational::to_json(&a.delta),
        "heavy": split.heavy,
        "entries": entries,
    });
    emit(a.out.as_deref(), &to_pretty(&doc))
}

fn decimal(e: &Enclosure) -> String {
    format!("{:.6}", e.midpoint())
}

fn need<T: Clone>(v: &Option<T>, flag: &str) -> Result<T, Failure> {
    v.clone().ok_or_else(|| usage(format!("--{flag} is required for this theorem")))
}

pub fn bounds(a: BoundsArgs) -> Run {
    let (header, row): (Vec<&str>, Vec<String>) = match a.theorem {
        Theorem::LdcAmplify => {
            let t = need(&a.t, "t")?;
            let e = bound_ldc_amplify(&a.s, t)?;
            (
                vec!["s", "t", "bound", "bound_lo", "bound_hi"],
                vec![rational::display(&a.s), t.to_string(), decimal(&e), rational::display(e.lo()), rational::display(e.hi())],
            )
        }
        th => {
            let p = BoundParams::new(
                need(&a.q, "q")?,
                a.sigma,
                need(&a.delta, "delta")?,
                a.s.clone(),
                need(&a.r, "r")?,
            );
            match th {
                Theorem::Perfect | Theorem::Imperfect => {
                    let (p, b) = if th == Theorem::Perfect {
                        let b = bound_perfect(&p)?;
                        (p, b)
                    } else {
                        let p = p.with_eps(need(&a.eps, "eps")?);
                        let b = bound_imperfect(&p)?;
                        (p, b)
                    };
                    (
                        vec!["q", "sigma", "delta", "s", "r", "eps", "bound", "bound~", "r_max", "admissible"],
                        vec![
                            p.q.to_string(),
                            p.sigma.to_string(),
                            rational::display(&p.delta),
                            rational::display(&p.s),
                            rational::display(&p.r),
                            rational::display(&p.eps),
                            rational::display(&b.bound),
                            format!("{:.6}", rational::to_f64(&b.bound)),
                            rational::display(&b.r_max),
                            b.admissible.to_string(),
                        ],
                    )
                }
                _ => {
                    let p = p.with_t(need(&a.t, "t")?);
                    let b = bound_tq(&p)?;
                    let show = |e: &Option<Enclosure>| e.as_ref().map(decimal).unwrap_or_else(|| "-".into());
                    (
                        vec!["q", "sigma", "delta", "s", "r", "t", "alpha", "eta", "rho", "rho^t", "admissible"],
                        vec![
                            p.q.to_string(),
                            p.sigma.to_string(),
                            rational::display(&p.delta),
                            rational::display(&p.s),
                            rational::display(&p.r),
                            p.t.to_string(),
                            rational::display(&b.alpha),
                            rational::display(&b.eta),
                            show(&b.rho),
                            show(&b.rho_t),
                            b.admissible.to_string(),
                        ],
                    )
                }
            }
        }
    };
    println!("{}", header.join("\t"));
    println!("{}", row.join("\t"));
    if let Some(path) = &a.csv {
        write_atomic(path, &format!("{}\n{}\n", header.join(","), row.join(",")))?;
    }
    Ok(())
}

pub fn fixtures(a: FixturesArgs) -> Run {
    for n in &a.name {
        if !FIXTURE_NAMES.contains(&n.as_str()) {
            return Err(usage(format!("unknown fixture {n:?}")));
        }
    }
    let names: Vec<&str> = if a.name.is_empty() {
        FIXTURE_NAMES.to_vec()
    } else {
        a.name.iter().map(String::as_str).collect()
    };
    let mut mismatches = Vec::new();
    for name in names {
        let f = load_fixture(name)?;
        if let Some(dir) = &a.out_dir {
            std::fs::create_dir_all(dir).map_err(|source| rldc_core::Error::Io {
                path: dir.clone(),
                source,
            })?;
            let code_json = rldc_core::files::code_to_json(&f.code);
            write_atomic(&dir.join(format!("{name}.code.json")), &to_pretty(&code_json))?;
            write_atomic(&dir.join(format!("{name}.decoder.json")), &to_pretty(&decoder_to_json(&f.code, &f.decoder)))?;
        }
        if a.verify_all {
            let bad = verify_fixture(&f)?;
            if bad.is_empty() {
                println!("{name}: ok");
            } else {
                for b in &bad {
                    println!("{b}");
                }
                mismatches.extend(bad);
            }
        }
    }
    if mismatches.is_empty() {
        Ok(())
    } else {
        Err(Failure::Failed(format!("{} documented parameters not reproduced", mismatches.len())))
    }
}
