//! Worst-case completeness and soundness over Hamming balls.

use num_traits::{One, Zero};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::codes::{ball_size, enumerate_ball, Code, Symbol, Word};
use crate::decoder::{LocalDecoder, Output, Target};
use crate::error::{Error, Result};
use crate::rational::Rational;

use super::report::{Adversary, Mode, RadiusConversion, SweepRow, VerificationReport, Witness};

/// Default cap on word-target evaluations in an enumerating sweep.
pub const DEFAULT_EVAL_BUDGET: u128 = 10_000_000;

/// Environment variable read by [`SweepConfig::from_env`] for the worker count.
pub const WORKERS_ENV: &str = "RLDC_WORKERS";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepConfig {
    pub adversary: Adversary,
    pub budget: u128,
    /// `None` uses the global rayon pool.
    pub workers: Option<usize>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            adversary: Adversary::Exact,
            budget: DEFAULT_EVAL_BUDGET,
            workers: None,
        }
    }
}

impl SweepConfig {
    pub fn exact() -> Self {
        Self::default()
    }

    pub fn with_adversary(mut self, adversary: Adversary) -> Self {
        self.adversary = adversary;
        self
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = Some(workers.max(1));
        self
    }

    /// Default configuration with the worker count taken from `RLDC_WORKERS` if set.
    pub fn from_env() -> Self {
        let workers = std::env::var(WORKERS_ENV).ok().and_then(|v| v.parse().ok());
        Self {
            workers,
            ..Self::default()
        }
    }
}

fn run_pool<T: Send>(workers: Option<usize>, job: impl FnOnce() -> T + Send) -> T {
    match workers.and_then(|w| rayon::ThreadPoolBuilder::new().num_threads(w).build().ok()) {
        Some(pool) => pool.install(job),
        None => job(),
    }
}

fn check_family(dec: &dyn LocalDecoder, mode: Mode) -> Result<()> {
    if dec.family() != mode.family() {
        return Err(Error::TargetKindMismatch(format!(
            "mode {} needs a {} decoder, got a {} decoder",
            mode.name(),
            mode.family().name(),
            dec.family().name()
        )));
    }
    Ok(())
}

fn check_shape(code: &Code, dec: &dyn LocalDecoder) -> Result<()> {
    if dec.n() != code.n() {
        return Err(Error::length("decoder block length", code.n(), dec.n()));
    }
    if dec.sigma() != code.sigma() {
        return Err(Error::length("decoder alphabet size", code.sigma(), dec.sigma()));
    }
    for t in dec.targets() {
        t.check(code)?;
    }
    Ok(())
}

fn units(code: &Code, dec: &dyn LocalDecoder) -> Vec<(usize, Target)> {
    let targets = dec.targets();
    (0..code.len())
        .flat_map(|m| targets.iter().map(move |&t| (m, t)))
        .collect()
}

/// `min_{b, target} Pr[output = target value]` on uncorrupted codewords.
pub fn measure_completeness(code: &Code, dec: &dyn LocalDecoder) -> Result<Rational> {
    check_shape(code, dec)?;
    let mut worst = Rational::one();
    for (m, t) in units(code, dec) {
        let p = Rational::one() - dec.failure(t, code.codeword(m), t.value(code, m), false)?;
        if p < worst {
            worst = p;
        }
    }
    Ok(worst)
}

struct Best {
    value: Rational,
    word: Word,
}

/// Running maximum that keeps the first maximizer.
fn better(best: &mut Option<Best>, value: Rational, word: &Word) {
    if best.as_ref().is_none_or(|b| value > b.value) {
        *best = Some(Best {
            value,
            word: word.clone(),
        });
    }
}

fn unit_seed(seed: u64, unit: usize) -> u64 {
    seed ^ (unit as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

fn exact_unit(
    code: &Code,
    dec: &dyn LocalDecoder,
    (m, t): (usize, Target),
    radius: usize,
    relaxed: bool,
) -> Result<(Best, u64)> {
    let truth = t.value(code, m);
    let mut best = None;
    let mut evals = 0u64;
    for (y, _) in enumerate_ball(code.codeword(m), radius, code.sigma())? {
        better(&mut best, dec.failure(t, &y, truth, relaxed)?, &y);
        evals += 1;
    }
    Ok((best.expect("ball contains its center"), evals))
}

fn monte_carlo_unit(
    code: &Code,
    dec: &dyn LocalDecoder,
    (m, t): (usize, Target),
    radius: usize,
    relaxed: bool,
    samples: u64,
    rng: &mut ChaCha8Rng,
) -> Result<(Best, u64)> {
    let truth = t.value(code, m);
    let mut best = None;
    let mut evals = 0u64;
    for (y, _) in enumerate_ball(code.codeword(m), radius, code.sigma())? {
        let mut fails = 0u64;
        for _ in 0..samples {
            let failed = match dec.sample(t, &y, rng)? {
                Output::Sym(s) => s != truth,
                Output::Bot => !relaxed,
            };
            fails += failed as u64;
        }
        better(&mut best, Rational::new(fails.into(), samples.max(1).into()), &y);
        evals += 1;
    }
    Ok((best.expect("ball contains its center"), evals))
}

fn random_start(center: &Word, radius: usize, sigma: usize, rng: &mut ChaCha8Rng) -> Word {
    let mut w = center.symbols().to_vec();
    let d = rng.gen_range(0..=radius);
    for i in sample(rng, w.len(), d) {
        let shift = rng.gen_range(1..sigma);
        w[i] = Symbol(((w[i].index() + shift) % sigma) as u8);
    }
    Word::from_raw(w)
}

fn heuristic_unit(
    code: &Code,
    dec: &dyn LocalDecoder,
    (m, t): (usize, Target),
    radius: usize,
    relaxed: bool,
    restarts: usize,
    rng: &mut ChaCha8Rng,
) -> Result<(Best, u64)> {
    let center = code.codeword(m);
    let truth = t.value(code, m);
    let sigma = code.sigma();
    let mut best = None;
    let mut evals = 0u64;
    for r in 0..=restarts {
        let mut cur = if r == 0 {
            center.clone()
        } else {
            random_start(center, radius, sigma, rng)
        };
        let mut cur_val = dec.failure(t, &cur, truth, relaxed)?;
        evals += 1;
        loop {
            let mut step: Option<(Rational, Word)> = None;
            let dist = cur.diff(center).len();
            for j in 0..cur.len() {
                for s in 0..sigma {
                    let s = Symbol(s as u8);
                    if s == cur.symbols()[j] {
                        continue;
                    }
                    let moves_out = cur.symbols()[j] == center.symbols()[j];
                    let moves_home = s == center.symbols()[j];
                    let d = dist + moves_out as usize - moves_home as usize;
                    if d > radius {
                        continue;
                    }
                    let mut next = cur.symbols().to_vec();
                    next[j] = s;
                    let next = Word::from_raw(next);
                    let v = dec.failure(t, &next, truth, relaxed)?;
                    evals += 1;
                    if v > cur_val && step.as_ref().is_none_or(|(b, _)| &v > b) {
                        step = Some((v, next));
                    }
                }
            }
            match step {
                Some((v, w)) => {
                    cur_val = v;
                    cur = w;
                }
                None => break,
            }
        }
        better(&mut best, cur_val, &cur);
    }
    Ok((best.expect("at least one restart"), evals))
}

fn soundness(
    code: &Code,
    dec: &dyn LocalDecoder,
    mode: Mode,
    radius: usize,
    cfg: &SweepConfig,
) -> Result<(Rational, Option<Witness>, u64)> {
    if radius > code.n() {
        return Err(Error::RadiusTooLarge { radius, n: code.n() });
    }
    let work = units(code, dec);
    let per_unit = ball_size(code.n(), code.sigma(), radius);
    let needed = match cfg.adversary {
        Adversary::Exact => per_unit.saturating_mul(work.len() as u128),
        Adversary::MonteCarlo { samples, .. } => per_unit
            .saturating_mul(work.len() as u128)
            .saturating_mul(samples as u128),
        Adversary::Heuristic { .. } => 0,
    };
    if needed > cfg.budget {
        return Err(Error::BallTooLarge {
            needed,
            budget: cfg.budget,
        });
    }
    let relaxed = mode.relaxed();
    let results: Vec<(Best, u64)> = run_pool(cfg.workers, || {
        work.par_iter()
            .enumerate()
            .map(|(i, &unit)| match cfg.adversary {
                Adversary::Exact => exact_unit(code, dec, unit, radius, relaxed),
                Adversary::MonteCarlo { samples, seed } => {
                    let mut rng = ChaCha8Rng::seed_from_u64(unit_seed(seed, i));
                    monte_carlo_unit(code, dec, unit, radius, relaxed, samples, &mut rng)
                }
                Adversary::Heuristic { restarts, seed } => {
                    let mut rng = ChaCha8Rng::seed_from_u64(unit_seed(seed, i));
                    heuristic_unit(code, dec, unit, radius, relaxed, restarts, &mut rng)
                }
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let mut evaluations = 0u64;
    let mut best: Option<(usize, Best)> = None;
    for (i, (b, e)) in results.into_iter().enumerate() {
        evaluations += e;
        if best.as_ref().is_none_or(|(_, cur)| b.value > cur.value) {
            best = Some((i, b));
        }
    }
    Ok(match best {
        Some((i, b)) => {
            let (m, t) = work[i];
            let witness = Witness {
                message: code.alphabet().render(code.message(m).symbols()),
                target: t,
                word: b.word.render(code.alphabet()),
            };
            (b.value, Some(witness), evaluations)
        }
        None => (Rational::zero(), None, evaluations),
    })
}

/// Full measurement in the given mode at an integer radius.
pub fn measure(
    code: &Code,
    dec: &dyn LocalDecoder,
    mode: Mode,
    radius: usize,
    cfg: &SweepConfig,
) -> Result<VerificationReport> {
    check_family(dec, mode)?;
    check_shape(code, dec)?;
    let completeness = measure_completeness(code, dec)?;
    let (soundness, witness, evaluations) = soundness(code, dec, mode, radius, cfg)?;
    Ok(VerificationReport {
        mode,
        n: code.n(),
        radius,
        radius_conversion: None,
        adversary: cfg.adversary,
        completeness,
        soundness,
        witness,
        targets: dec.targets().into_iter().map(Target::index).collect(),
        evaluations,
        elapsed_ms: None,
    })
}

/// As [`measure`] with the radius given as a fraction of `n`, rounded down.
pub fn measure_at_fraction(
    code: &Code,
    dec: &dyn LocalDecoder,
    mode: Mode,
    fraction: &Rational,
    cfg: &SweepConfig,
) -> Result<VerificationReport> {
    let conv = RadiusConversion::new(fraction, code.n());
    let mut report = measure(code, dec, mode, conv.radius, cfg)?;
    report.radius_conversion = Some(conv);
    Ok(report)
}

fn relaxed_mode(dec: &dyn LocalDecoder, relaxed: bool) -> Mode {
    match (dec.family(), relaxed) {
        (crate::decoder::TargetFamily::Message, true) => Mode::Rldc,
        (crate::decoder::TargetFamily::Message, false) => Mode::Ldc,
        (crate::decoder::TargetFamily::Codeword, true) => Mode::Rlcc,
        (crate::decoder::TargetFamily::Codeword, false) => Mode::Lcc,
    }
}

/// Worst probability of a wrong non-⊥ output over the ball (RLDC or RLCC by decoder family).
pub fn measure_rldc_soundness(
    code: &Code,
    dec: &dyn LocalDecoder,
    radius: usize,
    cfg: &SweepConfig,
) -> Result<VerificationReport> {
    measure(code, dec, relaxed_mode(dec, true), radius, cfg)
}

/// Worst probability of any output other than the target value, ⊥ included.
pub fn measure_ldc_error(
    code: &Code,
    dec: &dyn LocalDecoder,
    radius: usize,
    cfg: &SweepConfig,
) -> Result<VerificationReport> {
    measure(code, dec, relaxed_mode(dec, false), radius, cfg)
}

/// Soundness at each radius, compared against `bound(radius)` when given.
pub fn radius_sweep(
    code: &Code,
    dec: &dyn LocalDecoder,
    mode: Mode,
    radii: impl IntoIterator<Item = usize>,
    cfg: &SweepConfig,
    bound: &dyn Fn(usize) -> Option<Rational>,
) -> Result<Vec<SweepRow>> {
    radii
        .into_iter()
        .map(|r| {
            let rep = measure(code, dec, mode, r, cfg)?;
            Ok(SweepRow {
                radius: r,
                completeness: rep.completeness,
                soundness: rep.soundness,
                bound: bound(r),
            })
        })
        .collect()
}

/// Recomputes the failure probability at a report's witness.
pub fn witness_value(code: &Code, dec: &dyn LocalDecoder, report: &VerificationReport) -> Result<Option<Rational>> {
    let Some(w) = &report.witness else {
        return Ok(None);
    };
    let m = code.parse_message(&w.message)?;
    let y = code.parse_word(&w.word)?;
    let truth = w.target.value(code, m);
    Ok(Some(dec.failure(w.target, &y, truth, report.mode.relaxed())?))
}

/// `floor(fraction · n)` as an integer radius.
pub fn radius_of(fraction: &Rational, n: usize) -> usize {
    RadiusConversion::new(fraction, n).radius
}
