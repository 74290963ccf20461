//! Seeded, replayable law suites over the three instances.
//!
//! A suite is a list of parts. Each part draws its inputs from a
//! [`Source`] and returns a deferred check. Random runs draw every part per
//! trial from a per-trial stream; exhaustive runs (Boolean carriers of size
//! at most 3) enumerate the choices of one part at a time.

mod registry;
mod special;
mod suites;

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::boolean::{PartialFn, Sets};
use crate::error::{Error, Result};
use crate::prob::{Dists, KernelMap};
use crate::quantum::Quantum;
use crate::sample::{trial_seed, Ctx, Lab, Odometer, RandomSource, Replay, Source, UnitaryChoice, RNG_NAME};
use crate::tol::Tolerances;

pub use registry::{Instance, Registry, SuiteInfo, SUITES};

/// Version of the case-file layout.
pub const SCHEMA_VERSION: u32 = 1;

/// Exhaustive enumeration is used when a suite has at most this many cases.
pub const EXHAUSTIVE_CAP: usize = 1_000_000;

/// Stored counterexamples per report; the count of failing trials is exact.
pub const MAX_STORED_FAILURES: usize = 20;

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub instance: Instance,
    pub seed: u64,
    pub trials: usize,
    pub max_carrier: usize,
    pub tolerances: Tolerances,
    pub unitary: UnitaryChoice,
    /// Allow exhaustive enumeration where the instance supports it.
    pub exhaustive: bool,
}

impl SuiteConfig {
    pub fn new(instance: Instance) -> Self {
        SuiteConfig {
            instance,
            seed: 0,
            trials: 200,
            max_carrier: 3,
            tolerances: Tolerances::default(),
            unitary: UnitaryChoice::default(),
            exhaustive: true,
        }
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn trials(mut self, trials: usize) -> Self {
        self.trials = trials;
        self
    }

    pub fn unitary(mut self, u: UnitaryChoice) -> Self {
        self.unitary = u;
        self
    }

    pub fn max_carrier(mut self, n: usize) -> Self {
        self.max_carrier = n;
        self
    }

    pub fn tolerances(mut self, tol: Tolerances) -> Self {
        self.tolerances = tol;
        self
    }

    pub fn random_only(mut self) -> Self {
        self.exhaustive = false;
        self
    }

    fn ctx(&self) -> Ctx {
        Ctx {
            max_carrier: self.max_carrier,
            tol: self.tolerances,
            unitary: self.unitary,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::OutOfRange("trials must be at least 1".into()));
        }
        if self.max_carrier == 0 {
            return Err(Error::OutOfRange("max carrier must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exhaustive,
    Random,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub law: String,
    pub note: String,
}

/// Where a case's inputs came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum Origin {
    /// Trial index of a random run.
    Random { trial: u64 },
    /// Choice sequence of an exhaustive run.
    Exhaustive { choices: Vec<usize> },
}

/// A replayable record of one trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Case {
    pub schema_version: u32,
    pub suite: String,
    pub instance: Instance,
    pub seed: u64,
    pub max_carrier: usize,
    pub tolerances: Tolerances,
    pub unitary: UnitaryChoice,
    pub origin: Origin,
    pub violations: Vec<Violation>,
    /// The sampled inputs, for reading.
    pub inputs: Value,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LawReport {
    pub suite: String,
    pub anchor: String,
    pub instance: Instance,
    pub seed: u64,
    pub trials: usize,
    pub mode: Mode,
    pub status: Status,
    pub failed_trials: usize,
    pub failures: Vec<Case>,
    pub elapsed_ms: u64,
    pub rng: String,
}

/// Result of one trial.
#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub violations: Vec<Violation>,
    pub inputs: Value,
}

pub(crate) type Trial<'a> = Box<dyn FnOnce() -> Outcome + Send + 'a>;
pub(crate) type Part<E> = for<'a> fn(&'a E, &'a Ctx, &mut dyn Source) -> Trial<'a>;

/// Collects violated laws inside one trial.
#[derive(Default)]
pub(crate) struct Checker {
    violations: Vec<Violation>,
}

impl Checker {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn law(&mut self, law: &str, ok: bool) {
        if !ok {
            self.violations.push(Violation {
                law: law.to_string(),
                note: String::new(),
            });
        }
    }

    pub fn note(&mut self, law: &str, ok: bool, note: impl FnOnce() -> String) {
        if !ok {
            self.violations.push(Violation {
                law: law.to_string(),
                note: note(),
            });
        }
    }

    /// Unwraps a library result, recording an error as a violation.
    pub fn ok<T>(&mut self, law: &str, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.violations.push(Violation {
                    law: law.to_string(),
                    note: e.to_string(),
                });
                None
            }
        }
    }

    pub fn finish(self, inputs: impl FnOnce() -> Value) -> Outcome {
        let inputs = if self.violations.is_empty() {
            Value::Null
        } else {
            inputs()
        };
        Outcome {
            violations: self.violations,
            inputs,
        }
    }
}

/// Per-instance suite table.
pub(crate) trait Suites: Lab {
    const INSTANCE: Instance;
    fn exhaustive_ok(_ctx: &Ctx) -> bool {
        false
    }
    fn parts(suite: &str) -> Option<Vec<Part<Self>>> {
        suites::generic::<Self>(suite)
    }
    /// Whether exactly one `g` satisfies `π ∘ g = f`, by search; `None` when
    /// the instance or the size rules out a search.
    fn comprehension_oracle(&self, _f: &Self::Map, _pi: &Self::Map, _found: &Self::Map) -> Option<bool> {
        None
    }
    /// Whether exactly one `h` satisfies `h ∘ ξ = f`, by search.
    fn quotient_oracle(&self, _f: &Self::Map, _xi: &Self::Map, _found: &Self::Map) -> Option<bool> {
        None
    }
}

impl Suites for Sets {
    const INSTANCE: Instance = Instance::Boolean;
    fn exhaustive_ok(ctx: &Ctx) -> bool {
        ctx.max_carrier <= 3
    }
    fn parts(suite: &str) -> Option<Vec<Part<Self>>> {
        special::boolean(suite).or_else(|| suites::generic::<Self>(suite))
    }
    fn comprehension_oracle(&self, f: &PartialFn, pi: &PartialFn, _found: &PartialFn) -> Option<bool> {
        Some(special::count_partial_fns(f.dom, pi.dom, |h| h.then(pi).ok().as_ref() == Some(f)) == 1)
    }
    fn quotient_oracle(&self, f: &PartialFn, xi: &PartialFn, _found: &PartialFn) -> Option<bool> {
        Some(special::count_partial_fns(xi.cod, f.cod, |h| xi.then(h).ok().as_ref() == Some(f)) == 1)
    }
}

impl Suites for Dists {
    const INSTANCE: Instance = Instance::Prob;
    fn parts(suite: &str) -> Option<Vec<Part<Self>>> {
        special::prob(suite).or_else(|| suites::generic::<Self>(suite))
    }
    fn comprehension_oracle(&self, f: &KernelMap, pi: &KernelMap, found: &KernelMap) -> Option<bool> {
        special::kernel_oracle(found, |h| crate::prob::compose_k(pi, h).ok().as_ref() == Some(f))
    }
    fn quotient_oracle(&self, f: &KernelMap, xi: &KernelMap, found: &KernelMap) -> Option<bool> {
        special::kernel_oracle(found, |h| crate::prob::compose_k(h, xi).ok().as_ref() == Some(f))
    }
}

impl Suites for Quantum {
    const INSTANCE: Instance = Instance::Quantum;
    fn parts(suite: &str) -> Option<Vec<Part<Self>>> {
        special::quantum(suite).or_else(|| suites::generic::<Self>(suite))
    }
}

/// Builds one trial. Random runs take every part; enumeration picks one.
fn build<'a, E: Suites>(parts: &[Part<E>], e: &'a E, ctx: &'a Ctx, s: &mut dyn Source, mode: Mode) -> Trial<'a> {
    match mode {
        Mode::Exhaustive => {
            let k = s.below(parts.len());
            parts[k](e, ctx, s)
        }
        Mode::Random => {
            let trials: Vec<Trial<'a>> = parts.iter().map(|p| p(e, ctx, s)).collect();
            Box::new(move || {
                let mut out = Outcome::default();
                let mut inputs = Vec::new();
                for t in trials {
                    let o = t();
                    if !o.violations.is_empty() {
                        out.violations.extend(o.violations);
                        inputs.push(o.inputs);
                    }
                }
                if !inputs.is_empty() {
                    out.inputs = Value::Array(inputs);
                }
                out
            })
        }
    }
}

fn count_cases<E: Suites>(parts: &[Part<E>], e: &E, ctx: &Ctx) -> Option<usize> {
    let mut o = Odometer::new();
    let mut n = 0usize;
    loop {
        drop(build(parts, e, ctx, &mut o, Mode::Exhaustive));
        n += 1;
        if n > EXHAUSTIVE_CAP {
            return None;
        }
        if !o.advance() {
            return Some(n);
        }
    }
}

struct RunOutput {
    mode: Mode,
    trials: usize,
    failed: Vec<(Origin, Outcome)>,
    failed_trials: usize,
}

fn run_instance<E: Suites>(e: &E, info: &SuiteInfo, cfg: &SuiteConfig) -> Result<RunOutput> {
    let parts = E::parts(info.name).ok_or_else(|| Error::NotApplicable {
        suite: info.name.to_string(),
        instance: E::INSTANCE.to_string(),
    })?;
    let ctx = cfg.ctx();
    if cfg.exhaustive && E::exhaustive_ok(&ctx) {
        if let Some(total) = count_cases(&parts, e, &ctx) {
            return Ok(enumerate(&parts, e, &ctx, total));
        }
    }
    let name = E::INSTANCE.name();
    let results: Vec<(u64, Outcome)> = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut s = RandomSource::new(trial_seed(cfg.seed, info.name, name, t));
            let trial = build(&parts, e, &ctx, &mut s, Mode::Random);
            (t, trial())
        })
        .filter(|(_, o)| !o.violations.is_empty())
        .collect();
    let failed_trials = results.len();
    Ok(RunOutput {
        mode: Mode::Random,
        trials: cfg.trials,
        failed: results
            .into_iter()
            .take(MAX_STORED_FAILURES)
            .map(|(trial, o)| (Origin::Random { trial }, o))
            .collect(),
        failed_trials,
    })
}

fn enumerate<E: Suites>(parts: &[Part<E>], e: &E, ctx: &Ctx, total: usize) -> RunOutput {
    const BATCH: usize = 4096;
    let mut o = Odometer::new();
    let mut failed = Vec::new();
    let mut failed_trials = 0;
    let mut more = true;
    while more {
        let mut batch = Vec::with_capacity(BATCH);
        while more && batch.len() < BATCH {
            drop(build(parts, e, ctx, &mut o, Mode::Exhaustive));
            batch.push(o.choices().to_vec());
            more = o.advance();
        }
        let results: Vec<(Vec<usize>, Outcome)> = batch
            .into_par_iter()
            .map(|choices| {
                let mut s = Replay::new(choices.clone());
                let out = build(parts, e, ctx, &mut s, Mode::Exhaustive)();
                (choices, out)
            })
            .filter(|(_, o)| !o.violations.is_empty())
            .collect();
        failed_trials += results.len();
        for (choices, out) in results {
            if failed.len() < MAX_STORED_FAILURES {
                failed.push((Origin::Exhaustive { choices }, out));
            }
        }
    }
    RunOutput {
        mode: Mode::Exhaustive,
        trials: total,
        failed,
        failed_trials,
    }
}

fn dispatch<T>(
    instance: Instance,
    tol: Tolerances,
    run_b: impl Fn(&Sets) -> Result<T>,
    run_p: impl Fn(&Dists) -> Result<T>,
    run_q: impl Fn(&Quantum) -> Result<T>,
) -> Result<T> {
    match instance {
        Instance::Boolean => run_b(&Sets),
        Instance::Prob => run_p(&Dists),
        Instance::Quantum => run_q(&Quantum::new(tol)),
    }
}

/// Runs one registered suite.
pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Result<LawReport> {
    run_suite_in(&Registry::standard(), name, cfg)
}

pub fn run_suite_in(registry: &Registry, name: &str, cfg: &SuiteConfig) -> Result<LawReport> {
    cfg.validate()?;
    let info = registry.get(name)?;
    if !info.instances.contains(&cfg.instance) {
        return Err(Error::NotApplicable {
            suite: name.to_string(),
            instance: cfg.instance.to_string(),
        });
    }
    let start = Instant::now();
    let out = dispatch(
        cfg.instance,
        cfg.tolerances,
        |e| run_instance(e, info, cfg),
        |e| run_instance(e, info, cfg),
        |e| run_instance(e, info, cfg),
    )?;
    let failures: Vec<Case> = out
        .failed
        .into_iter()
        .map(|(origin, o)| Case {
            schema_version: SCHEMA_VERSION,
            suite: info.name.to_string(),
            instance: cfg.instance,
            seed: cfg.seed,
            max_carrier: cfg.max_carrier,
            tolerances: cfg.tolerances,
            unitary: cfg.unitary,
            origin,
            violations: o.violations,
            inputs: o.inputs,
        })
        .collect();
    let status = if !failures.is_empty() {
        Status::Fail
    } else if info.probe {
        Status::Inconclusive
    } else {
        Status::Pass
    };
    Ok(LawReport {
        suite: info.name.to_string(),
        anchor: info.anchor.to_string(),
        instance: cfg.instance,
        seed: cfg.seed,
        trials: out.trials,
        mode: out.mode,
        status,
        failed_trials: out.failed_trials,
        failures,
        elapsed_ms: start.elapsed().as_millis() as u64,
        rng: RNG_NAME.to_string(),
    })
}

fn replay_instance<E: Suites>(e: &E, case: &Case) -> Result<Outcome> {
    let parts = E::parts(&case.suite).ok_or_else(|| Error::NotApplicable {
        suite: case.suite.clone(),
        instance: E::INSTANCE.to_string(),
    })?;
    let ctx = Ctx {
        max_carrier: case.max_carrier,
        tol: case.tolerances,
        unitary: case.unitary,
    };
    Ok(match &case.origin {
        Origin::Random { trial } => {
            let mut s = RandomSource::new(trial_seed(case.seed, &case.suite, E::INSTANCE.name(), *trial));
            build(&parts, e, &ctx, &mut s, Mode::Random)()
        }
        Origin::Exhaustive { choices } => {
            let mut s = Replay::new(choices.clone());
            build(&parts, e, &ctx, &mut s, Mode::Exhaustive)()
        }
    })
}

/// Re-executes a recorded case on its own.
pub fn replay(case: &Case) -> Result<Outcome> {
    if case.schema_version != SCHEMA_VERSION {
        return Err(Error::Parse(format!(
            "case schema version {} is not the supported version {SCHEMA_VERSION}",
            case.schema_version
        )));
    }
    Registry::standard().get(&case.suite)?;
    dispatch(
        case.instance,
        case.tolerances,
        |e| replay_instance(e, case),
        |e| replay_instance(e, case),
        |e| replay_instance(e, case),
    )
}

/// Orthomodularity of the sharp predicates, `p ≤ q ⇒ p ∨ (p⊥ ∧ q) = q`.
pub fn orthomodular_check(instance: Instance, trials: usize, seed: u64) -> Result<LawReport> {
    run_suite("sharp-omlattice", &SuiteConfig::new(instance).seed(seed).trials(trials))
}

/// Runs every applicable suite, or the named ones, in registry order.
pub fn run_all(names: Option<&[String]>, cfg: &SuiteConfig) -> Result<Vec<LawReport>> {
    let registry = Registry::standard();
    match names {
        Some(names) => names.iter().map(|n| run_suite_in(&registry, n, cfg)).collect(),
        None => registry
            .applicable(cfg.instance)
            .map(|s| run_suite_in(&registry, s.name, cfg))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn failure_sets(r: &LawReport) -> Vec<(Origin, Vec<Violation>)> {
        r.failures.iter().map(|c| (c.origin.clone(), c.violations.clone())).collect()
    }

    #[test]
    fn same_seed_same_report() {
        for inst in Instance::ALL {
            let cfg = SuiteConfig::new(inst).seed(7).trials(50).random_only();
            let a = run_suite("bayes", &cfg).unwrap();
            let b = run_suite("bayes", &cfg).unwrap();
            assert_eq!(a.status, Status::Pass);
            assert_eq!(a.failed_trials, b.failed_trials);
        }
        let cfg = SuiteConfig::new(Instance::Quantum).seed(3).trials(60);
        let a = run_suite("duality-perturbed", &cfg).unwrap();
        let b = run_suite("duality-perturbed", &cfg).unwrap();
        assert_eq!(a.failed_trials, b.failed_trials);
        assert_eq!(failure_sets(&a), failure_sets(&b));
    }

    #[test]
    fn boolean_runs_exhaustively() {
        let r = run_suite("bayes", &SuiteConfig::new(Instance::Boolean)).unwrap();
        assert_eq!(r.mode, Mode::Exhaustive);
        assert_eq!(r.status, Status::Pass);
        assert!(r.trials > 200);
        let r = run_suite("bayes", &SuiteConfig::new(Instance::Boolean).max_carrier(4)).unwrap();
        assert_eq!(r.mode, Mode::Random);
        assert_eq!(r.trials, 200);
    }

    #[test]
    fn witness_replays() {
        let cfg = SuiteConfig::new(Instance::Quantum).trials(40);
        let r = run_suite("duality-perturbed", &cfg).unwrap();
        assert_eq!(r.status, Status::Fail);
        let case = &r.failures[0];
        let text = serde_json::to_string(case).unwrap();
        let back: Case = serde_json::from_str(&text).unwrap();
        let again = replay(&back).unwrap();
        assert_eq!(again.violations, case.violations);
    }

    #[test]
    fn central_unitary_is_inconclusive() {
        for u in [UnitaryChoice::Identity, UnitaryChoice::Phase] {
            let cfg = SuiteConfig::new(Instance::Quantum).unitary(u).trials(100);
            let r = run_suite("duality-perturbed", &cfg).unwrap();
            assert_eq!(r.status, Status::Inconclusive, "{u:?}");
        }
    }

    #[test]
    fn schema_mismatch_rejected() {
        let r = run_suite("duality-perturbed", &SuiteConfig::new(Instance::Quantum).trials(40)).unwrap();
        let mut case = r.failures[0].clone();
        case.schema_version = 99;
        assert!(matches!(replay(&case), Err(Error::Parse(_))));
    }

    #[test]
    fn config_errors() {
        let cfg = SuiteConfig::new(Instance::Prob);
        assert!(matches!(run_suite("nosuch", &cfg), Err(Error::UnknownSuite(_))));
        assert!(matches!(run_suite("boolean-laws", &cfg), Err(Error::NotApplicable { .. })));
        assert!(matches!(run_suite("bayes", &cfg.trials(0)), Err(Error::OutOfRange(_))));
        assert!(matches!(run_suite("bayes", &cfg.max_carrier(0)), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn run_all_covers_applicable() {
        let reports = run_all(None, &SuiteConfig::new(Instance::Prob).trials(5)).unwrap();
        assert_eq!(reports.len(), 26);
        assert!(reports.iter().all(|r| r.status == Status::Pass));
    }
}
