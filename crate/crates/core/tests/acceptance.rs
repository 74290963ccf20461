//! Acceptance criteria, one printed line each.

use std::time::{Duration, Instant};

use effectus::effectus::{codiagonal, condition, instrument, validity, Effectus};
use effectus::harness::{replay, run_suite, Instance, LawReport, Mode, Status, SuiteConfig};
use effectus::linalg::{herm_eig, CMatrix};
use effectus::prob::{first_iso_probe, FuzzyPred, KernelMap, SubDist};
use effectus::quantum::{sequential_anomaly, BlockEffect, Quantum, VnAlg};
use effectus::sample::{random_effect_matrix, random_unit_vector, RandomSource, Source, UnitaryChoice, QUANTUM_LAYOUTS};
use effectus::scalar::Rational01;
use effectus::tol::Tolerances;
use num_complex::Complex64 as C64;

struct Line {
    id: usize,
    what: &'static str,
    ok: bool,
    detail: String,
    elapsed: Duration,
}

fn criterion(id: usize, what: &'static str, f: impl FnOnce() -> Result<String, String>) -> Line {
    let start = Instant::now();
    let (ok, detail) = match f() {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    Line {
        id,
        what,
        ok,
        detail,
        elapsed: start.elapsed(),
    }
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn passing(suite: &str, cfg: &SuiteConfig) -> Result<LawReport, String> {
    let r = run_suite(suite, cfg).map_err(|e| e.to_string())?;
    ensure(
        r.status == Status::Pass,
        format!("{suite} on {}: {} failing of {}", cfg.instance, r.failed_trials, r.trials),
    )?;
    Ok(r)
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, format!("took {t:?}, limit {limit:?}"))
}

const H: f64 = std::f64::consts::FRAC_1_SQRT_2;

fn plus() -> Vec<C64> {
    vec![C64::new(H, 0.0), C64::new(H, 0.0)]
}

fn qubit_facts() -> Result<String, String> {
    let start = Instant::now();
    let tol = Tolerances::default();
    let e = Quantum::new(tol);
    let alg = VnAlg::matrix(2);
    let w = e.vector_state(&alg, 0, &plus()).map_err(|x| x.to_string())?;
    let p = BlockEffect::single(CMatrix::diag(&[1.0, 0.0]), &tol).map_err(|x| x.to_string())?;
    let v = validity(&e, &w, &p).map_err(|x| x.to_string())?;
    ensure((v - 0.5).abs() <= 1e-9, format!("validity {v}"))?;
    let instr = instrument(&e, &p).map_err(|x| x.to_string())?;
    let marginal = e
        .compose(&codiagonal(&e, &alg), &instr)
        .and_then(|m| e.compose(&m, &w))
        .and_then(|m| e.state_of(&m))
        .map_err(|x| x.to_string())?;
    let d = marginal.blocks[0].dist(&CMatrix::diag(&[0.5, 0.5]));
    ensure(d <= 1e-9, format!("marginal off by {d:e}"))?;
    let cond = condition(&e, &w, &p)
        .map_err(|x| x.to_string())?
        .ok_or("condition undefined")?;
    let rho = e.state_of(&cond).map_err(|x| x.to_string())?;
    let d0 = rho.blocks[0].dist(&CMatrix::diag(&[1.0, 0.0]));
    ensure(d0 <= 1e-9, format!("conditional state off by {d0:e}"))?;
    within(Duration::from_secs(1), start)?;
    Ok(format!("validity {v}, marginal err {d:.1e}, conditional err {d0:.1e}"))
}

fn sequential_anomalies() -> Result<String, String> {
    let start = Instant::now();
    let tol = Tolerances::default();
    let p = CMatrix::diag(&[1.0, 0.0]);
    let q = CMatrix::ket_bra(&plus());
    let a = sequential_anomaly(&p, &q, &plus(), &tol).map_err(|x| x.to_string())?;
    let half = CMatrix::diag(&[0.5, 0.0]);
    ensure(a.and_then.dist(&half) <= 1e-9, "P&Q is not ½|0⟩⟨0|")?;
    ensure(a.square_gap >= 0.1, format!("square gap {}", a.square_gap))?;
    let mut s = RandomSource::new(11);
    let mut best = 0.0f64;
    for _ in 0..200 {
        let x = random_unit_vector(&mut s, 2);
        let b = sequential_anomaly(&p, &q, &x, &tol).map_err(|x| x.to_string())?;
        best = best.max(b.order_gap());
    }
    ensure(best > 1e-6, "no order-dependent sample")?;
    within(Duration::from_secs(1), start)?;
    Ok(format!("square gap {:.3}, largest order gap {best:.3}", a.square_gap))
}

fn algebra_suites() -> Result<String, String> {
    let start = Instant::now();
    let mut enumerated = 0;
    for suite in ["pcm-laws", "effect-algebra", "effect-module"] {
        for inst in Instance::ALL {
            passing(suite, &SuiteConfig::new(inst).trials(500).random_only())?;
        }
        let r = passing(suite, &SuiteConfig::new(Instance::Boolean))?;
        ensure(r.mode == Mode::Exhaustive, format!("{suite} was not enumerated"))?;
        enumerated += r.trials;
    }
    within(Duration::from_secs(10), start)?;
    Ok(format!("500 random per instance, {enumerated} enumerated Boolean cases"))
}

fn bayes_total() -> Result<String, String> {
    let start = Instant::now();
    for suite in ["bayes", "total-prob"] {
        passing(suite, &SuiteConfig::new(Instance::Prob).trials(1000).random_only())?;
        passing(suite, &SuiteConfig::new(Instance::Quantum).trials(200))?;
    }
    ensure(Tolerances::default().tight <= 1e-9, "scalar tolerance looser than 1e-9")?;
    within(Duration::from_secs(10), start)?;
    Ok("1000 prob cases exact, 200 quantum cases at 1e-9".into())
}

fn galois() -> Result<String, String> {
    for inst in Instance::ALL {
        passing("galois", &SuiteConfig::new(inst).trials(200))?;
    }
    Ok("boolean, prob and quantum".into())
}

fn telos() -> Result<String, String> {
    ensure(
        QUANTUM_LAYOUTS == [&[2][..], &[3], &[2, 1], &[2, 2]],
        "unexpected quantum block layouts",
    )?;
    ensure(Tolerances::default().law <= 1e-8, "law tolerance looser than 1e-8")?;
    let r = passing("telos-postulates", &SuiteConfig::new(Instance::Quantum).trials(200))?;
    for inst in [Instance::Boolean, Instance::Prob] {
        passing("telos-postulates", &SuiteConfig::new(inst).trials(200))?;
    }
    Ok(format!("{} quantum trials", r.trials))
}

fn sharpness() -> Result<String, String> {
    let tol = Tolerances::default();
    let e = Quantum::new(tol);
    let mut s = RandomSource::new(5);
    let mut sharp = 0;
    for k in 0..500 {
        let n = 1 + s.below(4);
        let m = random_effect_matrix(&mut s, n);
        let spectral = herm_eig(&m, &tol)
            .map_err(|x| x.to_string())?
            .values
            .iter()
            .all(|l| l.abs() <= 1e-6 || (l - 1.0).abs() <= 1e-6);
        let p = BlockEffect::single(m, &tol).map_err(|x| x.to_string())?;
        let algebraic = p.idempotence_gap() <= 1e-8;
        ensure(e.is_sharp(&p) == algebraic, format!("is_sharp disagrees with ‖p²−p‖ at sample {k}"))?;
        ensure(algebraic == spectral, format!("criteria disagree at sample {k}"))?;
        sharp += spectral as usize;
    }
    ensure(sharp > 0 && sharp < 500, "samples did not cover both cases")?;
    Ok(format!("500 effects, {sharp} sharp"))
}

fn duality() -> Result<String, String> {
    passing("duality", &SuiteConfig::new(Instance::Quantum).trials(200))?;
    let cfg = SuiteConfig::new(Instance::Quantum).trials(200).unitary(UnitaryChoice::Hadamard);
    let r = run_suite("duality-perturbed", &cfg).map_err(|e| e.to_string())?;
    ensure(r.status == Status::Fail, "no witness for the Hadamard-perturbed family")?;
    let fixed = r
        .failures
        .iter()
        .find(|c| c.inputs[0]["p"]["blocks"][0]["re"] == serde_json::json!([1.0, 0.0, 0.0, 0.25]))
        .ok_or("no witness with p = diag(1, 1/4)")?;
    for _ in 0..2 {
        let again = replay(fixed).map_err(|e| e.to_string())?;
        ensure(again.violations == fixed.violations, "witness did not replay")?;
        ensure(again.inputs == fixed.inputs, "replayed inputs differ")?;
    }
    Ok(format!("{} of 200 perturbed samples violate duality", r.failed_trials))
}

fn universal_properties() -> Result<String, String> {
    for suite in ["comprehension", "quotient"] {
        for inst in Instance::ALL {
            passing(suite, &SuiteConfig::new(inst).trials(200))?;
        }
    }
    Ok("factorizations recompose, search oracles find no second solution".into())
}

fn first_iso() -> Result<String, String> {
    let half = |t: usize| SubDist::point(t, Rational01::new(1, 2).unwrap());
    let partial = KernelMap::new(2, 2, vec![half(0), half(1)]).unwrap();
    let probe = first_iso_probe(&partial).map_err(|e| e.to_string())?;
    ensure(!probe.is_iso, "½-scaled identity reported isomorphic")?;
    let e = effectus::prob::Dists;
    let p = FuzzyPred(vec![Rational01::new(1, 3).unwrap(), Rational01::new(1, 1).unwrap()]);
    let (_, xi) = e.quotient(&p);
    ensure(!first_iso_probe(&xi).map_err(|e| e.to_string())?.is_iso, "ξ_p reported isomorphic")?;
    for perm in [[0, 1, 2], [2, 0, 1], [1, 0, 2]] {
        let f = KernelMap::function(3, 3, |k| perm[k]).unwrap();
        ensure(first_iso_probe(&f).map_err(|e| e.to_string())?.is_iso, "bijection not isomorphic")?;
    }
    passing("first-iso", &SuiteConfig::new(Instance::Prob).trials(200))?;
    Ok("false on partial family, true on bijections".into())
}

fn decompose() -> Result<String, String> {
    for inst in Instance::ALL {
        passing("decompose", &SuiteConfig::new(inst).trials(200))?;
    }
    Ok("200 trials per instance".into())
}

fn determinism() -> Result<String, String> {
    let mut runs = 0;
    for inst in Instance::ALL {
        for info in effectus::harness::Registry::standard().applicable(inst) {
            let cfg = SuiteConfig::new(inst).seed(2024).trials(100);
            let a = run_suite(info.name, &cfg).map_err(|e| e.to_string())?;
            let b = run_suite(info.name, &cfg).map_err(|e| e.to_string())?;
            let key = |r: &LawReport| {
                r.failures
                    .iter()
                    .map(|c| serde_json::to_string(&(&c.origin, &c.violations)).unwrap())
                    .collect::<Vec<_>>()
            };
            ensure(
                a.failed_trials == b.failed_trials && key(&a) == key(&b) && a.status == b.status,
                format!("{} on {inst} differs between runs", info.name),
            )?;
            runs += 1;
        }
    }
    Ok(format!("{runs} suite runs repeated"))
}

fn main() {
    let lines = vec![
        criterion(1, "qubit measurement facts", qubit_facts),
        criterion(2, "sequential-product anomalies", sequential_anomalies),
        criterion(3, "PCM, effect algebra and effect module laws", algebra_suites),
        criterion(4, "Bayes and total probability", bayes_total),
        criterion(5, "Galois correspondence", galois),
        criterion(6, "telos postulates", telos),
        criterion(7, "sharpness criterion", sharpness),
        criterion(8, "duality probe", duality),
        criterion(9, "comprehension and quotient universal properties", universal_properties),
        criterion(10, "first isomorphism failure", first_iso),
        criterion(11, "decomposition", decompose),
        criterion(12, "determinism", determinism),
    ];
    for l in &lines {
        println!(
            "criterion {:>2} {}: {} ({}; {:.2?})",
            l.id,
            if l.ok { "PASS" } else { "FAIL" },
            l.what,
            l.detail,
            l.elapsed
        );
    }
    let failed: Vec<usize> = lines.iter().filter(|l| !l.ok).map(|l| l.id).collect();
    if !failed.is_empty() {
        eprintln!("failing criteria: {failed:?}");
        std::process::exit(1);
    }
}
