//! Canonical asserts satisfy the image duality on vector states; asserts
//! twisted by a unitary that is not central do not.

use effectus::harness::{replay, run_suite, Instance, SuiteConfig};
use effectus::linalg::CMatrix;
use effectus::effectus::Effectus;
use effectus::quantum::{duality_check, BlockEffect, Quantum};
use effectus::sample::{random_unit_vector, RandomSource, UnitaryChoice};
use effectus::tol::Tolerances;

fn main() -> effectus::Result<()> {
    let tol = Tolerances::default();
    let e = Quantum::new(tol);
    let p = BlockEffect::single(CMatrix::diag(&[1.0, 0.25]), &tol)?;
    let canonical = |p: &BlockEffect| Ok(e.assert_map(p));
    let hadamard = [UnitaryChoice::Hadamard.matrix()];
    let twisted = |p: &BlockEffect| e.perturbed_assert(p, &hadamard);

    let mut rng = RandomSource::new(1);
    for _ in 0..4 {
        let v = random_unit_vector(&mut rng, 2);
        let a = duality_check(&e, &canonical, &p, 0, &v)?;
        let b = duality_check(&e, &twisted, &p, 0, &v)?;
        println!("canonical gap {:.2e}   hadamard-twisted gap {:.2e}", a.gap, b.gap);
    }

    for u in [UnitaryChoice::Hadamard, UnitaryChoice::Phase] {
        let cfg = SuiteConfig::new(Instance::Quantum).unitary(u);
        let r = run_suite("duality-perturbed", &cfg)?;
        println!("{u:?}: {:?}, {} of {} samples violate", r.status, r.failed_trials, r.trials);
        if let Some(case) = r.failures.first() {
            let again = replay(case)?;
            println!("  witness replays: {}", again.violations == case.violations);
        }
    }
    Ok(())
}
