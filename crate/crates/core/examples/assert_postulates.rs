//! The assert maps of a block-diagonal algebra and the properties that
//! single them out.

use effectus::effectus::{and_then, floor_ceil, ker_supp, Effectus};
use effectus::linalg::CMatrix;
use effectus::quantum::{BlockEffect, Quantum};
use effectus::scalar::EffectAlgebra;
use effectus::tol::Tolerances;

fn main() -> effectus::Result<()> {
    let tol = Tolerances::default();
    let e = Quantum::new(tol);
    // M₂ ⊕ ℂ
    let p = BlockEffect::new(
        vec![
            CMatrix::real(2, 2, &[0.75, 0.25, 0.25, 0.25]),
            CMatrix::diag(&[0.5]),
        ],
        &tol,
    )?;
    let x = p.alg();
    let preds = e.preds(&x);
    let asrt = e.assert_map(&p);

    println!("ker⊥(asrt_p) = p: {}", preds.same(&ker_supp(&e, &asrt), &p));
    let (_, ceil) = floor_ceil(&e, &p);
    println!("im(asrt_p) = ⌈p⌉: {}", preds.same(&e.image(&asrt), &ceil));

    let twice = e.compose(&asrt, &asrt)?;
    let p2 = and_then(&e, &p, &p)?;
    println!("asrt_p ∘ asrt_p = asrt_(p&p): {}", e.maps_eq(&twice, &e.assert_map(&p2)));

    let q = BlockEffect::new(vec![CMatrix::diag(&[0.0, 1.0]), CMatrix::diag(&[1.0])], &tol)?;
    let pq = and_then(&e, &p, &q)?;
    let qp = and_then(&e, &q, &p)?;
    println!("p & q = q & p: {}", preds.same(&pq, &qp));
    println!("distance between p & q and q & p: {:.3e}", pq.dist(&qp));
    Ok(())
}
