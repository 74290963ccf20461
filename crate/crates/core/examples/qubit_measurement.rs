//! Measuring |+⟩ in the computational basis: Born rule, instrument and
//! Lüders conditioning.

use effectus::effectus::{codiagonal, condition, instrument, validity, Effectus};
use effectus::linalg::CMatrix;
use effectus::quantum::{BlockEffect, Quantum, VnAlg};
use effectus::tol::Tolerances;
use num_complex::Complex64 as C64;

fn main() -> effectus::Result<()> {
    let tol = Tolerances::default();
    let e = Quantum::new(tol);
    let m2 = VnAlg::matrix(2);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let plus = e.vector_state(&m2, 0, &[C64::new(h, 0.0), C64::new(h, 0.0)])?;
    let p = BlockEffect::single(CMatrix::diag(&[1.0, 0.0]), &tol)?;

    println!("|+⟩ ⊨ |0⟩⟨0| = {:.12}", validity(&e, &plus, &p)?);

    let instr = instrument(&e, &p)?;
    let after = e.compose(&e.compose(&codiagonal(&e, &m2), &instr)?, &plus)?;
    println!("state after measuring and forgetting the outcome:\n{:?}", e.state_of(&after)?.blocks[0]);

    let cond = condition(&e, &plus, &p)?.expect("validity is non-zero");
    println!("|+⟩ conditioned on |0⟩⟨0|:\n{:?}", e.state_of(&cond)?.blocks[0]);

    // a fuzzy effect: conditioning keeps some coherence
    let fuzzy = BlockEffect::single(CMatrix::diag(&[0.9, 0.2]), &tol)?;
    let cond = condition(&e, &plus, &fuzzy)?.expect("validity is non-zero");
    println!("|+⟩ conditioned on diag(0.9, 0.2):\n{:?}", e.state_of(&cond)?.blocks[0]);
    Ok(())
}
