//! Two projections whose sequential product is neither sharp nor
//! commutative.

use effectus::linalg::CMatrix;
use effectus::quantum::sequential_anomaly;
use effectus::sample::{random_unit_vector, RandomSource};
use effectus::tol::Tolerances;
use num_complex::Complex64 as C64;

fn main() -> effectus::Result<()> {
    let tol = Tolerances::default();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let plus = [C64::new(h, 0.0), C64::new(h, 0.0)];
    let p = CMatrix::diag(&[1.0, 0.0]);
    let q = CMatrix::ket_bra(&plus);

    let a = sequential_anomaly(&p, &q, &plus, &tol)?;
    println!("P & Q = P Q P =\n{:?}", a.and_then);
    println!("‖(P&Q)² − P&Q‖ = {:.4}", a.square_gap);

    let mut rng = RandomSource::new(7);
    for _ in 0..5 {
        let x = random_unit_vector(&mut rng, 2);
        let a = sequential_anomaly(&p, &q, &x, &tol)?;
        println!("‖QPx‖² = {:.4}  ‖PQx‖² = {:.4}", a.qp, a.pq);
    }
    Ok(())
}
