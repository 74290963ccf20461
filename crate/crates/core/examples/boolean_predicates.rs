//! Subsets as predicates on a finite set: validity, asserts and the
//! coincidence of `&` with intersection.

use effectus::boolean::{boolean_algebra_ops, PartialFn, Sets, SubsetPred};
use effectus::effectus::{and_then, condition, validity, Effectus};

fn main() -> effectus::Result<()> {
    let e = Sets;
    let p = SubsetPred::from_members(4, &[0, 1, 2]);
    let q = SubsetPred::from_members(4, &[1, 3]);

    for x in 0..4 {
        let w = PartialFn::new(1, 4, vec![Some(x)])?;
        let c = condition(&e, &w, &p)?.and_then(|c| c.table[0]);
        println!("point {x}: ⊨ p is {}, conditioned on p: {c:?}", validity(&e, &w, &p)?);
    }

    let ops = boolean_algebra_ops(&p, &q)?;
    let seq = and_then(&e, &p, &q)?;
    println!("p & q = {:?}, p ∧ q = {:?}", seq.members(), ops.meet.members());
    println!("p ∨ q = {:?}, p⊥ = {:?}", ops.join.members(), ops.complement.members());

    // asrt_p restricts a function to the points where p holds
    let asrt = e.assert_map(&p);
    println!("asrt_p table: {:?}", asrt.table);
    println!("every subset is sharp: {}", e.is_sharp(&q));
    Ok(())
}
