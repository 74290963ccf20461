//! Comprehension restricts to where a predicate holds with certainty;
//! quotients discard where it surely fails. Maps factor through both.

use effectus::effectus::{box_subst, ker, Effectus};
use effectus::prob::{Dists, FuzzyPred, KernelMap, SubDist};
use effectus::scalar::{EffectAlgebra, Rational01};

fn r(s: &str) -> Rational01 {
    s.parse().expect("a rational in [0,1]")
}

fn main() -> effectus::Result<()> {
    let e = Dists;
    let p = FuzzyPred(vec![r("1"), r("1/2"), r("1")]);
    let (sub, pi) = e.comprehension(&p);
    println!("[X|p] has {} elements, π_p = {:?}", sub.0, pi);

    // f lands where p is certain, so □f(p) = 1
    let f = KernelMap::new(2, 3, vec![
        SubDist::new([(0, r("1/3")), (2, r("2/3"))])?,
        SubDist::point(2, r("1/2")),
    ])?;
    println!("□f(p) = {:?}", box_subst(&e, &f, &p)?.0);
    let g = e.factor_through_comprehension(&f, &p)?;
    println!("π_p ∘ g = f: {}", e.maps_eq(&e.compose(&pi, &g)?, &f));

    // quotient by a predicate below ker h
    let h = KernelMap::new(3, 2, vec![
        SubDist::point(0, r("1/4")),
        SubDist::new([(0, r("1/2")), (1, r("1/2"))])?,
        SubDist::zero(),
    ])?;
    let k = ker(&e, &h);
    println!("ker h = {:?}", k.0);
    let q = FuzzyPred(vec![r("1/2"), r("0"), r("1")]);
    println!("q ≤ ker h: {}", e.preds(&e.dom(&h)).leq(&q, &k));
    let (_, xi) = e.quotient(&q);
    let hbar = e.factor_through_quotient(&h, &q)?;
    println!("h̄ ∘ ξ_q = h: {}", e.maps_eq(&e.compose(&hbar, &xi)?, &h));
    Ok(())
}
