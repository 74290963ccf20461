//! Exact Bayesian updating with discrete subdistributions.
//!
//! A die that is fair or loaded, a test that is noisy, and the posterior
//! after a positive reading, all in exact rational arithmetic.

use effectus::effectus::{condition, total_probability, validity, Effectus};
use effectus::prob::{pred_pullback, state_pushforward, Dists, FuzzyPred, KernelMap, SubDist};
use effectus::scalar::{EffectAlgebra, Rational01};

fn r(s: &str) -> Rational01 {
    s.parse().expect("a rational in [0,1]")
}

fn main() -> effectus::Result<()> {
    let e = Dists;
    // hypotheses: 0 = fair, 1 = loaded
    let prior = KernelMap::state(2, SubDist::new([(0, r("3/4")), (1, r("1/4"))])?)?;
    // likelihood of a positive test under each hypothesis
    let positive = FuzzyPred(vec![r("1/10"), r("9/10")]);

    let evidence = validity(&e, &prior, &positive)?;
    println!("P(positive) = {evidence}");
    let posterior = condition(&e, &prior, &positive)?.expect("positive has non-zero validity");
    println!("posterior = {:?}", posterior.row(0));

    // belief propagation: a second, independent test
    let second = FuzzyPred(vec![r("1/5"), r("2/3")]);
    let test = [positive.clone(), e.preds(&e.cod(&prior)).ortho(&positive)];
    println!("total probability holds: {}", total_probability(&e, &prior, &test, &second)?);

    // a channel acting forwards on states and backwards on predicates
    let f = KernelMap::new(2, 3, vec![
        SubDist::new([(0, r("1/2")), (1, r("1/2"))])?,
        SubDist::new([(2, r("1"))])?,
    ])?;
    let q = FuzzyPred(vec![r("1"), r("0"), r("1/3")]);
    let pushed = state_pushforward(&f, posterior.row(0))?;
    let pulled = pred_pullback(&f, &q)?;
    println!("f*ω ⊨ q = {}, ω ⊨ f*q = {}", pushed.expect(&q), posterior.row(0).expect(&pulled));
    Ok(())
}
