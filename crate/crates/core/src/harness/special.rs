//! Suites that exist for one instance only, and search oracles.

use num_integer::Integer;
use num_bigint::BigInt;
use serde_json::json;

use super::{Checker, Part, Trial};
use crate::boolean::{boolean_algebra_ops, PartialFn, Sets, SubsetPred};
use crate::effectus::{and_then, floor_ceil, is_total, ker, sharp_join, sharp_meet, Effectus};
use crate::prob::{copier, copier_law_holds, first_iso_probe, marginal, Dists, FuzzyPred, KernelMap, SubDist};
use crate::quantum::{duality_check, Quantum, VnAlg};
use crate::sample::{random_effect_matrix, random_unit_vector, Ctx, Lab, Source};
use crate::scalar::{EffectAlgebra, Rational01};
use crate::effectus::Side;
use crate::linalg::CMatrix;
use crate::quantum::BlockEffect;

pub(super) fn boolean(suite: &str) -> Option<Vec<Part<Sets>>> {
    match suite {
        "boolean-laws" => Some(vec![boolean_pair, boolean_triple]),
        _ => None,
    }
}

pub(super) fn prob(suite: &str) -> Option<Vec<Part<Dists>>> {
    match suite {
        "first-iso" => Some(vec![first_iso_bijection, first_iso_counterexample, first_iso_factor]),
        "copier" => Some(vec![copier_asserts, copier_endomaps]),
        _ => None,
    }
}

pub(super) fn quantum(suite: &str) -> Option<Vec<Part<Quantum>>> {
    match suite {
        "duality-perturbed" => Some(vec![perturbed_duality]),
        _ => None,
    }
}

/// Number of partial functions `dom → cod` satisfying `pred`.
pub(super) fn count_partial_fns(dom: usize, cod: usize, pred: impl Fn(&PartialFn) -> bool) -> usize {
    let mut table = vec![None; dom];
    let mut count = 0;
    loop {
        let h = PartialFn { dom, cod, table: table.clone() };
        if pred(&h) {
            count += 1;
        }
        // odometer over {None, Some(0), …, Some(cod-1)}
        let mut i = 0;
        loop {
            if i == dom {
                return count;
            }
            table[i] = match table[i] {
                None if cod > 0 => Some(0),
                Some(v) if v + 1 < cod => Some(v + 1),
                _ => None,
            };
            if table[i].is_some() {
                break;
            }
            i += 1;
        }
    }
}

/// Largest candidate set searched per row.
const ORACLE_LIMIT: usize = 50_000;

/// Every subdistribution on `n` points whose weights are multiples of `1/den`.
fn grid_subdists(n: usize, den: u64) -> Vec<SubDist> {
    fn go(n: usize, left: u64, den: u64, acc: &mut Vec<u64>, out: &mut Vec<SubDist>) {
        if acc.len() == n {
            let d = SubDist::new(
                acc.iter()
                    .enumerate()
                    .map(|(k, &w)| (k, Rational01::new(w as i64, den as i64).expect("w ≤ den"))),
            )
            .expect("mass at most 1");
            out.push(d);
            return;
        }
        for w in 0..=left {
            acc.push(w);
            go(n, left - w, den, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    go(n, den, den, &mut Vec::new(), &mut out);
    out
}

fn grid_size(n: usize, den: u64) -> usize {
    // C(den + n, n)
    let mut c: u128 = 1;
    for k in 1..=n as u128 {
        c = c * (den as u128 + k) / k;
        if c > ORACLE_LIMIT as u128 {
            return usize::MAX;
        }
    }
    c as usize
}

/// Row-by-row search over the grid of the found solution: every row must be
/// the only grid point satisfying `pred` with the other rows held fixed.
pub(super) fn kernel_oracle(found: &KernelMap, pred: impl Fn(&KernelMap) -> bool) -> Option<bool> {
    for (r, row) in found.rows.iter().enumerate() {
        let den = row
            .weights()
            .values()
            .fold(BigInt::from(1), |acc, w| acc.lcm(w.denom()));
        let den: u64 = den.try_into().ok()?;
        if grid_size(found.cod, den) > ORACLE_LIMIT {
            return None;
        }
        let mut hits = 0;
        for cand in grid_subdists(found.cod, den) {
            let mut h = found.clone();
            h.rows[r] = cand;
            if pred(&h) {
                hits += 1;
            }
        }
        if hits != 1 {
            return Some(false);
        }
    }
    Some(true)
}

fn boolean_pair<'a>(e: &'a Sets, ctx: &'a Ctx, s: &mut dyn Source) -> Trial<'a> {
    let x = e.random_obj(s, ctx);
    let p = e.random_pred(s, &x);
    let q = e.random_pred(s, &x);
    Box::new(move || {
        let mut ck = Checker::new();
        let ps = e.preds(&x);
        if let (Some(ops), Some(pq), Some(qp)) = (
            ck.ok("Boolean operations", boolean_algebra_ops(&p, &q)),
            ck.ok("sequential product", and_then(e, &p, &q)),
            ck.ok("sequential product", and_then(e, &q, &p)),
        ) {
            ck.law("p & q is the meet", pq == ops.meet);
            ck.law("p & q = q & p", pq == qp);
            let m = ck.ok("meet", sharp_meet(e, &p, &q));
            ck.law("comprehension meet is the meet", m.as_ref() == Some(&ops.meet));
            let j = ck.ok("join", sharp_join(e, &p, &q));
            ck.law("comprehension join is the join", j.as_ref() == Some(&ops.join));
            ck.law("orthosupplement is the complement", ps.ortho(&p) == ops.complement);
        }
        ck.law("all predicates are sharp", e.is_sharp(&p));
        let (fl, ce) = floor_ceil(e, &p);
        ck.law("floor and ceiling are trivial", fl == p && ce == p);
        let pp = ck.ok("sequential product", and_then(e, &p, &p));
        ck.law("p & p = p", pp.as_ref() == Some(&p));
        let m = e.compose(&e.assert_map(&p), &e.assert_map(&ps.ortho(&p))).expect("shapes agree");
        ck.law("asrt_p ∘ asrt_p⊥ = 0", m.table.iter().all(Option::is_none));
        ck.finish(|| json!({ "x": x, "p": p, "q": q }))
    })
}

fn boolean_triple<'a>(e: &'a Sets, ctx: &'a Ctx, s: &mut dyn Source) -> Trial<'a> {
    let x = e.random_obj(s, ctx);
    let p = e.random_pred(s, &x);
    let q = e.random_pred(s, &x);
    let r = e.random_pred(s, &x);
    Box::new(move || {
        let mut ck = Checker::new();
        let meet = |a: &SubsetPred, b: &SubsetPred| a.meet(b).expect("same carrier");
        let join = |a: &SubsetPred, b: &SubsetPred| a.join(b).expect("same carrier");
        ck.law(
            "meet distributes over join",
            meet(&p, &join(&q, &r)) == join(&meet(&p, &q), &meet(&p, &r)),
        );
        ck.law(
            "join distributes over meet",
            join(&p, &meet(&q, &r)) == meet(&join(&p, &q), &join(&p, &r)),
        );
        ck.law("De Morgan", meet(&p, &q).complement() == join(&p.complement(), &q.complement()));
        let pqr = and_then(e, &p, &q).and_then(|pq| and_then(e, &pq, &r));
        ck.law("sequential product is the triple meet", pqr.ok() == Some(meet(&meet(&p, &q), &r)));
        ck.finish(|| json!({ "x": x, "p": p, "q": q, "r": r }))
    })
}

fn first_iso_bijection<'a>(e: &'a Dists, ctx: &'a Ctx, s: &mut dyn Source) -> Trial<'a> {
    let x = e.random_obj(s, ctx);
    let mut perm: Vec<usize> = (0..x.0).collect();
    for i in (1..perm.len()).rev() {
        perm.swap(i, s.below(i + 1));
    }
    Box::new(move || {
        let mut ck = Checker::new();
        let f = KernelMap::function(x.0, x.0, |k| perm[k]).expect("a permutation");
        let probe = ck.ok("probe", first_iso_probe(&f));
        ck.law("deterministic bijections are isomorphic to their image", probe.is_some_and(|p| p.is_iso));
        ck.finish(|| json!({ "perm": perm }))
    })
}

fn first_iso_counterexample<'a>(e: &'a Dists, ctx: &'a Ctx, s: &mut dyn Source) -> Trial<'a> {
    let x = e.random_obj(s, ctx);
    let y = e.random_obj(s, ctx);
    let targets: Vec<usize> = (0..x.0).map(|_| s.below(y.0)).collect();
    let weights: Vec<Rational01> = (0..x.0)
        .map(|_| {
            let den = 2 + s.below(15);
            Rational01::new(1 + s.below(den - 1) as i64, den as i64).expect("strictly inside (0,1)")
        })
        .collect();
    Box::new(move || {
        let mut ck = Checker::new();
        let rows = targets
            .iter()
            .zip(&weights)
            .map(|(&t, w)| SubDist::point(t, w.clone()))
            .collect();
        let f = KernelMap::new(x.0, y.0, rows).expect("indices in range");
        let probe = ck.ok("probe", first_iso_probe(&f));
        ck.law("canonical map of a strictly partial map is not an isomorphism", probe.is_some_and(|p| !p.is_iso));
        let p = FuzzyPred(weights.iter().map(Rational01::ortho).collect());
        let (_, xi) = e.quotient(&p);
        let probe = ck.ok("probe", first_iso_probe(&xi));
        ck.law("canonical map of ξ_p for fuzzy p is not an isomorphism", probe.is_some_and(|p| !p.is_iso));
        ck.finish(|| json!({ "x": x, "y": y, "targets": targets, "weights": weights }))
    })
}

fn first_iso_factor<'a>(e: &'a Dists, ctx: &'a Ctx, s: &mut dyn Source) -> Trial<'a> {
    let x = e.random_obj(s, ctx);
    let y = e.random_obj(s, ctx);
    let f = e.random_map(s, &x, &y);
    Box::new(move || {
        let mut ck = Checker::new();
        if let Some(probe) = ck.ok("probe", first_iso_probe(&f)) {
            let (fl, _) = floor_ceil(e, &ker(e, &f));
            let (_, xi) = e.quotient(&fl);
            let (_, pi) = e.comprehension(&e.image(&f));
            let back = e
                .compose(&pi, &probe.canonical)
                .and_then(|m| e.compose(&m, &xi));
            ck.law("π_{im f} ∘ canonical ∘ ξ_{⌊ker f⌋} = f", back.ok().as_ref() == Some(&f));
            if f.is_total() && f.rows.iter().all(|r| r.weights().len() == 1) {
                let injective = {
                    let mut seen: Vec<usize> = f.rows.iter().filter_map(|r| r.support().next()).collect();
                    seen.sort_unstable();
                    seen.windows(2).all(|w| w[0] != w[1])
                };
                ck.law("total deterministic maps are iso onto their image iff injective", probe.is_iso == injective);
            }
        }
        ck.finish(|| json!({ "x": x, "y": y, "f": f }))
    })
}

fn copier_asserts<'a>(e: &'a Dists, ctx: &'a Ctx, s: &mut dyn Source) -> Trial<'a> {
    let x = e.random_obj(s, ctx);
    let p = e.random_pred(s, &x);
    let q = e.random_pred(s, &x);
    Box::new(move || {
        let mut ck = Checker::new();
        let (a, b) = (e.assert_map(&p), e.assert_map(&q));
        ck.law("asserts commute with the copier", copier_law_holds(&a) == Ok(true));
        let d = copier(x.0);
        for side in [Side::Left, Side::Right] {
            let m = crate::prob::compose_k(&marginal(x.0, x.0, side), &d);
            ck.law("marginals of the copier are the identity", m.ok().as_ref() == Some(&e.identity(&x)));
        }
        let ab = e.compose(&a, &b).expect("shapes agree");
        let ba = e.compose(&b, &a).expect("shapes agree");
        ck.law("asserts commute", ab == ba);
        ck.law("the copier is total", is_total(e, &d));
        ck.finish(|| json!({ "x": x, "p": p, "q": q }))
    })
}

fn copier_endomaps<'a>(e: &'a Dists, ctx: &'a Ctx, s: &mut dyn Source) -> Trial<'a> {
    let x = e.random_obj(s, ctx);
    let f = e.random_map(s, &x, &x);
    Box::new(move || {
        let mut ck = Checker::new();
        let holds = ck.ok("copier law", copier_law_holds(&f));
        ck.law("copier law holds exactly for maps below the identity", holds == Some(f.is_below_identity()));
        ck.finish(|| json!({ "x": x, "f": f }))
    })
}

fn perturbed_duality<'a>(e: &'a Quantum, ctx: &'a Ctx, s: &mut dyn Source) -> Trial<'a> {
    let p = if s.below(2) == 0 {
        CMatrix::diag(&[1.0, 0.25])
    } else {
        random_effect_matrix(s, 2)
    };
    let v = random_unit_vector(s, 2);
    Box::new(move || {
        let mut ck = Checker::new();
        let u = [ctx.unitary.matrix()];
        let alg = VnAlg::matrix(2);
        let Some(p) = ck.ok("effect", BlockEffect::single(p, &e.tol)) else {
            return ck.finish(|| json!({ "v": v }));
        };
        if let Some(a) = ck.ok("perturbed assert", e.perturbed_assert(&p, &u)) {
            let k = crate::effectus::ker_supp(e, &a);
            ck.law("(1) ker⊥ of the perturbed assert is p", e.preds(&alg).same(&k, &p));
        }
        let asrt = |p: &BlockEffect| e.perturbed_assert(p, &u);
        if let Some(out) = ck.ok("duality check", duality_check(e, &asrt, &p, 0, &v)) {
            ck.note("im(asrt'_p ∘ π) = ⌈p &' im π⌉", out.holds, || format!("gap {:e}", out.gap));
        }
        ck.finish(|| json!({ "unitary": ctx.unitary, "p": p, "v": v }))
    })
}
