//! Suite bodies written once against [`Lab`].

use serde_json::json;

use super::{Checker, Part, Suites, Trial};
use crate::effectus::{
    and_then, codiagonal, condition, coproduct_map, copair_pred, decompose, floor_ceil, galois_check, instrument,
    is_iso, is_total, is_zero_map, ker, ker_supp, orthomodular_holds, pairing, partial_proj, sharp_join, sharp_meet,
    subst, box_subst, theta, total_probability, validity, Effectus, Side,
};
use crate::sample::{Ctx, Lab, Source};
use crate::scalar::{EffectAlgebra, Rational01, Scalar};

pub(super) fn generic<E: Suites>(suite: &str) -> Option<Vec<Part<E>>> {
    let parts: Vec<Part<E>> = match suite {
        "pcm-laws" => vec![pcm_pair, pcm_assoc, pcm_maps, pcm_maps_assoc],
        "effect-algebra" => vec![ea_ortho, ea_cancel],
        "effect-module" => vec![module_scalars, module_sum, module_maps],
        "pred-functor" => vec![pred_coproduct, pred_subst],
        "kerbot-reflect" => vec![kerbot_sum, kerbot_reflect],
        "zero-total" => vec![zero_partial, zero_total],
        "joint-monic" => vec![joint_butterfly, joint_monic],
        "pairing" => vec![pairing_bound, pairing_random],
        "homset-order" => vec![homset_post, homset_pre, homset_positive],
        "image-laws" => vec![image_compose, image_cotuple],
        "galois" => vec![galois],
        "normalize" => vec![normalize],
        "bayes" => vec![bayes],
        "total-prob" => vec![total_prob],
        "assert-iso" => vec![assert_sef, assert_pred],
        "instrument-sef" => vec![instrument_one, instrument_two],
        "comprehension" => vec![comprehension_basic, comprehension_factor],
        "quotient" => vec![quotient_basic, quotient_factor],
        "decompose" => vec![decompose_total],
        "theta-sharp" => vec![theta_sharp, theta_fuzzy],
        "floor-ceil" => vec![floor_ceil_basic, floor_ceil_extremal],
        "sharp-omlattice" => vec![omlattice],
        "telos-postulates" => vec![
            telos_single,
            telos_side_effect_free,
            telos_sum,
            telos_tensor,
            telos_homomorphism,
        ],
        "duality" => vec![duality],
        _ => return None,
    };
    Some(parts)
}

fn same<E: Effectus>(e: &E, p: &E::Pred, q: &E::Pred) -> bool {
    e.preds(&e.pred_obj(p)).same(p, q)
}

fn leq<E: Effectus>(e: &E, p: &E::Pred, q: &E::Pred) -> bool {
    e.preds(&e.pred_obj(p)).leq(p, q)
}

fn is_one<E: Effectus>(e: &E, p: &E::Pred) -> bool {
    let ps = e.preds(&e.pred_obj(p));
    ps.same(p, &ps.one())
}

fn is_zero<E: Effectus>(e: &E, p: &E::Pred) -> bool {
    let ps = e.preds(&e.pred_obj(p));
    ps.same(p, &ps.zero())
}

fn same_opt<E: Effectus>(e: &E, a: &Option<E::Pred>, b: &Option<E::Pred>) -> bool {
    match (a, b) {
        (None, None) => true,
        (Some(a), Some(b)) => same(e, a, b),
        _ => false,
    }
}

fn ovee_maps_eq<E: Effectus>(e: &E, a: &Option<E::Map>, b: &Option<E::Map>) -> bool {
    match (a, b) {
        (None, None) => true,
        (Some(a), Some(b)) => e.maps_eq(a, b),
        _ => false,
    }
}

/// Two orthogonal maps `X → Y` read off a random bound `X → Y+Y`.
fn orthogonal_pair<E: Lab>(e: &E, s: &mut dyn Source, x: &E::Obj, y: &E::Obj) -> (E::Map, E::Map, E::Map) {
    let h = e.random_map(s, x, &e.coproduct(y, y));
    let f = e.compose(&partial_proj(e, y, y, Side::Left), &h).expect("shapes agree");
    let g = e.compose(&partial_proj(e, y, y, Side::Right), &h).expect("shapes agree");
    (h, f, g)
}

fn pcm_pair<'a, E: Suites>(e: &'a E, ctx: &'a Ctx, s: &mut dyn Source) -> Trial<'a> {
    let x = e.random_obj(s, ctx);
    let a = e.random_pred(s, &x);
    let b = e.random_pred(s, &x);
    Box::new(move || {
        let ps = e.preds(&x);
        let mut ck = Checker::new();
        let ab = ps.ovee(&a, &b);
        ck.law("commutativity", same_opt(e, &ab, &ps.ovee(&b, &a)));
        ck.law("zero is a unit", same_opt(e, &ps.ovee(&a, &ps.zero()), &Some(a.clone())));
        if let Some(ab) = &ab {
            ck.law("summands lie below the sum", ps.leq(&a, ab) && ps.leq(&b, ab));
        }
        ck.law("orthogonal agrees with definedness", ps.orthogonal(&a, &b) == ab.is_some());
        ck.finish(|| json!({ "x": x, "a": a, "b": b }))
    })
}

fn pcm_assoc<'a, E: Suites>(e: &'a E, ctx: &'a Ctx, s: &mut dyn Source) -> Trial<'a> {
    let x = e.random_obj(s, ctx);
    let t = e.random_summable(s, &x, 3);
    let c = e.random_pred(s, &x);
    Box::new(move || {
        let ps = e.preds(&x);
        let mut ck = Checker::new();
        let left = ps.ovee(&t[0], &t[1]).and_then(|u| ps.ovee(&u, &t[2]));
        let right = ps.ovee(&t[1], &t[2]).and_then(|u| ps.ovee(&t[0], &u));
        ck.law("summable triple sums", left.is_some());
        ck.law("associativity", same_opt(e, &left, &right));
        let left = ps.ovee(&t[0], &t[1]).and_then(|u| ps.ovee(&u, &c));
        if left.is_some() {
            let right = ps.ovee(&t[1], &c).and_then(|u| ps.ovee(&t[0], &u));
            ck.law("associativity with definedness", same_opt(e, &left, &right));
        }
        ck.finish(|| json!({ "x": x, "t": t, "c": c }))
    })
}

fn pcm_maps<'a, E: Suites>(e: &'a E, ctx: &'a Ctx, s: &mut dyn Source) -> Trial<'a> {
    let x = e.random_obj(s, ctx);
    let y = e.random_obj(s, ctx);
    let (h, f, g) = orthogonal_pair(e, s, &x, &y);
    Box::new(move || {
        let mut ck = Checker::new();
        let fg = e.ovee_map(&f, &g);
        ck.law("projections of a bound are orthogonal", fg.is_some());
        ck.law("map sum commutes", ovee_maps_eq(e, &fg, &e.ovee_map(&g, &f)));
        if let (Some(fg), Some(nh)) = (&fg, ck.ok("codiagonal", e.compose(&codiagonal(e, &y), &h))) {
            ck.law("sum is the codiagonal of the bound", e.maps_eq(fg, &nh));
        }
        let z = e.zero_map(&x, &y);
        ck.law("zero map is a unit", ovee_maps_eq(e, &e.ovee_map(&f, &z), &Some(f.clone())));
        ck.finish(|| json!({ "x": x, "y": y, "bound": h }))
    })
}

fn pcm_maps_assoc<'a, E: Suites>(e: &'a E, ctx: &'a Ctx, s: &mut dyn Source) -> Trial<'a> {
    let x = e.random_obj(s, ctx);
    let y = e.random_obj(s, ctx);
    let yy = e.coproduct(&y, &y);
    let h = e.random_map(s, &x, &e.coproduct(&yy, &y));
    Box::new(move || {
        let mut ck = Checker::new();
        let outer_l = partial_proj(e, &yy, &y, Side::Left);
        let outer_r = partial_proj(e, &yy, &y, Side::Right);
        let parts = (|| -> crate::Result<[E::Map; 3]> {
            let l = e.compose(&outer_l, &h)?;
            Ok([
                e.compose(&partial_proj(e, &y, &y, Side::Left), &l)?,
                e.compose(&partial_proj(e, &y, &y, Side::Right), &l)?,
                e.compose(&outer_r, &h)?,
            ])
        })();
        if let Some([f1, f2, f3]) = ck.ok("projections", parts) {
            let left = e.ovee_map(&f1, &f2).and_then(|u| e.ovee_map(&u, &f3));
            let right = e.ovee_map(&f2, &f3).and_then(|u| e.ovee_map(&f1, &u));
            ck.law("map sum is defined on a bound", left.is_some());
            ck.law("map sum associativity", ovee_maps_eq(e, &left, &right));
        }
        ck.finish(|| json!({ "x": x, "y": y, "bound": h }))
    })
}

fn ea_ortho<'a, E: Suites>(e: &'a E, ctx: &'a Ctx, s: &mut dyn Source) -> Trial<'a> {
    let x = e.random_obj(s, ctx);
    let a = e.random_pred(s, &x);
    let b = e.random_pred(s, &x);
    Box::new(move || {
        let ps = e.preds(&x);
        let mut ck = Checker::new();
        let ap = ps.ortho(&a);
        ck.law("a ⊎ a⊥ = 1", same_opt(e, &ps.ovee(&a, &ap), &Some(ps.one())));
        ck.law("a⊥⊥ = a", ps.same(&ps.ortho(&ap), &a));
        ck.law("a ⊥ b iff a ≤ b⊥", ps.orthogonal(&a, &b) == ps.leq(&a, &ps.ortho(&b)));
        if let Some(ab) = ps.ovee(&a, &b) {
            if ps.same(&ab, &ps.one()) {
                ck.law("orthosupplement is unique", ps.same(&b, &ap));
            }
        }
        if ps.orthogonal(&ps.one(), &a) {
            ck.law("a ⊥ 1 implies a = 0", ps.same(&a, &ps.zero()));
        }
        if ps.leq(&a, &b) {
            ck.law("orthosupplement reverses order", ps.leq(&ps.ortho(&b), &ap));
        }
        ck.law("0 ≤ a ≤ 1", ps.leq(&ps.zero(), &a) && ps.leq(&a, &ps.one()));
        ck.law("1⊥ = 0", ps.same(&ps.ortho(&ps.one()), &ps.zero()));
        ck.finish(|| json!({ "x": x, "a": a, "b": b }))
    })
}

fn ea_cancel<'a, E: Suites>(e: &'a E, ctx: &'a Ctx, s: &mut dyn Source) -> Trial<'a> {
    let x = e.random_obj(s, ctx);
    let t = e.random_summable(s, &x, 2);
    let c = e.random_pred(s, &x);
    Box::new(move || {
        let ps = e.preds(&x);
        let mut ck = Checker::new();
        let Some(sum) = ps.ovee(&t[0], &t[1]) else {
            ck.law("summable pair sums", false);
            return ck.finish(|| json!({ "x": x, "t": t }));
        };
        if let Some(other) = ps.ovee(&t[0], &c) {
            if ps.same(&other, &sum) {
                ck.law("cancellation", ps.same(&c, &t[1]));
            }
        }
        if ps.same(&sum, &ps.zero()) {
            ck.law("positivity", ps.same(&t[0], &ps.zero()) && ps.same(&t[1], &ps.zero()));
        }
        let rest = ps.ortho(&sum);
        let whole = ps.ovee(&sum, &rest);
        ck.law("sum and its orthosupplement make 1", same_opt(e, &whole, &Some(ps.one())));
        ck.law(
            "difference recovers the summand",
            same_opt(e, &ps.ovee(&t[0], &ps.ortho(&sum)).map(|u| ps.ortho(&u)), &Some(t[1].clone())),
        );
        ck.finish(|| json!({ "x": x, "t": t, "c": c }))
    })
}

fn module_scalars<'a, E: Suites>(e: &'a E, ctx: &'a Ctx, s: &mut dyn Source) -> Trial<'a> {
    let x = e.random_obj(s, ctx);
    let a = e.random_pred(s, &x);
    let r = e.random_scalar(s);
    let t = e.random_scalar(s);
    Box::new(move || {
        let ps = e.preds(&x);
        let mut ck = Checker::new();
        let scale = |ck: &mut Checker, r: &Rational01, a: &E::Pred| ck.ok("scalar action", ps.scale(r, a));
        if let Some(one_a) = scale(&mut ck, &Rational01::one(), &a) {
            ck.law("1·a = a", ps.same(&one_a, &a));
        }
        if let Some(zero_a) = scale(&mut ck, &Rational01::zero(), &a) {
            ck.law("0·a = 0", ps.same(&zero_a, &ps.zero()));
        }
        let ta = scale(&mut ck, &t, &a);
        let r_ta = ta.as_ref().and_then(|ta| scale(&mut ck, &r, ta));
        let rt_a = scale(&mut ck, &r.mul(&t), &a);
        ck.law("r·(t·a) = (rt)·a", same_opt(e, &r_ta, &rt_a));
        if let Some(rt) = r.ovee(&t) {
            let lhs = scale(&mut ck, &rt, &a);
            let ra = scale(&mut ck, &r, &a);
            let rhs = match (&ra, &ta) {
                (Some(ra), Some(ta)) => ps.ovee(ra, ta),
                _ => None,
            };
            ck.law("(r ⊎ t)·a = r·a ⊎ t·a", same_opt(e, &lhs, &rhs));
        }
        if let Some(one) = scale(&mut ck, &r, &ps.one()) {
            if let Some(ra) = scale(&mut ck, &r, &a) {
                ck.law("r·a ≤ r·1", ps.leq(&ra, &one));
            }
        }
        ck.finish(|| json!({ "x": x, "a": a, "r": r, "t": t }))
    })
}

fn module_sum<'a, E: Suites>(e: &'a E, ctx: &'a Ctx, s: &mut dyn Source) -> Trial<'a> {
    let x = e.random_obj(s, ctx);
    let t = e.random_summable(s, &x, 2);
    let r = e.random_scalar(s);
    Box::new(move || {
        let ps = e.preds(&x);
        let mut ck = Checker::new();
        let sum = ps.ovee(&t[0], &t[1]);
        let lhs = sum.as_ref().and_then(|u| ck.ok("scalar action", ps.scale(&r, u)));
        let parts = (ck.ok("scalar action", ps.scale(&r, &t[0])), ck.ok("scalar action", ps.scale(&r, &t[1])));
        let rhs = match parts {
            (Some(a), Some(b)) => ps.ovee(&a, &b),
            _ => None,
        };
        ck.law("r·(a ⊎ b) = r·a ⊎ r·b", lhs.is_some() && same_opt(e, &lhs, &rhs));
        ck.finish(|| json!({ "x": x, "t": t, "r": r }))
    })
}

fn module_maps<'a, E: Suites>(e: &'a E, ctx: &'a Ctx, s: &mut dyn Source) -> Trial<'a> {
    let x = e.random_obj(s, ctx);
    let y = e.random_obj(s, ctx);
    let f = e.random_map(s, &x, &y);
    let r = e.random_scalar(s);
    Box::new(move || {
        let ps = e.preds(&x);
        let mut ck = Checker::new();
        let scaled = e.scale_map(&E::Scalar::from_rational(&r), &f);
        if let Some(rhs) = ck.ok("scalar action", ps.scale(&r, &ker_supp(e, &f))) {
            ck.law("ker⊥(r·f) = r·ker⊥(f)", ps.same(&ker_supp(e, &scaled), &rhs));
        }
        ck.finish(|| json!({ "x": x, "y": y, "f": f, "r": r }))
    })
}

fn pred_coproduct<'a, E: Suites>(e: &'a E, ctx: &'a Ctx, s: &mut dyn Source) -> Trial<'a> {
    let x = e.random_obj(s, ctx);
    let y = e.random_obj(s, ctx);
    let p = e.random_pred(s, &x);
    let q = e.random_pred(s, &y);
    Box::new(move || {
        let mut ck = Checker::new();
        if let Some(pq) = ck.ok("cotuple of predicates", copair_pred(e, &p, &q)) {
            let l = ck.ok("restriction", subst(e, &e.inj(&x, &y, Side::Left), &pq));
            let r = ck.ok("restriction", subst(e, &e.inj(&x, &y, Side::Right), &pq));
            ck.law("restricts to the left summand", l.is_some_and(|l| same(e, &l, &p)));
            ck.law("restricts to the right summand", r.is_some_and(|r| same(e, &r, &q)));
        }
        let ps0 = e.preds(&e.empty_obj());
        ck.law("predicates on 0 form a singleton", ps0.same(&ps0.zero(), &ps0.one()));
        ck.finish(|| json!({ "x": x, "y": y, "p": p, "q": q }))
    })
}

fn pred_subst<'a, E: Suites>(e: &'a E, ctx: &'a Ctx, s: &mut dyn Source) -> Trial<'a> {
    let x = e.random_obj(s, ctx);
    let y = e.random_obj(s, ctx);
    let f = e.random_total(s, &x, &y);
    let t = e.random_summable(s, &y, 2);
    let r = e.random_scalar(s);
    Box::new(move || {
        let (px, py) = (e.preds(&x), e.preds(&y));
        let mut ck = Checker::new();
        let sub = |q: &E::Pred| subst(e, &f, q);
        if let (Some(a), Some(b)) = (ck.ok("substitution", sub(&t[0])), ck.ok("substitution", sub(&t[1]))) {
            let lhs = py.ovee(&t[0], &t[1]).and_then(|u| sub(&u).ok());
            ck.law("substitution preserves ⊎", same_opt(e, &lhs, &px.ovee(&a, &b)));
            if let (Some(rq), Some(ra)) = (ck.ok("scalar action", py.scale(&r, &t[0])), ck.ok("scalar action", px.scale(&r, &a))) {
                let lhs = ck.ok("substitution", sub(&rq));
                ck.law("substitution preserves scalars", lhs.is_some_and(|l| px.same(&l, &ra)));
            }
        }
        let one = ck.ok("substitution", sub(&py.one()));
        ck.law("substitution along a total map preserves 1", one.is_some_and(|o| is_one(e, &o)));
        ck.finish(|| json!({ "x": x, "y": y, "f": f, "t": t, "r": r }))
    })
}

fn kerbot_sum<'a, E: Suites>(e: &'a E, ctx: &'a Ctx, s: &mut dyn Source) -> Trial<'a> {
    let x = e.random_obj(s, ctx);
    let y = e.random_obj(s, ctx);
    let (h, f, g) = orthogonal_pair(e, s, &x, &y);
    Box::new(move || {
        let ps = e.preds(&x);
        let mut ck = Checker::new();
        let (kf, kg) = (ker_supp(e, &f), ker_supp(e, &g));
        let sum = ps.ovee(&kf, &kg);
        ck.law("ker⊥ preserves ⊥", sum.is_some());
        let fg = e.ovee_map(&f, &g);
        if let (Some(sum), Some(fg)) = (&sum, &fg) {
            ck.law("ker⊥ preserves ⊎", ps.same(&ker_supp(e, fg), sum));
        }
        ck.law("ker⊥ of a bound", same_opt(e, &sum, &Some(ker_supp(e, &h))));
        ck.finish(|| json!({ "x": x, "y": y, "bound": h }))
    })
}

fn kerbot_reflect<'a, E: Suites>(e: &'a E, ctx: &'a Ctx, s: &mut dyn Source) -> Trial<'a> {
    let x = e.random_obj(s, ctx);
    let y = e.random_obj(s, ctx);
    let f = e.random_map(s, &x, &y);
    let g = e.random_map(s, &x, &y);
    Box::new(move || {
        let ps = e.preds(&x);
        let mut ck = Checker::new();
        let (kf, kg) = (ker_supp(e, &f), ker_supp(e, &g));
        ck.law("ker⊥ reflects ⊥", ps.orthogonal(&kf, &kg) == e.ovee_map(&f, &g).is_some());
        ck.law("ker⊥ f = 0 iff f = 0", ps.same(&kf, &ps.zero()) == is_zero_map(e, &f));
        ck.finish(|| json!({ "x": x, "y": y, "f": f, "g": g }))
    })
}

fn zero_partial<'a, E: Suites>(e: &'a E, ctx: &'a Ctx, s: &mut dyn Source) -> Trial<'a> {
    let x = e.random_obj(s, ctx);
    let y = e.random_obj(s, ctx);
    let z = e.random_obj(s, ctx);
    let f = e.random_map(s, &x, &y);
    let g = e.random_map(s, &y, &z);
    Box::new(move || {
        let mut ck = Checker::new();
        let zl = ck.ok("composition", e.compose(&e.zero_map(&y, &z), &f));
        ck.law("0 ∘ f = 0", zl.is_some_and(|m| is_zero_map(e, &m)));
        let zr = ck.ok("composition", e.compose(&g, &e.zero_map(&x, &y)));
        ck.law("g ∘ 0 = 0", zr.is_some_and(|m| is_zero_map(e, &m)));
        if let Some(gf) = ck.ok("composition", e.compose(&g, &f)) {
            ck.law("ker⊥(g∘f) ≤ ker⊥ f", leq(e, &ker_supp(e, &gf), &ker_supp(e, &f)));
        }
        ck.law("ker f = 1 iff f = 0", is_one(e, &ker(e, &f)) == is_zero_map(e, &f));
        ck.law("identity is total", is_total(e, &e.identity(&x)));
        ck.finish(|| json!({ "x": x, "y": y, "z": z, "f": f, "g": g }))
    })
}

fn zero_total<'a, E: Suites>(e: &'a E, ctx: &'a Ctx, s: &mut dyn Source) -> Trial<'a> {
    let x = e.random_obj(s, ctx);
    let y = e.random_obj(s, ctx);
    let z = e.random_obj(s, ctx);
    let f = e.random_total(s, &x, &y);
    let g = e.random_total(s, &y, &z);
    Box::new(move || {
        let mut ck = Checker::new();
        ck.law("sampled total map is total", is_total(e, &f) && is_total(e, &g));
        let gf = ck.ok("composition", e.compose(&g, &f));
        ck.law("total maps compose to total maps", gf.is_some_and(|m| is_total(e, &m)));
        ck.law("injections are total", is_total(e, &e.inj(&x, &y, Side::Left)) && is_total(e, &e.inj(&x, &y, Side::Right)));
        ck.finish(|| json!({ "x": x, "y": y, "z": z, "f": f, "g": g }))
    })
}

fn joint_butterfly<'a, E: Suites>(e: &'a E, ctx: &'a Ctx, s: &mut dyn Source) -> Trial<'a> {
    let x = e.random_obj(s, ctx);
    let y = e.random_obj(s, ctx);
    Box::new(move || {
        let mut ck = Checker::new();
        for (a, b, expect_id) in [
            (Side::Left, Side::Left, true),
            (Side::Left, Side::Right, false),
            (Side::Right, Side::Left, false),
            (Side::Right, Side::Right, true),
        ] {
            let m = e.compose(&partial_proj(e, &x, &y, a), &e.inj(&x, &y, b));
            let Some(m) = ck.ok("composition", m) else { continue };
            let ok = if expect_id {
                let obj = if a == Side::Left { &x } else { &y };
                e.maps_eq(&m, &e.identity(obj))
            } else {
                is_zero_map(e, &m)
            };
            ck.law("partial projections against injections", ok);
        }
        ck.finish(|| json!({ "x": x, "y": y }))
    })
}

fn joint_monic<'a, E: Suites>(e: &'a E, ctx: &'a Ctx, s: &mut dyn Source) -> Trial<'a> {
    let x = e.random_obj(s, ctx);
    let y = e.random_obj(s, ctx);
    let z = e.random_obj(s, ctx);
    let k = e.random_map(s, &x, &e.coproduct(&y, &z));
    let g = e.random_map(s, &x, &e.coproduct(&y, &z));
    Box::new(move || {
        let mut ck = Checker::new();
        let proj = |m: &E::Map, side| e.compose(&partial_proj(e, &y, &z, side), m);
        let (Some(k1), Some(k2), Some(g1), Some(g2)) = (
            ck.ok("composition", proj(&k, Side::Left)),
            ck.ok("composition", proj(&k, Side::Right)),
            ck.ok("composition", proj(&g, Side::Left)),
            ck.ok("composition", proj(&g, Side::Right)),
        ) else {
            return ck.finish(|| json!({ "k": k, "g": g }));
        };
        if let Some(b) = ck.ok("pairing", pairing(e, &[k1.clone(), k2.clone()])) {
            ck.law("a map is determined by its partial projections", e.maps_eq(&b, &k));
        }
        if e.maps_eq(&k1, &g1) && e.maps_eq(&k2, &g2) {
            ck.law("partial projections are jointly monic", e.maps_eq(&k, &g));
        }
        ck.finish(|| json!({ "x": x, "y": y, "z": z, "k": k, "g": g }))
    })
}

fn pairing_bound<'a, E: Suites>(e: &'a E, ctx: &'a Ctx, s: &mut dyn Source) -> Trial<'a> {
    let x = e.random_obj(s, ctx);
    let y = e.random_obj(s, ctx);
    let (h, f, g) = orthogonal_pair(e, s, &x, &y);
    let t = e.random_total(s, &x, &e.coproduct(&y, &y));
    Box::new(move || {
        let ps = e.preds(&x);
        let mut ck = Checker::new();
        if let Some(b) = ck.ok("pairing", pairing(e, &[f.clone(), g.clone()])) {
            let b1 = ck.ok("composition", e.compose(&partial_proj(e, &y, &y, Side::Left), &b));
            let b2 = ck.ok("composition", e.compose(&partial_proj(e, &y, &y, Side::Right), &b));
            ck.law("left projection of the pairing", b1.is_some_and(|m| e.maps_eq(&m, &f)));
            ck.law("right projection of the pairing", b2.is_some_and(|m| e.maps_eq(&m, &g)));
            let sum_is_one = ps
                .ovee(&ker_supp(e, &f), &ker_supp(e, &g))
                .is_some_and(|u| ps.same(&u, &ps.one()));
            ck.law("pairing is total iff the kernels sum to 1", is_total(e, &b) == sum_is_one);
        }
        let t1 = e.compose(&partial_proj(e, &y, &y, Side::Left), &t).expect("shapes agree");
        let t2 = e.compose(&partial_proj(e, &y, &y, Side::Right), &t).expect("shapes agree");
        let b = ck.ok("pairing", pairing(e, &[t1, t2]));
        ck.law("total map is the unique pairing of its projections", b.is_some_and(|b| e.maps_eq(&b, &t) && is_total(e, &b)));
        if let Some(b) = ck.ok("pairing", pairing(e, &[f.clone(), e.zero_map(&x, &y)])) {
            let k = e.compose(&e.inj(&y, &y, Side::Left), &f).expect("shapes agree");
            ck.law("pairing with zero is an injection", e.maps_eq(&b, &k));
        }
        ck.finish(|| json!({ "x": x, "y": y, "bound": h, "total": t }))
    })
}

fn pairing_random<'a, E: Suites>(e: &'a E, ctx: &'a Ctx, s: &mut dyn Source) -> Trial<'a> {
    let x = e.random_obj(s, ctx);
    let y = e.random_obj(s, ctx);
    let f = e.random_map(s, &x, &y);
    let g = e.random_map(s, &x, &y);
    Box::new(move || {
        let ps = e.preds(&x);
        let mut ck = Checker::new();
        let orth = ps.orthogonal(&ker_supp(e, &f), &ker_supp(e, &g));
        let b = pairing(e, &[f.clone(), g.clone()]);
        ck.note("pairing exists iff kernels are orthogonal", b.is_ok() == orth, || format!("{b:?}"));
        ck.finish(|| json!({ "x": x, "y": y, "f": f, "g": g }))
    })
}

fn homset_post<'a, E: Suites>(e: &'a E, ctx: &'a Ctx, s: &mut dyn Source) -> Trial<'a> {
    let x = e.random_obj(s, ctx);
    let y = e.random_obj(s, ctx);
    let z = e.random_obj(s, ctx);
    let (h, f, g) = orthogonal_pair(e, s, &x, &y);
    let k = e.random_map(s, &y, &z);
    Box::new(move || {
        let mut ck = Checker::new();
        let fg = e.ovee_map(&f, &g);
        let lhs = fg.as_ref().and_then(|fg| e.compose(&k, fg).ok());
        let (kf, kg) = (e.compose(&k, &f), e.compose(&k, &g));
        let rhs = match (kf, kg) {
            (Ok(a), Ok(b)) => e.ovee_map(&a, &b),
            _ => None,
        };
        ck.law("post-composition preserves ⊎", lhs.is_some() && ovee_maps_eq(e, &lhs, &rhs));
        ck.finish(|| json!({ "x": x, "y": y, "z": z, "bound": h, "k": k }))
    })
}

fn homset_pre<'a, E: Suites>(e: &'a E, ctx: &'a Ctx, s: &mut dyn Source) -> Trial<'a> {
    let w = e.random_obj(s, ctx);
    let x = e.random_obj(s, ctx);
    let y = e.random_obj(s, ctx);
    let (h, f, g) = orthogonal_pair(e, s, &x, &y);
    let m = e.random_map(s, &w, &x);
    Box::new(move || {
        let mut ck = Checker::new();
        let fg = e.ovee_map(&f, &g);
        let lhs = fg.as_ref().and_then(|fg| e.compose(fg, &m).ok());
        let rhs = match (e.compose(&f, &m), e.compose(&g, &m)) {
            (Ok(a), Ok(b)) => e.ovee_map(&a, &b),
            _ => None,
        };
        ck.law("pre-composition preserves ⊎", lhs.is_some() && ovee_maps_eq(e, &lhs, &rhs));
        ck.finish(|| json!({ "w": w, "x": x, "y": y, "bound": h, "m": m }))
    })
}

fn homset_positive<'a, E: Suites>(e: &'a E, ctx: &'a Ctx, s: &mut dyn Source) -> Trial<'a> {
    let x = e.random_obj(s, ctx);
    let y = e.random_obj(s, ctx);
    let (h, f, g) = orthogonal_pair(e, s, &x, &y);
    Box::new(move || {
        let mut ck = Checker::new();
        if let Some(fg) = e.ovee_map(&f, &g) {
            if is_zero_map(e, &fg) {
                ck.law("positivity of map sums", is_zero_map(e, &f) && is_zero_map(e, &g));
            }
            if e.maps_eq(&fg, &g) {
                ck.law("f ⊎ g = g implies f = 0", is_zero_map(e, &f));
            }
            ck.law(
                "ker⊥ is monotone along ⊎",
                leq(e, &ker_supp(e, &f), &ker_supp(e, &fg)) && leq(e, &ker_supp(e, &g), &ker_supp(e, &fg)),
            );
        }
        ck.finish(|| json!({ "x": x, "y": y, "bound": h }))
    })
}

fn image_compose<'a, E: Suites>(e: &'a E, ctx: &'a Ctx, s: &mut dyn Source) -> Trial<'a> {
    let x = e.random_obj(s, ctx);
    let y = e.random_obj(s, ctx);
    let z = e.random_obj(s, ctx);
    let f = e.random_map(s, &x, &y);
    let g = e.random_map(s, &y, &z);
    let p = e.random_pred(s, &y);
    let r = e.random_scalar(s);
    Box::new(move || {
        let py = e.preds(&y);
        let mut ck = Checker::new();
        let im = e.image(&f);
        ck.law("image is sharp", e.is_sharp(&im));
        let boxed = ck.ok("substitution", box_subst(e, &f, &im));
        ck.law("□f(im f) = 1", boxed.is_some_and(|b| is_one(e, &b)));
        if let Some(gf) = ck.ok("composition", e.compose(&g, &f)) {
            ck.law("im(g∘f) ≤ im g", leq(e, &e.image(&gf), &e.image(&g)));
            ck.law("g∘f = 0 iff im f ≤ ker g", is_zero_map(e, &gf) == leq(e, &im, &ker(e, &g)));
        }
        let killer = ck.ok("scalar action", py.scale(&r, &py.ortho(&im)));
        for q in [Some(p.clone()), killer].into_iter().flatten() {
            if let Some(qf) = ck.ok("substitution", subst(e, &f, &q)) {
                ck.law("q∘f = 0 iff im f ≤ q⊥", is_zero(e, &qf) == leq(e, &im, &py.ortho(&q)));
            }
        }
        ck.finish(|| json!({ "x": x, "y": y, "z": z, "f": f, "g": g, "p": p, "r": r }))
    })
}

fn image_cotuple<'a, E: Suites>(e: &'a E, ctx: &'a Ctx, s: &mut dyn Source) -> Trial<'a> {
    let x = e.random_obj(s, ctx);
    let y = e.random_obj(s, ctx);
    let f = e.random_map(s, &x, &y);
    let g = e.random_map(s, &x, &y);
    Box::new(move || {
        let py = e.preds(&y);
        let mut ck = Checker::new();
        if let Some(fg) = ck.ok("cotuple", e.cotuple(&f, &g)) {
            let join = ck.ok("join", sharp_join(e, &e.image(&f), &e.image(&g)));
            ck.law("im[f,g] = im f ∨ im g", join.is_some_and(|j| py.same(&e.image(&fg), &j)));
        }
        ck.law("im 0 = 0", is_zero(e, &e.image(&e.zero_map(&x, &y))));
        ck.law("im id = 1", is_one(e, &e.image(&e.identity(&y))));
        ck.finish(|| json!({ "x": x, "y": y, "f": f, "g": g }))
    })
}

fn galois<'a, E: Suites>(e: &'a E, ctx: &'a Ctx, s: &mut dyn Source) -> Trial<'a> {
    let x = e.random_obj(s, ctx);
    let y = e.random_obj(s, ctx);
    let f = e.random_total(s, &x, &y);
    let w = e.random_state(s, &x);
    let q = e.random_pred(s, &y);
    Box::new(move || {
        let mut ck = Checker::new();
        let ok = ck.ok("validity", galois_check(e, &f, &w, &q));
        ck.law("f∘ω ⊨ q equals ω ⊨ □f(q)", ok == Some(true));
        let img = ck.ok("substitution", box_subst(e, &f, &e.preds(&y).one()));
        ck.law("□f(1) = 1 for total f", img.is_some_and(|p| is_one(e, &p)));
        ck.finish(|| json!({ "x": x, "y": y, "f": f, "state": w, "q": q }))
    })
}

fn normalize<'a, E: Suites>(e: &'a E, ctx: &'a Ctx, s: &mut dyn Source) -> Trial<'a> {
    let x = e.random_obj(s, ctx);
    let w = e.random_state(s, &x);
    let r = e.random_scalar(s);
    Box::new(move || {
        let mut ck = Checker::new();
        let r_s = E::Scalar::from_rational(&r);
        let sub = e.scale_map(&r_s, &w);
        match e.normalize(&sub) {
            None => ck.law("only the zero substate fails to normalise", r.is_zero()),
            Some((rho, mass)) => {
                ck.law("zero substate does not normalise", !r.is_zero());
                ck.law("normalised state is total", is_total(e, &rho));
                ck.law("normalising scalar is the mass", e.scalars_eq(&mass, &r_s));
                ck.law("ρ·s recovers the substate", e.maps_eq(&e.scale_map(&mass, &rho), &sub));
                ck.law("normalisation is unique", e.maps_eq(&rho, &w));
            }
        }
        ck.finish(|| json!({ "x": x, "state": w, "r": r }))
    })
}

fn bayes<'a, E: Suites>(e: &'a E, ctx: &'a Ctx, s: &mut dyn Source) -> Trial<'a> {
    let x = e.random_obj(s, ctx);
    let w = e.random_state(s, &x);
    let p = e.random_pred(s, &x);
    let q = e.random_pred(s, &x);
    Box::new(move || {
        let mut ck = Checker::new();
        let (Some(wp), Some(cond), Some(pq)) = (
            ck.ok("validity", validity(e, &w, &p)),
            ck.ok("conditioning", condition(e, &w, &p)),
            ck.ok("sequential product", and_then(e, &p, &q)),
        ) else {
            return ck.finish(|| json!({ "x": x, "state": w, "p": p, "q": q }));
        };
        let zero = e.scalars_eq(&wp, &E::Scalar::zero());
        ck.law("conditioning is defined iff ω ⊨ p > 0", cond.is_none() == zero);
        if let (Some(cond), Some(joint)) = (cond, ck.ok("validity", validity(e, &w, &pq))) {
            let post = ck.ok("validity", validity(e, &cond, &q));
            ck.law("(ω|p ⊨ q)·(ω ⊨ p) = ω ⊨ p & q", post.is_some_and(|v| e.scalars_eq(&v.mul(&wp), &joint)));
            ck.law("conditioned state is total", is_total(e, &cond));
        }
        ck.finish(|| json!({ "x": x, "state": w, "p": p, "q": q }))
    })
}

fn total_prob<'a, E: Suites>(e: &'a E, ctx: &'a Ctx, s: &mut dyn Source) -> Trial<'a> {
    let x = e.random_obj(s, ctx);
    let w = e.random_state(s, &x);
    let (t, q) = e.random_compatible(s, &x, 2);
    Box::new(move || {
        let ps = e.preds(&x);
        let mut ck = Checker::new();
        if let Some(sum) = ps.ovee(&t[0], &t[1]) {
            let test = [t[0].clone(), t[1].clone(), ps.ortho(&sum)];
            let ok = ck.ok("belief propagation", total_probability(e, &w, &test, &q));
            ck.law("three-outcome test", ok == Some(true));
        }
        let binary = [t[0].clone(), ps.ortho(&t[0])];
        let ok = ck.ok("belief propagation", total_probability(e, &w, &binary, &q));
        ck.law("two-outcome test", ok == Some(true));
        let trivial = ck.ok("belief propagation", total_probability(e, &w, &[ps.one()], &q));
        ck.law("single-outcome test", trivial == Some(true));
        let bad = total_probability(e, &w, &[t[0].clone()], &q);
        ck.law("non-test rejected", bad.is_err() || ps.same(&t[0], &ps.one()));
        ck.finish(|| json!({ "x": x, "state": w, "t": t, "q": q }))
    })
}

fn assert_sef<'a, E: Suites>(e: &'a E, ctx: &'a Ctx, s: &mut dyn Source) -> Trial<'a> {
    let x = e.random_obj(s, ctx);
    let f = e.random_below_id(s, &x);
    Box::new(move || {
        let mut ck = Checker::new();
        let p = ker_supp(e, &f);
        ck.law("f ≤ id is the assert of its kernel supplement", e.maps_eq(&f, &e.assert_map(&p)));
        ck.finish(|| json!({ "x": x, "f": f }))
    })
}

fn assert_pred<'a, E: Suites>(e: &'a E, ctx: &'a Ctx, s: &mut dyn Source) -> Trial<'a> {
    let x = e.random_obj(s, ctx);
    let p = e.random_pred(s, &x);
    Box::new(move || {
        let ps = e.preds(&x);
        let mut ck = Checker::new();
        ck.law("ker⊥ asrt_p = p", ps.same(&ker_supp(e, &e.assert_map(&p)), &p));
        ck.law("asrt_1 = id", e.maps_eq(&e.assert_map(&ps.one()), &e.identity(&x)));
        ck.law("asrt_0 = 0", is_zero_map(e, &e.assert_map(&ps.zero())));
        ck.finish(|| json!({ "x": x, "p": p }))
    })
}

fn instrument_one<'a, E: Suites>(e: &'a E, ctx: &'a Ctx, s: &mut dyn Source) -> Trial<'a> {
    let x = e.random_obj(s, ctx);
    let p = e.random_pred(s, &x);
    Box::new(move || {
        let ps = e.preds(&x);
        let mut ck = Checker::new();
        if let Some(instr) = ck.ok("instrument", instrument(e, &p)) {
            ck.law("instrument is total", is_total(e, &instr));
            let l = e.compose(&partial_proj(e, &x, &x, Side::Left), &instr).expect("shapes agree");
            let r = e.compose(&partial_proj(e, &x, &x, Side::Right), &instr).expect("shapes agree");
            ck.law("▷₁ ∘ instr_p = asrt_p", e.maps_eq(&l, &e.assert_map(&p)));
            ck.law("▷₂ ∘ instr_p = asrt_p⊥", e.maps_eq(&r, &e.assert_map(&ps.ortho(&p))));
            let merged = e.compose(&codiagonal(e, &x), &instr).expect("shapes agree");
            ck.law("∇ ∘ instr_p is total", is_total(e, &merged));
            if e.is_commutative() {
                ck.law("∇ ∘ instr_p = id", e.maps_eq(&merged, &e.identity(&x)));
            }
        }
        if e.is_boolean() {
            let m = e.compose(&e.assert_map(&p), &e.assert_map(&ps.ortho(&p))).expect("shapes agree");
            ck.law("asrt_p ∘ asrt_p⊥ = 0", is_zero_map(e, &m));
        }
        ck.finish(|| json!({ "x": x, "p": p }))
    })
}

fn instrument_two<'a, E: Suites>(e: &'a E, ctx: &'a Ctx, s: &mut dyn Source) -> Trial<'a> {
    let x = e.random_obj(s, ctx);
    let p = e.random_pred(s, &x);
    let q = e.random_pred(s, &x);
    Box::new(move || {
        let mut ck = Checker::new();
        let pq = ck.ok("sequential product", and_then(e, &p, &q));
        let qp = ck.ok("sequential product", and_then(e, &q, &p));
        if e.is_commutative() {
            let (a, b) = (e.assert_map(&p), e.assert_map(&q));
            let ab = e.compose(&a, &b).expect("shapes agree");
            let ba = e.compose(&b, &a).expect("shapes agree");
            ck.law("asserts commute", e.maps_eq(&ab, &ba));
            ck.law("p & q = q & p", same_opt(e, &pq, &qp));
        }
        if let Some(pq) = &pq {
            ck.law("p & q ≤ p", leq(e, pq, &p));
        }
        ck.finish(|| json!({ "x": x, "p": p, "q": q }))
    })
}

fn comprehension_basic<'a, E: Suites>(e: &'a E, ctx: &'a Ctx, s: &mut dyn Source) -> Trial<'a> {
    let x = e.random_obj(s, ctx);
    let p = e.random_pred(s, &x);
    Box::new(move || {
        let ps = e.preds(&x);
        let mut ck = Checker::new();
        let (_, pi) = e.comprehension(&p);
        ck.law("π_p is total", is_total(e, &pi));
        let held = ck.ok("substitution", subst(e, &pi, &p));
        ck.law("p holds with certainty on [X|p]", held.is_some_and(|h| is_one(e, &h)));
        let (_, pi_one) = e.comprehension(&ps.one());
        ck.law("π_1 is an isomorphism", is_iso(e, &pi_one));
        let (c0, _) = e.comprehension(&ps.zero());
        let p0 = e.preds(&c0);
        ck.law("[X|0] is initial", p0.same(&p0.zero(), &p0.one()));
        ck.finish(|| json!({ "x": x, "p": p }))
    })
}

fn comprehension_factor<'a, E: Suites>(e: &'a E, ctx: &'a Ctx, s: &mut dyn Source) -> Trial<'a> {
    let x = e.random_obj(s, ctx);
    let p = e.random_pred(s, &x);
    let y = e.random_obj(s, ctx);
    let (c, pi) = e.comprehension(&p);
    let g = e.random_map(s, &y, &c);
    Box::new(move || {
        let mut ck = Checker::new();
        let f = e.compose(&pi, &g).expect("shapes agree");
        let boxed = ck.ok("substitution", box_subst(e, &f, &p));
        ck.law("□f(p) = 1 for f through π_p", boxed.is_some_and(|b| is_one(e, &b)));
        if let Some(h) = ck.ok("factorisation", e.factor_through_comprehension(&f, &p)) {
            let back = e.compose(&pi, &h).expect("shapes agree");
            ck.law("π_p ∘ f' = f", e.maps_eq(&back, &f));
            ck.law("factorisation is unique", e.maps_eq(&h, &g));
            if let Some(unique) = e.comprehension_oracle(&f, &pi, &h) {
                ck.law("brute-force search finds exactly one factorisation", unique);
            }
        }
        ck.finish(|| json!({ "x": x, "p": p, "y": y, "g": g }))
    })
}

fn quotient_basic<'a, E: Suites>(e: &'a E, ctx: &'a Ctx, s: &mut dyn Source) -> Trial<'a> {
    let x = e.random_obj(s, ctx);
    let p = e.random_pred(s, &x);
    Box::new(move || {
        let ps = e.preds(&x);
        let mut ck = Checker::new();
        let (_, xi) = e.quotient(&p);
        ck.law("ker ξ_p = p", ps.same(&ker(e, &xi), &p));
        ck.law("ξ_p covers its carrier", is_one(e, &e.image(&xi)));
        let (_, xi0) = e.quotient(&ps.zero());
        ck.law("ξ_0 is an isomorphism", is_iso(e, &xi0));
        let (q1, _) = e.quotient(&ps.one());
        let p1 = e.preds(&q1);
        ck.law("X/1 is initial", p1.same(&p1.zero(), &p1.one()));
        ck.finish(|| json!({ "x": x, "p": p }))
    })
}

fn quotient_factor<'a, E: Suites>(e: &'a E, ctx: &'a Ctx, s: &mut dyn Source) -> Trial<'a> {
    let x = e.random_obj(s, ctx);
    let p = e.random_pred(s, &x);
    let y = e.random_obj(s, ctx);
    let (q, xi) = e.quotient(&p);
    let total = s.below(2) == 1;
    let g = if total { e.random_total(s, &q, &y) } else { e.random_map(s, &q, &y) };
    Box::new(move || {
        let mut ck = Checker::new();
        let f = e.compose(&g, &xi).expect("shapes agree");
        ck.law("p ≤ ker f for f through ξ_p", leq(e, &p, &ker(e, &f)));
        if let Some(h) = ck.ok("factorisation", e.factor_through_quotient(&f, &p)) {
            let back = e.compose(&h, &xi).expect("shapes agree");
            ck.law("f̄ ∘ ξ_p = f", e.maps_eq(&back, &f));
            ck.law("factorisation is unique", e.maps_eq(&h, &g));
            if total {
                ck.law("f̄ is total when ker f = p", is_total(e, &h));
            }
            if let Some(unique) = e.quotient_oracle(&f, &xi, &h) {
                ck.law("brute-force search finds exactly one factorisation", unique);
            }
        }
        ck.finish(|| json!({ "x": x, "p": p, "y": y, "g": g }))
    })
}

fn decompose_total<'a, E: Suites>(e: &'a E, ctx: &'a Ctx, s: &mut dyn Source) -> Trial<'a> {
    let y = e.random_obj(s, ctx);
    let x1 = e.random_obj(s, ctx);
    let x2 = e.random_obj(s, ctx);
    let f = e.random_total(s, &y, &e.coproduct(&x1, &x2));
    Box::new(move || {
        let mut ck = Checker::new();
        if let Some(d) = ck.ok("decomposition", decompose(e, &f, &x1, &x2)) {
            ck.law("parts are total", is_total(e, &d.left) && is_total(e, &d.right));
            ck.law("splitting map is total", is_total(e, &d.dc));
            let back = ck.ok("recomposition", d.recompose(e));
            ck.law("recomposition returns f", back.is_some_and(|b| e.maps_eq(&b, &f)));
        }
        ck.finish(|| json!({ "y": y, "x1": x1, "x2": x2, "f": f }))
    })
}

fn theta_sharp<'a, E: Suites>(e: &'a E, ctx: &'a Ctx, s: &mut dyn Source) -> Trial<'a> {
    let x = e.random_obj(s, ctx);
    let p = e.random_sharp(s, &x);
    Box::new(move || {
        let ps = e.preds(&x);
        let mut ck = Checker::new();
        if let Some(t) = ck.ok("theta", theta(e, &p)) {
            ck.law("θ_p is total", is_total(e, &t));
            ck.law("θ_p is an isomorphism for sharp p", is_iso(e, &t));
        }
        let (c, _) = e.comprehension(&p);
        let (q, _) = e.quotient(&ps.ortho(&p));
        ck.law("[X|p] and X/p⊥ have the same carrier", c == q);
        ck.finish(|| json!({ "x": x, "p": p }))
    })
}

fn theta_fuzzy<'a, E: Suites>(e: &'a E, ctx: &'a Ctx, s: &mut dyn Source) -> Trial<'a> {
    let x = e.random_obj(s, ctx);
    let p = e.random_pred(s, &x);
    Box::new(move || {
        let mut ck = Checker::new();
        if let Some(t) = ck.ok("theta", theta(e, &p)) {
            ck.law("θ_p is total", is_total(e, &t));
            ck.law("θ_p is an isomorphism iff p is sharp", is_iso(e, &t) == e.is_sharp(&p));
        }
        ck.finish(|| json!({ "x": x, "p": p }))
    })
}

fn floor_ceil_basic<'a, E: Suites>(e: &'a E, ctx: &'a Ctx, s: &mut dyn Source) -> Trial<'a> {
    let x = e.random_obj(s, ctx);
    let p = e.random_pred(s, &x);
    Box::new(move || {
        let ps = e.preds(&x);
        let mut ck = Checker::new();
        let (fl, ce) = floor_ceil(e, &p);
        ck.law("⌊p⌋ ≤ p ≤ ⌈p⌉", ps.leq(&fl, &p) && ps.leq(&p, &ce));
        ck.law("floor and ceiling are sharp", e.is_sharp(&fl) && e.is_sharp(&ce));
        let (flp, _) = floor_ceil(e, &ps.ortho(&p));
        ck.law("⌈p⌉ = ⌊p⊥⌋⊥", ps.same(&ce, &ps.ortho(&flp)));
        let (flfl, _) = floor_ceil(e, &fl);
        let (_, cece) = floor_ceil(e, &ce);
        ck.law("floor and ceiling are idempotent", ps.same(&flfl, &fl) && ps.same(&cece, &ce));
        ck.law("ceiling is the image of the assert", ps.same(&ce, &e.image(&e.assert_map(&p))));
        if e.is_sharp(&p) {
            ck.law("sharp predicates are fixed", ps.same(&fl, &p) && ps.same(&ce, &p));
        }
        ck.finish(|| json!({ "x": x, "p": p }))
    })
}

fn floor_ceil_extremal<'a, E: Suites>(e: &'a E, ctx: &'a Ctx, s: &mut dyn Source) -> Trial<'a> {
    let x = e.random_obj(s, ctx);
    let p = e.random_pred(s, &x);
    let r = e.random_sharp(s, &x);
    Box::new(move || {
        let ps = e.preds(&x);
        let mut ck = Checker::new();
        let (fl, ce) = floor_ceil(e, &p);
        if ps.leq(&r, &p) {
            ck.law("⌊p⌋ is the greatest sharp predicate below p", ps.leq(&r, &fl));
        }
        if ps.leq(&p, &r) {
            ck.law("⌈p⌉ is the least sharp predicate above p", ps.leq(&ce, &r));
        }
        if let Some(m) = ck.ok("meet", sharp_meet(e, &fl, &r)) {
            ck.law("sharp predicates below p lie below ⌊p⌋", ps.leq(&m, &fl) && ps.leq(&m, &p));
        }
        ck.finish(|| json!({ "x": x, "p": p, "r": r }))
    })
}

fn omlattice<'a, E: Suites>(e: &'a E, ctx: &'a Ctx, s: &mut dyn Source) -> Trial<'a> {
    let x = e.random_obj(s, ctx);
    let p = e.random_sharp(s, &x);
    let r = e.random_sharp(s, &x);
    Box::new(move || {
        let ps = e.preds(&x);
        let mut ck = Checker::new();
        let (Some(q), Some(pr), Some(rp)) = (
            ck.ok("join", sharp_join(e, &p, &r)),
            ck.ok("meet", sharp_meet(e, &p, &r)),
            ck.ok("meet", sharp_meet(e, &r, &p)),
        ) else {
            return ck.finish(|| json!({ "x": x, "p": p, "r": r }));
        };
        ck.law("join is an upper bound", ps.leq(&p, &q) && ps.leq(&r, &q));
        ck.law("join is sharp", e.is_sharp(&q));
        ck.law("meet is commutative", ps.same(&pr, &rp));
        ck.law("meet is a lower bound", ps.leq(&pr, &p) && ps.leq(&pr, &r));
        let om = ck.ok("orthomodular law", orthomodular_holds(e, &p, &q));
        ck.law("p ≤ q ⇒ p ∨ (p⊥ ∧ q) = q", om == Some(Some(true)));
        let pp = ps.ortho(&p);
        let m = ck.ok("meet", sharp_meet(e, &p, &pp));
        ck.law("p ∧ p⊥ = 0", m.is_some_and(|m| is_zero(e, &m)));
        let j = ck.ok("join", sharp_join(e, &p, &pp));
        ck.law("p ∨ p⊥ = 1", j.is_some_and(|j| is_one(e, &j)));
        if ps.leq(&p, &r) {
            ck.law("p ≤ r ⇒ p ∧ r = p", ps.same(&pr, &p));
        }
        ck.finish(|| json!({ "x": x, "p": p, "r": r }))
    })
}

fn telos_single<'a, E: Suites>(e: &'a E, ctx: &'a Ctx, s: &mut dyn Source) -> Trial<'a> {
    let x = e.random_obj(s, ctx);
    let p = e.random_pred(s, &x);
    Box::new(move || {
        let ps = e.preds(&x);
        let mut ck = Checker::new();
        let a = e.assert_map(&p);
        ck.law("(1) ker⊥ asrt_p = p", ps.same(&ker_supp(e, &a), &p));
        let (_, ce) = floor_ceil(e, &p);
        ck.law("(2) im asrt_p = ⌈p⌉", ps.same(&e.image(&a), &ce));
        if let Some(pp) = ck.ok("sequential product", and_then(e, &p, &p)) {
            let aa = e.compose(&a, &a).expect("shapes agree");
            ck.law("(6) asrt_p ∘ asrt_p = asrt_{p&p}", e.maps_eq(&aa, &e.assert_map(&pp)));
        }
        ck.finish(|| json!({ "x": x, "p": p }))
    })
}

fn telos_side_effect_free<'a, E: Suites>(e: &'a E, ctx: &'a Ctx, s: &mut dyn Source) -> Trial<'a> {
    let x = e.random_obj(s, ctx);
    let f = e.random_below_id(s, &x);
    Box::new(move || {
        let mut ck = Checker::new();
        ck.law("(3) f ≤ id ⇒ f = asrt_{ker⊥ f}", e.maps_eq(&f, &e.assert_map(&ker_supp(e, &f))));
        ck.finish(|| json!({ "x": x, "f": f }))
    })
}

fn telos_sum<'a, E: Suites>(e: &'a E, ctx: &'a Ctx, s: &mut dyn Source) -> Trial<'a> {
    let x = e.random_obj(s, ctx);
    let y = e.random_obj(s, ctx);
    let p = e.random_pred(s, &x);
    let q = e.random_pred(s, &y);
    Box::new(move || {
        let mut ck = Checker::new();
        if let (Some(pq), Some(sum)) = (
            ck.ok("cotuple of predicates", copair_pred(e, &p, &q)),
            ck.ok("coproduct of maps", coproduct_map(e, &e.assert_map(&p), &e.assert_map(&q))),
        ) {
            ck.law("(4) asrt_[p,q] = asrt_p + asrt_q", e.maps_eq(&e.assert_map(&pq), &sum));
        }
        ck.finish(|| json!({ "x": x, "y": y, "p": p, "q": q }))
    })
}

fn telos_tensor<'a, E: Suites>(e: &'a E, ctx: &'a Ctx, s: &mut dyn Source) -> Trial<'a> {
    let x = e.random_obj(s, ctx);
    let y = e.random_obj(s, ctx);
    let p = e.random_pred(s, &x);
    let q = e.random_pred(s, &y);
    Box::new(move || {
        let mut ck = Checker::new();
        let lhs = e.assert_map(&e.tensor_pred(&p, &q));
        let rhs = e.tensor_map(&e.assert_map(&p), &e.assert_map(&q));
        ck.law("(5) asrt_{p⊗q} = asrt_p ⊗ asrt_q", e.maps_eq(&lhs, &rhs));
        ck.finish(|| json!({ "x": x, "y": y, "p": p, "q": q }))
    })
}

fn telos_homomorphism<'a, E: Suites>(e: &'a E, ctx: &'a Ctx, s: &mut dyn Source) -> Trial<'a> {
    let x = e.random_obj(s, ctx);
    let p = e.random_pred(s, &x);
    let f = e.random_sharp_preserving(s, ctx, &x);
    let r = e.random_sharp(s, &x);
    Box::new(move || {
        let mut ck = Checker::new();
        let preserved = ck.ok("substitution", box_subst(e, &f, &r));
        ck.law("sampled map preserves sharpness", preserved.is_some_and(|b| e.is_sharp(&b)));
        if let Some(fp) = ck.ok("substitution", box_subst(e, &f, &p)) {
            let lhs = e.compose(&e.assert_map(&p), &f).expect("shapes agree");
            let rhs = e.compose(&f, &e.assert_map(&fp)).expect("shapes agree");
            ck.law("(7) asrt_p ∘ f = f ∘ asrt_{□f(p)}", e.maps_eq(&lhs, &rhs));
        }
        ck.finish(|| json!({ "x": x, "p": p, "f": f, "r": r }))
    })
}

fn duality<'a, E: Suites>(e: &'a E, ctx: &'a Ctx, s: &mut dyn Source) -> Trial<'a> {
    let x = e.random_obj(s, ctx);
    let p = e.random_pred(s, &x);
    let w = e.random_pure_state(s, &x);
    let kill = s.below(4) == 0;
    Box::new(move || {
        let ps = e.preds(&x);
        let mut ck = Checker::new();
        let im_w = e.image(&w);
        let p = if kill { ps.ortho(&im_w) } else { p };
        ck.law("sampled state is pure", e.is_pure_substate(&w));
        let lhs = e.compose(&e.assert_map(&p), &w).map(|m| e.image(&m));
        let rhs = and_then(e, &p, &im_w).map(|pi| floor_ceil(e, &pi).1);
        if let (Some(lhs), Some(rhs)) = (ck.ok("assert", lhs), ck.ok("sequential product", rhs)) {
            ck.law("im(asrt_p ∘ π) = ⌈p & im π⌉", ps.same(&lhs, &rhs));
            if kill {
                ck.law("degenerate branch gives 0", is_zero(e, &lhs) && is_zero(e, &rhs));
            }
        }
        ck.finish(|| json!({ "x": x, "p": p, "state": w }))
    })
}
