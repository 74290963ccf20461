//! The shared vocabulary of an effectus in partial form, and every
//! construction that can be phrased once for all instances: kernels,
//! predicate transformers, validity, conditioning, instruments, pairing,
//! decomposition, floor/ceiling and sharp meets.

use std::fmt::Debug;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{EffectAlgebra, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

/// An effectus presented through its partial maps.
///
/// Objects carry their coproduct structure concretely (set sizes, block
/// lists), so injections, cotuples and partial projections are direct
/// constructions. Morphism equality is whatever the instance can decide:
/// structural for the exact instances, extensional within tolerance for the
/// quantum one.
pub trait Effectus: Send + Sync {
    type Obj: Clone + Debug + PartialEq + Serialize + Send + Sync;
    type Map: Clone + Debug + Serialize + Send + Sync;
    type Pred: Clone + Debug + Serialize + Send + Sync;
    type Scalar: Scalar;
    type Preds: EffectAlgebra<Elem = Self::Pred>;

    fn name(&self) -> &'static str;
    /// Assert maps commute and `∇ ∘ instr_p = id`.
    fn is_commutative(&self) -> bool;
    /// Additionally `asrt_p ∘ asrt_{p⊥} = 0`.
    fn is_boolean(&self) -> bool;

    /// The scalar object `I`.
    fn unit_obj(&self) -> Self::Obj;
    /// The initial object `0`.
    fn empty_obj(&self) -> Self::Obj;
    fn coproduct(&self, x: &Self::Obj, y: &Self::Obj) -> Self::Obj;
    fn dom(&self, f: &Self::Map) -> Self::Obj;
    fn cod(&self, f: &Self::Map) -> Self::Obj;

    fn identity(&self, x: &Self::Obj) -> Self::Map;
    /// `g ∘ f`.
    fn compose(&self, g: &Self::Map, f: &Self::Map) -> Result<Self::Map>;
    fn zero_map(&self, x: &Self::Obj, y: &Self::Obj) -> Self::Map;
    /// Coproduct injection `κ₁: X → X+Y` or `κ₂: Y → X+Y`.
    fn inj(&self, x: &Self::Obj, y: &Self::Obj, side: Side) -> Self::Map;
    /// `[f, g]: X+Y → Z`.
    fn cotuple(&self, f: &Self::Map, g: &Self::Map) -> Result<Self::Map>;
    /// Partial sum of parallel maps.
    fn ovee_map(&self, f: &Self::Map, g: &Self::Map) -> Option<Self::Map>;
    fn maps_eq(&self, f: &Self::Map, g: &Self::Map) -> bool;
    /// `s · f`.
    fn scale_map(&self, s: &Self::Scalar, f: &Self::Map) -> Self::Map;

    fn preds(&self, x: &Self::Obj) -> Self::Preds;
    fn pred_obj(&self, p: &Self::Pred) -> Self::Obj;
    /// A predicate viewed as a partial map `X → I`.
    fn pred_as_map(&self, p: &Self::Pred) -> Self::Map;
    /// A partial map `X → I` viewed as a predicate.
    fn map_as_pred(&self, f: &Self::Map) -> Result<Self::Pred>;
    /// A partial map `I → I` viewed as a scalar.
    fn scalar_of(&self, s: &Self::Map) -> Result<Self::Scalar>;
    fn scalars_eq(&self, a: &Self::Scalar, b: &Self::Scalar) -> bool;

    /// Splits a non-zero substate `ω` as `ρ · s` with `ρ` total.
    fn normalize(&self, w: &Self::Map) -> Option<(Self::Map, Self::Scalar)>;
    fn assert_map(&self, p: &Self::Pred) -> Self::Map;
    /// Least sharp predicate `q` on the codomain with `□f(q) = 1`.
    fn image(&self, f: &Self::Map) -> Self::Pred;
    /// `[X|p]` together with `π_p: [X|p] → X`.
    fn comprehension(&self, p: &Self::Pred) -> (Self::Obj, Self::Map);
    /// `X/p` together with `ξ_p: X → X/p`.
    fn quotient(&self, p: &Self::Pred) -> (Self::Obj, Self::Map);
    /// The unique `f̄: X/p → Y` with `f̄ ∘ ξ_p = f`, when `p ≤ ker f`.
    fn factor_through_quotient(&self, f: &Self::Map, p: &Self::Pred) -> Result<Self::Map>;
    /// The unique `g: Y → [X|p]` with `π_p ∘ g = f`, when `□f(p) = 1`.
    fn factor_through_comprehension(&self, f: &Self::Map, p: &Self::Pred) -> Result<Self::Map>;
    fn is_sharp(&self, p: &Self::Pred) -> bool;
    fn is_pure_substate(&self, w: &Self::Map) -> bool;
    /// A two-sided inverse, when the instance can exhibit one.
    fn inverse(&self, f: &Self::Map) -> Option<Self::Map>;
}

/// The truth predicate `𝟙` as a map `X → I`.
pub fn truth<E: Effectus>(e: &E, x: &E::Obj) -> E::Map {
    e.pred_as_map(&e.preds(x).one())
}

pub fn falsity<E: Effectus>(e: &E, x: &E::Obj) -> E::Pred {
    e.preds(x).zero()
}

/// Kernel supplement `ker⊥(f) = 𝟙 ∘ f`.
pub fn ker_supp<E: Effectus>(e: &E, f: &E::Map) -> E::Pred {
    let one = truth(e, &e.cod(f));
    let m = e.compose(&one, f).expect("truth composes with every map");
    e.map_as_pred(&m).expect("map into I is a predicate")
}

/// Kernel `ker(f) = ker⊥(f)⊥`.
pub fn ker<E: Effectus>(e: &E, f: &E::Map) -> E::Pred {
    let x = e.dom(f);
    e.preds(&x).ortho(&ker_supp(e, f))
}

pub fn is_total<E: Effectus>(e: &E, f: &E::Map) -> bool {
    let x = e.dom(f);
    let preds = e.preds(&x);
    preds.same(&ker_supp(e, f), &preds.one())
}

pub fn is_zero_map<E: Effectus>(e: &E, f: &E::Map) -> bool {
    let z = e.zero_map(&e.dom(f), &e.cod(f));
    e.maps_eq(f, &z)
}

/// Partial projection `▷₁ = [id, 0]` or `▷₂ = [0, id]` out of `X+Y`.
pub fn partial_proj<E: Effectus>(e: &E, x: &E::Obj, y: &E::Obj, side: Side) -> E::Map {
    let (f, g) = match side {
        Side::Left => (e.identity(x), e.zero_map(y, x)),
        Side::Right => (e.zero_map(x, y), e.identity(y)),
    };
    e.cotuple(&f, &g).expect("summands share a codomain")
}

/// `f + g: X+Y → X'+Y'`.
pub fn coproduct_map<E: Effectus>(e: &E, f: &E::Map, g: &E::Map) -> Result<E::Map> {
    let (x2, y2) = (e.cod(f), e.cod(g));
    let l = e.compose(&e.inj(&x2, &y2, Side::Left), f)?;
    let r = e.compose(&e.inj(&x2, &y2, Side::Right), g)?;
    e.cotuple(&l, &r)
}

/// Codiagonal `∇ = [id, id]: X+X → X`.
pub fn codiagonal<E: Effectus>(e: &E, x: &E::Obj) -> E::Map {
    e.cotuple(&e.identity(x), &e.identity(x)).expect("same codomain")
}

/// The unique `h: Z → X₁+…+Xₙ` with `▷ᵢ ∘ h = fᵢ`. The coproduct is nested to
/// the left, `((X₁+X₂)+X₃)+…`, which the concrete instances flatten.
pub fn pairing<E: Effectus>(e: &E, fs: &[E::Map]) -> Result<E::Map> {
    let first = fs
        .first()
        .ok_or_else(|| Error::PreconditionFailed("pairing of an empty family".into()))?;
    let z = e.dom(first);
    if fs.iter().any(|f| e.dom(f) != z) {
        return Err(Error::ShapeMismatch("pairing of maps with different domains".into()));
    }
    let preds = e.preds(&z);
    let supps: Vec<E::Pred> = fs.iter().map(|f| ker_supp(e, f)).collect();
    let mut acc = supps[0].clone();
    for s in &supps[1..] {
        acc = preds.ovee(&acc, s).ok_or(Error::NotOrthogonal)?;
    }
    let mut h = first.clone();
    for f in &fs[1..] {
        let (x, y) = (e.cod(&h), e.cod(f));
        let l = e.compose(&e.inj(&x, &y, Side::Left), &h)?;
        let r = e.compose(&e.inj(&x, &y, Side::Right), f)?;
        h = e.ovee_map(&l, &r).ok_or(Error::NotOrthogonal)?;
    }
    Ok(h)
}

/// Predicate `[p, q]` on `X+Y`.
pub fn copair_pred<E: Effectus>(e: &E, p: &E::Pred, q: &E::Pred) -> Result<E::Pred> {
    let m = e.cotuple(&e.pred_as_map(p), &e.pred_as_map(q))?;
    e.map_as_pred(&m)
}

/// Partial substitution `□f(q) = (q⊥ ∘ f)⊥`.
pub fn box_subst<E: Effectus>(e: &E, f: &E::Map, q: &E::Pred) -> Result<E::Pred> {
    let y = e.cod(f);
    let qp = e.preds(&y).ortho(q);
    let m = e.compose(&e.pred_as_map(&qp), f)?;
    let r = e.map_as_pred(&m)?;
    Ok(e.preds(&e.dom(f)).ortho(&r))
}

/// Plain substitution `q ∘ f`; equals `□f(q)` for total `f`.
pub fn subst<E: Effectus>(e: &E, f: &E::Map, q: &E::Pred) -> Result<E::Pred> {
    let m = e.compose(&e.pred_as_map(q), f)?;
    e.map_as_pred(&m)
}

/// Born rule `ω ⊨ p = p ∘ ω`.
pub fn validity<E: Effectus>(e: &E, w: &E::Map, p: &E::Pred) -> Result<E::Scalar> {
    let m = e.compose(&e.pred_as_map(p), w)?;
    e.scalar_of(&m)
}

/// Checks `f∘ω ⊨ q` against `ω ⊨ □f(q)`.
pub fn galois_check<E: Effectus>(e: &E, f: &E::Map, w: &E::Map, q: &E::Pred) -> Result<bool> {
    let lhs = validity(e, &e.compose(f, w)?, q)?;
    let rhs = validity(e, w, &box_subst(e, f, q)?)?;
    Ok(e.scalars_eq(&lhs, &rhs))
}

/// Sequential product `p & q = q ∘ asrt_p`.
pub fn and_then<E: Effectus>(e: &E, p: &E::Pred, q: &E::Pred) -> Result<E::Pred> {
    let m = e.compose(&e.pred_as_map(q), &e.assert_map(p))?;
    e.map_as_pred(&m)
}

/// `instr_p = ⟨asrt_p, asrt_{p⊥}⟩: X → X+X`.
pub fn instrument<E: Effectus>(e: &E, p: &E::Pred) -> Result<E::Map> {
    let x = e.pred_obj(p);
    let pp = e.preds(&x).ortho(p);
    pairing(e, &[e.assert_map(p), e.assert_map(&pp)])
}

/// Bayesian update `ω|_p`: the normalisation of `asrt_p ∘ ω`.
pub fn condition<E: Effectus>(e: &E, w: &E::Map, p: &E::Pred) -> Result<Option<E::Map>> {
    let m = e.compose(&e.assert_map(p), w)?;
    Ok(e.normalize(&m).map(|(rho, _)| rho))
}

/// Law of total probability for a test `p₁, …, pₙ`: compares `ω ⊨ q` with
/// `⊎ᵢ (ω|_{pᵢ} ⊨ q)·(ω ⊨ pᵢ)`, skipping branches of validity zero.
pub fn total_probability<E: Effectus>(
    e: &E,
    w: &E::Map,
    test: &[E::Pred],
    q: &E::Pred,
) -> Result<bool> {
    let x = e.cod(w);
    let preds = e.preds(&x);
    let mut acc = preds.zero();
    for p in test {
        acc = preds.ovee(&acc, p).ok_or(Error::NotATest)?;
    }
    if !preds.same(&acc, &preds.one()) {
        return Err(Error::NotATest);
    }
    let lhs = validity(e, w, q)?;
    let mut rhs = E::Scalar::zero();
    for p in test {
        let wp = validity(e, w, p)?;
        let Some(cond) = condition(e, w, p)? else {
            continue;
        };
        let term = validity(e, &cond, q)?.mul(&wp);
        rhs = rhs
            .ovee(&term)
            .ok_or_else(|| Error::PreconditionFailed("branch weights exceed 1".into()))?;
    }
    Ok(e.scalars_eq(&lhs, &rhs))
}

/// Floor `⌊p⌋ = im(π_p)` and ceiling `⌈p⌉ = ⌊p⊥⌋⊥`.
pub fn floor_ceil<E: Effectus>(e: &E, p: &E::Pred) -> (E::Pred, E::Pred) {
    let x = e.pred_obj(p);
    let preds = e.preds(&x);
    let floor = e.image(&e.comprehension(p).1);
    let floor_perp = e.image(&e.comprehension(&preds.ortho(p)).1);
    (floor, preds.ortho(&floor_perp))
}

/// `θ_p = ξ_{p⊥} ∘ π_p: [X|p] → X/p⊥`.
pub fn theta<E: Effectus>(e: &E, p: &E::Pred) -> Result<E::Map> {
    let x = e.pred_obj(p);
    let pp = e.preds(&x).ortho(p);
    let (_, pi) = e.comprehension(p);
    let (_, xi) = e.quotient(&pp);
    e.compose(&xi, &pi)
}

/// Whether `f` has a two-sided inverse that recomposes to identities.
pub fn is_iso<E: Effectus>(e: &E, f: &E::Map) -> bool {
    let Some(g) = e.inverse(f) else {
        return false;
    };
    let (x, y) = (e.dom(f), e.cod(f));
    match (e.compose(&g, f), e.compose(f, &g)) {
        (Ok(gf), Ok(fg)) => e.maps_eq(&gf, &e.identity(&x)) && e.maps_eq(&fg, &e.identity(&y)),
        _ => false,
    }
}

/// Total decomposition of a total map into a binary coproduct.
#[derive(Debug, Clone)]
pub struct Decomposition<E: Effectus> {
    /// `(! + !) ∘ f`: where `f` lands in the left summand.
    pub pred: E::Pred,
    /// `dc_p: Y → Y/p⊥ + Y/p`.
    pub dc: E::Map,
    pub left: E::Map,
    pub right: E::Map,
}

/// Splits total `f: Y → X₁+X₂` as `(f₁ + f₂) ∘ dc_p` with `f₁, f₂` total.
pub fn decompose<E: Effectus>(
    e: &E,
    f: &E::Map,
    x1: &E::Obj,
    x2: &E::Obj,
) -> Result<Decomposition<E>> {
    if e.coproduct(x1, x2) != e.cod(f) {
        return Err(Error::ShapeMismatch("codomain is not the given coproduct".into()));
    }
    if !is_total(e, f) {
        return Err(Error::NotTotal);
    }
    let y = e.dom(f);
    let preds = e.preds(&y);
    let f1 = e.compose(&partial_proj(e, x1, x2, Side::Left), f)?;
    let f2 = e.compose(&partial_proj(e, x1, x2, Side::Right), f)?;
    let p = ker_supp(e, &f1);
    let pp = preds.ortho(&p);
    let (_, xi_pp) = e.quotient(&pp);
    let (_, xi_p) = e.quotient(&p);
    let dc = pairing(e, &[xi_pp, xi_p])?;
    let left = e.factor_through_quotient(&f1, &pp)?;
    let right = e.factor_through_quotient(&f2, &p)?;
    Ok(Decomposition {
        pred: p,
        dc,
        left,
        right,
    })
}

impl<E: Effectus> Decomposition<E> {
    pub fn recompose(&self, e: &E) -> Result<E::Map> {
        let sum = coproduct_map(e, &self.left, &self.right)?;
        e.compose(&sum, &self.dc)
    }
}

/// Meet of sharp predicates `p ∧ q = im(π_p ∘ π_{q∘π_p})`.
pub fn sharp_meet<E: Effectus>(e: &E, p: &E::Pred, q: &E::Pred) -> Result<E::Pred> {
    let (_, pi_p) = e.comprehension(p);
    let pulled = subst(e, &pi_p, q)?;
    let (_, pi_q) = e.comprehension(&pulled);
    Ok(e.image(&e.compose(&pi_p, &pi_q)?))
}

/// Join of sharp predicates by De Morgan.
pub fn sharp_join<E: Effectus>(e: &E, p: &E::Pred, q: &E::Pred) -> Result<E::Pred> {
    let preds = e.preds(&e.pred_obj(p));
    let m = sharp_meet(e, &preds.ortho(p), &preds.ortho(q))?;
    Ok(preds.ortho(&m))
}

/// Checks the orthomodular law `p ≤ q ⇒ p ∨ (p⊥ ∧ q) = q` for sharp `p, q`.
/// Returns `None` when the hypothesis fails.
pub fn orthomodular_holds<E: Effectus>(e: &E, p: &E::Pred, q: &E::Pred) -> Result<Option<bool>> {
    let preds = e.preds(&e.pred_obj(p));
    if !preds.leq(p, q) {
        return Ok(None);
    }
    let inner = sharp_meet(e, &preds.ortho(p), q)?;
    let lhs = sharp_join(e, p, &inner)?;
    Ok(Some(preds.same(&lhs, q)))
}

/// The canonical map `X/⌊ker f⌋ → [Y|im f]` from the coimage to the image.
pub fn first_iso_map<E: Effectus>(e: &E, f: &E::Map) -> Result<E::Map> {
    let (floor, _) = floor_ceil(e, &ker(e, f));
    let through = e.factor_through_quotient(f, &floor)?;
    e.factor_through_comprehension(&through, &e.image(f))
}
