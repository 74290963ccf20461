//! Finite sets with rational subdistribution kernels: the Kleisli category of
//! the subdistribution monad.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::boolean::FinSet;
use crate::effectus::{Effectus, Side};
use crate::error::{Error, Result};
use crate::scalar::{EffectAlgebra, Rational01};

/// A finitely supported subdistribution. Zero weights are never stored, so
/// equality is structural.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(transparent)]
pub struct SubDist(BTreeMap<usize, Rational01>);

impl<'de> Deserialize<'de> for SubDist {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = BTreeMap::<usize, Rational01>::deserialize(d)?;
        SubDist::new(raw).map_err(serde::de::Error::custom)
    }
}

impl SubDist {
    pub fn new(weights: impl IntoIterator<Item = (usize, Rational01)>) -> Result<Self> {
        let mut acc: BTreeMap<usize, BigRational> = BTreeMap::new();
        for (k, w) in weights {
            *acc.entry(k).or_insert_with(BigRational::zero) += w.as_ratio();
        }
        Self::from_ratios(acc)
    }

    fn from_ratios(acc: BTreeMap<usize, BigRational>) -> Result<Self> {
        let total: BigRational = acc.values().sum();
        if total > BigRational::from_integer(1.into()) {
            return Err(Error::OutOfRange(format!("subdistribution of mass {total}")));
        }
        let mut out = BTreeMap::new();
        for (k, w) in acc {
            if !w.is_zero() {
                out.insert(k, Rational01::from_ratio(w)?);
            }
        }
        Ok(SubDist(out))
    }

    pub fn zero() -> Self {
        SubDist(BTreeMap::new())
    }

    pub fn dirac(x: usize) -> Self {
        Self::point(x, Rational01::one())
    }

    /// `r|x⟩`.
    pub fn point(x: usize, r: Rational01) -> Self {
        let mut m = BTreeMap::new();
        if !r.is_zero() {
            m.insert(x, r);
        }
        SubDist(m)
    }

    pub fn get(&self, x: usize) -> Rational01 {
        self.0.get(&x).cloned().unwrap_or_else(Rational01::zero)
    }

    pub fn weights(&self) -> &BTreeMap<usize, Rational01> {
        &self.0
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.keys().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mass(&self) -> Rational01 {
        let total: BigRational = self.0.values().map(Rational01::as_ratio).sum();
        Rational01::from_ratio(total).expect("mass checked on construction")
    }

    pub fn scale(&self, r: &Rational01) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        SubDist(self.0.iter().map(|(&k, w)| (k, w.mul(r))).collect())
    }

    /// Pointwise sum, defined when the total mass stays at most 1.
    pub fn ovee(&self, other: &Self) -> Option<Self> {
        Self::new(self.0.iter().chain(&other.0).map(|(&k, w)| (k, w.clone()))).ok()
    }

    /// Expected value `Σ_x ω(x)·p(x)`.
    pub fn expect(&self, p: &FuzzyPred) -> Rational01 {
        let total: BigRational = self
            .0
            .iter()
            .map(|(&k, w)| w.as_ratio() * p.0[k].as_ratio())
            .sum();
        Rational01::from_ratio(total).expect("expectation of a predicate stays in [0,1]")
    }

    fn max_index(&self) -> Option<usize> {
        self.0.keys().next_back().copied()
    }
}

/// A subdistribution kernel `dom → cod`, one row per domain element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KernelMap {
    pub dom: usize,
    pub cod: usize,
    pub rows: Vec<SubDist>,
}

impl KernelMap {
    pub fn new(dom: usize, cod: usize, rows: Vec<SubDist>) -> Result<Self> {
        if rows.len() != dom {
            return Err(Error::ShapeMismatch(format!("{} rows for a domain of size {dom}", rows.len())));
        }
        if let Some(bad) = rows.iter().filter_map(SubDist::max_index).find(|&m| m >= cod) {
            return Err(Error::OutOfRange(format!("index {bad} in a codomain of size {cod}")));
        }
        Ok(KernelMap { dom, cod, rows })
    }

    /// A deterministic total kernel.
    pub fn function(dom: usize, cod: usize, f: impl Fn(usize) -> usize) -> Result<Self> {
        Self::new(dom, cod, (0..dom).map(|x| SubDist::dirac(f(x))).collect())
    }

    /// A state `1 → cod`.
    pub fn state(cod: usize, w: SubDist) -> Result<Self> {
        Self::new(1, cod, vec![w])
    }

    pub fn row(&self, x: usize) -> &SubDist {
        &self.rows[x]
    }

    pub fn is_total(&self) -> bool {
        self.rows.iter().all(|r| r.mass().is_one())
    }

    /// Whether `f(x)` is only ever supported on `x`, i.e. `f ≤ id`.
    pub fn is_below_identity(&self) -> bool {
        self.dom == self.cod && self.rows.iter().enumerate().all(|(x, r)| r.support().all(|y| y == x))
    }
}

/// Kleisli composition `g ∘ f`.
pub fn compose_k(g: &KernelMap, f: &KernelMap) -> Result<KernelMap> {
    if f.cod != g.dom {
        return Err(Error::ShapeMismatch(format!(
            "cannot compose {}→{} after {}→{}",
            g.dom, g.cod, f.dom, f.cod
        )));
    }
    let rows = f
        .rows
        .iter()
        .map(|r| state_pushforward(g, r))
        .collect::<Result<_>>()?;
    Ok(KernelMap {
        dom: f.dom,
        cod: g.cod,
        rows,
    })
}

/// `f_*(ω)(y) = Σ_x ω(x)·f(x)(y)`.
pub fn state_pushforward(f: &KernelMap, w: &SubDist) -> Result<SubDist> {
    if let Some(m) = w.max_index() {
        if m >= f.dom {
            return Err(Error::ShapeMismatch(format!("state on {} points, kernel on {}", m + 1, f.dom)));
        }
    }
    let mut acc: BTreeMap<usize, BigRational> = BTreeMap::new();
    for (&x, wx) in w.weights() {
        for (&y, fy) in f.rows[x].weights() {
            *acc.entry(y).or_insert_with(BigRational::zero) += wx.as_ratio() * fy.as_ratio();
        }
    }
    SubDist::from_ratios(acc)
}

/// Total substitution `f*(q)(x) = Σ_y f(x)(y)·q(y)`.
pub fn pred_pullback(f: &KernelMap, q: &FuzzyPred) -> Result<FuzzyPred> {
    if !f.is_total() {
        return Err(Error::NotTotal);
    }
    if q.size() != f.cod {
        return Err(Error::ShapeMismatch("predicate and kernel codomain differ".into()));
    }
    Ok(FuzzyPred(f.rows.iter().map(|r| r.expect(q)).collect()))
}

/// `f ⊗ g` on `X⊗Y`, indexing the pair `(x, y)` as `x·|Y| + y`.
pub fn tensor_k(f: &KernelMap, g: &KernelMap) -> KernelMap {
    let mut rows = Vec::with_capacity(f.dom * g.dom);
    for fr in &f.rows {
        for gr in &g.rows {
            let mut m = BTreeMap::new();
            for (&a, wa) in fr.weights() {
                for (&b, wb) in gr.weights() {
                    m.insert(a * g.cod + b, wa.mul(wb));
                }
            }
            rows.push(SubDist(m));
        }
    }
    KernelMap {
        dom: f.dom * g.dom,
        cod: f.cod * g.cod,
        rows,
    }
}

/// Projection `X⊗Y → X` (left) or `X⊗Y → Y` (right).
pub fn marginal(x: usize, y: usize, side: Side) -> KernelMap {
    let rows = (0..x * y)
        .map(|k| match side {
            Side::Left => SubDist::dirac(k / y),
            Side::Right => SubDist::dirac(k % y),
        })
        .collect();
    KernelMap {
        dom: x * y,
        cod: match side {
            Side::Left => x,
            Side::Right => y,
        },
        rows,
    }
}

/// The copier `δ: X → X⊗X`, `x ↦ 1|(x,x)⟩`.
pub fn copier(x: usize) -> KernelMap {
    KernelMap {
        dom: x,
        cod: x * x,
        rows: (0..x).map(|k| SubDist::dirac(k * x + k)).collect(),
    }
}

/// `(f⊗id) ∘ δ` against `δ ∘ f`, for an endomap `f`.
pub fn copier_law_holds(f: &KernelMap) -> Result<bool> {
    if f.dom != f.cod {
        return Err(Error::ShapeMismatch("copier law needs an endomap".into()));
    }
    let n = f.dom;
    let id = Dists.identity(&FinSet(n));
    let lhs = compose_k(&tensor_k(f, &id), &copier(n))?;
    let rhs = compose_k(&copier(n), f)?;
    Ok(lhs == rhs)
}

/// Outcome of the first-isomorphism probe.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FirstIso {
    /// The canonical map `X/⌊ker f⌋ → [Y|im f]`.
    pub canonical: KernelMap,
    pub is_iso: bool,
}

/// Builds the canonical map from the coimage to the image and checks whether
/// it is invertible.
pub fn first_iso_probe(f: &KernelMap) -> Result<FirstIso> {
    let canonical = crate::effectus::first_iso_map(&Dists, f)?;
    let is_iso = crate::effectus::is_iso(&Dists, &canonical);
    Ok(FirstIso { canonical, is_iso })
}

/// A fuzzy predicate `X → [0,1]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FuzzyPred(pub Vec<Rational01>);

impl FuzzyPred {
    pub fn size(&self) -> usize {
        self.0.len()
    }

    pub fn indicator(size: usize, members: &[usize]) -> Self {
        let mut v = vec![Rational01::zero(); size];
        for &m in members {
            v[m] = Rational01::one();
        }
        FuzzyPred(v)
    }

    /// `(p ⊗ q)(x, y) = p(x)·q(y)`.
    pub fn tensor(&self, q: &FuzzyPred) -> FuzzyPred {
        FuzzyPred(self.0.iter().flat_map(|a| q.0.iter().map(move |b| a.mul(b))).collect())
    }

    pub fn is_sharp(&self) -> bool {
        self.0.iter().all(|v| v.is_zero() || v.is_one())
    }
}

/// Fuzzy predicates on a set of the given size: `[0,1]^X`, pointwise.
#[derive(Debug, Clone, Copy)]
pub struct FuzzyPreds(pub usize);

impl EffectAlgebra for FuzzyPreds {
    type Elem = FuzzyPred;

    fn zero(&self) -> FuzzyPred {
        FuzzyPred(vec![Rational01::zero(); self.0])
    }
    fn one(&self) -> FuzzyPred {
        FuzzyPred(vec![Rational01::one(); self.0])
    }
    fn ovee(&self, a: &FuzzyPred, b: &FuzzyPred) -> Option<FuzzyPred> {
        if a.size() != b.size() {
            return None;
        }
        a.0.iter()
            .zip(&b.0)
            .map(|(x, y)| x.ovee(y))
            .collect::<Option<Vec<_>>>()
            .map(FuzzyPred)
    }
    fn ortho(&self, a: &FuzzyPred) -> FuzzyPred {
        FuzzyPred(a.0.iter().map(Rational01::ortho).collect())
    }
    fn leq(&self, a: &FuzzyPred, b: &FuzzyPred) -> bool {
        a.size() == b.size() && a.0.iter().zip(&b.0).all(|(x, y)| x <= y)
    }
    fn same(&self, a: &FuzzyPred, b: &FuzzyPred) -> bool {
        a == b
    }
    fn scale(&self, s: &Rational01, a: &FuzzyPred) -> Result<FuzzyPred> {
        Ok(FuzzyPred(a.0.iter().map(|v| v.mul(s)).collect()))
    }
}

/// The probabilistic effectus.
#[derive(Debug, Clone, Copy, Default)]
pub struct Dists;

impl Dists {
    fn reindex(members: &[usize], x: usize) -> Option<usize> {
        members.binary_search(&x).ok()
    }
}

impl Effectus for Dists {
    type Obj = FinSet;
    type Map = KernelMap;
    type Pred = FuzzyPred;
    type Scalar = Rational01;
    type Preds = FuzzyPreds;

    fn name(&self) -> &'static str {
        "prob"
    }
    fn is_commutative(&self) -> bool {
        true
    }
    fn is_boolean(&self) -> bool {
        false
    }

    fn unit_obj(&self) -> FinSet {
        FinSet(1)
    }
    fn empty_obj(&self) -> FinSet {
        FinSet(0)
    }
    fn coproduct(&self, x: &FinSet, y: &FinSet) -> FinSet {
        FinSet(x.0 + y.0)
    }
    fn dom(&self, f: &KernelMap) -> FinSet {
        FinSet(f.dom)
    }
    fn cod(&self, f: &KernelMap) -> FinSet {
        FinSet(f.cod)
    }

    fn identity(&self, x: &FinSet) -> KernelMap {
        KernelMap {
            dom: x.0,
            cod: x.0,
            rows: (0..x.0).map(SubDist::dirac).collect(),
        }
    }
    fn compose(&self, g: &KernelMap, f: &KernelMap) -> Result<KernelMap> {
        compose_k(g, f)
    }
    fn zero_map(&self, x: &FinSet, y: &FinSet) -> KernelMap {
        KernelMap {
            dom: x.0,
            cod: y.0,
            rows: vec![SubDist::zero(); x.0],
        }
    }
    fn inj(&self, x: &FinSet, y: &FinSet, side: Side) -> KernelMap {
        let cod = x.0 + y.0;
        match side {
            Side::Left => KernelMap {
                dom: x.0,
                cod,
                rows: (0..x.0).map(SubDist::dirac).collect(),
            },
            Side::Right => KernelMap {
                dom: y.0,
                cod,
                rows: (0..y.0).map(|j| SubDist::dirac(x.0 + j)).collect(),
            },
        }
    }
    fn cotuple(&self, f: &KernelMap, g: &KernelMap) -> Result<KernelMap> {
        if f.cod != g.cod {
            return Err(Error::ShapeMismatch("cotuple of maps with different codomains".into()));
        }
        let mut rows = f.rows.clone();
        rows.extend_from_slice(&g.rows);
        Ok(KernelMap {
            dom: f.dom + g.dom,
            cod: f.cod,
            rows,
        })
    }
    fn ovee_map(&self, f: &KernelMap, g: &KernelMap) -> Option<KernelMap> {
        if f.dom != g.dom || f.cod != g.cod {
            return None;
        }
        let rows = f
            .rows
            .iter()
            .zip(&g.rows)
            .map(|(a, b)| a.ovee(b))
            .collect::<Option<Vec<_>>>()?;
        Some(KernelMap {
            dom: f.dom,
            cod: f.cod,
            rows,
        })
    }
    fn maps_eq(&self, f: &KernelMap, g: &KernelMap) -> bool {
        f == g
    }
    fn scale_map(&self, s: &Rational01, f: &KernelMap) -> KernelMap {
        KernelMap {
            dom: f.dom,
            cod: f.cod,
            rows: f.rows.iter().map(|r| r.scale(s)).collect(),
        }
    }

    fn preds(&self, x: &FinSet) -> FuzzyPreds {
        FuzzyPreds(x.0)
    }
    fn pred_obj(&self, p: &FuzzyPred) -> FinSet {
        FinSet(p.size())
    }
    fn pred_as_map(&self, p: &FuzzyPred) -> KernelMap {
        KernelMap {
            dom: p.size(),
            cod: 1,
            rows: p.0.iter().map(|v| SubDist::point(0, v.clone())).collect(),
        }
    }
    fn map_as_pred(&self, f: &KernelMap) -> Result<FuzzyPred> {
        if f.cod != 1 {
            return Err(Error::ShapeMismatch(format!("predicate map into a set of size {}", f.cod)));
        }
        Ok(FuzzyPred(f.rows.iter().map(|r| r.get(0)).collect()))
    }
    fn scalar_of(&self, s: &KernelMap) -> Result<Rational01> {
        if s.dom != 1 || s.cod != 1 {
            return Err(Error::ShapeMismatch("scalar must be a map 1 → 1".into()));
        }
        Ok(s.rows[0].get(0))
    }
    fn scalars_eq(&self, a: &Rational01, b: &Rational01) -> bool {
        a == b
    }

    fn normalize(&self, w: &KernelMap) -> Option<(KernelMap, Rational01)> {
        if w.dom != 1 || w.rows[0].is_zero() {
            return None;
        }
        let s = w.rows[0].mass();
        let row = SubDist(
            w.rows[0]
                .weights()
                .iter()
                .map(|(&k, v)| (k, v.div(&s).expect("weight below mass")))
                .collect(),
        );
        Some((
            KernelMap {
                dom: 1,
                cod: w.cod,
                rows: vec![row],
            },
            s,
        ))
    }
    fn assert_map(&self, p: &FuzzyPred) -> KernelMap {
        KernelMap {
            dom: p.size(),
            cod: p.size(),
            rows: p.0.iter().enumerate().map(|(x, v)| SubDist::point(x, v.clone())).collect(),
        }
    }
    fn image(&self, f: &KernelMap) -> FuzzyPred {
        let support: Vec<usize> = f.rows.iter().flat_map(SubDist::support).collect();
        FuzzyPred::indicator(f.cod, &support)
    }
    fn comprehension(&self, p: &FuzzyPred) -> (FinSet, KernelMap) {
        let members: Vec<usize> = (0..p.size()).filter(|&x| p.0[x].is_one()).collect();
        let pi = KernelMap {
            dom: members.len(),
            cod: p.size(),
            rows: members.iter().map(|&m| SubDist::dirac(m)).collect(),
        };
        (FinSet(members.len()), pi)
    }
    fn quotient(&self, p: &FuzzyPred) -> (FinSet, KernelMap) {
        let rest: Vec<usize> = (0..p.size()).filter(|&x| !p.0[x].is_one()).collect();
        let rows = (0..p.size())
            .map(|x| match Self::reindex(&rest, x) {
                Some(k) => SubDist::point(k, p.0[x].ortho()),
                None => SubDist::zero(),
            })
            .collect();
        let xi = KernelMap {
            dom: p.size(),
            cod: rest.len(),
            rows,
        };
        (FinSet(rest.len()), xi)
    }
    fn factor_through_quotient(&self, f: &KernelMap, p: &FuzzyPred) -> Result<KernelMap> {
        if f.dom != p.size() {
            return Err(Error::ShapeMismatch("predicate and map domain differ".into()));
        }
        let rest: Vec<usize> = (0..p.size()).filter(|&x| !p.0[x].is_one()).collect();
        let mut rows = Vec::with_capacity(rest.len());
        for x in 0..p.size() {
            let room = p.0[x].ortho();
            if f.rows[x].mass() > room {
                return Err(Error::PreconditionFailed("p is not below ker f".into()));
            }
            if room.is_zero() {
                continue;
            }
            rows.push(SubDist(
                f.rows[x]
                    .weights()
                    .iter()
                    .map(|(&k, v)| (k, v.div(&room).expect("weight below room")))
                    .collect(),
            ));
        }
        Ok(KernelMap {
            dom: rest.len(),
            cod: f.cod,
            rows,
        })
    }
    fn factor_through_comprehension(&self, f: &KernelMap, p: &FuzzyPred) -> Result<KernelMap> {
        if f.cod != p.size() {
            return Err(Error::ShapeMismatch("predicate and map codomain differ".into()));
        }
        let members: Vec<usize> = (0..p.size()).filter(|&x| p.0[x].is_one()).collect();
        let rows = f
            .rows
            .iter()
            .map(|r| {
                r.weights()
                    .iter()
                    .map(|(&y, v)| {
                        Self::reindex(&members, y)
                            .map(|k| (k, v.clone()))
                            .ok_or_else(|| Error::PreconditionFailed("□f(p) is not 1".into()))
                    })
                    .collect::<Result<BTreeMap<_, _>>>()
                    .map(SubDist)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(KernelMap {
            dom: f.dom,
            cod: members.len(),
            rows,
        })
    }
    fn is_sharp(&self, p: &FuzzyPred) -> bool {
        p.is_sharp()
    }
    fn is_pure_substate(&self, w: &KernelMap) -> bool {
        w.dom == 1 && w.rows[0].weights().len() == 1
    }
    fn inverse(&self, f: &KernelMap) -> Option<KernelMap> {
        if f.dom != f.cod {
            return None;
        }
        let mut inv = vec![None; f.cod];
        for (x, r) in f.rows.iter().enumerate() {
            let mut it = r.weights().iter();
            let (&y, w) = it.next()?;
            if it.next().is_some() || !w.is_one() || inv[y].is_some() {
                return None;
            }
            inv[y] = Some(SubDist::dirac(x));
        }
        Some(KernelMap {
            dom: f.cod,
            cod: f.dom,
            rows: inv.into_iter().collect::<Option<Vec<_>>>()?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::effectus::*;

    fn r(n: i64, d: i64) -> Rational01 {
        Rational01::new(n, d).unwrap()
    }

    fn fp(vals: &[(i64, i64)]) -> FuzzyPred {
        FuzzyPred(vals.iter().map(|&(n, d)| r(n, d)).collect())
    }

    fn row(ws: &[(usize, i64, i64)]) -> SubDist {
        SubDist::new(ws.iter().map(|&(k, n, d)| (k, r(n, d)))).unwrap()
    }

    #[test]
    fn subdist_rejects_excess_mass() {
        assert!(SubDist::new([(0, r(3, 4)), (1, r(1, 2))]).is_err());
        assert_eq!(row(&[(0, 0, 1)]), SubDist::zero());
        assert!(KernelMap::new(1, 1, vec![SubDist::dirac(1)]).is_err());
    }

    #[test]
    fn kernel_examples() {
        let e = Dists;
        let f = KernelMap::new(1, 1, vec![row(&[(0, 1, 4)])]).unwrap();
        let supp = ker_supp(&e, &f);
        assert_eq!(supp, fp(&[(1, 4)]));
        assert_eq!(ker(&e, &f), fp(&[(3, 4)]));
        let g = KernelMap::new(1, 1, vec![row(&[(0, 1, 2)])]).unwrap();
        assert_eq!(e.ovee_map(&f, &g).unwrap().rows[0], row(&[(0, 3, 4)]));
        assert!(e.ovee_map(&g, &e.identity(&FinSet(1))).is_none());
        assert!(!is_total(&e, &KernelMap::new(1, 2, vec![row(&[(0, 9, 10)])]).unwrap()));
    }

    #[test]
    fn compose_examples() {
        let e = Dists;
        let f = KernelMap::new(1, 1, vec![row(&[(0, 1, 2)])]).unwrap();
        assert_eq!(compose_k(&f, &f).unwrap().rows[0], row(&[(0, 1, 4)]));
        assert_eq!(compose_k(&e.identity(&FinSet(1)), &f).unwrap(), f);
        assert!(compose_k(&f, &e.identity(&FinSet(2))).is_err());
    }

    #[test]
    fn pairing_forced_by_projections() {
        let e = Dists;
        let f = KernelMap::new(1, 1, vec![row(&[(0, 1, 2)])]).unwrap();
        let h = pairing(&e, &[f.clone(), f.clone()]).unwrap();
        assert_eq!(h.rows[0], row(&[(0, 1, 2), (1, 1, 2)]));
        assert!(is_total(&e, &h));
        let big = KernelMap::new(1, 1, vec![row(&[(0, 2, 3)])]).unwrap();
        assert_eq!(pairing(&e, &[big.clone(), big]), Err(Error::NotOrthogonal));
    }

    #[test]
    fn box_subst_counts_undefinedness() {
        let e = Dists;
        let f = KernelMap::new(1, 1, vec![row(&[(0, 1, 2)])]).unwrap();
        assert_eq!(box_subst(&e, &f, &fp(&[(1, 1)])).unwrap(), fp(&[(1, 1)]));
        assert_eq!(box_subst(&e, &f, &fp(&[(0, 1)])).unwrap(), fp(&[(1, 2)]));
    }

    #[test]
    fn image_is_support() {
        let f = KernelMap::new(1, 3, vec![row(&[(0, 1, 3), (1, 1, 6)])]).unwrap();
        assert_eq!(Dists.image(&f), FuzzyPred::indicator(3, &[0, 1]));
    }

    #[test]
    fn asserts_and_instruments() {
        let e = Dists;
        let p = fp(&[(2, 3)]);
        assert_eq!(e.assert_map(&p).rows[0], row(&[(0, 2, 3)]));
        let p = fp(&[(1, 3)]);
        let i = instrument(&e, &p).unwrap();
        assert_eq!(i.rows[0], row(&[(0, 1, 3), (1, 2, 3)]));
        assert_eq!(e.compose(&codiagonal(&e, &FinSet(1)), &i).unwrap(), e.identity(&FinSet(1)));
        assert_eq!(and_then(&e, &fp(&[(1, 2), (1, 1)]), &fp(&[(1, 1), (1, 3)])).unwrap(), fp(&[(1, 2), (1, 3)]));
    }

    #[test]
    fn bayes_worked_example() {
        let e = Dists;
        let w = KernelMap::state(2, row(&[(0, 1, 2), (1, 1, 2)])).unwrap();
        let p = fp(&[(1, 1), (1, 2)]);
        let q = fp(&[(0, 1), (1, 1)]);
        let c = condition(&e, &w, &p).unwrap().unwrap();
        assert_eq!(c.rows[0], row(&[(0, 2, 3), (1, 1, 3)]));
        let lhs = validity(&e, &c, &q).unwrap().mul(&validity(&e, &w, &p).unwrap());
        assert_eq!(lhs, r(1, 4));
        assert_eq!(validity(&e, &w, &and_then(&e, &p, &q).unwrap()).unwrap(), r(1, 4));
        assert!(condition(&e, &w, &fp(&[(0, 1), (0, 1)])).unwrap().is_none());
        assert!(total_probability(&e, &w, &[p.clone(), FuzzyPreds(2).ortho(&p)], &q).unwrap());
        assert_eq!(total_probability(&e, &w, std::slice::from_ref(&p), &q), Err(Error::NotATest));
    }

    #[test]
    fn normalize_examples() {
        let e = Dists;
        let w = KernelMap::state(2, row(&[(0, 1, 4), (1, 1, 4)])).unwrap();
        let (rho, s) = e.normalize(&w).unwrap();
        assert_eq!(rho.rows[0], row(&[(0, 1, 2), (1, 1, 2)]));
        assert_eq!(s, r(1, 2));
        assert!(e.normalize(&e.zero_map(&FinSet(1), &FinSet(2))).is_none());
    }

    #[test]
    fn comprehension_and_quotient_formulas() {
        let e = Dists;
        let p = fp(&[(1, 1), (1, 2), (0, 1)]);
        let (c, pi) = e.comprehension(&p);
        assert_eq!(c, FinSet(1));
        assert_eq!(pi.rows, vec![SubDist::dirac(0)]);
        let (q, xi) = e.quotient(&p);
        assert_eq!(q, FinSet(2));
        assert_eq!(xi.rows, vec![SubDist::zero(), row(&[(0, 1, 2)]), SubDist::dirac(1)]);
        assert_eq!(ker(&e, &xi), p);
        let (f, c) = floor_ceil(&e, &p);
        assert_eq!(f, fp(&[(1, 1), (0, 1), (0, 1)]));
        assert_eq!(c, fp(&[(1, 1), (1, 1), (0, 1)]));
    }

    #[test]
    fn quotient_factorisation_divides() {
        let e = Dists;
        let p = fp(&[(1, 2), (1, 1)]);
        let g = KernelMap::new(2, 2, vec![row(&[(0, 1, 3), (1, 2, 3)]), SubDist::dirac(0)]).unwrap();
        let f = KernelMap::new(2, 2, vec![row(&[(0, 1, 6), (1, 1, 3)]), SubDist::zero()]).unwrap();
        let fbar = e.factor_through_quotient(&f, &p).unwrap();
        assert_eq!(fbar.rows[0], g.rows[0]);
        let (_, xi) = e.quotient(&p);
        assert_eq!(e.compose(&fbar, &xi).unwrap(), f);
        assert!(e.factor_through_quotient(&g, &p).is_err());
    }

    #[test]
    fn monoidal_structure() {
        let d = copier(3);
        let m = marginal(3, 3, Side::Left);
        assert_eq!(compose_k(&m, &d).unwrap(), Dists.identity(&FinSet(3)));
        let t = tensor_k(&KernelMap::function(1, 2, |_| 1).unwrap(), &KernelMap::function(1, 3, |_| 2).unwrap());
        assert_eq!(t.rows[0], SubDist::dirac(5));
        assert!(copier_law_holds(&Dists.assert_map(&fp(&[(1, 3), (1, 1), (0, 1)]))).unwrap());
        let swap = KernelMap::function(2, 2, |x| 1 - x).unwrap();
        assert!(!copier_law_holds(&swap).unwrap());
    }

    #[test]
    fn pullback_examples() {
        let f = KernelMap::new(1, 2, vec![row(&[(0, 1, 2), (1, 1, 2)])]).unwrap();
        assert_eq!(pred_pullback(&f, &fp(&[(1, 1), (0, 1)])).unwrap(), fp(&[(1, 2)]));
        let partial = KernelMap::new(1, 2, vec![row(&[(0, 1, 2)])]).unwrap();
        assert_eq!(pred_pullback(&partial, &fp(&[(1, 1), (0, 1)])), Err(Error::NotTotal));
    }

    #[test]
    fn first_iso_examples() {
        let bij = KernelMap::function(3, 3, |x| (x + 1) % 3).unwrap();
        assert!(first_iso_probe(&bij).unwrap().is_iso);
        let half = KernelMap::new(1, 1, vec![row(&[(0, 1, 2)])]).unwrap();
        let probe = first_iso_probe(&half).unwrap();
        assert!(!probe.is_iso);
        assert_eq!(probe.canonical.rows[0], row(&[(0, 1, 2)]));
        let (_, xi) = Dists.quotient(&fp(&[(1, 3), (0, 1)]));
        assert!(!first_iso_probe(&xi).unwrap().is_iso);
    }

    #[test]
    fn purity() {
        let e = Dists;
        assert!(e.is_pure_substate(&KernelMap::state(2, row(&[(0, 3, 4)])).unwrap()));
        assert!(!e.is_pure_substate(&KernelMap::state(2, row(&[(0, 1, 2), (1, 1, 2)])).unwrap()));
    }

    #[test]
    fn json_rows() {
        let k = KernelMap::new(1, 2, vec![row(&[(1, 1, 3)])]).unwrap();
        let s = serde_json::to_string(&k).unwrap();
        assert_eq!(s, r#"{"dom":1,"cod":2,"rows":[{"1":"1/3"}]}"#);
        let back: KernelMap = serde_json::from_str(&s).unwrap();
        assert_eq!(back, k);
    }
}
