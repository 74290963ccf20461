//! Finite sets and partial functions.

use serde::{Deserialize, Serialize};

use crate::effectus::{Effectus, Side};
use crate::error::{Error, Result};
use crate::scalar::{EffectAlgebra, Rational01};

/// A finite set `{0, …, size-1}`. Labels are presentation only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FinSet(pub usize);

/// A partial function between finite sets.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PartialFn {
    pub dom: usize,
    pub cod: usize,
    pub table: Vec<Option<usize>>,
}

impl PartialFn {
    pub fn new(dom: usize, cod: usize, table: Vec<Option<usize>>) -> Result<Self> {
        if table.len() != dom {
            return Err(Error::ShapeMismatch(format!(
                "table of length {} for a domain of size {dom}",
                table.len()
            )));
        }
        if let Some(bad) = table.iter().flatten().find(|&&y| y >= cod) {
            return Err(Error::OutOfRange(format!("index {bad} in a codomain of size {cod}")));
        }
        Ok(PartialFn { dom, cod, table })
    }

    pub fn total(dom: usize, cod: usize, f: impl Fn(usize) -> usize) -> Result<Self> {
        Self::new(dom, cod, (0..dom).map(|x| Some(f(x))).collect())
    }

    pub fn apply(&self, x: usize) -> Option<usize> {
        self.table[x]
    }

    pub fn is_total(&self) -> bool {
        self.table.iter().all(Option::is_some)
    }

    /// `g ∘ self`: defined at `x` iff `self(x)` and `g(self(x))` are.
    pub fn then(&self, g: &PartialFn) -> Result<PartialFn> {
        if self.cod != g.dom {
            return Err(Error::ShapeMismatch(format!(
                "cannot compose {}→{} after {}→{}",
                g.dom, g.cod, self.dom, self.cod
            )));
        }
        Ok(PartialFn {
            dom: self.dom,
            cod: g.cod,
            table: self.table.iter().map(|y| y.and_then(|y| g.table[y])).collect(),
        })
    }
}

/// A subset of a finite set, as a bit vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SubsetPred(pub Vec<bool>);

impl SubsetPred {
    pub fn from_members(size: usize, members: &[usize]) -> Self {
        let mut bits = vec![false; size];
        for &m in members {
            bits[m] = true;
        }
        SubsetPred(bits)
    }

    pub fn size(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.0[x]
    }

    pub fn members(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&x| self.0[x]).collect()
    }

    pub fn meet(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a && b)
    }

    pub fn join(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a || b)
    }

    pub fn complement(&self) -> Self {
        SubsetPred(self.0.iter().map(|b| !b).collect())
    }

    fn zip(&self, other: &Self, f: impl Fn(bool, bool) -> bool) -> Result<Self> {
        if self.size() != other.size() {
            return Err(Error::ShapeMismatch(format!(
                "subsets of carriers {} and {}",
                self.size(),
                other.size()
            )));
        }
        Ok(SubsetPred(self.0.iter().zip(&other.0).map(|(&a, &b)| f(a, b)).collect()))
    }
}

/// Subsets of a set of the given size, as an effect algebra (a Boolean
/// algebra with `⊎` the disjoint union).
#[derive(Debug, Clone, Copy)]
pub struct Subsets(pub usize);

impl EffectAlgebra for Subsets {
    type Elem = SubsetPred;

    fn zero(&self) -> SubsetPred {
        SubsetPred(vec![false; self.0])
    }
    fn one(&self) -> SubsetPred {
        SubsetPred(vec![true; self.0])
    }
    fn ovee(&self, a: &SubsetPred, b: &SubsetPred) -> Option<SubsetPred> {
        if a.size() != b.size() || a.0.iter().zip(&b.0).any(|(&x, &y)| x && y) {
            return None;
        }
        a.join(b).ok()
    }
    fn ortho(&self, a: &SubsetPred) -> SubsetPred {
        a.complement()
    }
    fn leq(&self, a: &SubsetPred, b: &SubsetPred) -> bool {
        a.size() == b.size() && a.0.iter().zip(&b.0).all(|(&x, &y)| !x || y)
    }
    fn same(&self, a: &SubsetPred, b: &SubsetPred) -> bool {
        a == b
    }
    /// Only the Boolean scalars 0 and 1 act on subsets.
    fn scale(&self, s: &Rational01, a: &SubsetPred) -> Result<SubsetPred> {
        if s.is_one() {
            Ok(a.clone())
        } else if s.is_zero() {
            Ok(self.zero())
        } else {
            Err(Error::Unsupported(format!("scalar {s} on a Boolean carrier")))
        }
    }
}

/// Meet, join and complement of subsets of the same carrier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BooleanOps {
    pub meet: SubsetPred,
    pub join: SubsetPred,
    pub complement: SubsetPred,
}

pub fn boolean_algebra_ops(p: &SubsetPred, q: &SubsetPred) -> Result<BooleanOps> {
    Ok(BooleanOps {
        meet: p.meet(q)?,
        join: p.join(q)?,
        complement: p.complement(),
    })
}

/// Preimage split of a total `f: Y → X₁+X₂`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensiveSplit {
    /// Elements of `Y` landing in `X₁`, in order.
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    /// `f` restricted to `Y₁`, as a total map `Y₁ → X₁`.
    pub left_map: PartialFn,
    pub right_map: PartialFn,
}

impl ExtensiveSplit {
    /// `[κ₁∘f₁, κ₂∘f₂] ∘ σ⁻¹` rebuilt on `Y`, where `σ = [ι₁, ι₂]` is the
    /// cotuple of inclusions.
    pub fn recompose(&self, x1: usize) -> PartialFn {
        let n = self.left.len() + self.right.len();
        let mut table = vec![None; n];
        for (k, &y) in self.left.iter().enumerate() {
            table[y] = self.left_map.table[k];
        }
        for (k, &y) in self.right.iter().enumerate() {
            table[y] = self.right_map.table[k].map(|v| v + x1);
        }
        PartialFn {
            dom: n,
            cod: x1 + self.right_map.cod,
            table,
        }
    }

    /// Whether the cotuple of the inclusions `Y₁ + Y₂ → Y` is a bijection.
    pub fn inclusions_bijective(&self) -> bool {
        let n = self.left.len() + self.right.len();
        let mut seen = vec![false; n];
        for &y in self.left.iter().chain(&self.right) {
            if y >= n || seen[y] {
                return false;
            }
            seen[y] = true;
        }
        true
    }
}

pub fn extensive_pullback(f: &PartialFn, x1: usize, x2: usize) -> Result<ExtensiveSplit> {
    if f.cod != x1 + x2 {
        return Err(Error::ShapeMismatch(format!(
            "codomain {} is not {x1}+{x2}",
            f.cod
        )));
    }
    if !f.is_total() {
        return Err(Error::NotTotal);
    }
    let (mut left, mut right) = (Vec::new(), Vec::new());
    let (mut lt, mut rt) = (Vec::new(), Vec::new());
    for (y, v) in f.table.iter().enumerate() {
        let v = v.expect("total");
        if v < x1 {
            left.push(y);
            lt.push(Some(v));
        } else {
            right.push(y);
            rt.push(Some(v - x1));
        }
    }
    Ok(ExtensiveSplit {
        left_map: PartialFn::new(left.len(), x1, lt)?,
        right_map: PartialFn::new(right.len(), x2, rt)?,
        left,
        right,
    })
}

/// The Boolean effectus of finite sets and partial functions.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sets;

impl Sets {
    fn index_in(members: &[usize], x: usize) -> Option<usize> {
        members.iter().position(|&m| m == x)
    }
}

impl Effectus for Sets {
    type Obj = FinSet;
    type Map = PartialFn;
    type Pred = SubsetPred;
    type Scalar = Rational01;
    type Preds = Subsets;

    fn name(&self) -> &'static str {
        "boolean"
    }
    fn is_commutative(&self) -> bool {
        true
    }
    fn is_boolean(&self) -> bool {
        true
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
    fn dom(&self, f: &PartialFn) -> FinSet {
        FinSet(f.dom)
    }
    fn cod(&self, f: &PartialFn) -> FinSet {
        FinSet(f.cod)
    }

    fn identity(&self, x: &FinSet) -> PartialFn {
        PartialFn {
            dom: x.0,
            cod: x.0,
            table: (0..x.0).map(Some).collect(),
        }
    }
    fn compose(&self, g: &PartialFn, f: &PartialFn) -> Result<PartialFn> {
        f.then(g)
    }
    fn zero_map(&self, x: &FinSet, y: &FinSet) -> PartialFn {
        PartialFn {
            dom: x.0,
            cod: y.0,
            table: vec![None; x.0],
        }
    }
    fn inj(&self, x: &FinSet, y: &FinSet, side: Side) -> PartialFn {
        let cod = x.0 + y.0;
        match side {
            Side::Left => PartialFn {
                dom: x.0,
                cod,
                table: (0..x.0).map(Some).collect(),
            },
            Side::Right => PartialFn {
                dom: y.0,
                cod,
                table: (0..y.0).map(|j| Some(x.0 + j)).collect(),
            },
        }
    }
    fn cotuple(&self, f: &PartialFn, g: &PartialFn) -> Result<PartialFn> {
        if f.cod != g.cod {
            return Err(Error::ShapeMismatch("cotuple of maps with different codomains".into()));
        }
        let mut table = f.table.clone();
        table.extend_from_slice(&g.table);
        Ok(PartialFn {
            dom: f.dom + g.dom,
            cod: f.cod,
            table,
        })
    }
    fn ovee_map(&self, f: &PartialFn, g: &PartialFn) -> Option<PartialFn> {
        if f.dom != g.dom || f.cod != g.cod {
            return None;
        }
        let mut table = Vec::with_capacity(f.dom);
        for (a, b) in f.table.iter().zip(&g.table) {
            match (a, b) {
                (Some(_), Some(_)) => return None,
                (a, b) => table.push(a.or(*b)),
            }
        }
        Some(PartialFn {
            dom: f.dom,
            cod: f.cod,
            table,
        })
    }
    fn maps_eq(&self, f: &PartialFn, g: &PartialFn) -> bool {
        f == g
    }
    fn scale_map(&self, s: &Rational01, f: &PartialFn) -> PartialFn {
        if s.is_zero() {
            self.zero_map(&FinSet(f.dom), &FinSet(f.cod))
        } else {
            f.clone()
        }
    }

    fn preds(&self, x: &FinSet) -> Subsets {
        Subsets(x.0)
    }
    fn pred_obj(&self, p: &SubsetPred) -> FinSet {
        FinSet(p.size())
    }
    fn pred_as_map(&self, p: &SubsetPred) -> PartialFn {
        PartialFn {
            dom: p.size(),
            cod: 1,
            table: p.0.iter().map(|&b| b.then_some(0)).collect(),
        }
    }
    fn map_as_pred(&self, f: &PartialFn) -> Result<SubsetPred> {
        if f.cod != 1 {
            return Err(Error::ShapeMismatch(format!("predicate map into a set of size {}", f.cod)));
        }
        Ok(SubsetPred(f.table.iter().map(Option::is_some).collect()))
    }
    fn scalar_of(&self, s: &PartialFn) -> Result<Rational01> {
        if s.dom != 1 || s.cod != 1 {
            return Err(Error::ShapeMismatch("scalar must be a map 1 → 1".into()));
        }
        Ok(if s.table[0].is_some() {
            Rational01::one()
        } else {
            Rational01::zero()
        })
    }
    fn scalars_eq(&self, a: &Rational01, b: &Rational01) -> bool {
        a == b
    }

    fn normalize(&self, w: &PartialFn) -> Option<(PartialFn, Rational01)> {
        (w.dom == 1 && w.table[0].is_some()).then(|| (w.clone(), Rational01::one()))
    }
    fn assert_map(&self, p: &SubsetPred) -> PartialFn {
        PartialFn {
            dom: p.size(),
            cod: p.size(),
            table: (0..p.size()).map(|x| p.contains(x).then_some(x)).collect(),
        }
    }
    fn image(&self, f: &PartialFn) -> SubsetPred {
        let mut bits = vec![false; f.cod];
        for y in f.table.iter().flatten() {
            bits[*y] = true;
        }
        SubsetPred(bits)
    }
    fn comprehension(&self, p: &SubsetPred) -> (FinSet, PartialFn) {
        let members = p.members();
        let pi = PartialFn {
            dom: members.len(),
            cod: p.size(),
            table: members.iter().map(|&m| Some(m)).collect(),
        };
        (FinSet(members.len()), pi)
    }
    fn quotient(&self, p: &SubsetPred) -> (FinSet, PartialFn) {
        let rest = p.complement().members();
        let xi = PartialFn {
            dom: p.size(),
            cod: rest.len(),
            table: (0..p.size()).map(|x| Self::index_in(&rest, x)).collect(),
        };
        (FinSet(rest.len()), xi)
    }
    fn factor_through_quotient(&self, f: &PartialFn, p: &SubsetPred) -> Result<PartialFn> {
        if f.dom != p.size() {
            return Err(Error::ShapeMismatch("predicate and map domain differ".into()));
        }
        if p.members().iter().any(|&x| f.table[x].is_some()) {
            return Err(Error::PreconditionFailed("p is not below ker f".into()));
        }
        let rest = p.complement().members();
        Ok(PartialFn {
            dom: rest.len(),
            cod: f.cod,
            table: rest.iter().map(|&x| f.table[x]).collect(),
        })
    }
    fn factor_through_comprehension(&self, f: &PartialFn, p: &SubsetPred) -> Result<PartialFn> {
        if f.cod != p.size() {
            return Err(Error::ShapeMismatch("predicate and map codomain differ".into()));
        }
        let members = p.members();
        let table = f
            .table
            .iter()
            .map(|y| match y {
                None => Ok(None),
                Some(y) => Self::index_in(&members, *y)
                    .map(Some)
                    .ok_or_else(|| Error::PreconditionFailed("□f(p) is not 1".into())),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PartialFn {
            dom: f.dom,
            cod: members.len(),
            table,
        })
    }
    fn is_sharp(&self, _p: &SubsetPred) -> bool {
        true
    }
    fn is_pure_substate(&self, w: &PartialFn) -> bool {
        w.dom == 1 && w.table[0].is_some()
    }
    fn inverse(&self, f: &PartialFn) -> Option<PartialFn> {
        if f.dom != f.cod || !f.is_total() {
            return None;
        }
        let mut inv = vec![None; f.cod];
        for (x, y) in f.table.iter().enumerate() {
            let y = y.expect("total");
            if inv[y].is_some() {
                return None;
            }
            inv[y] = Some(x);
        }
        Some(PartialFn {
            dom: f.cod,
            cod: f.dom,
            table: inv,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::effectus::*;

    fn pf(dom: usize, cod: usize, t: &[Option<usize>]) -> PartialFn {
        PartialFn::new(dom, cod, t.to_vec()).unwrap()
    }

    /// All partial functions `n → m`.
    fn all_partial(n: usize, m: usize) -> Vec<PartialFn> {
        let mut out = Vec::new();
        let total = (m + 1).pow(n as u32);
        for mut code in 0..total {
            let mut t = Vec::new();
            for _ in 0..n {
                let d = code % (m + 1);
                code /= m + 1;
                t.push(if d == m { None } else { Some(d) });
            }
            out.push(pf(n, m, &t));
        }
        out
    }

    #[test]
    fn compose_examples() {
        let e = Sets;
        let f = pf(2, 2, &[Some(1), None]);
        assert_eq!(e.compose(&e.identity(&FinSet(2)), &f).unwrap(), f);
        assert_eq!(e.compose(&f, &e.identity(&FinSet(2))).unwrap(), f);
        let g = pf(2, 2, &[Some(0), None]);
        assert_eq!(e.compose(&g, &f).unwrap().table[0], None);
        assert!(e.compose(&pf(3, 1, &[None; 3]), &f).is_err());
    }

    #[test]
    fn compose_table_matches_truth_table() {
        let e = Sets;
        let all = all_partial(2, 2);
        assert_eq!(all.len(), 9);
        for f in &all {
            for g in &all {
                let h = e.compose(g, f).unwrap();
                for x in 0..2 {
                    let expect = match f.table[x] {
                        None => None,
                        Some(y) => g.table[y],
                    };
                    assert_eq!(h.table[x], expect);
                }
            }
        }
    }

    #[test]
    fn kernel_and_image() {
        let e = Sets;
        let f = pf(2, 3, &[Some(2), None]);
        assert_eq!(ker_supp(&e, &f), SubsetPred(vec![true, false]));
        assert_eq!(e.image(&f), SubsetPred(vec![false, false, true]));
        assert!(!is_total(&e, &f));
        assert!(is_total(&e, &pf(2, 1, &[Some(0), Some(0)])));
    }

    #[test]
    fn box_subst_formula() {
        let e = Sets;
        let f = pf(3, 2, &[Some(0), Some(1), None]);
        let v = SubsetPred(vec![true, false]);
        // x with f(x) undefined or f(x) ∈ V
        assert_eq!(box_subst(&e, &f, &v).unwrap(), SubsetPred(vec![true, false, true]));
    }

    #[test]
    fn ovee_requires_disjoint_domains() {
        let e = Sets;
        let f = pf(2, 1, &[Some(0), None]);
        let g = pf(2, 1, &[None, Some(0)]);
        assert_eq!(e.ovee_map(&f, &g).unwrap(), pf(2, 1, &[Some(0), Some(0)]));
        assert!(e.ovee_map(&f, &f).is_none());
    }

    #[test]
    fn instrument_routes() {
        let e = Sets;
        let p = SubsetPred(vec![true, false, true]);
        let i = instrument(&e, &p).unwrap();
        assert_eq!(i.table, vec![Some(0), Some(4), Some(2)]);
        let back = e.compose(&codiagonal(&e, &FinSet(3)), &i).unwrap();
        assert_eq!(back, e.identity(&FinSet(3)));
    }

    #[test]
    fn assert_of_top_is_identity() {
        let e = Sets;
        assert_eq!(e.assert_map(&Subsets(3).one()), e.identity(&FinSet(3)));
    }

    #[test]
    fn boolean_ops() {
        let p = SubsetPred(vec![true, false, true]);
        let q = SubsetPred(vec![true, true, false]);
        let ops = boolean_algebra_ops(&p, &q).unwrap();
        assert_eq!(ops.meet, SubsetPred(vec![true, false, false]));
        assert_eq!(p.meet(&p.complement()).unwrap(), Subsets(3).zero());
        assert_eq!(and_then(&Sets, &p, &q).unwrap(), ops.meet);
        assert!(boolean_algebra_ops(&p, &SubsetPred(vec![true])).is_err());
    }

    #[test]
    fn distributivity_exhaustive() {
        let subsets: Vec<SubsetPred> = (0..8u32)
            .map(|c| SubsetPred((0..3).map(|i| c >> i & 1 == 1).collect()))
            .collect();
        for a in &subsets {
            for b in &subsets {
                for c in &subsets {
                    let lhs = a.meet(&b.join(c).unwrap()).unwrap();
                    let rhs = a.meet(b).unwrap().join(&a.meet(c).unwrap()).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn extensive_split() {
        let f = PartialFn::total(3, 3, |_| 0).unwrap();
        let s = extensive_pullback(&f, 2, 1).unwrap();
        assert!(s.right.is_empty());
        let id = Sets.identity(&FinSet(3));
        let s = extensive_pullback(&id, 2, 1).unwrap();
        assert_eq!(s.left, vec![0, 1]);
        assert_eq!(s.right, vec![2]);
        let f = pf(5, 4, &[Some(3), Some(0), Some(2), Some(1), Some(3)]);
        let s = extensive_pullback(&f, 2, 2).unwrap();
        assert_eq!(s.recompose(2), f);
        assert!(s.inclusions_bijective());
        assert!(matches!(
            extensive_pullback(&pf(1, 2, &[None]), 1, 1),
            Err(Error::NotTotal)
        ));
    }

    #[test]
    fn comprehension_and_quotient() {
        let e = Sets;
        let p = SubsetPred(vec![false, true, true]);
        let (c, pi) = e.comprehension(&p);
        assert_eq!(c, FinSet(2));
        assert_eq!(pi.table, vec![Some(1), Some(2)]);
        let (q, xi) = e.quotient(&p);
        assert_eq!(q, FinSet(1));
        assert_eq!(xi.table, vec![Some(0), None, None]);
        assert_eq!(ker(&e, &xi), p);
        // X/P = [X|¬P]
        let (c2, _) = e.comprehension(&p.complement());
        assert_eq!(c2, q);
        let f = pf(3, 2, &[Some(1), None, None]);
        let fbar = e.factor_through_quotient(&f, &p).unwrap();
        assert_eq!(e.compose(&fbar, &xi).unwrap(), f);
        assert!(e.factor_through_quotient(&pf(3, 2, &[None, Some(0), None]), &p).is_err());
        let g = pf(2, 3, &[Some(2), None]);
        let gbar = e.factor_through_comprehension(&g, &p).unwrap();
        assert_eq!(e.compose(&pi, &gbar).unwrap(), g);
        assert!(e.factor_through_comprehension(&pf(1, 3, &[Some(0)]), &p).is_err());
    }

    #[test]
    fn floor_ceil_trivial() {
        let p = SubsetPred(vec![true, false, true]);
        let (f, c) = floor_ceil(&Sets, &p);
        assert_eq!(f, p);
        assert_eq!(c, p);
    }
}
