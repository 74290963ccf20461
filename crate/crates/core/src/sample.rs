//! Choice sources and per-instance random generators.
//!
//! Every generator draws through a [`Source`]. A [`RandomSource`] gives
//! seeded pseudo-random draws; an [`Odometer`] walks every sequence of
//! discrete choices, which is how the Boolean instance is enumerated.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::boolean::{FinSet, PartialFn, Sets, SubsetPred};
use crate::effectus::Effectus;
use crate::linalg::{c, herm_eig, CMatrix, C64};
use crate::prob::{Dists, FuzzyPred, KernelMap, SubDist};
use crate::quantum::{BlockEffect, KrausMap, KrausOp, Quantum, VnAlg};
use crate::scalar::Rational01;
use crate::tol::Tolerances;

pub trait Source {
    /// Uniform in `0..n`; `n` must be positive.
    fn below(&mut self, n: usize) -> usize;
    /// Uniform in `[0, 1)`.
    fn unit_f64(&mut self) -> f64;
    fn normal(&mut self) -> f64;
}

/// Name of the generator recorded in reports.
pub const RNG_NAME: &str = "chacha8 seeded per trial from splitmix64(seed, suite, instance, trial)";

pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// FNV-1a, used to fold names into seeds.
fn fnv1a(s: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in s.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

/// Independent stream seed for one trial.
pub fn trial_seed(seed: u64, suite: &str, instance: &str, trial: u64) -> u64 {
    let mut z = splitmix64(seed);
    z = splitmix64(z ^ fnv1a(suite));
    z = splitmix64(z ^ fnv1a(instance));
    splitmix64(z ^ trial)
}

pub struct RandomSource(ChaCha8Rng);

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        RandomSource(ChaCha8Rng::seed_from_u64(seed))
    }
}

impl Source for RandomSource {
    fn below(&mut self, n: usize) -> usize {
        assert!(n > 0, "below(0)");
        self.0.random_range(0..n)
    }
    fn unit_f64(&mut self) -> f64 {
        self.0.random()
    }
    fn normal(&mut self) -> f64 {
        self.0.sample(StandardNormal)
    }
}

/// Enumerates every sequence of discrete choices, last position fastest.
#[derive(Debug, Default)]
pub struct Odometer {
    prefix: Vec<usize>,
    radices: Vec<usize>,
    pos: usize,
}

impl Odometer {
    pub fn new() -> Self {
        Self::default()
    }

    /// Choices made by the run that just finished.
    pub fn choices(&self) -> &[usize] {
        &self.prefix[..self.pos]
    }

    /// Moves to the next sequence; `false` once every sequence has been seen.
    pub fn advance(&mut self) -> bool {
        self.prefix.truncate(self.pos);
        self.radices.truncate(self.pos);
        self.pos = 0;
        while let Some(last) = self.prefix.last_mut() {
            let radix = *self.radices.last().expect("same length");
            if *last + 1 < radix {
                *last += 1;
                return true;
            }
            self.prefix.pop();
            self.radices.pop();
        }
        false
    }
}

impl Source for Odometer {
    fn below(&mut self, n: usize) -> usize {
        assert!(n > 0, "below(0)");
        let v = if self.pos < self.prefix.len() {
            self.radices[self.pos] = n;
            self.prefix[self.pos].min(n - 1)
        } else {
            self.prefix.push(0);
            self.radices.push(n);
            0
        };
        self.pos += 1;
        v
    }
    fn unit_f64(&mut self) -> f64 {
        panic!("exhaustive enumeration only supports discrete choices")
    }
    fn normal(&mut self) -> f64 {
        panic!("exhaustive enumeration only supports discrete choices")
    }
}

/// Replays a recorded choice sequence.
pub struct Replay {
    choices: Vec<usize>,
    pos: usize,
}

impl Replay {
    pub fn new(choices: Vec<usize>) -> Self {
        Replay { choices, pos: 0 }
    }
}

impl Source for Replay {
    fn below(&mut self, n: usize) -> usize {
        let v = self.choices.get(self.pos).copied().unwrap_or(0);
        self.pos += 1;
        v.min(n - 1)
    }
    fn unit_f64(&mut self) -> f64 {
        panic!("choice replay only supports discrete choices")
    }
    fn normal(&mut self) -> f64 {
        panic!("choice replay only supports discrete choices")
    }
}

/// The unitary used by the perturbed-assert probe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum UnitaryChoice {
    #[default]
    Hadamard,
    Identity,
    /// `e^{iπ/3}·I`.
    Phase,
}

impl UnitaryChoice {
    pub fn matrix(self) -> CMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        match self {
            UnitaryChoice::Hadamard => CMatrix::real(2, 2, &[s, s, s, -s]),
            UnitaryChoice::Identity => CMatrix::identity(2),
            UnitaryChoice::Phase => {
                let t = std::f64::consts::FRAC_PI_3;
                CMatrix::identity(2).scale(c(t.cos(), t.sin()))
            }
        }
    }
}

/// Generation parameters shared by every suite.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Ctx {
    pub max_carrier: usize,
    pub tol: Tolerances,
    pub unitary: UnitaryChoice,
}

impl Default for Ctx {
    fn default() -> Self {
        Ctx {
            max_carrier: 3,
            tol: Tolerances::default(),
            unitary: UnitaryChoice::default(),
        }
    }
}

/// Random generators for one instance.
pub trait Lab: Effectus + Sized {
    /// A random object; never the empty one.
    fn random_obj(&self, s: &mut dyn Source, ctx: &Ctx) -> Self::Obj;
    fn random_map(&self, s: &mut dyn Source, x: &Self::Obj, y: &Self::Obj) -> Self::Map;
    fn random_total(&self, s: &mut dyn Source, x: &Self::Obj, y: &Self::Obj) -> Self::Map;
    fn random_pred(&self, s: &mut dyn Source, x: &Self::Obj) -> Self::Pred;
    fn random_sharp(&self, s: &mut dyn Source, x: &Self::Obj) -> Self::Pred;
    /// `n` predicates whose joint sum is defined.
    fn random_summable(&self, s: &mut dyn Source, x: &Self::Obj, n: usize) -> Vec<Self::Pred>;
    /// `n` summable predicates and one more, all pairwise compatible: in the
    /// quantum instance they share an eigenbasis.
    fn random_compatible(&self, s: &mut dyn Source, x: &Self::Obj, n: usize) -> (Vec<Self::Pred>, Self::Pred) {
        let t = self.random_summable(s, x, n);
        (t, self.random_pred(s, x))
    }
    fn random_state(&self, s: &mut dyn Source, x: &Self::Obj) -> Self::Map;
    fn random_pure_state(&self, s: &mut dyn Source, x: &Self::Obj) -> Self::Map;
    fn random_scalar(&self, s: &mut dyn Source) -> Rational01;
    /// A map `f ≤ id` on `x`.
    fn random_below_id(&self, s: &mut dyn Source, x: &Self::Obj) -> Self::Map;
    /// A map into `x` whose substitution sends sharp predicates to sharp ones.
    fn random_sharp_preserving(&self, s: &mut dyn Source, ctx: &Ctx, x: &Self::Obj) -> Self::Map;

    fn tensor_obj(&self, x: &Self::Obj, y: &Self::Obj) -> Self::Obj;
    fn tensor_map(&self, f: &Self::Map, g: &Self::Map) -> Self::Map;
    fn tensor_pred(&self, p: &Self::Pred, q: &Self::Pred) -> Self::Pred;
}

fn random_rational(s: &mut dyn Source) -> Rational01 {
    let den = 1 + s.below(16);
    let num = s.below(den + 1);
    Rational01::new(num as i64, den as i64).expect("num ≤ den")
}

/// Splits `total` into `n` non-negative parts.
fn composition(s: &mut dyn Source, total: usize, n: usize) -> Vec<usize> {
    let mut cuts: Vec<usize> = (0..n.saturating_sub(1)).map(|_| s.below(total + 1)).collect();
    cuts.sort_unstable();
    let mut parts = Vec::with_capacity(n);
    let mut prev = 0;
    for c in cuts {
        parts.push(c - prev);
        prev = c;
    }
    parts.push(total - prev);
    parts
}

fn random_subdist(s: &mut dyn Source, n: usize, total: bool) -> SubDist {
    if n == 0 {
        return SubDist::zero();
    }
    let den = 1 + s.below(16);
    let mass = if total { den } else { s.below(den + 1) };
    let parts = composition(s, mass, n);
    SubDist::new(
        parts
            .into_iter()
            .enumerate()
            .map(|(k, w)| (k, Rational01::new(w as i64, den as i64).expect("part of mass"))),
    )
    .expect("mass at most 1")
}

impl Lab for Sets {
    fn random_obj(&self, s: &mut dyn Source, ctx: &Ctx) -> FinSet {
        FinSet(1 + s.below(ctx.max_carrier.max(1)))
    }
    fn random_map(&self, s: &mut dyn Source, x: &FinSet, y: &FinSet) -> PartialFn {
        let table = (0..x.0)
            .map(|_| {
                let v = s.below(y.0 + 1);
                (v < y.0).then_some(v)
            })
            .collect();
        PartialFn::new(x.0, y.0, table).expect("indices in range")
    }
    fn random_total(&self, s: &mut dyn Source, x: &FinSet, y: &FinSet) -> PartialFn {
        assert!(y.0 > 0 || x.0 == 0, "no total map into the empty set");
        PartialFn::new(x.0, y.0, (0..x.0).map(|_| Some(s.below(y.0))).collect()).expect("indices in range")
    }
    fn random_pred(&self, s: &mut dyn Source, x: &FinSet) -> SubsetPred {
        SubsetPred((0..x.0).map(|_| s.below(2) == 1).collect())
    }
    fn random_sharp(&self, s: &mut dyn Source, x: &FinSet) -> SubsetPred {
        self.random_pred(s, x)
    }
    fn random_summable(&self, s: &mut dyn Source, x: &FinSet, n: usize) -> Vec<SubsetPred> {
        let owner: Vec<usize> = (0..x.0).map(|_| s.below(n + 1)).collect();
        (0..n)
            .map(|k| SubsetPred(owner.iter().map(|&o| o == k).collect()))
            .collect()
    }
    fn random_state(&self, s: &mut dyn Source, x: &FinSet) -> PartialFn {
        PartialFn::new(1, x.0, vec![Some(s.below(x.0))]).expect("index in range")
    }
    fn random_pure_state(&self, s: &mut dyn Source, x: &FinSet) -> PartialFn {
        self.random_state(s, x)
    }
    fn random_scalar(&self, s: &mut dyn Source) -> Rational01 {
        if s.below(2) == 1 {
            Rational01::one()
        } else {
            Rational01::zero()
        }
    }
    fn random_below_id(&self, s: &mut dyn Source, x: &FinSet) -> PartialFn {
        let p = self.random_pred(s, x);
        self.assert_map(&p)
    }
    fn random_sharp_preserving(&self, s: &mut dyn Source, ctx: &Ctx, x: &FinSet) -> PartialFn {
        let y = self.random_obj(s, ctx);
        self.random_total(s, &y, x)
    }
    fn tensor_obj(&self, x: &FinSet, y: &FinSet) -> FinSet {
        FinSet(x.0 * y.0)
    }
    fn tensor_map(&self, f: &PartialFn, g: &PartialFn) -> PartialFn {
        let table = (0..f.dom * g.dom)
            .map(|k| match (f.table[k / g.dom], g.table[k % g.dom]) {
                (Some(a), Some(b)) => Some(a * g.cod + b),
                _ => None,
            })
            .collect();
        PartialFn {
            dom: f.dom * g.dom,
            cod: f.cod * g.cod,
            table,
        }
    }
    fn tensor_pred(&self, p: &SubsetPred, q: &SubsetPred) -> SubsetPred {
        SubsetPred(p.0.iter().flat_map(|&a| q.0.iter().map(move |&b| a && b)).collect())
    }
}

impl Lab for Dists {
    fn random_obj(&self, s: &mut dyn Source, ctx: &Ctx) -> FinSet {
        FinSet(1 + s.below(ctx.max_carrier.max(1)))
    }
    fn random_map(&self, s: &mut dyn Source, x: &FinSet, y: &FinSet) -> KernelMap {
        let rows = (0..x.0).map(|_| random_subdist(s, y.0, false)).collect();
        KernelMap::new(x.0, y.0, rows).expect("indices in range")
    }
    fn random_total(&self, s: &mut dyn Source, x: &FinSet, y: &FinSet) -> KernelMap {
        let rows = (0..x.0).map(|_| random_subdist(s, y.0, true)).collect();
        KernelMap::new(x.0, y.0, rows).expect("indices in range")
    }
    fn random_pred(&self, s: &mut dyn Source, x: &FinSet) -> FuzzyPred {
        FuzzyPred((0..x.0).map(|_| random_rational(s)).collect())
    }
    fn random_sharp(&self, s: &mut dyn Source, x: &FinSet) -> FuzzyPred {
        let members: Vec<usize> = (0..x.0).filter(|_| s.below(2) == 1).collect();
        FuzzyPred::indicator(x.0, &members)
    }
    fn random_summable(&self, s: &mut dyn Source, x: &FinSet, n: usize) -> Vec<FuzzyPred> {
        let mut out = vec![Vec::with_capacity(x.0); n];
        for _ in 0..x.0 {
            let d = random_subdist(s, n, false);
            for (k, v) in out.iter_mut().enumerate() {
                v.push(d.get(k));
            }
        }
        out.into_iter().map(FuzzyPred).collect()
    }
    fn random_state(&self, s: &mut dyn Source, x: &FinSet) -> KernelMap {
        KernelMap::state(x.0, random_subdist(s, x.0, true)).expect("indices in range")
    }
    fn random_pure_state(&self, s: &mut dyn Source, x: &FinSet) -> KernelMap {
        KernelMap::state(x.0, SubDist::dirac(s.below(x.0))).expect("index in range")
    }
    fn random_scalar(&self, s: &mut dyn Source) -> Rational01 {
        random_rational(s)
    }
    fn random_below_id(&self, s: &mut dyn Source, x: &FinSet) -> KernelMap {
        let p = self.random_pred(s, x);
        self.assert_map(&p)
    }
    fn random_sharp_preserving(&self, s: &mut dyn Source, ctx: &Ctx, x: &FinSet) -> KernelMap {
        let y = self.random_obj(s, ctx);
        let t: Vec<usize> = (0..y.0).map(|_| s.below(x.0)).collect();
        KernelMap::function(y.0, x.0, |k| t[k]).expect("indices in range")
    }
    fn tensor_obj(&self, x: &FinSet, y: &FinSet) -> FinSet {
        FinSet(x.0 * y.0)
    }
    fn tensor_map(&self, f: &KernelMap, g: &KernelMap) -> KernelMap {
        crate::prob::tensor_k(f, g)
    }
    fn tensor_pred(&self, p: &FuzzyPred, q: &FuzzyPred) -> FuzzyPred {
        p.tensor(q)
    }
}

/// Block layouts the quantum generators draw from.
pub const QUANTUM_LAYOUTS: [&[usize]; 4] = [&[2], &[3], &[2, 1], &[2, 2]];

fn gaussian(s: &mut dyn Source, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| Complex64::new(s.normal(), s.normal()))
}

/// Haar-distributed unitary by Gram–Schmidt on a complex Gaussian matrix.
pub fn haar_unitary(s: &mut dyn Source, n: usize) -> CMatrix {
    loop {
        let g = gaussian(s, n, n);
        let mut cols: Vec<Vec<C64>> = Vec::with_capacity(n);
        let mut ok = true;
        for j in 0..n {
            let mut v = g.col(j);
            for u in &cols {
                let dot: C64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, ui) in v.iter_mut().zip(u) {
                    *vi -= dot * ui;
                }
            }
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-8 {
                ok = false;
                break;
            }
            cols.push(v.into_iter().map(|z| z / norm).collect());
        }
        if ok {
            return CMatrix::from_fn(n, n, |i, j| cols[j][i]);
        }
    }
}

pub fn random_unit_vector(s: &mut dyn Source, n: usize) -> Vec<C64> {
    loop {
        let v: Vec<C64> = (0..n).map(|_| Complex64::new(s.normal(), s.normal())).collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

fn conjugate_diag(u: &CMatrix, d: &[f64]) -> CMatrix {
    let m = &(u * &CMatrix::diag(d)) * &u.adjoint();
    m.hermitian_part()
}

/// `U·diag(λ)·U†` with `λᵢ` uniform on `[-0.2, 1.2]` clamped to `[0, 1]`, so
/// that eigenvalues 0 and 1 occur with positive probability.
pub fn random_effect_matrix(s: &mut dyn Source, n: usize) -> CMatrix {
    let u = haar_unitary(s, n);
    let d: Vec<f64> = (0..n).map(|_| (s.unit_f64() * 1.4 - 0.2).clamp(0.0, 1.0)).collect();
    conjugate_diag(&u, &d)
}

pub fn random_projection_matrix(s: &mut dyn Source, n: usize) -> CMatrix {
    let u = haar_unitary(s, n);
    let d: Vec<f64> = (0..n).map(|_| if s.below(2) == 1 { 1.0 } else { 0.0 }).collect();
    conjugate_diag(&u, &d)
}

impl Quantum {
    /// Kraus operators from every domain block to every codomain block,
    /// normalised so that `Σ K†K = I` on each domain block.
    fn random_unital(&self, s: &mut dyn Source, x: &VnAlg, y: &VnAlg) -> KrausMap {
        let mut kraus = Vec::new();
        let rows: usize = y.block_dims.iter().sum();
        for (i, &n) in x.block_dims.iter().enumerate() {
            // enough operators that Σ K†K has full rank
            let per_dst = n.div_ceil(rows.max(1));
            let mut ops = Vec::new();
            for (j, &m) in y.block_dims.iter().enumerate() {
                for _ in 0..per_dst + s.below(2) {
                    ops.push(KrausOp {
                        src: i,
                        dst: j,
                        k: gaussian(s, m, n),
                    });
                }
            }
            let mut gram = CMatrix::zeros(n, n);
            for op in &ops {
                gram = &gram + &(&op.k.adjoint() * &op.k);
            }
            let eig = herm_eig(&gram.hermitian_part(), &self.tol).expect("Gram matrices are Hermitian");
            let inv_root = eig.map(|l| 1.0 / l.max(1e-12).sqrt());
            for op in ops {
                kraus.push(KrausOp {
                    k: &op.k * &inv_root,
                    ..op
                });
            }
        }
        KrausMap {
            dom: x.clone(),
            cod: y.clone(),
            kraus,
        }
    }

    fn random_effect(&self, s: &mut dyn Source, x: &VnAlg) -> BlockEffect {
        BlockEffect {
            blocks: x.block_dims.iter().map(|&n| random_effect_matrix(s, n)).collect(),
        }
    }
}

impl Lab for Quantum {
    fn random_obj(&self, s: &mut dyn Source, _ctx: &Ctx) -> VnAlg {
        VnAlg {
            block_dims: QUANTUM_LAYOUTS[s.below(QUANTUM_LAYOUTS.len())].to_vec(),
        }
    }
    fn random_map(&self, s: &mut dyn Source, x: &VnAlg, y: &VnAlg) -> KrausMap {
        let total = self.random_unital(s, x, y);
        let p = self.random_effect(s, x);
        self.compose(&total, &self.assert_map(&p)).expect("shapes agree")
    }
    fn random_total(&self, s: &mut dyn Source, x: &VnAlg, y: &VnAlg) -> KrausMap {
        self.random_unital(s, x, y)
    }
    fn random_pred(&self, s: &mut dyn Source, x: &VnAlg) -> BlockEffect {
        self.random_effect(s, x)
    }
    fn random_sharp(&self, s: &mut dyn Source, x: &VnAlg) -> BlockEffect {
        BlockEffect {
            blocks: x.block_dims.iter().map(|&n| random_projection_matrix(s, n)).collect(),
        }
    }
    fn random_summable(&self, s: &mut dyn Source, x: &VnAlg, n: usize) -> Vec<BlockEffect> {
        let w = 1.0 / n as f64;
        (0..n)
            .map(|_| {
                let e = self.random_effect(s, x);
                BlockEffect {
                    blocks: e.blocks.iter().map(|b| b.scale_re(w)).collect(),
                }
            })
            .collect()
    }
    #[allow(clippy::needless_range_loop)]
    fn random_compatible(&self, s: &mut dyn Source, x: &VnAlg, n: usize) -> (Vec<BlockEffect>, BlockEffect) {
        let mut t = vec![Vec::new(); n];
        let mut q = Vec::new();
        for &d in &x.block_dims {
            let u = haar_unitary(s, d);
            let mut diags = vec![vec![0.0; d]; n];
            for k in 0..d {
                // a random point of the simplex {w ≥ 0, Σw ≤ 1}
                let mut cuts: Vec<f64> = (0..n).map(|_| s.unit_f64()).collect();
                cuts.sort_by(f64::total_cmp);
                let mut prev = 0.0;
                for (i, c) in cuts.into_iter().enumerate() {
                    diags[i][k] = c - prev;
                    prev = c;
                }
            }
            for (i, dg) in diags.iter().enumerate() {
                t[i].push(conjugate_diag(&u, dg));
            }
            let dq: Vec<f64> = (0..d).map(|_| s.unit_f64()).collect();
            q.push(conjugate_diag(&u, &dq));
        }
        (
            t.into_iter().map(|blocks| BlockEffect { blocks }).collect(),
            BlockEffect { blocks: q },
        )
    }
    fn random_state(&self, s: &mut dyn Source, x: &VnAlg) -> KrausMap {
        let mut kraus = Vec::new();
        let mut total = 0.0;
        for (j, &m) in x.block_dims.iter().enumerate() {
            let rank = 1 + s.below(m);
            let g = gaussian(s, m, rank);
            total += g.frobenius().powi(2);
            for r in 0..rank {
                kraus.push(KrausOp {
                    src: 0,
                    dst: j,
                    k: CMatrix::column(&g.col(r)),
                });
            }
        }
        let scale = 1.0 / total.sqrt();
        for op in &mut kraus {
            op.k = op.k.scale_re(scale);
        }
        KrausMap {
            dom: VnAlg::scalars(),
            cod: x.clone(),
            kraus,
        }
    }
    fn random_pure_state(&self, s: &mut dyn Source, x: &VnAlg) -> KrausMap {
        let block = s.below(x.blocks());
        let v = random_unit_vector(s, x.dim(block));
        self.vector_state(x, block, &v).expect("vector fits its block")
    }
    fn random_scalar(&self, s: &mut dyn Source) -> Rational01 {
        random_rational(s)
    }
    /// Central asserts `x ↦ c·x` written with a random split of their Kraus
    /// operators, so that equality with `asrt_{ker⊥ f}` is not syntactic.
    fn random_below_id(&self, s: &mut dyn Source, x: &VnAlg) -> KrausMap {
        let mut kraus = Vec::new();
        for (i, &n) in x.block_dims.iter().enumerate() {
            let weight = s.unit_f64();
            let parts = 1 + s.below(3);
            let amps: Vec<C64> = (0..parts).map(|_| Complex64::new(s.normal(), s.normal())).collect();
            let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt().max(1e-12);
            for a in amps {
                kraus.push(KrausOp {
                    src: i,
                    dst: i,
                    k: CMatrix::identity(n).scale(a / norm * weight.sqrt()),
                });
            }
        }
        KrausMap {
            dom: x.clone(),
            cod: x.clone(),
            kraus,
        }
    }
    /// Unital *-homomorphisms: unitary conjugations, block permutations and
    /// amplifications `x ↦ x ⊗ I₂`.
    fn random_sharp_preserving(&self, s: &mut dyn Source, _ctx: &Ctx, x: &VnAlg) -> KrausMap {
        let u: Vec<CMatrix> = x.block_dims.iter().map(|&n| haar_unitary(s, n)).collect();
        let conj = self.unitary_map(&u).expect("Haar unitaries are unitary");
        let kind = s.below(3);
        if kind == 1 && x.blocks() > 1 {
            let mut perm: Vec<usize> = (0..x.blocks()).collect();
            for i in (1..perm.len()).rev() {
                perm.swap(i, s.below(i + 1));
            }
            let p = self.block_permutation(x, &perm).expect("a permutation");
            return self.compose(&conj, &p).expect("shapes agree");
        }
        if kind == 2 && x.blocks() == 1 && x.dim(0) <= 2 {
            let amp = self.amplification(x.dim(0), 2);
            return self.compose(&conj, &amp).expect("shapes agree");
        }
        conj
    }
    fn tensor_obj(&self, x: &VnAlg, y: &VnAlg) -> VnAlg {
        x.tensor(y)
    }
    fn tensor_map(&self, f: &KrausMap, g: &KrausMap) -> KrausMap {
        Quantum::tensor_map(self, f, g)
    }
    fn tensor_pred(&self, p: &BlockEffect, q: &BlockEffect) -> BlockEffect {
        p.tensor(q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::effectus::{is_total, ker_supp};
    use crate::linalg::unitary_deviation;
    use crate::scalar::EffectAlgebra;

    #[test]
    fn odometer_enumerates_mixed_radices() {
        let mut o = Odometer::new();
        let mut seen = Vec::new();
        loop {
            let a = o.below(2);
            let b = o.below(if a == 0 { 1 } else { 3 });
            seen.push((a, b));
            if !o.advance() {
                break;
            }
        }
        assert_eq!(seen, vec![(0, 0), (1, 0), (1, 1), (1, 2)]);
    }

    #[test]
    fn replay_follows_choices() {
        let mut r = Replay::new(vec![2, 1]);
        assert_eq!(r.below(3), 2);
        assert_eq!(r.below(2), 1);
    }

    #[test]
    fn seeds_differ_by_component() {
        let a = trial_seed(1, "galois", "prob", 0);
        assert_ne!(a, trial_seed(1, "galois", "prob", 1));
        assert_ne!(a, trial_seed(1, "galois", "quantum", 0));
        assert_ne!(a, trial_seed(2, "galois", "prob", 0));
        assert_eq!(a, trial_seed(1, "galois", "prob", 0));
    }

    #[test]
    fn haar_is_unitary() {
        let mut s = RandomSource::new(7);
        for n in 1..5 {
            assert!(unitary_deviation(&haar_unitary(&mut s, n)) < 1e-12);
        }
    }

    #[test]
    fn generators_respect_their_contracts() {
        let ctx = Ctx::default();
        let mut s = RandomSource::new(11);
        let q = Quantum::default();
        let d = Dists;
        for _ in 0..20 {
            let x = q.random_obj(&mut s, &ctx);
            let y = q.random_obj(&mut s, &ctx);
            assert!(is_total(&q, &q.random_total(&mut s, &x, &y)));
            let f = q.random_map(&mut s, &x, &y);
            assert!(KrausMap::new(f.dom.clone(), f.cod.clone(), f.kraus.clone(), &q.tol).is_ok());
            let w = q.random_state(&mut s, &x);
            assert!(is_total(&q, &w));
            let parts = q.random_summable(&mut s, &x, 3);
            let preds = q.preds(&x);
            let sum = preds.ovee(&preds.ovee(&parts[0], &parts[1]).unwrap(), &parts[2]);
            assert!(sum.is_some());
            let b = q.random_below_id(&mut s, &x);
            let c = ker_supp(&q, &b);
            assert!(q.maps_eq(&b, &q.assert_map(&c)));
            let h = q.random_sharp_preserving(&mut s, &ctx, &x);
            assert_eq!(h.cod, x);
            assert!(is_total(&q, &h));

            let a = d.random_obj(&mut s, &ctx);
            let b = d.random_obj(&mut s, &ctx);
            assert!(d.random_total(&mut s, &a, &b).is_total());
            let parts = d.random_summable(&mut s, &a, 3);
            let preds = d.preds(&a);
            assert!(preds.ovee(&preds.ovee(&parts[0], &parts[1]).unwrap(), &parts[2]).is_some());
        }
    }

    #[test]
    fn rationals_have_small_denominators() {
        let mut s = RandomSource::new(3);
        for _ in 0..100 {
            let r = random_rational(&mut s);
            assert!(r.denom() <= &16.into());
        }
    }
}
