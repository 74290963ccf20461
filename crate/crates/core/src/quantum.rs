//! Finite-dimensional von Neumann algebras `⊕ᵢ M_{nᵢ}` with completely
//! positive subunital maps given by Kraus operators.
//!
//! A map `f: X → Y` of the effectus is a CP map `𝒜_Y → 𝒜_X` (Heisenberg
//! picture). Each Kraus operator runs from a Hilbert block of `X` (dimension
//! `n`) to a Hilbert block of `Y` (dimension `m`) and is stored as an `m × n`
//! matrix `K`, so that `f(y)ᵢ = Σ K† yⱼ K` and states push forward as
//! `ρ'ⱼ = Σ K ρᵢ K†`.

use serde::{Deserialize, Serialize};

use crate::effectus::{Effectus, Side};
use crate::error::{Error, Result};
use crate::linalg::{
    c, fixed_proj, herm_eig, projection_deviation, psd_pinv, psd_rank, psd_sqrt, range_isometry,
    spectrum_bounds, support_proj, unitary_deviation, CMatrix, C64,
};
use crate::scalar::{EffectAlgebra, Rational01};
use crate::tol::Tolerances;

/// `⊕ᵢ M_{nᵢ}`; the empty list is the zero algebra.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct VnAlg {
    pub block_dims: Vec<usize>,
}

impl VnAlg {
    pub fn new(block_dims: Vec<usize>) -> Result<Self> {
        if block_dims.contains(&0) {
            return Err(Error::OutOfRange("block of dimension 0".into()));
        }
        Ok(VnAlg { block_dims })
    }

    /// `M_n`.
    pub fn matrix(n: usize) -> Self {
        VnAlg { block_dims: vec![n] }
    }

    /// `ℂ`, the scalars.
    pub fn scalars() -> Self {
        Self::matrix(1)
    }

    pub fn blocks(&self) -> usize {
        self.block_dims.len()
    }

    pub fn dim(&self, i: usize) -> usize {
        self.block_dims[i]
    }

    /// Blockwise tensor, blocks ordered `(i, j)` with `i` major.
    pub fn tensor(&self, other: &VnAlg) -> VnAlg {
        VnAlg {
            block_dims: self
                .block_dims
                .iter()
                .flat_map(|a| other.block_dims.iter().map(move |b| a * b))
                .collect(),
        }
    }
}

/// One Hermitian matrix per block. Used for effects, projections and general
/// self-adjoint elements alike.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BlockEffect {
    pub blocks: Vec<CMatrix>,
}

impl BlockEffect {
    /// Validates every block as an effect.
    pub fn new(blocks: Vec<CMatrix>, tol: &Tolerances) -> Result<Self> {
        for b in &blocks {
            let (lo, hi) = spectrum_bounds(b, tol)?;
            if lo < -tol.spec || hi > 1.0 + tol.spec {
                return Err(Error::NotEffect(format!("spectrum [{lo:.3e}, {hi:.3e}]")));
            }
        }
        Ok(BlockEffect { blocks })
    }

    pub fn single(m: CMatrix, tol: &Tolerances) -> Result<Self> {
        Self::new(vec![m], tol)
    }

    pub fn alg(&self) -> VnAlg {
        VnAlg {
            block_dims: self.blocks.iter().map(CMatrix::rows).collect(),
        }
    }

    pub fn identity(alg: &VnAlg) -> Self {
        BlockEffect {
            blocks: alg.block_dims.iter().map(|&n| CMatrix::identity(n)).collect(),
        }
    }

    pub fn zero(alg: &VnAlg) -> Self {
        BlockEffect {
            blocks: alg.block_dims.iter().map(|&n| CMatrix::zeros(n, n)).collect(),
        }
    }

    pub fn dist(&self, other: &BlockEffect) -> f64 {
        if self.blocks.len() != other.blocks.len() {
            return f64::INFINITY;
        }
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| a.dist(b))
            .fold(0.0, f64::max)
    }

    fn zip(&self, other: &BlockEffect, f: impl Fn(&CMatrix, &CMatrix) -> CMatrix) -> BlockEffect {
        BlockEffect {
            blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| f(a, b)).collect(),
        }
    }

    fn map(&self, f: impl Fn(&CMatrix) -> CMatrix) -> BlockEffect {
        BlockEffect {
            blocks: self.blocks.iter().map(f).collect(),
        }
    }

    fn try_map(&self, f: impl Fn(&CMatrix) -> Result<CMatrix>) -> Result<BlockEffect> {
        Ok(BlockEffect {
            blocks: self.blocks.iter().map(f).collect::<Result<_>>()?,
        })
    }

    pub fn sqrt(&self, tol: &Tolerances) -> Result<BlockEffect> {
        self.try_map(|b| psd_sqrt(b, tol))
    }

    pub fn floor(&self, tol: &Tolerances) -> Result<BlockEffect> {
        self.try_map(|b| fixed_proj(b, tol))
    }

    pub fn ceil(&self, tol: &Tolerances) -> Result<BlockEffect> {
        self.try_map(|b| support_proj(b, tol))
    }

    pub fn ortho(&self) -> BlockEffect {
        self.map(|b| &CMatrix::identity(b.rows()) - b)
    }

    /// `max ‖pᵢ² − pᵢ‖`.
    pub fn idempotence_gap(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| (&(b * b) - b).max_norm())
            .fold(0.0, f64::max)
    }

    /// Blockwise Kronecker product, blocks ordered as in [`VnAlg::tensor`].
    pub fn tensor(&self, other: &BlockEffect) -> BlockEffect {
        BlockEffect {
            blocks: self
                .blocks
                .iter()
                .flat_map(|a| other.blocks.iter().map(move |b| a.kron(b)))
                .collect(),
        }
    }
}

/// Density matrices per block; total trace at most 1.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BlockState {
    pub blocks: Vec<CMatrix>,
}

impl BlockState {
    pub fn new(blocks: Vec<CMatrix>, tol: &Tolerances) -> Result<Self> {
        let mut total = 0.0;
        for b in &blocks {
            let (lo, _) = spectrum_bounds(b, tol)?;
            if lo < -tol.spec {
                return Err(Error::NotEffect(format!("density with eigenvalue {lo:.3e}")));
            }
            total += b.trace().re;
        }
        if total > 1.0 + tol.spec {
            return Err(Error::OutOfRange(format!("total trace {total}")));
        }
        Ok(BlockState { blocks })
    }

    /// The vector state `|v⟩⟨v|` in block `block` of `alg`.
    pub fn vector(alg: &VnAlg, block: usize, v: &[C64]) -> BlockState {
        let blocks = alg
            .block_dims
            .iter()
            .enumerate()
            .map(|(i, &n)| if i == block { CMatrix::ket_bra(v) } else { CMatrix::zeros(n, n) })
            .collect();
        BlockState { blocks }
    }

    pub fn trace(&self) -> f64 {
        self.blocks.iter().map(|b| b.trace().re).sum()
    }

    pub fn dist(&self, other: &BlockState) -> f64 {
        if self.blocks.len() != other.blocks.len() {
            return f64::INFINITY;
        }
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| a.dist(b))
            .fold(0.0, f64::max)
    }

    /// `Σᵢ tr(ρᵢ eᵢ)`.
    pub fn expect(&self, e: &BlockEffect) -> f64 {
        self.blocks
            .iter()
            .zip(&e.blocks)
            .map(|(r, p)| (r * p).trace().re)
            .sum()
    }
}

/// One Kraus operator from block `src` of the domain to block `dst` of the
/// codomain.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KrausOp {
    pub src: usize,
    pub dst: usize,
    pub k: CMatrix,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KrausMap {
    pub dom: VnAlg,
    pub cod: VnAlg,
    pub kraus: Vec<KrausOp>,
}

impl KrausMap {
    /// Checks shapes and subunitality.
    pub fn new(dom: VnAlg, cod: VnAlg, kraus: Vec<KrausOp>, tol: &Tolerances) -> Result<Self> {
        for op in &kraus {
            if op.src >= dom.blocks() || op.dst >= cod.blocks() {
                return Err(Error::OutOfRange(format!("Kraus operator {}→{}", op.src, op.dst)));
            }
            if op.k.rows() != cod.dim(op.dst) || op.k.cols() != dom.dim(op.src) {
                return Err(Error::ShapeMismatch(format!(
                    "Kraus operator of shape {}x{} between blocks of dimension {} and {}",
                    op.k.rows(),
                    op.k.cols(),
                    dom.dim(op.src),
                    cod.dim(op.dst)
                )));
            }
        }
        let f = KrausMap { dom, cod, kraus };
        let one = f.heisenberg_raw(&BlockEffect::identity(&f.cod).blocks);
        for b in &one {
            let (_, hi) = spectrum_bounds(b, tol)?;
            if hi > 1.0 + tol.spec {
                return Err(Error::NotEffect(format!("f(1) has eigenvalue {hi}")));
            }
        }
        Ok(f)
    }

    fn heisenberg_raw(&self, y: &[CMatrix]) -> Vec<CMatrix> {
        let mut out: Vec<CMatrix> = self.dom.block_dims.iter().map(|&n| CMatrix::zeros(n, n)).collect();
        for op in &self.kraus {
            let t = &(&op.k.adjoint() * &y[op.dst]) * &op.k;
            out[op.src] = &out[op.src] + &t;
        }
        out
    }

    fn check_cod(&self, blocks: &[CMatrix]) -> Result<()> {
        let dims: Vec<usize> = blocks.iter().map(CMatrix::rows).collect();
        if dims != self.cod.block_dims || blocks.iter().any(|b| !b.is_square()) {
            return Err(Error::ShapeMismatch(format!(
                "element of {:?} for a map into {:?}",
                dims, self.cod.block_dims
            )));
        }
        Ok(())
    }

    /// `f(y)ᵢ = Σ K† yⱼ K`.
    pub fn heisenberg(&self, y: &BlockEffect) -> Result<BlockEffect> {
        self.check_cod(&y.blocks)?;
        Ok(BlockEffect {
            blocks: self.heisenberg_raw(&y.blocks),
        })
    }

    /// `ρ'ⱼ = Σ K ρᵢ K†`.
    pub fn schrodinger(&self, rho: &BlockState) -> Result<BlockState> {
        let dims: Vec<usize> = rho.blocks.iter().map(CMatrix::rows).collect();
        if dims != self.dom.block_dims {
            return Err(Error::ShapeMismatch(format!(
                "state on {:?} for a map out of {:?}",
                dims, self.dom.block_dims
            )));
        }
        let mut out: Vec<CMatrix> = self.cod.block_dims.iter().map(|&n| CMatrix::zeros(n, n)).collect();
        for op in &self.kraus {
            let t = &(&op.k * &rho.blocks[op.src]) * &op.k.adjoint();
            out[op.dst] = &out[op.dst] + &t;
        }
        Ok(BlockState { blocks: out })
    }

    /// Replaces each group of operators sharing `(src, dst)` by a minimal
    /// family with the same action, read off the eigenvectors of
    /// `Σ vec(K) vec(K)†`.
    pub fn simplify(&self, tol: &Tolerances) -> Result<KrausMap> {
        let mut groups: Vec<((usize, usize), Vec<&CMatrix>)> = Vec::new();
        for op in &self.kraus {
            match groups.iter_mut().find(|(key, _)| *key == (op.src, op.dst)) {
                Some((_, v)) => v.push(&op.k),
                None => groups.push(((op.src, op.dst), vec![&op.k])),
            }
        }
        let mut kraus = Vec::new();
        for ((src, dst), ks) in groups {
            let (m, n) = (ks[0].rows(), ks[0].cols());
            if ks.len() == 1 {
                if ks[0].frobenius() > 0.0 {
                    kraus.push(KrausOp { src, dst, k: ks[0].clone() });
                }
                continue;
            }
            let d = m * n;
            let mut gram = CMatrix::zeros(d, d);
            for k in &ks {
                let v = k.entries();
                for a in 0..d {
                    if v[a] == c(0.0, 0.0) {
                        continue;
                    }
                    for b in 0..d {
                        gram[(a, b)] += v[a] * v[b].conj();
                    }
                }
            }
            let eig = herm_eig(&gram.hermitian_part(), tol)?;
            let top = eig.values.first().copied().unwrap_or(0.0);
            for (idx, &lam) in eig.values.iter().enumerate() {
                if lam <= 1e-15 * top.max(1.0) {
                    continue;
                }
                let s = lam.sqrt();
                let k = CMatrix::from_fn(m, n, |i, j| eig.vectors[(i * n + j, idx)] * s);
                kraus.push(KrausOp { src, dst, k });
            }
        }
        Ok(KrausMap {
            dom: self.dom.clone(),
            cod: self.cod.clone(),
            kraus,
        })
    }

    fn max_group(&self) -> usize {
        let mut counts = std::collections::HashMap::new();
        for op in &self.kraus {
            *counts.entry((op.src, op.dst)).or_insert(0usize) += 1;
        }
        counts.values().copied().max().unwrap_or(0)
    }
}

/// The effects of an algebra as an effect algebra; comparisons use the
/// instance tolerances.
#[derive(Debug, Clone)]
pub struct Effects {
    pub alg: VnAlg,
    pub tol: Tolerances,
}

impl Effects {
    fn below_one(&self, a: &BlockEffect) -> bool {
        a.blocks.iter().all(|b| match spectrum_bounds(b, &self.tol) {
            Ok((_, hi)) => hi <= 1.0 + self.tol.spec,
            Err(_) => false,
        })
    }

    fn positive(&self, a: &BlockEffect) -> bool {
        a.blocks.iter().all(|b| match spectrum_bounds(b, &self.tol) {
            Ok((lo, _)) => lo >= -self.tol.spec,
            Err(_) => false,
        })
    }

    fn fits(&self, a: &BlockEffect) -> bool {
        a.alg() == self.alg
    }
}

impl EffectAlgebra for Effects {
    type Elem = BlockEffect;

    fn zero(&self) -> BlockEffect {
        BlockEffect::zero(&self.alg)
    }
    fn one(&self) -> BlockEffect {
        BlockEffect::identity(&self.alg)
    }
    fn ovee(&self, a: &BlockEffect, b: &BlockEffect) -> Option<BlockEffect> {
        if !self.fits(a) || !self.fits(b) {
            return None;
        }
        let s = a.zip(b, |x, y| x + y);
        self.below_one(&s).then_some(s)
    }
    fn ortho(&self, a: &BlockEffect) -> BlockEffect {
        a.ortho()
    }
    fn leq(&self, a: &BlockEffect, b: &BlockEffect) -> bool {
        self.fits(a) && self.fits(b) && self.positive(&b.zip(a, |x, y| x - y))
    }
    fn same(&self, a: &BlockEffect, b: &BlockEffect) -> bool {
        a.dist(b) <= self.tol.law
    }
    fn scale(&self, s: &Rational01, a: &BlockEffect) -> Result<BlockEffect> {
        let s = s.to_f64();
        Ok(a.map(|b| b.scale_re(s)))
    }
}

/// The quantum effectus, parametrised by its numerical tolerances.
#[derive(Debug, Clone, Copy, Default)]
pub struct Quantum {
    pub tol: Tolerances,
}

/// Per-block compression data: the new block index and the isometry onto the
/// kept subspace.
type Compression = Vec<Option<(usize, CMatrix)>>;

impl Quantum {
    pub fn new(tol: Tolerances) -> Self {
        Quantum { tol }
    }

    fn compress(&self, projections: &BlockEffect) -> Result<(VnAlg, Compression)> {
        let mut dims = Vec::new();
        let mut out = Vec::new();
        for p in &projections.blocks {
            let v = range_isometry(p, &self.tol)?;
            if v.cols() == 0 {
                out.push(None);
            } else {
                out.push(Some((dims.len(), v.clone())));
                dims.push(v.cols());
            }
        }
        Ok((VnAlg { block_dims: dims }, out))
    }

    fn comprehension_data(&self, p: &BlockEffect) -> Result<(VnAlg, Compression)> {
        self.compress(&p.floor(&self.tol)?)
    }

    fn quotient_data(&self, p: &BlockEffect) -> Result<(VnAlg, Compression)> {
        self.compress(&p.ortho().ceil(&self.tol)?)
    }

    fn try_comprehension(&self, p: &BlockEffect) -> Result<(VnAlg, KrausMap)> {
        let (alg, data) = self.comprehension_data(p)?;
        let kraus = data
            .iter()
            .enumerate()
            .filter_map(|(i, d)| {
                d.as_ref().map(|(k, v)| KrausOp {
                    src: *k,
                    dst: i,
                    k: v.clone(),
                })
            })
            .collect();
        let pi = KrausMap {
            dom: alg.clone(),
            cod: p.alg(),
            kraus,
        };
        Ok((alg, pi))
    }

    fn try_quotient(&self, p: &BlockEffect) -> Result<(VnAlg, KrausMap)> {
        let (alg, data) = self.quotient_data(p)?;
        let root = p.ortho().sqrt(&self.tol)?;
        let mut kraus = Vec::new();
        for (i, d) in data.iter().enumerate() {
            if let Some((k, v)) = d {
                kraus.push(KrausOp {
                    src: i,
                    dst: *k,
                    k: &v.adjoint() * &root.blocks[i],
                });
            }
        }
        let xi = KrausMap {
            dom: p.alg(),
            cod: alg.clone(),
            kraus,
        };
        Ok((alg, xi))
    }

    /// The vector state `ω_v: I → X` in block `block`.
    pub fn vector_state(&self, alg: &VnAlg, block: usize, v: &[C64]) -> Result<KrausMap> {
        if block >= alg.blocks() || v.len() != alg.dim(block) {
            return Err(Error::ShapeMismatch("vector does not fit the block".into()));
        }
        Ok(KrausMap {
            dom: VnAlg::scalars(),
            cod: alg.clone(),
            kraus: vec![KrausOp {
                src: 0,
                dst: block,
                k: CMatrix::column(v),
            }],
        })
    }

    /// A (sub)state given by densities, as a map `I → X`.
    pub fn state_map(&self, rho: &BlockState) -> Result<KrausMap> {
        let mut kraus = Vec::new();
        for (j, r) in rho.blocks.iter().enumerate() {
            let eig = herm_eig(r, &self.tol)?;
            for (idx, &lam) in eig.values.iter().enumerate() {
                if lam <= 0.0 {
                    continue;
                }
                let s = lam.sqrt();
                let col: Vec<C64> = eig.vectors.col(idx).iter().map(|z| z * s).collect();
                kraus.push(KrausOp {
                    src: 0,
                    dst: j,
                    k: CMatrix::column(&col),
                });
            }
        }
        Ok(KrausMap {
            dom: VnAlg::scalars(),
            cod: VnAlg {
                block_dims: rho.blocks.iter().map(CMatrix::rows).collect(),
            },
            kraus,
        })
    }

    /// The densities of a map `I → X`.
    pub fn state_of(&self, w: &KrausMap) -> Result<BlockState> {
        if w.dom != VnAlg::scalars() {
            return Err(Error::ShapeMismatch("a state is a map out of I".into()));
        }
        w.schrodinger(&BlockState {
            blocks: vec![CMatrix::identity(1)],
        })
    }

    /// `asrt_p` with Kraus operators `uᵢ·√pᵢ`: the action `x ↦ √p u† x u √p`.
    pub fn perturbed_assert(&self, p: &BlockEffect, u: &[CMatrix]) -> Result<KrausMap> {
        if u.len() != p.blocks.len() {
            return Err(Error::ShapeMismatch("one unitary per block".into()));
        }
        for (ui, pi) in u.iter().zip(&p.blocks) {
            if ui.rows() != pi.rows() {
                return Err(Error::ShapeMismatch("unitary and block dimension differ".into()));
            }
            let dev = unitary_deviation(ui);
            if dev > self.tol.proj {
                return Err(Error::NotUnitary(dev));
            }
        }
        let root = p.sqrt(&self.tol)?;
        let kraus = root
            .blocks
            .iter()
            .zip(u)
            .enumerate()
            .map(|(i, (r, ui))| KrausOp {
                src: i,
                dst: i,
                k: ui * r,
            })
            .collect();
        Ok(KrausMap {
            dom: p.alg(),
            cod: p.alg(),
            kraus,
        })
    }

    /// Conjugation by block unitaries; Heisenberg action `x ↦ u† x u`.
    pub fn unitary_map(&self, u: &[CMatrix]) -> Result<KrausMap> {
        for ui in u {
            let dev = unitary_deviation(ui);
            if dev > self.tol.proj {
                return Err(Error::NotUnitary(dev));
            }
        }
        let alg = VnAlg {
            block_dims: u.iter().map(CMatrix::rows).collect(),
        };
        let kraus = u
            .iter()
            .enumerate()
            .map(|(i, ui)| KrausOp { src: i, dst: i, k: ui.clone() })
            .collect();
        Ok(KrausMap { dom: alg.clone(), cod: alg, kraus })
    }

    /// The map `X → Y` whose Heisenberg action sends block `perm[i]` of `Y`
    /// to block `i` of `X`.
    pub fn block_permutation(&self, cod: &VnAlg, perm: &[usize]) -> Result<KrausMap> {
        let mut seen = vec![false; cod.blocks()];
        for &j in perm {
            if j >= cod.blocks() || seen[j] {
                return Err(Error::PreconditionFailed("not a permutation".into()));
            }
            seen[j] = true;
        }
        if perm.len() != cod.blocks() {
            return Err(Error::PreconditionFailed("not a permutation".into()));
        }
        let dom = VnAlg {
            block_dims: perm.iter().map(|&j| cod.dim(j)).collect(),
        };
        let kraus = perm
            .iter()
            .enumerate()
            .map(|(i, &j)| KrausOp {
                src: i,
                dst: j,
                k: CMatrix::identity(cod.dim(j)),
            })
            .collect();
        Ok(KrausMap { dom, cod: cod.clone(), kraus })
    }

    /// Amplification `M_{nk} → M_n` in the effectus, with Heisenberg action
    /// `x ↦ x ⊗ I_k`.
    pub fn amplification(&self, n: usize, k: usize) -> KrausMap {
        let kraus = (0..k)
            .map(|l| {
                let row = CMatrix::from_fn(1, k, |_, j| if j == l { c(1.0, 0.0) } else { c(0.0, 0.0) });
                KrausOp {
                    src: 0,
                    dst: 0,
                    k: CMatrix::identity(n).kron(&row),
                }
            })
            .collect();
        KrausMap {
            dom: VnAlg::matrix(n * k),
            cod: VnAlg::matrix(n),
            kraus,
        }
    }

    /// `f ⊗ g`, blocks and Kraus operators paired with the left factor major.
    pub fn tensor_map(&self, f: &KrausMap, g: &KrausMap) -> KrausMap {
        let (gd, gc) = (g.dom.blocks(), g.cod.blocks());
        let mut kraus = Vec::with_capacity(f.kraus.len() * g.kraus.len());
        for a in &f.kraus {
            for b in &g.kraus {
                kraus.push(KrausOp {
                    src: a.src * gd + b.src,
                    dst: a.dst * gc + b.dst,
                    k: a.k.kron(&b.k),
                });
            }
        }
        KrausMap {
            dom: f.dom.tensor(&g.dom),
            cod: f.cod.tensor(&g.cod),
            kraus,
        }
    }

    /// Largest deviation between the Heisenberg actions of `f` and `g` on the
    /// matrix units of the codomain.
    pub fn map_distance(&self, f: &KrausMap, g: &KrausMap) -> f64 {
        if f.dom != g.dom || f.cod != g.cod {
            return f64::INFINITY;
        }
        let mut worst: f64 = 0.0;
        for (j, &m) in f.cod.block_dims.iter().enumerate() {
            for a in 0..m {
                for b in 0..m {
                    let y: Vec<CMatrix> = f
                        .cod
                        .block_dims
                        .iter()
                        .enumerate()
                        .map(|(jj, &mm)| if jj == j { CMatrix::unit(mm, a, b) } else { CMatrix::zeros(mm, mm) })
                        .collect();
                    let (fy, gy) = (f.heisenberg_raw(&y), g.heisenberg_raw(&y));
                    for (x, z) in fy.iter().zip(&gy) {
                        worst = worst.max(x.dist(z));
                    }
                }
            }
        }
        worst
    }

    /// Whether `f` preserves sharp elements on the given sample of
    /// projections: `□f(q)` is a projection whenever `q` is.
    pub fn preserves_sharp_on(&self, f: &KrausMap, samples: &[BlockEffect]) -> Result<bool> {
        for q in samples {
            let b = crate::effectus::box_subst(self, f, q)?;
            if b.blocks.iter().any(|m| projection_deviation(m) > self.tol.proj) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl Effectus for Quantum {
    type Obj = VnAlg;
    type Map = KrausMap;
    type Pred = BlockEffect;
    type Scalar = f64;
    type Preds = Effects;

    fn name(&self) -> &'static str {
        "quantum"
    }
    fn is_commutative(&self) -> bool {
        false
    }
    fn is_boolean(&self) -> bool {
        false
    }

    fn unit_obj(&self) -> VnAlg {
        VnAlg::scalars()
    }
    fn empty_obj(&self) -> VnAlg {
        VnAlg { block_dims: vec![] }
    }
    fn coproduct(&self, x: &VnAlg, y: &VnAlg) -> VnAlg {
        let mut dims = x.block_dims.clone();
        dims.extend_from_slice(&y.block_dims);
        VnAlg { block_dims: dims }
    }
    fn dom(&self, f: &KrausMap) -> VnAlg {
        f.dom.clone()
    }
    fn cod(&self, f: &KrausMap) -> VnAlg {
        f.cod.clone()
    }

    fn identity(&self, x: &VnAlg) -> KrausMap {
        let kraus = x
            .block_dims
            .iter()
            .enumerate()
            .map(|(i, &n)| KrausOp {
                src: i,
                dst: i,
                k: CMatrix::identity(n),
            })
            .collect();
        KrausMap {
            dom: x.clone(),
            cod: x.clone(),
            kraus,
        }
    }
    fn compose(&self, g: &KrausMap, f: &KrausMap) -> Result<KrausMap> {
        if f.cod != g.dom {
            return Err(Error::ShapeMismatch(format!(
                "cannot compose {:?}→{:?} after {:?}→{:?}",
                g.dom.block_dims, g.cod.block_dims, f.dom.block_dims, f.cod.block_dims
            )));
        }
        let mut kraus = Vec::new();
        for a in &f.kraus {
            for b in g.kraus.iter().filter(|b| b.src == a.dst) {
                kraus.push(KrausOp {
                    src: a.src,
                    dst: b.dst,
                    k: &b.k * &a.k,
                });
            }
        }
        let h = KrausMap {
            dom: f.dom.clone(),
            cod: g.cod.clone(),
            kraus,
        };
        let cap = f
            .dom
            .block_dims
            .iter()
            .flat_map(|n| g.cod.block_dims.iter().map(move |m| n * m))
            .max()
            .unwrap_or(0);
        if h.max_group() > cap {
            h.simplify(&self.tol)
        } else {
            Ok(h)
        }
    }
    fn zero_map(&self, x: &VnAlg, y: &VnAlg) -> KrausMap {
        KrausMap {
            dom: x.clone(),
            cod: y.clone(),
            kraus: vec![],
        }
    }
    fn inj(&self, x: &VnAlg, y: &VnAlg, side: Side) -> KrausMap {
        let cod = self.coproduct(x, y);
        let (src, offset) = match side {
            Side::Left => (x, 0),
            Side::Right => (y, x.blocks()),
        };
        let kraus = src
            .block_dims
            .iter()
            .enumerate()
            .map(|(i, &n)| KrausOp {
                src: i,
                dst: i + offset,
                k: CMatrix::identity(n),
            })
            .collect();
        KrausMap {
            dom: src.clone(),
            cod,
            kraus,
        }
    }
    fn cotuple(&self, f: &KrausMap, g: &KrausMap) -> Result<KrausMap> {
        if f.cod != g.cod {
            return Err(Error::ShapeMismatch("cotuple of maps with different codomains".into()));
        }
        let off = f.dom.blocks();
        let mut kraus = f.kraus.clone();
        kraus.extend(g.kraus.iter().map(|op| KrausOp {
            src: op.src + off,
            dst: op.dst,
            k: op.k.clone(),
        }));
        Ok(KrausMap {
            dom: self.coproduct(&f.dom, &g.dom),
            cod: f.cod.clone(),
            kraus,
        })
    }
    fn ovee_map(&self, f: &KrausMap, g: &KrausMap) -> Option<KrausMap> {
        if f.dom != g.dom || f.cod != g.cod {
            return None;
        }
        let preds = self.preds(&f.dom);
        preds.ovee(&crate::effectus::ker_supp(self, f), &crate::effectus::ker_supp(self, g))?;
        let mut kraus = f.kraus.clone();
        kraus.extend(g.kraus.iter().cloned());
        Some(KrausMap {
            dom: f.dom.clone(),
            cod: f.cod.clone(),
            kraus,
        })
    }
    fn maps_eq(&self, f: &KrausMap, g: &KrausMap) -> bool {
        self.map_distance(f, g) <= self.tol.law
    }
    fn scale_map(&self, s: &f64, f: &KrausMap) -> KrausMap {
        let r = s.max(0.0).sqrt();
        KrausMap {
            dom: f.dom.clone(),
            cod: f.cod.clone(),
            kraus: f
                .kraus
                .iter()
                .map(|op| KrausOp {
                    src: op.src,
                    dst: op.dst,
                    k: op.k.scale_re(r),
                })
                .collect(),
        }
    }

    fn preds(&self, x: &VnAlg) -> Effects {
        Effects {
            alg: x.clone(),
            tol: self.tol,
        }
    }
    fn pred_obj(&self, p: &BlockEffect) -> VnAlg {
        p.alg()
    }
    fn pred_as_map(&self, p: &BlockEffect) -> KrausMap {
        let mut kraus = Vec::new();
        for (i, b) in p.blocks.iter().enumerate() {
            let eig = herm_eig(&b.hermitian_part(), &self.tol).expect("effects are Hermitian");
            for (idx, &lam) in eig.values.iter().enumerate() {
                if lam <= 0.0 {
                    continue;
                }
                let s = lam.sqrt();
                let n = b.rows();
                let row = CMatrix::from_fn(1, n, |_, j| eig.vectors[(j, idx)].conj() * s);
                kraus.push(KrausOp { src: i, dst: 0, k: row });
            }
        }
        KrausMap {
            dom: p.alg(),
            cod: VnAlg::scalars(),
            kraus,
        }
    }
    fn map_as_pred(&self, f: &KrausMap) -> Result<BlockEffect> {
        if f.cod != VnAlg::scalars() {
            return Err(Error::ShapeMismatch(format!(
                "predicate map into {:?}",
                f.cod.block_dims
            )));
        }
        Ok(BlockEffect {
            blocks: f
                .heisenberg_raw(&[CMatrix::identity(1)])
                .iter()
                .map(CMatrix::hermitian_part)
                .collect(),
        })
    }
    fn scalar_of(&self, s: &KrausMap) -> Result<f64> {
        if s.dom != VnAlg::scalars() || s.cod != VnAlg::scalars() {
            return Err(Error::ShapeMismatch("scalar must be a map I → I".into()));
        }
        Ok(s.kraus.iter().map(|op| op.k[(0, 0)].norm_sqr()).sum())
    }
    fn scalars_eq(&self, a: &f64, b: &f64) -> bool {
        (a - b).abs() <= self.tol.tight
    }

    fn normalize(&self, w: &KrausMap) -> Option<(KrausMap, f64)> {
        if w.dom != VnAlg::scalars() {
            return None;
        }
        let s: f64 = w.kraus.iter().map(|op| op.k.frobenius().powi(2)).sum();
        if s <= self.tol.tight {
            return None;
        }
        Some((self.scale_map(&(1.0 / s), w), s))
    }
    fn assert_map(&self, p: &BlockEffect) -> KrausMap {
        let root = p.sqrt(&self.tol).expect("predicates are effects");
        let kraus = root
            .blocks
            .into_iter()
            .enumerate()
            .map(|(i, k)| KrausOp { src: i, dst: i, k })
            .collect();
        KrausMap {
            dom: p.alg(),
            cod: p.alg(),
            kraus,
        }
    }
    fn image(&self, f: &KrausMap) -> BlockEffect {
        let mut acc: Vec<CMatrix> = f.cod.block_dims.iter().map(|&m| CMatrix::zeros(m, m)).collect();
        for op in &f.kraus {
            acc[op.dst] = &acc[op.dst] + &(&op.k * &op.k.adjoint());
        }
        BlockEffect {
            blocks: acc
                .iter()
                .map(|m| support_proj(&m.hermitian_part(), &self.tol).expect("Hermitian by construction"))
                .collect(),
        }
    }
    fn comprehension(&self, p: &BlockEffect) -> (VnAlg, KrausMap) {
        self.try_comprehension(p).expect("floors are projections")
    }
    fn quotient(&self, p: &BlockEffect) -> (VnAlg, KrausMap) {
        self.try_quotient(p).expect("supports are projections")
    }
    fn factor_through_quotient(&self, f: &KrausMap, p: &BlockEffect) -> Result<KrausMap> {
        if f.dom != p.alg() {
            return Err(Error::ShapeMismatch("predicate and map domain differ".into()));
        }
        let preds = self.preds(&f.dom);
        if !preds.leq(p, &crate::effectus::ker(self, f)) {
            return Err(Error::PreconditionFailed("p is not below ker f".into()));
        }
        let (alg, data) = self.quotient_data(p)?;
        let root = p.ortho().sqrt(&self.tol)?;
        let mut kraus = Vec::new();
        for op in &f.kraus {
            let Some((k, v)) = &data[op.src] else {
                continue;
            };
            let s = &(&v.adjoint() * &root.blocks[op.src]) * v;
            let sinv = psd_pinv(&s.hermitian_part(), 0.0, &self.tol)?;
            kraus.push(KrausOp {
                src: *k,
                dst: op.dst,
                k: &(&op.k * v) * &sinv,
            });
        }
        Ok(KrausMap {
            dom: alg,
            cod: f.cod.clone(),
            kraus,
        })
    }
    fn factor_through_comprehension(&self, f: &KrausMap, p: &BlockEffect) -> Result<KrausMap> {
        if f.cod != p.alg() {
            return Err(Error::ShapeMismatch("predicate and map codomain differ".into()));
        }
        let boxed = crate::effectus::box_subst(self, f, p)?;
        if boxed.dist(&BlockEffect::identity(&f.dom)) > self.tol.spec.max(self.tol.law) {
            return Err(Error::PreconditionFailed("□f(p) is not 1".into()));
        }
        let (alg, data) = self.comprehension_data(p)?;
        let mut kraus = Vec::new();
        for op in &f.kraus {
            let Some((k, v)) = &data[op.dst] else {
                continue;
            };
            kraus.push(KrausOp {
                src: op.src,
                dst: *k,
                k: &v.adjoint() * &op.k,
            });
        }
        Ok(KrausMap {
            dom: f.dom.clone(),
            cod: alg,
            kraus,
        })
    }
    fn is_sharp(&self, p: &BlockEffect) -> bool {
        p.idempotence_gap() <= self.tol.proj
    }
    fn is_pure_substate(&self, w: &KrausMap) -> bool {
        let Ok(rho) = self.state_of(w) else {
            return false;
        };
        let mut rank = 0;
        for b in &rho.blocks {
            match psd_rank(&b.hermitian_part(), self.tol.spec, &self.tol) {
                Ok(r) => rank += r,
                Err(_) => return false,
            }
        }
        rank == 1
    }
    fn inverse(&self, f: &KrausMap) -> Option<KrausMap> {
        let s = f.simplify(&self.tol).ok()?;
        if s.dom.blocks() != s.cod.blocks() || s.kraus.len() != s.dom.blocks() {
            return None;
        }
        let mut src_seen = vec![false; s.dom.blocks()];
        let mut dst_seen = vec![false; s.cod.blocks()];
        let mut kraus = Vec::new();
        for op in &s.kraus {
            if src_seen[op.src] || dst_seen[op.dst] || unitary_deviation(&op.k) > self.tol.law {
                return None;
            }
            src_seen[op.src] = true;
            dst_seen[op.dst] = true;
            kraus.push(KrausOp {
                src: op.dst,
                dst: op.src,
                k: op.k.adjoint(),
            });
        }
        Some(KrausMap {
            dom: f.cod.clone(),
            cod: f.dom.clone(),
            kraus,
        })
    }
}

/// Outcome of one duality check `im(asrt_p ∘ π) = ⌈p & im(π)⌉`.
#[derive(Debug, Clone, Serialize)]
pub struct DualityOutcome {
    pub holds: bool,
    pub gap: f64,
    pub lhs: BlockEffect,
    pub rhs: BlockEffect,
}

/// Compares `im(asrt_p ∘ ω_v)` with `⌈p & im(ω_v)⌉` for the given family of
/// asserts. The `&` is computed with the same family.
pub fn duality_check(
    q: &Quantum,
    asrt: &dyn Fn(&BlockEffect) -> Result<KrausMap>,
    p: &BlockEffect,
    block: usize,
    v: &[C64],
) -> Result<DualityOutcome> {
    let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > q.tol.spec.max(1e-9) {
        return Err(Error::PreconditionFailed(format!("vector of norm {norm}")));
    }
    let alg = p.alg();
    let pi = q.vector_state(&alg, block, v)?;
    let a = asrt(p)?;
    let lhs = q.image(&q.compose(&a, &pi)?);
    let im_pi = q.image(&pi);
    let and_then = a.heisenberg(&im_pi)?;
    let rhs = and_then.try_map(|b| support_proj(&b.hermitian_part(), &q.tol))?;
    let gap = lhs.dist(&rhs);
    Ok(DualityOutcome {
        holds: gap <= q.tol.proj,
        gap,
        lhs,
        rhs,
    })
}

/// The two non-commutativity phenomena of sequential measurement for
/// projections `P`, `Q` and a unit vector `x`.
#[derive(Debug, Clone, Serialize)]
pub struct SequentialAnomaly {
    /// `P & Q = P Q P`.
    pub and_then: CMatrix,
    /// `‖(P&Q)² − P&Q‖_max`.
    pub square_gap: f64,
    /// `‖Q P x‖²` and `‖P Q x‖²`.
    pub qp: f64,
    pub pq: f64,
}

impl SequentialAnomaly {
    pub fn order_gap(&self) -> f64 {
        (self.qp - self.pq).abs()
    }
}

pub fn sequential_anomaly(p: &CMatrix, q: &CMatrix, x: &[C64], tol: &Tolerances) -> Result<SequentialAnomaly> {
    for m in [p, q] {
        let dev = projection_deviation(m);
        if dev > tol.proj {
            return Err(Error::NotProjection(dev));
        }
    }
    let pq = &(p * q) * p;
    let square_gap = (&(&pq * &pq) - &pq).max_norm();
    let col = CMatrix::column(x);
    let norm2 = |m: CMatrix| m.entries().iter().map(|z| z.norm_sqr()).sum::<f64>();
    Ok(SequentialAnomaly {
        square_gap,
        qp: norm2(&(q * p) * &col),
        pq: norm2(&(p * q) * &col),
        and_then: pq,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::effectus::*;

    const S: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn q() -> Quantum {
        Quantum::default()
    }

    fn eff(m: CMatrix) -> BlockEffect {
        BlockEffect::single(m, &Tolerances::default()).unwrap()
    }

    fn plus() -> Vec<C64> {
        vec![c(S, 0.0), c(S, 0.0)]
    }

    fn ket0() -> Vec<C64> {
        vec![c(1.0, 0.0), c(0.0, 0.0)]
    }

    fn hadamard() -> CMatrix {
        CMatrix::real(2, 2, &[S, S, S, -S])
    }

    #[test]
    fn assert_action_on_pauli_x() {
        let e = q();
        let a = e.assert_map(&eff(CMatrix::diag(&[0.25, 1.0])));
        let y = BlockEffect {
            blocks: vec![CMatrix::real(2, 2, &[0.0, 1.0, 1.0, 0.0])],
        };
        let out = a.heisenberg(&y).unwrap();
        assert!(out.blocks[0].approx_eq(&CMatrix::real(2, 2, &[0.0, 0.5, 0.5, 0.0]), 1e-12));
        let p = eff(CMatrix::diag(&[0.25, 1.0]));
        assert!(ker_supp(&e, &a).dist(&p) < 1e-12);
    }

    #[test]
    fn qubit_measurement_facts() {
        let e = q();
        let alg = VnAlg::matrix(2);
        let w = e.vector_state(&alg, 0, &plus()).unwrap();
        let p = eff(CMatrix::diag(&[1.0, 0.0]));
        assert!((validity(&e, &w, &p).unwrap() - 0.5).abs() < 1e-12);
        let instr = instrument(&e, &p).unwrap();
        let post = e.compose(&codiagonal(&e, &alg), &instr).unwrap();
        let rho = e.state_of(&e.compose(&post, &w).unwrap()).unwrap();
        assert!(rho.blocks[0].approx_eq(&CMatrix::diag(&[0.5, 0.5]), 1e-12));
        let cond = condition(&e, &w, &p).unwrap().unwrap();
        let rho = e.state_of(&cond).unwrap();
        assert!(rho.blocks[0].approx_eq(&CMatrix::diag(&[1.0, 0.0]), 1e-12));
    }

    #[test]
    fn belief_propagation_needs_commuting_data() {
        let e = q();
        let alg = VnAlg::matrix(2);
        let w = e.vector_state(&alg, 0, &plus()).unwrap();
        let test = [eff(CMatrix::diag(&[1.0, 0.0])), eff(CMatrix::diag(&[0.0, 1.0]))];
        let qq = eff(CMatrix::ket_bra(&plus()));
        assert!(!total_probability(&e, &w, &test, &qq).unwrap());
        let diag = eff(CMatrix::diag(&[0.3, 0.8]));
        assert!(total_probability(&e, &w, &test, &diag).unwrap());
    }

    #[test]
    fn and_then_is_not_sharp() {
        let p = CMatrix::diag(&[1.0, 0.0]);
        let qq = CMatrix::ket_bra(&plus());
        let an = sequential_anomaly(&p, &qq, &plus(), &Tolerances::default()).unwrap();
        assert!(an.and_then.approx_eq(&CMatrix::diag(&[0.5, 0.0]), 1e-12));
        assert!(an.square_gap >= 0.1);
        let generic = [c(0.8, 0.0), c(0.6, 0.0)];
        let an = sequential_anomaly(&p, &qq, &generic, &Tolerances::default()).unwrap();
        assert!(an.order_gap() > 0.1);
        let e = q();
        let via_api = and_then(&e, &eff(p), &eff(qq)).unwrap();
        assert!(via_api.blocks[0].approx_eq(&CMatrix::diag(&[0.5, 0.0]), 1e-12));
    }

    #[test]
    fn schrodinger_and_heisenberg_are_adjoint() {
        let e = q();
        let a = e.assert_map(&eff(CMatrix::diag(&[1.0, 0.0])));
        let rho = BlockState::vector(&VnAlg::matrix(2), 0, &plus());
        let out = a.schrodinger(&rho).unwrap();
        assert!(out.blocks[0].approx_eq(&CMatrix::diag(&[0.5, 0.0]), 1e-12));
        let y = eff(CMatrix::real(2, 2, &[0.3, 0.1, 0.1, 0.6]));
        let lhs = out.expect(&y);
        let rhs = rho.expect(&a.heisenberg(&y).unwrap());
        assert!((lhs - rhs).abs() < 1e-12);
    }

    #[test]
    fn vector_state_expectation() {
        let e = q();
        let w = e.vector_state(&VnAlg::matrix(2), 0, &ket0()).unwrap();
        let y = eff(CMatrix::real(2, 2, &[0.3, 0.2, 0.2, 0.5]));
        let s = w.heisenberg(&y).unwrap();
        assert!((s.blocks[0][(0, 0)].re - 0.3).abs() < 1e-12);
        assert!(e.image(&w).dist(&eff(CMatrix::diag(&[1.0, 0.0]))) < 1e-9);
        assert!(e.is_pure_substate(&w));
    }

    #[test]
    fn normalize_substate() {
        let e = q();
        let rho = BlockState::new(vec![CMatrix::diag(&[0.5, 0.0])], &e.tol).unwrap();
        let w = e.state_map(&rho).unwrap();
        let (n, s) = e.normalize(&w).unwrap();
        assert!((s - 0.5).abs() < 1e-12);
        assert!(e.state_of(&n).unwrap().blocks[0].approx_eq(&CMatrix::diag(&[1.0, 0.0]), 1e-12));
        assert!(e.normalize(&e.zero_map(&VnAlg::scalars(), &VnAlg::matrix(2))).is_none());
    }

    #[test]
    fn comprehension_of_rank_one() {
        let e = q();
        let p = eff(CMatrix::diag(&[1.0, 0.0]));
        let (alg, pi) = e.comprehension(&p);
        assert_eq!(alg, VnAlg::scalars());
        let x = BlockEffect {
            blocks: vec![CMatrix::real(2, 2, &[0.7, 0.1, 0.1, 0.2])],
        };
        assert!((pi.heisenberg(&x).unwrap().blocks[0][(0, 0)].re - 0.7).abs() < 1e-12);
        assert!(is_total(&e, &pi));
        let (alg1, pi1) = e.comprehension(&BlockEffect::identity(&VnAlg::matrix(2)));
        assert_eq!(alg1, VnAlg::matrix(2));
        assert!(is_iso(&e, &pi1));
    }

    #[test]
    fn quotient_kernel_and_extremes() {
        let e = q();
        let p = eff(CMatrix::diag(&[0.3, 1.0]));
        let (alg, xi) = e.quotient(&p);
        assert_eq!(alg, VnAlg::scalars());
        assert!(ker(&e, &xi).dist(&p) < 1e-9);
        let (a0, xi0) = e.quotient(&BlockEffect::zero(&VnAlg::matrix(2)));
        assert_eq!(a0, VnAlg::matrix(2));
        assert!(is_iso(&e, &xi0));
        let (a1, _) = e.quotient(&BlockEffect::identity(&VnAlg::matrix(2)));
        assert_eq!(a1.blocks(), 0);
    }

    #[test]
    fn floor_and_ceiling() {
        let e = q();
        let (f, cl) = floor_ceil(&e, &eff(CMatrix::diag(&[0.3, 1.0])));
        assert!(f.blocks[0].approx_eq(&CMatrix::diag(&[0.0, 1.0]), 1e-9));
        assert!(cl.blocks[0].approx_eq(&CMatrix::identity(2), 1e-9));
    }

    #[test]
    fn sharpness() {
        let e = q();
        assert!(e.is_sharp(&eff(CMatrix::ket_bra(&plus()))));
        assert!(!e.is_sharp(&eff(CMatrix::diag(&[0.5, 1.0]))));
        let p = eff(CMatrix::diag(&[0.5, 1.0]));
        let pp = and_then(&e, &p, &p).unwrap();
        assert!(pp.blocks[0].approx_eq(&CMatrix::diag(&[0.25, 1.0]), 1e-12));
    }

    #[test]
    fn quotient_factorisation_is_unital_when_exact() {
        let e = q();
        let p = eff(CMatrix::diag(&[0.25, 0.0]));
        let (_, xi) = e.quotient(&p);
        let fbar = e.factor_through_quotient(&xi, &p).unwrap();
        assert!(e.maps_eq(&fbar, &e.identity(&fbar.dom)));
        let f = e.compose(&e.unitary_map(&[hadamard()]).unwrap(), &xi).unwrap();
        let g = e.factor_through_quotient(&f, &p).unwrap();
        assert!(is_total(&e, &g));
        assert!(e.maps_eq(&e.compose(&g, &xi).unwrap(), &f));
        assert!(e.factor_through_quotient(&e.identity(&VnAlg::matrix(2)), &p).is_err());
    }

    #[test]
    fn comprehension_factorisation() {
        let e = q();
        let p = eff(CMatrix::diag(&[1.0, 0.5]));
        let w = e.vector_state(&VnAlg::matrix(2), 0, &ket0()).unwrap();
        let g = e.factor_through_comprehension(&w, &p).unwrap();
        let (_, pi) = e.comprehension(&p);
        assert!(e.maps_eq(&e.compose(&pi, &g).unwrap(), &w));
        let bad = e.vector_state(&VnAlg::matrix(2), 0, &plus()).unwrap();
        assert!(e.factor_through_comprehension(&bad, &p).is_err());
    }

    #[test]
    fn simplify_keeps_action() {
        let e = q();
        let u = hadamard();
        let split = KrausMap {
            dom: VnAlg::matrix(2),
            cod: VnAlg::matrix(2),
            kraus: vec![
                KrausOp { src: 0, dst: 0, k: u.scale_re(0.6) },
                KrausOp { src: 0, dst: 0, k: u.scale_re(0.8) },
            ],
        };
        let s = split.simplify(&e.tol).unwrap();
        assert_eq!(s.kraus.len(), 1);
        assert!(e.map_distance(&s, &split) < 1e-12);
        assert!(is_iso(&e, &split));
    }

    #[test]
    fn theta_is_iso_for_projections() {
        let e = q();
        let p = BlockEffect {
            blocks: vec![CMatrix::ket_bra(&plus()), CMatrix::identity(1)],
        };
        let t = theta(&e, &p).unwrap();
        assert!(is_total(&e, &t));
        assert!(is_iso(&e, &t));
        let fuzzy = eff(CMatrix::diag(&[0.5, 1.0]));
        assert!(!is_iso(&e, &theta(&e, &fuzzy).unwrap()));
    }

    #[test]
    fn duality_canonical_and_perturbed() {
        let e = q();
        let p = eff(CMatrix::diag(&[1.0, 0.25]));
        let canonical = |p: &BlockEffect| Ok(e.assert_map(p));
        assert!(duality_check(&e, &canonical, &p, 0, &ket0()).unwrap().holds);
        let u = vec![hadamard()];
        let perturbed = |p: &BlockEffect| e.perturbed_assert(p, &u);
        let out = duality_check(&e, &perturbed, &p, 0, &ket0()).unwrap();
        assert!(!out.holds);
        assert!(ker_supp(&e, &perturbed(&p).unwrap()).dist(&p) < 1e-12);
        let proj = eff(CMatrix::diag(&[1.0, 0.0]));
        let zero = duality_check(&e, &canonical, &proj, 0, &[c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!(zero.holds);
        assert!(zero.lhs.blocks[0].is_zero(1e-12));
        assert!(matches!(
            e.perturbed_assert(&p, &[CMatrix::diag(&[1.0, 2.0])]),
            Err(Error::NotUnitary(_))
        ));
    }

    #[test]
    fn homomorphisms_commute_with_asserts() {
        let e = q();
        let amp = e.amplification(2, 2);
        let one = amp.heisenberg(&BlockEffect::identity(&VnAlg::matrix(2))).unwrap();
        assert!(one.blocks[0].approx_eq(&CMatrix::identity(4), 1e-12));
        let p = eff(CMatrix::real(2, 2, &[0.6, 0.2, 0.2, 0.3]));
        let lhs = e.compose(&e.assert_map(&p), &amp).unwrap();
        let rhs = e.compose(&amp, &e.assert_map(&box_subst(&e, &amp, &p).unwrap())).unwrap();
        assert!(e.maps_eq(&lhs, &rhs));
        let perm = e.block_permutation(&VnAlg::new(vec![2, 1]).unwrap(), &[1, 0]).unwrap();
        assert_eq!(perm.dom.block_dims, vec![1, 2]);
        assert!(is_iso(&e, &perm));
    }

    #[test]
    fn tensor_of_asserts() {
        let e = q();
        let p = eff(CMatrix::diag(&[0.5, 1.0]));
        let r = eff(CMatrix::real(2, 2, &[0.6, 0.2, 0.2, 0.3]));
        let lhs = e.assert_map(&p.tensor(&r));
        let rhs = e.tensor_map(&e.assert_map(&p), &e.assert_map(&r));
        assert!(e.maps_eq(&lhs, &rhs));
    }

    #[test]
    fn kraus_shape_checked() {
        let t = Tolerances::default();
        let bad = KrausMap::new(
            VnAlg::matrix(2),
            VnAlg::matrix(2),
            vec![KrausOp { src: 0, dst: 0, k: CMatrix::identity(3) }],
            &t,
        );
        assert!(matches!(bad, Err(Error::ShapeMismatch(_))));
        let big = KrausMap::new(
            VnAlg::matrix(1),
            VnAlg::matrix(1),
            vec![KrausOp { src: 0, dst: 0, k: CMatrix::diag(&[2.0]) }],
            &t,
        );
        assert!(matches!(big, Err(Error::NotEffect(_))));
    }
}
