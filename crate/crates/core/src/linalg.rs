//! Small dense complex linear algebra: Hermitian eigendecomposition by cyclic
//! Jacobi rotations, PSD square roots and spectral projections.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::tol::Tolerances;

pub type C64 = Complex64;

pub fn c(re: f64, im: f64) -> C64 {
    Complex64::new(re, im)
}

/// Row-major dense complex matrix.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(CMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix {
            rows,
            cols,
            data: vec![C64::default(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = c(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        CMatrix { rows, cols, data }
    }

    /// Real matrix from row-major entries.
    pub fn real(rows: usize, cols: usize, entries: &[f64]) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count");
        CMatrix {
            rows,
            cols,
            data: entries.iter().map(|&x| c(x, 0.0)).collect(),
        }
    }

    pub fn diag(values: &[f64]) -> Self {
        let n = values.len();
        Self::from_fn(n, n, |i, j| if i == j { c(values[i], 0.0) } else { C64::default() })
    }

    /// Column vector.
    pub fn column(v: &[C64]) -> Self {
        CMatrix {
            rows: v.len(),
            cols: 1,
            data: v.to_vec(),
        }
    }

    /// `|v⟩⟨v|`.
    pub fn ket_bra(v: &[C64]) -> Self {
        let n = v.len();
        Self::from_fn(n, n, |i, j| v[i] * v[j].conj())
    }

    /// Matrix unit `E_ab` of size `n`.
    pub fn unit(n: usize, a: usize, b: usize) -> Self {
        let mut m = Self::zeros(n, n);
        m[(a, b)] = c(1.0, 0.0);
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn col(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: C64) -> Self {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(c(s, 0.0))
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Largest entry modulus.
    pub fn max_norm(&self) -> f64 {
        self.data.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `max |M - M†|`, or infinity for non-square input.
    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut dev: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    /// Max-norm distance to another matrix of the same shape; infinity on
    /// shape mismatch.
    pub fn dist(&self, other: &CMatrix) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &CMatrix, tol: f64) -> bool {
        self.dist(other) <= tol
    }

    pub fn kron(&self, other: &CMatrix) -> Self {
        let (r2, c2) = (other.rows, other.cols);
        Self::from_fn(self.rows * r2, self.cols * c2, |i, j| {
            self[(i / r2, j / c2)] * other[(i % r2, j % c2)]
        })
    }

    /// Hermitian part `(M + M†)/2`.
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| {
            (self[(i, j)] + self[(j, i)].conj()) * 0.5
        })
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.max_norm() <= tol
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape");
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == C64::default() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix sum shape");
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix difference shape");
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    rows: usize,
    cols: usize,
    re: Vec<f64>,
    #[serde(default)]
    im: Vec<f64>,
}

impl Serialize for CMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixRepr {
            rows: self.rows,
            cols: self.cols,
            re: self.data.iter().map(|z| z.re).collect(),
            im: self.data.iter().map(|z| z.im).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = MatrixRepr::deserialize(d)?;
        let n = r.rows * r.cols;
        if r.rows == 0 || r.cols == 0 {
            return Err(serde::de::Error::custom("matrix dimensions must be positive"));
        }
        if r.re.len() != n || !(r.im.is_empty() || r.im.len() == n) {
            return Err(serde::de::Error::custom(format!(
                "expected {n} entries for a {}x{} matrix",
                r.rows, r.cols
            )));
        }
        let data = (0..n)
            .map(|k| c(r.re[k], r.im.get(k).copied().unwrap_or(0.0)))
            .collect();
        Ok(CMatrix {
            rows: r.rows,
            cols: r.cols,
            data,
        })
    }
}

/// Spectral decomposition `M = V · diag(values) · V†`, values descending.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl Eigen {
    /// Rebuilds `V · diag(f(λ)) · V†`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let n = self.values.len();
        let v = &self.vectors;
        let mut out = CMatrix::zeros(n, n);
        for (k, &lam) in self.values.iter().enumerate() {
            let w = f(lam);
            if w == 0.0 {
                continue;
            }
            for i in 0..n {
                let vik = v[(i, k)] * w;
                for j in 0..n {
                    out[(i, j)] += vik * v[(j, k)].conj();
                }
            }
        }
        out
    }

    /// Projection onto the eigenvectors selected by `keep`.
    pub fn projection(&self, keep: impl Fn(f64) -> bool) -> CMatrix {
        self.map(|l| if keep(l) { 1.0 } else { 0.0 })
    }
}

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
pub fn herm_eig(m: &CMatrix, tol: &Tolerances) -> Result<Eigen> {
    if !m.is_square() {
        return Err(Error::ShapeMismatch(format!(
            "eigendecomposition of a {}x{} matrix",
            m.rows, m.cols
        )));
    }
    let dev = m.hermitian_deviation();
    if dev > tol.herm {
        return Err(Error::NotHermitian(dev));
    }
    let n = m.rows;
    let mut a = m.hermitian_part();
    let mut v = CMatrix::identity(n);
    let scale = a.frobenius().max(1e-300);

    let mut converged = false;
    for _ in 0..tol.max_sweeps {
        let off: f64 = (0..n)
            .flat_map(|p| ((p + 1)..n).map(move |q| (p, q)))
            .map(|(p, q)| a[(p, q)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged {
        let off: f64 = (0..n)
            .flat_map(|p| ((p + 1)..n).map(move |q| (p, q)))
            .map(|(p, q)| a[(p, q)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off > 1e-15 * scale {
            return Err(Error::NoConvergence(tol.max_sweeps));
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = CMatrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    Ok(Eigen { values, vectors })
}

/// One Jacobi rotation annihilating `a[p][q]`. The unitary is a phase fix
/// on `q` followed by a real plane rotation.
fn rotate(a: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r < 1e-300 {
        return;
    }
    let phase = apq / r;
    let theta = (a[(q, q)].re - a[(p, p)].re) / (2.0 * r);
    let t = if theta == 0.0 {
        1.0
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let cs = 1.0 / (t * t + 1.0).sqrt();
    let sn = t * cs;
    let ph = phase.conj();
    let g_pp = c(cs, 0.0);
    let g_pq = c(sn, 0.0);
    let g_qp = ph * (-sn);
    let g_qq = ph * cs;

    let n = a.rows;
    for k in 0..n {
        let (akp, akq) = (a[(k, p)], a[(k, q)]);
        a[(k, p)] = akp * g_pp + akq * g_qp;
        a[(k, q)] = akp * g_pq + akq * g_qq;
    }
    for k in 0..n {
        let (apk, aqk) = (a[(p, k)], a[(q, k)]);
        a[(p, k)] = g_pp.conj() * apk + g_qp.conj() * aqk;
        a[(q, k)] = g_pq.conj() * apk + g_qq.conj() * aqk;
    }
    a[(p, q)] = C64::default();
    a[(q, p)] = C64::default();
    a[(p, p)] = c(a[(p, p)].re, 0.0);
    a[(q, q)] = c(a[(q, q)].re, 0.0);
    for k in 0..n {
        let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
        v[(k, p)] = vkp * g_pp + vkq * g_qp;
        v[(k, q)] = vkp * g_pq + vkq * g_qq;
    }
}

/// An effect `0 ≤ e ≤ 1` on `ℂ^dim`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HermEffect {
    dim: usize,
    matrix: CMatrix,
}

impl HermEffect {
    pub fn new(matrix: CMatrix, tol: &Tolerances) -> Result<Self> {
        let eig = herm_eig(&matrix, tol)?;
        let lo = eig.values.last().copied().unwrap_or(0.0);
        let hi = eig.values.first().copied().unwrap_or(0.0);
        if lo < -tol.spec || hi > 1.0 + tol.spec {
            return Err(Error::NotEffect(format!("spectrum [{lo:e}, {hi:e}] exceeds [0,1]")));
        }
        Ok(HermEffect {
            dim: matrix.rows(),
            matrix: matrix.hermitian_part(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }
}

fn eig_checked(e: &CMatrix, tol: &Tolerances) -> Result<Eigen> {
    let eig = herm_eig(e, tol)?;
    if let Some(&lo) = eig.values.last() {
        if lo < -tol.spec {
            return Err(Error::NotEffect(format!("negative eigenvalue {lo:e}")));
        }
    }
    Ok(eig)
}

/// Positive square root; eigenvalues within `spec` below zero are clamped,
/// and so are eigenvalues at rounding level, whose square roots would
/// otherwise be of order `1e-8`.
pub fn psd_sqrt(e: &CMatrix, tol: &Tolerances) -> Result<CMatrix> {
    let eig = eig_checked(e, tol)?;
    let scale = eig.values.iter().fold(1.0f64, |m, l| m.max(l.abs()));
    let floor = 64.0 * f64::EPSILON * scale * e.rows().max(1) as f64;
    Ok(eig.map(|l| if l <= floor { 0.0 } else { l.sqrt() }))
}

/// Support projection `⌈e⌉`: eigenvalues above `ceil_cutoff`.
pub fn support_proj(e: &CMatrix, tol: &Tolerances) -> Result<CMatrix> {
    let cut = tol.ceil_cutoff;
    Ok(herm_eig(e, tol)?.projection(|l| l > cut))
}

/// Fixed-space projection `⌊e⌋`: eigenvalues at least `1 - floor_cutoff`.
pub fn fixed_proj(e: &CMatrix, tol: &Tolerances) -> Result<CMatrix> {
    let cut = 1.0 - tol.floor_cutoff;
    Ok(herm_eig(e, tol)?.projection(|l| l >= cut))
}

/// `max |P² - P|` combined with the Hermitian deviation.
pub fn projection_deviation(p: &CMatrix) -> f64 {
    if !p.is_square() {
        return f64::INFINITY;
    }
    (&(p * p) - p).max_norm().max(p.hermitian_deviation())
}

/// Isometry `V` (dim × rank) with `V V† = p` and `V† V = I`.
pub fn range_isometry(p: &CMatrix, tol: &Tolerances) -> Result<CMatrix> {
    let dev = projection_deviation(p);
    if dev > tol.proj {
        return Err(Error::NotProjection(dev));
    }
    let eig = herm_eig(p, tol)?;
    let rank = eig.values.iter().filter(|&&l| l > 0.5).count();
    let n = p.rows();
    Ok(CMatrix::from_fn(n, rank, |i, k| eig.vectors[(i, k)]))
}

/// Smallest and largest eigenvalue.
pub fn spectrum_bounds(m: &CMatrix, tol: &Tolerances) -> Result<(f64, f64)> {
    let eig = herm_eig(m, tol)?;
    Ok((
        eig.values.last().copied().unwrap_or(0.0),
        eig.values.first().copied().unwrap_or(0.0),
    ))
}

/// `M†M = I` and `MM† = I` within `tol`.
pub fn unitary_deviation(u: &CMatrix) -> f64 {
    if !u.is_square() {
        return f64::INFINITY;
    }
    let id = CMatrix::identity(u.rows());
    (&(&u.adjoint() * u) - &id)
        .max_norm()
        .max((&(u * &u.adjoint()) - &id).max_norm())
}

/// Numerical rank: eigenvalues of the PSD matrix above `cutoff`.
pub fn psd_rank(m: &CMatrix, cutoff: f64, tol: &Tolerances) -> Result<usize> {
    Ok(herm_eig(m, tol)?.values.iter().filter(|&&l| l > cutoff).count())
}

/// Moore–Penrose style inverse of a PSD matrix restricted to eigenvalues
/// above `cutoff`.
pub fn psd_pinv(m: &CMatrix, cutoff: f64, tol: &Tolerances) -> Result<CMatrix> {
    Ok(herm_eig(m, tol)?.map(|l| if l > cutoff { 1.0 / l } else { 0.0 }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
        let g = CMatrix::from_fn(n, n, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        (&g + &g.adjoint()).scale_re(0.5)
    }

    fn random_effect(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
        // H/ (2‖H‖) + 1/2 lies in [0,1]
        let h = random_hermitian(rng, n);
        let eig = herm_eig(&h, &tol()).unwrap();
        let r = eig.values.iter().map(|l| l.abs()).fold(1e-12, f64::max);
        eig.map(|l| 0.5 + 0.5 * l / r)
    }

    #[test]
    fn diagonal_input() {
        let e = herm_eig(&CMatrix::diag(&[0.25, 1.0]), &tol()).unwrap();
        assert_eq!(e.values, vec![1.0, 0.25]);
        assert!(e.vectors[(1, 0)].norm() > 0.999);
        assert!(e.vectors[(0, 1)].norm() > 0.999);
    }

    #[test]
    fn pauli_x() {
        let x = CMatrix::real(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let e = herm_eig(&x, &tol()).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-12);
        assert!((e.values[1] + 1.0).abs() < 1e-12);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        // (1, 1)/√2 up to phase
        let v0 = e.vectors.col(0);
        let overlap = (v0[0] * s + v0[1] * s).norm();
        assert!((overlap - 1.0).abs() < 1e-12);
        let v1 = e.vectors.col(1);
        let overlap = (v1[0] * s - v1[1] * s).norm();
        assert!((overlap - 1.0).abs() < 1e-12);
    }

    #[test]
    fn reconstruction_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 1..=8 {
            for _ in 0..10 {
                let h = random_hermitian(&mut rng, n);
                let e = herm_eig(&h, &tol()).unwrap();
                assert!(e.map(|l| l).dist(&h) <= 1e-10, "n={n}");
                assert!(unitary_deviation(&e.vectors) <= 1e-9);
                assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
            }
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = CMatrix::real(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        assert!(matches!(herm_eig(&m, &tol()), Err(Error::NotHermitian(_))));
        let m = CMatrix::zeros(2, 3);
        assert!(matches!(herm_eig(&m, &tol()), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn sweep_cap_reports_no_convergence() {
        let mut t = tol();
        t.max_sweeps = 0;
        let x = CMatrix::real(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        assert!(matches!(herm_eig(&x, &t), Err(Error::NoConvergence(0))));
    }

    #[test]
    fn sqrt_examples() {
        let r = psd_sqrt(&CMatrix::diag(&[0.25, 1.0]), &tol()).unwrap();
        assert!(r.dist(&CMatrix::diag(&[0.5, 1.0])) < 1e-12);
        let z = psd_sqrt(&CMatrix::zeros(2, 2), &tol()).unwrap();
        assert!(z.is_zero(1e-15));
        let h = CMatrix::real(2, 2, &[0.5, 0.5, 0.5, 0.5]);
        let s = psd_sqrt(&h, &tol()).unwrap();
        assert!((&s * &s).dist(&h) <= 1e-9);
        let neg = CMatrix::diag(&[-0.1, 0.5]);
        assert!(psd_sqrt(&neg, &tol()).is_err());
        let slightly = CMatrix::diag(&[-1e-10, 0.5]);
        assert!(psd_sqrt(&slightly, &tol()).is_ok());
    }

    #[test]
    fn sqrt_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=6 {
            let e = random_effect(&mut rng, n);
            let s = psd_sqrt(&e, &tol()).unwrap();
            assert!((&s * &s).dist(&e) <= 1e-9);
            assert!((&s * &e).dist(&(&e * &s)) <= 1e-9);
        }
    }

    #[test]
    fn support_and_fixed() {
        let t = tol();
        let s = support_proj(&CMatrix::diag(&[0.3, 0.0, 1.0]), &t).unwrap();
        assert!(s.dist(&CMatrix::diag(&[1.0, 0.0, 1.0])) < 1e-12);
        let f = fixed_proj(&CMatrix::diag(&[1.0, 0.999]), &t).unwrap();
        assert!(f.dist(&CMatrix::diag(&[1.0, 0.0])) < 1e-12);
        let i = fixed_proj(&CMatrix::identity(3), &t).unwrap();
        assert!(i.dist(&CMatrix::identity(3)) < 1e-12);
        let h = CMatrix::real(2, 2, &[0.5, 0.5, 0.5, 0.5]);
        assert!(support_proj(&h, &t).unwrap().dist(&h) < 1e-12);
    }

    #[test]
    fn spectral_projection_identities() {
        let t = tol();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..=5 {
            let e = random_effect(&mut rng, n);
            let sp = support_proj(&e, &t).unwrap();
            // ⌈e⌉ e ⌈e⌉ = e
            assert!((&(&sp * &e) * &sp).dist(&e) <= 1e-9);
            assert!(projection_deviation(&sp) <= 1e-9);
            let id = CMatrix::identity(n);
            let fp = fixed_proj(&e, &t).unwrap();
            let dual = &id - &support_proj(&(&id - &e), &t).unwrap();
            // cutoffs differ (1e-6 vs 1e-8) but random spectra avoid that band
            assert!(fp.dist(&dual) <= 1e-9);
            assert!(projection_deviation(&fp) <= 1e-9);
        }
    }

    #[test]
    fn below_projection_commutes() {
        let t = tol();
        let p = CMatrix::diag(&[1.0, 1.0, 0.0]);
        let a = CMatrix::from_fn(3, 3, |i, j| match (i, j) {
            (0, 0) => c(0.5, 0.0),
            (1, 1) => c(0.3, 0.0),
            (0, 1) => c(0.1, 0.2),
            (1, 0) => c(0.1, -0.2),
            _ => C64::default(),
        });
        HermEffect::new(a.clone(), &t).unwrap();
        assert!((&a * &p).dist(&a) <= 1e-9);
        assert!((&p * &a).dist(&a) <= 1e-9);
        assert!((&(&p * &a) * &p).dist(&a) <= 1e-9);
    }

    #[test]
    fn isometry() {
        let t = tol();
        let v = range_isometry(&CMatrix::diag(&[1.0, 0.0]), &t).unwrap();
        assert_eq!((v.rows(), v.cols()), (2, 1));
        assert!((v[(0, 0)].norm() - 1.0).abs() < 1e-12);
        let v = range_isometry(&CMatrix::identity(3), &t).unwrap();
        assert_eq!(v.cols(), 3);
        assert!(unitary_deviation(&v) < 1e-12);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let h = random_hermitian(&mut rng, 4);
        let e = herm_eig(&h, &t).unwrap();
        let p = e.projection(|l| l >= e.values[1]);
        let v = range_isometry(&p, &t).unwrap();
        assert_eq!(v.cols(), 2);
        assert!((&v * &v.adjoint()).dist(&p) <= 1e-9);
        assert!((&v.adjoint() * &v).dist(&CMatrix::identity(2)) <= 1e-9);
        assert!(matches!(
            range_isometry(&CMatrix::diag(&[0.5, 1.0]), &t),
            Err(Error::NotProjection(_))
        ));
    }

    #[test]
    fn effect_validation() {
        let t = tol();
        assert!(HermEffect::new(CMatrix::diag(&[0.2, 1.0]), &t).is_ok());
        assert!(HermEffect::new(CMatrix::diag(&[1.2, 0.0]), &t).is_err());
        assert!(HermEffect::new(CMatrix::diag(&[1.0 + 1e-9, 0.0]), &t).is_ok());
    }

    #[test]
    fn json_encoding() {
        let m = CMatrix::new(1, 2, vec![c(1.0, 0.5), c(0.0, -1.0)]).unwrap();
        let js = serde_json::to_value(&m).unwrap();
        assert_eq!(js, serde_json::json!({"rows":1,"cols":2,"re":[1.0,0.0],"im":[0.5,-1.0]}));
        let back: CMatrix = serde_json::from_value(js).unwrap();
        assert_eq!(back, m);
        assert!(serde_json::from_str::<CMatrix>(r#"{"rows":2,"cols":2,"re":[1]}"#).is_err());
    }
}
