//! Dense decompositions every other module builds on.
//!
//! Eigen and singular value work is delegated to `nalgebra`; this module
//! fixes the conventions (ascending eigenvalues, descending singular values,
//! one relative rank cutoff) and validates inputs.

use nalgebra::{Schur, SymmetricEigen};

use crate::error::{Error, Result};
use crate::matrix::{CMatrix, C64};

/// Relative singular-value cutoff used for every rank decision.
pub const DEFAULT_RANK_TOL: f64 = 1e-12;

/// Hermitian eigendecomposition with ascending eigenvalues.
#[derive(Clone, Debug)]
pub struct HermEig {
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as columns, in the order of `values`.
    pub vectors: CMatrix,
}

impl HermEig {
    /// `V diag(values) V*`.
    pub fn recompose(&self) -> CMatrix {
        recompose_with(&self.vectors, &self.values)
    }
}

pub(crate) fn recompose_with(vectors: &CMatrix, values: &[f64]) -> CMatrix {
    let n = vectors.rows();
    let mut scaled = vectors.clone();
    for (j, &v) in values.iter().enumerate() {
        for i in 0..n {
            let z = scaled.get(i, j) * v;
            scaled.set(i, j, z);
        }
    }
    &scaled * &vectors.adjoint()
}

#[derive(Clone, Debug)]
pub struct Svd {
    pub u: CMatrix,
    /// Descending, non-negative.
    pub sigma: Vec<f64>,
    pub v: CMatrix,
}

impl Svd {
    pub fn rank(&self, rank_tol: f64) -> usize {
        numerical_rank(&self.sigma, rank_tol)
    }
}

fn hermitian_tolerance(m: &CMatrix) -> f64 {
    1e-10 * m.max_abs().max(1.0)
}

fn check_hermitian(m: &CMatrix) -> Result<()> {
    m.ensure_square()?;
    m.ensure_finite()?;
    let residual = m.hermitian_residual();
    if residual > hermitian_tolerance(m) {
        return Err(Error::NotHermitian { residual });
    }
    Ok(())
}

pub fn herm_eig(m: &CMatrix) -> Result<HermEig> {
    check_hermitian(m)?;
    let n = m.rows();
    let sym = m.hermitian_part().into_inner();
    let eig = SymmetricEigen::try_new(sym, f64::EPSILON, 0).ok_or(Error::NoConvergence)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = CMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok(HermEig { values, vectors })
}

/// Ascending eigenvalues of a matrix assumed Hermitian; only the lower
/// triangle is read. No validation: this is the inner loop of the angle
/// sweeps.
pub(crate) fn herm_eigenvalues_unchecked(m: &CMatrix) -> Vec<f64> {
    let mut v: Vec<f64> = m.inner().symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Smallest and largest eigenvalue of a Hermitian matrix (unchecked).
pub(crate) fn herm_extremes_unchecked(m: &CMatrix) -> (f64, f64) {
    let v = m.inner().symmetric_eigenvalues();
    v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)))
}

/// Thin SVD from the Hermitian dilation `[[0, M], [M*, 0]]`, whose
/// eigenvalues are `±σ_i` with eigenvectors `(u_i, ±v_i)/√2`.
///
/// nalgebra's complex bidiagonal SVD returns wrong singular vectors on a
/// small fraction of exactly rank-deficient inputs; its symmetric
/// eigensolver does not, and the dilation keeps the absolute accuracy
/// `O(ε σ_max)` of a direct SVD.
pub fn svd(m: &CMatrix) -> Result<Svd> {
    m.ensure_finite()?;
    let (r, c) = (m.rows(), m.cols());
    let k = r.min(c);
    let mut dil = CMatrix::zeros(r + c, r + c);
    dil.set_block(0, r, m);
    dil.set_block(r, 0, &m.adjoint());
    let eig = SymmetricEigen::try_new(dil.into_inner(), f64::EPSILON, 0).ok_or(Error::NoConvergence)?;
    let mut order: Vec<usize> = (0..r + c).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let order = &order[..k];
    let sigma: Vec<f64> = order.iter().map(|&j| eig.eigenvalues[j].max(0.0)).collect();
    let s2 = std::f64::consts::SQRT_2;
    let u_raw = CMatrix::from_fn(r, k, |i, j| eig.eigenvectors[(i, order[j])] * s2);
    let v_raw = CMatrix::from_fn(c, k, |i, j| eig.eigenvectors[(r + i, order[j])] * s2);
    // Pairs at noise-level σ mix the u and v halves; re-orthonormalize and
    // complete those columns. The product U Σ V* is unaffected to O(ε σ_max).
    let u = orthonormalize_columns(u_raw);
    let v = orthonormalize_columns(v_raw);
    Ok(Svd { u, sigma, v })
}

/// Two-pass modified Gram–Schmidt in column order. A column that loses more
/// than half its norm is replaced by the standard basis vector that best
/// survives orthogonalization.
fn orthonormalize_columns(mut q: CMatrix) -> CMatrix {
    let (n, k) = (q.rows(), q.cols());
    for j in 0..k {
        let mut col = q.column(j);
        let before = col.norm();
        for _ in 0..2 {
            for p in 0..j {
                let qp = q.column(p);
                let proj = qp.dotc(&col);
                col -= &qp * proj;
            }
        }
        if before < 0.5 || col.norm() < 0.5 * before {
            // best surviving standard basis vector; its residual is ≥ 1/√n
            let mut best: Option<crate::matrix::CVector> = None;
            for t in 0..n {
                let mut e = crate::matrix::CVector::zeros(n);
                e[t] = C64::new(1.0, 0.0);
                for _ in 0..2 {
                    for p in 0..j {
                        let qp = q.column(p);
                        let proj = qp.dotc(&e);
                        e -= &qp * proj;
                    }
                }
                if best.as_ref().is_none_or(|b| e.norm() > b.norm()) {
                    best = Some(e);
                }
            }
            col = best.expect("n >= 1");
        }
        let nrm = col.norm();
        for i in 0..n {
            q.set(i, j, col[i] / nrm);
        }
    }
    q
}

/// Descending singular values only.
pub fn singular_values(m: &CMatrix) -> Result<Vec<f64>> {
    m.ensure_finite()?;
    let mut s: Vec<f64> = m.inner().singular_values_unordered().iter().map(|x| x.max(0.0)).collect();
    s.sort_by(|a, b| b.total_cmp(a));
    Ok(s)
}

/// Spectral norm `σ_max`. Non-finite input yields NaN.
pub fn spectral_norm(m: &CMatrix) -> f64 {
    if !m.is_finite() {
        return f64::NAN;
    }
    m.inner().singular_values_unordered().iter().fold(0.0_f64, |a, &b| a.max(b))
}

/// Count of singular values above `rank_tol · σ_max`.
pub fn numerical_rank(sigma: &[f64], rank_tol: f64) -> usize {
    let smax = sigma.iter().fold(0.0_f64, |a, &b| a.max(b));
    if smax == 0.0 {
        return 0;
    }
    sigma.iter().filter(|&&s| s > rank_tol * smax).count()
}

fn check_rank_tol(rank_tol: f64) -> Result<()> {
    if !(rank_tol > 0.0 && rank_tol < 1.0) {
        return Err(Error::InvalidArgument(format!("rank_tol must lie in (0,1), got {rank_tol}")));
    }
    Ok(())
}

/// Moore–Penrose pseudoinverse with relative cutoff `rank_tol · σ_max`.
pub fn pinv(m: &CMatrix, rank_tol: f64) -> Result<CMatrix> {
    check_rank_tol(rank_tol)?;
    let s = svd(m)?;
    let k = s.rank(rank_tol);
    let mut out = CMatrix::zeros(m.cols(), m.rows());
    for j in 0..k {
        let vj = s.v.column(j);
        let uj = s.u.column(j);
        let inv = 1.0 / s.sigma[j];
        let outer = CMatrix::from_inner(&vj * uj.adjoint() * C64::new(inv, 0.0));
        out = &out + &outer;
    }
    Ok(out)
}

/// Orthogonal projector onto the range of `m`, rank decided as in [`pinv`].
pub fn range_projector(m: &CMatrix, rank_tol: f64) -> Result<CMatrix> {
    check_rank_tol(rank_tol)?;
    let s = svd(m)?;
    let k = s.rank(rank_tol);
    if k == 0 {
        return Ok(CMatrix::zeros(m.rows(), m.rows()));
    }
    let uk = s.u.block(0, 0, m.rows(), k);
    Ok(&uk * &uk.adjoint())
}

/// Eigenvalues of a general square matrix via complex Schur form.
pub fn eigenvalues(m: &CMatrix) -> Result<Vec<C64>> {
    let n = m.ensure_square()?;
    m.ensure_finite()?;
    if n == 1 {
        return Ok(vec![m.get(0, 0)]);
    }
    let schur = Schur::try_new(m.inner().clone(), f64::EPSILON, 10_000).ok_or(Error::NoConvergence)?;
    let (_, t) = schur.unpack();
    Ok((0..n).map(|i| t[(i, i)]).collect())
}

pub fn spectral_radius(m: &CMatrix) -> Result<f64> {
    Ok(eigenvalues(m)?.iter().fold(0.0_f64, |a, z| a.max(z.norm())))
}

/// `|M| = (M*M)^{1/2}`.
pub fn abs_value(m: &CMatrix) -> Result<CMatrix> {
    m.ensure_square()?;
    let gram = &m.adjoint() * m;
    let eig = herm_eig(&gram)?;
    let roots: Vec<f64> = eig.values.iter().map(|&l| l.max(0.0).sqrt()).collect();
    Ok(recompose_with(&eig.vectors, &roots))
}
