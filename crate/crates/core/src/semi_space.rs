//! The semi-inner product `⟨x|y⟩_A = ⟨Ax, y⟩` induced by a positive,
//! possibly singular, kernel `A`.
//!
//! [`SemiInnerSpace`] validates `A` once, makes the rank decision once, and
//! caches the spectral data (eigenbasis of `R(A)`, `A^{1/2}`, its
//! pseudoinverse, `A†`, and the projector onto `R(A)`) that the adjoint,
//! reduction, and radius modules consume.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::kernel::{self, herm_eig, recompose_with, spectral_norm, HermEig, DEFAULT_RANK_TOL};
use crate::matrix::{CMatrix, CVector, C64};
use crate::random::gaussian_vector;

/// Relative tolerances governing kernel validation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Eigenvalues below `-psd_tol · max(1, λ_max)` reject the kernel.
    pub psd_tol: f64,
    /// Eigenvalues at or below `rank_tol · λ_max` count as zero.
    pub rank_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { psd_tol: 1e-10, rank_tol: DEFAULT_RANK_TOL }
    }
}

#[derive(Clone, Debug)]
pub struct SemiInnerSpace {
    n: usize,
    /// Kernel rebuilt from the clamped, rank-truncated spectrum.
    a: CMatrix,
    eig: HermEig,
    pos_idx: Vec<usize>,
    basis: CMatrix,
    null_basis: Option<CMatrix>,
    d: Vec<f64>,
    sqrt_a: CMatrix,
    pinv_sqrt_a: CMatrix,
    pinv_a: CMatrix,
    proj_r: CMatrix,
    norm_a: f64,
    psd_tol: f64,
    rank_tol: f64,
    clamped: usize,
}

impl SemiInnerSpace {
    /// Validates `a` with default tolerances.
    pub fn new(a: &CMatrix) -> Result<Self> {
        Self::validate(a, Tolerances::default())
    }

    /// Checks that `a` is Hermitian positive semidefinite and nonzero and
    /// builds the cached geometry. Slightly negative eigenvalues (within
    /// `psd_tol`) are clamped to zero; the count is kept in
    /// [`clamped_eigenvalues`](Self::clamped_eigenvalues).
    pub fn validate(a: &CMatrix, tol: Tolerances) -> Result<Self> {
        if !(tol.rank_tol > 0.0 && tol.rank_tol < 1.0) || !(tol.psd_tol >= 0.0) {
            return Err(Error::InvalidArgument("tolerances out of range".into()));
        }
        let n = a.ensure_square()?;
        a.ensure_finite()?;
        let mut eig = herm_eig(a)?;
        let lambda_max = *eig.values.last().expect("n >= 1");
        let psd_abs = tol.psd_tol * lambda_max.max(1.0);
        let lambda_min = eig.values[0];
        if lambda_min < -psd_abs {
            return Err(Error::NotPositive { min_eigenvalue: lambda_min });
        }
        if lambda_max <= psd_abs {
            return Err(Error::ZeroKernel);
        }
        let mut clamped = 0;
        for v in eig.values.iter_mut() {
            if *v < 0.0 {
                *v = 0.0;
                clamped += 1;
            }
        }
        let cutoff = tol.rank_tol * lambda_max;
        let pos_idx: Vec<usize> = (0..n).filter(|&k| eig.values[k] > cutoff).collect();
        let r = pos_idx.len();
        // Truncated spectrum: what the space actually uses as A.
        let truncated: Vec<f64> = (0..n).map(|k| if eig.values[k] > cutoff { eig.values[k] } else { 0.0 }).collect();
        let clean = recompose_with(&eig.vectors, &truncated);
        // ascending order puts the positive block last
        let basis = eig.vectors.block(0, n - r, n, r);
        let null_basis = (r < n).then(|| eig.vectors.block(0, 0, n, n - r));
        let d: Vec<f64> = pos_idx.iter().map(|&k| eig.values[k]).collect();

        let spectral = |f: &dyn Fn(f64) -> f64| -> CMatrix {
            let vals: Vec<f64> = d.iter().map(|&x| f(x)).collect();
            recompose_with(&basis, &vals)
        };
        let sqrt_a = spectral(&|x| x.sqrt());
        let pinv_sqrt_a = spectral(&|x| 1.0 / x.sqrt());
        let pinv_a = spectral(&|x| 1.0 / x);
        let proj_r = &basis * &basis.adjoint();

        // The eigen-based rank decision must match the SVD-based projector.
        let proj_svd = kernel::range_projector(&clean, tol.rank_tol)?;
        let drift = spectral_norm(&(&proj_svd - &proj_r));
        if drift > 1e-8 {
            return Err(Error::Consistency(format!(
                "range projector disagreement {drift:.3e} at the rank cutoff"
            )));
        }

        Ok(SemiInnerSpace {
            n,
            a: clean,
            eig,
            pos_idx,
            basis,
            null_basis,
            d,
            sqrt_a,
            pinv_sqrt_a,
            pinv_a,
            proj_r,
            norm_a: lambda_max,
            psd_tol: psd_abs,
            rank_tol: tol.rank_tol,
            clamped,
        })
    }

    /// The doubled kernel `diag(A, B)` built from the cached spectra, so
    /// that the rank decision is inherited rather than recomputed.
    pub fn direct_sum(&self, other: &SemiInnerSpace) -> SemiInnerSpace {
        let (n1, n2) = (self.n, other.n);
        let z12 = CMatrix::zeros(n1, n2);
        let z21 = CMatrix::zeros(n2, n1);
        let cat = |a: &CMatrix, b: &CMatrix| CMatrix::from_blocks(a, &z12, &z21, b);
        let (r1, r2) = (self.rank(), other.rank());
        let mut basis = CMatrix::zeros(n1 + n2, r1 + r2);
        basis.set_block(0, 0, &self.basis);
        basis.set_block(n1, r1, &other.basis);
        let null_basis = match (&self.null_basis, &other.null_basis) {
            (None, None) => None,
            (a, b) => {
                let k1 = n1 - r1;
                let k2 = n2 - r2;
                let mut m = CMatrix::zeros(n1 + n2, k1 + k2);
                if let Some(a) = a {
                    m.set_block(0, 0, a);
                }
                if let Some(b) = b {
                    m.set_block(n1, k1, b);
                }
                Some(m)
            }
        };
        // eigen ordering of a direct sum is only needed for `eig()` consumers
        let mut pairs: Vec<(f64, CVector)> = Vec::with_capacity(n1 + n2);
        for k in 0..n1 {
            let mut v = CVector::zeros(n1 + n2);
            v.rows_mut(0, n1).copy_from(&self.eig.vectors.column(k));
            pairs.push((self.eig.values[k], v));
        }
        for k in 0..n2 {
            let mut v = CVector::zeros(n1 + n2);
            v.rows_mut(n1, n2).copy_from(&other.eig.vectors.column(k));
            pairs.push((other.eig.values[k], v));
        }
        pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
        let vectors = CMatrix::from_fn(n1 + n2, n1 + n2, |i, j| pairs[j].1[i]);
        let values: Vec<f64> = pairs.iter().map(|p| p.0).collect();
        let lambda_max = self.norm_a.max(other.norm_a);
        let cutoff = self.rank_tol * lambda_max;
        let pos_idx = (0..n1 + n2).filter(|&k| values[k] > cutoff).collect();
        let mut d = self.d.clone();
        d.extend_from_slice(&other.d);
        SemiInnerSpace {
            n: n1 + n2,
            a: cat(&self.a, &other.a),
            eig: HermEig { values, vectors },
            pos_idx,
            basis,
            null_basis,
            d,
            sqrt_a: cat(&self.sqrt_a, &other.sqrt_a),
            pinv_sqrt_a: cat(&self.pinv_sqrt_a, &other.pinv_sqrt_a),
            pinv_a: cat(&self.pinv_a, &other.pinv_a),
            proj_r: cat(&self.proj_r, &other.proj_r),
            norm_a: lambda_max,
            psd_tol: self.psd_tol.max(other.psd_tol),
            rank_tol: self.rank_tol,
            clamped: self.clamped + other.clamped,
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    /// Numerical rank `r` of `A`.
    #[inline]
    pub fn rank(&self) -> usize {
        self.d.len()
    }

    pub fn kernel(&self) -> &CMatrix {
        &self.a
    }

    pub fn eig(&self) -> &HermEig {
        &self.eig
    }

    /// Indices into `eig().values` of the eigenvalues kept as positive.
    pub fn pos_idx(&self) -> &[usize] {
        &self.pos_idx
    }

    /// `n × r` orthonormal eigenbasis of `R(A)`.
    pub fn range_basis(&self) -> &CMatrix {
        &self.basis
    }

    /// `n × (n − r)` orthonormal basis of `N(A)`, absent when `A` is invertible.
    pub fn null_basis(&self) -> Option<&CMatrix> {
        self.null_basis.as_ref()
    }

    /// Positive eigenvalues, matching the columns of [`range_basis`](Self::range_basis).
    pub fn positive_eigenvalues(&self) -> &[f64] {
        &self.d
    }

    pub fn sqrt_a(&self) -> &CMatrix {
        &self.sqrt_a
    }

    pub fn pinv_sqrt_a(&self) -> &CMatrix {
        &self.pinv_sqrt_a
    }

    pub fn pinv_a(&self) -> &CMatrix {
        &self.pinv_a
    }

    /// Orthogonal projector onto `R(A)`.
    pub fn proj_range(&self) -> &CMatrix {
        &self.proj_r
    }

    /// `‖A‖₂ = λ_max`.
    pub fn norm_a(&self) -> f64 {
        self.norm_a
    }

    /// Absolute PSD tolerance in effect.
    pub fn psd_tol(&self) -> f64 {
        self.psd_tol
    }

    pub fn rank_tol(&self) -> f64 {
        self.rank_tol
    }

    pub fn clamped_eigenvalues(&self) -> usize {
        self.clamped
    }

    pub fn is_definite(&self) -> bool {
        self.rank() == self.n
    }

    fn check_vec(&self, x: &CVector) -> Result<()> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: x.len() });
        }
        Ok(())
    }

    pub(crate) fn check_op(&self, t: &CMatrix) -> Result<()> {
        if t.rows() != self.n || t.cols() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: t.rows().max(t.cols()) });
        }
        t.ensure_finite()
    }

    /// `⟨x|y⟩_A = ⟨Ax, y⟩`, conjugate-linear in `y`.
    pub fn sip(&self, x: &CVector, y: &CVector) -> Result<C64> {
        self.check_vec(x)?;
        self.check_vec(y)?;
        Ok(y.dotc(&self.a.mul_vec(x)))
    }

    /// `‖x‖_A`.
    pub fn seminorm_vec(&self, x: &CVector) -> Result<f64> {
        Ok(self.sip(x, x)?.re.max(0.0).sqrt())
    }

    /// Coordinates of a vector of `R(A)` in the orthonormal basis
    /// `{A^{1/2} v_k}` of the de Branges–Rovnyak space `R(A^{1/2})`.
    pub fn range_coords(&self, z: &CVector) -> Result<CVector> {
        self.check_vec(z)?;
        let mut c = self.basis.adjoint().mul_vec(z);
        for (k, &dk) in self.d.iter().enumerate() {
            c[k] /= dk.sqrt();
        }
        Ok(c)
    }

    /// `count` vectors with `‖x‖_A = 1`, reproducible from `seed`.
    pub fn sample_a_unit(&self, seed: u64, count: usize, include_null: bool) -> Vec<CVector> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count).map(|_| self.sample_a_unit_with(&mut rng, include_null)).collect()
    }

    /// One A-unit vector: a Gaussian direction in `R(A)` mapped through
    /// `A^{-1/2}` on the range, optionally plus an independent Gaussian
    /// component in `N(A)` (invisible to every A-quantity).
    pub fn sample_a_unit_with<R: Rng + ?Sized>(&self, rng: &mut R, include_null: bool) -> CVector {
        let r = self.rank();
        let mut u = gaussian_vector(rng, r);
        let nu = u.norm();
        u /= C64::new(nu, 0.0);
        for (k, &dk) in self.d.iter().enumerate() {
            u[k] /= dk.sqrt();
        }
        let mut x = self.basis.mul_vec(&u);
        // one exact renormalization absorbs the rounding of the map
        let s = self.seminorm_vec(&x).expect("dimension matches");
        x /= C64::new(s, 0.0);
        if include_null {
            if let Some(nb) = &self.null_basis {
                let g = gaussian_vector(rng, nb.cols());
                x += nb.mul_vec(&g);
            }
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::c;
    use crate::random::{gaussian_matrix, gaussian_vector};
    use proptest::prelude::*;

    fn v(entries: &[(f64, f64)]) -> CVector {
        CVector::from_iterator(entries.len(), entries.iter().map(|&(a, b)| c(a, b)))
    }

    #[test]
    fn identity_kernel_full_rank() {
        let s = SemiInnerSpace::new(&CMatrix::identity(3)).unwrap();
        assert_eq!(s.rank(), 3);
        assert!(s.is_definite());
        assert!(s.null_basis().is_none());
    }

    #[test]
    fn singular_kernel_rank_and_null_space() {
        let s = SemiInnerSpace::new(&CMatrix::from_real_diag(&[0.0, 1.0])).unwrap();
        assert_eq!(s.rank(), 1);
        let nb = s.null_basis().unwrap();
        assert!((nb.get(0, 0).norm() - 1.0).abs() < 1e-15);
        assert!(nb.get(1, 0).norm() < 1e-15);
    }

    #[test]
    fn tiny_negative_perturbation_is_clamped() {
        let a = CMatrix::from_real_rows(&[&[1.0, -1e-14], &[-1e-14, 1.0]]);
        let s = SemiInnerSpace::new(&a).unwrap();
        assert_eq!(s.rank(), 2);
        // a genuinely tiny negative eigenvalue gets clamped
        let b = CMatrix::from_real_diag(&[1.0, -1e-13]);
        let s = SemiInnerSpace::new(&b).unwrap();
        assert_eq!(s.clamped_eigenvalues(), 1);
        assert_eq!(s.rank(), 1);
    }

    #[test]
    fn rejects_bad_kernels() {
        assert!(matches!(
            SemiInnerSpace::new(&CMatrix::from_real_diag(&[1.0, -0.5])),
            Err(Error::NotPositive { .. })
        ));
        assert_eq!(SemiInnerSpace::new(&CMatrix::zeros(3, 3)).unwrap_err(), Error::ZeroKernel);
        assert!(matches!(
            SemiInnerSpace::new(&CMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]])),
            Err(Error::NotHermitian { .. })
        ));
        assert!(matches!(
            SemiInnerSpace::new(&CMatrix::zeros(2, 3)),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn cached_geometry_is_consistent() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let g = gaussian_matrix(&mut rng, 5, 3);
        let a = &g * &g.adjoint();
        let s = SemiInnerSpace::new(&a).unwrap();
        assert_eq!(s.rank(), 3);
        let sq = s.sqrt_a();
        let na = s.norm_a();
        assert!(spectral_norm(&(&(sq * sq) - s.kernel())) <= 1e-9 * na);
        assert!(spectral_norm(&(s.kernel() - &a)) <= 1e-12 * na);
        let p = kernel::range_projector(&a, DEFAULT_RANK_TOL).unwrap();
        assert!(spectral_norm(&(&p - s.proj_range())) <= 1e-9);
        let pa = &(s.pinv_a() * &a) - s.proj_range();
        assert!(spectral_norm(&pa) <= 1e-9);
    }

    #[test]
    fn sip_examples() {
        let s = SemiInnerSpace::new(&CMatrix::identity(2)).unwrap();
        let x = v(&[(1.0, 2.0), (0.0, 1.0)]);
        let y = v(&[(3.0, 0.0), (1.0, -1.0)]);
        assert!((s.sip(&x, &y).unwrap() - y.dotc(&x)).norm() < 1e-15);

        let s = SemiInnerSpace::new(&CMatrix::from_real_diag(&[0.0, 1.0])).unwrap();
        assert_eq!(s.sip(&v(&[(1.0, 0.0), (0.0, 0.0)]), &y).unwrap(), c(0.0, 0.0));

        let s = SemiInnerSpace::new(&CMatrix::from_real_diag(&[2.0, 1.0])).unwrap();
        let ones = v(&[(1.0, 0.0), (1.0, 0.0)]);
        assert!((s.sip(&ones, &ones).unwrap() - c(3.0, 0.0)).norm() < 1e-14);
        assert!(matches!(s.sip(&v(&[(1.0, 0.0)]), &ones), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn seminorm_examples() {
        let s = SemiInnerSpace::new(&CMatrix::from_real_diag(&[0.0, 1.0])).unwrap();
        assert_eq!(s.seminorm_vec(&v(&[(1.0, 0.0), (0.0, 0.0)])).unwrap(), 0.0);
        let s = SemiInnerSpace::new(&CMatrix::identity(2)).unwrap();
        assert!((s.seminorm_vec(&v(&[(3.0, 0.0), (0.0, 4.0)])).unwrap() - 5.0).abs() < 1e-15);
        let s = SemiInnerSpace::new(&CMatrix::from_real_diag(&[4.0, 1.0])).unwrap();
        assert!((s.seminorm_vec(&v(&[(1.0, 0.0), (0.0, 0.0)])).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn sampling_examples() {
        let s = SemiInnerSpace::new(&CMatrix::identity(3)).unwrap();
        for x in s.sample_a_unit(1, 20, true) {
            assert!((x.norm() - 1.0).abs() < 1e-12);
        }
        let s = SemiInnerSpace::new(&CMatrix::from_real_diag(&[0.0, 1.0])).unwrap();
        let xs = s.sample_a_unit(2, 50, true);
        assert!(xs.iter().any(|x| x[0].norm() > 1e-3));
        for x in &xs {
            assert!((x[1].norm() - 1.0).abs() < 1e-12);
        }
        assert!(s.sample_a_unit(3, 0, false).is_empty());
        assert_eq!(s.sample_a_unit(7, 5, true), s.sample_a_unit(7, 5, true));
    }

    #[test]
    fn direct_sum_doubles_rank() {
        let s = SemiInnerSpace::new(&CMatrix::from_real_diag(&[0.0, 2.0, 3.0])).unwrap();
        let dbl = s.direct_sum(&s);
        assert_eq!(dbl.rank(), 4);
        assert_eq!(dbl.dim(), 6);
        let direct = SemiInnerSpace::new(&CMatrix::from_real_diag(&[0.0, 2.0, 3.0, 0.0, 2.0, 3.0])).unwrap();
        assert!(spectral_norm(&(dbl.proj_range() - direct.proj_range())) < 1e-14);
        assert!(spectral_norm(&(dbl.pinv_a() - direct.pinv_a())) < 1e-14);
        assert_eq!(dbl.eig().values, direct.eig().values);
    }

    fn random_space(seed: u64, n: usize, r: usize) -> SemiInnerSpace {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = gaussian_matrix(&mut rng, n, r);
        SemiInnerSpace::new(&(&g * &g.adjoint())).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn sip_hermitian_symmetry_and_cauchy_schwarz(seed in 0u64..10_000, n in 2usize..7, r in 1usize..7) {
            let r = r.min(n);
            let s = random_space(seed, n, r);
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xABCD);
            let x = gaussian_vector(&mut rng, n);
            let y = gaussian_vector(&mut rng, n);
            let xy = s.sip(&x, &y).unwrap();
            let yx = s.sip(&y, &x).unwrap();
            prop_assert!((xy - yx.conj()).norm() <= 1e-12 * (1.0 + xy.norm()));
            let bound = s.seminorm_vec(&x).unwrap() * s.seminorm_vec(&y).unwrap();
            prop_assert!(xy.norm() <= bound * (1.0 + 1e-12) + 1e-10);
        }

        #[test]
        fn null_components_are_invisible(seed in 0u64..10_000, n in 2usize..7) {
            let s = random_space(seed, n, n - 1);
            let mut rng = ChaCha8Rng::seed_from_u64(seed + 1);
            let x = gaussian_vector(&mut rng, n);
            let y = gaussian_vector(&mut rng, n);
            let nb = s.null_basis().unwrap();
            let z = &x + nb.mul_vec(&gaussian_vector(&mut rng, nb.cols()));
            let d = (s.sip(&z, &y).unwrap() - s.sip(&x, &y).unwrap()).norm();
            prop_assert!(d <= 1e-10 * s.norm_a() * y.norm());
        }

        #[test]
        fn samples_are_a_unit(seed in 0u64..10_000, n in 1usize..8, r in 1usize..8) {
            let r = r.min(n);
            let s = random_space(seed, n, r);
            for x in s.sample_a_unit(seed, 8, true) {
                prop_assert!((s.seminorm_vec(&x).unwrap() - 1.0).abs() <= 1e-12);
            }
        }
    }
}
