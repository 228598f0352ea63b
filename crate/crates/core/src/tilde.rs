//! Reduction of an A-bounded operator to the space `R(A^{1/2})`.
//!
//! `R(A^{1/2})` with its range inner product is modeled as `ℂ^r` through the
//! orthonormal basis `{A^{1/2} v_k}`, where `v_k` are the eigenvectors of `A`
//! with positive eigenvalue `d_k`. In these coordinates the induced operator
//! `T̃` (with `Z_A T = T̃ Z_A`, `Z_A x = Ax`) has the matrix
//! `diag(√d)·V*·T·V·diag(1/√d)`.

use crate::a_adjoint::{membership, sharp};
use crate::error::{Error, Result};
use crate::kernel::spectral_norm;
use crate::matrix::{CMatrix, CVector};
use crate::semi_space::SemiInnerSpace;

#[derive(Clone, Debug)]
pub struct TildeOperator {
    /// `r × r` matrix of `T̃`.
    pub b: CMatrix,
    /// `n × r` eigenvectors of `A` spanning `R(A)`.
    pub basis: CMatrix,
    /// Positive eigenvalues of `A` matching `basis`.
    pub d: Vec<f64>,
}

impl TildeOperator {
    #[inline]
    pub fn r(&self) -> usize {
        self.b.rows()
    }
}

/// Matrix of `T̃`. No membership test; callers guarantee `T(N(A)) ⊆ N(A)`.
pub(crate) fn reduce_matrix(space: &SemiInnerSpace, t: &CMatrix) -> CMatrix {
    let v = space.range_basis();
    let d = space.positive_eigenvalues();
    let mut b = &(&v.adjoint() * t) * v;
    for i in 0..b.rows() {
        let si = d[i].sqrt();
        for j in 0..b.cols() {
            b.set(i, j, b.get(i, j) * (si / d[j].sqrt()));
        }
    }
    b
}

/// `T̃`, or `Unbounded` when `‖T‖_A = ∞`.
pub fn reduce(space: &SemiInnerSpace, t: &CMatrix) -> Result<TildeOperator> {
    if !membership(space, t)?.in_b_a_half {
        return Err(Error::Unbounded);
    }
    Ok(TildeOperator {
        b: reduce_matrix(space, t),
        basis: space.range_basis().clone(),
        d: space.positive_eigenvalues().to_vec(),
    })
}

/// `‖(T^♯)~ − (T̃)*‖₂`.
pub fn tilde_sharp_is_adjoint(space: &SemiInnerSpace, t: &CMatrix) -> Result<f64> {
    let s = sharp(space, t)?;
    let bt = reduce(space, t)?.b;
    let bs = reduce(space, &s)?.b;
    Ok(spectral_norm(&(&bs - &bt.adjoint())))
}

/// Residuals `‖(XY)~ − X̃Ỹ‖₂` and `‖(X+Y)~ − X̃ − Ỹ‖₂`.
pub fn tilde_homomorphism(space: &SemiInnerSpace, x: &CMatrix, y: &CMatrix) -> Result<(f64, f64)> {
    let bx = reduce(space, x)?.b;
    let by = reduce(space, y)?.b;
    let bxy = reduce(space, &(x * y))?.b;
    let bsum = reduce(space, &(x + y))?.b;
    let mul = spectral_norm(&(&bxy - &(&bx * &by)));
    let add = spectral_norm(&(&(&bsum - &bx) - &by));
    Ok((mul, add))
}

/// `‖coords(A·T·x) − B·coords(A·x)‖₂` for one vector `x`.
pub fn intertwining_residual(space: &SemiInnerSpace, tilde: &TildeOperator, t: &CMatrix, x: &CVector) -> Result<f64> {
    let a = space.kernel();
    let lhs = space.range_coords(&a.mul_vec(&t.mul_vec(x)))?;
    let rhs = tilde.b.mul_vec(&space.range_coords(&a.mul_vec(x))?);
    Ok((lhs - rhs).norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::a_adjoint::classify;
    use crate::random::{gaussian_matrix, gaussian_vector, haar_unitary};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn space(d: &[f64]) -> SemiInnerSpace {
        SemiInnerSpace::new(&CMatrix::from_real_diag(d)).unwrap()
    }

    #[test]
    fn reduce_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let t = gaussian_matrix(&mut rng, 3, 3);
        let red = reduce(&space(&[1.0, 1.0, 1.0]), &t).unwrap();
        assert_eq!(red.r(), 3);
        // identity kernel: B is T in a permuted/phased eigenbasis
        assert!((spectral_norm(&red.b) - spectral_norm(&t)).abs() < 1e-13);
        let ident = SemiInnerSpace::new(&CMatrix::identity(3)).unwrap();
        let v = ident.range_basis();
        assert!(spectral_norm(&(&(&(v * &red.b) * &v.adjoint()) - &t)) < 1e-13);

        let e12 = CMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        let red = reduce(&space(&[4.0, 1.0]), &e12).unwrap();
        // eigenbasis ordered ascending: (e2, e1)
        assert!((red.b.get(1, 0).norm() - 2.0).abs() < 1e-14);
        assert!(red.b.get(0, 1).norm() < 1e-14 && red.b.get(0, 0).norm() < 1e-14);

        let t = CMatrix::from_real_rows(&[&[3.0, 0.0], &[5.0, 7.0]]);
        let red = reduce(&space(&[1.0, 0.0]), &t).unwrap();
        assert_eq!(red.r(), 1);
        assert!((red.b.get(0, 0).re - 3.0).abs() < 1e-14);

        let swap = CMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        assert_eq!(reduce(&space(&[0.0, 1.0]), &swap).unwrap_err(), Error::Unbounded);
    }

    #[test]
    fn sharp_and_homomorphism_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let t = gaussian_matrix(&mut rng, 3, 3);
        assert!(tilde_sharp_is_adjoint(&space(&[1.0, 1.0, 1.0]), &t).unwrap() < 1e-13);
        let e12 = CMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(tilde_sharp_is_adjoint(&space(&[2.0, 1.0]), &e12).unwrap() < 1e-12);
        let i = CMatrix::identity(2);
        assert_eq!(tilde_homomorphism(&space(&[2.0, 0.0]), &i, &i).unwrap(), (0.0, 0.0));
        let s = space(&[2.0, 3.0]);
        let b = reduce(&s, &e12).unwrap().b;
        let b2 = reduce(&s, &(&e12 * &e12)).unwrap().b;
        assert!(spectral_norm(&(&b2 - &(&b * &b))) < 1e-14);
    }

    #[test]
    fn projector_reduces_to_identity() {
        let s = space(&[0.0, 2.0, 5.0, 0.0]);
        let red = reduce(&s, s.proj_range()).unwrap();
        assert!(spectral_norm(&(&red.b - &CMatrix::identity(2))) < 1e-14);
    }

    fn admissible(seed: u64, n: usize, r: usize) -> (SemiInnerSpace, CMatrix, CMatrix) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = gaussian_matrix(&mut rng, n, r);
        let s = SemiInnerSpace::new(&(&g * &g.adjoint())).unwrap();
        let v = s.eig().vectors.clone();
        let mut make = || {
            let mut m = gaussian_matrix(&mut rng, n, n);
            for i in (n - r)..n {
                for j in 0..(n - r) {
                    m.set(i, j, crate::matrix::c(0.0, 0.0));
                }
            }
            &(&v * &m) * &v.adjoint()
        };
        let t = make();
        let u = make();
        (s, t, u)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn reduction_contracts(seed in 0u64..100_000, n in 2usize..7, r in 1usize..7) {
            let r = r.min(n);
            let (s, t, u) = admissible(seed, n, r);
            let sc = (s.norm_a() * spectral_norm(&t) * spectral_norm(&u)).max(1.0);
            let red = reduce(&s, &t).unwrap();
            prop_assert_eq!(red.r(), r);
            let mut rng = ChaCha8Rng::seed_from_u64(seed + 7);
            for _ in 0..4 {
                let x = gaussian_vector(&mut rng, n);
                let res = intertwining_residual(&s, &red, &t, &x).unwrap();
                prop_assert!(res <= 1e-9 * sc * x.norm().max(1.0));
            }
            prop_assert!(tilde_sharp_is_adjoint(&s, &t).unwrap() <= 1e-9 * sc);
            let (m, a) = tilde_homomorphism(&s, &t, &u).unwrap();
            prop_assert!(m <= 1e-9 * sc && a <= 1e-9 * sc);
        }

        #[test]
        fn unitary_and_normal_transfer(seed in 0u64..100_000, n in 2usize..6, r in 1usize..6) {
            let r = r.min(n);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = gaussian_matrix(&mut rng, n, r);
            let s = SemiInnerSpace::new(&(&g * &g.adjoint())).unwrap();
            let v = s.eig().vectors.clone();
            let d = s.positive_eigenvalues().to_vec();
            let q = haar_unitary(&mut rng, r);
            // T11 = D^{-1/2} Q D^{1/2} is an A-unitary compression
            let mut m = gaussian_matrix(&mut rng, n, n);
            let k = n - r;
            for i in 0..r {
                for j in 0..r {
                    m.set(k + i, k + j, q.get(i, j) * (d[j].sqrt() / d[i].sqrt()));
                }
                for j in 0..k {
                    m.set(k + i, j, crate::matrix::c(0.0, 0.0));
                }
            }
            let t = &(&v * &m) * &v.adjoint();
            let f = classify(&s, &t, None).unwrap();
            prop_assert!(f.a_unitary);
            let b = reduce(&s, &t).unwrap().b;
            prop_assert!(spectral_norm(&(&(&b.adjoint() * &b) - &CMatrix::identity(r))) <= 1e-9);
            prop_assert!(spectral_norm(&(&(&b.adjoint() * &b) - &(&b * &b.adjoint()))) <= 1e-9);
        }
    }
}
