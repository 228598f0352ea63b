//! Seeded random matrix primitives shared by the samplers and generators.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::matrix::{CMatrix, CVector, C64};

/// Standard complex Gaussian: real and imaginary parts `N(0, 1/2)`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CVector {
    CVector::from_fn(n, |_, _| complex_gaussian(rng))
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    // explicit loop keeps the draw order row-major and independent of nalgebra's layout
    let mut m = CMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m.set(i, j, complex_gaussian(rng));
        }
    }
    m
}

pub fn gaussian_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    gaussian_matrix(rng, n, n).hermitian_part()
}

/// Haar-distributed unitary via QR of a complex Gaussian with the phases of
/// `diag(R)` absorbed into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    let g = gaussian_matrix(rng, n, n).into_inner();
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    CMatrix::from_inner(q)
}

/// Log-uniform draw on `[lo, hi]`.
pub fn log_uniform<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    let u: f64 = rng.random();
    (lo.ln() + u * (hi.ln() - lo.ln())).exp()
}

pub fn unit_phase<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let t: f64 = rng.random::<f64>() * std::f64::consts::TAU;
    C64::from_polar(1.0, t)
}
