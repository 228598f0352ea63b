//! 2×2 operator matrices over the doubled kernel `𝔸 = diag(A, A)`.

use serde::Serialize;

use crate::a_adjoint::{im_a, re_a, require_b_a, sharp};
use crate::error::{Error, Result};
use crate::kernel::spectral_norm;
use crate::matrix::{CMatrix, C64};
use crate::radius::{crawford, maximize_periodic, numerical_radius, op_seminorm, RadiusMethod, RadiusResult, SweepConfig};
use crate::semi_space::SemiInnerSpace;
use crate::tilde::reduce;

/// A base space together with its doubled space.
#[derive(Clone, Debug)]
pub struct BlockSpace {
    base: SemiInnerSpace,
    dbl: SemiInnerSpace,
}

impl BlockSpace {
    pub fn new(base: SemiInnerSpace) -> Self {
        let dbl = base.direct_sum(&base);
        BlockSpace { base, dbl }
    }

    pub fn base(&self) -> &SemiInnerSpace {
        &self.base
    }

    pub fn dbl(&self) -> &SemiInnerSpace {
        &self.dbl
    }
}

/// `[[T11, T12], [T21, T22]]` after checking every block is in `B_A`.
pub fn block2(space: &BlockSpace, t11: &CMatrix, t12: &CMatrix, t21: &CMatrix, t22: &CMatrix) -> Result<CMatrix> {
    for t in [t11, t12, t21, t22] {
        require_b_a(&space.base, t)?;
    }
    Ok(CMatrix::from_blocks(t11, t12, t21, t22))
}

/// `‖𝕋^♯ − [[T11^♯, T21^♯], [T12^♯, T22^♯]]‖₂`.
pub fn block_sharp_residual(space: &BlockSpace, t11: &CMatrix, t12: &CMatrix, t21: &CMatrix, t22: &CMatrix) -> Result<f64> {
    let big = block2(space, t11, t12, t21, t22)?;
    let lhs = sharp(&space.dbl, &big)?;
    let b = &space.base;
    let rhs = CMatrix::from_blocks(&sharp(b, t11)?, &sharp(b, t21)?, &sharp(b, t12)?, &sharp(b, t22)?);
    Ok(spectral_norm(&(&lhs - &rhs)))
}

/// `½·sup_θ ‖e^{iθ}T + e^{−iθ}S^♯‖_A`, the A-numerical radius of the
/// off-diagonal operator matrix `[[0, T], [S, 0]]`.
pub fn off_diag_radius(space: &SemiInnerSpace, t: &CMatrix, s: &CMatrix, cfg: SweepConfig) -> Result<RadiusResult> {
    require_b_a(space, t)?;
    let s_sharp = sharp(space, s)?;
    let bt = reduce(space, t)?.b;
    let bs = reduce(space, &s_sharp)?.b;
    let lip = spectral_norm(&bt) + spectral_norm(&bs);
    let sw = maximize_periodic(
        |th| {
            let e = C64::from_polar(1.0, th);
            let m = CMatrix::from_inner(bt.inner() * e + bs.inner() * e.conj());
            spectral_norm(&m)
        },
        std::f64::consts::PI,
        cfg,
        lip,
    );
    Ok(RadiusResult {
        value: 0.5 * sw.value,
        method: RadiusMethod::ThetaSup,
        theta_star: Some(sw.theta),
        error_bound: 0.5 * sw.error_bound,
    })
}

/// A derived bound together with the propagated error of its radius terms.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundValue {
    pub value: f64,
    pub error_bound: f64,
}

/// `√(x + δ) − √x ≤ min(√δ, δ / (2√x))`.
pub(crate) fn sqrt_err(x: f64, delta: f64) -> f64 {
    if delta <= 0.0 {
        return 0.0;
    }
    let x = x.max(0.0);
    if x == 0.0 {
        delta.sqrt()
    } else {
        delta.sqrt().min(delta / (2.0 * x.sqrt()))
    }
}

fn psi_phi(space: &SemiInnerSpace, t: &CMatrix, s: &CMatrix, cfg: SweepConfig, lower: bool) -> Result<BoundValue> {
    let ts = sharp(space, t)?;
    let ss = sharp(space, s)?;
    let sum = &(t * &ts) + &(&ss * s);
    let n = op_seminorm(space, &sum)?;
    let prod = t * s;
    let r = if lower { crawford(space, &prod, cfg)? } else { numerical_radius(space, &prod, cfg)? };
    let inner = n.value + 2.0 * r.value;
    let err = 0.5 * sqrt_err(inner, n.error_bound + 2.0 * r.error_bound);
    Ok(BoundValue { value: 0.5 * inner.max(0.0).sqrt(), error_bound: err })
}

/// `Ψ_A(T, S) = ½·√(‖TT^♯ + S^♯S‖_A + 2ω_A(TS))`.
pub fn psi(space: &SemiInnerSpace, t: &CMatrix, s: &CMatrix, cfg: SweepConfig) -> Result<BoundValue> {
    psi_phi(space, t, s, cfg, false)
}

/// `Φ_A(T, S) = ½·√(‖TT^♯ + S^♯S‖_A + 2c_A(TS))`.
pub fn phi(space: &SemiInnerSpace, t: &CMatrix, s: &CMatrix, cfg: SweepConfig) -> Result<BoundValue> {
    psi_phi(space, t, s, cfg, true)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct InvolutionValues {
    pub omega: f64,
    pub norm: f64,
    pub re_norm: f64,
    pub im_norm: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct InvolutionMetrics {
    /// `‖T‖_A`.
    pub seminorm: f64,
    /// Computed on `𝕋 = [[I, T], [0, −I]]` over the doubled space.
    pub direct: InvolutionValues,
    /// From `‖T‖_A` alone.
    pub closed: InvolutionValues,
    /// `|ω − ½(‖𝕋‖ + ‖𝕋‖⁻¹)|` with the direct values.
    pub identity_residual: f64,
    /// Error bound of the direct radius.
    pub error_bound: f64,
}

/// `‖(I − P)·T·P‖₂`: how far `N(A)^⊥ = R(A)` is from being `T`-invariant.
pub fn invariance_residual(space: &SemiInnerSpace, t: &CMatrix) -> f64 {
    let p = space.proj_range();
    let comp = &CMatrix::identity(space.dim()) - p;
    spectral_norm(&(&(&comp * t) * p))
}

/// Direct and closed-form values of `ω`, `‖·‖`, `‖Re‖`, `‖Im‖` of the
/// involution matrix `[[I, T], [0, −I]]`.
pub fn involution_metrics(space: &BlockSpace, t: &CMatrix, cfg: SweepConfig) -> Result<InvolutionMetrics> {
    let base = &space.base;
    require_b_a(base, t)?;
    let residual = invariance_residual(base, t);
    if residual > 1e-9 * (base.norm_a() * spectral_norm(t)).max(1.0).max(spectral_norm(t)) {
        return Err(Error::NotInvariant { residual });
    }
    let n = base.dim();
    let id = CMatrix::identity(n);
    let big = CMatrix::from_blocks(&id, t, &CMatrix::zeros(n, n), &id.scale_re(-1.0));
    let dbl = &space.dbl;
    let w = numerical_radius(dbl, &big, cfg)?;
    let direct = InvolutionValues {
        omega: w.value,
        norm: op_seminorm(dbl, &big)?.value,
        re_norm: op_seminorm(dbl, &re_a(dbl, &big)?)?.value,
        im_norm: op_seminorm(dbl, &im_a(dbl, &big)?)?.value,
    };
    let tn = op_seminorm(base, t)?.value;
    let root = (tn * tn + 4.0).sqrt();
    let norm = 0.5 * root + 0.5 * tn;
    let closed = InvolutionValues { omega: 0.5 * root, norm, re_norm: 0.5 * root, im_norm: 0.5 * (norm - 1.0 / norm) };
    let identity_residual = (direct.omega - 0.5 * (direct.norm + 1.0 / direct.norm)).abs();
    Ok(InvolutionMetrics { seminorm: tn, direct, closed, identity_residual, error_bound: w.error_bound })
}

/// `‖[[1, t], [0, 1]]‖₂ = √((2 + t² + √(t⁴ + 4t²))/2)`.
pub fn aux_upper_norm(t: f64) -> f64 {
    ((2.0 + t * t + (t.powi(4) + 4.0 * t * t).sqrt()) / 2.0).sqrt()
}
