//! A-adjoints, membership in `B_A`, and the operator classes defined by the
//! semi-inner product.
//!
//! In finite dimension `B_A = B_{A^{1/2}} = {T : T(N(A)) ⊆ N(A)}`. Membership
//! is decided twice: once through the Douglas range condition
//! `R(T*A) ⊆ R(A)` and once through the off-diagonal block of `T` in the
//! eigenbasis of `A`. The two residuals coincide in exact arithmetic.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::{herm_eigenvalues_unchecked, spectral_norm};
use crate::matrix::{CMatrix, C64, I};
use crate::semi_space::SemiInnerSpace;

/// Relative tolerance of the membership tests.
pub const MEMBERSHIP_TOL: f64 = 1e-10;
/// Relative tolerance of the class predicates.
pub const CLASS_TOL: f64 = 1e-9;
/// Relative tolerance of the adjoint postconditions.
const POST_TOL: f64 = 1e-9;

/// Outcome of the two membership oracles.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Membership {
    /// `R(T*A) ⊆ R(A)` within tolerance.
    pub in_b_a: bool,
    /// `T(N(A)) ⊆ N(A)` within tolerance.
    pub in_b_a_half: bool,
    /// `‖(I − P)·T*·A‖₂`.
    pub range_residual: f64,
    /// `‖D·V_r*·T·V_0‖₂`, the scaled top-right block in A's eigenbasis.
    pub block_residual: f64,
    pub tol: f64,
    /// The two oracles disagree, both within a factor 100 of the tolerance.
    pub borderline: bool,
}

fn scale(space: &SemiInnerSpace, t: &CMatrix) -> f64 {
    (space.norm_a() * spectral_norm(t)).max(1.0)
}

/// Runs both membership oracles. Disagreement beyond `100·tol` is an
/// internal inconsistency of the rank decision.
pub fn membership(space: &SemiInnerSpace, t: &CMatrix) -> Result<Membership> {
    space.check_op(t)?;
    let tol = MEMBERSHIP_TOL * scale(space, t);
    let a = space.kernel();
    let p = space.proj_range();
    let comp = &CMatrix::identity(space.dim()) - p;
    let range_residual = spectral_norm(&(&(&comp * &t.adjoint()) * a));
    let block_residual = match space.null_basis() {
        None => 0.0,
        Some(v0) => {
            let vr = space.range_basis();
            let mut blk = &(&vr.adjoint() * t) * v0;
            for (k, &dk) in space.positive_eigenvalues().iter().enumerate() {
                for j in 0..blk.cols() {
                    blk.set(k, j, blk.get(k, j) * dk);
                }
            }
            spectral_norm(&blk)
        }
    };
    let in_b_a = range_residual <= tol;
    let half_raw = block_residual <= tol;
    let mut borderline = false;
    if in_b_a != half_raw {
        if range_residual.max(block_residual) > 100.0 * tol {
            return Err(Error::Consistency(format!(
                "membership oracles disagree: range residual {range_residual:.3e}, block residual {block_residual:.3e}, tol {tol:.3e}"
            )));
        }
        borderline = true;
    }
    Ok(Membership {
        in_b_a,
        // B_A ⊆ B_{A^{1/2}} is kept exact even in the borderline band
        in_b_a_half: half_raw || in_b_a,
        range_residual,
        block_residual,
        tol,
        borderline,
    })
}

/// `T ∈ B_A(H)`.
pub fn in_b_a(space: &SemiInnerSpace, t: &CMatrix) -> Result<bool> {
    Ok(membership(space, t)?.in_b_a)
}

/// `T ∈ B_{A^{1/2}}(H)`, i.e. `‖T‖_A < ∞`.
pub fn in_b_a_half(space: &SemiInnerSpace, t: &CMatrix) -> Result<bool> {
    Ok(membership(space, t)?.in_b_a_half)
}

pub(crate) fn require_b_a(space: &SemiInnerSpace, t: &CMatrix) -> Result<()> {
    let m = membership(space, t)?;
    if m.in_b_a {
        Ok(())
    } else {
        Err(Error::NotAdmissible { residual: m.range_residual })
    }
}

/// `A†T*A` without the membership test or postconditions.
pub(crate) fn sharp_raw(space: &SemiInnerSpace, t: &CMatrix) -> CMatrix {
    &(space.pinv_a() * &t.adjoint()) * space.kernel()
}

/// The A-adjoint `T^♯ = A†T*A`, the solution of `AS = T*A` with range in
/// `R(A)`. Both defining properties are re-checked on the result.
pub fn sharp(space: &SemiInnerSpace, t: &CMatrix) -> Result<CMatrix> {
    require_b_a(space, t)?;
    let s = sharp_raw(space, t);
    let tol = POST_TOL * scale(space, t);
    let a = space.kernel();
    let eq = spectral_norm(&(&(a * &s) - &(&t.adjoint() * a)));
    if eq > tol {
        return Err(Error::Consistency(format!("A·T^♯ ≠ T*·A (residual {eq:.3e})")));
    }
    let comp = &CMatrix::identity(space.dim()) - space.proj_range();
    let rng = spectral_norm(&(&comp * &s));
    if rng > tol {
        return Err(Error::Consistency(format!("R(T^♯) ⊄ R(A) (residual {rng:.3e})")));
    }
    Ok(s)
}

/// `(T^♯)^♯`, which equals `P·T·P` with `P` the projector onto `R(A)`.
pub fn double_sharp(space: &SemiInnerSpace, t: &CMatrix) -> Result<CMatrix> {
    let s = sharp(space, t)?;
    sharp(space, &s)
}

/// `Re_A(T) = (T + T^♯)/2`.
pub fn re_a(space: &SemiInnerSpace, t: &CMatrix) -> Result<CMatrix> {
    let s = sharp(space, t)?;
    Ok((t + &s).scale_re(0.5))
}

/// `Im_A(T) = (T − T^♯)/(2i)`.
pub fn im_a(space: &SemiInnerSpace, t: &CMatrix) -> Result<CMatrix> {
    let s = sharp(space, t)?;
    Ok((t - &s).scale(C64::new(0.0, -0.5)))
}

/// Real and imaginary A-parts from one adjoint computation.
pub fn re_im_a(space: &SemiInnerSpace, t: &CMatrix) -> Result<(CMatrix, CMatrix)> {
    let s = sharp(space, t)?;
    Ok(((t + &s).scale_re(0.5), (t - &s).scale(-I * 0.5)))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OperatorClassFlags {
    pub member_ba: bool,
    pub member_ba_half: bool,
    pub a_selfadjoint: bool,
    pub a_positive: bool,
    pub a_normal: bool,
    pub a_isometry: bool,
    pub a_unitary: bool,
    /// Raw residual of every predicate that could be evaluated.
    pub residuals: BTreeMap<String, f64>,
}

/// Evaluates every class predicate. `rel_tol` (default [`CLASS_TOL`]) is
/// scaled by the natural size of each residual. Predicates that need the
/// A-adjoint are false, without a residual entry, when `T ∉ B_A`.
pub fn classify(space: &SemiInnerSpace, t: &CMatrix, rel_tol: Option<f64>) -> Result<OperatorClassFlags> {
    let m = membership(space, t)?;
    let rel = rel_tol.unwrap_or(CLASS_TOL);
    let a = space.kernel();
    let na = space.norm_a();
    let nt = spectral_norm(t);
    let mut residuals = BTreeMap::new();
    residuals.insert("membership_range".to_string(), m.range_residual);
    residuals.insert("membership_block".to_string(), m.block_residual);

    let at = a * t;
    let sa_res = spectral_norm(&(&at - &at.adjoint()));
    residuals.insert("a_selfadjoint".to_string(), sa_res);
    let a_selfadjoint = m.in_b_a && sa_res <= rel * (na * nt).max(1.0);

    let pos_min = herm_eigenvalues_unchecked(&at.hermitian_part())[0];
    residuals.insert("a_positive_min_eig".to_string(), pos_min);
    let a_positive = a_selfadjoint && pos_min >= -rel * (na * nt).max(1.0);

    let iso_scale = (na * nt * nt).max(na).max(1.0);
    let iso_res = spectral_norm(&(&(&t.adjoint() * &at) - a));
    residuals.insert("a_isometry".to_string(), iso_res);
    let a_isometry = m.in_b_a && iso_res <= rel * iso_scale;

    let (mut a_normal, mut a_unitary) = (false, false);
    if m.in_b_a {
        let s = sharp_raw(space, t);
        let comm = &(&s * t) - &(t * &s);
        let s_norm = spectral_norm(&s);
        let n_res = spectral_norm(&comm);
        residuals.insert("a_normal".to_string(), n_res);
        a_normal = n_res <= rel * (s_norm * nt).max(1.0);
        let sharp_iso = spectral_norm(&(&(&s.adjoint() * &(a * &s)) - a));
        residuals.insert("a_unitary_sharp_isometry".to_string(), sharp_iso);
        a_unitary = a_isometry && sharp_iso <= rel * (na * s_norm * s_norm).max(na).max(1.0);
    }

    Ok(OperatorClassFlags {
        member_ba: m.in_b_a,
        member_ba_half: m.in_b_a_half,
        a_selfadjoint,
        a_positive,
        a_normal,
        a_isometry,
        a_unitary,
        residuals,
    })
}
