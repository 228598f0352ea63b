//! Instances on which the inequalities are attained.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::a_adjoint::sharp;
use crate::block::{involution_metrics, off_diag_radius, BlockSpace};
use crate::error::Result;
use crate::matrix::{c, CMatrix};
use crate::radius::{numerical_radius, op_seminorm, SweepConfig};
use crate::random::log_uniform;
use crate::semi_space::SemiInnerSpace;

use super::generate::{generate, ClassReq, InstanceSpec, OpClass};
use super::CheckResult;

/// Relative tolerance of every equality scenario.
pub const SHARPNESS_TOL: f64 = 1e-7;

fn equality(name: &str, part: &str, lhs: f64, rhs: f64, err: f64, instance: Option<InstanceSpec>) -> CheckResult {
    let margin = -(lhs - rhs).abs();
    let slack = SHARPNESS_TOL * lhs.abs().max(rhs.abs()).max(1.0) + err;
    CheckResult {
        name: name.to_string(),
        part: part.to_string(),
        lhs,
        rhs,
        margin,
        slack,
        pass: margin.is_finite() && margin >= -slack,
        instance,
    }
}

/// `ω_A(T)² = ½‖T^♯T + TT^♯‖_A`, attained by A-normal `T`.
pub fn normal_scenario(space: &SemiInnerSpace, t: &CMatrix, cfg: SweepConfig) -> Result<CheckResult> {
    let w = numerical_radius(space, t, cfg)?;
    let ts = sharp(space, t)?;
    let sym = op_seminorm(space, &(&(&ts * t) + &(t * &ts)))?;
    let err = 2.0 * w.value * w.error_bound + w.error_bound.powi(2) + 0.5 * sym.error_bound;
    Ok(equality("feki1_hi_equality", "omega_sq_vs_half_sym", w.value * w.value, 0.5 * sym.value, err, None))
}

/// `¼‖T^♯T + TT^♯‖_A = ω_A(T)²` for `A = αI` and the elementary nilpotent.
pub fn nilpotent_scenario(alpha: f64, cfg: SweepConfig) -> Result<CheckResult> {
    let space = SemiInnerSpace::new(&CMatrix::identity(2).scale_re(alpha))?;
    let t = CMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
    let w = numerical_radius(&space, &t, cfg)?;
    let ts = sharp(&space, &t)?;
    let sym = op_seminorm(&space, &(&(&ts * &t) + &(&t * &ts)))?;
    let err = 2.0 * w.value * w.error_bound + w.error_bound.powi(2) + 0.25 * sym.error_bound;
    Ok(equality("feki1_lo_equality", "quarter_sym_vs_omega_sq", 0.25 * sym.value, w.value * w.value, err, None))
}

/// `‖T‖_A = ω_A(T)` for A-selfadjoint `T`.
pub fn selfadjoint_scenario(space: &SemiInnerSpace, t: &CMatrix, cfg: SweepConfig) -> Result<CheckResult> {
    let n = op_seminorm(space, t)?;
    let w = numerical_radius(space, t, cfg)?;
    Ok(equality("aself1_equality", "norm_vs_omega", n.value, w.value, n.error_bound + w.error_bound, None))
}

/// `ω_𝔸(𝕋) = ½(‖𝕋‖_𝔸 + ‖𝕋‖_𝔸⁻¹)` for `𝕋 = [[I, T], [0, −I]]`, together with
/// the closed forms in `‖T‖_A`; the worst of the five is reported.
pub fn involution_scenario(space: &SemiInnerSpace, t: &CMatrix, cfg: SweepConfig) -> Result<CheckResult> {
    let m = involution_metrics(&BlockSpace::new(space.clone()), t, cfg)?;
    let (d, cl) = (m.direct, m.closed);
    let e = m.error_bound;
    let candidates = [
        equality("involution_identity", "omega_vs_norm_identity", d.omega, 0.5 * (d.norm + 1.0 / d.norm), e, None),
        equality("involution_identity", "omega_closed_form", d.omega, cl.omega, e, None),
        equality("involution_identity", "norm_closed_form", d.norm, cl.norm, 0.0, None),
        equality("involution_identity", "re_norm_closed_form", d.re_norm, cl.re_norm, 0.0, None),
        equality("involution_identity", "im_norm_closed_form", d.im_norm, cl.im_norm, 0.0, None),
    ];
    let all_pass = candidates.iter().all(|r| r.pass);
    let mut worst = candidates.into_iter().min_by(|a, b| a.headroom().total_cmp(&b.headroom())).expect("nonempty");
    worst.pass = all_pass;
    Ok(worst)
}

/// `ω_𝔸([[0, T], [T, 0]]) = ω_A(T)`.
pub fn ppp_scenario(space: &SemiInnerSpace, t: &CMatrix, cfg: SweepConfig) -> Result<CheckResult> {
    let b = off_diag_radius(space, t, t, cfg)?;
    let w = numerical_radius(space, t, cfg)?;
    Ok(equality("ppp_equality", "off_diag_vs_omega", b.value, w.value, b.error_bound + w.error_bound, None))
}

fn with_spec(mut r: CheckResult, spec: &InstanceSpec) -> CheckResult {
    r.instance = Some(spec.clone());
    r
}

/// The five fixed equality scenarios:
/// (a) `T = diag(1, i)` over a random diagonal positive definite `A`;
/// (b) `A = 2I`, `T` the elementary nilpotent;
/// (c) a random A-selfadjoint `T`;
/// (d) the involution matrix of a random `T` leaving `R(A)` invariant, `A` singular;
/// (e) `[[0, T], [T, 0]]` for a random `T`.
pub fn sharpness_scenarios(cfg: SweepConfig) -> Result<Vec<CheckResult>> {
    let mut out = Vec::with_capacity(5);

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let d = [log_uniform(&mut rng, 1e-2, 1e2), log_uniform(&mut rng, 1e-2, 1e2)];
    let space = SemiInnerSpace::new(&CMatrix::from_real_diag(&d))?;
    let t = CMatrix::from_diag(&[c(1.0, 0.0), c(0.0, 1.0)]);
    out.push(normal_scenario(&space, &t, cfg)?);

    out.push(nilpotent_scenario(2.0, cfg)?);

    let spec = InstanceSpec::new(0x5eed_0003, 4, 3, &[OpClass::ASelfadjoint]);
    let inst = generate(&spec)?;
    out.push(with_spec(selfadjoint_scenario(&inst.space, &inst.ops[0], cfg)?, &spec));

    let spec = InstanceSpec {
        seed: 0x5eed_0004,
        dim: 4,
        rank: 2,
        classes: vec![ClassReq::All(vec![OpClass::RangeInvariant])],
    };
    let inst = generate(&spec)?;
    out.push(with_spec(involution_scenario(&inst.space, &inst.ops[0], cfg)?, &spec));

    let spec = InstanceSpec::new(0x5eed_0005, 3, 2, &[OpClass::Generic]);
    let inst = generate(&spec)?;
    out.push(with_spec(ppp_scenario(&inst.space, &inst.ops[0], cfg)?, &spec));

    Ok(out)
}
