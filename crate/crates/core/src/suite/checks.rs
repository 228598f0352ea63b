//! The registry: every statement as a named, executable check.

use serde::Serialize;

use crate::a_adjoint::{classify, double_sharp, membership, sharp};
use crate::block::{block_sharp_residual, involution_metrics, off_diag_radius, phi, psi, BlockSpace, BoundValue};
use crate::error::{Error, Result};
use crate::kernel::spectral_norm;
use crate::matrix::{c, CMatrix, CVector};
use crate::radius::{
    crawford, numerical_radius, omega_matrix, op_seminorm, seminorm_via_sqrt, sup_alpha_beta, RadiusResult, SweepConfig,
};
use crate::semi_space::SemiInnerSpace;
use crate::tilde::{intertwining_residual, reduce, tilde_homomorphism, tilde_sharp_is_adjoint};

use super::generate::{ClassReq, OpClass};
use super::{CheckResult, SlackPolicy};

/// Tolerance of the structural residuals, relative to the natural scale.
const STRUCT_TOL: f64 = 1e-9;
/// Relative tolerance of the transfer and four-way norm equalities.
const TRANSFER_TOL: f64 = 1e-8;
/// Relative tolerance of the involution closed forms.
const CLOSED_FORM_TOL: f64 = 1e-7;
/// Relative tolerance of class requirements on caller-supplied operators.
const REQ_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    Inequality,
    Equality,
    Structural,
}

/// A value with an a-priori bound on its numerical error.
#[derive(Clone, Copy, Debug)]
pub(crate) struct V {
    v: f64,
    e: f64,
}

impl V {
    fn exact(v: f64) -> V {
        V { v, e: 0.0 }
    }

    fn add(self, o: V) -> V {
        V { v: self.v + o.v, e: self.e + o.e }
    }

    fn sub(self, o: V) -> V {
        V { v: self.v - o.v, e: self.e + o.e }
    }

    fn scale(self, k: f64) -> V {
        V { v: k * self.v, e: k.abs() * self.e }
    }

    fn mul(self, o: V) -> V {
        V { v: self.v * o.v, e: self.v.abs() * o.e + o.v.abs() * self.e + self.e * o.e }
    }

    fn powi(self, k: i32) -> V {
        let a = self.v.abs();
        V { v: self.v.powi(k), e: (a + self.e).powi(k) - a.powi(k) }
    }

    fn sqrt(self) -> V {
        V { v: self.v.max(0.0).sqrt(), e: crate::block::sqrt_err(self.v, self.e) }
    }

    fn min(self, o: V) -> V {
        if o.v < self.v {
            o
        } else {
            self
        }
    }
}

impl From<RadiusResult> for V {
    fn from(r: RadiusResult) -> V {
        V { v: r.value, e: r.error_bound }
    }
}

impl From<BoundValue> for V {
    fn from(b: BoundValue) -> V {
        V { v: b.value, e: b.error_bound }
    }
}

#[derive(Clone, Copy, Debug)]
enum Rel {
    /// `lhs ≤ rhs` under the slack policy.
    Le,
    /// `|lhs − rhs|` within the slack policy.
    Eq,
    /// `|lhs − rhs| ≤ tol·max(1, |rhs|) + err`.
    EqRel(f64),
    /// `lhs` is a normalized residual that must not exceed the tolerance.
    Residual(f64),
}

#[derive(Clone, Debug)]
pub(crate) struct Part {
    name: &'static str,
    lhs: V,
    rhs: V,
    rel: Rel,
}

fn le(name: &'static str, lhs: V, rhs: V) -> Part {
    Part { name, lhs, rhs, rel: Rel::Le }
}

fn eq(name: &'static str, lhs: V, rhs: V) -> Part {
    Part { name, lhs, rhs, rel: Rel::Eq }
}

fn eq_rel(name: &'static str, lhs: V, rhs: V, tol: f64) -> Part {
    Part { name, lhs, rhs, rel: Rel::EqRel(tol) }
}

fn residual(name: &'static str, value: f64, scale: f64) -> Part {
    Part { name, lhs: V::exact(value / scale.max(1.0)), rhs: V::exact(0.0), rel: Rel::Residual(STRUCT_TOL) }
}

impl Part {
    /// `(margin, slack, pass)`.
    fn judge(&self, policy: &SlackPolicy) -> (f64, f64, bool) {
        let (l, r) = (self.lhs.v, self.rhs.v);
        let err = self.lhs.e + self.rhs.e;
        let (margin, slack) = match self.rel {
            Rel::Le => (r - l, policy.slack(r, err)),
            Rel::Eq => (-(l - r).abs(), policy.slack(r, err)),
            Rel::EqRel(tol) => (-(l - r).abs(), tol * r.abs().max(1.0) + err),
            Rel::Residual(tol) => (-l.abs(), tol),
        };
        let pass = margin.is_finite() && slack.is_finite() && margin >= -slack;
        (margin, slack, pass)
    }
}

pub(crate) struct Ctx {
    pub sweep: SweepConfig,
}

impl Ctx {
    fn nrm(&self, s: &SemiInnerSpace, t: &CMatrix) -> Result<V> {
        Ok(op_seminorm(s, t)?.into())
    }

    fn om(&self, s: &SemiInnerSpace, t: &CMatrix) -> Result<V> {
        Ok(numerical_radius(s, t, self.sweep)?.into())
    }

    fn cr(&self, s: &SemiInnerSpace, t: &CMatrix) -> Result<V> {
        Ok(crawford(s, t, self.sweep)?.into())
    }

    /// `‖T^♯T + TT^♯‖_A`.
    fn sym(&self, s: &SemiInnerSpace, t: &CMatrix) -> Result<V> {
        let ts = sharp(s, t)?;
        self.nrm(s, &(&(&ts * t) + &(t * &ts)))
    }
}

type Eval = fn(&Ctx, &SemiInnerSpace, &[CMatrix]) -> Result<Vec<Part>>;
type Requires = fn(&SemiInnerSpace, &[CMatrix]) -> Result<()>;

/// A registry entry.
pub struct CheckDef {
    pub name: &'static str,
    pub statement: &'static str,
    pub kind: CheckKind,
    /// Number of operators consumed.
    pub arity: usize,
    /// Generator classes for trial `i` of a campaign.
    pub classes: fn(usize) -> Vec<ClassReq>,
    requires: Requires,
    eval: Eval,
}

impl std::fmt::Debug for CheckDef {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CheckDef").field("name", &self.name).field("arity", &self.arity).finish()
    }
}

const CYCLE: [OpClass; 6] =
    [OpClass::Generic, OpClass::ASelfadjoint, OpClass::APositive, OpClass::ANormal, OpClass::AUnitary, OpClass::Nilpotent];

fn cyc(i: usize) -> ClassReq {
    CYCLE[i % CYCLE.len()].into()
}

fn one(i: usize) -> Vec<ClassReq> {
    vec![cyc(i)]
}

/// All 36 ordered class combinations over 36 consecutive trials.
fn two(i: usize) -> Vec<ClassReq> {
    vec![cyc(i), cyc(i + i / CYCLE.len())]
}

fn four(i: usize) -> Vec<ClassReq> {
    vec![cyc(i), cyc(i + 1 + i / 6), cyc(i + 2 + i / 36), cyc(i + 3)]
}

fn commuting(i: usize) -> Vec<ClassReq> {
    let p = [OpClass::CommutingPair, OpClass::DoubleCommutingPair, OpClass::UnitaryCommutingPair];
    vec![p[i % 3].into()]
}

fn double_commuting(i: usize) -> Vec<ClassReq> {
    let p = [OpClass::DoubleCommutingPair, OpClass::UnitaryCommutingPair];
    vec![p[i % 2].into()]
}

fn unitary_pair(_: usize) -> Vec<ClassReq> {
    vec![OpClass::UnitaryCommutingPair.into()]
}

fn selfadjoint(i: usize) -> Vec<ClassReq> {
    match i % 3 {
        0 => vec![OpClass::ASelfadjoint.into()],
        1 => vec![OpClass::APositive.into()],
        _ => vec![ClassReq::All(vec![OpClass::ASelfadjoint, OpClass::AUnitary])],
    }
}

fn normal_or_nilpotent(i: usize) -> Vec<ClassReq> {
    vec![if i % 2 == 0 { OpClass::ANormal } else { OpClass::Nilpotent }.into()]
}

fn range_invariant(i: usize) -> Vec<ClassReq> {
    let extra = [OpClass::Generic, OpClass::ANormal, OpClass::Nilpotent, OpClass::ASelfadjoint];
    vec![ClassReq::All(vec![OpClass::RangeInvariant, extra[i % 4]])]
}

// ---------------------------------------------------------------- requirements

fn violation(index: usize, class: &str) -> Error {
    Error::ClassViolation { index, class: class.to_string() }
}

fn req_bounded(s: &SemiInnerSpace, ops: &[CMatrix]) -> Result<()> {
    for t in ops {
        if !membership(s, t)?.in_b_a_half {
            return Err(Error::Unbounded);
        }
    }
    Ok(())
}

fn commute_ok(t: &CMatrix, u: &CMatrix) -> bool {
    spectral_norm(&(&(t * u) - &(u * t))) <= REQ_TOL * (spectral_norm(t) * spectral_norm(u)).max(1.0)
}

fn req_commuting(s: &SemiInnerSpace, ops: &[CMatrix]) -> Result<()> {
    req_bounded(s, ops)?;
    if !commute_ok(&ops[0], &ops[1]) {
        return Err(violation(1, "commuting_pair"));
    }
    Ok(())
}

fn req_double(s: &SemiInnerSpace, ops: &[CMatrix]) -> Result<()> {
    req_commuting(s, ops)?;
    if !commute_ok(&sharp(s, &ops[0])?, &ops[1]) {
        return Err(violation(1, "double_commuting_pair"));
    }
    Ok(())
}

fn req_unitary_commuting(s: &SemiInnerSpace, ops: &[CMatrix]) -> Result<()> {
    req_commuting(s, ops)?;
    let f = classify(s, &ops[0], Some(REQ_TOL))?;
    if !(f.a_unitary || f.a_isometry) {
        return Err(violation(0, "a_unitary"));
    }
    Ok(())
}

fn req_isometry_double(s: &SemiInnerSpace, ops: &[CMatrix]) -> Result<()> {
    req_double(s, ops)?;
    if !classify(s, &ops[0], Some(REQ_TOL))?.a_isometry {
        return Err(violation(0, "a_isometry"));
    }
    Ok(())
}

fn req_normal_commuting(s: &SemiInnerSpace, ops: &[CMatrix]) -> Result<()> {
    req_commuting(s, ops)?;
    if !classify(s, &ops[0], Some(REQ_TOL))?.a_normal {
        return Err(violation(0, "a_normal"));
    }
    Ok(())
}

fn req_selfadjoint(s: &SemiInnerSpace, ops: &[CMatrix]) -> Result<()> {
    req_bounded(s, ops)?;
    if !classify(s, &ops[0], Some(REQ_TOL))?.a_selfadjoint {
        return Err(violation(0, "a_selfadjoint"));
    }
    Ok(())
}

// ---------------------------------------------------------------- statements

fn refine1(x: &Ctx, s: &SemiInnerSpace, o: &[CMatrix]) -> Result<Vec<Part>> {
    let (w, n) = (x.om(s, &o[0])?, x.nrm(s, &o[0])?);
    Ok(vec![le("half_norm_le_omega", n.scale(0.5), w), le("omega_le_norm", w, n)])
}

fn apower(x: &Ctx, s: &SemiInnerSpace, o: &[CMatrix]) -> Result<Vec<Part>> {
    let t = &o[0];
    let w = x.om(s, t)?;
    let names = ["power_2", "power_3", "power_4"];
    let mut parts = Vec::new();
    let mut p = t * t;
    for (k, name) in (2..=4).zip(names) {
        parts.push(le(name, x.om(s, &p)?, w.powi(k)));
        p = &p * t;
    }
    Ok(parts)
}

fn kaisnew01(x: &Ctx, s: &SemiInnerSpace, o: &[CMatrix]) -> Result<Vec<Part>> {
    let t = &o[0];
    let rhs = x.nrm(s, t)?.add(x.nrm(s, &(t * t))?.sqrt()).scale(0.5);
    Ok(vec![le("omega", x.om(s, t)?, rhs)])
}

fn feki1_lo(x: &Ctx, s: &SemiInnerSpace, o: &[CMatrix]) -> Result<Vec<Part>> {
    let w = x.om(s, &o[0])?;
    Ok(vec![le("quarter_sym_le_omega_sq", x.sym(s, &o[0])?.scale(0.25), w.powi(2))])
}

fn feki1_hi(x: &Ctx, s: &SemiInnerSpace, o: &[CMatrix]) -> Result<Vec<Part>> {
    let w = x.om(s, &o[0])?;
    Ok(vec![le("omega_sq_le_half_sym", w.powi(2), x.sym(s, &o[0])?.scale(0.5))])
}

fn chain_remark(x: &Ctx, s: &SemiInnerSpace, o: &[CMatrix]) -> Result<Vec<Part>> {
    let t = &o[0];
    let (n, w) = (x.nrm(s, t)?, x.om(s, t)?);
    let root = x.sym(s, t)?.sqrt();
    let upper = root.scale(std::f64::consts::FRAC_1_SQRT_2);
    Ok(vec![
        le("half_norm", n.scale(0.5), root.scale(0.5)),
        le("lower", root.scale(0.5), w),
        le("upper", w, upper),
        le("norm", upper, n),
    ])
}

fn corr2020_lo(x: &Ctx, s: &SemiInnerSpace, o: &[CMatrix]) -> Result<Vec<Part>> {
    let t = &o[0];
    let lhs = x.sym(s, t)?.add(x.cr(s, &(t * t))?.scale(2.0)).sqrt().scale(0.5);
    Ok(vec![le("crawford_bound", lhs, x.om(s, t)?)])
}

fn corr2020_hi(x: &Ctx, s: &SemiInnerSpace, o: &[CMatrix]) -> Result<Vec<Part>> {
    let t = &o[0];
    let sym = x.sym(s, t)?;
    let inner = sym.add(x.om(s, &(t * t))?.scale(2.0));
    Ok(vec![
        le("radius_bound", x.om(s, t)?, inner.sqrt().scale(0.5)),
        // the squared bound never exceeds the one of the second feki1 inequality
        le("refines_feki1_hi", inner.scale(0.25), sym.scale(0.5)),
    ])
}

fn r62(x: &Ctx, s: &SemiInnerSpace, o: &[CMatrix]) -> Result<Vec<Part>> {
    let (t, u) = (&o[0], &o[1]);
    let b: V = off_diag_radius(s, t, u, x.sweep)?.into();
    let p1: V = psi(s, t, u, x.sweep)?.into();
    let p2: V = psi(s, u, t, x.sweep)?.into();
    let half_sum = x.nrm(s, t)?.add(x.nrm(s, u)?).scale(0.5);
    Ok(vec![le("psi_ts", b, p1), le("psi_st", b, p2), le("min_psi_le_half_norm_sum", p1.min(p2), half_sum)])
}

fn r61(x: &Ctx, s: &SemiInnerSpace, o: &[CMatrix]) -> Result<Vec<Part>> {
    let (t, u) = (&o[0], &o[1]);
    let b: V = off_diag_radius(s, t, u, x.sweep)?.into();
    Ok(vec![le("phi_ts", phi(s, t, u, x.sweep)?.into(), b), le("phi_st", phi(s, u, t, x.sweep)?.into(), b)])
}

fn ppp(x: &Ctx, s: &SemiInnerSpace, o: &[CMatrix]) -> Result<Vec<Part>> {
    let t = &o[0];
    Ok(vec![eq("off_diag_equals_omega", off_diag_radius(s, t, t, x.sweep)?.into(), x.om(s, t)?)])
}

fn a7ad1(x: &Ctx, s: &SemiInnerSpace, o: &[CMatrix]) -> Result<Vec<Part>> {
    let (t, u) = (&o[0], &o[1]);
    Ok(vec![le("product", x.om(s, &(t * u))?, x.om(s, t)?.mul(x.om(s, u)?).scale(4.0))])
}

fn a7ad2(x: &Ctx, s: &SemiInnerSpace, o: &[CMatrix]) -> Result<Vec<Part>> {
    let (t, u) = (&o[0], &o[1]);
    Ok(vec![le("commuting_product", x.om(s, &(t * u))?, x.om(s, t)?.mul(x.om(s, u)?).scale(2.0))])
}

fn jdid(x: &Ctx, s: &SemiInnerSpace, o: &[CMatrix]) -> Result<Vec<Part>> {
    let (t, u) = (&o[0], &o[1]);
    let anti = &(t * u) + &(u * t);
    Ok(vec![le("anticommutator", x.om(s, &anti)?, x.om(s, t)?.mul(x.om(s, u)?).scale(4.0))])
}

fn t215(x: &Ctx, s: &SemiInnerSpace, o: &[CMatrix]) -> Result<Vec<Part>> {
    let (t1, t2, s1, s2) = (&o[0], &o[1], &o[2], &o[3]);
    let lt = x.nrm(s, &(&(t1 * &sharp(s, t1)?) + &(&sharp(s, t2)? * t2)))?;
    let ls = x.nrm(s, &(&(&sharp(s, s1)? * s1) + &(s2 * &sharp(s, s2)?)))?;
    let rhs = lt.sqrt().mul(ls.sqrt());
    let (a, b) = (t1 * s1, s2 * t2);
    Ok(vec![le("plus", x.om(s, &(&a + &b))?, rhs), le("minus", x.om(s, &(&a - &b))?, rhs)])
}

fn commu223(x: &Ctx, s: &SemiInnerSpace, o: &[CMatrix]) -> Result<Vec<Part>> {
    let (t, u) = (&o[0], &o[1]);
    let m1 = x.nrm(s, t)?.mul(x.om(s, u)?);
    let m2 = x.nrm(s, u)?.mul(x.om(s, t)?);
    let rhs = m1.min(m2).scale(2.0 * std::f64::consts::SQRT_2);
    let (a, b) = (t * u, u * t);
    Ok(vec![le("plus", x.om(s, &(&a + &b))?, rhs), le("minus", x.om(s, &(&a - &b))?, rhs)])
}

fn fong_sharp(x: &Ctx, s: &SemiInnerSpace, o: &[CMatrix]) -> Result<Vec<Part>> {
    let (t, u) = (&o[0], &o[1]);
    let rhs = x.nrm(s, t)?.mul(x.om(s, u)?).scale(2.0);
    let (a, b) = (t * u, u * &sharp(s, t)?);
    Ok(vec![le("plus", x.om(s, &(&a + &b))?, rhs), le("minus", x.om(s, &(&a - &b))?, rhs)])
}

fn omprovenew_lo(x: &Ctx, s: &SemiInnerSpace, o: &[CMatrix]) -> Result<Vec<Part>> {
    let t = &o[0];
    Ok(vec![le("square", x.nrm(s, &(t * t))?.scale(2.0), x.sym(s, t)?)])
}

fn omprovenew_hi(x: &Ctx, s: &SemiInnerSpace, o: &[CMatrix]) -> Result<Vec<Part>> {
    let t = &o[0];
    let rhs = x.nrm(s, &(t * t))?.add(x.nrm(s, t)?.powi(2));
    Ok(vec![le("sum", x.sym(s, t)?, rhs)])
}

fn refined_kaisnew(x: &Ctx, s: &SemiInnerSpace, o: &[CMatrix]) -> Result<Vec<Part>> {
    let t = &o[0];
    let t2 = t * t;
    let (n, n2) = (x.nrm(s, t)?, x.nrm(s, &t2)?);
    let mid = n2.add(n.powi(2)).add(x.om(s, &t2)?.scale(2.0)).sqrt().scale(0.5);
    Ok(vec![le("omega_le_mid", x.om(s, t)?, mid), le("mid_le_kaisnew01", mid, n.add(n2.sqrt()).scale(0.5))])
}

fn normloid_iff(x: &Ctx, s: &SemiInnerSpace, o: &[CMatrix]) -> Result<Vec<Part>> {
    let t = &o[0];
    let t2 = t * t;
    let (n, n2, sym) = (x.nrm(s, t)?, x.nrm(s, &t2)?, x.sym(s, t)?);
    let nsq = n.powi(2);
    // ‖T‖² − ½N is squeezed between ½(‖T‖² − ‖T²‖) and ‖T‖² − ‖T²‖
    let eq_gap = nsq.sub(sym.scale(0.5));
    let premise_gap = nsq.sub(n2);
    let mut parts = vec![le("only_if", premise_gap.scale(0.5), eq_gap), le("if", eq_gap, premise_gap)];
    let flags = classify(s, t, Some(REQ_TOL))?;
    if flags.a_normal {
        parts.push(eq("normal_square_norm", n2, nsq));
        parts.push(eq("normal_equality", sym.scale(0.5).sqrt(), n));
    }
    let a = s.kernel();
    let nt = spectral_norm(t);
    if spectral_norm(&(a * &t2)) <= STRUCT_TOL * (s.norm_a() * nt * nt).max(1.0) {
        parts.push(eq("square_zero_equality", sym.sqrt(), n));
    }
    Ok(parts)
}

fn eqnew15(x: &Ctx, s: &SemiInnerSpace, o: &[CMatrix]) -> Result<Vec<Part>> {
    let t = &o[0];
    let rhs = x.nrm(s, t)?.powi(2).add(x.om(s, &(t * t))?).scale(0.5);
    Ok(vec![le("omega_sq", x.om(s, t)?.powi(2), rhs)])
}

fn hooknew02(x: &Ctx, s: &SemiInnerSpace, o: &[CMatrix]) -> Result<Vec<Part>> {
    let (u, t) = (&o[0], &o[1]);
    Ok(vec![le("unitary_product", x.om(s, &(u * t))?, x.om(s, t)?)])
}

fn hooknew02222(x: &Ctx, s: &SemiInnerSpace, o: &[CMatrix]) -> Result<Vec<Part>> {
    let (t, u) = (&o[0], &o[1]);
    let (w_ts, w_st) = (x.om(s, &(t * u))?, x.om(s, &(u * t))?);
    Ok(vec![
        le("ts", w_ts, x.om(s, u)?.mul(x.nrm(s, t)?)),
        le("st", w_st, x.om(s, t)?.mul(x.nrm(s, u)?)),
    ])
}

fn isometry_corr(x: &Ctx, s: &SemiInnerSpace, o: &[CMatrix]) -> Result<Vec<Part>> {
    let (t, u) = (&o[0], &o[1]);
    Ok(vec![le("isometry_product", x.om(s, &(t * u))?, x.om(s, u)?)])
}

fn hook02000(x: &Ctx, s: &SemiInnerSpace, o: &[CMatrix]) -> Result<Vec<Part>> {
    let (t, u) = (&o[0], &o[1]);
    Ok(vec![le("normal_product", x.om(s, &(t * u))?, x.om(s, t)?.mul(x.om(s, u)?))])
}

fn aself1_eq(x: &Ctx, s: &SemiInnerSpace, o: &[CMatrix]) -> Result<Vec<Part>> {
    Ok(vec![eq("norm_equals_omega", x.nrm(s, &o[0])?, x.om(s, &o[0])?)])
}

fn diez_eq(x: &Ctx, s: &SemiInnerSpace, o: &[CMatrix]) -> Result<Vec<Part>> {
    let t = &o[0];
    let ts = sharp(s, t)?;
    let nsq = x.nrm(s, t)?.powi(2);
    Ok(vec![
        eq_rel("sharp_t", x.nrm(s, &(&ts * t))?, nsq, TRANSFER_TOL),
        eq_rel("t_sharp", x.nrm(s, &(t * &ts))?, nsq, TRANSFER_TOL),
        eq_rel("sharp_norm_sq", x.nrm(s, &ts)?.powi(2), nsq, TRANSFER_TOL),
    ])
}

fn lm4_residual(_: &Ctx, s: &SemiInnerSpace, o: &[CMatrix]) -> Result<Vec<Part>> {
    let bs = BlockSpace::new(s.clone());
    let res = block_sharp_residual(&bs, &o[0], &o[1], &o[2], &o[3])?;
    let mut scale = 1.0_f64;
    for t in &o[..4] {
        scale = scale.max(spectral_norm(&sharp(s, t)?));
    }
    Ok(vec![residual("block_sharp", res, scale)])
}

fn lm3_residual(_: &Ctx, s: &SemiInnerSpace, o: &[CMatrix]) -> Result<Vec<Part>> {
    let ts = sharp(s, &o[0])?;
    let a = s.kernel();
    let ats = a * &ts;
    let ns = spectral_norm(&ts);
    Ok(vec![
        residual("sharp_is_a_selfadjoint", spectral_norm(&(&ats - &ats.adjoint())), s.norm_a() * ns),
        residual("sharp_fixed_by_sharp", spectral_norm(&(&sharp(s, &ts)? - &ts)), ns),
    ])
}

fn lr2_transfer(x: &Ctx, s: &SemiInnerSpace, o: &[CMatrix]) -> Result<Vec<Part>> {
    let t = &o[0];
    let b = reduce(s, t)?.b;
    let w_b: V = omega_matrix(&b, x.sweep)?.into();
    let w_raw: V = sup_alpha_beta(s, t, x.sweep)?.into();
    Ok(vec![
        eq_rel("seminorm", V::exact(seminorm_via_sqrt(s, t)), V::exact(spectral_norm(&b)), TRANSFER_TOL),
        eq_rel("omega", w_raw, w_b, TRANSFER_TOL),
    ])
}

fn lr3_residual(_: &Ctx, s: &SemiInnerSpace, o: &[CMatrix]) -> Result<Vec<Part>> {
    let t = &o[0];
    let b = reduce(s, t)?.b;
    let nb = spectral_norm(&b);
    let bb = reduce(s, &double_sharp(s, t)?)?.b;
    Ok(vec![
        residual("sharp_reduces_to_adjoint", tilde_sharp_is_adjoint(s, t)?, nb),
        residual("double_sharp_reduces_to_t", spectral_norm(&(&bb - &b)), nb),
    ])
}

fn prosum_residual(_: &Ctx, s: &SemiInnerSpace, o: &[CMatrix]) -> Result<Vec<Part>> {
    let (t, u) = (&o[0], &o[1]);
    let red = reduce(s, t)?;
    let (nt, nu) = (spectral_norm(&red.b), spectral_norm(&reduce(s, u)?.b));
    let (mul, add) = tilde_homomorphism(s, t, u)?;
    let n = s.dim();
    let probe = CVector::from_fn(n, |i, _| c(1.0 + i as f64, 0.5 - 0.25 * i as f64));
    let inter = intertwining_residual(s, &red, t, &probe)?;
    let probe_scale = s.norm_a() * spectral_norm(t) * probe.norm();
    Ok(vec![
        residual("product", mul, nt * nu),
        residual("sum", add, nt + nu),
        residual("intertwining", inter, probe_scale),
    ])
}

fn jdidddd_eq(x: &Ctx, s: &SemiInnerSpace, o: &[CMatrix]) -> Result<Vec<Part>> {
    let (t, u) = (&o[0], &o[1]);
    let bs = BlockSpace::new(s.clone());
    let n = s.dim();
    let z = CMatrix::zeros(n, n);
    let direct: V = numerical_radius(bs.dbl(), &CMatrix::from_blocks(&z, t, u, &z), x.sweep)?.into();
    let ts: V = off_diag_radius(s, t, u, x.sweep)?.into();
    let st: V = off_diag_radius(s, u, t, x.sweep)?.into();
    Ok(vec![eq("formula_equals_direct", ts, direct), eq("swap_symmetric", st, ts)])
}

fn involution(x: &Ctx, s: &SemiInnerSpace, o: &[CMatrix]) -> Result<Vec<Part>> {
    let m = involution_metrics(&BlockSpace::new(s.clone()), &o[0], x.sweep)?;
    let (d, cl) = (m.direct, m.closed);
    let w = V { v: d.omega, e: m.error_bound };
    let norm = V::exact(d.norm);
    Ok(vec![
        eq_rel("omega", w, V::exact(cl.omega), CLOSED_FORM_TOL),
        eq_rel("norm", norm, V::exact(cl.norm), CLOSED_FORM_TOL),
        eq_rel("re_norm", V::exact(d.re_norm), V::exact(cl.re_norm), CLOSED_FORM_TOL),
        eq_rel("im_norm", V::exact(d.im_norm), V::exact(cl.im_norm), CLOSED_FORM_TOL),
        eq_rel("identity", w, V::exact(0.5 * (d.norm + 1.0 / d.norm)), CLOSED_FORM_TOL),
    ])
}

macro_rules! def {
    ($name:literal, $kind:ident, $arity:literal, $classes:ident, $req:ident, $eval:ident, $stmt:literal) => {
        CheckDef {
            name: $name,
            statement: $stmt,
            kind: CheckKind::$kind,
            arity: $arity,
            classes: $classes,
            requires: $req,
            eval: $eval,
        }
    };
}

static REGISTRY: [CheckDef; 35] = [
    def!("refine1", Inequality, 1, one, req_bounded, refine1, "½‖T‖_A ≤ ω_A(T) ≤ ‖T‖_A"),
    def!("apower", Inequality, 1, one, req_bounded, apower, "ω_A(Tⁿ) ≤ ω_A(T)ⁿ for n = 2, 3, 4"),
    def!("kaisnew01", Inequality, 1, one, req_bounded, kaisnew01, "ω_A(T) ≤ ½(‖T‖_A + ‖T²‖_A^{1/2})"),
    def!("feki1_lo", Inequality, 1, one, req_bounded, feki1_lo, "¼‖T^♯T + TT^♯‖_A ≤ ω_A(T)²"),
    def!("feki1_hi", Inequality, 1, one, req_bounded, feki1_hi, "ω_A(T)² ≤ ½‖T^♯T + TT^♯‖_A"),
    def!(
        "chain_remark",
        Inequality,
        1,
        one,
        req_bounded,
        chain_remark,
        "½‖T‖_A ≤ ½√‖TT^♯ + T^♯T‖_A ≤ ω_A(T) ≤ (√2/2)√‖TT^♯ + T^♯T‖_A ≤ ‖T‖_A"
    ),
    def!(
        "corr2020_lo",
        Inequality,
        1,
        one,
        req_bounded,
        corr2020_lo,
        "½√(‖TT^♯ + T^♯T‖_A + 2c_A(T²)) ≤ ω_A(T)"
    ),
    def!(
        "corr2020_hi",
        Inequality,
        1,
        one,
        req_bounded,
        corr2020_hi,
        "ω_A(T) ≤ ½√(‖TT^♯ + T^♯T‖_A + 2ω_A(T²)), a refinement of ω_A(T)² ≤ ½‖T^♯T + TT^♯‖_A"
    ),
    def!(
        "r62",
        Inequality,
        2,
        two,
        req_bounded,
        r62,
        "ω_𝔸([[0, T], [S, 0]]) ≤ min{Ψ_A(T, S), Ψ_A(S, T)} ≤ (‖T‖_A + ‖S‖_A)/2"
    ),
    def!("r61", Inequality, 2, two, req_bounded, r61, "ω_𝔸([[0, T], [S, 0]]) ≥ max{Φ_A(T, S), Φ_A(S, T)}"),
    def!("ppp", Equality, 1, one, req_bounded, ppp, "ω_𝔸([[0, T], [T, 0]]) = ω_A(T)"),
    def!("a7ad1", Inequality, 2, two, req_bounded, a7ad1, "ω_A(TS) ≤ 4ω_A(T)ω_A(S)"),
    def!("a7ad2", Inequality, 2, commuting, req_commuting, a7ad2, "TS = ST ⇒ ω_A(TS) ≤ 2ω_A(T)ω_A(S)"),
    def!("jdid", Inequality, 2, two, req_bounded, jdid, "ω_A(TS + ST) ≤ 4ω_A(T)ω_A(S)"),
    def!(
        "t215",
        Inequality,
        4,
        four,
        req_bounded,
        t215,
        "ω_A(T₁S₁ ± S₂T₂) ≤ √‖T₁T₁^♯ + T₂^♯T₂‖_A·√‖S₁^♯S₁ + S₂S₂^♯‖_A"
    ),
    def!(
        "commu223",
        Inequality,
        2,
        two,
        req_bounded,
        commu223,
        "ω_A(TS ± ST) ≤ 2√2·min{‖T‖_A ω_A(S), ‖S‖_A ω_A(T)}"
    ),
    def!("fong_sharp", Inequality, 2, two, req_bounded, fong_sharp, "ω_A(TS ± ST^♯) ≤ 2‖T‖_A ω_A(S)"),
    def!("omprovenew_lo", Inequality, 1, one, req_bounded, omprovenew_lo, "2‖T²‖_A ≤ ‖T^♯T + TT^♯‖_A"),
    def!("omprovenew_hi", Inequality, 1, one, req_bounded, omprovenew_hi, "‖T^♯T + TT^♯‖_A ≤ ‖T²‖_A + ‖T‖_A²"),
    def!(
        "refined_kaisnew",
        Inequality,
        1,
        one,
        req_bounded,
        refined_kaisnew,
        "ω_A(T) ≤ ½√(‖T²‖_A + ‖T‖_A² + 2ω_A(T²)) ≤ ½(‖T‖_A + ‖T²‖_A^{1/2})"
    ),
    def!(
        "normloid_iff",
        Inequality,
        1,
        normal_or_nilpotent,
        req_bounded,
        normloid_iff,
        "‖T‖_A = (√2/2)√‖TT^♯ + T^♯T‖_A ⇔ ‖T²‖_A = ‖T‖_A²; AT² = 0 ⇒ ‖T‖_A = √‖TT^♯ + T^♯T‖_A"
    ),
    def!("eqnew15", Inequality, 1, one, req_bounded, eqnew15, "ω_A(T)² ≤ ½(‖T‖_A² + ω_A(T²))"),
    def!(
        "hooknew02",
        Inequality,
        2,
        unitary_pair,
        req_unitary_commuting,
        hooknew02,
        "U A-unitary, UT = TU ⇒ ω_A(UT) ≤ ω_A(T)"
    ),
    def!(
        "hooknew02222",
        Inequality,
        2,
        double_commuting,
        req_double,
        hooknew02222,
        "TS = ST, T^♯S = ST^♯ ⇒ ω_A(TS) ≤ ω_A(S)‖T‖_A and ω_A(ST) ≤ ω_A(T)‖S‖_A"
    ),
    def!(
        "isometry_corr",
        Inequality,
        2,
        unitary_pair,
        req_isometry_double,
        isometry_corr,
        "T A-isometry, TS = ST, T^♯S = ST^♯ ⇒ ω_A(TS) ≤ ω_A(S)"
    ),
    def!(
        "hook02000",
        Inequality,
        2,
        double_commuting,
        req_normal_commuting,
        hook02000,
        "T A-normal, TS = ST ⇒ ω_A(TS) ≤ ω_A(T)ω_A(S)"
    ),
    def!("aself1_eq", Equality, 1, selfadjoint, req_selfadjoint, aself1_eq, "T A-selfadjoint ⇒ ‖T‖_A = ω_A(T)"),
    def!(
        "diez_eq",
        Equality,
        1,
        one,
        req_bounded,
        diez_eq,
        "‖T^♯T‖_A = ‖TT^♯‖_A = ‖T‖_A² = ‖T^♯‖_A²"
    ),
    def!(
        "lm4_residual",
        Structural,
        4,
        four,
        req_bounded,
        lm4_residual,
        "[[T₁₁, T₁₂], [T₂₁, T₂₂]]^♯ = [[T₁₁^♯, T₂₁^♯], [T₁₂^♯, T₂₂^♯]] over 𝔸 = diag(A, A)"
    ),
    def!(
        "lm3_residual",
        Structural,
        1,
        selfadjoint,
        req_selfadjoint,
        lm3_residual,
        "T A-selfadjoint ⇒ T^♯ A-selfadjoint and (T^♯)^♯ = T^♯"
    ),
    def!(
        "lr2_transfer",
        Equality,
        1,
        one,
        req_bounded,
        lr2_transfer,
        "‖T‖_A = ‖T̃‖ and ω_A(T) = ω(T̃), each side computed independently"
    ),
    def!("lr3_residual", Structural, 1, one, req_bounded, lr3_residual, "(T^♯)~ = (T̃)* and ((T^♯)^♯)~ = T̃"),
    def!(
        "prosum_residual",
        Structural,
        2,
        two,
        req_bounded,
        prosum_residual,
        "(XY)~ = X̃Ỹ, (X + Y)~ = X̃ + Ỹ, and Z_A T = T̃ Z_A"
    ),
    def!(
        "jdidddd_eq",
        Equality,
        2,
        two,
        req_bounded,
        jdidddd_eq,
        "ω_𝔸([[0, T], [S, 0]]) = ½ sup_θ ‖e^{iθ}T + e^{−iθ}S^♯‖_A"
    ),
    def!(
        "involution",
        Equality,
        1,
        range_invariant,
        req_bounded,
        involution,
        "𝕋 = [[I, T], [0, −I]] with R(A) T-invariant: ω_𝔸(𝕋) = ½√(‖T‖_A² + 4) = ½(‖𝕋‖_𝔸 + ‖𝕋‖_𝔸⁻¹), ‖Re_𝔸(𝕋)‖ = ω_𝔸(𝕋), ‖Im_𝔸(𝕋)‖ = ½(‖𝕋‖ − ‖𝕋‖⁻¹)"
    ),
];

pub fn registry() -> &'static [CheckDef] {
    &REGISTRY
}

pub fn check_names() -> Vec<&'static str> {
    REGISTRY.iter().map(|d| d.name).collect()
}

pub fn find_check(name: &str) -> Result<&'static CheckDef> {
    REGISTRY.iter().find(|d| d.name == name).ok_or_else(|| Error::UnknownCheck(name.to_string()))
}

impl CheckDef {
    /// Evaluates the check on caller-supplied operators after verifying its
    /// class requirements. The result reports the worst part.
    pub fn run(
        &self,
        space: &SemiInnerSpace,
        ops: &[CMatrix],
        sweep: SweepConfig,
        policy: &SlackPolicy,
    ) -> Result<CheckResult> {
        if ops.len() < self.arity {
            return Err(Error::InvalidArgument(format!("{} needs {} operators, got {}", self.name, self.arity, ops.len())));
        }
        let ops = &ops[..self.arity];
        (self.requires)(space, ops)?;
        let parts = (self.eval)(&Ctx { sweep }, space, ops)?;
        let mut worst: Option<CheckResult> = None;
        let mut all_pass = true;
        for p in &parts {
            let (margin, slack, pass) = p.judge(policy);
            all_pass &= pass;
            let r = CheckResult {
                name: self.name.to_string(),
                part: p.name.to_string(),
                lhs: p.lhs.v,
                rhs: p.rhs.v,
                margin,
                slack,
                pass,
                instance: None,
            };
            let worse = match &worst {
                None => true,
                Some(w) => !(r.headroom() >= w.headroom()),
            };
            if worse {
                worst = Some(r);
            }
        }
        let mut out = worst.expect("every check has at least one part");
        out.pass = all_pass;
        Ok(out)
    }
}

/// Looks up `name` and runs it; see [`CheckDef::run`].
pub fn run_check(
    name: &str,
    space: &SemiInnerSpace,
    ops: &[CMatrix],
    sweep: SweepConfig,
    policy: &SlackPolicy,
) -> Result<CheckResult> {
    find_check(name)?.run(space, ops, sweep, policy)
}
