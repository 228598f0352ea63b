//! Class-constrained random instances.
//!
//! `A = Q·diag(d, 0)·Q*` with `Q` Haar and `d` log-uniform on `[1e-2, 1e2]`.
//! Every operator is `Q·M·Q*` where `M` is assembled in the logical order
//! (range of `A` first, null space second):
//!
//! ```text
//!     M = [ D^{-1/2}·B·D^{1/2}   0  ]
//!         [ M21                 M22 ]
//! ```
//!
//! The zero block is exactly `T(N(A)) ⊆ N(A)`, and `B` is the reduced
//! operator `T̃` up to a diagonal unitary. The classes are properties of
//! `B` (Hermitian, positive, normal, unitary, square-zero), except that
//! A-normality also forces `M21 = 0`. Each produced operator is re-checked
//! with [`classify`] before it is handed out.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::a_adjoint::{classify, sharp};
use crate::block::invariance_residual;
use crate::error::{Error, Result};
use crate::kernel::spectral_norm;
use crate::matrix::{c, CMatrix, C64};
use crate::random::{complex_gaussian, gaussian_hermitian, gaussian_matrix, haar_unitary, log_uniform, unit_phase};
use crate::semi_space::SemiInnerSpace;

pub const MAX_DIM: usize = 32;

/// Relative tolerance of the structural re-checks on generated operators.
const GEN_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OpClass {
    Generic,
    ASelfadjoint,
    APositive,
    ANormal,
    AIsometry,
    AUnitary,
    /// `T` nilpotent with `AT² = 0`.
    Nilpotent,
    /// `R(A)` is `T`-invariant (and so is `N(A)`).
    RangeInvariant,
    /// Two operators: `T ∈ B_A` and `S` a polynomial in `T`.
    CommutingPair,
    /// Two operators: `T` A-normal, `TS = ST` and `T^♯S = ST^♯`.
    DoubleCommutingPair,
    /// Two operators: `U` A-unitary, `UT = TU` and `U^♯T = TU^♯`.
    UnitaryCommutingPair,
}

impl OpClass {
    pub fn is_pair(self) -> bool {
        matches!(self, OpClass::CommutingPair | OpClass::DoubleCommutingPair | OpClass::UnitaryCommutingPair)
    }

    pub fn name(self) -> &'static str {
        match self {
            OpClass::Generic => "generic",
            OpClass::ASelfadjoint => "a_selfadjoint",
            OpClass::APositive => "a_positive",
            OpClass::ANormal => "a_normal",
            OpClass::AIsometry => "a_isometry",
            OpClass::AUnitary => "a_unitary",
            OpClass::Nilpotent => "nilpotent",
            OpClass::RangeInvariant => "range_invariant",
            OpClass::CommutingPair => "commuting_pair",
            OpClass::DoubleCommutingPair => "double_commuting_pair",
            OpClass::UnitaryCommutingPair => "unitary_commuting_pair",
        }
    }
}

/// Requirements of one generated slot: a single class, or several classes
/// that must hold at once. Pair classes fill two operators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ClassReq {
    One(OpClass),
    All(Vec<OpClass>),
}

impl ClassReq {
    pub fn classes(&self) -> &[OpClass] {
        match self {
            ClassReq::One(c) => std::slice::from_ref(c),
            ClassReq::All(v) => v,
        }
    }
}

impl From<OpClass> for ClassReq {
    fn from(c: OpClass) -> Self {
        ClassReq::One(c)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub seed: u64,
    pub dim: usize,
    /// Rank of `A`.
    pub rank: usize,
    pub classes: Vec<ClassReq>,
}

impl InstanceSpec {
    pub fn new(seed: u64, dim: usize, rank: usize, classes: &[OpClass]) -> Self {
        InstanceSpec { seed, dim, rank, classes: classes.iter().map(|&c| ClassReq::One(c)).collect() }
    }
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub spec: InstanceSpec,
    /// The kernel as generated, before validation.
    pub a: CMatrix,
    pub space: SemiInnerSpace,
    pub ops: Vec<CMatrix>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum RangeKind {
    Generic,
    Hermitian,
    Psd,
    Normal,
    Unitary,
    HermitianUnitary,
    Identity,
    SquareZero,
}

#[derive(Clone, Copy, Debug)]
struct Single {
    kind: RangeKind,
    zero_m21: bool,
    nilpotent: bool,
}

#[derive(Clone, Copy, Debug)]
enum Recipe {
    Single(Single),
    Pair(OpClass),
}

fn resolve(req: &ClassReq) -> Result<Recipe> {
    let mut cls: Vec<OpClass> = req.classes().to_vec();
    cls.sort();
    cls.dedup();
    if cls.iter().any(|c| c.is_pair()) {
        if cls.len() != 1 {
            return Err(Error::InfeasibleSpec(format!(
                "pair class cannot be combined with other classes: {:?}",
                cls.iter().map(|c| c.name()).collect::<Vec<_>>()
            )));
        }
        return Ok(Recipe::Pair(cls[0]));
    }
    let has = |c: OpClass| cls.contains(&c);
    let pos = has(OpClass::APositive);
    let sa = pos || has(OpClass::ASelfadjoint);
    let unitary = has(OpClass::AUnitary) || has(OpClass::AIsometry);
    let normal = has(OpClass::ANormal);
    let nil = has(OpClass::Nilpotent);
    if nil && (sa || unitary || normal) {
        let other = cls.iter().find(|c| !matches!(c, OpClass::Nilpotent | OpClass::Generic | OpClass::RangeInvariant));
        return Err(Error::InfeasibleSpec(format!(
            "nilpotent and {} only meet at the zero reduced operator",
            other.map(|c| c.name()).unwrap_or("?")
        )));
    }
    let kind = match (pos, sa, unitary, normal, nil) {
        (true, _, true, _, _) => RangeKind::Identity,
        (_, true, true, _, _) => RangeKind::HermitianUnitary,
        (true, _, _, _, _) => RangeKind::Psd,
        (_, true, _, _, _) => RangeKind::Hermitian,
        (_, _, true, _, _) => RangeKind::Unitary,
        (_, _, _, true, _) => RangeKind::Normal,
        (_, _, _, _, true) => RangeKind::SquareZero,
        _ => RangeKind::Generic,
    };
    Ok(Recipe::Single(Single { kind, zero_m21: normal || has(OpClass::RangeInvariant), nilpotent: nil }))
}

struct Frame {
    q: CMatrix,
    d: Vec<f64>,
    n: usize,
    r: usize,
}

impl Frame {
    fn k(&self) -> usize {
        self.n - self.r
    }

    /// `D^{-1/2}·B·D^{1/2}`.
    fn conj_range(&self, b: &CMatrix) -> CMatrix {
        CMatrix::from_fn(self.r, self.r, |i, j| b.get(i, j) * (self.d[j].sqrt() / self.d[i].sqrt()))
    }

    /// `m21`/`m22` produce the null-space blocks; they are not called when
    /// `A` is definite.
    fn assemble(&self, b: &CMatrix, m21: impl FnOnce() -> CMatrix, m22: impl FnOnce() -> CMatrix) -> CMatrix {
        let mut m = CMatrix::zeros(self.n, self.n);
        m.set_block(0, 0, &self.conj_range(b));
        if self.k() > 0 {
            m.set_block(self.r, 0, &m21());
            m.set_block(self.r, self.r, &m22());
        }
        &(&self.q * &m) * &self.q.adjoint()
    }
}

fn scalar_diag(n: usize, v: C64) -> CMatrix {
    CMatrix::from_diag(&vec![v; n])
}

fn strictly_upper<R: Rng>(rng: &mut R, n: usize) -> CMatrix {
    let mut m = gaussian_matrix(rng, n, n);
    for i in 0..n {
        for j in 0..=i {
            m.set(i, j, c(0.0, 0.0));
        }
    }
    m
}

/// `G·N0·G⁻¹` with `N0² = 0` of maximal rank and `cond(G) ≤ 4`.
fn square_zero<R: Rng>(rng: &mut R, r: usize) -> CMatrix {
    let h = r / 2;
    let mut n0 = CMatrix::zeros(r, r);
    if h > 0 {
        n0.set_block(0, h, &gaussian_matrix(rng, h, r - h));
    }
    let u = haar_unitary(rng, r);
    let w = haar_unitary(rng, r);
    let s: Vec<f64> = (0..r).map(|_| rng.random_range(1.0..4.0)).collect();
    let g = &(&u * &CMatrix::from_real_diag(&s)) * &w;
    let inv_s: Vec<f64> = s.iter().map(|x| 1.0 / x).collect();
    let g_inv = &(&w.adjoint() * &CMatrix::from_real_diag(&inv_s)) * &u.adjoint();
    &(&g * &n0) * &g_inv
}

fn range_block<R: Rng>(rng: &mut R, kind: RangeKind, r: usize) -> CMatrix {
    match kind {
        RangeKind::Generic => gaussian_matrix(rng, r, r),
        RangeKind::Hermitian => gaussian_hermitian(rng, r),
        RangeKind::Psd => {
            let g = gaussian_matrix(rng, r, r);
            (&g * &g.adjoint()).scale_re(1.0 / r as f64).hermitian_part()
        }
        RangeKind::Normal => {
            let y = haar_unitary(rng, r);
            let lam: Vec<C64> = (0..r).map(|_| complex_gaussian(rng)).collect();
            &(&y * &CMatrix::from_diag(&lam)) * &y.adjoint()
        }
        RangeKind::Unitary => haar_unitary(rng, r),
        RangeKind::HermitianUnitary => {
            let y = haar_unitary(rng, r);
            let signs: Vec<f64> = (0..r).map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 }).collect();
            (&(&y * &CMatrix::from_real_diag(&signs)) * &y.adjoint()).hermitian_part()
        }
        RangeKind::Identity => CMatrix::identity(r),
        RangeKind::SquareZero => square_zero(rng, r),
    }
}

fn single<R: Rng>(rng: &mut R, f: &Frame, s: Single) -> CMatrix {
    let (r, k) = (f.r, f.k());
    let b = range_block(rng, s.kind, r);
    let mut m21 = CMatrix::zeros(1, 1);
    let mut m22 = CMatrix::zeros(1, 1);
    if k > 0 {
        m21 = if s.zero_m21 { CMatrix::zeros(k, r) } else { gaussian_matrix(rng, k, r) };
        m22 = if s.nilpotent { strictly_upper(rng, k) } else { gaussian_matrix(rng, k, k) };
    }
    f.assemble(&b, || m21, || m22)
}

/// `Σ_{j ≤ deg} c_j T^j` with `c_j` complex Gaussian over `‖T‖^j`.
fn polynomial<R: Rng>(rng: &mut R, t: &CMatrix) -> CMatrix {
    let n = t.rows();
    let deg = rng.random_range(1..=3u32);
    let nt = spectral_norm(t).max(1e-3);
    let mut acc = CMatrix::zeros(n, n);
    let mut pw = CMatrix::identity(n);
    for j in 0..=deg {
        let cj = complex_gaussian(rng) / nt.powi(j as i32);
        acc = &acc + &pw.scale(cj);
        pw = &pw * t;
    }
    acc
}

/// A-normal `T` whose reduced operator has two eigenvalue clusters, and an
/// operator `C` in the commutant of both `T̃` and `T̃*` that is not a
/// polynomial in `T`.
fn clustered<R: Rng>(rng: &mut R, f: &Frame, unitary: bool) -> (CMatrix, CMatrix) {
    let (r, k) = (f.r, f.k());
    let r1 = r.div_ceil(2);
    let draw = |rng: &mut R| if unitary { unit_phase(rng) } else { complex_gaussian(rng) };
    let (l1, l2, mu) = (draw(rng), draw(rng), draw(rng));
    let lam: Vec<C64> = (0..r).map(|i| if i < r1 { l1 } else { l2 }).collect();
    let y = haar_unitary(rng, r);
    let bt = &(&y * &CMatrix::from_diag(&lam)) * &y.adjoint();
    let t = f.assemble(&bt, || CMatrix::zeros(k, r), || scalar_diag(k, mu));
    let mut x = CMatrix::zeros(r, r);
    x.set_block(0, 0, &gaussian_matrix(rng, r1, r1));
    if r > r1 {
        x.set_block(r1, r1, &gaussian_matrix(rng, r - r1, r - r1));
    }
    let bc = &(&y * &x) * &y.adjoint();
    let g22 = if k > 0 { gaussian_matrix(rng, k, k) } else { CMatrix::zeros(1, 1) };
    let cm = f.assemble(&bc, || CMatrix::zeros(k, r), || g22);
    (t, cm)
}

fn pair<R: Rng>(rng: &mut R, f: &Frame, class: OpClass) -> (CMatrix, CMatrix) {
    match class {
        OpClass::CommutingPair => {
            let t = single(rng, f, Single { kind: RangeKind::Generic, zero_m21: false, nilpotent: false });
            let s = polynomial(rng, &t);
            (t, s)
        }
        OpClass::DoubleCommutingPair | OpClass::UnitaryCommutingPair => {
            let (t, cm) = clustered(rng, f, class == OpClass::UnitaryCommutingPair);
            let s = &polynomial(rng, &t) + &cm;
            (t, s)
        }
        _ => unreachable!("not a pair class"),
    }
}

fn violation(index: usize, class: OpClass) -> Error {
    Error::ClassViolation { index, class: class.name().to_string() }
}

fn commutes(t: &CMatrix, s: &CMatrix) -> bool {
    let res = spectral_norm(&(&(t * s) - &(s * t)));
    res <= GEN_TOL * (spectral_norm(t) * spectral_norm(s)).max(1.0)
}

/// Re-checks one slot: `ops[index]` (and `ops[index + 1]` for pairs).
fn verify_slot(space: &SemiInnerSpace, ops: &[CMatrix], index: usize, classes: &[OpClass]) -> Result<()> {
    let t = &ops[index];
    let flags = classify(space, t, None)?;
    let a = space.kernel();
    for &cl in classes {
        let ok = match cl {
            OpClass::Generic => flags.member_ba,
            OpClass::ASelfadjoint => flags.a_selfadjoint,
            OpClass::APositive => flags.a_positive,
            OpClass::ANormal => flags.a_normal,
            OpClass::AIsometry => flags.a_isometry,
            OpClass::AUnitary => flags.a_unitary,
            OpClass::Nilpotent => {
                let nt = spectral_norm(t);
                let res = spectral_norm(&(a * &(t * t)));
                flags.member_ba && res <= GEN_TOL * (space.norm_a() * nt * nt).max(1.0)
            }
            OpClass::RangeInvariant => {
                let res = invariance_residual(space, t);
                flags.member_ba && res <= GEN_TOL * spectral_norm(t).max(1.0)
            }
            OpClass::CommutingPair => flags.member_ba && commutes(t, &ops[index + 1]),
            OpClass::DoubleCommutingPair | OpClass::UnitaryCommutingPair => {
                let s = &ops[index + 1];
                let first = if cl == OpClass::UnitaryCommutingPair { flags.a_unitary } else { flags.a_normal };
                first && commutes(t, s) && commutes(&sharp(space, t)?, s)
            }
        };
        if !ok {
            return Err(violation(index, cl));
        }
    }
    Ok(())
}

/// Builds the instance described by `spec`. The same spec always yields
/// the same matrices bit for bit.
pub fn generate(spec: &InstanceSpec) -> Result<Instance> {
    let (n, r) = (spec.dim, spec.rank);
    if n == 0 || n > MAX_DIM {
        return Err(Error::InfeasibleSpec(format!("dim must be in 1..={MAX_DIM}, got {n}")));
    }
    if r < 1 || r > n {
        return Err(Error::InfeasibleSpec(format!("rank must be in 1..={n}, got {r}")));
    }
    let recipes = spec.classes.iter().map(resolve).collect::<Result<Vec<_>>>()?;

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let q = haar_unitary(&mut rng, n);
    let mut d: Vec<f64> = (0..r).map(|_| log_uniform(&mut rng, 1e-2, 1e2)).collect();
    // a fixed order keeps A independent of later draws
    d.sort_by(|x, y| y.total_cmp(x));
    let mut diag = d.clone();
    diag.resize(n, 0.0);
    let a = (&(&q * &CMatrix::from_real_diag(&diag)) * &q.adjoint()).hermitian_part();
    let space = SemiInnerSpace::new(&a)?;
    let frame = Frame { q, d, n, r };

    let mut ops = Vec::new();
    let mut slots = Vec::new();
    for recipe in recipes {
        slots.push(ops.len());
        match recipe {
            Recipe::Single(s) => ops.push(single(&mut rng, &frame, s)),
            Recipe::Pair(cl) => {
                let (t, s) = pair(&mut rng, &frame, cl);
                ops.push(t);
                ops.push(s);
            }
        }
    }
    for (req, &idx) in spec.classes.iter().zip(&slots) {
        verify_slot(&space, &ops, idx, req.classes())?;
    }
    Ok(Instance { spec: spec.clone(), a, space, ops })
}
