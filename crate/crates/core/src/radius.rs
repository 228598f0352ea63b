//! A-seminorm, A-numerical radius, A-Crawford number and support points of
//! the A-numerical range.
//!
//! Everything is evaluated on the reduced matrix `B = T̃`, where
//! `‖T‖_A = σ_max(B)`, `ω_A(T) = ω(B)` and `W_A(T) = W(B)`. The numerical
//! radius is `sup_θ ‖Herm(e^{iθ}B)‖₂`, a Lipschitz function of `θ` with
//! constant `‖B‖₂`, maximized by a uniform grid followed by golden-section
//! refinement of the best local maxima.

use serde::{Deserialize, Serialize};

use crate::a_adjoint::{membership, require_b_a, sharp_raw};
use crate::error::{Error, Result};
use crate::kernel::{herm_eig, herm_extremes_unchecked, spectral_norm};
use crate::matrix::{CMatrix, CVector, C64, I};
use crate::semi_space::SemiInnerSpace;
use crate::tilde::reduce_matrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RadiusMethod {
    TildeSpectral,
    ThetaSup,
    Oracle,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RadiusResult {
    pub value: f64,
    pub method: RadiusMethod,
    /// Maximizing angle of the sweep, when there is one.
    pub theta_star: Option<f64>,
    /// A-priori bound on `|value − exact|`.
    pub error_bound: f64,
}

/// Angle sweep parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub grid_n: usize,
    pub refine_tol: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig { grid_n: 720, refine_tol: 1e-10 }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.grid_n < 8 {
            return Err(Error::InvalidArgument(format!("grid_n must be at least 8, got {}", self.grid_n)));
        }
        if !(self.refine_tol > 0.0 && self.refine_tol.is_finite()) {
            return Err(Error::InvalidArgument("refine_tol must be positive".into()));
        }
        Ok(())
    }
}

/// Refinement budget: local maxima within `L·h` of the best grid value.
const MAX_CANDIDATES: usize = 8;
const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[derive(Clone, Copy, Debug)]
pub(crate) struct Sweep {
    pub value: f64,
    pub theta: f64,
    pub error_bound: f64,
}

/// Maximizes a `period`-periodic function with Lipschitz constant
/// `lipschitz` on a uniform grid of `grid_n` angles, then refines each
/// qualifying local maximum by golden-section search on `[θ − h, θ + h]`.
pub(crate) fn maximize_periodic<F: FnMut(f64) -> f64>(
    mut f: F,
    period: f64,
    cfg: SweepConfig,
    lipschitz: f64,
) -> Sweep {
    let n = cfg.grid_n;
    let h = period / n as f64;
    let vals: Vec<f64> = (0..n).map(|k| f(k as f64 * h)).collect();
    let (mut best_k, mut best) = (0, vals[0]);
    for (k, &v) in vals.iter().enumerate() {
        if v > best {
            best = v;
            best_k = k;
        }
    }
    let mut out = Sweep { value: best, theta: best_k as f64 * h, error_bound: lipschitz * h / 2.0 };
    if lipschitz == 0.0 {
        out.error_bound = 0.0;
        return out;
    }
    let floor = best - lipschitz * h;
    let mut cands: Vec<usize> = (0..n)
        .filter(|&k| {
            let v = vals[k];
            v >= floor && v >= vals[(k + n - 1) % n] && v >= vals[(k + 1) % n]
        })
        .collect();
    cands.sort_by(|&a, &b| vals[b].total_cmp(&vals[a]).then(a.cmp(&b)));
    let truncated = cands.len() > MAX_CANDIDATES;
    cands.truncate(MAX_CANDIDATES);
    for &k in &cands {
        let (lo, hi) = (k as f64 * h - h, k as f64 * h + h);
        let (t, v) = golden_max(&mut f, lo, hi, cfg.refine_tol);
        if v > out.value {
            out.value = v;
            out.theta = t.rem_euclid(period);
        }
    }
    // A profile flat to rounding (e.g. circular ranges) spills past the
    // budget without losing anything; otherwise a spill falls back to the
    // grid bound.
    let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
    let flat = best - lo <= 1e-12 * lipschitz.max(1.0);
    out.error_bound = if truncated && !flat { lipschitz * h / 2.0 } else { lipschitz * cfg.refine_tol };
    out
}

fn golden_max<F: FnMut(f64) -> f64>(f: &mut F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let (mut best_t, mut best_v) = if fc >= fd { (c, fc) } else { (d, fd) };
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
            if fc > best_v {
                best_v = fc;
                best_t = c;
            }
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
            if fd > best_v {
                best_v = fd;
                best_t = d;
            }
        }
    }
    (best_t, best_v)
}

/// `Herm(B)` and `Herm(iB)`, so that `Herm(e^{iθ}B) = cos θ·H + sin θ·K`.
fn herm_pencil(b: &CMatrix) -> (CMatrix, CMatrix) {
    (b.hermitian_part(), b.scale(I).hermitian_part())
}

fn pencil_at(h: &CMatrix, k: &CMatrix, theta: f64) -> CMatrix {
    let (s, c) = theta.sin_cos();
    CMatrix::from_inner(h.inner() * C64::new(c, 0.0) + k.inner() * C64::new(s, 0.0))
}

/// Numerical radius `ω(M) = sup_θ ‖Herm(e^{iθ}M)‖₂` of a plain matrix.
pub fn omega_matrix(m: &CMatrix, cfg: SweepConfig) -> Result<RadiusResult> {
    cfg.validate()?;
    m.ensure_square()?;
    m.ensure_finite()?;
    let lip = spectral_norm(m);
    let (h, k) = herm_pencil(m);
    let sw = maximize_periodic(
        |t| {
            let (lo, hi) = herm_extremes_unchecked(&pencil_at(&h, &k, t));
            hi.max(-lo)
        },
        std::f64::consts::PI,
        cfg,
        lip,
    );
    Ok(RadiusResult { value: sw.value, method: RadiusMethod::ThetaSup, theta_star: Some(sw.theta), error_bound: sw.error_bound })
}

/// Crawford number `max(0, sup_θ λ_min(Herm(e^{iθ}M)))` of a plain matrix.
pub fn crawford_matrix(m: &CMatrix, cfg: SweepConfig) -> Result<RadiusResult> {
    cfg.validate()?;
    m.ensure_square()?;
    m.ensure_finite()?;
    let lip = spectral_norm(m);
    let (h, k) = herm_pencil(m);
    let cfg2 = SweepConfig { grid_n: 2 * cfg.grid_n, ..cfg };
    let sw = maximize_periodic(
        |t| herm_extremes_unchecked(&pencil_at(&h, &k, t)).0,
        std::f64::consts::TAU,
        cfg2,
        lip,
    );
    if sw.value <= 0.0 {
        // origin inside the range
        return Ok(RadiusResult { value: 0.0, method: RadiusMethod::ThetaSup, theta_star: None, error_bound: sw.error_bound });
    }
    Ok(RadiusResult { value: sw.value, method: RadiusMethod::ThetaSup, theta_star: Some(sw.theta), error_bound: sw.error_bound })
}

fn reduced(space: &SemiInnerSpace, t: &CMatrix) -> Result<CMatrix> {
    if !membership(space, t)?.in_b_a_half {
        return Err(Error::Unbounded);
    }
    Ok(reduce_matrix(space, t))
}

/// `σ_max(A^{1/2}·T·(A^{1/2})†)`, the second seminorm path. No membership
/// test: outside `B_{A^{1/2}}` this is not the seminorm.
pub fn seminorm_via_sqrt(space: &SemiInnerSpace, t: &CMatrix) -> f64 {
    spectral_norm(&(&(space.sqrt_a() * t) * space.pinv_sqrt_a()))
}

/// `‖T‖_A`, or `Unbounded`. The tilde and square-root paths must agree to
/// `1e-9` relative.
pub fn op_seminorm(space: &SemiInnerSpace, t: &CMatrix) -> Result<RadiusResult> {
    let b = reduced(space, t)?;
    let value = spectral_norm(&b);
    let other = seminorm_via_sqrt(space, t);
    let gap = (value - other).abs();
    if gap > 1e-9 * value.max(other).max(1.0) {
        return Err(Error::Consistency(format!("seminorm paths disagree: {value} vs {other}")));
    }
    let error_bound = 64.0 * f64::EPSILON * b.rows() as f64 * value;
    Ok(RadiusResult { value, method: RadiusMethod::TildeSpectral, theta_star: None, error_bound })
}

/// `ω_A(T)`, or `Unbounded`.
pub fn numerical_radius(space: &SemiInnerSpace, t: &CMatrix, cfg: SweepConfig) -> Result<RadiusResult> {
    let b = reduced(space, t)?;
    let res = omega_matrix(&b, cfg)?;
    let norm = spectral_norm(&b);
    let tol = 1e-9 * norm.max(1.0) + res.error_bound;
    if res.value > norm + tol || res.value < 0.5 * norm - tol {
        return Err(Error::Consistency(format!("ω = {} outside [‖T‖/2, ‖T‖] with ‖T‖ = {norm}", res.value)));
    }
    Ok(res)
}

/// `sup_{α²+β²=1} ‖α·Re_A(T) + β·Im_A(T)‖_A`, computed in the original
/// space through the square-root seminorm path.
pub fn sup_alpha_beta(space: &SemiInnerSpace, t: &CMatrix, cfg: SweepConfig) -> Result<RadiusResult> {
    cfg.validate()?;
    require_b_a(space, t)?;
    let s = sharp_raw(space, t);
    let re = (t + &s).scale_re(0.5);
    let im = (t - &s).scale(-I * 0.5);
    let conj = |x: &CMatrix| &(space.sqrt_a() * x) * space.pinv_sqrt_a();
    let (r, m) = (conj(&re), conj(&im));
    let lip = spectral_norm(&r) + spectral_norm(&m);
    let sw = maximize_periodic(|th| spectral_norm(&pencil_at(&r, &m, th)), std::f64::consts::PI, cfg, lip);
    Ok(RadiusResult { value: sw.value, method: RadiusMethod::ThetaSup, theta_star: Some(sw.theta), error_bound: sw.error_bound })
}

/// `c_A(T) = inf{|⟨Tx|x⟩_A| : ‖x‖_A = 1}`, or `Unbounded`.
pub fn crawford(space: &SemiInnerSpace, t: &CMatrix, cfg: SweepConfig) -> Result<RadiusResult> {
    let b = reduced(space, t)?;
    crawford_matrix(&b, cfg)
}

/// Extreme points of `W_A(T)` in `count` directions, each realized by an
/// explicit A-unit witness.
#[derive(Clone, Debug, Serialize)]
pub struct RangeBoundary {
    pub angles: Vec<f64>,
    /// `(re, im)` of each support point.
    pub support_points: Vec<(f64, f64)>,
    #[serde(skip)]
    pub witnesses: Vec<CVector>,
}

/// Support points `⟨Bu, u⟩` with `u` the top eigenvector of
/// `Herm(e^{−iθ}B)` for `θ = 2πk/count`.
pub fn numerical_range_boundary(space: &SemiInnerSpace, t: &CMatrix, count: usize) -> Result<RangeBoundary> {
    if count < 8 {
        return Err(Error::InvalidArgument(format!("count must be at least 8, got {count}")));
    }
    let b = reduced(space, t)?;
    let (h, k) = herm_pencil(&b);
    let v = space.range_basis();
    let d = space.positive_eigenvalues();
    let mut out = RangeBoundary { angles: Vec::with_capacity(count), support_points: Vec::with_capacity(count), witnesses: Vec::with_capacity(count) };
    for j in 0..count {
        let theta = std::f64::consts::TAU * j as f64 / count as f64;
        let e = herm_eig(&pencil_at(&h, &k, -theta))?;
        let u = e.vectors.column(b.rows() - 1);
        let z = u.dotc(&b.mul_vec(&u));
        let mut w = u.clone();
        for (i, &di) in d.iter().enumerate() {
            w[i] /= di.sqrt();
        }
        out.angles.push(theta);
        out.support_points.push((z.re, z.im));
        out.witnesses.push(v.mul_vec(&w));
    }
    Ok(out)
}

/// One-sided bounds from random A-unit vectors.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OracleBounds {
    /// `≤ ω_A(T)`.
    pub omega_lb: f64,
    /// `≤ ‖T‖_A`.
    pub seminorm_lb: f64,
    /// `≥ c_A(T)`.
    pub crawford_ub: f64,
    pub samples: usize,
}

/// Sampling oracle working directly on `(A, T)` in the original space.
///
/// Each sample `x` is improved by `ascent_iters` Rayleigh–Ritz steps on
/// `span{x, Kx}` in the A-inner product. For `ω`, `K = A†H_φ` with
/// `H_φ = (e^{−iφ}AT + e^{iφ}T*A)/2` and `φ = arg⟨Tx|x⟩_A`; each step can
/// only increase `|⟨Tx|x⟩_A|`. For the seminorm, `K = T^♯T`.
pub fn sampling_oracle(
    space: &SemiInnerSpace,
    t: &CMatrix,
    seed: u64,
    samples: usize,
    ascent_iters: usize,
) -> Result<OracleBounds> {
    use rand::SeedableRng;
    if !membership(space, t)?.in_b_a_half {
        return Err(Error::Unbounded);
    }
    let n = space.dim();
    let a = Dense::from(space.kernel());
    let at = Dense::from(&(space.kernel() * t));
    let ta = at.adjoint();
    let pinv = Dense::from(space.pinv_a());
    let tat = Dense::from(&(&t.adjoint() * &(space.kernel() * t)));
    let proj = Dense::from(space.proj_range());
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut ws = Workspace::new(n);
    let zero = vec![C64::new(0.0, 0.0); n];
    let (mut x0, mut x) = (zero.clone(), zero.clone());
    let (mut omega_lb, mut norm_lb, mut craw_ub) = (0.0_f64, 0.0_f64, f64::INFINITY);
    for _ in 0..samples {
        ws.y.iter_mut().zip(space.sample_a_unit_with(&mut rng, true).iter()).for_each(|(d, s)| *d = *s);
        // Both forms only see the R(A) component, so the iterates live there:
        // a drifting N(A) component would only add rounding error.
        if !ws.range_unit_into(&proj, &a, &mut x0) {
            continue;
        }
        // ω ascent
        x.copy_from_slice(&x0);
        let mut val = ws.form(&at, &x);
        craw_ub = craw_ub.min(val.norm());
        omega_lb = omega_lb.max(val.norm());
        for _ in 0..ascent_iters {
            let ph = if val.norm() > 0.0 { val / val.norm() } else { C64::new(1.0, 0.0) };
            // H_φ x = (ph̄·ATx + ph·T*Ax)/2
            at.mul_into(&x, &mut ws.t1);
            ta.mul_into(&x, &mut ws.t2);
            for i in 0..n {
                ws.t3[i] = (ph.conj() * ws.t1[i] + ph * ws.t2[i]) * 0.5;
            }
            pinv.mul_into(&ws.t3, &mut ws.kx);
            let herm = |v: &[C64], out: &mut Vec<C64>, s1: &mut Vec<C64>, s2: &mut Vec<C64>| {
                at.mul_into(v, s1);
                ta.mul_into(v, s2);
                for i in 0..n {
                    out[i] = (ph.conj() * s1[i] + ph * s2[i]) * 0.5;
                }
            };
            if !(ws.ritz_step(&a, &x, herm) && ws.range_unit_into(&proj, &a, &mut x)) {
                break;
            }
            let prev = val.norm();
            val = ws.form(&at, &x);
            omega_lb = omega_lb.max(val.norm());
            if val.norm() <= prev * (1.0 + STALL) {
                break;
            }
        }
        // seminorm ascent on x*T*ATx
        x.copy_from_slice(&x0);
        let mut q = ws.form(&tat, &x).re;
        for _ in 0..ascent_iters {
            tat.mul_into(&x, &mut ws.t3);
            pinv.mul_into(&ws.t3, &mut ws.kx);
            let herm = |v: &[C64], out: &mut Vec<C64>, _s1: &mut Vec<C64>, _s2: &mut Vec<C64>| tat.mul_into(v, out);
            if !(ws.ritz_step(&a, &x, herm) && ws.range_unit_into(&proj, &a, &mut x)) {
                break;
            }
            let next = ws.form(&tat, &x).re;
            let stalled = next <= q * (1.0 + STALL);
            q = q.max(next);
            if stalled {
                break;
            }
        }
        norm_lb = norm_lb.max(q.max(0.0).sqrt());
    }
    if samples == 0 {
        craw_ub = f64::INFINITY;
    }
    Ok(OracleBounds { omega_lb, seminorm_lb: norm_lb, crawford_ub: craw_ub, samples })
}

/// Relative gain below which an ascent is considered converged.
const STALL: f64 = 1e-13;

/// Row-major dense matrix for the oracle's allocation-free inner loop.
struct Dense {
    n: usize,
    data: Vec<C64>,
}

impl Dense {
    fn from(m: &CMatrix) -> Self {
        Dense { n: m.rows(), data: m.to_row_major() }
    }

    fn adjoint(&self) -> Self {
        let n = self.n;
        let mut data = vec![C64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        Dense { n, data }
    }

    fn mul_into(&self, x: &[C64], out: &mut [C64]) {
        let n = self.n;
        for i in 0..n {
            let row = &self.data[i * n..(i + 1) * n];
            let mut s = C64::new(0.0, 0.0);
            for j in 0..n {
                s += row[j] * x[j];
            }
            out[i] = s;
        }
    }
}

struct Workspace {
    n: usize,
    t1: Vec<C64>,
    t2: Vec<C64>,
    t3: Vec<C64>,
    kx: Vec<C64>,
    hx: Vec<C64>,
    hk: Vec<C64>,
    ax: Vec<C64>,
    ak: Vec<C64>,
    y: Vec<C64>,
}

fn dotc(y: &[C64], x: &[C64]) -> C64 {
    // y* x
    y.iter().zip(x).fold(C64::new(0.0, 0.0), |s, (a, b)| s + a.conj() * b)
}

impl Workspace {
    fn new(n: usize) -> Self {
        let z = vec![C64::new(0.0, 0.0); n];
        Workspace { n, t1: z.clone(), t2: z.clone(), t3: z.clone(), kx: z.clone(), hx: z.clone(), hk: z.clone(), ax: z.clone(), ak: z.clone(), y: z }
    }

    /// `x* M x`.
    fn form(&mut self, m: &Dense, x: &[C64]) -> C64 {
        m.mul_into(x, &mut self.t1);
        dotc(x, &self.t1)
    }

    /// Writes `Py / ‖Py‖_A` to `out`; false when `y` has no A-component.
    fn range_unit_into(&mut self, proj: &Dense, a: &Dense, out: &mut [C64]) -> bool {
        proj.mul_into(&self.y, out);
        a.mul_into(out, &mut self.ax);
        let s = dotc(out, &self.ax).re;
        if !(s > 0.0 && s.is_finite()) {
            return false;
        }
        let inv = 1.0 / s.sqrt();
        out.iter_mut().for_each(|z| *z *= inv);
        true
    }

    /// Top Ritz vector of the pencil `(W*HW, W*AW)` with `W = [x, kx]`,
    /// unnormalized, into `y`. False when `kx` adds no A-direction.
    fn ritz_step<H>(&mut self, a: &Dense, x: &[C64], mut herm: H) -> bool
    where
        H: FnMut(&[C64], &mut Vec<C64>, &mut Vec<C64>, &mut Vec<C64>),
    {
        let n = self.n;
        let kx = std::mem::take(&mut self.kx);
        let (mut t1, mut t2) = (std::mem::take(&mut self.t1), std::mem::take(&mut self.t2));
        herm(x, &mut self.hx, &mut t1, &mut t2);
        herm(&kx, &mut self.hk, &mut t1, &mut t2);
        self.t1 = t1;
        self.t2 = t2;
        a.mul_into(x, &mut self.ax);
        a.mul_into(&kx, &mut self.ak);
        let m11 = dotc(x, &self.hx).re;
        let m22 = dotc(&kx, &self.hk).re;
        let m12 = dotc(x, &self.hk);
        let g11 = dotc(x, &self.ax).re;
        let g22 = dotc(&kx, &self.ak).re;
        let g12 = dotc(x, &self.ak);
        self.kx = kx;
        let det = g11 * g22 - g12.norm_sqr();
        if !(g11 > 0.0) || !(g22 > 0.0) || det <= 1e-12 * g11 * g22 {
            return false;
        }
        // A-orthogonalize kx against x: w = kx − (g12/g11)·x
        let c = g12 / g11;
        let gw = det / g11;
        let mww = m22 - 2.0 * (c.conj() * m12).re + c.norm_sqr() * m11;
        let mxw = m12 - c * m11;
        // orthonormal pencil [[m11/g11, mxw/√(g11 gw)], [.., mww/gw]]
        let p = m11 / g11;
        let r = mww / gw;
        let o = mxw / (g11 * gw).sqrt();
        let mean = 0.5 * (p + r);
        let rad = (0.25 * (p - r) * (p - r) + o.norm_sqr()).sqrt();
        let lam = mean + rad;
        // eigenvector (o, lam − p) or (lam − r, ō)
        let (z1, z2) = if (lam - p).abs() + o.norm() >= (lam - r).abs() + o.norm() && o.norm() > 0.0 {
            (o, C64::new(lam - p, 0.0))
        } else if o.norm() > 0.0 {
            (C64::new(lam - r, 0.0), o.conj())
        } else if p >= r {
            (C64::new(1.0, 0.0), C64::new(0.0, 0.0))
        } else {
            (C64::new(0.0, 0.0), C64::new(1.0, 0.0))
        };
        let a1 = z1 / g11.sqrt();
        let a2 = z2 / gw.sqrt();
        // y = a1·x + a2·(kx − c·x)
        for i in 0..n {
            self.y[i] = (a1 - a2 * c) * x[i] + a2 * self.kx[i];
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::c;
    use crate::random::gaussian_matrix;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn space(d: &[f64]) -> SemiInnerSpace {
        SemiInnerSpace::new(&CMatrix::from_real_diag(d)).unwrap()
    }

    fn e12() -> CMatrix {
        CMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]])
    }

    const CFG: SweepConfig = SweepConfig { grid_n: 720, refine_tol: 1e-10 };

    #[test]
    fn seminorm_examples() {
        let swap = CMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        assert_eq!(op_seminorm(&space(&[0.0, 1.0]), &swap).unwrap_err(), Error::Unbounded);
        assert!((op_seminorm(&space(&[1.0, 1.0]), &e12()).unwrap().value - 1.0).abs() < 1e-14);
        assert!((op_seminorm(&space(&[2.0, 1.0]), &e12()).unwrap().value - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn radius_examples() {
        let s = space(&[1.0, 1.0]);
        let h = CMatrix::from_complex_rows(&[&[c(1.0, 0.0), c(2.0, -1.0)], &[c(2.0, 1.0), c(-3.0, 0.0)]]);
        // max |eig| of a Hermitian matrix: eigenvalues −1 ± √(4 + 5)
        let want = 1.0 + 3.0;
        assert!((numerical_radius(&s, &h, CFG).unwrap().value - want).abs() < 1e-9);
        assert!((numerical_radius(&s, &e12(), CFG).unwrap().value - 0.5).abs() < 1e-9);
        let w = numerical_radius(&space(&[2.0, 1.0]), &e12(), CFG).unwrap();
        assert!((w.value - 2f64.sqrt() / 2.0).abs() < 1e-9);
        assert!(w.error_bound >= 0.0 && w.error_bound < 1e-8);
    }

    #[test]
    fn sup_alpha_beta_examples() {
        let s = space(&[1.0, 0.0]);
        let t = CMatrix::from_real_rows(&[&[3.0, 0.0], &[5.0, 7.0]]);
        let v = sup_alpha_beta(&s, &t, CFG).unwrap().value;
        assert!((v - op_seminorm(&s, &t).unwrap().value).abs() < 1e-9);
        assert!((sup_alpha_beta(&space(&[1.0, 1.0]), &e12(), CFG).unwrap().value - 0.5).abs() < 1e-9);
        assert_eq!(sup_alpha_beta(&s, &CMatrix::zeros(2, 2), CFG).unwrap().value, 0.0);
    }

    #[test]
    fn crawford_examples() {
        let s = space(&[1.0, 1.0]);
        assert!((crawford(&s, &CMatrix::identity(2), CFG).unwrap().value - 1.0).abs() < 1e-9);
        assert_eq!(crawford(&s, &e12(), CFG).unwrap().value, 0.0);
        assert!((crawford(&s, &CMatrix::from_real_diag(&[1.0, 2.0]), CFG).unwrap().value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn boundary_examples() {
        let s = space(&[1.0, 1.0]);
        let b = numerical_range_boundary(&s, &CMatrix::identity(2), 16).unwrap();
        assert!(b.support_points.iter().all(|&(x, y)| (x - 1.0).abs() < 1e-12 && y.abs() < 1e-12));
        let b = numerical_range_boundary(&s, &e12(), 64).unwrap();
        for &(x, y) in &b.support_points {
            assert!(((x * x + y * y).sqrt() - 0.5).abs() < 1e-9);
        }
        let t = CMatrix::from_diag(&[c(1.0, 0.0), c(0.0, 1.0)]);
        let b = numerical_range_boundary(&s, &t, 8).unwrap();
        let hit = |z: (f64, f64)| b.support_points.iter().any(|&p| (p.0 - z.0).abs() < 1e-9 && (p.1 - z.1).abs() < 1e-9);
        assert!(hit((1.0, 0.0)) && hit((0.0, 1.0)));
        assert!(numerical_range_boundary(&s, &t, 4).is_err());
    }

    #[test]
    fn witnesses_realize_support_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let g = gaussian_matrix(&mut rng, 4, 4);
        let s = space(&[0.0, 0.5, 2.0, 0.0]);
        // make T respect N(A) = span{e1, e4}
        let mut t = g;
        for i in [1, 2] {
            for j in [0, 3] {
                t.set(i, j, c(0.0, 0.0));
            }
        }
        let b = numerical_range_boundary(&s, &t, 32).unwrap();
        for (w, &(x, y)) in b.witnesses.iter().zip(&b.support_points) {
            assert!((s.seminorm_vec(w).unwrap() - 1.0).abs() < 1e-12);
            let z = s.sip(&t.mul_vec(w), w).unwrap();
            assert!((z - c(x, y)).norm() < 1e-12);
        }
    }

    #[test]
    fn oracle_examples() {
        let s = space(&[1.0, 1.0]);
        let o = sampling_oracle(&s, &CMatrix::identity(2), 1, 200, 4).unwrap();
        assert!((o.omega_lb - 1.0).abs() < 1e-12 && (o.seminorm_lb - 1.0).abs() < 1e-12);
        assert!((o.crawford_ub - 1.0).abs() < 1e-12);
        let o = sampling_oracle(&s, &e12(), 2, 20000, 8).unwrap();
        assert!(o.omega_lb <= 0.5 + 1e-12 && o.omega_lb >= 0.499);
        let swap = CMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        assert_eq!(sampling_oracle(&space(&[0.0, 1.0]), &swap, 0, 10, 1).unwrap_err(), Error::Unbounded);
    }

    // Long ascents on singular A used to let the iterate drift into N(A)
    // until rounding dominated the reported bound.
    #[test]
    fn oracle_bounds_survive_converged_ascent() {
        use crate::suite::{generate, InstanceSpec, OpClass};
        let cases = [(0x3410_cece_1917_04ea_u64, 4, 2, 214), (0x9b23_b83b_7d29_7226, 4, 3, 304), (0x9d17_69ab_71d1_e812, 3, 2, 328)];
        for (seed, n, r, oracle_seed) in cases {
            let inst = generate(&InstanceSpec::new(seed, n, r, &[OpClass::Generic])).unwrap();
            let (sp, t) = (&inst.space, &inst.ops[0]);
            let o = sampling_oracle(sp, t, oracle_seed, 2000, 8).unwrap();
            let w = numerical_radius(sp, t, SweepConfig::default()).unwrap().value;
            let n = op_seminorm(sp, t).unwrap().value;
            assert!(o.omega_lb <= w + 1e-10 * w.max(1.0), "{} > {w}", o.omega_lb);
            assert!(o.seminorm_lb <= n + 1e-10 * n.max(1.0), "{} > {n}", o.seminorm_lb);
            assert!(w - o.omega_lb < 1e-6);
        }
    }

    #[test]
    fn grid_optimizer_finds_sharp_peak() {
        let cfg = SweepConfig { grid_n: 64, refine_tol: 1e-12 };
        let peak = 1.2345;
        let sw = maximize_periodic(|t| 1.0 - (t - peak).abs(), std::f64::consts::PI, cfg, 1.0);
        assert!((sw.value - 1.0).abs() < 1e-11);
        assert!((sw.theta - peak).abs() < 1e-11);
    }
}
