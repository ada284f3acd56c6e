//! Truncated shift-invariant subspaces.
//!
//! A subspace lives inside a degree window `[lo, hi]` and is stored as an
//! L²-orthonormal coefficient matrix. A Hilbert norm on it is an explicit
//! Gram matrix `G` on those coordinates: for `x = Q a`, `y = Q b`,
//! `<x, y>_M = b^H G a`. Computations in the `M` metric run in whitened
//! coordinates `w = L^H a` with `G = L L^H`, where it becomes Euclidean.
//!
//! Claims about shift invariance are only made away from the window edges:
//! an element can be shifted by `z^n` only if its top degree is at most
//! `hi - n`, and it can be a shifted image only if its bottom degree is at
//! least `lo + n`.

use num_complex::Complex64;
use serde::Serialize;

use crate::circle::{synthesize, CircleGrid, FourierSeries};
use crate::error::{self, Error, Result};
use crate::laurent::{LaurentPoly, Window};
use crate::linalg::{self, CMat, RANK_TOL};
use crate::literal::{MetricLiteral, SubspaceFixture};
use crate::modn::{kernel_residuals, kernel_space, matrix_of, UnimodularTuple};
use crate::norms::{p_norm, sup_norm};
use crate::report::{finite, CheckReport};

/// Residual allowed when testing `z^n I ⊆ M`.
pub const INVARIANCE_TOL: f64 = 1e-9;
/// Tolerance for direct-sum and kernel checks in [`build_invariant`].
pub const DIRECT_SUM_TOL: f64 = 1e-9;
/// Default tolerance for Wold reports.
pub const WOLD_TOL: f64 = 1e-9;
/// Threshold below which a coefficient does not count toward support.
const SUPPORT_TOL: f64 = 1e-12;

/// Finite-dimensional subspace of polynomials supported in a window.
#[derive(Clone, Debug)]
pub struct TruncatedSubspace {
    window: Window,
    q: CMat,
}

impl TruncatedSubspace {
    pub fn zero(window: Window) -> Self {
        TruncatedSubspace { window, q: CMat::zeros(window.len(), 0) }
    }

    /// Orthonormalizes `generators`; rank uses the relative threshold `1e-10`.
    pub fn span(generators: &[LaurentPoly], window: Window) -> Result<Self> {
        for g in generators {
            if !g.supported_in(&window) {
                return error::range(format!("generator {g:?} leaves the window {window}"));
            }
        }
        let m = linalg::to_matrix(generators, &window);
        Ok(TruncatedSubspace { window, q: linalg::range_basis(&m, RANK_TOL) })
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn dim(&self) -> usize {
        self.q.ncols()
    }

    /// Orthonormal coordinates, one column per basis element.
    pub fn coords(&self) -> &CMat {
        &self.q
    }

    pub fn basis(&self) -> Vec<LaurentPoly> {
        linalg::to_polys(&self.q, &self.window)
    }

    /// `max |Gram - I|` of the stored basis.
    pub fn gram_error(&self) -> f64 {
        linalg::orthonormality_error(&self.q)
    }

    /// Orthogonal projection in `L²`; parts outside the window are discarded.
    pub fn project(&self, p: &LaurentPoly) -> LaurentPoly {
        let v = linalg::to_vec(p, &self.window);
        let proj = &self.q * (self.q.adjoint() * v);
        linalg::from_vec(proj.as_slice(), &self.window)
    }

    /// `L²` distance from `p` to the subspace, counting coefficients outside the window.
    pub fn residual(&self, p: &LaurentPoly) -> f64 {
        let v = linalg::to_vec(p, &self.window);
        let inside = &v - &self.q * (self.q.adjoint() * &v);
        let outside = (p - &p.restrict(&self.window)).norm_l2();
        (inside.norm_squared() + outside * outside).sqrt()
    }

    pub fn contains(&self, p: &LaurentPoly, tol: f64) -> bool {
        self.residual(p) <= tol * p.norm_l2().max(1.0)
    }

    /// `M ∩ P[lo, hi]`: elements supported in `[lo, hi]`.
    pub fn within(&self, lo: i64, hi: i64) -> Self {
        let Some(sub) = self.window.clamp(lo, hi) else {
            return Self::zero(self.window);
        };
        if self.dim() == 0 || sub == self.window {
            return self.clone();
        }
        let outside: Vec<usize> = self
            .window
            .iter()
            .filter(|j| !sub.contains(*j))
            .map(|j| self.window.offset(j))
            .collect();
        let b = CMat::from_fn(outside.len(), self.dim(), |r, c| self.q[(outside[r], c)]);
        let null = linalg::null_space(&b, RANK_TOL, 1.0);
        TruncatedSubspace { window: self.window, q: &self.q * null }
    }

    /// `self ⊆ other` within `tol`.
    pub fn is_subspace_of(&self, other: &TruncatedSubspace, tol: f64) -> bool {
        self.basis().iter().all(|b| other.residual(b) <= tol)
    }
}

/// Builds the span of `generators` inside `window`.
pub fn span(generators: &[LaurentPoly], window: Window) -> Result<TruncatedSubspace> {
    TruncatedSubspace::span(generators, window)
}

/// `z^n M`, flagged when a shifted basis element leaves the window.
#[derive(Clone, Debug)]
pub struct ShiftedSubspace {
    pub subspace: TruncatedSubspace,
    pub truncated: bool,
    /// Largest `L²` mass pushed out of the window.
    pub lost_norm: f64,
}

pub fn shift(m: &TruncatedSubspace, n: usize) -> ShiftedSubspace {
    let w = m.window();
    let mut lost = 0.0f64;
    let shifted: Vec<LaurentPoly> = m
        .basis()
        .iter()
        .map(|b| {
            let s = b.shift(n as i64);
            let kept = s.restrict(&w);
            lost = lost.max((&s - &kept).norm_l2());
            kept
        })
        .collect();
    ShiftedSubspace {
        subspace: TruncatedSubspace::span(&shifted, w).expect("restricted to the window"),
        truncated: lost > SUPPORT_TOL,
        lost_norm: lost,
    }
}

/// A truncated subspace with a Hilbert norm given by a Gram matrix.
#[derive(Clone, Debug)]
pub struct InnerProductSpace {
    carrier: TruncatedSubspace,
    metric: CMat,
    chol: CMat,
}

impl InnerProductSpace {
    pub fn l2(carrier: TruncatedSubspace) -> Self {
        let d = carrier.dim();
        InnerProductSpace { carrier, metric: CMat::identity(d, d), chol: CMat::identity(d, d) }
    }

    /// Requires `metric` Hermitian with smallest eigenvalue above `1e-10` times the largest.
    pub fn with_metric(carrier: TruncatedSubspace, metric: CMat) -> Result<Self> {
        let d = carrier.dim();
        if metric.nrows() != d || metric.ncols() != d {
            return error::domain(format!(
                "metric is {}x{}, carrier has dimension {d}",
                metric.nrows(),
                metric.ncols()
            ));
        }
        let scale = linalg::max_abs(&metric).max(f64::MIN_POSITIVE);
        if linalg::hermitian_defect(&metric) > 1e-10 * scale {
            return error::domain("metric is not Hermitian");
        }
        let metric = (&metric + metric.adjoint()) * Complex64::new(0.5, 0.0);
        let (lo, hi) = linalg::hermitian_extremes(&metric);
        if d > 0 && !(lo > 1e-10 * hi) {
            return error::domain(format!("metric is not positive definite (eigenvalues {lo:e} .. {hi:e})"));
        }
        let Some(chol) = linalg::cholesky_lower(&metric) else {
            return error::domain("metric has no Cholesky factor");
        };
        Ok(InnerProductSpace { carrier, metric, chol })
    }

    /// `M = phi * span(generators)` with `||phi g||_M := ||g||_2`.
    pub fn pullback(phi: &LaurentPoly, generators: &[LaurentPoly], window: Window) -> Result<Self> {
        if phi.is_zero() {
            return error::domain("pullback symbol is zero");
        }
        let images: Vec<LaurentPoly> = generators.iter().map(|g| phi * g).collect();
        let carrier = TruncatedSubspace::span(&images, window)?;
        if carrier.dim() != generators.len() {
            return error::domain(format!(
                "pullback generators are dependent: {} generators span dimension {}",
                generators.len(),
                carrier.dim()
            ));
        }
        if generators.is_empty() {
            return Ok(Self::l2(carrier));
        }
        let gwin = generators
            .iter()
            .filter_map(|g| g.support())
            .reduce(|a, b| Window { lo: a.lo.min(b.lo), hi: a.hi.max(b.hi) })
            .expect("nonzero generators");
        let u = linalg::to_matrix(&images, &window);
        let c = linalg::lstsq(&u, carrier.coords(), RANK_TOL);
        let gm = linalg::to_matrix(generators, &gwin);
        let hg = gm.adjoint() * gm;
        let metric = c.adjoint() * hg * &c;
        Self::with_metric(carrier, metric)
    }

    /// Reads `{"window", "generators", "metric"}`; generators must be coefficient literals.
    pub fn from_fixture(fx: &SubspaceFixture) -> Result<Self> {
        let gens = fx
            .generators
            .iter()
            .map(|l| l.to_laurent().ok_or_else(|| Error::Parse("subspace generators need coeffs".into())))
            .collect::<Result<Vec<_>>>()?;
        match &fx.metric {
            MetricLiteral::Named(name) if name == "l2" => Ok(Self::l2(TruncatedSubspace::span(&gens, fx.window)?)),
            MetricLiteral::Named(name) => Err(Error::Parse(format!("unknown metric {name:?}"))),
            MetricLiteral::Pullback { pullback } => {
                let phi = pullback
                    .to_laurent()
                    .ok_or_else(|| Error::Parse("pullback symbol needs coeffs".into()))?;
                Self::pullback(&phi, &gens, fx.window)
            }
        }
    }

    pub fn carrier(&self) -> &TruncatedSubspace {
        &self.carrier
    }

    pub fn metric(&self) -> &CMat {
        &self.metric
    }

    pub fn window(&self) -> Window {
        self.carrier.window()
    }

    pub fn dim(&self) -> usize {
        self.carrier.dim()
    }

    /// Coordinates `Q^H x` of each element.
    pub fn coords_of(&self, polys: &[LaurentPoly]) -> CMat {
        self.carrier.coords().adjoint() * linalg::to_matrix(polys, &self.window())
    }

    /// Whitened coordinates `L^H Q^H x`, Euclidean in the `M` metric.
    pub fn whiten(&self, polys: &[LaurentPoly]) -> CMat {
        self.chol.adjoint() * self.coords_of(polys)
    }

    pub fn unwhiten(&self, w: &CMat) -> Vec<LaurentPoly> {
        let a = self
            .chol
            .adjoint()
            .solve_upper_triangular(w)
            .expect("Cholesky factor is nonsingular");
        linalg::to_polys(&(self.carrier.coords() * a), &self.window())
    }

    /// `<x, y>_M` for elements of `M`.
    pub fn inner(&self, x: &LaurentPoly, y: &LaurentPoly) -> Complex64 {
        let w = self.whiten(&[x.clone(), y.clone()]);
        w.column(1).dotc(&w.column(0))
    }

    pub fn norm(&self, x: &LaurentPoly) -> f64 {
        self.whiten(std::slice::from_ref(x)).norm()
    }

    /// `M`-Gram matrix; entry `(k, l)` is `<x_l, x_k>_M`.
    pub fn gram(&self, polys: &[LaurentPoly]) -> CMat {
        let w = self.whiten(polys);
        w.adjoint() * w
    }

    /// `M`-orthonormal basis of `span(polys)` in whitened coordinates.
    fn orthonormal_whitened(&self, polys: &[LaurentPoly]) -> CMat {
        let w = self.whiten(polys);
        let scale = linalg::spectral_norm(&w);
        linalg::range_basis_floor(&w, RANK_TOL, scale)
    }
}

/// Verdict of [`is_simply_invariant`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InvarianceStatus {
    Simply,
    Doubly,
    NotInvariant,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct InvarianceReport {
    pub status: InvarianceStatus,
    /// Largest residual of `z^n I` against `M`.
    pub max_residual: f64,
    /// `dim (M ∩ P[lo+n, hi]) - dim (M ∩ P[lo, hi-n])`.
    pub wandering_dim: usize,
    /// Set when the verdict may be an edge artifact.
    pub truncation_caveat: bool,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

/// Window-guarded test of `z^n M ⊊ M` versus `z^n M = M`.
///
/// With `I = M ∩ P[lo, hi-n]` and `V = M ∩ P[lo+n, hi]`: containment is
/// `z^n I ⊆ M`, and the verdict is `Simply` when `dim V > dim I` (an interior
/// wandering direction exists) and `Doubly` otherwise. `Inconclusive` means
/// no nonzero element of `M` can be shifted inside the window.
pub fn is_simply_invariant(m: &TruncatedSubspace, n: usize, tol: f64) -> InvarianceReport {
    let w = m.window();
    let report = |status, max_residual, wandering_dim, truncation_caveat, message: Option<&str>| InvarianceReport {
        status,
        max_residual,
        wandering_dim,
        truncation_caveat,
        tolerance: tol,
        message: message.map(str::to_string),
    };
    if n == 0 {
        return report(InvarianceStatus::Inconclusive, 0.0, 0, true, Some("n must be positive"));
    }
    if m.dim() == 0 {
        return report(InvarianceStatus::Doubly, 0.0, 0, false, Some("zero subspace"));
    }
    let n = n as i64;
    let i = m.within(w.lo, w.hi - n);
    if i.dim() == 0 {
        return report(
            InvarianceStatus::Inconclusive,
            0.0,
            0,
            true,
            Some("no element of M can be shifted without leaving the window"),
        );
    }
    let max_residual = i.basis().iter().map(|b| m.residual(&b.shift(n))).fold(0.0, f64::max);
    if max_residual > tol {
        return report(InvarianceStatus::NotInvariant, max_residual, 0, false, None);
    }
    let v = m.within(w.lo + n, w.hi);
    let wandering_dim = v.dim().saturating_sub(i.dim());
    let touches_bottom = v.dim() < m.dim();
    let status = if wandering_dim == 0 { InvarianceStatus::Doubly } else { InvarianceStatus::Simply };
    let caveat = status == InvarianceStatus::Doubly || touches_bottom;
    let message = (status == InvarianceStatus::Doubly)
        .then_some("doubly invariant within the window; this may be a truncation artifact");
    report(status, max_residual, wandering_dim, caveat, message)
}

/// `N = (M ∩ P[lo+n, hi]) ⊖_M z^n (M ∩ P[lo, hi-n])`.
#[derive(Clone, Debug)]
pub struct WanderingSpace {
    /// `L²`-orthonormal span of `N`.
    pub span: TruncatedSubspace,
    /// `M`-orthonormal basis of `N`.
    pub basis: Vec<LaurentPoly>,
    pub invariance_residual: f64,
}

impl WanderingSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Orthogonal complement, in the metric of `m`, of the shifted interior inside `m`.
pub fn wandering_space(m: &InnerProductSpace, n: usize) -> Result<WanderingSpace> {
    if n == 0 {
        return error::domain("n must be positive");
    }
    let c = m.carrier();
    let w = c.window();
    let n = n as i64;
    let i = c.within(w.lo, w.hi - n);
    let v = c.within(w.lo + n, w.hi);
    let shifted: Vec<LaurentPoly> = i.basis().iter().map(|b| b.shift(n)).collect();
    let invariance_residual = shifted.iter().map(|s| c.residual(s)).fold(0.0, f64::max);
    if invariance_residual > INVARIANCE_TOL {
        return error::domain(format!(
            "subspace is not invariant under z^{n} (residual {invariance_residual:e})"
        ));
    }
    let sq = m.orthonormal_whitened(&shifted);
    let vw = m.whiten(&v.basis());
    let resid = &vw - &sq * (sq.adjoint() * &vw);
    let nw = linalg::range_basis_floor(&resid, RANK_TOL, linalg::spectral_norm(&vw));
    let basis = m.unwhiten(&nw);
    let span = TruncatedSubspace::span(&basis, w)?;
    Ok(WanderingSpace { span, basis, invariance_residual })
}

/// Truncated Wold decomposition `M ∩ T = (N ⊕ z^n N ⊕ ...) ⊕ tail`.
#[derive(Clone, Debug, Serialize)]
pub struct WoldReport {
    pub n: usize,
    pub depth: usize,
    pub wandering_dim: usize,
    pub wandering_basis: Vec<LaurentPoly>,
    /// Dimension of the part of the claims region orthogonal to every `z^{kn} N`.
    pub tail_dim: usize,
    /// `||(I - P_S - P_D)|_T||_M` plus any part of `S` outside `T`.
    pub reconstruction_error: f64,
    /// `max |Gram_M(z^{kn} N) - I|`.
    pub orthogonality_error: f64,
    /// Largest relative residual of `z^{-n} x` against `M` over tail vectors `x`.
    pub tail_shift_residual: f64,
    pub truncation_caveat: bool,
    pub pass: bool,
    pub tolerance: f64,
}

fn effective_top(p: &LaurentPoly) -> Option<i64> {
    p.effective_support(SUPPORT_TOL * p.max_abs_coeff()).map(|s| s.hi)
}

/// Largest `depth` accepted by [`wold_decompose`].
pub fn max_wold_depth(m: &InnerProductSpace, n: usize) -> Result<usize> {
    let ws = wandering_space(m, n)?;
    let top = ws.basis.iter().filter_map(effective_top).max();
    Ok(match top {
        Some(t) => ((m.window().hi - t).max(0) / n as i64) as usize,
        None => 0,
    })
}

/// Shifts the wandering space `depth` times and splits the claims region
/// `T = M ∩ P[lo+n, top_N + depth n]` into the shifted copies and a tail.
///
/// The tail is the `M`-orthogonal complement of the shifted copies in `T`;
/// it is certified independently by checking that it shifts back into `M`.
pub fn wold_decompose(m: &InnerProductSpace, n: usize, depth: usize) -> Result<WoldReport> {
    let tol = WOLD_TOL;
    let ws = wandering_space(m, n)?;
    let c = m.carrier();
    let w = c.window();
    let step = n as i64;
    let tops: Vec<i64> = ws.basis.iter().map(|b| effective_top(b).unwrap_or(w.lo)).collect();
    let top = match tops.iter().max() {
        Some(&t) => t + depth as i64 * step,
        None => w.hi,
    };
    if top > w.hi {
        return error::range(format!(
            "depth {depth} pushes the wandering space to degree {top}, beyond the window {w}"
        ));
    }
    let mut family = Vec::new();
    for (b, &t) in ws.basis.iter().zip(&tops) {
        let mut k = 0;
        while t + k * step <= top {
            family.push(b.shift(k * step));
            k += 1;
        }
    }
    let family_residual = family.iter().map(|f| c.residual(f)).fold(0.0, f64::max);
    let orthogonality_error = if family.is_empty() {
        0.0
    } else {
        linalg::identity_deviation(&m.gram(&family))
    };
    let region = c.within(w.lo + step, top);
    let tq = m.orthonormal_whitened(&region.basis());
    let sq = m.orthonormal_whitened(&family);
    let s_outside = linalg::spectral_norm(&(&sq - &tq * (tq.adjoint() * &sq)));
    let after_s = &tq - &sq * (sq.adjoint() * &tq);
    let dq = linalg::range_basis_floor(&after_s, RANK_TOL, 1.0);
    let leftover = &after_s - &dq * (dq.adjoint() * &after_s);
    let reconstruction_error = linalg::spectral_norm(&leftover) + s_outside;
    let tail = m.unwhiten(&dq);
    let tail_shift_residual = tail
        .iter()
        .map(|x| c.residual(&x.shift(-step)) / x.norm_l2().max(f64::MIN_POSITIVE))
        .fold(0.0, f64::max);
    let touches_bottom = c.within(w.lo + step, w.hi).dim() < c.dim();
    let tail_dim = dq.ncols();
    let wandering_dim = ws.dim();
    let pass = orthogonality_error <= tol
        && reconstruction_error <= tol
        && tail_shift_residual <= tol
        && family_residual <= INVARIANCE_TOL;
    Ok(WoldReport {
        n,
        depth,
        wandering_dim,
        wandering_basis: ws.basis,
        tail_dim,
        reconstruction_error,
        orthogonality_error,
        tail_shift_residual,
        truncation_caveat: wandering_dim == 0 || tail_dim > 0 || touches_bottom,
        pass,
        tolerance: tol,
    })
}

fn require_exact(tuple: &UnimodularTuple) -> Result<&[LaurentPoly]> {
    tuple
        .exact()
        .ok_or_else(|| Error::Domain("this construction needs a tuple with exact Laurent series".into()))
}

/// Padding that holds every orbit element needed to represent an element
/// of the window: twice the widest seed plus one step.
fn orbit_window(window: &Window, seeds: &[LaurentPoly], n: usize) -> Window {
    let width = seeds.iter().filter_map(|p| p.support()).map(|s| s.hi - s.lo).max().unwrap_or(0);
    let pad = 2 * width + n as i64;
    Window { lo: window.lo - pad, hi: window.hi + pad }
}

/// `z^{kn} phi_j` for `k >= 0`, supported in `ext`.
fn analytic_orbit(phis: &[LaurentPoly], n: usize, ext: &Window) -> Vec<(usize, i64, LaurentPoly)> {
    let mut out = Vec::new();
    for (j, phi) in phis.iter().enumerate() {
        let mut k = 0i64;
        loop {
            let s = phi.shift(k * n as i64);
            if !s.supported_in(ext) {
                break;
            }
            out.push((j, k, s));
            k += 1;
        }
    }
    out
}

/// `z^{kn} g` for every `k` with the shift supported in `ext`.
fn full_orbit(gens: &[LaurentPoly], n: usize, ext: &Window) -> Vec<LaurentPoly> {
    let step = n as i64;
    let mut out = Vec::new();
    for g in gens {
        let Some(s) = g.support() else { continue };
        let kmin = (ext.lo - s.lo).div_euclid(step);
        let kmax = (ext.hi - s.hi).div_euclid(step);
        out.extend((kmin..=kmax).map(|k| g.shift(k * step)).filter(|p| p.supported_in(ext)));
    }
    out
}

fn check_phis_in(phis: &[LaurentPoly], window: &Window) -> Result<()> {
    for (j, phi) in phis.iter().enumerate() {
        if !phi.supported_in(window) {
            return error::range(format!("phi_{} is not supported in the window {window}", j + 1));
        }
    }
    Ok(())
}

/// `(span{z^{kn} phi_j : k >= 0} ⊕ span{z^{kn} g : k ∈ Z, g ∈ kernel_gens}) ∩ P[lo, hi]`.
///
/// The kernel generators seed a doubly invariant part. Each must annihilate
/// the conjugated rows of the mod-n matrix, the shifted `phi` family must be
/// orthonormal and the kernel orbits must be orthogonal to it, all to `1e-9`.
/// Intersecting the full orbits with the window, rather than keeping only
/// the shifts that fit, keeps the result invariant under `z^n` away from
/// the window top.
pub fn build_invariant(
    tuple: &UnimodularTuple,
    kernel_gens: &[LaurentPoly],
    window: Window,
) -> Result<TruncatedSubspace> {
    let phis = require_exact(tuple)?;
    check_phis_in(phis, &window)?;
    let a = matrix_of(tuple)?;
    for (k, g) in kernel_gens.iter().enumerate() {
        if !g.supported_in(&window) {
            return error::range(format!("kernel generator {k} is not supported in the window {window}"));
        }
        let res: f64 = kernel_residuals(&a, g)?.iter().map(|r| r.norm_l2()).fold(0.0, f64::max);
        if res > DIRECT_SUM_TOL * g.norm_l2().max(1.0) {
            return error::domain(format!("kernel generator {k} has residual {res:e}"));
        }
    }
    let seeds: Vec<LaurentPoly> = phis.iter().chain(kernel_gens).cloned().collect();
    let ext = orbit_window(&window, &seeds, tuple.n());
    let family: Vec<LaurentPoly> = analytic_orbit(phis, tuple.n(), &ext).into_iter().map(|x| x.2).collect();
    let fm = linalg::to_matrix(&family, &ext);
    let gram_err = linalg::orthonormality_error(&fm);
    if gram_err > DIRECT_SUM_TOL {
        return error::domain(format!("shifted phi family is not orthonormal (deviation {gram_err:e})"));
    }
    let kernel = full_orbit(kernel_gens, tuple.n(), &ext);
    let km = linalg::range_basis(&linalg::to_matrix(&kernel, &ext), RANK_TOL);
    let cross = linalg::max_abs(&(fm.adjoint() * &km));
    if cross > DIRECT_SUM_TOL {
        return error::domain(format!("kernel generators are not orthogonal to the phi family ({cross:e})"));
    }
    let mut all = family;
    all.extend(kernel);
    let inside = TruncatedSubspace::span(&all, ext)?.within(window.lo, window.hi);
    let basis: Vec<LaurentPoly> = inside.basis().iter().map(|b| b.restrict(&window)).collect();
    TruncatedSubspace::span(&basis, window)
}

/// `f ≈ phi_1 h_1 + ... + phi_r h_r + kernel_part` by least squares.
#[derive(Clone, Debug, Serialize)]
pub struct Membership {
    /// Each `h_j` is a polynomial in `z^n` with nonnegative powers.
    pub h: Vec<LaurentPoly>,
    pub kernel_part: LaurentPoly,
    /// Dimension of the kernel space inside `M`.
    pub kernel_dim: usize,
    /// `L²` norm of `f` minus the fit.
    pub residual: f64,
    pub pass: bool,
    pub tolerance: f64,
}

/// Least-squares model for [`verify_structure_membership`], reusable across
/// many `f` in the same subspace.
///
/// The columns are the shifts `z^{kn} phi_j`, `k >= 0`, and the shifts
/// `z^{kn} x` of the kernel space `x ∈ K ∩ M`, all inside a padded window.
/// Shifting the kernel space both ways reflects that it is doubly invariant,
/// so a kernel part that leaves the window is still found.
#[derive(Clone, Debug)]
pub struct StructureFit {
    n: usize,
    phis: Vec<LaurentPoly>,
    ext: Window,
    family: Vec<(usize, i64)>,
    columns: CMat,
    kernel_dim: usize,
}

impl StructureFit {
    pub fn new(m: &TruncatedSubspace, tuple: &UnimodularTuple) -> Result<Self> {
        let phis = require_exact(tuple)?.to_vec();
        let w = m.window();
        check_phis_in(&phis, &w)?;
        let n = tuple.n();
        let kernel = kernel_space(&matrix_of(tuple)?, &m.basis(), RANK_TOL)?;
        let ext = orbit_window(&w, &phis, n);
        let orbit = analytic_orbit(&phis, n, &ext);
        let step = n as i64;
        let reach = (w.lo - ext.lo).max(ext.hi - w.hi) / step;
        let mut hull = Vec::new();
        for x in &kernel {
            for k in -reach..=reach {
                hull.push(x.shift(k * step));
            }
        }
        let hq = linalg::range_basis(&linalg::to_matrix(&hull, &ext), RANK_TOL);
        let polys: Vec<LaurentPoly> = orbit.iter().map(|x| x.2.clone()).collect();
        let fm = linalg::to_matrix(&polys, &ext);
        let columns = CMat::from_fn(ext.len(), fm.ncols() + hq.ncols(), |r, c| {
            if c < fm.ncols() { fm[(r, c)] } else { hq[(r, c - fm.ncols())] }
        });
        Ok(StructureFit {
            n,
            phis,
            ext,
            family: orbit.iter().map(|x| (x.0, x.1)).collect(),
            columns,
            kernel_dim: kernel.len(),
        })
    }

    pub fn fit(&self, f: &LaurentPoly, tol: f64) -> Membership {
        let rhs = CMat::from_column_slice(self.ext.len(), 1, linalg::to_vec(f, &self.ext).as_slice());
        let x = linalg::lstsq(&self.columns, &rhs, RANK_TOL);
        let mut h = vec![LaurentPoly::zero(); self.phis.len()];
        for (idx, (j, k)) in self.family.iter().enumerate() {
            h[*j].add_term(k * self.n as i64, x[(idx, 0)]);
        }
        let nf = self.family.len();
        let kv = self.columns.columns(nf, self.columns.ncols() - nf) * x.rows(nf, x.nrows() - nf);
        let kernel_part = linalg::from_vec(kv.as_slice(), &self.ext);
        let mut fit = kernel_part.clone();
        for (phi, hj) in self.phis.iter().zip(&h) {
            fit = fit + phi * hj;
        }
        let residual = (f - &fit).norm_l2();
        Membership { h, kernel_part, kernel_dim: self.kernel_dim, residual, pass: residual <= tol, tolerance: tol }
    }
}

/// Fits `f` as `sum_j phi_j h_j` plus an element of the kernel space of `m`.
pub fn verify_structure_membership(
    m: &TruncatedSubspace,
    tuple: &UnimodularTuple,
    f: &LaurentPoly,
    tol: f64,
) -> Result<Membership> {
    Ok(StructureFit::new(m, tuple)?.fit(f, tol))
}

/// `||phi g||_M = ||g||_2` over fixture polynomials.
#[derive(Clone, Debug, Serialize)]
pub struct IsometryReport {
    pub pass: bool,
    pub checked: usize,
    /// Fixtures whose product with `phi` leaves the window.
    pub skipped: usize,
    pub max_relative_error: f64,
    /// Largest relative distance of `phi g` from `M`.
    pub max_membership_residual: f64,
    pub phi_analytic: bool,
    /// Relative deviation of `Gram_M(z I)` from `Gram_M(I)`, when validated.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metric_isometry_error: Option<f64>,
    pub tolerance: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BeurlingExtraction {
    pub phi: LaurentPoly,
    pub isometry: IsometryReport,
}

#[derive(Clone, Debug)]
pub struct BeurlingOptions {
    /// Check that `z` acts isometrically before extracting.
    pub validate_metric: bool,
    /// Polynomials `g` for the isometry report.
    pub fixtures: Vec<LaurentPoly>,
    pub tol: f64,
}

impl Default for BeurlingOptions {
    fn default() -> Self {
        BeurlingOptions { validate_metric: true, fixtures: Vec::new(), tol: 1e-9 }
    }
}

/// Rotates `p` so that its lowest coefficient above `1e-10 max |c|` is positive real.
pub fn gauge_fix(p: &LaurentPoly) -> LaurentPoly {
    let thr = 1e-10 * p.max_abs_coeff();
    match p.iter().find(|(_, c)| c.norm() > thr) {
        Some((_, c)) => p.scale(c.conj() / c.norm()),
        None => p.clone(),
    }
}

/// Relative deviation of the shift from an isometry on `M ∩ P[lo, hi-1]`.
pub fn shift_isometry_error(m: &InnerProductSpace) -> Result<f64> {
    let c = m.carrier();
    let w = c.window();
    let i = c.within(w.lo, w.hi - 1).basis();
    let zi: Vec<LaurentPoly> = i.iter().map(|b| b.shift(1)).collect();
    let res = zi.iter().map(|x| c.residual(x)).fold(0.0, f64::max);
    if res > INVARIANCE_TOL {
        return error::domain(format!("subspace is not invariant under z (residual {res:e})"));
    }
    let g0 = m.gram(&i);
    let g1 = m.gram(&zi);
    let scale = linalg::max_abs(&g0).max(f64::MIN_POSITIVE);
    Ok(linalg::max_abs(&(g1 - g0)) / scale)
}

/// Extracts the unit wandering vector `phi` of an `n = 1` shift-invariant space.
///
/// Fails with [`Error::WanderingDimension`] when the wandering space is not
/// one-dimensional.
pub fn beurling_extract(m: &InnerProductSpace, opts: &BeurlingOptions) -> Result<BeurlingExtraction> {
    let metric_isometry_error = if opts.validate_metric {
        let e = shift_isometry_error(m)?;
        if e > opts.tol {
            return error::domain(format!("z is not an isometry in this metric (deviation {e:e})"));
        }
        Some(e)
    } else {
        None
    };
    let ws = wandering_space(m, 1)?;
    if ws.dim() != 1 {
        return Err(Error::WanderingDimension { dim: ws.dim() });
    }
    let phi = gauge_fix(&ws.basis[0]);
    let w = m.window();
    let phi_support = phi.effective_support(SUPPORT_TOL * phi.max_abs_coeff());
    let mut checked = 0;
    let mut skipped = 0;
    let mut worst = 0.0f64;
    let mut worst_member = 0.0f64;
    for g in &opts.fixtures {
        let fits = match (phi_support, g.support()) {
            (Some(p), Some(s)) => w.contains(p.lo + s.lo) && w.contains(p.hi + s.hi),
            _ => false,
        };
        if !fits {
            skipped += 1;
            continue;
        }
        let x = &phi * g;
        let want = g.norm_l2().powi(2);
        let got = m.norm(&x).powi(2);
        worst = worst.max((got - want).abs() / want);
        worst_member = worst_member.max(m.carrier().residual(&x) / x.norm_l2());
        checked += 1;
    }
    let phi_analytic = phi.is_analytic(opts.tol);
    let pass = checked > 0 && worst <= opts.tol && worst_member <= opts.tol && phi_analytic;
    Ok(BeurlingExtraction {
        phi,
        isometry: IsometryReport {
            pass,
            checked,
            skipped,
            max_relative_error: worst,
            max_membership_residual: worst_member,
            phi_analytic,
            metric_isometry_error,
            tolerance: opts.tol,
        },
    })
}

/// Sine of the largest principal angle between `span(a)` and `span(b)` in `L²`.
pub fn principal_angle_sin(a: &[LaurentPoly], b: &[LaurentPoly]) -> f64 {
    let Some(win) = a
        .iter()
        .chain(b)
        .filter_map(|p| p.support())
        .reduce(|x, y| Window { lo: x.lo.min(y.lo), hi: x.hi.max(y.hi) })
    else {
        return 0.0;
    };
    let qa = linalg::range_basis(&linalg::to_matrix(a, &win), RANK_TOL);
    let qb = linalg::range_basis(&linalg::to_matrix(b, &win), RANK_TOL);
    if qa.ncols() != qb.ncols() {
        return 1.0;
    }
    linalg::sin_principal_angle(&qa, &qb)
}

/// Finite check that `M` is invariant under multiplication by the analytic
/// polynomial `p` in `z^n`: `p (M ∩ P[lo, hi - deg p]) ⊆ M`.
pub fn invariant_under_multiplier(m: &TruncatedSubspace, p: &LaurentPoly, n: usize, tol: f64) -> Result<CheckReport> {
    if n == 0 {
        return error::domain("n must be positive");
    }
    let step = n as i64;
    if p.iter().any(|(j, _)| j < 0 || j.rem_euclid(step) != 0) {
        return error::domain(format!("multiplier {p:?} is not an analytic polynomial in z^{n}"));
    }
    let deg = p.support().map(|s| s.hi).unwrap_or(0);
    let w = m.window();
    let i = m.within(w.lo, w.hi - deg);
    let worst = i.basis().iter().map(|b| m.residual(&(b * p))).fold(0.0, f64::max);
    Ok(CheckReport::new("multiplier_invariance", worst <= tol, tol)
        .with("degree", deg)
        .with("interior_dim", i.dim())
        .with("max_residual", finite(worst)))
}

/// For `1 <= p <= 2`, records `||b||_{2p/(2-p)}` (the sup norm at `p = 2`)
/// next to the isometry identity `||b f||_M = ||f||_{H²}`.
pub fn de_branges_p_check(b: &LaurentPoly, isometry: &IsometryReport, p: f64, grid: CircleGrid) -> Result<CheckReport> {
    if !(1.0..=2.0).contains(&p) {
        return error::domain(format!("exponent {p} outside [1, 2]"));
    }
    let f = synthesize(b, grid)?;
    let (exponent, value) = if p == 2.0 {
        (f64::INFINITY, sup_norm(&f))
    } else {
        let q = 2.0 * p / (2.0 - p);
        (q, p_norm(&f, q)?)
    };
    Ok(CheckReport::new("de_branges_p", isometry.pass && value.is_finite(), isometry.tolerance)
        .with("p", p)
        .with("exponent", if exponent.is_finite() { serde_json::json!(exponent) } else { serde_json::json!("inf") })
        .with("symbol_norm", finite(value))
        .with("isometry_error", finite(isometry.max_relative_error)))
}
