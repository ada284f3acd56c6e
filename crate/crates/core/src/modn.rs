//! Mod-n splittings, n-unimodular tuples and kernel spaces.
//!
//! Residues use mathematical mod: index `j` belongs to residue
//! `j.rem_euclid(n)` in `{0, .., n-1}`, so `z^{-1}` sits at residue `n-1`.
//! Component `i` (0-based here) is `f_i(z) = sum_k f^(kn+i) z^{kn}` and
//! `f = sum_i z^i f_i`.

use num_complex::Complex64;
use serde::Serialize;

use crate::circle::{synthesize, CircleFunction, CircleGrid, FourierSeries};
use crate::error::{self, Error, Result};
use crate::laurent::{LaurentPoly, Window};
use crate::linalg::{self, CMat, RANK_TOL};
use crate::literal::TupleFixture;

/// Default tolerance for grid unimodularity tests.
pub const UNIMODULAR_TOL: f64 = 1e-9;
/// Gram identity tolerance for shifted families.
pub const FAMILY_TOL: f64 = 1e-10;

/// `f = sum_i z^i components[i]` with every component a function of `z^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModNDecomposition<T> {
    pub n: usize,
    pub components: Vec<T>,
}

/// Things that split into mod-n components.
pub trait ModN: Sized {
    fn decompose_mod_n(&self, n: usize) -> Result<ModNDecomposition<Self>>;
    fn recombine(d: &ModNDecomposition<Self>) -> Result<Self>;
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return error::domain("n must be positive");
    }
    Ok(())
}

impl ModN for LaurentPoly {
    fn decompose_mod_n(&self, n: usize) -> Result<ModNDecomposition<Self>> {
        check_n(n)?;
        let m = n as i64;
        let mut components = vec![LaurentPoly::zero(); n];
        for (j, c) in self.iter() {
            let r = j.rem_euclid(m);
            components[r as usize].add_term(j - r, c);
        }
        Ok(ModNDecomposition { n, components })
    }

    fn recombine(d: &ModNDecomposition<Self>) -> Result<Self> {
        let mut out = LaurentPoly::zero();
        for (i, c) in d.components.iter().enumerate() {
            out = out + c.shift(i as i64);
        }
        Ok(out)
    }
}

/// On a grid, component `i` is sampled as `t^{-i} P_i(t)` where `P_i` keeps
/// the residue-`i` part of the spectrum. Requires `n < N/2`.
impl ModN for CircleFunction {
    fn decompose_mod_n(&self, n: usize) -> Result<ModNDecomposition<Self>> {
        check_n(n)?;
        if n as i64 >= self.grid().nyquist() {
            return error::range(format!("n = {n} must be below N/2 = {}", self.grid().nyquist()));
        }
        let m = n as i64;
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let components = (0..m)
            .map(|r| {
                self.multiplier(|j| if j.rem_euclid(m) == r { one } else { zero })
                    .shift(-r)
            })
            .collect();
        Ok(ModNDecomposition { n, components })
    }

    fn recombine(d: &ModNDecomposition<Self>) -> Result<Self> {
        let mut it = d.components.iter().enumerate();
        let (_, first) = it.next().ok_or_else(|| Error::Domain("no components".into()))?;
        let mut out = first.clone();
        for (i, c) in it {
            out = out.add(&c.shift(i as i64))?;
        }
        Ok(out)
    }
}

pub fn decompose_mod_n<T: ModN>(f: &T, n: usize) -> Result<ModNDecomposition<T>> {
    f.decompose_mod_n(n)
}

impl<T: ModN> ModNDecomposition<T> {
    pub fn reconstruct(&self) -> Result<T> {
        T::recombine(self)
    }
}

impl ModNDecomposition<LaurentPoly> {
    /// Every stored coefficient of every component sits at a multiple of `n`.
    pub fn supports_in_nz(&self) -> bool {
        let m = self.n as i64;
        self.components.iter().all(|c| c.iter().all(|(j, _)| j.rem_euclid(m) == 0))
    }
}

/// Outcome of a pointwise or exact identity test.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    pub pass: bool,
    pub max_deviation: f64,
    pub tolerance: f64,
}

impl Certificate {
    fn new(max_deviation: f64, tolerance: f64) -> Self {
        Certificate { pass: max_deviation <= tolerance, max_deviation, tolerance }
    }
}

/// `max_t |sum_i |phi_i(t)|^2 - 1| <= tol` on the grid.
pub fn is_n_unimodular(phi: &CircleFunction, n: usize, tol: f64) -> Result<Certificate> {
    let d = phi.decompose_mod_n(n)?;
    let mut dev = 0.0f64;
    for k in 0..phi.grid().size() {
        let s: f64 = d.components.iter().map(|c| c.samples()[k].norm_sqr()).sum();
        dev = dev.max((s - 1.0).abs());
    }
    Ok(Certificate::new(dev, tol))
}

/// Exact variant: `sum_i phi_i conj(phi_i) - 1` as a Laurent polynomial; the
/// deviation is its coefficient 1-norm, which bounds the pointwise error.
pub fn is_n_unimodular_exact(phi: &LaurentPoly, n: usize, tol: f64) -> Result<Certificate> {
    let d = phi.decompose_mod_n(n)?;
    let mut s = LaurentPoly::constant(Complex64::new(-1.0, 0.0));
    for c in &d.components {
        s = s + c * &c.conj();
    }
    Ok(Certificate::new(s.l1_coeffs(), tol))
}

/// An `r`-tuple `phi_1 .. phi_r` with `1 <= r <= n`, optionally with exact series.
#[derive(Clone, Debug)]
pub struct UnimodularTuple {
    n: usize,
    functions: Vec<CircleFunction>,
    exact: Option<Vec<LaurentPoly>>,
}

impl UnimodularTuple {
    fn check_shape(n: usize, r: usize) -> Result<()> {
        check_n(n)?;
        if r == 0 || r > n {
            return error::domain(format!("tuple size r = {r} must lie in 1..={n}"));
        }
        Ok(())
    }

    pub fn from_laurent(n: usize, polys: Vec<LaurentPoly>, grid: CircleGrid) -> Result<Self> {
        Self::check_shape(n, polys.len())?;
        let functions = polys.iter().map(|p| synthesize(p, grid)).collect::<Result<Vec<_>>>()?;
        Ok(UnimodularTuple { n, functions, exact: Some(polys) })
    }

    pub fn from_functions(n: usize, functions: Vec<CircleFunction>) -> Result<Self> {
        Self::check_shape(n, functions.len())?;
        let grid = functions[0].grid();
        if functions.iter().any(|f| f.grid() != grid) {
            return error::domain("tuple functions live on different grids");
        }
        Ok(UnimodularTuple { n, functions, exact: None })
    }

    /// Exact series are kept when every literal carries coefficients.
    pub fn from_fixture(fx: &TupleFixture, default: CircleGrid) -> Result<Self> {
        if fx.functions.len() != fx.r {
            return Err(Error::Parse(format!(
                "tuple declares r = {} but lists {} functions",
                fx.r,
                fx.functions.len()
            )));
        }
        let exact: Option<Vec<LaurentPoly>> = fx.functions.iter().map(|l| l.to_laurent()).collect();
        match exact {
            Some(polys) => {
                let grid = fx.functions[0].grid(default)?;
                Self::from_laurent(fx.n, polys, grid)
            }
            None => Self::from_functions(
                fx.n,
                fx.functions.iter().map(|l| l.to_function(default)).collect::<Result<_>>()?,
            ),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.functions.len()
    }

    pub fn grid(&self) -> CircleGrid {
        self.functions[0].grid()
    }

    pub fn functions(&self) -> &[CircleFunction] {
        &self.functions
    }

    pub fn exact(&self) -> Option<&[LaurentPoly]> {
        self.exact.as_deref()
    }

    /// Each `phi_j` is n-unimodular within `tol` on the grid.
    pub fn check_unimodular(&self, tol: f64) -> Result<Certificate> {
        let mut worst = 0.0f64;
        for f in &self.functions {
            worst = worst.max(is_n_unimodular(f, self.n, tol)?.max_deviation);
        }
        Ok(Certificate::new(worst, tol))
    }
}

/// The `r x n` matrix `A = (phi_ji)` of mod-n components.
#[derive(Clone, Debug)]
pub struct ModMatrix {
    n: usize,
    entries: Vec<Vec<CircleFunction>>,
    exact: Option<Vec<Vec<LaurentPoly>>>,
}

impl ModMatrix {
    /// A matrix of constant entries.
    pub fn constant(rows: &[Vec<Complex64>], grid: CircleGrid) -> Result<Self> {
        let exact = rows
            .iter()
            .map(|row| row.iter().map(|&c| LaurentPoly::constant(c)).collect())
            .collect();
        Self::from_laurent_entries(exact, grid)
    }

    /// Entries must be supported on multiples of the column count `n`.
    pub fn from_laurent_entries(rows: Vec<Vec<LaurentPoly>>, grid: CircleGrid) -> Result<Self> {
        let n = rows.first().map(|r| r.len()).unwrap_or(0);
        check_n(n)?;
        if rows.iter().any(|r| r.len() != n) {
            return error::domain("ragged matrix rows");
        }
        let m = n as i64;
        for p in rows.iter().flatten() {
            if p.iter().any(|(j, _)| j.rem_euclid(m) != 0) {
                return error::domain(format!("matrix entry {p:?} is not a function of z^{n}"));
            }
        }
        let entries = rows
            .iter()
            .map(|row| row.iter().map(|p| synthesize(p, grid)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(ModMatrix { n, entries, exact: Some(rows) })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.entries.len()
    }

    pub fn grid(&self) -> CircleGrid {
        self.entries[0][0].grid()
    }

    pub fn entry(&self, j: usize, i: usize) -> &CircleFunction {
        &self.entries[j][i]
    }

    pub fn exact_entry(&self, j: usize, i: usize) -> Option<&LaurentPoly> {
        self.exact.as_ref().map(|e| &e[j][i])
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }
}

/// Entry `(j, i)` is the `i`-th mod-n component of `phi_j`.
pub fn matrix_of(tuple: &UnimodularTuple) -> Result<ModMatrix> {
    let n = tuple.n();
    let entries = tuple
        .functions()
        .iter()
        .map(|f| Ok(f.decompose_mod_n(n)?.components))
        .collect::<Result<Vec<_>>>()?;
    let exact = match tuple.exact() {
        Some(polys) => Some(
            polys
                .iter()
                .map(|p| Ok(p.decompose_mod_n(n)?.components))
                .collect::<Result<Vec<_>>>()?,
        ),
        None => None,
    };
    Ok(ModMatrix { n, entries, exact })
}

/// Pointwise `A A^* = I_r` on the grid, reporting the largest entrywise deviation.
pub fn check_rows_orthonormal(a: &ModMatrix, tol: f64) -> Certificate {
    let mut worst = 0.0f64;
    for t in 0..a.grid().size() {
        for j in 0..a.r() {
            for k in 0..a.r() {
                let s: Complex64 = (0..a.n())
                    .map(|i| a.entries[j][i].samples()[t] * a.entries[k][i].samples()[t].conj())
                    .sum();
                let want = if j == k { 1.0 } else { 0.0 };
                worst = worst.max((s - want).norm());
            }
        }
    }
    Certificate::new(worst, tol)
}

/// Gram matrix of `{z^{kn} phi_j : |k| <= K}` compared with the identity.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GramReport {
    pub pass: bool,
    pub max_deviation: f64,
    pub size: usize,
    pub tolerance: f64,
}

/// Orthonormality of the shifted family, using exact Laurent inner products
/// when the tuple carries them and grid quadrature otherwise.
pub fn check_orthonormal_family(tuple: &UnimodularTuple, k_max: usize) -> Result<GramReport> {
    let n = tuple.n() as i64;
    let reach = k_max as i64 * n;
    let window = tuple.grid().window();
    let supports: Vec<Option<Window>> = match tuple.exact() {
        Some(polys) => polys.iter().map(|p| p.support()).collect(),
        None => tuple
            .functions()
            .iter()
            .map(|f| f.to_laurent().effective_support(1e-13 * (1.0 + f.coeff_max())))
            .collect(),
    };
    for s in supports.iter().flatten() {
        if !window.contains(s.lo - reach) || !window.contains(s.hi + reach) {
            return error::range(format!(
                "shifts by up to {reach} push support {s} outside the grid window {window}"
            ));
        }
    }
    let r = tuple.r();
    let members: Vec<(i64, usize)> = (-(k_max as i64)..=k_max as i64)
        .flat_map(|k| (0..r).map(move |j| (k, j)))
        .collect();
    let inner = |(k, j): (i64, usize), (l, m): (i64, usize)| -> Result<Complex64> {
        let d = (k - l) * n;
        match tuple.exact() {
            Some(p) => Ok(p[j].shift(d).inner(&p[m])),
            None => tuple.functions()[j].shift(d).inner_product(&tuple.functions()[m]),
        }
    };
    let mut worst = 0.0f64;
    for (a, &x) in members.iter().enumerate() {
        for (b, &y) in members.iter().enumerate().skip(a) {
            let g = inner(x, y)?;
            let want = if a == b { 1.0 } else { 0.0 };
            worst = worst.max((g - want).norm());
        }
    }
    Ok(GramReport {
        pass: worst <= FAMILY_TOL,
        max_deviation: worst,
        size: members.len(),
        tolerance: FAMILY_TOL,
    })
}

/// The residuals `rho_j(f) = sum_i conj(phi_ji) f_i` as exact series.
pub fn kernel_residuals(a: &ModMatrix, f: &LaurentPoly) -> Result<Vec<LaurentPoly>> {
    let Some(exact) = &a.exact else {
        return error::domain("exact residuals need a matrix with Laurent entries");
    };
    let comps = f.decompose_mod_n(a.n())?.components;
    Ok(exact
        .iter()
        .map(|row| {
            row.iter()
                .zip(&comps)
                .fold(LaurentPoly::zero(), |acc, (phi, fi)| acc + &phi.conj() * fi)
        })
        .collect())
}

/// Residuals sampled on the matrix grid.
pub fn kernel_residuals_on_grid(a: &ModMatrix, f: &LaurentPoly) -> Result<Vec<CircleFunction>> {
    let g = synthesize(f, a.grid())?;
    let comps = g.decompose_mod_n(a.n())?.components;
    (0..a.r())
        .map(|j| {
            let mut acc = CircleFunction::zero(a.grid());
            for (i, fi) in comps.iter().enumerate() {
                acc = acc.add(&a.entries[j][i].conj().mul(fi)?)?;
            }
            Ok(acc)
        })
        .collect()
}

/// Orthonormal basis of `K ∩ span(basis)` where `K = {f : rho_j(f) = 0 for all j}`.
///
/// The basis is orthonormalized first; the stacked residual map is then
/// assembled exactly from Laurent coefficients when `a` carries them, and
/// by grid evaluation scaled by `1/sqrt(N)` otherwise. Singular values below
/// `tol * max(sigma_max, 1)` count as zero.
pub fn kernel_space(a: &ModMatrix, basis: &[LaurentPoly], tol: f64) -> Result<Vec<LaurentPoly>> {
    let nonzero: Vec<&LaurentPoly> = basis.iter().filter(|p| !p.is_zero()).collect();
    if nonzero.is_empty() {
        return Ok(Vec::new());
    }
    let window = nonzero
        .iter()
        .filter_map(|p| p.support())
        .reduce(|x, y| Window { lo: x.lo.min(y.lo), hi: x.hi.max(y.hi) })
        .expect("nonzero polynomials have support");
    let owned: Vec<LaurentPoly> = nonzero.into_iter().cloned().collect();
    let q = linalg::range_basis(&linalg::to_matrix(&owned, &window), RANK_TOL);
    let qpolys = linalg::to_polys(&q, &window);
    if qpolys.is_empty() {
        return Ok(Vec::new());
    }
    let residual_map = if a.is_exact() {
        let res: Vec<Vec<LaurentPoly>> =
            qpolys.iter().map(|p| kernel_residuals(a, p)).collect::<Result<_>>()?;
        let rwin = res
            .iter()
            .flatten()
            .filter_map(|p| p.support())
            .reduce(|x, y| Window { lo: x.lo.min(y.lo), hi: x.hi.max(y.hi) });
        match rwin {
            None => CMat::zeros(0, qpolys.len()),
            Some(rwin) => {
                let rows = a.r() * rwin.len();
                let mut m = CMat::zeros(rows, qpolys.len());
                for (c, per_row) in res.iter().enumerate() {
                    for (j, rho) in per_row.iter().enumerate() {
                        for (t, v) in linalg::to_vec(rho, &rwin).iter().enumerate() {
                            m[(j * rwin.len() + t, c)] = *v;
                        }
                    }
                }
                m
            }
        }
    } else {
        let size = a.grid().size();
        let scale = 1.0 / (size as f64).sqrt();
        let mut m = CMat::zeros(a.r() * size, qpolys.len());
        for (c, p) in qpolys.iter().enumerate() {
            for (j, rho) in kernel_residuals_on_grid(a, p)?.iter().enumerate() {
                for (t, v) in rho.samples().iter().enumerate() {
                    m[(j * size + t, c)] = v * scale;
                }
            }
        }
        m
    };
    let null = linalg::null_space(&residual_map, tol, 1.0);
    Ok(linalg::to_polys(&(q * null), &window))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn grid() -> CircleGrid {
        CircleGrid::new(64).unwrap()
    }

    fn real(terms: &[(i64, f64)]) -> LaurentPoly {
        LaurentPoly::from_real(terms.iter().copied())
    }

    const S: f64 = std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn binning_examples() {
        let d = real(&[(0, 1.0), (1, 1.0), (2, 1.0)]).decompose_mod_n(2).unwrap();
        assert_eq!(d.components, vec![real(&[(0, 1.0), (2, 1.0)]), real(&[(0, 1.0)])]);
        let d = LaurentPoly::z(3).decompose_mod_n(2).unwrap();
        assert_eq!(d.components, vec![LaurentPoly::zero(), LaurentPoly::z(2)]);
        // z^{-1} lives at residue 2 and reappears as z^2 * z^{-3}
        let f = real(&[(-1, 1.0), (1, 1.0)]);
        let d = f.decompose_mod_n(3).unwrap();
        assert_eq!(d.components, vec![LaurentPoly::zero(), LaurentPoly::one(), LaurentPoly::z(-3)]);
        assert!(d.supports_in_nz());
        assert_eq!(d.reconstruct().unwrap(), f);
    }

    #[test]
    fn grid_decomposition_matches_laurent() {
        let f = LaurentPoly::from_terms([(-5, c(1.0, 2.0)), (0, c(0.5, 0.0)), (7, c(0.0, -1.0))]);
        let g = synthesize(&f, grid()).unwrap();
        let dg = g.decompose_mod_n(3).unwrap();
        let dl = f.decompose_mod_n(3).unwrap();
        for (cg, cl) in dg.components.iter().zip(&dl.components) {
            assert!(cg.max_distance(&synthesize(cl, grid()).unwrap()).unwrap() < 1e-13);
        }
        assert!(dg.reconstruct().unwrap().max_distance(&g).unwrap() < 1e-13);
        assert!(matches!(g.decompose_mod_n(32), Err(Error::Range(_))));
        assert!(matches!(f.decompose_mod_n(0), Err(Error::Domain(_))));
    }

    #[test]
    fn unimodular_examples() {
        let z5 = CircleFunction::monomial(grid(), 5).unwrap();
        for n in 1..5 {
            assert!(is_n_unimodular(&z5, n, 1e-12).unwrap().pass);
        }
        let half = synthesize(&real(&[(0, S), (1, S)]), grid()).unwrap();
        assert!(is_n_unimodular(&half, 2, 1e-12).unwrap().pass);
        let full = synthesize(&real(&[(0, 1.0), (1, 1.0)]), grid()).unwrap();
        let cert = is_n_unimodular(&full, 2, 1e-9).unwrap();
        assert!(!cert.pass);
        assert!((cert.max_deviation - 1.0).abs() < 1e-12);
        assert!(is_n_unimodular_exact(&real(&[(0, S), (1, S)]), 2, 1e-15).unwrap().pass);
    }

    fn two_by_two() -> UnimodularTuple {
        UnimodularTuple::from_laurent(2, vec![real(&[(0, S), (1, S)]), real(&[(0, S), (1, -S)])], grid())
            .unwrap()
    }

    #[test]
    fn matrix_examples() {
        let a = matrix_of(&two_by_two()).unwrap();
        let want = [[S, S], [S, -S]];
        for j in 0..2 {
            for i in 0..2 {
                assert_eq!(a.exact_entry(j, i).unwrap(), &LaurentPoly::constant(c(want[j][i], 0.0)));
            }
        }
        let cert = check_rows_orthonormal(&a, 1e-12);
        assert!(cert.pass && cert.max_deviation < 1e-12);
        let t = UnimodularTuple::from_laurent(3, vec![LaurentPoly::z(1)], grid()).unwrap();
        let a = matrix_of(&t).unwrap();
        assert_eq!(a.exact_entry(0, 1).unwrap(), &LaurentPoly::one());
        assert!(a.exact_entry(0, 0).unwrap().is_zero() && a.exact_entry(0, 2).unwrap().is_zero());
    }

    #[test]
    fn rows_orthonormal_controls() {
        let bad = ModMatrix::constant(&[vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 0.0)]], grid())
            .unwrap();
        assert!(!check_rows_orthonormal(&bad, 1e-9).pass);
        let u = ModMatrix::constant(&[vec![c(0.0, S), c(S, 0.0)], vec![c(S, 0.0), c(0.0, S)]], grid()).unwrap();
        assert!(check_rows_orthonormal(&u, 1e-12).pass);
        assert!(ModMatrix::from_laurent_entries(vec![vec![LaurentPoly::z(1), LaurentPoly::one()]], grid()).is_err());
    }

    #[test]
    fn family_examples() {
        let z = UnimodularTuple::from_laurent(2, vec![LaurentPoly::z(1)], grid()).unwrap();
        assert!(check_orthonormal_family(&z, 3).unwrap().pass);
        let r = check_orthonormal_family(&two_by_two(), 4).unwrap();
        assert!(r.pass && r.size == 18);
        let half = UnimodularTuple::from_laurent(2, vec![real(&[(0, 0.5), (1, 0.5)])], grid()).unwrap();
        let r = check_orthonormal_family(&half, 1).unwrap();
        assert!(!r.pass && (r.max_deviation - 0.5).abs() < 1e-15);
        let wide = UnimodularTuple::from_laurent(2, vec![LaurentPoly::z(30)], grid()).unwrap();
        assert!(matches!(check_orthonormal_family(&wide, 1), Err(Error::Range(_))));
        // grid-only tuples fall back to quadrature
        let gz = UnimodularTuple::from_functions(2, vec![CircleFunction::monomial(grid(), 1).unwrap()]).unwrap();
        assert!(check_orthonormal_family(&gz, 3).unwrap().pass);
    }

    #[test]
    fn tuple_shape_is_checked() {
        assert!(UnimodularTuple::from_laurent(1, vec![LaurentPoly::one(), LaurentPoly::one()], grid()).is_err());
        assert!(UnimodularTuple::from_laurent(2, vec![], grid()).is_err());
    }

    #[test]
    fn kernel_examples() {
        let t = UnimodularTuple::from_laurent(2, vec![LaurentPoly::z(1)], grid()).unwrap();
        let a = matrix_of(&t).unwrap();
        let basis = vec![LaurentPoly::one(), LaurentPoly::z(1), LaurentPoly::z(2)];
        let k = kernel_space(&a, &basis, 1e-10).unwrap();
        assert_eq!(k.len(), 2);
        for p in &k {
            assert!(p.coeff(1).norm() < 1e-14);
        }
        let u = ModMatrix::constant(&[vec![c(S, 0.0), c(S, 0.0)], vec![c(S, 0.0), c(-S, 0.0)]], grid()).unwrap();
        assert!(kernel_space(&u, &basis, 1e-10).unwrap().is_empty());
        let id = ModMatrix::constant(&[vec![c(1.0, 0.0)]], grid()).unwrap();
        assert!(kernel_space(&id, &basis, 1e-10).unwrap().is_empty());
        assert!(kernel_space(&id, &[], 1e-10).unwrap().is_empty());
    }

    #[test]
    fn kernel_on_grid_matches_exact() {
        let t = UnimodularTuple::from_functions(2, vec![CircleFunction::monomial(grid(), 1).unwrap()]).unwrap();
        let a = matrix_of(&t).unwrap();
        let basis = vec![LaurentPoly::one(), LaurentPoly::z(1), LaurentPoly::z(2)];
        assert_eq!(kernel_space(&a, &basis, 1e-10).unwrap().len(), 2);
    }
}
