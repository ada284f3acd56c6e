//! Dense complex linear algebra on coefficient vectors.
//!
//! Elements of a [`Window`] are column vectors indexed by `j - lo`. Rank
//! decisions use singular values relative to the largest one. Matrices are
//! `nalgebra` values; factorizations run in `faer`.

use faer::{Mat, MatRef, Side};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::laurent::{LaurentPoly, Window};

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

/// Module-wide relative rank threshold.
pub const RANK_TOL: f64 = 1e-10;

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// Coefficients of `p` over `window`; coefficients outside are dropped.
pub fn to_vec(p: &LaurentPoly, window: &Window) -> CVec {
    let mut v = CVec::from_element(window.len(), zero());
    for (j, c) in p.restrict(window).iter() {
        v[window.offset(j)] = c;
    }
    v
}

pub fn from_vec(v: &[Complex64], window: &Window) -> LaurentPoly {
    LaurentPoly::from_terms(window.iter().zip(v.iter().copied()))
}

pub fn column_poly(m: &CMat, col: usize, window: &Window) -> LaurentPoly {
    from_vec(m.column(col).as_slice(), window)
}

/// Stacks the coefficient vectors of `polys` as columns.
pub fn to_matrix(polys: &[LaurentPoly], window: &Window) -> CMat {
    let mut m = CMat::from_element(window.len(), polys.len(), zero());
    for (k, p) in polys.iter().enumerate() {
        m.set_column(k, &to_vec(p, window));
    }
    m
}

pub fn to_polys(m: &CMat, window: &Window) -> Vec<LaurentPoly> {
    (0..m.ncols()).map(|k| column_poly(m, k, window)).collect()
}

fn to_faer(a: &CMat) -> Mat<Complex64> {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)])
}

fn from_faer(m: MatRef<'_, Complex64>) -> CMat {
    CMat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// Thin SVD `a = U diag(s) V^H` with `s` nonincreasing.
pub struct Svd {
    pub u: CMat,
    pub s: Vec<f64>,
    pub v: CMat,
}

pub fn svd(a: &CMat) -> Svd {
    let k = a.nrows().min(a.ncols());
    if k == 0 {
        return Svd { u: CMat::zeros(a.nrows(), 0), s: Vec::new(), v: CMat::zeros(a.ncols(), 0) };
    }
    let d = to_faer(a).thin_svd().expect("SVD converges");
    let s = (0..k).map(|i| d.S().column_vector()[i].re).collect();
    Svd { u: from_faer(d.U()), s, v: from_faer(d.V()) }
}

/// Lower Cholesky factor of a Hermitian positive definite matrix.
pub fn cholesky_lower(g: &CMat) -> Option<CMat> {
    if g.nrows() == 0 {
        return Some(CMat::zeros(0, 0));
    }
    to_faer(g).llt(Side::Lower).ok().map(|c| from_faer(c.L()))
}

/// The unitary factor of a QR factorization of a square matrix.
pub fn unitary_factor(g: &CMat) -> CMat {
    from_faer(to_faer(g).qr().compute_Q().as_ref())
}

fn singular_threshold(s: &[f64], rel: f64) -> f64 {
    rel * s.iter().copied().fold(0.0, f64::max)
}

/// Orthonormal basis of the column space, ranked with relative cutoff `rel`.
pub fn range_basis(a: &CMat, rel: f64) -> CMat {
    range_basis_floor(a, rel, 0.0)
}

/// As [`range_basis`], with cutoff `rel * max(sigma_max, floor)` so that a
/// matrix of pure roundoff has rank zero.
pub fn range_basis_floor(a: &CMat, rel: f64, floor: f64) -> CMat {
    if a.ncols() == 0 || a.nrows() == 0 {
        return CMat::zeros(a.nrows(), 0);
    }
    let d = svd(a);
    let cut = singular_threshold(&d.s, rel).max(rel * floor);
    let keep = d.s.iter().filter(|&&x| x > cut && x > 0.0).count();
    d.u.columns(0, keep).into_owned()
}

/// Numerical rank with relative cutoff `rel`.
pub fn rank(a: &CMat, rel: f64) -> usize {
    if a.ncols() == 0 || a.nrows() == 0 {
        return 0;
    }
    let s = svd(a).s;
    let cut = singular_threshold(&s, rel);
    s.iter().filter(|&&x| x > cut && x > 0.0).count()
}

/// Orthonormal basis of the orthogonal complement of the columns of `q`
/// (assumed orthonormal) inside `C^dim`.
pub fn complement(q: &CMat, dim: usize) -> CMat {
    if q.ncols() == 0 {
        return CMat::identity(dim, dim);
    }
    let proj = CMat::identity(dim, dim) - q * q.adjoint();
    range_basis_floor(&proj, 0.5, 1.0)
}

/// Orthonormal basis of `{x : a x = 0}` with singular values below
/// `rel * max(sigma_max, floor)` treated as zero.
pub fn null_space(a: &CMat, rel: f64, floor: f64) -> CMat {
    let n = a.ncols();
    if a.nrows() == 0 || n == 0 {
        return CMat::identity(n, n);
    }
    let d = svd(a);
    let top = d.s.iter().copied().fold(0.0, f64::max);
    let cut = rel * top.max(floor);
    let keep = d.s.iter().filter(|&&x| x > cut).count();
    // right singular vectors with large singular values span range(a^H)
    complement(&d.v.columns(0, keep).into_owned(), n)
}

/// Minimum-norm least-squares solution of `a x = b` with relative cutoff `rel`.
pub fn lstsq(a: &CMat, b: &CMat, rel: f64) -> CMat {
    if a.ncols() == 0 {
        return CMat::zeros(0, b.ncols());
    }
    let d = svd(a);
    let cut = singular_threshold(&d.s, rel).max(f64::MIN_POSITIVE);
    let mut utb = d.u.adjoint() * b;
    for (i, &s) in d.s.iter().enumerate() {
        let inv = if s > cut { 1.0 / s } else { 0.0 };
        utb.row_mut(i).scale_mut(inv);
    }
    &d.v * utb
}

/// Largest singular value.
pub fn spectral_norm(a: &CMat) -> f64 {
    if a.ncols() == 0 || a.nrows() == 0 {
        return 0.0;
    }
    svd(a).s.first().copied().unwrap_or(0.0)
}

/// `max |Q^H Q - I|` entrywise.
pub fn orthonormality_error(q: &CMat) -> f64 {
    let g = q.adjoint() * q;
    identity_deviation(&g)
}

pub fn identity_deviation(g: &CMat) -> f64 {
    let mut worst = 0.0f64;
    for r in 0..g.nrows() {
        for c in 0..g.ncols() {
            let want = if r == c { 1.0 } else { 0.0 };
            worst = worst.max((g[(r, c)] - want).norm());
        }
    }
    worst
}

pub fn max_abs(g: &CMat) -> f64 {
    g.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// Sine of the largest principal angle between `span(qa)` and `span(qb)`,
/// both with orthonormal columns: `||(I - Qb Qb^H) Qa||_2`.
pub fn sin_principal_angle(qa: &CMat, qb: &CMat) -> f64 {
    let residual = qa - qb * (qb.adjoint() * qa);
    spectral_norm(&residual)
}

/// Smallest and largest eigenvalue of a Hermitian matrix.
pub fn hermitian_extremes(h: &CMat) -> (f64, f64) {
    if h.nrows() == 0 {
        return (0.0, 0.0);
    }
    let sym = (h + h.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = to_faer(&sym).self_adjoint_eigenvalues(Side::Lower).expect("eigenvalues converge");
    (eig[0], eig[eig.len() - 1])
}

/// Deviation of `h` from being Hermitian.
pub fn hermitian_defect(h: &CMat) -> f64 {
    max_abs(&(h - h.adjoint()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn range_and_rank() {
        let a = CMat::from_row_slice(3, 2, &[c(1.0, 0.0), c(2.0, 0.0), c(1.0, 1.0), c(2.0, 2.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(rank(&a, RANK_TOL), 1);
        let q = range_basis(&a, RANK_TOL);
        assert_eq!(q.ncols(), 1);
        assert!(orthonormality_error(&q) < 1e-14);
    }

    #[test]
    fn null_space_of_wide_matrix() {
        let a = CMat::from_row_slice(1, 3, &[c(1.0, 0.0), c(0.0, 1.0), c(0.0, 0.0)]);
        let ns = null_space(&a, RANK_TOL, 0.0);
        assert_eq!(ns.ncols(), 2);
        assert!(max_abs(&(&a * &ns)) < 1e-14);
        assert!(orthonormality_error(&ns) < 1e-14);
        let zero = CMat::zeros(2, 3);
        assert_eq!(null_space(&zero, RANK_TOL, 1.0).ncols(), 3);
    }

    #[test]
    fn lstsq_recovers_coefficients() {
        let a = CMat::from_row_slice(3, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)]);
        let x = CMat::from_row_slice(2, 1, &[c(2.0, 1.0), c(-1.0, 0.0)]);
        let b = &a * &x;
        assert!(max_abs(&(lstsq(&a, &b, RANK_TOL) - x)) < 1e-13);
    }

    #[test]
    fn principal_angle_of_rotated_lines() {
        let qa = CMat::from_row_slice(2, 1, &[c(1.0, 0.0), c(0.0, 0.0)]);
        let t: f64 = 0.3;
        let qb = CMat::from_row_slice(2, 1, &[c(t.cos(), 0.0), c(t.sin(), 0.0)]);
        assert!((sin_principal_angle(&qa, &qb) - t.sin()).abs() < 1e-14);
        // unimodular phase does not change the span
        let qc = &qa * c(0.0, 1.0);
        assert!(sin_principal_angle(&qa, &qc) < 1e-15);
    }

    #[test]
    fn hermitian_spectrum() {
        let h = CMat::from_row_slice(2, 2, &[c(2.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(2.0, 0.0)]);
        let (lo, hi) = hermitian_extremes(&h);
        assert!((lo - 1.0).abs() < 1e-13 && (hi - 3.0).abs() < 1e-13);
        assert_eq!(hermitian_defect(&h), 0.0);
    }

    #[test]
    fn vec_round_trip() {
        let w = Window { lo: -2, hi: 3 };
        let p = LaurentPoly::from_real([(-2, 1.0), (3, -4.0)]);
        let v = to_vec(&p, &w);
        assert_eq!(from_vec(v.as_slice(), &w), p);
    }
}
