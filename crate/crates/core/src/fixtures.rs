//! Seeded random fixtures.
//!
//! Every generator draws from a ChaCha8 stream selected by `(seed, index)`,
//! so fixture `k` of a batch does not depend on how many others were drawn
//! or in which order they were evaluated.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::circle::{synthesize, CircleFunction, CircleGrid};
use crate::error::Result;
use crate::laurent::{LaurentPoly, Window};
use crate::linalg::{self, CMat};
use crate::subspaces::gauge_fix;

/// Generator for fixture number `index` of the batch identified by `seed`.
pub fn fixture_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn gaussian(rng: &mut impl Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Complex Gaussian coefficients on every index of `window`.
pub fn random_laurent(rng: &mut impl Rng, window: Window) -> LaurentPoly {
    LaurentPoly::from_terms(window.iter().map(|j| (j, gaussian(rng))).collect::<Vec<_>>())
}

/// `random_laurent` on `[-degree, degree]`, sampled on `grid`.
pub fn random_band_limited(rng: &mut impl Rng, degree: usize, grid: CircleGrid) -> Result<CircleFunction> {
    let d = degree as i64;
    synthesize(&random_laurent(rng, Window { lo: -d, hi: d }), grid)
}

/// Analytic polynomial of degree at most `max_degree`.
pub fn random_polynomial(rng: &mut impl Rng, max_degree: usize) -> LaurentPoly {
    let d = rng.random_range(0..=max_degree) as i64;
    random_laurent(rng, Window { lo: 0, hi: d })
}

/// Analytic unit-norm polynomial of degree at most `max_degree`, gauge fixed
/// so that its constant coefficient is positive real.
pub fn random_analytic_unit(rng: &mut impl Rng, max_degree: usize) -> LaurentPoly {
    loop {
        let p = random_polynomial(rng, max_degree);
        // a tiny constant coefficient makes the gauge ill-conditioned
        if p.coeff(0).norm() > 0.1 {
            let p = gauge_fix(&p);
            return p.scale(Complex64::new(1.0 / p.norm_l2(), 0.0));
        }
    }
}

/// `c |p|^2` with `p` analytic of degree `degree` and `c` in `[0.5, 2]`.
pub fn random_nonnegative(rng: &mut impl Rng, degree: usize, grid: CircleGrid) -> Result<CircleFunction> {
    let p = random_laurent(rng, Window { lo: 0, hi: degree as i64 });
    let c = rng.random_range(0.5..2.0);
    let q = &p * &p.conj();
    let f = synthesize(&q.scale(Complex64::new(c / p.norm_l2().powi(2), 0.0)), grid)?;
    Ok(f.map(|v| Complex64::new(v.re.max(0.0), 0.0)))
}

/// `r x n` matrix with orthonormal rows, taken from the QR factor of a complex Gaussian matrix.
pub fn random_unitary_rows(rng: &mut impl Rng, r: usize, n: usize) -> CMat {
    let g = CMat::from_fn(n, n, |_, _| gaussian(rng));
    let q = linalg::unitary_factor(&g);
    CMat::from_fn(r, n, |j, i| q[(j, i)])
}

/// Unimodular tuple built from a constant unitary mixing of monomials:
/// `phi_j = z^{n p_j} sum_i U_ji z^i z^{n m_i}`.
#[derive(Clone, Debug)]
pub struct UnitaryTuple {
    pub n: usize,
    pub unitary: CMat,
    /// `m_i`, one per residue class.
    pub column_powers: Vec<i64>,
    /// `p_j`, one per function.
    pub row_powers: Vec<i64>,
    pub phis: Vec<LaurentPoly>,
}

impl UnitaryTuple {
    /// `kappa_v = sum_i v_i z^i z^{n m_i}` for an orthonormal basis of vectors `v` orthogonal to the rows of `U`.
    pub fn kernel_vectors(&self) -> Vec<LaurentPoly> {
        let rows = self.unitary.adjoint();
        let comp = linalg::complement(&rows, self.n);
        (0..comp.ncols())
            .map(|c| {
                LaurentPoly::from_terms(
                    (0..self.n)
                        .map(|i| (i as i64 + self.n as i64 * self.column_powers[i], comp[(i, c)].conj()))
                        .collect::<Vec<_>>(),
                )
            })
            .collect()
    }
}

pub fn random_unimodular_tuple(rng: &mut impl Rng, n: usize, r: usize, max_power: i64) -> UnitaryTuple {
    let unitary = random_unitary_rows(rng, r, n);
    let column_powers: Vec<i64> = (0..n).map(|_| rng.random_range(0..=max_power)).collect();
    let row_powers: Vec<i64> = (0..r).map(|_| rng.random_range(0..=max_power)).collect();
    let step = n as i64;
    let phis = (0..r)
        .map(|j| {
            LaurentPoly::from_terms(
                (0..n)
                    .map(|i| (i as i64 + step * (column_powers[i] + row_powers[j]), unitary[(j, i)]))
                    .collect::<Vec<_>>(),
            )
        })
        .collect();
    UnitaryTuple { n, unitary, column_powers, row_powers, phis }
}

/// Adds `eps z^m` to one function, with `eps` in `[0.05, 0.3]` and `m` outside every support.
pub fn perturb_tuple(rng: &mut impl Rng, phis: &[LaurentPoly], max_degree: i64) -> Vec<LaurentPoly> {
    let taken: Vec<i64> = phis.iter().flat_map(|p| p.iter().map(|(j, _)| j)).collect();
    let free: Vec<i64> = (0..=max_degree).filter(|j| !taken.contains(j)).collect();
    assert!(!free.is_empty(), "no free degree below {max_degree}");
    let m = free[rng.random_range(0..free.len())];
    let j = rng.random_range(0..phis.len());
    let eps = rng.random_range(0.05..=0.3);
    let mut out = phis.to_vec();
    out[j].add_term(m, Complex64::new(eps, 0.0));
    out
}
