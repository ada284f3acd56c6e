//! Harmonic conjugation, Riesz projection and outer flattening multipliers.
//!
//! Composing `exp` with a sampled function widens its spectrum, so the outer
//! constructions run on a refined grid: band-limited inputs are resampled
//! exactly by zero-padding, and the analytic defect of the result is
//! measured there rather than assumed.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::circle::{CircleFunction, FourierSeries};
use crate::error::{self, Result};
use crate::literal::FunctionLiteral;
use crate::modn::ModN;
use crate::report::{finite, CheckReport};

/// Refinement factor used by [`outer_exp`] and [`flattening_multiplier`].
pub const DEFAULT_OVERSAMPLE: usize = 16;
/// Default bound on the analytic defect of an outer factor.
pub const SPECTRAL_TOL: f64 = 1e-6;
/// Largest imaginary part tolerated in a "real" input.
pub const REAL_TOL: f64 = 1e-10;

fn check_real(g: &CircleFunction, what: &str) -> Result<()> {
    let im = g.max_imag();
    if im > REAL_TOL * g.sup_abs().max(1.0) {
        return error::domain(format!("{what} must be real-valued (max |Im| = {im:e})"));
    }
    Ok(())
}

/// Conjugate via the multiplier `-i sign(j)`, zero at `j = 0` and at the Nyquist index.
pub fn harmonic_conjugate(g: &CircleFunction) -> Result<CircleFunction> {
    check_real(g, "harmonic conjugate input")?;
    let nyq = g.grid().nyquist();
    let out = g.multiplier(|j| {
        if j == 0 || j == -nyq {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(0.0, -(j.signum() as f64))
        }
    });
    Ok(out.map(|c| Complex64::new(c.re, 0.0)))
}

/// `k = exp(-|g| - i (|g|)~)` together with its certificates.
#[derive(Clone, Debug)]
pub struct OuterWitness {
    /// `g` as supplied.
    pub source: CircleFunction,
    /// `(|g|)~` on the refined grid.
    pub conjugate: CircleFunction,
    /// `k` on the refined grid.
    pub outer: CircleFunction,
    pub oversample: usize,
    /// `max_{j<0} |k^(j)|`.
    pub analytic_defect: f64,
    /// `max | |k| e^{|g|} - 1 |`.
    pub modulus_error: f64,
    pub max_abs_outer: f64,
    pub min_abs_outer: f64,
}

impl Serialize for OuterWitness {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("OuterWitness", 7)?;
        st.serialize_field("source", &FunctionLiteral::from_function(&self.source))?;
        st.serialize_field("grid", &self.outer.grid().size())?;
        st.serialize_field("oversample", &self.oversample)?;
        st.serialize_field("analytic_defect", &finite(self.analytic_defect))?;
        st.serialize_field("modulus_error", &finite(self.modulus_error))?;
        st.serialize_field("max_abs_outer", &finite(self.max_abs_outer))?;
        st.serialize_field("min_abs_outer", &finite(self.min_abs_outer))?;
        st.end()
    }
}

impl OuterWitness {
    pub fn is_analytic_within(&self, tol: f64) -> bool {
        self.analytic_defect <= tol
    }
}

/// [`outer_exp_with`] at the default oversampling.
pub fn outer_exp(g: &CircleFunction) -> Result<OuterWitness> {
    outer_exp_with(g, DEFAULT_OVERSAMPLE)
}

/// Builds the outer factor on a grid `oversample` times finer than `g`'s.
pub fn outer_exp_with(g: &CircleFunction, oversample: usize) -> Result<OuterWitness> {
    check_real(g, "outer function source")?;
    let fine = g.upsample(oversample)?;
    let modulus = fine.abs();
    let conjugate = harmonic_conjugate(&modulus)?;
    let outer = modulus.zip_with(&conjugate, |a, c| (-(a.re) - Complex64::i() * c.re).exp())?;
    let mut modulus_error = 0.0f64;
    let mut max_abs = 0.0f64;
    let mut min_abs = f64::INFINITY;
    for (k, a) in outer.samples().iter().zip(modulus.samples()) {
        let m = k.norm();
        modulus_error = modulus_error.max((m * a.re.exp() - 1.0).abs());
        max_abs = max_abs.max(m);
        min_abs = min_abs.min(m);
    }
    let analytic_defect = outer.analytic_defect();
    Ok(OuterWitness {
        source: g.clone(),
        conjugate,
        outer,
        oversample,
        analytic_defect,
        modulus_error,
        max_abs_outer: max_abs,
        min_abs_outer: min_abs,
    })
}

/// `O = k_1 ... k_n` with the bounds it certifies.
#[derive(Clone, Debug, Serialize)]
pub struct Flattening {
    pub n: usize,
    pub oversample: usize,
    #[serde(skip)]
    pub multiplier: CircleFunction,
    pub witnesses: Vec<OuterWitness>,
    /// `sup |O| |f|^{1/2}`.
    pub sup_flattened: f64,
    /// `sup |O^2 f|`.
    pub sup_flattened_sq: f64,
    /// `sum_j sup |g_j| e^{-|g_j|}`.
    pub chain_bound: f64,
    pub max_defect: f64,
}

impl Flattening {
    /// The bounds `n + 1e-6 n`, `n^2 + 1e-5` and the defect tolerance.
    pub fn check(&self, defect_tol: f64) -> CheckReport {
        let n = self.n as f64;
        let bound = n + 1e-6 * n;
        let bound_sq = n * n + 1e-5;
        let pass = self.sup_flattened <= bound
            && self.sup_flattened_sq <= bound_sq
            && self.max_defect <= defect_tol;
        CheckReport::new("flattening", pass, defect_tol)
            .with("n", self.n)
            .with("sup_flattened", finite(self.sup_flattened))
            .with("bound", bound)
            .with("sup_flattened_sq", finite(self.sup_flattened_sq))
            .with("bound_sq", bound_sq)
            .with("chain_bound", finite(self.chain_bound))
            .with("max_defect", finite(self.max_defect))
    }
}

/// [`flattening_multiplier_with`] at the default oversampling.
pub fn flattening_multiplier(f: &CircleFunction, n: usize) -> Result<Flattening> {
    flattening_multiplier_with(f, n, DEFAULT_OVERSAMPLE)
}

/// Splits `|f|^{1/2} = g_1 + z g_2 + ... + z^{n-1} g_n` on the refined grid and
/// multiplies the outer factors of the `|g_j|`.
///
/// The refined grid contains the original nodes, so the returned suprema
/// dominate the coarse-grid ones.
pub fn flattening_multiplier_with(f: &CircleFunction, n: usize, oversample: usize) -> Result<Flattening> {
    if n == 0 {
        return error::domain("n must be positive");
    }
    if f.is_zero() {
        return error::domain("cannot flatten the zero function");
    }
    let fine = f.upsample(oversample)?;
    let root = fine.map(|c| Complex64::new(c.norm().sqrt(), 0.0));
    let comps = root.decompose_mod_n(n)?.components;
    let moduli: Vec<CircleFunction> = comps.iter().map(CircleFunction::abs).collect();
    let witnesses = moduli
        .par_iter()
        .map(|g| outer_exp_with(g, 1))
        .collect::<Result<Vec<_>>>()?;
    let mut multiplier = CircleFunction::constant(fine.grid(), Complex64::new(1.0, 0.0));
    for w in &witnesses {
        multiplier = multiplier.mul(&w.outer)?;
    }
    let sup_flattened = multiplier.mul(&root)?.sup_abs();
    let sup_flattened_sq = multiplier.mul(&multiplier)?.mul(&fine)?.sup_abs();
    let chain_bound = moduli
        .iter()
        .map(|g| g.samples().iter().map(|a| a.re * (-a.re).exp()).fold(0.0, f64::max))
        .sum();
    let max_defect = witnesses.iter().map(|w| w.analytic_defect).fold(0.0, f64::max);
    Ok(Flattening {
        n,
        oversample,
        multiplier,
        witnesses,
        sup_flattened,
        sup_flattened_sq,
        chain_bound,
        max_defect,
    })
}

/// Splits `f` into its `j >= 0` and `j < 0` parts; the Nyquist index goes to the latter.
pub fn riesz_projection(f: &CircleFunction) -> (CircleFunction, CircleFunction) {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let plus = f.multiplier(|j| if j >= 0 { one } else { zero });
    let minus = f.multiplier(|j| if j < 0 { one } else { zero });
    (plus, minus)
}

/// Pointwise `h / o`; `o` must not vanish on the grid.
pub fn divide(h: &CircleFunction, o: &CircleFunction) -> Result<CircleFunction> {
    let min = o.samples().iter().map(|c| c.norm()).fold(f64::INFINITY, f64::min);
    if !(min > 1e-300) {
        return error::domain("divisor vanishes on the grid");
    }
    h.zip_with(o, |a, b| a / b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle::{synthesize, CircleGrid};
    use crate::error::Error;
    use crate::laurent::LaurentPoly;

    fn grid() -> CircleGrid {
        CircleGrid::new(256).unwrap()
    }

    fn angle(f: impl Fn(f64) -> f64) -> CircleFunction {
        CircleFunction::from_angle_fn(grid(), f)
    }

    #[test]
    fn conjugate_examples() {
        let s = harmonic_conjugate(&angle(f64::cos)).unwrap();
        assert!(s.max_distance(&angle(f64::sin)).unwrap() < 1e-13);
        let c = harmonic_conjugate(&angle(|_| 3.0)).unwrap();
        assert!(c.sup_abs() < 1e-15);
        let m = harmonic_conjugate(&angle(f64::sin)).unwrap();
        assert!(m.max_distance(&angle(|t| -t.cos())).unwrap() < 1e-13);
        let z = CircleFunction::monomial(grid(), 1).unwrap();
        assert!(matches!(harmonic_conjugate(&z), Err(Error::Domain(_))));
    }

    #[test]
    fn outer_examples() {
        let zero = outer_exp(&angle(|_| 0.0)).unwrap();
        assert!(zero.outer.max_distance(&CircleFunction::constant(zero.outer.grid(), Complex64::new(1.0, 0.0))).unwrap() < 1e-15);
        assert_eq!(zero.analytic_defect, 0.0);
        let c = outer_exp(&angle(|_| 0.7)).unwrap();
        assert!((c.outer.samples()[3] - Complex64::new((-0.7f64).exp(), 0.0)).norm() < 1e-14);
        assert!(c.analytic_defect < 1e-15);
        let w = outer_exp(&angle(f64::cos)).unwrap();
        assert!(w.analytic_defect < 1e-6);
        assert!(w.modulus_error < 1e-12);
        assert!(w.max_abs_outer <= 1.0 + 1e-15 && w.min_abs_outer > 0.0);
    }

    #[test]
    fn flattening_examples() {
        let c = 2.5f64;
        let f = angle(|_| c);
        let one = flattening_multiplier(&f, 1).unwrap();
        assert!((one.multiplier.samples()[0].re - (-c.sqrt()).exp()).abs() < 1e-14);
        assert!((one.sup_flattened_sq - c * (-2.0 * c.sqrt()).exp()).abs() < 1e-14);
        let two = flattening_multiplier(&f, 2).unwrap();
        assert!((two.sup_flattened - c.sqrt() * (-c.sqrt()).exp()).abs() < 1e-13);
        let sq = angle(|t| (1.0 + t.cos()).powi(2));
        let r = flattening_multiplier(&sq, 2).unwrap();
        assert!(r.check(SPECTRAL_TOL).pass, "{:?}", r.check(SPECTRAL_TOL));
        assert!(r.sup_flattened <= r.chain_bound + 1e-12);
        assert!(matches!(flattening_multiplier(&angle(|_| 0.0), 1), Err(Error::Domain(_))));
    }

    #[test]
    fn riesz_examples() {
        let f = synthesize(&LaurentPoly::from_real([(1, 1.0), (-1, 1.0)]), grid()).unwrap();
        let (p, m) = riesz_projection(&f);
        assert!(p.max_distance(&CircleFunction::monomial(grid(), 1).unwrap()).unwrap() < 1e-14);
        assert!(m.max_distance(&CircleFunction::monomial(grid(), -1).unwrap()).unwrap() < 1e-14);
        assert!(p.add(&m).unwrap().max_distance(&f).unwrap() < 1e-14);
        let (p, m) = riesz_projection(&angle(|_| 1.0));
        assert!((p.samples()[5].re - 1.0).abs() < 1e-15 && m.sup_abs() < 1e-15);
    }

    #[test]
    fn division_by_outer() {
        let w = outer_exp(&angle(f64::cos)).unwrap();
        let h = w.outer.map(|c| c * 2.0);
        let q = divide(&h, &w.outer).unwrap();
        assert!(q.samples().iter().all(|c| (c - 2.0).norm() < 1e-13));
        let zero = CircleFunction::zero(grid());
        assert!(divide(&zero, &zero).is_err());
    }
}
