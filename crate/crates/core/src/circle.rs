//! Uniform grids on the unit circle and sampled functions.

use std::cell::RefCell;
use std::f64::consts::PI;
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{self, Error, Result};
use crate::laurent::{LaurentPoly, Window};

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn forward_plan(n: usize) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| p.borrow_mut().plan_fft_forward(n))
}

fn inverse_plan(n: usize) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(n))
}

/// `N` equally spaced nodes `e^{2 pi i k / N}` carrying mass `1/N` each.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CircleGrid {
    size: usize,
}

impl CircleGrid {
    pub const DEFAULT_SIZE: usize = 1024;

    pub fn new(size: usize) -> Result<Self> {
        if size < 8 || !size.is_power_of_two() {
            return error::domain(format!("grid size {size} must be a power of two and at least 8"));
        }
        Ok(CircleGrid { size })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn weight(&self) -> f64 {
        1.0 / self.size as f64
    }

    pub fn node(&self, k: usize) -> Complex64 {
        Complex64::from_polar(1.0, 2.0 * PI * (k % self.size) as f64 / self.size as f64)
    }

    pub fn nodes(&self) -> impl Iterator<Item = Complex64> + '_ {
        (0..self.size).map(|k| self.node(k))
    }

    /// `N/2`; representable indices are `[-N/2, N/2)`.
    pub fn nyquist(&self) -> i64 {
        (self.size / 2) as i64
    }

    /// The full coefficient window `[-N/2, N/2 - 1]`.
    pub fn window(&self) -> Window {
        Window { lo: -self.nyquist(), hi: self.nyquist() - 1 }
    }

    /// A grid `factor` times finer; the coarse nodes are a subset of the fine ones.
    pub fn refine(&self, factor: usize) -> Result<Self> {
        if !factor.is_power_of_two() {
            return error::domain(format!("refinement factor {factor} must be a power of two"));
        }
        CircleGrid::new(self.size * factor)
    }

    /// Storage slot of coefficient `j` in FFT order.
    fn slot(&self, j: i64) -> usize {
        j.rem_euclid(self.size as i64) as usize
    }

    fn check_index(&self, j: i64) -> Result<()> {
        if self.window().contains(j) {
            Ok(())
        } else {
            error::range(format!(
                "index {j} outside [{}, {}) for N = {}",
                -self.nyquist(),
                self.nyquist(),
                self.size
            ))
        }
    }
}

impl Default for CircleGrid {
    fn default() -> Self {
        CircleGrid { size: Self::DEFAULT_SIZE }
    }
}

impl Serialize for CircleGrid {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.size.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CircleGrid {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        CircleGrid::new(usize::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

/// A function on the circle held as grid samples, with a lazily computed spectrum.
#[derive(Clone)]
pub struct CircleFunction {
    grid: CircleGrid,
    samples: Vec<Complex64>,
    spectrum: OnceLock<Vec<Complex64>>,
}

impl fmt::Debug for CircleFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CircleFunction")
            .field("grid", &self.grid.size)
            .field("sup", &self.sup_abs())
            .finish()
    }
}

impl PartialEq for CircleFunction {
    fn eq(&self, other: &Self) -> bool {
        self.grid == other.grid && self.samples == other.samples
    }
}

impl CircleFunction {
    pub fn from_samples(grid: CircleGrid, samples: Vec<Complex64>) -> Result<Self> {
        if samples.len() != grid.size() {
            return error::domain(format!(
                "expected {} samples, got {}",
                grid.size(),
                samples.len()
            ));
        }
        Ok(Self::from_samples_unchecked(grid, samples))
    }

    fn from_samples_unchecked(grid: CircleGrid, samples: Vec<Complex64>) -> Self {
        CircleFunction { grid, samples, spectrum: OnceLock::new() }
    }

    /// Samples `f` at every node.
    pub fn from_fn(grid: CircleGrid, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self::from_samples_unchecked(grid, grid.nodes().map(f).collect())
    }

    /// Real samples `f(theta)` at `theta_k = 2 pi k / N`.
    pub fn from_angle_fn(grid: CircleGrid, f: impl Fn(f64) -> f64) -> Self {
        let n = grid.size() as f64;
        Self::from_samples_unchecked(
            grid,
            (0..grid.size())
                .map(|k| Complex64::new(f(2.0 * PI * k as f64 / n), 0.0))
                .collect(),
        )
    }

    pub fn constant(grid: CircleGrid, c: Complex64) -> Self {
        Self::from_samples_unchecked(grid, vec![c; grid.size()])
    }

    pub fn zero(grid: CircleGrid) -> Self {
        Self::constant(grid, Complex64::new(0.0, 0.0))
    }

    /// `z^j` on the grid.
    pub fn monomial(grid: CircleGrid, j: i64) -> Result<Self> {
        synthesize(&LaurentPoly::z(j), grid)
    }

    pub fn grid(&self) -> CircleGrid {
        self.grid
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<Complex64> {
        self.samples
    }

    /// All `N` coefficients in FFT order (slot `k` holds index `k` or `k - N`).
    fn spectrum(&self) -> &[Complex64] {
        self.spectrum.get_or_init(|| {
            let n = self.grid.size();
            let mut buf = self.samples.clone();
            forward_plan(n).process(&mut buf);
            let w = self.grid.weight();
            buf.iter_mut().for_each(|c| *c *= w);
            buf
        })
    }

    fn from_spectrum(grid: CircleGrid, mut spec: Vec<Complex64>) -> Self {
        inverse_plan(grid.size()).process(&mut spec);
        Self::from_samples_unchecked(grid, spec)
    }

    /// Coefficient `f^(j)`.
    pub fn coeff(&self, j: i64) -> Result<Complex64> {
        self.grid.check_index(j)?;
        Ok(self.spectrum()[self.grid.slot(j)])
    }

    /// Quadrature coefficients `f^(j)` for `j` in `window`, in index order.
    pub fn analyze(&self, window: Window) -> Result<Vec<Complex64>> {
        self.grid.check_index(window.lo)?;
        self.grid.check_index(window.hi)?;
        let spec = self.spectrum();
        Ok(window.iter().map(|j| spec[self.grid.slot(j)]).collect())
    }

    /// The whole spectrum as a Laurent polynomial; only exact zeros are dropped.
    pub fn to_laurent(&self) -> LaurentPoly {
        let spec = self.spectrum();
        LaurentPoly::from_terms(self.grid.window().iter().map(|j| (j, spec[self.grid.slot(j)])))
    }

    /// Applies the Fourier multiplier `m(j)` over the full window.
    pub fn multiplier(&self, m: impl Fn(i64) -> Complex64) -> Self {
        let spec = self.spectrum();
        let out: Vec<Complex64> = (0..self.grid.size())
            .map(|k| {
                let j = if k < self.grid.size() / 2 { k as i64 } else { k as i64 - self.grid.size() as i64 };
                spec[k] * m(j)
            })
            .collect();
        Self::from_spectrum(self.grid, out)
    }

    /// Fejer mean `sum_{|j| <= n} (1 - |j|/(n+1)) f^(j) z^j`.
    pub fn cesaro_mean(&self, n: usize) -> Result<Self> {
        if n as i64 >= self.grid.nyquist() {
            return error::range(format!("Cesaro order {n} must be below N/2 = {}", self.grid.nyquist()));
        }
        let n = n as i64;
        Ok(self.multiplier(|j| {
            if j.abs() <= n {
                Complex64::new(1.0 - j.abs() as f64 / (n + 1) as f64, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        }))
    }

    /// `f_w(z) = f(conj(w) z)`.
    ///
    /// Grid rotations permute the samples exactly; any other unimodular `w`
    /// goes through the spectral multiplier `conj(w)^j`.
    pub fn rotate(&self, w: Complex64) -> Result<Self> {
        if (w.norm() - 1.0).abs() > 1e-12 {
            return error::domain(format!("rotation {w} is not unimodular"));
        }
        let n = self.grid.size();
        let turns = w.arg() / (2.0 * PI) * n as f64;
        let k = (turns.round() as i64).rem_euclid(n as i64) as usize;
        if (w - self.grid.node(k)).norm() <= 1e-12 {
            return Ok(self.rotate_nodes(k));
        }
        let wc = w.conj();
        Ok(self.multiplier(|j| wc.powi(j as i32)))
    }

    /// Rotation by the grid node `k`: sample `m` of the result is sample `m - k` of `self`.
    pub fn rotate_nodes(&self, k: usize) -> Self {
        let n = self.grid.size();
        let k = k % n;
        let samples = (0..n).map(|m| self.samples[(m + n - k) % n]).collect();
        Self::from_samples_unchecked(self.grid, samples)
    }

    /// `integral f conj(g) dm` by quadrature.
    pub fn inner_product(&self, g: &CircleFunction) -> Result<Complex64> {
        self.same_grid(g)?;
        let s: Complex64 = self.samples.iter().zip(&g.samples).map(|(a, b)| a * b.conj()).sum();
        Ok(s * self.grid.weight())
    }

    fn same_grid(&self, g: &CircleFunction) -> Result<()> {
        if self.grid != g.grid {
            return Err(Error::Domain(format!(
                "grid mismatch: {} vs {}",
                self.grid.size(),
                g.grid.size()
            )));
        }
        Ok(())
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self::from_samples_unchecked(self.grid, self.samples.iter().map(|&c| f(c)).collect())
    }

    /// Pointwise combination with the node index available.
    pub fn map_indexed(&self, f: impl Fn(usize, Complex64) -> Complex64) -> Self {
        Self::from_samples_unchecked(
            self.grid,
            self.samples.iter().enumerate().map(|(k, &c)| f(k, c)).collect(),
        )
    }

    pub fn zip_with(
        &self,
        g: &CircleFunction,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<Self> {
        self.same_grid(g)?;
        Ok(Self::from_samples_unchecked(
            self.grid,
            self.samples.iter().zip(&g.samples).map(|(&a, &b)| f(a, b)).collect(),
        ))
    }

    pub fn add(&self, g: &CircleFunction) -> Result<Self> {
        self.zip_with(g, |a, b| a + b)
    }

    pub fn sub(&self, g: &CircleFunction) -> Result<Self> {
        self.zip_with(g, |a, b| a - b)
    }

    pub fn mul(&self, g: &CircleFunction) -> Result<Self> {
        self.zip_with(g, |a, b| a * b)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.map(|a| a * c)
    }

    pub fn conj(&self) -> Self {
        self.map(|a| a.conj())
    }

    /// `|f|` as a real-valued function.
    pub fn abs(&self) -> Self {
        self.map(|a| Complex64::new(a.norm(), 0.0))
    }

    /// Multiplication by `z^j`, evaluated pointwise.
    pub fn shift(&self, j: i64) -> Self {
        let n = self.grid.size() as i64;
        self.map_indexed(|k, c| c * self.grid.node(((k as i64 * j).rem_euclid(n)) as usize))
    }

    pub fn moduli(&self) -> Vec<f64> {
        self.samples.iter().map(|c| c.norm()).collect()
    }

    pub fn sup_abs(&self) -> f64 {
        self.samples.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn max_imag(&self) -> f64 {
        self.samples.iter().map(|c| c.im.abs()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.samples.iter().all(|c| *c == Complex64::new(0.0, 0.0))
    }

    /// Largest pointwise distance to `g`.
    pub fn max_distance(&self, g: &CircleFunction) -> Result<f64> {
        self.same_grid(g)?;
        Ok(self
            .samples
            .iter()
            .zip(&g.samples)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Exact resampling of the trigonometric interpolant on a `factor`-times finer grid.
    ///
    /// A nonzero coefficient at the Nyquist index is split evenly between
    /// `+N/2` and `-N/2`, which keeps real inputs real and leaves the coarse
    /// samples unchanged.
    pub fn upsample(&self, factor: usize) -> Result<Self> {
        let fine = self.grid.refine(factor)?;
        if factor == 1 {
            return Ok(self.clone());
        }
        let spec = self.spectrum();
        let mut out = vec![Complex64::new(0.0, 0.0); fine.size()];
        let half = self.grid.nyquist();
        for j in (-half + 1)..half {
            out[fine.slot(j)] = spec[self.grid.slot(j)];
        }
        let nyq = spec[self.grid.slot(-half)] * 0.5;
        out[fine.slot(-half)] = nyq;
        out[fine.slot(half)] = nyq;
        Ok(Self::from_spectrum(fine, out))
    }
}

/// Evaluates `sum c_j z^j` at the grid nodes.
pub fn synthesize(p: &LaurentPoly, grid: CircleGrid) -> Result<CircleFunction> {
    let mut spec = vec![Complex64::new(0.0, 0.0); grid.size()];
    for (j, c) in p.iter() {
        grid.check_index(j)?;
        spec[grid.slot(j)] = c;
    }
    Ok(CircleFunction::from_spectrum(grid, spec))
}

/// Quadrature coefficients of `f` over `window`.
pub fn analyze(f: &CircleFunction, window: Window) -> Result<Vec<Complex64>> {
    f.analyze(window)
}

/// Anything with a Fourier series that can be tested for analyticity.
pub trait FourierSeries {
    /// `max_{j<0} |f^(j)|`.
    fn negative_part_max(&self) -> f64;

    /// `max_j |f^(j)|`.
    fn coeff_max(&self) -> f64;

    fn analytic_defect(&self) -> f64 {
        self.negative_part_max()
    }

    /// True iff `max_{j<0} |f^(j)| <= tol (1 + max_j |f^(j)|)`.
    fn is_analytic(&self, tol: f64) -> bool {
        self.negative_part_max() <= tol * (1.0 + self.coeff_max())
    }
}

impl FourierSeries for LaurentPoly {
    fn negative_part_max(&self) -> f64 {
        self.iter().filter(|(j, _)| *j < 0).map(|(_, c)| c.norm()).fold(0.0, f64::max)
    }

    fn coeff_max(&self) -> f64 {
        self.max_abs_coeff()
    }
}

/// The Nyquist index `-N/2` counts as negative.
impl FourierSeries for CircleFunction {
    fn negative_part_max(&self) -> f64 {
        let half = self.grid.size() / 2;
        self.spectrum()[half..].iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    fn coeff_max(&self) -> f64 {
        self.spectrum().iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}
