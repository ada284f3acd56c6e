//! Exact finite Fourier series.
//!
//! A [`LaurentPoly`] is a finite map `j -> c_j` representing `sum c_j z^j`
//! on the unit circle. Arithmetic is exact in the sense that no coefficient
//! is ever rounded away: only coefficients that are exactly zero are dropped.
//! This makes it the oracle backend for identities that the sampled
//! [`CircleFunction`](crate::CircleFunction) only reproduces up to roundoff.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{self, Result};

/// Inclusive integer index range `[lo, hi]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Window {
    pub lo: i64,
    pub hi: i64,
}

impl Window {
    pub fn new(lo: i64, hi: i64) -> Result<Self> {
        if lo > hi {
            return error::range(format!("empty window [{lo}, {hi}]"));
        }
        Ok(Window { lo, hi })
    }

    pub fn len(&self) -> usize {
        (self.hi - self.lo + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, j: i64) -> bool {
        self.lo <= j && j <= self.hi
    }

    pub fn contains_window(&self, other: &Window) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// Position of index `j` inside the window.
    pub fn offset(&self, j: i64) -> usize {
        debug_assert!(self.contains(j));
        (j - self.lo) as usize
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi
    }

    /// Intersection with `[lo, hi]`, `None` when empty.
    pub fn clamp(&self, lo: i64, hi: i64) -> Option<Window> {
        let lo = lo.max(self.lo);
        let hi = hi.min(self.hi);
        (lo <= hi).then_some(Window { lo, hi })
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl Serialize for Window {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.lo, self.hi].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Window {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [lo, hi] = <[i64; 2]>::deserialize(d)?;
        Window::new(lo, hi).map_err(serde::de::Error::custom)
    }
}

/// Finite Laurent polynomial `sum_j c_j z^j` with no stored exact zeros.
#[derive(Clone, Default, PartialEq)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, Complex64>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, Complex64::new(1.0, 0.0))
    }

    pub fn constant(c: Complex64) -> Self {
        Self::monomial(0, c)
    }

    /// `c z^j`.
    pub fn monomial(j: i64, c: Complex64) -> Self {
        let mut p = Self::zero();
        p.set(j, c);
        p
    }

    /// `z^j`.
    pub fn z(j: i64) -> Self {
        Self::monomial(j, Complex64::new(1.0, 0.0))
    }

    /// Builds from `(index, coefficient)` pairs; repeated indices accumulate.
    pub fn from_terms<I: IntoIterator<Item = (i64, Complex64)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (j, c) in terms {
            p.add_term(j, c);
        }
        p
    }

    /// Real-coefficient shorthand, mostly for tests and fixtures.
    pub fn from_real<I: IntoIterator<Item = (i64, f64)>>(terms: I) -> Self {
        Self::from_terms(terms.into_iter().map(|(j, c)| (j, Complex64::new(c, 0.0))))
    }

    pub fn coeff(&self, j: i64) -> Complex64 {
        self.coeffs.get(&j).copied().unwrap_or_default()
    }

    /// Overwrites the coefficient at `j`, dropping it when exactly zero.
    pub fn set(&mut self, j: i64, c: Complex64) {
        if c == Complex64::new(0.0, 0.0) {
            self.coeffs.remove(&j);
        } else {
            self.coeffs.insert(j, c);
        }
    }

    pub fn add_term(&mut self, j: i64, c: Complex64) {
        let sum = self.coeff(j) + c;
        self.set(j, sum);
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.coeffs.iter().map(|(&j, &c)| (j, c))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    /// Smallest window holding every stored coefficient.
    pub fn support(&self) -> Option<Window> {
        let lo = *self.coeffs.keys().next()?;
        let hi = *self.coeffs.keys().next_back()?;
        Some(Window { lo, hi })
    }

    /// Support ignoring coefficients with modulus at most `threshold`.
    pub fn effective_support(&self, threshold: f64) -> Option<Window> {
        let mut it = self.iter().filter(|(_, c)| c.norm() > threshold).map(|(j, _)| j);
        let lo = it.next()?;
        let hi = it.last().unwrap_or(lo);
        Some(Window { lo, hi })
    }

    pub fn supported_in(&self, window: &Window) -> bool {
        self.support().is_none_or(|s| window.contains_window(&s))
    }

    /// Conjugation on the circle: `conj(sum c_j z^j) = sum conj(c_j) z^{-j}`.
    pub fn conj(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(&j, c)| (-j, c.conj())).collect(),
        }
    }

    /// Multiplication by `z^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(&j, &c)| (j + k, c)).collect(),
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::from_terms(self.iter().map(|(j, c)| (j, c * s)))
    }

    /// Exact `L^2` inner product `sum_j a_j conj(b_j)`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        let (small, large, flip) = if self.len() <= other.len() {
            (self, other, false)
        } else {
            (other, self, true)
        };
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, c) in small.iter() {
            if let Some(d) = large.coeffs.get(&j) {
                acc += if flip { d * c.conj() } else { c * d.conj() };
            }
        }
        acc
    }

    pub fn norm_l2(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm_sqr()).fold(0.0, |a, b| a + b).sqrt()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Sum of coefficient moduli; bounds the sup norm on the circle.
    pub fn l1_coeffs(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).fold(0.0, |a, b| a + b)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.iter().map(|(j, c)| c * z.powi(j as i32)).sum()
    }

    /// Keeps only the coefficients whose index lies in `window`.
    pub fn restrict(&self, window: &Window) -> Self {
        Self {
            coeffs: self.coeffs.range(window.lo..=window.hi).map(|(&j, &c)| (j, c)).collect(),
        }
    }

    /// Keeps the coefficients selected by `keep`.
    pub fn filter(&self, mut keep: impl FnMut(i64) -> bool) -> Self {
        Self {
            coeffs: self.coeffs.iter().filter(|(&j, _)| keep(j)).map(|(&j, &c)| (j, c)).collect(),
        }
    }

    pub fn distance(&self, other: &Self) -> f64 {
        (self - other).norm_l2()
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (j, c) in self.iter() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({}{:+}i)z^{}", c.re, c.im, j)?;
        }
        Ok(())
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (j, c) in rhs.iter() {
            out.add_term(j, c);
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (j, c) in rhs.iter() {
            out.add_term(j, -c);
        }
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (i, a) in self.iter() {
            for (j, b) in rhs.iter() {
                out.add_term(i + j, a * b);
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Mul<Complex64> for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: Complex64) -> LaurentPoly {
        self.scale(rhs)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: &LaurentPoly) -> LaurentPoly {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl Mul<Complex64> for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: Complex64) -> LaurentPoly {
        self.scale(rhs)
    }
}

/// Serialized as `[[j, re, im], ...]`.
impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<(i64, f64, f64)> = self.iter().map(|(j, c)| (j, c.re, c.im)).collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<(i64, f64, f64)>::deserialize(d)?;
        Ok(Self::from_terms(rows.into_iter().map(|(j, re, im)| (j, Complex64::new(re, im)))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn product_of_conjugate_pair() {
        let a = LaurentPoly::from_real([(0, 1.0), (1, 1.0)]);
        let b = LaurentPoly::from_real([(0, 1.0), (1, -1.0)]);
        assert_eq!(&a * &b, LaurentPoly::from_real([(0, 1.0), (2, -1.0)]));
    }

    #[test]
    fn conj_negates_indices() {
        assert_eq!(LaurentPoly::z(1).conj(), LaurentPoly::z(-1));
        let p = LaurentPoly::monomial(3, c(1.0, 2.0));
        assert_eq!(p.conj(), LaurentPoly::monomial(-3, c(1.0, -2.0)));
    }

    #[test]
    fn inner_of_one_plus_z() {
        let a = LaurentPoly::from_real([(0, 1.0), (1, 1.0)]);
        assert_eq!(a.inner(&a), c(2.0, 0.0));
        let i = LaurentPoly::monomial(1, c(0.0, 1.0));
        // <iz, z> = i, <z, iz> = -i
        assert_eq!(i.inner(&LaurentPoly::z(1)), c(0.0, 1.0));
        assert_eq!(LaurentPoly::z(1).inner(&i), c(0.0, -1.0));
    }

    #[test]
    fn exact_zeros_are_pruned() {
        let a = LaurentPoly::from_real([(0, 1.0), (1, 1.0)]);
        let d = &a - &a;
        assert!(d.is_zero());
        assert_eq!(d.support(), None);
        // tiny but nonzero coefficients survive
        let tiny = LaurentPoly::from_real([(4, 1e-300)]);
        assert_eq!(tiny.len(), 1);
    }

    #[test]
    fn window_serde_and_bounds() {
        let w: Window = serde_json::from_str("[-3, 5]").unwrap();
        assert_eq!(w, Window { lo: -3, hi: 5 });
        assert_eq!(w.len(), 9);
        assert!(serde_json::from_str::<Window>("[2, 1]").is_err());
        assert_eq!(w.clamp(0, 10), Some(Window { lo: 0, hi: 5 }));
        assert_eq!(w.clamp(6, 10), None);
    }

    #[test]
    fn serde_rows() {
        let p = LaurentPoly::from_terms([(-2, c(0.0, 3.0)), (5, c(1.0, 0.0))]);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, "[[-2,0.0,3.0],[5,1.0,0.0]]");
        assert_eq!(serde_json::from_str::<LaurentPoly>(&s).unwrap(), p);
    }
}
