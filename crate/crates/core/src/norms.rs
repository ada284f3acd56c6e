//! Rotationally symmetric norm functionals and their verifiers.
//!
//! Every functional here depends on `f` only through the multiset of its
//! sample moduli. Moduli are sorted before any reduction, so two functions
//! whose samples are permutations of each other (grid rotations in
//! particular) evaluate to bit-identical norms.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circle::{CircleFunction, CircleGrid};
use crate::error::{self, Error, Result};
use crate::report::{finite, CheckReport, SuiteReport};

/// Default relative tolerance of the Luxemburg bisection.
pub const LUXEMBURG_TOL: f64 = 1e-10;
/// Hard cap on bisection steps.
pub const LUXEMBURG_MAX_ITER: usize = 200;
/// `C` in the lower bracket `||f||_1 / C`.
pub const BRACKET_CONSTANT: f64 = 2.0;

#[derive(Clone)]
enum Psi {
    Power(f64),
    ExpMinusOne,
    Custom { name: String, f: Arc<dyn Fn(f64) -> f64 + Send + Sync> },
}

/// A Young function `psi` for the Luxemburg norm.
///
/// Constructors check on a dyadic sample that `psi(0) = 0`, that `psi` is
/// strictly increasing and that it is midpoint convex.
#[derive(Clone)]
pub struct OrliczFunction {
    psi: Psi,
    psi_at_1: f64,
    overflow: f64,
}

impl fmt::Debug for OrliczFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OrliczFunction({})", self.name())
    }
}

/// `psi(x)/x` along `x = 2^k`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuperlinearityReport {
    pub ratios: Vec<f64>,
    pub increasing: bool,
    /// Ratio growth over the tested range exceeds a factor of 1e3.
    pub unbounded: bool,
}

impl OrliczFunction {
    /// `psi(x) = x^p`; only `p >= 1` is convex.
    pub fn power(p: f64) -> Result<Self> {
        if !p.is_finite() || p <= 0.0 {
            return error::domain(format!("power exponent {p} must be positive"));
        }
        Self::build(Psi::Power(p), 10f64.powf(300.0 / p))
    }

    /// `psi(x) = e^x - 1`.
    pub fn exp_minus_one() -> Self {
        Self::build(Psi::ExpMinusOne, 700.0).expect("e^x - 1 is a Young function")
    }

    /// A user-supplied `psi`; arguments above `overflow` are treated as infinite mass.
    pub fn custom(
        name: impl Into<String>,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        overflow: f64,
    ) -> Result<Self> {
        let overflow = if overflow.is_finite() && overflow > 1.0 { overflow } else { 1e150 };
        Self::build(Psi::Custom { name: name.into(), f: Arc::new(f) }, overflow)
    }

    fn build(psi: Psi, overflow: f64) -> Result<Self> {
        let mut out = OrliczFunction { psi, psi_at_1: 1.0, overflow };
        out.psi_at_1 = out.eval(1.0);
        out.validate()?;
        Ok(out)
    }

    pub fn eval(&self, x: f64) -> f64 {
        match &self.psi {
            Psi::Power(p) => x.powf(*p),
            Psi::ExpMinusOne => x.exp_m1(),
            Psi::Custom { f, .. } => f(x),
        }
    }

    pub fn psi_at_1(&self) -> f64 {
        self.psi_at_1
    }

    pub fn overflow_threshold(&self) -> f64 {
        self.overflow
    }

    pub fn name(&self) -> String {
        match &self.psi {
            Psi::Power(p) => format!("power({p})"),
            Psi::ExpMinusOne => "expMinusOne".into(),
            Psi::Custom { name, .. } => name.clone(),
        }
    }

    fn sample_points(&self) -> Vec<f64> {
        let mut xs = vec![0.0];
        for k in -20..=20 {
            let x = 2f64.powi(k);
            if x <= self.overflow / 2.0 {
                xs.push(x);
                xs.push(1.5 * x);
            }
        }
        xs.sort_by(f64::total_cmp);
        xs
    }

    fn validate(&self) -> Result<()> {
        let name = self.name();
        let at0 = self.eval(0.0);
        if at0 != 0.0 {
            return error::domain(format!("{name}: psi(0) = {at0}, expected 0"));
        }
        if !(self.psi_at_1.is_finite() && self.psi_at_1 > 0.0) {
            return error::domain(format!("{name}: psi(1) = {} must be positive", self.psi_at_1));
        }
        let xs = self.sample_points();
        let ys: Vec<f64> = xs.iter().map(|&x| self.eval(x)).collect();
        for w in xs.windows(2).zip(ys.windows(2)) {
            let ([a, b], [fa, fb]) = (w.0, w.1) else { unreachable!() };
            if !(fb > fa) || !fb.is_finite() {
                return error::domain(format!("{name}: not strictly increasing on [{a}, {b}]"));
            }
        }
        for i in 0..xs.len() {
            for j in (i + 1)..xs.len() {
                let mid = self.eval(0.5 * (xs[i] + xs[j]));
                let avg = 0.5 * (ys[i] + ys[j]);
                if mid > avg + 1e-12 * avg.abs().max(1.0) {
                    return error::domain(format!(
                        "{name}: midpoint convexity fails between {} and {}",
                        xs[i], xs[j]
                    ));
                }
            }
        }
        Ok(())
    }

    /// Growth of `psi(x)/x` along `x = 2^k`, `k = 0..=20` (within the overflow range).
    pub fn superlinearity(&self) -> SuperlinearityReport {
        let ratios: Vec<f64> = (0..=20)
            .map(|k| 2f64.powi(k))
            .filter(|&x| x <= self.overflow / 2.0)
            .map(|x| self.eval(x) / x)
            .collect();
        let increasing = ratios.windows(2).all(|w| w[1] > w[0]);
        let unbounded = increasing && ratios.last().copied().unwrap_or(0.0) > 1e3 * ratios[0];
        SuperlinearityReport { ratios, increasing, unbounded }
    }
}

/// Result of the Luxemburg bisection.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LuxemburgSolution {
    pub value: f64,
    /// Final bracket; `G(lo) > 1 >= G(hi)`.
    pub lo: f64,
    pub hi: f64,
    pub bracket_constant: f64,
    pub iterations: usize,
}

fn sorted_moduli(f: &CircleFunction) -> Vec<f64> {
    let mut m = f.moduli();
    m.sort_by(f64::total_cmp);
    m
}

/// `(1/N) sum |f|^p`, then the `p`-th root.
pub fn p_norm(f: &CircleFunction, p: f64) -> Result<f64> {
    if !(p >= 1.0) || !p.is_finite() {
        return error::domain(format!("p = {p} must be at least 1"));
    }
    Ok(p_norm_sorted(&sorted_moduli(f), p))
}

fn p_norm_sorted(m: &[f64], p: f64) -> f64 {
    let top = m.last().copied().unwrap_or(0.0);
    if top == 0.0 {
        return 0.0;
    }
    let mean = m.iter().map(|x| (x / top).powf(p)).sum::<f64>() / m.len() as f64;
    top * mean.powf(1.0 / p)
}

/// Largest sample modulus.
pub fn sup_norm(f: &CircleFunction) -> f64 {
    f.sup_abs()
}

/// `G(lambda) = (1/psi(1)) (1/N) sum psi(|f_k| / lambda)` over sorted moduli.
fn luxemburg_g(m: &[f64], psi: &OrliczFunction, lambda: f64) -> f64 {
    let top = m.last().copied().unwrap_or(0.0);
    let n = m.len() as f64;
    if top / lambda > psi.overflow && psi.eval(psi.overflow) > n * psi.psi_at_1 {
        return f64::INFINITY;
    }
    m.iter().map(|&x| psi.eval(x / lambda)).sum::<f64>() / n / psi.psi_at_1
}

/// Luxemburg norm `inf { lambda > 0 : G(lambda) <= 1 }` with its bracket.
pub fn orlicz_solve(f: &CircleFunction, psi: &OrliczFunction, tol: f64) -> Result<LuxemburgSolution> {
    if !(tol > 0.0) {
        return error::domain(format!("tolerance {tol} must be positive"));
    }
    let m = sorted_moduli(f);
    let sup = m.last().copied().unwrap_or(0.0);
    if sup == 0.0 {
        return Ok(LuxemburgSolution {
            value: 0.0,
            lo: 0.0,
            hi: 0.0,
            bracket_constant: BRACKET_CONSTANT,
            iterations: 0,
        });
    }
    let l1 = m.iter().sum::<f64>() / m.len() as f64;
    let mut lo = (tol * sup).max(l1 / BRACKET_CONSTANT);
    let mut hi = sup;
    for _ in 0..64 {
        if luxemburg_g(&m, psi, lo) > 1.0 {
            break;
        }
        lo *= 0.5;
    }
    for _ in 0..64 {
        if luxemburg_g(&m, psi, hi) <= 1.0 {
            break;
        }
        hi *= 2.0;
    }
    if !(luxemburg_g(&m, psi, lo) > 1.0 && luxemburg_g(&m, psi, hi) <= 1.0 && lo < hi) {
        return Err(Error::Domain(format!(
            "{}: could not bracket the Luxemburg root (lo = {lo}, hi = {hi})",
            psi.name()
        )));
    }
    let mut iterations = 0;
    while hi - lo > tol * hi && iterations < LUXEMBURG_MAX_ITER {
        let mid = 0.5 * (lo + hi);
        if luxemburg_g(&m, psi, mid) <= 1.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        iterations += 1;
    }
    Ok(LuxemburgSolution { value: hi, lo, hi, bracket_constant: BRACKET_CONSTANT, iterations })
}

pub fn orlicz_norm(f: &CircleFunction, psi: &OrliczFunction, tol: f64) -> Result<f64> {
    orlicz_solve(f, psi, tol).map(|s| s.value)
}

/// Evaluator contract for a rotationally symmetric norm.
pub trait RotationNorm: Send + Sync {
    fn eval(&self, f: &CircleFunction) -> Result<f64>;
    fn label(&self) -> String;
    /// Whether `alpha(chi_E) -> 0` as `m(E) -> 0`.
    fn is_continuous(&self) -> bool;
}

/// The concrete norms: `p`, sup and Orlicz.
#[derive(Clone, Debug)]
pub enum NormFunctional {
    P(f64),
    Sup,
    Orlicz(OrliczFunction),
}

impl NormFunctional {
    pub fn p(p: f64) -> Result<Self> {
        if !(p >= 1.0) || !p.is_finite() {
            return error::domain(format!("p = {p} must be at least 1"));
        }
        Ok(NormFunctional::P(p))
    }

    pub fn orlicz_power(p: f64) -> Result<Self> {
        OrliczFunction::power(p).map(NormFunctional::Orlicz)
    }

    pub fn orlicz_exp() -> Self {
        NormFunctional::Orlicz(OrliczFunction::exp_minus_one())
    }

    pub fn from_descriptor(d: &NormDescriptor) -> Result<Self> {
        match d {
            NormDescriptor::P { p } => Self::p(*p),
            NormDescriptor::Sup => Ok(NormFunctional::Sup),
            NormDescriptor::Orlicz { psi: PsiName::ExpMinusOne, .. } => Ok(Self::orlicz_exp()),
            NormDescriptor::Orlicz { psi: PsiName::Power, p: Some(p) } => Self::orlicz_power(*p),
            NormDescriptor::Orlicz { psi: PsiName::Power, p: None } => {
                Err(Error::Parse("orlicz power descriptor needs \"p\"".into()))
            }
        }
    }

    /// `None` for custom Orlicz functions.
    pub fn descriptor(&self) -> Option<NormDescriptor> {
        match self {
            NormFunctional::P(p) => Some(NormDescriptor::P { p: *p }),
            NormFunctional::Sup => Some(NormDescriptor::Sup),
            NormFunctional::Orlicz(o) => match o.psi {
                Psi::Power(p) => Some(NormDescriptor::Orlicz { psi: PsiName::Power, p: Some(p) }),
                Psi::ExpMinusOne => Some(NormDescriptor::Orlicz { psi: PsiName::ExpMinusOne, p: None }),
                Psi::Custom { .. } => None,
            },
        }
    }
}

impl RotationNorm for NormFunctional {
    fn eval(&self, f: &CircleFunction) -> Result<f64> {
        match self {
            NormFunctional::P(p) => p_norm(f, *p),
            NormFunctional::Sup => Ok(sup_norm(f)),
            NormFunctional::Orlicz(psi) => orlicz_norm(f, psi, LUXEMBURG_TOL),
        }
    }

    fn label(&self) -> String {
        match self {
            NormFunctional::P(p) => format!("p={p}"),
            NormFunctional::Sup => "sup".into(),
            NormFunctional::Orlicz(psi) => format!("orlicz({})", psi.name()),
        }
    }

    fn is_continuous(&self) -> bool {
        !matches!(self, NormFunctional::Sup)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum PsiName {
    Power,
    ExpMinusOne,
}

/// `{"kind": "p", "p": 2}`, `{"kind": "sup"}`, `{"kind": "orlicz", "psi": "power", "p": 3}`
/// or `{"kind": "orlicz", "psi": "expMinusOne"}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum NormDescriptor {
    P {
        p: f64,
    },
    Sup,
    Orlicz {
        psi: PsiName,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        p: Option<f64>,
    },
}

impl NormDescriptor {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("norm descriptor: {e}")))
    }
}

fn rel_dev(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// Checks `alpha(1) = 1`, `alpha(|f|) = alpha(f)`, `alpha(f_w) = alpha(f)` and the
/// triangle inequality on cyclically adjacent fixture pairs.
///
/// Failures, including evaluation errors, become failed checks.
pub fn verify_axioms(
    alpha: &dyn RotationNorm,
    fixtures: &[CircleFunction],
    rotations: &[Complex64],
    tol: f64,
) -> SuiteReport {
    let mut checks = Vec::new();
    let Some(first) = fixtures.first() else {
        checks.push(CheckReport::new("fixtures", false, tol).with_message("no fixtures supplied"));
        return SuiteReport::new(alpha.label(), checks);
    };
    let one = CircleFunction::constant(first.grid(), Complex64::new(1.0, 0.0));
    checks.push(match alpha.eval(&one) {
        Ok(a) => CheckReport::new("unit", (a - 1.0).abs() <= tol, tol).with("value", finite(a)),
        Err(e) => CheckReport::new("unit", false, tol).with_message(e.to_string()),
    });
    for (i, f) in fixtures.iter().enumerate() {
        let base = match alpha.eval(f) {
            Ok(a) => a,
            Err(e) => {
                checks.push(CheckReport::new(format!("eval[{i}]"), false, tol).with_message(e.to_string()));
                continue;
            }
        };
        checks.push(match alpha.eval(&f.abs()) {
            Ok(a) => {
                let d = rel_dev(a, base);
                CheckReport::new(format!("abs[{i}]"), d <= tol, tol)
                    .with("alpha", finite(base))
                    .with("alpha_abs", finite(a))
                    .with("deviation", finite(d))
            }
            Err(e) => CheckReport::new(format!("abs[{i}]"), false, tol).with_message(e.to_string()),
        });
        let mut worst = 0.0f64;
        let mut failure = None;
        for &w in rotations {
            match f.rotate(w).and_then(|g| alpha.eval(&g)) {
                Ok(a) => worst = worst.max(rel_dev(a, base)),
                Err(e) => failure = Some(e.to_string()),
            }
        }
        let mut rot = CheckReport::new(format!("rotation[{i}]"), failure.is_none() && worst <= tol, tol)
            .with("deviation", finite(worst))
            .with("rotations", rotations.len());
        if let Some(m) = failure {
            rot = rot.with_message(m);
        }
        checks.push(rot);
        let g = &fixtures[(i + 1) % fixtures.len()];
        let tri = f.add(g).and_then(|s| Ok((alpha.eval(&s)?, alpha.eval(g)?)));
        checks.push(match tri {
            Ok((sum, ag)) => {
                let rhs = base + ag;
                CheckReport::new(format!("triangle[{i}]"), sum <= rhs + tol * rhs.max(1.0), tol)
                    .with("lhs", finite(sum))
                    .with("rhs", finite(rhs))
            }
            Err(e) => CheckReport::new(format!("triangle[{i}]"), false, tol).with_message(e.to_string()),
        });
    }
    SuiteReport::new(alpha.label(), checks)
}

/// `alpha(chi_E)` on arcs `E` made of the first `round(q N)` nodes.
///
/// Passes when the functional is continuous, the values strictly decrease,
/// and the last value is below `alpha(1)`; `decay_factor` is their ratio.
pub fn continuity_probe(alpha: &dyn RotationNorm, grid: CircleGrid, fractions: &[f64]) -> CheckReport {
    let tol = 0.0;
    let n = grid.size();
    let valid = !fractions.is_empty()
        && fractions.windows(2).all(|w| w[1] < w[0])
        && fractions.iter().all(|&q| q <= 1.0 && q * n as f64 >= 1.0 - 1e-12);
    if !valid {
        return CheckReport::new("continuity", false, tol)
            .with_message("arc fractions must strictly decrease within [1/N, 1]");
    }
    let arc = |q: f64| {
        let count = (q * n as f64).round() as usize;
        CircleFunction::from_samples(
            grid,
            (0..n).map(|k| Complex64::new(if k < count { 1.0 } else { 0.0 }, 0.0)).collect(),
        )
        .expect("grid-sized samples")
    };
    let evaluated: Result<Vec<f64>> = fractions.iter().map(|&q| alpha.eval(&arc(q))).collect();
    let full = alpha.eval(&arc(1.0));
    let (values, full) = match (evaluated, full) {
        (Ok(v), Ok(f)) => (v, f),
        (Err(e), _) | (_, Err(e)) => {
            return CheckReport::new("continuity", false, tol).with_message(e.to_string())
        }
    };
    let strictly = values.windows(2).all(|w| w[1] < w[0]);
    let nonincreasing = values.windows(2).all(|w| w[1] <= w[0]);
    let decay = values.last().copied().unwrap_or(0.0) / full;
    let continuous = alpha.is_continuous();
    let mut report = CheckReport::new("continuity", continuous && strictly && decay < 1.0, tol)
        .with("fractions", fractions.to_vec())
        .with("values", values.iter().map(|&v| finite(v)).collect::<Vec<_>>())
        .with("alpha_full", finite(full))
        .with("decay_factor", finite(decay))
        .with("nonincreasing", nonincreasing)
        .with("strictly_decreasing", strictly);
    if !continuous {
        report = report.with_message(format!(
            "{} is not continuous: alpha(chi_E) does not tend to 0 as m(E) -> 0",
            alpha.label()
        ));
    } else if !strictly {
        report = report.with_message("alpha(chi_E) is not strictly decreasing along the arcs");
    }
    report
}

/// `||f||_1 <= alpha(f) <= ||f||_inf`, each side with slack `1e-9`.
pub fn dominance_check(alpha: &dyn RotationNorm, f: &CircleFunction) -> CheckReport {
    let tol = 1e-9;
    let l1 = p_norm(f, 1.0).expect("p = 1 is valid");
    let sup = sup_norm(f);
    match alpha.eval(f) {
        Ok(a) => {
            let slack = tol * sup.max(1.0);
            CheckReport::new("dominance", l1 - slack <= a && a <= sup + slack, tol)
                .with("l1", l1)
                .with("alpha", finite(a))
                .with("sup", sup)
        }
        Err(e) => CheckReport::new("dominance", false, tol).with_message(e.to_string()),
    }
}

/// `alpha(f g) <= ||f||_inf alpha(g)` with slack `1e-9`.
pub fn module_inequality_check(alpha: &dyn RotationNorm, f: &CircleFunction, g: &CircleFunction) -> CheckReport {
    let tol = 1e-9;
    let sides = f.mul(g).and_then(|fg| Ok((alpha.eval(&fg)?, alpha.eval(g)?)));
    match sides {
        Ok((lhs, ag)) => {
            let rhs = sup_norm(f) * ag;
            CheckReport::new("module", lhs <= rhs + tol * rhs.max(1.0), tol)
                .with("lhs", finite(lhs))
                .with("rhs", finite(rhs))
        }
        Err(e) => CheckReport::new("module", false, tol).with_message(e.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle::synthesize;
    use crate::laurent::LaurentPoly;

    fn grid() -> CircleGrid {
        CircleGrid::new(256).unwrap()
    }

    fn poly(terms: &[(i64, f64)]) -> CircleFunction {
        synthesize(&LaurentPoly::from_real(terms.iter().copied()), grid()).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn p_norm_examples() {
        let one = poly(&[(0, 1.0)]);
        for p in [1.0, 2.0, 3.5] {
            assert!(rel(p_norm(&one, p).unwrap(), 1.0) < 1e-14);
        }
        assert!(rel(p_norm(&poly(&[(1, 1.0)]), 2.0).unwrap(), 1.0) < 1e-14);
        assert!(rel(p_norm(&poly(&[(0, 1.0), (1, 1.0)]), 2.0).unwrap(), 2f64.sqrt()) < 1e-14);
        assert!(matches!(p_norm(&one, 0.5), Err(Error::Domain(_))));
    }

    #[test]
    fn sup_norm_examples() {
        assert!(rel(sup_norm(&poly(&[(0, 1.0)])), 1.0) < 1e-14);
        assert!(rel(sup_norm(&poly(&[(0, 1.0), (1, 1.0)])), 2.0) < 1e-14);
        assert!(rel(sup_norm(&poly(&[(3, 1.0)])), 1.0) < 1e-14);
    }

    #[test]
    fn orlicz_examples() {
        let one = poly(&[(0, 1.0)]);
        for psi in [
            OrliczFunction::exp_minus_one(),
            OrliczFunction::power(1.0).unwrap(),
            OrliczFunction::power(3.0).unwrap(),
        ] {
            assert!(rel(orlicz_norm(&one, &psi, 1e-12).unwrap(), 1.0) < 1e-10, "{psi:?}");
        }
        let f = poly(&[(0, 1.0), (1, 1.0)]);
        let sq = OrliczFunction::power(2.0).unwrap();
        assert!(rel(orlicz_norm(&f, &sq, 1e-12).unwrap(), 2f64.sqrt()) < 1e-10);
        let g = poly(&[(0, 0.3), (2, -1.2), (-1, 0.7)]);
        let lin = OrliczFunction::power(1.0).unwrap();
        let l1 = p_norm(&g, 1.0).unwrap();
        assert!(rel(orlicz_norm(&g, &lin, 1e-12).unwrap(), l1) < 1e-10);
        let zero = poly(&[]);
        assert_eq!(orlicz_norm(&zero, &sq, 1e-10).unwrap(), 0.0);
    }

    #[test]
    fn orlicz_solution_brackets_root() {
        let f = poly(&[(0, 0.5), (3, 1.0)]);
        let psi = OrliczFunction::exp_minus_one();
        let s = orlicz_solve(&f, &psi, 1e-10).unwrap();
        let m = sorted_moduli(&f);
        assert!(luxemburg_g(&m, &psi, s.value) <= 1.0);
        assert!(luxemburg_g(&m, &psi, s.value * (1.0 - 1e-10)) > 1.0);
        assert!(s.value <= sup_norm(&f));
        assert!(s.iterations <= LUXEMBURG_MAX_ITER);
    }

    #[test]
    fn invalid_psi_rejected() {
        assert!(matches!(OrliczFunction::power(0.5), Err(Error::Domain(_))));
        assert!(matches!(OrliczFunction::custom("shifted", |x| x + 1.0, 1e10), Err(Error::Domain(_))));
        assert!(matches!(OrliczFunction::custom("flat", |x| x.min(1.0), 1e10), Err(Error::Domain(_))));
        assert!(matches!(
            OrliczFunction::custom("concave", |x: f64| x.sqrt(), 1e10),
            Err(Error::Domain(_))
        ));
        assert!(OrliczFunction::custom("cosh", |x: f64| x.cosh() - 1.0, 700.0).is_ok());
    }

    #[test]
    fn superlinearity_is_diagnostic() {
        assert!(OrliczFunction::exp_minus_one().superlinearity().unbounded);
        assert!(OrliczFunction::power(2.0).unwrap().superlinearity().unbounded);
        assert!(!OrliczFunction::power(1.0).unwrap().superlinearity().unbounded);
    }

    #[test]
    fn descriptor_round_trip() {
        for text in [
            r#"{"kind":"p","p":2.0}"#,
            r#"{"kind":"sup"}"#,
            r#"{"kind":"orlicz","psi":"power","p":3.0}"#,
            r#"{"kind":"orlicz","psi":"expMinusOne"}"#,
        ] {
            let d = NormDescriptor::parse(text).unwrap();
            assert_eq!(serde_json::to_string(&d).unwrap(), text);
            let a = NormFunctional::from_descriptor(&d).unwrap();
            assert_eq!(a.descriptor().unwrap(), d);
        }
        assert!(matches!(NormDescriptor::parse(r#"{"kind":"q"}"#), Err(Error::Parse(_))));
        let bad = NormDescriptor::parse(r#"{"kind":"orlicz","psi":"power"}"#).unwrap();
        assert!(NormFunctional::from_descriptor(&bad).is_err());
    }

    fn canonical() -> Vec<CircleFunction> {
        vec![poly(&[(0, 1.0)]), poly(&[(1, 1.0)]), poly(&[(0, 1.0), (1, 1.0)])]
    }

    fn rotations() -> Vec<Complex64> {
        vec![Complex64::new(-1.0, 0.0), Complex64::new(0.0, 1.0)]
    }

    #[test]
    fn axioms_hold_for_p2_and_exp() {
        for alpha in [NormFunctional::P(2.0), NormFunctional::orlicz_exp()] {
            let r = verify_axioms(&alpha, &canonical(), &rotations(), 1e-9);
            assert!(r.pass, "{:?}", r.failures().collect::<Vec<_>>());
            for c in r.checks.iter().filter(|c| c.check.starts_with("rotation")) {
                assert_eq!(c.value("deviation"), Some(0.0));
            }
        }
    }

    struct MeanValue;

    impl RotationNorm for MeanValue {
        fn eval(&self, f: &CircleFunction) -> Result<f64> {
            Ok(f.coeff(0)?.norm())
        }
        fn label(&self) -> String {
            "mean".into()
        }
        fn is_continuous(&self) -> bool {
            true
        }
    }

    #[test]
    fn broken_functional_fails_abs_on_z() {
        let r = verify_axioms(&MeanValue, &canonical(), &rotations(), 1e-9);
        assert!(!r.pass);
        assert!(!r.find("abs[1]").unwrap().pass);
    }

    fn values(r: &CheckReport) -> Vec<f64> {
        r.values["values"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect()
    }

    #[test]
    fn continuity_examples() {
        let g = grid();
        let r = continuity_probe(&NormFunctional::P(1.0), g, &[0.5, 0.25, 0.125]);
        assert!(r.pass);
        for (v, want) in values(&r).into_iter().zip([0.5, 0.25, 0.125]) {
            assert!(rel(v, want) < 1e-14);
        }
        let r = continuity_probe(&NormFunctional::Sup, g, &[0.5, 0.25, 0.125]);
        assert!(!r.pass);
        assert_eq!(values(&r), vec![1.0, 1.0, 1.0]);
        assert!(r.message.as_deref().unwrap().contains("not continuous"));
        let sq = NormFunctional::orlicz_power(2.0).unwrap();
        let r = continuity_probe(&sq, g, &[0.25, 1.0 / 16.0]);
        assert!(r.pass);
        for (v, want) in values(&r).into_iter().zip([0.5, 0.25]) {
            assert!(rel(v, want) < 1e-9);
        }
        assert!(!continuity_probe(&sq, g, &[0.25, 0.5]).pass);
    }

    #[test]
    fn dominance_examples() {
        let f = poly(&[(0, 1.0), (1, 1.0)]);
        let r = dominance_check(&NormFunctional::P(2.0), &f);
        assert!(r.pass);
        // 4/pi up to the quadrature error of a kinked integrand
        assert!((r.value("l1").unwrap() - 4.0 / std::f64::consts::PI).abs() < 1e-4);
        assert!(dominance_check(&NormFunctional::orlicz_exp(), &poly(&[(0, 1.0)])).pass);
        let zero = poly(&[]);
        let r = dominance_check(&NormFunctional::orlicz_exp(), &zero);
        assert!(r.pass);
        assert_eq!(r.value("alpha"), Some(0.0));
    }

    #[test]
    fn module_examples() {
        let z = poly(&[(1, 1.0)]);
        let g = poly(&[(0, 0.4), (2, 1.0)]);
        let r = module_inequality_check(&NormFunctional::P(2.0), &z, &g);
        assert!(r.pass);
        assert!(rel(r.value("lhs").unwrap(), r.value("rhs").unwrap()) < 1e-12);
        let two = poly(&[(0, 2.0)]);
        let one = poly(&[(0, 1.0)]);
        assert!(module_inequality_check(&NormFunctional::orlicz_exp(), &two, &one).pass);
        let f = poly(&[(0, 0.3), (1, -0.8), (-2, 0.5)]);
        let quart = NormFunctional::orlicz_power(4.0).unwrap();
        assert!(module_inequality_check(&quart, &f, &g).pass);
    }
}
