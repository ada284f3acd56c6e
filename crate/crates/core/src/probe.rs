//! Randomized probe suites with JSON reports.
//!
//! A probe evaluates a list of fixtures, some canonical and some drawn from
//! the seeded generators in [`crate::fixtures`]. Fixtures run in parallel
//! and the report lists them in index order, so a fixed configuration
//! always produces the same bytes.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::analytic::{flattening_multiplier, SPECTRAL_TOL};
use crate::circle::{synthesize, CircleFunction, CircleGrid};
use crate::error::{self, Error, Result};
use crate::fixtures::{
    fixture_rng, perturb_tuple, random_analytic_unit, random_band_limited, random_laurent,
    random_nonnegative, random_polynomial, random_unimodular_tuple,
};
use crate::laurent::{LaurentPoly, Window};
use crate::modn::{
    check_orthonormal_family, check_rows_orthonormal, decompose_mod_n, kernel_space, matrix_of, ModN,
    UnimodularTuple,
};
use crate::norms::{continuity_probe, verify_axioms, NormDescriptor, NormFunctional, RotationNorm};
use crate::report::finite;
use crate::subspaces::{
    beurling_extract, build_invariant, de_branges_p_check, invariant_under_multiplier, is_simply_invariant,
    max_wold_depth, principal_angle_sin, span, wold_decompose, BeurlingOptions, StructureFit,
    InnerProductSpace, InvarianceStatus, TruncatedSubspace,
};

/// Names accepted by [`run_probe`].
pub const PROBES: [&str; 7] = ["axioms", "cesaro", "lemma23", "lemma24", "lemma36", "thm33", "thm41"];

/// Shifts in the family check of `lemma24`.
pub const FAMILY_SHIFTS: usize = 4;
/// Random members per subspace in `thm33`.
pub const MEMBERS_PER_SUBSPACE: usize = 20;
/// Polynomials `g` per space in `thm41`.
pub const ISOMETRY_FIXTURES: usize = 20;

/// Human-readable statement each probe exercises.
pub fn anchor(probe: &str) -> Option<&'static str> {
    Some(match probe {
        "axioms" => "rotationally symmetric norm: unit, modulus and rotation invariance, triangle inequality, continuity",
        "cesaro" => "Cesaro means converge to f in every rotationally symmetric norm",
        "lemma23" => "L^alpha splits as the direct sum of z^i L^alpha(z^n), i = 0..n-1",
        "lemma24" => "A is n-unimodular iff {z^(kn) phi_j} is an orthonormal set in L^2",
        "lemma36" => "outer multiplier O = k_1...k_n flattens |f|^(1/2) to sup norm at most n",
        "thm33" => "simply z^n-invariant M is the sum of phi_j H^alpha(z^n) and the kernel space",
        "thm41" => "shift-isometric Hilbert space inside H^alpha is phi H^2 with ||phi g||_M = ||g||_2",
        _ => return None,
    })
}

/// Tolerances used by `probe` unless overridden.
pub fn default_tolerances(probe: &str) -> BTreeMap<String, f64> {
    let entries: &[(&str, f64)] = match probe {
        "axioms" => &[("unit", 1e-10), ("abs", 1e-12), ("rotation", 1e-12), ("triangle", 1e-12), ("continuity", 0.0)],
        "cesaro" => &[("bound", 1e-10)],
        "lemma23" => &[("reconstruct", 1e-12), ("grid_reconstruct", 1e-12)],
        "lemma24" => &[("rows", 1e-10), ("family", 1e-10)],
        "lemma36" => &[("defect", SPECTRAL_TOL)],
        "thm33" => &[("invariance", 1e-9), ("wold", 1e-9), ("membership", 1e-9), ("multiplier", 1e-9), ("kernel", 1e-9)],
        "thm41" => &[("angle", 1e-8), ("isometry", 1e-9), ("wold", 1e-9)],
        _ => &[],
    };
    entries.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProbeConfig {
    pub grid_size: usize,
    pub seed: u64,
    pub trials: usize,
    pub tolerances: BTreeMap<String, f64>,
    pub window: Window,
    /// Norm for `axioms` and `cesaro`; each has its own default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<NormDescriptor>,
    /// Restricts `lemma23`, `lemma24`, `lemma36` and `thm33` to a single `n`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    pub validate_metric: bool,
}

impl ProbeConfig {
    pub fn new(probe: &str) -> Self {
        ProbeConfig {
            grid_size: 1024,
            seed: 0,
            trials: 25,
            tolerances: default_tolerances(probe),
            window: Window { lo: -128, hi: 128 },
            alpha: None,
            n: None,
            validate_metric: true,
        }
    }

    fn tol(&self, name: &str) -> f64 {
        self.tolerances[name]
    }

    fn grid(&self) -> Result<CircleGrid> {
        CircleGrid::new(self.grid_size)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FixtureResult {
    pub id: String,
    pub pass: bool,
    pub error: f64,
    pub tolerance: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub details: Option<Value>,
}

impl FixtureResult {
    fn new(id: impl Into<String>, error: f64, tolerance: f64) -> Self {
        FixtureResult { id: id.into(), pass: error <= tolerance, error: finite(error), tolerance, message: None, details: None }
    }

    fn failed(id: impl Into<String>, tolerance: f64, message: impl Into<String>) -> Self {
        FixtureResult {
            id: id.into(),
            pass: false,
            error: f64::MAX,
            tolerance,
            message: Some(message.into()),
            details: None,
        }
    }

    fn require(mut self, ok: bool, message: impl Into<String>) -> Self {
        if !ok {
            self.pass = false;
            self.message.get_or_insert_with(|| message.into());
        }
        self
    }

    fn note(mut self, message: Option<String>) -> Self {
        if message.is_some() {
            self.message = message;
        }
        self
    }

    fn details(mut self, details: Value) -> Self {
        self.details = Some(details);
        self
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProbeReport {
    pub probe: String,
    pub anchor: String,
    pub config: ProbeConfig,
    pub fixtures: Vec<FixtureResult>,
    pub pass: bool,
}

impl ProbeReport {
    pub fn failures(&self) -> impl Iterator<Item = &FixtureResult> {
        self.fixtures.iter().filter(|f| !f.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

/// Runs the named suite. Unknown names and invalid configurations are errors.
pub fn run_probe(name: &str, config: &ProbeConfig) -> Result<ProbeReport> {
    let anchor = anchor(name).ok_or_else(|| Error::Parse(format!("unknown probe {name:?}")))?;
    for key in default_tolerances(name).keys() {
        if !config.tolerances.contains_key(key) {
            return error::domain(format!("missing tolerance {key:?} for probe {name}"));
        }
    }
    config.grid()?;
    let fixtures = match name {
        "axioms" => probe_axioms(config)?,
        "cesaro" => probe_cesaro(config)?,
        "lemma23" => probe_mod_n(config)?,
        "lemma24" => probe_unimodular(config)?,
        "lemma36" => probe_flattening(config)?,
        "thm33" => probe_structure(config)?,
        "thm41" => probe_pullback(config)?,
        _ => unreachable!("anchor covers every probe"),
    };
    let pass = fixtures.iter().all(|f| f.pass);
    Ok(ProbeReport { probe: name.to_string(), anchor: anchor.to_string(), config: config.clone(), fixtures, pass })
}

/// Evaluates `count` fixtures in parallel and returns them in index order.
fn batch<T: Send>(count: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    (0..count).into_par_iter().map(f).collect()
}

fn or_failed(id: String, tol: f64, r: Result<FixtureResult>) -> FixtureResult {
    r.unwrap_or_else(|e| FixtureResult::failed(id, tol, e.to_string()))
}

fn norm_of(config: &ProbeConfig, default: NormFunctional) -> Result<NormFunctional> {
    match &config.alpha {
        Some(d) => NormFunctional::from_descriptor(d),
        None => Ok(default),
    }
}

fn probe_axioms(config: &ProbeConfig) -> Result<Vec<FixtureResult>> {
    let alpha = norm_of(config, NormFunctional::orlicz_exp())?;
    let grid = config.grid()?;
    let fixtures: Vec<CircleFunction> = batch(config.trials, |t| {
        random_band_limited(&mut fixture_rng(config.seed, t as u64), 16, grid)
    })
    .into_iter()
    .collect::<Result<_>>()?;
    let size = grid.size();
    let rotations: Vec<Complex64> = [1, 3, size / 4, size / 3, size - 1].iter().map(|&k| grid.node(k)).collect();
    let suite = verify_axioms(&alpha, &fixtures, &rotations, 0.0);
    let mut out: Vec<FixtureResult> = suite
        .checks
        .iter()
        .map(|c| {
            let class = c.check.split('[').next().unwrap_or(&c.check);
            let tol = config.tolerances.get(class).copied().unwrap_or(0.0);
            let error = match class {
                "unit" => c.value("value").map(|v| (v - 1.0).abs()),
                "abs" | "rotation" => c.value("deviation"),
                "triangle" => match (c.value("lhs"), c.value("rhs")) {
                    (Some(l), Some(r)) => Some((l - r).max(0.0) / r.max(1.0)),
                    _ => None,
                },
                _ => None,
            };
            match error {
                Some(e) => FixtureResult::new(c.check.clone(), e, tol),
                None => FixtureResult::failed(c.check.clone(), tol, c.message.clone().unwrap_or_default()),
            }
        })
        .collect();
    let fractions: Vec<f64> = (1..=6).map(|k| 0.5f64.powi(k)).collect();
    let cont = continuity_probe(&alpha, grid, &fractions);
    let tol = config.tol("continuity");
    out.push(FixtureResult {
        id: "continuity".into(),
        pass: cont.pass,
        error: cont.value("decay_factor").unwrap_or(f64::MAX),
        tolerance: tol,
        message: cont.message.clone(),
        details: Some(json!(cont.values)),
    });
    Ok(out)
}

fn probe_cesaro(config: &ProbeConfig) -> Result<Vec<FixtureResult>> {
    let norms = match &config.alpha {
        Some(d) => vec![NormFunctional::from_descriptor(d)?],
        None => vec![NormFunctional::p(1.0)?, NormFunctional::p(2.0)?, NormFunctional::orlicz_power(3.0)?],
    };
    let grid = config.grid()?;
    let tol = config.tol("bound");
    let orders = [16usize, 32, 64, 128];
    let results = batch(config.trials, |t| {
        let mut rng = fixture_rng(config.seed, t as u64);
        let d = rand::Rng::random_range(&mut rng, 1..=16) as i64;
        let p = random_laurent(&mut rng, Window { lo: -d, hi: d });
        norms
            .iter()
            .map(|alpha| {
                let id = format!("trial{t}/{}", alpha.label());
                or_failed(id.clone(), tol, cesaro_fixture(&id, alpha, &p, grid, &orders, tol))
            })
            .collect::<Vec<_>>()
    });
    Ok(results.into_iter().flatten().collect())
}

fn cesaro_fixture(
    id: &str,
    alpha: &NormFunctional,
    p: &LaurentPoly,
    grid: CircleGrid,
    orders: &[usize],
    tol: f64,
) -> Result<FixtureResult> {
    let f = synthesize(p, grid)?;
    let weighted: f64 = p.iter().map(|(j, c)| j.unsigned_abs() as f64 * c.norm()).sum();
    let mut errors = Vec::new();
    let mut excess = 0.0f64;
    for &n in orders {
        let e = alpha.eval(&f.cesaro_mean(n)?.sub(&f)?)?;
        excess = excess.max(e - weighted / (n + 1) as f64);
        errors.push(e);
    }
    let decreasing = errors.windows(2).all(|w| w[1] < w[0]);
    Ok(FixtureResult::new(id, excess.max(0.0), tol)
        .require(decreasing, "errors do not decrease in n")
        .details(json!({ "orders": orders, "errors": errors.iter().map(|&e| finite(e)).collect::<Vec<_>>() })))
}

fn n_values(config: &ProbeConfig, default: &[usize]) -> Vec<usize> {
    match config.n {
        Some(n) => vec![n],
        None => default.to_vec(),
    }
}

fn probe_mod_n(config: &ProbeConfig) -> Result<Vec<FixtureResult>> {
    let grid = config.grid()?;
    let ns = n_values(config, &[1, 2, 3, 5]);
    let tol = config.tol("reconstruct");
    let gtol = config.tol("grid_reconstruct");
    let results = batch(config.trials, |t| {
        let mut rng = fixture_rng(config.seed, t as u64);
        let lo = rand::Rng::random_range(&mut rng, -32..=0);
        let hi = rand::Rng::random_range(&mut rng, 0..=32);
        let p = random_laurent(&mut rng, Window { lo, hi });
        let mut out = Vec::new();
        for &n in &ns {
            let id = format!("trial{t}/n{n}");
            out.push(or_failed(id.clone(), tol, mod_n_exact(&id, &p, n, tol)));
            let gid = format!("trial{t}/n{n}/grid");
            out.push(or_failed(gid.clone(), gtol, mod_n_grid(&gid, &p, n, grid, gtol)));
        }
        out
    });
    Ok(results.into_iter().flatten().collect())
}

fn mod_n_exact(id: &str, p: &LaurentPoly, n: usize, tol: f64) -> Result<FixtureResult> {
    let d = decompose_mod_n(p, n)?;
    let error = d.reconstruct()?.distance(p);
    Ok(FixtureResult::new(id, error, tol).require(d.supports_in_nz(), "a component has support outside nZ"))
}

fn mod_n_grid(id: &str, p: &LaurentPoly, n: usize, grid: CircleGrid, tol: f64) -> Result<FixtureResult> {
    let f = synthesize(p, grid)?;
    let d = f.decompose_mod_n(n)?;
    let back = d.reconstruct()?;
    let scale = f.sup_abs().max(1.0);
    Ok(FixtureResult::new(id, back.max_distance(&f)? / scale, tol))
}

fn probe_unimodular(config: &ProbeConfig) -> Result<Vec<FixtureResult>> {
    let grid = config.grid()?;
    let rows_tol = config.tol("rows");
    let family_tol = config.tol("family");
    let ns = n_values(config, &[1, 2, 3, 4]);
    let results = batch(2 * config.trials, |idx| {
        let perturbed = idx >= config.trials;
        let t = idx % config.trials;
        let kind = if perturbed { "perturbed" } else { "unimodular" };
        let id = format!("{kind}{t}");
        let mut rng = fixture_rng(config.seed, idx as u64);
        let n = ns[rand::Rng::random_range(&mut rng, 0..ns.len())];
        let r = rand::Rng::random_range(&mut rng, 1..=n);
        let fx = random_unimodular_tuple(&mut rng, n, r, 3);
        let phis = if perturbed { perturb_tuple(&mut rng, &fx.phis, 4 * n as i64 + 3 * n as i64) } else { fx.phis };
        or_failed(id.clone(), rows_tol, unimodular_fixture(&id, n, phis, grid, rows_tol, family_tol, !perturbed))
    });
    Ok(results)
}

fn unimodular_fixture(
    id: &str,
    n: usize,
    phis: Vec<LaurentPoly>,
    grid: CircleGrid,
    rows_tol: f64,
    family_tol: f64,
    expect_pass: bool,
) -> Result<FixtureResult> {
    let tuple = UnimodularTuple::from_laurent(n, phis, grid)?;
    let rows = check_rows_orthonormal(&matrix_of(&tuple)?, rows_tol);
    let family = check_orthonormal_family(&tuple, FAMILY_SHIFTS)?;
    let family_pass = family.max_deviation <= family_tol;
    let agree = rows.pass == family_pass;
    let details = json!({
        "n": n,
        "r": tuple.r(),
        "rows_deviation": finite(rows.max_deviation),
        "family_deviation": finite(family.max_deviation),
        "rows_pass": rows.pass,
        "family_pass": family_pass,
    });
    let result = if expect_pass {
        FixtureResult::new(id, rows.max_deviation.max(family.max_deviation), rows_tol.max(family_tol))
    } else {
        // a negative control passes when both checks reject it
        FixtureResult {
            id: id.into(),
            pass: !rows.pass && !family_pass,
            error: finite(rows.max_deviation.min(family.max_deviation)),
            tolerance: rows_tol.max(family_tol),
            message: None,
            details: None,
        }
        .require(!rows.pass && !family_pass, "perturbed tuple was accepted")
    };
    Ok(result.require(agree, "the two checks disagree").details(details))
}

fn probe_flattening(config: &ProbeConfig) -> Result<Vec<FixtureResult>> {
    let grid = config.grid()?;
    let tol = config.tol("defect");
    let ns = n_values(config, &[1, 2, 3]);
    let results = batch(config.trials, |t| {
        let mut rng = fixture_rng(config.seed, t as u64);
        let d = rand::Rng::random_range(&mut rng, 1..=6);
        let f = random_nonnegative(&mut rng, d, grid);
        ns.iter()
            .map(|&n| {
                let id = format!("trial{t}/n{n}");
                let r = match &f {
                    Ok(f) => flattening_fixture(&id, f, n, tol),
                    Err(e) => Err(Error::Domain(e.to_string())),
                };
                or_failed(id, tol, r)
            })
            .collect::<Vec<_>>()
    });
    Ok(results.into_iter().flatten().collect())
}

fn flattening_fixture(id: &str, f: &CircleFunction, n: usize, tol: f64) -> Result<FixtureResult> {
    let fl = flattening_multiplier(f, n)?;
    let check = fl.check(tol);
    let excess = (fl.sup_flattened - n as f64).max(fl.sup_flattened_sq - (n * n) as f64).max(0.0);
    Ok(FixtureResult::new(id, fl.max_defect, tol)
        .require(check.pass, format!("flattening bound exceeded by {excess:e}"))
        .details(json!({
            "sup_flattened": finite(fl.sup_flattened),
            "sup_flattened_sq": finite(fl.sup_flattened_sq),
            "witnesses": fl.witnesses.iter().map(|w| json!({
                "analytic_defect": finite(w.analytic_defect),
                "modulus_error": finite(w.modulus_error),
                "max_abs_outer": finite(w.max_abs_outer),
                "min_abs_outer": finite(w.min_abs_outer),
            })).collect::<Vec<_>>(),
        })))
}

/// `(n, r, with_kernel)` combinations exercised by `thm33`.
fn structure_cases(config: &ProbeConfig) -> Vec<(usize, usize, bool)> {
    let mut out = Vec::new();
    for n in n_values(config, &[2, 3]) {
        for r in 1..=n {
            out.push((n, r, false));
            if r < n {
                out.push((n, r, true));
            }
        }
    }
    out
}

fn probe_structure(config: &ProbeConfig) -> Result<Vec<FixtureResult>> {
    let grid = config.grid()?;
    let cases = structure_cases(config);
    let tol = config.tol("membership");
    let mut out = batch(cases.len(), |idx| {
        let (n, r, kernel) = cases[idx];
        let id = format!("n{n}/r{r}/{}", if kernel { "kernel" } else { "plain" });
        let mut rng = fixture_rng(config.seed, idx as u64);
        or_failed(id.clone(), tol, structure_fixture(&id, config, grid, &mut rng, n, r, kernel))
    });
    // n = 1: the kernel inside any subspace is trivial
    let ktol = config.tol("kernel");
    let base = cases.len() as u64;
    out.extend(batch(config.trials, |t| {
        let id = format!("n1/kernel{t}");
        let mut rng = fixture_rng(config.seed, base + t as u64);
        let r = (|| {
            let fx = random_unimodular_tuple(&mut rng, 1, 1, 8);
            let tuple = UnimodularTuple::from_laurent(1, fx.phis, grid)?;
            let full = span(&(config.window.iter().map(LaurentPoly::z).collect::<Vec<_>>()), config.window)?;
            let kernel = kernel_space(&matrix_of(&tuple)?, &full.basis(), crate::linalg::RANK_TOL)?;
            Ok(FixtureResult::new(&id, kernel.len() as f64, 0.0))
        })();
        or_failed(id, ktol, r)
    }));
    if n_values(config, &[3]).contains(&3) {
        let id = "n3/r1/distinct_complements".to_string();
        let mut rng = fixture_rng(config.seed, base + config.trials as u64);
        out.push(or_failed(id.clone(), tol, distinct_complements(&id, config, grid, &mut rng)));
    }
    Ok(out)
}

fn structure_fixture(
    id: &str,
    config: &ProbeConfig,
    grid: CircleGrid,
    rng: &mut rand_chacha::ChaCha8Rng,
    n: usize,
    r: usize,
    with_kernel: bool,
) -> Result<FixtureResult> {
    let window = config.window;
    if window.lo > -(n as i64) || window.hi < 8 * n as i64 {
        return error::range(format!("window {window} needs degrees -{n} to {}", 8 * n));
    }
    let fx = random_unimodular_tuple(rng, n, r, 2);
    let kernel_gens = if with_kernel { fx.kernel_vectors() } else { Vec::new() };
    let tuple = UnimodularTuple::from_laurent(n, fx.phis.clone(), grid)?;
    let m = build_invariant(&tuple, &kernel_gens, window)?;
    let inv = is_simply_invariant(&m, n, config.tol("invariance"));
    let space = InnerProductSpace::l2(m.clone());
    let wold = wold_decompose(&space, n, 0)?;
    let angle = principal_angle_sin(&wold.wandering_basis, &fx.phis);
    let fit = StructureFit::new(&m, &tuple)?;
    let mut worst = 0.0f64;
    for _ in 0..MEMBERS_PER_SUBSPACE {
        let f = random_member(rng, &m);
        worst = worst.max(fit.fit(&f, config.tol("membership")).residual / f.norm_l2());
    }
    let mult_poly = random_polynomial(rng, 3);
    let mult = LaurentPoly::from_terms(mult_poly.iter().map(|(j, c)| (j * n as i64, c)).collect::<Vec<_>>());
    let mult_report = invariant_under_multiplier(&m, &mult, n, config.tol("multiplier"))?;
    let wold_tol = config.tol("wold");
    Ok(FixtureResult::new(id, worst, config.tol("membership"))
        .require(inv.status == InvarianceStatus::Simply, format!("invariance status {:?}", inv.status))
        .require(wold.wandering_dim == r, format!("wandering dimension {} for r = {r}", wold.wandering_dim))
        .require(wold.pass, "Wold report failed")
        .require(angle <= wold_tol.max(1e-8), format!("wandering space misses span(phi) by {angle:e}"))
        .require(mult_report.pass, "not invariant under a polynomial in z^n")
        .details(json!({
            "dim": m.dim(),
            "status": inv.status,
            "invariance_residual": finite(inv.max_residual),
            "wandering_dim": wold.wandering_dim,
            "tail_dim": wold.tail_dim,
            "wold_reconstruction_error": finite(wold.reconstruction_error),
            "wandering_angle": finite(angle),
            "members": MEMBERS_PER_SUBSPACE,
            "multiplier_residual": mult_report.value("max_residual"),
        })))
}

/// Random combination of the basis of `m`.
fn random_member(rng: &mut rand_chacha::ChaCha8Rng, m: &TruncatedSubspace) -> LaurentPoly {
    m.basis()
        .iter()
        .fold(LaurentPoly::zero(), |acc, b| acc + b.scale(crate::fixtures::gaussian(rng)))
}

/// Two kernel choices give two different subspaces with the same `phi` part.
fn distinct_complements(
    id: &str,
    config: &ProbeConfig,
    grid: CircleGrid,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> Result<FixtureResult> {
    let window = config.window;
    let fx = random_unimodular_tuple(rng, 3, 1, 2);
    let tuple = UnimodularTuple::from_laurent(3, fx.phis.clone(), grid)?;
    let kappas = fx.kernel_vectors();
    let a = build_invariant(&tuple, &kappas[..1], window)?;
    let b = build_invariant(&tuple, &kappas[1..], window)?;
    let angle = principal_angle_sin(&a.basis(), &b.basis());
    let ia = is_simply_invariant(&a, 3, config.tol("invariance"));
    let ib = is_simply_invariant(&b, 3, config.tol("invariance"));
    Ok(FixtureResult::new(id, 0.0, config.tol("membership"))
        .require(angle > 0.5, format!("subspaces coincide (angle sine {angle:e})"))
        .require(
            ia.status == InvarianceStatus::Simply && ib.status == InvarianceStatus::Simply,
            "a complement is not simply invariant",
        )
        .details(json!({ "angle_sine": finite(angle), "dims": [a.dim(), b.dim()] })))
}

fn probe_pullback(config: &ProbeConfig) -> Result<Vec<FixtureResult>> {
    let grid = config.grid()?;
    let tol = config.tol("isometry");
    Ok(batch(config.trials, |t| {
        let id = format!("pullback{t}");
        let mut rng = fixture_rng(config.seed, t as u64);
        or_failed(id.clone(), tol, pullback_fixture(&id, config, grid, &mut rng))
    }))
}

fn pullback_fixture(
    id: &str,
    config: &ProbeConfig,
    grid: CircleGrid,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> Result<FixtureResult> {
    let w = config.window;
    if w.lo > -1 || w.hi < 12 {
        return error::range(format!("window {w} needs room below degree 0 and above degree 12"));
    }
    let phi = random_analytic_unit(rng, 4);
    let deg = phi.support().map(|s| s.hi).unwrap_or(0);
    let gens: Vec<LaurentPoly> = (0..=w.hi - deg).map(LaurentPoly::z).collect();
    let m = InnerProductSpace::pullback(&phi, &gens, w)?;
    let fixtures: Vec<LaurentPoly> = (0..ISOMETRY_FIXTURES).map(|_| random_polynomial(rng, 8)).collect();
    let opts = BeurlingOptions { validate_metric: config.validate_metric, fixtures, tol: config.tol("isometry") };
    let ex = beurling_extract(&m, &opts)?;
    let angle = principal_angle_sin(std::slice::from_ref(&ex.phi), std::slice::from_ref(&phi));
    let wold = wold_decompose(&m, 1, max_wold_depth(&m, 1)?)?;
    let p2 = de_branges_p_check(&ex.phi, &ex.isometry, 2.0, grid)?;
    Ok(FixtureResult::new(id, ex.isometry.max_relative_error, config.tol("isometry"))
        .require(ex.isometry.pass, "isometry report failed")
        .require(angle <= config.tol("angle"), format!("extracted phi is off by angle sine {angle:e}"))
        .require(ex.phi.distance(&phi) <= config.tol("angle"), "extracted phi differs after gauge fixing")
        .require(wold.tail_dim == 0, format!("Wold tail has dimension {}", wold.tail_dim))
        .require(wold.pass, "Wold report failed")
        .note((wold.reconstruction_error > config.tol("wold")).then(|| "Wold reconstruction error above tolerance".into()))
        .details(json!({
            "phi": ex.phi,
            "angle_sine": finite(angle),
            "isometry": ex.isometry,
            "wold_depth": wold.depth,
            "wold_reconstruction_error": finite(wold.reconstruction_error),
            "tail_dim": wold.tail_dim,
            "symbol_sup_norm": p2.value("symbol_norm"),
        })))
}

/// Per-probe summaries and an overall flag. An empty list passes.
pub fn merge_reports(reports: &[ProbeReport]) -> Value {
    let summaries: Vec<Value> = reports
        .iter()
        .map(|r| {
            json!({
                "probe": r.probe,
                "anchor": r.anchor,
                "pass": r.pass,
                "fixtures": r.fixtures.len(),
                "failures": r.failures().count(),
            })
        })
        .collect();
    json!({ "probes": summaries, "pass": reports.iter().all(|r| r.pass) })
}
