//! Acceptance gate: one line per criterion, nonzero exit on any failure.

use std::process::ExitCode;
use std::time::Instant;

use hardylab::fixtures::{fixture_rng, random_band_limited};
use hardylab::norms::LUXEMBURG_TOL;
use hardylab::{orlicz_norm, p_norm, run_probe, CircleGrid, NormDescriptor, OrliczFunction, ProbeConfig, ProbeReport};

const SEED: u64 = 20240611;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn config(probe: &str, trials: usize) -> ProbeConfig {
    ProbeConfig { seed: SEED, trials, ..ProbeConfig::new(probe) }
}

fn probe(name: &str, config: &ProbeConfig) -> Result<ProbeReport, String> {
    run_probe(name, config).map_err(|e| e.to_string())
}

fn first_failure(r: &ProbeReport) -> String {
    r.failures()
        .next()
        .map(|f| format!("{} failed: error {:e}, {}", f.id, f.error, f.message.clone().unwrap_or_default()))
        .unwrap_or_default()
}

fn max_error(r: &ProbeReport, prefix: &str) -> f64 {
    r.fixtures.iter().filter(|f| f.id.starts_with(prefix)).map(|f| f.error).fold(0.0, f64::max)
}

fn orlicz_matches_p() -> Outcome {
    let start = Instant::now();
    let grid = CircleGrid::new(1024).unwrap();
    let mut worst = 0.0f64;
    for k in 0..100 {
        let f = random_band_limited(&mut fixture_rng(SEED, k), 32, grid).unwrap();
        for p in [1.0, 2.0, 3.0, 4.0] {
            let psi = OrliczFunction::power(p).unwrap();
            let a = orlicz_norm(&f, &psi, LUXEMBURG_TOL).unwrap();
            let b = p_norm(&f, p).unwrap();
            worst = worst.max((a - b).abs() / b);
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst <= 1e-8 && secs <= 10.0,
        format!("max relative gap {worst:.2e} over 400 evaluations in {secs:.2} s"),
    )
}

fn axioms() -> Outcome {
    let report = match probe("axioms", &config("axioms", 25)) {
        Ok(r) => r,
        Err(e) => return outcome(false, e),
    };
    let rotation = max_error(&report, "rotation");
    let sup = ProbeConfig { alpha: Some(NormDescriptor::Sup), ..config("axioms", 25) };
    let rejected = match probe("axioms", &sup) {
        Ok(r) => r
            .fixtures
            .iter()
            .any(|f| f.id == "continuity" && !f.pass && f.message.as_deref().unwrap_or("").contains("not continuous")),
        Err(_) => false,
    };
    let mut detail = format!("rotation deviation {rotation:.1e}, sup norm rejected: {rejected}");
    if !report.pass {
        detail = format!("{detail}; {}", first_failure(&report));
    }
    outcome(report.pass && rotation <= 1e-12 && rejected, detail)
}

fn summarize(name: &str, cfg: ProbeConfig, extra: impl Fn(&ProbeReport) -> (bool, String)) -> Outcome {
    match probe(name, &cfg) {
        Ok(r) => {
            let (ok, mut detail) = extra(&r);
            if !r.pass {
                detail = format!("{detail}; {}", first_failure(&r));
            }
            outcome(r.pass && ok, format!("{} fixtures, {detail}", r.fixtures.len()))
        }
        Err(e) => outcome(false, e),
    }
}

fn cesaro() -> Outcome {
    summarize("cesaro", config("cesaro", 25), |r| {
        let ok = r.fixtures.len() == 75;
        (ok, format!("largest excess over the bound {:.1e}", max_error(r, "trial")))
    })
}

fn mod_n() -> Outcome {
    summarize("lemma23", config("lemma23", 100), |r| {
        let ok = r.fixtures.len() == 100 * 4 * 2;
        (ok, format!("worst reconstruction {:.1e}", max_error(r, "trial")))
    })
}

fn unimodular_equivalence() -> Outcome {
    summarize("lemma24", config("lemma24", 50), |r| {
        let count = |kind: &str| r.fixtures.iter().filter(|f| f.id.starts_with(kind)).count();
        let ok = count("unimodular") == 50 && count("perturbed") == 50;
        (ok, format!("worst unimodular deviation {:.1e}", max_error(r, "unimodular")))
    })
}

fn flattening() -> Outcome {
    summarize("lemma36", config("lemma36", 25), |r| {
        (r.fixtures.len() == 75, format!("worst outer defect {:.1e}", max_error(r, "trial")))
    })
}

fn structure() -> Outcome {
    summarize("thm33", config("thm33", 25), |r| {
        let cases = r.fixtures.iter().filter(|f| f.id.contains("/r")).count();
        let n1 = r.fixtures.iter().filter(|f| f.id.starts_with("n1/")).count();
        // (n, r) pairs: 2 + 3, plus a kernel variant whenever r < n
        let ok = cases >= 8 && n1 == 25;
        (ok, format!("worst member residual {:.1e}", max_error(r, "n2").max(max_error(r, "n3"))))
    })
}

fn beurling() -> Outcome {
    summarize("thm41", config("thm41", 10), |r| {
        let angle = r
            .fixtures
            .iter()
            .filter_map(|f| f.details.as_ref()?.get("angle_sine")?.as_f64())
            .fold(0.0, f64::max);
        let tails = r.fixtures.iter().all(|f| {
            f.details.as_ref().and_then(|d| d.get("tail_dim")).and_then(|v| v.as_u64()) == Some(0)
        });
        (angle <= 1e-8 && tails, format!("worst angle sine {angle:.1e}, worst isometry error {:.1e}", max_error(r, "pullback")))
    })
}

fn determinism() -> Outcome {
    let mut same = true;
    for (name, trials) in [("lemma24", 10), ("thm41", 3), ("lemma36", 3)] {
        let cfg = config(name, trials);
        match (probe(name, &cfg), probe(name, &cfg)) {
            (Ok(a), Ok(b)) => same &= a.to_json() == b.to_json(),
            _ => same = false,
        }
    }
    outcome(same, "lemma24, thm41 and lemma36 reports are byte-identical across two runs")
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("orlicz power norm equals p-norm", orlicz_matches_p),
        ("norm axioms and continuity for exp(x) - 1", axioms),
        ("Cesaro error bound and decay", cesaro),
        ("mod-n decomposition round trip", mod_n),
        ("unimodular matrix iff orthonormal family", unimodular_equivalence),
        ("outer flattening bounds", flattening),
        ("invariant subspace structure round trip", structure),
        ("pullback spaces recover phi", beurling),
        ("deterministic probe reports", determinism),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        let status = if o.pass { "PASS" } else { "FAIL" };
        println!("[{status}] {}. {name}: {} ({:.1} s)", i + 1, o.detail, start.elapsed().as_secs_f64());
        if !o.pass {
            failures += 1;
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failures, criteria.len());
    if failures == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
