//! End-to-end acceptance run: one line per criterion, non-zero exit if any
//! criterion fails.

use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use spinorlab::clifford::{norm, GammaRep, Spinor};
use spinorlab::dirac_harmonic::{construct_theorem2_pair, parallel_spinor_pair, residual, residuals_at};
use spinorlab::immersions::HypersurfaceImmersion;
use spinorlab::report::{run_suite, SuiteResult};
use spinorlab::sampling::{points_near, random_points, random_spinor};

struct Outcome {
    pass: bool,
    detail: String,
}

fn suite(name: &str, cfg: serde_json::Value, limit: Option<Duration>) -> Outcome {
    let start = Instant::now();
    let r: SuiteResult = match run_suite(name, &cfg) {
        Ok(r) => r,
        Err(e) => return Outcome { pass: false, detail: format!("error: {e}") },
    };
    let elapsed = start.elapsed();
    let within = limit.map_or(true, |l| elapsed < l);
    let failed: Vec<_> = r.failures().map(|c| format!("{} = {:e}", c.name, c.residual)).collect();
    let mut detail = format!("{} checks, {:.2} s", r.checks.len(), elapsed.as_secs_f64());
    if !within {
        detail += &format!(", over the {:?} limit", limit.unwrap());
    }
    if !failed.is_empty() {
        detail += &format!(", failing: {}", failed.join("; "));
    }
    Outcome { pass: r.pass && within, detail }
}

fn clifford() -> Outcome {
    let out = suite("clifford", json!({}), Some(Duration::from_secs(1)));
    let r = run_suite("clifford", &json!({})).expect("clifford suite runs");
    let exact = r.checks.iter().all(|c| c.residual == 0.0) && r.checks.len() == 24;
    Outcome { pass: out.pass && exact, detail: out.detail }
}

fn umbilic_solutions() -> Outcome {
    let mut pass = true;
    let mut details = Vec::new();
    for m in [3usize, 4, 5] {
        let o = suite("theorem2", json!({"m": m, "samples": 20, "seed": 7}), Some(Duration::from_secs(60)));
        pass &= o.pass;
        details.push(format!("m={m}: {}", o.detail));
    }
    // constants at m = 3
    let pair = construct_theorem2_pair(3, Spinor::from_vec(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)]))
        .expect("m = 3 pair");
    let constants = pair.kappa == -0.8 && (pair.mean_curvature - 0.447_213_595_5).abs() < 1e-10;
    details.push(format!("m=3 κ = {}, H = {:.10}", pair.kappa, pair.mean_curvature));
    Outcome { pass: pass && constants, detail: details.join(" | ") }
}

fn negative_control() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut pass = true;
    let mut details = Vec::new();
    for m in [3usize, 4, 5] {
        let mf = m as f64;
        let pair = construct_theorem2_pair(m, random_spinor(&mut rng, 1 << (m / 2))).expect("pair");
        let h = pair.mean_curvature;
        let samples = points_near(&mut rng, &pair.basepoint, 0.3, 20);
        let doubled = pair.phi.scale(Complex64::from(2.0));
        let broken = residuals_at(&pair.psi, &doubled, &pair.imm, &samples).expect("residuals");
        let min_ratio = broken.iter().map(|r| r.harmonic / (mf * h)).fold(f64::INFINITY, f64::min);
        let mut dirac_gap: f64 = 0.0;
        for (x, r) in samples.iter().zip(&broken) {
            let p = norm(&pair.psi.value(x).unwrap()).powi(2);
            let f = norm(&pair.phi.value(x).unwrap()).powi(2);
            dirac_gap = dirac_gap.max((r.dirac - h * (mf * f + mf * mf * p).sqrt()).abs());
        }
        pass &= min_ratio >= 0.1 && dirac_gap <= 1e-5;
        details.push(format!("m={m}: min harmonic/mH = {min_ratio:.6}, Dirac vs closed form {dirac_gap:.2e}"));
    }
    Outcome { pass, detail: details.join(" | ") }
}

fn parallel() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut pass = true;
    let mut details = Vec::new();
    for m in [3usize, 4] {
        let imm = HypersurfaceImmersion::flat_hyperplane(m).expect("hyperplane");
        let d = GammaRep::new(m).unwrap().dim_spinor();
        let (psi, phi) = parallel_spinor_pair(&imm, random_spinor(&mut rng, d)).expect("pair");
        let samples = random_points(&mut rng, imm.intrinsic_chart(), 20);
        let r = residual(&psi, &phi, &imm, &samples).expect("residual");
        pass &= r.dirac <= 1e-8 && r.harmonic <= 1e-8;
        details.push(format!("m={m}: Dirac {:.2e}, harmonic {:.2e}", r.dirac, r.harmonic));
    }
    Outcome { pass, detail: details.join(" | ") }
}

fn main() {
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        ("Clifford relations exact for m = 1..8", Box::new(clifford)),
        (
            "connection and curvature oracles",
            Box::new(|| suite("connection", json!({"samples": 50, "h": 1e-4, "seed": 7}), Some(Duration::from_secs(10)))),
        ),
        ("V_Phi triple oracle", Box::new(|| suite("vphi-triple", json!({"samples": 50, "seed": 7}), None))),
        ("twisted Dirac cross-check and order", Box::new(|| suite("lemma-cross", json!({"h": 1e-4, "seed": 7}), None))),
        ("explicit umbilic solutions m = 3, 4, 5", Box::new(umbilic_solutions)),
        ("negative control with doubled phi", Box::new(negative_control)),
        ("surface pairs from holomorphic data", Box::new(|| suite("surface", json!({"samples": 20, "seed": 7}), None))),
        ("parallel spinors on flat hyperplanes", Box::new(parallel)),
        ("Clifford torus rigidity", Box::new(|| suite("clifford-torus", json!({"seed": 7}), None))),
        ("ambient rescaling invariance", Box::new(|| suite("rescaling", json!({"seed": 7}), None))),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        if !o.pass {
            failures += 1;
        }
        println!("criterion {:>2} {}  {name}: {}", i + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
    println!("all {} criteria passed", criteria.len());
}
