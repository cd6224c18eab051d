use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{Check, SuiteConfig};
use crate::clifford::{inner, norm, GammaRep};
use crate::dirac_harmonic::{
    build_phi, closed_case_conditions, clifford_torus_rigidity_check, construct_theorem2_pair, coordinate_to_adapted,
    corollary_surface_pair, parallel_spinor_pair, residual, residuals_at, theorem1_conditions_over,
    twisted_dirac_coordinate, twisted_dirac_direct, twisted_dirac_formula_general, twisted_dirac_formula_hyp,
    twisted_distance, v_phi_cross, v_phi_direct, v_phi_formula, v_phi_from_components, ConditionReport, Residuals,
};
use crate::error::{Error, Result};
use crate::fd::{FdScheme, DEFAULT_STEP};
use crate::geometry::{Chart, ChartKind};
use crate::immersions::HypersurfaceImmersion;
use crate::oracles::{christoffel_fd, sectional_curvature_fd, spin_connection_fd};
use crate::sampling::{points_near, random_exp_field, random_points, random_spinor};
use crate::spinor_fields::{twistor_from_holomorphic, ComplexFn, DerivativeMode, SpinorField};

pub(super) type SuiteOutput = Result<(Vec<Check>, Vec<f64>)>;

/// Step for nested (second-order) finite differences of curvature.
const CURVATURE_STEP: f64 = 1e-3;
const CONVERGENCE_STEPS: [f64; 3] = [1e-3, 5e-4, 2.5e-4];
const MIN_ORDER: f64 = 1.9;

fn rng(cfg: &SuiteConfig) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(cfg.seed())
}

fn main_step(cfg: &SuiteConfig) -> f64 {
    cfg.h.as_ref().map_or(DEFAULT_STEP, |h| h.as_vec()[0])
}

fn convergence_steps(cfg: &SuiteConfig) -> Result<Vec<f64>> {
    match &cfg.h {
        Some(h) if h.as_vec().len() >= 2 => Ok(h.as_vec()),
        Some(_) => Err(Error::Config("convergence needs at least two steps in `h`".into())),
        None => Ok(CONVERGENCE_STEPS.to_vec()),
    }
}

fn dims(cfg: &SuiteConfig, default: &[usize], min: usize) -> Result<Vec<usize>> {
    match cfg.m {
        Some(m) if m < min => Err(Error::Config(format!("this suite needs m ≥ {min}, got {m}"))),
        Some(m) => Ok(vec![m]),
        None => Ok(default.to_vec()),
    }
}

fn label(imm: &HypersurfaceImmersion) -> String {
    use crate::immersions::ImmersionKind::*;
    match imm.kind() {
        UmbilicHyperbolic { kappa } => format!("umbilic_hyperbolic(m={}, κ={kappa:.4})", imm.m()),
        FlatHyperplane => format!("flat_hyperplane(m={})", imm.m()),
        CliffordTorus => "clifford_torus".to_string(),
    }
}

fn chart_label(chart: &Chart) -> String {
    match chart.kind() {
        ChartKind::Euclidean => format!("euclidean(m={})", chart.m()),
        ChartKind::HyperbolicHalfspace { kappa } => format!("hyperbolic_halfspace(m={}, κ={kappa})", chart.m()),
        ChartKind::SphereStereographic { kappa } => format!("sphere_stereographic(m={}, κ={kappa})", chart.m()),
        ChartKind::FlatTorus { .. } => format!("flat_torus(m={})", chart.m()),
    }
}

fn rep(m: usize) -> Result<Arc<GammaRep>> {
    Ok(Arc::new(GammaRep::new(m)?))
}

fn max_of(it: impl IntoIterator<Item = f64>) -> f64 {
    it.into_iter().fold(0.0, f64::max)
}

fn fd(field: &SpinorField, h: f64) -> SpinorField {
    field.clone().with_mode(DerivativeMode::FiniteDifference(FdScheme::new(h)))
}

/// Least-squares slope of `ln e` against `ln h`.
pub(crate) fn fitted_order(steps: &[f64], errors: &[f64]) -> f64 {
    let xs: Vec<f64> = steps.iter().map(|h| h.ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

fn pair_of_fields(rng: &mut ChaCha8Rng, imm: &HypersurfaceImmersion) -> Result<(SpinorField, SpinorField)> {
    let r = rep(imm.m())?;
    let chart = imm.intrinsic_chart();
    Ok((random_exp_field(rng, chart, &r, 2)?, random_exp_field(rng, chart, &r, 2)?))
}

fn umbilic_catalog(ms: &[usize]) -> Result<Vec<HypersurfaceImmersion>> {
    ms.iter()
        .map(|&m| HypersurfaceImmersion::umbilic_hyperbolic(m, -4.0 / (m as f64 + 2.0)))
        .collect()
}

pub(super) fn clifford(cfg: &SuiteConfig) -> SuiteOutput {
    let ms = dims(cfg, &[1, 2, 3, 4, 5, 6, 7, 8], 1)?;
    let mut checks = Vec::new();
    for m in ms {
        let r = GammaRep::new(m)?;
        checks.push(Check::at_most(format!("anticommutator m={m}"), r.anticommutator_defect(), 0.0));
        checks.push(Check::at_most(format!("skew-hermitian m={m}"), r.skew_hermitian_defect(), 0.0));
        let expected_dim = 1usize << (m / 2);
        checks.push(Check::at_most(
            format!("spinor dimension m={m}"),
            (r.dim_spinor() as f64 - expected_dim as f64).abs(),
            0.0,
        ));
    }
    Ok((checks, vec![]))
}

pub(super) fn connection(cfg: &SuiteConfig) -> SuiteOutput {
    let m = dims(cfg, &[3], 2)?[0];
    let n = cfg.samples.unwrap_or(50);
    let h = main_step(cfg);
    let mut rng = rng(cfg);
    let charts = vec![
        Chart::euclidean(m)?,
        Chart::hyperbolic_halfspace(m, -0.8)?,
        Chart::sphere_stereographic(m, 0.5)?,
        Chart::flat_torus(vec![2.0; m])?,
    ];
    let mut checks = Vec::new();
    for chart in charts {
        let name = chart_label(&chart);
        let points = random_points(&mut rng, &chart, n);
        let planes: Vec<(Vec<f64>, Vec<f64>)> = (0..n)
            .map(|_| {
                let a: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let b: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect();
                (a, b)
            })
            .collect();
        let per_point: Vec<(f64, f64, f64)> = points
            .par_iter()
            .zip(planes.par_iter())
            .map(|(x, (a, b))| {
                let gamma = chart.christoffel(x)?.max_abs_diff(&christoffel_fd(&chart, x, h)?);
                let omega = chart.spin_connection_coeffs(x)?.max_abs_diff(&spin_connection_fd(&chart, x, h)?);
                let k = sectional_curvature_fd(&chart, x, a, b, CURVATURE_STEP)?;
                Ok((gamma, omega, (k - chart.curvature()).abs()))
            })
            .collect::<Result<_>>()?;
        checks.push(Check::at_most(format!("christoffel {name}"), max_of(per_point.iter().map(|p| p.0)), 1e-6));
        checks.push(Check::at_most(format!("spin connection {name}"), max_of(per_point.iter().map(|p| p.1)), 1e-6));
        checks.push(Check::at_most(format!("sectional curvature {name}"), max_of(per_point.iter().map(|p| p.2)), 1e-4));
        let mf = m as f64;
        let scalar = points
            .iter()
            .map(|x| Ok((chart.scalar_curvature(x)? - mf * (mf - 1.0) * chart.curvature()).abs()))
            .collect::<Result<Vec<_>>>()?;
        checks.push(Check::at_most(format!("scalar curvature {name}"), max_of(scalar), 1e-10));
    }
    Ok((checks, vec![h, CURVATURE_STEP]))
}

pub(super) fn vphi_triple(cfg: &SuiteConfig) -> SuiteOutput {
    let ms = dims(cfg, &[3, 4, 5], 2)?;
    let n = cfg.samples.unwrap_or(50);
    let mut rng = rng(cfg);
    let mut imms = Vec::new();
    for m in ms {
        let kappa = -rng.gen_range(0.05..1.0);
        imms.push(HypersurfaceImmersion::umbilic_hyperbolic(m, kappa)?);
    }
    imms.push(HypersurfaceImmersion::clifford_torus());
    let mut checks = Vec::new();
    for imm in imms {
        let name = label(&imm);
        let r = rep(imm.m())?;
        let amb = imm.spaceform();
        let (mut dc, mut df, mut cf, mut imag, mut psi_only) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
        for _ in 0..n {
            let (psi, phi) = pair_of_fields(&mut rng, &imm)?;
            let x = random_points(&mut rng, imm.intrinsic_chart(), 1).remove(0);
            let field = build_phi(&psi, &phi, &imm)?;
            let direct = v_phi_direct(&field, &x)?;
            let cross = v_phi_cross(&psi, &phi, &imm, &x)?;
            let formula = v_phi_formula(&psi, &phi, &imm, &x)?;
            dc = dc.max((&direct.value - &cross).norm());
            df = df.max((&direct.value - &formula).norm());
            cf = cf.max((&cross - &formula).norm());
            imag = imag.max(direct.max_imag);
            let mut sigma = field.values(&x)?;
            sigma[imm.m()] = r.zero_spinor();
            let v = v_phi_from_components(&r, &amb, &sigma)?;
            psi_only = psi_only.max(v.value.norm()).max(v.max_imag);
        }
        checks.push(Check::at_most(format!("direct vs cross {name}"), dc, 1e-8));
        checks.push(Check::at_most(format!("direct vs formula {name}"), df, 1e-8));
        checks.push(Check::at_most(format!("cross vs formula {name}"), cf, 1e-8));
        checks.push(Check::at_most(format!("imaginary part {name}"), imag, 1e-10));
        checks.push(Check::at_most(format!("V vanishes for phi = 0 {name}"), psi_only, 1e-10));
    }
    Ok((checks, vec![]))
}

pub(super) fn lemma_cross(cfg: &SuiteConfig) -> SuiteOutput {
    let ms = dims(cfg, &[3, 4, 5], 2)?;
    let n = cfg.samples.unwrap_or(10);
    let h = main_step(cfg);
    let steps = CONVERGENCE_STEPS.to_vec();
    let mut rng = rng(cfg);
    let mut imms = umbilic_catalog(&ms)?;
    imms.push(HypersurfaceImmersion::flat_hyperplane(3)?);
    imms.push(HypersurfaceImmersion::clifford_torus());
    let mut checks = Vec::new();
    for imm in imms {
        let name = label(&imm);
        let (psi_a, phi_a) = pair_of_fields(&mut rng, &imm)?;
        let (psi, phi) = (fd(&psi_a, h), fd(&phi_a, h));
        let field = build_phi(&psi, &phi, &imm)?;
        let points = random_points(&mut rng, imm.intrinsic_chart(), n);
        let diffs: Vec<(f64, f64, f64)> = points
            .par_iter()
            .map(|x| {
                let direct = twisted_dirac_direct(&field, x)?;
                let general = twisted_dirac_formula_general(&psi, &phi, &imm, x)?;
                let hyp = twisted_dirac_formula_hyp(&psi, &phi, &imm, x)?;
                Ok((
                    twisted_distance(&direct, &general),
                    twisted_distance(&general, &hyp),
                    twisted_distance(&direct, &hyp),
                ))
            })
            .collect::<Result<_>>()?;
        checks.push(Check::at_most(format!("direct vs general {name}"), max_of(diffs.iter().map(|d| d.0)), 1e-5));
        checks.push(Check::at_most(format!("general vs hypersurface {name}"), max_of(diffs.iter().map(|d| d.1)), 1e-6));
        checks.push(Check::at_most(format!("direct vs hypersurface {name}"), max_of(diffs.iter().map(|d| d.2)), 1e-5));

        // exact reference: closed-form derivatives and exact W
        let x = &points[0];
        let exact = twisted_dirac_formula_hyp(&psi_a, &phi_a, &imm, x)?;
        let mut err_direct = Vec::new();
        let mut err_general = Vec::new();
        for &s in &steps {
            let (p, f) = (fd(&psi_a, s), fd(&phi_a, s));
            err_direct.push(twisted_distance(&twisted_dirac_direct(&build_phi(&p, &f, &imm)?, x)?, &exact));
            err_general.push(twisted_distance(&twisted_dirac_formula_general(&p, &f, &imm, x)?, &exact));
        }
        checks.push(Check::at_least(format!("order direct {name}"), fitted_order(&steps, &err_direct), MIN_ORDER));
        checks.push(Check::at_least(format!("order general {name}"), fitted_order(&steps, &err_general), MIN_ORDER));
    }
    let mut fd_steps = vec![h];
    fd_steps.extend(steps);
    Ok((checks, fd_steps))
}

fn condition_checks(checks: &mut Vec<Check>, prefix: &str, report: &ConditionReport) {
    for r in &report.residuals {
        checks.push(Check::at_most(format!("{prefix}: {}", r.name), r.residual, report.tolerance));
    }
}

fn residual_checks(checks: &mut Vec<Check>, prefix: &str, r: Residuals, tol: f64) {
    checks.push(Check::at_most(format!("{prefix}: Dirac residual"), r.dirac, tol));
    checks.push(Check::at_most(format!("{prefix}: harmonic residual"), r.harmonic, tol));
}

pub(super) fn theorem1(cfg: &SuiteConfig) -> SuiteOutput {
    let m = dims(cfg, &[4], 3)?[0];
    let n = cfg.samples.unwrap_or(10);
    let mut rng = rng(cfg);
    let mut checks = Vec::new();
    // (label, ψ, φ, immersion, samples) for the equivalence test
    let mut cases = Vec::new();

    let d = 1usize << (m / 2);
    let pair = construct_theorem2_pair(m, random_spinor(&mut rng, d))?;
    let samples = points_near(&mut rng, &pair.basepoint, 0.3, n);
    let report = theorem1_conditions_over(&pair.psi, &pair.phi, &pair.imm, &samples, 1e-5)?;
    condition_checks(&mut checks, &format!("umbilic pair m={m}"), &report);
    cases.push((pair.psi.clone(), pair.phi.clone(), pair.imm.clone(), samples.clone()));
    cases.push((pair.psi.clone(), pair.phi.scale(Complex64::from(2.0)), pair.imm.clone(), samples));

    let torus = HypersurfaceImmersion::clifford_torus();
    let r2 = rep(2)?;
    let (psi, phi) = parallel_spinor_pair(&torus, random_spinor(&mut rng, 2))?;
    let samples = random_points(&mut rng, torus.intrinsic_chart(), n);
    let report = theorem1_conditions_over(&psi, &phi, &torus, &samples, 1e-8)?;
    condition_checks(&mut checks, "clifford_torus parallel", &report);
    cases.push((psi, phi.clone(), torus.clone(), samples.clone()));
    let mode = SpinorField::fourier_mode(torus.intrinsic_chart().clone(), r2, &[1, 0], random_spinor(&mut rng, 2))?;
    cases.push((mode, phi, torus, samples));

    for fm in [3usize, 4] {
        let flat = HypersurfaceImmersion::flat_hyperplane(fm)?;
        let r = rep(fm)?;
        let (psi, phi) = parallel_spinor_pair(&flat, random_spinor(&mut rng, r.dim_spinor()))?;
        let samples = random_points(&mut rng, flat.intrinsic_chart(), n);
        let mut closed: Option<ConditionReport> = None;
        for x in &samples {
            let rep_x = closed_case_conditions(&psi, &phi, &flat, x, 1e-8)?;
            closed = Some(match closed {
                None => rep_x,
                Some(mut acc) => {
                    for (a, b) in acc.residuals.iter_mut().zip(&rep_x.residuals) {
                        a.residual = a.residual.max(b.residual);
                    }
                    acc
                }
            });
        }
        condition_checks(&mut checks, &format!("flat_hyperplane(m={fm}) closed case"), &closed.expect("samples"));
        let report = theorem1_conditions_over(&psi, &phi, &flat, &samples, 1e-8)?;
        condition_checks(&mut checks, &format!("flat_hyperplane(m={fm}) parallel"), &report);
        let r = residual(&psi, &phi, &flat, &samples)?;
        residual_checks(&mut checks, &format!("flat_hyperplane(m={fm}) parallel pair"), r, 1e-8);
        cases.push((psi, phi.clone(), flat.clone(), samples.clone()));
        let wavy = random_exp_field(&mut rng, flat.intrinsic_chart(), &rep(fm)?, 1)?;
        cases.push((wavy, phi, flat, samples));
    }

    // conditions hold iff the equations hold, on every case above
    let tol = 1e-5;
    let mut mismatches = 0usize;
    for (psi, phi, imm, samples) in &cases {
        let conditions = theorem1_conditions_over(psi, phi, imm, samples, tol)?.pass;
        let r = residual(psi, phi, imm, samples)?;
        if conditions != (r.dirac <= tol && r.harmonic <= tol) {
            mismatches += 1;
        }
    }
    checks.push(Check::at_most(format!("conditions ⇔ equations on {} cases", cases.len()), mismatches as f64, 0.0));
    Ok((checks, vec![DEFAULT_STEP]))
}

pub(super) fn theorem2(cfg: &SuiteConfig) -> SuiteOutput {
    let ms = dims(cfg, &[3, 4, 5], 3)?;
    let n = cfg.samples.unwrap_or(20);
    let mut rng = rng(cfg);
    let mut checks = Vec::new();
    for m in ms {
        let mf = m as f64;
        let tag = format!("m={m}");
        let d = 1usize << (m / 2);
        let pair = construct_theorem2_pair(m, random_spinor(&mut rng, d))?;
        let h = pair.mean_curvature;
        let c = pair.imm.spaceform().c;
        checks.push(Check::at_most(format!("{tag}: κ = -4/(m+2)"), (pair.kappa + 4.0 / (mf + 2.0)).abs(), 0.0));
        checks.push(Check::at_most(
            format!("{tag}: H = √((m-2)/(m+2))"),
            (h - ((mf - 2.0) / (mf + 2.0)).sqrt()).abs(),
            1e-15,
        ));
        checks.push(Check::at_most(
            format!("{tag}: H² = -(m-2)/(m+2)·c"),
            (h * h + (mf - 2.0) / (mf + 2.0) * c).abs(),
            1e-15,
        ));
        let x0 = &pair.basepoint;
        let ip0 = inner(&pair.psi_p.value(x0)?, &pair.psi_m.value(x0)?)?;
        checks.push(Check::at_most(
            format!("{tag}: Im<psi_p,psi_m> = -1/(2√(m+2))"),
            (ip0.im + 1.0 / (2.0 * (mf + 2.0).sqrt())).abs(),
            1e-10,
        ));

        let samples = points_near(&mut rng, x0, 0.3, n);
        let r = residual(&pair.psi, &pair.phi, &pair.imm, &samples)?;
        residual_checks(&mut checks, &tag, r, 1e-5);

        let psi_d2 = pair.psi.dirac_field();
        let phi_d2 = pair.phi.dirac_field();
        let eig = Complex64::from(mf * mf * h * h / (mf - 2.0));
        let per_point: Vec<[f64; 4]> = samples
            .par_iter()
            .map(|x| {
                let ip = inner(&pair.psi_p.value(x)?, &pair.psi_m.value(x)?)?;
                let psi = pair.psi.value(x)?;
                let phi = pair.phi.value(x)?;
                let contracted = pair.psi.dirac(x)? * Complex64::from(mf - 2.0) + &phi * Complex64::from(mf * h);
                Ok([
                    (ip - ip0).norm(),
                    norm(&contracted),
                    norm(&(psi_d2.dirac(x)? + &psi * eig)),
                    norm(&(phi_d2.dirac(x)? + &phi * eig)),
                ])
            })
            .collect::<Result<_>>()?;
        let col = |i: usize| max_of(per_point.iter().map(|p| p[i]));
        checks.push(Check::at_most(format!("{tag}: <psi_p,psi_m> constant"), col(0), 1e-6));
        checks.push(Check::at_most(format!("{tag}: (m-2)D psi + mH phi"), col(1), 1e-5));
        checks.push(Check::at_most(format!("{tag}: D² psi + m²H²/(m-2) psi"), col(2), 1e-4));
        checks.push(Check::at_most(format!("{tag}: D² phi + m²H²/(m-2) phi"), col(3), 1e-4));

        let report = theorem1_conditions_over(&pair.psi, &pair.phi, &pair.imm, &samples, 1e-5)?;
        condition_checks(&mut checks, &tag, &report);
        let field = build_phi(&pair.psi, &pair.phi, &pair.imm)?;
        checks.push(Check::at_least(format!("{tag}: max |Phi|"), field.max_norm(&samples)?, 1e-8));

        // negative control: doubling φ
        let doubled = pair.phi.scale(Complex64::from(2.0));
        let broken = residuals_at(&pair.psi, &doubled, &pair.imm, &samples)?;
        let min_harmonic = broken.iter().map(|r| r.harmonic).fold(f64::INFINITY, f64::min);
        checks.push(Check::at_least(
            format!("{tag}: doubled phi harmonic residual ≥ 0.1·mH"),
            min_harmonic / (mf * h),
            0.1,
        ));
        let predicted = samples
            .iter()
            .zip(&broken)
            .map(|(x, r)| {
                let p = norm(&pair.psi.value(x)?).powi(2);
                let f = norm(&pair.phi.value(x)?).powi(2);
                Ok((r.dirac - h * (mf * f + mf * mf * p).sqrt()).abs())
            })
            .collect::<Result<Vec<_>>>()?;
        checks.push(Check::at_most(format!("{tag}: doubled phi Dirac residual matches closed form"), max_of(predicted), 1e-5));
    }
    Ok((checks, vec![DEFAULT_STEP]))
}

fn poly(coeffs: Vec<Complex64>) -> ComplexFn {
    Arc::new(move |z| coeffs.iter().rev().fold(Complex64::from(0.0), |acc, c| acc * z + c))
}

pub(super) fn surface(cfg: &SuiteConfig) -> SuiteOutput {
    let n = cfg.samples.unwrap_or(20);
    let mut rng = rng(cfg);
    let plane = HypersurfaceImmersion::flat_hyperplane(2)?;
    let samples = random_points(&mut rng, plane.intrinsic_chart(), n);
    let one = Complex64::from(1.0);
    let zero = Complex64::from(0.0);
    let cases: Vec<(&str, ComplexFn, ComplexFn)> = vec![
        ("(1, 0)", poly(vec![one]), poly(vec![])),
        ("(z, 0)", poly(vec![zero, one]), poly(vec![])),
        ("(z², z̄)", poly(vec![zero, zero, one]), Arc::new(|z: Complex64| z.conj())),
    ];
    let mut checks = Vec::new();
    for (name, hol, antihol) in cases {
        let psi = twistor_from_holomorphic(hol, antihol)?;
        let twistor = samples.iter().map(|x| psi.penrose_norm(x)).collect::<Result<Vec<_>>>()?;
        checks.push(Check::at_most(format!("{name}: twistor equation"), max_of(twistor), 1e-6));
        let phi = SpinorField::zero(psi.chart().clone(), psi.rep().clone())?;
        let r = residual(&psi, &phi, &plane, &samples)?;
        residual_checks(&mut checks, name, r, 1e-6);
        let accepted = match corollary_surface_pair(&psi, &plane, &samples, 1e-6) {
            Ok(_) => 0.0,
            Err(Error::PreconditionViolated { residual, .. }) => residual,
            Err(e) => return Err(e),
        };
        checks.push(Check::at_most(format!("{name}: accepted as surface pair"), accepted, 1e-6));
    }
    let torus = HypersurfaceImmersion::clifford_torus();
    let r2 = rep(2)?;
    let tsamples = random_points(&mut rng, torus.intrinsic_chart(), n.min(5));
    let mode = SpinorField::fourier_mode(torus.intrinsic_chart().clone(), r2, &[1, 1], random_spinor(&mut rng, 2))?;
    let rejected = match corollary_surface_pair(&mode, &torus, &tsamples, 1e-6) {
        Ok(_) => 0.0,
        Err(Error::PreconditionViolated { residual, .. }) => residual,
        Err(e) => return Err(e),
    };
    checks.push(Check::at_least("clifford_torus Fourier mode rejected", rejected, 1e-2));
    Ok((checks, vec![DEFAULT_STEP]))
}

pub(super) fn clifford_torus(cfg: &SuiteConfig) -> SuiteOutput {
    let n = cfg.samples.unwrap_or(10);
    let mut rng = rng(cfg);
    let torus = HypersurfaceImmersion::clifford_torus();
    let chart = torus.intrinsic_chart().clone();
    let r2 = rep(2)?;
    let samples = random_points(&mut rng, &chart, n);
    let mut checks = Vec::new();
    let (psi, phi) = parallel_spinor_pair(&torus, random_spinor(&mut rng, 2))?;
    let report = theorem1_conditions_over(&psi, &phi, &torus, &samples, 1e-6)?;
    condition_checks(&mut checks, "parallel", &report);
    residual_checks(&mut checks, "parallel", residual(&psi, &phi, &torus, &samples)?, 1e-6);
    let rigid = clifford_torus_rigidity_check(&psi, &phi, &samples, 1e-6, 1e-6)?;
    checks.push(Check::at_most("parallel: rigidity conclusion", rigid.max_nabla_psi.max(rigid.max_phi), 1e-6));

    for k in 0..10 {
        let modes = loop {
            let m = [rng.gen_range(-3i64..=3), rng.gen_range(-3i64..=3)];
            if m != [0, 0] {
                break m;
            }
        };
        let cand = SpinorField::fourier_mode(chart.clone(), r2.clone(), &modes, random_spinor(&mut rng, 2))?;
        let (kind, partner) = if k % 2 == 0 {
            ("phi = 0", SpinorField::zero(chart.clone(), r2.clone())?)
        } else {
            // φ = κ_1^{-1}(e_1·∇_{e_1}ψ - e_2·∇_{e_2}ψ) with κ_1 = 1
            let (c, g) = (cand.clone(), r2.clone());
            let f = SpinorField::from_fn(chart.clone(), r2.clone(), move |x| {
                let d = c.covariant_derivatives(x).expect("torus chart has no boundary");
                g.mul_basis(0, &d[0]) - g.mul_basis(1, &d[1])
            })?;
            ("matched phi", f)
        };
        let measured = match clifford_torus_rigidity_check(&cand, &partner, &samples, 1e-6, 1e-6) {
            Err(Error::PreconditionViolated { residual, .. }) => residual,
            Ok(rep) if !rep.pass => rep.max_nabla_psi.max(rep.max_phi),
            Ok(_) => 0.0,
            Err(e) => return Err(e),
        };
        checks.push(Check::at_least(
            format!("candidate {k} modes ({}, {}) {kind} rejected", modes[0], modes[1]),
            measured,
            1e-2,
        ));
    }
    Ok((checks, vec![DEFAULT_STEP]))
}

pub(super) fn rescaling(cfg: &SuiteConfig) -> SuiteOutput {
    let m = dims(cfg, &[3], 2)?[0];
    let n = cfg.samples.unwrap_or(10);
    let mut rng = rng(cfg);
    let imm = HypersurfaceImmersion::umbilic_hyperbolic(m, -4.0 / (m as f64 + 2.0))?;
    let (psi, phi) = pair_of_fields(&mut rng, &imm)?;
    let field = build_phi(&psi, &phi, &imm)?;
    let samples = random_points(&mut rng, imm.intrinsic_chart(), n);
    let base: Vec<_> = samples
        .par_iter()
        .map(|x| twisted_dirac_coordinate(&field, imm.ambient(), x))
        .collect::<Result<_>>()?;
    let adapted = samples
        .iter()
        .zip(&base)
        .map(|(x, coords)| {
            Ok(twisted_distance(&coordinate_to_adapted(&imm, x, coords)?, &twisted_dirac_direct(&field, x)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut checks = vec![Check::at_most("coordinate vs adapted route at scale 1", max_of(adapted), 1e-5)];
    let c = imm.spaceform().c;
    for lambda in [0.5, 2.0, 10.0] {
        let scaled = imm.ambient().rescaled(lambda)?;
        checks.push(Check::at_most(
            format!("λ={lambda}: ambient curvature c/λ²"),
            (scaled.spaceform().c - c / (lambda * lambda)).abs(),
            1e-15,
        ));
        let diffs = samples
            .par_iter()
            .zip(base.par_iter())
            .map(|(x, b)| Ok(twisted_distance(&twisted_dirac_coordinate(&field, &scaled, x)?, b)))
            .collect::<Result<Vec<_>>>()?;
        checks.push(Check::at_most(format!("λ={lambda}: D^f Phi unchanged"), max_of(diffs), 1e-8));
    }
    Ok((checks, vec![DEFAULT_STEP]))
}

pub(super) fn convergence(cfg: &SuiteConfig) -> SuiteOutput {
    let steps = convergence_steps(cfg)?;
    let m = dims(cfg, &[3], 2)?[0];
    let n = cfg.samples.unwrap_or(5);
    let mut rng = rng(cfg);
    let r = rep(m)?;
    let charts = vec![
        Chart::euclidean(m)?,
        Chart::hyperbolic_halfspace(m, -0.8)?,
        Chart::sphere_stereographic(m, 0.5)?,
    ];
    let mut checks = Vec::new();
    for chart in charts {
        let psi = random_exp_field(&mut rng, &chart, &r, 3)?;
        let points = random_points(&mut rng, &chart, n);
        let exact = points.iter().map(|x| psi.dirac(x)).collect::<Result<Vec<_>>>()?;
        let errors = steps
            .iter()
            .map(|&h| {
                let f = fd(&psi, h);
                let e = points
                    .iter()
                    .zip(&exact)
                    .map(|(x, d)| Ok(norm(&(f.dirac(x)? - d))))
                    .collect::<Result<Vec<_>>>()?;
                Ok(max_of(e))
            })
            .collect::<Result<Vec<_>>>()?;
        checks.push(Check::at_least(
            format!("Dirac order {}", chart_label(&chart)),
            fitted_order(&steps, &errors),
            MIN_ORDER,
        ));
    }
    let imm = HypersurfaceImmersion::umbilic_hyperbolic(m, -4.0 / (m as f64 + 2.0))?;
    let (psi, phi) = pair_of_fields(&mut rng, &imm)?;
    let x = random_points(&mut rng, imm.intrinsic_chart(), 1).remove(0);
    let exact = twisted_dirac_formula_hyp(&psi, &phi, &imm, &x)?;
    let errors = steps
        .iter()
        .map(|&h| Ok(twisted_distance(&twisted_dirac_direct(&build_phi(&fd(&psi, h), &fd(&phi, h), &imm)?, &x)?, &exact)))
        .collect::<Result<Vec<_>>>()?;
    checks.push(Check::at_least(format!("twisted Dirac order {}", label(&imm)), fitted_order(&steps, &errors), MIN_ORDER));
    Ok((checks, steps))
}
