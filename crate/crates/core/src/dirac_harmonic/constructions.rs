use std::sync::Arc;

use num_complex::Complex64;

use super::{build_phi, residual, TwistedField};
use crate::clifford::{norm, GammaRep, Spinor};
use crate::error::{Error, Result};
use crate::immersions::HypersurfaceImmersion;
use crate::spinor_fields::{killing_transport, SpinorField};

/// Explicit solution on the umbilic hypersurface `H^m(-4/(m+2)) ⊂ H^{m+1}(-1)`.
#[derive(Debug, Clone)]
pub struct Theorem2Pair {
    pub imm: HypersurfaceImmersion,
    pub psi: SpinorField,
    pub phi: SpinorField,
    /// Killing spinor for `λ = i/√(m+2)`.
    pub psi_p: SpinorField,
    /// Killing spinor for `λ = -i/√(m+2)`.
    pub psi_m: SpinorField,
    pub basepoint: Vec<f64>,
    pub kappa: f64,
    pub mean_curvature: f64,
}

/// `ψ = ψ_p + ψ_m`, `φ = i√(m-2)(ψ_p - ψ_m)` with `ψ_p(x0) = seed` and
/// `ψ_m(x0) = i seed / (2√(m+2)|seed|²)`, so that
/// `Im⟨ψ_p, ψ_m⟩ = -1/(2√(m+2))`.
pub fn construct_theorem2_pair(m: usize, seed: Spinor) -> Result<Theorem2Pair> {
    if m < 3 {
        return Err(Error::InvalidDimension(m, 3));
    }
    let rep = Arc::new(GammaRep::new(m)?);
    rep.check_spinor(&seed)?;
    let s2 = norm(&seed).powi(2);
    if s2 == 0.0 {
        return Err(Error::ZeroSeed);
    }
    let mf = m as f64;
    let kappa = -4.0 / (mf + 2.0);
    let imm = HypersurfaceImmersion::umbilic_hyperbolic(m, kappa)?;
    let chart = imm.intrinsic_chart().clone();
    let mut basepoint = vec![0.0; m];
    basepoint[m - 1] = 1.0;
    let root = (mf + 2.0).sqrt();
    let lambda = Complex64::new(0.0, 1.0 / root);
    let seed_m = &seed * Complex64::new(0.0, 1.0 / (2.0 * root * s2));
    let psi_p = killing_transport(chart.clone(), rep.clone(), lambda, &basepoint, seed)?;
    let psi_m = killing_transport(chart, rep, -lambda, &basepoint, seed_m)?;
    let psi = psi_p.add(&psi_m)?;
    let c = Complex64::new(0.0, (mf - 2.0).sqrt());
    let phi = SpinorField::linear_combination(&[(c, &psi_p), (-c, &psi_m)])?;
    Ok(Theorem2Pair {
        mean_curvature: imm.mean_curvature(&basepoint)?,
        imm,
        psi,
        phi,
        psi_p,
        psi_m,
        basepoint,
        kappa,
    })
}

fn origin(imm: &HypersurfaceImmersion) -> Vec<f64> {
    vec![0.0; imm.m()]
}

/// A constant spinor and `φ = 0` on an intrinsically flat minimal
/// hypersurface.
pub fn parallel_spinor_pair(imm: &HypersurfaceImmersion, seed: Spinor) -> Result<(SpinorField, SpinorField)> {
    let chart = imm.intrinsic_chart();
    if !chart.is_flat() {
        return Err(Error::InvalidParameter("parallel spinor pair needs a flat intrinsic chart".into()));
    }
    let h = imm.mean_curvature(&origin(imm))?;
    if h != 0.0 {
        return Err(Error::InvalidParameter(format!("immersion is not minimal, H = {h}")));
    }
    if norm(&seed) == 0.0 {
        return Err(Error::ZeroSeed);
    }
    let rep = Arc::new(GammaRep::new(imm.m())?);
    let psi = SpinorField::constant(chart.clone(), rep.clone(), seed)?;
    let phi = SpinorField::zero(chart.clone(), rep)?;
    Ok((psi, phi))
}

/// `Φ = Σ e_j·ψ ⊗ f_*e_j` for a twistor spinor `ψ` on a minimal surface,
/// after checking the twistor equation, minimality and both equations on
/// the samples.
pub fn corollary_surface_pair(
    psi: &SpinorField,
    imm: &HypersurfaceImmersion,
    samples: &[Vec<f64>],
    tolerance: f64,
) -> Result<TwistedField> {
    if imm.m() != 2 {
        return Err(Error::InvalidDimension(imm.m(), 2));
    }
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    let violated = |what: &str, residual: f64| Error::PreconditionViolated {
        what: what.into(),
        residual,
        tolerance,
    };
    let mut worst_h: f64 = 0.0;
    let mut worst_p: f64 = 0.0;
    for x in samples {
        worst_h = worst_h.max(imm.mean_curvature(x)?.abs());
        worst_p = worst_p.max(psi.penrose_norm(x)?);
    }
    if worst_h > tolerance {
        return Err(violated("minimality", worst_h));
    }
    if worst_p > tolerance {
        return Err(violated("twistor equation", worst_p));
    }
    let phi = SpinorField::zero(psi.chart().clone(), psi.rep().clone())?;
    let r = residual(psi, &phi, imm, samples)?;
    if r.dirac.max(r.harmonic) > tolerance {
        return Err(violated("Dirac-harmonic residual", r.dirac.max(r.harmonic)));
    }
    build_phi(psi, &phi, imm)
}
