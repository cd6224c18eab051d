//! One-shot verification of a user-described pair `(ψ, φ)` over a
//! hypersurface.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::clifford::{GammaRep, Spinor};
use crate::dirac_harmonic::{
    construct_theorem2_pair, parallel_spinor_pair, residual, theorem1_conditions_over, ConditionReport, Residuals,
};
use crate::error::{Error, Result};
use crate::immersions::HypersurfaceImmersion;
use crate::spinor_fields::{twistor_from_holomorphic, ExpTerm, SpinorField};

/// A term `exp(Σ_a wave_a x_a) spinor`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpTermSpec {
    pub wave: Vec<Complex64>,
    pub spinor: Vec<Complex64>,
}

/// How to build `(ψ, φ)`. Complex numbers are `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum FieldSpec {
    /// The explicit umbilic solution; `phi_scale` multiplies `φ`.
    Theorem2Pair {
        seed: Vec<Complex64>,
        #[serde(default = "one")]
        phi_scale: f64,
    },
    /// Constant `ψ = seed`, `φ = 0`.
    Parallel { seed: Vec<Complex64> },
    Constant { psi: Vec<Complex64>, phi: Vec<Complex64> },
    Exponential { psi: Vec<ExpTermSpec>, phi: Vec<ExpTermSpec> },
    /// `ψ = (a(z̄), b(z))`, `φ = 0` on the plane, with polynomial
    /// coefficients in increasing degree.
    Holomorphic { hol: Vec<Complex64>, antihol: Vec<Complex64> },
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default = "default_tol")]
    pub dirac: f64,
    #[serde(default = "default_tol")]
    pub harmonic: f64,
    #[serde(default = "default_tol")]
    pub conditions: f64,
}

fn default_tol() -> f64 {
    1e-5
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { dirac: 1e-5, harmonic: 1e-5, conditions: 1e-5 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyInput {
    pub immersion: HypersurfaceImmersion,
    pub field_spec: FieldSpec,
    pub sample_points: Vec<Vec<f64>>,
    #[serde(default)]
    pub tolerances: Tolerances,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyOutput {
    pub residuals: Residuals,
    /// Absent when the immersion falls outside both condition branches.
    pub condition_report: Option<ConditionReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub condition_error: Option<String>,
    pub pass: bool,
}

fn spinor(rep: &GammaRep, v: &[Complex64]) -> Result<Spinor> {
    let s = Spinor::from_column_slice(v);
    rep.check_spinor(&s)?;
    Ok(s)
}

fn exp_field(imm: &HypersurfaceImmersion, rep: &Arc<GammaRep>, terms: &[ExpTermSpec]) -> Result<SpinorField> {
    let chart = imm.intrinsic_chart().clone();
    if terms.is_empty() {
        return SpinorField::zero(chart, rep.clone());
    }
    let terms = terms
        .iter()
        .map(|t| Ok(ExpTerm { wave: t.wave.clone(), spinor: spinor(rep, &t.spinor)? }))
        .collect::<Result<_>>()?;
    SpinorField::exponential_sum(chart, rep.clone(), terms)
}

fn horner(coeffs: Vec<Complex64>) -> impl Fn(Complex64) -> Complex64 + Send + Sync {
    move |z| coeffs.iter().rev().fold(Complex64::from(0.0), |acc, c| acc * z + c)
}

fn build_fields(imm: &HypersurfaceImmersion, spec: &FieldSpec) -> Result<(SpinorField, SpinorField)> {
    let rep = Arc::new(GammaRep::new(imm.m())?);
    let chart = imm.intrinsic_chart().clone();
    match spec {
        FieldSpec::Theorem2Pair { seed, phi_scale } => {
            let pair = construct_theorem2_pair(imm.m(), spinor(&rep, seed)?)?;
            if &pair.imm != imm {
                return Err(Error::Config(format!(
                    "theorem2_pair lives on umbilic_hyperbolic(m={}, kappa={})",
                    imm.m(),
                    pair.kappa
                )));
            }
            Ok((pair.psi, pair.phi.scale(Complex64::from(*phi_scale))))
        }
        FieldSpec::Parallel { seed } => parallel_spinor_pair(imm, spinor(&rep, seed)?),
        FieldSpec::Constant { psi, phi } => Ok((
            SpinorField::constant(chart.clone(), rep.clone(), spinor(&rep, psi)?)?,
            SpinorField::constant(chart, rep.clone(), spinor(&rep, phi)?)?,
        )),
        FieldSpec::Exponential { psi, phi } => Ok((exp_field(imm, &rep, psi)?, exp_field(imm, &rep, phi)?)),
        FieldSpec::Holomorphic { hol, antihol } => {
            if chart != crate::geometry::Chart::euclidean(2)? {
                return Err(Error::Config("holomorphic fields need flat_hyperplane with m = 2".into()));
            }
            let a = horner(antihol.clone());
            let psi = twistor_from_holomorphic(Arc::new(horner(hol.clone())), Arc::new(move |z: Complex64| a(z.conj())))?;
            let phi = SpinorField::zero(chart, rep)?;
            Ok((psi, phi))
        }
    }
}

pub fn verify(input: &VerifyInput) -> Result<VerifyOutput> {
    let (psi, phi) = build_fields(&input.immersion, &input.field_spec)?;
    let tol = input.tolerances;
    let residuals = residual(&psi, &phi, &input.immersion, &input.sample_points)?;
    let (condition_report, condition_error) =
        match theorem1_conditions_over(&psi, &phi, &input.immersion, &input.sample_points, tol.conditions) {
            Ok(r) => (Some(r), None),
            Err(e @ Error::BranchPrecondition(_)) => (None, Some(e.to_string())),
            Err(e) => return Err(e),
        };
    let pass = residuals.dirac <= tol.dirac
        && residuals.harmonic <= tol.harmonic
        && condition_report.as_ref().map_or(true, |r| r.pass);
    Ok(VerifyOutput { residuals, condition_report, condition_error, pass })
}

pub fn verify_json(input: &serde_json::Value) -> Result<VerifyOutput> {
    let input: VerifyInput = serde_json::from_value(input.clone()).map_err(|e| Error::Config(e.to_string()))?;
    verify(&input)
}
