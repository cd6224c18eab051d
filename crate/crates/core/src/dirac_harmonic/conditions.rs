use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::check_pair;
use crate::clifford::{inner_unchecked, norm, Spinor};
use crate::error::{Error, Result};
use crate::immersions::{HypersurfaceImmersion, ImmersionKind};
use crate::spinor_fields::SpinorField;

/// `‖W - H·Id‖` below which an immersion counts as umbilic.
pub const UMBILIC_TOLERANCE: f64 = 1e-8;

/// Which condition system a report checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// `m = 2`, conditions in a pointwise eigenframe of `W`.
    SurfaceEigenframe,
    /// `m ≥ 3`, totally umbilical immersion.
    Umbilic,
    /// Totally geodesic case: `W = 0`, `∇ψ = 0`, `Dφ = 0`.
    Closed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedResidual {
    pub name: String,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub branch: Branch,
    pub tolerance: f64,
    pub residuals: Vec<NamedResidual>,
    pub pass: bool,
}

impl ConditionReport {
    fn new(branch: Branch, tolerance: f64, residuals: Vec<(&str, f64)>) -> Self {
        let residuals: Vec<_> = residuals
            .into_iter()
            .map(|(name, residual)| NamedResidual { name: name.to_string(), residual })
            .collect();
        let pass = residuals.iter().all(|r| r.residual <= tolerance);
        Self { branch, tolerance, residuals, pass }
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().map(|r| r.residual).fold(0.0, f64::max)
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.residuals.iter().find(|r| r.name == name).map(|r| r.residual)
    }

    /// Componentwise maximum of two reports of the same branch.
    fn merge(mut self, other: &ConditionReport) -> Self {
        for (a, b) in self.residuals.iter_mut().zip(&other.residuals) {
            a.residual = a.residual.max(b.residual);
        }
        self.pass = self.pass && other.pass;
        self
    }
}

fn sum_norm(v: &[Spinor]) -> f64 {
    v.iter().map(|s| norm(s).powi(2)).sum::<f64>().sqrt()
}

/// Orthonormal eigenbasis of a symmetric `W`, eigenvalues descending; the
/// coordinate frame when the eigenvalues coincide.
fn eigenframe(w: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let n = w.nrows();
    let eig = SymmetricEigen::new(w.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    if values.windows(2).all(|p| (p[0] - p[1]).abs() <= 1e-12) {
        return (values, DMatrix::identity(n, n));
    }
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// Residuals of the pointwise conditions characterizing Dirac-harmonic
/// pairs of the ansatz form.
///
/// For `m = 2`: `H = 0`, `Dφ = 0`, `c Re⟨ψ,φ⟩ = 0` and
/// `e_1·∇_{e_1}ψ - e_2·∇_{e_2}ψ = κ_1 φ` in an eigenframe of `W`.
/// For `m ≥ 3` the immersion must be umbilic and the conditions are
/// `H = -c Re⟨ψ,φ⟩`, `Dφ = mHψ`, `Dψ = -mH/(m-2) φ` and `Pψ = 0`.
pub fn theorem1_conditions(
    psi: &SpinorField,
    phi: &SpinorField,
    imm: &HypersurfaceImmersion,
    x: &[f64],
    tolerance: f64,
) -> Result<ConditionReport> {
    check_pair(psi, phi, imm)?;
    let m = imm.m();
    let rep = psi.rep();
    let c = imm.spaceform().c;
    let w = imm.shape_operator(x)?;
    let h = imm.mean_curvature(x)?;
    let psi_v = psi.value(x)?;
    let phi_v = phi.value(x)?;
    let re = inner_unchecked(&psi_v, &phi_v).re;
    let nabla = psi.covariant_derivatives(x)?;
    let d_phi = phi.dirac(x)?;
    if m == 2 {
        let (kappas, frame) = eigenframe(&w);
        let rotated = |col: usize| -> Spinor {
            let v: Vec<f64> = (0..2).map(|a| frame[(a, col)]).collect();
            let d = &nabla[0] * num_complex::Complex64::from(v[0]) + &nabla[1] * num_complex::Complex64::from(v[1]);
            rep.clifford_mul(&v, &d).expect("frame vector has length m")
        };
        let eigen = rotated(0) - rotated(1) - &phi_v * num_complex::Complex64::from(kappas[0]);
        return Ok(ConditionReport::new(
            Branch::SurfaceEigenframe,
            tolerance,
            vec![
                ("H", h.abs()),
                ("D_M phi", norm(&d_phi)),
                ("c Re<psi,phi>", (c * re).abs()),
                ("principal direction", norm(&eigen)),
            ],
        ));
    }
    let defect = (&w - DMatrix::identity(m, m) * h).abs().max();
    if defect > UMBILIC_TOLERANCE {
        return Err(Error::BranchPrecondition(format!(
            "m = {m} needs a totally umbilical immersion, ‖W - H·Id‖ = {defect:e}"
        )));
    }
    let mf = m as f64;
    let d_psi = crate::spinor_fields::clifford_trace(rep, &nabla);
    let penrose = crate::spinor_fields::penrose_from_derivatives(rep, &nabla);
    let cplx = num_complex::Complex64::from;
    Ok(ConditionReport::new(
        Branch::Umbilic,
        tolerance,
        vec![
            ("H + c Re<psi,phi>", (h + c * re).abs()),
            ("D_M phi - mH psi", norm(&(&d_phi - &psi_v * cplx(mf * h)))),
            ("D_M psi + mH/(m-2) phi", norm(&(d_psi + &phi_v * cplx(mf * h / (mf - 2.0))))),
            ("P psi", sum_norm(&penrose)),
        ],
    ))
}

/// Maximum of [`theorem1_conditions`] over the samples.
pub fn theorem1_conditions_over(
    psi: &SpinorField,
    phi: &SpinorField,
    imm: &HypersurfaceImmersion,
    samples: &[Vec<f64>],
    tolerance: f64,
) -> Result<ConditionReport> {
    let (first, rest) = samples.split_first().ok_or(Error::EmptySamples)?;
    let mut report = theorem1_conditions(psi, phi, imm, first, tolerance)?;
    for x in rest {
        report = report.merge(&theorem1_conditions(psi, phi, imm, x, tolerance)?);
    }
    Ok(report)
}

/// The totally geodesic reduction `W = 0`, `Dφ = 0`, `∇ψ = 0`, `c Re⟨ψ,φ⟩ = 0`.
pub fn closed_case_conditions(
    psi: &SpinorField,
    phi: &SpinorField,
    imm: &HypersurfaceImmersion,
    x: &[f64],
    tolerance: f64,
) -> Result<ConditionReport> {
    check_pair(psi, phi, imm)?;
    let re = inner_unchecked(&psi.value(x)?, &phi.value(x)?).re;
    Ok(ConditionReport::new(
        Branch::Closed,
        tolerance,
        vec![
            ("W", imm.shape_operator(x)?.abs().max()),
            ("D_M phi", norm(&phi.dirac(x)?)),
            ("nabla psi", psi.covariant_norm(x)?),
            ("c Re<psi,phi>", (imm.spaceform().c * re).abs()),
        ],
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RigidityReport {
    pub conditions: ConditionReport,
    pub max_nabla_psi: f64,
    pub max_phi: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// On the Clifford torus a pair meeting the surface conditions must have
/// parallel `ψ` and vanishing `φ`. Inputs failing the conditions are
/// rejected with the offending residual.
pub fn clifford_torus_rigidity_check(
    psi: &SpinorField,
    phi: &SpinorField,
    samples: &[Vec<f64>],
    condition_tolerance: f64,
    tolerance: f64,
) -> Result<RigidityReport> {
    let imm = HypersurfaceImmersion::clifford_torus();
    debug_assert_eq!(imm.kind(), ImmersionKind::CliffordTorus);
    let conditions = theorem1_conditions_over(psi, phi, &imm, samples, condition_tolerance)?;
    if !conditions.pass {
        let worst = conditions
            .residuals
            .iter()
            .max_by(|a, b| a.residual.total_cmp(&b.residual))
            .expect("four conditions");
        return Err(Error::PreconditionViolated {
            what: worst.name.clone(),
            residual: worst.residual,
            tolerance: condition_tolerance,
        });
    }
    let mut max_nabla_psi: f64 = 0.0;
    let mut max_phi: f64 = 0.0;
    for x in samples {
        max_nabla_psi = max_nabla_psi.max(psi.covariant_norm(x)?);
        max_phi = max_phi.max(norm(&phi.value(x)?));
    }
    Ok(RigidityReport {
        pass: max_nabla_psi <= tolerance && max_phi <= tolerance,
        conditions,
        max_nabla_psi,
        max_phi,
        tolerance,
    })
}
