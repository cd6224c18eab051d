//! The twisted Dirac operator and the curvature term `V_Φ` for fields of
//! the form `Φ = Σ e_j·ψ ⊗ f_*e_j + φ ⊗ ν`, each evaluated both from its
//! definition and from closed-form expansions.
//!
//! Twisted fields are stored in the adapted frame `(f_*e_1, …, f_*e_m, ν)`,
//! so ambient vectors returned here are adapted-frame components unless a
//! function says otherwise.

mod conditions;
mod constructions;

use nalgebra::DVector;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::clifford::{inner_unchecked, norm, GammaRep, Spinor};
use crate::error::{Error, Result};
use crate::fd::FdScheme;
use crate::geometry::{spaceform_curvature, AmbientModel, AmbientSpaceform};
use crate::immersions::HypersurfaceImmersion;
use crate::spinor_fields::{connection_term, SpinorField};

pub use conditions::{
    closed_case_conditions, clifford_torus_rigidity_check, theorem1_conditions, theorem1_conditions_over, Branch,
    ConditionReport, NamedResidual, RigidityReport, UMBILIC_TOLERANCE,
};
pub use constructions::{construct_theorem2_pair, corollary_surface_pair, parallel_spinor_pair, Theorem2Pair};

/// A section of `ΣM ⊗ f*TN` as `m + 1` spinor fields in the adapted frame.
#[derive(Debug, Clone)]
pub struct TwistedField {
    imm: HypersurfaceImmersion,
    components: Vec<SpinorField>,
}

impl TwistedField {
    pub fn new(imm: HypersurfaceImmersion, components: Vec<SpinorField>) -> Result<Self> {
        let m = imm.m();
        if components.len() != m + 1 {
            return Err(Error::DimensionMismatch { expected: m + 1, found: components.len() });
        }
        for c in &components {
            if c.chart() != imm.intrinsic_chart() || c.rep().m() != m {
                return Err(Error::RepMismatch);
            }
        }
        Ok(Self { imm, components })
    }

    pub fn immersion(&self) -> &HypersurfaceImmersion {
        &self.imm
    }

    pub fn components(&self) -> &[SpinorField] {
        &self.components
    }

    pub fn rep(&self) -> &GammaRep {
        self.components[0].rep()
    }

    pub fn values(&self, x: &[f64]) -> Result<Vec<Spinor>> {
        self.components.iter().map(|c| c.value(x)).collect()
    }

    /// `|Φ|²` at `x`.
    pub fn norm_squared(&self, x: &[f64]) -> Result<f64> {
        Ok(self.values(x)?.iter().map(|s| norm(s).powi(2)).sum())
    }

    /// Largest `|Φ|` over the samples.
    pub fn max_norm(&self, samples: &[Vec<f64>]) -> Result<f64> {
        samples
            .iter()
            .map(|x| self.norm_squared(x).map(f64::sqrt))
            .try_fold(0.0_f64, |acc, v| v.map(|v| acc.max(v)))
    }
}

/// `Φ = Σ_j e_j·ψ ⊗ f_*e_j + φ ⊗ ν`.
pub fn build_phi(psi: &SpinorField, phi: &SpinorField, imm: &HypersurfaceImmersion) -> Result<TwistedField> {
    check_pair(psi, phi, imm)?;
    let mut components: Vec<_> = (0..imm.m()).map(|j| psi.clifford_mul_basis(j)).collect();
    components.push(phi.clone());
    TwistedField::new(imm.clone(), components)
}

fn check_pair(psi: &SpinorField, phi: &SpinorField, imm: &HypersurfaceImmersion) -> Result<()> {
    if psi.chart() != imm.intrinsic_chart() || !psi.same_bundle(phi) || psi.rep().m() != imm.m() {
        return Err(Error::RepMismatch);
    }
    Ok(())
}

/// `(Σ_a |v_a|²)^{1/2}` for a list of spinors.
pub fn twisted_norm(v: &[Spinor]) -> f64 {
    v.iter().map(|s| norm(s).powi(2)).sum::<f64>().sqrt()
}

/// `twisted_norm(a - b)`.
pub fn twisted_distance(a: &[Spinor], b: &[Spinor]) -> f64 {
    a.iter().zip(b).map(|(x, y)| norm(&(x - y)).powi(2)).sum::<f64>().sqrt()
}

fn cf(x: f64) -> Complex64 {
    Complex64::from(x)
}

/// `D^f Φ` from its definition, with the pullback connection on the adapted
/// frame given by the Gauss and Weingarten relations.
pub fn twisted_dirac_direct(field: &TwistedField, x: &[f64]) -> Result<Vec<Spinor>> {
    let imm = &field.imm;
    let m = imm.m();
    let rep = field.rep();
    let sigma = field.values(x)?;
    let nabla: Vec<Vec<Spinor>> = field
        .components
        .iter()
        .map(|c| c.covariant_derivatives(x))
        .collect::<Result<_>>()?;
    let omega = imm.intrinsic_chart().spin_connection_coeffs(x)?;
    let w = imm.shape_operator(x)?;
    let mut out = Vec::with_capacity(m + 1);
    for l in 0..m {
        let mut acc = rep.zero_spinor();
        for j in 0..m {
            let mut d = nabla[l][j].clone();
            for k in 0..m {
                let o = omega.get(j, k, l);
                if o != 0.0 {
                    d += &sigma[k] * cf(o);
                }
            }
            d -= &sigma[m] * cf(w[(j, l)]);
            acc += rep.gamma(j) * d;
        }
        out.push(acc);
    }
    let mut acc = rep.zero_spinor();
    for j in 0..m {
        let mut d = nabla[m][j].clone();
        for k in 0..m {
            d += &sigma[k] * cf(w[(j, k)]);
        }
        acc += rep.gamma(j) * d;
    }
    out.push(acc);
    Ok(out)
}

/// Extrinsic data at a point obtained by finite differences of the
/// immersion, in adapted-frame components.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtrinsicFd {
    /// `tr_g(∇df)`.
    pub tension: DVector<f64>,
    /// `∇^N_{e_j} ν` for each `j`.
    pub normal_derivatives: Vec<DVector<f64>>,
}

pub fn extrinsic_fd(imm: &HypersurfaceImmersion, x: &[f64], scheme: FdScheme) -> Result<ExtrinsicFd> {
    let tension = imm.to_adapted(x, &imm.second_fundamental_trace_fd(x, scheme)?)?;
    let normal_derivatives = (0..imm.m())
        .map(|j| imm.to_adapted(x, &imm.normal_derivative_fd(x, j, scheme)?))
        .collect::<Result<_>>()?;
    Ok(ExtrinsicFd { tension, normal_derivatives })
}

/// The general expansion
/// `Σ((2-m)/m e_j·Dψ - 2P_{e_j}ψ) ⊗ f_*e_j - ψ ⊗ tr_g(∇df) + Dφ ⊗ ν + Σ e_j·φ ⊗ ∇^N_{e_j}ν`
/// with the extrinsic terms taken from finite differences of the immersion.
pub fn twisted_dirac_formula_general(
    psi: &SpinorField,
    phi: &SpinorField,
    imm: &HypersurfaceImmersion,
    x: &[f64],
) -> Result<Vec<Spinor>> {
    check_pair(psi, phi, imm)?;
    let ext = extrinsic_fd(imm, x, psi.scheme_or_default())?;
    let m = imm.m();
    let rep = psi.rep();
    let psi_v = psi.value(x)?;
    let phi_v = phi.value(x)?;
    let d_psi = psi.dirac(x)?;
    let p_psi = psi.penrose_all(x)?;
    let d_phi = phi.dirac(x)?;
    let c = cf((2.0 - m as f64) / m as f64);
    let gphi: Vec<Spinor> = (0..m).map(|j| rep.mul_basis(j, &phi_v)).collect();
    let shape_term = |a: usize| {
        (0..m).fold(rep.zero_spinor(), |acc, j| acc + &gphi[j] * cf(ext.normal_derivatives[j][a]))
    };
    let mut out: Vec<Spinor> = (0..m)
        .map(|l| rep.mul_basis(l, &d_psi) * c - &p_psi[l] * cf(2.0) - &psi_v * cf(ext.tension[l]) + shape_term(l))
        .collect();
    out.push(d_phi - &psi_v * cf(ext.tension[m]) + shape_term(m));
    Ok(out)
}

/// Hypersurface specialization
/// `Σ((2-m)/m e_j·Dψ - 2P_{e_j}ψ - We_j·φ) ⊗ e_j + (Dφ - mHψ) ⊗ ν`.
pub fn twisted_dirac_formula_hyp(
    psi: &SpinorField,
    phi: &SpinorField,
    imm: &HypersurfaceImmersion,
    x: &[f64],
) -> Result<Vec<Spinor>> {
    check_pair(psi, phi, imm)?;
    let m = imm.m();
    let rep = psi.rep();
    let w = imm.shape_operator(x)?;
    let h = imm.mean_curvature(x)?;
    let psi_v = psi.value(x)?;
    let phi_v = phi.value(x)?;
    let d_psi = psi.dirac(x)?;
    let p_psi = psi.penrose_all(x)?;
    let c = cf((2.0 - m as f64) / m as f64);
    let mut out: Vec<Spinor> = (0..m)
        .map(|l| {
            let wphi = (0..m).fold(rep.zero_spinor(), |acc, k| acc + rep.mul_basis(k, &phi_v) * cf(w[(l, k)]));
            rep.mul_basis(l, &d_psi) * c - &p_psi[l] * cf(2.0) - wphi
        })
        .collect();
    out.push(phi.dirac(x)? - psi_v * cf(m as f64 * h));
    Ok(out)
}

/// `D^f Φ` in ambient coordinate components `Φ = Σ_c Φ^c ⊗ ∂_c`, using the
/// Christoffel symbols of the given ambient chart.
///
/// The section itself is read off `field`; the ambient only enters through
/// its Levi-Civita connection, so passing a rescaled metric tests that
/// `D^f` depends on nothing else.
pub fn twisted_dirac_coordinate(field: &TwistedField, ambient: &AmbientModel, x: &[f64]) -> Result<Vec<Spinor>> {
    let imm = &field.imm;
    let m = imm.m();
    let AmbientModel::Chart(chart) = ambient else {
        return Err(Error::InvalidParameter("coordinate route needs a chart ambient".into()));
    };
    if chart.m() != m + 1 {
        return Err(Error::DimensionMismatch { expected: m + 1, found: chart.m() });
    }
    let rep = field.rep();
    let d = rep.dim_spinor();
    let stacked = |y: &[f64]| -> Result<DVector<Complex64>> {
        let frame = imm.adapted_frame(y)?;
        let sigma = field.values(y)?;
        let mut out = DVector::zeros((m + 1) * d);
        for (a, e) in frame.iter().enumerate() {
            for c in 0..=m {
                if e[c] != 0.0 {
                    let mut block = out.rows_mut(c * d, d);
                    block += &sigma[a] * cf(e[c]);
                }
            }
        }
        Ok(out)
    };
    let unstack = |v: &DVector<Complex64>| -> Vec<Spinor> { (0..=m).map(|c| v.rows(c * d, d).into_owned()).collect() };
    let scheme = field.components[0].scheme_or_default();
    let intrinsic = imm.intrinsic_chart();
    intrinsic.check_point(x, crate::geometry::SAFE_MARGIN.max(10.0 * scheme.h))?;
    let coords = unstack(&stacked(x)?);
    let f = intrinsic.factor_unchecked(x);
    let omega = intrinsic.spin_connection_coeffs(x)?;
    let p = imm.map(x)?;
    let gamma = chart.christoffel(p.as_slice())?;
    let push = imm.pushforward(x)?;
    let mut out = vec![rep.zero_spinor(); m + 1];
    for j in 0..m {
        let partial = unstack(&scheme.partial(x, j, |y| stacked(y))?);
        for c in 0..=m {
            let mut nabla = &partial[c] / cf(f) + connection_term(rep, &omega, j, &coords[c]);
            for a in 0..=m {
                if push[j][a] == 0.0 {
                    continue;
                }
                for b in 0..=m {
                    let g = gamma.get(c, a, b);
                    if g != 0.0 {
                        nabla += &coords[b] * cf(g * push[j][a]);
                    }
                }
            }
            out[c] += rep.gamma(j) * nabla;
        }
    }
    Ok(out)
}

/// Adapted-frame components of coordinate components `Φ^c`, using the
/// immersion's own ambient metric.
pub fn coordinate_to_adapted(imm: &HypersurfaceImmersion, x: &[f64], coords: &[Spinor]) -> Result<Vec<Spinor>> {
    let p = imm.map(x)?;
    let n = imm.ambient().coord_dim();
    let frame = imm.adapted_frame(x)?;
    Ok(frame
        .iter()
        .map(|e| {
            coords.iter().enumerate().fold(Spinor::zeros(coords[0].len()), |acc, (c, s)| {
                let mut dc = DVector::zeros(n);
                dc[c] = 1.0;
                acc + s * cf(imm.ambient().inner(&p, e, &dc))
            })
        })
        .collect())
}

/// `V_Φ` assembled from its definition, with its imaginary residue.
#[derive(Debug, Clone, PartialEq)]
pub struct VPhi {
    /// Adapted-frame components of the real part.
    pub value: DVector<f64>,
    /// Largest imaginary part among the components.
    pub max_imag: f64,
}

fn unit(n: usize, i: usize) -> DVector<f64> {
    let mut v = DVector::zeros(n);
    v[i] = 1.0;
    v
}

/// `h(V_Φ, Y) = Σ_j ⟨e_j·R^N_{Y,f_*e_j}Φ, Φ⟩` tested on the adapted frame,
/// from the pointwise components `σ` of `Φ`.
pub fn v_phi_from_components(rep: &GammaRep, amb: &AmbientSpaceform, sigma: &[Spinor]) -> Result<VPhi> {
    let m = rep.m();
    if sigma.len() != m + 1 || amb.n != m + 1 {
        return Err(Error::DimensionMismatch { expected: m + 1, found: sigma.len().min(amb.n) });
    }
    let basis: Vec<_> = (0..=m).map(|a| unit(m + 1, a)).collect();
    let mut value = DVector::zeros(m + 1);
    let mut max_imag: f64 = 0.0;
    for a in 0..=m {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..m {
            for k in 0..=m {
                let r = spaceform_curvature(amb, &basis[a], &basis[j], &basis[k])?;
                let g = rep.mul_basis(j, &sigma[k]);
                for l in 0..=m {
                    if r[l] != 0.0 {
                        acc += inner_unchecked(&g, &sigma[l]) * r[l];
                    }
                }
            }
        }
        value[a] = acc.re;
        max_imag = max_imag.max(acc.im.abs());
    }
    Ok(VPhi { value, max_imag })
}

/// `h(V_Φ, Y) = 2 Σ_{j,k} h(R^N_{Y,f_*e_j} f_*e_k, ν) Re⟨e_j·e_k·ψ, φ⟩`.
pub fn v_phi_cross_values(rep: &GammaRep, amb: &AmbientSpaceform, psi: &Spinor, phi: &Spinor) -> Result<DVector<f64>> {
    let m = rep.m();
    let basis: Vec<_> = (0..=m).map(|a| unit(m + 1, a)).collect();
    let mut out = DVector::zeros(m + 1);
    for a in 0..=m {
        for j in 0..m {
            for k in 0..m {
                let r = spaceform_curvature(amb, &basis[a], &basis[j], &basis[k])?[m];
                if r != 0.0 {
                    out[a] += 2.0 * r * inner_unchecked(&(rep.product(j, k) * psi), phi).re;
                }
            }
        }
    }
    Ok(out)
}

/// `-2mc Re⟨ψ, φ⟩ ν`.
pub fn v_phi_formula_values(m: usize, amb: &AmbientSpaceform, psi: &Spinor, phi: &Spinor) -> DVector<f64> {
    let mut out = DVector::zeros(m + 1);
    out[m] = -2.0 * m as f64 * amb.c * inner_unchecked(psi, phi).re;
    out
}

pub fn v_phi_direct(field: &TwistedField, x: &[f64]) -> Result<VPhi> {
    v_phi_from_components(field.rep(), &field.imm.spaceform(), &field.values(x)?)
}

pub fn v_phi_cross(psi: &SpinorField, phi: &SpinorField, imm: &HypersurfaceImmersion, x: &[f64]) -> Result<DVector<f64>> {
    check_pair(psi, phi, imm)?;
    v_phi_cross_values(psi.rep(), &imm.spaceform(), &psi.value(x)?, &phi.value(x)?)
}

pub fn v_phi_formula(psi: &SpinorField, phi: &SpinorField, imm: &HypersurfaceImmersion, x: &[f64]) -> Result<DVector<f64>> {
    check_pair(psi, phi, imm)?;
    Ok(v_phi_formula_values(imm.m(), &imm.spaceform(), &psi.value(x)?, &phi.value(x)?))
}

/// Residuals of both Dirac-harmonic equations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Residuals {
    /// `‖D^f Φ‖`.
    pub dirac: f64,
    /// `‖tr_g(∇df) - ½ V_Φ‖`.
    pub harmonic: f64,
}

/// Residuals at each sample, with `D^f` from its definition, `V_Φ` from
/// its definition and the tension field from finite differences.
pub fn residuals_at(
    psi: &SpinorField,
    phi: &SpinorField,
    imm: &HypersurfaceImmersion,
    samples: &[Vec<f64>],
) -> Result<Vec<Residuals>> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    let field = build_phi(psi, phi, imm)?;
    let scheme = psi.scheme_or_default();
    samples
        .par_iter()
        .map(|x| {
            let dirac = twisted_norm(&twisted_dirac_direct(&field, x)?);
            let tension = imm.to_adapted(x, &imm.second_fundamental_trace_fd(x, scheme)?)?;
            let v = v_phi_direct(&field, x)?;
            let harmonic = (tension - v.value * 0.5).norm();
            Ok(Residuals { dirac, harmonic })
        })
        .collect()
}

/// Largest residuals over the samples.
pub fn residual(
    psi: &SpinorField,
    phi: &SpinorField,
    imm: &HypersurfaceImmersion,
    samples: &[Vec<f64>],
) -> Result<Residuals> {
    let all = residuals_at(psi, phi, imm, samples)?;
    Ok(all.iter().fold(Residuals { dirac: 0.0, harmonic: 0.0 }, |acc, r| Residuals {
        dirac: acc.dirac.max(r.dirac),
        harmonic: acc.harmonic.max(r.harmonic),
    }))
}
