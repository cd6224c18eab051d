use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fd::DEFAULT_STEP;

/// Points closer than this to the chart boundary are rejected.
pub const SAFE_MARGIN: f64 = 10.0 * DEFAULT_STEP;

/// Dense rank-3 array indexed `(i, j, k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor3 {
    m: usize,
    data: Vec<f64>,
}

impl Tensor3 {
    pub fn zeros(m: usize) -> Self {
        Self { m, data: vec![0.0; m * m * m] }
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.data[(i * self.m + j) * self.m + k]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, v: f64) {
        self.data[(i * self.m + j) * self.m + k] = v;
    }

    pub fn max_abs_diff(&self, other: &Tensor3) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ChartKind {
    Euclidean,
    /// Upper half-space `{x_m > 0}` with `F = 1 / (sqrt(-κ) x_m)`.
    HyperbolicHalfspace { kappa: f64 },
    /// Stereographic chart with `F = 2 / (1 + κ |x|²)`.
    SphereStereographic { kappa: f64 },
    /// `R^m` modulo the given periods, trivial spin structure.
    FlatTorus { periods: Vec<f64> },
}

/// A conformally flat coordinate chart `g = F(x)² δ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ChartDescriptor", into = "ChartDescriptor")]
pub struct Chart {
    m: usize,
    kind: ChartKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChartTag {
    Euclidean,
    HyperbolicHalfspace,
    SphereStereographic,
    FlatTorus,
}

/// Wire form of a chart: `{kind, m, kappa, periods}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChartDescriptor {
    pub kind: ChartTag,
    pub m: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub periods: Option<Vec<f64>>,
}

impl TryFrom<ChartDescriptor> for Chart {
    type Error = Error;

    fn try_from(d: ChartDescriptor) -> Result<Self> {
        let kappa = || {
            d.kappa
                .ok_or_else(|| Error::Config("chart kind requires `kappa`".into()))
        };
        match d.kind {
            ChartTag::Euclidean => Chart::euclidean(d.m),
            ChartTag::HyperbolicHalfspace => Chart::hyperbolic_halfspace(d.m, kappa()?),
            ChartTag::SphereStereographic => Chart::sphere_stereographic(d.m, kappa()?),
            ChartTag::FlatTorus => {
                let periods = d
                    .periods
                    .ok_or_else(|| Error::Config("flat_torus requires `periods`".into()))?;
                if periods.len() != d.m {
                    return Err(Error::DimensionMismatch { expected: d.m, found: periods.len() });
                }
                Chart::flat_torus(periods)
            }
        }
    }
}

impl From<Chart> for ChartDescriptor {
    fn from(c: Chart) -> Self {
        let (kind, kappa, periods) = match c.kind {
            ChartKind::Euclidean => (ChartTag::Euclidean, None, None),
            ChartKind::HyperbolicHalfspace { kappa } => (ChartTag::HyperbolicHalfspace, Some(kappa), None),
            ChartKind::SphereStereographic { kappa } => (ChartTag::SphereStereographic, Some(kappa), None),
            ChartKind::FlatTorus { periods } => (ChartTag::FlatTorus, None, Some(periods)),
        };
        Self { kind, m: c.m, kappa, periods }
    }
}

fn check_dim(m: usize) -> Result<()> {
    if m < 1 {
        return Err(Error::InvalidDimension(m, 1));
    }
    Ok(())
}

impl Chart {
    pub fn euclidean(m: usize) -> Result<Self> {
        check_dim(m)?;
        Ok(Self { m, kind: ChartKind::Euclidean })
    }

    pub fn hyperbolic_halfspace(m: usize, kappa: f64) -> Result<Self> {
        check_dim(m)?;
        if !(kappa < 0.0 && kappa.is_finite()) {
            return Err(Error::InvalidParameter(format!("hyperbolic chart needs kappa < 0, got {kappa}")));
        }
        Ok(Self { m, kind: ChartKind::HyperbolicHalfspace { kappa } })
    }

    pub fn sphere_stereographic(m: usize, kappa: f64) -> Result<Self> {
        check_dim(m)?;
        if !(kappa > 0.0 && kappa.is_finite()) {
            return Err(Error::InvalidParameter(format!("sphere chart needs kappa > 0, got {kappa}")));
        }
        Ok(Self { m, kind: ChartKind::SphereStereographic { kappa } })
    }

    pub fn flat_torus(periods: Vec<f64>) -> Result<Self> {
        check_dim(periods.len())?;
        if periods.iter().any(|p| !(*p > 0.0 && p.is_finite())) {
            return Err(Error::InvalidParameter("torus periods must be positive".into()));
        }
        Ok(Self { m: periods.len(), kind: ChartKind::FlatTorus { periods } })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn kind(&self) -> &ChartKind {
        &self.kind
    }

    /// Constant sectional curvature of the chart metric.
    pub fn curvature(&self) -> f64 {
        match self.kind {
            ChartKind::Euclidean | ChartKind::FlatTorus { .. } => 0.0,
            ChartKind::HyperbolicHalfspace { kappa } | ChartKind::SphereStereographic { kappa } => kappa,
        }
    }

    pub fn is_flat(&self) -> bool {
        matches!(self.kind, ChartKind::Euclidean | ChartKind::FlatTorus { .. })
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.m
            && x.iter().all(|v| v.is_finite())
            && match self.kind {
                ChartKind::HyperbolicHalfspace { .. } => x[self.m - 1] > 0.0,
                _ => true,
            }
    }

    /// Check that `x` is at least `margin` away from the boundary.
    pub fn check_point(&self, x: &[f64], margin: f64) -> Result<()> {
        if x.len() != self.m {
            return Err(Error::DimensionMismatch { expected: self.m, found: x.len() });
        }
        let ok = x.iter().all(|v| v.is_finite())
            && match self.kind {
                ChartKind::HyperbolicHalfspace { .. } => x[self.m - 1] > margin,
                _ => true,
            };
        if !ok {
            return Err(Error::OutOfDomain { point: x.to_vec() });
        }
        Ok(())
    }

    pub(crate) fn factor_unchecked(&self, x: &[f64]) -> f64 {
        match self.kind {
            ChartKind::Euclidean | ChartKind::FlatTorus { .. } => 1.0,
            ChartKind::HyperbolicHalfspace { kappa } => 1.0 / ((-kappa).sqrt() * x[self.m - 1]),
            ChartKind::SphereStereographic { kappa } => {
                let r2: f64 = x.iter().map(|v| v * v).sum();
                2.0 / (1.0 + kappa * r2)
            }
        }
    }

    /// Gradient of `u = ln F`.
    pub(crate) fn log_gradient_unchecked(&self, x: &[f64]) -> Vec<f64> {
        let m = self.m;
        match self.kind {
            ChartKind::Euclidean | ChartKind::FlatTorus { .. } => vec![0.0; m],
            ChartKind::HyperbolicHalfspace { .. } => {
                let mut g = vec![0.0; m];
                g[m - 1] = -1.0 / x[m - 1];
                g
            }
            ChartKind::SphereStereographic { kappa } => {
                let r2: f64 = x.iter().map(|v| v * v).sum();
                x.iter().map(|v| -2.0 * kappa * v / (1.0 + kappa * r2)).collect()
            }
        }
    }

    /// Flat Laplacian of `u = ln F`.
    fn log_laplacian_unchecked(&self, x: &[f64]) -> f64 {
        let m = self.m as f64;
        match self.kind {
            ChartKind::Euclidean | ChartKind::FlatTorus { .. } => 0.0,
            ChartKind::HyperbolicHalfspace { .. } => 1.0 / x[self.m - 1].powi(2),
            ChartKind::SphereStereographic { kappa } => {
                let r2: f64 = x.iter().map(|v| v * v).sum();
                let q = 1.0 + kappa * r2;
                -2.0 * kappa * (m * q - 2.0 * kappa * r2) / (q * q)
            }
        }
    }

    pub fn conformal_factor(&self, x: &[f64]) -> Result<f64> {
        self.check_point(x, SAFE_MARGIN)?;
        Ok(self.factor_unchecked(x))
    }

    pub fn metric(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        let f = self.conformal_factor(x)?;
        Ok(DMatrix::identity(self.m, self.m) * (f * f))
    }

    /// `Γ^i_{jk} = δ_ij ∂_k u + δ_ik ∂_j u - δ_jk ∂_i u` stored at `(i, j, k)`.
    pub fn christoffel(&self, x: &[f64]) -> Result<Tensor3> {
        self.check_point(x, SAFE_MARGIN)?;
        let du = self.log_gradient_unchecked(x);
        let m = self.m;
        let mut gamma = Tensor3::zeros(m);
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    let mut v = 0.0;
                    if i == j {
                        v += du[k];
                    }
                    if i == k {
                        v += du[j];
                    }
                    if j == k {
                        v -= du[i];
                    }
                    gamma.set(i, j, k, v);
                }
            }
        }
        Ok(gamma)
    }

    /// Orthonormal frame `e_i = F^{-1} ∂_i` in coordinate components.
    pub fn frame(&self, x: &[f64]) -> Result<Vec<DVector<f64>>> {
        let f = self.conformal_factor(x)?;
        Ok((0..self.m)
            .map(|i| {
                let mut v = DVector::zeros(self.m);
                v[i] = 1.0 / f;
                v
            })
            .collect())
    }

    pub(crate) fn spin_connection_unchecked(&self, x: &[f64]) -> Tensor3 {
        let m = self.m;
        let du = self.log_gradient_unchecked(x);
        let finv = 1.0 / self.factor_unchecked(x);
        let mut omega = Tensor3::zeros(m);
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    let mut v = 0.0;
                    if i == k {
                        v += du[j];
                    }
                    if i == j {
                        v -= du[k];
                    }
                    if v != 0.0 {
                        omega.set(i, j, k, finv * v);
                    }
                }
            }
        }
        omega
    }

    /// Connection coefficients `ω_i^{jk} = g(∇_{e_i} e_j, e_k)` at `(i, j, k)`.
    ///
    /// For `g = e^{2u} δ` these reduce to `F^{-1}(δ_ik ∂_j u - δ_ij ∂_k u)`.
    pub fn spin_connection_coeffs(&self, x: &[f64]) -> Result<Tensor3> {
        self.check_point(x, SAFE_MARGIN)?;
        Ok(self.spin_connection_unchecked(x))
    }

    /// Scalar curvature from the conformal formula
    /// `S = -e^{-2u} (2(m-1) Δu + (m-2)(m-1) |∇u|²)`.
    pub fn scalar_curvature(&self, x: &[f64]) -> Result<f64> {
        self.check_point(x, SAFE_MARGIN)?;
        let m = self.m as f64;
        let f = self.factor_unchecked(x);
        let du = self.log_gradient_unchecked(x);
        let grad2: f64 = du.iter().map(|v| v * v).sum();
        let lap = self.log_laplacian_unchecked(x);
        Ok(-(2.0 * (m - 1.0) * lap + (m - 2.0) * (m - 1.0) * grad2) / (f * f))
    }

    /// Same chart with the metric scaled by `λ²`, when the scaled metric is
    /// again one of the supported kinds.
    pub fn rescaled(&self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidParameter(format!("scale must be positive, got {lambda}")));
        }
        match self.kind {
            ChartKind::HyperbolicHalfspace { kappa } => Self::hyperbolic_halfspace(self.m, kappa / (lambda * lambda)),
            _ if lambda == 1.0 => Ok(self.clone()),
            _ => Err(Error::InvalidParameter("only hyperbolic charts rescale within their kind".into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles;

    #[test]
    fn euclidean_connection_vanishes() {
        let c = Chart::euclidean(3).unwrap();
        let x = [0.3, -1.0, 2.0];
        assert_eq!(c.christoffel(&x).unwrap().max_abs_diff(&Tensor3::zeros(3)), 0.0);
        assert_eq!(c.spin_connection_coeffs(&x).unwrap().max_abs_diff(&Tensor3::zeros(3)), 0.0);
        assert_eq!(c.scalar_curvature(&x).unwrap(), 0.0);
        let t = Chart::flat_torus(vec![1.0, 2.0]).unwrap();
        assert_eq!(t.christoffel(&[0.1, 0.2]).unwrap().max_abs_diff(&Tensor3::zeros(2)), 0.0);
    }

    #[test]
    fn euclidean_frame_is_coordinate_basis() {
        let c = Chart::euclidean(2).unwrap();
        let f = c.frame(&[5.0, 1.0]).unwrap();
        assert_eq!(f[0], DVector::from_vec(vec![1.0, 0.0]));
        assert_eq!(f[1], DVector::from_vec(vec![0.0, 1.0]));
    }

    #[test]
    fn hyperbolic_frame_at_height_two() {
        let c = Chart::hyperbolic_halfspace(3, -1.0).unwrap();
        let f = c.frame(&[0.0, 0.5, 2.0]).unwrap();
        for (i, e) in f.iter().enumerate() {
            let mut expected = DVector::zeros(3);
            expected[i] = 2.0;
            assert_eq!(*e, expected);
        }
    }

    #[test]
    fn hyperbolic_scalar_curvature_for_explicit_solution_constants() {
        let c = Chart::hyperbolic_halfspace(3, -4.0 / 5.0).unwrap();
        let s = c.scalar_curvature(&[0.2, -0.1, 0.7]).unwrap();
        assert!((s - (-4.8)).abs() < 1e-12, "{s}");
    }

    #[test]
    fn spin_connection_is_antisymmetric() {
        let c = Chart::sphere_stereographic(4, 0.7).unwrap();
        let w = c.spin_connection_coeffs(&[0.3, -0.2, 0.5, 0.1]).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    assert_eq!(w.get(i, j, k), -w.get(i, k, j));
                }
            }
        }
    }

    #[test]
    fn boundary_points_are_rejected() {
        let c = Chart::hyperbolic_halfspace(2, -1.0).unwrap();
        assert!(matches!(c.christoffel(&[0.0, -1.0]), Err(Error::OutOfDomain { .. })));
        assert!(matches!(c.frame(&[0.0, 5e-4]), Err(Error::OutOfDomain { .. })));
        assert!(c.frame(&[0.0, 2e-3]).is_ok());
        assert!(matches!(c.metric(&[0.0]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        assert!(Chart::hyperbolic_halfspace(3, 0.5).is_err());
        assert!(Chart::sphere_stereographic(3, -0.5).is_err());
        assert!(Chart::flat_torus(vec![1.0, 0.0]).is_err());
        assert!(Chart::euclidean(0).is_err());
    }

    #[test]
    fn descriptor_json_shape() {
        let c: Chart = serde_json::from_str(r#"{"kind":"hyperbolic_halfspace","m":3,"kappa":-0.8}"#).unwrap();
        assert_eq!(c, Chart::hyperbolic_halfspace(3, -0.8).unwrap());
        let t = Chart::flat_torus(vec![2.0, 3.0]).unwrap();
        let s = serde_json::to_string(&t).unwrap();
        assert_eq!(s, r#"{"kind":"flat_torus","m":2,"periods":[2.0,3.0]}"#);
        assert!(serde_json::from_str::<Chart>(r#"{"kind":"sphere_stereographic","m":2}"#).is_err());
    }

    #[test]
    fn metric_compatibility_of_christoffels() {
        // ∂_a g_ij = Γ^l_{ai} g_lj + Γ^l_{aj} g_il
        let c = Chart::sphere_stereographic(3, 1.3).unwrap();
        let x = [0.4, -0.3, 0.2];
        let gam = c.christoffel(&x).unwrap();
        let g = c.metric(&x).unwrap();
        let s = crate::fd::FdScheme::default();
        for a in 0..3 {
            let dg = s.partial(&x, a, |y| c.metric(y)).unwrap();
            for i in 0..3 {
                for j in 0..3 {
                    let mut rhs = 0.0;
                    for l in 0..3 {
                        rhs += gam.get(l, a, i) * g[(l, j)] + gam.get(l, a, j) * g[(i, l)];
                    }
                    assert!((dg[(i, j)] - rhs).abs() < 1e-6);
                }
            }
        }
    }

    #[test]
    fn hyperbolic_christoffels_match_metric_differences() {
        let c = Chart::hyperbolic_halfspace(3, -1.0).unwrap();
        let x = [0.1, 0.2, 0.9];
        let fd = oracles::christoffel_fd(&c, &x, 1e-4).unwrap();
        assert!(c.christoffel(&x).unwrap().max_abs_diff(&fd) < 1e-6);
    }
}
