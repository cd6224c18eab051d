//! Hypersurface immersions into spaceforms with their adapted frames.
//!
//! All vectors returned here are ambient coordinate vectors: chart
//! components for chart ambients, `R⁴` components for the embedded `S³`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fd::FdScheme;
use crate::geometry::{AmbientModel, AmbientSpaceform, Chart, SAFE_MARGIN};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ImmersionKind {
    /// Tilted plane through the boundary of the half-space model of
    /// `H^{m+1}(-1)`, intrinsically `H^m(κ)`.
    UmbilicHyperbolic { kappa: f64 },
    /// `R^m × {0} ⊂ R^{m+1}`.
    FlatHyperplane,
    /// `S¹(1/√2) × S¹(1/√2) ⊂ S³`.
    CliffordTorus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ImmersionTag {
    UmbilicHyperbolic,
    FlatHyperplane,
    CliffordTorus,
}

/// JSON form `{kind, m, kappa}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImmersionDescriptor {
    pub kind: ImmersionTag,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
}

/// An isometric immersion `f: M^m → N^{m+1}` into a spaceform.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ImmersionDescriptor", into = "ImmersionDescriptor")]
pub struct HypersurfaceImmersion {
    m: usize,
    kind: ImmersionKind,
    intrinsic: Chart,
    ambient: AmbientModel,
}

impl TryFrom<ImmersionDescriptor> for HypersurfaceImmersion {
    type Error = Error;

    fn try_from(d: ImmersionDescriptor) -> Result<Self> {
        let need_m = || d.m.ok_or_else(|| Error::Config("immersion needs `m`".into()));
        match d.kind {
            ImmersionTag::UmbilicHyperbolic => {
                let kappa = d.kappa.ok_or_else(|| Error::Config("umbilic_hyperbolic needs `kappa`".into()))?;
                Self::umbilic_hyperbolic(need_m()?, kappa)
            }
            ImmersionTag::FlatHyperplane => Self::flat_hyperplane(need_m()?),
            ImmersionTag::CliffordTorus => match d.m {
                None | Some(2) => Ok(Self::clifford_torus()),
                Some(m) => Err(Error::InvalidDimension(m, 2)),
            },
        }
    }
}

impl From<HypersurfaceImmersion> for ImmersionDescriptor {
    fn from(imm: HypersurfaceImmersion) -> Self {
        let (kind, kappa) = match imm.kind {
            ImmersionKind::UmbilicHyperbolic { kappa } => (ImmersionTag::UmbilicHyperbolic, Some(kappa)),
            ImmersionKind::FlatHyperplane => (ImmersionTag::FlatHyperplane, None),
            ImmersionKind::CliffordTorus => (ImmersionTag::CliffordTorus, None),
        };
        ImmersionDescriptor { kind, m: Some(imm.m), kappa }
    }
}

fn unit(n: usize, i: usize) -> DVector<f64> {
    let mut v = DVector::zeros(n);
    v[i] = 1.0;
    v
}

/// Period of the Clifford torus in arc-length coordinates.
pub const CLIFFORD_TORUS_PERIOD: f64 = std::f64::consts::PI * std::f64::consts::SQRT_2;

impl HypersurfaceImmersion {
    pub fn umbilic_hyperbolic(m: usize, kappa: f64) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidDimension(m, 2));
        }
        if !(-1.0..0.0).contains(&kappa) {
            return Err(Error::InvalidParameter(format!("kappa must lie in [-1, 0), got {kappa}")));
        }
        Ok(Self {
            m,
            kind: ImmersionKind::UmbilicHyperbolic { kappa },
            intrinsic: Chart::hyperbolic_halfspace(m, kappa)?,
            ambient: AmbientModel::Chart(Chart::hyperbolic_halfspace(m + 1, -1.0)?),
        })
    }

    pub fn flat_hyperplane(m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidDimension(m, 2));
        }
        Ok(Self {
            m,
            kind: ImmersionKind::FlatHyperplane,
            intrinsic: Chart::euclidean(m)?,
            ambient: AmbientModel::Chart(Chart::euclidean(m + 1)?),
        })
    }

    pub fn clifford_torus() -> Self {
        Self {
            m: 2,
            kind: ImmersionKind::CliffordTorus,
            intrinsic: Chart::flat_torus(vec![CLIFFORD_TORUS_PERIOD; 2]).expect("valid periods"),
            ambient: AmbientModel::EmbeddedSphere { n: 3, radius: 1.0 },
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn kind(&self) -> ImmersionKind {
        self.kind
    }

    pub fn intrinsic_chart(&self) -> &Chart {
        &self.intrinsic
    }

    pub fn ambient(&self) -> &AmbientModel {
        &self.ambient
    }

    pub fn spaceform(&self) -> AmbientSpaceform {
        self.ambient.spaceform()
    }

    fn check(&self, x: &[f64]) -> Result<()> {
        self.intrinsic.check_point(x, SAFE_MARGIN)
    }

    /// `(sin α, cos α)` of the tilt, with `sin α = √(-κ)`.
    fn tilt(kappa: f64) -> (f64, f64) {
        ((-kappa).sqrt(), (1.0 + kappa).sqrt())
    }

    fn map_unchecked(&self, x: &[f64]) -> DVector<f64> {
        let m = self.m;
        match self.kind {
            ImmersionKind::UmbilicHyperbolic { kappa } => {
                let (s, c) = Self::tilt(kappa);
                let mut y = DVector::zeros(m + 1);
                y.rows_mut(0, m - 1).copy_from_slice(&x[..m - 1]);
                y[m - 1] = x[m - 1] * c;
                y[m] = x[m - 1] * s;
                y
            }
            ImmersionKind::FlatHyperplane => {
                let mut y = DVector::zeros(m + 1);
                y.rows_mut(0, m).copy_from_slice(x);
                y
            }
            ImmersionKind::CliffordTorus => {
                let (a, b) = (std::f64::consts::SQRT_2 * x[0], std::f64::consts::SQRT_2 * x[1]);
                DVector::from_vec(vec![a.cos(), a.sin(), b.cos(), b.sin()]) / std::f64::consts::SQRT_2
            }
        }
    }

    fn pushforward_unchecked(&self, x: &[f64]) -> Vec<DVector<f64>> {
        let m = self.m;
        match self.kind {
            ImmersionKind::UmbilicHyperbolic { kappa } => {
                let (s, c) = Self::tilt(kappa);
                let scale = x[m - 1] * s;
                let mut out: Vec<_> = (0..m - 1).map(|j| unit(m + 1, j) * scale).collect();
                let mut last = DVector::zeros(m + 1);
                last[m - 1] = c * scale;
                last[m] = s * scale;
                out.push(last);
                out
            }
            ImmersionKind::FlatHyperplane => (0..m).map(|j| unit(m + 1, j)).collect(),
            ImmersionKind::CliffordTorus => {
                let (a, b) = (std::f64::consts::SQRT_2 * x[0], std::f64::consts::SQRT_2 * x[1]);
                vec![
                    DVector::from_vec(vec![-a.sin(), a.cos(), 0.0, 0.0]),
                    DVector::from_vec(vec![0.0, 0.0, -b.sin(), b.cos()]),
                ]
            }
        }
    }

    fn normal_unchecked(&self, x: &[f64]) -> DVector<f64> {
        let m = self.m;
        match self.kind {
            ImmersionKind::UmbilicHyperbolic { kappa } => {
                let (s, c) = Self::tilt(kappa);
                let height = x[m - 1] * s;
                let mut v = DVector::zeros(m + 1);
                v[m - 1] = -s * height;
                v[m] = c * height;
                v
            }
            ImmersionKind::FlatHyperplane => unit(m + 1, m),
            ImmersionKind::CliffordTorus => {
                let (a, b) = (std::f64::consts::SQRT_2 * x[0], std::f64::consts::SQRT_2 * x[1]);
                DVector::from_vec(vec![-a.cos(), -a.sin(), b.cos(), b.sin()]) / std::f64::consts::SQRT_2
            }
        }
    }

    pub fn map(&self, x: &[f64]) -> Result<DVector<f64>> {
        self.check(x)?;
        Ok(self.map_unchecked(x))
    }

    /// `f_* e_j` for the intrinsic orthonormal frame.
    pub fn pushforward(&self, x: &[f64]) -> Result<Vec<DVector<f64>>> {
        self.check(x)?;
        Ok(self.pushforward_unchecked(x))
    }

    pub fn normal(&self, x: &[f64]) -> Result<DVector<f64>> {
        self.check(x)?;
        Ok(self.normal_unchecked(x))
    }

    /// `(f_*e_1, …, f_*e_m, ν)`.
    pub fn adapted_frame(&self, x: &[f64]) -> Result<Vec<DVector<f64>>> {
        let mut frame = self.pushforward(x)?;
        frame.push(self.normal_unchecked(x));
        Ok(frame)
    }

    /// Components of an ambient vector at `f(x)` in the adapted frame.
    pub fn to_adapted(&self, x: &[f64], v: &DVector<f64>) -> Result<DVector<f64>> {
        let p = self.map(x)?;
        let frame = self.adapted_frame(x)?;
        Ok(DVector::from_iterator(
            self.m + 1,
            frame.iter().map(|e| self.ambient.inner(&p, e, v)),
        ))
    }

    pub fn from_adapted(&self, x: &[f64], a: &DVector<f64>) -> Result<DVector<f64>> {
        let frame = self.adapted_frame(x)?;
        Ok(frame
            .iter()
            .zip(a.iter())
            .fold(DVector::zeros(self.ambient.coord_dim()), |acc, (e, c)| acc + e * *c))
    }

    /// `W` in the intrinsic frame.
    pub fn shape_operator(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        self.check(x)?;
        let m = self.m;
        Ok(match self.kind {
            ImmersionKind::UmbilicHyperbolic { kappa } => DMatrix::identity(m, m) * Self::tilt(kappa).1,
            ImmersionKind::FlatHyperplane => DMatrix::zeros(m, m),
            ImmersionKind::CliffordTorus => DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, -1.0])),
        })
    }

    pub fn mean_curvature(&self, x: &[f64]) -> Result<f64> {
        Ok(self.shape_operator(x)?.trace() / self.m as f64)
    }

    /// Eigenvalues of `W`, descending.
    pub fn principal_curvatures(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mut ev: Vec<f64> = SymmetricEigen::new(self.shape_operator(x)?).eigenvalues.iter().copied().collect();
        ev.sort_by(|a, b| b.total_cmp(a));
        Ok(ev)
    }

    /// `tr_g(∇df) = mH ν`.
    pub fn second_fundamental_trace(&self, x: &[f64]) -> Result<DVector<f64>> {
        Ok(self.normal(x)? * (self.m as f64 * self.mean_curvature(x)?))
    }

    /// Ambient covariant derivative along `e_i` of a vector field along `f`,
    /// the field's coordinate derivative taken by finite differences.
    fn along_frame<F>(&self, x: &[f64], i: usize, scheme: FdScheme, field: F) -> Result<DVector<f64>>
    where
        F: Fn(&[f64]) -> DVector<f64>,
    {
        self.check(x)?;
        let f = self.intrinsic.factor_unchecked(x);
        let dv: DVector<f64> = scheme.partial(x, i, |y| Ok(field(y)))? / f;
        let p = self.map_unchecked(x);
        let velocity = &self.pushforward_unchecked(x)[i];
        Ok(self.ambient.covariant_derivative(&p, velocity, &field(x), &dv))
    }

    /// `∇^N_{e_i} ν` by finite differences of the normal.
    pub fn normal_derivative_fd(&self, x: &[f64], i: usize, scheme: FdScheme) -> Result<DVector<f64>> {
        self.along_frame(x, i, scheme, |y| self.normal_unchecked(y))
    }

    /// `W_{ij} = -h(∇^N_{e_i} ν, f_*e_j)` by finite differences.
    pub fn shape_operator_fd(&self, x: &[f64], scheme: FdScheme) -> Result<DMatrix<f64>> {
        let m = self.m;
        let p = self.map(x)?;
        let push = self.pushforward_unchecked(x);
        let mut w = DMatrix::zeros(m, m);
        for i in 0..m {
            let dn = self.normal_derivative_fd(x, i, scheme)?;
            for j in 0..m {
                w[(i, j)] = -self.ambient.inner(&p, &dn, &push[j]);
            }
        }
        Ok(w)
    }

    /// `Σ_j ∇^N_{e_j}(f_*e_j) - f_*(∇^M_{e_j} e_j)` by finite differences.
    pub fn second_fundamental_trace_fd(&self, x: &[f64], scheme: FdScheme) -> Result<DVector<f64>> {
        let m = self.m;
        let omega = self.intrinsic.spin_connection_coeffs(x)?;
        let push = self.pushforward_unchecked(x);
        let mut out = DVector::zeros(self.ambient.coord_dim());
        for j in 0..m {
            out += self.along_frame(x, j, scheme, |y| self.pushforward_unchecked(y).swap_remove(j))?;
            for k in 0..m {
                out -= &push[k] * omega.get(j, j, k);
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests;
