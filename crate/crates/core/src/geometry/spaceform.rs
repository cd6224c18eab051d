use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use super::{dot, Chart};
use crate::error::{Error, Result};

/// A space of constant sectional curvature `c` and dimension `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AmbientSpaceform {
    pub n: usize,
    pub c: f64,
}

/// `R_{X,Y} Z = c (h(Y,Z) X - h(X,Z) Y)` with all vectors given in an
/// orthonormal basis, so `h` is the Euclidean dot product.
pub fn spaceform_curvature(
    amb: &AmbientSpaceform,
    x: &DVector<f64>,
    y: &DVector<f64>,
    z: &DVector<f64>,
) -> Result<DVector<f64>> {
    for v in [x, y, z] {
        if v.len() != amb.n {
            return Err(Error::DimensionMismatch { expected: amb.n, found: v.len() });
        }
    }
    Ok((x * y.dot(z) - y * x.dot(z)) * amb.c)
}

/// Concrete model of an ambient spaceform used to evaluate immersions.
#[derive(Debug, Clone, PartialEq)]
pub enum AmbientModel {
    /// A conformally flat chart of dimension `n`.
    Chart(Chart),
    /// The round sphere of the given radius sitting in `R^{n+1}`; vectors are
    /// `R^{n+1}` vectors tangent to the sphere.
    EmbeddedSphere { n: usize, radius: f64 },
}

impl AmbientModel {
    pub fn dimension(&self) -> usize {
        match self {
            AmbientModel::Chart(c) => c.m(),
            AmbientModel::EmbeddedSphere { n, .. } => *n,
        }
    }

    /// Length of coordinate vectors.
    pub fn coord_dim(&self) -> usize {
        match self {
            AmbientModel::Chart(c) => c.m(),
            AmbientModel::EmbeddedSphere { n, .. } => n + 1,
        }
    }

    pub fn spaceform(&self) -> AmbientSpaceform {
        let c = match self {
            AmbientModel::Chart(ch) => ch.curvature(),
            AmbientModel::EmbeddedSphere { radius, .. } => 1.0 / (radius * radius),
        };
        AmbientSpaceform { n: self.dimension(), c }
    }

    pub fn inner(&self, p: &DVector<f64>, a: &DVector<f64>, b: &DVector<f64>) -> f64 {
        match self {
            AmbientModel::Chart(c) => {
                let f = c.factor_unchecked(p.as_slice());
                f * f * a.dot(b)
            }
            AmbientModel::EmbeddedSphere { .. } => a.dot(b),
        }
    }

    /// Covariant derivative of a vector field along a curve through `p` with
    /// the given velocity, from the field value `v` and its coordinate
    /// derivative `dv`.
    pub fn covariant_derivative(
        &self,
        p: &DVector<f64>,
        velocity: &DVector<f64>,
        v: &DVector<f64>,
        dv: &DVector<f64>,
    ) -> DVector<f64> {
        match self {
            AmbientModel::Chart(c) => {
                // Γ^i_{jk} a^j b^k = a^i (∇u·b) + b^i (∇u·a) - (a·b) ∇u^i
                let du = DVector::from_vec(c.log_gradient_unchecked(p.as_slice()));
                let du_v = dot(du.as_slice(), v.as_slice());
                let du_a = dot(du.as_slice(), velocity.as_slice());
                let av = velocity.dot(v);
                dv + velocity * du_v + v * du_a - du * av
            }
            AmbientModel::EmbeddedSphere { radius, .. } => dv - p * (dv.dot(p) / (radius * radius)),
        }
    }

    /// The same space with metric scaled by `λ²`.
    pub fn rescaled(&self, lambda: f64) -> Result<Self> {
        match self {
            AmbientModel::Chart(c) => Ok(AmbientModel::Chart(c.rescaled(lambda)?)),
            AmbientModel::EmbeddedSphere { .. } => Err(Error::InvalidParameter(
                "embedded sphere rescaling changes coordinates; use a chart model".into(),
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(x: &[f64]) -> DVector<f64> {
        DVector::from_column_slice(x)
    }

    #[test]
    fn flat_space_has_no_curvature() {
        let amb = AmbientSpaceform { n: 3, c: 0.0 };
        let r = spaceform_curvature(&amb, &v(&[1.0, 2.0, 3.0]), &v(&[0.0, 1.0, 5.0]), &v(&[-1.0, 0.0, 2.0])).unwrap();
        assert_eq!(r, DVector::zeros(3));
    }

    #[test]
    fn unit_sphere_sectional_identity() {
        let amb = AmbientSpaceform { n: 3, c: 1.0 };
        let (x, y) = (v(&[1.0, 0.0, 0.0]), v(&[0.0, 1.0, 0.0]));
        assert_eq!(spaceform_curvature(&amb, &x, &y, &y).unwrap(), x);
    }

    #[test]
    fn curvature_rejects_wrong_length() {
        let amb = AmbientSpaceform { n: 3, c: 1.0 };
        assert!(spaceform_curvature(&amb, &v(&[1.0, 0.0]), &v(&[0.0, 1.0, 0.0]), &v(&[0.0, 1.0, 0.0])).is_err());
    }

    #[test]
    fn sphere_covariant_derivative_is_tangent() {
        let amb = AmbientModel::EmbeddedSphere { n: 2, radius: 2.0 };
        let p = v(&[0.0, 0.0, 2.0]);
        let out = amb.covariant_derivative(&p, &v(&[1.0, 0.0, 0.0]), &v(&[1.0, 0.0, 0.0]), &v(&[0.3, 0.1, -0.5]));
        assert!(out.dot(&p).abs() < 1e-15);
        assert_eq!(amb.spaceform().c, 0.25);
    }

    proptest! {
        #[test]
        fn first_bianchi_and_antisymmetry(
            c in -2.0..2.0f64,
            a in prop::collection::vec(-1.0..1.0f64, 4),
            b in prop::collection::vec(-1.0..1.0f64, 4),
            d in prop::collection::vec(-1.0..1.0f64, 4),
        ) {
            let amb = AmbientSpaceform { n: 4, c };
            let (x, y, z) = (v(&a), v(&b), v(&d));
            let r = |p: &DVector<f64>, q: &DVector<f64>, s: &DVector<f64>| spaceform_curvature(&amb, p, q, s).unwrap();
            let bianchi = r(&x, &y, &z) + r(&y, &z, &x) + r(&z, &x, &y);
            prop_assert!(bianchi.amax() < 1e-14);
            prop_assert!((r(&x, &y, &z) + r(&y, &x, &z)).amax() < 1e-15);
            // h(R_{X,Y}Z, T) = -h(R_{X,Y}T, Z)
            prop_assert!((r(&x, &y, &z).dot(&x) + r(&x, &y, &x).dot(&z)).abs() < 1e-14);
        }
    }
}
