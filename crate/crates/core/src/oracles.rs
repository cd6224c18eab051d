//! Finite-difference oracles for chart geometry.
//!
//! Everything here is computed from the metric and frame alone by numerical
//! differentiation, never from the closed-form connection of [`Chart`]. The
//! verification suites compare the two routes.

use nalgebra::{DMatrix, DVector};

use crate::error::Result;
use crate::fd::{FdScheme, Linear};
use crate::geometry::{Chart, Tensor3};

impl Linear for Tensor3 {
    fn lincomb(a: f64, x: &Self, b: f64, y: &Self) -> Self {
        let m = x.dim();
        let mut out = Tensor3::zeros(m);
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    out.set(i, j, k, a * x.get(i, j, k) + b * y.get(i, j, k));
                }
            }
        }
        out
    }
}

/// `Γ^i_{jk} = ½ g^{il} (∂_j g_lk + ∂_k g_lj - ∂_l g_jk)` with metric
/// derivatives from central differences.
pub fn christoffel_fd(chart: &Chart, x: &[f64], h: f64) -> Result<Tensor3> {
    let m = chart.m();
    let scheme = FdScheme::new(h);
    let g = chart.metric(x)?;
    let ginv = g.clone().try_inverse().expect("conformal metric is invertible");
    let dg: Vec<DMatrix<f64>> = (0..m)
        .map(|a| scheme.partial(x, a, |y| chart.metric(y)))
        .collect::<Result<_>>()?;
    let mut gamma = Tensor3::zeros(m);
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                let mut s = 0.0;
                for l in 0..m {
                    s += ginv[(i, l)] * (dg[j][(l, k)] + dg[k][(l, j)] - dg[l][(j, k)]);
                }
                gamma.set(i, j, k, 0.5 * s);
            }
        }
    }
    Ok(gamma)
}

/// `ω_i^{jk}` from the Koszul formula for an orthonormal frame,
/// `2 g(∇_{e_i} e_j, e_k) = g([e_i,e_j],e_k) - g([e_j,e_k],e_i) + g([e_k,e_i],e_j)`,
/// with Lie brackets taken by differencing the frame components.
pub fn spin_connection_fd(chart: &Chart, x: &[f64], h: f64) -> Result<Tensor3> {
    let m = chart.m();
    let scheme = FdScheme::new(h);
    let frame = chart.frame(x)?;
    let g = chart.metric(x)?;
    // d_frame[a][i] = ∂_a e_i
    let d_frame: Vec<Vec<DVector<f64>>> = (0..m)
        .map(|a| {
            (0..m)
                .map(|i| scheme.partial(x, a, |y| Ok(chart.frame(y)?[i].clone())))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let bracket = |i: usize, j: usize| -> DVector<f64> {
        let mut out = DVector::zeros(m);
        for a in 0..m {
            out += &d_frame[a][j] * frame[i][a] - &d_frame[a][i] * frame[j][a];
        }
        out
    };
    let gdot = |u: &DVector<f64>, v: &DVector<f64>| (u.transpose() * &g * v)[(0, 0)];
    let mut omega = Tensor3::zeros(m);
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                let v = 0.5
                    * (gdot(&bracket(i, j), &frame[k]) - gdot(&bracket(j, k), &frame[i])
                        + gdot(&bracket(k, i), &frame[j]));
                omega.set(i, j, k, v);
            }
        }
    }
    Ok(omega)
}

/// Riemann tensor `R^l_{kij}` (`R(∂_i,∂_j)∂_k = R^l_{kij} ∂_l`), indexed
/// `[l][k][i][j]`, from differenced [`christoffel_fd`].
pub fn riemann_fd(chart: &Chart, x: &[f64], h: f64) -> Result<Vec<f64>> {
    let m = chart.m();
    let scheme = FdScheme::new(h);
    let gam = christoffel_fd(chart, x, h)?;
    let dgam: Vec<Tensor3> = (0..m)
        .map(|a| scheme.partial(x, a, |y| christoffel_fd(chart, y, h)))
        .collect::<Result<_>>()?;
    let idx = |l: usize, k: usize, i: usize, j: usize| ((l * m + k) * m + i) * m + j;
    let mut r = vec![0.0; m * m * m * m];
    for l in 0..m {
        for k in 0..m {
            for i in 0..m {
                for j in 0..m {
                    let mut v = dgam[i].get(l, j, k) - dgam[j].get(l, i, k);
                    for p in 0..m {
                        v += gam.get(l, i, p) * gam.get(p, j, k) - gam.get(l, j, p) * gam.get(p, i, k);
                    }
                    r[idx(l, k, i, j)] = v;
                }
            }
        }
    }
    Ok(r)
}

/// Sectional curvature of the plane spanned by coordinate vectors `a`, `b`.
pub fn sectional_curvature_fd(chart: &Chart, x: &[f64], a: &[f64], b: &[f64], h: f64) -> Result<f64> {
    let m = chart.m();
    let r = riemann_fd(chart, x, h)?;
    let g = chart.metric(x)?;
    let idx = |l: usize, k: usize, i: usize, j: usize| ((l * m + k) * m + i) * m + j;
    // g(R(a,b)b, a)
    let mut num = 0.0;
    for l in 0..m {
        for k in 0..m {
            for i in 0..m {
                for j in 0..m {
                    num += g[(l, l)] * a[l] * a[i] * b[j] * b[k] * r[idx(l, k, i, j)];
                }
            }
        }
    }
    let ga = |u: &[f64], v: &[f64]| -> f64 { (0..m).map(|i| g[(i, i)] * u[i] * v[i]).sum() };
    Ok(num / (ga(a, a) * ga(b, b) - ga(a, b).powi(2)))
}

/// Scalar curvature `g^{kj} R^i_{kij}` from [`riemann_fd`].
pub fn scalar_curvature_fd(chart: &Chart, x: &[f64], h: f64) -> Result<f64> {
    let m = chart.m();
    let r = riemann_fd(chart, x, h)?;
    let ginv = chart.metric(x)?.try_inverse().expect("invertible");
    let idx = |l: usize, k: usize, i: usize, j: usize| ((l * m + k) * m + i) * m + j;
    let mut s = 0.0;
    for k in 0..m {
        for j in 0..m {
            let ric: f64 = (0..m).map(|i| r[idx(i, k, i, j)]).sum();
            s += ginv[(k, j)] * ric;
        }
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn koszul_oracle_on_hyperbolic_chart() {
        let c = Chart::hyperbolic_halfspace(3, -1.0).unwrap();
        let x = [0.3, -0.4, 1.2];
        let fd = spin_connection_fd(&c, &x, 1e-4).unwrap();
        assert!(c.spin_connection_coeffs(&x).unwrap().max_abs_diff(&fd) < 1e-6);
    }

    #[test]
    fn scalar_curvature_oracle() {
        for c in [
            Chart::hyperbolic_halfspace(3, -0.8).unwrap(),
            Chart::sphere_stereographic(3, 2.0).unwrap(),
            Chart::euclidean(3).unwrap(),
        ] {
            let x = [0.1, 0.2, 0.6];
            let s = scalar_curvature_fd(&c, &x, 1e-3).unwrap();
            assert!((s - c.scalar_curvature(&x).unwrap()).abs() < 1e-4, "{c:?}: {s}");
            assert!((s - 6.0 * c.curvature()).abs() < 1e-4);
        }
    }

    #[test]
    fn sectional_curvature_oracle() {
        let c = Chart::sphere_stereographic(3, 0.5).unwrap();
        let k = sectional_curvature_fd(&c, &[0.2, 0.1, -0.3], &[1.0, 0.5, 0.0], &[0.0, 1.0, 2.0], 1e-3).unwrap();
        assert!((k - 0.5).abs() < 1e-4, "{k}");
    }
}
