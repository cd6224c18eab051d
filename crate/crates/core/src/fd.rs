//! Central finite differences with optional Richardson extrapolation.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_STEP: f64 = 1e-4;

/// Values that can be combined linearly with real coefficients.
pub trait Linear: Sized {
    fn lincomb(a: f64, x: &Self, b: f64, y: &Self) -> Self;
}

impl Linear for f64 {
    fn lincomb(a: f64, x: &Self, b: f64, y: &Self) -> Self {
        a * x + b * y
    }
}

impl Linear for DVector<f64> {
    fn lincomb(a: f64, x: &Self, b: f64, y: &Self) -> Self {
        x * a + y * b
    }
}

impl Linear for DMatrix<f64> {
    fn lincomb(a: f64, x: &Self, b: f64, y: &Self) -> Self {
        x * a + y * b
    }
}

impl Linear for DVector<Complex64> {
    fn lincomb(a: f64, x: &Self, b: f64, y: &Self) -> Self {
        x * Complex64::from(a) + y * Complex64::from(b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FdScheme {
    pub h: f64,
    #[serde(default)]
    pub richardson: bool,
}

impl Default for FdScheme {
    fn default() -> Self {
        Self { h: DEFAULT_STEP, richardson: false }
    }
}

impl FdScheme {
    pub fn new(h: f64) -> Self {
        Self { h, richardson: false }
    }

    pub fn richardson(h: f64) -> Self {
        Self { h, richardson: true }
    }

    /// Reject steps that vanish relative to the coordinates they perturb.
    pub fn check(&self, x: &[f64]) -> Result<()> {
        let scale = x.iter().fold(1.0_f64, |acc, v| acc.max(v.abs()));
        if !(self.h.is_finite() && self.h > 64.0 * f64::EPSILON * scale) {
            return Err(Error::StepUnderflow(self.h));
        }
        Ok(())
    }

    /// Derivative at `t = 0` of `t ↦ f(t)`.
    pub fn derivative<T, F>(&self, f: F) -> Result<T>
    where
        T: Linear,
        F: Fn(f64) -> Result<T>,
    {
        let central = |h: f64| -> Result<T> {
            let plus = f(h)?;
            let minus = f(-h)?;
            Ok(T::lincomb(0.5 / h, &plus, -0.5 / h, &minus))
        };
        let coarse = central(self.h)?;
        if !self.richardson {
            return Ok(coarse);
        }
        let fine = central(0.5 * self.h)?;
        Ok(T::lincomb(4.0 / 3.0, &fine, -1.0 / 3.0, &coarse))
    }

    /// Partial derivative of `f` along coordinate `axis` at `x`.
    pub fn partial<T, F>(&self, x: &[f64], axis: usize, f: F) -> Result<T>
    where
        T: Linear,
        F: Fn(&[f64]) -> Result<T>,
    {
        self.check(x)?;
        self.directional(x, &unit(x.len(), axis), f)
    }

    /// Directional derivative of `f` at `x` along `dir` (not normalized).
    pub fn directional<T, F>(&self, x: &[f64], dir: &[f64], f: F) -> Result<T>
    where
        T: Linear,
        F: Fn(&[f64]) -> Result<T>,
    {
        self.check(x)?;
        self.derivative(|t| {
            let shifted: Vec<f64> = x.iter().zip(dir).map(|(a, d)| a + t * d).collect();
            f(&shifted)
        })
    }
}

pub(crate) fn unit(n: usize, axis: usize) -> Vec<f64> {
    let mut v = vec![0.0; n];
    v[axis] = 1.0;
    v
}
