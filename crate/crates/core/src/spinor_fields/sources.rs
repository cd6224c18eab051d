use std::sync::Arc;

use num_complex::Complex64;

use super::SpinorField;
use crate::clifford::{CMatrix, Spinor};
use crate::error::Result;

/// Pointwise values of a spinor field, optionally with closed-form partials.
pub trait SpinorSource: Send + Sync {
    fn value(&self, x: &[f64]) -> Result<Spinor>;

    /// `∂/∂x_axis`, when known in closed form.
    fn partial(&self, _x: &[f64], _axis: usize) -> Option<Result<Spinor>> {
        None
    }

    fn has_partial(&self) -> bool {
        false
    }
}

pub struct ConstantSource(pub Spinor);

impl SpinorSource for ConstantSource {
    fn value(&self, _x: &[f64]) -> Result<Spinor> {
        Ok(self.0.clone())
    }

    fn partial(&self, _x: &[f64], _axis: usize) -> Option<Result<Spinor>> {
        Some(Ok(Spinor::zeros(self.0.len())))
    }

    fn has_partial(&self) -> bool {
        true
    }
}

/// `exp(Σ_a wave_a x_a) · spinor`.
#[derive(Debug, Clone)]
pub struct ExpTerm {
    pub wave: Vec<Complex64>,
    pub spinor: Spinor,
}

impl ExpTerm {
    fn phase(&self, x: &[f64]) -> Complex64 {
        self.wave
            .iter()
            .zip(x)
            .map(|(k, v)| k * v)
            .sum::<Complex64>()
            .exp()
    }
}

/// Finite sum of exponential modes; analytic everywhere.
#[derive(Debug, Clone)]
pub struct ExponentialSum {
    pub terms: Vec<ExpTerm>,
}

impl SpinorSource for ExponentialSum {
    fn value(&self, x: &[f64]) -> Result<Spinor> {
        let d = self.terms[0].spinor.len();
        Ok(self
            .terms
            .iter()
            .fold(Spinor::zeros(d), |acc, t| acc + &t.spinor * t.phase(x)))
    }

    fn partial(&self, x: &[f64], axis: usize) -> Option<Result<Spinor>> {
        let d = self.terms[0].spinor.len();
        Some(Ok(self
            .terms
            .iter()
            .fold(Spinor::zeros(d), |acc, t| acc + &t.spinor * (t.phase(x) * t.wave[axis]))))
    }

    fn has_partial(&self) -> bool {
        true
    }
}

type ValueFn = dyn Fn(&[f64]) -> Spinor + Send + Sync;

/// An arbitrary closure; differentiated numerically.
pub struct FnSource {
    f: Box<ValueFn>,
}

impl FnSource {
    pub fn new<F>(f: F) -> Self
    where
        F: Fn(&[f64]) -> Spinor + Send + Sync + 'static,
    {
        Self { f: Box::new(f) }
    }
}

impl SpinorSource for FnSource {
    fn value(&self, x: &[f64]) -> Result<Spinor> {
        Ok((self.f)(x))
    }
}

pub struct Combination {
    pub terms: Vec<(Complex64, Arc<dyn SpinorSource>)>,
}

impl SpinorSource for Combination {
    fn value(&self, x: &[f64]) -> Result<Spinor> {
        let mut acc: Option<Spinor> = None;
        for (c, s) in &self.terms {
            let v = s.value(x)? * *c;
            acc = Some(match acc {
                Some(a) => a + v,
                None => v,
            });
        }
        Ok(acc.expect("combination is non-empty"))
    }

    fn partial(&self, x: &[f64], axis: usize) -> Option<Result<Spinor>> {
        let mut acc: Option<Spinor> = None;
        for (c, s) in &self.terms {
            let v = match s.partial(x, axis)? {
                Ok(v) => v * *c,
                Err(e) => return Some(Err(e)),
            };
            acc = Some(match acc {
                Some(a) => a + v,
                None => v,
            });
        }
        acc.map(Ok)
    }

    fn has_partial(&self) -> bool {
        self.terms.iter().all(|(_, s)| s.has_partial())
    }
}

/// `x ↦ A ψ(x)` for a constant matrix `A`.
pub struct CliffordMultiplied {
    pub matrix: CMatrix,
    pub inner: Arc<dyn SpinorSource>,
}

impl SpinorSource for CliffordMultiplied {
    fn value(&self, x: &[f64]) -> Result<Spinor> {
        Ok(&self.matrix * self.inner.value(x)?)
    }

    fn partial(&self, x: &[f64], axis: usize) -> Option<Result<Spinor>> {
        self.inner.partial(x, axis).map(|r| r.map(|v| &self.matrix * v))
    }

    fn has_partial(&self) -> bool {
        self.inner.has_partial()
    }
}

/// The Dirac operator applied to a field, evaluated pointwise.
pub struct DiracOf(pub SpinorField);

impl SpinorSource for DiracOf {
    fn value(&self, x: &[f64]) -> Result<Spinor> {
        self.0.dirac(x)
    }
}
