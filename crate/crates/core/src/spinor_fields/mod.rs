//! Spinor fields over conformally flat charts and their first-order
//! operators.
//!
//! Spinors are component vectors in the trivialization induced by the
//! orthonormal frame `e_i = F^{-1} ∂_i`; the spin connection acts through
//! `∇_{e_i} ψ = e_i(ψ) + ¼ Σ_{j,k} ω_i^{jk} γ_j γ_k ψ`.

mod killing;
mod sources;
mod twistor;

use std::sync::Arc;

use num_complex::Complex64;

use crate::clifford::{norm, GammaRep, Spinor};
use crate::error::{Error, Result};
use crate::fd::FdScheme;
use crate::geometry::{Chart, ChartKind, Tensor3, SAFE_MARGIN};

pub use killing::{killing_transport, KillingTransport, DEFAULT_TRANSPORT_STEP};
pub use sources::{
    CliffordMultiplied, Combination, ConstantSource, DiracOf, ExpTerm, ExponentialSum, FnSource, SpinorSource,
};
pub use twistor::{twistor_from_holomorphic, ComplexFn};

/// How coordinate derivatives of a field are obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DerivativeMode {
    Analytic,
    FiniteDifference(FdScheme),
}

/// A spinor field on a chart.
#[derive(Clone)]
pub struct SpinorField {
    chart: Chart,
    rep: Arc<GammaRep>,
    source: Arc<dyn SpinorSource>,
    mode: DerivativeMode,
}

impl std::fmt::Debug for SpinorField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SpinorField")
            .field("chart", &self.chart)
            .field("m", &self.rep.m())
            .field("mode", &self.mode)
            .finish_non_exhaustive()
    }
}

/// `¼ Σ_{j,k} ω_i^{jk} γ_j γ_k ψ`.
pub(crate) fn connection_term(rep: &GammaRep, omega: &Tensor3, i: usize, psi: &Spinor) -> Spinor {
    let m = rep.m();
    let mut out = rep.zero_spinor();
    for j in 0..m {
        for k in 0..m {
            let w = omega.get(i, j, k);
            if w != 0.0 {
                out += rep.product(j, k) * psi * Complex64::from(0.25 * w);
            }
        }
    }
    out
}

impl SpinorField {
    /// Wrap a source; the derivative mode defaults to analytic when the
    /// source provides closed-form partials.
    pub fn new(chart: Chart, rep: Arc<GammaRep>, source: Arc<dyn SpinorSource>) -> Result<Self> {
        if rep.m() != chart.m() {
            return Err(Error::DimensionMismatch { expected: chart.m(), found: rep.m() });
        }
        let mode = if source.has_partial() {
            DerivativeMode::Analytic
        } else {
            DerivativeMode::FiniteDifference(FdScheme::default())
        };
        Ok(Self { chart, rep, source, mode })
    }

    pub fn constant(chart: Chart, rep: Arc<GammaRep>, psi: Spinor) -> Result<Self> {
        rep.check_spinor(&psi)?;
        Self::new(chart, rep, Arc::new(ConstantSource(psi)))
    }

    pub fn zero(chart: Chart, rep: Arc<GammaRep>) -> Result<Self> {
        let z = rep.zero_spinor();
        Self::constant(chart, rep, z)
    }

    pub fn exponential_sum(chart: Chart, rep: Arc<GammaRep>, terms: Vec<ExpTerm>) -> Result<Self> {
        for t in &terms {
            rep.check_spinor(&t.spinor)?;
            if t.wave.len() != chart.m() {
                return Err(Error::DimensionMismatch { expected: chart.m(), found: t.wave.len() });
            }
        }
        Self::new(chart, rep, Arc::new(ExponentialSum { terms }))
    }

    /// `exp(2πi Σ n_a x_a / L_a) ψ0` on a flat torus with periods `L_a`.
    pub fn fourier_mode(chart: Chart, rep: Arc<GammaRep>, modes: &[i64], psi0: Spinor) -> Result<Self> {
        let ChartKind::FlatTorus { periods } = chart.kind() else {
            return Err(Error::InvalidParameter("Fourier modes need a flat torus chart".into()));
        };
        if modes.len() != periods.len() {
            return Err(Error::DimensionMismatch { expected: periods.len(), found: modes.len() });
        }
        let wave = modes
            .iter()
            .zip(periods)
            .map(|(&n, &l)| Complex64::new(0.0, 2.0 * std::f64::consts::PI * n as f64 / l))
            .collect();
        Self::exponential_sum(chart, rep, vec![ExpTerm { wave, spinor: psi0 }])
    }

    pub fn from_fn<F>(chart: Chart, rep: Arc<GammaRep>, f: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> Spinor + Send + Sync + 'static,
    {
        Self::new(chart, rep, Arc::new(FnSource::new(f)))
    }

    pub fn with_mode(mut self, mode: DerivativeMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn mode(&self) -> DerivativeMode {
        self.mode
    }

    /// The FD scheme in use, or the default one for analytic fields.
    pub fn scheme_or_default(&self) -> FdScheme {
        match self.mode {
            DerivativeMode::FiniteDifference(s) => s,
            DerivativeMode::Analytic => FdScheme::default(),
        }
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn rep(&self) -> &Arc<GammaRep> {
        &self.rep
    }

    pub fn source(&self) -> &Arc<dyn SpinorSource> {
        &self.source
    }

    pub fn same_bundle(&self, other: &SpinorField) -> bool {
        self.chart == other.chart && self.rep.m() == other.rep.m()
    }

    fn margin(&self) -> f64 {
        match self.mode {
            DerivativeMode::FiniteDifference(s) => SAFE_MARGIN.max(10.0 * s.h),
            DerivativeMode::Analytic => SAFE_MARGIN,
        }
    }

    pub fn value(&self, x: &[f64]) -> Result<Spinor> {
        self.chart.check_point(x, 0.0)?;
        self.source.value(x)
    }

    /// `∂ψ/∂x_a`.
    pub fn coord_partial(&self, x: &[f64], axis: usize) -> Result<Spinor> {
        self.chart.check_point(x, self.margin())?;
        match self.mode {
            DerivativeMode::Analytic => self.source.partial(x, axis).ok_or(Error::NoAnalyticDerivative)?,
            DerivativeMode::FiniteDifference(s) => s.partial(x, axis, |y| self.source.value(y)),
        }
    }

    /// `∇_{e_i} ψ`.
    pub fn covariant_derivative(&self, x: &[f64], i: usize) -> Result<Spinor> {
        let d = self.coord_partial(x, i)?;
        let f = self.chart.factor_unchecked(x);
        let omega = self.chart.spin_connection_unchecked(x);
        let psi = self.source.value(x)?;
        Ok(d / Complex64::from(f) + connection_term(&self.rep, &omega, i, &psi))
    }

    pub fn covariant_derivatives(&self, x: &[f64]) -> Result<Vec<Spinor>> {
        self.chart.check_point(x, self.margin())?;
        let f = self.chart.factor_unchecked(x);
        let omega = self.chart.spin_connection_unchecked(x);
        let psi = self.source.value(x)?;
        (0..self.chart.m())
            .map(|i| {
                let d = self.coord_partial(x, i)?;
                Ok(d / Complex64::from(f) + connection_term(&self.rep, &omega, i, &psi))
            })
            .collect()
    }

    /// `D_M ψ = Σ_j e_j · ∇_{e_j} ψ`.
    pub fn dirac(&self, x: &[f64]) -> Result<Spinor> {
        Ok(clifford_trace(&self.rep, &self.covariant_derivatives(x)?))
    }

    /// `P_{e_i} ψ = ∇_{e_i} ψ + (1/m) e_i · D_M ψ` for every `i`.
    pub fn penrose_all(&self, x: &[f64]) -> Result<Vec<Spinor>> {
        let nabla = self.covariant_derivatives(x)?;
        Ok(penrose_from_derivatives(&self.rep, &nabla))
    }

    pub fn penrose(&self, x: &[f64], i: usize) -> Result<Spinor> {
        Ok(self.penrose_all(x)?.swap_remove(i))
    }

    /// `(Σ_i |P_{e_i} ψ|²)^{1/2}`.
    pub fn penrose_norm(&self, x: &[f64]) -> Result<f64> {
        Ok(self.penrose_all(x)?.iter().map(|p| norm(p).powi(2)).sum::<f64>().sqrt())
    }

    /// `(Σ_i |∇_{e_i} ψ|²)^{1/2}`.
    pub fn covariant_norm(&self, x: &[f64]) -> Result<f64> {
        Ok(self
            .covariant_derivatives(x)?
            .iter()
            .map(|p| norm(p).powi(2))
            .sum::<f64>()
            .sqrt())
    }

    pub fn scale(&self, c: Complex64) -> SpinorField {
        Self::linear_combination(&[(c, self)]).expect("a single field is always compatible")
    }

    /// `Σ c_r ψ_r`; the result inherits the first field's derivative mode.
    pub fn linear_combination(terms: &[(Complex64, &SpinorField)]) -> Result<SpinorField> {
        let first = terms.first().ok_or(Error::InvalidParameter("empty combination".into()))?.1;
        if terms.iter().any(|(_, f)| !f.same_bundle(first)) {
            return Err(Error::RepMismatch);
        }
        let source = Combination {
            terms: terms.iter().map(|(c, f)| (*c, f.source.clone())).collect(),
        };
        let mut out = Self::new(first.chart.clone(), first.rep.clone(), Arc::new(source))?;
        out.mode = first.mode;
        Ok(out)
    }

    pub fn add(&self, other: &SpinorField) -> Result<SpinorField> {
        Self::linear_combination(&[(Complex64::from(1.0), self), (Complex64::from(1.0), other)])
    }

    /// The field `x ↦ e_j · ψ(x)` for the frame vector `e_j`.
    pub fn clifford_mul_basis(&self, j: usize) -> SpinorField {
        let source = CliffordMultiplied {
            matrix: self.rep.gamma(j).clone(),
            inner: self.source.clone(),
        };
        let mut out = Self::new(self.chart.clone(), self.rep.clone(), Arc::new(source)).expect("same chart");
        out.mode = self.mode;
        out
    }

    /// `x ↦ D_M ψ(x)` as a field, differentiated with this field's scheme.
    pub fn dirac_field(&self) -> SpinorField {
        let mut out = Self::new(self.chart.clone(), self.rep.clone(), Arc::new(DiracOf(self.clone())))
            .expect("same chart");
        out.mode = DerivativeMode::FiniteDifference(self.scheme_or_default());
        out
    }
}

pub(crate) fn clifford_trace(rep: &GammaRep, v: &[Spinor]) -> Spinor {
    v.iter()
        .enumerate()
        .fold(rep.zero_spinor(), |acc, (j, s)| acc + rep.gamma(j) * s)
}

pub(crate) fn penrose_from_derivatives(rep: &GammaRep, nabla: &[Spinor]) -> Vec<Spinor> {
    let m = rep.m() as f64;
    let d = clifford_trace(rep, nabla);
    nabla
        .iter()
        .enumerate()
        .map(|(i, n)| n + rep.gamma(i) * &d * Complex64::from(1.0 / m))
        .collect()
}

#[cfg(test)]
mod tests;
