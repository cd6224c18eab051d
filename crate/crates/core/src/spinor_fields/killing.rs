//! Killing spinors as parallel sections of the modified connection
//! `∇_X ψ - λ X · ψ`, integrated along axis-aligned paths.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_complex::Complex64;

use super::{connection_term, SpinorField, SpinorSource};
use crate::clifford::{GammaRep, Spinor};
use crate::error::{Error, Result};
use crate::fd::FdScheme;
use crate::geometry::Chart;

/// Upper bound for the RK4 step, in chart units.
pub const DEFAULT_TRANSPORT_STEP: f64 = 1e-3;

const CACHE_LIMIT: usize = 1 << 15;

/// Transport of `ψ0` from `x0` along the polyline that moves one coordinate
/// at a time in `axis_order`.
///
/// Steps are laid on a fixed grid from the segment start, followed by one
/// partial step, so the result depends continuously on the endpoint and can
/// be differentiated numerically.
pub struct KillingTransport {
    chart: Chart,
    rep: Arc<GammaRep>,
    lambda: Complex64,
    x0: Vec<f64>,
    psi0: Spinor,
    axis_order: Vec<usize>,
    max_step: f64,
    cache: Mutex<HashMap<Vec<u64>, Spinor>>,
}

impl KillingTransport {
    pub fn new(chart: Chart, rep: Arc<GammaRep>, lambda: Complex64, x0: &[f64], psi0: Spinor) -> Result<Self> {
        if rep.m() != chart.m() {
            return Err(Error::DimensionMismatch { expected: chart.m(), found: rep.m() });
        }
        rep.check_spinor(&psi0)?;
        chart.check_point(x0, 0.0)?;
        // the modified connection is flat exactly when λ² = κ/4
        let kappa = chart.curvature();
        let defect = (lambda * lambda - Complex64::from(kappa / 4.0)).norm();
        if defect > 1e-12 * kappa.abs().max(1.0) {
            return Err(Error::InvalidParameter(format!(
                "Killing constant {lambda} incompatible with curvature {kappa}: need λ² = κ/4"
            )));
        }
        Ok(Self {
            axis_order: (0..chart.m()).collect(),
            chart,
            rep,
            lambda,
            x0: x0.to_vec(),
            psi0,
            max_step: DEFAULT_TRANSPORT_STEP,
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn with_axis_order(mut self, order: Vec<usize>) -> Result<Self> {
        let mut sorted = order.clone();
        sorted.sort_unstable();
        if sorted != (0..self.chart.m()).collect::<Vec<_>>() {
            return Err(Error::InvalidParameter(format!("{order:?} is not a permutation of the axes")));
        }
        self.axis_order = order;
        Ok(self)
    }

    pub fn with_max_step(mut self, step: f64) -> Result<Self> {
        if !(step > 0.0 && step <= DEFAULT_TRANSPORT_STEP) {
            return Err(Error::InvalidParameter(format!("transport step must lie in (0, 1e-3], got {step}")));
        }
        self.max_step = step;
        Ok(self)
    }

    pub fn lambda(&self) -> Complex64 {
        self.lambda
    }

    pub fn basepoint(&self) -> &[f64] {
        &self.x0
    }

    pub fn initial_value(&self) -> &Spinor {
        &self.psi0
    }

    /// `dψ/dt = F (λ γ_a - ¼ Σ ω_a^{jk} γ_j γ_k) ψ` along coordinate `a`.
    fn rhs(&self, point: &[f64], axis: usize, psi: &Spinor) -> Spinor {
        let f = self.chart.factor_unchecked(point);
        let omega = self.chart.spin_connection_unchecked(point);
        let killing = self.rep.gamma(axis) * psi * self.lambda;
        (killing - connection_term(&self.rep, &omega, axis, psi)) * Complex64::from(f)
    }

    fn integrate_segment(&self, point: &mut [f64], axis: usize, target: f64, psi: &mut Spinor) -> Result<()> {
        let start = point[axis];
        let length = target - start;
        if length == 0.0 {
            return Ok(());
        }
        let dir = length.signum();
        let full = (length.abs() / self.max_step).floor() as usize;
        let mut stops: Vec<f64> = (1..=full).map(|k| start + dir * k as f64 * self.max_step).collect();
        if stops.last().map_or(true, |&t| (t - target).abs() > 0.0) {
            stops.push(target);
        }
        let mut t = start;
        let mut probe = point.to_vec();
        for &next in &stops {
            let dt = next - t;
            probe[axis] = t;
            let k1 = self.rhs(&probe, axis, psi);
            probe[axis] = t + 0.5 * dt;
            let k2 = self.rhs(&probe, axis, &(&*psi + &k1 * Complex64::from(0.5 * dt)));
            let k3 = self.rhs(&probe, axis, &(&*psi + &k2 * Complex64::from(0.5 * dt)));
            probe[axis] = next;
            let k4 = self.rhs(&probe, axis, &(&*psi + &k3 * Complex64::from(dt)));
            *psi += (k1 + (k2 + k3) * Complex64::from(2.0) + k4) * Complex64::from(dt / 6.0);
            t = next;
        }
        if psi.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::IntegratorFailure);
        }
        point[axis] = target;
        Ok(())
    }

    /// Transported value at `x`, without caching.
    pub fn transport(&self, x: &[f64]) -> Result<Spinor> {
        if x.len() != self.chart.m() {
            return Err(Error::DimensionMismatch { expected: self.chart.m(), found: x.len() });
        }
        let mut point = self.x0.clone();
        let mut psi = self.psi0.clone();
        for &axis in &self.axis_order {
            let mut end = point.clone();
            end[axis] = x[axis];
            if !self.chart.contains(&end) {
                return Err(Error::PathExitsDomain { point: end });
            }
            self.integrate_segment(&mut point, axis, x[axis], &mut psi)?;
        }
        Ok(psi)
    }
}

impl SpinorSource for KillingTransport {
    fn value(&self, x: &[f64]) -> Result<Spinor> {
        let key: Vec<u64> = x.iter().map(|v| v.to_bits()).collect();
        if let Some(v) = self.cache.lock().expect("cache poisoned").get(&key) {
            return Ok(v.clone());
        }
        let v = self.transport(x)?;
        let mut cache = self.cache.lock().expect("cache poisoned");
        if cache.len() >= CACHE_LIMIT {
            cache.clear();
        }
        cache.insert(key, v.clone());
        Ok(v)
    }
}

/// The λ-Killing spinor with value `ψ0` at `x0`, transported in the
/// default axis order `x_1, …, x_m`.
pub fn killing_transport(
    chart: Chart,
    rep: Arc<GammaRep>,
    lambda: Complex64,
    x0: &[f64],
    psi0: Spinor,
) -> Result<SpinorField> {
    let source = KillingTransport::new(chart.clone(), rep.clone(), lambda, x0, psi0)?;
    Ok(SpinorField::new(chart, rep, Arc::new(source))?
        .with_mode(super::DerivativeMode::FiniteDifference(FdScheme::default())))
}
