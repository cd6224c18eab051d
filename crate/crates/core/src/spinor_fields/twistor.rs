//! Twistor spinors on the flat plane from holomorphic data.
//!
//! With `γ_1 = iσ_1`, `γ_2 = iσ_2` the twistor equation on `R²` reduces to
//! `∂_1 ψ + γ_1 γ_2 ∂_2 ψ = 0` with `γ_1 γ_2 = diag(-i, i)`, i.e.
//!
//! ```text
//! (∂_x - i ∂_y) ψ⁰ = 2 ∂_z ψ⁰ = 0      ψ⁰ anti-holomorphic
//! (∂_x + i ∂_y) ψ¹ = 2 ∂_z̄ ψ¹ = 0      ψ¹ holomorphic
//! ```
//!
//! so the holomorphic function fills the second component and the
//! anti-holomorphic one the first.

use std::sync::Arc;

use num_complex::Complex64;

use super::SpinorField;
use crate::clifford::{GammaRep, Spinor};
use crate::error::Result;
use crate::geometry::Chart;

pub type ComplexFn = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

/// `ψ(x, y) = (antihol(z), hol(z))` with `z = x + iy` on the Euclidean plane.
///
/// `antihol` receives `z` and must itself be anti-holomorphic in it, e.g.
/// `|z| z.conj()`.
pub fn twistor_from_holomorphic(hol: ComplexFn, antihol: ComplexFn) -> Result<SpinorField> {
    let chart = Chart::euclidean(2)?;
    let rep = Arc::new(GammaRep::new(2)?);
    SpinorField::from_fn(chart, rep, move |x| {
        let z = Complex64::new(x[0], x[1]);
        Spinor::from_vec(vec![antihol(z), hol(z)])
    })
}
