//! Seeded random inputs shared by tests and suites.

use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;

use crate::clifford::{GammaRep, Spinor};
use crate::error::Result;
use crate::geometry::{Chart, ChartKind};
use crate::spinor_fields::{ExpTerm, SpinorField};

/// Spinor with components uniform in the unit square.
pub fn random_spinor(rng: &mut impl Rng, dim: usize) -> Spinor {
    Spinor::from_iterator(
        dim,
        (0..dim).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))),
    )
}

/// A sum of `terms` complex exponentials times random spinors; smooth with
/// closed-form derivatives.
pub fn random_exp_field(rng: &mut impl Rng, chart: &Chart, rep: &Arc<GammaRep>, terms: usize) -> Result<SpinorField> {
    let m = chart.m();
    let terms = (0..terms)
        .map(|_| ExpTerm {
            wave: (0..m)
                .map(|_| Complex64::new(rng.gen_range(-0.3..0.3), rng.gen_range(-1.5..1.5)))
                .collect(),
            spinor: random_spinor(rng, rep.dim_spinor()),
        })
        .collect();
    SpinorField::exponential_sum(chart.clone(), rep.clone(), terms)
}

/// Uniform point of a chart-appropriate box: the last coordinate of a
/// half-space ranges over `[0.4, 2]`, every other one over `[-1.5, 1.5]`.
pub fn random_point(rng: &mut impl Rng, chart: &Chart) -> Vec<f64> {
    let m = chart.m();
    let mut x: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.5..1.5)).collect();
    if let ChartKind::HyperbolicHalfspace { .. } = chart.kind() {
        x[m - 1] = rng.gen_range(0.4..2.0);
    }
    x
}

pub fn random_points(rng: &mut impl Rng, chart: &Chart, n: usize) -> Vec<Vec<f64>> {
    (0..n).map(|_| random_point(rng, chart)).collect()
}

/// Uniform points in the cube of half-width `r` about `center`.
pub fn points_near(rng: &mut impl Rng, center: &[f64], r: f64, n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| center.iter().map(|c| c + rng.gen_range(-r..r)).collect())
        .collect()
}
