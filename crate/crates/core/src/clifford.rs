//! Complex Clifford representation of `Cl(R^m)` with negative-definite squares.
//!
//! Generators satisfy `γ_j γ_k + γ_k γ_j = -2 δ_jk` and are skew-Hermitian, so
//! Clifford multiplication by a unit vector is an isometry squaring to `-1`.
//! The construction doubles a set of Hermitian generators with Pauli matrices
//! and multiplies the result by `i`; every entry lies in `{0, ±1, ±i}`, which
//! makes the defining relations exact in floating point.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Spinor = DVector<Complex64>;
pub type CMatrix = DMatrix<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

fn pauli() -> [CMatrix; 3] {
    [
        CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]),
        CMatrix::from_row_slice(2, 2, &[ZERO, -I, I, ZERO]),
        CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]),
    ]
}

/// Hermitian generators squaring to `+1`.
fn hermitian_generators(m: usize) -> Vec<CMatrix> {
    let [s1, s2, s3] = pauli();
    let mut gens: Vec<CMatrix> = Vec::new();
    let mut dim = 1;
    for _ in 0..m / 2 {
        let id = CMatrix::identity(dim, dim);
        let mut next = vec![id.kronecker(&s1), id.kronecker(&s2)];
        next.extend(gens.iter().map(|a| a.kronecker(&s3)));
        gens = next;
        dim *= 2;
    }
    if m % 2 == 1 {
        // chirality element i^k A_1 ... A_2k
        let k = m / 2;
        let mut omega = CMatrix::identity(dim, dim);
        for a in &gens {
            omega *= a;
        }
        omega *= I.powu(k as u32);
        gens.push(omega);
    }
    gens
}

/// Gamma matrices for `Cl(R^m)` acting on `C^{2^⌊m/2⌋}`.
#[derive(Debug, Clone)]
pub struct GammaRep {
    m: usize,
    gammas: Vec<CMatrix>,
    // products[j * m + k] = γ_j γ_k
    products: Vec<CMatrix>,
}

impl GammaRep {
    pub fn new(m: usize) -> Result<Self> {
        if m < 1 {
            return Err(Error::InvalidDimension(m, 1));
        }
        let gammas: Vec<CMatrix> = hermitian_generators(m)
            .into_iter()
            .map(|a| a * I)
            .collect();
        let mut products = Vec::with_capacity(m * m);
        for j in 0..m {
            for k in 0..m {
                products.push(&gammas[j] * &gammas[k]);
            }
        }
        Ok(Self { m, gammas, products })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn dim_spinor(&self) -> usize {
        1 << (self.m / 2)
    }

    pub fn gamma(&self, j: usize) -> &CMatrix {
        &self.gammas[j]
    }

    pub fn gammas(&self) -> &[CMatrix] {
        &self.gammas
    }

    /// `γ_j γ_k`, precomputed.
    pub fn product(&self, j: usize, k: usize) -> &CMatrix {
        &self.products[j * self.m + k]
    }

    pub fn check_spinor(&self, psi: &Spinor) -> Result<()> {
        if psi.len() != self.dim_spinor() {
            return Err(Error::DimensionMismatch {
                expected: self.dim_spinor(),
                found: psi.len(),
            });
        }
        Ok(())
    }

    pub fn zero_spinor(&self) -> Spinor {
        Spinor::zeros(self.dim_spinor())
    }

    pub fn basis_spinor(&self, k: usize) -> Spinor {
        let mut s = self.zero_spinor();
        s[k] = ONE;
        s
    }

    /// The matrix `Σ_j v_j γ_j`.
    pub fn clifford_matrix(&self, v: &[f64]) -> Result<CMatrix> {
        if v.len() != self.m {
            return Err(Error::DimensionMismatch {
                expected: self.m,
                found: v.len(),
            });
        }
        let d = self.dim_spinor();
        let mut out = CMatrix::zeros(d, d);
        for (g, &c) in self.gammas.iter().zip(v) {
            if c != 0.0 {
                out += g * Complex64::from(c);
            }
        }
        Ok(out)
    }

    /// Clifford multiplication `v · ψ`.
    pub fn clifford_mul(&self, v: &[f64], psi: &Spinor) -> Result<Spinor> {
        self.check_spinor(psi)?;
        Ok(self.clifford_matrix(v)? * psi)
    }

    /// `e_j · ψ` for a frame vector.
    pub fn mul_basis(&self, j: usize, psi: &Spinor) -> Spinor {
        &self.gammas[j] * psi
    }

    /// Largest entry of `γ_j γ_k + γ_k γ_j + 2 δ_jk` over all pairs.
    pub fn anticommutator_defect(&self) -> f64 {
        let d = self.dim_spinor();
        let mut worst = 0.0_f64;
        for j in 0..self.m {
            for k in 0..self.m {
                let mut s = self.product(j, k) + self.product(k, j);
                if j == k {
                    s += CMatrix::identity(d, d) * Complex64::from(2.0);
                }
                worst = worst.max(max_abs(&s));
            }
        }
        worst
    }

    /// Largest entry of `γ_j† + γ_j`.
    pub fn skew_hermitian_defect(&self) -> f64 {
        self.gammas
            .iter()
            .map(|g| max_abs(&(g.adjoint() + g)))
            .fold(0.0, f64::max)
    }
}

/// Build the gamma representation for dimension `m`.
pub fn build_gamma(m: usize) -> Result<GammaRep> {
    GammaRep::new(m)
}

/// Hermitian product, complex-linear in the first slot and conjugate-linear
/// in the second: `⟨ψ, φ⟩ = Σ ψ_k conj(φ_k)`.
pub fn inner(psi: &Spinor, phi: &Spinor) -> Result<Complex64> {
    if psi.len() != phi.len() {
        return Err(Error::DimensionMismatch {
            expected: psi.len(),
            found: phi.len(),
        });
    }
    Ok(inner_unchecked(psi, phi))
}

pub(crate) fn inner_unchecked(psi: &Spinor, phi: &Spinor) -> Complex64 {
    psi.iter().zip(phi.iter()).map(|(a, b)| a * b.conj()).sum()
}

pub(crate) fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn norm(psi: &Spinor) -> f64 {
    psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}
