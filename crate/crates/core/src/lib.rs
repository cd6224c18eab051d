//! Numerical spin geometry for Dirac-harmonic maps built from the
//! hypersurface ansatz `Φ = Σ e_j·ψ ⊗ f_*e_j + φ ⊗ ν`.
//!
//! The crate is organized bottom-up:
//!
//! - [`clifford`]: gamma matrices and the Hermitian spinor product;
//! - [`geometry`]: conformally flat charts and spaceform curvature;
//! - [`spinor_fields`]: covariant derivative, Dirac and Penrose operators,
//!   Killing and twistor spinor constructors;
//! - [`immersions`]: catalog of hypersurfaces in spaceforms;
//! - [`dirac_harmonic`]: the twisted Dirac operator, `V_Φ`, condition systems
//!   and explicit solutions;
//! - [`report`]: named verification suites and their reports.

pub mod clifford;
pub mod dirac_harmonic;
pub mod error;
pub mod fd;
pub mod geometry;
pub mod immersions;
pub mod oracles;
pub mod report;
pub mod sampling;
pub mod spinor_fields;
pub mod verify;

pub use error::{Error, Result};
