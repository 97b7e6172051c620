//! Exact construction and machine verification of multiple q-Kravchuk and
//! multiple Kravchuk orthogonal polynomials.
//!
//! Everything is computed over an exact scalar field: the deformation
//! parameter is stored as v = q^(1/2) so half-integer q-powers stay rational,
//! weights and inner sums are exact, the orthogonality systems are solved by
//! fraction-free elimination, and the verified identities (orthogonality,
//! Rodrigues forms, raising/lowering operators, difference equations, zero
//! locations, q→1 limits) are tested for residuals that are exactly zero.
//!
//! The core math is generic over [`scalar::Scalar`] (a num-traits bundle);
//! the exact rational [`Rat`] is the concrete scalar used by the CLI and the
//! acceptance suite, and `f64` satisfies the same bound for rough numeric
//! experiments.

pub mod analysis;
pub mod error;
pub mod linalg;
pub mod operators;
pub mod poly;
pub mod qlattice;
pub mod rodrigues;
pub mod scalar;
pub mod solver;
pub mod verify;
pub mod weights;

pub use error::{Error, Result};
pub use scalar::Rat;

/// Exact rational polynomial in the lattice variable.
pub type RatPoly = poly::Poly<Rat>;
/// Exact rational grid function.
pub type RatGrid = poly::GridFunction<Rat>;
/// Deformation context over the exact rationals.
pub type RatContext = qlattice::QContext<Rat>;
/// q-family measure parameters over the exact rationals.
pub type RatKravchukParams = weights::KravchukParams<Rat>;
/// Classical-family measure parameters over the exact rationals.
pub type RatClassicalParams = weights::ClassicalParams<Rat>;
