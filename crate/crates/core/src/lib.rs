//! Exact verification of the Duflo isomorphism on cohomology.
//!
//! The crate compares two complexes attached to a finite-dimensional Lie algebra
//! `g` over the rationals: polyvector fields on `g*` with the Poisson
//! differential of the Kirillov-Kostant bivector, and Chevalley-Eilenberg
//! cochains with values in `U(g)`. The Duflo map `beta o d(q)` links them, and
//! [`cohomology::verify_theorem`] checks at bounded degree that it is
//! compatible with both differentials and with the cup products.
//!
//! A separate [`kgraphs`] module handles Kontsevich graphs, their closed-form
//! Bernoulli weights, and Monte-Carlo estimates of configuration-space
//! integrals.

pub mod cli;
pub mod cohomology;
pub mod enveloping;
pub mod error;
pub mod lie;
pub mod kgraphs;
pub mod linalg;
pub mod poly;
pub mod polydiff;
pub mod polyvector;
pub mod scalar;

pub use error::{Error, Result};
pub use lie::LieAlgebra;
pub use poly::Polynomial;
pub use polyvector::PolyVector;
pub use scalar::Scalar;
