//! Exact Newton-polytope machinery for parametric inference.
//!
//! The crate computes Newton polytopes of the observation polynomials of
//! discrete graphical models, enumerates the vertices of their Minkowski sum
//! (one vertex per inference function), and bundles the bound calculators,
//! the hyperplane-arrangement construction for the lower bound, and the
//! two-parameter sequence-alignment model.
//!
//! Linear programming and the numeric kernels are generic over [`Scalar`];
//! every geometric decision the crate reports is taken with [`Rational`].

pub mod alignment;
pub mod counting;
mod dp;
pub mod error;
pub mod geometry;
pub mod inference;
pub mod lp;
pub mod minkowski;
pub mod model;
pub mod planar;
pub mod polytope;
pub mod records;
pub mod rng;
pub mod scalar;
pub mod svg;

pub use error::{Error, Result};
pub use geometry::{AffineFrame, Direction, ExponentVector, VertexPolytope};
pub use model::{Factor, FactorModel, ParameterPoint};
pub use polytope::{BoundReport, NewtonPolytope};
pub use scalar::Scalar;

/// Arbitrary-precision rational, the scalar behind every exact decision.
pub type Rational = num_rational::BigRational;

/// Arbitrary-precision integer.
pub type Integer = num_bigint::BigInt;

/// Simplex over exact rationals.
pub type ExactSimplex = lp::Simplex<Rational>;

/// Simplex over `f64`, usable as a prefilter; never authoritative.
pub type FloatSimplex = lp::Simplex<f64>;
