//! Sums of weighted simple closed geodesics on a hyperbolic surface,
//! computed through translation cocycles in Minkowski 3-space.
//!
//! Two weighted simple closed geodesics meeting at one point span a
//! one-holed torus. In the linear structure that measured geodesic
//! laminations inherit from their cocycle classes, their sum decomposes
//! against the boundary curve of that torus: a recursion peels off
//! boundary weight step by step, rewriting the pair by basis moves until
//! either the second weight vanishes (the sum is an exact weighted
//! multicurve) or the curve lengths run off to infinity (the sum converges
//! to a lamination with a boundary-curve atom plus two measured tails).
//!
//! The crate is generic over the scalar type; `f64` is the canonical
//! instantiation and the aliases below fix it.

pub mod closed_form;
pub mod cocycle;
pub mod engine;
pub mod isometry;
pub mod minkowski;
pub mod scalar;
pub mod torus;
pub mod word;

pub use scalar::Scalar;

/// `f64` Minkowski vector.
pub type MinkVec64 = minkowski::MinkVec<f64>;
/// `f64` isometry matrix.
pub type Isometry64 = isometry::Isometry<f64>;
/// `f64` configuration.
pub type TorusConfig64 = torus::TorusConfig<f64>;
/// `f64` parameters.
pub type TorusParams64 = torus::TorusParams<f64>;
/// `f64` generator cocycle.
pub type GeneratorCocycle64 = cocycle::GeneratorCocycle<f64>;
/// `f64` weighted curve.
pub type WeightedCurve64 = cocycle::WeightedCurve<f64>;
/// `f64` decomposition.
pub type SumDecomposition64 = engine::SumDecomposition<f64>;
