//! Exact arithmetic layer: rationals, polynomials on the sphere, and the
//! radial calculus of functions `P(y) r^(-d)`.

pub mod radial_field;
pub mod rational;
pub mod sphere_poly;

pub use radial_field::{inner_product, RadialField};
pub use rational::Rational;
pub use sphere_poly::SpherePoly;
