//! Exact symbolic tools for arcs, jets and wedges on surface singularities.

pub mod cases;
pub mod coeff;
pub mod fm;
pub mod groebner;
pub mod jets;
pub mod multipoly;
pub mod parse;
pub mod valuative;
pub mod wedge;

pub use coeff::{GaussianRational, Rational};
pub use multipoly::{Monomial, MonomialOrder, Polynomial, Var, WeightVector};
