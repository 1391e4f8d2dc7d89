//! Exact polynomials in the four real-analytic variables `z, zb, w, wb`.

mod coeff;
mod curve;
mod eval;
mod monomial;
mod parse;
mod poly;

pub use coeff::GaussRational;
pub use curve::{substitute_curve, Curve, Pullback};
pub use eval::{ExactPoint, FloatPoly};
pub use monomial::{Monomial, Var};
pub use parse::{parse_holo, parse_poly, PolyParseError};
pub use poly::{HoloPoly, Poly, VanishingOrder};
