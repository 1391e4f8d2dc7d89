//! Exact subelliptic-multiplier computations for model domains
//! `2 Re(z) + |f|^2 - |g|^2 < 0` in C^2.
//!
//! The crate runs Kohn's multiplier algorithm and the derivative-chain
//! variant over exact polynomial germs, keeping an exact ledger of certified
//! orders of subellipticity, and cross-checks the analytic inequalities by
//! floating-point sampling.

pub mod domain;
pub mod effective;
pub mod error;
pub mod kohn;
pub mod ledger;
pub mod localideal;
pub mod numcheck;
pub mod polyring;
pub mod spec_file;

pub use error::{Error, Result};
pub use polyring::{parse_holo, parse_poly, GaussRational, HoloPoly, Monomial, Poly, Var};
