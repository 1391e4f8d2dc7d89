//! Ideals of the local ring at the origin: standard bases for a local
//! order, membership, and sound rules producing elements of the real
//! radical.

mod order;
mod radical;
mod standard_basis;

pub use order::LocalOrder;
pub(crate) use radical::content_radical;
pub use radical::{
    hermitian_root, min_algebraic_radical_order, radical_extend, RadicalCertificate, RadicalExtension, RadicalRule,
    Witness,
};
pub use standard_basis::{standard_basis, LocalIdeal, DEFAULT_STEP_CAP, MAX_REDUCTION_TERMS};
