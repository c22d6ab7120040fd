//! Monomial orders, Gröbner bases and normal forms in quotient rings.

mod groebner;
mod order;

pub use groebner::{groebner, GroebnerBasis};
pub use order::{MonomialOrder, OrderKey, OrderKind};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IdealError {
    #[error("no generators given")]
    NoGenerators,
    #[error("generators live in different rings")]
    RingMismatch,
    #[error("bad monomial order: {0}")]
    BadOrder(String),
}
