//! Exact sparse multivariate polynomials over the Gaussian rationals.

mod coeff;
mod parse;
mod poly;
mod ring;

pub use coeff::Coeff;
pub use parse::{parse_coeff, parse_poly};
pub use poly::{Monomial, Polynomial};
pub use ring::{is_identifier, Ring};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolyError {
    #[error("syntax error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unknown variable `{name}`{}", .pos.map(|p| format!(" at byte {p}")).unwrap_or_default())]
    UnknownVariable { name: String, pos: Option<usize> },
    #[error("polynomials live in different rings")]
    RingMismatch,
    #[error("expected {expected} coordinates, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("no image given for variable `{0}`")]
    MissingImage(String),
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("exponent overflow")]
    ExponentOverflow,
}
