//! Exact computer algebra for locally nilpotent derivations on affine varieties.
//!
//! The crate is layered bottom-up:
//!
//! - [`polyalg`]: sparse polynomials over `Q(i)` and their text grammar,
//! - [`idealquot`]: monomial orders, Buchberger, normal forms,
//! - [`fields`]: varieties, derivations, LND certificates, shears, overshears, flows,
//! - [`denslab`]: bounded-degree linear algebra (kernels, flexibility, Lie saturation,
//!   compatible pairs, unit obstructions),
//! - [`tame`]: plane polynomial automorphisms and numeric flow comparisons,
//! - [`catalog`]: pre-verified varieties and vector fields.

pub mod catalog;
pub mod denslab;
pub mod fields;
pub mod idealquot;
pub mod polyalg;
pub mod tame;

pub use polyalg::{parse_poly, Coeff, Monomial, PolyError, Polynomial, Ring};
