//! Bounded-degree linear algebra on coordinate rings: kernels of derivation
//! powers, tangent spaces and flexibility, Lie-saturation certificates,
//! compatible pairs and the unit obstruction.
//!
//! Every verdict here is "at the given bounds": a positive answer is an exact
//! certificate, a negative one only means nothing was found within the bounds.

pub mod linalg;
mod kernel;
mod pair;
mod saturate;

pub use kernel::{flexible_at, kernel_basis, tangent_basis, FlexReport};
pub use pair::{check_compatible_pair, lnd_annihilates_units, verify_unit_witness, PairReport};
pub use saturate::{lie_saturate, overshear_generators, tangent_field_dim, LieWord, SaturationReport, Witness};

use std::collections::BTreeMap;

use thiserror::Error;

use crate::fields::FieldError;
use crate::polyalg::{Coeff, Monomial, Polynomial};

#[derive(Debug, Error, Clone)]
pub enum DensError {
    #[error("point does not lie on the variety")]
    PointNotOnVariety,
    #[error("derivation #{index} is not certified locally nilpotent")]
    UncertifiedDerivation { index: usize },
    #[error("objects live on different varieties")]
    VarietyMismatch,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("f = {0} has no inverse partner: f*g is not 1 in the coordinate ring")]
    NotAUnit(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Dense matrix of a linear map given column by column. Column `j` lists the
/// images of unknown `j` in several equation blocks; rows are indexed by
/// `(block, monomial)` pairs that occur anywhere.
pub(crate) fn column_system(cols: &[Vec<Polynomial>]) -> Vec<Vec<Coeff>> {
    let mut index: BTreeMap<(usize, &Monomial), usize> = BTreeMap::new();
    for col in cols {
        for (b, p) in col.iter().enumerate() {
            for (m, _) in p.terms() {
                let next = index.len();
                index.entry((b, m)).or_insert(next);
            }
        }
    }
    let mut rows = vec![vec![Coeff::from_int(0); cols.len()]; index.len()];
    for (j, col) in cols.iter().enumerate() {
        for (b, p) in col.iter().enumerate() {
            for (m, c) in p.terms() {
                rows[index[&(b, m)]][j] = c.clone();
            }
        }
    }
    rows
}
