//! Polynomial maps: exact composition, tame decomposition of plane
//! automorphisms, and numeric comparisons of maps and flows.

mod jvdk;
mod numeric;

pub use jvdk::{jvdk_decompose, Factor, FactorList, DEFAULT_MAX_STEPS};
pub use numeric::{bracket_flow_check, compare_on_grid, BracketFdReport, FlowAt, Grid, PointMap};

use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

use crate::fields::{FieldError, PolynomialFlow};
use crate::polyalg::{Coeff, PolyError, Polynomial, Ring};

#[derive(Debug, Error, Clone)]
pub enum TameError {
    #[error("expected {expected} components, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("nothing to compose")]
    Empty,
    #[error("decomposition needs a map of the plane, got {0} variables")]
    NotPlanar(usize),
    #[error("no degree reduction applies within {0} steps")]
    Inconclusive(usize),
    #[error("time step must be nonzero")]
    ZeroStep,
    #[error("internal invariant failed: {0}")]
    Internal(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// `x ↦ (images[0](x), …, images[n-1](x))` on the affine space of `ring`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyMap {
    ring: Ring,
    images: Vec<Polynomial>,
}

impl PolyMap {
    pub fn new(ring: &Ring, images: Vec<Polynomial>) -> Result<PolyMap, TameError> {
        if images.len() != ring.arity() {
            return Err(TameError::ArityMismatch { expected: ring.arity(), got: images.len() });
        }
        let images = images.iter().map(|p| p.embed(ring)).collect::<Result<Vec<_>, _>>()?;
        Ok(PolyMap { ring: ring.clone(), images })
    }

    pub fn parse(ring: &Ring, images: &[&str]) -> Result<PolyMap, TameError> {
        let polys = images.iter().map(|s| crate::parse_poly(s, ring)).collect::<Result<Vec<_>, _>>()?;
        PolyMap::new(ring, polys)
    }

    pub fn identity(ring: &Ring) -> PolyMap {
        PolyMap { ring: ring.clone(), images: (0..ring.arity()).map(|i| Polynomial::var(ring, i)).collect() }
    }

    /// The time-`t` map of a polynomial flow, on the ambient space.
    pub fn from_flow(flow: &PolynomialFlow, t: &Coeff) -> PolyMap {
        PolyMap { ring: flow.variety().ambient().clone(), images: flow.at_time(t) }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn images(&self) -> &[Polynomial] {
        &self.images
    }

    pub fn arity(&self) -> usize {
        self.ring.arity()
    }

    pub fn is_identity(&self) -> bool {
        *self == PolyMap::identity(&self.ring)
    }

    /// Maximum total degree of the components (0 for constant maps).
    pub fn degree(&self) -> u64 {
        self.images.iter().filter_map(Polynomial::degree).max().unwrap_or(0)
    }

    /// `p ∘ self`.
    pub fn pull_back(&self, p: &Polynomial) -> Result<Polynomial, TameError> {
        Ok(p.substitute(&self.images)?)
    }

    pub fn eval(&self, point: &[Complex64]) -> Result<Vec<Complex64>, TameError> {
        if point.len() != self.arity() {
            return Err(TameError::ArityMismatch { expected: self.arity(), got: point.len() });
        }
        Ok(self.images.iter().map(|p| p.evaluate(point)).collect::<Result<Vec<_>, _>>()?)
    }

    pub fn render(&self) -> Vec<String> {
        self.images.iter().map(|p| p.to_string()).collect()
    }
}

impl fmt::Display for PolyMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.render().join(", "))
    }
}

/// Composition applying `maps[0]` first: `[f, g]` gives `g ∘ f`.
pub fn compose_maps(maps: &[PolyMap]) -> Result<PolyMap, TameError> {
    let (first, rest) = maps.split_first().ok_or(TameError::Empty)?;
    let mut acc = first.clone();
    for g in rest {
        if g.ring != acc.ring {
            return Err(TameError::ArityMismatch { expected: acc.arity(), got: g.arity() });
        }
        let images = g.images.iter().map(|p| acc.pull_back(p)).collect::<Result<Vec<_>, _>>()?;
        acc = PolyMap { ring: acc.ring, images };
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{flow_lnd, make_shear, AffineVariety, Derivation, Lnd, DEFAULT_MAX_ITER};

    fn plane() -> Ring {
        Ring::of(&["x", "y"])
    }

    #[test]
    fn composition_order() {
        let r = plane();
        let id = PolyMap::identity(&r);
        assert!(compose_maps(&[id.clone(), id.clone()]).unwrap().is_identity());
        let e = PolyMap::parse(&r, &["x", "y + x^2"]).unwrap();
        let s = PolyMap::parse(&r, &["y", "x"]).unwrap();
        // s applied after e
        assert_eq!(compose_maps(&[e.clone(), s.clone()]).unwrap(), PolyMap::parse(&r, &["y + x^2", "x"]).unwrap());
        assert_eq!(compose_maps(&[s, e]).unwrap(), PolyMap::parse(&r, &["y", "x + y^2"]).unwrap());
        assert!(matches!(compose_maps(&[]), Err(TameError::Empty)));
        let other = PolyMap::identity(&Ring::of(&["x"]));
        assert!(matches!(compose_maps(&[id, other]), Err(TameError::ArityMismatch { .. })));
    }

    #[test]
    fn flow_times_cancel() {
        let x = AffineVariety::affine_space("C2", &plane()).unwrap();
        let dy = Lnd::certify(Derivation::parse(&x, &["0", "1"]).unwrap(), DEFAULT_MAX_ITER).unwrap();
        let shear = make_shear(&dy, &x.parse("x^2").unwrap()).unwrap();
        let flow = flow_lnd(&shear);
        let fwd = PolyMap::from_flow(&flow, &Coeff::from_int(1));
        let back = PolyMap::from_flow(&flow, &Coeff::from_int(-1));
        assert_eq!(fwd, PolyMap::parse(&plane(), &["x", "y + x^2"]).unwrap());
        assert!(compose_maps(&[fwd, back]).unwrap().is_identity());
    }
}
