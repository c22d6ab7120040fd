//! Shared proptest strategies.
#![allow(dead_code)]

use lndlab::{Coeff, Monomial, Polynomial, Ring};
use proptest::prelude::*;

/// Small Gaussian rationals, real most of the time.
pub fn coeff() -> impl Strategy<Value = Coeff> {
    (-6i64..=6, 1i64..=4, prop::bool::weighted(0.25), -3i64..=3).prop_map(|(n, d, cplx, im)| {
        let re = Coeff::from_ratio(n, d);
        if cplx {
            &re + &(&Coeff::i() * &Coeff::from_int(im))
        } else {
            re
        }
    })
}

pub fn real_coeff() -> impl Strategy<Value = Coeff> {
    (-5i64..=5, 1i64..=3).prop_map(|(n, d)| Coeff::from_ratio(n, d))
}

pub fn nonzero_coeff() -> impl Strategy<Value = Coeff> {
    (1i64..=5, 1i64..=3, any::<bool>()).prop_map(|(n, d, neg)| Coeff::from_ratio(if neg { -n } else { n }, d))
}

/// Exponent vectors of total degree at most `deg`.
pub fn monomial(arity: usize, deg: u32) -> impl Strategy<Value = Monomial> {
    prop::collection::vec(0..=deg, arity).prop_map(move |raw| {
        let mut left = deg;
        let exps = raw
            .into_iter()
            .map(|e| {
                let e = e.min(left);
                left -= e;
                e
            })
            .collect();
        Monomial(exps)
    })
}

pub fn poly(ring: Ring, deg: u32, max_terms: usize) -> impl Strategy<Value = Polynomial> {
    let n = ring.arity();
    prop::collection::vec((monomial(n, deg), coeff()), 0..=max_terms)
        .prop_map(move |terms| Polynomial::from_terms(&ring, terms))
}

pub fn real_poly(ring: Ring, deg: u32, max_terms: usize) -> impl Strategy<Value = Polynomial> {
    let n = ring.arity();
    prop::collection::vec((monomial(n, deg), real_coeff()), 0..=max_terms)
        .prop_map(move |terms| Polynomial::from_terms(&ring, terms))
}

/// Linear combination of `basis` with small rational weights.
pub fn combination(basis: Vec<Polynomial>) -> impl Strategy<Value = Polynomial> {
    let n = basis.len();
    prop::collection::vec(real_coeff(), n).prop_map(move |w| {
        let ring = basis[0].ring().clone();
        basis.iter().zip(&w).fold(Polynomial::zero(&ring), |acc, (b, c)| &acc + &b.scale(c))
    })
}
