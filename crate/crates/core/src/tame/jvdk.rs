//! Decomposition of plane polynomial automorphisms into affine and
//! elementary factors by degree reduction.

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::polyalg::{Coeff, Monomial, Polynomial, Ring};

use super::{compose_maps, PolyMap, TameError};

pub const DEFAULT_MAX_STEPS: usize = 64;

#[derive(Clone, Debug, PartialEq)]
#[allow(clippy::large_enum_variant)]
pub enum Factor {
    /// `v ↦ M·v + b`.
    Affine { matrix: [[Coeff; 2]; 2], translation: [Coeff; 2] },
    /// Adds `poly` (a polynomial in the other variable) to coordinate `axis`.
    Elementary { axis: usize, poly: Polynomial },
}

/// Factors in composition order: the map is `factors[0] ∘ factors[1] ∘ …`,
/// so the last factor is applied first.
#[derive(Clone, Debug, PartialEq)]
pub struct FactorList {
    ring: Ring,
    factors: Vec<Factor>,
}

fn affine_identity() -> Factor {
    Factor::Affine {
        matrix: [[Coeff::one(), Coeff::zero()], [Coeff::zero(), Coeff::one()]],
        translation: [Coeff::zero(), Coeff::zero()],
    }
}

fn scaling(axis: usize, c: &Coeff) -> Factor {
    let mut matrix = [[Coeff::one(), Coeff::zero()], [Coeff::zero(), Coeff::one()]];
    matrix[axis][axis] = c.clone();
    Factor::Affine { matrix, translation: [Coeff::zero(), Coeff::zero()] }
}

/// `a ∘ b` for affine factors.
fn compose_affine(a: &Factor, b: &Factor) -> Factor {
    let (Factor::Affine { matrix: ma, translation: ta }, Factor::Affine { matrix: mb, translation: tb }) = (a, b)
    else {
        unreachable!("affine factors only")
    };
    let mut matrix = [[Coeff::zero(), Coeff::zero()], [Coeff::zero(), Coeff::zero()]];
    let mut translation = ta.clone();
    for i in 0..2 {
        for j in 0..2 {
            matrix[i][j] = &(&ma[i][0] * &mb[0][j]) + &(&ma[i][1] * &mb[1][j]);
        }
        translation[i] += &(&(&ma[i][0] * &tb[0]) + &(&ma[i][1] * &tb[1]));
    }
    Factor::Affine { matrix, translation }
}

impl Factor {
    pub fn to_map(&self, ring: &Ring) -> PolyMap {
        let (x, y) = (Polynomial::var(ring, 0), Polynomial::var(ring, 1));
        let images = match self {
            Factor::Affine { matrix: m, translation: t } => (0..2)
                .map(|i| {
                    let c = Polynomial::constant(ring, t[i].clone());
                    &(&x.scale(&m[i][0]) + &y.scale(&m[i][1])) + &c
                })
                .collect(),
            Factor::Elementary { axis: 0, poly } => vec![&x + poly, y],
            Factor::Elementary { poly, .. } => vec![x, &y + poly],
        };
        PolyMap::new(ring, images).expect("two components")
    }

    pub fn is_identity(&self) -> bool {
        *self == affine_identity()
    }

    pub fn degree(&self) -> u64 {
        match self {
            Factor::Affine { .. } => 1,
            Factor::Elementary { poly, .. } => poly.degree().unwrap_or(0).max(1),
        }
    }

    fn to_json(&self, ring: &Ring) -> Value {
        let s = |c: &Coeff| c.to_string();
        match self {
            Factor::Affine { matrix, translation } => json!({
                "kind": "affine",
                "matrix": matrix.iter().map(|r| r.iter().map(s).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "translation": translation.iter().map(s).collect::<Vec<_>>(),
            }),
            Factor::Elementary { axis, poly } => json!({
                "kind": "elementary",
                "axis": ring.var_name(*axis),
                "poly": poly.to_string(),
            }),
        }
    }
}

impl FactorList {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    /// The composed map; the empty list is the identity.
    pub fn compose(&self) -> PolyMap {
        let maps: Vec<PolyMap> = self.factors.iter().rev().map(|f| f.to_map(&self.ring)).collect();
        if maps.is_empty() {
            return PolyMap::identity(&self.ring);
        }
        compose_maps(&maps).expect("factors share the ring")
    }

    /// Product of the factor degrees.
    pub fn degree_product(&self) -> u64 {
        self.factors.iter().map(Factor::degree).product()
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.factors.iter().map(|f| f.to_json(&self.ring)).collect())
    }
}

fn top(p: &Polynomial) -> Polynomial {
    let d = p.degree().unwrap_or(0);
    Polynomial::from_terms(p.ring(), p.terms().filter(|(m, _)| m.degree() == d).map(|(m, c)| (m.clone(), c.clone())))
}

/// `c` with `a == c·b`, if any.
fn proportion(a: &Polynomial, b: &Polynomial) -> Option<Coeff> {
    let (ma, ca) = a.terms().next_back()?;
    let (mb, cb) = b.terms().next_back()?;
    if ma != mb {
        return None;
    }
    let c = ca * &cb.inv()?;
    (b.scale(&c) == *a).then_some(c)
}

/// Tries `top(hi) = c·top(lo)^k`.
fn reduction(hi: &Polynomial, lo: &Polynomial) -> Option<(Coeff, u32)> {
    let (dh, dl) = (hi.degree()?, lo.degree()?);
    if dl == 0 || dh < dl || dh % dl != 0 {
        return None;
    }
    let k = (dh / dl) as u32;
    proportion(&top(hi), &top(lo).pow(k)).map(|c| (c, k))
}

fn linear_part(p: &Polynomial) -> ([Coeff; 2], Coeff) {
    let n = p.ring().arity();
    ([p.coeff(&Monomial::var(n, 0)), p.coeff(&Monomial::var(n, 1))], p.constant_term())
}

/// Tame decomposition of a map of the plane.
///
/// While the larger component degree exceeds 1, the top-degree part of the
/// higher component must be a constant times a power of the other's; the
/// matching elementary factor is peeled off on the left. The result is
/// normalized so elementary factors are monic, with the scalings absorbed
/// into affine factors, and is recomposed and compared before returning.
pub fn jvdk_decompose(f: &PolyMap, max_steps: usize) -> Result<FactorList, TameError> {
    let ring = f.ring().clone();
    if ring.arity() != 2 {
        return Err(TameError::NotPlanar(ring.arity()));
    }
    let (mut g1, mut g2) = (f.images()[0].clone(), f.images()[1].clone());
    let mut peeled: Vec<Factor> = Vec::new();
    let mut steps = 0;
    loop {
        let (Some(d1), Some(d2)) = (g1.degree(), g2.degree()) else {
            return Err(TameError::Inconclusive(max_steps));
        };
        if d1 <= 1 && d2 <= 1 {
            break;
        }
        if steps == max_steps {
            return Err(TameError::Inconclusive(max_steps));
        }
        steps += 1;
        if let Some((c, k)) = reduction(&g2, &g1) {
            g2 = &g2 - &g1.pow(k).scale(&c);
            peeled.push(Factor::Elementary { axis: 1, poly: Polynomial::var(&ring, 0).pow(k).scale(&c) });
        } else if let Some((c, k)) = reduction(&g1, &g2) {
            g1 = &g1 - &g2.pow(k).scale(&c);
            peeled.push(Factor::Elementary { axis: 0, poly: Polynomial::var(&ring, 1).pow(k).scale(&c) });
        } else {
            return Err(TameError::Inconclusive(max_steps));
        }
    }
    let (r1, t1) = linear_part(&g1);
    let (r2, t2) = linear_part(&g2);
    let det = &(&r1[0] * &r2[1]) - &(&r1[1] * &r2[0]);
    if det.is_zero() {
        return Err(TameError::Inconclusive(max_steps));
    }
    peeled.push(Factor::Affine { matrix: [r1, r2], translation: [t1, t2] });

    let factors = normalize(merge_elementary(peeled));
    let list = FactorList { ring, factors };
    if list.compose() != *f {
        return Err(TameError::Internal("factors do not recompose to the input map".into()));
    }
    Ok(list)
}

fn merge_elementary(factors: Vec<Factor>) -> Vec<Factor> {
    let mut out: Vec<Factor> = Vec::new();
    for f in factors {
        if let (Some(Factor::Elementary { axis: a, poly: p }), Factor::Elementary { axis: b, poly: q }) =
            (out.last_mut(), &f)
        {
            if a == b {
                *p = &*p + q;
                continue;
            }
        }
        out.push(f);
    }
    out
}

/// Makes elementary factors monic, turns degree-1 ones into affine factors,
/// merges adjacent affine factors and drops identities.
fn normalize(factors: Vec<Factor>) -> Vec<Factor> {
    let mut expanded = Vec::new();
    for f in factors {
        match f {
            Factor::Elementary { axis, ref poly } => {
                let ring = poly.ring().clone();
                if poly.is_zero() {
                    continue;
                }
                if poly.degree() <= Some(1) {
                    expanded.push(affine_of(&f.to_map(&ring)));
                    continue;
                }
                let lc = poly.terms().next_back().map(|(_, c)| c.clone()).expect("nonzero");
                if lc.is_one() {
                    expanded.push(f);
                } else {
                    let inv = lc.inv().expect("nonzero");
                    expanded.push(scaling(axis, &lc));
                    expanded.push(Factor::Elementary { axis, poly: poly.scale(&inv) });
                    expanded.push(scaling(axis, &inv));
                }
            }
            affine => expanded.push(affine),
        }
    }
    let mut out: Vec<Factor> = Vec::new();
    for f in expanded {
        if let (Some(last @ Factor::Affine { .. }), Factor::Affine { .. }) = (out.last_mut(), &f) {
            *last = compose_affine(last, &f);
            continue;
        }
        out.push(f);
    }
    out.retain(|f| !f.is_identity());
    out
}

fn affine_of(map: &PolyMap) -> Factor {
    let (r1, t1) = linear_part(&map.images()[0]);
    let (r2, t2) = linear_part(&map.images()[1]);
    Factor::Affine { matrix: [r1, r2], translation: [t1, t2] }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plane() -> Ring {
        Ring::of(&["x", "y"])
    }

    fn map(images: &[&str]) -> PolyMap {
        PolyMap::parse(&plane(), images).unwrap()
    }

    #[test]
    fn henon_map() {
        let h = map(&["y", "x + y^2"]);
        let fl = jvdk_decompose(&h, DEFAULT_MAX_STEPS).unwrap();
        let r = plane();
        assert_eq!(fl.factors().len(), 2);
        assert_eq!(fl.factors()[0], Factor::Elementary { axis: 1, poly: crate::parse_poly("x^2", &r).unwrap() });
        assert_eq!(fl.factors()[1].to_map(&r), map(&["y", "x"]));
        assert_eq!(fl.compose(), h);
        assert_eq!(fl.to_json()[0]["kind"], "elementary");
        assert_eq!(fl.to_json()[0]["axis"], "y");
        assert_eq!(fl.to_json()[1]["matrix"][0][1], "1");
    }

    #[test]
    fn trivial_cases() {
        assert!(jvdk_decompose(&PolyMap::identity(&plane()), 8).unwrap().factors().is_empty());
        let a = map(&["2*x + y + 1", "x - I*y"]);
        let fl = jvdk_decompose(&a, 8).unwrap();
        assert_eq!(fl.factors().len(), 1);
        assert!(matches!(fl.factors()[0], Factor::Affine { .. }));
    }

    #[test]
    fn non_monic_leading_coefficients() {
        let f = map(&["3*x + 2*(y - 5*x^3)^2", "y - 5*x^3"]);
        let fl = jvdk_decompose(&f, DEFAULT_MAX_STEPS).unwrap();
        assert_eq!(fl.compose(), f);
        assert_eq!(fl.degree_product(), 6);
        for factor in fl.factors() {
            if let Factor::Elementary { poly, .. } = factor {
                assert!(poly.terms().next_back().unwrap().1.is_one());
            }
        }
    }

    #[test]
    fn non_automorphisms_are_inconclusive() {
        assert!(matches!(jvdk_decompose(&map(&["x^2", "y"]), 8), Err(TameError::Inconclusive(8))));
        assert!(matches!(jvdk_decompose(&map(&["x + y", "x + y"]), 8), Err(TameError::Inconclusive(8))));
        assert!(matches!(jvdk_decompose(&map(&["x*y", "y + x^2"]), 8), Err(TameError::Inconclusive(8))));
        let r3 = Ring::of(&["x", "y", "z"]);
        assert!(matches!(jvdk_decompose(&PolyMap::identity(&r3), 8), Err(TameError::NotPlanar(3))));
    }
}
