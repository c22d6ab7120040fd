use serde_json::{json, Value};

use crate::fields::{AffineVariety, Lnd};
use crate::polyalg::{Coeff, Polynomial};

use super::kernel::kernel_basis;
use super::linalg::{nullspace, SparseVec, SpanBasis};
use super::{column_system, DensError};

#[derive(Clone, Debug)]
pub struct PairReport {
    /// First element of `ker Θ² ∩ ker Ξ` with `Θ(h) ≠ 0`, or failing that the
    /// first basis element of the intersection.
    pub h: Option<Polynomial>,
    pub h_nondegenerate: bool,
    pub ideal_gens: Vec<Polynomial>,
    pub containment_verified_to: u32,
    pub containment: bool,
    pub is_compatible_at_bound: bool,
}

impl PairReport {
    pub fn to_json(&self) -> Value {
        json!({
            "h": self.h.as_ref().map(|p| p.to_string()),
            "h_nondegenerate": self.h_nondegenerate,
            "ideal_gens": self.ideal_gens.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            "containment_verified_to": self.containment_verified_to,
            "containment": self.containment,
            "is_compatible_at_bound": self.is_compatible_at_bound,
        })
    }
}

/// Checks a candidate compatible pair up to `deg_bound`.
///
/// `h` is searched in `ker Θ² ∩ ker Ξ` among normal forms of degree at most
/// `deg_bound`. Containment asks that `m·g` lies in the span of the products
/// `k1·k2` (`k1 ∈ ker Θ`, `k2 ∈ ker Ξ`, both of degree at most `deg_bound`)
/// for every ideal generator `g` and every monomial `m` with
/// `deg m + deg g ≤ deg_bound`.
pub fn check_compatible_pair(
    theta: &Lnd,
    xi: &Lnd,
    ideal_gens: &[Polynomial],
    deg_bound: u32,
) -> Result<PairReport, DensError> {
    let x = theta.variety();
    if !xi.variety().same_as(x) || ideal_gens.iter().any(|g| g.ring() != x.ambient()) {
        return Err(DensError::VarietyMismatch);
    }
    let gens: Vec<Polynomial> = ideal_gens.iter().map(|g| x.reduce(g)).collect();
    if gens.is_empty() || gens.iter().any(Polynomial::is_zero) {
        return Err(DensError::Precondition("ideal generators must be nonzero in the coordinate ring".into()));
    }
    let (t, s) = (theta.derivation(), xi.derivation());
    let ring = x.ambient();

    let monos = x.standard_monomials(deg_bound);
    let cols: Vec<Vec<Polynomial>> = monos
        .iter()
        .map(|m| {
            let f = Polynomial::term(ring, m.clone(), Coeff::from_int(1));
            vec![t.apply_n(&f, 2), s.apply(&f)]
        })
        .collect();
    let common: Vec<Polynomial> = nullspace(&column_system(&cols), monos.len())
        .into_iter()
        .map(|v| Polynomial::from_terms(ring, monos.iter().cloned().zip(v)))
        .collect();
    let nondeg = common.iter().find(|h| !t.apply(h).is_zero());
    let h_nondegenerate = nondeg.is_some();
    let h = nondeg.or(common.first()).cloned();

    let k1 = kernel_basis(t, 1, deg_bound);
    let k2 = kernel_basis(s, 1, deg_bound);
    let mut index = std::collections::HashMap::new();
    let mut encode = |p: &Polynomial| -> SparseVec {
        p.terms()
            .map(|(m, c)| {
                let next = index.len();
                (*index.entry(m.clone()).or_insert(next), c.clone())
            })
            .collect()
    };
    let mut span = SpanBasis::new();
    for a in &k1 {
        for b in &k2 {
            let v = encode(&x.reduce(&(a.rep() * b.rep())));
            span.insert(&v, 0);
        }
    }
    let mut containment = true;
    'outer: for g in &gens {
        let gd = g.degree().unwrap_or(0) as u32;
        if gd > deg_bound {
            continue;
        }
        for m in x.standard_monomials(deg_bound - gd) {
            let target = x.reduce(&g.mul_term(&m, &Coeff::from_int(1)));
            if !span.contains(&encode(&target)) {
                containment = false;
                break 'outer;
            }
        }
    }
    Ok(PairReport {
        h,
        h_nondegenerate,
        ideal_gens: gens,
        containment_verified_to: deg_bound,
        containment,
        is_compatible_at_bound: h_nondegenerate && containment,
    })
}

/// True iff `f·g ≡ 1` and `f` is nonconstant as a normal form, i.e. `f` is a
/// nontrivial morphism to `C*`.
pub fn verify_unit_witness(x: &AffineVariety, f: &Polynomial, g: &Polynomial) -> bool {
    if f.ring() != x.ambient() || g.ring() != x.ambient() {
        return false;
    }
    let one = Polynomial::one(x.ambient());
    x.reduce(&(&(f * g) - &one)).is_zero() && !x.reduce(f).is_constant()
}

/// `D(f) ≡ 0` for a unit `f` with inverse `g`. Constant units are accepted.
pub fn lnd_annihilates_units(d: &Lnd, f: &Polynomial, g: &Polynomial) -> Result<bool, DensError> {
    let x = d.variety();
    if f.ring() != x.ambient() || g.ring() != x.ambient() {
        return Err(DensError::VarietyMismatch);
    }
    if !x.reduce(&(&(f * g) - &Polynomial::one(x.ambient()))).is_zero() {
        return Err(DensError::NotAUnit(f.to_string()));
    }
    Ok(d.derivation().apply(f).is_zero())
}
