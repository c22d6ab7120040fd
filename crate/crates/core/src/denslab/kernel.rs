use std::sync::Arc;

use serde_json::{json, Value};

use crate::fields::{check_lnd, AffineVariety, Derivation, LndVerdict, RingElement, DEFAULT_MAX_ITER};
use crate::polyalg::{Coeff, Polynomial};

use super::linalg::{nullspace, rank};
use super::{column_system, DensError};

/// Basis of `{f : deg f ≤ deg_bound, D^power(f) ≡ 0}` among normal forms.
///
/// Unknowns are the coefficients of the standard monomials of degree at most
/// `deg_bound`; basis vectors come one per free unknown, in ascending
/// monomial order.
pub fn kernel_basis(d: &Derivation, power: usize, deg_bound: u32) -> Vec<RingElement> {
    let x = d.variety();
    let ring = x.ambient();
    let monos = x.standard_monomials(deg_bound);
    let cols: Vec<Vec<Polynomial>> = monos
        .iter()
        .map(|m| vec![d.apply_n(&Polynomial::term(ring, m.clone(), Coeff::from_int(1)), power)])
        .collect();
    let rows = column_system(&cols);
    nullspace(&rows, monos.len())
        .into_iter()
        .map(|v| {
            let f = Polynomial::from_terms(ring, monos.iter().cloned().zip(v));
            x.element(&f).expect("same ambient ring")
        })
        .collect()
}

fn check_point(x: &AffineVariety, point: &[Coeff]) -> Result<(), DensError> {
    if point.len() != x.arity() {
        return Err(crate::fields::FieldError::ArityMismatch { expected: x.arity(), got: point.len() }.into());
    }
    if !x.contains_point(point)? {
        return Err(DensError::PointNotOnVariety);
    }
    Ok(())
}

/// Kernel of the Jacobian of the defining polynomials at an exact point.
pub fn tangent_basis(x: &AffineVariety, point: &[Coeff]) -> Result<Vec<Vec<Coeff>>, DensError> {
    check_point(x, point)?;
    let rows = x
        .defining()
        .iter()
        .map(|q| (0..x.arity()).map(|i| q.partial(i).evaluate_exact(point)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(crate::fields::FieldError::from)?;
    Ok(nullspace(&rows, x.arity()))
}

#[derive(Clone, Debug, PartialEq)]
pub struct FlexReport {
    pub point: Vec<Coeff>,
    pub lnd_values: Vec<Vec<Coeff>>,
    pub tangent_dim: usize,
    pub rank: usize,
    pub spans: bool,
}

impl FlexReport {
    pub fn to_json(&self) -> Value {
        let vec = |v: &[Coeff]| v.iter().map(|c| c.to_string()).collect::<Vec<_>>();
        json!({
            "point": vec(&self.point),
            "lnd_values": self.lnd_values.iter().map(|v| vec(v)).collect::<Vec<_>>(),
            "tangent_dim": self.tangent_dim,
            "rank": self.rank,
            "spans": self.spans,
        })
    }
}

/// Rank of the LND values at `point` against the tangent space there. Each
/// derivation is certified with the default iteration bound first.
pub fn flexible_at(x: &Arc<AffineVariety>, lnds: &[Derivation], point: &[Coeff]) -> Result<FlexReport, DensError> {
    for (index, d) in lnds.iter().enumerate() {
        if !d.variety().same_as(x) {
            return Err(DensError::VarietyMismatch);
        }
        if let LndVerdict::Inconclusive(_) = check_lnd(d, DEFAULT_MAX_ITER) {
            return Err(DensError::UncertifiedDerivation { index });
        }
    }
    let tangent_dim = tangent_basis(x, point)?.len();
    let lnd_values = lnds.iter().map(|d| d.evaluate_exact(point)).collect::<Result<Vec<_>, _>>()?;
    let rank = rank(&lnd_values, x.arity());
    Ok(FlexReport { point: point.to_vec(), lnd_values, tangent_dim, rank, spans: rank == tangent_dim })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::Ring;
    use num_traits::Zero;

    fn q(n: i64) -> Coeff {
        Coeff::from_int(n)
    }

    fn c2() -> Arc<AffineVariety> {
        AffineVariety::affine_space("C2", &Ring::of(&["x", "y"])).unwrap()
    }

    fn sl2() -> Arc<AffineVariety> {
        let r = Ring::of(&["a", "b", "c", "d"]);
        AffineVariety::new("SL2", &r, vec![crate::parse_poly("a*d - b*c - 1", &r).unwrap()]).unwrap()
    }

    fn reps(v: &[RingElement]) -> Vec<String> {
        v.iter().map(|e| e.to_string()).collect()
    }

    #[test]
    fn kernels_on_the_plane() {
        let x = c2();
        let dy = Derivation::parse(&x, &["0", "1"]).unwrap();
        assert_eq!(reps(&kernel_basis(&dy, 1, 2)), vec!["1", "x", "x^2"]);
        assert_eq!(reps(&kernel_basis(&dy, 2, 1)), vec!["1", "y", "x"]);
        assert_eq!(reps(&kernel_basis(&dy, 1, 0)), vec!["1"]);
    }

    #[test]
    fn kernel_on_danielewski() {
        let r = Ring::of(&["z", "u", "v"]);
        let x = AffineVariety::new("dan", &r, vec![crate::parse_poly("u*v - z^2", &r).unwrap()]).unwrap();
        let theta = Derivation::parse(&x, &["u", "0", "2*z"]).unwrap();
        assert_eq!(reps(&kernel_basis(&theta, 1, 1)), vec!["1", "u"]);
    }

    #[test]
    fn tangent_spaces() {
        let x = c2();
        assert_eq!(tangent_basis(&x, &[q(3), Coeff::i()]).unwrap().len(), 2);
        let s = sl2();
        let t = tangent_basis(&s, &[q(1), q(0), q(0), q(1)]).unwrap();
        assert_eq!(t.len(), 3);
        assert!(t.iter().all(|v| (&v[0] + &v[3]).is_zero()));
        assert!(matches!(tangent_basis(&s, &[q(1), q(1), q(1), q(1)]), Err(DensError::PointNotOnVariety)));

        let r = Ring::of(&["z", "u", "v"]);
        let d = AffineVariety::new("d", &r, vec![crate::parse_poly("u*v - z^2 + 1", &r).unwrap()]).unwrap();
        assert_eq!(tangent_basis(&d, &[q(1), q(1), q(0)]).unwrap().len(), 2);
    }

    #[test]
    fn flexibility_examples() {
        let x = c2();
        let fields =
            vec![Derivation::parse(&x, &["1", "0"]).unwrap(), Derivation::parse(&x, &["0", "1"]).unwrap()];
        let rep = flexible_at(&x, &fields, &[q(0), q(5)]).unwrap();
        assert!(rep.spans);
        assert_eq!(rep.rank, 2);

        let s = sl2();
        let mut fields = vec![
            Derivation::parse(&s, &["0", "a", "0", "c"]).unwrap(),
            Derivation::parse(&s, &["b", "0", "d", "0"]).unwrap(),
            Derivation::parse(&s, &["c", "d", "0", "0"]).unwrap(),
            Derivation::parse(&s, &["0", "0", "a", "b"]).unwrap(),
        ];
        let id = [q(1), q(0), q(0), q(1)];
        let rep = flexible_at(&s, &fields, &id).unwrap();
        assert_eq!((rep.rank, rep.tangent_dim, rep.spans), (2, 3, false));
        fields.push(Derivation::parse(&s, &["a - c", "b - d", "a - c", "b - d"]).unwrap());
        let rep = flexible_at(&s, &fields, &id).unwrap();
        assert_eq!((rep.rank, rep.tangent_dim, rep.spans), (3, 3, true));
        assert_eq!(rep.to_json()["spans"], true);

        let line = AffineVariety::affine_space("C1", &Ring::of(&["x"])).unwrap();
        let euler = Derivation::parse(&line, &["x"]).unwrap();
        assert!(matches!(
            flexible_at(&line, &[Derivation::parse(&line, &["1"]).unwrap(), euler], &[q(0)]),
            Err(DensError::UncertifiedDerivation { index: 1 })
        ));
    }
}
