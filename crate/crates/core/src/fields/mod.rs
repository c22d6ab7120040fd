//! Vector fields on affine varieties: derivations, LND certificates, shears,
//! overshears and their flows.
//!
//! A vector field on `X` is a derivation of `C[X]` that preserves the ideal of
//! `X`. Smoothness of `X` is never checked.

mod derivation;
mod flow;
mod variety;

pub use derivation::{
    check_lnd, lie_bracket, make_derivation, make_overshear, make_shear, Derivation, Lnd, LndCertificate,
    LndVerdict, OvershearField, DEFAULT_MAX_ITER,
};
pub use flow::{eval_flow, flow_lnd, flow_overshear, phi1, FlowMap, HybridFlow, PolynomialFlow};
pub use variety::{AffineVariety, RingElement, RESERVED_TIME_SYMBOLS};

use thiserror::Error;

use crate::idealquot::IdealError;
use crate::polyalg::{PolyError, Polynomial};

#[derive(Debug, Error, Clone)]
pub enum FieldError {
    #[error("not tangent: D({defining}) = {residue} is not in the ideal")]
    Tangency { defining: String, residue: String },
    #[error("objects live on different varieties")]
    VarietyMismatch,
    #[error("expected {expected} coordinates, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("shear condition violated: D(f) = {0}")]
    ShearConditionViolated(Polynomial),
    #[error("overshear condition violated: D^2(f) = {0}")]
    OvershearConditionViolated(Polynomial),
    #[error("`{0}` is reserved for flow time")]
    ReservedName(String),
    #[error("derivation not certified nilpotent within {0} iterations")]
    Uncertified(usize),
    #[error("bad derivation JSON: {0}")]
    Json(String),
    #[error("internal invariant failed: {0}")]
    Internal(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Ideal(#[from] IdealError),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::{Coeff, Ring};
    use std::sync::Arc;

    fn c2() -> Arc<AffineVariety> {
        AffineVariety::affine_space("C2", &Ring::of(&["x", "y"])).unwrap()
    }

    fn danielewski_z2() -> Arc<AffineVariety> {
        let r = Ring::of(&["z", "u", "v"]);
        let q = crate::parse_poly("u*v - z^2", &r).unwrap();
        AffineVariety::new("dan", &r, vec![q]).unwrap()
    }

    fn lnd(d: Derivation) -> Lnd {
        Lnd::certify(d, DEFAULT_MAX_ITER).unwrap()
    }

    #[test]
    fn make_derivation_examples() {
        let x = c2();
        let dy = Derivation::parse(&x, &["0", "1"]).unwrap();
        assert_eq!(dy.apply(&x.parse("x*y").unwrap()), x.parse("x").unwrap());
        assert!(dy.apply(&x.parse("7").unwrap()).is_zero());

        let d = danielewski_z2();
        let theta = Derivation::parse(&d, &["u", "0", "2*z"]).unwrap();
        assert_eq!(theta.apply(&d.parse("v").unwrap()), d.parse("2*z").unwrap());

        // the sign convention u -> p', z -> -u is not tangent
        match Derivation::parse(&d, &["-u", "2*z", "0"]) {
            Err(FieldError::Tangency { residue, .. }) => {
                assert_eq!(residue, d.reduce(&d.parse("2*z*(u+v)").unwrap()).to_string())
            }
            other => panic!("expected tangency error, got {other:?}"),
        }
        assert!(matches!(Derivation::parse(&x, &["0"]), Err(FieldError::ArityMismatch { .. })));
    }

    #[test]
    fn reserved_time_names_rejected() {
        let r = Ring::of(&["x", "t"]);
        assert!(matches!(AffineVariety::affine_space("bad", &r), Err(FieldError::ReservedName(_))));
    }

    #[test]
    fn brackets() {
        let x = c2();
        let dx = Derivation::parse(&x, &["1", "0"]).unwrap();
        let dy = Derivation::parse(&x, &["0", "1"]).unwrap();
        assert!(lie_bracket(&dx, &dy).unwrap().is_zero());
        let a = Derivation::parse(&x, &["y", "0"]).unwrap();
        let b = Derivation::parse(&x, &["0", "x"]).unwrap();
        assert_eq!(lie_bracket(&a, &b).unwrap(), Derivation::parse(&x, &["-x", "y"]).unwrap());
        let a = Derivation::parse(&x, &["y^2", "0"]).unwrap();
        let b = Derivation::parse(&x, &["0", "x^2"]).unwrap();
        assert_eq!(lie_bracket(&a, &b).unwrap(), Derivation::parse(&x, &["-2*x^2*y", "2*x*y^2"]).unwrap());
        let other = danielewski_z2();
        assert!(matches!(lie_bracket(&a, &Derivation::zero(&other)), Err(FieldError::VarietyMismatch)));
    }

    #[test]
    fn lnd_checks() {
        let x = c2();
        match check_lnd(&Derivation::parse(&x, &["0", "1"]).unwrap(), DEFAULT_MAX_ITER) {
            LndVerdict::Nilpotent(c) => assert_eq!(c.indices(), &[1, 2]),
            v => panic!("{v:?}"),
        }
        let line = AffineVariety::affine_space("C1", &Ring::of(&["x"])).unwrap();
        let euler = Derivation::parse(&line, &["x"]).unwrap();
        assert_eq!(check_lnd(&euler, 64), LndVerdict::Inconclusive(64));
        assert_eq!(check_lnd(&euler, 3), LndVerdict::Inconclusive(3));
    }

    #[test]
    fn koras_russell_chain() {
        let r = Ring::of(&["x", "y", "u", "v"]);
        let kr = AffineVariety::new("kr", &r, vec![crate::parse_poly("x + x^2*y + u^2 + v^3", &r).unwrap()]).unwrap();
        let d = Derivation::parse(&kr, &["0", "-3*v^2", "0", "x^2"]).unwrap();
        let y = kr.parse("y").unwrap();
        assert_eq!(d.apply_n(&y, 1), kr.parse("-3*v^2").unwrap());
        assert_eq!(d.apply_n(&y, 2), kr.parse("-6*x^2*v").unwrap());
        assert_eq!(d.apply_n(&y, 3), kr.parse("-6*x^4").unwrap());
        match check_lnd(&d, 64) {
            LndVerdict::Nilpotent(c) => {
                assert_eq!(c.indices(), &[1, 4, 1, 2]);
                assert!(c.replay(&d));
            }
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn shears_and_overshears() {
        let x = c2();
        let dy = lnd(Derivation::parse(&x, &["0", "1"]).unwrap());
        let s = make_shear(&dy, &x.parse("x^2").unwrap()).unwrap();
        assert_eq!(s.derivation(), &Derivation::parse(&x, &["0", "x^2"]).unwrap());
        assert_eq!(s.certificate().indices(), &[1, 2]);
        assert!(make_shear(&dy, &x.parse("0").unwrap()).unwrap().derivation().is_zero());

        let d = danielewski_z2();
        let theta = lnd(Derivation::parse(&d, &["u", "0", "2*z"]).unwrap());
        match make_shear(&theta, &d.parse("z").unwrap()) {
            Err(FieldError::ShearConditionViolated(r)) => assert_eq!(r, d.parse("u").unwrap()),
            other => panic!("{other:?}"),
        }

        let o = make_overshear(&dy, &x.parse("x*y").unwrap()).unwrap();
        assert_eq!(o.rate(), &x.parse("x").unwrap());
        assert!(!o.is_shear());
        assert_eq!(o.field(), Derivation::parse(&x, &["0", "x*y"]).unwrap());
        match make_overshear(&dy, &x.parse("y^2").unwrap()) {
            Err(FieldError::OvershearConditionViolated(r)) => assert_eq!(r, x.parse("2").unwrap()),
            other => panic!("{other:?}"),
        }
        assert!(make_overshear(&dy, &x.parse("x^2").unwrap()).unwrap().is_shear());
    }

    #[test]
    fn flows() {
        let x = c2();
        let dy = lnd(Derivation::parse(&x, &["0", "1"]).unwrap());
        let shear = make_shear(&dy, &x.parse("x^2").unwrap()).unwrap();
        let f = flow_lnd(&shear);
        assert_eq!(f.render(), vec!["x", "x^2*t + y"]);
        assert!(f.is_identity_at_zero());
        let one = f.at_time(&Coeff::from_int(1));
        assert_eq!(one, vec![x.parse("x").unwrap(), x.parse("y + x^2").unwrap()]);

        let zero = lnd(Derivation::zero(&x));
        assert_eq!(flow_lnd(&zero).render(), vec!["x", "y"]);

        let d = danielewski_z2();
        let theta = lnd(Derivation::parse(&d, &["u", "0", "2*z"]).unwrap());
        let f = flow_lnd(&theta);
        let rt = f.ring().clone();
        let expect = ["z + u*t", "u", "v + 2*z*t + u*t^2"];
        for (img, e) in f.images().iter().zip(expect) {
            assert_eq!(img, &crate::parse_poly(e, &rt).unwrap());
        }
        assert!(f.preserves_ideal());
        assert!(f.group_law_holds());
    }

    #[test]
    fn overshear_flow_degrades_for_shears() {
        let x = c2();
        let dy = lnd(Derivation::parse(&x, &["0", "1"]).unwrap());
        let f = x.parse("x^2").unwrap();
        let via_overshear = flow_overshear(&make_overshear(&dy, &f).unwrap());
        let via_shear = flow_lnd(&make_shear(&dy, &f).unwrap());
        assert_eq!(via_overshear.as_polynomial().unwrap().images(), via_shear.images());
    }

    #[test]
    fn hybrid_flow_values() {
        use num_complex::Complex64;
        let x = c2();
        let dy = lnd(Derivation::parse(&x, &["0", "1"]).unwrap());
        let flow = flow_overshear(&make_overshear(&dy, &x.parse("x*y").unwrap()).unwrap());
        assert!(matches!(flow, FlowMap::Hybrid(_)));
        let p = [Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)];
        let out = eval_flow(&flow, Complex64::new(2f64.ln(), 0.0), &p).unwrap();
        assert!((out[0] - 1.0).norm() < 1e-12);
        assert!((out[1] - 2.0).norm() < 1e-12);
        let same = eval_flow(&flow, Complex64::new(0.0, 0.0), &p).unwrap();
        assert_eq!(same, p.to_vec());
        assert!(matches!(
            eval_flow(&flow, Complex64::new(0.0, 0.0), &p[..1]),
            Err(FieldError::ArityMismatch { .. })
        ));
    }

    #[test]
    fn json_round_trip() {
        let d = danielewski_z2();
        let theta = Derivation::parse(&d, &["u", "0", "2*z"]).unwrap();
        let v = theta.to_json();
        assert_eq!(v["images"]["v"], "2*z");
        assert_eq!(Derivation::from_json(&d, &v).unwrap(), theta);
    }
}
