mod common;

use common::{poly, real_poly};
use lndlab::{parse_poly, Polynomial, Ring};
use num_complex::Complex64;
use proptest::prelude::*;

fn xyz() -> Ring {
    Ring::of(&["x", "y", "z"])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn ring_axioms(a in poly(xyz(), 6, 5), b in poly(xyz(), 6, 5), c in poly(xyz(), 6, 5)) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        let zero = Polynomial::zero(&xyz());
        let one = Polynomial::one(&xyz());
        prop_assert_eq!(&a + &zero, a.clone());
        prop_assert_eq!(&a * &one, a.clone());
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn print_parse_round_trip(a in poly(xyz(), 6, 8)) {
        let back = parse_poly(&a.to_string(), &xyz()).unwrap();
        prop_assert_eq!(back, a);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn substitute_identity(a in poly(xyz(), 6, 8)) {
        let r = xyz();
        let id: Vec<Polynomial> = (0..3).map(|i| Polynomial::var(&r, i)).collect();
        prop_assert_eq!(a.substitute(&id).unwrap(), a);
    }

    #[test]
    fn substitution_commutes_with_evaluation(
        f in real_poly(xyz(), 3, 6),
        m in prop::collection::vec(real_poly(xyz(), 2, 4), 3),
        p in prop::collection::vec(-1.0f64..1.0, 3),
    ) {
        let point: Vec<Complex64> = p.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let lhs = f.substitute(&m).unwrap().evaluate(&point).unwrap();
        let images: Vec<Complex64> = m.iter().map(|g| g.evaluate(&point).unwrap()).collect();
        let rhs = f.evaluate(&images).unwrap();
        let scale = lhs.norm().max(rhs.norm()).max(1.0);
        prop_assert!((lhs - rhs).norm() <= 1e-12 * scale, "{lhs} vs {rhs}");
    }
}
