mod common;

use std::sync::Arc;

use common::{combination, nonzero_coeff, real_coeff, real_poly};
use lndlab::catalog::{self, VarietyBundle};
use lndlab::denslab::kernel_basis;
use lndlab::fields::{
    check_lnd, eval_flow, flow_lnd, flow_overshear, lie_bracket, make_overshear, make_shear, AffineVariety,
    Derivation, FlowMap, Lnd, LndVerdict, DEFAULT_MAX_ITER,
};
use lndlab::tame::{compose_maps, PolyMap};
use lndlab::{Coeff, Polynomial, Ring};
use num_complex::Complex64;
use proptest::prelude::*;

fn plane() -> Arc<AffineVariety> {
    AffineVariety::affine_space("C2", &Ring::of(&["x", "y"])).unwrap()
}

/// `uv = z^2` with variables (z, u, v).
fn surface() -> VarietyBundle {
    catalog::danielewski("z^2", 1).unwrap()
}

fn same(a: &Derivation, b: &Derivation) -> bool {
    a.images() == b.images()
}

fn certify(d: Derivation) -> Lnd {
    Lnd::certify(d, DEFAULT_MAX_ITER).expect("triangular fields are locally nilpotent")
}

fn combine(fields: &[Derivation], weights: &[Polynomial]) -> Derivation {
    let mut acc = Derivation::zero(fields[0].variety());
    for (d, w) in fields.iter().zip(weights) {
        acc = acc.add(&d.scale(w)).unwrap();
    }
    acc
}

/// Tangent fields on `uv = z^2`: the two bundled LNDs and two grading fields.
fn surface_fields() -> Vec<Derivation> {
    let b = surface();
    let x = &b.variety;
    vec![
        b.lnd("thetau").unwrap().derivation().clone(),
        b.lnd("thetav").unwrap().derivation().clone(),
        Derivation::parse(x, &["z", "u", "v"]).unwrap(),
        Derivation::parse(x, &["0", "u", "-v"]).unwrap(),
    ]
}

fn plane_field() -> impl Strategy<Value = Derivation> {
    prop::collection::vec(real_poly(Ring::of(&["x", "y"]), 3, 4), 2)
        .prop_map(|imgs| lndlab::fields::make_derivation(&plane(), imgs).unwrap())
}

fn surface_field() -> impl Strategy<Value = Derivation> {
    prop::collection::vec(real_poly(Ring::of(&["z", "u", "v"]), 1, 3), 4)
        .prop_map(|w| combine(&surface_fields(), &w))
}

/// Triangular LNDs `p(y)∂x + c∂y` or `c∂x + p(x)∂y` on the plane.
fn plane_lnd() -> impl Strategy<Value = Lnd> {
    (any::<bool>(), prop::collection::vec(real_coeff(), 4), real_coeff()).prop_map(|(flip, p, c)| {
        let x = plane();
        let r = x.ambient().clone();
        let t = Polynomial::var(&r, if flip { 0 } else { 1 });
        let pv = p.iter().enumerate().fold(Polynomial::zero(&r), |acc, (k, a)| &acc + &t.pow(k as u32).scale(a));
        let cv = Polynomial::constant(&r, c);
        let imgs = if flip { vec![cv, pv] } else { vec![pv, cv] };
        certify(lndlab::fields::make_derivation(&x, imgs).unwrap())
    })
}

/// Shears `q(u)·θu` or `q(v)·θv` on `uv = z^2`.
fn surface_lnd() -> impl Strategy<Value = Lnd> {
    (any::<bool>(), nonzero_coeff(), real_coeff()).prop_map(|(which, a, b)| {
        let bundle = surface();
        let (name, var) = if which { ("thetau", "u") } else { ("thetav", "v") };
        let base = bundle.lnd(name).unwrap().clone();
        let q = bundle.variety.parse(var).unwrap().scale(&b);
        let q = &q + &Polynomial::constant(bundle.variety.ambient(), a);
        make_shear(&base, &q).unwrap()
    })
}

fn ker2_element(lnd: &Lnd) -> impl Strategy<Value = Polynomial> {
    let basis: Vec<Polynomial> = kernel_basis(lnd.derivation(), 2, 3).iter().map(|e| e.rep().clone()).collect();
    combination(basis)
}

fn bracket_identity_holds(t: &Lnd, tt: &Lnd, f: &Polynomial, ff: &Polynomial) -> bool {
    let (th, tht) = (t.derivation(), tt.derivation());
    let lhs = lie_bracket(&th.scale(f), &tht.scale(ff)).unwrap();
    let a = tht.scale(&(f * &th.apply(ff)));
    let b = th.scale(&(ff * &tht.apply(f)));
    let c = lie_bracket(th, tht).unwrap().scale(&(f * ff));
    let rhs = a.sub(&b).unwrap().add(&c).unwrap();
    same(&lhs, &rhs)
}

fn jacobi_holds(a: &Derivation, b: &Derivation, c: &Derivation) -> bool {
    let br = |p: &Derivation, q: &Derivation| lie_bracket(p, q).unwrap();
    let sum = br(a, &br(b, c)).add(&br(b, &br(c, a))).unwrap().add(&br(c, &br(a, b))).unwrap();
    sum.is_zero()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn bracket_antisymmetry_and_jacobi_plane(a in plane_field(), b in plane_field(), c in plane_field()) {
        let ab = lie_bracket(&a, &b).unwrap();
        let ba = lie_bracket(&b, &a).unwrap();
        prop_assert!(ab.add(&ba).unwrap().is_zero());
        prop_assert!(jacobi_holds(&a, &b, &c));
        let aa = lie_bracket(&a, &a).unwrap();
        prop_assert!(aa.is_zero());
        prop_assert!(matches!(check_lnd(&aa, DEFAULT_MAX_ITER), LndVerdict::Nilpotent(_)));
    }

    #[test]
    fn bracket_antisymmetry_and_jacobi_surface(a in surface_field(), b in surface_field(), c in surface_field()) {
        let ab = lie_bracket(&a, &b).unwrap();
        let ba = lie_bracket(&b, &a).unwrap();
        prop_assert!(ab.add(&ba).unwrap().is_zero());
        prop_assert!(jacobi_holds(&a, &b, &c));
        prop_assert!(lie_bracket(&a, &a).unwrap().is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn overshear_bracket_expansion_plane(
        (t, f) in plane_lnd().prop_flat_map(|t| { let k = ker2_element(&t); (Just(t), k) }),
        (tt, ff) in plane_lnd().prop_flat_map(|t| { let k = ker2_element(&t); (Just(t), k) }),
    ) {
        prop_assert!(t.derivation().apply_n(&f, 2).is_zero());
        prop_assert!(bracket_identity_holds(&t, &tt, &f, &ff));
    }

    #[test]
    fn overshear_bracket_expansion_surface(
        (t, f) in surface_lnd().prop_flat_map(|t| { let k = ker2_element(&t); (Just(t), k) }),
        (tt, ff) in surface_lnd().prop_flat_map(|t| { let k = ker2_element(&t); (Just(t), k) }),
    ) {
        prop_assert!(tt.derivation().apply_n(&ff, 2).is_zero());
        prop_assert!(bracket_identity_holds(&t, &tt, &f, &ff));
    }

    #[test]
    fn shear_indices_are_bounded(
        (t, f) in plane_lnd().prop_flat_map(|t| {
            let basis: Vec<Polynomial> = kernel_basis(t.derivation(), 1, 3).iter().map(|e| e.rep().clone()).collect();
            (Just(t), combination(basis))
        }),
    ) {
        let s = make_shear(&t, &f).unwrap();
        for (a, b) in s.certificate().indices().iter().zip(t.certificate().indices()) {
            prop_assert!(a <= b);
        }
    }
}

fn rational_time() -> impl Strategy<Value = Coeff> {
    (-4i64..=4, 1i64..=3).prop_map(|(n, d)| Coeff::from_ratio(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn polynomial_flow_group_law(
        lnd in prop_oneof![plane_lnd(), surface_lnd()],
        t in rational_time(),
        s in rational_time(),
    ) {
        let flow = flow_lnd(&lnd);
        prop_assert!(flow.is_identity_at_zero());
        prop_assert!(flow.group_law_holds());
        prop_assert!(flow.preserves_ideal());
        let x = lnd.variety();
        let at = |c: &Coeff| PolyMap::from_flow(&flow, c);
        let composed = compose_maps(&[at(&s), at(&t)]).unwrap();
        let direct = at(&(&t + &s));
        for (p, q) in composed.images().iter().zip(direct.images()) {
            prop_assert!(x.reduce(&(p - q)).is_zero());
        }
        for q in x.defining() {
            let moved = q.substitute(&flow.at_time(&t)).unwrap();
            prop_assert!(x.reduce(&moved).is_zero());
        }
    }

    #[test]
    fn hybrid_flow_group_law(
        (lnd, f) in plane_lnd().prop_flat_map(|t| { let k = ker2_element(&t); (Just(t), k) }),
        p in prop::collection::vec(-1.0f64..1.0, 2),
        t in -1.0f64..1.0,
        s in -1.0f64..1.0,
    ) {
        let flow = flow_overshear(&make_overshear(&lnd, &f).unwrap());
        let pt: Vec<Complex64> = p.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let c = |v: f64| Complex64::new(v, 0.0);
        let mid = eval_flow(&flow, c(s), &pt).unwrap();
        let two_step = eval_flow(&flow, c(t), &mid).unwrap();
        let one_step = eval_flow(&flow, c(t + s), &pt).unwrap();
        // Relative to the largest coordinate on the path: large rates push the
        // midpoint far out and the return leg cancels in floating point.
        let scale = mid.iter().chain(&one_step).map(|z| z.norm()).fold(1.0, f64::max);
        for (a, b) in two_step.iter().zip(&one_step) {
            prop_assert!((a - b).norm() <= 1e-9 * scale, "{a} vs {b}");
        }
    }
}

fn catalog() -> Vec<VarietyBundle> {
    vec![
        catalog::affine_space(1).unwrap(),
        catalog::affine_space(2).unwrap(),
        catalog::affine_space(3).unwrap(),
        surface(),
        catalog::danielewski("z1^2 + z2^2 - 1", 2).unwrap(),
        catalog::sl2().unwrap(),
        catalog::gl2().unwrap(),
        catalog::koras_russell().unwrap(),
    ]
}

#[test]
fn catalog_flows_preserve_ideals() {
    for b in catalog() {
        for (name, lnd) in &b.lnds {
            let flow = flow_lnd(lnd);
            assert!(flow.preserves_ideal(), "{}: {name}", b.name);
            assert!(flow.group_law_holds(), "{}: {name}", b.name);
        }
        for (name, o) in &b.overshear_samples {
            match flow_overshear(o) {
                FlowMap::Polynomial(f) => assert!(f.preserves_ideal(), "{}: {name}", b.name),
                hybrid => {
                    for p in &b.flex_points {
                        let pt: Vec<Complex64> = p.iter().map(Coeff::to_complex).collect();
                        for k in -4..=4 {
                            let t = Complex64::new(k as f64 / 4.0, 0.0);
                            let moved = eval_flow(&hybrid, t, &pt).unwrap();
                            for q in b.variety.defining() {
                                assert!(q.evaluate(&moved).unwrap().norm() <= 1e-9, "{}: {name}", b.name);
                            }
                        }
                    }
                }
            }
        }
    }
}
