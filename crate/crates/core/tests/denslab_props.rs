mod common;

use common::{nonzero_coeff, real_coeff};
use lndlab::catalog::{self, VarietyBundle};
use lndlab::denslab::linalg::rank;
use lndlab::denslab::{
    check_compatible_pair, flexible_at, kernel_basis, lie_saturate, lnd_annihilates_units, overshear_generators,
    verify_unit_witness,
};
use lndlab::fields::{make_derivation, AffineVariety, Lnd, DEFAULT_MAX_ITER};
use lndlab::{Coeff, Monomial, Polynomial, Ring};
use proptest::prelude::*;

fn bundles() -> Vec<VarietyBundle> {
    vec![
        catalog::affine_space(2).unwrap(),
        catalog::affine_space(3).unwrap(),
        catalog::danielewski("z^2", 1).unwrap(),
        catalog::danielewski("z1^2 + z2^2 - 1", 2).unwrap(),
        catalog::sl2().unwrap(),
        catalog::gl2().unwrap(),
        catalog::koras_russell().unwrap(),
    ]
}

fn coefficient_rank(polys: &[Polynomial]) -> usize {
    let mut monos: Vec<Monomial> = polys.iter().flat_map(|p| p.terms().map(|(m, _)| m.clone())).collect();
    monos.sort_by(|a, b| a.0.cmp(&b.0));
    monos.dedup();
    let rows: Vec<Vec<Coeff>> = polys.iter().map(|p| monos.iter().map(|m| p.coeff(m)).collect()).collect();
    rank(&rows, monos.len())
}

fn check_kernel(lnd: &Lnd, power: usize, max_bound: u32) -> Result<(), TestCaseError> {
    let d = lnd.derivation();
    let mut last = 0;
    for bound in 0..=max_bound {
        let basis = kernel_basis(d, power, bound);
        let reps: Vec<Polynomial> = basis.iter().map(|e| e.rep().clone()).collect();
        for f in &reps {
            prop_assert!(d.apply_n(f, power).is_zero());
            prop_assert!(f.degree().unwrap_or(0) <= bound as u64);
        }
        prop_assert_eq!(coefficient_rank(&reps), reps.len());
        prop_assert!(reps.len() >= last);
        last = reps.len();
    }
    Ok(())
}

#[test]
fn catalog_kernels() {
    for b in bundles() {
        for (_, lnd) in &b.lnds {
            check_kernel(lnd, 1, 3).unwrap();
            check_kernel(lnd, 2, 2).unwrap();
        }
    }
}

fn plane_lnd() -> impl Strategy<Value = Lnd> {
    (any::<bool>(), prop::collection::vec(real_coeff(), 3), real_coeff()).prop_map(|(flip, p, c)| {
        let r = Ring::of(&["x", "y"]);
        let x = AffineVariety::affine_space("C2", &r).unwrap();
        let t = Polynomial::var(&r, if flip { 0 } else { 1 });
        let pv = p.iter().enumerate().fold(Polynomial::zero(&r), |acc, (k, a)| &acc + &t.pow(k as u32).scale(a));
        let cv = Polynomial::constant(&r, c);
        let imgs = if flip { vec![cv, pv] } else { vec![pv, cv] };
        Lnd::certify(make_derivation(&x, imgs).unwrap(), DEFAULT_MAX_ITER).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_plane_kernels(lnd in plane_lnd(), power in 1usize..=2) {
        check_kernel(&lnd, power, 3)?;
    }

    #[test]
    fn flex_rank_ignores_scaling(which in 0usize..7, scales in prop::collection::vec(nonzero_coeff(), 6)) {
        let b = &bundles()[which];
        let fields: Vec<_> = b.lnds.iter().map(|(_, l)| l.derivation().clone()).collect();
        let scaled: Vec<_> = fields.iter().zip(&scales).map(|(d, c)| d.scale_coeff(c)).collect();
        for p in &b.flex_points {
            let base = flexible_at(&b.variety, &fields, p).unwrap();
            let other = flexible_at(&b.variety, &scaled, p).unwrap();
            prop_assert_eq!(base.rank, other.rank);
            prop_assert_eq!(base.spans, other.spans);
        }
    }
}

#[test]
fn saturation_is_monotone() {
    let b = catalog::affine_space(2).unwrap();
    let lnds: Vec<Lnd> = b.lnds.iter().map(|(_, l)| l.clone()).collect();
    let all = overshear_generators(&lnds, 2);
    let half = overshear_generators(&lnds[..1], 2);
    let run = |gens: &[_], work: u32, len: usize| {
        let rep = lie_saturate(&b.variety, gens, 1, work, len).unwrap();
        assert!(rep.replay(gens), "witnesses replay");
        rep.span_dim
    };
    let mut prev_len = 0;
    for len in 1..=3 {
        let d = run(&all, 2, len);
        assert!(d >= prev_len);
        prev_len = d;
    }
    let mut prev_work = 0;
    for work in 1..=3 {
        let d = run(&all, work, 2);
        assert!(d >= prev_work);
        prev_work = d;
    }
    assert!(run(&half, 2, 2) <= run(&all, 2, 2));
    assert!(run(&[], 2, 2) <= run(&half, 2, 2));
}

#[test]
fn compatibility_is_downward_consistent() {
    for b in bundles() {
        for (theta, xi) in &b.pair_candidates {
            let (t, s) = (b.lnd(theta).unwrap(), b.lnd(xi).unwrap());
            for bound in (1..=3).rev() {
                let top = check_compatible_pair(t, s, &b.ideal_candidates, bound).unwrap();
                if !top.containment {
                    continue;
                }
                for lower in 1..bound {
                    let rep = check_compatible_pair(t, s, &b.ideal_candidates, lower).unwrap();
                    assert!(rep.containment, "{}: ({theta}, {xi}) at {lower} below {bound}", b.name);
                    let h_deg = top.h.as_ref().and_then(Polynomial::degree).unwrap_or(0);
                    if top.is_compatible_at_bound && h_deg <= lower as u64 {
                        assert!(rep.is_compatible_at_bound, "{}: ({theta}, {xi}) at {lower}", b.name);
                    }
                }
            }
        }
    }
}

#[test]
fn verified_units_are_annihilated() {
    for b in bundles() {
        for (f, g) in &b.units {
            assert!(verify_unit_witness(&b.variety, f, g));
            for (name, lnd) in &b.lnds {
                assert!(lnd_annihilates_units(lnd, f, g).unwrap(), "{}: {name}", b.name);
            }
        }
    }
}
