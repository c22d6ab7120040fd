//! Buchberger's algorithm with the Gebauer–Möller pair criteria.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::polyalg::{Coeff, Monomial, Polynomial, Ring};

use super::{IdealError, MonomialOrder, OrderKey};

/// Polynomial stored as a list of terms sorted by decreasing order key.
#[derive(Clone, Debug)]
struct Sorted {
    terms: Vec<(Monomial, Coeff)>,
}

impl Sorted {
    fn from_poly(p: &Polynomial, order: &MonomialOrder) -> Sorted {
        let mut terms: Vec<(OrderKey, Monomial, Coeff)> =
            p.terms().map(|(m, c)| (order.key(m), m.clone(), c.clone())).collect();
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        Sorted { terms: terms.into_iter().map(|(_, m, c)| (m, c)).collect() }
    }

    fn lm(&self) -> &Monomial {
        &self.terms[0].0
    }

    fn make_monic(&mut self) {
        let inv = self.terms[0].1.inv().expect("nonzero leading coefficient");
        if inv.is_one() {
            return;
        }
        for (_, c) in &mut self.terms {
            *c = &*c * &inv;
        }
    }

    fn to_poly(&self, ring: &Ring) -> Polynomial {
        Polynomial::from_terms(ring, self.terms.iter().cloned())
    }
}

type Work = BTreeMap<OrderKey, (Monomial, Coeff)>;

fn work_add(work: &mut Work, order: &MonomialOrder, m: Monomial, c: Coeff) {
    let k = order.key(&m);
    match work.get_mut(&k) {
        Some((_, v)) => {
            *v += &c;
            if v.is_zero() {
                work.remove(&k);
            }
        }
        None => {
            work.insert(k, (m, c));
        }
    }
}

/// Full reduction of `work` modulo monic `basis`; returns the remainder sorted.
fn reduce(mut work: Work, basis: &[&Sorted], order: &MonomialOrder) -> Sorted {
    let mut rem = Vec::new();
    while let Some((_, (m, c))) = work.pop_last() {
        match basis.iter().find(|g| g.lm().divides(&m)) {
            Some(g) => {
                let q = g.lm().quotient_of(&m);
                for (gm, gc) in &g.terms[1..] {
                    let prod = gm.checked_mul(&q).expect("exponent overflow");
                    work_add(&mut work, order, prod, -(&c * gc));
                }
            }
            None => rem.push((m, c)),
        }
    }
    Sorted { terms: rem }
}

fn to_work(p: &Sorted, order: &MonomialOrder) -> Work {
    p.terms.iter().map(|(m, c)| (order.key(m), (m.clone(), c.clone()))).collect()
}

fn s_poly(f: &Sorted, g: &Sorted, order: &MonomialOrder) -> Work {
    let l = f.lm().lcm(g.lm());
    let qf = f.lm().quotient_of(&l);
    let qg = g.lm().quotient_of(&l);
    let mut work = Work::new();
    for (m, c) in &f.terms[1..] {
        work_add(&mut work, order, m.checked_mul(&qf).expect("exponent overflow"), c.clone());
    }
    for (m, c) in &g.terms[1..] {
        work_add(&mut work, order, m.checked_mul(&qg).expect("exponent overflow"), -c);
    }
    work
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

/// A reduced Gröbner basis: monic, auto-reduced, sorted by decreasing leading monomial.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    ring: Ring,
    order: MonomialOrder,
    gens: Vec<Polynomial>,
    sorted: Vec<Sorted>,
}

impl PartialEq for GroebnerBasis {
    fn eq(&self, other: &GroebnerBasis) -> bool {
        self.ring == other.ring && self.order == other.order && self.gens == other.gens
    }
}

impl GroebnerBasis {
    fn from_sorted(ring: &Ring, order: &MonomialOrder, mut sorted: Vec<Sorted>) -> GroebnerBasis {
        sorted.sort_by_key(|s| std::cmp::Reverse(order.key(s.lm())));
        GroebnerBasis {
            ring: ring.clone(),
            order: order.clone(),
            gens: sorted.iter().map(|s| s.to_poly(ring)).collect(),
            sorted,
        }
    }

    /// The basis of the zero ideal.
    pub fn zero_ideal(ring: &Ring, order: &MonomialOrder) -> GroebnerBasis {
        GroebnerBasis::from_sorted(ring, order, Vec::new())
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn gens(&self) -> &[Polynomial] {
        &self.gens
    }

    pub fn leading_monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.sorted.iter().map(Sorted::lm)
    }

    /// True if no leading monomial of the basis divides `m`.
    pub fn is_standard(&self, m: &Monomial) -> bool {
        self.sorted.iter().all(|g| !g.lm().divides(m))
    }

    pub fn normal_form(&self, f: &Polynomial) -> Polynomial {
        assert!(f.ring() == &self.ring, "normal_form: ring mismatch");
        if self.sorted.is_empty() || f.is_zero() {
            return f.clone();
        }
        let basis: Vec<&Sorted> = self.sorted.iter().collect();
        let work: Work = f.terms().map(|(m, c)| (self.order.key(m), (m.clone(), c.clone()))).collect();
        reduce(work, &basis, &self.order).to_poly(&self.ring)
    }

    pub fn in_ideal(&self, f: &Polynomial) -> bool {
        self.normal_form(f).is_zero()
    }

    /// Checks the Buchberger criterion and auto-reducedness directly.
    pub fn verify(&self) -> bool {
        let basis: Vec<&Sorted> = self.sorted.iter().collect();
        for (a, ga) in self.sorted.iter().enumerate() {
            for gb in &self.sorted[a + 1..] {
                if !reduce(s_poly(ga, gb, &self.order), &basis, &self.order).terms.is_empty() {
                    return false;
                }
            }
            let monic = ga.terms[0].1.is_one();
            let reduced = self.sorted.iter().enumerate().all(|(b, gb)| {
                b == a || ga.terms.iter().all(|(m, _)| !gb.lm().divides(m))
            });
            if !monic || !reduced {
                return false;
            }
        }
        true
    }

    /// The same ideal extended to `target`, whose extra variables are ranked
    /// below the current ones. Since every monomial order is multiplicative,
    /// the generators remain a reduced Gröbner basis.
    pub fn extend_to(&self, target: &Ring) -> Result<GroebnerBasis, IdealError> {
        let extra = target
            .arity()
            .checked_sub(self.ring.arity())
            .ok_or(IdealError::RingMismatch)?;
        if target.vars()[..self.ring.arity()] != *self.ring.vars() {
            return Err(IdealError::RingMismatch);
        }
        let order = self.order.extend(extra);
        let gens = self
            .gens
            .iter()
            .map(|g| g.embed(target))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| IdealError::RingMismatch)?;
        let sorted = gens.iter().map(|g| Sorted::from_poly(g, &order)).collect();
        Ok(GroebnerBasis::from_sorted(target, &order, sorted))
    }
}

/// Reduced Gröbner basis of the ideal generated by `gens`.
pub fn groebner(gens: &[Polynomial], order: &MonomialOrder) -> Result<GroebnerBasis, IdealError> {
    let ring = match gens.first() {
        Some(g) => g.ring().clone(),
        None => return Err(IdealError::NoGenerators),
    };
    if gens.iter().any(|g| g.ring() != &ring) {
        return Err(IdealError::RingMismatch);
    }
    if order.arity() != ring.arity() {
        return Err(IdealError::BadOrder("order arity differs from ring arity".into()));
    }

    let mut polys: Vec<Sorted> = Vec::new();
    let mut active: Vec<usize> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();

    let inputs: Vec<Sorted> = gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| {
            let mut s = Sorted::from_poly(g, order);
            s.make_monic();
            s
        })
        .collect();

    for s in inputs {
        let basis: Vec<&Sorted> = active.iter().map(|&k| &polys[k]).collect();
        let mut h = reduce(to_work(&s, order), &basis, order);
        if h.terms.is_empty() {
            continue;
        }
        h.make_monic();
        polys.push(h);
        update(&polys, &mut active, &mut pairs, polys.len() - 1);
    }

    while !pairs.is_empty() {
        let pick = (0..pairs.len())
            .min_by(|&a, &b| {
                order
                    .key(&pairs[a].lcm)
                    .cmp(&order.key(&pairs[b].lcm))
                    .then((pairs[a].i, pairs[a].j).cmp(&(pairs[b].i, pairs[b].j)))
            })
            .expect("nonempty");
        let pair = pairs.swap_remove(pick);
        let basis: Vec<&Sorted> = polys.iter().collect();
        let mut h = reduce(s_poly(&polys[pair.i], &polys[pair.j], order), &basis, order);
        if h.terms.is_empty() {
            continue;
        }
        h.make_monic();
        polys.push(h);
        update(&polys, &mut active, &mut pairs, polys.len() - 1);
    }

    // Minimal basis from the active set, then inter-reduction.
    let mut minimal: Vec<Sorted> = Vec::new();
    for &k in &active {
        let lm = polys[k].lm();
        let dominated = active.iter().any(|&o| {
            o != k && polys[o].lm().divides(lm) && (polys[o].lm() != lm || o < k)
        });
        if !dominated {
            minimal.push(polys[k].clone());
        }
    }
    let mut reduced = Vec::with_capacity(minimal.len());
    for (a, g) in minimal.iter().enumerate() {
        let others: Vec<&Sorted> = minimal.iter().enumerate().filter(|(b, _)| *b != a).map(|(_, s)| s).collect();
        let mut work = to_work(g, order);
        let (lk, lead) = work.pop_last().expect("nonzero");
        let mut tail = reduce(work, &others, order);
        tail.terms.insert(0, lead.clone());
        debug_assert_eq!(lk, order.key(&lead.0));
        reduced.push(tail);
    }
    Ok(GroebnerBasis::from_sorted(&ring, order, reduced))
}

/// Gebauer–Möller update of the active set and pair list after adding `h`.
fn update(polys: &[Sorted], active: &mut Vec<usize>, pairs: &mut Vec<Pair>, h: usize) {
    let lh = polys[h].lm().clone();
    let lcm_with = |g: usize| lh.lcm(polys[g].lm());

    let c: Vec<usize> = active.clone();
    let mut d: Vec<usize> = Vec::new();
    for (idx, &g1) in c.iter().enumerate() {
        let l1 = lcm_with(g1);
        let coprime = lh.is_coprime(polys[g1].lm());
        let covered_c = c[idx + 1..].iter().any(|&g2| lcm_with(g2).divides(&l1));
        let covered_d = d.iter().any(|&g2| lcm_with(g2).divides(&l1));
        if coprime || (!covered_c && !covered_d) {
            d.push(g1);
        }
    }
    let e: Vec<Pair> = d
        .into_iter()
        .filter(|&g| !lh.is_coprime(polys[g].lm()))
        .map(|g| Pair { i: g, j: h, lcm: lcm_with(g) })
        .collect();

    pairs.retain(|p| {
        !lh.divides(&p.lcm) || lcm_with(p.i) == p.lcm || lcm_with(p.j) == p.lcm
    });
    pairs.extend(e);

    active.retain(|&g| !lh.divides(polys[g].lm()));
    active.push(h);
}
