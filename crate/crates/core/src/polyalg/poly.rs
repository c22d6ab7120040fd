use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};

use super::{Coeff, PolyError, Ring};

/// Exponent vector, one entry per ring variable.
///
/// The `Ord` impl is graded reverse lexicographic with the declared variable
/// order as precedence; it fixes the printing order of polynomials.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(n: usize) -> Monomial {
        Monomial(vec![0; n])
    }

    pub fn var(n: usize, i: usize) -> Monomial {
        let mut e = vec![0; n];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn checked_mul(&self, other: &Monomial) -> Result<Monomial, PolyError> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_add(*b).filter(|s| *s < 1 << 31))
            .collect::<Option<Vec<_>>>()
            .map(Monomial)
            .ok_or(PolyError::ExponentOverflow)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(b, a)| b - a).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Monomial) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            for (a, b) in self.0.iter().zip(&other.0).rev() {
                if a != b {
                    return b.cmp(a);
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Monomial) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial over `Q(i)`.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    ring: Ring,
    terms: BTreeMap<Monomial, Coeff>,
}

impl Polynomial {
    pub fn zero(ring: &Ring) -> Polynomial {
        Polynomial { ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(ring: &Ring, c: Coeff) -> Polynomial {
        let mut p = Polynomial::zero(ring);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(ring.arity()), c);
        }
        p
    }

    pub fn one(ring: &Ring) -> Polynomial {
        Polynomial::constant(ring, Coeff::one())
    }

    pub fn var(ring: &Ring, i: usize) -> Polynomial {
        Polynomial::term(ring, Monomial::var(ring.arity(), i), Coeff::one())
    }

    pub fn var_named(ring: &Ring, name: &str) -> Result<Polynomial, PolyError> {
        let i = ring
            .index_of(name)
            .ok_or_else(|| PolyError::UnknownVariable { name: name.to_string(), pos: None })?;
        Ok(Polynomial::var(ring, i))
    }

    pub fn term(ring: &Ring, m: Monomial, c: Coeff) -> Polynomial {
        assert_eq!(m.0.len(), ring.arity(), "monomial arity");
        let mut p = Polynomial::zero(ring);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    /// Builds a polynomial, merging repeated monomials and dropping zeros.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, Coeff)>>(ring: &Ring, terms: I) -> Polynomial {
        let mut p = Polynomial::zero(ring);
        for (m, c) in terms {
            p.add_term(m, &c);
        }
        p
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: &Coeff) {
        debug_assert_eq!(m.0.len(), self.ring.arity());
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn constant_term(&self) -> Coeff {
        self.terms.get(&Monomial::one(self.ring.arity())).cloned().unwrap_or_else(Coeff::zero)
    }

    pub fn coeff(&self, m: &Monomial) -> Coeff {
        self.terms.get(m).cloned().unwrap_or_else(Coeff::zero)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u64> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Terms in ascending grevlex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Coeff)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<Monomial, Coeff> {
        self.terms
    }

    fn same_ring(&self, other: &Polynomial) -> Result<(), PolyError> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(PolyError::RingMismatch)
        }
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.same_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.same_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), &-c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.same_ring(other)?;
        let mut out = Polynomial::zero(&self.ring);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.checked_mul(m2)?, &(c1 * c2));
            }
        }
        Ok(out)
    }

    pub fn checked_pow(&self, k: u32) -> Result<Polynomial, PolyError> {
        let mut acc = Polynomial::one(&self.ring);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.checked_mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.checked_mul(&base)?;
            }
        }
        Ok(acc)
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        self.checked_pow(k).expect("exponent overflow")
    }

    pub fn scale(&self, c: &Coeff) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: &Coeff) -> Polynomial {
        let mut out = Polynomial::zero(&self.ring);
        for (m1, c1) in &self.terms {
            out.add_term(m1.checked_mul(m).expect("exponent overflow"), &(c1 * c));
        }
        out
    }

    /// Formal partial derivative with respect to the `i`-th variable.
    pub fn partial(&self, i: usize) -> Polynomial {
        let mut out = Polynomial::zero(&self.ring);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut d = m.clone();
            d.0[i] -= 1;
            out.add_term(d, &(c * &Coeff::from_int(e as i64)));
        }
        out
    }

    pub fn partial_named(&self, var: &str) -> Result<Polynomial, PolyError> {
        let i = self
            .ring
            .index_of(var)
            .ok_or_else(|| PolyError::UnknownVariable { name: var.to_string(), pos: None })?;
        Ok(self.partial(i))
    }

    /// Floating-point evaluation at a complex point.
    pub fn evaluate(&self, point: &[Complex64]) -> Result<Complex64, PolyError> {
        self.check_arity(point.len())?;
        let pows = power_table(&self.terms, point, Complex64::new(1.0, 0.0), |a, b| a * b);
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in self.terms.iter().rev() {
            let mut t = c.to_complex();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t *= pows[i][e as usize];
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Exact evaluation at a Gaussian-rational point.
    pub fn evaluate_exact(&self, point: &[Coeff]) -> Result<Coeff, PolyError> {
        self.check_arity(point.len())?;
        let pows = power_table(&self.terms, point, Coeff::one(), |a, b| a * b);
        let mut acc = Coeff::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t *= &pows[i][e as usize];
                }
            }
            acc += &t;
        }
        Ok(acc)
    }

    fn check_arity(&self, n: usize) -> Result<(), PolyError> {
        if n == self.ring.arity() {
            Ok(())
        } else {
            Err(PolyError::ArityMismatch { expected: self.ring.arity(), got: n })
        }
    }

    /// Composition `f(images)`; `images[i]` replaces the `i`-th variable.
    pub fn substitute(&self, images: &[Polynomial]) -> Result<Polynomial, PolyError> {
        self.check_arity(images.len())?;
        let target = match images.first() {
            Some(p) => p.ring.clone(),
            None => return Ok(Polynomial::constant(&Ring::of(&[]), self.constant_term())),
        };
        if images.iter().any(|p| p.ring != target) {
            return Err(PolyError::RingMismatch);
        }
        let mut max_exp = vec![0u32; images.len()];
        for m in self.terms.keys() {
            for (i, &e) in m.0.iter().enumerate() {
                max_exp[i] = max_exp[i].max(e);
            }
        }
        let mut pows: Vec<Vec<Polynomial>> = Vec::with_capacity(images.len());
        for (img, &top) in images.iter().zip(&max_exp) {
            let mut row = vec![Polynomial::one(&target)];
            for k in 1..=top as usize {
                row.push(row[k - 1].checked_mul(img)?);
            }
            pows.push(row);
        }
        let mut out = Polynomial::zero(&target);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(&target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = t.checked_mul(&pows[i][e as usize])?;
                }
            }
            for (tm, tc) in t.terms {
                out.add_term(tm, &tc);
            }
        }
        Ok(out)
    }

    /// Substitution by variable name; every ring variable needs an image.
    pub fn substitute_map(&self, images: &HashMap<String, Polynomial>) -> Result<Polynomial, PolyError> {
        let ordered = self
            .ring
            .vars()
            .iter()
            .map(|v| images.get(v).cloned().ok_or_else(|| PolyError::MissingImage(v.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        self.substitute(&ordered)
    }

    /// Re-expresses the polynomial in `target`, matching variables by name.
    pub fn embed(&self, target: &Ring) -> Result<Polynomial, PolyError> {
        if &self.ring == target {
            return Ok(self.clone());
        }
        let map = self
            .ring
            .vars()
            .iter()
            .map(|v| {
                target
                    .index_of(v)
                    .ok_or_else(|| PolyError::UnknownVariable { name: v.clone(), pos: None })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut out = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut e = vec![0u32; target.arity()];
            for (i, &k) in m.0.iter().enumerate() {
                e[map[i]] = k;
            }
            out.add_term(Monomial(e), c);
        }
        Ok(out)
    }
}

fn power_table<T: Clone>(
    terms: &BTreeMap<Monomial, Coeff>,
    point: &[T],
    one: T,
    mul: impl Fn(&T, &T) -> T,
) -> Vec<Vec<T>> {
    let mut max_exp = vec![0u32; point.len()];
    for m in terms.keys() {
        for (i, &e) in m.0.iter().enumerate() {
            max_exp[i] = max_exp[i].max(e);
        }
    }
    point
        .iter()
        .zip(max_exp)
        .map(|(x, top)| {
            let mut row = vec![one.clone()];
            for k in 1..=top as usize {
                let next = mul(&row[k - 1], x);
                row.push(next);
            }
            row
        })
        .collect()
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.checked_add(rhs).expect("ring mismatch in addition")
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.checked_sub(rhs).expect("ring mismatch in subtraction")
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.checked_mul(rhs).expect("ring mismatch in multiplication")
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: Polynomial) -> Polynomial {
        &self + &rhs
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Polynomial) -> Polynomial {
        &self - &rhs
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&Coeff::from_int(-1))
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

fn fmt_monomial(ring: &Ring, m: &Monomial, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let mut first = true;
    for (i, &e) in m.0.iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        write!(f, "{}", ring.var_name(i))?;
        if e > 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

/// Prints in the polynomial grammar, highest grevlex term first.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.prints_negative();
            let c = if neg { -c } else { c.clone() };
            match (k == 0, neg) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{c}")?;
            } else {
                if !c.is_one() {
                    write!(f, "{c}*")?;
                }
                fmt_monomial(&self.ring, m, f)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
