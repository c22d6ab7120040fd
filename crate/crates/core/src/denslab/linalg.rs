//! Exact linear algebra over `Q(i)`.
//!
//! Rank and null spaces go through fraction-free (Bareiss) elimination on
//! Gaussian integers: rows are first cleared of denominators, and every
//! division in the elimination is exact. [`SpanBasis`] is an incremental
//! echelon basis over the field for growing span computations.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::polyalg::Coeff;

#[derive(Clone, Debug, PartialEq, Eq)]
struct GaussInt {
    re: BigInt,
    im: BigInt,
}

impl GaussInt {
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn mul(&self, o: &GaussInt) -> GaussInt {
        GaussInt { re: &self.re * &o.re - &self.im * &o.im, im: &self.re * &o.im + &self.im * &o.re }
    }

    fn sub(&self, o: &GaussInt) -> GaussInt {
        GaussInt { re: &self.re - &o.re, im: &self.im - &o.im }
    }

    /// Exact quotient; panics if `d` does not divide `self`.
    fn div_exact(&self, d: &GaussInt) -> GaussInt {
        let n = &d.re * &d.re + &d.im * &d.im;
        let re = &self.re * &d.re + &self.im * &d.im;
        let im = &self.im * &d.re - &self.re * &d.im;
        let (qr, rr) = re.div_rem(&n);
        let (qi, ri) = im.div_rem(&n);
        assert!(rr.is_zero() && ri.is_zero(), "Bareiss division was not exact");
        GaussInt { re: qr, im: qi }
    }

    fn to_coeff(&self) -> Coeff {
        Coeff::new(BigRational::from_integer(self.re.clone()), BigRational::from_integer(self.im.clone()))
    }
}

/// Scales a row by the lcm of its denominators, giving Gaussian integers.
fn clear_denominators(row: &[Coeff]) -> Vec<GaussInt> {
    let mut l = BigInt::one();
    for c in row {
        l = l.lcm(c.re.denom()).lcm(c.im.denom());
    }
    let lr = BigRational::from_integer(l);
    row.iter()
        .map(|c| {
            let re = &c.re * &lr;
            let im = &c.im * &lr;
            GaussInt { re: re.to_integer(), im: im.to_integer() }
        })
        .collect()
}

/// Fraction-free row echelon form; returns the nonzero rows and their pivot columns.
fn bareiss(rows: &[Vec<Coeff>], ncols: usize) -> (Vec<Vec<GaussInt>>, Vec<usize>) {
    let mut m: Vec<Vec<GaussInt>> = rows.iter().map(|r| clear_denominators(r)).collect();
    let nrows = m.len();
    let mut prev = GaussInt { re: BigInt::one(), im: BigInt::zero() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let (top, rest) = m.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for row in rest.iter_mut() {
            let lead = row[c].clone();
            for j in c + 1..ncols {
                let v = pivot_row[c].mul(&row[j]).sub(&lead.mul(&pivot_row[j]));
                row[j] = v.div_exact(&prev);
            }
            row[c] = GaussInt { re: BigInt::zero(), im: BigInt::zero() };
        }
        prev = m[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

/// Rank of a dense matrix given by rows of length `ncols`.
pub fn rank(rows: &[Vec<Coeff>], ncols: usize) -> usize {
    bareiss(rows, ncols).1.len()
}

/// Basis of `{v : rows · v = 0}`, one vector per free column in ascending
/// order, each with a 1 in its free column.
pub fn nullspace(rows: &[Vec<Coeff>], ncols: usize) -> Vec<Vec<Coeff>> {
    let (ech, pivots) = bareiss(rows, ncols);
    // Back-substitute the echelon rows into reduced form over the field.
    let mut red: Vec<Vec<Coeff>> = ech.iter().map(|r| r.iter().map(GaussInt::to_coeff).collect()).collect();
    for k in (0..red.len()).rev() {
        let pc = pivots[k];
        let inv = red[k][pc].inv().expect("nonzero pivot");
        for v in red[k].iter_mut() {
            *v = &*v * &inv;
        }
        let (above, rest) = red.split_at_mut(k);
        let pivot_row = &rest[0];
        for row in above.iter_mut() {
            let f = row[pc].clone();
            if f.is_zero() {
                continue;
            }
            for (v, p) in row[pc..ncols].iter_mut().zip(&pivot_row[pc..ncols]) {
                *v -= &(&f * p);
            }
        }
    }
    let mut out = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Coeff::zero(); ncols];
        v[free] = Coeff::one();
        for (k, &pc) in pivots.iter().enumerate() {
            v[pc] = -&red[k][free];
        }
        out.push(v);
    }
    out
}

pub type SparseVec = BTreeMap<usize, Coeff>;

fn axpy(v: &mut SparseVec, a: &Coeff, row: &SparseVec) {
    for (k, c) in row {
        let delta = a * c;
        let e = v.entry(*k).or_insert_with(Coeff::zero);
        *e += &delta;
        if e.is_zero() {
            v.remove(k);
        }
    }
}

/// Incremental echelon basis. Each stored row remembers which combination of
/// inserted vectors (by insertion tag) produced it.
#[derive(Clone, Debug, Default)]
pub struct SpanBasis {
    rows: BTreeMap<usize, (SparseVec, SparseVec)>,
}

impl SpanBasis {
    pub fn new() -> SpanBasis {
        SpanBasis::default()
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &SparseVec, tag: Option<usize>) -> (SparseVec, SparseVec) {
        let mut v = v.clone();
        let mut comb = SparseVec::new();
        if let Some(t) = tag {
            comb.insert(t, Coeff::one());
        }
        let mut from = 0;
        while let Some((&k, c)) = v.range(from..).next() {
            match self.rows.get(&k) {
                Some((row, rc)) => {
                    let a = -c;
                    axpy(&mut v, &a, row);
                    axpy(&mut comb, &a, rc);
                }
                None => from = k + 1,
            }
        }
        (v, comb)
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v, None).0.is_empty()
    }

    /// Adds `v` if it is independent of the current span; `tag` labels it
    /// in the combination bookkeeping.
    pub fn insert(&mut self, v: &SparseVec, tag: usize) -> bool {
        let (mut r, mut comb) = self.reduce(v, Some(tag));
        let Some((&pivot, lead)) = r.iter().next() else { return false };
        let inv = lead.inv().expect("nonzero");
        for c in r.values_mut() {
            *c = &*c * &inv;
        }
        for c in comb.values_mut() {
            *c = &*c * &inv;
        }
        self.rows.insert(pivot, (r, comb));
        true
    }

    /// Rows as `(pivot, vector, combination of tags)`, by ascending pivot.
    pub fn rows(&self) -> impl Iterator<Item = (usize, &SparseVec, &SparseVec)> {
        self.rows.iter().map(|(p, (v, c))| (*p, v, c))
    }
}
