use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use crate::idealquot::{groebner, GroebnerBasis, MonomialOrder};
use crate::polyalg::{parse_poly, Coeff, Monomial, Polynomial, Ring};

use super::FieldError;

/// Names reserved for formal flow times.
pub const RESERVED_TIME_SYMBOLS: [&str; 2] = ["t", "s"];

/// An affine variety `X = V(defining) ⊂ C^n`, carrying a Gröbner basis of its ideal.
///
/// An empty `defining` list is affine space.
pub struct AffineVariety {
    name: String,
    ambient: Ring,
    defining: Vec<Polynomial>,
    gb: GroebnerBasis,
}

impl AffineVariety {
    pub fn new(name: &str, ambient: &Ring, defining: Vec<Polynomial>) -> Result<Arc<AffineVariety>, FieldError> {
        AffineVariety::with_order(name, ambient, defining, MonomialOrder::grevlex(ambient))
    }

    pub fn with_order(
        name: &str,
        ambient: &Ring,
        defining: Vec<Polynomial>,
        order: MonomialOrder,
    ) -> Result<Arc<AffineVariety>, FieldError> {
        if let Some(v) = ambient.vars().iter().find(|v| RESERVED_TIME_SYMBOLS.contains(&v.as_str())) {
            return Err(FieldError::ReservedName(v.clone()));
        }
        if defining.iter().any(|q| q.ring() != ambient) {
            return Err(FieldError::VarietyMismatch);
        }
        let nonzero: Vec<Polynomial> = defining.iter().filter(|q| !q.is_zero()).cloned().collect();
        let gb = if nonzero.is_empty() {
            GroebnerBasis::zero_ideal(ambient, &order)
        } else {
            groebner(&nonzero, &order)?
        };
        Ok(Arc::new(AffineVariety { name: name.to_string(), ambient: ambient.clone(), defining, gb }))
    }

    pub fn affine_space(name: &str, ambient: &Ring) -> Result<Arc<AffineVariety>, FieldError> {
        AffineVariety::new(name, ambient, Vec::new())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ambient(&self) -> &Ring {
        &self.ambient
    }

    pub fn defining(&self) -> &[Polynomial] {
        &self.defining
    }

    pub fn gb(&self) -> &GroebnerBasis {
        &self.gb
    }

    pub fn arity(&self) -> usize {
        self.ambient.arity()
    }

    pub fn parse(&self, src: &str) -> Result<Polynomial, FieldError> {
        Ok(parse_poly(src, &self.ambient)?)
    }

    /// Canonical representative in `C[X]`.
    pub fn reduce(&self, f: &Polynomial) -> Polynomial {
        self.gb.normal_form(f)
    }

    pub fn element(self: &Arc<Self>, f: &Polynomial) -> Result<RingElement, FieldError> {
        if f.ring() != &self.ambient {
            return Err(FieldError::VarietyMismatch);
        }
        Ok(RingElement { variety: self.clone(), rep: self.reduce(f) })
    }

    /// Exact membership test for a Gaussian-rational point.
    pub fn contains_point(&self, point: &[Coeff]) -> Result<bool, FieldError> {
        for q in &self.defining {
            if !q.evaluate_exact(point)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Standard monomials (not divisible by any leading monomial) of degree
    /// at most `max_deg`, ascending by degree and then by grevlex.
    pub fn standard_monomials(&self, max_deg: u32) -> Vec<Monomial> {
        let n = self.arity();
        let mut out = Vec::new();
        for d in 0..=max_deg {
            let mut layer = Vec::new();
            compositions(n, d, &mut vec![0; n], 0, &mut layer);
            layer.retain(|m| self.gb.is_standard(m));
            layer.sort();
            out.extend(layer);
        }
        out
    }

    pub fn same_as(&self, other: &AffineVariety) -> bool {
        std::ptr::eq(self, other) || (self.ambient == other.ambient && self.gb == other.gb)
    }
}

fn compositions(n: usize, d: u32, cur: &mut Vec<u32>, at: usize, out: &mut Vec<Monomial>) {
    if n == 0 {
        if d == 0 {
            out.push(Monomial(Vec::new()));
        }
        return;
    }
    if at == n - 1 {
        cur[at] = d;
        out.push(Monomial(cur.clone()));
        cur[at] = 0;
        return;
    }
    for k in 0..=d {
        cur[at] = k;
        compositions(n, d - k, cur, at + 1, out);
    }
    cur[at] = 0;
}

impl fmt::Debug for AffineVariety {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AffineVariety({}: {:?}, [", self.name, self.ambient)?;
        for (i, q) in self.defining.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{q}")?;
        }
        write!(f, "])")
    }
}

/// An element of `C[X]`, held as its normal form.
#[derive(Clone)]
pub struct RingElement {
    variety: Arc<AffineVariety>,
    rep: Polynomial,
}

impl RingElement {
    pub fn rep(&self) -> &Polynomial {
        &self.rep
    }

    pub fn variety(&self) -> &Arc<AffineVariety> {
        &self.variety
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.rep.is_constant()
    }

    fn check(&self, other: &RingElement) -> Result<(), FieldError> {
        if self.variety.same_as(&other.variety) {
            Ok(())
        } else {
            Err(FieldError::VarietyMismatch)
        }
    }

    pub fn add(&self, other: &RingElement) -> Result<RingElement, FieldError> {
        self.check(other)?;
        Ok(RingElement { variety: self.variety.clone(), rep: &self.rep + &other.rep })
    }

    pub fn sub(&self, other: &RingElement) -> Result<RingElement, FieldError> {
        self.check(other)?;
        Ok(RingElement { variety: self.variety.clone(), rep: &self.rep - &other.rep })
    }

    pub fn mul(&self, other: &RingElement) -> Result<RingElement, FieldError> {
        self.check(other)?;
        Ok(RingElement { variety: self.variety.clone(), rep: self.variety.reduce(&(&self.rep * &other.rep)) })
    }
}

impl PartialEq for RingElement {
    fn eq(&self, other: &RingElement) -> bool {
        self.variety.same_as(&other.variety) && self.rep == other.rep
    }
}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in C[{}]", self.rep, self.variety.name)
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rep)
    }
}
