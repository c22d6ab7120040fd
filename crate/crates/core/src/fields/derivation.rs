use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde_json::{json, Map, Value};

use crate::polyalg::{Coeff, Polynomial};

use super::{AffineVariety, FieldError, RingElement};

/// Default iteration bound for [`check_lnd`].
pub const DEFAULT_MAX_ITER: usize = 64;

/// A derivation of `C[X]`, given by the images of the ambient coordinates.
///
/// Images are stored as normal forms, and construction enforces tangency:
/// the Leibniz extension maps every defining polynomial into the ideal.
#[derive(Clone)]
pub struct Derivation {
    variety: Arc<AffineVariety>,
    images: Vec<Polynomial>,
}

/// Leibniz extension `Σ ∂f/∂x_i · images[i]`, without reduction.
fn leibniz(images: &[Polynomial], f: &Polynomial) -> Polynomial {
    let mut acc = Polynomial::zero(f.ring());
    for (i, img) in images.iter().enumerate() {
        if img.is_zero() {
            continue;
        }
        let d = f.partial(i);
        if !d.is_zero() {
            acc = &acc + &(&d * img);
        }
    }
    acc
}

pub fn make_derivation(x: &Arc<AffineVariety>, images: Vec<Polynomial>) -> Result<Derivation, FieldError> {
    if images.len() != x.arity() {
        return Err(FieldError::ArityMismatch { expected: x.arity(), got: images.len() });
    }
    if images.iter().any(|p| p.ring() != x.ambient()) {
        return Err(FieldError::VarietyMismatch);
    }
    for q in x.defining() {
        let residue = x.reduce(&leibniz(&images, q));
        if !residue.is_zero() {
            return Err(FieldError::Tangency { defining: q.to_string(), residue: residue.to_string() });
        }
    }
    let images = images.iter().map(|p| x.reduce(p)).collect();
    Ok(Derivation { variety: x.clone(), images })
}

impl Derivation {
    /// Parses one image per ambient variable.
    pub fn parse(x: &Arc<AffineVariety>, images: &[&str]) -> Result<Derivation, FieldError> {
        let polys = images.iter().map(|s| x.parse(s)).collect::<Result<Vec<_>, _>>()?;
        make_derivation(x, polys)
    }

    pub fn zero(x: &Arc<AffineVariety>) -> Derivation {
        Derivation { variety: x.clone(), images: vec![Polynomial::zero(x.ambient()); x.arity()] }
    }

    /// The coordinate field `∂/∂x_i` on affine space.
    pub fn coordinate(x: &Arc<AffineVariety>, i: usize) -> Result<Derivation, FieldError> {
        let mut images = vec![Polynomial::zero(x.ambient()); x.arity()];
        images[i] = Polynomial::one(x.ambient());
        make_derivation(x, images)
    }

    pub fn variety(&self) -> &Arc<AffineVariety> {
        &self.variety
    }

    pub fn images(&self) -> &[Polynomial] {
        &self.images
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(Polynomial::is_zero)
    }

    /// Max total degree of the images; `None` for the zero derivation.
    pub fn degree(&self) -> Option<u64> {
        self.images.iter().filter_map(Polynomial::degree).max()
    }

    fn same_variety(&self, other: &Derivation) -> Result<(), FieldError> {
        if self.variety.same_as(&other.variety) {
            Ok(())
        } else {
            Err(FieldError::VarietyMismatch)
        }
    }

    /// `D(f)` reduced to normal form. `f` may be any ambient polynomial.
    pub fn apply(&self, f: &Polynomial) -> Polynomial {
        assert!(f.ring() == self.variety.ambient(), "apply: polynomial outside the ambient ring");
        self.variety.reduce(&leibniz(&self.images, f))
    }

    pub fn apply_element(&self, f: &RingElement) -> Result<RingElement, FieldError> {
        if !f.variety().same_as(&self.variety) {
            return Err(FieldError::VarietyMismatch);
        }
        self.variety.element(&self.apply(f.rep()))
    }

    pub fn apply_n(&self, f: &Polynomial, n: usize) -> Polynomial {
        let mut g = self.variety.reduce(f);
        for _ in 0..n {
            if g.is_zero() {
                break;
            }
            g = self.apply(&g);
        }
        g
    }

    /// The field `f·D`.
    pub fn scale(&self, f: &Polynomial) -> Derivation {
        let images = self.images.iter().map(|g| self.variety.reduce(&(f * g))).collect();
        Derivation { variety: self.variety.clone(), images }
    }

    pub fn scale_coeff(&self, c: &Coeff) -> Derivation {
        Derivation { variety: self.variety.clone(), images: self.images.iter().map(|g| g.scale(c)).collect() }
    }

    pub fn add(&self, other: &Derivation) -> Result<Derivation, FieldError> {
        self.same_variety(other)?;
        let images = self.images.iter().zip(&other.images).map(|(a, b)| a + b).collect();
        Ok(Derivation { variety: self.variety.clone(), images })
    }

    pub fn sub(&self, other: &Derivation) -> Result<Derivation, FieldError> {
        self.same_variety(other)?;
        let images = self.images.iter().zip(&other.images).map(|(a, b)| a - b).collect();
        Ok(Derivation { variety: self.variety.clone(), images })
    }

    pub fn evaluate_exact(&self, point: &[Coeff]) -> Result<Vec<Coeff>, FieldError> {
        self.images.iter().map(|p| Ok(p.evaluate_exact(point)?)).collect()
    }

    pub fn evaluate(&self, point: &[Complex64]) -> Result<Vec<Complex64>, FieldError> {
        self.images.iter().map(|p| Ok(p.evaluate(point)?)).collect()
    }

    /// `{"variety": name, "images": {"var": "<poly>"}}`.
    pub fn to_json(&self) -> Value {
        let mut images = Map::new();
        for (v, p) in self.variety.ambient().vars().iter().zip(&self.images) {
            images.insert(v.clone(), Value::String(p.to_string()));
        }
        json!({ "variety": self.variety.name(), "images": images })
    }

    /// Reads the `images` object of [`Derivation::to_json`]; absent variables map to 0.
    pub fn from_json(x: &Arc<AffineVariety>, value: &Value) -> Result<Derivation, FieldError> {
        let obj = value
            .get("images")
            .and_then(Value::as_object)
            .ok_or_else(|| FieldError::Json("missing `images` object".into()))?;
        let mut images = vec![Polynomial::zero(x.ambient()); x.arity()];
        for (k, v) in obj {
            let i = x
                .ambient()
                .index_of(k)
                .ok_or_else(|| FieldError::Json(format!("unknown variable `{k}` in images")))?;
            let src = v.as_str().ok_or_else(|| FieldError::Json(format!("image of `{k}` is not a string")))?;
            images[i] = x.parse(src)?;
        }
        make_derivation(x, images)
    }
}

/// `[D1, D2](x_i) = D1(D2(x_i)) - D2(D1(x_i))`.
pub fn lie_bracket(d1: &Derivation, d2: &Derivation) -> Result<Derivation, FieldError> {
    d1.same_variety(d2)?;
    let images: Vec<Polynomial> = d1
        .images
        .iter()
        .zip(&d2.images)
        .map(|(a1, a2)| &d1.apply(a2) - &d2.apply(a1))
        .collect();
    let x = &d1.variety;
    debug_assert!(
        x.defining().iter().all(|q| x.reduce(&leibniz(&images, q)).is_zero()),
        "bracket of tangent fields left the variety"
    );
    Ok(Derivation { variety: x.clone(), images })
}

impl PartialEq for Derivation {
    fn eq(&self, other: &Derivation) -> bool {
        self.variety.same_as(&other.variety) && self.images == other.images
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, (v, p)) in self.variety.ambient().vars().iter().zip(&self.images).enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v} -> {p}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Per-coordinate nilpotency indices: `indices[i]` is the least `k` with
/// `D^k(x_i) ≡ 0` in `C[X]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LndCertificate {
    indices: Vec<usize>,
}

impl LndCertificate {
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn max_index(&self) -> usize {
        self.indices.iter().copied().max().unwrap_or(0)
    }

    /// Re-runs the iteration and checks every index is exact.
    pub fn replay(&self, d: &Derivation) -> bool {
        if self.indices.len() != d.variety.arity() {
            return false;
        }
        self.indices.iter().enumerate().all(|(i, &n)| {
            let xi = Polynomial::var(d.variety.ambient(), i);
            d.apply_n(&xi, n).is_zero() && (n == 0 || !d.apply_n(&xi, n - 1).is_zero())
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum LndVerdict {
    Nilpotent(LndCertificate),
    Inconclusive(usize),
}

/// Iterates `D` on each ambient coordinate, at most `max_iter` times.
///
/// Locally nilpotent elements form a subalgebra, so nilpotency on the
/// generators certifies local nilpotency everywhere.
pub fn check_lnd(d: &Derivation, max_iter: usize) -> LndVerdict {
    let x = &d.variety;
    let mut indices = Vec::with_capacity(x.arity());
    for i in 0..x.arity() {
        let mut g = x.reduce(&Polynomial::var(x.ambient(), i));
        let mut k = 0;
        while !g.is_zero() {
            if k == max_iter {
                return LndVerdict::Inconclusive(max_iter);
            }
            g = d.apply(&g);
            k += 1;
        }
        indices.push(k);
    }
    LndVerdict::Nilpotent(LndCertificate { indices })
}

/// A derivation together with its nilpotency certificate.
#[derive(Clone, Debug, PartialEq)]
pub struct Lnd {
    derivation: Derivation,
    certificate: LndCertificate,
}

impl Lnd {
    pub fn certify(d: Derivation, max_iter: usize) -> Result<Lnd, FieldError> {
        match check_lnd(&d, max_iter) {
            LndVerdict::Nilpotent(certificate) => Ok(Lnd { derivation: d, certificate }),
            LndVerdict::Inconclusive(n) => Err(FieldError::Uncertified(n)),
        }
    }

    pub fn derivation(&self) -> &Derivation {
        &self.derivation
    }

    pub fn certificate(&self) -> &LndCertificate {
        &self.certificate
    }

    pub fn variety(&self) -> &Arc<AffineVariety> {
        &self.derivation.variety
    }
}

/// The shear `f·D`, requiring `D(f) ≡ 0`.
///
/// Since `(fD)^k = f^k D^k` when `D(f) = 0`, the base indices bound the new ones.
pub fn make_shear(base: &Lnd, f: &Polynomial) -> Result<Lnd, FieldError> {
    let residue = base.derivation.apply(f);
    if !residue.is_zero() {
        return Err(FieldError::ShearConditionViolated(residue));
    }
    let field = base.derivation.scale(f);
    match check_lnd(&field, base.certificate.max_index()) {
        LndVerdict::Nilpotent(certificate) => Ok(Lnd { derivation: field, certificate }),
        LndVerdict::Inconclusive(_) => Err(FieldError::Internal("shear exceeded base nilpotency bound".into())),
    }
}

/// An overshear `f·D` of an LND `D`: `a = D(f)` satisfies `D(a) ≡ 0`.
#[derive(Clone, Debug)]
pub struct OvershearField {
    base: Lnd,
    f: Polynomial,
    a: Polynomial,
}

impl OvershearField {
    pub fn base(&self) -> &Lnd {
        &self.base
    }

    pub fn multiplier(&self) -> &Polynomial {
        &self.f
    }

    /// `D(f)`, the rate of the exponential reparametrisation.
    pub fn rate(&self) -> &Polynomial {
        &self.a
    }

    pub fn is_shear(&self) -> bool {
        self.a.is_zero()
    }

    pub fn field(&self) -> Derivation {
        self.base.derivation.scale(&self.f)
    }

    pub fn describe(&self) -> String {
        format!("({}) * {}", self.f, self.base.derivation)
    }
}

pub fn make_overshear(base: &Lnd, f: &Polynomial) -> Result<OvershearField, FieldError> {
    let f = base.variety().reduce(f);
    let a = base.derivation.apply(&f);
    let residue = base.derivation.apply(&a);
    if !residue.is_zero() {
        return Err(FieldError::OvershearConditionViolated(residue));
    }
    Ok(OvershearField { base: base.clone(), f, a })
}
