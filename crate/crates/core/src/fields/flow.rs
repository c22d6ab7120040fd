//! Flows of LNDs (exact, polynomial in time) and of overshears (polynomial
//! flow of the base field along a reparametrised time).

use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::idealquot::GroebnerBasis;
use crate::polyalg::{Coeff, Polynomial, Ring};

use super::{AffineVariety, FieldError, Lnd, OvershearField};

/// `exp(tD)` for an LND `D`: `x_i ↦ Σ_{k<n_i} t^k D^k(x_i) / k!`.
#[derive(Clone, Debug)]
pub struct PolynomialFlow {
    variety: Arc<AffineVariety>,
    /// Ambient variables followed by the time symbol.
    ring: Ring,
    images: Vec<Polynomial>,
}

/// Flow of an overshear `f·D`: the base flow in time `s`, evaluated at
/// `s = f(x)·t·φ1(a(x)·t)` with `φ1(w) = (e^w - 1)/w`.
#[derive(Clone, Debug)]
pub struct HybridFlow {
    base: PolynomialFlow,
    f: Polynomial,
    a: Polynomial,
}

#[derive(Clone, Debug)]
pub enum FlowMap {
    Polynomial(PolynomialFlow),
    Hybrid(HybridFlow),
}

fn factorial(k: usize) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, j| acc * BigInt::from(j))
}

fn flow_in(lnd: &Lnd, time: &str) -> PolynomialFlow {
    let x = lnd.variety();
    let ring = x.ambient().extend(&[time]).expect("time symbol is reserved");
    let t = Polynomial::var(&ring, x.arity());
    let d = lnd.derivation();
    let images = (0..x.arity())
        .map(|i| {
            let mut acc = Polynomial::zero(&ring);
            let mut g = x.reduce(&Polynomial::var(x.ambient(), i));
            let mut k = 0;
            while !g.is_zero() {
                let c = Coeff::from_rational(BigRational::new(BigInt::one(), factorial(k)));
                let term = &g.embed(&ring).expect("ambient embeds") * &t.pow(k as u32);
                acc = &acc + &term.scale(&c);
                g = d.apply(&g);
                k += 1;
            }
            acc
        })
        .collect();
    PolynomialFlow { variety: x.clone(), ring, images }
}

/// Exact flow of a certified LND, in formal time `t`.
pub fn flow_lnd(lnd: &Lnd) -> PolynomialFlow {
    flow_in(lnd, "t")
}

/// Flow of an overshear. A shear (`a ≡ 0`) degrades to the polynomial flow
/// with `s = f·t`.
pub fn flow_overshear(o: &OvershearField) -> FlowMap {
    let base = flow_in(o.base(), "s");
    if !o.is_shear() {
        return FlowMap::Hybrid(HybridFlow { base, f: o.multiplier().clone(), a: o.rate().clone() });
    }
    let x = base.variety.clone();
    let ring = x.ambient().extend(&["t"]).expect("time symbol is reserved");
    let t = Polynomial::var(&ring, x.arity());
    let mut subst: Vec<Polynomial> = (0..x.arity()).map(|i| Polynomial::var(&ring, i)).collect();
    subst.push(&o.multiplier().embed(&ring).expect("ambient embeds") * &t);
    let gb = x.gb().extend_to(&ring).expect("extension by time");
    let images = base
        .images
        .iter()
        .map(|p| gb.normal_form(&p.substitute(&subst).expect("same target ring")))
        .collect();
    FlowMap::Polynomial(PolynomialFlow { variety: x, ring, images })
}

impl PolynomialFlow {
    pub fn variety(&self) -> &Arc<AffineVariety> {
        &self.variety
    }

    /// Ambient ring extended by the time variable (last).
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn time_symbol(&self) -> &str {
        self.ring.var_name(self.variety.arity())
    }

    pub fn images(&self) -> &[Polynomial] {
        &self.images
    }

    fn extended_gb(&self) -> GroebnerBasis {
        self.variety.gb().extend_to(&self.ring).expect("extension by time")
    }

    /// Images at an exact time, as polynomials in the ambient ring.
    pub fn at_time(&self, t: &Coeff) -> Vec<Polynomial> {
        let amb = self.variety.ambient();
        let mut subst: Vec<Polynomial> = (0..amb.arity()).map(|i| Polynomial::var(amb, i)).collect();
        subst.push(Polynomial::constant(amb, t.clone()));
        self.images.iter().map(|p| p.substitute(&subst).expect("same target ring")).collect()
    }

    pub fn eval(&self, t: Complex64, point: &[Complex64]) -> Result<Vec<Complex64>, FieldError> {
        if point.len() != self.variety.arity() {
            return Err(FieldError::ArityMismatch { expected: self.variety.arity(), got: point.len() });
        }
        let mut full = point.to_vec();
        full.push(t);
        self.images.iter().map(|p| Ok(p.evaluate(&full)?)).collect()
    }

    /// Symbolic check that `q ∘ φ_t` lies in the ideal (extended by `t`) for
    /// every defining polynomial `q`.
    pub fn preserves_ideal(&self) -> bool {
        let gb = self.extended_gb();
        self.variety.defining().iter().all(|q| {
            let composed = q.substitute(&self.images).expect("images share the time ring");
            gb.in_ideal(&composed)
        })
    }

    /// `φ_t ∘ φ_s == φ_{t+s}` modulo the ideal, with two formal times.
    pub fn group_law_holds(&self) -> bool {
        let n = self.variety.arity();
        let two = match self.variety.ambient().extend(&["t", "s"]) {
            Ok(r) => r,
            Err(_) => return false,
        };
        let gb = self.variety.gb().extend_to(&two).expect("extension by times");
        let var = |i| Polynomial::var(&two, i);
        // φ_s: rename time to s
        let mut to_s: Vec<Polynomial> = (0..n).map(var).collect();
        to_s.push(var(n + 1));
        let phi_s: Vec<Polynomial> =
            self.images.iter().map(|p| p.substitute(&to_s).expect("same ring")).collect();
        // φ_t evaluated at φ_s(x)
        let mut outer = phi_s.clone();
        outer.push(var(n));
        // φ_{t+s}
        let mut sum: Vec<Polynomial> = (0..n).map(var).collect();
        sum.push(&var(n) + &var(n + 1));
        self.images.iter().all(|p| {
            let lhs = p.substitute(&outer).expect("same ring");
            let rhs = p.substitute(&sum).expect("same ring");
            gb.in_ideal(&(&lhs - &rhs))
        })
    }

    pub fn is_identity_at_zero(&self) -> bool {
        let amb = self.variety.ambient();
        self.at_time(&Coeff::zero())
            .iter()
            .enumerate()
            .all(|(i, p)| *p == Polynomial::var(amb, i))
    }

    /// Images rendered in the polynomial grammar.
    pub fn render(&self) -> Vec<String> {
        self.images.iter().map(|p| p.to_string()).collect()
    }
}

/// `(e^w - 1)/w`, with `φ1(0) = 1`.
pub fn phi1(w: Complex64) -> Complex64 {
    if w.norm() < 1e-8 {
        return Complex64::new(1.0, 0.0) + w / 2.0 + w * w / 6.0;
    }
    expm1(w) / w
}

/// `e^w - 1` without cancellation for small `|w|`.
fn expm1(w: Complex64) -> Complex64 {
    let (x, y) = (w.re, w.im);
    let half = (y / 2.0).sin();
    Complex64::new(x.exp_m1() * y.cos() - 2.0 * half * half, x.exp() * y.sin())
}

impl HybridFlow {
    pub fn base(&self) -> &PolynomialFlow {
        &self.base
    }

    pub fn multiplier(&self) -> &Polynomial {
        &self.f
    }

    pub fn rate(&self) -> &Polynomial {
        &self.a
    }

    /// Reparametrised base time `s(t, x) = f(x)·t·φ1(a(x)·t)`.
    pub fn base_time(&self, t: Complex64, point: &[Complex64]) -> Result<Complex64, FieldError> {
        let f = self.f.evaluate(point)?;
        let a = self.a.evaluate(point)?;
        Ok(f * t * phi1(a * t))
    }

    pub fn eval(&self, t: Complex64, point: &[Complex64]) -> Result<Vec<Complex64>, FieldError> {
        let n = self.base.variety.arity();
        if point.len() != n {
            return Err(FieldError::ArityMismatch { expected: n, got: point.len() });
        }
        let s = self.base_time(t, point)?;
        self.base.eval(s, point)
    }
}

impl FlowMap {
    pub fn variety(&self) -> &Arc<AffineVariety> {
        match self {
            FlowMap::Polynomial(p) => &p.variety,
            FlowMap::Hybrid(h) => &h.base.variety,
        }
    }

    pub fn as_polynomial(&self) -> Option<&PolynomialFlow> {
        match self {
            FlowMap::Polynomial(p) => Some(p),
            FlowMap::Hybrid(_) => None,
        }
    }
}

/// Numeric image of `point` under the flow at time `t`.
pub fn eval_flow(flow: &FlowMap, t: Complex64, point: &[Complex64]) -> Result<Vec<Complex64>, FieldError> {
    match flow {
        FlowMap::Polynomial(p) => p.eval(t, point),
        FlowMap::Hybrid(h) => h.eval(t, point),
    }
}
