use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::fields::{eval_flow, flow_lnd, lie_bracket, Derivation, FlowMap, Lnd};

use super::{PolyMap, TameError};

/// Anything that maps points of `C^n` to points of `C^n` numerically.
pub trait PointMap: Sync {
    fn arity(&self) -> usize;
    fn eval_point(&self, point: &[Complex64]) -> Result<Vec<Complex64>, TameError>;
}

impl PointMap for PolyMap {
    fn arity(&self) -> usize {
        PolyMap::arity(self)
    }

    fn eval_point(&self, point: &[Complex64]) -> Result<Vec<Complex64>, TameError> {
        self.eval(point)
    }
}

/// A flow frozen at a fixed time.
#[derive(Clone, Debug)]
pub struct FlowAt {
    pub flow: FlowMap,
    pub t: Complex64,
}

impl PointMap for FlowAt {
    fn arity(&self) -> usize {
        self.flow.variety().arity()
    }

    fn eval_point(&self, point: &[Complex64]) -> Result<Vec<Complex64>, TameError> {
        Ok(eval_flow(&self.flow, self.t, point)?)
    }
}

/// Real grid `center + radius·[-1, 1]` with `samples` points on each axis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub center: f64,
    pub radius: f64,
    pub samples: usize,
}

impl Default for Grid {
    fn default() -> Grid {
        Grid { center: 0.0, radius: 1.0, samples: 5 }
    }
}

impl Grid {
    fn axis(&self) -> Vec<f64> {
        match self.samples {
            0 => Vec::new(),
            1 => vec![self.center],
            n => (0..n).map(|j| self.center + self.radius * (2.0 * j as f64 / (n - 1) as f64 - 1.0)).collect(),
        }
    }

    pub fn points(&self, dim: usize) -> Vec<Vec<Complex64>> {
        let axis = self.axis();
        let mut pts: Vec<Vec<Complex64>> = vec![Vec::new()];
        for _ in 0..dim {
            pts = pts
                .into_iter()
                .flat_map(|p| {
                    axis.iter().map(move |&v| {
                        let mut q = p.clone();
                        q.push(Complex64::new(v, 0.0));
                        q
                    })
                })
                .collect();
        }
        pts
    }
}

/// Maximum over the grid of the max-norm difference of the two maps.
pub fn compare_on_grid(f: &dyn PointMap, g: &dyn PointMap, grid: &Grid) -> Result<f64, TameError> {
    if f.arity() != g.arity() {
        return Err(TameError::ArityMismatch { expected: f.arity(), got: g.arity() });
    }
    let devs = grid
        .points(f.arity())
        .par_iter()
        .map(|p| {
            let (a, b) = (f.eval_point(p)?, g.eval_point(p)?);
            Ok(a.iter().zip(&b).map(|(u, v)| (u - v).norm()).fold(0.0, f64::max))
        })
        .collect::<Result<Vec<f64>, TameError>>()?;
    Ok(devs.into_iter().fold(0.0, f64::max))
}

#[derive(Clone, Debug)]
pub struct BracketFdReport {
    pub t: f64,
    pub fd_vector: Vec<Complex64>,
    pub exact_vector: Vec<Complex64>,
    pub abs_error: f64,
}

impl BracketFdReport {
    pub fn to_json(&self) -> Value {
        let v = |xs: &[Complex64]| xs.iter().map(|z| json!([z.re, z.im])).collect::<Vec<_>>();
        json!({
            "t": self.t,
            "fd_vector": v(&self.fd_vector),
            "exact_vector": v(&self.exact_vector),
            "abs_error": self.abs_error,
        })
    }
}

/// Finite-difference approximation of `[Θ, Θ̃]` at `point` through the exact
/// flow `φ` of `Θ`: `(dφ_{-t}(φ_t x)·Θ̃(φ_t x) - Θ̃(x)) / t`, compared with the
/// symbolic bracket.
pub fn bracket_flow_check(
    theta: &Lnd,
    tilde: &Derivation,
    point: &[Complex64],
    t: f64,
) -> Result<BracketFdReport, TameError> {
    if t == 0.0 {
        return Err(TameError::ZeroStep);
    }
    let n = theta.variety().arity();
    if point.len() != n {
        return Err(TameError::ArityMismatch { expected: n, got: point.len() });
    }
    let exact = lie_bracket(theta.derivation(), tilde)?.evaluate(point)?;
    let flow = flow_lnd(theta);
    let moved = flow.eval(Complex64::new(t, 0.0), point)?;
    let along = tilde.evaluate(&moved)?;
    let mut at = moved.clone();
    at.push(Complex64::new(-t, 0.0));
    let mut fd = Vec::with_capacity(n);
    let base = tilde.evaluate(point)?;
    for (i, img) in flow.images().iter().enumerate() {
        let mut push = Complex64::new(0.0, 0.0);
        for (j, v) in along.iter().enumerate() {
            push += img.partial(j).evaluate(&at)? * v;
        }
        fd.push((push - base[i]) / t);
    }
    let abs_error = fd.iter().zip(&exact).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    Ok(BracketFdReport { t, fd_vector: fd, exact_vector: exact, abs_error })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{flow_lnd, make_shear, AffineVariety, DEFAULT_MAX_ITER};
    use crate::polyalg::{Coeff, Ring};
    use crate::tame::{jvdk_decompose, DEFAULT_MAX_STEPS};

    fn c(v: f64) -> Complex64 {
        Complex64::new(v, 0.0)
    }

    #[test]
    fn grid_shape() {
        let g = Grid::default();
        assert_eq!(g.points(2).len(), 25);
        assert_eq!(g.points(1)[0], vec![c(-1.0)]);
        assert_eq!(g.points(1)[4], vec![c(1.0)]);
    }

    #[test]
    fn comparisons() {
        let r = Ring::of(&["x", "y"]);
        let h = PolyMap::parse(&r, &["y", "x + y^2"]).unwrap();
        assert_eq!(compare_on_grid(&h, &h, &Grid::default()).unwrap(), 0.0);
        let fl = jvdk_decompose(&h, DEFAULT_MAX_STEPS).unwrap();
        assert!(compare_on_grid(&fl.compose(), &h, &Grid::default()).unwrap() <= 1e-12);

        let x = AffineVariety::affine_space("C2", &r).unwrap();
        let dy = Lnd::certify(Derivation::parse(&x, &["0", "1"]).unwrap(), DEFAULT_MAX_ITER).unwrap();
        let shear = make_shear(&dy, &x.parse("x^2").unwrap()).unwrap();
        let flow = FlowAt { flow: FlowMap::Polynomial(flow_lnd(&shear)), t: c(1.0) };
        let target = PolyMap::parse(&r, &["x", "y + x^2"]).unwrap();
        assert_eq!(compare_on_grid(&flow, &target, &Grid::default()).unwrap(), 0.0);
        assert_eq!(PolyMap::from_flow(flow.flow.as_polynomial().unwrap(), &Coeff::from_int(1)), target);

        let line = PolyMap::identity(&Ring::of(&["x"]));
        assert!(matches!(compare_on_grid(&h, &line, &Grid::default()), Err(TameError::ArityMismatch { .. })));
    }

    #[test]
    fn bracket_limits() {
        let r = Ring::of(&["x", "y"]);
        let x = AffineVariety::affine_space("C2", &r).unwrap();
        let dx = Lnd::certify(Derivation::parse(&x, &["1", "0"]).unwrap(), DEFAULT_MAX_ITER).unwrap();
        let dy = Derivation::parse(&x, &["0", "1"]).unwrap();
        let rep = bracket_flow_check(&dx, &dy, &[c(0.3), c(-2.0)], 1e-3).unwrap();
        assert_eq!(rep.abs_error, 0.0);

        let theta = Lnd::certify(Derivation::parse(&x, &["y", "0"]).unwrap(), DEFAULT_MAX_ITER).unwrap();
        let tilde = Derivation::parse(&x, &["0", "x"]).unwrap();
        let p = [c(1.0), c(1.0)];
        let e1 = bracket_flow_check(&theta, &tilde, &p, 1e-4).unwrap();
        let e2 = bracket_flow_check(&theta, &tilde, &p, 5e-5).unwrap();
        assert!(e1.abs_error <= 1e-3);
        assert!(e2.abs_error <= 0.6 * e1.abs_error);
        assert!((e1.exact_vector[0] - c(-1.0)).norm() < 1e-15);
        assert!(matches!(bracket_flow_check(&theta, &tilde, &p, 0.0), Err(TameError::ZeroStep)));
    }
}
