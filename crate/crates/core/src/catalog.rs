//! Built-in varieties with their certified LNDs, overshear samples, unit
//! witnesses and candidate data. Every bundle validates itself on
//! construction and names the failing item otherwise.

use std::sync::Arc;

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::denslab::verify_unit_witness;
use crate::fields::{make_overshear, AffineVariety, Derivation, FieldError, Lnd, OvershearField, DEFAULT_MAX_ITER};
use crate::idealquot::{MonomialOrder, OrderKind};
use crate::polyalg::{Coeff, Polynomial, Ring};

#[derive(Debug, Error, Clone)]
pub enum CatalogError {
    #[error("bundle {bundle}: item {item} failed validation: {reason}")]
    Invalid { bundle: String, item: String, reason: String },
    #[error("bad bundle spec `{0}`")]
    BadSpec(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Clone, Debug)]
pub struct VarietyBundle {
    pub name: String,
    pub variety: Arc<AffineVariety>,
    pub lnds: Vec<(String, Lnd)>,
    pub overshear_samples: Vec<(String, OvershearField)>,
    /// Pairs `(f, g)` with `f·g ≡ 1` and `f` nonconstant.
    pub units: Vec<(Polynomial, Polynomial)>,
    pub ideal_candidates: Vec<Polynomial>,
    /// Names of LND pairs worth testing for compatibility.
    pub pair_candidates: Vec<(String, String)>,
    pub flex_points: Vec<Vec<Coeff>>,
    pub notes: String,
}

/// Names accepted by [`bundle_by_spec`], with placeholders.
pub const BUNDLE_SPECS: [&str; 5] = ["cn:<n>", "danielewski:p=<poly>:n=<k>", "sl2", "gl2", "koras-russell"];

struct Builder {
    bundle: VarietyBundle,
}

impl Builder {
    fn new(name: &str, variety: Arc<AffineVariety>, notes: &str) -> Builder {
        Builder {
            bundle: VarietyBundle {
                name: name.to_string(),
                variety,
                lnds: Vec::new(),
                overshear_samples: Vec::new(),
                units: Vec::new(),
                ideal_candidates: Vec::new(),
                pair_candidates: Vec::new(),
                flex_points: Vec::new(),
                notes: notes.to_string(),
            },
        }
    }

    fn fail(&self, item: &str, reason: impl ToString) -> CatalogError {
        CatalogError::Invalid { bundle: self.bundle.name.clone(), item: item.to_string(), reason: reason.to_string() }
    }

    fn poly(&self, item: &str, src: &str) -> Result<Polynomial, CatalogError> {
        self.bundle.variety.parse(src).map_err(|e| self.fail(item, e))
    }

    fn lnd(&mut self, name: &str, images: &[&str]) -> Result<(), CatalogError> {
        let d = Derivation::parse(&self.bundle.variety, images).map_err(|e| self.fail(name, e))?;
        let l = Lnd::certify(d, DEFAULT_MAX_ITER).map_err(|e| self.fail(name, e))?;
        self.bundle.lnds.push((name.to_string(), l));
        Ok(())
    }

    fn overshear(&mut self, name: &str, base: &str, f: &str) -> Result<(), CatalogError> {
        let l = self.bundle.lnd(base).ok_or_else(|| self.fail(name, format!("unknown base {base}")))?.clone();
        let f = self.poly(name, f)?;
        let o = make_overshear(&l, &f).map_err(|e| self.fail(name, e))?;
        self.bundle.overshear_samples.push((name.to_string(), o));
        Ok(())
    }

    fn unit(&mut self, f: &str, g: &str) -> Result<(), CatalogError> {
        let item = format!("unit ({f}, {g})");
        let (pf, pg) = (self.poly(&item, f)?, self.poly(&item, g)?);
        if !verify_unit_witness(&self.bundle.variety, &pf, &pg) {
            return Err(self.fail(&item, "not a nonconstant unit"));
        }
        self.bundle.units.push((pf, pg));
        Ok(())
    }

    fn ideal(&mut self, src: &str) -> Result<(), CatalogError> {
        let p = self.poly("ideal candidate", src)?;
        if self.bundle.variety.reduce(&p).is_zero() {
            return Err(self.fail(src, "zero in the coordinate ring"));
        }
        self.bundle.ideal_candidates.push(p);
        Ok(())
    }

    fn pair(&mut self, a: &str, b: &str) -> Result<(), CatalogError> {
        if self.bundle.lnd(a).is_none() || self.bundle.lnd(b).is_none() {
            return Err(self.fail(&format!("pair ({a}, {b})"), "unknown LND"));
        }
        self.bundle.pair_candidates.push((a.to_string(), b.to_string()));
        Ok(())
    }

    fn point(&mut self, coords: Vec<Coeff>) -> Result<(), CatalogError> {
        let item = format!("point {:?}", coords.iter().map(|c| c.to_string()).collect::<Vec<_>>());
        if !self.bundle.variety.contains_point(&coords).map_err(|e| self.fail(&item, e))? {
            return Err(self.fail(&item, "not on the variety"));
        }
        self.bundle.flex_points.push(coords);
        Ok(())
    }

    fn finish(self) -> VarietyBundle {
        self.bundle
    }
}

impl VarietyBundle {
    pub fn lnd(&self, name: &str) -> Option<&Lnd> {
        self.lnds.iter().find(|(n, _)| n == name).map(|(_, l)| l)
    }

    pub fn overshear(&self, name: &str) -> Option<&OvershearField> {
        self.overshear_samples.iter().find(|(n, _)| n == name).map(|(_, o)| o)
    }

    pub fn lnd_names(&self) -> Vec<&str> {
        self.lnds.iter().map(|(n, _)| n.as_str()).collect()
    }

    pub fn to_json(&self) -> Value {
        let x = &self.variety;
        let lnds: Map<String, Value> = self
            .lnds
            .iter()
            .map(|(n, l)| {
                let cert = l.certificate().indices().to_vec();
                (n.clone(), json!({"images": l.derivation().to_json()["images"].clone(), "indices": cert}))
            })
            .collect();
        let overshears: Map<String, Value> = self
            .overshear_samples
            .iter()
            .map(|(n, o)| {
                let base = self.lnds.iter().find(|(_, l)| l == o.base()).map(|(b, _)| b.clone());
                (n.clone(), json!({"base": base, "f": o.multiplier().to_string(), "rate": o.rate().to_string()}))
            })
            .collect();
        let s = |p: &Polynomial| p.to_string();
        json!({
            "name": self.name,
            "vars": x.ambient().vars(),
            "defining": x.defining().iter().map(s).collect::<Vec<_>>(),
            "lnds": lnds,
            "overshears": overshears,
            "units": self.units.iter().map(|(f, g)| vec![s(f), s(g)]).collect::<Vec<_>>(),
            "ideal_candidates": self.ideal_candidates.iter().map(s).collect::<Vec<_>>(),
            "pair_candidates": self.pair_candidates.iter().map(|(a, b)| vec![a, b]).collect::<Vec<_>>(),
            "flex_points": self
                .flex_points
                .iter()
                .map(|p| p.iter().map(|c| c.to_string()).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
            "notes": self.notes,
        })
    }
}

fn coords(vals: &[i64]) -> Vec<Coeff> {
    vals.iter().map(|&v| Coeff::from_int(v)).collect()
}

fn space_vars(n: usize) -> Vec<String> {
    match n {
        1 => vec!["z".into()],
        2 => vec!["x".into(), "y".into()],
        3 => vec!["x".into(), "y".into(), "z".into()],
        _ => (1..=n).map(|i| format!("z{i}")).collect(),
    }
}

/// `C^n` with the coordinate LNDs `d<var>`.
pub fn affine_space(n: usize) -> Result<VarietyBundle, CatalogError> {
    if n == 0 {
        return Err(CatalogError::BadSpec("cn:0".into()));
    }
    let vars = space_vars(n);
    let ring = Ring::new(&vars).map_err(FieldError::from)?;
    let name = format!("cn:{n}");
    let x = AffineVariety::affine_space(&format!("C{n}"), &ring)?;
    let mut b = Builder::new(&name, x, "Affine space with the coordinate derivations.");
    for (i, v) in vars.iter().enumerate() {
        let images: Vec<&str> = (0..n).map(|j| if i == j { "1" } else { "0" }).collect();
        b.lnd(&format!("d{v}"), &images)?;
    }
    let last = &vars[n - 1];
    if n == 1 {
        b.overshear(&format!("{last}d{last}"), &format!("d{last}"), last)?;
    } else {
        let first = &vars[0];
        b.overshear(&format!("{first}2d{last}"), &format!("d{last}"), &format!("{first}^2"))?;
        b.overshear(&format!("{first}{last}d{last}"), &format!("d{last}"), &format!("{first}*{last}"))?;
        b.pair(&format!("d{first}"), &format!("d{}", vars[1]))?;
    }
    b.ideal("1")?;
    b.point(coords(&vec![0; n]))?;
    b.point(coords(&vec![1; n]))?;
    Ok(b.finish())
}

/// The hypersurface `uv = p(z)` in variables `(z…, u, v)`, where `p` is
/// written in `z` (for `n = 1`) or `z1..zn`.
pub fn danielewski(p: &str, n: usize) -> Result<VarietyBundle, CatalogError> {
    if n == 0 {
        return Err(CatalogError::BadSpec(format!("danielewski:p={p}:n=0")));
    }
    let zs: Vec<String> = if n == 1 { vec!["z".into()] } else { (1..=n).map(|i| format!("z{i}")).collect() };
    let mut vars = zs.clone();
    vars.extend(["u".to_string(), "v".to_string()]);
    let ring = Ring::new(&vars).map_err(FieldError::from)?;
    let name = format!("danielewski:p={p}:n={n}");
    let pz = crate::parse_poly(p, &ring).map_err(|e| CatalogError::BadSpec(format!("{name}: {e}")))?;
    if pz.is_constant() {
        return Err(CatalogError::BadSpec(format!("{name}: p must be nonconstant")));
    }
    if !pz.partial(n).is_zero() || !pz.partial(n + 1).is_zero() {
        return Err(CatalogError::BadSpec(format!("{name}: p must only involve {}", zs.join(", "))));
    }
    let uv = &Polynomial::var(&ring, n) * &Polynomial::var(&ring, n + 1);
    let mut prec: Vec<&str> = vec!["u", "v"];
    prec.extend(zs.iter().map(String::as_str));
    let order = MonomialOrder::with_precedence(OrderKind::Grevlex, &ring, &prec).map_err(FieldError::from)?;
    let x = AffineVariety::with_order(&format!("Danielewski uv = {pz}"), &ring, vec![&uv - &pz], order)?;
    let notes = "Hypersurface uv = p(z). The bundled fields send z_i to u (resp. v) and v (resp. u) to the \
                 partial derivative of p in z_i. The variant that sends z_i to -u and u to that derivative \
                 is not tangent to uv - p, so it is not included.";
    let mut b = Builder::new(&name, x, notes);
    let suffix = |i: usize| if n == 1 { String::new() } else { (i + 1).to_string() };
    for i in 0..n {
        let dp = pz.partial(i).to_string();
        let mut img_u: Vec<String> = vec!["0".into(); n + 2];
        img_u[i] = "u".into();
        img_u[n + 1] = dp.clone();
        let mut img_v: Vec<String> = vec!["0".into(); n + 2];
        img_v[i] = "v".into();
        img_v[n] = dp;
        b.lnd(&format!("theta{}u", suffix(i)), &img_u.iter().map(String::as_str).collect::<Vec<_>>())?;
        b.lnd(&format!("theta{}v", suffix(i)), &img_v.iter().map(String::as_str).collect::<Vec<_>>())?;
    }
    let t1 = format!("theta{}u", suffix(0));
    b.overshear(&format!("{}*{t1}", zs[0]), &t1, &zs[0])?;
    b.overshear(&format!("u*{t1}"), &t1, "u")?;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                b.pair(&format!("theta{}u", suffix(i)), &format!("theta{}v", suffix(j)))?;
            }
        }
    }
    b.ideal(&format!("u*{}", zs[0]))?;
    let p0 = pz.evaluate_exact(&vec![Coeff::from_int(0); n + 2]).map_err(FieldError::from)?;
    let mut pt = vec![Coeff::from_int(0); n];
    pt.extend([Coeff::from_int(1), p0]);
    b.point(pt)?;
    Ok(b.finish())
}

const MATRIX_LNDS: [(&str, [&str; 4]); 4] = [
    ("Ae12", ["0", "a", "0", "c"]),
    ("Ae21", ["b", "0", "d", "0"]),
    ("e12A", ["c", "d", "0", "0"]),
    ("e21A", ["0", "0", "a", "b"]),
];

/// `SL_2 = {ad - bc = 1}` with the one-sided unipotent fields and `E'·A`
/// for the nilpotent `E' = [[1, -1], [1, -1]]`.
pub fn sl2() -> Result<VarietyBundle, CatalogError> {
    let ring = Ring::of(&["a", "b", "c", "d"]);
    let q = crate::parse_poly("a*d - b*c - 1", &ring).map_err(FieldError::from)?;
    let x = AffineVariety::new("SL2", &ring, vec![q])?;
    let notes = "Matrices [[a, b], [c, d]] of determinant 1. Ae12 is A -> A*e12 and e12A is A -> e12*A; \
                 EpA is A -> E'*A with E' = [[1, -1], [1, -1]].";
    let mut b = Builder::new("sl2", x, notes);
    for (name, images) in MATRIX_LNDS {
        b.lnd(name, &images)?;
    }
    b.lnd("EpA", &["a - c", "b - d", "a - c", "b - d"])?;
    b.overshear("b*Ae12", "Ae12", "b")?;
    b.overshear("a*Ae12", "Ae12", "a")?;
    b.pair("Ae12", "Ae21")?;
    b.ideal("1")?;
    b.point(coords(&[1, 0, 0, 1]))?;
    b.point(coords(&[2, 1, 1, 1]))?;
    Ok(b.finish())
}

/// `GL_2` as `{w(ad - bc) = 1}`, with the unipotent fields extended by `w ↦ 0`
/// and the determinant unit.
pub fn gl2() -> Result<VarietyBundle, CatalogError> {
    let ring = Ring::of(&["a", "b", "c", "d", "w"]);
    let q = crate::parse_poly("w*(a*d - b*c) - 1", &ring).map_err(FieldError::from)?;
    let x = AffineVariety::new("GL2", &ring, vec![q])?;
    let notes = "Matrices [[a, b], [c, d]] with w the inverse determinant. The determinant is a nonconstant unit.";
    let mut b = Builder::new("gl2", x, notes);
    for (name, images) in MATRIX_LNDS {
        let mut ext = images.to_vec();
        ext.push("0");
        b.lnd(name, &ext)?;
    }
    b.overshear("b*Ae12", "Ae12", "b")?;
    b.overshear("a*Ae12", "Ae12", "a")?;
    b.unit("a*d - b*c", "w")?;
    b.pair("Ae12", "Ae21")?;
    b.ideal("1")?;
    b.point(coords(&[1, 0, 0, 1, 1]))?;
    Ok(b.finish())
}

/// The cubic `x + x²y + u² + v³ = 0`; both bundled LNDs kill `x`.
pub fn koras_russell() -> Result<VarietyBundle, CatalogError> {
    let ring = Ring::of(&["x", "y", "u", "v"]);
    let q = crate::parse_poly("x + x^2*y + u^2 + v^3", &ring).map_err(FieldError::from)?;
    let x = AffineVariety::new("Koras-Russell", &ring, vec![q])?;
    let notes = "Both bundled LNDs annihilate x. This is a finite check on two fields, not a statement \
                 about all LNDs of the cubic.";
    let mut b = Builder::new("koras-russell", x, notes);
    b.lnd("D1", &["0", "-3*v^2", "0", "x^2"])?;
    b.lnd("D2", &["0", "-2*u", "x^2", "0"])?;
    b.overshear("v*D1", "D1", "v")?;
    b.overshear("x*D1", "D1", "x")?;
    b.pair("D1", "D2")?;
    b.ideal("x")?;
    b.point(coords(&[0, 0, 0, 0]))?;
    b.point(coords(&[-1, 0, 1, 0]))?;
    Ok(b.finish())
}

/// Resolves `cn:N`, `danielewski:p=<poly>:n=<k>`, `sl2`, `gl2` or `koras-russell`.
pub fn bundle_by_spec(spec: &str) -> Result<VarietyBundle, CatalogError> {
    let bad = || CatalogError::BadSpec(spec.to_string());
    match spec {
        "sl2" => return sl2(),
        "gl2" => return gl2(),
        "koras-russell" => return koras_russell(),
        _ => {}
    }
    if let Some(n) = spec.strip_prefix("cn:") {
        return affine_space(n.parse().map_err(|_| bad())?);
    }
    if let Some(rest) = spec.strip_prefix("danielewski:") {
        let rest = rest.strip_prefix("p=").ok_or_else(bad)?;
        let (p, n) = match rest.rsplit_once(":n=") {
            Some((p, n)) => (p, n.parse().map_err(|_| bad())?),
            None => (rest, 1),
        };
        return danielewski(p, n);
    }
    Err(bad())
}
