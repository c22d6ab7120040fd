use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::fields::{lie_bracket, make_derivation, make_overshear, AffineVariety, Derivation, FieldError, Lnd, OvershearField};
use crate::polyalg::{Coeff, Monomial, Polynomial};

use super::kernel::kernel_basis;
use super::linalg::{rank, SparseVec, SpanBasis};
use super::{column_system, DensError};

/// A left-normed or general bracket expression in the generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LieWord {
    Gen(usize),
    Bracket(Box<LieWord>, Box<LieWord>),
}

impl LieWord {
    /// Number of generator letters; a word is never empty.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        match self {
            LieWord::Gen(_) => 1,
            LieWord::Bracket(a, b) => a.len() + b.len(),
        }
    }

    pub fn eval(&self, gens: &[OvershearField]) -> Result<Derivation, FieldError> {
        match self {
            LieWord::Gen(i) => Ok(gens[*i].field()),
            LieWord::Bracket(a, b) => lie_bracket(&a.eval(gens)?, &b.eval(gens)?),
        }
    }
}

impl fmt::Display for LieWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LieWord::Gen(i) => write!(f, "g{i}"),
            LieWord::Bracket(a, b) => write!(f, "[{a}, {b}]"),
        }
    }
}

/// A field in the saturated span, with the combination of words producing it.
#[derive(Clone, Debug)]
pub struct Witness {
    pub terms: Vec<(Coeff, LieWord)>,
    pub field: Derivation,
}

impl Witness {
    /// Re-evaluates the words and checks the combination exactly.
    pub fn replay(&self, gens: &[OvershearField]) -> bool {
        let mut acc = Derivation::zero(self.field.variety());
        for (c, w) in &self.terms {
            let Ok(d) = w.eval(gens) else { return false };
            acc = match acc.add(&d.scale_coeff(c)) {
                Ok(a) => a,
                Err(_) => return false,
            };
        }
        acc == self.field
    }
}

#[derive(Clone, Debug)]
pub struct SaturationReport {
    pub generators: Vec<String>,
    pub target_deg: u32,
    pub work_deg: u32,
    pub max_len: usize,
    pub span_dim: usize,
    pub target_dim: usize,
    pub certified: bool,
    pub witnesses: Vec<Witness>,
    pub words_tried: usize,
    pub words_discarded: usize,
}

impl SaturationReport {
    pub fn replay(&self, gens: &[OvershearField]) -> bool {
        self.witnesses.iter().all(|w| w.replay(gens))
    }

    pub fn to_json(&self) -> Value {
        let witnesses: Vec<Value> = self
            .witnesses
            .iter()
            .map(|w| {
                let comb: Vec<Value> =
                    w.terms.iter().map(|(c, word)| json!({"coeff": c.to_string(), "word": word.to_string()})).collect();
                json!({"combination": comb, "field": w.field.to_json()})
            })
            .collect();
        json!({
            "generators": self.generators,
            "target_deg": self.target_deg,
            "work_deg": self.work_deg,
            "max_len": self.max_len,
            "span_dim": self.span_dim,
            "target_dim": self.target_dim,
            "certified": self.certified,
            "witnesses": witnesses,
            "words_tried": self.words_tried,
            "words_discarded": self.words_discarded,
        })
    }
}

/// All overshears `f·D` with `f` running over a basis of `ker D²` in degree
/// at most `mult_deg`, for each given LND.
pub fn overshear_generators(lnds: &[Lnd], mult_deg: u32) -> Vec<OvershearField> {
    lnds.iter()
        .flat_map(|l| {
            kernel_basis(l.derivation(), 2, mult_deg)
                .into_iter()
                .map(move |f| make_overshear(l, f.rep()).expect("f is in ker D^2"))
        })
        .collect()
}

/// Dimension of the space of tangent derivations whose images have degree at
/// most `deg`, from the linear tangency system.
pub fn tangent_field_dim(x: &AffineVariety, deg: u32) -> usize {
    let monos = x.standard_monomials(deg);
    let n = x.arity();
    let mut cols = Vec::with_capacity(n * monos.len());
    for i in 0..n {
        let grads: Vec<Polynomial> = x.defining().iter().map(|q| q.partial(i)).collect();
        for m in &monos {
            cols.push(grads.iter().map(|g| x.reduce(&g.mul_term(m, &Coeff::from_int(1)))).collect());
        }
    }
    let rows = column_system(&cols);
    cols.len() - rank(&rows, cols.len())
}

/// Coordinates `(variable, standard monomial)` of fields up to `work_deg`,
/// high degrees first so echelon rows with a low pivot lie in the target space.
struct Coords {
    index: HashMap<(usize, Monomial), usize>,
    keys: Vec<(usize, Monomial)>,
    high: usize,
}

impl Coords {
    fn new(x: &AffineVariety, target_deg: u32, work_deg: u32) -> Coords {
        let mut keys = Vec::new();
        for m in x.standard_monomials(work_deg).into_iter().rev() {
            for i in 0..x.arity() {
                keys.push((i, m.clone()));
            }
        }
        let high = keys.iter().filter(|(_, m)| m.degree() > target_deg as u64).count();
        let index = keys.iter().cloned().enumerate().map(|(k, key)| (key, k)).collect();
        Coords { index, keys, high }
    }

    fn encode(&self, d: &Derivation) -> Option<SparseVec> {
        let mut v = SparseVec::new();
        for (i, p) in d.images().iter().enumerate() {
            for (m, c) in p.terms() {
                v.insert(*self.index.get(&(i, m.clone()))?, c.clone());
            }
        }
        Some(v)
    }

    fn decode(&self, x: &Arc<AffineVariety>, v: &SparseVec) -> Derivation {
        let ring = x.ambient();
        let mut images = vec![Polynomial::zero(ring); x.arity()];
        for (k, c) in v {
            let (i, m) = &self.keys[*k];
            images[*i] = &images[*i] + &Polynomial::term(ring, m.clone(), c.clone());
        }
        make_derivation(x, images).expect("span of tangent fields is tangent")
    }
}

/// Closes `gens` under left-normed brackets `[g, w]` up to length `max_len`,
/// keeping only fields whose images have degree at most `work_deg`, and
/// measures the part of the span with image degree at most `target_deg`.
///
/// At each length only words that enlarged the span are bracketed further;
/// dependent words are combinations of kept ones, so nothing is lost.
pub fn lie_saturate(
    x: &Arc<AffineVariety>,
    gens: &[OvershearField],
    target_deg: u32,
    work_deg: u32,
    max_len: usize,
) -> Result<SaturationReport, DensError> {
    if work_deg < target_deg {
        return Err(DensError::Precondition(format!("work_deg {work_deg} is below target_deg {target_deg}")));
    }
    if gens.iter().any(|g| !g.base().variety().same_as(x)) {
        return Err(DensError::VarietyMismatch);
    }
    let coords = Coords::new(x, target_deg, work_deg);
    let mut basis = SpanBasis::new();
    let mut words: Vec<LieWord> = Vec::new();
    let mut word_fields: Vec<Derivation> = Vec::new();
    let (mut tried, mut discarded) = (0, 0);

    let gen_fields: Vec<Derivation> = gens.iter().map(|g| g.field()).collect();
    let mut kept_gens = Vec::new();
    let mut frontier = Vec::new();
    if max_len >= 1 {
        for (i, d) in gen_fields.iter().enumerate() {
            tried += 1;
            let Some(v) = coords.encode(d) else {
                discarded += 1;
                continue;
            };
            if basis.insert(&v, words.len()) {
                kept_gens.push(i);
                frontier.push(words.len());
                words.push(LieWord::Gen(i));
                word_fields.push(d.clone());
            }
        }
    }
    for _ in 2..=max_len {
        if frontier.is_empty() {
            break;
        }
        let pairs: Vec<(usize, usize)> =
            kept_gens.iter().flat_map(|&g| frontier.iter().map(move |&w| (g, w))).collect();
        let brackets = pairs
            .par_iter()
            .map(|&(g, w)| lie_bracket(&gen_fields[g], &word_fields[w]))
            .collect::<Result<Vec<_>, _>>()?;
        let mut next = Vec::new();
        for ((g, w), d) in pairs.into_iter().zip(brackets) {
            tried += 1;
            let Some(v) = coords.encode(&d) else {
                discarded += 1;
                continue;
            };
            if basis.insert(&v, words.len()) {
                next.push(words.len());
                words.push(LieWord::Bracket(Box::new(LieWord::Gen(g)), Box::new(words[w].clone())));
                word_fields.push(d);
            }
        }
        frontier = next;
    }

    let witnesses: Vec<Witness> = basis
        .rows()
        .filter(|(pivot, _, _)| *pivot >= coords.high)
        .map(|(_, v, comb)| Witness {
            terms: comb.iter().map(|(t, c)| (c.clone(), words[*t].clone())).collect(),
            field: coords.decode(x, v),
        })
        .collect();
    let span_dim = witnesses.len();
    let target_dim = tangent_field_dim(x, target_deg);
    Ok(SaturationReport {
        generators: gens.iter().map(|g| g.describe()).collect(),
        target_deg,
        work_deg,
        max_len,
        span_dim,
        target_dim,
        certified: span_dim == target_dim,
        witnesses,
        words_tried: tried,
        words_discarded: discarded,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::DEFAULT_MAX_ITER;
    use crate::polyalg::Ring;

    fn space(vars: &[&str]) -> Arc<AffineVariety> {
        AffineVariety::affine_space("C", &Ring::of(vars)).unwrap()
    }

    fn coordinate_lnds(x: &Arc<AffineVariety>) -> Vec<Lnd> {
        (0..x.arity())
            .map(|i| Lnd::certify(Derivation::coordinate(x, i).unwrap(), DEFAULT_MAX_ITER).unwrap())
            .collect()
    }

    #[test]
    fn line_is_not_certified() {
        let x = space(&["z"]);
        let gens = overshear_generators(&coordinate_lnds(&x), 2);
        assert_eq!(gens.len(), 2);
        let rep = lie_saturate(&x, &gens, 2, 3, 4).unwrap();
        assert_eq!((rep.span_dim, rep.target_dim, rep.certified), (2, 3, false));
        assert!(rep.replay(&gens));
    }

    #[test]
    fn plane_certifies_affine_fields() {
        let x = space(&["x", "y"]);
        let gens = overshear_generators(&coordinate_lnds(&x), 3);
        let rep = lie_saturate(&x, &gens, 1, 4, 2).unwrap();
        assert_eq!(rep.target_dim, 6);
        assert_eq!(rep.span_dim, 6);
        assert!(rep.certified);
        assert!(rep.replay(&gens));
        assert_eq!(rep.to_json()["certified"], true);
    }

    #[test]
    fn empty_generators() {
        let x = space(&["x", "y"]);
        let rep = lie_saturate(&x, &[], 1, 1, 3).unwrap();
        assert_eq!(rep.span_dim, 0);
        assert!(!rep.certified);
    }

    #[test]
    fn bad_bounds_and_mismatch() {
        let x = space(&["x", "y"]);
        assert!(matches!(lie_saturate(&x, &[], 2, 1, 3), Err(DensError::Precondition(_))));
        let other = space(&["z"]);
        let gens = overshear_generators(&coordinate_lnds(&other), 1);
        assert!(matches!(lie_saturate(&x, &gens, 1, 1, 1), Err(DensError::VarietyMismatch)));
    }

    #[test]
    fn tangent_dims() {
        let r = Ring::of(&["a", "b", "c", "d"]);
        let sl2 = AffineVariety::new("SL2", &r, vec![crate::parse_poly("a*d - b*c - 1", &r).unwrap()]).unwrap();
        // D(ad - bc) is a nonzero linear form for every nonzero constant field
        assert_eq!(tangent_field_dim(&sl2, 0), 0);
        assert_eq!(tangent_field_dim(&space(&["x", "y"]), 2), 12);
    }
}
