//! Resolves `--bundle` / `--spec` inputs into one working context.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use lndlab::catalog::{bundle_by_spec, CatalogError, VarietyBundle};
use lndlab::fields::{make_overshear, AffineVariety, Derivation, FieldError, Lnd, OvershearField, DEFAULT_MAX_ITER};
use lndlab::idealquot::{MonomialOrder, OrderKind};
use lndlab::polyalg::parse_coeff;
use lndlab::{Coeff, PolyError, Polynomial, Ring};
use serde::Deserialize;

use crate::CliError;

/// Input document for `--spec`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub variety: VarietySpec,
    #[serde(default)]
    pub derivations: BTreeMap<String, DerivationSpec>,
    #[serde(default)]
    pub overshears: BTreeMap<String, OvershearSpec>,
    #[serde(default)]
    pub units: Vec<[String; 2]>,
    #[serde(default)]
    pub ideal_candidates: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VarietySpec {
    pub vars: Vec<String>,
    #[serde(default)]
    pub defining: Vec<String>,
    #[serde(default)]
    pub name: Option<String>,
    /// Variable precedence for the grevlex order.
    #[serde(default)]
    pub precedence: Option<Vec<String>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DerivationSpec {
    pub images: BTreeMap<String, String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OvershearSpec {
    pub base: String,
    pub f: String,
}

pub struct Context {
    pub variety: Arc<AffineVariety>,
    pub derivations: Vec<(String, Derivation)>,
    pub overshears: Vec<(String, OvershearField)>,
    pub units: Vec<(Polynomial, Polynomial)>,
    pub ideal_candidates: Vec<Polynomial>,
    pub pair_candidates: Vec<(String, String)>,
    pub flex_points: Vec<Vec<Coeff>>,
}

impl From<VarietyBundle> for Context {
    fn from(b: VarietyBundle) -> Context {
        Context {
            variety: b.variety,
            derivations: b.lnds.into_iter().map(|(n, l)| (n, l.derivation().clone())).collect(),
            overshears: b.overshear_samples,
            units: b.units,
            ideal_candidates: b.ideal_candidates,
            pair_candidates: b.pair_candidates,
            flex_points: b.flex_points,
        }
    }
}

impl From<CatalogError> for CliError {
    fn from(e: CatalogError) -> CliError {
        match e {
            CatalogError::Invalid { .. } => CliError::Internal(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

pub fn load(bundle: Option<&str>, spec: Option<&Path>) -> Result<Context, CliError> {
    match (bundle, spec) {
        (Some(b), None) => Ok(bundle_by_spec(b)?.into()),
        (None, Some(p)) => {
            let text = std::fs::read_to_string(p).map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?;
            let spec: SpecFile =
                serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?;
            from_spec(&spec)
        }
        (Some(_), Some(_)) => Err(CliError::Usage("give either --bundle or --spec, not both".into())),
        (None, None) => Err(CliError::Usage("this command needs --bundle or --spec".into())),
    }
}

pub fn from_spec(spec: &SpecFile) -> Result<Context, CliError> {
    let ring = Ring::new(&spec.variety.vars)?;
    let defining = spec
        .variety
        .defining
        .iter()
        .map(|s| lndlab::parse_poly(s, &ring))
        .collect::<Result<Vec<_>, _>>()?;
    let name = spec.variety.name.clone().unwrap_or_else(|| "spec".into());
    let variety = match &spec.variety.precedence {
        Some(prec) => {
            let names: Vec<&str> = prec.iter().map(String::as_str).collect();
            let order = MonomialOrder::with_precedence(OrderKind::Grevlex, &ring, &names)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            AffineVariety::with_order(&name, &ring, defining, order)?
        }
        None => AffineVariety::new(&name, &ring, defining)?,
    };
    let mut derivations = Vec::new();
    for (n, d) in &spec.derivations {
        let value = serde_json::json!({ "images": d.images });
        derivations.push((n.clone(), Derivation::from_json(&variety, &value)?));
    }
    let mut overshears = Vec::new();
    for (n, o) in &spec.overshears {
        let base = derivations
            .iter()
            .find(|(b, _)| *b == o.base)
            .map(|(_, d)| d.clone())
            .ok_or_else(|| CliError::Usage(format!("overshear {n}: unknown base `{}`", o.base)))?;
        let lnd = Lnd::certify(base, DEFAULT_MAX_ITER)
            .map_err(|e| CliError::Usage(format!("overshear {n}: base `{}`: {e}", o.base)))?;
        let f = variety.parse(&o.f)?;
        overshears.push((n.clone(), make_overshear(&lnd, &f).map_err(|e| CliError::Usage(format!("overshear {n}: {e}")))?));
    }
    let units = spec
        .units
        .iter()
        .map(|[f, g]| Ok((variety.parse(f)?, variety.parse(g)?)))
        .collect::<Result<Vec<_>, FieldError>>()?;
    let ideal_candidates = spec.ideal_candidates.iter().map(|s| variety.parse(s)).collect::<Result<Vec<_>, _>>()?;
    Ok(Context {
        variety,
        derivations,
        overshears,
        units,
        ideal_candidates,
        pair_candidates: Vec::new(),
        flex_points: Vec::new(),
    })
}

impl Context {
    /// A derivation by name, or else by comma-separated images.
    pub fn field(&self, key: &str) -> Result<Derivation, CliError> {
        if let Some((_, d)) = self.derivations.iter().find(|(n, _)| n == key) {
            return Ok(d.clone());
        }
        let images: Vec<&str> = key.split(',').map(str::trim).collect();
        if images.len() != self.variety.arity() {
            return Err(CliError::Usage(format!(
                "`{key}` is neither a known derivation ({}) nor a list of {} images",
                self.derivations.iter().map(|(n, _)| n.as_str()).collect::<Vec<_>>().join(", "),
                self.variety.arity()
            )));
        }
        Ok(Derivation::parse(&self.variety, &images)?)
    }

    pub fn lnd(&self, key: &str) -> Result<Lnd, CliError> {
        Lnd::certify(self.field(key)?, DEFAULT_MAX_ITER).map_err(|e| CliError::Usage(format!("{key}: {e}")))
    }

    pub fn poly(&self, src: &str) -> Result<Polynomial, CliError> {
        Ok(self.variety.parse(src)?)
    }

    pub fn point(&self, src: &str) -> Result<Vec<Coeff>, CliError> {
        let p = parse_point(src)?;
        if p.len() != self.variety.arity() {
            return Err(CliError::Usage(format!("point needs {} coordinates, got {}", self.variety.arity(), p.len())));
        }
        Ok(p)
    }
}

pub fn parse_point(src: &str) -> Result<Vec<Coeff>, CliError> {
    src.split(',').map(|s| Ok(parse_coeff(s.trim())?)).collect()
}

impl From<PolyError> for CliError {
    fn from(e: PolyError) -> CliError {
        CliError::Usage(e.to_string())
    }
}

impl From<FieldError> for CliError {
    fn from(e: FieldError) -> CliError {
        match e {
            FieldError::Internal(_) => CliError::Internal(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}
