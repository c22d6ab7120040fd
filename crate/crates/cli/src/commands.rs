use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use lndlab::catalog::{bundle_by_spec, BUNDLE_SPECS};
use lndlab::denslab::{
    check_compatible_pair, flexible_at, lie_saturate, lnd_annihilates_units, overshear_generators,
    verify_unit_witness, DensError,
};
use lndlab::fields::{
    check_lnd, flow_lnd, flow_overshear, lie_bracket, make_overshear, make_shear, Derivation, FieldError, FlowMap,
    Lnd, LndVerdict,
};
use lndlab::idealquot::{groebner, MonomialOrder, OrderKind};
use lndlab::polyalg::{is_identifier, parse_coeff};
use lndlab::tame::{bracket_flow_check, compare_on_grid, jvdk_decompose, FlowAt, Grid, PointMap, PolyMap, TameError};
use lndlab::{Coeff, Polynomial, Ring};

use crate::input::{self, Context};
use crate::{BundleAction, Cli, CliError, Command, Input, Outcome};

fn ctx(i: &Input) -> Result<Context, CliError> {
    input::load(i.bundle.as_deref(), i.spec.as_deref())
}

fn has_input(i: &Input) -> bool {
    i.bundle.is_some() || i.spec.is_some()
}

fn outcome(verdict: bool, body: Value) -> Result<Outcome, CliError> {
    match body {
        Value::Object(body) => Ok(Outcome { verdict, body }),
        _ => Err(CliError::Internal("report body is not an object".into())),
    }
}

fn images_json(d: &Derivation) -> Value {
    d.to_json()["images"].clone()
}

fn complex_vec(v: &[Complex64]) -> Value {
    Value::Array(v.iter().map(|z| json!([z.re, z.im])).collect())
}

fn dens_err(e: DensError) -> CliError {
    match e {
        DensError::Field(f) => f.into(),
        other => CliError::Usage(other.to_string()),
    }
}

fn tame_err(e: TameError) -> CliError {
    match e {
        TameError::Internal(m) => CliError::Internal(m),
        other => CliError::Usage(other.to_string()),
    }
}

/// Exact rational/Gaussian time when it parses as one, else a float.
enum Time {
    Exact(Coeff),
    Float(f64),
}

fn parse_time(src: &str) -> Result<Time, CliError> {
    if let Ok(c) = parse_coeff(src) {
        return Ok(Time::Exact(c));
    }
    src.trim().parse::<f64>().map(Time::Float).map_err(|_| CliError::Usage(format!("bad time `{src}`")))
}

impl Time {
    fn complex(&self) -> Complex64 {
        match self {
            Time::Exact(c) => c.to_complex(),
            Time::Float(f) => Complex64::new(*f, 0.0),
        }
    }
}

fn infer_vars(src: &str) -> Vec<String> {
    let mut vars: Vec<String> = Vec::new();
    let mut cur = String::new();
    for ch in src.chars().chain(std::iter::once(' ')) {
        if ch.is_ascii_alphanumeric() || ch == '_' {
            cur.push(ch);
        } else {
            if is_identifier(&cur) && cur != "I" && !vars.contains(&cur) {
                vars.push(cur.clone());
            }
            cur.clear();
        }
    }
    vars
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Parse { poly, vars, input } => {
            let (ring, variety) = if has_input(input) {
                let c = ctx(input)?;
                (c.variety.ambient().clone(), Some(c.variety))
            } else {
                let vars = vars.clone().unwrap_or_else(|| infer_vars(poly));
                (Ring::new(&vars)?, None)
            };
            let p = lndlab::parse_poly(poly, &ring)?;
            let mut body = json!({
                "poly": p.to_string(),
                "vars": ring.vars(),
                "degree": p.degree(),
                "terms": p.num_terms(),
            });
            if let Some(x) = variety {
                body["normal_form"] = Value::from(x.reduce(&p).to_string());
            }
            outcome(true, body)
        }
        Command::Gb { input, vars, gens, order, precedence } => {
            let (ring, polys) = if has_input(input) {
                let c = ctx(input)?;
                (c.variety.ambient().clone(), c.variety.defining().to_vec())
            } else {
                let vars = vars.clone().unwrap_or_else(|| infer_vars(&gens.join(" ")));
                let ring = Ring::new(&vars)?;
                let polys = gens.iter().map(|g| lndlab::parse_poly(g, &ring)).collect::<Result<Vec<_>, _>>()?;
                (ring, polys)
            };
            let kind = match order.as_str() {
                "grevlex" => OrderKind::Grevlex,
                "lex" => OrderKind::Lex,
                other => return Err(CliError::Usage(format!("unknown order `{other}`"))),
            };
            let names: Vec<&str> = match precedence {
                Some(p) => p.iter().map(String::as_str).collect(),
                None => ring.vars().iter().map(String::as_str).collect(),
            };
            let ord = MonomialOrder::with_precedence(kind, &ring, &names).map_err(|e| CliError::Usage(e.to_string()))?;
            let gb = groebner(&polys, &ord).map_err(|e| CliError::Usage(e.to_string()))?;
            if !gb.verify() {
                return Err(CliError::Internal("computed basis fails the Buchberger criterion".into()));
            }
            let basis: Vec<String> = gb.gens().iter().map(|p| p.to_string()).collect();
            outcome(true, json!({ "basis": basis, "order": order, "precedence": names, "verified": true }))
        }
        Command::CheckLnd { input, derivation, max_iter } => {
            let c = ctx(input)?;
            let d = c.field(derivation)?;
            let vars = c.variety.ambient().vars();
            match check_lnd(&d, *max_iter) {
                LndVerdict::Nilpotent(cert) => {
                    let indices: Map<String, Value> =
                        vars.iter().cloned().zip(cert.indices().iter().map(|&i| Value::from(i))).collect();
                    if !cert.replay(&d) {
                        return Err(CliError::Internal("certificate does not replay".into()));
                    }
                    outcome(true, json!({"derivation": images_json(&d), "result": "Nilpotent", "indices": indices}))
                }
                LndVerdict::Inconclusive(n) => outcome(
                    false,
                    json!({"derivation": images_json(&d), "result": "Inconclusive", "max_iter": n}),
                ),
            }
        }
        Command::Bracket { input, left, right } => {
            let c = ctx(input)?;
            let b = lie_bracket(&c.field(left)?, &c.field(right)?)?;
            outcome(true, json!({"bracket": images_json(&b), "is_zero": b.is_zero()}))
        }
        Command::Shear { input, derivation, f } => {
            let c = ctx(input)?;
            let base = c.lnd(derivation)?;
            match make_shear(&base, &c.poly(f)?) {
                Ok(s) => outcome(
                    true,
                    json!({"field": images_json(s.derivation()), "indices": s.certificate().indices()}),
                ),
                Err(FieldError::ShearConditionViolated(r)) => {
                    outcome(false, json!({"error": "shear condition violated", "residue": r.to_string()}))
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Overshear { input, derivation, f } => {
            let c = ctx(input)?;
            let base = c.lnd(derivation)?;
            match make_overshear(&base, &c.poly(f)?) {
                Ok(o) => outcome(
                    true,
                    json!({
                        "field": images_json(&o.field()),
                        "multiplier": o.multiplier().to_string(),
                        "rate": o.rate().to_string(),
                        "is_shear": o.is_shear(),
                    }),
                ),
                Err(FieldError::OvershearConditionViolated(r)) => {
                    outcome(false, json!({"error": "overshear condition violated", "residue": r.to_string()}))
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Flow { input, derivation, f, time, at } => flow(&ctx(input)?, derivation, f.as_deref(), time.as_deref(), at.as_deref()),
        Command::Flex { input, at, derivations, random } => {
            let c = ctx(input)?;
            let fields: Vec<Derivation> = match derivations {
                Some(names) => names.iter().map(|n| c.field(n)).collect::<Result<_, _>>()?,
                None => c.derivations.iter().map(|(_, d)| d.clone()).collect(),
            };
            let mut points = match at {
                Some(p) => vec![c.point(p)?],
                None => c.flex_points.clone(),
            };
            if *random > 0 {
                if !c.variety.defining().is_empty() {
                    return Err(CliError::Usage("--random needs an affine space".into()));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
                for _ in 0..*random {
                    points.push(
                        (0..c.variety.arity())
                            .map(|_| Coeff::from_ratio(rng.gen_range(-20..=20), rng.gen_range(1..=9)))
                            .collect(),
                    );
                }
            }
            if points.is_empty() {
                return Err(CliError::Usage("no points: pass --at".into()));
            }
            let mut reports = Vec::new();
            let mut all = true;
            for p in &points {
                let r = flexible_at(&c.variety, &fields, p).map_err(dens_err)?;
                all &= r.spans;
                reports.push(r.to_json());
            }
            outcome(all, json!({"reports": reports, "spans": all}))
        }
        Command::Saturate { input, gen_deg, target_deg, work_deg, max_len, derivations } => {
            let c = ctx(input)?;
            let lnds: Vec<Lnd> = match derivations {
                Some(names) => names.iter().map(|n| c.lnd(n)).collect::<Result<_, _>>()?,
                None => c.derivations.iter().filter_map(|(_, d)| Lnd::certify(d.clone(), 64).ok()).collect(),
            };
            let gens = overshear_generators(&lnds, *gen_deg);
            let work = work_deg.unwrap_or((*target_deg).max(*gen_deg) + 1);
            let rep = lie_saturate(&c.variety, &gens, *target_deg, work, *max_len).map_err(dens_err)?;
            if !rep.replay(&gens) {
                return Err(CliError::Internal("saturation witness does not replay".into()));
            }
            let mut body = rep.to_json();
            body["summary"] = Value::from(format!("span {} of {}", rep.span_dim, rep.target_dim));
            outcome(rep.certified, body)
        }
        Command::Compat { input, theta, xi, ideal, bound } => {
            let c = ctx(input)?;
            let first = c.pair_candidates.first().cloned();
            let pick = |given: &Option<String>, fallback: Option<String>, what: &str| {
                given.clone().or(fallback).ok_or_else(|| CliError::Usage(format!("pass --{what}")))
            };
            let t = pick(theta, first.as_ref().map(|p| p.0.clone()), "theta")?;
            let x = pick(xi, first.as_ref().map(|p| p.1.clone()), "xi")?;
            let gens: Vec<Polynomial> = if ideal.is_empty() {
                c.ideal_candidates.clone()
            } else {
                ideal.iter().map(|s| c.poly(s)).collect::<Result<_, _>>()?
            };
            let rep = check_compatible_pair(&c.lnd(&t)?, &c.lnd(&x)?, &gens, *bound).map_err(dens_err)?;
            let mut body = rep.to_json();
            body["theta"] = Value::from(t);
            body["xi"] = Value::from(x);
            outcome(rep.is_compatible_at_bound, body)
        }
        Command::Unit { input, f, g } => {
            let c = ctx(input)?;
            let witnesses = match (f, g) {
                (Some(f), Some(g)) => vec![(c.poly(f)?, c.poly(g)?)],
                (None, None) => c.units.clone(),
                _ => return Err(CliError::Usage("pass both --f and --g".into())),
            };
            let lnds: Vec<(String, Lnd)> = c
                .derivations
                .iter()
                .filter_map(|(n, d)| Lnd::certify(d.clone(), 64).ok().map(|l| (n.clone(), l)))
                .collect();
            let mut obstruction = false;
            let mut reports = Vec::new();
            for (f, g) in &witnesses {
                let verified = verify_unit_witness(&c.variety, f, g);
                let mut killed = Map::new();
                if verified {
                    for (n, l) in &lnds {
                        let k = lnd_annihilates_units(l, f, g).map_err(dens_err)?;
                        killed.insert(n.clone(), Value::from(k));
                    }
                }
                let all_killed = killed.values().all(|v| v == &Value::Bool(true));
                obstruction |= verified && all_killed;
                reports.push(json!({
                    "f": f.to_string(),
                    "g": g.to_string(),
                    "verified": verified,
                    "annihilated_by": killed,
                }));
            }
            outcome(obstruction, json!({"witnesses": reports, "obstruction": obstruction}))
        }
        Command::Decompose { map, vars, max_steps } => {
            let ring = Ring::new(vars)?;
            let images: Vec<&str> = map.split(',').map(str::trim).collect();
            let f = PolyMap::parse(&ring, &images).map_err(tame_err)?;
            match jvdk_decompose(&f, *max_steps) {
                Ok(fl) => {
                    let recomposed = fl.compose() == f;
                    if !recomposed {
                        return Err(CliError::Internal("factors do not recompose".into()));
                    }
                    outcome(
                        true,
                        json!({
                            "map": f.render(),
                            "factors": fl.to_json(),
                            "recomposed": recomposed,
                            "degree": f.degree(),
                            "degree_product": fl.degree_product(),
                        }),
                    )
                }
                Err(TameError::Inconclusive(n)) => {
                    outcome(false, json!({"map": f.render(), "result": "Inconclusive", "max_steps": n}))
                }
                Err(e) => Err(tame_err(e)),
            }
        }
        Command::Compare { input, f, flow, mult, time, g, vars, center, radius, samples, tol } => {
            let grid = Grid { center: *center, radius: *radius, samples: *samples };
            let (ring, c) = if has_input(input) {
                let c = ctx(input)?;
                (c.variety.ambient().clone(), Some(c))
            } else {
                (Ring::new(vars)?, None)
            };
            let gmap = PolyMap::parse(&ring, &g.split(',').map(str::trim).collect::<Vec<_>>()).map_err(tame_err)?;
            let first: Box<dyn PointMap> = match (f, flow) {
                (Some(f), None) => Box::new(
                    PolyMap::parse(&ring, &f.split(',').map(str::trim).collect::<Vec<_>>()).map_err(tame_err)?,
                ),
                (None, Some(name)) => {
                    let c = c.as_ref().ok_or_else(|| CliError::Usage("--flow needs --bundle or --spec".into()))?;
                    let t = parse_time(time.as_deref().ok_or_else(|| CliError::Usage("--flow needs --time".into()))?)?;
                    let lnd = c.lnd(name)?;
                    let fm = match mult {
                        Some(m) => flow_overshear(&make_overshear(&lnd, &c.poly(m)?)?),
                        None => FlowMap::Polynomial(flow_lnd(&lnd)),
                    };
                    Box::new(FlowAt { flow: fm, t: t.complex() })
                }
                _ => return Err(CliError::Usage("pass exactly one of --f and --flow".into())),
            };
            let dev = compare_on_grid(first.as_ref(), &gmap, &grid).map_err(tame_err)?;
            outcome(dev <= *tol, json!({"max_deviation": dev, "tol": tol, "points": grid.points(ring.arity()).len()}))
        }
        Command::BracketFd { input, theta, tilde, at, t, tol } => {
            let c = ctx(input)?;
            let p: Vec<Complex64> = c.point(at)?.iter().map(Coeff::to_complex).collect();
            let rep = bracket_flow_check(&c.lnd(theta)?, &c.field(tilde)?, &p, *t).map_err(tame_err)?;
            let mut body = rep.to_json();
            body["tol"] = Value::from(*tol);
            outcome(rep.abs_error <= *tol, body)
        }
        Command::Bundle { action } => match action {
            BundleAction::List => outcome(true, json!({"bundles": BUNDLE_SPECS})),
            BundleAction::Show { spec } => outcome(true, bundle_by_spec(spec)?.to_json()),
        },
    }
}

fn flow(c: &Context, name: &str, f: Option<&str>, time: Option<&str>, at: Option<&str>) -> Result<Outcome, CliError> {
    let sample = c.overshears.iter().find(|(n, _)| n == name).map(|(_, o)| o);
    let fm = match (sample, f) {
        (Some(o), None) => flow_overshear(o),
        _ => {
            let lnd = c.lnd(name)?;
            match f {
                Some(f) => flow_overshear(&make_overshear(&lnd, &c.poly(f)?)?),
                None => FlowMap::Polynomial(flow_lnd(&lnd)),
            }
        }
    };
    let time = time.map(parse_time).transpose()?;
    let mut body = Map::new();
    let mut verdict = true;
    match &fm {
        FlowMap::Polynomial(p) => {
            body.insert("kind".into(), Value::from("polynomial"));
            body.insert("time_symbol".into(), Value::from(p.time_symbol()));
            body.insert("images".into(), json!(p.render()));
            let preserves = p.preserves_ideal();
            let group = p.group_law_holds();
            body.insert("preserves_ideal".into(), Value::from(preserves));
            body.insert("group_law".into(), Value::from(group));
            verdict = preserves && group;
            if let Some(Time::Exact(t)) = &time {
                let imgs: Vec<String> = p.at_time(t).iter().map(|q| q.to_string()).collect();
                body.insert("at_time".into(), json!(imgs));
            }
        }
        FlowMap::Hybrid(h) => {
            body.insert("kind".into(), Value::from("hybrid"));
            body.insert("base_images".into(), json!(h.base().render()));
            body.insert("multiplier".into(), Value::from(h.multiplier().to_string()));
            body.insert("rate".into(), Value::from(h.rate().to_string()));
        }
    }
    if let Some(at) = at {
        let t = time.as_ref().ok_or_else(|| CliError::Usage("--at needs --time".into()))?;
        let p: Vec<Complex64> = c.point(at)?.iter().map(Coeff::to_complex).collect();
        let v = lndlab::fields::eval_flow(&fm, t.complex(), &p)?;
        let residual = c
            .variety
            .defining()
            .iter()
            .map(|q| q.evaluate(&v).map(|z| z.norm()))
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .fold(0.0, f64::max);
        body.insert("value".into(), complex_vec(&v));
        body.insert("defining_residual".into(), Value::from(residual));
        verdict &= residual <= 1e-9;
    }
    Ok(Outcome { verdict, body })
}
