//! JSON documents for fans, cones, flags, polynomials and symbols.
//! Rationals are written as `"a/b"` strings; integers and decimal strings are accepted on input.

use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::algebra::formal::{Basis, BasisElement, FormalReal, DEFAULT_INTERVAL_DEPTH};
use crate::algebra::rational::{format_rational, parse_rational, IVec, Rational};
use crate::error::{Error, Result};
use crate::fan::{Cone, Fan, LexPoint};
use crate::tropical_k::{FactoredFunction, SymbolEntry};
use crate::tropicalize::ExponentPolynomial;

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| bad(format!("missing field {key:?}")))
}

pub fn as_usize(v: &Value) -> Result<usize> {
    v.as_u64().map(|x| x as usize).ok_or_else(|| bad(format!("expected a nonnegative integer, got {v}")))
}

fn as_array(v: &Value) -> Result<&Vec<Value>> {
    v.as_array().ok_or_else(|| bad(format!("expected an array, got {v}")))
}

pub fn int_vec(v: &Value) -> Result<IVec> {
    as_array(v)?
        .iter()
        .map(|x| x.as_i64().ok_or_else(|| bad(format!("expected an integer, got {x}"))))
        .collect()
}

pub fn int_rows(v: &Value) -> Result<Vec<IVec>> {
    as_array(v)?.iter().map(int_vec).collect()
}

pub fn rational(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(Rational::from_integer(i.into())),
            None => parse_rational(&n.to_string()),
        },
        _ => Err(bad(format!("expected a rational, got {v}"))),
    }
}

pub fn rational_vec(v: &Value) -> Result<Vec<Rational>> {
    as_array(v)?.iter().map(rational).collect()
}

pub fn rational_json(x: &Rational) -> Value {
    Value::String(format_rational(x))
}

pub fn rational_vec_json(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rational_json).collect())
}

/// `{"rank", "rays", "cones"}` with sorted rays and sorted maximal cones.
pub fn fan_to_json(fan: &Fan) -> Value {
    let rays = fan.rays();
    let mut cones: Vec<Vec<usize>> = fan
        .maximal_cones()
        .iter()
        .map(|c| {
            let mut idx: Vec<usize> = c.rays().iter().map(|r| rays.iter().position(|s| s == r).expect("ray of the fan")).collect();
            idx.sort_unstable();
            idx
        })
        .collect();
    cones.sort();
    json!({ "rank": fan.ambient(), "rays": rays, "cones": cones })
}

/// Parses a fan document; faces of the listed cones are added.
pub fn fan_from_json(v: &Value) -> Result<Fan> {
    let n = as_usize(field(v, "rank")?)?;
    let rays = int_rows(field(v, "rays")?)?;
    let cones: Vec<Vec<usize>> = as_array(field(v, "cones")?)?
        .iter()
        .map(|c| as_array(c)?.iter().map(as_usize).collect())
        .collect::<Result<_>>()?;
    if let Some(c) = cones.iter().flatten().find(|&&i| i >= rays.len()) {
        return Err(bad(format!("ray index {c} out of range")));
    }
    Fan::from_rays(n, &rays, &cones)
}

pub fn cone_to_json(c: &Cone) -> Value {
    json!({ "rays": c.rays() })
}

/// A cone given either as `{"rays": [[...]]}` or directly as a list of rays.
pub fn cone_from_json(v: &Value, ambient: usize) -> Result<Cone> {
    let rays = int_rows(v.get("rays").unwrap_or(v))?;
    if rays.is_empty() {
        return Ok(Cone::zero(ambient));
    }
    Cone::from_generators(ambient, &rays)
}

pub fn polynomial_from_json(v: &Value) -> Result<ExponentPolynomial> {
    ExponentPolynomial::new(as_usize(field(v, "vars")?)?, int_rows(field(v, "exponents")?)?)
}

pub fn polynomial_to_json(f: &ExponentPolynomial) -> Value {
    json!({ "vars": f.vars(), "exponents": f.exponents() })
}

fn basis_from_json(v: Option<&Value>, depth: u32) -> Result<Arc<Basis>> {
    let Some(v) = v else { return Ok(Basis::with_depth(Vec::new(), depth)) };
    let elements = as_array(v)?
        .iter()
        .map(|e| {
            let name = field(e, "name")?.as_str().ok_or_else(|| bad("basis name must be a string"))?.to_string();
            if let Some(r) = e.get("sqrt") {
                return BasisElement::sqrt(name, rational(r)?);
            }
            let enc = rational_vec(field(e, "enclosure")?)?;
            if enc.len() != 2 {
                return Err(bad("enclosure must be [lo, hi]"));
            }
            BasisElement::fixed(name, enc[0].clone(), enc[1].clone())
        })
        .collect::<Result<_>>()?;
    Ok(Basis::with_depth(elements, depth))
}

/// Flag document. Each level lists one entry per coordinate: a rational, or
/// the coefficient vector over `(1, β_1, …, β_s)`.
pub fn flag_from_json(v: &Value, depth: Option<u32>) -> Result<LexPoint> {
    let basis = basis_from_json(v.get("basis"), depth.unwrap_or(DEFAULT_INTERVAL_DEPTH))?;
    let levels_v = as_array(field(v, "levels")?)?;
    let mut levels = Vec::new();
    for l in levels_v {
        let coords = as_array(l)?
            .iter()
            .map(|c| match c {
                Value::Array(_) => FormalReal::new(basis.clone(), rational_vec(c)?),
                _ => Ok(FormalReal::rational(&basis, rational(c)?)),
            })
            .collect::<Result<Vec<_>>>()?;
        levels.push(coords);
    }
    let ambient = match (v.get("rank"), levels.first()) {
        (Some(r), _) => as_usize(r)?,
        (None, Some(l)) => l.len(),
        (None, None) => return Err(bad("an empty flag needs a \"rank\"")),
    };
    LexPoint::new(ambient, basis, levels)
}

pub fn flag_to_json(x: &LexPoint) -> Value {
    let basis: Vec<Value> = x
        .basis()
        .elements()
        .iter()
        .map(|e| json!({ "name": e.name, "enclosure": [rational_json(&e.lo), rational_json(&e.hi)] }))
        .collect();
    let levels: Vec<Value> = x
        .levels()
        .iter()
        .map(|l| {
            Value::Array(
                l.iter()
                    .map(|c| match c.as_rational() {
                        Some(r) if basis.is_empty() => rational_json(r),
                        _ => rational_vec_json(c.coeffs()),
                    })
                    .collect(),
            )
        })
        .collect();
    let mut m = Map::new();
    m.insert("rank".into(), json!(x.ambient()));
    if !basis.is_empty() {
        m.insert("basis".into(), Value::Array(basis));
    }
    m.insert("levels".into(), Value::Array(levels));
    Value::Object(m)
}

/// Symbol entries: integer vectors are characters, rationals are constants,
/// and `{"roots", "exps"}` objects (optional `"constant"`, `"unsplit"`) are univariate functions.
pub fn symbol_from_json(v: &Value) -> Result<Vec<SymbolEntry>> {
    as_array(v)?.iter().map(symbol_entry_from_json).collect()
}

fn symbol_entry_from_json(v: &Value) -> Result<SymbolEntry> {
    match v {
        Value::Array(_) => Ok(SymbolEntry::Monomial(int_vec(v)?)),
        Value::Object(_) => Ok(SymbolEntry::Factored(factored_from_json(v)?)),
        _ => Ok(SymbolEntry::Constant(rational(v)?)),
    }
}

pub fn factored_from_json(v: &Value) -> Result<FactoredFunction> {
    let roots = as_array(field(v, "roots")?)?
        .iter()
        .map(|r| rational(r).map_err(|_| Error::UnsplitFactor(format!("root {r} is not rational"))))
        .collect::<Result<Vec<_>>>()?;
    let exps = int_vec(field(v, "exps")?)?;
    let c = v.get("constant").map(rational).transpose()?.unwrap_or_else(|| Rational::from_integer(1.into()));
    let mut f = FactoredFunction::new(c, roots, exps)?;
    if let Some(u) = v.get("unsplit") {
        for g in as_array(u)? {
            f = f.with_unsplit(rational_vec(field(g, "coeffs")?)?, field(g, "exp")?.as_i64().ok_or_else(|| bad("exp must be an integer"))?)?;
        }
    }
    Ok(f)
}
