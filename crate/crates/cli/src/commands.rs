use std::path::Path;

use serde_json::{json, Value};
use tropk::corpus::{random_stellar_refinement, seeded};
use tropk::fan::{common_refinement, locate_lex, stellar_subdivision};
use tropk::flag::{canonicalize, flag_height};
use tropk::gersten::{build_complex, chow_oracle, report};
use tropk::json::{
    as_usize, cone_from_json, cone_to_json, fan_from_json, fan_to_json, flag_from_json, flag_to_json, int_rows,
    polynomial_from_json, rational_json, rational_vec, rational_vec_json, symbol_from_json,
};
use tropk::tropical_k::{
    f_spaces, monomial_restriction, monomial_transfer, residue_contract, symbol_factor, tame_residue, uniformizer,
    lattice_index, Place, ResidueValue, SymbolEntry,
};
use tropk::tropicalize::tropical_hypersurface;
use tropk::valuation::{MonomialValuation, OrderedValueGroup, SubgroupSpec};
use tropk::Error;

use crate::Command;

pub struct Failure(Error);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(e)
    }
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match &self.0 {
            Error::IndeterminateSign { .. } => 3,
            e if e.is_property_violation() => 2,
            _ => 1,
        }
    }

    pub fn document(&self) -> Value {
        json!({ "error": self.0.kind(), "message": self.0.to_string() })
    }
}

type Outcome = Result<(Value, u8), Failure>;

fn invalid(msg: impl Into<String>) -> Failure {
    Failure(Error::InvalidInput(msg.into()))
}

fn read(path: &Path) -> Result<Value, Failure> {
    let text = if path.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin()).map_err(|e| invalid(format!("stdin: {e}")))?
    } else {
        std::fs::read_to_string(path).map_err(|e| invalid(format!("{}: {e}", path.display())))?
    };
    serde_json::from_str(&text).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

fn interval_depth() -> Result<Option<u32>, Failure> {
    match std::env::var("TROPK_INTERVAL_DEPTH") {
        Ok(s) => s.trim().parse().map(Some).map_err(|_| invalid(format!("TROPK_INTERVAL_DEPTH={s:?} is not a count"))),
        Err(_) => Ok(None),
    }
}

fn ok(v: Value) -> Outcome {
    Ok((v, 0))
}

pub fn run(cmd: &Command) -> Outcome {
    match cmd {
        Command::Hyp { polynomial } => {
            let f = polynomial_from_json(&read(polynomial)?)?;
            ok(fan_to_json(&tropical_hypersurface(&f)?))
        }
        Command::Fp { fan, p } => {
            let fan = fan_from_json(&read(fan)?)?;
            let (space, classes) = f_spaces(&fan, *p);
            ok(json!({ "p": p, "dim": classes.dim(), "span_dim": space.space.dim() }))
        }
        Command::Locate { fan, flag } => {
            let fan = fan_from_json(&read(fan)?)?;
            let x = flag_from_json(&read(flag)?, interval_depth()?)?;
            let i = locate_lex(&fan, &x)?;
            ok(json!({ "index": i, "cone": cone_to_json(fan.cone(i)) }))
        }
        Command::Refine { fan, stellar, with, random, seed } => {
            let mut fan = fan_from_json(&read(fan)?)?;
            for s in stellar {
                let v: Vec<i64> = s
                    .split(',')
                    .map(|t| t.trim().parse().map_err(|_| invalid(format!("bad ray {s:?}"))))
                    .collect::<Result<_, _>>()?;
                fan = stellar_subdivision(&fan, &v)?;
            }
            if let Some(other) = with {
                fan = common_refinement(&fan, &fan_from_json(&read(other)?)?)?;
            }
            let mut rng = seeded(*seed);
            for _ in 0..*random {
                fan = random_stellar_refinement(&mut rng, &fan);
            }
            ok(fan_to_json(&fan))
        }
        Command::Gersten { fan, p, check_chow } => {
            let fan = fan_from_json(&read(fan)?)?;
            let cx = build_complex(&fan, *p)?;
            let h = cx.cohomology_dims()?;
            let top = *h.last().expect("nonempty complex");
            if !check_chow {
                return ok(json!({ "p": p, "term_dims": cx.term_dims(), "h": h, "top_cokernel": top }));
            }
            let r = report(&cx, &chow_oracle(&fan, *p)?)?;
            let doc = json!({
                "p": r.p,
                "term_dims": r.term_dims,
                "h": r.h,
                "top_cokernel": r.top_cokernel,
                "chow_oracle": r.chow_oracle,
                "match": r.matches,
            });
            Ok((doc, if r.matches { 0 } else { 2 }))
        }
        Command::Chow { fan, p } => {
            let r = chow_oracle(&fan_from_json(&read(fan)?)?, *p)?;
            ok(json!({ "p": r.p, "dim": r.dim, "method": format!("{:?}", r.method) }))
        }
        Command::ValHeight { flag } => {
            let x = flag_from_json(&read(flag)?, interval_depth()?)?;
            let h = flag_height(&x)?;
            let g = OrderedValueGroup::from_flag(&x).height();
            ok(json!({
                "height": h.height,
                "value_group_height": h.value_group_height,
                "rational_rank": g.rational_rank,
                "consistent": h.consistent(),
            }))
        }
        Command::ValReduce { flag, cut } => {
            let x = flag_from_json(&read(flag)?, interval_depth()?)?;
            let x = match cut {
                Some(k) => MonomialValuation::new(x).quotient_by_convex(&SubgroupSpec::Cut(*k))?.flag().clone(),
                None => x,
            };
            let c = canonicalize(&x)?;
            ok(json!({ "height": c.len(), "flag": flag_to_json(c.point()) }))
        }
        Command::Residue { input } => residue(&read(input)?),
        Command::Transfer { input } => transfer(&read(input)?),
    }
}

fn residue_value_json(r: &ResidueValue) -> Value {
    match r {
        ResidueValue::Degree0(x) => json!({ "degree": 0, "value": rational_json(x) }),
        ResidueValue::Degree1(m) => {
            let primes: serde_json::Map<String, Value> = m.iter().map(|(p, e)| (p.to_string(), rational_json(e))).collect();
            json!({ "degree": 1, "primes": primes })
        }
        ResidueValue::Vanishing(d) => json!({ "degree": d, "zero": true }),
    }
}

fn residue(doc: &Value) -> Outcome {
    if let Some(fan) = doc.get("fan") {
        let fan = fan_from_json(fan)?;
        let n = fan.ambient();
        let get = |k: &str| doc.get(k).ok_or_else(|| invalid(format!("missing field {k:?}")));
        let tau = cone_from_json(get("tau")?, n)?;
        let sigma = cone_from_json(get("sigma")?, n)?;
        let q = as_usize(get("degree")?)?;
        let omega = rational_vec(get("omega")?)?;
        let m_pi = match doc.get("m_pi") {
            Some(m) => tropk::json::int_vec(m)?,
            None => uniformizer(&fan, &tau, &sigma)?,
        };
        let r = residue_contract(&fan, &tau, &sigma, &omega, q, &m_pi)?;
        return ok(json!({ "residue": rational_vec_json(&r) }));
    }
    let entries = symbol_from_json(doc.get("symbol").ok_or_else(|| invalid("expected \"fan\" or \"symbol\""))?)?;
    match doc.get("place") {
        Some(place) => {
            let place = match place.as_str() {
                Some("inf") | Some("infinity") => Place::Infinity,
                _ => Place::Finite(tropk::json::rational(place)?),
            };
            let fs = entries
                .into_iter()
                .map(|e| match e {
                    SymbolEntry::Factored(f) => Ok(f),
                    SymbolEntry::Constant(c) => Ok(tropk::tropical_k::FactoredFunction::constant(c)?),
                    SymbolEntry::Monomial(_) => Err(Failure(Error::UnsupportedEntry("characters have no tame residue".into()))),
                })
                .collect::<Result<Vec<_>, _>>()?;
            ok(residue_value_json(&tame_residue(&fs, &place)?))
        }
        None => {
            let s = symbol_factor(&entries)?;
            ok(json!({
                "p": s.p,
                "rank": s.rank,
                "fan": fan_to_json(&s.fan),
                "symbol": rational_vec_json(&s.symbol),
                "class": rational_vec_json(&s.class),
                "zero": s.is_zero(),
            }))
        }
    }
}

fn transfer(doc: &Value) -> Outcome {
    let basis = int_rows(doc.get("basis").ok_or_else(|| invalid("missing field \"basis\""))?)?;
    let p = as_usize(doc.get("p").ok_or_else(|| invalid("missing field \"p\""))?)?;
    let element = rational_vec(doc.get("element").ok_or_else(|| invalid("missing field \"element\""))?)?;
    let n = basis.len();
    let expected = tropk::algebra::wedge::binomial(n, p);
    if element.len() != expected {
        return Err(Failure(Error::DimensionMismatch { expected, found: element.len() }));
    }
    let index = lattice_index(&basis, n)?;
    let out = match doc.get("direction").and_then(Value::as_str).unwrap_or("transfer") {
        "transfer" => monomial_transfer(&basis, &element, p)?,
        "restrict" => monomial_restriction(&basis, &element, p),
        other => return Err(invalid(format!("unknown direction {other:?}"))),
    };
    ok(json!({ "index": index.to_string(), "result": rational_vec_json(&out) }))
}
