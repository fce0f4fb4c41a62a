//! The demo's operations as plain functions from text to JSON, so they can be
//! tested natively. Numbers meant for drawing are `f64`; everything shown as
//! text stays exact.

use energy_core::function::{Body, Element};
use energy_core::value::{format_rational, parse_rational};
use energy_core::{omega, parse_automaton, parse_function, Analysis, EnergyFunction, ExtValue, Rational, ThresholdPredicate};
use num_traits::ToPrimitive;
use serde_json::{json, Value};

fn float(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn ext(v: &ExtValue) -> Value {
    match v {
        ExtValue::Bot => Value::Null,
        ExtValue::Inf => json!("inf"),
        ExtValue::Fin(r) => json!(float(r)),
    }
}

fn function(text: &str) -> Result<EnergyFunction, String> {
    parse_function(text).map_err(|e| e.to_string())
}

/// Drawable form of `f` on `[0, x_max]`: one segment per non-`⊥` span, with
/// `y` values at both ends (limits at open ends), and the value at every
/// breakpoint where `f` is defined.
pub fn curve(f: &EnergyFunction, x_max: &Rational) -> Value {
    let mut segments = Vec::new();
    let mut points = Vec::new();
    for e in f.elements() {
        match e {
            Element::Point { x, value } => {
                if x <= x_max && !value.is_bot() {
                    points.push(json!({ "x": float(x), "y": ext(value) }));
                }
            }
            Element::Span { lower, upper, body } => {
                if lower >= x_max || *body == Body::Bot {
                    continue;
                }
                let hi = match upper {
                    Some(u) if u < x_max => u.clone(),
                    _ => x_max.clone(),
                };
                let kind = if *body == Body::Inf { "inf" } else { "affine" };
                segments.push(json!({
                    "kind": kind,
                    "x0": float(lower),
                    "x1": float(&hi),
                    "y0": ext(&body.at(lower)),
                    "y1": ext(&body.at(&hi)),
                }));
            }
        }
    }
    json!({ "text": f.to_string(), "segments": segments, "points": points })
}

pub fn plot(text: &str, x_max: &str) -> Result<Value, String> {
    let f = function(text)?;
    let x_max = parse_rational(x_max).map_err(|e| e.to_string())?;
    if x_max <= Rational::from_integer(0.into()) {
        return Err("the plot range must be positive".into());
    }
    Ok(curve(&f, &x_max))
}

fn predicate(u: &ThresholdPredicate) -> Value {
    match u {
        ThresholdPredicate::Never => json!({ "text": "never", "threshold": Value::Null, "strict": false }),
        ThresholdPredicate::From { t, strict } => {
            json!({ "text": u.to_string(), "threshold": format_rational(t), "at": float(t), "strict": strict })
        }
    }
}

/// `op` is one of `join`, `compose` (`g ∘ f`, first `f` then `g`), `star` or
/// `omega`; the last two ignore `g`.
pub fn combine(op: &str, f: &str, g: &str, x_max: &str) -> Result<Value, String> {
    let f = function(f)?;
    let x_max = parse_rational(x_max).map_err(|e| e.to_string())?;
    let binary = |g: &str| function(g);
    let result = match op {
        "join" => f.join(&binary(g)?),
        "compose" => binary(g)?.compose(&f),
        "star" => f.star(),
        "omega" => return Ok(json!({ "op": op, "predicate": predicate(&omega(&f)) })),
        other => return Err(format!("unknown operation `{other}`")),
    };
    Ok(json!({ "op": op, "function": curve(&result, &x_max) }))
}

/// For every state as the start: the least energy that reaches an accepting
/// state, the reachability function, and the Büchi region.
pub fn thresholds(text: &str) -> Result<Value, String> {
    let a = parse_automaton(text)
        .map_err(|e| e.to_string())?
        .into_single()
        .ok_or("the demo handles one-dimensional automata only")?;
    let an = Analysis::of(&a).map_err(|e| e.to_string())?;
    let states: Vec<Value> = a
        .names
        .iter()
        .enumerate()
        .map(|(s, name)| {
            let reach = an.reach_function(s);
            let reach_from = match reach.domain_start() {
                None => ThresholdPredicate::Never,
                Some((t, attained)) => ThresholdPredicate::from_value(t, !attained),
            };
            json!({
                "state": name,
                "initial": s == a.initial,
                "accepting": a.accepting.contains(&s),
                "reach": predicate(&reach_from),
                "reachFunction": reach.to_string(),
                "buchi": predicate(&an.buchi_region(s)),
            })
        })
        .collect();
    Ok(json!({ "states": states }))
}

/// One query with a concrete energy, for the "try it" box.
pub fn query(text: &str, state: &str, energy: &str) -> Result<Value, String> {
    let a = parse_automaton(text)
        .map_err(|e| e.to_string())?
        .into_single()
        .ok_or("the demo handles one-dimensional automata only")?;
    let s = a.state_index(state).map_err(|e| e.to_string())?;
    let x = parse_rational(energy).map_err(|e| e.to_string())?;
    let an = Analysis::of(&a).map_err(|e| e.to_string())?;
    let reach = an.reach(s, &x).map_err(|e| e.to_string())?;
    let buchi = an.buchi_cycle(s, &x).map_err(|e| e.to_string())?;
    Ok(json!({
        "reach": reach,
        "best": an.reach_function(s).eval(&ExtValue::Fin(x)).to_string(),
        "buchi": buchi.accepted,
        "witness": buchi.witness.map(|j| a.names[j].clone()),
    }))
}
