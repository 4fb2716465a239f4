//! JSON codecs for points, measures, specifications and trees.
//!
//! Points are either `{"kind": "ep", "pre": …, "per": …}` or
//! `{"kind": "recipe", "name": …, "params": …, "offset": n}`. Words are
//! written as integer arrays and read from either arrays or strings such as
//! `"0110"` / `"2,10,3"`. Rationals are written as `"p/q"` strings and read
//! from strings or JSON integers.

use serde_json::{json, Value};
use thiserror::Error;

use crate::birkhoff::alternating_blocks;
use crate::measure::{DiscreteMeasure, MeasureError};
use crate::rational::{parse_ratio, ratio_string, Ratio};
use crate::reductions::oxtoby::toeplitz_point;
use crate::reductions::TreeOnOmega;
use crate::symbolic::{Point, Symbol, SymbolicError, Word};
use crate::tracing::{Specification, TracingError};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed input: {0}")]
    Format(String),
    #[error("unknown recipe `{0}`")]
    UnknownRecipe(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Tracing(#[from] TracingError),
}

fn format_err(msg: impl Into<String>) -> IoError {
    IoError::Format(msg.into())
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value, IoError> {
    v.get(key).ok_or_else(|| format_err(format!("missing field `{key}`")))
}

fn as_usize(v: &Value, what: &str) -> Result<usize, IoError> {
    v.as_u64()
        .map(|n| n as usize)
        .ok_or_else(|| format_err(format!("`{what}` must be a nonnegative integer")))
}

pub fn word_to_json(w: &Word) -> Value {
    json!(w.as_slice())
}

pub fn word_from_json(v: &Value) -> Result<Word, IoError> {
    match v {
        Value::String(s) => Ok(Word::parse(s)?),
        Value::Array(items) => items
            .iter()
            .map(|x| {
                x.as_u64()
                    .and_then(|n| Symbol::try_from(n).ok())
                    .ok_or_else(|| format_err("word entries must be small nonnegative integers"))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Word::new),
        _ => Err(format_err("a word is a string or an integer array")),
    }
}

pub fn ratio_to_json(r: &Ratio) -> Value {
    Value::String(ratio_string(r))
}

pub fn ratio_from_json(v: &Value) -> Result<Ratio, IoError> {
    match v {
        Value::String(s) => parse_ratio(s).map_err(|e| format_err(e.to_string())),
        Value::Number(n) if n.is_i64() => Ok(Ratio::from_integer(n.as_i64().unwrap().into())),
        _ => Err(format_err("a rational is a \"p/q\" string or an integer")),
    }
}

pub fn point_to_json(x: &Point) -> Value {
    if let Some((pre, per)) = x.eventually_periodic_parts() {
        return json!({ "kind": "ep", "pre": word_to_json(&pre), "per": word_to_json(&per) });
    }
    let (name, params, offset) = x.recipe_parts().expect("a point is ep or a recipe");
    json!({ "kind": "recipe", "name": name, "params": params, "offset": offset })
}

/// Rebuilds a recipe point from its registered name.
pub fn recipe(name: &str, params: &Value) -> Result<Point, IoError> {
    match name {
        "oxtoby_toeplitz" => {
            let s = match params.get("s") {
                None => Vec::new(),
                Some(v) => serde_json::from_value::<Vec<u64>>(v.clone())?,
            };
            if s.iter().any(|&v| v < 3) {
                return Err(format_err("oxtoby parameters must be at least 3"));
            }
            Ok(toeplitz_point(s))
        }
        "alternating_blocks" => {
            let base = params.get("base").map(|b| as_usize(b, "base")).transpose()?.unwrap_or(4);
            if base < 2 {
                return Err(format_err("block base must be at least 2"));
            }
            Ok(alternating_blocks(base))
        }
        "prepend" => {
            let word = word_from_json(field(params, "word")?)?;
            let tail = point_from_json(field(params, "point")?)?;
            Ok(Point::prepend(&word, &tail)?)
        }
        other => Err(IoError::UnknownRecipe(other.to_string())),
    }
}

pub fn point_from_json(v: &Value) -> Result<Point, IoError> {
    let kind = field(v, "kind")?
        .as_str()
        .ok_or_else(|| format_err("`kind` must be a string"))?;
    match kind {
        "ep" => {
            let pre = match v.get("pre") {
                Some(p) => word_from_json(p)?,
                None => Word::empty(),
            };
            let per = word_from_json(field(v, "per")?)?;
            Ok(Point::eventually_periodic(pre, per)?)
        }
        "recipe" => {
            let name = field(v, "name")?
                .as_str()
                .ok_or_else(|| format_err("`name` must be a string"))?;
            let params = v.get("params").cloned().unwrap_or(Value::Null);
            let offset = v.get("offset").map(|o| as_usize(o, "offset")).transpose()?.unwrap_or(0);
            Ok(recipe(name, &params)?.shift(offset))
        }
        other => Err(format_err(format!("unknown point kind `{other}`"))),
    }
}

pub fn measure_to_json(mu: &DiscreteMeasure) -> Value {
    let support: Vec<Value> = mu.atoms().iter().map(|(p, _)| point_to_json(p)).collect();
    let weights: Vec<Value> = mu.atoms().iter().map(|(_, w)| ratio_to_json(w)).collect();
    json!({ "support": support, "weights": weights })
}

pub fn measure_from_json(v: &Value, horizon: usize) -> Result<DiscreteMeasure, IoError> {
    let support = field(v, "support")?
        .as_array()
        .ok_or_else(|| format_err("`support` must be an array"))?;
    let weights = field(v, "weights")?
        .as_array()
        .ok_or_else(|| format_err("`weights` must be an array"))?;
    if support.len() != weights.len() {
        return Err(format_err(format!(
            "{} support points but {} weights",
            support.len(),
            weights.len()
        )));
    }
    let atoms = support
        .iter()
        .zip(weights)
        .map(|(p, w)| Ok((point_from_json(p)?, ratio_from_json(w)?)))
        .collect::<Result<Vec<_>, IoError>>()?;
    Ok(DiscreteMeasure::new(atoms, horizon)?)
}

/// A list of measures: a JSON array, an object with a `measures` array, or a
/// single measure.
pub fn measures_from_json(v: &Value, horizon: usize) -> Result<Vec<DiscreteMeasure>, IoError> {
    let list = match v {
        Value::Array(a) => a,
        _ if v.get("support").is_some() => return Ok(vec![measure_from_json(v, horizon)?]),
        _ => field(v, "measures")?
            .as_array()
            .ok_or_else(|| format_err("`measures` must be an array"))?,
    };
    list.iter().map(|m| measure_from_json(m, horizon)).collect()
}

pub fn specification_to_json(xi: &Specification) -> Value {
    let segments: Vec<Value> = xi
        .segments()
        .iter()
        .map(|(p, n)| json!({ "point": point_to_json(p), "len": n }))
        .collect();
    json!({ "segments": segments })
}

pub fn specification_from_json(v: &Value) -> Result<Specification, IoError> {
    let segs = field(v, "segments")?
        .as_array()
        .ok_or_else(|| format_err("`segments` must be an array"))?;
    let segments = segs
        .iter()
        .map(|s| Ok((point_from_json(field(s, "point")?)?, as_usize(field(s, "len")?, "len")?)))
        .collect::<Result<Vec<_>, IoError>>()?;
    Ok(Specification::new(segments)?)
}

pub fn tree_to_json(t: &TreeOnOmega) -> Value {
    json!(t.nodes().collect::<Vec<_>>())
}

pub fn tree_from_json(v: &Value) -> Result<TreeOnOmega, IoError> {
    let nodes: Vec<Vec<u64>> = serde_json::from_value(v.clone())?;
    TreeOnOmega::new(nodes).map_err(|e| format_err(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    #[test]
    fn point_roundtrip() {
        let ep = Point::eventually_periodic(Word::new(vec![10, 2]), Word::new(vec![0, 1])).unwrap();
        let back = point_from_json(&point_to_json(&ep)).unwrap();
        assert!(back.agrees_to(&ep, 50));
        let oxt = toeplitz_point(vec![3, 4]).shift(5);
        let v = point_to_json(&oxt);
        assert_eq!(v["name"], "oxtoby_toeplitz");
        assert!(point_from_json(&v).unwrap().agrees_to(&oxt, 200));
        let pre = Point::prepend(&Word::parse("22").unwrap(), &alternating_blocks(2)).unwrap();
        assert!(point_from_json(&point_to_json(&pre)).unwrap().agrees_to(&pre, 100));
    }

    #[test]
    fn string_words_are_accepted() {
        let v = serde_json::json!({"kind": "ep", "pre": "1", "per": "01"});
        assert_eq!(point_from_json(&v).unwrap().prefix(5), Word::parse("10101").unwrap());
        let bad = serde_json::json!({"kind": "recipe", "name": "nope"});
        assert!(matches!(point_from_json(&bad), Err(IoError::UnknownRecipe(_))));
    }

    #[test]
    fn measure_roundtrip() {
        let v = serde_json::json!({
            "support": [{"kind": "ep", "per": "0"}, {"kind": "ep", "per": "1"}],
            "weights": ["1/3", "2/3"]
        });
        let mu = measure_from_json(&v, 8).unwrap();
        assert_eq!(mu.atoms()[1].1, frac(2, 3));
        let again = measure_from_json(&measure_to_json(&mu), 8).unwrap();
        assert!(again.same_at(&mu, 8));
        assert_eq!(measures_from_json(&v, 8).unwrap().len(), 1);
        assert_eq!(measures_from_json(&serde_json::json!({"measures": [v.clone(), v]}), 8).unwrap().len(), 2);
    }

    #[test]
    fn tree_and_spec_roundtrip() {
        let t = tree_from_json(&serde_json::json!([[], [0], [0, 2]])).unwrap();
        assert_eq!(tree_from_json(&tree_to_json(&t)).unwrap(), t);
        assert!(tree_from_json(&serde_json::json!([[0, 2]])).is_err());
        let xi = Specification::new(vec![(Point::constant(1), 3), (Point::constant(0), 2)]).unwrap();
        let back = specification_from_json(&specification_to_json(&xi)).unwrap();
        assert_eq!(back.concatenation(), xi.concatenation());
    }
}
