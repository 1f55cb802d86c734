//! JSON form of quiver expressions:
//! `{"loop": site}`, `{"tilde": expr, "site": id}`, `{"sum": [[tag, expr], ...]}`
//! and `{"finite": {"site": id, "vertices": [...], "arrows": [[s, t, color], ...]}}`.

use std::collections::HashMap;
use std::sync::Arc;

use serde_json::{json, Value};

use super::{FiniteQuiver, QuiverExpr};
use crate::error::{Error, Result};

impl QuiverExpr {
    pub fn to_json(&self) -> Value {
        match self {
            QuiverExpr::Loop { site } => json!({ "loop": site }),
            QuiverExpr::Finite(fq) => json!({ "finite": {
                "site": fq.site,
                "vertices": fq.vertices,
                "arrows": fq.arrows.iter().map(|(s, t, c)| json!([s, t, c])).collect::<Vec<_>>(),
            }}),
            QuiverExpr::Tilde { inner, site } => json!({ "tilde": inner.to_json(), "site": site }),
            QuiverExpr::Sum(parts) => json!({
                "sum": parts.iter().map(|(t, p)| json!([t, p.to_json()])).collect::<Vec<_>>()
            }),
        }
    }

    /// Parses and validates an expression. Repeated occurrences of a site
    /// are shared as a single node.
    pub fn from_json(v: &Value) -> Result<Arc<QuiverExpr>> {
        let mut memo = HashMap::new();
        let e = parse(v, &mut memo)?;
        e.validate()?;
        Ok(e)
    }
}

fn err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn string(v: &Value, what: &str) -> Result<String> {
    v.as_str().map(str::to_string).ok_or_else(|| err(format!("{what} must be a string")))
}

fn parse(v: &Value, memo: &mut HashMap<String, Arc<QuiverExpr>>) -> Result<Arc<QuiverExpr>> {
    let obj = v.as_object().ok_or_else(|| err("quiver expression must be an object"))?;
    let keys: Vec<&str> = obj.keys().map(String::as_str).collect();
    let node = match keys.as_slice() {
        ["loop"] => QuiverExpr::Loop { site: string(&obj["loop"], "loop site")? },
        ["finite"] => {
            let f = obj["finite"].as_object().ok_or_else(|| err("`finite` must be an object"))?;
            let site = string(f.get("site").ok_or_else(|| err("finite quiver needs `site`"))?, "site")?;
            let vertices = f
                .get("vertices")
                .and_then(Value::as_array)
                .ok_or_else(|| err("finite quiver needs `vertices`"))?
                .iter()
                .map(|x| string(x, "vertex"))
                .collect::<Result<Vec<_>>>()?;
            let arrows = match f.get("arrows") {
                None => Vec::new(),
                Some(a) => a
                    .as_array()
                    .ok_or_else(|| err("`arrows` must be an array"))?
                    .iter()
                    .map(|x| match x.as_array().map(Vec::as_slice) {
                        Some([s, t, c]) => Ok((string(s, "source")?, string(t, "target")?, string(c, "color")?)),
                        _ => Err(err("arrow must be [source, target, color]")),
                    })
                    .collect::<Result<Vec<_>>>()?,
            };
            QuiverExpr::Finite(FiniteQuiver { site, vertices, arrows })
        }
        ["site", "tilde"] | ["tilde", "site"] => QuiverExpr::Tilde {
            inner: parse(&obj["tilde"], memo)?,
            site: string(&obj["site"], "tilde site")?,
        },
        ["sum"] => {
            let parts = obj["sum"]
                .as_array()
                .ok_or_else(|| err("`sum` must be an array"))?
                .iter()
                .map(|p| match p.as_array().map(Vec::as_slice) {
                    Some([tag, e]) => Ok((string(tag, "tag")?, parse(e, memo)?)),
                    _ => Err(err("sum part must be [tag, expr]")),
                })
                .collect::<Result<Vec<_>>>()?;
            QuiverExpr::Sum(parts)
        }
        _ => return Err(err(format!("unrecognized quiver expression with keys {keys:?}"))),
    };
    if let Some(site) = node.site().map(str::to_string) {
        if let Some(prev) = memo.get(&site) {
            if **prev == node {
                return Ok(prev.clone());
            }
        }
        let shared = Arc::new(node);
        memo.insert(site, shared.clone());
        return Ok(shared);
    }
    Ok(Arc::new(node))
}

#[cfg(test)]
mod tests {
    use super::super::examples::*;
    use super::*;

    #[test]
    fn round_trip_examples() {
        for e in [one_loop("p"), ray(), tilde_edge()] {
            let v = e.to_json();
            assert_eq!(QuiverExpr::from_json(&v).unwrap(), e);
        }
        assert_eq!(one_loop("p").to_json(), json!({"loop": "p"}));
    }

    #[test]
    fn repeated_sites_are_shared() {
        let v = json!({"sum": [["a", {"tilde": {"sum": [["q", {"loop": "q"}]]}, "site": "p"}], ["q", {"loop": "q"}]]});
        let e = QuiverExpr::from_json(&v).unwrap();
        let QuiverExpr::Sum(parts) = &*e else { panic!() };
        let (inner, _) = parts[0].1.as_tilde().unwrap();
        assert!(Arc::ptr_eq(inner.part("q").unwrap(), &parts[1].1));
    }

    #[test]
    fn malformed_inputs() {
        for bad in [json!(3), json!({"loop": 1}), json!({"loop": "a", "x": 1}), json!({"sum": [["a"]]}), json!({"tilde": {"loop": "a"}})] {
            assert!(QuiverExpr::from_json(&bad).is_err(), "{bad}");
        }
        let clash = json!({"sum": [["a", {"loop": "p"}], ["b", {"tilde": {"loop": "q"}, "site": "p"}]]});
        assert!(QuiverExpr::from_json(&clash).is_err());
    }
}
