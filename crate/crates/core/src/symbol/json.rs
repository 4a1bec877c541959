//! JSON expression-tree schema for symbols.
//!
//! Leaves are strings: `"coeff:<name>"` and `"trig:[f_-r, ..., f_r]"`, where
//! each coefficient is a number or an `[re, im]` pair. Inner nodes are
//! single-key objects: `{"sum": [..]}`, `{"prod": [..]}`, `{"conj": node}`
//! and `{"quot": {"num": node, "den": node, "nonzero_ae": true}}`.

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::symbol::{Coefficient, SymbolExpr, TrigPoly};

pub fn to_json(expr: &SymbolExpr) -> Value {
    match expr {
        SymbolExpr::Coeff(c) => Value::String(format!("coeff:{}", c.name())),
        SymbolExpr::Trig(t) => {
            let items: Vec<Value> = t
                .coeffs()
                .iter()
                .map(|c| if c.im == 0.0 { json!(c.re) } else { json!([c.re, c.im]) })
                .collect();
            Value::String(format!("trig:{}", Value::Array(items)))
        }
        SymbolExpr::Sum(ts) => json!({ "sum": ts.iter().map(to_json).collect::<Vec<_>>() }),
        SymbolExpr::Prod(ts) => json!({ "prod": ts.iter().map(to_json).collect::<Vec<_>>() }),
        SymbolExpr::Quot {
            num,
            den,
            nonzero_ae,
        } => json!({
            "quot": { "num": to_json(num), "den": to_json(den), "nonzero_ae": nonzero_ae }
        }),
        SymbolExpr::Conj(e) => json!({ "conj": to_json(e) }),
    }
}

pub fn to_json_string(expr: &SymbolExpr) -> String {
    to_json(expr).to_string()
}

/// Rebuilds a symbol; coefficient names are looked up through `resolve`.
pub fn from_json(
    value: &Value,
    resolve: &dyn Fn(&str) -> Result<Coefficient>,
) -> Result<SymbolExpr> {
    match value {
        Value::String(s) => {
            if let Some(name) = s.strip_prefix("coeff:") {
                Ok(SymbolExpr::Coeff(resolve(name)?))
            } else if let Some(list) = s.strip_prefix("trig:") {
                let items: Value = serde_json::from_str(list)
                    .map_err(|e| Error::Json(format!("trig coefficients `{list}`: {e}")))?;
                Ok(SymbolExpr::Trig(parse_trig(&items)?))
            } else {
                Err(Error::Json(format!("unknown leaf `{s}`")))
            }
        }
        Value::Object(map) if map.len() == 1 => {
            let (key, inner) = map.iter().next().expect("one entry");
            match key.as_str() {
                "sum" | "prod" => {
                    let items = inner
                        .as_array()
                        .ok_or_else(|| Error::Json(format!("`{key}` expects an array")))?;
                    if items.is_empty() {
                        return Err(Error::Json(format!("empty `{key}`")));
                    }
                    let terms = items
                        .iter()
                        .map(|v| from_json(v, resolve))
                        .collect::<Result<Vec<_>>>()?;
                    Ok(if key == "sum" {
                        SymbolExpr::Sum(terms)
                    } else {
                        SymbolExpr::Prod(terms)
                    })
                }
                "conj" => Ok(SymbolExpr::Conj(Box::new(from_json(inner, resolve)?))),
                "quot" => {
                    let field = |k: &str| {
                        inner
                            .get(k)
                            .ok_or_else(|| Error::Json(format!("`quot` is missing `{k}`")))
                    };
                    let nonzero_ae = field("nonzero_ae")?
                        .as_bool()
                        .ok_or_else(|| Error::Json("`nonzero_ae` must be a boolean".into()))?;
                    let num = from_json(field("num")?, resolve)?;
                    let den = from_json(field("den")?, resolve)?;
                    num.div(den, nonzero_ae)
                }
                other => Err(Error::Json(format!("unknown node `{other}`"))),
            }
        }
        other => Err(Error::Json(format!("unexpected value `{other}`"))),
    }
}

pub fn from_json_str(
    text: &str,
    resolve: &dyn Fn(&str) -> Result<Coefficient>,
) -> Result<SymbolExpr> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?;
    from_json(&v, resolve)
}

fn parse_trig(items: &Value) -> Result<TrigPoly> {
    let arr = items
        .as_array()
        .ok_or_else(|| Error::Json("trig coefficients must be an array".into()))?;
    let coeffs = arr
        .iter()
        .map(|v| match v {
            Value::Number(n) => n
                .as_f64()
                .map(|re| Complex64::new(re, 0.0))
                .ok_or_else(|| Error::Json(format!("bad number `{n}`"))),
            Value::Array(pair) if pair.len() == 2 => match (pair[0].as_f64(), pair[1].as_f64()) {
                (Some(re), Some(im)) => Ok(Complex64::new(re, im)),
                _ => Err(Error::Json(format!("bad complex pair `{v}`"))),
            },
            other => Err(Error::Json(format!("bad trig coefficient `{other}`"))),
        })
        .collect::<Result<Vec<_>>>()?;
    TrigPoly::new(coeffs).map_err(|e| Error::Json(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::coefficient_preset;

    #[test]
    fn round_trip_schur_symbol() {
        let expr = SymbolExpr::separable(Coefficient::constant(1.0 / 3.0), TrigPoly::two_plus_cos())
            .add(
                SymbolExpr::trig(TrigPoly::sin_squared())
                    .div(SymbolExpr::separable(Coefficient::x(), TrigPoly::laplacian()), true)
                    .unwrap(),
            )
            .add(SymbolExpr::trig(TrigPoly::sin()).conj());
        let text = to_json_string(&expr);
        let back = from_json_str(&text, &coefficient_preset).unwrap();
        assert_eq!(to_json_string(&back), text);
        for (x, t) in [(0.3, 0.4), (0.7, 2.0)] {
            assert!((back.eval(x, t).unwrap() - expr.eval(x, t).unwrap()).norm() < 1e-15);
        }
    }

    #[test]
    fn undeclared_quotient_rejected() {
        let text = r#"{"quot": {"num": "trig:[1]", "den": "coeff:x", "nonzero_ae": false}}"#;
        assert_eq!(
            from_json_str(text, &coefficient_preset),
            Err(Error::UndeclaredDivision)
        );
    }

    #[test]
    fn malformed_input() {
        for text in [r#""foo""#, r#"{"sum": []}"#, r#""trig:[1,2]""#, r#"{"pow": 1}"#, "3"] {
            assert!(from_json_str(text, &coefficient_preset).is_err(), "{text}");
        }
    }
}
