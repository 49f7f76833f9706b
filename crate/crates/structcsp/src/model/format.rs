//! The `.csp.json` instance file format.
//!
//! ```json
//! {
//!   "variables": ["X", "Y"],
//!   "domain": ["a", "b"],
//!   "constraints": [
//!     {"name": "C1", "scope": ["X", "Y"], "tuples": [["a", "b"]], "tuple_weights": [3]}
//!   ],
//!   "unary_weights": {"X=a": "1/2"}
//! }
//! ```
//!
//! Tuple values follow scope order, `tuple_weights[i]` weighs `tuples[i]`,
//! and weights are integers or `"p/q"` strings. Serialization is canonical:
//! keys in the order above, variables and values in declaration order.

use std::collections::BTreeMap;

use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::error::Error;
use crate::model::{Constraint, CspInstance, Rational, Tuple, UnaryCostFunction, RESERVED_PREFIX};

/// Parser policy knobs.
#[derive(Clone, Debug, Default)]
pub struct ParseOptions {
    /// Accept names starting with the reserved `__` prefix. Off by default;
    /// turn on to re-read instances produced by the converters.
    pub allow_reserved_names: bool,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInstance {
    variables: Vec<String>,
    domain: Vec<String>,
    constraints: Vec<RawConstraint>,
    #[serde(default)]
    unary_weights: Option<BTreeMap<String, Rational>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConstraint {
    name: String,
    scope: Vec<String>,
    tuples: Vec<Vec<String>>,
    #[serde(default)]
    tuple_weights: Option<Vec<Rational>>,
}

/// Parses an instance file with the default (strict) options.
pub fn parse_instance(text: &str) -> Result<(CspInstance, Option<UnaryCostFunction>), Error> {
    parse_instance_with(text, &ParseOptions::default())
}

/// Parses an instance file, reporting syntax errors with their position and
/// semantic errors with the offending entity.
pub fn parse_instance_with(
    text: &str,
    options: &ParseOptions,
) -> Result<(CspInstance, Option<UnaryCostFunction>), Error> {
    let raw: RawInstance = serde_json::from_str(text).map_err(|e| Error::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;

    if !options.allow_reserved_names {
        for v in &raw.variables {
            check_reserved("variable", v)?;
        }
        for u in &raw.domain {
            check_reserved("value", u)?;
        }
        for c in &raw.constraints {
            check_reserved("constraint", &c.name)?;
        }
    }
    for v in &raw.variables {
        if v.contains('=') {
            return Err(Error::semantic(format!(
                "variable name `{v}` may not contain `=`"
            )));
        }
    }

    let mut constraints = Vec::with_capacity(raw.constraints.len());
    for rc in raw.constraints {
        let mut seen_scope = std::collections::BTreeSet::new();
        for v in &rc.scope {
            if !seen_scope.insert(v) {
                return Err(Error::semantic(format!(
                    "constraint `{}` repeats variable `{v}` in its scope",
                    rc.name
                )));
            }
        }
        let mut tuples = Vec::with_capacity(rc.tuples.len());
        for row in &rc.tuples {
            if row.len() != rc.scope.len() {
                return Err(Error::semantic(format!(
                    "constraint `{}` has a tuple of arity {} but scope of arity {}",
                    rc.name,
                    row.len(),
                    rc.scope.len()
                )));
            }
            tuples.push(Tuple::from_pairs(
                rc.scope.iter().cloned().zip(row.iter().cloned()),
            )?);
        }
        let mut c = Constraint::new(rc.name, rc.scope, tuples)?;
        if let Some(weights) = rc.tuple_weights {
            c = c.with_tuple_weights(weights)?;
        }
        constraints.push(c);
    }

    let instance = CspInstance::new(raw.variables, raw.domain, constraints)?;

    let weights = match raw.unary_weights {
        None => None,
        Some(map) => {
            let mut w = UnaryCostFunction::new();
            for (key, weight) in map {
                let (var, val) = key.split_once('=').ok_or_else(|| {
                    Error::semantic(format!(
                        "unary weight key `{key}` is not of the form VAR=VAL"
                    ))
                })?;
                if !instance.variables().iter().any(|x| x == var) {
                    return Err(Error::semantic(format!(
                        "unary weight for undeclared variable `{var}`"
                    )));
                }
                if !instance.domain().iter().any(|x| x == val) {
                    return Err(Error::semantic(format!(
                        "unary weight for undeclared value `{val}`"
                    )));
                }
                w.set(var, val, weight);
            }
            Some(w)
        }
    };

    Ok((instance, weights))
}

fn check_reserved(kind: &str, name: &str) -> Result<(), Error> {
    if name.starts_with(RESERVED_PREFIX) {
        return Err(Error::semantic(format!(
            "{kind} name `{name}` uses the reserved `{RESERVED_PREFIX}` prefix"
        )));
    }
    Ok(())
}

/// Serializes an instance (and optional unary weights) in canonical form.
pub fn serialize_instance(instance: &CspInstance, weights: Option<&UnaryCostFunction>) -> String {
    let mut root = Map::new();
    root.insert("variables".into(), json!(instance.variables()));
    root.insert("domain".into(), json!(instance.domain()));

    let constraints: Vec<Value> = instance
        .constraints()
        .iter()
        .map(|c| {
            let mut obj = Map::new();
            obj.insert("name".into(), json!(c.name()));
            obj.insert("scope".into(), json!(c.scope()));
            let rows: Vec<Vec<&str>> = c
                .tuples()
                .iter()
                .map(|t| c.scope().iter().map(|v| t.get(v).unwrap()).collect())
                .collect();
            obj.insert("tuples".into(), json!(rows));
            if let Some(w) = c.tuple_weights() {
                obj.insert("tuple_weights".into(), json!(w));
            }
            Value::Object(obj)
        })
        .collect();
    root.insert("constraints".into(), Value::Array(constraints));

    if let Some(w) = weights {
        if !w.is_empty() {
            let mut obj = Map::new();
            // Declaration order of variables, then of values.
            for var in instance.variables() {
                for val in instance.domain() {
                    let weight = w.get(var, val);
                    if !weight.is_zero() {
                        obj.insert(format!("{var}={val}"), json!(weight));
                    }
                }
            }
            root.insert("unary_weights".into(), Value::Object(obj));
        }
    }

    serde_json::to_string_pretty(&Value::Object(root)).expect("instance serialization")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_instance() {
        let text = r#"{"variables":["X"],"domain":["a"],
            "constraints":[{"name":"C","scope":["X"],"tuples":[["a"]]}]}"#;
        let (p, w) = parse_instance(text).unwrap();
        assert_eq!(p.variables().len(), 1);
        assert_eq!(p.constraints().len(), 1);
        assert!(w.is_none());
    }

    #[test]
    fn undeclared_value_names_the_entity() {
        let text = r#"{"variables":["X"],"domain":["a"],
            "constraints":[{"name":"C","scope":["X"],"tuples":[["b"]]}]}"#;
        let err = parse_instance(text).unwrap_err();
        assert!(err.to_string().contains("`b`"), "got: {err}");
    }

    #[test]
    fn syntax_error_reports_position() {
        let err = parse_instance("{\n  \"variables\": [,]\n}").unwrap_err();
        match err {
            Error::Syntax { line, .. } => assert_eq!(line, 2),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn duplicate_scope_variable_rejected() {
        let text = r#"{"variables":["X"],"domain":["a"],
            "constraints":[{"name":"C","scope":["X","X"],"tuples":[["a","a"]]}]}"#;
        let err = parse_instance(text).unwrap_err();
        assert!(err.to_string().contains("repeats variable"), "got: {err}");
    }

    #[test]
    fn weight_count_mismatch_rejected() {
        let text = r#"{"variables":["X"],"domain":["a"],
            "constraints":[{"name":"C","scope":["X"],"tuples":[["a"]],"tuple_weights":[1,2]}]}"#;
        let err = parse_instance(text).unwrap_err();
        assert!(err.to_string().contains("tuple weights"), "got: {err}");
    }

    #[test]
    fn reserved_prefix_rejected_by_default() {
        let text = r#"{"variables":["__D1"],"domain":["a"],
            "constraints":[{"name":"C","scope":["__D1"],"tuples":[["a"]]}]}"#;
        assert!(parse_instance(text).is_err());
        let opts = ParseOptions {
            allow_reserved_names: true,
        };
        assert!(parse_instance_with(text, &opts).is_ok());
    }

    #[test]
    fn parse_serialize_parse_is_a_fixpoint() {
        let text = r#"{"variables":["X","Y"],"domain":["a","b"],
            "constraints":[
              {"name":"C1","scope":["X","Y"],"tuples":[["a","b"],["b","a"]],"tuple_weights":[1,"1/2"]}
            ],
            "unary_weights":{"X=a":2,"Y=b":"3/4"}}"#;
        let (p1, w1) = parse_instance(text).unwrap();
        let out1 = serialize_instance(&p1, w1.as_ref());
        let (p2, w2) = parse_instance(&out1).unwrap();
        assert_eq!(p1, p2);
        assert_eq!(w1, w2);
        let out2 = serialize_instance(&p2, w2.as_ref());
        assert_eq!(out1, out2);
    }
}
