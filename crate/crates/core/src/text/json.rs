//! JSON encodings of signatures, structures, homomorphisms, label cover
//! instances and linear/group systems.
//!
//! Element, type and symbol references use names; label cover constraints
//! and system rows reference variables by index, since variable names need
//! not be unique. Exact numbers are strings (`"3/2"`, `"-4"`).

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::labelcover::LabelCoverInstance;
use crate::relax::{GroupSystem, LinearSystem, Modulus};
use crate::structures::{Homomorphism, Signature, Structure};

fn bad(message: impl Into<String>) -> Error {
    Error::Parse {
        line: 0,
        column: 0,
        message: format!("JSON: {}", message.into()),
    }
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| bad(format!("missing field `{key}`")))
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| bad(format!("`{what}` must be an array")))
}

fn string<'a>(v: &'a Value, what: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| bad(format!("`{what}` must be a string")))
}

fn index(v: &Value, what: &str) -> Result<usize> {
    v.as_u64()
        .map(|i| i as usize)
        .ok_or_else(|| bad(format!("`{what}` must be a nonnegative integer")))
}

fn strings(v: &Value, what: &str) -> Result<Vec<String>> {
    array(v, what)?.iter().map(|x| string(x, what).map(str::to_string)).collect()
}

fn number<T: std::str::FromStr>(v: &Value, what: &str) -> Result<T> {
    let s = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        _ => return Err(bad(format!("`{what}` must be a number or a numeric string"))),
    };
    s.parse().map_err(|_| bad(format!("`{what}`: `{s}` is not a number")))
}

pub fn signature_to_json(sig: &Signature) -> Value {
    json!({
        "types": sig.types(),
        "symbols": sig.symbols().iter().map(|s| json!({
            "name": s.name,
            "arity": s.arity.iter().map(|&t| sig.type_name(t)).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    })
}

pub fn signature_from_json(v: &Value) -> Result<Signature> {
    let mut sig = Signature::new();
    for t in strings(field(v, "types")?, "types")? {
        sig.add_type(t)?;
    }
    for s in array(field(v, "symbols")?, "symbols")? {
        let name = string(field(s, "name")?, "name")?;
        let arity = strings(field(s, "arity")?, "arity")?
            .iter()
            .map(|t| sig.type_index(t).ok_or_else(|| bad(format!("unknown type `{t}`"))))
            .collect::<Result<Vec<_>>>()?;
        sig.add_symbol(name, arity)?;
    }
    Ok(sig)
}

pub fn structure_to_json(s: &Structure) -> Value {
    let sig = s.signature();
    let domains: Map<String, Value> = (0..sig.type_count())
        .map(|t| (sig.type_name(t).to_string(), json!(s.domain(t))))
        .collect();
    let relations: Map<String, Value> = (0..sig.symbol_count())
        .map(|r| {
            let tuples: Vec<Vec<&str>> = s
                .relation(r)
                .iter()
                .map(|tuple| tuple.iter().zip(sig.arity(r)).map(|(&e, &t)| s.element_name(t, e)).collect())
                .collect();
            (sig.symbol(r).name.clone(), json!(tuples))
        })
        .collect();
    json!({ "signature": signature_to_json(sig), "domains": domains, "relations": relations })
}

pub fn structure_from_json(v: &Value) -> Result<Structure> {
    let sig = Arc::new(signature_from_json(field(v, "signature")?)?);
    let mut s = Structure::new(sig.clone());
    let domains = field(v, "domains")?;
    for t in 0..sig.type_count() {
        let Some(names) = domains.get(sig.type_name(t)) else { continue };
        for n in strings(names, "domain")? {
            if s.element_index(t, &n).is_some() {
                return Err(bad(format!("element `{n}` listed twice")));
            }
            s.add_element(t, n);
        }
    }
    let relations = field(v, "relations")?;
    for r in 0..sig.symbol_count() {
        let Some(tuples) = relations.get(&sig.symbol(r).name) else { continue };
        for tuple in array(tuples, "relation")? {
            let names = strings(tuple, "tuple")?;
            let arity = sig.arity(r);
            if names.len() != arity.len() {
                return Err(bad(format!("tuple of the wrong length for `{}`", sig.symbol(r).name)));
            }
            let ids = names
                .iter()
                .zip(arity)
                .map(|(n, &t)| s.element_index(t, n).ok_or_else(|| bad(format!("unknown element `{n}`"))))
                .collect::<Result<Vec<_>>>()?;
            s.add_tuple(r, ids)?;
        }
    }
    Ok(s)
}

/// Encodes a homomorphism between two structures as a name map per type.
pub fn homomorphism_to_json(h: &Homomorphism, source: &Structure, target: &Structure) -> Value {
    let sig = source.signature();
    let maps: Map<String, Value> = h
        .maps
        .iter()
        .enumerate()
        .map(|(t, m)| {
            let entries: Map<String, Value> = m
                .iter()
                .enumerate()
                .map(|(e, &f)| (source.element_name(t, e).to_string(), json!(target.element_name(t, f))))
                .collect();
            (sig.type_name(t).to_string(), Value::Object(entries))
        })
        .collect();
    Value::Object(maps)
}

pub fn label_cover_to_json(l: &LabelCoverInstance) -> Value {
    json!({
        "variables": l.variables().iter().map(|v| json!({"name": v.name, "labels": v.labels})).collect::<Vec<_>>(),
        "constraints": l.constraints().iter().map(|c| json!({"from": c.from, "to": c.to, "map": c.map})).collect::<Vec<_>>(),
    })
}

pub fn label_cover_from_json(v: &Value) -> Result<LabelCoverInstance> {
    let mut l = LabelCoverInstance::new();
    for var in array(field(v, "variables")?, "variables")? {
        l.add_variable(string(field(var, "name")?, "name")?, strings(field(var, "labels")?, "labels")?);
    }
    for c in array(field(v, "constraints")?, "constraints")? {
        let map = array(field(c, "map")?, "map")?
            .iter()
            .map(|x| index(x, "map"))
            .collect::<Result<Vec<_>>>()?;
        l.add_constraint(index(field(c, "from")?, "from")?, index(field(c, "to")?, "to")?, map)?;
    }
    Ok(l)
}

pub fn linear_system_to_json(s: &LinearSystem) -> Value {
    json!({
        "variables": s.variables().iter().map(|v| json!({
            "name": v.name, "nonnegative": v.nonnegative, "at_most_one": v.at_most_one,
        })).collect::<Vec<_>>(),
        "rows": s.rows().iter().map(|r| json!({
            "coeffs": r.coeffs.iter().map(|(i, c)| json!([i, c.to_string()])).collect::<Vec<_>>(),
            "rhs": r.rhs.to_string(),
        })).collect::<Vec<_>>(),
    })
}

fn rows<C: std::str::FromStr>(v: &Value) -> Result<Vec<(Vec<(usize, C)>, C)>> {
    array(field(v, "rows")?, "rows")?
        .iter()
        .map(|r| {
            let coeffs = array(field(r, "coeffs")?, "coeffs")?
                .iter()
                .map(|pair| match pair.as_array().map(Vec::as_slice) {
                    Some([i, c]) => Ok((index(i, "variable")?, number(c, "coefficient")?)),
                    _ => Err(bad("a coefficient must be a `[variable, value]` pair")),
                })
                .collect::<Result<Vec<_>>>()?;
            Ok((coeffs, number(field(r, "rhs")?, "rhs")?))
        })
        .collect()
}

pub fn linear_system_from_json(v: &Value) -> Result<LinearSystem> {
    let mut s = LinearSystem::new();
    for var in array(field(v, "variables")?, "variables")? {
        let flag = |k: &str| -> Result<bool> {
            field(var, k)?
                .as_bool()
                .ok_or_else(|| bad(format!("`{k}` must be a boolean")))
        };
        s.add_variable(string(field(var, "name")?, "name")?, flag("nonnegative")?, flag("at_most_one")?);
    }
    for (coeffs, rhs) in rows::<BigRational>(v)? {
        s.add_row(coeffs, rhs)?;
    }
    Ok(s)
}

pub fn group_system_to_json(s: &GroupSystem) -> Value {
    json!({
        "modulus": s.modulus().to_string(),
        "variables": s.variables(),
        "rows": s.rows().iter().map(|r| json!({
            "coeffs": r.coeffs.iter().map(|(i, c)| json!([i, c.to_string()])).collect::<Vec<_>>(),
            "rhs": r.rhs.to_string(),
        })).collect::<Vec<_>>(),
    })
}

pub fn group_system_from_json(v: &Value) -> Result<GroupSystem> {
    let modulus: Modulus = string(field(v, "modulus")?, "modulus")?.parse()?;
    let mut s = GroupSystem::new(modulus);
    for name in strings(field(v, "variables")?, "variables")? {
        s.add_variable(name);
    }
    for (coeffs, rhs) in rows::<BigInt>(v)? {
        s.add_row(coeffs, rhs)?;
    }
    Ok(s)
}
