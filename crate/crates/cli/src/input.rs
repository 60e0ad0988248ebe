//! Loading command inputs: declaration files, named objects inside them,
//! linear-system exports and minion specifications.
//!
//! An object argument is `FILE` or `FILE:NAME`. Without a name the file
//! must declare exactly one object of the requested kind. Files whose first
//! non-blank character is `{` are read as JSON, either bare or wrapped in
//! the `{kind, payload, meta}` envelope that `--format json` writes.

use std::path::Path;

use serde_json::Value;

use cspforge::datalog::{Interpretation, Program, UnionGadget};
use cspforge::gadgets::{Gadget, ProjectiveGadget};
use cspforge::labelcover::LabelCoverInstance;
use cspforge::minions::{omega, polymorphism_minion, projections, Minion};
use cspforge::relax::{GroupSystem, LinearSystem};
use cspforge::structures::Structure;
use cspforge::text::{
    group_system_from_json, label_cover_from_json, linear_system_from_json, parse_document, parse_group_system,
    parse_linear_system, structure_from_json, Document,
};
use cspforge::{Error, Result};

/// A file argument split into its path and optional object name.
struct ObjectRef<'a> {
    path: &'a str,
    name: Option<&'a str>,
}

fn split_ref(arg: &str) -> ObjectRef<'_> {
    if !Path::new(arg).exists() {
        if let Some((path, name)) = arg.rsplit_once(':') {
            if !path.is_empty() && !name.is_empty() {
                return ObjectRef { path, name: Some(name) };
            }
        }
    }
    ObjectRef { path: arg, name: None }
}

fn read(path: &str) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Usage(format!("cannot read `{path}`: {e}")))
}

/// The JSON value of a file, unwrapping an output envelope.
fn json_payload(text: &str, path: &str) -> Result<Option<(Option<String>, Value)>> {
    if !text.trim_start().starts_with('{') {
        return Ok(None);
    }
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Usage(format!("{path}: invalid JSON: {e}")))?;
    match (v.get("kind").and_then(Value::as_str), v.get("payload")) {
        (Some(kind), Some(payload)) => Ok(Some((Some(kind.to_string()), payload.clone()))),
        _ => Ok(Some((None, v))),
    }
}

fn located(path: &str, e: Error) -> Error {
    match e {
        Error::Parse { line, column, message } => Error::Parse {
            line,
            column,
            message: format!("{path}: {message}"),
        },
        other => other,
    }
}

fn document(path: &str) -> Result<Document> {
    let text = read(path)?;
    if text.contains("include") {
        // Includes are resolved relative to the including file.
        cspforge::text::parse_file(Path::new(path)).map_err(|e| located(path, e))
    } else {
        parse_document(&text).map_err(|e| located(path, e))
    }
}

fn pick<'a, T>(items: &'a [(String, T)], r: &ObjectRef<'_>, kind: &str) -> Result<(String, &'a T)> {
    match r.name {
        Some(name) => items
            .iter()
            .rev()
            .find(|(n, _)| n == name)
            .map(|(n, t)| (n.clone(), t))
            .ok_or_else(|| Error::Usage(format!("{}: no {kind} named `{name}`", r.path))),
        None => match items {
            [(n, t)] => Ok((n.clone(), t)),
            [] => Err(Error::Usage(format!("{}: declares no {kind}", r.path))),
            _ => {
                let names: Vec<&str> = items.iter().map(|(n, _)| n.as_str()).collect();
                Err(Error::Usage(format!(
                    "{}: declares several {kind}s ({}); select one as {}:NAME",
                    r.path,
                    names.join(", "),
                    r.path
                )))
            }
        },
    }
}

/// A structure from a declaration file or a JSON export.
pub fn structure(arg: &str) -> Result<(String, Structure)> {
    let r = split_ref(arg);
    let text = read(r.path)?;
    if let Some((_, payload)) = json_payload(&text, r.path)? {
        let v = payload.get("structure").unwrap_or(&payload);
        return Ok((stem(r.path), structure_from_json(v)?));
    }
    let doc = document(r.path)?;
    let (n, s) = pick(&doc.structures, &r, "structure")?;
    Ok((n, s.clone()))
}

/// A label cover instance from a declaration file or a JSON export.
pub fn label_cover(arg: &str) -> Result<(String, LabelCoverInstance)> {
    let r = split_ref(arg);
    let text = read(r.path)?;
    if let Some((_, payload)) = json_payload(&text, r.path)? {
        let v = payload.get("label_cover").unwrap_or(&payload);
        return Ok((stem(r.path), label_cover_from_json(v)?));
    }
    let doc = document(r.path)?;
    let (n, s) = pick(&doc.label_covers, &r, "label cover instance")?;
    Ok((n, s.clone()))
}

pub fn program(arg: &str) -> Result<(String, Program)> {
    let r = split_ref(arg);
    let doc = document(r.path)?;
    let (n, p) = pick(&doc.programs, &r, "program")?;
    Ok((n, p.clone()))
}

pub fn interpretation(arg: &str) -> Result<(String, Interpretation)> {
    let r = split_ref(arg);
    let doc = document(r.path)?;
    let (n, p) = pick(&doc.interpretations, &r, "interpretation")?;
    Ok((n, p.clone()))
}

pub fn union(arg: &str) -> Result<(String, UnionGadget)> {
    let r = split_ref(arg);
    let doc = document(r.path)?;
    let (n, p) = pick(&doc.unions, &r, "union")?;
    Ok((n, p.clone()))
}

/// A gadget, either general or projective.
pub enum AnyGadget {
    General(Gadget),
    Projective(ProjectiveGadget),
}

pub fn gadget(arg: &str) -> Result<(String, AnyGadget)> {
    let r = split_ref(arg);
    let doc = document(r.path)?;
    let mut all: Vec<(String, AnyGadget)> = Vec::new();
    all.extend(doc.gadgets.iter().map(|(n, g)| (n.clone(), AnyGadget::General(g.clone()))));
    all.extend(doc.projective.iter().map(|(n, g)| (n.clone(), AnyGadget::Projective(g.clone()))));
    let (n, _) = pick(&all, &r, "gadget")?;
    let idx = all.iter().rposition(|(m, _)| *m == n).expect("picked from the list");
    Ok((n, all.swap_remove(idx).1))
}

/// Either operand of `compose`.
pub enum Composable {
    Interpretation(Interpretation),
    Union(UnionGadget),
}

pub fn composable(arg: &str) -> Result<(String, Composable)> {
    let r = split_ref(arg);
    let doc = document(r.path)?;
    let mut all: Vec<(String, Composable)> = Vec::new();
    all.extend(doc.interpretations.iter().map(|(n, i)| (n.clone(), Composable::Interpretation(i.clone()))));
    all.extend(doc.unions.iter().map(|(n, u)| (n.clone(), Composable::Union(u.clone()))));
    let (n, _) = pick(&all, &r, "interpretation or union")?;
    let idx = all.iter().rposition(|(m, _)| *m == n).expect("picked from the list");
    Ok((n, all.swap_remove(idx).1))
}

/// A linear system from its textual or JSON export.
pub fn linear_system(path: &str) -> Result<LinearSystem> {
    let text = read(path)?;
    match json_payload(&text, path)? {
        Some((_, payload)) => linear_system_from_json(payload.get("system").unwrap_or(&payload)),
        None => parse_linear_system(&text).map_err(|e| located(path, e)),
    }
}

/// A group system from its textual or JSON export.
pub fn group_system(path: &str) -> Result<GroupSystem> {
    let text = read(path)?;
    match json_payload(&text, path)? {
        Some((_, payload)) => group_system_from_json(payload.get("system").unwrap_or(&payload)),
        None => parse_group_system(&text).map_err(|e| located(path, e)),
    }
}

fn stem(path: &str) -> String {
    Path::new(path)
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("input")
        .to_string()
}

/// Builds a minion from a textual description:
///
/// * `proj` — the projections;
/// * `pol(A)` — the polymorphisms of the structure `A`;
/// * `pol(A,B)` — the polymorphisms from `A` to `B`;
/// * `omega(SPEC)` — the `ω` construction applied to another minion.
///
/// Structures are file arguments as everywhere else.
pub fn minion(spec: &str, max_arity: usize) -> Result<Minion> {
    let spec = spec.trim();
    let call = |prefix: &str| -> Option<&str> {
        spec.strip_prefix(prefix)
            .map(str::trim_start)
            .and_then(|s| s.strip_prefix('('))
            .and_then(|s| s.strip_suffix(')'))
    };
    if spec == "proj" {
        return Ok(projections(max_arity));
    }
    if let Some(inner) = call("omega") {
        return Ok(omega(&minion(inner, max_arity)?));
    }
    if let Some(inner) = call("pol") {
        let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
        let (a, b) = match parts.as_slice() {
            [a] => (structure(a)?.1, None),
            [a, b] => (structure(a)?.1, Some(structure(b)?.1)),
            _ => return Err(Error::Usage(format!("`pol` takes one or two structures, got `{inner}`"))),
        };
        let b = b.as_ref().unwrap_or(&a);
        return polymorphism_minion(&a, b, max_arity);
    }
    Err(Error::Usage(format!(
        "unknown minion `{spec}`; expected proj, pol(FILE), pol(FILE,FILE) or omega(SPEC)"
    )))
}
