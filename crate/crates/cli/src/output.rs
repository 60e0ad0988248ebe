//! Command results and their text and JSON renderings.
//!
//! Every command produces a [`Report`]: an optional verdict that decides
//! the exit status, a one-line summary, a text body and a JSON payload.
//! With `--format json` the output is a single object
//! `{"kind": ..., "payload": ..., "meta": {"seed": ...}}`.

use serde_json::{json, Value};

use cspforge::labelcover::LabelCoverInstance;
use cspforge::minions::{Minion, MinionMap};
use cspforge::structures::{Homomorphism, Structure};
use cspforge::text::{label_cover_to_json, print_document, structure_to_json, Document};

/// The outcome of one command.
pub struct Report {
    pub kind: &'static str,
    /// `Some(true)` exits 0, `Some(false)` exits 1, `None` (pure
    /// construction) exits 0.
    pub verdict: Option<bool>,
    pub summary: String,
    pub body: String,
    pub payload: Value,
    /// Warnings, printed to standard error.
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(kind: &'static str, summary: impl Into<String>) -> Self {
        Report {
            kind,
            verdict: None,
            summary: summary.into(),
            body: String::new(),
            payload: json!({}),
            notes: Vec::new(),
        }
    }

    pub fn verdict(mut self, v: bool) -> Self {
        self.verdict = Some(v);
        self
    }

    pub fn body(mut self, body: impl Into<String>) -> Self {
        self.body = body.into();
        self
    }

    pub fn payload(mut self, payload: Value) -> Self {
        self.payload = payload;
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn exit_code(&self) -> i32 {
        match self.verdict {
            Some(false) => 1,
            _ => 0,
        }
    }

    /// Text rendering: the summary line, then the body.
    pub fn text(&self) -> String {
        let mut out = format!("{}\n", self.summary);
        if !self.body.is_empty() {
            out.push_str(&self.body);
            if !self.body.ends_with('\n') {
                out.push('\n');
            }
        }
        out
    }

    /// JSON rendering as one envelope object.
    pub fn json(&self, seed: u64) -> Value {
        let mut payload = self.payload.clone();
        if let (Some(v), Value::Object(map)) = (self.verdict, &mut payload) {
            map.entry("verdict").or_insert(json!(v));
        }
        json!({ "kind": self.kind, "payload": payload, "meta": { "seed": seed } })
    }
}

/// A document declaring the given structures (and their signatures).
pub fn structures_text(items: &[(&str, &Structure)]) -> String {
    let mut doc = Document::new();
    for (name, s) in items {
        doc.structures.push((name.to_string(), (*s).clone()));
    }
    doc.close_signatures();
    print_document(&doc).unwrap_or_else(|_| items.iter().map(|(n, s)| format!("# {n}\n{s}")).collect())
}

pub fn label_cover_text(name: &str, l: &LabelCoverInstance) -> String {
    let mut doc = Document::new();
    doc.label_covers.push((name.to_string(), l.clone()));
    print_document(&doc).unwrap_or_default()
}

pub fn document_text(mut doc: Document) -> String {
    doc.close_signatures();
    print_document(&doc).unwrap_or_default()
}

pub fn structure_payload(name: &str, s: &Structure) -> Value {
    json!({ "name": name, "structure": structure_to_json(s), "text": structures_text(&[(name, s)]) })
}

pub fn label_cover_payload(name: &str, l: &LabelCoverInstance) -> Value {
    json!({ "name": name, "label_cover": label_cover_to_json(l), "text": label_cover_text(name, l) })
}

/// One line per type: `t: a -> x, b -> y`.
pub fn homomorphism_text(h: &Homomorphism, source: &Structure, target: &Structure) -> String {
    let sig = source.signature();
    let mut out = String::new();
    for (t, map) in h.maps.iter().enumerate() {
        let pairs: Vec<String> = map
            .iter()
            .enumerate()
            .map(|(e, &f)| format!("{} -> {}", source.element_name(t, e), target.element_name(t, f)))
            .collect();
        out.push_str(&format!("{}: {}\n", sig.type_name(t), pairs.join(", ")));
    }
    out
}

/// Element counts per arity, and the elements themselves when there are
/// few of them.
pub fn minion_text(m: &Minion) -> String {
    const SHOWN: usize = 32;
    let mut out = format!("minion {} truncated at arity {}\n", m.name(), m.max_arity());
    for n in 1..=m.max_arity() {
        let elems = m.elements(n);
        out.push_str(&format!("arity {n}: {} elements", elems.len()));
        if elems.len() <= SHOWN {
            out.push_str(&format!(" {{ {} }}", elems.join(", ")));
        }
        out.push('\n');
    }
    out
}

pub fn minion_payload(m: &Minion) -> Value {
    json!({
        "name": m.name(),
        "max_arity": m.max_arity(),
        "sizes": (1..=m.max_arity()).map(|n| m.size(n)).collect::<Vec<_>>(),
        "elements": (1..=m.max_arity()).map(|n| m.elements(n).to_vec()).collect::<Vec<_>>(),
    })
}

/// One line per arity listing the images of the source elements.
pub fn minion_map_text(h: &MinionMap, source: &Minion, target: &Minion) -> String {
    let mut out = String::new();
    for n in 1..=source.max_arity().min(target.max_arity()) {
        let pairs: Vec<String> = (0..source.size(n))
            .map(|f| format!("{} -> {}", source.render(n, f), target.render(n, h.apply(n, f))))
            .collect();
        out.push_str(&format!("arity {n}: {}\n", pairs.join(", ")));
    }
    out
}
