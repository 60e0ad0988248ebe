//! The declaration language, the textual export of linear systems, and JSON
//! encodings.
//!
//! A document mixes named declarations:
//!
//! ```text
//! # comments run to the end of the line
//! include "graphs.csp";
//! signature G { type v; rel E : v v; }
//! structure K2 : G { v = { 0, 1 }; E = { (0,1), (1,0) }; }
//! program Odd : G {
//!   idb P : v v; idb C : ; output C;
//!   P(x,y) :- E(x,y).
//!   P(x,w) :- P(x,y), P(y,z), P(z,w).
//!   C :- P(x,x).
//! }
//! interpretation Line : G -> G {
//!   type v := program { idb D : v v; output D; D(x,y) :- E(x,y). };
//!   rel E := program { idb F : v v v v; output F; F(x,y,y,z) :- E(x,y), E(y,z). };
//! }
//! union U : G2 -> G { type a -> v; type b -> v; rel R -> E; }
//! gadget Path : G -> G { node v := structure { v = { 0 }; };
//!   edge E := P4; glue E[1] := { 0 -> 0 }; glue E[2] := { 0 -> 3 }; }
//! projective Par : G -> G { node v := K2; edge E := { 0 -> 1, 1 -> 0 }; }
//! labelcover L { var u : { a, b }; var w : { c };
//!   constraint u -> w pi = { a -> c, b -> c }; }
//! ```
//!
//! Names are identifiers (`[A-Za-z0-9_][A-Za-z0-9_']*`) or double-quoted
//! strings. Variables of a rule take their types from the positions they
//! occur in; a variable may be annotated as `x:t`, and a rule may be
//! prefixed by `[x:t, y:u]` to fix the order and types of its variables.
//! Elements in a map may be qualified by their type as `t:e`. An unqualified
//! predicate name denotes an IDB when one of that name exists; `edb:R` names
//! the input symbol `R` explicitly.

mod json;
mod lexer;
mod parser;
mod printer;
mod systems;

use std::sync::Arc;

use crate::datalog::{Interpretation, Program, UnionGadget};
use crate::gadgets::{Gadget, ProjectiveGadget};
use crate::labelcover::LabelCoverInstance;
use crate::structures::{Signature, Structure};

pub use json::{
    group_system_from_json, group_system_to_json, homomorphism_to_json, label_cover_from_json, label_cover_to_json,
    linear_system_from_json, linear_system_to_json, signature_from_json, signature_to_json, structure_from_json,
    structure_to_json,
};
pub use parser::{parse_document, parse_file};
pub use systems::{parse_group_system, parse_linear_system};

/// A parsed document: named declarations of every kind, in declaration
/// order per kind.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Document {
    pub signatures: Vec<(String, Arc<Signature>)>,
    pub structures: Vec<(String, Structure)>,
    pub programs: Vec<(String, Program)>,
    pub interpretations: Vec<(String, Interpretation)>,
    pub unions: Vec<(String, UnionGadget)>,
    pub gadgets: Vec<(String, Gadget)>,
    pub projective: Vec<(String, ProjectiveGadget)>,
    pub label_covers: Vec<(String, LabelCoverInstance)>,
}

fn lookup<'a, T>(items: &'a [(String, T)], name: &str) -> Option<&'a T> {
    items.iter().rev().find(|(n, _)| n == name).map(|(_, t)| t)
}

impl Document {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn signature(&self, name: &str) -> Option<&Arc<Signature>> {
        lookup(&self.signatures, name)
    }

    pub fn structure(&self, name: &str) -> Option<&Structure> {
        lookup(&self.structures, name)
    }

    pub fn program(&self, name: &str) -> Option<&Program> {
        lookup(&self.programs, name)
    }

    pub fn interpretation(&self, name: &str) -> Option<&Interpretation> {
        lookup(&self.interpretations, name)
    }

    pub fn union(&self, name: &str) -> Option<&UnionGadget> {
        lookup(&self.unions, name)
    }

    pub fn gadget(&self, name: &str) -> Option<&Gadget> {
        lookup(&self.gadgets, name)
    }

    pub fn projective_gadget(&self, name: &str) -> Option<&ProjectiveGadget> {
        lookup(&self.projective, name)
    }

    pub fn label_cover(&self, name: &str) -> Option<&LabelCoverInstance> {
        lookup(&self.label_covers, name)
    }

    /// The name of a declared signature equal to `sig`, declaring it under
    /// a fresh name derived from `hint` if there is none.
    pub fn name_signature(&mut self, sig: &Arc<Signature>, hint: &str) -> String {
        if let Some((n, _)) = self.signatures.iter().find(|(_, s)| **s == **sig) {
            return n.clone();
        }
        let mut name = hint.to_string();
        let mut i = 1;
        while self.signature(&name).is_some() {
            i += 1;
            name = format!("{hint}{i}");
        }
        self.signatures.push((name.clone(), sig.clone()));
        name
    }

    /// Adds the signatures used by every declared object, so that the
    /// document prints.
    pub fn close_signatures(&mut self) {
        let mut sigs: Vec<Arc<Signature>> = Vec::new();
        sigs.extend(self.structures.iter().map(|(_, s)| s.signature().clone()));
        sigs.extend(self.programs.iter().map(|(_, p)| p.input().clone()));
        for (_, i) in &self.interpretations {
            sigs.extend([i.input().clone(), i.output().clone()]);
        }
        for (_, u) in &self.unions {
            sigs.extend([u.input().clone(), u.output().clone()]);
        }
        for (_, g) in &self.gadgets {
            sigs.extend([g.input().clone(), g.output().clone()]);
        }
        for (_, g) in &self.projective {
            sigs.extend([g.input().clone(), g.output().clone()]);
        }
        for s in sigs {
            self.name_signature(&s, "S");
        }
    }
}

impl std::fmt::Display for Document {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&printer::print_document(self).map_err(|_| std::fmt::Error)?)
    }
}

pub use printer::print_document;
