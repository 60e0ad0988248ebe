//! Recursive-descent parser for documents.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use super::lexer::{tokenize, Tok, Token};
use super::Document;
use crate::datalog::{Atom, Idb, Interpretation, Pred, Program, Rule, UnionGadget, Var};
use crate::error::{Error, Result};
use crate::gadgets::{Gadget, ProjectiveGadget};
use crate::labelcover::LabelCoverInstance;
use crate::structures::{Homomorphism, Signature, Structure};

/// Parses a document. Relative `include` paths resolve against the current
/// directory.
pub fn parse_document(text: &str) -> Result<Document> {
    let mut doc = Document::new();
    parse_into(text, None, &mut doc, &mut Vec::new())?;
    Ok(doc)
}

/// Parses a file. Relative `include` paths resolve against its directory.
pub fn parse_file(path: &Path) -> Result<Document> {
    let mut doc = Document::new();
    include_file(path, &mut doc, &mut Vec::new(), (0, 0))?;
    Ok(doc)
}

fn include_file(path: &Path, doc: &mut Document, stack: &mut Vec<PathBuf>, at: (usize, usize)) -> Result<()> {
    let located = |message: String| Error::Parse {
        line: at.0,
        column: at.1,
        message,
    };
    let canonical = path
        .canonicalize()
        .map_err(|e| located(format!("cannot read `{}`: {e}", path.display())))?;
    if stack.contains(&canonical) {
        return Err(located(format!("`{}` includes itself", path.display())));
    }
    let text = std::fs::read_to_string(&canonical).map_err(|e| located(format!("cannot read `{}`: {e}", path.display())))?;
    stack.push(canonical.clone());
    let result = parse_into(&text, canonical.parent(), doc, stack).map_err(|e| match e {
        Error::Parse { line, column, message } => Error::Parse {
            line,
            column,
            message: format!("{}: {message}", path.display()),
        },
        other => other,
    });
    stack.pop();
    result
}

fn parse_into(text: &str, base: Option<&Path>, doc: &mut Document, stack: &mut Vec<PathBuf>) -> Result<()> {
    let toks = tokenize(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        base: base.map(Path::to_path_buf),
    };
    while !p.done() {
        p.item(doc, stack)?;
    }
    Ok(())
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    base: Option<PathBuf>,
}

type Loc = (usize, usize);

/// A variable occurrence in a rule.
struct VarRef {
    name: String,
    annotation: Option<String>,
    loc: Loc,
}

/// Which kind of predicate an atom names explicitly (`edb:R`, `idb:P`), if
/// any; unqualified names resolve to an IDB first.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Any,
    Edb,
    Idb,
}

enum AtomAst {
    Rel(Kind, String, Vec<VarRef>, Loc),
    Eq(VarRef, VarRef),
}

struct RuleAst {
    declared: Option<Vec<(String, String, Loc)>>,
    head: (String, Vec<VarRef>, Loc),
    body: Vec<AtomAst>,
    loc: Loc,
}

/// An element reference in a map, optionally qualified by its type.
struct ElemRef {
    ty: Option<String>,
    name: String,
    loc: Loc,
}

fn at(loc: Loc, message: impl Into<String>) -> Error {
    Error::Parse {
        line: loc.0,
        column: loc.1,
        message: message.into(),
    }
}

/// Re-locates a library error at a declaration.
fn locate(loc: Loc) -> impl Fn(Error) -> Error {
    move |e| match e {
        e @ Error::Parse { .. } => e,
        other => at(loc, other.to_string()),
    }
}

impl Parser {
    fn done(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn loc(&self) -> Loc {
        match self.toks.get(self.pos).or(self.toks.last()) {
            Some(t) if self.pos < self.toks.len() => (t.line, t.column),
            Some(t) => (t.line, t.column + 1),
            None => (1, 1),
        }
    }

    fn peek_tok(&self, ahead: usize) -> Option<&Tok> {
        self.toks.get(self.pos + ahead).map(|t| &t.tok)
    }

    fn at_punct(&self, p: &str) -> bool {
        matches!(self.peek_tok(0), Some(Tok::Punct(q)) if *q == p)
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(self.peek_tok(0), Some(Tok::Word(w)) if w == kw)
    }

    fn eat_punct(&mut self, p: &str) -> bool {
        if self.at_punct(p) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_punct(&mut self, p: &str) -> Result<()> {
        if self.eat_punct(p) {
            Ok(())
        } else {
            Err(at(self.loc(), format!("expected `{p}`{}", self.found())))
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<()> {
        if self.at_keyword(kw) {
            self.pos += 1;
            Ok(())
        } else {
            Err(at(self.loc(), format!("expected `{kw}`{}", self.found())))
        }
    }

    fn found(&self) -> String {
        match self.peek_tok(0) {
            Some(Tok::Word(w)) => format!(", found `{w}`"),
            Some(Tok::Quoted(w)) => format!(", found \"{w}\""),
            Some(Tok::Punct(p)) => format!(", found `{p}`"),
            None => ", found end of input".into(),
        }
    }

    fn name(&mut self) -> Result<String> {
        match self.peek_tok(0) {
            Some(Tok::Word(w)) | Some(Tok::Quoted(w)) => {
                let w = w.clone();
                self.pos += 1;
                Ok(w)
            }
            _ => Err(at(self.loc(), format!("expected a name{}", self.found()))),
        }
    }

    /// Comma-separated items until `close`, which is consumed.
    fn list<T>(&mut self, close: &str, mut item: impl FnMut(&mut Self) -> Result<T>) -> Result<Vec<T>> {
        let mut out = Vec::new();
        if self.eat_punct(close) {
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            if self.eat_punct(close) {
                return Ok(out);
            }
            self.expect_punct(",")?;
        }
    }

    fn signature_ref(&mut self, doc: &Document) -> Result<Arc<Signature>> {
        let loc = self.loc();
        let name = self.name()?;
        doc.signature(&name)
            .cloned()
            .ok_or_else(|| at(loc, format!("unknown signature `{name}`")))
    }

    fn item(&mut self, doc: &mut Document, stack: &mut Vec<PathBuf>) -> Result<()> {
        let loc = self.loc();
        let kw = match self.peek_tok(0) {
            Some(Tok::Word(w)) => w.clone(),
            _ => return Err(at(loc, format!("expected a declaration{}", self.found()))),
        };
        self.pos += 1;
        match kw.as_str() {
            "include" => {
                let file = match self.peek_tok(0) {
                    Some(Tok::Quoted(f)) => f.clone(),
                    _ => return Err(at(self.loc(), "expected a quoted file name")),
                };
                self.pos += 1;
                self.expect_punct(";")?;
                let path = match &self.base {
                    Some(b) => b.join(&file),
                    None => PathBuf::from(&file),
                };
                include_file(&path, doc, stack, loc)
            }
            "signature" => {
                let name = self.name()?;
                let sig = self.signature_body()?;
                doc.signatures.push((name, Arc::new(sig)));
                Ok(())
            }
            "structure" => {
                let name = self.name()?;
                self.expect_punct(":")?;
                let sig = self.signature_ref(doc)?;
                let s = self.structure_body(&sig)?;
                doc.structures.push((name, s));
                Ok(())
            }
            "program" => {
                let name = self.name()?;
                self.expect_punct(":")?;
                let sig = self.signature_ref(doc)?;
                let p = self.program_body(&sig)?;
                doc.programs.push((name, p));
                Ok(())
            }
            "interpretation" => {
                let name = self.name()?;
                let i = self.interpretation(doc, loc)?;
                doc.interpretations.push((name, i));
                Ok(())
            }
            "union" => {
                let name = self.name()?;
                let u = self.union(doc, loc)?;
                doc.unions.push((name, u));
                Ok(())
            }
            "gadget" => {
                let name = self.name()?;
                let g = self.gadget(doc, loc)?;
                doc.gadgets.push((name, g));
                Ok(())
            }
            "projective" => {
                let name = self.name()?;
                let g = self.projective(doc, loc)?;
                doc.projective.push((name, g));
                Ok(())
            }
            "labelcover" => {
                let name = self.name()?;
                let l = self.label_cover()?;
                doc.label_covers.push((name, l));
                Ok(())
            }
            other => Err(at(loc, format!("unknown declaration `{other}`"))),
        }
    }

    fn signature_body(&mut self) -> Result<Signature> {
        let mut sig = Signature::new();
        self.expect_punct("{")?;
        while !self.eat_punct("}") {
            let loc = self.loc();
            if self.at_keyword("type") {
                self.pos += 1;
                let t = self.name()?;
                sig.add_type(t).map_err(locate(loc))?;
            } else if self.at_keyword("rel") {
                self.pos += 1;
                let r = self.name()?;
                self.expect_punct(":")?;
                let mut arity = Vec::new();
                while !self.at_punct(";") {
                    let tl = self.loc();
                    let t = self.name()?;
                    arity.push(sig.type_index(&t).ok_or_else(|| at(tl, format!("unknown type `{t}`")))?);
                }
                sig.add_symbol(r, arity).map_err(locate(loc))?;
            } else {
                return Err(at(loc, format!("expected `type`, `rel` or `}}`{}", self.found())));
            }
            self.expect_punct(";")?;
        }
        Ok(sig)
    }

    fn structure_body(&mut self, sig: &Arc<Signature>) -> Result<Structure> {
        self.expect_punct("{")?;
        let mut domains: Vec<Option<Vec<String>>> = vec![None; sig.type_count()];
        let mut relations: Vec<(usize, Vec<(Vec<String>, Loc)>, Loc)> = Vec::new();
        while !self.eat_punct("}") {
            let loc = self.loc();
            let name = self.name()?;
            self.expect_punct("=")?;
            self.expect_punct("{")?;
            if let Some(t) = sig.type_index(&name) {
                if domains[t].is_some() {
                    return Err(at(loc, format!("domain of `{name}` given twice")));
                }
                domains[t] = Some(self.list("}", |p| p.name())?);
            } else if let Some(s) = sig.symbol_index(&name) {
                let tuples = self.list("}", |p| {
                    let tl = p.loc();
                    if p.eat_punct("(") {
                        Ok((p.list(")", |q| q.name())?, tl))
                    } else {
                        Ok((vec![p.name()?], tl))
                    }
                })?;
                relations.push((s, tuples, loc));
            } else {
                return Err(at(loc, format!("`{name}` is neither a type nor a symbol of the signature")));
            }
            self.expect_punct(";")?;
        }
        let mut out = Structure::new(sig.clone());
        for (t, names) in domains.into_iter().enumerate() {
            for n in names.unwrap_or_default() {
                if out.element_index(t, &n).is_some() {
                    return Err(at(self.loc(), format!("element `{n}` of type `{}` declared twice", sig.type_name(t))));
                }
                out.add_element(t, n);
            }
        }
        for (s, tuples, _) in relations {
            let arity = sig.arity(s).to_vec();
            for (names, tl) in tuples {
                if names.len() != arity.len() {
                    return Err(at(
                        tl,
                        format!(
                            "tuple of length {} for `{}` of arity {}",
                            names.len(),
                            sig.symbol(s).name,
                            arity.len()
                        ),
                    ));
                }
                let tuple = names
                    .iter()
                    .zip(&arity)
                    .map(|(n, &t)| {
                        out.element_index(t, n)
                            .ok_or_else(|| at(tl, format!("unknown element `{n}` of type `{}`", sig.type_name(t))))
                    })
                    .collect::<Result<Vec<_>>>()?;
                out.add_tuple(s, tuple).map_err(locate(tl))?;
            }
        }
        Ok(out)
    }

    fn structure_ref(&mut self, doc: &Document, sig: &Arc<Signature>) -> Result<Structure> {
        let loc = self.loc();
        if self.at_keyword("structure") && matches!(self.peek_tok(1), Some(Tok::Punct("{"))) {
            self.pos += 1;
            return self.structure_body(sig);
        }
        let name = self.name()?;
        let s = doc
            .structure(&name)
            .ok_or_else(|| at(loc, format!("unknown structure `{name}`")))?;
        if **s.signature() != **sig {
            return Err(at(loc, format!("structure `{name}` has the wrong signature")));
        }
        Ok(s.clone())
    }

    fn var_ref(&mut self) -> Result<VarRef> {
        let loc = self.loc();
        let name = self.name()?;
        let annotation = if self.eat_punct(":") { Some(self.name()?) } else { None };
        Ok(VarRef { name, annotation, loc })
    }

    fn atom(&mut self) -> Result<AtomAst> {
        let loc = self.loc();
        let first = self.var_ref()?;
        if self.eat_punct("=") {
            let second = self.var_ref()?;
            return Ok(AtomAst::Eq(first, second));
        }
        let (kind, name) = match first.annotation {
            None => (Kind::Any, first.name),
            Some(n) if first.name == "edb" => (Kind::Edb, n),
            Some(n) if first.name == "idb" => (Kind::Idb, n),
            Some(_) => return Err(at(self.loc(), "expected `=` after an annotated variable")),
        };
        let args = if self.eat_punct("(") { self.list(")", |p| p.var_ref())? } else { Vec::new() };
        Ok(AtomAst::Rel(kind, name, args, loc))
    }

    fn rule(&mut self) -> Result<RuleAst> {
        let loc = self.loc();
        let declared = if self.eat_punct("[") {
            Some(self.list("]", |p| {
                let l = p.loc();
                let n = p.name()?;
                p.expect_punct(":")?;
                Ok((n, p.name()?, l))
            })?)
        } else {
            None
        };
        let head = match self.atom()? {
            AtomAst::Rel(Kind::Edb, _, _, l) => return Err(at(l, "the head of a rule must be an IDB")),
            AtomAst::Rel(_, n, args, l) => (n, args, l),
            AtomAst::Eq(a, _) => {
                return Err(at(a.loc, "an equality cannot appear in the head of a rule"));
            }
        };
        let mut body = Vec::new();
        if self.eat_punct(":-") {
            loop {
                body.push(self.atom()?);
                if !self.eat_punct(",") {
                    break;
                }
            }
        }
        self.expect_punct(".")?;
        Ok(RuleAst {
            declared,
            head,
            body,
            loc,
        })
    }

    fn program_body(&mut self, sig: &Arc<Signature>) -> Result<Program> {
        let start = self.loc();
        self.expect_punct("{")?;
        let mut idbs: Vec<Idb> = Vec::new();
        let mut output: Option<(String, Loc)> = None;
        let mut rules = Vec::new();
        while !self.eat_punct("}") {
            let loc = self.loc();
            if self.at_keyword("idb") && matches!(self.peek_tok(2), Some(Tok::Punct(":"))) {
                self.pos += 1;
                let name = self.name()?;
                self.expect_punct(":")?;
                let mut arity = Vec::new();
                while !self.at_punct(";") {
                    let tl = self.loc();
                    let t = self.name()?;
                    arity.push(sig.type_index(&t).ok_or_else(|| at(tl, format!("unknown type `{t}`")))?);
                }
                self.expect_punct(";")?;
                if idbs.iter().any(|d| d.name == name) {
                    return Err(at(loc, format!("IDB `{name}` declared twice")));
                }
                idbs.push(Idb { name, arity });
            } else if self.at_keyword("output") && matches!(self.peek_tok(2), Some(Tok::Punct(";"))) {
                self.pos += 1;
                let name = self.name()?;
                self.expect_punct(";")?;
                output = Some((name, loc));
            } else {
                rules.push(self.rule()?);
            }
        }
        let (out_name, out_loc) = output.ok_or_else(|| at(start, "program has no `output` declaration"))?;
        let out = idbs
            .iter()
            .position(|d| d.name == out_name)
            .ok_or_else(|| at(out_loc, format!("output `{out_name}` is not a declared IDB")))?;
        let rules = rules
            .into_iter()
            .map(|r| resolve_rule(r, sig, &idbs))
            .collect::<Result<Vec<_>>>()?;
        Program::new(sig.clone(), idbs, rules, out).map_err(locate(start))
    }

    fn program_ref(&mut self, doc: &Document, sig: &Arc<Signature>) -> Result<Program> {
        let loc = self.loc();
        if self.at_keyword("program") && matches!(self.peek_tok(1), Some(Tok::Punct("{"))) {
            self.pos += 1;
            return self.program_body(sig);
        }
        let name = self.name()?;
        let p = doc.program(&name).ok_or_else(|| at(loc, format!("unknown program `{name}`")))?;
        if **p.input() != **sig {
            return Err(at(loc, format!("program `{name}` has the wrong input signature")));
        }
        Ok(p.clone())
    }

    fn header(&mut self, doc: &Document) -> Result<(Arc<Signature>, Arc<Signature>)> {
        self.expect_punct(":")?;
        let input = self.signature_ref(doc)?;
        self.expect_punct("->")?;
        let output = self.signature_ref(doc)?;
        self.expect_punct("{")?;
        Ok((input, output))
    }

    fn interpretation(&mut self, doc: &Document, start: Loc) -> Result<Interpretation> {
        let (input, output) = self.header(doc)?;
        let mut domains: Vec<Option<Program>> = vec![None; output.type_count()];
        let mut relations: Vec<Option<Program>> = vec![None; output.symbol_count()];
        while !self.eat_punct("}") {
            let loc = self.loc();
            let is_type = if self.at_keyword("type") {
                true
            } else if self.at_keyword("rel") {
                false
            } else {
                return Err(at(loc, format!("expected `type`, `rel` or `}}`{}", self.found())));
            };
            self.pos += 1;
            let nl = self.loc();
            let name = self.name()?;
            self.expect_punct(":=")?;
            let slot = if is_type {
                let t = output.type_index(&name).ok_or_else(|| at(nl, format!("unknown output type `{name}`")))?;
                &mut domains[t]
            } else {
                let s = output
                    .symbol_index(&name)
                    .ok_or_else(|| at(nl, format!("unknown output symbol `{name}`")))?;
                &mut relations[s]
            };
            if slot.is_some() {
                return Err(at(nl, format!("`{name}` defined twice")));
            }
            *slot = Some(self.program_ref(doc, &input)?);
            self.expect_punct(";")?;
        }
        let domains = domains
            .into_iter()
            .enumerate()
            .map(|(t, p)| p.ok_or_else(|| at(start, format!("no program for output type `{}`", output.type_name(t)))))
            .collect::<Result<Vec<_>>>()?;
        let relations = relations
            .into_iter()
            .enumerate()
            .map(|(s, p)| p.ok_or_else(|| at(start, format!("no program for output symbol `{}`", output.symbol(s).name))))
            .collect::<Result<Vec<_>>>()?;
        Interpretation::new(input, output, domains, relations).map_err(locate(start))
    }

    fn union(&mut self, doc: &Document, start: Loc) -> Result<UnionGadget> {
        let (input, output) = self.header(doc)?;
        let mut types = vec![None; input.type_count()];
        let mut symbols = vec![None; input.symbol_count()];
        while !self.eat_punct("}") {
            let loc = self.loc();
            let is_type = self.at_keyword("type");
            if !is_type && !self.at_keyword("rel") {
                return Err(at(loc, format!("expected `type`, `rel` or `}}`{}", self.found())));
            }
            self.pos += 1;
            let from = self.name()?;
            self.expect_punct("->")?;
            let tl = self.loc();
            let to = self.name()?;
            self.expect_punct(";")?;
            if is_type {
                let i = input.type_index(&from).ok_or_else(|| at(loc, format!("unknown input type `{from}`")))?;
                let o = output.type_index(&to).ok_or_else(|| at(tl, format!("unknown output type `{to}`")))?;
                types[i] = Some(o);
            } else {
                let i = input.symbol_index(&from).ok_or_else(|| at(loc, format!("unknown input symbol `{from}`")))?;
                let o = output.symbol_index(&to).ok_or_else(|| at(tl, format!("unknown output symbol `{to}`")))?;
                symbols[i] = Some(o);
            }
        }
        let types = types
            .into_iter()
            .enumerate()
            .map(|(t, o)| o.ok_or_else(|| at(start, format!("input type `{}` is not mapped", input.type_name(t)))))
            .collect::<Result<Vec<_>>>()?;
        let symbols = symbols
            .into_iter()
            .enumerate()
            .map(|(s, o)| o.ok_or_else(|| at(start, format!("input symbol `{}` is not mapped", input.symbol(s).name))))
            .collect::<Result<Vec<_>>>()?;
        UnionGadget::new(input, output, types, symbols).map_err(locate(start))
    }

    fn map_entries(&mut self) -> Result<Vec<(ElemRef, ElemRef)>> {
        self.expect_punct("{")?;
        self.list("}", |p| {
            let a = p.elem_ref()?;
            p.expect_punct("->")?;
            let b = p.elem_ref()?;
            Ok((a, b))
        })
    }

    fn elem_ref(&mut self) -> Result<ElemRef> {
        let loc = self.loc();
        let first = self.name()?;
        if self.eat_punct(":") {
            let name = self.name()?;
            Ok(ElemRef {
                ty: Some(first),
                name,
                loc,
            })
        } else {
            Ok(ElemRef {
                ty: None,
                name: first,
                loc,
            })
        }
    }

    fn gadget(&mut self, doc: &Document, start: Loc) -> Result<Gadget> {
        let (input, output) = self.header(doc)?;
        let mut nodes: Vec<Option<Structure>> = vec![None; input.type_count()];
        let mut edges: Vec<Option<Structure>> = vec![None; input.symbol_count()];
        let mut glue: Vec<(usize, usize, Vec<(ElemRef, ElemRef)>, Loc)> = Vec::new();
        while !self.eat_punct("}") {
            let loc = self.loc();
            if self.at_keyword("node") {
                self.pos += 1;
                let t = self.input_type(&input)?;
                self.expect_punct(":=")?;
                nodes[t] = Some(self.structure_ref(doc, &output)?);
            } else if self.at_keyword("edge") {
                self.pos += 1;
                let s = self.input_symbol(&input)?;
                self.expect_punct(":=")?;
                edges[s] = Some(self.structure_ref(doc, &output)?);
            } else if self.at_keyword("glue") {
                self.pos += 1;
                let s = self.input_symbol(&input)?;
                self.expect_punct("[")?;
                let il = self.loc();
                let i = self.name()?;
                let i: usize = i
                    .parse()
                    .ok()
                    .filter(|&i| i >= 1 && i <= input.arity(s).len())
                    .ok_or_else(|| at(il, format!("position `{i}` out of range for `{}`", input.symbol(s).name)))?;
                self.expect_punct("]")?;
                self.expect_punct(":=")?;
                glue.push((s, i - 1, self.map_entries()?, loc));
            } else {
                return Err(at(loc, format!("expected `node`, `edge`, `glue` or `}}`{}", self.found())));
            }
            self.expect_punct(";")?;
        }
        let nodes = complete(nodes, start, |t| format!("no node structure for type `{}`", input.type_name(t)))?;
        let edges = complete(edges, start, |s| format!("no edge structure for `{}`", input.symbol(s).name))?;
        let mut projections: Vec<Vec<Option<Homomorphism>>> =
            (0..input.symbol_count()).map(|s| vec![None; input.arity(s).len()]).collect();
        for (s, i, entries, loc) in glue {
            let source = &nodes[input.arity(s)[i]];
            projections[s][i] = Some(resolve_map(source, &edges[s], &entries, loc)?);
        }
        let projections = projections
            .into_iter()
            .enumerate()
            .map(|(s, ps)| {
                ps.into_iter()
                    .enumerate()
                    .map(|(i, p)| p.ok_or_else(|| at(start, format!("no glue for `{}[{}]`", input.symbol(s).name, i + 1))))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Gadget::new(input, output, nodes, edges, projections).map_err(locate(start))
    }

    fn projective(&mut self, doc: &Document, start: Loc) -> Result<ProjectiveGadget> {
        let (input, output) = self.header(doc)?;
        let mut nodes: Vec<Option<Structure>> = vec![None; input.type_count()];
        let mut maps: Vec<(usize, Vec<(ElemRef, ElemRef)>, Loc)> = Vec::new();
        while !self.eat_punct("}") {
            let loc = self.loc();
            if self.at_keyword("node") {
                self.pos += 1;
                let t = self.input_type(&input)?;
                self.expect_punct(":=")?;
                nodes[t] = Some(self.structure_ref(doc, &output)?);
            } else if self.at_keyword("edge") {
                self.pos += 1;
                let s = self.input_symbol(&input)?;
                if input.arity(s).len() != 2 {
                    return Err(at(loc, Error::NotBinary(input.symbol(s).name.clone()).to_string()));
                }
                self.expect_punct(":=")?;
                maps.push((s, self.map_entries()?, loc));
            } else {
                return Err(at(loc, format!("expected `node`, `edge` or `}}`{}", self.found())));
            }
            self.expect_punct(";")?;
        }
        let nodes = complete(nodes, start, |t| format!("no node structure for type `{}`", input.type_name(t)))?;
        let mut homs: Vec<Option<Homomorphism>> = vec![None; input.symbol_count()];
        for (s, entries, loc) in maps {
            let (t, u) = (input.arity(s)[0], input.arity(s)[1]);
            homs[s] = Some(resolve_map(&nodes[u], &nodes[t], &entries, loc)?);
        }
        let homs = complete(homs, start, |s| format!("no map for `{}`", input.symbol(s).name))?;
        ProjectiveGadget::new(input, output, nodes, homs).map_err(locate(start))
    }

    fn input_type(&mut self, sig: &Signature) -> Result<usize> {
        let loc = self.loc();
        let n = self.name()?;
        sig.type_index(&n).ok_or_else(|| at(loc, format!("unknown input type `{n}`")))
    }

    fn input_symbol(&mut self, sig: &Signature) -> Result<usize> {
        let loc = self.loc();
        let n = self.name()?;
        sig.symbol_index(&n).ok_or_else(|| at(loc, format!("unknown input symbol `{n}`")))
    }

    fn label_cover(&mut self) -> Result<LabelCoverInstance> {
        let mut out = LabelCoverInstance::new();
        self.expect_punct("{")?;
        while !self.eat_punct("}") {
            let loc = self.loc();
            if self.at_keyword("var") {
                self.pos += 1;
                let name = self.name()?;
                if out.variable_index(&name).is_some() {
                    return Err(at(loc, format!("variable `{name}` declared twice")));
                }
                self.expect_punct(":")?;
                self.expect_punct("{")?;
                let labels = self.list("}", |p| p.name())?;
                for (i, l) in labels.iter().enumerate() {
                    if labels[..i].contains(l) {
                        return Err(at(loc, format!("label `{l}` repeated")));
                    }
                }
                out.add_variable(name, labels);
            } else if self.at_keyword("constraint") {
                self.pos += 1;
                let fl = self.loc();
                let from = self.name()?;
                self.expect_punct("->")?;
                let tl = self.loc();
                let to = self.name()?;
                self.expect_keyword("pi")?;
                self.expect_punct("=")?;
                let f = out.variable_index(&from).ok_or_else(|| at(fl, format!("unknown variable `{from}`")))?;
                let t = out.variable_index(&to).ok_or_else(|| at(tl, format!("unknown variable `{to}`")))?;
                let entries = self.map_entries()?;
                let mut map = vec![None; out.label_count(f)];
                for (a, b) in entries {
                    let i = out.variable(f).labels.iter().position(|l| *l == a.name);
                    let i = i.ok_or_else(|| at(a.loc, format!("`{}` is not a label of `{from}`", a.name)))?;
                    let j = out.variable(t).labels.iter().position(|l| *l == b.name);
                    let j = j.ok_or_else(|| at(b.loc, format!("`{}` is not a label of `{to}`", b.name)))?;
                    if map[i].is_some_and(|k| k != j) {
                        return Err(at(a.loc, format!("label `{}` mapped twice", a.name)));
                    }
                    map[i] = Some(j);
                }
                let map = map
                    .into_iter()
                    .enumerate()
                    .map(|(i, j)| {
                        j.ok_or_else(|| at(loc, format!("map is not total: label `{}` is unmapped", out.variable(f).labels[i])))
                    })
                    .collect::<Result<Vec<_>>>()?;
                out.add_constraint(f, t, map).map_err(locate(loc))?;
            } else {
                return Err(at(loc, format!("expected `var`, `constraint` or `}}`{}", self.found())));
            }
            self.expect_punct(";")?;
        }
        Ok(out)
    }
}

fn complete<T>(items: Vec<Option<T>>, loc: Loc, missing: impl Fn(usize) -> String) -> Result<Vec<T>> {
    items
        .into_iter()
        .enumerate()
        .map(|(i, x)| x.ok_or_else(|| at(loc, missing(i))))
        .collect()
}

/// Resolves the entries of a map into a type-preserving total function
/// between the elements of two structures over the same signature.
fn resolve_map(source: &Structure, target: &Structure, entries: &[(ElemRef, ElemRef)], loc: Loc) -> Result<Homomorphism> {
    let sig = source.signature();
    let mut maps: Vec<Vec<Option<usize>>> = (0..sig.type_count()).map(|t| vec![None; source.domain_size(t)]).collect();
    let find = |s: &Structure, r: &ElemRef, ty: Option<usize>| -> Result<(usize, usize)> {
        let types: Vec<usize> = match (&r.ty, ty) {
            (Some(t), _) => vec![sig.type_index(t).ok_or_else(|| at(r.loc, format!("unknown type `{t}`")))?],
            (None, Some(t)) => vec![t],
            (None, None) => (0..sig.type_count()).collect(),
        };
        let hits: Vec<(usize, usize)> = types
            .iter()
            .filter_map(|&t| s.element_index(t, &r.name).map(|e| (t, e)))
            .collect();
        match hits.as_slice() {
            [one] => Ok(*one),
            [] => Err(at(r.loc, format!("unknown element `{}`", r.name))),
            _ => Err(at(r.loc, format!("element `{}` is ambiguous; qualify it as `type:name`", r.name))),
        }
    };
    for (a, b) in entries {
        let (t, e) = find(source, a, None)?;
        let (u, f) = find(target, b, Some(t))?;
        if u != t {
            return Err(at(b.loc, "a map must preserve types"));
        }
        if maps[t][e].is_some_and(|g| g != f) {
            return Err(at(a.loc, format!("element `{}` mapped twice", a.name)));
        }
        maps[t][e] = Some(f);
    }
    let maps = maps
        .into_iter()
        .enumerate()
        .map(|(t, m)| {
            m.into_iter()
                .enumerate()
                .map(|(e, v)| v.ok_or_else(|| at(loc, format!("map is not total: `{}` is unmapped", source.element_name(t, e)))))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Homomorphism { maps })
}

/// Orders, types and indexes the variables of a rule, and resolves its
/// predicates.
fn resolve_rule(r: RuleAst, sig: &Signature, idbs: &[Idb]) -> Result<Rule> {
    let pred = |kind: Kind, name: &str, loc: Loc| -> Result<(Pred, Vec<usize>)> {
        let idb = idbs.iter().position(|d| d.name == name).filter(|_| kind != Kind::Edb);
        let edb = sig.symbol_index(name).filter(|_| kind != Kind::Idb);
        match (idb, edb) {
            (Some(i), _) => Ok((Pred::Idb(i), idbs[i].arity.clone())),
            (None, Some(s)) => Ok((Pred::Edb(s), sig.arity(s).to_vec())),
            (None, None) => Err(at(loc, format!("unknown predicate `{name}`"))),
        }
    };
    let type_of = |name: &str, loc: Loc| -> Result<usize> {
        sig.type_index(name).ok_or_else(|| at(loc, format!("unknown type `{name}`")))
    };
    let mut names: Vec<String> = Vec::new();
    let mut types: Vec<Option<usize>> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    if let Some(decls) = &r.declared {
        for (n, t, loc) in decls {
            if index.contains_key(n) {
                return Err(at(*loc, format!("variable `{n}` declared twice")));
            }
            index.insert(n.clone(), names.len());
            names.push(n.clone());
            types.push(Some(type_of(t, *loc)?));
        }
    }
    let declared = r.declared.is_some();
    let mut var = |v: &VarRef, expected: Option<usize>| -> Result<usize> {
        let i = match index.get(&v.name) {
            Some(&i) => i,
            None if declared => return Err(at(v.loc, format!("variable `{}` is not declared", v.name))),
            None => {
                index.insert(v.name.clone(), names.len());
                names.push(v.name.clone());
                types.push(None);
                names.len() - 1
            }
        };
        for t in [v.annotation.as_ref().map(|a| type_of(a, v.loc)).transpose()?, expected]
            .into_iter()
            .flatten()
        {
            match types[i] {
                Some(u) if u != t => {
                    return Err(at(
                        v.loc,
                        format!(
                            "variable `{}` used at types `{}` and `{}`",
                            v.name,
                            sig.type_name(u),
                            sig.type_name(t)
                        ),
                    ))
                }
                _ => types[i] = Some(t),
            }
        }
        Ok(i)
    };
    let (head_name, head_args, head_loc) = &r.head;
    let (head_pred, head_arity) = pred(Kind::Any, head_name, *head_loc)?;
    let Pred::Idb(head) = head_pred else {
        return Err(at(*head_loc, format!("head `{head_name}` must be an IDB")));
    };
    if head_args.len() != head_arity.len() {
        return Err(at(
            *head_loc,
            format!("`{head_name}` expects {} arguments, found {}", head_arity.len(), head_args.len()),
        ));
    }
    let head_vars = head_args
        .iter()
        .zip(&head_arity)
        .map(|(v, &t)| var(v, Some(t)))
        .collect::<Result<Vec<_>>>()?;
    let mut body = Vec::new();
    let mut equalities = Vec::new();
    for atom in &r.body {
        match atom {
            AtomAst::Rel(kind, name, args, loc) => {
                let (p, arity) = pred(*kind, name, *loc)?;
                if args.len() != arity.len() {
                    return Err(at(*loc, format!("`{name}` expects {} arguments, found {}", arity.len(), args.len())));
                }
                let vs = args
                    .iter()
                    .zip(&arity)
                    .map(|(v, &t)| var(v, Some(t)))
                    .collect::<Result<Vec<_>>>()?;
                body.push(Atom::Rel(p, vs));
            }
            AtomAst::Eq(a, b) => {
                let (x, y) = (var(a, None)?, var(b, None)?);
                equalities.push((x, y, a.loc));
                body.push(Atom::Eq(x, y));
            }
        }
    }
    // Equalities carry types across.
    loop {
        let mut changed = false;
        for &(x, y, loc) in &equalities {
            match (types[x], types[y]) {
                (Some(a), Some(b)) if a != b => {
                    return Err(at(loc, format!("equality between `{}` and `{}` of different types", names[x], names[y])))
                }
                (Some(a), None) => {
                    types[y] = Some(a);
                    changed = true;
                }
                (None, Some(b)) => {
                    types[x] = Some(b);
                    changed = true;
                }
                _ => {}
            }
        }
        if !changed {
            break;
        }
    }
    let vars = names
        .into_iter()
        .zip(types)
        .map(|(name, ty)| match ty {
            Some(ty) => Ok(Var { name, ty }),
            None => Err(at(r.loc, format!("cannot infer the type of `{name}`; annotate it as `{name}:type`"))),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Rule {
        vars,
        head,
        head_args: head_vars,
        body,
    })
}
