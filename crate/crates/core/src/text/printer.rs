//! Printing documents back to the declaration language.

use std::fmt::Write;
use std::sync::Arc;

use super::lexer::render_name;
use super::Document;
use crate::datalog::{Atom, Interpretation, Pred, Program, Rule};
use crate::error::{Error, Result};
use crate::structures::{Homomorphism, Signature, Structure};

/// Words that are printed quoted wherever they appear as names.
const RESERVED: [&str; 20] = [
    "include",
    "signature",
    "structure",
    "program",
    "interpretation",
    "union",
    "gadget",
    "projective",
    "labelcover",
    "type",
    "rel",
    "idb",
    "edb",
    "output",
    "node",
    "edge",
    "glue",
    "var",
    "constraint",
    "pi",
];

fn name(n: &str) -> String {
    render_name(n, &RESERVED)
}

/// Prints a document so that parsing the result yields an equal document.
/// Every signature used by a declaration must itself be declared (see
/// [`Document::close_signatures`]).
pub fn print_document(doc: &Document) -> Result<String> {
    let mut out = String::new();
    let sig_name = |sig: &Arc<Signature>| -> Result<String> {
        doc.signatures
            .iter()
            .rev()
            .find(|(_, s)| **s == **sig)
            .map(|(n, _)| name(n))
            .ok_or_else(|| Error::Usage("a declaration uses a signature that is not declared".into()))
    };
    for (n, sig) in &doc.signatures {
        writeln!(out, "signature {} {}", name(n), signature_body(sig)).unwrap();
    }
    for (n, s) in &doc.structures {
        writeln!(out, "structure {} : {} {}", name(n), sig_name(s.signature())?, structure_body(s, "")).unwrap();
    }
    for (n, p) in &doc.programs {
        writeln!(out, "program {} : {} {}", name(n), sig_name(p.input())?, program_body(p, "")).unwrap();
    }
    for (n, i) in &doc.interpretations {
        writeln!(
            out,
            "interpretation {} : {} -> {} {}",
            name(n),
            sig_name(i.input())?,
            sig_name(i.output())?,
            interpretation_body(i)
        )
        .unwrap();
    }
    for (n, u) in &doc.unions {
        let (input, output) = (u.input(), u.output());
        writeln!(out, "union {} : {} -> {} {{", name(n), sig_name(input)?, sig_name(output)?).unwrap();
        for (t, &o) in u.type_map().iter().enumerate() {
            writeln!(out, "  type {} -> {};", name(input.type_name(t)), name(output.type_name(o))).unwrap();
        }
        for (s, &o) in u.symbol_map().iter().enumerate() {
            writeln!(out, "  rel {} -> {};", name(&input.symbol(s).name), name(&output.symbol(o).name)).unwrap();
        }
        writeln!(out, "}}").unwrap();
    }
    for (n, g) in &doc.gadgets {
        let input = g.input();
        writeln!(out, "gadget {} : {} -> {} {{", name(n), sig_name(input)?, sig_name(g.output())?).unwrap();
        for t in 0..input.type_count() {
            writeln!(
                out,
                "  node {} := structure {};",
                name(input.type_name(t)),
                structure_body(g.domain(t), "  ")
            )
            .unwrap();
        }
        for s in 0..input.symbol_count() {
            writeln!(
                out,
                "  edge {} := structure {};",
                name(&input.symbol(s).name),
                structure_body(g.symbol_structure(s), "  ")
            )
            .unwrap();
        }
        for s in 0..input.symbol_count() {
            for (i, &t) in input.arity(s).iter().enumerate() {
                writeln!(
                    out,
                    "  glue {}[{}] := {};",
                    name(&input.symbol(s).name),
                    i + 1,
                    map_body(g.projection(s, i), g.domain(t), g.symbol_structure(s))
                )
                .unwrap();
            }
        }
        writeln!(out, "}}").unwrap();
    }
    for (n, g) in &doc.projective {
        let input = g.input();
        writeln!(out, "projective {} : {} -> {} {{", name(n), sig_name(input)?, sig_name(g.output())?).unwrap();
        for t in 0..input.type_count() {
            writeln!(
                out,
                "  node {} := structure {};",
                name(input.type_name(t)),
                structure_body(g.domain(t), "  ")
            )
            .unwrap();
        }
        for s in 0..input.symbol_count() {
            let (t, u) = (input.arity(s)[0], input.arity(s)[1]);
            writeln!(
                out,
                "  edge {} := {};",
                name(&input.symbol(s).name),
                map_body(g.map(s), g.domain(u), g.domain(t))
            )
            .unwrap();
        }
        writeln!(out, "}}").unwrap();
    }
    for (n, l) in &doc.label_covers {
        writeln!(out, "labelcover {} {{", name(n)).unwrap();
        for v in l.variables() {
            let labels: Vec<String> = v.labels.iter().map(|x| name(x)).collect();
            writeln!(out, "  var {} : {{ {} }};", name(&v.name), labels.join(", ")).unwrap();
        }
        for c in l.constraints() {
            let (from, to) = (l.variable(c.from), l.variable(c.to));
            let entries: Vec<String> = c
                .map
                .iter()
                .enumerate()
                .map(|(i, &j)| format!("{} -> {}", name(&from.labels[i]), name(&to.labels[j])))
                .collect();
            writeln!(
                out,
                "  constraint {} -> {} pi = {{ {} }};",
                name(&from.name),
                name(&to.name),
                entries.join(", ")
            )
            .unwrap();
        }
        writeln!(out, "}}").unwrap();
    }
    Ok(out)
}

fn signature_body(sig: &Signature) -> String {
    let mut parts = Vec::new();
    for t in sig.types() {
        parts.push(format!("type {};", name(t)));
    }
    for s in sig.symbols() {
        let arity: Vec<String> = s.arity.iter().map(|&t| format!(" {}", name(sig.type_name(t)))).collect();
        parts.push(format!("rel {} :{};", name(&s.name), arity.concat()));
    }
    format!("{{ {} }}", parts.join(" "))
}

/// Prints a structure body; `indent` is the indentation of the enclosing
/// line.
pub(crate) fn structure_body(s: &Structure, indent: &str) -> String {
    let sig = s.signature();
    let mut out = String::from("{\n");
    for t in 0..sig.type_count() {
        let elems: Vec<String> = s.domain(t).iter().map(|e| name(e)).collect();
        writeln!(out, "{indent}  {} = {{ {} }};", name(sig.type_name(t)), elems.join(", ")).unwrap();
    }
    for sym in 0..sig.symbol_count() {
        let arity = sig.arity(sym);
        let tuples: Vec<String> = s
            .relation(sym)
            .iter()
            .map(|tuple| {
                let names: Vec<String> = tuple
                    .iter()
                    .zip(arity)
                    .map(|(&e, &t)| name(s.element_name(t, e)))
                    .collect();
                format!("({})", names.join(","))
            })
            .collect();
        writeln!(out, "{indent}  {} = {{ {} }};", name(&sig.symbol(sym).name), tuples.join(", ")).unwrap();
    }
    out.push_str(indent);
    out.push('}');
    out
}

/// Prints a map between two structures, qualifying source elements whose
/// name occurs in more than one type.
fn map_body(h: &Homomorphism, source: &Structure, target: &Structure) -> String {
    let sig = source.signature();
    let mut entries = Vec::new();
    for (t, map) in h.maps.iter().enumerate() {
        for (e, &f) in map.iter().enumerate() {
            let n = source.element_name(t, e);
            let ambiguous = (0..sig.type_count()).filter(|&u| source.element_index(u, n).is_some()).count() > 1;
            let src = if ambiguous {
                format!("{}:{}", name(sig.type_name(t)), name(n))
            } else {
                name(n)
            };
            entries.push(format!("{src} -> {}", name(target.element_name(t, f))));
        }
    }
    format!("{{ {} }}", entries.join(", "))
}

fn interpretation_body(i: &Interpretation) -> String {
    let out_sig = i.output();
    let mut out = String::from("{\n");
    for t in 0..out_sig.type_count() {
        writeln!(
            out,
            "  type {} := program {};",
            name(out_sig.type_name(t)),
            program_body(i.domain_program(t), "  ")
        )
        .unwrap();
    }
    for s in 0..out_sig.symbol_count() {
        writeln!(
            out,
            "  rel {} := program {};",
            name(&out_sig.symbol(s).name),
            program_body(i.relation_program(s), "  ")
        )
        .unwrap();
    }
    out.push('}');
    out
}

/// Prints a program body; `indent` is the indentation of the enclosing
/// line.
pub(crate) fn program_body(p: &Program, indent: &str) -> String {
    let sig = p.input();
    let mut out = String::from("{\n");
    for idb in p.idbs() {
        let arity: Vec<String> = idb.arity.iter().map(|&t| format!(" {}", name(sig.type_name(t)))).collect();
        writeln!(out, "{indent}  idb {} :{};", name(&idb.name), arity.concat()).unwrap();
    }
    writeln!(out, "{indent}  output {};", name(&p.idbs()[p.output()].name)).unwrap();
    for r in p.rules() {
        writeln!(out, "{indent}  {}", rule_text(p, r)).unwrap();
    }
    out.push_str(indent);
    out.push('}');
    out
}

/// Whether the parser, without a variable prefix, recovers exactly the
/// variables of `r`: first-occurrence order, distinct names, and types
/// determined by positions and equalities.
fn infers_exactly(r: &Rule) -> bool {
    let n = r.vars.len();
    let mut order = Vec::with_capacity(n);
    let mut typed = vec![false; n];
    let mut visit = |v: usize, positional: bool, order: &mut Vec<usize>| {
        if !order.contains(&v) {
            order.push(v);
        }
        typed[v] |= positional;
    };
    for &v in &r.head_args {
        visit(v, true, &mut order);
    }
    let mut eqs = Vec::new();
    for a in &r.body {
        match a {
            Atom::Rel(_, args) => args.iter().for_each(|&v| visit(v, true, &mut order)),
            Atom::Eq(x, y) => {
                visit(*x, false, &mut order);
                visit(*y, false, &mut order);
                eqs.push((*x, *y));
            }
        }
    }
    loop {
        let mut changed = false;
        for &(x, y) in &eqs {
            if typed[x] != typed[y] {
                typed[x] = true;
                typed[y] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let distinct = (0..n).all(|i| r.vars[..i].iter().all(|v| v.name != r.vars[i].name));
    distinct && order == (0..n).collect::<Vec<_>>() && typed.iter().all(|&t| t)
}

fn rule_text(p: &Program, r: &Rule) -> String {
    let sig = p.input();
    let var = |v: usize| name(&r.vars[v].name);
    let atom = |pred: Pred, args: &[usize]| -> String {
        let (pname, _) = p.pred_signature(pred).expect("validated program");
        let shadowed = matches!(pred, Pred::Edb(_)) && p.idbs().iter().any(|d| d.name == pname);
        let mut s = if shadowed { format!("edb:{}", name(pname)) } else { name(pname) };
        if !args.is_empty() {
            let a: Vec<String> = args.iter().map(|&v| var(v)).collect();
            write!(s, "({})", a.join(",")).unwrap();
        }
        s
    };
    let mut out = String::new();
    if !infers_exactly(r) {
        let decls: Vec<String> = r
            .vars
            .iter()
            .map(|v| format!("{}:{}", name(&v.name), name(sig.type_name(v.ty))))
            .collect();
        write!(out, "[{}] ", decls.join(", ")).unwrap();
    }
    out.push_str(&atom(Pred::Idb(r.head), &r.head_args));
    if !r.body.is_empty() {
        let body: Vec<String> = r
            .body
            .iter()
            .map(|a| match a {
                Atom::Rel(pred, args) => atom(*pred, args),
                Atom::Eq(x, y) => format!("{} = {}", var(*x), var(*y)),
            })
            .collect();
        write!(out, " :- {}", body.join(", ")).unwrap();
    }
    out.push('.');
    out
}
