//! Composition of Datalog interpretations and union gadgets, and Datalog∪
//! reductions.
//!
//! Three constructions make reductions closed under composition:
//!
//! * two union gadgets compose by composing their maps;
//! * two interpretations compose by replacing every variable of the outer
//!   programs with a tuple of fresh variables, every outer input symbol by
//!   the inner program defining it, and guarding every variable with the
//!   inner domain program of its type;
//! * a union gadget followed by an interpretation is rewritten as an
//!   interpretation followed by a union gadget, by copying every predicate
//!   once per choice of input types for its positions.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use super::interpretation::{edb_symbols, Interpretation};
use super::program::{Atom, Idb, Pred, Program, Rule, Var};
use super::union::UnionGadget;
use crate::error::Result;
use crate::structures::{check_same_signature, fresh_name, Signature, Structure};

/// Collects IDB declarations and rules of a program under construction,
/// keeping IDB names unique.
#[derive(Default)]
struct ProgramBuilder {
    idbs: Vec<Idb>,
    rules: Vec<Rule>,
    names: HashSet<String>,
}

impl ProgramBuilder {
    fn add_idb(&mut self, base: &str, arity: Vec<usize>) -> usize {
        let name = fresh_name(base, |n| self.names.contains(n));
        self.names.insert(name.clone());
        self.idbs.push(Idb { name, arity });
        self.idbs.len() - 1
    }

    /// Copies a program over the same input signature, prefixing its IDB
    /// names; returns the index of its output IDB.
    fn include(&mut self, p: &Program, prefix: &str) -> usize {
        let base = self.idbs.len();
        for idb in p.idbs() {
            self.add_idb(&format!("{prefix}__{}", idb.name), idb.arity.clone());
        }
        for r in p.rules() {
            let mut r = r.clone();
            r.head += base;
            for atom in &mut r.body {
                if let Atom::Rel(Pred::Idb(i), _) = atom {
                    *i += base;
                }
            }
            self.rules.push(r);
        }
        base + p.output()
    }

    fn finish(self, input: Arc<Signature>, output: usize) -> Result<Program> {
        Ok(Program::new(input, self.idbs, self.rules, output)?.pruned())
    }
}

/// Makes variable names unique within a rule.
fn dedupe_var_names(vars: &mut [Var]) {
    let mut seen = HashSet::new();
    for v in vars.iter_mut() {
        let name = fresh_name(&v.name, |n| seen.contains(n));
        seen.insert(name.clone());
        v.name = name;
    }
}

/// Rewrites one program of `chi` (over the output signature of `phi`) into
/// a program over the input signature of `phi`.
fn lift_program(phi: &Interpretation, p: &Program) -> Result<Program> {
    let delta = phi.output();
    let flatten = |arity: &[usize]| -> Vec<usize> {
        arity
            .iter()
            .flat_map(|&t| phi.domain_arity(t).iter().copied())
            .collect()
    };
    let mut b = ProgramBuilder::default();
    let own: Vec<usize> = p
        .idbs()
        .iter()
        .map(|q| b.add_idb(&q.name, flatten(&q.arity)))
        .collect();
    let mut guards: HashMap<usize, usize> = HashMap::new();
    for r in p.rules() {
        for v in &r.vars {
            if let std::collections::hash_map::Entry::Vacant(e) = guards.entry(v.ty) {
                let prefix = format!("d_{}", delta.type_name(v.ty));
                e.insert(b.include(phi.domain_program(v.ty), &prefix));
            }
        }
    }
    let mut symbols: HashMap<usize, usize> = HashMap::new();
    for s in edb_symbols(p) {
        let prefix = format!("r_{}", delta.symbol(s).name);
        symbols.insert(s, b.include(phi.relation_program(s), &prefix));
    }
    for r in p.rules() {
        let mut vars = Vec::new();
        let mut expand: Vec<Vec<usize>> = Vec::new();
        for v in &r.vars {
            let arity = phi.domain_arity(v.ty);
            let ids: Vec<usize> = arity
                .iter()
                .enumerate()
                .map(|(j, &ty)| {
                    let name = if arity.len() == 1 {
                        v.name.clone()
                    } else {
                        format!("{}_{}", v.name, j + 1)
                    };
                    vars.push(Var { name, ty });
                    vars.len() - 1
                })
                .collect();
            expand.push(ids);
        }
        dedupe_var_names(&mut vars);
        let flat = |args: &[usize]| -> Vec<usize> {
            args.iter().flat_map(|&a| expand[a].iter().copied()).collect()
        };
        let mut body = Vec::new();
        for atom in &r.body {
            match atom {
                Atom::Rel(Pred::Edb(s), args) => body.push(Atom::Rel(Pred::Idb(symbols[s]), flat(args))),
                Atom::Rel(Pred::Idb(q), args) => body.push(Atom::Rel(Pred::Idb(own[*q]), flat(args))),
                Atom::Eq(x, y) => {
                    for (&a, &c) in expand[*x].iter().zip(&expand[*y]) {
                        body.push(Atom::Eq(a, c));
                    }
                }
            }
        }
        for (v, ids) in r.vars.iter().zip(&expand) {
            body.push(Atom::Rel(Pred::Idb(guards[&v.ty]), ids.clone()));
        }
        b.rules.push(Rule {
            vars,
            head: own[r.head],
            head_args: flat(&r.head_args),
            body,
        });
    }
    b.finish(phi.input().clone(), own[p.output()])
}

/// Composes interpretations: the result applied to `A` is isomorphic to
/// `chi(phi(A))`.
pub fn compose_interpretations(phi: &Interpretation, chi: &Interpretation) -> Result<Interpretation> {
    check_same_signature(phi.output(), chi.input(), "interpretation composition")?;
    let domains = chi
        .domain_programs()
        .iter()
        .map(|p| lift_program(phi, p))
        .collect::<Result<Vec<_>>>()?;
    let relations = chi
        .relation_programs()
        .iter()
        .map(|p| lift_program(phi, p))
        .collect::<Result<Vec<_>>>()?;
    Interpretation::new(phi.input().clone(), chi.output().clone(), domains, relations)
}

/// All tuples `q` of input types with `d ∘ q = arity`, in lexicographic order.
fn lifts(preimages: &[Vec<usize>], arity: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &t in arity {
        let mut next = Vec::new();
        for prefix in &out {
            for &i in &preimages[t] {
                let mut q = prefix.clone();
                q.push(i);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

/// Name of the copy of `base` indexed by `q`; copies of predicates whose
/// positions all have a single possible input type keep the plain name.
fn lifted_name(base: &str, q: &[usize], preimages: &[Vec<usize>], u: &UnionGadget) -> String {
    let sig = u.input();
    let unique = q.iter().all(|&i| preimages[u.type_map()[i]].len() == 1);
    if unique {
        base.to_string()
    } else {
        let parts: Vec<&str> = q.iter().map(|&t| sig.type_name(t)).collect();
        format!("{base}__{}", parts.join("_"))
    }
}

/// Copies a program over the output signature of `u` into a program over
/// its input signature, producing the copy of the output IDB indexed by `q`.
fn copy_program(u: &UnionGadget, preimages: &[Vec<usize>], p: &Program, q: &[usize]) -> Result<Program> {
    let pi = u.input();
    let delta = u.output();
    let mut b = ProgramBuilder::default();
    let mut idb_copy: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
    for (i, idb) in p.idbs().iter().enumerate() {
        for t in lifts(preimages, &idb.arity) {
            let id = b.add_idb(&lifted_name(&idb.name, &t, preimages, u), t.clone());
            idb_copy.insert((i, t), id);
        }
    }
    let mut edb_copy: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
    for s in edb_symbols(p) {
        for t in lifts(preimages, delta.arity(s)) {
            let id = b.add_idb(&lifted_name(&delta.symbol(s).name, &t, preimages, u), t.clone());
            edb_copy.insert((s, t), id);
        }
        for (r, &image) in u.symbol_map().iter().enumerate() {
            if image != s {
                continue;
            }
            let arity = pi.arity(r).to_vec();
            let vars: Vec<Var> = arity
                .iter()
                .enumerate()
                .map(|(j, &ty)| Var {
                    name: format!("x{}", j + 1),
                    ty,
                })
                .collect();
            let args: Vec<usize> = (0..arity.len()).collect();
            b.rules.push(Rule {
                vars,
                head: edb_copy[&(s, arity.clone())],
                head_args: args.clone(),
                body: vec![Atom::Rel(Pred::Edb(r), args)],
            });
        }
    }
    for r in p.rules() {
        let var_types: Vec<usize> = r.vars.iter().map(|v| v.ty).collect();
        'typing: for tau in lifts(preimages, &var_types) {
            for atom in &r.body {
                if let Atom::Eq(x, y) = atom {
                    if tau[*x] != tau[*y] {
                        continue 'typing;
                    }
                }
            }
            let at = |args: &[usize]| -> Vec<usize> { args.iter().map(|&a| tau[a]).collect() };
            let body = r
                .body
                .iter()
                .map(|atom| match atom {
                    Atom::Rel(Pred::Idb(i), args) => {
                        Atom::Rel(Pred::Idb(idb_copy[&(*i, at(args))]), args.clone())
                    }
                    Atom::Rel(Pred::Edb(s), args) => {
                        Atom::Rel(Pred::Idb(edb_copy[&(*s, at(args))]), args.clone())
                    }
                    Atom::Eq(x, y) => Atom::Eq(*x, *y),
                })
                .collect();
            let vars = r
                .vars
                .iter()
                .zip(&tau)
                .map(|(v, &ty)| Var {
                    name: v.name.clone(),
                    ty,
                })
                .collect();
            b.rules.push(Rule {
                vars,
                head: idb_copy[&(r.head, at(&r.head_args))],
                head_args: r.head_args.clone(),
                body,
            });
        }
    }
    let output = idb_copy[&(p.output(), q.to_vec())];
    b.finish(pi.clone(), output)
}

/// Rewrites `phi ∘ u` (first the union gadget `u`, then `phi`) as
/// `u' ∘ phi'`. Output types of `phi'` are pairs `(s, q)` of an output type
/// of `phi` and a choice `q` of input types for its tuple positions, named
/// `s__q…`; `u'` maps each of them back to `s`, and likewise for symbols.
pub fn swap_union_interpretation(
    u: &UnionGadget,
    phi: &Interpretation,
) -> Result<(Interpretation, UnionGadget)> {
    check_same_signature(u.output(), phi.input(), "union gadget followed by interpretation")?;
    let pi = u.input();
    let sigma = phi.output();
    let mut preimages = vec![Vec::new(); u.output().type_count()];
    for (i, &t) in u.type_map().iter().enumerate() {
        preimages[t].push(i);
    }
    let mut sig = Signature::new();
    let mut type_copy: Vec<HashMap<Vec<usize>, usize>> = Vec::new();
    let mut type_map = Vec::new();
    let mut domains = Vec::new();
    for s in 0..sigma.type_count() {
        let mut copies = HashMap::new();
        let program = phi.domain_program(s);
        for q in lifts(&preimages, program.output_arity()) {
            let name = sig.fresh_type_name(&lifted_name(sigma.type_name(s), &q, &preimages, u));
            let idx = sig.add_type(name)?;
            domains.push(copy_program(u, &preimages, program, &q)?);
            type_map.push(s);
            copies.insert(q, idx);
        }
        type_copy.push(copies);
    }
    let mut symbol_map = Vec::new();
    let mut relations = Vec::new();
    for s in 0..sigma.symbol_count() {
        let program = phi.relation_program(s);
        for q in lifts(&preimages, program.output_arity()) {
            let mut arity = Vec::new();
            let mut at = 0;
            for &t in sigma.arity(s) {
                let width = phi.domain_arity(t).len();
                arity.push(type_copy[t][&q[at..at + width]]);
                at += width;
            }
            let name = sig.fresh_symbol_name(&lifted_name(&sigma.symbol(s).name, &q, &preimages, u));
            sig.add_symbol(name, arity)?;
            relations.push(copy_program(u, &preimages, program, &q)?);
            symbol_map.push(s);
        }
    }
    let sig = Arc::new(sig);
    let interpretation = Interpretation::new(pi.clone(), sig.clone(), domains, relations)?;
    let union = UnionGadget::new(sig, sigma.clone(), type_map, symbol_map)?;
    Ok((interpretation, union))
}

/// A Datalog∪ reduction: an interpretation followed by a union gadget.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub interpretation: Interpretation,
    pub union: UnionGadget,
}

impl Reduction {
    pub fn new(interpretation: Interpretation, union: UnionGadget) -> Result<Self> {
        check_same_signature(interpretation.output(), union.input(), "reduction")?;
        Ok(Reduction {
            interpretation,
            union,
        })
    }

    /// The interpretation followed by the identity union gadget.
    pub fn from_interpretation(interpretation: Interpretation) -> Self {
        let union = UnionGadget::identity(interpretation.output().clone());
        Reduction {
            interpretation,
            union,
        }
    }

    /// The identity interpretation followed by `union`.
    pub fn from_union(union: UnionGadget) -> Self {
        let interpretation = Interpretation::identity(union.input().clone());
        Reduction {
            interpretation,
            union,
        }
    }

    pub fn identity(sig: Arc<Signature>) -> Self {
        Reduction::from_interpretation(Interpretation::identity(sig))
    }

    pub fn input(&self) -> &Arc<Signature> {
        self.interpretation.input()
    }

    pub fn output(&self) -> &Arc<Signature> {
        self.union.output()
    }

    pub fn apply(&self, x: &Structure) -> Result<Structure> {
        self.union.apply(&self.interpretation.apply(x)?)
    }

    /// Width of the interpretation part.
    pub fn width(&self) -> usize {
        self.interpretation.width()
    }
}

/// Composes reductions: `second` after `first`.
pub fn compose_ddatalog(first: &Reduction, second: &Reduction) -> Result<Reduction> {
    check_same_signature(first.output(), second.input(), "reduction composition")?;
    let (phi2, union1) = swap_union_interpretation(&first.union, &second.interpretation)?;
    let interpretation = compose_interpretations(&first.interpretation, &phi2)?;
    let union = union1.then(&second.union)?;
    Reduction::new(interpretation, union)
}
