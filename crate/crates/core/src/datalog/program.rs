//! Typed Datalog programs.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::structures::Signature;

/// A predicate occurring in a rule: an input symbol (EDB) or a declared
/// intensional predicate (IDB), both by index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pred {
    Edb(usize),
    Idb(usize),
}

/// A body atom: a predicate applied to rule variables, or an equality of two
/// variables of the same type.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Atom {
    Rel(Pred, Vec<usize>),
    Eq(usize, usize),
}

/// A typed rule variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Var {
    pub name: String,
    pub ty: usize,
}

/// `head(args) ← body`. The head is always an IDB; variables are indices
/// into `vars`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rule {
    pub vars: Vec<Var>,
    pub head: usize,
    pub head_args: Vec<usize>,
    pub body: Vec<Atom>,
}

/// An intensional predicate: its name and arity (types of the input
/// signature).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Idb {
    pub name: String,
    pub arity: Vec<usize>,
}

/// A Datalog program over an input signature, with a designated output IDB.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Program {
    input: Arc<Signature>,
    idbs: Vec<Idb>,
    rules: Vec<Rule>,
    output: usize,
}

impl Program {
    /// Validates and builds a program. Rules must be well typed, every
    /// variable must occur in the body, and IDB names must not clash with
    /// each other.
    pub fn new(input: Arc<Signature>, idbs: Vec<Idb>, rules: Vec<Rule>, output: usize) -> Result<Self> {
        let p = Program {
            input,
            idbs,
            rules,
            output,
        };
        p.validate()?;
        Ok(p)
    }

    /// Builds a program whose designated output is an input symbol: a fresh
    /// IDB and a copy rule are added so that the output is always an IDB.
    pub fn echo(input: Arc<Signature>, symbol: usize) -> Result<Self> {
        let arity = input.arity(symbol).to_vec();
        let name = format!("{}_out", input.symbol(symbol).name);
        let vars: Vec<Var> = arity
            .iter()
            .enumerate()
            .map(|(i, &ty)| Var {
                name: format!("x{}", i + 1),
                ty,
            })
            .collect();
        let args: Vec<usize> = (0..arity.len()).collect();
        let rule = Rule {
            vars,
            head: 0,
            head_args: args.clone(),
            body: vec![Atom::Rel(Pred::Edb(symbol), args)],
        };
        Program::new(input, vec![Idb { name, arity }], vec![rule], 0)
    }

    fn validate(&self) -> Result<()> {
        let sig = &self.input;
        let err = |m: String| Err(Error::InvalidProgram(m));
        for (i, idb) in self.idbs.iter().enumerate() {
            if self.idbs[..i].iter().any(|o| o.name == idb.name) {
                return err(format!("duplicate IDB `{}`", idb.name));
            }
            if idb.arity.iter().any(|&t| t >= sig.type_count()) {
                return err(format!("IDB `{}` uses an undeclared type", idb.name));
            }
        }
        if self.output >= self.idbs.len() {
            return err("output predicate is not a declared IDB".into());
        }
        for (ri, rule) in self.rules.iter().enumerate() {
            let here = |m: &str| Error::InvalidProgram(format!("rule {}: {m}", ri + 1));
            if rule.vars.iter().any(|v| v.ty >= sig.type_count()) {
                return Err(here("variable of undeclared type"));
            }
            let Some(head) = self.idbs.get(rule.head) else {
                return Err(here("head is not a declared IDB"));
            };
            self.check_args(&head.arity, &rule.head_args, rule)
                .map_err(|m| here(&format!("head `{}`: {m}", head.name)))?;
            let mut occurs = vec![false; rule.vars.len()];
            for atom in &rule.body {
                match atom {
                    Atom::Rel(pred, args) => {
                        let (name, arity) = self.pred_signature(*pred).ok_or_else(|| here("unknown predicate"))?;
                        self.check_args(arity, args, rule)
                            .map_err(|m| here(&format!("atom `{name}`: {m}")))?;
                        for &a in args {
                            occurs[a] = true;
                        }
                    }
                    Atom::Eq(a, b) => {
                        if *a >= rule.vars.len() || *b >= rule.vars.len() {
                            return Err(here("equality uses an undeclared variable"));
                        }
                        if rule.vars[*a].ty != rule.vars[*b].ty {
                            return Err(here(&format!(
                                "equality between `{}` and `{}` of different types",
                                rule.vars[*a].name, rule.vars[*b].name
                            )));
                        }
                        occurs[*a] = true;
                        occurs[*b] = true;
                    }
                }
            }
            if let Some(v) = occurs.iter().position(|&o| !o) {
                return Err(here(&format!(
                    "variable `{}` does not occur in the body (rules must be range restricted)",
                    rule.vars[v].name
                )));
            }
        }
        Ok(())
    }

    fn check_args(&self, arity: &[usize], args: &[usize], rule: &Rule) -> std::result::Result<(), String> {
        if arity.len() != args.len() {
            return Err(format!("expected {} arguments, found {}", arity.len(), args.len()));
        }
        for (&t, &a) in arity.iter().zip(args) {
            let Some(v) = rule.vars.get(a) else {
                return Err("undeclared variable".into());
            };
            if v.ty != t {
                return Err(format!(
                    "variable `{}` has type `{}` but position expects `{}`",
                    v.name,
                    self.input.type_name(v.ty),
                    self.input.type_name(t)
                ));
            }
        }
        Ok(())
    }

    /// Name and arity of a predicate, if it exists.
    pub fn pred_signature(&self, pred: Pred) -> Option<(&str, &[usize])> {
        match pred {
            Pred::Edb(s) if s < self.input.symbol_count() => {
                let sym = self.input.symbol(s);
                Some((&sym.name, &sym.arity))
            }
            Pred::Idb(i) => self.idbs.get(i).map(|d| (d.name.as_str(), d.arity.as_slice())),
            Pred::Edb(_) => None,
        }
    }

    pub fn input(&self) -> &Arc<Signature> {
        &self.input
    }

    pub fn idbs(&self) -> &[Idb] {
        &self.idbs
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn output(&self) -> usize {
        self.output
    }

    /// Arity of the output predicate.
    pub fn output_arity(&self) -> &[usize] {
        &self.idbs[self.output].arity
    }

    /// Maximal number of variables in a rule (0 for a program without rules).
    pub fn width(&self) -> usize {
        self.rules.iter().map(|r| r.vars.len()).max().unwrap_or(0)
    }

    /// Drops IDBs (and their rules) on which the output does not depend.
    pub fn pruned(&self) -> Program {
        let n = self.idbs.len();
        let mut needed = vec![false; n];
        needed[self.output] = true;
        let mut stack = vec![self.output];
        while let Some(i) = stack.pop() {
            for r in self.rules.iter().filter(|r| r.head == i) {
                for a in &r.body {
                    if let Atom::Rel(Pred::Idb(j), _) = a {
                        if !std::mem::replace(&mut needed[*j], true) {
                            stack.push(*j);
                        }
                    }
                }
            }
        }
        let mut remap = vec![usize::MAX; n];
        let mut idbs = Vec::new();
        for i in (0..n).filter(|&i| needed[i]) {
            remap[i] = idbs.len();
            idbs.push(self.idbs[i].clone());
        }
        let rules = self
            .rules
            .iter()
            .filter(|r| needed[r.head])
            .map(|r| {
                let mut r = r.clone();
                r.head = remap[r.head];
                for a in &mut r.body {
                    if let Atom::Rel(Pred::Idb(j), _) = a {
                        *j = remap[*j];
                    }
                }
                r
            })
            .collect();
        Program {
            input: self.input.clone(),
            idbs,
            rules,
            output: remap[self.output],
        }
    }

    /// Whether an IDB depends, through rule bodies, on itself.
    pub fn is_recursive_idb(&self, idb: usize) -> bool {
        let n = self.idbs.len();
        let mut deps = vec![Vec::new(); n];
        for r in &self.rules {
            for a in &r.body {
                if let Atom::Rel(Pred::Idb(j), _) = a {
                    deps[r.head].push(*j);
                }
            }
        }
        let mut seen = vec![false; n];
        let mut stack = deps[idb].clone();
        while let Some(j) = stack.pop() {
            if j == idb {
                return true;
            }
            if !std::mem::replace(&mut seen[j], true) {
                stack.extend(deps[j].iter().copied());
            }
        }
        false
    }
}

/// Incremental construction of rules with named variables.
#[derive(Clone, Debug, Default)]
pub struct RuleBuilder {
    vars: Vec<Var>,
    body: Vec<Atom>,
}

impl RuleBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Declares a variable and returns its index.
    pub fn var(&mut self, name: impl Into<String>, ty: usize) -> usize {
        self.vars.push(Var {
            name: name.into(),
            ty,
        });
        self.vars.len() - 1
    }

    pub fn edb(&mut self, symbol: usize, args: Vec<usize>) -> &mut Self {
        self.body.push(Atom::Rel(Pred::Edb(symbol), args));
        self
    }

    pub fn idb(&mut self, idb: usize, args: Vec<usize>) -> &mut Self {
        self.body.push(Atom::Rel(Pred::Idb(idb), args));
        self
    }

    pub fn eq(&mut self, a: usize, b: usize) -> &mut Self {
        self.body.push(Atom::Eq(a, b));
        self
    }

    pub fn head(&self, idb: usize, args: Vec<usize>) -> Rule {
        Rule {
            vars: self.vars.clone(),
            head: idb,
            head_args: args,
            body: self.body.clone(),
        }
    }
}
