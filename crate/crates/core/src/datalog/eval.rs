//! Semi-naive bottom-up evaluation.
//!
//! Round zero fires every rule without IDB atoms. Each later round fires
//! every rule once per IDB atom, with that atom restricted to the facts that
//! were new in the previous round and all other atoms ranging over
//! everything derived so far. Every new derivation uses at least one new
//! fact, so the result is the least fixed point.
//!
//! Variables that occur only in equalities range over the whole domain of
//! their type.

use std::collections::{BTreeSet, HashMap, HashSet};

use super::program::{Atom, Pred, Program, Rule};
use crate::error::Result;
use crate::structures::{check_same_signature, Structure};

/// A relation with per-position hash indexes.
#[derive(Default)]
struct Relation {
    tuples: Vec<Vec<usize>>,
    set: HashSet<Vec<usize>>,
    index: Vec<HashMap<usize, Vec<u32>>>,
}

impl Relation {
    fn new(arity: usize) -> Self {
        Relation {
            tuples: Vec::new(),
            set: HashSet::new(),
            index: vec![HashMap::new(); arity],
        }
    }

    fn insert(&mut self, t: Vec<usize>) -> bool {
        if self.set.contains(&t) {
            return false;
        }
        let id = self.tuples.len() as u32;
        for (p, &v) in t.iter().enumerate() {
            self.index[p].entry(v).or_default().push(id);
        }
        self.set.insert(t.clone());
        self.tuples.push(t);
        true
    }

    fn contains(&self, t: &[usize]) -> bool {
        self.set.contains(t)
    }
}

/// Evaluation steps of a rule body, in join order.
enum Step<'r> {
    Rel { pred: Pred, args: &'r [usize], delta: bool },
    Eq(usize, usize),
}

struct Engine<'a> {
    x: &'a Structure,
    program: &'a Program,
    edb: Vec<Relation>,
    full: Vec<Relation>,
    delta: Vec<Relation>,
}

impl<'a> Engine<'a> {
    fn relation(&self, pred: Pred, delta: bool) -> &Relation {
        match pred {
            Pred::Edb(s) => &self.edb[s],
            Pred::Idb(i) if delta => &self.delta[i],
            Pred::Idb(i) => &self.full[i],
        }
    }

    /// Fires `rule`, with the `delta_at`-th body atom (if any) restricted to
    /// the previous round's new facts.
    fn fire(&self, rule: &'a Rule, delta_at: Option<usize>, out: &mut Vec<Vec<usize>>) {
        let mut steps = Vec::with_capacity(rule.body.len());
        if let Some(d) = delta_at {
            if let Atom::Rel(pred, args) = &rule.body[d] {
                steps.push(Step::Rel {
                    pred: *pred,
                    args,
                    delta: true,
                });
            }
        }
        for (i, atom) in rule.body.iter().enumerate() {
            if let Atom::Rel(pred, args) = atom {
                if Some(i) != delta_at {
                    steps.push(Step::Rel {
                        pred: *pred,
                        args,
                        delta: false,
                    });
                }
            }
        }
        for atom in &rule.body {
            if let Atom::Eq(a, b) = atom {
                steps.push(Step::Eq(*a, *b));
            }
        }
        let mut binding = vec![usize::MAX; rule.vars.len()];
        self.join(rule, &steps, 0, &mut binding, out);
    }

    fn join(&self, rule: &Rule, steps: &[Step], i: usize, binding: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let Some(step) = steps.get(i) else {
            out.push(rule.head_args.iter().map(|&v| binding[v]).collect());
            return;
        };
        match step {
            Step::Eq(a, b) => {
                let (a, b) = (*a, *b);
                match (binding[a] != usize::MAX, binding[b] != usize::MAX) {
                    (true, true) => {
                        if binding[a] == binding[b] {
                            self.join(rule, steps, i + 1, binding, out);
                        }
                    }
                    (true, false) | (false, true) => {
                        let (bound, free) = if binding[a] != usize::MAX { (a, b) } else { (b, a) };
                        binding[free] = binding[bound];
                        self.join(rule, steps, i + 1, binding, out);
                        binding[free] = usize::MAX;
                    }
                    (false, false) => {
                        for val in 0..self.x.domain_size(rule.vars[a].ty) {
                            binding[a] = val;
                            binding[b] = val;
                            self.join(rule, steps, i + 1, binding, out);
                        }
                        binding[a] = usize::MAX;
                        binding[b] = usize::MAX;
                    }
                }
            }
            Step::Rel { pred, args, delta } => {
                let rel = self.relation(*pred, *delta);
                if args.is_empty() {
                    if rel.contains(&[]) {
                        self.join(rule, steps, i + 1, binding, out);
                    }
                    return;
                }
                let bound = args.iter().position(|&v| binding[v] != usize::MAX);
                let candidates: Box<dyn Iterator<Item = &Vec<usize>>> = match bound {
                    Some(p) => match rel.index[p].get(&binding[args[p]]) {
                        Some(ids) => Box::new(ids.iter().map(|&id| &rel.tuples[id as usize])),
                        None => return,
                    },
                    None => Box::new(rel.tuples.iter()),
                };
                let mut newly = Vec::with_capacity(args.len());
                for t in candidates {
                    newly.clear();
                    let mut ok = true;
                    for (&v, &val) in args.iter().zip(t) {
                        if binding[v] == usize::MAX {
                            binding[v] = val;
                            newly.push(v);
                        } else if binding[v] != val {
                            ok = false;
                            break;
                        }
                    }
                    if ok {
                        self.join(rule, steps, i + 1, binding, out);
                    }
                    for &v in &newly {
                        binding[v] = usize::MAX;
                    }
                }
            }
        }
    }
}

fn has_idb_atom(rule: &Rule) -> bool {
    rule.body
        .iter()
        .any(|a| matches!(a, Atom::Rel(Pred::Idb(_), _)))
}

/// Computes the least fixed point of `p` on `x` and returns every IDB.
pub fn evaluate_all(p: &Program, x: &Structure) -> Result<Vec<BTreeSet<Vec<usize>>>> {
    check_same_signature(p.input(), x.signature(), "program evaluation")?;
    let sig = x.signature();
    let mut edb = Vec::with_capacity(sig.symbol_count());
    for s in 0..sig.symbol_count() {
        let mut r = Relation::new(sig.arity(s).len());
        for t in x.relation(s) {
            r.insert(t.clone());
        }
        edb.push(r);
    }
    let n = p.idbs().len();
    let fresh = || -> Vec<Relation> { p.idbs().iter().map(|d| Relation::new(d.arity.len())).collect() };
    let mut engine = Engine {
        x,
        program: p,
        edb,
        full: fresh(),
        delta: fresh(),
    };
    let mut out = Vec::new();
    let mut round: Vec<Vec<Vec<usize>>> = vec![Vec::new(); n];
    for rule in p.rules() {
        if !has_idb_atom(rule) {
            out.clear();
            engine.fire(rule, None, &mut out);
            round[rule.head].append(&mut out);
        }
    }
    loop {
        let mut next = fresh();
        let mut any = false;
        for (i, facts) in round.iter_mut().enumerate() {
            for f in facts.drain(..) {
                if !engine.full[i].contains(&f) && next[i].insert(f) {
                    any = true;
                }
            }
        }
        if !any {
            break;
        }
        for (i, rel) in next.iter().enumerate() {
            for f in &rel.tuples {
                engine.full[i].insert(f.clone());
            }
        }
        engine.delta = next;
        for rule in engine.program.rules() {
            for (j, atom) in rule.body.iter().enumerate() {
                if let Atom::Rel(Pred::Idb(i), _) = atom {
                    if engine.delta[*i].tuples.is_empty() {
                        continue;
                    }
                    out.clear();
                    engine.fire(rule, Some(j), &mut out);
                    round[rule.head].append(&mut out);
                }
            }
        }
    }
    Ok(engine
        .full
        .into_iter()
        .map(|r| r.tuples.into_iter().collect())
        .collect())
}

/// Computes the output relation of `p` on `x`.
pub fn evaluate_program(p: &Program, x: &Structure) -> Result<BTreeSet<Vec<usize>>> {
    let mut all = evaluate_all(p, x)?;
    Ok(std::mem::take(&mut all[p.output()]))
}

/// Reference implementation: naive iteration of all rules to a fixed point.
/// Used by tests to cross-check the semi-naive engine.
pub fn evaluate_naive(p: &Program, x: &Structure) -> Result<Vec<BTreeSet<Vec<usize>>>> {
    check_same_signature(p.input(), x.signature(), "program evaluation")?;
    let mut facts: Vec<BTreeSet<Vec<usize>>> = vec![BTreeSet::new(); p.idbs().len()];
    loop {
        let mut changed = false;
        for rule in p.rules() {
            // Enumerate every assignment of the rule's variables.
            let sizes: Vec<usize> = rule.vars.iter().map(|v| x.domain_size(v.ty)).collect();
            if sizes.iter().any(|&s| s == 0) {
                continue;
            }
            let mut asg = vec![0usize; sizes.len()];
            loop {
                let holds = rule.body.iter().all(|atom| match atom {
                    Atom::Eq(a, b) => asg[*a] == asg[*b],
                    Atom::Rel(Pred::Edb(s), args) => {
                        x.relation(*s).contains(&args.iter().map(|&v| asg[v]).collect::<Vec<_>>())
                    }
                    Atom::Rel(Pred::Idb(i), args) => {
                        facts[*i].contains(&args.iter().map(|&v| asg[v]).collect::<Vec<_>>())
                    }
                });
                if holds {
                    let head: Vec<usize> = rule.head_args.iter().map(|&v| asg[v]).collect();
                    changed |= facts[rule.head].insert(head);
                }
                let mut p = sizes.len();
                loop {
                    if p == 0 {
                        break;
                    }
                    p -= 1;
                    asg[p] += 1;
                    if asg[p] < sizes[p] {
                        break;
                    }
                    asg[p] = 0;
                }
                if asg.iter().all(|&a| a == 0) {
                    break;
                }
            }
        }
        if !changed {
            return Ok(facts);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::library::two_colouring;
    use super::*;
    use crate::structures::catalog::*;

    #[test]
    fn odd_cycles_derive_the_goal() {
        let p = two_colouring();
        assert!(!evaluate_program(&p, &cycle(3)).unwrap().is_empty());
        assert!(evaluate_program(&p, &cycle(4)).unwrap().is_empty());
    }

    #[test]
    fn empty_structure_derives_nothing() {
        let p = two_colouring();
        let empty = Structure::new(digraph_signature());
        assert!(evaluate_all(&p, &empty).unwrap().iter().all(BTreeSet::is_empty));
    }

    #[test]
    fn semi_naive_matches_naive_and_is_idempotent() {
        let p = two_colouring();
        for g in [cycle(5), cycle(6), directed_path(4), disjoint_cycles(&[3, 4]), loop_graph()] {
            let a = evaluate_all(&p, &g).unwrap();
            assert_eq!(a, evaluate_naive(&p, &g).unwrap());
            assert_eq!(a, evaluate_all(&p, &g).unwrap());
        }
    }
}
