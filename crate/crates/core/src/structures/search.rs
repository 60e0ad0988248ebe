//! A small finite-domain constraint engine and the homomorphism, isomorphism
//! and enumeration queries built on it.
//!
//! Variables have bit-set domains; constraints are table constraints (a
//! scope and a shared list of allowed tuples) plus optional all-different
//! groups. Search maintains generalized arc consistency after every
//! assignment (MAC), assigns variables in a fixed order and tries values in
//! increasing order, so the first solution found is the lexicographically
//! least one. Independent components are solved separately, which keeps
//! that property while avoiding thrashing across unrelated parts.

use std::collections::VecDeque;
use std::sync::Arc;

use super::bitset::BitSet;
use super::{check_same_signature, Homomorphism, Structure};
use crate::error::Result;
use crate::unionfind::UnionFind;

/// Allowed tuples of a table constraint, indexed by value per position.
#[derive(Debug)]
pub(crate) struct Table {
    tuples: Vec<Vec<usize>>,
    by_value: Vec<Vec<Vec<u32>>>,
}

impl Table {
    /// Builds the table; `sizes[p]` bounds the values at position `p`.
    pub fn new(sizes: &[usize], tuples: Vec<Vec<usize>>) -> Self {
        let mut by_value: Vec<Vec<Vec<u32>>> = sizes.iter().map(|&n| vec![Vec::new(); n]).collect();
        for (i, t) in tuples.iter().enumerate() {
            for (p, &v) in t.iter().enumerate() {
                by_value[p][v].push(i as u32);
            }
        }
        Table { tuples, by_value }
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }
}

#[derive(Debug)]
struct Constraint {
    scope: Vec<usize>,
    table: Arc<Table>,
}

/// A constraint satisfaction problem over bit-set domains.
#[derive(Debug)]
pub(crate) struct Csp {
    domains: Vec<BitSet>,
    constraints: Vec<Constraint>,
    distinct: Vec<Vec<usize>>,
    infeasible: bool,
}

impl Csp {
    pub fn new(domains: Vec<BitSet>) -> Self {
        Csp {
            domains,
            constraints: Vec::new(),
            distinct: Vec::new(),
            infeasible: false,
        }
    }

    /// Adds a table constraint. Repeated variables in the scope restrict the
    /// table to tuples that agree on those positions; an empty scope with an
    /// empty table makes the problem infeasible.
    pub fn add_constraint(&mut self, scope: Vec<usize>, table: &Arc<Table>) {
        if scope.is_empty() {
            if table.len() == 0 {
                self.infeasible = true;
            }
            return;
        }
        let mut repeats = Vec::new();
        for (q, v) in scope.iter().enumerate() {
            if let Some(p) = scope[..q].iter().position(|u| u == v) {
                repeats.push((p, q));
            }
        }
        if repeats.is_empty() {
            self.constraints.push(Constraint {
                scope,
                table: table.clone(),
            });
            return;
        }
        let filtered: Vec<Vec<usize>> = table
            .tuples
            .iter()
            .filter(|t| repeats.iter().all(|&(p, q)| t[p] == t[q]))
            .cloned()
            .collect();
        let sizes: Vec<usize> = table.by_value.iter().map(Vec::len).collect();
        self.constraints.push(Constraint {
            scope,
            table: Arc::new(Table::new(&sizes, filtered)),
        });
    }

    /// Requires the given variables to take pairwise distinct values.
    pub fn add_distinct(&mut self, vars: Vec<usize>) {
        if vars.len() > 1 {
            self.distinct.push(vars);
        }
    }

    /// The lexicographically least solution (variables in index order).
    pub fn solve(&self) -> Option<Vec<usize>> {
        let mut st = State::new(self)?;
        let mut uf = UnionFind::new(self.domains.len());
        for c in &self.constraints {
            for w in c.scope.windows(2) {
                uf.union(w[0], w[1]);
            }
        }
        for g in &self.distinct {
            for w in g.windows(2) {
                uf.union(w[0], w[1]);
            }
        }
        for comp in uf.classes() {
            if !st.search(&comp, &mut |_| false) {
                return None;
            }
        }
        Some(st.assignment())
    }

    /// Calls `f` on every solution in lexicographic order until it returns
    /// false. Returns false if enumeration was stopped early.
    pub fn for_each_solution(&self, mut f: impl FnMut(&[usize]) -> bool) -> bool {
        let Some(mut st) = State::new(self) else {
            return true;
        };
        let order: Vec<usize> = (0..self.domains.len()).collect();
        let stopped = st.search(&order, &mut |doms: &[BitSet]| {
            let sol: Vec<usize> = doms.iter().map(|d| d.single().expect("assigned")).collect();
            f(&sol)
        });
        !stopped
    }
}

struct Frame {
    pos: usize,
    values: Vec<usize>,
    next: usize,
    mark: usize,
}

struct State<'a> {
    csp: &'a Csp,
    doms: Vec<BitSet>,
    trail: Vec<(usize, BitSet)>,
    watch: Vec<Vec<usize>>,
    groups: Vec<Vec<usize>>,
    queue: VecDeque<usize>,
    queued: Vec<bool>,
    singles: Vec<usize>,
}

impl<'a> State<'a> {
    /// Sets up the search state and runs initial propagation; `None` if the
    /// problem is already refuted.
    fn new(csp: &'a Csp) -> Option<Self> {
        if csp.infeasible || csp.domains.iter().any(BitSet::is_empty) {
            return None;
        }
        let n = csp.domains.len();
        let mut watch = vec![Vec::new(); n];
        for (ci, c) in csp.constraints.iter().enumerate() {
            for &v in &c.scope {
                if watch[v].last() != Some(&ci) {
                    watch[v].push(ci);
                }
            }
        }
        let mut groups = vec![Vec::new(); n];
        for (gi, g) in csp.distinct.iter().enumerate() {
            for &v in g {
                groups[v].push(gi);
            }
        }
        let mut st = State {
            csp,
            doms: csp.domains.clone(),
            trail: Vec::new(),
            watch,
            groups,
            queue: (0..csp.constraints.len()).collect(),
            queued: vec![true; csp.constraints.len()],
            singles: (0..n).filter(|&v| csp.domains[v].single().is_some()).collect(),
        };
        if st.propagate() {
            Some(st)
        } else {
            None
        }
    }

    fn assignment(&self) -> Vec<usize> {
        self.doms
            .iter()
            .map(|d| d.single().expect("every variable is assigned"))
            .collect()
    }

    /// Replaces a domain, recording the old one; false if it became empty.
    fn set_domain(&mut self, v: usize, new: BitSet) -> bool {
        let old = std::mem::replace(&mut self.doms[v], new);
        self.trail.push((v, old));
        if self.doms[v].is_empty() {
            return false;
        }
        for &c in &self.watch[v] {
            if !self.queued[c] {
                self.queued[c] = true;
                self.queue.push_back(c);
            }
        }
        if !self.groups[v].is_empty() && self.doms[v].single().is_some() {
            self.singles.push(v);
        }
        true
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let (v, old) = self.trail.pop().expect("trail entry");
            self.doms[v] = old;
        }
    }

    fn clear_queue(&mut self) {
        for c in self.queue.drain(..) {
            self.queued[c] = false;
        }
        self.singles.clear();
    }

    fn propagate(&mut self) -> bool {
        let ok = self.propagate_inner();
        if !ok {
            self.clear_queue();
        }
        ok
    }

    fn propagate_inner(&mut self) -> bool {
        let csp = self.csp;
        loop {
            while let Some(v) = self.singles.pop() {
                let Some(val) = self.doms[v].single() else {
                    continue;
                };
                for gi in self.groups[v].clone() {
                    for &u in &csp.distinct[gi] {
                        if u != v && self.doms[u].contains(val) {
                            let mut nd = self.doms[u].clone();
                            nd.remove(val);
                            if !self.set_domain(u, nd) {
                                return false;
                            }
                        }
                    }
                }
            }
            let Some(c) = self.queue.pop_front() else {
                return true;
            };
            self.queued[c] = false;
            if !self.revise(c) {
                return false;
            }
        }
    }

    /// Removes values without support in constraint `c`.
    fn revise(&mut self, c: usize) -> bool {
        let csp = self.csp;
        let con = &csp.constraints[c];
        let scope = &con.scope;
        let table = &con.table;
        let pivot = (0..scope.len())
            .min_by_key(|&p| self.doms[scope[p]].count())
            .expect("non-empty scope");
        let mut supports: Vec<BitSet> = scope
            .iter()
            .map(|&v| BitSet::empty(self.doms[v].capacity()))
            .collect();
        for a in self.doms[scope[pivot]].iter() {
            let Some(ids) = table.by_value[pivot].get(a) else {
                continue;
            };
            for &ti in ids {
                let t = &table.tuples[ti as usize];
                if t.iter().zip(scope).all(|(&val, &v)| self.doms[v].contains(val)) {
                    for (q, &val) in t.iter().enumerate() {
                        supports[q].insert(val);
                    }
                }
            }
        }
        for (q, &v) in scope.iter().enumerate() {
            let mut nd = self.doms[v].clone();
            if nd.intersect_with(&supports[q]) && !self.set_domain(v, nd) {
                return false;
            }
        }
        true
    }

    fn assign(&mut self, v: usize, val: usize) -> bool {
        if !self.doms[v].contains(val) {
            return false;
        }
        if self.doms[v].single() == Some(val) {
            return true;
        }
        let mut nd = BitSet::empty(self.doms[v].capacity());
        nd.insert(val);
        self.set_domain(v, nd)
    }

    /// Depth-first search over `order`. `on_solution` is called with the
    /// domains at every solution; returning false stops the search, in which
    /// case this returns true and leaves the solution in place.
    fn search(&mut self, order: &[usize], on_solution: &mut dyn FnMut(&[BitSet]) -> bool) -> bool {
        let mut stack: Vec<Frame> = Vec::new();
        let mut pos = 0;
        loop {
            if pos == order.len() {
                if !on_solution(&self.doms) {
                    return true;
                }
            } else {
                let values = self.doms[order[pos]].iter().collect();
                stack.push(Frame {
                    pos,
                    values,
                    next: 0,
                    mark: self.trail.len(),
                });
            }
            loop {
                let Some(top) = stack.last_mut() else {
                    return false;
                };
                let (mark, p) = (top.mark, top.pos);
                if top.next == top.values.len() {
                    stack.pop();
                    self.undo(mark);
                    continue;
                }
                let val = top.values[top.next];
                top.next += 1;
                self.undo(mark);
                if self.assign(order[p], val) && self.propagate() {
                    pos = p + 1;
                    break;
                }
            }
        }
    }
}

/// Variable numbering for a homomorphism problem: one variable per source
/// element, types laid out consecutively.
fn offsets(x: &Structure) -> Vec<usize> {
    let mut off = Vec::with_capacity(x.signature().type_count() + 1);
    let mut acc = 0;
    off.push(0);
    for t in 0..x.signature().type_count() {
        acc += x.domain_size(t);
        off.push(acc);
    }
    off
}

/// Encodes "homomorphism from `x` to `a`" as a constraint problem, with
/// optional per-element candidate restrictions.
fn hom_problem(x: &Structure, a: &Structure, candidates: Option<Vec<BitSet>>) -> (Csp, Vec<usize>) {
    let sig = x.signature();
    let off = offsets(x);
    let domains = candidates.unwrap_or_else(|| {
        (0..sig.type_count())
            .flat_map(|t| (0..x.domain_size(t)).map(move |_| t))
            .map(|t| BitSet::full(a.domain_size(t)))
            .collect()
    });
    let mut csp = Csp::new(domains);
    for s in 0..sig.symbol_count() {
        if x.relation(s).is_empty() {
            continue;
        }
        let arity = sig.arity(s);
        let sizes: Vec<usize> = arity.iter().map(|&t| a.domain_size(t)).collect();
        let table = Arc::new(Table::new(&sizes, a.relation(s).iter().cloned().collect()));
        for tuple in x.relation(s) {
            let scope = tuple.iter().zip(arity).map(|(&e, &t)| off[t] + e).collect();
            csp.add_constraint(scope, &table);
        }
    }
    (csp, off)
}

fn decode(x: &Structure, off: &[usize], sol: &[usize]) -> Homomorphism {
    Homomorphism {
        maps: (0..x.signature().type_count())
            .map(|t| sol[off[t]..off[t + 1]].to_vec())
            .collect(),
    }
}

/// Searches for a homomorphism `x → a`; the result, if any, is the first one
/// in lexicographic element order.
pub fn find_homomorphism(x: &Structure, a: &Structure) -> Result<Option<Homomorphism>> {
    check_same_signature(x.signature(), a.signature(), "homomorphism search")?;
    let (csp, off) = hom_problem(x, a, None);
    Ok(csp.solve().map(|sol| decode(x, &off, &sol)))
}

/// Enumerates homomorphisms `x → a` in lexicographic order, stopping after
/// `limit` of them when a limit is given.
pub fn all_homomorphisms(
    x: &Structure,
    a: &Structure,
    limit: Option<usize>,
) -> Result<Vec<Homomorphism>> {
    check_same_signature(x.signature(), a.signature(), "homomorphism enumeration")?;
    let (csp, off) = hom_problem(x, a, None);
    let mut out = Vec::new();
    csp.for_each_solution(|sol| {
        out.push(decode(x, &off, sol));
        limit.map_or(true, |l| out.len() < l)
    });
    Ok(out)
}

/// Occurrence counts of every element per (symbol, position), plus the number
/// of tuples in which it repeats (at two positions of its own type);
/// invariant under isomorphism.
fn degree_profiles(a: &Structure) -> Vec<Vec<Vec<usize>>> {
    let sig = a.signature();
    let width: usize = sig.symbols().iter().map(|s| s.arity.len() + 1).sum();
    let mut prof: Vec<Vec<Vec<usize>>> = (0..sig.type_count())
        .map(|t| vec![vec![0; width]; a.domain_size(t)])
        .collect();
    let mut base = 0;
    for s in 0..sig.symbol_count() {
        let arity = sig.arity(s);
        for tuple in a.relation(s) {
            for (p, (&e, &t)) in tuple.iter().zip(arity).enumerate() {
                prof[t][e][base + p] += 1;
                let repeats = tuple.iter().zip(arity).filter(|&(&o, &u)| o == e && u == t).count();
                if repeats > 1 {
                    prof[t][e][base + arity.len()] += 1;
                }
            }
        }
        base += arity.len() + 1;
    }
    prof
}

/// Searches for an isomorphism `a → b`: a bijection per type that maps the
/// relations of `a` exactly onto those of `b`.
pub fn find_isomorphism(a: &Structure, b: &Structure) -> Result<Option<Homomorphism>> {
    check_same_signature(a.signature(), b.signature(), "isomorphism test")?;
    let sig = a.signature();
    if (0..sig.type_count()).any(|t| a.domain_size(t) != b.domain_size(t))
        || (0..sig.symbol_count()).any(|s| a.relation(s).len() != b.relation(s).len())
    {
        return Ok(None);
    }
    let (pa, pb) = (degree_profiles(a), degree_profiles(b));
    let mut candidates = Vec::new();
    for t in 0..sig.type_count() {
        for e in 0..a.domain_size(t) {
            let mut dom = BitSet::empty(b.domain_size(t));
            for f in 0..b.domain_size(t) {
                if pa[t][e] == pb[t][f] {
                    dom.insert(f);
                }
            }
            candidates.push(dom);
        }
    }
    let (mut csp, off) = hom_problem(a, b, Some(candidates));
    for t in 0..sig.type_count() {
        csp.add_distinct((off[t]..off[t + 1]).collect());
    }
    Ok(csp.solve().map(|sol| decode(a, &off, &sol)))
}

/// Whether `a` and `b` are isomorphic.
pub fn is_isomorphic(a: &Structure, b: &Structure) -> Result<bool> {
    Ok(find_isomorphism(a, b)?.is_some())
}

/// Whether homomorphisms exist in both directions.
pub fn is_hom_equivalent(a: &Structure, b: &Structure) -> Result<bool> {
    Ok(find_homomorphism(a, b)?.is_some() && find_homomorphism(b, a)?.is_some())
}

#[cfg(test)]
mod tests {
    use super::super::catalog::*;
    use super::super::{power, Signature};
    use super::*;

    /// Exhaustive reference: try every map and return the first valid one.
    fn brute_force(x: &Structure, a: &Structure) -> Option<Homomorphism> {
        let sizes: Vec<(usize, usize)> = (0..x.signature().type_count())
            .map(|t| (x.domain_size(t), a.domain_size(t)))
            .collect();
        let total: usize = sizes.iter().map(|s| s.0).sum();
        let mut digits = vec![0usize; total];
        let radix: Vec<usize> = sizes
            .iter()
            .flat_map(|&(n, m)| std::iter::repeat(m).take(n))
            .collect();
        if radix.iter().any(|&r| r == 0) {
            let h = Homomorphism {
                maps: sizes.iter().map(|_| Vec::new()).collect(),
            };
            return if total == 0 && h.is_homomorphism(x, a) { Some(h) } else { None };
        }
        loop {
            let mut maps = Vec::new();
            let mut i = 0;
            for &(n, _) in &sizes {
                maps.push(digits[i..i + n].to_vec());
                i += n;
            }
            let h = Homomorphism { maps };
            if h.is_homomorphism(x, a) {
                return Some(h);
            }
            let mut p = total;
            loop {
                if p == 0 {
                    return None;
                }
                p -= 1;
                digits[p] += 1;
                if digits[p] < radix[p] {
                    break;
                }
                digits[p] = 0;
            }
        }
    }

    #[test]
    fn clique_maps_to_itself_by_identity() {
        let k3 = clique(3);
        let h = find_homomorphism(&k3, &k3).unwrap().unwrap();
        assert_eq!(h, Homomorphism::identity(&k3));
    }

    #[test]
    fn five_cycle_is_three_colourable_and_matches_brute_force() {
        let (c5, k3) = (cycle(5), clique(3));
        let h = find_homomorphism(&c5, &k3).unwrap().unwrap();
        assert!(h.is_homomorphism(&c5, &k3));
        assert_eq!(Some(h), brute_force(&c5, &k3));
    }

    #[test]
    fn triangle_is_not_two_colourable() {
        assert!(find_homomorphism(&cycle(3), &clique(2)).unwrap().is_none());
        assert!(brute_force(&cycle(3), &clique(2)).is_none());
    }

    #[test]
    fn empty_target_domain_blocks_homomorphism() {
        let empty = Structure::new(digraph_signature());
        assert!(find_homomorphism(&clique(1), &empty).unwrap().is_none());
        assert!(find_homomorphism(&empty, &clique(1)).unwrap().is_some());
    }

    #[test]
    fn signature_mismatch_is_reported() {
        let other = Arc::new(Signature::from_names(&["u"], &[("E", &["u", "u"])]).unwrap());
        let a = Structure::new(other);
        assert!(find_homomorphism(&a, &clique(2)).is_err());
    }

    #[test]
    fn enumeration_counts_two_colourings() {
        let homs = all_homomorphisms(&cycle(4), &clique(2), None).unwrap();
        assert_eq!(homs.len(), 2);
        let homs = all_homomorphisms(&clique(3), &clique(3), None).unwrap();
        assert_eq!(homs.len(), 6);
        assert_eq!(all_homomorphisms(&clique(3), &clique(3), Some(2)).unwrap().len(), 2);
    }

    #[test]
    fn isomorphism_examples() {
        let k2 = clique(2);
        let renamed = Structure::from_names(
            digraph_signature(),
            &[("v", &["x", "y"])],
            &[("E", &[&["y", "x"], &["x", "y"]])],
        )
        .unwrap();
        assert!(is_isomorphic(&k2, &renamed).unwrap());
        assert!(!is_isomorphic(&k2, &loop_graph()).unwrap());
        let two_edges = disjoint_edges(2);
        assert!(is_isomorphic(&two_edges, &power(&k2, 2)).unwrap());
        assert!(!is_isomorphic(&cycle(6), &disjoint_cycles(&[3, 3])).unwrap());
    }

    #[test]
    fn isomorphism_ignores_index_coincidences_across_types() {
        // The same structure with the elements of one type listed in a
        // different order: equal indices at positions of different types
        // must not be mistaken for a repeated element.
        let sig = Arc::new(Signature::from_names(&["a", "b"], &[("R", &["a", "b"])]).unwrap());
        let x = Structure::from_names(
            sig.clone(),
            &[("a", &["p", "q"]), ("b", &["r", "s"])],
            &[("R", &[&["p", "r"], &["q", "s"], &["p", "s"]])],
        )
        .unwrap();
        let y = Structure::from_names(
            sig,
            &[("a", &["p", "q"]), ("b", &["s", "r"])],
            &[("R", &[&["p", "r"], &["q", "s"], &["p", "s"]])],
        )
        .unwrap();
        assert!(is_isomorphic(&x, &y).unwrap());
    }

    #[test]
    fn hom_equivalence_examples() {
        assert!(is_hom_equivalent(&clique(2), &complete_bipartite(4, 4)).unwrap());
        assert!(!is_hom_equivalent(&cycle(3), &loop_graph()).unwrap());
        let mut c5p = cycle(5);
        let p = c5p.add_element(0, "p");
        c5p.add_tuple(0, vec![0, p]).unwrap();
        c5p.add_tuple(0, vec![p, 0]).unwrap();
        assert!(is_hom_equivalent(&cycle(5), &c5p).unwrap());
    }
}
