//! Arc-consistency on label cover, the partial-homomorphism instances
//! `σ_k^A`, and the consistency reductions
//! `κ_k^{A,B} = π_B ∘ κ_arc ∘ σ_k^A` and `κ_arc^{A,B} = π_B ∘ κ_arc ∘ ρ^A`.

use std::collections::{BTreeSet, VecDeque};

use super::LabelCoverInstance;
use crate::error::Result;
use crate::gadgets::{apply_universal_gadget, reify_to_label_cover};
use crate::structures::{check_same_signature, Structure};

/// The arc-consistent label sets `F_v` (label indices, increasing) of every
/// variable.
///
/// Constraints are processed from a FIFO worklist that initially holds all
/// constraints in input order; when a label set shrinks, every constraint
/// touching its variable is queued again. A constraint `π(v) = w` keeps in
/// `F_w` only images of `F_v` and in `F_v` only labels mapped into `F_w`.
pub fn arc_consistent_families(s: &LabelCoverInstance) -> Vec<Vec<usize>> {
    let n = s.variables().len();
    let mut alive: Vec<Vec<bool>> = s.variables().iter().map(|v| vec![true; v.labels.len()]).collect();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, c) in s.constraints().iter().enumerate() {
        incident[c.from].push(i);
        if c.to != c.from {
            incident[c.to].push(i);
        }
    }
    let mut queue: VecDeque<usize> = (0..s.constraints().len()).collect();
    let mut queued = vec![true; s.constraints().len()];
    while let Some(i) = queue.pop_front() {
        queued[i] = false;
        let c = &s.constraints()[i];
        let mut image = vec![false; alive[c.to].len()];
        for (l, &m) in c.map.iter().enumerate() {
            if alive[c.from][l] {
                image[m] = true;
            }
        }
        let mut changed = Vec::new();
        let mut to_changed = false;
        for (m, keep) in image.iter().enumerate() {
            if alive[c.to][m] && !keep {
                alive[c.to][m] = false;
                to_changed = true;
            }
        }
        if to_changed {
            changed.push(c.to);
        }
        let mut from_changed = false;
        for (l, &m) in c.map.iter().enumerate() {
            if alive[c.from][l] && !alive[c.to][m] {
                alive[c.from][l] = false;
                from_changed = true;
            }
        }
        if from_changed {
            changed.push(c.from);
        }
        for v in changed {
            for &j in &incident[v] {
                if !queued[j] {
                    queued[j] = true;
                    queue.push_back(j);
                }
            }
        }
    }
    alive
        .iter()
        .map(|a| (0..a.len()).filter(|&l| a[l]).collect())
        .collect()
}

/// `κ_arc(S)`: every variable keeps its arc-consistent labels and every
/// constraint map is restricted accordingly. Empty label sets are kept.
pub fn enforce_arc_consistency(s: &LabelCoverInstance) -> LabelCoverInstance {
    s.restrict(&arc_consistent_families(s))
        .expect("arc-consistent families are closed under the constraint maps")
}

/// An element of a structure, tagged by its type.
type Elem = (usize, usize);

/// All subsets of `elements` with at most `k` members, by size and then
/// lexicographically.
fn small_subsets(elements: &[Elem], k: usize) -> Vec<Vec<Elem>> {
    let mut out = vec![Vec::new()];
    let mut layer: Vec<(Vec<Elem>, usize)> = vec![(Vec::new(), 0)];
    for _ in 0..k.min(elements.len()) {
        let mut next = Vec::new();
        for (set, start) in &layer {
            for (i, &e) in elements.iter().enumerate().skip(*start) {
                let mut s = set.clone();
                s.push(e);
                next.push((s, i + 1));
            }
        }
        out.extend(next.iter().map(|(s, _)| s.clone()));
        layer = next;
    }
    out
}

fn render_set(x: &Structure, set: &[Elem]) -> String {
    let names: Vec<&str> = set.iter().map(|&(t, e)| x.element_name(t, e)).collect();
    format!("{{{}}}", names.join(","))
}

fn render_map(x: &Structure, a: &Structure, set: &[Elem], values: &[usize]) -> String {
    let parts: Vec<String> = set
        .iter()
        .zip(values)
        .map(|(&(t, e), &v)| format!("{}:{}", x.element_name(t, e), a.element_name(t, v)))
        .collect();
    format!("{{{}}}", parts.join(","))
}

/// Partial homomorphisms `K → A` (value lists aligned with `set`), in
/// lexicographic order. Only tuples of `X` lying entirely inside `K` are
/// checked.
fn partial_homomorphisms(a: &Structure, set: &[Elem], inside: &[(usize, Vec<usize>)]) -> Vec<Vec<usize>> {
    let sizes: Vec<usize> = set.iter().map(|&(t, _)| a.domain_size(t)).collect();
    let mut out = Vec::new();
    if sizes.contains(&0) {
        return out;
    }
    let mut values = vec![0usize; set.len()];
    loop {
        let ok = inside.iter().all(|(s, positions)| {
            let image: Vec<usize> = positions.iter().map(|&p| values[p]).collect();
            a.relation(*s).contains(&image)
        });
        if ok {
            out.push(values.clone());
        }
        let mut p = values.len();
        loop {
            if p == 0 {
                return out;
            }
            p -= 1;
            values[p] += 1;
            if values[p] < sizes[p] {
                break;
            }
            values[p] = 0;
        }
    }
}

/// `σ_k^A(X)`: a variable `v_K` (named `{a,b,…}`) for every set `K` of at
/// most `k` elements of `X` (including `∅`), typed by the partial
/// homomorphisms `K → A` (labels `{a:0,b:1,…}`), and a restriction
/// constraint `v_K → v_L` for every proper subset `L ⊂ K`.
pub fn sigma_k(a: &Structure, x: &Structure, k: usize) -> Result<LabelCoverInstance> {
    check_same_signature(a.signature(), x.signature(), "partial homomorphism instance")?;
    let sig = x.signature();
    let elements: Vec<Elem> = (0..sig.type_count())
        .flat_map(|t| (0..x.domain_size(t)).map(move |e| (t, e)))
        .collect();
    let subsets = small_subsets(&elements, k);
    let mut out = LabelCoverInstance::new();
    let mut homs: Vec<Vec<Vec<usize>>> = Vec::new();
    let tuples: Vec<(usize, Vec<Elem>)> = (0..sig.symbol_count())
        .flat_map(|s| {
            let arity = sig.arity(s).to_vec();
            x.relation(s)
                .iter()
                .map(move |t| (s, t.iter().zip(&arity).map(|(&e, &ty)| (ty, e)).collect()))
                .collect::<Vec<_>>()
        })
        .collect();
    for set in &subsets {
        let inside: Vec<(usize, Vec<usize>)> = tuples
            .iter()
            .filter_map(|(s, entries)| {
                entries
                    .iter()
                    .map(|e| set.iter().position(|m| m == e))
                    .collect::<Option<Vec<usize>>>()
                    .map(|positions| (*s, positions))
            })
            .collect();
        let hs = partial_homomorphisms(a, set, &inside);
        let labels = hs.iter().map(|h| render_map(x, a, set, h)).collect();
        out.add_variable(render_set(x, set), labels);
        homs.push(hs);
    }
    for (ki, set) in subsets.iter().enumerate() {
        for (li, sub) in subsets.iter().enumerate() {
            if sub.len() >= set.len() || !sub.iter().all(|e| set.contains(e)) {
                continue;
            }
            let positions: Vec<usize> = sub
                .iter()
                .map(|e| set.iter().position(|m| m == e).expect("subset"))
                .collect();
            let map = homs[ki]
                .iter()
                .map(|h| {
                    let restricted: Vec<usize> = positions.iter().map(|&p| h[p]).collect();
                    homs[li]
                        .binary_search(&restricted)
                        .expect("restriction of a partial homomorphism is one")
                })
                .collect();
            out.add_constraint(ki, li, map)?;
        }
    }
    Ok(out)
}

/// Number of tuples of `X` with more than `k` distinct entries; `σ_k`
/// never checks them.
pub fn uncovered_tuples(x: &Structure, k: usize) -> usize {
    let sig = x.signature();
    (0..sig.symbol_count())
        .map(|s| {
            let arity = sig.arity(s);
            x.relation(s)
                .iter()
                .filter(|t| t.iter().zip(arity).map(|(&e, &ty)| (ty, e)).collect::<BTreeSet<_>>().len() > k)
                .count()
        })
        .sum()
}

/// `κ_k^A(X) = κ_arc(σ_k^A(X))`.
pub fn k_consistency_instance(a: &Structure, x: &Structure, k: usize) -> Result<LabelCoverInstance> {
    Ok(enforce_arc_consistency(&sigma_k(a, x, k)?))
}

/// The `k`-consistency test: accepts when no enforced label set is empty.
pub fn k_consistency_test(a: &Structure, k: usize, x: &Structure) -> Result<bool> {
    Ok(!k_consistency_instance(a, x, k)?.has_empty_type())
}

/// The `k`-consistency reduction `κ_k^{A,B}(X)`.
pub fn k_consistency_reduce(a: &Structure, b: &Structure, k: usize, x: &Structure) -> Result<Structure> {
    Ok(apply_universal_gadget(b, &k_consistency_instance(a, x, k)?))
}

/// The arc-consistency reduction `κ_arc^{A,B}(X)`.
pub fn arc_consistency_reduce(a: &Structure, b: &Structure, x: &Structure) -> Result<Structure> {
    let s = enforce_arc_consistency(&reify_to_label_cover(a, x)?);
    Ok(apply_universal_gadget(b, &s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::catalog::*;
    use crate::structures::{find_homomorphism, is_isomorphic, power};

    fn labels(ls: &[&str]) -> Vec<String> {
        ls.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn image_pruning() {
        let mut s = LabelCoverInstance::new();
        let u = s.add_variable("u", labels(&["0", "1"]));
        let v = s.add_variable("v", labels(&["a", "b"]));
        s.add_constraint(u, v, vec![0, 0]).unwrap();
        let out = enforce_arc_consistency(&s);
        assert_eq!(out.variable(1).labels, vec!["a"]);
        assert_eq!(out.variable(0).labels.len(), 2);
        assert_eq!(enforce_arc_consistency(&out), out);
    }

    #[test]
    fn emptiness_propagates_along_a_chain() {
        let mut s = LabelCoverInstance::new();
        let u = s.add_variable("u", labels(&["0", "1"]));
        let v = s.add_variable("v", labels(&["a", "b"]));
        let w = s.add_variable("w", labels(&["x"]));
        s.add_constraint(u, v, vec![0, 1]).unwrap();
        s.add_constraint(v, w, vec![0, 0]).unwrap();
        s.add_constraint(u, w, vec![0, 0]).unwrap();
        let out = enforce_arc_consistency(&s);
        assert!(!out.has_empty_type());
        let mut t = LabelCoverInstance::new();
        let u = t.add_variable("u", labels(&["0"]));
        let v = t.add_variable("v", labels(&["a", "b"]));
        let w = t.add_variable("w", Vec::new());
        t.add_constraint(u, v, vec![1]).unwrap();
        t.add_constraint(v, w, vec![]).unwrap_err();
        t.add_constraint(w, v, vec![]).unwrap();
        let out = enforce_arc_consistency(&t);
        assert!(out.variables().iter().all(|v| v.labels.is_empty()));
    }

    #[test]
    fn sigma_on_a_single_edge() {
        let edge = Structure::from_names(digraph_signature(), &[("v", &["u", "v"])], &[("E", &[&["u", "v"]])]).unwrap();
        let s = sigma_k(&clique(2), &edge, 2).unwrap();
        let sizes: Vec<usize> = (0..4).map(|i| s.label_count(i)).collect();
        assert_eq!(sizes, vec![1, 2, 2, 2]);
        assert_eq!(s.constraints().len(), 5);
        assert_eq!(s.variable(3).name, "{u,v}");
        assert_eq!(s.variable(3).labels, vec!["{u:0,v:1}", "{u:1,v:0}"]);
        let empty = sigma_k(&clique(2), &digraph(0, &[]), 2).unwrap();
        assert_eq!(empty.variables().len(), 1);
        assert_eq!(empty.label_count(0), 1);
        let tri = sigma_k(&clique(2), &cycle(3), 3).unwrap();
        assert_eq!(tri.label_count(tri.variables().len() - 1), 0);
    }

    #[test]
    fn consistency_tests_on_the_triangle() {
        assert!(k_consistency_test(&clique(2), 2, &cycle(3)).unwrap());
        assert!(!k_consistency_test(&clique(2), 3, &cycle(3)).unwrap());
        assert!(k_consistency_test(&clique(2), 3, &cycle(4)).unwrap());
    }

    #[test]
    fn bottom_template_output() {
        let out = k_consistency_reduce(&clique(2), &bottom(), 2, &cycle(3)).unwrap();
        assert_eq!(out, bottom());
        let out = k_consistency_reduce(&clique(2), &bottom(), 3, &cycle(3)).unwrap();
        assert_eq!(out, top());
    }

    #[test]
    fn falsity_is_asserted_on_rejection() {
        let b = with_falsity(&clique(2));
        let out = k_consistency_reduce(&clique(2), &b, 3, &cycle(3)).unwrap();
        assert!(out.holds(1));
        assert!(find_homomorphism(&out, &b).unwrap().is_none());
    }

    #[test]
    fn completeness_on_small_cases() {
        for x in [cycle(4), directed_path(3), cycle(6)] {
            for b in [clique(2), clique(3)] {
                let out = k_consistency_reduce(&clique(2), &b, 2, &x).unwrap();
                assert!(find_homomorphism(&out, &b).unwrap().is_some());
                let out = arc_consistency_reduce(&clique(2), &b, &x).unwrap();
                assert!(find_homomorphism(&out, &b).unwrap().is_some());
            }
        }
    }

    #[test]
    fn arc_reduction_of_a_lone_vertex_is_a_power() {
        let x = digraph(1, &[]);
        let out = arc_consistency_reduce(&clique(3), &clique(2), &x).unwrap();
        assert!(is_isomorphic(&out, &power(&clique(2), 3)).unwrap());
    }

    #[test]
    fn arc_reduction_asserts_falsity_on_empty_relation() {
        let a = digraph(2, &[]);
        let b = with_falsity(&clique(2));
        let out = arc_consistency_reduce(&a, &b, &directed_path(2)).unwrap();
        assert!(out.holds(1));
    }
}
