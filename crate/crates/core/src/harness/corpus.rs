//! Seeded random corpora and the fixed pools of interpretations, union
//! gadgets, reductions, gadgets, templates and minions that the suites draw
//! from.
//!
//! Every generator takes the case's random number generator, so a case is
//! reproducible from `(seed, case index)` alone.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::datalog::library::{line_digraph, loop_check};
use crate::datalog::{compose_interpretations, Interpretation, Reduction, UnionGadget};
use crate::gadgets::catalog::{incidence_gadget, parity_gadget, parity_projective_gadget, path_gadget};
use crate::gadgets::{compile_gadget, compile_projective_gadget, Gadget};
use crate::labelcover::LabelCoverInstance;
use crate::minions::{polymorphism_minion, projections, Minion};
use crate::relax::{group_template, tensor_interpretation, Modulus};
use crate::structures::catalog::{bottom, clique, digraph_signature, with_falsity};
use crate::structures::{Homomorphism, Signature, Structure};

/// A random structure over `sig` with `sizes[t]` elements of type `t`;
/// every well-typed tuple is included independently with probability
/// `density`.
pub fn random_structure(rng: &mut ChaCha8Rng, sig: &Arc<Signature>, sizes: &[usize], density: f64) -> Structure {
    let mut x = Structure::new(sig.clone());
    for (t, &n) in sizes.iter().enumerate() {
        for e in 0..n {
            x.add_element(t, e.to_string());
        }
    }
    for s in 0..sig.symbol_count() {
        let arity = sig.arity(s).to_vec();
        for tuple in all_tuples(&arity, sizes) {
            if rng.gen_bool(density) {
                x.add_tuple(s, tuple).expect("well-typed tuple");
            }
        }
    }
    x
}

/// Every tuple of the given arity over domains of the given sizes, in
/// lexicographic order.
fn all_tuples(arity: &[usize], sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &t in arity {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..sizes[t]).map(move |e| {
                    let mut p = prefix.clone();
                    p.push(e);
                    p
                })
            })
            .collect();
    }
    out
}

/// A random digraph on `n` vertices; loops appear with probability
/// `loops`, other arcs with probability `density`.
pub fn random_digraph(rng: &mut ChaCha8Rng, n: usize, density: f64, loops: f64) -> Structure {
    let mut x = Structure::new(digraph_signature());
    for v in 0..n {
        x.add_element(0, v.to_string());
    }
    for u in 0..n {
        for v in 0..n {
            let p = if u == v { loops } else { density };
            if rng.gen_bool(p) {
                x.add_tuple(0, vec![u, v]).expect("arc");
            }
        }
    }
    x
}

/// A random loopless symmetric graph on `n` vertices.
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, density: f64) -> Structure {
    let mut x = Structure::new(digraph_signature());
    for v in 0..n {
        x.add_element(0, v.to_string());
    }
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(density) {
                x.add_tuple(0, vec![u, v]).expect("edge");
                x.add_tuple(0, vec![v, u]).expect("edge");
            }
        }
    }
    x
}

/// An instance with a planted homomorphism to `a`: `sizes[t]` elements of
/// type `t`, each sent to a random element of `a`, and every tuple whose
/// image lies in `a` kept with probability `density`. Types on which `a` is
/// empty get no elements.
pub fn planted_instance(rng: &mut ChaCha8Rng, a: &Structure, sizes: &[usize], density: f64) -> (Structure, Homomorphism) {
    let sig = a.signature();
    let sizes: Vec<usize> = sizes
        .iter()
        .enumerate()
        .map(|(t, &n)| if a.domain_size(t) == 0 { 0 } else { n })
        .collect();
    let maps: Vec<Vec<usize>> = sizes
        .iter()
        .enumerate()
        .map(|(t, &n)| (0..n).map(|_| rng.gen_range(0..a.domain_size(t))).collect())
        .collect();
    let mut x = Structure::new(sig.clone());
    for (t, &n) in sizes.iter().enumerate() {
        for e in 0..n {
            x.add_element(t, e.to_string());
        }
    }
    for s in 0..sig.symbol_count() {
        let arity = sig.arity(s).to_vec();
        for tuple in all_tuples(&arity, &sizes) {
            let image: Vec<usize> = tuple.iter().zip(&arity).map(|(&e, &t)| maps[t][e]).collect();
            if a.relation(s).contains(&image) && rng.gen_bool(density) {
                x.add_tuple(s, tuple).expect("well-typed tuple");
            }
        }
    }
    (x, Homomorphism { maps })
}

/// A pair `A → B`: `A` is random, `B` receives a random image of `A` plus
/// random extra tuples and elements.
pub fn homomorphic_pair(rng: &mut ChaCha8Rng, sig: &Arc<Signature>, max: usize, density: f64) -> (Structure, Structure) {
    let sizes_a: Vec<usize> = (0..sig.type_count()).map(|_| rng.gen_range(1..=max)).collect();
    let a = random_structure(rng, sig, &sizes_a, density);
    let sizes_b: Vec<usize> = (0..sig.type_count()).map(|_| rng.gen_range(1..=max)).collect();
    let mut b = random_structure(rng, sig, &sizes_b, density / 2.0);
    let maps: Vec<Vec<usize>> = (0..sig.type_count())
        .map(|t| (0..sizes_a[t]).map(|_| rng.gen_range(0..sizes_b[t])).collect())
        .collect();
    for s in 0..sig.symbol_count() {
        let arity = sig.arity(s).to_vec();
        for tuple in a.relation(s).clone() {
            let image = tuple.iter().zip(&arity).map(|(&e, &t)| maps[t][e]).collect();
            b.add_tuple(s, image).expect("well-typed tuple");
        }
    }
    (a, b)
}

/// A random label cover instance with `1..=max_vars` variables, label sets
/// of size `1..=max_labels` drawn from a few shared sets, and random
/// constraints.
pub fn random_label_cover(rng: &mut ChaCha8Rng, max_vars: usize, max_labels: usize) -> LabelCoverInstance {
    let names = ["a", "b", "c", "d", "e"];
    let shared: Vec<Vec<String>> = (1..=max_labels)
        .map(|n| names[..n].iter().map(|s| s.to_string()).collect())
        .collect();
    let mut s = LabelCoverInstance::new();
    let n = rng.gen_range(1..=max_vars);
    for v in 0..n {
        let labels = shared.choose(rng).expect("nonempty").clone();
        s.add_variable(format!("v{v}"), labels);
    }
    let constraints = rng.gen_range(0..=n + 1);
    for _ in 0..constraints {
        let (from, to) = (rng.gen_range(0..n), rng.gen_range(0..n));
        let map = (0..s.label_count(from)).map(|_| rng.gen_range(0..s.label_count(to))).collect();
        s.add_constraint(from, to, map).expect("valid map");
    }
    s
}

/// Two-sorted digraph-like signature merged into digraphs by the union
/// pool.
pub fn bipartite_signature() -> Arc<Signature> {
    Arc::new(
        Signature::from_names(
            &["a", "b"],
            &[("R", &["a", "b"]), ("S", &["b", "a"]), ("T", &["a", "a"]), ("U", &["b", "b"])],
        )
        .expect("valid signature"),
    )
}

/// Union gadgets into digraphs: the identity, and merges of the two-sorted
/// signature keeping all or only some of its symbols.
pub fn union_pool() -> Vec<(String, UnionGadget)> {
    let g = digraph_signature();
    let two = bipartite_signature();
    let merge_all = UnionGadget::new(two.clone(), g.clone(), vec![0, 0], vec![0, 0, 0, 0]).expect("merge");
    let mut pool = vec![("identity".to_string(), UnionGadget::identity(g.clone())), ("merge".to_string(), merge_all)];
    // A second output symbol receives the loops-only relations.
    let g2 = Arc::new(Signature::from_names(&["v"], &[("E", &["v", "v"]), ("F", &["v", "v"])]).expect("signature"));
    let into_two = UnionGadget::new(two, g2.clone(), vec![0, 0], vec![0, 0, 1, 1]).expect("merge");
    let forget = UnionGadget::new(g2, g, vec![0], vec![0, 0]).expect("merge");
    pool.push(("merge-split".to_string(), into_two.then(&forget).expect("composable")));
    pool
}

/// Interpretations on digraphs. The compiled ones stop before their union
/// gadget, so their output is the multi-sorted signature of the gadget's
/// points.
pub fn digraph_interpretations() -> Vec<(String, Interpretation)> {
    let g = digraph_signature();
    let line = line_digraph();
    vec![
        ("identity".into(), Interpretation::identity(g)),
        ("line".into(), line.clone()),
        ("line-line".into(), compose_interpretations(&line, &line).expect("composable")),
        (
            "path-compiled".into(),
            compile_gadget(&path_gadget()).expect("compiles").interpretation,
        ),
        (
            "parity-compiled".into(),
            compile_projective_gadget(&parity_projective_gadget()).expect("compiles").interpretation,
        ),
    ]
}

/// Every interpretation whose input is the digraph signature, including
/// those with other output signatures.
pub fn interpretation_pool() -> Vec<(String, Interpretation)> {
    let mut pool = digraph_interpretations();
    pool.push(("loop-check".into(), loop_check()));
    pool.push((
        "tensor-2".into(),
        tensor_interpretation(&digraph_signature(), 2).expect("single-sorted"),
    ));
    pool
}

/// Reductions (interpretation followed by union gadget) with their names.
pub fn reduction_pool() -> Vec<(String, Reduction)> {
    let mut pool: Vec<(String, Reduction)> = digraph_interpretations()
        .into_iter()
        .map(|(n, i)| (n, Reduction::from_interpretation(i)))
        .collect();
    pool.push(("path-gadget".into(), compile_gadget(&path_gadget()).expect("compiles")));
    pool.push(("parity-gadget".into(), compile_gadget(&parity_gadget()).expect("compiles")));
    pool.push(("loop-check".into(), Reduction::from_interpretation(loop_check())));
    for (n, u) in union_pool() {
        pool.push((format!("union-{n}"), Reduction::from_union(u)));
    }
    pool
}

/// Gadgets from digraphs to digraphs.
pub fn gadget_pool() -> Vec<(String, Gadget)> {
    vec![
        ("path".into(), path_gadget()),
        ("parity".into(), parity_gadget()),
        ("incidence".into(), incidence_gadget(&digraph_signature())),
    ]
}

/// The `Z_2` template with constant 1.
pub fn z2_template() -> Structure {
    group_template(Modulus::Cyclic(2), &[1]).expect("finite template")
}

/// Templates for the consistency suites, each with the output templates
/// `B` tested against it.
pub fn consistency_templates() -> Vec<(String, Structure, Vec<Structure>)> {
    let (k2, k3) = (clique(2), clique(3));
    vec![
        ("K2".into(), k2.clone(), vec![k2.clone(), k3.clone()]),
        ("K3".into(), k3.clone(), vec![k2.clone(), k3.clone()]),
        ("Z2".into(), z2_template(), vec![z2_template()]),
        ("K2+false".into(), with_falsity(&k2), vec![with_falsity(&k2)]),
        ("K3+false".into(), with_falsity(&k3), vec![with_falsity(&k2), with_falsity(&k3)]),
    ]
}

/// The trivial template `⊥`.
pub fn falsity() -> Structure {
    bottom()
}

/// Minions with at most 8 elements per arity up to arity 3: the
/// projections (`n` elements), the polymorphisms of the `Z_2` template
/// (the linear maps with coefficient sum 1, `2^{n-1}` elements) and the
/// polymorphisms of `⊥` (one element). `Pol(K2)` is left out: its
/// self-dual ternary functions number 16.
pub fn small_minions() -> Vec<Minion> {
    let z2 = z2_template();
    vec![
        projections(3),
        polymorphism_minion(&z2, &z2, 3).expect("small"),
        polymorphism_minion(&bottom(), &bottom(), 3).expect("small"),
    ]
}

/// Estimated size of `compose_ddatalog(first, second)`: swapping the union
/// gadget of `first` past `second` lifts each rule variable to every
/// preimage of its type, so a rule with `v` variables becomes up to `p^v`
/// rules, `p` being the largest number of merged input types.
pub fn composition_cost(first: &Reduction, second: &Reduction) -> f64 {
    let map = first.union.type_map();
    let pre = (0..first.output().type_count())
        .map(|t| map.iter().filter(|&&u| u == t).count())
        .max()
        .unwrap_or(1) as f64;
    let i = &second.interpretation;
    i.domain_programs()
        .iter()
        .chain(i.relation_programs())
        .flat_map(|p| p.rules().iter())
        .map(|r| pre.powi(r.vars.len() as i32))
        .sum()
}

/// Composition cost above which a pair of pooled reductions is not drawn.
pub const COMPOSITION_BUDGET: f64 = 1000.0;

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn small_minions_have_at_most_eight_elements_per_arity() {
        let sizes: Vec<Vec<usize>> = small_minions()
            .iter()
            .map(|m| (1..=m.max_arity()).map(|n| m.size(n)).collect())
            .collect();
        assert_eq!(sizes, vec![vec![1, 2, 3], vec![1, 2, 4], vec![1, 1, 1]]);
    }

    #[test]
    fn generators_are_reproducible() {
        let sig = digraph_signature();
        let mut r1 = ChaCha8Rng::seed_from_u64(5);
        let mut r2 = ChaCha8Rng::seed_from_u64(5);
        assert_eq!(homomorphic_pair(&mut r1, &sig, 4, 0.3), homomorphic_pair(&mut r2, &sig, 4, 0.3));
        assert_eq!(random_label_cover(&mut r1, 3, 3), random_label_cover(&mut r2, 3, 3));
    }
}
