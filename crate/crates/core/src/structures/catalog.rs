//! Frequently used small structures: graphs, digraphs and the trivial
//! templates. Vertices are named `0, 1, …`.

use std::sync::Arc;

use super::{Signature, Structure};

/// One type `v` and one binary symbol `E : v v`.
pub fn digraph_signature() -> Arc<Signature> {
    Arc::new(Signature::from_names(&["v"], &[("E", &["v", "v"])]).expect("valid signature"))
}

/// The digraph on vertices `0..n` with the given directed edges.
pub fn digraph(n: usize, edges: &[(usize, usize)]) -> Structure {
    let mut g = Structure::new(digraph_signature());
    for i in 0..n {
        g.add_element(0, i.to_string());
    }
    for &(a, b) in edges {
        g.insert_tuple(0, vec![a, b]);
    }
    g
}

/// The graph (symmetric digraph) on `0..n` with the given undirected edges.
pub fn graph(n: usize, edges: &[(usize, usize)]) -> Structure {
    let both: Vec<(usize, usize)> = edges.iter().flat_map(|&(a, b)| [(a, b), (b, a)]).collect();
    digraph(n, &both)
}

/// The complete graph `K_n` without loops.
pub fn clique(n: usize) -> Structure {
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b)))
        .collect();
    digraph(n, &edges)
}

/// The undirected cycle `C_n` (n ≥ 3), stored symmetrically.
pub fn cycle(n: usize) -> Structure {
    let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    graph(n, &edges)
}

/// The directed cycle `0 → 1 → … → n-1 → 0`.
pub fn directed_cycle(n: usize) -> Structure {
    let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    digraph(n, &edges)
}

/// The directed path `0 → 1 → … → n-1` on `n` vertices.
pub fn directed_path(n: usize) -> Structure {
    let edges: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
    digraph(n, &edges)
}

/// A single vertex with a loop.
pub fn loop_graph() -> Structure {
    digraph(1, &[(0, 0)])
}

/// The complete bipartite graph `K_{a,b}`, stored symmetrically.
pub fn complete_bipartite(a: usize, b: usize) -> Structure {
    let edges: Vec<(usize, usize)> = (0..a)
        .flat_map(|x| (a..a + b).map(move |y| (x, y)))
        .collect();
    graph(a + b, &edges)
}

/// `k` vertex-disjoint undirected edges.
pub fn disjoint_edges(k: usize) -> Structure {
    let edges: Vec<(usize, usize)> = (0..k).map(|i| (2 * i, 2 * i + 1)).collect();
    graph(2 * k, &edges)
}

/// Vertex-disjoint undirected cycles of the given lengths.
pub fn disjoint_cycles(lengths: &[usize]) -> Structure {
    let mut edges = Vec::new();
    let mut base = 0;
    for &n in lengths {
        edges.extend((0..n).map(|i| (base + i, base + (i + 1) % n)));
        base += n;
    }
    graph(base, &edges)
}

/// The signature with no types and one nullary symbol `C`.
pub fn trivial_signature() -> Arc<Signature> {
    Arc::new(Signature::from_names(&[], &[("C", &[])]).expect("valid signature"))
}

/// The trivial template `⊥`: no types, `C` false.
pub fn bottom() -> Structure {
    Structure::new(trivial_signature())
}

/// The trivial template `⊤`: no types, `C` true.
pub fn top() -> Structure {
    let mut t = Structure::new(trivial_signature());
    t.insert_tuple(0, Vec::new());
    t
}

/// Extends a signature with one extra nullary symbol, returning the new
/// signature and the symbol's index.
pub fn with_falsity_signature(sig: &Signature) -> (Arc<Signature>, usize) {
    let mut s = sig.clone();
    let name = s.fresh_symbol_name("False");
    let idx = s.add_symbol(name, Vec::new()).expect("fresh name");
    (Arc::new(s), idx)
}

/// Copies a structure into `sig`, which must extend the structure's own
/// signature with additional symbols (left empty).
pub fn extend_to(a: &Structure, sig: &Arc<Signature>) -> Structure {
    let mut out = Structure::new(sig.clone());
    for t in 0..a.signature().type_count() {
        for name in a.domain(t) {
            out.add_element(t, name.clone());
        }
    }
    for s in 0..a.signature().symbol_count() {
        for tuple in a.relation(s) {
            out.insert_tuple(s, tuple.clone());
        }
    }
    out
}

/// A template augmented with an always-false nullary symbol, so that any
/// instance asserting that symbol is rejected.
pub fn with_falsity(a: &Structure) -> Structure {
    let (sig, _) = with_falsity_signature(a.signature());
    extend_to(a, &sig)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        assert_eq!(clique(3).relation(0).len(), 6);
        assert_eq!(cycle(5).relation(0).len(), 10);
        assert_eq!(directed_cycle(5).relation(0).len(), 5);
        assert_eq!(directed_path(3).relation(0).len(), 2);
        assert_eq!(complete_bipartite(4, 4).relation(0).len(), 32);
        assert_eq!(disjoint_cycles(&[3, 3]).domain_size(0), 6);
        assert!(top().holds(0));
        assert!(!bottom().holds(0));
    }

    #[test]
    fn falsity_extension_keeps_data() {
        let k2 = with_falsity(&clique(2));
        assert_eq!(k2.signature().symbol_count(), 2);
        assert_eq!(k2.relation(0).len(), 2);
        assert!(!k2.holds(1));
    }
}
