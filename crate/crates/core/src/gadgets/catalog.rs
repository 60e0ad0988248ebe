//! Ready-made gadgets over digraphs.

use crate::structures::catalog::{clique, digraph, digraph_signature, directed_path};
use crate::structures::{Homomorphism, Signature, Structure};

use super::{Gadget, ProjectiveGadget};

fn point_map(image: usize) -> Homomorphism {
    Homomorphism {
        maps: vec![vec![image]],
    }
}

fn swap() -> Homomorphism {
    Homomorphism {
        maps: vec![vec![1, 0]],
    }
}

/// Replaces every edge by a directed path of length 3 between its
/// endpoints; the reduction from 5-colouring to the 5-cycle.
pub fn path_gadget() -> Gadget {
    let sig = digraph_signature();
    Gadget::new(
        sig.clone(),
        sig,
        vec![digraph(1, &[])],
        vec![directed_path(4)],
        vec![vec![point_map(0), point_map(3)]],
    )
    .expect("path gadget")
}

/// Replaces every vertex and every edge by `K_2`, gluing the endpoint copies
/// into the edge copy with the identity and with the swap. Each connected
/// component becomes an edge if it is bipartite and a loop otherwise.
pub fn parity_gadget() -> Gadget {
    let sig = digraph_signature();
    let k2 = clique(2);
    let id = Homomorphism::identity(&k2);
    Gadget::new(sig.clone(), sig, vec![k2.clone()], vec![k2], vec![vec![id, swap()]]).expect("parity gadget")
}

/// The projective form of [`parity_gadget`]: one copy of `K_2` per vertex,
/// glued along every edge by the swap.
pub fn parity_projective_gadget() -> ProjectiveGadget {
    let sig = digraph_signature();
    ProjectiveGadget::new(sig.clone(), sig, vec![clique(2)], vec![swap()]).expect("parity projective gadget")
}

/// The incidence digraph of a structure over `sig`: one vertex per element
/// and per tuple, with an edge from a tuple to each of its entries.
pub fn incidence_gadget(sig: &std::sync::Arc<Signature>) -> Gadget {
    let out = digraph_signature();
    let domains = (0..sig.type_count()).map(|_| digraph(1, &[])).collect();
    let mut symbols = Vec::new();
    let mut projections = Vec::new();
    for s in 0..sig.symbol_count() {
        let k = sig.arity(s).len();
        let edges: Vec<(usize, usize)> = (0..k).map(|j| (k, j)).collect();
        let mut star = Structure::new(out.clone());
        for j in 0..k {
            star.add_element(0, format!("v{}", j + 1));
        }
        star.add_element(0, "r");
        for (a, b) in edges {
            star.add_tuple(0, vec![a, b]).expect("valid edge");
        }
        symbols.push(star);
        projections.push((0..k).map(point_map).collect());
    }
    Gadget::new(sig.clone(), out, domains, symbols, projections).expect("incidence gadget")
}
