//! The tensor interpretation `τ^k` and the tensor test of a minion.
//!
//! `τ^k` maps a single-sorted structure to the structure on its `k`-tuples
//! with a symbol `R_k` of arity `m^k` per symbol `R` of arity `m` and a
//! symbol `T` of arity `k^k`:
//!
//! * `D(x_1, …, x_k) ← x_1 = x_1, …, x_k = x_k`;
//! * `R_k(…) ← R(x_1, …, x_m)`, whose argument at `f ∈ [m]^k` is the
//!   `k`-tuple `(x_{f(1)}, …, x_{f(k)})`;
//! * `T(…) ← x_1 = x_1, …, x_k = x_k`, likewise with `f ∈ [k]^k`.
//!
//! Arguments are ordered lexicographically by `f` (first coordinate most
//! significant), and the flat head lists the `k` entries of each argument
//! consecutively, as the interpretation's domain arity requires.

use std::sync::Arc;

use crate::datalog::{Idb, Interpretation, Program, RuleBuilder};
use crate::error::Result;
use crate::gadgets::reify_to_label_cover;
use crate::minions::{label_cover_to_minion, Minion};
use crate::structures::{Signature, Structure};

/// All `f ∈ [m]^k` in lexicographic order, as value lists.
fn functions(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|f: Vec<usize>| {
                (0..m).map(move |v| {
                    let mut g = f.clone();
                    g.push(v);
                    g
                })
            })
            .collect();
    }
    out
}

/// `τ^k` for a single-sorted signature.
pub fn tensor_interpretation(sigma: &Arc<Signature>, k: usize) -> Result<Interpretation> {
    let t = sigma.single_type()?;
    let mut out_sig = Signature::new();
    let d = out_sig.add_type(sigma.type_name(t))?;
    let mut names = Vec::new();
    for s in 0..sigma.symbol_count() {
        let sym = sigma.symbol(s);
        let m = sym.arity.len();
        let name = out_sig.fresh_symbol_name(&format!("{}_{k}", sym.name));
        out_sig.add_symbol(name.clone(), vec![d; m.pow(k as u32)])?;
        names.push(name);
    }
    let t_name = out_sig.fresh_symbol_name("T");
    out_sig.add_symbol(t_name, vec![d; k.pow(k as u32)])?;
    let out_sig = Arc::new(out_sig);

    let vars = |rb: &mut RuleBuilder, n: usize| -> Vec<usize> {
        (0..n).map(|i| rb.var(format!("x{}", i + 1), t)).collect()
    };
    let head_of = |xs: &[usize], m: usize| -> Vec<usize> {
        functions(m, k).iter().flat_map(|f| f.iter().map(|&i| xs[i]).collect::<Vec<_>>()).collect()
    };
    let mut domain_rule = RuleBuilder::new();
    let xs = vars(&mut domain_rule, k);
    for &x in &xs {
        domain_rule.eq(x, x);
    }
    let domain = Program::new(
        sigma.clone(),
        vec![Idb {
            name: "D".into(),
            arity: vec![t; k],
        }],
        vec![domain_rule.head(0, xs.clone())],
        0,
    )?;
    let mut relations = Vec::new();
    for s in 0..sigma.symbol_count() {
        let m = sigma.arity(s).len();
        let mut rb = RuleBuilder::new();
        let ys = vars(&mut rb, m);
        rb.edb(s, ys.clone());
        let head = head_of(&ys, m);
        let idb = Idb {
            name: names[s].clone(),
            arity: vec![t; head.len()],
        };
        relations.push(Program::new(sigma.clone(), vec![idb], vec![rb.head(0, head)], 0)?);
    }
    let head = head_of(&xs, k);
    let idb = Idb {
        name: "T".into(),
        arity: vec![t; head.len()],
    };
    relations.push(Program::new(sigma.clone(), vec![idb], vec![domain_rule.head(0, head)], 0)?);
    Interpretation::new(sigma.clone(), out_sig, vec![domain], relations)
}

/// The `k`-th tensor test of `M`: accepts `X` iff
/// `ρ^{τ^k(A)}(τ^k(X)) → M`, decided by search. Fails with a truncation
/// error when `|A|^k` or a relation of `τ^k(A)` exceeds the truncation of
/// `M`.
pub fn tensor_test(a: &Structure, m: &Minion, k: usize, x: &Structure) -> Result<bool> {
    let tau = tensor_interpretation(a.signature(), k)?;
    let ta = tau.apply(a)?;
    let tx = tau.apply(x)?;
    let lc = reify_to_label_cover(&ta, &tx)?;
    Ok(label_cover_to_minion(&lc, m)?.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minions::{polymorphism_minion, projections};
    use crate::structures::catalog::*;
    use crate::structures::{find_homomorphism, is_isomorphic};

    #[test]
    fn shapes() {
        let tau = tensor_interpretation(&digraph_signature(), 2).unwrap();
        assert_eq!(tau.output().arity(0).len(), 4);
        assert_eq!(tau.output().arity(1).len(), 4);
        let c3 = cycle(3);
        let t = tau.apply(&c3).unwrap();
        assert_eq!(t.domain_size(0), 9);
        assert_eq!(t.relation(0).len(), c3.relation(0).len());
        assert_eq!(t.relation(1).len(), 9);
    }

    #[test]
    fn first_level_is_the_structure_plus_full_t() {
        let tau = tensor_interpretation(&digraph_signature(), 1).unwrap();
        for g in [cycle(4), directed_path(3), loop_graph()] {
            let t = tau.apply(&g).unwrap();
            assert_eq!(t.domain_size(0), g.domain_size(0));
            assert_eq!(t.relation(1).len(), g.domain_size(0));
            let mut back = Structure::new(digraph_signature());
            for name in t.domain(0) {
                back.add_element(0, name.clone());
            }
            for tup in t.relation(0) {
                back.add_tuple(0, tup.clone()).unwrap();
            }
            assert!(is_isomorphic(&back, &g).unwrap());
        }
    }

    #[test]
    fn tensor_test_examples() {
        let k2 = clique(2);
        let p = projections(2);
        for x in [cycle(3), cycle(4), directed_path(3)] {
            let expected = find_homomorphism(&x, &k2).unwrap().is_some();
            assert_eq!(tensor_test(&k2, &p, 1, &x).unwrap(), expected);
        }
        let pol = polymorphism_minion(&k2, &k2, 2).unwrap();
        assert!(!tensor_test(&k2, &pol, 1, &cycle(3)).unwrap());
        assert!(tensor_test(&k2, &pol, 1, &cycle(6)).unwrap());
    }
}
