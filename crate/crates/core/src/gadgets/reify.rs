//! Reification: constraints become elements of a new type per symbol, linked
//! to their entries by binary incidence relations.

use std::sync::Arc;

use crate::datalog::{Idb, Interpretation, Program, RuleBuilder};
use crate::error::Result;
use crate::labelcover::LabelCoverInstance;
use crate::structures::{check_same_signature, render_name_tuple, Signature, Structure};

/// The reified signature `Π*` of a signature `Π`.
///
/// It keeps the types of `Π` (same indices), adds one type per symbol `R`
/// (named after the symbol) and one binary symbol `P_R_i` of arity
/// `(R, ar_R(i))` per symbol and position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reified {
    pub signature: Arc<Signature>,
    /// Type of the constraints of each input symbol.
    pub symbol_type: Vec<usize>,
    /// `projection[R][i]` is the symbol `P_R_i`.
    pub projection: Vec<Vec<usize>>,
}

pub fn reified_signature(pi: &Signature) -> Reified {
    let mut sig = Signature::new();
    for t in pi.types() {
        sig.add_type(t.clone()).expect("distinct type names");
    }
    let symbol_type: Vec<usize> = pi
        .symbols()
        .iter()
        .map(|s| {
            let name = sig.fresh_type_name(&s.name);
            sig.add_type(name).expect("fresh type name")
        })
        .collect();
    let projection = pi
        .symbols()
        .iter()
        .enumerate()
        .map(|(s, sym)| {
            sym.arity
                .iter()
                .enumerate()
                .map(|(i, &t)| {
                    let name = sig.fresh_symbol_name(&format!("P_{}_{}", sym.name, i + 1));
                    sig.add_symbol(name, vec![symbol_type[s], t]).expect("fresh symbol name")
                })
                .collect()
        })
        .collect();
    Reified {
        signature: Arc::new(sig),
        symbol_type,
        projection,
    }
}

/// Name of a constraint tuple: a 1-tuple is named after its entry, longer
/// tuples as `(a,b,…)`.
fn tuple_name(x: &Structure, arity: &[usize], tuple: &[usize]) -> String {
    if tuple.len() == 1 {
        x.element_name(arity[0], tuple[0]).to_string()
    } else {
        render_name_tuple(tuple.iter().zip(arity).map(|(&e, &t)| x.element_name(t, e)))
    }
}

/// The reification `ρ(X)`.
pub fn reify(x: &Structure) -> Structure {
    let pi = x.signature();
    let r = reified_signature(pi);
    let mut out = Structure::new(r.signature.clone());
    for t in 0..pi.type_count() {
        for name in x.domain(t) {
            out.add_element(t, name.clone());
        }
    }
    for s in 0..pi.symbol_count() {
        let arity = pi.arity(s);
        for tuple in x.relation(s) {
            let id = out.add_element(r.symbol_type[s], tuple_name(x, arity, tuple));
            for (i, &a) in tuple.iter().enumerate() {
                out.insert_tuple(r.projection[s][i], vec![id, a]);
            }
        }
    }
    out
}

/// Reification as a Datalog interpretation: `D_t(x) ← x = x`,
/// `D_R(x…) ← R(x…)` and `P_R_i(x…, x_i) ← R(x…)`.
pub fn reification_interpretation(pi: &Arc<Signature>) -> Interpretation {
    let r = reified_signature(pi);
    let mut domains = Vec::new();
    for t in 0..pi.type_count() {
        let mut rb = RuleBuilder::new();
        let x = rb.var("x", t);
        rb.eq(x, x);
        let idb = Idb {
            name: format!("D_{}", pi.type_name(t)),
            arity: vec![t],
        };
        domains.push(Program::new(pi.clone(), vec![idb], vec![rb.head(0, vec![x])], 0).expect("domain program"));
    }
    let tuple_rule = |s: usize| {
        let mut rb = RuleBuilder::new();
        let vars: Vec<usize> = pi
            .arity(s)
            .iter()
            .enumerate()
            .map(|(i, &t)| rb.var(format!("x{}", i + 1), t))
            .collect();
        rb.edb(s, vars.clone());
        (rb, vars)
    };
    for s in 0..pi.symbol_count() {
        let (rb, vars) = tuple_rule(s);
        let idb = Idb {
            name: format!("D_{}", pi.symbol(s).name),
            arity: pi.arity(s).to_vec(),
        };
        domains.push(Program::new(pi.clone(), vec![idb], vec![rb.head(0, vars)], 0).expect("symbol domain program"));
    }
    let mut relations = Vec::new();
    for s in 0..pi.symbol_count() {
        for i in 0..pi.arity(s).len() {
            let (rb, vars) = tuple_rule(s);
            let mut head = vars.clone();
            head.push(vars[i]);
            let mut arity = pi.arity(s).to_vec();
            arity.push(arity[i]);
            let idb = Idb {
                name: format!("P_{}_{}", pi.symbol(s).name, i + 1),
                arity,
            };
            relations.push(Program::new(pi.clone(), vec![idb], vec![rb.head(0, head)], 0).expect("incidence program"));
        }
    }
    Interpretation::new(pi.clone(), r.signature, domains, relations).expect("reification interpretation")
}

/// The label cover instance `ρ^A(X)`: element `x` of type `t` becomes a
/// variable with label set `A_t`; a tuple of `R` becomes a variable (named
/// `R(a,b,…)`) with label set `R^A`, constrained to its `i`-th entry by the
/// `i`-th projection `R^A → A_{ar_R(i)}`.
pub fn reify_to_label_cover(a: &Structure, x: &Structure) -> Result<LabelCoverInstance> {
    check_same_signature(a.signature(), x.signature(), "reification to label cover")?;
    let pi = x.signature();
    let mut out = LabelCoverInstance::new();
    let mut vars: Vec<Vec<usize>> = Vec::new();
    for t in 0..pi.type_count() {
        let labels = a.domain(t).to_vec();
        vars.push(
            x.domain(t)
                .iter()
                .map(|name| out.add_variable(name.clone(), labels.clone()))
                .collect(),
        );
    }
    for s in 0..pi.symbol_count() {
        let arity = pi.arity(s);
        let a_tuples: Vec<&Vec<usize>> = a.relation(s).iter().collect();
        let labels: Vec<String> = a_tuples.iter().map(|t| tuple_name(a, arity, t)).collect();
        for tuple in x.relation(s) {
            let names = tuple.iter().zip(arity).map(|(&e, &t)| x.element_name(t, e));
            let v = out.add_variable(format!("{}{}", pi.symbol(s).name, render_name_tuple(names)), labels.clone());
            for (i, &e) in tuple.iter().enumerate() {
                let map = a_tuples.iter().map(|t| t[i]).collect();
                out.add_constraint(v, vars[arity[i]][e], map)?;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::catalog::*;
    use crate::structures::is_isomorphic;

    #[test]
    fn reifying_a_single_edge() {
        let x = Structure::from_names(digraph_signature(), &[("v", &["u", "v"])], &[("E", &[&["u", "v"]])]).unwrap();
        let r = reify(&x);
        assert_eq!(r.domain(0), &["u", "v"]);
        assert_eq!(r.domain(1), &["(u,v)"]);
        assert_eq!(r.relation_by_name("P_E_1").unwrap().iter().collect::<Vec<_>>(), vec![&vec![0, 0]]);
        assert_eq!(r.relation_by_name("P_E_2").unwrap().iter().collect::<Vec<_>>(), vec![&vec![0, 1]]);
    }

    #[test]
    fn reification_sizes() {
        let r = reify(&directed_cycle(3));
        assert_eq!(r.domain_size(1), 3);
        assert_eq!(r.tuple_count(), 6);
        let e = reify(&digraph(3, &[]));
        assert_eq!(e.domain_size(1), 0);
    }

    #[test]
    fn interpretation_matches_direct_reification() {
        let rho = reification_interpretation(&digraph_signature());
        for x in [cycle(4), directed_path(3), loop_graph(), digraph(2, &[])] {
            assert!(is_isomorphic(&rho.apply(&x).unwrap(), &reify(&x)).unwrap());
        }
    }

    #[test]
    fn reification_to_label_cover_examples() {
        let edge = directed_path(2);
        let s = reify_to_label_cover(&clique(2), &edge).unwrap();
        assert_eq!(s.variables().len(), 3);
        assert_eq!(s.variable(2).labels, vec!["(0,1)", "(1,0)"]);
        assert_eq!(s.constraints()[0].map, vec![0, 1]);
        assert_eq!(s.constraints()[1].map, vec![1, 0]);
        let empty = reify_to_label_cover(&clique(2), &digraph(0, &[])).unwrap();
        assert!(empty.variables().is_empty());
        let lp = reify_to_label_cover(&clique(2), &loop_graph()).unwrap();
        assert_eq!(lp.constraints().len(), 2);
        assert!(lp.constraints().iter().all(|c| c.to == 0 && c.from == 1));
    }
}
