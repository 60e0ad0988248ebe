//! Small ready-made programs and interpretations over digraphs.

use std::sync::Arc;

use super::interpretation::Interpretation;
use super::program::{Idb, Program, RuleBuilder};
use crate::structures::catalog::{digraph_signature, trivial_signature};
use crate::structures::Signature;

/// Detects odd closed walks: the goal `C` is derived exactly when the
/// symmetric closure of the input digraph is not 2-colourable.
///
/// `P(x, y)` holds when there is a walk of odd length from `x` to `y` in the
/// underlying graph.
pub fn two_colouring() -> Program {
    let sig = digraph_signature();
    let idbs = vec![
        Idb {
            name: "P".into(),
            arity: vec![0, 0],
        },
        Idb {
            name: "C".into(),
            arity: vec![],
        },
    ];
    let mut rules = Vec::new();
    for reversed in [false, true] {
        let mut rb = RuleBuilder::new();
        let x = rb.var("x", 0);
        let y = rb.var("y", 0);
        rb.edb(0, if reversed { vec![y, x] } else { vec![x, y] });
        rules.push(rb.head(0, vec![x, y]));
    }
    let mut rb = RuleBuilder::new();
    let [x, z, w, y] = ["x", "z", "w", "y"].map(|n| rb.var(n, 0));
    rb.idb(0, vec![x, z]).idb(0, vec![z, w]).idb(0, vec![w, y]);
    rules.push(rb.head(0, vec![x, y]));
    let mut rb = RuleBuilder::new();
    let x = rb.var("x", 0);
    rb.idb(0, vec![x, x]);
    rules.push(rb.head(1, vec![]));
    Program::new(sig, idbs, rules, 1).expect("two-colouring program")
}

/// The line digraph: vertices are the edges of the input, and `(x, y)` points
/// to `(y, z)`.
pub fn line_digraph() -> Interpretation {
    let sig = digraph_signature();
    let mut rb = RuleBuilder::new();
    let x = rb.var("x", 0);
    let y = rb.var("y", 0);
    rb.edb(0, vec![x, y]);
    let dom = Program::new(
        sig.clone(),
        vec![Idb {
            name: "D".into(),
            arity: vec![0, 0],
        }],
        vec![rb.head(0, vec![x, y])],
        0,
    )
    .expect("line digraph domain");
    let mut rb = RuleBuilder::new();
    let [x, y, z] = ["x", "y", "z"].map(|n| rb.var(n, 0));
    rb.edb(0, vec![x, y]).edb(0, vec![y, z]);
    let rel = Program::new(
        sig.clone(),
        vec![Idb {
            name: "F".into(),
            arity: vec![0; 4],
        }],
        vec![rb.head(0, vec![x, y, y, z])],
        0,
    )
    .expect("line digraph relation");
    Interpretation::new(sig.clone(), sig, vec![dom], vec![rel]).expect("line digraph")
}

/// Maps a digraph to the trivial structure that holds exactly when the
/// digraph has a loop.
pub fn loop_check() -> Interpretation {
    let sig = digraph_signature();
    let mut rb = RuleBuilder::new();
    let x = rb.var("x", 0);
    rb.edb(0, vec![x, x]);
    let goal = Program::new(
        sig.clone(),
        vec![Idb {
            name: "C".into(),
            arity: vec![],
        }],
        vec![rb.head(0, vec![])],
        0,
    )
    .expect("loop program");
    let out: Arc<Signature> = trivial_signature();
    Interpretation::new(sig, out, vec![], vec![goal]).expect("loop interpretation")
}
