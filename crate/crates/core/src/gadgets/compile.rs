//! Compilation of gadgets into Datalog∪ reductions.
//!
//! For a projective gadget the output types are the points `g` of the
//! disjoint union of the structures `D_t`, an output element is a pair of an
//! input element and a point of its type, and the binary IDB `I[h1,h2](x,y)`
//! derives exactly when the gadget identifies `(x; h1)` with `(y; h2)`. Its
//! rules are the gadget's equality constraints closed under reflexivity,
//! symmetry and transitivity; this closure is the only recursion in the
//! compiled programs. A relation tuple `R[g1,…,gk](x1,…,xk)` is derived when
//! every `(xi; gi)` is identified with `(y; hi)` for one element `y` and a
//! tuple `h` of `R` in the structure replacing `y`.
//!
//! The result is homomorphically equivalent, not isomorphic, to the gadget
//! replacement: every collapsed class appears once per member.

use std::collections::HashMap;

use super::{reification_interpretation, to_projective, Gadget, ProjectiveGadget};
use crate::datalog::{compose_ddatalog, Atom, Idb, Interpretation, Pred, Program, Reduction, Rule, RuleBuilder, UnionGadget, Var};
use crate::error::Result;
use crate::structures::Signature;

/// A point of the disjoint union of the gadget's domain structures.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct Point {
    /// Input type whose structure contains the point.
    input: usize,
    /// Output type of the point.
    ty: usize,
    /// Element index within its structure.
    element: usize,
}

/// Whether an IDB name belongs to the identification closure `I[…]`,
/// possibly renamed by composition.
pub fn is_closure_predicate(name: &str) -> bool {
    name.contains("I[")
}

/// Compiles a projective gadget into a Datalog∪ reduction whose output is
/// homomorphically equivalent to the gadget replacement on every input.
pub fn compile_projective_gadget(g: &ProjectiveGadget) -> Result<Reduction> {
    let pi = g.input().clone();
    let sigma = g.output().clone();
    let mut points = Vec::new();
    for t in 0..pi.type_count() {
        for u in 0..sigma.type_count() {
            for e in 0..g.domain(t).domain_size(u) {
                points.push(Point { input: t, ty: u, element: e });
            }
        }
    }
    let index: HashMap<Point, usize> = points.iter().enumerate().map(|(i, p)| (*p, i)).collect();
    let point_name = |p: &Point| {
        let elem = g.domain(p.input).element_name(p.ty, p.element);
        if sigma.type_count() == 1 {
            format!("{}.{}", pi.type_name(p.input), elem)
        } else {
            format!("{}.{}.{}", pi.type_name(p.input), sigma.type_name(p.ty), elem)
        }
    };
    let mut out_sig = Signature::new();
    let mut type_map = Vec::new();
    for p in &points {
        let name = out_sig.fresh_type_name(&point_name(p));
        out_sig.add_type(name)?;
        type_map.push(p.ty);
    }
    let names: Vec<String> = out_sig.types().to_vec();

    // The identification closure, shared by all relation programs.
    let mut idbs = Vec::new();
    let mut closure: HashMap<(usize, usize), usize> = HashMap::new();
    for (i, p) in points.iter().enumerate() {
        for (j, q) in points.iter().enumerate() {
            if p.ty == q.ty {
                closure.insert((i, j), idbs.len());
                idbs.push(Idb {
                    name: format!("I[{},{}]", names[i], names[j]),
                    arity: vec![p.input, q.input],
                });
            }
        }
    }
    let mut rules = Vec::new();
    for s in 0..pi.symbol_count() {
        let (t, v) = (pi.arity(s)[0], pi.arity(s)[1]);
        let map = g.map(s);
        for u in 0..sigma.type_count() {
            for d in 0..g.domain(v).domain_size(u) {
                let image = index[&Point { input: t, ty: u, element: map.apply(u, d) }];
                let h = index[&Point { input: v, ty: u, element: d }];
                let mut rb = RuleBuilder::new();
                let x = rb.var("x", t);
                let y = rb.var("y", v);
                rb.edb(s, vec![x, y]);
                rules.push(rb.head(closure[&(image, h)], vec![x, y]));
            }
        }
    }
    for (i, p) in points.iter().enumerate() {
        let mut rb = RuleBuilder::new();
        let x = rb.var("x", p.input);
        rb.eq(x, x);
        rules.push(rb.head(closure[&(i, i)], vec![x, x]));
    }
    let same: Vec<Vec<usize>> = (0..sigma.type_count())
        .map(|u| (0..points.len()).filter(|&i| points[i].ty == u).collect())
        .collect();
    for class in &same {
        for &a in class {
            for &b in class {
                let mut rb = RuleBuilder::new();
                let x = rb.var("x", points[a].input);
                let y = rb.var("y", points[b].input);
                rb.idb(closure[&(b, a)], vec![y, x]);
                rules.push(rb.head(closure[&(a, b)], vec![x, y]));
                for &c in class {
                    let mut rb = RuleBuilder::new();
                    let x = rb.var("x", points[a].input);
                    let y = rb.var("y", points[b].input);
                    let z = rb.var("z", points[c].input);
                    rb.idb(closure[&(a, b)], vec![x, y]).idb(closure[&(b, c)], vec![y, z]);
                    rules.push(rb.head(closure[&(a, c)], vec![x, z]));
                }
            }
        }
    }

    let mut domains = Vec::new();
    for (i, p) in points.iter().enumerate() {
        let mut rb = RuleBuilder::new();
        let x = rb.var("x", p.input);
        rb.eq(x, x);
        let idb = Idb {
            name: format!("D[{}]", names[i]),
            arity: vec![p.input],
        };
        domains.push(Program::new(pi.clone(), vec![idb], vec![rb.head(0, vec![x])], 0)?);
    }

    let mut relations = Vec::new();
    let mut symbol_map = Vec::new();
    for r in 0..sigma.symbol_count() {
        let arity = sigma.arity(r).to_vec();
        for gs in tuples(&arity.iter().map(|&u| same[u].clone()).collect::<Vec<_>>()) {
            let rendered: Vec<&str> = gs.iter().map(|&i| names[i].as_str()).collect();
            let head_name = format!("{}[{}]", sigma.symbol(r).name, rendered.join(","));
            let mut prog_idbs = idbs.clone();
            let head = prog_idbs.len();
            prog_idbs.push(Idb {
                name: head_name.clone(),
                arity: gs.iter().map(|&i| points[i].input).collect(),
            });
            let mut prog_rules = rules.clone();
            for s in 0..pi.type_count() {
                for h in g.domain(s).relation(r) {
                    let mut vars: Vec<Var> = gs
                        .iter()
                        .enumerate()
                        .map(|(j, &i)| Var {
                            name: format!("x{}", j + 1),
                            ty: points[i].input,
                        })
                        .collect();
                    let y = vars.len();
                    vars.push(Var { name: "y".into(), ty: s });
                    let mut body: Vec<Atom> = gs
                        .iter()
                        .enumerate()
                        .map(|(j, &i)| {
                            let hp = index[&Point { input: s, ty: arity[j], element: h[j] }];
                            Atom::Rel(Pred::Idb(closure[&(i, hp)]), vec![j, y])
                        })
                        .collect();
                    if body.is_empty() {
                        body.push(Atom::Eq(y, y));
                    }
                    prog_rules.push(Rule {
                        vars,
                        head,
                        head_args: (0..gs.len()).collect(),
                        body,
                    });
                }
            }
            relations.push(Program::new(pi.clone(), prog_idbs, prog_rules, head)?.pruned());
            let sym_arity = gs.clone();
            let name = out_sig.fresh_symbol_name(&head_name);
            out_sig.add_symbol(name, sym_arity)?;
            symbol_map.push(r);
        }
    }
    let out_sig = std::sync::Arc::new(out_sig);
    let interpretation = Interpretation::new(pi, out_sig.clone(), domains, relations)?;
    let union = UnionGadget::new(out_sig, sigma, type_map, symbol_map)?;
    Reduction::new(interpretation, union)
}

/// All tuples choosing one entry from each list, in lexicographic order.
fn tuples(choices: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for options in choices {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                options.iter().map(move |&o| {
                    let mut t = prefix.clone();
                    t.push(o);
                    t
                })
            })
            .collect();
    }
    out
}

/// Compiles a gadget: reification as a Datalog interpretation composed with
/// the compilation of the equivalent projective gadget.
pub fn compile_gadget(g: &Gadget) -> Result<Reduction> {
    let reification = Reduction::from_interpretation(reification_interpretation(g.input()));
    let projective = compile_projective_gadget(&to_projective(g)?)?;
    compose_ddatalog(&reification, &projective)
}

#[cfg(test)]
mod tests {
    use super::super::catalog::*;
    use super::super::{apply_gadget, apply_projective_gadget};
    use super::*;
    use crate::structures::catalog::*;
    use crate::structures::{is_hom_equivalent, is_isomorphic};

    #[test]
    fn parity_gadget_on_c4_gives_k44() {
        let r = compile_projective_gadget(&parity_projective_gadget()).unwrap();
        let out = r.apply(&cycle(4)).unwrap();
        assert!(is_isomorphic(&out, &complete_bipartite(4, 4)).unwrap());
        assert!(is_hom_equivalent(&out, &clique(2)).unwrap());
        let odd = r.apply(&cycle(3)).unwrap();
        assert!(is_hom_equivalent(&odd, &loop_graph()).unwrap());
    }

    #[test]
    fn projective_compilation_is_hom_equivalent() {
        let g = parity_projective_gadget();
        let r = compile_projective_gadget(&g).unwrap();
        for x in [directed_path(4), disjoint_cycles(&[3, 4]), digraph(3, &[]), directed_cycle(5)] {
            let direct = apply_projective_gadget(&g, &x).unwrap();
            assert!(is_hom_equivalent(&r.apply(&x).unwrap(), &direct).unwrap());
        }
    }

    #[test]
    fn compiled_general_gadgets_are_hom_equivalent() {
        for g in [path_gadget(), parity_gadget()] {
            let r = compile_gadget(&g).unwrap();
            for x in [directed_path(2), cycle(4), cycle(3), loop_graph()] {
                let direct = apply_gadget(&g, &x).unwrap();
                assert!(is_hom_equivalent(&r.apply(&x).unwrap(), &direct).unwrap());
            }
        }
    }

    #[test]
    fn recursion_only_through_the_closure() {
        let r = compile_gadget(&parity_gadget()).unwrap();
        assert!(r.interpretation.recursion_only_through(is_closure_predicate));
    }
}
