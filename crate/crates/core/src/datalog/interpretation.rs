//! Datalog interpretations: one program per output type and per output
//! symbol.

use std::collections::HashMap;
use std::sync::Arc;

use super::eval::evaluate_program;
use super::program::{Atom, Idb, Pred, Program, RuleBuilder};
use crate::error::{Error, Result};
use crate::structures::{check_same_signature, render_name_tuple, Signature, Structure};

/// A Datalog interpretation `φ: Π → Σ`.
///
/// The domain of output type `t` is the output relation of `domains[t]`; an
/// output element is therefore a tuple of input elements. The relation of
/// output symbol `R` of arity `(t_1, …, t_k)` is computed by `relations[R]`,
/// whose output arity is the concatenation of the output arities of the
/// domain programs of `t_1, …, t_k`; a flat tuple is split into groups
/// accordingly and kept only if every group is an element of its domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interpretation {
    input: Arc<Signature>,
    output: Arc<Signature>,
    domains: Vec<Program>,
    relations: Vec<Program>,
}

impl Interpretation {
    pub fn new(
        input: Arc<Signature>,
        output: Arc<Signature>,
        domains: Vec<Program>,
        relations: Vec<Program>,
    ) -> Result<Self> {
        let err = |m: String| Err(Error::InvalidInterpretation(m));
        if domains.len() != output.type_count() {
            return err(format!(
                "{} domain programs for {} output types",
                domains.len(),
                output.type_count()
            ));
        }
        if relations.len() != output.symbol_count() {
            return err(format!(
                "{} relation programs for {} output symbols",
                relations.len(),
                output.symbol_count()
            ));
        }
        for p in domains.iter().chain(&relations) {
            check_same_signature(p.input(), &input, "component program input")?;
        }
        for (s, p) in relations.iter().enumerate() {
            let expected: Vec<usize> = output
                .arity(s)
                .iter()
                .flat_map(|&t| domains[t].output_arity().iter().copied())
                .collect();
            if p.output_arity() != expected.as_slice() {
                return err(format!(
                    "program for `{}` has output arity {} but the domains require {}",
                    output.symbol(s).name,
                    p.output_arity().len(),
                    expected.len()
                ));
            }
        }
        Ok(Interpretation {
            input,
            output,
            domains,
            relations,
        })
    }

    /// The identity interpretation on `sig`: `D_t(x) ← x = x` and
    /// `R'(x…) ← R(x…)`.
    pub fn identity(sig: Arc<Signature>) -> Self {
        let domains = (0..sig.type_count())
            .map(|t| {
                let mut rb = RuleBuilder::new();
                let x = rb.var("x", t);
                rb.eq(x, x);
                let idb = Idb {
                    name: format!("D_{}", sig.type_name(t)),
                    arity: vec![t],
                };
                Program::new(sig.clone(), vec![idb], vec![rb.head(0, vec![x])], 0)
                    .expect("identity domain program")
            })
            .collect();
        let relations = (0..sig.symbol_count())
            .map(|s| Program::echo(sig.clone(), s).expect("identity relation program"))
            .collect();
        Interpretation::new(sig.clone(), sig, domains, relations).expect("identity interpretation")
    }

    pub fn input(&self) -> &Arc<Signature> {
        &self.input
    }

    pub fn output(&self) -> &Arc<Signature> {
        &self.output
    }

    pub fn domain_programs(&self) -> &[Program] {
        &self.domains
    }

    pub fn relation_programs(&self) -> &[Program] {
        &self.relations
    }

    pub fn domain_program(&self, t: usize) -> &Program {
        &self.domains[t]
    }

    pub fn relation_program(&self, s: usize) -> &Program {
        &self.relations[s]
    }

    /// Input types of the tuples forming output type `t`.
    pub fn domain_arity(&self, t: usize) -> &[usize] {
        self.domains[t].output_arity()
    }

    /// Maximal rule width over all component programs.
    pub fn width(&self) -> usize {
        self.domains
            .iter()
            .chain(&self.relations)
            .map(Program::width)
            .max()
            .unwrap_or(0)
    }

    /// Applies the interpretation. Output elements are named after their
    /// input tuples (a 1-tuple is named after its element) and ordered
    /// lexicographically.
    pub fn apply(&self, x: &Structure) -> Result<Structure> {
        check_same_signature(&self.input, x.signature(), "interpretation input")?;
        let mut out = Structure::new(self.output.clone());
        let mut index: Vec<HashMap<Vec<usize>, usize>> = Vec::new();
        for (t, p) in self.domains.iter().enumerate() {
            let arity = p.output_arity();
            let mut map = HashMap::new();
            for tuple in evaluate_program(p, x)? {
                let name = if arity.len() == 1 {
                    x.element_name(arity[0], tuple[0]).to_string()
                } else {
                    render_name_tuple(tuple.iter().zip(arity).map(|(&e, &ty)| x.element_name(ty, e)))
                };
                let id = out.add_element(t, name);
                map.insert(tuple, id);
            }
            index.push(map);
        }
        for (s, p) in self.relations.iter().enumerate() {
            let arity = self.output.arity(s).to_vec();
            'tuples: for flat in evaluate_program(p, x)? {
                let mut image = Vec::with_capacity(arity.len());
                let mut at = 0;
                for &t in &arity {
                    let width = self.domain_arity(t).len();
                    match index[t].get(&flat[at..at + width]) {
                        Some(&id) => image.push(id),
                        None => continue 'tuples,
                    }
                    at += width;
                }
                out.insert_tuple(s, image);
            }
        }
        Ok(out)
    }

    /// Whether the only recursive IDBs of every component program are among
    /// those accepted by `allowed`.
    pub fn recursion_only_through(&self, allowed: impl Fn(&str) -> bool) -> bool {
        self.domains.iter().chain(&self.relations).all(|p| {
            (0..p.idbs().len()).all(|i| !p.is_recursive_idb(i) || allowed(&p.idbs()[i].name))
        })
    }
}

/// Input symbols mentioned in the rule bodies of a program, sorted.
pub(crate) fn edb_symbols(p: &Program) -> Vec<usize> {
    let mut out: Vec<usize> = p
        .rules()
        .iter()
        .flat_map(|r| r.body.iter())
        .filter_map(|a| match a {
            Atom::Rel(Pred::Edb(s), _) => Some(*s),
            _ => None,
        })
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::super::library::line_digraph;
    use super::*;
    use crate::structures::catalog::*;
    use crate::structures::is_isomorphic;

    #[test]
    fn line_digraph_examples() {
        let d = line_digraph();
        let e = d.apply(&directed_path(2)).unwrap();
        assert_eq!((e.domain_size(0), e.relation(0).len()), (1, 0));
        let p = d.apply(&directed_path(3)).unwrap();
        assert_eq!((p.domain_size(0), p.relation(0).len()), (2, 1));
        let c = d.apply(&directed_cycle(3)).unwrap();
        assert!(is_isomorphic(&c, &directed_cycle(3)).unwrap());
        assert_eq!(d.width(), 3);
    }

    #[test]
    fn identity_is_neutral() {
        let id = Interpretation::identity(digraph_signature());
        for g in [cycle(5), directed_path(3), loop_graph()] {
            assert!(is_isomorphic(&id.apply(&g).unwrap(), &g).unwrap());
        }
    }

    #[test]
    fn arity_mismatch_is_rejected() {
        let sig = digraph_signature();
        let id = Interpretation::identity(sig.clone());
        let bad = Program::echo(sig.clone(), 0).unwrap();
        let mut dom = id.domain_programs().to_vec();
        dom[0] = bad;
        assert!(Interpretation::new(sig.clone(), sig, dom, id.relation_programs().to_vec()).is_err());
    }
}
