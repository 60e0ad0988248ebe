//! Gadget replacements: general and projective gadgets, reification, the
//! universal gadget for label cover, and the compilation of gadgets into
//! Datalog∪ reductions.
//!
//! Applying a gadget places a copy of a fixed structure for every element
//! and (for general gadgets) every constraint of the input, then identifies
//! elements as prescribed by the gadget's maps. Identification uses a
//! union-find, so the order of the equality constraints is irrelevant;
//! every collapsed class is named after its lexicographically least member.

pub mod catalog;
mod compile;
mod reify;
mod universal;

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::structures::{check_same_signature, render_name_tuple, Homomorphism, Partition, Signature, Structure};

pub use compile::{compile_gadget, compile_projective_gadget, is_closure_predicate};
pub use reify::{reification_interpretation, reified_signature, reify, reify_to_label_cover, Reified};
pub use universal::apply_universal_gadget;

/// A gadget from `Π`-structures to `Σ`-structures.
///
/// `domains[t]` is the structure replacing an element of input type `t`,
/// `symbols[R]` the structure replacing a tuple of `R`, and
/// `projections[R][i]` the homomorphism `D_{ar_R(i)} → S_R` saying how the
/// copy for the `i`-th entry is glued into the copy for the tuple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gadget {
    input: Arc<Signature>,
    output: Arc<Signature>,
    domains: Vec<Structure>,
    symbols: Vec<Structure>,
    projections: Vec<Vec<Homomorphism>>,
}

impl Gadget {
    pub fn new(
        input: Arc<Signature>,
        output: Arc<Signature>,
        domains: Vec<Structure>,
        symbols: Vec<Structure>,
        projections: Vec<Vec<Homomorphism>>,
    ) -> Result<Self> {
        let err = |m: String| Err(Error::InvalidGadget(m));
        if domains.len() != input.type_count() || symbols.len() != input.symbol_count() {
            return err("one structure per input type and per input symbol is required".into());
        }
        for d in domains.iter().chain(&symbols) {
            check_same_signature(&output, d.signature(), "gadget component")?;
        }
        if projections.len() != input.symbol_count() {
            return err("one list of projections per input symbol is required".into());
        }
        for (s, ps) in projections.iter().enumerate() {
            let arity = input.arity(s);
            if ps.len() != arity.len() {
                return err(format!(
                    "symbol `{}` has {} positions but {} projections",
                    input.symbol(s).name,
                    arity.len(),
                    ps.len()
                ));
            }
            for (i, p) in ps.iter().enumerate() {
                if !p.is_homomorphism(&domains[arity[i]], &symbols[s]) {
                    return err(format!(
                        "projection {} of `{}` is not a homomorphism",
                        i + 1,
                        input.symbol(s).name
                    ));
                }
            }
        }
        Ok(Gadget {
            input,
            output,
            domains,
            symbols,
            projections,
        })
    }

    pub fn input(&self) -> &Arc<Signature> {
        &self.input
    }

    pub fn output(&self) -> &Arc<Signature> {
        &self.output
    }

    pub fn domain(&self, t: usize) -> &Structure {
        &self.domains[t]
    }

    pub fn symbol_structure(&self, s: usize) -> &Structure {
        &self.symbols[s]
    }

    pub fn projection(&self, s: usize, i: usize) -> &Homomorphism {
        &self.projections[s][i]
    }
}

/// A projective gadget: the input signature has only binary symbols, and a
/// symbol `R` with arity `(t, s)` carries a homomorphism `p_R: D_s → D_t`
/// (note the reversed order).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectiveGadget {
    input: Arc<Signature>,
    output: Arc<Signature>,
    domains: Vec<Structure>,
    maps: Vec<Homomorphism>,
}

impl ProjectiveGadget {
    pub fn new(
        input: Arc<Signature>,
        output: Arc<Signature>,
        domains: Vec<Structure>,
        maps: Vec<Homomorphism>,
    ) -> Result<Self> {
        let err = |m: String| Err(Error::InvalidGadget(m));
        for s in 0..input.symbol_count() {
            if input.arity(s).len() != 2 {
                return Err(Error::NotBinary(input.symbol(s).name.clone()));
            }
        }
        if domains.len() != input.type_count() || maps.len() != input.symbol_count() {
            return err("one structure per input type and one map per input symbol is required".into());
        }
        for d in &domains {
            check_same_signature(&output, d.signature(), "projective gadget component")?;
        }
        for (s, p) in maps.iter().enumerate() {
            let (t, u) = (input.arity(s)[0], input.arity(s)[1]);
            if !p.is_homomorphism(&domains[u], &domains[t]) {
                return err(format!("map of `{}` is not a homomorphism", input.symbol(s).name));
            }
        }
        Ok(ProjectiveGadget {
            input,
            output,
            domains,
            maps,
        })
    }

    pub fn input(&self) -> &Arc<Signature> {
        &self.input
    }

    pub fn output(&self) -> &Arc<Signature> {
        &self.output
    }

    pub fn domain(&self, t: usize) -> &Structure {
        &self.domains[t]
    }

    pub fn map(&self, s: usize) -> &Homomorphism {
        &self.maps[s]
    }
}

/// Adds a copy of `part` to `big`, naming element `e` as `(tag;e)`.
/// Returns the offset of the copy in every type.
pub(crate) fn add_copy(big: &mut Structure, part: &Structure, tag: &str) -> Vec<usize> {
    let sig = part.signature().clone();
    let offsets: Vec<usize> = (0..sig.type_count()).map(|u| big.domain_size(u)).collect();
    for u in 0..sig.type_count() {
        for name in part.domain(u) {
            big.add_element(u, format!("({tag};{name})"));
        }
    }
    for s in 0..sig.symbol_count() {
        let arity = sig.arity(s);
        for tuple in part.relation(s) {
            let shifted = tuple.iter().zip(arity).map(|(&e, &u)| offsets[u] + e).collect();
            big.insert_tuple(s, shifted);
        }
    }
    offsets
}

/// Applies a gadget. Element copies are tagged by the element name, tuple
/// copies by the symbol name followed by the tuple, e.g. `(E(u,v);0)`.
pub fn apply_gadget(g: &Gadget, x: &Structure) -> Result<Structure> {
    check_same_signature(&g.input, x.signature(), "gadget input")?;
    let out_sig = g.output.clone();
    let mut big = Structure::new(out_sig.clone());
    let mut element_offsets: Vec<Vec<Vec<usize>>> = Vec::new();
    for t in 0..g.input.type_count() {
        let offs = (0..x.domain_size(t))
            .map(|a| add_copy(&mut big, &g.domains[t], x.element_name(t, a)))
            .collect();
        element_offsets.push(offs);
    }
    let mut tuple_copies = Vec::new();
    for s in 0..g.input.symbol_count() {
        let arity = g.input.arity(s);
        for tuple in x.relation(s) {
            let names = tuple.iter().zip(arity).map(|(&a, &t)| x.element_name(t, a));
            let tag = format!("{}{}", g.input.symbol(s).name, render_name_tuple(names));
            tuple_copies.push((s, tuple, add_copy(&mut big, &g.symbols[s], &tag)));
        }
    }
    let mut part = Partition::new(&big);
    for (s, tuple, offs) in tuple_copies {
        for (i, &a) in tuple.iter().enumerate() {
            let t = g.input.arity(s)[i];
            let p = &g.projections[s][i];
            for u in 0..out_sig.type_count() {
                for e in 0..g.domains[t].domain_size(u) {
                    part.merge(u, offs[u] + p.apply(u, e), u, element_offsets[t][a][u] + e)?;
                }
            }
        }
    }
    Ok(part.collapse(&big).0)
}

/// Applies a projective gadget: for `(a, b) ∈ R` with `ar_R = (t, s)` and
/// every `d ∈ D_s`, the elements `(a; p_R(d))` and `(b; d)` are identified.
pub fn apply_projective_gadget(g: &ProjectiveGadget, x: &Structure) -> Result<Structure> {
    check_same_signature(&g.input, x.signature(), "projective gadget input")?;
    let out_sig = g.output.clone();
    let mut big = Structure::new(out_sig.clone());
    let mut offsets: Vec<Vec<Vec<usize>>> = Vec::new();
    for t in 0..g.input.type_count() {
        let offs = (0..x.domain_size(t))
            .map(|a| add_copy(&mut big, &g.domains[t], x.element_name(t, a)))
            .collect();
        offsets.push(offs);
    }
    let mut part = Partition::new(&big);
    for s in 0..g.input.symbol_count() {
        let (t, v) = (g.input.arity(s)[0], g.input.arity(s)[1]);
        let p = &g.maps[s];
        for tuple in x.relation(s) {
            let (a, b) = (tuple[0], tuple[1]);
            for u in 0..out_sig.type_count() {
                for d in 0..g.domains[v].domain_size(u) {
                    part.merge(u, offsets[t][a][u] + p.apply(u, d), u, offsets[v][b][u] + d)?;
                }
            }
        }
    }
    Ok(part.collapse(&big).0)
}

/// Rewrites a gadget as a projective gadget on the reified signature; the
/// projective gadget applied to `reify(X)` is isomorphic to the gadget
/// applied to `X`.
pub fn to_projective(g: &Gadget) -> Result<ProjectiveGadget> {
    let reified = reified_signature(&g.input);
    let mut domains = g.domains.clone();
    domains.extend(g.symbols.iter().cloned());
    let mut maps = Vec::new();
    for s in 0..g.input.symbol_count() {
        for i in 0..g.input.arity(s).len() {
            maps.push(g.projections[s][i].clone());
        }
    }
    ProjectiveGadget::new(reified.signature.clone(), g.output.clone(), domains, maps)
}
