//! Multisorted relational signatures, finite structures and the structure
//! algebra the rest of the crate builds on.
//!
//! A [`Signature`] lists types and relational symbols; every symbol has an
//! arity that is a (possibly empty) tuple of types. A [`Structure`] assigns a
//! finite, ordered domain of named elements to every type and a set of tuples
//! to every symbol. Elements are addressed by `(type, index)`; equal names in
//! different types are different elements.
//!
//! Nullary symbols are allowed. Their relation is either empty or holds the
//! empty tuple, which is how the trivial templates (no types, one nullary
//! symbol) encode "false" and "true".

mod algebra;
pub(crate) mod bitset;
pub mod catalog;
mod search;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

pub use algebra::{disjoint_union, power, power_element_index, quotient, Partition};
pub(crate) use algebra::power_element_values;
pub use search::{
    all_homomorphisms, find_homomorphism, find_isomorphism, is_hom_equivalent, is_isomorphic,
};
pub(crate) use search::{Csp, Table};

/// A relational symbol: its name and its arity as a list of type indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Symbol {
    pub name: String,
    pub arity: Vec<usize>,
}

/// A multisorted relational signature.
///
/// Types and symbols live in separate namespaces; names are unique within
/// each namespace. Equality is structural, so two independently declared
/// signatures with the same types and symbols (in the same order) are equal.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Signature {
    types: Vec<String>,
    symbols: Vec<Symbol>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a signature from type names and `(symbol, arity type names)`.
    pub fn from_names(types: &[&str], symbols: &[(&str, &[&str])]) -> Result<Self> {
        let mut sig = Signature::new();
        for t in types {
            sig.add_type(*t)?;
        }
        for (name, arity) in symbols {
            let arity = arity
                .iter()
                .map(|t| {
                    sig.type_index(t).ok_or_else(|| {
                        Error::InvalidSignature(format!("symbol `{name}` uses undeclared type `{t}`"))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            sig.add_symbol(*name, arity)?;
        }
        Ok(sig)
    }

    /// Adds a type and returns its index.
    pub fn add_type(&mut self, name: impl Into<String>) -> Result<usize> {
        let name = name.into();
        if self.type_index(&name).is_some() {
            return Err(Error::InvalidSignature(format!("duplicate type `{name}`")));
        }
        self.types.push(name);
        Ok(self.types.len() - 1)
    }

    /// Adds a symbol with the given arity (type indices) and returns its index.
    pub fn add_symbol(&mut self, name: impl Into<String>, arity: Vec<usize>) -> Result<usize> {
        let name = name.into();
        if self.symbol_index(&name).is_some() {
            return Err(Error::InvalidSignature(format!("duplicate symbol `{name}`")));
        }
        if let Some(&t) = arity.iter().find(|&&t| t >= self.types.len()) {
            return Err(Error::InvalidSignature(format!(
                "symbol `{name}` uses undeclared type index {t}"
            )));
        }
        self.symbols.push(Symbol { name, arity });
        Ok(self.symbols.len() - 1)
    }

    pub fn types(&self) -> &[String] {
        &self.types
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn type_count(&self) -> usize {
        self.types.len()
    }

    pub fn symbol_count(&self) -> usize {
        self.symbols.len()
    }

    pub fn type_name(&self, t: usize) -> &str {
        &self.types[t]
    }

    pub fn symbol(&self, s: usize) -> &Symbol {
        &self.symbols[s]
    }

    pub fn arity(&self, s: usize) -> &[usize] {
        &self.symbols[s].arity
    }

    pub fn type_index(&self, name: &str) -> Option<usize> {
        self.types.iter().position(|t| t == name)
    }

    pub fn symbol_index(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s.name == name)
    }

    /// Largest symbol arity (0 for a signature without symbols).
    pub fn max_arity(&self) -> usize {
        self.symbols.iter().map(|s| s.arity.len()).max().unwrap_or(0)
    }

    /// Returns a name not yet used as a type, derived from `base`.
    pub fn fresh_type_name(&self, base: &str) -> String {
        fresh_name(base, |n| self.type_index(n).is_some())
    }

    /// Returns a name not yet used as a symbol, derived from `base`.
    pub fn fresh_symbol_name(&self, base: &str) -> String {
        fresh_name(base, |n| self.symbol_index(n).is_some())
    }

    /// The index of the only type, or an error for multi-sorted signatures.
    pub fn single_type(&self) -> Result<usize> {
        if self.types.len() == 1 {
            Ok(0)
        } else {
            Err(Error::NotSingleSorted(self.types.len()))
        }
    }
}

/// Appends primes to `base` until `taken` rejects the candidate.
pub(crate) fn fresh_name(base: &str, taken: impl Fn(&str) -> bool) -> String {
    let mut name = base.to_string();
    while taken(&name) {
        name.push('\'');
    }
    name
}

/// Checks that two signatures are equal, reporting `context` otherwise.
pub fn check_same_signature(a: &Signature, b: &Signature, context: &str) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::SignatureMismatch(context.to_string()))
    }
}

/// A finite structure over a signature.
///
/// Domains are ordered lists of element names; relation tuples hold element
/// indices into the domain of the corresponding type. Relations are kept as
/// ordered sets, so iteration order is deterministic.
#[derive(Clone, Debug)]
pub struct Structure {
    signature: Arc<Signature>,
    domains: Vec<Vec<String>>,
    relations: Vec<BTreeSet<Vec<usize>>>,
}

impl PartialEq for Structure {
    fn eq(&self, other: &Self) -> bool {
        self.signature == other.signature
            && self.domains == other.domains
            && self.relations == other.relations
    }
}

impl Eq for Structure {}

impl Structure {
    /// The structure with empty domains and empty relations.
    pub fn new(signature: Arc<Signature>) -> Self {
        let domains = vec![Vec::new(); signature.type_count()];
        let relations = vec![BTreeSet::new(); signature.symbol_count()];
        Structure {
            signature,
            domains,
            relations,
        }
    }

    /// Builds a structure from element names per type and tuples of names per
    /// symbol, resolving names against the domains.
    pub fn from_names(
        signature: Arc<Signature>,
        domains: &[(&str, &[&str])],
        relations: &[(&str, &[&[&str]])],
    ) -> Result<Self> {
        let mut a = Structure::new(signature.clone());
        for (t, elems) in domains {
            let ti = signature
                .type_index(t)
                .ok_or_else(|| Error::InvalidStructure(format!("unknown type `{t}`")))?;
            for e in *elems {
                if a.element_index(ti, e).is_some() {
                    return Err(Error::InvalidStructure(format!("duplicate element `{e}`")));
                }
                a.add_element(ti, *e);
            }
        }
        for (s, tuples) in relations {
            let si = signature
                .symbol_index(s)
                .ok_or_else(|| Error::InvalidStructure(format!("unknown symbol `{s}`")))?;
            for tuple in *tuples {
                let arity = signature.arity(si);
                if tuple.len() != arity.len() {
                    return Err(Error::InvalidStructure(format!(
                        "tuple of length {} for symbol `{s}` of arity {}",
                        tuple.len(),
                        arity.len()
                    )));
                }
                let idx = tuple
                    .iter()
                    .zip(arity)
                    .map(|(name, &t)| {
                        a.element_index(t, name).ok_or_else(|| {
                            Error::InvalidStructure(format!(
                                "unknown element `{name}` of type `{}`",
                                signature.type_name(t)
                            ))
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                a.relations[si].insert(idx);
            }
        }
        Ok(a)
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.signature
    }

    /// Appends an element to the domain of type `t` and returns its index.
    /// Names are expected to be unique within the type.
    pub fn add_element(&mut self, t: usize, name: impl Into<String>) -> usize {
        self.domains[t].push(name.into());
        self.domains[t].len() - 1
    }

    /// Inserts a tuple, checking its length and element ranges.
    pub fn add_tuple(&mut self, s: usize, tuple: Vec<usize>) -> Result<bool> {
        let arity = self.signature.arity(s);
        if tuple.len() != arity.len() {
            return Err(Error::InvalidStructure(format!(
                "tuple of length {} for symbol `{}` of arity {}",
                tuple.len(),
                self.signature.symbol(s).name,
                arity.len()
            )));
        }
        for (&e, &t) in tuple.iter().zip(arity) {
            if e >= self.domains[t].len() {
                return Err(Error::InvalidStructure(format!(
                    "element index {e} out of range for type `{}`",
                    self.signature.type_name(t)
                )));
            }
        }
        Ok(self.relations[s].insert(tuple))
    }

    /// Inserts a tuple without validation; callers guarantee well-typedness.
    pub(crate) fn insert_tuple(&mut self, s: usize, tuple: Vec<usize>) -> bool {
        debug_assert_eq!(tuple.len(), self.signature.arity(s).len());
        self.relations[s].insert(tuple)
    }

    pub fn domain(&self, t: usize) -> &[String] {
        &self.domains[t]
    }

    pub fn domain_size(&self, t: usize) -> usize {
        self.domains[t].len()
    }

    pub fn domains(&self) -> &[Vec<String>] {
        &self.domains
    }

    pub fn relation(&self, s: usize) -> &BTreeSet<Vec<usize>> {
        &self.relations[s]
    }

    pub fn relations(&self) -> &[BTreeSet<Vec<usize>>] {
        &self.relations
    }

    /// Looks up the relation of a symbol by name.
    pub fn relation_by_name(&self, name: &str) -> Option<&BTreeSet<Vec<usize>>> {
        self.signature.symbol_index(name).map(|s| &self.relations[s])
    }

    /// Index of the element called `name` in the domain of type `t`.
    pub fn element_index(&self, t: usize, name: &str) -> Option<usize> {
        self.domains[t].iter().position(|e| e == name)
    }

    pub fn element_name(&self, t: usize, e: usize) -> &str {
        &self.domains[t][e]
    }

    /// Total number of elements over all types.
    pub fn element_count(&self) -> usize {
        self.domains.iter().map(Vec::len).sum()
    }

    /// Total number of tuples over all symbols.
    pub fn tuple_count(&self) -> usize {
        self.relations.iter().map(BTreeSet::len).sum()
    }

    /// Whether a nullary symbol holds, i.e. its relation contains `()`.
    pub fn holds(&self, s: usize) -> bool {
        self.relations[s].contains(&Vec::new())
    }

    /// Renders a tuple of elements of symbol `s` as `(a,b,...)`.
    pub fn render_tuple(&self, s: usize, tuple: &[usize]) -> String {
        let arity = self.signature.arity(s);
        render_name_tuple(tuple.iter().zip(arity).map(|(&e, &t)| self.element_name(t, e)))
    }

    /// The same structure viewed over an equal signature (shares nothing but
    /// the data). Fails when the signatures differ.
    pub fn with_signature(&self, signature: Arc<Signature>) -> Result<Structure> {
        check_same_signature(&self.signature, &signature, "re-signing a structure")?;
        Ok(Structure {
            signature,
            domains: self.domains.clone(),
            relations: self.relations.clone(),
        })
    }
}

/// Renders element names as a parenthesised, comma-separated tuple.
pub fn render_name_tuple<'a>(names: impl IntoIterator<Item = &'a str>) -> String {
    let mut out = String::from("(");
    for (i, n) in names.into_iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(n);
    }
    out.push(')');
    out
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sig = &self.signature;
        for (t, dom) in self.domains.iter().enumerate() {
            writeln!(f, "{} = {{ {} }}", sig.type_name(t), dom.join(", "))?;
        }
        for (s, rel) in self.relations.iter().enumerate() {
            let tuples: Vec<String> = rel.iter().map(|tp| self.render_tuple(s, tp)).collect();
            writeln!(f, "{} = {{ {} }}", sig.symbol(s).name, tuples.join(", "))?;
        }
        Ok(())
    }
}

/// A homomorphism: one map per type, from source element indices to target
/// element indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Homomorphism {
    pub maps: Vec<Vec<usize>>,
}

impl Homomorphism {
    /// The identity map on a structure.
    pub fn identity(a: &Structure) -> Self {
        Homomorphism {
            maps: a.domains.iter().map(|d| (0..d.len()).collect()).collect(),
        }
    }

    /// Image of element `e` of type `t`.
    pub fn apply(&self, t: usize, e: usize) -> usize {
        self.maps[t][e]
    }

    /// `g ∘ self`: first `self`, then `g`.
    pub fn then(&self, g: &Homomorphism) -> Homomorphism {
        Homomorphism {
            maps: self
                .maps
                .iter()
                .zip(&g.maps)
                .map(|(f, g)| f.iter().map(|&x| g[x]).collect())
                .collect(),
        }
    }

    /// Independent validity check: totality, ranges and preservation of every
    /// relation tuple.
    pub fn is_homomorphism(&self, source: &Structure, target: &Structure) -> bool {
        if source.signature != target.signature || self.maps.len() != source.domains.len() {
            return false;
        }
        for (t, map) in self.maps.iter().enumerate() {
            if map.len() != source.domain_size(t) || map.iter().any(|&b| b >= target.domain_size(t))
            {
                return false;
            }
        }
        source.relations.iter().enumerate().all(|(s, rel)| {
            let arity = source.signature.arity(s);
            rel.iter().all(|tuple| {
                let image: Vec<usize> = tuple
                    .iter()
                    .zip(arity)
                    .map(|(&e, &t)| self.maps[t][e])
                    .collect();
                target.relations[s].contains(&image)
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::catalog::*;
    use super::*;

    #[test]
    fn signature_rejects_duplicates_and_unknown_types() {
        let mut sig = Signature::new();
        sig.add_type("v").unwrap();
        assert!(sig.add_type("v").is_err());
        sig.add_symbol("E", vec![0, 0]).unwrap();
        assert!(sig.add_symbol("E", vec![0]).is_err());
        assert!(sig.add_symbol("F", vec![1]).is_err());
        assert!(Signature::from_names(&["v"], &[("E", &["w"])]).is_err());
    }

    #[test]
    fn nullary_symbols_encode_truth_values() {
        let sig = Arc::new(Signature::from_names(&[], &[("C", &[])]).unwrap());
        let mut top = Structure::new(sig.clone());
        top.add_tuple(0, vec![]).unwrap();
        let bottom = Structure::new(sig);
        assert!(top.holds(0));
        assert!(!bottom.holds(0));
        assert!(find_homomorphism(&bottom, &top).unwrap().is_some());
        assert!(find_homomorphism(&top, &bottom).unwrap().is_none());
    }

    #[test]
    fn add_tuple_validates() {
        let mut a = Structure::new(digraph_signature());
        a.add_element(0, "a");
        assert!(a.add_tuple(0, vec![0]).is_err());
        assert!(a.add_tuple(0, vec![0, 1]).is_err());
        assert!(a.add_tuple(0, vec![0, 0]).unwrap());
    }

    #[test]
    fn from_names_resolves_elements() {
        let a = Structure::from_names(
            digraph_signature(),
            &[("v", &["a", "b"])],
            &[("E", &[&["a", "b"]])],
        )
        .unwrap();
        assert_eq!(a.relation(0).iter().next().unwrap(), &vec![0, 1]);
        assert!(Structure::from_names(
            digraph_signature(),
            &[("v", &["a"])],
            &[("E", &[&["a", "z"]])]
        )
        .is_err());
    }

    #[test]
    fn homomorphism_composition_verifies() {
        let c6 = cycle(6);
        let c3 = cycle(3);
        let k3 = clique(3);
        let f = find_homomorphism(&c6, &c3).unwrap().unwrap();
        let g = find_homomorphism(&c3, &k3).unwrap().unwrap();
        assert!(f.is_homomorphism(&c6, &c3));
        assert!(g.is_homomorphism(&c3, &k3));
        assert!(f.then(&g).is_homomorphism(&c6, &k3));
    }

    #[test]
    fn validity_check_rejects_broken_maps() {
        let k2 = clique(2);
        let bad = Homomorphism {
            maps: vec![vec![0, 0]],
        };
        assert!(!bad.is_homomorphism(&k2, &k2));
        assert!(Homomorphism::identity(&k2).is_homomorphism(&k2, &k2));
    }
}
