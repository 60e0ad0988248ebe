//! Powers, quotients and disjoint unions of structures.

use std::sync::Arc;

use super::{check_same_signature, render_name_tuple, Structure};
use crate::error::{Error, Result};
use crate::unionfind::UnionFind;

/// Index of the function `f: [n] → [m]` (given by its values) among all such
/// functions in lexicographic order, first coordinate most significant.
pub fn power_element_index(values: &[usize], m: usize) -> usize {
    values.iter().fold(0, |acc, &v| acc * m + v)
}

/// Decodes [`power_element_index`].
pub(crate) fn power_element_values(mut index: usize, m: usize, n: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    for slot in out.iter_mut().rev() {
        *slot = index % m;
        index /= m;
    }
    out
}

/// The `n`-fold power `B^[n]`.
///
/// The domain of type `t` consists of all functions `[n] → B_t`, ordered
/// lexicographically and named by their value tuples; a tuple of functions
/// lies in `R` when it does so coordinatewise. For `n = 0` every domain is a
/// single (empty) function and every relation is full.
pub fn power(b: &Structure, n: usize) -> Structure {
    let sig = b.signature().clone();
    let mut out = Structure::new(sig.clone());
    for t in 0..sig.type_count() {
        let m = b.domain_size(t);
        let count = checked_power(m, n);
        for idx in 0..count {
            let vals = power_element_values(idx, m.max(1), n);
            out.add_element(t, render_name_tuple(vals.iter().map(|&v| b.element_name(t, v))));
        }
    }
    for s in 0..sig.symbol_count() {
        let arity = sig.arity(s);
        let rel: Vec<&Vec<usize>> = b.relation(s).iter().collect();
        if n > 0 && rel.is_empty() {
            continue;
        }
        let sizes: Vec<usize> = arity.iter().map(|&t| b.domain_size(t)).collect();
        // Odometer over the choice of one tuple of R^B per coordinate.
        let mut choice = vec![0usize; n];
        loop {
            let tuple: Vec<usize> = (0..arity.len())
                .map(|j| {
                    let vals: Vec<usize> = choice.iter().map(|&c| rel[c][j]).collect();
                    power_element_index(&vals, sizes[j])
                })
                .collect();
            out.insert_tuple(s, tuple);
            let mut p = n;
            loop {
                if p == 0 {
                    break;
                }
                p -= 1;
                choice[p] += 1;
                if choice[p] < rel.len() {
                    break;
                }
                choice[p] = 0;
            }
            if choice.iter().all(|&c| c == 0) {
                break;
            }
        }
    }
    out
}

fn checked_power(m: usize, n: usize) -> usize {
    (0..n).fold(1usize, |acc, _| {
        acc.checked_mul(m).expect("power domain size overflows usize")
    })
}

/// An equivalence relation on the elements of a structure in which only
/// elements of the same type may be related.
#[derive(Clone, Debug)]
pub struct Partition {
    offsets: Vec<usize>,
    uf: UnionFind,
}

impl Partition {
    /// The discrete partition of the elements of `a`.
    pub fn new(a: &Structure) -> Self {
        let mut offsets = vec![0];
        for t in 0..a.signature().type_count() {
            offsets.push(offsets[t] + a.domain_size(t));
        }
        let total = *offsets.last().expect("non-empty offsets");
        Partition {
            offsets,
            uf: UnionFind::new(total),
        }
    }

    /// Equates element `e1` of type `t1` with element `e2` of type `t2`.
    pub fn merge(&mut self, t1: usize, e1: usize, t2: usize, e2: usize) -> Result<()> {
        if t1 != t2 {
            return Err(Error::CrossTypeEquation(
                format!("element {e1} of type {t1}"),
                format!("element {e2} of type {t2}"),
            ));
        }
        self.uf.union(self.offsets[t1] + e1, self.offsets[t2] + e2);
        Ok(())
    }

    /// Collapses `a` along the partition. Returns the quotient and, per type,
    /// the class index of every original element.
    ///
    /// Classes are ordered by their smallest member and named after the
    /// lexicographically least member name.
    pub fn collapse(&mut self, a: &Structure) -> (Structure, Vec<Vec<usize>>) {
        let sig = a.signature().clone();
        let mut out = Structure::new(sig.clone());
        let mut class_of: Vec<Vec<usize>> = Vec::with_capacity(sig.type_count());
        for t in 0..sig.type_count() {
            let n = a.domain_size(t);
            let mut map = vec![usize::MAX; n];
            let mut root_class = std::collections::HashMap::new();
            let mut names: Vec<&str> = Vec::new();
            for e in 0..n {
                let root = self.uf.find(self.offsets[t] + e);
                let next = names.len();
                let c = *root_class.entry(root).or_insert(next);
                if c == names.len() {
                    names.push(a.element_name(t, e));
                } else if a.element_name(t, e) < names[c] {
                    names[c] = a.element_name(t, e);
                }
                map[e] = c;
            }
            for name in names {
                out.add_element(t, name.to_string());
            }
            class_of.push(map);
        }
        for s in 0..sig.symbol_count() {
            let arity = sig.arity(s);
            for tuple in a.relation(s) {
                let image = tuple
                    .iter()
                    .zip(arity)
                    .map(|(&e, &t)| class_of[t][e])
                    .collect();
                out.insert_tuple(s, image);
            }
        }
        (out, class_of)
    }
}

/// Collapses the given equations `((t1, e1), (t2, e2))` in `a`.
pub fn quotient(a: &Structure, eqs: &[((usize, usize), (usize, usize))]) -> Result<Structure> {
    let mut p = Partition::new(a);
    for &((t1, e1), (t2, e2)) in eqs {
        if e1 >= a.domain_size(t1) || t2 >= a.signature().type_count() || e2 >= a.domain_size(t2) {
            return Err(Error::InvalidStructure("equation refers to a missing element".into()));
        }
        p.merge(t1, e1, t2, e2)?;
    }
    Ok(p.collapse(a).0)
}

/// Tagged disjoint union; element `x` of the `i`-th structure is named `x@i`.
pub fn disjoint_union(parts: &[Structure]) -> Result<Structure> {
    let Some(first) = parts.first() else {
        return Err(Error::InvalidStructure(
            "disjoint union of an empty list has no signature".into(),
        ));
    };
    let sig: Arc<_> = first.signature().clone();
    for p in parts {
        check_same_signature(&sig, p.signature(), "disjoint union")?;
    }
    let mut out = Structure::new(sig.clone());
    let mut offsets = Vec::new();
    for (i, p) in parts.iter().enumerate() {
        let mut off = Vec::new();
        for t in 0..sig.type_count() {
            off.push(out.domain_size(t));
            for name in p.domain(t) {
                out.add_element(t, format!("{name}@{i}"));
            }
        }
        offsets.push(off);
    }
    for (i, p) in parts.iter().enumerate() {
        for s in 0..sig.symbol_count() {
            let arity = sig.arity(s);
            for tuple in p.relation(s) {
                let shifted = tuple
                    .iter()
                    .zip(arity)
                    .map(|(&e, &t)| offsets[i][t] + e)
                    .collect();
                out.insert_tuple(s, shifted);
            }
        }
    }
    Ok(out)
}
