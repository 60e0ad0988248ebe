//! The universal gadget `π_B` from label cover to the signature of `B`.

use std::collections::HashMap;

use super::add_copy;
use crate::labelcover::LabelCoverInstance;
use crate::structures::{power, power_element_index, power_element_values, Partition, Structure};

/// Applies the universal gadget: a variable with label set `X` becomes a
/// copy of `B^X` (tagged by the variable name), and a constraint
/// `π(u) = v` identifies `(u; b ∘ π)` with `(v; b)` for every `b ∈ B^{X_v}`.
///
/// A variable with an empty label set becomes `B^∅`: one element per type
/// and every relation full.
pub fn apply_universal_gadget(b: &Structure, s: &LabelCoverInstance) -> Structure {
    let sig = b.signature().clone();
    let mut big = Structure::new(sig.clone());
    let mut powers: HashMap<usize, Structure> = HashMap::new();
    let mut offsets = Vec::with_capacity(s.variables().len());
    for v in s.variables() {
        let n = v.labels.len();
        let p = powers.entry(n).or_insert_with(|| power(b, n));
        offsets.push(add_copy(&mut big, p, &v.name));
    }
    let mut part = Partition::new(&big);
    for c in s.constraints() {
        let n_to = s.label_count(c.to);
        for u in 0..sig.type_count() {
            let m = b.domain_size(u);
            let count = (0..n_to).fold(1usize, |acc, _| acc * m);
            for idx in 0..count {
                let vals = power_element_values(idx, m.max(1), n_to);
                let composed: Vec<usize> = c.map.iter().map(|&l| vals[l]).collect();
                let from = power_element_index(&composed, m);
                part.merge(u, offsets[c.from][u] + from, u, offsets[c.to][u] + idx)
                    .expect("same type");
            }
        }
    }
    part.collapse(&big).0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::catalog::*;
    use crate::structures::is_isomorphic;

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| i.to_string()).collect()
    }

    #[test]
    fn lone_variable_gives_a_power() {
        let mut s = LabelCoverInstance::new();
        s.add_variable("x", labels(2));
        let out = apply_universal_gadget(&clique(3), &s);
        assert!(is_isomorphic(&out, &power(&clique(3), 2)).unwrap());
    }

    #[test]
    fn constant_map_glues_the_diagonal() {
        // B^{0,1} has 4 elements; B^{*} has 2; the constant map identifies
        // (u; (b,b)) with (v; b), so 4 + 2 - 2 = 4 elements remain.
        let mut s = LabelCoverInstance::new();
        let u = s.add_variable("u", labels(2));
        let v = s.add_variable("v", vec!["*".into()]);
        s.add_constraint(u, v, vec![0, 0]).unwrap();
        let out = apply_universal_gadget(&clique(2), &s);
        assert_eq!(out.domain_size(0), 4);
    }

    #[test]
    fn empty_label_set_gives_full_relations() {
        let mut s = LabelCoverInstance::new();
        s.add_variable("x", Vec::new());
        let b = with_falsity(&clique(2));
        let out = apply_universal_gadget(&b, &s);
        assert_eq!(out.domain_size(0), 1);
        assert!(out.holds(1));
    }

    #[test]
    fn bijective_constraint_identifies_copies() {
        let mut s = LabelCoverInstance::new();
        let u = s.add_variable("u", labels(2));
        let v = s.add_variable("v", labels(2));
        s.add_constraint(u, v, vec![1, 0]).unwrap();
        let out = apply_universal_gadget(&cycle(3), &s);
        assert!(is_isomorphic(&out, &power(&cycle(3), 2)).unwrap());
    }
}
