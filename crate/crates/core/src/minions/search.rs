//! Homomorphism search between truncated minions and from label cover
//! instances into minions, both posed as finite constraint problems.

use std::collections::HashMap;
use std::sync::Arc;

use super::{map_count, omega, Minion, MinionMap};
use crate::error::{Error, Result};
use crate::labelcover::{enforce_arc_consistency, LabelCoverInstance};
use crate::structures::bitset::BitSet;
use crate::structures::{Csp, Table};

/// Binary table `{(g, g^π) : g ∈ N^{(n)}}` for `π: [n] → [m]`.
fn minor_graph(target: &Minion, n: usize, m: usize, code: usize) -> Arc<Table> {
    let t = target.minor_table(n, m, code);
    let tuples = (0..target.size(n)).map(|g| vec![g, t[g]]).collect();
    Arc::new(Table::new(&[target.size(n), target.size(m)], tuples))
}

fn minion_problem(source: &Minion, target: &Minion) -> Result<(Csp, Vec<usize>)> {
    if source.max_arity() != target.max_arity() {
        return Err(Error::Truncation {
            arity: source.max_arity().max(target.max_arity()),
            max: source.max_arity().min(target.max_arity()),
        });
    }
    let max = source.max_arity();
    let mut offsets = vec![0];
    let mut domains = Vec::new();
    for n in 1..=max {
        offsets.push(offsets[n - 1] + source.size(n));
        domains.extend((0..source.size(n)).map(|_| BitSet::full(target.size(n))));
    }
    let mut csp = Csp::new(domains);
    for n in 1..=max {
        for m in 1..=max {
            for code in 0..map_count(n, m) {
                let table = minor_graph(target, n, m, code);
                let s = source.minor_table(n, m, code);
                for f in 0..source.size(n) {
                    csp.add_constraint(vec![offsets[n - 1] + f, offsets[m - 1] + s[f]], &table);
                }
            }
        }
    }
    Ok((csp, offsets))
}

fn decode(offsets: &[usize], sol: &[usize]) -> MinionMap {
    MinionMap {
        maps: offsets.windows(2).map(|w| sol[w[0]..w[1]].to_vec()).collect(),
    }
}

/// The lexicographically least minion homomorphism `source → target`, if
/// any. Both minions must have the same truncation.
pub fn find_minion_homomorphism(source: &Minion, target: &Minion) -> Result<Option<MinionMap>> {
    let (csp, offsets) = minion_problem(source, target)?;
    Ok(csp.solve().map(|sol| decode(&offsets, &sol)))
}

/// Every minion homomorphism `source → target`, up to `limit` of them.
pub fn all_minion_homomorphisms(source: &Minion, target: &Minion, limit: usize) -> Result<Vec<MinionMap>> {
    let (csp, offsets) = minion_problem(source, target)?;
    let mut out = Vec::new();
    csp.for_each_solution(|sol| {
        out.push(decode(&offsets, sol));
        out.len() < limit
    });
    Ok(out)
}

/// A solution of a label cover instance in a minion: an element of
/// `M^{(L_v)}` per variable `v` such that `f_u^π = f_v` for every
/// constraint `π: L_u → L_v`. Returns `None` when there is none, in
/// particular when some label set is empty.
///
/// Fails with [`Error::Truncation`] when a label set exceeds the truncation.
pub fn label_cover_to_minion(s: &LabelCoverInstance, m: &Minion) -> Result<Option<Vec<usize>>> {
    if s.has_empty_type() {
        return Ok(None);
    }
    for v in 0..s.variables().len() {
        m.require_arity(s.label_count(v))?;
    }
    let domains = (0..s.variables().len())
        .map(|v| BitSet::full(m.size(s.label_count(v))))
        .collect();
    let mut csp = Csp::new(domains);
    let mut tables: HashMap<(usize, usize, usize), Arc<Table>> = HashMap::new();
    for c in s.constraints() {
        let (n, k) = (s.label_count(c.from), s.label_count(c.to));
        let code = super::map_code(&c.map, k);
        let table = tables.entry((n, k, code)).or_insert_with(|| minor_graph(m, n, k, code));
        csp.add_constraint(vec![c.from, c.to], table);
    }
    Ok(csp.solve())
}

/// Both sides of the adjunction `κ_arc(S) → M ⇔ S → ω(M)` for a label
/// cover instance `S`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AdjunctionReport {
    /// Whether the arc-consistent reduct `κ_arc(S)` maps to `M`.
    pub left: bool,
    /// Whether `S` maps to `ω(M)`.
    pub right: bool,
}

impl AdjunctionReport {
    pub fn agree(&self) -> bool {
        self.left == self.right
    }
}

/// Decides both sides of the arc-consistency adjunction.
pub fn check_arc_adjunction(s: &LabelCoverInstance, m: &Minion) -> Result<AdjunctionReport> {
    let left = label_cover_to_minion(&enforce_arc_consistency(s), m)?.is_some();
    let right = label_cover_to_minion(s, &omega(m))?.is_some();
    Ok(AdjunctionReport { left, right })
}

#[cfg(test)]
mod tests {
    use super::super::{polymorphism_minion, projections};
    use super::*;
    use crate::structures::catalog::*;

    #[test]
    fn projections_and_pol_k2_are_hom_equivalent() {
        let p = projections(2);
        let k2 = polymorphism_minion(&clique(2), &clique(2), 2).unwrap();
        assert!(find_minion_homomorphism(&p, &k2).unwrap().is_some());
        // Every polymorphism of K2 is a projection or its negation, so
        // forgetting the negation is a minion homomorphism.
        let h = find_minion_homomorphism(&k2, &p).unwrap();
        assert!(h.is_some());
        assert!(h.unwrap().is_homomorphism(&k2, &p));
    }

    #[test]
    fn homomorphisms_are_enumerated() {
        let p = projections(2);
        // The only endomorphism of P is the identity.
        let all = all_minion_homomorphisms(&p, &p, 10).unwrap();
        assert_eq!(all, vec![MinionMap::identity(&p)]);
    }

    #[test]
    fn bottom_omega_has_no_map_to_k2() {
        let bot = polymorphism_minion(&bottom(), &bottom(), 2).unwrap();
        let k2 = polymorphism_minion(&clique(2), &clique(2), 2).unwrap();
        assert!(find_minion_homomorphism(&omega(&bot), &k2).unwrap().is_none());
    }

    #[test]
    fn label_cover_solutions() {
        let p = projections(2);
        // u with labels {a,b}, v with {c}: the constant map is fine.
        let mut s = LabelCoverInstance::new();
        let u = s.add_variable("u", vec!["a".into(), "b".into()]);
        let v = s.add_variable("v", vec!["c".into()]);
        s.add_constraint(u, v, vec![0, 0]).unwrap();
        assert!(label_cover_to_minion(&s, &p).unwrap().is_some());
        // Two maps u → w disagreeing on every label: no projection works.
        let w = s.add_variable("w", vec!["x".into(), "y".into()]);
        s.add_constraint(u, w, vec![0, 1]).unwrap();
        s.add_constraint(u, w, vec![1, 0]).unwrap();
        assert!(label_cover_to_minion(&s, &p).unwrap().is_none());
        let big = {
            let mut b = LabelCoverInstance::new();
            b.add_variable("z", vec!["1".into(), "2".into(), "3".into()]);
            b
        };
        assert!(matches!(label_cover_to_minion(&big, &p), Err(Error::Truncation { .. })));
    }

    #[test]
    fn adjunction_on_a_small_instance() {
        let p = projections(2);
        let mut s = LabelCoverInstance::new();
        let u = s.add_variable("u", vec!["a".into(), "b".into()]);
        let w = s.add_variable("w", vec!["x".into(), "y".into()]);
        s.add_constraint(u, w, vec![0, 1]).unwrap();
        s.add_constraint(u, w, vec![1, 0]).unwrap();
        let r = check_arc_adjunction(&s, &p).unwrap();
        assert!(r.agree());
    }
}
