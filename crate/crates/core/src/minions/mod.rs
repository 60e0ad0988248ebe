//! Truncated abstract minions.
//!
//! A minion assigns to every finite set `[n]` a set of elements and to every
//! map `π: [n] → [m]` a minor operation `f ↦ f^π`. Minions are infinite in
//! general; here they are truncated at a maximal arity `N` and store, for
//! every `1 ≤ n, m ≤ N`, the full minor table over all maps `[n] → [m]`.
//! Arity 0 is excluded, matching the requirement that `M^{(∅)}` is empty.
//!
//! A map `π: [n] → [m]` is coded by its values read as a base-`m` number,
//! first coordinate most significant.

mod omega;
mod pol;
mod qconv;
mod search;

use crate::error::{Error, Result};

pub use omega::{bind, cokleisli_compose, counit, omega};
pub use pol::{polymorphism_minion, projections};
pub use qconv::RationalDistribution;
pub use search::{
    all_minion_homomorphisms, check_arc_adjunction, find_minion_homomorphism, label_cover_to_minion,
    AdjunctionReport,
};

/// Number of maps `[n] → [m]`.
pub fn map_count(n: usize, m: usize) -> usize {
    (0..n).fold(1, |acc, _| acc * m)
}

/// Code of the map with the given values into `[m]`.
pub fn map_code(values: &[usize], m: usize) -> usize {
    values.iter().fold(0, |acc, &v| acc * m + v)
}

/// Values of the map `[n] → [m]` with the given code.
pub fn map_values(mut code: usize, n: usize, m: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    for slot in out.iter_mut().rev() {
        *slot = code % m;
        code /= m;
    }
    out
}

/// A minion truncated at `max_arity`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Minion {
    name: String,
    max_arity: usize,
    /// `elements[n - 1]` renders the elements of arity `n`.
    elements: Vec<Vec<String>>,
    /// `minors[n - 1][m - 1][code][f]` is `f^π` for the map `π` with `code`.
    minors: Vec<Vec<Vec<Vec<usize>>>>,
}

impl Minion {
    /// Builds a minion from element renderings per arity and a minor
    /// function `(n, f, π, m) ↦ f^π`. The result is checked for the identity
    /// and composition laws and for nonemptiness.
    pub fn from_fn(
        name: impl Into<String>,
        elements: Vec<Vec<String>>,
        mut minor: impl FnMut(usize, usize, &[usize], usize) -> usize,
    ) -> Result<Self> {
        let max_arity = elements.len();
        let mut minors = Vec::with_capacity(max_arity);
        for n in 1..=max_arity {
            let mut by_target = Vec::with_capacity(max_arity);
            for m in 1..=max_arity {
                let table = (0..map_count(n, m))
                    .map(|code| {
                        let pi = map_values(code, n, m);
                        (0..elements[n - 1].len()).map(|f| minor(n, f, &pi, m)).collect()
                    })
                    .collect();
                by_target.push(table);
            }
            minors.push(by_target);
        }
        let minion = Minion {
            name: name.into(),
            max_arity,
            elements,
            minors,
        };
        minion.check_laws()?;
        Ok(minion)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn max_arity(&self) -> usize {
        self.max_arity
    }

    /// Number of elements of arity `n` (`1 ≤ n ≤ max_arity`).
    pub fn size(&self, n: usize) -> usize {
        self.elements[n - 1].len()
    }

    pub fn render(&self, n: usize, f: usize) -> &str {
        &self.elements[n - 1][f]
    }

    pub fn elements(&self, n: usize) -> &[String] {
        &self.elements[n - 1]
    }

    /// `f^π` for `f` of arity `n = π.len()` and `π: [n] → [m]`.
    pub fn minor(&self, f: usize, pi: &[usize], m: usize) -> usize {
        self.minors[pi.len() - 1][m - 1][map_code(pi, m)][f]
    }

    /// The minor table of the map `code: [n] → [m]`.
    pub fn minor_table(&self, n: usize, m: usize, code: usize) -> &[usize] {
        &self.minors[n - 1][m - 1][code]
    }

    /// Checks nonemptiness, `f^{id} = f` and `(f^σ)^π = f^{π∘σ}` on the whole
    /// truncation.
    ///
    /// The composition law is checked for every `σ` but only for `π` in a
    /// generating set: a transposition and a cycle of each `[m]`, the merge
    /// `[m] → [m-1]` of the last two points and the inclusion
    /// `[m] → [m+1]`. Given the identity law, the set of `π` for which the
    /// law holds (for all `σ`) is closed under composition, and every map
    /// inside the truncation is a composite of these generators through
    /// sets no larger than its domain and codomain.
    pub fn check_laws(&self) -> Result<()> {
        let err = |m: String| Err(Error::InvalidMinion(m));
        let max = self.max_arity;
        for n in 1..=max {
            if self.size(n) == 0 {
                return err(format!("`{}` has no elements of arity {n}", self.name));
            }
            let id: Vec<usize> = (0..n).collect();
            for f in 0..self.size(n) {
                if self.minor(f, &id, n) != f {
                    return err(format!("`{}` violates the identity law at arity {n}", self.name));
                }
            }
        }
        let mut generators: Vec<(usize, Vec<usize>, usize)> = Vec::new();
        for m in 1..=max {
            if m >= 2 {
                let mut swap: Vec<usize> = (0..m).collect();
                swap.swap(0, 1);
                generators.push((m, swap, m));
                generators.push((m, (0..m).map(|i| (i + 1) % m).collect(), m));
                generators.push((m, (0..m).map(|i| i.min(m - 2)).collect(), m - 1));
            }
            if m < max {
                generators.push((m, (0..m).collect(), m + 1));
            }
        }
        for n in 1..=max {
            for (m, pi, k) in &generators {
                let (m, k) = (*m, *k);
                for sc in 0..map_count(n, m) {
                    let sigma = map_values(sc, n, m);
                    let comp: Vec<usize> = sigma.iter().map(|&s| pi[s]).collect();
                    for f in 0..self.size(n) {
                        let step = self.minor(self.minor(f, &sigma, m), pi, k);
                        if step != self.minor(f, &comp, k) {
                            return err(format!(
                                "`{}` violates the composition law at arities {n} → {m} → {k}",
                                self.name
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Requires the given arity to lie within the truncation.
    pub fn require_arity(&self, n: usize) -> Result<()> {
        if n > self.max_arity {
            Err(Error::Truncation {
                arity: n,
                max: self.max_arity,
            })
        } else {
            Ok(())
        }
    }
}

/// A family of maps between two minions, one per arity: `maps[n - 1][f]` is
/// the image of element `f` of arity `n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MinionMap {
    pub maps: Vec<Vec<usize>>,
}

impl MinionMap {
    pub fn apply(&self, n: usize, f: usize) -> usize {
        self.maps[n - 1][f]
    }

    /// Whether the maps commute with every minor of the truncation.
    pub fn is_homomorphism(&self, source: &Minion, target: &Minion) -> bool {
        let max = source.max_arity();
        if target.max_arity() != max || self.maps.len() != max {
            return false;
        }
        for n in 1..=max {
            if self.maps[n - 1].len() != source.size(n) || self.maps[n - 1].iter().any(|&g| g >= target.size(n)) {
                return false;
            }
        }
        for n in 1..=max {
            for m in 1..=max {
                for code in 0..map_count(n, m) {
                    let s = source.minor_table(n, m, code);
                    let t = target.minor_table(n, m, code);
                    for f in 0..source.size(n) {
                        if self.apply(m, s[f]) != t[self.apply(n, f)] {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &MinionMap) -> MinionMap {
        MinionMap {
            maps: self
                .maps
                .iter()
                .zip(&next.maps)
                .map(|(f, g)| f.iter().map(|&x| g[x]).collect())
                .collect(),
        }
    }

    pub fn identity(m: &Minion) -> MinionMap {
        MinionMap {
            maps: (1..=m.max_arity()).map(|n| (0..m.size(n)).collect()).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_codes_round_trip() {
        for n in 1..4 {
            for m in 1..4 {
                for c in 0..map_count(n, m) {
                    assert_eq!(map_code(&map_values(c, n, m), m), c);
                }
            }
        }
        assert_eq!(map_code(&[1, 0], 2), 2);
    }

    #[test]
    fn broken_minor_tables_are_rejected() {
        // Two elements per arity, every minor swaps them: violates identity.
        let elems = vec![vec!["a".into(), "b".into()]; 2];
        assert!(Minion::from_fn("bad", elems, |_, f, _, _| 1 - f).is_err());
        // Minors along injective maps keep the element, all others give `a`:
        // the identity law holds but including [1] into [2] and then merging
        // yields `a`, while the composite (the identity) keeps `b`.
        let elems = vec![vec!["a".into(), "b".into()]; 3];
        let injective = |pi: &[usize]| (0..pi.len()).all(|i| !pi[..i].contains(&pi[i]));
        let err = Minion::from_fn("bad", elems, |_, f, pi, _| if injective(pi) { f } else { 0 }).unwrap_err();
        assert!(err.to_string().contains("composition law"), "{err}");
    }
}
