//! The comonad `ω`: `ω(M)^{(X)}` consists of pairs `(Y, f)` of a nonempty
//! `Y ⊆ X` and `f ∈ M^{(Y)}`, with `(Y, f)^π = (π(Y), f^{π|_Y})`.
//!
//! Subsets of `[n]` are bit masks and are identified with `[|Y|]` by their
//! increasing enumeration. Arrows of the co-Kleisli category are minion
//! homomorphisms `ω(M) → N`; they compose by `ξ ∘_ω ζ = ξ ∘ ζ^♭` where
//! `ζ^♭(Y, f) = (Y, ζ_Y(Y, f))`, and the counit `ν(Y, f) = f^ι` (with `ι`
//! the inclusion `Y ↪ X`) is their identity.

use std::collections::HashMap;

use super::{Minion, MinionMap};
use crate::error::{Error, Result};

fn members(mask: usize) -> Vec<usize> {
    (0..usize::BITS as usize).filter(|&i| mask >> i & 1 == 1).collect()
}

/// The elements of `ω(M)^{(n)}` in their canonical order: by support mask,
/// then by element of `M`.
fn parts(m: &Minion, n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for mask in 1..(1usize << n) {
        let k = mask.count_ones() as usize;
        for f in 0..m.size(k) {
            out.push((mask, f));
        }
    }
    out
}

fn index(m: &Minion) -> Vec<HashMap<(usize, usize), usize>> {
    (1..=m.max_arity())
        .map(|n| parts(m, n).into_iter().enumerate().map(|(i, p)| (p, i)).collect())
        .collect()
}

fn render_mask(mask: usize) -> String {
    let ms: Vec<String> = members(mask).iter().map(|i| (i + 1).to_string()).collect();
    format!("{{{}}}", ms.join(","))
}

/// `ω(M)` with the same truncation as `M`.
pub fn omega(m: &Minion) -> Minion {
    let max = m.max_arity();
    let all: Vec<Vec<(usize, usize)>> = (1..=max).map(|n| parts(m, n)).collect();
    let lookup = index(m);
    let elements = all
        .iter()
        .map(|ps| {
            ps.iter()
                .map(|&(mask, f)| format!("({},{})", render_mask(mask), m.render(mask.count_ones() as usize, f)))
                .collect()
        })
        .collect();
    Minion::from_fn(format!("ω({})", m.name()), elements, |n, e, pi, target| {
        let (mask, f) = all[n - 1][e];
        let ys = members(mask);
        let image_mask = ys.iter().fold(0usize, |acc, &y| acc | 1 << pi[y]);
        let zs = members(image_mask);
        let restricted: Vec<usize> = ys
            .iter()
            .map(|&y| zs.iter().position(|&z| z == pi[y]).expect("image member"))
            .collect();
        let g = m.minor(f, &restricted, zs.len());
        lookup[target - 1][&(image_mask, g)]
    })
    .expect("ω preserves the minion laws")
}

/// The counit `ν: ω(M) → M`.
pub fn counit(m: &Minion) -> MinionMap {
    let maps = (1..=m.max_arity())
        .map(|n| {
            parts(m, n)
                .into_iter()
                .map(|(mask, f)| m.minor(f, &members(mask), n))
                .collect()
        })
        .collect();
    MinionMap { maps }
}

fn check_truncations(ms: &[&Minion]) -> Result<usize> {
    let max = ms[0].max_arity();
    for m in ms {
        if m.max_arity() != max {
            return Err(Error::Truncation {
                arity: m.max_arity().max(max),
                max: m.max_arity().min(max),
            });
        }
    }
    Ok(max)
}

/// The extension `ξ^♭: ω(M) → ω(N)` of an arrow `ξ: ω(M) → N`.
pub fn bind(xi: &MinionMap, m: &Minion, n: &Minion) -> Result<MinionMap> {
    let max = check_truncations(&[m, n])?;
    let source = index(m);
    let target = index(n);
    let maps = (1..=max)
        .map(|arity| {
            parts(m, arity)
                .into_iter()
                .map(|(mask, f)| {
                    let k = mask.count_ones() as usize;
                    let full = source[k - 1][&((1 << k) - 1, f)];
                    let g = xi.apply(k, full);
                    target[arity - 1][&(mask, g)]
                })
                .collect()
        })
        .collect();
    Ok(MinionMap { maps })
}

/// The co-Kleisli composite `ξ ∘_ω ζ: ω(L) → N` of `ζ: ω(L) → M` and
/// `ξ: ω(M) → N`.
pub fn cokleisli_compose(xi: &MinionMap, zeta: &MinionMap, l: &Minion, m: &Minion, n: &Minion) -> Result<MinionMap> {
    check_truncations(&[l, m, n])?;
    Ok(bind(zeta, l, m)?.then(xi))
}

#[cfg(test)]
mod tests {
    use super::super::{polymorphism_minion, projections};
    use super::*;
    use crate::structures::catalog::*;

    #[test]
    fn omega_sizes() {
        let bot = polymorphism_minion(&bottom(), &bottom(), 4).unwrap();
        let w = omega(&bot);
        for n in 1..=4 {
            assert_eq!(w.size(n), (1 << n) - 1);
        }
        let k2 = polymorphism_minion(&clique(2), &clique(2), 2).unwrap();
        assert_eq!(omega(&k2).size(2), 2 * k2.size(1) + k2.size(2));
    }

    #[test]
    fn singleton_support_moves_along_the_map() {
        let k2 = polymorphism_minion(&clique(2), &clique(2), 2).unwrap();
        let w = omega(&k2);
        // ({1}, f) at arity 2 is element f (masks in order 1, 2, 3).
        for f in 0..2 {
            let moved = w.minor(f, &[1, 1], 2);
            assert_eq!(parts(&k2, 2)[moved], (0b10, f));
        }
    }

    #[test]
    fn counit_examples() {
        let k2 = polymorphism_minion(&clique(2), &clique(2), 2).unwrap();
        let nu = counit(&k2);
        assert!(nu.is_homomorphism(&omega(&k2), &k2));
        // Full support at arity 1 is the identity.
        assert_eq!(nu.maps[0], vec![0, 1]);
        // ({1}, u) at arity 2 is the minor of u along 1 ↦ 1.
        assert_eq!(nu.apply(2, 0), k2.minor(0, &[0], 2));
    }

    #[test]
    fn unit_laws() {
        let p = projections(2);
        let k2 = polymorphism_minion(&clique(2), &clique(2), 2).unwrap();
        let nu_p = counit(&p);
        let nu_k = counit(&k2);
        // An arrow ω(P) → Pol(K2): the counit followed by P → Pol(K2).
        let to_k2 = super::super::find_minion_homomorphism(&omega(&p), &k2).unwrap().unwrap();
        assert_eq!(cokleisli_compose(&nu_k, &to_k2, &p, &k2, &k2).unwrap(), to_k2);
        assert_eq!(cokleisli_compose(&to_k2, &nu_p, &p, &p, &k2).unwrap(), to_k2);
    }
}
