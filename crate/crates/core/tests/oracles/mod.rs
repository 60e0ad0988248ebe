//! Independent reference implementations used to cross-check the library.
//!
//! Everything here is written directly from the definitions, by exhaustive
//! enumeration or naive fixpoints, and shares no code with the library
//! beyond reading structures, label cover instances and minion tables.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use cspforge::labelcover::LabelCoverInstance;
use cspforge::minions::Minion;
use cspforge::structures::Structure;

/// Whether `maps` (one vector per type) is a homomorphism `x → a`: total,
/// in range, and every tuple of every relation (including nullary ones)
/// lands in the corresponding relation of `a`.
pub fn is_valid_hom(maps: &[Vec<usize>], x: &Structure, a: &Structure) -> bool {
    let sig = x.signature();
    if **sig != **a.signature() || maps.len() != sig.type_count() {
        return false;
    }
    for (t, m) in maps.iter().enumerate() {
        if m.len() != x.domain_size(t) || m.iter().any(|&v| v >= a.domain_size(t)) {
            return false;
        }
    }
    (0..sig.symbol_count()).all(|s| {
        let arity = sig.arity(s);
        x.relation(s).iter().all(|tuple| {
            let image: Vec<usize> = tuple.iter().zip(arity).map(|(&e, &t)| maps[t][e]).collect();
            a.relation(s).contains(&image)
        })
    })
}

/// Whether `maps` is an isomorphism `x → a`: a bijection on every type
/// that maps each relation of `x` onto the corresponding relation of `a`.
pub fn is_valid_iso(maps: &[Vec<usize>], x: &Structure, a: &Structure) -> bool {
    if !is_valid_hom(maps, x, a) {
        return false;
    }
    let sig = x.signature();
    for (t, m) in maps.iter().enumerate() {
        let image: BTreeSet<usize> = m.iter().copied().collect();
        if image.len() != m.len() || m.len() != a.domain_size(t) {
            return false;
        }
    }
    // Injective on elements, hence on tuples; equal sizes give surjectivity.
    (0..sig.symbol_count()).all(|s| x.relation(s).len() == a.relation(s).len())
}

/// Exhaustive homomorphism existence: tries every assignment, pruning only
/// on tuples whose elements are all assigned. Intended for small inputs.
pub fn hom_exists(x: &Structure, a: &Structure) -> bool {
    let sig = x.signature();
    let order: Vec<(usize, usize)> = (0..sig.type_count())
        .flat_map(|t| (0..x.domain_size(t)).map(move |e| (t, e)))
        .collect();
    let mut maps: Vec<Vec<Option<usize>>> = (0..sig.type_count()).map(|t| vec![None; x.domain_size(t)]).collect();
    fn consistent(x: &Structure, a: &Structure, maps: &[Vec<Option<usize>>]) -> bool {
        let sig = x.signature();
        (0..sig.symbol_count()).all(|s| {
            let arity = sig.arity(s);
            x.relation(s).iter().all(|tuple| {
                let image: Option<Vec<usize>> = tuple.iter().zip(arity).map(|(&e, &t)| maps[t][e]).collect();
                image.map_or(true, |img| a.relation(s).contains(&img))
            })
        })
    }
    fn go(i: usize, order: &[(usize, usize)], x: &Structure, a: &Structure, maps: &mut Vec<Vec<Option<usize>>>) -> bool {
        if !consistent(x, a, maps) {
            return false;
        }
        let Some(&(t, e)) = order.get(i) else {
            return true;
        };
        for v in 0..a.domain_size(t) {
            maps[t][e] = Some(v);
            if go(i + 1, order, x, a, maps) {
                return true;
            }
        }
        maps[t][e] = None;
        false
    }
    go(0, &order, x, a, &mut maps)
}

/// Whether the undirected graph underlying a single-sorted digraph has an
/// odd closed walk (a loop counts), decided by breadth-first 2-colouring.
pub fn has_odd_cycle(g: &Structure) -> bool {
    let n = g.domain_size(0);
    let mut adj = vec![Vec::new(); n];
    for s in 0..g.signature().symbol_count() {
        for t in g.relation(s) {
            adj[t[0]].push(t[1]);
            adj[t[1]].push(t[0]);
        }
    }
    let mut colour: Vec<Option<bool>> = vec![None; n];
    for start in 0..n {
        if colour[start].is_some() {
            continue;
        }
        colour[start] = Some(false);
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            let c = colour[u].expect("coloured when queued");
            for &v in &adj[u] {
                match colour[v] {
                    None => {
                        colour[v] = Some(!c);
                        queue.push_back(v);
                    }
                    Some(d) if d == c => return true,
                    Some(_) => {}
                }
            }
        }
    }
    false
}

/// The `k`-consistency test from its definition: start from every partial
/// homomorphism `K → A` with `|K| ≤ k` (checking only the tuples inside
/// `K`), then repeatedly delete a partial map if one of its restrictions
/// was deleted or if some superset of size at most `k` admits no surviving
/// extension of it. Accepts when every set keeps a partial map.
///
/// Single-sorted structures only.
pub fn k_consistency(a: &Structure, x: &Structure, k: usize) -> bool {
    let sig = x.signature();
    // A true nullary symbol of X that is false in A admits no partial map.
    for s in 0..sig.symbol_count() {
        if sig.arity(s).is_empty() && !x.relation(s).is_empty() && a.relation(s).is_empty() {
            return false;
        }
    }
    let n = if sig.type_count() == 0 { 0 } else { x.domain_size(0) };
    let m = if sig.type_count() == 0 { 0 } else { a.domain_size(0) };
    let sets = subsets_up_to(n, k);
    let partial_ok = |set: &[usize], vals: &[usize]| -> bool {
        let at = |e: usize| set.iter().position(|&y| y == e).map(|i| vals[i]);
        (0..sig.symbol_count()).all(|s| {
            x.relation(s).iter().all(|tuple| {
                let image: Option<Vec<usize>> = tuple.iter().map(|&e| at(e)).collect();
                image.map_or(true, |img| img.is_empty() || a.relation(s).contains(&img))
            })
        })
    };
    let mut family: BTreeMap<Vec<usize>, BTreeSet<Vec<usize>>> = BTreeMap::new();
    for set in &sets {
        let maps: BTreeSet<Vec<usize>> = all_tuples(m, set.len()).into_iter().filter(|v| partial_ok(set, v)).collect();
        family.insert(set.clone(), maps);
    }
    loop {
        let mut changed = false;
        for set in &sets {
            let current: Vec<Vec<usize>> = family[set].iter().cloned().collect();
            for vals in current {
                let restrictions_ok = (0..set.len()).all(|drop| {
                    let sub: Vec<usize> = set.iter().enumerate().filter(|&(i, _)| i != drop).map(|(_, &e)| e).collect();
                    let sv: Vec<usize> = vals.iter().enumerate().filter(|&(i, _)| i != drop).map(|(_, &v)| v).collect();
                    family[&sub].contains(&sv)
                });
                let extensions_ok = set.len() >= k
                    || (0..n).filter(|e| !set.contains(e)).all(|e| {
                        let mut bigger = set.clone();
                        bigger.push(e);
                        bigger.sort_unstable();
                        let pos = bigger.iter().position(|&y| y == e).expect("inserted");
                        family[&bigger].iter().any(|bv| {
                            let without: Vec<usize> =
                                bv.iter().enumerate().filter(|&(i, _)| i != pos).map(|(_, &v)| v).collect();
                            without == vals
                        })
                    });
                if !(restrictions_ok && extensions_ok) {
                    family.get_mut(set).expect("present").remove(&vals);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    family.values().all(|maps| !maps.is_empty())
}

/// Sorted subsets of `0..n` with at most `k` elements.
pub fn subsets_up_to(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..k {
        let mut next = Vec::new();
        for s in &frontier {
            let start = s.last().map_or(0, |&l: &usize| l + 1);
            for e in start..n {
                let mut t = s.clone();
                t.push(e);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// All vectors of length `len` over `0..m`.
pub fn all_tuples(m: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..m).map(move |v| {
                    let mut t = t.clone();
                    t.push(v);
                    t
                })
            })
            .collect();
    }
    out
}

/// Arc consistency on a label cover instance by naive fixpoint: a label
/// `i` of `u` dies when some constraint `u → w` sends it to a dead label,
/// and a label `j` of `w` dies when some constraint `u → w` has no live
/// preimage of it. Returns the surviving labels of every variable.
pub fn arc_consistent_labels(s: &LabelCoverInstance) -> Vec<Vec<usize>> {
    let mut alive: Vec<Vec<bool>> = s.variables().iter().map(|v| vec![true; v.labels.len()]).collect();
    loop {
        let mut changed = false;
        for c in s.constraints() {
            for i in 0..alive[c.from].len() {
                if alive[c.from][i] && !alive[c.to][c.map[i]] {
                    alive[c.from][i] = false;
                    changed = true;
                }
            }
            for j in 0..alive[c.to].len() {
                if alive[c.to][j] && !(0..c.map.len()).any(|i| alive[c.from][i] && c.map[i] == j) {
                    alive[c.to][j] = false;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    alive
        .into_iter()
        .map(|a| a.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect())
        .collect()
}

/// Whether the label cover instance restricted to `labels[v]` (positions
/// into the original label sets) has a solution in `m`: an element `f_v`
/// of arity `|labels[v]|` per variable with `f_u^π = f_w` for every
/// constraint `π: u → w`. Exhaustive backtracking over all elements.
pub fn label_cover_solvable(s: &LabelCoverInstance, labels: &[Vec<usize>], m: &Minion) -> bool {
    if labels.iter().any(Vec::is_empty) {
        return false;
    }
    // Each constraint as a map between the restricted label positions.
    let maps: Vec<(usize, usize, Vec<usize>)> = s
        .constraints()
        .iter()
        .map(|c| {
            let pi = labels[c.from]
                .iter()
                .map(|&i| labels[c.to].iter().position(|&j| j == c.map[i]).expect("arc consistent"))
                .collect();
            (c.from, c.to, pi)
        })
        .collect();
    let nvars = labels.len();
    let mut chosen: Vec<Option<usize>> = vec![None; nvars];
    fn go(v: usize, labels: &[Vec<usize>], maps: &[(usize, usize, Vec<usize>)], m: &Minion, chosen: &mut Vec<Option<usize>>) -> bool {
        let ok = maps.iter().all(|(u, w, pi)| match (chosen[*u], chosen[*w]) {
            (Some(f), Some(g)) => m.minor(f, pi, labels[*w].len()) == g,
            _ => true,
        });
        if !ok {
            return false;
        }
        if v == labels.len() {
            return true;
        }
        for f in 0..m.size(labels[v].len()) {
            chosen[v] = Some(f);
            if go(v + 1, labels, maps, m, chosen) {
                return true;
            }
        }
        chosen[v] = None;
        false
    }
    go(0, labels, &maps, m, &mut chosen)
}

/// Whether `maps[n-1][f]` defines a minion homomorphism `m → n` on the
/// common truncation: `h(f^π) = h(f)^π` for every `f` and every map `π`.
pub fn is_minion_hom(maps: &[Vec<usize>], src: &Minion, dst: &Minion) -> bool {
    let top = src.max_arity().min(dst.max_arity());
    for a in 1..=top {
        for b in 1..=top {
            for pi in all_tuples(b, a) {
                for f in 0..src.size(a) {
                    if maps[b - 1][src.minor(f, &pi, b)] != dst.minor(maps[a - 1][f], &pi, b) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Whether any minion homomorphism `src → dst` exists on arities
/// `1..=top`, by enumerating every family of maps.
pub fn minion_hom_exists(src: &Minion, dst: &Minion, top: usize) -> bool {
    let choices: Vec<Vec<Vec<usize>>> = (1..=top).map(|n| all_tuples(dst.size(n), src.size(n))).collect();
    let mut idx = vec![0usize; top];
    loop {
        let maps: Vec<Vec<usize>> = (0..top).map(|n| choices[n][idx[n]].clone()).collect();
        if is_minion_hom(&maps, src, dst) {
            return true;
        }
        let mut i = 0;
        loop {
            if i == top {
                return false;
            }
            idx[i] += 1;
            if idx[i] < choices[i].len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

/// Number of `n`-ary polymorphisms `A^n → B` of single-sorted structures:
/// every table of values is tried against every `n`-tuple of tuples of
/// every relation.
pub fn count_polymorphisms(a: &Structure, b: &Structure, n: usize) -> usize {
    let sig = a.signature();
    let (da, db) = (a.domain_size(0), b.domain_size(0));
    let points = all_tuples(da, n);
    let index = |p: &[usize]| p.iter().fold(0, |acc, &v| acc * da + v);
    all_tuples(db, points.len())
        .into_iter()
        .filter(|table| {
            (0..sig.symbol_count()).all(|s| {
                let rel: Vec<&Vec<usize>> = a.relation(s).iter().collect();
                let arity = sig.arity(s).len();
                all_tuples(rel.len(), n).iter().all(|pick| {
                    let image: Vec<usize> = (0..arity)
                        .map(|pos| table[index(&pick.iter().map(|&r| rel[r][pos]).collect::<Vec<_>>())])
                        .collect();
                    b.relation(s).contains(&image)
                })
            })
        })
        .count()
}

/// A linear row `Σ c_i x_i = b` evaluated exactly.
pub fn rational_row_holds(coeffs: &[(usize, BigRational)], rhs: &BigRational, x: &[BigRational]) -> bool {
    let sum: BigRational = coeffs.iter().map(|(v, c)| c * &x[*v]).fold(BigRational::zero(), |a, b| a + b);
    &sum == rhs
}

/// An integer row `Σ c_i x_i = b`, over `Z` when `modulus` is `None`.
pub fn integer_row_holds(coeffs: &[(usize, BigInt)], rhs: &BigInt, x: &[BigInt], modulus: Option<u64>) -> bool {
    let sum: BigInt = coeffs.iter().map(|(v, c)| c * &x[*v]).fold(BigInt::zero(), |a, b| a + b);
    match modulus {
        None => &sum == rhs,
        Some(n) => (sum - rhs).mod_floor(&BigInt::from(n)).is_zero(),
    }
}

/// Exhaustive search for an integer solution with every variable in
/// `values`.
pub fn integer_system_solvable(
    rows: &[(Vec<(usize, BigInt)>, BigInt)],
    vars: usize,
    values: &[i64],
    modulus: Option<u64>,
) -> bool {
    all_tuples(values.len(), vars).iter().any(|pick| {
        let x: Vec<BigInt> = pick.iter().map(|&i| BigInt::from(values[i])).collect();
        rows.iter().all(|(c, b)| integer_row_holds(c, b, &x, modulus))
    })
}

pub fn one() -> BigRational {
    BigRational::one()
}
