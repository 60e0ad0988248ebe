//! Polymorphism minions and the minion of projections.

use std::collections::HashMap;

use super::Minion;
use crate::error::{Error, Result};
use crate::structures::{all_homomorphisms, check_same_signature, power, power_element_index, power_element_values, Structure};

/// `Pol(A, B)` truncated at `max_arity`: the elements of arity `n` are the
/// homomorphisms `A^n → B` (in lexicographic order), and
/// `f^π(x) = f(x ∘ π)`.
///
/// Fails when some arity has no homomorphism, since a minion must be
/// nonempty at every nonempty arity.
pub fn polymorphism_minion(a: &Structure, b: &Structure, max_arity: usize) -> Result<Minion> {
    check_same_signature(a.signature(), b.signature(), "polymorphism minion")?;
    let types = a.signature().type_count();
    let mut tables: Vec<Vec<Vec<Vec<usize>>>> = Vec::new();
    let mut lookup: Vec<HashMap<Vec<Vec<usize>>, usize>> = Vec::new();
    for n in 1..=max_arity {
        let homs = all_homomorphisms(&power(a, n), b, None)?;
        if homs.is_empty() {
            return Err(Error::InvalidMinion(format!("no homomorphism A^{n} → B")));
        }
        let maps: Vec<Vec<Vec<usize>>> = homs.into_iter().map(|h| h.maps).collect();
        lookup.push(maps.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect());
        tables.push(maps);
    }
    let elements = tables
        .iter()
        .map(|fs| fs.iter().map(|f| render_table(b, f)).collect())
        .collect();
    let name = "Pol(A,B)".to_string();
    Minion::from_fn(name, elements, |n, f, pi, m| {
        let table = &tables[n - 1][f];
        let minor: Vec<Vec<usize>> = (0..types)
            .map(|t| {
                let size = a.domain_size(t);
                (0..map_count_checked(size, m))
                    .map(|y| {
                        let x = power_element_values(y, size.max(1), m);
                        let composed: Vec<usize> = pi.iter().map(|&i| x[i]).collect();
                        table[t][power_element_index(&composed, size)]
                    })
                    .collect()
            })
            .collect();
        lookup[m - 1][&minor]
    })
}

fn map_count_checked(size: usize, m: usize) -> usize {
    (0..m).fold(1, |acc, _| acc * size)
}

/// Renders a function table as the list of its values, per type.
fn render_table(b: &Structure, f: &[Vec<usize>]) -> String {
    let parts: Vec<String> = f
        .iter()
        .enumerate()
        .map(|(t, vals)| {
            let names: Vec<&str> = vals.iter().map(|&v| b.element_name(t, v)).collect();
            names.join("")
        })
        .collect();
    format!("[{}]", parts.join("|"))
}

/// The minion of projections `P^{(n)} = [n]` with `i^π = π(i)`.
pub fn projections(max_arity: usize) -> Minion {
    let elements = (1..=max_arity)
        .map(|n| (0..n).map(|i| format!("p{}", i + 1)).collect())
        .collect();
    Minion::from_fn("P", elements, |_, f, pi, _| pi[f]).expect("projections form a minion")
}
