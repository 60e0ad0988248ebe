//! Sherali–Adams systems, the `λ_conv` system of a label cover instance and
//! the group-affine relaxation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{GroupSystem, LinearSystem, Modulus};
use crate::error::Result;
use crate::labelcover::{k_consistency_instance, LabelCoverInstance};
use crate::structures::{check_same_signature, Structure};

/// `SA^k(X)` over `A`: a variable `x{…}` in `[0, 1]` per set `K` of at most
/// `k` elements of `X` (including `∅`) and partial homomorphism `f: K → A`,
/// named after `f` as `x{a:0,b:1}`; a normalization row `Σ_f x_{K,f} = 1`
/// per `K`, and a marginal row `Σ_{f|_L = g} x_{K,f} = x_{L,g}` per proper
/// subset `L ⊂ K` and `g: L → A`.
pub fn sherali_adams_system(a: &Structure, k: usize, x: &Structure) -> Result<LinearSystem> {
    check_same_signature(a.signature(), x.signature(), "Sherali–Adams system")?;
    let sig = x.signature();
    let elements: Vec<(usize, usize)> = (0..sig.type_count())
        .flat_map(|t| (0..x.domain_size(t)).map(move |e| (t, e)))
        .collect();
    let n = elements.len();
    // Sets of at most k elements as sorted index lists, by size then lex.
    let mut sets: Vec<Vec<usize>> = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..k.min(n) {
        let mut next = Vec::new();
        for s in &layer {
            let start = s.last().map_or(0, |&l: &usize| l + 1);
            for e in start..n {
                let mut t: Vec<usize> = s.clone();
                t.push(e);
                next.push(t);
            }
        }
        sets.extend(next.iter().cloned());
        layer = next;
    }
    let position = |set: &[usize], e: usize| set.iter().position(|&m| m == e);
    // Partial homomorphisms per set, by brute force over all typed maps.
    let mut homs: Vec<Vec<Vec<usize>>> = Vec::with_capacity(sets.len());
    for set in &sets {
        let sizes: Vec<usize> = set.iter().map(|&e| a.domain_size(elements[e].0)).collect();
        let total: usize = sizes.iter().product();
        let mut fs = Vec::new();
        for code in 0..total {
            let mut rest = code;
            let mut values = vec![0; set.len()];
            for (slot, &size) in values.iter_mut().zip(&sizes).rev() {
                *slot = rest % size;
                rest /= size;
            }
            let ok = (0..sig.symbol_count()).all(|s| {
                let arity = sig.arity(s);
                x.relation(s).iter().all(|tuple| {
                    let inside: Option<Vec<usize>> = tuple
                        .iter()
                        .zip(arity)
                        .map(|(&e, &t)| {
                            let idx = elements.iter().position(|&m| m == (t, e)).expect("element");
                            position(set, idx).map(|p| values[p])
                        })
                        .collect();
                    inside.map_or(true, |img| a.relation(s).contains(&img))
                })
            });
            if ok {
                fs.push(values);
            }
        }
        homs.push(fs);
    }
    let mut out = LinearSystem::new();
    let mut var_of: Vec<Vec<usize>> = Vec::with_capacity(sets.len());
    for (set, fs) in sets.iter().zip(&homs) {
        let ids = fs
            .iter()
            .map(|f| {
                let parts: Vec<String> = set
                    .iter()
                    .zip(f)
                    .map(|(&e, &v)| {
                        let (t, el) = elements[e];
                        format!("{}:{}", x.element_name(t, el), a.element_name(t, v))
                    })
                    .collect();
                out.add_variable(format!("x{{{}}}", parts.join(",")), true, true)
            })
            .collect();
        var_of.push(ids);
    }
    for ids in &var_of {
        out.add_row(ids.iter().map(|&v| (v, BigRational::one())).collect(), BigRational::one())?;
    }
    for (ki, set) in sets.iter().enumerate() {
        for (li, sub) in sets.iter().enumerate() {
            if sub.len() >= set.len() || !sub.iter().all(|e| set.contains(e)) {
                continue;
            }
            let positions: Vec<usize> = sub.iter().map(|&e| position(set, e).expect("subset")).collect();
            for (g, &gv) in homs[li].iter().zip(&var_of[li]) {
                let mut row: Vec<(usize, BigRational)> = homs[ki]
                    .iter()
                    .zip(&var_of[ki])
                    .filter(|(f, _)| positions.iter().map(|&p| f[p]).eq(g.iter().copied()))
                    .map(|(_, &fv)| (fv, BigRational::one()))
                    .collect();
                row.push((gv, -BigRational::one()));
                out.add_row(row, BigRational::zero())?;
            }
        }
    }
    Ok(out)
}

/// Right-hand side of the normalization rows of [`lambda_conv_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Normalization {
    /// `Σ_i x_{s,i} = 1`: the rows describe probability distributions.
    #[default]
    One,
    /// `Σ_i x_{s,i} = 0`, the literal displayed variant, kept for
    /// side-by-side comparison.
    Zero,
}

/// `λ_conv(S)` with normalization constant 1; see [`lambda_conv_with`].
pub fn lambda_conv(s: &LabelCoverInstance) -> LinearSystem {
    lambda_conv_with(s, Normalization::One)
}

/// `λ_conv(S)`: a nonnegative variable `x[v|i]` per variable `v` and label
/// `i`, a normalization row per variable and a marginal row
/// `Σ_{i ∈ π^{-1}(j)} x_{s,i} = x_{t,j}` per constraint `π: s → t` and
/// label `j` of `t`.
pub fn lambda_conv_with(s: &LabelCoverInstance, normalization: Normalization) -> LinearSystem {
    let mut out = LinearSystem::new();
    let ids = label_variables(s, |name| out.add_variable(name, true, false));
    let constant = match normalization {
        Normalization::One => BigRational::one(),
        Normalization::Zero => BigRational::zero(),
    };
    for row in label_rows(s, &ids) {
        let (coeffs, normalizing) = row;
        let coeffs = coeffs.into_iter().map(|(v, c)| (v, BigRational::from_integer(c.into()))).collect();
        let rhs = if normalizing { constant.clone() } else { BigRational::zero() };
        out.add_row(coeffs, rhs).expect("rows use declared variables");
    }
    out
}

fn label_variables(s: &LabelCoverInstance, mut add: impl FnMut(String) -> usize) -> Vec<Vec<usize>> {
    s.variables()
        .iter()
        .map(|v| v.labels.iter().map(|l| add(format!("x[{}|{}]", v.name, l))).collect())
        .collect()
}

/// Rows shared by `λ_conv` and the affine systems, with a flag marking
/// normalization rows.
fn label_rows(s: &LabelCoverInstance, ids: &[Vec<usize>]) -> Vec<(Vec<(usize, i64)>, bool)> {
    let mut rows = Vec::new();
    for vars in ids {
        rows.push((vars.iter().map(|&v| (v, 1)).collect(), true));
    }
    for c in s.constraints() {
        for (j, &target) in ids[c.to].iter().enumerate() {
            let mut row: Vec<(usize, i64)> = c
                .map
                .iter()
                .enumerate()
                .filter(|&(_, &pj)| pj == j)
                .map(|(i, _)| (ids[c.from][i], 1))
                .collect();
            row.push((target, -1));
            rows.push((row, false));
        }
    }
    rows
}

/// The `G`-affine relaxation of level `k`: the families `F_K` come from
/// `k`-consistency (arc consistency on `σ_k`), and the Sherali–Adams
/// equalities are read over `G`, without nonnegativity.
pub fn affine_system(a: &Structure, k: usize, x: &Structure, modulus: Modulus) -> Result<GroupSystem> {
    Ok(affine_system_of(&k_consistency_instance(a, x, k)?, modulus))
}

/// The affine system of a label cover instance: the `λ_conv` rows over `G`.
pub fn affine_system_of(s: &LabelCoverInstance, modulus: Modulus) -> GroupSystem {
    let mut out = GroupSystem::new(modulus);
    let ids = label_variables(s, |name| out.add_variable(name));
    for (coeffs, normalizing) in label_rows(s, &ids) {
        let coeffs = coeffs.into_iter().map(|(v, c)| (v, BigInt::from(c))).collect();
        let rhs = BigInt::from(normalizing as u8);
        out.add_row(coeffs, rhs).expect("rows use declared variables");
    }
    out
}

/// The uniform assignment `x_{v,i} = p^{-d}` in `Z_q`, where `|L_v| = p^d`,
/// for the variables of [`affine_system_of`]. `None` when some label set
/// is not a power of `p` or `p` is not invertible modulo `q`.
pub fn uniform_witness(s: &LabelCoverInstance, p: u64, q: u64) -> Option<Vec<BigInt>> {
    let (p, q) = (BigInt::from(p), BigInt::from(q));
    let ext = p.extended_gcd(&q);
    if !ext.gcd.is_one() {
        return None;
    }
    let inverse = ext.x.mod_floor(&q);
    let mut out = Vec::new();
    for v in s.variables() {
        let mut size = BigInt::from(v.labels.len());
        let mut d = 0u32;
        while size > BigInt::one() && (&size % &p).is_zero() {
            size /= &p;
            d += 1;
        }
        if !size.is_one() {
            return None;
        }
        let value = inverse.modpow(&BigInt::from(d), &q);
        out.extend(std::iter::repeat(value).take(v.labels.len()));
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::super::{group_template, lp_feasible, solve_group_system, tseitin_instance};
    use super::*;
    use crate::labelcover::{k_consistency_test, sigma_k};
    use crate::structures::catalog::*;

    fn single_edge() -> Structure {
        digraph(2, &[(0, 1)])
    }

    #[test]
    fn single_edge_has_seven_variables() {
        let s = sherali_adams_system(&clique(2), 2, &single_edge()).unwrap();
        assert_eq!(s.variables().len(), 7);
        assert!(s.variables().iter().any(|v| v.name == "x{}"));
        assert!(s.variables().iter().any(|v| v.name == "x{0:0,1:1}"));
    }

    #[test]
    fn sa_matches_lambda_conv_of_sigma_k() {
        for (a, x, k) in [(clique(2), cycle(3), 2), (clique(3), directed_path(3), 2), (clique(2), cycle(4), 3)] {
            let sa = sherali_adams_system(&a, k, &x).unwrap();
            let lc = lambda_conv(&sigma_k(&a, &x, k).unwrap());
            assert_eq!(sa.variables().len(), lc.variables().len());
            // Same rows after renaming x[{K}|{f}] to x{f}.
            let rename = |name: &str| format!("x{}", name.split('|').nth(1).unwrap().trim_end_matches(']'));
            let canon = |sys: &LinearSystem, f: &dyn Fn(&str) -> String| {
                let mut rows: Vec<String> = sys
                    .rows()
                    .iter()
                    .map(|r| {
                        let mut terms: Vec<String> =
                            r.coeffs.iter().map(|(v, c)| format!("{c}*{}", f(&sys.variables()[*v].name))).collect();
                        terms.sort();
                        format!("{} = {}", terms.join(" + "), r.rhs)
                    })
                    .collect();
                rows.sort();
                rows
            };
            assert_eq!(canon(&sa, &|n| n.to_string()), canon(&lc, &rename));
        }
    }

    #[test]
    fn triangle_over_an_edge() {
        let k2 = clique(2);
        let c3 = cycle(3);
        let sa2 = sherali_adams_system(&k2, 2, &c3).unwrap();
        let w = lp_feasible(&sa2).unwrap();
        assert!(sa2.check(&w));
        assert!(lp_feasible(&sherali_adams_system(&k2, 3, &c3).unwrap()).is_none());
        // Homomorphic instances are feasible at every level.
        assert!(lp_feasible(&sherali_adams_system(&k2, 3, &cycle(4)).unwrap()).is_some());
    }

    #[test]
    fn lambda_conv_examples() {
        let mut s = LabelCoverInstance::new();
        s.add_variable("v", vec!["1".into(), "2".into(), "3".into()]);
        let l = lambda_conv(&s);
        assert_eq!((l.variables().len(), l.rows().len()), (3, 1));
        assert!(lp_feasible(&l).is_some());
        // A constant map forces the missed label to zero.
        let mut s = LabelCoverInstance::new();
        let u = s.add_variable("u", vec!["1".into(), "2".into()]);
        let t = s.add_variable("t", vec!["a".into(), "b".into()]);
        s.add_constraint(u, t, vec![0, 0]).unwrap();
        let l = lambda_conv(&s);
        let w = lp_feasible(&l).unwrap();
        assert!(w[l.variable_index("x[t|b]").unwrap()].is_zero());
        // The literal zero normalization admits only the zero point.
        let z = lp_feasible(&lambda_conv_with(&s, Normalization::Zero)).unwrap();
        assert!(z.iter().all(Zero::is_zero));
    }

    #[test]
    fn affine_examples() {
        let k2 = clique(2);
        // C3 over K2 at level 3: some F_K is empty, so Σ over ∅ = 1 fails.
        let sys = affine_system(&k2, 3, &cycle(3), Modulus::Cyclic(2)).unwrap();
        assert!(solve_group_system(&sys).is_none());
        assert!(solve_group_system(&affine_system(&k2, 2, &cycle(4), Modulus::Cyclic(2)).unwrap()).is_some());
    }

    #[test]
    fn tseitin_uniform_witness() {
        let z2 = group_template(Modulus::Cyclic(2), &[1]).unwrap();
        let x = tseitin_instance(&clique(4), &[true, false, false, false]).unwrap();
        assert!(k_consistency_test(&z2, 3, &x).unwrap());
        let s = k_consistency_instance(&z2, &x, 3).unwrap();
        let sys = affine_system_of(&s, Modulus::Cyclic(3));
        let w = uniform_witness(&s, 2, 3).unwrap();
        assert!(sys.check(&w));
        assert!(uniform_witness(&s, 2, 4).is_none());
    }
}
