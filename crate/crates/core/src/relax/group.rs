//! Finite group templates `G` of `CSP(G)`, the equations an instance over
//! such a template stands for, and Tseitin instances.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;

use super::GroupSystem;
use crate::error::{Error, Result};
use crate::structures::{Signature, Structure};

/// The group of a [`GroupSystem`]: `Z_n` or `Z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Modulus {
    Cyclic(u64),
    Integers,
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Modulus::Cyclic(n) => write!(f, "{n}"),
            Modulus::Integers => write!(f, "Z"),
        }
    }
}

impl FromStr for Modulus {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Z" | "z" => Ok(Modulus::Integers),
            _ => match s.parse::<u64>() {
                Ok(n) if n >= 1 => Ok(Modulus::Cyclic(n)),
                _ => Err(Error::Usage(format!("modulus must be a positive integer or Z, got `{s}`"))),
            },
        }
    }
}

/// The template `G` for `CSP(Z_n)`: domain `0, …, n-1` of the single type
/// `g`, the ternary relation `Add = {(x_1, x_2, y) : x_1 + x_2 = y}` and a
/// unary relation `Is{b} = {b}` per generator `b`.
pub fn group_template(modulus: Modulus, generators: &[u64]) -> Result<Structure> {
    let Modulus::Cyclic(n) = modulus else {
        return Err(Error::InvalidStructure("the group Z has no finite template".into()));
    };
    if let Some(b) = generators.iter().find(|&&b| b >= n) {
        return Err(Error::InvalidStructure(format!("generator {b} is not an element of Z_{n}")));
    }
    let mut sig = Signature::new();
    let g = sig.add_type("g")?;
    let add = sig.add_symbol("Add", vec![g, g, g])?;
    let mut is = Vec::new();
    for &b in generators {
        is.push((sig.add_symbol(format!("Is{b}"), vec![g])?, b));
    }
    let mut out = Structure::new(Arc::new(sig));
    let n = n as usize;
    for e in 0..n {
        out.add_element(g, e.to_string());
    }
    for x1 in 0..n {
        for x2 in 0..n {
            out.insert_tuple(add, vec![x1, x2, (x1 + x2) % n]);
        }
    }
    for (s, b) in is {
        out.insert_tuple(s, vec![b as usize]);
    }
    Ok(out)
}

/// The equations an instance over a group template stands for: one
/// variable per element, `x_1 + x_2 - y = 0` per `Add` tuple and `x = b`
/// per `Is{b}` tuple.
pub fn group_equations(x: &Structure, modulus: Modulus) -> Result<GroupSystem> {
    let sig = x.signature();
    let t = sig.single_type()?;
    let mut out = GroupSystem::new(modulus);
    for name in x.domain(t) {
        out.add_variable(name.clone());
    }
    for s in 0..sig.symbol_count() {
        let name = &sig.symbol(s).name;
        for tuple in x.relation(s) {
            if name == "Add" && tuple.len() == 3 {
                let row = vec![(tuple[0], 1.into()), (tuple[1], 1.into()), (tuple[2], (-1).into())];
                out.add_row(row, BigInt::from(0))?;
            } else if let (Some(b), 1) = (name.strip_prefix("Is").and_then(|b| b.parse::<u64>().ok()), tuple.len()) {
                out.add_row(vec![(tuple[0], 1.into())], BigInt::from(b))?;
            } else {
                return Err(Error::InvalidSystem(format!("`{name}` is not a group template symbol")));
            }
        }
    }
    Ok(out)
}

/// The Tseitin instance of a graph over the `Z_2` template with generator
/// 1: a variable per edge `{u, v}` (named `e{u}_{v}`) and, per vertex, the
/// constraint that its incident edges sum to its charge, written as a chain
/// of `Add` tuples through fresh elements. Satisfiable iff the charges of
/// every connected component sum to an even number.
pub fn tseitin_instance(graph: &Structure, charges: &[bool]) -> Result<Structure> {
    let t = graph.signature().single_type()?;
    let n = graph.domain_size(t);
    if charges.len() != n {
        return Err(Error::InvalidStructure(format!("{} charges for {n} vertices", charges.len())));
    }
    let template = group_template(Modulus::Cyclic(2), &[1])?;
    let sig = template.signature().clone();
    let (add, one) = (0, 1);
    let mut out = Structure::new(sig);
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for s in 0..graph.signature().symbol_count() {
        for tuple in graph.relation(s) {
            let (u, v) = (tuple[0].min(tuple[1]), tuple[0].max(tuple[1]));
            if u == v {
                return Err(Error::InvalidStructure("Tseitin instances need a loopless graph".into()));
            }
            if !incident[u].iter().any(|&e| incident[v].contains(&e)) {
                let e = out.add_element(0, format!("e{}_{}", graph.element_name(t, u), graph.element_name(t, v)));
                incident[u].push(e);
                incident[v].push(e);
            }
        }
    }
    for (v, edges) in incident.iter().enumerate() {
        let name = graph.element_name(t, v);
        let mut fresh = 0;
        let mut new_element = |out: &mut Structure| {
            fresh += 1;
            out.add_element(0, format!("t{name}_{fresh}"))
        };
        let d = edges.len();
        match (charges[v], d) {
            (false, 0) => {}
            (true, 0) => {
                // 0 = 1: an element that is both 1 and its own double.
                let o = new_element(&mut out);
                out.insert_tuple(one, vec![o]);
                out.insert_tuple(add, vec![o, o, o]);
            }
            (false, 1) => {
                out.insert_tuple(add, vec![edges[0], edges[0], edges[0]]);
            }
            (false, 2) => {
                let z = new_element(&mut out);
                out.insert_tuple(add, vec![z, z, z]);
                out.insert_tuple(add, vec![edges[0], z, edges[1]]);
            }
            (false, _) => {
                // e_1 + … + e_{d-1} = e_d.
                let mut cur = edges[0];
                for i in 1..d - 2 {
                    let t = new_element(&mut out);
                    out.insert_tuple(add, vec![cur, edges[i], t]);
                    cur = t;
                }
                out.insert_tuple(add, vec![cur, edges[d - 2], edges[d - 1]]);
            }
            (true, _) => {
                let mut cur = edges[0];
                for &e in &edges[1..] {
                    let t = new_element(&mut out);
                    out.insert_tuple(add, vec![cur, e, t]);
                    cur = t;
                }
                out.insert_tuple(one, vec![cur]);
            }
        }
    }
    Ok(out)
}
