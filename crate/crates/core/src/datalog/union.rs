//! Union gadgets: merging types and symbols by disjoint union.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::structures::{check_same_signature, Signature, Structure};

/// A union gadget `υ = (d, r): Π → Σ`.
///
/// Output type `t` is the disjoint union of the input domains `i` with
/// `d(i) = t`; output symbol `S` is the union of the input relations `R` with
/// `r(R) = S`. Every input symbol satisfies `ar_{r(R)} = d ∘ ar_R`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnionGadget {
    input: Arc<Signature>,
    output: Arc<Signature>,
    type_map: Vec<usize>,
    symbol_map: Vec<usize>,
}

impl UnionGadget {
    pub fn new(
        input: Arc<Signature>,
        output: Arc<Signature>,
        type_map: Vec<usize>,
        symbol_map: Vec<usize>,
    ) -> Result<Self> {
        let err = |m: String| Err(Error::InvalidUnionGadget(m));
        if type_map.len() != input.type_count() || symbol_map.len() != input.symbol_count() {
            return err("maps must cover every input type and symbol".into());
        }
        if type_map.iter().any(|&t| t >= output.type_count())
            || symbol_map.iter().any(|&s| s >= output.symbol_count())
        {
            return err("map targets an undeclared output type or symbol".into());
        }
        for (s, &r) in symbol_map.iter().enumerate() {
            let mapped: Vec<usize> = input.arity(s).iter().map(|&t| type_map[t]).collect();
            if mapped != output.arity(r) {
                return err(format!(
                    "symbol `{}` mapped to `{}` with incompatible arity",
                    input.symbol(s).name,
                    output.symbol(r).name
                ));
            }
        }
        Ok(UnionGadget {
            input,
            output,
            type_map,
            symbol_map,
        })
    }

    /// The identity union gadget on `sig`.
    pub fn identity(sig: Arc<Signature>) -> Self {
        let types = (0..sig.type_count()).collect();
        let symbols = (0..sig.symbol_count()).collect();
        UnionGadget {
            input: sig.clone(),
            output: sig,
            type_map: types,
            symbol_map: symbols,
        }
    }

    pub fn input(&self) -> &Arc<Signature> {
        &self.input
    }

    pub fn output(&self) -> &Arc<Signature> {
        &self.output
    }

    pub fn type_map(&self) -> &[usize] {
        &self.type_map
    }

    pub fn symbol_map(&self) -> &[usize] {
        &self.symbol_map
    }

    /// Applies the gadget. Element `a` of input type `i` becomes `a@i`;
    /// output domains list their preimage types in input order.
    pub fn apply(&self, a: &Structure) -> Result<Structure> {
        check_same_signature(&self.input, a.signature(), "union gadget input")?;
        let mut out = Structure::new(self.output.clone());
        let mut offset = vec![0; self.input.type_count()];
        for t in 0..self.output.type_count() {
            for i in (0..self.input.type_count()).filter(|&i| self.type_map[i] == t) {
                offset[i] = out.domain_size(t);
                for name in a.domain(i) {
                    out.add_element(t, format!("{name}@{}", self.input.type_name(i)));
                }
            }
        }
        for (s, &r) in self.symbol_map.iter().enumerate() {
            let arity = self.input.arity(s);
            for tuple in a.relation(s) {
                let image = tuple.iter().zip(arity).map(|(&e, &t)| offset[t] + e).collect();
                out.insert_tuple(r, image);
            }
        }
        Ok(out)
    }

    /// `next ∘ self`: first this gadget, then `next`.
    pub fn then(&self, next: &UnionGadget) -> Result<UnionGadget> {
        check_same_signature(&self.output, &next.input, "union gadget composition")?;
        UnionGadget::new(
            self.input.clone(),
            next.output.clone(),
            self.type_map.iter().map(|&t| next.type_map[t]).collect(),
            self.symbol_map.iter().map(|&s| next.symbol_map[s]).collect(),
        )
    }
}

/// Composes two union gadgets: `first` then `second`.
pub fn compose_union_gadgets(first: &UnionGadget, second: &UnionGadget) -> Result<UnionGadget> {
    first.then(second)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::is_isomorphic;

    fn merge_signatures() -> (Arc<Signature>, Arc<Signature>) {
        let input = Signature::from_names(
            &["a", "b"],
            &[("R", &["a", "a"]), ("S", &["b", "b"])],
        )
        .unwrap();
        let output = Signature::from_names(&["v"], &[("E", &["v", "v"])]).unwrap();
        (Arc::new(input), Arc::new(output))
    }

    #[test]
    fn merging_types_adds_cardinalities_and_tuples() {
        let (input, output) = merge_signatures();
        let u = UnionGadget::new(input.clone(), output, vec![0, 0], vec![0, 0]).unwrap();
        let a = Structure::from_names(
            input,
            &[("a", &["a", "b"]), ("b", &["c", "d", "e"])],
            &[("R", &[&["a", "b"]]), ("S", &[&["c", "d"]])],
        )
        .unwrap();
        let out = u.apply(&a).unwrap();
        assert_eq!(out.domain_size(0), 5);
        assert_eq!(out.relation(0).len(), 2);
    }

    #[test]
    fn identity_is_a_renaming_and_neutral() {
        let (input, output) = merge_signatures();
        let u = UnionGadget::new(input.clone(), output, vec![0, 0], vec![0, 0]).unwrap();
        let id = UnionGadget::identity(input.clone());
        assert_eq!(id.then(&u).unwrap(), u);
        let a = Structure::from_names(input, &[("a", &["x"])], &[("R", &[&["x", "x"]])]).unwrap();
        assert!(is_isomorphic(&id.apply(&a).unwrap(), &a).unwrap());
    }

    #[test]
    fn two_step_merge_equals_direct_merge() {
        let four = Arc::new(Signature::from_names(&["a", "b", "c", "d"], &[]).unwrap());
        let two = Arc::new(Signature::from_names(&["x", "y"], &[]).unwrap());
        let one = Arc::new(Signature::from_names(&["z"], &[]).unwrap());
        let u1 = UnionGadget::new(four.clone(), two.clone(), vec![0, 0, 1, 1], vec![]).unwrap();
        let u2 = UnionGadget::new(two, one.clone(), vec![0, 0], vec![]).unwrap();
        let direct = UnionGadget::new(four, one, vec![0; 4], vec![]).unwrap();
        assert_eq!(compose_union_gadgets(&u1, &u2).unwrap(), direct);
    }

    #[test]
    fn incompatible_arity_is_rejected() {
        let (input, output) = merge_signatures();
        let mut other = (*output).clone();
        other.add_type("w").unwrap();
        assert!(UnionGadget::new(input, Arc::new(other), vec![0, 1], vec![0, 0]).is_err());
    }
}
