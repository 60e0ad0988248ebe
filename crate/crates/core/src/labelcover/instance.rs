//! Label cover instances and their view as structures over a finite reduct
//! of the label cover signature.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::structures::{Signature, Structure};

/// A variable together with its label set (its type).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LcVariable {
    pub name: String,
    pub labels: Vec<String>,
}

/// The constraint `π(from) = to`: `map[i]` is the label of `to` assigned to
/// label `i` of `from`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LcConstraint {
    pub from: usize,
    pub to: usize,
    pub map: Vec<usize>,
}

/// A label cover instance: typed variables and function-labelled binary
/// constraints.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LabelCoverInstance {
    variables: Vec<LcVariable>,
    constraints: Vec<LcConstraint>,
}

impl LabelCoverInstance {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a variable and returns its index. Names need not be unique, but
    /// the text format and the CLI refer to variables by name.
    pub fn add_variable(&mut self, name: impl Into<String>, labels: Vec<String>) -> usize {
        self.variables.push(LcVariable {
            name: name.into(),
            labels,
        });
        self.variables.len() - 1
    }

    /// Adds a constraint, checking that the map is total on the label set of
    /// `from` and lands in the label set of `to`.
    pub fn add_constraint(&mut self, from: usize, to: usize, map: Vec<usize>) -> Result<usize> {
        let n = self.variables.len();
        if from >= n || to >= n {
            return Err(Error::InvalidLabelCover("constraint refers to a missing variable".into()));
        }
        if map.len() != self.variables[from].labels.len() {
            return Err(Error::InvalidLabelCover(format!(
                "map of constraint `{}` → `{}` has {} entries for {} labels",
                self.variables[from].name,
                self.variables[to].name,
                map.len(),
                self.variables[from].labels.len()
            )));
        }
        if map.iter().any(|&l| l >= self.variables[to].labels.len()) {
            return Err(Error::InvalidLabelCover(format!(
                "map of constraint `{}` → `{}` leaves the target label set",
                self.variables[from].name, self.variables[to].name
            )));
        }
        self.constraints.push(LcConstraint { from, to, map });
        Ok(self.constraints.len() - 1)
    }

    pub fn variables(&self) -> &[LcVariable] {
        &self.variables
    }

    pub fn constraints(&self) -> &[LcConstraint] {
        &self.constraints
    }

    pub fn variable(&self, v: usize) -> &LcVariable {
        &self.variables[v]
    }

    pub fn variable_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v.name == name)
    }

    pub fn label_count(&self, v: usize) -> usize {
        self.variables[v].labels.len()
    }

    /// Total number of labels over all variables.
    pub fn total_labels(&self) -> usize {
        self.variables.iter().map(|v| v.labels.len()).sum()
    }

    /// Whether some variable has an empty label set.
    pub fn has_empty_type(&self) -> bool {
        self.variables.iter().any(|v| v.labels.is_empty())
    }

    /// Keeps only the labels `kept[v]` (indices, increasing) of every
    /// variable and restricts every constraint map accordingly. Every map
    /// must send kept labels to kept labels.
    pub fn restrict(&self, kept: &[Vec<usize>]) -> Result<LabelCoverInstance> {
        let mut out = LabelCoverInstance::new();
        let mut renumber: Vec<HashMap<usize, usize>> = Vec::new();
        for (v, keep) in self.variables.iter().zip(kept) {
            let labels = keep.iter().map(|&l| v.labels[l].clone()).collect();
            out.add_variable(v.name.clone(), labels);
            renumber.push(keep.iter().enumerate().map(|(i, &l)| (l, i)).collect());
        }
        for c in &self.constraints {
            let map = kept[c.from]
                .iter()
                .map(|&l| {
                    renumber[c.to].get(&c.map[l]).copied().ok_or_else(|| {
                        Error::InvalidLabelCover("restriction is not closed under a constraint map".into())
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            out.add_constraint(c.from, c.to, map)?;
        }
        Ok(out)
    }
}

/// A finite reduct of the label cover signature: one type per distinct label
/// set and one symbol `E_π` per distinct map between them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LcSignature {
    signature: Arc<Signature>,
    label_sets: Vec<Vec<String>>,
    maps: Vec<(usize, usize, Vec<usize>)>,
}

impl LcSignature {
    /// Builds the reduct from label sets and maps `(from set, to set, map)`.
    pub fn new(label_sets: Vec<Vec<String>>, maps: Vec<(usize, usize, Vec<usize>)>) -> Result<Self> {
        let mut sig = Signature::new();
        for labels in &label_sets {
            let name = sig.fresh_type_name(&format!("{{{}}}", labels.join(",")));
            sig.add_type(name)?;
        }
        for (from, to, map) in &maps {
            if *from >= label_sets.len()
                || *to >= label_sets.len()
                || map.len() != label_sets[*from].len()
                || map.iter().any(|&l| l >= label_sets[*to].len())
            {
                return Err(Error::InvalidLabelCover("ill-formed map in label cover signature".into()));
            }
            let rendered: Vec<String> = map
                .iter()
                .enumerate()
                .map(|(i, &l)| format!("{}>{}", label_sets[*from][i], label_sets[*to][l]))
                .collect();
            let name = sig.fresh_symbol_name(&format!("E[{}]", rendered.join(",")));
            sig.add_symbol(name, vec![*from, *to])?;
        }
        Ok(LcSignature {
            signature: Arc::new(sig),
            label_sets,
            maps,
        })
    }

    /// The smallest reduct containing the types and maps of `instances`.
    pub fn covering(instances: &[&LabelCoverInstance]) -> Result<Self> {
        let mut sets: Vec<Vec<String>> = Vec::new();
        let mut maps: Vec<(usize, usize, Vec<usize>)> = Vec::new();
        let set_index = |sets: &mut Vec<Vec<String>>, labels: &Vec<String>| match sets.iter().position(|s| s == labels) {
            Some(i) => i,
            None => {
                sets.push(labels.clone());
                sets.len() - 1
            }
        };
        for s in instances {
            for v in s.variables() {
                set_index(&mut sets, &v.labels);
            }
            for c in s.constraints() {
                let from = set_index(&mut sets, &s.variable(c.from).labels);
                let to = set_index(&mut sets, &s.variable(c.to).labels);
                let m = (from, to, c.map.clone());
                if !maps.contains(&m) {
                    maps.push(m);
                }
            }
        }
        LcSignature::new(sets, maps)
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.signature
    }

    pub fn label_sets(&self) -> &[Vec<String>] {
        &self.label_sets
    }

    pub fn maps(&self) -> &[(usize, usize, Vec<usize>)] {
        &self.maps
    }

    /// Type of a label set, if present.
    pub fn type_of(&self, labels: &[String]) -> Option<usize> {
        self.label_sets.iter().position(|s| s == labels)
    }

    /// Symbol of a map between label sets, if present.
    pub fn symbol_of(&self, from: usize, to: usize, map: &[usize]) -> Option<usize> {
        self.maps
            .iter()
            .position(|(f, t, m)| *f == from && *t == to && m == map)
    }

    /// The instance as a structure: each variable is an element of the type
    /// of its label set, each constraint a tuple of its map's symbol.
    pub fn to_structure(&self, s: &LabelCoverInstance) -> Result<Structure> {
        let mut out = Structure::new(self.signature.clone());
        let missing = || Error::InvalidLabelCover("instance uses a type or map outside the signature".into());
        let mut index = Vec::new();
        for v in s.variables() {
            let t = self.type_of(&v.labels).ok_or_else(missing)?;
            index.push((t, out.add_element(t, v.name.clone())));
        }
        for c in s.constraints() {
            let (ft, fe) = index[c.from];
            let (tt, te) = index[c.to];
            let sym = self.symbol_of(ft, tt, &c.map).ok_or_else(missing)?;
            out.add_tuple(sym, vec![fe, te])?;
        }
        Ok(out)
    }

    /// Reads a structure over this signature back as an instance.
    pub fn from_structure(&self, x: &Structure) -> LabelCoverInstance {
        let mut out = LabelCoverInstance::new();
        let mut offsets = Vec::new();
        for t in 0..self.label_sets.len() {
            offsets.push(out.variables().len());
            for name in x.domain(t) {
                out.add_variable(name.clone(), self.label_sets[t].clone());
            }
        }
        for (s, (from, to, map)) in self.maps.iter().enumerate() {
            for tuple in x.relation(s) {
                out.add_constraint(offsets[*from] + tuple[0], offsets[*to] + tuple[1], map.clone())
                    .expect("well-typed tuple");
            }
        }
        out
    }

    /// The label cover template restricted to this reduct: the domain of a
    /// type is its label set and `E_π` is the graph of `π`.
    pub fn template(&self) -> Structure {
        let mut out = Structure::new(self.signature.clone());
        for (t, labels) in self.label_sets.iter().enumerate() {
            for l in labels {
                out.add_element(t, l.clone());
            }
        }
        for (s, (_, _, map)) in self.maps.iter().enumerate() {
            for (i, &j) in map.iter().enumerate() {
                out.add_tuple(s, vec![i, j]).expect("well-typed tuple");
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(ls: &[&str]) -> Vec<String> {
        ls.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn constraints_are_checked() {
        let mut s = LabelCoverInstance::new();
        let u = s.add_variable("u", labels(&["0", "1"]));
        let v = s.add_variable("v", labels(&["a"]));
        assert!(s.add_constraint(u, v, vec![0, 0]).is_ok());
        assert!(s.add_constraint(u, v, vec![0]).is_err());
        assert!(s.add_constraint(u, v, vec![0, 1]).is_err());
        assert!(s.add_constraint(u, 7, vec![0, 0]).is_err());
    }

    #[test]
    fn structure_round_trip() {
        let mut s = LabelCoverInstance::new();
        let u = s.add_variable("u", labels(&["0", "1"]));
        let v = s.add_variable("v", labels(&["a", "b"]));
        let w = s.add_variable("w", labels(&["0", "1"]));
        s.add_constraint(u, v, vec![1, 0]).unwrap();
        s.add_constraint(w, v, vec![1, 0]).unwrap();
        let sig = LcSignature::covering(&[&s]).unwrap();
        assert_eq!(sig.label_sets().len(), 2);
        assert_eq!(sig.maps().len(), 1);
        let x = sig.to_structure(&s).unwrap();
        let back = sig.from_structure(&x);
        assert_eq!(back.variables().len(), 3);
        assert_eq!(back.constraints().len(), 2);
        let p = sig.template();
        assert_eq!(p.relation(0).len(), 2);
    }

    #[test]
    fn restriction_renumbers_maps() {
        let mut s = LabelCoverInstance::new();
        let u = s.add_variable("u", labels(&["0", "1", "2"]));
        let v = s.add_variable("v", labels(&["a", "b"]));
        s.add_constraint(u, v, vec![0, 1, 1]).unwrap();
        let r = s.restrict(&[vec![1, 2], vec![1]]).unwrap();
        assert_eq!(r.constraints()[0].map, vec![0, 0]);
        assert!(s.restrict(&[vec![0], vec![1]]).is_err());
    }
}
