//! Relaxations: Sherali–Adams systems, the `λ_conv` system of a label cover
//! instance, exact rational LP feasibility, group-affine systems over `Z`
//! and `Z_n` with a Smith-normal-form solver, and the tensor test.

mod group;
mod sa;
mod simplex;
mod snf;
mod tensor;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub use group::{group_equations, group_template, tseitin_instance, Modulus};
pub use sa::{
    affine_system, affine_system_of, lambda_conv, lambda_conv_with, sherali_adams_system, uniform_witness, Normalization,
};
pub use simplex::lp_feasible;
pub use snf::solve_group_system;
pub use tensor::{tensor_interpretation, tensor_test};

/// A variable of a [`LinearSystem`] with its sign and bound flags.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LpVariable {
    pub name: String,
    pub nonnegative: bool,
    /// Whether the variable is bounded above by 1.
    pub at_most_one: bool,
}

/// An equality row `Σ c_i x_i = b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearRow {
    pub coeffs: Vec<(usize, BigRational)>,
    pub rhs: BigRational,
}

/// A system of linear equalities with exact rational coefficients, plus
/// nonnegativity and upper-bound-one flags per variable.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinearSystem {
    variables: Vec<LpVariable>,
    rows: Vec<LinearRow>,
}

impl LinearSystem {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_variable(&mut self, name: impl Into<String>, nonnegative: bool, at_most_one: bool) -> usize {
        self.variables.push(LpVariable {
            name: name.into(),
            nonnegative,
            at_most_one,
        });
        self.variables.len() - 1
    }

    /// Adds a row; coefficients of repeated variables are summed and zero
    /// coefficients dropped.
    pub fn add_row(&mut self, coeffs: Vec<(usize, BigRational)>, rhs: BigRational) -> Result<()> {
        let mut merged: Vec<(usize, BigRational)> = Vec::with_capacity(coeffs.len());
        let mut sorted = coeffs;
        sorted.sort_by_key(|(v, _)| *v);
        for (v, c) in sorted {
            if v >= self.variables.len() {
                return Err(Error::InvalidSystem(format!("row references undeclared variable {v}")));
            }
            match merged.last_mut() {
                Some((w, d)) if *w == v => *d += c,
                _ => merged.push((v, c)),
            }
        }
        merged.retain(|(_, c)| !c.is_zero());
        self.rows.push(LinearRow { coeffs: merged, rhs });
        Ok(())
    }

    pub fn variables(&self) -> &[LpVariable] {
        &self.variables
    }

    pub fn rows(&self) -> &[LinearRow] {
        &self.rows
    }

    pub fn variable_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v.name == name)
    }

    /// Whether `x` satisfies every row and bound exactly.
    pub fn check(&self, x: &[BigRational]) -> bool {
        if x.len() != self.variables.len() {
            return false;
        }
        let bounds = self.variables.iter().zip(x).all(|(v, val)| {
            (!v.nonnegative || !val.is_negative()) && (!v.at_most_one || *val <= BigRational::one())
        });
        bounds
            && self.rows.iter().all(|r| {
                let lhs: BigRational = r.coeffs.iter().map(|(v, c)| c * &x[*v]).sum();
                lhs == r.rhs
            })
    }
}

fn write_terms<C: fmt::Display + Signed>(
    f: &mut fmt::Formatter<'_>,
    coeffs: &[(usize, C)],
    names: &[&str],
    rhs: &impl fmt::Display,
) -> fmt::Result {
    if coeffs.is_empty() {
        write!(f, "0")?;
    }
    for (i, (v, c)) in coeffs.iter().enumerate() {
        let sep = match (i, c.is_negative()) {
            (0, false) => "",
            (0, true) => "-",
            (_, false) => " + ",
            (_, true) => " - ",
        };
        write!(f, "{sep}{}*{}", c.abs(), names[*v])?;
    }
    writeln!(f, " = {rhs}")
}

/// The textual export: a `var` header line per variable (`[0,1]`, `>=0` or
/// `free`), then one `c1*v1 + c2*v2 = b` line per row.
impl fmt::Display for LinearSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.variables {
            let bound = match (v.nonnegative, v.at_most_one) {
                (true, true) => "[0,1]",
                (true, false) => ">=0",
                (false, true) => "<=1",
                (false, false) => "free",
            };
            writeln!(f, "var {} {bound}", v.name)?;
        }
        let names: Vec<&str> = self.variables.iter().map(|v| v.name.as_str()).collect();
        for r in &self.rows {
            write_terms(f, &r.coeffs, &names, &r.rhs)?;
        }
        Ok(())
    }
}

/// An equality row `Σ a_i x_i = b` with integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupRow {
    pub coeffs: Vec<(usize, BigInt)>,
    pub rhs: BigInt,
}

/// A system of integer linear equations over `Z` or `Z_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSystem {
    modulus: Modulus,
    variables: Vec<String>,
    rows: Vec<GroupRow>,
}

impl GroupSystem {
    pub fn new(modulus: Modulus) -> Self {
        GroupSystem {
            modulus,
            variables: Vec::new(),
            rows: Vec::new(),
        }
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn add_variable(&mut self, name: impl Into<String>) -> usize {
        self.variables.push(name.into());
        self.variables.len() - 1
    }

    /// Adds a row; repeated variables are merged and, for a finite modulus,
    /// coefficients and the constant are reduced into `[0, n)`.
    pub fn add_row(&mut self, coeffs: Vec<(usize, BigInt)>, rhs: BigInt) -> Result<()> {
        let mut sorted = coeffs;
        sorted.sort_by_key(|(v, _)| *v);
        let mut merged: Vec<(usize, BigInt)> = Vec::with_capacity(sorted.len());
        for (v, c) in sorted {
            if v >= self.variables.len() {
                return Err(Error::InvalidSystem(format!("row references undeclared variable {v}")));
            }
            match merged.last_mut() {
                Some((w, d)) if *w == v => *d += c,
                _ => merged.push((v, c)),
            }
        }
        let reduce = |c: BigInt| match self.modulus {
            Modulus::Cyclic(n) => c.mod_floor(&BigInt::from(n)),
            Modulus::Integers => c,
        };
        let mut coeffs: Vec<(usize, BigInt)> = merged.into_iter().map(|(v, c)| (v, reduce(c))).collect();
        coeffs.retain(|(_, c)| !c.is_zero());
        let rhs = reduce(rhs);
        self.rows.push(GroupRow { coeffs, rhs });
        Ok(())
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn rows(&self) -> &[GroupRow] {
        &self.rows
    }

    pub fn variable_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v == name)
    }

    /// Whether `x` satisfies every row (modulo `n` for `Z_n`).
    pub fn check(&self, x: &[BigInt]) -> bool {
        x.len() == self.variables.len()
            && self.rows.iter().all(|r| {
                let lhs: BigInt = r.coeffs.iter().map(|(v, c)| c * &x[*v]).sum();
                match self.modulus {
                    Modulus::Cyclic(n) => (lhs - &r.rhs).mod_floor(&BigInt::from(n)).is_zero(),
                    Modulus::Integers => lhs == r.rhs,
                }
            })
    }
}

/// The textual export: a `mod n` or `mod Z` header, a `var` line per
/// variable, then one row per line.
impl fmt::Display for GroupSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "mod {}", self.modulus)?;
        for v in &self.variables {
            writeln!(f, "var {v}")?;
        }
        let names: Vec<&str> = self.variables.iter().map(String::as_str).collect();
        for r in &self.rows {
            write_terms(f, &r.coeffs, &names, &r.rhs)?;
        }
        Ok(())
    }
}
