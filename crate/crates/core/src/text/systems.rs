//! Parsing the textual exports of linear and group systems.
//!
//! Both formats are line based: `var` lines declare variables in order,
//! every other non-empty line is a row `c1*v1 + c2*v2 - … = b` (an empty
//! left-hand side is written `0`). Group systems start with `mod n` or
//! `mod Z`. Variable names may not contain whitespace.

use num_bigint::BigInt;
use num_rational::BigRational;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::relax::{GroupSystem, LinearSystem, Modulus};

fn at(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Non-empty lines with their 1-based numbers, comments (`#`) removed.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

/// Splits a row into signed `(coefficient, variable)` terms and the
/// right-hand side.
fn row<C: FromStr + std::ops::Neg<Output = C>>(line: usize, text: &str) -> Result<(Vec<(C, String)>, C)> {
    let (lhs, rhs) = text
        .rsplit_once(" = ")
        .ok_or_else(|| at(line, 1, "expected `lhs = rhs`"))?;
    let num = |s: &str, column: usize| s.parse::<C>().map_err(|_| at(line, column, format!("`{s}` is not a number")));
    let rhs = num(rhs.trim(), lhs.len() + 4)?;
    let mut terms = Vec::new();
    if lhs.trim() == "0" {
        return Ok((terms, rhs));
    }
    let mut negative = false;
    let mut expect_term = true;
    let mut column = 1;
    for word in lhs.split(' ') {
        let col = column;
        column += word.len() + 1;
        if word.is_empty() {
            continue;
        }
        if !expect_term {
            negative = match word {
                "+" => false,
                "-" => true,
                _ => return Err(at(line, col, format!("expected `+` or `-`, found `{word}`"))),
            };
            expect_term = true;
            continue;
        }
        let (word, neg) = match word.strip_prefix('-') {
            Some(w) if terms.is_empty() && !negative => (w, true),
            _ => (word, negative),
        };
        let (c, v) = word
            .split_once('*')
            .ok_or_else(|| at(line, col, format!("expected `coefficient*variable`, found `{word}`")))?;
        let c = num(c, col)?;
        terms.push((if neg { -c } else { c }, v.to_string()));
        expect_term = false;
    }
    if expect_term {
        return Err(at(line, column, "expected a term"));
    }
    Ok((terms, rhs))
}

fn resolve<C>(line: usize, terms: Vec<(C, String)>, index: impl Fn(&str) -> Option<usize>) -> Result<Vec<(usize, C)>> {
    terms
        .into_iter()
        .map(|(c, v)| {
            index(&v)
                .map(|i| (i, c))
                .ok_or_else(|| at(line, 1, format!("undeclared variable `{v}`")))
        })
        .collect()
}

/// Parses the textual export of a [`LinearSystem`].
pub fn parse_linear_system(text: &str) -> Result<LinearSystem> {
    let mut sys = LinearSystem::new();
    for (n, l) in lines(text) {
        if let Some(rest) = l.strip_prefix("var ") {
            let (name, bound) = rest
                .trim()
                .rsplit_once(' ')
                .ok_or_else(|| at(n, 5, "expected `var name bound`"))?;
            let (nonneg, le1) = match bound {
                "[0,1]" => (true, true),
                ">=0" => (true, false),
                "<=1" => (false, true),
                "free" => (false, false),
                _ => return Err(at(n, l.len() - bound.len() + 1, format!("unknown bound `{bound}`"))),
            };
            sys.add_variable(name.trim(), nonneg, le1);
        } else {
            let (terms, rhs) = row::<BigRational>(n, l)?;
            let coeffs = resolve(n, terms, |v| sys.variable_index(v))?;
            sys.add_row(coeffs, rhs)?;
        }
    }
    Ok(sys)
}

/// Parses the textual export of a [`GroupSystem`].
pub fn parse_group_system(text: &str) -> Result<GroupSystem> {
    let mut it = lines(text);
    let (n, first) = it.next().ok_or_else(|| at(1, 1, "expected `mod n` or `mod Z`"))?;
    let modulus: Modulus = first
        .strip_prefix("mod ")
        .ok_or_else(|| at(n, 1, "expected `mod n` or `mod Z`"))?
        .trim()
        .parse()
        .map_err(|e: Error| at(n, 5, e.to_string()))?;
    let mut sys = GroupSystem::new(modulus);
    for (n, l) in it {
        if let Some(rest) = l.strip_prefix("var ") {
            sys.add_variable(rest.trim());
        } else {
            let (terms, rhs) = row::<BigInt>(n, l)?;
            let coeffs = resolve(n, terms, |v| sys.variable_index(v))?;
            sys.add_row(coeffs, rhs)?;
        }
    }
    Ok(sys)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_round_trip() {
        let mut s = LinearSystem::new();
        let x = s.add_variable("x{u:0}", true, true);
        let y = s.add_variable("y", false, false);
        let q = |a: i64, b: i64| BigRational::new(a.into(), b.into());
        s.add_row(vec![(x, q(3, 2)), (y, q(-1, 1))], q(-2, 3)).unwrap();
        s.add_row(vec![(y, q(-1, 1))], q(0, 1)).unwrap();
        s.add_row(vec![], q(0, 1)).unwrap();
        let back = parse_linear_system(&s.to_string()).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn group_round_trip() {
        for m in [Modulus::Cyclic(3), Modulus::Integers] {
            let mut s = GroupSystem::new(m);
            let x = s.add_variable("e0_1");
            let y = s.add_variable("t1_0");
            s.add_row(vec![(x, BigInt::from(2)), (y, BigInt::from(-1))], BigInt::from(1)).unwrap();
            let back = parse_group_system(&s.to_string()).unwrap();
            assert_eq!(back, s);
        }
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_linear_system("var x free\n1*x + 2*z = 1\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }), "{e}");
        let e = parse_group_system("mod q\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, .. }));
    }
}
