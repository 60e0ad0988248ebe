//! The minion `Q_conv` of rational probability distributions, with minors
//! given by pushforward. It is infinite, so it is represented by its
//! elements rather than as a truncated table.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A probability distribution on `[n]` with rational weights.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalDistribution {
    weights: Vec<BigRational>,
}

impl RationalDistribution {
    /// Validates nonnegativity, a nonempty support and total mass one.
    pub fn new(weights: Vec<BigRational>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidMinion("a distribution needs a nonempty domain".into()));
        }
        if weights.iter().any(Signed::is_negative) {
            return Err(Error::InvalidMinion("negative weight in a distribution".into()));
        }
        let total: BigRational = weights.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidMinion(format!("weights sum to {total}, not 1")));
        }
        Ok(RationalDistribution { weights })
    }

    /// The uniform distribution on `[n]`, `n ≥ 1`.
    pub fn uniform(n: usize) -> Self {
        let w = BigRational::new(1.into(), n.into());
        RationalDistribution { weights: vec![w; n] }
    }

    /// The point mass at `i ∈ [n]`.
    pub fn point(n: usize, i: usize) -> Self {
        let mut weights = vec![BigRational::zero(); n];
        weights[i] = BigRational::one();
        RationalDistribution { weights }
    }

    pub fn arity(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[BigRational] {
        &self.weights
    }

    /// The pushforward along `π: [n] → [m]`.
    pub fn minor(&self, pi: &[usize], m: usize) -> Self {
        let mut weights = vec![BigRational::zero(); m];
        for (w, &j) in self.weights.iter().zip(pi) {
            weights[j] += w;
        }
        RationalDistribution { weights }
    }

    /// The image under the natural map `Q_conv → ω(Q_conv)`: the support as
    /// a bit mask together with the distribution restricted to it.
    pub fn to_omega(&self) -> (usize, RationalDistribution) {
        let mut mask = 0;
        let mut weights = Vec::new();
        for (i, w) in self.weights.iter().enumerate() {
            if !w.is_zero() {
                mask |= 1 << i;
                weights.push(w.clone());
            }
        }
        (mask, RationalDistribution { weights })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn validation() {
        assert!(RationalDistribution::new(vec![q(1, 2), q(1, 2)]).is_ok());
        assert!(RationalDistribution::new(vec![q(1, 2), q(1, 3)]).is_err());
        assert!(RationalDistribution::new(vec![q(3, 2), q(-1, 2)]).is_err());
        assert!(RationalDistribution::new(vec![]).is_err());
    }

    #[test]
    fn pushforward_laws() {
        let d = RationalDistribution::new(vec![q(1, 2), q(1, 3), q(1, 6)]).unwrap();
        assert_eq!(d.minor(&[0, 1, 2], 3), d);
        let sigma = [1, 0, 1];
        let pi = [0, 0];
        let comp: Vec<usize> = sigma.iter().map(|&s| pi[s]).collect();
        assert_eq!(d.minor(&sigma, 2).minor(&pi, 1), d.minor(&comp, 1));
        assert_eq!(d.minor(&sigma, 2).weights(), &[q(1, 3), q(2, 3)]);
        assert_eq!(RationalDistribution::point(3, 1).minor(&[2, 0, 1], 3), RationalDistribution::point(3, 0));
    }

    #[test]
    fn support_restriction() {
        let d = RationalDistribution::new(vec![q(1, 4), q(0, 1), q(3, 4)]).unwrap();
        let (mask, r) = d.to_omega();
        assert_eq!(mask, 0b101);
        assert_eq!(r.weights(), &[q(1, 4), q(3, 4)]);
        assert_eq!(RationalDistribution::uniform(4).to_omega().0, 0b1111);
    }
}
