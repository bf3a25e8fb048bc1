//! Multilinear polynomials and the linearization operator `ℒ`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactmath::{RVector, Rational, Space, Subset};
use crate::instance::Partition;

/// What to do when a product puts two indices of one block into a monomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConflictMode {
    /// Report [`Error::BlockConflict`].
    Strict,
    /// Drop the monomial (`x_i x_{i'} = 0` on feasible points).
    Simplify,
}

/// `Σ_J coef_J Π_{j∈J} y_j`, with `J = ∅` the constant term.
///
/// Variables are idempotent (`y_j² = y_j`), so a product of monomials is the
/// union of their index sets.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct MultilinearPoly {
    terms: BTreeMap<Subset, Rational>,
}

impl MultilinearPoly {
    pub fn zero() -> Self {
        MultilinearPoly::default()
    }

    pub fn constant(c: Rational) -> Self {
        MultilinearPoly::default().plus_term(Subset::empty(), c)
    }

    pub fn one() -> Self {
        MultilinearPoly::constant(Rational::one())
    }

    pub fn var(j: usize) -> Self {
        MultilinearPoly::monomial(Subset::singleton(j), Rational::one())
    }

    pub fn monomial(vars: Subset, coef: Rational) -> Self {
        MultilinearPoly::default().plus_term(vars, coef)
    }

    /// `Σ_{j∈s} y_j`.
    pub fn sum_of(s: &Subset) -> Self {
        s.iter()
            .fold(MultilinearPoly::zero(), |p, j| p + MultilinearPoly::var(j))
    }

    fn plus_term(mut self, vars: Subset, coef: Rational) -> Self {
        if coef.is_zero() {
            return self;
        }
        let slot = self.terms.entry(vars).or_insert_with(Rational::zero);
        *slot += coef;
        self.terms.retain(|_, c| !c.is_zero());
        self
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Subset, &Rational)> {
        self.terms.iter()
    }

    pub fn coef(&self, vars: &Subset) -> Rational {
        self.terms.get(vars).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, k: &Rational) -> Self {
        self.terms
            .iter()
            .fold(MultilinearPoly::zero(), |p, (j, c)| p.plus_term(j.clone(), c * k))
    }

    /// Product over variables indexed by blocks (`z`): plain union.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = MultilinearPoly::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out = out.plus_term(a.union(b), ca * cb);
            }
        }
        out
    }

    /// Product over variables indexed by `[n]` (`w`), where two distinct
    /// indices of the same block may not meet.
    pub fn mul_in(&self, other: &Self, p: &Partition, mode: ConflictMode) -> Result<Self> {
        let mut out = MultilinearPoly::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let j = a.union(b);
                if let Some(block) = p.repeated_block(&j) {
                    match mode {
                        ConflictMode::Simplify => continue,
                        ConflictMode::Strict => {
                            return Err(Error::BlockConflict {
                                left: a.to_string(),
                                right: b.to_string(),
                                block: block + 1,
                            })
                        }
                    }
                }
                out = out.plus_term(j, ca * cb);
            }
        }
        Ok(out)
    }

    /// Evaluates at a point given as a map from variable to value.
    pub fn eval(&self, value: impl Fn(usize) -> Rational) -> Rational {
        self.terms
            .iter()
            .map(|(j, c)| j.iter().fold(c.clone(), |acc, i| acc * value(i)))
            .sum()
    }
}

impl Add for MultilinearPoly {
    type Output = MultilinearPoly;
    fn add(self, rhs: Self) -> Self {
        rhs.terms.into_iter().fold(self, |p, (j, c)| p.plus_term(j, c))
    }
}

impl Neg for MultilinearPoly {
    type Output = MultilinearPoly;
    fn neg(self) -> Self {
        self.scale(&-Rational::one())
    }
}

impl Sub for MultilinearPoly {
    type Output = MultilinearPoly;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl fmt::Debug for MultilinearPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(j, c)| format!("{c}·{j}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `ℒ`: replaces each monomial `Π_{j∈J} y_j` by the coordinate `y_J`.
///
/// Returns the linear part over `space` and the constant term. Every
/// non-constant monomial must be a coordinate of `space`.
pub fn linearize(p: &MultilinearPoly, space: &Space) -> Result<(RVector, Rational)> {
    let mut offset = Rational::zero();
    let mut values = vec![Rational::zero(); space.len()];
    for (j, c) in p.terms() {
        if j.is_empty() {
            offset += c;
            continue;
        }
        let k = space.position(j).ok_or_else(|| Error::Unlinearizable(j.to_string()))?;
        values[k] += c;
    }
    Ok((RVector::new(space.clone(), values)?, offset))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::int;
    use crate::instance::{Monomial, RawInstance};

    #[test]
    fn linearize_examples() {
        let inst = RawInstance {
            n: 4,
            blocks: vec![vec![1, 2], vec![3, 4]],
            terms: vec![Monomial::new([1, 3], int(1))],
        }
        .validate()
        .unwrap();
        let fam = inst.family();
        let p = inst.partition();
        let f = (MultilinearPoly::one() - MultilinearPoly::var(1))
            .mul_in(
                &(MultilinearPoly::one() - MultilinearPoly::var(3)),
                p,
                ConflictMode::Strict,
            )
            .unwrap();
        let (a, c) = linearize(&f, fam.space()).unwrap();
        assert_eq!(c, int(1));
        let expect = RVector::from_pairs(
            fam.space().clone(),
            [
                (Subset::from([1]), int(-1)),
                (Subset::from([3]), int(-1)),
                (Subset::from([1, 3]), int(1)),
            ],
        )
        .unwrap();
        assert_eq!(a, expect);

        let same_block = MultilinearPoly::var(1);
        let err = same_block
            .mul_in(&MultilinearPoly::var(2), p, ConflictMode::Strict)
            .unwrap_err();
        assert!(matches!(err, Error::BlockConflict { block: 1, .. }));
        let gone = same_block
            .mul_in(&MultilinearPoly::var(2), p, ConflictMode::Simplify)
            .unwrap();
        assert!(gone.is_zero());

        let (a, c) = linearize(&MultilinearPoly::one(), fam.space()).unwrap();
        assert_eq!(c, int(1));
        assert!(a.values().iter().all(Zero::is_zero));

        let stray = MultilinearPoly::monomial(Subset::from([1, 3, 4]), int(1));
        assert!(matches!(linearize(&stray, fam.space()), Err(Error::Unlinearizable(_))));
    }

    #[test]
    fn idempotent_products() {
        let x = MultilinearPoly::var(1);
        assert_eq!(x.mul(&x), x);
        let y = MultilinearPoly::var(2);
        let prod = (x.clone() + y.clone()).mul(&(x - y));
        // (x+y)(x-y) = x - y on 0-1 points
        assert_eq!(prod, MultilinearPoly::var(1) - MultilinearPoly::var(2));
    }
}
