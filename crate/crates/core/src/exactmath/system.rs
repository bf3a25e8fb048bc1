use num_traits::{One, Signed, Zero};

use super::{dot, Rational, Space, Subset};
use crate::error::{Error, Result};

/// One row `coeffs · w (= or ≤) rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Row {
    pub coeffs: Vec<Rational>,
    pub rhs: Rational,
}

impl Row {
    pub fn new(coeffs: Vec<Rational>, rhs: Rational) -> Self {
        Row { coeffs, rhs }
    }

    pub fn lhs(&self, point: &[Rational]) -> Rational {
        dot(&self.coeffs, point)
    }

    /// `Some(j)` when the row reads `-k·w_j ≤ 0` for some `k > 0`.
    pub fn sign_constraint(&self) -> Option<usize> {
        if !self.rhs.is_zero() {
            return None;
        }
        let mut nz = self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero());
        let (j, c) = nz.next()?;
        if nz.next().is_some() || !c.is_negative() {
            return None;
        }
        Some(j)
    }
}

/// Equalities and `≤`-inequalities over a labelled space.
///
/// Nonnegativity is not special: `w_J ≥ 0` is stored as the ordinary row
/// `-w_J ≤ 0`.
#[derive(Clone, Debug)]
pub struct LinearSystem {
    space: Space,
    pub equalities: Vec<Row>,
    pub inequalities: Vec<Row>,
}

impl LinearSystem {
    pub fn new(space: Space) -> Self {
        LinearSystem {
            space,
            equalities: Vec::new(),
            inequalities: Vec::new(),
        }
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    fn check_len(&self, coeffs: &[Rational]) -> Result<()> {
        if coeffs.len() != self.space.len() {
            return Err(Error::LabelMismatch(format!(
                "row of length {} in a system over {} labels",
                coeffs.len(),
                self.space.len()
            )));
        }
        Ok(())
    }

    pub fn add_equality(&mut self, coeffs: Vec<Rational>, rhs: Rational) -> Result<()> {
        self.check_len(&coeffs)?;
        self.equalities.push(Row::new(coeffs, rhs));
        Ok(())
    }

    pub fn add_inequality(&mut self, coeffs: Vec<Rational>, rhs: Rational) -> Result<()> {
        self.check_len(&coeffs)?;
        self.inequalities.push(Row::new(coeffs, rhs));
        Ok(())
    }

    /// Builds a dense row from sparse `(label, coefficient)` pairs.
    pub fn dense_row(&self, pairs: &[(Subset, Rational)]) -> Result<Vec<Rational>> {
        let mut row = vec![Rational::zero(); self.space.len()];
        for (l, c) in pairs {
            let j = self
                .space
                .position(l)
                .ok_or_else(|| Error::LabelMismatch(format!("{l} is not a coordinate")))?;
            row[j] += c;
        }
        Ok(row)
    }

    /// Adds `-w_J ≤ 0` for every coordinate.
    pub fn add_nonnegativity(&mut self) {
        for j in 0..self.space.len() {
            let mut row = vec![Rational::zero(); self.space.len()];
            row[j] = -Rational::one();
            self.inequalities.push(Row::new(row, Rational::zero()));
        }
    }

    pub fn satisfies(&self, point: &[Rational]) -> bool {
        self.first_violation(point).is_none()
    }

    /// Index of the first violated row: `Ok(i)` for equality `i`, `Err(i)`
    /// for inequality `i`.
    pub fn first_violation(&self, point: &[Rational]) -> Option<std::result::Result<usize, usize>> {
        if let Some(i) = self.equalities.iter().position(|r| r.lhs(point) != r.rhs) {
            return Some(Ok(i));
        }
        self.inequalities.iter().position(|r| r.lhs(point) > r.rhs).map(Err)
    }

    /// Concatenates another system over the same space.
    pub fn extend(&mut self, other: &LinearSystem) -> Result<()> {
        self.space.ensure_same(&other.space)?;
        self.equalities.extend(other.equalities.iter().cloned());
        self.inequalities.extend(other.inequalities.iter().cloned());
        Ok(())
    }

    /// Re-expresses a system over a sub-space inside a larger space.
    pub fn embed_into(&self, target: &Space) -> Result<LinearSystem> {
        let lift = |r: &Row| -> Result<Row> { Ok(Row::new(target.embed(&r.coeffs, &self.space)?, r.rhs.clone())) };
        Ok(LinearSystem {
            space: target.clone(),
            equalities: self.equalities.iter().map(lift).collect::<Result<_>>()?,
            inequalities: self.inequalities.iter().map(lift).collect::<Result<_>>()?,
        })
    }

    pub fn with_space_replaced(&self, space: Space) -> Result<LinearSystem> {
        if space.len() != self.space.len() {
            return Err(Error::LabelMismatch("space size differs".into()));
        }
        Ok(LinearSystem {
            space,
            equalities: self.equalities.clone(),
            inequalities: self.inequalities.clone(),
        })
    }
}
