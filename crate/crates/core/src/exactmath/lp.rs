//! Exact two-phase simplex with Bland's smallest-index rule.
//!
//! A [`LinearSystem`] is rewritten into standard form `A y = b, y ≥ 0`:
//! rows of the form `-k·w_j ≤ 0` become sign constraints, any other
//! inequality receives a slack column, and coordinates without a sign
//! constraint are split into `w⁺ - w⁻`. Phase 1 minimises the sum of
//! artificial variables, drops redundant rows and pivots the remaining
//! artificials out; phase 2 optimises the real objective.

use num_traits::{One, Signed, Zero};

use super::{LinearSystem, RVector, Rational};
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Column {
    /// `sign · w_coord`
    Coord {
        coord: usize,
        sign: i8,
    },
    Slack,
}

/// `A y = b, y ≥ 0` together with the map back to the original coordinates.
#[derive(Clone, Debug)]
pub(crate) struct StandardForm {
    pub a: Vec<Vec<Rational>>,
    pub b: Vec<Rational>,
    pub columns: Vec<Column>,
    pub ncoords: usize,
}

impl StandardForm {
    pub fn from_system(sys: &LinearSystem) -> Self {
        let n = sys.space().len();
        let mut nonneg = vec![false; n];
        let mut general = Vec::new();
        for row in &sys.inequalities {
            match row.sign_constraint() {
                Some(j) => nonneg[j] = true,
                None => general.push(row),
            }
        }
        let mut columns = Vec::new();
        for (j, &nn) in nonneg.iter().enumerate() {
            columns.push(Column::Coord { coord: j, sign: 1 });
            if !nn {
                columns.push(Column::Coord { coord: j, sign: -1 });
            }
        }
        let n_struct = columns.len();
        columns.extend(std::iter::repeat_n(Column::Slack, general.len()));

        let expand = |coeffs: &[Rational]| -> Vec<Rational> {
            let mut out = vec![Rational::zero(); columns.len()];
            for (k, col) in columns[..n_struct].iter().enumerate() {
                if let Column::Coord { coord, sign } = *col {
                    out[k] = if sign > 0 {
                        coeffs[coord].clone()
                    } else {
                        -coeffs[coord].clone()
                    };
                }
            }
            out
        };

        let mut a = Vec::new();
        let mut b = Vec::new();
        for row in &sys.equalities {
            a.push(expand(&row.coeffs));
            b.push(row.rhs.clone());
        }
        for (s, row) in general.iter().enumerate() {
            let mut r = expand(&row.coeffs);
            r[n_struct + s] = Rational::one();
            a.push(r);
            b.push(row.rhs.clone());
        }
        StandardForm {
            a,
            b,
            columns,
            ncoords: n,
        }
    }

    pub fn ncols(&self) -> usize {
        self.columns.len()
    }

    /// Objective over columns for an objective over coordinates.
    pub fn objective(&self, c: &[Rational]) -> Vec<Rational> {
        self.columns
            .iter()
            .map(|col| match *col {
                Column::Coord { coord, sign } if sign > 0 => c[coord].clone(),
                Column::Coord { coord, .. } => -c[coord].clone(),
                Column::Slack => Rational::zero(),
            })
            .collect()
    }

    pub fn recover(&self, y: &[Rational]) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); self.ncoords];
        for (col, v) in self.columns.iter().zip(y) {
            if let Column::Coord { coord, sign } = *col {
                if sign > 0 {
                    x[coord] += v;
                } else {
                    x[coord] -= v;
                }
            }
        }
        x
    }
}

/// Dense simplex tableau in basis coordinates.
#[derive(Clone, Debug)]
pub(crate) struct Tableau {
    /// `B⁻¹ A`
    pub t: Vec<Vec<Rational>>,
    /// `B⁻¹ b`
    pub rhs: Vec<Rational>,
    /// basic column of each row
    pub basis: Vec<usize>,
    /// reduced costs `c_j - c_B B⁻¹ A_j` (maximisation)
    pub reduced: Vec<Rational>,
    pub value: Rational,
    pub pivots: usize,
}

impl Tableau {
    pub fn ncols(&self) -> usize {
        self.reduced.len()
    }

    pub fn pivot(&mut self, r: usize, j: usize) {
        let inv = self.t[r][j].recip();
        for x in self.t[r].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        self.rhs[r] *= &inv;
        let prow = self.t[r].clone();
        let prhs = self.rhs[r].clone();
        for i in 0..self.t.len() {
            if i == r || self.t[i][j].is_zero() {
                continue;
            }
            let f = self.t[i][j].clone();
            for (x, y) in self.t[i].iter_mut().zip(&prow) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
            self.rhs[i] -= &f * &prhs;
        }
        if !self.reduced[j].is_zero() {
            let f = self.reduced[j].clone();
            for (x, y) in self.reduced.iter_mut().zip(&prow) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
            self.value += &f * &prhs;
        }
        self.basis[r] = j;
        self.pivots += 1;
    }

    pub fn set_objective(&mut self, c: &[Rational]) {
        let mut reduced = c.to_vec();
        let mut value = Rational::zero();
        for (i, &bj) in self.basis.iter().enumerate() {
            let cb = &c[bj];
            if cb.is_zero() {
                continue;
            }
            for (x, y) in reduced.iter_mut().zip(&self.t[i]) {
                if !y.is_zero() {
                    *x -= cb * y;
                }
            }
            value += cb * &self.rhs[i];
        }
        self.reduced = reduced;
        self.value = value;
    }

    /// Bland's rule maximisation over columns `< limit`. Returns `false` if
    /// unbounded.
    pub fn optimize(&mut self, limit: usize) -> bool {
        loop {
            let Some(j) = (0..limit).find(|&j| self.reduced[j].is_positive()) else {
                return true;
            };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.t.len() {
                if !self.t[i][j].is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / &self.t[i][j];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, j),
                None => return false,
            }
        }
    }

    pub fn primal(&self) -> Vec<Rational> {
        let mut y = vec![Rational::zero(); self.ncols()];
        for (i, &bj) in self.basis.iter().enumerate() {
            y[bj] = self.rhs[i].clone();
        }
        y
    }
}

/// Phase 1: a feasible basis for `sf`, redundant rows removed and no
/// artificial columns left; `None` if infeasible.
pub(crate) fn phase_one(sf: &StandardForm) -> Option<Tableau> {
    let m = sf.a.len();
    let n = sf.ncols();
    let mut t = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    for (row, b) in sf.a.iter().zip(&sf.b) {
        let flip = b.is_negative();
        let mut r: Vec<Rational> = row.iter().map(|x| if flip { -x.clone() } else { x.clone() }).collect();
        r.extend(std::iter::repeat_n(Rational::zero(), m));
        t.push(r);
        rhs.push(if flip { -b.clone() } else { b.clone() });
    }
    for (i, row) in t.iter_mut().enumerate() {
        row[n + i] = Rational::one();
    }
    let mut tab = Tableau {
        t,
        rhs,
        basis: (n..n + m).collect(),
        reduced: vec![Rational::zero(); n + m],
        value: Rational::zero(),
        pivots: 0,
    };
    let mut c = vec![Rational::zero(); n];
    c.extend(std::iter::repeat_n(-Rational::one(), m));
    tab.set_objective(&c);
    tab.optimize(n + m);
    if tab.value.is_negative() {
        return None;
    }
    // drive artificials out or drop their rows
    let mut r = 0;
    while r < tab.t.len() {
        if tab.basis[r] < n {
            r += 1;
            continue;
        }
        match (0..n).find(|&j| !tab.t[r][j].is_zero()) {
            Some(j) => {
                tab.pivot(r, j);
                r += 1;
            }
            None => {
                tab.t.remove(r);
                tab.rhs.remove(r);
                tab.basis.remove(r);
            }
        }
    }
    for row in tab.t.iter_mut() {
        row.truncate(n);
    }
    tab.reduced.truncate(n);
    Some(tab)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Result of an exact LP solve.
#[derive(Clone, Debug)]
pub struct LpOutcome {
    pub status: LpStatus,
    pub value: Option<Rational>,
    /// A basic optimal solution (a vertex when the feasible set is a polytope).
    pub optimizer: Option<RVector>,
    pub pivots: usize,
}

impl LpOutcome {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

/// Maximises `objective · w` over `sys`.
pub fn lp_maximize(sys: &LinearSystem, objective: &RVector) -> Result<LpOutcome> {
    sys.space().ensure_same(objective.space())?;
    let sf = StandardForm::from_system(sys);
    let Some(mut tab) = phase_one(&sf) else {
        return Ok(LpOutcome {
            status: LpStatus::Infeasible,
            value: None,
            optimizer: None,
            pivots: 0,
        });
    };
    let c = sf.objective(objective.values());
    tab.set_objective(&c);
    let bounded = tab.optimize(sf.ncols());
    if !bounded {
        return Ok(LpOutcome {
            status: LpStatus::Unbounded,
            value: None,
            optimizer: None,
            pivots: tab.pivots,
        });
    }
    let x = sf.recover(&tab.primal());
    let value = objective.dot(&x);
    debug_assert_eq!(value, tab.value);
    Ok(LpOutcome {
        status: LpStatus::Optimal,
        value: Some(value),
        optimizer: Some(RVector::new(sys.space().clone(), x)?),
        pivots: tab.pivots,
    })
}

/// Minimises `objective · w` over `sys`.
pub fn lp_minimize(sys: &LinearSystem, objective: &RVector) -> Result<LpOutcome> {
    let neg = objective.scaled(&-Rational::one());
    let mut out = lp_maximize(sys, &neg)?;
    out.value = out.value.map(|v| -v);
    Ok(out)
}
