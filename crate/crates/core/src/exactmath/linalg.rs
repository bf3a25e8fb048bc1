use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{Rational, Row};

/// Scales each row by the lcm of its denominators.
fn integerize(rows: &[Vec<Rational>]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
        })
        .collect()
}

/// Exact rank by fraction-free (Bareiss) elimination.
pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut m = integerize(rows);
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(p, r);
        for i in r + 1..nrows {
            if m[i][c].is_zero() {
                // still needs the Bareiss scaling to keep later divisions exact
                for j in c + 1..ncols {
                    let v = &m[r][c] * &m[i][j];
                    m[i][j] = v / &prev;
                }
                continue;
            }
            for j in c + 1..ncols {
                let v = &m[r][c] * &m[i][j] - &m[i][c] * &m[r][j];
                m[i][j] = v / &prev;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        r += 1;
    }
    r
}

/// Reduced row echelon form; returns the non-zero rows and pivot columns.
pub fn rref(rows: &[Vec<Rational>]) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(p, r);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    Unique(Vec<Rational>),
    /// One particular solution plus the dimension of the solution set.
    Many {
        particular: Vec<Rational>,
        freedom: usize,
    },
    Inconsistent,
}

/// Solves `rows · x = rhs` exactly.
pub fn solve(rows: &[Vec<Rational>], rhs: &[Rational], ncols: usize) -> Solution {
    let aug: Vec<Vec<Rational>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut v = r.clone();
            v.push(b.clone());
            v
        })
        .collect();
    let (red, pivots) = rref(&aug);
    if pivots.last() == Some(&ncols) {
        return Solution::Inconsistent;
    }
    let mut x = vec![Rational::zero(); ncols];
    for (row, &c) in red.iter().zip(&pivots) {
        x[c] = row[ncols].clone();
    }
    if pivots.len() == ncols {
        Solution::Unique(x)
    } else {
        Solution::Many {
            particular: x,
            freedom: ncols - pivots.len(),
        }
    }
}

/// Basis of `{x : rows · x = 0}`.
pub fn nullspace(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let (red, pivots) = rref(rows);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); ncols];
            v[f] = Rational::one();
            for (row, &p) in red.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect()
}

/// Dimension of the affine hull of `points`; `None` when there are none.
pub fn affine_rank(points: &[Vec<Rational>]) -> Option<usize> {
    let (first, rest) = points.split_first()?;
    let diffs: Vec<Vec<Rational>> = rest
        .iter()
        .map(|p| p.iter().zip(first).map(|(a, b)| a - b).collect())
        .collect();
    Some(rank(&diffs))
}

fn augmented(rows: &[Row]) -> Vec<Vec<Rational>> {
    rows.iter()
        .map(|r| {
            let mut v = r.coeffs.clone();
            v.push(r.rhs.clone());
            v
        })
        .collect()
}

fn consistent(rows: &[Row]) -> bool {
    let coeffs: Vec<Vec<Rational>> = rows.iter().map(|r| r.coeffs.clone()).collect();
    rank(&coeffs) == rank(&augmented(rows))
}

/// Whether two equality systems over `ncols` coordinates cut out the same
/// affine subspace (mutual containment via ranks of augmented matrices).
pub fn same_affine_subspace(a: &[Row], b: &[Row], ncols: usize) -> bool {
    let pad = |rows: &[Row]| -> Vec<Row> {
        if rows.is_empty() {
            vec![Row::new(vec![Rational::zero(); ncols], Rational::zero())]
        } else {
            rows.to_vec()
        }
    };
    let (a, b) = (pad(a), pad(b));
    match (consistent(&a), consistent(&b)) {
        (false, false) => return true,
        (true, true) => {}
        _ => return false,
    }
    let ra = rank(&augmented(&a));
    let rb = rank(&augmented(&b));
    let mut both = augmented(&a);
    both.extend(augmented(&b));
    let rab = rank(&both);
    ra == rab && rb == rab
}
