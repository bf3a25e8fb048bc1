//! Exact vertex enumeration for small bounded systems.
//!
//! [`enumerate_vertices`] walks the graph of lexicographically feasible
//! bases. The right-hand side is perturbed symbolically by `B₀·(ε, ε², …)`
//! around the phase-1 basis `B₀`, which makes every basis nondegenerate; the
//! perturbed polytope is simple, its edge graph is connected, and every
//! vertex of the original polytope is the `ε → 0` image of at least one
//! lex-feasible basis. The walk pivots forward and back exactly, so it only
//! ever holds one tableau.
//!
//! [`enumerate_vertices_by_subsystems`] is the literal definition: every
//! full-rank tight subsystem, solved and checked. It is exponential and only
//! meant as a cross-check.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashSet};

use num_traits::{Signed, Zero};

use super::lp::{phase_one, StandardForm, Tableau};
use super::{rank, solve, LinearSystem, PointSet, Rational, Solution};
use crate::error::{Error, Result};

/// Default cap on the number of coordinates for vertex enumeration.
pub const DEFAULT_VERTEX_GUARD: usize = 24;

fn basis_key(basis: &[usize]) -> Vec<u64> {
    let words = basis.iter().max().map_or(0, |m| m / 64 + 1);
    let mut key = vec![0u64; words];
    for &b in basis {
        key[b / 64] |= 1 << (b % 64);
    }
    key
}

/// Tableau plus the perturbation columns `B⁻¹ B₀`.
struct LexWalker {
    tab: Tableau,
    /// row i: `(B⁻¹ b)_i` followed by row i of `B⁻¹ B₀`
    lex: Vec<Vec<Rational>>,
}

impl LexWalker {
    fn new(tab: Tableau) -> Self {
        let m = tab.t.len();
        let lex = (0..m)
            .map(|i| {
                let mut row = vec![Rational::zero(); m + 1];
                row[0] = tab.rhs[i].clone();
                row[i + 1] = Rational::from_integer(1.into());
                row
            })
            .collect();
        LexWalker { tab, lex }
    }

    /// Compares `lex[i] / t[i][j]` with `lex[k] / t[k][j]` (both pivots positive).
    fn cmp_ratio(&self, i: usize, k: usize, j: usize) -> Ordering {
        let (ti, tk) = (&self.tab.t[i][j], &self.tab.t[k][j]);
        for (a, b) in self.lex[i].iter().zip(&self.lex[k]) {
            let ord = (a * tk).cmp(&(b * ti));
            if ord != Ordering::Equal {
                return ord;
            }
        }
        Ordering::Equal
    }

    /// Leaving row for entering column `j` under the lexicographic ratio test.
    fn leaving_row(&self, j: usize) -> Option<usize> {
        let mut best: Option<usize> = None;
        for i in 0..self.tab.t.len() {
            if !self.tab.t[i][j].is_positive() {
                continue;
            }
            best = match best {
                None => Some(i),
                Some(b) if self.cmp_ratio(i, b, j) == Ordering::Less => Some(i),
                keep => keep,
            };
        }
        best
    }

    fn pivot(&mut self, r: usize, j: usize) {
        let p = self.tab.t[r][j].clone();
        for x in self.lex[r].iter_mut() {
            *x /= &p;
        }
        let prow = self.lex[r].clone();
        for i in 0..self.lex.len() {
            if i == r || self.tab.t[i][j].is_zero() {
                continue;
            }
            let f = self.tab.t[i][j].clone();
            for (x, y) in self.lex[i].iter_mut().zip(&prow) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        self.tab.pivot(r, j);
    }

    fn basic_solution(&self) -> Vec<Rational> {
        let mut y = vec![Rational::zero(); self.tab.ncols()];
        for (i, &bj) in self.tab.basis.iter().enumerate() {
            y[bj] = self.lex[i][0].clone();
        }
        y
    }
}

fn check_guard(sys: &LinearSystem, guard: usize) -> Result<()> {
    if sys.space().len() > guard {
        return Err(Error::GuardExceeded {
            what: "vertex enumeration coordinates",
            required: sys.space().len() as u128,
            limit: guard as u128,
        });
    }
    Ok(())
}

/// All vertices of the (bounded) feasible set of `sys`, sorted
/// lexicographically. Refuses systems with more than `guard` coordinates.
pub fn enumerate_vertices(sys: &LinearSystem, guard: usize) -> Result<PointSet> {
    check_guard(sys, guard)?;
    let sf = StandardForm::from_system(sys);
    let Some(tab) = phase_one(&sf) else {
        return PointSet::new(sys.space().clone(), Vec::new());
    };
    let mut walker = LexWalker::new(tab);
    let ncols = sf.ncols();

    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    let mut found: BTreeSet<Vec<Rational>> = BTreeSet::new();
    seen.insert(basis_key(&walker.tab.basis));
    found.insert(sf.recover(&walker.basic_solution()));

    // each frame: next column to try, and the pivot undoing the step into it
    let mut stack: Vec<(usize, Option<(usize, usize)>)> = vec![(0, None)];
    while let Some(frame) = stack.last_mut() {
        let j = frame.0;
        if j == ncols {
            let undo = frame.1;
            stack.pop();
            if let Some((r, col)) = undo {
                walker.pivot(r, col);
            }
            continue;
        }
        frame.0 += 1;
        if walker.tab.basis.contains(&j) {
            continue;
        }
        let Some(r) = walker.leaving_row(j) else {
            continue;
        };
        let mut next = walker.tab.basis.clone();
        let leaving = next[r];
        next[r] = j;
        if !seen.insert(basis_key(&next)) {
            continue;
        }
        walker.pivot(r, j);
        found.insert(sf.recover(&walker.basic_solution()));
        stack.push((0, Some((r, leaving))));
    }

    if let Some(bad) = found.iter().find(|p| !sys.satisfies(p)) {
        return Err(Error::InternalInvariant(format!(
            "enumerated vertex violates the system: {bad:?}"
        )));
    }
    // split free coordinates can yield basic points that are not vertices
    let points: Vec<Vec<Rational>> = found.into_iter().filter(|p| is_vertex(sys, p)).collect();
    PointSet::new(sys.space().clone(), points)
}

/// Tight rows of a feasible point have full column rank.
pub fn is_vertex(sys: &LinearSystem, point: &[Rational]) -> bool {
    let mut tight: Vec<Vec<Rational>> = sys.equalities.iter().map(|r| r.coeffs.clone()).collect();
    tight.extend(
        sys.inequalities
            .iter()
            .filter(|r| r.lhs(point) == r.rhs)
            .map(|r| r.coeffs.clone()),
    );
    rank(&tight) == sys.space().len()
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i as u128 + 1))
}

/// Vertices by exhaustive search over tight subsystems: every choice of
/// inequality rows that, together with all equalities, has full column
/// rank is solved and kept if feasible. `budget` caps the number of
/// subsystems examined.
pub fn enumerate_vertices_by_subsystems(sys: &LinearSystem, budget: u128) -> Result<PointSet> {
    let n = sys.space().len();
    let eq_rows: Vec<Vec<Rational>> = sys.equalities.iter().map(|r| r.coeffs.clone()).collect();
    let eq_rank = rank(&eq_rows);
    let need = n - eq_rank;
    let m = sys.inequalities.len();
    let work = binomial(m, need);
    if work > budget {
        return Err(Error::GuardExceeded {
            what: "tight subsystems",
            required: work,
            limit: budget,
        });
    }
    let mut found = BTreeSet::new();
    let mut pick: Vec<usize> = (0..need).collect();
    if need <= m {
        loop {
            let mut rows = eq_rows.clone();
            let mut rhs: Vec<Rational> = sys.equalities.iter().map(|r| r.rhs.clone()).collect();
            for &i in &pick {
                rows.push(sys.inequalities[i].coeffs.clone());
                rhs.push(sys.inequalities[i].rhs.clone());
            }
            if let Solution::Unique(x) = solve(&rows, &rhs, n) {
                if sys.satisfies(&x) {
                    found.insert(x);
                }
            }
            // next combination
            let mut k = need;
            loop {
                if k == 0 {
                    return PointSet::new(sys.space().clone(), found.into_iter().collect());
                }
                k -= 1;
                if pick[k] < m - need + k {
                    pick[k] += 1;
                    for q in k + 1..need {
                        pick[q] = pick[q - 1] + 1;
                    }
                    break;
                }
            }
        }
    }
    PointSet::new(sys.space().clone(), found.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{frac, int, Space, Subset};

    fn space(n: usize) -> Space {
        Space::new((1..=n).map(Subset::singleton).collect()).unwrap()
    }

    #[test]
    fn segment_vertices() {
        let mut sys = LinearSystem::new(space(2));
        sys.add_equality(vec![int(1), int(1)], int(1)).unwrap();
        sys.add_nonnegativity();
        let v = enumerate_vertices(&sys, DEFAULT_VERTEX_GUARD).unwrap();
        assert_eq!(v.points(), &[vec![int(0), int(1)], vec![int(1), int(0)]]);
    }

    #[test]
    fn guard_is_enforced() {
        let mut sys = LinearSystem::new(space(5));
        sys.add_nonnegativity();
        let err = enumerate_vertices(&sys, 4).unwrap_err();
        assert!(matches!(
            err,
            Error::GuardExceeded {
                required: 5,
                limit: 4,
                ..
            }
        ));
    }

    #[test]
    fn degenerate_pyramid_matches_brute_force() {
        // square pyramid: apex is degenerate (4 facets meet)
        let mut sys = LinearSystem::new(space(3));
        let rows: [([i64; 3], i64); 5] = [
            ([0, 0, -1], 0),
            ([2, 0, 1], 2),
            ([-2, 0, 1], 2),
            ([0, 2, 1], 2),
            ([0, -2, 1], 2),
        ];
        for (c, b) in rows {
            sys.add_inequality(c.iter().map(|&x| int(x)).collect(), int(b)).unwrap();
        }
        let v = enumerate_vertices(&sys, DEFAULT_VERTEX_GUARD).unwrap();
        let brute = enumerate_vertices_by_subsystems(&sys, 1000).unwrap();
        assert_eq!(v.len(), 5);
        assert!(v.same_points(&brute));
        assert!(v.contains(&[int(0), int(0), int(2)]));
    }

    #[test]
    fn fractional_vertex_is_found() {
        // x + y ≤ 1, x - y ≤ 0, x, y ≥ 0 has the vertex (1/2, 1/2)
        let mut sys = LinearSystem::new(space(2));
        sys.add_inequality(vec![int(1), int(1)], int(1)).unwrap();
        sys.add_inequality(vec![int(1), int(-1)], int(0)).unwrap();
        sys.add_nonnegativity();
        let v = enumerate_vertices(&sys, DEFAULT_VERTEX_GUARD).unwrap();
        assert!(v.contains(&[frac(1, 2), frac(1, 2)]));
        assert!(v.same_points(&enumerate_vertices_by_subsystems(&sys, 100).unwrap()));
    }

    #[test]
    fn infeasible_system_has_no_vertices() {
        let mut sys = LinearSystem::new(space(1));
        sys.add_equality(vec![int(1)], int(-1)).unwrap();
        sys.add_nonnegativity();
        assert!(enumerate_vertices(&sys, 8).unwrap().is_empty());
    }

    #[test]
    fn every_vertex_is_cut_out_by_tight_rows() {
        let mut sys = LinearSystem::new(space(3));
        sys.add_equality(vec![int(1), int(1), int(1)], int(1)).unwrap();
        sys.add_inequality(vec![int(1), int(0), int(0)], frac(1, 2)).unwrap();
        sys.add_nonnegativity();
        let v = enumerate_vertices(&sys, 8).unwrap();
        for p in v.points() {
            let mut tight: Vec<Vec<Rational>> = sys.equalities.iter().map(|r| r.coeffs.clone()).collect();
            tight.extend(
                sys.inequalities
                    .iter()
                    .filter(|r| r.lhs(p) == r.rhs)
                    .map(|r| r.coeffs.clone()),
            );
            assert_eq!(rank(&tight), 3, "{p:?}");
        }
        assert_eq!(v.len(), 4);
    }
}
