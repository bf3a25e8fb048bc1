//! Brute-force ground truth: the feasible choices `𝒳`, the multilinear set
//! `𝒮^H`, the vertices of the multilinear polytope over `L(V) ∪ E`, the
//! vertices of `MC^H_≤(D)`, and exhaustive optima.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactmath::{PointSet, Rational, Space, Subset};
use crate::hypergraph::Hypergraph;
use crate::instance::{Family, Instance, Partition};

/// Default cap on `Π |I|` (and on `2^{|V|}`) for exhaustive enumeration.
pub const DEFAULT_POINT_GUARD: u128 = 4096;

/// One feasible point of `𝒳`: the chosen index of every block, in block order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ChoicePoint {
    choice: Vec<usize>,
}

impl ChoicePoint {
    /// Checks that `choice[b]` lies in block `b` for every block.
    pub fn new(p: &Partition, choice: Vec<usize>) -> Result<Self> {
        if choice.len() != p.num_blocks() {
            return Err(Error::InvalidInstance(format!(
                "{} choices for {} blocks",
                choice.len(),
                p.num_blocks()
            )));
        }
        if let Some(b) = (0..choice.len()).find(|&b| !p.block(b).contains(choice[b])) {
            return Err(Error::InvalidInstance(format!(
                "index {} is not in block I{}",
                choice[b],
                b + 1
            )));
        }
        Ok(ChoicePoint { choice })
    }

    pub fn choice(&self) -> &[usize] {
        &self.choice
    }

    /// The chosen indices as a set.
    pub fn support(&self) -> Subset {
        Subset::new(self.choice.iter().copied())
    }

    /// `x` as a 0-1 vector over `[n]`; entry 0 is unused.
    pub fn x(&self, n: usize) -> Vec<bool> {
        let mut x = vec![false; n + 1];
        for &i in &self.choice {
            x[i] = true;
        }
        x
    }

    /// `x_1 … x_n` as a digit string.
    pub fn x_string(&self, n: usize) -> String {
        self.x(n)[1..].iter().map(|&b| if b { '1' } else { '0' }).collect()
    }
}

fn check_budget(what: &'static str, required: u128, limit: u128) -> Result<()> {
    if required > limit {
        return Err(Error::GuardExceeded { what, required, limit });
    }
    Ok(())
}

/// `|𝒳| = Π |I|`, saturating.
pub fn count_x(p: &Partition) -> u128 {
    p.blocks()
        .iter()
        .fold(1u128, |acc, b| acc.saturating_mul(b.len() as u128))
}

/// Every point of `𝒳`, ordered lexicographically on the tuple of chosen
/// indices (block `I1` varies slowest).
pub fn enumerate_x(p: &Partition, guard: u128) -> Result<Vec<ChoicePoint>> {
    check_budget("feasible choice points", count_x(p), guard)?;
    let blocks: Vec<&[usize]> = p.blocks().iter().map(Subset::as_slice).collect();
    let mut out = Vec::new();
    let mut pos = vec![0usize; blocks.len()];
    loop {
        out.push(ChoicePoint {
            choice: pos.iter().zip(&blocks).map(|(&k, b)| b[k]).collect(),
        });
        let mut b = blocks.len();
        loop {
            if b == 0 {
                return Ok(out);
            }
            b -= 1;
            pos[b] += 1;
            if pos[b] < blocks[b].len() {
                break;
            }
            pos[b] = 0;
        }
    }
}

/// `w_J = Π_{i∈J} x_i` over the coordinates of `fam`.
pub fn w_of(x: &ChoicePoint, fam: &Family) -> Vec<Rational> {
    let chosen = x.support();
    fam.space()
        .labels()
        .iter()
        .map(|j| {
            if j.is_subset_of(&chosen) {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
        .collect()
}

/// Reads a choice back from the singleton coordinates of a 0-1 point.
/// `None` unless every block has exactly one singleton at 1 and the rest at 0.
pub fn choice_of_w(fam: &Family, w: &[Rational]) -> Option<ChoicePoint> {
    let p = fam.partition();
    let mut choice = Vec::with_capacity(p.num_blocks());
    for block in p.blocks() {
        let mut pick = None;
        for i in block.iter() {
            let v = &w[fam.space().position(&Subset::singleton(i))?];
            if v.is_one() {
                if pick.is_some() {
                    return None;
                }
                pick = Some(i);
            } else if !v.is_zero() {
                return None;
            }
        }
        choice.push(pick?);
    }
    Some(ChoicePoint { choice })
}

/// `𝒮^H`, in the order of [`enumerate_x`].
pub fn enumerate_sh(fam: &Family, guard: u128) -> Result<PointSet> {
    let pts = enumerate_x(fam.partition(), guard)?
        .iter()
        .map(|x| w_of(x, fam))
        .collect();
    PointSet::new(fam.space().clone(), pts)
}

/// Coordinates `L(V) ∪ E` of the multilinear polytope, labelled by block ids.
pub fn mp_space(h: &Hypergraph) -> Space {
    Space::new(h.singletons_and_edges()).expect("vertices and edges are distinct labels")
}

/// The `2^{|V|}` points `z ∈ {0,1}^{L(V)∪E}` with `z_e = Π_{I∈e} z_I`;
/// ordered by the 0-1 vector over `V` read as a binary number, first vertex
/// most significant.
pub fn enumerate_mp_vertices(h: &Hypergraph, guard: u128) -> Result<PointSet> {
    let nv = h.vertices().len();
    let required = if nv >= 127 { u128::MAX } else { 1u128 << nv };
    check_budget("multilinear 0-1 points", required, guard)?;
    let space = mp_space(h);
    let pts = (0..required)
        .map(|mask| {
            let on: Subset = Subset::new(
                (0..nv)
                    .filter(|k| mask >> (nv - 1 - k) & 1 == 1)
                    .map(|k| h.vertices()[k]),
            );
            space
                .labels()
                .iter()
                .map(|e| {
                    if e.is_subset_of(&on) {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        })
        .collect();
    PointSet::new(space, pts)
}

/// The 0-1 points over `𝒥^H_≤(D)` with `v(I∖D) ≤ 1` per block and
/// `v_J = Π_{i∈J} v_i`, generated directly from that description.
pub fn enumerate_mcleq_vertices(fam: &Family, d: &Subset, guard: u128) -> Result<PointSet> {
    let space = fam.leq_space(d)?;
    let p = fam.partition();
    check_budget("MC_leq vertices", count_x(p), guard)?;
    // per block: `None` (nothing outside D) or one index of I∖D
    let options: Vec<Vec<Option<usize>>> = p
        .blocks()
        .iter()
        .map(|b| {
            std::iter::once(None)
                .chain(b.iter().filter(|&i| !d.contains(i)).map(Some))
                .collect()
        })
        .collect();
    let mut pts = Vec::new();
    let mut pos = vec![0usize; options.len()];
    loop {
        let on = Subset::new(pos.iter().zip(&options).filter_map(|(&k, o)| o[k]));
        pts.push(
            space
                .labels()
                .iter()
                .map(|j| {
                    if j.is_subset_of(&on) {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect(),
        );
        let mut b = options.len();
        loop {
            if b == 0 {
                return PointSet::new(space, pts);
            }
            b -= 1;
            pos[b] += 1;
            if pos[b] < options[b].len() {
                break;
            }
            pos[b] = 0;
        }
    }
}

/// Exact maximum of `f` over `𝒳`; the first maximiser in [`enumerate_x`]
/// order wins ties.
pub fn brute_optimum(inst: &Instance, guard: u128) -> Result<(Rational, ChoicePoint)> {
    let n = inst.partition().n();
    let mut best: Option<(Rational, ChoicePoint)> = None;
    for x in enumerate_x(inst.partition(), guard)? {
        let v = inst.evaluate(&x.x(n));
        if best.as_ref().is_none_or(|(b, _)| v > *b) {
            best = Some((v, x));
        }
    }
    Ok(best.expect("a partition has at least one feasible point"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{dot, int};
    use crate::instance::{Monomial, RawInstance};
    use std::collections::HashSet;

    fn inst(n: usize, blocks: &[&[usize]], terms: &[(&[usize], i64)]) -> Instance {
        RawInstance {
            n,
            blocks: blocks.iter().map(|b| b.to_vec()).collect(),
            terms: terms
                .iter()
                .map(|(t, c)| Monomial::new(Subset::new(t.iter().copied()), int(*c)))
                .collect(),
        }
        .validate()
        .unwrap()
    }

    fn p22() -> Instance {
        inst(4, &[&[1, 2], &[3, 4]], &[(&[1, 3], 1)])
    }

    fn tri() -> Instance {
        let mut terms: Vec<(&[usize], i64)> = Vec::new();
        for t in [[1, 4], [2, 3], [3, 6], [4, 5], [1, 6], [2, 5]].iter() {
            terms.push((t, 1));
        }
        inst(6, &[&[1, 2], &[3, 4], &[5, 6]], &terms)
    }

    #[test]
    fn choice_counts() {
        let p = p22();
        let xs = enumerate_x(p.partition(), DEFAULT_POINT_GUARD).unwrap();
        assert_eq!(xs.len(), 4);
        assert_eq!(xs[0].choice(), &[1, 3]);
        assert_eq!(xs[3].choice(), &[2, 4]);
        let p32 = Partition::new(5, vec![vec![1, 2, 3], vec![4, 5]]).unwrap();
        assert_eq!(enumerate_x(&p32, 100).unwrap().len(), 6);
        let path3 = Partition::new(6, vec![vec![1, 2], vec![3, 4], vec![5, 6]]).unwrap();
        assert_eq!(enumerate_x(&path3, 100).unwrap().len(), 8);
        assert!(matches!(
            enumerate_x(&path3, 7),
            Err(Error::GuardExceeded {
                required: 8,
                limit: 7,
                ..
            })
        ));
    }

    #[test]
    fn w_of_examples() {
        let p = p22();
        let fam = p.family();
        let x = ChoicePoint::new(p.partition(), vec![1, 3]).unwrap();
        assert_eq!(x.x_string(4), "1010");
        let w = w_of(&x, &fam);
        let ones: Vec<String> = fam
            .space()
            .labels()
            .iter()
            .zip(&w)
            .filter(|(_, v)| v.is_one())
            .map(|(l, _)| l.to_string())
            .collect();
        assert_eq!(ones, ["{1}", "{3}", "{1,3}"]);
        assert_eq!(choice_of_w(&fam, &w), Some(x));
    }

    #[test]
    fn w_of_is_injective_and_rows_sum_to_one() {
        for i in [p22(), tri()] {
            let fam = i.family();
            let sh = enumerate_sh(&fam, DEFAULT_POINT_GUARD).unwrap();
            let distinct: HashSet<_> = sh.points().iter().collect();
            assert_eq!(distinct.len(), sh.len());
            for w in sh.points() {
                for (_, group) in fam.groups() {
                    let s: Rational = group.iter().map(|j| w[fam.space().position(j).unwrap()].clone()).sum();
                    assert_eq!(s, int(1));
                }
            }
        }
    }

    #[test]
    fn vertex_counts() {
        let p = p22();
        let fam = p.family();
        assert_eq!(enumerate_sh(&fam, 100).unwrap().len(), 4);
        assert_eq!(enumerate_mp_vertices(fam.hypergraph(), 100).unwrap().len(), 4);
        let leq = enumerate_mcleq_vertices(&fam, &Subset::from([2, 4]), 100).unwrap();
        assert_eq!(leq.len(), 4);
        assert_eq!(leq.dim(), Some(3));
        assert_eq!(enumerate_sh(&tri().family(), 100).unwrap().len(), 8);
        let empty = inst(4, &[&[1, 2], &[3, 4]], &[]);
        assert_eq!(enumerate_sh(&empty.family(), 100).unwrap().len(), 4);
    }

    #[test]
    fn mcleq_vertices_are_projections_of_sh() {
        let p = p22();
        let fam = p.family();
        let d = Subset::from([2, 4]);
        let projected = enumerate_sh(&fam, 100)
            .unwrap()
            .project(&fam.leq_space(&d).unwrap())
            .unwrap();
        let direct = enumerate_mcleq_vertices(&fam, &d, 100).unwrap();
        assert!(projected.same_points(&direct));
    }

    #[test]
    fn brute_optima() {
        let (v, x) = brute_optimum(&p22(), 100).unwrap();
        assert_eq!(v, int(1));
        assert_eq!(x.x_string(4), "1010");
        let zero = inst(4, &[&[1, 2], &[3, 4]], &[(&[1, 3], 0)]);
        let (v, x) = brute_optimum(&zero, 100).unwrap();
        assert_eq!(v, int(0));
        assert_eq!(x.choice(), &[1, 3]);
        let t = tri();
        let (v, _) = brute_optimum(&t, 100).unwrap();
        assert_eq!(v, int(2));
        let fam = t.family();
        let a = t.objective(&fam).unwrap();
        let best = enumerate_sh(&fam, 100)
            .unwrap()
            .points()
            .iter()
            .map(|w| dot(a.values(), w))
            .max()
            .unwrap();
        assert_eq!(best, int(2));
    }
}
