//! Lifting multilinear-polytope inequalities to `MC^H`: `V₀`/`V₁`,
//! selections, the lifted coefficients, the facet condition and the
//! exhaustive comparison against rank certification.

use num_traits::Zero;
use serde::Serialize;

use super::poly::{linearize, ConflictMode, MultilinearPoly};
use crate::error::{Error, Result};
use crate::exactmath::{PointSet, RVector, Rational, Subset};
use crate::hypergraph::{is_downward_closed, Hypergraph};
use crate::instance::{Family, Partition};
use crate::oracle::mp_space;
use crate::polytope::{certify_inequality, IneqStatus};

/// `c·z ≤ δ` over `L(V) ∪ E` (labels are sets of block ids).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MPInequality {
    pub c: RVector,
    pub delta: Rational,
}

impl MPInequality {
    /// From sparse coefficients; every label must be in `L(V) ∪ E`.
    pub fn new(h: &Hypergraph, pairs: &[(Subset, Rational)], delta: Rational) -> Result<Self> {
        Ok(MPInequality {
            c: RVector::from_pairs(mp_space(h), pairs.iter().cloned())?,
            delta,
        })
    }

    /// `c·z − δ` as a polynomial in the block variables `z_I`.
    pub fn slack_poly(&self) -> MultilinearPoly {
        self.c
            .support()
            .fold(MultilinearPoly::constant(-self.delta.clone()), |p, (e, c)| {
                p + MultilinearPoly::monomial(e.clone(), c.clone())
            })
    }

    /// `k·(c, δ)` for `k > 0`.
    pub fn scaled(&self, k: &Rational) -> Self {
        MPInequality {
            c: self.c.scaled(k),
            delta: &self.delta * k,
        }
    }
}

/// `V₀` and `V₁` of an inequality (block ids).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub v0: Vec<usize>,
    pub v1: Vec<usize>,
}

impl Classification {
    /// `V₀ ∩ V₁ ≠ ∅`: only possible for a degenerate (e.g. implicit) face.
    pub fn is_degenerate(&self) -> bool {
        self.v0.iter().any(|b| self.v1.contains(b))
    }
}

/// `V₀ = {I : z_I = 0 ⇒ c·z = δ}` and `V₁ = {I : z_I = 1 ⇒ c·z = δ}` by
/// scanning the 0-1 points of the multilinear polytope.
pub fn compute_v0_v1(ineq: &MPInequality, mpverts: &PointSet) -> Result<Classification> {
    ineq.c.space().ensure_same(mpverts.space())?;
    let space = mpverts.space();
    if mpverts.points().iter().any(|z| ineq.c.dot(z) > ineq.delta) {
        return Err(Error::InequalityInvalid);
    }
    let blocks: Vec<usize> = space
        .labels()
        .iter()
        .filter(|l| l.len() == 1)
        .map(|l| l.as_slice()[0])
        .collect();
    let forced = |b: usize, value: bool| {
        let k = space.position(&Subset::singleton(b)).expect("vertex label");
        mpverts
            .points()
            .iter()
            .filter(|z| z[k].is_zero() != value)
            .all(|z| ineq.c.dot(z) == ineq.delta)
    };
    Ok(Classification {
        v0: blocks.iter().copied().filter(|&b| forced(b, false)).collect(),
        v1: blocks.iter().copied().filter(|&b| forced(b, true)).collect(),
    })
}

/// One `S_I` per block with `∅ ⊂ S_I ⊂ I`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct LiftSelection {
    sets: Vec<Subset>,
}

impl LiftSelection {
    pub fn new(p: &Partition, sets: Vec<Subset>) -> Result<Self> {
        if sets.len() != p.num_blocks() {
            return Err(Error::InvalidSelection(format!(
                "{} sets for {} blocks",
                sets.len(),
                p.num_blocks()
            )));
        }
        for (b, s) in sets.iter().enumerate() {
            let block = p.block(b);
            if s.is_empty() || !s.is_subset_of(block) || s.len() == block.len() {
                return Err(Error::InvalidSelection(format!(
                    "S_I{} = {s} is not a non-empty proper subset of {block}",
                    b + 1
                )));
            }
        }
        Ok(LiftSelection { sets })
    }

    pub fn sets(&self) -> &[Subset] {
        &self.sets
    }

    pub fn set(&self, block: usize) -> &Subset {
        &self.sets[block]
    }

    /// `∪ S_I`.
    pub fn union(&self) -> Subset {
        self.sets.iter().fold(Subset::empty(), |acc, s| acc.union(s))
    }
}

/// Non-empty proper subsets of `block` in colex order.
fn proper_subsets_colex(block: &Subset) -> Vec<Subset> {
    let items = block.as_slice();
    let k = items.len();
    (1u64..(1 << k) - 1)
        .map(|mask| Subset::new((0..k).filter(|b| mask >> b & 1 == 1).map(|b| items[b])))
        .collect()
}

/// `Π_I (2^{|I|} − 2)`, saturating.
pub fn count_selections(p: &Partition) -> u128 {
    p.blocks().iter().fold(1u128, |acc, b| {
        acc.saturating_mul((1u128 << b.len().min(100)).saturating_sub(2))
    })
}

/// Every selection: blocks in order (first block slowest), subsets in colex.
pub fn enumerate_selections(p: &Partition, guard: u128) -> Result<Vec<LiftSelection>> {
    let required = count_selections(p);
    if required > guard {
        return Err(Error::GuardExceeded {
            what: "lift selections",
            required,
            limit: guard,
        });
    }
    let options: Vec<Vec<Subset>> = p.blocks().iter().map(proper_subsets_colex).collect();
    let mut out = vec![Vec::new()];
    for opts in &options {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<Subset>| {
                opts.iter().map(move |s| {
                    let mut v = prefix.clone();
                    v.push(s.clone());
                    v
                })
            })
            .collect();
    }
    Ok(out.into_iter().map(|sets| LiftSelection { sets }).collect())
}

fn require_downward_closed(h: &Hypergraph) -> Result<()> {
    if is_downward_closed(h) {
        Ok(())
    } else {
        Err(Error::NotDownwardClosed)
    }
}

/// `Σ_e c_e ℒ Π_{I∈e} Σ_{i∈S_I} w_i ≤ δ` over `𝒥^H`.
pub fn lift(ineq: &MPInequality, sel: &LiftSelection, fam: &Family) -> Result<(RVector, Rational)> {
    require_downward_closed(fam.hypergraph())?;
    ineq.c.space().ensure_same(&mp_space(fam.hypergraph()))?;
    let p = fam.partition();
    let mut poly = MultilinearPoly::zero();
    for (e, c) in ineq.c.support() {
        let mut term = MultilinearPoly::constant(c.clone());
        for b in e.iter() {
            term = term.mul_in(&MultilinearPoly::sum_of(sel.set(b)), p, ConflictMode::Strict)?;
        }
        poly = poly + term;
    }
    let (a, offset) = linearize(&poly, fam.space())?;
    Ok((a, &ineq.delta - offset))
}

/// `|S_I| = 1` on `V₀` and `|S_I| = |I| − 1` on `V₁`.
pub fn check_condition(sel: &LiftSelection, cls: &Classification, p: &Partition) -> bool {
    cls.v0.iter().all(|&b| sel.set(b).len() == 1) && cls.v1.iter().all(|&b| sel.set(b).len() + 1 == p.block(b).len())
}

/// One selection of a [`LiftReport`].
#[derive(Clone, Debug, Serialize)]
pub struct LiftRow {
    pub selection: LiftSelection,
    pub condition: bool,
    pub status: IneqStatus,
}

impl LiftRow {
    pub fn agrees(&self) -> bool {
        self.condition == (self.status == IneqStatus::Facet)
    }
}

/// Condition verdicts against rank certification for every selection.
#[derive(Clone, Debug, Serialize)]
pub struct LiftReport {
    pub classification: Classification,
    pub rows: Vec<LiftRow>,
}

impl LiftReport {
    pub fn disagreements(&self) -> impl Iterator<Item = &LiftRow> {
        self.rows.iter().filter(|r| !r.agrees())
    }

    pub fn all_valid(&self) -> bool {
        self.rows.iter().all(|r| r.status != IneqStatus::Invalid)
    }

    pub fn passed(&self) -> bool {
        self.all_valid() && self.disagreements().next().is_none()
    }
}

/// Runs every selection of a certified facet through [`lift`] and compares
/// [`check_condition`] with [`certify_inequality`] on `mcverts` (the points
/// of `𝒮^H`).
pub fn verify_lift_theorem(
    ineq: &MPInequality,
    fam: &Family,
    mpverts: &PointSet,
    mcverts: &PointSet,
    guard: u128,
) -> Result<LiftReport> {
    require_downward_closed(fam.hypergraph())?;
    let cert = certify_inequality(&ineq.c, &ineq.delta, mpverts)?;
    if !cert.is_facet() {
        return Err(Error::NotFacet(format!("{:?}", cert.status)));
    }
    let classification = compute_v0_v1(ineq, mpverts)?;
    let p = fam.partition();
    let rows = enumerate_selections(p, guard)?
        .into_iter()
        .map(|selection| {
            let (a, delta) = lift(ineq, &selection, fam)?;
            let status = certify_inequality(&a, &delta, mcverts)?.status;
            Ok(LiftRow {
                condition: check_condition(&selection, &classification, p),
                selection,
                status,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LiftReport { classification, rows })
}

/// One admissible `U` in the projection rank check.
#[derive(Clone, Debug, Serialize)]
pub struct ProjectionRankRow {
    pub u: Subset,
    /// `E_U`, including `∅` when present.
    pub e_u: Vec<Subset>,
    pub rank: Option<usize>,
}

impl ProjectionRankRow {
    pub fn full_dimensional(&self) -> bool {
        self.rank == Some(self.e_u.len() - 1)
    }
}

/// `E_U = {e ∈ L(V) ∪ E ∪ {∅} : e ⊆ V∖U, e ∪ U ∈ L(V) ∪ E}`.
pub fn e_u(h: &Hypergraph, u: &Subset) -> Vec<Subset> {
    std::iter::once(Subset::empty())
        .chain(h.singletons_and_edges())
        .filter(|e| e.intersection(u).is_empty() && h.is_singleton_or_edge(&e.union(u)))
        .collect()
}

/// For a facet `F` and every non-empty `U ⊆ V∖V₁` with `E_U ≠ ∅`: the
/// affine rank of the tight 0-1 points with `z_I = 0` on `U`, projected onto
/// `E_U∖{∅}`. Full dimension means rank `|E_U| − 1`.
pub fn projection_ranks(ineq: &MPInequality, h: &Hypergraph, mpverts: &PointSet) -> Result<Vec<ProjectionRankRow>> {
    require_downward_closed(h)?;
    let cert = certify_inequality(&ineq.c, &ineq.delta, mpverts)?;
    if !cert.is_facet() {
        return Err(Error::NotFacet(format!("{:?}", cert.status)));
    }
    let cls = compute_v0_v1(ineq, mpverts)?;
    let free = Subset::new(h.vertices().iter().copied().filter(|b| !cls.v1.contains(b)));
    let space = mpverts.space();
    let mut rows = Vec::new();
    for u in free.subsets().into_iter().filter(|u| !u.is_empty()) {
        let eu = e_u(h, &u);
        if eu.is_empty() {
            continue;
        }
        let u_pos: Vec<usize> = u
            .iter()
            .map(|b| space.position(&Subset::singleton(b)).expect("vertex label"))
            .collect();
        let target: Vec<usize> = eu
            .iter()
            .filter(|e| !e.is_empty())
            .map(|e| space.position(e).expect("edge label"))
            .collect();
        let projected: Vec<Vec<Rational>> = cert
            .tight
            .iter()
            .map(|&k| &mpverts.points()[k])
            .filter(|z| u_pos.iter().all(|&k| z[k].is_zero()))
            .map(|z| target.iter().map(|&k| z[k].clone()).collect())
            .collect();
        rows.push(ProjectionRankRow {
            u,
            e_u: eu,
            rank: crate::exactmath::affine_rank(&projected),
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::int;
    use crate::instance::{Monomial, RawInstance};
    use crate::oracle::{enumerate_mp_vertices, enumerate_sh};

    fn single_edge(sizes: (usize, usize)) -> Family {
        let (a, b) = sizes;
        RawInstance {
            n: a + b,
            blocks: vec![(1..=a).collect(), (a + 1..=a + b).collect()],
            terms: vec![Monomial::new([1, a + 1], int(1))],
        }
        .validate()
        .unwrap()
        .family()
    }

    fn s(v: &[usize]) -> Subset {
        Subset::new(v.iter().copied())
    }

    fn edge_le_vertex(h: &Hypergraph) -> MPInequality {
        MPInequality::new(h, &[(s(&[0, 1]), int(1)), (s(&[0]), int(-1))], int(0)).unwrap()
    }

    #[test]
    fn v0_v1_on_a_single_edge() {
        let fam = single_edge((2, 2));
        let h = fam.hypergraph();
        let mp = enumerate_mp_vertices(h, 100).unwrap();
        let cls = compute_v0_v1(&edge_le_vertex(h), &mp).unwrap();
        assert_eq!((cls.v0.as_slice(), cls.v1.as_slice()), (&[0][..], &[1][..]));
        let nonneg = MPInequality::new(h, &[(s(&[0, 1]), int(-1))], int(0)).unwrap();
        let cls = compute_v0_v1(&nonneg, &mp).unwrap();
        assert_eq!((cls.v0.as_slice(), cls.v1.as_slice()), (&[0, 1][..], &[][..]));
        let bad = MPInequality::new(h, &[(s(&[0]), int(1))], int(0)).unwrap();
        assert!(matches!(compute_v0_v1(&bad, &mp), Err(Error::InequalityInvalid)));
    }

    #[test]
    fn lifted_coefficients() {
        let fam = single_edge((2, 2));
        let p = fam.partition();
        let sel = LiftSelection::new(p, vec![s(&[1]), s(&[3])]).unwrap();
        let (a, delta) = lift(&edge_le_vertex(fam.hypergraph()), &sel, &fam).unwrap();
        let expect = RVector::from_pairs(fam.space().clone(), [(s(&[1, 3]), int(1)), (s(&[1]), int(-1))]).unwrap();
        assert_eq!((a, delta), (expect, int(0)));
        assert!(LiftSelection::new(p, vec![s(&[1, 2]), s(&[3])]).is_err());
        assert!(LiftSelection::new(p, vec![s(&[]), s(&[3])]).is_err());
    }

    #[test]
    fn condition_examples() {
        let p = Partition::new(5, vec![vec![1, 2, 3], vec![4, 5]]).unwrap();
        let cls = Classification {
            v0: vec![0],
            v1: vec![1],
        };
        let ok = LiftSelection::new(&p, vec![s(&[1]), s(&[4])]).unwrap();
        let wide = LiftSelection::new(&p, vec![s(&[1, 2]), s(&[4])]).unwrap();
        assert!(check_condition(&ok, &cls, &p));
        assert!(!check_condition(&wide, &cls, &p));
        let q = Partition::new(5, vec![vec![1, 2], vec![3, 4, 5]]).unwrap();
        let cls = Classification {
            v0: vec![0],
            v1: vec![1],
        };
        assert!(check_condition(
            &LiftSelection::new(&q, vec![s(&[1]), s(&[3, 5])]).unwrap(),
            &cls,
            &q
        ));
        let none = Classification { v0: vec![], v1: vec![] };
        assert!(enumerate_selections(&p, 100)
            .unwrap()
            .iter()
            .all(|sel| check_condition(sel, &none, &p)));
    }

    #[test]
    fn selections_are_colex() {
        let p = Partition::new(5, vec![vec![1, 2, 3], vec![4, 5]]).unwrap();
        let all = enumerate_selections(&p, 100).unwrap();
        assert_eq!(all.len(), 12);
        let firsts: Vec<String> = all.iter().step_by(2).map(|x| x.set(0).to_string()).collect();
        assert_eq!(firsts, ["{1}", "{2}", "{1,2}", "{3}", "{1,3}", "{2,3}"]);
    }

    #[test]
    fn lift_theorem_on_blocks_3_2() {
        let fam = single_edge((3, 2));
        let h = fam.hypergraph();
        let mp = enumerate_mp_vertices(h, 100).unwrap();
        let sh = enumerate_sh(&fam, 100).unwrap();
        let report = verify_lift_theorem(&edge_le_vertex(h), &fam, &mp, &sh, 100).unwrap();
        assert!(report.passed(), "{report:?}");
        for row in &report.rows {
            assert_eq!(row.condition, row.selection.set(0).len() == 1);
        }
    }

    #[test]
    fn projection_ranks_on_a_single_edge() {
        let fam = single_edge((3, 2));
        let h = fam.hypergraph();
        let mp = enumerate_mp_vertices(h, 100).unwrap();
        let rows = projection_ranks(&edge_le_vertex(h), h, &mp).unwrap();
        assert!(!rows.is_empty());
        assert!(rows.iter().all(ProjectionRankRow::full_dimensional), "{rows:?}");
    }
}
