//! Explicit linear systems over `𝒥^H`: the join-tree system `MC^H_T`, the
//! all-pairs system `MC^H_∩`, and the affine hull of `MC^H` for
//! downward-closed `H`.

use std::collections::HashSet;
use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactmath::{
    lp_maximize, lp_minimize, rank, same_affine_subspace, LinearSystem, RVector, Rational, Row, Subset,
};
use crate::hypergraph::{is_downward_closed, JoinTree};
use crate::instance::Family;
use crate::lifting::d_expression;

/// Which formula produced a row.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RowTag {
    MultipleChoice,
    VertexEdge,
    TreeIntersection,
    PairIntersection,
    Nonnegativity,
    AffineHull,
}

impl fmt::Display for RowTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RowTag::MultipleChoice => "multiple-choice",
            RowTag::VertexEdge => "vertex-edge",
            RowTag::TreeIntersection => "tree-intersection",
            RowTag::PairIntersection => "pair-intersection",
            RowTag::Nonnegativity => "nonnegativity",
            RowTag::AffineHull => "affine-hull",
        };
        f.write_str(s)
    }
}

/// A linear system with one tag per row.
#[derive(Clone, Debug)]
pub struct RelaxationSystem {
    pub system: LinearSystem,
    pub equality_tags: Vec<RowTag>,
    pub inequality_tags: Vec<RowTag>,
    seen: HashSet<(bool, Row)>,
}

impl RelaxationSystem {
    fn new(fam: &Family) -> Self {
        RelaxationSystem {
            system: LinearSystem::new(fam.space().clone()),
            equality_tags: Vec::new(),
            inequality_tags: Vec::new(),
            seen: HashSet::new(),
        }
    }

    /// Adds a row unless an identical one is already present.
    fn push(&mut self, equality: bool, pairs: &[(Subset, Rational)], rhs: Rational, tag: RowTag) -> Result<()> {
        let coeffs = self.system.dense_row(pairs)?;
        if !self.seen.insert((equality, Row::new(coeffs.clone(), rhs.clone()))) {
            return Ok(());
        }
        if equality {
            self.system.add_equality(coeffs, rhs)?;
            self.equality_tags.push(tag);
        } else {
            self.system.add_inequality(coeffs, rhs)?;
            self.inequality_tags.push(tag);
        }
        Ok(())
    }

    pub fn count(&self, tag: RowTag) -> usize {
        self.equality_tags
            .iter()
            .chain(&self.inequality_tags)
            .filter(|&&t| t == tag)
            .count()
    }

    pub fn contains_equality(&self, row: &Row) -> bool {
        self.seen.contains(&(true, row.clone()))
    }

    /// Tagged equalities, then tagged inequalities.
    pub fn tagged_rows(&self) -> impl Iterator<Item = (bool, &Row, RowTag)> {
        self.system
            .equalities
            .iter()
            .zip(&self.equality_tags)
            .map(|(r, &t)| (true, r, t))
            .chain(
                self.system
                    .inequalities
                    .iter()
                    .zip(&self.inequality_tags)
                    .map(|(r, &t)| (false, r, t)),
            )
    }
}

fn one() -> Rational {
    Rational::one()
}

fn add_common_rows(rs: &mut RelaxationSystem, fam: &Family) -> Result<()> {
    let p = fam.partition();
    for &b in fam.hypergraph().vertices() {
        let pairs: Vec<_> = p.block(b).iter().map(|i| (Subset::singleton(i), one())).collect();
        rs.push(true, &pairs, one(), RowTag::MultipleChoice)?;
    }
    for e in fam.hypergraph().edges() {
        let group = fam.group(e).expect("edge group");
        for b in e.iter() {
            for i in p.block(b).iter() {
                let mut pairs = vec![(Subset::singleton(i), one())];
                pairs.extend(group.iter().filter(|j| j.contains(i)).map(|j| (j.clone(), -one())));
                rs.push(true, &pairs, Rational::zero(), RowTag::VertexEdge)?;
            }
        }
    }
    Ok(())
}

/// `Σ_{J∈𝒥^e, J⊇J₀} w_J − Σ_{J∈𝒥^{e'}, J⊇J₀} w_J = 0` for `J₀ ∈ 𝒥^{e∩e'}`.
fn add_intersection_rows(rs: &mut RelaxationSystem, fam: &Family, e: &Subset, f: &Subset, tag: RowTag) -> Result<()> {
    let common = e.intersection(f);
    if common.len() < 2 {
        return Ok(());
    }
    let (ge, gf) = (fam.group(e).expect("edge group"), fam.group(f).expect("edge group"));
    for j0 in fam.partition().monomials_over(&common) {
        let mut pairs: Vec<_> = ge
            .iter()
            .filter(|j| j0.is_subset_of(j))
            .map(|j| (j.clone(), one()))
            .collect();
        pairs.extend(gf.iter().filter(|j| j0.is_subset_of(j)).map(|j| (j.clone(), -one())));
        rs.push(true, &pairs, Rational::zero(), tag)?;
    }
    Ok(())
}

fn add_nonnegativity(rs: &mut RelaxationSystem, fam: &Family) -> Result<()> {
    for j in fam.space().labels() {
        rs.push(false, &[(j.clone(), -one())], Rational::zero(), RowTag::Nonnegativity)?;
    }
    Ok(())
}

/// The join-tree system: multiple-choice, vertex-edge, tree-intersection
/// and nonnegativity rows.
pub fn build_mc_t(fam: &Family, tree: &JoinTree) -> Result<RelaxationSystem> {
    tree.check_for(fam.hypergraph())?;
    let mut rs = RelaxationSystem::new(fam);
    add_common_rows(&mut rs, fam)?;
    for (e, f) in tree.edge_pairs() {
        add_intersection_rows(&mut rs, fam, e, f, RowTag::TreeIntersection)?;
    }
    add_nonnegativity(&mut rs, fam)?;
    Ok(rs)
}

/// As [`build_mc_t`] but with intersection rows for every pair of edges.
pub fn build_mc_cap(fam: &Family) -> Result<RelaxationSystem> {
    let mut rs = RelaxationSystem::new(fam);
    add_common_rows(&mut rs, fam)?;
    let edges = fam.hypergraph().edges();
    for a in 0..edges.len() {
        for b in a + 1..edges.len() {
            add_intersection_rows(&mut rs, fam, &edges[a], &edges[b], RowTag::PairIntersection)?;
        }
    }
    add_nonnegativity(&mut rs, fam)?;
    Ok(rs)
}

/// The two equality descriptions of `aff MC^H`.
#[derive(Clone, Debug)]
pub struct AffineHull {
    /// `w_J = ℒ Π_{ī∈J∩D}(1 − Σ_{i∈I−ī} w_i) Π_{i∈J∖D} w_i` for `J ∉ 𝒥^H_≤(D)`.
    pub d_form: RelaxationSystem,
    /// `w(I) = 1`, and `w_J = Σ_{J'∈𝒥^{e'}, J'⊃J} w_{J'}` for `e ⊂ e'`,
    /// `|e'| = |e| + 1`, `J ∈ 𝒥^e`.
    pub symmetric: RelaxationSystem,
}

impl AffineHull {
    pub fn rank(&self) -> usize {
        let rows: Vec<Vec<Rational>> = self.d_form.system.equalities.iter().map(|r| r.coeffs.clone()).collect();
        rank(&rows)
    }
}

/// Both affine-hull systems; they are checked to define the same subspace.
pub fn build_affine_hull(fam: &Family, d: &Subset) -> Result<AffineHull> {
    let h = fam.hypergraph();
    if !is_downward_closed(h) {
        return Err(Error::NotDownwardClosed);
    }
    let leq = fam.leq_space(d)?;
    let mut d_form = RelaxationSystem::new(fam);
    for j in fam.space().labels() {
        if leq.contains(j) {
            continue;
        }
        let (a, c) = d_expression(fam, d, j)?;
        let mut pairs = vec![(j.clone(), one())];
        pairs.extend(a.support().map(|(k, v)| (k.clone(), -v.clone())));
        d_form.push(true, &pairs, c, RowTag::AffineHull)?;
    }

    let mut symmetric = RelaxationSystem::new(fam);
    let p = fam.partition();
    for &b in h.vertices() {
        let pairs: Vec<_> = p.block(b).iter().map(|i| (Subset::singleton(i), one())).collect();
        symmetric.push(true, &pairs, one(), RowTag::AffineHull)?;
    }
    for (e, group) in fam.groups() {
        for (f, bigger) in fam.groups() {
            if f.len() != e.len() + 1 || !e.is_subset_of(f) {
                continue;
            }
            for j in group {
                let mut pairs = vec![(j.clone(), one())];
                pairs.extend(bigger.iter().filter(|k| j.is_subset_of(k)).map(|k| (k.clone(), -one())));
                symmetric.push(true, &pairs, Rational::zero(), RowTag::AffineHull)?;
            }
        }
    }
    let n = fam.len();
    if !same_affine_subspace(&d_form.system.equalities, &symmetric.system.equalities, n) {
        return Err(Error::InternalInvariant(
            "the two affine-hull descriptions differ".into(),
        ));
    }
    Ok(AffineHull { d_form, symmetric })
}

/// `min` and `max` of `row·w − rhs` over `sys`.
fn row_range(sys: &LinearSystem, row: &Row) -> Result<(Rational, Rational)> {
    let obj = RVector::new(sys.space().clone(), row.coeffs.clone())?;
    let lo = lp_minimize(sys, &obj)?;
    let hi = lp_maximize(sys, &obj)?;
    match (lo.value, hi.value) {
        (Some(lo), Some(hi)) => Ok((lo - &row.rhs, hi - &row.rhs)),
        _ => Err(if lo.status == crate::exactmath::LpStatus::Infeasible {
            Error::Infeasible
        } else {
            Error::Unbounded
        }),
    }
}

/// An equality of one system that another fails to imply.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnimpliedRow {
    pub row: Row,
    pub min: Rational,
    pub max: Rational,
}

/// Every row of `rows` is implied by `sys`: equalities have LP range
/// exactly `{0}`, inequalities have LP maximum at most 0. Returns the
/// failures.
pub fn unimplied_rows(sys: &LinearSystem, equalities: &[Row], inequalities: &[Row]) -> Result<Vec<UnimpliedRow>> {
    let mut bad = Vec::new();
    for row in equalities {
        let (min, max) = row_range(sys, row)?;
        if !min.is_zero() || !max.is_zero() {
            bad.push(UnimpliedRow {
                row: row.clone(),
                min,
                max,
            });
        }
    }
    for row in inequalities {
        let obj = RVector::new(sys.space().clone(), row.coeffs.clone())?;
        let hi = lp_maximize(sys, &obj)?;
        let Some(max) = hi.value else {
            return Err(Error::Unbounded);
        };
        let max = max - &row.rhs;
        if max > Rational::zero() {
            bad.push(UnimpliedRow {
                row: row.clone(),
                min: max.clone(),
                max,
            });
        }
    }
    Ok(bad)
}

/// Result of comparing `MC^H_∩` with `MC^H_T`.
#[derive(Clone, Debug)]
pub struct CapCheck {
    /// `MC^H_∩` equalities absent from `MC^H_T`.
    pub rows_checked: usize,
    pub failures: Vec<UnimpliedRow>,
}

impl CapCheck {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

/// LP-minimises and maximises every `MC^H_∩` equality missing from
/// `MC^H_T` over `MC^H_T`; both must be exactly zero.
pub fn check_cap_equals_t(fam: &Family, tree: &JoinTree) -> Result<CapCheck> {
    let t = build_mc_t(fam, tree)?;
    let cap = build_mc_cap(fam)?;
    let missing: Vec<Row> = cap
        .system
        .equalities
        .iter()
        .filter(|r| !t.contains_equality(r))
        .cloned()
        .collect();
    let failures = unimplied_rows(&t.system, &missing, &[])?;
    Ok(CapCheck {
        rows_checked: missing.len(),
        failures,
    })
}

/// Mutual LP implication between two systems over the same space.
pub fn same_solution_set(a: &LinearSystem, b: &LinearSystem) -> Result<bool> {
    a.space().ensure_same(b.space())?;
    Ok(unimplied_rows(a, &b.equalities, &b.inequalities)?.is_empty()
        && unimplied_rows(b, &a.equalities, &a.inequalities)?.is_empty())
}
