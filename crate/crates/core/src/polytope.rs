//! Certification over V-representations: validity, tightness, implicit
//! equalities and facets by affine rank; hull membership by LP.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactmath::{enumerate_vertices, lp_maximize, LinearSystem, PointSet, RVector, Rational, Space, Subset};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IneqStatus {
    Invalid,
    ValidNotTight,
    ImplicitEquality,
    Face,
    Facet,
}

/// Outcome of [`certify_inequality`]. `face_dim` is -1 when nothing is tight.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IneqCertificate {
    pub status: IneqStatus,
    /// Indices (into the vertex list) of the tight vertices.
    pub tight: Vec<usize>,
    pub face_dim: i64,
    pub polytope_dim: i64,
}

impl IneqCertificate {
    pub fn is_facet(&self) -> bool {
        self.status == IneqStatus::Facet
    }

    pub fn is_valid(&self) -> bool {
        self.status != IneqStatus::Invalid
    }
}

fn dim_of(points: &PointSet) -> i64 {
    points.dim().map_or(-1, |d| d as i64)
}

/// Classifies `a·w ≤ δ` against `conv(vertices)`.
pub fn certify_inequality(a: &RVector, delta: &Rational, vertices: &PointSet) -> Result<IneqCertificate> {
    a.space().ensure_same(vertices.space())?;
    if vertices.is_empty() {
        return Err(Error::InvalidInstance("certification needs at least one vertex".into()));
    }
    let polytope_dim = dim_of(vertices);
    let mut tight = Vec::new();
    let mut valid = true;
    for (k, v) in vertices.points().iter().enumerate() {
        let lhs = a.dot(v);
        if lhs > *delta {
            valid = false;
        } else if lhs == *delta {
            tight.push(k);
        }
    }
    let tight_pts: Vec<Vec<Rational>> = tight.iter().map(|&k| vertices.points()[k].clone()).collect();
    let face_dim = crate::exactmath::affine_rank(&tight_pts).map_or(-1, |d| d as i64);
    let status = if !valid {
        IneqStatus::Invalid
    } else if tight.is_empty() {
        IneqStatus::ValidNotTight
    } else if tight.len() == vertices.len() {
        IneqStatus::ImplicitEquality
    } else if face_dim == polytope_dim - 1 {
        IneqStatus::Facet
    } else {
        IneqStatus::Face
    };
    Ok(IneqCertificate {
        status,
        tight,
        face_dim,
        polytope_dim,
    })
}

/// Answer of [`member`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    /// Convex multipliers, one per vertex, reproducing the point.
    Inside { multipliers: Vec<Rational> },
    /// `a·v ≤ δ` for every vertex while `a·p > δ`.
    Outside { a: RVector, delta: Rational },
}

impl Membership {
    pub fn is_inside(&self) -> bool {
        matches!(self, Membership::Inside { .. })
    }
}

fn index_space(prefix: usize, k: usize) -> Space {
    Space::new((0..k).map(|i| Subset::new([prefix, i + 1])).collect()).expect("distinct labels")
}

/// Convex multipliers for `point`, if any exist.
fn convex_multipliers(point: &[Rational], vertices: &PointSet) -> Result<Option<Vec<Rational>>> {
    let k = vertices.len();
    let space = index_space(0, k);
    let mut sys = LinearSystem::new(space.clone());
    sys.add_equality(vec![Rational::one(); k], Rational::one())?;
    for (c, target) in point.iter().enumerate() {
        let row = vertices.points().iter().map(|v| v[c].clone()).collect();
        sys.add_equality(row, target.clone())?;
    }
    sys.add_nonnegativity();
    let out = lp_maximize(&sys, &RVector::zeros(space))?;
    Ok(out.optimizer.map(RVector::into_values))
}

/// Maximises `a·p − δ` over `a ∈ [-1,1]^d`, `δ` free, with `a·v ≤ δ` on
/// every vertex. Returns the optimal `(a, δ)` and the gap.
fn separation(point: &[Rational], vertices: &PointSet) -> Result<(Vec<Rational>, Rational, Rational)> {
    let d = point.len();
    // coordinates: a_1..a_d, then δ
    let mut labels: Vec<Subset> = (0..d).map(|i| Subset::new([1, i + 1])).collect();
    labels.push(Subset::new([2]));
    let space = Space::new(labels)?;
    let mut sys = LinearSystem::new(space.clone());
    for v in vertices.points() {
        let mut row = v.clone();
        row.push(-Rational::one());
        sys.add_inequality(row, Rational::zero())?;
    }
    for i in 0..d {
        for s in [1, -1] {
            let mut row = vec![Rational::zero(); d + 1];
            row[i] = Rational::from_integer(s.into());
            sys.add_inequality(row, Rational::one())?;
        }
    }
    let mut obj = point.to_vec();
    obj.push(-Rational::one());
    let out = lp_maximize(&sys, &RVector::new(space, obj)?)?;
    let (Some(gap), Some(opt)) = (out.value, out.optimizer) else {
        return Err(Error::InternalInvariant("separation LP has no optimum".into()));
    };
    let mut vals = opt.into_values();
    let delta = vals.pop().expect("delta coordinate");
    Ok((vals, delta, gap))
}

/// Whether `point ∈ conv(vertices)`. Both the multiplier LP and the
/// separation LP are solved and must agree.
pub fn member(point: &RVector, vertices: &PointSet) -> Result<Membership> {
    point.space().ensure_same(vertices.space())?;
    if vertices.is_empty() {
        return Err(Error::InvalidInstance("membership needs at least one vertex".into()));
    }
    let mult = convex_multipliers(point.values(), vertices)?;
    let (a, delta, gap) = separation(point.values(), vertices)?;
    match (mult, gap.is_positive()) {
        (Some(multipliers), false) => Ok(Membership::Inside { multipliers }),
        (None, true) => Ok(Membership::Outside {
            a: RVector::new(point.space().clone(), a)?,
            delta,
        }),
        (m, _) => Err(Error::InternalInvariant(format!(
            "membership LPs disagree (multipliers found: {}, separation gap {gap})",
            m.is_some()
        ))),
    }
}

/// Why two polytopes differ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Counterexample {
    /// A vertex of the H-described polytope missing from the V-list.
    VertexOutside(Vec<Rational>),
    /// A listed point violating the H-description.
    PointViolates(Vec<Rational>),
}

/// `vertices(sys) = points` as sets, with the first discrepancy.
pub fn equal_polytopes(sys: &LinearSystem, points: &PointSet, guard: usize) -> Result<Option<Counterexample>> {
    sys.space().ensure_same(points.space())?;
    let verts = enumerate_vertices(sys, guard)?;
    if let Some(v) = verts.points().iter().find(|v| !points.contains(v)) {
        return Ok(Some(Counterexample::VertexOutside(v.clone())));
    }
    if let Some(p) = points.points().iter().find(|p| !sys.satisfies(p)) {
        return Ok(Some(Counterexample::PointViolates(p.clone())));
    }
    if verts.len() != points.canonical().len() {
        // every vertex is listed and every listed point is feasible, so a
        // listed point is a non-vertex of the H-polytope
        let extra = points
            .canonical()
            .into_iter()
            .find(|p| !verts.contains(p))
            .expect("counts differ");
        return Ok(Some(Counterexample::PointViolates(extra)));
    }
    Ok(None)
}
