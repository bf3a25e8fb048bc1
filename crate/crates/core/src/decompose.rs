//! Splitting `H = H₁ ∪ H₂` and comparing `MC^H` with the intersection of
//! the two polytopes pulled back to `𝒥^H`.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactmath::{enumerate_vertices, LinearSystem, PointSet, RVector, Rational, Space, Subset};
use crate::hypergraph::{is_alpha_acyclic, Acyclicity, Hypergraph};
use crate::instance::Family;
use crate::oracle::{enumerate_sh, DEFAULT_POINT_GUARD};
use crate::polytope::{equal_polytopes, member, Counterexample};
use crate::relaxation::build_mc_t;

/// `H = H₁ ∪ H₂` with the shared vertex set `V₁ ∩ V₂`.
#[derive(Clone, Debug)]
pub struct Decomposition {
    h: Hypergraph,
    parts: [Hypergraph; 2],
    shared: Subset,
}

impl Decomposition {
    pub fn new(h: &Hypergraph, h1: Hypergraph, h2: Hypergraph) -> Result<Self> {
        if h1.union(&h2) != *h {
            return Err(Error::NotACover(format!("{h1:?} ∪ {h2:?} is not {h:?}")));
        }
        let shared = Subset::new(h1.vertices().iter().copied().filter(|v| h2.vertices().contains(v)));
        Ok(Decomposition {
            h: h.clone(),
            parts: [h1, h2],
            shared,
        })
    }

    pub fn hypergraph(&self) -> &Hypergraph {
        &self.h
    }

    pub fn parts(&self) -> &[Hypergraph; 2] {
        &self.parts
    }

    pub fn shared(&self) -> &Subset {
        &self.shared
    }
}

/// `V₁ ∩ V₂` is empty, a single block, or an edge of both parts.
pub fn check_precondition(d: &Decomposition) -> bool {
    match d.shared.len() {
        0 | 1 => true,
        _ => d.parts.iter().all(|p| p.is_edge(&d.shared)),
    }
}

/// How the intersection polytope was described.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    /// Concatenated join-tree systems of both parts.
    HRep,
    /// Convex multipliers over each part's 0-1 points, vertices mapped to `w`.
    VRep,
}

/// Outcome of comparing `MC^H` with `MC̄^{H₁} ∩ MC̄^{H₂}`.
#[derive(Clone, Debug)]
pub struct DecompositionCheck {
    pub route: Route,
    pub precondition: bool,
    /// Candidate points examined (vertices of the intersection or of its
    /// extended formulation).
    pub vertices: usize,
    /// A point of the intersection outside `conv 𝒮^H`, or a point of `𝒮^H`
    /// outside the intersection.
    pub counterexample: Option<Vec<Rational>>,
}

impl DecompositionCheck {
    pub fn equal(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// `MC̄^{H₁} ∩ MC̄^{H₂}` from the join-tree systems of both parts.
pub fn intersection_system(d: &Decomposition, fam: &Family) -> Result<LinearSystem> {
    let mut sys = LinearSystem::new(fam.space().clone());
    for part in &d.parts {
        let Acyclicity::Acyclic(tree) = is_alpha_acyclic(part) else {
            return Err(Error::NotAlphaAcyclic);
        };
        let sub = fam.restrict_to(part);
        let t = build_mc_t(&sub, &tree)?;
        sys.extend(&t.system.embed_into(fam.space())?)?;
    }
    Ok(sys)
}

/// The intersection in multiplier space: `λ^k ≥ 0`, `Σ λ^k = 1`, and the
/// two combinations agree on the coordinates both parts share. Returns the
/// system and the linear map from `(λ¹, λ²)` to `w`.
fn multiplier_system(d: &Decomposition, fam: &Family) -> Result<(LinearSystem, Vec<Vec<Rational>>)> {
    let parts: Vec<(Family, PointSet)> = d
        .parts
        .iter()
        .map(|p| {
            let sub = fam.restrict_to(p);
            let pts = enumerate_sh(&sub, DEFAULT_POINT_GUARD)?;
            Ok((sub, pts))
        })
        .collect::<Result<_>>()?;
    let (s1, s2) = (parts[0].1.len(), parts[1].1.len());
    let width = s1 + s2;
    // row J of the map: the value of w_J as a combination of multipliers
    let column = |k: usize, j: &Subset| -> Option<Vec<Rational>> {
        let (sub, pts) = &parts[k];
        let c = sub.space().position(j)?;
        let mut row = vec![Rational::zero(); width];
        let off = if k == 0 { 0 } else { s1 };
        for (l, u) in pts.points().iter().enumerate() {
            row[off + l] = u[c].clone();
        }
        Some(row)
    };
    let space = Space::new((0..width).map(|k| Subset::new([0, k + 1])).collect())?;
    let mut sys = LinearSystem::new(space);
    for (off, len) in [(0, s1), (s1, s2)] {
        let mut row = vec![Rational::zero(); width];
        for x in &mut row[off..off + len] {
            *x = Rational::one();
        }
        sys.add_equality(row, Rational::one())?;
    }
    let mut map = Vec::with_capacity(fam.len());
    for j in fam.space().labels() {
        match (column(0, j), column(1, j)) {
            (Some(a), Some(b)) => {
                let diff = a.iter().zip(&b).map(|(x, y)| x - y).collect();
                sys.add_equality(diff, Rational::zero())?;
                map.push(a);
            }
            (Some(a), None) | (None, Some(a)) => map.push(a),
            (None, None) => return Err(Error::NotACover(format!("coordinate {j} belongs to neither part"))),
        }
    }
    sys.add_nonnegativity();
    Ok((sys, map))
}

/// Compares the intersection with `conv 𝒮^H` whether or not the
/// precondition holds.
pub fn compare_intersection(d: &Decomposition, fam: &Family, route: Route, guard: usize) -> Result<DecompositionCheck> {
    if fam.hypergraph() != &d.h {
        return Err(Error::NotACover("family is over a different hypergraph".into()));
    }
    let sh = enumerate_sh(fam, DEFAULT_POINT_GUARD)?;
    let precondition = check_precondition(d);
    match route {
        Route::HRep => {
            let sys = intersection_system(d, fam)?;
            let vertices = enumerate_vertices(&sys, guard)?.len();
            let counterexample = equal_polytopes(&sys, &sh, guard)?.map(|c| match c {
                Counterexample::VertexOutside(p) | Counterexample::PointViolates(p) => p,
            });
            Ok(DecompositionCheck {
                route,
                precondition,
                vertices,
                counterexample,
            })
        }
        Route::VRep => {
            let (sys, map) = multiplier_system(d, fam)?;
            let ext = enumerate_vertices(&sys, guard)?;
            let mut projected: Vec<Vec<Rational>> = ext
                .points()
                .iter()
                .map(|lam| map.iter().map(|row| crate::exactmath::dot(row, lam)).collect())
                .collect();
            projected.sort();
            projected.dedup();
            let mut counterexample = None;
            for p in &projected {
                let v = RVector::new(fam.space().clone(), p.clone())?;
                if !member(&v, &sh)?.is_inside() {
                    counterexample = Some(p.clone());
                    break;
                }
            }
            if counterexample.is_none() {
                // 𝒮^H inside the intersection: each point's projections are
                // themselves 0-1 points of the parts
                for w in sh.points() {
                    let inside = d.parts.iter().all(|part| {
                        let sub = fam.restrict_to(part);
                        let u = fam.space().project(w, sub.space()).expect("sub-family labels");
                        crate::oracle::choice_of_w(fam, w).is_some_and(|x| crate::oracle::w_of(&x, &sub) == u)
                    });
                    if !inside {
                        counterexample = Some(w.clone());
                        break;
                    }
                }
            }
            Ok(DecompositionCheck {
                route,
                precondition,
                vertices: projected.len(),
                counterexample,
            })
        }
    }
}

/// Checks `MC^H = MC̄^{H₁} ∩ MC̄^{H₂}`, using join-tree systems when both
/// parts are α-acyclic. Refuses when the precondition fails.
pub fn verify_decomposition(d: &Decomposition, fam: &Family, guard: usize) -> Result<DecompositionCheck> {
    if !check_precondition(d) {
        return Err(Error::DecompositionPrecondition(format!(
            "shared blocks {} are neither empty, a single block, nor an edge of both parts",
            d.shared.display_offset(1)
        )));
    }
    let route = if d.parts.iter().all(|p| is_alpha_acyclic(p).is_acyclic()) {
        Route::HRep
    } else {
        Route::VRep
    };
    compare_intersection(d, fam, route, guard)
}
