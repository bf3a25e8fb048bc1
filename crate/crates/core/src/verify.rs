//! The theorem checks run by `mcpp verify-theorems`. Each check returns a
//! one-line summary on success and the first failure otherwise.

use std::collections::HashSet;

use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::battery::{self, hypergraph, BatteryInstance};
use crate::decompose::{check_precondition, compare_intersection, verify_decomposition, Decomposition, Route};
use crate::error::Error;
use crate::exactmath::{
    enumerate_vertices, lp_maximize, same_affine_subspace, RVector, Rational, Subset, DEFAULT_VERTEX_GUARD,
};
use crate::hypergraph::{all_join_trees, is_alpha_acyclic, is_downward_closed, Acyclicity, JoinTree};
use crate::instance::{Instance, Monomial, RawInstance};
use crate::lifting::{
    compute_v0_v1, cycle_inequality, facet_catalog, flip, proj_leq, projection_ranks, simple_cycles,
    standard_inequalities, unproj, verify_lift_theorem,
};
use crate::oracle::{
    brute_optimum, choice_of_w, enumerate_mcleq_vertices, enumerate_mp_vertices, enumerate_sh, enumerate_x, w_of,
    DEFAULT_POINT_GUARD,
};
use crate::polytope::{certify_inequality, equal_polytopes, member};
use crate::relaxation::{build_affine_hull, build_mc_cap, build_mc_t, check_cap_equals_t};
use crate::solve::{solve, MethodChoice, SolveOptions};

/// Guard for the shared-edge decomposition (28 coordinates).
pub const SHARED_EDGE_GUARD: usize = 32;
/// Random objectives per instance in the solver check.
pub const DEFAULT_TRIALS: usize = 100;
/// Cap on lift selections per facet.
pub const SELECTION_GUARD: u128 = 4096;

type Check = std::result::Result<String, String>;

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn fail<T>(msg: impl Into<String>) -> std::result::Result<T, String> {
    Err(msg.into())
}

fn lib<T>(name: &str, r: crate::Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e: Error| format!("{name}: {e}"))
}

fn tree_of(b: &BatteryInstance) -> std::result::Result<JoinTree, String> {
    match is_alpha_acyclic(b.instance.family().hypergraph()) {
        Acyclicity::Acyclic(t) => Ok(t),
        Acyclicity::Cyclic { .. } => fail(format!("{}: not alpha-acyclic", b.name)),
    }
}

/// Join-tree relaxation vertices equal the 0-1 points.
pub fn join_tree_exactness() -> Check {
    let mut total = 0;
    let battery = battery::enumeration_battery();
    for b in &battery {
        let fam = b.instance.family();
        let rs = lib(b.name, build_mc_t(&fam, &tree_of(b)?))?;
        let sh = lib(b.name, enumerate_sh(&fam, DEFAULT_POINT_GUARD))?;
        if let Some(c) = lib(b.name, equal_polytopes(&rs.system, &sh, DEFAULT_VERTEX_GUARD))? {
            return fail(format!("{}: {c:?}", b.name));
        }
        total += sh.len();
    }
    Ok(format!("{} instances, {total} vertices matched", battery.len()))
}

/// On the triangle the pairwise relaxation has a fractional vertex and a
/// strictly larger LP value.
pub fn cyclic_gap() -> std::result::Result<(String, Rational, Rational), String> {
    let b = battery::tri();
    let fam = b.instance.family();
    let cap = lib("TRI", build_mc_cap(&fam))?;
    let sh = lib("TRI", enumerate_sh(&fam, DEFAULT_POINT_GUARD))?;
    let verts = lib("TRI", enumerate_vertices(&cap.system, DEFAULT_VERTEX_GUARD))?;
    let mut outside = None;
    for v in verts.points() {
        let p = lib("TRI", RVector::new(fam.space().clone(), v.clone()))?;
        if !lib("TRI", member(&p, &sh))?.is_inside() {
            outside = Some(v.clone());
            break;
        }
    }
    let Some(outside) = outside else {
        return fail("TRI: every pairwise-relaxation vertex lies in conv S^H");
    };
    let a = lib("TRI", b.instance.objective(&fam))?;
    let lp = lib("TRI", lp_maximize(&cap.system, &a))?
        .value
        .ok_or("TRI: LP has no optimum")?;
    let (brute, _) = lib("TRI", brute_optimum(&b.instance, DEFAULT_POINT_GUARD))?;
    if lp <= brute {
        return fail(format!("TRI: LP value {lp} does not exceed brute optimum {brute}"));
    }
    let shown: Vec<String> = outside.iter().map(|x| x.to_string()).collect();
    Ok((
        format!("fractional vertex [{}], LP {lp} > brute {brute}", shown.join(",")),
        lp,
        brute,
    ))
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    Rational::new(rng.gen_range(-9i64..=9).into(), rng.gen_range(1i64..=4).into())
}

/// `inst`'s partition with a random coefficient on every monomial of `𝒥^H`.
pub fn random_objective(inst: &Instance, rng: &mut ChaCha8Rng) -> Instance {
    let fam = inst.family();
    let p = inst.partition();
    RawInstance {
        n: p.n(),
        blocks: p.blocks().iter().map(|b| b.iter().collect()).collect(),
        terms: fam
            .space()
            .labels()
            .iter()
            .map(|j| Monomial::new(j.clone(), random_rational(rng)))
            .collect(),
    }
    .validate()
    .expect("same partition and family")
}

/// LP and brute-force optima agree on seeded random objectives.
pub fn solver_equivalence(seed: u64, trials: usize) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut runs = 0;
    for b in battery::all() {
        if !is_alpha_acyclic(b.instance.family().hypergraph()).is_acyclic() {
            continue;
        }
        let own = std::iter::once(b.instance.clone());
        let random: Vec<Instance> = (0..trials).map(|_| random_objective(&b.instance, &mut rng)).collect();
        for inst in own.chain(random) {
            let lp = lib(
                b.name,
                solve(
                    &inst,
                    SolveOptions {
                        method: MethodChoice::Lp,
                        ..Default::default()
                    },
                ),
            )?;
            let bf = lib(
                b.name,
                solve(
                    &inst,
                    SolveOptions {
                        method: MethodChoice::Brute,
                        ..Default::default()
                    },
                ),
            )?;
            if (&lp.optimum, &lp.argmax) != (&bf.optimum, &bf.argmax) {
                return fail(format!(
                    "{}: LP {} at {:?}, brute {} at {:?}",
                    b.name, lp.optimum, lp.argmax, bf.optimum, bf.argmax
                ));
            }
            runs += 1;
        }
    }
    Ok(format!("{runs} objectives, all LP vertices 0-1"))
}

/// Every pairwise equality is implied by the join-tree system, for up to
/// two join trees per instance.
pub fn cap_implied_by_tree() -> Check {
    let mut rows = 0;
    let mut trees_used = 0;
    for b in battery::all() {
        let fam = b.instance.family();
        let h = fam.hypergraph();
        if !is_alpha_acyclic(h).is_acyclic() {
            continue;
        }
        let mut trees = lib(b.name, all_join_trees(h, 6))?;
        trees.truncate(2);
        if trees.is_empty() {
            trees.push(tree_of(&b)?);
        }
        for t in &trees {
            let check = lib(b.name, check_cap_equals_t(&fam, t))?;
            if let Some(f) = check.failures.first() {
                return fail(format!("{}: row ranges over [{}, {}]", b.name, f.min, f.max));
            }
            rows += check.rows_checked;
            trees_used += 1;
        }
    }
    Ok(format!("{trees_used} join trees, {rows} extra equalities pinned to 0"))
}

/// The two transversals used per instance: first and last index of every block.
pub fn transversals(inst: &Instance) -> [Subset; 2] {
    let p = inst.partition();
    [
        Subset::new(p.blocks().iter().map(|b| b.iter().next().expect("non-empty"))),
        Subset::new(p.blocks().iter().map(|b| b.iter().last().expect("non-empty"))),
    ]
}

/// Full-dimensional companion polytope, the projection bijection and the
/// affine hull, on every downward-closed instance.
pub fn affine_hull_checks() -> Check {
    let mut done = 0;
    for b in battery::all() {
        let fam = b.instance.family();
        if !is_downward_closed(fam.hypergraph()) {
            continue;
        }
        let sh = lib(b.name, enumerate_sh(&fam, DEFAULT_POINT_GUARD))?;
        for d in transversals(&b.instance) {
            let leq = lib(b.name, fam.leq_space(&d))?;
            let mcleq = lib(b.name, enumerate_mcleq_vertices(&fam, &d, DEFAULT_POINT_GUARD))?;
            if mcleq.dim() != Some(leq.len()) {
                return fail(format!(
                    "{} D={d}: companion dimension {:?} != {}",
                    b.name,
                    mcleq.dim(),
                    leq.len()
                ));
            }
            for w in sh.points() {
                let w = lib(b.name, RVector::new(fam.space().clone(), w.clone()))?;
                let back = lib(b.name, proj_leq(&w, &fam, &d).and_then(|v| unproj(&v, &fam, &d)))?;
                if back != w {
                    return fail(format!("{} D={d}: unproj(proj(w)) != w", b.name));
                }
            }
            let hull = lib(b.name, build_affine_hull(&fam, &d))?;
            if hull.rank() != fam.len() - leq.len() {
                return fail(format!(
                    "{} D={d}: hull rank {} != {}",
                    b.name,
                    hull.rank(),
                    fam.len() - leq.len()
                ));
            }
            let eqs = &hull.d_form.system.equalities;
            if let Some(w) = sh.points().iter().find(|w| eqs.iter().any(|r| r.lhs(w) != r.rhs)) {
                return fail(format!("{} D={d}: hull misses {w:?}", b.name));
            }
            if !same_affine_subspace(eqs, &hull.symmetric.system.equalities, fam.len()) {
                return fail(format!("{} D={d}: hull forms differ", b.name));
            }
            done += 1;
        }
    }
    Ok(format!("{done} (instance, D) pairs"))
}

/// The lifting instances: single edges (2,2), (3,2), (3,3) and the 4-cycle.
pub fn lifting_battery() -> Vec<BatteryInstance> {
    vec![battery::edge22(), battery::edge32(), battery::edge33(), battery::c4()]
}

/// The facet-preservation condition agrees with rank certification for
/// every selection of every catalog facet.
pub fn lifting_theorem() -> Check {
    let mut rows = 0;
    let mut facets = 0;
    for b in lifting_battery() {
        let fam = b.instance.family();
        let h = fam.hypergraph();
        let mp = lib(b.name, enumerate_mp_vertices(h, DEFAULT_POINT_GUARD))?;
        let mc = lib(b.name, enumerate_sh(&fam, DEFAULT_POINT_GUARD))?;
        let catalog = lib(b.name, facet_catalog(h, &mp))?;
        if !simple_cycles(h).is_empty() {
            let mut empty_classes = false;
            for entry in catalog.iter().filter(|c| c.name.starts_with("cycle")) {
                let cls = lib(b.name, compute_v0_v1(&entry.ineq, &mp))?;
                empty_classes |= cls.v0.is_empty() && cls.v1.is_empty();
            }
            if !empty_classes {
                return fail(format!("{}: no cycle facet with empty V0 and V1", b.name));
            }
        }
        for entry in &catalog {
            let report = lib(
                b.name,
                verify_lift_theorem(&entry.ineq, &fam, &mp, &mc, SELECTION_GUARD),
            )?;
            if let Some(r) = report.disagreements().next() {
                return fail(format!(
                    "{} {}: selection {:?} condition {} but {:?}",
                    b.name,
                    entry.name,
                    r.selection.sets(),
                    r.condition,
                    r.status
                ));
            }
            rows += report.rows.len();
            facets += 1;
        }
    }
    Ok(format!("{facets} facets, {rows} selections, 0 disagreements"))
}

fn split(
    b: &BatteryInstance,
    h1: Vec<usize>,
    e1: &[&[usize]],
    h2: Vec<usize>,
    e2: &[&[usize]],
) -> std::result::Result<Decomposition, String> {
    let fam = b.instance.family();
    lib(
        b.name,
        Decomposition::new(fam.hypergraph(), hypergraph(&h1, e1), hypergraph(&h2, e2)),
    )
}

/// The named decompositions: (instance, split, guard).
pub fn good_splits() -> std::result::Result<Vec<(BatteryInstance, Decomposition, usize)>, String> {
    let path = battery::path3();
    let dis = battery::disjoint();
    let sh = battery::shared_edge();
    Ok(vec![
        (
            path.clone(),
            split(&path, vec![0, 1], &[&[0, 1]], vec![1, 2], &[&[1, 2]])?,
            DEFAULT_VERTEX_GUARD,
        ),
        (
            dis.clone(),
            split(&dis, vec![0, 1], &[&[0, 1]], vec![2, 3], &[&[2, 3]])?,
            DEFAULT_VERTEX_GUARD,
        ),
        (
            sh.clone(),
            split(
                &sh,
                vec![0, 1, 2],
                &[&[0, 1, 2], &[1, 2]],
                vec![1, 2, 3],
                &[&[1, 2, 3], &[1, 2]],
            )?,
            SHARED_EDGE_GUARD,
        ),
    ])
}

/// The triangle split `{I1I2},{I2I3}` against `{I1I3}`.
pub fn bad_split() -> std::result::Result<(BatteryInstance, Decomposition), String> {
    let t = battery::tri();
    let d = split(&t, vec![0, 1, 2], &[&[0, 1], &[1, 2]], vec![0, 2], &[&[0, 2]])?;
    Ok((t, d))
}

/// Good splits decompose; the triangle split fails the precondition and its
/// intersection has a fractional vertex.
pub fn decomposition() -> Check {
    let mut names = Vec::new();
    for (b, d, guard) in good_splits()? {
        let fam = b.instance.family();
        let c = lib(b.name, verify_decomposition(&d, &fam, guard))?;
        if let Some(p) = c.counterexample {
            return fail(format!("{}: intersection differs at {p:?}", b.name));
        }
        names.push(format!("{} ({} vertices)", b.name, c.vertices));
    }
    let (t, d) = bad_split()?;
    let fam = t.instance.family();
    if check_precondition(&d) {
        return fail("TRI split passes the precondition");
    }
    if !matches!(
        verify_decomposition(&d, &fam, DEFAULT_VERTEX_GUARD),
        Err(Error::DecompositionPrecondition(_))
    ) {
        return fail("TRI split not rejected");
    }
    let c = lib("TRI", compare_intersection(&d, &fam, Route::HRep, DEFAULT_VERTEX_GUARD))?;
    match c.counterexample {
        Some(p) if p.iter().any(|x| !x.is_integer()) => {}
        other => return fail(format!("TRI split: no fractional point ({other:?})")),
    }
    Ok(format!(
        "{}; TRI split rejected with a fractional point",
        names.join(", ")
    ))
}

/// Tight points with `z = 0` on `U`, projected onto `E_U`, have full rank.
pub fn projection_rank() -> Check {
    let mut rows = 0;
    for b in [battery::edge32(), battery::c4()] {
        let h = b.instance.family().hypergraph().clone();
        let mp = lib(b.name, enumerate_mp_vertices(&h, DEFAULT_POINT_GUARD))?;
        for entry in lib(b.name, facet_catalog(&h, &mp))? {
            for r in lib(b.name, projection_ranks(&entry.ineq, &h, &mp))? {
                if !r.full_dimensional() {
                    return fail(format!(
                        "{} {}: U={} rank {:?}, |E_U|={}",
                        b.name,
                        entry.name,
                        r.u.display_offset(1),
                        r.rank,
                        r.e_u.len()
                    ));
                }
                rows += 1;
            }
        }
    }
    Ok(format!("{rows} (facet, U) pairs full rank"))
}

/// Structural invariants on the whole battery.
pub fn invariants() -> Check {
    let scale = Rational::new(7.into(), 3.into());
    for b in battery::all() {
        let inst = &b.instance;
        let fam = inst.family();
        let p = inst.partition();
        let h = fam.hypergraph();
        for j in fam.space().labels() {
            for i in j.iter() {
                for k in p.block(p.block_of(i)).iter() {
                    if !fam.contains(&j.without(i).with(k)) {
                        return fail(format!("{}: swap {i}->{k} leaves the family from {j}", b.name));
                    }
                }
            }
        }
        for (e, group) in fam.groups() {
            let want: usize = e.iter().map(|blk| p.block(blk).len()).product();
            if group.len() != want {
                return fail(format!("{}: |J^e| = {} for e={e}, want {want}", b.name, group.len()));
            }
        }
        let xs = lib(b.name, enumerate_x(p, DEFAULT_POINT_GUARD))?;
        let mut seen = HashSet::new();
        for x in &xs {
            let w = w_of(x, &fam);
            if choice_of_w(&fam, &w).as_ref() != Some(x) || !seen.insert(w.clone()) {
                return fail(format!("{}: w_of not injective at {:?}", b.name, x.choice()));
            }
            for (e, group) in fam.groups() {
                let s: Rational = group
                    .iter()
                    .map(|j| w[fam.space().position(j).expect("label")].clone())
                    .sum();
                if !s.is_one() {
                    return fail(format!("{}: sum over J^{e} is {s}", b.name));
                }
            }
        }
        let mp = lib(b.name, enumerate_mp_vertices(h, DEFAULT_POINT_GUARD))?;
        let mut ineqs: Vec<_> = lib(b.name, standard_inequalities(h))?
            .into_iter()
            .map(|c| c.ineq)
            .collect();
        for cycle in simple_cycles(h) {
            ineqs.push(lib(b.name, cycle_inequality(h, &cycle))?);
        }
        let closed = is_downward_closed(h);
        for ineq in &ineqs {
            // ψ^I only stays inside the coordinates when H is downward-closed
            for &v in h.vertices().iter().filter(|_| closed) {
                let twice = lib(b.name, flip(ineq, v, h).and_then(|f| flip(&f, v, h)))?;
                if &twice != ineq {
                    return fail(format!("{}: flip at I{} is not an involution", b.name, v + 1));
                }
            }
            let c1 = lib(b.name, certify_inequality(&ineq.c, &ineq.delta, &mp))?;
            let c2 = lib(
                b.name,
                certify_inequality(&ineq.c.scaled(&scale), &(&ineq.delta * &scale), &mp),
            )?;
            if c1 != c2 {
                return fail(format!("{}: certificate changes under rescaling", b.name));
            }
        }
    }
    Ok(format!("{} instances", battery::all().len()))
}

/// Runs every check in order.
pub fn run_all(seed: u64, trials: usize) -> Vec<CriterionResult> {
    let result = |id: u8, title: &'static str, c: Check| {
        let (passed, detail) = match c {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        CriterionResult {
            id,
            title,
            passed,
            detail,
        }
    };
    vec![
        result(
            1,
            "join-tree relaxation equals the MCPP polytope",
            join_tree_exactness(),
        ),
        result(
            2,
            "pairwise relaxation fails on the triangle",
            cyclic_gap().map(|(d, _, _)| d),
        ),
        result(3, "LP and brute-force optima agree", solver_equivalence(seed, trials)),
        result(4, "pairwise equalities implied by join trees", cap_implied_by_tree()),
        result(5, "companion polytope, bijection and affine hull", affine_hull_checks()),
        result(6, "lifted facets match the selection condition", lifting_theorem()),
        result(7, "decomposition", decomposition()),
        result(8, "projected tight sets have full rank", projection_rank()),
        result(9, "structural invariants", invariants()),
    ]
}
