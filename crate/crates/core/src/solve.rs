//! Exact MCPP solving: the join-tree LP for α-acyclic instances (with an
//! integrality check on every LP vertex), or exhaustive search.

use std::time::Instant;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::{lp_maximize, serde_rational, LinearSystem, LpStatus, RVector, Rational, Subset};
use crate::hypergraph::{is_alpha_acyclic, Acyclicity};
use crate::instance::{Family, Instance};
use crate::oracle::{brute_optimum, choice_of_w, ChoicePoint, DEFAULT_POINT_GUARD};
use crate::relaxation::build_mc_t;

/// Requested solution route.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodChoice {
    /// LP when `H` is α-acyclic, brute force otherwise.
    #[default]
    Auto,
    Lp,
    Brute,
}

/// Route actually taken.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    #[serde(rename = "lp-jointree")]
    LpJoinTree,
    BruteForce,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveStats {
    /// Largest hyperedge size.
    pub rank: usize,
    pub max_block_size: usize,
    pub family_size: usize,
    pub equalities: usize,
    pub inequalities: usize,
    pub pivots: usize,
    pub wall_time_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveReport {
    #[serde(with = "serde_rational")]
    pub optimum: Rational,
    /// Chosen index of every block.
    pub argmax: Vec<usize>,
    /// `x_1 … x_n` as a digit string.
    pub x: String,
    pub method: Method,
    pub acyclic: bool,
    pub stats: SolveStats,
}

#[derive(Clone, Copy, Debug)]
pub struct SolveOptions {
    pub method: MethodChoice,
    /// Cap on `|𝒳|` for brute force.
    pub guard: u128,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            method: MethodChoice::Auto,
            guard: DEFAULT_POINT_GUARD,
        }
    }
}

/// Every coordinate is 0 or 1.
fn is_binary(w: &[Rational]) -> bool {
    w.iter().all(|v| v.is_zero() || v.is_one())
}

fn integral_choice(fam: &Family, w: &RVector) -> Result<ChoicePoint> {
    if !is_binary(w.values()) {
        return Err(Error::InternalInvariant(format!(
            "fractional LP vertex on an alpha-acyclic instance: {w:?}"
        )));
    }
    choice_of_w(fam, w.values())
        .ok_or_else(|| Error::InternalInvariant(format!("LP vertex is not a multiple-choice point: {w:?}")))
}

struct LpSolution {
    value: Rational,
    choice: ChoicePoint,
    pivots: usize,
    equalities: usize,
    inequalities: usize,
}

fn maximize(sys: &LinearSystem, a: &RVector) -> Result<(Rational, RVector, usize)> {
    let out = lp_maximize(sys, a)?;
    match out.status {
        LpStatus::Optimal => Ok((
            out.value.expect("optimal value"),
            out.optimizer.expect("optimal point"),
            out.pivots,
        )),
        LpStatus::Infeasible => Err(Error::Infeasible),
        LpStatus::Unbounded => Err(Error::Unbounded),
    }
}

/// Maximises over `MC^H_T`, then picks the lexicographically first optimal
/// choice by fixing blocks in order (each fix keeps an optimal face).
fn solve_lp(inst: &Instance, fam: &Family) -> Result<LpSolution> {
    let Acyclicity::Acyclic(tree) = is_alpha_acyclic(fam.hypergraph()) else {
        return Err(Error::NotAlphaAcyclic);
    };
    let rs = build_mc_t(fam, &tree)?;
    let a = inst.objective(fam)?;
    let (value, w, mut pivots) = maximize(&rs.system, &a)?;
    integral_choice(fam, &w)?;
    if a.dot(w.values()) != value {
        return Err(Error::InternalInvariant("LP value not attained".into()));
    }

    let mut face = rs.system.clone();
    face.add_equality(a.values().to_vec(), value.clone())?;
    let p = fam.partition();
    for b in 0..p.num_blocks() {
        let mut fixed = false;
        for i in p.block(b).iter() {
            let mut trial = face.clone();
            let row = trial.dense_row(&[(Subset::singleton(i), Rational::one())])?;
            trial.add_equality(row, Rational::one())?;
            let out = lp_maximize(&trial, &RVector::zeros(fam.space().clone()))?;
            pivots += out.pivots;
            if let Some(opt) = out.optimizer {
                integral_choice(fam, &opt)?;
                face = trial;
                fixed = true;
                break;
            }
        }
        if !fixed {
            return Err(Error::InternalInvariant(format!("optimal face lost block I{}", b + 1)));
        }
    }
    let (_, w, extra) = maximize(&face, &a)?;
    pivots += extra;
    let choice = integral_choice(fam, &w)?;
    let n = p.n();
    if inst.evaluate(&choice.x(n)) - inst.offset() != value {
        return Err(Error::InternalInvariant(
            "LP choice does not reproduce the optimum".into(),
        ));
    }
    Ok(LpSolution {
        value,
        choice,
        pivots,
        equalities: rs.system.equalities.len(),
        inequalities: rs.system.inequalities.len(),
    })
}

/// Exact optimum of `inst`, ties broken by the lexicographically first
/// choice tuple.
pub fn solve(inst: &Instance, opts: SolveOptions) -> Result<SolveReport> {
    let start = Instant::now();
    let fam = inst.family();
    let h = fam.hypergraph();
    let acyclic = is_alpha_acyclic(h).is_acyclic();
    let use_lp = match opts.method {
        MethodChoice::Auto => acyclic,
        MethodChoice::Lp => {
            if !acyclic {
                return Err(Error::NotAlphaAcyclic);
            }
            true
        }
        MethodChoice::Brute => false,
    };
    let mut stats = SolveStats {
        rank: h.rank(),
        max_block_size: inst.partition().max_block_size(),
        family_size: fam.len(),
        equalities: 0,
        inequalities: 0,
        pivots: 0,
        wall_time_ms: 0,
    };
    let (optimum, choice, method) = if use_lp {
        let sol = solve_lp(inst, &fam)?;
        stats.pivots = sol.pivots;
        stats.equalities = sol.equalities;
        stats.inequalities = sol.inequalities;
        (sol.value + inst.offset(), sol.choice, Method::LpJoinTree)
    } else {
        let (v, x) = brute_optimum(inst, opts.guard)?;
        (v, x, Method::BruteForce)
    };
    stats.wall_time_ms = start.elapsed().as_millis() as u64;
    Ok(SolveReport {
        optimum,
        argmax: choice.choice().to_vec(),
        x: choice.x_string(inst.partition().n()),
        method,
        acyclic,
        stats,
    })
}
