//! The flipping map `ψ^I` and the bijection between `MC^H` and `MC^H_≤(D)`.

use super::poly::{linearize, ConflictMode, MultilinearPoly};
use super::theorem::MPInequality;
use crate::error::{Error, Result};
use crate::exactmath::{RVector, Rational, Subset};
use crate::hypergraph::{is_downward_closed, Hypergraph};
use crate::instance::Family;
use crate::oracle::mp_space;

/// `ψ^I_e(z) = ℒ(1 − z_I) Π_{Ī∈e−I} z_Ī` for `I ∈ e`, `z_e` otherwise.
pub fn psi(block: usize, e: &Subset) -> MultilinearPoly {
    if !e.contains(block) {
        return MultilinearPoly::monomial(e.clone(), Rational::from_integer(1.into()));
    }
    let rest = e.without(block);
    (MultilinearPoly::one() - MultilinearPoly::var(block))
        .mul(&MultilinearPoly::monomial(rest, Rational::from_integer(1.into())))
}

/// `c'·z − δ' = c·ψ^I(z) − δ`.
pub fn flip(ineq: &MPInequality, block: usize, h: &Hypergraph) -> Result<MPInequality> {
    let space = mp_space(h);
    ineq.c.space().ensure_same(&space)?;
    if !h.vertices().contains(&block) {
        return Err(Error::InvalidInstance(format!("block I{} is not a vertex", block + 1)));
    }
    let mut poly = MultilinearPoly::constant(-ineq.delta.clone());
    for (e, c) in ineq.c.support() {
        poly = poly + psi(block, e).scale(c);
    }
    let (c, offset) = linearize(&poly, &space)?;
    Ok(MPInequality { c, delta: -offset })
}

fn require_downward_closed(h: &Hypergraph) -> Result<()> {
    if is_downward_closed(h) {
        Ok(())
    } else {
        Err(Error::NotDownwardClosed)
    }
}

/// `w_J` as an affine function of the coordinates `𝒥^H_≤(D)`:
/// `ℒ Π_{ī∈J∩D} (1 − Σ_{i∈I−ī} w_i) Π_{i∈J∖D} w_i`.
pub fn d_expression(fam: &Family, d: &Subset, j: &Subset) -> Result<(RVector, Rational)> {
    require_downward_closed(fam.hypergraph())?;
    let leq = fam.leq_space(d)?;
    let p = fam.partition();
    let mut poly = MultilinearPoly::one();
    for i in j.iter() {
        let factor = if d.contains(i) {
            let others = p.block(p.block_of(i)).without(i);
            MultilinearPoly::one() - MultilinearPoly::sum_of(&others)
        } else {
            MultilinearPoly::var(i)
        };
        poly = poly.mul_in(&factor, p, ConflictMode::Strict)?;
    }
    linearize(&poly, &leq)
}

/// Restriction of `w` to the coordinates avoiding `D`.
pub fn proj_leq(w: &RVector, fam: &Family, d: &Subset) -> Result<RVector> {
    w.space().ensure_same(fam.space())?;
    let leq = fam.leq_space(d)?;
    RVector::new(leq.clone(), fam.space().project(w.values(), &leq)?)
}

/// Inverse of [`proj_leq`] on `MC^H_≤(D)`.
pub fn unproj(v: &RVector, fam: &Family, d: &Subset) -> Result<RVector> {
    require_downward_closed(fam.hypergraph())?;
    v.space().ensure_same(&fam.leq_space(d)?)?;
    let values = fam
        .space()
        .labels()
        .iter()
        .map(|j| {
            let (a, c) = d_expression(fam, d, j)?;
            Ok(a.dot(v.values()) + c)
        })
        .collect::<Result<Vec<_>>>()?;
    RVector::new(fam.space().clone(), values)
}
