//! Known inequalities for the multilinear polytope, kept only after rank
//! certification on its 0-1 points.

use num_traits::{One, Zero};

use super::maps::flip;
use super::theorem::MPInequality;
use crate::error::Result;
use crate::exactmath::{PointSet, Rational, Subset};
use crate::hypergraph::Hypergraph;
use crate::polytope::certify_inequality;

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub ineq: MPInequality,
}

fn blocks_name(e: &Subset) -> String {
    e.iter().map(|b| format!("I{}", b + 1)).collect()
}

/// `-z_e ≤ 0`, `z_e ≤ z_I` for `I ∈ e`, and `Σ_{I∈e} z_I − z_e ≤ |e| − 1`.
pub fn standard_inequalities(h: &Hypergraph) -> Result<Vec<CatalogEntry>> {
    let one = Rational::one();
    let mut out = Vec::new();
    for e in h.edges() {
        let en = blocks_name(e);
        out.push(CatalogEntry {
            name: format!("-z[{en}] <= 0"),
            ineq: MPInequality::new(h, &[(e.clone(), -one.clone())], Rational::zero())?,
        });
        for b in e.iter() {
            out.push(CatalogEntry {
                name: format!("z[{en}] <= z[I{}]", b + 1),
                ineq: MPInequality::new(
                    h,
                    &[(e.clone(), one.clone()), (Subset::singleton(b), -one.clone())],
                    Rational::zero(),
                )?,
            });
        }
        let mut pairs: Vec<(Subset, Rational)> = e.iter().map(|b| (Subset::singleton(b), one.clone())).collect();
        pairs.push((e.clone(), -one.clone()));
        out.push(CatalogEntry {
            name: format!("sum z[I] - z[{en}] <= {}", e.len() - 1),
            ineq: MPInequality::new(h, &pairs, Rational::from_integer((e.len() as i64 - 1).into()))?,
        });
    }
    Ok(out)
}

/// For the cycle `v_1 … v_m` (consecutive vertices joined by 2-edges):
/// `−z_{v_1 v_m} + Σ_{p<m} z_{v_p v_{p+1}} − Σ_{1<p<m} z_{v_p} ≤ 0`.
pub fn cycle_inequality(h: &Hypergraph, cycle: &[usize]) -> Result<MPInequality> {
    let m = cycle.len();
    let one = Rational::one();
    let mut pairs = vec![(Subset::new([cycle[0], cycle[m - 1]]), -one.clone())];
    for p in 0..m - 1 {
        pairs.push((Subset::new([cycle[p], cycle[p + 1]]), one.clone()));
    }
    for &v in &cycle[1..m - 1] {
        pairs.push((Subset::singleton(v), -one.clone()));
    }
    MPInequality::new(h, &pairs, Rational::zero())
}

/// Simple cycles (length ≥ 3) of the graph formed by the 2-edges, each once:
/// starting at its smallest vertex, second vertex smaller than the last.
pub fn simple_cycles(h: &Hypergraph) -> Vec<Vec<usize>> {
    let adj = |a: usize, b: usize| h.is_edge(&Subset::new([a, b]));
    let verts = h.vertices();
    let mut out = Vec::new();
    fn extend(path: &mut Vec<usize>, verts: &[usize], adj: &dyn Fn(usize, usize) -> bool, out: &mut Vec<Vec<usize>>) {
        let start = path[0];
        let last = *path.last().expect("non-empty path");
        for &v in verts {
            if v <= start || path.contains(&v) || !adj(last, v) {
                continue;
            }
            path.push(v);
            if path.len() >= 3 && adj(v, start) && path[1] < v {
                out.push(path.clone());
            }
            extend(path, verts, adj, out);
            path.pop();
        }
    }
    for &s in verts {
        extend(&mut vec![s], verts, &adj, &mut out);
    }
    out
}

/// Standard inequalities, every rotation of every cycle inequality, and
/// every single flip of those, filtered to certified facets of `conv(mpverts)`.
pub fn facet_catalog(h: &Hypergraph, mpverts: &PointSet) -> Result<Vec<CatalogEntry>> {
    let mut candidates = standard_inequalities(h)?;
    for cycle in simple_cycles(h) {
        let m = cycle.len();
        for r in 0..m {
            let rotated: Vec<usize> = (0..m).map(|k| cycle[(k + r) % m]).collect();
            let name = format!(
                "cycle[{}]",
                rotated
                    .iter()
                    .map(|b| format!("I{}", b + 1))
                    .collect::<Vec<_>>()
                    .join(",")
            );
            let ineq = cycle_inequality(h, &rotated)?;
            for &v in h.vertices() {
                candidates.push(CatalogEntry {
                    name: format!("{name} flipped at I{}", v + 1),
                    ineq: flip(&ineq, v, h)?,
                });
            }
            candidates.push(CatalogEntry { name, ineq });
        }
    }
    let mut out: Vec<CatalogEntry> = Vec::new();
    for cand in candidates {
        if out.iter().any(|c| c.ineq == cand.ineq) {
            continue;
        }
        if certify_inequality(&cand.ineq.c, &cand.ineq.delta, mpverts)?.is_facet() {
            out.push(cand);
        }
    }
    Ok(out)
}
