//! Named desk-scale instances shared by the theorem checks, the CLI and the
//! tests. Indices are 1-based; every term has coefficient 1.

use crate::exactmath::{int, Subset};
use crate::hypergraph::Hypergraph;
use crate::instance::{Instance, Monomial, RawInstance};

#[derive(Clone, Debug)]
pub struct BatteryInstance {
    pub name: &'static str,
    pub instance: Instance,
}

fn build(name: &'static str, block_sizes: &[usize], terms: &[&[usize]]) -> BatteryInstance {
    let mut blocks = Vec::new();
    let mut next = 1;
    for &s in block_sizes {
        blocks.push((next..next + s).collect());
        next += s;
    }
    let raw = RawInstance {
        n: next - 1,
        blocks,
        terms: terms
            .iter()
            .map(|t| Monomial::new(Subset::new(t.iter().copied()), int(1)))
            .collect(),
    };
    BatteryInstance {
        name,
        instance: raw.validate().expect("battery instances are valid"),
    }
}

/// One edge over blocks of sizes 2 and 2.
pub fn edge22() -> BatteryInstance {
    build("EDGE22", &[2, 2], &[&[1, 3]])
}

pub fn edge32() -> BatteryInstance {
    build("EDGE32", &[3, 2], &[&[1, 4]])
}

pub fn edge33() -> BatteryInstance {
    build("EDGE33", &[3, 3], &[&[1, 4]])
}

/// `{I1I2}, {I2I3}`.
pub fn path3() -> BatteryInstance {
    build("PATH3", &[2, 2, 2], &[&[1, 3], &[3, 5]])
}

/// Centre `I1` with three leaves.
pub fn star3() -> BatteryInstance {
    build("STAR3", &[2, 2, 2, 2], &[&[1, 3], &[1, 5], &[1, 7]])
}

/// Centre `I1` with four leaves (26 coordinates).
pub fn star4() -> BatteryInstance {
    build("STAR4", &[2, 2, 2, 2, 2], &[&[1, 3], &[1, 5], &[1, 7], &[1, 9]])
}

/// `{I1I2I3}` with the pairs `{I1I2}, {I2I3}`.
pub fn tri_edge_pairs() -> BatteryInstance {
    build("EDGE3P", &[2, 2, 2], &[&[1, 3, 5], &[1, 3], &[3, 5]])
}

/// `{I1I2I3}` with all three pairs.
pub fn tri_edge_closed() -> BatteryInstance {
    build("EDGE3C", &[2, 2, 2], &[&[1, 3, 5], &[1, 3], &[3, 5], &[1, 5]])
}

/// `{I1I2I3}, {I2I3I4}`.
pub fn two3() -> BatteryInstance {
    build("TWO3", &[2, 2, 2, 2], &[&[1, 3, 5], &[3, 5, 7]])
}

/// `{I1I2I3}, {I3I4}` and an isolated `I5`.
pub fn five() -> BatteryInstance {
    build("FIVE", &[2, 2, 2, 2, 2], &[&[1, 3, 5], &[5, 7]])
}

/// No edges at all.
pub fn empty() -> BatteryInstance {
    build("EMPTY", &[2, 2], &[])
}

/// `{I1I2}, {I3I4}`: two components.
pub fn disjoint() -> BatteryInstance {
    build("DISJOINT", &[2, 2, 2, 2], &[&[1, 3], &[5, 7]])
}

/// `{I1I2I3}, {I2I3I4}, {I2I3}` (28 coordinates).
pub fn shared_edge() -> BatteryInstance {
    build("SHARED", &[2, 2, 2, 2], &[&[1, 3, 5], &[3, 5, 7], &[3, 5]])
}

/// The 4-cycle `I1 I2 I3 I4`.
pub fn c4() -> BatteryInstance {
    build("C4", &[2, 2, 2, 2], &[&[1, 3], &[3, 5], &[5, 7], &[1, 7]])
}

/// The triangle with the disagreement objective: every edge rewards the two
/// blocks choosing different indices.
pub fn tri() -> BatteryInstance {
    build(
        "TRI",
        &[2, 2, 2],
        &[&[1, 4], &[2, 3], &[3, 6], &[4, 5], &[1, 6], &[2, 5]],
    )
}

/// Every named instance.
pub fn all() -> Vec<BatteryInstance> {
    vec![
        edge22(),
        edge32(),
        edge33(),
        path3(),
        star3(),
        star4(),
        tri_edge_pairs(),
        tri_edge_closed(),
        two3(),
        five(),
        empty(),
        disjoint(),
        shared_edge(),
        c4(),
        tri(),
    ]
}

/// The α-acyclic instances small enough (at most 24 coordinates) for
/// vertex enumeration of the join-tree relaxation.
pub fn enumeration_battery() -> Vec<BatteryInstance> {
    vec![
        edge22(),
        edge32(),
        edge33(),
        path3(),
        star3(),
        tri_edge_pairs(),
        two3(),
        five(),
    ]
}

pub fn by_name(name: &str) -> Option<BatteryInstance> {
    all().into_iter().find(|b| b.name.eq_ignore_ascii_case(name))
}

/// `H` over explicit blocks, for split halves and test fixtures.
pub fn hypergraph(vertices: &[usize], edges: &[&[usize]]) -> Hypergraph {
    Hypergraph::new(
        vertices.to_vec(),
        edges.iter().map(|e| Subset::new(e.iter().copied())).collect(),
    )
    .expect("well-formed hypergraph")
}
