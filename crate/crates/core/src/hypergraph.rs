//! Hypergraphs over partition blocks, α-acyclicity (GYO reduction), join
//! trees and downward-closedness.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::exactmath::Subset;

/// `H(V, E)`: vertices are block ids, edges are sets of at least two blocks.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Hypergraph {
    vertices: Vec<usize>,
    edges: Vec<Subset>,
}

impl Hypergraph {
    pub fn new(vertices: Vec<usize>, edges: Vec<Subset>) -> Result<Self> {
        let vertices: Vec<usize> = vertices.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        let mut clean = BTreeSet::new();
        for e in edges {
            if e.len() < 2 {
                return Err(Error::InvalidInstance(format!(
                    "hyperedge {e} has fewer than two blocks"
                )));
            }
            if let Some(v) = e.iter().find(|v| vertices.binary_search(v).is_err()) {
                return Err(Error::InvalidInstance(format!(
                    "hyperedge {e} uses block {v} outside V"
                )));
            }
            clean.insert(e);
        }
        Ok(Hypergraph {
            vertices,
            edges: clean.into_iter().collect(),
        })
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Subset] {
        &self.edges
    }

    pub fn is_edge(&self, e: &Subset) -> bool {
        self.edges.binary_search(e).is_ok()
    }

    /// `L(V) ∪ E`, graded-lex ordered.
    pub fn singletons_and_edges(&self) -> Vec<Subset> {
        let mut all: Vec<Subset> = self.vertices.iter().map(|&v| Subset::singleton(v)).collect();
        all.extend(self.edges.iter().cloned());
        all.sort();
        all
    }

    /// `e ∈ L(V) ∪ E`.
    pub fn is_singleton_or_edge(&self, e: &Subset) -> bool {
        (e.len() == 1 && self.vertices.binary_search(&e.as_slice()[0]).is_ok()) || self.is_edge(e)
    }

    /// Largest edge size (1 when there are no edges but some vertex).
    pub fn rank(&self) -> usize {
        self.edges
            .iter()
            .map(Subset::len)
            .max()
            .unwrap_or(usize::from(!self.vertices.is_empty()))
    }

    /// Vertex and edge union.
    pub fn union(&self, other: &Hypergraph) -> Hypergraph {
        Hypergraph::new(
            self.vertices.iter().chain(&other.vertices).copied().collect(),
            self.edges.iter().chain(&other.edges).cloned().collect(),
        )
        .expect("union of valid hypergraphs")
    }

    pub fn is_subhypergraph_of(&self, other: &Hypergraph) -> bool {
        self.vertices.iter().all(|v| other.vertices.contains(v)) && self.edges.iter().all(|e| other.is_edge(e))
    }
}

impl fmt::Debug for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "H(V={:?}, E={:?})", self.vertices, self.edges)
    }
}

/// A tree over the edges of `H` with the running-intersection property.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JoinTree {
    nodes: Vec<Subset>,
    links: Vec<(usize, usize)>,
}

impl JoinTree {
    /// Builds and verifies a join tree from node-index pairs.
    pub fn new(nodes: Vec<Subset>, links: Vec<(usize, usize)>) -> Result<Self> {
        let mut links: Vec<(usize, usize)> = links.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
        links.sort_unstable();
        let t = JoinTree { nodes, links };
        t.verify()?;
        Ok(t)
    }

    pub fn nodes(&self) -> &[Subset] {
        &self.nodes
    }

    /// Tree edges as pairs of node indices, `a < b`.
    pub fn links(&self) -> &[(usize, usize)] {
        &self.links
    }

    /// Tree edges as pairs of hyperedges.
    pub fn edge_pairs(&self) -> impl Iterator<Item = (&Subset, &Subset)> {
        self.links.iter().map(|&(a, b)| (&self.nodes[a], &self.nodes[b]))
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for &(a, b) in &self.links {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    /// Nodes on the tree path from `a` to `b`, inclusive.
    fn path(&self, adj: &[Vec<usize>], a: usize, b: usize) -> Option<Vec<usize>> {
        let mut parent = vec![usize::MAX; self.nodes.len()];
        parent[a] = a;
        let mut queue = VecDeque::from([a]);
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if parent[v] == usize::MAX {
                    parent[v] = u;
                    queue.push_back(v);
                }
            }
        }
        if parent[b] == usize::MAX {
            return None;
        }
        let mut out = vec![b];
        let mut cur = b;
        while cur != a {
            cur = parent[cur];
            out.push(cur);
        }
        Some(out)
    }

    /// Tree shape plus running intersection over all node pairs.
    pub fn verify(&self) -> Result<()> {
        let k = self.nodes.len();
        if k > 0 && self.links.len() != k - 1 {
            return Err(Error::InvalidJoinTree(format!(
                "{} links for {} nodes",
                self.links.len(),
                k
            )));
        }
        if k == 0 && !self.links.is_empty() {
            return Err(Error::InvalidJoinTree("links without nodes".into()));
        }
        if let Some(&(a, b)) = self.links.iter().find(|&&(a, b)| a == b || b >= k) {
            return Err(Error::InvalidJoinTree(format!("bad link ({a}, {b})")));
        }
        let adj = self.adjacency();
        for a in 0..k {
            for b in a + 1..k {
                let Some(path) = self.path(&adj, a, b) else {
                    return Err(Error::InvalidJoinTree("tree is disconnected".into()));
                };
                let common = self.nodes[a].intersection(&self.nodes[b]);
                if let Some(&bad) = path.iter().find(|&&u| !common.is_subset_of(&self.nodes[u])) {
                    return Err(Error::InvalidJoinTree(format!(
                        "{} ∩ {} = {} not contained in {} on their path",
                        self.nodes[a], self.nodes[b], common, self.nodes[bad]
                    )));
                }
            }
        }
        Ok(())
    }

    /// Checks that this is a join tree of `h` (nodes are exactly `E`).
    pub fn check_for(&self, h: &Hypergraph) -> Result<()> {
        let mut nodes = self.nodes.clone();
        nodes.sort();
        if nodes != h.edges() {
            return Err(Error::InvalidJoinTree("nodes differ from the hyperedges".into()));
        }
        self.verify()
    }
}

/// Outcome of the GYO reduction.
#[derive(Clone, Debug)]
pub enum Acyclicity {
    Acyclic(JoinTree),
    /// The irreducible remainder of the reduction.
    Cyclic {
        residual: Hypergraph,
    },
}

impl Acyclicity {
    pub fn is_acyclic(&self) -> bool {
        matches!(self, Acyclicity::Acyclic(_))
    }
}

/// GYO: repeatedly drop vertices that lie in a single edge and edges
/// contained in another edge. The hypergraph is α-acyclic iff nothing is left.
fn gyo_residual(h: &Hypergraph) -> Vec<BTreeSet<usize>> {
    let mut edges: Vec<BTreeSet<usize>> = h.edges.iter().map(|e| e.iter().collect()).collect();
    loop {
        let mut changed = false;
        let all: Vec<usize> = edges
            .iter()
            .flatten()
            .copied()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        for v in all {
            let holders: Vec<usize> = (0..edges.len()).filter(|&i| edges[i].contains(&v)).collect();
            if holders.len() == 1 {
                edges[holders[0]].remove(&v);
                changed = true;
            }
        }
        let mut i = 0;
        while i < edges.len() {
            let absorbed = edges[i].is_empty()
                || (0..edges.len()).any(|k| k != i && edges[i].is_subset(&edges[k]) && (edges[i] != edges[k] || k < i));
            if absorbed {
                edges.remove(i);
                changed = true;
            } else {
                i += 1;
            }
        }
        if !changed {
            return edges;
        }
    }
}

/// α-acyclicity with a join tree as witness, or the GYO residual as
/// counter-witness.
pub fn is_alpha_acyclic(h: &Hypergraph) -> Acyclicity {
    let residual = gyo_residual(h);
    if residual.is_empty() {
        let tree = max_weight_spanning_tree(h)
            .expect("a maximum-weight spanning tree of an alpha-acyclic hypergraph is a join tree");
        Acyclicity::Acyclic(tree)
    } else {
        let verts: BTreeSet<usize> = residual.iter().flatten().copied().collect();
        let residual = Hypergraph::new(
            verts.into_iter().collect(),
            residual.into_iter().map(Subset::new).collect(),
        )
        .expect("GYO residual edges have at least two vertices");
        Acyclicity::Cyclic { residual }
    }
}

/// Kruskal on weights `|e ∩ e'|`, heavier first, ties by node index order.
fn max_weight_spanning_tree(h: &Hypergraph) -> Result<JoinTree> {
    let nodes = h.edges.to_vec();
    let k = nodes.len();
    let mut pairs: Vec<(usize, usize, usize)> = Vec::new();
    for a in 0..k {
        for b in a + 1..k {
            pairs.push((nodes[a].intersection(&nodes[b]).len(), a, b));
        }
    }
    pairs.sort_by(|x, y| y.0.cmp(&x.0).then((x.1, x.2).cmp(&(y.1, y.2))));
    let mut root: Vec<usize> = (0..k).collect();
    fn find(root: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while root[r] != r {
            r = root[r];
        }
        root[x] = r;
        r
    }
    let mut links = Vec::new();
    for (_, a, b) in pairs {
        let (ra, rb) = (find(&mut root, a), find(&mut root, b));
        if ra != rb {
            root[ra] = rb;
            links.push((a, b));
        }
    }
    JoinTree::new(nodes, links)
}

/// A deterministic join tree: maximum-weight spanning tree of the
/// intersection graph, verified before it is returned.
pub fn build_join_tree(h: &Hypergraph) -> Result<JoinTree> {
    match is_alpha_acyclic(h) {
        Acyclicity::Acyclic(t) => Ok(t),
        Acyclicity::Cyclic { .. } => Err(Error::NotAlphaAcyclic),
    }
}

/// Every labelled tree on `k` nodes, via Prüfer sequences.
pub fn all_spanning_trees(k: usize) -> Vec<Vec<(usize, usize)>> {
    match k {
        0 | 1 => return vec![Vec::new()],
        2 => return vec![vec![(0, 1)]],
        _ => {}
    }
    let total = k.pow((k - 2) as u32);
    (0..total)
        .map(|mut code| {
            let seq: Vec<usize> = (0..k - 2)
                .map(|_| {
                    let d = code % k;
                    code /= k;
                    d
                })
                .collect();
            let mut degree = vec![1usize; k];
            for &s in &seq {
                degree[s] += 1;
            }
            let mut links = Vec::with_capacity(k - 1);
            for &s in &seq {
                let leaf = (0..k).find(|&v| degree[v] == 1).expect("a leaf exists");
                links.push((leaf.min(s), leaf.max(s)));
                degree[leaf] -= 1;
                degree[s] -= 1;
            }
            let rest: Vec<usize> = (0..k).filter(|&v| degree[v] == 1).collect();
            links.push((rest[0], rest[1]));
            links.sort_unstable();
            links
        })
        .collect()
}

/// All join trees of `h` by exhaustive search; refuses more than `max_edges`
/// hyperedges.
pub fn all_join_trees(h: &Hypergraph, max_edges: usize) -> Result<Vec<JoinTree>> {
    let k = h.edges.len();
    if k > max_edges {
        return Err(Error::GuardExceeded {
            what: "join tree search hyperedges",
            required: k as u128,
            limit: max_edges as u128,
        });
    }
    Ok(all_spanning_trees(k)
        .into_iter()
        .filter_map(|links| JoinTree::new(h.edges.clone(), links).ok())
        .collect())
}

/// Every subset of size > 1 of every edge is an edge.
pub fn is_downward_closed(h: &Hypergraph) -> bool {
    h.edges
        .iter()
        .all(|e| e.subsets().iter().filter(|s| s.len() > 1).all(|s| h.is_edge(s)))
}

/// The smallest downward-closed hypergraph on `V` containing `h`.
pub fn downward_closure(h: &Hypergraph) -> Hypergraph {
    let edges = h
        .edges
        .iter()
        .flat_map(|e| e.subsets().into_iter().filter(|s| s.len() > 1))
        .collect();
    Hypergraph::new(h.vertices.clone(), edges).expect("subsets of valid edges")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hg(nv: usize, edges: &[&[usize]]) -> Hypergraph {
        Hypergraph::new(
            (0..nv).collect(),
            edges.iter().map(|e| Subset::new(e.iter().copied())).collect(),
        )
        .unwrap()
    }

    fn acyclic_by_exhaustion(h: &Hypergraph) -> bool {
        all_spanning_trees(h.edges().len())
            .into_iter()
            .any(|links| JoinTree::new(h.edges().to_vec(), links).is_ok())
    }

    #[test]
    fn acyclicity_examples() {
        assert!(is_alpha_acyclic(&hg(2, &[&[0, 1]])).is_acyclic());
        let path3 = hg(3, &[&[0, 1], &[1, 2]]);
        match is_alpha_acyclic(&path3) {
            Acyclicity::Acyclic(t) => assert_eq!(t.links(), &[(0, 1)]),
            other => panic!("{other:?}"),
        }
        let tri = hg(3, &[&[0, 1], &[1, 2], &[0, 2]]);
        match is_alpha_acyclic(&tri) {
            Acyclicity::Cyclic { residual } => assert_eq!(residual, tri),
            other => panic!("{other:?}"),
        }
        assert!(!acyclic_by_exhaustion(&tri));
        assert_eq!(all_spanning_trees(3).len(), 3);
        assert!(matches!(build_join_tree(&tri), Err(Error::NotAlphaAcyclic)));
    }

    #[test]
    fn join_tree_shapes() {
        let single = build_join_tree(&hg(2, &[&[0, 1]])).unwrap();
        assert_eq!(single.nodes().len(), 1);
        assert!(single.links().is_empty());
        let star = hg(5, &[&[0, 1], &[0, 2], &[0, 3], &[0, 4]]);
        let t = build_join_tree(&star).unwrap();
        t.check_for(&star).unwrap();
        assert_eq!(t.links().len(), 3);
        // every spanning tree of a star's edges is a join tree
        assert_eq!(all_join_trees(&star, 5).unwrap().len(), 16);
    }

    #[test]
    fn running_intersection_is_enforced() {
        let h = hg(4, &[&[0, 1, 2], &[0, 1], &[1, 2]]);
        let nodes = h.edges().to_vec(); // {0,1}, {1,2}, {0,1,2}
        assert!(JoinTree::new(nodes.clone(), vec![(0, 2), (1, 2)]).is_ok());
        assert!(JoinTree::new(nodes.clone(), vec![(0, 1), (1, 2)]).is_err());
        assert!(JoinTree::new(nodes, vec![(0, 2)]).is_err());
    }

    #[test]
    fn isolated_vertices_and_empty_edge_sets() {
        let h = hg(3, &[]);
        assert!(is_alpha_acyclic(&h).is_acyclic());
        assert!(build_join_tree(&h).unwrap().nodes().is_empty());
        let forest = hg(5, &[&[0, 1], &[3, 4]]);
        build_join_tree(&forest).unwrap().check_for(&forest).unwrap();
    }

    #[test]
    fn downward_closedness() {
        assert!(is_downward_closed(&hg(4, &[&[0, 1], &[1, 2], &[2, 3], &[0, 3]])));
        let three = hg(3, &[&[0, 1, 2]]);
        assert!(!is_downward_closed(&three));
        let closed = downward_closure(&three);
        assert_eq!(closed.edges().len(), 4);
        assert!(is_downward_closed(&closed));
        assert_eq!(downward_closure(&closed), closed);
        let full = hg(3, &[&[0, 1, 2], &[0, 1], &[1, 2], &[0, 2]]);
        assert!(is_downward_closed(&full));
    }

    #[test]
    fn gyo_agrees_with_exhaustive_search() {
        // all hypergraphs on 4 vertices with up to 4 edges drawn from a pool
        let pool: Vec<Subset> = Subset::new(0..4)
            .subsets()
            .into_iter()
            .filter(|s| s.len() > 1)
            .collect();
        let m = pool.len();
        let mut checked = 0;
        for mask in 0u32..(1 << m) {
            if mask.count_ones() > 4 {
                continue;
            }
            let edges: Vec<Subset> = (0..m).filter(|b| mask >> b & 1 == 1).map(|b| pool[b].clone()).collect();
            let h = Hypergraph::new((0..4).collect(), edges).unwrap();
            let gyo = is_alpha_acyclic(&h);
            assert_eq!(gyo.is_acyclic(), acyclic_by_exhaustion(&h), "{h:?}");
            if let Acyclicity::Acyclic(t) = gyo {
                t.check_for(&h).unwrap();
            }
            checked += 1;
        }
        assert_eq!(checked, 562);
    }
}
