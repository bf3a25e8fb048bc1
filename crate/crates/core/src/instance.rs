//! MCPP instances: the partition of `[n]` into multiple-choice blocks, the
//! monomial terms, and the subset-uniform closure of the monomial family.

use std::collections::{BTreeMap, HashSet};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactmath::{RVector, Rational, Space, Subset};
use crate::hypergraph::Hypergraph;

/// A partition of `[n]` (1-based) into blocks of size at least two.
///
/// Blocks are identified by their 0-based position and displayed as `I1, I2, …`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    n: usize,
    blocks: Vec<Subset>,
    block_of: Vec<usize>,
}

impl Partition {
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let blocks: Vec<Subset> = blocks.into_iter().map(Subset::new).collect();
        let mut owner: Vec<Option<usize>> = vec![None; n + 1];
        for (b, block) in blocks.iter().enumerate() {
            for i in block.iter() {
                if i == 0 || i > n {
                    return Err(Error::BlocksDoNotCoverGround {
                        n,
                        detail: format!("index {i} in block I{} is outside [1..{n}]", b + 1),
                    });
                }
                if let Some(prev) = owner[i] {
                    return Err(Error::OverlappingBlocks {
                        first: prev + 1,
                        second: b + 1,
                        index: i,
                    });
                }
                owner[i] = Some(b);
            }
        }
        if let Some(missing) = (1..=n).find(|&i| owner[i].is_none()) {
            return Err(Error::BlocksDoNotCoverGround {
                n,
                detail: format!("index {missing} is in no block"),
            });
        }
        if let Some(b) = blocks.iter().position(|blk| blk.len() < 2) {
            return Err(Error::SingletonBlock { block: b + 1 });
        }
        let block_of = owner.into_iter().map(|o| o.unwrap_or(usize::MAX)).collect();
        Ok(Partition { n, blocks, block_of })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Subset] {
        &self.blocks
    }

    pub fn block(&self, b: usize) -> &Subset {
        &self.blocks[b]
    }

    /// Block id (0-based) containing index `i` (1-based).
    pub fn block_of(&self, i: usize) -> usize {
        self.block_of[i]
    }

    pub fn max_block_size(&self) -> usize {
        self.blocks.iter().map(Subset::len).max().unwrap_or(0)
    }

    /// The first block that `j` hits twice, if any.
    pub fn repeated_block(&self, j: &Subset) -> Option<usize> {
        let mut seen = HashSet::new();
        j.iter().map(|i| self.block_of(i)).find(|b| !seen.insert(*b))
    }

    /// `E(J)`: the blocks that `J` touches.
    pub fn edge_of(&self, j: &Subset) -> Result<Subset> {
        if let Some(i) = j.iter().find(|&i| i == 0 || i > self.n) {
            return Err(Error::IndexOutOfRange {
                term: j.to_string(),
                index: i,
                n: self.n,
            });
        }
        if let Some(b) = self.repeated_block(j) {
            return Err(Error::MonomialHitsBlockTwice {
                term: j.to_string(),
                block: b + 1,
            });
        }
        Ok(Subset::new(j.iter().map(|i| self.block_of(i))))
    }

    /// All monomials touching exactly the blocks of `e`: `Π_{I∈e} |I|` of them.
    pub fn monomials_over(&self, e: &Subset) -> Vec<Subset> {
        let mut out = vec![Subset::empty()];
        for b in e.iter() {
            out = out
                .iter()
                .flat_map(|j| self.blocks[b].iter().map(move |i| j.with(i)))
                .collect();
        }
        out.sort();
        out
    }
}

/// One term `a_J Π_{i∈J} x_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomial {
    pub vars: Subset,
    pub coef: Rational,
}

impl Monomial {
    pub fn new(vars: impl Into<Subset>, coef: Rational) -> Self {
        Monomial {
            vars: vars.into(),
            coef,
        }
    }
}

/// Unvalidated instance data, as read from a file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawInstance {
    pub n: usize,
    pub blocks: Vec<Vec<usize>>,
    pub terms: Vec<Monomial>,
}

impl RawInstance {
    /// Checks the partition and every term; the first violation is reported.
    pub fn validate(&self) -> Result<Instance> {
        let partition = Partition::new(self.n, self.blocks.clone())?;
        let mut offset = Rational::zero();
        let mut terms = Vec::new();
        let mut seen = HashSet::new();
        for t in &self.terms {
            if t.vars.is_empty() {
                if !seen.insert(Subset::empty()) {
                    return Err(Error::DuplicateTerm { term: "{}".into() });
                }
                offset += &t.coef;
                continue;
            }
            partition.edge_of(&t.vars)?;
            if !seen.insert(t.vars.clone()) {
                return Err(Error::DuplicateTerm {
                    term: t.vars.to_string(),
                });
            }
            terms.push(t.clone());
        }
        Ok(Instance {
            partition,
            terms,
            offset,
        })
    }

    /// Drops monomials that hit a block twice (they vanish on every feasible
    /// point) and merges repeated monomials by adding their coefficients.
    pub fn simplified(&self) -> RawInstance {
        let owner: BTreeMap<usize, usize> = self
            .blocks
            .iter()
            .enumerate()
            .flat_map(|(b, blk)| blk.iter().map(move |&i| (i, b)))
            .collect();
        let mut merged: BTreeMap<Subset, Rational> = BTreeMap::new();
        for t in &self.terms {
            let mut blocks_hit = HashSet::new();
            let vanishes = t
                .vars
                .iter()
                .any(|i| owner.get(&i).is_some_and(|b| !blocks_hit.insert(*b)));
            if vanishes {
                continue;
            }
            *merged.entry(t.vars.clone()).or_default() += &t.coef;
        }
        RawInstance {
            n: self.n,
            blocks: self.blocks.clone(),
            terms: merged.into_iter().map(|(vars, coef)| Monomial { vars, coef }).collect(),
        }
    }
}

/// A validated MCPP instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    partition: Partition,
    terms: Vec<Monomial>,
    offset: Rational,
}

impl Instance {
    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    /// Non-constant terms.
    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    /// Sum of the constant terms (carried outside the coordinate family).
    pub fn offset(&self) -> &Rational {
        &self.offset
    }

    /// `f(x)` for a 0-1 vector `x` indexed `1..=n` (`x[0]` unused).
    pub fn evaluate(&self, x: &[bool]) -> Rational {
        let mut v = self.offset.clone();
        for t in &self.terms {
            if t.vars.iter().all(|i| x[i]) {
                v += &t.coef;
            }
        }
        v
    }

    /// `H(V, E)` with `V` the blocks and `E` the multi-block edges of the terms.
    pub fn hypergraph(&self) -> Hypergraph {
        let edges = self
            .terms
            .iter()
            .map(|t| self.partition.edge_of(&t.vars).expect("validated"))
            .filter(|e| e.len() > 1)
            .collect();
        Hypergraph::new((0..self.partition.num_blocks()).collect(), edges).expect("edges of a validated instance")
    }

    /// `𝒥^H` for the induced hypergraph.
    pub fn family(&self) -> Family {
        Family::new(self.partition.clone(), self.hypergraph())
    }

    /// Coefficient vector over `fam`, zero on added monomials.
    pub fn objective(&self, fam: &Family) -> Result<RVector> {
        RVector::from_pairs(
            fam.space().clone(),
            self.terms.iter().map(|t| (t.vars.clone(), t.coef.clone())),
        )
    }
}

/// Free-function spelling of [`Instance::hypergraph`].
pub fn induce_hypergraph(inst: &Instance) -> Hypergraph {
    inst.hypergraph()
}

/// The subset-uniform family `𝒥^H = ⋃_{e ∈ L(V) ∪ E} 𝒥^e`, grouped by `e`.
///
/// Coordinates are ordered graded-lexicographically.
#[derive(Clone, Debug)]
pub struct Family {
    partition: Partition,
    hypergraph: Hypergraph,
    groups: BTreeMap<Subset, Vec<Subset>>,
    space: Space,
}

impl Family {
    pub fn new(partition: Partition, hypergraph: Hypergraph) -> Self {
        let mut groups = BTreeMap::new();
        for &v in hypergraph.vertices() {
            let e = Subset::singleton(v);
            groups.insert(e.clone(), partition.monomials_over(&e));
        }
        for e in hypergraph.edges() {
            groups.insert(e.clone(), partition.monomials_over(e));
        }
        let mut labels: Vec<Subset> = groups.values().flatten().cloned().collect();
        labels.sort();
        let space = Space::new(labels).expect("groups over distinct edges are disjoint");
        Family {
            partition,
            hypergraph,
            groups,
            space,
        }
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn hypergraph(&self) -> &Hypergraph {
        &self.hypergraph
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.space.len()
    }

    pub fn is_empty(&self) -> bool {
        self.space.is_empty()
    }

    pub fn contains(&self, j: &Subset) -> bool {
        self.space.contains(j)
    }

    /// `(e, 𝒥^e)` for `e ∈ L(V) ∪ E`.
    pub fn groups(&self) -> impl Iterator<Item = (&Subset, &[Subset])> {
        self.groups.iter().map(|(e, js)| (e, js.as_slice()))
    }

    /// `𝒥^e`, or `None` if `e ∉ L(V) ∪ E`.
    pub fn group(&self, e: &Subset) -> Option<&[Subset]> {
        self.groups.get(e).map(Vec::as_slice)
    }

    /// Checks that `d` holds exactly one index of every block of `V`.
    pub fn check_transversal(&self, d: &Subset) -> Result<()> {
        let verts = self.hypergraph.vertices();
        let mut hit = HashSet::new();
        for i in d.iter() {
            if i == 0 || i > self.partition.n() {
                return Err(Error::InvalidTransversal(format!("index {i} out of range")));
            }
            let b = self.partition.block_of(i);
            if !verts.contains(&b) {
                return Err(Error::InvalidTransversal(format!(
                    "index {i} lies in block I{} outside V",
                    b + 1
                )));
            }
            if !hit.insert(b) {
                return Err(Error::InvalidTransversal(format!("block I{} is hit twice", b + 1)));
            }
        }
        if hit.len() != verts.len() {
            return Err(Error::InvalidTransversal(format!(
                "{} of {} blocks covered",
                hit.len(),
                verts.len()
            )));
        }
        Ok(())
    }

    /// `𝒥^H_≤(D)`: the coordinates avoiding `D`.
    pub fn leq_space(&self, d: &Subset) -> Result<Space> {
        self.check_transversal(d)?;
        Ok(self.space.restrict(|j| j.iter().all(|i| !d.contains(i))))
    }

    /// The family of a sub-hypergraph, sharing this partition.
    pub fn restrict_to(&self, sub: &Hypergraph) -> Family {
        Family::new(self.partition.clone(), sub.clone())
    }
}

/// Free-function spelling of [`Family::new`].
pub fn close_family(partition: &Partition, h: &Hypergraph) -> Family {
    Family::new(partition.clone(), h.clone())
}
