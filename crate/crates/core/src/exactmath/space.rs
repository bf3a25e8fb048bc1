use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{affine_rank, dot, Rational};
use crate::error::{Error, Result};

/// A finite set of natural numbers, stored sorted and duplicate-free.
///
/// Used both for monomials `J ⊆ [n]` (1-based variable indices) and for
/// hyperedges `e ⊆ V` (0-based block ids). Ordered graded-lexicographically:
/// smaller sets first, then lexicographically on the sorted elements.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Subset(Vec<usize>);

impl Subset {
    pub fn new(items: impl IntoIterator<Item = usize>) -> Self {
        let mut v: Vec<usize> = items.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Subset(v)
    }

    pub fn empty() -> Self {
        Subset(Vec::new())
    }

    pub fn singleton(i: usize) -> Self {
        Subset(vec![i])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.0.binary_search(&x).is_ok()
    }

    pub fn is_subset_of(&self, other: &Subset) -> bool {
        self.0.iter().all(|x| other.contains(*x))
    }

    pub fn union(&self, other: &Subset) -> Subset {
        Subset::new(self.iter().chain(other.iter()))
    }

    pub fn intersection(&self, other: &Subset) -> Subset {
        Subset(self.0.iter().copied().filter(|x| other.contains(*x)).collect())
    }

    pub fn difference(&self, other: &Subset) -> Subset {
        Subset(self.0.iter().copied().filter(|x| !other.contains(*x)).collect())
    }

    pub fn without(&self, x: usize) -> Subset {
        Subset(self.0.iter().copied().filter(|y| *y != x).collect())
    }

    pub fn with(&self, x: usize) -> Subset {
        Subset::new(self.iter().chain(std::iter::once(x)))
    }

    /// All subsets, in graded-lex order.
    pub fn subsets(&self) -> Vec<Subset> {
        let k = self.len();
        let mut out: Vec<Subset> = (0u64..(1u64 << k))
            .map(|mask| Subset((0..k).filter(|b| mask >> b & 1 == 1).map(|b| self.0[b]).collect()))
            .collect();
        out.sort();
        out
    }

    /// Writes the set as `{1,3}` with an offset added to every element.
    pub fn display_offset(&self, offset: usize) -> String {
        let items: Vec<String> = self.0.iter().map(|x| (x + offset).to_string()).collect();
        format!("{{{}}}", items.join(","))
    }
}

impl Ord for Subset {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Subset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_offset(0))
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_offset(0))
    }
}

impl From<Vec<usize>> for Subset {
    fn from(v: Vec<usize>) -> Self {
        Subset::new(v)
    }
}

impl<const N: usize> From<[usize; N]> for Subset {
    fn from(v: [usize; N]) -> Self {
        Subset::new(v)
    }
}

struct SpaceInner {
    labels: Vec<Subset>,
    index: HashMap<Subset, usize>,
}

/// An ordered, duplicate-free list of coordinate labels. Cheap to clone.
#[derive(Clone)]
pub struct Space(Arc<SpaceInner>);

impl Space {
    pub fn new(labels: Vec<Subset>) -> Result<Self> {
        let mut index = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(l.to_string()));
            }
        }
        Ok(Space(Arc::new(SpaceInner { labels, index })))
    }

    pub fn len(&self) -> usize {
        self.0.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.labels.is_empty()
    }

    pub fn labels(&self) -> &[Subset] {
        &self.0.labels
    }

    pub fn label(&self, i: usize) -> &Subset {
        &self.0.labels[i]
    }

    pub fn position(&self, label: &Subset) -> Option<usize> {
        self.0.index.get(label).copied()
    }

    pub fn contains(&self, label: &Subset) -> bool {
        self.0.index.contains_key(label)
    }

    /// The sub-space of labels satisfying `keep`, order preserved.
    pub fn restrict(&self, keep: impl Fn(&Subset) -> bool) -> Space {
        Space::new(self.labels().iter().filter(|l| keep(l)).cloned().collect())
            .expect("restriction of a duplicate-free space")
    }

    pub fn ensure_same(&self, other: &Space) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::LabelMismatch(format!(
                "{} labels vs {} labels",
                self.len(),
                other.len()
            )))
        }
    }

    /// Copies the coordinates of `values` (living in `self`) that exist in
    /// `target`, in `target` order. Fails if `target` has a label missing here.
    pub fn project(&self, values: &[Rational], target: &Space) -> Result<Vec<Rational>> {
        target
            .labels()
            .iter()
            .map(|l| {
                self.position(l)
                    .map(|i| values[i].clone())
                    .ok_or_else(|| Error::LabelMismatch(format!("{l} not in source space")))
            })
            .collect()
    }

    /// Embeds `values` from `source` into `self`, zero elsewhere.
    pub fn embed(&self, values: &[Rational], source: &Space) -> Result<Vec<Rational>> {
        let mut out = vec![Rational::zero(); self.len()];
        for (l, v) in source.labels().iter().zip(values) {
            let i = self
                .position(l)
                .ok_or_else(|| Error::LabelMismatch(format!("{l} not in target space")))?;
            out[i] = v.clone();
        }
        Ok(out)
    }
}

impl PartialEq for Space {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.labels == other.0.labels
    }
}

impl Eq for Space {}

impl fmt::Debug for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.labels()).finish()
    }
}

/// A dense rational vector over a labelled space.
#[derive(Clone, PartialEq, Eq)]
pub struct RVector {
    space: Space,
    values: Vec<Rational>,
}

impl RVector {
    pub fn new(space: Space, values: Vec<Rational>) -> Result<Self> {
        if space.len() != values.len() {
            return Err(Error::LabelMismatch(format!(
                "{} values for {} labels",
                values.len(),
                space.len()
            )));
        }
        Ok(RVector { space, values })
    }

    pub fn zeros(space: Space) -> Self {
        let values = vec![Rational::zero(); space.len()];
        RVector { space, values }
    }

    /// Builds a vector from `(label, value)` pairs; repeated labels add up.
    pub fn from_pairs(space: Space, pairs: impl IntoIterator<Item = (Subset, Rational)>) -> Result<Self> {
        let mut v = RVector::zeros(space);
        for (l, x) in pairs {
            let i = v
                .space
                .position(&l)
                .ok_or_else(|| Error::LabelMismatch(format!("{l} is not a coordinate")))?;
            v.values[i] += x;
        }
        Ok(v)
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Rational> {
        self.values
    }

    pub fn get(&self, label: &Subset) -> Option<&Rational> {
        self.space.position(label).map(|i| &self.values[i])
    }

    pub fn dot(&self, point: &[Rational]) -> Rational {
        dot(&self.values, point)
    }

    pub fn scaled(&self, k: &Rational) -> RVector {
        RVector {
            space: self.space.clone(),
            values: self.values.iter().map(|x| x * k).collect(),
        }
    }

    /// Non-zero entries as `(label, value)`.
    pub fn support(&self) -> impl Iterator<Item = (&Subset, &Rational)> {
        self.space
            .labels()
            .iter()
            .zip(&self.values)
            .filter(|(_, v)| !v.is_zero())
    }
}

impl fmt::Debug for RVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.support().map(|(l, v)| format!("{v}*w{l}")).collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// A finite list of points over one space (a V-representation).
///
/// The affine dimension is computed lazily and cached.
#[derive(Clone)]
pub struct PointSet {
    space: Space,
    points: Vec<Vec<Rational>>,
    dim: OnceLock<Option<usize>>,
}

impl PointSet {
    pub fn new(space: Space, points: Vec<Vec<Rational>>) -> Result<Self> {
        if let Some(p) = points.iter().find(|p| p.len() != space.len()) {
            return Err(Error::LabelMismatch(format!(
                "point of length {} in a space of {} labels",
                p.len(),
                space.len()
            )));
        }
        Ok(PointSet {
            space,
            points,
            dim: OnceLock::new(),
        })
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn points(&self) -> &[Vec<Rational>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: &[Rational]) -> bool {
        self.points.iter().any(|q| q.as_slice() == p)
    }

    /// Dimension of the affine hull, `None` for the empty set.
    pub fn dim(&self) -> Option<usize> {
        *self.dim.get_or_init(|| affine_rank(&self.points))
    }

    /// Points sorted lexicographically, duplicates removed.
    pub fn canonical(&self) -> Vec<Vec<Rational>> {
        let mut v = self.points.clone();
        v.sort();
        v.dedup();
        v
    }

    /// Same points (as sets) over the same space.
    pub fn same_points(&self, other: &PointSet) -> bool {
        self.space == other.space && self.canonical() == other.canonical()
    }

    /// Projection onto a sub-space whose labels all exist here.
    pub fn project(&self, target: &Space) -> Result<PointSet> {
        let pts = self
            .points
            .iter()
            .map(|p| self.space.project(p, target))
            .collect::<Result<Vec<_>>>()?;
        PointSet::new(target.clone(), pts)
    }

    pub fn barycenter(&self) -> Option<Vec<Rational>> {
        if self.points.is_empty() {
            return None;
        }
        let k = Rational::from_integer(self.points.len().into());
        let mut acc = vec![Rational::zero(); self.space.len()];
        for p in &self.points {
            for (a, x) in acc.iter_mut().zip(p) {
                *a += x;
            }
        }
        Some(acc.into_iter().map(|a| a / &k).collect())
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PointSet")
            .field("labels", &self.space)
            .field("points", &self.points.len())
            .finish()
    }
}
