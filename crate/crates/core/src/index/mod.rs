//! Multi-indices, dimension subsets, finite index sets and search spaces.
//!
//! Dimension labels are 0-based internally and printed 1-based.

mod candidates;
mod space;

pub use candidates::{candidate_set, splice, splice_full};
pub use space::{Count, Projection, SearchSpace, SpaceKind, DEFAULT_ENUMERATION_LIMIT};

use crate::error::{Error, Result};
use std::cmp::Ordering;
use std::fmt;

/// A frequency tuple. Lexicographic order on slices is the crate-wide order.
pub type MultiIndex = Vec<i64>;

/// Number of nonzero entries.
pub fn nnz(k: &[i64]) -> usize {
    k.iter().filter(|&&v| v != 0).count()
}

/// Strictly increasing list of dimension labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DimSubset(Vec<usize>);

impl DimSubset {
    pub fn new(mut dims: Vec<usize>) -> Result<Self> {
        let n = dims.len();
        dims.sort_unstable();
        dims.dedup();
        if dims.len() != n {
            return Err(Error::InvalidParameter("duplicate dimension label".into()));
        }
        Ok(DimSubset(dims))
    }

    pub fn single(j: usize) -> Self {
        DimSubset(vec![j])
    }

    /// `{0, …, d-1}`.
    pub fn full(d: usize) -> Self {
        DimSubset((0..d).collect())
    }

    pub fn empty() -> Self {
        DimSubset(Vec::new())
    }

    pub fn dims(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn leading(&self) -> usize {
        self.0.first().copied().unwrap_or(usize::MAX)
    }

    pub fn contains(&self, j: usize) -> bool {
        self.0.binary_search(&j).is_ok()
    }

    pub fn complement(&self, d: usize) -> Self {
        DimSubset((0..d).filter(|j| !self.contains(*j)).collect())
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.0.iter().all(|j| !other.contains(*j))
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.0.iter().all(|j| other.contains(*j))
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        v.sort_unstable();
        v.dedup();
        DimSubset(v)
    }

    /// Positions of `sub`'s labels inside `self`.
    pub fn positions_of(&self, sub: &Self) -> Result<Vec<usize>> {
        sub.0
            .iter()
            .map(|j| {
                self.0.binary_search(j).map_err(|_| {
                    Error::InvalidParameter(format!("dimension {} not in {}", j + 1, self))
                })
            })
            .collect()
    }

    /// Stable 64-bit tag for seeding.
    pub fn tag(&self) -> u64 {
        self.0
            .iter()
            .fold(0xcbf2_9ce4_8422_2325u64, |h, &j| {
                (h ^ (j as u64 + 1)).wrapping_mul(0x100_0000_01b3)
            })
    }
}

impl fmt::Display for DimSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, j) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", j + 1)?;
        }
        write!(f, "}}")
    }
}

/// Finite set of multi-indices on a dimension subset, stored flat and kept in
/// ascending lexicographic order without duplicates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexSet {
    dims: DimSubset,
    data: Vec<i64>,
    len: usize,
}

impl IndexSet {
    pub fn empty(dims: DimSubset) -> Self {
        IndexSet {
            dims,
            data: Vec::new(),
            len: 0,
        }
    }

    pub fn from_members<I>(dims: DimSubset, members: I) -> Result<Self>
    where
        I: IntoIterator<Item = MultiIndex>,
    {
        let t = dims.len();
        let mut v: Vec<MultiIndex> = Vec::new();
        for k in members {
            if k.len() != t {
                return Err(Error::DimensionMismatch {
                    expected: t,
                    got: k.len(),
                });
            }
            v.push(k);
        }
        v.sort_unstable();
        v.dedup();
        let len = v.len();
        Ok(IndexSet {
            dims,
            data: v.concat(),
            len,
        })
    }

    /// Trusts the caller that `data` is sorted and duplicate-free.
    pub(crate) fn from_sorted_flat(dims: DimSubset, data: Vec<i64>, len: usize) -> Self {
        debug_assert_eq!(data.len(), len * dims.len());
        IndexSet { dims, data, len }
    }

    /// Sorts and deduplicates a flat buffer of `len` rows.
    pub(crate) fn from_flat(dims: DimSubset, data: Vec<i64>) -> Self {
        let t = dims.len();
        if t == 0 {
            let len = usize::from(!data.is_empty());
            return IndexSet {
                dims,
                data: Vec::new(),
                len,
            };
        }
        let mut rows: Vec<&[i64]> = data.chunks_exact(t).collect();
        rows.sort_unstable();
        rows.dedup();
        let len = rows.len();
        let flat = rows.concat();
        IndexSet {
            dims,
            data: flat,
            len,
        }
    }

    pub fn dims(&self) -> &DimSubset {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn stride(&self) -> usize {
        self.dims.len()
    }

    pub fn get(&self, i: usize) -> &[i64] {
        let t = self.stride();
        &self.data[i * t..(i + 1) * t]
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[i64]> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn flat(&self) -> &[i64] {
        &self.data
    }

    pub fn position(&self, k: &[i64]) -> Option<usize> {
        if k.len() != self.stride() {
            return None;
        }
        let (mut lo, mut hi) = (0usize, self.len);
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.get(mid).cmp(k) {
                Ordering::Less => lo = mid + 1,
                Ordering::Greater => hi = mid,
                Ordering::Equal => return Some(mid),
            }
        }
        None
    }

    pub fn contains(&self, k: &[i64]) -> bool {
        self.position(k).is_some()
    }

    pub fn to_vecs(&self) -> Vec<MultiIndex> {
        self.iter().map(|k| k.to_vec()).collect()
    }

    /// Projection onto a subset of this set's dimensions.
    pub fn project(&self, sub: &DimSubset) -> Result<IndexSet> {
        let pos = self.dims.positions_of(sub)?;
        let mut data = Vec::with_capacity(self.len * pos.len());
        for k in self.iter() {
            data.extend(pos.iter().map(|&p| k[p]));
        }
        Ok(IndexSet::from_flat(sub.clone(), data))
    }

    pub fn union(&self, other: &IndexSet) -> Result<IndexSet> {
        if self.dims != other.dims {
            return Err(Error::InvalidParameter(format!(
                "union of sets on {} and {}",
                self.dims, other.dims
            )));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(IndexSet::from_flat(self.dims.clone(), data))
    }

    pub fn is_subset(&self, other: &IndexSet) -> bool {
        self.dims == other.dims && self.iter().all(|k| other.contains(k))
    }
}
