//! Index tuples and index subsets of `[n]`.
//!
//! Both are stored 0-based. Everything user facing (files, `Display`, the
//! `*_one_based` constructors) is 1-based.

use std::cmp::Ordering;
use std::fmt;

use crate::error::TensorError;

/// Subscript `(i1, ..., im)` of a tensor entry.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndexTuple(Vec<usize>);

impl IndexTuple {
    pub fn from_zero_based(indices: Vec<usize>) -> Self {
        Self(indices)
    }

    /// Validates a 1-based tuple against the tensor shape.
    pub fn from_one_based(indices: &[usize], order: usize, dim: usize) -> Result<Self, TensorError> {
        if indices.len() != order {
            return Err(TensorError::WrongArity {
                idx: indices.to_vec(),
                expected: order,
                got: indices.len(),
            });
        }
        let mut out = Vec::with_capacity(order);
        for &i in indices {
            if i == 0 || i > dim {
                return Err(TensorError::IndexOutOfRange { index: i, dim });
            }
            out.push(i - 1);
        }
        Ok(Self(out))
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.0.iter().map(|i| i + 1).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Leading index `i1`, the row the entry contributes to in `T x^{m-1}`.
    pub fn head(&self) -> usize {
        self.0[0]
    }

    pub fn tail(&self) -> &[usize] {
        &self.0[1..]
    }

    pub fn is_diagonal(&self) -> bool {
        self.0.windows(2).all(|w| w[0] == w[1])
    }

    /// Number of positions holding index `j`.
    pub fn multiplicity(&self, j: usize) -> usize {
        self.0.iter().filter(|&&i| i == j).count()
    }

    /// Number of positions whose index lies in `set`, duplicates counted.
    pub fn intersection_count(&self, set: &IndexSet) -> usize {
        self.0.iter().filter(|&&i| set.contains(i)).count()
    }

    pub fn sorted(&self) -> IndexTuple {
        let mut v = self.0.clone();
        v.sort_unstable();
        IndexTuple(v)
    }
}

impl fmt::Display for IndexTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", i + 1)?;
        }
        write!(f, ")")
    }
}

/// `|V ∩ {i1, ..., im}|` with duplicate indices counted.
pub fn intersection_count(idx: &IndexTuple, set: &IndexSet) -> usize {
    idx.intersection_count(set)
}

/// A subset `V` of `[n]`.
///
/// Ordered by cardinality first, then lexicographically on the sorted
/// members, so detector output is deterministic.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IndexSet {
    mask: Vec<bool>,
}

impl IndexSet {
    pub fn empty(n: usize) -> Self {
        Self { mask: vec![false; n] }
    }

    pub fn full(n: usize) -> Self {
        Self { mask: vec![true; n] }
    }

    pub fn from_mask(mask: Vec<bool>) -> Self {
        Self { mask }
    }

    pub fn from_zero_based(n: usize, members: &[usize]) -> Result<Self, TensorError> {
        let mut mask = vec![false; n];
        for &i in members {
            if i >= n {
                return Err(TensorError::IndexOutOfRange { index: i + 1, dim: n });
            }
            mask[i] = true;
        }
        Ok(Self { mask })
    }

    pub fn from_one_based(n: usize, members: &[usize]) -> Result<Self, TensorError> {
        let mut mask = vec![false; n];
        for &i in members {
            if i == 0 || i > n {
                return Err(TensorError::IndexOutOfRange { index: i, dim: n });
            }
            mask[i - 1] = true;
        }
        Ok(Self { mask })
    }

    /// Subset whose members are the set bits of `bits` (bit `j` is index `j`).
    pub fn from_bits(n: usize, bits: u64) -> Self {
        Self {
            mask: (0..n).map(|j| j < 64 && (bits >> j) & 1 == 1).collect(),
        }
    }

    pub fn universe_size(&self) -> usize {
        self.mask.len()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.mask.get(i).copied().unwrap_or(false)
    }

    pub fn len(&self) -> usize {
        self.mask.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.mask.iter().any(|&b| b)
    }

    /// `∅ ≠ V ⊊ [n]`.
    pub fn is_proper_nonempty(&self) -> bool {
        let k = self.len();
        k > 0 && k < self.mask.len()
    }

    pub fn complement(&self) -> Self {
        Self {
            mask: self.mask.iter().map(|b| !b).collect(),
        }
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    /// Members, 0-based, ascending.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.mask.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i)
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.iter().map(|i| i + 1).collect()
    }

    /// All nonempty proper subsets of `[n]`, in `IndexSet` order.
    pub fn all_proper(n: usize) -> Vec<IndexSet> {
        assert!(n < 64, "subset enumeration needs n < 64");
        let mut out: Vec<IndexSet> = (1..(1u64 << n) - 1).map(|b| IndexSet::from_bits(n, b)).collect();
        out.sort();
        out
    }
}

impl Ord for IndexSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.iter().cmp(other.iter()))
            .then_with(|| self.mask.len().cmp(&other.mask.len()))
    }
}

impl PartialOrd for IndexSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", i + 1)?;
        }
        write!(f, "}}")
    }
}
