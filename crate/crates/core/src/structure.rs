//! Structural predicates: (weak) odd/even-bipartiteness, reducibility and
//! weak irreducibility.
//!
//! Intersection counts `|V ∩ {i1..im}|` always count repeated indices. With
//! that convention the weak bipartite conditions are linear over GF(2): a
//! stored entry constrains `Σ_j mult_j(idx) x_j ≡ parity (mod 2)` where
//! `x_j = 1` iff `j ∈ V`. The detectors solve that system exactly.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use crate::error::{StructureError, TensorError};
use crate::gf2::{AffineSystem, BitRow};
use crate::index::IndexSet;
use crate::scalar::Scalar;
use crate::tensor::Tensor;

/// Exhaustive subset search (`is_irreducible`) is limited to `n <= IRREDUCIBLE_GUARD`.
pub const IRREDUCIBLE_GUARD: usize = 20;

/// Default number of witnesses returned by the detectors.
pub const DEFAULT_WITNESS_LIMIT: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BipartiteKind {
    OddStrict,
    OddWeak,
    EvenStrict,
    EvenWeak,
}

impl BipartiteKind {
    fn odd(self) -> bool {
        matches!(self, BipartiteKind::OddStrict | BipartiteKind::OddWeak)
    }

    fn strict(self) -> bool {
        matches!(self, BipartiteKind::OddStrict | BipartiteKind::EvenStrict)
    }
}

impl fmt::Display for BipartiteKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            BipartiteKind::OddStrict => "odd-bipartite",
            BipartiteKind::OddWeak => "weakly odd-bipartite",
            BipartiteKind::EvenStrict => "even-bipartite",
            BipartiteKind::EvenWeak => "weakly even-bipartite",
        };
        f.write_str(s)
    }
}

/// A witness subset together with the property it certifies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bipartition {
    pub set: IndexSet,
    pub kind: BipartiteKind,
}

impl Bipartition {
    pub fn new(set: IndexSet, kind: BipartiteKind) -> Result<Self, StructureError> {
        if !set.is_proper_nonempty() {
            return Err(StructureError::InvalidSubset(set));
        }
        Ok(Self { set, kind })
    }
}

fn validate<S: Scalar>(t: &Tensor<S>, set: &IndexSet) -> Result<(), StructureError> {
    if set.universe_size() != t.dim() {
        return Err(TensorError::IndexSetMismatch {
            expected: t.dim(),
            got: set.universe_size(),
        }
        .into());
    }
    if !set.is_proper_nonempty() {
        return Err(StructureError::InvalidSubset(set.clone()));
    }
    Ok(())
}

/// Number of tuples in `[n]^m` whose intersection count with a `k`-subset
/// has the requested parity: `(n^m ∓ (n-2k)^m) / 2`. `None` on overflow.
pub fn parity_tuple_count(order: usize, dim: usize, k: usize, odd: bool) -> Option<u128> {
    let order = u32::try_from(order).ok()?;
    let total = (dim as i128).checked_pow(order)?;
    let skew = (dim as i128 - 2 * k as i128).checked_pow(order)?;
    let twice = if odd { total.checked_sub(skew)? } else { total.checked_add(skew)? };
    u128::try_from(twice / 2).ok()
}

fn check_kind<S: Scalar>(t: &Tensor<S>, set: &IndexSet, kind: BipartiteKind) -> Result<bool, StructureError> {
    validate(t, set)?;
    let odd = kind.odd();
    let weak = t.entries().all(|(idx, _)| (idx.intersection_count(set) % 2 == 1) == odd);
    if !weak || !kind.strict() {
        return Ok(weak);
    }
    // Every stored entry sits on a tuple of the right parity, so the strict
    // condition holds iff all such tuples are stored.
    Ok(parity_tuple_count(t.order(), t.dim(), set.len(), odd) == Some(t.nnz() as u128))
}

/// Nonzero entries only where `|V ∩ idx|` is odd.
pub fn is_weakly_odd_bipartite<S: Scalar>(t: &Tensor<S>, set: &IndexSet) -> Result<bool, StructureError> {
    check_kind(t, set, BipartiteKind::OddWeak)
}

/// Nonzero exactly where `|V ∩ idx|` is odd.
pub fn is_odd_bipartite<S: Scalar>(t: &Tensor<S>, set: &IndexSet) -> Result<bool, StructureError> {
    check_kind(t, set, BipartiteKind::OddStrict)
}

pub fn is_weakly_even_bipartite<S: Scalar>(t: &Tensor<S>, set: &IndexSet) -> Result<bool, StructureError> {
    check_kind(t, set, BipartiteKind::EvenWeak)
}

pub fn is_even_bipartite<S: Scalar>(t: &Tensor<S>, set: &IndexSet) -> Result<bool, StructureError> {
    check_kind(t, set, BipartiteKind::EvenStrict)
}

pub fn is_bipartite<S: Scalar>(t: &Tensor<S>, set: &IndexSet, kind: BipartiteKind) -> Result<bool, StructureError> {
    check_kind(t, set, kind)
}

/// GF(2) system `Σ_j mult_j(idx) x_j ≡ odd` over all stored entries.
pub fn bipartition_system<S: Scalar>(t: &Tensor<S>, odd: bool) -> AffineSystem {
    let mut system = AffineSystem::new(t.dim());
    for (idx, _) in t.entries() {
        let mut row = BitRow::zeros(t.dim());
        for &j in idx.as_slice() {
            row.flip(j);
        }
        system.push(row, odd);
    }
    system
}

/// Nonempty proper solutions of `system`, smallest first, at most `limit`.
pub fn proper_solutions(system: &AffineSystem, limit: usize) -> Vec<IndexSet> {
    let Some(solution) = system.solve() else {
        return Vec::new();
    };
    let mut sets: Vec<IndexSet> = solution
        .enumerate()
        .into_iter()
        .map(|row| IndexSet::from_mask(row.to_bools()))
        .filter(IndexSet::is_proper_nonempty)
        .collect();
    sets.sort();
    sets.dedup();
    sets.truncate(limit);
    sets
}

/// Every `V` (up to `limit`) making `t` weakly odd-bipartite.
///
/// Exact: an empty result means no nonempty proper `V` exists.
pub fn find_weak_odd_bipartitions<S: Scalar>(t: &Tensor<S>, limit: usize) -> Vec<IndexSet> {
    proper_solutions(&bipartition_system(t, true), limit)
}

pub fn find_weak_even_bipartitions<S: Scalar>(t: &Tensor<S>, limit: usize) -> Vec<IndexSet> {
    proper_solutions(&bipartition_system(t, false), limit)
}

/// Weak odd bipartitions `V` such that every member of `V` heads no stored entry.
///
/// This is the hypothesis of the odd-order equality result: `C` weakly
/// odd-bipartite w.r.t. `V` with `c_{i i2..im} = 0` for all `i ∈ V`.
pub fn find_weak_odd_bipartitions_with_vanishing_rows<S: Scalar>(t: &Tensor<S>, limit: usize) -> Vec<IndexSet> {
    let mut system = bipartition_system(t, true);
    let heads: BTreeSet<usize> = t.entries().map(|(idx, _)| idx.head()).collect();
    for i in heads {
        let mut row = BitRow::zeros(t.dim());
        row.set(i, true);
        system.push(row, false);
    }
    proper_solutions(&system, limit)
}

fn find_strict<S: Scalar>(t: &Tensor<S>, odd: bool) -> Option<IndexSet> {
    let system = bipartition_system(t, odd);
    let kind = if odd { BipartiteKind::OddStrict } else { BipartiteKind::EvenStrict };
    proper_solutions(&system, usize::MAX)
        .into_iter()
        .find(|v| check_kind(t, v, kind).unwrap_or(false))
}

/// First `V` (detector order) for which `t` is odd-bipartite.
pub fn find_odd_bipartition<S: Scalar>(t: &Tensor<S>) -> Option<IndexSet> {
    find_strict(t, true)
}

pub fn find_even_bipartition<S: Scalar>(t: &Tensor<S>) -> Option<IndexSet> {
    find_strict(t, false)
}

/// Every `V` (up to `limit`, smallest first) for which `t` has the property `kind`.
pub fn find_bipartitions<S: Scalar>(t: &Tensor<S>, kind: BipartiteKind, limit: usize) -> Vec<IndexSet> {
    let system = bipartition_system(t, kind.odd());
    if !kind.strict() {
        return proper_solutions(&system, limit);
    }
    proper_solutions(&system, usize::MAX)
        .into_iter()
        .filter(|v| check_kind(t, v, kind).unwrap_or(false))
        .take(limit)
        .collect()
}

/// `t_{i1..im} = 0` whenever `i1 ∈ V` and `i2..im ∉ V`.
pub fn is_reducible_for<S: Scalar>(t: &Tensor<S>, set: &IndexSet) -> Result<bool, StructureError> {
    validate(t, set)?;
    Ok(!t
        .entries()
        .any(|(idx, _)| set.contains(idx.head()) && idx.tail().iter().all(|&j| !set.contains(j))))
}

/// Smallest `V` (in `IndexSet` order) certifying reducibility, if any.
pub fn find_reducing_set<S: Scalar>(t: &Tensor<S>) -> Result<Option<IndexSet>, StructureError> {
    let n = t.dim();
    if n > IRREDUCIBLE_GUARD {
        return Err(StructureError::GuardExceeded {
            dim: n,
            guard: IRREDUCIBLE_GUARD,
        });
    }
    if n < 2 {
        return Ok(None);
    }
    let blockers: Vec<(u64, u64)> = t
        .entries()
        .map(|(idx, _)| {
            let tail = idx.tail().iter().fold(0u64, |acc, &j| acc | (1 << j));
            (1u64 << idx.head(), tail)
        })
        .collect();
    let reducing = |v: u64| !blockers.iter().any(|&(head, tail)| head & v != 0 && tail & v == 0);
    let mut best: Option<IndexSet> = None;
    for bits in 1..(1u64 << n) - 1 {
        if reducing(bits) {
            let candidate = IndexSet::from_bits(n, bits);
            if best.as_ref().is_none_or(|b| candidate < *b) {
                best = Some(candidate);
            }
        }
    }
    Ok(best)
}

/// No nonempty proper `V` makes `t` reducible. Exhaustive over `2^n - 2` subsets.
pub fn is_irreducible<S: Scalar>(t: &Tensor<S>) -> Result<bool, StructureError> {
    Ok(find_reducing_set(t)?.is_none())
}

/// Undirected co-occurrence graph on `[n]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepresentingGraph {
    pub vertices: usize,
    /// Pairs `(i, j)` with `i < j`, 0-based.
    pub edges: BTreeSet<(usize, usize)>,
}

impl RepresentingGraph {
    pub fn is_connected(&self) -> bool {
        let n = self.vertices;
        if n <= 1 {
            return true;
        }
        let mut adj = vec![Vec::new(); n];
        for &(i, j) in &self.edges {
            adj[i].push(j);
            adj[j].push(i);
        }
        bfs_reach(&adj, 0).iter().all(|&r| r)
    }
}

fn bfs_reach(adj: &[Vec<usize>], start: usize) -> Vec<bool> {
    let mut seen = vec![false; adj.len()];
    let mut queue = VecDeque::from([start]);
    seen[start] = true;
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    seen
}

/// Edge `{i, j}` for `i ≠ j` iff some stored tuple contains both.
pub fn representing_graph<S: Scalar>(t: &Tensor<S>) -> RepresentingGraph {
    let mut edges = BTreeSet::new();
    for (idx, _) in t.entries() {
        let distinct: BTreeSet<usize> = idx.as_slice().iter().copied().collect();
        let distinct: Vec<usize> = distinct.into_iter().collect();
        for (a, &i) in distinct.iter().enumerate() {
            for &j in &distinct[a + 1..] {
                edges.insert((i, j));
            }
        }
    }
    RepresentingGraph {
        vertices: t.dim(),
        edges,
    }
}

/// The representing graph is connected.
pub fn is_weakly_irreducible<S: Scalar>(t: &Tensor<S>) -> bool {
    representing_graph(t).is_connected()
}

/// Strong connectivity of the digraph with arcs `i1 → ij` (`ij ≠ i1`) for
/// each stored entry.
///
/// This is the hypothesis under which a nonnegative tensor has a positive
/// Perron vector and the shifted power iteration converges. On symmetric
/// tensors it coincides with [`is_weakly_irreducible`].
pub fn is_strongly_connected<S: Scalar>(t: &Tensor<S>) -> bool {
    let n = t.dim();
    if n <= 1 {
        return true;
    }
    let mut fwd = vec![Vec::new(); n];
    let mut bwd = vec![Vec::new(); n];
    for (idx, _) in t.entries() {
        let i = idx.head();
        for &j in idx.tail() {
            if j != i {
                fwd[i].push(j);
                bwd[j].push(i);
            }
        }
    }
    bfs_reach(&fwd, 0).iter().all(|&r| r) && bfs_reach(&bwd, 0).iter().all(|&r| r)
}
