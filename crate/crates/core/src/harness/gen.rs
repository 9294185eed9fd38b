//! Seeded generators for structured Z-tensors.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::HarnessError;
use crate::index::{IndexSet, IndexTuple};
use crate::structure::{is_strongly_connected, is_weakly_irreducible};
use crate::tensor::{all_tuples, compose, tuple_count, Sign, Tensor, DENSE_GUARD};

/// Rejection sampling gives up after this many draws.
pub const MAX_RETRIES: usize = 2_000;

/// Which intersection parity the support of `C` is restricted to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Parity {
    Odd,
    Even,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenSpec {
    pub order: usize,
    pub dim: usize,
    /// Probability that an admissible off-diagonal tuple (or orbit, when
    /// `symmetric`) carries an entry.
    pub density: f64,
    /// Restricts the support of `C` to tuples whose intersection count with
    /// the set has the given parity.
    pub bipartition: Option<(IndexSet, Parity)>,
    pub require_weakly_irreducible: bool,
    /// Also require the digraph with arcs from each head index to its tail
    /// indices to be strongly connected.
    pub require_strongly_connected: bool,
    pub diag_range: (f64, f64),
    pub offdiag_range: (f64, f64),
    pub seed: u64,
    /// Give `C` equal values on every permutation of an index tuple.
    pub symmetric: bool,
    /// Rows of `C` headed by these indices stay empty.
    pub zero_rows: Option<IndexSet>,
}

impl GenSpec {
    pub fn new(order: usize, dim: usize, seed: u64) -> Self {
        Self {
            order,
            dim,
            density: 0.3,
            bipartition: None,
            require_weakly_irreducible: false,
            require_strongly_connected: false,
            diag_range: (0.0, 2.0),
            offdiag_range: (0.1, 1.0),
            seed,
            symmetric: false,
            zero_rows: None,
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |msg: String| Err(HarnessError::InvalidSpec(msg));
        if self.order < 2 || self.dim < 1 {
            return bad(format!("need order >= 2 and dim >= 1, got {} and {}", self.order, self.dim));
        }
        if tuple_count(self.order, self.dim) > DENSE_GUARD {
            return bad(format!("{}^{} tuples exceed the dense guard", self.dim, self.order));
        }
        if !(self.density > 0.0 && self.density <= 1.0) {
            return bad(format!("density must lie in (0, 1], got {}", self.density));
        }
        let (dl, dh) = self.diag_range;
        if !(dl >= 0.0 && dl <= dh) {
            return bad(format!("diag_range must satisfy 0 <= lo <= hi, got ({dl}, {dh})"));
        }
        let (ol, oh) = self.offdiag_range;
        if !(ol >= 0.0 && ol <= oh) {
            return bad(format!("offdiag_range must satisfy 0 <= lo <= hi, got ({ol}, {oh})"));
        }
        for set in self.bipartition.iter().map(|(s, _)| s).chain(self.zero_rows.iter()) {
            if set.universe_size() != self.dim {
                return bad(format!("index set {set} is over {} indices, expected {}", set.universe_size(), self.dim));
            }
        }
        if self.symmetric && self.zero_rows.as_ref().is_some_and(|z| !z.is_empty()) {
            return bad("a symmetric C cannot have empty rows without dropping the index entirely".into());
        }
        Ok(())
    }

    fn admissible(&self, idx: &IndexTuple) -> bool {
        if idx.is_diagonal() {
            return false;
        }
        if let Some((set, parity)) = &self.bipartition {
            let odd = idx.intersection_count(set) % 2 == 1;
            if odd != (*parity == Parity::Odd) {
                return false;
            }
        }
        if let Some(rows) = &self.zero_rows {
            if rows.contains(idx.head()) {
                return false;
            }
        }
        true
    }
}

fn uniform(rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)) -> f64 {
    if lo == hi {
        lo
    } else {
        rng.random_range(lo..=hi)
    }
}

/// Off-diagonal part `C` drawn once from `rng`.
fn draw_c(spec: &GenSpec, rng: &mut ChaCha8Rng) -> Result<Tensor<f64>, HarnessError> {
    let mut orbit_values: HashMap<IndexTuple, Option<f64>> = HashMap::new();
    let mut entries = Vec::new();
    for idx in all_tuples(spec.order, spec.dim) {
        if !spec.admissible(&idx) {
            continue;
        }
        let value = if spec.symmetric {
            let key = idx.sorted();
            // the sorted tuple comes first in lexicographic order, so each
            // orbit draws exactly once and in a fixed sequence
            *orbit_values
                .entry(key)
                .or_insert_with(|| rng.random_bool(spec.density).then(|| uniform(rng, spec.offdiag_range)))
        } else {
            rng.random_bool(spec.density).then(|| uniform(rng, spec.offdiag_range))
        };
        if let Some(v) = value {
            entries.push((idx, v));
        }
    }
    Ok(Tensor::from_entries(spec.order, spec.dim, entries)?)
}

/// `A = D - C` following `spec`; identical specs give identical tensors.
///
/// With `require_weakly_irreducible` the draw repeats until the
/// representing graph of `C` is connected.
pub fn gen_z_tensor(spec: &GenSpec) -> Result<Tensor<f64>, HarnessError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    for _ in 0..MAX_RETRIES {
        let d: Vec<f64> = (0..spec.dim).map(|_| uniform(&mut rng, spec.diag_range)).collect();
        let c = draw_c(spec, &mut rng)?;
        if spec.require_weakly_irreducible && !is_weakly_irreducible(&c) {
            continue;
        }
        if spec.require_strongly_connected && !is_strongly_connected(&c) {
            continue;
        }
        return Ok(compose(&d, &c, Sign::Minus)?);
    }
    Err(HarnessError::RetriesExhausted(MAX_RETRIES))
}

/// Random nonempty proper subset of `[n]`, `n >= 2`.
pub fn random_proper_subset(rng: &mut ChaCha8Rng, n: usize) -> IndexSet {
    assert!((2..64).contains(&n));
    let bits = rng.random_range(1..(1u64 << n) - 1);
    IndexSet::from_bits(n, bits)
}

/// Tensor with every entry drawn from `[-1, 1]` at the given density, diagonal included.
pub fn gen_general_tensor(order: usize, dim: usize, density: f64, seed: u64) -> Result<Tensor<f64>, HarnessError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let entries: Vec<(IndexTuple, f64)> = all_tuples(order, dim)
        .filter_map(|idx| rng.random_bool(density).then(|| (idx, rng.random_range(-1.0..=1.0))))
        .collect();
    Ok(Tensor::from_entries(order, dim, entries)?)
}

/// Nonnegative tensor with a weakly irreducible pattern and positive diagonal.
///
/// With `strongly_connected` the head-to-tail digraph is strongly connected
/// as well, which is what the power iteration needs to converge on
/// non-symmetric input.
pub fn gen_nonnegative_weakly_irreducible(
    order: usize,
    dim: usize,
    density: f64,
    strongly_connected: bool,
    seed: u64,
) -> Result<Tensor<f64>, HarnessError> {
    let spec = GenSpec {
        density,
        require_weakly_irreducible: true,
        require_strongly_connected: strongly_connected,
        diag_range: (0.1, 1.0),
        ..GenSpec::new(order, dim, seed)
    };
    Ok(gen_z_tensor(&spec)?.abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::{is_weakly_even_bipartite, is_weakly_odd_bipartite};
    use crate::tensor::z_decompose;

    #[test]
    fn bipartite_by_construction() {
        for seed in 0..20 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let v = random_proper_subset(&mut rng, 4);
            for parity in [Parity::Odd, Parity::Even] {
                let spec = GenSpec {
                    bipartition: Some((v.clone(), parity)),
                    density: 0.5,
                    ..GenSpec::new(4, 4, seed)
                };
                let c = z_decompose(&gen_z_tensor(&spec).unwrap()).unwrap().c;
                match parity {
                    Parity::Odd => assert!(is_weakly_odd_bipartite(&c, &v).unwrap()),
                    Parity::Even => assert!(is_weakly_even_bipartite(&c, &v).unwrap()),
                }
            }
        }
    }

    #[test]
    fn irreducibility_and_determinism() {
        let spec = GenSpec {
            require_weakly_irreducible: true,
            ..GenSpec::new(3, 5, 11)
        };
        let a = gen_z_tensor(&spec).unwrap();
        assert!(is_weakly_irreducible(&z_decompose(&a).unwrap().c));
        assert_eq!(a, gen_z_tensor(&spec).unwrap());
        assert_ne!(a, gen_z_tensor(&GenSpec { seed: 12, ..spec }).unwrap());
    }

    #[test]
    fn symmetric_and_zero_rows() {
        let spec = GenSpec {
            symmetric: true,
            density: 0.6,
            ..GenSpec::new(4, 3, 5)
        };
        let c = z_decompose(&gen_z_tensor(&spec).unwrap()).unwrap().c;
        assert!(c.is_symmetric());
        let rows = IndexSet::from_one_based(3, &[2]).unwrap();
        let spec = GenSpec {
            zero_rows: Some(rows),
            density: 1.0,
            ..GenSpec::new(3, 3, 5)
        };
        let c = z_decompose(&gen_z_tensor(&spec).unwrap()).unwrap().c;
        assert!(c.entries().all(|(idx, _)| idx.head() != 1));
        assert!(c.nnz() > 0);
    }

    #[test]
    fn impossible_connectivity_runs_out_of_retries() {
        // at this density C comes out empty, so its graph never connects
        let spec = GenSpec {
            require_weakly_irreducible: true,
            density: 1e-9,
            ..GenSpec::new(3, 3, 0)
        };
        assert!(matches!(gen_z_tensor(&spec), Err(HarnessError::RetriesExhausted(_))));
    }

    #[test]
    fn invalid_specs() {
        let neg = GenSpec { diag_range: (-1.0, 1.0), ..GenSpec::new(3, 2, 0) };
        assert!(matches!(gen_z_tensor(&neg), Err(HarnessError::InvalidSpec(_))));
        let dens = GenSpec { density: 0.0, ..GenSpec::new(3, 2, 0) };
        assert!(gen_z_tensor(&dens).is_err());
        let wrong = GenSpec {
            bipartition: Some((IndexSet::full(3), Parity::Odd)),
            ..GenSpec::new(3, 2, 0)
        };
        assert!(gen_z_tensor(&wrong).is_err());
    }
}
