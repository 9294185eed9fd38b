//! Power iteration against the polynomial oracle on random nonnegative tensors.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::HarnessError;
use crate::spectra::{largest_oracle_pair, power_iteration_rho, SolverOptions};

use super::gen::gen_nonnegative_weakly_irreducible;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CrossCase {
    pub seed: u64,
    pub order: usize,
    pub dim: usize,
    pub power: Option<f64>,
    pub oracle: Option<f64>,
}

impl CrossCase {
    /// `|power - oracle|` when both converged.
    pub fn gap(&self) -> Option<f64> {
        Some((self.power? - self.oracle?).abs())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CrossValidation {
    pub tol: f64,
    pub cases: Vec<CrossCase>,
}

impl CrossValidation {
    pub fn oracle_converged(&self) -> usize {
        self.cases.iter().filter(|c| c.oracle.is_some()).count()
    }

    pub fn convergence_rate(&self) -> f64 {
        if self.cases.is_empty() {
            return 1.0;
        }
        self.oracle_converged() as f64 / self.cases.len() as f64
    }

    /// Cases where the oracle converged but the power iteration did not,
    /// or the two disagree beyond `tol`.
    pub fn mismatches(&self) -> Vec<&CrossCase> {
        self.cases
            .iter()
            .filter(|c| c.oracle.is_some() && c.gap().is_none_or(|g| g > self.tol))
            .collect()
    }
}

/// Compares `power_iteration_rho` with the largest oracle eigenvalue on
/// `trials` nonnegative tensors of the given orders and dimensions.
///
/// The tensors have positive diagonals and strongly connected head-to-tail
/// digraphs. Trial `i` uses seed `seed + i`.
pub fn cross_validate_power(
    trials: usize,
    seed: u64,
    orders: &[usize],
    dims: &[usize],
    solver: &SolverOptions,
    tol: f64,
) -> Result<CrossValidation, HarnessError> {
    if orders.is_empty() || dims.is_empty() {
        return Err(HarnessError::InvalidSpec("empty size list".into()));
    }
    let cases = (0..trials)
        .into_par_iter()
        .map(|i| {
            let seed = seed.wrapping_add(i as u64);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = orders[rng.random_range(0..orders.len())];
            let n = dims[rng.random_range(0..dims.len())];
            let t = gen_nonnegative_weakly_irreducible(m, n, 0.3, true, rng.next_u64())?;
            Ok(CrossCase {
                seed,
                order: m,
                dim: n,
                power: power_iteration_rho(&t, solver).ok().map(|p| p.lambda),
                oracle: largest_oracle_pair(&t, solver).ok().map(|p| p.lambda),
            })
        })
        .collect::<Result<Vec<_>, HarnessError>>()?;
    Ok(CrossValidation { tol, cases })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_agrees() {
        let cv = cross_validate_power(8, 3, &[3, 4], &[2, 3], &SolverOptions::default(), 1e-6).unwrap();
        assert_eq!(cv.cases.len(), 8);
        assert!(cv.mismatches().is_empty(), "{cv:?}");
        assert!(cv.convergence_rate() >= 0.9);
    }

    #[test]
    fn gap_needs_both_sides() {
        let c = CrossCase {
            seed: 0,
            order: 3,
            dim: 2,
            power: None,
            oracle: Some(1.0),
        };
        assert_eq!(c.gap(), None);
        let cv = CrossValidation { tol: 1e-6, cases: vec![c] };
        assert_eq!(cv.mismatches().len(), 1);
    }
}
