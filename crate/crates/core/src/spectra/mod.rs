//! H-eigenvalues: power iteration for nonnegative tensors, sign-flip transfer
//! to Z-tensors, a multi-start Newton oracle and exact dimension-2
//! characteristic polynomials.
//!
//! An H-eigenpair `(λ, x)` of an order-`m` tensor satisfies
//! `T x^{m-1} = λ x^{[m-1]}` with `x` real and nonzero.

pub mod charpoly;
pub mod oracle;
pub mod poly;
pub mod power;

use serde::Serialize;

use crate::error::SpectraError;
use crate::index::IndexSet;
use crate::scalar::Real;
use crate::similarity::solve_sign_similarity;
use crate::structure::{
    find_weak_odd_bipartitions, find_weak_odd_bipartitions_with_vanishing_rows, is_weakly_irreducible,
    DEFAULT_WITNESS_LIMIT,
};
use crate::tensor::{z_decompose, Tensor};

pub use charpoly::{char_poly_dim2, spectra_equal_dim2, CharPoly2, CharPolySummary};
pub use oracle::{brute_force_h_eigenpairs, canonicalize, eigenvalue_for, largest_oracle_pair};
pub use power::{power_iteration_rho, power_iteration_trace, Bracket};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolverOptions {
    pub tol: f64,
    pub max_iters: usize,
    pub starts: usize,
    pub dedup_tol: f64,
    pub seed: u64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iters: 100_000,
            starts: 200,
            dedup_tol: 1e-6,
            seed: 0,
        }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<(), SpectraError> {
        if !(self.tol > 0.0) {
            return Err(SpectraError::InvalidOptions(format!("tol must be positive, got {}", self.tol)));
        }
        if self.tol >= self.dedup_tol {
            return Err(SpectraError::InvalidOptions(format!(
                "tol ({}) must be below dedup_tol ({})",
                self.tol, self.dedup_tol
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EigenPair<F> {
    pub lambda: F,
    pub x: Vec<F>,
    /// [`residual`] of `(lambda, x)` against the tensor it was computed for.
    pub residual: F,
    pub iterations: usize,
}

impl<F: Real> EigenPair<F> {
    /// Recomputes the residual against `t`.
    pub fn revalidate(mut self, t: &Tensor<F>) -> Result<Self, SpectraError> {
        self.residual = residual(t, self.lambda, &self.x)?;
        Ok(self)
    }
}

/// `‖T x^{m-1} - λ x^{[m-1]}‖∞ / max(1, ‖x‖∞^{m-1})`.
pub fn residual<F: Real>(t: &Tensor<F>, lambda: F, x: &[F]) -> Result<F, SpectraError> {
    let tx = t.apply(x)?;
    let m = t.order() as i32;
    let mut worst = F::zero();
    let mut xmax = F::zero();
    for (a, xi) in tx.iter().zip(x) {
        worst = worst.max((*a - lambda * xi.powi(m - 1)).abs());
        xmax = xmax.max(xi.abs());
    }
    Ok(worst / F::one().max(xmax.powi(m - 1)))
}

/// Flips signs of an eigenvector of `|A|` across `set`.
///
/// Even `m` keeps `x` on `set` and negates it off `set`; odd `m` negates it
/// on `set`. The residual is set to infinity: the caller revalidates the
/// pair against `A`.
pub fn sign_flip_eigenpair<F: Real>(pair: &EigenPair<F>, set: &IndexSet, order: usize) -> EigenPair<F> {
    let negate_inside = order % 2 == 1;
    let x = pair
        .x
        .iter()
        .enumerate()
        .map(|(i, v)| if set.contains(i) == negate_inside { -*v } else { *v })
        .collect();
    EigenPair {
        lambda: pair.lambda,
        x,
        residual: F::infinity(),
        iterations: pair.iterations,
    }
}

/// Perron pair of a nonnegative tensor: power iteration when it applies,
/// otherwise the largest oracle eigenpair.
///
/// The oracle fallback covers tensors without a positive eigenvector, where
/// the shifted iteration converges too slowly or not at all.
pub fn perron_pair<F: Real>(n: &Tensor<F>, opts: &SolverOptions) -> Result<EigenPair<F>, SpectraError> {
    match power_iteration_rho(n, opts) {
        Ok(pair) => Ok(pair),
        Err(SpectraError::NotWeaklyIrreducible)
        | Err(SpectraError::MaxItersExceeded { .. })
        | Err(SpectraError::LostPositivity { .. }) => largest_oracle_pair(n, opts),
        Err(e) => Err(e),
    }
}

/// How [`largest_h_eigenvalue_z`] obtained its answer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ZEigenRoute {
    /// Sign flip of the Perron vector of `|A|` across a weak odd bipartition of `C`.
    SignFlip { set: Vec<usize> },
    /// Transfer through a sign similarity `|A| ↦ A`; `negative` lists the `-1` entries.
    SignSimilarity { negative: Vec<usize> },
    /// Largest eigenvalue the Newton oracle found for `A`.
    Oracle,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZEigenReport<F> {
    /// Eigenpair of `A`.
    pub pair: EigenPair<F>,
    /// Perron pair of `|A|`.
    pub abs_pair: EigenPair<F>,
    pub route: ZEigenRoute,
}

/// Largest H-eigenvalue of a Z-tensor `A = D - C`, together with `ρ(|A|)`.
///
/// When `C` is weakly odd-bipartite (for odd `m`: with every member of the
/// bipartition heading no entry of `C`), flipping signs of the Perron vector
/// of `|A|` yields an eigenvector of `A` with the same eigenvalue, which is
/// then the largest possible. Odd orders additionally try a sign similarity
/// between `|A|` and `A`. Everything else goes to the Newton oracle.
pub fn largest_h_eigenvalue_z<F: Real>(a: &Tensor<F>, opts: &SolverOptions) -> Result<ZEigenReport<F>, SpectraError> {
    let zd = z_decompose(a)?;
    let abs = zd.abs_tensor();
    let abs_pair = perron_pair(&abs, opts)?;
    let accept = F::of(opts.tol).max(abs_pair.residual);
    let m = a.order();

    let candidates = if m.is_multiple_of(2) {
        find_weak_odd_bipartitions(&zd.c, DEFAULT_WITNESS_LIMIT)
    } else {
        find_weak_odd_bipartitions_with_vanishing_rows(&zd.c, DEFAULT_WITNESS_LIMIT)
    };
    for set in candidates {
        let pair = sign_flip_eigenpair(&abs_pair, &set, m).revalidate(a)?;
        if pair.residual <= accept {
            return Ok(ZEigenReport {
                pair,
                abs_pair,
                route: ZEigenRoute::SignFlip { set: set.to_one_based() },
            });
        }
    }

    if m % 2 == 1 {
        if let Some(w) = solve_sign_similarity(a)? {
            let x = abs_pair.x.iter().zip(&w.p).map(|(v, p)| *v * *p).collect();
            let pair = EigenPair { x, ..abs_pair.clone() }.revalidate(a)?;
            if pair.residual <= accept {
                return Ok(ZEigenReport {
                    pair,
                    abs_pair,
                    route: ZEigenRoute::SignSimilarity {
                        negative: w.negative_set().to_one_based(),
                    },
                });
            }
        }
    }

    let pair = largest_oracle_pair(a, opts)?;
    Ok(ZEigenReport {
        pair,
        abs_pair,
        route: ZEigenRoute::Oracle,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RhoConfidence {
    /// Converged power iteration on a nonnegative weakly irreducible tensor.
    PowerIteration,
    /// Largest root modulus of the exact dimension-2 characteristic polynomial.
    CharPolyRoots,
    /// Largest `|λ|` among oracle eigenvalues; a lower bound only.
    OracleLowerBound,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RhoEstimate<F> {
    pub value: F,
    pub confidence: RhoConfidence,
}

/// Spectral radius `max |λ|` over all complex eigenvalues, with the route
/// that produced it.
pub fn rho_estimate<F: Real>(t: &Tensor<F>, opts: &SolverOptions) -> Result<RhoEstimate<F>, SpectraError> {
    if t.is_nonnegative() && is_weakly_irreducible(t) {
        if let Ok(pair) = power_iteration_rho(t, opts) {
            return Ok(RhoEstimate {
                value: pair.lambda,
                confidence: RhoConfidence::PowerIteration,
            });
        }
    }
    if t.dim() == 2 {
        return Ok(RhoEstimate {
            value: F::of(char_poly_dim2(t)?.spectral_radius()),
            confidence: RhoConfidence::CharPolyRoots,
        });
    }
    let pairs = brute_force_h_eigenpairs(t, opts)?;
    let value = pairs.iter().map(|p| p.lambda.abs()).fold(F::zero(), F::max);
    Ok(RhoEstimate {
        value,
        confidence: RhoConfidence::OracleLowerBound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(order: usize, dim: usize, entries: &[(&[usize], f64)]) -> Tensor<f64> {
        Tensor::new(order, dim, entries.iter().map(|(i, v)| (i.to_vec(), *v))).unwrap()
    }

    fn order5(d: [f64; 3], c: &[(&[usize], f64)]) -> Tensor<f64> {
        let mut entries: Vec<(Vec<usize>, f64)> = (0..3).map(|i| (vec![i + 1; 5], d[i])).collect();
        entries.extend(c.iter().map(|(i, v)| (i.to_vec(), -*v)));
        Tensor::new(5, 3, entries).unwrap()
    }

    #[test]
    fn residual_scaling() {
        let id = Tensor::<f64>::identity(3, 2).unwrap();
        assert_eq!(residual(&id, 1.0, &[3.0, -2.0]).unwrap(), 0.0);
        // ‖(1-2)·x^{[2]}‖∞ / ‖x‖∞^2 = 1
        assert_eq!(residual(&id, 2.0, &[3.0, -2.0]).unwrap(), 1.0);
        assert_eq!(residual(&id, 2.0, &[0.5, 0.0]).unwrap(), 0.25);
    }

    #[test]
    fn options_invariant() {
        assert!(SolverOptions::default().validate().is_ok());
        let bad = SolverOptions { tol: 1e-5, dedup_tol: 1e-6, ..SolverOptions::default() };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn flip_conventions() {
        let pair = EigenPair { lambda: 3.0, x: vec![0.5, 1.0, 1.0], residual: 0.0, iterations: 0 };
        let v = IndexSet::from_one_based(3, &[3]).unwrap();
        assert_eq!(sign_flip_eigenpair(&pair, &v, 5).x, vec![0.5, 1.0, -1.0]);
        assert_eq!(sign_flip_eigenpair(&pair, &v, 4).x, vec![-0.5, -1.0, 1.0]);
        let pair2 = EigenPair { lambda: 1.0f64, x: vec![1.0, 1.0], residual: 0.0, iterations: 0 };
        let v1 = IndexSet::from_one_based(2, &[1]).unwrap();
        assert_eq!(sign_flip_eigenpair(&pair2, &v1, 4).x, vec![1.0, -1.0]);
        assert!(sign_flip_eigenpair(&pair2, &v1, 4).residual.is_infinite());
    }

    #[test]
    fn flipped_d113_pair_solves_a() {
        let a = order5([1.0, 1.0, 3.0], &[(&[1, 1, 3, 3, 3], 1.0), (&[2, 2, 3, 3, 3], 2.0)]);
        let x = vec![2f64.powf(-1.0 / 3.0), 1.0, 1.0];
        let pair = EigenPair { lambda: 3.0, x, residual: 0.0, iterations: 0 };
        let v = IndexSet::from_one_based(3, &[3]).unwrap();
        let y = sign_flip_eigenpair(&pair, &v, 5).revalidate(&a).unwrap();
        assert!(y.residual <= 1e-10, "{}", y.residual);
    }

    #[test]
    fn fixed_order5_instances() {
        let opts = SolverOptions::default();
        let cases = [
            (order5([1.0, 1.0, 1.0], &[(&[1, 1, 1, 2, 2], 1.0), (&[2, 2, 2, 3, 3], 1.0)]), 1.0),
            (order5([1.0, 1.0, 3.0], &[(&[1, 1, 3, 3, 3], 1.0), (&[2, 2, 3, 3, 3], 2.0)]), 3.0),
            (
                order5(
                    [1.0, 2.0, 4.0],
                    &[(&[1, 1, 1, 2, 2], 1.0), (&[1, 1, 3, 3, 3], 1.0), (&[2, 2, 2, 3, 3], 2.0)],
                ),
                4.0,
            ),
        ];
        for (a, want) in cases {
            let report = largest_h_eigenvalue_z(&a, &opts).unwrap();
            assert!((report.pair.lambda - want).abs() <= 1e-8, "λ(A) = {} want {want}", report.pair.lambda);
            assert!((report.abs_pair.lambda - want).abs() <= 1e-8, "λ(|A|) = {}", report.abs_pair.lambda);
            assert!(report.pair.residual <= opts.tol);
        }
    }

    #[test]
    fn route_for_d113_is_flip() {
        let a = order5([1.0, 1.0, 3.0], &[(&[1, 1, 3, 3, 3], 1.0), (&[2, 2, 3, 3, 3], 2.0)]);
        let report = largest_h_eigenvalue_z(&a, &SolverOptions::default()).unwrap();
        assert_eq!(report.route, ZEigenRoute::SignFlip { set: vec![3] });
    }

    #[test]
    fn rho_estimates() {
        let opts = SolverOptions::default();
        let abs = order5([1.0, 1.0, 3.0], &[(&[1, 1, 3, 3, 3], 1.0), (&[2, 2, 3, 3, 3], 2.0)]).abs();
        let r = rho_estimate(&abs, &opts).unwrap();
        assert!((r.value - 3.0).abs() < 1e-9);
        assert_eq!(r.confidence, RhoConfidence::PowerIteration);
        let zero = Tensor::<f64>::zeros(3, 2).unwrap();
        assert_eq!(rho_estimate(&zero, &opts).unwrap().value, 0.0);
        let zero3 = Tensor::<f64>::zeros(3, 3).unwrap();
        assert_eq!(rho_estimate(&zero3, &opts).unwrap().value, 0.0);
        let swap = t(2, 2, &[(&[1, 2], 1.0), (&[2, 1], 1.0)]);
        assert!((rho_estimate(&swap, &opts).unwrap().value - 1.0).abs() < 1e-12);
        let rot = t(2, 2, &[(&[1, 2], -2.0), (&[2, 1], 2.0)]);
        let r = rho_estimate(&rot, &opts).unwrap();
        assert_eq!(r.confidence, RhoConfidence::CharPolyRoots);
        assert!((r.value - 2.0).abs() < 1e-12);
    }
}
