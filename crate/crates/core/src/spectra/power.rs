//! Shifted power iteration for the spectral radius of a nonnegative tensor.

use crate::error::SpectraError;
use crate::scalar::Real;
use crate::structure::is_weakly_irreducible;
use crate::tensor::Tensor;

use super::{residual, EigenPair, SolverOptions};

/// Collatz–Wielandt bracket `(min_i r_i, max_i r_i)` of `N + I` at one iterate.
pub type Bracket<F> = (F, F);

/// Perron pair `(ρ(N), x)` of a nonnegative weakly irreducible tensor.
///
/// Iterates `x ← (N + I) x^{m-1}` with an `(m-1)`-th root, stopping once
/// the ratios `r_i = ((N + I) x^{m-1})_i / x_i^{m-1}` agree to `opts.tol`.
/// The `+I` shift removes periodic cycling and moves every eigenvalue by
/// one, so `ρ(N) = ρ(N + I) - 1`. The returned `x` is positive with
/// `Σ x_i^m = 1`.
pub fn power_iteration_rho<F: Real>(n: &Tensor<F>, opts: &SolverOptions) -> Result<EigenPair<F>, SpectraError> {
    run(n, opts, false).map(|(pair, _)| pair)
}

/// [`power_iteration_rho`] that also returns the bracket at every iterate.
pub fn power_iteration_trace<F: Real>(
    n: &Tensor<F>,
    opts: &SolverOptions,
) -> Result<(EigenPair<F>, Vec<Bracket<F>>), SpectraError> {
    run(n, opts, true)
}

fn run<F: Real>(n: &Tensor<F>, opts: &SolverOptions, keep_trace: bool) -> Result<(EigenPair<F>, Vec<Bracket<F>>), SpectraError> {
    if let Some(idx) = n.first_negative() {
        return Err(SpectraError::NotNonnegative { idx: idx.to_one_based() });
    }
    if !is_weakly_irreducible(n) {
        return Err(SpectraError::NotWeaklyIrreducible);
    }
    let m = n.order();
    let dim = n.dim();
    let shifted = n.shift(&F::one(), &F::one());
    let tol = F::of(opts.tol);
    let root = F::one() / F::of((m - 1) as f64);
    let mut x = normalize(vec![F::one(); dim], m);
    let mut trace = Vec::new();
    let mut width = F::infinity();

    for iter in 0..opts.max_iters {
        let y = shifted.apply(&x)?;
        let mut lo = F::infinity();
        let mut hi = F::neg_infinity();
        for (yi, xi) in y.iter().zip(&x) {
            let r = *yi / xi.powi(m as i32 - 1);
            lo = lo.min(r);
            hi = hi.max(r);
        }
        if keep_trace {
            trace.push((lo, hi));
        }
        width = hi - lo;
        if width <= tol {
            let lambda = (lo + hi) / F::of(2.0) - F::one();
            let res = residual(n, lambda, &x)?;
            return Ok((
                EigenPair {
                    lambda,
                    x,
                    residual: res,
                    iterations: iter,
                },
                trace,
            ));
        }
        let next: Vec<F> = y.iter().map(|v| if m == 2 { *v } else { v.powf(root) }).collect();
        x = normalize(next, m);
        if x.iter().any(|v| !v.is_finite() || *v <= F::min_positive_value()) {
            return Err(SpectraError::LostPositivity { iterations: iter });
        }
    }
    Err(SpectraError::MaxItersExceeded {
        iterations: opts.max_iters,
        width: width.to_f64().unwrap_or(f64::NAN),
    })
}

/// Scales a positive vector to `Σ x_i^m = 1`.
fn normalize<F: Real>(x: Vec<F>, m: usize) -> Vec<F> {
    let s: F = x.iter().map(|v| v.powi(m as i32)).fold(F::zero(), |a, b| a + b);
    let scale = s.powf(F::one() / F::of(m as f64));
    x.into_iter().map(|v| v / scale).collect()
}
