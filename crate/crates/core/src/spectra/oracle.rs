//! Multi-start Newton oracle for real eigenpairs of small tensors.
//!
//! Solves `T x^{m-1} - λ x^{[m-1]} = 0` together with `Σ |x_i|^m = 1`
//! (written `Σ (x_i²)^{m/2}` so it stays differentiable) from many seeded
//! starting points on the unit sphere. Steps are Levenberg–Marquardt damped
//! Newton steps, which keeps progress on the singular roots that tensors
//! with a continuum of eigenvectors produce. The result is never claimed to
//! be complete.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::SpectraError;
use crate::scalar::Real;
use crate::tensor::Tensor;

use super::{residual, EigenPair, SolverOptions};

pub const ORACLE_MAX_DIM: usize = 4;
pub const ORACLE_MAX_ORDER: usize = 6;

const NEWTON_MAX_STEPS: usize = 400;

/// Real H-eigenpairs found from `opts.starts` seeded starts, largest `λ` first.
///
/// Every returned pair has `residual <= opts.tol`; eigenvectors are scaled
/// so their largest-magnitude component is `+1`. Pairs whose eigenvalues
/// and canonical eigenvectors agree within `opts.dedup_tol` are merged.
pub fn brute_force_h_eigenpairs<F: Real>(t: &Tensor<F>, opts: &SolverOptions) -> Result<Vec<EigenPair<F>>, SpectraError> {
    if t.dim() > ORACLE_MAX_DIM || t.order() > ORACLE_MAX_ORDER {
        return Err(SpectraError::OracleGuard {
            dim: t.dim(),
            order: t.order(),
            max_dim: ORACLE_MAX_DIM,
            max_order: ORACLE_MAX_ORDER,
        });
    }
    let n = t.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let starts: Vec<Vec<F>> = (0..opts.starts)
        .map(|_| {
            let v: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
            let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
            v.into_iter().map(|a| F::of(a / norm)).collect()
        })
        .collect();

    let system = System::new(t);
    let tol = F::of(opts.tol);
    let found: Vec<EigenPair<F>> = starts
        .par_iter()
        .filter_map(|x0| system.solve(x0.clone(), tol))
        .collect();
    Ok(dedup(found, F::of(opts.dedup_tol)))
}

/// Largest eigenvalue found by [`brute_force_h_eigenpairs`].
pub fn largest_oracle_pair<F: Real>(t: &Tensor<F>, opts: &SolverOptions) -> Result<EigenPair<F>, SpectraError> {
    brute_force_h_eigenpairs(t, opts)?
        .into_iter()
        .next()
        .ok_or(SpectraError::NoEigenpairFound)
}

/// Scales `x` so its largest-magnitude component (first on ties) is `+1`.
pub fn canonicalize<F: Real>(x: &mut [F]) {
    let mut best = 0;
    for (i, v) in x.iter().enumerate() {
        if v.abs() > x[best].abs() {
            best = i;
        }
    }
    let pivot = x[best];
    if pivot != F::zero() {
        for v in x.iter_mut() {
            *v = *v / pivot;
        }
    }
}

/// Least-squares eigenvalue for a fixed `x`:
/// `argmin_λ ‖T x^{m-1} - λ x^{[m-1]}‖₂`.
pub fn eigenvalue_for<F: Real>(t: &Tensor<F>, x: &[F]) -> Result<F, SpectraError> {
    let tx = t.apply(x)?;
    let m = t.order() as i32;
    let mut num = F::zero();
    let mut den = F::zero();
    for (a, xi) in tx.iter().zip(x) {
        let p = xi.powi(m - 1);
        num = num + *a * p;
        den = den + p * p;
    }
    Ok(if den > F::zero() { num / den } else { F::zero() })
}

fn dedup<F: Real>(mut pairs: Vec<EigenPair<F>>, tol: F) -> Vec<EigenPair<F>> {
    pairs.sort_by(|a, b| {
        b.lambda
            .partial_cmp(&a.lambda)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| a.residual.partial_cmp(&b.residual).unwrap_or(std::cmp::Ordering::Equal))
    });
    let mut kept: Vec<EigenPair<F>> = Vec::new();
    for p in pairs {
        let dup = kept.iter_mut().find(|k| {
            (k.lambda - p.lambda).abs() <= tol && k.x.iter().zip(&p.x).all(|(a, b)| (*a - *b).abs() <= tol)
        });
        match dup {
            Some(k) => {
                if p.residual < k.residual {
                    *k = p;
                }
            }
            None => kept.push(p),
        }
    }
    kept.sort_by(|a, b| b.lambda.partial_cmp(&a.lambda).unwrap_or(std::cmp::Ordering::Equal));
    kept
}

/// Stored entries flattened for repeated evaluation.
struct System<'a, F> {
    t: &'a Tensor<F>,
    entries: Vec<(usize, Vec<usize>, F)>,
    n: usize,
    m: usize,
}

impl<'a, F: Real> System<'a, F> {
    fn new(t: &'a Tensor<F>) -> Self {
        Self {
            t,
            entries: t.entries().map(|(idx, v)| (idx.head(), idx.tail().to_vec(), *v)).collect(),
            n: t.dim(),
            m: t.order(),
        }
    }

    /// Residual vector of length `n + 1` for unknowns `z = (x, λ)`.
    fn eval(&self, z: &[F]) -> Vec<F> {
        let (x, lambda) = (&z[..self.n], z[self.n]);
        let mut f = vec![F::zero(); self.n + 1];
        for (row, tail, v) in &self.entries {
            let mut term = *v;
            for &j in tail {
                term = term * x[j];
            }
            f[*row] = f[*row] + term;
        }
        let mut norm = F::zero();
        for i in 0..self.n {
            f[i] = f[i] - lambda * x[i].powi(self.m as i32 - 1);
            norm = norm + (x[i] * x[i]).powf(F::of(self.m as f64 / 2.0));
        }
        f[self.n] = norm - F::one();
        f
    }

    fn jacobian(&self, z: &[F]) -> Vec<Vec<F>> {
        let (x, lambda) = (&z[..self.n], z[self.n]);
        let k = self.n + 1;
        let mut jac = vec![vec![F::zero(); k]; k];
        let mf = F::of(self.m as f64);
        for (row, tail, v) in &self.entries {
            // d/dx_{tail[p]} of v * Π tail via prefix/suffix products
            let len = tail.len();
            let mut prefix = vec![F::one(); len + 1];
            for p in 0..len {
                prefix[p + 1] = prefix[p] * x[tail[p]];
            }
            let mut suffix = F::one();
            for p in (0..len).rev() {
                jac[*row][tail[p]] = jac[*row][tail[p]] + *v * prefix[p] * suffix;
                suffix = suffix * x[tail[p]];
            }
        }
        for i in 0..self.n {
            jac[i][i] = jac[i][i] - lambda * F::of((self.m - 1) as f64) * x[i].powi(self.m as i32 - 2);
            jac[i][self.n] = -x[i].powi(self.m as i32 - 1);
            jac[self.n][i] = mf * (x[i] * x[i]).powf(F::of((self.m as f64 - 2.0) / 2.0)) * x[i];
        }
        jac
    }

    fn solve(&self, x0: Vec<F>, tol: F) -> Option<EigenPair<F>> {
        let n = self.n;
        let mut x = x0;
        let s: F = x.iter().map(|v| v.abs().powi(self.m as i32)).fold(F::zero(), |a, b| a + b);
        if s <= F::zero() {
            return None;
        }
        let scale = s.powf(F::one() / F::of(self.m as f64));
        for v in x.iter_mut() {
            *v = *v / scale;
        }
        let lambda0 = eigenvalue_for(self.t, &x).ok()?;
        let mut z = x;
        z.push(lambda0);

        let stop = tol * F::of(1e-3);
        let mut f = self.eval(&z);
        let mut cost = sq_norm(&f);
        let mut mu = F::of(1e-3);
        let mut steps = 0;
        while steps < NEWTON_MAX_STEPS {
            if max_abs(&f) <= stop {
                break;
            }
            steps += 1;
            let jac = self.jacobian(&z);
            let mut improved = false;
            while mu < F::of(1e12) {
                let Some(delta) = lm_step(&jac, &f, mu) else {
                    mu = mu * F::of(10.0);
                    continue;
                };
                let trial: Vec<F> = z.iter().zip(&delta).map(|(a, d)| *a + *d).collect();
                let ft = self.eval(&trial);
                let ct = sq_norm(&ft);
                if ct.is_finite() && ct < cost {
                    z = trial;
                    f = ft;
                    cost = ct;
                    mu = (mu / F::of(3.0)).max(F::of(1e-15));
                    improved = true;
                    break;
                }
                mu = mu * F::of(4.0);
            }
            if !improved {
                break;
            }
        }

        let mut x: Vec<F> = z[..n].to_vec();
        if x.iter().any(|v| !v.is_finite()) || x.iter().all(|v| *v == F::zero()) {
            return None;
        }
        canonicalize(&mut x);
        // Near a singular root the iterate creeps toward it with its small
        // components decaying slowly; zeroing them often lands on the root.
        // An iterate that already passes is kept as is, since zeroing can
        // jump to a different root.
        let lambda = eigenvalue_for(self.t, &x).ok()?;
        let bwd = self.backward_error(lambda, &x);
        let (x, lambda, bwd) = if bwd <= tol { (x, lambda, bwd) } else { self.snap_small_components(x)? };
        let res = residual(self.t, lambda, &x).ok()?;
        (bwd <= tol && res <= tol).then_some(EigenPair {
            lambda,
            x,
            residual: res,
            iterations: steps,
        })
    }

    /// Componentwise backward error of `(λ, x)`:
    /// `max_i |(Tx^{m-1})_i - λ x_i^{m-1}| / (Σ |t_{i..}| |x_{i2}⋯x_{im}| + |λ| |x_i|^{m-1})`.
    ///
    /// Unlike the plain residual it does not vanish just because a row's
    /// terms are all tiny, which is what separates genuine roots from
    /// points near a singular one.
    fn backward_error(&self, lambda: F, x: &[F]) -> F {
        let mut value = vec![F::zero(); self.n];
        let mut scale = vec![F::zero(); self.n];
        for (row, tail, v) in &self.entries {
            let term = tail.iter().fold(*v, |acc, &j| acc * x[j]);
            value[*row] = value[*row] + term;
            scale[*row] = scale[*row] + term.abs();
        }
        let mut worst = F::zero();
        for i in 0..self.n {
            let p = lambda * x[i].powi(self.m as i32 - 1);
            let r = (value[i] - p).abs();
            let s = scale[i] + p.abs();
            if r > F::zero() {
                worst = worst.max(if s > F::zero() { r / s } else { F::infinity() });
            }
        }
        worst
    }

    /// Smallest backward error over all ways of zeroing the components of
    /// `x` below [`SNAP_THRESHOLD`]; ties go to the sparser vector.
    fn snap_small_components(&self, x: Vec<F>) -> Option<(Vec<F>, F, F)> {
        let small: Vec<usize> = (0..x.len()).filter(|&i| x[i].abs() < F::of(SNAP_THRESHOLD)).collect();
        let mut best: Option<(Vec<F>, F, F, u32)> = None;
        for mask in 0u32..1 << small.len() {
            let mut y = x.clone();
            for (b, &i) in small.iter().enumerate() {
                if mask >> b & 1 == 1 {
                    y[i] = F::zero();
                }
            }
            let lambda = eigenvalue_for(self.t, &y).ok()?;
            let bwd = self.backward_error(lambda, &y);
            let zeros = mask.count_ones();
            let better = match &best {
                None => true,
                Some((_, _, b, z)) => bwd < *b || (bwd == *b && zeros > *z),
            };
            if better {
                best = Some((y, lambda, bwd, zeros));
            }
        }
        best.map(|(y, l, b, _)| (y, l, b))
    }
}

/// Components below this magnitude (after canonicalization) may be zeroed.
const SNAP_THRESHOLD: f64 = 0.25;

fn sq_norm<F: Real>(v: &[F]) -> F {
    v.iter().fold(F::zero(), |a, b| a + *b * *b)
}

fn max_abs<F: Real>(v: &[F]) -> F {
    v.iter().fold(F::zero(), |a, b| a.max(b.abs()))
}

/// Solves `(JᵀJ + μ (diag(JᵀJ) + I)) δ = -Jᵀ f`.
fn lm_step<F: Real>(jac: &[Vec<F>], f: &[F], mu: F) -> Option<Vec<F>> {
    let k = f.len();
    let mut a = vec![vec![F::zero(); k]; k];
    let mut rhs = vec![F::zero(); k];
    for r in 0..k {
        for i in 0..k {
            rhs[i] = rhs[i] - jac[r][i] * f[r];
            for j in 0..k {
                a[i][j] = a[i][j] + jac[r][i] * jac[r][j];
            }
        }
    }
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = row[i] + mu * (row[i] + F::one());
    }
    solve_dense(a, rhs)
}

/// Gaussian elimination with partial pivoting.
pub(crate) fn solve_dense<F: Real>(mut a: Vec<Vec<F>>, mut b: Vec<F>) -> Option<Vec<F>> {
    let k = b.len();
    for col in 0..k {
        let piv = (col..k).max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap_or(std::cmp::Ordering::Equal))?;
        if !(a[piv][col].abs() > F::zero()) {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..k {
            let factor = a[r][col] / a[col][col];
            if factor == F::zero() {
                continue;
            }
            for c in col..k {
                a[r][c] = a[r][c] - factor * a[col][c];
            }
            b[r] = b[r] - factor * b[col];
        }
    }
    let mut x = vec![F::zero(); k];
    for r in (0..k).rev() {
        let mut s = b[r];
        for c in r + 1..k {
            s = s - a[r][c] * x[c];
        }
        x[r] = s / a[r][r];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}
