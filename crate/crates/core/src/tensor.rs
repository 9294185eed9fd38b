//! Sparse real tensors and the elementary algebra on them.
//!
//! A [`Tensor`] of order `m` and dimension `n` stores its nonzero entries
//! literally, keyed by [`IndexTuple`]. Nothing is symmetrized: the entry
//! `a_{11122}` and the entry `a_{12121}` are different positions.

use std::collections::{BTreeMap, HashMap};

use crate::error::{TensorError, ZFormError};
use crate::index::IndexTuple;
use crate::scalar::Scalar;

/// Dense enumeration of all `n^m` tuples is only allowed below this count.
pub const DENSE_GUARD: u128 = 10_000_000;

/// Number of index tuples `n^m`, saturating at `u128::MAX`.
pub fn tuple_count(order: usize, dim: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..order {
        acc = acc.saturating_mul(dim as u128);
    }
    acc
}

/// Every index tuple of the given shape in lexicographic order.
///
/// Panics when `n^m` exceeds [`DENSE_GUARD`].
pub fn all_tuples(order: usize, dim: usize) -> impl Iterator<Item = IndexTuple> {
    assert!(tuple_count(order, dim) <= DENSE_GUARD, "dense tuple enumeration over guard");
    let total = tuple_count(order, dim) as usize;
    (0..total).map(move |mut code| {
        let mut idx = vec![0; order];
        for slot in idx.iter_mut().rev() {
            *slot = code % dim;
            code /= dim;
        }
        IndexTuple::from_zero_based(idx)
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Tensor<S> {
    order: usize,
    dim: usize,
    entries: BTreeMap<IndexTuple, S>,
}

impl<S: Scalar> Tensor<S> {
    /// Builds a tensor from 1-based `(indices, value)` pairs.
    ///
    /// Zero values are dropped. Repeating a tuple is fine as long as every
    /// occurrence carries the same value.
    pub fn new<I>(order: usize, dim: usize, raw_entries: I) -> Result<Self, TensorError>
    where
        I: IntoIterator<Item = (Vec<usize>, S)>,
    {
        check_shape(order, dim)?;
        let mut seen: HashMap<IndexTuple, S> = HashMap::new();
        let mut entries = BTreeMap::new();
        for (one_based, value) in raw_entries {
            let idx = IndexTuple::from_one_based(&one_based, order, dim)?;
            if let Some(prev) = seen.get(&idx) {
                if *prev != value {
                    return Err(TensorError::ConflictingDuplicate { idx: one_based });
                }
                continue;
            }
            seen.insert(idx.clone(), value.clone());
            if !value.is_zero() {
                entries.insert(idx, value);
            }
        }
        Ok(Self { order, dim, entries })
    }

    /// Builds a tensor from already validated 0-based tuples; later values win.
    pub fn from_entries<I>(order: usize, dim: usize, entries: I) -> Result<Self, TensorError>
    where
        I: IntoIterator<Item = (IndexTuple, S)>,
    {
        check_shape(order, dim)?;
        let mut map = BTreeMap::new();
        for (idx, v) in entries {
            if idx.len() != order {
                return Err(TensorError::WrongArity {
                    idx: idx.to_one_based(),
                    expected: order,
                    got: idx.len(),
                });
            }
            if let Some(&bad) = idx.as_slice().iter().find(|&&i| i >= dim) {
                return Err(TensorError::IndexOutOfRange { index: bad + 1, dim });
            }
            if v.is_zero() {
                map.remove(&idx);
            } else {
                map.insert(idx, v);
            }
        }
        Ok(Self { order, dim, entries: map })
    }

    pub fn zeros(order: usize, dim: usize) -> Result<Self, TensorError> {
        check_shape(order, dim)?;
        Ok(Self {
            order,
            dim,
            entries: BTreeMap::new(),
        })
    }

    /// The unit tensor: ones on the diagonal `(i, ..., i)`.
    pub fn identity(order: usize, dim: usize) -> Result<Self, TensorError> {
        Self::diagonal((0..dim).map(|_| S::one()).collect(), order)
    }

    /// Diagonal tensor with `d_i` at `(i, ..., i)`.
    pub fn diagonal(d: Vec<S>, order: usize) -> Result<Self, TensorError> {
        let dim = d.len();
        Self::from_entries(
            order,
            dim,
            d.into_iter()
                .enumerate()
                .map(|(i, v)| (IndexTuple::from_zero_based(vec![i; order]), v)),
        )
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Stored entries in lexicographic tuple order.
    pub fn entries(&self) -> impl Iterator<Item = (&IndexTuple, &S)> {
        self.entries.iter()
    }

    pub fn get(&self, idx: &IndexTuple) -> S {
        self.entries.get(idx).cloned().unwrap_or_else(S::zero)
    }

    /// Entry lookup with a 1-based tuple.
    pub fn get_one_based(&self, idx: &[usize]) -> Result<S, TensorError> {
        Ok(self.get(&IndexTuple::from_one_based(idx, self.order, self.dim)?))
    }

    /// Diagonal entry `t_{i...i}` (0-based `i`).
    pub fn diag(&self, i: usize) -> S {
        self.get(&IndexTuple::from_zero_based(vec![i; self.order]))
    }

    pub fn same_shape(&self, other: &Self) -> Result<(), TensorError> {
        if self.order != other.order || self.dim != other.dim {
            return Err(TensorError::ShapeMismatch(self.order, self.dim, other.order, other.dim));
        }
        Ok(())
    }

    fn check_len(&self, len: usize) -> Result<(), TensorError> {
        if len != self.dim {
            return Err(TensorError::DimensionMismatch {
                expected: self.dim,
                got: len,
            });
        }
        Ok(())
    }

    /// `T x^{m-1}`: component `i` is `Σ t_{i i2..im} x_{i2} ... x_{im}`.
    pub fn apply(&self, x: &[S]) -> Result<Vec<S>, TensorError> {
        self.check_len(x.len())?;
        let mut out = vec![S::zero(); self.dim];
        for (idx, v) in &self.entries {
            let mut term = v.clone();
            for &j in idx.tail() {
                term = term * x[j].clone();
            }
            let row = idx.head();
            out[row] = out[row].clone() + term;
        }
        Ok(out)
    }

    /// `T x^m = Σ t_{i1..im} x_{i1} ... x_{im}`.
    pub fn power_form(&self, x: &[S]) -> Result<S, TensorError> {
        self.check_len(x.len())?;
        let mut acc = S::zero();
        for (idx, v) in &self.entries {
            let mut term = v.clone();
            for &j in idx.as_slice() {
                term = term * x[j].clone();
            }
            acc = acc + term;
        }
        Ok(acc)
    }

    /// Entrywise absolute value `|T|`.
    pub fn abs(&self) -> Self {
        self.map_values(|v| v.abs())
    }

    pub fn scale(&self, c: &S) -> Self {
        self.map_values(|v| v.clone() * c.clone())
    }

    pub fn neg(&self) -> Self {
        self.map_values(|v| -v.clone())
    }

    pub fn add(&self, other: &Self) -> Result<Self, TensorError> {
        self.same_shape(other)?;
        let mut entries = self.entries.clone();
        for (idx, v) in &other.entries {
            let sum = entries.get(idx).cloned().unwrap_or_else(S::zero) + v.clone();
            if sum.is_zero() {
                entries.remove(idx);
            } else {
                entries.insert(idx.clone(), sum);
            }
        }
        Ok(Self {
            order: self.order,
            dim: self.dim,
            entries,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, TensorError> {
        self.add(&other.neg())
    }

    /// `a (B + b I)`. Eigenpairs map as `(λ, x) ↦ (a(λ + b), x)`.
    pub fn shift(&self, a: &S, b: &S) -> Self {
        let mut entries = BTreeMap::new();
        if !a.is_zero() {
            for (idx, v) in &self.entries {
                entries.insert(idx.clone(), v.clone());
            }
            for i in 0..self.dim {
                let key = IndexTuple::from_zero_based(vec![i; self.order]);
                let value = entries.get(&key).cloned().unwrap_or_else(S::zero) + b.clone();
                entries.insert(key, value);
            }
            entries = entries
                .into_iter()
                .map(|(k, v)| (k, v * a.clone()))
                .filter(|(_, v)| !v.is_zero())
                .collect();
        }
        Self {
            order: self.order,
            dim: self.dim,
            entries,
        }
    }

    /// Largest entrywise difference against `other`, over the union of supports.
    pub fn max_abs_diff(&self, other: &Self) -> Result<S, TensorError> {
        self.same_shape(other)?;
        let mut worst = S::zero();
        for (idx, v) in &self.entries {
            let d = (v.clone() - other.get(idx)).abs();
            if d > worst {
                worst = d;
            }
        }
        for (idx, v) in &other.entries {
            if !self.entries.contains_key(idx) {
                let d = v.abs();
                if d > worst {
                    worst = d;
                }
            }
        }
        Ok(worst)
    }

    /// True when every stored value is invariant under index permutation.
    pub fn is_symmetric(&self) -> bool {
        let mut orbits: HashMap<IndexTuple, (S, u128)> = HashMap::new();
        for (idx, v) in &self.entries {
            let key = idx.sorted();
            match orbits.get_mut(&key) {
                Some((value, count)) => {
                    if value != v {
                        return false;
                    }
                    *count += 1;
                }
                None => {
                    orbits.insert(key, (v.clone(), 1));
                }
            }
        }
        orbits
            .iter()
            .all(|(key, (_, count))| *count == distinct_permutations(key.as_slice()))
    }

    pub fn is_nonnegative(&self) -> bool {
        self.first_negative().is_none()
    }

    pub fn first_negative(&self) -> Option<&IndexTuple> {
        self.entries.iter().find(|(_, v)| v.is_negative()).map(|(k, _)| k)
    }

    /// Z-form check: nonnegative diagonal, nonpositive off-diagonal.
    pub fn is_z_tensor(&self) -> bool {
        z_decompose(self).is_ok()
    }

    pub fn map_values<F: Fn(&S) -> S>(&self, f: F) -> Self {
        Self {
            order: self.order,
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .map(|(k, v)| (k.clone(), f(v)))
                .filter(|(_, v)| !v.is_zero())
                .collect(),
        }
    }

    /// Same positions, values converted to another scalar type.
    pub fn convert<T: Scalar, F: Fn(&S) -> T>(&self, f: F) -> Tensor<T> {
        Tensor {
            order: self.order,
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .map(|(k, v)| (k.clone(), f(v)))
                .filter(|(_, v)| !v.is_zero())
                .collect(),
        }
    }

    /// Keeps the entries whose tuple satisfies `keep`.
    pub fn filter<F: Fn(&IndexTuple, &S) -> bool>(&self, keep: F) -> Self {
        Self {
            order: self.order,
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .filter(|(k, v)| keep(k, v))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }
}

fn check_shape(order: usize, dim: usize) -> Result<(), TensorError> {
    if order < 2 || dim < 1 {
        return Err(TensorError::InvalidShape { order, dim });
    }
    Ok(())
}

/// `m! / Π mult_j!` for a sorted tuple.
fn distinct_permutations(sorted: &[usize]) -> u128 {
    let mut result: u128 = 1;
    let mut seen = 0u128;
    let mut run = 0u128;
    for (k, &i) in sorted.iter().enumerate() {
        if k > 0 && sorted[k - 1] == i {
            run += 1;
        } else {
            run = 1;
        }
        seen += 1;
        // multiply by seen / run incrementally keeps the value integral
        result = result * seen / run;
    }
    result
}

/// Selects which of `D - C` and `D + C` [`compose`] produces.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Minus,
    Plus,
}

/// `A = D - C` with `D ≥ 0` diagonal and `C ≥ 0` off-diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct ZDecomposition<S> {
    pub d: Vec<S>,
    pub c: Tensor<S>,
}

impl<S: Scalar> ZDecomposition<S> {
    pub fn order(&self) -> usize {
        self.c.order()
    }

    pub fn dim(&self) -> usize {
        self.c.dim()
    }

    /// `A = D - C`.
    pub fn z_tensor(&self) -> Tensor<S> {
        compose(&self.d, &self.c, Sign::Minus).expect("decomposition is valid by construction")
    }

    /// `|A| = D + C`.
    pub fn abs_tensor(&self) -> Tensor<S> {
        compose(&self.d, &self.c, Sign::Plus).expect("decomposition is valid by construction")
    }
}

/// Splits a Z-tensor with nonnegative diagonal into `(d, C)`.
pub fn z_decompose<S: Scalar>(a: &Tensor<S>) -> Result<ZDecomposition<S>, ZFormError> {
    let mut d = vec![S::zero(); a.dim()];
    let mut c = BTreeMap::new();
    for (idx, v) in a.entries() {
        if idx.is_diagonal() {
            if v.is_negative() {
                return Err(ZFormError::NegativeDiagonal { index: idx.head() + 1 });
            }
            d[idx.head()] = v.clone();
        } else {
            if v.is_positive() {
                return Err(ZFormError::PositiveOffDiagonal { idx: idx.to_one_based() });
            }
            c.insert(idx.clone(), -v.clone());
        }
    }
    Ok(ZDecomposition {
        d,
        c: Tensor {
            order: a.order(),
            dim: a.dim(),
            entries: c,
        },
    })
}

/// `D - C` or `D + C`.
pub fn compose<S: Scalar>(d: &[S], c: &Tensor<S>, sign: Sign) -> Result<Tensor<S>, ZFormError> {
    if d.len() != c.dim() {
        return Err(TensorError::DimensionMismatch {
            expected: c.dim(),
            got: d.len(),
        }
        .into());
    }
    if let Some(i) = d.iter().position(|v| v.is_negative()) {
        return Err(ZFormError::NegativeDiagonal { index: i + 1 });
    }
    let mut entries = BTreeMap::new();
    for (idx, v) in c.entries() {
        if idx.is_diagonal() || v.is_negative() {
            return Err(ZFormError::InvalidOffDiagonalPart { idx: idx.to_one_based() });
        }
        let signed = match sign {
            Sign::Minus => -v.clone(),
            Sign::Plus => v.clone(),
        };
        entries.insert(idx.clone(), signed);
    }
    for (i, v) in d.iter().enumerate() {
        if !v.is_zero() {
            entries.insert(IndexTuple::from_zero_based(vec![i; c.order()]), v.clone());
        }
    }
    Ok(Tensor {
        order: c.order(),
        dim: c.dim(),
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn order5_d113() -> Tensor<f64> {
        Tensor::new(
            5,
            3,
            vec![
                (vec![1, 1, 1, 1, 1], 1.0),
                (vec![2, 2, 2, 2, 2], 1.0),
                (vec![3, 3, 3, 3, 3], 3.0),
                (vec![1, 1, 3, 3, 3], -1.0),
                (vec![2, 2, 3, 3, 3], -2.0),
            ],
        )
        .unwrap()
    }

    #[test]
    fn builds_d113_with_five_entries() {
        assert_eq!(order5_d113().nnz(), 5);
    }

    #[test]
    fn empty_tensor_reads_zero() {
        let t = Tensor::<f64>::new(2, 2, vec![]).unwrap();
        assert_eq!(t.nnz(), 0);
        for idx in all_tuples(2, 2) {
            assert_eq!(t.get(&idx), 0.0);
        }
    }

    #[test]
    fn zero_values_are_dropped() {
        let t = Tensor::new(2, 2, vec![(vec![1, 2], 0.0), (vec![2, 1], 1.5)]).unwrap();
        assert_eq!(t.nnz(), 1);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(
            Tensor::<f64>::new(1, 2, vec![]).unwrap_err(),
            TensorError::InvalidShape { order: 1, dim: 2 }
        );
        assert!(matches!(
            Tensor::new(2, 2, vec![(vec![1, 3], 1.0)]).unwrap_err(),
            TensorError::IndexOutOfRange { index: 3, dim: 2 }
        ));
        assert!(matches!(
            Tensor::new(2, 2, vec![(vec![1, 2], 1.0), (vec![1, 2], 2.0)]).unwrap_err(),
            TensorError::ConflictingDuplicate { .. }
        ));
        // repeating the same value is accepted
        assert_eq!(
            Tensor::new(2, 2, vec![(vec![1, 2], 1.0), (vec![1, 2], 1.0)]).unwrap().nnz(),
            1
        );
    }

    #[test]
    fn apply_matches_printed_eigen_system() {
        // rows: x1^4 - x1 x3^3, x2^4 - 2 x2 x3^3, 3 x3^4
        let printed = |x: [f64; 3]| {
            [
                x[0].powi(4) - x[0] * x[2].powi(3),
                x[1].powi(4) - 2.0 * x[1] * x[2].powi(3),
                3.0 * x[2].powi(4),
            ]
        };
        let t = order5_d113();
        assert_eq!(t.apply(&[1.0, 1.0, 1.0]).unwrap(), vec![0.0, -1.0, 3.0]);
        let x = [0.3, -1.2, 0.7];
        let got = t.apply(&x).unwrap();
        for (g, w) in got.iter().zip(printed(x)) {
            assert!((g - w).abs() < 1e-12);
        }
        assert_eq!(t.apply(&[0.0; 3]).unwrap(), vec![0.0; 3]);
        assert!(t.apply(&[1.0, 2.0]).is_err());
    }

    #[test]
    fn power_form_sums_entries_at_ones() {
        let t = order5_d113();
        assert_eq!(t.power_form(&[1.0, 1.0, 1.0]).unwrap(), 2.0);
        assert_eq!(t.power_form(&[0.0; 3]).unwrap(), 0.0);
        let x = [0.5, -0.25, 1.5];
        let inner: f64 = t.apply(&x).unwrap().iter().zip(&x).map(|(a, b)| a * b).sum();
        assert!((t.power_form(&x).unwrap() - inner).abs() < 1e-12);
        assert!((t.scale(&3.0).power_form(&x).unwrap() - 3.0 * t.power_form(&x).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn identity_applies_as_elementwise_power() {
        let id = Tensor::<f64>::identity(4, 2).unwrap();
        assert_eq!(id.apply(&[2.0, 3.0]).unwrap(), vec![8.0, 27.0]);
        let id2 = Tensor::<f64>::identity(2, 3).unwrap();
        assert_eq!(id2.nnz(), 3);
        assert_eq!(id2.get_one_based(&[2, 2]).unwrap(), 1.0);
        assert_eq!(id2.get_one_based(&[1, 2]).unwrap(), 0.0);
    }

    #[test]
    fn abs_is_idempotent_and_fixes_nonnegative() {
        let t = order5_d113();
        let a = t.abs();
        assert_eq!(a.get_one_based(&[1, 1, 3, 3, 3]).unwrap(), 1.0);
        assert_eq!(a.abs(), a);
        assert_eq!(Tensor::<f64>::identity(3, 2).unwrap().abs(), Tensor::identity(3, 2).unwrap());
    }

    #[test]
    fn shift_examples() {
        let t = order5_d113();
        assert_eq!(t.shift(&1.0, &0.0), t);
        let s = Tensor::<f64>::identity(3, 2).unwrap().shift(&2.0, &3.0);
        assert_eq!(s, Tensor::diagonal(vec![8.0, 8.0], 3).unwrap());
        assert!(t.shift(&0.0, &5.0).is_zero());
    }

    #[test]
    fn z_decomposition_of_d113() {
        let z = z_decompose(&order5_d113()).unwrap();
        assert_eq!(z.d, vec![1.0, 1.0, 3.0]);
        assert_eq!(z.c.nnz(), 2);
        assert_eq!(z.c.get_one_based(&[1, 1, 3, 3, 3]).unwrap(), 1.0);
        assert_eq!(z.c.get_one_based(&[2, 2, 3, 3, 3]).unwrap(), 2.0);
        assert_eq!(z.z_tensor(), order5_d113());
        assert_eq!(z.abs_tensor(), order5_d113().abs());
    }

    #[test]
    fn z_decomposition_rejects_bad_signs() {
        let diag = Tensor::diagonal(vec![1.0, 2.0], 3).unwrap();
        assert!(z_decompose(&diag).unwrap().c.is_zero());
        let pos = Tensor::new(3, 2, vec![(vec![1, 2, 2], 0.5)]).unwrap();
        assert!(matches!(z_decompose(&pos), Err(ZFormError::PositiveOffDiagonal { .. })));
        let neg = Tensor::new(3, 2, vec![(vec![2, 2, 2], -0.5)]).unwrap();
        assert_eq!(z_decompose(&neg), Err(ZFormError::NegativeDiagonal { index: 2 }));
    }

    #[test]
    fn compose_signs() {
        let z = z_decompose(&order5_d113()).unwrap();
        let plus = compose(&z.d, &z.c, Sign::Plus).unwrap();
        let minus = compose(&z.d, &z.c, Sign::Minus).unwrap();
        assert_eq!(plus.sub(&minus).unwrap(), z.c.scale(&2.0));
        assert_eq!(compose(&[0.0; 3], &z.c, Sign::Plus).unwrap(), z.c);
        assert!(compose(&[1.0, 1.0], &z.c, Sign::Plus).is_err());
        assert!(compose(&[1.0, 1.0, 1.0], &z.c.neg(), Sign::Plus).is_err());
    }

    #[test]
    fn symmetry_predicate() {
        assert!(!order5_d113().is_symmetric());
        let sym = Tensor::new(3, 2, vec![(vec![1, 1, 2], 1.0), (vec![1, 2, 1], 1.0), (vec![2, 1, 1], 1.0)]).unwrap();
        assert!(sym.is_symmetric());
        let partial = Tensor::new(3, 2, vec![(vec![1, 1, 2], 1.0), (vec![1, 2, 1], 1.0)]).unwrap();
        assert!(!partial.is_symmetric());
        assert_eq!(distinct_permutations(&[0, 0, 1, 1]), 6);
        assert_eq!(distinct_permutations(&[0, 1, 2]), 6);
        assert_eq!(distinct_permutations(&[2, 2, 2]), 1);
    }

    #[test]
    fn all_tuples_is_lexicographic() {
        let v: Vec<Vec<usize>> = all_tuples(2, 2).map(|t| t.to_one_based()).collect();
        assert_eq!(v, vec![vec![1, 1], vec![1, 2], vec![2, 1], vec![2, 2]]);
    }
}
