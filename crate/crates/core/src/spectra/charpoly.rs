//! Exact characteristic polynomials of dimension-2 tensors.
//!
//! For an order-`m` tensor on two indices the eigen-equations are two binary
//! forms of degree `d = m - 1`:
//!
//! ```text
//! f1(x1, x2) = (T x^{d})_1 - λ x1^d
//! f2(x1, x2) = (T x^{d})_2 - λ x2^d
//! ```
//!
//! They share a nontrivial zero exactly when λ is an eigenvalue, so their
//! resultant is the characteristic polynomial, of degree `2d` and monic in λ.
//! The resultant is the determinant of the `2d × 2d` Sylvester matrix whose
//! entries are affine in λ; it is expanded with exact rational arithmetic.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::SpectraError;
use crate::scalar::Scalar;
use crate::tensor::Tensor;

use super::poly::{bareiss_det, RatPoly};

/// Characteristic polynomial of an order-`m` dimension-2 tensor.
///
/// `coeffs[k]` is the coefficient of `λ^k`; the vector always has
/// `2(m-1) + 1` entries, even when high coefficients vanish.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharPoly2 {
    pub order: usize,
    pub coeffs: Vec<BigRational>,
}

/// Floating view of a [`CharPoly2`] for reports.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CharPolySummary {
    pub order: usize,
    pub coefficients: Vec<f64>,
    pub exact: Vec<String>,
    pub roots: Vec<(f64, f64)>,
    pub spectral_radius: f64,
}

impl CharPoly2 {
    pub fn degree_bound(&self) -> usize {
        2 * (self.order - 1)
    }

    pub fn poly(&self) -> RatPoly {
        RatPoly::new(self.coeffs.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect()
    }

    /// Coefficients divided by the highest nonzero one.
    pub fn normalized(&self) -> Option<Vec<BigRational>> {
        let lead = self.coeffs.iter().rev().find(|c| !c.is_zero())?.clone();
        Some(self.coeffs.iter().map(|c| c / &lead).collect())
    }

    /// Complex roots with multiplicity.
    ///
    /// The polynomial is first split into square-free factors over the
    /// rationals, so repeated eigenvalues come back as exact repeats instead
    /// of the ring of perturbed roots a direct companion solve produces.
    pub fn roots(&self) -> Vec<Complex64> {
        let p = self.poly();
        if p.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let mut out = Vec::new();
        for (factor, mult) in square_free_factors(&p) {
            for r in simple_roots(&factor) {
                out.extend(std::iter::repeat_n(r, mult));
            }
        }
        out.sort_by(|a, b| b.norm().total_cmp(&a.norm()).then(b.re.total_cmp(&a.re)).then(b.im.total_cmp(&a.im)));
        out
    }

    /// Real roots (imaginary part below `1e-9` relative), descending.
    pub fn real_roots(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self
            .roots()
            .into_iter()
            .filter(|z| z.im.abs() <= 1e-9 * z.norm().max(1.0))
            .map(|z| z.re)
            .collect();
        v.sort_by(|a, b| b.total_cmp(a));
        v
    }

    /// `max |λ|` over all complex roots; zero for a constant polynomial.
    pub fn spectral_radius(&self) -> f64 {
        self.roots().iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn summary(&self) -> CharPolySummary {
        CharPolySummary {
            order: self.order,
            coefficients: self.to_f64(),
            exact: self.coeffs.iter().map(ToString::to_string).collect(),
            roots: self.roots().iter().map(|z| (z.re, z.im)).collect(),
            spectral_radius: self.spectral_radius(),
        }
    }
}

/// Resultant of the two eigen-forms of a dimension-2 tensor.
///
/// Every finite float is a rational number, so the result is always exact.
pub fn char_poly_dim2<S: Scalar>(t: &Tensor<S>) -> Result<CharPoly2, SpectraError> {
    if t.dim() != 2 {
        return Err(SpectraError::NotDimensionTwo(t.dim()));
    }
    let d = t.order() - 1;
    // forms[i][k]: coefficient of x1^{d-k} x2^k in row i
    let mut forms = vec![vec![BigRational::zero(); d + 1]; 2];
    for (idx, v) in t.entries() {
        let q = v.to_rational().ok_or_else(|| SpectraError::NonRational { idx: idx.to_one_based() })?;
        let k = idx.tail().iter().filter(|&&j| j == 1).count();
        forms[idx.head()][k] += q;
    }
    let size = 2 * d;
    let mut sylvester = vec![vec![RatPoly::zero(); size]; size];
    for r in 0..d {
        for k in 0..=d {
            let lam = |on: bool| if on { -BigRational::one() } else { BigRational::zero() };
            sylvester[r][r + k] = RatPoly::linear(forms[0][k].clone(), lam(k == 0));
            sylvester[d + r][r + k] = RatPoly::linear(forms[1][k].clone(), lam(k == d));
        }
    }
    let det = bareiss_det(sylvester);
    let coeffs = (0..=size).map(|k| det.coeff(k)).collect();
    Ok(CharPoly2 { order: t.order(), coeffs })
}

/// Whether two dimension-2 tensors have the same characteristic polynomial.
///
/// Coefficients are compared after dividing by the leading one. `tol == 0`
/// demands identical rationals; otherwise each normalized coefficient must
/// agree within `tol`.
pub fn spectra_equal_dim2<S: Scalar>(t1: &Tensor<S>, t2: &Tensor<S>, tol: f64) -> Result<bool, SpectraError> {
    if t1.order() != t2.order() {
        return Err(SpectraError::OrderMismatch(t1.order(), t2.order()));
    }
    let p1 = char_poly_dim2(t1)?;
    let p2 = char_poly_dim2(t2)?;
    let (Some(n1), Some(n2)) = (p1.normalized(), p2.normalized()) else {
        return Err(SpectraError::DegeneratePolynomial);
    };
    if tol == 0.0 {
        return Ok(n1 == n2);
    }
    Ok(n1
        .iter()
        .zip(&n2)
        .all(|(a, b)| (a - b).to_f64().is_some_and(|v| v.abs() <= tol)))
}

fn derivative(p: &RatPoly) -> RatPoly {
    RatPoly::new(
        p.coeffs()
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * BigRational::from_integer(k.into()))
            .collect(),
    )
}

fn monic(p: &RatPoly) -> RatPoly {
    match p.leading() {
        Some(lead) => RatPoly::new(p.coeffs().iter().map(|c| c / lead).collect()),
        None => RatPoly::zero(),
    }
}

fn gcd(a: &RatPoly, b: &RatPoly) -> RatPoly {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_zero() {
        let (_, r) = a.div_rem(&b);
        a = b;
        b = monic(&r);
    }
    monic(&a)
}

/// Yun's square-free decomposition: `p = c · Π f_i^i` with each `f_i` square-free.
fn square_free_factors(p: &RatPoly) -> Vec<(RatPoly, usize)> {
    let dp = derivative(p);
    let a0 = gcd(p, &dp);
    let mut b = p.div_exact(&a0);
    let c = dp.div_exact(&a0);
    let mut d = &c - &derivative(&b);
    let mut out = Vec::new();
    let mut i = 1;
    while b.degree().unwrap_or(0) > 0 {
        let a = gcd(&b, &d);
        let next_b = b.div_exact(&a);
        let next_c = d.div_exact(&a);
        if a.degree().unwrap_or(0) > 0 {
            out.push((a, i));
        }
        d = &next_c - &derivative(&next_b);
        b = next_b;
        i += 1;
    }
    out
}

/// Roots of a square-free polynomial: companion eigenvalues polished by Newton.
fn simple_roots(p: &RatPoly) -> Vec<Complex64> {
    let c = p.to_f64();
    let n = c.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    let lead = c[n];
    let mut companion = DMatrix::<f64>::zeros(n, n);
    for i in 1..n {
        companion[(i, i - 1)] = 1.0;
    }
    for i in 0..n {
        companion[(i, n - 1)] = -c[i] / lead;
    }
    companion
        .complex_eigenvalues()
        .iter()
        .map(|z| polish(&c, Complex64::new(z.re, z.im)))
        .collect()
}

fn polish(c: &[f64], mut z: Complex64) -> Complex64 {
    for _ in 0..50 {
        let mut f = Complex64::new(0.0, 0.0);
        let mut df = Complex64::new(0.0, 0.0);
        for &a in c.iter().rev() {
            df = df * z + f;
            f = f * z + a;
        }
        if df.norm() == 0.0 {
            break;
        }
        let step = f / df;
        z -= step;
        if step.norm() <= 1e-16 * z.norm().max(1.0) {
            break;
        }
    }
    z
}
