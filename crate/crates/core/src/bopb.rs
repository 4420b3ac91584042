//! One-dimensional orthonormal bases and their tensor products.

use crate::error::{Error, Result};
use crate::index::DimSubset;
use num_complex::Complex64;
use rand::{Rng, RngCore};
use std::f64::consts::{PI, SQRT_2, TAU};
use std::fmt;
use std::sync::Arc;

/// An orthonormal system `{φ_k}` on an interval with probability measure `μ`.
///
/// A new basis only needs these methods; the detection code is generic.
pub trait Basis1D: Send + Sync + fmt::Debug {
    fn name(&self) -> &'static str;
    fn eval(&self, k: i64, x: f64) -> Complex64;
    /// `sup_k ‖φ_k‖_∞`.
    fn bound(&self) -> f64;
    /// One draw from `μ`.
    fn sample(&self, rng: &mut dyn RngCore) -> f64;
    fn domain(&self) -> (f64, f64);
    /// Whether negative frequencies exist.
    fn signed(&self) -> bool;
    fn real_valued(&self) -> bool;
    /// `φ_0 ≡ 1`, which lets products skip zero entries.
    fn unit_at_zero(&self) -> bool {
        false
    }
    /// `φ_k(x) = exp(2πikx)`, which enables lattice FFT evaluation.
    fn is_fourier(&self) -> bool {
        false
    }
}

/// `exp(2πikx)` on `[0,1)` with Lebesgue measure.
#[derive(Clone, Copy, Debug, Default)]
pub struct Fourier;

impl Basis1D for Fourier {
    fn name(&self) -> &'static str {
        "fourier"
    }

    fn eval(&self, k: i64, x: f64) -> Complex64 {
        if k == 0 {
            return Complex64::new(1.0, 0.0);
        }
        // Reduce the phase before scaling by 2π to keep large k accurate.
        let t = (k as f64 * x).rem_euclid(1.0);
        Complex64::cis(TAU * t)
    }

    fn bound(&self) -> f64 {
        1.0
    }

    fn sample(&self, rng: &mut dyn RngCore) -> f64 {
        rng.gen::<f64>()
    }

    fn domain(&self) -> (f64, f64) {
        (0.0, 1.0)
    }

    fn signed(&self) -> bool {
        true
    }

    fn real_valued(&self) -> bool {
        false
    }

    fn unit_at_zero(&self) -> bool {
        true
    }

    fn is_fourier(&self) -> bool {
        true
    }
}

/// Orthonormal Chebyshev polynomials on `[-1,1]` under the arcsine measure:
/// `φ_0 = 1`, `φ_k = √2 T_k`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Chebyshev;

impl Chebyshev {
    pub fn real(k: i64, x: f64) -> f64 {
        assert!(k >= 0, "Chebyshev frequencies are nonnegative");
        if k == 0 {
            1.0
        } else {
            SQRT_2 * (k as f64 * x.clamp(-1.0, 1.0).acos()).cos()
        }
    }
}

impl Basis1D for Chebyshev {
    fn name(&self) -> &'static str {
        "chebyshev"
    }

    fn eval(&self, k: i64, x: f64) -> Complex64 {
        Complex64::new(Chebyshev::real(k, x), 0.0)
    }

    fn bound(&self) -> f64 {
        SQRT_2
    }

    fn sample(&self, rng: &mut dyn RngCore) -> f64 {
        (PI * rng.gen::<f64>()).cos()
    }

    fn domain(&self) -> (f64, f64) {
        (-1.0, 1.0)
    }

    fn signed(&self) -> bool {
        false
    }

    fn real_valued(&self) -> bool {
        true
    }

    fn unit_at_zero(&self) -> bool {
        true
    }
}

/// `Φ_k(x) = ∏_j φ_{j,k_j}(x_j)`.
#[derive(Clone, Debug)]
pub struct ProductBasis {
    factors: Vec<Arc<dyn Basis1D>>,
}

impl ProductBasis {
    pub fn new(factors: Vec<Arc<dyn Basis1D>>) -> Self {
        ProductBasis { factors }
    }

    pub fn uniform(b: Arc<dyn Basis1D>, d: usize) -> Self {
        ProductBasis {
            factors: vec![b; d],
        }
    }

    pub fn fourier(d: usize) -> Self {
        Self::uniform(Arc::new(Fourier), d)
    }

    pub fn chebyshev(d: usize) -> Self {
        Self::uniform(Arc::new(Chebyshev), d)
    }

    pub fn d(&self) -> usize {
        self.factors.len()
    }

    pub fn factor(&self, j: usize) -> &dyn Basis1D {
        self.factors[j].as_ref()
    }

    pub fn bound(&self) -> f64 {
        self.factors.iter().map(|b| b.bound()).product()
    }

    pub fn bound_on(&self, u: &DimSubset) -> f64 {
        u.dims().iter().map(|&j| self.factors[j].bound()).product()
    }

    pub fn is_fourier_on(&self, u: &DimSubset) -> bool {
        u.dims().iter().all(|&j| self.factors[j].is_fourier())
    }

    pub fn is_signed(&self) -> bool {
        self.factors.iter().all(|b| b.signed())
    }

    pub fn is_real(&self) -> bool {
        self.factors.iter().all(|b| b.real_valued())
    }

    /// `Φ_{u,k}(ξ)` with argument checks.
    pub fn eval_on(&self, u: &DimSubset, k: &[i64], xi: &[f64]) -> Result<Complex64> {
        if k.len() != u.len() || xi.len() != u.len() {
            return Err(Error::DimensionMismatch {
                expected: u.len(),
                got: if k.len() != u.len() { k.len() } else { xi.len() },
            });
        }
        if let Some(&j) = u.dims().iter().find(|&&j| j >= self.d()) {
            return Err(Error::InvalidParameter(format!("dimension {} out of range", j + 1)));
        }
        for (&j, &kj) in u.dims().iter().zip(k) {
            if kj < 0 && !self.factors[j].signed() {
                return Err(Error::InvalidParameter(format!(
                    "negative frequency for {} basis",
                    self.factors[j].name()
                )));
            }
        }
        Ok(self.eval_unchecked(u.dims(), k, xi))
    }

    pub(crate) fn eval_unchecked(&self, dims: &[usize], k: &[i64], xi: &[f64]) -> Complex64 {
        let mut p = Complex64::new(1.0, 0.0);
        for ((&j, &kj), &x) in dims.iter().zip(k).zip(xi) {
            if kj != 0 || !self.factors[j].unit_at_zero() {
                p *= self.factors[j].eval(kj, x);
            }
        }
        p
    }

    /// `Φ_k(x)` on all dimensions.
    pub fn eval(&self, k: &[i64], x: &[f64]) -> Complex64 {
        let mut p = Complex64::new(1.0, 0.0);
        for (j, (&kj, &xj)) in k.iter().zip(x).enumerate() {
            if kj != 0 || !self.factors[j].unit_at_zero() {
                p *= self.factors[j].eval(kj, xj);
            }
        }
        p
    }

    /// `count` points on `u`, row-major, each coordinate drawn from its `μ_j`.
    pub fn draw_points(&self, u: &DimSubset, count: usize, rng: &mut dyn RngCore) -> Vec<f64> {
        let mut out = Vec::with_capacity(count * u.len());
        for _ in 0..count {
            for &j in u.dims() {
                out.push(self.factors[j].sample(rng));
            }
        }
        out
    }
}

/// Fixed values for the dimensions outside the active subset.
#[derive(Clone, Debug, PartialEq)]
pub struct Anchor {
    pub dims: DimSubset,
    pub values: Vec<f64>,
}

pub fn draw_anchor(basis: &ProductBasis, uc: &DimSubset, rng: &mut dyn RngCore) -> Anchor {
    Anchor {
        dims: uc.clone(),
        values: basis.draw_points(uc, 1, rng),
    }
}
