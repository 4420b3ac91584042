use super::KnownCoefficients;
use crate::blackbox::Function;
use crate::bopb::ProductBasis;
use crate::error::{Error, Result};
use crate::index::{MultiIndex, SearchSpace};
use num_complex::Complex64;
use rand::seq::index::sample;
use rand::Rng;
use std::f64::consts::TAU;

/// Finite expansion `Σ_{k ∈ S} c_k Φ_k`.
#[derive(Clone, Debug)]
pub struct SparseFunction {
    basis: ProductBasis,
    /// Sorted by index.
    terms: Vec<(MultiIndex, Complex64)>,
}

impl SparseFunction {
    pub fn new(basis: ProductBasis, mut terms: Vec<(MultiIndex, Complex64)>) -> Result<Self> {
        let d = basis.d();
        if let Some((k, _)) = terms.iter().find(|(k, _)| k.len() != d) {
            return Err(Error::DimensionMismatch { expected: d, got: k.len() });
        }
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        if terms.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidParameter("duplicate index in expansion".into()));
        }
        Ok(SparseFunction { basis, terms })
    }

    pub fn terms(&self) -> &[(MultiIndex, Complex64)] {
        &self.terms
    }
}

impl Function for SparseFunction {
    fn dim(&self) -> usize {
        self.basis.d()
    }

    fn eval(&self, x: &[f64]) -> Complex64 {
        self.terms.iter().map(|(k, c)| c * self.basis.eval(k, x)).sum()
    }
}

impl KnownCoefficients for SparseFunction {
    fn basis(&self) -> ProductBasis {
        self.basis.clone()
    }

    fn coefficient(&self, k: &[i64]) -> Complex64 {
        self.terms
            .binary_search_by(|(h, _)| h.as_slice().cmp(k))
            .map(|i| self.terms[i].1)
            .unwrap_or_default()
    }

    fn norm_sq(&self) -> f64 {
        self.terms.iter().map(|(_, c)| c.norm_sqr()).sum()
    }

    fn coefficient_list(&self) -> Option<Vec<(MultiIndex, Complex64)>> {
        Some(self.terms.clone())
    }
}

/// `s_star` distinct indices drawn uniformly from `Γ` with magnitudes
/// log-uniform in `[lo, hi]`; phases are uniform for complex bases and signs
/// random for real ones.
pub fn sparse_random_function<R: Rng + ?Sized>(
    basis: &ProductBasis,
    space: &SearchSpace,
    s_star: usize,
    (lo, hi): (f64, f64),
    limit: u64,
    rng: &mut R,
) -> Result<SparseFunction> {
    if !(lo > 0.0 && hi >= lo) {
        return Err(Error::InvalidParameter("magnitude range must satisfy 0 < lo ≤ hi".into()));
    }
    let all = space.enumerate(limit)?;
    if s_star > all.len() {
        return Err(Error::InvalidParameter(format!(
            "s_star = {s_star} exceeds |Γ| = {}",
            all.len()
        )));
    }
    let mut pos = sample(rng, all.len(), s_star).into_vec();
    pos.sort_unstable();
    let real = basis.is_real();
    let terms = pos
        .into_iter()
        .map(|p| {
            let mag = (lo.ln() + rng.gen::<f64>() * (hi.ln() - lo.ln())).exp();
            let c = if real {
                Complex64::new(if rng.gen::<bool>() { mag } else { -mag }, 0.0)
            } else {
                Complex64::from_polar(mag, TAU * rng.gen::<f64>())
            };
            (all.get(p).to_vec(), c)
        })
        .collect();
    SparseFunction::new(basis.clone(), terms)
}
