use super::KnownCoefficients;
use crate::blackbox::Function;
use crate::bopb::ProductBasis;
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::SQRT_2;

/// `1/(a − x)` on `[-1,1]` with orthonormal Chebyshev coefficients
/// `c_0 = 1/√(a²−1)`, `c_k = √2 ρ^k/√(a²−1)`, `ρ = a − √(a²−1)`.
#[derive(Clone, Copy, Debug)]
pub struct InverseLinear {
    pub a: f64,
    rho: f64,
    root: f64,
}

impl InverseLinear {
    pub fn new(a: f64) -> Result<Self> {
        if !(a > 1.0 && a.is_finite()) {
            return Err(Error::InvalidParameter(format!("pole a = {a} must exceed 1")));
        }
        let root = (a * a - 1.0).sqrt();
        Ok(InverseLinear { a, rho: a - root, root })
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn eval(&self, x: f64) -> f64 {
        1.0 / (self.a - x)
    }

    pub fn coefficient(&self, k: i64) -> f64 {
        match k {
            0 => 1.0 / self.root,
            k if k > 0 => SQRT_2 * self.rho.powi(k as i32) / self.root,
            _ => 0.0,
        }
    }

    /// `‖1/(a−x)‖² = (1+ρ²) / ((1−ρ²)(a²−1))`.
    pub fn norm_sq(&self) -> f64 {
        let r2 = self.rho * self.rho;
        (1.0 + r2) / ((1.0 - r2) * self.root * self.root)
    }
}

/// `f(x) = Σ_b ∏_{j ∈ b} 1/(a_b − x_j)` over disjoint dimension blocks.
#[derive(Clone, Debug)]
pub struct ChebyshevTestFunction {
    d: usize,
    blocks: Vec<(Vec<usize>, InverseLinear)>,
}

impl ChebyshevTestFunction {
    pub fn new(d: usize, blocks: Vec<(Vec<usize>, f64)>) -> Result<Self> {
        let mut seen = vec![false; d];
        let mut out = Vec::new();
        for (dims, a) in blocks {
            for &j in &dims {
                if j >= d || seen[j] {
                    return Err(Error::InvalidParameter("blocks must be disjoint and within d".into()));
                }
                seen[j] = true;
            }
            out.push((dims, InverseLinear::new(a)?));
        }
        Ok(ChebyshevTestFunction { d, blocks: out })
    }

    fn block_mean(&self, b: usize) -> f64 {
        let (dims, g) = &self.blocks[b];
        g.coefficient(0).powi(dims.len() as i32)
    }
}

/// Default 9-dimensional instance: poles 1.5 on `{1,3,4,7}` and 2 on
/// `{2,5,6,8,9}`.
pub fn cheb_analytic() -> ChebyshevTestFunction {
    let zero = |v: &[usize]| v.iter().map(|j| j - 1).collect::<Vec<_>>();
    ChebyshevTestFunction::new(9, vec![(zero(&[1, 3, 4, 7]), 1.5), (zero(&[2, 5, 6, 8, 9]), 2.0)])
        .expect("valid blocks")
}

impl Function for ChebyshevTestFunction {
    fn dim(&self) -> usize {
        self.d
    }

    fn eval(&self, x: &[f64]) -> Complex64 {
        let v: f64 = self
            .blocks
            .iter()
            .map(|(dims, g)| dims.iter().map(|&j| g.eval(x[j])).product::<f64>())
            .sum();
        Complex64::new(v, 0.0)
    }
}

impl KnownCoefficients for ChebyshevTestFunction {
    fn basis(&self) -> ProductBasis {
        ProductBasis::chebyshev(self.d)
    }

    fn coefficient(&self, k: &[i64]) -> Complex64 {
        let mut c = 0.0;
        for (dims, g) in &self.blocks {
            if k.iter().enumerate().all(|(j, &v)| v == 0 || dims.contains(&j)) {
                c += dims.iter().map(|&j| g.coefficient(k[j])).product::<f64>();
            }
        }
        Complex64::new(c, 0.0)
    }

    fn norm_sq(&self) -> f64 {
        let nb = self.blocks.len();
        let mut s: f64 = self
            .blocks
            .iter()
            .map(|(dims, g)| g.norm_sq().powi(dims.len() as i32))
            .sum();
        for a in 0..nb {
            for b in a + 1..nb {
                s += 2.0 * self.block_mean(a) * self.block_mean(b);
            }
        }
        s
    }
}
