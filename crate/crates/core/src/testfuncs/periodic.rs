use super::bspline::PeriodicBSpline;
use super::KnownCoefficients;
use crate::blackbox::Function;
use crate::bopb::ProductBasis;
use crate::error::{Error, Result};
use num_complex::Complex64;

/// `f(x) = Σ_b ∏_{j ∈ b} N_{m_b}(x_j)` over disjoint dimension blocks.
#[derive(Clone, Debug)]
pub struct BlockSplineFunction {
    d: usize,
    blocks: Vec<(Vec<usize>, PeriodicBSpline)>,
}

impl BlockSplineFunction {
    /// `blocks` lists 0-based dimensions and a spline order per block.
    pub fn new(d: usize, blocks: Vec<(Vec<usize>, usize)>) -> Result<Self> {
        let mut seen = vec![false; d];
        for (dims, m) in &blocks {
            if *m < 1 || *m > 16 {
                return Err(Error::InvalidParameter(format!("spline order {m}")));
            }
            for &j in dims {
                if j >= d || seen[j] {
                    return Err(Error::InvalidParameter("blocks must be disjoint and within d".into()));
                }
                seen[j] = true;
            }
        }
        Ok(BlockSplineFunction {
            d,
            blocks: blocks
                .into_iter()
                .map(|(dims, m)| (dims, PeriodicBSpline::new(m)))
                .collect(),
        })
    }

    fn block_mean(&self, b: usize) -> f64 {
        let (dims, n) = &self.blocks[b];
        n.coefficient(0).powi(dims.len() as i32)
    }
}

/// The 10-dimensional test function
/// `N_2(x_1)N_2(x_3)N_2(x_8) + N_4(x_2)N_4(x_5)N_4(x_6)N_4(x_10) + N_6(x_4)N_6(x_7)N_6(x_9)`.
pub fn periodic10d() -> BlockSplineFunction {
    let one = |v: &[usize]| v.iter().map(|j| j - 1).collect::<Vec<_>>();
    BlockSplineFunction::new(
        10,
        vec![
            (one(&[1, 3, 8]), 2),
            (one(&[2, 5, 6, 10]), 4),
            (one(&[4, 7, 9]), 6),
        ],
    )
    .expect("valid blocks")
}

impl Function for BlockSplineFunction {
    fn dim(&self) -> usize {
        self.d
    }

    fn eval(&self, x: &[f64]) -> Complex64 {
        let v: f64 = self
            .blocks
            .iter()
            .map(|(dims, n)| dims.iter().map(|&j| n.eval(x[j])).product::<f64>())
            .sum();
        Complex64::new(v, 0.0)
    }
}

impl KnownCoefficients for BlockSplineFunction {
    fn basis(&self) -> ProductBasis {
        ProductBasis::fourier(self.d)
    }

    fn coefficient(&self, k: &[i64]) -> Complex64 {
        let mut c = 0.0;
        for (dims, n) in &self.blocks {
            let outside_zero = k
                .iter()
                .enumerate()
                .all(|(j, &v)| v == 0 || dims.contains(&j));
            if outside_zero {
                c += dims.iter().map(|&j| n.coefficient(k[j])).product::<f64>();
            }
        }
        Complex64::new(c, 0.0)
    }

    /// Each block has unit norm; disjoint blocks are orthogonal up to their
    /// means, so `‖f‖² = B + 2 Σ_{b<b'} mean_b mean_b'`.
    fn norm_sq(&self) -> f64 {
        let nb = self.blocks.len();
        let mut s = nb as f64;
        for a in 0..nb {
            for b in a + 1..nb {
                s += 2.0 * self.block_mean(a) * self.block_mean(b);
            }
        }
        s
    }
}
