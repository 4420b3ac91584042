//! Test functions with exactly known expansion coefficients.

mod bspline;
mod chebyshev;
mod oracle;
mod periodic;
mod sparse;

pub use bspline::{bspline_fourier_coefficient, bspline_norm_constant, cardinal_bspline, PeriodicBSpline};
pub use chebyshev::{cheb_analytic, ChebyshevTestFunction, InverseLinear};
pub use oracle::{best_s_term_oracle, OracleResult};
pub use periodic::{periodic10d, BlockSplineFunction};
pub use sparse::{sparse_random_function, SparseFunction};

use crate::blackbox::Function;
use crate::bopb::ProductBasis;
use crate::index::MultiIndex;
use num_complex::Complex64;

/// A function whose basis coefficients and norm are known in closed form.
pub trait KnownCoefficients: Function {
    fn basis(&self) -> ProductBasis;
    fn coefficient(&self, k: &[i64]) -> Complex64;
    /// `‖f‖²_{L_2(μ)}`.
    fn norm_sq(&self) -> f64;
    /// All nonzero coefficients, when finitely many.
    fn coefficient_list(&self) -> Option<Vec<(MultiIndex, Complex64)>> {
        None
    }
}

impl<T: KnownCoefficients + ?Sized> KnownCoefficients for std::sync::Arc<T> {
    fn basis(&self) -> ProductBasis {
        (**self).basis()
    }
    fn coefficient(&self, k: &[i64]) -> Complex64 {
        (**self).coefficient(k)
    }
    fn norm_sq(&self) -> f64 {
        (**self).norm_sq()
    }
    fn coefficient_list(&self) -> Option<Vec<(MultiIndex, Complex64)>> {
        (**self).coefficient_list()
    }
}
