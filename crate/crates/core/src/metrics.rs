//! Approximation and coefficient errors against known expansions.

use crate::error::{Error, Result};
use crate::index::IndexSet;
use crate::testfuncs::KnownCoefficients;
use num_complex::Complex64;

/// Radicand below `-RADICAND_WARN · ‖f‖²` is flagged rather than silently clamped.
const RADICAND_WARN: f64 = 1e-10;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ErrorReport {
    pub rel_l2: f64,
    pub coeff_err_l1: f64,
    pub coeff_err_l2: f64,
    pub coeff_err_linf: f64,
    pub samples: u64,
    pub seconds: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RelativeL2 {
    pub value: f64,
    /// The radicand `‖f‖² − Σ_I |c_k|²` was more negative than rounding explains.
    pub radicand_warning: bool,
}

/// `√(‖f‖² − Σ_{k∈I} |c_k|²) / ‖f‖`, radicand clamped at zero.
pub fn relative_l2_error_detailed<F: KnownCoefficients + ?Sized>(f: &F, i: &IndexSet) -> Result<RelativeL2> {
    let n2 = f.norm_sq();
    if !(n2 > 0.0) {
        return Err(Error::InvalidParameter("function has zero norm".into()));
    }
    let kept: f64 = i.iter().map(|k| f.coefficient(k).norm_sqr()).sum();
    let rad = n2 - kept;
    Ok(RelativeL2 {
        value: rad.max(0.0).sqrt() / n2.sqrt(),
        radicand_warning: rad < -RADICAND_WARN * n2,
    })
}

pub fn relative_l2_error<F: KnownCoefficients + ?Sized>(f: &F, i: &IndexSet) -> Result<f64> {
    relative_l2_error_detailed(f, i).map(|r| r.value)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Norm {
    L1,
    L2,
    Linf,
}

/// `‖f̂ − c‖_{ℓ_p(I)}` with `coeffs` aligned to `i`.
pub fn coefficient_error<F: KnownCoefficients + ?Sized>(
    f: &F,
    i: &IndexSet,
    coeffs: &[Complex64],
    p: Norm,
) -> Result<f64> {
    if coeffs.len() != i.len() {
        return Err(Error::DimensionMismatch {
            expected: i.len(),
            got: coeffs.len(),
        });
    }
    let diffs = i.iter().zip(coeffs).map(|(k, c)| (c - f.coefficient(k)).norm());
    Ok(match p {
        Norm::L1 => diffs.sum(),
        Norm::L2 => diffs.map(|x| x * x).sum::<f64>().sqrt(),
        Norm::Linf => diffs.fold(0.0, f64::max),
    })
}

/// All error measures for a detected set and its coefficients.
pub fn error_report<F: KnownCoefficients + ?Sized>(
    f: &F,
    i: &IndexSet,
    coeffs: &[Complex64],
    samples: u64,
    seconds: f64,
) -> Result<ErrorReport> {
    Ok(ErrorReport {
        rel_l2: relative_l2_error(f, i)?,
        coeff_err_l1: coefficient_error(f, i, coeffs, Norm::L1)?,
        coeff_err_l2: coefficient_error(f, i, coeffs, Norm::L2)?,
        coeff_err_linf: coefficient_error(f, i, coeffs, Norm::Linf)?,
        samples,
        seconds,
    })
}
