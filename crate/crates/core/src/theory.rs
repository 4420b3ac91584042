//! Probabilistic bounds for detection, as computable diagnostics.

use crate::error::{Error, Result};

fn invalid<T>(msg: &str) -> Result<T> {
    Err(Error::InvalidParameter(msg.into()))
}

/// Number of detection iterations `r` sufficient for failure probability `ε`:
///
/// `⌈(1 + 3/2 B² |I_3δ| + B³ C/(2δ) · tail) · (ln 3 + ln d + ln |I_3δ| − ln ε)⌉`
///
/// where `tail = Σ_{h ∉ I_3δ} |c_h|`.
pub fn detection_iterations_bound(
    b: f64,
    c: f64,
    i3d_size: usize,
    delta: f64,
    tail_sum: f64,
    d: usize,
    epsilon: f64,
) -> Result<u64> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return invalid("epsilon must lie in (0,1)");
    }
    if !(delta > 0.0) || !(tail_sum >= 0.0) || i3d_size == 0 || !(b >= 1.0) || !(c > 0.0) || d == 0 {
        return invalid("require delta > 0, tail ≥ 0, |I_3δ| ≥ 1, B ≥ 1, C > 0, d ≥ 1");
    }
    let n = i3d_size as f64;
    let factor = 1.0 + 1.5 * b * b * n + b.powi(3) * c / (2.0 * delta) * tail_sum;
    let logs = 3f64.ln() + (d as f64).ln() + n.ln() - epsilon.ln();
    Ok((factor * logs).ceil() as u64)
}

/// Inputs of the per-index failure bound.
#[derive(Clone, Debug)]
pub struct QInput<'a> {
    pub b: f64,
    /// `|c_h|` for the indices projecting onto the target.
    pub c_slice: &'a [f64],
    pub delta_psi: f64,
    pub delta_plus: f64,
    pub c_q: f64,
    pub tail_sum: f64,
}

/// `q = 1 − (B⁻¹ max|c| − δ_Ψ − δ_+) / (B Σ|c| + B² C_Q tail)`.
pub fn q_value(inp: &QInput<'_>) -> Result<f64> {
    let max = inp.c_slice.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let sum: f64 = inp.c_slice.iter().map(|c| c.abs()).sum();
    if !(inp.b * (inp.delta_plus + inp.delta_psi) < max) {
        return invalid("requires B(δ_+ + δ_Ψ) < max |c|");
    }
    let num = max / inp.b - inp.delta_psi - inp.delta_plus;
    let den = inp.b * sum + inp.b * inp.b * inp.c_q * inp.tail_sum;
    Ok(1.0 - num / den)
}

/// Union bound `|I_δ| · q^r` on missing some index after `r` iterations.
pub fn union_failure_bound(i_delta_size: usize, q: f64, r: u32) -> f64 {
    i_delta_size as f64 * q.powi(r as i32)
}

/// Bound on `P(|(g+Ψ)(X)| < δ_+)` for `g = Σ ĝ_h Φ_h`:
/// `1 − (B⁻¹ max|ĝ| − δ_Ψ − δ_+) / (B Σ|ĝ| + ‖Ψ‖_∞)`.
pub fn small_value_probability_bound(
    b: f64,
    g_abs: &[f64],
    delta_psi: f64,
    delta_plus: f64,
    psi_sup: f64,
) -> Result<f64> {
    let max = g_abs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let sum: f64 = g_abs.iter().map(|c| c.abs()).sum();
    if !(b * (delta_plus + delta_psi) < max) {
        return invalid("requires B(δ_+ + δ_Ψ) < max |ĝ|");
    }
    Ok(1.0 - (max / b - delta_psi - delta_plus) / (b * sum + psi_sup))
}

/// `1 − (1 − δ_Ψ/δ_+)^r`.
pub fn false_positive_bound(delta_psi: f64, delta_plus: f64, r: u32) -> Result<f64> {
    if !(delta_plus > 0.0) || !(delta_psi >= 0.0) || delta_psi >= delta_plus {
        return invalid("requires 0 ≤ δ_Ψ < δ_+");
    }
    Ok(1.0 - (1.0 - delta_psi / delta_plus).powi(r as i32))
}
