use super::KnownCoefficients;
use crate::detect::select_positions;
use crate::error::{Error, Result};
use crate::index::{IndexSet, SearchSpace};
use crate::par;

#[derive(Clone, Debug)]
pub struct OracleResult {
    pub index_set: IndexSet,
    /// Relative `L_2` error of the best `s`-term truncation within `Γ`.
    pub residual: f64,
}

/// The `s` largest `|c_k|` over `k ∈ Γ` (ties to the lexicographically smaller
/// index) and the resulting relative `L_2` error.
pub fn best_s_term_oracle<F: KnownCoefficients + ?Sized>(
    f: &F,
    space: &SearchSpace,
    s: usize,
    limit: u64,
) -> Result<OracleResult> {
    let norm_sq = f.norm_sq();
    if !(norm_sq > 0.0) {
        return Err(Error::InvalidParameter("function has zero norm".into()));
    }
    let all = space.enumerate(limit)?;
    let coeffs = par::map_range(all.len(), |i| f.coefficient(all.get(i)));
    let pos = select_positions(&coeffs, s, f64::MIN_POSITIVE);
    let kept: f64 = pos.iter().map(|&p| coeffs[p].norm_sqr()).sum();
    let mut data = Vec::with_capacity(pos.len() * all.stride());
    for &p in &pos {
        data.extend_from_slice(all.get(p));
    }
    let index_set = IndexSet::from_sorted_flat(all.dims().clone(), data, pos.len());
    Ok(OracleResult {
        index_set,
        residual: (norm_sq - kept).max(0.0).sqrt() / norm_sq.sqrt(),
    })
}
