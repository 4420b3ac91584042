use super::CubatureRule;
use crate::bopb::ProductBasis;
use crate::index::{nnz, IndexSet};
use crate::rng::StreamRng;

/// `max(⌈m ln m⌉, |K|)` with `m = |K|`, or `m = Σ_k 2^{‖k‖₀}` when `weighted`.
pub fn mc_node_count(k_set: &IndexSet, weighted: bool) -> usize {
    let m: f64 = if weighted {
        k_set.iter().map(|k| 2f64.powi(nnz(k) as i32)).sum()
    } else {
        k_set.len() as f64
    };
    let count = if m > 1.0 { (m * m.ln()).ceil() as usize } else { 0 };
    count.max(k_set.len())
}

/// Random nodes drawn from the product measure, for least squares.
pub fn mc_rule(
    k_set: &IndexSet,
    basis: &ProductBasis,
    weighted: bool,
    rng: &mut StreamRng,
) -> CubatureRule {
    let m = mc_node_count(k_set, weighted);
    let nodes = basis.draw_points(k_set.dims(), m, rng);
    CubatureRule::least_squares(k_set.dims().clone(), nodes)
}
