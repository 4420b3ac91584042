use super::CubatureRule;
use crate::bopb::ProductBasis;
use crate::error::{Error, Result};
use crate::index::IndexSet;
use crate::par;
use num_complex::Complex64;

pub const EXACTNESS_GUARD: usize = 2000;

/// `max_{k1,k2 ∈ K} |Σ_j w_j Φ_{k1}(ξ_j) conj(Φ_{k2}(ξ_j)) − δ_{k1,k2}|` by
/// direct summation.
pub fn exactness_check(rule: &CubatureRule, k_set: &IndexSet, basis: &ProductBasis) -> Result<f64> {
    let n = k_set.len();
    if n > EXACTNESS_GUARD {
        return Err(Error::ExactnessGuard {
            size: n,
            limit: EXACTNESS_GUARD,
        });
    }
    if rule.weight(0).is_none() {
        return Err(Error::NoWeights);
    }
    let dims = rule.dims().dims();
    let t = dims.len();
    let m = rule.num_nodes();
    // V[j][a] = Φ_{k_a}(ξ_j), w[j]
    let rows: Vec<(Complex64, Vec<Complex64>)> = par::map_range(m, |j| {
        let mut xi = vec![0.0; t];
        rule.node(j, &mut xi);
        let v = k_set.iter().map(|k| basis.eval_unchecked(dims, k, &xi)).collect();
        (rule.weight(j).unwrap(), v)
    });
    let dev = par::map_range(n, |a| {
        let mut g = vec![Complex64::new(0.0, 0.0); n];
        for (w, v) in &rows {
            let wa = w * v[a];
            for (gb, vb) in g.iter_mut().zip(v) {
                *gb += wa * vb.conj();
            }
        }
        g.iter()
            .enumerate()
            .map(|(b, z)| (z - if a == b { 1.0 } else { 0.0 }).norm())
            .fold(0.0, f64::max)
    });
    Ok(dev.into_iter().fold(0.0, f64::max))
}
