//! Oracle split of approximated projected coefficients for functions with
//! explicit coefficient lists.

use super::CubatureRule;
use crate::bopb::{Anchor, ProductBasis};
use crate::error::{Error, Result};
use crate::index::IndexSet;
use num_complex::Complex64;

fn restrict(h: &[i64], dims: &[usize]) -> Vec<i64> {
    dims.iter().map(|&j| h[j]).collect()
}

/// `Σ_{h ∈ J, h_u = k} c_h Φ_{u^c, h_{u^c}}(x̃)` for each `k ∈ K`.
///
/// The split into this term plus [`projection_error_term`] reproduces the
/// approximated coefficients when the rule is exact on `K` and every
/// `h ∈ J` has `h_u ∈ K`.
pub fn retained_term(
    coeffs: &[(Vec<i64>, Complex64)],
    basis: &ProductBasis,
    k_set: &IndexSet,
    j_set: &IndexSet,
    anchor: &Anchor,
) -> Vec<Complex64> {
    let u = k_set.dims().dims();
    let uc = anchor.dims.dims();
    let mut out = vec![Complex64::new(0.0, 0.0); k_set.len()];
    for (h, c) in coeffs {
        if !j_set.contains(h) {
            continue;
        }
        if let Some(i) = k_set.position(&restrict(h, u)) {
            out[i] += c * basis.eval_unchecked(uc, &restrict(h, uc), &anchor.values);
        }
    }
    out
}

/// The projection error term
/// `Ψ_k = Σ_{h ∉ J} c_h Φ_{u^c,h_{u^c}}(x̃) Σ_j w_j Φ_{u,h_u}(ξ_j) conj(Φ_{u,k}(ξ_j))`.
pub fn projection_error_term(
    coeffs: &[(Vec<i64>, Complex64)],
    rule: &CubatureRule,
    basis: &ProductBasis,
    k_set: &IndexSet,
    j_set: &IndexSet,
    anchor: &Anchor,
) -> Result<Vec<Complex64>> {
    if rule.weight(0).is_none() {
        return Err(Error::NoWeights);
    }
    let u = rule.dims().dims();
    let uc = anchor.dims.dims();
    let t = u.len();
    let m = rule.num_nodes();
    let mut nodes = vec![0.0; m * t];
    for j in 0..m {
        rule.node(j, &mut nodes[j * t..(j + 1) * t]);
    }
    let outside: Vec<(Vec<i64>, Complex64)> = coeffs
        .iter()
        .filter(|(h, _)| !j_set.contains(h))
        .map(|(h, c)| {
            (
                restrict(h, u),
                c * basis.eval_unchecked(uc, &restrict(h, uc), &anchor.values),
            )
        })
        .collect();
    let out = k_set
        .iter()
        .map(|k| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (hu, ch) in &outside {
                let mut s = Complex64::new(0.0, 0.0);
                for j in 0..m {
                    let xi = &nodes[j * t..(j + 1) * t];
                    s += rule.weight(j).unwrap()
                        * basis.eval_unchecked(u, hu, xi)
                        * basis.eval_unchecked(u, k, xi).conj();
                }
                acc += ch * s;
            }
            acc
        })
        .collect();
    Ok(out)
}
