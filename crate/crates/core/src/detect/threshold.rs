use crate::index::IndexSet;
use num_complex::Complex64;

/// Positions of the up to `s_cap` largest `|v| ≥ δ_+`, ascending. Equal
/// magnitudes prefer the smaller position, i.e. the lexicographically smaller
/// index when `values` follows the order of an [`IndexSet`].
pub fn select_positions(values: &[Complex64], s_cap: usize, delta_plus: f64) -> Vec<usize> {
    let mut idx: Vec<(f64, usize)> = values
        .iter()
        .enumerate()
        .map(|(i, v)| (v.norm(), i))
        .filter(|(a, _)| *a >= delta_plus)
        .collect();
    idx.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    idx.truncate(s_cap);
    let mut pos: Vec<usize> = idx.into_iter().map(|(_, i)| i).collect();
    pos.sort_unstable();
    pos
}

pub fn threshold_select(
    k_set: &IndexSet,
    values: &[Complex64],
    s_cap: usize,
    delta_plus: f64,
) -> IndexSet {
    let pos = select_positions(values, s_cap, delta_plus);
    subset(k_set, &pos)
}

/// Members at ascending positions.
pub(crate) fn subset(k_set: &IndexSet, pos: &[usize]) -> IndexSet {
    let mut data = Vec::with_capacity(pos.len() * k_set.stride());
    for &p in pos {
        data.extend_from_slice(k_set.get(p));
    }
    IndexSet::from_sorted_flat(k_set.dims().clone(), data, pos.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index::DimSubset;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn keeps_largest_above_threshold() {
        let k = IndexSet::from_members(DimSubset::single(0), (0..5).map(|v| vec![v])).unwrap();
        let vals = [c(0.5), c(0.9), c(0.4), c(0.7), c(1e-15)];
        let s = threshold_select(&k, &vals, 3, 1e-12);
        assert_eq!(s.to_vecs(), vec![vec![0], vec![1], vec![3]]);
        assert!(threshold_select(&k, &[c(1e-13); 5], 3, 1e-12).is_empty());
    }

    #[test]
    fn ties_prefer_smaller_index() {
        let k = IndexSet::from_members(DimSubset::single(0), (0..4).map(|v| vec![v])).unwrap();
        let vals = [c(0.1), c(0.5), c(0.5), c(0.5)];
        let s = threshold_select(&k, &vals, 2, 1e-12);
        assert_eq!(s.to_vecs(), vec![vec![1], vec![2]]);
    }
}
