use super::{DimSubset, IndexSet, MultiIndex, SearchSpace};
use crate::error::{Error, Result};

/// Interleaves `k` on `u` and `h` on `v` into an index on `u ∪ v`.
pub fn splice(u: &DimSubset, k: &[i64], v: &DimSubset, h: &[i64]) -> Result<(DimSubset, MultiIndex)> {
    if k.len() != u.len() {
        return Err(Error::DimensionMismatch {
            expected: u.len(),
            got: k.len(),
        });
    }
    if h.len() != v.len() {
        return Err(Error::DimensionMismatch {
            expected: v.len(),
            got: h.len(),
        });
    }
    if !u.is_disjoint(v) {
        return Err(Error::InvalidParameter(format!("{u} and {v} overlap")));
    }
    let w = u.union(v);
    let mut out = vec![0i64; w.len()];
    let mut it_u = u.dims().iter().zip(k).peekable();
    let mut it_v = v.dims().iter().zip(h).peekable();
    for o in out.iter_mut() {
        let take_u = match (it_u.peek(), it_v.peek()) {
            (Some((a, _)), Some((b, _))) => a < b,
            (Some(_), None) => true,
            _ => false,
        };
        *o = if take_u {
            *it_u.next().unwrap().1
        } else {
            *it_v.next().unwrap().1
        };
    }
    Ok((w, out))
}

/// `(k, h)_u` for `h` on the complement of `u` in `{0, …, d-1}`.
pub fn splice_full(d: usize, u: &DimSubset, k: &[i64], h: &[i64]) -> Result<MultiIndex> {
    let uc = u.complement(d);
    if u.dims().iter().any(|&j| j >= d) {
        return Err(Error::InvalidParameter(format!("{u} exceeds d = {d}")));
    }
    Ok(splice(u, k, &uc, h)?.1)
}

/// `(A × B) ∩ P_{u∪v}(Γ)` for `A` on `u` and `B` on `v`, in lexicographic order.
pub fn candidate_set(a: &IndexSet, b: &IndexSet, space: &SearchSpace) -> Result<IndexSet> {
    let (u, v) = (a.dims(), b.dims());
    if !u.is_disjoint(v) {
        return Err(Error::InvalidParameter(format!("{u} and {v} overlap")));
    }
    let w = u.union(v);
    let proj = space.project(&w)?;
    let pu = w.positions_of(u)?;
    let pv = w.positions_of(v)?;
    let t = w.len();
    let mut cur = vec![0i64; t];
    let mut data = Vec::new();
    for ka in a.iter() {
        for (p, &x) in pu.iter().zip(ka) {
            cur[*p] = x;
        }
        for kb in b.iter() {
            for (p, &x) in pv.iter().zip(kb) {
                cur[*p] = x;
            }
            if proj.contains(&cur) {
                data.extend_from_slice(&cur);
            }
        }
    }
    Ok(IndexSet::from_flat(w, data))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set1(j: usize, vals: &[i64]) -> IndexSet {
        IndexSet::from_members(DimSubset::single(j), vals.iter().map(|&v| vec![v])).unwrap()
    }

    #[test]
    fn grid_product_is_full() {
        let g = SearchSpace::full_grid(3, 4.0).unwrap();
        let k = candidate_set(&set1(0, &[0, 2, 3]), &set1(1, &[0, 1, 3, 4]), &g).unwrap();
        assert_eq!(k.len(), 12);
    }

    #[test]
    fn three_dim_product() {
        let g = SearchSpace::full_grid(3, 4.0).unwrap();
        let prev = IndexSet::from_members(
            DimSubset::full(2),
            vec![vec![0, 0], vec![2, 0], vec![2, 1], vec![2, 3], vec![3, 3], vec![0, 4]],
        )
        .unwrap();
        let k = candidate_set(&prev, &set1(2, &[1, 3]), &g).unwrap();
        assert_eq!(k.len(), 12);
        assert_eq!(k.dims(), &DimSubset::full(3));
    }

    #[test]
    fn hyperbolic_filter_drops_pair() {
        let h = SearchSpace::hyperbolic_cross(2, 4.0, vec![1.0]).unwrap();
        let k = candidate_set(&set1(0, &[0, 3]), &set1(1, &[0, 3]), &h).unwrap();
        assert!(!k.contains(&[3, 3]));
        assert_eq!(k.len(), 3);
    }

    #[test]
    fn interleaved_merge() {
        let g = SearchSpace::full_grid(4, 4.0).unwrap();
        let a = IndexSet::from_members(DimSubset::new(vec![0, 2]).unwrap(), vec![vec![1, 2]]).unwrap();
        let b = IndexSet::from_members(DimSubset::new(vec![1, 3]).unwrap(), vec![vec![3, 4]]).unwrap();
        let k = candidate_set(&a, &b, &g).unwrap();
        assert_eq!(k.get(0), &[1, 3, 2, 4]);
    }

    #[test]
    fn splice_examples() {
        let u = DimSubset::new(vec![0, 2]).unwrap();
        assert_eq!(splice_full(3, &u, &[5, 7], &[2]).unwrap(), vec![5, 2, 7]);
        let all = DimSubset::full(3);
        assert_eq!(splice_full(3, &all, &[1, 2, 3], &[]).unwrap(), vec![1, 2, 3]);
        assert!(splice(&u, &[1, 2], &u, &[1, 2]).is_err());
    }
}
