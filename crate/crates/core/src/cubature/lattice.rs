//! Reconstructing rank-1 lattices by a component-by-component search.

use crate::error::{Error, Result};
use crate::index::IndexSet;
use crate::rng::stream;
use rand::Rng;
use std::collections::HashSet;

pub const DEFAULT_M_CAP: u64 = 100_000_000;

/// Candidate generators tried per component before `M` grows.
const TRIALS: usize = 48;
const GROWTH: f64 = 1.1;

/// Nodes `ξ_j = (j z mod M) / M`, `j = 0..M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rank1Lattice {
    pub z: Vec<u64>,
    pub m: u64,
}

impl Rank1Lattice {
    pub fn node(&self, j: u64, out: &mut [f64]) {
        let m = self.m as u128;
        for (o, &zc) in out.iter_mut().zip(&self.z) {
            *o = ((j as u128 * zc as u128) % m) as f64 / self.m as f64;
        }
    }

    /// `k·z mod M`.
    pub fn bin(&self, k: &[i64]) -> u64 {
        let m = self.m as i128;
        let s: i128 = k
            .iter()
            .zip(&self.z)
            .map(|(&kc, &zc)| (kc as i128 * zc as i128).rem_euclid(m))
            .sum();
        s.rem_euclid(m) as u64
    }

    /// Whether `k ↦ k·z mod M` is injective on `k_set`.
    pub fn reconstructs(&self, k_set: &IndexSet) -> bool {
        let mut bins: Vec<u64> = k_set.iter().map(|k| self.bin(k)).collect();
        bins.sort_unstable();
        bins.windows(2).all(|w| w[0] != w[1])
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut i = 41u64;
    while i * i <= n {
        if n % i == 0 {
            return false;
        }
        i += 2;
    }
    true
}

pub fn next_prime(n: u64) -> u64 {
    let mut c = n.max(2);
    while !is_prime(c) {
        c += 1;
    }
    c
}

/// Greedy search for a reconstructing lattice.
///
/// Starts at the smallest prime `M ≥ max(2|K|+1, spread)` with `z_1 = 1`. Each
/// further component takes the first of a fixed pseudo-random sequence of
/// generators that keeps `k ↦ k·z mod M` injective on the projection of `K`
/// to the components chosen so far. If no generator works, `M` grows by 10%
/// to the next prime and the search restarts.
pub fn build_rank1_lattice(k_set: &IndexSet, m_cap: u64) -> Result<Rank1Lattice> {
    let n = k_set.len();
    let t = k_set.stride();
    if n <= 1 {
        return Ok(Rank1Lattice { z: vec![1; t], m: 1 });
    }
    let spread = (0..t)
        .map(|c| {
            let (lo, hi) = k_set
                .iter()
                .fold((i64::MAX, i64::MIN), |(lo, hi), k| (lo.min(k[c]), hi.max(k[c])));
            (hi - lo + 1) as u64
        })
        .max()
        .unwrap_or(1);
    let prefixes = Prefixes::new(k_set);
    let mut m = next_prime((2 * n as u64 + 1).max(spread));
    loop {
        if m > m_cap {
            return Err(Error::LatticeConstruction { cap: m_cap, size: n });
        }
        if let Some(z) = prefixes.search(m) {
            return Ok(Rank1Lattice { z, m });
        }
        m = next_prime((m + 1).max((m as f64 * GROWTH).ceil() as u64));
    }
}

/// Distinct prefixes of a lexicographically sorted set, per length.
struct Prefixes {
    /// `levels[c][i] = (parent index in levels[c-1], value of component c)`.
    levels: Vec<Vec<(usize, i64)>>,
}

impl Prefixes {
    fn new(k_set: &IndexSet) -> Self {
        let t = k_set.stride();
        let mut levels: Vec<Vec<(usize, i64)>> = vec![Vec::new(); t];
        // Index of the current prefix at each level for the previous member.
        let mut cur = vec![usize::MAX; t];
        let mut prev: Option<&[i64]> = None;
        for k in k_set.iter() {
            // First component where k differs from the previous member.
            let split = prev.map_or(0, |p| p.iter().zip(k).position(|(a, b)| a != b).unwrap_or(t));
            for c in split..t {
                let parent = if c == 0 { 0 } else { cur[c - 1] };
                levels[c].push((parent, k[c]));
                cur[c] = levels[c].len() - 1;
            }
            prev = Some(k);
        }
        Prefixes { levels }
    }

    fn search(&self, m: u64) -> Option<Vec<u64>> {
        let mi = m as i128;
        let residues = |parent: &[u64], level: &[(usize, i64)], z: u64| -> Vec<u64> {
            level
                .iter()
                .map(|&(p, v)| {
                    let base = if parent.is_empty() { 0 } else { parent[p] as i128 };
                    (base + (v as i128 * z as i128).rem_euclid(mi)).rem_euclid(mi) as u64
                })
                .collect()
        };
        let mut z = vec![1u64];
        let mut res = residues(&[], &self.levels[0], 1);
        if !injective(&res) {
            return None;
        }
        for c in 1..self.levels.len() {
            let found = candidates(m, c).find_map(|zc| {
                let r = residues(&res, &self.levels[c], zc);
                injective(&r).then_some((zc, r))
            });
            let (zc, r) = found?;
            z.push(zc);
            res = r;
        }
        Some(z)
    }
}

/// Early-exit duplicate check.
fn injective(r: &[u64]) -> bool {
    let mut seen = HashSet::with_capacity(r.len());
    r.iter().all(|x| seen.insert(*x))
}

fn candidates(m: u64, component: usize) -> Box<dyn Iterator<Item = u64>> {
    if m <= 2 {
        return Box::new(1..m.max(2));
    }
    if (m - 1) as usize <= TRIALS {
        return Box::new(1..m);
    }
    let mut rng = stream(m, &[component as u64]);
    Box::new((0..TRIALS).map(move |_| rng.gen_range(1..m)))
}
