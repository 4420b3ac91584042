use super::Strategy;
use crate::error::{Error, Result};
use crate::index::DimSubset;
use crate::rng::StreamRng;
use rand::Rng;

/// Merge of two detected sets on disjoint dimension subsets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MergeStep {
    pub left: DimSubset,
    pub right: DimSubset,
    pub stage: usize,
}

/// Pairs to merge in the next stage, as positions into `sets`.
///
/// `sets` holds the current detected sets with their sizes. One-by-one
/// strategies return a single pair per stage; dyadic strategies pair as many
/// sets as possible. `ties` randomizes dyadic tie-breaking when given.
pub fn next_stage(
    strategy: Strategy,
    sets: &[(DimSubset, usize)],
    ties: Option<&mut StreamRng>,
) -> Vec<(usize, usize)> {
    if sets.len() < 2 {
        return Vec::new();
    }
    let mut order: Vec<usize> = (0..sets.len()).collect();
    match strategy {
        Strategy::OneByOne | Strategy::DataDrivenOneByOne => {
            let singles: Vec<usize> = {
                let mut s: Vec<usize> = order.iter().copied().filter(|&i| sets[i].0.len() == 1).collect();
                if strategy == Strategy::OneByOne {
                    s.sort_by_key(|&i| sets[i].0.leading());
                } else {
                    s.sort_by(|&a, &b| sets[b].1.cmp(&sets[a].1).then(sets[a].0.leading().cmp(&sets[b].0.leading())));
                }
                s
            };
            match order.iter().copied().find(|&i| sets[i].0.len() > 1) {
                Some(acc) => vec![(acc, singles[0])],
                None => vec![(singles[0], singles[1])],
            }
        }
        Strategy::Dyadic => {
            let keys: Vec<u64> = match ties {
                Some(rng) => (0..sets.len()).map(|_| rng.gen()).collect(),
                None => sets.iter().map(|s| s.0.leading() as u64).collect(),
            };
            order.sort_by_key(|&i| (sets[i].0.len(), keys[i]));
            if order.len() % 2 == 1 {
                order.pop();
            }
            order.chunks_exact(2).map(|p| (p[0], p[1])).collect()
        }
        Strategy::DataDrivenDyadic => {
            order.sort_by(|&a, &b| sets[b].1.cmp(&sets[a].1).then(sets[a].0.leading().cmp(&sets[b].0.leading())));
            if order.len() % 2 == 1 {
                order.remove(order.len() / 2);
            }
            let n = order.len();
            (0..n / 2).map(|i| (order[i], order[n - 1 - i])).collect()
        }
    }
}

/// Full merge plan, simulated stage by stage.
///
/// Data-driven strategies need one size per dimension and estimate the size of
/// a merged set as the product of its parts; during a run the plan is instead
/// recomputed from the actual detected sizes before every stage.
pub fn increment_schedule(
    strategy: Strategy,
    d: usize,
    size_hints: Option<&[usize]>,
) -> Result<Vec<MergeStep>> {
    if d < 2 {
        return Err(Error::InvalidParameter("schedules need d ≥ 2".into()));
    }
    let data_driven = matches!(strategy, Strategy::DataDrivenOneByOne | Strategy::DataDrivenDyadic);
    let sizes = match size_hints {
        Some(h) if h.len() == d => h.to_vec(),
        Some(h) => return Err(Error::DimensionMismatch { expected: d, got: h.len() }),
        None if data_driven => {
            return Err(Error::InvalidParameter("data-driven schedules need size hints".into()))
        }
        None => vec![1; d],
    };
    let mut sets: Vec<(DimSubset, usize)> = (0..d).map(|j| (DimSubset::single(j), sizes[j])).collect();
    let mut steps = Vec::new();
    let mut stage = 1;
    while sets.len() > 1 {
        let pairs = next_stage(strategy, &sets, None);
        let mut merged = Vec::new();
        let mut used = vec![false; sets.len()];
        for (a, b) in pairs {
            steps.push(MergeStep {
                left: sets[a].0.clone(),
                right: sets[b].0.clone(),
                stage,
            });
            merged.push((sets[a].0.union(&sets[b].0), sets[a].1.saturating_mul(sets[b].1)));
            used[a] = true;
            used[b] = true;
        }
        let mut rest: Vec<(DimSubset, usize)> = sets
            .into_iter()
            .zip(used)
            .filter(|(_, u)| !u)
            .map(|(s, _)| s)
            .collect();
        rest.extend(merged);
        sets = rest;
        stage += 1;
    }
    Ok(steps)
}
