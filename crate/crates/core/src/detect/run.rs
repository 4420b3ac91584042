use super::params::AlgorithmParams;
use super::schedule::next_stage;
use super::threshold::{select_positions, subset};
use crate::blackbox::BlackBox;
use crate::bopb::{draw_anchor, ProductBasis};
use crate::cubature::{build_rule, Evaluator};
use crate::error::{Error, Result};
use crate::index::{candidate_set, DimSubset, IndexSet, MultiIndex, SearchSpace};
use crate::rng::{derive, stream};
use num_complex::Complex64;
use std::collections::BTreeSet;
use std::time::Instant;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepKind {
    Single,
    Coupled,
    Recompute,
}

#[derive(Clone, Debug)]
pub struct StepStats {
    pub kind: StepKind,
    pub dims: DimSubset,
    pub stage: usize,
    pub candidates: usize,
    /// Nodes of the rule, `M`.
    pub nodes: usize,
    pub iterations: usize,
    pub samples: u64,
    pub seconds: f64,
    pub detected: IndexSet,
}

#[derive(Clone, Debug)]
pub struct DetectionResult {
    pub index_set: IndexSet,
    /// Aligned with `index_set`.
    pub coefficients: Vec<Complex64>,
    pub steps: Vec<StepStats>,
    pub total_samples: u64,
}

impl DetectionResult {
    pub fn coefficient_list(&self) -> Vec<(MultiIndex, Complex64)> {
        self.index_set
            .iter()
            .map(|k| k.to_vec())
            .zip(self.coefficients.iter().copied())
            .collect()
    }
}

const TAG_SINGLE: u64 = 1;
const TAG_COUPLED: u64 = 2;
const TAG_RECOMPUTE: u64 = 3;
const TAG_TIES: u64 = 4;
const PURPOSE_RULE: u64 = 0;
const PURPOSE_ANCHOR: u64 = 1;

struct Ctx<'a> {
    f: &'a dyn BlackBox,
    basis: &'a ProductBasis,
    params: &'a AlgorithmParams,
    d: usize,
}

struct Outcome {
    detected: IndexSet,
    values: Vec<Complex64>,
    stats: StepStats,
}

impl Ctx<'_> {
    /// Builds one rule on `K` and unions the selections over `iterations`
    /// random anchors. `values` holds the last iteration's coefficients of the
    /// detected members.
    fn step(
        &self,
        kind: StepKind,
        stage: usize,
        k_set: &IndexSet,
        iterations: usize,
        s_cap: usize,
    ) -> Result<Outcome> {
        let start = Instant::now();
        let dims = k_set.dims().clone();
        let kind_tag = match kind {
            StepKind::Single => TAG_SINGLE,
            StepKind::Coupled => TAG_COUPLED,
            StepKind::Recompute => TAG_RECOMPUTE,
        };
        let base = derive(self.params.seed, &[kind_tag, dims.tag()]);
        let mut stats = StepStats {
            kind,
            dims: dims.clone(),
            stage,
            candidates: k_set.len(),
            nodes: 0,
            iterations: 0,
            samples: 0,
            seconds: 0.0,
            detected: IndexSet::empty(dims.clone()),
        };
        if k_set.is_empty() {
            return Ok(Outcome {
                detected: IndexSet::empty(dims),
                values: Vec::new(),
                stats,
            });
        }
        let rule = build_rule(
            &self.params.method,
            k_set,
            self.basis,
            &self.params.rule,
            &mut stream(base, &[PURPOSE_RULE]),
        )?;
        let ev = Evaluator::new(&rule, k_set, self.basis, self.params.rule.lsq)?;
        stats.nodes = rule.num_nodes();
        let uc = dims.complement(self.d);
        let mut union: BTreeSet<usize> = BTreeSet::new();
        let mut last = Vec::new();
        for i in 0..iterations {
            let anchor = draw_anchor(self.basis, &uc, &mut stream(base, &[PURPOSE_ANCHOR, i as u64]));
            let y = rule.sample(self.f, &anchor)?;
            stats.samples += y.len() as u64;
            let vals = ev.apply(&y);
            union.extend(select_positions(&vals, s_cap, self.params.delta_plus));
            last = vals;
        }
        let pos: Vec<usize> = union.into_iter().collect();
        let detected = subset(k_set, &pos);
        stats.iterations = iterations;
        stats.seconds = start.elapsed().as_secs_f64();
        stats.detected = detected.clone();
        Ok(Outcome {
            detected,
            values: pos.iter().map(|&p| last[p]).collect(),
            stats,
        })
    }
}

fn with_step<T>(r: Result<T>, step: usize, dims: &DimSubset) -> Result<T> {
    r.map_err(|e| Error::Step {
        step,
        dims: dims.to_string(),
        source: Box::new(e),
    })
}

/// Runs the detection on `f` over the search space `space`.
pub fn run(
    f: &dyn BlackBox,
    basis: &ProductBasis,
    space: &SearchSpace,
    params: &AlgorithmParams,
) -> Result<DetectionResult> {
    params.validate()?;
    let d = space.d();
    if basis.d() != d || f.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: if basis.d() != d { basis.d() } else { f.dim() },
        });
    }
    if space.is_signed() && !basis.is_signed() {
        return Err(Error::InvalidParameter(
            "signed search space with an unsigned basis".into(),
        ));
    }
    let ctx = Ctx { f, basis, params, d };
    let mut steps: Vec<StepStats> = Vec::new();
    let full = DimSubset::full(d);

    let single_cap = if d == 1 { params.s } else { params.s_local };
    let single_iter = if d == 1 { 1 } else { params.r };
    let mut forest: Vec<(DimSubset, IndexSet)> = Vec::with_capacity(d);
    let mut final_values = Vec::new();
    for t in 0..d {
        let u = DimSubset::single(t);
        let k = with_step(
            space.project(&u).and_then(|p| p.enumerate(params.enumeration_limit)),
            steps.len(),
            &u,
        )?;
        let out = with_step(ctx.step(StepKind::Single, 0, &k, single_iter, single_cap), steps.len(), &u)?;
        steps.push(out.stats);
        if d == 1 {
            final_values = out.values;
        }
        forest.push((u, out.detected));
    }

    let mut ties = params.randomized_ties.then(|| stream(params.seed, &[TAG_TIES]));
    let mut stage = 1;
    while forest.len() > 1 {
        let sizes: Vec<(DimSubset, usize)> = forest.iter().map(|(u, s)| (u.clone(), s.len())).collect();
        let pairs = next_stage(params.strategy, &sizes, ties.as_mut());
        let mut merged = Vec::new();
        let mut used = vec![false; forest.len()];
        for (a, b) in pairs {
            used[a] = true;
            used[b] = true;
            let w = forest[a].0.union(&forest[b].0);
            let last = w == full;
            let k = with_step(candidate_set(&forest[a].1, &forest[b].1, space), steps.len(), &w)?;
            let (iters, cap) = if last { (1, params.s) } else { (params.r, params.s_local) };
            let out = with_step(ctx.step(StepKind::Coupled, stage, &k, iters, cap), steps.len(), &w)?;
            steps.push(out.stats);
            if last {
                final_values = out.values;
            }
            merged.push((w, out.detected));
        }
        let mut rest: Vec<(DimSubset, IndexSet)> = forest
            .into_iter()
            .zip(used)
            .filter(|(_, u)| !u)
            .map(|(s, _)| s)
            .collect();
        rest.extend(merged);
        forest = rest;
        stage += 1;
    }

    let (_, mut index_set) = forest.pop().expect("one set remains");
    let mut coefficients = final_values;
    if params.recompute_final && !index_set.is_empty() {
        let out = with_step(ctx.step(StepKind::Recompute, stage, &index_set, 1, params.s), steps.len(), &full)?;
        steps.push(out.stats);
        index_set = out.detected;
        coefficients = out.values;
    }
    let total_samples = steps.iter().map(|s| s.samples).sum();
    Ok(DetectionResult {
        index_set,
        coefficients,
        steps,
        total_samples,
    })
}
