use crate::cubature::{Method, RuleOptions};
use crate::error::{Error, Result};
use crate::index::DEFAULT_ENUMERATION_LIMIT;

/// Order in which detected projections are merged.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// `({1..t-1}, {t})` for `t = 2..d`.
    OneByOne,
    /// Pairs sets of smallest dimensionality stage by stage.
    Dyadic,
    /// One-by-one over dimensions sorted by detected set size, largest first.
    DataDrivenOneByOne,
    /// Pairs the largest detected set with the smallest, stage by stage.
    DataDrivenDyadic,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [
        Strategy::OneByOne,
        Strategy::Dyadic,
        Strategy::DataDrivenOneByOne,
        Strategy::DataDrivenDyadic,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Strategy::OneByOne => "one-by-one",
            Strategy::Dyadic => "dyadic",
            Strategy::DataDrivenOneByOne => "dd-one-by-one",
            Strategy::DataDrivenDyadic => "dd-dyadic",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Strategy::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown strategy {s:?}")))
    }
}

#[derive(Clone, Debug)]
pub struct AlgorithmParams {
    /// Sparsity of the output.
    pub s: usize,
    /// Per-iteration cap in intermediate steps, `s ≤ s_local`.
    pub s_local: usize,
    pub delta_plus: f64,
    /// Detection iterations (random anchors) per intermediate step.
    pub r: usize,
    pub strategy: Strategy,
    pub method: Method,
    /// Recompute the final coefficients on a fresh rule.
    pub recompute_final: bool,
    pub seed: u64,
    pub rule: RuleOptions,
    pub enumeration_limit: u64,
    /// Break dyadic ties randomly instead of by leading dimension.
    pub randomized_ties: bool,
}

/// `⌈factor · s⌉`, ignoring float noise in the product (`1.2 · 20 = 24`).
pub fn local_cap(s: usize, factor: f64) -> usize {
    let x = factor * s as f64;
    let r = x.round();
    let c = if (x - r).abs() <= 1e-9 * x.max(1.0) { r } else { x.ceil() };
    (c as usize).max(s)
}

impl AlgorithmParams {
    /// Defaults: `s_local = ⌈1.2 s⌉`, `δ_+ = 1e-12`, `r = 5`, one-by-one, R1L.
    pub fn new(s: usize) -> Self {
        AlgorithmParams {
            s,
            s_local: local_cap(s, 1.2),
            delta_plus: 1e-12,
            r: 5,
            strategy: Strategy::OneByOne,
            method: Method::R1l,
            recompute_final: false,
            seed: 0,
            rule: RuleOptions::default(),
            enumeration_limit: DEFAULT_ENUMERATION_LIMIT,
            randomized_ties: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.s == 0 {
            return Err(Error::InvalidParameter("s must be positive".into()));
        }
        if self.s_local < self.s {
            return Err(Error::InvalidParameter(format!(
                "s_local = {} < s = {}",
                self.s_local, self.s
            )));
        }
        if self.r == 0 {
            return Err(Error::InvalidParameter("r must be at least 1".into()));
        }
        if !(self.delta_plus > 0.0) {
            return Err(Error::InvalidParameter("delta_plus must be positive".into()));
        }
        Ok(())
    }
}
