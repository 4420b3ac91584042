use super::{nnz, DimSubset, IndexSet};
use crate::error::{Error, Result};
use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedMul, One, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::hash::{Hash, Hasher};

pub const DEFAULT_ENUMERATION_LIMIT: u64 = 10_000_000;

/// Relative slack for boundary tests that cannot be done in exact arithmetic.
const FLOAT_TOL: f64 = 1e-12;
const MAX_EXTENT: u64 = 1 << 40;

type Q = Ratio<i128>;

#[derive(Clone, Debug, PartialEq)]
pub enum SpaceKind {
    /// `‖k‖_∞ ≤ n`.
    FullGrid,
    /// `∏ max(1, |k_j|/γ_j) ≤ n`.
    HyperbolicCross,
    /// `(Σ (|k_j|/γ_j)^p)^(1/p) ≤ n`; `p = ∞` gives the weighted max norm.
    LpBall { p: f64 },
    /// Hyperbolic cross with `n = 2^N` on the signed lattice.
    SymmetricHyperbolicCross { big_n: u32 },
}

/// Cardinality, saturated to `u64::MAX` when it does not fit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Count {
    pub value: u64,
    pub saturated: bool,
}

impl Count {
    fn from_u128(c: u128) -> Self {
        match u64::try_from(c) {
            Ok(value) => Count {
                value,
                saturated: false,
            },
            Err(_) => Count {
                value: u64::MAX,
                saturated: true,
            },
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct F(f64);

impl PartialEq for F {
    fn eq(&self, o: &Self) -> bool {
        self.0.to_bits() == o.0.to_bits()
    }
}
impl Eq for F {}
impl PartialOrd for F {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for F {
    fn cmp(&self, o: &Self) -> Ordering {
        self.0.total_cmp(&o.0)
    }
}
impl Hash for F {
    fn hash<H: Hasher>(&self, h: &mut H) {
        self.0.to_bits().hash(h)
    }
}

/// Accumulated cost of a partial index.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Acc {
    Unit,
    Exact(Q),
    Approx(F),
}

#[derive(Clone, Debug)]
enum Rule {
    /// Per-dimension bound only (full grid, weighted max norm).
    Box,
    Product,
    PowerSum(u32),
    FloatPowerSum(f64),
}

fn to_q(x: f64) -> Result<Q> {
    let r = Ratio::<i64>::approximate_float(x)
        .ok_or_else(|| Error::InvalidParameter(format!("cannot represent {x}")))?;
    Ok(Q::new(*r.numer() as i128, *r.denom() as i128))
}

fn q_f64(q: &Q) -> f64 {
    q.numer().to_f64().unwrap_or(f64::INFINITY) / q.denom().to_f64().unwrap_or(1.0)
}

/// Implicit description of a search space Γ.
#[derive(Clone, Debug)]
pub struct SearchSpace {
    kind: SpaceKind,
    d: usize,
    n: f64,
    gamma: Vec<f64>,
    dtilde: Option<usize>,
    signed: bool,
    rule: Rule,
    n_q: Q,
    bound_q: Option<Q>,
    gamma_q: Vec<Q>,
    vmax: Vec<u64>,
}

impl SearchSpace {
    pub fn new(
        kind: SpaceKind,
        d: usize,
        n: f64,
        gamma: Vec<f64>,
        dtilde: Option<usize>,
        signed: bool,
    ) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidParameter("d must be positive".into()));
        }
        let gamma = match gamma.len() {
            0 => vec![1.0; d],
            1 => vec![gamma[0]; d],
            l if l == d => gamma,
            l => return Err(Error::DimensionMismatch { expected: d, got: l }),
        };
        if gamma.iter().any(|g| !(g.is_finite() && *g > 0.0)) {
            return Err(Error::InvalidParameter("gamma entries must be in (0,∞)".into()));
        }
        let n = match kind {
            SpaceKind::SymmetricHyperbolicCross { big_n } => 2f64.powi(big_n as i32),
            _ => n,
        };
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::InvalidParameter("extension n must be in (0,∞)".into()));
        }
        let signed = signed || matches!(kind, SpaceKind::SymmetricHyperbolicCross { .. });
        let n_q = to_q(n)?;
        let gamma_q = gamma.iter().map(|&g| to_q(g)).collect::<Result<Vec<_>>>()?;
        let (rule, bound_q) = match kind {
            SpaceKind::FullGrid => (Rule::Box, None),
            SpaceKind::HyperbolicCross | SpaceKind::SymmetricHyperbolicCross { .. } => {
                (Rule::Product, None)
            }
            SpaceKind::LpBall { p } if p == f64::INFINITY => (Rule::Box, None),
            SpaceKind::LpBall { p } if p > 0.0 && p.fract() == 0.0 && p <= 64.0 => {
                let pi = p as u32;
                match checked_pow(&n_q, pi) {
                    Some(b) => (Rule::PowerSum(pi), Some(b)),
                    None => (Rule::FloatPowerSum(p), None),
                }
            }
            SpaceKind::LpBall { p } if p > 0.0 && p.is_finite() => (Rule::FloatPowerSum(p), None),
            SpaceKind::LpBall { p } => {
                return Err(Error::InvalidParameter(format!("p = {p} not in (0,∞]")))
            }
        };
        let mut s = SearchSpace {
            kind,
            d,
            n,
            gamma,
            dtilde,
            signed,
            rule,
            n_q,
            bound_q,
            gamma_q,
            vmax: Vec::new(),
        };
        s.vmax = (0..d).map(|j| s.extent(j)).collect::<Result<Vec<_>>>()?;
        Ok(s)
    }

    pub fn full_grid(d: usize, n: f64) -> Result<Self> {
        Self::new(SpaceKind::FullGrid, d, n, vec![], None, false)
    }

    pub fn hyperbolic_cross(d: usize, n: f64, gamma: Vec<f64>) -> Result<Self> {
        Self::new(SpaceKind::HyperbolicCross, d, n, gamma, None, false)
    }

    pub fn lp_ball(d: usize, p: f64, n: f64, gamma: Vec<f64>) -> Result<Self> {
        Self::new(SpaceKind::LpBall { p }, d, n, gamma, None, false)
    }

    pub fn symmetric_hyperbolic_cross(d: usize, big_n: u32, gamma: f64) -> Result<Self> {
        Self::new(
            SpaceKind::SymmetricHyperbolicCross { big_n },
            d,
            0.0,
            vec![gamma],
            None,
            true,
        )
    }

    pub fn with_cap(self, dtilde: usize) -> Result<Self> {
        Self::new(self.kind, self.d, self.n, self.gamma, Some(dtilde), self.signed)
    }

    pub fn with_signed(self, signed: bool) -> Result<Self> {
        Self::new(self.kind, self.d, self.n, self.gamma, self.dtilde, signed)
    }

    pub fn kind(&self) -> &SpaceKind {
        &self.kind
    }
    pub fn d(&self) -> usize {
        self.d
    }
    pub fn n(&self) -> f64 {
        self.n
    }
    pub fn gamma(&self) -> &[f64] {
        &self.gamma
    }
    pub fn dtilde(&self) -> Option<usize> {
        self.dtilde
    }
    pub fn is_signed(&self) -> bool {
        self.signed
    }

    /// Largest admissible `|k_j|` with all other entries zero.
    pub fn extent_of(&self, j: usize) -> u64 {
        self.vmax[j]
    }

    fn zero_acc(&self) -> Acc {
        match self.rule {
            Rule::Box => Acc::Unit,
            Rule::Product => Acc::Exact(Q::one()),
            Rule::PowerSum(_) => Acc::Exact(Q::zero()),
            Rule::FloatPowerSum(_) => Acc::Approx(F(0.0)),
        }
    }

    /// `v / γ_j` exactly.
    fn scaled(&self, j: usize, v: u64) -> Q {
        Q::from_integer(v as i128) / self.gamma_q[j]
    }

    /// Adds `|k_j| = v` to a partial cost; `None` when the bound is violated.
    fn step(&self, acc: &Acc, j: usize, v: u64) -> Option<Acc> {
        if v == 0 {
            return Some(acc.clone());
        }
        match &self.rule {
            Rule::Box => {
                let w = match self.kind {
                    SpaceKind::FullGrid => Q::from_integer(v as i128),
                    _ => self.scaled(j, v),
                };
                (w <= self.n_q).then_some(Acc::Unit)
            }
            Rule::Product => {
                let f = self.scaled(j, v).max(Q::one());
                match acc {
                    Acc::Exact(a) => match a.checked_mul(&f) {
                        Some(p) => (p <= self.n_q).then_some(Acc::Exact(p)),
                        None => float_le(q_f64(a) * q_f64(&f), self.n),
                    },
                    Acc::Approx(F(a)) => float_le(a * q_f64(&f), self.n),
                    Acc::Unit => unreachable!(),
                }
            }
            Rule::PowerSum(p) => {
                let bound = self.bound_q.as_ref().expect("exact bound");
                let term = checked_pow(&self.scaled(j, v), *p);
                let pf = f64::from(*p);
                let fb = self.n.powf(pf);
                match (acc, term) {
                    (Acc::Exact(a), Some(t)) => match a.checked_add(&t) {
                        Some(s) => (s <= *bound).then_some(Acc::Exact(s)),
                        None => float_le(q_f64(a) + q_f64(&t), fb),
                    },
                    (Acc::Exact(a), None) => {
                        float_le(q_f64(a) + q_f64(&self.scaled(j, v)).powf(pf), fb)
                    }
                    (Acc::Approx(F(a)), _) => {
                        float_le(a + q_f64(&self.scaled(j, v)).powf(pf), fb)
                    }
                    (Acc::Unit, _) => unreachable!(),
                }
            }
            Rule::FloatPowerSum(p) => {
                let Acc::Approx(F(a)) = acc else {
                    unreachable!()
                };
                let t = (v as f64 / self.gamma[j]).powf(*p);
                float_le(a + t, self.n.powf(*p))
            }
        }
    }

    fn extent(&self, j: usize) -> Result<u64> {
        let z = self.zero_acc();
        let ok = |v: u64| self.step(&z, j, v).is_some();
        let mut hi = 1u64;
        while ok(hi) {
            hi *= 2;
            if hi > MAX_EXTENT {
                return Err(Error::InvalidParameter(
                    "search space extent is effectively unbounded".into(),
                ));
            }
        }
        let mut lo = 0u64;
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if ok(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(lo)
    }

    fn cap_allows(&self, nz: usize) -> bool {
        self.dtilde.is_none_or(|c| nz <= c)
    }

    /// Membership of `k` placed on the labels `dims`, every other entry zero.
    fn admits(&self, dims: &[usize], k: &[i64]) -> bool {
        if k.len() != dims.len() || !self.cap_allows(nnz(k)) {
            return false;
        }
        let mut acc = self.zero_acc();
        for (&j, &v) in dims.iter().zip(k) {
            if v < 0 && !self.signed {
                return false;
            }
            match self.step(&acc, j, v.unsigned_abs()) {
                Some(a) => acc = a,
                None => return false,
            }
        }
        true
    }

    pub fn contains(&self, k: &[i64]) -> Result<bool> {
        if k.len() != self.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                got: k.len(),
            });
        }
        Ok(self.admits(&DimSubset::full(self.d).0, k))
    }

    pub fn cardinality(&self) -> Count {
        self.count_on(&DimSubset::full(self.d).0)
    }

    pub fn enumerate(&self, limit: u64) -> Result<IndexSet> {
        self.enumerate_on(DimSubset::full(self.d), limit)
    }

    /// The projection `P_u(Γ)`. Because zero minimizes every per-dimension
    /// cost, `k ∈ P_u(Γ)` iff its zero-extension lies in Γ.
    pub fn project(&self, u: &DimSubset) -> Result<Projection<'_>> {
        if u.is_empty() || u.dims().iter().any(|&j| j >= self.d) {
            return Err(Error::InvalidParameter(format!(
                "projection subset {u} invalid for d = {}",
                self.d
            )));
        }
        Ok(Projection {
            space: self,
            dims: u.clone(),
        })
    }

    fn count_on(&self, dims: &[usize]) -> Count {
        let mut states: BTreeMap<(usize, Acc), u128> = BTreeMap::new();
        states.insert((0, self.zero_acc()), 1);
        for &j in dims {
            let mut next: BTreeMap<(usize, Acc), u128> = BTreeMap::new();
            for ((nz, acc), c) in states {
                for v in 0..=self.vmax[j] {
                    let nz2 = nz + usize::from(v > 0);
                    if !self.cap_allows(nz2) {
                        break;
                    }
                    let Some(a) = self.step(&acc, j, v) else {
                        break;
                    };
                    let mult: u128 = if self.signed && v > 0 { 2 } else { 1 };
                    let e = next.entry((nz2, a)).or_insert(0);
                    *e = e.saturating_add(c.saturating_mul(mult));
                }
            }
            states = next;
        }
        Count::from_u128(states.values().fold(0u128, |s, c| s.saturating_add(*c)))
    }

    fn enumerate_on(&self, dims: DimSubset, limit: u64) -> Result<IndexSet> {
        let t = dims.len();
        let mut data = Vec::new();
        let mut cur = vec![0i64; t];
        let mut len = 0usize;
        self.dfs(dims.dims(), 0, &self.zero_acc(), 0, &mut cur, &mut data, &mut len, limit)?;
        Ok(IndexSet::from_sorted_flat(dims, data, len))
    }

    #[allow(clippy::too_many_arguments)]
    fn dfs(
        &self,
        dims: &[usize],
        level: usize,
        acc: &Acc,
        nz: usize,
        cur: &mut Vec<i64>,
        out: &mut Vec<i64>,
        len: &mut usize,
        limit: u64,
    ) -> Result<()> {
        if level == dims.len() {
            *len += 1;
            if *len as u64 > limit {
                return Err(Error::EnumerationLimit { limit });
            }
            out.extend_from_slice(cur);
            return Ok(());
        }
        let j = dims[level];
        let mut reach = 0u64;
        if self.cap_allows(nz + 1) {
            while reach < self.vmax[j] && self.step(acc, j, reach + 1).is_some() {
                reach += 1;
            }
        }
        let lo = if self.signed { -(reach as i64) } else { 0 };
        for v in lo..=reach as i64 {
            let a = self.step(acc, j, v.unsigned_abs()).expect("within reach");
            cur[level] = v;
            self.dfs(dims, level + 1, &a, nz + usize::from(v != 0), cur, out, len, limit)?;
        }
        cur[level] = 0;
        Ok(())
    }
}

fn float_le(x: f64, bound: f64) -> Option<Acc> {
    (x <= bound * (1.0 + FLOAT_TOL)).then_some(Acc::Approx(F(x)))
}

fn checked_pow(q: &Q, p: u32) -> Option<Q> {
    (0..p).try_fold(Q::one(), |acc, _| acc.checked_mul(q))
}

/// `P_u(Γ)` served as a predicate with optional enumeration.
#[derive(Clone, Debug)]
pub struct Projection<'a> {
    space: &'a SearchSpace,
    dims: DimSubset,
}

impl Projection<'_> {
    pub fn dims(&self) -> &DimSubset {
        &self.dims
    }

    /// `k` is indexed like `dims`.
    pub fn contains(&self, k: &[i64]) -> bool {
        self.space.admits(self.dims.dims(), k)
    }

    pub fn cardinality(&self) -> Count {
        self.space.count_on(self.dims.dims())
    }

    pub fn enumerate(&self, limit: u64) -> Result<IndexSet> {
        self.space.enumerate_on(self.dims.clone(), limit)
    }
}
