//! Cubature rules on candidate sets and approximated projected coefficients.

mod evaluate;
mod exactness;
mod lattice;
mod lsqr;
mod mc;
mod noise;

pub use evaluate::{projected_coefficients, Evaluator, ProjectedCoefficients};
pub use exactness::{exactness_check, EXACTNESS_GUARD};
pub use lattice::{build_rank1_lattice, is_prime, next_prime, Rank1Lattice, DEFAULT_M_CAP};
pub use lsqr::{cgls, LinearOperator, LsqOptions, LsqReport};
pub use mc::{mc_node_count, mc_rule};
pub use noise::{projection_error_term, retained_term};

use crate::blackbox::BlackBox;
use crate::bopb::{Anchor, ProductBasis};
use crate::error::{Error, Result};
use crate::index::{DimSubset, IndexSet};
use crate::rng::StreamRng;
use num_complex::Complex64;
use std::fmt;
use std::sync::Arc;

/// Nodes per black-box batch.
const SAMPLE_CHUNK: usize = 1 << 15;
const MAX_DIMS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Backend {
    /// Weighted sums evaluated per index.
    Direct,
    /// One length-`M` FFT of the samples, read at bins `k·z mod M`.
    LatticeFft,
    /// Least-squares fit of the samples on `K`.
    LeastSquares,
}

#[derive(Clone, Debug)]
enum Nodes {
    Lattice(Rank1Lattice),
    Explicit(Vec<f64>),
}

#[derive(Clone, Debug)]
enum Weights {
    Equal(f64),
    Explicit(Vec<Complex64>),
    None,
}

/// Nodes `ξ_j ∈ D_u` and, except for least squares, weights `w_j`.
#[derive(Clone, Debug)]
pub struct CubatureRule {
    dims: DimSubset,
    nodes: Nodes,
    weights: Weights,
    backend: Backend,
}

impl CubatureRule {
    /// Equal-weight lattice rule; uses the FFT when all factors are Fourier.
    pub fn lattice(dims: DimSubset, l: Rank1Lattice, basis: &ProductBasis) -> Self {
        let backend = if basis.is_fourier_on(&dims) {
            Backend::LatticeFft
        } else {
            Backend::Direct
        };
        let w = 1.0 / l.m as f64;
        CubatureRule {
            dims,
            nodes: Nodes::Lattice(l),
            weights: Weights::Equal(w),
            backend,
        }
    }

    /// Explicit nodes (row-major) and weights.
    pub fn direct(dims: DimSubset, nodes: Vec<f64>, weights: Vec<Complex64>) -> Result<Self> {
        let t = dims.len().max(1);
        if nodes.len() != weights.len() * t {
            return Err(Error::DimensionMismatch {
                expected: weights.len() * t,
                got: nodes.len(),
            });
        }
        Ok(CubatureRule {
            dims,
            nodes: Nodes::Explicit(nodes),
            weights: Weights::Explicit(weights),
            backend: Backend::Direct,
        })
    }

    /// Unweighted nodes for least-squares reconstruction.
    pub fn least_squares(dims: DimSubset, nodes: Vec<f64>) -> Self {
        CubatureRule {
            dims,
            nodes: Nodes::Explicit(nodes),
            weights: Weights::None,
            backend: Backend::LeastSquares,
        }
    }

    /// Same nodes and weights, evaluated by weighted sums.
    pub fn as_direct(&self) -> Result<Self> {
        if matches!(self.weights, Weights::None) {
            return Err(Error::NoWeights);
        }
        Ok(CubatureRule {
            backend: Backend::Direct,
            ..self.clone()
        })
    }

    pub fn dims(&self) -> &DimSubset {
        &self.dims
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    pub fn lattice_params(&self) -> Option<&Rank1Lattice> {
        match &self.nodes {
            Nodes::Lattice(l) => Some(l),
            Nodes::Explicit(_) => None,
        }
    }

    pub fn num_nodes(&self) -> usize {
        match &self.nodes {
            Nodes::Lattice(l) => l.m as usize,
            Nodes::Explicit(v) => {
                if self.dims.is_empty() {
                    self.weight_count()
                } else {
                    v.len() / self.dims.len()
                }
            }
        }
    }

    fn weight_count(&self) -> usize {
        match &self.weights {
            Weights::Explicit(w) => w.len(),
            _ => 1,
        }
    }

    pub fn node(&self, j: usize, out: &mut [f64]) {
        match &self.nodes {
            Nodes::Lattice(l) => l.node(j as u64, out),
            Nodes::Explicit(v) => {
                let t = self.dims.len();
                out.copy_from_slice(&v[j * t..(j + 1) * t]);
            }
        }
    }

    pub fn weight(&self, j: usize) -> Option<Complex64> {
        match &self.weights {
            Weights::Equal(w) => Some(Complex64::new(*w, 0.0)),
            Weights::Explicit(v) => Some(v[j]),
            Weights::None => None,
        }
    }

    /// `C_Q = Σ |w_j|`.
    pub fn weight_sum(&self) -> Option<f64> {
        match &self.weights {
            Weights::Equal(w) => Some(w * self.num_nodes() as f64),
            Weights::Explicit(v) => Some(v.iter().map(|w| w.norm()).sum()),
            Weights::None => None,
        }
    }

    /// Samples `f((ξ_j, x̃)_u)` for every node, in node order.
    pub fn sample(&self, f: &dyn BlackBox, anchor: &Anchor) -> Result<Vec<Complex64>> {
        let d = f.dim();
        if self.dims.len() + anchor.dims.len() != d || !self.dims.is_disjoint(&anchor.dims) {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: self.dims.len() + anchor.dims.len(),
            });
        }
        let m = self.num_nodes();
        let t = self.dims.len();
        if t > MAX_DIMS {
            return Err(Error::InvalidParameter(format!("at most {MAX_DIMS} active dimensions")));
        }
        let mut out = Vec::with_capacity(m);
        let mut start = 0;
        while start < m {
            let end = (start + SAMPLE_CHUNK).min(m);
            let mut pts = vec![0.0; (end - start) * d];
            crate::par::for_chunks(&mut pts, d, |i, row| {
                let mut xi = [0.0f64; MAX_DIMS];
                self.node(start + i, &mut xi[..t]);
                for (c, &j) in self.dims.dims().iter().enumerate() {
                    row[j] = xi[c];
                }
                for (&j, &x) in anchor.dims.dims().iter().zip(&anchor.values) {
                    row[j] = x;
                }
            });
            out.extend(f.evaluate_batch(&pts));
            start = end;
        }
        Ok(out)
    }
}

/// Builds a rule for a candidate set.
pub trait RuleBuilder: Send + Sync + fmt::Debug {
    fn name(&self) -> &str;
    fn build(
        &self,
        k_set: &IndexSet,
        basis: &ProductBasis,
        rng: &mut StreamRng,
    ) -> Result<CubatureRule>;
}

/// Reconstruction method registry.
#[derive(Clone, Debug)]
pub enum Method {
    /// `⌈|K| ln |K|⌉` random nodes, least squares.
    Mc,
    /// Reconstructing rank-1 lattice.
    R1l,
    /// `⌈m ln m⌉` random nodes with `m = Σ_k 2^{‖k‖₀}`, least squares.
    Cmc,
    Custom(Arc<dyn RuleBuilder>),
}

impl Method {
    pub fn name(&self) -> &str {
        match self {
            Method::Mc => "mc",
            Method::R1l => "r1l",
            Method::Cmc => "cmc",
            Method::Custom(b) => b.name(),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mc" => Ok(Method::Mc),
            "r1l" => Ok(Method::R1l),
            "cmc" => Ok(Method::Cmc),
            other => Err(Error::InvalidParameter(format!("unknown method {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct RuleOptions {
    pub lattice_m_cap: u64,
    pub lsq: LsqOptions,
}

impl Default for RuleOptions {
    fn default() -> Self {
        RuleOptions {
            lattice_m_cap: DEFAULT_M_CAP,
            lsq: LsqOptions::default(),
        }
    }
}

pub fn build_rule(
    method: &Method,
    k_set: &IndexSet,
    basis: &ProductBasis,
    opts: &RuleOptions,
    rng: &mut StreamRng,
) -> Result<CubatureRule> {
    match method {
        Method::R1l => {
            if !basis.is_fourier_on(k_set.dims()) {
                return Err(Error::InvalidParameter(
                    "rank-1 lattices require the Fourier basis".into(),
                ));
            }
            let l = build_rank1_lattice(k_set, opts.lattice_m_cap)?;
            Ok(CubatureRule::lattice(k_set.dims().clone(), l, basis))
        }
        Method::Mc => Ok(mc_rule(k_set, basis, false, rng)),
        Method::Cmc => Ok(mc_rule(k_set, basis, true, rng)),
        Method::Custom(b) => b.build(k_set, basis, rng),
    }
}
