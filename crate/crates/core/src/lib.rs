//! Dimension-incremental detection of sparse expansions in bounded orthonormal
//! product bases.
//!
//! A black-box function `f: D^d -> C` is probed one group of dimensions at a
//! time. For each group the crate builds a cubature rule on a candidate index
//! set, evaluates projected coefficients at random anchors, and keeps the
//! indices whose magnitudes clear a threshold. Merging detected sets pairwise
//! reaches the full dimension with a sparse index set and its coefficients.
//!
//! Data parallelism (batch evaluation, matrix-free least squares, per-index
//! sums) goes through [`par`], which uses rayon with the `parallel` feature and
//! plain iterators without it. Results are bitwise identical in both modes.

pub mod blackbox;
pub mod bopb;
pub mod cubature;
pub mod detect;
pub mod error;
pub mod index;
pub mod metrics;
pub mod par;
pub mod rng;
pub mod testfuncs;
pub mod theory;

pub use blackbox::{BlackBox, Counted, Function};
pub use bopb::{Anchor, Basis1D, Chebyshev, Fourier, ProductBasis};
pub use cubature::{CubatureRule, Method, Rank1Lattice};
pub use detect::{run, AlgorithmParams, DetectionResult, Strategy};
pub use error::{Error, Result};
pub use index::{DimSubset, IndexSet, SearchSpace, SpaceKind};
pub use num_complex::Complex64;
