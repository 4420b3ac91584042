use super::lsqr::{cgls, LinearOperator, LsqOptions};
use super::{Backend, CubatureRule};
use crate::blackbox::BlackBox;
use crate::bopb::{Anchor, ProductBasis};
use crate::error::{Error, Result};
use crate::index::IndexSet;
use crate::par;
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

/// Approximated projected coefficients, aligned with the order of `K`.
#[derive(Clone, Debug)]
pub struct ProjectedCoefficients {
    pub values: Vec<Complex64>,
    pub anchor: Anchor,
    pub samples: u64,
}

/// A rule prepared for a fixed candidate set; reused across anchors.
pub struct Evaluator {
    kind: Kind,
}

enum Kind {
    Fft {
        fft: Arc<dyn Fft<f64>>,
        bins: Vec<usize>,
        m: usize,
    },
    Direct {
        rule: CubatureRule,
        k_set: IndexSet,
        basis: ProductBasis,
    },
    Lsq {
        table: FactorTable,
        opts: LsqOptions,
    },
}

impl Evaluator {
    pub fn new(
        rule: &CubatureRule,
        k_set: &IndexSet,
        basis: &ProductBasis,
        lsq: LsqOptions,
    ) -> Result<Self> {
        if rule.dims() != k_set.dims() {
            return Err(Error::InvalidParameter(format!(
                "rule on {} but candidates on {}",
                rule.dims(),
                k_set.dims()
            )));
        }
        let kind = match rule.backend() {
            Backend::LatticeFft => {
                let l = rule.lattice_params().expect("lattice backend");
                let m = l.m as usize;
                let bins = k_set.iter().map(|k| l.bin(k) as usize).collect();
                let fft = FftPlanner::new().plan_fft_forward(m);
                Kind::Fft { fft, bins, m }
            }
            Backend::Direct => Kind::Direct {
                rule: rule.clone(),
                k_set: k_set.clone(),
                basis: basis.clone(),
            },
            Backend::LeastSquares => Kind::Lsq {
                table: FactorTable::new(rule, k_set, basis),
                opts: lsq,
            },
        };
        Ok(Evaluator { kind })
    }

    /// Coefficients from samples taken at the rule's nodes.
    pub fn apply(&self, y: &[Complex64]) -> Vec<Complex64> {
        match &self.kind {
            Kind::Fft { fft, bins, m } => {
                assert_eq!(y.len(), *m);
                let mut buf = y.to_vec();
                fft.process(&mut buf);
                let s = 1.0 / *m as f64;
                bins.iter().map(|&b| buf[b] * s).collect()
            }
            Kind::Direct { rule, k_set, basis } => {
                let t = rule.dims().len();
                let m = rule.num_nodes();
                let nodes: Vec<f64> = {
                    let mut v = vec![0.0; m * t];
                    if t > 0 {
                        par::for_chunks(&mut v, t, |j, row| rule.node(j, row));
                    }
                    v
                };
                let dims = rule.dims().dims();
                par::map_range(k_set.len(), |i| {
                    let k = k_set.get(i);
                    let mut acc = Complex64::new(0.0, 0.0);
                    for j in 0..m {
                        let xi = &nodes[j * t..(j + 1) * t];
                        let w = rule.weight(j).expect("weighted rule");
                        acc += w * y[j] * basis.eval_unchecked(dims, k, xi).conj();
                    }
                    acc
                })
            }
            Kind::Lsq { table, opts } => cgls(table, y, opts).0,
        }
    }
}

/// Prepares the rule, samples `f` at the anchor and evaluates coefficients.
pub fn projected_coefficients(
    rule: &CubatureRule,
    f: &dyn BlackBox,
    basis: &ProductBasis,
    anchor: &Anchor,
    k_set: &IndexSet,
    lsq: LsqOptions,
) -> Result<ProjectedCoefficients> {
    let ev = Evaluator::new(rule, k_set, basis, lsq)?;
    let y = rule.sample(f, anchor)?;
    Ok(ProjectedCoefficients {
        values: ev.apply(&y),
        anchor: anchor.clone(),
        samples: y.len() as u64,
    })
}

/// Matrix-free `A_{j,k} = Φ_{u,k}(ξ_j)` from per-dimension value tables.
pub(crate) struct FactorTable {
    rows: usize,
    cols: usize,
    /// Per component: `rows × widths[c]` values, row-major.
    tables: Vec<Vec<Complex64>>,
    widths: Vec<usize>,
    /// Non-constant factors of column `i` are `factors[offsets[i]..offsets[i+1]]`.
    offsets: Vec<usize>,
    factors: Vec<(u32, u32)>,
}

/// Rows per partial sum in `A^H r`; fixed so results do not depend on threads.
const ADJ_CHUNK: usize = 1024;

impl FactorTable {
    fn new(rule: &CubatureRule, k_set: &IndexSet, basis: &ProductBasis) -> Self {
        let dims = rule.dims().dims();
        let t = dims.len();
        let rows = rule.num_nodes();
        let mut values: Vec<Vec<i64>> = vec![Vec::new(); t];
        for k in k_set.iter() {
            for (c, &v) in k.iter().enumerate() {
                values[c].push(v);
            }
        }
        for v in values.iter_mut() {
            v.sort_unstable();
            v.dedup();
        }
        let mut offsets = vec![0];
        let mut factors = Vec::new();
        for k in k_set.iter() {
            for (c, &v) in k.iter().enumerate() {
                if v != 0 || !basis.factor(dims[c]).unit_at_zero() {
                    let idx = values[c].binary_search(&v).unwrap();
                    factors.push((c as u32, idx as u32));
                }
            }
            offsets.push(factors.len());
        }
        let mut nodes = vec![0.0; rows * t];
        if t > 0 {
            par::for_chunks(&mut nodes, t, |j, row| rule.node(j, row));
        }
        let widths: Vec<usize> = values.iter().map(|v| v.len()).collect();
        let tables = (0..t)
            .map(|c| {
                let b = basis.factor(dims[c]);
                let w = widths[c];
                let mut tab = vec![Complex64::new(0.0, 0.0); rows * w];
                par::for_chunks(&mut tab, w.max(1), |j, row| {
                    let x = nodes[j * t + c];
                    for (o, &v) in row.iter_mut().zip(&values[c]) {
                        *o = b.eval(v, x);
                    }
                });
                tab
            })
            .collect();
        FactorTable {
            rows,
            cols: k_set.len(),
            tables,
            widths,
            offsets,
            factors,
        }
    }

    #[inline]
    fn entry(&self, j: usize, i: usize) -> Complex64 {
        let mut p = Complex64::new(1.0, 0.0);
        for &(c, idx) in &self.factors[self.offsets[i]..self.offsets[i + 1]] {
            let c = c as usize;
            p *= self.tables[c][j * self.widths[c] + idx as usize];
        }
        p
    }
}

impl LinearOperator for FactorTable {
    fn rows(&self) -> usize {
        self.rows
    }

    fn cols(&self) -> usize {
        self.cols
    }

    fn apply(&self, x: &[Complex64], out: &mut [Complex64]) {
        par::fill(out, |j| {
            let mut s = Complex64::new(0.0, 0.0);
            for (i, &xi) in x.iter().enumerate() {
                s += self.entry(j, i) * xi;
            }
            s
        });
    }

    fn apply_adjoint(&self, r: &[Complex64], out: &mut [Complex64]) {
        let chunks = self.rows.div_ceil(ADJ_CHUNK);
        let partials = par::map_range(chunks, |ch| {
            let lo = ch * ADJ_CHUNK;
            let hi = (lo + ADJ_CHUNK).min(self.rows);
            let mut acc = vec![Complex64::new(0.0, 0.0); self.cols];
            for (j, &rj) in r.iter().enumerate().take(hi).skip(lo) {
                for (i, a) in acc.iter_mut().enumerate() {
                    *a += self.entry(j, i).conj() * rj;
                }
            }
            acc
        });
        out.iter_mut().for_each(|o| *o = Complex64::new(0.0, 0.0));
        for p in partials {
            for (o, v) in out.iter_mut().zip(p) {
                *o += v;
            }
        }
    }
}
