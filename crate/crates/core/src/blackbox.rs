//! Point-evaluation contract for the function under study.

use crate::par;
use num_complex::Complex64;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

/// A pure function `D^d -> C`.
pub trait Function: Send + Sync {
    fn dim(&self) -> usize;
    fn eval(&self, x: &[f64]) -> Complex64;
}

impl<T: Function + ?Sized> Function for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn eval(&self, x: &[f64]) -> Complex64 {
        (**self).eval(x)
    }
}

impl<T: Function + ?Sized> Function for Arc<T> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn eval(&self, x: &[f64]) -> Complex64 {
        (**self).eval(x)
    }
}

/// Batched evaluation with an exact call counter.
pub trait BlackBox: Send + Sync {
    fn dim(&self) -> usize;
    /// `points` is row-major with `dim()` columns. Returns one value per row
    /// and advances the counter by the number of rows.
    fn evaluate_batch(&self, points: &[f64]) -> Vec<Complex64>;
    fn evaluations(&self) -> u64;
    /// Whether rows may be evaluated concurrently.
    fn concurrency_safe(&self) -> bool;
}

/// Wraps a [`Function`] with an atomic evaluation counter.
pub struct Counted<F> {
    f: F,
    count: AtomicU64,
    concurrent: bool,
}

impl<F: Function> Counted<F> {
    pub fn new(f: F) -> Self {
        Counted {
            f,
            count: AtomicU64::new(0),
            concurrent: true,
        }
    }

    /// Forces row-by-row sequential evaluation.
    pub fn sequential(f: F) -> Self {
        Counted {
            concurrent: false,
            ..Counted::new(f)
        }
    }

    pub fn inner(&self) -> &F {
        &self.f
    }
}

impl<F: Function> BlackBox for Counted<F> {
    fn dim(&self) -> usize {
        self.f.dim()
    }

    fn evaluate_batch(&self, points: &[f64]) -> Vec<Complex64> {
        let d = self.f.dim().max(1);
        assert_eq!(points.len() % d, 0, "ragged point batch");
        let rows = points.len() / d;
        self.count.fetch_add(rows as u64, Ordering::Relaxed);
        if self.concurrent {
            par::map_range(rows, |i| self.f.eval(&points[i * d..(i + 1) * d]))
        } else {
            points.chunks_exact(d).map(|x| self.f.eval(x)).collect()
        }
    }

    fn evaluations(&self) -> u64 {
        self.count.load(Ordering::Relaxed)
    }

    fn concurrency_safe(&self) -> bool {
        self.concurrent
    }
}

/// Adapts a closure to [`Function`].
pub struct FnFunction<G> {
    d: usize,
    g: G,
}

pub fn from_fn<G>(d: usize, g: G) -> FnFunction<G>
where
    G: Fn(&[f64]) -> Complex64 + Send + Sync,
{
    FnFunction { d, g }
}

impl<G> Function for FnFunction<G>
where
    G: Fn(&[f64]) -> Complex64 + Send + Sync,
{
    fn dim(&self) -> usize {
        self.d
    }
    fn eval(&self, x: &[f64]) -> Complex64 {
        (self.g)(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counter_tracks_rows() {
        let bb = Counted::new(from_fn(2, |x| Complex64::new(x[0] + x[1], 0.0)));
        let v = bb.evaluate_batch(&[0.1, 0.2, 0.3, 0.4, 0.5, 0.6]);
        assert_eq!(v.len(), 3);
        assert_eq!(bb.evaluations(), 3);
        assert!((v[2].re - 1.1).abs() < 1e-15);
        let s = Counted::sequential(from_fn(2, |x| Complex64::new(x[0], 0.0)));
        assert!(!s.concurrency_safe());
        assert_eq!(s.evaluate_batch(&[1.0, 2.0]), vec![Complex64::new(1.0, 0.0)]);
    }
}
