//! CGLS: conjugate gradients on the normal equations `A^H A x = A^H y`.

use num_complex::Complex64;

pub trait LinearOperator: Sync {
    fn rows(&self) -> usize;
    fn cols(&self) -> usize;
    fn apply(&self, x: &[Complex64], out: &mut [Complex64]);
    fn apply_adjoint(&self, r: &[Complex64], out: &mut [Complex64]);
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LsqOptions {
    pub max_iter: usize,
    /// Stop once `‖r‖ ≤ tol ‖y‖` or `‖A^H r‖ ≤ tol ‖A^H y‖`.
    pub tol: f64,
}

impl Default for LsqOptions {
    fn default() -> Self {
        LsqOptions {
            max_iter: 20,
            tol: 1e-6,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LsqReport {
    pub iterations: usize,
    pub rel_residual: f64,
    pub rel_normal_residual: f64,
}

fn norm_sq(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

pub fn cgls<A: LinearOperator + ?Sized>(
    a: &A,
    y: &[Complex64],
    opts: &LsqOptions,
) -> (Vec<Complex64>, LsqReport) {
    let zero = Complex64::new(0.0, 0.0);
    let (m, n) = (a.rows(), a.cols());
    assert_eq!(y.len(), m);
    let mut x = vec![zero; n];
    let mut r = y.to_vec();
    let mut s = vec![zero; n];
    a.apply_adjoint(&r, &mut s);
    let y_norm = norm_sq(y).sqrt();
    let mut gamma = norm_sq(&s);
    let s0 = gamma.sqrt();
    let mut p = s.clone();
    let mut q = vec![zero; m];
    let mut report = LsqReport {
        iterations: 0,
        rel_residual: if y_norm > 0.0 { 1.0 } else { 0.0 },
        rel_normal_residual: if s0 > 0.0 { 1.0 } else { 0.0 },
    };
    if s0 == 0.0 {
        return (x, report);
    }
    for it in 1..=opts.max_iter {
        a.apply(&p, &mut q);
        let qq = norm_sq(&q);
        if qq == 0.0 {
            break;
        }
        let alpha = gamma / qq;
        for (xi, pi) in x.iter_mut().zip(&p) {
            *xi += pi * alpha;
        }
        for (ri, qi) in r.iter_mut().zip(&q) {
            *ri -= qi * alpha;
        }
        a.apply_adjoint(&r, &mut s);
        let gamma_new = norm_sq(&s);
        report = LsqReport {
            iterations: it,
            rel_residual: norm_sq(&r).sqrt() / y_norm,
            rel_normal_residual: gamma_new.sqrt() / s0,
        };
        if report.rel_residual <= opts.tol || report.rel_normal_residual <= opts.tol {
            break;
        }
        let beta = gamma_new / gamma;
        for (pi, si) in p.iter_mut().zip(&s) {
            *pi = si + *pi * beta;
        }
        gamma = gamma_new;
    }
    (x, report)
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Dense {
        m: usize,
        n: usize,
        a: Vec<Complex64>,
    }

    impl LinearOperator for Dense {
        fn rows(&self) -> usize {
            self.m
        }
        fn cols(&self) -> usize {
            self.n
        }
        fn apply(&self, x: &[Complex64], out: &mut [Complex64]) {
            for (i, o) in out.iter_mut().enumerate() {
                *o = (0..self.n).map(|j| self.a[i * self.n + j] * x[j]).sum();
            }
        }
        fn apply_adjoint(&self, r: &[Complex64], out: &mut [Complex64]) {
            for (j, o) in out.iter_mut().enumerate() {
                *o = (0..self.m).map(|i| self.a[i * self.n + j].conj() * r[i]).sum();
            }
        }
    }

    #[test]
    fn solves_small_overdetermined_system() {
        let c = |re, im| Complex64::new(re, im);
        let a = Dense {
            m: 3,
            n: 2,
            a: vec![c(1.0, 0.0), c(0.0, 1.0), c(2.0, 0.0), c(1.0, 0.0), c(0.0, -1.0), c(3.0, 0.0)],
        };
        let x_true = [c(0.5, -1.0), c(2.0, 0.25)];
        let mut y = vec![c(0.0, 0.0); 3];
        a.apply(&x_true, &mut y);
        let (x, rep) = cgls(&a, &y, &LsqOptions { max_iter: 20, tol: 1e-14 });
        assert!(rep.iterations <= 3);
        for (u, v) in x.iter().zip(&x_true) {
            assert!((u - v).norm() < 1e-12);
        }
    }

    #[test]
    fn zero_rhs() {
        let a = Dense {
            m: 2,
            n: 1,
            a: vec![Complex64::new(1.0, 0.0); 2],
        };
        let (x, rep) = cgls(&a, &[Complex64::new(0.0, 0.0); 2], &LsqOptions::default());
        assert_eq!(x[0], Complex64::new(0.0, 0.0));
        assert_eq!(rep.iterations, 0);
    }
}
