use dimincr_core::bopb::{Basis1D, Chebyshev, Fourier, ProductBasis};
use dimincr_core::rng::stream;
use dimincr_core::DimSubset;
use num_complex::Complex64;
use rand::Rng;
use std::f64::consts::PI;

fn fourier_inner(k1: i64, k2: i64, m: usize) -> Complex64 {
    (0..m)
        .map(|j| {
            let x = j as f64 / m as f64;
            Fourier.eval(k1, x) * Fourier.eval(k2, x).conj()
        })
        .sum::<Complex64>()
        / m as f64
}

fn chebyshev_inner(k1: i64, k2: i64, m: usize) -> f64 {
    (0..m)
        .map(|j| {
            let x = (PI * (j as f64 + 0.5) / m as f64).cos();
            Chebyshev.eval(k1, x).re * Chebyshev.eval(k2, x).re
        })
        .sum::<f64>()
        / m as f64
}

#[test]
fn fourier_orthonormal_by_trapezoid() {
    assert!((fourier_inner(2, 2, 4096) - 1.0).norm() < 1e-12);
    for k1 in -12..=12 {
        for k2 in -12..=12 {
            let want = if k1 == k2 { 1.0 } else { 0.0 };
            assert!((fourier_inner(k1, k2, 64) - want).norm() < 1e-12, "{k1} {k2}");
        }
    }
}

#[test]
fn chebyshev_orthonormal_by_gauss_chebyshev() {
    assert!(chebyshev_inner(1, 3, 100_000).abs() < 1e-10);
    for k1 in 0..=20 {
        for k2 in 0..=20 {
            let want = if k1 == k2 { 1.0 } else { 0.0 };
            assert!((chebyshev_inner(k1, k2, 64) - want).abs() < 1e-12, "{k1} {k2}");
        }
    }
}

#[test]
fn product_values_respect_bounds() {
    let mut rng = stream(11, &[0]);
    for basis in [ProductBasis::fourier(5), ProductBasis::chebyshev(5)] {
        let signed = basis.is_signed();
        for _ in 0..10_000 {
            let t = rng.gen_range(1..=5);
            let u = DimSubset::new(rand::seq::index::sample(&mut rng, 5, t).into_vec()).unwrap();
            let k: Vec<i64> = (0..t)
                .map(|_| if signed { rng.gen_range(-40..=40) } else { rng.gen_range(0..=40) })
                .collect();
            let xi = basis.draw_points(&u, 1, &mut rng);
            let v = basis.eval_on(&u, &k, &xi).unwrap();
            assert!(v.norm() <= basis.bound_on(&u) * (1.0 + 1e-12));
        }
    }
    assert!((ProductBasis::chebyshev(3).bound() - 2f64.powf(1.5)).abs() < 1e-12);
    assert_eq!(ProductBasis::fourier(7).bound(), 1.0);
}

#[test]
fn product_is_factorwise() {
    let basis = ProductBasis::chebyshev(4);
    let x = [0.3, -0.7, 0.1, 0.9];
    let k = [2, 0, 5, 1];
    let want: f64 = (0..4).map(|j| Chebyshev::real(k[j], x[j])).product();
    assert!((basis.eval(&k, &x).re - want).abs() < 1e-14);
    let u = DimSubset::new(vec![0, 2]).unwrap();
    let got = basis.eval_on(&u, &[2, 5], &[0.3, 0.1]).unwrap().re;
    assert!((got - Chebyshev::real(2, 0.3) * Chebyshev::real(5, 0.1)).abs() < 1e-14);
}

#[test]
fn chebyshev_draws_follow_arcsine_law() {
    let mut rng = stream(2024, &[1]);
    let n = 100_000;
    let mut xs: Vec<f64> = (0..n).map(|_| Chebyshev.sample(&mut rng)).collect();
    xs.sort_by(f64::total_cmp);
    let cdf = |x: f64| 1.0 - x.clamp(-1.0, 1.0).acos() / PI;
    let ks = xs
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n as f64).abs().max((f - (i + 1) as f64 / n as f64).abs())
        })
        .fold(0.0, f64::max);
    assert!(ks <= 0.01, "KS distance {ks}");
    assert!(xs.iter().all(|x| (-1.0..=1.0).contains(x)));
}

#[test]
fn fourier_draws_are_uniform() {
    let mut rng = stream(5, &[2]);
    let n = 100_000;
    let mut xs: Vec<f64> = (0..n).map(|_| Fourier.sample(&mut rng)).collect();
    xs.sort_by(f64::total_cmp);
    let ks = xs
        .iter()
        .enumerate()
        .map(|(i, &x)| (x - i as f64 / n as f64).abs().max((x - (i + 1) as f64 / n as f64).abs()))
        .fold(0.0, f64::max);
    assert!(ks <= 0.01);
}

#[test]
#[should_panic]
fn chebyshev_has_no_negative_degrees() {
    let _ = Chebyshev::real(-1, 0.0);
}
