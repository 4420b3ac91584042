use std::f64::consts::PI;

/// Cardinal B-spline `M_m` of order `m` supported on `[0, m]`, via
/// `M_m(y) = (y M_{m-1}(y) + (m-y) M_{m-1}(y-1)) / (m-1)`.
pub fn cardinal_bspline(m: usize, y: f64) -> f64 {
    assert!(m >= 1);
    if !(0.0..m as f64).contains(&y) {
        return 0.0;
    }
    // b[i] = M_j(y - i)
    let mut b = [0.0f64; 32];
    assert!(m < b.len());
    for (i, bi) in b.iter_mut().enumerate().take(m) {
        let z = y - i as f64;
        *bi = if (0.0..1.0).contains(&z) { 1.0 } else { 0.0 };
    }
    for j in 2..=m {
        let jf = j as f64;
        for i in 0..=(m - j) {
            let z = y - i as f64;
            b[i] = (z * b[i] + (jf - z) * b[i + 1]) / (jf - 1.0);
        }
    }
    b[0]
}

/// `C_m = (Σ_k sinc(πk/m)^{2m})^{-1/2} = (m M_{2m}(m))^{-1/2}`; the series is
/// the Fourier–Parseval form of `∫ M_m(y)² dy = M_{2m}(m)`.
pub fn bspline_norm_constant(m: usize) -> f64 {
    (m as f64 * cardinal_bspline(2 * m, m as f64)).sqrt().recip()
}

fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        x.sin() / x
    }
}

/// `C_m sinc(πk/m)^m (-1)^k`.
pub fn bspline_fourier_coefficient(m: usize, k: i64) -> f64 {
    if k != 0 && k % m as i64 == 0 {
        return 0.0;
    }
    let s = sinc(PI * k as f64 / m as f64).powi(m as i32);
    let sign = if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    bspline_norm_constant(m) * s * sign
}

/// `N_m(x) = C_m m M_m(m (x mod 1))`, the 1-periodic B-spline of unit norm.
#[derive(Clone, Copy, Debug)]
pub struct PeriodicBSpline {
    m: usize,
    scale: f64,
}

impl PeriodicBSpline {
    pub fn new(m: usize) -> Self {
        PeriodicBSpline {
            m,
            scale: bspline_norm_constant(m) * m as f64,
        }
    }

    pub fn order(&self) -> usize {
        self.m
    }

    pub fn eval(&self, x: f64) -> f64 {
        let m = self.m as f64;
        self.scale * cardinal_bspline(self.m, (m * x.rem_euclid(1.0)).min(m.next_down()))
    }

    pub fn coefficient(&self, k: i64) -> f64 {
        bspline_fourier_coefficient(self.m, k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hat_function() {
        assert_eq!(cardinal_bspline(2, 1.0), 1.0);
        assert_eq!(cardinal_bspline(2, 0.5), 0.5);
        assert_eq!(cardinal_bspline(2, 2.0), 0.0);
        assert!((cardinal_bspline(4, 2.0) - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn unit_mass() {
        for m in 1..=8 {
            let n = 20000;
            let h = m as f64 / n as f64;
            let s: f64 = (0..n).map(|i| cardinal_bspline(m, (i as f64 + 0.5) * h)).sum::<f64>() * h;
            assert!((s - 1.0).abs() < 1e-6, "m = {m}: {s}");
        }
    }

    #[test]
    fn c2_closed_form() {
        assert!((bspline_norm_constant(2) - 3f64.sqrt() / 2.0).abs() < 1e-15);
        assert_eq!(bspline_fourier_coefficient(2, 2), 0.0);
        assert_eq!(bspline_fourier_coefficient(2, -4), 0.0);
    }
}
