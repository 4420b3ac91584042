use dimincr_core::bopb::draw_anchor;
use dimincr_core::cubature::{
    build_rank1_lattice, build_rule, exactness_check, projected_coefficients, projection_error_term,
    retained_term, Evaluator, LsqOptions, RuleOptions, DEFAULT_M_CAP,
};
use dimincr_core::rng::{stream, StreamRng};
use dimincr_core::testfuncs::SparseFunction;
use dimincr_core::{BlackBox, Counted, CubatureRule, DimSubset, IndexSet, Method, ProductBasis};
use num_complex::Complex64;
use rand::seq::index::sample;
use rand::Rng;

const D: usize = 8;

fn random_dims(rng: &mut StreamRng, tmax: usize) -> DimSubset {
    let t = rng.gen_range(1..=tmax);
    DimSubset::new(sample(rng, D, t).into_vec()).unwrap()
}

fn random_k(rng: &mut StreamRng, u: &DimSubset, size: usize, amp: i64, signed: bool) -> IndexSet {
    let lo = if signed { -amp } else { 0 };
    let members: Vec<Vec<i64>> = (0..size)
        .map(|_| (0..u.len()).map(|_| rng.gen_range(lo..=amp)).collect())
        .collect();
    IndexSet::from_members(u.clone(), members).unwrap()
}

/// A sparse function whose terms partly extend members of `k` and partly do not.
fn random_sparse(rng: &mut StreamRng, basis: &ProductBasis, k: &IndexSet, terms: usize) -> SparseFunction {
    let u = k.dims().dims();
    let signed = basis.is_signed();
    let mut out: Vec<(Vec<i64>, Complex64)> = Vec::new();
    while out.len() < terms {
        let mut h: Vec<i64> = (0..D)
            .map(|_| if signed { rng.gen_range(-6..=6) } else { rng.gen_range(0..=6) })
            .collect();
        if rng.gen_bool(0.6) {
            let kk = k.get(rng.gen_range(0..k.len()));
            for (p, &j) in u.iter().enumerate() {
                h[j] = kk[p];
            }
        }
        if out.iter().any(|(g, _)| *g == h) {
            continue;
        }
        let c = if basis.is_real() {
            Complex64::new(rng.gen_range(-2.0..2.0), 0.0)
        } else {
            Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))
        };
        out.push((h, c));
    }
    SparseFunction::new(basis.clone(), out).unwrap()
}

#[test]
fn lattice_rules_are_exact_on_their_candidates() {
    let basis = ProductBasis::fourier(D);
    let mut rng = stream(1, &[]);
    for _ in 0..40 {
        let u = random_dims(&mut rng, 5);
        let size = rng.gen_range(1..=120);
        let k = random_k(&mut rng, &u, size, 64, true);
        let l = build_rank1_lattice(&k, DEFAULT_M_CAP).unwrap();
        assert!(l.reconstructs(&k));
        let mut bins: Vec<u64> = k.iter().map(|x| l.bin(x)).collect();
        bins.sort_unstable();
        bins.dedup();
        assert_eq!(bins.len(), k.len());
        let rule = CubatureRule::lattice(u, l, &basis);
        assert!(exactness_check(&rule, &k, &basis).unwrap() <= 1e-12);
    }
}

#[test]
fn lattice_fft_matches_direct_summation() {
    let basis = ProductBasis::fourier(D);
    let mut rng = stream(2, &[]);
    for _ in 0..50 {
        let u = random_dims(&mut rng, 4);
        let size = rng.gen_range(1..=64);
        let k = random_k(&mut rng, &u, size, 12, true);
        let f = random_sparse(&mut rng, &basis, &k, 10);
        let rule = CubatureRule::lattice(u.clone(), build_rank1_lattice(&k, DEFAULT_M_CAP).unwrap(), &basis);
        let direct = rule.as_direct().unwrap();
        let anchor = draw_anchor(&basis, &u.complement(D), &mut rng);
        let bb = Counted::new(&f);
        let fast = projected_coefficients(&rule, &bb, &basis, &anchor, &k, LsqOptions::default()).unwrap();
        let slow = projected_coefficients(&direct, &bb, &basis, &anchor, &k, LsqOptions::default()).unwrap();
        for (a, b) in fast.values.iter().zip(&slow.values) {
            assert!((a - b).norm() <= 1e-10);
        }
        assert_eq!(bb.evaluations(), fast.samples + slow.samples);
        assert_eq!(fast.samples, rule.num_nodes() as u64);
    }
}

/// Tensor Gauss–Chebyshev rule, exact for degrees below `2n` per dimension.
fn gauss_chebyshev(u: &DimSubset, n: usize) -> CubatureRule {
    let t = u.len();
    let m = n.pow(t as u32);
    let mut nodes = Vec::with_capacity(m * t);
    for j in 0..m {
        let mut r = j;
        for _ in 0..t {
            nodes.push((std::f64::consts::PI * ((r % n) as f64 + 0.5) / n as f64).cos());
            r /= n;
        }
    }
    CubatureRule::direct(u.clone(), nodes, vec![Complex64::new(1.0 / m as f64, 0.0); m]).unwrap()
}

fn identity_residual(rule: &CubatureRule, f: &SparseFunction, basis: &ProductBasis, k: &IndexSet, rng: &mut StreamRng) -> f64 {
    let full = DimSubset::full(D);
    let u = k.dims().dims();
    let j_members: Vec<Vec<i64>> = f
        .terms()
        .iter()
        .filter(|(h, _)| k.contains(&u.iter().map(|&j| h[j]).collect::<Vec<_>>()))
        .filter(|_| rng.gen_bool(0.7))
        .map(|(h, _)| h.clone())
        .collect();
    let j = IndexSet::from_members(full, j_members).unwrap();
    let anchor = draw_anchor(basis, &k.dims().complement(D), rng);
    let bb = Counted::new(f);
    let approx = projected_coefficients(rule, &bb, basis, &anchor, k, LsqOptions::default()).unwrap();
    let kept = retained_term(f.terms(), basis, k, &j, &anchor);
    let psi = projection_error_term(f.terms(), rule, basis, k, &j, &anchor).unwrap();
    approx
        .values
        .iter()
        .zip(kept.iter().zip(&psi))
        .map(|(a, (r, p))| (a - r - p).norm())
        .fold(0.0, f64::max)
}

#[test]
fn approximation_splits_into_retained_and_projection_error() {
    let mut rng = stream(3, &[]);
    for case in 0..50 {
        let basis = if case % 2 == 0 { ProductBasis::fourier(D) } else { ProductBasis::chebyshev(D) };
        let u = random_dims(&mut rng, 3);
        let size = rng.gen_range(1..=30);
        let k = random_k(&mut rng, &u, size, 6, basis.is_signed());
        let f = random_sparse(&mut rng, &basis, &k, 10);
        let rule = if basis.is_fourier_on(&u) {
            CubatureRule::lattice(u.clone(), build_rank1_lattice(&k, DEFAULT_M_CAP).unwrap(), &basis)
        } else {
            gauss_chebyshev(&u, 8)
        };
        assert!(identity_residual(&rule, &f, &basis, &k, &mut rng) <= 1e-10, "case {case}");
    }
}

#[test]
fn projection_error_is_bounded_by_discarded_mass() {
    let basis = ProductBasis::fourier(D);
    let mut rng = stream(4, &[]);
    for _ in 0..20 {
        let u = random_dims(&mut rng, 3);
        let k = random_k(&mut rng, &u, 20, 6, true);
        let f = random_sparse(&mut rng, &basis, &k, 12);
        let rule = CubatureRule::lattice(u.clone(), build_rank1_lattice(&k, DEFAULT_M_CAP).unwrap(), &basis);
        let j = IndexSet::from_members(DimSubset::full(D), f.terms().iter().take(6).map(|(h, _)| h.clone())).unwrap();
        let outside: f64 = f.terms().iter().filter(|(h, _)| !j.contains(h)).map(|(_, c)| c.norm()).sum();
        let anchor = draw_anchor(&basis, &u.complement(D), &mut rng);
        let psi = projection_error_term(f.terms(), &rule, &basis, &k, &j, &anchor).unwrap();
        assert!(psi.iter().all(|p| p.norm() <= outside * (1.0 + 1e-12)));
    }
}

#[test]
fn least_squares_recovers_chebyshev_coefficients() {
    let basis = ProductBasis::chebyshev(D);
    let mut rng = stream(5, &[]);
    for _ in 0..5 {
        let u = DimSubset::new(vec![0, 3, 5]).unwrap();
        let k = random_k(&mut rng, &u, 40, 6, false);
        let keep: Vec<bool> = (0..k.len()).map(|_| rng.gen_bool(0.3)).collect();
        let mags: Vec<f64> = (0..k.len()).map(|_| rng.gen_range(1.0..10.0)).collect();
        let members: Vec<(Vec<i64>, Complex64)> = k
            .iter()
            .enumerate()
            .filter(|(i, _)| keep[*i])
            .map(|(i, kk)| {
                let mut h = vec![0; D];
                for (p, &j) in u.dims().iter().enumerate() {
                    h[j] = kk[p];
                }
                (h, Complex64::new(mags[i], 0.0))
            })
            .collect();
        let f = SparseFunction::new(basis.clone(), members).unwrap();
        let rule = build_rule(&Method::Cmc, &k, &basis, &RuleOptions::default(), &mut rng).unwrap();
        let anchor = draw_anchor(&basis, &u.complement(D), &mut rng);
        let bb = Counted::new(&f);
        let got = projected_coefficients(&rule, &bb, &basis, &anchor, &k, LsqOptions::default()).unwrap();
        let want = retained_term(f.terms(), &basis, &k, &IndexSet::from_members(DimSubset::full(D), f.terms().iter().map(|(h, _)| h.clone())).unwrap(), &anchor);
        let err = got.values.iter().zip(&want).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(err <= 1e-5, "least-squares error {err}");
        assert_eq!(bb.evaluations(), got.samples);
    }
}

#[test]
fn evaluator_is_reusable_across_anchors() {
    let basis = ProductBasis::fourier(D);
    let mut rng = stream(6, &[]);
    let u = DimSubset::new(vec![1, 2]).unwrap();
    let k = random_k(&mut rng, &u, 30, 10, true);
    let f = random_sparse(&mut rng, &basis, &k, 8);
    let rule = CubatureRule::lattice(u.clone(), build_rank1_lattice(&k, DEFAULT_M_CAP).unwrap(), &basis);
    let ev = Evaluator::new(&rule, &k, &basis, LsqOptions::default()).unwrap();
    for _ in 0..3 {
        let anchor = draw_anchor(&basis, &u.complement(D), &mut rng);
        let y = rule.sample(&Counted::new(&f), &anchor).unwrap();
        let once = projected_coefficients(&rule, &Counted::new(&f), &basis, &anchor, &k, LsqOptions::default()).unwrap();
        assert_eq!(ev.apply(&y), once.values);
    }
}

#[test]
fn monte_carlo_node_counts() {
    let basis = ProductBasis::chebyshev(2);
    let u = DimSubset::full(2);
    let k = IndexSet::from_members(u, vec![vec![0, 0], vec![1, 0], vec![2, 1]]).unwrap();
    let mut rng = stream(0, &[]);
    assert_eq!(build_rule(&Method::Cmc, &k, &basis, &RuleOptions::default(), &mut rng).unwrap().num_nodes(), 14);
    assert_eq!(build_rule(&Method::Mc, &k, &basis, &RuleOptions::default(), &mut rng).unwrap().num_nodes(), 4);
    assert!(build_rule(&Method::R1l, &k, &basis, &RuleOptions::default(), &mut rng).is_err());
}
