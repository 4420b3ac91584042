use dimincr_core::blackbox::from_fn;
use dimincr_core::detect::StepKind;
use dimincr_core::metrics::{coefficient_error, Norm};
use dimincr_core::rng::stream;
use dimincr_core::testfuncs::{sparse_random_function, SparseFunction};
use dimincr_core::*;

fn sparse_instance(d: usize, s_star: usize, seed: u64) -> (ProductBasis, SearchSpace, SparseFunction) {
    let basis = ProductBasis::fourier(d);
    let space = SearchSpace::symmetric_hyperbolic_cross(d, 4, 0.5).unwrap();
    let f = sparse_random_function(&basis, &space, s_star, (1.0, 10.0), 1 << 22, &mut stream(seed, &[42])).unwrap();
    (basis, space, f)
}

fn support(f: &SparseFunction) -> Vec<Vec<i64>> {
    f.terms().iter().map(|(k, _)| k.clone()).collect()
}

fn params(s: usize, seed: u64) -> AlgorithmParams {
    let mut p = AlgorithmParams::new(s);
    p.seed = seed;
    p
}

#[test]
fn recovers_sparse_fourier_functions() {
    let mut ok = 0;
    for seed in 0..50 {
        let (basis, space, f) = sparse_instance(6, 10, seed);
        let bb = Counted::new(&f);
        let res = run(&bb, &basis, &space, &params(10, seed)).unwrap();
        let linf = coefficient_error(&f, &res.index_set, &res.coefficients, Norm::Linf).unwrap();
        if res.index_set.to_vecs() == support(&f) && linf <= 1e-8 {
            ok += 1;
        }
    }
    assert!(ok >= 45, "{ok}/50 recovered");
}

#[test]
fn strategies_agree_on_sparse_functions() {
    for seed in 0..5 {
        let (basis, space, f) = sparse_instance(8, 12, 100 + seed);
        let sets: Vec<Vec<Vec<i64>>> = Strategy::ALL
            .iter()
            .map(|&st| {
                let mut p = params(12, seed);
                p.strategy = st;
                run(&Counted::new(&f), &basis, &space, &p).unwrap().index_set.to_vecs()
            })
            .collect();
        assert!(sets.windows(2).all(|w| w[0] == w[1]), "seed {seed}");
        assert_eq!(sets[0], support(&f));
    }
}

#[test]
fn identical_seeds_give_identical_results() {
    let (basis, space, f) = sparse_instance(5, 8, 7);
    let mut p = params(8, 3);
    p.strategy = Strategy::DataDrivenDyadic;
    let a = run(&Counted::new(&f), &basis, &space, &p).unwrap();
    let b = run(&Counted::new(&f), &basis, &space, &p).unwrap();
    assert_eq!(a.index_set, b.index_set);
    let bits = |r: &DetectionResult| r.coefficients.iter().map(|c| (c.re.to_bits(), c.im.to_bits())).collect::<Vec<_>>();
    assert_eq!(bits(&a), bits(&b));
    assert_eq!(a.total_samples, b.total_samples);
}

#[test]
fn detected_sets_form_a_containment_chain() {
    let (basis, space, f) = sparse_instance(6, 15, 9);
    for st in Strategy::ALL {
        let mut p = params(15, 1);
        p.strategy = st;
        p.recompute_final = true;
        let res = run(&Counted::new(&f), &basis, &space, &p).unwrap();
        let steps: Vec<_> = res.steps.iter().filter(|s| s.kind != StepKind::Recompute).collect();
        for (i, later) in steps.iter().enumerate() {
            for earlier in &steps[..i] {
                if earlier.dims.is_subset(&later.dims) && earlier.dims != later.dims {
                    let proj = later.detected.project(&earlier.dims).unwrap();
                    assert!(proj.is_subset(&earlier.detected), "{} into {}", later.dims, earlier.dims);
                }
            }
        }
        assert!(res.index_set.is_subset(&steps.last().unwrap().detected));
        assert!(res.index_set.len() <= 15);
    }
}

#[test]
fn sample_accounting_is_exact() {
    for method in [Method::R1l, Method::Mc] {
        let (basis, space, f) = sparse_instance(4, 6, 11);
        let bb = Counted::new(&f);
        let before = bb.evaluations();
        let mut p = params(6, 2);
        p.method = method;
        p.recompute_final = true;
        let res = run(&bb, &basis, &space, &p).unwrap();
        assert_eq!(res.total_samples, bb.evaluations() - before);
        assert_eq!(res.total_samples, res.steps.iter().map(|s| s.samples).sum::<u64>());
    }
}

#[test]
fn zero_function_detects_nothing() {
    let basis = ProductBasis::fourier(4);
    let space = SearchSpace::symmetric_hyperbolic_cross(4, 3, 1.0).unwrap();
    let zero = from_fn(4, |_| Complex64::new(0.0, 0.0));
    let res = run(&Counted::new(zero), &basis, &space, &params(5, 0)).unwrap();
    assert!(res.index_set.is_empty());
    assert!(res.coefficients.is_empty());
}

#[test]
fn single_basis_function() {
    let basis = ProductBasis::fourier(5);
    let space = SearchSpace::symmetric_hyperbolic_cross(5, 4, 1.0).unwrap();
    let h = vec![0, 3, -2, 0, 1];
    let f = SparseFunction::new(basis.clone(), vec![(h.clone(), Complex64::new(0.5, -0.25))]).unwrap();
    let mut p = params(3, 4);
    p.r = 1;
    let res = run(&Counted::new(&f), &basis, &space, &p).unwrap();
    assert_eq!(res.index_set.to_vecs(), vec![h]);
    assert!((res.coefficients[0] - Complex64::new(0.5, -0.25)).norm() < 1e-12);
    // Every single-component step found exactly one frequency.
    for st in res.steps.iter().filter(|s| s.kind == StepKind::Single) {
        assert_eq!(st.detected.len(), 1);
    }
}

#[test]
fn chebyshev_sparse_recovery_by_least_squares() {
    let basis = ProductBasis::chebyshev(4);
    let space = SearchSpace::full_grid(4, 6.0).unwrap().with_cap(2).unwrap();
    for seed in 0..3 {
        let f = sparse_random_function(&basis, &space, 8, (1.0, 10.0), 1 << 20, &mut stream(seed, &[5])).unwrap();
        let mut p = params(8, seed);
        p.method = Method::Cmc;
        let res = run(&Counted::new(&f), &basis, &space, &p).unwrap();
        assert_eq!(res.index_set.to_vecs(), support(&f));
        assert!(coefficient_error(&f, &res.index_set, &res.coefficients, Norm::Linf).unwrap() <= 1e-5);
    }
}

#[test]
fn invalid_configurations_are_rejected() {
    let cheb = ProductBasis::chebyshev(3);
    let grid = SearchSpace::full_grid(3, 4.0).unwrap();
    let f = from_fn(3, |_| Complex64::new(1.0, 0.0));
    let err = run(&Counted::new(&f), &cheb, &grid, &params(2, 0)).unwrap_err();
    assert!(matches!(err.root(), Error::InvalidParameter(_)));
    let signed = SearchSpace::symmetric_hyperbolic_cross(3, 2, 1.0).unwrap();
    assert!(run(&Counted::new(&f), &cheb, &signed, &params(2, 0)).is_err());
    let g = from_fn(2, |_| Complex64::new(1.0, 0.0));
    assert!(matches!(
        run(&Counted::new(&g), &cheb, &grid, &params(2, 0)),
        Err(Error::DimensionMismatch { .. })
    ));
    let mut p = params(4, 0);
    p.s_local = 3;
    assert!(p.validate().is_err());
}
