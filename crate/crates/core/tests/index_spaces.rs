use dimincr_core::index::{candidate_set, splice_full, DimSubset, IndexSet, SearchSpace, SpaceKind};
use proptest::prelude::*;

/// Exact reference sizes (d = 10, γ = 1, unsigned), from an independent
/// dynamic program over rationals. Columns: no cap, d̃ = 4, d̃ = 2.
const SIZES_D10: &[(&str, f64, [u64; 3])] = &[
    ("grid", 8.0, [3_486_784_401, 924_561, 2_961]),
    ("grid", 16.0, [2_015_993_900_449, 14_265_761, 11_681]),
    ("grid", 32.0, [1_531_578_985_264_449, 224_179_521, 46_401]),
    ("l2", 4.0, [43_154, 9_161, 401]),
    ("l2", 6.0, [1_053_323, 56_401, 1_051]),
    ("l2", 8.0, [11_887_373, 194_286, 1_926]),
    ("l1", 8.0, [43_758, 22_761, 1_341]),
    ("l1", 12.0, [646_646, 133_441, 3_091]),
    ("l1", 16.0, [5_311_735, 454_961, 5_561]),
    ("lhalf", 32.0, [51_063, 49_551, 6_891]),
    ("lhalf", 48.0, [344_563, 272_911, 16_141]),
    ("lhalf", 64.0, [1_549_790, 929_831, 28_991]),
    ("hc", 8.0, [109_824, 18_771, 981]),
    ("hc", 16.0, [417_664, 58_451, 2_411]),
    ("hc", 32.0, [1_517_568, 172_296, 5_676]),
];

fn space(kind: &str, d: usize, n: f64) -> SearchSpace {
    match kind {
        "grid" => SearchSpace::full_grid(d, n),
        "l2" => SearchSpace::lp_ball(d, 2.0, n, vec![1.0]),
        "l1" => SearchSpace::lp_ball(d, 1.0, n, vec![1.0]),
        "lhalf" => SearchSpace::lp_ball(d, 0.5, n, vec![1.0]),
        "hc" => SearchSpace::hyperbolic_cross(d, n, vec![1.0]),
        _ => unreachable!(),
    }
    .unwrap()
}

#[test]
fn table1_exact_counts() {
    for (kind, n, counts) in SIZES_D10 {
        for (cap, want) in [None, Some(4), Some(2)].into_iter().zip(counts) {
            let mut s = space(kind, 10, *n);
            if let Some(c) = cap {
                s = s.with_cap(c).unwrap();
            }
            let got = s.cardinality();
            assert!(!got.saturated);
            assert_eq!(got.value, *want, "{kind} n={n} cap={cap:?}");
        }
    }
}

#[test]
fn symmetric_cross_size() {
    let s = SearchSpace::symmetric_hyperbolic_cross(10, 4, 0.5).unwrap();
    assert_eq!(s.cardinality().value, 8801);
    assert_eq!(s.enumerate(100_000).unwrap().len(), 8801);
}

fn binom(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn grid_closed_forms() {
    for d in 1..=4 {
        for n in 1..=6u64 {
            let g = SearchSpace::full_grid(d, n as f64).unwrap();
            assert_eq!(g.cardinality().value, (n + 1).pow(d as u32));
            let gs = g.clone().with_signed(true).unwrap();
            assert_eq!(gs.cardinality().value, (2 * n + 1).pow(d as u32));
            for cap in 0..=d {
                let want: u64 = (0..=cap as u64).map(|j| binom(d as u64, j) * n.pow(j as u32)).sum();
                let c = g.clone().with_cap(cap).unwrap();
                assert_eq!(c.cardinality().value, want);
                assert_eq!(c.enumerate(1 << 20).unwrap().len() as u64, want);
            }
        }
    }
}

/// Independent floating-point membership with a loose boundary tolerance.
fn brute_member(kind: &SpaceKind, k: &[i64], n: f64, gamma: &[f64], cap: Option<usize>, signed: bool) -> bool {
    if !signed && k.iter().any(|&v| v < 0) {
        return false;
    }
    if let Some(c) = cap {
        if k.iter().filter(|&&v| v != 0).count() > c {
            return false;
        }
    }
    let a: Vec<f64> = k.iter().zip(gamma).map(|(&v, g)| v.abs() as f64 / g).collect();
    let tol = 1e-9;
    match kind {
        SpaceKind::FullGrid => k.iter().all(|&v| v.abs() as f64 <= n + tol),
        SpaceKind::HyperbolicCross | SpaceKind::SymmetricHyperbolicCross { .. } => {
            a.iter().map(|x| x.max(1.0)).product::<f64>() <= n * (1.0 + tol)
        }
        SpaceKind::LpBall { p } if p.is_infinite() => a.iter().all(|x| *x <= n * (1.0 + tol)),
        SpaceKind::LpBall { p } => a.iter().map(|x| x.powf(*p)).sum::<f64>() <= n.powf(*p) * (1.0 + tol),
    }
}

fn box_members(d: usize, r: i64, signed: bool) -> Vec<Vec<i64>> {
    let lo = if signed { -r } else { 0 };
    let mut out = vec![vec![]];
    for _ in 0..d {
        out = out
            .into_iter()
            .flat_map(|p| (lo..=r).map(move |v| {
                let mut q = p.clone();
                q.push(v);
                q
            }))
            .collect();
    }
    out
}

fn arb_space() -> impl Strategy<Value = SearchSpace> {
    let kind = prop_oneof![
        Just(SpaceKind::FullGrid),
        Just(SpaceKind::HyperbolicCross),
        Just(SpaceKind::LpBall { p: 1.0 }),
        Just(SpaceKind::LpBall { p: 2.0 }),
        Just(SpaceKind::LpBall { p: 0.5 }),
        Just(SpaceKind::LpBall { p: f64::INFINITY }),
    ];
    (kind, 1usize..=4, 1u32..=6, proptest::collection::vec(prop_oneof![Just(0.5), Just(1.0), Just(2.0)], 4), proptest::option::of(0usize..=3), any::<bool>())
        .prop_map(|(kind, d, n, g, cap, signed)| {
            SearchSpace::new(kind, d, n as f64, g[..d].to_vec(), cap, signed).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn membership_matches_enumeration_and_brute_force(s in arb_space()) {
        let d = s.d();
        let r = (0..d).map(|j| s.extent_of(j) as i64).max().unwrap() + 1;
        let all = s.enumerate(1 << 22).unwrap();
        prop_assert_eq!(all.len() as u64, s.cardinality().value);
        let mut count = 0usize;
        for k in box_members(d, r, s.is_signed()) {
            let c = s.contains(&k).unwrap();
            prop_assert_eq!(c, all.contains(&k));
            prop_assert_eq!(c, brute_member(s.kind(), &k, s.n(), s.gamma(), s.dtilde(), s.is_signed()));
            count += usize::from(c);
        }
        prop_assert_eq!(count, all.len());
    }

    #[test]
    fn projection_contains_restrictions(s in arb_space(), mask in 1u32..16) {
        let d = s.d();
        let u: Vec<usize> = (0..d).filter(|j| mask & (1 << j) != 0).collect();
        prop_assume!(!u.is_empty());
        let u = DimSubset::new(u).unwrap();
        let p = s.project(&u).unwrap();
        let proj = p.enumerate(1 << 22).unwrap();
        prop_assert_eq!(proj.len() as u64, p.cardinality().value);
        let all = s.enumerate(1 << 22).unwrap();
        prop_assert!(all.project(&u).unwrap().is_subset(&proj));
        for k in proj.iter() {
            prop_assert!(p.contains(k));
        }
    }

    #[test]
    fn candidate_set_is_filtered_product(s in arb_space(), mask in 1u32..16, seed in any::<u64>()) {
        let d = s.d();
        prop_assume!(d >= 2);
        let u: Vec<usize> = (0..d).filter(|j| mask & (1 << j) != 0).collect();
        prop_assume!(!u.is_empty() && u.len() < d);
        let u = DimSubset::new(u).unwrap();
        let v = u.complement(d);
        let pick = |set: IndexSet, salt: u64| {
            let keep: Vec<Vec<i64>> = set.iter().enumerate()
                .filter(|(i, _)| (seed.rotate_left(*i as u32 % 64) ^ salt) & 1 == 1 || *i == 0)
                .map(|(_, k)| k.to_vec()).collect();
            IndexSet::from_members(set.dims().clone(), keep).unwrap()
        };
        let a = pick(s.project(&u).unwrap().enumerate(1 << 20).unwrap(), 0);
        let b = pick(s.project(&v).unwrap().enumerate(1 << 20).unwrap(), 1);
        let k = candidate_set(&a, &b, &s).unwrap();
        let w = u.union(&v);
        let pw = s.project(&w).unwrap();
        for x in k.iter() {
            prop_assert!(pw.contains(x));
        }
        prop_assert!(k.project(&u).unwrap().is_subset(&a));
        prop_assert!(k.project(&v).unwrap().is_subset(&b));
        let sorted: Vec<Vec<i64>> = k.to_vecs();
        let mut resorted = sorted.clone();
        resorted.sort();
        prop_assert_eq!(sorted, resorted);
    }

    #[test]
    fn splice_round_trip(k in proptest::collection::vec(-50i64..50, 1..8), mask in any::<u8>()) {
        let d = k.len();
        let u = DimSubset::new((0..d).filter(|j| mask & (1 << j) != 0).collect()).unwrap();
        let uc = u.complement(d);
        let ku: Vec<i64> = u.dims().iter().map(|&j| k[j]).collect();
        let kc: Vec<i64> = uc.dims().iter().map(|&j| k[j]).collect();
        prop_assert_eq!(splice_full(d, &u, &ku, &kc).unwrap(), k);
    }
}
