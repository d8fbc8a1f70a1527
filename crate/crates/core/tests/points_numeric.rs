use coble_core::gopel::FanoFamily;
use coble_core::linalg::{det, numerical_rank};
use coble_core::points::*;
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type C = Complex<f64>;

fn rc(r: &mut ChaCha8Rng) -> C {
    Complex::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0))
}

fn cfg1(r: &mut ChaCha8Rng) -> PointConfig1<C> {
    PointConfig1::new(std::array::from_fn(|_| rc(r))).unwrap()
}

fn cfg2(r: &mut ChaCha8Rng) -> PointConfig2<C> {
    PointConfig2::new(std::array::from_fn(|_| std::array::from_fn(|_| rc(r)))).unwrap()
}

#[test]
fn segre_relation_on_tableau_image() {
    let mut r = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..50 {
        let t = standard_invariants(&cfg1(&mut r));
        let ev = term_evaluation(&segre_terms(&t));
        assert!(ev.normalized() < 1e-12);
    }
    let t: [C; 5] = std::array::from_fn(|_| rc(&mut r));
    assert!(term_evaluation(&segre_terms(&t)).normalized() > 1e-3);
}

#[test]
fn tableau_invariants_are_weight_one_under_mobius_maps() {
    let mut r = ChaCha8Rng::seed_from_u64(32);
    for _ in 0..10 {
        let cfg = cfg1(&mut r);
        let (a, b, c) = (rc(&mut r), rc(&mut r), rc(&mut r));
        let d = (Complex::new(1.0, 0.0) + b * c) / a;
        let moved: [C; 6] = cfg.coords().map(|x| (a * x + b) / (c * x + d));
        let factor: C = cfg.coords().iter().map(|&x| c * x + d).product();
        let moved = PointConfig1::new(moved).unwrap();
        for n in Tableau::all() {
            let lhs = tableau_invariant(&n, &moved);
            let rhs = tableau_invariant(&n, &cfg) / factor;
            assert!((lhs - rhs).norm() < 1e-9 * rhs.norm());
        }
    }
}

#[test]
fn all_tableaux_span_five_dimensions() {
    let mut r = ChaCha8Rng::seed_from_u64(33);
    let rows: Vec<Vec<C>> = (0..30)
        .map(|_| {
            let cfg = cfg1(&mut r);
            Tableau::all().iter().map(|n| tableau_invariant(n, &cfg)).collect()
        })
        .collect();
    assert_eq!(numerical_rank(&rows, 1e-8).rank, 5);
}

#[test]
fn brackets_scale_by_determinant() {
    let mut r = ChaCha8Rng::seed_from_u64(34);
    let cfg = cfg2(&mut r);
    let a: [[C; 3]; 3] = std::array::from_fn(|_| std::array::from_fn(|_| rc(&mut r)));
    let moved = cfg.transformed(&a).unwrap();
    let d = det(&a, 3);
    let f = FanoFamily::reference();
    let lhs = g_fano(&moved, &f);
    let rhs = d.powi(7) * g_fano(&cfg, &f);
    assert!((lhs - rhs).norm() < 1e-9 * rhs.norm());
    // multilinear in each argument
    let mut v = *cfg.vectors();
    let s = rc(&mut r);
    v[0] = v[0].map(|x| x * s);
    let scaled = PointConfig2::new(v).unwrap();
    let b0 = bracket(&cfg, 1, 2, 3).unwrap();
    assert!((bracket(&scaled, 1, 2, 3).unwrap() - s * b0).norm() < 1e-12 * b0.norm().max(1.0));
    assert!((bracket(&cfg, 3, 1, 2).unwrap() - b0).norm() < 1e-12);
}

#[test]
fn bracket_invariants_span_fifteen_dimensions() {
    let mut r = ChaCha8Rng::seed_from_u64(35);
    let rows: Vec<Vec<C>> = (0..60).map(|_| bracket_invariants(&cfg2(&mut r))).collect();
    let rank = numerical_rank(&rows, 1e-8);
    assert_eq!(rank.rank, 15);
    assert!(rank.gap() > 1e6);
}
