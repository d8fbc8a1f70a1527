use coble_core::characteristics::*;
use coble_core::gopel::{fano_from_aronhold, FanoFamily};
use coble_core::linalg::numerical_rank;
use coble_core::modular::*;
use coble_core::theta::{random_period_matrix, random_phase_point, truncation_radius};
use coble_core::{PeriodMatrix, PhasePoint, ThetaEngine};
use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn c(s: &str) -> Characteristic {
    s.parse().unwrap()
}

fn azygetic_odd_sets(g: usize) -> Vec<CharacteristicSet> {
    let odds = enumerate_characteristics(g, ParityFilter::Odd).unwrap();
    let o = odds.members();
    match g {
        1 => vec![odds.clone()],
        2 => (0..o.len())
            .flat_map(|i| (i + 1..o.len()).map(move |j| (i, j)))
            .map(|(i, j)| CharacteristicSet::new(2, [o[i], o[j]]).unwrap())
            .collect(),
        _ => {
            let mut out = Vec::new();
            for i in 0..o.len() {
                for j in i + 1..o.len() {
                    for k in j + 1..o.len() {
                        if triple_sign(o[i], o[j], o[k]) == Sign::Minus {
                            out.push(CharacteristicSet::new(3, [o[i], o[j], o[k]]).unwrap());
                        }
                    }
                }
            }
            out
        }
    }
}

#[test]
fn jacobi_derivative_identities() {
    let engine = ThetaEngine::<f64>::default();
    let mut r = ChaCha8Rng::seed_from_u64(21);
    for g in 1..=3 {
        let sets = azygetic_odd_sets(g);
        for (k, s) in sets.iter().enumerate().step_by(if g == 3 { 37 } else { 1 }) {
            let tau = random_period_matrix(g, &mut r).unwrap();
            let chk = jacobi_derivative_check(&engine, &tau, s).unwrap();
            assert!(chk.residual < 1e-9, "g = {g}, set {k}: {:e}", chk.residual);
        }
    }
}

#[test]
fn heat_equation() {
    // ∂θ/∂τ_jj = (4πi)⁻¹ ∂²θ/∂z_j², by central differences
    let engine = ThetaEngine::<f64>::default();
    let mut r = ChaCha8Rng::seed_from_u64(22);
    let tau = random_period_matrix(2, &mut r).unwrap();
    let z = random_phase_point(2, &mut r).unwrap();
    let m = c("10;00");
    let h = 1e-3;
    for j in 0..2 {
        let mut tp = *tau.matrix();
        let mut tm = *tau.matrix();
        tp[j][j] += h;
        tm[j][j] -= h;
        let dt = (engine.theta(&PeriodMatrix::new(2, tp).unwrap(), &z, m).unwrap()
            - engine.theta(&PeriodMatrix::new(2, tm).unwrap(), &z, m).unwrap())
            / (2.0 * h);
        let shift = |d: f64| {
            let mut v = [Complex::new(0.0, 0.0); 3];
            v[..2].copy_from_slice(z.coords());
            v[j] += d;
            PhasePoint::new(2, v).unwrap()
        };
        let d2 = (engine.theta(&tau, &shift(h), m).unwrap() - 2.0 * engine.theta(&tau, &z, m).unwrap()
            + engine.theta(&tau, &shift(-h), m).unwrap())
            / (h * h);
        let rhs = d2 / Complex::new(0.0, 4.0 * std::f64::consts::PI);
        assert!((dt - rhs).norm() < 1e-5 * dt.norm().max(1.0), "{dt} vs {rhs}");
    }
}

#[test]
fn truncation_is_certified() {
    let engine = ThetaEngine::<f64>::default();
    let mut r = ChaCha8Rng::seed_from_u64(23);
    for g in 1..=3 {
        for _ in 0..3 {
            let tau = random_period_matrix(g, &mut r).unwrap();
            let z = random_phase_point(g, &mut r).unwrap();
            let spec = truncation_radius(&tau, &z, engine.tol()).unwrap();
            for idx in [0usize, 1, (1 << (2 * g)) - 1] {
                let m = Characteristic::from_index(g, idx).unwrap();
                let a = engine.theta_at_radius(&tau, &z, m, spec.radius);
                let b = engine.theta_at_radius(&tau, &z, m, spec.radius + 5);
                assert!((a - b).norm() <= spec.certified_tail_bound + 8.0 * f64::EPSILON * b.norm().max(1.0));
            }
        }
    }
}

#[test]
fn both_routes_to_fano_forms_agree() {
    let engine = ThetaEngine::<f64>::default();
    let mut r = ChaCha8Rng::seed_from_u64(24);
    let aronhold = reference_aronhold_set();
    let pi21 = std::f64::consts::PI.powi(21);
    for family in FanoFamily::all().iter().take(5) {
        let sys = fano_from_aronhold(&aronhold, family).unwrap();
        let tau = random_period_matrix(3, &mut r).unwrap();
        let consts = ThetaConstants::compute(&engine, &tau).unwrap();
        let direct = consts.h_gopel(&sys).unwrap() * pi21;
        let via = h_via_jacobian(&engine, &tau, &aronhold, family).unwrap();
        let res = (via - direct).norm().min((via + direct).norm()) / via.norm().max(direct.norm());
        assert!(res < 1e-9, "{res:e}");
    }
}

#[test]
fn riemann_relations_at_random_points() {
    let engine = ThetaEngine::<f64>::default();
    let mut r = ChaCha8Rng::seed_from_u64(25);
    let table = riemann_sign_table();
    assert_eq!(table.len(), 105);
    for _ in 0..3 {
        let tau = random_period_matrix(3, &mut r).unwrap();
        let consts = ThetaConstants::compute(&engine, &tau).unwrap();
        for (_, d, signs) in table {
            assert!(riemann_residual(&consts, d, *signs).unwrap() < 1e-9);
        }
    }
}

#[test]
fn gopel_forms_span_fifteen_dimensions() {
    let engine = ThetaEngine::<f64>::default();
    let mut r = ChaCha8Rng::seed_from_u64(26);
    let rows: Vec<Vec<Complex<f64>>> = (0..40)
        .map(|_| {
            let tau = random_period_matrix(3, &mut r).unwrap();
            ThetaConstants::compute(&engine, &tau).unwrap().gopel_forms().unwrap()
        })
        .collect();
    let rank = numerical_rank(&rows, 1e-8);
    assert_eq!(rank.rank, 15);
    assert!(rank.gap() >= 1e6, "gap {:e}", rank.gap());
}

#[test]
fn single_precision_tracks_double() {
    let e64 = ThetaEngine::<f64>::default();
    let e32 = ThetaEngine::<f32>::default();
    let mut r = ChaCha8Rng::seed_from_u64(27);
    let tau64: PeriodMatrix<f64> = random_period_matrix(3, &mut r).unwrap();
    let data = tau64.to_data();
    let tau32 = PeriodMatrix::<f32>::from_data(&data).unwrap();
    let z32 = PhasePoint::<f32>::zero(3).unwrap();
    let z64 = PhasePoint::<f64>::zero(3).unwrap();
    for m in enumerate_characteristics(3, ParityFilter::Even).unwrap().iter() {
        let a = e64.theta(&tau64, &z64, m).unwrap();
        let b = e32.theta(&tau32, &z32, m).unwrap();
        assert!((a - Complex::new(b.re as f64, b.im as f64)).norm() < 1e-5 * a.norm().max(1.0));
    }
}
