//! Verification suites. Every suite draws its random inputs from per-check
//! streams of a seeded ChaCha8 generator, so a report depends only on
//! (suite, seed, samples, tol).

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use coble_core::characteristics::*;
use coble_core::gopel::*;
use coble_core::linalg::{det, numerical_rank};
use coble_core::modular::*;
use coble_core::points::*;
use coble_core::quartic::*;
use coble_core::symplectic::*;
use coble_core::theta::{random_period_matrix, random_phase_point};
use coble_core::{PeriodMatrix64, Result, ThetaEngine64};
use num_complex::Complex;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::report::{stream_rng, CheckRecord, Report};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Combinatorics,
    Group,
    Gopel,
    Jacobi,
    Riemann,
    Wrank,
    Coble,
    Kummer2,
    Segre,
    Igusa,
    Modularity,
    Points,
    All,
}

impl Suite {
    pub const ALL: [Suite; 12] = [
        Suite::Combinatorics,
        Suite::Group,
        Suite::Gopel,
        Suite::Jacobi,
        Suite::Riemann,
        Suite::Wrank,
        Suite::Coble,
        Suite::Kummer2,
        Suite::Segre,
        Suite::Igusa,
        Suite::Modularity,
        Suite::Points,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Combinatorics => "combinatorics",
            Suite::Group => "group",
            Suite::Gopel => "gopel",
            Suite::Jacobi => "jacobi",
            Suite::Riemann => "riemann",
            Suite::Wrank => "wrank",
            Suite::Coble => "coble",
            Suite::Kummer2 => "kummer2",
            Suite::Segre => "segre",
            Suite::Igusa => "igusa",
            Suite::Modularity => "modularity",
            Suite::Points => "points",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        Suite::ALL
            .iter()
            .chain(std::iter::once(&Suite::All))
            .copied()
            .find(|x| x.name() == s)
            .ok_or_else(|| anyhow::anyhow!("unknown suite {s:?}"))
    }
}

/// Seed, optional sample count and optional residual threshold. Unset values
/// fall back to per-check defaults.
#[derive(Clone, Copy, Debug)]
pub struct Params {
    pub seed: u64,
    pub samples: Option<usize>,
    pub tol: Option<f64>,
}

impl Params {
    fn n(&self, default: usize) -> usize {
        self.samples.unwrap_or(default)
    }

    fn t(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }

    fn rng(&self, check: &str) -> ChaCha8Rng {
        stream_rng(self.seed, check)
    }
}

pub fn run_suite(name: &str, seed: u64, samples: Option<usize>, tol: Option<f64>) -> anyhow::Result<Report> {
    let suite: Suite = name.parse()?;
    if samples == Some(0) {
        anyhow::bail!("samples must be positive");
    }
    if let Some(t) = tol {
        if !(t.is_finite() && t > 0.0) {
            anyhow::bail!("tolerance must be positive, got {t}");
        }
    }
    let p = Params { seed, samples, tol };
    let start = Instant::now();
    let records = match suite {
        Suite::All => Suite::ALL.iter().flat_map(|&s| run_records(s, &p)).collect(),
        s => run_records(s, &p),
    };
    Ok(Report::new(suite.name(), seed, samples, tol, records, start.elapsed().as_secs_f64()))
}

fn run_records(suite: Suite, p: &Params) -> Vec<CheckRecord> {
    let result = match suite {
        Suite::Combinatorics => combinatorics(),
        Suite::Group => group(p),
        Suite::Gopel => gopel(),
        Suite::Jacobi => jacobi(p),
        Suite::Riemann => riemann(p),
        Suite::Wrank => wrank(p),
        Suite::Coble => coble(p),
        Suite::Kummer2 => kummer2(p),
        Suite::Segre => segre(p),
        Suite::Igusa => igusa(p),
        Suite::Modularity => modularity(p),
        Suite::Points => points(p),
        Suite::All => unreachable!("expanded by the caller"),
    };
    result.unwrap_or_else(|e| vec![CheckRecord::failed(&format!("{suite}_error"), e)])
}

fn engine() -> ThetaEngine64 {
    ThetaEngine64::default()
}

fn cplx(rng: &mut ChaCha8Rng) -> Complex<f64> {
    Complex::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

fn max_of(values: impl IntoIterator<Item = f64>) -> f64 {
    // NaN propagates so that a broken evaluation fails the record
    values.into_iter().fold(0.0f64, |a, b| if a.is_nan() || b.is_nan() { f64::NAN } else { a.max(b) })
}

fn combinatorics() -> Result<Vec<CheckRecord>> {
    let count = |g, f| enumerate_characteristics(g, f).map(|s| s.len());
    let gopel = enumerate_gopel(3)?;
    let mut out = vec![
        CheckRecord::count("even36", count(3, ParityFilter::Even)?, 36),
        CheckRecord::count("odd28", count(3, ParityFilter::Odd)?, 28),
        CheckRecord::count("even10_genus2", count(2, ParityFilter::Even)?, 10),
        CheckRecord::count("odd6_genus2", count(2, ParityFilter::Odd)?, 6),
        CheckRecord::count("gopel135", gopel.len(), 135),
        CheckRecord::count("fano30", gopel.iter().filter(|s| s.is_fano()).count(), 30),
        CheckRecord::count("pascal105", gopel.iter().filter(|s| s.is_pascal()).count(), 105),
        CheckRecord::count("gopel15_genus2", enumerate_gopel(2)?.len(), 15),
        CheckRecord::count("aronhold288", enumerate_aronhold_sets(3)?.len(), 288),
    ];
    out.extend(lemma_checks()?);
    Ok(out)
}

fn azygetic_odd_sets(g: usize, size: usize) -> Result<Vec<CharacteristicSet>> {
    let odds = enumerate_characteristics(g, ParityFilter::Odd)?;
    let o = odds.members();
    let mut out = Vec::new();
    let mut idx = Vec::with_capacity(size);
    fn rec(o: &[Characteristic], start: usize, size: usize, idx: &mut Vec<usize>, out: &mut Vec<Vec<Characteristic>>) {
        if idx.len() == size {
            out.push(idx.iter().map(|&i| o[i]).collect());
            return;
        }
        for i in start..o.len() {
            let ok = (0..idx.len())
                .all(|a| (a + 1..idx.len()).all(|b| triple_sign(o[idx[a]], o[idx[b]], o[i]) == Sign::Minus));
            if ok {
                idx.push(i);
                rec(o, i + 1, size, idx, out);
                idx.pop();
            }
        }
    }
    let mut raw = Vec::new();
    rec(o, 0, size, &mut idx, &mut raw);
    for r in raw {
        out.push(CharacteristicSet::new(g, r)?);
    }
    Ok(out)
}

fn is_azygetic_with(n: Characteristic, ms: &[Characteristic]) -> bool {
    (0..ms.len()).all(|i| (i + 1..ms.len()).all(|j| triple_sign(ms[i], ms[j], n) == Sign::Minus))
}

fn lemma_checks() -> Result<Vec<CheckRecord>> {
    let evens3 = enumerate_characteristics(3, ParityFilter::Even)?;
    // six even completions, one of them the sum, the other five the output
    let mut lemma1_bad = 0;
    let triples = azygetic_odd_sets(3, 3)?;
    for t in &triples {
        let ms = t.members();
        let cands: Vec<Characteristic> = evens3.iter().filter(|&n| is_azygetic_with(n, ms)).collect();
        let sum = t.sum();
        let completion = special_fundamental_completion(t)?;
        let expected: BTreeSet<Characteristic> = cands.iter().copied().filter(|&n| n != sum).collect();
        if cands.len() != 6 || !cands.contains(&sum) || completion.iter().collect::<BTreeSet<_>>() != expected {
            lemma1_bad += 1;
        }
    }
    // two completions through a shared member meet in that member and n₀
    let a = reference_aronhold_set();
    let n0 = aronhold_base(&a)?;
    let m = a.members();
    let mut lemma2_bad = 0;
    let mut lemma2_pairs = 0;
    for i in 0..7 {
        let others: Vec<usize> = (0..7).filter(|&x| x != i).collect();
        let mut pairs = Vec::new();
        for (k, &p) in others.iter().enumerate() {
            for &q in &others[k + 1..] {
                pairs.push((p, q));
            }
        }
        let system = |x: usize, y: usize| -> Result<BTreeSet<Characteristic>> {
            let t = CharacteristicSet::new(3, [m[i], m[x], m[y]])?;
            let c = special_fundamental_completion(&t)?;
            Ok(t.iter().chain(c.iter()).collect())
        };
        for &(p, q) in &pairs {
            for &(r, s) in &pairs {
                if (p, q) >= (r, s) || [p, q].contains(&r) || [p, q].contains(&s) {
                    continue;
                }
                lemma2_pairs += 1;
                let meet: BTreeSet<_> = system(p, q)?.intersection(&system(r, s)?).copied().collect();
                if meet != BTreeSet::from([m[i], n0]) {
                    lemma2_bad += 1;
                }
            }
        }
    }
    // 1 + 7 + 21 + 35 for every Aronhold set
    let mut lemma3_bad = 0;
    for s in enumerate_aronhold_sets(3)? {
        let cls = aronhold_classify(&s, aronhold_base(&s)?)?;
        let parity_ok = cls.entries().iter().all(|(c, e)| match e {
            AronholdExpression::Base | AronholdExpression::TripleSum(..) => c.is_even(),
            _ => c.is_odd(),
        });
        if cls.class_sizes() != [1, 7, 21, 35] || !parity_ok {
            lemma3_bad += 1;
        }
    }
    // genus 2: the sum is the only even completion of an azygetic odd triple
    let evens2 = enumerate_characteristics(2, ParityFilter::Even)?;
    let triples2 = azygetic_odd_sets(2, 3)?;
    let genus2_bad = triples2
        .iter()
        .filter(|t| {
            let ms = t.members();
            let hits: Vec<Characteristic> = evens2
                .iter()
                .filter(|&n| {
                    let mut all = ms.to_vec();
                    all.push(n);
                    (0..4).all(|x| {
                        (x + 1..4).all(|y| (y + 1..4).all(|z| triple_sign(all[x], all[y], all[z]) == Sign::Minus))
                    })
                })
                .collect();
            hits != vec![t.sum()]
        })
        .count();
    Ok(vec![
        CheckRecord::count("lemma_six_even_completions_violations", lemma1_bad, 0),
        CheckRecord::count("lemma_six_even_completions_triples", triples.len(), 2016),
        CheckRecord::count("lemma_completion_intersection_violations", lemma2_bad, 0),
        CheckRecord::count("lemma_completion_intersection_pairs", lemma2_pairs, 7 * 45),
        CheckRecord::count("lemma_partition_violations", lemma3_bad, 0),
        CheckRecord::count("genus2_unique_even_completion_violations", genus2_bad, 0),
        CheckRecord::count("genus2_azygetic_odd_triples", triples2.len(), 20),
    ])
}

fn group(p: &Params) -> Result<Vec<CheckRecord>> {
    let g = sp6();
    let zero = Characteristic::zero(3)?;
    let reps = parabolic_cosets(3)?;
    let images: BTreeSet<u64> = reps.iter().map(image_of_vertical_lagrangian).collect();
    let gopel_masks: BTreeSet<u64> = gopel3().iter().map(|s| s.mask()).collect();
    let orbit0: HashSet<Characteristic> = g.iter().map(|x| x.act(zero)).collect();
    let reference = reference_aronhold_set();
    let aronhold_orbit: HashSet<u64> = g
        .iter()
        .map(|x| CharacteristicSet::new(3, reference.iter().map(|m| x.act(m))).map(|s| s.mask()))
        .collect::<Result<_>>()?;
    let stab: Vec<SymplecticMatF2> = g.iter().filter(|x| x.act(zero) == zero).collect();
    let mut orbit_sizes = Vec::new();
    let mut kind_mixing = 0;
    let mut seen = HashSet::new();
    for s in gopel3() {
        if seen.contains(&s.mask()) {
            continue;
        }
        let orbit: HashSet<u64> = stab
            .iter()
            .map(|x| CharacteristicSet::new(3, s.iter().map(|m| x.act(m))).map(|c| c.mask()))
            .collect::<Result<_>>()?;
        kind_mixing += orbit.iter().filter(|&&o| gopel3_position(o).map(|i| gopel3()[i].kind()) != Some(s.kind())).count();
        orbit_sizes.push(orbit.len());
        seen.extend(orbit);
    }
    orbit_sizes.sort_unstable();
    let mut rng = p.rng("group_left_action");
    let mut action_bad = 0;
    for _ in 0..p.n(200) {
        let a = g.get(rng.random_range(0..g.len()));
        let b = g.get(rng.random_range(0..g.len()));
        let ab = a.mul(&b);
        let ok = g.contains(&ab)
            && (0..64).all(|i| {
                let m = Characteristic::from_index(3, i).expect("index in range");
                ab.act(m) == a.act(b.act(m)) && a.act(m).parity() == m.parity()
            });
        if !ok {
            action_bad += 1;
        }
    }
    Ok(vec![
        CheckRecord::count("sp2_order", enumerate_group(1)?.len(), 6),
        CheckRecord::count("sp4_order", enumerate_group(2)?.len(), 720),
        CheckRecord::count("sp6_order", g.len(), 1_451_520),
        CheckRecord::count("parabolic_index", reps.len(), 135),
        CheckRecord::count("parabolic_order", g.iter().filter(is_parabolic).count(), 1_451_520 / 135),
        CheckRecord::count("coset_gopel_bijection", images.intersection(&gopel_masks).count(), 135),
        CheckRecord::count("orbit_of_zero", orbit0.len(), 36),
        CheckRecord::count("orbit_of_zero_odd_members", orbit0.iter().filter(|m| m.is_odd()).count(), 0),
        CheckRecord::count("aronhold_orbit", aronhold_orbit.len(), 288),
        CheckRecord::count("stabilizer_of_zero", stab.len(), 40320),
        CheckRecord::count("stabilizer_orbit_fano", orbit_sizes.first().copied().unwrap_or(0), 30),
        CheckRecord::count("stabilizer_orbit_pascal", orbit_sizes.get(1).copied().unwrap_or(0), 105),
        CheckRecord::count("stabilizer_orbit_count", orbit_sizes.len(), 2),
        CheckRecord::count("stabilizer_kind_mixing", kind_mixing, 0),
        CheckRecord::count("left_action_violations", action_bad, 0),
    ])
}

fn gopel() -> Result<Vec<CheckRecord>> {
    let basis = fano_basis();
    let decomposed = gopel3()
        .iter()
        .filter(|s| s.is_pascal())
        .filter(|s| {
            pascal_decomposition(s).is_ok_and(|d| {
                d.fano_a.is_fano() && d.fano_b.is_fano() && d.even_coset.count_even() == 8
            })
        })
        .count();
    let mut construction_bad = 0;
    let fanos = FanoFamily::all();
    let pascals = PascalFamily::all();
    for s in enumerate_aronhold_sets(3)? {
        for f in &fanos {
            if fano_from_aronhold(&s, f)?.even_coset()?.count_even() != 8 {
                construction_bad += 1;
            }
        }
        for q in &pascals {
            if pascal_from_aronhold(&s, q)?.even_coset()?.count_even() != 8 {
                construction_bad += 1;
            }
        }
    }
    let reference = reference_aronhold_set();
    let reference_kinds = usize::from(fano_from_aronhold(&reference, &FanoFamily::reference())?.is_fano())
        + usize::from(pascal_from_aronhold(&reference, &PascalFamily::reference())?.is_pascal());
    Ok(vec![
        CheckRecord::count("fano_basis", basis.iter().filter(|s| s.is_fano()).count(), 15),
        CheckRecord::count("fano_families", fanos.len(), 30),
        CheckRecord::count("pascal_families", pascals.len(), 105),
        CheckRecord::count("pascal_decompositions", decomposed, 105),
        CheckRecord::count("aronhold_construction_violations", construction_bad, 0),
        CheckRecord::count("reference_construction_kinds", reference_kinds, 2),
        CheckRecord::count(
            "example_kinds",
            usize::from(example_fano().is_fano()) + usize::from(example_pascal().is_pascal()),
            2,
        ),
    ])
}

fn jacobi(p: &Params) -> Result<Vec<CheckRecord>> {
    let e = engine();
    let mut out = Vec::new();
    for g in 1..=3 {
        let name = format!("jacobi_g{g}");
        let sets = azygetic_odd_sets(g, g)?;
        let mut rng = p.rng(&name);
        let mut worst = 0.0f64;
        for _ in 0..p.n(20) {
            let tau = random_period_matrix(g, &mut rng)?;
            let set = &sets[rng.random_range(0..sets.len())];
            worst = max_of([worst, jacobi_derivative_check(&e, &tau, set)?.residual]);
        }
        out.push(CheckRecord::residual(&name, worst, p.t(1e-8)));
    }
    Ok(out)
}

fn riemann(p: &Params) -> Result<Vec<CheckRecord>> {
    let e = engine();
    let table = riemann_sign_table();
    let mut rng = p.rng("riemann_addition");
    let mut worst = 0.0f64;
    for _ in 0..p.n(10) {
        let tau = random_period_matrix(3, &mut rng)?;
        let consts = ThetaConstants::compute(&e, &tau)?;
        for (_, d, signs) in table {
            worst = max_of([worst, riemann_residual(&consts, d, *signs)?]);
        }
    }
    let mut rng = p.rng("h_fano_dual_route");
    let sets = enumerate_aronhold_sets(3)?;
    let families = FanoFamily::all();
    let pi21 = std::f64::consts::PI.powi(21);
    let mut dual = 0.0f64;
    for family in families.iter().take(5) {
        for _ in 0..p.n(10) {
            let tau = random_period_matrix(3, &mut rng)?;
            let set = &sets[rng.random_range(0..sets.len())];
            let consts = ThetaConstants::compute(&e, &tau)?;
            let direct = consts.h_gopel(&fano_from_aronhold(set, family)?)? * pi21;
            let via = h_via_jacobian(&e, &tau, set, family)?;
            let r = (via - direct).norm().min((via + direct).norm()) / via.norm().max(direct.norm());
            dual = max_of([dual, r]);
        }
    }
    Ok(vec![
        CheckRecord::count("riemann_sign_pairs", table.len(), 105),
        CheckRecord::residual("riemann_addition", worst, p.t(1e-8)),
        CheckRecord::residual("h_fano_dual_route", dual, p.t(1e-8)),
    ])
}

fn wrank(p: &Params) -> Result<Vec<CheckRecord>> {
    let e = engine();
    let mut rng = p.rng("wrank");
    let rows = (0..p.n(40))
        .map(|_| ThetaConstants::compute(&e, &random_period_matrix(3, &mut rng)?)?.gopel_forms())
        .collect::<Result<Vec<_>>>()?;
    let rank = numerical_rank(&rows, 1e-8);
    Ok(vec![CheckRecord::count("wrank_rank", rank.rank, 15), CheckRecord::at_least("wrank_gap", rank.gap(), 1e6)])
}

fn random_translation(rng: &mut ChaCha8Rng) -> ModularGenerator {
    loop {
        let mut s = [[0i64; 3]; 3];
        for i in 0..3 {
            for j in i..3 {
                s[i][j] = rng.random_range(-2..=2);
                s[j][i] = s[i][j];
            }
        }
        if s.iter().flatten().any(|&x| x != 0) {
            return ModularGenerator::Translation(s);
        }
    }
}

fn coble(p: &Params) -> Result<Vec<CheckRecord>> {
    let e = engine();
    let mut rng = p.rng("coble_vanishing");
    let (mut value, mut grad) = (0.0f64, 0.0f64);
    for _ in 0..p.n(20) {
        let tau = random_period_matrix(3, &mut rng)?;
        let z = random_phase_point(3, &mut rng)?;
        value = max_of([value, coble_eval(&e, &tau, &z)?.normalized()]);
        grad = max_of(std::iter::once(grad).chain(coble_gradient(&e, &tau, &z)?.iter().map(|g| g.normalized())));
    }
    let mut out = vec![
        CheckRecord::residual("coble_vanishing", value, p.t(1e-7)),
        CheckRecord::residual("coble_gradient", grad, p.t(1e-7)),
        CheckRecord::count("coble_monomial_count", coble_monomial_count(), 134),
    ];
    out.extend(jacobi_form_records(p, "coble_modularity", p.n(10))?);
    Ok(out)
}

fn jacobi_form_records(p: &Params, name: &str, samples: usize) -> Result<Vec<CheckRecord>> {
    let e = engine();
    let mut rng = p.rng(name);
    let mut gens = vec![ModularGenerator::Inversion];
    gens.extend((0..5).map(|_| random_translation(&mut rng)));
    let (mut inv, mut trans) = (0.0f64, 0.0f64);
    for _ in 0..samples {
        let tau = random_period_matrix(3, &mut rng)?;
        let z = random_phase_point(3, &mut rng)?;
        for g in &gens {
            let r = jacobi_form_residual(&e, g, &tau, &z)?;
            match g {
                ModularGenerator::Inversion => inv = max_of([inv, r]),
                ModularGenerator::Translation(_) => trans = max_of([trans, r]),
            }
        }
    }
    Ok(vec![
        CheckRecord::residual(&format!("{name}_inversion"), inv, p.t(1e-6)),
        CheckRecord::residual(&format!("{name}_translations"), trans, p.t(1e-6)),
    ])
}

fn modularity(p: &Params) -> Result<Vec<CheckRecord>> {
    let e = engine();
    let mut out = jacobi_form_records(p, "jacobi_form", p.n(10))?;
    let mut rng = p.rng("quartic_covariance");
    let (mut inv, mut trans) = (0.0f64, 0.0f64);
    for _ in 0..p.n(10) {
        let tau = random_period_matrix(3, &mut rng)?;
        let x: Vec<Complex<f64>> = (0..8).map(|_| cplx(&mut rng)).collect();
        inv = max_of([inv, quartic_covariance_residual(&e, &ModularGenerator::Inversion, &tau, &x)?]);
        let t = random_translation(&mut rng);
        trans = max_of([trans, quartic_covariance_residual(&e, &t, &tau, &x)?]);
    }
    out.push(CheckRecord::residual("quartic_covariance_inversion", inv, p.t(1e-8)));
    out.push(CheckRecord::residual("quartic_covariance_translations", trans, p.t(1e-8)));
    Ok(out)
}

fn kummer2(p: &Params) -> Result<Vec<CheckRecord>> {
    let e = engine();
    let mut rng = p.rng("kummer2_vanishing");
    let mut worst = 0.0f64;
    for _ in 0..p.n(20) {
        let tau = random_period_matrix(2, &mut rng)?;
        let z = random_phase_point(2, &mut rng)?;
        worst = max_of([worst, kummer2_eval(&e, &tau, &z)?.normalized()]);
    }
    let mut rng = p.rng("genus2_triple_product");
    let pi6 = std::f64::consts::PI.powi(6);
    let zero = coble_core::PhasePoint64::zero(2)?;
    let mut triple = 0.0f64;
    for _ in 0..p.n(20) {
        let tau = random_period_matrix(2, &mut rng)?;
        let chi5 = chi(&e, &tau)?;
        for n in enumerate_characteristics(2, ParityFilter::Even)?.iter() {
            let t = phi_star_triple(&e, &tau, n)?;
            let expected = chi5 * e.theta(&tau, &zero, n)?.powi(2) * pi6;
            for v in [t.value, t.complement_value] {
                let r = (v - expected).norm().min((v + expected).norm()) / v.norm().max(expected.norm());
                triple = max_of([triple, r]);
            }
        }
    }
    Ok(vec![
        CheckRecord::residual("kummer2_vanishing", worst, p.t(1e-8)),
        CheckRecord::residual("genus2_triple_product", triple, p.t(1e-8)),
    ])
}

fn random_config1(rng: &mut ChaCha8Rng) -> Result<PointConfig1<Complex<f64>>> {
    PointConfig1::new(std::array::from_fn(|_| cplx(rng)))
}

fn random_config2(rng: &mut ChaCha8Rng) -> Result<PointConfig2<Complex<f64>>> {
    PointConfig2::new(std::array::from_fn(|_| std::array::from_fn(|_| cplx(rng))))
}

fn segre(p: &Params) -> Result<Vec<CheckRecord>> {
    let mut rng = p.rng("segre");
    let mut worst = 0.0f64;
    for _ in 0..p.n(50) {
        let t = standard_invariants(&random_config1(&mut rng)?);
        worst = max_of([worst, term_evaluation(&segre_terms(&t)).normalized()]);
    }
    Ok(vec![CheckRecord::residual("segre_identity", worst, p.t(1e-10))])
}

fn igusa(p: &Params) -> Result<Vec<CheckRecord>> {
    let e = engine();
    let mut rng = p.rng("igusa_search");
    let samples = (0..3).map(|_| random_period_matrix(2, &mut rng)).collect::<Result<Vec<PeriodMatrix64>>>()?;
    let mut rng = p.rng("igusa_negative_control");
    let tuples = even_five_tuples();
    let wrong = tuples[rng.random_range(0..tuples.len())];
    let control = igusa_residual(&e, &random_period_matrix(2, &mut rng)?, &wrong)?;
    let mut out = vec![CheckRecord::at_least("igusa_negative_control", control, 1e-4)];
    match igusa_tuple_search(&e, &samples) {
        Ok(tuple) => {
            let mut rng = p.rng("igusa_holdout");
            let mut worst = 0.0f64;
            for _ in 0..p.n(10) {
                worst = max_of([worst, igusa_residual(&e, &random_period_matrix(2, &mut rng)?, &tuple)?]);
            }
            out.push(CheckRecord::count("igusa_search", 1, 1));
            out.push(CheckRecord::residual("igusa_holdout", worst, p.t(1e-8)));
        }
        Err(err) => {
            out.push(CheckRecord::failed("igusa_search", &err));
            out.push(CheckRecord::failed("igusa_holdout", "no tuple to validate"));
        }
    }
    Ok(out)
}

fn points(p: &Params) -> Result<Vec<CheckRecord>> {
    let mut rng = p.rng("bracket_span");
    let rows = (0..p.n(60)).map(|_| random_config2(&mut rng).map(|c| bracket_invariants(&c))).collect::<Result<Vec<_>>>()?;
    let rank = numerical_rank(&rows, 1e-8);
    let mut rng = p.rng("bracket_sl3");
    let mut sl3 = 0.0f64;
    for _ in 0..10 {
        let cfg = random_config2(&mut rng)?;
        let a: [[Complex<f64>; 3]; 3] = std::array::from_fn(|_| std::array::from_fn(|_| cplx(&mut rng)));
        let f = FanoFamily::reference();
        let lhs = g_fano(&cfg.transformed(&a)?, &f);
        let rhs = det(&a, 3).powi(7) * g_fano(&cfg, &f);
        sl3 = max_of([sl3, (lhs - rhs).norm() / lhs.norm().max(rhs.norm())]);
    }
    let mut rng = p.rng("tableau_mobius");
    let mut mobius = 0.0f64;
    for _ in 0..10 {
        let cfg = random_config1(&mut rng)?;
        let (a, b, c) = (cplx(&mut rng), cplx(&mut rng), cplx(&mut rng));
        let d = (Complex::new(1.0, 0.0) + b * c) / a;
        let moved = PointConfig1::new(cfg.coords().map(|x| (a * x + b) / (c * x + d)))?;
        let factor: Complex<f64> = cfg.coords().iter().map(|&x| c * x + d).product();
        for n in Tableau::all() {
            let lhs = tableau_invariant(&n, &moved);
            let rhs = tableau_invariant(&n, &cfg) / factor;
            mobius = max_of([mobius, (lhs - rhs).norm() / lhs.norm().max(rhs.norm())]);
        }
    }
    Ok(vec![
        CheckRecord::count("bracket_span_rank", rank.rank, 15),
        CheckRecord::at_least("bracket_span_gap", rank.gap(), 1e6),
        CheckRecord::residual("bracket_sl3_weight", sl3, p.t(1e-9)),
        CheckRecord::residual("tableau_mobius_weight", mobius, p.t(1e-9)),
    ])
}
