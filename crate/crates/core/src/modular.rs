//! Modular forms built from theta constants: χ₅ and χ₁₈, the Göpel forms
//! H(F) and H(P), the coefficient vector s, Riemann's three-term relations
//! and the genus-2 triple products of Jacobian determinants.
//!
//! Every quotient by theta constants is evaluated as a product over the
//! complementary even characteristics, never by division.

use std::sync::OnceLock;

use num_complex::Complex;
use serde::Serialize;

use crate::characteristics::{
    aronhold_base, enumerate_characteristics, special_fundamental_completion, Characteristic, CharacteristicSet, ParityFilter, Sign,
};
use crate::error::{Error, Result};
use crate::gopel::{
    fano_basis, gopel3, pascal_decomposition, FanoFamily, GopelSystem, PascalDecomposition,
};
use crate::scalar::{real, Real};
use crate::theta::{PeriodMatrix, ThetaEngine};

/// All theta constants at one τ, indexed by characteristic index.
#[derive(Clone, Debug)]
pub struct ThetaConstants<T: Real> {
    genus: usize,
    values: Vec<Complex<T>>,
}

impl<T: Real> ThetaConstants<T> {
    pub fn compute(engine: &ThetaEngine<T>, tau: &PeriodMatrix<T>) -> Result<Self> {
        Ok(Self { genus: tau.genus(), values: engine.theta_constants(tau)? })
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn get(&self, m: Characteristic) -> Complex<T> {
        self.values[m.index()]
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    /// Product of θ_n over the even characteristics whose bit is clear in
    /// `excluded`.
    pub fn even_product_excluding(&self, excluded: u64) -> Complex<T> {
        (0..self.values.len())
            .filter(|&i| excluded >> i & 1 == 0)
            .filter(|&i| Characteristic::from_index(self.genus, i).is_ok_and(|m| m.is_even()))
            .fold(Complex::new(T::one(), T::zero()), |acc, i| acc * self.values[i])
    }

    /// χ₅ (g = 2) or χ₁₈ (g = 3): the product of all even theta constants.
    pub fn chi(&self) -> Result<Complex<T>> {
        check_genus23(self.genus)?;
        Ok(self.even_product_excluding(0))
    }

    /// χ₁₈ / ∏_{n∈F} θ_n for a Fano system.
    pub fn h_fano(&self, f: &GopelSystem) -> Result<Complex<T>> {
        if !f.is_fano() {
            return Err(Error::Precondition("H(F) needs a Fano system".into()));
        }
        self.check3()?;
        Ok(self.even_product_excluding(f.mask()))
    }

    /// χ₁₈ / ∏_{n∈E} θ_n with `E` the even coset of a genus-3 Göpel
    /// system; agrees with [`Self::h_fano`] on Fano systems.
    pub fn h_gopel(&self, system: &GopelSystem) -> Result<Complex<T>> {
        self.check3()?;
        Ok(self.even_product_excluding(system.even_coset()?.mask()))
    }

    /// The coefficient vector: H(F₁), …, H(F₁₅) in genus 3, and in genus 2
    /// `sᵢ = χ₅² / (∏_{n∈Qᵢ} θ_n)²` for the five quadruples of
    /// [`genus2_quadruples`].
    pub fn s_vector(&self) -> Result<SVector<T>> {
        let values = match self.genus {
            3 => fano_basis().iter().map(|f| self.h_fano(f)).collect::<Result<Vec<_>>>()?,
            2 => genus2_quadruples()
                .iter()
                .map(|q| {
                    let p = self.even_product_excluding(q.mask());
                    p * p
                })
                .collect(),
            g => return Err(Error::UnsupportedGenus(g)),
        };
        Ok(SVector { genus: self.genus, values })
    }

    /// H of every genus-3 Göpel system, in enumeration order.
    pub fn gopel_forms(&self) -> Result<Vec<Complex<T>>> {
        self.check3()?;
        Ok(riemann_data().iter().map(|d| self.even_product_excluding(d.even_mask)).collect())
    }

    fn check3(&self) -> Result<()> {
        if self.genus == 3 {
            Ok(())
        } else {
            Err(Error::UnsupportedGenus(self.genus))
        }
    }
}

fn check_genus23(g: usize) -> Result<()> {
    if g == 2 || g == 3 {
        Ok(())
    } else {
        Err(Error::UnsupportedGenus(g))
    }
}

pub fn chi<T: Real>(engine: &ThetaEngine<T>, tau: &PeriodMatrix<T>) -> Result<Complex<T>> {
    check_genus23(tau.genus())?;
    ThetaConstants::compute(engine, tau)?.chi()
}

pub fn h_fano<T: Real>(engine: &ThetaEngine<T>, tau: &PeriodMatrix<T>, f: &GopelSystem) -> Result<Complex<T>> {
    ThetaConstants::compute(engine, tau)?.h_fano(f)
}

/// ∏ D(m_i, m_j, m_k) over the seven triples, divided by θ_{n₀}⁷. Each
/// triple is taken in increasing index order.
pub fn h_via_jacobian<T: Real>(
    engine: &ThetaEngine<T>,
    tau: &PeriodMatrix<T>,
    aronhold: &CharacteristicSet,
    family: &FanoFamily,
) -> Result<Complex<T>> {
    if tau.genus() != 3 {
        return Err(Error::UnsupportedGenus(tau.genus()));
    }
    let n0 = aronhold_base(aronhold)?;
    let m = aronhold.members();
    let mut num = Complex::new(T::one(), T::zero());
    for t in family.triples() {
        let ms: Vec<Characteristic> = t.iter().map(|&i| m[i as usize - 1]).collect();
        num = num * engine.jacobian_det(tau, &ms)?;
    }
    let theta_n0 = engine.theta(tau, &crate::theta::PhasePoint::zero(3)?, n0)?;
    if theta_n0.norm() == T::zero() {
        return Err(Error::Singular);
    }
    Ok(num / theta_n0.powi(7))
}

/// Residual of D(m₁, …, m_g) = ±π^g ∏ θ_{nᵢ}(τ), the product running over
/// the even members of the special fundamental system through the odd
/// input (all three even characteristics when g = 1). The sign of D flips
/// with any transposition of the input, so the closer sign is reported.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct JacobiCheck<T: Real> {
    pub residual: T,
    pub sign: Sign,
}

pub fn jacobi_derivative_check<T: Real>(
    engine: &ThetaEngine<T>,
    tau: &PeriodMatrix<T>,
    odds: &CharacteristicSet,
) -> Result<JacobiCheck<T>> {
    let g = tau.genus();
    if odds.genus() != g {
        return Err(Error::GenusMismatch { expected: g, found: odds.genus() });
    }
    let evens = if g == 1 {
        enumerate_characteristics(1, ParityFilter::Even)?
    } else {
        special_fundamental_completion(odds)?
    };
    let d = engine.jacobian_det(tau, odds.members())?;
    let z = crate::theta::PhasePoint::zero(g)?;
    let mut rhs = Complex::new(-T::PI().powi(g as i32), T::zero());
    for n in evens.iter() {
        rhs = rhs * engine.theta(tau, &z, n)?;
    }
    let scale = d.norm().max(rhs.norm());
    if scale == T::zero() {
        return Ok(JacobiCheck { residual: T::zero(), sign: Sign::Plus });
    }
    let plus = (d - rhs).norm() / scale;
    let minus = (d + rhs).norm() / scale;
    Ok(if plus <= minus {
        JacobiCheck { residual: plus, sign: Sign::Plus }
    } else {
        JacobiCheck { residual: minus, sign: Sign::Minus }
    })
}

/// The coefficient vector s at one τ.
#[derive(Clone, Debug, Serialize)]
pub struct SVector<T: Real> {
    genus: usize,
    values: Vec<Complex<T>>,
}

impl<T: Real> SVector<T> {
    /// Builds a vector from explicit values (15 in genus 3, 5 in genus 2).
    pub fn from_values(genus: usize, values: Vec<Complex<T>>) -> Result<Self> {
        let expected = match genus {
            2 => 5,
            3 => 15,
            g => return Err(Error::UnsupportedGenus(g)),
        };
        if values.len() != expected {
            return Err(Error::Precondition(format!("expected {expected} components, got {}", values.len())));
        }
        Ok(Self { genus, values })
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    /// `s_i`, 1-based.
    pub fn s(&self, i: usize) -> Complex<T> {
        self.values[i - 1]
    }
}

pub fn s_vector<T: Real>(engine: &ThetaEngine<T>, tau: &PeriodMatrix<T>) -> Result<SVector<T>> {
    check_genus23(tau.genus())?;
    ThetaConstants::compute(engine, tau)?.s_vector()
}

/// Q₁…Q₅, the genus-2 quadruples defining s₁…s₅.
pub fn genus2_quadruples() -> &'static [CharacteristicSet; 5] {
    static Q: OnceLock<[CharacteristicSet; 5]> = OnceLock::new();
    Q.get_or_init(|| {
        let q = |items: [&str; 4]| CharacteristicSet::parse(2, &items).expect("valid fixture");
        [
            q(["00;00", "00;01", "00;10", "00;11"]),
            q(["00;00", "00;01", "10;00", "10;01"]),
            q(["00;00", "00;10", "01;00", "01;10"]),
            q(["00;00", "00;11", "11;00", "11;11"]),
            q(["00;00", "01;00", "10;00", "11;00"]),
        ]
    })
}

/// A Göpel system with its even coset and, for Pascal systems, the Fano
/// pair decomposition and Riemann signs.
#[derive(Clone, Debug)]
pub struct GopelData {
    pub system: GopelSystem,
    pub even_mask: u64,
    pub decomposition: Option<PascalDecomposition>,
}

fn riemann_data() -> &'static [GopelData] {
    static DATA: OnceLock<Vec<GopelData>> = OnceLock::new();
    DATA.get_or_init(|| {
        gopel3()
            .iter()
            .map(|s| GopelData {
                system: s.clone(),
                even_mask: s.even_coset().expect("every genus-3 Göpel system has an even coset").mask(),
                decomposition: s.is_pascal().then(|| pascal_decomposition(s).expect("Pascal systems decompose")),
            })
            .collect()
    })
}

/// Signs `(ε₁, ε₂)` with `H(P) = ε₁·H(F′) + ε₂·H(F″)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RiemannSigns {
    pub eps1: Sign,
    pub eps2: Sign,
}

/// `|H(P) − ε₁H(F′) − ε₂H(F″)|` relative to the largest of the three.
pub fn riemann_residual<T: Real>(
    consts: &ThetaConstants<T>,
    decomposition: &PascalDecomposition,
    signs: RiemannSigns,
) -> Result<f64> {
    let hp = consts.even_product_excluding(decomposition.even_coset.mask());
    let h1 = consts.h_fano(&decomposition.fano_a)?;
    let h2 = consts.h_fano(&decomposition.fano_b)?;
    let sv = |s: Sign| real::<T>(f64::from(s.value()));
    let r = hp - h1 * sv(signs.eps1) - h2 * sv(signs.eps2);
    let scale = hp.norm().max(h1.norm()).max(h2.norm());
    Ok((r.norm() / scale).to_f64().unwrap_or(f64::NAN))
}

/// The reference point at which Riemann signs are resolved: `i·I₃` plus a
/// fixed small symmetric perturbation with nonzero off-diagonal entries.
pub fn reference_tau() -> PeriodMatrix<f64> {
    let c = Complex::new;
    let tau = [
        [c(0.11, 1.03), c(0.17, 0.05), c(-0.07, 0.02)],
        [c(0.17, 0.05), c(-0.05, 1.04), c(0.13, 0.01)],
        [c(-0.07, 0.02), c(0.13, 0.01), c(0.09, 1.06)],
    ];
    PeriodMatrix::new(3, tau).expect("reference point lies in the upper half-space")
}

/// Resolves the sign pair of a Pascal system at [`reference_tau`], choosing
/// the pair with the smallest residual; fails when that residual exceeds
/// `1e−8`.
pub fn riemann_relation(p: &GopelSystem) -> Result<(PascalDecomposition, RiemannSigns)> {
    let d = pascal_decomposition(p)?;
    let consts = reference_constants();
    let signs = resolve_signs(consts, &d)?;
    Ok((d, signs))
}

fn reference_constants() -> &'static ThetaConstants<f64> {
    static C: OnceLock<ThetaConstants<f64>> = OnceLock::new();
    C.get_or_init(|| {
        ThetaConstants::compute(&ThetaEngine::default(), &reference_tau()).expect("reference constants")
    })
}

fn resolve_signs(consts: &ThetaConstants<f64>, d: &PascalDecomposition) -> Result<RiemannSigns> {
    let mut best: Option<(f64, RiemannSigns)> = None;
    for eps1 in [Sign::Plus, Sign::Minus] {
        for eps2 in [Sign::Plus, Sign::Minus] {
            let signs = RiemannSigns { eps1, eps2 };
            let r = riemann_residual(consts, d, signs)?;
            if best.is_none_or(|(b, _)| r < b) {
                best = Some((r, signs));
            }
        }
    }
    let (r, signs) = best.expect("four candidates");
    if r < 1e-8 {
        Ok(signs)
    } else {
        Err(Error::Unstable(format!("best Riemann residual {r:e} at the reference point")))
    }
}

/// Sign pairs for all 105 Pascal systems, resolved once.
pub fn riemann_sign_table() -> &'static [(GopelSystem, PascalDecomposition, RiemannSigns)] {
    static TABLE: OnceLock<Vec<(GopelSystem, PascalDecomposition, RiemannSigns)>> = OnceLock::new();
    TABLE.get_or_init(|| {
        riemann_data()
            .iter()
            .filter_map(|d| d.decomposition.as_ref().map(|dec| (d.system.clone(), dec)))
            .map(|(p, dec)| {
                let signs = resolve_signs(reference_constants(), dec)
                    .unwrap_or_else(|e| panic!("Riemann signs for {p}: {e}"));
                (p, dec.clone(), signs)
            })
            .collect()
    })
}

/// The genus-2 triple product for an even `n = m_a + m_b + m_c` with the
/// six odd characteristics split into two triples summing to `n`.
#[derive(Clone, Debug, Serialize)]
pub struct PhiStarTriple<T: Real> {
    pub triple: [Characteristic; 3],
    pub complement: [Characteristic; 3],
    /// `D(m_a,m_b)·D(m_a,m_c)·D(m_b,m_c)`.
    pub value: Complex<T>,
    /// The same product over the complementary triple.
    pub complement_value: Complex<T>,
}

/// Splits the six odd genus-2 characteristics into two triples, each
/// summing to `n`; the triple containing the first odd characteristic comes
/// first.
pub fn odd_triple_partition(n: Characteristic) -> Result<([Characteristic; 3], [Characteristic; 3])> {
    if n.genus() != 2 || n.is_odd() {
        return Err(Error::Precondition(format!("{n} is not an even genus-2 characteristic")));
    }
    let odd = enumerate_characteristics(2, ParityFilter::Odd)?;
    let o = odd.members();
    for j in 1..6 {
        for k in j + 1..6 {
            if o[0] + o[j] + o[k] != n {
                continue;
            }
            let rest: Vec<Characteristic> = (1..6).filter(|&i| i != j && i != k).map(|i| o[i]).collect();
            if rest[0] + rest[1] + rest[2] == n {
                return Ok(([o[0], o[j], o[k]], [rest[0], rest[1], rest[2]]));
            }
        }
    }
    Err(Error::NotFound(format!("no odd partition for {n}")))
}

pub fn phi_star_triple<T: Real>(
    engine: &ThetaEngine<T>,
    tau: &PeriodMatrix<T>,
    n: Characteristic,
) -> Result<PhiStarTriple<T>> {
    if tau.genus() != 2 {
        return Err(Error::UnsupportedGenus(tau.genus()));
    }
    let (triple, complement) = odd_triple_partition(n)?;
    let product = |t: &[Characteristic; 3]| -> Result<Complex<T>> {
        Ok(engine.jacobian_det(tau, &[t[0], t[1]])?
            * engine.jacobian_det(tau, &[t[0], t[2]])?
            * engine.jacobian_det(tau, &[t[1], t[2]])?)
    };
    Ok(PhiStarTriple { triple, complement, value: product(&triple)?, complement_value: product(&complement)? })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gopel::example_pascal;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn chi_factor_counts() {
        assert_eq!(enumerate_characteristics(2, ParityFilter::Even).unwrap().len(), 10);
        let tau = PeriodMatrix::<f64>::imaginary_identity(3).unwrap();
        let engine = ThetaEngine::default();
        let consts = ThetaConstants::compute(&engine, &tau).unwrap();
        let direct = enumerate_characteristics(3, ParityFilter::Even)
            .unwrap()
            .iter()
            .fold(Complex::new(1.0, 0.0), |acc, m| acc * consts.get(m));
        let chi18 = chi(&engine, &tau).unwrap();
        assert!(chi18.norm() > 0.0);
        assert!((chi18 - direct).norm() < 1e-14 * direct.norm());
    }

    #[test]
    fn decomposable_tau_kills_chi18() {
        let c = Complex::<f64>::new;
        let z = c(0.0, 0.0);
        let tau = [[c(0.2, 1.1), c(0.1, 0.3), z], [c(0.1, 0.3), c(-0.1, 0.9), z], [z, z, c(0.0, 1.0)]];
        let tau = PeriodMatrix::new(3, tau).unwrap();
        let consts = ThetaConstants::compute(&ThetaEngine::default(), &tau).unwrap();
        let scale: f64 = consts.values().iter().map(|v| v.norm().max(1.0)).product();
        assert!(consts.chi().unwrap().norm() < 1e-12 * scale);
    }

    #[test]
    fn h_fano_times_members_is_chi18() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let tau = crate::theta::random_period_matrix::<f64, _>(3, &mut rng).unwrap();
        let consts = ThetaConstants::compute(&ThetaEngine::default(), &tau).unwrap();
        for f in fano_basis() {
            let prod = f.iter().fold(consts.h_fano(f).unwrap(), |acc, m| acc * consts.get(m));
            let chi18 = consts.chi().unwrap();
            assert!((prod - chi18).norm() < 1e-10 * chi18.norm());
        }
        assert!(consts.h_fano(&example_pascal()).is_err());
    }

    #[test]
    fn example_pascal_signs_resolve() {
        let (d, signs) = riemann_relation(&example_pascal()).unwrap();
        let swapped = PascalDecomposition { fano_a: d.fano_b.clone(), fano_b: d.fano_a.clone(), ..d.clone() };
        let consts = reference_constants();
        let flipped = RiemannSigns { eps1: signs.eps2, eps2: signs.eps1 };
        assert!(riemann_residual(consts, &swapped, flipped).unwrap() < 1e-8);
    }

    #[test]
    fn genus2_partitions_exist() {
        for n in &enumerate_characteristics(2, ParityFilter::Even).unwrap() {
            let (a, b) = odd_triple_partition(n).unwrap();
            assert_eq!(a[0] + a[1] + a[2], n);
            assert_eq!(b[0] + b[1] + b[2], n);
        }
        assert!(odd_triple_partition("01;01".parse().unwrap()).is_err());
    }
}
