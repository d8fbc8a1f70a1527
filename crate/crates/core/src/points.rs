//! Invariants of point configurations: binary invariants of six points on
//! the projective line (tableau products, the Segre cubic, the Igusa quartic)
//! and bracket polynomials of seven points in the projective plane.

use std::fmt;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::characteristics::{enumerate_characteristics, Characteristic, ParityFilter};
use crate::error::{Error, Result};
use crate::gopel::{FanoFamily, PascalFamily};
use crate::linalg;
use crate::quartic::Evaluation;
use crate::scalar::{ring_int, Real, Ring};
use crate::theta::{PeriodMatrix, PhasePoint, ThetaEngine};

/// Six pairwise distinct affine coordinates on P¹.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointConfig1<R> {
    x: [R; 6],
}

impl<R: Ring> PointConfig1<R> {
    pub fn new(x: [R; 6]) -> Result<Self> {
        for i in 0..6 {
            for j in i + 1..6 {
                if x[i] == x[j] {
                    return Err(Error::Precondition(format!("points {} and {} coincide", i + 1, j + 1)));
                }
            }
        }
        Ok(Self { x })
    }

    /// No distinctness check; tableau products simply vanish on coincidences.
    pub fn new_unchecked(x: [R; 6]) -> Self {
        Self { x }
    }

    pub fn coords(&self) -> &[R; 6] {
        &self.x
    }

    /// x_i, 1-based.
    pub fn x(&self, i: u8) -> R {
        self.x[i as usize - 1].clone()
    }
}

/// A 2×3 filling of {1..6} with increasing top row and each column
/// increasing downward.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Tableau {
    top: [u8; 3],
    bottom: [u8; 3],
}

impl Tableau {
    pub fn new(top: [u8; 3], bottom: [u8; 3]) -> Result<Self> {
        let mut seen = 0u8;
        for &i in top.iter().chain(&bottom) {
            if !(1..=6).contains(&i) || seen >> i & 1 == 1 {
                return Err(Error::Precondition("a tableau uses each of 1..6 once".into()));
            }
            seen |= 1 << i;
        }
        if !(top[0] < top[1] && top[1] < top[2]) || (0..3).any(|c| top[c] >= bottom[c]) {
            return Err(Error::Precondition(format!("{top:?}/{bottom:?} is not a tableau")));
        }
        Ok(Self { top, bottom })
    }

    pub fn top(&self) -> [u8; 3] {
        self.top
    }

    pub fn bottom(&self) -> [u8; 3] {
        self.bottom
    }

    pub fn is_standard(&self) -> bool {
        self.bottom[0] < self.bottom[1] && self.bottom[1] < self.bottom[2]
    }

    /// All 15 tableaux (one per perfect matching of {1..6}), sorted.
    pub fn all() -> Vec<Tableau> {
        let mut out = Vec::new();
        for j1 in 2..=6u8 {
            let rest: Vec<u8> = (2..=6).filter(|&i| i != j1).collect();
            let i2 = rest[0];
            for &j2 in &rest[1..] {
                let last: Vec<u8> = rest.iter().copied().filter(|&i| i != i2 && i != j2).collect();
                out.push(Tableau::new([1, i2, last[0]], [j1, j2, last[1]]).expect("matching gives a tableau"));
            }
        }
        out.sort();
        out
    }
}

impl fmt::Display for Tableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.top;
        let [d, e, g] = self.bottom;
        write!(f, "({a}{b}{c};{d}{e}{g})")
    }
}

/// The five standard tableaux T₀…T₄.
pub fn standard_tableaux() -> [Tableau; 5] {
    [
        ([1, 3, 5], [2, 4, 6]),
        ([1, 2, 5], [3, 4, 6]),
        ([1, 3, 4], [2, 5, 6]),
        ([1, 2, 4], [3, 5, 6]),
        ([1, 2, 3], [4, 5, 6]),
    ]
    .map(|(t, b)| Tableau::new(t, b).expect("standard tableau"))
}

/// ∏ (x_{iₖ} − x_{jₖ}) over the columns.
pub fn tableau_invariant<R: Ring>(n: &Tableau, cfg: &PointConfig1<R>) -> R {
    (0..3).fold(R::one(), |acc, c| acc * (cfg.x(n.top[c]) - cfg.x(n.bottom[c])))
}

/// (T₀(x), …, T₄(x)).
pub fn standard_invariants<R: Ring>(cfg: &PointConfig1<R>) -> [R; 5] {
    standard_tableaux().map(|n| tableau_invariant(&n, cfg))
}

/// Monomials of T₁T₂T₄ − T₃(T₀T₄ + T₁T₂ − T₀T₁ − T₀T₂ + T₀²).
pub fn segre_terms<R: Ring>(t: &[R; 5]) -> [R; 6] {
    let [t0, t1, t2, t3, t4] = t.clone();
    let neg = |r: R| R::zero() - r;
    [
        t1.clone() * t2.clone() * t4.clone(),
        neg(t3.clone() * t0.clone() * t4),
        neg(t3.clone() * t1.clone() * t2.clone()),
        t3.clone() * t0.clone() * t1,
        t3.clone() * t0.clone() * t2,
        neg(t3 * t0.clone() * t0),
    ]
}

pub fn segre_eval<R: Ring>(t: &[R; 5]) -> R {
    segre_terms(t).into_iter().fold(R::zero(), |a, b| a + b)
}

/// Monomials of (X₀X₁ + X₀X₂ + X₁X₂ − X₃X₄)² − 4X₀X₁X₂(X₀ + X₁ + X₂ + X₃ + X₄),
/// the square expanded term by term.
pub fn igusa_terms<R: Ring>(x: &[R; 5]) -> Vec<R> {
    let p = |i: usize, j: usize| x[i].clone() * x[j].clone();
    let a = [p(0, 1), p(0, 2), p(1, 2), R::zero() - p(3, 4)];
    let mut out = Vec::with_capacity(15);
    for i in 0..4 {
        out.push(a[i].clone() * a[i].clone());
        for j in i + 1..4 {
            out.push(ring_int::<R>(2) * a[i].clone() * a[j].clone());
        }
    }
    let cubic = ring_int::<R>(4) * x[0].clone() * x[1].clone() * x[2].clone();
    for xi in x {
        out.push(R::zero() - cubic.clone() * xi.clone());
    }
    out
}

pub fn igusa_eval<R: Ring>(x: &[R; 5]) -> R {
    igusa_terms(x).into_iter().fold(R::zero(), |a, b| a + b)
}

/// Sum of complex terms normalized by the largest term.
pub fn term_evaluation<T: Real>(terms: &[Complex<T>]) -> Evaluation<T> {
    let mut value = Complex::new(T::zero(), T::zero());
    let mut scale = T::zero();
    for t in terms {
        value = value + t;
        scale = scale.max(t.norm());
    }
    Evaluation { value, scale }
}

/// Normalized Igusa residual at X_i = θ_{n_i}(τ)⁴.
pub fn igusa_residual<T: Real>(
    engine: &ThetaEngine<T>,
    tau: &PeriodMatrix<T>,
    tuple: &[Characteristic; 5],
) -> Result<T> {
    let z = PhasePoint::zero(tau.genus())?;
    let mut x = [Complex::new(T::zero(), T::zero()); 5];
    for (xi, &n) in x.iter_mut().zip(tuple) {
        *xi = engine.theta(tau, &z, n)?.powi(4);
    }
    Ok(term_evaluation(&igusa_terms(&x)).normalized())
}

/// Threshold used by [`igusa_tuple_search`].
pub const IGUSA_SEARCH_THRESHOLD: f64 = 1e-8;

/// Ordered 5-tuples of distinct even genus-2 characteristics, in
/// lexicographic order of characteristic indices.
pub fn even_five_tuples() -> Vec<[Characteristic; 5]> {
    let evens: Vec<Characteristic> =
        enumerate_characteristics(2, ParityFilter::Even).expect("genus 2").sorted().members().to_vec();
    let mut out = Vec::with_capacity(30240);
    let n = evens.len();
    for a in 0..n {
        for b in (0..n).filter(|&b| b != a) {
            for c in (0..n).filter(|&c| c != a && c != b) {
                for d in (0..n).filter(|&d| ![a, b, c].contains(&d)) {
                    for e in (0..n).filter(|&e| ![a, b, c, d].contains(&e)) {
                        out.push([evens[a], evens[b], evens[c], evens[d], evens[e]]);
                    }
                }
            }
        }
    }
    out
}

/// First ordered tuple of even characteristics on which the Igusa quartic
/// in the fourth powers vanishes at every sample.
pub fn igusa_tuple_search<T: Real>(
    engine: &ThetaEngine<T>,
    samples: &[PeriodMatrix<T>],
) -> Result<[Characteristic; 5]> {
    if samples.len() < 3 {
        return Err(Error::Precondition("at least 3 sample period matrices are needed".into()));
    }
    if let Some(s) = samples.iter().find(|s| s.genus() != 2) {
        return Err(Error::GenusMismatch { expected: 2, found: s.genus() });
    }
    let z = PhasePoint::zero(2)?;
    let fourth: Vec<Vec<Complex<T>>> = samples
        .iter()
        .map(|tau| {
            (0..16)
                .map(|i| engine.theta(tau, &z, Characteristic::from_index(2, i)?).map(|v| v.powi(4)))
                .collect()
        })
        .collect::<Result<_>>()?;
    let threshold = T::from_f64_lossy(IGUSA_SEARCH_THRESHOLD);
    even_five_tuples()
        .into_iter()
        .find(|tuple| {
            fourth.iter().all(|f| {
                let x = tuple.map(|n| f[n.index()]);
                term_evaluation(&igusa_terms(&x)).normalized() < threshold
            })
        })
        .ok_or_else(|| {
            Error::NotFound(format!("no ordered even 5-tuple satisfies the Igusa quartic at {} samples", samples.len()))
        })
}

/// Seven representative vectors v₁…v₇ ∈ C³, none zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointConfig2<R> {
    v: [[R; 3]; 7],
}

impl<R: Ring> PointConfig2<R> {
    pub fn new(v: [[R; 3]; 7]) -> Result<Self> {
        if let Some(i) = v.iter().position(|p| p.iter().all(|c| c.is_zero())) {
            return Err(Error::Precondition(format!("v{} is zero", i + 1)));
        }
        Ok(Self { v })
    }

    pub fn vectors(&self) -> &[[R; 3]; 7] {
        &self.v
    }

    /// v ↦ A·v for every point.
    pub fn transformed(&self, a: &linalg::Mat3<R>) -> Result<Self> {
        Self::new(self.v.clone().map(|p| linalg::mat_vec(a, &p, 3)))
    }
}

/// (ijk) = det(vᵢ, vⱼ, v_k), 1-based indices.
pub fn bracket<R: Ring>(cfg: &PointConfig2<R>, i: u8, j: u8, k: u8) -> Result<R> {
    if [i, j, k].iter().any(|&n| !(1..=7).contains(&n)) || i == j || j == k || i == k {
        return Err(Error::Precondition(format!("bracket ({i}{j}{k}) needs three distinct indices in 1..7")));
    }
    let v = cfg.vectors();
    let m = [v[i as usize - 1].clone(), v[j as usize - 1].clone(), v[k as usize - 1].clone()];
    Ok(linalg::det(&m, 3))
}

/// Product of the seven brackets of a Fano family.
pub fn g_fano<R: Ring>(cfg: &PointConfig2<R>, family: &FanoFamily) -> R {
    family.triples().iter().fold(R::one(), |acc, t| acc * bracket(cfg, t[0], t[1], t[2]).expect("valid triple"))
}

/// (123)(145)(167)((246)(356)(257)(347) − (256)(357)(247)(346)) after the
/// relabeling 1→c, 2→a₁, 3→b₁, 4→a₂, 5→b₂, 6→a₃, 7→b₃ for the family with
/// common index c and pairs (aₖ bₖ).
pub fn g_pascal<R: Ring>(cfg: &PointConfig2<R>, family: &PascalFamily) -> R {
    let [[a1, b1], [a2, b2], [a3, b3]] = *family.pairs();
    let sigma = [family.common(), a1, b1, a2, b2, a3, b3];
    let b = |i: usize, j: usize, k: usize| bracket(cfg, sigma[i - 1], sigma[j - 1], sigma[k - 1]).expect("distinct");
    b(1, 2, 3)
        * b(1, 4, 5)
        * b(1, 6, 7)
        * (b(2, 4, 6) * b(3, 5, 6) * b(2, 5, 7) * b(3, 4, 7) - b(2, 5, 6) * b(3, 5, 7) * b(2, 4, 7) * b(3, 4, 6))
}

/// Values of all 30 G_F followed by all 105 G_P at one configuration.
pub fn bracket_invariants<R: Ring>(cfg: &PointConfig2<R>) -> Vec<R> {
    FanoFamily::all()
        .iter()
        .map(|f| g_fano(cfg, f))
        .chain(PascalFamily::all().iter().map(|p| g_pascal(cfg, p)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    fn cfg1(x: [i64; 6]) -> PointConfig1<i64> {
        PointConfig1::new(x).unwrap()
    }

    #[test]
    fn tableau_validation_and_listing() {
        assert!(Tableau::new([1, 2, 3], [4, 5, 6]).is_ok());
        assert!(Tableau::new([2, 1, 3], [4, 5, 6]).is_err());
        assert!(Tableau::new([1, 4, 5], [2, 3, 6]).is_err());
        assert!(Tableau::new([1, 2, 3], [4, 5, 5]).is_err());
        let all = Tableau::all();
        assert_eq!(all.len(), 15);
        let std: Vec<_> = all.iter().filter(|t| t.is_standard()).collect();
        assert_eq!(std.len(), 5);
        for t in standard_tableaux() {
            assert!(t.is_standard());
        }
    }

    #[test]
    fn tableau_products() {
        let c = cfg1([0, 1, 3, 7, 15, 31]);
        let [t0, _, _, _, t4] = standard_invariants(&c);
        assert_eq!(t0, (0 - 1) * (3 - 7) * (15 - 31));
        assert_eq!(t4, (0 - 7) * (1 - 15) * (3 - 31));
        let coincide = PointConfig1::new_unchecked([5i64, 5, 1, 2, 3, 4]);
        assert_eq!(tableau_invariant(&standard_tableaux()[0], &coincide), 0);
        assert!(PointConfig1::new([1i64, 2, 3, 4, 5, 1]).is_err());
    }

    #[test]
    fn segre_vanishes_exactly_over_rationals() {
        let r = |n: i64, d: i64| Rational64::new(n, d);
        let c = PointConfig1::new([r(1, 2), r(-3, 7), r(5, 1), r(2, 9), r(-11, 4), r(13, 3)]).unwrap();
        assert_eq!(segre_eval(&standard_invariants(&c)), Rational64::from_integer(0));
        assert_eq!(segre_eval(&[0i64; 5]), 0);
        assert_eq!(igusa_eval(&[0i64; 5]), 0);
    }

    #[test]
    fn igusa_expansion_matches_formula() {
        let x = [2i64, -3, 5, 7, 11];
        let direct = (x[0] * x[1] + x[0] * x[2] + x[1] * x[2] - x[3] * x[4]).pow(2)
            - 4 * x[0] * x[1] * x[2] * x.iter().sum::<i64>();
        assert_eq!(igusa_eval(&x), direct);
        assert_eq!(igusa_terms(&x).len(), 15);
    }

    #[test]
    fn five_tuple_count() {
        let t = even_five_tuples();
        assert_eq!(t.len(), 30240);
        assert!(t.windows(2).all(|w| w[0].map(|c| c.index()) < w[1].map(|c| c.index())));
    }

    fn basis_cfg() -> PointConfig2<i64> {
        PointConfig2::new([[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1], [1, 2, 3], [2, -1, 5], [3, 1, -2]]).unwrap()
    }

    #[test]
    fn brackets() {
        let c = basis_cfg();
        assert_eq!(bracket(&c, 1, 2, 3).unwrap(), 1);
        assert_eq!(bracket(&c, 2, 1, 3).unwrap(), -1);
        assert!(bracket(&c, 1, 1, 3).is_err());
        assert!(bracket(&c, 0, 1, 3).is_err());
        assert!(PointConfig2::new([[0i64; 3]; 7]).is_err());
        let mut v = *c.vectors();
        v[2] = [1, 1, 0];
        let collinear = PointConfig2::new(v).unwrap();
        assert_eq!(bracket(&collinear, 1, 2, 3).unwrap(), 0);
        assert_eq!(g_fano(&collinear, &FanoFamily::reference()), 0);
        assert_ne!(g_fano(&c, &FanoFamily::reference()), 0);
    }

    #[test]
    fn reference_pascal_is_printed_polynomial() {
        let c = basis_cfg();
        let b = |i, j, k| bracket(&c, i, j, k).unwrap();
        let printed = b(1, 2, 3)
            * b(1, 4, 5)
            * b(1, 6, 7)
            * (b(2, 4, 6) * b(3, 5, 6) * b(2, 5, 7) * b(3, 4, 7) - b(2, 5, 6) * b(3, 5, 7) * b(2, 4, 7) * b(3, 4, 6));
        assert_eq!(g_pascal(&c, &PascalFamily::reference()), printed);
        assert_eq!(bracket_invariants(&c).len(), 135);
    }
}
