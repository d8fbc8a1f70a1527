//! Quartic forms in the second-order theta variables `x_ε = Θ[ε](τ, z)`: the
//! fifteen translation-invariant genus-3 quartics, the Coble quartic as an
//! integer combination of them with the coefficient vector s, its gradient
//! cubics, the genus-2 universal Kummer surface, and functional-equation
//! checks under the two generators τ ↦ τ + S and τ ↦ −τ⁻¹.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{self, Mat3};
use crate::modular::{SVector, ThetaConstants};
use crate::scalar::{exp_pi_i, real, ring_int, Real, Ring};
use crate::theta::{PeriodMatrix, PhasePoint, ThetaEngine};

/// One of Q₀₀₀, Q_α, Q′_α (α ∈ F₂³ ∖ {0}, stored as a 3-bit integer with the
/// leftmost bit most significant).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum QuarticLabel {
    /// Σ x_ε⁴.
    Base,
    /// ½ Σ x_ε² x_{ε+α}².
    Square(u8),
    /// ¼ Σ ∏_{μ∈α^⊥} x_{ε+μ}.
    Coset(u8),
}

impl QuarticLabel {
    /// The fifteen labels in the order Q₀₀₀, Q₀₀₁…Q₁₁₁, Q′₀₀₁…Q′₁₁₁.
    pub fn all() -> [QuarticLabel; 15] {
        std::array::from_fn(|i| match i {
            0 => QuarticLabel::Base,
            1..=7 => QuarticLabel::Square(i as u8),
            _ => QuarticLabel::Coset(i as u8 - 7),
        })
    }

    pub fn position(self) -> usize {
        match self {
            QuarticLabel::Base => 0,
            QuarticLabel::Square(a) => a as usize,
            QuarticLabel::Coset(a) => a as usize + 7,
        }
    }

    fn validate(self) -> Result<Self> {
        match self {
            QuarticLabel::Square(a) | QuarticLabel::Coset(a) if a == 0 || a > 7 => {
                Err(Error::InvalidLabel(format!("α = {a} must be a nonzero 3-bit vector")))
            }
            _ => Ok(self),
        }
    }
}

impl fmt::Display for QuarticLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuarticLabel::Base => write!(f, "Q_000"),
            QuarticLabel::Square(a) => write!(f, "Q_{a:03b}"),
            QuarticLabel::Coset(a) => write!(f, "Q'_{a:03b}"),
        }
    }
}

impl FromStr for QuarticLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidLabel(s.to_string());
        let (coset, bits) = if let Some(rest) = s.strip_prefix("Q'_") {
            (true, rest)
        } else if let Some(rest) = s.strip_prefix("Q_") {
            (false, rest)
        } else {
            return Err(bad());
        };
        if bits.len() != 3 || !bits.chars().all(|c| c == '0' || c == '1') {
            return Err(bad());
        }
        let a = u8::from_str_radix(bits, 2).map_err(|_| bad())?;
        match (coset, a) {
            (false, 0) => Ok(QuarticLabel::Base),
            (true, 0) => Err(bad()),
            (false, a) => Ok(QuarticLabel::Square(a)),
            (true, a) => Ok(QuarticLabel::Coset(a)),
        }
    }
}

impl Serialize for QuarticLabel {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Exponent vector of a monomial in up to eight variables `x_ε`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Monomial {
    exps: [u8; 8],
}

impl Monomial {
    pub fn from_factors(factors: &[usize]) -> Self {
        let mut exps = [0u8; 8];
        for &i in factors {
            exps[i] += 1;
        }
        Self { exps }
    }

    pub fn exponents(&self) -> &[u8; 8] {
        &self.exps
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().map(|&e| u32::from(e)).sum()
    }

    pub fn eval<R: Ring>(&self, x: &[R]) -> R {
        self.exps.iter().enumerate().filter(|(_, &e)| e > 0).fold(R::one(), |acc, (i, &e)| {
            (0..e).fold(acc, |a, _| a * x[i].clone())
        })
    }

    /// ∂/∂x_var evaluated at `x`.
    pub fn derivative<R: Ring>(&self, var: usize, x: &[R]) -> R {
        let e = self.exps[var];
        if e == 0 {
            return R::zero();
        }
        let mut lowered = *self;
        lowered.exps[var] -= 1;
        ring_int::<R>(i64::from(e)) * lowered.eval(x)
    }
}

/// α^⊥ for the standard dot product on F₂³.
fn perp(alpha: u8) -> [usize; 4] {
    let mut out = [0usize; 4];
    let mut k = 0;
    for mu in 0..8u8 {
        if (mu & alpha).count_ones() % 2 == 0 {
            out[k] = mu as usize;
            k += 1;
        }
    }
    out
}

/// The distinct monomials of a labelled quartic; each has coefficient 1.
pub fn q_basis_monomials(label: QuarticLabel) -> Result<Vec<Monomial>> {
    let mut set = std::collections::BTreeSet::new();
    match label.validate()? {
        QuarticLabel::Base => {
            for e in 0..8 {
                set.insert(Monomial::from_factors(&[e, e, e, e]));
            }
        }
        QuarticLabel::Square(a) => {
            for e in 0..8 {
                let f = e ^ a as usize;
                set.insert(Monomial::from_factors(&[e, e, f, f]));
            }
        }
        QuarticLabel::Coset(a) => {
            let p = perp(a);
            for e in 0..8 {
                set.insert(Monomial::from_factors(&p.map(|mu| e ^ mu)));
            }
        }
    }
    Ok(set.into_iter().collect())
}

/// Evaluates a labelled quartic at eight values `x_ε`.
pub fn q_basis_eval<R: Ring>(label: QuarticLabel, x: &[R]) -> Result<R> {
    check_len(x, 8)?;
    Ok(q_basis_monomials(label)?.iter().fold(R::zero(), |acc, m| acc + m.eval(x)))
}

/// Gradient of a labelled quartic at `x`.
pub fn q_basis_gradient<R: Ring>(label: QuarticLabel, x: &[R]) -> Result<Vec<R>> {
    check_len(x, 8)?;
    let monos = q_basis_monomials(label)?;
    Ok((0..8).map(|v| monos.iter().fold(R::zero(), |acc, m| acc + m.derivative(v, x))).collect())
}

fn check_len<R>(x: &[R], n: usize) -> Result<()> {
    if x.len() == n {
        Ok(())
    } else {
        Err(Error::Precondition(format!("expected {n} variables, got {}", x.len())))
    }
}

/// A homogeneous quartic with explicit monomial coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct QuarticForm<R> {
    variables: usize,
    coefficients: BTreeMap<Monomial, R>,
}

impl<R: Ring> QuarticForm<R> {
    pub fn zero(variables: usize) -> Self {
        Self { variables, coefficients: BTreeMap::new() }
    }

    pub fn from_label(label: QuarticLabel) -> Result<Self> {
        let mut f = Self::zero(8);
        for m in q_basis_monomials(label)? {
            f.add_term(m, R::one())?;
        }
        Ok(f)
    }

    /// Adds `c·m`, dropping the monomial if its coefficient cancels.
    pub fn add_term(&mut self, m: Monomial, c: R) -> Result<()> {
        if m.degree() != 4 || m.exps[self.variables..].iter().any(|&e| e > 0) {
            return Err(Error::Precondition("not a quartic monomial in the form's variables".into()));
        }
        let entry = self.coefficients.entry(m).or_insert_with(R::zero);
        *entry = entry.clone() + c;
        if entry.is_zero() {
            self.coefficients.remove(&m);
        }
        Ok(())
    }

    pub fn variables(&self) -> usize {
        self.variables
    }

    pub fn coefficients(&self) -> &BTreeMap<Monomial, R> {
        &self.coefficients
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn eval(&self, x: &[R]) -> R {
        self.coefficients.iter().fold(R::zero(), |acc, (m, c)| acc + c.clone() * m.eval(x))
    }
}

/// Integer matrix of the Coble quartic: row `i` gives the coefficient of
/// the `i`-th label of [`QuarticLabel::all`] as a combination of s₁…s₁₅.
pub const COBLE_MATRIX: [[i64; 15]; 15] = [
    //s1  s2  s3  s4  s5  s6  s7  s8  s9 s10 s11 s12 s13 s14 s15
    [1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [-2, 0, 0, 0, 0, -4, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [-2, 0, -4, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [-2, 0, 0, 0, 0, 0, 0, 0, -4, 0, 0, 0, 0, 0, 0],
    [-2, -4, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [-2, 0, 0, 0, 0, 0, -4, 0, 0, 0, 0, 0, 0, 0, 0],
    [-2, 0, 0, -4, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [-2, 0, 0, 0, 0, 0, 0, 0, 0, 4, 0, 0, 0, 0, 0],
    [8, 8, 8, 8, 16, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [8, 8, 0, 0, 0, 8, 8, 16, 0, 0, 0, 0, 0, 0, 0],
    [8, 8, 0, 0, 0, 0, 0, 0, 8, -8, 16, 0, 0, 0, 0],
    [8, 0, 8, 0, 0, 8, 0, 0, 8, 0, 0, 16, 0, 0, 0],
    [8, 0, 8, 0, 0, 0, 8, 0, 0, -8, 0, 0, 16, 0, 0],
    [8, 0, 0, 8, 0, 8, 0, 0, 0, -8, 0, 0, 0, 16, 0],
    [8, 0, 0, 8, 0, 0, 8, 0, 8, 0, 0, 0, 0, 0, 16],
];

/// Coefficients a(Q) of the fifteen labelled quartics as functions of s.
pub fn coble_coefficients<R: Ring>(s: &[R]) -> Result<[R; 15]> {
    check_len(s, 15)?;
    Ok(std::array::from_fn(|row| {
        COBLE_MATRIX[row]
            .iter()
            .zip(s)
            .filter(|(&c, _)| c != 0)
            .fold(R::zero(), |acc, (&c, si)| acc + ring_int::<R>(c) * si.clone())
    }))
}

/// Number of monomials of the Coble quartic as a polynomial in the s-values
/// and the x-variables: Σ over labels of (nonzero matrix entries) × (distinct
/// x-monomials of the label).
pub fn coble_monomial_count() -> usize {
    QuarticLabel::all()
        .iter()
        .map(|&l| {
            let s_terms = COBLE_MATRIX[l.position()].iter().filter(|&&c| c != 0).count();
            s_terms * q_basis_monomials(l).expect("valid label").len()
        })
        .sum()
}

/// The Coble quartic in x for fixed coefficient values s.
pub fn coble_form<R: Ring>(s: &[R]) -> Result<QuarticForm<R>> {
    let a = coble_coefficients(s)?;
    let mut f = QuarticForm::zero(8);
    for l in QuarticLabel::all() {
        for m in q_basis_monomials(l)? {
            f.add_term(m, a[l.position()].clone())?;
        }
    }
    Ok(f)
}

/// A value with the scale used to normalize it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Evaluation<T: Real> {
    pub value: Complex<T>,
    /// Largest modulus among the summed terms.
    pub scale: T,
}

impl<T: Real> Evaluation<T> {
    /// `|value| / scale`, or 0 when every term vanishes.
    pub fn normalized(&self) -> T {
        if self.scale == T::zero() {
            T::zero()
        } else {
            self.value.norm() / self.scale
        }
    }

    fn from_terms(terms: impl IntoIterator<Item = Complex<T>>) -> Self {
        let mut value = Complex::new(T::zero(), T::zero());
        let mut scale = T::zero();
        for t in terms {
            value = value + t;
            scale = scale.max(t.norm());
        }
        Self { value, scale }
    }
}

/// Σ a(Q)·Q(x) with term scale max |a(Q)·Q(x)|.
pub fn coble_polynomial_eval<T: Real>(s: &[Complex<T>], x: &[Complex<T>]) -> Result<Evaluation<T>> {
    let a = coble_coefficients(s)?;
    let terms = QuarticLabel::all()
        .iter()
        .map(|&l| Ok(a[l.position()] * q_basis_eval(l, x)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(Evaluation::from_terms(terms))
}

/// ∂/∂x_ε of Σ a(Q)·Q(x), each normalized by max_Q |a(Q)·∂Q/∂x_ε|.
pub fn coble_polynomial_gradient<T: Real>(s: &[Complex<T>], x: &[Complex<T>]) -> Result<Vec<Evaluation<T>>> {
    let a = coble_coefficients(s)?;
    let grads = QuarticLabel::all()
        .iter()
        .map(|&l| q_basis_gradient(l, x))
        .collect::<Result<Vec<_>>>()?;
    Ok((0..8)
        .map(|v| Evaluation::from_terms(QuarticLabel::all().iter().map(|&l| a[l.position()] * grads[l.position()][v])))
        .collect())
}

fn check_genus(tau: &PeriodMatrix<impl Real>, g: usize) -> Result<()> {
    if tau.genus() == g {
        Ok(())
    } else {
        Err(Error::GenusMismatch { expected: g, found: tau.genus() })
    }
}

/// C(τ, z) with x_ε = Θ[ε](τ, z) and s = s(τ).
pub fn coble_eval<T: Real>(engine: &ThetaEngine<T>, tau: &PeriodMatrix<T>, z: &PhasePoint<T>) -> Result<Evaluation<T>> {
    check_genus(tau, 3)?;
    let s = ThetaConstants::compute(engine, tau)?.s_vector()?;
    coble_polynomial_eval(s.values(), &engine.theta2_all(tau, z)?)
}

/// The eight cubics ∂C/∂x_ε at x = Θ(τ, z).
pub fn coble_gradient<T: Real>(
    engine: &ThetaEngine<T>,
    tau: &PeriodMatrix<T>,
    z: &PhasePoint<T>,
) -> Result<Vec<Evaluation<T>>> {
    check_genus(tau, 3)?;
    let s = ThetaConstants::compute(engine, tau)?.s_vector()?;
    coble_polynomial_gradient(s.values(), &engine.theta2_all(tau, z)?)
}

/// (α₀, …, α₄) = (s₁, −(s₁+2s₂), −(s₁+2s₃), −(s₁+2s₄), 2(s₁+s₂+s₃+s₄+2s₅)).
pub fn kummer2_alphas<R: Ring>(s: &[R]) -> Result<[R; 5]> {
    check_len(s, 5)?;
    let two = ring_int::<R>(2);
    let neg = |r: R| R::zero() - r;
    let s1 = s[0].clone();
    Ok([
        s1.clone(),
        neg(s1.clone() + two.clone() * s[1].clone()),
        neg(s1.clone() + two.clone() * s[2].clone()),
        neg(s1.clone() + two.clone() * s[3].clone()),
        two.clone() * (s1 + s[1].clone() + s[2].clone() + s[3].clone() + two * s[4].clone()),
    ])
}

/// The five terms α₀ Σx⁴, 2α₁(x₀₀²x₁₀² + x₀₁²x₁₁²), 2α₂(x₀₀²x₀₁² + x₁₀²x₁₁²),
/// 2α₃(x₀₀²x₁₁² + x₁₀²x₀₁²), 4α₄ x₀₀x₀₁x₁₀x₁₁, with variables indexed
/// x₀₀, x₀₁, x₁₀, x₁₁.
pub fn kummer2_terms<R: Ring>(s: &[R], x: &[R]) -> Result<[R; 5]> {
    check_len(x, 4)?;
    let [a0, a1, a2, a3, a4] = kummer2_alphas(s)?;
    let sq = |i: usize| x[i].clone() * x[i].clone();
    let two = ring_int::<R>(2);
    let four = ring_int::<R>(4);
    Ok([
        a0 * (0..4).fold(R::zero(), |acc, i| acc + sq(i) * sq(i)),
        two.clone() * a1 * (sq(0) * sq(2) + sq(1) * sq(3)),
        two.clone() * a2 * (sq(0) * sq(1) + sq(2) * sq(3)),
        two * a3 * (sq(0) * sq(3) + sq(2) * sq(1)),
        four * a4 * x[0].clone() * x[1].clone() * x[2].clone() * x[3].clone(),
    ])
}

/// K(τ, z) for genus 2.
pub fn kummer2_eval<T: Real>(engine: &ThetaEngine<T>, tau: &PeriodMatrix<T>, z: &PhasePoint<T>) -> Result<Evaluation<T>> {
    check_genus(tau, 2)?;
    let s = ThetaConstants::compute(engine, tau)?.s_vector()?;
    let x = engine.theta2_all(tau, z)?;
    Ok(Evaluation::from_terms(kummer2_terms(s.values(), &x)?))
}

/// Generators of Sp(6, Z) used in the functional-equation checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ModularGenerator {
    /// (I S; 0 I) with `S` integer symmetric: τ ↦ τ + S.
    Translation([[i64; 3]; 3]),
    /// (0 I; −I 0): τ ↦ −τ⁻¹, with Cτ + D = −τ.
    Inversion,
}

/// γ·τ, the factor M = Cτ + D and the matrix C for a generator.
fn apply_generator<T: Real>(
    gen: &ModularGenerator,
    tau: &PeriodMatrix<T>,
) -> Result<(PeriodMatrix<T>, Mat3<Complex<T>>, Mat3<Complex<T>>)> {
    let g = tau.genus();
    let zero = Complex::new(T::zero(), T::zero());
    let mut ident = [[zero; 3]; 3];
    for (i, row) in ident.iter_mut().enumerate().take(g) {
        row[i] = Complex::new(T::one(), T::zero());
    }
    match gen {
        ModularGenerator::Translation(s) => Ok((tau.translated(s)?, ident, [[zero; 3]; 3])),
        ModularGenerator::Inversion => {
            let m = tau.matrix().map(|row| row.map(|x| -x));
            let c = ident.map(|row| row.map(|x| -x));
            Ok((tau.inverted()?, m, c))
        }
    }
}

/// |C(γτ, M⁻ᵗz) − det(M)¹⁶ e^{8πi zᵗM⁻¹Cz} C(τ, z)|, normalized by the larger
/// of the two term scales, with M = Cτ + D.
pub fn jacobi_form_residual<T: Real>(
    engine: &ThetaEngine<T>,
    gen: &ModularGenerator,
    tau: &PeriodMatrix<T>,
    z: &PhasePoint<T>,
) -> Result<T> {
    check_genus(tau, 3)?;
    let (gtau, m, c) = apply_generator(gen, tau)?;
    let minv = linalg::inverse(&m, 3)?;
    let zp = z.transformed(&linalg::transpose(&minv));
    let lhs = coble_eval(engine, &gtau, &zp)?;
    let rhs = coble_eval(engine, tau, z)?;
    let mc = linalg::mat_mul(&minv, &c, 3);
    let zv: [Complex<T>; 3] = std::array::from_fn(|i| if i < 3 { z.coords()[i] } else { Complex::new(T::zero(), T::zero()) });
    let q = linalg::mat_vec(&mc, &zv, 3).iter().zip(&zv).fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| acc + a * b);
    let factor = linalg::det(&m, 3).powi(16) * exp_pi_i(q * real::<T>(8.0));
    let diff = lhs.value - factor * rhs.value;
    let scale = lhs.scale.max(factor.norm() * rhs.scale);
    Ok(if scale == T::zero() { T::zero() } else { diff.norm() / scale })
}

/// The quartic `x ↦ Σ a(s(τ))·Q(x)` at a generic point transforms as
/// `C_{γτ}(ρx) = σ·det(Cτ+D)¹⁴·C_τ(x)`, with ρ = diag(i^{εᵗSε}), σ = 1 for a
/// translation and ρ = H/√8 (H_{αε} = (−1)^{α·ε}), σ = −1 for the inversion.
/// Returns the normalized residual of that identity at `x`.
pub fn quartic_covariance_residual<T: Real>(
    engine: &ThetaEngine<T>,
    gen: &ModularGenerator,
    tau: &PeriodMatrix<T>,
    x: &[Complex<T>],
) -> Result<T> {
    check_genus(tau, 3)?;
    check_len(x, 8)?;
    let (gtau, m, _) = apply_generator(gen, tau)?;
    let s = ThetaConstants::compute(engine, tau)?.s_vector()?;
    let gs = ThetaConstants::compute(engine, &gtau)?.s_vector()?;
    let (rho_x, sign): (Vec<Complex<T>>, T) = match gen {
        ModularGenerator::Translation(sm) => {
            let rx = (0..8usize)
                .map(|e| {
                    let bits: [i64; 3] = std::array::from_fn(|i| ((e >> (2 - i)) & 1) as i64);
                    let q: i64 = (0..3).flat_map(|i| (0..3).map(move |j| (i, j))).map(|(i, j)| bits[i] * sm[i][j] * bits[j]).sum();
                    x[e] * i_power::<T>(q)
                })
                .collect();
            (rx, T::one())
        }
        ModularGenerator::Inversion => {
            let norm = real::<T>(8.0f64.sqrt());
            let rx = (0..8usize)
                .map(|a| {
                    (0..8usize).fold(Complex::new(T::zero(), T::zero()), |acc, e| {
                        if (a & e).count_ones() % 2 == 0 {
                            acc + x[e]
                        } else {
                            acc - x[e]
                        }
                    }) / norm
                })
                .collect();
            (rx, -T::one())
        }
    };
    let lhs = coble_polynomial_eval(gs.values(), &rho_x)?;
    let rhs = coble_polynomial_eval(s.values(), x)?;
    let factor = linalg::det(&m, 3).powi(14) * sign;
    let diff = lhs.value - factor * rhs.value;
    let scale = lhs.scale.max(factor.norm() * rhs.scale);
    Ok(if scale == T::zero() { T::zero() } else { diff.norm() / scale })
}

fn i_power<T: Real>(k: i64) -> Complex<T> {
    match k.rem_euclid(4) {
        0 => Complex::new(T::one(), T::zero()),
        1 => Complex::new(T::zero(), T::one()),
        2 => Complex::new(-T::one(), T::zero()),
        _ => Complex::new(T::zero(), -T::one()),
    }
}

/// One record of the exported formula: a label and its integer combination
/// of the s-values (1-based keys, zero entries omitted).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CobleFormulaRecord {
    pub quartic_label: QuarticLabel,
    pub integer_combination: BTreeMap<usize, i64>,
}

pub fn coble_formula_records() -> Vec<CobleFormulaRecord> {
    QuarticLabel::all()
        .iter()
        .map(|&l| CobleFormulaRecord {
            quartic_label: l,
            integer_combination: COBLE_MATRIX[l.position()]
                .iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(|(i, &c)| (i + 1, c))
                .collect(),
        })
        .collect()
}

/// Convenience wrapper: the s-vector must have genus 3.
pub fn coble_from_svector<T: Real>(s: &SVector<T>, x: &[Complex<T>]) -> Result<Evaluation<T>> {
    if s.genus() != 3 {
        return Err(Error::UnsupportedGenus(s.genus()));
    }
    coble_polynomial_eval(s.values(), x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    #[test]
    fn label_round_trip() {
        for l in QuarticLabel::all() {
            assert_eq!(l.to_string().parse::<QuarticLabel>().unwrap(), l);
        }
        assert_eq!(QuarticLabel::Coset(3).to_string(), "Q'_011");
        assert!("Q'_000".parse::<QuarticLabel>().is_err());
        assert!("Q_12".parse::<QuarticLabel>().is_err());
        assert!(q_basis_eval(QuarticLabel::Square(0), &[1i64; 8]).is_err());
    }

    #[test]
    fn basis_values() {
        let mut e0 = [0i64; 8];
        e0[0] = 1;
        assert_eq!(q_basis_eval(QuarticLabel::Base, &e0).unwrap(), 1);
        for a in 1..8 {
            assert_eq!(q_basis_eval(QuarticLabel::Square(a), &[1i64; 8]).unwrap(), 4);
            assert_eq!(q_basis_eval(QuarticLabel::Coset(a), &[1i64; 8]).unwrap(), 2);
        }
        assert_eq!(perp(0b011), [0b000, 0b011, 0b100, 0b111]);
        let x: Vec<i64> = (1..=8).collect();
        let grad = q_basis_gradient(QuarticLabel::Base, &x).unwrap();
        assert_eq!(grad, x.iter().map(|v| 4 * v * v * v).collect::<Vec<_>>());
    }

    #[test]
    fn coefficient_examples() {
        let mut e1 = [0i64; 15];
        e1[0] = 1;
        assert_eq!(coble_coefficients(&e1).unwrap(), [1, -2, -2, -2, -2, -2, -2, -2, 8, 8, 8, 8, 8, 8, 8]);
        let mut e10 = [0i64; 15];
        e10[9] = 1;
        assert_eq!(coble_coefficients(&e10).unwrap(), [0, 0, 0, 0, 0, 0, 0, 4, 0, 0, -8, 0, -8, -8, 0]);
        assert_eq!(coble_monomial_count(), 134);
    }

    #[test]
    fn basis_is_independent() {
        let monos: Vec<Monomial> = {
            let mut all: Vec<Monomial> =
                QuarticLabel::all().iter().flat_map(|&l| q_basis_monomials(l).unwrap()).collect();
            all.sort();
            all.dedup();
            all
        };
        let rows: Vec<Vec<Rational64>> = QuarticLabel::all()
            .iter()
            .map(|&l| {
                let f = QuarticForm::<Rational64>::from_label(l).unwrap();
                monos.iter().map(|m| f.coefficients().get(m).copied().unwrap_or_default()).collect()
            })
            .collect();
        assert_eq!(linalg::exact_rank(rows), 15);
    }

    #[test]
    fn single_surviving_term() {
        let s: Vec<Complex<f64>> = (1..=15).map(|i| Complex::new(i as f64 * 0.3, -0.1)).collect();
        let mut x = vec![Complex::new(0.0, 0.0); 8];
        x[0] = Complex::new(1.0, 0.0);
        let ev = coble_polynomial_eval(&s, &x).unwrap();
        assert!((ev.normalized() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn assembled_form_matches_structured_evaluation() {
        let s: Vec<Complex<f64>> = (1..=15).map(|i| Complex::new((i as f64).sin(), (i as f64).cos())).collect();
        let x: Vec<Complex<f64>> = (0..8).map(|i| Complex::new(0.3 * i as f64 - 1.0, 0.1 * i as f64)).collect();
        let f = coble_form(&s).unwrap();
        let ev = coble_polynomial_eval(&s, &x).unwrap();
        assert!((f.eval(&x) - ev.value).norm() < 1e-12 * ev.scale);
        assert_eq!(f.len(), 50);
    }

    #[test]
    fn records_match_matrix() {
        let recs = coble_formula_records();
        assert_eq!(recs.len(), 15);
        assert_eq!(recs[7].quartic_label, QuarticLabel::Square(7));
        assert_eq!(recs[7].integer_combination, BTreeMap::from([(1, -2), (10, 4)]));
    }

    #[test]
    fn kummer_alpha_pattern() {
        let s = [1i64, 10, 100, 1000, 10000];
        assert_eq!(kummer2_alphas(&s).unwrap(), [1, -21, -201, -2001, 2 * (1 + 10 + 100 + 1000 + 20000)]);
    }
}
