//! Theta functions with characteristics, second-order theta functions and
//! their z-gradients at the origin, evaluated as truncated lattice sums with
//! a certified bound on the discarded tail.

use nalgebra::DMatrix;
use num_complex::Complex;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::characteristics::{Characteristic, MAX_GENUS};
use crate::error::{Error, Result};
use crate::linalg::{self, Mat3};
use crate::scalar::{exp_pi_i, real, Real};

/// A point of the Siegel upper half-space in genus `g ≤ 3`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PeriodMatrix<T: Real> {
    genus: usize,
    tau: Mat3<Complex<T>>,
    lambda_min: T,
}

/// JSON form of a period matrix: `{"g": n, "re": [[..]], "im": [[..]]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeriodMatrixData {
    pub g: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

fn check_genus(genus: usize) -> Result<()> {
    if (1..=MAX_GENUS).contains(&genus) {
        Ok(())
    } else {
        Err(Error::UnsupportedGenus(genus))
    }
}

/// Smallest eigenvalue of the leading `n×n` block of a real symmetric matrix.
fn smallest_eigenvalue(m: &[[f64; 3]; 3], n: usize) -> f64 {
    DMatrix::from_fn(n, n, |i, j| m[i][j]).symmetric_eigen().eigenvalues.min()
}

impl<T: Real> PeriodMatrix<T> {
    /// Validates symmetry, finiteness and positive definiteness of `Im τ`.
    pub fn new(genus: usize, tau: Mat3<Complex<T>>) -> Result<Self> {
        check_genus(genus)?;
        let mut scale = T::zero();
        for i in 0..genus {
            for j in 0..genus {
                let x = tau[i][j];
                if !x.re.is_finite() || !x.im.is_finite() {
                    return Err(Error::NonFinite);
                }
                scale = scale.max(x.norm());
            }
        }
        let sym_tol = real::<T>(64.0) * T::epsilon() * scale;
        for i in 0..genus {
            for j in 0..i {
                if (tau[i][j] - tau[j][i]).norm() > sym_tol {
                    return Err(Error::NotSymmetric);
                }
            }
        }
        let mut clean = [[Complex::new(T::zero(), T::zero()); 3]; 3];
        let mut im = [[0.0f64; 3]; 3];
        for i in 0..genus {
            for j in 0..genus {
                let v = (tau[i][j] + tau[j][i]) / real::<T>(2.0);
                clean[i][j] = v;
                im[i][j] = v.im.to_f64().unwrap_or(f64::NAN);
            }
        }
        let lambda = smallest_eigenvalue(&im, genus);
        if lambda.is_nan() || lambda <= 0.0 {
            return Err(Error::NotPositiveDefinite(lambda));
        }
        Ok(Self { genus, tau: clean, lambda_min: real(lambda) })
    }

    pub fn from_parts(re: &[Vec<f64>], im: &[Vec<f64>]) -> Result<Self> {
        let g = re.len();
        check_genus(g)?;
        if im.len() != g || re.iter().chain(im).any(|row| row.len() != g) {
            return Err(Error::Precondition("period matrix must be square".into()));
        }
        let mut tau = [[Complex::new(T::zero(), T::zero()); 3]; 3];
        for i in 0..g {
            for j in 0..g {
                tau[i][j] = Complex::new(real(re[i][j]), real(im[i][j]));
            }
        }
        Self::new(g, tau)
    }

    pub fn from_data(data: &PeriodMatrixData) -> Result<Self> {
        if data.re.len() != data.g {
            return Err(Error::GenusMismatch { expected: data.g, found: data.re.len() });
        }
        Self::from_parts(&data.re, &data.im)
    }

    pub fn to_data(&self) -> PeriodMatrixData {
        let part = |f: fn(&Complex<T>) -> T| -> Vec<Vec<f64>> {
            (0..self.genus)
                .map(|i| (0..self.genus).map(|j| f(&self.tau[i][j]).to_f64().unwrap_or(f64::NAN)).collect())
                .collect()
        };
        PeriodMatrixData { g: self.genus, re: part(|c| c.re), im: part(|c| c.im) }
    }

    /// `i·I_g`.
    pub fn imaginary_identity(genus: usize) -> Result<Self> {
        check_genus(genus)?;
        let mut tau = [[Complex::new(T::zero(), T::zero()); 3]; 3];
        for (i, row) in tau.iter_mut().enumerate().take(genus) {
            row[i] = Complex::new(T::zero(), T::one());
        }
        Self::new(genus, tau)
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn matrix(&self) -> &Mat3<Complex<T>> {
        &self.tau
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex<T> {
        self.tau[i][j]
    }

    /// Smallest eigenvalue of `Im τ`.
    pub fn lambda_min(&self) -> T {
        self.lambda_min
    }

    pub fn det(&self) -> Complex<T> {
        linalg::det(&self.tau, self.genus)
    }

    pub fn inverse(&self) -> Result<Mat3<Complex<T>>> {
        linalg::inverse(&self.tau, self.genus)
    }

    /// `k·τ` for `k > 0`.
    pub fn scaled(&self, k: T) -> Result<Self> {
        Self::new(self.genus, self.tau.map(|row| row.map(|x| x * k)))
    }

    /// `τ + S` for an integer symmetric `S`.
    pub fn translated(&self, s: &[[i64; 3]; 3]) -> Result<Self> {
        let mut tau = self.tau;
        for (i, row) in tau.iter_mut().enumerate().take(self.genus) {
            for (j, x) in row.iter_mut().enumerate().take(self.genus) {
                if s[i][j] != s[j][i] {
                    return Err(Error::NotSymmetric);
                }
                *x = *x + Complex::new(real(s[i][j] as f64), T::zero());
            }
        }
        Self::new(self.genus, tau)
    }

    /// `−τ⁻¹`.
    pub fn inverted(&self) -> Result<Self> {
        let inv = self.inverse()?;
        Self::new(self.genus, inv.map(|row| row.map(|x| -x)))
    }
}

/// A point `z ∈ C^g`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhasePoint<T: Real> {
    genus: usize,
    z: [Complex<T>; 3],
}

/// JSON form of a phase point: `{"re": [..], "im": [..]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhasePointData {
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl<T: Real> PhasePoint<T> {
    pub fn new(genus: usize, z: [Complex<T>; 3]) -> Result<Self> {
        check_genus(genus)?;
        if z[..genus].iter().any(|x| !x.re.is_finite() || !x.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let mut clean = [Complex::new(T::zero(), T::zero()); 3];
        clean[..genus].copy_from_slice(&z[..genus]);
        Ok(Self { genus, z: clean })
    }

    pub fn from_slice(z: &[Complex<T>]) -> Result<Self> {
        check_genus(z.len())?;
        let mut arr = [Complex::new(T::zero(), T::zero()); 3];
        arr[..z.len()].copy_from_slice(z);
        Self::new(z.len(), arr)
    }

    pub fn from_data(data: &PhasePointData) -> Result<Self> {
        if data.re.len() != data.im.len() {
            return Err(Error::Precondition("re and im must have equal length".into()));
        }
        let z: Vec<Complex<T>> = data.re.iter().zip(&data.im).map(|(&a, &b)| Complex::new(real(a), real(b))).collect();
        Self::from_slice(&z)
    }

    pub fn to_data(&self) -> PhasePointData {
        let f = |x: T| x.to_f64().unwrap_or(f64::NAN);
        PhasePointData {
            re: self.coords().iter().map(|c| f(c.re)).collect(),
            im: self.coords().iter().map(|c| f(c.im)).collect(),
        }
    }

    pub fn zero(genus: usize) -> Result<Self> {
        Self::new(genus, [Complex::new(T::zero(), T::zero()); 3])
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn coords(&self) -> &[Complex<T>] {
        &self.z[..self.genus]
    }

    pub fn is_zero(&self) -> bool {
        self.coords().iter().all(|c| c.re == T::zero() && c.im == T::zero())
    }

    pub fn scaled(&self, k: T) -> Self {
        Self { genus: self.genus, z: self.z.map(|c| c * k) }
    }

    pub fn neg(&self) -> Self {
        self.scaled(-T::one())
    }

    /// `M z` for a complex matrix `M`.
    pub fn transformed(&self, m: &Mat3<Complex<T>>) -> Self {
        Self { genus: self.genus, z: linalg::mat_vec(m, &self.z, self.genus) }
    }

    /// `‖Im z‖₁`.
    pub fn imag_norm1(&self) -> T {
        self.coords().iter().fold(T::zero(), |acc, c| acc + c.im.abs())
    }
}

/// Summation radius with the tail bound it achieves.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TruncationSpec<T> {
    pub radius: usize,
    pub tol: T,
    pub certified_tail_bound: T,
}

const MAX_RADIUS: usize = 256;

/// Number of lattice points with `|p|_∞ = k` in `Z^g`.
fn shell_size(g: usize, k: usize) -> f64 {
    if k == 0 {
        1.0
    } else {
        ((2 * k + 1) as f64).powi(g as i32) - ((2 * k - 1) as f64).powi(g as i32)
    }
}

/// Bound on Σ_{|p|_∞ > r} of the term moduli. A shell term with `|p|_∞ = k`
/// has `|p + m′/2|² ≥ (k − ½)²` and `|vᵗ Im z| ≤ (k + ½)‖Im z‖₁`; `weight`
/// multiplies the shell by `(2π(k + ½))^weight` to cover differentiated
/// series. The shell bounds are log-concave in `k`, so once consecutive
/// shells shrink by a ratio `q < 1` the rest is dominated by a geometric
/// series.
pub fn tail_bound(g: usize, lambda: f64, imag_norm1: f64, r: usize, weight: i32) -> f64 {
    let shell = |k: usize| -> f64 {
        let kf = k as f64;
        let gauss = -std::f64::consts::PI * lambda * (kf - 0.5) * (kf - 0.5)
            + 2.0 * std::f64::consts::PI * imag_norm1 * (kf + 0.5);
        shell_size(g, k) * gauss.exp() * (2.0 * std::f64::consts::PI * (kf + 0.5)).powi(weight)
    };
    let mut total = 0.0;
    let mut k = r + 1;
    loop {
        let t = shell(k);
        let next = shell(k + 1);
        total += t;
        if t == 0.0 {
            return total;
        }
        let q = next / t;
        if q < 0.5 {
            return total + next / (1.0 - q);
        }
        k += 1;
        if k > 100_000 {
            return f64::INFINITY;
        }
    }
}

fn radius_for(g: usize, lambda: f64, imag_norm1: f64, tol: f64, weight: i32) -> Result<(usize, f64)> {
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::InvalidTolerance(tol));
    }
    for r in 0..=MAX_RADIUS {
        let bound = tail_bound(g, lambda, imag_norm1, r, weight);
        if bound < tol {
            return Ok((r, bound));
        }
    }
    Err(Error::Unstable(format!("no radius up to {MAX_RADIUS} reaches tolerance {tol:e}")))
}

/// Minimal radius whose certified tail bound is below `tol`.
pub fn truncation_radius<T: Real>(tau: &PeriodMatrix<T>, z: &PhasePoint<T>, tol: T) -> Result<TruncationSpec<T>> {
    let f = |x: T| x.to_f64().unwrap_or(f64::NAN);
    let (radius, bound) = radius_for(tau.genus(), f(tau.lambda_min()), f(z.imag_norm1()), f(tol), 0)?;
    Ok(TruncationSpec { radius, tol, certified_tail_bound: real(bound) })
}

/// Calls `f` with every lattice point of `[−r, r]^g`.
fn for_each_lattice_point(g: usize, r: usize, mut f: impl FnMut([i64; 3])) {
    let r = r as i64;
    let range = |d: usize| if d < g { -r..=r } else { 0..=0 };
    for a in range(0) {
        for b in range(1) {
            for c in range(2) {
                f([a, b, c]);
            }
        }
    }
}

/// Evaluates theta series to a fixed absolute tolerance.
#[derive(Clone, Copy, Debug)]
pub struct ThetaEngine<T: Real> {
    tol: T,
}

impl<T: Real> Default for ThetaEngine<T> {
    fn default() -> Self {
        Self { tol: T::epsilon() / real(4.0) }
    }
}

impl<T: Real> ThetaEngine<T> {
    pub fn new(tol: T) -> Result<Self> {
        if !(tol > T::zero()) || !tol.is_finite() {
            return Err(Error::InvalidTolerance(tol.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(Self { tol })
    }

    pub fn tol(&self) -> T {
        self.tol
    }

    fn check(tau: &PeriodMatrix<T>, z: &PhasePoint<T>) -> Result<()> {
        if tau.genus() != z.genus() {
            return Err(Error::GenusMismatch { expected: tau.genus(), found: z.genus() });
        }
        Ok(())
    }

    /// `Σ_p exp πi[vᵗτv + 2vᵗ(z + m″/2)]`, `v = p + m′/2`, at a fixed radius.
    pub fn theta_at_radius(&self, tau: &PeriodMatrix<T>, z: &PhasePoint<T>, m: Characteristic, r: usize) -> Complex<T> {
        let g = tau.genus();
        let half = real::<T>(0.5);
        let shift: [T; 3] = std::array::from_fn(|i| if i < g { real::<T>(m.top_bit(i) as f64) * half } else { T::zero() });
        let w: [Complex<T>; 3] = std::array::from_fn(|i| {
            if i < g {
                z.coords()[i] + Complex::new(real::<T>(m.bottom_bit(i) as f64) * half, T::zero())
            } else {
                Complex::new(T::zero(), T::zero())
            }
        });
        let t = tau.matrix();
        let mut sum = Complex::new(T::zero(), T::zero());
        for_each_lattice_point(g, r, |p| {
            let v: [T; 3] = std::array::from_fn(|i| real::<T>(p[i] as f64) + shift[i]);
            let mut a = Complex::new(T::zero(), T::zero());
            for i in 0..g {
                let mut row = Complex::new(T::zero(), T::zero());
                for j in 0..g {
                    row = row + t[i][j] * v[j];
                }
                a = a + (row + w[i] * real::<T>(2.0)) * v[i];
            }
            sum = sum + exp_pi_i(a);
        });
        sum
    }

    /// θ_m(τ, z). Odd characteristics at `z = 0` give exactly zero.
    pub fn theta(&self, tau: &PeriodMatrix<T>, z: &PhasePoint<T>, m: Characteristic) -> Result<Complex<T>> {
        Self::check(tau, z)?;
        if m.genus() != tau.genus() {
            return Err(Error::GenusMismatch { expected: tau.genus(), found: m.genus() });
        }
        if m.is_odd() && z.is_zero() {
            return Ok(Complex::new(T::zero(), T::zero()));
        }
        let spec = truncation_radius(tau, z, self.tol)?;
        Ok(self.theta_at_radius(tau, z, m, spec.radius))
    }

    /// Θ[ε](τ, z) = θ[ε; 0](2τ, 2z), summed directly as
    /// `Σ_p exp 2πi[vᵗτv + 2vᵗz]`, `v = p + ε/2`; `eps` holds g bits.
    pub fn theta2(&self, tau: &PeriodMatrix<T>, z: &PhasePoint<T>, eps: u8) -> Result<Complex<T>> {
        Self::check(tau, z)?;
        let g = tau.genus();
        if u32::from(eps) >> g != 0 {
            return Err(Error::InvalidCharacteristic(format!("{eps:b} has more than {g} bits")));
        }
        let f = |x: T| x.to_f64().unwrap_or(f64::NAN);
        let (r, _) = radius_for(g, 2.0 * f(tau.lambda_min()), 2.0 * f(z.imag_norm1()), f(self.tol), 0)?;
        let half = real::<T>(0.5);
        let two = real::<T>(2.0);
        let shift: [T; 3] = std::array::from_fn(|i| if i < g { real::<T>(((eps >> (g - 1 - i)) & 1) as f64) * half } else { T::zero() });
        let t = tau.matrix();
        let zc = z.coords();
        let mut sum = Complex::new(T::zero(), T::zero());
        for_each_lattice_point(g, r, |p| {
            let v: [T; 3] = std::array::from_fn(|i| real::<T>(p[i] as f64) + shift[i]);
            let mut a = Complex::new(T::zero(), T::zero());
            for i in 0..g {
                let mut row = Complex::new(T::zero(), T::zero());
                for j in 0..g {
                    row = row + t[i][j] * v[j];
                }
                a = a + (row + zc[i] * two) * v[i];
            }
            sum = sum + exp_pi_i(a * two);
        });
        Ok(sum)
    }

    /// All `2^g` second-order theta values, indexed by ε.
    pub fn theta2_all(&self, tau: &PeriodMatrix<T>, z: &PhasePoint<T>) -> Result<Vec<Complex<T>>> {
        (0..1u8 << tau.genus()).map(|e| self.theta2(tau, z, e)).collect()
    }

    /// All `4^g` theta constants, indexed by characteristic index.
    pub fn theta_constants(&self, tau: &PeriodMatrix<T>) -> Result<Vec<Complex<T>>> {
        let g = tau.genus();
        let z = PhasePoint::zero(g)?;
        (0..1usize << (2 * g)).map(|i| self.theta(tau, &z, Characteristic::from_index(g, i)?)).collect()
    }

    /// ∇_z θ_m(τ, z) at `z = 0` for odd `m`, by term-wise differentiation.
    pub fn theta_gradient(&self, tau: &PeriodMatrix<T>, m: Characteristic) -> Result<Vec<Complex<T>>> {
        let g = tau.genus();
        if m.genus() != g {
            return Err(Error::GenusMismatch { expected: g, found: m.genus() });
        }
        if m.is_even() {
            return Err(Error::Precondition(format!("gradient at 0 of even {m} vanishes")));
        }
        let f = |x: T| x.to_f64().unwrap_or(f64::NAN);
        let (r, _) = radius_for(g, f(tau.lambda_min()), 0.0, f(self.tol), 1)?;
        let half = real::<T>(0.5);
        let shift: [T; 3] = std::array::from_fn(|i| if i < g { real::<T>(m.top_bit(i) as f64) * half } else { T::zero() });
        let bottom: [T; 3] = std::array::from_fn(|i| if i < g { real::<T>(m.bottom_bit(i) as f64) } else { T::zero() });
        let t = tau.matrix();
        let mut grad = vec![Complex::new(T::zero(), T::zero()); g];
        for_each_lattice_point(g, r, |p| {
            let v: [T; 3] = std::array::from_fn(|i| real::<T>(p[i] as f64) + shift[i]);
            let mut a = Complex::new(T::zero(), T::zero());
            for i in 0..g {
                let mut row = Complex::new(bottom[i], T::zero());
                for j in 0..g {
                    row = row + t[i][j] * v[j];
                }
                a = a + row * v[i];
            }
            let e = exp_pi_i(a);
            for (gi, vi) in grad.iter_mut().zip(v) {
                *gi = *gi + e * vi;
            }
        });
        let two_pi_i = Complex::new(T::zero(), T::PI() * real::<T>(2.0));
        Ok(grad.into_iter().map(|x| x * two_pi_i).collect())
    }

    /// det of the matrix whose rows are the gradients of `g` distinct odd
    /// theta functions.
    pub fn jacobian_det(&self, tau: &PeriodMatrix<T>, ms: &[Characteristic]) -> Result<Complex<T>> {
        let g = tau.genus();
        if ms.len() != g {
            return Err(Error::Precondition(format!("need {g} characteristics, got {}", ms.len())));
        }
        for (i, a) in ms.iter().enumerate() {
            if ms[..i].contains(a) {
                return Err(Error::DuplicateMember(a.to_string()));
            }
        }
        let mut mat = [[Complex::new(T::zero(), T::zero()); 3]; 3];
        for (row, &m) in mat.iter_mut().zip(ms) {
            for (x, d) in row.iter_mut().zip(self.theta_gradient(tau, m)?) {
                *x = d;
            }
        }
        Ok(linalg::det(&mat, g))
    }
}

/// Random period matrix `X + iY`: `X` symmetric with entries uniform in
/// [−½, ½], `Y = I + WWᵗ` with `W` uniform in [0, 0.3]. `λ_min(Y) ≥ 1`.
pub fn random_period_matrix<T: Real, R: Rng + ?Sized>(genus: usize, rng: &mut R) -> Result<PeriodMatrix<T>> {
    check_genus(genus)?;
    let mut x = [[0.0f64; 3]; 3];
    let mut w = [[0.0f64; 3]; 3];
    for i in 0..genus {
        for j in 0..genus {
            if j >= i {
                x[i][j] = rng.random_range(-0.5..0.5);
                x[j][i] = x[i][j];
            }
            w[i][j] = rng.random_range(0.0..0.3);
        }
    }
    let mut tau = [[Complex::new(T::zero(), T::zero()); 3]; 3];
    for i in 0..genus {
        for j in 0..genus {
            let y = f64::from(u8::from(i == j)) + (0..genus).map(|k| w[i][k] * w[j][k]).sum::<f64>();
            tau[i][j] = Complex::new(real(x[i][j]), real(y));
        }
    }
    PeriodMatrix::new(genus, tau)
}

/// Random `z` with real and imaginary parts uniform in [−½, ½].
pub fn random_phase_point<T: Real, R: Rng + ?Sized>(genus: usize, rng: &mut R) -> Result<PhasePoint<T>> {
    check_genus(genus)?;
    let mut z = [Complex::new(T::zero(), T::zero()); 3];
    for c in z.iter_mut().take(genus) {
        *c = Complex::new(real(rng.random_range(-0.5..0.5)), real(rng.random_range(-0.5..0.5)));
    }
    PhasePoint::new(genus, z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(s: &str) -> Characteristic {
        s.parse().unwrap()
    }

    #[test]
    fn rejects_bad_period_matrices() {
        let z = Complex::new(0.0, 0.0);
        let i = Complex::new(0.0, 1.0);
        let asym = [[i, Complex::new(0.1, 0.0), z], [z, i, z], [z, z, i]];
        assert_eq!(PeriodMatrix::<f64>::new(2, asym), Err(Error::NotSymmetric));
        let indef = [[i, z, z], [z, -i, z], [z, z, i]];
        assert!(matches!(PeriodMatrix::<f64>::new(2, indef), Err(Error::NotPositiveDefinite(_))));
        let nan = [[Complex::new(f64::NAN, 1.0), z, z], [z; 3], [z; 3]];
        assert_eq!(PeriodMatrix::<f64>::new(1, nan), Err(Error::NonFinite));
    }

    #[test]
    fn radius_examples() {
        let tau = PeriodMatrix::<f64>::imaginary_identity(3).unwrap();
        let z = PhasePoint::zero(3).unwrap();
        let spec = truncation_radius(&tau, &z, 1e-12).unwrap();
        assert!(spec.radius <= 6);
        assert!(spec.certified_tail_bound <= 1e-12);
        let doubled = truncation_radius(&tau.scaled(2.0).unwrap(), &z, 1e-12).unwrap();
        assert!(doubled.radius <= spec.radius);
        assert!(truncation_radius(&tau, &z, 0.0).is_err());
    }

    #[test]
    fn genus1_constant_against_long_sum() {
        let tau = PeriodMatrix::<f64>::imaginary_identity(1).unwrap();
        let z = PhasePoint::zero(1).unwrap();
        let engine = ThetaEngine::default();
        let v = engine.theta(&tau, &z, c("0;0")).unwrap();
        let oracle: f64 = (-25i32..=25).map(|n| (-std::f64::consts::PI * f64::from(n * n)).exp()).sum();
        assert!((v - Complex::new(oracle, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn odd_constants_are_exact_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let tau = random_period_matrix::<f64, _>(3, &mut rng).unwrap();
        let consts = ThetaEngine::default().theta_constants(&tau).unwrap();
        for (i, v) in consts.iter().enumerate() {
            let m = Characteristic::from_index(3, i).unwrap();
            if m.is_odd() {
                assert_eq!(*v, Complex::new(0.0, 0.0));
            } else {
                assert!(v.norm() > 1e-3);
            }
        }
    }

    #[test]
    fn theta2_matches_theta_route() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let engine = ThetaEngine::default();
        for g in 1..=3 {
            let tau = random_period_matrix::<f64, _>(g, &mut rng).unwrap();
            let z = random_phase_point::<f64, _>(g, &mut rng).unwrap();
            let tau2 = tau.scaled(2.0).unwrap();
            let z2 = z.scaled(2.0);
            for eps in 0..1u8 << g {
                let direct = engine.theta2(&tau, &z, eps).unwrap();
                let via = engine.theta(&tau2, &z2, Characteristic::new(g, eps, 0).unwrap()).unwrap();
                assert!((direct - via).norm() < 1e-13 * (1.0 + via.norm()));
                let flipped = engine.theta2(&tau, &z.neg(), eps).unwrap();
                assert!((direct - flipped).norm() < 1e-13 * (1.0 + direct.norm()));
            }
        }
    }

    #[test]
    fn genus1_jacobi_derivative() {
        let tau = PeriodMatrix::<f64>::imaginary_identity(1).unwrap();
        let engine = ThetaEngine::default();
        let z = PhasePoint::zero(1).unwrap();
        let d = engine.theta_gradient(&tau, c("1;1")).unwrap()[0];
        let rhs = -std::f64::consts::PI
            * engine.theta(&tau, &z, c("0;0")).unwrap()
            * engine.theta(&tau, &z, c("0;1")).unwrap()
            * engine.theta(&tau, &z, c("1;0")).unwrap();
        assert!((d - rhs).norm() < 1e-12 * rhs.norm());
    }

    #[test]
    fn gradient_rejects_even_and_det_rejects_repeats() {
        let tau = PeriodMatrix::<f64>::imaginary_identity(2).unwrap();
        let engine = ThetaEngine::default();
        assert!(engine.theta_gradient(&tau, c("00;00")).is_err());
        assert!(engine.jacobian_det(&tau, &[c("01;01"), c("01;01")]).is_err());
        assert!(engine.jacobian_det(&tau, &[c("01;01")]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let tau = random_period_matrix::<f64, _>(3, &mut rng).unwrap();
        let json = serde_json::to_string(&tau.to_data()).unwrap();
        let back = PeriodMatrix::<f64>::from_data(&serde_json::from_str(&json).unwrap()).unwrap();
        assert_eq!(back, tau);
        let z = PhasePoint::<f64>::from_data(&PhasePointData { re: vec![0.1, 0.2], im: vec![0.0, -0.3] }).unwrap();
        assert_eq!(z.genus(), 2);
    }
}
