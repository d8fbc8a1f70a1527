//! Scalar abstractions.
//!
//! The numerical code is written against [`Real`] (IEEE floats, `f32` or
//! `f64`) and works with `Complex<T>`. Polynomial evaluators (quartics,
//! brackets, binary invariants) only need ring operations and are written
//! against [`Ring`], so they run unchanged over floats, complex numbers and
//! exact rationals.

use std::fmt::Debug;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, Num};

/// Floating point scalar: `f32` or `f64`.
pub trait Real: Float + FloatConst + FromPrimitive + Debug + Default + Send + Sync + 'static {
    fn from_f64_lossy(x: f64) -> Self {
        Self::from_f64(x).expect("f64 is representable")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Commutative ring with unit, enough to evaluate integer polynomials.
pub trait Ring: Clone + Num {}

impl<T: Clone + Num> Ring for T {}

/// Embeds an integer into a ring by double-and-add on `one`.
pub fn ring_int<R: Ring>(n: i64) -> R {
    let mut acc = R::zero();
    let mut base = R::one();
    let mut k = n.unsigned_abs();
    while k > 0 {
        if k & 1 == 1 {
            acc = acc + base.clone();
        }
        base = base.clone() + base;
        k >>= 1;
    }
    if n < 0 {
        R::zero() - acc
    } else {
        acc
    }
}

pub(crate) fn real<T: Real>(x: f64) -> T {
    T::from_f64_lossy(x)
}

/// `exp(pi * i * a)` for complex `a`.
pub(crate) fn exp_pi_i<T: Real>(a: Complex<T>) -> Complex<T> {
    (Complex::new(T::zero(), T::PI()) * a).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    #[test]
    fn ring_int_embeds_integers() {
        assert_eq!(ring_int::<i64>(-13), -13);
        assert_eq!(ring_int::<f64>(1024), 1024.0);
        assert_eq!(ring_int::<Rational64>(7), Rational64::from_integer(7));
        assert_eq!(ring_int::<Complex<f64>>(-4), Complex::new(-4.0, 0.0));
        assert_eq!(ring_int::<i64>(0), 0);
    }
}
