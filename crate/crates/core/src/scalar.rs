//! Scalar abstraction shared by all numerical modules.
//!
//! Everything in this crate is written against [`Real`], so the same code
//! runs in `f64` (the default everywhere) and in `f32` for quick, low
//! precision sweeps. Tolerances quoted in the docs assume `f64`.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point scalar: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + rustfft::FftNum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal. Infallible for the supported types.
    #[inline]
    fn lit(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        <Self as FromPrimitive>::from_usize(n).expect("usize representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        ToPrimitive::to_f64(&self).expect("finite scalar")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex number over the crate scalar.
pub type Cplx<T> = Complex<T>;

#[inline]
pub(crate) fn cplx<T: Real>(re: T, im: T) -> Cplx<T> {
    Complex::new(re, im)
}

/// Imaginary unit.
#[inline]
pub(crate) fn j<T: Real>() -> Cplx<T> {
    Complex::new(T::zero(), T::one())
}

#[inline]
pub(crate) fn re<T: Real>(x: T) -> Cplx<T> {
    Complex::new(x, T::zero())
}

#[inline]
pub(crate) fn is_finite_c<T: Real>(z: Cplx<T>) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// `sech(x)` without overflow for large `|x|`.
#[inline]
pub(crate) fn sech<T: Real>(x: T) -> T {
    let ax = x.abs();
    let e = (-ax).exp();
    let two = T::lit(2.0);
    two * e / (T::one() + e * e)
}

/// `1 / (e^{-x} + e^{x})` without overflow.
#[inline]
pub(crate) fn half_sech<T: Real>(x: T) -> T {
    sech(x) / T::lit(2.0)
}

/// `e^{-x} / (e^{-x} + e^{x})`, i.e. `1 / (1 + e^{2x})`.
#[inline]
pub(crate) fn logistic_weight<T: Real>(x: T) -> T {
    let two_x = T::lit(2.0) * x;
    if two_x > T::zero() {
        let e = (-two_x).exp();
        e / (T::one() + e)
    } else {
        T::one() / (T::one() + two_x.exp())
    }
}
