//! Real scalar abstraction shared by every numerical module.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating-point type the simulation can run in.
///
/// The tolerances are the precision-dependent thresholds used for
/// invariant checks: `TOL` for algebraic identities (normalization,
/// Hermiticity, trace) and `PSD_TOL` for eigenvalue positivity.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    const TOL: f64;
    const PSD_TOL: f64;

    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn tol() -> Self {
        Self::lit(Self::TOL)
    }

    #[inline]
    fn psd_tol() -> Self {
        Self::lit(Self::PSD_TOL)
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable")
    }
}

impl Real for f64 {
    const TOL: f64 = 1e-12;
    const PSD_TOL: f64 = 1e-10;
}

impl Real for f32 {
    const TOL: f64 = 1e-5;
    const PSD_TOL: f64 = 1e-4;
}

pub type C<T> = Complex<T>;

#[inline]
pub(crate) fn cplx<T: Real>(re: T, im: T) -> C<T> {
    Complex::new(re, im)
}

#[inline]
pub(crate) fn creal<T: Real>(re: T) -> C<T> {
    Complex::new(re, T::zero())
}

/// `e^{i 2π num / den}` with the exponent reduced modulo `den` first.
pub(crate) fn root_of_unity<T: Real>(num: i64, den: usize) -> C<T> {
    let r = num.rem_euclid(den as i64) as usize;
    let theta = T::TAU() * T::from_usize_lossy(r) / T::from_usize_lossy(den);
    Complex::from_polar(T::one(), theta)
}
