//! Scalar abstraction shared by every numerical routine in the crate.

use nalgebra::RealField;
use num_complex::Complex;
use num_traits::{FromPrimitive, ToPrimitive};

/// Real floating point scalar: `f32` or `f64`.
///
/// Everything in the crate is generic over this trait; the `f64` aliases at the
/// crate root are what the experiment runner uses.
pub trait Real: RealField + Copy + FromPrimitive + ToPrimitive + Default {}

impl Real for f32 {}
impl Real for f64 {}

/// Complex scalar over a [`Real`].
pub type C<T> = Complex<T>;

#[inline]
pub fn is_nan<T: Real>(x: T) -> bool {
    x.partial_cmp(&x).is_none()
}

/// Converts an `f64` literal into `T`.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("f64 literal representable in T")
}

/// Converts a `T` into `f64` for reporting.
#[inline]
pub fn to_f64<T: Real>(x: T) -> f64 {
    x.to_f64().expect("T convertible to f64")
}

#[inline]
pub fn cplx<T: Real>(re: T, im: T) -> C<T> {
    Complex::new(re, im)
}

#[inline]
pub fn creal<T: Real>(re: T) -> C<T> {
    Complex::new(re, T::zero())
}

/// `e^{iθ}`.
#[inline]
pub fn cis<T: Real>(theta: T) -> C<T> {
    Complex::new(theta.cos(), theta.sin())
}

/// Squared modulus without the square root.
#[inline]
pub fn abs2<T: Real>(z: C<T>) -> T {
    z.re * z.re + z.im * z.im
}

/// A tolerance stated for double precision, widened so that it stays
/// meaningful for `f32` (never below 1024 ulps at unit scale).
#[inline]
pub fn tol<T: Real>(x: f64) -> T {
    let floor = T::default_epsilon() * lit(1024.0);
    let t = lit(x);
    if t > floor {
        t
    } else {
        floor
    }
}
