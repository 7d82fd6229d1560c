//! Floating-point scalar abstraction shared by every solver in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::num::ParseFloatError;
use std::str::FromStr;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real scalar type the numerical core is generic over (`f32` or `f64`).
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Default
    + Debug
    + Display
    + FromStr<Err = ParseFloatError>
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` constant into this scalar.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    /// Converts a count into this scalar.
    #[inline]
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }

    /// `x`, raised to a small multiple of machine epsilon when the type cannot resolve it.
    ///
    /// Tolerances in the crate are stated for double precision; single precision
    /// falls back to what it can actually reach.
    #[inline]
    fn tol(x: f64) -> Self {
        Self::lit(x).max(Self::epsilon() * Self::lit(64.0))
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite scalar")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex amplitude over a [`Real`] scalar.
pub type C<T> = Complex<T>;

#[inline]
pub(crate) fn c<T: Real>(re: T, im: T) -> C<T> {
    Complex::new(re, im)
}

#[inline]
pub(crate) fn re<T: Real>(x: T) -> C<T> {
    Complex::new(x, T::zero())
}

/// `Σ conj(a_i) b_i`.
pub fn inner<T: Real>(a: &[C<T>], b: &[C<T>]) -> C<T> {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .fold(C::new(T::zero(), T::zero()), |acc, (x, y)| {
            acc + x.conj() * y
        })
}

pub fn norm_sqr<T: Real>(a: &[C<T>]) -> T {
    a.iter().map(|x| x.norm_sqr()).sum()
}

pub fn norm<T: Real>(a: &[C<T>]) -> T {
    norm_sqr(a).sqrt()
}

/// `y ← y + alpha·x`.
pub(crate) fn axpy<T: Real>(alpha: C<T>, x: &[C<T>], y: &mut [C<T>]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

pub(crate) fn scale<T: Real>(alpha: T, x: &mut [C<T>]) {
    for xi in x.iter_mut() {
        *xi *= alpha;
    }
}
