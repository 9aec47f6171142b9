//! Scalar abstraction for the closed-form layer.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive};

/// Real floating point scalar: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static
{
}

impl<T> Real for T where
    T: Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static
{
}

/// Converts an `f64` literal into `T`.
#[inline]
pub(crate) fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("literal representable in every float type")
}

#[inline]
pub(crate) fn cplx<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

#[inline]
pub(crate) fn imag_unit<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::one())
}

/// `exp(z) - 1` without cancellation for small `|z|`.
pub(crate) fn exp_m1<T: Real>(z: Complex<T>) -> Complex<T> {
    let (s, c) = z.im.sin_cos();
    let half_sin = (z.im / lit(2.0)).sin();
    let cos_m1 = -lit::<T>(2.0) * half_sin * half_sin;
    let em1 = z.re.exp_m1();
    Complex::new(em1 * c + cos_m1, z.re.exp() * s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_m1_matches_direct_for_moderate_arguments() {
        for &(re, im) in &[(0.3, -1.2), (-2.0, 0.5), (1e-9, 1e-9), (0.0, 3.0)] {
            let z = Complex::new(re, im);
            let direct = z.exp() - 1.0;
            assert!((exp_m1(z) - direct).norm() < 1e-15 * (1.0 + direct.norm()) + 1e-15);
        }
        let tiny = Complex::new(1e-12_f64, -2e-12);
        assert!((exp_m1(tiny) - (tiny + tiny * tiny / 2.0)).norm() < 1e-30);
    }
}
