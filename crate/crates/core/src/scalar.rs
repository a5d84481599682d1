//! Scalar abstraction for the floating point parts of the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, NumAssign};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

/// Real floating point scalar used for transforms, channels and detectors.
pub trait Real:
    Float + FloatConst + NumAssign + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Elementwise tolerance for residual and structure checks. `1e-9` for
    /// `f64`; looser for `f32`, which cannot resolve that.
    const TOLERANCE: Self;

    fn lit(v: f64) -> Self;

    fn from_usize(v: usize) -> Self {
        Self::lit(v as f64)
    }

    fn sample_standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self;

    /// Circularly-symmetric complex Gaussian sample with the given variance.
    fn sample_complex_normal<R: Rng + ?Sized>(rng: &mut R, variance: Self) -> Complex<Self> {
        let s = (variance / Self::lit(2.0)).sqrt();
        let re = Self::sample_standard_normal(rng);
        let im = Self::sample_standard_normal(rng);
        Complex::new(re * s, im * s)
    }
}

impl Real for f64 {
    const TOLERANCE: Self = 1e-9;

    fn lit(v: f64) -> Self {
        v
    }

    fn sample_standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        StandardNormal.sample(rng)
    }
}

impl Real for f32 {
    const TOLERANCE: Self = 1e-4;

    fn lit(v: f64) -> Self {
        v as f32
    }

    fn sample_standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        StandardNormal.sample(rng)
    }
}

/// `e^{j theta}`.
pub fn cis<T: Real>(theta: T) -> Complex<T> {
    Complex::new(theta.cos(), theta.sin())
}
