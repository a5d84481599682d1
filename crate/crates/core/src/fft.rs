//! Unitary DFT: an instrumented radix-2 decimation-in-time FFT and the dense
//! `O(N^2)` reference it is checked against.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{cis, Real};
use crate::transforms::OpCount;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Kernel `e^{-j 2π k n / N}`.
    Forward,
    /// Kernel `e^{+j 2π k n / N}`.
    Inverse,
}

impl Direction {
    fn sign<T: Real>(self) -> T {
        match self {
            Direction::Forward => -T::one(),
            Direction::Inverse => T::one(),
        }
    }
}

/// `e^{±j 2π k / N}` for `k = 0..N`.
pub fn twiddles<T: Real>(n: usize, direction: Direction) -> Vec<Complex<T>> {
    let step = direction.sign::<T>() * T::TAU() / T::from_usize(n.max(1));
    (0..n).map(|k| cis(step * T::from_usize(k))).collect()
}

/// Dense unitary DFT, `1/√N Σ x[n] e^{∓j2πkn/N}`.
pub fn dft_unitary<T: Real>(x: &[Complex<T>], direction: Direction) -> Vec<Complex<T>> {
    let n = x.len();
    if n == 0 {
        return Vec::new();
    }
    let w = twiddles::<T>(n, direction);
    let scale = T::one() / T::from_usize(n).sqrt();
    (0..n)
        .map(|k| {
            x.iter()
                .enumerate()
                .fold(Complex::new(T::zero(), T::zero()), |acc, (i, &v)| {
                    acc + v * w[(k * i) % n]
                })
                * scale
        })
        .collect()
}

/// Radix-2 DIT FFT with `1/√N` scaling.
///
/// The returned count covers the butterflies only: `(N/2) log2 N` twiddle
/// multiplies and `N log2 N` complex additions, every twiddle counted even
/// when it is trivial. The final unitary scaling is not counted.
pub fn fft_unitary<T: Real>(
    x: &[Complex<T>],
    direction: Direction,
) -> Result<(Vec<Complex<T>>, OpCount)> {
    let n = x.len();
    if !n.is_power_of_two() {
        return Err(Error::NotPowerOfTwo { what: "fft", n });
    }
    let mut out = x.to_vec();
    let ops = fft_in_place(&mut out, direction);
    let scale = T::one() / T::from_usize(n).sqrt();
    out.iter_mut().for_each(|v| *v *= scale);
    Ok((out, ops))
}

pub(crate) fn fft_in_place<T: Real>(buf: &mut [Complex<T>], direction: Direction) -> OpCount {
    let n = buf.len();
    let mut ops = OpCount::default();
    if n <= 1 {
        return ops;
    }
    let bits = n.trailing_zeros();
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if j > i {
            buf.swap(i, j);
        }
    }
    let w = twiddles::<T>(n, direction);
    let mut len = 2;
    while len <= n {
        let half = len / 2;
        let stride = n / len;
        for start in (0..n).step_by(len) {
            for k in 0..half {
                let t = buf[start + k + half] * w[k * stride];
                let u = buf[start + k];
                buf[start + k] = u + t;
                buf[start + k + half] = u - t;
                ops.complex_mul(1);
                ops.complex_add(2);
            }
        }
        len <<= 1;
    }
    ops
}
