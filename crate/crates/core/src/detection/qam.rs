//! Square M-QAM with per-axis Gray labelling.

use num_complex::Complex;
use rand::Rng;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Points `(2n_1 − 1 − √M) + j(2n_2 − 1 − √M)`, optionally rescaled.
///
/// Symbol index `s` carries `log2 M` bits, most significant first: the upper
/// half selects the in-phase level, the lower half the quadrature level, each
/// Gray coded.
#[derive(Debug, Clone, PartialEq)]
pub struct QamConstellation<T> {
    m: usize,
    side: usize,
    bits_per_axis: usize,
    scale: T,
    points: Vec<Complex<T>>,
    alpha2: T,
    beta2: T,
}

fn gray(v: usize) -> usize {
    v ^ (v >> 1)
}

fn gray_inverse(mut g: usize) -> usize {
    let mut v = g;
    while g > 0 {
        g >>= 1;
        v ^= g;
    }
    v
}

impl<T: Real> QamConstellation<T> {
    /// Unscaled odd-integer grid. `m` must be a power of four, at least 4.
    pub fn new(m: usize) -> Result<Self> {
        if m < 4 || !m.is_power_of_two() || !m.trailing_zeros().is_multiple_of(2) {
            return Err(Error::invalid(
                "m",
                format!("{m} is not a square power of four"),
            ));
        }
        Ok(Self::with_scale(m, T::one()))
    }

    fn with_scale(m: usize, scale: T) -> Self {
        let bits_per_axis = m.trailing_zeros() as usize / 2;
        let side = 1 << bits_per_axis;
        let level = |g: usize| T::from_usize(2 * gray_inverse(g) + 1) - T::from_usize(side);
        let points: Vec<Complex<T>> = (0..m)
            .map(|s| {
                let i = s >> bits_per_axis;
                let q = s & (side - 1);
                Complex::new(level(i), level(q)) * scale
            })
            .collect();
        let alpha2 = points.iter().map(|p| p.norm_sqr()).sum::<T>() / T::from_usize(m);
        let beta2 = points.iter().map(|p| p.norm_sqr()).fold(T::zero(), T::max);
        Self {
            m,
            side,
            bits_per_axis,
            scale,
            points,
            alpha2,
            beta2,
        }
    }

    /// Same labelling, scaled to unit average energy.
    pub fn normalized(&self) -> Self {
        let raw_alpha2 = self.alpha2 / (self.scale * self.scale);
        Self::with_scale(self.m, T::one() / raw_alpha2.sqrt())
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn bits_per_symbol(&self) -> usize {
        2 * self.bits_per_axis
    }

    pub fn points(&self) -> &[Complex<T>] {
        &self.points
    }

    /// Mean energy of the points.
    pub fn alpha2(&self) -> T {
        self.alpha2
    }

    /// Largest point energy, `2(√M − 1)²` before scaling.
    pub fn beta2(&self) -> T {
        self.beta2
    }

    /// A corner point of largest energy, `(√M − 1)(1 + j)` before scaling.
    pub fn beta(&self) -> Complex<T> {
        let a = T::from_usize(self.side - 1) * self.scale;
        Complex::new(a, a)
    }

    pub fn scale(&self) -> T {
        self.scale
    }

    pub fn symbol(&self, index: usize) -> Complex<T> {
        self.points[index]
    }

    pub fn random_symbol<R: Rng + ?Sized>(&self, rng: &mut R) -> Complex<T> {
        self.points[rng.random_range(0..self.m)]
    }

    pub fn map(&self, bits: &[u8]) -> Result<Vec<Complex<T>>> {
        let k = self.bits_per_symbol();
        if !bits.len().is_multiple_of(k) {
            return Err(Error::invalid(
                "bits",
                format!("{} bits is not a multiple of {k}", bits.len()),
            ));
        }
        bits.chunks(k)
            .map(|chunk| {
                chunk.iter().try_fold(0usize, |acc, &b| match b {
                    0 | 1 => Ok((acc << 1) | b as usize),
                    _ => Err(Error::invalid("bits", "bits must be 0 or 1")),
                })
            })
            .map(|idx| idx.map(|i| self.points[i]))
            .collect()
    }

    /// Nearest-point decision, one symbol index per input sample.
    pub fn decide(&self, z: Complex<T>) -> usize {
        let axis = |v: T| -> usize {
            let idx = ((v / self.scale + T::from_usize(self.side - 1)) / T::lit(2.0)).round();
            let idx = idx.max(T::zero()).min(T::from_usize(self.side - 1));
            gray(idx.to_usize().unwrap_or(0))
        };
        (axis(z.re) << self.bits_per_axis) | axis(z.im)
    }

    pub fn demap(&self, symbols: &[Complex<T>]) -> Vec<u8> {
        let k = self.bits_per_symbol();
        let mut out = Vec::with_capacity(symbols.len() * k);
        for &z in symbols {
            let s = self.decide(z);
            out.extend((0..k).rev().map(|b| ((s >> b) & 1) as u8));
        }
        out
    }
}
