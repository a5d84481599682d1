//! Ramanujan periodic subspace division multiplexing (RPSDM) and OFDM over
//! cyclic-prefix, frequency-selective fading links.
//!
//! The crate is organised bottom-up:
//!
//! * [`number_theory`]: exact divisor, totient and Möbius arithmetic.
//! * [`ramanujan`]: Ramanujan sums, subspace bases and the periodic transform pair.
//! * [`fft`] and [`transforms`]: OFDM / RPSDM modulators with operation accounting.
//! * [`channel`]: Rayleigh multipath, cyclic prefix, circulant algebra and the
//!   effective (diagonal or stair block diagonal) channel with structure checks.
//! * [`detection`]: QAM mapping and ZF / MMSE block equalisation.
//! * [`metrics`]: PAPR, CCDF, BER curves and complexity tables.
//!
//! Floating point code is generic over [`Real`] (implemented for `f32` and
//! `f64`); the aliases below fix the scalar to `f64`, which is what the
//! simulation harness uses.

pub mod channel;
pub mod detection;
pub mod error;
pub mod fft;
pub mod linalg;
pub mod metrics;
pub mod number_theory;
pub mod ramanujan;
pub mod rng;
pub mod scalar;
pub mod transforms;

pub use error::{Error, Result};
pub use scalar::Real;

/// Double precision complex sample.
pub type C64 = num_complex::Complex<f64>;
/// Single precision complex sample.
pub type C32 = num_complex::Complex<f32>;

pub type Transform = ramanujan::PeriodicTransform<f64>;
pub type Transform32 = ramanujan::PeriodicTransform<f32>;
pub type Plan = transforms::ModulatorPlan<f64>;
pub type Plan32 = transforms::ModulatorPlan<f32>;
pub type Channel = channel::ChannelRealization<f64>;
pub type Effective = channel::EffectiveChannel<f64>;
pub type Constellation = detection::qam::QamConstellation<f64>;
pub type Curve = metrics::CurveResult;
