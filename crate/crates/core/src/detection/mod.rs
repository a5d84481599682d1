//! ZF / MMSE equalisation on the effective channel and QAM decisions.
//!
//! OFDM is equalised bin by bin and RPSDM block by block with
//! `G = (H^H H + ζ I)^{-1} H^H`, `ζ = 0` for ZF and `ζ = σ²` for MMSE.

pub mod qam;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::channel::BlockDiagonal;
use crate::error::{Error, Result};
use crate::linalg::{Lu, Matrix};
use crate::number_theory::DivisorSet;
use crate::scalar::Real;
use crate::transforms::{OpCount, SchemeKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DetectorKind {
    Zf,
    Mmse,
}

impl DetectorKind {
    pub const ALL: [DetectorKind; 2] = [DetectorKind::Zf, DetectorKind::Mmse];

    pub fn as_str(self) -> &'static str {
        match self {
            DetectorKind::Zf => "zf",
            DetectorKind::Mmse => "mmse",
        }
    }
}

impl fmt::Display for DetectorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DetectorKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "zf" => Ok(DetectorKind::Zf),
            "mmse" => Ok(DetectorKind::Mmse),
            other => Err(Error::invalid(
                "detector",
                format!("unknown detector `{other}`"),
            )),
        }
    }
}

/// Detector kind with its regulariser `ζ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorSpec<T> {
    kind: DetectorKind,
    zeta: T,
}

impl<T: Real> DetectorSpec<T> {
    pub fn zf() -> Self {
        Self {
            kind: DetectorKind::Zf,
            zeta: T::zero(),
        }
    }

    /// MMSE with `ζ = σ²`, which must be positive.
    pub fn mmse(sigma2: T) -> Result<Self> {
        if !(sigma2 > T::zero()) || !sigma2.is_finite() {
            return Err(Error::invalid(
                "sigma2",
                "MMSE needs a positive noise variance",
            ));
        }
        Ok(Self {
            kind: DetectorKind::Mmse,
            zeta: sigma2,
        })
    }

    pub fn for_kind(kind: DetectorKind, sigma2: T) -> Result<Self> {
        match kind {
            DetectorKind::Zf => Ok(Self::zf()),
            DetectorKind::Mmse => Self::mmse(sigma2),
        }
    }

    pub fn kind(&self) -> DetectorKind {
        self.kind
    }

    pub fn zeta(&self) -> T {
        self.zeta
    }
}

/// Precomputed per-block filters `G_q`.
#[derive(Debug, Clone)]
pub struct BlockEqualizer<T> {
    spec: DetectorSpec<T>,
    filters: BlockDiagonal<T>,
    /// `diag(G H)`, the per-component gain of the linear estimate.
    gains: Vec<T>,
}

impl<T: Real> BlockEqualizer<T> {
    /// ZF refuses singular blocks or bins and names the offending one.
    pub fn new(spec: DetectorSpec<T>, channel: &BlockDiagonal<T>) -> Result<Self> {
        let mut filters = Vec::with_capacity(channel.blocks().len());
        let mut gains = Vec::with_capacity(channel.n());
        for (span, h) in channel.iter() {
            let g = block_filter(&spec, h).map_err(|e| match e {
                Error::Singular { index, .. } => Error::Singular {
                    what: format!("block q={} at offset {}", span.q, span.offset),
                    index,
                },
                other => other,
            })?;
            let gh = g.matmul(h);
            gains.extend((0..span.width).map(|i| gh.get(i, i).re));
            filters.push(g);
        }
        Ok(Self {
            spec,
            filters: BlockDiagonal::new(channel.spans().to_vec(), filters)?,
            gains,
        })
    }

    pub fn spec(&self) -> &DetectorSpec<T> {
        &self.spec
    }

    pub fn filters(&self) -> &BlockDiagonal<T> {
        &self.filters
    }

    pub fn gains(&self) -> &[T] {
        &self.gains
    }

    /// `X̂ = G Y`, with the real-operation count of the block products.
    pub fn apply(&self, y: &[Complex<T>]) -> Result<(Vec<Complex<T>>, OpCount)> {
        let out = self.filters.mul_vec(y)?;
        let mut ops = OpCount::default();
        for s in self.filters.spans() {
            let w = s.width as u64;
            ops.complex_mul(w * w);
            ops.complex_add(w * (w - 1));
        }
        Ok((out, ops))
    }

    /// `G Y` with each component divided by its gain, removing the MMSE
    /// shrinkage before hard decisions. Identical to [`apply`](Self::apply)
    /// for ZF.
    pub fn apply_unbiased(&self, y: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        let mut out = self.filters.mul_vec(y)?;
        for (v, &g) in out.iter_mut().zip(&self.gains) {
            if g > T::zero() {
                *v /= g;
            }
        }
        Ok(out)
    }
}

fn block_filter<T: Real>(
    spec: &DetectorSpec<T>,
    h: &Matrix<Complex<T>>,
) -> Result<Matrix<Complex<T>>> {
    let hh = h.conj_transpose();
    match spec.kind {
        DetectorKind::Zf if h.is_square() => Ok(Lu::factor(h)?.inverse()),
        _ => {
            let mut a = hh.matmul(h);
            for i in 0..a.rows() {
                let v = a.get(i, i) + Complex::new(spec.zeta, T::zero());
                a.set(i, i, v);
            }
            let lu = Lu::factor(&a)?;
            let mut g = Matrix::zeros(a.rows(), hh.cols());
            for c in 0..hh.cols() {
                let col = lu.solve(&hh.column(c))?;
                for (r, v) in col.into_iter().enumerate() {
                    g.set(r, c, v);
                }
            }
            Ok(g)
        }
    }
}

/// One-shot `G_r Y` on the effective channel blocks.
pub fn equalize<T: Real>(
    spec: DetectorSpec<T>,
    channel: &BlockDiagonal<T>,
    y: &[Complex<T>],
) -> Result<Vec<Complex<T>>> {
    Ok(BlockEqualizer::new(spec, channel)?.apply(y)?.0)
}

/// Closed-form equaliser cost per block of `N` symbols: `N` one-tap
/// equalisers for OFDM, one dense `φ(q) × φ(q)` product per divisor for RPSDM.
pub fn receiver_ops(scheme: SchemeKind, n: u64) -> Result<OpCount> {
    let widths: Vec<u64> = match scheme {
        SchemeKind::Ofdm => vec![1; n as usize],
        SchemeKind::Rpsdm => DivisorSet::new(n)?.totients().to_vec(),
    };
    let mul = widths.iter().map(|w| 4 * w * w).sum();
    let add = widths.iter().map(|w| 2 * w * (2 * w - 1)).sum();
    Ok(OpCount::new(mul, add))
}
