//! Frequency-selective Rayleigh channel, cyclic prefix framing, circulant
//! algebra and the effective channel seen after demodulation.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fft::{self, Direction};
use crate::linalg::Matrix;
use crate::number_theory::Span;
use crate::ramanujan::PeriodicTransform;
use crate::scalar::Real;
use crate::transforms::{ModulatorPlan, SchemeKind};

/// Multipath taps `h_0..h_{L-1}` for length-`N` blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization<T> {
    taps: Vec<Complex<T>>,
    n: usize,
}

impl<T: Real> ChannelRealization<T> {
    pub fn new(taps: Vec<Complex<T>>, n: usize) -> Result<Self> {
        if taps.is_empty() {
            return Err(Error::invalid("taps", "need at least one path"));
        }
        if taps.len() > n {
            return Err(Error::invalid(
                "l",
                format!("{} paths exceed block length {n}", taps.len()),
            ));
        }
        Ok(Self { taps, n })
    }

    /// `l` i.i.d. CN(0, 1) taps.
    pub fn draw<R: Rng + ?Sized>(rng: &mut R, l: usize, n: usize) -> Result<Self> {
        if l == 0 || l > n {
            return Err(Error::invalid(
                "l",
                format!("need 1 <= L <= N, got L={l}, N={n}"),
            ));
        }
        let taps = (0..l)
            .map(|_| T::sample_complex_normal(rng, T::one()))
            .collect();
        Ok(Self { taps, n })
    }

    pub fn taps(&self) -> &[Complex<T>] {
        &self.taps
    }

    pub fn l(&self) -> usize {
        self.taps.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `H[k] = Σ_l h_l e^{-j2πkl/N}`, the eigenvalues of the circulant.
    pub fn frequency_response(&self) -> Vec<Complex<T>> {
        let w = fft::twiddles::<T>(self.n, Direction::Forward);
        (0..self.n)
            .map(|k| {
                self.taps
                    .iter()
                    .enumerate()
                    .fold(Complex::new(T::zero(), T::zero()), |acc, (l, &h)| {
                        acc + h * w[(k * l) % self.n]
                    })
            })
            .collect()
    }

    /// Circular convolution `H_cir x` without forming the matrix.
    pub fn apply_circular(&self, x: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        Error::check_len(self.n, x.len())?;
        let n = self.n;
        Ok((0..n)
            .map(|t| {
                self.taps
                    .iter()
                    .enumerate()
                    .fold(Complex::new(T::zero(), T::zero()), |acc, (l, &h)| {
                        acc + h * x[(t + n - l) % n]
                    })
            })
            .collect())
    }
}

/// Seeded [`ChannelRealization::draw`].
pub fn draw_channel<T: Real>(seed: u64, l: usize, n: usize) -> Result<ChannelRealization<T>> {
    ChannelRealization::draw(&mut crate::rng::seeded(seed), l, n)
}

/// Prepends the last `L − 1` samples; the frame is `K = N + L − 1` long.
pub fn add_cp<T: Copy>(x: &[T], l: usize) -> Result<Vec<T>> {
    let n = x.len();
    if l == 0 || l > n {
        return Err(Error::invalid(
            "l",
            format!("need 1 <= L <= N, got L={l}, N={n}"),
        ));
    }
    let mut out = Vec::with_capacity(n + l - 1);
    out.extend_from_slice(&x[n - (l - 1)..]);
    out.extend_from_slice(x);
    Ok(out)
}

/// Drops the first `L − 1` received samples.
pub fn remove_cp<T: Copy>(frame: &[T], l: usize) -> Result<Vec<T>> {
    if l == 0 || frame.len() < l {
        return Err(Error::invalid("l", "frame shorter than the prefix"));
    }
    let n = frame.len() - (l - 1);
    if l > n {
        return Err(Error::invalid("l", "prefix longer than the block"));
    }
    Ok(frame[l - 1..].to_vec())
}

/// Linear convolution over the frame, truncated to its length, plus CN(0, σ²)
/// noise on every sample. Noise is drawn only when `sigma2 > 0`.
pub fn transmit<T: Real, R: Rng + ?Sized>(
    x_cp: &[Complex<T>],
    ch: &ChannelRealization<T>,
    sigma2: T,
    rng: &mut R,
) -> Result<Vec<Complex<T>>> {
    Error::check_len(ch.n() + ch.l() - 1, x_cp.len())?;
    if sigma2 < T::zero() || !sigma2.is_finite() {
        return Err(Error::invalid(
            "sigma2",
            "noise variance must be finite and >= 0",
        ));
    }
    let mut y: Vec<Complex<T>> = (0..x_cp.len())
        .map(|t| {
            ch.taps()
                .iter()
                .enumerate()
                .take(t + 1)
                .fold(Complex::new(T::zero(), T::zero()), |acc, (l, &h)| {
                    acc + h * x_cp[t - l]
                })
        })
        .collect();
    if sigma2 > T::zero() {
        for v in &mut y {
            *v += T::sample_complex_normal(rng, sigma2);
        }
    }
    Ok(y)
}

/// `N × N` circulant whose first column is the zero-padded taps.
pub fn circulant_matrix<T: Real>(ch: &ChannelRealization<T>) -> Matrix<Complex<T>> {
    let n = ch.n();
    let zero = Complex::new(T::zero(), T::zero());
    Matrix::from_fn(n, n, |r, c| {
        let idx = (r + n - c) % n;
        ch.taps().get(idx).copied().unwrap_or(zero)
    })
}

/// Square diagonal blocks of a block diagonal matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockDiagonal<T> {
    n: usize,
    spans: Vec<Span>,
    blocks: Vec<Matrix<Complex<T>>>,
}

impl<T: Real> BlockDiagonal<T> {
    pub fn new(spans: Vec<Span>, blocks: Vec<Matrix<Complex<T>>>) -> Result<Self> {
        if spans.len() != blocks.len() {
            return Err(Error::LengthMismatch {
                expected: spans.len(),
                actual: blocks.len(),
            });
        }
        let mut next = 0;
        for (s, b) in spans.iter().zip(&blocks) {
            if s.offset != next || b.rows() != s.width || b.cols() != s.width {
                return Err(Error::invalid("blocks", "blocks must tile the diagonal"));
            }
            next += s.width;
        }
        Ok(Self {
            n: next,
            spans,
            blocks,
        })
    }

    /// `n` scalar (1 × 1) blocks.
    pub fn from_diagonal(diag: &[Complex<T>]) -> Self {
        let spans = (0..diag.len())
            .map(|k| Span {
                q: 1,
                offset: k,
                width: 1,
            })
            .collect();
        let blocks = diag
            .iter()
            .map(|&d| Matrix::from_fn(1, 1, |_, _| d))
            .collect();
        Self {
            n: diag.len(),
            spans,
            blocks,
        }
    }

    pub fn extract(matrix: &Matrix<Complex<T>>, spans: &[Span]) -> Self {
        let blocks = spans
            .iter()
            .map(|s| matrix.submatrix(s.range(), s.range()))
            .collect();
        Self {
            n: matrix.rows(),
            spans: spans.to_vec(),
            blocks,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn spans(&self) -> &[Span] {
        &self.spans
    }

    pub fn blocks(&self) -> &[Matrix<Complex<T>>] {
        &self.blocks
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Span, &Matrix<Complex<T>>)> {
        self.spans.iter().zip(&self.blocks)
    }

    pub fn scaled(&self, s: T) -> Self {
        Self {
            n: self.n,
            spans: self.spans.clone(),
            blocks: self.blocks.iter().map(|b| b.map(|v| v * s)).collect(),
        }
    }

    pub fn mul_vec(&self, x: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        Error::check_len(self.n, x.len())?;
        let mut out = Vec::with_capacity(self.n);
        for (s, b) in self.iter() {
            out.extend(b.mul_vec(&x[s.range()]));
        }
        Ok(out)
    }

    pub fn to_dense(&self) -> Matrix<Complex<T>> {
        let mut m = Matrix::zeros(self.n, self.n);
        for (s, b) in self.iter() {
            for r in 0..s.width {
                for c in 0..s.width {
                    m.set(s.offset + r, s.offset + c, b.get(r, c));
                }
            }
        }
        m
    }
}

/// Transformed channel `E_r H_cir E_t` for one scheme.
#[derive(Debug, Clone)]
pub struct EffectiveChannel<T> {
    scheme: SchemeKind,
    matrix: Matrix<Complex<T>>,
    blocks: BlockDiagonal<T>,
}

impl<T: Real> EffectiveChannel<T> {
    pub fn scheme(&self) -> SchemeKind {
        self.scheme
    }

    pub fn matrix(&self) -> &Matrix<Complex<T>> {
        &self.matrix
    }

    /// Diagonal blocks: `N` scalars for OFDM, one `φ(q) × φ(q)` block per
    /// divisor for RPSDM.
    pub fn blocks(&self) -> &BlockDiagonal<T> {
        &self.blocks
    }

    pub fn spans(&self) -> &[Span] {
        self.blocks.spans()
    }
}

/// Which pair of matrices sandwiches `H_cir` in the RPSDM decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProductPair {
    /// `E_r H_cir (Q E_t)`: what the receiver actually sees.
    Production,
    /// `(Q E_t)^T H_cir (Q E_t)`.
    Congruence,
    /// `E_t^T H_cir E_t` on the raw integer basis.
    Unnormalized,
}

impl ProductPair {
    pub fn as_str(self) -> &'static str {
        match self {
            ProductPair::Production => "production",
            ProductPair::Congruence => "congruence",
            ProductPair::Unnormalized => "unnormalized",
        }
    }
}

impl fmt::Display for ProductPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ProductPair {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "production" => Ok(ProductPair::Production),
            "congruence" => Ok(ProductPair::Congruence),
            "unnormalized" => Ok(ProductPair::Unnormalized),
            other => Err(Error::invalid("pair", format!("unknown pair `{other}`"))),
        }
    }
}

fn complexify<T: Real>(m: &Matrix<T>) -> Matrix<Complex<T>> {
    Matrix::from_real(m)
}

/// `left · h_cir · right` for the chosen pair.
pub fn rpsdm_decomposition<T: Real>(
    transform: &PeriodicTransform<T>,
    h_cir: &Matrix<Complex<T>>,
    pair: ProductPair,
) -> Result<Matrix<Complex<T>>> {
    Error::check_len(transform.n(), h_cir.rows())?;
    let (left, right) = match pair {
        ProductPair::Production => (
            complexify(transform.e_r()),
            complexify(transform.synthesis()),
        ),
        ProductPair::Congruence => {
            let s = complexify(transform.synthesis());
            (s.transpose(), s)
        }
        ProductPair::Unnormalized => {
            let e = transform
                .e_t()
                .map(|v| Complex::new(T::lit(v as f64), T::zero()));
            (e.transpose(), e)
        }
    };
    Ok(left.matmul(&h_cir.matmul(&right)))
}

/// Full effective channel, including the dense matrix. `OFDM` uses the
/// eigenvalue route (DFT of the taps); `RPSDM` the production pair.
pub fn effective_channel<T: Real>(
    plan: &ModulatorPlan<T>,
    ch: &ChannelRealization<T>,
) -> Result<EffectiveChannel<T>> {
    Error::check_len(plan.n(), ch.n())?;
    match plan.transform() {
        None => {
            let diag = ch.frequency_response();
            let n = diag.len();
            let zero = Complex::new(T::zero(), T::zero());
            let matrix = Matrix::from_fn(n, n, |r, c| if r == c { diag[r] } else { zero });
            Ok(EffectiveChannel {
                scheme: SchemeKind::Ofdm,
                matrix,
                blocks: BlockDiagonal::from_diagonal(&diag),
            })
        }
        Some(t) => {
            let matrix = rpsdm_decomposition(t, &circulant_matrix(ch), ProductPair::Production)?;
            let spans: Vec<Span> = t.layout().spans().collect();
            let blocks = BlockDiagonal::extract(&matrix, &spans);
            Ok(EffectiveChannel {
                scheme: SchemeKind::Rpsdm,
                matrix,
                blocks,
            })
        }
    }
}

/// Only the diagonal blocks of the effective channel. For RPSDM this skips
/// the off-block part of the product, which is zero by construction.
pub fn effective_blocks<T: Real>(
    plan: &ModulatorPlan<T>,
    ch: &ChannelRealization<T>,
) -> Result<BlockDiagonal<T>> {
    Error::check_len(plan.n(), ch.n())?;
    let Some(t) = plan.transform() else {
        return Ok(BlockDiagonal::from_diagonal(&ch.frequency_response()));
    };
    let n = t.n();
    let s = t.synthesis();
    let e_r = t.e_r();
    let zero = Complex::new(T::zero(), T::zero());
    let mut spans = Vec::new();
    let mut blocks = Vec::new();
    for span in t.layout().spans() {
        // H_cir applied to each basis column of this subspace.
        let filtered: Vec<Vec<Complex<T>>> = span
            .range()
            .map(|c| {
                let col: Vec<Complex<T>> = (0..n)
                    .map(|r| Complex::new(s.get(r, c), T::zero()))
                    .collect();
                ch.apply_circular(&col)
            })
            .collect::<Result<_>>()?;
        let mut block = Matrix::zeros(span.width, span.width);
        for (i, r) in span.range().enumerate() {
            let row = e_r.row(r);
            for (j, col) in filtered.iter().enumerate() {
                let v =
                    row.iter().zip(col).fold(
                        zero,
                        |acc, (&a, &b)| if a == T::zero() { acc } else { acc + b * a },
                    );
                block.set(i, j, v);
            }
        }
        spans.push(span);
        blocks.push(block);
    }
    BlockDiagonal::new(spans, blocks)
}

/// Outcome of a structure test: whether it holds at the relative tolerance
/// and the largest relative violation found.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StructureCheck {
    pub holds: bool,
    pub residual: f64,
}

impl StructureCheck {
    fn from_residual<T: Real>(residual: T) -> Self {
        Self {
            holds: residual <= T::TOLERANCE,
            residual: residual.to_f64().unwrap_or(f64::NAN),
        }
    }
}

fn block_scale<T: Real>(matrix: &Matrix<Complex<T>>, spans: &[Span]) -> T {
    let mut scale = T::zero();
    for s in spans {
        for r in s.range() {
            for c in s.range() {
                scale = scale.max(matrix.get(r, c).norm());
            }
        }
    }
    scale
}

fn relative<T: Real>(worst: T, scale: T) -> T {
    if scale > T::zero() {
        worst / scale
    } else {
        worst
    }
}

/// Everything outside the diagonal blocks must vanish relative to the
/// largest in-block magnitude.
pub fn is_stair_block_diagonal<T: Real>(
    matrix: &Matrix<Complex<T>>,
    spans: &[Span],
) -> StructureCheck {
    let n = matrix.rows();
    let mut block_of = vec![usize::MAX; n];
    for (i, s) in spans.iter().enumerate() {
        for r in s.range() {
            if r < n {
                block_of[r] = i;
            }
        }
    }
    let covered = spans.iter().map(|s| s.width).sum::<usize>() == n && matrix.is_square();
    let mut worst = T::zero();
    for r in 0..n {
        for c in 0..matrix.cols() {
            if block_of[r] != block_of.get(c).copied().unwrap_or(usize::MAX)
                || block_of[r] == usize::MAX
            {
                worst = worst.max(matrix.get(r, c).norm());
            }
        }
    }
    let mut check = StructureCheck::from_residual(relative(worst, block_scale(matrix, spans)));
    check.holds &= covered;
    check
}

fn toeplitz_residual<T: Real>(b: &Matrix<Complex<T>>) -> T {
    let mut worst = T::zero();
    for r in 1..b.rows() {
        for c in 1..b.cols() {
            worst = worst.max((b.get(r, c) - b.get(r - 1, c - 1)).norm());
        }
    }
    worst
}

fn skew_circulant_residual<T: Real>(b: &Matrix<Complex<T>>) -> T {
    let w = b.cols();
    let mut worst = toeplitz_residual(b);
    for r in 1..b.rows() {
        worst = worst.max((b.get(r, 0) + b.get(r - 1, w - 1)).norm());
    }
    worst
}

/// Per-block residuals for one structure, relative to the largest block entry.
fn per_block<T: Real>(
    matrix: &Matrix<Complex<T>>,
    spans: &[Span],
    f: impl Fn(&Matrix<Complex<T>>) -> T,
) -> Vec<StructureCheck> {
    let scale = block_scale(matrix, spans);
    spans
        .iter()
        .map(|s| {
            StructureCheck::from_residual(relative(
                f(&matrix.submatrix(s.range(), s.range())),
                scale,
            ))
        })
        .collect()
}

fn combine(checks: &[StructureCheck]) -> StructureCheck {
    StructureCheck {
        holds: checks.iter().all(|c| c.holds),
        residual: checks.iter().map(|c| c.residual).fold(0.0, f64::max),
    }
}

/// Every diagonal block is Toeplitz (constant along diagonals).
pub fn is_toeplitz<T: Real>(matrix: &Matrix<Complex<T>>, spans: &[Span]) -> StructureCheck {
    combine(&per_block(matrix, spans, toeplitz_residual))
}

/// Every diagonal block is skew-circulant: each row is the previous one
/// rotated right, with the wrapped entry negated.
pub fn is_skew_circulant<T: Real>(matrix: &Matrix<Complex<T>>, spans: &[Span]) -> StructureCheck {
    combine(&per_block(matrix, spans, skew_circulant_residual))
}

#[derive(Debug, Clone, Serialize)]
pub struct BlockReport {
    pub q: u64,
    pub offset: usize,
    pub width: usize,
    pub toeplitz: StructureCheck,
    pub skew_circulant: StructureCheck,
}

/// Structural summary used by the `decompose` command.
#[derive(Debug, Clone, Serialize)]
pub struct StructureReport {
    pub stair_block_diagonal: StructureCheck,
    pub toeplitz: StructureCheck,
    pub skew_circulant: StructureCheck,
    pub blocks: Vec<BlockReport>,
}

pub fn structure_report<T: Real>(matrix: &Matrix<Complex<T>>, spans: &[Span]) -> StructureReport {
    let toe = per_block(matrix, spans, toeplitz_residual);
    let skew = per_block(matrix, spans, skew_circulant_residual);
    let blocks = spans
        .iter()
        .zip(toe.iter().zip(&skew))
        .map(|(s, (&t, &k))| BlockReport {
            q: s.q,
            offset: s.offset,
            width: s.width,
            toeplitz: t,
            skew_circulant: k,
        })
        .collect();
    StructureReport {
        stair_block_diagonal: is_stair_block_diagonal(matrix, spans),
        toeplitz: combine(&toe),
        skew_circulant: combine(&skew),
        blocks,
    }
}
