//! OFDM and RPSDM modulators, their fast paths and real-operation accounting.
//!
//! Operation costing used by every counter in the crate:
//!
//! | operation                 | real mul | real add |
//! |---------------------------|----------|----------|
//! | complex × complex         | 4        | 2        |
//! | real × complex            | 2        | 0        |
//! | complex + complex         | 0        | 2        |
//!
//! With this costing the dense, FFT and sparse counters land exactly on the
//! closed forms in [`direct_ofdm_ops`], [`fft_ops`], [`direct_rpsdm_ops`] and
//! [`sparse_irpt_ops`].

use std::fmt;
use std::ops::{Add, AddAssign};
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fft::{self, Direction};
use crate::ramanujan::PeriodicTransform;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct OpCount {
    pub real_mul: u64,
    pub real_add: u64,
    complex_by_complex: u64,
    real_by_complex: u64,
    complex_sums: u64,
}

impl OpCount {
    pub fn new(real_mul: u64, real_add: u64) -> Self {
        Self {
            real_mul,
            real_add,
            ..Self::default()
        }
    }

    pub fn complex_mul(&mut self, k: u64) {
        self.complex_by_complex += k;
        self.real_mul += 4 * k;
        self.real_add += 2 * k;
    }

    pub fn real_scale(&mut self, k: u64) {
        self.real_by_complex += k;
        self.real_mul += 2 * k;
    }

    pub fn complex_add(&mut self, k: u64) {
        self.complex_sums += k;
        self.real_add += 2 * k;
    }

    /// Complex multiplications of either kind (complex or real factor).
    pub fn complex_muls(&self) -> u64 {
        self.complex_by_complex + self.real_by_complex
    }

    pub fn complex_adds(&self) -> u64 {
        self.complex_sums
    }

    /// Only the real totals, for comparing against closed forms.
    pub fn totals(&self) -> (u64, u64) {
        (self.real_mul, self.real_add)
    }
}

impl Add for OpCount {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self {
            real_mul: self.real_mul + o.real_mul,
            real_add: self.real_add + o.real_add,
            complex_by_complex: self.complex_by_complex + o.complex_by_complex,
            real_by_complex: self.real_by_complex + o.real_by_complex,
            complex_sums: self.complex_sums + o.complex_sums,
        }
    }
}

impl AddAssign for OpCount {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

fn log2_exact(n: u64) -> Option<u64> {
    n.is_power_of_two().then(|| u64::from(n.trailing_zeros()))
}

/// Dense OFDM synthesis: `4N²` real multiplies, `2N(2N−1)` real adds.
pub fn direct_ofdm_ops(n: u64) -> OpCount {
    OpCount::new(4 * n * n, 2 * n * (2 * n - 1))
}

/// Dense RPSDM synthesis: `2N²` real multiplies, `2N(N−1)` real adds.
pub fn direct_rpsdm_ops(n: u64) -> OpCount {
    OpCount::new(2 * n * n, 2 * n * (n - 1))
}

/// Radix-2 FFT: `2N log2 N` real multiplies, `3N log2 N` real adds.
pub fn fft_ops(n: u64) -> Option<OpCount> {
    log2_exact(n).map(|m| OpCount::new(2 * n * m, 3 * n * m))
}

/// Sparse inverse periodic transform: `2N(log2 N + 1)` real multiplies,
/// `2N log2 N` real adds.
pub fn sparse_irpt_ops(n: u64) -> Option<OpCount> {
    log2_exact(n).map(|m| OpCount::new(2 * n * (m + 1), 2 * n * m))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeKind {
    Ofdm,
    Rpsdm,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 2] = [SchemeKind::Ofdm, SchemeKind::Rpsdm];

    pub fn as_str(self) -> &'static str {
        match self {
            SchemeKind::Ofdm => "ofdm",
            SchemeKind::Rpsdm => "rpsdm",
        }
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SchemeKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ofdm" => Ok(SchemeKind::Ofdm),
            "rpsdm" => Ok(SchemeKind::Rpsdm),
            other => Err(Error::invalid(
                "scheme",
                format!("unknown scheme `{other}`"),
            )),
        }
    }
}

/// `Q E_t` stored row-wise with its zeros dropped. For `N = 2^m` every row
/// holds exactly `m + 1` entries.
#[derive(Debug, Clone)]
pub struct SparseIrpt<T> {
    n: usize,
    rows: Vec<Vec<(usize, T)>>,
    cols: Vec<Vec<(usize, T)>>,
}

impl<T: Real> SparseIrpt<T> {
    pub fn new(transform: &PeriodicTransform<T>) -> Result<Self> {
        let n = transform.n();
        if !n.is_power_of_two() {
            return Err(Error::NotPowerOfTwo {
                what: "sparse inverse transform",
                n,
            });
        }
        let e_t = transform.e_t();
        let q = transform.q_norm();
        let mut rows = vec![Vec::new(); n];
        let mut cols = vec![Vec::new(); n];
        for r in 0..n {
            for (c, &v) in e_t.row(r).iter().enumerate() {
                if v != 0 {
                    let w = T::lit(v as f64) * q[c];
                    rows[r].push((c, w));
                    cols[c].push((r, w));
                }
            }
        }
        Ok(Self { n, rows, cols })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn row_nonzeros(&self, r: usize) -> usize {
        self.rows[r].len()
    }

    /// `Q E_t X` over the non-zeros only.
    pub fn apply(&self, symbols: &[Complex<T>]) -> Result<(Vec<Complex<T>>, OpCount)> {
        Error::check_len(self.n, symbols.len())?;
        let mut ops = OpCount::default();
        let out = self
            .rows
            .iter()
            .map(|row| {
                ops.real_scale(row.len() as u64);
                ops.complex_add(row.len().saturating_sub(1) as u64);
                row.iter()
                    .fold(Complex::new(T::zero(), T::zero()), |acc, &(c, w)| {
                        acc + symbols[c] * w
                    })
            })
            .collect();
        Ok((out, ops))
    }

    /// `(Q E_t)^T y`, which is the demodulator for power-of-two `N`.
    pub fn apply_transpose(&self, block: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        Error::check_len(self.n, block.len())?;
        Ok(self
            .cols
            .iter()
            .map(|col| {
                col.iter()
                    .fold(Complex::new(T::zero(), T::zero()), |acc, &(r, w)| {
                        acc + block[r] * w
                    })
            })
            .collect())
    }
}

/// One-shot sparse synthesis `Q E_t X` (no power scaling).
pub fn sparse_irpt<T: Real>(
    transform: &PeriodicTransform<T>,
    symbols: &[Complex<T>],
) -> Result<(Vec<Complex<T>>, OpCount)> {
    SparseIrpt::new(transform)?.apply(symbols)
}

#[derive(Debug, Clone)]
enum Kernel<T> {
    Dft {
        synthesis_twiddles: Vec<Complex<T>>,
        analysis_twiddles: Vec<Complex<T>>,
    },
    Rpt {
        transform: Arc<PeriodicTransform<T>>,
        sparse: Option<SparseIrpt<T>>,
    },
}

/// A configured modulator / demodulator for one scheme and block length.
///
/// Forward operator: `√(P/N)` times the unitary inverse DFT (OFDM) or
/// `√(P/N) Q E_t` (RPSDM). The inverse undoes it exactly.
#[derive(Debug, Clone)]
pub struct ModulatorPlan<T> {
    scheme: SchemeKind,
    n: usize,
    power: T,
    power_scale: T,
    fast_path: bool,
    kernel: Kernel<T>,
}

impl<T: Real> ModulatorPlan<T> {
    /// Plan with `P = N` (unit power scale) and the fast path enabled
    /// whenever `n` is a power of two.
    pub fn new(scheme: SchemeKind, n: usize) -> Result<Self> {
        match scheme {
            SchemeKind::Ofdm => Self::ofdm(n),
            SchemeKind::Rpsdm => Self::rpsdm(n),
        }
    }

    pub fn ofdm(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("n", "block length must be positive"));
        }
        Ok(Self {
            scheme: SchemeKind::Ofdm,
            n,
            power: T::from_usize(n),
            power_scale: T::one(),
            fast_path: n.is_power_of_two(),
            kernel: Kernel::Dft {
                synthesis_twiddles: fft::twiddles(n, Direction::Inverse),
                analysis_twiddles: fft::twiddles(n, Direction::Forward),
            },
        })
    }

    pub fn rpsdm(n: usize) -> Result<Self> {
        Self::from_transform(Arc::new(PeriodicTransform::new(n)?))
    }

    /// RPSDM plan sharing an already built transform.
    pub fn from_transform(transform: Arc<PeriodicTransform<T>>) -> Result<Self> {
        let n = transform.n();
        let sparse = if n.is_power_of_two() {
            Some(SparseIrpt::new(&transform)?)
        } else {
            None
        };
        Ok(Self {
            scheme: SchemeKind::Rpsdm,
            n,
            power: T::from_usize(n),
            power_scale: T::one(),
            fast_path: sparse.is_some(),
            kernel: Kernel::Rpt { transform, sparse },
        })
    }

    /// Sets the total transmit power `P`; the forward scale becomes `√(P/N)`.
    pub fn with_power(mut self, power: T) -> Result<Self> {
        if !(power > T::zero()) || !power.is_finite() {
            return Err(Error::invalid("power", "must be positive and finite"));
        }
        self.power = power;
        self.power_scale = (power / T::from_usize(self.n)).sqrt();
        Ok(self)
    }

    pub fn with_fast_path(mut self, enabled: bool) -> Result<Self> {
        if enabled && !self.n.is_power_of_two() {
            return Err(Error::NotPowerOfTwo {
                what: "fast path",
                n: self.n,
            });
        }
        self.fast_path = enabled;
        Ok(self)
    }

    pub fn scheme(&self) -> SchemeKind {
        self.scheme
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn power(&self) -> T {
        self.power
    }

    pub fn power_scale(&self) -> T {
        self.power_scale
    }

    pub fn fast_path(&self) -> bool {
        self.fast_path
    }

    pub fn transform(&self) -> Option<&Arc<PeriodicTransform<T>>> {
        match &self.kernel {
            Kernel::Rpt { transform, .. } => Some(transform),
            Kernel::Dft { .. } => None,
        }
    }

    pub fn modulate(&self, symbols: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        Error::check_len(self.n, symbols.len())?;
        let mut x = match (&self.kernel, self.fast_path) {
            (Kernel::Dft { .. }, true) => fft::fft_unitary(symbols, Direction::Inverse)?.0,
            (
                Kernel::Rpt {
                    sparse: Some(s), ..
                },
                true,
            ) => s.apply(symbols)?.0,
            _ => self.modulate_dense(symbols)?.0,
        };
        self.scale(&mut x, self.power_scale);
        Ok(x)
    }

    /// Dense matrix route, with its operation count. No power scaling.
    pub fn modulate_dense(&self, symbols: &[Complex<T>]) -> Result<(Vec<Complex<T>>, OpCount)> {
        Error::check_len(self.n, symbols.len())?;
        let n = self.n;
        let mut ops = OpCount::default();
        let out = match &self.kernel {
            Kernel::Dft {
                synthesis_twiddles, ..
            } => {
                let scale = T::one() / T::from_usize(n).sqrt();
                ops.complex_mul((n * n) as u64);
                ops.complex_add((n * (n - 1)) as u64);
                dense_dft(symbols, synthesis_twiddles, scale)
            }
            Kernel::Rpt { transform, .. } => {
                ops.real_scale((n * n) as u64);
                ops.complex_add((n * (n - 1)) as u64);
                real_mul_vec(transform.synthesis(), symbols)
            }
        };
        Ok((out, ops))
    }

    /// Subspace-by-subspace synthesis `x = Σ_q x_q`, with
    /// `x_q(n) = 1/√(Nφ(q)) Σ_l X[o_q + l] ĉ_q(n − l)`. RPSDM only.
    pub fn modulate_by_subspace(&self, symbols: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        Error::check_len(self.n, symbols.len())?;
        let Kernel::Rpt { transform, .. } = &self.kernel else {
            return Err(Error::invalid("scheme", "subspace synthesis is RPSDM only"));
        };
        let n = self.n;
        let mut x = vec![Complex::new(T::zero(), T::zero()); n];
        for span in transform.layout().spans() {
            let c = crate::ramanujan::ramanujan_sum(span.q)?;
            let scale = T::one() / T::from_usize(n * span.width).sqrt();
            for (t, xt) in x.iter_mut().enumerate() {
                let part = (0..span.width).fold(Complex::new(T::zero(), T::zero()), |acc, l| {
                    acc + symbols[span.offset + l] * T::lit(c.at(t as i64 - l as i64) as f64)
                });
                *xt += part * scale;
            }
        }
        self.scale(&mut x, self.power_scale);
        Ok(x)
    }

    pub fn demodulate(&self, block: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        Error::check_len(self.n, block.len())?;
        let mut out = match (&self.kernel, self.fast_path) {
            (Kernel::Dft { .. }, true) => fft::fft_unitary(block, Direction::Forward)?.0,
            (
                Kernel::Dft {
                    analysis_twiddles, ..
                },
                false,
            ) => dense_dft(
                block,
                analysis_twiddles,
                T::one() / T::from_usize(self.n).sqrt(),
            ),
            (
                Kernel::Rpt {
                    sparse: Some(s), ..
                },
                true,
            ) => s.apply_transpose(block)?,
            (Kernel::Rpt { transform, .. }, _) => real_mul_vec(transform.e_r(), block),
        };
        self.scale(&mut out, T::one() / self.power_scale);
        Ok(out)
    }

    fn scale(&self, v: &mut [Complex<T>], s: T) {
        if s != T::one() {
            v.iter_mut().for_each(|x| *x *= s);
        }
    }
}

fn dense_dft<T: Real>(x: &[Complex<T>], w: &[Complex<T>], scale: T) -> Vec<Complex<T>> {
    let n = x.len();
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

pub(crate) fn real_mul_vec<T: Real>(
    m: &crate::linalg::Matrix<T>,
    v: &[Complex<T>],
) -> Vec<Complex<T>> {
    (0..m.rows())
        .map(|r| {
            m.row(r)
                .iter()
                .zip(v)
                .fold(Complex::new(T::zero(), T::zero()), |acc, (&a, &b)| {
                    acc + b * a
                })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detection::qam::QamConstellation;
    use crate::rng;
    use rand::Rng;

    type C = Complex<f64>;

    fn unit(n: usize, k: usize) -> Vec<C> {
        (0..n)
            .map(|i| C::new(if i == k { 1.0 } else { 0.0 }, 0.0))
            .collect()
    }

    fn close(a: &[C], b: &[C], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).norm() < tol)
    }

    fn random_symbols(n: usize, seed: u64) -> Vec<C> {
        let qam = QamConstellation::<f64>::new(16).unwrap().normalized();
        let mut r = rng::seeded(seed);
        (0..n)
            .map(|_| qam.points()[r.random_range(0..16)])
            .collect()
    }

    #[test]
    fn rpsdm_dc_symbol() {
        let plan = ModulatorPlan::<f64>::rpsdm(4).unwrap();
        let x = plan.modulate(&unit(4, 0)).unwrap();
        assert!(close(&x, &[C::new(0.5, 0.0); 4], 1e-12));
    }

    #[test]
    fn ofdm_dc_symbol() {
        for n in [4usize, 6, 16] {
            let plan = ModulatorPlan::<f64>::ofdm(n).unwrap();
            let x = plan.modulate(&unit(n, 0)).unwrap();
            let v = 1.0 / (n as f64).sqrt();
            assert!(close(&x, &vec![C::new(v, 0.0); n], 1e-12));
        }
    }

    #[test]
    fn rpsdm_all_beta_block_peak() {
        let beta = C::new(3.0, 3.0);
        let plan = ModulatorPlan::<f64>::rpsdm(4).unwrap();
        let x = plan.modulate(&[beta; 4]).unwrap();
        let expected = beta * ((1.0 + 1.0 + 2f64.sqrt()) / 2.0);
        assert!((x[0] - expected).norm() < 1e-12);
        let (dense, _) = plan.modulate_dense(&[beta; 4]).unwrap();
        assert!((dense[0] - expected).norm() < 1e-12);
    }

    #[test]
    fn demodulate_examples() {
        let plan = ModulatorPlan::<f64>::ofdm(8).unwrap();
        let y = plan
            .demodulate(&[C::new(1.0 / 8f64.sqrt(), 0.0); 8])
            .unwrap();
        assert!(close(&y, &unit(8, 0), 1e-12));

        let plan = ModulatorPlan::<f64>::rpsdm(4).unwrap();
        let col = plan.transform().unwrap().synthesis().column(2);
        let block: Vec<C> = col.into_iter().map(|v| C::new(v, 0.0)).collect();
        assert!(close(&plan.demodulate(&block).unwrap(), &unit(4, 2), 1e-12));
    }

    #[test]
    fn round_trip_both_schemes() {
        for n in [2usize, 4, 6, 8, 12, 16, 64, 128] {
            for scheme in SchemeKind::ALL {
                let plan = ModulatorPlan::<f64>::new(scheme, n).unwrap();
                for trial in 0..100 {
                    let s = random_symbols(n, trial * 1000 + n as u64);
                    let back = plan.demodulate(&plan.modulate(&s).unwrap()).unwrap();
                    assert!(close(&back, &s, 1e-9), "{scheme} n={n}");
                }
            }
        }
    }

    #[test]
    fn round_trip_with_power_and_dense_route() {
        let plan = ModulatorPlan::<f64>::rpsdm(16)
            .unwrap()
            .with_power(3.0)
            .unwrap()
            .with_fast_path(false)
            .unwrap();
        let s = random_symbols(16, 5);
        let x = plan.modulate(&s).unwrap();
        assert!(close(&plan.demodulate(&x).unwrap(), &s, 1e-9));
        assert!(ModulatorPlan::<f64>::ofdm(6)
            .unwrap()
            .with_fast_path(true)
            .is_err());
        assert!(ModulatorPlan::<f64>::ofdm(6)
            .unwrap()
            .with_power(0.0)
            .is_err());
    }

    #[test]
    fn subspace_route_equals_matrix_route() {
        for n in [4usize, 6, 8, 12, 30, 64] {
            let plan = ModulatorPlan::<f64>::rpsdm(n).unwrap();
            let s = random_symbols(n, n as u64);
            let a = plan.modulate(&s).unwrap();
            let b = plan.modulate_by_subspace(&s).unwrap();
            assert!(close(&a, &b, 1e-9), "n={n}");
        }
        assert!(ModulatorPlan::<f64>::ofdm(4)
            .unwrap()
            .modulate_by_subspace(&unit(4, 0))
            .is_err());
    }

    #[test]
    fn fast_and_dense_routes_agree() {
        for n in [4usize, 32, 256] {
            for scheme in SchemeKind::ALL {
                let plan = ModulatorPlan::<f64>::new(scheme, n).unwrap();
                let s = random_symbols(n, 9);
                let fast = plan.modulate(&s).unwrap();
                let (dense, _) = plan.modulate_dense(&s).unwrap();
                assert!(close(&fast, &dense, 1e-9));
            }
        }
    }

    #[test]
    fn length_mismatch_is_rejected() {
        let plan = ModulatorPlan::<f64>::rpsdm(8).unwrap();
        assert!(matches!(
            plan.modulate(&unit(4, 0)),
            Err(Error::LengthMismatch {
                expected: 8,
                actual: 4
            })
        ));
        assert!(plan.demodulate(&unit(9, 0)).is_err());
    }

    #[test]
    fn ofdm_preserves_power() {
        let plan = ModulatorPlan::<f64>::ofdm(64)
            .unwrap()
            .with_power(16.0)
            .unwrap();
        let s = random_symbols(64, 1);
        let x = plan.modulate(&s).unwrap();
        let px: f64 = x.iter().map(|v| v.norm_sqr()).sum();
        let ps: f64 = s.iter().map(|v| v.norm_sqr()).sum();
        assert!((px - 16.0 / 64.0 * ps).abs() < 1e-9);
    }

    #[test]
    fn sparse_irpt_matches_dense() {
        let t = PeriodicTransform::<f64>::new(4).unwrap();
        let mut r = rng::seeded(3);
        let s: Vec<C> = (0..4).map(|_| C::new(r.random(), r.random())).collect();
        let (fast, ops) = sparse_irpt(&t, &s).unwrap();
        let dense = real_mul_vec(t.synthesis(), &s);
        assert!(close(&fast, &dense, 1e-9));
        assert_eq!(ops.totals(), (24, 16));
        assert_eq!(ops.complex_muls(), 4 * 3);
        assert_eq!(ops.complex_adds(), 4 * 2);
        assert!(sparse_irpt(
            &PeriodicTransform::<f64>::new(6).unwrap(),
            &[C::default(); 6]
        )
        .is_err());
    }

    #[test]
    fn sparse_irpt_n256_counts() {
        let t = PeriodicTransform::<f64>::new(256).unwrap();
        let (_, ops) = sparse_irpt(&t, &vec![C::new(1.0, 0.0); 256]).unwrap();
        assert_eq!(ops.totals(), (4608, 4096));
    }

    #[test]
    fn counters_reproduce_closed_forms() {
        for m in 0..=8u32 {
            let n = 1usize << m;
            let x = vec![C::new(1.0, -1.0); n];
            let (_, fft_count) = fft::fft_unitary(&x, Direction::Inverse).unwrap();
            assert_eq!(fft_count.totals(), fft_ops(n as u64).unwrap().totals());
            let t = PeriodicTransform::<f64>::new(n).unwrap();
            let (_, sp) = sparse_irpt(&t, &x).unwrap();
            assert_eq!(sp.totals(), sparse_irpt_ops(n as u64).unwrap().totals());
        }
        for n in [1usize, 3, 6, 8, 12] {
            let x = vec![C::new(1.0, 0.5); n];
            let (_, o) = ModulatorPlan::<f64>::ofdm(n)
                .unwrap()
                .modulate_dense(&x)
                .unwrap();
            assert_eq!(o.totals(), direct_ofdm_ops(n as u64).totals());
            let (_, r) = ModulatorPlan::<f64>::rpsdm(n)
                .unwrap()
                .modulate_dense(&x)
                .unwrap();
            assert_eq!(r.totals(), direct_rpsdm_ops(n as u64).totals());
        }
        assert!(fft_ops(12).is_none());
        assert!(sparse_irpt_ops(12).is_none());
    }

    #[test]
    fn scheme_parsing() {
        assert_eq!("OFDM".parse::<SchemeKind>().unwrap(), SchemeKind::Ofdm);
        assert_eq!("rpsdm".parse::<SchemeKind>().unwrap(), SchemeKind::Rpsdm);
        assert!("fbmc".parse::<SchemeKind>().is_err());
    }

    #[test]
    fn f32_round_trip() {
        let plan = ModulatorPlan::<f32>::rpsdm(12).unwrap();
        let s: Vec<Complex<f32>> = (0..12)
            .map(|i| Complex::new(i as f32, -(i as f32)))
            .collect();
        let back = plan.demodulate(&plan.modulate(&s).unwrap()).unwrap();
        assert!(back.iter().zip(&s).all(|(a, b)| (a - b).norm() < 1e-3));
    }
}
