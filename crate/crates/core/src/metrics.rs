//! PAPR, CCDF and BER Monte Carlo, and operation-count tables.

use num_complex::Complex;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::channel::{add_cp, effective_blocks, remove_cp, transmit, ChannelRealization};
use crate::detection::qam::QamConstellation;
use crate::detection::{receiver_ops, BlockEqualizer, DetectorKind, DetectorSpec};
use crate::error::{Error, Result};
use crate::number_theory::{factorize, totient_raw, DivisorSet};
use crate::ramanujan::ramanujan_sum;
use crate::rng::trial_rng;
use crate::transforms::{
    direct_ofdm_ops, direct_rpsdm_ops, fft_ops, sparse_irpt_ops, ModulatorPlan, OpCount, SchemeKind,
};

type C = Complex<f64>;

/// `max |x|² / mean |x|²` over the block.
pub fn papr(x: &[C]) -> Result<f64> {
    let total: f64 = x.iter().map(|v| v.norm_sqr()).sum();
    if x.is_empty() || total == 0.0 {
        return Err(Error::invalid(
            "x",
            "PAPR of an all-zero block is undefined",
        ));
    }
    let peak = x.iter().map(|v| v.norm_sqr()).fold(0.0, f64::max);
    Ok(peak * x.len() as f64 / total)
}

pub fn papr_db(x: &[C]) -> Result<f64> {
    Ok(10.0 * papr(x)?.log10())
}

/// `γ_q = Σ_{l<φ(q)} c_q(l)` by direct summation.
pub fn gamma_q(q: u64) -> Result<i64> {
    let c = ramanujan_sum(q)?;
    Ok((0..totient_raw(q) as i64).map(|l| c.at(l)).sum())
}

/// Closed form of `γ_q`: `q − φ(q)` for a prime, `p^{t−1}` for `p^t`, `None`
/// otherwise.
pub fn gamma_q_closed_form(q: u64) -> Option<i64> {
    match factorize(q).as_slice() {
        [(p, 1)] => Some((p - totient_raw(*p)) as i64),
        [(p, t)] => Some(p.pow(t - 1) as i64),
        _ => None,
    }
}

/// Closed-form worst-case PAPR in dB: `Nβ²/α²` for OFDM and
/// `β²(Σ_q γ_q/√φ(q))² / (Nα²)` for RPSDM.
pub fn worst_case_papr(scheme: SchemeKind, n: u64, qam: &QamConstellation<f64>) -> Result<f64> {
    if n == 0 {
        return Err(Error::invalid("n", "block length must be positive"));
    }
    let ratio = qam.beta2() / qam.alpha2();
    let linear = match scheme {
        SchemeKind::Ofdm => n as f64 * ratio,
        SchemeKind::Rpsdm => {
            let layout = DivisorSet::new(n)?;
            let mut sum = 0.0;
            for (&q, &phi) in layout.divisors().iter().zip(layout.totients()) {
                sum += gamma_q(q)? as f64 / (phi as f64).sqrt();
            }
            ratio * sum * sum / n as f64
        }
    };
    Ok(10.0 * linear.log10())
}

/// Block obtained by modulating the corner point `β` on every subcarrier.
pub fn all_beta_block(scheme: SchemeKind, n: usize, qam: &QamConstellation<f64>) -> Result<Vec<C>> {
    let plan = ModulatorPlan::<f64>::new(scheme, n)?;
    plan.modulate(&vec![qam.beta(); n])
}

/// Peak power of the all-β block over the ensemble average power `α²`, in dB.
pub fn measured_worst_case_papr(
    scheme: SchemeKind,
    n: usize,
    qam: &QamConstellation<f64>,
) -> Result<f64> {
    let x = all_beta_block(scheme, n, qam)?;
    let peak = x.iter().map(|v| v.norm_sqr()).fold(0.0, f64::max);
    Ok(10.0 * (peak / qam.alpha2()).log10())
}

/// Wilson score interval at 95% for `k` hits out of `n`.
pub fn wilson_interval(k: u64, n: u64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959_963_984_540_054;
    let nf = n as f64;
    let p = k as f64 / nf;
    let z2 = z * z;
    let denom = 1.0 + z2 / nf;
    let center = (p + z2 / (2.0 * nf)) / denom;
    let half = z / denom * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt();
    let lo = if k == 0 {
        0.0
    } else {
        (center - half).max(0.0)
    };
    let hi = if k == n {
        1.0
    } else {
        (center + half).min(1.0)
    };
    (lo, hi)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Ccdf,
    Ber,
}

/// One simulated curve with per-point 95% intervals.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveResult {
    pub metric: Metric,
    pub scheme: SchemeKind,
    pub detector: Option<DetectorKind>,
    pub n: usize,
    pub l: Option<usize>,
    pub m: usize,
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub ci_low: Vec<f64>,
    pub ci_high: Vec<f64>,
    /// Hits behind each value (exceedances or bit errors).
    pub counts: Vec<u64>,
    /// Denominator of each value (blocks or bits).
    pub samples: u64,
    pub trials: u64,
    pub seed: u64,
    /// Channel draws rejected as singular and redrawn.
    pub resampled: u64,
}

impl CurveResult {
    fn with_counts(mut self, counts: Vec<u64>) -> Self {
        let n = self.samples;
        self.values = counts.iter().map(|&k| k as f64 / n as f64).collect();
        let (lo, hi): (Vec<f64>, Vec<f64>) = counts.iter().map(|&k| wilson_interval(k, n)).unzip();
        self.ci_low = lo;
        self.ci_high = hi;
        self.counts = counts;
        self
    }

    /// `grid,value,ci_low,ci_high` with 17 significant digits, LF endings.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("grid,value,ci_low,ci_high\n");
        for i in 0..self.grid.len() {
            out.push_str(&format!(
                "{:.16e},{:.16e},{:.16e},{:.16e}\n",
                self.grid[i], self.values[i], self.ci_low[i], self.ci_high[i]
            ));
        }
        out
    }

    /// Grid position where the curve first falls to `level`, interpolated
    /// linearly in `log10(value)`.
    pub fn crossing(&self, level: f64) -> Option<f64> {
        let idx = self.values.iter().position(|&v| v <= level)?;
        if idx == 0 {
            return Some(self.grid[0]);
        }
        let (g0, g1) = (self.grid[idx - 1], self.grid[idx]);
        let (v0, v1) = (self.values[idx - 1], self.values[idx]);
        if v1 <= 0.0 {
            let t = (v0 - level) / (v0 - v1);
            return Some(g0 + t * (g1 - g0));
        }
        let t = (v0.log10() - level.log10()) / (v0.log10() - v1.log10());
        Some(g0 + t * (g1 - g0))
    }
}

/// Fraction of random blocks whose PAPR exceeds each threshold (dB).
/// Symbols are uniform over the constellation; one RNG stream per trial.
pub fn papr_ccdf(
    scheme: SchemeKind,
    n: usize,
    qam: &QamConstellation<f64>,
    thresholds_db: &[f64],
    trials: u64,
    seed: u64,
) -> Result<CurveResult> {
    if trials == 0 {
        return Err(Error::invalid("trials", "must be at least 1"));
    }
    let plan = ModulatorPlan::<f64>::new(scheme, n)?;
    let paprs: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, 0, t);
            let symbols: Vec<C> = (0..n).map(|_| qam.random_symbol(&mut rng)).collect();
            papr_db(&plan.modulate(&symbols)?)
        })
        .collect::<Result<_>>()?;
    let counts = thresholds_db
        .iter()
        .map(|&g| paprs.iter().filter(|&&p| p > g).count() as u64)
        .collect();
    Ok(CurveResult {
        metric: Metric::Ccdf,
        scheme,
        detector: None,
        n,
        l: None,
        m: qam.m(),
        grid: thresholds_db.to_vec(),
        values: Vec::new(),
        ci_low: Vec::new(),
        ci_high: Vec::new(),
        counts: Vec::new(),
        samples: trials,
        trials,
        seed,
        resampled: 0,
    }
    .with_counts(counts))
}

/// How MMSE estimates are turned into hard decisions.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MmseDecision {
    /// Slice `G Y` directly.
    Biased,
    /// Divide each component by its gain `[G H]_{kk}` first.
    #[default]
    Unbiased,
}

/// Energy the SNR grid refers to.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SnrConvention {
    /// `σ² = 10^{−SNR/10}` for unit-energy symbols.
    #[default]
    Es,
    /// Per-bit energy: `σ² = 10^{−SNR/10} / log2 M`.
    Eb,
}

impl SnrConvention {
    pub fn noise_variance(self, snr_db: f64, bits_per_symbol: usize) -> f64 {
        let es = 10f64.powf(-snr_db / 10.0);
        match self {
            SnrConvention::Es => es,
            SnrConvention::Eb => es / bits_per_symbol as f64,
        }
    }
}

/// Settings shared by every detector on one BER sweep.
#[derive(Debug, Clone, Serialize)]
pub struct BerSetup {
    pub scheme: SchemeKind,
    pub n: usize,
    pub l: usize,
    pub m: usize,
    pub snr_grid_db: Vec<f64>,
    /// Blocks of `n` symbols per SNR point.
    pub trials: u64,
    pub seed: u64,
    pub decision: MmseDecision,
    pub snr: SnrConvention,
}

const CHANNEL_STREAM: u64 = 0;

/// BER curves for several detectors over one set of realisations.
///
/// Trial `t` draws its channel and bits from stream `(seed, 0, t)`, shared
/// by every SNR point, detector and scheme; the noise at SNR point `p` comes
/// from stream `(seed, p + 1, t)`. Channels singular under ZF are redrawn
/// from the same stream and counted.
pub fn ber_curves(setup: &BerSetup, detectors: &[DetectorKind]) -> Result<Vec<CurveResult>> {
    if setup.trials == 0 {
        return Err(Error::invalid("trials", "must be at least 1"));
    }
    if setup.l == 0 || setup.l > setup.n {
        return Err(Error::invalid(
            "l",
            format!("need 1 <= l <= n, got l={}", setup.l),
        ));
    }
    let qam = QamConstellation::<f64>::new(setup.m)?.normalized();
    let plan = ModulatorPlan::<f64>::new(setup.scheme, setup.n)?;
    let bits_per_block = setup.n * qam.bits_per_symbol();
    let sigmas: Vec<f64> = setup
        .snr_grid_db
        .iter()
        .map(|&s| setup.snr.noise_variance(s, qam.bits_per_symbol()))
        .collect();
    let needs_zf = detectors.contains(&DetectorKind::Zf);
    let points = sigmas.len();
    let width = points * detectors.len();

    let per_trial: Vec<(Vec<u64>, u64)> = (0..setup.trials)
        .into_par_iter()
        .map(|t| -> Result<(Vec<u64>, u64)> {
            let mut rng = trial_rng(setup.seed, CHANNEL_STREAM, t);
            let mut redraws = 0u64;
            let (ch, blocks) = loop {
                let ch = ChannelRealization::<f64>::draw(&mut rng, setup.l, setup.n)?;
                let blocks = effective_blocks(&plan, &ch)?;
                if !needs_zf {
                    break (ch, blocks);
                }
                match BlockEqualizer::new(DetectorSpec::zf(), &blocks) {
                    Ok(_) => break (ch, blocks),
                    Err(Error::Singular { .. }) if redraws < 1000 => redraws += 1,
                    Err(e) => return Err(e),
                }
            };
            let bits: Vec<u8> = (0..bits_per_block)
                .map(|_| rng.random_range(0..2u8))
                .collect();
            let x_cp = add_cp(&plan.modulate(&qam.map(&bits)?)?, setup.l)?;
            let mut errors = vec![0u64; width];
            for (p, &sigma2) in sigmas.iter().enumerate() {
                let mut noise = trial_rng(setup.seed, p as u64 + 1, t);
                let y = remove_cp(&transmit(&x_cp, &ch, sigma2, &mut noise)?, setup.l)?;
                let y = plan.demodulate(&y)?;
                for (d, &kind) in detectors.iter().enumerate() {
                    let spec = if sigma2 > 0.0 {
                        DetectorSpec::for_kind(kind, sigma2)?
                    } else {
                        DetectorSpec::zf()
                    };
                    let eq = BlockEqualizer::new(spec, &blocks)?;
                    let est = match (kind, setup.decision) {
                        (DetectorKind::Mmse, MmseDecision::Biased) => eq.apply(&y)?.0,
                        _ => eq.apply_unbiased(&y)?,
                    };
                    let decided = qam.demap(&est);
                    errors[d * points + p] =
                        decided.iter().zip(&bits).filter(|(a, b)| a != b).count() as u64;
                }
            }
            Ok((errors, redraws))
        })
        .collect::<Result<_>>()?;

    let resampled = per_trial.iter().map(|(_, r)| r).sum();
    let mut totals = vec![0u64; width];
    for (errors, _) in &per_trial {
        for (acc, e) in totals.iter_mut().zip(errors) {
            *acc += e;
        }
    }
    let samples = setup.trials * bits_per_block as u64;
    Ok(detectors
        .iter()
        .enumerate()
        .map(|(d, &kind)| {
            CurveResult {
                metric: Metric::Ber,
                scheme: setup.scheme,
                detector: Some(kind),
                n: setup.n,
                l: Some(setup.l),
                m: setup.m,
                grid: setup.snr_grid_db.clone(),
                values: Vec::new(),
                ci_low: Vec::new(),
                ci_high: Vec::new(),
                counts: Vec::new(),
                samples,
                trials: setup.trials,
                seed: setup.seed,
                resampled,
            }
            .with_counts(totals[d * points..(d + 1) * points].to_vec())
        })
        .collect())
}

/// Single-detector BER curve, see [`ber_curves`].
pub fn ber_curve(setup: &BerSetup, detector: DetectorKind) -> Result<CurveResult> {
    Ok(ber_curves(setup, &[detector])?.remove(0))
}

/// Real operation counts for one block of length `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComplexityReport {
    pub n: u64,
    pub direct_ofdm: OpCount,
    pub direct_rpsdm: OpCount,
    /// Radix-2 FFT; only for powers of two.
    pub fft: Option<OpCount>,
    /// Sparse inverse transform; only for powers of two.
    pub sparse_irpt: Option<OpCount>,
    pub receiver_ofdm: OpCount,
    pub receiver_rpsdm: OpCount,
}

pub fn complexity_report(n: u64) -> Result<ComplexityReport> {
    if n == 0 {
        return Err(Error::invalid("n", "block length must be positive"));
    }
    Ok(ComplexityReport {
        n,
        direct_ofdm: direct_ofdm_ops(n),
        direct_rpsdm: direct_rpsdm_ops(n),
        fft: fft_ops(n),
        sparse_irpt: sparse_irpt_ops(n),
        receiver_ofdm: receiver_ops(SchemeKind::Ofdm, n)?,
        receiver_rpsdm: receiver_ops(SchemeKind::Rpsdm, n)?,
    })
}

/// Mean power of random-symbol blocks, averaged over `trials` blocks.
pub fn mean_block_power(
    scheme: SchemeKind,
    n: usize,
    qam: &QamConstellation<f64>,
    trials: u64,
    seed: u64,
) -> Result<f64> {
    let plan = ModulatorPlan::<f64>::new(scheme, n)?;
    let sums: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, 0, t);
            let symbols: Vec<C> = (0..n).map(|_| qam.random_symbol(&mut rng)).collect();
            let x = plan.modulate(&symbols)?;
            Ok(x.iter().map(|v| v.norm_sqr()).sum::<f64>() / n as f64)
        })
        .collect::<Result<_>>()?;
    Ok(sums.iter().sum::<f64>() / trials as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qam16() -> QamConstellation<f64> {
        QamConstellation::new(16).unwrap()
    }

    #[test]
    fn papr_basics() {
        assert!((papr(&[C::new(2.0, -1.0); 5]).unwrap() - 1.0).abs() < 1e-15);
        let impulse = [C::new(1.0, 0.0), C::default(), C::default(), C::default()];
        assert_eq!(papr(&impulse).unwrap(), 4.0);
        assert!((papr_db(&impulse).unwrap() - 6.0206).abs() < 1e-4);
        assert!(papr(&[C::default(); 3]).is_err());
        assert!(papr(&[]).is_err());
    }

    #[test]
    fn ofdm_all_beta_peak() {
        let q = qam16();
        let x = all_beta_block(SchemeKind::Ofdm, 8, &q).unwrap();
        assert!((x[0] - q.beta() * 8f64.sqrt()).norm() < 1e-12);
        let peak = x.iter().map(|v| v.norm_sqr()).fold(0.0, f64::max);
        assert!((peak / q.alpha2() - 8.0 * 18.0 / 10.0).abs() < 1e-9);
    }

    #[test]
    fn gamma_direct_vs_closed_form() {
        let primes = (2u64..=97).filter(|&p| factorize(p).len() == 1 && factorize(p)[0].1 == 1);
        for p in primes {
            assert_eq!(
                gamma_q(p).unwrap(),
                gamma_q_closed_form(p).unwrap(),
                "p={p}"
            );
            assert_eq!(gamma_q(p).unwrap(), 1);
        }
        for p in [2u64, 3, 5] {
            for t in 1..=4 {
                let q = p.pow(t);
                assert_eq!(
                    gamma_q(q).unwrap(),
                    gamma_q_closed_form(q).unwrap(),
                    "q={q}"
                );
            }
        }
        assert_eq!(gamma_q_closed_form(12), None);
        assert_eq!([1u64, 2, 4, 8].map(|q| gamma_q(q).unwrap()), [1, 1, 2, 4]);
    }

    #[test]
    fn worst_case_examples() {
        let q = qam16();
        let ofdm8 = worst_case_papr(SchemeKind::Ofdm, 8, &q).unwrap();
        assert!((ofdm8 - 10.0 * 14.4f64.log10()).abs() < 1e-12);
        let r8 = worst_case_papr(SchemeKind::Rpsdm, 8, &q).unwrap();
        let s: f64 = 1.0 + 1.0 + 2.0 / 2f64.sqrt() + 4.0 / 2.0;
        assert!((r8 - 10.0 * (1.8 * s * s / 8.0).log10()).abs() < 1e-12);
        assert!((r8 - 8.19).abs() < 0.05);
        assert!((worst_case_papr(SchemeKind::Rpsdm, 16, &q).unwrap() - 8.83).abs() < 0.05);
        assert!((worst_case_papr(SchemeKind::Ofdm, 512, &q).unwrap() - 29.64).abs() < 0.05);
        assert!(worst_case_papr(SchemeKind::Ofdm, 0, &q).is_err());
    }

    #[test]
    fn closed_form_matches_all_beta_synthesis() {
        let q = qam16();
        for n in [4usize, 8, 16, 64, 6, 12] {
            for scheme in SchemeKind::ALL {
                let closed = worst_case_papr(scheme, n as u64, &q).unwrap();
                let measured = measured_worst_case_papr(scheme, n, &q).unwrap();
                assert!(
                    (closed - measured).abs() < 1e-9,
                    "{scheme} n={n}: {closed} vs {measured}"
                );
            }
        }
    }

    #[test]
    fn worst_case_trends() {
        let q = qam16();
        let mut prev: Option<(f64, f64)> = None;
        for k in 1..=9 {
            let n = 1u64 << k;
            let o = worst_case_papr(SchemeKind::Ofdm, n, &q).unwrap();
            let r = worst_case_papr(SchemeKind::Rpsdm, n, &q).unwrap();
            assert!(r <= 10.0);
            if let Some((po, pr)) = prev {
                assert!((o - po - 10.0 * 2f64.log10()).abs() < 1e-12);
                assert!(r > pr);
            }
            prev = Some((o, r));
        }
    }

    #[test]
    fn wilson_contains_estimate() {
        let (lo, hi) = wilson_interval(10, 1000);
        assert!(lo < 0.01 && 0.01 < hi);
        assert_eq!(wilson_interval(0, 100).0, 0.0);
        assert!(wilson_interval(0, 100).1 > 0.0);
    }

    #[test]
    fn ccdf_shape() {
        let q = qam16();
        let grid: Vec<f64> = (-2..=12).map(|g| g as f64).collect();
        let c = papr_ccdf(SchemeKind::Rpsdm, 16, &q, &grid, 2000, 3).unwrap();
        assert_eq!(c.values[0], 1.0);
        assert!(c.values.windows(2).all(|w| w[1] <= w[0]));
        assert!(c.values.iter().all(|v| (0.0..=1.0).contains(v)));
        assert!(c.ci_low.iter().zip(&c.values).all(|(l, v)| l <= v));
        assert_eq!(
            c,
            papr_ccdf(SchemeKind::Rpsdm, 16, &q, &grid, 2000, 3).unwrap()
        );
        assert!(papr_ccdf(SchemeKind::Ofdm, 16, &q, &grid, 0, 3).is_err());
        let csv = c.to_csv();
        assert!(csv.starts_with("grid,value,ci_low,ci_high\n"));
        assert_eq!(csv.lines().count(), grid.len() + 1);
        assert!(!csv.contains('\r'));
    }

    #[test]
    fn crossing_interpolates_in_log_domain() {
        let mut c = papr_ccdf(SchemeKind::Ofdm, 4, &qam16(), &[0.0], 1, 0).unwrap();
        c.grid = vec![0.0, 1.0, 2.0];
        c.values = vec![1.0, 1e-2, 1e-4];
        assert!((c.crossing(1e-3).unwrap() - 1.5).abs() < 1e-12);
        assert_eq!(c.crossing(1e-6), None);
    }

    #[test]
    fn average_power_bound() {
        let q = qam16();
        let trials = 4000u64;
        for n in [8usize, 12, 64] {
            let p = mean_block_power(SchemeKind::Rpsdm, n, &q, trials, 11).unwrap();
            assert!(
                p <= q.alpha2() * (1.0 + 5.0 / (trials as f64).sqrt()),
                "n={n}: {p}"
            );
        }
    }

    fn setup(scheme: SchemeKind, n: usize, grid: Vec<f64>, trials: u64) -> BerSetup {
        BerSetup {
            scheme,
            n,
            l: 4,
            m: 16,
            snr_grid_db: grid,
            trials,
            seed: 5,
            decision: MmseDecision::Unbiased,
            snr: SnrConvention::Es,
        }
    }

    #[test]
    fn noise_free_ber_is_zero() {
        for scheme in SchemeKind::ALL {
            for n in [8usize, 64] {
                let mut s = setup(scheme, n, vec![f64::INFINITY], 100);
                s.l = 8;
                let c = ber_curve(&s, DetectorKind::Zf).unwrap();
                assert_eq!(c.counts, vec![0], "{scheme} n={n}");
            }
        }
    }

    #[test]
    fn ber_decreases_with_snr() {
        for scheme in SchemeKind::ALL {
            let curves = ber_curves(
                &setup(scheme, 16, vec![0.0, 10.0, 20.0], 300),
                &DetectorKind::ALL,
            )
            .unwrap();
            for c in &curves {
                assert!(c.values.windows(2).all(|w| w[1] <= w[0]), "{:?}", c.values);
                assert!(c.values[0] > 0.0);
            }
        }
    }

    #[test]
    fn invalid_ber_setups() {
        let mut s = setup(SchemeKind::Ofdm, 8, vec![10.0], 1);
        s.l = 9;
        assert!(ber_curve(&s, DetectorKind::Zf).is_err());
        s.l = 2;
        s.trials = 0;
        assert!(ber_curve(&s, DetectorKind::Zf).is_err());
    }

    #[test]
    fn complexity_rows() {
        let r = complexity_report(4).unwrap();
        assert_eq!(r.fft.unwrap().totals(), (16, 24));
        assert_eq!(r.sparse_irpt.unwrap().totals(), (24, 16));
        let r = complexity_report(64).unwrap();
        assert_eq!(r.fft.unwrap().totals(), (768, 1152));
        assert_eq!(r.sparse_irpt.unwrap().totals(), (896, 768));
        let r = complexity_report(1).unwrap();
        assert_eq!(r.direct_ofdm.totals(), (4, 2));
        assert!(complexity_report(12).unwrap().fft.is_none());
        assert!(complexity_report(0).is_err());
    }
}
