//! Ramanujan sums, the integer subspace bases built from them, and the
//! normalised periodic transform pair used by the RPSDM modulator.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::number_theory::{self, gcd_raw, mobius_raw, DivisorSet};
use crate::scalar::Real;

/// One period of the Ramanujan sum `c_q[n]`, `n = 0..q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RamanujanSum {
    q: u64,
    values: Vec<i64>,
}

impl RamanujanSum {
    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    /// `c_q[n]` for any integer `n` (the sequence is `q`-periodic).
    pub fn at(&self, n: i64) -> i64 {
        self.values[n.rem_euclid(self.q as i64) as usize]
    }
}

/// Computes `c_q[n] = Σ_{d | gcd(n, q)} d μ(q/d)` in exact integer arithmetic.
pub fn ramanujan_sum(q: u64) -> Result<RamanujanSum> {
    if q == 0 {
        return Err(Error::invalid("q", "period must be positive"));
    }
    let divisors = number_theory::divisors_raw(q);
    let values = (0..q)
        .map(|n| {
            let g = gcd_raw(n, q);
            divisors
                .iter()
                .filter(|&&d| g.is_multiple_of(d))
                .map(|&d| d as i64 * mobius_raw(q / d))
                .sum()
        })
        .collect();
    Ok(RamanujanSum { q, values })
}

/// `q × q` circulant `D_q`: first column `c_q`, each further column a
/// circular down-shift of the previous one.
pub fn circulant_integer_matrix(q: u64) -> Result<Matrix<i64>> {
    let c = ramanujan_sum(q)?;
    let q = q as usize;
    Ok(Matrix::from_fn(q, q, |r, col| c.at(r as i64 - col as i64)))
}

/// The `N × φ(q)` block of the modulation matrix for one divisor `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceBasis {
    q: u64,
    n_total: usize,
    matrix: Matrix<i64>,
}

impl SubspaceBasis {
    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn n_total(&self) -> usize {
        self.n_total
    }

    pub fn matrix(&self) -> &Matrix<i64> {
        &self.matrix
    }

    pub fn width(&self) -> usize {
        self.matrix.cols()
    }
}

/// Column `l` is `c_q[((n - l))_q]` for `n = 0..N`, i.e. the first `φ(q)`
/// columns of `D_q` tiled `N / q` times.
pub fn subspace_basis(q: u64, n_total: usize) -> Result<SubspaceBasis> {
    if q == 0 || n_total == 0 || !(n_total as u64).is_multiple_of(q) {
        return Err(Error::invalid(
            "q",
            format!("{q} does not divide block length {n_total}"),
        ));
    }
    let c = ramanujan_sum(q)?;
    let width = number_theory::totient_raw(q) as usize;
    let matrix = Matrix::from_fn(n_total, width, |r, l| c.at(r as i64 - l as i64));
    Ok(SubspaceBasis { q, n_total, matrix })
}

/// How the demodulation matrix was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DemodRoute {
    /// `E_r = (Q E_t)^T`; valid because the normalised basis is orthonormal
    /// when `N` is a power of two.
    Transpose,
    /// `E_r = (Q E_t)^{-1}` by dense LU.
    Inverse,
}

/// Modulation matrix `E_t`, per-column normalisation `Q` and demodulation
/// matrix `E_r` for block length `N`.
///
/// `Q` scales columns: the normalised synthesis matrix is `E_t · diag(q_norm)`,
/// written `Q E_t` throughout the crate.
#[derive(Debug, Clone)]
pub struct PeriodicTransform<T> {
    n: usize,
    layout: DivisorSet,
    e_t: Matrix<i64>,
    q_norm: Vec<T>,
    synthesis: Matrix<T>,
    e_r: Matrix<T>,
    route: DemodRoute,
    residual: T,
}

impl<T: Real> PeriodicTransform<T> {
    /// Builds the transform for block length `n`. The demodulator is checked
    /// against `E_r (Q E_t) = I`; a residual above [`Real::TOLERANCE`] is a
    /// numerical error.
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("n", "block length must be positive"));
        }
        let layout = DivisorSet::new(n as u64)?;
        let mut e_t = Matrix::zeros(n, n);
        let mut q_norm = vec![T::zero(); n];
        for span in layout.spans() {
            let basis = subspace_basis(span.q, n)?;
            let scale = T::one() / T::from_usize(n * span.width).sqrt();
            for l in 0..span.width {
                q_norm[span.offset + l] = scale;
                for r in 0..n {
                    e_t.set(r, span.offset + l, basis.matrix.get(r, l));
                }
            }
        }
        let synthesis = Matrix::from_fn(n, n, |r, c| T::lit(e_t.get(r, c) as f64) * q_norm[c]);

        let (e_r, route) = if n.is_power_of_two() {
            (synthesis.transpose(), DemodRoute::Transpose)
        } else {
            let inv = linalg::inverse(&synthesis).map_err(|e| {
                Error::Numerical(format!(
                    "normalised transform for N={n} not invertible: {e}"
                ))
            })?;
            (inv, DemodRoute::Inverse)
        };

        let residual = identity_residual(&e_r, &e_t, &q_norm);
        if !(residual < T::TOLERANCE) {
            return Err(Error::Numerical(format!(
                "|E_r Q E_t - I|_max = {residual} for N={n}"
            )));
        }

        Ok(Self {
            n,
            layout,
            e_t,
            q_norm,
            synthesis,
            e_r,
            route,
            residual,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn layout(&self) -> &DivisorSet {
        &self.layout
    }

    /// Integer modulation matrix `E_t`.
    pub fn e_t(&self) -> &Matrix<i64> {
        &self.e_t
    }

    /// Diagonal of `Q`.
    pub fn q_norm(&self) -> &[T] {
        &self.q_norm
    }

    /// `Q E_t`.
    pub fn synthesis(&self) -> &Matrix<T> {
        &self.synthesis
    }

    pub fn e_r(&self) -> &Matrix<T> {
        &self.e_r
    }

    pub fn route(&self) -> DemodRoute {
        self.route
    }

    /// `max |E_r Q E_t - I|` measured at construction.
    pub fn residual(&self) -> T {
        self.residual
    }
}

/// Shorthand for [`PeriodicTransform::new`].
pub fn build_transform<T: Real>(n: usize) -> Result<PeriodicTransform<T>> {
    PeriodicTransform::new(n)
}

/// `max |E_r (Q E_t) - I|`, exploiting the zeros of `E_t` so the check stays
/// cheap for the sparse power-of-two case.
fn identity_residual<T: Real>(e_r: &Matrix<T>, e_t: &Matrix<i64>, q_norm: &[T]) -> T {
    let n = e_t.rows();
    let mut worst = T::zero();
    let mut col = vec![T::zero(); n];
    for j in 0..n {
        col.iter_mut().for_each(|v| *v = T::zero());
        for r in 0..n {
            let v = e_t.get(r, j);
            if v == 0 {
                continue;
            }
            let w = T::lit(v as f64) * q_norm[j];
            for (i, acc) in col.iter_mut().enumerate() {
                *acc += e_r.get(i, r) * w;
            }
        }
        for (i, &v) in col.iter().enumerate() {
            let target = if i == j { T::one() } else { T::zero() };
            worst = worst.max((v - target).abs());
        }
    }
    worst
}

/// DFT bins occupied by the tiled Ramanujan sum `ĉ_q` in an `N`-point DFT:
/// `{ k_1 N/q : 1 <= k_1 <= q, gcd(k_1, q) = 1 }`, reduced mod `N`, ascending.
pub fn dft_support(q: u64, n_total: usize) -> Result<Vec<usize>> {
    if q == 0 || n_total == 0 || !(n_total as u64).is_multiple_of(q) {
        return Err(Error::invalid(
            "q",
            format!("{q} does not divide block length {n_total}"),
        ));
    }
    let step = n_total / q as usize;
    let mut bins: Vec<usize> = (1..=q)
        .filter(|&k| gcd_raw(k, q) == 1)
        .map(|k| (k as usize * step) % n_total)
        .collect();
    bins.sort_unstable();
    Ok(bins)
}
