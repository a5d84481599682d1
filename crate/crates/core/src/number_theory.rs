//! Exact integer arithmetic behind the subspace layout and the complexity
//! formulas. Block lengths in this crate stay far below `u64` limits, so
//! everything is plain trial division.

use serde::Serialize;

use crate::error::{Error, Result};

fn require_positive(name: &'static str, v: u64) -> Result<()> {
    if v == 0 {
        Err(Error::invalid(name, "must be a positive integer"))
    } else {
        Ok(())
    }
}

pub(crate) fn gcd_raw(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Greatest common divisor of two positive integers.
pub fn gcd(a: u64, b: u64) -> Result<u64> {
    require_positive("a", a)?;
    require_positive("b", b)?;
    Ok(gcd_raw(a, b))
}

/// Prime factorisation as `(prime, exponent)` pairs in ascending order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub(crate) fn totient_raw(q: u64) -> u64 {
    factorize(q)
        .into_iter()
        .fold(q, |acc, (p, _)| acc / p * (p - 1))
}

/// Euler's totient: how many `1 <= l <= q` are coprime to `q`.
pub fn totient(q: u64) -> Result<u64> {
    require_positive("q", q)?;
    Ok(totient_raw(q))
}

/// Möbius function.
pub fn mobius(n: u64) -> Result<i64> {
    require_positive("n", n)?;
    Ok(mobius_raw(n))
}

pub(crate) fn mobius_raw(n: u64) -> i64 {
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

pub(crate) fn divisors_raw(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d != n / d {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Number of positive divisors, `τ(n) = Π (m_p + 1)`.
pub fn divisor_count(n: u64) -> Result<u64> {
    require_positive("n", n)?;
    Ok(factorize(n)
        .iter()
        .map(|&(_, e)| u64::from(e) + 1)
        .product())
}

/// Divisors of `n` with their totients and the column offset at which each
/// Ramanujan subspace starts in the transform.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DivisorSet {
    n: u64,
    divisors: Vec<u64>,
    totients: Vec<u64>,
    offsets: Vec<u64>,
}

impl DivisorSet {
    pub fn new(n: u64) -> Result<Self> {
        require_positive("n", n)?;
        let divisors = divisors_raw(n);
        let totients: Vec<u64> = divisors.iter().map(|&q| totient_raw(q)).collect();
        let offsets = totients
            .iter()
            .scan(0, |acc, &t| {
                let o = *acc;
                *acc += t;
                Some(o)
            })
            .collect();
        Ok(Self {
            n,
            divisors,
            totients,
            offsets,
        })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn divisors(&self) -> &[u64] {
        &self.divisors
    }

    pub fn totients(&self) -> &[u64] {
        &self.totients
    }

    pub fn offsets(&self) -> &[u64] {
        &self.offsets
    }

    pub fn len(&self) -> usize {
        self.divisors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.divisors.is_empty()
    }

    /// `(q, offset, width)` for each subspace, in ascending divisor order.
    pub fn spans(&self) -> impl Iterator<Item = Span> + '_ {
        self.divisors
            .iter()
            .zip(&self.totients)
            .zip(&self.offsets)
            .map(|((&q, &w), &o)| Span {
                q,
                offset: o as usize,
                width: w as usize,
            })
    }
}

/// One Ramanujan subspace inside a length-`n` block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Span {
    pub q: u64,
    pub offset: usize,
    pub width: usize,
}

impl Span {
    pub fn range(&self) -> std::ops::Range<usize> {
        self.offset..self.offset + self.width
    }
}

/// Shorthand for [`DivisorSet::new`].
pub fn divisor_set(n: u64) -> Result<DivisorSet> {
    DivisorSet::new(n)
}

pub fn is_power_of_two(n: usize) -> bool {
    n.is_power_of_two()
}
