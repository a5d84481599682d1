//! Small dense matrix type and an LU factorisation with partial pivoting.
//!
//! Blocks handled here are at most a few hundred wide, so there is no
//! blocking or SIMD; row-major storage and straightforward loops.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg};

use num_complex::Complex;
use num_traits::{Num, One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Copy> Matrix<E> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> E) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    /// Panics if the rows are ragged.
    pub fn from_rows(rows: &[Vec<E>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self {
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().copied().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> E {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: E) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[E] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<E> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn data(&self) -> &[E] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r))
    }

    pub fn map<F: Copy>(&self, f: impl Fn(E) -> F) -> Matrix<F> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Self {
        Self::from_fn(rows.len(), cols.len(), |r, c| {
            self.get(rows.start + r, cols.start + c)
        })
    }
}

impl<E: Copy + Zero> Matrix<E> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![E::zero(); rows * cols],
        }
    }
}

impl<E: Copy + Zero + One> Matrix<E> {
    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |r, c| if r == c { E::one() } else { E::zero() })
    }
}

impl<E: Copy + Zero + Add<Output = E> + Mul<Output = E>> Matrix<E> {
    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "inner dimensions differ");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            let out_row = &mut out.data[r * rhs.cols..(r + 1) * rhs.cols];
            for k in 0..self.cols {
                let a = self.data[r * self.cols + k];
                let rhs_row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                for (o, &b) in out_row.iter_mut().zip(rhs_row) {
                    *o = *o + a * b;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[E]) -> Vec<E> {
        assert_eq!(
            self.cols,
            v.len(),
            "vector length differs from column count"
        );
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(E::zero(), |acc, (&a, &b)| acc + a * b)
            })
            .collect()
    }
}

impl<T: Real> Matrix<Complex<T>> {
    pub fn conj_transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r).conj())
    }

    pub fn from_real(m: &Matrix<T>) -> Self {
        m.map(|v| Complex::new(v, T::zero()))
    }
}

impl<E: LinearEntry> Matrix<E> {
    /// Largest entry modulus, zero for an empty matrix.
    pub fn max_modulus(&self) -> E::Real {
        self.data
            .iter()
            .map(|v| v.modulus())
            .fold(<E::Real as Zero>::zero(), num_traits::Float::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> E::Real {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| (a - b).modulus())
            .fold(<E::Real as Zero>::zero(), num_traits::Float::max)
    }
}

/// Entry type that LU factorisation can work with: real or complex floats.
pub trait LinearEntry: Copy + Num + Neg<Output = Self> + Debug + Send + Sync + 'static {
    type Real: Real;
    fn modulus(self) -> Self::Real;
    fn conjugate(self) -> Self;
}

impl<T: Real> LinearEntry for T {
    type Real = T;
    fn modulus(self) -> T {
        self.abs()
    }
    fn conjugate(self) -> T {
        self
    }
}

impl<T: Real> LinearEntry for Complex<T> {
    type Real = T;
    fn modulus(self) -> T {
        self.norm()
    }
    fn conjugate(self) -> Self {
        self.conj()
    }
}

/// `P A = L U` with unit lower triangular `L`, packed in one matrix.
#[derive(Debug, Clone)]
pub struct Lu<E> {
    lu: Matrix<E>,
    perm: Vec<usize>,
}

impl<E: LinearEntry> Lu<E> {
    /// Factorises a square matrix. A pivot at or below `n * eps * max|a|` is
    /// treated as an exact zero and reported as singular.
    pub fn factor(a: &Matrix<E>) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::invalid("matrix", "LU needs a square matrix"));
        }
        let n = a.rows;
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let eps = <E::Real as num_traits::Float>::epsilon();
        let threshold = a.max_modulus() * eps * E::Real::from_usize(n.max(1));

        for k in 0..n {
            let (p, best) =
                (k..n)
                    .map(|r| (r, lu.get(r, k).modulus()))
                    .fold(
                        (k, E::Real::zero()),
                        |acc, x| if x.1 > acc.1 { x } else { acc },
                    );
            if best <= threshold {
                return Err(Error::Singular {
                    what: "matrix".into(),
                    index: k,
                });
            }
            if p != k {
                for c in 0..n {
                    lu.data.swap(k * n + c, p * n + c);
                }
                perm.swap(k, p);
            }
            let pivot = lu.get(k, k);
            for r in k + 1..n {
                let f = lu.get(r, k) / pivot;
                lu.set(r, k, f);
                if f == E::zero() {
                    continue;
                }
                for c in k + 1..n {
                    let v = lu.get(r, c) - f * lu.get(k, c);
                    lu.set(r, c, v);
                }
            }
        }
        Ok(Self { lu, perm })
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    pub fn solve(&self, b: &[E]) -> Result<Vec<E>> {
        let n = self.dim();
        Error::check_len(n, b.len())?;
        let mut x: Vec<E> = self.perm.iter().map(|&p| b[p]).collect();
        for r in 0..n {
            let mut acc = x[r];
            for c in 0..r {
                acc = acc - self.lu.get(r, c) * x[c];
            }
            x[r] = acc;
        }
        for r in (0..n).rev() {
            let mut acc = x[r];
            for c in r + 1..n {
                acc = acc - self.lu.get(r, c) * x[c];
            }
            x[r] = acc / self.lu.get(r, r);
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Matrix<E> {
        let n = self.dim();
        let mut inv = Matrix::zeros(n, n);
        let mut e = vec![E::zero(); n];
        for c in 0..n {
            e.iter_mut().for_each(|v| *v = E::zero());
            e[c] = E::one();
            let col = self.solve(&e).expect("dimension checked");
            for (r, v) in col.into_iter().enumerate() {
                inv.set(r, c, v);
            }
        }
        inv
    }
}

pub fn inverse<E: LinearEntry>(a: &Matrix<E>) -> Result<Matrix<E>> {
    Ok(Lu::factor(a)?.inverse())
}
