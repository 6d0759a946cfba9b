//! Dense complex vectors and matrices sized for antenna-array work.
//!
//! Only what the capacity formulas need: bilinear row-by-column products,
//! Gram matrices and a Cholesky factorization for Hermitian positive-definite
//! systems. Matrices are row-major.

use std::ops::{Index, IndexMut};

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector<T> {
    data: Vec<Complex<T>>,
}

impl<T: Scalar> ComplexVector<T> {
    pub fn new(data: Vec<Complex<T>>) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::InvalidDimension("vector length must be positive".into()));
        }
        Ok(Self { data })
    }

    /// Builds a vector from `(re, im)` pairs.
    pub fn from_parts(parts: &[(T, T)]) -> Result<Self> {
        Self::new(parts.iter().map(|&(re, im)| Complex::new(re, im)).collect())
    }

    /// `k`-th standard basis vector of length `n`.
    pub fn basis(n: usize, k: usize) -> Result<Self> {
        if k >= n {
            return Err(Error::InvalidDimension(format!("basis index {k} out of range for length {n}")));
        }
        let mut data = vec![Complex::zero(); n];
        data[k] = Complex::one();
        Self::new(data)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.data.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn iter(&self) -> impl Iterator<Item = &Complex<T>> {
        self.data.iter()
    }

    pub fn norm_sqr(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    pub fn conj(&self) -> Self {
        Self { data: self.data.iter().map(|z| z.conj()).collect() }
    }

    pub fn scale(&self, s: T) -> Self {
        Self { data: self.data.iter().map(|z| z * s).collect() }
    }

    /// Bilinear product `Σ a_k b_k` (row vector times column vector, no conjugation).
    pub fn dot(&self, other: &Self) -> Result<Complex<T>> {
        check_len(self.len(), other.len())?;
        Ok(self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum())
    }

    /// Row vector times matrix, `self · m`.
    pub fn mul_mat(&self, m: &ComplexMatrix<T>) -> Result<Self> {
        check_len(self.len(), m.rows())?;
        let mut out = vec![Complex::zero(); m.cols()];
        for (r, a) in self.data.iter().enumerate() {
            for (c, o) in out.iter_mut().enumerate() {
                *o += a * m[(r, c)];
            }
        }
        Self::new(out)
    }
}

impl<T> Index<usize> for ComplexVector<T> {
    type Output = Complex<T>;
    fn index(&self, i: usize) -> &Complex<T> {
        &self.data[i]
    }
}

fn check_len(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::InvalidDimension(format!("length mismatch: {a} vs {b}")));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: Scalar> ComplexMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidDimension(format!("matrix dimensions must be positive, got {rows}x{cols}")));
        }
        Ok(Self { rows, cols, data: vec![Complex::zero(); rows * cols] })
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Self::zeros(n, n)?;
        for i in 0..n {
            m[(i, i)] = Complex::one();
        }
        Ok(m)
    }

    /// Stacks equal-length row vectors.
    pub fn from_rows(rows: &[ComplexVector<T>]) -> Result<Self> {
        let first = rows
            .first()
            .ok_or_else(|| Error::InvalidDimension("cannot stack zero rows".into()))?;
        let cols = first.len();
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            check_len(r.len(), cols)?;
            data.extend_from_slice(r.as_slice());
        }
        Ok(Self { rows: rows.len(), cols, data })
    }

    /// Places vectors side by side as columns.
    pub fn from_columns(cols: &[ComplexVector<T>]) -> Result<Self> {
        let first = cols
            .first()
            .ok_or_else(|| Error::InvalidDimension("cannot stack zero columns".into()))?;
        let mut m = Self::zeros(first.len(), cols.len())?;
        for (c, v) in cols.iter().enumerate() {
            check_len(v.len(), m.rows)?;
            for r in 0..m.rows {
                m[(r, c)] = v[r];
            }
        }
        Ok(m)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> ComplexVector<T> {
        ComplexVector { data: self.data[r * self.cols..(r + 1) * self.cols].to_vec() }
    }

    pub fn column(&self, c: usize) -> ComplexVector<T> {
        ComplexVector { data: (0..self.rows).map(|r| self[(r, c)]).collect() }
    }

    pub fn conj_transpose(&self) -> Self {
        let mut out = Self { rows: self.cols, cols: self.rows, data: vec![Complex::zero(); self.data.len()] };
        for r in 0..self.rows {
            for c in 0..self.cols {
                out[(c, r)] = self[(r, c)].conj();
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        check_len(self.cols, other.rows)?;
        let mut out = Self::zeros(self.rows, other.cols)?;
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                for c in 0..other.cols {
                    out[(r, c)] += a * other[(k, c)];
                }
            }
        }
        Ok(out)
    }

    /// Matrix times column vector.
    pub fn mul_vec(&self, v: &ComplexVector<T>) -> Result<ComplexVector<T>> {
        check_len(self.cols, v.len())?;
        let data = (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self[(r, c)] * v[c]).sum())
            .collect();
        ComplexVector::new(data)
    }

    /// `A Aᴴ`.
    pub fn gram(&self) -> Self {
        let mut out = Self { rows: self.rows, cols: self.rows, data: vec![Complex::zero(); self.rows * self.rows] };
        for i in 0..self.rows {
            for j in 0..=i {
                let s: Complex<T> = (0..self.cols).map(|k| self[(i, k)] * self[(j, k)].conj()).sum();
                out[(i, j)] = s;
                out[(j, i)] = s.conj();
            }
        }
        out
    }

    pub fn scale(&self, s: T) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z * s).collect() }
    }

    /// Adds `s` to every diagonal entry.
    pub fn add_diagonal(&self, s: T) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::InvalidDimension("diagonal shift needs a square matrix".into()));
        }
        let mut out = self.clone();
        for i in 0..self.rows {
            out[(i, i)] += Complex::new(s, T::zero());
        }
        Ok(out)
    }

    /// Adds `s · v vᴴ`.
    pub fn add_outer(&self, v: &ComplexVector<T>, s: T) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::InvalidDimension("rank-one update needs a square matrix".into()));
        }
        check_len(self.rows, v.len())?;
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] += v[i] * v[j].conj() * s;
            }
        }
        Ok(out)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<T> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::InvalidDimension("shape mismatch".into()));
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(T::zero(), T::max))
    }
}

impl<T> Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = Complex<T>;
    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &Complex<T> {
        &self.data[r * self.cols + c]
    }
}

impl<T> IndexMut<(usize, usize)> for ComplexMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[r * self.cols + c]
    }
}

/// Lower-triangular factor `L` of a Hermitian positive-definite `A = L Lᴴ`.
#[derive(Debug, Clone)]
pub struct Cholesky<T> {
    lower: ComplexMatrix<T>,
}

impl<T: Scalar> Cholesky<T> {
    /// Only the lower triangle of `a` is read.
    pub fn factor(a: &ComplexMatrix<T>) -> Result<Self> {
        let n = a.rows();
        if n != a.cols() {
            return Err(Error::InvalidDimension("Cholesky needs a square matrix".into()));
        }
        let mut l = ComplexMatrix::zeros(n, n)?;
        for j in 0..n {
            let mut d = a[(j, j)].re;
            for k in 0..j {
                d -= l[(j, k)].norm_sqr();
            }
            if !(d > T::zero()) || !d.is_finite() {
                return Err(Error::NumericalDegeneracy(format!("matrix not positive definite at pivot {j}")));
            }
            let ljj = d.sqrt();
            l[(j, j)] = Complex::new(ljj, T::zero());
            for i in j + 1..n {
                let mut s = a[(i, j)];
                for k in 0..j {
                    s -= l[(i, k)] * l[(j, k)].conj();
                }
                l[(i, j)] = s / ljj;
            }
        }
        Ok(Self { lower: l })
    }

    fn forward(&self, b: &ComplexVector<T>) -> Result<Vec<Complex<T>>> {
        let n = self.lower.rows();
        check_len(n, b.len())?;
        let mut y = vec![Complex::zero(); n];
        for i in 0..n {
            let mut s = b[i];
            for (k, &yk) in y.iter().enumerate().take(i) {
                s -= self.lower[(i, k)] * yk;
            }
            y[i] = s / self.lower[(i, i)].re;
        }
        Ok(y)
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &ComplexVector<T>) -> Result<ComplexVector<T>> {
        let n = self.lower.rows();
        let y = self.forward(b)?;
        let mut x = vec![Complex::zero(); n];
        for i in (0..n).rev() {
            let mut s = y[i];
            for (k, &xk) in x.iter().enumerate().skip(i + 1) {
                s -= self.lower[(k, i)].conj() * xk;
            }
            x[i] = s / self.lower[(i, i)].re;
        }
        ComplexVector::new(x)
    }

    /// `bᴴ A⁻¹ b`, evaluated as `‖L⁻¹ b‖²` so it is real and nonnegative.
    pub fn quadratic_form(&self, b: &ComplexVector<T>) -> Result<T> {
        Ok(self.forward(b)?.iter().map(|z| z.norm_sqr()).sum())
    }

    /// Natural log of `det A`.
    pub fn ln_det(&self) -> T {
        let two = T::lit(2.0);
        (0..self.lower.rows()).map(|i| two * self.lower[(i, i)].re.ln()).sum()
    }
}
