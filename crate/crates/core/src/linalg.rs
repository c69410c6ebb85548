//! Small dense square matrices and the matrix exponential.

use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Square matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Real> Matrix<T> {
    pub fn zeros(n: usize) -> Self {
        Matrix { n, data: vec![T::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    /// Builds from row slices; every row must have `rows.len()` entries.
    pub fn from_rows(rows: &[&[T]]) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        Matrix { n, data: rows.iter().flat_map(|r| r.iter().copied()).collect() }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn scale(&self, s: T) -> Self {
        Matrix { n: self.n, data: self.data.iter().map(|v| *v * s).collect() }
    }

    /// Maximum absolute column sum.
    pub fn norm1(&self) -> T {
        (0..self.n).map(|j| (0..self.n).fold(T::zero(), |acc, i| acc + self[(i, j)].abs())).fold(T::zero(), |a, b| {
            if b.is_nan() {
                b
            } else {
                a.max(b)
            }
        })
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.data.iter().zip(&other.data).fold(T::zero(), |acc, (a, b)| acc.max((*a - *b).abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.n);
        (0..self.n).map(|i| (0..self.n).fold(T::zero(), |acc, j| acc + self[(i, j)] * v[j])).collect()
    }

    pub fn nonzero_count(&self) -> usize {
        self.data.iter().filter(|v| **v != T::zero()).count()
    }

    /// Solves `self · X = rhs` by LU with partial pivoting.
    pub fn solve(&self, rhs: &Self) -> Result<Self> {
        let n = self.n;
        let mut a = self.clone();
        let mut x = rhs.clone();
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&i, &j| a[(i, col)].abs().partial_cmp(&a[(j, col)].abs()).unwrap_or(std::cmp::Ordering::Equal))
                .unwrap_or(col);
            if a[(pivot, col)] == T::zero() || !a[(pivot, col)].is_finite() {
                return Err(Error::Overflow);
            }
            if pivot != col {
                for k in 0..n {
                    a.data.swap(pivot * n + k, col * n + k);
                    x.data.swap(pivot * n + k, col * n + k);
                }
            }
            let p = a[(col, col)];
            for row in col + 1..n {
                let f = a[(row, col)] / p;
                if f == T::zero() {
                    continue;
                }
                for k in col..n {
                    let v = a[(col, k)];
                    a[(row, k)] = a[(row, k)] - f * v;
                }
                for k in 0..n {
                    let v = x[(col, k)];
                    x[(row, k)] = x[(row, k)] - f * v;
                }
            }
        }
        for col in (0..n).rev() {
            let p = a[(col, col)];
            for k in 0..n {
                let mut v = x[(col, k)];
                for j in col + 1..n {
                    v = v - a[(col, j)] * x[(j, k)];
                }
                x[(col, k)] = v / p;
            }
        }
        Ok(x)
    }
}

impl<T> std::ops::Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.n + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.n + j]
    }
}

impl<T: Real> Add for &Matrix<T> {
    type Output = Matrix<T>;
    fn add(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.n, rhs.n);
        Matrix { n: self.n, data: self.data.iter().zip(&rhs.data).map(|(a, b)| *a + *b).collect() }
    }
}

impl<T: Real> Sub for &Matrix<T> {
    type Output = Matrix<T>;
    fn sub(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.n, rhs.n);
        Matrix { n: self.n, data: self.data.iter().zip(&rhs.data).map(|(a, b)| *a - *b).collect() }
    }
}

impl<T: Real> Mul for &Matrix<T> {
    type Output = Matrix<T>;
    fn mul(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.n, rhs.n);
        let n = self.n;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == T::zero() {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] = out.data[i * n + j] + a * rhs.data[k * n + j];
                }
            }
        }
        out
    }
}

/// Numerator coefficients of the [13/13] Padé approximant to `exp`.
const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

/// Largest 1-norm for which the degree-13 approximant is accurate to double precision.
const THETA13: f64 = 5.371920351148152;

/// `exp(A t)` by scaling and squaring with a degree-13 Padé kernel.
pub fn matrix_exponential<T: Real>(a: &Matrix<T>, t: T) -> Result<Matrix<T>> {
    let n = a.dim();
    let b = a.scale(t);
    if !b.is_finite() {
        return Err(Error::Overflow);
    }
    let norm = b.norm1();
    let mut squarings = 0i32;
    if norm > T::lit(THETA13) {
        let s = (norm / T::lit(THETA13)).log2().ceil();
        squarings = s.to_i32().ok_or(Error::Overflow)?;
    }
    if squarings > 1000 {
        return Err(Error::Overflow);
    }
    let b = b.scale(T::two().powi(-squarings));
    let c = |k: usize| T::lit(PADE13[k]);
    let id = Matrix::identity(n);
    let b2 = &b * &b;
    let b4 = &b2 * &b2;
    let b6 = &b4 * &b2;

    let u_inner = &(&b6.scale(c(13)) + &b4.scale(c(11))) + &b2.scale(c(9));
    let u_tail = &(&(&b6.scale(c(7)) + &b4.scale(c(5))) + &b2.scale(c(3))) + &id.scale(c(1));
    let u = &b * &(&(&b6 * &u_inner) + &u_tail);

    let v_inner = &(&b6.scale(c(12)) + &b4.scale(c(10))) + &b2.scale(c(8));
    let v_tail = &(&(&b6.scale(c(6)) + &b4.scale(c(4))) + &b2.scale(c(2))) + &id.scale(c(0));
    let v = &(&b6 * &v_inner) + &v_tail;

    let mut r = (&v - &u).solve(&(&v + &u))?;
    for _ in 0..squarings {
        r = &r * &r;
    }
    if !r.is_finite() {
        return Err(Error::Overflow);
    }
    Ok(r)
}
