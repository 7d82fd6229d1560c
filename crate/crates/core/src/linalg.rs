//! Small dense complex matrices, row-major.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use crate::scalar::{re, Real, C};

/// Dense complex matrix stored row-major.
///
/// Used for dense oracles, block Hamiltonians and density matrices. Sizes here
/// stay in the thousands at most, so no blocking or BLAS backend.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<C<T>>,
}

/// A [`ComplexMatrix`] expected to equal its conjugate transpose.
pub type HermitianMatrix<T> = ComplexMatrix<T>;

impl<T: Real> ComplexMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C::new(T::zero(), T::zero()); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = re(T::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from row-major data.
    ///
    /// # Panics
    /// If `data.len() != rows * cols`.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<C<T>>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length");
        Self { rows, cols, data }
    }

    pub fn from_real(rows: usize, cols: usize, data: &[T]) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length");
        Self {
            rows,
            cols,
            data: data.iter().map(|&x| re(x)).collect(),
        }
    }

    pub fn diagonal(values: &[T]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = re(v);
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C<T>] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [C<T>] {
        &mut self.data
    }

    pub fn row(&self, i: usize) -> &[C<T>] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<C<T>> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn set_column(&mut self, j: usize, values: &[C<T>]) {
        assert_eq!(values.len(), self.rows);
        for (i, v) in values.iter().enumerate() {
            self[(i, j)] = *v;
        }
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn scaled(&self, alpha: C<T>) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| x * alpha).collect(),
        }
    }

    /// Kronecker product `self ⊗ other`; the left factor is the slow index.
    pub fn kron(&self, other: &Self) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        Self::from_fn(rows, cols, |i, j| {
            self[(i / other.rows, j / other.cols)] * other[(i % other.rows, j % other.cols)]
        })
    }

    pub fn mul_vec(&self, x: &[C<T>]) -> Vec<C<T>> {
        assert_eq!(x.len(), self.cols, "matrix-vector shape");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .fold(re(T::zero()), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn trace(&self) -> C<T> {
        (0..self.rows.min(self.cols)).fold(re(T::zero()), |acc, i| acc + self[(i, i)])
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|x| x.norm_sqr()).sum::<T>().sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, x| m.max(x.norm()))
    }

    /// Largest `|m_ij − conj(m_ji)|`; zero for an exactly Hermitian matrix.
    pub fn hermitian_defect(&self) -> T {
        if !self.is_square() {
            return T::infinity();
        }
        let mut d = T::zero();
        for i in 0..self.rows {
            for j in i..self.cols {
                d = d.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        d
    }

    /// True when every imaginary part is exactly zero.
    pub fn is_real(&self) -> bool {
        self.data.iter().all(|x| x.im == T::zero())
    }

    pub fn real_parts(&self) -> Vec<T> {
        self.data.iter().map(|x| x.re).collect()
    }

    pub fn map(&self, f: impl Fn(C<T>) -> C<T>) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| f(x)).collect(),
        }
    }
}

impl<T> Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = C<T>;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C<T> {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for ComplexMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C<T> {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Real> Mul for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn mul(self, rhs: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        assert_eq!(self.cols, rhs.rows, "matrix product shape");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let orow = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                let brow = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                for (o, b) in orow.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        out
    }
}

impl<T: Real> Add for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn add(self, rhs: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "matrix sum shape"
        );
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl<T: Real> Sub for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn sub(self, rhs: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "matrix difference shape"
        );
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

/// A square operator applied matrix-free to complex vectors.
pub trait LinearOperator<T: Real> {
    fn dim(&self) -> usize;

    /// Writes `A·input` into `output`; both slices have length [`dim`](Self::dim).
    fn apply(&self, input: &[C<T>], output: &mut [C<T>]);
}

impl<T: Real> LinearOperator<T> for ComplexMatrix<T> {
    fn dim(&self) -> usize {
        assert!(self.is_square(), "operator matrix must be square");
        self.rows
    }

    fn apply(&self, input: &[C<T>], output: &mut [C<T>]) {
        for (i, o) in output.iter_mut().enumerate() {
            *o = self
                .row(i)
                .iter()
                .zip(input)
                .fold(re(T::zero()), |acc, (a, b)| acc + a * b);
        }
    }
}

impl<T: Real, O: LinearOperator<T> + ?Sized> LinearOperator<T> for &O {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn apply(&self, input: &[C<T>], output: &mut [C<T>]) {
        (**self).apply(input, output)
    }
}

/// Pauli matrices in the basis (|0⟩, |1⟩) = (spin down, spin up).
///
/// With bit value 1 meaning spin up, σ_z = diag(−1, +1) in index order.
pub mod pauli {
    use super::ComplexMatrix;
    use crate::scalar::Real;

    pub fn sigma_x<T: Real>() -> ComplexMatrix<T> {
        ComplexMatrix::from_real(2, 2, &[T::zero(), T::one(), T::one(), T::zero()])
    }

    /// σ_z on the spin encoding (index 1 = up = +1).
    pub fn sigma_z<T: Real>() -> ComplexMatrix<T> {
        ComplexMatrix::diagonal(&[-T::one(), T::one()])
    }
}
