//! Dense exact matrices: big-integer matrices with cell labels, diagonal size
//! vectors and rational matrices with exact determinant and definiteness
//! tests.

use core::fmt;

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::subset::Subset;

/// Dense row-major matrix of arbitrary-precision integers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Rows must all have the same length; an empty list is a 0×0 matrix.
    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows"));
        }
        let n = rows.len();
        Ok(Self { rows: n, cols, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.as_ref().iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch("matrix product"));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch("matrix sum"));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn scale(&self, factor: &BigInt) -> IntMatrix {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * factor).collect() }
    }

    /// Divides every entry by `divisor`, failing on the first remainder.
    pub fn exact_div(&self, divisor: &BigInt, context: &'static str) -> Result<IntMatrix> {
        let mut data = Vec::with_capacity(self.data.len());
        for (idx, a) in self.data.iter().enumerate() {
            let (q, r) = a.div_rem(divisor);
            if !r.is_zero() || divisor.is_zero() {
                return Err(Error::InexactDivision { context, row: idx / self.cols, col: idx % self.cols });
            }
            data.push(q);
        }
        Ok(Self { rows: self.rows, cols: self.cols, data })
    }

    pub fn row_sums(&self) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.row(i).iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<BigInt> {
        (0..self.cols).map(|j| (0..self.rows).map(|i| self.get(i, j)).sum()).collect()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.data.iter().all(|a| !a.is_negative())
    }

    /// Entries as `i64`, if they all fit.
    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows).map(|i| self.row(i).iter().map(ToPrimitive::to_i64).collect()).collect()
    }

    pub fn to_rational(&self) -> RationalMatrix {
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| BigRational::from_integer(a.clone())).collect(),
        }
    }

    /// Keeps the listed columns, in the listed order.
    pub fn select_columns(&self, columns: &[usize]) -> IntMatrix {
        Self::from_fn(self.rows, columns.len(), |i, j| self.get(i, columns[j]).clone())
    }

    pub fn permute(&self, row_order: &[usize], col_order: &[usize]) -> IntMatrix {
        Self::from_fn(row_order.len(), col_order.len(), |i, j| self.get(row_order[i], col_order[j]).clone())
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.data.iter().map(|a| a.to_str_radix(10).len()).max().unwrap_or(1);
        for i in 0..self.rows {
            write!(f, "[")?;
            for (j, a) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{a:>width$}")?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// Identifier of a matrix row or column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    /// A partition cell, named by its canonical representative.
    Cell(Subset),
    /// A positional label, used when no concrete cell is attached (e.g.
    /// block classes of a decomposition matrix before indexing).
    Index(usize),
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Cell(s) => write!(f, "{s}"),
            Label::Index(i) => write!(f, "#{i}"),
        }
    }
}

pub fn index_labels(n: usize) -> Vec<Label> {
    (0..n).map(Label::Index).collect()
}

/// An integer matrix whose rows and columns are labeled by partition cells.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LabeledIntMatrix {
    row_labels: Vec<Label>,
    col_labels: Vec<Label>,
    matrix: IntMatrix,
}

impl LabeledIntMatrix {
    pub fn new(row_labels: Vec<Label>, col_labels: Vec<Label>, matrix: IntMatrix) -> Result<Self> {
        if row_labels.len() != matrix.rows() || col_labels.len() != matrix.cols() {
            return Err(Error::DimensionMismatch("labels vs. entries"));
        }
        Ok(Self { row_labels, col_labels, matrix })
    }

    /// Positional labels on both axes.
    pub fn unlabeled(matrix: IntMatrix) -> Self {
        Self { row_labels: index_labels(matrix.rows()), col_labels: index_labels(matrix.cols()), matrix }
    }

    pub fn row_labels(&self) -> &[Label] {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &[Label] {
        &self.col_labels
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> IntMatrix {
        self.matrix
    }

    pub fn rows(&self) -> usize {
        self.matrix.rows()
    }

    pub fn cols(&self) -> usize {
        self.matrix.cols()
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        self.matrix.get(i, j)
    }

    pub fn transpose(&self) -> Self {
        Self {
            row_labels: self.col_labels.clone(),
            col_labels: self.row_labels.clone(),
            matrix: self.matrix.transpose(),
        }
    }

    /// Product; the result takes row labels from `self` and column labels
    /// from `other`.
    pub fn mul(&self, other: &LabeledIntMatrix) -> Result<Self> {
        Ok(Self {
            row_labels: self.row_labels.clone(),
            col_labels: other.col_labels.clone(),
            matrix: self.matrix.mul(&other.matrix)?,
        })
    }

    /// Same labels, new entries.
    pub fn with_matrix(&self, matrix: IntMatrix) -> Result<Self> {
        Self::new(self.row_labels.clone(), self.col_labels.clone(), matrix)
    }

    pub fn with_col_labels(mut self, col_labels: Vec<Label>) -> Result<Self> {
        if col_labels.len() != self.cols() {
            return Err(Error::DimensionMismatch("column labels"));
        }
        self.col_labels = col_labels;
        Ok(self)
    }
}

impl fmt::Display for LabeledIntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.matrix, f)
    }
}

/// Positive cell sizes of one partition level (the diagonal of `D⁽ˣ⁾` or `δ`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DiagonalSizes(Vec<u64>);

impl DiagonalSizes {
    pub fn new(sizes: Vec<u64>) -> Result<Self> {
        if sizes.contains(&0) {
            return Err(Error::Invalid("cell sizes must be positive".into()));
        }
        Ok(Self(sizes))
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> u64 {
        self.0[i]
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }
}

/// Dense row-major matrix of exact rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl RationalMatrix {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigRational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_i64_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        IntMatrix::from_i64_rows(rows).map(|m| m.to_rational())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.cols + j]
    }

    /// `Some` when every entry is an integer.
    pub fn to_integer(&self) -> Option<IntMatrix> {
        if self.data.iter().all(BigRational::is_integer) {
            Some(IntMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).to_integer()))
        } else {
            None
        }
    }

    /// Determinant by fraction-exact Gaussian elimination with row pivoting.
    pub fn determinant(&self) -> Result<BigRational> {
        if self.rows != self.cols {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let mut a = self.data.clone();
        let mut det = BigRational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a[r * n + c].is_zero()) else {
                return Ok(BigRational::zero());
            };
            if p != c {
                for j in 0..n {
                    a.swap(p * n + j, c * n + j);
                }
                det = -det;
            }
            let pivot = a[c * n + c].clone();
            det *= &pivot;
            for r in c + 1..n {
                let factor = &a[r * n + c] / &pivot;
                if factor.is_zero() {
                    continue;
                }
                for j in c..n {
                    let delta = &factor * &a[c * n + j];
                    a[r * n + j] -= delta;
                }
            }
        }
        Ok(det)
    }
}

/// A symmetric rational matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalSymMatrix(RationalMatrix);

impl RationalSymMatrix {
    pub fn new(m: RationalMatrix) -> Result<Self> {
        if m.rows != m.cols {
            return Err(Error::NotSquare { rows: m.rows, cols: m.cols });
        }
        for i in 0..m.rows {
            for j in 0..i {
                if m.get(i, j) != m.get(j, i) {
                    return Err(Error::NotSymmetric);
                }
            }
        }
        Ok(Self(m))
    }

    pub fn from_i64_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        Self::new(RationalMatrix::from_i64_rows(rows)?)
    }

    pub fn matrix(&self) -> &RationalMatrix {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.rows
    }

    /// Leading principal minors `det(A[..1,..1])`, …, `det(A)`.
    ///
    /// Computed from the pivots of elimination without row exchanges: the
    /// `k`-th minor is the product of the first `k` pivots. Once a pivot
    /// vanishes the remaining minors are computed directly.
    pub fn leading_principal_minors(&self) -> Vec<BigRational> {
        let n = self.dim();
        let mut a = self.0.data.clone();
        let mut minors = Vec::with_capacity(n);
        let mut acc = BigRational::one();
        for c in 0..n {
            let pivot = a[c * n + c].clone();
            if pivot.is_zero() {
                for k in c + 1..=n {
                    let sub = RationalMatrix::from_fn(k, k, |i, j| self.0.get(i, j).clone());
                    minors.push(sub.determinant().expect("square"));
                }
                return minors;
            }
            acc *= &pivot;
            minors.push(acc.clone());
            for r in c + 1..n {
                let factor = &a[r * n + c] / &pivot;
                if factor.is_zero() {
                    continue;
                }
                for j in c..n {
                    let delta = &factor * &a[c * n + j];
                    a[r * n + j] -= delta;
                }
            }
        }
        minors
    }
}

/// Sylvester's criterion: all leading principal minors are positive.
pub fn is_positive_definite(m: &RationalSymMatrix) -> bool {
    let n = m.dim();
    let mut a = m.0.data.clone();
    for c in 0..n {
        let pivot = a[c * n + c].clone();
        // The k-th pivot is the ratio of consecutive leading minors.
        if !pivot.is_positive() {
            return false;
        }
        for r in c + 1..n {
            let factor = &a[r * n + c] / &pivot;
            if factor.is_zero() {
                continue;
            }
            for j in c..n {
                let delta = &factor * &a[c * n + j];
                a[r * n + j] -= delta;
            }
        }
    }
    true
}
