use std::fmt;
use std::ops::{Index, Range};

use crate::error::{dim_err, FitError, Result};

/// Dense real matrix stored column-major.
///
/// Entries are always finite. Zero-sized dimensions are allowed so that empty
/// blocks (no frozen columns, no free columns) can be carried through the
/// block algorithms without special cases.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

/// Dense real vector with finite entries.
#[derive(Clone, PartialEq)]
pub struct Vector {
    data: Vec<f64>,
}

fn check_finite(data: &[f64], rows: usize) -> Result<()> {
    match data.iter().position(|x| !x.is_finite()) {
        Some(k) if rows > 0 => Err(FitError::NonFinite {
            row: k % rows,
            col: k / rows,
        }),
        Some(k) => Err(FitError::NonFinite { row: k, col: 0 }),
        None => Ok(()),
    }
}

impl Matrix {
    /// Builds a matrix from column-major data.
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return dim_err(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            ));
        }
        check_finite(&data, rows)?;
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from row-major data.
    pub fn from_row_major(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        if data.len() != rows * cols {
            return dim_err(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            ));
        }
        let mut col_major = vec![0.0; rows * cols];
        for i in 0..rows {
            for j in 0..cols {
                col_major[j * rows + i] = data[i * cols + j];
            }
        }
        Self::new(rows, cols, col_major)
    }

    /// Builds a matrix from a slice of equally long rows.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, |r| r.as_ref().len());
        let mut flat = Vec::with_capacity(m * n);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != n {
                return dim_err(format!("row {i} has {} entries, expected {n}", r.len()));
            }
            flat.extend_from_slice(r);
        }
        Self::from_row_major(m, n, &flat)
    }

    pub fn from_columns(rows: usize, columns: &[&[f64]]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows * columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != rows {
                return dim_err(format!("column {j} has {} entries, expected {rows}", c.len()));
            }
            data.extend_from_slice(c);
        }
        Self::new(rows, columns.len(), data)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn diag(values: &[f64]) -> Result<Self> {
        check_finite(values, values.len())?;
        let n = values.len();
        let mut m = Self::zeros(n, n);
        for (i, &v) in values.iter().enumerate() {
            m.data[i * n + i] = v;
        }
        Ok(m)
    }

    /// Single-column matrix holding `v`.
    pub fn from_vector(v: &Vector) -> Self {
        Self {
            rows: v.len(),
            cols: 1,
            data: v.data.clone(),
        }
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
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[j * self.rows + i]
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[j * self.rows + i] = v;
    }

    /// Column-major backing storage.
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub(crate) fn column_mut(&mut self, j: usize) -> &mut [f64] {
        &mut self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub(crate) fn columns_mut(&mut self, p: usize, q: usize) -> (&mut [f64], &mut [f64]) {
        debug_assert!(p < q);
        let m = self.rows;
        let (lo, hi) = self.data.split_at_mut(q * m);
        (&mut lo[p * m..(p + 1) * m], &mut hi[..m])
    }

    pub fn column_vector(&self, j: usize) -> Vector {
        Vector {
            data: self.column(j).to_vec(),
        }
    }

    pub fn row(&self, i: usize) -> Vec<f64> {
        (0..self.cols).map(|j| self.get(i, j)).collect()
    }

    /// Rows as row-major nested vectors.
    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for j in 0..self.cols {
            for i in 0..self.rows {
                t.data[i * self.cols + j] = self.data[j * self.rows + i];
            }
        }
        t
    }

    pub fn frobenius_norm(&self) -> f64 {
        frobenius_norm(self)
    }

    /// Copy of the block `rows × cols`.
    pub fn block(&self, rows: Range<usize>, cols: Range<usize>) -> Matrix {
        assert!(rows.end <= self.rows && cols.end <= self.cols, "block out of range");
        let (r0, nr) = (rows.start, rows.len());
        let mut out = Matrix::zeros(nr, cols.len());
        for (jj, j) in cols.enumerate() {
            out.column_mut(jj)
                .copy_from_slice(&self.column(j)[r0..r0 + nr]);
        }
        out
    }

    /// Horizontal concatenation `(self | other)`.
    pub fn hstack(&self, other: &Matrix) -> Result<Matrix> {
        if self.rows != other.rows {
            return dim_err(format!(
                "cannot place a {}-row matrix next to a {}-row matrix",
                other.rows, self.rows
            ));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols + other.cols,
            data,
        })
    }

    /// Vertical concatenation of `self` above `other`.
    pub fn vstack(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.cols {
            return dim_err(format!(
                "cannot stack a {}-column matrix under a {}-column matrix",
                other.cols, self.cols
            ));
        }
        let rows = self.rows + other.rows;
        let mut out = Matrix::zeros(rows, self.cols);
        for j in 0..self.cols {
            let col = out.column_mut(j);
            col[..self.rows].copy_from_slice(self.column(j));
            col[self.rows..].copy_from_slice(other.column(j));
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        multiply(self, other)
    }

    pub fn mul_vec(&self, v: &Vector) -> Result<Vector> {
        if v.len() != self.cols {
            return dim_err(format!(
                "cannot apply a {}x{} matrix to a vector of length {}",
                self.rows,
                self.cols,
                v.len()
            ));
        }
        let mut out = vec![0.0; self.rows];
        for (j, &vj) in v.data.iter().enumerate() {
            if vj == 0.0 {
                continue;
            }
            for (o, &a) in out.iter_mut().zip(self.column(j)) {
                *o += a * vj;
            }
        }
        Ok(Vector { data: out })
    }

    /// `selfᵀ · v` without forming the transpose.
    pub fn tr_mul_vec(&self, v: &Vector) -> Result<Vector> {
        if v.len() != self.rows {
            return dim_err(format!(
                "cannot apply the transpose of a {}x{} matrix to a vector of length {}",
                self.rows,
                self.cols,
                v.len()
            ));
        }
        Ok(Vector {
            data: (0..self.cols).map(|j| dot(self.column(j), &v.data)).collect(),
        })
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn scale(&self, s: f64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    fn zip_with(&self, other: &Matrix, f: impl Fn(f64, f64) -> f64) -> Result<Matrix> {
        if self.shape() != other.shape() {
            return dim_err(format!(
                "shape {:?} does not match shape {:?}",
                self.shape(),
                other.shape()
            ));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of range");
        &self.data[j * self.rows + i]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

impl Vector {
    pub fn new(data: Vec<f64>) -> Result<Self> {
        check_finite(&data, data.len())?;
        Ok(Self { data })
    }

    pub fn zeros(len: usize) -> Self {
        Self {
            data: vec![0.0; len],
        }
    }

    pub(crate) fn from_vec_unchecked(data: Vec<f64>) -> Self {
        debug_assert!(data.iter().all(|x| x.is_finite()));
        Self { data }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.data.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.data.iter()
    }

    pub fn dot(&self, other: &Vector) -> f64 {
        dot(&self.data, &other.data)
    }

    pub fn norm(&self) -> f64 {
        norm2(&self.data)
    }

    pub fn sub(&self, other: &Vector) -> Result<Vector> {
        if self.len() != other.len() {
            return dim_err(format!(
                "vector lengths {} and {} differ",
                self.len(),
                other.len()
            ));
        }
        Ok(Vector {
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn scale(&self, s: f64) -> Vector {
        Vector {
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }
}

impl Index<usize> for Vector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.data[i]
    }
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Vector {:?}", self.data)
    }
}

impl TryFrom<Vec<f64>> for Vector {
    type Error = FitError;

    fn try_from(data: Vec<f64>) -> Result<Self> {
        Vector::new(data)
    }
}

impl From<Vector> for Vec<f64> {
    fn from(v: Vector) -> Self {
        v.data
    }
}

/// Standard matrix product `a · b`.
pub fn multiply(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    if a.cols != b.rows {
        return dim_err(format!(
            "cannot multiply {}x{} by {}x{}",
            a.rows, a.cols, b.rows, b.cols
        ));
    }
    let mut out = Matrix::zeros(a.rows, b.cols);
    for j in 0..b.cols {
        let bj = b.column(j);
        let oj = out.column_mut(j);
        for (k, &bkj) in bj.iter().enumerate() {
            if bkj == 0.0 {
                continue;
            }
            for (o, &aik) in oj.iter_mut().zip(a.column(k)) {
                *o += aik * bkj;
            }
        }
    }
    Ok(out)
}

/// Square root of the sum of squared entries, computed with scaling so that
/// very large or very small entries neither overflow nor underflow.
pub fn frobenius_norm(a: &Matrix) -> f64 {
    norm2(&a.data)
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm2(x: &[f64]) -> f64 {
    let scale = x.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    let ssq: f64 = x.iter().map(|v| (v / scale) * (v / scale)).sum();
    scale * ssq.sqrt()
}
