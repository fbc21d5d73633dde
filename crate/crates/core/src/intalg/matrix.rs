//! Sparse integer matrices over arbitrary-precision integers.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A sparse integer vector, keyed by coordinate. Zero entries are never stored.
pub type SparseVec = BTreeMap<usize, BigInt>;

/// Adds `coeff * value` into `vec[index]`, dropping the entry if it cancels.
pub fn sparse_axpy(vec: &mut SparseVec, index: usize, value: BigInt) {
    if value.is_zero() {
        return;
    }
    match vec.entry(index) {
        std::collections::btree_map::Entry::Vacant(slot) => {
            slot.insert(value);
        }
        std::collections::btree_map::Entry::Occupied(mut slot) => {
            *slot.get_mut() += value;
            if slot.get().is_zero() {
                slot.remove();
            }
        }
    }
}

/// `target += coeff * source`.
pub fn sparse_add_scaled(target: &mut SparseVec, source: &SparseVec, coeff: &BigInt) {
    if coeff.is_zero() {
        return;
    }
    for (&i, v) in source {
        sparse_axpy(target, i, coeff * v);
    }
}

/// An integer matrix stored column-major as sparse maps.
///
/// Column `j` holds the image of the `j`-th basis vector, so a matrix of a
/// map `Z^cols -> Z^rows` acts on column vectors from the left.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    columns: Vec<SparseVec>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            columns: vec![SparseVec::new(); cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.columns[i].insert(i, BigInt::one());
        }
        m
    }

    /// Builds a matrix from dense rows of machine integers.
    ///
    /// Panics if the rows are ragged.
    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged row {i}");
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, v.clone().into());
            }
        }
        m
    }

    /// Builds an `rows x cols` matrix from its columns given as sparse vectors.
    pub fn from_columns(rows: usize, columns: Vec<SparseVec>) -> Self {
        let cols = columns.len();
        let mut columns = columns;
        for col in &mut columns {
            col.retain(|_, v| !v.is_zero());
            if let Some((&last, _)) = col.iter().next_back() {
                assert!(last < rows, "row index {last} out of range {rows}");
            }
        }
        IntMatrix {
            rows,
            cols,
            columns,
        }
    }

    pub fn diagonal(rows: usize, cols: usize, diag: &[BigInt]) -> Self {
        let mut m = Self::zeros(rows, cols);
        for (i, d) in diag.iter().enumerate() {
            m.set(i, i, d.clone());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, row: usize, col: usize) -> BigInt {
        self.columns[col].get(&row).cloned().unwrap_or_default()
    }

    pub fn set(&mut self, row: usize, col: usize, value: BigInt) {
        assert!(row < self.rows && col < self.cols, "index ({row},{col}) out of range");
        if value.is_zero() {
            self.columns[col].remove(&row);
        } else {
            self.columns[col].insert(row, value);
        }
    }

    pub fn add_at(&mut self, row: usize, col: usize, value: BigInt) {
        assert!(row < self.rows && col < self.cols, "index ({row},{col}) out of range");
        sparse_axpy(&mut self.columns[col], row, value);
    }

    pub fn column(&self, col: usize) -> &SparseVec {
        &self.columns[col]
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.columns
    }

    pub fn into_columns(self) -> Vec<SparseVec> {
        self.columns
    }

    /// Nonzero entries in column-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> + '_ {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(j, col)| col.iter().map(move |(&i, v)| (i, j, v)))
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(BTreeMap::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(BTreeMap::is_empty)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Self::identity(self.rows)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for (i, j, v) in self.entries() {
            t.columns[i].insert(j, v.clone());
        }
        t
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        let mut out = vec![vec![BigInt::zero(); self.cols]; self.rows];
        for (i, j, v) in self.entries() {
            out[i][j] = v.clone();
        }
        out
    }

    /// Dense rows as `i64`, or `None` if any entry does not fit.
    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        let mut out = vec![vec![0i64; self.cols]; self.rows];
        for (i, j, v) in self.entries() {
            out[i][j] = i64::try_from(v).ok()?;
        }
        Some(out)
    }

    /// Applies the matrix to a sparse vector.
    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (&j, c) in v {
            sparse_add_scaled(&mut out, &self.columns[j], c);
        }
        out
    }

    /// Applies the matrix to a dense vector.
    pub fn apply_dense(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                context: "matrix-vector product",
                expected: self.cols,
                found: v.len(),
            });
        }
        let mut out = vec![BigInt::zero(); self.rows];
        for (j, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (&i, a) in &self.columns[j] {
                out[i] += a * c;
            }
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                context: "matrix product",
                expected: self.cols,
                found: other.rows,
            });
        }
        let columns = other.columns.iter().map(|col| self.apply(col)).collect();
        Ok(IntMatrix {
            rows: self.rows,
            cols: other.cols,
            columns,
        })
    }

    pub fn checked_add(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch {
                context: "matrix sum",
                expected: self.rows * self.cols,
                found: other.rows * other.cols,
            });
        }
        let mut out = self.clone();
        for (j, col) in other.columns.iter().enumerate() {
            sparse_add_scaled(&mut out.columns[j], col, &BigInt::one());
        }
        Ok(out)
    }

    pub fn scaled(&self, factor: &BigInt) -> IntMatrix {
        if factor.is_zero() {
            return Self::zeros(self.rows, self.cols);
        }
        let columns = self
            .columns
            .iter()
            .map(|col| col.iter().map(|(&i, v)| (i, v * factor)).collect())
            .collect();
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            columns,
        }
    }

    /// Columns `range` as a new matrix.
    pub fn select_columns(&self, range: std::ops::Range<usize>) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: range.len(),
            columns: self.columns[range].to_vec(),
        }
    }

    /// Rows `range` as a new matrix.
    pub fn select_rows(&self, range: std::ops::Range<usize>) -> IntMatrix {
        let columns = self
            .columns
            .iter()
            .map(|col| {
                col.range(range.clone())
                    .map(|(&i, v)| (i - range.start, v.clone()))
                    .collect()
            })
            .collect();
        IntMatrix {
            rows: range.len(),
            cols: self.cols,
            columns,
        }
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hconcat(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch {
                context: "horizontal concatenation",
                expected: self.rows,
                found: other.rows,
            });
        }
        let mut columns = self.columns.clone();
        columns.extend(other.columns.iter().cloned());
        Ok(IntMatrix {
            rows: self.rows,
            cols: self.cols + other.cols,
            columns,
        })
    }

    /// Block-diagonal sum.
    pub fn direct_sum(blocks: &[&IntMatrix]) -> IntMatrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let mut columns = Vec::new();
        let mut offset = 0;
        for b in blocks {
            for col in &b.columns {
                columns.push(col.iter().map(|(&i, v)| (i + offset, v.clone())).collect());
            }
            offset += b.rows;
        }
        IntMatrix {
            rows,
            cols: columns.len(),
            columns,
        }
    }

    /// Determinant by fraction-free (Bareiss) elimination. Square matrices only.
    pub fn determinant(&self) -> Result<BigInt> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch {
                context: "determinant of non-square matrix",
                expected: self.rows,
                found: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.to_dense();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                    return Ok(BigInt::zero());
                };
                a.swap(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        Ok(sign * &a[n - 1][n - 1])
    }

    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols && self.determinant().is_ok_and(|d| d.abs().is_one())
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix {}x{} ", self.rows, self.cols)?;
        if self.rows * self.cols <= 400 {
            f.debug_list().entries(self.to_dense()).finish()
        } else {
            write!(f, "({} nonzeros)", self.nnz())
        }
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.to_dense() {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", cells.join(" "))?;
        }
        Ok(())
    }
}

impl<'a> Mul<&'a IntMatrix> for &'a IntMatrix {
    type Output = IntMatrix;

    /// Panics on a dimension mismatch; use [`IntMatrix::checked_mul`] otherwise.
    fn mul(self, rhs: &'a IntMatrix) -> IntMatrix {
        self.checked_mul(rhs).expect("matrix product dimensions")
    }
}

impl<'a> Add<&'a IntMatrix> for &'a IntMatrix {
    type Output = IntMatrix;

    fn add(self, rhs: &'a IntMatrix) -> IntMatrix {
        self.checked_add(rhs).expect("matrix sum dimensions")
    }
}

impl<'a> Sub<&'a IntMatrix> for &'a IntMatrix {
    type Output = IntMatrix;

    fn sub(self, rhs: &'a IntMatrix) -> IntMatrix {
        self.checked_add(&-rhs).expect("matrix difference dimensions")
    }
}

impl Neg for &IntMatrix {
    type Output = IntMatrix;

    fn neg(self) -> IntMatrix {
        self.scaled(&-BigInt::one())
    }
}
