//! Dense matrices over a prime field.
//!
//! Row reduction always picks the leftmost pivot column and, within it, the
//! lowest-indexed available row, so every basis derived here (kernels,
//! column spaces, solutions) is deterministic.

use std::fmt;

use thiserror::Error;

use crate::field::{FieldScalar, PrimeField};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {op} of {lhs:?} and {rhs:?}")]
    DimensionMismatch {
        op: &'static str,
        lhs: (usize, usize),
        rhs: (usize, usize),
    },
    #[error("matrices over different fields ({0} and {1})")]
    FieldMismatch(PrimeField, PrimeField),
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix<{}>{}x{}[", self.field, self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                f.write_str("; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
        }
        f.write_str("]")
    }
}

impl Matrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        Self {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from integer rows, reducing each entry mod p.
    /// Panics if the rows are ragged.
    pub fn from_rows(field: PrimeField, rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(field, rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged rows");
            for (c, &v) in row.iter().enumerate() {
                m.set(r, c, field.reduce(v));
            }
        }
        m
    }

    pub fn from_columns(field: PrimeField, rows: usize, columns: &[Vec<u32>]) -> Self {
        let mut m = Self::zeros(field, rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (r, &v) in col.iter().enumerate() {
                m.set(r, c, v % field.modulus());
            }
        }
        m
    }

    pub fn from_fn(
        field: PrimeField,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> i64,
    ) -> Self {
        let mut m = Self::zeros(field, rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, field.reduce(f(r, c)));
            }
        }
        m
    }

    pub fn field(&self) -> PrimeField {
        self.field
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

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        debug_assert!(v < self.field.modulus());
        self.data[r * self.cols + c] = v;
    }

    pub fn entry(&self, r: usize, c: usize) -> FieldScalar {
        self.field.element(self.get(r, c) as i64)
    }

    pub fn column(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|r| (0..self.cols).all(|c| self.get(r, c) == u32::from(r == c)))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    fn same_field(&self, other: &Self) -> Result<(), LinalgError> {
        if self.field != other.field {
            return Err(LinalgError::FieldMismatch(self.field, other.field));
        }
        Ok(())
    }

    /// `self · rhs`.
    pub fn mul(&self, rhs: &Matrix) -> Result<Matrix, LinalgError> {
        self.same_field(rhs)?;
        if self.cols != rhs.rows {
            return Err(LinalgError::DimensionMismatch {
                op: "product",
                lhs: self.shape(),
                rhs: rhs.shape(),
            });
        }
        let p = self.field.modulus() as u64;
        let mut out = Matrix::zeros(self.field, self.rows, rhs.cols);
        let mut acc = vec![0u64; rhs.cols];
        for r in 0..self.rows {
            acc.iter_mut().for_each(|a| *a = 0);
            for k in 0..self.cols {
                let a = self.get(r, k) as u64;
                if a == 0 {
                    continue;
                }
                let row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                for (slot, &b) in acc.iter_mut().zip(row) {
                    *slot = (*slot + a * b as u64) % p;
                }
            }
            for (c, &v) in acc.iter().enumerate() {
                out.set(r, c, v as u32);
            }
        }
        Ok(out)
    }

    pub fn add(&self, rhs: &Matrix) -> Result<Matrix, LinalgError> {
        self.same_field(rhs)?;
        if self.shape() != rhs.shape() {
            return Err(LinalgError::DimensionMismatch {
                op: "sum",
                lhs: self.shape(),
                rhs: rhs.shape(),
            });
        }
        let mut out = self.clone();
        for (o, &b) in out.data.iter_mut().zip(&rhs.data) {
            *o = self.field.add(*o, b);
        }
        Ok(out)
    }

    /// `[self | rhs]`.
    pub fn hstack(&self, rhs: &Matrix) -> Result<Matrix, LinalgError> {
        self.same_field(rhs)?;
        if self.rows != rhs.rows {
            return Err(LinalgError::DimensionMismatch {
                op: "hstack",
                lhs: self.shape(),
                rhs: rhs.shape(),
            });
        }
        let mut out = Matrix::zeros(self.field, self.rows, self.cols + rhs.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.get(r, c));
            }
            for c in 0..rhs.cols {
                out.set(r, self.cols + c, rhs.get(r, c));
            }
        }
        Ok(out)
    }

    pub fn block_diagonal(field: PrimeField, blocks: &[Matrix]) -> Matrix {
        let rows = blocks.iter().map(Matrix::rows).sum();
        let cols = blocks.iter().map(Matrix::cols).sum();
        let mut out = Matrix::zeros(field, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            assert_eq!(b.field, field, "block from a different field");
            for r in 0..b.rows {
                for c in 0..b.cols {
                    out.set(r0 + r, c0 + c, b.get(r, c));
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.field, self.rows, cols.len());
        for (j, &c) in cols.iter().enumerate() {
            for r in 0..self.rows {
                out.set(r, j, self.get(r, c));
            }
        }
        out
    }

    pub fn select_rows(&self, rows: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.field, rows.len(), self.cols);
        for (i, &r) in rows.iter().enumerate() {
            for c in 0..self.cols {
                out.set(i, c, self.get(r, c));
            }
        }
        out
    }

    /// Row-reduces in place, searching for pivots only among the first
    /// `pivot_limit` columns; row operations act on whole rows. Returns the
    /// pivot columns in increasing order.
    fn eliminate(&mut self, pivot_limit: usize) -> Vec<usize> {
        let field = self.field;
        let cols = self.cols;
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..pivot_limit.min(cols) {
            if rank == self.rows {
                break;
            }
            let Some(src) = (rank..self.rows).find(|&r| self.get(r, col) != 0) else {
                continue;
            };
            if src != rank {
                for c in 0..cols {
                    self.data.swap(src * cols + c, rank * cols + c);
                }
            }
            let inv = field.inv(self.get(rank, col));
            if inv != 1 {
                for c in 0..cols {
                    let v = self.get(rank, c);
                    self.set(rank, c, field.mul(v, inv));
                }
            }
            for r in 0..self.rows {
                if r == rank {
                    continue;
                }
                let factor = self.get(r, col);
                if factor == 0 {
                    continue;
                }
                for c in 0..cols {
                    let v = self.get(rank, c);
                    if v != 0 {
                        let cur = self.get(r, c);
                        self.set(r, c, field.sub(cur, field.mul(factor, v)));
                    }
                }
            }
            pivots.push(col);
            rank += 1;
        }
        pivots
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.eliminate(self.cols);
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Columns form a basis of the null space, one per free column of the
    /// reduced echelon form, in increasing free-column order.
    pub fn kernel_basis(&self) -> Matrix {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        let mut k = Matrix::zeros(self.field, self.cols, free.len());
        for (j, &f) in free.iter().enumerate() {
            k.set(f, j, 1);
            for (i, &pc) in pivots.iter().enumerate() {
                k.set(pc, j, self.field.neg(r.get(i, f)));
            }
        }
        k
    }

    /// The pivot columns of `self`: a basis of its column space made of
    /// original columns.
    pub fn column_basis(&self) -> Matrix {
        let (_, pivots) = self.rref();
        self.select_columns(&pivots)
    }

    /// Finds `x` with `self · x = b`. Free variables are set to zero. Returns
    /// `Ok(None)` when the system is inconsistent.
    pub fn solve(&self, b: &Matrix) -> Result<Option<Matrix>, LinalgError> {
        if self.rows != b.rows {
            return Err(LinalgError::DimensionMismatch {
                op: "solve",
                lhs: self.shape(),
                rhs: b.shape(),
            });
        }
        let mut aug = self.hstack(b)?;
        let pivots = aug.eliminate(self.cols);
        let rank = pivots.len();
        for r in rank..aug.rows {
            if (self.cols..aug.cols).any(|c| aug.get(r, c) != 0) {
                return Ok(None);
            }
        }
        let mut x = Matrix::zeros(self.field, self.cols, b.cols);
        for (i, &pc) in pivots.iter().enumerate() {
            for c in 0..b.cols {
                x.set(pc, c, aug.get(i, self.cols + c));
            }
        }
        Ok(Some(x))
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let x = self.solve(&Matrix::identity(self.field, self.rows)).ok()??;
        (self.rank() == self.rows).then_some(x)
    }
}

/// Composes maps given in diagram order: `compose(d, [A, B])` applies `A`
/// first and returns `B · A`. An empty sequence yields the `d × d` identity.
pub fn compose(field: PrimeField, dim: usize, maps: &[Matrix]) -> Result<Matrix, LinalgError> {
    let mut acc = Matrix::identity(field, dim);
    for m in maps {
        acc = m.mul(&acc)?;
    }
    Ok(acc)
}
