//! Dense exact matrices over K.

use crate::error::{Error, Result};
use crate::scalar::{ExtValuation, FieldDescriptor, ValuedScalar};

/// Row-major matrix of scalars sharing one field descriptor.
/// Zero rows and zero columns are legal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    descriptor: FieldDescriptor,
    entries: Vec<ValuedScalar>,
}

impl Matrix {
    pub fn zeros(descriptor: &FieldDescriptor, rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            descriptor: descriptor.clone(),
            entries: vec![descriptor.zero(); rows * cols],
        }
    }

    pub fn identity(descriptor: &FieldDescriptor, n: usize) -> Self {
        let mut m = Matrix::zeros(descriptor, n, n);
        for i in 0..n {
            m.set(i, i, descriptor.one());
        }
        m
    }

    pub fn from_rows(descriptor: &FieldDescriptor, rows: Vec<Vec<ValuedScalar>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut entries = Vec::with_capacity(nrows * ncols);
        for row in rows {
            if row.len() != ncols {
                return Err(Error::DimensionMismatch("ragged rows".into()));
            }
            for e in row {
                if e.descriptor() != descriptor {
                    return Err(Error::DimensionMismatch(
                        "entry descriptor differs from matrix descriptor".into(),
                    ));
                }
                entries.push(e);
            }
        }
        Ok(Matrix {
            rows: nrows,
            cols: ncols,
            descriptor: descriptor.clone(),
            entries,
        })
    }

    /// Convenience constructor from integers.
    pub fn from_i64(descriptor: &FieldDescriptor, rows: &[&[i64]]) -> Self {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&n| descriptor.from_integer(n)).collect())
            .collect();
        Matrix::from_rows(descriptor, rows).expect("rectangular integer grid")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn descriptor(&self) -> &FieldDescriptor {
        &self.descriptor
    }

    pub fn get(&self, i: usize, j: usize) -> &ValuedScalar {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: ValuedScalar) {
        assert_eq!(v.descriptor(), &self.descriptor, "mixed-descriptor entry");
        self.entries[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(&self.descriptor, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "add {}x{} with {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = self.clone();
        for (a, b) in out.entries.iter_mut().zip(&other.entries) {
            *a = a.add(b);
        }
        Ok(out)
    }

    pub fn neg(&self) -> Matrix {
        let mut out = self.clone();
        for a in out.entries.iter_mut() {
            *a = a.neg();
        }
        out
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &ValuedScalar) -> Matrix {
        let mut out = self.clone();
        for a in out.entries.iter_mut() {
            *a = a.mul(c);
        }
        out
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "mul {}x{} with {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(&self.descriptor, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.set(i, j, out.get(i, j).add(&a.mul(b)));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[ValuedScalar]) -> Result<Vec<ValuedScalar>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "mul {}x{} with vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let mut out = vec![self.descriptor.zero(); self.rows];
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if !a.is_zero() && !v[j].is_zero() {
                    out[i] = out[i].add(&a.mul(&v[j]));
                }
            }
        }
        Ok(out)
    }

    /// Columns `lo..hi` as a new matrix.
    pub fn columns(&self, lo: usize, hi: usize) -> Matrix {
        let mut out = Matrix::zeros(&self.descriptor, self.rows, hi - lo);
        for i in 0..self.rows {
            for j in lo..hi {
                out.set(i, j - lo, self.get(i, j).clone());
            }
        }
        out
    }

    /// Horizontal concatenation.
    pub fn hstack(&self, other: &Matrix) -> Result<Matrix> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch("hstack row counts differ".into()));
        }
        let mut out = Matrix::zeros(&self.descriptor, self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        Ok(out)
    }

    /// Vertical concatenation.
    pub fn vstack(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.cols && self.rows != 0 && other.rows != 0 {
            return Err(Error::DimensionMismatch("vstack column counts differ".into()));
        }
        let cols = if self.rows == 0 { other.cols } else { self.cols };
        let mut out = Matrix::zeros(&self.descriptor, self.rows + other.rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out.set(self.rows + i, j, other.get(i, j).clone());
            }
        }
        Ok(out)
    }

    /// Minimum valuation over all entries; Infinity for the zero matrix.
    pub fn min_entry_valuation(&self) -> ExtValuation {
        self.entries
            .iter()
            .map(|e| e.valuation())
            .min()
            .unwrap_or(ExtValuation::Infinity)
    }

    pub(crate) fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for k in 0..self.cols {
            self.entries.swap(i * self.cols + k, j * self.cols + k);
        }
    }

    pub(crate) fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for k in 0..self.rows {
            self.entries.swap(k * self.cols + i, k * self.cols + j);
        }
    }

    /// row_i += c * row_j
    pub(crate) fn add_row_multiple(&mut self, i: usize, j: usize, c: &ValuedScalar) {
        for k in 0..self.cols {
            let v = self.get(i, k).add(&c.mul(self.get(j, k)));
            self.set(i, k, v);
        }
    }

    /// col_i += c * col_j
    pub(crate) fn add_col_multiple(&mut self, i: usize, j: usize, c: &ValuedScalar) {
        for k in 0..self.rows {
            let v = self.get(k, i).add(&c.mul(self.get(k, j)));
            self.set(k, i, v);
        }
    }

    pub(crate) fn scale_row(&mut self, i: usize, c: &ValuedScalar) {
        for k in 0..self.cols {
            let v = self.get(i, k).mul(c);
            self.set(i, k, v);
        }
    }

    pub(crate) fn scale_col(&mut self, j: usize, c: &ValuedScalar) {
        for k in 0..self.rows {
            let v = self.get(k, j).mul(c);
            self.set(k, j, v);
        }
    }

    /// Fraction-free Bareiss elimination.
    pub fn determinant(&self) -> Result<ValuedScalar> {
        if self.rows != self.cols {
            return Err(Error::NonSquare);
        }
        let n = self.rows;
        if n == 0 {
            return Ok(self.descriptor.one());
        }
        let mut m = self.clone();
        let mut sign_flip = false;
        let mut prev = self.descriptor.one();
        for k in 0..n - 1 {
            if m.get(k, k).is_zero() {
                match (k + 1..n).find(|&i| !m.get(i, k).is_zero()) {
                    Some(i) => {
                        m.swap_rows(k, i);
                        sign_flip = !sign_flip;
                    }
                    None => return Ok(self.descriptor.zero()),
                }
            }
            let pivot = m.get(k, k).clone();
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = pivot
                        .mul(m.get(i, j))
                        .sub(&m.get(i, k).mul(m.get(k, j)));
                    m.set(i, j, num.div(&prev).expect("Bareiss divisor is a prior pivot"));
                }
                m.set(i, k, self.descriptor.zero());
            }
            prev = pivot;
        }
        let det = m.get(n - 1, n - 1).clone();
        Ok(if sign_flip { det.neg() } else { det })
    }

    /// Reduced row echelon form, returning the pivot columns.
    fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row >= m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&i| !m.get(i, col).is_zero()) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = m.get(row, col).inv().expect("pivot is nonzero");
            m.scale_row(row, &inv);
            for i in 0..m.rows {
                if i != row && !m.get(i, col).is_zero() {
                    let c = m.get(i, col).neg();
                    m.add_row_multiple(i, row, &c);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if self.rows != self.cols {
            return Err(Error::NonSquare);
        }
        let aug = self.hstack(&Matrix::identity(&self.descriptor, self.rows))?;
        let (r, pivots) = aug.rref();
        if pivots.len() != self.rows || pivots.iter().any(|&c| c >= self.cols) {
            return Err(Error::SingularMatrix);
        }
        Ok(r.columns(self.cols, 2 * self.cols))
    }

    /// A matrix whose columns span the kernel of `self` (n x R, R = dim ker).
    pub fn kernel_basis(&self) -> Matrix {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Matrix::zeros(&self.descriptor, self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            out.set(fc, k, self.descriptor.one());
            for (prow, &pc) in pivots.iter().enumerate() {
                out.set(pc, k, r.get(prow, fc).neg());
            }
        }
        out
    }

    /// Some solution of `self * x = rhs`, or None when inconsistent.
    pub fn solve_affine(&self, rhs: &[ValuedScalar]) -> Result<Option<Vec<ValuedScalar>>> {
        if rhs.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "solve {}x{} with rhs of length {}",
                self.rows,
                self.cols,
                rhs.len()
            )));
        }
        let rhs_col = Matrix::from_rows(
            &self.descriptor,
            rhs.iter().map(|v| vec![v.clone()]).collect(),
        )?;
        let aug = if self.rows == 0 {
            self.clone()
        } else {
            self.hstack(&rhs_col)?
        };
        let (r, pivots) = aug.rref();
        if pivots.iter().any(|&c| c == self.cols) {
            return Ok(None); // a pivot in the rhs column: inconsistent
        }
        let mut x = vec![self.descriptor.zero(); self.cols];
        for (prow, &pc) in pivots.iter().enumerate() {
            x[pc] = if self.rows == 0 {
                self.descriptor.zero()
            } else {
                r.get(prow, self.cols).clone()
            };
        }
        Ok(Some(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q5() -> FieldDescriptor {
        FieldDescriptor::p_adic(5).unwrap()
    }

    #[test]
    fn determinant_examples() {
        let d = q5();
        let m = Matrix::from_i64(&d, &[&[1, 2], &[3, 4]]);
        assert_eq!(m.determinant().unwrap(), d.from_integer(-2));

        let m = Matrix::from_i64(&d, &[&[0, 2], &[4, 0]]);
        assert_eq!(m.determinant().unwrap(), d.from_integer(-8));

        let m = Matrix::from_i64(&d, &[&[1, 1], &[1, 1]]);
        assert!(m.determinant().unwrap().is_zero());

        let m = Matrix::from_i64(&d, &[&[2, 0, 1], &[1, 1, 0], &[0, 3, 1]]);
        assert_eq!(m.determinant().unwrap(), d.from_integer(5));
    }

    #[test]
    fn kernel_of_row_vector() {
        let d = q5();
        let m = Matrix::from_i64(&d, &[&[1, 1]]);
        let k = m.kernel_basis();
        assert_eq!((k.rows(), k.cols()), (2, 1));
        assert!(m.mul(&k).unwrap().is_zero());
        assert_eq!(k.get(0, 0).add(k.get(1, 0)), d.zero());
    }

    #[test]
    fn solve_affine_examples() {
        let d = q5();
        let m = Matrix::identity(&d, 2);
        let rhs = vec![d.from_integer(7), d.from_integer(-3)];
        assert_eq!(m.solve_affine(&rhs).unwrap().unwrap(), rhs);

        let m = Matrix::from_i64(&d, &[&[1], &[1]]);
        let rhs = vec![d.from_integer(0), d.from_integer(1)];
        assert!(m.solve_affine(&rhs).unwrap().is_none());
    }

    #[test]
    fn inverse_round_trip() {
        let d = q5();
        let m = Matrix::from_i64(&d, &[&[2, 1], &[7, 4]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(&d, 2));

        let sing = Matrix::from_i64(&d, &[&[1, 2], &[2, 4]]);
        assert_eq!(sing.inverse(), Err(Error::SingularMatrix));
    }

    #[test]
    fn min_entry_valuation_examples() {
        let d = FieldDescriptor::p_adic(2).unwrap();
        assert_eq!(
            Matrix::zeros(&d, 2, 2).min_entry_valuation(),
            ExtValuation::Infinity
        );
        let m = Matrix::from_i64(&d, &[&[0, 2], &[4, 0]]);
        assert_eq!(m.min_entry_valuation(), ExtValuation::Finite(1));
    }

    #[test]
    fn empty_shapes() {
        let d = q5();
        let m = Matrix::zeros(&d, 0, 3);
        assert_eq!(m.rank(), 0);
        assert_eq!(m.kernel_basis().cols(), 3);
        let sol = m.solve_affine(&[]).unwrap().unwrap();
        assert_eq!(sol.len(), 3);
    }
}
