//! Dense exact matrices over a [`Field`].

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use thiserror::Error;

use crate::field::{Field, FieldError, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("linear system has no solution")]
    NoSolution,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Row-major dense matrix. All entries belong to `field`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    field: Field,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            field,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m[(i, i)] = field.one();
        }
        m
    }

    pub fn diagonal(field: Field, entries: &[Scalar]) -> Self {
        let mut m = Self::zeros(field, entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    pub fn from_rows(field: Field, rows: Vec<Vec<Scalar>>) -> Result<Self, MatrixError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(MatrixError::DimensionMismatch("ragged rows".into()));
            }
            for e in row {
                if e.field() != field {
                    return Err(MatrixError::DimensionMismatch("entry from another field".into()));
                }
                data.push(e);
            }
        }
        Ok(Matrix { rows: r, cols: c, field, data })
    }

    /// Convenience constructor from small integers.
    pub fn from_i64(field: Field, rows: &[&[i64]]) -> Self {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&v| field.from_i64(v)).collect())
            .collect();
        Self::from_rows(field, rows).expect("rectangular integer rows")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn set_row(&mut self, i: usize, row: Vec<Scalar>) {
        assert_eq!(row.len(), self.cols);
        for (j, v) in row.into_iter().enumerate() {
            self[(i, j)] = v;
        }
    }

    pub fn set_column(&mut self, j: usize, col: Vec<Scalar>) {
        assert_eq!(col.len(), self.rows);
        for (i, v) in col.into_iter().enumerate() {
            self[(i, j)] = v;
        }
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn checked_mul(&self, rhs: &Matrix) -> Result<Matrix, MatrixError> {
        if self.cols != rhs.rows {
            return Err(MatrixError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        // sparse rows of the right factor: token matrices are mostly identity
        let sparse: Vec<Vec<(usize, &Scalar)>> = (0..rhs.rows)
            .map(|k| {
                rhs.row(k)
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .collect()
            })
            .collect();
        let mut out = Matrix::zeros(self.field, self.rows, rhs.cols);
        for i in 0..self.rows {
            for (k, a) in self.row(i).iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for &(j, b) in &sparse[k] {
                    let prod = a * b;
                    let slot = &mut out[(i, j)];
                    *slot = &*slot + &prod;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(self.field.zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn add(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect();
        Matrix { data, ..*self }
    }

    pub fn sub(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect();
        Matrix { data, ..*self }
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        let data = self.data.iter().map(|a| a * c).collect();
        Matrix { data, ..*self }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let e = &self[(i, j)];
                    if i == j { e.is_one() } else { e.is_zero() }
                })
            })
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && *self == self.transpose()
    }

    pub fn is_skew_symmetric(&self) -> bool {
        self.is_square() && self.add(&self.transpose()).is_zero()
    }

    pub fn diagonal_entries(&self) -> Vec<Scalar> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).collect()
    }

    /// The submatrix picking the given rows and columns, in order.
    pub fn block(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let mut b = Matrix::zeros(self.field, rows.len(), cols.len());
        for (bi, &i) in rows.iter().enumerate() {
            for (bj, &j) in cols.iter().enumerate() {
                b[(bi, bj)] = self[(i, j)].clone();
            }
        }
        b
    }

    /// Writes `block` into the given rows and columns.
    pub fn assign_block(&mut self, rows: &[usize], cols: &[usize], block: &Matrix) {
        assert_eq!((rows.len(), cols.len()), (block.rows, block.cols));
        for (bi, &i) in rows.iter().enumerate() {
            for (bj, &j) in cols.iter().enumerate() {
                self[(i, j)] = block[(bi, bj)].clone();
            }
        }
    }

    /// Assembles a matrix from a grid of blocks with compatible shapes.
    pub fn assemble(field: Field, grid: &[Vec<&Matrix>]) -> Result<Matrix, MatrixError> {
        let heights: Vec<usize> = grid.iter().map(|r| r.first().map_or(0, |b| b.rows)).collect();
        let widths: Vec<usize> = grid.first().map_or(vec![], |r| r.iter().map(|b| b.cols).collect());
        let mut out = Matrix::zeros(field, heights.iter().sum(), widths.iter().sum());
        let mut r0 = 0;
        for (bi, row) in grid.iter().enumerate() {
            if row.len() != widths.len() {
                return Err(MatrixError::DimensionMismatch("block grid is ragged".into()));
            }
            let mut c0 = 0;
            for (bj, b) in row.iter().enumerate() {
                if b.rows != heights[bi] || b.cols != widths[bj] {
                    return Err(MatrixError::DimensionMismatch("block shapes disagree".into()));
                }
                let rs: Vec<usize> = (r0..r0 + b.rows).collect();
                let cs: Vec<usize> = (c0..c0 + b.cols).collect();
                out.assign_block(&rs, &cs, b);
                c0 += b.cols;
            }
            r0 += heights[bi];
        }
        Ok(out)
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(p, r);
            let inv = m[(r, c)].inv().expect("pivot is nonzero");
            let scaled: Vec<Scalar> = m.row(r).iter().map(|v| v * &inv).collect();
            m.set_row(r, scaled);
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone();
                    let new: Vec<Scalar> =
                        m.row(i).iter().zip(m.row(r)).map(|(a, b)| a - &(&f * b)).collect();
                    m.set_row(i, new);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn determinant(&self) -> Result<Scalar, MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::DimensionMismatch("determinant of a non-square matrix".into()));
        }
        let mut m = self.clone();
        let mut det = self.field.one();
        for c in 0..m.cols {
            let Some(p) = (c..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                return Ok(self.field.zero());
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let pivot = m[(c, c)].clone();
            det = det * &pivot;
            let inv = pivot.inv()?;
            for i in c + 1..m.rows {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = &m[(i, c)] * &inv;
                for j in c..m.cols {
                    let v = &m[(i, j)] - &(&f * &m[(c, j)]);
                    m[(i, j)] = v;
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<Matrix, MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let id = Matrix::identity(self.field, n);
        let aug = Matrix::assemble(self.field, &[vec![self, &id]])?;
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(MatrixError::SingularMatrix);
        }
        let rows: Vec<usize> = (0..n).collect();
        let cols: Vec<usize> = (n..2 * n).collect();
        Ok(r.block(&rows, &cols))
    }

    /// One solution `x` of `self · x = b`.
    pub fn solve(&self, b: &[Scalar]) -> Result<Vec<Scalar>, MatrixError> {
        if b.len() != self.rows {
            return Err(MatrixError::DimensionMismatch("right-hand side length".into()));
        }
        let bcol = Matrix::from_rows(self.field, b.iter().map(|v| vec![v.clone()]).collect())?;
        let aug = Matrix::assemble(self.field, &[vec![self, &bcol]])?;
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Err(MatrixError::NoSolution);
        }
        let mut x = vec![self.field.zero(); self.cols];
        for (row, &c) in pivots.iter().enumerate() {
            x[c] = r[(row, self.cols)].clone();
        }
        Ok(x)
    }

    /// A basis of the right null space `{x : self · x = 0}`.
    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![self.field.zero(); self.cols];
                v[f] = self.field.one();
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = -&r[(row, f)];
                }
                v
            })
            .collect()
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Scalar;

    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &Matrix {
    type Output = Matrix;

    fn mul(self, rhs: &Matrix) -> Matrix {
        self.checked_mul(rhs).expect("matrix dimensions agree")
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix over {} ({}x{})", self.field, self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// Rows separated by newlines, entries by single spaces.
impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// `ᵀu · m · v`.
pub fn bilinear(m: &Matrix, u: &[Scalar], v: &[Scalar]) -> Scalar {
    let mv = m.mul_vec(v);
    u.iter().zip(&mv).fold(m.field().zero(), |acc, (a, b)| acc + a * b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> Field {
        Field::prime(3).unwrap()
    }

    #[test]
    fn identity_product() {
        let i = Matrix::identity(f3(), 3);
        assert_eq!(&i * &i, i);
    }

    #[test]
    fn diagonal_rank() {
        let d = Matrix::from_i64(Field::Rationals, &[&[1, 0, 0], &[0, 0, 0], &[0, 0, 2]]);
        assert_eq!(d.rank(), 2);
    }

    #[test]
    fn solve_finds_a_preimage() {
        let f = f3();
        let a = Matrix::from_i64(f, &[&[1, 1], &[0, 0]]);
        let b = vec![f.from_i64(2), f.from_i64(0)];
        // enumerate all solutions over F_3
        let sols: Vec<Vec<Scalar>> = f
            .elements()
            .flat_map(|x| f.elements().map(move |y| vec![x.clone(), y]))
            .filter(|v| a.mul_vec(v) == b)
            .collect();
        assert_eq!(sols.len(), 3);
        assert!(sols.contains(&vec![f.from_i64(2), f.from_i64(0)]));
        let x = a.solve(&b).unwrap();
        assert!(sols.contains(&x));
        assert_eq!(
            a.solve(&[f.from_i64(0), f.from_i64(1)]),
            Err(MatrixError::NoSolution)
        );
    }

    #[test]
    fn singular_and_mismatch_errors() {
        let f = f3();
        let s = Matrix::from_i64(f, &[&[1, 2], &[2, 1]]);
        assert_eq!(s.inverse(), Err(MatrixError::SingularMatrix));
        let a = Matrix::zeros(f, 2, 3);
        assert!(matches!(a.checked_mul(&a), Err(MatrixError::DimensionMismatch(_))));
    }

    #[test]
    fn determinant_and_kernel() {
        let q = Field::Rationals;
        let m = Matrix::from_i64(q, &[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(m.determinant().unwrap(), q.from_i64(18));
        let s = Matrix::from_i64(q, &[&[1, 2, 3], &[2, 4, 6]]);
        let k = s.kernel();
        assert_eq!(k.len(), 2);
        for v in k {
            assert!(s.mul_vec(&v).iter().all(Scalar::is_zero));
        }
    }

    #[test]
    fn blocks_round_trip() {
        let q = Field::Rationals;
        let m = Matrix::from_i64(q, &[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]);
        let a = m.block(&[0, 1], &[0, 1]);
        let b = m.block(&[0, 1], &[2]);
        let c = m.block(&[2], &[0, 1]);
        let d = m.block(&[2], &[2]);
        let back = Matrix::assemble(q, &[vec![&a, &b], vec![&c, &d]]).unwrap();
        assert_eq!(back, m);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn mat(p: u64, n: usize, m: usize) -> impl Strategy<Value = Matrix> {
            prop::collection::vec(0i64..p as i64, n * m).prop_map(move |v| {
                let f = Field::prime(p).unwrap();
                let rows = v.chunks(m).map(|r| r.iter().map(|&x| f.from_i64(x)).collect()).collect();
                Matrix::from_rows(f, rows).unwrap()
            })
        }

        proptest! {
            #[test]
            fn transpose_reverses_products(a in mat(7, 3, 4), b in mat(7, 4, 2)) {
                prop_assert_eq!((&a * &b).transpose(), &b.transpose() * &a.transpose());
            }

            #[test]
            fn inverse_is_two_sided(a in mat(5, 4, 4)) {
                if let Ok(inv) = a.inverse() {
                    prop_assert!((&a * &inv).is_identity());
                    prop_assert!((&inv * &a).is_identity());
                    prop_assert!(!a.determinant().unwrap().is_zero());
                } else {
                    prop_assert!(a.determinant().unwrap().is_zero());
                }
            }

            #[test]
            fn rank_of_transpose(a in mat(3, 3, 5)) {
                prop_assert_eq!(a.rank(), a.transpose().rank());
            }
        }
    }
}
