//! Dense exact matrices.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};


use super::upoly::UPoly;
use super::{FieldError, Scalar};

#[derive(Clone, PartialEq, Debug)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

/// Reduced row echelon form together with the pivot columns.
#[derive(Clone, Debug)]
pub struct Rref<F> {
    pub matrix: Matrix<F>,
    pub pivots: Vec<usize>,
}

impl<F: Scalar> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = F::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Matrix whose columns are the given vectors, all of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<F>]) -> Self {
        assert!(columns.iter().all(|c| c.len() == rows), "column length mismatch");
        Self::from_fn(rows, columns.len(), |i, j| columns[j][i].clone())
    }

    pub fn diagonal(entries: &[F]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |i, j| if i == j { entries[i].clone() } else { F::zero() })
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

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn column(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row(&self, i: usize) -> Vec<F> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn scale(&self, c: &F) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.clone() * c.clone()).collect(),
        }
    }

    pub fn map<G: Scalar>(&self, f: impl Fn(&F) -> G) -> Matrix<G> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn trace(&self) -> F {
        (0..self.rows.min(self.cols)).fold(F::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    pub fn pow(&self, e: usize) -> Self {
        assert!(self.is_square());
        let mut acc = Self::identity(self.rows);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `self - c·I`.
    pub fn shift(&self, c: &F) -> Self {
        let mut m = self.clone();
        for i in 0..self.rows.min(self.cols) {
            m[(i, i)] = m[(i, i)].clone() - c.clone();
        }
        m
    }

    /// Submatrix on the given row and column indices.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }

    /// Writes `block` with its top-left corner at `(r, c)`.
    pub fn set_block(&mut self, r: usize, c: usize, block: &Matrix<F>) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(r + i, c + j)] = block[(i, j)].clone();
            }
        }
    }

    pub fn block_diag(blocks: &[Matrix<F>]) -> Self {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let m: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(n, m);
        let (mut r, mut c) = (0, 0);
        for b in blocks {
            out.set_block(r, c, b);
            r += b.rows;
            c += b.cols;
        }
        out
    }

    pub fn hstack(&self, other: &Matrix<F>) -> Self {
        assert_eq!(self.rows, other.rows);
        Self::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                other[(i, j - self.cols)].clone()
            }
        })
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Row echelon form by Gaussian elimination; the pivot in each column
    /// is the first nonzero entry at or below the current row.
    pub fn echelon(&self) -> (Matrix<F>, Vec<usize>) {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..a.cols {
            if r == a.rows {
                break;
            }
            let Some(p) = (r..a.rows).find(|&i| !a[(i, c)].is_zero()) else {
                continue;
            };
            a.swap_rows(r, p);
            let inv = a[(r, c)].inv();
            for i in r + 1..a.rows {
                if a[(i, c)].is_zero() {
                    continue;
                }
                let t = a[(i, c)].clone() * inv.clone();
                for j in c + 1..a.cols {
                    if a[(r, j)].is_zero() {
                        continue;
                    }
                    let v = a[(i, j)].clone() - t.clone() * a[(r, j)].clone();
                    a[(i, j)] = v;
                }
                a[(i, c)] = F::zero();
            }
            pivots.push(c);
            r += 1;
        }
        (a, pivots)
    }

    pub fn rref(&self) -> Rref<F> {
        let (mut a, pivots) = self.echelon();
        for (r, &c) in pivots.iter().enumerate() {
            let inv = a[(r, c)].inv();
            for j in c..a.cols {
                a[(r, j)] = a[(r, j)].clone() * inv.clone();
            }
            for i in 0..r {
                let f = a[(i, c)].clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..a.cols {
                    a[(i, j)] = a[(i, j)].clone() - f.clone() * a[(r, j)].clone();
                }
            }
        }
        Rref { matrix: a, pivots }
    }

    pub fn rank(&self) -> usize {
        self.echelon().1.len()
    }

    /// Basis of the right kernel, one column per free variable.
    pub fn kernel(&self) -> Matrix<F> {
        let Rref { matrix: r, pivots } = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|j| !pivots.contains(j)).collect();
        let mut out = Matrix::zeros(self.cols, free.len());
        for (k, &fj) in free.iter().enumerate() {
            out[(fj, k)] = F::one();
            for (row, &pc) in pivots.iter().enumerate() {
                out[(pc, k)] = -r[(row, fj)].clone();
            }
        }
        out
    }

    /// Basis of the column space, taken from the pivot columns of `self`.
    pub fn image(&self) -> Matrix<F> {
        let (_, pivots) = self.echelon();
        self.select(&(0..self.rows).collect::<Vec<_>>(), &pivots)
    }

    /// Extends the independent columns of `self` to a basis of the ambient
    /// space with standard basis vectors, chosen greedily by index.
    pub fn complete_basis(&self) -> Matrix<F> {
        let n = self.rows;
        let joined = self.hstack(&Matrix::identity(n));
        let (_, pivots) = joined.echelon();
        debug_assert!(pivots.iter().take(self.cols).copied().eq(0..self.cols), "columns not independent");
        joined.select(&(0..n).collect::<Vec<_>>(), &pivots)
    }

    pub fn inverse(&self) -> Option<Matrix<F>> {
        assert!(self.is_square());
        let n = self.rows;
        let Rref { matrix, pivots } = self.hstack(&Matrix::identity(n)).rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(matrix.select(&(0..n).collect::<Vec<_>>(), &(n..2 * n).collect::<Vec<_>>()))
    }

    /// The unique solution of `self · x = b` for square nonsingular `self`.
    pub fn solve(&self, b: &[F]) -> Option<Vec<F>> {
        let n = self.rows;
        let rhs = Matrix::from_columns(n, &[b.to_vec()]);
        let Rref { matrix, pivots } = self.hstack(&rhs).rref();
        if pivots.len() != self.cols || pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        Some((0..self.cols).map(|i| matrix[(i, self.cols)].clone()).collect())
    }

    /// Characteristic polynomial `det(λI - self)`.
    /// By similarity to upper Hessenberg form, then the recurrence on the
    /// leading principal minors.
    pub fn char_poly(&self) -> UPoly<F> {
        assert!(self.is_square(), "char_poly of a non-square matrix");
        let n = self.rows;
        let mut h = self.clone();
        for m in 1..n.saturating_sub(1) {
            let Some(p) = (m..n).find(|&i| !h[(i, m - 1)].is_zero()) else {
                continue;
            };
            if p != m {
                h.swap_rows(p, m);
                for i in 0..n {
                    h.data.swap(i * n + p, i * n + m);
                }
            }
            let piv = h[(m, m - 1)].clone();
            for i in m + 1..n {
                if h[(i, m - 1)].is_zero() {
                    continue;
                }
                let t = h[(i, m - 1)].clone() / piv.clone();
                for j in m - 1..n {
                    let v = h[(i, j)].clone() - t.clone() * h[(m, j)].clone();
                    h[(i, j)] = v;
                }
                for r in 0..n {
                    let v = h[(r, m)].clone() + t.clone() * h[(r, i)].clone();
                    h[(r, m)] = v;
                }
            }
        }
        // p[k] is the characteristic polynomial of the leading k×k block
        let mut p: Vec<UPoly<F>> = vec![UPoly::one()];
        for k in 0..n {
            let mut next = &UPoly::linear(h[(k, k)].clone()) * &p[k];
            let mut sub = F::one();
            for i in (0..k).rev() {
                sub = sub * h[(i + 1, i)].clone();
                if sub.is_zero() {
                    break;
                }
                let c = sub.clone() * h[(i, k)].clone();
                if !c.is_zero() {
                    next = &next - &p[i].scale(&c);
                }
            }
            p.push(next);
        }
        p.pop().expect("nonempty")
    }
}

/// Solves `a·X - X·b = c` exactly. Unique when the spectra of `a` and `b`
/// are disjoint.
pub fn solve_sylvester<F: Scalar>(a: &Matrix<F>, b: &Matrix<F>, c: &Matrix<F>) -> Result<Matrix<F>, FieldError> {
    let (p, q) = (a.rows(), b.rows());
    assert!(a.is_square() && b.is_square() && c.rows() == p && c.cols() == q);
    if c.is_zero() {
        return Ok(Matrix::zeros(p, q));
    }
    // unknown X[i][j] sits at index i*q + j
    let n = p * q;
    let mut sys = Matrix::<F>::zeros(n, n);
    for i in 0..p {
        for j in 0..q {
            let row = i * q + j;
            for l in 0..p {
                let v = a[(i, l)].clone();
                if !v.is_zero() {
                    sys[(row, l * q + j)] = sys[(row, l * q + j)].clone() + v;
                }
            }
            for l in 0..q {
                let v = b[(l, j)].clone();
                if !v.is_zero() {
                    sys[(row, i * q + l)] = sys[(row, i * q + l)].clone() - v;
                }
            }
        }
    }
    let rhs: Vec<F> = (0..p).flat_map(|i| (0..q).map(move |j| (i, j))).map(|(i, j)| c[(i, j)].clone()).collect();
    let x = sys.solve(&rhs).ok_or(FieldError::SingularSylvester)?;
    Ok(Matrix { rows: p, cols: q, data: x })
}

impl<F> Index<(usize, usize)> for Matrix<F> {
    type Output = F;
    fn index(&self, (i, j): (usize, usize)) -> &F {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<F> IndexMut<(usize, usize)> for Matrix<F> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut F {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<F: Scalar> Add for &Matrix<F> {
    type Output = Matrix<F>;
    fn add(self, rhs: &Matrix<F>) -> Matrix<F> {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols, "shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }
}

impl<F: Scalar> Sub for &Matrix<F> {
    type Output = Matrix<F>;
    fn sub(self, rhs: &Matrix<F>) -> Matrix<F> {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols, "shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }
}

impl<F: Scalar> Mul for &Matrix<F> {
    type Output = Matrix<F>;
    fn mul(self, rhs: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.cols, rhs.rows, "shape mismatch");
        let mut out = Matrix::<F>::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    out[(i, j)] = out[(i, j)].clone() + a.clone() * b.clone();
                }
            }
        }
        out
    }
}

impl<F: Scalar> Neg for &Matrix<F> {
    type Output = Matrix<F>;
    fn neg(self) -> Matrix<F> {
        self.map(|x| -x.clone())
    }
}

impl<F: Scalar> fmt::Display for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}
