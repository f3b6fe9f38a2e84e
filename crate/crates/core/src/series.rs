//! Truncated matrix power series in `u` and the gauge calculus of the
//! operator `t = A(u) + u²∂_u`.

use thiserror::Error;

use crate::field::matrix::Matrix;
use crate::field::Scalar;

/// `Σ_{i=0..N} A_i u^i`, exact through order `N`.
#[derive(Clone, Debug, PartialEq)]
pub struct MatSeries<F> {
    dim: usize,
    terms: Vec<Matrix<F>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("shear leaves no exact terms")]
    PrecisionExhausted,
    #[error("shear produces a pole at order {order} in entry ({row}, {col})")]
    NegativeOrder { row: usize, col: usize, order: i64 },
    #[error("constant term is not invertible")]
    Singular,
}

impl<F: Scalar> MatSeries<F> {
    pub fn new(terms: Vec<Matrix<F>>) -> Self {
        assert!(!terms.is_empty(), "a series needs at least one term");
        let dim = terms[0].rows();
        assert!(terms.iter().all(|t| t.rows() == dim && t.cols() == dim), "terms must be square of one size");
        MatSeries { dim, terms }
    }

    pub fn zeros(dim: usize, precision: usize) -> Self {
        MatSeries { dim, terms: vec![Matrix::zeros(dim, dim); precision + 1] }
    }

    pub fn identity(dim: usize, precision: usize) -> Self {
        Self::constant(Matrix::identity(dim), precision)
    }

    pub fn constant(m: Matrix<F>, precision: usize) -> Self {
        let dim = m.rows();
        let mut terms = vec![Matrix::zeros(dim, dim); precision + 1];
        terms[0] = m;
        MatSeries { dim, terms }
    }

    /// `I + X·u^k`.
    pub fn elementary(x: Matrix<F>, k: usize, precision: usize) -> Self {
        let mut s = Self::identity(x.rows(), precision);
        if k <= precision {
            s.terms[k] = &s.terms[k] + &x;
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn precision(&self) -> usize {
        self.terms.len() - 1
    }

    pub fn terms(&self) -> &[Matrix<F>] {
        &self.terms
    }

    pub fn coeff(&self, i: usize) -> &Matrix<F> {
        &self.terms[i]
    }

    pub fn coeff_mut(&mut self, i: usize) -> &mut Matrix<F> {
        &mut self.terms[i]
    }

    pub fn truncate(&self, precision: usize) -> Self {
        assert!(precision <= self.precision(), "cannot extend precision");
        MatSeries { dim: self.dim, terms: self.terms[..=precision].to_vec() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(Matrix::is_zero)
    }

    pub fn map<G: Scalar>(&self, f: impl Fn(&F) -> G + Copy) -> MatSeries<G> {
        MatSeries { dim: self.dim, terms: self.terms.iter().map(|t| t.map(f)).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.precision().min(other.precision());
        MatSeries { dim: self.dim, terms: (0..=n).map(|i| &self.terms[i] + &other.terms[i]).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.precision().min(other.precision());
        MatSeries { dim: self.dim, terms: (0..=n).map(|i| &self.terms[i] - &other.terms[i]).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.precision().min(other.precision());
        let terms = (0..=n)
            .map(|k| {
                (0..=k).fold(Matrix::zeros(self.dim, self.dim), |acc, i| {
                    if self.terms[i].is_zero() || other.terms[k - i].is_zero() {
                        acc
                    } else {
                        &acc + &(&self.terms[i] * &other.terms[k - i])
                    }
                })
            })
            .collect();
        MatSeries { dim: self.dim, terms }
    }

    pub fn inverse(&self) -> Result<Self, SeriesError> {
        let b0 = self.terms[0].inverse().ok_or(SeriesError::Singular)?;
        let mut out = vec![b0.clone()];
        for k in 1..=self.precision() {
            let mut acc = Matrix::zeros(self.dim, self.dim);
            for i in 1..=k {
                if !self.terms[i].is_zero() {
                    acc = &acc + &(&self.terms[i] * &out[k - i]);
                }
            }
            out.push(-&(&b0 * &acc));
        }
        Ok(MatSeries { dim: self.dim, terms: out })
    }

    /// `u²·dP/du`, to the precision of `self`.
    pub fn u2_derivative(&self) -> Self {
        let mut terms = vec![Matrix::zeros(self.dim, self.dim); self.terms.len()];
        for k in 2..self.terms.len() {
            terms[k] = self.terms[k - 1].scale(&F::from_int(k as i64 - 1));
        }
        MatSeries { dim: self.dim, terms }
    }

    /// The t-action in the basis given by the columns of `p`:
    /// `P⁻¹(A·P + u²P')`.
    pub fn gauge(&self, p: &Self) -> Result<Self, SeriesError> {
        let pinv = p.inverse()?;
        Ok(pinv.mul(&self.mul(p).add(&p.u2_derivative())))
    }

    /// Same as [`gauge`](Self::gauge) but ignoring the `u²P'` term. Only
    /// correct for constant `P`.
    pub fn conjugate_naive(&self, p: &Self) -> Result<Self, SeriesError> {
        let pinv = p.inverse()?;
        Ok(pinv.mul(&self.mul(p)))
    }

    /// Constant change of basis `P⁻¹ A_i P`.
    pub fn conjugate_const(&self, p: &Matrix<F>, pinv: &Matrix<F>) -> Self {
        if *p == Matrix::identity(self.dim) {
            return self.clone();
        }
        MatSeries { dim: self.dim, terms: self.terms.iter().map(|t| &(pinv * t) * p).collect() }
    }

    /// Subtracts `c·I` from the constant term.
    pub fn twist(&self, c: &F) -> Self {
        let mut out = self.clone();
        out.terms[0] = out.terms[0].shift(c);
        out
    }

    /// The t-action in the basis `u^{s_j} e_j`:
    /// `A'_{jk} = u^{s_k - s_j} A_{jk} + δ_{jk} s_j u`. Precision drops by
    /// the spread of the shifts; coefficients pushed below order zero must
    /// vanish.
    pub fn shear(&self, shifts: &[i64]) -> Result<Self, SeriesError> {
        assert_eq!(shifts.len(), self.dim);
        let Some((&lo, &hi)) = shifts.iter().min().zip(shifts.iter().max()) else {
            return Ok(self.clone());
        };
        let spread = (hi - lo) as usize;
        let n = self.precision().checked_sub(spread).ok_or(SeriesError::PrecisionExhausted)?;
        let mut terms = vec![Matrix::zeros(self.dim, self.dim); n + 1];
        for j in 0..self.dim {
            for k in 0..self.dim {
                let d = shifts[k] - shifts[j];
                for (i, t) in self.terms.iter().enumerate() {
                    let v = &t[(j, k)];
                    if v.is_zero() {
                        continue;
                    }
                    let order = i as i64 + d;
                    if order < 0 {
                        return Err(SeriesError::NegativeOrder { row: j, col: k, order });
                    }
                    if (order as usize) <= n {
                        terms[order as usize][(j, k)] = v.clone();
                    }
                }
            }
            if n >= 1 && shifts[j] != 0 {
                terms[1][(j, j)] = terms[1][(j, j)].clone() + F::from_int(shifts[j]);
            }
        }
        Ok(MatSeries { dim: self.dim, terms })
    }

    /// Restriction to the coordinates `idx`.
    pub fn block(&self, idx: &[usize]) -> Self {
        MatSeries { dim: idx.len(), terms: self.terms.iter().map(|t| t.select(idx, idx)).collect() }
    }

    /// Block of rows `rows` and columns `cols` of each coefficient.
    pub fn sub_block(&self, rows: &[usize], cols: &[usize]) -> Vec<Matrix<F>> {
        self.terms.iter().map(|t| t.select(rows, cols)).collect()
    }

    pub fn block_diag(blocks: &[Self]) -> Self {
        let n = blocks.iter().map(Self::precision).min().unwrap_or(0);
        let dim = blocks.iter().map(|b| b.dim).sum();
        let terms = (0..=n)
            .map(|i| Matrix::block_diag(&blocks.iter().map(|b| b.terms[i].clone()).collect::<Vec<_>>()))
            .collect();
        MatSeries { dim, terms }
    }
}

/// `Σ_i M_i u^{valuation + i}`, exact through order `valuation + len - 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentMatrix<F> {
    pub valuation: i64,
    pub terms: Vec<Matrix<F>>,
}

impl<F: Scalar> LaurentMatrix<F> {
    pub fn identity(dim: usize, precision: usize) -> Self {
        Self::from_series(&MatSeries::identity(dim, precision))
    }

    pub fn from_series(s: &MatSeries<F>) -> Self {
        LaurentMatrix { valuation: 0, terms: s.terms.clone() }
    }

    /// `diag(u^{s_j})`.
    pub fn shear(shifts: &[i64], precision: usize) -> Self {
        let n = shifts.len();
        let lo = shifts.iter().copied().min().unwrap_or(0);
        let hi = shifts.iter().copied().max().unwrap_or(0);
        let len = (hi - lo) as usize + precision + 1;
        let mut terms = vec![Matrix::zeros(n, n); len];
        for (j, &s) in shifts.iter().enumerate() {
            terms[(s - lo) as usize][(j, j)] = F::one();
        }
        LaurentMatrix { valuation: lo, terms }
    }

    pub fn dim(&self) -> usize {
        self.terms.first().map_or(0, Matrix::rows)
    }

    /// Highest exact order.
    pub fn window(&self) -> (i64, i64) {
        (self.valuation, self.valuation + self.terms.len() as i64 - 1)
    }

    pub fn coeff(&self, order: i64) -> Matrix<F> {
        let i = order - self.valuation;
        if i < 0 || i as usize >= self.terms.len() {
            Matrix::zeros(self.dim(), self.dim())
        } else {
            self.terms[i as usize].clone()
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let len = self.terms.len().min(other.terms.len());
        let dim = self.dim();
        let terms = (0..len)
            .map(|k| {
                (0..=k).fold(Matrix::zeros(dim, dim), |acc, i| &acc + &(&self.terms[i] * &other.terms[k - i]))
            })
            .collect();
        LaurentMatrix { valuation: self.valuation + other.valuation, terms }
    }

    pub fn mul_const(&self, m: &Matrix<F>) -> Self {
        LaurentMatrix { valuation: self.valuation, terms: self.terms.iter().map(|t| t * m).collect() }
    }

    /// Keeps the orders up to `order`.
    pub fn truncate_at(&self, order: i64) -> Self {
        let keep = (order - self.valuation + 1).clamp(0, self.terms.len() as i64) as usize;
        LaurentMatrix { valuation: self.valuation, terms: self.terms[..keep.max(1)].to_vec() }
    }
}

/// A lattice basis over the original one, with the number of precision
/// orders spent to reach it.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeBasis<F> {
    pub matrix: LaurentMatrix<F>,
    pub precision_consumed: usize,
}

impl<F: Scalar> LatticeBasis<F> {
    pub fn identity(dim: usize, precision: usize) -> Self {
        LatticeBasis { matrix: LaurentMatrix::identity(dim, precision), precision_consumed: 0 }
    }

    pub fn then(&self, step: &LaurentMatrix<F>, consumed: usize) -> Self {
        LatticeBasis { matrix: self.matrix.mul(step), precision_consumed: self.precision_consumed + consumed }
    }
}

impl<F: Scalar> std::fmt::Display for MatSeries<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (i, t) in self.terms.iter().enumerate() {
            if t.is_zero() {
                continue;
            }
            writeln!(f, "u^{i}:")?;
            write!(f, "{t}")?;
        }
        Ok(())
    }
}
