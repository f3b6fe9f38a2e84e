use crate::field::matrix::Matrix;
use crate::field::Scalar;
use crate::series::{LatticeBasis, LaurentMatrix, MatSeries, SeriesError};

use super::MicrodiffError;

/// A block brought to the form `t - c = R·u + O(u²)`.
#[derive(Clone, Debug)]
pub struct RegularForm<F> {
    pub residue: Matrix<F>,
    /// The twisted action on the saturated lattice; its constant term is 0.
    pub series: MatSeries<F>,
    pub basis: LatticeBasis<F>,
    pub steps: usize,
}

/// Saturates the lattice under `u⁻¹(t - c)`. Each step adjoins
/// `u⁻¹·image(A₀)`: conjugate so that the image is spanned by the first
/// coordinates, then shear those by `u⁻¹`.
pub fn regularize<F: Scalar>(block: &MatSeries<F>, c: &F, nvars: usize) -> Result<RegularForm<F>, MicrodiffError> {
    let d = block.dim();
    let cap = d + nvars + 2;
    let mut cur = block.twist(c);
    if !cur.coeff(0).pow(d).is_zero() {
        return Err(MicrodiffError::InvalidBlock(format!("constant term minus {c} is not nilpotent")));
    }
    let mut basis = LatticeBasis::identity(d, cur.precision());
    let mut steps = 0;
    while !cur.coeff(0).is_zero() {
        steps += 1;
        if steps > cap {
            return Err(MicrodiffError::NoStabilization { steps: cap });
        }
        let image = cur.coeff(0).image();
        let r = image.cols();
        let q = image.complete_basis();
        let qinv = q.inverse().expect("completed basis");
        let shifts: Vec<i64> = (0..d).map(|j| if j < r { -1 } else { 0 }).collect();
        let conj = cur.conjugate_const(&q, &qinv);
        cur = match conj.shear(&shifts) {
            Ok(s) if s.precision() >= 1 => s,
            Ok(_) | Err(SeriesError::PrecisionExhausted) => {
                return Err(MicrodiffError::NoStabilization { steps });
            }
            Err(e) => return Err(MicrodiffError::InvalidBlock(e.to_string())),
        };
        let lo = LaurentMatrix::from_series(&MatSeries::constant(q, cur.precision()));
        basis = basis.then(&lo.mul(&LaurentMatrix::shear(&shifts, cur.precision())), 1);
    }
    if d > 0 && cur.precision() < 1 {
        return Err(MicrodiffError::NoStabilization { steps });
    }
    let residue = if d == 0 { Matrix::zeros(0, 0) } else { cur.coeff(1).clone() };
    Ok(RegularForm { residue, series: cur, basis, steps })
}
