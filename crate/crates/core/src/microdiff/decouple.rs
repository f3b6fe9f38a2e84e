use crate::field::matrix::{solve_sylvester, Matrix};
use crate::field::spectrum::split_in_field;
use crate::field::upoly::UPoly;
use crate::field::Scalar;
use crate::series::MatSeries;

use super::MicrodiffError;

/// One decoupled block per eigenvalue of `A₀`, in the order returned by the
/// spectral split, plus the block of the unsplit cofactor if any.
#[derive(Clone, Debug)]
pub struct Decoupled<F> {
    pub blocks: Vec<(F, MatSeries<F>)>,
    pub conjugate: Option<(UPoly<F>, MatSeries<F>)>,
    /// Columns of the total gauge over the input basis.
    pub gauge: MatSeries<F>,
}

impl<F: Scalar> Decoupled<F> {
    /// All blocks, the conjugate one last, reassembled block-diagonally.
    pub fn reassemble(&self) -> MatSeries<F> {
        let mut parts: Vec<MatSeries<F>> = self.blocks.iter().map(|(_, b)| b.clone()).collect();
        if let Some((_, c)) = &self.conjugate {
            parts.push(c.clone());
        }
        MatSeries::block_diag(&parts)
    }
}

pub fn decouple<F: Scalar>(a: &MatSeries<F>) -> Result<Decoupled<F>, MicrodiffError> {
    let n = a.dim();
    let precision = a.precision();
    let split = split_in_field(a.coeff(0));
    let sizes = split.block_sizes();
    let largest = sizes.iter().copied().max().unwrap_or(0);
    if n > 0 && precision < largest + 2 {
        return Err(MicrodiffError::PrecisionExhausted { needed: largest + 2, available: precision });
    }
    let p0 = split.change_of_basis(n);
    let p0inv = p0.inverse().expect("eigenspaces span");
    let mut cur = a.conjugate_const(&p0, &p0inv);
    let mut gauge = MatSeries::constant(p0, precision);

    let mut offsets = Vec::with_capacity(sizes.len());
    let mut at = 0;
    for &s in &sizes {
        offsets.push((at..at + s).collect::<Vec<_>>());
        at += s;
    }
    if sizes.len() > 1 {
        let a0 = cur.coeff(0).clone();
        let diag: Vec<Matrix<F>> = offsets.iter().map(|idx| a0.select(idx, idx)).collect();
        for i in 1..=precision {
            let ai = cur.coeff(i);
            let mut x = Matrix::zeros(n, n);
            let mut any = false;
            for (ka, ia) in offsets.iter().enumerate() {
                for (kb, ib) in offsets.iter().enumerate() {
                    if ka == kb {
                        continue;
                    }
                    let rhs = -&ai.select(ia, ib);
                    if rhs.is_zero() {
                        continue;
                    }
                    let xab = solve_sylvester(&diag[ka], &diag[kb], &rhs)?;
                    x.set_block(ia[0], ib[0], &xab);
                    any = true;
                }
            }
            if any {
                let p = MatSeries::elementary(x, i, precision);
                cur = cur.gauge(&p).map_err(|_| MicrodiffError::InvalidBlock("singular gauge".into()))?;
                gauge = gauge.mul(&p);
            }
        }
    }

    let mut blocks = Vec::new();
    for (s, idx) in split.spaces.iter().zip(&offsets) {
        blocks.push((s.value.clone(), cur.block(idx)));
    }
    let conjugate = split.conjugates.map(|c| {
        let idx = offsets.last().expect("conjugate block").clone();
        (c.factor, cur.block(&idx))
    });
    Ok(Decoupled { blocks, conjugate, gauge })
}
