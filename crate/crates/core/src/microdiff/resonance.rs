use std::collections::BTreeMap;

use crate::field::matrix::{solve_sylvester, Matrix};
use crate::field::rational::frac;
use crate::field::spectrum::{split_in_field, SpectralSplit};
use crate::field::{Scalar, Q};
use crate::series::{LatticeBasis, LaurentMatrix, MatSeries, SeriesError};

use super::MicrodiffError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ResonanceMode {
    /// Shear until no two eigenvalues differ by a nonzero integer, each
    /// coset moved to its minimal representative.
    Minimal,
    /// Keep the residue when the couplings at resonant orders can be
    /// removed; otherwise fall back to `Minimal`.
    Preserve,
}

#[derive(Clone, Debug)]
pub struct Desresonated<F> {
    pub residue: Matrix<F>,
    pub series: MatSeries<F>,
    pub basis: LatticeBasis<F>,
    /// Sum of all shear exponents; the trace of the residue moves by this.
    pub total_shift: i64,
    pub mode: ResonanceMode,
}

/// Spectral split of a residue whose eigenvalues must all be rational.
pub fn rational_spectrum<F: Scalar>(r: &Matrix<F>) -> Result<(SpectralSplit<F>, Vec<Q>), MicrodiffError> {
    let split = split_in_field(r);
    if let Some(c) = &split.conjugates {
        return Err(MicrodiffError::NonrationalExponent(format!("residue eigenvalues are roots of {}", c.factor)));
    }
    let values = split
        .spaces
        .iter()
        .map(|s| s.value.to_rational().ok_or_else(|| MicrodiffError::NonrationalExponent(s.value.to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((split, values))
}

fn block_offsets(sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut at = 0;
    sizes
        .iter()
        .map(|&s| {
            let idx = (at..at + s).collect();
            at += s;
            idx
        })
        .collect()
}

fn shear_err(e: SeriesError, needed: usize, available: usize) -> MicrodiffError {
    match e {
        SeriesError::PrecisionExhausted => MicrodiffError::PrecisionExhausted { needed, available },
        other => MicrodiffError::InvalidBlock(other.to_string()),
    }
}

/// Removes resonances from the action `A(u) = R·u + O(u²)` of a saturated
/// lattice.
pub fn desresonate_series<F: Scalar>(a: &MatSeries<F>, mode: ResonanceMode) -> Result<Desresonated<F>, MicrodiffError> {
    if !a.coeff(0).is_zero() {
        return Err(MicrodiffError::InvalidBlock("lattice is not saturated".into()));
    }
    let out = match mode {
        ResonanceMode::Minimal => minimal(a)?,
        ResonanceMode::Preserve => match preserve(a)? {
            Some(d) => d,
            None => minimal(a)?,
        },
    };
    if a.dim() > 0 {
        let lhs = out.residue.trace();
        let rhs = a.coeff(1).trace() + F::from_int(out.total_shift);
        if lhs != rhs {
            return Err(MicrodiffError::InvalidBlock(format!("exponent sum {lhs} does not reconcile with {rhs}")));
        }
    }
    Ok(out)
}

fn minimal<F: Scalar>(a: &MatSeries<F>) -> Result<Desresonated<F>, MicrodiffError> {
    let d = a.dim();
    let mut cur = a.clone();
    let mut basis = LatticeBasis::identity(d, a.precision());
    let mut total_shift = 0;
    loop {
        if d == 0 {
            break;
        }
        if cur.precision() < 1 {
            return Err(MicrodiffError::PrecisionExhausted { needed: 1, available: 0 });
        }
        let (split, values) = rational_spectrum(cur.coeff(1))?;
        let mut cosets: BTreeMap<Q, Vec<usize>> = BTreeMap::new();
        for (k, v) in values.iter().enumerate() {
            cosets.entry(frac(v)).or_default().push(k);
        }
        let Some(members) = cosets.values().find(|m| m.len() > 1) else {
            break;
        };
        let top = *members.iter().max_by(|&&x, &&y| values[x].cmp(&values[y])).expect("nonempty");
        let p = split.change_of_basis(d);
        let pinv = p.inverse().expect("eigenspaces span");
        let offsets = block_offsets(&split.block_sizes());
        let mut shifts = vec![0i64; d];
        for &j in &offsets[top] {
            shifts[j] = -1;
        }
        let available = cur.precision();
        cur = cur.conjugate_const(&p, &pinv).shear(&shifts).map_err(|e| shear_err(e, 2, available))?;
        if cur.precision() < 1 {
            return Err(MicrodiffError::PrecisionExhausted { needed: 2, available });
        }
        total_shift -= offsets[top].len() as i64;
        let step = LaurentMatrix::from_series(&MatSeries::constant(p, cur.precision()))
            .mul(&LaurentMatrix::shear(&shifts, cur.precision()));
        basis = basis.then(&step, 1);
    }
    let residue = if d == 0 { Matrix::zeros(0, 0) } else { cur.coeff(1).clone() };
    Ok(Desresonated { residue, series: cur, basis, total_shift, mode: ResonanceMode::Minimal })
}

/// `None` when a coupling survives at a resonant order.
fn preserve<F: Scalar>(a: &MatSeries<F>) -> Result<Option<Desresonated<F>>, MicrodiffError> {
    let d = a.dim();
    let identity = || Desresonated {
        residue: if d == 0 { Matrix::zeros(0, 0) } else { a.coeff(1).clone() },
        series: a.clone(),
        basis: LatticeBasis::identity(d, a.precision()),
        total_shift: 0,
        mode: ResonanceMode::Preserve,
    };
    if d == 0 {
        return Ok(Some(identity()));
    }
    if a.precision() < 1 {
        return Err(MicrodiffError::PrecisionExhausted { needed: 1, available: 0 });
    }
    let (split, values) = rational_spectrum(a.coeff(1))?;
    let mut spread = 0i64;
    for x in &values {
        for y in &values {
            let diff = x - y;
            if diff.is_integer() {
                spread = spread.max(diff.to_integer().try_into().unwrap_or(i64::MAX));
            }
        }
    }
    if spread == 0 {
        return Ok(Some(identity()));
    }
    let spread = spread as usize;
    if a.precision() < spread + 1 {
        return Err(MicrodiffError::PrecisionExhausted { needed: spread + 1, available: a.precision() });
    }
    let p = split.change_of_basis(d);
    let pinv = p.inverse().expect("eigenspaces span");
    let mut cur = a.conjugate_const(&p, &pinv);
    let mut gauge = MatSeries::constant(p, a.precision());
    let offsets = block_offsets(&split.block_sizes());
    let r = cur.coeff(1).clone();
    let diag: Vec<Matrix<F>> = offsets.iter().map(|idx| r.select(idx, idx)).collect();
    for j in 1..=spread {
        let next = cur.coeff(j + 1).clone();
        let mut x = Matrix::zeros(d, d);
        let mut any = false;
        for (ka, ia) in offsets.iter().enumerate() {
            for (kb, ib) in offsets.iter().enumerate() {
                if ka == kb {
                    continue;
                }
                let rhs = -&next.select(ia, ib);
                if rhs.is_zero() {
                    continue;
                }
                if &values[kb] - &values[ka] == Q::from_integer((j as i64).into()) {
                    return Ok(None);
                }
                let lhs = diag[ka].shift(&F::from_int(-(j as i64)));
                x.set_block(ia[0], ib[0], &solve_sylvester(&lhs, &diag[kb], &rhs)?);
                any = true;
            }
        }
        if any {
            let g = MatSeries::elementary(x, j, a.precision());
            cur = cur.gauge(&g).map_err(|e| MicrodiffError::InvalidBlock(e.to_string()))?;
            gauge = gauge.mul(&g);
        }
    }
    Ok(Some(Desresonated {
        residue: cur.coeff(1).clone(),
        series: cur,
        basis: LatticeBasis { matrix: LaurentMatrix::from_series(&gauge), precision_consumed: 0 },
        total_shift: 0,
        mode: ResonanceMode::Preserve,
    }))
}

/// Removes resonances from a residue viewed as the action `t = R·u + u²∂_u`.
pub fn desresonate<F: Scalar>(r: &Matrix<F>) -> Result<(Matrix<F>, LatticeBasis<F>), MicrodiffError> {
    let d = r.rows();
    let (_, values) = rational_spectrum(r)?;
    let mut spread = 0usize;
    for x in &values {
        for y in &values {
            let diff = x - y;
            if diff.is_integer() {
                spread = spread.max(diff.to_integer().try_into().unwrap_or(0));
            }
        }
    }
    let precision = 2 + d * (spread + 1);
    let mut a = MatSeries::zeros(d, precision);
    *a.coeff_mut(1) = r.clone();
    let out = desresonate_series(&a, ResonanceMode::Minimal)?;
    Ok((out.residue, out.basis))
}
