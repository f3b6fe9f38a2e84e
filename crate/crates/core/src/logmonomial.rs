//! Monomial functions with a rank-one twist along a normal crossing divisor.
//!
//! For `f = Π_{i∈J} x_i^{e_i}` and residues `α_i` along `x_i = 0`, `i ∈ J'`,
//! the cohomology is spanned by the monomials `x^ν`, `ν ∈ ℕ^J`, with
//! `ν_i + α_i = (e_i/e_{i0})(ν_{i0} + α_{i0})`, each on which `t∂_t` acts by
//! `(ν_{i0} + α_{i0})/e_{i0}`, times a wedge factor counted by `C(|J'|-1, p)`.

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::field::Q;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum NcError {
    #[error("J is empty")]
    EmptyJ,
    #[error("neither an eigenvalue window nor a degree bound was given")]
    WindowUnbounded,
    #[error("invalid normal-crossing problem: {0}")]
    InvalidProblem(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct NCProblem {
    pub n: usize,
    /// Indices of the variables in `f`, ascending.
    pub j: Vec<usize>,
    /// Indices of the divisor components, ascending, containing `j`.
    pub j_prime: Vec<usize>,
    /// Per variable; only entries in `j` are used.
    pub exponents: Vec<u32>,
    /// Per variable; only entries in `j_prime` are used.
    pub residues: Vec<Q>,
    /// Half-open `[a, b)`.
    pub window: Option<(Q, Q)>,
    /// Bound on the total degree of the monomials in `x_J`.
    pub degree_bound: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct NCEntry {
    pub eigenvalue: Q,
    pub degree: usize,
    pub multiplicity: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NCSpectrum {
    pub i0: usize,
    /// Sorted by eigenvalue, then degree. Zero multiplicities are omitted.
    pub entries: Vec<NCEntry>,
}

impl NCSpectrum {
    /// Multiplicities per degree at one eigenvalue.
    pub fn dims_at(&self, eigenvalue: &Q, degrees: usize) -> Vec<u64> {
        let mut out = vec![0; degrees];
        for e in self.entries.iter().filter(|e| &e.eigenvalue == eigenvalue) {
            out[e.degree] += e.multiplicity;
        }
        out
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

impl NCProblem {
    pub fn validate(&self) -> Result<(), NcError> {
        if self.j.is_empty() {
            return Err(NcError::EmptyJ);
        }
        let bad = |m: String| Err(NcError::InvalidProblem(m));
        if self.exponents.len() != self.n || self.residues.len() != self.n {
            return bad("exponent and residue lists must have one entry per variable".into());
        }
        for list in [&self.j, &self.j_prime] {
            if list.windows(2).any(|w| w[0] >= w[1]) || list.iter().any(|&i| i >= self.n) {
                return bad("index sets must be strictly ascending variable indices".into());
            }
        }
        if let Some(&i) = self.j.iter().find(|i| !self.j_prime.contains(i)) {
            return bad(format!("J must be contained in J' (index {i})"));
        }
        if let Some(&i) = self.j.iter().find(|&&i| self.exponents[i] == 0) {
            return bad(format!("exponent of variable {i} must be at least 1"));
        }
        let one = Q::from_integer(1.into());
        if let Some(&i) = self.j_prime.iter().find(|&&i| self.residues[i] < Q::zero() || self.residues[i] >= one) {
            return bad(format!("residue of variable {i} must lie in [0, 1)"));
        }
        if self.window.is_none() && self.degree_bound.is_none() {
            return Err(NcError::WindowUnbounded);
        }
        Ok(())
    }

    fn wedge_factors(&self) -> Vec<u64> {
        let k = self.j_prime.len() as u64 - 1;
        (0..=k).map(|p| binomial(k, p)).collect()
    }

    fn twisted_off_j(&self) -> bool {
        self.j_prime.iter().any(|i| !self.j.contains(i) && !self.residues[*i].is_zero())
    }

    /// The full monomial `ν` over `J` for a given `ν_{i0}`, if it lies in
    /// the lattice.
    fn solve_monomial(&self, i0: usize, nu0: u64) -> Option<(Q, u64)> {
        let e0 = Q::from_integer(self.exponents[i0].into());
        let lambda = (Q::from_integer(nu0.into()) + self.residues[i0].clone()) / e0;
        let mut degree = nu0;
        for &i in self.j.iter().filter(|&&i| i != i0) {
            let nu = Q::from_integer(self.exponents[i].into()) * lambda.clone() - self.residues[i].clone();
            if !nu.is_integer() || nu < Q::zero() {
                return None;
            }
            degree += nu.to_integer().to_u64()?;
        }
        Some((lambda, degree))
    }

    /// Range of `ν_{i0}` for the window `[a, b)`.
    fn nu_range(&self, i0: usize) -> (u64, u64) {
        let e0 = Q::from_integer(self.exponents[i0].into());
        let a0 = &self.residues[i0];
        let (mut lo, mut hi) = (0u64, u64::MAX);
        if let Some((a, b)) = &self.window {
            let l = (a * &e0 - a0).ceil().to_integer();
            lo = if l.is_negative() { 0 } else { l.to_u64().unwrap_or(u64::MAX) };
            let h = b * &e0 - a0;
            // ν < h
            let top = h.ceil().to_integer() - num_bigint::BigInt::from(1);
            hi = if top.is_negative() { return (1, 0) } else { top.to_u64().unwrap_or(u64::MAX) };
        }
        if let Some(d) = self.degree_bound {
            hi = hi.min(d);
        }
        (lo, hi)
    }
}

/// Uses the smallest index in `J` as `i0`.
pub fn nc_spectrum(prob: &NCProblem) -> Result<NCSpectrum, NcError> {
    prob.validate()?;
    nc_spectrum_at(prob, prob.j[0])
}

pub fn nc_spectrum_at(prob: &NCProblem, i0: usize) -> Result<NCSpectrum, NcError> {
    prob.validate()?;
    if !prob.j.contains(&i0) {
        return Err(NcError::InvalidProblem(format!("i0 = {i0} is not in J")));
    }
    let mut entries = Vec::new();
    if !prob.twisted_off_j() {
        let wedge = prob.wedge_factors();
        let (lo, hi) = prob.nu_range(i0);
        let mut nu0 = lo;
        while nu0 <= hi {
            if let Some((lambda, degree)) = prob.solve_monomial(i0, nu0) {
                let in_bound = prob.degree_bound.is_none_or(|d| degree <= d);
                if in_bound {
                    for (p, &w) in wedge.iter().enumerate() {
                        entries.push(NCEntry { eigenvalue: lambda.clone(), degree: p, multiplicity: w });
                    }
                }
            }
            nu0 += 1;
        }
    }
    entries.sort();
    Ok(NCSpectrum { i0, entries })
}

/// Dimension per degree of the `α`-eigenspace, `α ∈ [0, 1)`.
pub fn psi_stalk_dims(prob: &NCProblem, alpha: &Q) -> Result<Vec<u64>, NcError> {
    let mut probe = prob.clone();
    probe.degree_bound = None;
    probe.window = Some((alpha.clone(), alpha.clone()));
    probe.validate()?;
    if *alpha < Q::zero() || *alpha >= Q::from_integer(1.into()) {
        return Err(NcError::InvalidProblem("alpha must lie in [0, 1)".into()));
    }
    let mut dims = vec![0; prob.j_prime.len()];
    if prob.twisted_off_j() {
        return Ok(dims);
    }
    let i0 = prob.j[0];
    let nu0 = alpha * Q::from_integer(prob.exponents[i0].into()) - &prob.residues[i0];
    if !nu0.is_integer() || nu0 < Q::zero() {
        return Ok(dims);
    }
    if prob.solve_monomial(i0, nu0.to_integer().to_u64().unwrap_or(u64::MAX)).is_some() {
        dims = prob.wedge_factors();
    }
    Ok(dims)
}

/// The least common multiple of the exponents, the period of the spectrum.
pub fn period(prob: &NCProblem) -> u64 {
    prob.j.iter().fold(1u64, |acc, &i| acc.lcm(&(prob.exponents[i] as u64)))
}
