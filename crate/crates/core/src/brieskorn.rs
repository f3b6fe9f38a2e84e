//! The t-action on the completed Brieskorn lattice over the staircase basis.
//!
//! One reduction step rewrites `g·dx` with `g = r + Σ q_i f_i` as
//! `r·dx + u·(Σ_i ∂_i q_i)·dx`. Iterating on the carry gives the coefficients
//! of `u^k` exactly, order by order.

use std::sync::Arc;

use rayon::prelude::*;

use crate::field::matrix::Matrix;
use crate::field::Scalar;
use crate::groebner::{buchberger, jacobian, milnor_data, GroebnerError, MilnorData};
use crate::mpoly::{MPoly, Monomial};
use crate::series::MatSeries;

/// `orders[i][j]` is the coefficient of `u^i` on the staircase element `b_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct ReductionResult<F> {
    pub orders: Vec<Vec<F>>,
}

impl<F: Scalar> ReductionResult<F> {
    pub fn precision(&self) -> usize {
        self.orders.len() - 1
    }

    pub fn coefficient(&self, i: usize, j: usize) -> &F {
        &self.orders[i][j]
    }
}

pub fn reduce_form<F: Scalar>(g: &MPoly<F>, md: &MilnorData<F>, precision: usize) -> ReductionResult<F> {
    let mu = md.mu();
    let mut orders = Vec::with_capacity(precision + 1);
    let mut carry = g.clone();
    for _ in 0..=precision {
        if carry.is_zero() {
            orders.push(vec![F::zero(); mu]);
            continue;
        }
        let (r, q) = md.gb.normal_form_with_quotients(&carry);
        orders.push(md.coordinates(&r));
        carry = q
            .iter()
            .enumerate()
            .fold(MPoly::zero(g.vars().clone()), |acc, (i, qi)| &acc + &qi.partial_derivative(i));
    }
    ReductionResult { orders }
}

/// A free lattice with t-action `A(u) + u²∂_u`.
#[derive(Clone, Debug, PartialEq)]
pub struct MicroModule<F> {
    pub series: MatSeries<F>,
    pub labels: Vec<String>,
    /// Number of variables of the function, zero for synthetic modules.
    pub nvars: usize,
}

impl<F: Scalar> MicroModule<F> {
    pub fn synthetic(series: MatSeries<F>) -> Self {
        let labels = (0..series.dim()).map(|j| format!("e{}", j + 1)).collect();
        MicroModule { series, labels, nvars: 0 }
    }

    pub fn dim(&self) -> usize {
        self.series.dim()
    }

    pub fn precision(&self) -> usize {
        self.series.precision()
    }
}

/// Groebner basis and staircase of the Jacobian ideal of `f`.
pub fn jacobian_data<F: Scalar>(f: &MPoly<F>) -> Result<MilnorData<F>, GroebnerError> {
    milnor_data(Arc::new(buchberger(&jacobian(f))))
}

pub fn t_matrix<F: Scalar>(f: &MPoly<F>, precision: usize) -> Result<MicroModule<F>, GroebnerError> {
    let md = jacobian_data(f)?;
    Ok(t_matrix_with(f, &md, precision))
}

/// Columns are `reduce_form(f·b_j)`.
pub fn t_matrix_with<F: Scalar>(f: &MPoly<F>, md: &MilnorData<F>, precision: usize) -> MicroModule<F> {
    let mu = md.mu();
    let columns: Vec<ReductionResult<F>> = md
        .staircase
        .par_iter()
        .map(|b| reduce_form(&f.mul_monomial(b), md, precision))
        .collect();
    let terms = (0..=precision)
        .map(|i| Matrix::from_fn(mu, mu, |r, c| columns[c].orders[i][r].clone()))
        .collect();
    let labels = md.staircase.iter().map(|m| monomial_label(f.vars(), m)).collect();
    let series = if mu == 0 { MatSeries::zeros(0, precision) } else { MatSeries::new(terms) };
    MicroModule { series, labels, nvars: f.nvars() }
}

fn monomial_label(vars: &[String], m: &Monomial) -> String {
    let p: MPoly<crate::Q> = MPoly::term(Arc::new(vars.to_vec()), m.clone(), crate::Q::from_integer(1.into()));
    p.to_string()
}

/// Multiplication by `f` on the staircase basis, from plain normal forms.
pub fn multiplication_matrix<F: Scalar>(f: &MPoly<F>, md: &MilnorData<F>) -> Matrix<F> {
    let mu = md.mu();
    let cols: Vec<Vec<F>> = md
        .staircase
        .iter()
        .map(|b| md.coordinates(&md.gb.normal_form(&f.mul_monomial(b))))
        .collect();
    Matrix::from_columns(mu, &cols)
}

/// For quasi-homogeneous `f` with unique weights `w`, the expected action
/// `u·diag(Σ(ν_i+1)w_i)`; `None` otherwise.
pub fn quasi_homogeneous_action<F: Scalar>(f: &MPoly<F>, md: &MilnorData<F>) -> Option<Vec<F>> {
    let w = f.quasi_homogeneous_weights()?;
    Some(
        md.staircase
            .iter()
            .map(|b| {
                b.exponents()
                    .iter()
                    .zip(&w)
                    .fold(F::zero(), |acc, (&e, wi)| acc + F::from_int(e as i64 + 1) * wi.clone())
            })
            .collect(),
    )
}

/// Whether a module matches the quasi-homogeneous prediction, when there
/// is one.
pub fn check_quasi_homogeneous<F: Scalar>(f: &MPoly<F>, md: &MilnorData<F>, module: &MicroModule<F>) -> Option<bool> {
    let ell = quasi_homogeneous_action(f, md)?;
    let s = &module.series;
    let ok = s.terms().iter().enumerate().all(|(i, t)| match i {
        1 => *t == Matrix::diagonal(&ell),
        _ => t.is_zero(),
    });
    Some(ok)
}
