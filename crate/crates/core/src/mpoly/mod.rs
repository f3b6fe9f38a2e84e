//! Sparse multivariate polynomials in degree-reverse-lexicographic order.

mod parse;

pub use parse::{parse, ParseError};

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;


use crate::field::Scalar;

/// Exponent vector, ordered by degrevlex with the first variable largest.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Panics on exponent overflow.
    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.checked_add(*b).expect("exponent overflow"))
                .collect(),
        )
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(b, a)| b - a).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// The single variable index when `self` is a pure power `x_i^k`, k ≥ 1.
    pub fn pure_power_var(&self) -> Option<usize> {
        let mut nz = self.0.iter().enumerate().filter(|(_, &e)| e > 0);
        let (i, _) = nz.next()?;
        nz.next().is_none().then_some(i)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            for (a, b) in self.0.iter().zip(&other.0).rev() {
                if a != b {
                    // smaller exponent in the last differing variable wins
                    return b.cmp(a);
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial over `F` in a fixed, named list of variables. No zero
/// coefficients are stored.
#[derive(Clone, Debug, PartialEq)]
pub struct MPoly<F> {
    vars: Arc<Vec<String>>,
    terms: BTreeMap<Monomial, F>,
}

impl<F: Scalar> MPoly<F> {
    pub fn zero(vars: Arc<Vec<String>>) -> Self {
        MPoly { vars, terms: BTreeMap::new() }
    }

    pub fn constant(vars: Arc<Vec<String>>, c: F) -> Self {
        let n = vars.len();
        Self::term(vars, Monomial::one(n), c)
    }

    pub fn one(vars: Arc<Vec<String>>) -> Self {
        Self::constant(vars, F::one())
    }

    pub fn var(vars: Arc<Vec<String>>, i: usize) -> Self {
        let n = vars.len();
        Self::term(vars, Monomial::var(n, i), F::one())
    }

    pub fn term(vars: Arc<Vec<String>>, m: Monomial, c: F) -> Self {
        assert_eq!(m.nvars(), vars.len(), "monomial length mismatch");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MPoly { vars, terms }
    }

    pub fn from_terms(vars: Arc<Vec<String>>, terms: impl IntoIterator<Item = (Monomial, F)>) -> Self {
        let mut p = Self::zero(vars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn vars(&self) -> &Arc<Vec<String>> {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &F)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> F {
        self.terms.get(m).cloned().unwrap_or_else(F::zero)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &F)> {
        self.terms.iter().next_back()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.keys().next_back()
    }

    pub fn total_degree(&self) -> u64 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, m: Monomial, c: F) {
        if c.is_zero() {
            return;
        }
        assert_eq!(m.nvars(), self.vars.len(), "monomial length mismatch");
        match self.terms.get_mut(&m) {
            Some(v) => {
                let s = v.clone() + c;
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    /// `self += c · m · other`.
    pub fn add_scaled(&mut self, c: &F, m: &Monomial, other: &MPoly<F>) {
        for (om, oc) in &other.terms {
            self.add_term(m.mul(om), c.clone() * oc.clone());
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero(self.vars.clone());
        }
        MPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v.clone() * c.clone())).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        MPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(k, v)| (k.mul(m), v.clone())).collect(),
        }
    }

    /// Scales so that the leading coefficient is one; returns the factor used.
    pub fn make_monic(&mut self) -> F {
        let Some((_, lc)) = self.leading_term() else {
            return F::one();
        };
        let inv = lc.inv();
        for v in self.terms.values_mut() {
            *v = v.clone() * inv.clone();
        }
        inv
    }

    pub fn partial_derivative(&self, i: usize) -> Self {
        assert!(i < self.nvars(), "variable index out of range");
        let mut out = Self::zero(self.vars.clone());
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[i] -= 1;
            out.add_term(Monomial(exps), c.clone() * F::from_int(e as i64));
        }
        out
    }

    pub fn evaluate(&self, point: &[F]) -> F {
        assert_eq!(point.len(), self.nvars());
        self.terms.iter().fold(F::zero(), |acc, (m, c)| {
            let v = m.0.iter().zip(point).fold(c.clone(), |v, (&e, x)| {
                (0..e).fold(v, |v, _| v * x.clone())
            });
            acc + v
        })
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.vars.clone());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn map_coeffs<G: Scalar>(&self, f: impl Fn(&F) -> G) -> MPoly<G> {
        MPoly::from_terms(self.vars.clone(), self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    /// Weights `w` with `Σ ν_i w_i = 1` on every monomial, when they exist
    /// and are unique.
    pub fn quasi_homogeneous_weights(&self) -> Option<Vec<F>> {
        use crate::field::matrix::Matrix;
        let n = self.nvars();
        if self.is_zero() {
            return None;
        }
        let rows: Vec<Vec<F>> = self
            .terms
            .keys()
            .map(|m| {
                let mut r: Vec<F> = m.0.iter().map(|&e| F::from_int(e as i64)).collect();
                r.push(F::one());
                r
            })
            .collect();
        let aug = Matrix::from_rows(rows);
        let rref = aug.rref();
        // consistent and of full rank n
        if rref.pivots.len() != n || rref.pivots.contains(&n) {
            return None;
        }
        Some((0..n).map(|i| rref.matrix[(i, n)].clone()).collect())
    }

    fn check_vars(&self, other: &Self) {
        assert!(
            Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars,
            "polynomials over different variable lists"
        );
    }
}

impl<F: Scalar> Add for &MPoly<F> {
    type Output = MPoly<F>;
    fn add(self, rhs: &MPoly<F>) -> MPoly<F> {
        self.check_vars(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<F: Scalar> Sub for &MPoly<F> {
    type Output = MPoly<F>;
    fn sub(self, rhs: &MPoly<F>) -> MPoly<F> {
        self.check_vars(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<F: Scalar> Mul for &MPoly<F> {
    type Output = MPoly<F>;
    fn mul(self, rhs: &MPoly<F>) -> MPoly<F> {
        self.check_vars(rhs);
        let mut out = MPoly::zero(self.vars.clone());
        for (m, c) in &self.terms {
            out.add_scaled(c, m, rhs);
        }
        out
    }
}

impl<F: Scalar> Neg for &MPoly<F> {
    type Output = MPoly<F>;
    fn neg(self) -> MPoly<F> {
        self.scale(&-F::one())
    }
}

impl<F: Scalar> fmt::Display for MPoly<F> {
    /// Leading term first; coefficients print exactly.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let text = c.to_string();
            let rational = c.to_rational().is_some();
            let (neg, body) = match text.strip_prefix('-') {
                Some(rest) if rational => (true, rest.to_string()),
                _ => (false, text),
            };
            let body = if rational { body } else { format!("({body})") };
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mono = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { self.vars[i].clone() } else { format!("{}^{}", self.vars[i], e) })
                .collect::<Vec<_>>()
                .join("*");
            if mono.is_empty() {
                f.write_str(&body)?;
            } else if body == "1" {
                f.write_str(&mono)?;
            } else {
                write!(f, "{body}*{mono}")?;
            }
        }
        Ok(())
    }
}
