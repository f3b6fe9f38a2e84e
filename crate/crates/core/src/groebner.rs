//! Buchberger's algorithm with cofactor tracking, extended normal forms and
//! the staircase basis of a zero-dimensional quotient.

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use thiserror::Error;

use crate::field::Scalar;
use crate::mpoly::{MPoly, Monomial};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GroebnerError {
    #[error("ideal is not zero-dimensional: no pure power of `{variable}` among the leading terms")]
    NotIsolated { variable: String },
}

/// A reduced Groebner basis in degrevlex order. `cofactors[k][i]` are the
/// polynomials with `basis[k] = Σ_i cofactors[k][i] · generators[i]`.
#[derive(Clone, Debug)]
pub struct GroebnerBasis<F> {
    vars: Arc<Vec<String>>,
    generators: Vec<MPoly<F>>,
    basis: Vec<MPoly<F>>,
    cofactors: Vec<Vec<MPoly<F>>>,
}

struct Tracked<F> {
    poly: MPoly<F>,
    cof: Vec<MPoly<F>>,
}

impl<F: Scalar> Tracked<F> {
    fn make_monic(&mut self) {
        let inv = self.poly.make_monic();
        for c in &mut self.cof {
            *c = c.scale(&inv);
        }
    }

    /// `self -= c · m · other`.
    fn sub_scaled(&mut self, c: &F, m: &Monomial, other: &Tracked<F>) {
        let neg = -c.clone();
        self.poly.add_scaled(&neg, m, &other.poly);
        for (mine, theirs) in self.cof.iter_mut().zip(&other.cof) {
            mine.add_scaled(&neg, m, theirs);
        }
    }
}

/// Fully reduces `t` modulo `basis`, skipping index `skip`.
fn reduce_tracked<F: Scalar>(t: &mut Tracked<F>, basis: &[Tracked<F>], skip: Option<usize>) {
    let vars = t.poly.vars().clone();
    let mut rest = Tracked { poly: MPoly::zero(vars), cof: t.cof.clone() };
    let mut work = std::mem::replace(&mut t.poly, rest.poly.clone());
    loop {
        let Some((lm, lc)) = work.leading_term().map(|(m, c)| (m.clone(), c.clone())) else {
            break;
        };
        let divisor = basis
            .iter()
            .enumerate()
            .filter(|(k, _)| Some(*k) != skip)
            .find(|(_, g)| g.poly.leading_monomial().is_some_and(|gm| gm.divides(&lm)));
        match divisor {
            Some((_, g)) => {
                let (gm, gc) = g.poly.leading_term().expect("nonzero");
                let m = gm.quotient_of(&lm);
                let c = lc / gc.clone();
                let mut tmp = Tracked { poly: work, cof: std::mem::take(&mut rest.cof) };
                tmp.sub_scaled(&c, &m, g);
                work = tmp.poly;
                rest.cof = tmp.cof;
            }
            None => {
                work.add_term(lm.clone(), -lc.clone());
                rest.poly.add_term(lm, lc);
            }
        }
    }
    *t = rest;
}

fn s_poly<F: Scalar>(a: &Tracked<F>, b: &Tracked<F>) -> Tracked<F> {
    let (am, ac) = a.poly.leading_term().expect("nonzero");
    let (bm, bc) = b.poly.leading_term().expect("nonzero");
    let l = am.lcm(bm);
    let mut out = Tracked {
        poly: MPoly::zero(a.poly.vars().clone()),
        cof: vec![MPoly::zero(a.poly.vars().clone()); a.cof.len()],
    };
    let ca = ac.inv();
    let cb = bc.inv();
    out.sub_scaled(&-ca, &am.quotient_of(&l), a);
    out.sub_scaled(&cb, &bm.quotient_of(&l), b);
    out
}

/// Computes a reduced Groebner basis of the ideal generated by `gens`.
/// Zero generators are ignored; if all are zero the basis is empty.
pub fn buchberger<F: Scalar>(gens: &[MPoly<F>]) -> GroebnerBasis<F> {
    assert!(!gens.is_empty(), "at least one generator is required");
    let vars = gens[0].vars().clone();
    let ngens = gens.len();
    let mut basis: Vec<Tracked<F>> = Vec::new();
    let mut pairs: VecDeque<(usize, usize)> = VecDeque::new();
    let push = |t: Tracked<F>, basis: &mut Vec<Tracked<F>>, pairs: &mut VecDeque<(usize, usize)>| {
        let j = basis.len();
        for i in 0..j {
            pairs.push_back((i, j));
        }
        basis.push(t);
    };
    for (i, g) in gens.iter().enumerate() {
        if g.is_zero() {
            continue;
        }
        let mut cof = vec![MPoly::zero(vars.clone()); ngens];
        cof[i] = MPoly::one(vars.clone());
        let mut t = Tracked { poly: g.clone(), cof };
        t.make_monic();
        push(t, &mut basis, &mut pairs);
    }
    while let Some((i, j)) = pairs.pop_front() {
        let (mi, mj) = (basis[i].poly.leading_monomial().unwrap(), basis[j].poly.leading_monomial().unwrap());
        if mi.coprime(mj) {
            continue;
        }
        let mut s = s_poly(&basis[i], &basis[j]);
        reduce_tracked(&mut s, &basis, None);
        if s.poly.is_zero() {
            continue;
        }
        s.make_monic();
        push(s, &mut basis, &mut pairs);
    }

    // minimalize, then inter-reduce tails
    let lms: Vec<Monomial> = basis.iter().map(|t| t.poly.leading_monomial().unwrap().clone()).collect();
    let keep: Vec<bool> = (0..basis.len())
        .map(|k| {
            !(0..basis.len()).any(|o| o != k && lms[o].divides(&lms[k]) && (lms[o] != lms[k] || o < k))
        })
        .collect();
    let mut minimal: Vec<Tracked<F>> =
        basis.into_iter().zip(keep).filter(|(_, k)| *k).map(|(t, _)| t).collect();
    for k in 0..minimal.len() {
        let mut t = Tracked { poly: MPoly::zero(vars.clone()), cof: Vec::new() };
        std::mem::swap(&mut t, &mut minimal[k]);
        let (lm, lc) = t.poly.leading_term().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        let mut tail = Tracked { poly: t.poly.clone(), cof: t.cof.clone() };
        tail.poly.add_term(lm.clone(), -lc.clone());
        reduce_tracked(&mut tail, &minimal, Some(k));
        tail.poly.add_term(lm, lc);
        t = tail;
        t.make_monic();
        minimal[k] = t;
    }
    minimal.sort_by(|a, b| a.poly.leading_monomial().cmp(&b.poly.leading_monomial()));
    let (basis, cofactors) = minimal.into_iter().map(|t| (t.poly, t.cof)).unzip();
    GroebnerBasis { vars, generators: gens.to_vec(), basis, cofactors }
}

impl<F: Scalar> GroebnerBasis<F> {
    pub fn vars(&self) -> &Arc<Vec<String>> {
        &self.vars
    }

    pub fn generators(&self) -> &[MPoly<F>] {
        &self.generators
    }

    /// Sorted by ascending leading monomial.
    pub fn basis(&self) -> &[MPoly<F>] {
        &self.basis
    }

    pub fn cofactors(&self) -> &[Vec<MPoly<F>>] {
        &self.cofactors
    }

    pub fn leading_monomials(&self) -> Vec<&Monomial> {
        self.basis.iter().map(|g| g.leading_monomial().expect("nonzero")).collect()
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.basis.iter().any(|g| g.leading_monomial().is_some_and(Monomial::is_one))
    }

    /// Division by the basis: `g = r + Σ_k Q_k g_k`.
    fn divide(&self, g: &MPoly<F>) -> (MPoly<F>, Vec<MPoly<F>>) {
        let mut quot = vec![MPoly::zero(self.vars.clone()); self.basis.len()];
        let mut rem = MPoly::zero(self.vars.clone());
        let mut work = g.clone();
        while let Some((lm, lc)) = work.leading_term().map(|(m, c)| (m.clone(), c.clone())) {
            let hit = self.basis.iter().position(|b| b.leading_monomial().is_some_and(|bm| bm.divides(&lm)));
            match hit {
                Some(k) => {
                    let b = &self.basis[k];
                    let (bm, bc) = b.leading_term().unwrap();
                    let m = bm.quotient_of(&lm);
                    let c = lc / bc.clone();
                    work.add_scaled(&-c.clone(), &m, b);
                    quot[k].add_term(m, c);
                }
                None => {
                    work.add_term(lm.clone(), -lc.clone());
                    rem.add_term(lm, lc);
                }
            }
        }
        (rem, quot)
    }

    pub fn normal_form(&self, g: &MPoly<F>) -> MPoly<F> {
        self.divide(g).0
    }

    /// `(r, q)` with `g = r + Σ_i q_i f_i` over the original generators
    /// `f_i`, and `r` the normal form.
    pub fn normal_form_with_quotients(&self, g: &MPoly<F>) -> (MPoly<F>, Vec<MPoly<F>>) {
        let (r, quot) = self.divide(g);
        let mut q = vec![MPoly::zero(self.vars.clone()); self.generators.len()];
        for (qk, cof) in quot.iter().zip(&self.cofactors) {
            if qk.is_zero() {
                continue;
            }
            for (qi, c) in q.iter_mut().zip(cof) {
                if !c.is_zero() {
                    *qi = &*qi + &(qk * c);
                }
            }
        }
        (r, q)
    }
}

/// The staircase of a zero-dimensional ideal, in ascending degrevlex order.
#[derive(Clone, Debug)]
pub struct MilnorData<F> {
    pub gb: Arc<GroebnerBasis<F>>,
    pub staircase: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl<F: Scalar> MilnorData<F> {
    pub fn mu(&self) -> usize {
        self.staircase.len()
    }

    pub fn position(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Coordinates of a normal form on the staircase.
    pub fn coordinates(&self, r: &MPoly<F>) -> Vec<F> {
        let mut v = vec![F::zero(); self.mu()];
        for (m, c) in r.terms() {
            let j = self.position(m).expect("normal form outside the staircase");
            v[j] = c.clone();
        }
        v
    }
}

pub fn milnor_data<F: Scalar>(gb: Arc<GroebnerBasis<F>>) -> Result<MilnorData<F>, GroebnerError> {
    let n = gb.vars.len();
    if gb.is_unit_ideal() {
        return Ok(MilnorData { gb, staircase: Vec::new(), index: HashMap::new() });
    }
    let lms: Vec<Monomial> = gb.leading_monomials().into_iter().cloned().collect();
    let mut bounds = vec![u32::MAX; n];
    for m in &lms {
        if let Some(i) = m.pure_power_var() {
            bounds[i] = bounds[i].min(m.exponents()[i]);
        }
    }
    if let Some(i) = bounds.iter().position(|&b| b == u32::MAX) {
        return Err(GroebnerError::NotIsolated { variable: gb.vars[i].clone() });
    }
    let mut staircase = Vec::new();
    let mut exps = vec![0u32; n];
    'outer: loop {
        let m = Monomial::new(exps.clone());
        if !lms.iter().any(|l| l.divides(&m)) {
            staircase.push(m);
        }
        for i in 0..n {
            exps[i] += 1;
            if exps[i] < bounds[i] {
                continue 'outer;
            }
            exps[i] = 0;
        }
        break;
    }
    staircase.sort();
    let index = staircase.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    Ok(MilnorData { gb, staircase, index })
}

/// Gradient of `f`, the generators of its Jacobian ideal.
pub fn jacobian<F: Scalar>(f: &MPoly<F>) -> Vec<MPoly<F>> {
    (0..f.nvars()).map(|i| f.partial_derivative(i)).collect()
}
