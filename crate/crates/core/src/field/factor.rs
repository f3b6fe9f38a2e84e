//! Factorization of rational univariate polynomials.
//!
//! Rational roots come from Sturm-sequence bisection on an integer
//! transform; the remaining squarefree parts are searched for small factors
//! by Kronecker interpolation. The matrices this engine meets have dimension
//! at most a few dozen, which keeps the search cheap.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::upoly::UPoly;
use super::{FieldError, RootSplit, Q};

const VALUE_LIMIT: u64 = 10_000_000_000;
const COMBINATION_LIMIT: u64 = 2_000_000;

/// Rational roots of `p` with multiplicities, ascending.
pub fn rational_roots(p: &UPoly<Q>) -> Vec<(Q, usize)> {
    let mut out = Vec::new();
    for (i, part) in p.squarefree_decomposition().iter().enumerate() {
        if part.degree().unwrap_or(0) == 0 {
            continue;
        }
        for r in squarefree_rational_roots(part) {
            out.push((r, i + 1));
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

/// Splits `p` into its rational linear factors and a monic cofactor.
pub fn split_rational(p: &UPoly<Q>) -> RootSplit<Q> {
    let roots = rational_roots(p);
    let mut cofactor = p.monic();
    for (r, m) in &roots {
        let lin = UPoly::linear(r.clone());
        for _ in 0..*m {
            cofactor = cofactor.exact_div(&lin).expect("root divides");
        }
    }
    RootSplit { roots, cofactor }
}

/// Complete factorization into monic irreducibles with multiplicities.
/// Linear factors come first (ascending root), then higher-degree factors by
/// ascending degree and then by their coefficients from the constant term up.
pub fn factor(p: &UPoly<Q>) -> Result<Vec<(UPoly<Q>, usize)>, FieldError> {
    let mut out = Vec::new();
    let mut nonlinear = Vec::new();
    for (i, part) in p.squarefree_decomposition().iter().enumerate() {
        if part.degree().unwrap_or(0) == 0 {
            continue;
        }
        let split = split_rational(part);
        for (r, _) in split.roots {
            out.push((UPoly::linear(r), i + 1));
        }
        for g in factor_squarefree_rootless(&split.cofactor)? {
            nonlinear.push((g, i + 1));
        }
    }
    out.sort_by(|a, b| (-a.0.coeff(0)).cmp(&(-b.0.coeff(0))));
    nonlinear.sort_by(|(g, _), (h, _)| g.degree().cmp(&h.degree()).then_with(|| g.coeffs().cmp(h.coeffs())));
    out.extend(nonlinear);
    Ok(out)
}

/// Whether a monic polynomial of positive degree is irreducible over ℚ.
pub fn is_irreducible(p: &UPoly<Q>) -> Result<bool, FieldError> {
    let f = factor(p)?;
    Ok(f.len() == 1 && f[0].1 == 1)
}

fn squarefree_rational_roots(p: &UPoly<Q>) -> Vec<Q> {
    let p = p.monic();
    let n = p.degree().unwrap_or(0);
    if n == 0 {
        return Vec::new();
    }
    // q(y) = D^n p(y/D) is monic with integer coefficients; its rational roots
    // are integers.
    let d = p
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let scaled = c * Q::from_integer(num_traits::pow(d.clone(), n - i));
            debug_assert!(scaled.is_integer());
            scaled.to_integer()
        })
        .collect();
    integer_roots(&ints)
        .into_iter()
        .map(|y| Q::new(y, d.clone()))
        .collect()
}

fn eval_int(coeffs: &[BigInt], x: &BigInt) -> BigInt {
    coeffs
        .iter()
        .rev()
        .fold(BigInt::zero(), |acc, c| acc * x + c)
}

/// Integer roots of a squarefree monic integer polynomial.
fn integer_roots(coeffs: &[BigInt]) -> Vec<BigInt> {
    let poly = UPoly::new(coeffs.iter().map(|c| Q::from_integer(c.clone())).collect());
    let sturm = sturm_sequence(&poly);
    let bound = coeffs
        .iter()
        .map(|c| c.abs())
        .max()
        .unwrap_or_default()
        + BigInt::one();
    let count = |a: &BigInt, b: &BigInt| -> usize {
        sign_changes(&sturm, a) - sign_changes(&sturm, b)
    };
    let mut roots = Vec::new();
    // Half-open integer intervals (a, b].
    let lo = -&bound - BigInt::one();
    let hi = bound;
    let mut stack = vec![(lo.clone(), hi.clone(), count(&lo, &hi))];
    while let Some((a, b, n)) = stack.pop() {
        if n == 0 {
            continue;
        }
        if &b - &a == BigInt::one() {
            if eval_int(coeffs, &b).is_zero() {
                roots.push(b);
            }
            continue;
        }
        let mid: BigInt = (&a + &b).div_floor(&BigInt::from(2));
        let left = count(&a, &mid);
        stack.push((a, mid.clone(), left));
        stack.push((mid, b, n - left));
    }
    roots.sort();
    roots
}

fn sturm_sequence(p: &UPoly<Q>) -> Vec<UPoly<Q>> {
    let mut seq = vec![p.clone(), p.derivative()];
    loop {
        let n = seq.len();
        let r = seq[n - 2].div_rem(&seq[n - 1]).1;
        if r.is_zero() {
            break;
        }
        seq.push(-&r);
    }
    seq
}

fn sign_changes(seq: &[UPoly<Q>], x: &BigInt) -> usize {
    let x = Q::from_integer(x.clone());
    let mut last = 0i8;
    let mut changes = 0;
    for s in seq {
        let v = s.eval(&x);
        let sg = if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            0
        };
        if sg == 0 {
            continue;
        }
        if last != 0 && sg != last {
            changes += 1;
        }
        last = sg;
    }
    changes
}

/// Splits a monic squarefree polynomial without rational roots into monic
/// irreducible factors.
fn factor_squarefree_rootless(p: &UPoly<Q>) -> Result<Vec<UPoly<Q>>, FieldError> {
    let deg = p.degree().unwrap_or(0);
    if deg == 0 {
        return Ok(Vec::new());
    }
    if deg <= 3 {
        return Ok(vec![p.monic()]);
    }
    let g = primitive_integer(p);
    for k in 2..=deg / 2 {
        if let Some(h) = kronecker_factor(&g, k, p)? {
            let hq = UPoly::new(h.iter().map(|c| Q::from_integer(c.clone())).collect()).monic();
            let rest = p.monic().exact_div(&hq).expect("factor divides");
            let mut out = vec![hq];
            out.extend(factor_squarefree_rootless(&rest)?);
            return Ok(out);
        }
    }
    Ok(vec![p.monic()])
}

fn primitive_integer(p: &UPoly<Q>) -> Vec<BigInt> {
    let d = p
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p
        .coeffs()
        .iter()
        .map(|c| (c * Q::from_integer(d.clone())).to_integer())
        .collect();
    let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    ints.into_iter().map(|c| c / &content).collect()
}

fn positive_divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs().to_u64().expect("value bounded by the search limit");
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small.into_iter().map(BigInt::from).collect()
}

/// Looks for an integer factor of degree exactly `k` of the primitive
/// polynomial `g` by interpolating divisor choices at `k + 1` points.
fn kronecker_factor(g: &[BigInt], k: usize, orig: &UPoly<Q>) -> Result<Option<Vec<BigInt>>, FieldError> {
    let limit_err = || FieldError::FactorizationLimit(orig.fmt_var("x"));
    let mut points = Vec::new();
    let mut step = 0i64;
    while points.len() < k + 1 {
        let x = if step % 2 == 0 { step / 2 } else { -(step + 1) / 2 };
        step += 1;
        let v = eval_int(g, &BigInt::from(x));
        if v.is_zero() {
            continue;
        }
        if v.abs() > BigInt::from(VALUE_LIMIT) {
            return Err(limit_err());
        }
        points.push((x, v));
    }
    let choices: Vec<Vec<BigInt>> = points
        .iter()
        .enumerate()
        .map(|(j, (_, v))| {
            let pos = positive_divisors(v);
            if j == 0 {
                pos
            } else {
                pos.iter().flat_map(|d| [d.clone(), -d]).collect()
            }
        })
        .collect();
    let total = choices
        .iter()
        .try_fold(1u64, |acc, c| acc.checked_mul(c.len() as u64))
        .unwrap_or(u64::MAX);
    if total > COMBINATION_LIMIT {
        return Err(limit_err());
    }
    let gq = UPoly::new(g.iter().map(|c| Q::from_integer(c.clone())).collect());
    let mut idx = vec![0usize; choices.len()];
    loop {
        let values: Vec<Q> = idx
            .iter()
            .zip(&choices)
            .map(|(&i, c)| Q::from_integer(c[i].clone()))
            .collect();
        let xs: Vec<Q> = points.iter().map(|(x, _)| Q::from_integer((*x).into())).collect();
        let h = interpolate(&xs, &values);
        if h.degree() == Some(k) && h.coeffs().iter().all(|c| c.is_integer()) && gq.exact_div(&h).is_some() {
            return Ok(Some(h.coeffs().iter().map(|c| c.to_integer()).collect()));
        }
        // odometer
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return Ok(None);
            }
            idx[pos] += 1;
            if idx[pos] < choices[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Newton interpolation through `(xs[i], ys[i])`.
fn interpolate(xs: &[Q], ys: &[Q]) -> UPoly<Q> {
    let n = xs.len();
    let mut dd = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - j]);
        }
    }
    let mut acc = UPoly::constant(dd[n - 1].clone());
    for i in (0..n - 1).rev() {
        acc = &(&acc * &UPoly::linear(xs[i].clone())) + &UPoly::constant(dd[i].clone());
    }
    acc
}
