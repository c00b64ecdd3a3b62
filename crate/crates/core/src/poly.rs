//! Dense polynomials over `F_p`.
//!
//! Coefficients are stored lowest degree first with no trailing zeros, so the
//! zero polynomial is the empty vector. Operations take the prime explicitly.
//! "Lexicographic order" for monic polynomials of a fixed degree compares the
//! coefficients of `x^{d-1}, x^{d-2}, ..., x^0` in that order.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::ff::{
    self, add_mod, check_odd_prime, inv_mod, mul_mod, pow_mod, sub_mod, ExtElem,
    FieldParams,
};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Polynomial {
    coeffs: Vec<u64>,
}

impl Polynomial {
    /// From coefficients lowest degree first; reduces modulo `p` and trims.
    pub fn new(coeffs: Vec<u64>, p: u64) -> Self {
        let mut poly = Polynomial {
            coeffs: coeffs.into_iter().map(|c| c % p).collect(),
        };
        poly.trim();
        poly
    }

    /// From coefficients highest degree first, e.g. `[1, 0, 1]` is `x^2 + 1`.
    pub fn from_high_first(coeffs: &[u64], p: u64) -> Self {
        Self::new(coeffs.iter().rev().copied().collect(), p)
    }

    /// `x^d + tail[0] x^{d-1} + ... + tail[d-1]` with `d = tail.len()`.
    pub fn monic_from_tail(tail: &[u64], p: u64) -> Self {
        let mut high = Vec::with_capacity(tail.len() + 1);
        high.push(1);
        high.extend_from_slice(tail);
        Self::from_high_first(&high, p)
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Polynomial { coeffs: vec![1] }
    }

    pub fn x() -> Self {
        Polynomial { coeffs: vec![0, 1] }
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    /// Coefficients highest degree first.
    pub fn high_first(&self) -> Vec<u64> {
        self.coeffs.iter().rev().copied().collect()
    }

    /// The coefficient `a_j` of `x^{d-j}` (so `a_0` is the leading coefficient).
    pub fn a(&self, j: usize) -> u64 {
        match self.degree() {
            Some(d) if j <= d => self.coeffs[d - j],
            _ => 0,
        }
    }

    pub fn eval(&self, n: u64, p: u64) -> u64 {
        let n = n % p;
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| add_mod(mul_mod(acc, n, p), c, p))
    }

    pub fn derivative(&self, p: u64) -> Polynomial {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mul_mod(c, i as u64 % p, p))
            .collect();
        Polynomial::new(coeffs, p)
    }

    /// `f(X + c)`.
    pub fn shift(&self, c: u64, p: u64) -> Polynomial {
        let lin = Polynomial::new(vec![c % p, 1], p);
        self.coeffs.iter().rev().fold(Polynomial::zero(), |acc, &a| {
            add(&mul(&acc, &lin, p), &Polynomial::new(vec![a], p), p)
        })
    }

    pub fn make_monic(&self, p: u64) -> Result<Polynomial> {
        if self.is_zero() {
            return Err(Error::param("the zero polynomial has no monic associate"));
        }
        let inv = inv_mod(self.leading(), p)?;
        Ok(scalar_mul(self, inv, p))
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "x")?,
                (1, c) => write!(f, "{c}x")?,
                (i, 1) => write!(f, "x^{i}")?,
                (i, c) => write!(f, "{c}x^{i}")?,
            }
        }
        Ok(())
    }
}

pub fn add(a: &Polynomial, b: &Polynomial, p: u64) -> Polynomial {
    let n = a.coeffs.len().max(b.coeffs.len());
    let coeffs = (0..n).map(|i| add_mod(a.coeff(i), b.coeff(i), p)).collect();
    Polynomial::new(coeffs, p)
}

pub fn sub(a: &Polynomial, b: &Polynomial, p: u64) -> Polynomial {
    let n = a.coeffs.len().max(b.coeffs.len());
    let coeffs = (0..n).map(|i| sub_mod(a.coeff(i), b.coeff(i), p)).collect();
    Polynomial::new(coeffs, p)
}

pub fn scalar_mul(a: &Polynomial, c: u64, p: u64) -> Polynomial {
    Polynomial::new(a.coeffs.iter().map(|&x| mul_mod(x, c, p)).collect(), p)
}

pub fn mul(a: &Polynomial, b: &Polynomial, p: u64) -> Polynomial {
    if a.is_zero() || b.is_zero() {
        return Polynomial::zero();
    }
    let mut out = vec![0u64; a.coeffs.len() + b.coeffs.len() - 1];
    for (i, &x) in a.coeffs.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.coeffs.iter().enumerate() {
            out[i + j] = add_mod(out[i + j], mul_mod(x, y, p), p);
        }
    }
    Polynomial::new(out, p)
}

/// Euclidean division; `b` must be nonzero.
pub fn divrem(a: &Polynomial, b: &Polynomial, p: u64) -> Result<(Polynomial, Polynomial)> {
    let db = b
        .degree()
        .ok_or_else(|| Error::Domain("polynomial division by zero".into()))?;
    let inv_lead = inv_mod(b.leading(), p)?;
    let mut rem = a.coeffs.clone();
    if rem.len() <= db {
        return Ok((Polynomial::zero(), a.clone()));
    }
    let mut quot = vec![0u64; rem.len() - db];
    for i in (db..rem.len()).rev() {
        let c = mul_mod(rem[i], inv_lead, p);
        if c == 0 {
            continue;
        }
        quot[i - db] = c;
        for (j, &bj) in b.coeffs.iter().enumerate() {
            let idx = i - db + j;
            rem[idx] = sub_mod(rem[idx], mul_mod(c, bj, p), p);
        }
    }
    Ok((Polynomial::new(quot, p), Polynomial::new(rem, p)))
}

pub fn rem(a: &Polynomial, b: &Polynomial, p: u64) -> Result<Polynomial> {
    Ok(divrem(a, b, p)?.1)
}

/// Monic gcd (zero when both inputs are zero).
pub fn gcd(a: &Polynomial, b: &Polynomial, p: u64) -> Polynomial {
    let mut x = a.clone();
    let mut y = b.clone();
    while !y.is_zero() {
        let r = rem(&x, &y, p).expect("divisor is nonzero");
        x = y;
        y = r;
    }
    if x.is_zero() {
        x
    } else {
        x.make_monic(p).expect("nonzero")
    }
}

/// `base^exp mod modulus`.
pub fn powmod(base: &Polynomial, mut exp: u128, modulus: &Polynomial, p: u64) -> Polynomial {
    let mut result = rem(&Polynomial::one(), modulus, p).expect("nonzero modulus");
    let mut b = rem(base, modulus, p).expect("nonzero modulus");
    while exp > 0 {
        if exp & 1 == 1 {
            result = rem(&mul(&result, &b, p), modulus, p).expect("nonzero modulus");
        }
        b = rem(&mul(&b, &b, p), modulus, p).expect("nonzero modulus");
        exp >>= 1;
    }
    result
}

fn check_prime(p: u64) -> Result<()> {
    if !ff::is_prime(p) {
        return Err(Error::param(format!("p = {p} is not prime")));
    }
    Ok(())
}

/// Rabin's irreducibility test.
pub fn is_irreducible(f: &Polynomial, p: u64) -> Result<bool> {
    check_prime(p)?;
    let n = match f.degree() {
        Some(0) | None => {
            return Err(Error::param(
                "irreducibility is undefined for constant polynomials",
            ))
        }
        Some(n) => n,
    };
    if n == 1 {
        return Ok(true);
    }
    let f = f.make_monic(p)?;
    let x = Polynomial::x();
    // frob[t] = x^{p^t} mod f
    let mut frob = Vec::with_capacity(n + 1);
    frob.push(x.clone());
    for t in 1..=n {
        let next = powmod(&frob[t - 1], p as u128, &f, p);
        frob.push(next);
    }
    if frob[n] != x {
        return Ok(false);
    }
    for q in ff::prime_factors(n as u64) {
        let t = n / q as usize;
        let g = gcd(&sub(&frob[t], &x, p), &f, p);
        if g.degree() != Some(0) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Lexicographically smallest monic irreducible polynomial of degree `d`.
pub fn smallest_irreducible(p: u64, d: usize) -> Result<Polynomial> {
    check_prime(p)?;
    if d == 0 {
        return Err(Error::param("degree must be at least 1"));
    }
    let total = (p as u128).saturating_pow(d as u32);
    for index in 0..total {
        let f = Polynomial::monic_from_tail(&digits(index, p, d), p);
        if is_irreducible(&f, p)? {
            return Ok(f);
        }
    }
    Err(Error::Internal(format!(
        "no irreducible polynomial of degree {d} over F_{p}"
    )))
}

/// Base-`p` digits of `index`, most significant first, `len` of them.
pub(crate) fn digits(mut index: u128, p: u64, len: usize) -> Vec<u64> {
    let mut out = vec![0u64; len];
    for slot in out.iter_mut().rev() {
        *slot = (index % p as u128) as u64;
        index /= p as u128;
    }
    out
}

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|t| n.is_multiple_of(*t)).collect()
}

pub(crate) fn mobius(n: u64) -> i128 {
    let mut m = n;
    let mut sign = 1;
    let mut q = 2;
    while q * q <= m {
        if m.is_multiple_of(q) {
            m /= q;
            if m.is_multiple_of(q) {
                return 0;
            }
            sign = -sign;
        }
        q += 1;
    }
    if m > 1 {
        sign = -sign;
    }
    sign
}

/// Number of monic irreducible polynomials of degree `d` over `F_p`.
pub fn count_irreducibles(p: u64, d: usize) -> u128 {
    let d = d as u64;
    let sum: i128 = divisors(d)
        .into_iter()
        .map(|t| mobius(t) * (p as i128).pow((d / t) as u32))
        .sum();
    (sum / d as i128) as u128
}

/// Number of monic irreducible polynomials of degree `d >= 2` whose
/// `x^{d-1}` coefficient vanishes (equivalently: whose roots have trace 0).
///
/// When `p` does not divide `d` this is `(1/(dp)) sum_{t|d} mu(t) p^{d/t}`.
/// When `p | d` the traces are not equidistributed and the count is
/// `I(d) - (p-1) T1` where `T1 = (1/(dp)) sum_{t|d, p∤t} mu(t) p^{d/t}` counts
/// each nonzero trace class.
pub fn count_trace_zero_irreducibles(p: u64, d: usize) -> Result<u128> {
    check_odd_prime(p)?;
    if d < 2 {
        return Err(Error::param("trace-zero count needs degree d >= 2"));
    }
    let du = d as u64;
    let denom = (du as i128) * (p as i128);
    let sum_over = |filter: &dyn Fn(u64) -> bool| -> i128 {
        divisors(du)
            .into_iter()
            .filter(|&t| filter(t))
            .map(|t| mobius(t) * (p as i128).pow((du / t) as u32))
            .sum()
    };
    if !du.is_multiple_of(p) {
        let s = sum_over(&|_| true);
        if s % denom != 0 {
            return Err(Error::Internal(format!(
                "Mobius sum {s} not divisible by {denom}"
            )));
        }
        Ok((s / denom) as u128)
    } else {
        let s = sum_over(&|t| t % p != 0);
        if s % denom != 0 {
            return Err(Error::Internal(format!(
                "nonzero-trace Mobius sum {s} not divisible by {denom}"
            )));
        }
        let per_class = s / denom;
        Ok((count_irreducibles(p, d) as i128 - (p as i128 - 1) * per_class) as u128)
    }
}

fn enumerate_monic(
    p: u64,
    d: usize,
    trace_zero: bool,
    budget: Budget,
) -> Result<Vec<Polynomial>> {
    check_odd_prime(p)?;
    let free = if trace_zero { d - 1 } else { d };
    let total = (p as u128).saturating_pow(free as u32);
    budget.check(
        &format!("enumeration of degree-{d} polynomials over F_{p}"),
        total,
    )?;
    let build = |index: u128| {
        let mut tail = digits(index, p, free);
        if trace_zero {
            tail.insert(0, 0);
        }
        Polynomial::monic_from_tail(&tail, p)
    };
    (0..total as u64)
        .into_par_iter()
        .map(|i| build(i as u128))
        .filter_map(|f| match is_irreducible(&f, p) {
            Ok(true) => Some(Ok(f)),
            Ok(false) => None,
            Err(e) => Some(Err(e)),
        })
        .collect()
}

/// All monic irreducible `x^d + a_2 x^{d-2} + ... + a_d` in lexicographic order.
pub fn enumerate_trace_zero_irreducibles(
    p: u64,
    d: usize,
    budget: Budget,
) -> Result<Vec<Polynomial>> {
    if d < 2 {
        return Err(Error::param("trace-zero enumeration needs degree d >= 2"));
    }
    enumerate_monic(p, d, true, budget)
}

/// All monic irreducible polynomials of degree `d` in lexicographic order.
pub fn enumerate_irreducibles(p: u64, d: usize, budget: Budget) -> Result<Vec<Polynomial>> {
    if d < 1 {
        return Err(Error::param("degree must be at least 1"));
    }
    enumerate_monic(p, d, false, budget)
}

/// Minimal polynomial of `beta` over `F_p`: the product of `X - gamma` over
/// the Frobenius orbit of `beta`. Its degree is the degree of `beta`, which
/// is smaller than `d` exactly when `beta` lies in a proper subfield.
pub fn minimal_polynomial(beta: &ExtElem) -> Result<Polynomial> {
    let field = beta.field();
    let p = field.p();
    let orbit_len = beta.degree();
    // Coefficients as field elements, lowest degree first; start with 1.
    let mut acc: Vec<Vec<u64>> = vec![field.reduce(&[1])];
    for gamma in beta.conjugates().into_iter().take(orbit_len) {
        let neg = gamma.neg();
        let mut next = vec![vec![0u64; field.degree()]; acc.len() + 1];
        for (i, c) in acc.iter().enumerate() {
            next[i + 1] = field.add_coords(&next[i + 1], c);
            let t = field.mul_coords(c, neg.coeffs());
            next[i] = field.add_coords(&next[i], &t);
        }
        acc = next;
    }
    let mut out = Vec::with_capacity(acc.len());
    for (i, c) in acc.iter().enumerate() {
        if c[1..].iter().any(|&v| v != 0) {
            return Err(Error::Internal(format!(
                "coefficient {i} of the minimal polynomial of {beta:?} is not in F_{p}"
            )));
        }
        out.push(c[0]);
    }
    Ok(Polynomial::new(out, p))
}

/// One element per Frobenius orbit of elements of degree exactly `d`,
/// optionally restricted to trace zero. Each representative is the
/// lexicographically smallest coordinate vector in its orbit, and the list is
/// sorted by representative.
pub fn conjugacy_representatives(
    p: u64,
    d: usize,
    trace_zero_only: bool,
    budget: Budget,
) -> Result<Vec<ExtElem>> {
    let field = FieldParams::new(p, d)?;
    representatives_in(&field, trace_zero_only, budget)
}

pub fn representatives_in(
    field: &Arc<FieldParams>,
    trace_zero_only: bool,
    budget: Budget,
) -> Result<Vec<ExtElem>> {
    let total = field.order();
    budget.check(
        &format!("enumeration of F_{{{}^{}}}", field.p(), field.degree()),
        total,
    )?;
    let candidates: Vec<Option<ExtElem>> = (0..total as u64)
        .into_par_iter()
        .map(|i| {
            let coords = field.coords_from_index(i as u128);
            let beta = ExtElem::from_raw(field, coords);
            let orbit = beta.conjugates();
            // A repeated conjugate means beta lies in a proper subfield; a
            // smaller one means beta is not the orbit minimum.
            if orbit[1..].iter().any(|g| g.coeffs() <= beta.coeffs()) {
                return Ok(None);
            }
            if trace_zero_only && beta.trace()? != 0 {
                return Ok(None);
            }
            Ok(Some(beta))
        })
        .collect::<Result<_>>()?;
    Ok(candidates.into_iter().flatten().collect())
}

/// `f_i(X) = i^d f(X / i)`: the coefficient of `X^{d-j}` becomes `a_j i^j`.
pub fn scale_poly(f: &Polynomial, i: u64, p: u64) -> Result<Polynomial> {
    let i = i % p;
    if i == 0 {
        return Err(Error::param("scaling factor must be nonzero"));
    }
    if !f.is_monic() {
        return Err(Error::param(format!("{f} is not monic")));
    }
    let d = f.degree().expect("monic");
    let coeffs = (0..=d)
        .map(|k| mul_mod(f.coeff(k), pow_mod(i, (d - k) as u128, p), p))
        .collect();
    Ok(Polynomial::new(coeffs, p))
}

pub fn eval_poly(f: &Polynomial, n: u64, p: u64) -> u64 {
    f.eval(n, p)
}

pub fn is_squarefree(f: &Polynomial, p: u64) -> bool {
    if f.is_zero() {
        return false;
    }
    gcd(f, &f.derivative(p), p).degree() == Some(0)
}

/// Whether `prod f_j(X + shift_j)` is square-free.
pub fn is_squarefree_product(shifted: &[(Polynomial, u64)], p: u64) -> bool {
    let h = shifted
        .iter()
        .fold(Polynomial::one(), |acc, (f, s)| mul(&acc, &f.shift(*s, p), p));
    is_squarefree(&h, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::{neg_mod, FieldHandle};
    use num_rational::Ratio;

    fn negate(a: &Polynomial, p: u64) -> Polynomial {
        Polynomial::new(a.coeffs().iter().map(|&c| neg_mod(c, p)).collect(), p)
    }

    fn poly(high: &[u64], p: u64) -> Polynomial {
        Polynomial::from_high_first(high, p)
    }

    /// Irreducible iff no monic factor of degree 1..=deg/2 divides it.
    fn trial_division_irreducible(f: &Polynomial, p: u64) -> bool {
        let n = f.degree().unwrap();
        for k in 1..=n / 2 {
            for idx in 0..(p as u128).pow(k as u32) {
                let g = Polynomial::monic_from_tail(&digits(idx, p, k), p);
                if rem(f, &g, p).unwrap().is_zero() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn irreducibility_examples() {
        assert!(is_irreducible(&poly(&[1, 0, 1], 3), 3).unwrap());
        assert!(!is_irreducible(&poly(&[1, 0, 2], 3), 3).unwrap());
        assert!(!is_irreducible(&poly(&[1, 0, 1], 5), 5).unwrap());
        assert!(matches!(
            is_irreducible(&poly(&[4], 5), 5),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn irreducibility_normalizes_leading_coefficient() {
        // 2x^2 + 2 = 2(x^2 + 1) over F_3
        assert!(is_irreducible(&poly(&[2, 0, 2], 3), 3).unwrap());
    }

    #[test]
    fn rabin_test_agrees_with_trial_division() {
        for p in [2u64, 3, 5, 7] {
            for d in 1..=4usize {
                for idx in 0..(p as u128).pow(d as u32) {
                    let f = Polynomial::monic_from_tail(&digits(idx, p, d), p);
                    assert_eq!(
                        is_irreducible(&f, p).unwrap(),
                        trial_division_irreducible(&f, p),
                        "{f} over F_{p}"
                    );
                }
            }
        }
    }

    #[test]
    fn trace_zero_counts() {
        assert_eq!(count_trace_zero_irreducibles(3, 2).unwrap(), 1);
        assert_eq!(count_trace_zero_irreducibles(7, 2).unwrap(), 3);
        assert_eq!(count_trace_zero_irreducibles(5, 3).unwrap(), 8);
        // p | d: x^3 - x + 1 and x^3 - x + 2
        assert_eq!(count_trace_zero_irreducibles(3, 3).unwrap(), 2);
    }

    #[test]
    fn trace_zero_enumeration_examples() {
        let b = Budget::ENUMERATION;
        assert_eq!(enumerate_trace_zero_irreducibles(3, 2, b).unwrap(), vec![poly(&[1, 0, 1], 3)]);
        assert_eq!(
            enumerate_trace_zero_irreducibles(7, 2, b).unwrap(),
            vec![poly(&[1, 0, 1], 7), poly(&[1, 0, 2], 7), poly(&[1, 0, 4], 7)]
        );
        assert_eq!(enumerate_trace_zero_irreducibles(5, 3, b).unwrap().len(), 8);
    }

    #[test]
    fn enumeration_matches_count() {
        for p in [3u64, 5, 7, 11, 13] {
            for d in 2..=4usize {
                let list = enumerate_trace_zero_irreducibles(p, d, Budget::ENUMERATION).unwrap();
                assert_eq!(list.len() as u128, count_trace_zero_irreducibles(p, d).unwrap(), "p={p} d={d}");
                let mut sorted = list.clone();
                sorted.sort_by_key(|f| f.high_first());
                assert_eq!(sorted, list);
                assert!(list.iter().all(|f| f.coeff(d - 1) == 0 && f.degree() == Some(d)));
            }
        }
    }

    #[test]
    fn prime_degree_count_closed_form() {
        for p in [3u64, 5, 7, 11, 13] {
            for d in [2usize, 3, 5, 7] {
                if p as usize == d {
                    continue;
                }
                let pd = (p as u128).pow(d as u32);
                assert_eq!(
                    count_trace_zero_irreducibles(p, d).unwrap(),
                    (pd - p as u128) / (d as u128 * p as u128)
                );
            }
        }
    }

    #[test]
    fn enumeration_budget_is_enforced() {
        let err = enumerate_trace_zero_irreducibles(13, 4, Budget::new(100)).unwrap_err();
        assert!(matches!(err, Error::Budget { estimate: 2197, .. }));
    }

    #[test]
    fn all_irreducibles_count() {
        for (p, d) in [(3u64, 2usize), (5, 3), (7, 2), (3, 4)] {
            let list = enumerate_irreducibles(p, d, Budget::ENUMERATION).unwrap();
            assert_eq!(list.len() as u128, count_irreducibles(p, d));
        }
    }

    #[test]
    fn minimal_polynomial_examples() {
        let f9 = FieldParams::new(3, 2).unwrap();
        assert_eq!(minimal_polynomial(&f9.generator()).unwrap(), poly(&[1, 0, 1], 3));
        let f = FieldParams::new(5, 3).unwrap();
        for c in 0..5 {
            let m = minimal_polynomial(&f.embed(c)).unwrap();
            assert_eq!(m, Polynomial::new(vec![neg_mod(c, 5), 1], 5));
        }
    }

    #[test]
    fn minimal_polynomial_vieta() {
        for (p, d) in [(5u64, 3usize), (7, 2), (3, 4)] {
            let field = FieldParams::new(p, d).unwrap();
            for i in 0..field.order() {
                let beta = ExtElem::from_raw(&field, field.coords_from_index(i));
                if beta.degree() != d {
                    continue;
                }
                let m = minimal_polynomial(&beta).unwrap();
                assert_eq!(m.degree(), Some(d));
                assert!(is_irreducible(&m, p).unwrap());
                let sign_norm = if d % 2 == 0 { beta.norm().unwrap() } else { neg_mod(beta.norm().unwrap(), p) };
                assert_eq!(m.coeff(0), sign_norm);
                assert_eq!(m.coeff(d - 1), neg_mod(beta.trace().unwrap(), p));
            }
        }
    }

    #[test]
    fn representatives_biject_with_trace_zero_irreducibles() {
        for (p, d) in [(3u64, 2usize), (5, 3), (7, 2), (5, 2), (3, 3), (3, 4), (7, 3)] {
            let reps = conjugacy_representatives(p, d, true, Budget::ENUMERATION).unwrap();
            let mut mins: Vec<Polynomial> =
                reps.iter().map(|b| minimal_polynomial(b).unwrap()).collect();
            mins.sort_by_key(|f| f.high_first());
            let omega = enumerate_trace_zero_irreducibles(p, d, Budget::ENUMERATION).unwrap();
            assert_eq!(mins, omega, "p={p} d={d}");
        }
        let all = conjugacy_representatives(5, 3, false, Budget::ENUMERATION).unwrap();
        assert_eq!(all.len() as u128, count_irreducibles(5, 3));
        let one = conjugacy_representatives(3, 2, true, Budget::ENUMERATION).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(minimal_polynomial(&one[0]).unwrap(), poly(&[1, 0, 1], 3));
    }

    #[test]
    fn representatives_are_orbit_minima() {
        let reps = conjugacy_representatives(5, 3, false, Budget::ENUMERATION).unwrap();
        for r in &reps {
            assert!(r.conjugates().iter().all(|g| g.coeffs() >= r.coeffs()));
        }
        assert!(reps.windows(2).all(|w| w[0].coeffs() < w[1].coeffs()));
    }

    /// Expand i^d f(X/i) with rational coefficients, then map to F_p.
    fn scale_by_rationals(f: &Polynomial, i: i64, p: u64) -> Polynomial {
        let d = f.degree().unwrap();
        let lead = Ratio::from_integer(i).pow(d as i32);
        let coeffs = (0..=d)
            .map(|k| {
                let c = Ratio::from_integer(f.coeff(k) as i64) / Ratio::from_integer(i).pow(k as i32) * lead;
                assert!(c.is_integer());
                c.to_integer().rem_euclid(p as i64) as u64
            })
            .collect();
        Polynomial::new(coeffs, p)
    }

    #[test]
    fn scale_poly_examples() {
        let f = poly(&[1, 0, 1], 5);
        assert_eq!(scale_poly(&f, 1, 5).unwrap(), f);
        assert_eq!(scale_poly(&f, 2, 5).unwrap(), poly(&[1, 0, 4], 5));
        let g = poly(&[1, 0, 1, 1, 0, 1], 11);
        let expected = scale_by_rationals(&g, 2, 11);
        assert_eq!(expected, poly(&[1, 0, 4, 8, 0, 10], 11));
        assert_eq!(scale_poly(&g, 2, 11).unwrap(), expected);
        assert!(matches!(scale_poly(&g, 0, 11), Err(Error::Parameter(_))));
        assert!(matches!(scale_poly(&poly(&[2, 1], 11), 3, 11), Err(Error::Parameter(_))));
    }

    #[test]
    fn scale_poly_matches_pointwise_definition() {
        let p = 13;
        let f = poly(&[1, 0, 3, 5, 7, 2], p);
        for i in 1..p {
            let fi = scale_poly(&f, i, p).unwrap();
            let inv = inv_mod(i, p).unwrap();
            for n in 0..p {
                let expected = mul_mod(pow_mod(i, 5, p), f.eval(mul_mod(n, inv, p), p), p);
                assert_eq!(fi.eval(n, p), expected);
            }
        }
    }

    #[test]
    fn scaling_preserves_irreducibility() {
        let p = 11;
        let f = poly(&[1, 0, 1, 1, 0, 4], p);
        assert!(is_irreducible(&f, p).unwrap());
        for i in 1..p {
            assert!(is_irreducible(&scale_poly(&f, i, p).unwrap(), p).unwrap());
        }
    }

    #[test]
    fn eval_examples() {
        let f = poly(&[1, 0, 1], 3);
        assert_eq!(eval_poly(&f, 2, 3), 2);
        assert_eq!(eval_poly(&f, 1, 3), 2);
        assert_eq!(eval_poly(&f, 0, 3), 1);
    }

    #[test]
    fn squarefree_product_examples() {
        let p = 11;
        let f = poly(&[1, 0, 1, 1, 0, 4], p);
        let f2 = scale_poly(&f, 2, p).unwrap();
        let f3 = scale_poly(&f, 3, p).unwrap();
        assert!(is_squarefree_product(&[(f2.clone(), 0), (f3, 0)], p));
        assert!(!is_squarefree_product(&[(f2.clone(), 4), (f2, 4)], p));
        let g = poly(&[1, 0, 1], 3);
        assert!(is_squarefree_product(&[(g.clone(), 0), (g, 1)], 3));
    }

    #[test]
    fn pth_power_is_not_squarefree() {
        // x^5 - 2 = (x - 2)^5 over F_5; its derivative vanishes
        assert!(!is_squarefree(&poly(&[1, 0, 0, 0, 0, 3], 5), 5));
    }

    #[test]
    fn shift_and_display() {
        let f = poly(&[1, 0, 1], 3);
        assert_eq!(f.shift(1, 3), poly(&[1, 2, 2], 3));
        assert_eq!(poly(&[1, 0, 4, 8, 0, 10], 11).to_string(), "x^5 + 4x^3 + 8x^2 + 10");
        assert_eq!(poly(&[2, 1], 5).to_string(), "2x + 1");
        assert_eq!(negate(&f, 3), poly(&[2, 0, 2], 3));
    }

    #[test]
    fn divrem_reconstructs() {
        let p = 7;
        let a = poly(&[3, 1, 4, 1, 5], p);
        let b = poly(&[2, 6, 5], p);
        let (q, r) = divrem(&a, &b, p).unwrap();
        assert_eq!(add(&mul(&q, &b, p), &r, p), a);
        assert!(r.degree() < b.degree());
        assert!(divrem(&a, &Polynomial::zero(), p).is_err());
    }
}
