//! Arithmetic over `F_p` and `F_{p^d}` and the characters used by the constructions.
//!
//! Elements of `F_{p^d}` are stored as coordinate vectors in the polynomial
//! basis `1, x, ..., x^{d-1}` modulo a fixed monic irreducible polynomial.
//! The modulus is the lexicographically smallest monic irreducible of degree
//! `d` (coefficients compared from `x^{d-1}` down to the constant term), so
//! every run agrees on the basis.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poly::{self, Polynomial};

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

pub(crate) fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

pub(crate) fn neg_mod(a: u64, p: u64) -> u64 {
    if a == 0 {
        0
    } else {
        p - a
    }
}

pub(crate) fn pow_mod(base: u64, mut exp: u128, p: u64) -> u64 {
    let mut result = 1 % p;
    let mut b = base % p;
    while exp > 0 {
        if exp & 1 == 1 {
            result = mul_mod(result, b, p);
        }
        b = mul_mod(b, b, p);
        exp >>= 1;
    }
    result
}

/// Inverse of a nonzero residue modulo a prime.
pub(crate) fn inv_mod(a: u64, p: u64) -> Result<u64> {
    if a.is_multiple_of(p) {
        return Err(Error::Domain(format!("0 has no inverse modulo {p}")));
    }
    Ok(pow_mod(a, (p - 2) as u128, p))
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d as u128, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Distinct prime factors in increasing order.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n.is_multiple_of(q) {
            out.push(q);
            while n.is_multiple_of(q) {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub(crate) fn check_odd_prime(p: u64) -> Result<()> {
    if p < 3 || !is_prime(p) {
        return Err(Error::param(format!("p = {p} must be an odd prime")));
    }
    Ok(())
}

/// Legendre symbol `(a/p)` for an odd prime `p` and `0 <= a < p`.
pub fn legendre(a: u64, p: u64) -> Result<i8> {
    check_odd_prime(p)?;
    if a >= p {
        return Err(Error::param(format!("residue {a} not reduced modulo {p}")));
    }
    Ok(legendre_unchecked(a, p))
}

/// Euler's criterion without validating `p`; `a` is reduced first.
pub(crate) fn legendre_unchecked(a: u64, p: u64) -> i8 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    if pow_mod(a, ((p - 1) / 2) as u128, p) == 1 {
        1
    } else {
        -1
    }
}

/// Smallest positive primitive root modulo an odd prime.
pub fn primitive_root(p: u64) -> Result<u64> {
    check_odd_prime(p)?;
    let factors = prime_factors(p - 1);
    (2..p)
        .find(|&g| {
            factors
                .iter()
                .all(|&q| pow_mod(g, ((p - 1) / q) as u128, p) != 1)
        })
        .ok_or_else(|| Error::Internal(format!("no primitive root found modulo {p}")))
}

/// Multiplicative character of order `k` on `F_p^*`, as symbol indices.
///
/// `index(m) = ind_g(m) mod k` where `g` is the smallest primitive root;
/// index `j` stands for the root of unity `exp(2 pi i j / k)`.
#[derive(Clone, Debug)]
pub struct CharTable {
    p: u64,
    k: u32,
    generator: u64,
    dlog: Vec<u32>,
}

impl CharTable {
    pub fn new(p: u64, k: u32) -> Result<Self> {
        check_odd_prime(p)?;
        if k == 0 || !(p - 1).is_multiple_of(k as u64) {
            return Err(Error::param(format!(
                "character order k = {k} must divide p - 1 = {}",
                p - 1
            )));
        }
        let generator = primitive_root(p)?;
        let mut dlog = vec![0u32; p as usize];
        let mut acc = 1u64;
        for e in 0..(p - 1) {
            dlog[acc as usize] = e as u32;
            acc = mul_mod(acc, generator, p);
        }
        Ok(CharTable {
            p,
            k,
            generator,
            dlog,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn order(&self) -> u32 {
        self.k
    }

    pub fn generator(&self) -> u64 {
        self.generator
    }

    pub fn discrete_log(&self, m: u64) -> Result<u32> {
        let m = m % self.p;
        if m == 0 {
            return Err(Error::Domain("discrete log of 0".into()));
        }
        Ok(self.dlog[m as usize])
    }

    pub fn index(&self, m: u64) -> Result<u32> {
        Ok(self.discrete_log(m)? % self.k)
    }
}

/// One-shot character evaluation; build a [`CharTable`] for repeated use.
pub fn char_k(m: u64, p: u64, k: u32) -> Result<u32> {
    let table = CharTable::new(p, k)?;
    if m.is_multiple_of(p) {
        return Err(Error::Domain(format!("character of order {k} at 0")));
    }
    table.index(m)
}

/// Arithmetic context for `F_{p^d}`.
#[derive(Clone, Debug)]
pub struct FieldParams {
    p: u64,
    d: usize,
    modulus: Polynomial,
    /// Column `j` holds the coordinates of `x^{j p}`; Frobenius is this linear map.
    frobenius: Vec<Vec<u64>>,
}

impl PartialEq for FieldParams {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.modulus == other.modulus
    }
}

impl Eq for FieldParams {}

impl FieldParams {
    /// Field of order `p^d` with the canonical (smallest) modulus.
    pub fn new(p: u64, d: usize) -> Result<Arc<Self>> {
        check_odd_prime(p)?;
        if d == 0 {
            return Err(Error::param("extension degree must be at least 1"));
        }
        let modulus = poly::smallest_irreducible(p, d)?;
        Ok(Arc::new(Self::build(p, modulus)))
    }

    pub fn with_modulus(p: u64, modulus: Polynomial) -> Result<Arc<Self>> {
        check_odd_prime(p)?;
        if !modulus.is_monic() {
            return Err(Error::param(format!("modulus {modulus} is not monic")));
        }
        if !poly::is_irreducible(&modulus, p)? {
            return Err(Error::param(format!(
                "modulus {modulus} is reducible over F_{p}"
            )));
        }
        Ok(Arc::new(Self::build(p, modulus)))
    }

    fn build(p: u64, modulus: Polynomial) -> Self {
        let d = modulus.degree().expect("modulus is nonzero");
        let mut params = FieldParams {
            p,
            d,
            modulus,
            frobenius: Vec::new(),
        };
        let xp = params.reduce(poly::powmod(&Polynomial::x(), p as u128, &params.modulus, p).coeffs());
        let mut cols = Vec::with_capacity(d);
        let mut cur = params.reduce(&[1]);
        for _ in 0..d {
            cols.push(cur.clone());
            cur = params.mul_coords(&cur, &xp);
        }
        params.frobenius = cols;
        params
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn modulus(&self) -> &Polynomial {
        &self.modulus
    }

    /// `p^d`.
    pub fn order(&self) -> u128 {
        (self.p as u128).pow(self.d as u32)
    }

    pub(crate) fn reduce(&self, coeffs: &[u64]) -> Vec<u64> {
        let p = self.p;
        let d = self.d;
        let mut buf: Vec<u64> = coeffs.iter().map(|c| c % p).collect();
        let m = self.modulus.coeffs();
        if buf.len() > d {
            for i in (d..buf.len()).rev() {
                let c = buf[i];
                if c == 0 {
                    continue;
                }
                buf[i] = 0;
                for j in 0..d {
                    let t = mul_mod(c, m[j], p);
                    buf[i - d + j] = sub_mod(buf[i - d + j], t, p);
                }
            }
        }
        buf.resize(d, 0);
        buf
    }

    pub(crate) fn add_coords(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(&x, &y)| add_mod(x, y, self.p)).collect()
    }

    pub(crate) fn sub_coords(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(&x, &y)| sub_mod(x, y, self.p)).collect()
    }

    pub(crate) fn mul_coords(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let p = self.p;
        let mut prod = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = add_mod(prod[i + j], mul_mod(x, y, p), p);
            }
        }
        self.reduce(&prod)
    }

    pub(crate) fn pow_coords(&self, a: &[u64], mut exp: u128) -> Vec<u64> {
        let mut result = self.reduce(&[1]);
        let mut base = a.to_vec();
        while exp > 0 {
            if exp & 1 == 1 {
                result = self.mul_coords(&result, &base);
            }
            base = self.mul_coords(&base, &base);
            exp >>= 1;
        }
        result
    }

    pub(crate) fn frobenius_coords(&self, a: &[u64]) -> Vec<u64> {
        let p = self.p;
        let mut out = vec![0u64; self.d];
        for (j, &c) in a.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (i, &m) in self.frobenius[j].iter().enumerate() {
                out[i] = add_mod(out[i], mul_mod(c, m, p), p);
            }
        }
        out
    }

    /// Coordinates of the element with lexicographic rank `index`
    /// (coordinate 0 most significant).
    pub(crate) fn coords_from_index(&self, mut index: u128) -> Vec<u64> {
        let mut coords = vec![0u64; self.d];
        for slot in coords.iter_mut().rev() {
            *slot = (index % self.p as u128) as u64;
            index /= self.p as u128;
        }
        coords
    }
}

/// Convenience constructors that need the shared handle.
pub trait FieldHandle {
    fn element(&self, coeffs: &[u64]) -> Result<ExtElem>;
    fn zero(&self) -> ExtElem;
    fn one(&self) -> ExtElem;
    fn embed(&self, c: u64) -> ExtElem;
    /// The class of `x`, i.e. the basis generator.
    fn generator(&self) -> ExtElem;
}

impl FieldHandle for Arc<FieldParams> {
    fn element(&self, coeffs: &[u64]) -> Result<ExtElem> {
        if coeffs.len() > self.d {
            return Err(Error::param(format!(
                "{} coordinates for a degree-{} extension",
                coeffs.len(),
                self.d
            )));
        }
        if let Some(c) = coeffs.iter().find(|&&c| c >= self.p) {
            return Err(Error::param(format!("coordinate {c} not reduced modulo {}", self.p)));
        }
        let mut v = coeffs.to_vec();
        v.resize(self.d, 0);
        Ok(ExtElem {
            field: Arc::clone(self),
            coeffs: v,
        })
    }

    fn zero(&self) -> ExtElem {
        ExtElem {
            field: Arc::clone(self),
            coeffs: vec![0; self.d],
        }
    }

    fn one(&self) -> ExtElem {
        self.embed(1)
    }

    fn embed(&self, c: u64) -> ExtElem {
        ExtElem {
            field: Arc::clone(self),
            coeffs: self.reduce(&[c % self.p]),
        }
    }

    fn generator(&self) -> ExtElem {
        ExtElem {
            field: Arc::clone(self),
            coeffs: self.reduce(&[0, 1]),
        }
    }
}

/// Element of `F_{p^d}`.
#[derive(Clone, PartialEq, Eq)]
pub struct ExtElem {
    field: Arc<FieldParams>,
    coeffs: Vec<u64>,
}

impl fmt::Debug for ExtElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExtElem{:?}", self.coeffs)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExtOp {
    Add,
    Sub,
    Mul,
    /// Inverse of the left operand; the right operand is ignored.
    Inv,
    Pow(u128),
}

/// Dispatching form of the extension-field arithmetic.
pub fn ext_arith(lhs: &ExtElem, rhs: &ExtElem, op: ExtOp) -> Result<ExtElem> {
    match op {
        ExtOp::Add => lhs.add(rhs),
        ExtOp::Sub => lhs.sub(rhs),
        ExtOp::Mul => lhs.mul(rhs),
        ExtOp::Inv => lhs.inv(),
        ExtOp::Pow(e) => Ok(lhs.pow(e)),
    }
}

impl ExtElem {
    pub(crate) fn from_raw(field: &Arc<FieldParams>, coeffs: Vec<u64>) -> Self {
        debug_assert_eq!(coeffs.len(), field.d);
        ExtElem {
            field: Arc::clone(field),
            coeffs,
        }
    }

    pub fn field(&self) -> &Arc<FieldParams> {
        &self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// The `F_p` value when the element lies in the prime field.
    pub fn as_base(&self) -> Option<u64> {
        if self.coeffs[1..].iter().all(|&c| c == 0) {
            Some(self.coeffs[0])
        } else {
            None
        }
    }

    fn same_field(&self, other: &ExtElem) -> Result<()> {
        if Arc::ptr_eq(&self.field, &other.field) || self.field == other.field {
            Ok(())
        } else {
            Err(Error::param(
                "operands belong to different extension fields",
            ))
        }
    }

    fn with(&self, coeffs: Vec<u64>) -> ExtElem {
        ExtElem {
            field: Arc::clone(&self.field),
            coeffs,
        }
    }

    pub fn add(&self, rhs: &ExtElem) -> Result<ExtElem> {
        self.same_field(rhs)?;
        Ok(self.with(self.field.add_coords(&self.coeffs, &rhs.coeffs)))
    }

    pub fn sub(&self, rhs: &ExtElem) -> Result<ExtElem> {
        self.same_field(rhs)?;
        Ok(self.with(self.field.sub_coords(&self.coeffs, &rhs.coeffs)))
    }

    pub fn mul(&self, rhs: &ExtElem) -> Result<ExtElem> {
        self.same_field(rhs)?;
        Ok(self.with(self.field.mul_coords(&self.coeffs, &rhs.coeffs)))
    }

    pub fn neg(&self) -> ExtElem {
        let p = self.field.p;
        self.with(self.coeffs.iter().map(|&c| neg_mod(c, p)).collect())
    }

    pub fn pow(&self, exp: u128) -> ExtElem {
        self.with(self.field.pow_coords(&self.coeffs, exp))
    }

    pub fn inv(&self) -> Result<ExtElem> {
        if self.is_zero() {
            return Err(Error::Domain("inverse of zero in F_{p^d}".into()));
        }
        Ok(self.pow(self.field.order() - 2))
    }

    /// `alpha^p`.
    pub fn frobenius(&self) -> ExtElem {
        self.with(self.field.frobenius_coords(&self.coeffs))
    }

    /// `alpha, alpha^p, ..., alpha^{p^{d-1}}`.
    pub fn conjugates(&self) -> Vec<ExtElem> {
        let mut out = Vec::with_capacity(self.field.d);
        let mut cur = self.clone();
        for _ in 0..self.field.d {
            let next = cur.frobenius();
            out.push(cur);
            cur = next;
        }
        out
    }

    /// Degree of the element over `F_p`: the size of its Frobenius orbit.
    pub fn degree(&self) -> usize {
        let mut cur = self.frobenius();
        let mut t = 1;
        while cur.coeffs != self.coeffs {
            cur = cur.frobenius();
            t += 1;
        }
        t
    }

    /// Absolute trace to `F_p`.
    pub fn trace(&self) -> Result<u64> {
        let mut acc = vec![0u64; self.field.d];
        for c in self.conjugates() {
            acc = self.field.add_coords(&acc, &c.coeffs);
        }
        self.with(acc)
            .as_base()
            .ok_or_else(|| Error::Internal(format!("trace of {self:?} left F_p")))
    }

    /// Absolute norm to `F_p`, as the product of the conjugates.
    pub fn norm(&self) -> Result<u64> {
        let mut acc = self.field.reduce(&[1]);
        for c in self.conjugates() {
            acc = self.field.mul_coords(&acc, &c.coeffs);
        }
        self.with(acc)
            .as_base()
            .ok_or_else(|| Error::Internal(format!("norm of {self:?} left F_p")))
    }

    /// Quadratic character of `F_{p^d}`: the Legendre symbol of the norm.
    pub fn quad_char(&self) -> Result<i8> {
        Ok(legendre_unchecked(self.norm()?, self.field.p))
    }
}
