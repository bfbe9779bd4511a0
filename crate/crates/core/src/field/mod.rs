//! Exact arithmetic in finite fields `F_q`, `q = p^f`.
//!
//! Elements are residues of polynomials over `F_p` modulo a monic irreducible
//! modulus. Each element has a canonical index `c_0 + c_1 p + ... + c_{f-1} p^{f-1}`
//! built from its coefficient vector; every table in this crate is keyed by
//! that index, so index `0` is zero, index `1` is one, and index `p` is the
//! residue class of `t` (a root of the modulus) when `f > 1`.
//!
//! Small fields (`q <= 256`) cache addition and multiplication tables computed
//! from the polynomial arithmetic; larger fields compute on demand.

mod linalg;
mod poly;

pub use linalg::Matrix;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 16;

const TABLE_LIMIT: u32 = 256;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("modulus {modulus:?} is reducible over F_{p}")]
    ReducibleModulus { p: u32, modulus: Vec<u32> },
    #[error("modulus must be a monic polynomial of degree {expected} with coefficients below {p}, got {found:?}")]
    DegreeMismatch { expected: u32, p: u32, found: Vec<u32> },
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {0} exceeds the supported maximum of 2^16")]
    TooLarge(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    MixedFields,
    #[error("Frobenius exponent {k} out of range for degree {f}")]
    ExponentOutOfRange { k: u32, f: u32 },
    #[error("Vandermonde nodes must be pairwise distinct (repeat at positions {0} and {1})")]
    DuplicateLambda(usize, usize),
    #[error("vector length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("element index {index} out of range for a field of order {q}")]
    IndexOutOfRange { index: u32, q: u32 },
}

struct Inner {
    p: u32,
    f: u32,
    q: u32,
    modulus: Vec<u32>,
    primitive: u32,
    add: Option<Vec<u16>>,
    mul: Option<Vec<u16>>,
}

/// A finite field `F_{p^f}`. Cheap to clone; immutable after construction.
#[derive(Clone)]
pub struct FiniteField(Arc<Inner>);

/// Serialized form of a field: `{"p":…, "f":…, "modulus":[c0,…,cf]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub p: u32,
    pub f: u32,
    pub modulus: Vec<u32>,
}

pub(crate) fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl FiniteField {
    /// Builds `F_{p^f}`. With no modulus, the smallest monic irreducible of
    /// degree `f` is used, ordering candidates by the integer
    /// `c_0 + c_1 p + ... + c_{f-1} p^{f-1}` (reading coefficients from the
    /// top degree down).
    pub fn new(p: u32, f: u32, modulus: Option<&[u32]>) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if f == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let q = (p as u64).checked_pow(f).unwrap_or(u64::MAX);
        if q > MAX_ORDER {
            return Err(FieldError::TooLarge(q));
        }
        let q = q as u32;
        let modulus = match modulus {
            Some(m) => {
                let ok = m.len() == f as usize + 1 && m[f as usize] == 1 && m.iter().all(|&c| c < p);
                if !ok {
                    return Err(FieldError::DegreeMismatch { expected: f, p, found: m.to_vec() });
                }
                if !poly::is_irreducible(m, p) {
                    return Err(FieldError::ReducibleModulus { p, modulus: m.to_vec() });
                }
                m.to_vec()
            }
            None => poly::smallest_irreducible(p, f),
        };
        let mut inner = Inner { p, f, q, modulus, primitive: 0, add: None, mul: None };
        if q <= TABLE_LIMIT {
            let probe = FiniteField(Arc::new(Inner { modulus: inner.modulus.clone(), add: None, mul: None, ..inner }));
            let n = q as usize;
            let mut add = vec![0u16; n * n];
            let mut mul = vec![0u16; n * n];
            for a in 0..q {
                for b in 0..q {
                    add[a as usize * n + b as usize] = probe.add_slow(a, b) as u16;
                    mul[a as usize * n + b as usize] = probe.mul_slow(a, b) as u16;
                }
            }
            inner.add = Some(add);
            inner.mul = Some(mul);
        }
        let mut field = FiniteField(Arc::new(inner));
        let primitive = field.find_primitive();
        Arc::get_mut(&mut field.0).expect("unshared during construction").primitive = primitive;
        Ok(field)
    }

    /// The prime field `F_p`.
    pub fn prime(p: u32) -> Result<Self, FieldError> {
        Self::new(p, 1, None)
    }

    /// `F_q` for a prime power `q` with the default modulus.
    pub fn of_order(q: u32) -> Result<Self, FieldError> {
        let factors = prime_factors(q as u64);
        if factors.len() != 1 {
            return Err(FieldError::NotPrime(q));
        }
        let p = factors[0] as u32;
        let mut f = 0;
        let mut r = q;
        while r > 1 {
            r /= p;
            f += 1;
        }
        Self::new(p, f, None)
    }

    pub fn from_descriptor(d: &FieldDescriptor) -> Result<Self, FieldError> {
        Self::new(d.p, d.f, Some(&d.modulus))
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor { p: self.p(), f: self.degree(), modulus: self.modulus().to_vec() }
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }

    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.f
    }

    pub fn order(&self) -> u32 {
        self.0.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    /// A generator of the multiplicative group (smallest index of order `q-1`).
    pub fn primitive(&self) -> u32 {
        self.0.primitive
    }

    pub fn same_field(&self, other: &FiniteField) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.f == other.0.f && self.0.modulus == other.0.modulus)
    }

    pub fn elements(&self) -> std::ops::Range<u32> {
        0..self.0.q
    }

    pub fn nonzero(&self) -> std::ops::Range<u32> {
        1..self.0.q
    }

    pub fn element(&self, index: u32) -> Result<FieldElement, FieldError> {
        if index >= self.0.q {
            return Err(FieldError::IndexOutOfRange { index, q: self.0.q });
        }
        Ok(FieldElement { field: self.clone(), value: index })
    }

    /// Embeds an integer through the prime field.
    pub fn from_int(&self, n: i64) -> u32 {
        n.rem_euclid(self.0.p as i64) as u32
    }

    pub fn coeffs(&self, a: u32) -> Vec<u32> {
        let p = self.0.p;
        let mut v = Vec::with_capacity(self.0.f as usize);
        let mut r = a;
        for _ in 0..self.0.f {
            v.push(r % p);
            r /= p;
        }
        v
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> u32 {
        coeffs.iter().rev().fold(0u32, |acc, &c| acc * self.0.p + c % self.0.p)
    }

    fn add_slow(&self, a: u32, b: u32) -> u32 {
        let p = self.0.p;
        let (mut x, mut y, mut out, mut place) = (a, b, 0u32, 1u32);
        for _ in 0..self.0.f {
            out += ((x % p + y % p) % p) * place;
            x /= p;
            y /= p;
            place *= p;
        }
        out
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        let prod = poly::mul(&self.coeffs(a), &self.coeffs(b), self.0.p);
        let (_, r) = poly::divrem(&prod, &self.0.modulus, self.0.p);
        self.from_coeffs(&r)
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        match &self.0.add {
            Some(t) => t[(a * self.0.q + b) as usize] as u32,
            None => self.add_slow(a, b),
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        let p = self.0.p;
        if p == 2 {
            return a;
        }
        let (mut x, mut out, mut place) = (a, 0u32, 1u32);
        for _ in 0..self.0.f {
            out += ((p - x % p) % p) * place;
            x /= p;
            place *= p;
        }
        out
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        match &self.0.mul {
            Some(t) => t[(a * self.0.q + b) as usize] as u32,
            None => self.mul_slow(a, b),
        }
    }

    /// Multiplicative inverse by the extended Euclidean algorithm on polynomials.
    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let r = poly::inverse_mod(&self.coeffs(a), &self.0.modulus, self.0.p)?;
        Some(self.from_coeffs(&r))
    }

    pub fn div(&self, a: u32, b: u32) -> Option<u32> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative order of a nonzero element.
    pub fn mult_order(&self, a: u32) -> Option<u64> {
        if a == 0 {
            return None;
        }
        let mut order = (self.0.q - 1) as u64;
        for r in prime_factors(order) {
            while order.is_multiple_of(r) && self.pow(a, order / r) == 1 {
                order /= r;
            }
        }
        Some(order)
    }

    fn find_primitive(&self) -> u32 {
        if self.0.q == 2 {
            return 1;
        }
        let n = (self.0.q - 1) as u64;
        let factors = prime_factors(n);
        (1..self.0.q)
            .find(|&g| factors.iter().all(|&r| self.pow(g, n / r) != 1))
            .expect("multiplicative group of a finite field is cyclic")
    }

    /// Discrete logarithm to the base [`Self::primitive`], by scanning.
    pub fn log(&self, a: u32) -> Option<u64> {
        if a == 0 {
            return None;
        }
        let g = self.primitive();
        let mut x = 1u32;
        for k in 0..(self.0.q - 1) as u64 {
            if x == a {
                return Some(k);
            }
            x = self.mul(x, g);
        }
        None
    }

    pub fn is_square(&self, a: u32) -> bool {
        if a == 0 || self.0.p == 2 {
            return true;
        }
        self.pow(a, ((self.0.q - 1) / 2) as u64) == 1
    }

    pub fn frobenius(&self, k: u32) -> Result<FieldAutomorphism, FieldError> {
        if k >= self.0.f {
            return Err(FieldError::ExponentOutOfRange { k, f: self.0.f });
        }
        Ok(FieldAutomorphism { field: self.clone(), k })
    }

    /// `x ↦ x^{p^k}` for any `k`, reduced modulo the degree.
    pub fn frobenius_apply(&self, x: u32, k: u32) -> u32 {
        let mut y = x;
        for _ in 0..(k % self.0.f) {
            y = self.pow(y, self.0.p as u64);
        }
        y
    }
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}(modulus {:?})", self.0.q, self.0.modulus)
    }
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.same_field(other)
    }
}

impl Eq for FiniteField {}

/// An element of a [`FiniteField`], carried together with its field.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    field: FiniteField,
    value: u32,
}

impl FieldElement {
    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn index(&self) -> u32 {
        self.value
    }

    pub fn coeffs(&self) -> Vec<u32> {
        self.field.coeffs(self.value)
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn same(&self, other: &FieldElement) -> Result<(), FieldError> {
        if self.field.same_field(&other.field) {
            Ok(())
        } else {
            Err(FieldError::MixedFields)
        }
    }

    fn wrap(&self, value: u32) -> FieldElement {
        FieldElement { field: self.field.clone(), value }
    }

    pub fn try_add(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.same(other)?;
        Ok(self.wrap(self.field.add(self.value, other.value)))
    }

    pub fn try_sub(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.same(other)?;
        Ok(self.wrap(self.field.sub(self.value, other.value)))
    }

    pub fn try_mul(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.same(other)?;
        Ok(self.wrap(self.field.mul(self.value, other.value)))
    }

    pub fn try_div(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.same(other)?;
        self.try_mul(&other.inv()?)
    }

    pub fn neg(&self) -> FieldElement {
        self.wrap(self.field.neg(self.value))
    }

    pub fn inv(&self) -> Result<FieldElement, FieldError> {
        self.field.inv(self.value).map(|v| self.wrap(v)).ok_or(FieldError::DivisionByZero)
    }

    pub fn pow(&self, e: u64) -> FieldElement {
        self.wrap(self.field.pow(self.value, e))
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $try:ident) => {
        impl std::ops::$trait for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                self.$try(rhs).expect("operands from different fields")
            }
        }
        impl std::ops::$trait for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$try(&rhs).expect("operands from different fields")
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl std::ops::Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement::neg(self)
    }
}

/// The Frobenius power `x ↦ x^{p^k}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldAutomorphism {
    field: FiniteField,
    k: u32,
}

impl FieldAutomorphism {
    pub fn exponent(&self) -> u32 {
        self.k
    }

    pub fn apply(&self, x: &FieldElement) -> Result<FieldElement, FieldError> {
        if !x.field.same_field(&self.field) {
            return Err(FieldError::MixedFields);
        }
        Ok(x.wrap(self.field.frobenius_apply(x.value, self.k)))
    }

    pub fn apply_index(&self, x: u32) -> u32 {
        self.field.frobenius_apply(x, self.k)
    }

    /// Apply `self` first, then `other`.
    pub fn then(&self, other: &FieldAutomorphism) -> Result<FieldAutomorphism, FieldError> {
        if !self.field.same_field(&other.field) {
            return Err(FieldError::MixedFields);
        }
        Ok(FieldAutomorphism { field: self.field.clone(), k: (self.k + other.k) % self.field.degree() })
    }

    pub fn order(&self) -> u32 {
        let f = self.field.degree();
        f / gcd(f, self.k)
    }

    pub fn fixed_points(&self) -> Vec<u32> {
        self.field.elements().filter(|&x| self.apply_index(x) == x).collect()
    }
}

pub(crate) fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Solves `w_i = Σ_j λ_i^{j-1} v_j` for the vectors `v_1, …, v_n`.
pub fn vandermonde_solve(
    lambdas: &[FieldElement],
    w: &[Vec<FieldElement>],
) -> Result<Vec<Vec<FieldElement>>, FieldError> {
    let n = lambdas.len();
    if w.len() != n {
        return Err(FieldError::LengthMismatch { expected: n, found: w.len() });
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let field = lambdas[0].field.clone();
    for x in lambdas.iter().chain(w.iter().flatten()) {
        if !x.field.same_field(&field) {
            return Err(FieldError::MixedFields);
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if lambdas[i].value == lambdas[j].value {
                return Err(FieldError::DuplicateLambda(i, j));
            }
        }
    }
    let m = w[0].len();
    if let Some(bad) = w.iter().find(|v| v.len() != m) {
        return Err(FieldError::LengthMismatch { expected: m, found: bad.len() });
    }
    let a = Matrix::from_fn(n, n, |i, j| field.pow(lambdas[i].value, j as u64));
    let inv = a.inverse(&field).expect("Vandermonde matrix with distinct nodes is invertible");
    let rhs = Matrix::from_fn(n, m, |i, k| w[i][k].value);
    let sol = inv.mul(&rhs, &field);
    Ok((0..n)
        .map(|j| (0..m).map(|k| FieldElement { field: field.clone(), value: sol.get(j, k) }).collect())
        .collect())
}
