//! Sparse multivariate polynomials over F_p or Z, plus Laurent polynomials
//! stored as `(body, shift)` pairs.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{type_err, Result};
use crate::modarith::{FpElement, PrimeField};

/// Products whose dense bounding box has at most this many cells are
/// accumulated in a flat array instead of a map.
const DENSE_LIMIT: usize = 1_000_000;

/// A commutative coefficient ring.
pub trait Ring: Clone + fmt::Debug + PartialEq {
    type Elem: Clone + fmt::Debug + PartialEq;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn fmt_elem(&self, a: &Self::Elem) -> String;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn mul_add_assign(&self, acc: &mut Self::Elem, a: &Self::Elem, b: &Self::Elem) {
        *acc = self.add(acc, &self.mul(a, b));
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut acc = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }
}

impl Ring for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        self.add_raw(*a, *b)
    }
    fn neg(&self, a: &u64) -> u64 {
        self.neg_raw(*a)
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        self.mul_raw(*a, *b)
    }
    fn from_i64(&self, v: i64) -> u64 {
        self.reduce_i64(v)
    }
    fn fmt_elem(&self, a: &u64) -> String {
        a.to_string()
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        self.sub_raw(*a, *b)
    }
    fn mul_add_assign(&self, acc: &mut u64, a: &u64, b: &u64) {
        *acc = (*acc + a * b) % self.p();
    }
}

/// The integers with arbitrary precision.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct IntegerRing;

impl Ring for IntegerRing {
    type Elem = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn from_i64(&self, v: i64) -> BigInt {
        BigInt::from(v)
    }
    fn fmt_elem(&self, a: &BigInt) -> String {
        a.to_string()
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }
    fn mul_add_assign(&self, acc: &mut BigInt, a: &BigInt, b: &BigInt) {
        *acc += a * b;
    }
}

/// Sparse polynomial: exponent vector -> nonzero coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiPoly<R: Ring> {
    ring: R,
    nvars: usize,
    terms: BTreeMap<Vec<u32>, R::Elem>,
}

pub type FpPoly = MultiPoly<PrimeField>;
pub type ZPoly = MultiPoly<IntegerRing>;

impl<R: Ring> MultiPoly<R> {
    pub fn zero(ring: &R, nvars: usize) -> Self {
        MultiPoly {
            ring: ring.clone(),
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: &R, nvars: usize, c: R::Elem) -> Self {
        Self::monomial(ring, vec![0; nvars], c)
    }

    pub fn one(ring: &R, nvars: usize) -> Self {
        Self::constant(ring, nvars, ring.one())
    }

    /// `x_i`.
    pub fn var(ring: &R, nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable {i} out of range for {nvars} variables");
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(ring, e, ring.one())
    }

    pub fn monomial(ring: &R, exps: Vec<u32>, c: R::Elem) -> Self {
        let mut p = Self::zero(ring, exps.len());
        if !ring.is_zero(&c) {
            p.terms.insert(exps, c);
        }
        p
    }

    /// Builds from `(exponents, coefficient)` pairs, summing duplicates.
    pub fn from_terms<I>(ring: &R, nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, R::Elem)>,
    {
        let mut p = Self::zero(ring, nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(type_err!("exponent vector of length {} in a {nvars}-variable polynomial", e.len()));
            }
            p.add_term(e, &c);
        }
        Ok(p)
    }

    /// Univariate-in-`x_i` polynomial from a dense coefficient list, lowest degree first.
    pub fn from_univariate(ring: &R, nvars: usize, i: usize, coeffs: &[R::Elem]) -> Self {
        let mut p = Self::zero(ring, nvars);
        for (d, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; nvars];
            e[i] = d as u32;
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Vec<u32>, c: &R::Elem) {
        if self.ring.is_zero(c) {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = self.ring.add(o.get(), c);
                if self.ring.is_zero(&s) {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in lexicographic exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &R::Elem)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    /// Coefficient of `x^d`, zero if absent.
    pub fn coefficient(&self, d: &[u32]) -> Result<R::Elem> {
        if d.len() != self.nvars {
            return Err(type_err!("exponent vector of length {} for {} variables", d.len(), self.nvars));
        }
        Ok(self.terms.get(d).cloned().unwrap_or_else(|| self.ring.zero()))
    }

    /// Highest exponent of each variable (zeros for the zero polynomial).
    pub fn degree_bounds(&self) -> Vec<u32> {
        let mut b = vec![0; self.nvars];
        for e in self.terms.keys() {
            for (bi, &ei) in b.iter_mut().zip(e) {
                *bi = (*bi).max(ei);
            }
        }
        b
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().map(|e| e.iter().map(|&x| x as u64).sum()).max()
    }

    /// True when every term has total degree `d`.
    pub fn is_homogeneous_of_degree(&self, d: u64) -> bool {
        self.terms.keys().all(|e| e.iter().map(|&x| x as u64).sum::<u64>() == d)
    }

    fn compatible(&self, other: &Self) -> Result<()> {
        if self.ring != other.ring {
            return Err(type_err!("ring mismatch: {:?} vs {:?}", self.ring, other.ring));
        }
        if self.nvars != other.nvars {
            return Err(type_err!("variable count mismatch: {} vs {}", self.nvars, other.nvars));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), &self.ring.neg(c));
        }
        Ok(out)
    }

    pub fn scale(&self, k: &R::Elem) -> Self {
        let mut out = Self::zero(&self.ring, self.nvars);
        for (e, c) in &self.terms {
            let v = self.ring.mul(c, k);
            if !self.ring.is_zero(&v) {
                out.terms.insert(e.clone(), v);
            }
        }
        out
    }

    /// Multiplies by the monomial `x^shift`.
    pub fn shift(&self, shift: &[u32]) -> Result<Self> {
        if shift.len() != self.nvars {
            return Err(type_err!("shift of length {} for {} variables", shift.len(), self.nvars));
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.iter().zip(shift).map(|(a, b)| a + b).collect(), c.clone()))
            .collect();
        Ok(MultiPoly {
            ring: self.ring.clone(),
            nvars: self.nvars,
            terms,
        })
    }

    /// Exact product.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(&self.ring, self.nvars));
        }
        let (ba, bb) = (self.degree_bounds(), other.degree_bounds());
        let dims: Vec<usize> = ba.iter().zip(&bb).map(|(a, b)| (a + b + 1) as usize).collect();
        let cells = dims.iter().try_fold(1usize, |acc, &d| acc.checked_mul(d));
        let pairs = self.len().saturating_mul(other.len());
        match cells {
            Some(cells) if cells <= DENSE_LIMIT && cells <= pairs.saturating_mul(8) + 4096 => {
                Ok(self.mul_dense(other, &dims, cells))
            }
            _ => Ok(self.mul_sparse(other)),
        }
    }

    fn mul_sparse(&self, other: &Self) -> Self {
        let mut out = Self::zero(&self.ring, self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, &self.ring.mul(ca, cb));
            }
        }
        out
    }

    fn mul_dense(&self, other: &Self, dims: &[usize], cells: usize) -> Self {
        // Row-major with x_0 most significant, so index order is lexicographic.
        let mut strides = vec![1usize; dims.len()];
        for i in (0..dims.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * dims[i + 1];
        }
        let index = |e: &[u32]| -> usize { e.iter().zip(&strides).map(|(&x, s)| x as usize * s).sum() };
        let a: Vec<(usize, &R::Elem)> = self.terms.iter().map(|(e, c)| (index(e), c)).collect();
        let b: Vec<(usize, &R::Elem)> = other.terms.iter().map(|(e, c)| (index(e), c)).collect();
        let mut acc = vec![self.ring.zero(); cells];
        for &(ia, ca) in &a {
            for &(ib, cb) in &b {
                self.ring.mul_add_assign(&mut acc[ia + ib], ca, cb);
            }
        }
        let mut out = Self::zero(&self.ring, self.nvars);
        for (idx, c) in acc.into_iter().enumerate() {
            if self.ring.is_zero(&c) {
                continue;
            }
            let mut rem = idx;
            let e: Vec<u32> = strides
                .iter()
                .map(|s| {
                    let q = rem / s;
                    rem %= s;
                    q as u32
                })
                .collect();
            out.terms.insert(e, c);
        }
        out
    }

    /// `self^e` by repeated squaring; `P^0 = 1`.
    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::one(&self.ring, self.nvars);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.try_mul(&base).expect("same ring");
            }
            e >>= 1;
            if e > 0 {
                base = base.try_mul(&base).expect("same ring");
            }
        }
        acc
    }

    /// Evaluation at a point, with `0^0 = 1`.
    pub fn evaluate(&self, point: &[R::Elem]) -> Result<R::Elem> {
        if point.len() != self.nvars {
            return Err(type_err!("point of length {} for {} variables", point.len(), self.nvars));
        }
        let mut acc = self.ring.zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    t = self.ring.mul(&t, &self.ring.pow(x, k as u64));
                }
            }
            acc = self.ring.add(&acc, &t);
        }
        Ok(acc)
    }

    /// Formal derivative with respect to `x_i`.
    pub fn partial_derivative(&self, i: usize) -> Result<Self> {
        if i >= self.nvars {
            return Err(type_err!("variable index {i} out of range for {} variables", self.nvars));
        }
        let mut out = Self::zero(&self.ring, self.nvars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut d = e.clone();
            d[i] -= 1;
            out.add_term(d, &self.ring.mul(c, &self.ring.from_i64(e[i] as i64)));
        }
        Ok(out)
    }

    /// Reorders variables: variable `i` of `self` becomes variable `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.nvars];
        if perm.len() != self.nvars || perm.iter().any(|&j| j >= self.nvars || std::mem::replace(&mut seen[j], true)) {
            return Err(type_err!("{perm:?} is not a permutation of {} variables", self.nvars));
        }
        self.embed(self.nvars, perm)
    }

    /// Moves variable `i` to position `map[i]` in a ring with `nvars` variables.
    pub fn embed(&self, nvars: usize, map: &[usize]) -> Result<Self> {
        if map.len() != self.nvars || map.iter().any(|&j| j >= nvars) {
            return Err(type_err!("invalid variable map {map:?} into {nvars} variables"));
        }
        let mut out = Self::zero(&self.ring, nvars);
        for (e, c) in &self.terms {
            let mut f = vec![0; nvars];
            for (i, &k) in e.iter().enumerate() {
                f[map[i]] += k;
            }
            out.add_term(f, c);
        }
        Ok(out)
    }

    /// Substitutes a polynomial (in `g.nvars()` variables) for the single
    /// variable of a univariate `self`.
    pub fn compose_univariate(&self, g: &Self) -> Result<Self> {
        if self.nvars != 1 {
            return Err(type_err!("compose_univariate needs a univariate outer polynomial"));
        }
        if self.ring != g.ring {
            return Err(type_err!("ring mismatch in composition"));
        }
        let deg = self.degree_bounds().first().copied().unwrap_or(0);
        let mut acc = Self::zero(&self.ring, g.nvars);
        for d in (0..=deg).rev() {
            acc = acc.try_mul(g)?;
            let c = self.coefficient(&[d])?;
            acc = acc.try_add(&Self::constant(&self.ring, g.nvars, c))?;
        }
        Ok(acc)
    }

    /// Renders with the given variable names (`x0, x1, ...` when `None`).
    pub fn to_string_with(&self, names: Option<&[&str]>) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let name = |i: usize| names.and_then(|n| n.get(i).map(|s| s.to_string())).unwrap_or(format!("x{i}"));
        let mut parts = Vec::new();
        for (e, c) in self.terms.iter().rev() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { name(i) } else { format!("{}^{k}", name(i)) })
                .collect();
            let cs = self.ring.fmt_elem(c);
            parts.push(match (mono.is_empty(), cs.as_str()) {
                (true, _) => cs,
                (false, "1") => mono.join("*"),
                (false, _) => format!("{cs}*{}", mono.join("*")),
            });
        }
        parts.join(" + ")
    }
}

impl MultiPoly<PrimeField> {
    pub fn field(&self) -> &PrimeField {
        &self.ring
    }

    /// Coefficient as a field element.
    pub fn coefficient_fp(&self, d: &[u32]) -> Result<FpElement> {
        Ok(self.ring.elem(self.coefficient(d)?))
    }

    pub fn evaluate_fp(&self, point: &[FpElement]) -> Result<FpElement> {
        if let Some(x) = point.iter().find(|x| x.field() != &self.ring) {
            return Err(type_err!("point coordinate in F_{} for a polynomial over F_{}", x.field().p(), self.ring.p()));
        }
        let raw: Vec<u64> = point.iter().map(FpElement::value).collect();
        Ok(self.ring.elem(self.evaluate(&raw)?))
    }
}

impl MultiPoly<IntegerRing> {
    /// Coefficient-wise reduction mod p.
    pub fn reduce_mod(&self, field: &PrimeField) -> FpPoly {
        let p = BigInt::from(field.p());
        let mut out = FpPoly::zero(field, self.nvars);
        for (e, c) in &self.terms {
            let r: BigInt = ((c % &p) + &p) % &p;
            let v = u64::try_from(r).expect("residue fits");
            out.add_term(e.clone(), &v);
        }
        out
    }
}

impl<R: Ring> fmt::Display for MultiPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_with(None))
    }
}

macro_rules! impl_poly_op {
    ($trait:ident, $method:ident, $try:ident) => {
        impl<R: Ring> $trait<&MultiPoly<R>> for &MultiPoly<R> {
            type Output = MultiPoly<R>;
            /// Panics on ring or arity mismatch; use the `try_` form to get an error.
            fn $method(self, rhs: &MultiPoly<R>) -> MultiPoly<R> {
                self.$try(rhs).expect("incompatible polynomial operands")
            }
        }
        impl<R: Ring> $trait<MultiPoly<R>> for MultiPoly<R> {
            type Output = MultiPoly<R>;
            fn $method(self, rhs: MultiPoly<R>) -> MultiPoly<R> {
                (&self).$method(&rhs)
            }
        }
    };
}

impl_poly_op!(Add, add, try_add);
impl_poly_op!(Sub, sub, try_sub);
impl_poly_op!(Mul, mul, try_mul);

impl<R: Ring> Neg for &MultiPoly<R> {
    type Output = MultiPoly<R>;
    fn neg(self) -> MultiPoly<R> {
        self.scale(&self.ring.from_i64(-1))
    }
}

/// `body / x^shift` with a nonnegative shift per variable.
#[derive(Clone, Debug)]
pub struct LaurentPoly<R: Ring> {
    body: MultiPoly<R>,
    shift: Vec<u32>,
}

impl<R: Ring> LaurentPoly<R> {
    pub fn new(body: MultiPoly<R>, shift: Vec<u32>) -> Result<Self> {
        if shift.len() != body.nvars() {
            return Err(type_err!("shift of length {} for {} variables", shift.len(), body.nvars()));
        }
        Ok(LaurentPoly { body, shift })
    }

    pub fn from_poly(body: MultiPoly<R>) -> Self {
        let shift = vec![0; body.nvars()];
        LaurentPoly { body, shift }
    }

    /// `c * x^e` with signed exponents.
    pub fn monomial(ring: &R, exps: &[i32], c: R::Elem) -> Self {
        let body_e = exps.iter().map(|&e| e.max(0) as u32).collect();
        let shift = exps.iter().map(|&e| (-e).max(0) as u32).collect();
        LaurentPoly {
            body: MultiPoly::monomial(ring, body_e, c),
            shift,
        }
    }

    pub fn body(&self) -> &MultiPoly<R> {
        &self.body
    }

    pub fn shift(&self) -> &[u32] {
        &self.shift
    }

    /// The same object with `x_i` multiplied into the body and the shift.
    pub fn renormalized(&self, i: usize) -> Result<Self> {
        let mut s = vec![0; self.shift.len()];
        s[i] = 1;
        let mut shift = self.shift.clone();
        shift[i] += 1;
        Ok(LaurentPoly {
            body: self.body.shift(&s)?,
            shift,
        })
    }

    fn aligned(&self, shift: &[u32]) -> Result<MultiPoly<R>> {
        let up: Vec<u32> = shift.iter().zip(&self.shift).map(|(a, b)| a - b).collect();
        self.body.shift(&up)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if self.shift.len() != other.shift.len() {
            return Err(type_err!("variable count mismatch"));
        }
        let shift: Vec<u32> = self.shift.iter().zip(&other.shift).map(|(a, b)| *a.max(b)).collect();
        let body = self.aligned(&shift)?.try_add(&other.aligned(&shift)?)?;
        Ok(LaurentPoly { body, shift })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&LaurentPoly {
            body: -&other.body,
            shift: other.shift.clone(),
        })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        let body = self.body.try_mul(&other.body)?;
        let shift = self.shift.iter().zip(&other.shift).map(|(a, b)| a + b).collect();
        Ok(LaurentPoly { body, shift })
    }

    pub fn pow(&self, e: u64) -> Self {
        LaurentPoly {
            body: self.body.pow(e),
            shift: self.shift.iter().map(|&s| s * e as u32).collect(),
        }
    }

    /// Coefficient of `x^0`.
    pub fn constant_term(&self) -> R::Elem {
        self.body.coefficient(&self.shift).expect("shift has body arity")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn zpoly(nvars: usize, terms: &[(&[u32], i64)]) -> ZPoly {
        ZPoly::from_terms(&IntegerRing, nvars, terms.iter().map(|(e, c)| (e.to_vec(), BigInt::from(*c)))).unwrap()
    }

    fn fpoly(field: &PrimeField, nvars: usize, terms: &[(&[u32], i64)]) -> FpPoly {
        FpPoly::from_terms(field, nvars, terms.iter().map(|(e, c)| (e.to_vec(), field.reduce_i64(*c)))).unwrap()
    }

    #[test]
    fn product_examples() {
        let x = ZPoly::var(&IntegerRing, 2, 0);
        let y = ZPoly::var(&IntegerRing, 2, 1);
        assert_eq!(&(&x - &y) * &(&x + &y), zpoly(2, &[(&[2, 0], 1), (&[0, 2], -1)]));
        assert!((&x * &ZPoly::zero(&IntegerRing, 2)).is_zero());

        let f5 = f(5);
        let one_minus_x = fpoly(&f5, 1, &[(&[0], 1), (&[1], -1)]);
        let expected = fpoly(&f5, 1, &[(&[0], 1), (&[1], 3), (&[2], 1)]);
        assert_eq!(&one_minus_x * &one_minus_x, expected);
        assert_eq!(one_minus_x.pow(2), expected);
        assert_eq!(x.pow(0), ZPoly::one(&IntegerRing, 2));
    }

    #[test]
    fn mismatches_are_type_errors() {
        let a = FpPoly::var(&f(5), 2, 0);
        let b = FpPoly::var(&f(7), 2, 0);
        let c = FpPoly::var(&f(5), 3, 0);
        assert!(a.try_mul(&b).is_err());
        assert!(a.try_add(&c).is_err());
        assert!(a.coefficient(&[1]).is_err());
        assert!(a.evaluate(&[1]).is_err());
        assert!(a.partial_derivative(2).is_err());
    }

    #[test]
    fn coefficient_examples() {
        let p = zpoly(1, &[(&[2], 1), (&[3], -2), (&[4], 1)]);
        assert_eq!(p.coefficient(&[4]).unwrap(), BigInt::from(1));
        assert_eq!(p.coefficient(&[7]).unwrap(), BigInt::from(0));
        let f5 = f(5);
        let d = (FpPoly::var(&f5, 2, 0) - FpPoly::var(&f5, 2, 1)).pow(2);
        assert_eq!(d.coefficient(&[1, 1]).unwrap(), 3);
        assert_eq!(d, fpoly(&f5, 2, &[(&[2, 0], 1), (&[1, 1], -2), (&[0, 2], 1)]));
    }

    #[test]
    fn evaluation_examples() {
        let f5 = f(5);
        let x = FpPoly::var(&f5, 1, 0);
        let one = FpPoly::one(&f5, 1);
        let beta = x.pow(2) * (&one - &x).pow(3);
        assert_eq!(beta.evaluate(&[0]).unwrap(), 0);
        let s = FpPoly::var(&f5, 2, 0) + FpPoly::var(&f5, 2, 1);
        assert_eq!(s.evaluate(&[2, 3]).unwrap(), 0);
        let d = (FpPoly::var(&f5, 2, 0) - FpPoly::var(&f5, 2, 1)).pow(2);
        assert_eq!(d.evaluate(&[3, 1]).unwrap(), 4);
        assert_eq!(FpPoly::one(&f5, 1).evaluate(&[0]).unwrap(), 1);
    }

    #[test]
    fn derivative_examples() {
        let f5 = f(5);
        let x = FpPoly::var(&f5, 1, 0);
        assert!(x.pow(5).partial_derivative(0).unwrap().is_zero());
        assert_eq!(x.pow(3).partial_derivative(0).unwrap(), fpoly(&f5, 1, &[(&[2], 3)]));
        let p = zpoly(2, &[(&[1, 2], 1)]);
        assert_eq!(p.partial_derivative(1).unwrap(), zpoly(2, &[(&[1, 1], 2)]));
    }

    #[test]
    fn laurent_examples() {
        let r = IntegerRing;
        let one = LaurentPoly::monomial(&r, &[0, 0], BigInt::from(1));
        let x1_over_x2 = LaurentPoly::monomial(&r, &[1, -1], BigInt::from(1));
        let x2_over_x1 = LaurentPoly::monomial(&r, &[-1, 1], BigInt::from(1));
        let prod = one.try_sub(&x1_over_x2).unwrap().try_mul(&one.try_sub(&x2_over_x1).unwrap()).unwrap();
        assert_eq!(prod.constant_term(), BigInt::from(2));
        let k = LaurentPoly::monomial(&r, &[0, 0], BigInt::from(17));
        assert_eq!(k.constant_term(), BigInt::from(17));
        assert_eq!(x1_over_x2.constant_term(), BigInt::from(0));
        let moved = prod.renormalized(0).unwrap().renormalized(1).unwrap();
        assert_eq!(moved.constant_term(), BigInt::from(2));
    }

    #[test]
    fn dense_and_sparse_products_agree() {
        let f7 = f(7);
        let x = FpPoly::var(&f7, 3, 0);
        let y = FpPoly::var(&f7, 3, 1);
        let z = FpPoly::var(&f7, 3, 2);
        let a = (&x - &y).pow(3) * (&z + &FpPoly::one(&f7, 3)).pow(2);
        let b = (&y - &z).pow(4) + x.pow(5);
        assert_eq!(a.try_mul(&b).unwrap(), a.mul_sparse(&b));
        let za = zpoly(2, &[(&[0, 9], 3), (&[4, 1], -2)]);
        let zb = zpoly(2, &[(&[7, 0], 5), (&[1, 1], 1), (&[0, 0], -1)]);
        assert_eq!(za.try_mul(&zb).unwrap(), za.mul_sparse(&zb));
    }

    #[test]
    fn compose_univariate_substitutes() {
        let f11 = f(11);
        // (t^2 + 1) at t = 1 - 2s is 4s^2 - 4s + 2
        let outer = fpoly(&f11, 1, &[(&[2], 1), (&[0], 1)]);
        let inner = fpoly(&f11, 1, &[(&[0], 1), (&[1], -2)]);
        let got = outer.compose_univariate(&inner).unwrap();
        assert_eq!(got, fpoly(&f11, 1, &[(&[2], 4), (&[1], -4), (&[0], 2)]));
    }

    fn arb_fpoly(p: u64, nvars: usize) -> impl Strategy<Value = FpPoly> {
        prop::collection::vec((prop::collection::vec(0u32..4, nvars), 0..p), 0..6).prop_map(move |terms| {
            FpPoly::from_terms(&PrimeField::new(p).unwrap(), nvars, terms).unwrap()
        })
    }

    fn arb_zpoly(nvars: usize) -> impl Strategy<Value = ZPoly> {
        prop::collection::vec((prop::collection::vec(0u32..4, nvars), -50i64..50), 0..6)
            .prop_map(move |terms| ZPoly::from_terms(&IntegerRing, nvars, terms.into_iter().map(|(e, c)| (e, BigInt::from(c)))).unwrap())
    }

    proptest! {
        #[test]
        fn fp_ring_axioms(a in arb_fpoly(7, 2), b in arb_fpoly(7, 2), c in arb_fpoly(7, 2)) {
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        }

        #[test]
        fn z_ring_axioms(a in arb_zpoly(3), b in arb_zpoly(3), c in arb_zpoly(3)) {
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &b, &b * &a);
        }

        #[test]
        fn derivative_is_linear_and_leibniz(a in arb_fpoly(5, 2), b in arb_fpoly(5, 2), i in 0usize..2) {
            let d = |p: &FpPoly| p.partial_derivative(i).unwrap();
            prop_assert_eq!(d(&(&a + &b)), &d(&a) + &d(&b));
            prop_assert_eq!(d(&(&a * &b)), &(&d(&a) * &b) + &(&a * &d(&b)));
        }

        #[test]
        fn evaluation_is_a_homomorphism(a in arb_fpoly(11, 3), b in arb_fpoly(11, 3), pt in prop::collection::vec(0u64..11, 3)) {
            let field = a.field().clone();
            let ev = |p: &FpPoly| p.evaluate(&pt).unwrap();
            prop_assert_eq!(ev(&(&a * &b)), field.mul_raw(ev(&a), ev(&b)));
            prop_assert_eq!(ev(&(&a + &b)), field.add_raw(ev(&a), ev(&b)));
        }

        #[test]
        fn product_coefficients_are_convolutions(a in arb_zpoly(2), b in arb_zpoly(2), d0 in 0u32..7, d1 in 0u32..7) {
            let mut conv = BigInt::zero();
            for i0 in 0..=d0 {
                for i1 in 0..=d1 {
                    conv += a.coefficient(&[i0, i1]).unwrap() * b.coefficient(&[d0 - i0, d1 - i1]).unwrap();
                }
            }
            prop_assert_eq!((&a * &b).coefficient(&[d0, d1]).unwrap(), conv);
        }

        #[test]
        fn laurent_ct_is_renormalization_invariant(a in arb_zpoly(2), s0 in 0u32..4, s1 in 0u32..4, i in 0usize..2) {
            let l = LaurentPoly::new(a, vec![s0, s1]).unwrap();
            prop_assert_eq!(l.renormalized(i).unwrap().constant_term(), l.constant_term());
        }
    }
}
