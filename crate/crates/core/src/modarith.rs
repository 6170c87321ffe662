//! Arithmetic in the prime field F_p.
//!
//! [`PrimeField`] owns the factorial and inverse-factorial tables; it is
//! cheap to clone (the tables sit behind an `Arc`) and immutable after
//! construction. Residues are plain `u64` values in `[0, p)` at the table
//! level and [`FpElement`] at the public API level.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{domain, singular, type_err, Error, Result};

/// Largest supported characteristic (exclusive). Products of two residues fit in `u64`.
pub const MAX_PRIME: u64 = 1 << 31;

/// Factorial tables are materialised up to this many entries; larger
/// factorials are multiplied out from the end of the table on demand.
const TABLE_LIMIT: u64 = 1 << 20;

struct Tables {
    p: u64,
    fact: Vec<u64>,
    inv_fact: Vec<u64>,
}

/// The field F_p for an odd prime `p < 2^31`.
#[derive(Clone)]
pub struct PrimeField {
    inner: Arc<Tables>,
}

impl PartialEq for PrimeField {
    fn eq(&self, other: &Self) -> bool {
        self.p() == other.p()
    }
}

impl Eq for PrimeField {}

impl fmt::Debug for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.p())
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !(3..MAX_PRIME).contains(&p) || !is_prime(p) {
            return Err(domain!("{p} is not an odd prime below 2^31"));
        }
        let len = p.min(TABLE_LIMIT) as usize;
        let mut fact = Vec::with_capacity(len);
        fact.push(1u64);
        for i in 1..len as u64 {
            let prev = *fact.last().unwrap();
            fact.push(prev * i % p);
        }
        let mut inv_fact = vec![0u64; len];
        inv_fact[len - 1] = pow_mod(fact[len - 1], p - 2, p);
        for i in (1..len).rev() {
            inv_fact[i - 1] = inv_fact[i] * (i as u64) % p;
        }
        Ok(PrimeField {
            inner: Arc::new(Tables { p, fact, inv_fact }),
        })
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.inner.p
    }

    #[inline]
    pub fn reduce_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p() as i64) as u64
    }

    #[inline]
    pub fn reduce_u64(&self, v: u64) -> u64 {
        v % self.p()
    }

    #[inline]
    pub(crate) fn add_raw(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p() {
            s - self.p()
        } else {
            s
        }
    }

    #[inline]
    pub(crate) fn sub_raw(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p() - b
        }
    }

    #[inline]
    pub(crate) fn neg_raw(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p() - a
        }
    }

    #[inline]
    pub(crate) fn mul_raw(&self, a: u64, b: u64) -> u64 {
        a * b % self.p()
    }

    pub(crate) fn pow_raw(&self, a: u64, e: u64) -> u64 {
        pow_mod(a, e, self.p())
    }

    pub(crate) fn inv_raw(&self, a: u64) -> Result<u64> {
        if a.is_multiple_of(self.p()) {
            return Err(singular!("inverse of 0 in F_{}", self.p()));
        }
        Ok(pow_mod(a, self.p() - 2, self.p()))
    }

    pub(crate) fn fact_raw(&self, n: u64) -> u64 {
        let t = &self.inner.fact;
        if (n as usize) < t.len() {
            return t[n as usize];
        }
        let mut acc = *t.last().unwrap();
        for i in t.len() as u64..=n {
            acc = acc * i % self.p();
        }
        acc
    }

    pub(crate) fn inv_fact_raw(&self, n: u64) -> u64 {
        let t = &self.inner.inv_fact;
        if (n as usize) < t.len() {
            return t[n as usize];
        }
        pow_mod(self.fact_raw(n), self.p() - 2, self.p())
    }

    /// Wraps a residue (reduced on entry).
    pub fn elem(&self, v: u64) -> FpElement {
        FpElement {
            value: v % self.p(),
            field: self.clone(),
        }
    }

    pub fn elem_i64(&self, v: i64) -> FpElement {
        FpElement {
            value: self.reduce_i64(v),
            field: self.clone(),
        }
    }

    pub fn zero(&self) -> FpElement {
        self.elem(0)
    }

    pub fn one(&self) -> FpElement {
        self.elem(1)
    }

    /// `(-1)^e` as a field element.
    pub fn sign(&self, e: u64) -> FpElement {
        if e.is_multiple_of(2) {
            self.one()
        } else {
            self.elem(self.p() - 1)
        }
    }

    /// `n!` for `0 <= n <= p-1`. Larger arguments are regime violations.
    pub fn factorial(&self, n: i64) -> Result<FpElement> {
        if n < 0 || n as u64 >= self.p() {
            return Err(domain!("factorial argument {n} outside [0, {}]", self.p() - 1));
        }
        Ok(self.elem(self.fact_raw(n as u64)))
    }

    /// `(n!)^{-1}` for `0 <= n <= p-1`.
    pub fn inv_factorial(&self, n: i64) -> Result<FpElement> {
        if n < 0 || n as u64 >= self.p() {
            return Err(domain!("factorial argument {n} outside [0, {}]", self.p() - 1));
        }
        Ok(self.elem(self.inv_fact_raw(n as u64)))
    }

    /// `C(n, m) mod p` for `n, m < p`, zero when `m > n`.
    pub(crate) fn small_binom_raw(&self, n: u64, m: u64) -> u64 {
        debug_assert!(n < self.p() && m < self.p());
        if m > n {
            return 0;
        }
        self.mul_raw(
            self.fact_raw(n),
            self.mul_raw(self.inv_fact_raw(m), self.inv_fact_raw(n - m)),
        )
    }

    pub(crate) fn binom_lucas_raw(&self, mut n: u64, mut m: u64) -> u64 {
        let p = self.p();
        let mut acc = 1;
        while m > 0 {
            let (ni, mi) = (n % p, m % p);
            if mi > ni {
                return 0;
            }
            acc = self.mul_raw(acc, self.small_binom_raw(ni, mi));
            n /= p;
            m /= p;
        }
        acc
    }

    /// `C(n, m) mod p` by the base-p digit product. `C(n, m) = 0` when `n < m`.
    pub fn binom_lucas(&self, n: u64, m: u64) -> FpElement {
        self.elem(self.binom_lucas_raw(n, m))
    }

    /// Rising factorial `x (x+1) ... (x+m-1)`; the empty product is 1.
    pub fn pochhammer(&self, x: &FpElement, m: u64) -> FpElement {
        assert_eq!(&x.field, self, "pochhammer: element from another field");
        // m consecutive residues with m >= p hit zero.
        if m >= self.p() {
            return self.zero();
        }
        let mut acc = 1;
        let mut term = x.value;
        for _ in 0..m {
            acc = self.mul_raw(acc, term);
            term = self.add_raw(term, 1);
        }
        self.elem(acc)
    }

    /// `a! b!` for `a + b = p - 1`, checked against `(-1)^{a+1}`.
    pub fn cancellation_value(&self, a: u64, b: u64) -> Result<FpElement> {
        if a + b != self.p() - 1 {
            return Err(domain!("cancellation needs a + b = p - 1, got {a} + {b} with p = {}", self.p()));
        }
        let value = self.mul_raw(self.fact_raw(a), self.fact_raw(b));
        let expected = self.sign(a + 1);
        if value != expected.value {
            return Err(Error::Mismatch(format!(
                "{a}!{b}! = {value} but (-1)^(a+1) = {} in F_{}",
                expected.value,
                self.p()
            )));
        }
        Ok(self.elem(value))
    }

    /// `n! = p^v * u` with `u` a unit; returns `(u mod p, v)`.
    pub fn factorial_unit_part(&self, n: u64) -> (u64, u64) {
        let p = self.p();
        let (mut unit, mut val, mut m) = (1u64, 0u64, n);
        while m > 0 {
            let q = m / p;
            unit = self.mul_raw(unit, self.fact_raw(m % p));
            if q % 2 == 1 {
                unit = self.neg_raw(unit);
            }
            val += q;
            m = q;
        }
        (unit, val)
    }
}

/// An element of F_p tied to its field.
#[derive(Clone, PartialEq, Eq)]
pub struct FpElement {
    value: u64,
    field: PrimeField,
}

impl fmt::Debug for FpElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.field.p())
    }
}

impl fmt::Display for FpElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl FpElement {
    /// Canonical representative in `[0, p-1]`.
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn check(&self, other: &FpElement) -> Result<()> {
        if self.field != other.field {
            return Err(type_err!(
                "mixing elements of F_{} and F_{}",
                self.field.p(),
                other.field.p()
            ));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &FpElement) -> Result<FpElement> {
        self.check(other)?;
        Ok(self.with(self.field.add_raw(self.value, other.value)))
    }

    pub fn try_sub(&self, other: &FpElement) -> Result<FpElement> {
        self.check(other)?;
        Ok(self.with(self.field.sub_raw(self.value, other.value)))
    }

    pub fn try_mul(&self, other: &FpElement) -> Result<FpElement> {
        self.check(other)?;
        Ok(self.with(self.field.mul_raw(self.value, other.value)))
    }

    pub fn try_div(&self, other: &FpElement) -> Result<FpElement> {
        self.check(other)?;
        let inv = self.field.inv_raw(other.value)?;
        Ok(self.with(self.field.mul_raw(self.value, inv)))
    }

    pub fn inv(&self) -> Result<FpElement> {
        Ok(self.with(self.field.inv_raw(self.value)?))
    }

    pub fn pow(&self, e: u64) -> FpElement {
        self.with(self.field.pow_raw(self.value, e))
    }

    fn with(&self, value: u64) -> FpElement {
        FpElement {
            value,
            field: self.field.clone(),
        }
    }
}

macro_rules! impl_binop {
    ($trait:ident, $method:ident, $try:ident) => {
        impl $trait<&FpElement> for &FpElement {
            type Output = FpElement;
            /// Panics when the operands live in different fields.
            fn $method(self, rhs: &FpElement) -> FpElement {
                self.$try(rhs).expect("F_p operands from different fields")
            }
        }
        impl $trait<FpElement> for FpElement {
            type Output = FpElement;
            fn $method(self, rhs: FpElement) -> FpElement {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&FpElement> for FpElement {
            type Output = FpElement;
            fn $method(self, rhs: &FpElement) -> FpElement {
                (&self).$method(rhs)
            }
        }
    };
}

impl_binop!(Add, add, try_add);
impl_binop!(Sub, sub, try_sub);
impl_binop!(Mul, mul, try_mul);

impl Neg for &FpElement {
    type Output = FpElement;
    fn neg(self) -> FpElement {
        self.with(self.field.neg_raw(self.value))
    }
}

impl Neg for FpElement {
    type Output = FpElement;
    fn neg(self) -> FpElement {
        -&self
    }
}

/// A rational number built from factorials and integers, projected to F_p.
///
/// Tracks the p-adic valuation separately from the unit part so that
/// factorials of arguments `>= p` can appear in numerator and denominator.
/// The projection is zero for positive valuation and singular for negative.
#[derive(Clone, Debug)]
pub struct ProjectedQuotient {
    field: PrimeField,
    unit: u64,
    valuation: i64,
    error: Option<Error>,
}

impl ProjectedQuotient {
    pub fn new(field: &PrimeField) -> Self {
        ProjectedQuotient {
            field: field.clone(),
            unit: 1,
            valuation: 0,
            error: None,
        }
    }

    fn factorial_part(&mut self, n: i64, invert: bool) {
        if n < 0 {
            if self.error.is_none() {
                self.error = Some(domain!("negative factorial argument {n}"));
            }
            return;
        }
        let (u, v) = self.field.factorial_unit_part(n as u64);
        let u = if invert { self.field.inv_raw(u).unwrap() } else { u };
        self.unit = self.field.mul_raw(self.unit, u);
        self.valuation += if invert { -(v as i64) } else { v as i64 };
    }

    pub fn mul_factorial(mut self, n: i64) -> Self {
        self.factorial_part(n, false);
        self
    }

    pub fn div_factorial(mut self, n: i64) -> Self {
        self.factorial_part(n, true);
        self
    }

    fn int_part(&mut self, mut k: i64, invert: bool) {
        if k == 0 {
            if invert {
                if self.error.is_none() {
                    self.error = Some(singular!("division by the integer 0"));
                }
            } else {
                // 0 has infinite valuation.
                self.valuation = i64::MAX / 2;
            }
            return;
        }
        let p = self.field.p() as i64;
        let mut v = 0;
        while k % p == 0 {
            k /= p;
            v += 1;
        }
        let u = self.field.reduce_i64(k);
        let u = if invert { self.field.inv_raw(u).unwrap() } else { u };
        self.unit = self.field.mul_raw(self.unit, u);
        self.valuation += if invert { -v } else { v };
    }

    pub fn mul_int(mut self, k: i64) -> Self {
        self.int_part(k, false);
        self
    }

    pub fn div_int(mut self, k: i64) -> Self {
        self.int_part(k, true);
        self
    }

    pub fn mul_sign(mut self, e: u64) -> Self {
        if e % 2 == 1 {
            self.unit = self.field.neg_raw(self.unit);
        }
        self
    }

    pub fn mul_elem(mut self, x: &FpElement) -> Self {
        if x.is_zero() {
            self.valuation = i64::MAX / 2;
        } else {
            self.unit = self.field.mul_raw(self.unit, x.value);
        }
        self
    }

    pub fn valuation(&self) -> i64 {
        self.valuation
    }

    pub fn finish(self) -> Result<FpElement> {
        if let Some(e) = self.error {
            return Err(e);
        }
        if self.valuation < 0 {
            return Err(singular!("quotient has p-adic valuation {}", self.valuation));
        }
        if self.valuation > 0 {
            return Ok(self.field.zero());
        }
        Ok(self.field.elem(self.unit))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;
    use num_traits::{One, ToPrimitive, Zero};

    fn big_binom(n: u64, m: u64) -> BigUint {
        if m > n {
            return BigUint::zero();
        }
        let mut acc = BigUint::one();
        for i in 0..m {
            acc = acc * (n - i) / (i + 1);
        }
        acc
    }

    fn big_factorial(n: u64) -> BigUint {
        (1..=n).fold(BigUint::one(), |acc, i| acc * i)
    }

    #[test]
    fn rejects_non_primes() {
        for p in [0, 1, 2, 4, 9, 15, 1 << 31] {
            assert!(PrimeField::new(p).is_err(), "{p}");
        }
        assert!(PrimeField::new(2_147_483_647).is_ok());
    }

    #[test]
    fn factorial_examples() {
        let f7 = PrimeField::new(7).unwrap();
        assert_eq!(f7.factorial(0).unwrap().value(), 1);
        assert_eq!(f7.factorial(6).unwrap().value(), 6);
        assert_eq!(f7.factorial(4).unwrap().value(), 3);
        assert!(matches!(f7.factorial(7), Err(Error::Domain(_))));
        assert!(matches!(f7.factorial(-1), Err(Error::Domain(_))));
    }

    #[test]
    fn tables_are_consistent() {
        for p in [3u64, 5, 7, 11, 13, 101, 65537] {
            let f = PrimeField::new(p).unwrap();
            assert_eq!(f.fact_raw(p - 1), p - 1, "Wilson for p = {p}");
            for n in 0..p.min(500) {
                assert_eq!(f.mul_raw(f.fact_raw(n), f.inv_fact_raw(n)), 1);
                if n > 0 {
                    assert_eq!(f.fact_raw(n), f.mul_raw(n, f.fact_raw(n - 1)));
                }
            }
        }
    }

    #[test]
    fn lucas_examples() {
        let f5 = PrimeField::new(5).unwrap();
        assert_eq!(f5.binom_lucas(7, 2).value(), 1);
        assert_eq!(f5.binom_lucas(5, 1).value(), 0);
        assert_eq!(f5.binom_lucas(123_456, 0).value(), 1);
        assert_eq!(f5.binom_lucas(2, 3).value(), 0);
    }

    #[test]
    fn lucas_matches_big_integers() {
        for p in [3u64, 5, 7, 11, 13] {
            let f = PrimeField::new(p).unwrap();
            for n in 0..=3 * p {
                for m in 0..=n {
                    let exact = (big_binom(n, m) % p).to_u64().unwrap();
                    assert_eq!(f.binom_lucas(n, m).value(), exact, "C({n},{m}) mod {p}");
                }
            }
        }
    }

    #[test]
    fn pochhammer_examples() {
        let f7 = PrimeField::new(7).unwrap();
        let f5 = PrimeField::new(5).unwrap();
        assert_eq!(f7.pochhammer(&f7.elem(3), 0).value(), 1);
        assert_eq!(f7.pochhammer(&f7.elem(1), 4).value(), 3);
        assert_eq!(f5.pochhammer(&f5.elem(2), 2).value(), 1);
        assert_eq!(f5.pochhammer(&f5.elem(2), 9).value(), 0);
        for m in 0..7 {
            assert_eq!(f7.pochhammer(&f7.one(), m), f7.factorial(m as i64).unwrap());
        }
    }

    #[test]
    fn cancellation_examples() {
        let f7 = PrimeField::new(7).unwrap();
        let f5 = PrimeField::new(5).unwrap();
        assert_eq!(f7.cancellation_value(4, 2).unwrap().value(), 6);
        assert_eq!(f5.cancellation_value(2, 2).unwrap().value(), 4);
        for p in [3u64, 5, 7, 11, 13] {
            let f = PrimeField::new(p).unwrap();
            assert_eq!(f.cancellation_value(0, p - 1).unwrap().value(), p - 1);
            for a in 0..p {
                assert_eq!(f.cancellation_value(a, p - 1 - a).unwrap(), f.sign(a + 1));
            }
        }
        assert!(matches!(f7.cancellation_value(2, 2), Err(Error::Domain(_))));
    }

    #[test]
    fn binomial_lemma() {
        // b C(b-1, p-a-1) = (-1)^{a+1} a! b! / (a+b-p)! for a, b < p <= a + b.
        for p in [3u64, 5, 7, 11, 13] {
            let f = PrimeField::new(p).unwrap();
            for a in 1..p {
                for b in 1..p {
                    if a + b < p {
                        continue;
                    }
                    let lhs = f.elem(b) * f.binom_lucas(b - 1, p - a - 1);
                    let rhs = f.sign(a + 1)
                        * f.factorial(a as i64).unwrap()
                        * f.factorial(b as i64).unwrap()
                        * f.inv_factorial((a + b - p) as i64).unwrap();
                    assert_eq!(lhs, rhs, "p={p} a={a} b={b}");
                }
            }
        }
    }

    #[test]
    fn factorial_unit_part_matches_big_integers() {
        for p in [3u64, 5, 7] {
            let f = PrimeField::new(p).unwrap();
            for n in 0..60 {
                let mut x = big_factorial(n);
                let mut v = 0;
                while (&x % p).is_zero() {
                    x /= p;
                    v += 1;
                }
                assert_eq!(f.factorial_unit_part(n), ((x % p).to_u64().unwrap(), v), "{n}! mod {p}");
            }
        }
    }

    #[test]
    fn projected_quotient() {
        let f7 = PrimeField::new(7).unwrap();
        // 12!/(6! 6!) = 924 = 7 * 132
        let q = ProjectedQuotient::new(&f7).mul_factorial(12).div_factorial(6).div_factorial(6);
        assert_eq!(q.finish().unwrap().value(), 0);
        // 14!/(7! 7!) = 3432 = 2^3*3*11*13, 3432 mod 7 = 2
        let q = ProjectedQuotient::new(&f7).mul_factorial(14).div_factorial(7).div_factorial(7);
        assert_eq!(q.finish().unwrap().value(), 3432 % 7);
        let q = ProjectedQuotient::new(&f7).div_factorial(7);
        assert!(matches!(q.finish(), Err(Error::Singular(_))));
        let q = ProjectedQuotient::new(&f7).mul_factorial(-1);
        assert!(matches!(q.finish(), Err(Error::Domain(_))));
        let q = ProjectedQuotient::new(&f7).mul_int(-3).div_int(14).mul_int(7);
        assert_eq!(q.finish().unwrap(), f7.elem_i64(-3) * f7.elem(2).inv().unwrap());
    }

    #[test]
    fn mixed_fields_are_type_errors() {
        let f5 = PrimeField::new(5).unwrap();
        let f7 = PrimeField::new(7).unwrap();
        assert!(matches!(f5.one().try_add(&f7.one()), Err(Error::Type(_))));
        assert!(matches!(f5.one().try_div(&f5.zero()), Err(Error::Singular(_))));
    }
}
