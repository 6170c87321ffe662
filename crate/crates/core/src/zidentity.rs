//! The two-variable summation identity behind the decoupled Selberg sum,
//! exact-rational classical Selberg products, and the decoupling checks
//! over Q and over F_p.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::fpintegral::SelbergParams;
use crate::modarith::{FpElement, PrimeField, ProjectedQuotient};
use crate::polyring::{IntegerRing, ZPoly};

/// Upper bound on `(2c+1)^{C(n,2)}` selections enumerated by one call.
pub const TERM_BUDGET: u64 = 10_000_000;

/// One choice of `m_ij in [0, 2c]` for every pair `i < j`, pairs in
/// lexicographic order `(1,2), (1,3), ..., (n-1,n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MSelection {
    n: usize,
    c: u32,
    m: Vec<u32>,
}

fn pair_index(n: usize, i: usize, j: usize) -> usize {
    // 0-based i < j
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

impl MSelection {
    pub fn new(n: usize, c: u32, m: Vec<u32>) -> Result<Self> {
        if n < 2 || c < 1 {
            return Err(domain!("selections need n >= 2 and c >= 1, got n = {n}, c = {c}"));
        }
        if m.len() != n * (n - 1) / 2 || m.iter().any(|&v| v > 2 * c) {
            return Err(domain!("selection {m:?} does not fit n = {n}, c = {c}"));
        }
        Ok(Self { n, c, m })
    }

    /// `m_ij` for 1-based `i < j`.
    pub fn m(&self, i: usize, j: usize) -> u32 {
        self.m[pair_index(self.n, i - 1, j - 1)]
    }

    pub fn mbar(&self, i: usize, j: usize) -> u32 {
        2 * self.c - self.m(i, j)
    }

    pub fn r(&self, k: usize) -> u32 {
        (1..k).map(|i| self.mbar(i, k)).sum::<u32>() + (k + 1..=self.n).map(|i| self.m(k, i)).sum::<u32>()
    }

    pub fn s(&self, k: usize) -> u32 {
        (1..k).map(|i| self.m(i, k)).sum::<u32>() + (k + 1..=self.n).map(|i| self.mbar(k, i)).sum::<u32>()
    }

    /// `(-1)^{sum m} prod C(2c, m_ij)`.
    pub fn weight(&self) -> i128 {
        let sign = if self.m.iter().sum::<u32>() % 2 == 0 { 1 } else { -1 };
        sign * self.m.iter().map(|&v| small_binom(2 * self.c, v)).product::<i128>()
    }
}

fn small_binom(n: u32, k: u32) -> i128 {
    (0..k as i128).fold(1, |acc, i| acc * (n as i128 - i) / (i + 1))
}

fn check_budget(n: usize, c: u32) -> Result<usize> {
    if n < 2 || c < 1 {
        return Err(domain!("identity needs n >= 2 and c >= 1, got n = {n}, c = {c}"));
    }
    let pairs = n * (n - 1) / 2;
    let count = (2 * c as u64 + 1).checked_pow(pairs as u32);
    match count {
        Some(k) if k <= TERM_BUDGET => Ok(pairs),
        _ => Err(Error::Resource(format!(
            "(2c+1)^C(n,2) selections for n = {n}, c = {c} exceed the budget of {TERM_BUDGET}"
        ))),
    }
}

/// All selections in lexicographic order.
pub fn selections(n: usize, c: u32) -> Result<Vec<MSelection>> {
    let pairs = check_budget(n, c)?;
    let mut out = Vec::new();
    let mut digits = vec![0u32; pairs];
    loop {
        out.push(MSelection { n, c, m: digits.clone() });
        let mut pos = pairs;
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            if digits[pos] < 2 * c {
                digits[pos] += 1;
                break;
            }
            digits[pos] = 0;
        }
    }
}

/// Sums selection weights grouped by the sorted vector `(r_1, ..., r_n)`.
/// Every quantity this module needs depends on a selection only through
/// that multiset. Parallel over the first pair, merged in key order.
pub fn grouped_weights(n: usize, c: u32) -> Result<BTreeMap<Vec<u32>, i128>> {
    let pairs = check_budget(n, c)?;
    let blocks: Vec<HashMap<Vec<u32>, i128>> = (0..=2 * c)
        .into_par_iter()
        .map(|first| {
            let mut acc = HashMap::new();
            let mut digits = vec![0u32; pairs];
            digits[0] = first;
            loop {
                let sel = MSelection { n, c, m: digits.clone() };
                let mut key: Vec<u32> = (1..=n).map(|k| sel.r(k)).collect();
                key.sort_unstable();
                *acc.entry(key).or_insert(0) += sel.weight();
                let mut pos = pairs;
                loop {
                    if pos == 1 {
                        return acc;
                    }
                    pos -= 1;
                    if digits[pos] < 2 * c {
                        digits[pos] += 1;
                        break;
                    }
                    digits[pos] = 0;
                }
            }
        })
        .collect();
    let mut merged = BTreeMap::new();
    for block in blocks {
        for (k, w) in block {
            *merged.entry(k).or_insert(0) += w;
        }
    }
    Ok(merged)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FactorKind {
    X,
    Y,
    XPlusY,
}

/// `x + shift`, `y + shift` or `x + y + shift`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinearFactor {
    pub kind: FactorKind,
    pub shift: u64,
}

impl fmt::Display for LinearFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let var = match self.kind {
            FactorKind::X => "x",
            FactorKind::Y => "y",
            FactorKind::XPlusY => "x+y",
        };
        match (self.kind, self.shift) {
            (FactorKind::X | FactorKind::Y, 0) => f.write_str(var),
            (_, 0) => write!(f, "({var})"),
            (_, k) => write!(f, "({var}+{k})"),
        }
    }
}

/// An integer times a product of linear factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredForm {
    pub coeff: BigInt,
    pub factors: BTreeMap<LinearFactor, u32>,
}

impl FactoredForm {
    pub fn constant(coeff: BigInt) -> Self {
        Self { coeff, factors: BTreeMap::new() }
    }

    pub fn push(&mut self, kind: FactorKind, shift: u64, times: u32) {
        if times > 0 {
            *self.factors.entry(LinearFactor { kind, shift }).or_insert(0) += times;
        }
    }

    /// Appends the Pochhammer factors `(v)_m`.
    pub fn push_pochhammer(&mut self, kind: FactorKind, start: u64, m: u64) {
        for i in 0..m {
            self.push(kind, start + i, 1);
        }
    }

    pub fn degree(&self) -> u64 {
        self.factors.values().map(|&e| e as u64).sum()
    }

    /// Largest monic factor shared with `other`.
    pub fn common_factors(&self, other: &Self) -> Self {
        let mut out = Self::constant(BigInt::one());
        for (f, &e) in &self.factors {
            if let Some(&e2) = other.factors.get(f) {
                out.push(f.kind, f.shift, e.min(e2));
            }
        }
        out
    }

    /// Removes the factors of a monic `d`.
    pub fn cancel(&self, d: &Self) -> Result<Self> {
        let mut out = self.clone();
        for (f, &e) in &d.factors {
            match out.factors.get_mut(f) {
                Some(have) if *have >= e => {
                    *have -= e;
                    if *have == 0 {
                        out.factors.remove(f);
                    }
                }
                _ => return Err(Error::Mismatch(format!("{f}^{e} does not divide {self}"))),
            }
        }
        if !d.coeff.is_one() {
            if !(&out.coeff % &d.coeff).is_zero() {
                return Err(Error::Mismatch(format!("{} does not divide {}", d.coeff, self.coeff)));
            }
            out.coeff /= &d.coeff;
        }
        Ok(out)
    }

    pub fn to_poly(&self) -> ZPoly {
        let ring = IntegerRing;
        let x = ZPoly::var(&ring, 2, 0);
        let y = ZPoly::var(&ring, 2, 1);
        let mut acc = ZPoly::constant(&ring, 2, self.coeff.clone());
        for (f, &e) in &self.factors {
            let base = match f.kind {
                FactorKind::X => x.clone(),
                FactorKind::Y => y.clone(),
                FactorKind::XPlusY => &x + &y,
            };
            let lin = &base + &ZPoly::constant(&ring, 2, BigInt::from(f.shift));
            acc = &acc * &lin.pow(e as u64);
        }
        acc
    }
}

impl fmt::Display for FactoredForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "{}", self.coeff);
        }
        if self.coeff == -BigInt::one() {
            f.write_str("-")?;
        } else if !self.coeff.is_one() {
            write!(f, "{}", self.coeff)?;
        }
        for (fac, &e) in &self.factors {
            if e == 1 {
                write!(f, "{fac}")?;
            } else {
                write!(f, "{fac}^{e}")?;
            }
        }
        Ok(())
    }
}

/// `prod_k (x)_{r_k} (y)_{s_k}` for the selection whose sorted r-vector is `r`.
fn summand_form(n: usize, c: u32, r: &[u32], coeff: BigInt) -> FactoredForm {
    let total = 2 * c * (n as u32 - 1);
    let mut form = FactoredForm::constant(coeff);
    for &rk in r {
        form.push_pochhammer(FactorKind::X, 0, rk as u64);
        form.push_pochhammer(FactorKind::Y, 0, (total - rk) as u64);
    }
    form
}

/// One summand of the left-hand side per selection, in enumeration order.
pub fn lhs_summands(n: usize, c: u32) -> Result<Vec<FactoredForm>> {
    Ok(selections(n, c)?
        .iter()
        .map(|sel| {
            let r: Vec<u32> = (1..=n).map(|k| sel.r(k)).collect();
            summand_form(n, c, &r, BigInt::from(sel.weight()))
        })
        .collect())
}

fn pochhammer_tables(n: usize, c: u32) -> (Vec<ZPoly>, Vec<ZPoly>) {
    let ring = IntegerRing;
    let top = (2 * c * (n as u32 - 1)) as usize;
    let mut px = vec![ZPoly::one(&ring, 2)];
    let mut py = vec![ZPoly::one(&ring, 2)];
    for i in 0..top {
        let shift = ZPoly::constant(&ring, 2, BigInt::from(i));
        px.push(&px[i] * &(&ZPoly::var(&ring, 2, 0) + &shift));
        py.push(&py[i] * &(&ZPoly::var(&ring, 2, 1) + &shift));
    }
    (px, py)
}

/// `sum over selections of (-1)^{sum m} prod C(2c, m_ij) prod_k (x)_{r_k} (y)_{s_k}`.
pub fn identity_lhs(n: usize, c: u32) -> Result<ZPoly> {
    let groups = grouped_weights(n, c)?;
    let (px, py) = pochhammer_tables(n, c);
    let total = 2 * c * (n as u32 - 1);
    let expected_degree = 4 * c as u64 * (n * (n - 1) / 2) as u64;
    let ring = IntegerRing;
    let mut acc = ZPoly::zero(&ring, 2);
    for (r, w) in groups {
        let mut term = ZPoly::constant(&ring, 2, BigInt::from(w));
        for &rk in &r {
            term = &(&term * &px[rk as usize]) * &py[(total - rk) as usize];
        }
        if w != 0 && term.total_degree() != Some(expected_degree) {
            return Err(Error::Mismatch(format!("summand for r = {r:?} has degree {:?}", term.total_degree())));
        }
        acc = &acc + &term;
    }
    Ok(acc)
}

/// `prod_{k=1}^{n-1} ((k+1)c)!/c! (x)_{kc} (y)_{kc} (x+y+(2n-k-2)c)_{kc}`.
pub fn identity_rhs_factored(n: usize, c: u32) -> Result<FactoredForm> {
    if n < 2 || c < 1 {
        return Err(domain!("identity needs n >= 2 and c >= 1, got n = {n}, c = {c}"));
    }
    let (n, c) = (n as u64, c as u64);
    let mut form = FactoredForm::constant(BigInt::one());
    for k in 1..n {
        form.coeff *= big_factorial((k + 1) * c) / big_factorial(c);
        form.push_pochhammer(FactorKind::X, 0, k * c);
        form.push_pochhammer(FactorKind::Y, 0, k * c);
        form.push_pochhammer(FactorKind::XPlusY, (2 * n - k - 2) * c, k * c);
    }
    Ok(form)
}

pub fn identity_rhs(n: usize, c: u32) -> Result<ZPoly> {
    let form = identity_rhs_factored(n, c)?;
    let poly = form.to_poly();
    let expected = 3 * c as u64 * (n * (n - 1) / 2) as u64;
    if poly.total_degree() != Some(expected) {
        return Err(Error::Mismatch(format!("right-hand side has degree {:?}, expected {expected}", poly.total_degree())));
    }
    Ok(poly)
}

pub fn verify_identity(n: usize, c: u32) -> Result<bool> {
    Ok(identity_lhs(n, c)? == identity_rhs(n, c)?)
}

/// The factor shared by every left-hand summand.
pub fn common_factor(n: usize, c: u32) -> Result<FactoredForm> {
    let groups = grouped_weights(n, c)?;
    let mut forms = groups.keys().map(|r| summand_form(n, c, r, BigInt::one()));
    let first = forms.next().expect("at least one selection");
    Ok(forms.fold(first, |acc, f| acc.common_factors(&f)))
}

/// The right-hand side with the common summand factor cancelled.
pub fn normal_form(n: usize, c: u32) -> Result<FactoredForm> {
    identity_rhs_factored(n, c)?.cancel(&common_factor(n, c)?)
}

pub fn big_factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClassicalVariant {
    Plain,
    /// Integrand decorated by `x_1 ... x_k`, `k <= n - 1`.
    Aomoto(u64),
}

/// The classical Selberg product over Q.
pub fn classical_selberg_rhs(n: u64, a: u64, b: u64, c: u64, variant: ClassicalVariant) -> Result<BigRational> {
    if n == 0 {
        return Err(domain!("n must be positive"));
    }
    let fr = |v: u64| BigRational::from_integer(big_factorial(v));
    let int = |v: u64| BigRational::from_integer(BigInt::from(v));
    let mut value = BigRational::one();
    for j in 1..=n {
        value *= fr(j * c) / fr(c) * fr(a + (j - 1) * c) * fr(b + (j - 1) * c) / fr(a + b + (n + j - 2) * c + 1);
    }
    if let ClassicalVariant::Aomoto(k) = variant {
        if k >= n {
            return Err(domain!("Aomoto variant needs k <= n - 1, got k = {k}, n = {n}"));
        }
        for j in 1..=k {
            value *= int(a + (n - j) * c + 1) / int(a + b + (2 * n - j - 1) * c + 2);
        }
    }
    Ok(value)
}

/// The Selberg integral over `[0,1]^n` by expanding the integrand over Z
/// and integrating monomials. Exponential in `n`; for cross-checks.
pub fn classical_selberg_integral(n: usize, a: u32, b: u32, c: u32, k: usize) -> BigRational {
    let ring = IntegerRing;
    let one = ZPoly::one(&ring, 1);
    let x = ZPoly::var(&ring, 1, 0);
    let univariate = &x.pow(a as u64) * &(&one - &x).pow(b as u64);
    let mut poly = ZPoly::one(&ring, n);
    for i in 0..n {
        let map = [i];
        poly = &poly * &univariate.embed(n, &map).expect("valid map");
        if i < k {
            poly = &poly * &ZPoly::var(&ring, n, i);
        }
        for j in i + 1..n {
            let diff = &ZPoly::var(&ring, n, i) - &ZPoly::var(&ring, n, j);
            poly = &poly * &diff.pow(2 * c as u64);
        }
    }
    let mut total = BigRational::zero();
    for (d, coeff) in poly.terms() {
        let den: BigInt = d.iter().map(|&e| BigInt::from(e + 1)).product();
        total += BigRational::new(coeff.clone(), den);
    }
    total
}

/// The decoupled sum `sum (-1)^{sum m} prod C(2c,m) prod_k (a+r_k)! b! / (a+r_k+b+1)!` over Q.
pub fn decoupled_sum(n: usize, a: u64, b: u64, c: u32) -> Result<BigRational> {
    let groups = grouped_weights(n, c)?;
    let mut total = BigRational::zero();
    for (r, w) in groups {
        let mut term = BigRational::from_integer(BigInt::from(w));
        for &rk in &r {
            let big_a = a + rk as u64;
            term *= BigRational::new(big_factorial(big_a) * big_factorial(b), big_factorial(big_a + b + 1));
        }
        total += term;
    }
    Ok(total)
}

pub fn decoupled_sum_check(n: usize, a: u64, b: u64, c: u32) -> Result<bool> {
    Ok(decoupled_sum(n, a, b, c)? == classical_selberg_rhs(n as u64, a, b, c as u64, ClassicalVariant::Plain)?)
}

/// `int_{[1]_p} x^A (1-x)^b dx`, i.e. the coefficient of `x^{p-1}`.
fn univariate_fp(field: &PrimeField, big_a: u64, b: u64) -> FpElement {
    let p = field.p();
    if big_a > p - 1 || p - 1 - big_a > b {
        return field.zero();
    }
    let k = p - 1 - big_a;
    field.sign(k) * field.binom_lucas(b, k)
}

/// `S_n(a, b, c)` as the decoupled sum of one-dimensional F_p-integrals.
/// Agrees with the integral for every `(a, b, c)`.
pub fn decoupled_fp_sum(s: &SelbergParams) -> Result<FpElement> {
    let f = &s.field;
    if s.n == 1 {
        return Ok(univariate_fp(f, s.a, s.b));
    }
    if s.c == 0 {
        return Ok(univariate_fp(f, s.a, s.b).pow(s.n));
    }
    let groups = grouped_weights(s.n as usize, s.c as u32)?;
    let mut total = f.zero();
    for (r, w) in groups {
        let mut term = f.elem_i64((w % f.p() as i128) as i64);
        for &rk in &r {
            term = term * univariate_fp(f, s.a + rk as u64, s.b);
        }
        total = total + term;
    }
    Ok(total)
}

/// `S_n` in the main regime from the identity's right-hand side at
/// `x = a + 1`, `y = -(a + b + 2(n-1)c + 1 - p)`:
/// `(-1)^n (a! b! / N!)^n RHS(x, y)` with `N = a + b + 2(n-1)c + 1 - p`.
pub fn identity_specialization(s: &SelbergParams) -> Result<FpElement> {
    if !s.main_regime() {
        return Err(domain!("{s:?} is outside the main regime"));
    }
    if s.n < 2 || s.c < 1 {
        return Err(domain!("specialization needs n >= 2 and c >= 1"));
    }
    let f = &s.field;
    let p = f.p();
    let big_n = s.a + s.b + 2 * (s.n - 1) * s.c + 1 - p;
    let rhs = identity_rhs(s.n as usize, s.c as u32)?.reduce_mod(f);
    let x = f.elem(s.a + 1);
    let y = -f.elem(big_n);
    let scale = ProjectedQuotient::new(f)
        .mul_factorial(s.a as i64)
        .mul_factorial(s.b as i64)
        .div_factorial(big_n as i64)
        .finish()?;
    Ok(f.sign(s.n) * scale.pow(s.n) * rhs.evaluate_fp(&[x, y])?)
}

/// Renders a left-hand summand's cofactor after removing the common factor.
pub fn lhs_cofactors(n: usize, c: u32) -> Result<Vec<FactoredForm>> {
    let common = common_factor(n, c)?;
    lhs_summands(n, c)?.iter().map(|s| s.cancel(&common)).collect()
}

/// Integer helper used by reports: the value of a small rational as `num/den`.
pub fn rational_string(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}
