//! Closed-form right-hand sides for F_p-Selberg integrals and their
//! companions: the main product, the Aomoto forms and recursion, Dyson and
//! Morris constant terms, the Morris-derived and binomial forms, the
//! region partition with its factorization, and the Jacobi-polynomial form.
//!
//! Every closed form validates its regime first and returns
//! [`Error::Domain`] outside it. Products of factorials are evaluated with
//! [`ProjectedQuotient`], i.e. as rationals projected to F_p, so factorials
//! of arguments `>= p` contribute through their p-adic valuation.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{domain, singular, Error, Result};
use crate::fpintegral::{fp_integral_partial, master_polynomial, selberg_s, Cycle, SelbergParams};
use crate::modarith::{FpElement, PrimeField, ProjectedQuotient};
use crate::polyring::{FpPoly, IntegerRing, LaurentPoly, MultiPoly, Ring};

/// `prod_j (jc)!/c! (a+(j-1)c)! (b+(j-1)c)! / (a+b+(n+j-2)c+1-p)!`, without the sign.
fn selberg_product(s: &SelbergParams) -> ProjectedQuotient {
    let (n, a, b, c, p) = (s.n as i64, s.a as i64, s.b as i64, s.c as i64, s.p() as i64);
    (1..=n).fold(ProjectedQuotient::new(&s.field), |q, j| {
        q.mul_factorial(j * c)
            .div_factorial(c)
            .mul_factorial(a + (j - 1) * c)
            .mul_factorial(b + (j - 1) * c)
            .div_factorial(a + b + (n + j - 2) * c + 1 - p)
    })
}

/// The main F_p-Selberg product `P_n(a, b, c)`.
pub fn selberg_rhs(s: &SelbergParams) -> Result<FpElement> {
    if !s.main_regime() {
        return Err(domain!("{s:?} is outside the main regime"));
    }
    selberg_product(s).mul_sign(s.n).finish()
}

/// `(a + (n-k)c + 1) / (a + b + (2n-k-1)c + 2)` in F_p.
fn aomoto_factor(s: &SelbergParams, k: u64) -> Result<FpElement> {
    let f = &s.field;
    let num = s.a + (s.n - k) * s.c + 1;
    let den = s.a + s.b + (2 * s.n - k - 1) * s.c + 2;
    if den.is_multiple_of(s.p()) {
        return Err(singular!("Aomoto denominator {den} vanishes mod {} at k = {k}", s.p()));
    }
    f.elem(num).try_div(&f.elem(den))
}

/// `S_{k,n}` by the decorated product formula, `0 <= k <= n-1`.
pub fn aomoto_rhs(s: &SelbergParams, k: u64) -> Result<FpElement> {
    if k >= s.n {
        return Err(domain!("Aomoto form needs k <= n - 1, got k = {k}, n = {}", s.n));
    }
    if !s.aomoto_regime() {
        return Err(domain!("{s:?} is outside the Aomoto regime"));
    }
    let mut prefactor = s.field.one();
    for j in 1..=k {
        prefactor = prefactor * aomoto_factor(s, j)?;
    }
    Ok(prefactor * selberg_product(s).mul_sign(s.n).finish()?)
}

/// One step of the recursion: `S_{k,n}` from `S_{k-1,n}`.
pub fn aomoto_step(prev: &FpElement, s: &SelbergParams, k: u64) -> Result<FpElement> {
    if k == 0 || k > s.n {
        return Err(domain!("Aomoto step index k = {k} outside 1..={}", s.n));
    }
    prev.try_mul(&aomoto_factor(s, k)?)
}

/// Value on the base line `a + b + (n-1)c = p - 1`:
/// `(-1)^{bn + cn(n-1)/2} (cn)! / (c!)^n`.
pub fn base_case_value(s: &SelbergParams) -> Result<FpElement> {
    if s.a + s.b + (s.n - 1) * s.c != s.p() - 1 {
        return Err(domain!("base case needs a + b + (n-1)c = p - 1, got {s:?}"));
    }
    let (n, c) = (s.n as i64, s.c as i64);
    let q = (0..n).fold(ProjectedQuotient::new(&s.field).mul_factorial(c * n), |q, _| q.div_factorial(c));
    q.mul_sign(s.b * s.n + s.c * s.n * (s.n - 1) / 2).finish()
}

fn big_factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// `(cn)! / (c!)^n` over Z.
pub fn dyson_value_int(n: u64, c: u64) -> BigInt {
    big_factorial(c * n) / big_factorial(c).pow(n as u32)
}

/// `(cn)! / (c!)^n` in F_p; requires `cn < p`.
pub fn dyson_value_fp(n: u64, c: u64, field: &PrimeField) -> Result<FpElement> {
    let mut v = field.factorial((c * n) as i64)?;
    for _ in 0..n {
        v = v * field.inv_factorial(c as i64)?;
    }
    Ok(v)
}

fn laurent_one_minus<R: Ring>(ring: &R, exps: &[i32]) -> LaurentPoly<R> {
    let zero = vec![0; exps.len()];
    LaurentPoly::monomial(ring, &zero, ring.one())
        .try_sub(&LaurentPoly::monomial(ring, exps, ring.one()))
        .expect("same arity")
}

fn ratio_exps(n: usize, num: usize, den: usize) -> Vec<i32> {
    let mut e = vec![0; n];
    e[num] += 1;
    e[den] -= 1;
    e
}

/// Constant term of `prod_{i != j} (1 - x_i/x_j)^c` by Laurent expansion.
pub fn dyson_ct_oracle<R: Ring>(ring: &R, n: usize, c: u64) -> R::Elem {
    let mut acc = LaurentPoly::from_poly(MultiPoly::one(ring, n));
    for i in 0..n {
        for j in i + 1..n {
            let pair = laurent_one_minus(ring, &ratio_exps(n, i, j))
                .try_mul(&laurent_one_minus(ring, &ratio_exps(n, j, i)))
                .expect("same arity");
            acc = acc.try_mul(&pair.pow(c)).expect("same arity");
        }
    }
    acc.constant_term()
}

/// `prod_j (j g)!/g! (a+b+(j-1)g)! / ((a+(j-1)g)! (b+(j-1)g)!)` over Z.
pub fn morris_rhs_int(alpha: u64, beta: u64, gamma: u64, n: u64) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for j in 1..=n {
        num *= big_factorial(j * gamma) * big_factorial(alpha + beta + (j - 1) * gamma);
        den *= big_factorial(gamma) * big_factorial(alpha + (j - 1) * gamma) * big_factorial(beta + (j - 1) * gamma);
    }
    debug_assert!((&num % &den).is_zero());
    num / den
}

/// The Morris product in F_p; every factorial argument must lie in `[0, p-1]`.
pub fn morris_rhs_fp(alpha: u64, beta: u64, gamma: u64, n: u64, field: &PrimeField) -> Result<FpElement> {
    let fact = |k: u64| field.factorial(k as i64);
    let inv = |k: u64| field.inv_factorial(k as i64);
    let mut v = field.one();
    for j in 1..=n {
        v = v * fact(j * gamma)? * inv(gamma)? * fact(alpha + beta + (j - 1) * gamma)?;
        v = v * inv(alpha + (j - 1) * gamma)? * inv(beta + (j - 1) * gamma)?;
    }
    Ok(v)
}

/// Constant term of `prod_i (1-x_i)^a (1-1/x_i)^b prod_{j != k} (1 - x_j/x_k)^g`.
pub fn morris_ct_oracle<R: Ring>(ring: &R, alpha: u64, beta: u64, gamma: u64, n: usize) -> R::Elem {
    let mut acc = LaurentPoly::from_poly(MultiPoly::one(ring, n));
    for i in 0..n {
        let mut up = vec![0; n];
        up[i] = 1;
        let mut down = vec![0; n];
        down[i] = -1;
        acc = acc
            .try_mul(&laurent_one_minus(ring, &up).pow(alpha))
            .and_then(|l| l.try_mul(&laurent_one_minus(ring, &down).pow(beta)))
            .expect("same arity");
    }
    for j in 0..n {
        for k in 0..n {
            if j != k {
                acc = acc.try_mul(&laurent_one_minus(ring, &ratio_exps(n, j, k)).pow(gamma)).expect("same arity");
            }
        }
    }
    acc.constant_term()
}

/// The Morris-derived formula, valid when `a + (n-1)c <= p - 1` and `p - 1 <= a + b + (n-1)c`.
pub fn morris_form_rhs(s: &SelbergParams) -> Result<FpElement> {
    if !s.morris_regime() {
        return Err(domain!("{s:?} is outside the Morris regime"));
    }
    let (n, a, b, c, p) = (s.n as i64, s.a as i64, s.b as i64, s.c as i64, s.p() as i64);
    let q = (1..=n).fold(ProjectedQuotient::new(&s.field), |q, j| {
        q.mul_factorial(j * c)
            .div_factorial(c)
            .mul_factorial(b + (j - 1) * c)
            .div_factorial(p - a - (n - j) * c - 1)
            .div_factorial(a + b + (n + j - 2) * c + 1 - p)
    });
    q.mul_sign(s.n * (s.n - 1) / 2 * s.c + s.n * s.a).finish()
}

/// Binomial form for `a = p - 1 - (n-1)c - k`:
/// `(-1)^{C(n,2)c + na} (nc)!/(c!)^n prod_j C(b+(j-1)c, k) / C((j-1)c+k, k)`.
/// The numerator binomials are reduced by Lucas' theorem.
pub fn binom_form_rhs(s: &SelbergParams, k: u64) -> Result<FpElement> {
    let f = &s.field;
    let p = s.p();
    if !s.morris_regime() || s.a + (s.n - 1) * s.c + k != p - 1 {
        return Err(domain!("binomial form needs the Morris regime and a = p - 1 - (n-1)c - k; got {s:?}, k = {k}"));
    }
    let (n, c) = (s.n as i64, s.c as i64);
    let mut q = (0..n).fold(ProjectedQuotient::new(f).mul_factorial(n * c), |q, _| q.div_factorial(c));
    q = q.mul_sign(s.n * (s.n - 1) / 2 * s.c + s.n * s.a);
    for j in 1..=s.n {
        let top = (j - 1) * s.c + k;
        if top >= p {
            return Err(domain!("denominator binomial C({top}, {k}) has top argument >= p"));
        }
        q = q
            .mul_elem(&f.binom_lucas(s.b + (j - 1) * s.c, k))
            .div_int(f.binom_lucas(top, k).value() as i64);
    }
    q.finish()
}

/// Which rectangle of the `(a, b)` parameter plane a cell falls in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Region {
    /// `Omega_i(n, c)`.
    Omega(u64),
    /// `a > p-1-(n-1)c` (where `S_n` vanishes) or `b >= p`.
    Outside,
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Region::Omega(i) => write!(f, "Omega{i}"),
            Region::Outside => f.write_str("OUTSIDE"),
        }
    }
}

pub fn region_classify(s: &SelbergParams) -> Region {
    let (p, n, c) = (s.p() as i64, s.n as i64, s.c as i64);
    let (a, b) = (s.a as i64, s.b as i64);
    let top = p - 1 - (n - 1) * c;
    if a > top || b >= p {
        return Region::Outside;
    }
    if b <= top {
        return Region::Omega(0);
    }
    (1..n)
        .find(|&i| p - (n - i) * c <= b && b <= p - 1 - (n - i - 1) * c)
        .map_or(Region::Outside, |i| Region::Omega(i as u64))
}

/// `S_m(a, b, c)` for a cell of `Omega_0(m, c)`: the main product or zero.
fn omega0_value(field: &PrimeField, m: u64, a: u64, b: u64, c: u64) -> Result<FpElement> {
    let s = SelbergParams::new(field, m, a, b, c)?;
    if region_classify(&s) != Region::Omega(0) {
        return Err(Error::Mismatch(format!("factor {s:?} is not in Omega0")));
    }
    if s.lower_bound_holds() {
        selberg_rhs(&s)
    } else {
        Ok(field.zero())
    }
}

/// `S_n` on `Omega_i`, `i >= 1`, as a product of two smaller integrals.
pub fn factorization_rhs(s: &SelbergParams, i: u64) -> Result<FpElement> {
    if i == 0 || region_classify(s) != Region::Omega(i) {
        return Err(domain!("{s:?} is not in Omega{i}"));
    }
    let f = &s.field;
    let (p, n, a, b, c) = (s.p(), s.n, s.a, s.b, s.c);
    let small_binom = |j: u64| -> Result<FpElement> {
        let top = p - 1 - (n - j) * c - a;
        let bottom = (j - 1) * c;
        if !(top < p && top >= bottom) {
            return Err(Error::Mismatch(format!("ratio binomial C({top}, {bottom}) violates p > top >= bottom")));
        }
        Ok(f.binom_lucas(top, bottom))
    };
    let mut ratio = f.one();
    for j in 1..=n - i {
        ratio = ratio * small_binom(j)?;
    }
    for j in 1..=i {
        ratio = ratio * small_binom(j)?;
    }
    for j in 1..=n {
        ratio = ratio.try_div(&small_binom(j)?)?;
    }
    let first = omega0_value(f, n - i, a + i * c, b, c)?;
    let second = omega0_value(f, i, a + (n - i) * c, b + (n - i) * c - p, c)?;
    Ok(f.sign((n - i) * i * c) * f.binom_lucas(n * c, i * c) * ratio * first * second)
}

/// `P_n^{(alpha, beta)}(x)` over F_p as a univariate polynomial; requires `n < p`.
pub fn jacobi_poly(n: u64, alpha: &FpElement, beta: &FpElement) -> Result<FpPoly> {
    let f = alpha.field().clone();
    if n >= f.p() {
        return Err(domain!("Jacobi degree {n} must be below p = {}", f.p()));
    }
    let half = f.elem(f.p().div_ceil(2));
    let x = FpPoly::var(&f, 1, 0);
    // (x - 1)/2
    let w = (&x - &FpPoly::one(&f, 1)).scale(&half.value());
    let mut acc = FpPoly::zero(&f, 1);
    for nu in 0..=n {
        let mut coeff = f.binom_lucas(n, nu);
        for i in 1..=nu {
            coeff = coeff * (f.elem(n + i) + alpha + beta);
        }
        for i in nu + 1..=n {
            coeff = coeff * (alpha + &f.elem(i));
        }
        acc = &acc + &w.pow(nu).scale(&coeff.value());
    }
    Ok(acc.scale(&f.inv_factorial(n as i64)?.value()))
}

/// Both sides of the Jacobi-polynomial identity as polynomials in `t`.
pub fn jacobi_sides(s: &SelbergParams) -> Result<(FpPoly, FpPoly)> {
    if !s.aomoto_regime() {
        return Err(domain!("{s:?} is outside the Aomoto regime"));
    }
    let f = &s.field;
    let c = f.elem(s.c);
    if c.is_zero() {
        return Err(singular!("c = {} is not invertible mod {}", s.c, s.p()));
    }
    let mut denom = f.one();
    for i in s.n - 1..=2 * s.n - 2 {
        let d = f.elem(s.a + s.b + i * s.c + 2);
        if d.is_zero() {
            return Err(singular!("denominator a + b + {i}c + 2 vanishes mod {}", s.p()));
        }
        denom = denom * d;
    }
    let n = s.n as usize;
    let t = FpPoly::var(f, n + 1, n);
    let map: Vec<usize> = (0..n).collect();
    let mut integrand = master_polynomial(s, 0)?.embed(n + 1, &map)?;
    for i in 0..n {
        integrand = &integrand * &(&FpPoly::var(f, n + 1, i) - &t);
    }
    let lhs = fp_integral_partial(&integrand, &map, &Cycle::ones(n))?;

    let alpha = f.elem(s.a + 1).try_div(&c)? - f.one();
    let beta = f.elem(s.b + 1).try_div(&c)? - f.one();
    let jac = jacobi_poly(s.n, &alpha, &beta)?;
    let one_minus_2t = FpPoly::from_univariate(f, 1, 0, &[1, f.neg_raw(2)]);
    let scalar = f.factorial(s.n as i64)? * c.pow(s.n) * selberg_s(s)?.try_div(&denom)?;
    let rhs = jac.compose_univariate(&one_minus_2t)?.scale(&scalar.value());
    Ok((lhs, rhs))
}

pub fn jacobi_check(s: &SelbergParams) -> Result<bool> {
    let (lhs, rhs) = jacobi_sides(s)?;
    Ok(lhs == rhs)
}

/// Integer-ring helpers for the constant-term oracles.
pub fn dyson_ct_int(n: usize, c: u64) -> BigInt {
    dyson_ct_oracle(&IntegerRing, n, c)
}

pub fn morris_ct_int(alpha: u64, beta: u64, gamma: u64, n: usize) -> BigInt {
    morris_ct_oracle(&IntegerRing, alpha, beta, gamma, n)
}
