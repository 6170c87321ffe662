//! The F_p-integral: the coefficient at exponent `(l_1 p - 1, ..., l_k p - 1)`,
//! and direct computation of beta and Selberg integrals from it.

use rayon::prelude::*;

use crate::error::{domain, type_err, Error, Result};
use crate::modarith::{FpElement, PrimeField};
use crate::polyring::FpPoly;

/// The multi-index `[l_1, ..., l_k]_p` selecting which coefficient is extracted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cycle(Vec<u32>);

impl Cycle {
    pub fn new(l: Vec<u32>) -> Result<Self> {
        if l.contains(&0) {
            return Err(domain!("cycle entries must be positive: {l:?}"));
        }
        Ok(Cycle(l))
    }

    /// `[1, ..., 1]_p` in `k` variables.
    pub fn ones(k: usize) -> Self {
        Cycle(vec![1; k])
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn exponents(&self, p: u64) -> Vec<u32> {
        self.0.iter().map(|&l| (l as u64 * p - 1) as u32).collect()
    }
}

pub fn fp_integral(poly: &FpPoly, cycle: &Cycle) -> Result<FpElement> {
    if poly.nvars() != cycle.len() {
        return Err(type_err!("{}-variable polynomial integrated over a {}-cycle", poly.nvars(), cycle.len()));
    }
    poly.coefficient_fp(&cycle.exponents(poly.field().p()))
}

/// Integrates over the variables `vars` only, leaving a polynomial in the
/// remaining variables (kept in their original relative order).
pub fn fp_integral_partial(poly: &FpPoly, vars: &[usize], cycle: &Cycle) -> Result<FpPoly> {
    if vars.len() != cycle.len() {
        return Err(type_err!("{} integration variables for a {}-cycle", vars.len(), cycle.len()));
    }
    let nvars = poly.nvars();
    if vars.iter().any(|&v| v >= nvars) {
        return Err(type_err!("integration variable out of range in {vars:?}"));
    }
    let target = cycle.exponents(poly.field().p());
    let rest: Vec<usize> = (0..nvars).filter(|i| !vars.contains(i)).collect();
    let terms = poly
        .terms()
        .filter(|(e, _)| vars.iter().zip(&target).all(|(&v, &t)| e[v] == t))
        .map(|(e, c)| (rest.iter().map(|&i| e[i]).collect(), *c));
    FpPoly::from_terms(poly.field(), rest.len(), terms)
}

/// `(1 - x_i)^b` in the `i`-th of `nvars` variables.
fn one_minus_pow(field: &PrimeField, nvars: usize, i: usize, b: u64) -> FpPoly {
    let coeffs: Vec<u64> = (0..=b)
        .map(|k| {
            let c = field.binom_lucas_raw(b, k);
            if k % 2 == 1 {
                field.neg_raw(c)
            } else {
                c
            }
        })
        .collect();
    FpPoly::from_univariate(field, nvars, i, &coeffs)
}

/// `(x_i - x_j)^e` expanded by the binomial theorem.
pub fn pair_power(field: &PrimeField, nvars: usize, i: usize, j: usize, e: u64) -> FpPoly {
    let terms = (0..=e).map(|m| {
        let mut exps = vec![0u32; nvars];
        exps[i] = m as u32;
        exps[j] = (e - m) as u32;
        let c = field.binom_lucas_raw(e, m);
        (exps, if (e - m) % 2 == 1 { field.neg_raw(c) } else { c })
    });
    FpPoly::from_terms(field, nvars, terms).expect("arity matches")
}

/// `prod_{i<j} (x_i - x_j)^e` in `n` variables.
pub fn vandermonde_power(field: &PrimeField, n: usize, e: u64) -> FpPoly {
    let mut acc = FpPoly::one(field, n);
    for i in 0..n {
        for j in i + 1..n {
            acc = acc.try_mul(&pair_power(field, n, i, j, e)).expect("same ring");
        }
    }
    acc
}

/// Parameters `(p, n, a, b, c)` of an F_p-Selberg integral.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelbergParams {
    pub field: PrimeField,
    pub n: u64,
    pub a: u64,
    pub b: u64,
    pub c: u64,
}

impl SelbergParams {
    pub fn new(field: &PrimeField, n: u64, a: u64, b: u64, c: u64) -> Result<Self> {
        if n == 0 {
            return Err(domain!("dimension n must be at least 1"));
        }
        Ok(SelbergParams {
            field: field.clone(),
            n,
            a,
            b,
            c,
        })
    }

    pub fn p(&self) -> u64 {
        self.field.p()
    }

    pub fn with_ab(&self, a: u64, b: u64) -> Self {
        SelbergParams { a, b, ..self.clone() }
    }

    /// `p - 1 <= a + b + (n-1)c`.
    pub fn lower_bound_holds(&self) -> bool {
        self.p() - 1 <= self.a + self.b + (self.n - 1) * self.c
    }

    /// `a + b + (2n-2)c`.
    pub fn spread(&self) -> u64 {
        self.a + self.b + (2 * self.n - 2) * self.c
    }

    /// Range of the main product formula: `p-1 <= a+b+(n-1)c` and `a+b+(2n-2)c < 2p-1`.
    pub fn main_regime(&self) -> bool {
        self.lower_bound_holds() && self.spread() < 2 * self.p() - 1
    }

    /// As [`Self::main_regime`] with the strict bound `2p-2`.
    pub fn aomoto_regime(&self) -> bool {
        self.lower_bound_holds() && self.spread() < 2 * self.p() - 2
    }

    /// `p-1 <= a+b+(n-1)c` and `a+(n-1)c <= p-1`.
    pub fn morris_regime(&self) -> bool {
        self.lower_bound_holds() && self.a + (self.n - 1) * self.c < self.p()
    }
}

/// Master polynomial with pair exponent `pair_exp` and the extra factor `x_1 ... x_k`.
pub fn decorated_master_polynomial(s: &SelbergParams, k: u64, pair_exp: u64) -> Result<FpPoly> {
    if k > s.n {
        return Err(domain!("decoration index k = {k} exceeds n = {}", s.n));
    }
    let n = s.n as usize;
    let f = &s.field;
    let mut acc = vandermonde_power(f, n, pair_exp);
    for i in 0..n {
        let extra = if (i as u64) < k { 1 } else { 0 };
        let mut shift = vec![0; n];
        shift[i] = (s.a + extra) as u32;
        acc = acc.shift(&shift)?.try_mul(&one_minus_pow(f, n, i, s.b))?;
    }
    Ok(acc)
}

/// `(x_1 ... x_k) prod_{i<j} (x_i - x_j)^{2c} prod_i x_i^a (1 - x_i)^b`.
pub fn master_polynomial(s: &SelbergParams, k: u64) -> Result<FpPoly> {
    decorated_master_polynomial(s, k, 2 * s.c)
}

pub fn selberg_s(s: &SelbergParams) -> Result<FpElement> {
    fp_integral(&master_polynomial(s, 0)?, &Cycle::ones(s.n as usize))
}

pub fn selberg_skn(s: &SelbergParams, k: u64) -> Result<FpElement> {
    fp_integral(&master_polynomial(s, k)?, &Cycle::ones(s.n as usize))
}

/// `S_{k,n}` for every `k = 0..=n` from a single expansion of the undecorated
/// master polynomial: decorating by `x_1 ... x_k` lowers the extracted
/// exponent of those variables to `p - 2`.
pub fn selberg_skn_all(s: &SelbergParams) -> Result<Vec<FpElement>> {
    let master = master_polynomial(s, 0)?;
    let p = s.p() as u32;
    (0..=s.n)
        .map(|k| {
            let d: Vec<u32> = (0..s.n).map(|i| if i < k { p - 2 } else { p - 1 }).collect();
            master.coefficient_fp(&d)
        })
        .collect()
}

/// F_p-integral of the master polynomial with an odd pair exponent `2c + 1`.
pub fn odd_power_integral(s: &SelbergParams) -> Result<FpElement> {
    fp_integral(&decorated_master_polynomial(s, 0, 2 * s.c + 1)?, &Cycle::ones(s.n as usize))
}

/// `int_{[1]_p} x^a (1-x)^b dx` by expansion, checked against the closed form
/// `-a! b! / (a+b-p+1)!` (or 0 when `a + b < p - 1`).
pub fn beta_fp(a: u64, b: u64, field: &PrimeField) -> Result<FpElement> {
    let p = field.p();
    if a >= p || b >= p {
        return Err(domain!("beta needs a, b < p; got a = {a}, b = {b}, p = {p}"));
    }
    let mut poly = one_minus_pow(field, 1, 0, b);
    poly = poly.shift(&[a as u32])?;
    let value = fp_integral(&poly, &Cycle::ones(1))?;
    let closed = if a + b + 1 < p {
        field.zero()
    } else {
        -(field.factorial(a as i64)? * field.factorial(b as i64)? * field.inv_factorial((a + b + 1 - p) as i64)?)
    };
    if value != closed {
        return Err(Error::Mismatch(format!(
            "beta({a},{b}) mod {p}: expansion {value} vs closed form {closed}"
        )));
    }
    Ok(value)
}

/// `sum_{x in F_p^n} prod_{i<j} (x_i-x_j)^{2c} prod_i x_i^a (1-x_i)^b`, with `0^0 = 1`.
///
/// Exhaustive over `p^n` points; the outer coordinate is split across the
/// rayon pool and the partial sums are combined by field addition.
pub fn selberg_sum_oracle(s: &SelbergParams) -> FpElement {
    let f = &s.field;
    let p = s.p();
    let n = s.n as usize;
    // x^e via Fermat: only e mod (p-1) matters for x != 0.
    let pow = |x: u64, e: u64| -> u64 {
        if e == 0 {
            1
        } else if x == 0 {
            0
        } else {
            f.pow_raw(x, (e - 1) % (p - 1) + 1)
        }
    };
    let single: Vec<u64> = (0..p).map(|x| f.mul_raw(pow(x, s.a), pow(f.sub_raw(1, x), s.b))).collect();
    let pair: Vec<u64> = (0..p).map(|d| pow(d, 2 * s.c)).collect();
    let total: u64 = (0..p)
        .into_par_iter()
        .map(|x0| {
            let mut point = vec![0u64; n];
            point[0] = x0;
            let mut acc = 0u64;
            loop {
                let mut term = 1u64;
                for i in 0..n {
                    term = f.mul_raw(term, single[point[i] as usize]);
                    for j in i + 1..n {
                        term = f.mul_raw(term, pair[f.sub_raw(point[i], point[j]) as usize]);
                    }
                }
                acc = f.add_raw(acc, term);
                // odometer over coordinates 1..n
                let mut i = n;
                loop {
                    if i == 1 {
                        return acc;
                    }
                    i -= 1;
                    point[i] += 1;
                    if point[i] < p {
                        break;
                    }
                    point[i] = 0;
                }
                if n == 1 {
                    return acc;
                }
            }
        })
        .reduce(|| 0, |a, b| f.add_raw(a, b));
    f.elem(total)
}

/// Whether `int (dP/dx_i) = 0` over `cycle`.
pub fn stokes_check(poly: &FpPoly, i: usize, cycle: &Cycle) -> Result<bool> {
    Ok(fp_integral(&poly.partial_derivative(i)?, cycle)?.is_zero())
}

/// Highest exponent any single variable reaches in the master polynomial.
pub fn per_variable_degree(s: &SelbergParams) -> u64 {
    s.a + s.b + 2 * (s.n - 1) * s.c
}

impl SelbergParams {
    /// Whether the sum oracle is guaranteed to equal `(-1)^n S_n`.
    pub fn sum_oracle_exact(&self) -> bool {
        per_variable_degree(self) < 2 * (self.p() - 1)
    }
}
