//! End-to-end acceptance run: one PASS/FAIL line per criterion, with wall
//! time checked against each criterion's limit. Criteria run one after
//! another so the timings are not distorted by each other.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::One;

use fp_selberg::cli::table::build_table;
use fp_selberg::closedform::*;
use fp_selberg::fpintegral::{beta_fp, odd_power_integral, selberg_s, selberg_skn_all, selberg_sum_oracle};
use fp_selberg::kz::{kz_closed_form, kz_residual, kz_solution, singular_check, KZParams};
use fp_selberg::zidentity::{common_factor, decoupled_sum_check, normal_form, verify_identity};
use fp_selberg::{Error, PrimeField, SelbergParams};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lib<T>(r: fp_selberg::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn grid(primes: &[u64], ns: std::ops::RangeInclusive<u64>, cs: std::ops::RangeInclusive<u64>) -> Vec<SelbergParams> {
    let mut cells = Vec::new();
    for &p in primes {
        let f = PrimeField::new(p).unwrap();
        for n in ns.clone() {
            for c in cs.clone() {
                for a in 0..p {
                    for b in 0..p {
                        cells.push(SelbergParams::new(&f, n, a, b, c).unwrap());
                    }
                }
            }
        }
    }
    cells
}

fn main_grid() -> Vec<SelbergParams> {
    grid(&[5, 7, 11, 13], 1..=3, 0..=4)
}

fn name(s: &SelbergParams) -> String {
    format!("p={} n={} a={} b={} c={}", s.p(), s.n, s.a, s.b, s.c)
}

/// `n! mod p` by direct multiplication, for the independent beta oracle.
fn fact_mod(n: u64, p: u64) -> u64 {
    (1..=n).fold(1, |acc, i| acc * i % p)
}

fn pow_mod(mut x: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1;
    x %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * x % p;
        }
        x = x * x % p;
        e >>= 1;
    }
    acc
}

fn c1_beta() -> Outcome {
    let mut cells = 0;
    for p in [3u64, 5, 7, 11, 13] {
        let f = PrimeField::new(p).unwrap();
        for a in 0..p {
            for b in 0..p {
                let v = lib(beta_fp(a, b, &f))?.value();
                let expected = if a + b + 1 < p {
                    0
                } else {
                    let num = fact_mod(a, p) * fact_mod(b, p) % p;
                    let den = fact_mod(a + b + 1 - p, p);
                    (p - num * pow_mod(den, p - 2, p) % p) % p
                };
                // coefficient of x^{p-1} in x^a (1-x)^b read off the binomial expansion
                let k = p - 1 - a;
                let coeff = if k > b {
                    0
                } else {
                    let binom = fact_mod(b, p) * pow_mod(fact_mod(k, p) * fact_mod(b - k, p) % p, p - 2, p) % p;
                    if k % 2 == 1 { (p - binom) % p } else { binom }
                };
                ensure(v == expected && v == coeff, || format!("p={p} a={a} b={b}: {v} vs {expected}/{coeff}"))?;
                cells += 1;
            }
        }
    }
    Ok(format!("{cells} cells"))
}

fn c2_main() -> Outcome {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    pool.install(|| {
        let mut checked = 0;
        for s in main_grid().iter().filter(|s| s.main_regime()) {
            let lhs = lib(selberg_s(s))?;
            let rhs = lib(selberg_rhs(s))?;
            ensure(lhs == rhs, || format!("{}: S = {lhs}, rhs = {rhs}", name(s)))?;
            if s.sum_oracle_exact() {
                let sum = selberg_sum_oracle(s);
                ensure(sum == s.field.sign(s.n) * &lhs, || format!("{}: point sum {sum}", name(s)))?;
            }
            checked += 1;
        }
        Ok(format!("{checked} in-regime cells, single worker"))
    })
}

fn c3_aomoto() -> Outcome {
    let mut checked = 0;
    for s in main_grid().iter().filter(|s| s.aomoto_regime()) {
        let all = lib(selberg_skn_all(s))?;
        for k in 0..s.n {
            let rhs = lib(aomoto_rhs(s, k))?;
            ensure(all[k as usize] == rhs, || format!("{} k={k}: {} vs {rhs}", name(s), all[k as usize]))?;
        }
        let mut cur = all[0].clone();
        for k in 1..=s.n {
            cur = lib(aomoto_step(&cur, s, k))?;
        }
        let shifted = lib(selberg_s(&s.with_ab(s.a + 1, s.b)))?;
        ensure(cur == shifted, || format!("{}: chain {cur} vs S(a+1) {shifted}", name(s)))?;
        checked += 1;
    }
    Ok(format!("{checked} in-regime cells, all k and the full chain"))
}

fn c4_base() -> Outcome {
    let mut checked = 0;
    for s in main_grid().iter().filter(|s| s.a + s.b + (s.n - 1) * s.c == s.p() - 1) {
        let lhs = lib(selberg_s(s))?;
        let base = lib(base_case_value(s))?;
        let rhs = lib(selberg_rhs(s))?;
        ensure(lhs == base && base == rhs, || format!("{}: {lhs} / {base} / {rhs}", name(s)))?;
        checked += 1;
    }
    Ok(format!("{checked} base-line cells"))
}

fn c5_dyson() -> Outcome {
    let mut cases = 0;
    for n in 1..=4u64 {
        for c in 1..=3u64 {
            let ct = dyson_ct_int(n as usize, c);
            let closed = dyson_value_int(n, c);
            // multinomial (cn; c, ..., c) as a product of binomials
            let mut multinomial = BigInt::one();
            for j in 1..=n {
                let top = j * c;
                let binom = (0..c).fold(BigInt::one(), |acc, i| acc * (top - i)) / (1..=c).fold(BigInt::one(), |acc, i| acc * i);
                multinomial *= binom;
            }
            ensure(ct == closed && closed == multinomial, || format!("n={n} c={c}: {ct} / {closed} / {multinomial}"))?;
            cases += 1;
        }
    }
    Ok(format!("{cases} cases"))
}

fn c6_morris() -> Outcome {
    let mut ct_cases = 0;
    for n in 1..=3usize {
        for al in 0..=3 {
            for be in 0..=3 {
                for ga in 0..=2 {
                    let ct = morris_ct_int(al, be, ga, n);
                    let rhs = morris_rhs_int(al, be, ga, n as u64);
                    ensure(ct == rhs, || format!("CT n={n} alpha={al} beta={be} gamma={ga}: {ct} vs {rhs}"))?;
                    ct_cases += 1;
                }
            }
        }
    }
    let mut cells = 0;
    for s in main_grid().iter().filter(|s| s.morris_regime()) {
        let lhs = lib(selberg_s(s))?;
        let k = s.p() - 1 - (s.n - 1) * s.c - s.a;
        let morris = lib(morris_form_rhs(s))?;
        let binom = lib(binom_form_rhs(s, k))?;
        ensure(lhs == morris && lhs == binom, || format!("{}: S = {lhs}, morris {morris}, binomial {binom}", name(s)))?;
        if s.main_regime() {
            ensure(lib(selberg_rhs(s))? == lhs, || format!("{}: overlap with the main product", name(s)))?;
        }
        cells += 1;
    }
    let f = PrimeField::new(11).unwrap();
    for b in 0..11 {
        let s = SelbergParams::new(&f, 2, 7, b, 3).unwrap();
        ensure(s.morris_regime(), || format!("(7, {b}) should be in the Morris regime"))?;
        let v = lib(selberg_s(&s))?.value();
        ensure(v == 2, || format!("S_2(7,{b},3) mod 11 = {v}, expected 2"))?;
    }
    Ok(format!("{ct_cases} constant terms, {cells} regime cells, S_2(7,b,3) = 2 mod 11 for b = 0..10"))
}

fn c7_factorization() -> Outcome {
    let f = PrimeField::new(11).unwrap();
    let (p, c) = (11u64, 3u64);
    let mut cells = 0;
    for n in 2..=3u64 {
        let top = p - 1 - (n - 1) * c;
        for a in 0..p {
            for b in 0..p {
                let s = SelbergParams::new(&f, n, a, b, c).unwrap();
                if let Region::Omega(i) = region_classify(&s) {
                    if i >= 1 {
                        let lhs = lib(selberg_s(&s))?;
                        let rhs = lib(factorization_rhs(&s, i))?;
                        ensure(lhs == rhs, || format!("{} Omega{i}: {lhs} vs {rhs}", name(&s)))?;
                        cells += 1;
                    }
                }
            }
        }
        let table = build_table(p, n, c, false).map_err(|e| e.to_string())?;
        ensure(table.rows == top + 1 && table.cols == p, || format!("n={n}: table is {}x{}", table.rows, table.cols))?;
        ensure(table.cells.len() as u64 == (top + 1) * p, || format!("n={n}: {} cells", table.cells.len()))?;
        for cell in &table.cells {
            // band i covers b in [p - (n-i)c, p - 1 - (n-i-1)c]; band 0 is b <= top
            let band = if cell.b <= top { 0 } else { (1..n).find(|&i| p - (n - i) * c <= cell.b && cell.b <= p - 1 - (n - i - 1) * c).unwrap() };
            ensure(cell.region == format!("Omega{band}"), || format!("n={n} ({}, {}): region {}", cell.a, cell.b, cell.region))?;
            let s = SelbergParams::new(&f, n, cell.a, cell.b, c).unwrap();
            if s.sum_oracle_exact() {
                let sum = selberg_sum_oracle(&s);
                ensure(sum == s.field.sign(n) * &f.elem(cell.value), || format!("n={n} ({}, {}): table vs point sum", cell.a, cell.b))?;
            }
        }
        let full = build_table(p, n, c, true).map_err(|e| e.to_string())?;
        ensure(full.rows == p, || format!("n={n}: full table has {} rows", full.rows))?;
        for cell in full.cells.iter().filter(|cell| cell.a > top) {
            ensure(cell.value == 0 && cell.region == "OUTSIDE", || format!("n={n} ({}, {}) should vanish", cell.a, cell.b))?;
        }
    }
    Ok(format!("{cells} Omega_i (i >= 1) cells; tables 8x11 and 5x11 with bands and zero rows"))
}

fn c8_identity() -> Outcome {
    for (n, c) in [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2)] {
        ensure(lib(verify_identity(n, c))?, || format!("n={n} c={c}: sides differ"))?;
    }
    let nf = lib(normal_form(2, 2))?.to_string();
    ensure(nf == "12(x+y+2)(x+y+3)", || format!("normal form {nf}"))?;
    let common = lib(common_factor(2, 2))?.to_string();
    ensure(common == "x(x+1)y(y+1)", || format!("common factor {common}"))?;
    Ok(format!("5 (n, c) pairs exact in Z[x,y]; n=2 c=2 normal form {nf}"))
}

fn c9_decoupling() -> Outcome {
    let mut cases = 0;
    for n in [2usize, 3] {
        for a in 0..=2 {
            for b in 0..=2 {
                ensure(lib(decoupled_sum_check(n, a, b, 1))?, || format!("n={n} a={a} b={b}"))?;
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} cases in Q"))
}

fn c10_odd() -> Outcome {
    let mut cells = 0;
    for s in grid(&[5, 7], 2..=3, 0..=2) {
        let v = lib(odd_power_integral(&s))?;
        ensure(v.is_zero(), || format!("{}: {v}", name(&s)))?;
        cells += 1;
    }
    Ok(format!("{cells} cells"))
}

fn c11_kz() -> Outcome {
    let instances = [
        (KZParams::new(&PrimeField::new(7).unwrap(), 2, 2, 1, 3, 1).unwrap(), (4, 3, 5), false),
        (KZParams::new(&PrimeField::new(11).unwrap(), 3, 3, 2, 2, 1).unwrap(), (4, 5, 6), true),
    ];
    let mut notes = Vec::new();
    for (k, (m, m12, c), zero) in &instances {
        let label = format!("p={} m1={} m2={} n={}", k.field.p(), k.m1, k.m2, k.n);
        ensure(k.theorem71_regime(), || format!("{label}: outside the regime"))?;
        ensure((k.big_m1, k.big_m2, k.big_m12, k.c) == (*m, *m, *m12, *c), || format!("{label}: derived exponents {k:?}"))?;
        let u = lib(kz_solution(k))?;
        let closed = lib(kz_closed_form(k))?;
        ensure(u == closed, || format!("{label}: solution differs from the closed form"))?;
        let (r1, r2) = lib(kz_residual(&u, k))?;
        ensure(r1.is_zero() && r2.is_zero(), || format!("{label}: nonzero residual"))?;
        ensure(singular_check(&u), || format!("{label}: e does not annihilate the solution"))?;
        ensure(u.is_zero() == *zero, || format!("{label}: identically zero = {}", u.is_zero()))?;
        notes.push(format!("{label}{}", if u.is_zero() { " (identically zero)" } else { "" }));
    }
    Ok(notes.join("; "))
}

fn c12_jacobi() -> Outcome {
    let (mut passed, mut singular) = (0, 0);
    for s in main_grid().iter().filter(|s| s.aomoto_regime()) {
        match jacobi_check(s) {
            Ok(true) => passed += 1,
            Ok(false) => return Err(format!("{}: polynomial sides differ", name(s))),
            Err(Error::Singular(_)) => singular += 1,
            Err(e) => return Err(format!("{}: {e}", name(s))),
        }
    }
    Ok(format!("{passed} cells exact, {singular} reported singular"))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("F_p-beta integral", c1_beta, Duration::from_secs(1)),
        ("main product formula", c2_main, Duration::from_secs(60)),
        ("decorated formula and recursion", c3_aomoto, Duration::from_secs(120)),
        ("base case", c4_base, Duration::MAX),
        ("Dyson constant term", c5_dyson, Duration::from_secs(10)),
        ("Morris identity and regime forms", c6_morris, Duration::MAX),
        ("factorization and p=11 tables", c7_factorization, Duration::MAX),
        ("summation identity in Z[x,y]", c8_identity, Duration::from_secs(60)),
        ("decoupled sum", c9_decoupling, Duration::MAX),
        ("odd-power vanishing", c10_odd, Duration::MAX),
        ("KZ solutions mod p", c11_kz, Duration::from_secs(30)),
        ("Jacobi polynomial identity", c12_jacobi, Duration::MAX),
    ];
    let mut failures = 0;
    for (i, (label, run, limit)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let result = match result {
            Ok(detail) if elapsed > limit => Err(format!("{detail}; took {elapsed:.2?}, limit {limit:?}")),
            other => other,
        };
        match result {
            Ok(detail) => println!("PASS criterion {}: {label}: {detail} [{elapsed:.2?}]", i + 1),
            Err(why) => {
                failures += 1;
                println!("FAIL criterion {}: {label}: {why} [{elapsed:.2?}]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failures} failed", 12 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
