//! Verification campaigns: each suite sweeps a parameter grid, compares a
//! closed form or identity against the brute-force integral, and tallies
//! the outcome per cell.

use clap::ValueEnum;
use serde_json::json;

use super::report::{compare, timed, Outcome, Report};
use super::{IntRange, UsageError};
use crate::closedform::*;
use crate::fpintegral::{odd_power_integral, selberg_s, selberg_skn_all, selberg_sum_oracle, beta_fp};
use crate::kz::{kz_closed_form, kz_residual, kz_solution, singular_check, KZParams};
use crate::modarith::PrimeField;
use crate::zidentity::{decoupled_sum_check, identity_specialization, normal_form, verify_identity};
use crate::{Error, SelbergParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Beta,
    Selberg,
    Aomoto,
    Morris,
    Dyson,
    Factorization,
    Jacobi,
    Identity,
    Odd,
    Kz,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Beta => "beta",
            Suite::Selberg => "selberg",
            Suite::Aomoto => "aomoto",
            Suite::Morris => "morris",
            Suite::Dyson => "dyson",
            Suite::Factorization => "factorization",
            Suite::Jacobi => "jacobi",
            Suite::Identity => "identity",
            Suite::Odd => "odd",
            Suite::Kz => "kz",
            Suite::All => "all",
        }
    }

    const EACH: [Suite; 10] = [
        Suite::Beta,
        Suite::Selberg,
        Suite::Aomoto,
        Suite::Morris,
        Suite::Dyson,
        Suite::Factorization,
        Suite::Jacobi,
        Suite::Identity,
        Suite::Odd,
        Suite::Kz,
    ];
}

/// Ranges supplied on the command line; `None` selects the suite default.
#[derive(Clone, Debug, Default)]
pub struct GridSpec {
    pub p: Option<IntRange>,
    pub n: Option<IntRange>,
    pub c: Option<IntRange>,
    pub a: Option<IntRange>,
    pub b: Option<IntRange>,
}

struct Resolved {
    primes: Vec<u64>,
    n: IntRange,
    c: IntRange,
    a: IntRange,
    b: IntRange,
}

impl Resolved {
    fn json(&self) -> serde_json::Value {
        json!({
            "p": self.primes,
            "n": self.n.to_string(),
            "c": self.c.to_string(),
            "a": coord_json(&self.a),
            "b": coord_json(&self.b),
        })
    }
}

const UNBOUNDED: u64 = u64::MAX / 4;

/// `a` and `b` ranges are clipped to `p - 1` per prime.
fn coord_json(r: &IntRange) -> String {
    if r.hi >= UNBOUNDED {
        format!("{}..p-1", r.lo)
    } else {
        r.to_string()
    }
}

fn resolve(g: &GridSpec, p: (u64, u64), n: (u64, u64), c: (u64, u64)) -> Result<Resolved, UsageError> {
    let p_range = g.p.unwrap_or(IntRange::new(p.0, p.1));
    let primes = p_range.primes();
    if primes.is_empty() {
        return Err(UsageError(format!("no odd prime in --p {p_range}")));
    }
    let n = g.n.unwrap_or(IntRange::new(n.0, n.1));
    if n.lo == 0 {
        return Err(UsageError("--n must be at least 1".into()));
    }
    Ok(Resolved {
        primes,
        n,
        c: g.c.unwrap_or(IntRange::new(c.0, c.1)),
        a: g.a.unwrap_or(IntRange::new(0, UNBOUNDED)),
        b: g.b.unwrap_or(IntRange::new(0, UNBOUNDED)),
    })
}

const MAX_SWEEP_PRIME: u64 = 200;
const MAX_SWEEP_N: u64 = 6;

fn selberg_grid(r: &Resolved) -> Result<Vec<SelbergParams>, UsageError> {
    if r.primes.iter().any(|&p| p > MAX_SWEEP_PRIME) || r.n.hi > MAX_SWEEP_N {
        return Err(UsageError(format!(
            "grid exceeds the sweep budget (p <= {MAX_SWEEP_PRIME}, n <= {MAX_SWEEP_N})"
        )));
    }
    let mut cells = Vec::new();
    for &p in &r.primes {
        let f = PrimeField::new(p)?;
        let (Some(a), Some(b)) = (r.a.clip(p - 1), r.b.clip(p - 1)) else { continue };
        for n in r.n.iter() {
            for c in r.c.iter() {
                for a in a.iter() {
                    for b in b.iter() {
                        cells.push(SelbergParams::new(&f, n, a, b, c)?);
                    }
                }
            }
        }
    }
    Ok(cells)
}

fn cell_name(s: &SelbergParams) -> String {
    format!("p={} n={} a={} b={} c={}", s.p(), s.n, s.a, s.b, s.c)
}

fn lib_fail(s: &SelbergParams, e: Error) -> Outcome {
    Outcome::Fail(format!("{}: {e}", cell_name(s)))
}

macro_rules! try_cell {
    ($s:expr, $e:expr) => {
        match $e {
            Ok(v) => v,
            Err(err) => return lib_fail($s, err),
        }
    };
}

/// All checks must pass for the cell to pass.
fn all_of(outcomes: impl IntoIterator<Item = Outcome>) -> Outcome {
    for o in outcomes {
        if o != Outcome::Pass {
            return o;
        }
    }
    Outcome::Pass
}

fn run_beta(g: &GridSpec) -> Result<Report, UsageError> {
    let r = resolve(g, (3, 13), (1, 1), (0, 0))?;
    let mut report = Report::new("beta", json!({ "p": r.primes, "a": coord_json(&r.a), "b": coord_json(&r.b) }));
    let mut cells = Vec::new();
    for &p in &r.primes {
        let f = PrimeField::new(p)?;
        let (Some(ar), Some(br)) = (r.a.clip(p - 1), r.b.clip(p - 1)) else { continue };
        for a in ar.iter() {
            for b in br.iter() {
                cells.push((f.clone(), a, b));
            }
        }
    }
    report.run_cells(&cells, |(f, a, b)| match beta_fp(*a, *b, f) {
        Ok(_) => Outcome::Pass,
        Err(e) => Outcome::Fail(format!("p={} a={a} b={b}: {e}", f.p())),
    });
    Ok(report)
}

fn run_selberg(g: &GridSpec) -> Result<Report, UsageError> {
    let r = resolve(g, (5, 13), (1, 3), (0, 4))?;
    let mut report = Report::new("selberg", r.json());
    let cells = selberg_grid(&r)?;
    report.run_cells(&cells, |s| {
        if !s.main_regime() {
            return Outcome::Skip;
        }
        let name = cell_name(s);
        let lhs = try_cell!(s, selberg_s(s));
        let mut checks = vec![compare(&name, &lhs, &try_cell!(s, selberg_rhs(s)))];
        if s.a + s.b + (s.n - 1) * s.c == s.p() - 1 {
            checks.push(compare(&format!("{name} base case"), &lhs, &try_cell!(s, base_case_value(s))));
        }
        if s.sum_oracle_exact() {
            let sum = selberg_sum_oracle(s);
            checks.push(compare(&format!("{name} point sum"), &sum, &(s.field.sign(s.n) * &lhs)));
        }
        all_of(checks)
    });
    Ok(report)
}

fn run_aomoto(g: &GridSpec) -> Result<Report, UsageError> {
    let r = resolve(g, (5, 13), (1, 3), (0, 4))?;
    let mut report = Report::new("aomoto", r.json());
    let cells = selberg_grid(&r)?;
    report.run_cells(&cells, |s| {
        if !s.aomoto_regime() {
            return Outcome::Skip;
        }
        let name = cell_name(s);
        let all = try_cell!(s, selberg_skn_all(s));
        let mut checks = Vec::new();
        for k in 0..s.n {
            checks.push(compare(&format!("{name} k={k}"), &all[k as usize], &try_cell!(s, aomoto_rhs(s, k))));
        }
        let mut cur = all[0].clone();
        for k in 1..=s.n {
            cur = try_cell!(s, aomoto_step(&cur, s, k));
        }
        let shifted = try_cell!(s, selberg_s(&s.with_ab(s.a + 1, s.b)));
        checks.push(compare(&format!("{name} chain"), &cur, &shifted));
        all_of(checks)
    });
    Ok(report)
}

fn run_morris(g: &GridSpec) -> Result<Report, UsageError> {
    let r = resolve(g, (5, 13), (1, 3), (0, 4))?;
    let mut report = Report::new("morris", r.json());
    let cells = selberg_grid(&r)?;
    report.run_cells(&cells, |s| {
        if !s.morris_regime() {
            return Outcome::Skip;
        }
        let name = cell_name(s);
        let lhs = try_cell!(s, selberg_s(s));
        let k = s.p() - 1 - (s.n - 1) * s.c - s.a;
        let mut checks = vec![
            compare(&format!("{name} morris form"), &lhs, &try_cell!(s, morris_form_rhs(s))),
            compare(&format!("{name} binomial form k={k}"), &lhs, &try_cell!(s, binom_form_rhs(s, k))),
        ];
        if s.main_regime() {
            checks.push(compare(&format!("{name} overlap"), &try_cell!(s, morris_form_rhs(s)), &try_cell!(s, selberg_rhs(s))));
        }
        all_of(checks)
    });
    let lucas_cells = cells
        .iter()
        .filter(|s| s.morris_regime() && (1..=s.n).any(|j| s.b + (j - 1) * s.c >= s.p()))
        .count();
    report.notes.push(format!(
        "{lucas_cells} in-regime cells have a binomial-form numerator C(b+(j-1)c, k) with top argument >= p; reduced by Lucas"
    ));

    let n_max = r.n.hi.min(3) as usize;
    let mut ct_cases = Vec::new();
    for n in 1..=n_max {
        for al in 0..=3 {
            for be in 0..=3 {
                for ga in 0..=2 {
                    ct_cases.push((n, al, be, ga));
                }
            }
        }
    }
    report.run_cells(&ct_cases, |&(n, al, be, ga)| {
        compare(
            &format!("constant term n={n} alpha={al} beta={be} gamma={ga}"),
            &morris_ct_int(al, be, ga, n),
            &morris_rhs_int(al, be, ga, n as u64),
        )
    });
    Ok(report)
}

fn run_dyson(g: &GridSpec) -> Result<Report, UsageError> {
    let r = resolve(g, (5, 13), (1, 4), (0, 3))?;
    if r.n.hi > 5 || r.c.hi > 4 {
        return Err(UsageError("dyson constant terms are limited to n <= 5, c <= 4".into()));
    }
    let mut report = Report::new("dyson", json!({ "p": r.primes, "n": r.n.to_string(), "c": r.c.to_string() }));
    let mut cells = Vec::new();
    for n in r.n.iter() {
        for c in r.c.iter() {
            cells.push((n, c));
        }
    }
    let primes = r.primes.clone();
    report.run_cells(&cells, |&(n, c)| {
        let value = dyson_value_int(n, c);
        let mut checks = vec![compare(&format!("n={n} c={c}"), &dyson_ct_int(n as usize, c), &value)];
        for &p in &primes {
            if c * n < p {
                let f = PrimeField::new(p).expect("prime");
                let projected = f.elem_i64((&value % p).try_into().expect("small residue"));
                match dyson_value_fp(n, c, &f) {
                    Ok(v) => checks.push(compare(&format!("n={n} c={c} mod {p}"), &v, &projected)),
                    Err(e) => checks.push(Outcome::Fail(format!("n={n} c={c} mod {p}: {e}"))),
                }
            }
        }
        all_of(checks)
    });
    Ok(report)
}

fn run_factorization(g: &GridSpec) -> Result<Report, UsageError> {
    let r = resolve(g, (11, 11), (2, 3), (3, 3))?;
    let mut report = Report::new("factorization", r.json());
    let cells = selberg_grid(&r)?;
    report.run_cells(&cells, |s| match region_classify(s) {
        Region::Omega(i) if i >= 1 => {
            compare(&format!("{} Omega{i}", cell_name(s)), &try_cell!(s, selberg_s(s)), &try_cell!(s, factorization_rhs(s, i)))
        }
        Region::Outside if s.a + (s.n - 1) * s.c >= s.p() => {
            let v = try_cell!(s, selberg_s(s));
            compare(&format!("{} vanishing row", cell_name(s)), &v, &s.field.zero())
        }
        _ => Outcome::Skip,
    });
    Ok(report)
}

fn jacobi_singular(s: &SelbergParams) -> bool {
    let p = s.p();
    s.c.is_multiple_of(p) || (s.n - 1..=2 * s.n - 2).any(|i| (s.a + s.b + i * s.c + 2).is_multiple_of(p))
}

fn run_jacobi(g: &GridSpec) -> Result<Report, UsageError> {
    let r = resolve(g, (5, 13), (1, 3), (0, 4))?;
    let mut report = Report::new("jacobi", r.json());
    let cells = selberg_grid(&r)?;
    report.run_cells(&cells, |s| {
        if !s.aomoto_regime() || jacobi_singular(s) {
            return Outcome::Skip;
        }
        match jacobi_check(s) {
            Ok(true) => Outcome::Pass,
            Ok(false) => Outcome::Fail(format!("{}: polynomial sides differ", cell_name(s))),
            Err(e) => lib_fail(s, e),
        }
    });
    let singular = cells.iter().filter(|s| s.aomoto_regime() && jacobi_singular(s)).count();
    report.notes.push(format!("{singular} in-regime cells skipped as singular (c or a denominator vanishes mod p)"));
    Ok(report)
}

fn run_identity(g: &GridSpec) -> Result<Report, UsageError> {
    let r = resolve(g, (5, 7), (2, 3), (1, 3))?;
    if r.n.lo < 2 || r.c.lo < 1 {
        return Err(UsageError("identity needs n >= 2 and c >= 1".into()));
    }
    let a = r.a.clip(2).unwrap_or(IntRange::single(0));
    let b = r.b.clip(2).unwrap_or(IntRange::single(0));
    let grid = json!({ "p": r.primes, "n": r.n.to_string(), "c": r.c.to_string(), "a": a.to_string(), "b": b.to_string() });
    let mut report = Report::new("identity", grid);
    let mut pairs = Vec::new();
    for n in r.n.iter() {
        for c in r.c.iter() {
            pairs.push((n as usize, c as u32));
        }
    }
    for &(n, c) in &pairs {
        let form = normal_form(n, c)?;
        report.notes.push(format!("n={n} c={c}: right-hand side over the common factor = {form}"));
    }
    report.run_cells(&pairs, |&(n, c)| match verify_identity(n, c) {
        Ok(true) => Outcome::Pass,
        Ok(false) => Outcome::Fail(format!("n={n} c={c}: sides differ")),
        Err(e) => Outcome::Fail(format!("n={n} c={c}: {e}")),
    });

    let mut decoupling = Vec::new();
    for &(n, c) in &pairs {
        for a in a.iter() {
            for b in b.iter() {
                decoupling.push((n, a, b, c));
            }
        }
    }
    report.run_cells(&decoupling, |&(n, a, b, c)| match decoupled_sum_check(n, a, b, c) {
        Ok(true) => Outcome::Pass,
        Ok(false) => Outcome::Fail(format!("decoupled sum n={n} a={a} b={b} c={c}")),
        Err(e) => Outcome::Fail(format!("decoupled sum n={n} a={a} b={b} c={c}: {e}")),
    });

    let spec = Resolved { a: IntRange::new(0, UNBOUNDED), b: IntRange::new(0, UNBOUNDED), ..r };
    let cells = selberg_grid(&spec)?;
    report.run_cells(&cells, |s| {
        if !s.main_regime() {
            return Outcome::Skip;
        }
        let name = format!("{} specialization", cell_name(s));
        compare(&name, &try_cell!(s, selberg_s(s)), &try_cell!(s, identity_specialization(s)))
    });
    Ok(report)
}

fn run_odd(g: &GridSpec) -> Result<Report, UsageError> {
    let r = resolve(g, (5, 7), (2, 3), (0, 2))?;
    let mut report = Report::new("odd", r.json());
    let cells = selberg_grid(&r)?;
    report.run_cells(&cells, |s| {
        if s.n < 2 {
            return Outcome::Skip;
        }
        compare(&cell_name(s), &try_cell!(s, odd_power_integral(s)), &s.field.zero())
    });
    Ok(report)
}

fn kz_outcome(k: &KZParams) -> (Outcome, bool) {
    let name = format!("p={} m1={} m2={} n={} kappa={}/{}", k.field.p(), k.m1, k.m2, k.n, k.kappa_num, k.kappa_den);
    let run = || -> Result<(Outcome, bool), Error> {
        let u = kz_solution(k)?;
        let closed = kz_closed_form(k)?;
        let (r1, r2) = kz_residual(&u, k)?;
        let outcome = if u != closed {
            Outcome::Fail(format!("{name}: solution differs from the closed form"))
        } else if !(r1.is_zero() && r2.is_zero()) {
            Outcome::Fail(format!("{name}: nonzero KZ residual"))
        } else if !singular_check(&u) {
            Outcome::Fail(format!("{name}: not a singular vector"))
        } else {
            Outcome::Pass
        };
        Ok((outcome, u.is_zero()))
    };
    run().unwrap_or_else(|e| (Outcome::Fail(format!("{name}: {e}")), false))
}

fn run_kz(g: &GridSpec) -> Result<Report, UsageError> {
    let mut instances = Vec::new();
    let grid;
    match g.p {
        None => {
            grid = json!({ "instances": ["p=7 m1=2 m2=2 n=1 kappa=3", "p=11 m1=3 m2=3 n=2 kappa=2"] });
            instances.push(KZParams::new(&PrimeField::new(7)?, 2, 2, 1, 3, 1)?);
            instances.push(KZParams::new(&PrimeField::new(11)?, 3, 3, 2, 2, 1)?);
        }
        Some(_) => {
            let r = resolve(g, (7, 7), (1, 2), (0, 0))?;
            if r.primes.iter().any(|&p| p > 31) || r.n.hi > 3 {
                return Err(UsageError("kz sweeps are limited to p <= 31 and n <= 3".into()));
            }
            grid = json!({ "p": r.primes, "n": r.n.to_string(), "kappa": "1..p-1" });
            for &p in &r.primes {
                let f = PrimeField::new(p)?;
                for m1 in 1..p {
                    for m2 in 1..p {
                        for n in r.n.iter().filter(|&n| n <= m1.min(m2)) {
                            for kappa in 1..p as i64 {
                                instances.push(KZParams::new(&f, m1, m2, n, kappa, 1)?);
                            }
                        }
                    }
                }
            }
        }
    }
    let mut report = Report::new("kz", grid);
    let results: Vec<(Outcome, bool)> = {
        use rayon::prelude::*;
        instances
            .par_iter()
            .map(|k| if k.theorem71_regime() { kz_outcome(k) } else { (Outcome::Skip, false) })
            .collect()
    };
    let mut zero = Vec::new();
    for (k, (outcome, is_zero)) in instances.iter().zip(results) {
        if is_zero && outcome == Outcome::Pass {
            zero.push(format!("p={} m1={} m2={} n={} kappa={}/{}", k.field.p(), k.m1, k.m2, k.n, k.kappa_num, k.kappa_den));
        }
        report.record(outcome);
    }
    report.notes.push(format!("{} regime-valid instances have an identically zero solution", zero.len()));
    report.notes.extend(zero.into_iter().take(50).map(|z| format!("identically zero: {z}")));
    Ok(report)
}

/// Narrows a user grid to the domain a suite accepts, for `all`.
fn restrict(suite: Suite, g: &GridSpec) -> Option<GridSpec> {
    let raise = |r: Option<IntRange>, min: u64| match r {
        Some(r) if r.hi < min => Err(()),
        Some(r) => Ok(Some(IntRange::new(r.lo.max(min), r.hi))),
        None => Ok(None),
    };
    let cap = |r: Option<IntRange>, max: u64| match r {
        Some(r) => r.clip(max).map(Some).ok_or(()),
        None => Ok(None),
    };
    let narrowed = || -> Result<GridSpec, ()> {
        let mut out = g.clone();
        match suite {
            Suite::Identity => {
                out.n = raise(g.n, 2)?;
                out.c = raise(g.c, 1)?;
            }
            Suite::Dyson => {
                out.n = cap(g.n, 5)?;
                out.c = cap(g.c, 4)?;
            }
            Suite::Kz if g.p.is_some() => {
                out.p = cap(g.p, 31)?;
                out.n = cap(g.n, 3)?;
            }
            _ => {}
        }
        Ok(out)
    };
    narrowed().ok()
}

/// Runs one suite (or all of them) over the grid and reports per-cell outcomes.
pub fn run_verify(suite: Suite, grid: &GridSpec) -> Result<Report, UsageError> {
    timed(|| match suite {
        Suite::Beta => run_beta(grid),
        Suite::Selberg => run_selberg(grid),
        Suite::Aomoto => run_aomoto(grid),
        Suite::Morris => run_morris(grid),
        Suite::Dyson => run_dyson(grid),
        Suite::Factorization => run_factorization(grid),
        Suite::Jacobi => run_jacobi(grid),
        Suite::Identity => run_identity(grid),
        Suite::Odd => run_odd(grid),
        Suite::Kz => run_kz(grid),
        Suite::All => {
            let mut total = Report::new("all", json!({}));
            for s in Suite::EACH {
                match restrict(s, grid) {
                    Some(g) => total.absorb(run_verify(s, &g)?),
                    None => total.notes.push(format!("[{}] skipped: the grid has no cell in the suite's domain", s.name())),
                }
            }
            Ok(total)
        }
    })
}
