use fp_selberg::closedform::*;
use fp_selberg::fpintegral::{selberg_s, selberg_skn_all};
use fp_selberg::modarith::ProjectedQuotient;
use fp_selberg::{Error, PrimeField, SelbergParams};

fn grid(primes: &[u64], ns: &[u64], cs: std::ops::RangeInclusive<u64>) -> Vec<SelbergParams> {
    let mut out = Vec::new();
    for &p in primes {
        let f = PrimeField::new(p).unwrap();
        for &n in ns {
            for c in cs.clone() {
                for a in 0..p {
                    for b in 0..p {
                        out.push(SelbergParams::new(&f, n, a, b, c).unwrap());
                    }
                }
            }
        }
    }
    out
}

#[test]
fn main_and_base_forms_match_integrals() {
    let mut checked = 0;
    for s in grid(&[5, 7], &[1, 2, 3], 0..=3) {
        if !s.main_regime() {
            assert!(matches!(selberg_rhs(&s), Err(Error::Domain(_))));
            continue;
        }
        let lhs = selberg_s(&s).unwrap();
        assert_eq!(selberg_rhs(&s).unwrap(), lhs, "{s:?}");
        if s.a + s.b + (s.n - 1) * s.c == s.p() - 1 {
            assert_eq!(base_case_value(&s).unwrap(), lhs, "{s:?}");
        }
        checked += 1;
    }
    assert!(checked > 100);
}

#[test]
fn aomoto_forms_and_chain() {
    for s in grid(&[5, 7], &[2, 3], 0..=2) {
        if !s.aomoto_regime() {
            continue;
        }
        let all = selberg_skn_all(&s).unwrap();
        for k in 0..s.n {
            match aomoto_rhs(&s, k) {
                Ok(v) => assert_eq!(v, all[k as usize], "{s:?} k={k}"),
                Err(Error::Singular(_)) => {}
                Err(e) => panic!("{s:?}: {e}"),
            }
        }
        let mut cur = all[0].clone();
        let mut ok = true;
        for k in 1..=s.n {
            match aomoto_step(&cur, &s, k) {
                Ok(v) => cur = v,
                Err(_) => ok = false,
            }
        }
        if ok && s.a + 1 < s.p() {
            assert_eq!(cur, selberg_s(&s.with_ab(s.a + 1, s.b)).unwrap(), "{s:?}");
        }
    }
}

#[test]
fn morris_and_binomial_forms() {
    for s in grid(&[5, 7, 11], &[1, 2, 3], 0..=3) {
        if !s.morris_regime() {
            continue;
        }
        let lhs = selberg_s(&s).unwrap();
        assert_eq!(morris_form_rhs(&s).unwrap(), lhs, "{s:?}");
        let k = s.p() - 1 - (s.n - 1) * s.c - s.a;
        assert_eq!(binom_form_rhs(&s, k).unwrap(), lhs, "{s:?}");
        if s.main_regime() {
            assert_eq!(selberg_rhs(&s).unwrap(), lhs);
        }
    }
    let f11 = PrimeField::new(11).unwrap();
    for b in 0..11 {
        let s = SelbergParams::new(&f11, 2, 7, b, 3).unwrap();
        if s.morris_regime() {
            assert_eq!(selberg_s(&s).unwrap().value(), 2);
        }
    }
}

/// The overlap relation with its denominator read literally as
/// `(a+b+(n+j-2)c)!` disagrees with the integrals on some cells.
#[test]
fn literal_overlap_denominator_fails_somewhere() {
    let mut disagreements = 0;
    for s in grid(&[7, 11], &[2], 1..=2) {
        if !(s.morris_regime() && s.main_regime()) {
            continue;
        }
        let (n, a, b, c, p) = (s.n as i64, s.a as i64, s.b as i64, s.c as i64, s.p() as i64);
        let literal = (1..=n)
            .fold(ProjectedQuotient::new(&s.field), |q, j| {
                q.mul_factorial(j * c)
                    .div_factorial(c)
                    .mul_factorial(b + (j - 1) * c)
                    .div_factorial(p - a - (n - j) * c - 1)
                    .div_factorial(a + b + (n + j - 2) * c)
            })
            .mul_sign(s.n * (s.n - 1) / 2 * s.c + s.n * s.a)
            .finish();
        if literal.ok() != Some(selberg_s(&s).unwrap()) {
            disagreements += 1;
        }
    }
    assert!(disagreements > 0);
}

#[test]
fn factorization_on_every_omega_cell() {
    let f11 = PrimeField::new(11).unwrap();
    let mut cells = 0;
    for n in [2, 3] {
        for a in 0..11 {
            for b in 0..11 {
                let s = SelbergParams::new(&f11, n, a, b, 3).unwrap();
                match region_classify(&s) {
                    Region::Omega(i) if i >= 1 => {
                        assert_eq!(factorization_rhs(&s, i).unwrap(), selberg_s(&s).unwrap(), "{s:?}");
                        cells += 1;
                    }
                    Region::Outside if a + (n - 1) * 3 >= 11 => {
                        assert!(selberg_s(&s).unwrap().is_zero());
                    }
                    _ => {}
                }
            }
        }
    }
    assert!(cells > 0);
}

#[test]
fn region_partition_is_total() {
    let f = PrimeField::new(13).unwrap();
    for n in 1..=3 {
        for c in 0..=4 {
            for a in 0..26 {
                for b in 0..26 {
                    let s = SelbergParams::new(&f, n, a, b, c).unwrap();
                    let r = region_classify(&s);
                    if a + (n - 1) * c <= 12 && b < 13 {
                        assert!(matches!(r, Region::Omega(i) if i < n), "{s:?} {r}");
                    } else {
                        assert_eq!(r, Region::Outside);
                    }
                }
            }
        }
    }
}

#[test]
fn jacobi_on_small_grid() {
    let mut passed = 0;
    for s in grid(&[5, 7], &[1, 2], 1..=3) {
        if !s.aomoto_regime() {
            continue;
        }
        match jacobi_check(&s) {
            Ok(ok) => {
                assert!(ok, "{s:?}");
                passed += 1;
            }
            Err(Error::Singular(_)) => {}
            Err(e) => panic!("{s:?}: {e}"),
        }
    }
    assert!(passed > 10);
}

#[test]
fn constant_term_oracles() {
    for n in 1..=4usize {
        for c in 0..=3u64 {
            if n == 4 && c == 3 {
                continue;
            }
            assert_eq!(dyson_ct_int(n, c), dyson_value_int(n as u64, c), "n={n} c={c}");
        }
    }
    for n in 1..=2usize {
        for al in 0..=2 {
            for be in 0..=2 {
                for g in 0..=2 {
                    assert_eq!(morris_ct_int(al, be, g, n), morris_rhs_int(al, be, g, n as u64));
                }
            }
        }
    }
}
