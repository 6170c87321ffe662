//! Single-instance KZ report for the `kz` subcommand.

use std::str::FromStr;

use serde::Serialize;

use super::UsageError;
use crate::kz::{kz_closed_form, kz_residual, kz_solution, singular_check, KZParams, TensorVector};
use crate::modarith::PrimeField;

/// A fraction `NUM/DEN` or an integer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fraction {
    pub num: i64,
    pub den: i64,
}

impl FromStr for Fraction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parse = |t: &str| t.trim().parse::<i64>().map_err(|e| format!("invalid integer {t:?}: {e}"));
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (parse(n)?, parse(d)?),
            None => (parse(s)?, 1),
        };
        if den == 0 {
            return Err("zero denominator".into());
        }
        Ok(Self { num, den })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct KzReport {
    pub p: u64,
    pub m1: u64,
    pub m2: u64,
    pub n: u64,
    pub kappa: String,
    #[serde(rename = "M1")]
    pub big_m1: u64,
    #[serde(rename = "M2")]
    pub big_m2: u64,
    #[serde(rename = "M12")]
    pub big_m12: u64,
    pub c: u64,
    pub regime: bool,
    pub solution: Vec<String>,
    pub identically_zero: bool,
    pub closed_form: Option<Vec<String>>,
    pub closed_form_error: Option<String>,
    pub matches_closed_form: Option<bool>,
    pub residuals_vanish: bool,
    pub singular: bool,
}

impl KzReport {
    /// Whether every check that applies to the instance succeeded.
    pub fn success(&self) -> bool {
        self.residuals_vanish && self.singular && (!self.regime || self.matches_closed_form == Some(true))
    }
}

fn render(v: &TensorVector) -> Vec<String> {
    v.entries.iter().map(|e| e.to_string_with(Some(&["z1", "z2"]))).collect()
}

pub fn kz_report(p: u64, m1: u64, m2: u64, n: u64, kappa: Fraction) -> Result<KzReport, UsageError> {
    let f = PrimeField::new(p)?;
    let k = KZParams::new(&f, m1, m2, n, kappa.num, kappa.den)?;
    let u = kz_solution(&k)?;
    let (r1, r2) = kz_residual(&u, &k)?;
    let regime = k.theorem71_regime();
    let (closed_form, closed_form_error, matches) = if regime {
        match kz_closed_form(&k) {
            Ok(cf) => {
                let m = cf == u;
                (Some(render(&cf)), None, Some(m))
            }
            Err(e) => (None, Some(e.to_string()), Some(false)),
        }
    } else {
        (None, Some("outside the closed-form regime".into()), None)
    };
    Ok(KzReport {
        p,
        m1,
        m2,
        n,
        kappa: format!("{}/{}", k.kappa_num, k.kappa_den),
        big_m1: k.big_m1,
        big_m2: k.big_m2,
        big_m12: k.big_m12,
        c: k.c,
        regime,
        solution: render(&u),
        identically_zero: u.is_zero(),
        closed_form,
        closed_form_error,
        matches_closed_form: matches,
        residuals_vanish: r1.is_zero() && r2.is_zero(),
        singular: singular_check(&u),
    })
}
