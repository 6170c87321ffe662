//! Tables of `S_n(a, b, c)` over the `(a, b)` rectangle with region labels
//! and the closed form that reproduces each value.

use clap::ValueEnum;
use rayon::prelude::*;
use serde::Serialize;

use super::UsageError;
use crate::closedform::{binom_form_rhs, factorization_rhs, region_classify, selberg_rhs, Region};
use crate::fpintegral::selberg_s;
use crate::modarith::PrimeField;
use crate::SelbergParams;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Md,
}

pub const MAX_TABLE_PRIME: u64 = 100;
pub const MAX_TABLE_N: u64 = 5;

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Cell {
    pub a: u64,
    pub b: u64,
    pub value: u64,
    pub region: String,
    /// `main`, `binomial`, `vanishing`, `factorization` or `none`.
    pub formula: String,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Table {
    pub p: u64,
    pub n: u64,
    pub c: u64,
    pub rows: u64,
    pub cols: u64,
    pub cells: Vec<Cell>,
}

fn formula_for(s: &SelbergParams, value: &crate::FpElement) -> &'static str {
    if s.main_regime() && selberg_rhs(s).ok().as_ref() == Some(value) {
        return "main";
    }
    if s.morris_regime() {
        let k = s.p() - 1 - (s.n - 1) * s.c - s.a;
        if binom_form_rhs(s, k).ok().as_ref() == Some(value) {
            return "binomial";
        }
    }
    let below = !s.lower_bound_holds() || s.a + (s.n - 1) * s.c >= s.p();
    if below && value.is_zero() {
        return "vanishing";
    }
    if let Region::Omega(i) = region_classify(s) {
        if i >= 1 && factorization_rhs(s, i).ok().as_ref() == Some(value) {
            return "factorization";
        }
    }
    "none"
}

/// Computes the table. Rows are `a = 0..=p-1-(n-1)c`, or all `a < p` with
/// `full`; columns are `b = 0..p-1`.
pub fn build_table(p: u64, n: u64, c: u64, full: bool) -> Result<Table, UsageError> {
    if p > MAX_TABLE_PRIME || n > MAX_TABLE_N {
        return Err(UsageError(format!("table budget is p <= {MAX_TABLE_PRIME}, n <= {MAX_TABLE_N}")));
    }
    if n == 0 {
        return Err(UsageError("--n must be at least 1".into()));
    }
    let f = PrimeField::new(p)?;
    let rows = if full { p } else { p.saturating_sub((n - 1) * c) };
    let coords: Vec<(u64, u64)> = (0..rows).flat_map(|a| (0..p).map(move |b| (a, b))).collect();
    let cells = coords
        .par_iter()
        .map(|&(a, b)| {
            let s = SelbergParams::new(&f, n, a, b, c)?;
            let value = selberg_s(&s)?;
            Ok(Cell { a, b, value: value.value(), region: region_classify(&s).to_string(), formula: formula_for(&s, &value).into() })
        })
        .collect::<Result<Vec<_>, crate::Error>>()?;
    Ok(Table { p, n, c, rows, cols: p, cells })
}

impl Table {
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["a", "b", "value", "region"]).expect("in-memory write");
        for cell in &self.cells {
            w.write_record([cell.a.to_string(), cell.b.to_string(), cell.value.to_string(), cell.region.clone()])
                .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serializes")
    }

    fn md_grid(&self, title: &str, field: impl Fn(&Cell) -> String) -> String {
        let mut out = format!("### {title}\n\n| a \\ b |");
        for b in 0..self.cols {
            out.push_str(&format!(" {b} |"));
        }
        out.push_str("\n|---|");
        out.push_str(&"---|".repeat(self.cols as usize));
        for row in self.cells.chunks(self.cols as usize) {
            out.push_str(&format!("\n| {} |", row[0].a));
            for cell in row {
                out.push_str(&format!(" {} |", field(cell)));
            }
        }
        out.push('\n');
        out
    }

    pub fn to_markdown(&self) -> String {
        let head = format!("## S_{}(a, b, {}) mod {}\n", self.n, self.c, self.p);
        [
            head,
            self.md_grid("values", |c| c.value.to_string()),
            self.md_grid("regions", |c| c.region.clone()),
            self.md_grid("formulas", |c| c.formula.clone()),
        ]
        .join("\n")
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
            Format::Md => self.to_markdown(),
        }
    }
}

pub fn emit_table(p: u64, n: u64, c: u64, format: Format, full: bool) -> Result<String, UsageError> {
    Ok(build_table(p, n, c, full)?.render(format))
}
