//! Report rendering: JSON for machines, Markdown tables for people, CSV
//! for modulus tables.

use std::fmt::Write;

use serde::Serialize;

use crate::corpus::ModulusRow;
use crate::suites::SuiteReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Md,
    Json,
    Csv,
}

pub fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report types serialize")
}

pub fn suite_markdown(r: &SuiteReport) -> String {
    let mut s = String::new();
    let verdict = if r.passed() { "pass" } else { "FAIL" };
    writeln!(s, "## Suite `{}`: {verdict}", r.suite).unwrap();
    writeln!(s).unwrap();
    writeln!(s, "seed {}, {} items", r.seed, r.items).unwrap();
    if let Some(ms) = r.elapsed_ms {
        writeln!(s, "elapsed {ms} ms").unwrap();
    }
    writeln!(s).unwrap();
    writeln!(s, "| check | pass | contradiction | not applicable | holds up to bound |").unwrap();
    writeln!(s, "|---|---:|---:|---:|---:|").unwrap();
    for (name, t) in &r.tallies {
        writeln!(
            s,
            "| {name} | {} | {} | {} | {} |",
            t.pass, t.contradiction, t.not_applicable, t.holds_up_to_bound
        )
        .unwrap();
    }
    if !r.contradictions.is_empty() {
        writeln!(s).unwrap();
        writeln!(s, "### Contradictions").unwrap();
        writeln!(s).unwrap();
        for c in &r.contradictions {
            writeln!(s, "- `{}` {}: {}", c.item, c.check, c.detail).unwrap();
        }
    }
    s
}

pub fn moduli_markdown(rows: &[ModulusRow]) -> String {
    let mut s = String::new();
    writeln!(s, "| level | cells | tolerance | modulus | at floor | profile |").unwrap();
    writeln!(s, "|---:|---:|---|---|---|---|").unwrap();
    for r in rows {
        writeln!(
            s,
            "| {} | {} | {} | {} | {} | {} |",
            r.level, r.cells, r.tolerance, r.modulus, r.at_floor, r.profile
        )
        .unwrap();
    }
    s
}

/// A two-column table of already formatted values.
pub fn kv_markdown(title: &str, rows: &[(String, String)]) -> String {
    let mut s = String::new();
    writeln!(s, "## {title}").unwrap();
    writeln!(s).unwrap();
    writeln!(s, "| | |").unwrap();
    writeln!(s, "|---|---|").unwrap();
    for (k, v) in rows {
        writeln!(s, "| {k} | {} |", v.replace('|', "\\|")).unwrap();
    }
    s
}
