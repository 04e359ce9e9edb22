//! CSV and JSON rendering. CSV numbers carry 17 significant digits.

use std::fmt::Write;

use serde_json::{json, Value};

use crate::measure::Atom;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

/// A table with optional `#`-prefixed preamble lines and a header row.
#[derive(Debug, Default)]
pub struct Table {
    pub preamble: Vec<String>,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Table {
            header,
            ..Default::default()
        }
    }

    pub fn push_numbers(&mut self, row: &[f64]) {
        self.rows.push(row.iter().map(|&v| num(v)).collect());
    }

    pub fn atoms_preamble(&mut self, atoms: &[Atom]) {
        for a in atoms {
            self.preamble.push(format!("atom,{},{}", num(a.position), num(a.weight)));
        }
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for line in &self.preamble {
            let _ = writeln!(s, "# {line}");
        }
        let _ = writeln!(s, "{}", self.header.join(","));
        for row in &self.rows {
            let _ = writeln!(s, "{}", row.join(","));
        }
        s
    }
}

pub fn atoms_json(atoms: &[Atom]) -> Value {
    Value::Array(atoms.iter().map(|a| json!({"x": a.position, "w": a.weight})).collect())
}

pub fn render_json(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    s.push('\n');
    s
}
