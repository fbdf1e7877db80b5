//! Tabular results: one schema per experiment kind, rendered to CSV and
//! JSON. Exact rationals are serialized as `p/q` strings; float columns are
//! a lossy convenience for plotting and carry a `_float` suffix.

use kglab::rational::{to_f64, Rational};
use kglab::Enclosure;
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Exact(Rational),
    Float(f64),
    Int(i64),
    Bool(bool),
}

impl Cell {
    pub fn exact(r: &Rational) -> Cell {
        Cell::Exact(r.clone())
    }

    fn csv(&self) -> String {
        match self {
            Cell::Text(s) => {
                if s.contains(',') || s.contains('"') || s.contains('\n') {
                    format!("\"{}\"", s.replace('"', "\"\""))
                } else {
                    s.clone()
                }
            }
            Cell::Exact(r) => r.to_string(),
            Cell::Float(f) => format!("{f:?}"),
            Cell::Int(i) => i.to_string(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Text(s) => Value::String(s.clone()),
            // fraction strings survive JSON round trips exactly
            Cell::Exact(r) => Value::String(r.to_string()),
            Cell::Float(f) => json!(f),
            Cell::Int(i) => json!(i),
            Cell::Bool(b) => json!(b),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Table {
        Table { columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width mismatch");
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.iter().map(Cell::csv).collect::<Vec<_>>().join(","));
            out.push('\n');
        }
        out
    }

    /// Nested form: one object per row, keyed by column name.
    pub fn to_json_rows(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let mut obj = Map::new();
                    for (col, cell) in self.columns.iter().zip(row) {
                        obj.insert(col.to_string(), cell.json());
                    }
                    Value::Object(obj)
                })
                .collect(),
        )
    }
}

/// Both endpoints of an enclosure as exact cells plus a lossy midpoint.
pub fn enclosure_cells(e: &Enclosure) -> [Cell; 3] {
    [Cell::exact(e.lo()), Cell::exact(e.hi()), Cell::Float(e.mid_f64())]
}

pub fn float_of(r: &Rational) -> Cell {
    Cell::Float(to_f64(r))
}
