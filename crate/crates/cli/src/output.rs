use std::path::Path;

use clap::ValueEnum;
use serde_json::{Map, Value};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Precision {
    /// Six decimals, matching the printed tables.
    Six,
    /// Shortest representation that round-trips.
    Full,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Num)
    }
}

#[derive(Clone, Debug, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format, precision: Precision) -> String {
        match format {
            Format::Csv => self.csv(precision),
            Format::Json => self.json(precision),
        }
    }

    fn csv(&self, precision: Precision) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        // writing to memory cannot fail
        let _ = w.write_record(&self.columns);
        for row in &self.rows {
            let _ = w.write_record(row.iter().map(|c| fmt_cell(c, precision)));
        }
        w.into_inner()
            .ok()
            .and_then(|b| String::from_utf8(b).ok())
            .unwrap_or_default()
    }

    fn json(&self, precision: Precision) -> String {
        let records: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut map = Map::new();
                for (name, cell) in self.columns.iter().zip(row) {
                    let v = match cell {
                        Cell::Num(x) => {
                            let s = fmt_num(*x, precision);
                            s.parse::<f64>()
                                .ok()
                                .and_then(serde_json::Number::from_f64)
                                .map_or(Value::Null, Value::Number)
                        }
                        Cell::Int(i) => Value::from(*i),
                        Cell::Text(s) => Value::from(s.clone()),
                        Cell::Empty => Value::Null,
                    };
                    map.insert(name.clone(), v);
                }
                Value::Object(map)
            })
            .collect();
        let mut s = serde_json::to_string_pretty(&Value::Array(records)).unwrap_or_default();
        s.push('\n');
        s
    }

    /// Writes to `path`, or stdout when absent.
    pub fn emit(&self, path: Option<&Path>, format: Format, precision: Precision) -> Result<(), CliError> {
        let text = self.render(format, precision);
        match path {
            Some(p) => std::fs::write(p, text)?,
            None => print!("{text}"),
        }
        Ok(())
    }
}

fn fmt_cell(cell: &Cell, precision: Precision) -> String {
    match cell {
        Cell::Num(x) => fmt_num(*x, precision),
        Cell::Int(i) => i.to_string(),
        Cell::Text(s) => s.clone(),
        Cell::Empty => String::new(),
    }
}

pub fn fmt_num(x: f64, precision: Precision) -> String {
    match precision {
        Precision::Full => format!("{x:?}"),
        Precision::Six if !x.is_finite() => format!("{x}"),
        Precision::Six if x == 0.0 || x.abs() >= 1e-4 => format!("{x:.6}"),
        Precision::Six => format!("{x:.6e}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_decimals_and_small_values() {
        assert_eq!(fmt_num(5.099745, Precision::Six), "5.099745");
        assert_eq!(fmt_num(1.5e-7, Precision::Six), "1.500000e-7");
        assert_eq!(fmt_num(0.1, Precision::Full), "0.1");
    }

    #[test]
    fn csv_quotes_commas() {
        let mut t = Table::new(["a", "b"]);
        t.push(vec!["x,y".into(), 1.0.into()]);
        assert_eq!(t.render(Format::Csv, Precision::Six), "a,b\n\"x,y\",1.000000\n");
    }
}
