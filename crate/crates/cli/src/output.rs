//! Rendering of result tables as CSV or JSON at a fixed number of significant digits.

use std::io::Write;
use std::path::Path;

use serde_json::{Map, Number, Value};

use crate::args::Format;

/// Rounds to `digits` significant digits. The result is an ordinary `f64`,
/// so printing it with a shortest-representation formatter shows at most
/// `digits` digits. At 17 digits this is the identity.
pub fn round_sig(x: f64, digits: usize) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", digits - 1, x)
        .parse()
        .expect("formatted float parses")
}

/// Shortest text that parses back to `x` after rounding; non-finite values print as `nan`.
pub fn format_number(x: f64, digits: usize) -> String {
    let r = round_sig(x, digits);
    if !r.is_finite() {
        return "nan".into();
    }
    let mag = r.abs();
    if r == 0.0 || (1e-4..1e15).contains(&mag) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Bool(bool),
    Null,
    List(Vec<Cell>),
    /// Keyed record, rendered as a JSON object.
    Object(Vec<(&'static str, Cell)>),
}

impl Cell {
    fn to_json(&self, digits: usize) -> Value {
        match self {
            Cell::Num(x) => Number::from_f64(round_sig(*x, digits)).map_or(Value::Null, Value::Number),
            Cell::Int(i) => Value::from(*i),
            Cell::Text(s) => Value::from(s.as_str()),
            Cell::Bool(b) => Value::from(*b),
            Cell::Null => Value::Null,
            Cell::List(items) => Value::Array(items.iter().map(|c| c.to_json(digits)).collect()),
            Cell::Object(fields) => Value::Object(
                fields
                    .iter()
                    .map(|(k, v)| (k.to_string(), v.to_json(digits)))
                    .collect::<Map<_, _>>(),
            ),
        }
    }

    fn to_csv(&self, digits: usize) -> String {
        match self {
            Cell::Num(x) => format_number(*x, digits),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Null => "nan".into(),
            Cell::List(_) | Cell::Object(_) => self.to_json(digits).to_string(),
        }
    }
}

/// A table plus trailing metadata. With `single` set, JSON output is the one
/// row as a flat object instead of a `rows` array.
#[derive(Debug, Clone, Default)]
pub struct Document {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub footer: Vec<(&'static str, Cell)>,
    pub single: bool,
}

impl Document {
    pub fn render(&self, format: Format, digits: usize) -> String {
        match format {
            Format::Csv => self.render_csv(digits),
            Format::Json => self.render_json(digits),
        }
    }

    fn render_csv(&self, digits: usize) -> String {
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        writer.write_record(&self.columns).expect("in-memory write");
        for row in &self.rows {
            writer
                .write_record(row.iter().map(|c| c.to_csv(digits)))
                .expect("in-memory write");
        }
        let mut out = String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("UTF-8 cells");
        for (key, value) in &self.footer {
            out += &format!("# {key}: {}\n", value.to_json(digits));
        }
        out
    }

    fn row_object(&self, row: &[Cell], digits: usize) -> Map<String, Value> {
        self.columns
            .iter()
            .zip(row)
            .map(|(k, v)| (k.to_string(), v.to_json(digits)))
            .collect()
    }

    fn render_json(&self, digits: usize) -> String {
        let mut top = if self.single && self.rows.len() == 1 {
            self.row_object(&self.rows[0], digits)
        } else {
            let rows = self
                .rows
                .iter()
                .map(|r| Value::Object(self.row_object(r, digits)))
                .collect();
            Map::from_iter([("rows".to_string(), Value::Array(rows))])
        };
        for (key, value) in &self.footer {
            top.insert(key.to_string(), value.to_json(digits));
        }
        let mut s = serde_json::to_string_pretty(&Value::Object(top)).expect("JSON values serialize");
        s.push('\n');
        s
    }
}

pub fn emit(text: &str, out: Option<&Path>) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()
        }
    }
}
