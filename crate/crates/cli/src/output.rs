//! Column tables written as CSV or JSON.

use std::fs::OpenOptions;
use std::io::{self, Write};
use std::path::Path;

use serde_json::{json, Map, Value};

pub enum Values {
    Num(Vec<f64>),
    Text(Vec<String>),
}

impl Values {
    fn len(&self) -> usize {
        match self {
            Values::Num(v) => v.len(),
            Values::Text(v) => v.len(),
        }
    }

    fn cell(&self, i: usize) -> String {
        match self {
            Values::Num(v) => format_g17(v[i]),
            Values::Text(v) => v[i].clone(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Values::Num(v) => Value::Array(v.iter().map(|&x| json_number(x)).collect()),
            Values::Text(v) => json!(v),
        }
    }
}

pub struct Table {
    pub columns: Vec<(String, Values)>,
    pub meta: Map<String, Value>,
}

impl Table {
    pub fn new(meta: Map<String, Value>) -> Self {
        Table {
            columns: Vec::new(),
            meta,
        }
    }

    pub fn num(mut self, name: &str, values: Vec<f64>) -> Self {
        self.columns.push((name.into(), Values::Num(values)));
        self
    }

    pub fn text(mut self, name: &str, values: Vec<String>) -> Self {
        self.columns.push((name.into(), Values::Text(values)));
        self
    }

    pub fn rows(&self) -> usize {
        self.columns.first().map_or(0, |(_, v)| v.len())
    }

    pub fn write_csv(&self, w: &mut impl Write) -> io::Result<()> {
        let header: Vec<&str> = self.columns.iter().map(|(n, _)| n.as_str()).collect();
        writeln!(w, "{}", header.join(","))?;
        for i in 0..self.rows() {
            let row: Vec<String> = self.columns.iter().map(|(_, v)| v.cell(i)).collect();
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    }

    pub fn write_json(&self, w: &mut impl Write) -> io::Result<()> {
        let columns: Vec<Value> = self
            .columns
            .iter()
            .map(|(n, v)| json!({ "name": n, "values": v.to_json() }))
            .collect();
        let doc = json!({ "meta": Value::Object(self.meta.clone()), "columns": columns });
        serde_json::to_writer_pretty(&mut *w, &doc)?;
        writeln!(w)
    }
}

pub fn json_number(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

/// Writes to `path` (which must not exist yet) or to stdout.
pub fn emit(table: &Table, path: Option<&Path>, json: bool) -> io::Result<()> {
    match path {
        Some(p) => {
            let file = OpenOptions::new()
                .write(true)
                .create_new(true)
                .open(p)
                .map_err(|e| {
                    io::Error::new(e.kind(), format!("cannot create {}: {e}", p.display()))
                })?;
            let mut w = io::BufWriter::new(file);
            if json {
                table.write_json(&mut w)?
            } else {
                table.write_csv(&mut w)?
            }
            w.flush()
        }
        None => {
            let mut w = io::BufWriter::new(io::stdout().lock());
            if json {
                table.write_json(&mut w)?
            } else {
                table.write_csv(&mut w)?
            }
            w.flush()
        }
    }
}

/// C's `%.17g`.
pub fn format_g17(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() {
            "-0".into()
        } else {
            "0".into()
        };
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').unwrap();
    let exp: i32 = exp.parse().unwrap();
    if !(-4..17).contains(&exp) {
        let m = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        strip_zeros(&format!("{x:.*}", (16 - exp) as usize)).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
