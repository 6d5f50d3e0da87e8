use std::io::Write;

use pchaos_core::record::{Field, Record};
use serde_json::{Map, Number, Value};

use crate::config::Format;
use crate::CliError;

/// Rows of one experiment, all with the same column names.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub rows: Vec<Record>,
}

impl Table {
    pub fn new(rows: Vec<Record>) -> Result<Self, CliError> {
        if let Some(first) = rows.first() {
            let names: Vec<&str> = first.names().collect();
            if let Some(bad) = rows.iter().find(|r| !r.names().eq(names.iter().copied())) {
                let got: Vec<&str> = bad.names().collect();
                return Err(CliError::Internal(format!("row columns {got:?} differ from {names:?}")));
            }
        }
        Ok(Self { rows })
    }

    pub fn columns(&self) -> Vec<&str> {
        self.rows.first().map(|r| r.names().collect()).unwrap_or_default()
    }

    pub fn write<W: Write>(&self, format: Format, w: W) -> Result<(), CliError> {
        match format {
            Format::Csv => self.write_csv(w),
            Format::Json => self.write_json(w),
        }
    }

    fn write_csv<W: Write>(&self, w: W) -> Result<(), CliError> {
        let mut out = csv::Writer::from_writer(w);
        if self.rows.is_empty() {
            return Ok(());
        }
        out.write_record(self.columns())?;
        for row in &self.rows {
            out.write_record(row.fields().iter().map(|(_, v)| v.to_string()))?;
        }
        out.flush()?;
        Ok(())
    }

    fn write_json<W: Write>(&self, mut w: W) -> Result<(), CliError> {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Object(r.fields().iter().map(|(k, v)| (k.clone(), json_field(v))).collect::<Map<_, _>>()))
            .collect();
        serde_json::to_writer_pretty(&mut w, &rows)?;
        writeln!(w)?;
        Ok(())
    }
}

/// Non-finite floats have no JSON number form and become `null`.
fn json_field(v: &Field) -> Value {
    match v {
        Field::Int(i) => Value::from(*i),
        Field::Float(x) => Number::from_f64(*x).map_or(Value::Null, Value::Number),
        Field::Text(s) => Value::from(s.as_str()),
        Field::Bool(b) => Value::from(*b),
    }
}
