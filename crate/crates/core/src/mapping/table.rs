use std::collections::BTreeSet;

use crate::rdf::{Datatype, Literal};

use super::MappingError;

/// A relational cell value. Numeric values keep their lexical form so the
/// emitted literals match the source text exactly.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Value {
    Null,
    Integer(String),
    Decimal(String),
    Str(String),
}

impl Value {
    /// Types a raw cell: integer, decimal, string, or null when empty.
    pub fn infer(cell: &str) -> Value {
        if cell.is_empty() {
            Value::Null
        } else if Datatype::Integer.accepts(cell) {
            Value::Integer(cell.to_string())
        } else if Datatype::Decimal.accepts(cell) {
            Value::Decimal(cell.to_string())
        } else {
            Value::Str(cell.to_string())
        }
    }

    pub fn is_null(&self) -> bool {
        matches!(self, Value::Null)
    }

    pub fn is_numeric(&self) -> bool {
        matches!(self, Value::Integer(_) | Value::Decimal(_))
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Value::Integer(s) | Value::Decimal(s) => s.parse().ok(),
            _ => None,
        }
    }

    /// Raw text, empty for null.
    pub fn text(&self) -> &str {
        match self {
            Value::Null => "",
            Value::Integer(s) | Value::Decimal(s) | Value::Str(s) => s,
        }
    }

    pub fn to_literal(&self) -> Option<Literal> {
        match self {
            Value::Null => None,
            Value::Integer(s) => Literal::new(s.clone(), Datatype::Integer),
            Value::Decimal(s) => Literal::new(s.clone(), Datatype::Decimal),
            Value::Str(s) => Some(Literal::string(s.clone())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableData {
    pub name: String,
    pub attributes: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl TableData {
    pub fn new(name: impl Into<String>, attributes: Vec<String>) -> Result<Self, MappingError> {
        let name = name.into();
        let mut seen = BTreeSet::new();
        for a in &attributes {
            if a.is_empty() {
                return Err(MappingError::EmptyHeader { table: name });
            }
            if !seen.insert(a.as_str()) {
                return Err(MappingError::DuplicateAttribute {
                    table: name,
                    attribute: a.clone(),
                });
            }
        }
        Ok(TableData {
            name,
            attributes,
            rows: Vec::new(),
        })
    }

    pub fn push_row(&mut self, row: Vec<Value>) -> Result<(), MappingError> {
        if row.len() != self.attributes.len() {
            return Err(MappingError::RaggedRow {
                table: self.name.clone(),
                line: self.rows.len() + 2,
            });
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn column_index(&self, attribute: &str) -> Option<usize> {
        self.attributes.iter().position(|a| a == attribute)
    }

    pub fn column(&self, attribute: &str) -> Option<impl Iterator<Item = &Value> + '_> {
        let idx = self.column_index(attribute)?;
        Some(self.rows.iter().map(move |r| &r[idx]))
    }

    /// A column is numeric when it has at least one value and every
    /// non-null value is an integer or decimal.
    pub fn is_numeric_column(&self, attribute: &str) -> bool {
        match self.column(attribute) {
            Some(col) => {
                let mut any = false;
                for v in col {
                    if v.is_null() {
                        continue;
                    }
                    if !v.is_numeric() {
                        return false;
                    }
                    any = true;
                }
                any
            }
            None => false,
        }
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.attributes).expect("write to memory");
        for row in &self.rows {
            w.write_record(row.iter().map(Value::text)).expect("write to memory");
        }
        String::from_utf8(w.into_inner().expect("flush to memory")).expect("csv output is utf8")
    }
}

/// Reads a comma-separated table with a header line and RFC 4180 quoting.
pub fn load_csv(text: &str, table_name: &str) -> Result<TableData, MappingError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut records = reader.records();
    let header = match records.next() {
        Some(r) => r.map_err(|e| csv_error(table_name, e))?,
        None => {
            return Err(MappingError::EmptyHeader {
                table: table_name.to_string(),
            })
        }
    };
    let attributes: Vec<String> = header.iter().map(|h| h.trim().to_string()).collect();
    let mut table = TableData::new(table_name, attributes)?;
    for record in records {
        let record = record.map_err(|e| csv_error(table_name, e))?;
        let line = record.position().map(|p| p.line() as usize).unwrap_or(0);
        if record.len() != table.attributes.len() {
            return Err(MappingError::RaggedRow {
                table: table_name.to_string(),
                line,
            });
        }
        table.rows.push(record.iter().map(Value::infer).collect());
    }
    Ok(table)
}

fn csv_error(table: &str, e: csv::Error) -> MappingError {
    let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
    MappingError::Csv {
        table: table.to_string(),
        line,
        reason: e.to_string(),
    }
}
