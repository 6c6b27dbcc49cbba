//! Typed tabular data with schema-driven CSV ingestion and missing handling.
//!
//! A [`DataTable`] is immutable after load; all reads are safe to share
//! across parallel workers. Empty CSV fields and the literal `NA` load as
//! missing cells. A row with every cell missing is rejected at load time
//! because it can never produce a defined dissimilarity.

use crate::error::{Error, Result};
use crate::ranks::average_ranks;
use crate::schema::{ColumnSchema, VarKind};

/// Per-column storage: category codes for categorical kinds, reals for
/// numeric. Missing cells hold a placeholder and are tracked in the mask.
#[derive(Debug, Clone)]
enum ColumnData {
    Numeric(Vec<f64>),
    Categorical(Vec<u32>),
}

/// Column values used when building a table programmatically.
#[derive(Debug, Clone)]
pub enum ColumnValues {
    Numeric(Vec<Option<f64>>),
    Categorical(Vec<Option<u32>>),
}

/// A typed table of `n` units by `p` columns.
#[derive(Debug, Clone)]
pub struct DataTable {
    schema: Vec<ColumnSchema>,
    columns: Vec<ColumnData>,
    missing: Vec<Vec<bool>>,
    n: usize,
}

impl DataTable {
    /// Loads a table from CSV text. The header row must match the schema
    /// column names in order.
    pub fn from_csv(csv_text: &str, schema: Vec<ColumnSchema>) -> Result<DataTable> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(csv_text.as_bytes());

        let headers = reader.headers().map_err(|e| Error::Csv(e.to_string()))?.clone();
        if headers.len() != schema.len() {
            return Err(Error::HeaderMismatch(format!(
                "{} header fields vs {} schema columns",
                headers.len(),
                schema.len()
            )));
        }
        for (field, col) in headers.iter().zip(&schema) {
            if field != col.name {
                return Err(Error::HeaderMismatch(format!(
                    "header field {field:?} vs schema column {:?}",
                    col.name
                )));
            }
        }

        let p = schema.len();
        let mut columns: Vec<ColumnData> = schema
            .iter()
            .map(|c| match c.kind {
                VarKind::Numeric => ColumnData::Numeric(Vec::new()),
                _ => ColumnData::Categorical(Vec::new()),
            })
            .collect();
        let mut missing: Vec<Vec<bool>> = vec![Vec::new(); p];

        let mut n = 0;
        for (row, record) in reader.records().enumerate() {
            let record = record.map_err(|e| Error::Csv(e.to_string()))?;
            if record.len() != p {
                return Err(Error::Csv(format!(
                    "data row {row}: {} fields, expected {p}",
                    record.len()
                )));
            }
            let mut any_value = false;
            for (t, field) in record.iter().enumerate() {
                let cell_missing = field.is_empty() || field == "NA";
                missing[t].push(cell_missing);
                match &mut columns[t] {
                    ColumnData::Numeric(values) => {
                        if cell_missing {
                            values.push(0.0);
                        } else {
                            let value: f64 =
                                field.parse().map_err(|_| Error::BadNumber {
                                    row,
                                    column: schema[t].name.clone(),
                                    value: field.to_string(),
                                })?;
                            values.push(value);
                            any_value = true;
                        }
                    }
                    ColumnData::Categorical(codes) => {
                        if cell_missing {
                            codes.push(0);
                        } else {
                            let code = schema[t].level_index(field).ok_or_else(|| {
                                Error::UnknownLabel {
                                    row,
                                    column: schema[t].name.clone(),
                                    label: field.to_string(),
                                }
                            })?;
                            codes.push(code);
                            any_value = true;
                        }
                    }
                }
            }
            if !any_value {
                return Err(Error::AllMissingRow { row });
            }
            n += 1;
        }

        Ok(DataTable {
            schema,
            columns,
            missing,
            n,
        })
    }

    /// Builds a table from column vectors; `None` cells are missing.
    pub fn from_columns(schema: Vec<ColumnSchema>, values: Vec<ColumnValues>) -> Result<DataTable> {
        if schema.len() != values.len() {
            return Err(Error::InvalidConfig(format!(
                "{} schema columns vs {} value columns",
                schema.len(),
                values.len()
            )));
        }
        let n = values
            .first()
            .map(|v| match v {
                ColumnValues::Numeric(v) => v.len(),
                ColumnValues::Categorical(v) => v.len(),
            })
            .unwrap_or(0);

        let mut columns = Vec::with_capacity(schema.len());
        let mut missing = Vec::with_capacity(schema.len());
        for (col, vals) in schema.iter().zip(values) {
            match (col.kind, vals) {
                (VarKind::Numeric, ColumnValues::Numeric(v)) => {
                    if v.len() != n {
                        return Err(Error::InvalidConfig("ragged columns".into()));
                    }
                    missing.push(v.iter().map(|x| x.is_none()).collect());
                    columns.push(ColumnData::Numeric(
                        v.into_iter().map(|x| x.unwrap_or(0.0)).collect(),
                    ));
                }
                (kind, ColumnValues::Categorical(v)) if kind != VarKind::Numeric => {
                    if v.len() != n {
                        return Err(Error::InvalidConfig("ragged columns".into()));
                    }
                    let levels = col.levels.len() as u32;
                    for code in v.iter().flatten() {
                        if *code >= levels {
                            return Err(Error::BadColumn {
                                column: col.name.clone(),
                                message: format!("category code {code} out of range"),
                            });
                        }
                    }
                    missing.push(v.iter().map(|x| x.is_none()).collect());
                    columns.push(ColumnData::Categorical(
                        v.into_iter().map(|x| x.unwrap_or(0)).collect(),
                    ));
                }
                _ => {
                    return Err(Error::BadColumn {
                        column: col.name.clone(),
                        message: "column values do not match the declared kind".into(),
                    })
                }
            }
        }

        let table = DataTable {
            schema,
            columns,
            missing,
            n,
        };
        for row in 0..n {
            if (0..table.p()).all(|t| table.is_missing(row, t)) {
                return Err(Error::AllMissingRow { row });
            }
        }
        Ok(table)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.schema.len()
    }

    pub fn schema(&self) -> &[ColumnSchema] {
        &self.schema
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.schema.iter().position(|c| c.name == name)
    }

    pub fn is_missing(&self, row: usize, col: usize) -> bool {
        self.missing[col][row]
    }

    /// Value of a numeric cell, `None` when missing.
    pub fn numeric_value(&self, row: usize, col: usize) -> Option<f64> {
        match &self.columns[col] {
            ColumnData::Numeric(values) if !self.missing[col][row] => Some(values[row]),
            _ => None,
        }
    }

    /// Level code of a categorical cell, `None` when missing.
    pub fn category_code(&self, row: usize, col: usize) -> Option<u32> {
        match &self.columns[col] {
            ColumnData::Categorical(codes) if !self.missing[col][row] => Some(codes[row]),
            _ => None,
        }
    }

    /// `max - min` over the non-missing values of a numeric column.
    pub fn column_range(&self, col: usize) -> Result<f64> {
        let name = &self.schema[col].name;
        let ColumnData::Numeric(values) = &self.columns[col] else {
            return Err(Error::BadColumn {
                column: name.clone(),
                message: "range requires a numeric column".into(),
            });
        };
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for (row, &v) in values.iter().enumerate() {
            if !self.missing[col][row] {
                min = min.min(v);
                max = max.max(v);
            }
        }
        if min > max {
            return Err(Error::UndefinedRange {
                column: name.clone(),
            });
        }
        Ok(max - min)
    }

    /// Position transform of an ordinal column into `[0, 1]`:
    /// `z = (o - 1) / (max(o) - 1)` with `o` the 1-based position of the
    /// cell's level. With `declared_levels` the maximum position is the
    /// number of declared levels; otherwise it is the largest observed
    /// position. Missing cells stay missing.
    pub fn kr_transform(&self, col: usize, declared_levels: bool) -> Result<Vec<Option<f64>>> {
        let schema = &self.schema[col];
        if schema.kind != VarKind::Ordinal {
            return Err(Error::BadColumn {
                column: schema.name.clone(),
                message: "position transform requires an ordinal column".into(),
            });
        }
        let ColumnData::Categorical(codes) = &self.columns[col] else {
            unreachable!("ordinal columns store category codes");
        };

        let max_position = if declared_levels {
            schema.levels.len()
        } else {
            let mut distinct = std::collections::BTreeSet::new();
            let mut max_code = 0u32;
            for (row, &code) in codes.iter().enumerate() {
                if !self.missing[col][row] {
                    distinct.insert(code);
                    max_code = max_code.max(code);
                }
            }
            if distinct.len() <= 1 {
                return Err(Error::DegenerateOrdinal {
                    column: schema.name.clone(),
                });
            }
            max_code as usize + 1
        };
        if max_position < 2 {
            return Err(Error::DegenerateOrdinal {
                column: schema.name.clone(),
            });
        }

        let denom = (max_position - 1) as f64;
        Ok(codes
            .iter()
            .enumerate()
            .map(|(row, &code)| {
                (!self.missing[col][row]).then(|| code as f64 / denom)
            })
            .collect())
    }

    /// Average ranks of an ordinal column over non-missing cells; tied
    /// levels share the mean of the rank positions they occupy.
    pub fn podani_ranks(&self, col: usize) -> Result<Vec<Option<f64>>> {
        let schema = &self.schema[col];
        if schema.kind != VarKind::Ordinal {
            return Err(Error::BadColumn {
                column: schema.name.clone(),
                message: "rank transform requires an ordinal column".into(),
            });
        }
        let ColumnData::Categorical(codes) = &self.columns[col] else {
            unreachable!("ordinal columns store category codes");
        };

        let mut observed_rows = Vec::new();
        let mut observed_positions = Vec::new();
        for (row, &code) in codes.iter().enumerate() {
            if !self.missing[col][row] {
                observed_rows.push(row);
                observed_positions.push(code as f64);
            }
        }
        if observed_rows.is_empty() {
            return Err(Error::BadColumn {
                column: schema.name.clone(),
                message: "all values missing".into(),
            });
        }

        let ranks = average_ranks(&observed_positions);
        let mut out = vec![None; self.n];
        for (slot, row) in observed_rows.into_iter().enumerate() {
            out[row] = Some(ranks[slot]);
        }
        Ok(out)
    }

    /// New table containing `rows` in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> DataTable {
        let columns = self
            .columns
            .iter()
            .map(|col| match col {
                ColumnData::Numeric(v) => {
                    ColumnData::Numeric(rows.iter().map(|&r| v[r]).collect())
                }
                ColumnData::Categorical(v) => {
                    ColumnData::Categorical(rows.iter().map(|&r| v[r]).collect())
                }
            })
            .collect();
        let missing = self
            .missing
            .iter()
            .map(|mask| rows.iter().map(|&r| mask[r]).collect())
            .collect();
        DataTable {
            schema: self.schema.clone(),
            columns,
            missing,
            n: rows.len(),
        }
    }

    /// New table containing only the named columns, in the given order.
    pub fn select_columns(&self, names: &[&str]) -> Result<DataTable> {
        let mut schema = Vec::with_capacity(names.len());
        let mut columns = Vec::with_capacity(names.len());
        let mut missing = Vec::with_capacity(names.len());
        for name in names {
            let idx = self.column_index(name).ok_or_else(|| Error::BadColumn {
                column: name.to_string(),
                message: "no such column".into(),
            })?;
            schema.push(self.schema[idx].clone());
            columns.push(self.columns[idx].clone());
            missing.push(self.missing[idx].clone());
        }
        Ok(DataTable {
            schema,
            columns,
            missing,
            n: self.n,
        })
    }

    /// Serializes the table as CSV; missing cells become empty fields.
    /// Non-missing values round-trip exactly through [`DataTable::from_csv`].
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let names: Vec<&str> = self.schema.iter().map(|c| c.name.as_str()).collect();
        out.push_str(&names.join(","));
        out.push('\n');
        for row in 0..self.n {
            for (t, col) in self.columns.iter().enumerate() {
                if t > 0 {
                    out.push(',');
                }
                if self.missing[t][row] {
                    continue;
                }
                match col {
                    ColumnData::Numeric(v) => out.push_str(&v[row].to_string()),
                    ColumnData::Categorical(v) => {
                        out.push_str(&self.schema[t].levels[v[row] as usize])
                    }
                }
            }
            out.push('\n');
        }
        out
    }

    /// Report-style validation: per-column missing rates plus warnings for
    /// columns that cannot contribute dissimilarity information.
    pub fn validate(&self) -> ValidationReport {
        let mut columns = Vec::with_capacity(self.p());
        for (t, col_schema) in self.schema.iter().enumerate() {
            let missing_count = self.missing[t].iter().filter(|&&m| m).count();
            let missing_rate = if self.n == 0 {
                0.0
            } else {
                missing_count as f64 / self.n as f64
            };
            let mut notes = Vec::new();
            if missing_count == self.n {
                notes.push("all values missing".to_string());
            } else {
                match &self.columns[t] {
                    ColumnData::Numeric(_) => {
                        if self.column_range(t).map(|r| r == 0.0).unwrap_or(false) {
                            notes.push("zero range".to_string());
                        }
                    }
                    ColumnData::Categorical(codes) => {
                        let mut distinct = std::collections::BTreeSet::new();
                        for (row, &code) in codes.iter().enumerate() {
                            if !self.missing[t][row] {
                                distinct.insert(code);
                            }
                        }
                        if distinct.len() <= 1 {
                            notes.push("single observed level".to_string());
                        }
                    }
                }
            }
            columns.push(ColumnCheck {
                name: col_schema.name.clone(),
                missing_rate,
                notes,
            });
        }

        let mut fatal = Vec::new();
        for row in 0..self.n {
            if (0..self.p()).all(|t| self.is_missing(row, t)) {
                fatal.push(format!("data row {row}: all values missing"));
            }
        }

        ValidationReport {
            n_rows: self.n,
            columns,
            fatal,
        }
    }
}

/// Per-column findings from [`DataTable::validate`].
#[derive(Debug, Clone)]
pub struct ColumnCheck {
    pub name: String,
    pub missing_rate: f64,
    pub notes: Vec<String>,
}

/// Validation outcome; warnings are advisory, fatal entries make the table
/// unusable for dissimilarity computation.
#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub n_rows: usize,
    pub columns: Vec<ColumnCheck>,
    pub fatal: Vec<String>,
}

impl ValidationReport {
    pub fn has_warnings(&self) -> bool {
        self.columns.iter().any(|c| !c.notes.is_empty())
    }

    pub fn has_fatal(&self) -> bool {
        !self.fatal.is_empty()
    }

    pub fn is_clean(&self) -> bool {
        !self.has_warnings() && !self.has_fatal()
    }

    /// Human-readable rendering, one line per column.
    pub fn render(&self) -> String {
        let mut out = format!("{} rows, {} columns\n", self.n_rows, self.columns.len());
        for col in &self.columns {
            out.push_str(&format!(
                "  {}: missing rate {:.4}",
                col.name, col.missing_rate
            ));
            if !col.notes.is_empty() {
                out.push_str(&format!("  [warning: {}]", col.notes.join("; ")));
            }
            out.push('\n');
        }
        for f in &self.fatal {
            out.push_str(&format!("  FATAL: {f}\n"));
        }
        out
    }
}
