//! Per-variable dissimilarities for mixed-type columns.
//!
//! Each variable contributes a scaled dissimilarity `d` in `[0, 1]` and an
//! availability indicator `delta` per unit pair:
//!
//! * binary symmetric / nominal — simple matching: `d = 0` iff the
//!   categories are equal, else 1;
//! * binary asymmetric — Jaccard rule: co-presence gives `d = 0`, a
//!   presence/absence mismatch gives `d = 1`, and double absence is
//!   excluded (`delta = 0`);
//! * numeric — `d = |x_i - x_j| / R_t` with `R_t` the column range;
//! * ordinal — first transformed to a numeric column (position transform
//!   by default, average ranks as an option), then treated as numeric with
//!   the range taken over the transformed values.
//!
//! A missing operand always gives `delta = 0`, and slots with `delta = 0`
//! are ignored by every consumer.

use crate::error::{Error, Result};
use crate::pairs::pair_count;
use crate::schema::VarKind;
use crate::table::DataTable;

/// How ordinal columns are converted to numeric ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OrdinalTreatment {
    /// Position transform `z = (o - 1) / (max(o) - 1)`.
    #[default]
    KaufmanRousseeuw,
    /// Average ranks. Tied ranks are averaged; no further tie correction
    /// is applied.
    Podani,
}

/// Ordinal handling options.
#[derive(Debug, Clone, Copy, Default)]
pub struct OrdinalOptions {
    pub treatment: OrdinalTreatment,
    /// Use the number of declared levels as the maximum position in the
    /// position transform instead of the largest observed position.
    pub declared_levels: bool,
}

/// A single cell as seen by [`variable_dissim`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CellValue {
    Missing,
    Number(f64),
    Category(u32),
}

/// Dissimilarity contribution of one variable for one unit pair.
///
/// `range` is required for numeric kind and must be positive. For
/// binary-asymmetric columns the presence level is category code 1.
pub fn variable_dissim(
    kind: VarKind,
    a: CellValue,
    b: CellValue,
    range: Option<f64>,
) -> Result<(f64, bool)> {
    use CellValue::*;
    match kind {
        VarKind::Numeric => {
            let r = range.unwrap_or(0.0);
            if r <= 0.0 {
                return Err(Error::NonPositiveRange {
                    column: String::new(),
                    range: r,
                });
            }
            match (a, b) {
                (Number(x), Number(y)) => Ok(((x - y).abs() / r, true)),
                _ => Ok((0.0, false)),
            }
        }
        VarKind::BinarySymmetric | VarKind::Nominal | VarKind::Ordinal => match (a, b) {
            (Category(x), Category(y)) => Ok((if x == y { 0.0 } else { 1.0 }, true)),
            _ => Ok((0.0, false)),
        },
        VarKind::BinaryAsymmetric => match (a, b) {
            // Double absence carries no information.
            (Category(0), Category(0)) => Ok((0.0, false)),
            (Category(x), Category(y)) => Ok((if x == y { 0.0 } else { 1.0 }, true)),
            _ => Ok((0.0, false)),
        },
    }
}

/// One column reduced to the representation the pair rules consume.
#[derive(Debug, Clone)]
pub(crate) enum PreparedColumn {
    Numeric {
        /// Cell values (transformed values for ordinal columns); missing
        /// slots hold 0.
        values: Vec<f64>,
        missing: Vec<bool>,
        /// Column range; 0 marks a zero-range column whose defined pairs
        /// all get `d = 0`.
        range: f64,
    },
    Categorical {
        codes: Vec<u32>,
        missing: Vec<bool>,
        /// Jaccard rule: code 0 is absence and double absence is excluded.
        asymmetric: bool,
    },
}

impl PreparedColumn {
    fn pair(&self, i: usize, j: usize) -> (f64, bool) {
        match self {
            PreparedColumn::Numeric {
                values,
                missing,
                range,
            } => {
                if missing[i] || missing[j] {
                    (0.0, false)
                } else if *range == 0.0 {
                    (0.0, true)
                } else {
                    ((values[i] - values[j]).abs() / range, true)
                }
            }
            PreparedColumn::Categorical {
                codes,
                missing,
                asymmetric,
            } => {
                if missing[i] || missing[j] {
                    (0.0, false)
                } else if *asymmetric && codes[i] == 0 && codes[j] == 0 {
                    (0.0, false)
                } else {
                    (if codes[i] == codes[j] { 0.0 } else { 1.0 }, true)
                }
            }
        }
    }

    /// Like [`PreparedColumn::pair`] across two prepared tables, clamping
    /// numeric contributions at 1 for query values outside the reference
    /// range.
    fn cross(&self, i: usize, other: &PreparedColumn, j: usize) -> (f64, bool) {
        match (self, other) {
            (
                PreparedColumn::Numeric {
                    values: va,
                    missing: ma,
                    range,
                },
                PreparedColumn::Numeric {
                    values: vb,
                    missing: mb,
                    ..
                },
            ) => {
                if ma[i] || mb[j] {
                    (0.0, false)
                } else if *range == 0.0 {
                    (0.0, true)
                } else {
                    (((va[i] - vb[j]).abs() / range).min(1.0), true)
                }
            }
            (
                PreparedColumn::Categorical {
                    codes: ca,
                    missing: ma,
                    asymmetric,
                },
                PreparedColumn::Categorical {
                    codes: cb,
                    missing: mb,
                    ..
                },
            ) => {
                if ma[i] || mb[j] {
                    (0.0, false)
                } else if *asymmetric && ca[i] == 0 && cb[j] == 0 {
                    (0.0, false)
                } else {
                    (if ca[i] == cb[j] { 0.0 } else { 1.0 }, true)
                }
            }
            _ => unreachable!("prepared tables with equal schemas"),
        }
    }
}

/// Columns of a table reduced for pair computation. Ranges and ordinal
/// transforms are owned by the table they were built from, so a prepared
/// reference table can map query tables onto its own scale.
#[derive(Debug, Clone)]
pub(crate) struct PreparedTable {
    pub cols: Vec<PreparedColumn>,
    pub n: usize,
    pub notes: Vec<String>,
}

impl PreparedTable {
    pub fn build(table: &DataTable, opts: &OrdinalOptions) -> Result<PreparedTable> {
        let mut cols = Vec::with_capacity(table.p());
        let mut notes = Vec::new();
        for (t, schema) in table.schema().iter().enumerate() {
            let col = match schema.kind {
                VarKind::Numeric => {
                    let missing: Vec<bool> =
                        (0..table.n()).map(|r| table.is_missing(r, t)).collect();
                    let values: Vec<f64> = (0..table.n())
                        .map(|r| table.numeric_value(r, t).unwrap_or(0.0))
                        .collect();
                    let range = match table.column_range(t) {
                        Ok(r) => {
                            if r == 0.0 {
                                notes.push(format!(
                                    "column {:?}: zero range, defined pairs get d = 0",
                                    schema.name
                                ));
                            }
                            r
                        }
                        Err(Error::UndefinedRange { .. }) => {
                            notes.push(format!(
                                "column {:?}: all values missing, no pair is defined",
                                schema.name
                            ));
                            0.0
                        }
                        Err(e) => return Err(e),
                    };
                    PreparedColumn::Numeric {
                        values,
                        missing,
                        range,
                    }
                }
                VarKind::Ordinal => {
                    let transformed = match opts.treatment {
                        OrdinalTreatment::KaufmanRousseeuw => {
                            match table.kr_transform(t, opts.declared_levels) {
                                Ok(z) => z,
                                Err(Error::DegenerateOrdinal { .. }) => {
                                    notes.push(format!(
                                        "column {:?}: single observed level, defined pairs get d = 0",
                                        schema.name
                                    ));
                                    (0..table.n())
                                        .map(|r| (!table.is_missing(r, t)).then_some(0.0))
                                        .collect()
                                }
                                Err(e) => return Err(e),
                            }
                        }
                        OrdinalTreatment::Podani => match table.podani_ranks(t) {
                            Ok(ranks) => ranks,
                            Err(Error::BadColumn { .. }) => {
                                notes.push(format!(
                                    "column {:?}: all values missing, no pair is defined",
                                    schema.name
                                ));
                                vec![None; table.n()]
                            }
                            Err(e) => return Err(e),
                        },
                    };
                    let missing: Vec<bool> = transformed.iter().map(|v| v.is_none()).collect();
                    let values: Vec<f64> =
                        transformed.iter().map(|v| v.unwrap_or(0.0)).collect();
                    let mut min = f64::INFINITY;
                    let mut max = f64::NEG_INFINITY;
                    for (r, &v) in values.iter().enumerate() {
                        if !missing[r] {
                            min = min.min(v);
                            max = max.max(v);
                        }
                    }
                    let range = if min > max { 0.0 } else { max - min };
                    if range == 0.0 && missing.iter().any(|&m| !m) {
                        notes.push(format!(
                            "column {:?}: zero range after ordinal transform, defined pairs get d = 0",
                            schema.name
                        ));
                    }
                    PreparedColumn::Numeric {
                        values,
                        missing,
                        range,
                    }
                }
                kind => {
                    let missing: Vec<bool> =
                        (0..table.n()).map(|r| table.is_missing(r, t)).collect();
                    let codes: Vec<u32> = (0..table.n())
                        .map(|r| table.category_code(r, t).unwrap_or(0))
                        .collect();
                    PreparedColumn::Categorical {
                        codes,
                        missing,
                        asymmetric: kind == VarKind::BinaryAsymmetric,
                    }
                }
            };
            cols.push(col);
        }
        Ok(PreparedTable {
            cols,
            n: table.n(),
            notes,
        })
    }

    /// Prepares `query` on this reference table's scale: numeric columns
    /// reuse the reference range, ordinal columns reuse the reference
    /// transform.
    pub fn map_query(
        &self,
        reference: &DataTable,
        query: &DataTable,
        opts: &OrdinalOptions,
    ) -> Result<PreparedTable> {
        if reference.schema() != query.schema() {
            return Err(Error::SchemaMismatch(
                "query columns must match the reference schema".into(),
            ));
        }
        let mut cols = Vec::with_capacity(query.p());
        for (t, schema) in query.schema().iter().enumerate() {
            let col = match (schema.kind, &self.cols[t]) {
                (VarKind::Numeric, PreparedColumn::Numeric { range, .. }) => {
                    let missing: Vec<bool> =
                        (0..query.n()).map(|r| query.is_missing(r, t)).collect();
                    let values: Vec<f64> = (0..query.n())
                        .map(|r| query.numeric_value(r, t).unwrap_or(0.0))
                        .collect();
                    PreparedColumn::Numeric {
                        values,
                        missing,
                        range: *range,
                    }
                }
                (VarKind::Ordinal, PreparedColumn::Numeric { range, .. }) => {
                    let level_values =
                        reference_level_values(reference, t, opts, schema.levels.len());
                    let missing: Vec<bool> =
                        (0..query.n()).map(|r| query.is_missing(r, t)).collect();
                    let values: Vec<f64> = (0..query.n())
                        .map(|r| {
                            query
                                .category_code(r, t)
                                .map(|c| level_values[c as usize])
                                .unwrap_or(0.0)
                        })
                        .collect();
                    PreparedColumn::Numeric {
                        values,
                        missing,
                        range: *range,
                    }
                }
                (kind, PreparedColumn::Categorical { .. }) => {
                    let missing: Vec<bool> =
                        (0..query.n()).map(|r| query.is_missing(r, t)).collect();
                    let codes: Vec<u32> = (0..query.n())
                        .map(|r| query.category_code(r, t).unwrap_or(0))
                        .collect();
                    PreparedColumn::Categorical {
                        codes,
                        missing,
                        asymmetric: kind == VarKind::BinaryAsymmetric,
                    }
                }
                _ => unreachable!("schemas were checked equal"),
            };
            cols.push(col);
        }
        Ok(PreparedTable {
            cols,
            n: query.n(),
            notes: Vec::new(),
        })
    }
}

/// Numeric value every declared level maps to under the reference table's
/// ordinal transform.
fn reference_level_values(
    reference: &DataTable,
    col: usize,
    opts: &OrdinalOptions,
    n_levels: usize,
) -> Vec<f64> {
    match opts.treatment {
        OrdinalTreatment::KaufmanRousseeuw => {
            // Mirror the reference denominator; unobserved levels fall on
            // the same position scale (clamping caps out-of-range pairs).
            let denom = if opts.declared_levels {
                (n_levels.saturating_sub(1)).max(1) as f64
            } else {
                let mut distinct = std::collections::BTreeSet::new();
                let mut max_code = 0u32;
                for r in 0..reference.n() {
                    if let Some(code) = reference.category_code(r, col) {
                        distinct.insert(code);
                        max_code = max_code.max(code);
                    }
                }
                if distinct.len() <= 1 {
                    1.0
                } else {
                    max_code as f64
                }
            };
            (0..n_levels).map(|c| c as f64 / denom).collect()
        }
        OrdinalTreatment::Podani => {
            // Average rank each level holds in the reference column; a
            // level unobserved there slots in between its neighbors.
            let mut counts = vec![0usize; n_levels];
            for r in 0..reference.n() {
                if let Some(code) = reference.category_code(r, col) {
                    counts[code as usize] += 1;
                }
            }
            let mut below = 0usize;
            counts
                .iter()
                .map(|&c| {
                    let rank = below as f64 + (c as f64 + 1.0) / 2.0;
                    below += c;
                    rank
                })
                .collect()
        }
    }
}

/// The `d` and `delta` values of every variable for every unit pair,
/// stored column-major over condensed pair offsets.
#[derive(Debug, Clone)]
pub struct PerVariableDissimilarity {
    n: usize,
    m: usize,
    p: usize,
    d: Vec<f64>,
    delta: Vec<bool>,
    names: Vec<String>,
    complete: Vec<bool>,
    dichotomous: Vec<bool>,
    notes: Vec<String>,
}

impl PerVariableDissimilarity {
    /// Number of units behind the pair set; 0 for subsampled views.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of pairs.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of variables.
    pub fn p(&self) -> usize {
        self.p
    }

    pub fn variable_names(&self) -> &[String] {
        &self.names
    }

    pub fn d_column(&self, t: usize) -> &[f64] {
        &self.d[t * self.m..(t + 1) * self.m]
    }

    pub fn delta_column(&self, t: usize) -> &[bool] {
        &self.delta[t * self.m..(t + 1) * self.m]
    }

    /// Whether every pair is defined for variable `t`.
    pub fn is_complete(&self, t: usize) -> bool {
        self.complete[t]
    }

    /// Whether every defined `d` of variable `t` is exactly 0 or 1.
    pub fn is_dichotomous(&self, t: usize) -> bool {
        self.dichotomous[t]
    }

    /// Whether every pair of every variable is defined.
    pub fn all_complete(&self) -> bool {
        self.complete.iter().all(|&c| c)
    }

    /// Build-time warnings (zero-range columns and the like).
    pub fn notes(&self) -> &[String] {
        &self.notes
    }

    /// Restriction to the given pair offsets, in order. Pair identity is
    /// dropped: the result supports aggregation and correlation but not
    /// matrix reconstruction.
    pub fn subsample_pairs(&self, offsets: &[usize]) -> PerVariableDissimilarity {
        let m = offsets.len();
        let mut d = Vec::with_capacity(m * self.p);
        let mut delta = Vec::with_capacity(m * self.p);
        for t in 0..self.p {
            let dc = self.d_column(t);
            let del = self.delta_column(t);
            d.extend(offsets.iter().map(|&k| dc[k]));
            delta.extend(offsets.iter().map(|&k| del[k]));
        }
        let mut out = PerVariableDissimilarity {
            n: 0,
            m,
            p: self.p,
            d,
            delta,
            names: self.names.clone(),
            complete: Vec::new(),
            dichotomous: Vec::new(),
            notes: Vec::new(),
        };
        out.refresh_flags();
        out
    }

    fn refresh_flags(&mut self) {
        self.complete = (0..self.p)
            .map(|t| self.delta_column(t).iter().all(|&d| d))
            .collect();
        self.dichotomous = (0..self.p)
            .map(|t| {
                self.d_column(t)
                    .iter()
                    .zip(self.delta_column(t))
                    .all(|(&v, &def)| !def || v == 0.0 || v == 1.0)
            })
            .collect();
    }

    #[cfg(test)]
    pub(crate) fn from_raw(n: usize, p: usize, d: Vec<f64>, delta: Vec<bool>) -> Self {
        let m = pair_count(n);
        assert_eq!(d.len(), m * p);
        assert_eq!(delta.len(), m * p);
        let mut out = PerVariableDissimilarity {
            n,
            m,
            p,
            d,
            delta,
            names: (0..p).map(|t| format!("v{}", t + 1)).collect(),
            complete: Vec::new(),
            dichotomous: Vec::new(),
            notes: Vec::new(),
        };
        out.refresh_flags();
        out
    }
}

/// Fills `d` and `delta` for all pairs and variables of `table`.
pub fn per_variable_matrix(
    table: &DataTable,
    opts: &OrdinalOptions,
) -> Result<PerVariableDissimilarity> {
    let prepared = PreparedTable::build(table, opts)?;
    let n = table.n();
    let m = pair_count(n);
    let p = table.p();

    let mut d = vec![0.0; m * p];
    let mut delta = vec![false; m * p];
    for (t, col) in prepared.cols.iter().enumerate() {
        let dc = &mut d[t * m..(t + 1) * m];
        let del = &mut delta[t * m..(t + 1) * m];
        let mut k = 0;
        for i in 0..n {
            for j in i + 1..n {
                let (value, defined) = col.pair(i, j);
                debug_assert!((0.0..=1.0).contains(&value));
                dc[k] = value;
                del[k] = defined;
                k += 1;
            }
        }
    }

    let mut out = PerVariableDissimilarity {
        n,
        m,
        p,
        d,
        delta,
        names: table.schema().iter().map(|c| c.name.clone()).collect(),
        complete: Vec::new(),
        dichotomous: Vec::new(),
        notes: prepared.notes,
    };
    out.refresh_flags();
    Ok(out)
}
