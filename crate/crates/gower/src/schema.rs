//! Column schemas and the plain-text schema file format.
//!
//! One line per column:
//!
//! ```text
//! smoker = binary-symmetric [levels: no, yes]
//! degree = binary-asymmetric [levels: no, yes]   # second level = presence
//! region = nominal [levels: north, center, south]
//! edu    = ordinal [levels: low < mid < high]
//! age    = numeric
//! ```
//!
//! Blank lines and `#` comments are ignored.

use crate::error::{Error, Result};

/// Measurement type of a column.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    /// Two informative levels; simple matching.
    BinarySymmetric,
    /// Two levels where only co-presence counts (Jaccard rule); the second
    /// declared level is the presence level.
    BinaryAsymmetric,
    /// Unordered categories; simple matching.
    Nominal,
    /// Ordered categories; transformed to a numeric column before use.
    Ordinal,
    /// Interval or ratio scale; absolute difference scaled by the range.
    Numeric,
}

impl VarKind {
    pub fn is_categorical(self) -> bool {
        !matches!(self, VarKind::Numeric)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            VarKind::BinarySymmetric => "binary-symmetric",
            VarKind::BinaryAsymmetric => "binary-asymmetric",
            VarKind::Nominal => "nominal",
            VarKind::Ordinal => "ordinal",
            VarKind::Numeric => "numeric",
        }
    }

    fn parse(token: &str) -> Option<VarKind> {
        match token {
            "binary-symmetric" => Some(VarKind::BinarySymmetric),
            "binary-asymmetric" => Some(VarKind::BinaryAsymmetric),
            "nominal" => Some(VarKind::Nominal),
            "ordinal" => Some(VarKind::Ordinal),
            "numeric" => Some(VarKind::Numeric),
            _ => None,
        }
    }
}

/// Declared name, kind and (for categorical kinds) ordered level labels of
/// one column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnSchema {
    pub name: String,
    pub kind: VarKind,
    /// Category labels. Order is meaningful for ordinal columns; for
    /// binary-asymmetric the second label is the presence level.
    pub levels: Vec<String>,
}

impl ColumnSchema {
    pub fn new(name: impl Into<String>, kind: VarKind, levels: Vec<String>) -> Result<Self> {
        let schema = ColumnSchema {
            name: name.into(),
            kind,
            levels,
        };
        schema.check()?;
        Ok(schema)
    }

    pub fn numeric(name: impl Into<String>) -> Self {
        ColumnSchema {
            name: name.into(),
            kind: VarKind::Numeric,
            levels: Vec::new(),
        }
    }

    pub fn nominal(name: impl Into<String>, levels: &[&str]) -> Result<Self> {
        Self::new(name, VarKind::Nominal, owned(levels))
    }

    pub fn ordinal(name: impl Into<String>, levels: &[&str]) -> Result<Self> {
        Self::new(name, VarKind::Ordinal, owned(levels))
    }

    pub fn binary_symmetric(name: impl Into<String>, levels: &[&str; 2]) -> Result<Self> {
        Self::new(name, VarKind::BinarySymmetric, owned(levels.as_slice()))
    }

    /// The second label is the presence level.
    pub fn binary_asymmetric(name: impl Into<String>, levels: &[&str; 2]) -> Result<Self> {
        Self::new(name, VarKind::BinaryAsymmetric, owned(levels.as_slice()))
    }

    /// Index of `label` among the declared levels.
    pub fn level_index(&self, label: &str) -> Option<u32> {
        self.levels.iter().position(|l| l == label).map(|i| i as u32)
    }

    /// Presence code for a binary-asymmetric column (the second level).
    pub fn presence_code(&self) -> u32 {
        debug_assert_eq!(self.kind, VarKind::BinaryAsymmetric);
        1
    }

    fn check(&self) -> Result<()> {
        let fail = |message: String| {
            Err(Error::BadColumn {
                column: self.name.clone(),
                message,
            })
        };
        if self.name.is_empty() {
            return fail("empty column name".into());
        }
        match self.kind {
            VarKind::Numeric => {
                if !self.levels.is_empty() {
                    return fail("numeric columns do not declare levels".into());
                }
            }
            VarKind::BinarySymmetric | VarKind::BinaryAsymmetric => {
                if self.levels.len() != 2 {
                    return fail(format!(
                        "binary kinds declare exactly 2 levels, got {}",
                        self.levels.len()
                    ));
                }
            }
            VarKind::Nominal | VarKind::Ordinal => {
                if self.levels.is_empty() {
                    return fail("nominal/ordinal columns declare at least one level".into());
                }
            }
        }
        for (i, level) in self.levels.iter().enumerate() {
            if level.is_empty() {
                return fail("empty level label".into());
            }
            if self.levels[..i].contains(level) {
                return fail(format!("duplicate level label {level:?}"));
            }
        }
        Ok(())
    }
}

fn owned(labels: &[&str]) -> Vec<String> {
    labels.iter().map(|s| s.to_string()).collect()
}

/// Parses a schema file.
pub fn parse_schema(text: &str) -> Result<Vec<ColumnSchema>> {
    let mut columns = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| Error::SchemaParse {
            line: lineno + 1,
            message,
        };
        let (name, rest) = line
            .split_once('=')
            .ok_or_else(|| err("expected `name = kind`".into()))?;
        let name = name.trim();
        let rest = rest.trim();
        let (kind_token, levels_part) = match rest.split_once('[') {
            Some((k, tail)) => {
                let tail = tail
                    .strip_suffix(']')
                    .ok_or_else(|| err("unterminated `[levels: ...]`".into()))?;
                (k.trim(), Some(tail.trim()))
            }
            None => (rest, None),
        };
        let kind = VarKind::parse(kind_token)
            .ok_or_else(|| err(format!("unknown kind {kind_token:?}")))?;
        let levels = match levels_part {
            None => Vec::new(),
            Some(spec) => {
                let body = spec
                    .strip_prefix("levels:")
                    .ok_or_else(|| err("expected `levels:` inside brackets".into()))?;
                let sep = if kind == VarKind::Ordinal { '<' } else { ',' };
                body.split(sep)
                    .map(|s| s.trim().to_string())
                    .collect::<Vec<_>>()
            }
        };
        if columns.iter().any(|c: &ColumnSchema| c.name == name) {
            return Err(err(format!("duplicate column name {name:?}")));
        }
        columns.push(ColumnSchema::new(name, kind, levels).map_err(|e| err(e.to_string()))?);
    }
    if columns.is_empty() {
        return Err(Error::SchemaParse {
            line: 0,
            message: "schema declares no columns".into(),
        });
    }
    Ok(columns)
}

/// Renders a schema in the file format accepted by [`parse_schema`].
pub fn format_schema(schema: &[ColumnSchema]) -> String {
    let mut out = String::new();
    for col in schema {
        out.push_str(&col.name);
        out.push_str(" = ");
        out.push_str(col.kind.as_str());
        if !col.levels.is_empty() {
            let sep = if col.kind == VarKind::Ordinal { " < " } else { ", " };
            out.push_str(" [levels: ");
            out.push_str(&col.levels.join(sep));
            out.push(']');
        }
        out.push('\n');
    }
    out
}
