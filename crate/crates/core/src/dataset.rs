//! Column tables read from delimited text, with explicit missing cells.

use std::collections::{HashMap, HashSet};
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sample::{PairedSample, RealSample};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ColumnType {
    Real,
    Categorical,
}

impl ColumnType {
    pub fn name(self) -> &'static str {
        match self {
            ColumnType::Real => "real",
            ColumnType::Categorical => "categorical",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ColumnData {
    Real(Vec<Option<f64>>),
    Categorical(Vec<Option<String>>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub name: String,
    pub data: ColumnData,
}

impl Column {
    pub fn real(name: impl Into<String>, values: Vec<Option<f64>>) -> Self {
        Self {
            name: name.into(),
            data: ColumnData::Real(values),
        }
    }

    pub fn categorical(name: impl Into<String>, values: Vec<Option<String>>) -> Self {
        Self {
            name: name.into(),
            data: ColumnData::Categorical(values),
        }
    }

    pub fn kind(&self) -> ColumnType {
        match self.data {
            ColumnData::Real(_) => ColumnType::Real,
            ColumnData::Categorical(_) => ColumnType::Categorical,
        }
    }

    pub fn len(&self) -> usize {
        match &self.data {
            ColumnData::Real(v) => v.len(),
            ColumnData::Categorical(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_missing(&self, row: usize) -> bool {
        match &self.data {
            ColumnData::Real(v) => v[row].is_none(),
            ColumnData::Categorical(v) => v[row].is_none(),
        }
    }

    pub fn as_real(&self) -> Result<&[Option<f64>]> {
        match &self.data {
            ColumnData::Real(v) => Ok(v),
            ColumnData::Categorical(_) => Err(Error::IncompatibleColumn {
                column: self.name.clone(),
                expected: "real",
                found: "categorical",
            }),
        }
    }

    /// Rows with a value.
    pub fn present_count(&self) -> usize {
        (0..self.len()).filter(|&r| !self.is_missing(r)).count()
    }
}

/// Rectangular table of named, typed columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    columns: Vec<Column>,
    rows: usize,
}

impl Dataset {
    pub fn new(columns: Vec<Column>) -> Result<Self> {
        let rows = columns.first().map_or(0, Column::len);
        let mut seen = HashSet::new();
        for c in &columns {
            if c.len() != rows {
                return Err(Error::LengthMismatch(format!("column `{}` has {} rows, expected {rows}", c.name, c.len())));
            }
            if !seen.insert(c.name.as_str()) {
                return Err(Error::DuplicateColumn(c.name.clone()));
            }
        }
        Ok(Self { columns, rows })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.columns.iter().map(|c| c.name.as_str())
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.columns
            .iter()
            .position(|c| c.name == name)
            .ok_or_else(|| Error::UnknownColumn(name.to_string()))
    }

    pub fn column(&self, name: &str) -> Result<&Column> {
        Ok(&self.columns[self.index_of(name)?])
    }

    /// Pairwise-complete real sample of two columns.
    pub fn real_pair(&self, x: &str, y: &str) -> Result<RealSample> {
        let xs = self.column(x)?.as_real()?;
        let ys = self.column(y)?.as_real()?;
        PairedSample::from_options(xs.to_vec(), ys.to_vec())
    }
}

#[derive(Debug, Clone)]
pub struct LoadOptions {
    pub missing_markers: Vec<String>,
    pub type_overrides: HashMap<String, ColumnType>,
    pub delimiter: u8,
}

impl Default for LoadOptions {
    fn default() -> Self {
        Self {
            missing_markers: vec![String::new(), "?".into(), "NA".into()],
            type_overrides: HashMap::new(),
            delimiter: b',',
        }
    }
}

pub fn load_csv(path: impl AsRef<Path>, options: &LoadOptions) -> Result<Dataset> {
    let file = std::fs::File::open(path.as_ref())
        .map_err(|e| Error::Io(format!("{}: {e}", path.as_ref().display())))?;
    read_csv(file, options)
}

/// Parse delimited text with a header row. A column is real unless some
/// non-missing cell fails to parse as a number, or an override says
/// otherwise.
pub fn read_csv<R: Read>(reader: R, options: &LoadOptions) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .delimiter(options.delimiter)
        .has_headers(true)
        .flexible(true)
        .from_reader(reader);
    let names: Vec<String> = rdr.headers()?.iter().map(|h| h.trim().to_string()).collect();
    let mut seen = HashSet::new();
    for name in &names {
        if !seen.insert(name.as_str()) {
            return Err(Error::DuplicateColumn(name.clone()));
        }
    }
    let mut cells: Vec<Vec<Option<String>>> = vec![Vec::new(); names.len()];
    for (i, record) in rdr.records().enumerate() {
        let record = record?;
        if record.len() != names.len() {
            return Err(Error::RaggedRow {
                row: i + 2,
                expected: names.len(),
                found: record.len(),
            });
        }
        for (col, field) in cells.iter_mut().zip(record.iter()) {
            let field = field.trim();
            let missing = options.missing_markers.iter().any(|m| m == field);
            col.push((!missing).then(|| field.to_string()));
        }
    }
    let columns = names
        .into_iter()
        .zip(cells)
        .map(|(name, values)| {
            let parsed: Vec<Option<std::result::Result<f64, _>>> =
                values.iter().map(|v| v.as_deref().map(str::parse::<f64>)).collect();
            let numeric = parsed.iter().flatten().all(|p| p.as_ref().is_ok_and(|v| v.is_finite()));
            match options.type_overrides.get(&name) {
                Some(ColumnType::Categorical) => Ok(Column::categorical(name, values)),
                Some(ColumnType::Real) if !numeric => Err(Error::IncompatibleColumn {
                    column: name,
                    expected: "real",
                    found: "categorical",
                }),
                _ if numeric => Ok(Column::real(name, parsed.into_iter().map(|p| p.map(|v| v.unwrap())).collect())),
                _ => Ok(Column::categorical(name, values)),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Dataset::new(columns)
}
