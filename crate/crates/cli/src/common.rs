use std::collections::HashMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, ValueEnum};
use depadj::dataset::{load_csv, ColumnType, Dataset, LoadOptions};
use depadj::experiments::{Adjustment, Measure, ScoreSpec};
use depadj::Error;
use serde::Serialize;

/// Exit status and tag for an error. Library errors get one status per
/// kind; anything else (bad output path, serialization) exits with 1.
pub fn exit_code(err: &anyhow::Error) -> (u8, &'static str) {
    let Some(e) = err.downcast_ref::<Error>() else {
        return (1, "other");
    };
    let code = match e {
        Error::EmptySample => 10,
        Error::SampleTooSmall { .. } => 11,
        Error::DegenerateVariance(_) => 12,
        Error::DegenerateGrid { .. } => 13,
        Error::EmptyCategory(_) => 14,
        Error::BadAlpha(_) => 15,
        Error::InsufficientPermutations(_) => 16,
        Error::DegenerateNormalizer { .. } => 17,
        Error::DegenerateNullVariance => 18,
        Error::UnknownColumn(_) => 19,
        Error::NoEligiblePairs(_) => 20,
        Error::DegenerateTarget => 21,
        Error::IncompatibleColumn { .. } => 22,
        Error::RaggedRow { .. } => 23,
        Error::DuplicateColumn(_) => 24,
        Error::LengthMismatch(_) => 25,
        Error::InvalidConfig(_) => 26,
        Error::Io(_) => 27,
        Error::Format(_) => 28,
    };
    (code, e.code())
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct InputArgs {
    /// CSV file with a header row.
    #[arg(long)]
    pub input: PathBuf,
    /// Field delimiter (a single byte).
    #[arg(long, default_value_t = ',')]
    pub delimiter: char,
    /// Cell values read as missing; replaces the defaults "", "?" and "NA".
    #[arg(long = "missing", value_delimiter = ',')]
    pub missing: Option<Vec<String>>,
    /// Columns to read as categorical regardless of content.
    #[arg(long, value_delimiter = ',')]
    pub categorical: Vec<String>,
}

impl InputArgs {
    pub fn load(&self) -> anyhow::Result<Dataset> {
        if !self.delimiter.is_ascii() {
            bail!(Error::InvalidConfig(format!("delimiter must be ASCII, got {:?}", self.delimiter)));
        }
        let mut options = LoadOptions {
            delimiter: self.delimiter as u8,
            type_overrides: HashMap::new(),
            ..LoadOptions::default()
        };
        if let Some(m) = &self.missing {
            options.missing_markers = m.clone();
        }
        for name in &self.categorical {
            options.type_overrides.insert(name.clone(), ColumnType::Categorical);
        }
        Ok(load_csv(&self.input, &options)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureArg {
    R2,
    Mic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AdjustArg {
    Raw,
    Quant,
    Std,
    Alpha,
}

pub fn score_spec(measure: MeasureArg, adjust: AdjustArg, alpha: f64, permutations: usize) -> ScoreSpec {
    let measure = match measure {
        MeasureArg::R2 => Measure::R2,
        MeasureArg::Mic => Measure::Mic,
    };
    let adjustment = match adjust {
        AdjustArg::Raw => Adjustment::Raw,
        AdjustArg::Quant => Adjustment::Quantification,
        AdjustArg::Std => Adjustment::Standardized,
        AdjustArg::Alpha => Adjustment::Ranking { alpha },
    };
    ScoreSpec::new(measure, adjustment).with_permutations(permutations)
}

/// Parse a score token: `r2`, `ar2`, `sr2`, `ar2@0.05`, and the same for `mic`.
pub fn parse_score(token: &str) -> Result<ScoreSpec, String> {
    let lower = token.trim().to_ascii_lowercase();
    let (name, alpha) = match lower.split_once('@') {
        Some((name, a)) => (name, Some(a.parse::<f64>().map_err(|e| format!("bad alpha in {token:?}: {e}"))?)),
        None => (lower.as_str(), None),
    };
    let (prefix, measure) = if let Some(p) = name.strip_suffix("r2") {
        (p, Measure::R2)
    } else if let Some(p) = name.strip_suffix("mic") {
        (p, Measure::Mic)
    } else {
        return Err(format!("unknown score {token:?}"));
    };
    let adjustment = match (prefix, alpha) {
        ("", None) => Adjustment::Raw,
        ("a", None) => Adjustment::Quantification,
        ("s", None) => Adjustment::Standardized,
        ("a", Some(alpha)) => Adjustment::Ranking { alpha },
        _ => return Err(format!("unknown score {token:?}")),
    };
    Ok(ScoreSpec::new(measure, adjustment))
}

pub fn to_json<T: Serialize>(value: &T) -> anyhow::Result<String> {
    serde_json::to_string_pretty(value).context("serializing report")
}

/// Write `text` to stdout in one go.
pub fn emit(text: &str) -> anyhow::Result<()> {
    let mut out = io::stdout().lock();
    out.write_all(text.as_bytes())?;
    out.flush()?;
    Ok(())
}

pub fn write_file(path: &Path, text: &str) -> anyhow::Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}
