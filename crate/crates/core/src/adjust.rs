//! Null-based adjustments of a raw estimate.
//!
//! * quantification: `(raw − E₀) / (max − E₀)`, zero on average under
//!   independence and 1 at the estimator's maximum;
//! * standardization: `(raw − E₀) / sd₀`;
//! * ranking at level α: `raw − q₀(1−α)`.

use serde::{Deserialize, Serialize};

use crate::error::{check_alpha, Error, Result};
use crate::measures::{gini_gain, pearson_r2, ContingencyTable};
use crate::mic::{mic, MicConfig};
use crate::nulls::{gini_null_moments, permutation_null, r2_null, NullKind, NullModel};
use crate::sample::RealSample;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    Quantification,
    Standardized,
    RankingAlpha,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureKind {
    R2,
    Mic,
    Gini,
}

/// Summary of the null model an adjusted score was computed against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NullRef {
    pub kind: NullKind,
    pub n: usize,
    pub permutations: Option<usize>,
    pub seed: Option<u64>,
    pub mean: f64,
    pub sd: f64,
}

impl From<&NullModel> for NullRef {
    fn from(m: &NullModel) -> Self {
        Self {
            kind: m.kind,
            n: m.meta.n,
            permutations: m.meta.permutations,
            seed: m.meta.seed,
            mean: m.mean,
            sd: m.sd(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdjustedScore {
    pub raw: f64,
    pub adjusted: f64,
    pub scheme: Scheme,
    pub measure: Option<MeasureKind>,
    pub alpha: Option<f64>,
    pub max_value: Option<f64>,
    pub null_ref: NullRef,
}

impl AdjustedScore {
    fn tagged(mut self, measure: MeasureKind) -> Self {
        self.measure = Some(measure);
        self
    }
}

pub fn adjust_quantification(raw: f64, null: &NullModel, max_value: f64) -> Result<AdjustedScore> {
    if !(max_value > null.mean) {
        return Err(Error::DegenerateNormalizer {
            max: max_value,
            mean: null.mean,
        });
    }
    if raw > max_value {
        return Err(Error::InvalidConfig(format!("raw score {raw} exceeds maximum {max_value}")));
    }
    Ok(AdjustedScore {
        raw,
        adjusted: (raw - null.mean) / (max_value - null.mean),
        scheme: Scheme::Quantification,
        measure: None,
        alpha: None,
        max_value: Some(max_value),
        null_ref: null.into(),
    })
}

pub fn standardize(raw: f64, null: &NullModel) -> Result<AdjustedScore> {
    if !(null.variance > 0.0) {
        return Err(Error::DegenerateNullVariance);
    }
    Ok(AdjustedScore {
        raw,
        adjusted: (raw - null.mean) / null.sd(),
        scheme: Scheme::Standardized,
        measure: None,
        alpha: None,
        max_value: None,
        null_ref: null.into(),
    })
}

pub fn adjust_ranking(raw: f64, null: &NullModel, alpha: f64) -> Result<AdjustedScore> {
    check_alpha(alpha)?;
    Ok(AdjustedScore {
        raw,
        adjusted: raw - null.upper_quantile(alpha)?,
        scheme: Scheme::RankingAlpha,
        measure: None,
        alpha: Some(alpha),
        max_value: None,
        null_ref: null.into(),
    })
}

fn r2_parts(sample: &RealSample) -> Result<(f64, NullModel)> {
    let raw = pearson_r2(sample)?;
    Ok((raw, r2_null(sample.n())?))
}

pub fn ar2(sample: &RealSample) -> Result<AdjustedScore> {
    let (raw, null) = r2_parts(sample)?;
    Ok(adjust_quantification(raw, &null, 1.0)?.tagged(MeasureKind::R2))
}

pub fn sr2(sample: &RealSample) -> Result<AdjustedScore> {
    let (raw, null) = r2_parts(sample)?;
    Ok(standardize(raw, &null)?.tagged(MeasureKind::R2))
}

pub fn ar2_alpha(sample: &RealSample, alpha: f64) -> Result<AdjustedScore> {
    check_alpha(alpha)?;
    let (raw, null) = r2_parts(sample)?;
    Ok(adjust_ranking(raw, &null, alpha)?.tagged(MeasureKind::R2))
}

/// Raw MIC and its permutation null (one batch shared by AMIC, SMIC and
/// AMIC(α)).
#[derive(Debug, Clone, PartialEq)]
pub struct MicWithNull {
    pub raw: f64,
    pub null: NullModel,
}

impl MicWithNull {
    pub fn compute(sample: &RealSample, config: &MicConfig, permutations: usize, seed: u64) -> Result<Self> {
        let raw = mic(sample, config)?;
        let null = permutation_null(sample, |s| mic(s, config), permutations, seed)?;
        Ok(Self { raw, null })
    }

    pub fn amic(&self) -> Result<AdjustedScore> {
        Ok(adjust_quantification(self.raw, &self.null, 1.0)?.tagged(MeasureKind::Mic))
    }

    pub fn smic(&self) -> Result<AdjustedScore> {
        Ok(standardize(self.raw, &self.null)?.tagged(MeasureKind::Mic))
    }

    pub fn amic_alpha(&self, alpha: f64) -> Result<AdjustedScore> {
        Ok(adjust_ranking(self.raw, &self.null, alpha)?.tagged(MeasureKind::Mic))
    }
}

pub fn amic(sample: &RealSample, permutations: usize, seed: u64) -> Result<AdjustedScore> {
    MicWithNull::compute(sample, &MicConfig::default(), permutations, seed)?.amic()
}

pub fn smic(sample: &RealSample, permutations: usize, seed: u64) -> Result<AdjustedScore> {
    MicWithNull::compute(sample, &MicConfig::default(), permutations, seed)?.smic()
}

pub fn amic_alpha(sample: &RealSample, alpha: f64, permutations: usize, seed: u64) -> Result<AdjustedScore> {
    check_alpha(alpha)?;
    MicWithNull::compute(sample, &MicConfig::default(), permutations, seed)?.amic_alpha(alpha)
}

pub fn sgini(table: &ContingencyTable) -> Result<AdjustedScore> {
    let null = gini_null_moments(table)?;
    Ok(standardize(gini_gain(table), &null)?.tagged(MeasureKind::Gini))
}

pub fn agini_alpha(table: &ContingencyTable, alpha: f64) -> Result<AdjustedScore> {
    let null = gini_null_moments(table)?;
    Ok(adjust_ranking(gini_gain(table), &null, alpha)?.tagged(MeasureKind::Gini))
}
