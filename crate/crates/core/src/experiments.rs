//! Simulation harness: noise sweeps, selection-probability experiments,
//! the Gini category-inflation comparison, and ranking of dataset columns
//! against a target on pairwise-complete samples.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::adjust::{adjust_quantification, adjust_ranking, standardize, AdjustedScore, MicWithNull};
use crate::dataset::{ColumnType, Dataset};
use crate::error::{check_alpha, Error, Result};
use crate::measures::{gini_gain, pearson_r2, table_from_codes};
use crate::mic::{mic, MicConfig};
use crate::nulls::{r2_null, DEFAULT_PERMUTATIONS};
use crate::rng::{derive_seed, substream};
use crate::sample::{PairedSample, RealSample};
use crate::synth::{gen_relationship_stream, RelationSpec, Shape};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    R2,
    Mic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "scheme")]
pub enum Adjustment {
    Raw,
    Quantification,
    Standardized,
    Ranking { alpha: f64 },
}

/// Which estimator to compute and how to adjust it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoreSpec {
    pub measure: Measure,
    pub adjustment: Adjustment,
    /// Permutation budget of the MIC null; unused for r².
    pub permutations: usize,
    pub mic: MicConfig,
}

/// Raw estimate plus the adjusted score, when one was requested.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoreOutcome {
    pub raw: f64,
    pub adjusted: Option<AdjustedScore>,
}

impl ScoreOutcome {
    pub fn value(&self) -> f64 {
        self.adjusted.map_or(self.raw, |a| a.adjusted)
    }
}

impl ScoreSpec {
    pub fn new(measure: Measure, adjustment: Adjustment) -> Self {
        Self {
            measure,
            adjustment,
            permutations: DEFAULT_PERMUTATIONS,
            mic: MicConfig::default(),
        }
    }

    pub fn with_permutations(mut self, permutations: usize) -> Self {
        self.permutations = permutations;
        self
    }

    pub fn label(&self) -> String {
        let base = match self.measure {
            Measure::R2 => "r2",
            Measure::Mic => "MIC",
        };
        match self.adjustment {
            Adjustment::Raw => base.to_string(),
            Adjustment::Quantification => format!("A{base}"),
            Adjustment::Standardized => format!("S{base}"),
            Adjustment::Ranking { alpha } => format!("A{base}({alpha})"),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Adjustment::Ranking { alpha } = self.adjustment {
            check_alpha(alpha)?;
        }
        if self.measure == Measure::Mic && self.adjustment != Adjustment::Raw && self.permutations < 2 {
            return Err(Error::InvalidConfig(format!(
                "MIC adjustments need at least 2 permutations, got {}",
                self.permutations
            )));
        }
        Ok(())
    }

    /// Score a sample. `seed` drives the permutation null of MIC.
    pub fn evaluate(&self, sample: &RealSample, seed: u64) -> Result<ScoreOutcome> {
        match (self.measure, self.adjustment) {
            (Measure::R2, Adjustment::Raw) => Ok(ScoreOutcome {
                raw: pearson_r2(sample)?,
                adjusted: None,
            }),
            (Measure::Mic, Adjustment::Raw) => Ok(ScoreOutcome {
                raw: mic(sample, &self.mic)?,
                adjusted: None,
            }),
            (Measure::R2, adjustment) => {
                let raw = pearson_r2(sample)?;
                let null = r2_null(sample.n())?;
                let adjusted = match adjustment {
                    Adjustment::Quantification => adjust_quantification(raw, &null, 1.0)?,
                    Adjustment::Standardized => standardize(raw, &null)?,
                    Adjustment::Ranking { alpha } => adjust_ranking(raw, &null, alpha)?,
                    Adjustment::Raw => unreachable!(),
                };
                Ok(ScoreOutcome {
                    raw,
                    adjusted: Some(AdjustedScore {
                        measure: Some(crate::adjust::MeasureKind::R2),
                        ..adjusted
                    }),
                })
            }
            (Measure::Mic, adjustment) => {
                let batch = MicWithNull::compute(sample, &self.mic, self.permutations, seed)?;
                let adjusted = match adjustment {
                    Adjustment::Quantification => batch.amic()?,
                    Adjustment::Standardized => batch.smic()?,
                    Adjustment::Ranking { alpha } => batch.amic_alpha(alpha)?,
                    Adjustment::Raw => unreachable!(),
                };
                Ok(ScoreOutcome {
                    raw: batch.raw,
                    adjusted: Some(adjusted),
                })
            }
        }
    }

    pub fn score(&self, sample: &RealSample, seed: u64) -> Result<f64> {
        self.evaluate(sample, seed).map(|o| o.value())
    }
}

fn mean_and_se(values: &[f64]) -> (f64, f64) {
    let k = values.len() as f64;
    let mean = values.iter().sum::<f64>() / k;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (k - 1.0);
    (mean, (var / k).sqrt())
}

/// A generator of candidate samples: shape, size and noise level. The seed
/// comes from the experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub label: String,
    pub shape: Shape,
    pub n: usize,
    pub noise_fraction: f64,
}

impl Candidate {
    pub fn new(shape: Shape, n: usize, noise_fraction: f64) -> Self {
        Self {
            label: format!("n={n}"),
            shape,
            n,
            noise_fraction,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum TieRule {
    #[default]
    UniformRandom,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionTrialConfig {
    pub candidates: Vec<Candidate>,
    pub score: ScoreSpec,
    pub trials: usize,
    pub seed: u64,
    pub tie_rule: TieRule,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankResult {
    pub labels: Vec<String>,
    pub trials: usize,
    pub wins: Vec<usize>,
    pub selection_probability: Vec<f64>,
    /// Binomial standard error of each selection probability.
    pub probability_std_error: Vec<f64>,
    pub mean_score: Vec<f64>,
    pub score_std_error: Vec<f64>,
}

/// Probability that each candidate attains the highest score.
///
/// Trial `t` generates candidate `i` from substream `i` of a seed derived
/// from `(seed, t)`; ties are broken with substream `K` of the same seed.
pub fn selection_experiment(config: &SelectionTrialConfig) -> Result<RankResult> {
    let k = config.candidates.len();
    if k < 2 {
        return Err(Error::InvalidConfig("selection needs at least 2 candidates".into()));
    }
    if config.trials == 0 {
        return Err(Error::InvalidConfig("selection needs at least 1 trial".into()));
    }
    config.score.validate()?;
    let outcomes: Vec<(usize, Vec<f64>)> = (0..config.trials)
        .into_par_iter()
        .map(|t| {
            let trial_seed = derive_seed(config.seed, t as u64);
            let scores = config
                .candidates
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    let spec = RelationSpec {
                        shape: c.shape,
                        n: c.n,
                        noise_fraction: c.noise_fraction,
                        seed: trial_seed,
                    };
                    let sample = gen_relationship_stream(&spec, i as u64)?;
                    config.score.score(&sample, derive_seed(trial_seed, i as u64 + 1))
                })
                .collect::<Result<Vec<f64>>>()?;
            let best = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let tied: Vec<usize> = (0..k).filter(|&i| scores[i] == best).collect();
            let winner = match config.tie_rule {
                TieRule::UniformRandom if tied.len() > 1 => tied[substream(trial_seed, k as u64).gen_range(0..tied.len())],
                TieRule::UniformRandom => tied[0],
            };
            Ok((winner, scores))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut wins = vec![0usize; k];
    for (w, _) in &outcomes {
        wins[*w] += 1;
    }
    let trials = config.trials as f64;
    let selection_probability: Vec<f64> = wins.iter().map(|&w| w as f64 / trials).collect();
    let probability_std_error = selection_probability.iter().map(|p| (p * (1.0 - p) / trials).sqrt()).collect();
    let (mean_score, score_std_error) = (0..k)
        .map(|i| mean_and_se(&outcomes.iter().map(|(_, s)| s[i]).collect::<Vec<_>>()))
        .unzip();
    Ok(RankResult {
        labels: config.candidates.iter().map(|c| c.label.clone()).collect(),
        trials: config.trials,
        wins,
        selection_probability,
        probability_std_error,
        mean_score,
        score_std_error,
    })
}

/// Fraction of trials where Gini gain of an `x2_categories` variable
/// exceeds that of an `x1_categories` variable, both independent of a
/// binary target. Ties count one half.
pub fn gini_comparison_experiment(n: usize, trials: usize, seed: u64, x1_categories: u32, x2_categories: u32) -> Result<f64> {
    if n < 4 {
        return Err(Error::SampleTooSmall { needed: 4, got: n });
    }
    if trials == 0 || x1_categories == 0 || x2_categories == 0 {
        return Err(Error::InvalidConfig("trials and category counts must be positive".into()));
    }
    let total: f64 = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = substream(seed, t as u64);
            let y: Vec<usize> = (0..n).map(|_| rng.gen_range(0..2)).collect();
            let x1: Vec<usize> = (0..n).map(|_| rng.gen_range(0..x1_categories as usize)).collect();
            let x2: Vec<usize> = (0..n).map(|_| rng.gen_range(0..x2_categories as usize)).collect();
            let g1 = gini_gain(&table_from_codes(&x1, &y, x1_categories as usize, 2)?);
            let g2 = gini_gain(&table_from_codes(&x2, &y, x2_categories as usize, 2)?);
            Ok(if g2 > g1 {
                1.0
            } else if g2 == g1 {
                0.5
            } else {
                0.0
            })
        })
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .sum();
    Ok(total / trials as f64)
}

/// P(Gini of a ternary variable > Gini of a binary one), both independent
/// of a binary target.
pub fn gini_inflation_experiment(n: usize, trials: usize, seed: u64) -> Result<f64> {
    gini_comparison_experiment(n, trials, seed, 2, 3)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseSweepConfig {
    pub shapes: Vec<Shape>,
    pub ns: Vec<usize>,
    pub noise_levels: Vec<f64>,
    pub scores: Vec<ScoreSpec>,
    pub trials: usize,
    pub seed: u64,
}

/// Mean score of one (shape, n, noise, measure) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepCell {
    pub shape: Shape,
    pub n: usize,
    pub noise: f64,
    pub measure: String,
    pub mean: f64,
    pub std_error: f64,
    pub trials: usize,
}

/// Average scores over noise levels. Every measure in a cell is evaluated
/// on the same simulated samples.
pub fn noise_sweep(config: &NoiseSweepConfig) -> Result<Vec<SweepCell>> {
    if config.trials == 0 {
        return Err(Error::InvalidConfig("noise sweep needs at least 1 trial".into()));
    }
    for s in &config.scores {
        s.validate()?;
    }
    let mut cells = Vec::new();
    let mut cell_index = 0u64;
    for &shape in &config.shapes {
        for &n in &config.ns {
            for &noise in &config.noise_levels {
                let cell_seed = derive_seed(config.seed, cell_index);
                cell_index += 1;
                let spec = RelationSpec {
                    shape,
                    n,
                    noise_fraction: noise,
                    seed: cell_seed,
                };
                spec.validate()?;
                let per_trial: Vec<Vec<f64>> = (0..config.trials)
                    .into_par_iter()
                    .map(|t| {
                        let sample = gen_relationship_stream(&spec, t as u64)?;
                        let perm_seed = derive_seed(cell_seed, t as u64);
                        config.scores.iter().map(|s| s.score(&sample, perm_seed)).collect()
                    })
                    .collect::<Result<_>>()?;
                for (m, score) in config.scores.iter().enumerate() {
                    let values: Vec<f64> = per_trial.iter().map(|v| v[m]).collect();
                    let (mean, std_error) = mean_and_se(&values);
                    cells.push(SweepCell {
                        shape,
                        n,
                        noise,
                        measure: score.label(),
                        mean,
                        std_error,
                        trials: config.trials,
                    });
                }
            }
        }
    }
    Ok(cells)
}

/// Raw MIC of independent uniform pairs at one sample size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MicBaseline {
    pub n: usize,
    /// One value per trial, in trial order.
    pub values: Vec<f64>,
    pub mean: f64,
    pub std_error: f64,
}

/// Distribution of MIC under independence for each `n`. Size `ns[i]` uses
/// the seed derived from `(seed, i)` and trial `t` its substream `t`.
pub fn mic_baseline(ns: &[usize], trials: usize, seed: u64, config: &MicConfig) -> Result<Vec<MicBaseline>> {
    if trials == 0 {
        return Err(Error::InvalidConfig("MIC baseline needs at least 1 trial".into()));
    }
    config.validate()?;
    ns.iter()
        .enumerate()
        .map(|(i, &n)| {
            let spec = RelationSpec {
                shape: Shape::Independent,
                n,
                noise_fraction: 0.0,
                seed: derive_seed(seed, i as u64),
            };
            spec.validate()?;
            let values = (0..trials)
                .into_par_iter()
                .map(|t| mic(&gen_relationship_stream(&spec, t as u64)?, config))
                .collect::<Result<Vec<f64>>>()?;
            let (mean, std_error) = mean_and_se(&values);
            Ok(MicBaseline {
                n,
                values,
                mean,
                std_error,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankEntry {
    pub variable: String,
    pub raw: f64,
    pub score: f64,
    pub n_used: usize,
    pub adjusted: Option<AdjustedScore>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankReport {
    pub target: String,
    pub measure: String,
    pub min_n: usize,
    pub seed: u64,
    /// Highest score first; equal scores keep column order.
    pub entries: Vec<RankEntry>,
    /// Columns left out, with the reason.
    pub skipped: Vec<(String, String)>,
}

impl RankReport {
    /// Mean pairwise-complete n of the `k` best-ranked variables.
    pub fn top_k_average_n(&self, k: usize) -> f64 {
        let top = &self.entries[..k.min(self.entries.len())];
        if top.is_empty() {
            return 0.0;
        }
        top.iter().map(|e| e.n_used as f64).sum::<f64>() / top.len() as f64
    }
}

/// Score every real column against `target` on the rows where both are
/// present and rank by the selected score.
pub fn rank_against_target(dataset: &Dataset, target: &str, score: &ScoreSpec, min_n: usize, seed: u64) -> Result<RankReport> {
    if min_n < 4 {
        return Err(Error::InvalidConfig(format!("min_n must be at least 4, got {min_n}")));
    }
    score.validate()?;
    let target_index = dataset.index_of(target)?;
    dataset.columns()[target_index].as_real()?;

    let scored: Vec<(usize, std::result::Result<RankEntry, String>)> = dataset
        .columns()
        .par_iter()
        .enumerate()
        .filter(|(i, _)| *i != target_index)
        .map(|(i, column)| {
            if column.kind() != ColumnType::Real {
                return (i, Err(format!("{} column", column.kind().name())));
            }
            let sample = match dataset.real_pair(&column.name, target) {
                Ok(s) => s,
                Err(e) => return (i, Err(e.to_string())),
            };
            if sample.n() < min_n {
                return (i, Err(format!("n={} below min_n", sample.n())));
            }
            let entry = score.evaluate(&sample, derive_seed(seed, i as u64)).map(|o| RankEntry {
                variable: column.name.clone(),
                raw: o.raw,
                score: o.value(),
                n_used: sample.n(),
                adjusted: o.adjusted,
            });
            (i, entry.map_err(|e| e.to_string()))
        })
        .collect();

    let mut entries = Vec::new();
    let mut skipped = Vec::new();
    let mut any_eligible = false;
    for (i, result) in scored {
        match result {
            Ok(entry) => {
                any_eligible = true;
                entries.push(entry);
            }
            Err(reason) => skipped.push((dataset.columns()[i].name.clone(), reason)),
        }
    }
    if !any_eligible {
        return Err(Error::NoEligiblePairs(min_n));
    }
    // stable: equal scores keep column order
    entries.sort_by(|a, b| b.score.total_cmp(&a.score));
    Ok(RankReport {
        target: target.to_string(),
        measure: score.label(),
        min_n,
        seed,
        entries,
        skipped,
    })
}

/// Pairwise-complete real sample helper for callers holding raw columns.
pub fn pairwise_sample(xs: &[Option<f64>], ys: &[Option<f64>]) -> Result<RealSample> {
    PairedSample::from_options(xs.to_vec(), ys.to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::Column;
    use crate::synth::gen_missingness_suite;

    fn r2_raw() -> ScoreSpec {
        ScoreSpec::new(Measure::R2, Adjustment::Raw)
    }

    #[test]
    fn labels() {
        assert_eq!(ScoreSpec::new(Measure::R2, Adjustment::Standardized).label(), "Sr2");
        assert_eq!(ScoreSpec::new(Measure::Mic, Adjustment::Ranking { alpha: 0.05 }).label(), "AMIC(0.05)");
        assert_eq!(ScoreSpec::new(Measure::Mic, Adjustment::Quantification).label(), "AMIC");
    }

    #[test]
    fn ties_split_evenly() {
        let config = SelectionTrialConfig {
            candidates: vec![Candidate::new(Shape::Linear, 20, 0.0), Candidate::new(Shape::Linear, 20, 0.0)],
            score: r2_raw(),
            trials: 4000,
            seed: 3,
            tie_rule: TieRule::UniformRandom,
        };
        let r = selection_experiment(&config).unwrap();
        assert_eq!(r.wins.iter().sum::<usize>(), 4000);
        assert!((r.selection_probability.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let se = (0.25f64 / 4000.0).sqrt();
        assert!((r.selection_probability[0] - 0.5).abs() < 5.0 * se);
        assert_eq!(r.mean_score, vec![1.0, 1.0]);
    }

    #[test]
    fn exchangeable_candidates_are_uniform() {
        let config = SelectionTrialConfig {
            candidates: (0..4).map(|_| Candidate::new(Shape::Independent, 30, 0.0)).collect(),
            score: r2_raw(),
            trials: 4000,
            seed: 11,
            tie_rule: TieRule::UniformRandom,
        };
        let r = selection_experiment(&config).unwrap();
        for (p, se) in r.selection_probability.iter().zip(&r.probability_std_error) {
            assert!((p - 0.25).abs() < 5.0 * se.max(1e-3), "{:?}", r.selection_probability);
        }
    }

    #[test]
    fn selection_is_deterministic() {
        let config = SelectionTrialConfig {
            candidates: vec![Candidate::new(Shape::Independent, 20, 0.0), Candidate::new(Shape::Independent, 40, 0.0)],
            score: ScoreSpec::new(Measure::R2, Adjustment::Standardized),
            trials: 500,
            seed: 9,
            tie_rule: TieRule::UniformRandom,
        };
        assert_eq!(selection_experiment(&config).unwrap(), selection_experiment(&config).unwrap());
    }

    #[test]
    fn selection_config_errors() {
        let mut config = SelectionTrialConfig {
            candidates: vec![Candidate::new(Shape::Independent, 20, 0.0)],
            score: r2_raw(),
            trials: 10,
            seed: 9,
            tie_rule: TieRule::UniformRandom,
        };
        assert!(selection_experiment(&config).is_err());
        config.candidates.push(Candidate::new(Shape::Independent, 3, 0.0));
        assert_eq!(selection_experiment(&config).unwrap_err().code(), "sample-too-small");
    }

    #[test]
    fn gini_comparison_edges() {
        let p = gini_inflation_experiment(100, 1, 5).unwrap();
        assert!([0.0, 0.5, 1.0].contains(&p));
        let p = gini_comparison_experiment(100, 10_000, 5, 2, 2).unwrap();
        assert!((p - 0.5).abs() < 0.03, "{p}");
        assert!(gini_inflation_experiment(3, 10, 5).is_err());
    }

    #[test]
    fn sweep_noiseless_line() {
        let config = NoiseSweepConfig {
            shapes: vec![Shape::Linear],
            ns: vec![30],
            noise_levels: vec![0.0, 1.0],
            scores: vec![r2_raw(), ScoreSpec::new(Measure::R2, Adjustment::Quantification)],
            trials: 200,
            seed: 1,
        };
        let cells = noise_sweep(&config).unwrap();
        assert_eq!(cells.len(), 4);
        assert_eq!(cells[0].measure, "r2");
        assert_eq!(cells[0].mean, 1.0);
        assert_eq!(cells[1].measure, "Ar2");
        assert!((cells[3].mean).abs() < 4.0 * cells[3].std_error.max(1e-3));
    }

    fn dataset_with(columns: Vec<Column>) -> Dataset {
        Dataset::new(columns).unwrap()
    }

    #[test]
    fn identical_column_ranks_first() {
        let target: Vec<Option<f64>> = (0..30).map(|i| Some((i as f64 * 0.37).sin())).collect();
        let noise: Vec<Option<f64>> = (0..30).map(|i| Some((i as f64 * 1.91).cos())).collect();
        let d = dataset_with(vec![
            Column::real("noise", noise),
            Column::real("copy", target.clone()),
            Column::real("y", target),
            Column::categorical("label", vec![Some("a".into()); 30]),
        ]);
        let report = rank_against_target(&d, "y", &r2_raw(), 10, 0).unwrap();
        assert_eq!(report.entries[0].variable, "copy");
        assert!((report.entries[0].score - 1.0).abs() < 1e-12);
        assert_eq!(report.entries[0].n_used, 30);
        assert_eq!(report.top_k_average_n(1), 30.0);
        assert_eq!(report.skipped.len(), 1);
    }

    #[test]
    fn rank_errors() {
        let d = dataset_with(vec![
            Column::real("x", vec![Some(1.0), Some(2.0), None, Some(4.0), Some(5.0)]),
            Column::real("y", vec![Some(1.0), Some(3.0), Some(2.0), Some(5.0), Some(4.0)]),
        ]);
        assert_eq!(rank_against_target(&d, "z", &r2_raw(), 4, 0).unwrap_err().code(), "unknown-column");
        assert_eq!(rank_against_target(&d, "y", &r2_raw(), 5, 0).unwrap_err().code(), "no-eligible-pairs");
        assert_eq!(rank_against_target(&d, "y", &r2_raw(), 4, 0).unwrap().entries[0].n_used, 4);
    }

    #[test]
    fn equal_scores_keep_column_order() {
        let y: Vec<Option<f64>> = (0..12).map(|i| Some(i as f64)).collect();
        let d = dataset_with(vec![
            Column::real("b", y.clone()),
            Column::real("a", y.clone()),
            Column::real("y", y),
        ]);
        let report = rank_against_target(&d, "y", &r2_raw(), 4, 0).unwrap();
        let names: Vec<&str> = report.entries.iter().map(|e| e.variable.as_str()).collect();
        assert_eq!(names, vec!["b", "a"]);
    }

    /// A weak relation seen on all 100 rows against pure noise seen on 6
    /// rows. Raw r² mostly prefers the noise; Sr² prefers the real signal.
    #[test]
    fn standardization_prefers_large_n_evidence() {
        let replications = 200;
        let (mut raw_small_first, mut std_large_first) = (0, 0);
        for rep in 0..replications {
            let signal = gen_missingness_suite(
                &[100],
                &RelationSpec {
                    shape: Shape::Linear,
                    n: 100,
                    noise_fraction: 0.8,
                    seed: rep,
                },
            )
            .unwrap()
            .remove(0);
            let spurious = gen_missingness_suite(
                &[6],
                &RelationSpec {
                    shape: Shape::Independent,
                    n: 6,
                    noise_fraction: 0.0,
                    seed: rep + 10_000,
                },
            )
            .unwrap()
            .remove(0);
            let target: Vec<Option<f64>> = signal.ys().iter().map(|&v| Some(v)).collect();
            let x_signal: Vec<Option<f64>> = signal.xs().iter().map(|&v| Some(v)).collect();
            let x_spurious: Vec<Option<f64>> = (0..100).map(|i| spurious.xs().get(i).copied()).collect();
            let d = dataset_with(vec![
                Column::real("spurious", x_spurious),
                Column::real("signal", x_signal),
                Column::real("target", target),
            ]);
            let raw = rank_against_target(&d, "target", &r2_raw(), 4, rep).unwrap();
            let std = rank_against_target(&d, "target", &ScoreSpec::new(Measure::R2, Adjustment::Standardized), 4, rep).unwrap();
            raw_small_first += (raw.entries[0].variable == "spurious") as usize;
            std_large_first += (std.entries[0].variable == "signal") as usize;
        }
        assert!(raw_small_first * 2 > replications as usize, "raw picked small n {raw_small_first} times");
        assert!(std_large_first * 2 > replications as usize, "Sr2 picked large n {std_large_first} times");
    }

    #[test]
    fn mic_baseline_is_seeded_and_bounded() {
        let a = mic_baseline(&[20, 30], 50, 4, &MicConfig::default()).unwrap();
        let b = mic_baseline(&[20, 30], 50, 4, &MicConfig::default()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a[1].values.len(), 50);
        assert!(a.iter().flat_map(|c| &c.values).all(|v| (0.0..=1.0).contains(v)));
        assert!(mic_baseline(&[20], 0, 4, &MicConfig::default()).is_err());
    }
}
