use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::{train_forest, ForestConfig, ForestData, SplitCriterion};
use crate::error::{Error, Result};
use crate::rng::{derive_seed, substream};

/// α values tried by [`tune_alpha`] when the caller gives none.
pub const DEFAULT_ALPHA_GRID: [f64; 5] = [0.01, 0.05, 0.1, 0.2, 0.4];

/// Shuffle rows with `seed` and deal them into `folds` folds.
fn fold_assignment(rows: usize, folds: usize, seed: u64) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..rows).collect();
    order.shuffle(&mut substream(seed, 0));
    let mut out = vec![Vec::new(); folds];
    for (i, r) in order.into_iter().enumerate() {
        out[i % folds].push(r);
    }
    out.iter_mut().for_each(|f| f.sort_unstable());
    out
}

/// Mean held-out AUC over the folds of one shuffled split.
pub fn fold_auc(data: &ForestData, config: &ForestConfig, criterion: SplitCriterion, folds: usize, seed: u64) -> Result<f64> {
    if folds < 2 {
        return Err(Error::InvalidConfig(format!("need at least 2 folds, got {folds}")));
    }
    let assignment = fold_assignment(data.rows(), folds, seed);
    let mut total = 0.0;
    for (k, test_rows) in assignment.iter().enumerate() {
        let train_rows: Vec<usize> = assignment
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != k)
            .flat_map(|(_, f)| f.iter().copied())
            .collect();
        let mut train_rows = train_rows;
        train_rows.sort_unstable();
        let forest = train_forest(&data.subset(&train_rows), config, criterion, derive_seed(seed, k as u64 + 1))?;
        total += forest.auc(&data.subset(test_rows))?;
    }
    Ok(total / folds as f64)
}

/// Held-out AUC for each of `reps` independently shuffled k-fold splits.
pub fn cross_validate(
    data: &ForestData,
    config: &ForestConfig,
    criterion: SplitCriterion,
    reps: usize,
    folds: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    (0..reps)
        .map(|rep| fold_auc(data, config, criterion, folds, derive_seed(seed, rep as u64)))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TuneResult {
    pub best_alpha: f64,
    /// (α, mean validation AUC) in grid order.
    pub scores: Vec<(f64, f64)>,
}

/// Pick the α of AGini(α) with the best internal k-fold AUC on `data`.
/// Every α sees the same folds; ties go to the smaller α.
pub fn tune_alpha(data: &ForestData, config: &ForestConfig, grid: &[f64], folds: usize, seed: u64) -> Result<TuneResult> {
    if grid.is_empty() {
        return Err(Error::InvalidConfig("alpha grid is empty".into()));
    }
    let scores = grid
        .iter()
        .map(|&alpha| Ok((alpha, fold_auc(data, config, SplitCriterion::AGini { alpha }, folds, seed)?)))
        .collect::<Result<Vec<_>>>()?;
    let mut best = scores[0];
    for &(alpha, auc) in &scores[1..] {
        if auc > best.1 || (auc == best.1 && alpha < best.0) {
            best = (alpha, auc);
        }
    }
    Ok(TuneResult {
        best_alpha: best.0,
        scores,
    })
}
