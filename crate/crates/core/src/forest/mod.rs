//! Random forest of multiway/threshold decision trees with chance-adjusted
//! Gini split criteria.

mod auc;
mod cv;
mod data;
mod tree;

pub use auc::{auc, binary_auc};
pub use cv::{cross_validate, fold_auc, tune_alpha, TuneResult, DEFAULT_ALPHA_GRID};
pub use data::{Feature, FeatureKind, FeatureSpec, ForestData, Schema};
pub use tree::{build_tree, Node, Tree, TreeConfig};

use rand::seq::index;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::adjust::{agini_alpha, sgini};
use crate::error::{check_alpha, Error, Result};
use crate::measures::{gini_gain, ContingencyTable};
use crate::rng::substream;

pub const MODEL_FORMAT: &str = "depadj-forest";
pub const MODEL_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum SplitCriterion {
    Gini,
    #[serde(rename = "sgini")]
    SGini,
    #[serde(rename = "agini_alpha")]
    AGini { alpha: f64 },
}

impl SplitCriterion {
    pub fn validate(&self) -> Result<()> {
        match self {
            SplitCriterion::AGini { alpha } => check_alpha(*alpha),
            _ => Ok(()),
        }
    }

    pub fn label(&self) -> String {
        match self {
            SplitCriterion::Gini => "Gini".into(),
            SplitCriterion::SGini => "SGini".into(),
            SplitCriterion::AGini { alpha } => format!("AGini({alpha})"),
        }
    }
}

/// Score a candidate split from its (branch × class) table.
pub fn score_split(table: &ContingencyTable, criterion: SplitCriterion) -> Result<f64> {
    match criterion {
        SplitCriterion::Gini => Ok(gini_gain(table)),
        SplitCriterion::SGini => sgini(table).map(|s| s.adjusted),
        SplitCriterion::AGini { alpha } => agini_alpha(table, alpha).map(|s| s.adjusted),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForestConfig {
    pub trees: usize,
    /// Features tried per node; `None` means ⌈√p⌉.
    pub mtry: Option<usize>,
    /// Fraction of rows drawn without replacement for each tree.
    pub subsample: f64,
    pub max_depth: Option<usize>,
}

impl Default for ForestConfig {
    fn default() -> Self {
        Self {
            trees: 500,
            mtry: None,
            subsample: 0.5,
            max_depth: None,
        }
    }
}

impl ForestConfig {
    pub fn resolved_mtry(&self, features: usize) -> usize {
        self.mtry.unwrap_or_else(|| (features as f64).sqrt().ceil() as usize).clamp(1, features.max(1))
    }

    /// Rows drawn for each tree: ⌊subsample · n⌋.
    pub fn subsample_size(&self, rows: usize) -> usize {
        ((self.subsample * rows as f64).floor() as usize).min(rows)
    }

    fn validate(&self) -> Result<()> {
        if self.trees == 0 {
            return Err(Error::InvalidConfig("forest needs at least one tree".into()));
        }
        if !(self.subsample > 0.0 && self.subsample <= 1.0) {
            return Err(Error::InvalidConfig(format!("subsample must lie in (0, 1], got {}", self.subsample)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Forest {
    pub format: String,
    pub version: u32,
    pub schema: Schema,
    pub config: ForestConfig,
    pub criterion: SplitCriterion,
    pub seed: u64,
    pub trees: Vec<Tree>,
}

/// Train `config.trees` trees, tree `t` on its own without-replacement
/// subsample drawn from substream `t` of `seed`.
pub fn train_forest(data: &ForestData, config: &ForestConfig, criterion: SplitCriterion, seed: u64) -> Result<Forest> {
    config.validate()?;
    criterion.validate()?;
    if data.rows() == 0 || data.n_classes() < 2 || data.classes_present(&(0..data.rows()).collect::<Vec<_>>()) < 2 {
        return Err(Error::DegenerateTarget);
    }
    let tree_config = TreeConfig {
        mtry: config.resolved_mtry(data.n_features()),
        max_depth: config.max_depth,
    };
    let size = config.subsample_size(data.rows()).max(1);
    let trees = (0..config.trees)
        .into_par_iter()
        .map(|t| {
            let mut rng = substream(seed, t as u64);
            let rows = index::sample(&mut rng, data.rows(), size).into_vec();
            build_tree(data, &rows, &tree_config, criterion, &mut rng)
        })
        .collect();
    Ok(Forest {
        format: MODEL_FORMAT.into(),
        version: MODEL_VERSION,
        schema: data.schema.clone(),
        config: *config,
        criterion,
        seed,
        trees,
    })
}

impl Forest {
    /// Mean of the trees' leaf distributions for `row`.
    pub fn predict_proba(&self, data: &ForestData, row: usize) -> Vec<f64> {
        let mut acc = vec![0.0; self.schema.classes.len()];
        for tree in &self.trees {
            for (a, p) in acc.iter_mut().zip(tree.predict(data, row)) {
                *a += p;
            }
        }
        let k = self.trees.len() as f64;
        acc.iter_mut().for_each(|a| *a /= k);
        acc
    }

    pub fn predict_all(&self, data: &ForestData) -> Vec<Vec<f64>> {
        (0..data.rows()).into_par_iter().map(|r| self.predict_proba(data, r)).collect()
    }

    /// AUC on an evaluation set encoded with this forest's schema.
    pub fn auc(&self, data: &ForestData) -> Result<f64> {
        auc(&self.predict_all(data), &data.labels, self.schema.classes.len())
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let forest: Forest = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        if forest.format != MODEL_FORMAT || forest.version != MODEL_VERSION {
            return Err(Error::Format(format!(
                "unsupported model {} v{}",
                forest.format, forest.version
            )));
        }
        Ok(forest)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nulls::gini_null_moments;
    use rand::Rng;

    fn table(c: &[&[u64]]) -> ContingencyTable {
        ContingencyTable::from_counts(c.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn score_split_examples() {
        assert_eq!(score_split(&table(&[&[50, 0], &[0, 50]]), SplitCriterion::Gini).unwrap(), 0.5);
        let a = score_split(&table(&[&[25, 25], &[25, 25]]), SplitCriterion::AGini { alpha: 0.05 }).unwrap();
        assert_eq!(format!("{a:.3}"), "-0.036");
        assert_eq!(
            score_split(&table(&[&[10, 30]]), SplitCriterion::SGini).unwrap_err().code(),
            "degenerate-null-variance"
        );
        assert_eq!(
            score_split(&table(&[&[10, 30], &[5, 5]]), SplitCriterion::AGini { alpha: 0.0 }).unwrap_err().code(),
            "bad-alpha"
        );
    }

    #[test]
    fn identical_tables_score_identically() {
        let t = table(&[&[12, 3, 5], &[4, 9, 2], &[6, 6, 1]]);
        for c in [SplitCriterion::Gini, SplitCriterion::SGini, SplitCriterion::AGini { alpha: 0.1 }] {
            assert_eq!(score_split(&t, c).unwrap(), score_split(&t.clone(), c).unwrap());
        }
    }

    #[test]
    fn fixed_shape_orderings_agree() {
        // same row marginals and class totals: the null is shared, so
        // adjusted scores are monotone in raw Gini
        let mut rng = substream(5, 0);
        let mut tables = Vec::new();
        for _ in 0..50 {
            let a = rng.gen_range(0..=30u64);
            let b = rng.gen_range(0..=30u64);
            tables.push(table(&[&[a, 30 - a], &[b, 30 - b], &[60 - a - b, a + b]]));
        }
        let tables: Vec<_> = tables.into_iter().filter(|t| t.rows() == 3 && t.cols() == 2).collect();
        let null = gini_null_moments(&tables[0]).unwrap();
        for t in &tables {
            assert_eq!(gini_null_moments(t).unwrap(), null);
        }
        for c in [SplitCriterion::SGini, SplitCriterion::AGini { alpha: 0.05 }] {
            for a in &tables {
                for b in &tables {
                    let (ga, gb) = (gini_gain(a), gini_gain(b));
                    if ga < gb {
                        assert!(score_split(a, c).unwrap() < score_split(b, c).unwrap());
                    }
                }
            }
        }
    }

    fn separable(n: usize, seed: u64) -> ForestData {
        let mut rng = substream(seed, 0);
        let x: Vec<Option<f64>> = (0..n).map(|_| Some(rng.gen())).collect();
        let z: Vec<Option<u32>> = (0..n).map(|_| Some(rng.gen_range(0..3))).collect();
        let labels = x.iter().map(|v| (v.unwrap() > 0.4) as usize).collect();
        ForestData::new(vec![("x".into(), Feature::Real(x)), ("z".into(), Feature::Categorical(z))], labels, 2).unwrap()
    }

    #[test]
    fn separable_training_auc_is_one() {
        let data = separable(200, 1);
        let config = ForestConfig {
            trees: 50,
            ..ForestConfig::default()
        };
        for c in [SplitCriterion::Gini, SplitCriterion::SGini, SplitCriterion::AGini { alpha: 0.05 }] {
            let forest = train_forest(&data, &config, c, 7).unwrap();
            assert_eq!(forest.auc(&data).unwrap(), 1.0, "{c:?}");
        }
    }

    #[test]
    fn training_is_deterministic_and_pool_independent() {
        let data = separable(120, 2);
        let config = ForestConfig {
            trees: 40,
            ..ForestConfig::default()
        };
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| train_forest(&data, &config, SplitCriterion::AGini { alpha: 0.1 }, 3).unwrap())
        };
        assert_eq!(run(1), run(3));
    }

    #[test]
    fn degenerate_target_is_rejected() {
        let data = ForestData::new(vec![("x".into(), Feature::Real(vec![Some(1.0); 5]))], vec![1; 5], 2).unwrap();
        assert_eq!(
            train_forest(&data, &ForestConfig::default(), SplitCriterion::Gini, 1).unwrap_err(),
            Error::DegenerateTarget
        );
    }

    #[test]
    fn model_json_round_trip() {
        let data = separable(60, 4);
        let forest = train_forest(&data, &ForestConfig { trees: 5, ..ForestConfig::default() }, SplitCriterion::SGini, 1).unwrap();
        let text = forest.to_json().unwrap();
        let back = Forest::from_json(&text).unwrap();
        assert_eq!(back, forest);
        let bad = text.replace("\"version\": 1", "\"version\": 99");
        assert_eq!(Forest::from_json(&bad).unwrap_err().code(), "format");
    }

    #[test]
    fn subsample_and_mtry_defaults() {
        let c = ForestConfig::default();
        assert_eq!(c.subsample_size(101), 50);
        assert_eq!(c.resolved_mtry(16), 4);
        assert_eq!(c.resolved_mtry(17), 5);
        assert_eq!(c.resolved_mtry(1), 1);
    }
}
