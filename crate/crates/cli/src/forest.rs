use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use anyhow::Context;
use clap::{Args, Subcommand, ValueEnum};
use depadj::forest::{
    cross_validate, train_forest, tune_alpha, Forest, ForestConfig, ForestData, SplitCriterion, DEFAULT_ALPHA_GRID,
};
use depadj::Error;
use serde::Serialize;

use crate::common::{emit, to_json, write_file, InputArgs};

#[derive(Debug, Subcommand)]
pub enum ForestCommand {
    /// Train on the whole input and write a model file.
    Train(TrainArgs),
    /// Held-out AUC: of a saved model on the input, or by repeated k-fold cross-validation.
    Eval(EvalArgs),
    /// Choose α for the AGini criterion by internal k-fold cross-validation.
    TuneAlpha(TuneArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CriterionArg {
    Gini,
    Sgini,
    Agini,
}

#[derive(Debug, Args, Serialize)]
pub struct TreeArgs {
    #[arg(long, value_enum, default_value_t = CriterionArg::Gini)]
    pub criterion: CriterionArg,
    /// Significance level of AGini.
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long, default_value_t = 500)]
    pub trees: usize,
    /// Features tried per split; defaults to the ceiling of the square root of the feature count.
    #[arg(long)]
    pub mtry: Option<usize>,
    /// Fraction of rows sampled without replacement for each tree.
    #[arg(long, default_value_t = 0.5)]
    pub subsample: f64,
    #[arg(long)]
    pub max_depth: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl TreeArgs {
    fn config(&self) -> ForestConfig {
        ForestConfig {
            trees: self.trees,
            mtry: self.mtry,
            subsample: self.subsample,
            max_depth: self.max_depth,
        }
    }

    fn criterion(&self) -> SplitCriterion {
        match self.criterion {
            CriterionArg::Gini => SplitCriterion::Gini,
            CriterionArg::Sgini => SplitCriterion::SGini,
            CriterionArg::Agini => SplitCriterion::AGini { alpha: self.alpha },
        }
    }
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub target: String,
    #[command(flatten)]
    pub tree: TreeArgs,
    /// Where to write the model.
    #[arg(long)]
    pub model: PathBuf,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Required unless a model supplies it.
    #[arg(long)]
    pub target: Option<String>,
    #[command(flatten)]
    pub tree: TreeArgs,
    /// Score this saved model instead of cross-validating.
    #[arg(long)]
    pub model: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    pub cv_reps: usize,
    #[arg(long, default_value_t = 2)]
    pub folds: usize,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct TuneArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub target: String,
    #[command(flatten)]
    pub tree: TreeArgs,
    #[arg(long, value_delimiter = ',')]
    pub alphas: Option<Vec<f64>>,
    #[arg(long, default_value_t = 2)]
    pub folds: usize,
    #[arg(long)]
    pub json: bool,
}

pub fn run(cmd: &ForestCommand) -> anyhow::Result<()> {
    match cmd {
        ForestCommand::Train(a) => run_train(a),
        ForestCommand::Eval(a) => run_eval(a),
        ForestCommand::TuneAlpha(a) => run_tune(a),
    }
}

fn run_train(a: &TrainArgs) -> anyhow::Result<()> {
    let data = ForestData::from_dataset(&a.input.load()?, &a.target)?;
    let forest = train_forest(&data, &a.tree.config(), a.tree.criterion(), a.tree.seed)?;
    write_file(&a.model, &(forest.to_json()? + "\n"))?;
    emit(&format!(
        "trained {} trees ({}, seed {}) on {} rows, {} features, {} classes\nmodel: {}\n",
        forest.trees.len(),
        forest.criterion.label(),
        forest.seed,
        data.rows(),
        data.n_features(),
        data.n_classes(),
        a.model.display()
    ))
}

#[derive(Debug, Serialize)]
struct EvalReport {
    mode: &'static str,
    criterion: String,
    seed: u64,
    rows: usize,
    /// One AUC per replication (a single value for a saved model).
    aucs: Vec<f64>,
    mean_auc: f64,
}

fn run_eval(a: &EvalArgs) -> anyhow::Result<()> {
    let dataset = a.input.load()?;
    let report = if let Some(path) = &a.model {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let forest = Forest::from_json(&text)?;
        if let Some(t) = &a.target {
            if *t != forest.schema.target {
                return Err(Error::InvalidConfig(format!("model predicts {:?}, not {t:?}", forest.schema.target)).into());
            }
        }
        let data = ForestData::with_schema(&dataset, &forest.schema)?;
        let auc = forest.auc(&data)?;
        EvalReport {
            mode: "model",
            criterion: forest.criterion.label(),
            seed: forest.seed,
            rows: data.rows(),
            aucs: vec![auc],
            mean_auc: auc,
        }
    } else {
        let target = a
            .target
            .as_deref()
            .ok_or_else(|| Error::InvalidConfig("--target is required without --model".into()))?;
        let data = ForestData::from_dataset(&dataset, target)?;
        let aucs = cross_validate(&data, &a.tree.config(), a.tree.criterion(), a.cv_reps, a.folds, a.tree.seed)?;
        EvalReport {
            mode: "cross-validation",
            criterion: a.tree.criterion().label(),
            seed: a.tree.seed,
            rows: data.rows(),
            mean_auc: aucs.iter().sum::<f64>() / aucs.len().max(1) as f64,
            aucs,
        }
    };
    if a.json {
        return emit(&(to_json(&report)? + "\n"));
    }
    let mut out = format!("# {} criterion={} seed={} rows={}\n", report.mode, report.criterion, report.seed, report.rows);
    if report.aucs.len() > 1 {
        for (i, v) in report.aucs.iter().enumerate() {
            writeln!(out, "rep {}: {v:.6}", i + 1)?;
        }
    }
    writeln!(out, "auc: {:.6}", report.mean_auc)?;
    emit(&out)
}

#[derive(Debug, Serialize)]
struct TuneReport {
    seed: u64,
    folds: usize,
    best_alpha: f64,
    scores: Vec<(f64, f64)>,
}

fn run_tune(a: &TuneArgs) -> anyhow::Result<()> {
    let data = ForestData::from_dataset(&a.input.load()?, &a.target)?;
    let grid = a.alphas.clone().unwrap_or_else(|| DEFAULT_ALPHA_GRID.to_vec());
    let result = tune_alpha(&data, &a.tree.config(), &grid, a.folds, a.tree.seed)?;
    let report = TuneReport {
        seed: a.tree.seed,
        folds: a.folds,
        best_alpha: result.best_alpha,
        scores: result.scores,
    };
    if a.json {
        return emit(&(to_json(&report)? + "\n"));
    }
    let mut out = format!("# folds={} seed={}\nalpha\tauc\n", report.folds, report.seed);
    for (alpha, auc) in &report.scores {
        writeln!(out, "{alpha}\t{auc:.6}")?;
    }
    writeln!(out, "best alpha: {}", report.best_alpha)?;
    emit(&out)
}
