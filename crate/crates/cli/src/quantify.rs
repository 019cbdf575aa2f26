use std::fmt::Write as _;

use clap::Args;
use depadj::adjust::AdjustedScore;
use depadj::experiments::ScoreSpec;
use depadj::nulls::{NullKind, DEFAULT_PERMUTATIONS};
use serde::{Deserialize, Serialize};

use crate::common::{emit, score_spec, to_json, AdjustArg, InputArgs, MeasureArg};

#[derive(Debug, Args)]
pub struct QuantifyArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub x: String,
    #[arg(long)]
    pub y: String,
    #[arg(long, value_enum, default_value_t = MeasureArg::R2)]
    pub measure: MeasureArg,
    #[arg(long, value_enum, default_value_t = AdjustArg::Raw)]
    pub adjust: AdjustArg,
    /// Significance level for `--adjust alpha`.
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    /// Permutations for the MIC null (30 is a fast preset).
    #[arg(long, default_value_t = DEFAULT_PERMUTATIONS)]
    pub permutations: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Emit the full report as JSON.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct QuantifyReport {
    pub input: String,
    pub x: String,
    pub y: String,
    pub score: ScoreSpec,
    pub label: String,
    pub seed: u64,
    pub n: usize,
    pub raw: f64,
    pub adjusted: Option<AdjustedScore>,
}

pub fn null_name(kind: NullKind) -> &'static str {
    match kind {
        NullKind::AnalyticBetaR2 => "analytic-beta-r2",
        NullKind::AnalyticGiniMoments => "analytic-gini-moments",
        NullKind::EmpiricalPermutation => "permutation",
    }
}

pub fn run(args: &QuantifyArgs) -> anyhow::Result<()> {
    let dataset = args.input.load()?;
    let sample = dataset.real_pair(&args.x, &args.y)?;
    let score = score_spec(args.measure, args.adjust, args.alpha, args.permutations);
    score.validate()?;
    let outcome = score.evaluate(&sample, args.seed)?;
    let report = QuantifyReport {
        input: args.input.input.display().to_string(),
        x: args.x.clone(),
        y: args.y.clone(),
        score,
        label: score.label(),
        seed: args.seed,
        n: sample.n(),
        raw: outcome.raw,
        adjusted: outcome.adjusted,
    };
    if args.json {
        return emit(&(to_json(&report)? + "\n"));
    }
    let mut out = String::new();
    writeln!(out, "pair: {} ~ {}", report.x, report.y)?;
    writeln!(out, "score: {}", report.label)?;
    writeln!(out, "n: {}", report.n)?;
    writeln!(out, "raw: {:.6}", report.raw)?;
    match &report.adjusted {
        None => writeln!(out, "null: none")?,
        Some(a) => {
            writeln!(out, "adjusted: {:.6}", a.adjusted)?;
            writeln!(
                out,
                "null: {} mean={:.6} sd={:.6}",
                null_name(a.null_ref.kind),
                a.null_ref.mean,
                a.null_ref.sd
            )?;
            if let Some(p) = a.null_ref.permutations {
                writeln!(out, "permutations: {p}")?;
            }
        }
    }
    writeln!(out, "seed: {}", report.seed)?;
    emit(&out)
}
