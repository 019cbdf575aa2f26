use std::fmt::Write as _;

use clap::Args;
use depadj::experiments::{rank_against_target, RankReport};
use depadj::nulls::DEFAULT_PERMUTATIONS;
use serde::Serialize;

use crate::common::{emit, score_spec, to_json, AdjustArg, InputArgs, MeasureArg};

#[derive(Debug, Args)]
pub struct RankArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub target: String,
    #[arg(long, value_enum, default_value_t = MeasureArg::R2)]
    pub measure: MeasureArg,
    #[arg(long, value_enum, default_value_t = AdjustArg::Raw)]
    pub adjust: AdjustArg,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    /// Smallest pairwise-complete sample a variable needs to be ranked.
    #[arg(long, default_value_t = 10)]
    pub min_n: usize,
    /// Rows to print and to average n over.
    #[arg(long, default_value_t = 10)]
    pub top_k: usize,
    #[arg(long, default_value_t = DEFAULT_PERMUTATIONS)]
    pub permutations: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Serialize)]
struct RankOutput<'a> {
    input: String,
    top_k: usize,
    top_k_average_n: f64,
    report: &'a RankReport,
}

pub fn run(args: &RankArgs) -> anyhow::Result<()> {
    let dataset = args.input.load()?;
    let score = score_spec(args.measure, args.adjust, args.alpha, args.permutations);
    let report = rank_against_target(&dataset, &args.target, &score, args.min_n, args.seed)?;
    let average_n = report.top_k_average_n(args.top_k);
    if args.json {
        let output = RankOutput {
            input: args.input.input.display().to_string(),
            top_k: args.top_k,
            top_k_average_n: average_n,
            report: &report,
        };
        return emit(&(to_json(&output)? + "\n"));
    }
    let mut out = String::new();
    writeln!(
        out,
        "# target={} score={} min_n={} permutations={} seed={}",
        report.target, report.measure, report.min_n, args.permutations, report.seed
    )?;
    writeln!(out, "rank\tvariable\tscore\traw\tn_used")?;
    for (i, e) in report.entries.iter().take(args.top_k).enumerate() {
        writeln!(out, "{}\t{}\t{:.6}\t{:.6}\t{}", i + 1, e.variable, e.score, e.raw, e.n_used)?;
    }
    writeln!(out, "top-{} average n: {:.2}", args.top_k.min(report.entries.len()), average_n)?;
    writeln!(out, "ranked: {}  skipped: {}", report.entries.len(), report.skipped.len())?;
    emit(&out)
}
