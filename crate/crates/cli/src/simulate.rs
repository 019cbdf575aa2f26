use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Subcommand};
use depadj::experiments::{
    gini_comparison_experiment, mic_baseline, noise_sweep, selection_experiment, Candidate, NoiseSweepConfig,
    ScoreSpec, SelectionTrialConfig, TieRule,
};
use depadj::mic::MicConfig;
use depadj::synth::Shape;
use serde::Serialize;

use crate::common::{emit, parse_score, write_file};

#[derive(Debug, Subcommand)]
pub enum SimulateCommand {
    /// Mean score per (shape, n, noise, measure) cell.
    NoiseSweep(NoiseSweepArgs),
    /// Probability that each sample size attains the top score.
    SelectionBias(SelectionArgs),
    /// How often a binary variable beats a ternary one on Gini gain under independence.
    GiniInflation(GiniArgs),
    /// MIC of independent uniform samples.
    MicBaseline(MicBaselineArgs),
}

fn parse_shape(s: &str) -> Result<Shape, String> {
    s.parse().map_err(|e| format!("{e}"))
}

#[derive(Debug, Args, Serialize)]
pub struct NoiseSweepArgs {
    #[arg(long, value_delimiter = ',', value_parser = parse_shape, default_value = "linear,quadratic,cubic,fourth-root")]
    pub shapes: Vec<Shape>,
    #[arg(long, value_delimiter = ',', default_value = "30")]
    pub ns: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1")]
    pub noise: Vec<f64>,
    /// Score tokens: r2, ar2, sr2, ar2@ALPHA, mic, amic, smic, amic@ALPHA.
    #[arg(long, value_delimiter = ',', value_parser = parse_score, default_value = "r2,ar2")]
    #[serde(skip)]
    pub scores: Vec<ScoreSpec>,
    #[arg(long, default_value_t = 30)]
    pub permutations: usize,
    #[arg(long, default_value_t = 500)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct SelectionArgs {
    #[arg(long, value_parser = parse_shape, default_value = "linear")]
    pub shape: Shape,
    #[arg(long, value_delimiter = ',', default_value = "20,40,60,80,100")]
    pub ns: Vec<usize>,
    /// Fraction of points replaced by noise; 1 makes every candidate independent.
    #[arg(long, default_value_t = 1.0)]
    pub noise: f64,
    #[arg(long, value_parser = parse_score, default_value = "r2")]
    #[serde(skip)]
    pub score: ScoreSpec,
    #[arg(long, default_value_t = 30)]
    pub permutations: usize,
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct GiniArgs {
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,
    #[arg(long, default_value_t = 2)]
    pub x1_categories: u32,
    #[arg(long, default_value_t = 3)]
    pub x2_categories: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct MicBaselineArgs {
    #[arg(long, value_delimiter = ',', default_value = "20,80")]
    pub ns: Vec<usize>,
    #[arg(long, default_value_t = 2000)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

/// CSV preamble echoing the command and its full configuration.
fn preamble<T: Serialize>(command: &str, config: &T, extra: &[(&str, String)]) -> anyhow::Result<String> {
    let mut out = format!("# depadj simulate {command}\n# config: {}\n", serde_json::to_string(config)?);
    for (key, value) in extra {
        writeln!(out, "# {key}: {value}")?;
    }
    Ok(out)
}

fn finish(csv: String, out: &Option<PathBuf>, summary: String) -> anyhow::Result<()> {
    if let Some(path) = out {
        write_file(path, &csv)?;
    }
    emit(&summary)
}

pub fn run(cmd: &SimulateCommand) -> anyhow::Result<()> {
    match cmd {
        SimulateCommand::NoiseSweep(a) => run_noise_sweep(a),
        SimulateCommand::SelectionBias(a) => run_selection(a),
        SimulateCommand::GiniInflation(a) => run_gini(a),
        SimulateCommand::MicBaseline(a) => run_mic_baseline(a),
    }
}

fn score_labels(scores: &[ScoreSpec]) -> String {
    scores.iter().map(|s| s.label()).collect::<Vec<_>>().join(";")
}

fn run_noise_sweep(a: &NoiseSweepArgs) -> anyhow::Result<()> {
    let config = NoiseSweepConfig {
        shapes: a.shapes.clone(),
        ns: a.ns.clone(),
        noise_levels: a.noise.clone(),
        scores: a.scores.iter().map(|s| s.with_permutations(a.permutations)).collect(),
        trials: a.trials,
        seed: a.seed,
    };
    let cells = noise_sweep(&config)?;
    let mut csv = preamble("noise-sweep", a, &[("scores", score_labels(&config.scores))])?;
    csv.push_str("shape,n,noise,measure,mean,std_error,trials\n");
    let mut summary = String::from("shape\tn\tnoise\tmeasure\tmean\tstd_error\n");
    for c in &cells {
        writeln!(csv, "{},{},{},{},{},{},{}", c.shape.name(), c.n, c.noise, c.measure, c.mean, c.std_error, c.trials)?;
        writeln!(summary, "{}\t{}\t{}\t{}\t{:.4}\t{:.4}", c.shape.name(), c.n, c.noise, c.measure, c.mean, c.std_error)?;
    }
    finish(csv, &a.out, summary)
}

fn run_selection(a: &SelectionArgs) -> anyhow::Result<()> {
    let config = SelectionTrialConfig {
        candidates: a.ns.iter().map(|&n| Candidate::new(a.shape, n, a.noise)).collect(),
        score: a.score.with_permutations(a.permutations),
        trials: a.trials,
        seed: a.seed,
        tie_rule: TieRule::UniformRandom,
    };
    let result = selection_experiment(&config)?;
    let label = config.score.label();
    let mut csv = preamble("selection-bias", a, &[("score", label.clone())])?;
    csv.push_str("shape,n,noise,measure,wins,probability,std_error,mean_score,score_std_error,trials\n");
    let mut summary = format!("# score={label} trials={} seed={}\nn\tprobability\tstd_error\tmean_score\n", a.trials, a.seed);
    for (i, &n) in a.ns.iter().enumerate() {
        writeln!(
            csv,
            "{},{},{},{},{},{},{},{},{},{}",
            a.shape.name(),
            n,
            a.noise,
            label,
            result.wins[i],
            result.selection_probability[i],
            result.probability_std_error[i],
            result.mean_score[i],
            result.score_std_error[i],
            result.trials
        )?;
        writeln!(
            summary,
            "{n}\t{:.4}\t{:.4}\t{:.4}",
            result.selection_probability[i], result.probability_std_error[i], result.mean_score[i]
        )?;
    }
    finish(csv, &a.out, summary)
}

fn run_gini(a: &GiniArgs) -> anyhow::Result<()> {
    let p = gini_comparison_experiment(a.n, a.trials, a.seed, a.x1_categories, a.x2_categories)?;
    let mut csv = preamble("gini-inflation", a, &[])?;
    csv.push_str("n,x1_categories,x2_categories,trials,probability\n");
    writeln!(csv, "{},{},{},{},{}", a.n, a.x1_categories, a.x2_categories, a.trials, p)?;
    finish(csv, &a.out, format!("probability: {p:.4}\n"))
}

fn run_mic_baseline(a: &MicBaselineArgs) -> anyhow::Result<()> {
    let config = MicConfig::default();
    let cells = mic_baseline(&a.ns, a.trials, a.seed, &config)?;
    let mut csv = preamble("mic-baseline", a, &[("mic", serde_json::to_string(&config)?)])?;
    csv.push_str("n,trial,mic\n");
    let mut summary = String::from("n\tmean\tstd_error\n");
    for c in &cells {
        for (t, v) in c.values.iter().enumerate() {
            writeln!(csv, "{},{},{}", c.n, t, v)?;
        }
        writeln!(summary, "{}\t{:.4}\t{:.4}", c.n, c.mean, c.std_error)?;
    }
    finish(csv, &a.out, summary)
}
