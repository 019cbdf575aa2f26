//! Distributions of estimators under independence of X and Y.
//!
//! Three sources are supported: the Beta(1/2, (n−2)/2) law of r², the
//! multinomial-model mean and variance of Gini gain (with a Cantelli upper
//! bound standing in for its quantiles), and a Monte-Carlo permutation null
//! for any estimator.

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_alpha, Error, Result};
use crate::measures::ContingencyTable;
use crate::rng::substream;
use crate::sample::PairedSample;
use crate::special::beta_inv;

/// Absolute tolerance of the bisection behind Beta quantiles.
pub const BETA_QUANTILE_TOL: f64 = 1e-10;

/// Default Monte-Carlo budget for library callers.
pub const DEFAULT_PERMUTATIONS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NullKind {
    AnalyticBetaR2,
    AnalyticGiniMoments,
    EmpiricalPermutation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuantileSource {
    /// Inverse regularized incomplete Beta.
    Beta { a: f64, b: f64 },
    /// mean + sqrt(p/(1−p) · variance), an upper bound on the p-quantile.
    Cantelli,
    /// Permutation values in ascending order.
    Empirical(Vec<f64>),
}

/// Provenance of a null model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NullMeta {
    pub n: usize,
    pub permutations: Option<usize>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NullModel {
    pub kind: NullKind,
    pub mean: f64,
    pub variance: f64,
    pub quantile_source: QuantileSource,
    pub meta: NullMeta,
}

impl NullModel {
    pub fn sd(&self) -> f64 {
        self.variance.sqrt()
    }

    /// p-quantile of the null distribution (an upper bound for the Gini
    /// moment model). `p` must lie in [0, 1).
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(0.0..1.0).contains(&p) {
            return Err(Error::BadAlpha(1.0 - p));
        }
        Ok(match &self.quantile_source {
            QuantileSource::Beta { a, b } => beta_inv(p, *a, *b, BETA_QUANTILE_TOL),
            QuantileSource::Cantelli => self.mean + (p / (1.0 - p) * self.variance).sqrt(),
            QuantileSource::Empirical(values) => {
                let s = values.len();
                // value at rank ⌈p·S⌉ (1-based), rank 0 clamped to the minimum
                let rank = ((p * s as f64) - 1e-9).ceil().max(1.0) as usize;
                values[rank.min(s) - 1]
            }
        })
    }

    /// The (1−α)-quantile used by the ranking adjustment.
    pub fn upper_quantile(&self, alpha: f64) -> Result<f64> {
        check_alpha(alpha)?;
        match self.quantile_source {
            QuantileSource::Cantelli => cantelli_quantile(self, alpha),
            _ => self.quantile(1.0 - alpha),
        }
    }

    /// Stored permutation values, when empirical.
    pub fn samples(&self) -> Option<&[f64]> {
        match &self.quantile_source {
            QuantileSource::Empirical(v) => Some(v),
            _ => None,
        }
    }
}

/// r² under independence of bivariate normals: Beta(1/2, (n−2)/2).
pub fn r2_null(n: usize) -> Result<NullModel> {
    if n < 4 {
        return Err(Error::SampleTooSmall { needed: 4, got: n });
    }
    let nf = n as f64;
    Ok(NullModel {
        kind: NullKind::AnalyticBetaR2,
        mean: 1.0 / (nf - 1.0),
        variance: 2.0 * (nf - 2.0) / ((nf - 1.0).powi(2) * (nf + 1.0)),
        quantile_source: QuantileSource::Beta {
            a: 0.5,
            b: (nf - 2.0) / 2.0,
        },
        meta: NullMeta {
            n,
            permutations: None,
            seed: None,
        },
    })
}

/// Multinomial-model mean and variance of Gini gain for the table's
/// X counts and Y proportions.
pub fn gini_null_moments(table: &ContingencyTable) -> Result<NullModel> {
    gini_null_moments_from_marginals(table.row_marginals(), table.col_marginals())
}

pub fn gini_null_moments_from_marginals(row_marginals: &[u64], col_marginals: &[u64]) -> Result<NullModel> {
    if let Some(i) = row_marginals.iter().position(|&c| c == 0) {
        return Err(Error::EmptyCategory(i));
    }
    let n_int: u64 = row_marginals.iter().sum();
    if n_int == 0 || col_marginals.iter().sum::<u64>() != n_int {
        return Err(Error::LengthMismatch("row and column marginals disagree".into()));
    }
    let n = n_int as f64;
    let r = row_marginals.len() as f64;
    let p = |c: &u64| *c as f64 / n;
    let s2: f64 = col_marginals.iter().map(|c| p(c).powi(2)).sum();
    let s3: f64 = col_marginals.iter().map(|c| p(c).powi(3)).sum();
    let inv_rows: f64 = row_marginals.iter().map(|&c| 1.0 / c as f64).sum();

    let mean = (r - 1.0) / n * (1.0 - s2);
    let variance = ((r - 1.0) * (2.0 * s2 + 2.0 * s2 * s2 - 4.0 * s3)
        + (inv_rows - 2.0 * r / n + 1.0 / n) * (-2.0 * s2 - 6.0 * s2 * s2 + 8.0 * s3))
        / (n * n);
    Ok(NullModel {
        kind: NullKind::AnalyticGiniMoments,
        mean,
        variance: variance.max(0.0),
        quantile_source: QuantileSource::Cantelli,
        meta: NullMeta {
            n: n_int as usize,
            permutations: None,
            seed: None,
        },
    })
}

/// Cantelli upper bound on the (1−α)-quantile:
/// mean + sqrt((1−α)/α · variance).
pub fn cantelli_quantile(model: &NullModel, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    Ok(model.mean + ((1.0 - alpha) / alpha * model.variance).sqrt())
}

/// Monte-Carlo null from `permutations` uniform shuffles of the y-side of
/// the present pairs. Permutation `s` draws from substream `s` of `seed`,
/// so the output does not depend on the rayon pool size.
pub fn permutation_null<X, Y, F>(
    sample: &PairedSample<X, Y>,
    estimator: F,
    permutations: usize,
    seed: u64,
) -> Result<NullModel>
where
    X: Clone + Send + Sync,
    Y: Clone + Send + Sync,
    F: Fn(&PairedSample<X, Y>) -> Result<f64> + Sync,
{
    if permutations < 2 {
        return Err(Error::InsufficientPermutations(permutations));
    }
    let base = sample.compact();
    let mut values = (0..permutations)
        .into_par_iter()
        .map(|s| {
            let mut rng = substream(seed, s as u64);
            let mut ys = base.ys().to_vec();
            ys.shuffle(&mut rng);
            estimator(&base.with_ys(ys))
        })
        .collect::<Result<Vec<f64>>>()?;
    values.sort_by(f64::total_cmp);
    Ok(empirical_model(values, sample.n(), Some(seed)))
}

/// Null model from a set of draws; mean and unbiased variance of `values`.
pub fn empirical_model(mut values: Vec<f64>, n: usize, seed: Option<u64>) -> NullModel {
    values.sort_by(f64::total_cmp);
    let s = values.len() as f64;
    let mean = values.iter().sum::<f64>() / s;
    let variance = if values.len() > 1 {
        values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (s - 1.0)
    } else {
        0.0
    };
    NullModel {
        kind: NullKind::EmpiricalPermutation,
        mean,
        variance,
        meta: NullMeta {
            n,
            permutations: Some(values.len()),
            seed,
        },
        quantile_source: QuantileSource::Empirical(values),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{build_contingency, gini_gain};
    use crate::sample::RealSample;
    use approx::assert_relative_eq;

    fn marginal_model(rows: &[u64], cols: &[u64]) -> NullModel {
        gini_null_moments_from_marginals(rows, cols).unwrap()
    }

    #[test]
    fn r2_null_moments() {
        let m = r2_null(30).unwrap();
        assert_relative_eq!(m.mean, 1.0 / 29.0, epsilon = 1e-15);
        assert_relative_eq!(m.variance, 56.0 / 26071.0, epsilon = 1e-15);
        assert_eq!(r2_null(3).unwrap_err().code(), "sample-too-small");
    }

    #[test]
    fn r2_null_quantile_matches_reference_beta() {
        use statrs::distribution::{Beta, ContinuousCDF};
        let m = r2_null(30).unwrap();
        let reference = Beta::new(0.5, 14.0).unwrap();
        for &p in &[0.05, 0.5, 0.95, 0.99] {
            assert!((m.quantile(p).unwrap() - reference.inverse_cdf(p)).abs() < 1e-9);
        }
    }

    #[test]
    fn gini_moments_examples() {
        let m = marginal_model(&[50, 50], &[50, 50]);
        assert_relative_eq!(m.mean, 0.005, epsilon = 1e-15);
        assert_relative_eq!(m.variance, 4.95e-5, epsilon = 1e-15);

        let m = marginal_model(&[100], &[50, 50]);
        assert_eq!((m.mean, m.variance), (0.0, 0.0));

        // term1 = 1.0, factor (1/34 + 2/33 − 0.06 + 0.01)·(−0.5)
        let m = marginal_model(&[34, 33, 33], &[50, 50]);
        assert_relative_eq!(m.mean, 0.01, epsilon = 1e-15);
        let expected = (1.0 - 0.5 * (1.0 / 34.0 + 2.0 / 33.0 - 0.05)) / 1e4;
        assert_relative_eq!(m.variance, expected, epsilon = 1e-15);
        assert!((m.variance - 9.8e-5).abs() < 1e-7);
    }

    #[test]
    fn gini_moments_reject_empty_rows() {
        assert_eq!(
            gini_null_moments_from_marginals(&[10, 0], &[5, 5]).unwrap_err(),
            Error::EmptyCategory(1)
        );
    }

    #[test]
    fn cantelli_penalties() {
        let binary = marginal_model(&[50, 50], &[50, 50]);
        let ternary = marginal_model(&[34, 33, 33], &[50, 50]);
        assert_eq!(format!("{:.3}", cantelli_quantile(&binary, 0.05).unwrap()), "0.036");
        assert_eq!(format!("{:.3}", cantelli_quantile(&ternary, 0.05).unwrap()), "0.053");
        assert_eq!(cantelli_quantile(&binary, 1.0).unwrap(), binary.mean);
        assert_eq!(cantelli_quantile(&binary, 0.0).unwrap_err().code(), "bad-alpha");
        assert_eq!(cantelli_quantile(&binary, 1.5).unwrap_err().code(), "bad-alpha");
        assert_eq!(binary.upper_quantile(0.05).unwrap(), cantelli_quantile(&binary, 0.05).unwrap());
    }

    #[test]
    fn permutation_null_of_constant_estimator() {
        let s = RealSample::new(vec![1.0, 2.0, 3.0, 4.0], vec![4.0, 1.0, 2.0, 3.0]).unwrap();
        let m = permutation_null(&s, |_| Ok(0.25), 50, 3).unwrap();
        assert_eq!(m.mean, 0.25);
        assert_eq!(m.variance, 0.0);
        for p in [0.0, 0.3, 0.5, 0.99] {
            assert_eq!(m.quantile(p).unwrap(), 0.25);
        }
        assert_eq!(
            permutation_null(&s, |_| Ok(0.0), 1, 3).unwrap_err(),
            Error::InsufficientPermutations(1)
        );
    }

    #[test]
    fn empirical_quantile_uses_ceiling_rank() {
        let m = empirical_model((1..=100).map(|v| v as f64).collect(), 10, None);
        assert_eq!(m.upper_quantile(0.05).unwrap(), 95.0);
        assert_eq!(m.upper_quantile(0.01).unwrap(), 99.0);
        assert_eq!(m.upper_quantile(1.0).unwrap(), 1.0);
        assert_eq!(m.quantile(0.951).unwrap(), 96.0);
        assert_relative_eq!(m.mean, 50.5);
        assert_relative_eq!(m.variance, 841.6666666666666, epsilon = 1e-9);
    }

    #[test]
    fn permutation_preserves_marginals() {
        use rand::Rng;
        let mut rng = substream(4, 0);
        let xs: Vec<u8> = (0..60).map(|_| rng.gen_range(0..3)).collect();
        let ys: Vec<u8> = (0..60).map(|_| rng.gen_range(0..2)).collect();
        let s = PairedSample::new(xs, ys).unwrap();
        let t = build_contingency(&s).unwrap();
        let mut x_marg = t.row_marginals().to_vec();
        let mut y_marg = t.col_marginals().to_vec();
        x_marg.sort();
        y_marg.sort();
        permutation_null(
            &s,
            |p| {
                let pt = build_contingency(p)?;
                let mut a = pt.row_marginals().to_vec();
                let mut b = pt.col_marginals().to_vec();
                a.sort();
                b.sort();
                assert_eq!((a, b), (x_marg.clone(), y_marg.clone()));
                Ok(gini_gain(&pt))
            },
            200,
            1,
        )
        .unwrap();
    }

    #[test]
    fn permutation_null_is_pool_size_independent() {
        use rand::Rng;
        let mut rng = substream(8, 0);
        let xs: Vec<f64> = (0..25).map(|_| rng.gen()).collect();
        let ys: Vec<f64> = (0..25).map(|_| rng.gen()).collect();
        let s = RealSample::new(xs, ys).unwrap();
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| permutation_null(&s, crate::measures::pearson_r2, 300, 17).unwrap())
        };
        let a = run(1);
        let b = run(4);
        assert_eq!(a, b);
        assert_eq!(a.mean.to_bits(), b.mean.to_bits());
    }

    #[test]
    fn quantiles_are_monotone() {
        let models = [
            r2_null(20).unwrap(),
            marginal_model(&[30, 30, 40], &[20, 80]),
            empirical_model(vec![0.3, 0.1, 0.2, 0.7, 0.5], 5, Some(1)),
        ];
        for m in &models {
            let mut last = f64::NEG_INFINITY;
            for k in 0..100 {
                let q = m.quantile(k as f64 / 100.0).unwrap();
                assert!(q >= last, "{:?} at {k}", m.kind);
                last = q;
            }
        }
    }
}
