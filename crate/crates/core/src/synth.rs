//! Synthetic samples: noisy functional relationships on [0,1]² and
//! independent categorical pairs.

use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::substream;
use crate::sample::{PairedSample, RealSample};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Shape {
    Linear,
    Quadratic,
    Cubic,
    FourthRoot,
    Independent,
}

impl Shape {
    pub const ALL: [Shape; 5] = [
        Shape::Linear,
        Shape::Quadratic,
        Shape::Cubic,
        Shape::FourthRoot,
        Shape::Independent,
    ];

    /// Noiseless Y for `x ∈ [0,1]`, always inside [0,1]. `None` for the
    /// independent shape.
    pub fn apply(self, x: f64) -> Option<f64> {
        match self {
            Shape::Linear => Some(x),
            Shape::Quadratic => Some((2.0 * x - 1.0).powi(2)),
            Shape::Cubic => Some(((2.0 * x - 1.0).powi(3) + 1.0) / 2.0),
            Shape::FourthRoot => Some(x.powf(0.25)),
            Shape::Independent => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Shape::Linear => "linear",
            Shape::Quadratic => "quadratic",
            Shape::Cubic => "cubic",
            Shape::FourthRoot => "fourth_root",
            Shape::Independent => "independent",
        }
    }
}

impl std::str::FromStr for Shape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Shape::ALL
            .into_iter()
            .find(|shape| shape.name() == s || (s == "fourth-root" && *shape == Shape::FourthRoot))
            .ok_or_else(|| Error::InvalidConfig(format!("unknown shape `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RelationSpec {
    pub shape: Shape,
    pub n: usize,
    pub noise_fraction: f64,
    pub seed: u64,
}

impl RelationSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n < 4 {
            return Err(Error::SampleTooSmall { needed: 4, got: self.n });
        }
        if !(0.0..=1.0).contains(&self.noise_fraction) {
            return Err(Error::InvalidConfig(format!(
                "noise fraction must lie in [0, 1], got {}",
                self.noise_fraction
            )));
        }
        Ok(())
    }

    /// Number of Y coordinates replaced by noise.
    pub fn noisy_points(&self) -> usize {
        (self.noise_fraction * self.n as f64).round() as usize
    }
}

/// Sample from substream 0 of `spec.seed`.
pub fn gen_relationship(spec: &RelationSpec) -> Result<RealSample> {
    gen_relationship_stream(spec, 0)
}

/// X uniform on [0,1], Y = f(X), then a uniformly chosen subset of
/// `round(noise·n)` points get an independent uniform Y.
pub fn gen_relationship_stream(spec: &RelationSpec, stream: u64) -> Result<RealSample> {
    spec.validate()?;
    let mut rng = substream(spec.seed, stream);
    let xs: Vec<f64> = (0..spec.n).map(|_| rng.gen::<f64>()).collect();
    let mut ys: Vec<f64> = match spec.shape {
        Shape::Independent => (0..spec.n).map(|_| rng.gen::<f64>()).collect(),
        shape => xs.iter().map(|&x| shape.apply(x).unwrap()).collect(),
    };
    for i in index::sample(&mut rng, spec.n, spec.noisy_points()) {
        ys[i] = rng.gen::<f64>();
    }
    RealSample::new(xs, ys)
}

/// Independent X and Y, each uniform over its categories (coded 0..k).
pub fn gen_categorical_independent(
    n: usize,
    x_categories: u32,
    y_categories: u32,
    seed: u64,
) -> Result<PairedSample<u32, u32>> {
    if n < 2 {
        return Err(Error::SampleTooSmall { needed: 2, got: n });
    }
    if x_categories == 0 || y_categories == 0 {
        return Err(Error::InvalidConfig("category counts must be at least 1".into()));
    }
    let mut rng = substream(seed, 0);
    let xs = (0..n).map(|_| rng.gen_range(0..x_categories)).collect();
    let ys = (0..n).map(|_| rng.gen_range(0..y_categories)).collect();
    PairedSample::new(xs, ys)
}

/// One sample per size in `n_values`; the i-th uses substream i of the
/// template's seed.
pub fn gen_missingness_suite(n_values: &[usize], template: &RelationSpec) -> Result<Vec<RealSample>> {
    n_values
        .iter()
        .enumerate()
        .map(|(i, &n)| gen_relationship_stream(&RelationSpec { n, ..*template }, i as u64))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{build_contingency, gini_gain, pearson_r2};

    fn spec(shape: Shape, n: usize, noise: f64) -> RelationSpec {
        RelationSpec {
            shape,
            n,
            noise_fraction: noise,
            seed: 42,
        }
    }

    #[test]
    fn noiseless_line_is_perfect() {
        let s = gen_relationship(&spec(Shape::Linear, 50, 0.0)).unwrap();
        assert_eq!(pearson_r2(&s).unwrap(), 1.0);
    }

    #[test]
    fn noise_replaces_exact_count() {
        let clean = gen_relationship(&spec(Shape::Quadratic, 30, 0.0)).unwrap();
        let noisy = gen_relationship(&spec(Shape::Quadratic, 30, 0.5)).unwrap();
        assert_eq!(clean.xs(), noisy.xs());
        let changed = clean.ys().iter().zip(noisy.ys()).filter(|(a, b)| a != b).count();
        assert_eq!(changed, 15);

        let full = gen_relationship(&spec(Shape::Cubic, 30, 1.0)).unwrap();
        let changed = full
            .xs()
            .iter()
            .zip(full.ys())
            .filter(|(&x, &y)| Shape::Cubic.apply(x).unwrap() != y)
            .count();
        assert_eq!(changed, 30);
    }

    #[test]
    fn shapes_stay_in_unit_square() {
        for shape in Shape::ALL {
            for k in 0..=1000 {
                if let Some(y) = shape.apply(k as f64 / 1000.0) {
                    assert!((0.0..=1.0).contains(&y), "{shape:?}");
                }
            }
        }
        assert_eq!(Shape::Cubic.apply(0.0), Some(0.0));
        assert_eq!(Shape::Cubic.apply(1.0), Some(1.0));
        assert_eq!(Shape::FourthRoot.apply(1.0), Some(1.0));
    }

    #[test]
    fn deterministic_given_seed() {
        let a = gen_relationship(&spec(Shape::FourthRoot, 40, 0.3)).unwrap();
        let b = gen_relationship(&spec(Shape::FourthRoot, 40, 0.3)).unwrap();
        assert_eq!(a, b);
        let c = gen_relationship(&RelationSpec { seed: 43, ..spec(Shape::FourthRoot, 40, 0.3) }).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn spec_validation() {
        assert!(gen_relationship(&spec(Shape::Linear, 3, 0.0)).is_err());
        assert!(gen_relationship(&spec(Shape::Linear, 10, 1.5)).is_err());
        assert_eq!("fourth-root".parse::<Shape>().unwrap(), Shape::FourthRoot);
        assert!("sine".parse::<Shape>().is_err());
    }

    #[test]
    fn single_category_has_zero_gain() {
        let s = gen_categorical_independent(50, 1, 3, 1).unwrap();
        assert_eq!(gini_gain(&build_contingency(&s).unwrap()), 0.0);
    }

    #[test]
    fn categorical_cells_are_uniform() {
        let draws = 100_000u64;
        let mut cells = [0u64; 4];
        for seed in 0..draws / 100 {
            let s = gen_categorical_independent(100, 2, 2, seed).unwrap();
            for (&x, &y) in s.pairs() {
                cells[(x * 2 + y) as usize] += 1;
            }
        }
        let se = (0.25f64 * 0.75 / draws as f64).sqrt();
        for c in cells {
            assert!((c as f64 / draws as f64 - 0.25).abs() < 3.0 * se, "{cells:?}");
        }
    }

    #[test]
    fn suite_sizes_and_composition() {
        let template = spec(Shape::Independent, 4, 0.0);
        let suite = gen_missingness_suite(&[20, 40, 60, 80, 100], &template).unwrap();
        assert_eq!(suite.iter().map(|s| s.n()).collect::<Vec<_>>(), vec![20, 40, 60, 80, 100]);
        assert!(gen_missingness_suite(&[], &template).unwrap().is_empty());
        let single = gen_missingness_suite(&[25], &template).unwrap();
        assert_eq!(single[0], gen_relationship(&RelationSpec { n: 25, ..template }).unwrap());
    }

    #[test]
    fn r2_decreases_with_noise() {
        let mut last = f64::INFINITY;
        for noise in [0.0, 0.25, 0.5, 0.75, 1.0] {
            let mean: f64 = (0..2000)
                .map(|t| {
                    let s = gen_relationship(&RelationSpec { seed: t, ..spec(Shape::Linear, 30, noise) }).unwrap();
                    pearson_r2(&s).unwrap()
                })
                .sum::<f64>()
                / 2000.0;
            assert!(mean <= last, "noise {noise}: {mean} > {last}");
            last = mean;
        }
    }
}
