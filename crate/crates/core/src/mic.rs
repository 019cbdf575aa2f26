//! Maximal information coefficient.
//!
//! The search visits, for every grid size `rows × cols ≤ B(n)` and both axis
//! orientations, grids whose fixed axis is equipartitioned by mass and whose
//! free axis may be cut between any two consecutive distinct values. For a
//! fixed row partition the MI is additive over columns, so the best free-axis
//! partition with exactly `l` columns is found by dynamic programming over
//! clumps (runs of consecutive points that fall in the same row).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::{mutual_information, ContingencyTable};
use crate::sample::RealSample;

/// Axis-aligned grid given by strictly increasing cut points. A value `v`
/// falls into bin `#{cut < v}`, so a value equal to a cut goes left/down.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    x_cuts: Vec<f64>,
    y_cuts: Vec<f64>,
}

impl Grid {
    pub fn new(x_cuts: Vec<f64>, y_cuts: Vec<f64>) -> Result<Self> {
        for cuts in [&x_cuts, &y_cuts] {
            if cuts.windows(2).any(|w| !(w[0] < w[1])) || cuts.iter().any(|c| !c.is_finite()) {
                return Err(Error::InvalidConfig("grid cuts must be finite and strictly increasing".into()));
            }
        }
        Ok(Self { x_cuts, y_cuts })
    }

    pub fn rows(&self) -> usize {
        self.x_cuts.len() + 1
    }

    pub fn cols(&self) -> usize {
        self.y_cuts.len() + 1
    }

    pub fn x_cuts(&self) -> &[f64] {
        &self.x_cuts
    }

    pub fn y_cuts(&self) -> &[f64] {
        &self.y_cuts
    }

    fn bin(cuts: &[f64], v: f64) -> usize {
        cuts.partition_point(|&c| c < v)
    }

    /// Contingency table of the present pairs binned through the grid.
    pub fn bin_sample(&self, sample: &RealSample) -> Result<ContingencyTable> {
        let mut counts = vec![vec![0u64; self.cols()]; self.rows()];
        for (&x, &y) in sample.pairs() {
            counts[Self::bin(&self.x_cuts, x)][Self::bin(&self.y_cuts, y)] += 1;
        }
        ContingencyTable::from_counts(counts)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    /// Dynamic programming on the free axis.
    #[default]
    Approx,
    /// Enumerate every free-axis partition. Exponential; meant for n ≲ 30.
    ExhaustiveEquipartition,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MicConfig {
    pub alpha_exponent: f64,
    pub search_mode: SearchMode,
}

impl Default for MicConfig {
    fn default() -> Self {
        Self {
            alpha_exponent: 0.6,
            search_mode: SearchMode::Approx,
        }
    }
}

impl MicConfig {
    pub fn exhaustive() -> Self {
        Self {
            search_mode: SearchMode::ExhaustiveEquipartition,
            ..Self::default()
        }
    }

    /// Grid budget `max(4, ⌊n^a⌋)`.
    pub fn budget(&self, n: usize) -> usize {
        let b = ((n as f64).powf(self.alpha_exponent) + 1e-9).floor() as usize;
        b.max(4)
    }

    pub fn validate(&self) -> Result<()> {
        if self.alpha_exponent > 0.0 && self.alpha_exponent <= 1.0 {
            Ok(())
        } else {
            Err(Error::InvalidConfig(format!(
                "MIC exponent must lie in (0, 1], got {}",
                self.alpha_exponent
            )))
        }
    }
}

/// MI of the binned sample normalized by log2 min(rows, cols) of the grid.
pub fn normalized_mi(sample: &RealSample, grid: &Grid) -> Result<f64> {
    let (rows, cols) = (grid.rows(), grid.cols());
    if rows.min(cols) < 2 {
        return Err(Error::DegenerateGrid { rows, cols });
    }
    sample.require(2)?;
    let table = grid.bin_sample(sample)?;
    Ok(mutual_information(&table) / (rows.min(cols) as f64).log2())
}

/// Maximal normalized MI over the configured grid family.
pub fn mic(sample: &RealSample, config: &MicConfig) -> Result<f64> {
    config.validate()?;
    sample.require(4)?;
    let (xs, ys): (Vec<f64>, Vec<f64>) = sample.pairs().map(|(&x, &y)| (x, y)).unzip();
    let budget = config.budget(xs.len());
    let best = search_orientation(&ys, &xs, budget, config.search_mode)
        .max(search_orientation(&xs, &ys, budget, config.search_mode));
    Ok(best.clamp(0.0, 1.0))
}

/// Assign each point a row of a mass-balanced partition of `values` into at
/// most `rows` bins. Tied values always share a row. Returns the row index
/// per point and the number of rows actually used.
pub fn equipartition(values: &[f64], rows: usize) -> (Vec<usize>, usize) {
    let n = values.len();
    let order = argsort(values);
    let mut assign = vec![0usize; n];
    let mut row = 0usize;
    let mut row_size = 0usize;
    let mut placed = 0usize;
    let mut desired = n as f64 / rows as f64;
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        while j < n && values[order[j]] == values[order[i]] {
            j += 1;
        }
        let run = j - i;
        if row_size > 0
            && row + 1 < rows
            && (row_size as f64 + run as f64 - desired).abs() >= (row_size as f64 - desired).abs()
        {
            row += 1;
            row_size = 0;
            desired = (n - placed) as f64 / (rows - row) as f64;
        }
        for &k in &order[i..j] {
            assign[k] = row;
        }
        row_size += run;
        placed += run;
        i = j;
    }
    (assign, if n == 0 { 0 } else { row + 1 })
}

fn argsort(values: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    order
}

/// Row-count vectors of consecutive groups along the free axis. Points with
/// equal free values form one unsplittable group.
fn free_axis_blocks(free: &[f64], order: &[usize], assign: &[usize], rows: usize) -> Vec<Vec<u32>> {
    let mut blocks: Vec<Vec<u32>> = Vec::new();
    let mut i = 0;
    while i < order.len() {
        let mut counts = vec![0u32; rows];
        let mut j = i;
        while j < order.len() && free[order[j]] == free[order[i]] {
            counts[assign[order[j]]] += 1;
            j += 1;
        }
        blocks.push(counts);
        i = j;
    }
    blocks
}

/// Merge adjacent blocks that sit entirely in the same row. An optimal
/// partition never cuts inside such a run.
fn clumps(blocks: Vec<Vec<u32>>) -> Vec<Vec<u32>> {
    let pure_row = |b: &[u32]| {
        let mut nonzero = b.iter().enumerate().filter(|(_, &c)| c > 0);
        match (nonzero.next(), nonzero.next()) {
            (Some((r, _)), None) => Some(r),
            _ => None,
        }
    };
    let mut out: Vec<Vec<u32>> = Vec::with_capacity(blocks.len());
    for block in blocks {
        if let Some(last) = out.last_mut() {
            if let (Some(a), Some(b)) = (pure_row(last), pure_row(&block)) {
                if a == b {
                    last[a] += block[a];
                    continue;
                }
            }
        }
        out.push(block);
    }
    out
}

fn xlog2x(c: f64) -> f64 {
    if c > 0.0 {
        c * c.log2()
    } else {
        0.0
    }
}

/// Entropy (bits) of the row marginal.
fn row_entropy(assign: &[usize], rows: usize) -> f64 {
    let n = assign.len() as f64;
    let mut counts = vec![0usize; rows];
    for &r in assign {
        counts[r] += 1;
    }
    -counts.iter().map(|&c| xlog2x(c as f64 / n)).sum::<f64>()
}

/// Best normalized MI over grids with `fixed` equipartitioned into rows and
/// `free` partitioned into columns.
fn search_orientation(fixed: &[f64], free: &[f64], budget: usize, mode: SearchMode) -> f64 {
    let n = fixed.len();
    let free_order = argsort(free);
    let mut best = 0.0f64;
    for rows in 2..=budget / 2 {
        let max_cols = budget / rows;
        if max_cols < 2 {
            continue;
        }
        let (assign, used_rows) = equipartition(fixed, rows);
        if used_rows < 2 {
            continue;
        }
        let h_rows = row_entropy(&assign, used_rows);
        let blocks = free_axis_blocks(free, &free_order, &assign, used_rows);
        let per_cols = match mode {
            SearchMode::Approx => dp_best_by_columns(&clumps(blocks), used_rows, max_cols, n),
            SearchMode::ExhaustiveEquipartition => enumerate_best_by_columns(&blocks, used_rows, max_cols, n),
        };
        for (cols, cond) in per_cols.into_iter().enumerate() {
            if cols < 2 {
                continue;
            }
            if let Some(cond) = cond {
                let mi = (h_rows - cond).max(0.0);
                best = best.max(mi / (cols.min(used_rows) as f64).log2());
            }
        }
    }
    best
}

/// Conditional row entropy contribution of one column, times n, in bits:
/// n_g·log n_g − Σ_r n_gr·log n_gr.
fn column_cost(counts: &[u32]) -> f64 {
    let total: u32 = counts.iter().sum();
    xlog2x(total as f64) - counts.iter().map(|&c| xlog2x(c as f64)).sum::<f64>()
}

/// For each column count `l ≤ max_cols`, the minimal H(rows | columns) over
/// partitions of the clumps into exactly `l` consecutive groups.
fn dp_best_by_columns(clumps: &[Vec<u32>], rows: usize, max_cols: usize, n: usize) -> Vec<Option<f64>> {
    let k = clumps.len();
    let max_cols = max_cols.min(k);
    let xl: Vec<f64> = (0..=n).map(|c| xlog2x(c as f64)).collect();
    let mut cost = vec![0.0f64; (k + 1) * (k + 1)];
    let mut buf = vec![0u32; rows];
    for i in 0..k {
        buf.iter_mut().for_each(|b| *b = 0);
        let (mut total, mut cell_sum) = (0usize, 0.0f64);
        for j in i + 1..=k {
            for (r, &c) in clumps[j - 1].iter().enumerate() {
                if c > 0 {
                    cell_sum += xl[(buf[r] + c) as usize] - xl[buf[r] as usize];
                    buf[r] += c;
                    total += c as usize;
                }
            }
            cost[i * (k + 1) + j] = xl[total] - cell_sum;
        }
    }
    let mut out = vec![None; max_cols + 1];
    // prev[j]: best cost of splitting clumps 0..j into l groups
    let mut prev: Vec<f64> = (0..=k).map(|j| cost[j]).collect();
    prev[0] = f64::INFINITY;
    if max_cols >= 1 {
        out[1] = Some(prev[k] / n as f64);
    }
    for l in 2..=max_cols {
        let mut cur = vec![f64::INFINITY; k + 1];
        for j in l..=k {
            let mut best = f64::INFINITY;
            for i in l - 1..j {
                let c = prev[i] + cost[i * (k + 1) + j];
                if c < best {
                    best = c;
                }
            }
            cur[j] = best;
        }
        out[l] = Some(cur[k] / n as f64);
        prev = cur;
    }
    out
}

/// Same contract as [`dp_best_by_columns`] by enumerating every cut set.
fn enumerate_best_by_columns(blocks: &[Vec<u32>], rows: usize, max_cols: usize, n: usize) -> Vec<Option<f64>> {
    let k = blocks.len();
    let max_cols = max_cols.min(k);
    let mut out: Vec<Option<f64>> = vec![None; max_cols + 1];
    let mut cuts: Vec<usize> = Vec::new();
    fn recurse(
        blocks: &[Vec<u32>],
        rows: usize,
        max_cols: usize,
        start: usize,
        cuts: &mut Vec<usize>,
        out: &mut [Option<f64>],
        n: usize,
    ) {
        let k = blocks.len();
        let cols = cuts.len() + 1;
        let mut bounds = Vec::with_capacity(cols + 1);
        bounds.push(0);
        bounds.extend_from_slice(cuts);
        bounds.push(k);
        let mut total = 0.0;
        let mut buf = vec![0u32; rows];
        for w in bounds.windows(2) {
            buf.iter_mut().for_each(|b| *b = 0);
            for block in &blocks[w[0]..w[1]] {
                for r in 0..rows {
                    buf[r] += block[r];
                }
            }
            total += column_cost(&buf);
        }
        let cond = total / n as f64;
        if out[cols].map_or(true, |best| cond < best) {
            out[cols] = Some(cond);
        }
        if cols == max_cols {
            return;
        }
        for cut in start..k {
            cuts.push(cut);
            recurse(blocks, rows, max_cols, cut + 1, cuts, out, n);
            cuts.pop();
        }
    }
    if k > 0 {
        recurse(blocks, rows, max_cols, 1, &mut cuts, &mut out, n);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::build_contingency;
    use crate::sample::PairedSample;

    fn line(n: usize) -> RealSample {
        let xs: Vec<f64> = (0..n).map(|i| i as f64).collect();
        RealSample::new(xs.clone(), xs).unwrap()
    }

    #[test]
    fn grid_validation() {
        assert!(Grid::new(vec![1.0, 1.0], vec![]).is_err());
        assert!(Grid::new(vec![2.0, 1.0], vec![]).is_err());
        let g = Grid::new(vec![0.5], vec![]).unwrap();
        assert_eq!((g.rows(), g.cols()), (2, 1));
        assert_eq!(normalized_mi(&line(10), &g).unwrap_err().code(), "degenerate-grid");
    }

    #[test]
    fn diagonal_median_split_is_one() {
        let g = Grid::new(vec![9.5], vec![9.5]).unwrap();
        assert!((normalized_mi(&line(20), &g).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn independent_grid_is_zero() {
        // each quadrant holds one point of a 2×2 lattice
        let s = RealSample::new(vec![0.0, 0.0, 1.0, 1.0], vec![0.0, 1.0, 0.0, 1.0]).unwrap();
        let g = Grid::new(vec![0.5], vec![0.5]).unwrap();
        assert!(normalized_mi(&s, &g).unwrap().abs() < 1e-15);
    }

    #[test]
    fn normalized_mi_composes_binning_and_mi() {
        let xs = vec![0.1, 0.4, 0.35, 0.8, 0.9, 0.2, 0.65, 0.55, 0.05, 0.7];
        let ys = vec![0.3, 0.1, 0.9, 0.5, 0.45, 0.8, 0.15, 0.6, 0.35, 0.95];
        let s = RealSample::new(xs.clone(), ys.clone()).unwrap();
        let g = Grid::new(vec![0.5], vec![0.3, 0.7]).unwrap();
        // categorize by hand and go through the categorical path
        let cx: Vec<u8> = xs.iter().map(|&x| (x > 0.5) as u8).collect();
        let cy: Vec<u8> = ys.iter().map(|&y| (y > 0.3) as u8 + (y > 0.7) as u8).collect();
        let table = build_contingency(&PairedSample::new(cx, cy).unwrap()).unwrap();
        let expected = mutual_information(&table) / 1.0;
        assert!((normalized_mi(&s, &g).unwrap() - expected).abs() < 1e-15);
    }

    #[test]
    fn equipartition_balances_and_keeps_ties() {
        let v: Vec<f64> = (0..20).map(|i| i as f64).collect();
        let (assign, used) = equipartition(&v, 3);
        assert_eq!(used, 3);
        let sizes: Vec<usize> = (0..3).map(|r| assign.iter().filter(|&&a| a == r).count()).collect();
        assert_eq!(sizes, vec![7, 6, 7]);

        let v = vec![1.0, 1.0, 1.0, 1.0, 1.0, 2.0, 3.0, 4.0];
        let (assign, used) = equipartition(&v, 2);
        assert_eq!(used, 2);
        assert!(assign[..5].iter().all(|&a| a == assign[0]));

        let (_, used) = equipartition(&[5.0; 6], 3);
        assert_eq!(used, 1);
    }

    #[test]
    fn monotone_relationship_scores_one() {
        let xs: Vec<f64> = (0..60).map(|i| i as f64 / 59.0).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x + 1.0).collect();
        let s = RealSample::new(xs, ys).unwrap();
        assert!((mic(&s, &MicConfig::default()).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn too_small_sample() {
        assert_eq!(mic(&line(3), &MicConfig::default()).unwrap_err().code(), "sample-too-small");
    }

    #[test]
    fn budget_floor() {
        let c = MicConfig::default();
        assert_eq!(c.budget(20), 6);
        assert_eq!(c.budget(32), 8);
        assert_eq!(c.budget(60), 11);
        assert_eq!(c.budget(80), 13);
        assert_eq!(c.budget(5), 4);
    }

    #[test]
    fn clump_dp_matches_enumeration_with_ties() {
        use rand::Rng;
        for seed in 0..40 {
            let mut rng = crate::rng::substream(seed, 9);
            let n = rng.gen_range(6..18);
            let xs: Vec<f64> = (0..n).map(|_| rng.gen_range(0..6) as f64).collect();
            let ys: Vec<f64> = (0..n).map(|_| rng.gen_range(0..5) as f64).collect();
            let s = RealSample::new(xs, ys).unwrap();
            let a = mic(&s, &MicConfig::default()).unwrap();
            let e = mic(&s, &MicConfig::exhaustive()).unwrap();
            assert!((a - e).abs() < 1e-12, "seed {seed}: {a} vs {e}");
        }
    }
}
