//! Raw dependency estimators on finite samples: Pearson r², mutual
//! information and Gini gain, plus contingency-table construction.

use std::collections::HashMap;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sample::{PairedSample, RealSample};

/// r×c table of joint counts with its marginals. Rows index X categories,
/// columns index Y categories. Empty rows and columns never appear.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContingencyTable {
    counts: Vec<Vec<u64>>,
    row_marginals: Vec<u64>,
    col_marginals: Vec<u64>,
    n: u64,
}

impl ContingencyTable {
    /// Build from a count grid, dropping all-zero rows and columns.
    pub fn from_counts(counts: Vec<Vec<u64>>) -> Result<Self> {
        let cols = counts.first().map_or(0, Vec::len);
        if counts.iter().any(|row| row.len() != cols) {
            return Err(Error::LengthMismatch("contingency rows differ in length".into()));
        }
        let col_sums: Vec<u64> = (0..cols).map(|j| counts.iter().map(|row| row[j]).sum()).collect();
        let keep_cols: Vec<usize> = (0..cols).filter(|&j| col_sums[j] > 0).collect();
        let counts: Vec<Vec<u64>> = counts
            .into_iter()
            .filter(|row| row.iter().any(|&c| c > 0))
            .map(|row| keep_cols.iter().map(|&j| row[j]).collect())
            .collect();
        let n: u64 = counts.iter().flatten().sum();
        if n == 0 {
            return Err(Error::EmptySample);
        }
        Ok(Self::from_parts(counts))
    }

    /// Counts assumed free of empty rows/columns.
    pub(crate) fn from_parts(counts: Vec<Vec<u64>>) -> Self {
        let row_marginals: Vec<u64> = counts.iter().map(|row| row.iter().sum()).collect();
        let cols = counts.first().map_or(0, Vec::len);
        let col_marginals: Vec<u64> = (0..cols).map(|j| counts.iter().map(|row| row[j]).sum()).collect();
        let n = row_marginals.iter().sum();
        Self {
            counts,
            row_marginals,
            col_marginals,
            n,
        }
    }

    pub fn counts(&self) -> &[Vec<u64>] {
        &self.counts
    }

    pub fn row_marginals(&self) -> &[u64] {
        &self.row_marginals
    }

    pub fn col_marginals(&self) -> &[u64] {
        &self.col_marginals
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn rows(&self) -> usize {
        self.counts.len()
    }

    pub fn cols(&self) -> usize {
        self.col_marginals.len()
    }

    /// Σ_j (n_j^Y / n)^k for the Y marginal.
    pub(crate) fn col_power_sum(&self, k: i32) -> f64 {
        let n = self.n as f64;
        self.col_marginals.iter().map(|&c| (c as f64 / n).powi(k)).sum()
    }
}

/// Contingency table together with the category labels of its rows and
/// columns, in order of first appearance.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledTable<X, Y> {
    pub table: ContingencyTable,
    pub row_labels: Vec<X>,
    pub col_labels: Vec<Y>,
}

/// Tally the present pairs of a categorical sample.
pub fn build_contingency<X, Y>(sample: &PairedSample<X, Y>) -> Result<ContingencyTable>
where
    X: Eq + Hash + Clone,
    Y: Eq + Hash + Clone,
{
    build_contingency_labeled(sample).map(|t| t.table)
}

pub fn build_contingency_labeled<X, Y>(sample: &PairedSample<X, Y>) -> Result<LabeledTable<X, Y>>
where
    X: Eq + Hash + Clone,
    Y: Eq + Hash + Clone,
{
    if sample.n() == 0 {
        return Err(Error::EmptySample);
    }
    let mut row_index: HashMap<&X, usize> = HashMap::new();
    let mut col_index: HashMap<&Y, usize> = HashMap::new();
    let mut row_labels = Vec::new();
    let mut col_labels = Vec::new();
    let mut cells: Vec<(usize, usize)> = Vec::with_capacity(sample.n());
    for (x, y) in sample.pairs() {
        let i = *row_index.entry(x).or_insert_with(|| {
            row_labels.push(x.clone());
            row_labels.len() - 1
        });
        let j = *col_index.entry(y).or_insert_with(|| {
            col_labels.push(y.clone());
            col_labels.len() - 1
        });
        cells.push((i, j));
    }
    let mut counts = vec![vec![0u64; col_labels.len()]; row_labels.len()];
    for (i, j) in cells {
        counts[i][j] += 1;
    }
    Ok(LabeledTable {
        table: ContingencyTable::from_parts(counts),
        row_labels,
        col_labels,
    })
}

/// Tally integer-coded pairs into a `rows × cols` table. Codes must be
/// below the given bounds; empty rows/columns are dropped.
pub fn table_from_codes(xs: &[usize], ys: &[usize], rows: usize, cols: usize) -> Result<ContingencyTable> {
    if xs.len() != ys.len() {
        return Err(Error::LengthMismatch(format!("xs={}, ys={}", xs.len(), ys.len())));
    }
    let mut counts = vec![vec![0u64; cols]; rows];
    for (&x, &y) in xs.iter().zip(ys) {
        counts[x][y] += 1;
    }
    ContingencyTable::from_counts(counts)
}

/// Squared Pearson correlation over the present pairs.
pub fn pearson_r2(sample: &RealSample) -> Result<f64> {
    sample.require(3)?;
    // single pass co-moment update
    let (mut k, mut mx, mut my, mut sxx, mut syy, mut sxy) = (0.0f64, 0.0, 0.0, 0.0, 0.0, 0.0);
    for (&x, &y) in sample.pairs() {
        k += 1.0;
        let dx = x - mx;
        let dy = y - my;
        mx += dx / k;
        my += dy / k;
        sxx += dx * (x - mx);
        syy += dy * (y - my);
        sxy += dx * (y - my);
    }
    if !(sxx > 0.0) {
        return Err(Error::DegenerateVariance("x"));
    }
    if !(syy > 0.0) {
        return Err(Error::DegenerateVariance("y"));
    }
    let r2 = (sxy * sxy) / (sxx * syy);
    Ok(r2.clamp(0.0, 1.0))
}

/// Mutual information in bits.
pub fn mutual_information(table: &ContingencyTable) -> f64 {
    let n = table.n() as f64;
    let mut mi = 0.0;
    for (row, &ni) in table.counts().iter().zip(table.row_marginals()) {
        for (&nij, &nj) in row.iter().zip(table.col_marginals()) {
            if nij > 0 {
                let nij = nij as f64;
                mi += nij / n * (nij * n / (ni as f64 * nj as f64)).log2();
            }
        }
    }
    mi.max(0.0)
}

/// Gini gain: impurity of the Y marginal minus the X-weighted conditional
/// impurity.
pub fn gini_gain(table: &ContingencyTable) -> f64 {
    let n = table.n() as f64;
    let prior = 1.0 - table.col_power_sum(2);
    let conditional: f64 = table
        .counts()
        .iter()
        .zip(table.row_marginals())
        .map(|(row, &ni)| {
            let ni = ni as f64;
            let purity: f64 = row.iter().map(|&nij| (nij as f64 / ni).powi(2)).sum();
            ni / n * (1.0 - purity)
        })
        .sum();
    (prior - conditional).max(0.0)
}
