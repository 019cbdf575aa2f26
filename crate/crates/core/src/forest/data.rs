use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::dataset::{ColumnData, Dataset};
use crate::error::{Error, Result};

/// One encoded predictor.
#[derive(Debug, Clone, PartialEq)]
pub enum Feature {
    /// Category codes index into the schema's category list.
    Categorical(Vec<Option<u32>>),
    Real(Vec<Option<f64>>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureKind {
    Categorical,
    Real,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureSpec {
    pub name: String,
    pub kind: FeatureKind,
    /// Category names by code; empty for real features.
    pub categories: Vec<String>,
}

/// Column names, types and category maps a model was trained with.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Schema {
    pub target: String,
    pub classes: Vec<String>,
    pub features: Vec<FeatureSpec>,
}

/// Predictors and class labels ready for tree growing.
#[derive(Debug, Clone, PartialEq)]
pub struct ForestData {
    pub schema: Schema,
    pub features: Vec<Feature>,
    pub labels: Vec<usize>,
}

fn cell_label(data: &ColumnData, row: usize) -> Option<String> {
    match data {
        ColumnData::Real(v) => v[row].map(|x| format!("{x}")),
        ColumnData::Categorical(v) => v[row].clone(),
    }
}

impl ForestData {
    /// Wrap already-encoded features. Categorical codes are named by their
    /// number; classes are `0..classes`.
    pub fn new(features: Vec<(String, Feature)>, labels: Vec<usize>, classes: usize) -> Result<Self> {
        let rows = labels.len();
        let mut specs = Vec::with_capacity(features.len());
        let mut encoded = Vec::with_capacity(features.len());
        for (name, feature) in features {
            let len = match &feature {
                Feature::Categorical(v) => v.len(),
                Feature::Real(v) => v.len(),
            };
            if len != rows {
                return Err(Error::LengthMismatch(format!("feature `{name}` has {len} rows, expected {rows}")));
            }
            let spec = match &feature {
                Feature::Categorical(v) => {
                    let max = v.iter().flatten().max().map_or(0, |&m| m + 1);
                    FeatureSpec {
                        name,
                        kind: FeatureKind::Categorical,
                        categories: (0..max).map(|c| c.to_string()).collect(),
                    }
                }
                Feature::Real(_) => FeatureSpec {
                    name,
                    kind: FeatureKind::Real,
                    categories: Vec::new(),
                },
            };
            specs.push(spec);
            encoded.push(feature);
        }
        if labels.iter().any(|&l| l >= classes) {
            return Err(Error::InvalidConfig("class label out of range".into()));
        }
        Ok(Self {
            schema: Schema {
                target: "class".into(),
                classes: (0..classes).map(|c| c.to_string()).collect(),
                features: specs,
            },
            features: encoded,
            labels,
        })
    }

    /// Encode every non-target column of `dataset`; rows with a missing
    /// target are dropped. Class names are sorted.
    pub fn from_dataset(dataset: &Dataset, target: &str) -> Result<Self> {
        let target_index = dataset.index_of(target)?;
        let target_col = &dataset.columns()[target_index];
        let mut classes: Vec<String> = (0..dataset.rows()).filter_map(|r| cell_label(&target_col.data, r)).collect();
        classes.sort();
        classes.dedup();
        let features = dataset
            .columns()
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != target_index)
            .map(|(_, c)| match &c.data {
                ColumnData::Real(_) => FeatureSpec {
                    name: c.name.clone(),
                    kind: FeatureKind::Real,
                    categories: Vec::new(),
                },
                ColumnData::Categorical(values) => {
                    let mut categories: Vec<String> = Vec::new();
                    for v in values.iter().flatten() {
                        if !categories.contains(v) {
                            categories.push(v.clone());
                        }
                    }
                    FeatureSpec {
                        name: c.name.clone(),
                        kind: FeatureKind::Categorical,
                        categories,
                    }
                }
            })
            .collect();
        let schema = Schema {
            target: target.to_string(),
            classes,
            features,
        };
        Self::with_schema(dataset, &schema)
    }

    /// Encode `dataset` through an existing schema. Unknown categories and
    /// unknown classes become missing.
    pub fn with_schema(dataset: &Dataset, schema: &Schema) -> Result<Self> {
        let target_col = dataset.column(&schema.target)?;
        let class_index: HashMap<&str, usize> = schema.classes.iter().enumerate().map(|(i, c)| (c.as_str(), i)).collect();
        let rows: Vec<usize> = (0..dataset.rows())
            .filter(|&r| {
                cell_label(&target_col.data, r).is_some_and(|l| class_index.contains_key(l.as_str()))
            })
            .collect();
        let labels = rows
            .iter()
            .map(|&r| class_index[cell_label(&target_col.data, r).unwrap().as_str()])
            .collect();
        let features = schema
            .features
            .iter()
            .map(|spec| {
                let column = dataset.column(&spec.name)?;
                match (spec.kind, &column.data) {
                    (FeatureKind::Real, ColumnData::Real(v)) => Ok(Feature::Real(rows.iter().map(|&r| v[r]).collect())),
                    (FeatureKind::Categorical, data) => {
                        let codes: HashMap<&str, u32> =
                            spec.categories.iter().enumerate().map(|(i, c)| (c.as_str(), i as u32)).collect();
                        Ok(Feature::Categorical(
                            rows.iter()
                                .map(|&r| cell_label(data, r).and_then(|l| codes.get(l.as_str()).copied()))
                                .collect(),
                        ))
                    }
                    (FeatureKind::Real, ColumnData::Categorical(_)) => Err(Error::IncompatibleColumn {
                        column: spec.name.clone(),
                        expected: "real",
                        found: "categorical",
                    }),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            schema: schema.clone(),
            features,
            labels,
        })
    }

    pub fn rows(&self) -> usize {
        self.labels.len()
    }

    pub fn n_classes(&self) -> usize {
        self.schema.classes.len()
    }

    pub fn n_features(&self) -> usize {
        self.features.len()
    }

    /// Number of distinct classes among `rows`.
    pub fn classes_present(&self, rows: &[usize]) -> usize {
        let mut seen = vec![false; self.n_classes()];
        for &r in rows {
            seen[self.labels[r]] = true;
        }
        seen.into_iter().filter(|&s| s).count()
    }

    /// Restrict to a subset of rows.
    pub fn subset(&self, rows: &[usize]) -> Self {
        Self {
            schema: self.schema.clone(),
            features: self
                .features
                .iter()
                .map(|f| match f {
                    Feature::Categorical(v) => Feature::Categorical(rows.iter().map(|&r| v[r]).collect()),
                    Feature::Real(v) => Feature::Real(rows.iter().map(|&r| v[r]).collect()),
                })
                .collect(),
            labels: rows.iter().map(|&r| self.labels[r]).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{read_csv, LoadOptions};

    #[test]
    fn encodes_dataset_and_reuses_schema() {
        let d = read_csv("a,b,y\nx,1.5,yes\nz,?,no\nx,2.5,?\n?,0.5,yes\n".as_bytes(), &LoadOptions::default()).unwrap();
        let data = ForestData::from_dataset(&d, "y").unwrap();
        assert_eq!(data.rows(), 3);
        assert_eq!(data.schema.classes, vec!["no", "yes"]);
        assert_eq!(data.labels, vec![1, 0, 1]);
        assert_eq!(data.features[0], Feature::Categorical(vec![Some(0), Some(1), None]));
        assert_eq!(data.features[1], Feature::Real(vec![Some(1.5), None, Some(0.5)]));

        let other = read_csv("y,b,a\nno,3.0,q\nyes,1.0,z\n".as_bytes(), &LoadOptions::default()).unwrap();
        let enc = ForestData::with_schema(&other, &data.schema).unwrap();
        assert_eq!(enc.features[0], Feature::Categorical(vec![None, Some(1)]));
        assert_eq!(enc.labels, vec![0, 1]);
    }
}
