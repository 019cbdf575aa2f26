use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::data::{Feature, ForestData};
use super::{score_split, SplitCriterion};
use crate::measures::ContingencyTable;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "type")]
pub enum Node {
    Leaf {
        distribution: Vec<f64>,
    },
    /// One child per category seen at training time.
    Categorical {
        feature: usize,
        branches: Vec<(u32, usize)>,
        majority: usize,
    },
    /// `value <= threshold` goes to `left`.
    Threshold {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
        majority: usize,
    },
}

/// Nodes in an arena; the root is node 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tree {
    pub nodes: Vec<Node>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TreeConfig {
    pub mtry: usize,
    pub max_depth: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
enum SplitRule {
    Categorical(Vec<u32>),
    Threshold(f64),
}

#[derive(Debug, Clone, PartialEq)]
struct Candidate {
    feature: usize,
    score: f64,
    rule: SplitRule,
}

impl Tree {
    /// Class distribution for `row` of `data`.
    pub fn predict(&self, data: &ForestData, row: usize) -> &[f64] {
        let mut at = 0;
        loop {
            match &self.nodes[at] {
                Node::Leaf { distribution } => return distribution,
                Node::Categorical {
                    feature,
                    branches,
                    majority,
                } => {
                    let code = match &data.features[*feature] {
                        Feature::Categorical(v) => v[row],
                        Feature::Real(_) => None,
                    };
                    at = code
                        .and_then(|c| branches.iter().find(|(b, _)| *b == c).map(|(_, child)| *child))
                        .unwrap_or(*majority);
                }
                Node::Threshold {
                    feature,
                    threshold,
                    left,
                    right,
                    majority,
                } => {
                    let value = match &data.features[*feature] {
                        Feature::Real(v) => v[row],
                        Feature::Categorical(_) => None,
                    };
                    at = match value {
                        Some(v) if v <= *threshold => *left,
                        Some(_) => *right,
                        None => *majority,
                    };
                }
            }
        }
    }

    /// Feature split on at the root, if the root is not a leaf.
    pub fn root_feature(&self) -> Option<usize> {
        match &self.nodes[0] {
            Node::Leaf { .. } => None,
            Node::Categorical { feature, .. } | Node::Threshold { feature, .. } => Some(*feature),
        }
    }

    pub fn depth(&self) -> usize {
        fn walk(nodes: &[Node], at: usize) -> usize {
            match &nodes[at] {
                Node::Leaf { .. } => 0,
                Node::Categorical { branches, .. } => 1 + branches.iter().map(|(_, c)| walk(nodes, *c)).max().unwrap_or(0),
                Node::Threshold { left, right, .. } => 1 + walk(nodes, *left).max(walk(nodes, *right)),
            }
        }
        walk(&self.nodes, 0)
    }
}

fn class_counts(data: &ForestData, rows: &[usize]) -> Vec<u64> {
    let mut counts = vec![0u64; data.n_classes()];
    for &r in rows {
        counts[data.labels[r]] += 1;
    }
    counts
}

fn distribution(counts: &[u64]) -> Vec<f64> {
    let total: u64 = counts.iter().sum();
    counts.iter().map(|&c| c as f64 / total as f64).collect()
}

/// Best multiway split on a categorical feature, if it has ≥ 2 categories
/// among `rows`.
fn categorical_candidate(
    codes: &[Option<u32>],
    data: &ForestData,
    rows: &[usize],
    criterion: SplitCriterion,
    feature: usize,
) -> Option<Candidate> {
    let mut seen: Vec<u32> = rows.iter().filter_map(|&r| codes[r]).collect();
    seen.sort_unstable();
    seen.dedup();
    if seen.len() < 2 {
        return None;
    }
    let mut counts = vec![vec![0u64; data.n_classes()]; seen.len()];
    for &r in rows {
        if let Some(c) = codes[r] {
            let i = seen.binary_search(&c).unwrap();
            counts[i][data.labels[r]] += 1;
        }
    }
    let table = ContingencyTable::from_counts(counts).ok()?;
    let score = score_split(&table, criterion).ok()?;
    Some(Candidate {
        feature,
        score,
        rule: SplitRule::Categorical(seen),
    })
}

/// Best binary threshold between consecutive distinct values.
fn threshold_candidate(
    values: &[Option<f64>],
    data: &ForestData,
    rows: &[usize],
    criterion: SplitCriterion,
    feature: usize,
) -> Option<Candidate> {
    let mut present: Vec<(f64, usize)> = rows.iter().filter_map(|&r| values[r].map(|v| (v, data.labels[r]))).collect();
    if present.len() < 2 {
        return None;
    }
    present.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut right = vec![0u64; data.n_classes()];
    for &(_, l) in &present {
        right[l] += 1;
    }
    let mut left = vec![0u64; data.n_classes()];
    let mut best: Option<Candidate> = None;
    for i in 0..present.len() - 1 {
        let (v, l) = present[i];
        left[l] += 1;
        right[l] -= 1;
        let next = present[i + 1].0;
        if v == next {
            continue;
        }
        let Ok(table) = ContingencyTable::from_counts(vec![left.clone(), right.clone()]) else {
            continue;
        };
        let Ok(score) = score_split(&table, criterion) else {
            continue;
        };
        if best.as_ref().map_or(true, |b| score > b.score) {
            best = Some(Candidate {
                feature,
                score,
                rule: SplitRule::Threshold(v + (next - v) / 2.0),
            });
        }
    }
    best
}

/// Grow one tree on `rows` of `data`.
pub fn build_tree<R: Rng>(data: &ForestData, rows: &[usize], config: &TreeConfig, criterion: SplitCriterion, rng: &mut R) -> Tree {
    let mut tree = Tree { nodes: Vec::new() };
    grow(data, rows.to_vec(), 0, config, criterion, rng, &mut tree);
    tree
}

fn grow<R: Rng>(
    data: &ForestData,
    rows: Vec<usize>,
    depth: usize,
    config: &TreeConfig,
    criterion: SplitCriterion,
    rng: &mut R,
    tree: &mut Tree,
) -> usize {
    let id = tree.nodes.len();
    let counts = class_counts(data, &rows);
    tree.nodes.push(Node::Leaf {
        distribution: distribution(&counts),
    });
    let pure = counts.iter().filter(|&&c| c > 0).count() < 2;
    if pure || rows.len() < 2 || config.max_depth.is_some_and(|d| depth >= d) || data.n_features() == 0 {
        return id;
    }

    let mtry = config.mtry.clamp(1, data.n_features());
    let mut subset = index::sample(rng, data.n_features(), mtry).into_vec();
    subset.sort_unstable();
    let mut best: Option<Candidate> = None;
    for f in subset {
        let candidate = match &data.features[f] {
            Feature::Categorical(codes) => categorical_candidate(codes, data, &rows, criterion, f),
            Feature::Real(values) => threshold_candidate(values, data, &rows, criterion, f),
        };
        if let Some(c) = candidate {
            if best.as_ref().map_or(true, |b| c.score > b.score) {
                best = Some(c);
            }
        }
    }
    // a split must beat the chance bar (raw Gini: strictly positive gain)
    let Some(best) = best.filter(|b| b.score > 0.0) else {
        return id;
    };

    match best.rule {
        SplitRule::Categorical(categories) => {
            let Feature::Categorical(codes) = &data.features[best.feature] else {
                unreachable!()
            };
            let mut parts: Vec<Vec<usize>> = vec![Vec::new(); categories.len()];
            let mut missing = Vec::new();
            for &r in &rows {
                match codes[r] {
                    Some(c) => parts[categories.binary_search(&c).unwrap()].push(r),
                    None => missing.push(r),
                }
            }
            let majority = (0..parts.len()).max_by_key(|&i| (parts[i].len(), std::cmp::Reverse(i))).unwrap();
            parts[majority].extend(missing);
            let mut branches = Vec::with_capacity(parts.len());
            let mut majority_node = 0;
            for (i, part) in parts.into_iter().enumerate() {
                let child = grow(data, part, depth + 1, config, criterion, rng, tree);
                if i == majority {
                    majority_node = child;
                }
                branches.push((categories[i], child));
            }
            tree.nodes[id] = Node::Categorical {
                feature: best.feature,
                branches,
                majority: majority_node,
            };
        }
        SplitRule::Threshold(threshold) => {
            let Feature::Real(values) = &data.features[best.feature] else {
                unreachable!()
            };
            let (mut left, mut right, mut missing) = (Vec::new(), Vec::new(), Vec::new());
            for &r in &rows {
                match values[r] {
                    Some(v) if v <= threshold => left.push(r),
                    Some(_) => right.push(r),
                    None => missing.push(r),
                }
            }
            let left_is_majority = left.len() >= right.len();
            if left_is_majority {
                left.extend(missing);
            } else {
                right.extend(missing);
            }
            let l = grow(data, left, depth + 1, config, criterion, rng, tree);
            let r = grow(data, right, depth + 1, config, criterion, rng, tree);
            tree.nodes[id] = Node::Threshold {
                feature: best.feature,
                threshold,
                left: l,
                right: r,
                majority: if left_is_majority { l } else { r },
            };
        }
    }
    id
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;

    fn config(mtry: usize) -> TreeConfig {
        TreeConfig { mtry, max_depth: None }
    }

    #[test]
    fn feature_equal_to_class_gives_depth_one() {
        let labels: Vec<usize> = (0..40).map(|i| i % 2).collect();
        let codes = labels.iter().map(|&l| Some(l as u32)).collect();
        let data = ForestData::new(vec![("f".into(), Feature::Categorical(codes))], labels.clone(), 2).unwrap();
        let rows: Vec<usize> = (0..40).collect();
        for criterion in [SplitCriterion::Gini, SplitCriterion::SGini, SplitCriterion::AGini { alpha: 0.05 }] {
            let tree = build_tree(&data, &rows, &config(1), criterion, &mut substream(1, 0));
            assert_eq!(tree.depth(), 1);
            for r in 0..40 {
                assert_eq!(tree.predict(&data, r)[labels[r]], 1.0);
            }
        }
    }

    #[test]
    fn constant_features_give_prior_leaf() {
        let labels = vec![0, 1, 1, 0, 1, 1];
        let data = ForestData::new(
            vec![
                ("c".into(), Feature::Categorical(vec![Some(2); 6])),
                ("r".into(), Feature::Real(vec![Some(1.5); 6])),
            ],
            labels,
            2,
        )
        .unwrap();
        let tree = build_tree(&data, &[0, 1, 2, 3, 4, 5], &config(2), SplitCriterion::Gini, &mut substream(1, 0));
        assert_eq!(tree.nodes.len(), 1);
        assert_eq!(tree.predict(&data, 0), &[1.0 / 3.0, 2.0 / 3.0]);
    }

    #[test]
    fn threshold_split_and_missing_routing() {
        let values: Vec<Option<f64>> = (0..20).map(|i| if i == 3 { None } else { Some(i as f64) }).collect();
        let labels: Vec<usize> = (0..20).map(|i| (i >= 12) as usize).collect();
        let data = ForestData::new(vec![("x".into(), Feature::Real(values))], labels, 2).unwrap();
        let rows: Vec<usize> = (0..20).collect();
        let tree = build_tree(&data, &rows, &config(1), SplitCriterion::Gini, &mut substream(1, 0));
        match &tree.nodes[0] {
            Node::Threshold { threshold, majority, left, .. } => {
                assert_eq!(*threshold, 11.5);
                assert_eq!(majority, left);
            }
            other => panic!("{other:?}"),
        }
        // missing row follows the majority (left) branch, which is pure class 0
        assert_eq!(tree.predict(&data, 3), &[1.0, 0.0]);
    }

    #[test]
    fn leaves_are_distributions_and_splits_partition() {
        use rand::Rng;
        let mut rng = substream(3, 0);
        let n = 150;
        let a: Vec<Option<u32>> = (0..n).map(|_| Some(rng.gen_range(0..4))).collect();
        let b: Vec<Option<f64>> = (0..n).map(|_| if rng.gen_bool(0.1) { None } else { Some(rng.gen()) }).collect();
        let labels: Vec<usize> = (0..n).map(|i| ((a[i].unwrap() >= 2) ^ rng.gen_bool(0.2)) as usize).collect();
        let data = ForestData::new(
            vec![("a".into(), Feature::Categorical(a)), ("b".into(), Feature::Real(b))],
            labels,
            2,
        )
        .unwrap();
        let rows: Vec<usize> = (0..n).collect();
        let tree = build_tree(&data, &rows, &config(2), SplitCriterion::Gini, &mut substream(3, 1));
        for node in &tree.nodes {
            match node {
                Node::Leaf { distribution } => {
                    assert!(distribution.iter().all(|&p| p >= 0.0));
                    assert!((distribution.iter().sum::<f64>() - 1.0).abs() < 1e-12);
                }
                Node::Categorical { branches, .. } => assert!(branches.len() >= 2),
                Node::Threshold { left, right, .. } => assert_ne!(left, right),
            }
        }
    }
}
