//! Area under the ROC curve.

use crate::error::{Error, Result};

/// Mann–Whitney AUC of `scores` for the positive class; ties count ½.
pub fn binary_auc(scores: &[f64], positive: &[bool]) -> Result<f64> {
    if scores.len() != positive.len() {
        return Err(Error::LengthMismatch(format!("scores={}, labels={}", scores.len(), positive.len())));
    }
    let n_pos = positive.iter().filter(|&&p| p).count();
    let n_neg = positive.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::DegenerateTarget);
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    // sum of midranks of the positives
    let mut rank_sum = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && scores[order[j]] == scores[order[i]] {
            j += 1;
        }
        let midrank = (i + j + 1) as f64 / 2.0;
        rank_sum += midrank * order[i..j].iter().filter(|&&k| positive[k]).count() as f64;
        i = j;
    }
    let (p, q) = (n_pos as f64, n_neg as f64);
    Ok((rank_sum - p * (p + 1.0) / 2.0) / (p * q))
}

/// AUC from class-probability rows. Two classes: AUC of class 1. More
/// classes: unweighted mean of one-vs-rest AUCs over classes present in
/// `labels` with at least one negative.
pub fn auc(probabilities: &[Vec<f64>], labels: &[usize], n_classes: usize) -> Result<f64> {
    if n_classes < 2 {
        return Err(Error::DegenerateTarget);
    }
    let one_vs_rest = |class: usize| {
        let scores: Vec<f64> = probabilities.iter().map(|p| p[class]).collect();
        let positive: Vec<bool> = labels.iter().map(|&l| l == class).collect();
        binary_auc(&scores, &positive)
    };
    if n_classes == 2 {
        return one_vs_rest(1);
    }
    let per_class: Vec<f64> = (0..n_classes).filter_map(|c| one_vs_rest(c).ok()).collect();
    if per_class.is_empty() {
        return Err(Error::DegenerateTarget);
    }
    Ok(per_class.iter().sum::<f64>() / per_class.len() as f64)
}
