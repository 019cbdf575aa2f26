//! Paired observations with a pairwise-complete mask.

use crate::error::{Error, Result};

/// Aligned `(x, y)` observations. A pair takes part in estimation only when
/// its `present` flag is set (pairwise deletion of missing values).
#[derive(Debug, Clone, PartialEq)]
pub struct PairedSample<X, Y = X> {
    xs: Vec<X>,
    ys: Vec<Y>,
    present: Vec<bool>,
    n: usize,
}

pub type RealSample = PairedSample<f64, f64>;

impl<X, Y> PairedSample<X, Y> {
    /// All pairs present.
    pub fn new(xs: Vec<X>, ys: Vec<Y>) -> Result<Self> {
        let present = vec![true; xs.len()];
        Self::with_mask(xs, ys, present)
    }

    pub fn with_mask(xs: Vec<X>, ys: Vec<Y>, present: Vec<bool>) -> Result<Self> {
        if xs.len() != ys.len() || xs.len() != present.len() {
            return Err(Error::LengthMismatch(format!(
                "xs={}, ys={}, present={}",
                xs.len(),
                ys.len(),
                present.len()
            )));
        }
        let n = present.iter().filter(|&&p| p).count();
        Ok(Self { xs, ys, present, n })
    }

    /// Build from optional cells; a pair is present iff both sides are `Some`.
    pub fn from_options(xs: Vec<Option<X>>, ys: Vec<Option<Y>>) -> Result<Self>
    where
        X: Default,
        Y: Default,
    {
        if xs.len() != ys.len() {
            return Err(Error::LengthMismatch(format!("xs={}, ys={}", xs.len(), ys.len())));
        }
        let present: Vec<bool> = xs.iter().zip(&ys).map(|(x, y)| x.is_some() && y.is_some()).collect();
        let xs = xs.into_iter().map(Option::unwrap_or_default).collect();
        let ys = ys.into_iter().map(Option::unwrap_or_default).collect();
        Self::with_mask(xs, ys, present)
    }

    /// Number of present pairs.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Total number of rows, present or not.
    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn xs(&self) -> &[X] {
        &self.xs
    }

    pub fn ys(&self) -> &[Y] {
        &self.ys
    }

    pub fn present(&self) -> &[bool] {
        &self.present
    }

    /// Iterate over present pairs.
    pub fn pairs(&self) -> impl Iterator<Item = (&X, &Y)> + '_ {
        self.xs
            .iter()
            .zip(&self.ys)
            .zip(&self.present)
            .filter_map(|(pair, &p)| p.then_some(pair))
    }

    pub(crate) fn require(&self, needed: usize) -> Result<()> {
        if self.n < needed {
            Err(Error::SampleTooSmall { needed, got: self.n })
        } else {
            Ok(())
        }
    }
}

impl<X: Clone, Y: Clone> PairedSample<X, Y> {
    /// Drop absent pairs.
    pub fn compact(&self) -> Self {
        let (xs, ys): (Vec<X>, Vec<Y>) = self.pairs().map(|(x, y)| (x.clone(), y.clone())).unzip();
        let n = xs.len();
        Self { xs, ys, present: vec![true; n], n }
    }

    /// Same x-side, y-side replaced. Used by permutation nulls.
    pub(crate) fn with_ys(&self, ys: Vec<Y>) -> Self {
        debug_assert_eq!(ys.len(), self.xs.len());
        Self {
            xs: self.xs.clone(),
            ys,
            present: self.present.clone(),
            n: self.n,
        }
    }

    pub fn swapped(&self) -> PairedSample<Y, X> {
        PairedSample {
            xs: self.ys.clone(),
            ys: self.xs.clone(),
            present: self.present.clone(),
            n: self.n,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mask_counts_present_pairs() {
        let s = PairedSample::from_options(vec![Some(1.0), None, Some(3.0)], vec![Some(2.0), Some(1.0), None]).unwrap();
        assert_eq!(s.n(), 1);
        assert_eq!(s.len(), 3);
        assert_eq!(s.pairs().collect::<Vec<_>>(), vec![(&1.0, &2.0)]);
        assert_eq!(s.compact().len(), 1);
    }

    #[test]
    fn length_mismatch_is_rejected() {
        let err = PairedSample::new(vec![1.0, 2.0], vec![1.0]).unwrap_err();
        assert_eq!(err.code(), "length-mismatch");
    }
}
