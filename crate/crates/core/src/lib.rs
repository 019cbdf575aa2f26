pub mod adjust;
pub mod dataset;
pub mod error;
pub mod experiments;
pub mod forest;
pub mod measures;
pub mod mic;
pub mod nulls;
pub mod rng;
pub mod sample;
pub mod special;
pub mod synth;

pub use error::{Error, Result};
