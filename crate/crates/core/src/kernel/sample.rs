use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Generator for one trial: a ChaCha8 stream selected by the trial index.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// `n` uniform draws on `[0, 1)` from stream `stream` of `seed`.
pub fn uniform_points(n: usize, seed: u64, stream: u64) -> Vec<f64> {
    let mut rng = trial_rng(seed, stream);
    (0..n).map(|_| rng.random::<f64>()).collect()
}

/// `n` i.i.d. uniform draws on `[0, 1)`, reproducible from `(seed, trial)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSet {
    pub seed: u64,
    pub trial: u32,
    pub n: usize,
    pub points: Vec<f64>,
}

impl SampleSet {
    pub fn draw(n: usize, seed: u64, trial: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptySample);
        }
        Ok(SampleSet {
            seed,
            trial,
            n,
            points: uniform_points(n, seed, u64::from(trial)),
        })
    }

    /// A sample with given points, for tests and replay.
    pub fn from_points(points: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptySample);
        }
        if points.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return Err(Error::ConfigInvalid("sample points must lie in [0, 1]".into()));
        }
        Ok(SampleSet {
            seed: 0,
            trial: 0,
            n: points.len(),
            points,
        })
    }
}
