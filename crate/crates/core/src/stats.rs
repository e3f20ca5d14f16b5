//! Seeded random streams and bootstrap error bars for Monte-Carlo error
//! rates.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_BOOTSTRAP_RESAMPLES: usize = 1000;
pub const MIN_BOOTSTRAP_RESAMPLES: usize = 100;

/// Reserved stream for bootstrap resampling so it never overlaps the shot
/// streams derived from the same seed.
const BOOTSTRAP_STREAM: u64 = u64::MAX;

/// Independent random stream `stream` under master seed `seed`. The same
/// (seed, stream) pair always yields the same sequence, whatever thread it
/// runs on.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Empirical error rate with a bootstrap standard deviation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorEstimate {
    pub p_err: f64,
    pub stderr: f64,
    pub shots: u64,
    pub seed: u64,
}

impl ErrorEstimate {
    /// Builds the estimate from `errors` failures out of `shots`, drawing
    /// bootstrap resamples from the seed's reserved stream.
    pub fn from_counts(errors: u64, shots: u64, seed: u64, resamples: usize) -> Result<Self> {
        if shots == 0 {
            return Err(Error::Domain("shots must be >= 1".into()));
        }
        let mut rng = rng_for(seed, BOOTSTRAP_STREAM);
        let stderr = bootstrap_std_binary(errors, shots, resamples, &mut rng)?;
        Ok(Self { p_err: errors as f64 / shots as f64, stderr, shots, seed })
    }

    /// `|p_err − reference| ≤ k·stderr`.
    pub fn within(&self, reference: f64, k: f64) -> bool {
        (self.p_err - reference).abs() <= k * self.stderr
    }
}

/// Bootstrap standard deviation of the mean of arbitrary shot-level values.
pub fn bootstrap_std<R: Rng>(values: &[f64], resamples: usize, rng: &mut R) -> Result<f64> {
    check_resamples(resamples)?;
    if values.is_empty() {
        return Err(Error::Domain("bootstrap of an empty sample".into()));
    }
    let n = values.len();
    let means: Vec<f64> =
        (0..resamples).map(|_| (0..n).map(|_| values[rng.gen_range(0..n)]).sum::<f64>() / n as f64).collect();
    Ok(sample_std(&means))
}

/// Bootstrap of 0/1 error indicators. Resampling `shots` indicators with
/// replacement draws Binomial(shots, errors/shots) ones, so each resample is
/// a single binomial draw rather than `shots` uniform picks.
pub fn bootstrap_std_binary<R: Rng>(errors: u64, shots: u64, resamples: usize, rng: &mut R) -> Result<f64> {
    check_resamples(resamples)?;
    if shots == 0 || errors > shots {
        return Err(Error::Domain(format!("{errors} errors out of {shots} shots")));
    }
    let p = errors as f64 / shots as f64;
    let binom = Binomial::new(shots, p).map_err(|e| Error::Domain(e.to_string()))?;
    let means: Vec<f64> = (0..resamples).map(|_| binom.sample(rng) as f64 / shots as f64).collect();
    Ok(sample_std(&means))
}

fn check_resamples(resamples: usize) -> Result<()> {
    if resamples < MIN_BOOTSTRAP_RESAMPLES {
        return Err(Error::Domain(format!(
            "bootstrap needs at least {MIN_BOOTSTRAP_RESAMPLES} resamples, got {resamples}"
        )));
    }
    Ok(())
}

fn sample_std(xs: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
}
