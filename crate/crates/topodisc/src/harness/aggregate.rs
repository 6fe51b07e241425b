use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::hop::AlgorithmSpec;
use crate::model::Channel;

use super::experiment::RunRecord;
use super::HarnessError;

/// Mean and standard error of the mean over uncensored discovery times.
/// A single observation reports a standard error of 0.
pub fn aggregate_ettd(ttds: &[u32]) -> Result<(f64, f64), HarnessError> {
    if ttds.is_empty() {
        return Err(HarnessError::EmptySample);
    }
    let n = ttds.len() as f64;
    let mean = ttds.iter().map(|&t| t as f64).sum::<f64>() / n;
    if ttds.len() == 1 {
        return Ok((mean, 0.0));
    }
    let var = ttds
        .iter()
        .map(|&t| (t as f64 - mean).powi(2))
        .sum::<f64>()
        / (n - 1.0);
    Ok((mean, (var / n).sqrt()))
}

/// Mean of per-batch maxima: the list is split in its given (generation)
/// order into consecutive batches of `batch_size`, and each batch
/// contributes its maximum.
pub fn aggregate_mttd(ttds: &[u32], batch_size: usize) -> Result<f64, HarnessError> {
    if ttds.is_empty() {
        return Err(HarnessError::EmptySample);
    }
    if batch_size == 0 || !ttds.len().is_multiple_of(batch_size) {
        return Err(HarnessError::IndivisibleBatches {
            len: ttds.len(),
            batch: batch_size,
        });
    }
    let maxima = ttds
        .chunks(batch_size)
        .map(|chunk| *chunk.iter().max().expect("chunks are non-empty") as f64);
    let n_batches = (ttds.len() / batch_size) as f64;
    Ok(maxima.sum::<f64>() / n_batches)
}

/// One aggregated cell of the comparison table: an algorithm at one common
/// set size. Metrics are empty when every run was censored (or, for the
/// batched maximum, when any run was).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateRow {
    pub algorithm: AlgorithmSpec,
    pub n_common: Channel,
    pub ettd: Option<f64>,
    pub ettd_stderr: Option<f64>,
    pub mttd: Option<f64>,
    pub censored_count: u32,
}

/// Folds sorted raw records into aggregate rows, one per
/// `(n_common, algorithm)` cell in the records' order.
///
/// Censored runs are excluded from the mean and counted; the batched
/// maximum is only defined when the cell is censor-free and complete (its
/// length divides into batches).
pub fn aggregate_records(
    records: &[RunRecord],
    batch_size: usize,
) -> Result<Vec<AggregateRow>, HarnessError> {
    let mut rows = Vec::new();
    let mut i = 0;
    while i < records.len() {
        let key = (records[i].n_common, records[i].algorithm);
        let mut j = i;
        while j < records.len() && (records[j].n_common, records[j].algorithm) == key {
            j += 1;
        }
        let cell = &records[i..j];
        let uncensored: Vec<u32> = cell.iter().filter_map(|r| r.ttd).collect();
        let censored_count = (cell.len() - uncensored.len()) as u32;
        let (ettd, ettd_stderr) = match aggregate_ettd(&uncensored) {
            Ok((m, s)) => (Some(m), Some(s)),
            Err(_) => (None, None),
        };
        let mttd = if censored_count == 0 {
            aggregate_mttd(&uncensored, batch_size).ok()
        } else {
            None
        };
        rows.push(AggregateRow {
            algorithm: key.1,
            n_common: key.0,
            ettd,
            ettd_stderr,
            mttd,
            censored_count,
        });
        i = j;
    }
    Ok(rows)
}

/// Percentile bootstrap confidence interval for a mean.
pub fn bootstrap_mean_ci(
    values: &[f64],
    resamples: usize,
    confidence: f64,
    seed: u64,
) -> Result<(f64, f64), HarnessError> {
    if values.is_empty() {
        return Err(HarnessError::EmptySample);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut means = Vec::with_capacity(resamples);
    for _ in 0..resamples {
        let sum: f64 = (0..values.len())
            .map(|_| values[rng.random_range(0..values.len())])
            .sum();
        means.push(sum / values.len() as f64);
    }
    means.sort_by(|a, b| a.partial_cmp(b).expect("bootstrap means are finite"));
    let alpha = (1.0 - confidence) / 2.0;
    Ok((percentile(&means, alpha), percentile(&means, 1.0 - alpha)))
}

/// Percentile of an already-sorted sample.
pub fn percentile(sorted: &[f64], q: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    let idx = ((sorted.len() - 1) as f64 * q).round() as usize;
    sorted[idx.min(sorted.len() - 1)]
}
