use num_rational::Ratio;

use crate::model::ChannelSet;

use super::AnalyticsError;

/// Expected time-to-rendezvous of two users hopping uniformly at random over
/// their own sets: `n1 · n2 / n12`.
pub fn ettr_oracle_random(n1: u64, n2: u64, n12: u64) -> Result<Ratio<u64>, AnalyticsError> {
    if n12 == 0 {
        return Err(AnalyticsError::EmptyIntersection);
    }
    if n12 > n1.min(n2) || n1 == 0 || n2 == 0 {
        return Err(AnalyticsError::InvalidCounts(format!(
            "n12 = {n12} must satisfy 1 <= n12 <= min(n1, n2) = {}",
            n1.min(n2)
        )));
    }
    Ok(Ratio::new(n1 * n2, n12))
}

/// Expected time-to-rendezvous of two users under independent per-slot
/// random permutations: the inverse Jaccard index `|c1 ∪ c2| / |c1 ∩ c2|`.
pub fn ettr_oracle_pi(c1: &ChannelSet, c2: &ChannelSet) -> Result<Ratio<u64>, AnalyticsError> {
    let inter = c1.intersection_size(c2) as u64;
    if inter == 0 {
        return Err(AnalyticsError::EmptyIntersection);
    }
    let union = c1.len() as u64 + c2.len() as u64 - inter;
    Ok(Ratio::new(union, inter))
}

pub fn ratio_to_f64(r: Ratio<u64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}
