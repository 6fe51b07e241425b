use rand::Rng;

use super::AnalyticsError;

/// A stationary two-state Markov chain over rendezvous indicators, described
/// by the stationary success probability `p = P(X_t = 1)` and the
/// fail-to-fail transition probability `p00 = P(X_{t+1} = 0 | X_t = 0)`.
///
/// The success-to-success probability is pinned by the stationarity balance
/// `p (1 − p11) = (1 − p) (1 − p00)`; parameter pairs whose implied `p11`
/// falls outside `[0, 1]` do not describe a stationary chain and are
/// rejected at construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarkovParams {
    p: f64,
    p00: f64,
}

impl MarkovParams {
    pub fn new(p: f64, p00: f64) -> Result<Self, AnalyticsError> {
        if !(p > 0.0 && p < 1.0) {
            return Err(AnalyticsError::InvalidMarkovParams(format!(
                "p must lie in (0,1), got {p}"
            )));
        }
        if !(0.0..=1.0).contains(&p00) {
            return Err(AnalyticsError::InvalidMarkovParams(format!(
                "p00 must lie in [0,1], got {p00}"
            )));
        }
        let p11 = 1.0 - (1.0 - p) * (1.0 - p00) / p;
        if p11 < 0.0 {
            return Err(AnalyticsError::InvalidMarkovParams(format!(
                "no stationary chain: implied p11 = {p11} < 0 (p = {p}, p00 = {p00})"
            )));
        }
        Ok(Self { p, p00 })
    }

    /// Independent trials with success probability `p` (`p00 = 1 − p`).
    pub fn iid(p: f64) -> Result<Self, AnalyticsError> {
        Self::new(p, 1.0 - p)
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn p00(&self) -> f64 {
        self.p00
    }

    /// Success-to-success probability implied by stationarity.
    pub fn p11(&self) -> f64 {
        1.0 - (1.0 - self.p) * (1.0 - self.p00) / self.p
    }

    /// Tail of the first-success time: `P(T > t) = (1 − p) p00^(t−1)` for
    /// `t ≥ 1`, and 1 at `t = 0`.
    pub fn tail(&self, t: u32) -> f64 {
        if t == 0 {
            1.0
        } else {
            (1.0 - self.p) * self.p00.powi(t as i32 - 1)
        }
    }

    /// Expected first-success time `E[T] = 1 + (1 − p)/(1 − p00)`, from the
    /// tail sum. Diverges when failure is absorbing (`p00 = 1`).
    pub fn expected_first_success(&self) -> Result<f64, AnalyticsError> {
        if self.p00 >= 1.0 {
            return Err(AnalyticsError::DivergentExpectation);
        }
        Ok(1.0 + (1.0 - self.p) / (1.0 - self.p00))
    }

    /// Lag-1 Pearson correlation between consecutive trials:
    /// `ω = (p00 − (1 − p)) / p`.
    pub fn lag1_correlation(&self) -> f64 {
        (self.p00 - (1.0 - self.p)) / self.p
    }
}

/// Samples the first-success time of the chain started from its stationary
/// law. Requires `p00 < 1`.
pub fn simulate_first_success<R: Rng + ?Sized>(params: &MarkovParams, rng: &mut R) -> u32 {
    debug_assert!(params.p00 < 1.0);
    if rng.random::<f64>() < params.p {
        return 1;
    }
    let mut t = 1;
    loop {
        t += 1;
        if rng.random::<f64>() >= params.p00 {
            return t;
        }
    }
}

/// Running sums over consecutive-pair observations `(x_t, x_{t+1})`, enough
/// to recover the pooled-mean Pearson correlation. Accumulators from
/// different sequences can be merged, which is how indicator sequences from
/// many independent draws are pooled (pairs never straddle a sequence
/// boundary).
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PairAccumulator {
    pub pairs: u64,
    pub sum_a: f64,
    pub sum_b: f64,
    pub sum_aa: f64,
    pub sum_bb: f64,
    pub sum_ab: f64,
}

impl PairAccumulator {
    pub fn from_sequence(xs: &[bool]) -> Self {
        let mut acc = Self::default();
        acc.add_sequence(xs);
        acc
    }

    pub fn add_sequence(&mut self, xs: &[bool]) {
        for w in xs.windows(2) {
            let a = w[0] as u8 as f64;
            let b = w[1] as u8 as f64;
            self.pairs += 1;
            self.sum_a += a;
            self.sum_b += b;
            self.sum_aa += a * a;
            self.sum_bb += b * b;
            self.sum_ab += a * b;
        }
    }

    pub fn merge(&mut self, other: &Self) {
        self.pairs += other.pairs;
        self.sum_a += other.sum_a;
        self.sum_b += other.sum_b;
        self.sum_aa += other.sum_aa;
        self.sum_bb += other.sum_bb;
        self.sum_ab += other.sum_ab;
    }

    /// Pearson correlation of the accumulated pairs around their pooled mean
    /// (the mean over both pair positions). `None` when either side has zero
    /// variance — a constant stream has no defined correlation.
    pub fn correlation(&self) -> Option<f64> {
        if self.pairs < 2 {
            return None;
        }
        let m = self.pairs as f64;
        let mean = (self.sum_a + self.sum_b) / (2.0 * m);
        let cov = self.sum_ab - mean * (self.sum_a + self.sum_b) + m * mean * mean;
        let var_a = self.sum_aa - 2.0 * mean * self.sum_a + m * mean * mean;
        let var_b = self.sum_bb - 2.0 * mean * self.sum_b + m * mean * mean;
        if var_a <= 0.0 || var_b <= 0.0 {
            return None;
        }
        Some(cov / (var_a * var_b).sqrt())
    }
}

/// Sample lag-1 correlation of a single indicator sequence, `None` (defined
/// "undefined" marker, not an error) when the sequence is constant.
pub fn empirical_lag1_correlation(xs: &[bool]) -> Result<Option<f64>, AnalyticsError> {
    if xs.len() < 3 {
        return Err(AnalyticsError::SequenceTooShort);
    }
    Ok(PairAccumulator::from_sequence(xs).correlation())
}

/// Lag-1 correlation pooled over several sequences; pairs are formed within
/// each sequence only.
pub fn pooled_lag1_correlation<'a, I>(sequences: I) -> Result<Option<f64>, AnalyticsError>
where
    I: IntoIterator<Item = &'a [bool]>,
{
    let mut acc = PairAccumulator::default();
    for xs in sequences {
        acc.add_sequence(xs);
    }
    if acc.pairs < 2 {
        return Err(AnalyticsError::SequenceTooShort);
    }
    Ok(acc.correlation())
}
