//! Self-contained verification suites: closed-form results checked against
//! independent Monte Carlo simulation, and structural claims checked by
//! exhaustive enumeration. The `verify` subcommand runs one suite and prints
//! one machine-readable line per check.

use std::fmt;
use std::str::FromStr;

use rand::seq::index::sample as index_sample;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::analytics::{
    ettr_oracle_pi, ettr_oracle_random, ratio_to_f64, ring_decompose, simulate_first_success,
    MarkovParams, PairAccumulator, SegmentKind,
};
use crate::engine::{pair_time_to_rendezvous, run_pair_indicators};
use crate::hop::{sweep_forward_replacement, AlgorithmSpec};
use crate::model::{Channel, ChannelSet};
use crate::seeding::derive_seed;

use super::aggregate::percentile;
use super::HarnessError;

/// Seed for the built-in suites; fixed so `verify` is reproducible.
pub const VERIFY_SEED: u64 = 0x746f_706f_6469_7363;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifySuite {
    Theorem,
    Oracles,
    Decomposition,
    Correlation,
}

impl VerifySuite {
    pub const ALL: [VerifySuite; 4] = [
        VerifySuite::Theorem,
        VerifySuite::Oracles,
        VerifySuite::Decomposition,
        VerifySuite::Correlation,
    ];
}

impl fmt::Display for VerifySuite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerifySuite::Theorem => write!(f, "theorem"),
            VerifySuite::Oracles => write!(f, "oracles"),
            VerifySuite::Decomposition => write!(f, "decomposition"),
            VerifySuite::Correlation => write!(f, "correlation"),
        }
    }
}

impl FromStr for VerifySuite {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "theorem" => Ok(VerifySuite::Theorem),
            "oracles" => Ok(VerifySuite::Oracles),
            "decomposition" => Ok(VerifySuite::Decomposition),
            "correlation" => Ok(VerifySuite::Correlation),
            other => Err(HarnessError::Config(format!(
                "unknown suite `{other}`; expected theorem, oracles, decomposition or correlation"
            ))),
        }
    }
}

/// One named pass/fail observation.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub observed: String,
    pub expected: String,
}

impl Check {
    pub fn line(&self) -> String {
        format!(
            "{} {} observed={} expected={}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.observed,
            self.expected
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub suite: VerifySuite,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn lines(&self) -> Vec<String> {
        self.checks.iter().map(|c| c.line()).collect()
    }
}

pub fn run_suite(suite: VerifySuite) -> SuiteReport {
    let checks = match suite {
        VerifySuite::Theorem => check_markov_theorem(1_000_000),
        VerifySuite::Oracles => vec![
            check_pi_ettr_oracle(100_000, VERIFY_SEED),
            check_random_ettr_oracle(100_000, VERIFY_SEED),
        ],
        VerifySuite::Decomposition => check_ring_decomposition_exhaustive(8),
        VerifySuite::Correlation => check_correlation_contrast(500, VERIFY_SEED),
    };
    SuiteReport { suite, checks }
}

// ---------------------------------------------------------------------------
// theorem: first-success time of a stationary two-state chain
// ---------------------------------------------------------------------------

/// Valid fail-to-fail probabilities for a given stationary success rate,
/// spanning from the stationarity bound up to a cap that keeps Monte Carlo
/// expectations around 30 slots.
fn p00_grid(p: f64, count: usize) -> Vec<f64> {
    let lo = ((1.0 - 2.0 * p) / (1.0 - p)).max(0.0);
    let hi = 1.0 - (1.0 - p) / 29.0;
    (0..count)
        .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
        .collect()
}

/// For each stationary success rate: the expected first-success time must be
/// strictly increasing in the lag-1 correlation across the grid (exact), and
/// a Monte Carlo estimate over `runs` sampled chains must match the closed
/// form within 1% relative at every grid point.
pub fn check_markov_theorem(runs: u32) -> Vec<Check> {
    let mut checks = Vec::new();
    for &p in &[0.1, 0.25, 0.5] {
        let grid = p00_grid(p, 20);
        let params: Vec<MarkovParams> = grid
            .iter()
            .map(|&p00| MarkovParams::new(p, p00).expect("grid stays in the stationary region"))
            .collect();

        let mut monotone = true;
        for w in params.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            if !(b.lag1_correlation() > a.lag1_correlation()
                && b.expected_first_success().unwrap() > a.expected_first_success().unwrap())
            {
                monotone = false;
            }
        }
        checks.push(Check {
            name: format!("theorem.monotone[p={p}]"),
            passed: monotone,
            observed: format!(
                "E[T] from {:.4} to {:.4} over correlation {:.4}..{:.4}",
                params[0].expected_first_success().unwrap(),
                params[19].expected_first_success().unwrap(),
                params[0].lag1_correlation(),
                params[19].lag1_correlation()
            ),
            expected: "strictly increasing".into(),
        });

        let mut max_rel_err: f64 = 0.0;
        for (i, m) in params.iter().enumerate() {
            let closed = m.expected_first_success().unwrap();
            let mc = monte_carlo_expected_first_success(
                m,
                runs,
                derive_seed(VERIFY_SEED, &[0x11, p.to_bits(), i as u64]),
            );
            max_rel_err = max_rel_err.max((mc - closed).abs() / closed);
        }
        checks.push(Check {
            name: format!("theorem.monte_carlo[p={p}]"),
            passed: max_rel_err < 0.01,
            observed: format!("max relative error {max_rel_err:.5} over 20 grid points"),
            expected: "< 0.01".into(),
        });
    }
    checks
}

/// Mean first-success time over `runs` chains, each started from the
/// stationary law. Chunked so the result is independent of thread schedule.
pub fn monte_carlo_expected_first_success(params: &MarkovParams, runs: u32, seed: u64) -> f64 {
    const CHUNK: u32 = 10_000;
    let chunks = runs.div_ceil(CHUNK);
    let total: u64 = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, &[chunk as u64]));
            let in_chunk = CHUNK.min(runs - chunk * CHUNK);
            (0..in_chunk)
                .map(|_| simulate_first_success(params, &mut rng) as u64)
                .sum::<u64>()
        })
        .sum();
    total as f64 / runs as f64
}

// ---------------------------------------------------------------------------
// oracles: expected time-to-rendezvous of a pair
// ---------------------------------------------------------------------------

/// Samples a pair of channel sets with the exact cardinalities
/// `(|c1|, |c2|, |c1 ∩ c2|)` over the labels `1..=n`.
pub fn sample_pair_sets(
    n: Channel,
    n1: usize,
    n2: usize,
    n12: usize,
    seed: u64,
) -> (ChannelSet, ChannelSet) {
    assert!(n12 <= n1.min(n2) && n1 + n2 - n12 <= n as usize);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let distinct = n1 + n2 - n12;
    let picks: Vec<Channel> = index_sample(&mut rng, n as usize, distinct)
        .into_iter()
        .map(|i| i as Channel + 1)
        .collect();
    let common = &picks[..n12];
    let first_only = &picks[n12..n1];
    let second_only = &picks[n1..];
    let c1 = ChannelSet::new(common.iter().chain(first_only).copied().collect())
        .expect("labels are valid");
    let c2 = ChannelSet::new(common.iter().chain(second_only).copied().collect())
        .expect("labels are valid");
    (c1, c2)
}

/// Mean time-to-rendezvous of two users under per-slot random permutations,
/// against the inverse Jaccard index: 64 channels, 8 channels each, 4
/// common, so the closed form gives 12/4 = 3 slots.
pub fn check_pi_ettr_oracle(runs: u32, seed: u64) -> Check {
    let (n, n1, n2, n12) = (64, 8, 8, 4);
    let expected = {
        let (c1, c2) = sample_pair_sets(n, n1, n2, n12, derive_seed(seed, &[0x21, 0]));
        ratio_to_f64(ettr_oracle_pi(&c1, &c2).expect("sets overlap"))
    };
    let mean = mean_pair_ttr(AlgorithmSpec::PiRandomized, n, n1, n2, n12, runs, seed, 0x21);
    let rel = (mean - expected).abs() / expected;
    Check {
        name: "oracles.pi_ettr".into(),
        passed: rel < 0.03,
        observed: format!("mean TTR {mean:.4} over {runs} runs (rel err {rel:.4})"),
        expected: format!("{expected} within 3%"),
    }
}

/// Mean time-to-rendezvous of two users hopping uniformly at random,
/// against `n1 n2 / n12 = 16`.
pub fn check_random_ettr_oracle(runs: u32, seed: u64) -> Check {
    let (n, n1, n2, n12) = (64, 8, 8, 4);
    let expected = ratio_to_f64(ettr_oracle_random(n1 as u64, n2 as u64, n12 as u64).unwrap());
    let mean = mean_pair_ttr(AlgorithmSpec::RandomHop, n, n1, n2, n12, runs, seed, 0x22);
    let rel = (mean - expected).abs() / expected;
    Check {
        name: "oracles.random_ettr".into(),
        passed: rel < 0.03,
        observed: format!("mean TTR {mean:.4} over {runs} runs (rel err {rel:.4})"),
        expected: format!("{expected} within 3%"),
    }
}

#[allow(clippy::too_many_arguments)]
fn mean_pair_ttr(
    algorithm: AlgorithmSpec,
    n: Channel,
    n1: usize,
    n2: usize,
    n12: usize,
    runs: u32,
    seed: u64,
    tag: u64,
) -> f64 {
    let cap = 1_000_000;
    let total: u64 = (0..runs)
        .into_par_iter()
        .map(|i| {
            let (c1, c2) = sample_pair_sets(n, n1, n2, n12, derive_seed(seed, &[tag, i as u64]));
            pair_time_to_rendezvous(
                &c1,
                &c2,
                algorithm,
                n,
                derive_seed(seed, &[tag ^ 0xff, i as u64]),
                cap,
            )
            .expect("rendezvous is certain with a shared channel") as u64
        })
        .sum();
    total as f64 / runs as f64
}

// ---------------------------------------------------------------------------
// decomposition: exhaustive ring check at n = 8
// ---------------------------------------------------------------------------

/// Enumerates every ordered pair of non-empty channel sets over `1..=n`
/// with a non-empty intersection. For each pair the decomposition's segment
/// and rendezvous counts must equal `n1 + n2 − n12` and `n12`, and a direct
/// simulation of forward-replacement sweeping must rendezvous at exactly
/// the slots whose target lies in a rendezvous segment.
pub fn check_ring_decomposition_exhaustive(n: Channel) -> Vec<Check> {
    assert!(n <= 16, "exhaustive enumeration is exponential in n");
    let sets: Vec<ChannelSet> = (1u32..(1 << n))
        .map(|mask| {
            ChannelSet::new((1..=n).filter(|c| mask & (1 << (c - 1)) != 0).collect())
                .expect("labels are valid")
        })
        .collect();

    let mut pairs: u64 = 0;
    let mut count_mismatches: u64 = 0;
    let mut sim_mismatches: u64 = 0;
    for c1 in &sets {
        for c2 in &sets {
            let n12 = c1.intersection_size(c2);
            if n12 == 0 {
                continue;
            }
            pairs += 1;
            let d = ring_decompose(c1, c2, n).expect("union is non-empty");
            if d.segment_count() != c1.len() + c2.len() - n12 || d.rendezvous_count() != n12 {
                count_mismatches += 1;
            }
            for t in 1..=n {
                let same =
                    sweep_forward_replacement(c1, t, n) == sweep_forward_replacement(c2, t, n);
                if same != (d.kind_at(t) == SegmentKind::Rendezvous) {
                    sim_mismatches += 1;
                }
            }
        }
    }

    vec![
        Check {
            name: format!("decomposition.counts[n={n}]"),
            passed: count_mismatches == 0,
            observed: format!("{count_mismatches} mismatches over {pairs} pairs"),
            expected: "segments = n1+n2-n12 and rendezvous = n12 everywhere".into(),
        },
        Check {
            name: format!("decomposition.simulation[n={n}]"),
            passed: sim_mismatches == 0,
            observed: format!("{sim_mismatches} slot mismatches over {pairs} pairs"),
            expected: "rendezvous exactly in rendezvous segments".into(),
        },
    ]
}

// ---------------------------------------------------------------------------
// correlation: sequential sweeping is positively correlated, permuted
// sweeping is nearly independent
// ---------------------------------------------------------------------------

/// Pools lag-1 indicator pairs over `draws` random channel-set draws
/// (256 channels, 16 per user, 4 common). Sequential forward-replacement
/// sweeping must show positive lag-1 correlation with 99% bootstrap
/// confidence; the permuted sweep must stay within |r| < 0.05.
pub fn check_correlation_contrast(draws: usize, seed: u64) -> Vec<Check> {
    let (n, n1, n2, n12) = (256, 16, 16, 4);
    let horizon = n as u32;

    let per_draw: Vec<(PairAccumulator, PairAccumulator)> = (0..draws)
        .into_par_iter()
        .map(|d| {
            let (c1, c2) = sample_pair_sets(n, n1, n2, n12, derive_seed(seed, &[0x31, d as u64]));
            let sweep = run_pair_indicators(
                &c1,
                &c2,
                AlgorithmSpec::SweepForward,
                n,
                derive_seed(seed, &[0x32, d as u64]),
                horizon,
            );
            let prs = run_pair_indicators(
                &c1,
                &c2,
                AlgorithmSpec::PseudoRandomSweep,
                n,
                derive_seed(seed, &[0x33, d as u64]),
                horizon,
            );
            (
                PairAccumulator::from_sequence(&sweep),
                PairAccumulator::from_sequence(&prs),
            )
        })
        .collect();

    let pooled = |pick: &dyn Fn(&(PairAccumulator, PairAccumulator)) -> PairAccumulator| {
        let mut acc = PairAccumulator::default();
        for pair in &per_draw {
            acc.merge(&pick(pair));
        }
        acc.correlation().expect("pooled indicators are not constant")
    };
    let r_sweep = pooled(&|p| p.0);
    let r_prs = pooled(&|p| p.1);

    // Bootstrap over draws for the sequential sweep: resample whole draws,
    // re-pool, and take the 0.5th percentile as the 99%-confidence floor.
    let resamples = 2000;
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, &[0x34]));
    let mut boot: Vec<f64> = (0..resamples)
        .map(|_| {
            let mut acc = PairAccumulator::default();
            for _ in 0..per_draw.len() {
                acc.merge(&per_draw[rng.random_range(0..per_draw.len())].0);
            }
            acc.correlation().unwrap_or(0.0)
        })
        .collect();
    boot.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let floor = percentile(&boot, 0.005);

    vec![
        Check {
            name: "correlation.sweep_positive".into(),
            passed: floor > 0.0,
            observed: format!("pooled r = {r_sweep:.4}, 99% bootstrap floor = {floor:.4}"),
            expected: "bootstrap floor > 0".into(),
        },
        Check {
            name: "correlation.prs_near_zero".into(),
            passed: r_prs.abs() < 0.05,
            observed: format!("pooled r = {r_prs:.4}"),
            expected: "|r| < 0.05".into(),
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for suite in VerifySuite::ALL {
            assert_eq!(suite.to_string().parse::<VerifySuite>().unwrap(), suite);
        }
        assert!("everything".parse::<VerifySuite>().is_err());
    }

    #[test]
    fn sampled_pair_sets_have_requested_cardinalities() {
        for seed in 0..50 {
            let (c1, c2) = sample_pair_sets(64, 8, 8, 4, seed);
            assert_eq!(c1.len(), 8);
            assert_eq!(c2.len(), 8);
            assert_eq!(c1.intersection_size(&c2), 4);
        }
    }

    #[test]
    fn small_decomposition_suite_passes() {
        for check in check_ring_decomposition_exhaustive(5) {
            assert!(check.passed, "{}", check.line());
        }
    }

    #[test]
    fn markov_grids_are_valid_and_ordered() {
        for &p in &[0.1, 0.25, 0.5] {
            let grid = p00_grid(p, 20);
            assert_eq!(grid.len(), 20);
            assert!(grid.windows(2).all(|w| w[0] < w[1]));
            for &p00 in &grid {
                MarkovParams::new(p, p00).unwrap();
            }
        }
    }

    #[test]
    fn monte_carlo_mean_is_schedule_independent() {
        let m = MarkovParams::new(0.5, 0.5).unwrap();
        let a = monte_carlo_expected_first_success(&m, 50_000, 9);
        let b = monte_carlo_expected_first_success(&m, 50_000, 9);
        assert_eq!(a, b);
    }

    #[test]
    fn check_lines_are_machine_readable() {
        let check = Check {
            name: "demo.check".into(),
            passed: true,
            observed: "1.0".into(),
            expected: "1.0".into(),
        };
        assert_eq!(check.line(), "PASS demo.check observed=1.0 expected=1.0");
    }
}
