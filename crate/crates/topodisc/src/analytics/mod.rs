//! Closed-form oracles and structural analyses backing the simulator: the
//! two-state Markov chain governing first rendezvous, lag-1 correlation
//! estimation, the ring decomposition induced by a pair of channel sets, and
//! expected time-to-rendezvous formulas.

mod ettr;
mod markov;
mod ring;

pub use ettr::{ettr_oracle_pi, ettr_oracle_random, ratio_to_f64};
pub use markov::{
    empirical_lag1_correlation, pooled_lag1_correlation, simulate_first_success, MarkovParams,
    PairAccumulator,
};
pub use ring::{ring_decompose, RingDecomposition, RingSegment, SegmentKind};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalyticsError {
    #[error("invalid Markov parameters: {0}")]
    InvalidMarkovParams(String),
    #[error("expected first-success time diverges when failure is absorbing")]
    DivergentExpectation,
    #[error("sequence too short for lag-1 estimation")]
    SequenceTooShort,
    #[error("channel sets have an empty union")]
    EmptyUnion,
    #[error("channel sets have an empty intersection")]
    EmptyIntersection,
    #[error("invalid counts: {0}")]
    InvalidCounts(String),
}
