//! Random scenario sampling: geometric secondary-user topologies, primary
//! user placement, interference filtering, and channel assignment that
//! guarantees a connected graph and a non-empty globally common channel set.

mod file;

pub use file::{ScenarioFile, ScenarioProvenance};

use std::fmt;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{
    intersect_all, Channel, ChannelSet, Edge, ModelError, Scenario, Topology, UserId,
};

/// Everything that parameterizes one sampled world.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioParams {
    /// Global channel count N.
    pub n_channels: Channel,
    /// Secondary-user count K.
    pub n_users: usize,
    /// Side of the square deployment area, meters.
    pub area_side: f64,
    /// Secondary-user communication range, meters.
    pub su_range: f64,
    /// Primary users placed before interference filtering.
    pub n_pus: usize,
    /// Primary-user communication range, meters.
    pub pu_range: f64,
    /// Size of the sampled globally common channel set.
    pub n_common: Channel,
    /// How many whole placements to try before giving up on connectivity.
    pub max_resample_attempts: u32,
}

impl ScenarioParams {
    pub fn validate(&self) -> Result<(), GenerationError> {
        if self.n_users == 0 {
            return Err(GenerationError::InvalidParams(
                "n_users must be at least 1".into(),
            ));
        }
        if self.n_common == 0 || self.n_common > self.n_channels {
            return Err(GenerationError::InvalidParams(format!(
                "n_common must lie in 1..=n_channels, got {} of {}",
                self.n_common, self.n_channels
            )));
        }
        if self.su_range <= 0.0
            || self.pu_range <= 0.0
            || self.area_side <= 0.0
            || self.su_range.is_nan()
            || self.pu_range.is_nan()
            || self.area_side.is_nan()
        {
            return Err(GenerationError::InvalidParams(
                "area_side, su_range and pu_range must be positive".into(),
            ));
        }
        if self.max_resample_attempts == 0 {
            return Err(GenerationError::InvalidParams(
                "max_resample_attempts must be at least 1".into(),
            ));
        }
        Ok(())
    }

    pub fn with_n_common(&self, n_common: Channel) -> Self {
        Self {
            n_common,
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn distance_squared(&self, other: &Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }
}

/// Sampled positions. `pu_positions` is empty until channels are assigned.
#[derive(Debug, Clone, PartialEq)]
pub struct Placement {
    pub su_positions: Vec<Point>,
    pub pu_positions: Vec<Point>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenerationError {
    #[error("invalid scenario parameters: {0}")]
    InvalidParams(String),
    #[error("no connected topology after {attempts} placement attempts")]
    ConnectivityNotReached { attempts: u32 },
    #[error("scenario file: {0}")]
    File(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

fn sample_points<R: Rng + ?Sized>(count: usize, side: f64, rng: &mut R) -> Vec<Point> {
    (0..count)
        .map(|_| Point {
            x: rng.random_range(0.0..side),
            y: rng.random_range(0.0..side),
        })
        .collect()
}

/// Edges between every pair of positions within `range` of each other
/// (closed ball: a distance exactly equal to the range connects).
pub(crate) fn edges_within_range(positions: &[Point], range: f64) -> Vec<Edge> {
    let r2 = range * range;
    let mut edges = Vec::new();
    for i in 0..positions.len() {
        for j in (i + 1)..positions.len() {
            if positions[i].distance_squared(&positions[j]) <= r2 {
                edges.push((i, j));
            }
        }
    }
    edges
}

/// Samples user positions uniformly in the square and connects users within
/// communication range. The whole placement is resampled until the graph
/// comes out connected, preserving the uniform-given-connected distribution.
pub fn generate_topology(
    params: &ScenarioParams,
    seed: u64,
) -> Result<(Topology, Placement), GenerationError> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..params.max_resample_attempts {
        let su_positions = sample_points(params.n_users, params.area_side, &mut rng);
        let edges = edges_within_range(&su_positions, params.su_range);
        let topology =
            Topology::new(params.n_users, edges).expect("range edges are well-formed");
        if topology.is_connected() {
            return Ok((
                topology,
                Placement {
                    su_positions,
                    pu_positions: Vec::new(),
                },
            ));
        }
    }
    Err(GenerationError::ConnectivityNotReached {
        attempts: params.max_resample_attempts,
    })
}

/// Samples the common channel set and primary-user placement, then derives
/// every user's availability set.
///
/// The channels outside the common set are dealt round-robin (ascending
/// channel, ascending surviving primary-user index) across the primary users
/// that cover at least one secondary user, so any two of them hold counts
/// differing by at most one. A user's set is everything not held by a
/// primary user covering it — which always contains the common set.
pub fn assign_channels(
    params: &ScenarioParams,
    topology: &Topology,
    placement: &Placement,
    seed: u64,
) -> Result<Scenario, GenerationError> {
    Ok(assign_channels_impl(params, topology, placement, seed)?.0)
}

fn assign_channels_impl(
    params: &ScenarioParams,
    topology: &Topology,
    placement: &Placement,
    seed: u64,
) -> Result<(Scenario, Vec<Point>), GenerationError> {
    params.validate()?;
    debug_assert_eq!(placement.su_positions.len(), topology.n_users());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let common = sample_common_set(params.n_channels, params.n_common, &mut rng);
    let pu_positions = sample_points(params.n_pus, params.area_side, &mut rng);
    let scenario =
        build_scenario(params, topology, &placement.su_positions, &pu_positions, common)?;
    Ok((scenario, pu_positions))
}

/// Convenience wrapper: topology plus channels under two derived seeds.
pub fn generate_scenario(
    params: &ScenarioParams,
    topology_seed: u64,
    channel_seed: u64,
) -> Result<(Scenario, Placement), GenerationError> {
    let (topology, mut placement) = generate_topology(params, topology_seed)?;
    let (scenario, pu_positions) =
        assign_channels_impl(params, &topology, &placement, channel_seed)?;
    placement.pu_positions = pu_positions;
    Ok((scenario, placement))
}

fn sample_common_set<R: Rng + ?Sized>(n: Channel, n_common: Channel, rng: &mut R) -> ChannelSet {
    let picks = rand::seq::index::sample(rng, n as usize, n_common as usize);
    let mut labels: Vec<Channel> = picks.into_iter().map(|i| i as Channel + 1).collect();
    labels.sort_unstable();
    ChannelSet::from_sorted(labels)
}

pub(crate) fn build_scenario(
    params: &ScenarioParams,
    topology: &Topology,
    su_positions: &[Point],
    pu_positions: &[Point],
    common: ChannelSet,
) -> Result<Scenario, GenerationError> {
    let n = params.n_channels;
    let pu_channels: Vec<Channel> = (1..=n).filter(|&c| !common.contains(c)).collect();
    let r2 = params.pu_range * params.pu_range;

    // A primary user with no secondary user in range interferes with nobody
    // and is dropped.
    let surviving: Vec<usize> = (0..pu_positions.len())
        .filter(|&p| {
            su_positions
                .iter()
                .any(|su| su.distance_squared(&pu_positions[p]) <= r2)
        })
        .collect();

    if surviving.is_empty() && !pu_channels.is_empty() {
        log::warn!(
            "no surviving primary users: every secondary user keeps all {n} channels"
        );
    }

    let mut held: Vec<Vec<Channel>> = vec![Vec::new(); surviving.len()];
    if !surviving.is_empty() {
        for (j, &c) in pu_channels.iter().enumerate() {
            held[j % surviving.len()].push(c);
        }
    }

    let mut channel_sets = Vec::with_capacity(su_positions.len());
    let mut blocked = vec![false; n as usize + 1];
    for su in su_positions {
        blocked.fill(false);
        for (slot, &p) in surviving.iter().enumerate() {
            if su.distance_squared(&pu_positions[p]) <= r2 {
                for &c in &held[slot] {
                    blocked[c as usize] = true;
                }
            }
        }
        let members: Vec<Channel> = (1..=n).filter(|&c| !blocked[c as usize]).collect();
        channel_sets.push(ChannelSet::from_sorted(members));
    }

    Ok(Scenario::new(n, topology.clone(), channel_sets, common)?)
}

/// A reportable way a scenario can break its construction guarantees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScenarioViolation {
    /// The topology is not connected.
    Connectivity,
    /// No channel is available to every user.
    EmptyIntersection,
    /// The designated common set is not contained in this user's set.
    CommonChannelNotShared { user: UserId },
}

impl fmt::Display for ScenarioViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScenarioViolation::Connectivity => write!(f, "topology is not connected"),
            ScenarioViolation::EmptyIntersection => {
                write!(f, "no channel is common to all users")
            }
            ScenarioViolation::CommonChannelNotShared { user } => {
                write!(f, "common set not contained in user {user}'s channels")
            }
        }
    }
}

/// Checks the run preconditions on a scenario; returns all violations
/// rather than failing on the first.
pub fn validate_scenario(scenario: &Scenario) -> Vec<ScenarioViolation> {
    let mut violations = Vec::new();
    if !scenario.topology().is_connected() {
        violations.push(ScenarioViolation::Connectivity);
    }
    let intersection =
        intersect_all(scenario.channel_sets()).expect("scenarios have at least one user");
    if intersection.is_empty() {
        violations.push(ScenarioViolation::EmptyIntersection);
    }
    for (user, set) in scenario.channel_sets().enumerate() {
        if !scenario.common_set().is_subset_of(set) {
            violations.push(ScenarioViolation::CommonChannelNotShared { user });
        }
    }
    violations
}
