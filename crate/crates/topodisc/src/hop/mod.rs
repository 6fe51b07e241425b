//! Channel-selection rules.
//!
//! Seven slot-indexed decision rules share one contract: given a user's
//! availability set (and, for the adaptive rule, its current knowledge),
//! produce the channel to tune in slot `t`. Every non-idle decision is a
//! member of the deciding user's set.
//!
//! * `sweep_basic` — tune channel `t` at slot `t`, else idle.
//! * `sweep_random_replacement` — as above, but replace an unavailable
//!   target with a uniformly random member.
//! * `sweep_forward_replacement` — replace with the cyclically next member.
//! * `pi_algorithm` — relabel the set through a per-slot permutation and
//!   tune the preimage of the smallest label.
//! * `pseudo_random_sweep` — sweep in the order of one shared permutation,
//!   with forward replacement.
//! * `stick_together` — pseudo-random sweep over the intersection of all
//!   known users' sets once both adoption thresholds are met.
//! * `random_hop` — uniform member every slot.

mod permutation;

pub use permutation::Permutation;

use std::fmt;
use std::str::FromStr;

use rand::seq::IndexedRandom;
use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::model::{intersect_all, Channel, ChannelSet, HopDecision, KnowledgeState};

/// Which decision rule a run uses, plus the adoption thresholds for the
/// stick-together strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AlgorithmSpec {
    Sweep,
    SweepRandom,
    SweepForward,
    PiRandomized,
    PseudoRandomSweep,
    StickTogether { n_th: usize, k_th: usize },
    RandomHop,
}

impl AlgorithmSpec {
    /// Rules that are guaranteed to bring every valid scenario to full
    /// discovery within one sweep period of `n` slots: at the first slot
    /// whose (permuted) target is a globally common channel, every user
    /// tunes that target.
    pub fn completes_within_period(&self) -> bool {
        !matches!(self, AlgorithmSpec::PiRandomized | AlgorithmSpec::RandomHop)
    }

    pub(crate) fn uses_shared_permutation(&self) -> bool {
        matches!(
            self,
            AlgorithmSpec::PseudoRandomSweep | AlgorithmSpec::StickTogether { .. }
        )
    }

    pub(crate) fn uses_per_user_rng(&self) -> bool {
        matches!(self, AlgorithmSpec::SweepRandom | AlgorithmSpec::RandomHop)
    }
}

impl fmt::Display for AlgorithmSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgorithmSpec::Sweep => write!(f, "sweep"),
            AlgorithmSpec::SweepRandom => write!(f, "sweep-random"),
            AlgorithmSpec::SweepForward => write!(f, "sweep-forward"),
            AlgorithmSpec::PiRandomized => write!(f, "pi"),
            AlgorithmSpec::PseudoRandomSweep => write!(f, "prs"),
            AlgorithmSpec::StickTogether { n_th, k_th } => write!(f, "stick:{n_th},{k_th}"),
            AlgorithmSpec::RandomHop => write!(f, "random"),
        }
    }
}

impl FromStr for AlgorithmSpec {
    type Err = HopError;

    /// Parses the command-line form: `sweep | sweep-random | sweep-forward |
    /// pi | prs | stick:n_th,k_th | random`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sweep" => Ok(AlgorithmSpec::Sweep),
            "sweep-random" => Ok(AlgorithmSpec::SweepRandom),
            "sweep-forward" => Ok(AlgorithmSpec::SweepForward),
            "pi" => Ok(AlgorithmSpec::PiRandomized),
            "prs" => Ok(AlgorithmSpec::PseudoRandomSweep),
            "random" => Ok(AlgorithmSpec::RandomHop),
            other => {
                if let Some(args) = other.strip_prefix("stick:") {
                    let bad = || HopError::AlgorithmParse {
                        input: other.to_string(),
                        reason: "expected stick:<n_th>,<k_th> with both thresholds >= 1"
                            .to_string(),
                    };
                    let (n_th, k_th) = args.split_once(',').ok_or_else(bad)?;
                    let n_th: usize = n_th.trim().parse().map_err(|_| bad())?;
                    let k_th: usize = k_th.trim().parse().map_err(|_| bad())?;
                    if n_th == 0 || k_th == 0 {
                        return Err(bad());
                    }
                    Ok(AlgorithmSpec::StickTogether { n_th, k_th })
                } else {
                    Err(HopError::AlgorithmParse {
                        input: other.to_string(),
                        reason:
                            "expected one of sweep, sweep-random, sweep-forward, pi, prs, \
                             stick:<n_th>,<k_th>, random"
                                .to_string(),
                    })
                }
            }
        }
    }
}

impl Serialize for AlgorithmSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for AlgorithmSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HopError {
    #[error("not a bijection: {detail}")]
    NotABijection { detail: String },
    #[error("cannot parse algorithm `{input}`: {reason}")]
    AlgorithmParse { input: String, reason: String },
}

/// Maps a global slot index (1-based, unbounded) onto the sweep period
/// `1..=n`. Sweep-family schedules repeat with period `n`.
pub fn slot_target(t: u32, n: Channel) -> Channel {
    debug_assert!(t >= 1 && n >= 1);
    (((t - 1) % n as u32) + 1) as Channel
}

/// The member of `c` at the smallest forward (clockwise) distance from
/// `target` on the `n`-ring, distances measured as `(c_i − target) mod n` in
/// `{0..n−1}`. If `target ∈ c` the answer is `target` itself.
///
/// The argmin is unique: distinct members have distinct residues.
pub fn forward_pick(c: &ChannelSet, target: Channel, n: Channel) -> Channel {
    debug_assert!(!c.is_empty(), "forward_pick needs a non-empty set");
    debug_assert!((1..=n).contains(&target));
    debug_assert!(c.max_label().unwrap_or(0) <= n);
    let members = c.as_slice();
    match members.binary_search(&target) {
        Ok(i) => members[i],
        Err(i) if i < members.len() => members[i],
        Err(_) => members[0],
    }
}

/// Basic sequential sweep: tune channel `t` in slot `t` when available,
/// otherwise stay idle.
pub fn sweep_basic(c: &ChannelSet, t: Channel) -> HopDecision {
    if c.contains(t) {
        HopDecision::Tune(t)
    } else {
        HopDecision::Idle
    }
}

/// Sequential sweep, replacing an unavailable target with a uniformly
/// random member of the set.
pub fn sweep_random_replacement<R: Rng + ?Sized>(
    c: &ChannelSet,
    t: Channel,
    rng: &mut R,
) -> Channel {
    if c.contains(t) {
        t
    } else {
        *c.as_slice()
            .choose(rng)
            .expect("replacement needs a non-empty set")
    }
}

/// Sequential sweep, replacing an unavailable target with the cyclically
/// next member.
pub fn sweep_forward_replacement(c: &ChannelSet, t: Channel, n: Channel) -> Channel {
    forward_pick(c, t, n)
}

/// Relabels the set through `pi_t`, takes the minimum label, and maps it
/// back through the inverse. The result is always a member of `c`.
pub fn pi_algorithm(c: &ChannelSet, pi_t: &Permutation) -> Channel {
    let min_label = c
        .iter()
        .map(|ch| pi_t.apply(ch))
        .min()
        .expect("pi_algorithm needs a non-empty set");
    pi_t.invert(min_label)
}

/// Sweep in the order of the shared permutation: attempt `π(t)`, falling
/// back to the cyclically next member when `π(t)` is unavailable.
pub fn pseudo_random_sweep(c: &ChannelSet, pi: &Permutation, t: Channel, n: Channel) -> Channel {
    // forward_pick returns the target itself when it is a member.
    forward_pick(c, pi.apply(t), n)
}

/// The set the stick-together strategy would sweep over, if its adoption
/// thresholds are met: the intersection of all known users' sets, required
/// to hold at least `n_th` channels and to be backed by at least `k_th`
/// known users.
pub fn stick_candidate(
    knowledge: &KnowledgeState,
    n_th: usize,
    k_th: usize,
) -> Option<ChannelSet> {
    if knowledge.n_known_users() < k_th {
        return None;
    }
    let st = intersect_all(knowledge.channel_sets())
        .expect("knowledge always contains at least the owner");
    (st.len() >= n_th).then_some(st)
}

/// Threshold-based stick-together strategy: pseudo-random sweep over the
/// intersection of all known users' sets when the thresholds are met, over
/// the user's own set otherwise.
///
/// `knowledge` must contain the deciding user, so the intersection is a
/// subset of `c` and the result is always a member of `c`.
pub fn stick_together(
    c: &ChannelSet,
    knowledge: &KnowledgeState,
    pi: &Permutation,
    t: Channel,
    n: Channel,
    n_th: usize,
    k_th: usize,
) -> Channel {
    match stick_candidate(knowledge, n_th, k_th) {
        Some(st) => pseudo_random_sweep(&st, pi, t, n),
        None => pseudo_random_sweep(c, pi, t, n),
    }
}

/// Uniformly random member of the set, fresh every slot.
pub fn random_hop<R: Rng + ?Sized>(c: &ChannelSet, rng: &mut R) -> Channel {
    *c.as_slice()
        .choose(rng)
        .expect("random_hop needs a non-empty set")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cs(xs: &[Channel]) -> ChannelSet {
        ChannelSet::new(xs.to_vec()).unwrap()
    }

    // ------------------------------------------------------------------
    // forward_pick
    // ------------------------------------------------------------------

    #[test]
    fn forward_pick_member_is_fixed_point() {
        assert_eq!(forward_pick(&cs(&[2, 5]), 2, 8), 2);
    }

    #[test]
    fn forward_pick_next_member_forward() {
        // (5-3) mod 8 = 2 beats (2-3) mod 8 = 7
        assert_eq!(forward_pick(&cs(&[2, 5]), 3, 8), 5);
    }

    #[test]
    fn forward_pick_wraps_around() {
        // (2-7) mod 8 = 3 beats (5-7) mod 8 = 6
        assert_eq!(forward_pick(&cs(&[2, 5]), 7, 8), 2);
    }

    #[test]
    fn forward_pick_argmin_is_unique() {
        // Distinct members yield distinct residues, so the argmin can be
        // checked against a linear scan with strict inequality.
        for n in [4u16, 8, 11] {
            for mask in 1u32..(1 << n) {
                let members: Vec<Channel> =
                    (1..=n).filter(|c| mask & (1 << (c - 1)) != 0).collect();
                let set = cs(&members);
                for target in 1..=n {
                    let dist = |c: Channel| (c as i32 - target as i32).rem_euclid(n as i32);
                    let mut best = members[0];
                    for &m in &members[1..] {
                        assert_ne!(dist(m), dist(best));
                        if dist(m) < dist(best) {
                            best = m;
                        }
                    }
                    assert_eq!(forward_pick(&set, target, n), best);
                }
            }
        }
    }

    // ------------------------------------------------------------------
    // sweep variants
    // ------------------------------------------------------------------

    #[test]
    fn sweep_basic_tunes_or_idles() {
        assert_eq!(sweep_basic(&cs(&[3, 5]), 3), HopDecision::Tune(3));
        assert_eq!(sweep_basic(&cs(&[3, 5]), 4), HopDecision::Idle);
    }

    #[test]
    fn sweep_basic_full_set_never_idles() {
        let full = ChannelSet::full(8);
        for t in 1..=8 {
            assert_eq!(sweep_basic(&full, t), HopDecision::Tune(t));
        }
    }

    #[test]
    fn sweep_random_keeps_available_target() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(sweep_random_replacement(&cs(&[3, 5]), 3, &mut rng), 3);
    }

    #[test]
    fn sweep_random_singleton_replacement() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(sweep_random_replacement(&cs(&[7]), 2, &mut rng), 7);
    }

    #[test]
    fn sweep_random_replacement_is_roughly_uniform() {
        let set = cs(&[3, 5]);
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let draws = 10_000;
        let threes = (0..draws)
            .filter(|_| sweep_random_replacement(&set, 4, &mut rng) == 3)
            .count();
        let frac = threes as f64 / draws as f64;
        assert!((0.47..=0.53).contains(&frac), "got {frac}");
    }

    #[test]
    fn sweep_forward_examples() {
        assert_eq!(sweep_forward_replacement(&cs(&[2, 5]), 2, 8), 2);
        assert_eq!(sweep_forward_replacement(&cs(&[2, 5]), 3, 8), 5);
        // (2-6) mod 8 = 4 beats (5-6) mod 8 = 7
        assert_eq!(sweep_forward_replacement(&cs(&[2, 5]), 6, 8), 2);
    }

    // ------------------------------------------------------------------
    // permutation-driven rules
    // ------------------------------------------------------------------

    #[test]
    fn pi_algorithm_identity_returns_minimum() {
        assert_eq!(pi_algorithm(&cs(&[2, 4]), &Permutation::identity(4)), 2);
    }

    #[test]
    fn pi_algorithm_hand_evaluated_permutation() {
        // π: 1→3, 2→1, 3→4, 4→2; π({2,4}) = {1,2}, min = 1, π⁻¹(1) = 2.
        let p = Permutation::from_forward(vec![3, 1, 4, 2]).unwrap();
        assert_eq!(pi_algorithm(&cs(&[2, 4]), &p), 2);
    }

    #[test]
    fn pi_algorithm_singleton() {
        for seed in 0..20 {
            let p = Permutation::from_seed(seed, 6);
            assert_eq!(pi_algorithm(&cs(&[4]), &p), 4);
        }
    }

    #[test]
    fn prs_membership_branch() {
        // π = identity, so the target is t itself.
        let p = Permutation::identity(8);
        assert_eq!(pseudo_random_sweep(&cs(&[2, 5]), &p, 5, 8), 5);
        assert_eq!(pseudo_random_sweep(&cs(&[2, 5]), &p, 3, 8), 5);
    }

    #[test]
    fn prs_with_identity_equals_sweep_forward() {
        let p = Permutation::identity(11);
        for mask in 1u32..(1 << 11) {
            let members: Vec<Channel> = (1..=11).filter(|c| mask & (1 << (c - 1)) != 0).collect();
            let set = cs(&members);
            for t in 1..=11 {
                assert_eq!(
                    pseudo_random_sweep(&set, &p, t, 11),
                    sweep_forward_replacement(&set, t, 11)
                );
            }
        }
    }

    // ------------------------------------------------------------------
    // stick-together
    // ------------------------------------------------------------------

    #[test]
    fn stick_below_user_threshold_matches_prs() {
        let own = cs(&[1, 3, 5]);
        let knowledge = KnowledgeState::initial(0, own.clone());
        let p = Permutation::from_seed(5, 8);
        for t in 1..=8 {
            assert_eq!(
                stick_together(&own, &knowledge, &p, t, 8, 1, 2),
                pseudo_random_sweep(&own, &p, t, 8)
            );
        }
    }

    #[test]
    fn stick_uses_intersection_when_thresholds_met() {
        // S = {0,1}, c0 = {1,2,3}, c1 = {2,3,4}: c_st = {2,3}. With π
        // mapping t=1 to 4, forward replacement on the 4-ring picks 2.
        let c0 = cs(&[1, 2, 3]);
        let c1 = cs(&[2, 3, 4]);
        let merged = KnowledgeState::merge(
            &[
                &KnowledgeState::initial(0, c0.clone()),
                &KnowledgeState::initial(1, c1),
            ],
            &[(0, 1)].into_iter().collect(),
        )
        .unwrap();
        let p = Permutation::from_forward(vec![4, 1, 2, 3]).unwrap();
        // (2-4) mod 4 = 2 beats (3-4) mod 4 = 3.
        assert_eq!(stick_together(&c0, &merged, &p, 1, 4, 2, 2), 2);
    }

    #[test]
    fn stick_with_unreachable_user_threshold_degenerates() {
        let c0 = cs(&[1, 2, 3]);
        let c1 = cs(&[2, 3, 4]);
        let merged = KnowledgeState::merge(
            &[
                &KnowledgeState::initial(0, c0.clone()),
                &KnowledgeState::initial(1, c1),
            ],
            &[(0, 1)].into_iter().collect(),
        )
        .unwrap();
        let p = Permutation::from_seed(77, 4);
        for t in 1..=4 {
            assert_eq!(
                stick_together(&c0, &merged, &p, t, 4, 1, 3),
                pseudo_random_sweep(&c0, &p, t, 4)
            );
        }
    }

    // ------------------------------------------------------------------
    // random hop
    // ------------------------------------------------------------------

    #[test]
    fn random_hop_singleton_and_membership() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(random_hop(&cs(&[9]), &mut rng), 9);
        let set = cs(&[2, 4, 6]);
        for _ in 0..100 {
            assert!(set.contains(random_hop(&set, &mut rng)));
        }
    }

    #[test]
    fn random_hop_is_roughly_uniform() {
        let set = cs(&[1, 2]);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let draws = 10_000;
        let ones = (0..draws).filter(|_| random_hop(&set, &mut rng) == 1).count();
        let frac = ones as f64 / draws as f64;
        assert!((0.47..=0.53).contains(&frac), "got {frac}");
    }

    // ------------------------------------------------------------------
    // shared-permutation coincidence and the pair characterization
    // ------------------------------------------------------------------

    #[test]
    fn common_target_slot_synchronizes_every_rule() {
        // Whenever the permuted target lands in a channel available to all
        // users, forward replacement, pseudo-random sweep and stick-together
        // all return that target for every user.
        let sets = [cs(&[1, 2, 5, 8]), cs(&[2, 3, 5]), cs(&[2, 4, 5, 7])];
        let common = cs(&[2, 5]);
        let p = Permutation::from_seed(11, 8);
        let states: Vec<KnowledgeState> = sets
            .iter()
            .enumerate()
            .map(|(u, s)| KnowledgeState::initial(u, s.clone()))
            .collect();
        for t in 1..=8 {
            let target = p.apply(t);
            if !common.contains(target) {
                continue;
            }
            for (u, set) in sets.iter().enumerate() {
                assert_eq!(pseudo_random_sweep(set, &p, t, 8), target);
                assert_eq!(stick_together(set, &states[u], &p, t, 8, 1, 1), target);
            }
        }
        // Identity-permutation form of the same invariant for the plain
        // sweeps: at t in the common set every user tunes t.
        for t in 1..=8 {
            if !common.contains(t) {
                continue;
            }
            for set in &sets {
                assert_eq!(sweep_forward_replacement(set, t, 8), t);
                assert_eq!(sweep_basic(set, t), HopDecision::Tune(t));
            }
        }
    }

    #[test]
    fn pi_pair_rendezvous_characterization_exhaustive() {
        // Two users pick the same channel under a shared π iff the π-minimum
        // of c1 ∪ c2 lies in c1 ∩ c2. Exhaustive over all permutations and
        // set pairs for n = 5.
        let n: Channel = 5;
        let sets: Vec<ChannelSet> = (1u32..(1 << n))
            .map(|mask| cs(&(1..=n).filter(|c| mask & (1 << (c - 1)) != 0).collect::<Vec<_>>()))
            .collect();
        let mut perms = Vec::new();
        let mut labels: Vec<Channel> = (1..=n).collect();
        heap_permutations(&mut labels, n as usize, &mut perms);
        assert_eq!(perms.len(), 120);
        for forward in perms {
            let p = Permutation::from_forward(forward).unwrap();
            for a in &sets {
                for b in &sets {
                    let same = pi_algorithm(a, &p) == pi_algorithm(b, &p);
                    let union_min = a
                        .union(b)
                        .iter()
                        .min_by_key(|&c| p.apply(c))
                        .unwrap();
                    let predicted = a.contains(union_min) && b.contains(union_min);
                    assert_eq!(same, predicted);
                }
            }
        }
    }

    fn heap_permutations(labels: &mut Vec<Channel>, k: usize, out: &mut Vec<Vec<Channel>>) {
        if k == 1 {
            out.push(labels.clone());
            return;
        }
        for i in 0..k {
            heap_permutations(labels, k - 1, out);
            if k % 2 == 0 {
                labels.swap(i, k - 1);
            } else {
                labels.swap(0, k - 1);
            }
        }
    }

    // ------------------------------------------------------------------
    // AlgorithmSpec parsing
    // ------------------------------------------------------------------

    #[test]
    fn algorithm_strings_round_trip() {
        for s in [
            "sweep",
            "sweep-random",
            "sweep-forward",
            "pi",
            "prs",
            "stick:5,30",
            "random",
        ] {
            let spec: AlgorithmSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
    }

    #[test]
    fn bad_algorithm_strings_are_rejected() {
        assert!("swoop".parse::<AlgorithmSpec>().is_err());
        assert!("stick:5".parse::<AlgorithmSpec>().is_err());
        assert!("stick:0,3".parse::<AlgorithmSpec>().is_err());
        assert!("stick:a,b".parse::<AlgorithmSpec>().is_err());
    }

    #[test]
    fn membership_invariant_across_rules() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let p = Permutation::from_seed(4, 16);
        for mask in (1u32..(1 << 16)).step_by(997) {
            let members: Vec<Channel> = (1..=16).filter(|c| mask & (1 << (c - 1)) != 0).collect();
            if members.is_empty() {
                continue;
            }
            let set = cs(&members);
            let knowledge = KnowledgeState::initial(0, set.clone());
            for t in 1..=16 {
                if let HopDecision::Tune(c) = sweep_basic(&set, t) {
                    assert!(set.contains(c));
                }
                assert!(set.contains(sweep_random_replacement(&set, t, &mut rng)));
                assert!(set.contains(sweep_forward_replacement(&set, t, 16)));
                assert!(set.contains(pi_algorithm(&set, &p)));
                assert!(set.contains(pseudo_random_sweep(&set, &p, t, 16)));
                assert!(set.contains(stick_together(&set, &knowledge, &p, t, 16, 1, 1)));
                assert!(set.contains(random_hop(&set, &mut rng)));
            }
        }
    }
}
