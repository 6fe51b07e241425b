use std::fmt;
use std::sync::Arc;

use num_rational::Ratio;

use super::ModelError;

/// Channel label. Channels are globally numbered `1..=N`; label 0 is never
/// valid.
pub type Channel = u16;

/// An immutable, sorted set of channel labels.
///
/// The member list is shared behind an [`Arc`], so clones are cheap and the
/// set can be passed freely between knowledge states and worker threads.
/// Every iteration order is ascending, which keeps downstream computations
/// deterministic.
///
/// A set may be empty (intersections can produce empty sets); a *user's*
/// availability set must be non-empty, which [`super::Scenario::new`]
/// enforces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChannelSet {
    members: Arc<[Channel]>,
}

impl ChannelSet {
    /// Builds a set from arbitrary labels. Duplicates are collapsed; the
    /// label 0 is rejected.
    pub fn new(mut members: Vec<Channel>) -> Result<Self, ModelError> {
        if members.contains(&0) {
            return Err(ModelError::ZeroChannelLabel);
        }
        members.sort_unstable();
        members.dedup();
        Ok(Self {
            members: members.into(),
        })
    }

    /// The full set `{1..=n}`.
    pub fn full(n: Channel) -> Self {
        Self {
            members: (1..=n).collect(),
        }
    }

    pub fn empty() -> Self {
        Self {
            members: Arc::from([]),
        }
    }

    /// Internal constructor for lists already sorted, deduplicated and
    /// zero-free.
    pub(crate) fn from_sorted(members: Vec<Channel>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(!members.contains(&0));
        Self {
            members: members.into(),
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, channel: Channel) -> bool {
        self.members.binary_search(&channel).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = Channel> + '_ {
        self.members.iter().copied()
    }

    pub fn as_slice(&self) -> &[Channel] {
        &self.members
    }

    pub fn max_label(&self) -> Option<Channel> {
        self.members.last().copied()
    }

    /// True when both sets share the same backing allocation. Used as an
    /// equality fast path when merging knowledge.
    pub(crate) fn shares_backing(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.members, &other.members)
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.members.len() && j < other.members.len() {
            match self.members[i].cmp(&other.members[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    out.push(self.members[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        Self::from_sorted(out)
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < self.members.len() && j < other.members.len() {
            match self.members[i].cmp(&other.members[j]) {
                std::cmp::Ordering::Less => {
                    out.push(self.members[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(other.members[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push(self.members[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.members[i..]);
        out.extend_from_slice(&other.members[j..]);
        Self::from_sorted(out)
    }

    pub fn intersection_size(&self, other: &Self) -> usize {
        let (mut i, mut j, mut count) = (0, 0, 0);
        while i < self.members.len() && j < other.members.len() {
            match self.members[i].cmp(&other.members[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    count += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        count
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.intersection_size(other) == self.len()
    }

    /// Jaccard index `|a ∩ b| / |a ∪ b|` as an exact rational.
    ///
    /// Both sets must be non-empty. The exact representation lets callers
    /// compare against closed-form expectations (such as the inverse Jaccard
    /// index) without float drift; use [`Self::jaccard_f64`] for a float view.
    pub fn jaccard(&self, other: &Self) -> Result<Ratio<u64>, ModelError> {
        if self.is_empty() || other.is_empty() {
            return Err(ModelError::EmptyChannelSet);
        }
        let inter = self.intersection_size(other) as u64;
        let union = self.len() as u64 + other.len() as u64 - inter;
        Ok(Ratio::new(inter, union))
    }

    pub fn jaccard_f64(&self, other: &Self) -> Result<f64, ModelError> {
        let r = self.jaccard(other)?;
        Ok(*r.numer() as f64 / *r.denom() as f64)
    }
}

impl fmt::Display for ChannelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, c) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "}}")
    }
}

/// Intersection of every set in the collection. The collection must be
/// non-empty; the result may be empty.
pub fn intersect_all<'a, I>(sets: I) -> Result<ChannelSet, ModelError>
where
    I: IntoIterator<Item = &'a ChannelSet>,
{
    let mut it = sets.into_iter();
    let first = it.next().ok_or(ModelError::EmptySetList)?;
    let mut acc = first.clone();
    for set in it {
        if acc.is_empty() {
            break;
        }
        acc = acc.intersect(set);
    }
    Ok(acc)
}
